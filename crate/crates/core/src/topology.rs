//! Hardware coupling graphs and initial placements.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("unknown topology {0:?} (expected line, ladder, grid or full)")]
    UnknownKind(String),
    #[error("unknown placement {0:?} (expected identity, hsnake, vsnake or all)")]
    UnknownPlacement(String),
    #[error("placement is not a permutation of {0} nodes")]
    NotPermutation(usize),
    #[error("topology needs at least one node")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopologyKind {
    Line,
    Ladder,
    Grid,
    Full,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::Line,
        TopologyKind::Ladder,
        TopologyKind::Grid,
        TopologyKind::Full,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TopologyKind::Line => "line",
            TopologyKind::Ladder => "ladder",
            TopologyKind::Grid => "grid",
            TopologyKind::Full => "full",
        }
    }

    /// Builds the topology hosting `n` program qubits.
    pub fn build(&self, n: usize) -> Topology {
        match self {
            TopologyKind::Line => line(n),
            TopologyKind::Ladder => ladder(n),
            TopologyKind::Grid => grid(n),
            TopologyKind::Full => full(n),
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyKind {
    type Err = TopologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "line" | "linear" => Ok(TopologyKind::Line),
            "ladder" => Ok(TopologyKind::Ladder),
            "grid" | "square" => Ok(TopologyKind::Grid),
            "full" | "all-to-all" => Ok(TopologyKind::Full),
            _ => Err(TopologyError::UnknownKind(s.to_string())),
        }
    }
}

/// An undirected coupling graph. Nodes of ladders and grids are laid out
/// row-major: node `r * cols + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    kind: TopologyKind,
    rows: usize,
    cols: usize,
    nodes: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<bool>>,
}

impl Topology {
    fn from_edges(
        kind: TopologyKind,
        rows: usize,
        cols: usize,
        nodes: usize,
        mut edges: Vec<(usize, usize)>,
    ) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![vec![false; nodes]; nodes];
        for &(a, b) in &edges {
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Topology {
            kind,
            rows,
            cols,
            nodes,
            edges,
            adjacency,
        }
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[a]
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| e.then_some(i))
    }

    pub fn is_connected(&self) -> bool {
        self.nodes == 0 || bfs(self, 0).iter().all(|d| d.is_some())
    }
}

pub fn line(n: usize) -> Topology {
    let n = n.max(1);
    Topology::from_edges(
        TopologyKind::Line,
        1,
        n,
        n,
        (1..n).map(|i| (i - 1, i)).collect(),
    )
}

/// Two rails of `ceil(n / 2)` nodes joined by rungs.
pub fn ladder(n: usize) -> Topology {
    let cols = n.max(1).div_ceil(2);
    Topology::from_edges(
        TopologyKind::Ladder,
        2,
        cols,
        2 * cols,
        lattice_edges(2, cols),
    )
}

/// A square grid of side `ceil(sqrt(n))`.
pub fn grid(n: usize) -> Topology {
    let n = n.max(1);
    let mut side = (n as f64).sqrt() as usize;
    while side * side < n {
        side += 1;
    }
    while side > 1 && (side - 1) * (side - 1) >= n {
        side -= 1;
    }
    Topology::from_edges(
        TopologyKind::Grid,
        side,
        side,
        side * side,
        lattice_edges(side, side),
    )
}

pub fn full(n: usize) -> Topology {
    let n = n.max(1);
    let edges = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    Topology::from_edges(TopologyKind::Full, 1, n, n, edges)
}

fn lattice_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges
}

fn bfs(t: &Topology, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; t.node_count()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].expect("visited");
        for u in t.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(dv + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// All-pairs shortest-path lengths. Unreachable pairs are `usize::MAX`.
pub fn distances(t: &Topology) -> Vec<Vec<usize>> {
    (0..t.node_count())
        .map(|s| {
            bfs(t, s)
                .into_iter()
                .map(|d| d.unwrap_or(usize::MAX))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlacementKind {
    Identity,
    HorizontalSnake,
    VerticalSnake,
}

impl PlacementKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlacementKind::Identity => "identity",
            PlacementKind::HorizontalSnake => "hsnake",
            PlacementKind::VerticalSnake => "vsnake",
        }
    }

    /// Parses a CLI token; `all` expands to every kind.
    pub fn parse_list(s: &str) -> Result<Vec<PlacementKind>, TopologyError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" => Ok(vec![PlacementKind::Identity]),
            "hsnake" => Ok(vec![PlacementKind::HorizontalSnake]),
            "vsnake" => Ok(vec![PlacementKind::VerticalSnake]),
            "all" => Ok(vec![
                PlacementKind::Identity,
                PlacementKind::HorizontalSnake,
                PlacementKind::VerticalSnake,
            ]),
            _ => Err(TopologyError::UnknownPlacement(s.to_string())),
        }
    }

    pub fn build(&self, t: &Topology) -> Placement {
        match self {
            PlacementKind::Identity => Placement::identity(t.node_count()),
            PlacementKind::HorizontalSnake => snake_placement(t, SnakeOrientation::Horizontal),
            PlacementKind::VerticalSnake => snake_placement(t, SnakeOrientation::Vertical),
        }
    }
}

impl fmt::Display for PlacementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnakeOrientation {
    Horizontal,
    Vertical,
}

/// Program qubit `j` sits on physical node `node_of(j)`.
///
/// A placement covers every physical node; program indices beyond a
/// circuit's width stand for idle nodes and move like any other qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    program_to_node: Vec<usize>,
    node_to_program: Vec<usize>,
}

impl Placement {
    pub fn identity(n: usize) -> Self {
        Placement {
            program_to_node: (0..n).collect(),
            node_to_program: (0..n).collect(),
        }
    }

    pub fn from_nodes(program_to_node: Vec<usize>) -> Result<Self, TopologyError> {
        let n = program_to_node.len();
        let mut node_to_program = vec![usize::MAX; n];
        for (p, &v) in program_to_node.iter().enumerate() {
            if v >= n || node_to_program[v] != usize::MAX {
                return Err(TopologyError::NotPermutation(n));
            }
            node_to_program[v] = p;
        }
        Ok(Placement {
            program_to_node,
            node_to_program,
        })
    }

    pub fn len(&self) -> usize {
        self.program_to_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.program_to_node.is_empty()
    }

    pub fn node_of(&self, program: usize) -> usize {
        self.program_to_node[program]
    }

    pub fn program_at(&self, node: usize) -> usize {
        self.node_to_program[node]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.program_to_node
    }

    /// Exchanges whatever sits on nodes `a` and `b`.
    pub fn swap_nodes(&mut self, a: usize, b: usize) {
        let (pa, pb) = (self.node_to_program[a], self.node_to_program[b]);
        self.node_to_program.swap(a, b);
        self.program_to_node[pa] = b;
        self.program_to_node[pb] = a;
    }
}

/// Node sequence of a boustrophedon walk over the topology's layout.
pub fn snake_order(t: &Topology, orientation: SnakeOrientation) -> Vec<usize> {
    if matches!(t.kind(), TopologyKind::Line | TopologyKind::Full) {
        return (0..t.node_count()).collect();
    }
    let (rows, cols) = (t.rows(), t.cols());
    let mut order = Vec::with_capacity(t.node_count());
    match orientation {
        SnakeOrientation::Horizontal => {
            for r in 0..rows {
                let cs: Box<dyn Iterator<Item = usize>> = if r % 2 == 0 {
                    Box::new(0..cols)
                } else {
                    Box::new((0..cols).rev())
                };
                order.extend(cs.map(|c| r * cols + c));
            }
        }
        SnakeOrientation::Vertical => {
            for c in 0..cols {
                let rs: Box<dyn Iterator<Item = usize>> = if c % 2 == 0 {
                    Box::new(0..rows)
                } else {
                    Box::new((0..rows).rev())
                };
                order.extend(rs.map(|r| r * cols + c));
            }
        }
    }
    order
}

pub fn snake_placement(t: &Topology, orientation: SnakeOrientation) -> Placement {
    Placement::from_nodes(snake_order(t, orientation)).expect("snake visits every node once")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(line(4).edges(), &[(0, 1), (1, 2), (2, 3)]);
        let g = grid(10);
        assert_eq!((g.rows(), g.cols(), g.node_count()), (4, 4, 16));
        assert_eq!(grid(9).node_count(), 9);
        assert_eq!(grid(1).node_count(), 1);
        assert_eq!(full(5).edges().len(), 10);
        let l = ladder(5);
        assert_eq!(l.node_count(), 6);
        // 2 rails of 2 edges + 3 rungs
        assert_eq!(l.edges().len(), 7);
        for kind in TopologyKind::ALL {
            for n in 1..12 {
                let t = kind.build(n);
                assert!(t.node_count() >= n);
                assert!(t.is_connected());
            }
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distances(&line(5))[0][4], 4);
        let f = distances(&full(6));
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(f[a][b], usize::from(a != b));
            }
        }
        // top-left (0) to bottom-right (5) on a 2x3 ladder
        assert_eq!(distances(&ladder(6))[0][5], 3);
    }

    #[test]
    fn ladder_horizontal_snake() {
        let p = snake_placement(&ladder(6), SnakeOrientation::Horizontal);
        assert_eq!(p.as_slice(), &[0, 1, 2, 5, 4, 3]);
        let v = snake_placement(&ladder(6), SnakeOrientation::Vertical);
        assert_eq!(v.as_slice(), &[0, 3, 4, 1, 2, 5]);
    }

    #[test]
    fn grid_horizontal_snake() {
        let p = snake_placement(&grid(9), SnakeOrientation::Horizontal);
        assert_eq!(p.as_slice(), &[0, 1, 2, 5, 4, 3, 6, 7, 8]);
    }

    #[test]
    fn line_placements_are_identity() {
        let t = line(5);
        for kind in PlacementKind::parse_list("all").unwrap() {
            assert_eq!(kind.build(&t), Placement::identity(5));
        }
    }

    #[test]
    fn snakes_are_hamiltonian_paths() {
        for kind in [TopologyKind::Ladder, TopologyKind::Grid] {
            for n in 2..30 {
                let t = kind.build(n);
                for o in [SnakeOrientation::Horizontal, SnakeOrientation::Vertical] {
                    let order = snake_order(&t, o);
                    assert_eq!(order.len(), t.node_count());
                    for w in order.windows(2) {
                        assert!(t.adjacent(w[0], w[1]), "{kind} n={n} {o:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn placement_swaps() {
        let mut p = Placement::identity(3);
        p.swap_nodes(0, 2);
        assert_eq!(p.node_of(0), 2);
        assert_eq!(p.program_at(0), 2);
        assert!(Placement::from_nodes(vec![0, 0, 1]).is_err());
        assert!(Placement::from_nodes(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn tokens() {
        assert_eq!("ladder".parse::<TopologyKind>().unwrap(), TopologyKind::Ladder);
        assert!("ring".parse::<TopologyKind>().is_err());
        assert!(PlacementKind::parse_list("zigzag").is_err());
    }
}
