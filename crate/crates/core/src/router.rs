//! Greedy stochastic SWAP insertion.
//!
//! Gates are processed strictly in program order. When a two-qubit gate acts
//! on non-adjacent nodes, every edge of the coupling graph is scored by how
//! much swapping across it would shrink the distance between the gate's two
//! nodes. Only strictly positive scores are kept, one of the best is drawn
//! uniformly at random, and the process repeats until the pair is adjacent.
//! Nothing looks past the blocked gate.
//!
//! Restart `i` draws from a ChaCha8 stream seeded with `base_seed + i`
//! (wrapping), so every schedule is reproducible on its own.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::topology::{distances, line, snake_order, Placement, SnakeOrientation, Topology, TopologyKind};

pub const DEFAULT_RESTARTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("topology is disconnected; gate on nodes {0} and {1} cannot be routed")]
    Unroutable(usize, usize),
    #[error("no SWAP reduces the distance between nodes {0} and {1}")]
    Stuck(usize, usize),
    #[error("circuit needs {circuit} qubits but the topology has {nodes} nodes")]
    TooWide { circuit: usize, nodes: usize },
    #[error("placement covers {placement} nodes, topology has {nodes}")]
    PlacementSize { placement: usize, nodes: usize },
    #[error("no initial placements given")]
    NoPlacements,
    #[error("restart count must be >= 1")]
    NoRestarts,
}

/// Where the winning schedule came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteOrigin {
    /// Index into the placement list handed to the router.
    Placement(usize),
    /// The best line schedule, embedded along a horizontal snake.
    LineEmbedding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult {
    pub swap_count: usize,
    /// Original gates plus inserted SWAPs, on physical nodes.
    pub circuit: Circuit,
    pub initial_placement: Placement,
    pub final_placement: Placement,
    pub seed: u64,
    pub origin: RouteOrigin,
}

/// A topology with its distance table.
#[derive(Debug, Clone)]
pub struct Router<'a> {
    topology: &'a Topology,
    dist: Vec<Vec<usize>>,
}

impl<'a> Router<'a> {
    pub fn new(topology: &'a Topology) -> Self {
        Router {
            topology,
            dist: distances(topology),
        }
    }

    pub fn topology(&self) -> &Topology {
        self.topology
    }

    fn check(&self, c: &Circuit, p0: &Placement) -> Result<(), RouteError> {
        let nodes = self.topology.node_count();
        if c.width() > nodes {
            return Err(RouteError::TooWide {
                circuit: c.width(),
                nodes,
            });
        }
        if p0.len() != nodes {
            return Err(RouteError::PlacementSize {
                placement: p0.len(),
                nodes,
            });
        }
        Ok(())
    }

    /// Routes once. With `emit` unset no circuit is built, and the run gives
    /// up as soon as it has inserted more than `cutoff` SWAPs.
    fn run(
        &self,
        c: &Circuit,
        p0: &Placement,
        seed: u64,
        emit: bool,
        cutoff: &AtomicUsize,
    ) -> Result<Option<(usize, Circuit, Placement)>, RouteError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut placement = p0.clone();
        let nodes = self.topology.node_count();
        let mut out = Circuit::new(if emit { nodes } else { 0 });
        let mut out_gates = Vec::new();
        let mut swaps = 0usize;
        let mut best_edges: Vec<(usize, usize)> = Vec::new();

        for gate in c.gates() {
            if gate.is_two_qubit() {
                let qs = gate.qubits();
                let (a, b) = (qs[0], qs[1]);
                loop {
                    let (na, nb) = (placement.node_of(a), placement.node_of(b));
                    let current = self.dist[na][nb];
                    if current == usize::MAX {
                        return Err(RouteError::Unroutable(na, nb));
                    }
                    if current <= 1 {
                        break;
                    }
                    let mut best = 0usize;
                    best_edges.clear();
                    for &(u, v) in self.topology.edges() {
                        let moved = |x: usize| {
                            if x == u {
                                v
                            } else if x == v {
                                u
                            } else {
                                x
                            }
                        };
                        let after = self.dist[moved(na)][moved(nb)];
                        if after >= current {
                            continue;
                        }
                        let utility = current - after;
                        if utility > best {
                            best = utility;
                            best_edges.clear();
                        }
                        if utility == best {
                            best_edges.push((u, v));
                        }
                    }
                    if best_edges.is_empty() {
                        return Err(RouteError::Stuck(na, nb));
                    }
                    let (u, v) = best_edges[rng.gen_range(0..best_edges.len())];
                    placement.swap_nodes(u, v);
                    swaps += 1;
                    if emit {
                        out_gates.push(Gate::Swap(u, v));
                    } else if swaps > cutoff.load(Ordering::Relaxed) {
                        return Ok(None);
                    }
                }
            }
            if emit {
                out_gates.push(gate.remap(|q| placement.node_of(q)));
            }
        }
        if emit {
            for g in out_gates {
                out.push(g).expect("routed operands are physical nodes");
            }
        }
        Ok(Some((swaps, out, placement)))
    }

    pub fn route_once(
        &self,
        c: &Circuit,
        p0: &Placement,
        seed: u64,
    ) -> Result<RouteResult, RouteError> {
        self.check(c, p0)?;
        let no_cutoff = AtomicUsize::new(usize::MAX);
        let (swap_count, circuit, final_placement) = self
            .run(c, p0, seed, true, &no_cutoff)?
            .expect("emitting runs are never cut off");
        Ok(RouteResult {
            swap_count,
            circuit,
            initial_placement: p0.clone(),
            final_placement,
            seed,
            origin: RouteOrigin::Placement(0),
        })
    }

    /// Best of `restarts` schedules from each placement. Ties go to the
    /// earliest placement, then the lowest restart index.
    pub fn route_best(
        &self,
        c: &Circuit,
        placements: &[Placement],
        restarts: usize,
        base_seed: u64,
    ) -> Result<RouteResult, RouteError> {
        if placements.is_empty() {
            return Err(RouteError::NoPlacements);
        }
        if restarts == 0 {
            return Err(RouteError::NoRestarts);
        }
        for p in placements {
            self.check(c, p)?;
        }
        let cutoff = AtomicUsize::new(usize::MAX);
        let jobs: Vec<(usize, usize)> = (0..placements.len())
            .flat_map(|j| (0..restarts).map(move |i| (j, i)))
            .collect();
        let outcomes: Vec<Result<Option<(usize, usize, usize)>, RouteError>> = jobs
            .par_iter()
            .map(|&(j, i)| {
                let seed = base_seed.wrapping_add(i as u64);
                let res = self.run(c, &placements[j], seed, false, &cutoff)?;
                Ok(res.map(|(swaps, _, _)| {
                    cutoff.fetch_min(swaps, Ordering::Relaxed);
                    (swaps, j, i)
                }))
            })
            .collect();
        let mut best: Option<(usize, usize, usize)> = None;
        for o in outcomes {
            if let Some(key) = o? {
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, j, i) = best.expect("at least one run completes under its own cutoff");
        let mut result = self.route_once(c, &placements[j], base_seed.wrapping_add(i as u64))?;
        result.origin = RouteOrigin::Placement(j);
        Ok(result)
    }

    /// Like [`route_best`](Self::route_best), but ladders and grids also
    /// consider the best line schedule embedded along a horizontal snake.
    /// The line schedule is a valid host schedule, so the result never uses
    /// more SWAPs than routing on a line.
    pub fn route_best_with_fallback(
        &self,
        c: &Circuit,
        placements: &[Placement],
        restarts: usize,
        base_seed: u64,
    ) -> Result<RouteResult, RouteError> {
        let own = self.route_best(c, placements, restarts, base_seed)?;
        if !matches!(
            self.topology.kind(),
            TopologyKind::Ladder | TopologyKind::Grid
        ) {
            return Ok(own);
        }
        let chain = line(c.width());
        let line_best = Router::new(&chain).route_best(
            c,
            &[Placement::identity(chain.node_count())],
            restarts,
            base_seed,
        )?;
        if line_best.swap_count < own.swap_count {
            Ok(self.embed_line_result(&line_best))
        } else {
            Ok(own)
        }
    }

    fn embed_line_result(&self, r: &RouteResult) -> RouteResult {
        let snake = snake_order(self.topology, SnakeOrientation::Horizontal);
        let n = r.initial_placement.len();
        let lift = |p: &Placement| {
            let mut nodes = snake.clone();
            for (j, slot) in nodes.iter_mut().enumerate().take(n) {
                *slot = snake[p.node_of(j)];
            }
            Placement::from_nodes(nodes).expect("lifted placement is a permutation")
        };
        let gates = r.circuit.gates().iter().map(|g| g.remap(|q| snake[q])).collect();
        RouteResult {
            swap_count: r.swap_count,
            circuit: Circuit::from_gates(self.topology.node_count(), gates)
                .expect("snake nodes are in range"),
            initial_placement: lift(&r.initial_placement),
            final_placement: lift(&r.final_placement),
            seed: r.seed,
            origin: RouteOrigin::LineEmbedding,
        }
    }

    /// Minimum-SWAP routing by breadth-first search over placements, for
    /// tiny instances. Returns `Ok(None)` once more than `budget` states have
    /// been expanded.
    pub fn optimal_route(
        &self,
        c: &Circuit,
        p0: &Placement,
        budget: usize,
    ) -> Result<Option<RouteResult>, RouteError> {
        self.check(c, p0)?;
        let gates = c.gates();
        // run every gate that is ready without moving anything
        let advance = |mut g: usize, p: &Placement| -> Result<usize, RouteError> {
            while g < gates.len() {
                if gates[g].is_two_qubit() {
                    let qs = gates[g].qubits();
                    let (na, nb) = (p.node_of(qs[0]), p.node_of(qs[1]));
                    match self.dist[na][nb] {
                        usize::MAX => return Err(RouteError::Unroutable(na, nb)),
                        d if d > 1 => break,
                        _ => {}
                    }
                }
                g += 1;
            }
            Ok(g)
        };

        struct Node {
            gate: usize,
            placement: Placement,
            parent: Option<(usize, (usize, usize))>,
        }
        let start = advance(0, p0)?;
        let mut arena = vec![Node {
            gate: start,
            placement: p0.clone(),
            parent: None,
        }];
        let mut seen: HashMap<(usize, Placement), usize> = HashMap::new();
        seen.insert((start, p0.clone()), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut expanded = 0usize;
        let goal = loop {
            let Some(id) = queue.pop_front() else {
                unreachable!("a connected topology always reaches the end of the circuit");
            };
            if arena[id].gate == gates.len() {
                break id;
            }
            expanded += 1;
            if expanded > budget {
                return Ok(None);
            }
            for &(u, v) in self.topology.edges() {
                let mut p = arena[id].placement.clone();
                p.swap_nodes(u, v);
                let g = advance(arena[id].gate, &p)?;
                let key = (g, p);
                if seen.contains_key(&key) {
                    continue;
                }
                let child = arena.len();
                seen.insert(key.clone(), child);
                arena.push(Node {
                    gate: key.0,
                    placement: key.1,
                    parent: Some((id, (u, v))),
                });
                queue.push_back(child);
            }
        };

        let mut swaps = Vec::new();
        let mut cursor = goal;
        while let Some((parent, edge)) = arena[cursor].parent {
            swaps.push(edge);
            cursor = parent;
        }
        swaps.reverse();

        // replay: run ready gates, then take the next recorded SWAP
        let mut placement = p0.clone();
        let mut out = Circuit::new(self.topology.node_count());
        let mut g = 0;
        let mut pending = swaps.iter();
        loop {
            let ready = advance(g, &placement)?;
            for gate in &gates[g..ready] {
                out.push(gate.remap(|q| placement.node_of(q)))
                    .expect("physical operands");
            }
            g = ready;
            match pending.next() {
                Some(&(u, v)) => {
                    placement.swap_nodes(u, v);
                    out.push(Gate::Swap(u, v)).expect("edge operands");
                }
                None => break,
            }
        }
        debug_assert_eq!(g, gates.len());
        Ok(Some(RouteResult {
            swap_count: swaps.len(),
            circuit: out,
            initial_placement: p0.clone(),
            final_placement: placement,
            seed: 0,
            origin: RouteOrigin::Placement(0),
        }))
    }
}

pub fn route_once(
    c: &Circuit,
    t: &Topology,
    p0: &Placement,
    seed: u64,
) -> Result<RouteResult, RouteError> {
    Router::new(t).route_once(c, p0, seed)
}

pub fn route_best(
    c: &Circuit,
    t: &Topology,
    placements: &[Placement],
    restarts: usize,
    base_seed: u64,
) -> Result<RouteResult, RouteError> {
    Router::new(t).route_best(c, placements, restarts, base_seed)
}

pub fn optimal_route(
    c: &Circuit,
    t: &Topology,
    p0: &Placement,
    budget: usize,
) -> Result<Option<RouteResult>, RouteError> {
    Router::new(t).optimal_route(c, p0, budget)
}

/// True when every two-qubit gate acts on an edge of `t`.
pub fn respects_topology(c: &Circuit, t: &Topology) -> bool {
    c.gates().iter().all(|g| {
        let qs = g.qubits();
        qs.len() < 2 || t.adjacent(qs[0], qs[1])
    })
}
