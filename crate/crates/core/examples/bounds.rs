//! Closed-form SWAP bounds: the inversion table for banded unary operators,
//! compact-code bounds by register size, and a full report as JSON.

use qudit_route::bounds::{
    all_strings_bound, all_strings_lower, bound_report, grouped_ordering, inversion_count,
    single_term_bound, unary_crossover, unary_inversion_bound, unary_linear_bound, BoundOptions,
};
use qudit_route::codes::EncodingScheme;
use qudit_route::operators::OperatorName;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for w in [2, 3] {
        let order = grouped_ordering(w, 12)?;
        let shown: Vec<usize> = order.iter().map(|x| x + 1).collect();
        println!("w={w}: {shown:?} -> {} inversions", inversion_count(&order));
    }

    println!("\n  d  w=2 inversion  w=2 linear");
    for d in [8, 16, 24, 32, 40] {
        println!("{d:>3}  {:>13}  {:>10}", unary_inversion_bound(2, d), unary_linear_bound(2, d));
    }
    println!("linear bound wins from d = {:?}", unary_crossover(2, 100));

    println!("\n K  single(h=1)  all strings  lower");
    for k in 2..=8 {
        println!(
            "{k:>2}  {:>11}  {:>11}  {:>5}",
            single_term_bound(1, k)?,
            all_strings_bound(k),
            all_strings_lower(k)
        );
    }

    let d = 16;
    let h = OperatorName::Q2.build(d)?;
    let report = bound_report(OperatorName::Q2, &h, &EncodingScheme::gray(d)?, BoundOptions::default())?;
    println!("\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
