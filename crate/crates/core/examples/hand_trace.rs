//! Build the spaces for a three-element pair by hand and verify them.
//!
//! The pair: a ≤₁ b, and additionally b ≤₂ a, with c unrelated. The first
//! relation shows up as one-way clopen embeddability, the second as two-way
//! closed embeddability, and c's isolation as the absence of any injective
//! map in either direction.

use quasirep::construction::construct;
use quasirep::order::{validate_pair, ElementId};
use quasirep::verifier::verify;

fn main() {
    let e = |l: &str| ElementId::new(l);
    let universe = ["a", "b", "c"].map(ElementId::new).into_iter().collect();
    let pair = validate_pair(
        universe,
        [(e("a"), e("b"))],
        [(e("a"), e("b")), (e("b"), e("a"))],
        false,
    )
    .expect("the example pair is valid");

    let construction = construct(&pair).expect("the pipeline is total on valid pairs");
    println!("spaces:");
    for (q, space) in &construction.spaces {
        let atoms: Vec<String> =
            space.entries().iter().map(|(a, c)| format!("{a}:{c}")).collect();
        println!("  X({q}) = {{ {} }}", atoms.join(", "));
    }
    println!("ambient has {} summand families", construction.ambient.len());

    let report = verify(&pair, &construction);
    println!("\nverdicts (source -> target: clopen/closed/inj):");
    for v in &report.verdicts {
        println!(
            "  {} -> {}: {}/{}/{}  (leq1={}, leq2={})",
            v.source, v.target, v.clopen, v.closed, v.inj, v.leq1, v.leq2
        );
    }
    println!("\noverall: {}", if report.pass { "PASS" } else { "FAIL" });
}
