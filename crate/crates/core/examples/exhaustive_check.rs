//! Enumerate every quasiorder pair on a two-element set and verify the
//! construction for each one.

use std::collections::BTreeSet;

use quasirep::construction::construct;
use quasirep::order::{transitive_envelope, validate_pair, ElementId, Relation};
use quasirep::verifier::verify_quick;

type PairSet = BTreeSet<(ElementId, ElementId)>;

fn quasiorders(labels: &[&str]) -> Vec<PairSet> {
    let universe: BTreeSet<ElementId> = labels.iter().map(|l| ElementId::new(*l)).collect();
    let mut off_diag = Vec::new();
    for a in labels {
        for b in labels {
            if a != b {
                off_diag.push((ElementId::new(*a), ElementId::new(*b)));
            }
        }
    }
    let mut seen = BTreeSet::new();
    for mask in 0..(1u32 << off_diag.len()) {
        let pairs = off_diag
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone());
        let rel = Relation::from_pairs(universe.clone(), pairs, "enumeration").unwrap();
        let closed = transitive_envelope(&rel.reflexive_closure()).reflexive_closure();
        seen.insert(closed.pairs().clone());
    }
    seen.into_iter().collect()
}

fn main() {
    let labels = ["a", "b"];
    let universe: BTreeSet<ElementId> = labels.iter().map(|l| ElementId::new(*l)).collect();
    let all = quasiorders(&labels);
    println!("{} quasiorders on two elements", all.len());

    let mut checked = 0;
    let mut passed = 0;
    for leq1 in &all {
        for leq2 in &all {
            if !leq1.is_subset(leq2) {
                continue;
            }
            let pair =
                validate_pair(universe.clone(), leq1.clone(), leq2.clone(), false).unwrap();
            let construction = construct(&pair).unwrap();
            let report = verify_quick(&pair, &construction);
            checked += 1;
            if report.pass {
                passed += 1;
            } else {
                println!("FAILED: leq1={leq1:?} leq2={leq2:?}");
            }
        }
    }
    println!("verified {passed}/{checked} inclusion pairs");
}
