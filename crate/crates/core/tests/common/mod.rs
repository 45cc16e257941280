//! Shared helpers for the integration suites: small-universe enumeration of
//! quasiorders by two independent routes.

use std::collections::BTreeSet;

use quasirep::order::{transitive_envelope, ElementId, Relation};

pub fn ids(labels: &[&str]) -> BTreeSet<ElementId> {
    labels.iter().map(|l| ElementId::new(*l)).collect()
}

pub type PairSet = BTreeSet<(ElementId, ElementId)>;

fn off_diagonal(labels: &[&str]) -> Vec<(ElementId, ElementId)> {
    let mut out = Vec::new();
    for a in labels {
        for b in labels {
            if a != b {
                out.push((ElementId::new(*a), ElementId::new(*b)));
            }
        }
    }
    out
}

fn subset_relation(labels: &[&str], off_diag: &[(ElementId, ElementId)], mask: u32) -> Relation {
    let universe = ids(labels);
    let pairs = off_diag
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| p.clone());
    Relation::from_pairs(universe, pairs, "enumeration").unwrap()
}

/// Every quasiorder on `labels`, produced by closing every subset of the
/// off-diagonal pairs and deduplicating.
pub fn quasiorders_by_closure(labels: &[&str]) -> BTreeSet<PairSet> {
    let off_diag = off_diagonal(labels);
    assert!(off_diag.len() <= 30, "enumeration is meant for tiny universes");
    let mut out = BTreeSet::new();
    for mask in 0..(1u32 << off_diag.len()) {
        let rel = subset_relation(labels, &off_diag, mask).reflexive_closure();
        let closed = transitive_envelope(&rel).reflexive_closure();
        out.insert(closed.pairs().clone());
    }
    out
}

/// Every quasiorder on `labels`, produced independently by filtering every
/// reflexive relation for transitivity.
pub fn quasiorders_by_filter(labels: &[&str]) -> BTreeSet<PairSet> {
    let off_diag = off_diagonal(labels);
    assert!(off_diag.len() <= 30, "enumeration is meant for tiny universes");
    let mut out = BTreeSet::new();
    for mask in 0..(1u32 << off_diag.len()) {
        let rel = subset_relation(labels, &off_diag, mask).reflexive_closure();
        if rel.is_transitive() {
            out.insert(rel.pairs().clone());
        }
    }
    out
}

/// All ordered pairs (leq1, leq2) of quasiorders with leq1 ⊆ leq2.
pub fn quasiorder_pairs_with_inclusion(labels: &[&str]) -> Vec<(PairSet, PairSet)> {
    let all: Vec<PairSet> = quasiorders_by_closure(labels).into_iter().collect();
    let mut out = Vec::new();
    for p1 in &all {
        for p2 in &all {
            if p1.is_subset(p2) {
                out.push((p1.clone(), p2.clone()));
            }
        }
    }
    out
}
