//! Property suites for the order core and the embeddability calculus.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use quasirep::atom::{atom_rel, Atom, AtomFamily, RelationLevel};
use quasirep::construction::pipeline;
use quasirep::order::{
    components, mutual_classes, quotient_pair, relation_r, relation_rdot, strict_order,
    transitive_envelope, validate_pair, ElementId, QuasiorderPair, Relation,
};
use quasirep::space::{embeds, embeds_quick, oracle_embeds, Count, SymbolicSpace};

use common::{ids, quasiorder_pairs_with_inclusion};

const LABELS: [&str; 6] = ["q0", "q1", "q2", "q3", "q4", "q5"];

fn label_slice(n: usize) -> &'static [&'static str] {
    &LABELS[..n]
}

fn off_diag(n: usize) -> Vec<(ElementId, ElementId)> {
    let mut out = Vec::new();
    for a in label_slice(n) {
        for b in label_slice(n) {
            if a != b {
                out.push((ElementId::new(*a), ElementId::new(*b)));
            }
        }
    }
    out
}

fn relation_from_mask(n: usize, mask: u64) -> Relation {
    let pairs = off_diag(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| p);
    Relation::from_pairs(ids(label_slice(n)), pairs, "generated").unwrap()
}

fn arb_relation() -> impl Strategy<Value = Relation> {
    (1usize..=6, any::<u64>()).prop_map(|(n, mask)| relation_from_mask(n, mask))
}

/// Random valid pair: close a random base for leq1 and a superset for leq2.
fn arb_pair() -> impl Strategy<Value = QuasiorderPair> {
    (1usize..=6, any::<u64>(), any::<u64>()).prop_map(|(n, mask1, mask2)| {
        let base1 = relation_from_mask(n, mask1);
        let extra = relation_from_mask(n, mask2);
        let pairs2: Vec<_> = base1.pairs().union(extra.pairs()).cloned().collect();
        validate_pair(
            ids(label_slice(n)),
            base1.pairs().iter().cloned().collect::<Vec<_>>(),
            pairs2,
            true,
        )
        .unwrap()
    })
}

/// Random small space over two indices and all families.
fn arb_space() -> impl Strategy<Value = SymbolicSpace> {
    let pool: Vec<Atom> = AtomFamily::ALL
        .into_iter()
        .flat_map(|f| ["x", "y"].map(|i| Atom::new(f, i)))
        .collect();
    proptest::collection::vec((0usize..16, 0u64..=3, any::<bool>()), 0..6).prop_map(move |picks| {
        SymbolicSpace::normalize(picks.into_iter().map(|(slot, count, omega)| {
            let atom = pool[slot].clone();
            let count = if omega { Count::Omega } else { Count::Finite(count) };
            (atom, count)
        }))
    })
}

/// Cardinal-arithmetic Hall condition over subsets of source atom types: the
/// independent route for the ω problem, with no finitization involved.
fn hall_feasible(x: &SymbolicSpace, y: &SymbolicSpace, level: RelationLevel) -> bool {
    let sources: Vec<(&Atom, Count)> = x.entries().iter().map(|(a, c)| (a, *c)).collect();
    assert!(sources.len() <= 20);
    if level == RelationLevel::Inj {
        return sources.iter().all(|(a, _)| y.atoms().any(|b| atom_rel(a, b) >= level));
    }
    for mask in 1u32..(1 << sources.len()) {
        let mut demand = Count::Finite(0);
        let mut neighborhood: BTreeSet<&Atom> = BTreeSet::new();
        for (i, (a, c)) in sources.iter().enumerate() {
            if mask & (1 << i) != 0 {
                demand = demand.plus(*c);
                neighborhood.extend(y.atoms().filter(|b| atom_rel(a, b) >= level));
            }
        }
        let supply = neighborhood
            .iter()
            .fold(Count::Finite(0), |acc, b| acc.plus(y.count(b).unwrap()));
        let fits = match (demand, supply) {
            (Count::Omega, Count::Omega) => true,
            (Count::Omega, Count::Finite(_)) => false,
            (Count::Finite(_), Count::Omega) => true,
            (Count::Finite(d), Count::Finite(s)) => d <= s,
        };
        if !fits {
            return false;
        }
    }
    true
}

proptest! {
    #[test]
    fn envelope_is_idempotent(rel in arb_relation()) {
        let once = transitive_envelope(&rel);
        prop_assert_eq!(transitive_envelope(&once), once);
    }

    #[test]
    fn envelope_is_monotone(rel in arb_relation(), extra_mask in any::<u64>()) {
        let n = rel.universe().len();
        let extra = relation_from_mask(n, extra_mask);
        let bigger = Relation::from_pairs(
            rel.universe().clone(),
            rel.pairs().union(extra.pairs()).cloned().collect::<Vec<_>>(),
            "generated",
        ).unwrap();
        prop_assert!(transitive_envelope(&rel).is_subset_of(&transitive_envelope(&bigger)));
    }

    #[test]
    fn mutual_classes_match_reachability_oracle(pair in arb_pair()) {
        // Oracle: q ~ q' iff each reaches the other along leq1 pairs. For a
        // transitive relation reachability is one lookup, so walk edges
        // explicitly to keep the route independent.
        let leq1 = pair.leq1();
        let classes = mutual_classes(leq1);
        let reaches = |from: &ElementId, to: &ElementId| -> bool {
            let mut seen = BTreeSet::new();
            let mut stack = vec![from.clone()];
            while let Some(e) = stack.pop() {
                if !seen.insert(e.clone()) {
                    continue;
                }
                if e == *to {
                    return true;
                }
                for (a, b) in leq1.pairs() {
                    if *a == e {
                        stack.push(b.clone());
                    }
                }
            }
            false
        };
        for a in pair.universe() {
            for b in pair.universe() {
                let same = classes.block_of(a) == classes.block_of(b);
                prop_assert_eq!(same, reaches(a, b) && reaches(b, a));
            }
        }
    }

    #[test]
    fn quotient_satisfies_antisymmetry(pair in arb_pair()) {
        let classes = mutual_classes(pair.leq1());
        let quotient = quotient_pair(&pair, &classes).unwrap();
        prop_assert!(quotient.leq1().is_antisymmetric());
        prop_assert!(quotient.leq1().is_subset_of(quotient.leq2()));
    }

    #[test]
    fn derived_relations_are_bounded(pair in arb_pair()) {
        let classes = mutual_classes(pair.leq1());
        let quotient = quotient_pair(&pair, &classes).unwrap();
        let strict = strict_order(&quotient).unwrap();
        prop_assert!(strict.is_subset_of(quotient.leq1()));
        let r = relation_r(&quotient, &strict);
        prop_assert!(r.is_subset_of(quotient.leq2()));
        let prec = transitive_envelope(&r);
        let rdot = relation_rdot(&quotient, &prec);
        for (a, b) in r.pairs() {
            if a != b {
                prop_assert!(rdot.contains(a, b));
            }
        }
    }

    #[test]
    fn component_partitions_nest_and_pipeline_never_raises(pair in arb_pair()) {
        let (state, _) = pipeline(&pair).unwrap();
        prop_assert!(state.components_c.refines(&state.components_l));
        prop_assert!(state.components_l.refines(&state.components_t));
        // Cross-check: the linkage components coincide with the mutual
        // comparability classes of leq2 on the quotient.
        let leq2_classes = mutual_classes(state.quotient.leq2());
        prop_assert_eq!(&leq2_classes, &state.components_l);
        // And the third-level components are the comparability components.
        let leq2_components = components(state.quotient.leq2());
        prop_assert_eq!(&leq2_components, &state.components_t);
    }

    #[test]
    fn embeds_is_monotone_in_level(x in arb_space(), y in arb_space()) {
        let clopen = embeds_quick(&x, &y, RelationLevel::Clopen).unwrap();
        let closed = embeds_quick(&x, &y, RelationLevel::Closed).unwrap();
        let inj = embeds_quick(&x, &y, RelationLevel::Inj).unwrap();
        prop_assert!(!clopen || closed);
        prop_assert!(!closed || inj);
    }

    #[test]
    fn embeds_is_reflexive(x in arb_space()) {
        for level in RelationLevel::EMBED_LEVELS {
            prop_assert!(embeds_quick(&x, &x, level).unwrap());
        }
    }

    #[test]
    fn coproduct_preserves_positive_verdicts(
        x in arb_space(),
        y in arb_space(),
        w in arb_space(),
    ) {
        for level in RelationLevel::EMBED_LEVELS {
            if embeds_quick(&x, &y, level).unwrap() {
                prop_assert!(embeds_quick(&x.coproduct(&w), &y.coproduct(&w), level).unwrap());
            }
        }
    }

    #[test]
    fn blocked_atom_stays_blocked_under_fresh_summands(x in arb_space(), w in arb_space()) {
        // A source atom with no injective target keeps the verdict negative
        // when the added summands provide no new targets for it.
        let y = SymbolicSpace::empty();
        prop_assume!(!x.is_empty());
        let blocked = x.atoms().next().unwrap().clone();
        let w_safe = SymbolicSpace::normalize(
            w.entries()
                .iter()
                .filter(|(b, _)| atom_rel(&blocked, b) == RelationLevel::None)
                .map(|(b, c)| (b.clone(), *c)),
        );
        prop_assert!(!embeds_quick(&x, &y.coproduct(&w_safe), RelationLevel::Inj).unwrap());
    }

    #[test]
    fn homeomorphic_spaces_embed_clopen_both_ways(x in arb_space()) {
        let y = x.clone();
        prop_assert!(quasirep::space::is_homeomorphic(&x, &y));
        prop_assert!(embeds_quick(&x, &y, RelationLevel::Clopen).unwrap());
        prop_assert!(embeds_quick(&y, &x, RelationLevel::Clopen).unwrap());
    }

    #[test]
    fn calculus_agrees_with_enumeration_oracle(x in arb_space(), y in arb_space()) {
        for level in RelationLevel::EMBED_LEVELS {
            let fast = embeds_quick(&x, &y, level).unwrap();
            let slow = oracle_embeds(&x, &y, level, 10_000).unwrap();
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn calculus_agrees_with_cardinal_hall_condition(x in arb_space(), y in arb_space()) {
        // Independent route for the ω handling: no finitization at all.
        for level in RelationLevel::EMBED_LEVELS {
            let fast = embeds_quick(&x, &y, level).unwrap();
            prop_assert_eq!(fast, hall_feasible(&x, &y, level));
        }
    }

    #[test]
    fn witnesses_account_for_every_copy(x in arb_space(), y in arb_space()) {
        for level in RelationLevel::EMBED_LEVELS {
            let (ok, witness) = embeds(&x, &y, level).unwrap();
            if !ok {
                prop_assert!(witness.is_none());
                continue;
            }
            let witness = witness.unwrap();
            for transfer in &witness.transfers {
                prop_assert!(atom_rel(&transfer.from, &transfer.to) >= level);
            }
            // Per source atom the transfers sum to its count.
            for (atom, count) in x.entries() {
                let total = witness
                    .transfers
                    .iter()
                    .filter(|t| t.from == *atom)
                    .fold(Count::Finite(0), |acc, t| acc.plus(t.count));
                prop_assert_eq!(total, *count);
            }
            // Per target atom the received copies respect the capacity rule.
            if level != RelationLevel::Inj {
                for (atom, count) in y.entries() {
                    let received = witness
                        .transfers
                        .iter()
                        .filter(|t| t.to == *atom)
                        .fold(Count::Finite(0), |acc, t| acc.plus(t.count));
                    prop_assert!(received <= *count);
                }
            }
        }
    }
}

/// Exhaustive check over every quasiorder pair on up to four elements: the
/// pipeline never signals an antisymmetry violation on the block order. The
/// enumerator itself is cross-checked against the independent filtering
/// route at every size.
#[test]
fn pipeline_is_total_on_all_pairs_up_to_four_elements() {
    for n in 1..=4usize {
        let labels = label_slice(n);
        let universe = ids(labels);
        assert_eq!(
            common::quasiorders_by_closure(labels),
            common::quasiorders_by_filter(labels)
        );
        let mut count = 0usize;
        for (p1, p2) in quasiorder_pairs_with_inclusion(labels) {
            let pair = validate_pair(universe.clone(), p1, p2, false).unwrap();
            let (state, _) = pipeline(&pair).expect("pipeline is total on valid pairs");
            assert!(state.l_order.pairs().len() >= state.components_l.len());
            count += 1;
        }
        assert!(count > 0);
        if n == 3 {
            // 29 quasiorders on three labeled elements.
            assert_eq!(common::quasiorders_by_closure(labels).len(), 29);
        }
    }
}
