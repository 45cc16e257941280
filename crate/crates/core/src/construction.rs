//! The staged construction: from a validated quasiorder pair to one symbolic
//! space per element plus the ambient space containing them all as clopen
//! pieces.
//!
//! The pipeline quotients the pair by mutual leq1-comparability, derives the
//! strict order and the two linkage relations with their component partitions,
//! then assembles spaces in four stages. Each stage only adds summands:
//!
//! * stage 1 separates elements inside one strict-order component with the
//!   A/B system;
//! * stage 2 makes distinct components of one linkage block mutually closed-
//!   but-not-clopen with the D/E system (ω copies);
//! * the tilde stage pulls in every block strictly below in the block order;
//! * stage 3 pins down the leq1 direction across a whole third-level
//!   component with the M/N system;
//! * the final lift distinguishes mutually equivalent elements with G/H.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::{Atom, AtomFamily, AtomRegistry};
use crate::order::{
    components, mutual_classes, order_on_components, quotient_pair, relation_r, relation_rdot,
    strict_order, transitive_envelope, BlockId, ComponentOrder, ElementId, OrderError, Partition,
    QuasiorderPair, Relation,
};
use crate::space::{Count, SymbolicSpace};

/// Count conventions for the staged construction: D and E always occur with ω
/// copies, everything else once.
fn stage_count(family: AtomFamily) -> Count {
    match family {
        AtomFamily::D | AtomFamily::E => Count::Omega,
        _ => Count::Finite(1),
    }
}

fn stage_atom(family: AtomFamily, index: &BlockId) -> (Atom, Count) {
    (Atom::new(family, index.clone()), stage_count(family))
}

/// Everything the staged pipeline derives from a validated pair.
#[derive(Clone, Debug)]
pub struct PipelineState {
    /// Mutual leq1-comparability classes of the original universe.
    pub classes: Partition,
    /// The induced pair on quotient blocks; its leq1 is a partial order.
    pub quotient: QuasiorderPair,
    /// The strict order on blocks.
    pub strict: Relation,
    /// Components of the reflexive closure of the strict order.
    pub components_c: Partition,
    /// One-step linkage relation and its transitive envelope.
    pub rel_r: Relation,
    pub prec: Relation,
    /// Components of the envelope's reflexive extension.
    pub components_l: Partition,
    /// Extended linkage relation and its transitive envelope.
    pub rel_rdot: Relation,
    pub prec_dot: Relation,
    /// Components of the extended envelope's reflexive extension.
    pub components_t: Partition,
    /// The partial order induced on the linkage components.
    pub l_order: ComponentOrder,
    /// Per-block spaces of each stage.
    pub stage1: BTreeMap<BlockId, SymbolicSpace>,
    pub stage2: BTreeMap<BlockId, SymbolicSpace>,
    pub stage2_tilde: BTreeMap<BlockId, SymbolicSpace>,
    pub stage3: BTreeMap<BlockId, SymbolicSpace>,
}

/// Final output: one space per original element and the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub spaces: BTreeMap<ElementId, SymbolicSpace>,
    pub ambient: SymbolicSpace,
}

impl PipelineState {
    /// Reflexive comparability in the strict order.
    fn below(&self, a: &BlockId, b: &BlockId) -> bool {
        a == b || self.strict.contains(a, b)
    }

    fn members_c(&self, q: &BlockId) -> &BTreeSet<BlockId> {
        let block = self.components_c.block_of(q).expect("q belongs to a strict-order component");
        self.components_c.members(block).expect("component blocks are present")
    }

    fn l_block_of(&self, q: &BlockId) -> &BlockId {
        self.components_l.block_of(q).expect("q belongs to a linkage component")
    }

    /// First-stage space: one B summand for every block below q and one A
    /// summand for the rest of q's strict-order component.
    pub fn build_s1(&self, q: &BlockId) -> SymbolicSpace {
        let mut out = SymbolicSpace::empty();
        for r in self.members_c(q) {
            let family = if self.below(r, q) { AtomFamily::B } else { AtomFamily::A };
            let (atom, count) = stage_atom(family, r);
            out.insert_union(atom, count);
        }
        out
    }

    /// Second-stage space: stage 1 plus, for every other strict-order
    /// component inside q's linkage block, that component's B, E and D
    /// summands, plus the E summands of q's own component.
    pub fn build_s2(&self, q: &BlockId) -> SymbolicSpace {
        let mut out = self.stage1.get(q).expect("stage 1 built first").clone();
        let own_c = self.components_c.block_of(q).expect("q has a component");
        let l_members = self
            .components_l
            .members(self.l_block_of(q))
            .expect("linkage blocks are present");
        for r in l_members {
            let c_of_r = self.components_c.block_of(r).expect("r has a component");
            if c_of_r == own_c {
                let (atom, count) = stage_atom(AtomFamily::E, r);
                out.insert_union(atom, count);
            } else {
                for family in [AtomFamily::B, AtomFamily::E, AtomFamily::D] {
                    let (atom, count) = stage_atom(family, r);
                    out.insert_union(atom, count);
                }
            }
        }
        out
    }

    /// The block-level stage-2 set of a whole linkage block: B, E and D
    /// summands for every member.
    pub fn block_s2(&self, l: &BlockId) -> SymbolicSpace {
        let mut out = SymbolicSpace::empty();
        for r in self.components_l.members(l).expect("linkage blocks are present") {
            for family in [AtomFamily::B, AtomFamily::E, AtomFamily::D] {
                let (atom, count) = stage_atom(family, r);
                out.insert_union(atom, count);
            }
        }
        out
    }

    /// Tilde stage: stage 2 plus the block-level sets of every linkage block
    /// strictly below q's block. The block order is transitive, so the union
    /// over all strictly lower blocks needs no recursion.
    pub fn build_s2_tilde(&self, q: &BlockId) -> SymbolicSpace {
        let mut out = self.stage2.get(q).expect("stage 2 built first").clone();
        for lower in self.l_order.strictly_below(self.l_block_of(q)) {
            out = out.union(&self.block_s2(&lower));
        }
        out
    }

    /// Third stage: the tilde stage plus one N summand for every member of
    /// q's third-level component that is leq1-below q and one M summand for
    /// every member that is not.
    pub fn build_s3(&self, q: &BlockId) -> SymbolicSpace {
        let mut out = self.stage2_tilde.get(q).expect("tilde stage built first").clone();
        let t_block = self.components_t.block_of(q).expect("q has a third-level component");
        for r in self.components_t.members(t_block).expect("components are present") {
            let family =
                if self.quotient.le1(r, q) { AtomFamily::N } else { AtomFamily::M };
            let (atom, count) = stage_atom(family, r);
            out.insert_union(atom, count);
        }
        out
    }
}

/// Lifts the per-block stage-3 spaces back to the original elements: each
/// element receives its class space plus one G summand per other element and
/// its own H summand.
pub fn lift_to_elements(
    state: &PipelineState,
    pair: &QuasiorderPair,
    classes: &Partition,
) -> BTreeMap<ElementId, SymbolicSpace> {
    let mut out = BTreeMap::new();
    for q in pair.universe() {
        let block = classes.block_of(q).expect("classes cover the universe");
        let mut space = state.stage3.get(block).expect("stage 3 built first").clone();
        for other in pair.universe() {
            if other != q {
                space.insert_union(Atom::new(AtomFamily::G, other.clone()), Count::Finite(1));
            }
        }
        space.insert_union(Atom::new(AtomFamily::H, q.clone()), Count::Finite(1));
        out.insert(q.clone(), space);
    }
    out
}

/// The ambient space: per quotient class one A, B, M and N summand and ω
/// copies of D and E; per original element one G summand. H atoms are absent
/// on purpose: every H embeds clopen through the matching G.
pub fn build_ambient(pair: &QuasiorderPair, classes: &Partition) -> SymbolicSpace {
    let mut out = SymbolicSpace::empty();
    for block in classes.block_ids() {
        for family in
            [AtomFamily::A, AtomFamily::B, AtomFamily::D, AtomFamily::E, AtomFamily::M, AtomFamily::N]
        {
            let (atom, count) = stage_atom(family, block);
            out.insert_union(atom, count);
        }
    }
    for q in pair.universe() {
        out.insert_union(Atom::new(AtomFamily::G, q.clone()), Count::Finite(1));
    }
    out
}

/// Runs the full pipeline, returning both the intermediate state and the
/// final construction.
pub fn pipeline(pair: &QuasiorderPair) -> Result<(PipelineState, Construction), OrderError> {
    let classes = mutual_classes(pair.leq1());
    let quotient = quotient_pair(pair, &classes)?;
    let strict = strict_order(&quotient)?;
    let comparability = strict.reflexive_closure();
    let components_c = components(&comparability);

    let rel_r = relation_r(&quotient, &strict);
    let prec = transitive_envelope(&rel_r);
    let components_l = components(&prec.reflexive_closure());

    let rel_rdot = relation_rdot(&quotient, &prec);
    let prec_dot = transitive_envelope(&rel_rdot);
    let components_t = components(&prec_dot.reflexive_closure());

    let l_order = order_on_components(&prec_dot, &components_l)?;
    assert!(components_c.refines(&components_l), "each strict-order component lies in one linkage block");
    assert!(components_l.refines(&components_t), "each linkage block lies in one third-level block");

    let mut state = PipelineState {
        classes: classes.clone(),
        quotient,
        strict,
        components_c,
        rel_r,
        prec,
        components_l,
        rel_rdot,
        prec_dot,
        components_t,
        l_order,
        stage1: BTreeMap::new(),
        stage2: BTreeMap::new(),
        stage2_tilde: BTreeMap::new(),
        stage3: BTreeMap::new(),
    };

    let blocks: Vec<BlockId> = state.quotient.universe().iter().cloned().collect();
    for q in &blocks {
        let s1 = state.build_s1(q);
        state.stage1.insert(q.clone(), s1);
    }
    for q in &blocks {
        let s2 = state.build_s2(q);
        state.stage2.insert(q.clone(), s2);
    }
    for q in &blocks {
        let s2t = state.build_s2_tilde(q);
        state.stage2_tilde.insert(q.clone(), s2t);
    }
    for q in &blocks {
        let s3 = state.build_s3(q);
        state.stage3.insert(q.clone(), s3);
    }
    check_stage_invariants(&state);

    let spaces = lift_to_elements(&state, pair, &classes);
    let ambient = build_ambient(pair, &classes);
    let construction = Construction { spaces, ambient };
    if let Err(violation) = final_invariants(pair, &construction) {
        panic!("assembled spaces violate a count invariant: {violation}");
    }
    Ok((state, construction))
}

/// Runs the pipeline and keeps only the final construction.
pub fn construct(pair: &QuasiorderPair) -> Result<Construction, OrderError> {
    pipeline(pair).map(|(_, construction)| construction)
}

/// The atoms a construction over this pair may mention.
pub fn registry_for(pair: &QuasiorderPair) -> AtomRegistry {
    let classes = mutual_classes(pair.leq1());
    AtomRegistry::new(classes.block_ids().cloned(), pair.universe().iter().cloned())
}

fn check_stage_invariants(state: &PipelineState) {
    for q in state.quotient.universe() {
        let s1 = &state.stage1[q];
        let s2 = &state.stage2[q];
        let s2t = &state.stage2_tilde[q];
        let s3 = &state.stage3[q];
        assert!(s1.is_sub_multiset_of(s2), "stages only add summands");
        assert!(s2.is_sub_multiset_of(s2t), "stages only add summands");
        assert!(s2t.is_sub_multiset_of(s3), "stages only add summands");
    }
}

/// Count-shape invariants of the finished spaces: no finite count above one,
/// ω exactly on the D/E families, one H summand, and a G summand for every
/// other element.
pub fn final_invariants(
    pair: &QuasiorderPair,
    construction: &Construction,
) -> Result<(), String> {
    let n = pair.universe().len();
    for (q, space) in &construction.spaces {
        let mut h_count = 0usize;
        let mut g_count = 0usize;
        for (atom, count) in space.entries() {
            let expected = stage_count(atom.family);
            if *count != expected {
                return Err(format!("space of {q}: {atom} has count {count}, expected {expected}"));
            }
            match atom.family {
                AtomFamily::H => h_count += 1,
                AtomFamily::G => g_count += 1,
                _ => {}
            }
        }
        if h_count != 1 {
            return Err(format!("space of {q} has {h_count} H summands, expected exactly one"));
        }
        if g_count != n - 1 {
            return Err(format!(
                "space of {q} has {g_count} G summands, expected one per other element ({})",
                n - 1
            ));
        }
    }
    Ok(())
}
