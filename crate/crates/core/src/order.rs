//! Order-theoretic core: finite binary relations, validated quasiorder pairs,
//! quotients by mutual comparability, and the derived relations and component
//! partitions that drive the space construction.
//!
//! Everything here is a pure function over immutable values; relations are
//! stored as sorted pair sets so all iteration is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque element identifier. Labels are ordinary strings; their lexicographic
/// order is used wherever a deterministic iteration order is needed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(String);

/// A quotient block is named by its lexicographically least member, so block
/// identifiers live in the same namespace as element identifiers.
pub type BlockId = ElementId;

impl ElementId {
    pub fn new(label: impl Into<String>) -> Self {
        ElementId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        ElementId::new(s)
    }
}

impl From<String> for ElementId {
    fn from(s: String) -> Self {
        ElementId::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("unknown element `{element}` in {context}")]
    UnknownElement { element: ElementId, context: &'static str },

    #[error("{relation} is not transitive: ({a}, {b}) is implied but missing (rerun with autoclose to take the transitive closure)")]
    NotTransitive { relation: &'static str, a: ElementId, b: ElementId },

    #[error("inclusion violated: ({a}, {b}) is in leq1 but not in leq2")]
    InclusionViolated { a: ElementId, b: ElementId },

    #[error("relation is not antisymmetric: {a} and {b} are distinct but mutually related")]
    NotAntisymmetric { a: ElementId, b: ElementId },

    #[error("partition does not equal the mutual-comparability classes of leq1")]
    PartitionMismatch,

    /// Internal-inconsistency signal: the induced order on linkage components
    /// is provably antisymmetric for every pipeline input, so seeing this
    /// means a bug upstream, not bad user data.
    #[error("component order is not antisymmetric: blocks {a} and {b} are mutually below each other")]
    AntisymmetryViolated { a: BlockId, b: BlockId },
}

/// A finite binary relation: a universe of elements plus a set of ordered
/// pairs whose endpoints all belong to the universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    universe: BTreeSet<ElementId>,
    pairs: BTreeSet<(ElementId, ElementId)>,
}

impl Relation {
    pub fn empty(universe: BTreeSet<ElementId>) -> Self {
        Relation { universe, pairs: BTreeSet::new() }
    }

    /// Builds a relation, rejecting pairs that mention unknown elements.
    pub fn from_pairs<I>(
        universe: BTreeSet<ElementId>,
        pairs: I,
        context: &'static str,
    ) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = (ElementId, ElementId)>,
    {
        let mut rel = Relation::empty(universe);
        for (a, b) in pairs {
            for end in [&a, &b] {
                if !rel.universe.contains(end) {
                    return Err(OrderError::UnknownElement { element: end.clone(), context });
                }
            }
            rel.pairs.insert((a, b));
        }
        Ok(rel)
    }

    pub fn universe(&self) -> &BTreeSet<ElementId> {
        &self.universe
    }

    pub fn pairs(&self) -> &BTreeSet<(ElementId, ElementId)> {
        &self.pairs
    }

    pub fn contains(&self, a: &ElementId, b: &ElementId) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    /// Inserts a pair; endpoints must already be in the universe.
    pub(crate) fn insert(&mut self, a: ElementId, b: ElementId) {
        debug_assert!(self.universe.contains(&a) && self.universe.contains(&b));
        self.pairs.insert((a, b));
    }

    pub fn reflexive_closure(&self) -> Relation {
        let mut out = self.clone();
        for e in &self.universe {
            out.pairs.insert((e.clone(), e.clone()));
        }
        out
    }

    /// First missing pair (a, c) witnessing a transitivity gap, if any.
    pub fn transitivity_gap(&self) -> Option<(ElementId, ElementId)> {
        let succ = self.successor_map();
        for (a, b) in &self.pairs {
            if let Some(nexts) = succ.get(b) {
                for c in nexts {
                    if !self.contains(a, c) {
                        return Some((a.clone(), (*c).clone()));
                    }
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_gap().is_none()
    }

    /// First pair of distinct mutually related elements, if any.
    pub fn antisymmetry_gap(&self) -> Option<(ElementId, ElementId)> {
        for (a, b) in &self.pairs {
            if a != b && self.contains(b, a) {
                return Some((a.clone(), b.clone()));
            }
        }
        None
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_gap().is_none()
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    fn successor_map(&self) -> BTreeMap<&ElementId, Vec<&ElementId>> {
        let mut succ: BTreeMap<&ElementId, Vec<&ElementId>> = BTreeMap::new();
        for (a, b) in &self.pairs {
            succ.entry(a).or_default().push(b);
        }
        succ
    }
}

/// Smallest transitive superset of `rel`: the pair (a, c) is included exactly
/// when c is reachable from a along one or more relation steps.
pub fn transitive_envelope(rel: &Relation) -> Relation {
    let succ = rel.successor_map();
    let mut out = Relation::empty(rel.universe.clone());
    for a in &rel.universe {
        // Forward reachability from a, excluding the empty path.
        let mut seen: BTreeSet<&ElementId> = BTreeSet::new();
        let mut stack: Vec<&ElementId> = succ.get(a).cloned().unwrap_or_default();
        while let Some(b) = stack.pop() {
            if seen.insert(b) {
                if let Some(nexts) = succ.get(b) {
                    stack.extend(nexts.iter().copied());
                }
            }
        }
        for b in seen {
            out.pairs.insert((a.clone(), b.clone()));
        }
    }
    out
}

/// A partition of a universe into disjoint nonempty blocks, each named by its
/// lexicographically least member.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    block_of: BTreeMap<ElementId, BlockId>,
    blocks: BTreeMap<BlockId, BTreeSet<ElementId>>,
}

impl Partition {
    pub fn from_classes(classes: Vec<BTreeSet<ElementId>>) -> Self {
        let mut block_of = BTreeMap::new();
        let mut blocks = BTreeMap::new();
        for class in classes {
            let name = class.iter().next().expect("partition blocks are nonempty").clone();
            for member in &class {
                let prev = block_of.insert(member.clone(), name.clone());
                assert!(prev.is_none(), "partition blocks must be disjoint");
            }
            blocks.insert(name, class);
        }
        Partition { block_of, blocks }
    }

    pub fn block_of(&self, e: &ElementId) -> Option<&BlockId> {
        self.block_of.get(e)
    }

    pub fn blocks(&self) -> &BTreeMap<BlockId, BTreeSet<ElementId>> {
        &self.blocks
    }

    pub fn block_ids(&self) -> impl Iterator<Item = &BlockId> {
        self.blocks.keys()
    }

    pub fn members(&self, block: &BlockId) -> Option<&BTreeSet<ElementId>> {
        self.blocks.get(block)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True when every block of `self` is contained in a single block of
    /// `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.values().all(|members| {
            let mut targets = members.iter().filter_map(|m| coarser.block_of(m));
            match targets.next() {
                None => false,
                Some(first) => targets.all(|t| t == first),
            }
        })
    }
}

/// A validated pair of quasiorders leq1 ⊆ leq2 on a common universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiorderPair {
    universe: BTreeSet<ElementId>,
    leq1: Relation,
    leq2: Relation,
}

impl QuasiorderPair {
    pub fn universe(&self) -> &BTreeSet<ElementId> {
        &self.universe
    }

    pub fn leq1(&self) -> &Relation {
        &self.leq1
    }

    pub fn leq2(&self) -> &Relation {
        &self.leq2
    }

    pub fn le1(&self, a: &ElementId, b: &ElementId) -> bool {
        self.leq1.contains(a, b)
    }

    pub fn le2(&self, a: &ElementId, b: &ElementId) -> bool {
        self.leq2.contains(a, b)
    }

    pub(crate) fn from_validated(leq1: Relation, leq2: Relation) -> Self {
        debug_assert_eq!(leq1.universe, leq2.universe);
        debug_assert!(leq1.is_transitive() && leq2.is_transitive());
        debug_assert!(leq1.is_subset_of(&leq2));
        QuasiorderPair { universe: leq1.universe.clone(), leq1, leq2 }
    }
}

/// Validates a raw pair of relations into a `QuasiorderPair`.
///
/// The reflexive closure is always applied silently (quasiorders are reflexive
/// by definition). The transitive closure is applied only when `autoclose` is
/// set; otherwise a transitivity gap is an error, so silent transitivization
/// cannot mask a typo in the input. Finally leq1 ⊆ leq2 is enforced.
pub fn validate_pair<I, J>(
    universe: BTreeSet<ElementId>,
    leq1_pairs: I,
    leq2_pairs: J,
    autoclose: bool,
) -> Result<QuasiorderPair, OrderError>
where
    I: IntoIterator<Item = (ElementId, ElementId)>,
    J: IntoIterator<Item = (ElementId, ElementId)>,
{
    let raw1 = Relation::from_pairs(universe.clone(), leq1_pairs, "leq1")?;
    let raw2 = Relation::from_pairs(universe, leq2_pairs, "leq2")?;
    let close = |raw: Relation, name: &'static str| -> Result<Relation, OrderError> {
        let refl = raw.reflexive_closure();
        if autoclose {
            Ok(transitive_envelope(&refl).reflexive_closure())
        } else if let Some((a, b)) = refl.transitivity_gap() {
            Err(OrderError::NotTransitive { relation: name, a, b })
        } else {
            Ok(refl)
        }
    };
    let leq1 = close(raw1, "leq1")?;
    let leq2 = close(raw2, "leq2")?;
    if let Some((a, b)) = leq1.pairs.difference(&leq2.pairs).next() {
        return Err(OrderError::InclusionViolated { a: a.clone(), b: b.clone() });
    }
    Ok(QuasiorderPair::from_validated(leq1, leq2))
}

/// Partition of the universe by mutual comparability in `leq1`:
/// q ~ q' iff q ≤₁ q' and q' ≤₁ q. For a quasiorder this is exactly the
/// strongly-connected-component condensation of the relation digraph.
pub fn mutual_classes(leq1: &Relation) -> Partition {
    let mut assigned: BTreeSet<ElementId> = BTreeSet::new();
    let mut classes = Vec::new();
    for a in leq1.universe() {
        if assigned.contains(a) {
            continue;
        }
        let class: BTreeSet<ElementId> = leq1
            .universe()
            .iter()
            .filter(|b| leq1.contains(a, b) && leq1.contains(b, a) || *b == a)
            .cloned()
            .collect();
        assigned.extend(class.iter().cloned());
        classes.push(class);
    }
    Partition::from_classes(classes)
}

/// Quotients a pair by its mutual-comparability classes. The induced leq1 is
/// antisymmetric (a partial order) and leq2 stays a quasiorder; inclusion is
/// preserved.
pub fn quotient_pair(
    pair: &QuasiorderPair,
    classes: &Partition,
) -> Result<QuasiorderPair, OrderError> {
    if *classes != mutual_classes(pair.leq1()) {
        return Err(OrderError::PartitionMismatch);
    }
    let block_universe: BTreeSet<BlockId> = classes.block_ids().cloned().collect();
    let project = |rel: &Relation| -> Relation {
        let mut out = Relation::empty(block_universe.clone());
        for (a, b) in rel.pairs() {
            let ba = classes.block_of(a).expect("partition covers the universe").clone();
            let bb = classes.block_of(b).expect("partition covers the universe").clone();
            out.insert(ba, bb);
        }
        out
    };
    let leq1 = project(pair.leq1());
    let leq2 = project(pair.leq2());
    assert!(leq1.is_antisymmetric(), "quotient by mutual classes must be antisymmetric");
    debug_assert!(leq1.is_transitive() && leq2.is_transitive());
    Ok(QuasiorderPair::from_validated(leq1, leq2))
}

/// The strict order: q < q' iff q ≤₁ q' and not q' ≤₁ q and q' ≤₂ q.
/// Requires leq1 antisymmetric (i.e. a quotiented pair); its reflexive
/// closure is then a partial order.
pub fn strict_order(pair: &QuasiorderPair) -> Result<Relation, OrderError> {
    if let Some((a, b)) = pair.leq1().antisymmetry_gap() {
        return Err(OrderError::NotAntisymmetric { a, b });
    }
    let mut strict = Relation::empty(pair.universe().clone());
    for (a, b) in pair.leq1().pairs() {
        if a != b && !pair.le1(b, a) && pair.le2(b, a) {
            strict.insert(a.clone(), b.clone());
        }
    }
    debug_assert!(strict.reflexive_closure().is_transitive());
    Ok(strict)
}

/// Connected components of the symmetrized comparability graph: q and q' share
/// a block exactly when a zigzag chain q = q₀ ≤ q₁ ≥ q₂ ≤ … qₙ = q' exists.
pub fn components(rel: &Relation) -> Partition {
    let mut adjacency: BTreeMap<&ElementId, Vec<&ElementId>> = BTreeMap::new();
    for (a, b) in rel.pairs() {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut assigned: BTreeSet<&ElementId> = BTreeSet::new();
    let mut classes = Vec::new();
    for start in rel.universe() {
        if assigned.contains(start) {
            continue;
        }
        let mut block = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(e) = stack.pop() {
            if assigned.insert(e) {
                block.insert(e.clone());
                if let Some(nexts) = adjacency.get(e) {
                    stack.extend(nexts.iter().copied());
                }
            }
        }
        classes.push(block);
    }
    Partition::from_classes(classes)
}

/// One-step linkage relation seeding the second component decomposition:
/// q R q' iff q < q', or q and q' are mutually related by leq2 while neither
/// is below the other in leq1.
pub fn relation_r(pair: &QuasiorderPair, strict: &Relation) -> Relation {
    let mut rel = Relation::empty(pair.universe().clone());
    for a in pair.universe() {
        for b in pair.universe() {
            let mutual2 = pair.le2(a, b) && pair.le2(b, a);
            let no_leq1 = !pair.le1(a, b) && !pair.le1(b, a);
            if strict.contains(a, b) || (mutual2 && no_leq1) {
                rel.insert(a.clone(), b.clone());
            }
        }
    }
    rel
}

/// One-step linkage relation seeding the third decomposition: the union of the
/// envelope `prec` with all non-reflexive leq1 and leq2 pairs.
pub fn relation_rdot(pair: &QuasiorderPair, prec: &Relation) -> Relation {
    let mut rel = prec.clone();
    for (a, b) in pair.leq2().pairs() {
        if a != b {
            rel.insert(a.clone(), b.clone());
        }
    }
    // leq1 pairs are a subset of leq2 pairs, listed separately for clarity.
    for (a, b) in pair.leq1().pairs() {
        if a != b {
            rel.insert(a.clone(), b.clone());
        }
    }
    rel
}

/// A reflexive, transitive, antisymmetric order on partition blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentOrder {
    universe: BTreeSet<BlockId>,
    pairs: BTreeSet<(BlockId, BlockId)>,
}

impl ComponentOrder {
    pub fn universe(&self) -> &BTreeSet<BlockId> {
        &self.universe
    }

    pub fn pairs(&self) -> &BTreeSet<(BlockId, BlockId)> {
        &self.pairs
    }

    pub fn leq(&self, a: &BlockId, b: &BlockId) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    /// Blocks strictly below `block`, in sorted order.
    pub fn strictly_below(&self, block: &BlockId) -> Vec<BlockId> {
        self.universe
            .iter()
            .filter(|l| *l != block && self.leq(l, block))
            .cloned()
            .collect()
    }
}

/// The order induced on the blocks of `partition` by the envelope `precdot`:
/// B ⊑ B' iff B = B' or some q ∈ B, q' ∈ B' has q ≺̇ q'. The result is closed
/// transitively and checked for antisymmetry; a violation signals an internal
/// inconsistency because valid pipeline inputs can never produce one.
pub fn order_on_components(
    precdot: &Relation,
    partition: &Partition,
) -> Result<ComponentOrder, OrderError> {
    let block_universe: BTreeSet<BlockId> = partition.block_ids().cloned().collect();
    let mut induced = Relation::empty(block_universe.clone());
    for (a, b) in precdot.pairs() {
        let ba = partition.block_of(a).expect("envelope universe matches partition");
        let bb = partition.block_of(b).expect("envelope universe matches partition");
        if ba != bb {
            induced.insert(ba.clone(), bb.clone());
        }
    }
    let closed = transitive_envelope(&induced).reflexive_closure();
    if let Some((a, b)) = closed.antisymmetry_gap() {
        return Err(OrderError::AntisymmetryViolated { a, b });
    }
    Ok(ComponentOrder { universe: block_universe, pairs: closed.pairs })
}
