//! Symbolic coproduct spaces and the embeddability decision procedures.
//!
//! A space is a normalized multiset of atoms with counts in ℕ⁺ ∪ {ω}. Two
//! spaces are homeomorphic exactly when their multisets coincide (all distinct
//! atoms are pairwise non-homeomorphic and connected). Embeddability at a
//! level is a matching problem: every copy of every source atom must be
//! assigned to a target atom related at that level or stronger, and at the
//! clopen and closed levels each single copy of a target atom can host at most
//! one source copy, while at the injective level a target copy hosts any
//! number.
//!
//! ω counts are resolved by finitization: an ω demand becomes a sentinel
//! larger than every finite supply (so it can only be met by ω-backed supply),
//! and an ω supply becomes large enough to absorb the entire demand side (ω
//! copies accommodate any countable family). The finite problem is then
//! equivalent to the ω one and is decided by integral maximum flow, with an
//! exhaustive assignment-enumeration oracle as an independent cross-check.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::atom::{atom_rel, Atom, RelationLevel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("level {0} does not name an embedding decision (use CLOPEN, CLOSED, or INJ)")]
    InvalidLevel(RelationLevel),

    #[error("instance too large for the exhaustive oracle: {copies} source copies exceed the bound {bound}")]
    TooLarge { copies: u64, bound: u64 },
}

/// A multiplicity: a positive finite number of copies, or countably many.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Count {
    Finite(u64),
    Omega,
}

impl Count {
    pub fn is_omega(self) -> bool {
        matches!(self, Count::Omega)
    }

    /// Multiset addition: ω absorbs any summand.
    pub fn plus(self, other: Count) -> Count {
        match (self, other) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a.saturating_add(b)),
            _ => Count::Omega,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => f.write_str("omega"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => serializer.serialize_u64(*n),
            Count::Omega => serializer.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CountVisitor;
        impl de::Visitor<'_> for CountVisitor {
            type Value = Count;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive integer or the string \"omega\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Count, E> {
                Ok(Count::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Count, E> {
                if v < 0 {
                    Err(E::custom("counts cannot be negative"))
                } else {
                    Ok(Count::Finite(v as u64))
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Count, E> {
                if v == "omega" {
                    Ok(Count::Omega)
                } else {
                    Err(E::custom(format!("expected \"omega\", found {v:?}")))
                }
            }
        }
        deserializer.deserialize_any(CountVisitor)
    }
}

/// A normalized multiset of atoms: no zero counts, canonical map equality.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct SymbolicSpace {
    entries: BTreeMap<Atom, Count>,
}

impl<'de> Deserialize<'de> for SymbolicSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = BTreeMap::<Atom, Count>::deserialize(deserializer)?;
        Ok(SymbolicSpace::normalize(entries))
    }
}

impl SymbolicSpace {
    pub fn empty() -> Self {
        SymbolicSpace::default()
    }

    /// Builds a space from raw entries, merging duplicates additively and
    /// dropping zero counts.
    pub fn normalize<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (Atom, Count)>,
    {
        let mut entries: BTreeMap<Atom, Count> = BTreeMap::new();
        for (atom, count) in raw {
            if count == Count::Finite(0) {
                continue;
            }
            entries
                .entry(atom)
                .and_modify(|c| *c = c.plus(count))
                .or_insert(count);
        }
        SymbolicSpace { entries }
    }

    pub fn entries(&self) -> &BTreeMap<Atom, Count> {
        &self.entries
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.entries.keys()
    }

    pub fn count(&self, atom: &Atom) -> Option<Count> {
        self.entries.get(atom).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coproduct: entrywise count addition.
    pub fn coproduct(&self, other: &SymbolicSpace) -> SymbolicSpace {
        let mut out = self.clone();
        for (atom, count) in &other.entries {
            out.entries
                .entry(atom.clone())
                .and_modify(|c| *c = c.plus(*count))
                .or_insert(*count);
        }
        out
    }

    /// Set-style union used by the staged construction: repeated contributions
    /// of the same named summand denote one summand, so counts combine by
    /// maximum rather than addition.
    pub fn insert_union(&mut self, atom: Atom, count: Count) {
        assert_ne!(count, Count::Finite(0), "zero counts cannot enter a space");
        self.entries
            .entry(atom)
            .and_modify(|c| *c = (*c).max(count))
            .or_insert(count);
    }

    pub fn union(&self, other: &SymbolicSpace) -> SymbolicSpace {
        let mut out = self.clone();
        for (atom, count) in &other.entries {
            out.insert_union(atom.clone(), *count);
        }
        out
    }

    /// Every entry of `self` occurs in `other` with at least the same count.
    pub fn is_sub_multiset_of(&self, other: &SymbolicSpace) -> bool {
        self.entries
            .iter()
            .all(|(atom, count)| other.count(atom).is_some_and(|c| *count <= c))
    }

    pub fn remove(&mut self, atom: &Atom) -> Option<Count> {
        self.entries.remove(atom)
    }
}

/// Homeomorphism test: normalized multiset equality. Distinct atoms are never
/// homeomorphic and every atom is connected, so coproducts are homeomorphic
/// exactly when their atom multisets coincide.
pub fn is_homeomorphic(x: &SymbolicSpace, y: &SymbolicSpace) -> bool {
    x == y
}

/// Finite demand/supply tables replacing ω counts.
///
/// `sentinel` is 1 + (sum of all finite counts on both sides) + (number of
/// atom types on both sides): strictly more than the whole finite supply, so a
/// sentinel-sized demand can only be met by ω-backed supply. An ω-backed
/// supply in turn is replaced by a value at least the total demand, because ω
/// copies absorb any countable family. With these two rules the finite
/// problem and the ω problem have the same answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finitized {
    pub sentinel: u64,
    pub demands: Vec<(Atom, u64)>,
    pub supplies: Vec<(Atom, u64)>,
    pub omega_demands: BTreeSet<Atom>,
    pub omega_supplies: BTreeSet<Atom>,
}

impl Finitized {
    pub fn total_demand(&self) -> u64 {
        self.demands.iter().map(|(_, d)| d).sum()
    }
}

pub fn finitize(x: &SymbolicSpace, y: &SymbolicSpace) -> Finitized {
    let finite_sum: u64 = x
        .entries()
        .values()
        .chain(y.entries().values())
        .map(|c| match c {
            Count::Finite(n) => *n,
            Count::Omega => 0,
        })
        .sum();
    let type_count = (x.len() + y.len()) as u64;
    let sentinel = 1 + finite_sum + type_count;

    let mut omega_demands = BTreeSet::new();
    let demands: Vec<(Atom, u64)> = x
        .entries()
        .iter()
        .map(|(atom, count)| match count {
            Count::Finite(n) => (atom.clone(), *n),
            Count::Omega => {
                omega_demands.insert(atom.clone());
                (atom.clone(), sentinel)
            }
        })
        .collect();
    let total_demand: u64 = demands.iter().map(|(_, d)| d).sum();
    let saturation = sentinel.max(total_demand);

    let mut omega_supplies = BTreeSet::new();
    let supplies: Vec<(Atom, u64)> = y
        .entries()
        .iter()
        .map(|(atom, count)| match count {
            Count::Finite(n) => (atom.clone(), *n),
            Count::Omega => {
                omega_supplies.insert(atom.clone());
                (atom.clone(), saturation)
            }
        })
        .collect();

    Finitized { sentinel, demands, supplies, omega_demands, omega_supplies }
}

/// How much a single copy of a target atom can host.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CapacityRule {
    /// Clopen and closed embeddings: images of distinct summands occupy
    /// distinct component-summands of the target, one source copy per copy.
    OnePerCopy,
    /// Injective continuous maps: images need not be closed, so one target
    /// copy hosts any number of disjoint source copies.
    Unbounded,
}

impl CapacityRule {
    pub fn for_level(level: RelationLevel) -> Result<CapacityRule, SpaceError> {
        match level {
            RelationLevel::Clopen | RelationLevel::Closed => Ok(CapacityRule::OnePerCopy),
            RelationLevel::Inj => Ok(CapacityRule::Unbounded),
            other => Err(SpaceError::InvalidLevel(other)),
        }
    }
}

/// Certificate that an embedding-level matching exists: per transfer, how many
/// copies of a source atom were routed into a target atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingWitness {
    pub transfers: Vec<Transfer>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub from: Atom,
    pub to: Atom,
    pub count: Count,
}

/// Plain Edmonds–Karp maximum flow on a dense capacity matrix. The graphs
/// here are tiny (two layers plus source and sink), so the simple version is
/// both fast enough and deterministic.
fn max_flow(cap: &mut [Vec<u64>], source: usize, sink: usize) -> u64 {
    let n = cap.len();
    let mut total = 0u64;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[source] = source;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            return total;
        }
        let mut bottleneck = u64::MAX;
        let mut v = sink;
        while v != source {
            let u = parent[v];
            bottleneck = bottleneck.min(cap[u][v]);
            v = u;
        }
        let mut v = sink;
        while v != source {
            let u = parent[v];
            cap[u][v] -= bottleneck;
            cap[v][u] += bottleneck;
            v = u;
        }
        total += bottleneck;
    }
}

struct MatchingProblem {
    demand_atoms: Vec<Atom>,
    demand_sizes: Vec<u64>,
    capacities: Vec<u64>,
    supply_atoms: Vec<Atom>,
    // adjacency[i] lists supply indices compatible with demand i, sorted
    adjacency: Vec<Vec<usize>>,
}

impl MatchingProblem {
    fn build(
        demands: &[(Atom, u64)],
        supplies: &[(Atom, u64)],
        edges: &BTreeSet<(Atom, Atom)>,
        rule: CapacityRule,
    ) -> Self {
        let total_demand: u64 = demands.iter().map(|(_, d)| d).sum();
        let supply_atoms: Vec<Atom> = supplies.iter().map(|(a, _)| a.clone()).collect();
        let capacities: Vec<u64> = supplies
            .iter()
            .map(|(_, s)| match rule {
                CapacityRule::OnePerCopy => *s,
                CapacityRule::Unbounded => {
                    if *s > 0 {
                        total_demand
                    } else {
                        0
                    }
                }
            })
            .collect();
        let mut adjacency = vec![Vec::new(); demands.len()];
        for (i, (a, _)) in demands.iter().enumerate() {
            for (j, (b, _)) in supplies.iter().enumerate() {
                if edges.contains(&(a.clone(), b.clone())) {
                    adjacency[i].push(j);
                }
            }
        }
        MatchingProblem {
            demand_atoms: demands.iter().map(|(a, _)| a.clone()).collect(),
            demand_sizes: demands.iter().map(|(_, d)| *d).collect(),
            capacities,
            supply_atoms,
            adjacency,
        }
    }

    /// Max-flow feasibility for the given residual demands and capacities.
    fn feasible(&self, demand_sizes: &[u64], capacities: &[u64]) -> bool {
        let n = demand_sizes.len();
        let m = capacities.len();
        let total: u64 = demand_sizes.iter().sum();
        if total == 0 {
            return true;
        }
        let nodes = n + m + 2;
        let source = 0usize;
        let sink = nodes - 1;
        let mut cap = vec![vec![0u64; nodes]; nodes];
        for i in 0..n {
            cap[source][1 + i] = demand_sizes[i];
            for &j in &self.adjacency[i] {
                cap[1 + i][1 + n + j] = demand_sizes[i];
            }
        }
        for j in 0..m {
            cap[1 + n + j][sink] = capacities[j];
        }
        max_flow(&mut cap, source, sink) == total
    }

    /// Canonical witness for a feasible instance: walk the edges in sorted
    /// order and give each one the largest transfer that keeps the rest of the
    /// problem feasible. Deterministic and independent of the flow algorithm's
    /// internals.
    fn canonical_witness(&self) -> Vec<(Atom, Atom, u64)> {
        let mut rem_demand = self.demand_sizes.clone();
        let mut rem_cap = self.capacities.clone();
        let mut out = Vec::new();
        for i in 0..rem_demand.len() {
            for &j in &self.adjacency[i] {
                let hi = rem_demand[i].min(rem_cap[j]);
                if hi == 0 {
                    continue;
                }
                // Largest t in [0, hi] keeping the residual feasible; the
                // feasible set is downward closed, so binary search applies.
                let (mut lo, mut best) = (0u64, 0u64);
                let mut hi_bound = hi;
                while lo <= hi_bound {
                    let mid = lo + (hi_bound - lo) / 2;
                    rem_demand[i] -= mid;
                    rem_cap[j] -= mid;
                    let ok = self.feasible(&rem_demand, &rem_cap);
                    rem_demand[i] += mid;
                    rem_cap[j] += mid;
                    if ok {
                        best = mid;
                        if mid == hi_bound {
                            break;
                        }
                        lo = mid + 1;
                    } else {
                        if mid == 0 {
                            break;
                        }
                        hi_bound = mid - 1;
                    }
                }
                if best > 0 {
                    rem_demand[i] -= best;
                    rem_cap[j] -= best;
                    out.push((self.demand_atoms[i].clone(), self.supply_atoms[j].clone(), best));
                }
            }
            assert_eq!(rem_demand[i], 0, "feasible matching must exhaust every demand");
        }
        out
    }
}

/// Decision core: is all demand routable along the edges under the capacity
/// rule? Returns the canonical transfer list when it is.
pub fn feasible_matching(
    demands: &[(Atom, u64)],
    supplies: &[(Atom, u64)],
    edges: &BTreeSet<(Atom, Atom)>,
    rule: CapacityRule,
) -> Option<Vec<(Atom, Atom, u64)>> {
    let problem = MatchingProblem::build(demands, supplies, edges, rule);
    if !problem.feasible(&problem.demand_sizes, &problem.capacities) {
        return None;
    }
    Some(problem.canonical_witness())
}

fn level_edges<F>(rel: &F, fin: &Finitized, level: RelationLevel) -> BTreeSet<(Atom, Atom)>
where
    F: Fn(&Atom, &Atom) -> RelationLevel,
{
    let mut edges = BTreeSet::new();
    for (a, _) in &fin.demands {
        for (b, _) in &fin.supplies {
            if rel(a, b) >= level {
                edges.insert((a.clone(), b.clone()));
            }
        }
    }
    edges
}

fn witness_from_transfers(
    fin: &Finitized,
    rule: CapacityRule,
    transfers: Vec<(Atom, Atom, u64)>,
) -> MatchingWitness {
    let transfers = transfers
        .into_iter()
        .map(|(from, to, t)| {
            // An ω demand stands for countably many copies whenever its host
            // can take them: an ω supply always can, and under the unbounded
            // rule a single copy can. Everything else is a literal finite
            // transfer.
            let host_takes_omega = fin.omega_supplies.contains(&to)
                || matches!(rule, CapacityRule::Unbounded);
            let count = if fin.omega_demands.contains(&from) && host_takes_omega {
                Count::Omega
            } else {
                Count::Finite(t)
            };
            Transfer { from, to, count }
        })
        .collect();
    MatchingWitness { transfers }
}

/// Decides whether `x` embeds into `y` at `level`, using `rel` as the atom
/// matrix. Returns a witness when it does.
pub fn embeds_with<F>(
    rel: F,
    x: &SymbolicSpace,
    y: &SymbolicSpace,
    level: RelationLevel,
) -> Result<(bool, Option<MatchingWitness>), SpaceError>
where
    F: Fn(&Atom, &Atom) -> RelationLevel,
{
    let rule = CapacityRule::for_level(level)?;
    let fin = finitize(x, y);
    let edges = level_edges(&rel, &fin, level);
    match feasible_matching(&fin.demands, &fin.supplies, &edges, rule) {
        Some(transfers) => Ok((true, Some(witness_from_transfers(&fin, rule, transfers)))),
        None => Ok((false, None)),
    }
}

/// Witness-free embeddability check for bulk runs.
pub fn embeds_quick_with<F>(
    rel: F,
    x: &SymbolicSpace,
    y: &SymbolicSpace,
    level: RelationLevel,
) -> Result<bool, SpaceError>
where
    F: Fn(&Atom, &Atom) -> RelationLevel,
{
    let rule = CapacityRule::for_level(level)?;
    let fin = finitize(x, y);
    let edges = level_edges(&rel, &fin, level);
    let problem = MatchingProblem::build(&fin.demands, &fin.supplies, &edges, rule);
    Ok(problem.feasible(&problem.demand_sizes, &problem.capacities))
}

pub fn embeds(
    x: &SymbolicSpace,
    y: &SymbolicSpace,
    level: RelationLevel,
) -> Result<(bool, Option<MatchingWitness>), SpaceError> {
    embeds_with(atom_rel, x, y, level)
}

pub fn embeds_quick(
    x: &SymbolicSpace,
    y: &SymbolicSpace,
    level: RelationLevel,
) -> Result<bool, SpaceError> {
    embeds_quick_with(atom_rel, x, y, level)
}

/// First source atom with no compatible target at all, if any. Used to turn a
/// negative embeddability verdict into an actionable explanation.
pub fn first_unmatchable_atom_with<F>(
    rel: F,
    x: &SymbolicSpace,
    y: &SymbolicSpace,
    level: RelationLevel,
) -> Option<Atom>
where
    F: Fn(&Atom, &Atom) -> RelationLevel,
{
    x.atoms().find(|a| !y.atoms().any(|b| rel(a, b) >= level)).cloned()
}

/// Exhaustive brute-force oracle: enumerates every assignment of source copies
/// to target copies (up to interchanging identical copies) over the finitized
/// tables and reports whether one satisfies the capacity rule. Must agree with
/// `embeds`; refuses instances whose total demand exceeds `bound`.
pub fn oracle_embeds(
    x: &SymbolicSpace,
    y: &SymbolicSpace,
    level: RelationLevel,
    bound: u64,
) -> Result<bool, SpaceError> {
    let rule = CapacityRule::for_level(level)?;
    let fin = finitize(x, y);
    let total = fin.total_demand();
    if total > bound {
        return Err(SpaceError::TooLarge { copies: total, bound });
    }
    let edges = level_edges(&atom_rel, &fin, level);
    let total_demand = total;
    let capacities: Vec<u64> = fin
        .supplies
        .iter()
        .map(|(_, s)| match rule {
            CapacityRule::OnePerCopy => *s,
            CapacityRule::Unbounded => {
                if *s > 0 {
                    total_demand
                } else {
                    0
                }
            }
        })
        .collect();
    let demands: Vec<(Vec<usize>, u64)> = fin
        .demands
        .iter()
        .map(|(a, d)| {
            let targets: Vec<usize> = fin
                .supplies
                .iter()
                .enumerate()
                .filter(|(_, (b, _))| edges.contains(&(a.clone(), (*b).clone())))
                .map(|(j, _)| j)
                .collect();
            (targets, *d)
        })
        .collect();
    let mut search = OracleSearch { demands, caps: capacities, failed: HashSet::new() };
    Ok(search.solve(0))
}

struct OracleSearch {
    demands: Vec<(Vec<usize>, u64)>,
    caps: Vec<u64>,
    failed: HashSet<(usize, Vec<u64>)>,
}

impl OracleSearch {
    fn solve(&mut self, idx: usize) -> bool {
        if idx == self.demands.len() {
            return true;
        }
        // Every remaining demand needs enough capacity among its own targets.
        for (targets, d) in &self.demands[idx..] {
            let reachable: u64 = targets.iter().map(|&j| self.caps[j]).sum();
            if reachable < *d {
                return false;
            }
        }
        let key = (idx, self.caps.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let demand = self.demands[idx].1;
        if self.place(idx, 0, demand) {
            return true;
        }
        self.failed.insert(key);
        false
    }

    /// Distributes `remaining` copies of demand `idx` over its target slots
    /// starting at `slot`, trying larger shares first.
    fn place(&mut self, idx: usize, slot: usize, remaining: u64) -> bool {
        let targets_len = self.demands[idx].0.len();
        if slot == targets_len {
            return remaining == 0 && self.solve(idx + 1);
        }
        let j = self.demands[idx].0[slot];
        let hi = remaining.min(self.caps[j]);
        let mut t = hi;
        loop {
            self.caps[j] -= t;
            let ok = self.place(idx, slot + 1, remaining - t);
            self.caps[j] += t;
            if ok {
                return true;
            }
            if t == 0 {
                return false;
            }
            t -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::AtomFamily::{self, *};

    fn atom(f: AtomFamily, i: &str) -> Atom {
        Atom::new(f, i)
    }

    fn space(entries: &[(AtomFamily, &str, Count)]) -> SymbolicSpace {
        SymbolicSpace::normalize(entries.iter().map(|(f, i, c)| (atom(*f, i), *c)))
    }

    const ONE: Count = Count::Finite(1);

    #[test]
    fn normalize_merges_additively() {
        let x = SymbolicSpace::normalize([
            (atom(A, "x"), Count::Finite(2)),
            (atom(A, "x"), Count::Finite(3)),
        ]);
        assert_eq!(x.count(&atom(A, "x")), Some(Count::Finite(5)));
    }

    #[test]
    fn normalize_absorbs_omega() {
        let x = SymbolicSpace::normalize([
            (atom(D, "x"), Count::Omega),
            (atom(D, "x"), Count::Omega),
        ]);
        assert_eq!(x.count(&atom(D, "x")), Some(Count::Omega));
        let y = SymbolicSpace::normalize([
            (atom(D, "x"), Count::Omega),
            (atom(D, "x"), Count::Finite(7)),
        ]);
        assert_eq!(y.count(&atom(D, "x")), Some(Count::Omega));
    }

    #[test]
    fn normalize_drops_zero_counts() {
        let x = SymbolicSpace::normalize([
            (atom(B, "x"), Count::Finite(0)),
            (atom(A, "x"), ONE),
        ]);
        assert_eq!(x.len(), 1);
        assert_eq!(x.count(&atom(A, "x")), Some(ONE));
        assert_eq!(x.count(&atom(B, "x")), None);
    }

    #[test]
    fn homeomorphism_is_multiset_equality() {
        let x = space(&[(G, "a", ONE)]);
        let y = space(&[(H, "a", ONE)]);
        assert!(is_homeomorphic(&x, &x));
        assert!(!is_homeomorphic(&x, &y));
        let d1 = space(&[(D, "x", Count::Omega), (E, "x", Count::Omega)]);
        let d2 = space(&[(E, "x", Count::Omega), (D, "x", Count::Omega)]);
        assert!(is_homeomorphic(&d1, &d2));
    }

    #[test]
    fn a_embeds_clopen_into_b() {
        let x = space(&[(A, "x", ONE)]);
        let y = space(&[(B, "x", ONE)]);
        let (ok, witness) = embeds(&x, &y, RelationLevel::Clopen).unwrap();
        assert!(ok);
        let witness = witness.unwrap();
        assert_eq!(witness.transfers.len(), 1);
        assert_eq!(witness.transfers[0].from, atom(A, "x"));
        assert_eq!(witness.transfers[0].to, atom(B, "x"));
        assert_eq!(witness.transfers[0].count, ONE);
    }

    #[test]
    fn omega_pattern_embeds_closed_but_not_clopen() {
        // Both E_x and D_x must route into the single E_x summand family of
        // the target; ω copies make room for both at the closed level.
        let x = space(&[
            (E, "x", Count::Omega),
            (D, "x", Count::Omega),
            (E, "y", Count::Omega),
        ]);
        let y = space(&[
            (E, "y", Count::Omega),
            (D, "y", Count::Omega),
            (E, "x", Count::Omega),
        ]);
        assert!(embeds_quick(&x, &y, RelationLevel::Closed).unwrap());
        assert!(!embeds_quick(&x, &y, RelationLevel::Clopen).unwrap());
    }

    #[test]
    fn cross_system_injection_is_refused() {
        let x = space(&[(B, "x", ONE)]);
        let y = space(&[(M, "x", ONE)]);
        assert!(!embeds_quick(&x, &y, RelationLevel::Inj).unwrap());
    }

    #[test]
    fn embeds_rejects_non_embedding_levels() {
        let x = space(&[(A, "x", ONE)]);
        assert_eq!(
            embeds(&x, &x, RelationLevel::Homeo).unwrap_err(),
            SpaceError::InvalidLevel(RelationLevel::Homeo)
        );
        assert_eq!(
            embeds(&x, &x, RelationLevel::None).unwrap_err(),
            SpaceError::InvalidLevel(RelationLevel::None)
        );
    }

    #[test]
    fn finitize_leaves_finite_instances_alone() {
        let x = space(&[(A, "x", ONE)]);
        let y = space(&[(B, "x", ONE)]);
        let fin = finitize(&x, &y);
        assert_eq!(fin.sentinel, 5); // 1 + (1 + 1 finite counts) + (2 types)
        assert_eq!(fin.demands, vec![(atom(A, "x"), 1)]);
        assert_eq!(fin.supplies, vec![(atom(B, "x"), 1)]);
        assert!(fin.omega_demands.is_empty() && fin.omega_supplies.is_empty());
    }

    #[test]
    fn finitize_replaced_omega_counts_by_the_sentinel() {
        let x = space(&[(D, "x", Count::Omega)]);
        let y = space(&[(E, "x", Count::Omega)]);
        let fin = finitize(&x, &y);
        assert_eq!(fin.sentinel, 3); // 1 + 0 + 2 types
        assert_eq!(fin.demands, vec![(atom(D, "x"), 3)]);
        assert_eq!(fin.supplies, vec![(atom(E, "x"), 3)]);
    }

    #[test]
    fn omega_demand_cannot_fit_into_finite_supply() {
        let x = space(&[(D, "x", Count::Omega)]);
        let y = space(&[(E, "x", Count::Finite(3))]);
        let fin = finitize(&x, &y);
        assert!(fin.demands[0].1 > 3);
        assert!(!embeds_quick(&x, &y, RelationLevel::Closed).unwrap());
    }

    #[test]
    fn matching_feasibility_basics() {
        let a = atom(A, "s");
        let b = atom(B, "s");
        let edges: BTreeSet<_> = [(a.clone(), b.clone())].into();
        // single unit across a single edge
        let m = feasible_matching(
            &[(a.clone(), 1)],
            &[(b.clone(), 1)],
            &edges,
            CapacityRule::OnePerCopy,
        );
        assert_eq!(m, Some(vec![(a.clone(), b.clone(), 1)]));
        // two units against one copy at capacity one
        let m = feasible_matching(
            &[(a.clone(), 2)],
            &[(b.clone(), 1)],
            &edges,
            CapacityRule::OnePerCopy,
        );
        assert!(m.is_none());
        // two units against one copy with unbounded capacity
        let m = feasible_matching(
            &[(a.clone(), 2)],
            &[(b.clone(), 1)],
            &edges,
            CapacityRule::Unbounded,
        );
        assert_eq!(m, Some(vec![(a, b, 2)]));
    }

    #[test]
    fn canonical_witness_is_feasibility_aware() {
        // a0 can use either supply, a1 only the first; the greedy walk must
        // leave room on the first supply for a1.
        let a0 = atom(A, "i");
        let a1 = atom(B, "i");
        let s0 = atom(A, "i");
        let s1 = atom(B, "i");
        let edges: BTreeSet<_> = [
            (a0.clone(), s0.clone()),
            (a0.clone(), s1.clone()),
            (a1.clone(), s0.clone()),
        ]
        .into();
        let m = feasible_matching(
            &[(a0.clone(), 2), (a1.clone(), 1)],
            &[(s0.clone(), 2), (s1.clone(), 1)],
            &edges,
            CapacityRule::OnePerCopy,
        )
        .unwrap();
        assert_eq!(
            m,
            vec![(a0.clone(), s0.clone(), 1), (a0, s1, 1), (a1, s0, 1)]
        );
    }

    #[test]
    fn oracle_agrees_on_the_embeds_examples() {
        let cases = [
            (space(&[(A, "x", ONE)]), space(&[(B, "x", ONE)]), RelationLevel::Clopen, true),
            (
                space(&[(E, "x", Count::Omega), (D, "x", Count::Omega), (E, "y", Count::Omega)]),
                space(&[(E, "y", Count::Omega), (D, "y", Count::Omega), (E, "x", Count::Omega)]),
                RelationLevel::Closed,
                true,
            ),
            (
                space(&[(E, "x", Count::Omega), (D, "x", Count::Omega), (E, "y", Count::Omega)]),
                space(&[(E, "y", Count::Omega), (D, "y", Count::Omega), (E, "x", Count::Omega)]),
                RelationLevel::Clopen,
                false,
            ),
            (space(&[(B, "x", ONE)]), space(&[(M, "x", ONE)]), RelationLevel::Inj, false),
        ];
        for (x, y, level, expected) in cases {
            assert_eq!(embeds_quick(&x, &y, level).unwrap(), expected);
            assert_eq!(oracle_embeds(&x, &y, level, 100).unwrap(), expected);
        }
    }

    #[test]
    fn oracle_accepts_empty_source_and_rejects_empty_target() {
        let empty = SymbolicSpace::empty();
        let y = space(&[(A, "x", ONE)]);
        for level in RelationLevel::EMBED_LEVELS {
            assert!(oracle_embeds(&empty, &y, level, 12).unwrap());
            assert!(oracle_embeds(&empty, &empty, level, 12).unwrap());
            assert!(!oracle_embeds(&y, &empty, level, 12).unwrap());
        }
    }

    #[test]
    fn oracle_refuses_oversized_instances() {
        let x = space(&[(D, "x", Count::Omega)]);
        let y = space(&[(E, "x", Count::Omega)]);
        let err = oracle_embeds(&x, &y, RelationLevel::Closed, 2).unwrap_err();
        assert_eq!(err, SpaceError::TooLarge { copies: 3, bound: 2 });
    }

    #[test]
    fn omega_transfers_are_reported_as_omega() {
        let x = space(&[(D, "x", Count::Omega)]);
        let y = space(&[(D, "x", Count::Omega)]);
        let (ok, witness) = embeds(&x, &y, RelationLevel::Clopen).unwrap();
        assert!(ok);
        assert_eq!(witness.unwrap().transfers[0].count, Count::Omega);
    }

    #[test]
    fn count_serialization_uses_omega_string() {
        assert_eq!(serde_json::to_string(&Count::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Count::Omega).unwrap(), "\"omega\"");
        assert_eq!(serde_json::from_str::<Count>("\"omega\"").unwrap(), Count::Omega);
        assert_eq!(serde_json::from_str::<Count>("4").unwrap(), Count::Finite(4));
    }

    #[test]
    fn sub_multiset_respects_omega() {
        let small = space(&[(D, "x", Count::Finite(2))]);
        let big = space(&[(D, "x", Count::Omega), (E, "x", Count::Omega)]);
        assert!(small.is_sub_multiset_of(&big));
        assert!(!big.is_sub_multiset_of(&small));
    }
}
