//! Rigid building-block atoms and the frozen relation matrix between them.
//!
//! Atoms come in four two-member systems {A, B}, {D, E}, {M, N}, {G, H},
//! each indexed by an element or quotient-class identifier. The matrix below
//! records, for every ordered pair of atoms, the strongest kind of map from
//! the first into the second. It is the complete semantics of the calculus:
//! any pair not explicitly granted a level relates at `None`.
//!
//! Within one index i the matrix says:
//!
//! * A_i sits inside B_i as a clopen piece; B_i sits inside A_i as a closed
//!   piece but never a clopen one.
//! * D_i and E_i sit inside each other as closed pieces, never clopen ones.
//! * M_i and N_i repeat the A/B pattern.
//! * G_i and H_i sit inside each other as clopen pieces yet are not
//!   homeomorphic.
//!
//! Across distinct indices or distinct systems there are no injective
//! continuous maps at all. `Homeo` appears only on the diagonal, which is what
//! makes "non-homeomorphic" decidable by plain multiset equality.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::order::ElementId;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AtomFamily {
    A,
    B,
    D,
    E,
    M,
    N,
    G,
    H,
}

impl AtomFamily {
    pub const ALL: [AtomFamily; 8] = [
        AtomFamily::A,
        AtomFamily::B,
        AtomFamily::D,
        AtomFamily::E,
        AtomFamily::M,
        AtomFamily::N,
        AtomFamily::G,
        AtomFamily::H,
    ];

    /// Which of the four rigid systems the family belongs to.
    pub fn system(self) -> u8 {
        match self {
            AtomFamily::A | AtomFamily::B => 1,
            AtomFamily::D | AtomFamily::E => 2,
            AtomFamily::M | AtomFamily::N => 3,
            AtomFamily::G | AtomFamily::H => 4,
        }
    }

    /// The other member of the same system.
    pub fn partner(self) -> AtomFamily {
        match self {
            AtomFamily::A => AtomFamily::B,
            AtomFamily::B => AtomFamily::A,
            AtomFamily::D => AtomFamily::E,
            AtomFamily::E => AtomFamily::D,
            AtomFamily::M => AtomFamily::N,
            AtomFamily::N => AtomFamily::M,
            AtomFamily::G => AtomFamily::H,
            AtomFamily::H => AtomFamily::G,
        }
    }

    /// Families A..N are indexed by quotient classes; G and H by original
    /// elements.
    pub fn is_class_indexed(self) -> bool {
        !matches!(self, AtomFamily::G | AtomFamily::H)
    }

    pub fn letter(self) -> char {
        match self {
            AtomFamily::A => 'A',
            AtomFamily::B => 'B',
            AtomFamily::D => 'D',
            AtomFamily::E => 'E',
            AtomFamily::M => 'M',
            AtomFamily::N => 'N',
            AtomFamily::G => 'G',
            AtomFamily::H => 'H',
        }
    }

    pub fn from_letter(c: char) -> Option<AtomFamily> {
        match c {
            'A' => Some(AtomFamily::A),
            'B' => Some(AtomFamily::B),
            'D' => Some(AtomFamily::D),
            'E' => Some(AtomFamily::E),
            'M' => Some(AtomFamily::M),
            'N' => Some(AtomFamily::N),
            'G' => Some(AtomFamily::G),
            'H' => Some(AtomFamily::H),
            _ => None,
        }
    }
}

impl fmt::Display for AtomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One rigid building block: a family plus an index, written `A_x`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub family: AtomFamily,
    pub index: ElementId,
}

impl Atom {
    pub fn new(family: AtomFamily, index: impl Into<ElementId>) -> Self {
        Atom { family, index: index.into() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.index)
    }
}

impl FromStr for Atom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| "empty atom".to_string())?;
        let family =
            AtomFamily::from_letter(letter).ok_or_else(|| format!("unknown atom family in `{s}`"))?;
        let rest = chars.as_str();
        let index = rest
            .strip_prefix('_')
            .filter(|r| !r.is_empty())
            .ok_or_else(|| format!("atom `{s}` is missing an `_index` suffix"))?;
        Ok(Atom::new(family, ElementId::new(index)))
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Strongest kind of map between two atoms, totally ordered: a homeomorphism
/// is a clopen embedding, a clopen embedding is a closed embedding, and every
/// embedding is an injective continuous map.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RelationLevel {
    None,
    Inj,
    Closed,
    Clopen,
    Homeo,
}

impl RelationLevel {
    pub const EMBED_LEVELS: [RelationLevel; 3] =
        [RelationLevel::Clopen, RelationLevel::Closed, RelationLevel::Inj];
}

impl fmt::Display for RelationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationLevel::None => "NONE",
            RelationLevel::Inj => "INJ",
            RelationLevel::Closed => "CLOSED",
            RelationLevel::Clopen => "CLOPEN",
            RelationLevel::Homeo => "HOMEO",
        };
        f.write_str(s)
    }
}

/// The frozen matrix: strongest map type from `a` into `b`.
pub fn atom_rel(a: &Atom, b: &Atom) -> RelationLevel {
    if a == b {
        return RelationLevel::Homeo;
    }
    if a.index != b.index || a.family.system() != b.family.system() {
        return RelationLevel::None;
    }
    use AtomFamily::*;
    match (a.family, b.family) {
        (A, B) => RelationLevel::Clopen,
        (B, A) => RelationLevel::Closed,
        (D, E) | (E, D) => RelationLevel::Closed,
        (M, N) => RelationLevel::Clopen,
        (N, M) => RelationLevel::Closed,
        (G, H) | (H, G) => RelationLevel::Clopen,
        // Same family with a distinct index is caught above; nothing else
        // inside a system is granted a level.
        _ => RelationLevel::None,
    }
}

/// The set of atoms in play for one construction: the class-indexed families
/// over the quotient blocks plus G/H over the original elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomRegistry {
    class_indices: Vec<ElementId>,
    element_indices: Vec<ElementId>,
}

impl AtomRegistry {
    pub fn new<I, J>(class_indices: I, element_indices: J) -> Self
    where
        I: IntoIterator<Item = ElementId>,
        J: IntoIterator<Item = ElementId>,
    {
        let mut class_indices: Vec<_> = class_indices.into_iter().collect();
        let mut element_indices: Vec<_> = element_indices.into_iter().collect();
        class_indices.sort();
        class_indices.dedup();
        element_indices.sort();
        element_indices.dedup();
        AtomRegistry { class_indices, element_indices }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for family in AtomFamily::ALL {
            let indices =
                if family.is_class_indexed() { &self.class_indices } else { &self.element_indices };
            for index in indices {
                out.push(Atom::new(family, index.clone()));
            }
        }
        out
    }

    /// Soundness self-check of the matrix: whenever a maps into b and b maps
    /// into c, a must map into c at least as strongly as the weaker of the two
    /// legs. This is what lets matchings compose, so embeddability is
    /// transitive.
    pub fn is_composition_closed(&self) -> bool {
        self.is_composition_closed_with(atom_rel)
    }

    pub fn is_composition_closed_with<F>(&self, rel: F) -> bool
    where
        F: Fn(&Atom, &Atom) -> RelationLevel,
    {
        let atoms = self.atoms();
        for a in &atoms {
            for b in &atoms {
                let ab = rel(a, b);
                if ab == RelationLevel::None {
                    continue;
                }
                for c in &atoms {
                    let bc = rel(b, c);
                    if bc == RelationLevel::None {
                        continue;
                    }
                    if rel(a, c) < ab.min(bc) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Full sanity sweep over the matrix: composition closure, homeomorphism
    /// only on the diagonal, and the symmetric entries of the D/E and G/H
    /// systems. Mutation tests downgrade single entries and expect this (or a
    /// verification run) to notice.
    pub fn matrix_self_check_with<F>(&self, rel: F) -> bool
    where
        F: Fn(&Atom, &Atom) -> RelationLevel,
    {
        let atoms = self.atoms();
        for a in &atoms {
            for b in &atoms {
                let level = rel(a, b);
                if (level == RelationLevel::Homeo) != (a == b) {
                    return false;
                }
                let symmetric_system = matches!(
                    (a.family, b.family),
                    (AtomFamily::D, AtomFamily::E)
                        | (AtomFamily::E, AtomFamily::D)
                        | (AtomFamily::G, AtomFamily::H)
                        | (AtomFamily::H, AtomFamily::G)
                );
                if symmetric_system && level != rel(b, a) {
                    return false;
                }
            }
        }
        self.is_composition_closed_with(rel)
    }
}
