//! A symbolic engine for representing pairs of quasiorders by topological
//! embeddability.
//!
//! Given two quasiorders leq1 ⊆ leq2 on a finite set, the engine builds one
//! space per element (a multiset of rigid building-block atoms standing for a
//! coproduct) such that leq1 is captured exactly by clopen embeddability,
//! leq2 forces closed embeddability, and incomparability in leq2 forbids even
//! injective continuous maps. A verifier then checks all three conditions
//! mechanically under an axiomatized embeddability calculus, with a brute-force
//! oracle cross-checking the calculus itself.
//!
//! The crate is organized as a library first: see the `examples/` directory
//! for one runnable program per capability, and the `quasirep` binary for the
//! batch interface.
//!
//! ```
//! use quasirep::{construct, validate_pair, verify, ElementId};
//!
//! let e = ElementId::new;
//! let universe = ["a", "b"].map(ElementId::new).into_iter().collect();
//! let pair = validate_pair(universe, [(e("a"), e("b"))], [(e("a"), e("b"))], false)?;
//! let construction = construct(&pair)?;
//! assert!(verify(&pair, &construction).pass);
//! # Ok::<(), quasirep::OrderError>(())
//! ```

pub mod atom;
pub mod construction;
pub mod harness;
pub mod order;
pub mod space;
pub mod verifier;

pub use atom::{atom_rel, Atom, AtomFamily, AtomRegistry, RelationLevel};
pub use construction::{construct, pipeline, Construction, PipelineState};
pub use order::{
    components, mutual_classes, order_on_components, quotient_pair, relation_r, relation_rdot,
    strict_order, transitive_envelope, validate_pair, BlockId, ComponentOrder, ElementId,
    OrderError, Partition, QuasiorderPair, Relation,
};
pub use space::{
    embeds, embeds_quick, feasible_matching, finitize, is_homeomorphic, oracle_embeds,
    CapacityRule, Count, Finitized, MatchingWitness, SpaceError, SymbolicSpace, Transfer,
};
pub use verifier::{
    verify, verify_intermediate, verify_quick, IntermediateReport, PairVerdict,
    VerificationReport,
};
