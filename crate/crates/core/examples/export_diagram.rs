//! Print the diagram of the derived orders for a pair whose pipeline has a
//! non-trivial block order, plus a matching-witness diagram.

use quasirep::atom::{Atom, AtomFamily, RelationLevel};
use quasirep::construction::pipeline;
use quasirep::harness::{export_dot, export_witness_dot};
use quasirep::order::{validate_pair, ElementId};
use quasirep::space::{embeds, Count, SymbolicSpace};

fn main() {
    let e = |l: &str| ElementId::new(l);
    // a below b in the second relation only, c and d mutually equivalent in
    // the second relation: two linkage blocks, one above the other, next to a
    // third one.
    let universe = ["a", "b", "c", "d"].map(ElementId::new).into_iter().collect();
    let pair = validate_pair(
        universe,
        [],
        [(e("a"), e("b")), (e("c"), e("d")), (e("d"), e("c"))],
        false,
    )
    .unwrap();
    let (state, _) = pipeline(&pair).unwrap();
    println!("{}", export_dot(&state));

    let x = SymbolicSpace::normalize([(Atom::new(AtomFamily::A, "x"), Count::Finite(1))]);
    let y = SymbolicSpace::normalize([(Atom::new(AtomFamily::B, "x"), Count::Finite(1))]);
    let (_, witness) = embeds(&x, &y, RelationLevel::Clopen).unwrap();
    println!("{}", export_witness_dot(&witness.unwrap(), RelationLevel::Clopen));
}
