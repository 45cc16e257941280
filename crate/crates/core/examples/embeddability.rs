//! The embeddability calculus on its own: decide clopen/closed/injective
//! relations between small coproducts and print a matching witness.

use quasirep::atom::{Atom, AtomFamily, RelationLevel};
use quasirep::space::{embeds, is_homeomorphic, Count, SymbolicSpace};

fn space(entries: &[(AtomFamily, &str, Count)]) -> SymbolicSpace {
    SymbolicSpace::normalize(entries.iter().map(|(f, i, c)| (Atom::new(*f, *i), *c)))
}

fn show(name: &str, s: &SymbolicSpace) {
    let atoms: Vec<String> = s.entries().iter().map(|(a, c)| format!("{a}:{c}")).collect();
    println!("{name} = {{ {} }}", atoms.join(", "));
}

fn main() {
    use AtomFamily::*;
    let one = Count::Finite(1);

    // A sits in B as a clopen piece but not conversely.
    let a = space(&[(A, "x", one)]);
    let b = space(&[(B, "x", one)]);
    show("X", &a);
    show("Y", &b);
    for level in RelationLevel::EMBED_LEVELS {
        let (ok, witness) = embeds(&a, &b, level).unwrap();
        print!("  X into Y at {level}: {ok}");
        if let Some(w) = witness {
            let parts: Vec<String> = w
                .transfers
                .iter()
                .map(|t| format!("{} -> {} ({})", t.from, t.to, t.count))
                .collect();
            print!("  [{}]", parts.join(", "));
        }
        println!();
        let (back, _) = embeds(&b, &a, level).unwrap();
        println!("  Y into X at {level}: {back}");
    }

    // The ω pattern: closed both ways, clopen neither way, and the two
    // spaces are still non-homeomorphic.
    let om = Count::Omega;
    let u = space(&[(E, "x", om), (D, "x", om), (E, "y", om)]);
    let v = space(&[(E, "y", om), (D, "y", om), (E, "x", om)]);
    println!();
    show("U", &u);
    show("V", &v);
    println!("  homeomorphic: {}", is_homeomorphic(&u, &v));
    for level in [RelationLevel::Closed, RelationLevel::Clopen] {
        let (fwd, _) = embeds(&u, &v, level).unwrap();
        let (bwd, _) = embeds(&v, &u, level).unwrap();
        println!("  at {level}: U into V = {fwd}, V into U = {bwd}");
    }
}
