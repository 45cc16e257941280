//! Walk through the order machinery step by step: quotient, strict order,
//! linkage relations, and the three component partitions.

use quasirep::construction::pipeline;
use quasirep::order::{validate_pair, ElementId, Partition};

fn show_partition(name: &str, partition: &Partition) {
    let blocks: Vec<String> = partition
        .blocks()
        .iter()
        .map(|(id, members)| {
            let ms: Vec<&str> = members.iter().map(|m| m.as_str()).collect();
            format!("{id} = {{{}}}", ms.join(", "))
        })
        .collect();
    println!("  {name}: {}", blocks.join("; "));
}

fn main() {
    let e = |l: &str| ElementId::new(l);
    // a and b mutually equivalent in leq1 (so they collapse into one block),
    // the block strictly ordered against c, d isolated.
    let universe = ["a", "b", "c", "d"].map(ElementId::new).into_iter().collect();
    let pair = validate_pair(
        universe,
        [(e("a"), e("b")), (e("b"), e("a")), (e("a"), e("c")), (e("b"), e("c"))],
        [
            (e("a"), e("b")),
            (e("b"), e("a")),
            (e("a"), e("c")),
            (e("b"), e("c")),
            (e("c"), e("a")),
            (e("c"), e("b")),
        ],
        false,
    )
    .unwrap();

    let (state, construction) = pipeline(&pair).unwrap();
    show_partition("mutual classes", &state.classes);
    println!("  quotient universe: {:?}", state.quotient.universe());
    println!(
        "  strict order: {:?}",
        state.strict.pairs().iter().map(|(x, y)| format!("{x}<{y}")).collect::<Vec<_>>()
    );
    show_partition("strict-order components", &state.components_c);
    show_partition("linkage components", &state.components_l);
    show_partition("third-level components", &state.components_t);
    println!(
        "  block order pairs: {:?}",
        state
            .l_order
            .pairs()
            .iter()
            .filter(|(x, y)| x != y)
            .map(|(x, y)| format!("{x} below {y}"))
            .collect::<Vec<_>>()
    );
    println!("\nfinal spaces:");
    for (q, space) in &construction.spaces {
        let atoms: Vec<String> = space.entries().iter().map(|(a, c)| format!("{a}:{c}")).collect();
        println!("  X({q}) = {{ {} }}", atoms.join(", "));
    }
}
