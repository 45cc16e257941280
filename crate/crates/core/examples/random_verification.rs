//! Verify a batch of seeded random pairs and print a summary, including the
//! intermediate-stage observations.

use std::time::Instant;

use quasirep::construction::pipeline;
use quasirep::harness::random_pair;
use quasirep::verifier::{verify_intermediate, verify_quick};

fn main() {
    let samples = 200u64;
    let start = Instant::now();
    for size in [4usize, 5, 6] {
        let mut pass = 0;
        let mut observation_pass = 0;
        for index in 0..samples {
            let pair = random_pair(size, 10_000 + index, 0.3, 0.3);
            let (state, construction) = pipeline(&pair).unwrap();
            if verify_quick(&pair, &construction).pass {
                pass += 1;
            }
            if verify_intermediate(&state).pass {
                observation_pass += 1;
            }
        }
        println!(
            "size {size}: {pass}/{samples} verified, {observation_pass}/{samples} observation suites clean"
        );
    }
    println!("total time {:?}", start.elapsed());
}
