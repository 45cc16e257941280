//! Cross-check the flow-based embeddability decision against the exhaustive
//! assignment-enumeration oracle on random spaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quasirep::atom::RelationLevel;
use quasirep::harness::random_space;
use quasirep::space::{embeds_quick, oracle_embeds};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for level in RelationLevel::EMBED_LEVELS {
        let mut agree = 0;
        let mut positives = 0;
        let samples = 500;
        for _ in 0..samples {
            let x = random_space(&mut rng, 6);
            let y = random_space(&mut rng, 6);
            let fast = embeds_quick(&x, &y, level).unwrap();
            let slow = oracle_embeds(&x, &y, level, 10_000).unwrap();
            if fast == slow {
                agree += 1;
            } else {
                println!("MISMATCH at {level}: {x:?} vs {y:?} (flow {fast}, oracle {slow})");
            }
            if fast {
                positives += 1;
            }
        }
        println!("{level}: {agree}/{samples} agree, {positives} positive instances");
    }
}
