//! Randomized invariants, 100 cases each. Run alone with
//! `cargo test -p orbital-core --test properties`.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(check: common::Checker, seed: u64) -> Result<(), TestCaseError> {
    check(&mut ChaCha8Rng::seed_from_u64(seed)).map_err(|e| TestCaseError::fail(format!("seed {seed}: {e}")))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fan_axioms(seed in any::<u64>()) {
        run(common::fan_axioms, seed)?;
    }

    #[test]
    fn divisor_family_round_trip(seed in any::<u64>()) {
        run(common::divisor_family_round_trip, seed)?;
    }

    #[test]
    fn hull_equals_halfspaces(seed in any::<u64>()) {
        run(common::hull_equals_halfspaces, seed)?;
    }

    #[test]
    fn odd_degree_vanishing(seed in any::<u64>()) {
        run(common::odd_degree_vanishing, seed)?;
    }

    #[test]
    fn dimension_bound(seed in any::<u64>()) {
        run(common::dimension_bound, seed)?;
    }

    #[test]
    fn relation_symmetry(seed in any::<u64>()) {
        run(common::relation_symmetry, seed)?;
    }

    #[test]
    fn delta_composition(seed in any::<u64>()) {
        run(common::delta_composition, seed)?;
    }
}
