//! Fixed benchmark inputs, shared by the criterion benches.

use colpack::generators::{gen_random, RandomConfig, SizeProfile, WeightProfile};
use colpack::lp::solve_lp;
use colpack::{FractionalSolution, PipInstance, Relaxation, SubmodularOracle};

/// Random unit-capacity instance with mixed sizes and weights in `[0.5, 2]`.
pub fn instance(n: usize, m: usize, k: usize, seed: u64) -> PipInstance {
    gen_random(&RandomConfig {
        sizes: SizeProfile::Mixed { big_fraction: 0.3 },
        weights: WeightProfile::Uniform { lo: 0.5, hi: 2.0 },
        ..RandomConfig::new(n, m, k, seed)
    })
    .expect("benchmark configuration is valid")
}

pub fn lp_point(inst: &PipInstance, relaxation: Relaxation) -> FractionalSolution {
    solve_lp(&relaxation.build(inst).expect("unit bounds")).expect("packing LPs are feasible and bounded")
}

pub fn coverage(n: usize, seed: u64) -> SubmodularOracle {
    SubmodularOracle::random_coverage(n, 2 * n, 0.25, seed).expect("valid coverage parameters")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(instance(20, 10, 3, 1), instance(20, 10, 3, 1));
        let inst = instance(20, 10, 3, 1);
        assert!(lp_point(&inst, Relaxation::Natural).objective > 0.0);
        assert_eq!(coverage(6, 2), coverage(6, 2));
    }
}
