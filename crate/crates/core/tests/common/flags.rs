//! Seeded random flag chains shared by the oracle tests and the acceptance run.

#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;
use sfpas_core::family::FlagChain;
use sfpas_core::linalg::{rat, ExactMatrix};

/// `m ≤ 3` maps between spaces of dimension `≤ 4`, entries `p/q` in `[−3, 3]` with
/// `q ∈ {1, 2}` and a bias towards zero, levels drawn from `{1/2, 1, 2}`.
pub fn random_flag_chain<R: Rng>(rng: &mut R) -> FlagChain {
    let m = rng.gen_range(1..=3);
    let dims: Vec<usize> = (0..=m).map(|_| rng.gen_range(1..=4)).collect();
    let zero_bias = rng.gen_range(0.0..0.6);
    let maps = (0..m)
        .map(|i| {
            let (r, c) = (dims[i + 1], dims[i]);
            let vals: Vec<BigRational> = (0..r * c)
                .map(|_| {
                    if rng.gen_bool(zero_bias) {
                        rat(0, 1)
                    } else {
                        let q = rng.gen_range(1..=2);
                        rat(rng.gen_range(-3 * q..=3 * q), q)
                    }
                })
                .collect();
            ExactMatrix::from_rationals(r, c, &vals)
        })
        .collect();
    let choices = [rat(1, 2), rat(1, 1), rat(2, 1)];
    let levels = (0..m).map(|_| choices[rng.gen_range(0..3)].clone()).collect();
    FlagChain::new(dims, maps, levels).expect("consistent shapes")
}
