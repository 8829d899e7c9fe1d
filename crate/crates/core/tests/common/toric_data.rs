//! The ℙ¹, ℙ² and ℙ¹×ℙ¹ toric datasets with levels inside `K₀` of their fans.

#![allow(dead_code)]

use num_rational::BigRational;
use sfpas_core::linalg::rat_int;
use sfpas_core::toric::{Fan, ToricMatrix};

pub struct Dataset {
    pub name: &'static str,
    pub v: ToricMatrix,
    pub fan: Fan,
    pub levels: Vec<Vec<BigRational>>,
}

fn ints(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| rat_int(x)).collect()
}

pub fn datasets() -> Vec<Dataset> {
    vec![
        Dataset {
            name: "P1",
            v: ToricMatrix::new(vec![vec![1, -1]]).unwrap(),
            fan: Fan::new(vec![vec![0], vec![1]]),
            levels: vec![ints(&[1, 1]), ints(&[0, 3]), ints(&[5, -2])],
        },
        Dataset {
            name: "P2",
            v: ToricMatrix::new(vec![vec![1, 0, -1], vec![0, 1, -1]]).unwrap(),
            fan: Fan::new(vec![vec![0, 1], vec![1, 2], vec![0, 2]]),
            levels: vec![ints(&[0, 0, 1]), ints(&[1, 1, 1]), ints(&[2, -1, 0])],
        },
        Dataset {
            name: "P1xP1",
            v: ToricMatrix::new(vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1]]).unwrap(),
            fan: Fan::new(vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]]),
            levels: vec![ints(&[1, 1, 1, 1]), ints(&[1, 0, 2, 0]), ints(&[0, 1, -1, 3])],
        },
    ]
}

/// All subsets of `0..r` as sorted index lists.
pub fn patterns(r: usize) -> Vec<Vec<usize>> {
    (0..1usize << r).map(|mask| (0..r).filter(|j| mask >> j & 1 == 1).collect()).collect()
}
