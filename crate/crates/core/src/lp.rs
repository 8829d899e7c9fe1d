//! Exact rational linear programming: a dense two-phase simplex with Bland's rule.
//!
//! Problems here are tiny (tens of variables), so the tableau is rebuilt eagerly and
//! reduced costs are recomputed every iteration. Bland's rule guarantees termination.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Constraint {
    coeffs: Vec<BigRational>,
    rel: Relation,
    rhs: BigRational,
}

/// `maximize c·x` subject to linear constraints, each variable either free or `≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    free: Vec<bool>,
    objective: Vec<BigRational>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn optimal(&self) -> Option<(&BigRational, &[BigRational])> {
        match self {
            LpOutcome::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// `num_vars` variables, all constrained to be nonnegative until [`Self::set_free`].
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            free: vec![false; num_vars],
            objective: vec![BigRational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn set_all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn maximize(&mut self, c: Vec<BigRational>) -> &mut Self {
        assert_eq!(c.len(), self.num_vars(), "objective length");
        self.objective = c;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint length");
        self.constraints.push(Constraint { coeffs, rel, rhs });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        // standard form columns: split free variables, then one slack per inequality
        let mut col_of = Vec::with_capacity(self.num_vars());
        let mut ncols = 0;
        for &free in &self.free {
            col_of.push((ncols, free));
            ncols += if free { 2 } else { 1 };
        }
        let n_struct = ncols;
        let n_slack = self.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
        let n_real = n_struct + n_slack;
        let m = self.constraints.len();
        let width = n_real + m + 1;

        let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        let mut slack = n_struct;
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![BigRational::zero(); width];
            for (v, a) in c.coeffs.iter().enumerate() {
                let (col, free) = col_of[v];
                row[col] = a.clone();
                if free {
                    row[col + 1] = -a.clone();
                }
            }
            match c.rel {
                Relation::Le => {
                    row[slack] = BigRational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -BigRational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[width - 1] = c.rhs.clone();
            if c.rhs.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            row[n_real + i] = BigRational::one();
            tab.push(row);
        }
        let mut basis: Vec<usize> = (n_real..n_real + m).collect();

        // phase 1: maximize -(sum of artificials)
        let mut phase1 = vec![BigRational::zero(); width - 1];
        phase1[n_real..n_real + m].iter_mut().for_each(|c| *c = -BigRational::one());
        let allowed: Vec<bool> = (0..width - 1).map(|_| true).collect();
        if simplex(&mut tab, &mut basis, &phase1, &allowed).is_err() {
            unreachable!("phase 1 is bounded");
        }
        let infeas: BigRational = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n_real)
            .map(|(i, _)| tab[i][width - 1].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < tab.len() {
            if basis[i] >= n_real {
                if let Some(col) = (0..n_real).find(|&j| !tab[i][j].is_zero()) {
                    pivot(&mut tab, &mut basis, i, col);
                } else {
                    tab.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }

        let mut cost = vec![BigRational::zero(); width - 1];
        for (v, c) in self.objective.iter().enumerate() {
            let (col, free) = col_of[v];
            cost[col] = c.clone();
            if free {
                cost[col + 1] = -c.clone();
            }
        }
        let allowed: Vec<bool> = (0..width - 1).map(|j| j < n_real).collect();
        if simplex(&mut tab, &mut basis, &cost, &allowed).is_err() {
            return LpOutcome::Unbounded;
        }

        let mut std_x = vec![BigRational::zero(); n_real];
        for (i, &b) in basis.iter().enumerate() {
            if b < n_real {
                std_x[b] = tab[i][width - 1].clone();
            }
        }
        let x: Vec<BigRational> = col_of
            .iter()
            .map(|&(col, free)| if free { &std_x[col] - &std_x[col + 1] } else { std_x[col].clone() })
            .collect();
        let value = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { value, x }
    }
}

struct Unbounded;

fn simplex(
    tab: &mut [Vec<BigRational>],
    basis: &mut [usize],
    cost: &[BigRational],
    allowed: &[bool],
) -> Result<(), Unbounded> {
    let rhs = cost.len();
    loop {
        // Bland: lowest-index column with positive reduced cost
        let entering = (0..cost.len()).filter(|&j| allowed[j] && !basis.contains(&j)).find(|&j| {
            let z: BigRational = basis.iter().enumerate().map(|(i, &b)| &cost[b] * &tab[i][j]).sum();
            (&cost[j] - z).is_positive()
        });
        let Some(col) = entering else {
            return Ok(());
        };
        let mut best: Option<(BigRational, usize)> = None;
        for (i, row) in tab.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[col];
            let better = match &best {
                None => true,
                Some((r, bi)) => ratio < *r || (ratio == *r && basis[i] < basis[*bi]),
            };
            if better {
                best = Some((ratio, i));
            }
        }
        let Some((_, row)) = best else {
            return Err(Unbounded);
        };
        pivot(tab, basis, row, col);
    }
}

fn pivot(tab: &mut [Vec<BigRational>], basis: &mut [usize], row: usize, col: usize) {
    let inv = tab[row][col].recip();
    tab[row].iter_mut().for_each(|x| *x *= &inv);
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    basis[row] = col;
}
