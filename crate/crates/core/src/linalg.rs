//! Exact integer linear algebra: row echelon form with a unimodular
//! transform, used for solving `x·A = b` over ℤ and for integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `U·A = H` with `U` unimodular and `H` in row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    h: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    /// Pivot column of each of the first `rank` rows of `H`.
    pivots: Vec<usize>,
    cols: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Integer(Vec<BigInt>),
    /// Solvable over ℚ only; the unique solution supported on pivot rows.
    RationalOnly(Vec<BigRational>),
    Inconsistent,
}

impl Echelon {
    /// Reduces the `rows.len() × cols` matrix given by `rows`.
    pub fn new(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let m = rows.len();
        let mut h = rows;
        assert!(h.iter().all(|r| r.len() == cols), "ragged matrix");
        let mut u: Vec<Vec<BigInt>> = (0..m)
            .map(|i| {
                let mut r = vec![BigInt::zero(); m];
                r[i] = BigInt::one();
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            if r == m {
                break;
            }
            loop {
                let best = (r..m)
                    .filter(|&i| !h[i][col].is_zero())
                    .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()));
                let Some(best) = best else { break };
                h.swap(r, best);
                u.swap(r, best);
                if h[r][col].is_negative() {
                    negate(&mut h[r][col..]);
                    negate(&mut u[r]);
                }
                let mut cleared = true;
                for i in r + 1..m {
                    if h[i][col].is_zero() {
                        continue;
                    }
                    let q = h[i][col].div_floor(&h[r][col]);
                    let (top, rest) = h.split_at_mut(i);
                    sub_scaled(&mut rest[0][col..], &top[r][col..], &q);
                    let (top, rest) = u.split_at_mut(i);
                    sub_scaled(&mut rest[0], &top[r], &q);
                    if !h[i][col].is_zero() {
                        cleared = false;
                    }
                }
                if cleared {
                    pivots.push(col);
                    r += 1;
                    break;
                }
            }
        }
        Echelon { h, u, pivots, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A ℤ-basis of `{x : x·A = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        self.u[self.rank()..].to_vec()
    }

    /// Solves `x·A = b`, preferring an integral solution.
    pub fn solve(&self, b: &[BigInt]) -> Solution {
        assert_eq!(b.len(), self.cols, "right-hand side has the wrong length");
        let mut residual: Vec<BigRational> = b.iter().map(|v| BigRational::from_integer(v.clone())).collect();
        let mut y = Vec::with_capacity(self.rank());
        for (k, &col) in self.pivots.iter().enumerate() {
            let coeff = &residual[col] / BigRational::from_integer(self.h[k][col].clone());
            if !coeff.is_zero() {
                for (c, hv) in self.h[k].iter().enumerate().skip(col) {
                    if !hv.is_zero() {
                        residual[c] -= &coeff * BigRational::from_integer(hv.clone());
                    }
                }
            }
            y.push(coeff);
        }
        if residual.iter().any(|v| !v.is_zero()) {
            return Solution::Inconsistent;
        }
        let m = self.u.len();
        let mut x = vec![BigRational::zero(); m];
        for (k, yk) in y.iter().enumerate() {
            if yk.is_zero() {
                continue;
            }
            for (j, uv) in self.u[k].iter().enumerate() {
                if !uv.is_zero() {
                    x[j] += yk * BigRational::from_integer(uv.clone());
                }
            }
        }
        if y.iter().all(|v| v.is_integer()) {
            Solution::Integer(x.into_iter().map(|v| v.to_integer()).collect())
        } else {
            Solution::RationalOnly(x)
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for v in row {
        *v = -std::mem::take(v);
    }
}

fn sub_scaled(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}
