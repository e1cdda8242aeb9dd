use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::intmat::IntMatrix;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, nonnegative,
/// each nonzero diagonal entry dividing the next. Inverses are kept so
/// callers can change coordinates without a separate inversion.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += f * row[src]; the inverse gets col[src] -= f * col[dst].
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.d.add_row(dst, src, f);
        self.u.add_row(dst, src, f);
        self.u_inv.add_col(src, dst, &-f);
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.d.add_col(dst, src, f);
        self.v.add_col(dst, src, f);
        self.v_inv.add_row(src, dst, &-f);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        // negating a row of u negates the matching column of u^{-1}
        for r in 0..self.u_inv.rows() {
            let x = -self.u_inv.get(r, i);
            self.u_inv.set(r, i, x);
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            // smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = w.d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w, rank);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if w.d.get(i, t).is_zero() {
                    continue;
                }
                let q = w.d.get(i, t) / w.d.get(t, t);
                w.add_row(i, t, &-q);
                if !w.d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if w.d.get(t, j).is_zero() {
                    continue;
                }
                let q = w.d.get(t, j) / w.d.get(t, t);
                w.add_col(j, t, &-q);
                if !w.d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = w.d.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.d.get(i, j).is_multiple_of(&p)));
            if let Some(i) = bad {
                w.add_row(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
        rank += 1;
    }
    finish(w, rank)
}

fn finish(w: Work, rank: usize) -> SmithForm {
    SmithForm {
        u: w.u,
        u_inv: w.u_inv,
        d: w.d,
        v: w.v,
        v_inv: w.v_inv,
        rank,
    }
}

/// Rank over the rationals.
pub fn rational_rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// A basis of `{x in Z^n : m x = 0}`, each vector with positive leading entry.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(m);
    (s.rank..m.cols()).map(|j| sign_normalized(s.v.column(j))).collect()
}

pub(crate) fn sign_normalized(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}
