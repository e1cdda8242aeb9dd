use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Finite CW complex given by its cellular chain complex. `boundary[d]` is
/// the matrix of `∂_d: C_d → C_{d-1}` (`boundary[0]` has no rows).
/// An involution is a cellular map of order two, recorded as a signed
/// permutation of the cells in each degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CwComplex {
    labels: Vec<Vec<String>>,
    boundary: Vec<IntMatrix>,
    involution: Option<Vec<Vec<(usize, i64)>>>,
}

impl CwComplex {
    /// Validates shapes, `∂∂ = 0`, and for an involution `τ² = 1`, `∂τ = τ∂`.
    pub fn new(
        labels: Vec<Vec<String>>,
        boundary: Vec<IntMatrix>,
        involution: Option<Vec<Vec<(usize, i64)>>>,
    ) -> Result<Self> {
        if labels.len() != boundary.len() {
            return Err(Error::input("one boundary matrix per degree is required"));
        }
        for (d, b) in boundary.iter().enumerate() {
            let below = if d == 0 { 0 } else { labels[d - 1].len() };
            if b.rows() != below || b.cols() != labels[d].len() {
                return Err(Error::input(format!("boundary matrix in degree {d} has the wrong shape")));
            }
        }
        let cw = CwComplex {
            labels,
            boundary,
            involution,
        };
        if let Some(d) = cw.first_nonzero_square() {
            return Err(Error::input(format!("∂∘∂ is nonzero in degree {d}")));
        }
        if let Some(t) = &cw.involution {
            cw.check_involution(t)?;
        }
        Ok(cw)
    }

    fn first_nonzero_square(&self) -> Option<usize> {
        (2..self.boundary.len()).find(|&d| !(&self.boundary[d - 1] * &self.boundary[d]).is_zero())
    }

    /// `∂_{d-1} ∂_d = 0` in every degree, recomputed.
    pub fn boundary_squared_zero(&self) -> bool {
        self.first_nonzero_square().is_none()
    }

    fn check_involution(&self, t: &[Vec<(usize, i64)>]) -> Result<()> {
        if t.len() != self.labels.len() {
            return Err(Error::input("involution must be given in every degree"));
        }
        for (d, perm) in t.iter().enumerate() {
            if perm.len() != self.labels[d].len() {
                return Err(Error::input(format!("involution has the wrong size in degree {d}")));
            }
            for (i, &(j, s)) in perm.iter().enumerate() {
                if j >= perm.len() || s.abs() != 1 {
                    return Err(Error::input("involution must be a signed permutation"));
                }
                let (back, s2) = perm[j];
                if back != i || s * s2 != 1 {
                    return Err(Error::input("involution does not square to the identity"));
                }
            }
        }
        for d in 1..self.labels.len() {
            let lhs = &self.boundary[d] * &self.involution_matrix(d).expect("present");
            let rhs = &self.involution_matrix(d - 1).expect("present") * &self.boundary[d];
            if lhs != rhs {
                return Err(Error::input(format!("involution does not commute with ∂ in degree {d}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len().saturating_sub(1)
    }

    pub fn degrees(&self) -> usize {
        self.labels.len()
    }

    pub fn cell_count(&self, d: usize) -> usize {
        self.labels.get(d).map_or(0, |l| l.len())
    }

    pub fn labels(&self, d: usize) -> &[String] {
        self.labels.get(d).map_or(&[], |l| l.as_slice())
    }

    /// `∂_d`; an empty matrix of the right shape outside the range.
    pub fn boundary(&self, d: usize) -> IntMatrix {
        match self.boundary.get(d) {
            Some(b) => b.clone(),
            None => IntMatrix::zeros(self.cell_count(d.wrapping_sub(1)), self.cell_count(d)),
        }
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    pub fn involution(&self, d: usize) -> Option<&[(usize, i64)]> {
        self.involution.as_ref().and_then(|t| t.get(d)).map(|v| v.as_slice())
    }

    pub fn involution_matrix(&self, d: usize) -> Option<IntMatrix> {
        let perm = self.involution(d)?;
        let mut m = IntMatrix::zeros(perm.len(), perm.len());
        for (i, &(j, s)) in perm.iter().enumerate() {
            m.set(j, i, s.into());
        }
        Some(m)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.degrees())
            .map(|d| if d % 2 == 0 { 1 } else { -1 } * self.cell_count(d) as i64)
            .sum()
    }

    /// Same cells and boundaries without the involution.
    pub fn forget_involution(mut self) -> Self {
        self.involution = None;
        self
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Circle with complex conjugation: vertices `v+` (at 1) and `v-` (at -1),
/// edges `u` and `l` both running from `v+` to `v-`. The involution fixes
/// the vertices and swaps the edges.
pub fn circle_with_involution() -> CwComplex {
    CwComplex::new(
        vec![labels(&["v+", "v-"]), labels(&["u", "l"])],
        vec![
            IntMatrix::zeros(0, 2),
            IntMatrix::from_rows(&[vec![-1, -1], vec![1, 1]]),
        ],
        Some(vec![vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]]),
    )
    .expect("valid circle")
}

/// Circle with the half turn `α ↦ -α`: vertices `p` (at 1), `m` (at -1),
/// edge `u` from `p` to `m` and `l` from `m` to `p`. The action is free.
pub fn circle_with_rotation() -> CwComplex {
    CwComplex::new(
        vec![labels(&["p", "m"]), labels(&["u", "l"])],
        vec![
            IntMatrix::zeros(0, 2),
            IntMatrix::from_rows(&[vec![-1, 1], vec![1, -1]]),
        ],
        Some(vec![vec![(1, 1), (0, 1)], vec![(1, 1), (0, 1)]]),
    )
    .expect("valid circle")
}

/// Circle with one vertex `w` and one edge `s`.
pub fn plain_circle() -> CwComplex {
    CwComplex::new(
        vec![labels(&["w"]), labels(&["s"])],
        vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1)],
        None,
    )
    .expect("valid circle")
}

/// Product cell `(a, b)` in degree `d` sits at `offset[d][p] + a * n_b + b`
/// for `p = dim a`.
fn product2(x: &CwComplex, y: &CwComplex) -> CwComplex {
    let top = x.dim() + y.dim();
    let mut index: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); top + 1];
    for (d, cells) in index.iter_mut().enumerate() {
        for p in 0..=d.min(x.dim()) {
            let q = d - p;
            if q > y.dim() {
                continue;
            }
            for a in 0..x.cell_count(p) {
                for b in 0..y.cell_count(q) {
                    cells.push((p, a, q, b));
                }
            }
        }
    }
    let position = |d: usize, p: usize, a: usize, b: usize| -> usize {
        index[d]
            .iter()
            .position(|&(pp, aa, _, bb)| pp == p && aa == a && bb == b)
            .expect("cell exists")
    };
    let mut boundary = vec![IntMatrix::zeros(0, index[0].len())];
    for d in 1..=top {
        let mut m = IntMatrix::zeros(index[d - 1].len(), index[d].len());
        for (col, &(p, a, q, b)) in index[d].iter().enumerate() {
            // ∂(a × b) = ∂a × b + (-1)^p a × ∂b
            if p > 0 {
                let bx = x.boundary(p);
                for r in 0..x.cell_count(p - 1) {
                    let c = bx.get(r, a);
                    if !c.is_zero() {
                        let row = position(d - 1, p - 1, r, b);
                        let v = m.get(row, col) + c;
                        m.set(row, col, v);
                    }
                }
            }
            if q > 0 {
                let by = y.boundary(q);
                let sign = if p % 2 == 0 { 1 } else { -1 };
                for r in 0..y.cell_count(q - 1) {
                    let c = by.get(r, b);
                    if !c.is_zero() {
                        let row = position(d - 1, p, a, r);
                        let v = m.get(row, col) + c * BigInt::from(sign);
                        m.set(row, col, v);
                    }
                }
            }
        }
        boundary.push(m);
    }
    let labels = index
        .iter()
        .map(|cells| {
            cells
                .iter()
                .map(|&(p, a, q, b)| format!("{}×{}", x.labels(p)[a], y.labels(q)[b]))
                .collect()
        })
        .collect();
    let involution = match (&x.involution, &y.involution) {
        (Some(_), Some(_)) => Some(
            index
                .iter()
                .enumerate()
                .map(|(d, cells)| {
                    cells
                        .iter()
                        .map(|&(p, a, q, b)| {
                            let (ta, sa) = x.involution(p).expect("present")[a];
                            let (tb, sb) = y.involution(q).expect("present")[b];
                            (position(d, p, ta, tb), sa * sb)
                        })
                        .collect()
                })
                .collect(),
        ),
        _ => None,
    };
    CwComplex::new(labels, boundary, involution).expect("products of complexes are complexes")
}

/// Product with the tensor sign rule; carries the diagonal involution when
/// every factor has one.
pub fn product(xs: &[CwComplex]) -> Result<CwComplex> {
    let (first, rest) = xs
        .split_first()
        .ok_or_else(|| Error::input("product of an empty list"))?;
    Ok(rest.iter().fold(first.clone(), |acc, x| product2(&acc, x)))
}

/// Cellular chain complex of `X/τ`: one cell per orbit, represented by its
/// lowest-indexed cell. Requires every cell fixed by `τ` to be a vertex
/// fixed with sign `+1`; a higher cell mapped to itself is not fixed
/// pointwise and the quotient would not be cellular.
pub fn quotient_by_involution(x: &CwComplex) -> Result<CwComplex> {
    let tau = x
        .involution
        .as_ref()
        .ok_or_else(|| Error::input("complex has no involution"))?;
    let mut labels = Vec::new();
    // projection: cell ↦ (orbit index, sign)
    let mut proj: Vec<Vec<(usize, i64)>> = Vec::new();
    for (d, perm) in tau.iter().enumerate() {
        let mut names = Vec::new();
        let mut p = vec![(0usize, 0i64); perm.len()];
        for (i, &(j, s)) in perm.iter().enumerate() {
            if j == i {
                if d > 0 || s != 1 {
                    return Err(Error::input(format!(
                        "cell {} is mapped to itself but not fixed pointwise",
                        x.labels(d)[i]
                    )));
                }
                p[i] = (names.len(), 1);
                names.push(x.labels(d)[i].clone());
            } else if i < j {
                p[i] = (names.len(), 1);
                names.push(format!("[{}]", x.labels(d)[i]));
            } else {
                // τ(j) = s i, and j ≡ τ(j) in the coinvariants
                let (orbit, _) = p[j];
                p[i] = (orbit, perm[j].1);
            }
        }
        labels.push(names);
        proj.push(p);
    }
    let mut boundary = vec![IntMatrix::zeros(0, labels[0].len())];
    for d in 1..labels.len() {
        let bx = x.boundary(d);
        let mut m = IntMatrix::zeros(labels[d - 1].len(), labels[d].len());
        for (i, &(j, _)) in tau[d].iter().enumerate() {
            if j < i {
                continue;
            }
            let (col, _) = proj[d][i];
            for r in 0..x.cell_count(d - 1) {
                let c = bx.get(r, i);
                if c.is_zero() {
                    continue;
                }
                let (row, s) = proj[d - 1][r];
                let v = m.get(row, col) + c * BigInt::from(s);
                m.set(row, col, v);
            }
        }
        boundary.push(m);
    }
    let q = CwComplex::new(labels, boundary, None)
        .map_err(|e| Error::Internal(format!("quotient complex invalid: {e}")))?;
    let expected = super::homology::invariant_rational_ranks(x)?;
    let got: Vec<usize> = super::homology::rational_ranks(&q);
    if expected != got {
        return Err(Error::Internal(format!(
            "quotient rational homology {got:?} differs from the invariant ranks {expected:?}"
        )));
    }
    Ok(q)
}

/// `T^k` with the diagonal conjugation involution.
pub fn torus_with_involution(k: usize) -> Result<CwComplex> {
    if k == 0 {
        return Err(Error::input("torus dimension must be positive"));
    }
    product(&vec![circle_with_involution(); k])
}
