//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMat {
    let r = rows.len();
    let cols = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, cols, |i, j| rows[i][j])
}

pub fn diag(d: &[Complex64]) -> CMat {
    CMat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { c(0.0, 0.0) })
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

pub fn dist(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn unitarity_residual(m: &CMat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    dist(&(m.adjoint() * m), &eye(m.nrows()))
}

/// Spectral norm.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0, |a: f64, &s| a.max(s))
}

/// `m^e` for a unitary `m`, negative powers through the adjoint.
pub fn unitary_power(m: &CMat, e: i64) -> CMat {
    let mut base = if e < 0 { m.adjoint() } else { m.clone() };
    let mut n = e.unsigned_abs();
    let mut out = eye(m.nrows());
    while n > 0 {
        if n & 1 == 1 {
            out = &out * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    out
}

pub fn block_diag(blocks: &[&CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) / std::f64::consts::SQRT_2
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// `(m - m^H) / 2i`, Hermitian.
pub fn anti_hermitian_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * c(0.0, -0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let he = hermitian_part(h).symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| he.eigenvalues[a].total_cmp(&he.eigenvalues[b]));
    let vals = idx.iter().map(|&i| he.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, j| he.eigenvectors[(r, idx[j])]);
    (vals, vecs)
}

/// Splits sorted values into maximal runs whose consecutive gaps are ≤ `gap`.
pub fn cluster_sorted(vals: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || vals[i] - vals[i - 1] > gap {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Smallest gap between consecutive clusters; infinite with one cluster.
pub fn min_cluster_gap(vals: &[f64], clusters: &[std::ops::Range<usize>]) -> f64 {
    clusters
        .windows(2)
        .map(|w| vals[w[1].start] - vals[w[0].end - 1])
        .fold(f64::INFINITY, f64::min)
}

pub fn columns(m: &CMat, r: std::ops::Range<usize>) -> CMat {
    m.columns(r.start, r.len()).into_owned()
}

/// Orthonormal basis of the null space of `m`; singular values at most
/// `rel_tol * sigma_max` count as zero.
#[derive(Clone, Debug)]
pub struct NullSpace {
    pub basis: CMat,
    /// All singular values of the (padded) system, descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Whether some singular value lies within a factor `margin` of the threshold.
    pub fn ambiguous(&self, margin: f64) -> bool {
        self.threshold > 0.0
            && self
                .singular_values
                .iter()
                .any(|&s| s > self.threshold / margin && s < self.threshold * margin)
    }
}

pub fn null_space(m: &CMat, rel_tol: f64) -> NullSpace {
    null_space_scaled(m, rel_tol, 0.0)
}

/// As [`null_space`], with the threshold measured against `max(sigma_max, scale)`
/// so that a system which is zero up to rounding has full null space.
pub fn null_space_scaled(m: &CMat, rel_tol: f64, scale: f64) -> NullSpace {
    let cols = m.ncols();
    if cols == 0 {
        return NullSpace {
            basis: CMat::zeros(0, 0),
            singular_values: vec![],
            threshold: 0.0,
        };
    }
    let padded = if m.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = s.iter().fold(0.0f64, |a, &x| a.max(x));
    let threshold = rel_tol * smax.max(scale);
    let null: Vec<usize> = (0..s.len()).filter(|&i| s[i] <= threshold).collect();
    let basis = CMat::from_fn(cols, null.len(), |r, j| v_t[(null[j], r)].conj());
    let mut sorted = s;
    sorted.sort_by(|a, b| b.total_cmp(a));
    NullSpace {
        basis,
        singular_values: sorted,
        threshold,
    }
}

/// Unitary polar factor `W V^H` of `P = W Σ V^H`; rejects (numerically) singular `P`.
pub fn polar_unitary(p: &CMat, rel_tol: f64) -> Result<CMat> {
    if p.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch {
            expected: p.nrows(),
            found: p.ncols(),
        });
    }
    if p.is_empty() {
        return Ok(p.clone());
    }
    let svd = p.clone().svd(true, true);
    let s = &svd.singular_values;
    let smax = s.iter().fold(0.0f64, |a, &x| a.max(x));
    let smin = s.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    if smax == 0.0 || smin <= rel_tol * smax {
        return Err(Error::input("matrix is singular; no polar unitary factor"));
    }
    Ok(svd.u.expect("U") * svd.v_t.expect("V^H"))
}

/// Re-unitarize a nearly unitary matrix.
pub fn nearest_unitary(m: &CMat) -> CMat {
    polar_unitary(m, 0.0).unwrap_or_else(|_| m.clone())
}

/// Orthonormal bases of the joint eigenspaces of pairwise commuting
/// Hermitian matrices. Eigenvalues closer than `gap` are treated as equal.
pub fn joint_eigenspaces(hs: &[CMat], gap: f64) -> Vec<CMat> {
    let n = hs.first().map_or(0, |h| h.nrows());
    let mut blocks = vec![eye(n)];
    for h in hs {
        let mut next = Vec::new();
        for e in blocks {
            let restricted = e.adjoint() * h * &e;
            let (vals, vecs) = hermitian_eigen(&restricted);
            for r in cluster_sorted(&vals, gap) {
                next.push(&e * columns(&vecs, r));
            }
        }
        blocks = next;
    }
    blocks
}

pub fn joint_eigenbasis(hs: &[CMat], gap: f64) -> CMat {
    let n = hs.first().map_or(0, |h| h.nrows());
    let blocks = joint_eigenspaces(hs, gap);
    let refs: Vec<&CMat> = blocks.iter().collect();
    hcat(&refs, n)
}

pub fn hcat(ms: &[&CMat], rows: usize) -> CMat {
    let cols: usize = ms.iter().map(|m| m.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for m in ms {
        out.view_mut((0, at), (rows, m.ncols())).copy_from(m);
        at += m.ncols();
    }
    out
}

/// Eigen-decomposition `V = W diag(e^{iθ}) W^H` of a unitary, θ in (-π, π].
pub fn unitary_eigen(v: &CMat) -> Result<(CMat, Vec<f64>)> {
    let n = v.nrows();
    let w = joint_eigenbasis(&[hermitian_part(v), anti_hermitian_part(v)], 1e-9);
    let w = nearest_unitary(&w);
    let d = w.adjoint() * v * &w;
    let mut thetas = Vec::with_capacity(n);
    for i in 0..n {
        let mut t = d[(i, i)].arg();
        if t <= -std::f64::consts::PI + 1e-15 {
            t = std::f64::consts::PI;
        }
        thetas.push(t);
    }
    let back = &w * diag(&thetas.iter().map(|&t| cis(t)).collect::<Vec<_>>()) * w.adjoint();
    let err = dist(&back, v);
    if err > 1e-8 {
        return Err(Error::Tolerance(format!(
            "unitary eigen-decomposition residual {err:.3e}"
        )));
    }
    Ok((w, thetas))
}

/// `W diag(e^{i s θ}) W^H`.
pub fn unitary_fractional_power(w: &CMat, thetas: &[f64], s: f64) -> CMat {
    let d: Vec<Complex64> = thetas.iter().map(|&t| cis(s * t)).collect();
    w * diag(&d) * w.adjoint()
}

/// `exp(X)` for skew-Hermitian `X`, via the Hermitian eigendecomposition of `iX`.
pub fn exp_skew(x: &CMat) -> CMat {
    let h = x * c(0.0, -1.0);
    let (vals, vecs) = hermitian_eigen(&h);
    let d: Vec<Complex64> = vals.iter().map(|&l| cis(l)).collect();
    &vecs * diag(&d) * vecs.adjoint()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}
