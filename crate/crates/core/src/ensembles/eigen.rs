//! Dense Hermitian eigensolvers.
//!
//! Two independent routes:
//!
//! - [`hermitian_eigenvalues`]: Householder reduction to real symmetric
//!   tridiagonal form followed by implicit QL. This is the production path.
//! - [`jacobi_eigen`]: cyclic Jacobi rotations on a real symmetric matrix,
//!   returning eigenvectors too. Complex Hermitian input goes through the
//!   real embedding `[[Re, −Im], [Im, Re]]`, which doubles every eigenvalue.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_re(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs2(self) -> f64;
    fn scale(self, k: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs2(self) -> f64 {
        self * self
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

const QL_MAX_ITER: usize = 60;
const JACOBI_MAX_SWEEPS: usize = 40;
const JACOBI_REL_TOL: f64 = 1e-13;

/// Reduces a dense Hermitian matrix (row-major, overwritten) to a real
/// symmetric tridiagonal matrix with the same spectrum.
///
/// Returns the diagonal and the moduli of the sub-diagonal; the last
/// sub-diagonal slot is a zero pad.
pub(crate) fn tridiagonalize<T: Scalar>(a: &mut [T], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let m0 = k + 1;
        let alpha2: f64 = (m0..n).map(|i| a[i * n + k].abs2()).sum();
        if alpha2 == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let alpha = math::sqrt(alpha2);
        let x0 = a[m0 * n + k];
        let x0_abs = math::sqrt(x0.abs2());
        for i in m0..n {
            v[i] = a[i * n + k];
        }
        // v = x + phase(x0) α e1 makes v^H x real
        v[m0] = if x0_abs == 0.0 {
            T::from_re(alpha)
        } else {
            x0.scale(1.0 + alpha / x0_abs)
        };
        let tau = 1.0 / (alpha * (alpha + x0_abs));
        for i in m0..n {
            let mut acc = T::zero();
            for j in m0..n {
                acc = acc + a[i * n + j] * v[j];
            }
            p[i] = acc.scale(tau);
        }
        let mut vhp = 0.0;
        for i in m0..n {
            vhp += (v[i].conj() * p[i]).re();
        }
        let kappa = 0.5 * tau * vhp;
        for i in m0..n {
            p[i] = p[i] - v[i].scale(kappa);
        }
        for i in m0..n {
            for j in m0..n {
                a[i * n + j] = a[i * n + j] - v[i] * p[j].conj() - p[i] * v[j].conj();
            }
        }
        off[k] = alpha;
    }
    for (k, d) in diag.iter_mut().enumerate() {
        *d = a[k * n + k].re();
    }
    if n >= 2 {
        off[n - 2] = math::sqrt(a[(n - 1) * n + (n - 2)].abs2());
    }
    off[n - 1] = 0.0;
    (diag, off)
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL.
///
/// `diag` is overwritten with the eigenvalues (unsorted); `off[i]` couples
/// rows `i` and `i + 1` and is destroyed.
pub(crate) fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::Solver {
                    what: "implicit QL",
                    iterations: iter,
                    residual: off[l].abs(),
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = math::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = math::hypot(f, g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

fn check_square<T>(a: &[T], n: usize) -> Result<()> {
    if n == 0 || a.len() != n * n {
        return Err(Error::domain(alloc::format!(
            "expected a non-empty {n}x{n} matrix, got {} entries",
            a.len()
        )));
    }
    Ok(())
}

/// Ascending eigenvalues of a dense complex Hermitian matrix (row-major).
///
/// Only the lower triangle is read.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Result<Vec<f64>> {
    check_square(a, n)?;
    let mut work = a.to_vec();
    hermitize(&mut work, n);
    let (mut d, mut e) = tridiagonalize(&mut work, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Ascending eigenvalues of a dense real symmetric matrix (row-major).
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    check_square(a, n)?;
    let mut work = a.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            work[i * n + j] = work[j * n + i];
        }
    }
    let (mut d, mut e) = tridiagonalize(&mut work, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn hermitize(a: &mut [Complex64], n: usize) {
    for i in 0..n {
        a[i * n + i].im = 0.0;
        for j in i + 1..n {
            a[i * n + j] = a[j * n + i].conj();
        }
    }
}

/// Eigenpairs of a real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub n: usize,
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `k` (entries `vectors[i * n + k]`) belongs to `values[k]`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vectors[i * self.n + k]).collect()
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix (row-major).
pub fn jacobi_eigen(a: &[f64], n: usize) -> Result<EigenDecomposition> {
    check_square(a, n)?;
    let mut m = a.to_vec();
    let mut vecs = vec![0.0; n * n];
    for i in 0..n {
        vecs[i * n + i] = 1.0;
    }
    let norm = math::sqrt(m.iter().map(|x| x * x).sum::<f64>());
    let off_norm = |m: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += m[i * n + j] * m[i * n + j];
            }
        }
        math::sqrt(2.0 * s)
    };
    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= JACOBI_REL_TOL * norm || off == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Solver {
                what: "cyclic Jacobi",
                iterations: sweeps,
                residual: off / norm,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = 1.0f64.copysign(theta) / (theta.abs() + math::hypot(theta, 1.0));
                let c = 1.0 / math::hypot(t, 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (vecs[k * n + p], vecs[k * n + q]);
                    vecs[k * n + p] = c * vkp - s * vkq;
                    vecs[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + k] = vecs[i * n + src];
        }
    }
    Ok(EigenDecomposition {
        n,
        values,
        vectors,
        sweeps,
    })
}

/// Real symmetric `2n × 2n` embedding `[[Re, −Im], [Im, Re]]` of a Hermitian matrix.
pub fn real_embedding(a: &[Complex64], n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut out = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = a[i * n + j];
            out[i * m + j] = z.re;
            out[i * m + j + n] = -z.im;
            out[(i + n) * m + j] = z.im;
            out[(i + n) * m + j + n] = z.re;
        }
    }
    out
}

/// Collapses consecutive pairs of an ascending, exactly doubled spectrum.
///
/// Returns the pair means and the largest intra-pair gap relative to the
/// spectral radius; gaps above `rel_tol` are reported as a solver error.
pub fn collapse_pairs(values: &[f64], rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    if !values.len().is_multiple_of(2) {
        return Err(Error::domain("doubled spectrum must have even length"));
    }
    let radius = values.iter().fold(0.0f64, |r, v| r.max(v.abs()));
    let scale = if radius > 0.0 { radius } else { 1.0 };
    let mut max_gap: f64 = 0.0;
    let mut out = Vec::with_capacity(values.len() / 2);
    for pair in values.chunks_exact(2) {
        let gap = (pair[1] - pair[0]).abs() / scale;
        max_gap = max_gap.max(gap);
        out.push(0.5 * (pair[0] + pair[1]));
    }
    if max_gap > rel_tol {
        return Err(Error::Solver {
            what: "degenerate pair grouping",
            iterations: 0,
            residual: max_gap,
        });
    }
    Ok((out, max_gap))
}
