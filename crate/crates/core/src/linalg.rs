//! Dense complex matrices just big enough for this crate: Gram matrices of
//! variational bases, 2x2 channel algebra, and the dense oracles in tests.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    d: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat { n, d: vec![C_ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.d[i * n + i] = C_ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.d[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.d[i * self.n + j] = v;
    }

    pub fn dagger(&self) -> CMat {
        CMat::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == C_ZERO {
                    continue;
                }
                for j in 0..n {
                    out.d[i * n + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        CMat::from_fn(self.n, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn scale(&self, c: Complex64) -> CMat {
        CMat::from_fn(self.n, |i, j| c * self.at(i, j))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let n = self.n;
        let mut out = vec![C_ZERO; n];
        for i in 0..n {
            let mut acc = C_ZERO;
            for j in 0..n {
                acc += self.d[i * n + j] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let n = self.n * other.n;
        let mut out = CMat::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.at(i, j);
                for k in 0..other.n {
                    for l in 0..other.n {
                        out.set(i * other.n + k, j * other.n + l, a * other.at(k, l));
                    }
                }
            }
        }
        out
    }

    /// Hermitian eigendecomposition by cyclic Jacobi rotations. Returns the
    /// eigenvalues (ascending) and the unitary of eigenvectors as columns.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMat) {
        let n = self.n;
        if n == 0 {
            return (vec![], CMat::zeros(0));
        }
        let mut a = self.clone();
        // Symmetrize defensively against rounding in the input.
        for i in 0..n {
            for j in 0..n {
                let s = 0.5 * (a.at(i, j) + a.at(j, i).conj());
                a.set(i, j, s);
            }
        }
        let mut v = CMat::identity(n);
        let scale: f64 = (0..n)
            .map(|i| a.at(i, i).norm())
            .fold(0.0_f64, f64::max)
            .max(off_norm(&a))
            .max(1e-300);
        for _sweep in 0..60 {
            if off_norm(&a) <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.at(p, q);
                    let m = apq.norm();
                    if m <= 1e-18 * scale {
                        continue;
                    }
                    let app = a.at(p, p).re;
                    let aqq = a.at(q, q).re;
                    let phase = apq / m; // e^{i phi}
                    let zeta = (app - aqq) / (2.0 * m);
                    let t = if zeta.abs() > 1e15 {
                        1.0 / (2.0 * zeta)
                    } else {
                        zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Right-multiply by J, then left-multiply by J^dagger.
                    for i in 0..n {
                        let aip = a.at(i, p);
                        let aiq = a.at(i, q);
                        a.set(i, p, c * aip + s * phase.conj() * aiq);
                        a.set(i, q, -s * phase * aip + c * aiq);
                        let vip = v.at(i, p);
                        let viq = v.at(i, q);
                        v.set(i, p, c * vip + s * phase.conj() * viq);
                        v.set(i, q, -s * phase * vip + c * viq);
                    }
                    for j in 0..n {
                        let apj = a.at(p, j);
                        let aqj = a.at(q, j);
                        a.set(p, j, c * apj + s * phase * aqj);
                        a.set(q, j, -s * phase.conj() * apj + c * aqj);
                    }
                }
            }
        }
        // Sort ascending by eigenvalue.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a.at(i, i).re.partial_cmp(&a.at(j, j).re).unwrap());
        let vals: Vec<f64> = order.iter().map(|&i| a.at(i, i).re).collect();
        let vecs = CMat::from_fn(n, |i, j| v.at(i, order[j]));
        (vals, vecs)
    }

    /// Solve A x = b for Hermitian positive-semidefinite A through its
    /// eigendecomposition, dropping modes below `rel_cutoff` times the
    /// largest eigenvalue. Returns the solution and the effective condition
    /// number of the retained spectrum.
    pub fn solve_hermitian_psd(
        &self,
        b: &[Complex64],
        rel_cutoff: f64,
    ) -> Result<(Vec<Complex64>, f64)> {
        if b.len() != self.n {
            return Err(CoreError::DimensionMismatch { expected: self.n, got: b.len() });
        }
        let (vals, vecs) = self.hermitian_eigen();
        solve_from_eigen(&vals, &vecs, b, rel_cutoff)
    }
}

/// Solve with a precomputed eigendecomposition (see `hermitian_eigen`).
pub fn solve_from_eigen(
    vals: &[f64],
    vecs: &CMat,
    b: &[Complex64],
    rel_cutoff: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let n = vals.len();
    let wmax = vals.iter().cloned().fold(0.0_f64, f64::max);
    let cut = rel_cutoff * wmax.max(1e-300);
    let mut x = vec![C_ZERO; n];
    let mut wmin_kept = f64::INFINITY;
    for k in 0..n {
        let w = vals[k];
        if w <= cut {
            continue;
        }
        wmin_kept = wmin_kept.min(w);
        let mut proj = C_ZERO;
        for i in 0..n {
            proj += vecs.at(i, k).conj() * b[i];
        }
        let coef = proj / w;
        for i in 0..n {
            x[i] += coef * vecs.at(i, k);
        }
    }
    let cond = if wmin_kept.is_finite() && wmin_kept > 0.0 { wmax / wmin_kept } else { f64::INFINITY };
    Ok((x, cond))
}

/// Real symmetric positive-semidefinite solve, same cutoff semantics.
pub fn solve_real_spd(a: &[f64], n: usize, b: &[f64], rel_cutoff: f64) -> Result<(Vec<f64>, f64)> {
    let m = CMat::from_fn(n, |i, j| Complex64::new(a[i * n + j], 0.0));
    let bc: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let (x, cond) = m.solve_hermitian_psd(&bc, rel_cutoff)?;
    Ok((x.into_iter().map(|v| v.re).collect(), cond))
}

fn off_norm(a: &CMat) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.at(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}
