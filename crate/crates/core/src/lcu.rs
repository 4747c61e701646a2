//! Linear-combination-of-Pauli-strings Hamiltonians with time-dependent
//! real coefficients sampled on a trajectory grid.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::pauli::{PauliString, StateVector};

/// One time slice of an LCU Hamiltonian: g_gamma at a fixed time over a fixed
/// term list.
#[derive(Debug, Clone)]
pub struct LcuFrame {
    pub time: f64,
    pub terms: Vec<PauliString>,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone)]
enum CoeffSource {
    /// Time-independent coefficients, valid for all t.
    Constant(Vec<f64>),
    /// Uniform time grid with per-term cubic Hermite interpolation.
    Sampled {
        t0: f64,
        dt: f64,
        /// values[term][frame]
        values: Vec<Vec<f64>>,
        /// slopes[term][frame], finite-difference estimates d(coeff)/dt
        slopes: Vec<Vec<f64>>,
    },
}

/// H(t) = sum_gamma g_gamma(t) H_gamma with Hermitian Pauli terms H_gamma and
/// real coefficients.
#[derive(Debug, Clone)]
pub struct LcuHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliString>,
    coeffs: CoeffSource,
}

impl LcuHamiltonian {
    /// A Hamiltonian whose coefficients do not depend on time.
    pub fn constant(terms: Vec<PauliString>, coeffs: Vec<f64>) -> Result<Self> {
        if terms.len() != coeffs.len() {
            return Err(CoreError::Contract(format!(
                "{} terms but {} coefficients",
                terms.len(),
                coeffs.len()
            )));
        }
        let n_qubits = terms.first().map(|t| t.n_qubits()).unwrap_or(0);
        for t in &terms {
            if t.n_qubits() != n_qubits {
                return Err(CoreError::DimensionMismatch {
                    expected: n_qubits,
                    got: t.n_qubits(),
                });
            }
            if !t.is_hermitian() {
                return Err(CoreError::NotHermitian(format!("term {t}")));
            }
        }
        Ok(LcuHamiltonian { n_qubits, terms, coeffs: CoeffSource::Constant(coeffs) })
    }

    /// Build from frames sampled on a uniform time grid. `frames[i]` holds the
    /// coefficient vector at `t_grid[i]`; all frames share the term list.
    pub fn from_frames(
        terms: Vec<PauliString>,
        t_grid: &[f64],
        frames: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if t_grid.len() < 2 {
            return Err(CoreError::Contract("need at least two frames".into()));
        }
        if frames.len() != t_grid.len() {
            return Err(CoreError::Contract("frame count must match time grid".into()));
        }
        let dt = t_grid[1] - t_grid[0];
        for w in t_grid.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1.0) {
                return Err(CoreError::Contract("time grid must be uniform".into()));
            }
        }
        let n_terms = terms.len();
        for (i, f) in frames.iter().enumerate() {
            if f.len() != n_terms {
                return Err(CoreError::Contract(format!(
                    "frame {i} has {} coefficients, expected {n_terms}",
                    f.len()
                )));
            }
        }
        let n_qubits = terms.first().map(|t| t.n_qubits()).unwrap_or(0);
        for t in &terms {
            if !t.is_hermitian() {
                return Err(CoreError::NotHermitian(format!("term {t}")));
            }
        }
        // Transpose to term-major storage and precompute Hermite slopes with
        // five-point centered differences (one-sided near the edges).
        let n_frames = frames.len();
        let mut values = vec![vec![0.0; n_frames]; n_terms];
        for (i, f) in frames.iter().enumerate() {
            for (k, &g) in f.iter().enumerate() {
                values[k][i] = g;
            }
        }
        let slopes = values.iter().map(|v| fd_slopes(v, dt)).collect();
        Ok(LcuHamiltonian {
            n_qubits,
            terms,
            coeffs: CoeffSource::Sampled { t0: t_grid[0], dt, values, slopes },
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Domain of validity of the coefficient functions.
    pub fn time_span(&self) -> Option<(f64, f64)> {
        match &self.coeffs {
            CoeffSource::Constant(_) => None,
            CoeffSource::Sampled { t0, dt, values, .. } => {
                let n = values.first().map(|v| v.len()).unwrap_or(0);
                Some((*t0, t0 + dt * (n.saturating_sub(1)) as f64))
            }
        }
    }

    /// Coefficient vector g(t).
    pub fn coeffs_at(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.terms.len()];
        self.coeffs_into(t, &mut out)?;
        Ok(out)
    }

    /// Coefficient vector g(t) written into a caller buffer.
    pub fn coeffs_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        match &self.coeffs {
            CoeffSource::Constant(c) => {
                out.copy_from_slice(c);
                Ok(())
            }
            CoeffSource::Sampled { t0, dt, values, slopes } => {
                let n = values.first().map(|v| v.len()).unwrap_or(0);
                let t_end = t0 + dt * (n - 1) as f64;
                let slack = 1e-9 * (t_end - t0).abs().max(1.0);
                if t < t0 - slack || t > t_end + slack {
                    return Err(CoreError::TimeOutOfRange { t, t_min: *t0, t_max: t_end });
                }
                let t = t.clamp(*t0, t_end);
                let mut i = ((t - t0) / dt).floor() as usize;
                if i >= n - 1 {
                    i = n - 2;
                }
                let u = (t - (t0 + dt * i as f64)) / dt;
                let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
                let h10 = u * (1.0 - u) * (1.0 - u);
                let h01 = u * u * (3.0 - 2.0 * u);
                let h11 = u * u * (u - 1.0);
                for (k, (v, m)) in values.iter().zip(slopes).enumerate() {
                    out[k] = h00 * v[i] + h01 * v[i + 1] + dt * (h10 * m[i] + h11 * m[i + 1]);
                }
                Ok(())
            }
        }
    }

    /// Return sum_gamma g_gamma(t) (H_gamma |s>), not normalized.
    pub fn apply(&self, t: f64, s: &StateVector) -> Result<StateVector> {
        if s.n_qubits() != self.n_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_qubits,
                got: s.n_qubits(),
            });
        }
        let g = self.coeffs_at(t)?;
        let mut out = vec![Complex64::new(0.0, 0.0); s.dim()];
        for (term, &c) in self.terms.iter().zip(&g) {
            if c != 0.0 {
                s.accumulate_applied(term, Complex64::new(c, 0.0), &mut out);
            }
        }
        Ok(StateVector::from_amps(out).expect("dimension preserved"))
    }

    /// Apply with a caller-provided coefficient vector (avoids re-interpolating).
    pub fn apply_with_coeffs(&self, g: &[f64], s: &StateVector, out: &mut [Complex64]) {
        out.fill(Complex64::new(0.0, 0.0));
        for (term, &c) in self.terms.iter().zip(g) {
            if c != 0.0 {
                s.accumulate_applied(term, Complex64::new(c, 0.0), out);
            }
        }
    }
}

pub fn hamiltonian_matrix_apply(
    h: &LcuHamiltonian,
    t: f64,
    s: &StateVector,
) -> Result<StateVector> {
    h.apply(t, s)
}

/// Fourth-order finite-difference slope estimates on a uniform grid, with
/// biased stencils of the same order near the ends.
fn fd_slopes(v: &[f64], dt: f64) -> Vec<f64> {
    let n = v.len();
    let mut m = vec![0.0; n];
    if n < 5 {
        for i in 0..n {
            m[i] = if i >= 1 && i + 1 < n {
                (v[i + 1] - v[i - 1]) / (2.0 * dt)
            } else if i == 0 {
                (v[1] - v[0]) / dt
            } else {
                (v[n - 1] - v[n - 2]) / dt
            };
        }
        return m;
    }
    let d12 = 12.0 * dt;
    m[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / d12;
    m[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / d12;
    for i in 2..n - 2 {
        m[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / d12;
    }
    m[n - 2] =
        (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / d12;
    m[n - 1] =
        (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5])
            / d12;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_give_zero_vector() {
        let terms = vec![PauliString::z(2, 0), PauliString::x(2, 1)];
        let h = LcuHamiltonian::constant(terms, vec![0.0, 0.0]).unwrap();
        let s = StateVector::basis(2, 0b01);
        let out = h.apply(0.0, &s).unwrap();
        assert!(out.norm() < 1e-15);
    }

    #[test]
    fn identity_term_scales_state() {
        let h = LcuHamiltonian::constant(vec![PauliString::identity(2)], vec![0.75]).unwrap();
        let s = StateVector::basis(2, 0b10);
        let out = h.apply(3.0, &s).unwrap();
        assert!((out.amp(0b10).re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn interpolation_reproduces_smooth_coefficients() {
        let n = 201;
        let t_grid: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let f = |t: f64| (-(t * t) * 3.0).exp() * (4.0 * t).cos();
        let frames: Vec<Vec<f64>> = t_grid.iter().map(|&t| vec![f(t)]).collect();
        let h = LcuHamiltonian::from_frames(vec![PauliString::z(1, 0)], &t_grid, frames).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let t = -0.999 + 1.998 * i as f64 / 999.0;
            let g = h.coeffs_at(t).unwrap()[0];
            worst = worst.max((g - f(t)).abs());
        }
        assert!(worst < 2e-7, "interpolation error {worst}");
    }

    #[test]
    fn out_of_domain_time_is_rejected() {
        let t_grid = vec![0.0, 0.5, 1.0];
        let frames = vec![vec![1.0], vec![2.0], vec![3.0]];
        let h = LcuHamiltonian::from_frames(vec![PauliString::z(1, 0)], &t_grid, frames).unwrap();
        assert!(h.coeffs_at(1.5).is_err());
        assert!(h.coeffs_at(-0.5).is_err());
        assert!(h.coeffs_at(1.0 + 1e-12).is_ok());
    }
}
