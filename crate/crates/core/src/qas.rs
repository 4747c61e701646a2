//! Quantum-assisted simulator: a fixed linear span of cumulative moment
//! states built from products of Hamiltonian Pauli terms, measured once, then
//! evolved classically with an adaptive Adams predictor-corrector.

use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

use crate::collision::TrajectoryContext;
use crate::error::{CoreError, Result};
use crate::lcu::LcuHamiltonian;
use crate::linalg::{solve_from_eigen, CMat};
use crate::observables::{
    asymptotic_probability, cumulative_mclachlan_error, transfer_probability,
    variational_fidelity_bound, Method, RecordStatus, SimulationRecord,
};
use crate::pauli::{PauliString, StateVector};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Cumulative K-moment basis over a computational-basis reference state.
/// Generators are stored as the canonical pure-X representative of their
/// projective class, so the spanned states are orthonormal basis kets.
#[derive(Debug, Clone)]
pub struct MomentBasis {
    pub n_qubits: usize,
    pub phi0_index: u64,
    pub generators: Vec<PauliString>,
    pub k_reached: usize,
    pub closed: bool,
}

impl MomentBasis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Basis-state index reached by each generator.
    pub fn state_indices(&self) -> Vec<u64> {
        self.generators.iter().map(|g| self.phi0_index ^ g.x_mask()).collect()
    }

    /// The spanned states U_i |phi0> as dense vectors.
    pub fn states(&self) -> Vec<StateVector> {
        self.state_indices()
            .into_iter()
            .map(|i| StateVector::basis(self.n_qubits, i))
            .collect()
    }

    /// Embed a coefficient vector into the full Hilbert space.
    pub fn reconstruct(&self, alpha: &[Complex64]) -> StateVector {
        let mut amps = vec![C_ZERO; 1 << self.n_qubits];
        for (idx, &a) in self.state_indices().iter().zip(alpha) {
            amps[*idx as usize] = a;
        }
        StateVector::from_amps(amps).expect("power-of-two length")
    }
}

/// Breadth-first closure of the term flip-masks applied to phi0, deduplicated
/// projectively (two products reaching the same flip mask differ only by a
/// global phase on a basis state). Stops when a level adds nothing or k_max
/// is reached.
pub fn build_moment_basis(
    h: &LcuHamiltonian,
    phi0: &StateVector,
    k_max: usize,
) -> Result<MomentBasis> {
    if k_max < 1 {
        return Err(CoreError::Contract("k_max must be at least 1".into()));
    }
    let phi0_index = phi0.basis_index()?;
    let n = phi0.n_qubits();
    if h.n_qubits() != n {
        return Err(CoreError::DimensionMismatch { expected: n, got: h.n_qubits() });
    }
    let term_masks: Vec<u64> = {
        let set: BTreeSet<u64> = h.terms().iter().map(|t| t.x_mask()).collect();
        set.into_iter().collect()
    };
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    seen.insert(0);
    let mut order: Vec<u64> = vec![0];
    let mut level: Vec<u64> = vec![0];
    let mut k_reached = 0;
    let mut closed = false;
    for k in 1..=k_max {
        let mut next: Vec<u64> = Vec::new();
        for &y in &level {
            for &x in &term_masks {
                let m = y ^ x;
                if seen.insert(m) {
                    next.push(m);
                }
            }
        }
        if next.is_empty() {
            closed = true;
            break;
        }
        next.sort_unstable();
        order.extend_from_slice(&next);
        level = next;
        k_reached = k;
        debug_assert!(order.len() <= 1 << n);
    }
    let generators =
        order.into_iter().map(|x| PauliString::new(n, x, 0, 0)).collect();
    Ok(MomentBasis { n_qubits: n, phi0_index, generators, k_reached, closed })
}

/// Measured overlap and coupling matrices plus the complex parameter vector.
#[derive(Debug, Clone)]
pub struct QasModel {
    pub basis: MomentBasis,
    pub a: CMat,
    pub d_gammas: Vec<CMat>,
    pub alpha: Vec<Complex64>,
    pub measurement_count: u64,
    a_vals: Vec<f64>,
    a_vecs: CMat,
    cond_warning: Option<String>,
}

const A_EIGEN_CUTOFF: f64 = 1e-12;

fn mix_seed(seed: u64, x: u64, z: u64) -> u64 {
    // splitmix64-style stirring so each distinct Pauli gets its own stream.
    let mut s = seed ^ x.wrapping_mul(0x9E3779B97F4A7C15) ^ z.wrapping_mul(0xBF58476D1CE4E5B9);
    s ^= s >> 30;
    s = s.wrapping_mul(0xBF58476D1CE4E5B9);
    s ^= s >> 27;
    s = s.wrapping_mul(0x94D049BB133111EB);
    s ^ (s >> 31)
}

/// Reduce every A_ij and D_gamma,ij to single Pauli-string expectations on
/// phi0 through the multiplication closure, measuring each distinct string
/// once (exactly, or with `shots` binomial samples).
pub fn measure_model(
    basis: &MomentBasis,
    h: &LcuHamiltonian,
    shots: Option<u64>,
    seed: Option<u64>,
) -> Result<QasModel> {
    let m = basis.len();
    let phi0 = StateVector::basis(basis.n_qubits, basis.phi0_index);
    let mut cache: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    let base_seed = seed.unwrap_or(0);

    let mut eval = |s: &PauliString, phi0: &StateVector| -> Result<Complex64> {
        let canonical = s.phase_normalized();
        let key = canonical.sort_key();
        let val = match cache.get(&key) {
            Some(&v) => v,
            None => {
                let v = phi0.expectation(
                    &canonical,
                    shots,
                    Some(mix_seed(base_seed, key.0, key.1)),
                )?;
                cache.insert(key, v);
                v
            }
        };
        let residual = (s.phase_exp() + 4 - canonical.phase_exp()) & 3;
        Ok(match residual {
            0 => Complex64::new(val, 0.0),
            1 => Complex64::new(0.0, val),
            2 => Complex64::new(-val, 0.0),
            _ => Complex64::new(0.0, -val),
        })
    };

    let mut a = CMat::zeros(m);
    for i in 0..m {
        for j in 0..m {
            let prod = basis.generators[i].mul(&basis.generators[j])?;
            a.set(i, j, eval(&prod, &phi0)?);
        }
    }
    let mut d_gammas = Vec::with_capacity(h.n_terms());
    for term in h.terms() {
        let mut d = CMat::zeros(m);
        for i in 0..m {
            for j in 0..m {
                let prod = basis.generators[i].mul(term)?.mul(&basis.generators[j])?;
                d.set(i, j, eval(&prod, &phi0)?);
            }
        }
        // Hermitian symmetrization absorbs sampling noise asymmetry.
        let sym = d.add(&d.dagger()).scale(Complex64::new(0.5, 0.0));
        d_gammas.push(sym);
    }
    let a = a.add(&a.dagger()).scale(Complex64::new(0.5, 0.0));
    let (a_vals, a_vecs) = a.hermitian_eigen();
    let wmax = a_vals.iter().cloned().fold(0.0_f64, f64::max);
    let kept_min = a_vals
        .iter()
        .cloned()
        .filter(|&w| w > A_EIGEN_CUTOFF * wmax.max(1e-300))
        .fold(f64::INFINITY, f64::min);
    let cond = if kept_min.is_finite() { wmax / kept_min } else { f64::INFINITY };
    let cond_warning = (cond > 1e12).then(|| {
        format!("overlap matrix condition {cond:.3e} above 1e12; eigenvalue-regularized solve in effect")
    });

    let mut alpha = vec![C_ZERO; m];
    alpha[0] = Complex64::new(1.0, 0.0);
    Ok(QasModel {
        basis: basis.clone(),
        a,
        d_gammas,
        alpha,
        measurement_count: cache.len() as u64,
        a_vals,
        a_vecs,
        cond_warning,
    })
}

struct QasRhs<'a> {
    model: &'a QasModel,
    h: &'a LcuHamiltonian,
    gbuf: Vec<f64>,
}

impl<'a> QasRhs<'a> {
    fn eval(&mut self, t: f64, alpha: &[Complex64]) -> Result<Vec<Complex64>> {
        self.h.coeffs_into(t, &mut self.gbuf)?;
        let m = alpha.len();
        let mut rhs = vec![C_ZERO; m];
        for (d, &g) in self.model.d_gammas.iter().zip(&self.gbuf) {
            if g == 0.0 {
                continue;
            }
            let dv = d.matvec(alpha);
            for i in 0..m {
                rhs[i] += Complex64::new(g, 0.0) * dv[i];
            }
        }
        for r in rhs.iter_mut() {
            *r *= MINUS_I;
        }
        let (x, _) = solve_from_eigen(&self.model.a_vals, &self.model.a_vecs, &rhs, A_EIGEN_CUTOFF)?;
        Ok(x)
    }
}

fn add_scaled(y: &[Complex64], h: f64, terms: &[(&[Complex64], f64)]) -> Vec<Complex64> {
    let mut out = y.to_vec();
    for (f, w) in terms {
        let c = Complex64::new(h * w, 0.0);
        for (o, v) in out.iter_mut().zip(*f) {
            *o += c * v;
        }
    }
    out
}

/// Evolve the complex moment-basis parameters along the trajectory grid,
/// emitting the reconstructed state, capture probability, and residual
/// McLachlan distance at every grid point.
pub fn evolve_qas(
    model: &mut QasModel,
    h: &LcuHamiltonian,
    ctx: &TrajectoryContext,
    rtol: f64,
    atol: f64,
) -> Result<(SimulationRecord, Vec<StateVector>)> {
    if rtol <= 0.0 || atol <= 0.0 || rtol > 1e-3 || atol > 1e-3 {
        return Err(CoreError::Contract(format!(
            "tolerances must be positive and no looser than 1e-3, got rtol={rtol} atol={atol}"
        )));
    }
    let t_grid = &ctx.t_grid;
    let m = model.basis.len();
    let mut alpha = vec![C_ZERO; m];
    alpha[0] = Complex64::new(1.0, 0.0);
    let mut rhs = QasRhs { model, h, gbuf: vec![0.0; h.n_terms()] };

    let mut times = Vec::with_capacity(t_grid.len());
    let mut p_of_t = Vec::with_capacity(t_grid.len());
    let mut l2_trace = Vec::with_capacity(t_grid.len());
    let mut states = Vec::with_capacity(t_grid.len());

    let span = t_grid[t_grid.len() - 1] - t_grid[0];
    let h_min = span * 1e-14;
    let mut h_nominal = (t_grid[1] - t_grid[0]).min(span / 100.0);

    let mut t = t_grid[0];
    let emit = |t: f64,
                    alpha: &[Complex64],
                    rhs: &mut QasRhs,
                    times: &mut Vec<f64>,
                    p: &mut Vec<f64>,
                    l2s: &mut Vec<f64>,
                    states: &mut Vec<StateVector>|
     -> Result<()> {
        let psi = rhs.model.basis.reconstruct(alpha);
        let alpha_dot = rhs.eval(t, alpha)?;
        // Residual (d/dt + iH)|Psi> evaluated in the full space; closure of
        // the basis keeps it at numerical noise.
        let mut r = h.apply(t, &psi)?;
        let idxs = rhs.model.basis.state_indices();
        let amps = r.amps_mut();
        for a in amps.iter_mut() {
            *a *= Complex64::new(0.0, 1.0);
        }
        for (k, &idx) in idxs.iter().enumerate() {
            amps[idx as usize] += alpha_dot[k];
        }
        let l2 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        times.push(t);
        // Capture probability is defined on the 4-qubit collision register;
        // toy systems record zero.
        p.push(if psi.n_qubits() == 4 { transfer_probability(&psi)? } else { 0.0 });
        l2s.push(l2);
        states.push(psi);
        Ok(())
    };
    emit(t, &alpha, &mut rhs, &mut times, &mut p_of_t, &mut l2_trace, &mut states)?;

    for k in 1..t_grid.len() {
        let t_next = t_grid[k];
        loop {
            let remaining = t_next - t;
            if remaining <= 1e-14 * span {
                t = t_next;
                break;
            }
            let n_sub = (remaining / h_nominal - 1e-9).ceil().max(1.0) as usize;
            let h_step = remaining / n_sub as f64;
            if h_step < h_min {
                return Err(CoreError::IntegrationFailure { t });
            }
            // History of f at t, t-h, t-2h, t-3h rebuilt whenever h changes.
            let mut hist: Vec<Vec<Complex64>> = Vec::new();
            let mut f_now = rhs.eval(t, &alpha)?;
            let mut done = 0;
            let mut rejected = false;
            while done < n_sub {
                if hist.len() < 3 {
                    // RK4 startup at the current uniform spacing.
                    let k1 = f_now.clone();
                    let y2 = add_scaled(&alpha, h_step, &[(&k1, 0.5)]);
                    let k2 = rhs.eval(t + 0.5 * h_step, &y2)?;
                    let y3 = add_scaled(&alpha, h_step, &[(&k2, 0.5)]);
                    let k3 = rhs.eval(t + 0.5 * h_step, &y3)?;
                    let y4 = add_scaled(&alpha, h_step, &[(&k3, 1.0)]);
                    let k4 = rhs.eval(t + h_step, &y4)?;
                    let ynew = add_scaled(
                        &alpha,
                        h_step / 6.0,
                        &[(&k1, 1.0), (&k2, 2.0), (&k3, 2.0), (&k4, 1.0)],
                    );
                    hist.insert(0, k1);
                    hist.truncate(3);
                    alpha = ynew;
                    t += h_step;
                    done += 1;
                    f_now = rhs.eval(t, &alpha)?;
                    continue;
                }
                // Adams-Bashforth 4 predictor, Adams-Moulton 4 corrector.
                let y_p = add_scaled(
                    &alpha,
                    h_step / 24.0,
                    &[
                        (&f_now, 55.0),
                        (&hist[0], -59.0),
                        (&hist[1], 37.0),
                        (&hist[2], -9.0),
                    ],
                );
                let f_p = rhs.eval(t + h_step, &y_p)?;
                let y_c = add_scaled(
                    &alpha,
                    h_step / 24.0,
                    &[(&f_p, 9.0), (&f_now, 19.0), (&hist[0], -5.0), (&hist[1], 1.0)],
                );
                // Milne device on the predictor-corrector difference.
                let mut err_sq = 0.0;
                for i in 0..m {
                    let scale = atol + rtol * alpha[i].norm().max(y_c[i].norm());
                    let e = (19.0 / 270.0) * (y_c[i] - y_p[i]).norm() / scale;
                    err_sq += e * e;
                }
                let err = (err_sq / m as f64).sqrt();
                if err > 1.0 {
                    h_nominal = (h_step * (0.9 * err.powf(-0.2)).clamp(0.2, 0.9)).max(h_min);
                    rejected = true;
                    break;
                }
                let f_c = rhs.eval(t + h_step, &y_c)?;
                hist.insert(0, f_now);
                hist.truncate(3);
                alpha = y_c;
                t += h_step;
                done += 1;
                f_now = f_c;
                if err < 0.02 {
                    h_nominal = (h_nominal * 1.3).min(span / 50.0);
                }
            }
            if !rejected {
                t = t_next;
                break;
            }
        }
        emit(t, &alpha, &mut rhs, &mut times, &mut p_of_t, &mut l2_trace, &mut states)?;
    }

    let fl_bound = variational_fidelity_bound(&l2_trace, &times);
    let eps_trace = cumulative_mclachlan_error(&l2_trace, &times);
    let mut record = SimulationRecord {
        trajectory: ctx.clone(),
        method: Method::Qas,
        times,
        p_of_t,
        fidelity: None,
        fl_bound,
        l2_trace,
        eps_trace,
        n_theta_trace: None,
        p_asymptotic: None,
        measurement_count: rhs.model.measurement_count,
        status: RecordStatus::Converged,
        warnings: rhs.model.cond_warning.iter().cloned().collect(),
    };
    asymptotic_probability(&mut record);
    model.alpha = alpha;
    Ok((record, states))
}
