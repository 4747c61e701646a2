//! Adaptive variational dynamics: a product of Pauli rotations grown
//! operator-by-operator against a McLachlan-distance threshold and stepped
//! with a fixed-step Euler update.
//!
//! The distance is evaluated with the global phase projected out. The
//! identity coefficient g0 contributes only a phase to a normalized state and
//! is dropped from H; the remaining phase freedom of the rotation ansatz is
//! removed through the s_k = Im<d_k Psi|Psi> vector, giving
//!
//!   L^2 = qdot^T (A^R - s s^T) qdot - 2 qdot^T (C - s <H'>) + Var(H')
//!
//! which reduces to the bare quadratic form whenever s = 0. Without the
//! projection, diagonal pool operators score a spurious merit of <H'>^2
//! (pure phase tracking), inflating the ansatz without improving any
//! modulus-squared observable.

use num_complex::Complex64;

use crate::collision::TrajectoryContext;
use crate::error::{CoreError, Result};
use crate::lcu::LcuHamiltonian;
use crate::linalg::solve_real_spd;
use crate::observables::{
    asymptotic_probability, transfer_probability, Method, RecordStatus, SimulationRecord,
};
use crate::pauli::{PauliString, StateVector};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);
const SOLVE_CUTOFF: f64 = 1e-12;
/// Minimum L2 reduction a pool candidate must offer while over threshold.
const MIN_GAIN: f64 = 1e-14;

/// Product-of-rotations ansatz |Psi> = prod_k exp(-i theta_k U_k) |phi0> with
/// operators drawn from the complete non-identity Pauli pool.
#[derive(Debug, Clone)]
pub struct AdaptiveAnsatz {
    pub n_qubits: usize,
    pub phi0_index: u64,
    pub ops: Vec<PauliString>,
    pub theta: Vec<f64>,
    pub pool: Vec<PauliString>,
}

impl AdaptiveAnsatz {
    pub fn new(n_qubits: usize, phi0_index: u64) -> Self {
        let mut pool = Vec::with_capacity((1usize << (2 * n_qubits)) - 1);
        for x in 0..(1u64 << n_qubits) {
            for z in 0..(1u64 << n_qubits) {
                if x == 0 && z == 0 {
                    continue;
                }
                pool.push(PauliString::hermitian(n_qubits, x, z));
            }
        }
        pool.sort_by_key(|p| p.sort_key());
        AdaptiveAnsatz { n_qubits, phi0_index, ops: Vec::new(), theta: Vec::new(), pool }
    }

    pub fn n_theta(&self) -> usize {
        self.ops.len()
    }

    /// |Psi(theta)> by applying each rotation in order; exactly unit norm.
    pub fn prepare_state(&self) -> StateVector {
        let mut s = StateVector::basis(self.n_qubits, self.phi0_index);
        for (op, &th) in self.ops.iter().zip(&self.theta) {
            s.rotate(op, th).expect("pool operators are Hermitian");
        }
        s
    }

    /// The state plus all parameter-derivative states d_k = d|Psi>/d theta_k.
    fn state_and_derivatives(&self) -> (StateVector, Vec<StateVector>) {
        let n = self.ops.len();
        // prefix[j] = R_{j-1} ... R_0 |phi0>
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(StateVector::basis(self.n_qubits, self.phi0_index));
        for (op, &th) in self.ops.iter().zip(&self.theta) {
            let mut s = prefix.last().unwrap().clone();
            s.rotate(op, th).unwrap();
            prefix.push(s);
        }
        let psi = prefix[n].clone();
        let mut derivs = Vec::with_capacity(n);
        for k in 0..n {
            let mut d = prefix[k].clone();
            d.rotate(&self.ops[k], self.theta[k]).unwrap();
            d = d.apply(&self.ops[k]).unwrap();
            for a in d.amps_mut() {
                *a *= MINUS_I;
            }
            for j in (k + 1)..n {
                d.rotate(&self.ops[j], self.theta[j]).unwrap();
            }
            derivs.push(d);
        }
        (psi, derivs)
    }
}

pub fn prepare_ansatz_state(a: &AdaptiveAnsatz) -> StateVector {
    a.prepare_state()
}

/// McLachlan matrices at one instant: the metric A^R and per-term C^I of the
/// variational equations, the phase vector s, and the variance of the
/// traceless Hamiltonian, together with the solved parameter velocities and
/// the resulting distance.
#[derive(Debug, Clone)]
pub struct McLachlanState {
    /// Re <d_k | d_l>, row-major n x n.
    pub a_r: Vec<f64>,
    /// Im <d_k | H_gamma | Psi> for every term, including the identity row.
    pub c_i: Vec<Vec<f64>>,
    /// Im <d_k | Psi>: the global-phase direction in parameter space.
    pub s: Vec<f64>,
    /// Index of the identity term inside the Hamiltonian, if present.
    pub identity_index: Option<usize>,
    pub h_mean: f64,
    pub h2_mean: f64,
    pub var_h: f64,
    /// Optimal-velocity McLachlan distance at this instant.
    pub l2: f64,
    pub theta_dot: Vec<f64>,
    pub measurement_estimate: u64,
}

struct Workspace {
    psi: StateVector,
    derivs: Vec<StateVector>,
    h_prime_psi: StateVector,
}

fn build_state(
    ansatz: &AdaptiveAnsatz,
    h: &LcuHamiltonian,
    t: f64,
) -> Result<(McLachlanState, Workspace)> {
    let g = h.coeffs_at(t)?;
    let (psi, derivs) = ansatz.state_and_derivatives();
    let n = derivs.len();
    let n_terms = h.n_terms();
    let identity_index = h.terms().iter().position(|p| p.is_identity());

    // H_gamma |Psi> per term, and the traceless combination.
    let mut h_prime = vec![C_ZERO; psi.dim()];
    let mut c_i = vec![vec![0.0; n]; n_terms];
    let mut gamma_states: Vec<StateVector> = Vec::with_capacity(n_terms);
    for term in h.terms() {
        gamma_states.push(psi.apply(term)?);
    }
    for (gi, gs) in gamma_states.iter().enumerate() {
        if Some(gi) != identity_index && g[gi] != 0.0 {
            for (acc, v) in h_prime.iter_mut().zip(gs.amps()) {
                *acc += Complex64::new(g[gi], 0.0) * v;
            }
        }
        for (k, d) in derivs.iter().enumerate() {
            c_i[gi][k] = d.inner(gs)?.im;
        }
    }
    let h_prime_psi = StateVector::from_amps(h_prime)?;
    let h_mean = psi.inner(&h_prime_psi)?.re;
    let h2_mean = h_prime_psi.amps().iter().map(|a| a.norm_sqr()).sum::<f64>();
    let var_h = h2_mean - h_mean * h_mean;

    let mut a_r = vec![0.0; n * n];
    let mut s = vec![0.0; n];
    for k in 0..n {
        s[k] = derivs[k].inner(&psi)?.im;
        for l in k..n {
            let v = derivs[k].inner(&derivs[l])?.re;
            a_r[k * n + l] = v;
            a_r[l * n + k] = v;
        }
    }

    let n_g = n_terms as u64;
    let nn = n as u64;
    let measurement_estimate =
        nn * (nn + 1) / 2 + nn + nn * n_g + n_g * (n_g + 1) / 2 + n_g;

    let mut st = McLachlanState {
        a_r,
        c_i,
        s,
        identity_index,
        h_mean,
        h2_mean,
        var_h,
        l2: 0.0,
        theta_dot: vec![0.0; n],
        measurement_estimate,
    };
    let (theta_dot, l2) = solve_state(&st, &g);
    st.theta_dot = theta_dot;
    st.l2 = l2;
    Ok((st, Workspace { psi, derivs, h_prime_psi }))
}

/// Solve the phase-projected equations of motion and return the velocities
/// with the resulting minimal distance.
fn solve_state(st: &McLachlanState, g: &[f64]) -> (Vec<f64>, f64) {
    let n = st.s.len();
    if n == 0 {
        return (vec![], st.var_h.max(0.0));
    }
    let mut m = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            m[k * n + l] = st.a_r[k * n + l] - st.s[k] * st.s[l];
        }
    }
    let mut v = vec![0.0; n];
    for k in 0..n {
        let mut c = 0.0;
        for (gi, row) in st.c_i.iter().enumerate() {
            if Some(gi) != st.identity_index {
                c += g[gi] * row[k];
            }
        }
        v[k] = c - st.s[k] * st.h_mean;
    }
    let (theta_dot, _) = solve_real_spd(&m, n, &v, SOLVE_CUTOFF).expect("square system");
    let l2 = distance_quadratic(&m, &v, st.var_h, &theta_dot);
    (theta_dot, l2)
}

fn distance_quadratic(m: &[f64], v: &[f64], var_h: f64, theta_dot: &[f64]) -> f64 {
    let n = v.len();
    let mut quad = 0.0;
    let mut lin = 0.0;
    for k in 0..n {
        lin += theta_dot[k] * v[k];
        for l in 0..n {
            quad += theta_dot[k] * m[k * n + l] * theta_dot[l];
        }
    }
    let l2 = quad - 2.0 * lin + var_h;
    if l2 < 0.0 {
        debug_assert!(l2 > -1e-9, "McLachlan distance {l2} below clamp window");
        0.0
    } else {
        l2
    }
}

/// McLachlan matrices of the current ansatz at time t.
pub fn mclachlan_matrices(
    ansatz: &AdaptiveAnsatz,
    h: &LcuHamiltonian,
    t: f64,
) -> Result<McLachlanState> {
    Ok(build_state(ansatz, h, t)?.0)
}

/// Distance for a given parameter velocity and coefficient vector.
pub fn mclachlan_distance(st: &McLachlanState, theta_dot: &[f64], g: &[f64]) -> f64 {
    let n = st.s.len();
    assert_eq!(theta_dot.len(), n, "velocity dimension mismatch");
    if n == 0 {
        return st.var_h.max(0.0);
    }
    let mut m = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            m[k * n + l] = st.a_r[k * n + l] - st.s[k] * st.s[l];
        }
    }
    let mut v = vec![0.0; n];
    for k in 0..n {
        let mut c = 0.0;
        for (gi, row) in st.c_i.iter().enumerate() {
            if Some(gi) != st.identity_index {
                c += g[gi] * row[k];
            }
        }
        v[k] = c - st.s[k] * st.h_mean;
    }
    distance_quadratic(&m, &v, st.var_h, theta_dot)
}

/// What one adaptive step did.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: f64,
    pub l2: f64,
    pub n_theta: usize,
    pub added: Vec<String>,
    pub measurement_estimate: u64,
}

/// Grow the ansatz at time t until L2 < l2_cut, without stepping. Returns
/// the final McLachlan state, the measurement estimate, and the labels of
/// any operators added.
fn adapt(
    ansatz: &mut AdaptiveAnsatz,
    h: &LcuHamiltonian,
    t: f64,
    l2_cut: f64,
    ctx: &TrajectoryContext,
) -> Result<(McLachlanState, u64, Vec<String>)> {
    let g = h.coeffs_at(t)?;
    let (mut st, mut ws) = build_state(ansatz, h, t)?;
    let mut added = Vec::new();
    let mut measurements = st.measurement_estimate;

    while st.l2 >= l2_cut {
        let n = ansatz.n_theta();
        // Score every pool operator appended with theta = 0. Appending at the
        // end leaves the cached derivative states valid, and the candidate's
        // own derivative is just -i U |Psi>.
        let mut best: Option<(usize, f64)> = None;
        let mut v_base = vec![0.0; n];
        for k in 0..n {
            let mut c = 0.0;
            for (gi, row) in st.c_i.iter().enumerate() {
                if Some(gi) != st.identity_index {
                    c += g[gi] * row[k];
                }
            }
            v_base[k] = c - st.s[k] * st.h_mean;
        }
        for (ci, cand) in ansatz.pool.iter().enumerate() {
            if ansatz.ops.contains(cand) {
                continue;
            }
            let mut d_c = ws.psi.apply(cand)?;
            for a in d_c.amps_mut() {
                *a *= MINUS_I;
            }
            let s_c = d_c.inner(&ws.psi)?.im;
            let v_c = d_c.inner(&ws.h_prime_psi)?.im - s_c * st.h_mean;
            let nn = n + 1;
            let mut m_ext = vec![0.0; nn * nn];
            for k in 0..n {
                for l in 0..n {
                    m_ext[k * nn + l] = st.a_r[k * n + l] - st.s[k] * st.s[l];
                }
            }
            for k in 0..n {
                let a_kc = ws.derivs[k].inner(&d_c)?.re;
                m_ext[k * nn + n] = a_kc - st.s[k] * s_c;
                m_ext[n * nn + k] = m_ext[k * nn + n];
            }
            m_ext[n * nn + n] = 1.0 - s_c * s_c;
            let mut v_ext = v_base.clone();
            v_ext.push(v_c);
            let (td, _) = solve_real_spd(&m_ext, nn, &v_ext, SOLVE_CUTOFF)?;
            let l2_ext = distance_quadratic(&m_ext, &v_ext, st.var_h, &td);
            let gain = st.l2 - l2_ext;
            measurements += (n as u64 + 1) + 2;
            if gain > best.map(|(_, g0)| g0).unwrap_or(MIN_GAIN) {
                best = Some((ci, gain));
            }
        }
        match best {
            None => {
                return Err(CoreError::ConvergenceFailure {
                    energy_kev: ctx.energy_kev,
                    b: ctx.b,
                    t,
                })
            }
            Some((ci, _)) => {
                let op = ansatz.pool[ci];
                added.push(op.to_string());
                ansatz.ops.push(op);
                ansatz.theta.push(0.0);
            }
        }
        let rebuilt = build_state(ansatz, h, t)?;
        st = rebuilt.0;
        ws = rebuilt.1;
        measurements += st.measurement_estimate;
    }
    Ok((st, measurements, added))
}

/// Grow the ansatz until L2 < l2_cut, then take one Euler step. The pool is
/// scanned in canonical order and the candidate with the greatest reduction
/// of the optimal-velocity distance wins; ties fall to the lower order.
pub fn adapt_and_step(
    ansatz: &mut AdaptiveAnsatz,
    h: &LcuHamiltonian,
    t: f64,
    dt: f64,
    l2_cut: f64,
    ctx: &TrajectoryContext,
) -> Result<StepRecord> {
    if dt <= 0.0 {
        return Err(CoreError::Contract("dt must be positive".into()));
    }
    let (st, measurements, added) = adapt(ansatz, h, t, l2_cut, ctx)?;
    for (th, td) in ansatz.theta.iter_mut().zip(&st.theta_dot) {
        *th += td * dt;
    }
    Ok(StepRecord {
        t,
        l2: st.l2,
        n_theta: ansatz.n_theta(),
        added,
        measurement_estimate: measurements,
    })
}

/// Outcome of a full adaptive evolution, including the per-step log.
#[derive(Debug)]
pub struct AvqdsOutcome {
    pub record: SimulationRecord,
    pub states: Vec<StateVector>,
    pub step_log: Vec<StepRecord>,
    pub failure: Option<CoreError>,
}

/// Evolve along the trajectory with fixed step dt, sampling roughly
/// `target_samples` evenly spaced records (always including both endpoints).
pub fn evolve_avqds(
    h: &LcuHamiltonian,
    ctx: &TrajectoryContext,
    phi0_index: u64,
    dt: f64,
    l2_cut: f64,
    target_samples: usize,
) -> Result<AvqdsOutcome> {
    if dt <= 0.0 {
        return Err(CoreError::Contract("dt must be positive".into()));
    }
    let mut warnings = Vec::new();
    if !(1e-10..=1e-2).contains(&l2_cut) {
        warnings.push(format!(
            "l2_cut {l2_cut:.3e} outside the validated range [1e-10, 1e-2]"
        ));
    }
    let t_start = ctx.t_start();
    let t_end = ctx.t_end();
    let n_steps = ((t_end - t_start) / dt).ceil() as usize;
    let stride = (n_steps / target_samples.max(1)).max(1);

    let mut ansatz = AdaptiveAnsatz::new(h.n_qubits(), phi0_index);
    let mut t = t_start;
    let mut step_log: Vec<StepRecord> = Vec::new();
    let mut times = Vec::new();
    let mut p_of_t = Vec::new();
    let mut l2_trace = Vec::new();
    let mut fl = Vec::new();
    let mut eps_trace = Vec::new();
    let mut n_theta_trace = Vec::new();
    let mut states = Vec::new();
    let mut eps = 0.0;
    let mut prev_l: Option<(f64, f64)> = None; // (t, sqrt l2)
    let mut measurement_count = 0u64;
    let mut failure = None;

    let sample =
        |t: f64,
         l2: f64,
         eps: f64,
         ansatz: &AdaptiveAnsatz,
         times: &mut Vec<f64>,
         p_of_t: &mut Vec<f64>,
         l2_trace: &mut Vec<f64>,
         fl: &mut Vec<f64>,
         eps_trace: &mut Vec<f64>,
         n_theta_trace: &mut Vec<usize>,
         states: &mut Vec<StateVector>|
         -> Result<()> {
            let psi = ansatz.prepare_state();
            times.push(t);
            p_of_t.push(if psi.n_qubits() == 4 { transfer_probability(&psi)? } else { 0.0 });
            l2_trace.push(l2);
            let base = (1.0 - 0.5 * eps * eps).max(0.0);
            fl.push(base * base);
            eps_trace.push(eps);
            n_theta_trace.push(ansatz.n_theta());
            states.push(psi);
            Ok(())
        };

    for step in 0..n_steps {
        let dt_k = dt.min(t_end - t).max(0.0);
        if dt_k == 0.0 {
            break;
        }
        match adapt(&mut ansatz, h, t, l2_cut, ctx) {
            Ok((st, meas, added)) => {
                if let Some((tp, lp)) = prev_l {
                    eps += 0.5 * (lp + st.l2.max(0.0).sqrt()) * (t - tp);
                }
                prev_l = Some((t, st.l2.max(0.0).sqrt()));
                measurement_count += meas;
                if step % stride == 0 {
                    sample(
                        t,
                        st.l2,
                        eps,
                        &ansatz,
                        &mut times,
                        &mut p_of_t,
                        &mut l2_trace,
                        &mut fl,
                        &mut eps_trace,
                        &mut n_theta_trace,
                        &mut states,
                    )?;
                }
                step_log.push(StepRecord {
                    t,
                    l2: st.l2,
                    n_theta: ansatz.n_theta(),
                    added,
                    measurement_estimate: meas,
                });
                for (th, td) in ansatz.theta.iter_mut().zip(&st.theta_dot) {
                    *th += td * dt_k;
                }
                t += dt_k;
            }
            Err(e @ CoreError::ConvergenceFailure { .. }) => {
                warnings.push(e.to_string());
                failure = Some(e);
                break;
            }
            Err(e) => return Err(e),
        }
    }

    if failure.is_none() {
        // Endpoint diagnostics after the last step.
        let st = mclachlan_matrices(&ansatz, h, t_end)?;
        measurement_count += st.measurement_estimate;
        if let Some((tp, lp)) = prev_l {
            eps += 0.5 * (lp + st.l2.max(0.0).sqrt()) * (t_end - tp);
        }
        sample(
            t_end,
            st.l2,
            eps,
            &ansatz,
            &mut times,
            &mut p_of_t,
            &mut l2_trace,
            &mut fl,
            &mut eps_trace,
            &mut n_theta_trace,
            &mut states,
        )?;
    }

    let mut record = SimulationRecord {
        trajectory: ctx.clone(),
        method: Method::Avqds,
        times,
        p_of_t,
        fidelity: None,
        fl_bound: fl,
        l2_trace,
        eps_trace,
        n_theta_trace: Some(n_theta_trace),
        p_asymptotic: None,
        measurement_count,
        status: if failure.is_some() { RecordStatus::Failed } else { RecordStatus::Converged },
        warnings,
    };
    if failure.is_none() {
        asymptotic_probability(&mut record);
    }
    Ok(AvqdsOutcome { record, states, step_log, failure })
}

/// Hadamard-test evaluation of A^R and C^I on an N_Q + 1 qubit register: the
/// ancilla starts in |+>, the compared circuit variants run on its two
/// branches, and Re<branch0|branch1> is read off as <X_ancilla>.
pub fn mclachlan_matrices_hadamard(
    ansatz: &AdaptiveAnsatz,
    h: &LcuHamiltonian,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = ansatz.n_theta();
    let nq = ansatz.n_qubits;
    let dim = 1usize << nq;
    let x_anc = PauliString::x(nq + 1, nq);

    let run = |insert_k: usize, tail: Option<&PauliString>| -> Result<StateVector> {
        // branch anc=0: U_{insert_k} inserted before rotation insert_k;
        // branch anc=1: plain rotations, then `tail` (Pauli) if given.
        let mut amps = vec![C_ZERO; 2 * dim];
        amps[ansatz.phi0_index as usize] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[dim + ansatz.phi0_index as usize] =
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut big = StateVector::from_amps(amps)?;
        let apply_half = |big: &mut StateVector, u: &PauliString, upper: bool| -> Result<()> {
            let half: Vec<Complex64> = if upper {
                big.amps()[dim..].to_vec()
            } else {
                big.amps()[..dim].to_vec()
            };
            let hs = StateVector::from_amps(half)?.apply(u)?;
            let dst = if upper { &mut big.amps_mut()[dim..] } else { &mut big.amps_mut()[..dim] };
            dst.copy_from_slice(hs.amps());
            Ok(())
        };
        for j in 0..n {
            if j == insert_k {
                apply_half(&mut big, &ansatz.ops[j], false)?;
            }
            big.rotate(&ansatz.ops[j].pad_to(nq + 1), ansatz.theta[j])?;
        }
        if insert_k == n {
            // insertion index n means "after all rotations" (used for C rows
            // when k = n is never requested; kept for completeness).
        }
        if let Some(tp) = tail {
            apply_half(&mut big, tp, true)?;
        }
        Ok(big)
    };

    let mut a_r = vec![0.0; n * n];
    for k in 0..n {
        for l in k..n {
            // branch0 carries the U_k insertion; branch1 the U_l insertion.
            // Build by inserting U_k on anc=0 and U_l on anc=1 in one pass.
            let mut amps = vec![C_ZERO; 2 * dim];
            amps[ansatz.phi0_index as usize] =
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[dim + ansatz.phi0_index as usize] =
                Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let mut big = StateVector::from_amps(amps)?;
            for j in 0..n {
                if j == k {
                    let half = StateVector::from_amps(big.amps()[..dim].to_vec())?
                        .apply(&ansatz.ops[j])?;
                    big.amps_mut()[..dim].copy_from_slice(half.amps());
                }
                if j == l {
                    let half = StateVector::from_amps(big.amps()[dim..].to_vec())?
                        .apply(&ansatz.ops[j])?;
                    big.amps_mut()[dim..].copy_from_slice(half.amps());
                }
                big.rotate(&ansatz.ops[j].pad_to(nq + 1), ansatz.theta[j])?;
            }
            let v = big.expectation(&x_anc, None, None)?;
            a_r[k * n + l] = v;
            a_r[l * n + k] = v;
        }
    }

    let mut c_i = vec![vec![0.0; n]; h.n_terms()];
    for (gi, term) in h.terms().iter().enumerate() {
        for k in 0..n {
            let big = run(k, Some(term))?;
            c_i[gi][k] = big.expectation(&x_anc, None, None)?;
        }
    }
    Ok((a_r, c_i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ansatz_prepares_reference() {
        let a = AdaptiveAnsatz::new(4, 0b1011);
        let s = a.prepare_state();
        assert_eq!(s.basis_index().unwrap(), 0b1011);
        assert_eq!(a.pool.len(), 255);
    }

    #[test]
    fn quarter_turn_x_rotation() {
        let mut a = AdaptiveAnsatz::new(4, 0b1011);
        a.ops.push(PauliString::x(4, 0));
        a.theta.push(std::f64::consts::FRAC_PI_2);
        let s = a.prepare_state();
        // exp(-i pi/2 X0)|1011> = -i |1010>
        assert!((s.amp(0b1010) - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn theta_zero_operator_leaves_state_unchanged() {
        let mut a = AdaptiveAnsatz::new(3, 0b010);
        a.ops.push("Y1X0".parse::<PauliString>().unwrap().pad_to(3));
        a.theta.push(0.4);
        let before = a.prepare_state();
        a.ops.push("Z2X1".parse::<PauliString>().unwrap().pad_to(3));
        a.theta.push(0.0);
        let after = a.prepare_state();
        for (x, y) in before.amps().iter().zip(after.amps()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn single_op_metric_is_unity() {
        let h = LcuHamiltonian::constant(vec![PauliString::z(2, 0)], vec![0.3]).unwrap();
        let mut a = AdaptiveAnsatz::new(2, 0b01);
        a.ops.push(PauliString::x(2, 0));
        a.theta.push(0.7);
        let st = mclachlan_matrices(&a, &h, 0.0).unwrap();
        assert!((st.a_r[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distance_vanishes_for_zero_hamiltonian_and_velocity() {
        let h = LcuHamiltonian::constant(
            vec![PauliString::z(2, 0), PauliString::x(2, 1)],
            vec![0.0, 0.0],
        )
        .unwrap();
        let mut a = AdaptiveAnsatz::new(2, 0b01);
        a.ops.push(PauliString::x(2, 0));
        a.theta.push(0.2);
        let st = mclachlan_matrices(&a, &h, 0.0).unwrap();
        let g = h.coeffs_at(0.0).unwrap();
        assert_eq!(mclachlan_distance(&st, &[0.0], &g), 0.0);
    }

    #[test]
    fn empty_ansatz_distance_is_variance() {
        let h = LcuHamiltonian::constant(
            vec![PauliString::identity(2), PauliString::x(2, 0), PauliString::z(2, 1)],
            vec![0.9, 0.5, -0.3],
        )
        .unwrap();
        let a = AdaptiveAnsatz::new(2, 0b01);
        let st = mclachlan_matrices(&a, &h, 0.0).unwrap();
        // Traceless part: 0.5 X0 - 0.3 Z1 on |01>: Var = <H'^2> - <H'>^2.
        // H'|01> = 0.5|00> - 0.3|01> => <H'> = -0.3, <H'^2> = 0.25 + 0.09.
        assert!((st.h_mean + 0.3).abs() < 1e-14);
        assert!((st.var_h - 0.25).abs() < 1e-14);
        assert!((st.l2 - 0.25).abs() < 1e-14);
        assert!(st.var_h >= -1e-12);
    }

    #[test]
    fn optimal_velocity_never_exceeds_variance() {
        let h = LcuHamiltonian::constant(
            vec![PauliString::x(2, 0), PauliString::y(2, 1), PauliString::z(2, 0)],
            vec![0.4, 0.2, -0.6],
        )
        .unwrap();
        let mut a = AdaptiveAnsatz::new(2, 0b01);
        a.ops.push(PauliString::x(2, 0));
        a.theta.push(0.3);
        a.ops.push(PauliString::y(2, 1));
        a.theta.push(-0.5);
        let st = mclachlan_matrices(&a, &h, 0.0).unwrap();
        assert!(st.l2 <= st.var_h + 1e-12);
    }
}
