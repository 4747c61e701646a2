//! Charge-transfer probability, fidelity, the variational fidelity bound,
//! asymptotic extraction, and cross-section quadrature.

use crate::collision::TrajectoryContext;
use crate::constants::BOHR_AREA_1E16_CM2;
use crate::error::{CoreError, Result};
use crate::pauli::StateVector;

/// Which propagator produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Qas,
    Avqds,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Qas => "qas",
            Method::Avqds => "avqds",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Method::Exact),
            "qas" => Ok(Method::Qas),
            "avqds" => Ok(Method::Avqds),
            other => Err(CoreError::Contract(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Converged,
    Patched,
    Failed,
}

impl RecordStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordStatus::Converged => "converged",
            RecordStatus::Patched => "patched",
            RecordStatus::Failed => "failed",
        }
    }
}

/// Per-trajectory time series and summary quantities.
#[derive(Debug, Clone)]
pub struct SimulationRecord {
    pub trajectory: TrajectoryContext,
    pub method: Method,
    pub times: Vec<f64>,
    pub p_of_t: Vec<f64>,
    pub fidelity: Option<Vec<f64>>,
    pub fl_bound: Vec<f64>,
    pub l2_trace: Vec<f64>,
    /// Cumulative McLachlan error eps(t) matching `fl_bound`.
    pub eps_trace: Vec<f64>,
    pub n_theta_trace: Option<Vec<usize>>,
    pub p_asymptotic: Option<f64>,
    pub measurement_count: u64,
    pub status: RecordStatus,
    pub warnings: Vec<String>,
}

/// Fraction of the time window used for the asymptotic average.
pub const DEFAULT_ASYMPTOTIC_WINDOW: f64 = 0.05;

/// Probability of electron capture into the traveling projectile 1s state:
/// the populations of the encoded spin-up and spin-down capture kets
/// |1010> and |1000>.
pub fn transfer_probability(psi: &StateVector) -> Result<f64> {
    if psi.n_qubits() != 4 {
        return Err(CoreError::DimensionMismatch { expected: 4, got: psi.n_qubits() });
    }
    Ok(psi.amp(0b1010).norm_sqr() + psi.amp(0b1000).norm_sqr())
}

/// Probability of remaining on the target: populations of |1011> and |1100>.
pub fn target_probability(psi: &StateVector) -> Result<f64> {
    if psi.n_qubits() != 4 {
        return Err(CoreError::DimensionMismatch { expected: 4, got: psi.n_qubits() });
    }
    Ok(psi.amp(0b1011).norm_sqr() + psi.amp(0b1100).norm_sqr())
}

/// Quantum state fidelity |<exact|var>|^2, global-phase invariant.
pub fn fidelity(psi_var: &StateVector, psi_exact: &StateVector) -> Result<f64> {
    let ov = psi_exact.inner(psi_var)?;
    let f = ov.norm_sqr();
    if f > 1.0 + 1e-12 {
        return Err(CoreError::Contract(format!("fidelity {f} exceeds one beyond tolerance")));
    }
    Ok(f)
}

/// Cumulative McLachlan error eps(t) = int_0^t sqrt(L2) by trapezoid over
/// the step log.
pub fn cumulative_mclachlan_error(l2_trace: &[f64], times: &[f64]) -> Vec<f64> {
    assert_eq!(l2_trace.len(), times.len());
    let mut out = Vec::with_capacity(times.len());
    let mut eps = 0.0;
    let mut prev_l = 0.0;
    let mut prev_t = times.first().copied().unwrap_or(0.0);
    for (i, (&l2, &t)) in l2_trace.iter().zip(times).enumerate() {
        let l = l2.max(0.0).sqrt();
        if i > 0 {
            eps += 0.5 * (l + prev_l) * (t - prev_t);
        }
        prev_l = l;
        prev_t = t;
        out.push(eps);
    }
    out
}

/// Variational fidelity bound F_L(t) = max(0, 1 - eps^2/2)^2 from the
/// cumulative McLachlan error; non-increasing in t.
pub fn variational_fidelity_bound(l2_trace: &[f64], times: &[f64]) -> Vec<f64> {
    cumulative_mclachlan_error(l2_trace, times)
        .into_iter()
        .map(|eps| {
            let base = (1.0 - 0.5 * eps * eps).max(0.0);
            base * base
        })
        .collect()
}

/// Mean of P(t) over the trailing window of the record, with a warning when
/// the tail has not settled. Returns (value, warning).
pub fn asymptotic_probability_windowed(
    times: &[f64],
    p_of_t: &[f64],
    window_frac: f64,
) -> (f64, Option<String>) {
    assert_eq!(times.len(), p_of_t.len());
    assert!(!p_of_t.is_empty());
    let n = p_of_t.len();
    let w = ((n as f64 * window_frac).ceil() as usize).clamp(2.min(n), n);
    let tail = &p_of_t[n - w..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let max = tail.iter().cloned().fold(f64::MIN, f64::max);
    let min = tail.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max - min;
    // Relative to the mean, with an absolute floor so negligible capture
    // probabilities do not warn on harmless jitter.
    let warn = if spread / mean.abs().max(1e-2) > 0.02 && spread > 1e-4 {
        Some(format!(
            "asymptotic window spread {spread:.3e} exceeds 2% of mean {mean:.3e}"
        ))
    } else {
        None
    };
    (mean, warn)
}

/// Asymptotic extraction over the record's own tail, storing the result.
pub fn asymptotic_probability(record: &mut SimulationRecord) -> f64 {
    let (mean, warn) =
        asymptotic_probability_windowed(&record.times, &record.p_of_t, DEFAULT_ASYMPTOTIC_WINDOW);
    if let Some(w) = warn {
        record.warnings.push(w);
    }
    record.p_asymptotic = Some(mean);
    mean
}

/// Integrated charge-transfer cross section.
#[derive(Debug, Clone)]
pub struct CrossSectionPoint {
    pub energy_kev: f64,
    pub sigma_au: f64,
    pub sigma_cm2: f64,
    pub n_impact_points: usize,
}

/// sigma = 2 pi int P(b) b db by trapezoid over the sampled points up to
/// b_max, with the unsampled disc below the first point closed off as
/// pi b_min^2 P(b_min).
pub fn cross_section(
    energy_kev: f64,
    pb: &[(f64, f64)],
    b_max: f64,
) -> Result<CrossSectionPoint> {
    if pb.len() < 10 {
        return Err(CoreError::QuadratureResolution { min: 10, got: pb.len() });
    }
    for w in pb.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(CoreError::Contract("impact parameters must ascend".into()));
        }
    }
    for &(b, p) in pb {
        if b <= 0.0 {
            return Err(CoreError::Contract("impact parameters must be positive".into()));
        }
        if !(-1e-9..=1.0 + 1e-9).contains(&p) {
            return Err(CoreError::Contract(format!("P({b}) = {p} outside [0, 1]")));
        }
    }
    let pts: Vec<(f64, f64)> = pb
        .iter()
        .filter(|&&(b, _)| b <= b_max + 1e-12)
        .map(|&(b, p)| (b, p.clamp(0.0, 1.0)))
        .collect();
    if pts.len() < 10 {
        return Err(CoreError::QuadratureResolution { min: 10, got: pts.len() });
    }
    let mut integral = 0.0;
    for w in pts.windows(2) {
        let (b0, p0) = w[0];
        let (b1, p1) = w[1];
        integral += 0.5 * (p0 * b0 + p1 * b1) * (b1 - b0);
    }
    let (b0, p0) = pts[0];
    let sigma_au = 2.0 * std::f64::consts::PI * integral + std::f64::consts::PI * b0 * b0 * p0;
    Ok(CrossSectionPoint {
        energy_kev,
        sigma_au,
        sigma_cm2: sigma_au * BOHR_AREA_1E16_CM2,
        n_impact_points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transfer_probability_examples() {
        let s = StateVector::basis(4, 0b1011);
        assert_eq!(transfer_probability(&s).unwrap(), 0.0);
        let s = StateVector::basis(4, 0b1010);
        assert_eq!(transfer_probability(&s).unwrap(), 1.0);
        let mut s = StateVector::basis(4, 0b1011);
        s.amps_mut()[0b1010] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        s.amps_mut()[0b1011] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!((transfer_probability(&s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let a = StateVector::basis(4, 0b1011);
        let b = StateVector::basis(4, 0b1010);
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let mut shifted = a.clone();
        for amp in shifted.amps_mut() {
            *amp *= Complex64::from_polar(1.0, 0.83);
        }
        assert!((fidelity(&shifted, &a).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fl_bound_examples() {
        let times: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let zeros = vec![0.0; 101];
        let fl = variational_fidelity_bound(&zeros, &times);
        assert!(fl.iter().all(|&f| f == 1.0));

        // Constant L2 = c over [0, T]: eps(T) = sqrt(c) T, F_L = (1 - c T^2/2)^2.
        let cval = 1e-4;
        let l2 = vec![cval; 101];
        let fl = variational_fidelity_bound(&l2, &times);
        let t = 1.0;
        let expect = (1.0 - cval * t * t / 2.0) * (1.0 - cval * t * t / 2.0);
        assert!((fl[100] - expect).abs() < 1e-12);
        // Non-increasing.
        assert!(fl.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn asymptotic_tail_mean() {
        let times: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let p = vec![0.8; 200];
        let (m, warn) = asymptotic_probability_windowed(&times, &p, 0.05);
        assert!((m - 0.8).abs() < 1e-15);
        assert!(warn.is_none());

        let mut p2 = vec![0.1; 200];
        for (i, v) in p2.iter_mut().enumerate() {
            if i >= 190 {
                *v = 0.1 + 0.05 * ((i - 190) as f64 / 9.0);
            }
        }
        let (_, warn) = asymptotic_probability_windowed(&times, &p2, 0.05);
        assert!(warn.is_some());
    }

    #[test]
    fn cross_section_zero_and_exponential() {
        let pb: Vec<(f64, f64)> = (1..=500).map(|i| (i as f64 * 0.02, 0.0)).collect();
        let cs = cross_section(5.0, &pb, 10.0).unwrap();
        assert_eq!(cs.sigma_au, 0.0);

        // P(b) = exp(-b): sigma = 2 pi (1 - 11 e^{-10}) for b_max = 10.
        let pb: Vec<(f64, f64)> = (1..=500)
            .map(|i| {
                let b = i as f64 * 0.02;
                (b, (-b).exp())
            })
            .collect();
        let cs = cross_section(5.0, &pb, 10.0).unwrap();
        let expect = 2.0 * std::f64::consts::PI * (1.0 - 11.0 * (-10.0_f64).exp());
        assert!((cs.sigma_au - expect).abs() < 1e-3, "{} vs {expect}", cs.sigma_au);
        assert!((cs.sigma_cm2 / BOHR_AREA_1E16_CM2 - cs.sigma_au).abs() < 1e-12 * cs.sigma_au);
    }

    #[test]
    fn cross_section_needs_points() {
        let pb: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 0.1)).collect();
        assert!(cross_section(1.0, &pb, 10.0).is_err());
    }

    #[test]
    fn cross_section_monotone_under_domination() {
        let pb1: Vec<(f64, f64)> = (1..=100).map(|i| (i as f64 * 0.1, 0.3)).collect();
        let pb2: Vec<(f64, f64)> = (1..=100).map(|i| (i as f64 * 0.1, 0.5)).collect();
        let s1 = cross_section(1.0, &pb1, 10.0).unwrap().sigma_au;
        let s2 = cross_section(1.0, &pb2, 10.0).unwrap().sigma_au;
        assert!(s2 > s1);
    }
}
