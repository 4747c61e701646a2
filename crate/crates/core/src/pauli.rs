//! Bit-mask Pauli strings and dense statevectors.
//!
//! A Pauli string is stored in symplectic form: an `x_mask` and a `z_mask`
//! over the qubits plus a global phase exponent k for a factor i^k. The
//! operator it represents is
//!
//!   i^k * prod_p X_p^{x_p} * prod_p Z_p^{z_p},
//!
//! with X factors standing left of Z factors. A literal Y on qubit p is
//! (x_p, z_p) = (1, 1) together with one extra unit of phase, since
//! Y = i X Z. Keeping the phase as an integer mod 4 makes products exact.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};
use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};

/// Largest statevector we agree to simulate (dense, 2^12 amplitudes).
pub const MAX_QUBITS: usize = 12;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn phase_factor(exp: u8) -> Complex64 {
    match exp & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// An N-qubit tensor product of Pauli operators with an i^k global phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

impl PauliString {
    /// Build from raw symplectic data. Masks must fit in `n_qubits` bits.
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        let full = mask_bits(n_qubits);
        assert!(
            x_mask & !full == 0 && z_mask & !full == 0,
            "masks must be confined to {n_qubits} qubits"
        );
        PauliString { n_qubits, x_mask, z_mask, phase_exp: phase_exp & 3 }
    }

    /// The identity on `n_qubits` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        Self::new(n_qubits, 0, 0, 0)
    }

    /// A single literal X on `qubit`.
    pub fn x(n_qubits: usize, qubit: usize) -> Self {
        Self::new(n_qubits, 1 << qubit, 0, 0)
    }

    /// A single literal Y on `qubit` (carries its i inside the phase).
    pub fn y(n_qubits: usize, qubit: usize) -> Self {
        Self::new(n_qubits, 1 << qubit, 1 << qubit, 1)
    }

    /// A single literal Z on `qubit`.
    pub fn z(n_qubits: usize, qubit: usize) -> Self {
        Self::new(n_qubits, 0, 1 << qubit, 0)
    }

    /// The Hermitian string with the given X/Y/Z pattern encoded by the two
    /// masks: qubits in `x & z` are Y, the phase is fixed accordingly.
    pub fn hermitian(n_qubits: usize, x_mask: u64, z_mask: u64) -> Self {
        let ys = (x_mask & z_mask).count_ones() as u8;
        Self::new(n_qubits, x_mask, z_mask, ys & 3)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    /// Phase exponent left over after accounting for the i of every literal Y.
    /// 0 or 2 means the string is +/- a Hermitian operator.
    pub fn residual_phase(&self) -> u8 {
        let ys = (self.x_mask & self.z_mask).count_ones() as u8;
        (self.phase_exp + 4 - (ys & 3)) & 3
    }

    pub fn is_hermitian(&self) -> bool {
        self.residual_phase() % 2 == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0 && self.phase_exp == 0
    }

    /// Same string with the global phase reset to make it the canonical
    /// Hermitian (+1) representative of its projective class.
    pub fn phase_normalized(&self) -> Self {
        Self::hermitian(self.n_qubits, self.x_mask, self.z_mask)
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    /// Exact operator product a * b, phases included.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits != other.n_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        // Moving Z^{za} across X^{xb} picks up (-1)^{|za & xb|}.
        let crossings = (self.z_mask & other.x_mask).count_ones() as u8;
        let phase = (self.phase_exp + other.phase_exp + 2 * (crossings & 1)) & 3;
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase_exp: phase,
        })
    }

    /// True when the two strings commute as operators.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let ac = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        ac % 2 == 0
    }

    /// Canonical (x_mask, z_mask) sort key for stable term ordering.
    pub fn sort_key(&self) -> (u64, u64) {
        (self.x_mask, self.z_mask)
    }

    /// Complex phase carried on the transition |n> -> |n ^ x_mask|.
    fn amp_phase(&self, n: u64) -> Complex64 {
        let sign = (self.z_mask & n).count_ones() & 1;
        phase_factor(self.phase_exp + 2 * sign as u8)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residual_phase() {
            1 => write!(f, "i")?,
            2 => write!(f, "-")?,
            3 => write!(f, "-i")?,
            _ => {}
        }
        if self.x_mask == 0 && self.z_mask == 0 {
            return write!(f, "I");
        }
        for q in (0..self.n_qubits).rev() {
            let x = (self.x_mask >> q) & 1;
            let z = (self.z_mask >> q) & 1;
            match (x, z) {
                (1, 0) => write!(f, "X{q}")?,
                (0, 1) => write!(f, "Z{q}")?,
                (1, 1) => write!(f, "Y{q}")?,
                _ => {}
            }
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = CoreError;

    /// Parse labels like "I", "X0", "Z3X2Z1" into the Hermitian string on the
    /// smallest qubit count that fits (use `pad_to` to widen).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CoreError::Contract("empty Pauli label".into()));
        }
        if s == "I" {
            return Ok(PauliString::identity(1));
        }
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        let mut max_q = 0usize;
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let letter = bytes[i] as char;
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(CoreError::Contract(format!("bad Pauli label '{s}'")));
            }
            let q: usize = s[start..i]
                .parse()
                .map_err(|_| CoreError::Contract(format!("bad qubit index in '{s}'")))?;
            max_q = max_q.max(q);
            match letter {
                'X' | 'x' => x_mask |= 1 << q,
                'Z' | 'z' => z_mask |= 1 << q,
                'Y' | 'y' => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                }
                _ => return Err(CoreError::Contract(format!("bad Pauli letter '{letter}'"))),
            }
        }
        Ok(PauliString::hermitian(max_q + 1, x_mask, z_mask))
    }
}

impl PauliString {
    /// Reinterpret on a wider register (new qubits act as identity).
    pub fn pad_to(&self, n_qubits: usize) -> Self {
        assert!(n_qubits >= self.n_qubits);
        PauliString { n_qubits, ..*self }
    }
}

fn mask_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Dense complex statevector over 2^n basis states. Qubit 0 is the least
/// significant bit of the basis index, so the ket |q3 q2 q1 q0> = |1011>
/// lives at index 11.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state |index>.
    pub fn basis(n_qubits: usize, index: u64) -> Self {
        assert!(n_qubits <= MAX_QUBITS);
        assert!((index as usize) < (1 << n_qubits), "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// Wrap raw amplitudes (length must be a power of two).
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        if !n.is_power_of_two() || n == 0 {
            return Err(CoreError::Contract(format!(
                "amplitude vector length {n} is not a power of two"
            )));
        }
        let n_qubits = n.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(CoreError::Contract(format!("{n_qubits} qubits exceeds the dense limit")));
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amp(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// If this is (a phase times) a computational basis state, return its index.
    pub fn basis_index(&self) -> Result<u64> {
        let mut hit = None;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > 1e-24 {
                if hit.is_some() {
                    return Err(CoreError::NotBasisState);
                }
                hit = Some((i, a));
            }
        }
        match hit {
            Some((i, a)) if (a.norm() - 1.0).abs() < 1e-10 => Ok(i as u64),
            _ => Err(CoreError::NotBasisState),
        }
    }

    /// Apply a Pauli string, returning the transformed state. This is an
    /// amplitude permutation with +/-1, +/-i phases, so the norm is preserved
    /// exactly.
    pub fn apply(&self, u: &PauliString) -> Result<StateVector> {
        if u.n_qubits != self.n_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_qubits,
                got: u.n_qubits,
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (n, amp) in self.amps.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let m = (n as u64) ^ u.x_mask;
            out[m as usize] = u.amp_phase(n as u64) * amp;
        }
        Ok(StateVector { n_qubits: self.n_qubits, amps: out })
    }

    /// <self | other>.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Exact expectation value <self|U|self> as a complex number.
    pub fn expectation_complex(&self, u: &PauliString) -> Result<Complex64> {
        if u.n_qubits != self.n_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_qubits,
                got: u.n_qubits,
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, amp) in self.amps.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let m = ((n as u64) ^ u.x_mask) as usize;
            acc += self.amps[m].conj() * u.amp_phase(n as u64) * amp;
        }
        Ok(acc)
    }

    /// Expectation value of a Hermitian Pauli string. Without `shots` the
    /// exact value is returned (the imaginary part must round away below
    /// 1e-12). With `shots` the +/-1 eigenvalue outcomes are binomially
    /// sampled with the given seed, so the estimate is reproducible.
    pub fn expectation(
        &self,
        u: &PauliString,
        shots: Option<u64>,
        seed: Option<u64>,
    ) -> Result<f64> {
        let exact = self.expectation_complex(u)?;
        match shots {
            None => {
                if u.is_hermitian() && exact.im.abs() > 1e-12 {
                    return Err(CoreError::NotHermitian(format!(
                        "expectation of {u} has imaginary part {:.3e}",
                        exact.im
                    )));
                }
                Ok(exact.re)
            }
            Some(n) => {
                if n == 0 {
                    return Err(CoreError::Contract("shots must be >= 1".into()));
                }
                if !u.is_hermitian() {
                    return Err(CoreError::NotHermitian(format!(
                        "cannot sample non-Hermitian string {u}"
                    )));
                }
                let p = ((1.0 + exact.re) / 2.0).clamp(0.0, 1.0);
                let mut rng = ChaCha12Rng::seed_from_u64(seed.unwrap_or(0));
                let k = Binomial::new(n, p)
                    .map_err(|e| CoreError::Contract(format!("binomial: {e}")))?
                    .sample(&mut rng);
                Ok(2.0 * k as f64 / n as f64 - 1.0)
            }
        }
    }

    /// out += c * (U |self>)
    pub fn accumulate_applied(
        &self,
        u: &PauliString,
        c: Complex64,
        out: &mut [Complex64],
    ) {
        debug_assert_eq!(out.len(), self.amps.len());
        for (n, amp) in self.amps.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let m = ((n as u64) ^ u.x_mask) as usize;
            out[m] += c * u.amp_phase(n as u64) * amp;
        }
    }

    /// In-place rotation exp(-i theta U) = cos(theta) I - i sin(theta) U for a
    /// Hermitian Pauli string U; exactly unitary up to rounding.
    pub fn rotate(&mut self, u: &PauliString, theta: f64) -> Result<()> {
        if u.n_qubits != self.n_qubits {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_qubits,
                got: u.n_qubits,
            });
        }
        if !u.is_hermitian() || u.residual_phase() != 0 {
            return Err(CoreError::NotHermitian(format!(
                "rotation generator {u} must be a +1-phase Hermitian string"
            )));
        }
        let c = theta.cos();
        let s = theta.sin();
        let x = u.x_mask;
        if x == 0 {
            // Diagonal generator: pure phases.
            for (n, amp) in self.amps.iter_mut().enumerate() {
                let sign = if (u.z_mask & n as u64).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
                let eig = sign * phase_factor(u.phase_exp).re;
                *amp *= Complex64::new(c, -s * eig);
            }
            return Ok(());
        }
        // Process each (n, n^x) pair once.
        for n in 0..self.amps.len() {
            let m = n ^ x as usize;
            if m < n {
                continue;
            }
            let pn = u.amp_phase(n as u64); // U: |n> -> pn |m>
            let pm = u.amp_phase(m as u64); // U: |m> -> pm |n>
            let an = self.amps[n];
            let am = self.amps[m];
            self.amps[n] = c * an - I * s * pm * am;
            self.amps[m] = c * am - I * s * pn * an;
        }
        Ok(())
    }
}

/// Free-function views of the basic operations.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    a.mul(b)
}

pub fn apply_pauli(u: &PauliString, s: &StateVector) -> Result<StateVector> {
    s.apply(u)
}

pub fn expectation(
    u: &PauliString,
    s: &StateVector,
    shots: Option<u64>,
    seed: Option<u64>,
) -> Result<f64> {
    s.expectation(u, shots, seed)
}

pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.inner(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::x(1, 0);
        let y = PauliString::y(1, 0);
        let z = PauliString::z(1, 0);
        // X * Y = i Z
        let xy = x.mul(&y).unwrap();
        assert_eq!(xy.x_mask(), 0);
        assert_eq!(xy.z_mask(), 1);
        assert_eq!(xy.residual_phase(), 1);
        // Y * X = -i Z
        let yx = y.mul(&x).unwrap();
        assert_eq!(yx.residual_phase(), 3);
        // Z * X = i Y ... sanity on one more pair
        let zx = z.mul(&x).unwrap();
        assert_eq!((zx.x_mask(), zx.z_mask()), (1, 1));
        assert_eq!(zx.residual_phase(), 1);
    }

    #[test]
    fn involution_gives_identity() {
        for label in ["X0", "Y1", "Z2", "Z3X2Z1", "Y3X1Z0"] {
            let u: PauliString = label.parse().unwrap();
            let u = u.pad_to(4);
            let sq = u.mul(&u).unwrap();
            assert!(sq.is_identity(), "{label} squared should be +I, got {sq}");
        }
    }

    #[test]
    fn four_qubit_product_example() {
        let a: PauliString = "Z1X0".parse().unwrap();
        let b: PauliString = "Z3X2Z1".parse().unwrap();
        let prod = a.pad_to(4).mul(&b.pad_to(4)).unwrap();
        let expect: PauliString = "Z3X2X0".parse().unwrap();
        assert_eq!(prod, expect.pad_to(4));
        assert_eq!(prod.residual_phase(), 0);
    }

    #[test]
    fn apply_bit_flip_and_phase() {
        let s = StateVector::basis(4, 0b1011);
        let x0 = PauliString::x(4, 0);
        let t = s.apply(&x0).unwrap();
        assert_eq!(t.basis_index().unwrap(), 0b1010);

        let z0 = PauliString::z(4, 0);
        let t = s.apply(&z0).unwrap();
        assert!((t.amp(0b1011) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_y_phase() {
        // Y on |0> gives +i|1>: qubit 2 of |1011> is 0, so Y2 |1011> = i |1111>.
        let s = StateVector::basis(4, 0b1011);
        let y2 = PauliString::y(4, 2);
        let t = s.apply(&y2).unwrap();
        assert!((t.amp(0b1111) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((t.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let s = StateVector::basis(4, 0b1011);
        assert_eq!(s.expectation(&PauliString::z(4, 0), None, None).unwrap(), -1.0);
        assert_eq!(s.expectation(&PauliString::x(4, 0), None, None).unwrap(), 0.0);

        let mut psi = StateVector::basis(4, 0b1011);
        psi.amps_mut()[0b1010] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        psi.amps_mut()[0b1011] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z1z0: PauliString = "Z1Z0".parse().unwrap();
        let v = psi.expectation(&z1z0.pad_to(4), None, None).unwrap();
        assert!(v.abs() < 1e-14);
        let x0 = PauliString::x(4, 0);
        let w = psi.inner(&psi.apply(&x0).unwrap()).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inner_product_basics() {
        let a = StateVector::basis(4, 0b1011);
        let b = StateVector::basis(4, 0b1010);
        assert!((a.inner(&a).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(a.inner(&b).unwrap().norm() < 1e-15);
    }

    #[test]
    fn double_apply_restores_state() {
        let mut s = StateVector::basis(3, 0b011);
        s.amps_mut()[0b101] = c(0.3, 0.4);
        s.normalize();
        for label in ["Y2X0", "Z1", "X2Y1Z0"] {
            let u: PauliString = label.parse().unwrap();
            let u = u.pad_to(3);
            let t = s.apply(&u).unwrap().apply(&u).unwrap();
            let diff: f64 = t
                .amps()
                .iter()
                .zip(s.amps())
                .map(|(x, y)| (x - y).norm())
                .sum();
            assert!(diff < 1e-14, "{label}: diff {diff}");
        }
    }

    #[test]
    fn rotation_matches_cos_sin_form() {
        let mut s = StateVector::basis(4, 0b1011);
        let u: PauliString = "Y1X0".parse().unwrap();
        let u = u.pad_to(4);
        let theta = 0.37;
        s.rotate(&u, theta).unwrap();
        let manual = {
            let base = StateVector::basis(4, 0b1011);
            let ub = base.apply(&u).unwrap();
            let mut amps = vec![c(0.0, 0.0); 16];
            for i in 0..16 {
                amps[i] = theta.cos() * base.amps()[i] - I * theta.sin() * ub.amps()[i];
            }
            amps
        };
        for i in 0..16 {
            assert!((s.amps()[i] - manual[i]).norm() < 1e-15);
        }
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn shot_mode_is_deterministic_and_close() {
        let mut psi = StateVector::basis(2, 0);
        psi.amps_mut()[0] = c(0.6, 0.0);
        psi.amps_mut()[3] = c(0.0, 0.8);
        let zz: PauliString = "Z1Z0".parse().unwrap();
        let exact = psi.expectation(&zz, None, None).unwrap();
        let a = psi.expectation(&zz, Some(1_000_000), Some(7)).unwrap();
        let b = psi.expectation(&zz, Some(1_000_000), Some(7)).unwrap();
        assert_eq!(a, b);
        assert!((a - exact).abs() < 5e-3);
    }

    #[test]
    fn shot_mode_rejects_non_hermitian() {
        let s = StateVector::basis(1, 0);
        let u = PauliString::new(1, 1, 1, 0); // XZ = -iY, anti-Hermitian
        assert!(!u.is_hermitian());
        assert!(s.expectation(&u, Some(10), Some(1)).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for label in ["I", "X0", "Y2", "Z3X2Z1", "Y3Z2X1Y0"] {
            let u: PauliString = label.parse().unwrap();
            assert_eq!(u.to_string(), label);
        }
    }
}
