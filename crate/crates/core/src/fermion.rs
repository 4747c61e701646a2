//! Second-quantized Hamiltonian container and the Bravyi-Kitaev mapping of
//! fermionic ladder operators and occupation states onto qubits.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::lcu::LcuFrame;
use crate::pauli::PauliString;

/// One-body (and optionally two-body) fermionic Hamiltonian sampled at one
/// instant: H = sum h_pq a_p^dag a_q + 1/2 sum h_pqrs a_p^dag a_q^dag a_r a_s.
#[derive(Debug, Clone)]
pub struct SecondQuantizedHamiltonian {
    n_orbitals: usize,
    one_body: BTreeMap<(usize, usize), Complex64>,
    two_body: BTreeMap<(usize, usize, usize, usize), Complex64>,
}

impl SecondQuantizedHamiltonian {
    pub fn new(n_orbitals: usize) -> Self {
        SecondQuantizedHamiltonian {
            n_orbitals,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    /// Set h_pq and its Hermitian partner h_qp = conj(h_pq).
    pub fn set_one_body_pair(&mut self, p: usize, q: usize, v: Complex64) {
        assert!(p < self.n_orbitals && q < self.n_orbitals);
        self.one_body.insert((p, q), v);
        if p != q {
            self.one_body.insert((q, p), v.conj());
        }
    }

    /// Set a single h_pq entry (caller is responsible for Hermiticity).
    pub fn set_one_body(&mut self, p: usize, q: usize, v: Complex64) {
        assert!(p < self.n_orbitals && q < self.n_orbitals);
        self.one_body.insert((p, q), v);
    }

    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, v: Complex64) {
        assert!(p.max(q).max(r).max(s) < self.n_orbitals);
        self.two_body.insert((p, q, r, s), v);
    }

    pub fn one_body(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.one_body
    }

    /// Largest Hermiticity violation max |h_pq - conj(h_qp)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&(p, q), &v) in &self.one_body {
            let partner = self.one_body.get(&(q, p)).copied().unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((v - partner.conj()).norm());
        }
        worst
    }
}

/// Index sets of the Bravyi-Kitaev binary-tree construction, plus the GF(2)
/// matrix mapping occupation bits to qubit bits.
#[derive(Debug, Clone)]
pub struct BkIndexSets {
    n_modes: usize,
    pub update: Vec<Vec<usize>>,
    pub parity: Vec<Vec<usize>>,
    pub remainder: Vec<Vec<usize>>,
    /// beta rows as bitmasks: qubit p stores parity of the modes in beta[p].
    pub beta: Vec<u64>,
    beta_inv: Vec<u64>,
}

/// Occupation-number state |f_{M-1} ... f_0> with f_p = 1 for an occupied
/// spin orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccupationState {
    pub n_modes: usize,
    pub bits: u64,
}

impl OccupationState {
    pub fn new(n_modes: usize, bits: u64) -> Self {
        assert!(n_modes <= 64 && bits >> n_modes == 0);
        OccupationState { n_modes, bits }
    }

    pub fn electron_count(&self) -> u32 {
        self.bits.count_ones()
    }
}

/// Build the update/parity/remainder sets and beta matrix for `n_orbitals`
/// modes. For mode counts that are not a power of two the construction embeds
/// in the next power of two and restricts all sets to indices below M.
pub fn build_bk_sets(n_orbitals: usize) -> BkIndexSets {
    assert!(n_orbitals >= 1 && n_orbitals <= 64);
    let m = n_orbitals;
    // beta for the enclosing power of two, rows as bitmasks over columns.
    let np2 = m.next_power_of_two();
    let mut beta: Vec<u64> = vec![1]; // beta_1 = [1]
    let mut size = 1;
    while size < np2 {
        let mut next = Vec::with_capacity(2 * size);
        next.extend_from_slice(&beta);
        for (i, row) in beta.iter().enumerate() {
            let mut r = row << size;
            if i == size - 1 {
                r |= (1u64 << size) - 1; // bottom row picks up all lower modes
            }
            next.push(r);
        }
        beta = next;
        size *= 2;
    }
    let col_mask = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
    beta.truncate(m);
    for r in beta.iter_mut() {
        *r &= col_mask;
    }
    let beta_inv = gf2_invert_lower(&beta);

    let mut update = Vec::with_capacity(m);
    let mut parity = Vec::with_capacity(m);
    let mut remainder = Vec::with_capacity(m);
    for p in 0..m {
        let u: Vec<usize> = ((p + 1)..m).filter(|&j| beta[j] >> p & 1 == 1).collect();
        // Parity of modes below p expressed over qubits: XOR of beta_inv rows < p.
        let mut pmask = 0u64;
        for row in beta_inv.iter().take(p) {
            pmask ^= row;
        }
        let pset: Vec<usize> = (0..m).filter(|&j| pmask >> j & 1 == 1).collect();
        // Flip set: qubits other than p entering the decode of f_p.
        let fmask = beta_inv[p] & !(1u64 << p);
        let rset: Vec<usize> = (0..m)
            .filter(|&j| (pmask & !fmask) >> j & 1 == 1)
            .collect();
        update.push(u);
        parity.push(pset);
        remainder.push(rset);
    }
    BkIndexSets { n_modes: m, update, parity, remainder, beta, beta_inv }
}

impl BkIndexSets {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Pauli expansion of the creation operator a_p^dagger.
    pub fn raising(&self, p: usize) -> Vec<(PauliString, Complex64)> {
        self.ladder(p, true)
    }

    /// Pauli expansion of the annihilation operator a_p.
    pub fn lowering(&self, p: usize) -> Vec<(PauliString, Complex64)> {
        self.ladder(p, false)
    }

    fn ladder(&self, p: usize, raising: bool) -> Vec<(PauliString, Complex64)> {
        assert!(p < self.n_modes);
        let m = self.n_modes;
        let ubit: u64 = self.update[p].iter().map(|&j| 1u64 << j).sum();
        let pbit: u64 = self.parity[p].iter().map(|&j| 1u64 << j).sum();
        let rbit: u64 = self.remainder[p].iter().map(|&j| 1u64 << j).sum();
        // rho(p): parity set for even p, remainder set for odd p.
        let rho = if p % 2 == 0 { pbit } else { rbit };
        let x_part = PauliString::new(m, ubit | (1 << p), pbit, 0);
        let y_part = PauliString::new(m, ubit | (1 << p), rho | (1 << p), 1);
        let sign = if raising { -1.0 } else { 1.0 };
        vec![
            (x_part, Complex64::new(0.5, 0.0)),
            (y_part, Complex64::new(0.0, 0.5 * sign)),
        ]
    }

    /// Map an occupation state to its qubit bitstring: q = beta f over GF(2).
    pub fn occupation_to_qubit(&self, f: &OccupationState) -> u64 {
        assert_eq!(f.n_modes, self.n_modes);
        let mut q = 0u64;
        for (p, row) in self.beta.iter().enumerate() {
            q |= (((row & f.bits).count_ones() & 1) as u64) << p;
        }
        q
    }

    /// Inverse map: f = beta^{-1} q.
    pub fn qubit_to_occupation(&self, q: u64) -> OccupationState {
        let mut f = 0u64;
        for (p, row) in self.beta_inv.iter().enumerate() {
            f |= (((row & q).count_ones() & 1) as u64) << p;
        }
        OccupationState::new(self.n_modes, f)
    }
}

pub fn occupation_to_qubit(f: &OccupationState, sets: &BkIndexSets) -> u64 {
    sets.occupation_to_qubit(f)
}

/// Invert a lower-triangular unit-diagonal GF(2) matrix given as row masks.
fn gf2_invert_lower(rows: &[u64]) -> Vec<u64> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        for row in (col + 1)..n {
            if a[row] >> col & 1 == 1 {
                a[row] ^= a[col];
                inv[row] ^= inv[col];
            }
        }
    }
    inv
}

/// Accumulate `coeff * op` into a canonical (x_mask, z_mask) -> coefficient
/// map, folding the string's phase into the coefficient so every key stands
/// for its Hermitian +1-phase representative.
fn accumulate(
    acc: &mut BTreeMap<(u64, u64), Complex64>,
    op: &PauliString,
    coeff: Complex64,
) {
    let canonical = op.phase_normalized();
    // op = i^{residual} * canonical
    let folded = match op
        .phase_exp()
        .wrapping_sub(canonical.phase_exp())
        & 3
    {
        0 => coeff,
        1 => coeff * Complex64::new(0.0, 1.0),
        2 => -coeff,
        _ => coeff * Complex64::new(0.0, -1.0),
    };
    *acc.entry(op.sort_key()).or_insert(Complex64::new(0.0, 0.0)) += folded;
}

/// Bravyi-Kitaev transform of a second-quantized Hamiltonian sampled at
/// `frame_time`. Returns the frame with terms in canonical (x, z) order and
/// real coefficients; exact zeros are dropped.
pub fn bk_transform(
    h: &SecondQuantizedHamiltonian,
    sets: &BkIndexSets,
    frame_time: f64,
) -> Result<LcuFrame> {
    if sets.n_modes() != h.n_orbitals() {
        return Err(CoreError::DimensionMismatch {
            expected: h.n_orbitals(),
            got: sets.n_modes(),
        });
    }
    let defect = h.hermiticity_defect();
    let scale = h
        .one_body
        .values()
        .map(|v| v.norm())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    if defect > 1e-12 * scale {
        return Err(CoreError::NotHermitian(format!(
            "one-body coefficients violate h_pq = conj(h_qp) by {defect:.3e}"
        )));
    }

    let mut acc: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
    // Symmetrize before expanding so coefficients come out exactly real.
    let mut sym = BTreeMap::new();
    for (&(p, q), &v) in &h.one_body {
        let partner = h.one_body.get(&(q, p)).copied().unwrap_or(Complex64::new(0.0, 0.0));
        sym.insert((p, q), 0.5 * (v + partner.conj()));
    }
    for (&(p, q), &v) in &sym {
        if v.norm() == 0.0 {
            continue;
        }
        for (op_a, ca) in sets.raising(p) {
            for (op_b, cb) in sets.lowering(q) {
                let prod = op_a.mul(&op_b)?;
                accumulate(&mut acc, &prod, v * ca * cb);
            }
        }
    }
    for (&(p, q, r, s), &v) in &h.two_body {
        if v.norm() == 0.0 {
            continue;
        }
        let half = 0.5 * v;
        for (op_a, ca) in sets.raising(p) {
            for (op_b, cb) in sets.raising(q) {
                for (op_c, cc) in sets.lowering(r) {
                    for (op_d, cd) in sets.lowering(s) {
                        let prod = op_a.mul(&op_b)?.mul(&op_c)?.mul(&op_d)?;
                        accumulate(&mut acc, &prod, half * ca * cb * cc * cd);
                    }
                }
            }
        }
    }

    let m = sets.n_modes();
    let mut terms = Vec::new();
    let mut coeffs = Vec::new();
    for (&(x, z), &c) in &acc {
        if c.norm() == 0.0 {
            continue;
        }
        if c.im.abs() > 1e-12 * scale {
            return Err(CoreError::NotHermitian(format!(
                "encoded coefficient for ({x:#x},{z:#x}) has imaginary part {:.3e}",
                c.im
            )));
        }
        terms.push(PauliString::hermitian(m, x, z));
        coeffs.push(c.re);
    }
    Ok(LcuFrame { time: frame_time, terms, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_sets() {
        let sets = build_bk_sets(1);
        assert!(sets.update[0].is_empty());
        assert!(sets.parity[0].is_empty());
        assert!(sets.remainder[0].is_empty());
        assert_eq!(sets.beta, vec![1]);
    }

    #[test]
    fn four_mode_beta_rows() {
        let sets = build_bk_sets(4);
        // q0=f0, q1=f0^f1, q2=f2, q3=f0^f1^f2^f3
        assert_eq!(sets.beta, vec![0b0001, 0b0011, 0b0100, 0b1111]);
        assert_eq!(sets.update[0], vec![1, 3]);
        assert_eq!(sets.update[1], vec![3]);
        assert_eq!(sets.update[2], vec![3]);
        assert!(sets.update[3].is_empty());
        assert_eq!(sets.parity[1], vec![0]);
        assert_eq!(sets.parity[2], vec![1]);
        assert_eq!(sets.parity[3], vec![1, 2]);
        assert!(sets.remainder[1].is_empty());
        assert_eq!(sets.remainder[2], vec![1]);
        assert!(sets.remainder[3].is_empty());
    }

    #[test]
    fn mode_two_ladder_support() {
        // a2 and a2^dag touch qubits {3, 2, 1} only.
        let sets = build_bk_sets(4);
        for (op, _) in sets.raising(2).into_iter().chain(sets.lowering(2)) {
            let support = op.x_mask() | op.z_mask();
            assert_eq!(support & !0b1110, 0, "support {support:#b}");
            assert_ne!(support & 0b0100, 0);
        }
    }

    #[test]
    fn occupation_examples() {
        let sets = build_bk_sets(4);
        let f = |bits| OccupationState::new(4, bits);
        assert_eq!(sets.occupation_to_qubit(&f(0b0001)), 0b1011);
        assert_eq!(sets.occupation_to_qubit(&f(0b0010)), 0b1010);
        assert_eq!(sets.occupation_to_qubit(&f(0b0000)), 0b0000);
    }

    #[test]
    fn occupation_map_is_a_bijection() {
        for m in 1..=6 {
            let sets = build_bk_sets(m);
            let mut seen = vec![false; 1 << m];
            for bits in 0..(1u64 << m) {
                let q = sets.occupation_to_qubit(&OccupationState::new(m, bits));
                assert!(!seen[q as usize]);
                seen[q as usize] = true;
                assert_eq!(sets.qubit_to_occupation(q).bits, bits);
            }
        }
    }

    #[test]
    fn number_operator_on_two_modes() {
        // h00 = eps alone encodes to (eps/2) I - (eps/2) Z0.
        let eps = 0.37;
        let mut h = SecondQuantizedHamiltonian::new(2);
        h.set_one_body_pair(0, 0, Complex64::new(eps, 0.0));
        let sets = build_bk_sets(2);
        let frame = bk_transform(&h, &sets, 0.0).unwrap();
        assert_eq!(frame.terms.len(), 2);
        assert_eq!(frame.terms[0], PauliString::identity(2));
        assert_eq!(frame.terms[1], PauliString::z(2, 0));
        assert!((frame.coeffs[0] - eps / 2.0).abs() < 1e-15);
        assert!((frame.coeffs[1] + eps / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_is_empty() {
        let h = SecondQuantizedHamiltonian::new(3);
        let sets = build_bk_sets(3);
        let frame = bk_transform(&h, &sets, 1.0).unwrap();
        assert!(frame.terms.is_empty());
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut h = SecondQuantizedHamiltonian::new(2);
        h.set_one_body(0, 1, Complex64::new(1.0, 0.0));
        h.set_one_body(1, 0, Complex64::new(0.5, 0.0));
        let sets = build_bk_sets(2);
        assert!(bk_transform(&h, &sets, 0.0).is_err());
    }
}
