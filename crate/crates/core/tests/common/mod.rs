//! Shared dense-matrix oracles for the integration tests. Everything here is
//! built from literal 2x2 Pauli matrices and Kronecker products, independent
//! of the bit-mask algebra it is used to check.

use num_complex::Complex64;
use qcollide_core::linalg::CMat;
use qcollide_core::{PauliString, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(letter: char) -> CMat {
    let mut m = CMat::zeros(2);
    match letter {
        'I' => {
            m.set(0, 0, c(1.0, 0.0));
            m.set(1, 1, c(1.0, 0.0));
        }
        'X' => {
            m.set(0, 1, c(1.0, 0.0));
            m.set(1, 0, c(1.0, 0.0));
        }
        'Y' => {
            m.set(0, 1, c(0.0, -1.0));
            m.set(1, 0, c(0.0, 1.0));
        }
        'Z' => {
            m.set(0, 0, c(1.0, 0.0));
            m.set(1, 1, c(-1.0, 0.0));
        }
        _ => panic!("unknown Pauli letter {letter}"),
    }
    m
}

/// Dense matrix of a Pauli string from per-qubit letters, qubit 0 = least
/// significant bit of the basis index. The string's i^k phase is applied.
pub fn dense_pauli(p: &PauliString) -> CMat {
    let n = p.n_qubits();
    let mut letters = Vec::with_capacity(n);
    for q in 0..n {
        let x = (p.x_mask() >> q) & 1;
        let z = (p.z_mask() >> q) & 1;
        letters.push(match (x, z) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            (0, 1) => 'Z',
            _ => unreachable!(),
        });
    }
    // Y = i X Z carries one phase unit inside the string's exponent; the
    // literal-letter product must therefore remove it again.
    let ys = (p.x_mask() & p.z_mask()).count_ones() as u8;
    let residual = (p.phase_exp() + 4 - (ys & 3)) & 3;
    // kron with qubit (n-1) slowest: index = q_{n-1} ... q_0.
    let mut m = CMat::identity(1);
    for q in (0..n).rev() {
        m = m.kron(&pauli_2x2(letters[q]));
    }
    let phase = match residual {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    m.scale(phase)
}

pub fn state_to_vec(s: &StateVector) -> Vec<Complex64> {
    s.amps().to_vec()
}

pub fn matvec(m: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    m.matvec(v)
}

/// Dense matrix exponential by scaling and squaring with a Taylor series.
pub fn dense_expm(a: &CMat) -> CMat {
    let n = a.n();
    let norm: f64 = (0..n)
        .map(|i| (0..n).map(|j| a.at(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a.scale(c(1.0 / f64::powi(2.0, s as i32), 0.0));
    let mut term = CMat::identity(n);
    let mut sum = CMat::identity(n);
    for k in 1..40 {
        term = term.mul(&scaled).scale(c(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    let mut out = sum;
    for _ in 0..s {
        out = out.mul(&out);
    }
    out
}
