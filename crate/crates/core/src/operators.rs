//! Pauli and generalized-Pauli (Weyl) operators.

use crate::linalg::{c, identity, kron, CMat, I, ONE, ZERO};
use std::f64::consts::PI;

pub fn pauli_i() -> CMat {
    identity(2)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

pub fn phase_s() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, I])
}

/// Single-qubit Pauli from its letter.
pub fn pauli(label: char) -> Option<CMat> {
    match label {
        'I' => Some(pauli_i()),
        'X' => Some(pauli_x()),
        'Y' => Some(pauli_y()),
        'Z' => Some(pauli_z()),
        _ => None,
    }
}

/// Tensor product of Paulis, leftmost letter on the most significant qubit.
pub fn pauli_string(labels: &str) -> Option<CMat> {
    let mut acc: Option<CMat> = None;
    for ch in labels.chars() {
        let p = pauli(ch)?;
        acc = Some(match acc {
            None => p,
            Some(a) => kron(&a, &p),
        });
    }
    acc
}

/// Weyl operator `X^a Z^b` on a `d`-level system.
pub fn weyl(d: usize, a: usize, b: usize) -> CMat {
    let omega = 2.0 * PI / d as f64;
    CMat::from_fn(d, d, |row, col| {
        if row == (col + a) % d {
            let angle = omega * ((b * col) % d) as f64;
            c(angle.cos(), angle.sin())
        } else {
            ZERO
        }
    })
}

/// All `d²` Weyl operators, `(0, 0)` (the identity) first.
pub fn weyl_set(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            out.push(weyl(d, a, b));
        }
    }
    out
}

/// Which orthonormal operator basis a χ matrix is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BasisId {
    /// `{I, X, Y, Z}/√2`.
    NormalizedPauli,
    /// `X^a Z^b / √d`, ordered by `(a, b)`.
    NormalizedWeyl,
}

/// Orthonormal operator basis with `B₀ = I/√d`. Qubits use the Pauli
/// matrices, other dimensions the Weyl operators.
pub fn operator_basis(d: usize) -> (BasisId, Vec<CMat>) {
    let norm = c(1.0 / (d as f64).sqrt(), 0.0);
    if d == 2 {
        let ops = [pauli_i(), pauli_x(), pauli_y(), pauli_z()];
        (BasisId::NormalizedPauli, ops.into_iter().map(|m| m * norm).collect())
    } else {
        (
            BasisId::NormalizedWeyl,
            weyl_set(d).into_iter().map(|m| m * norm).collect(),
        )
    }
}
