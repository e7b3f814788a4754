//! χ-matrix representation of square channels and the per-Kraus angle
//! decomposition `Qᵢ = qᵢ (cos φᵢ B₀ + sin φᵢ Σₖ vᵢₖ Bₖ)`.

use crate::channel::{matrix_to_json, MatrixJson, QuantumChannel};
use crate::error::Result;
use crate::linalg::{c, inner, CMat, CVec, C64, ONE, ZERO};
use crate::operators::{operator_basis, BasisId};
use serde::Serialize;

/// χ matrix: `Q(ρ) = Σₖₗ χₖₗ Bₖ ρ Bₗ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    d: usize,
    basis: BasisId,
    mat: CMat,
}

impl ChiMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn chi00(&self) -> f64 {
        self.mat[(0, 0)].re
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.mat.nrows();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for col in 0..n {
                if r != col {
                    worst = worst.max(self.mat[(r, col)].norm());
                }
            }
        }
        worst
    }

    /// Deviation from the trace-preservation constraints `Σₖₗ χₖₗ Bₗ†Bₖ = I`.
    pub fn tp_defect(&self) -> f64 {
        let (_, basis) = operator_basis(self.d);
        let mut acc = CMat::zeros(self.d, self.d);
        let n = basis.len();
        for k in 0..n {
            for l in 0..n {
                acc += basis[l].adjoint() * &basis[k] * self.mat[(k, l)];
            }
        }
        crate::linalg::max_abs_diff(&acc, &crate::linalg::identity(self.d))
    }

    pub fn to_json(&self) -> MatrixJson {
        matrix_to_json(&self.mat)
    }
}

/// Coefficients `⟨Bₖ, Qᵢ⟩` of every Kraus operator in the operator basis.
fn basis_coefficients(ch: &QuantumChannel, basis: &[CMat]) -> Vec<Vec<C64>> {
    ch.kraus()
        .iter()
        .map(|q| basis.iter().map(|b| inner(b, q)).collect())
        .collect()
}

pub fn chi_matrix(ch: &QuantumChannel) -> Result<ChiMatrix> {
    let d = ch.square_dim()?;
    let (id, basis) = operator_basis(d);
    let coeffs = basis_coefficients(ch, &basis);
    let n = basis.len();
    let mut mat = CMat::zeros(n, n);
    for row in &coeffs {
        for k in 0..n {
            for l in 0..n {
                mat[(k, l)] += row[k] * row[l].conj();
            }
        }
    }
    Ok(ChiMatrix { d, basis: id, mat })
}

/// `χ₀₀ = (1/d) Σᵢ |Tr Qᵢ|²`.
pub fn chi00(ch: &QuantumChannel) -> Result<f64> {
    let d = ch.square_dim()?;
    let sum: f64 = ch.kraus().iter().map(|k| k.trace().norm_sqr()).sum();
    Ok(sum / d as f64)
}

/// Angle data of one Kraus operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KrausAngles {
    /// Frobenius norm `qᵢ`.
    pub q: f64,
    /// Angle between the operator and `B₀`, in `[0, π/2]`.
    pub phi: f64,
    /// Unit vector of coefficients on `B₁ … B_{d²−1}`.
    #[serde(skip)]
    pub v: CVec,
    /// Global phase removed so that `⟨B₀, Qᵢ⟩ ≥ 0`; the original operator is
    /// `e^{i·gauge_phase}` times the reconstruction.
    pub gauge_phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KrausAngleDecomposition {
    pub d: usize,
    pub basis: BasisId,
    pub entries: Vec<KrausAngles>,
}

impl KrausAngleDecomposition {
    /// Rebuilds the phase-gauged Kraus operators `qᵢ(cos φᵢ B₀ + sin φᵢ Σ vᵢₖ Bₖ)`.
    pub fn reconstruct_gauged(&self) -> Vec<CMat> {
        let (_, basis) = operator_basis(self.d);
        self.entries
            .iter()
            .map(|e| {
                let mut op = &basis[0] * c(e.q * e.phi.cos(), 0.0);
                for (k, b) in basis.iter().enumerate().skip(1) {
                    op += b * (e.v[k - 1] * (e.q * e.phi.sin()));
                }
                op
            })
            .collect()
    }

    /// Rebuilds the original Kraus operators, gauge phase restored.
    pub fn reconstruct(&self) -> Vec<CMat> {
        self.reconstruct_gauged()
            .into_iter()
            .zip(&self.entries)
            .map(|(op, e)| op * C64::from_polar(1.0, e.gauge_phase))
            .collect()
    }

    /// `Σᵢ qᵢ² cos² φᵢ`, which equals `χ₀₀`.
    pub fn chi00(&self) -> f64 {
        self.entries.iter().map(|e| (e.q * e.phi.cos()).powi(2)).sum()
    }
}

pub fn kraus_angle_decomposition(ch: &QuantumChannel) -> Result<KrausAngleDecomposition> {
    let d = ch.square_dim()?;
    let (id, basis) = operator_basis(d);
    let n = basis.len();
    let entries = basis_coefficients(ch, &basis)
        .into_iter()
        .map(|coeffs| {
            let c0 = coeffs[0];
            let gauge_phase = if c0.norm() > 0.0 { c0.arg() } else { 0.0 };
            let unphase = C64::from_polar(1.0, -gauge_phase);
            let gauged: Vec<C64> = coeffs.iter().map(|z| z * unphase).collect();
            let q = gauged.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let rest = gauged[1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let (phi, v) = if q == 0.0 {
                (0.0, unit_first(n - 1))
            } else {
                let phi = rest.atan2(gauged[0].re.max(0.0));
                let v = if rest > 0.0 {
                    CVec::from_iterator(n - 1, gauged[1..].iter().map(|z| z / rest))
                } else {
                    unit_first(n - 1)
                };
                (phi, v)
            };
            KrausAngles { q, phi, v, gauge_phase }
        })
        .collect();
    Ok(KrausAngleDecomposition { d, basis: id, entries })
}

fn unit_first(n: usize) -> CVec {
    let mut v = CVec::from_element(n, ZERO);
    if n > 0 {
        v[0] = ONE;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, depolarizing, random_channel};
    use crate::fidelity::entanglement_fidelity;
    use crate::linalg::max_abs_diff;

    #[test]
    fn identity_chi() {
        let id = QuantumChannel::identity(2).unwrap();
        let chi = chi_matrix(&id).unwrap();
        assert!((chi.chi00() - 2.0).abs() < 1e-14);
        assert!((chi00(&id).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(chi.basis(), BasisId::NormalizedPauli);
    }

    #[test]
    fn chi00_matches_entanglement_fidelity() {
        let ad = amplitude_damping(0.1).unwrap();
        let fe = entanglement_fidelity(&ad).unwrap();
        assert!((chi00(&ad).unwrap() / 2.0 - fe).abs() < 1e-12);
        assert!((fe - 0.949342).abs() < 1e-6);
        for seed in 0..100 {
            let d = 2 + (seed % 3) as usize;
            let ch = random_channel(d, d, 1 + seed as usize % (d * d), seed).unwrap();
            let chi = chi_matrix(&ch).unwrap();
            let fe = entanglement_fidelity(&ch).unwrap();
            assert!((chi.chi00() / d as f64 - fe).abs() < 1e-12);
            assert!(chi.chi00() >= -1e-12 && chi.chi00() <= d as f64 + 1e-12);
            assert!(crate::linalg::min_eigenvalue(chi.matrix()) > -1e-12);
            assert!(chi.tp_defect() < 1e-12);
        }
    }

    #[test]
    fn depolarizing_chi_is_diagonal() {
        let chi = chi_matrix(&depolarizing(2, 0.2).unwrap()).unwrap();
        assert!(chi.max_off_diagonal() < 1e-14);
        // p/4 weight on each non-identity Pauli, times d
        for k in 1..4 {
            assert!((chi.matrix()[(k, k)].re - 2.0 * 0.05).abs() < 1e-14);
        }
        let chi3 = chi_matrix(&depolarizing(3, 0.4).unwrap()).unwrap();
        assert!(chi3.max_off_diagonal() < 1e-14);
    }

    #[test]
    fn decomposition_examples() {
        let id = QuantumChannel::identity(2).unwrap();
        let dec = kraus_angle_decomposition(&id).unwrap();
        assert!((dec.entries[0].q - 2f64.sqrt()).abs() < 1e-14);
        assert!(dec.entries[0].phi.abs() < 1e-14);

        let ad = amplitude_damping(0.3).unwrap();
        let dec = kraus_angle_decomposition(&ad).unwrap();
        assert!((dec.entries[1].phi - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn decomposition_reconstructs_and_sums() {
        for seed in 0..50 {
            let d = 2 + (seed % 3) as usize;
            let ch = random_channel(d, d, 1 + seed as usize % (d * d), 1000 + seed).unwrap();
            let dec = kraus_angle_decomposition(&ch).unwrap();
            for (orig, rebuilt) in ch.kraus().iter().zip(dec.reconstruct()) {
                assert!(max_abs_diff(orig, &rebuilt) < 1e-12);
            }
            let q2: f64 = dec.entries.iter().map(|e| e.q * e.q).sum();
            assert!((q2 - d as f64).abs() < 1e-12);
            assert!((dec.chi00() - chi00(&ch).unwrap()).abs() < 1e-12);
            let (_, basis) = operator_basis(d);
            for (e, gauged) in dec.entries.iter().zip(dec.reconstruct_gauged()) {
                let c0 = inner(&basis[0], &gauged);
                assert!(c0.im.abs() < 1e-12 && c0.re >= -1e-12);
                assert!((e.v.norm() - 1.0).abs() < 1e-12);
                assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&e.phi));
            }
        }
    }
}
