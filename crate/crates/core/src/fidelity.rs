//! State and channel fidelities, trace distance and error angles.

use crate::channel::{check_density, QuantumChannel, TOL_PSD};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, trace_norm_hermitian, CMat};

fn same_shape(rho: &CMat, sigma: &CMat) -> Result<()> {
    if rho.shape() != sigma.shape() {
        return Err(Error::DimensionMismatch(format!(
            "states are {:?} and {:?}",
            rho.shape(),
            sigma.shape()
        )));
    }
    Ok(())
}

/// Uhlmann fidelity `F(ρ, σ) = ‖√ρ √σ‖₁²`.
pub fn state_fidelity(rho: &CMat, sigma: &CMat) -> Result<f64> {
    same_shape(rho, sigma)?;
    for m in [rho, sigma] {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let min = crate::linalg::min_eigenvalue(m);
        if min < TOL_PSD {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    // singular values of √ρ√σ avoid square roots of round-off eigenvalues
    let product = psd_sqrt(rho) * psd_sqrt(sigma);
    let nuclear: f64 = product.singular_values().iter().sum();
    Ok((nuclear * nuclear).clamp(0.0, 1.0))
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    same_shape(rho, sigma)?;
    Ok(0.5 * trace_norm_hermitian(&(rho - sigma)))
}

/// Entanglement fidelity `⟨Φ|(id ⊗ Q)(Φ)|Φ⟩` from the Choi matrix.
pub fn entanglement_fidelity(ch: &QuantumChannel) -> Result<f64> {
    let d = ch.square_dim()?;
    let gamma = ch.choi();
    let m = gamma.matrix();
    // ⟨Γ|Γ^Q|Γ⟩ sums the (i,i),(j,j) block diagonal entries
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += m[(i * d + i, j * d + j)].re;
        }
    }
    Ok(acc / (d * d) as f64)
}

/// Entanglement fidelity from the Kraus operators, `(1/d²) Σ |Tr Qᵢ|²`.
pub fn entanglement_fidelity_kraus(ch: &QuantumChannel) -> Result<f64> {
    let d = ch.square_dim()?;
    let sum: f64 = ch.kraus().iter().map(|k| k.trace().norm_sqr()).sum();
    Ok(sum / (d * d) as f64)
}

/// Average fidelity from entanglement fidelity, `(d·F_e + 1)/(d + 1)`.
pub fn average_from_entanglement(fe: f64, d: usize) -> f64 {
    let d = d as f64;
    (d * fe + 1.0) / (d + 1.0)
}

pub fn average_fidelity(ch: &QuantumChannel) -> Result<f64> {
    let d = ch.square_dim()?;
    Ok(average_from_entanglement(entanglement_fidelity(ch)?, d))
}

/// `arccos √F_e`, clamped into `[0, π/2]`.
pub fn error_angle_from_fe(fe: f64) -> f64 {
    fe.clamp(0.0, 1.0).sqrt().acos()
}

pub fn error_angle(ch: &QuantumChannel) -> Result<f64> {
    Ok(error_angle_from_fe(entanglement_fidelity(ch)?))
}

/// Fidelity of a density matrix with a pure state, `⟨ψ|ρ|ψ⟩`.
pub fn pure_state_overlap(rho: &CMat, psi: &crate::linalg::CVec) -> Result<f64> {
    check_density(rho)?;
    if psi.len() != rho.nrows() {
        return Err(Error::DimensionMismatch("state vector length".into()));
    }
    Ok((psi.adjoint() * rho * psi)[(0, 0)].re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{amplitude_damping, depolarizing, random_channel, QuantumChannel};
    use crate::linalg::{basis_vector, c, identity, projector, random_density, CMat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ket(k: usize) -> CMat {
        projector(&basis_vector(2, k))
    }

    #[test]
    fn state_fidelity_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density(3, &mut rng);
        assert!((state_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        assert!(state_fidelity(&ket(0), &ket(1)).unwrap().abs() < 1e-15);
        let mixed = identity(2) * c(0.5, 0.0);
        assert!((state_fidelity(&ket(0), &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn state_fidelity_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let a = random_density(3, &mut rng);
            let b = random_density(3, &mut rng);
            let f_ab = state_fidelity(&a, &b).unwrap();
            let f_ba = state_fidelity(&b, &a).unwrap();
            assert!((f_ab - f_ba).abs() < 1e-10);
            assert!((0.0..=1.0).contains(&f_ab));
        }
    }

    #[test]
    fn state_fidelity_rejects_non_psd_and_shape() {
        let bad = crate::linalg::real_diag(&[1.5, -0.5]);
        assert!(matches!(state_fidelity(&bad, &ket(0)), Err(Error::NotPositive { .. })));
        assert!(state_fidelity(&ket(0), &identity(3)).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let mixed = identity(2) * c(0.5, 0.0);
        assert_eq!(trace_distance(&ket(0), &ket(0)).unwrap(), 0.0);
        assert!((trace_distance(&ket(0), &ket(1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&ket(0), &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!(trace_distance(&ket(0), &identity(3)).is_err());
    }

    #[test]
    fn trace_distance_triangle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let a = random_density(3, &mut rng);
            let b = random_density(3, &mut rng);
            let t = random_density(3, &mut rng);
            let direct = trace_distance(&a, &b).unwrap();
            let via = trace_distance(&a, &t).unwrap() + trace_distance(&t, &b).unwrap();
            assert!(direct <= via + 1e-12);
        }
    }

    #[test]
    fn entanglement_fidelity_examples() {
        let id = QuantumChannel::identity(2).unwrap();
        assert!((entanglement_fidelity(&id).unwrap() - 1.0).abs() < 1e-15);
        let dep = depolarizing(2, 0.2).unwrap();
        assert!((entanglement_fidelity(&dep).unwrap() - 0.85).abs() < 1e-12);
        let ad = amplitude_damping(0.1).unwrap();
        let expected = (1.0 + 0.9f64.sqrt()).powi(2) / 4.0;
        assert!((entanglement_fidelity(&ad).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.949342).abs() < 1e-6);
        let rect = random_channel(2, 3, 2, 1).unwrap();
        assert!(matches!(entanglement_fidelity(&rect), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn routes_agree_on_random_channels() {
        for seed in 0..500u64 {
            let d = 2 + (seed % 3) as usize;
            let k = 1 + (seed as usize % (d * d));
            let ch = random_channel(d, d, k, seed).unwrap();
            let a = entanglement_fidelity(&ch).unwrap();
            let b = entanglement_fidelity_kraus(&ch).unwrap();
            assert!((a - b).abs() < 1e-12, "seed {seed}: {a} vs {b}");
        }
    }

    #[test]
    fn random_unitary_channel_fidelity() {
        let ch = random_channel(2, 2, 1, 17).unwrap();
        let u = &ch.kraus()[0];
        let direct = u.trace().norm_sqr() / 4.0;
        assert!((entanglement_fidelity(&ch).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn average_fidelity_examples() {
        let id = QuantumChannel::identity(2).unwrap();
        assert!((average_fidelity(&id).unwrap() - 1.0).abs() < 1e-15);
        let dep = depolarizing(2, 0.2).unwrap();
        assert!((average_fidelity(&dep).unwrap() - 0.9).abs() < 1e-12);
        assert!((average_from_entanglement(0.0, 2) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn depolarizing_average_fidelity_grid() {
        for d in [2usize, 3] {
            for k in 0..=10 {
                let p = k as f64 / 10.0;
                let f = average_fidelity(&depolarizing(d, p).unwrap()).unwrap();
                let expected = 1.0 - (d as f64 - 1.0) * p / d as f64;
                assert!((f - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn error_angle_examples() {
        let id = QuantumChannel::identity(2).unwrap();
        assert!(error_angle(&id).unwrap().abs() < 1e-7);
        let dep = depolarizing(2, 0.2).unwrap();
        assert!((error_angle(&dep).unwrap() - 0.85f64.sqrt().acos()).abs() < 1e-10);
        assert!((0.85f64.sqrt().acos() - 0.39770).abs() < 1e-5);
        assert!((error_angle_from_fe(0.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn pure_overlap_matches_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(2, &mut rng);
        let psi = basis_vector(2, 0);
        let a = pure_state_overlap(&rho, &psi).unwrap();
        let b = state_fidelity(&rho, &projector(&psi)).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} {b}");
    }
}
