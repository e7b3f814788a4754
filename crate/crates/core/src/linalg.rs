//! Dense complex linear algebra helpers shared by the channel code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
/// Dense complex matrix used for states, Kraus operators, Choi and χ matrices.
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending,
/// eigenvectors as matching columns.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = hermitian_part(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    eigvalsh(m).first().copied().unwrap_or(0.0)
}

/// Spectral norm of a Hermitian matrix.
pub fn spectral_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Trace norm of a Hermitian matrix, via its eigenvalues.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

/// Square root of a PSD matrix; negative eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &CMat) -> CMat {
    let (vals, vecs) = eigh(m);
    let n = vals.len();
    let mut d = CMat::zeros(n, n);
    for (k, v) in vals.iter().enumerate() {
        d[(k, k)] = c(v.max(0.0).sqrt(), 0.0);
    }
    &vecs * d * vecs.adjoint()
}

/// Closest isometry (in Frobenius norm) to a tall matrix: `U Vᴴ` from its SVD.
pub fn polar_isometry(a: &CMat) -> CMat {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("svd computed u");
    let v_t = svd.v_t.expect("svd computed v_t");
    u * v_t
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Hilbert–Schmidt inner product Tr(A†B).
pub fn inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn basis_vector(n: usize, k: usize) -> CVec {
    let mut v = CVec::zeros(n);
    v[k] = ONE;
    v
}

pub fn projector(v: &CVec) -> CMat {
    v * v.adjoint()
}

pub fn real_diag(values: &[f64]) -> CMat {
    let n = values.len();
    let mut m = CMat::zeros(n, n);
    for (k, v) in values.iter().enumerate() {
        m[(k, k)] = c(*v, 0.0);
    }
    m
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fixing.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(d, d, rng);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..d {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { ONE };
        for row in 0..d {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Random density matrix `G G† / Tr` from a square Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(d, d, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

/// Deviation of `U†U` from the identity.
pub fn unitarity_defect(u: &CMat) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigh_sorted_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gaussian_matrix(4, 4, &mut rng);
        let h = hermitian_part(&g);
        let (vals, vecs) = eigh(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let back = &vecs * real_diag(&vals) * vecs.adjoint();
        assert!(max_abs_diff(&back, &h) < 1e-12);
    }

    #[test]
    fn polar_gives_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = gaussian_matrix(6, 3, &mut rng);
        let v = polar_isometry(&a);
        assert!(unitarity_defect(&v) < 1e-12);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary(3, &mut rng);
        assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let rho = random_density(3, &mut rng);
        let s = psd_sqrt(&rho);
        assert!(max_abs_diff(&(&s * &s), &rho) < 1e-12);
    }
}
