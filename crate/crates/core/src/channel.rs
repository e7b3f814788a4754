//! Quantum channels in Kraus form, their Choi matrices and basic constructors.
//!
//! Choi matrices use the unnormalized convention `Γ^Q = (id ⊗ Q)(|Γ⟩⟨Γ|)`
//! with `|Γ⟩ = Σᵢ |i⟩|i⟩`, reference factor first. Entry
//! `((i, a), (j, b))` therefore equals `⟨a|Q(|i⟩⟨j|)|b⟩`.

use crate::error::{Error, Result};
use crate::linalg::{
    c, eigh, frobenius, gaussian_matrix, hermiticity_defect, identity, is_finite, kron,
    max_abs_diff, min_eigenvalue, spectral_norm_hermitian, unitarity_defect, CMat, C64,
};
use crate::operators::weyl_set;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Trace-preservation tolerance.
pub const TOL_CPTP: f64 = 1e-9;
/// Floor on the smallest admissible eigenvalue of a PSD matrix.
pub const TOL_PSD: f64 = -1e-9;
/// Largest Hilbert-space dimension a channel may act on.
pub const DIM_CAP: usize = 64;

/// A CPTP map `ρ ↦ Σᵢ Kᵢ ρ Kᵢ†` from `d_in` to `d_out` dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelJson", into = "ChannelJson")]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMat>,
}

/// Result of checking a Kraus set for complete positivity and trace preservation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CptpReport {
    /// Spectral norm of `Σ Kᵢ†Kᵢ − I`.
    pub tp_residual: f64,
    /// Smallest eigenvalue of the Choi matrix.
    pub psd_min_eigenvalue: f64,
    pub passed: bool,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if dim > DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: DIM_CAP });
    }
    Ok(())
}

fn check_kraus_shapes(d_in: usize, d_out: usize, kraus: &[CMat]) -> Result<()> {
    check_dim(d_in)?;
    check_dim(d_out)?;
    if kraus.is_empty() {
        return Err(Error::InvalidParameter("empty Kraus set".into()));
    }
    for (k, op) in kraus.iter().enumerate() {
        if op.nrows() != d_out || op.ncols() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {k} is {}x{}, expected {d_out}x{d_in}",
                op.nrows(),
                op.ncols()
            )));
        }
        if !is_finite(op) {
            return Err(Error::NonFinite);
        }
    }
    Ok(())
}

fn tp_residual(d_in: usize, kraus: &[CMat]) -> f64 {
    let mut sum = CMat::zeros(d_in, d_in);
    for k in kraus {
        sum += k.adjoint() * k;
    }
    sum -= identity(d_in);
    spectral_norm_hermitian(&sum)
}

/// Checks a raw Kraus set; the set need not form a valid channel.
pub fn validate_kraus(d_in: usize, d_out: usize, kraus: &[CMat], tol: f64) -> Result<CptpReport> {
    check_kraus_shapes(d_in, d_out, kraus)?;
    let tp_residual = tp_residual(d_in, kraus);
    let psd_min_eigenvalue = min_eigenvalue(&choi_from_kraus(d_in, d_out, kraus));
    Ok(CptpReport {
        tp_residual,
        psd_min_eigenvalue,
        passed: tp_residual <= tol && psd_min_eigenvalue >= -tol,
    })
}

/// Checks an existing channel at tolerance `tol`.
pub fn validate_cptp(ch: &QuantumChannel, tol: f64) -> CptpReport {
    validate_kraus(ch.d_in, ch.d_out, &ch.kraus, tol).expect("channel shapes are valid")
}

fn choi_from_kraus(d_in: usize, d_out: usize, kraus: &[CMat]) -> CMat {
    let n = d_in * d_out;
    let mut gamma = CMat::zeros(n, n);
    for k in kraus {
        // vec index (i, a) ↦ K[a, i]
        let v = nalgebra::DVector::from_fn(n, |idx, _| k[(idx % d_out, idx / d_out)]);
        gamma += &v * v.adjoint();
    }
    gamma
}

impl QuantumChannel {
    /// Builds a channel, rejecting bad shapes, non-finite entries and
    /// Kraus sets that fail trace preservation at [`TOL_CPTP`].
    pub fn new(d_in: usize, d_out: usize, kraus: Vec<CMat>) -> Result<Self> {
        check_kraus_shapes(d_in, d_out, &kraus)?;
        let residual = tp_residual(d_in, &kraus);
        if residual > TOL_CPTP {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self { d_in, d_out, kraus })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(d, d, vec![identity(d)])
    }

    /// Unitary conjugation `ρ ↦ UρU†`.
    pub fn unitary(u: CMat) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        Self::isometry(u)
    }

    /// Isometric embedding `ρ ↦ VρV†` with `V†V = I`.
    pub fn isometry(v: CMat) -> Result<Self> {
        if v.nrows() < v.ncols() {
            return Err(Error::DimensionMismatch("isometry must be tall".into()));
        }
        let defect = unitarity_defect(&v);
        if defect > TOL_CPTP {
            return Err(Error::NotTracePreserving { residual: defect });
        }
        let (d_in, d_out) = (v.ncols(), v.nrows());
        Self::new(d_in, d_out, vec![v])
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn into_kraus(self) -> Vec<CMat> {
        self.kraus
    }

    pub fn is_square(&self) -> bool {
        self.d_in == self.d_out
    }

    /// Returns the common dimension of a square channel.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.d_in)
        } else {
            Err(Error::NonSquare { d_in: self.d_in, d_out: self.d_out })
        }
    }

    /// Applies the channel to an operator; only shapes are checked.
    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.nrows() != self.d_in || rho.ncols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "input is {}x{}, channel expects {}x{}",
                rho.nrows(),
                rho.ncols(),
                self.d_in,
                self.d_in
            )));
        }
        let mut out = CMat::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    /// Like [`apply`](Self::apply), but additionally requires `rho` to be a
    /// density matrix.
    pub fn apply_checked(&self, rho: &CMat) -> Result<CMat> {
        check_density(rho)?;
        self.apply(rho)
    }

    /// Heisenberg-picture adjoint `M ↦ Σᵢ Kᵢ† M Kᵢ`.
    pub fn apply_adjoint(&self, m: &CMat) -> Result<CMat> {
        if m.nrows() != self.d_out || m.ncols() != self.d_out {
            return Err(Error::DimensionMismatch("adjoint input has wrong shape".into()));
        }
        let mut out = CMat::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            out += k.adjoint() * m * k;
        }
        Ok(out)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &QuantumChannel) -> Result<Self> {
        let d_in = self.d_in * other.d_in;
        let d_out = self.d_out * other.d_out;
        check_dim(d_in)?;
        check_dim(d_out)?;
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        Ok(Self { d_in, d_out, kraus })
    }

    /// `n`-fold tensor power.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("tensor power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }

    /// Drops Kraus operators whose Frobenius norm is below `tol`, keeping at
    /// least one.
    pub fn pruned(mut self, tol: f64) -> Self {
        let largest = self
            .kraus
            .iter()
            .enumerate()
            .max_by(|a, b| frobenius(a.1).total_cmp(&frobenius(b.1)))
            .map(|(k, _)| k)
            .unwrap_or(0);
        let mut k = 0;
        self.kraus.retain(|op| {
            let keep = k == largest || frobenius(op) >= tol;
            k += 1;
            keep
        });
        self
    }

    /// Same channel with a minimal Kraus set, obtained through the Choi matrix.
    pub fn compressed(&self) -> Result<Self> {
        kraus_to_choi(self).to_channel()
    }

    pub fn choi(&self) -> ChoiMatrix {
        kraus_to_choi(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("channel serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| {
            // validation errors come back wrapped; keep the message either way
            Error::Parse(e.to_string())
        })
    }
}

/// Requires `rho` to be Hermitian, PSD and of unit trace within tolerance.
pub fn check_density(rho: &CMat) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::NotDensity("not square".into()));
    }
    if !is_finite(rho) {
        return Err(Error::NonFinite);
    }
    if hermiticity_defect(rho) > TOL_CPTP {
        return Err(Error::NotDensity("not Hermitian".into()));
    }
    let min = min_eigenvalue(rho);
    if min < TOL_PSD {
        return Err(Error::NotDensity(format!("min eigenvalue {min:.3e}")));
    }
    let tr = rho.trace();
    if (tr - c(1.0, 0.0)).norm() > TOL_CPTP {
        return Err(Error::NotDensity(format!("trace {}", tr.re)));
    }
    Ok(())
}

/// Sequential composition `outer ∘ inner`; Kraus set is all products `SⱼQᵢ`.
pub fn compose(outer: &QuantumChannel, inner: &QuantumChannel) -> Result<QuantumChannel> {
    if inner.d_out != outer.d_in {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {}->{} after {}->{}",
            outer.d_in, outer.d_out, inner.d_in, inner.d_out
        )));
    }
    let mut kraus = Vec::with_capacity(outer.kraus.len() * inner.kraus.len());
    for s in &outer.kraus {
        for q in &inner.kraus {
            kraus.push(s * q);
        }
    }
    Ok(QuantumChannel { d_in: inner.d_in, d_out: outer.d_out, kraus })
}

/// Unnormalized Choi matrix of a CPTP map.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    d_in: usize,
    d_out: usize,
    mat: CMat,
}

impl ChoiMatrix {
    /// Wraps a raw matrix, checking Hermiticity, positivity and the
    /// trace-preservation condition `Tr_out Γ = I`.
    pub fn from_matrix(d_in: usize, d_out: usize, mat: CMat) -> Result<Self> {
        let n = d_in * d_out;
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix must be {n}x{n}"
            )));
        }
        if !is_finite(&mat) {
            return Err(Error::NonFinite);
        }
        if hermiticity_defect(&mat) > TOL_CPTP {
            return Err(Error::InvalidParameter("Choi matrix is not Hermitian".into()));
        }
        let min = min_eigenvalue(&mat);
        if min < TOL_PSD {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let choi = Self { d_in, d_out, mat };
        let residual = max_abs_diff(&choi.partial_trace_output(), &identity(d_in));
        if residual > TOL_CPTP {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(choi)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// `Tr_out Γ`, a `d_in × d_in` matrix.
    pub fn partial_trace_output(&self) -> CMat {
        let (di, dout) = (self.d_in, self.d_out);
        CMat::from_fn(di, di, |i, j| {
            (0..dout).map(|a| self.mat[(i * dout + a, j * dout + a)]).sum::<C64>()
        })
    }

    /// Largest entrywise difference to another Choi matrix of the same shape.
    pub fn distance(&self, other: &ChoiMatrix) -> Result<f64> {
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return Err(Error::DimensionMismatch("Choi matrices differ in shape".into()));
        }
        Ok(max_abs_diff(&self.mat, &other.mat))
    }

    /// Kraus set from the eigendecomposition of `Γ`.
    pub fn to_channel(&self) -> Result<QuantumChannel> {
        choi_to_kraus(self)
    }
}

pub fn kraus_to_choi(ch: &QuantumChannel) -> ChoiMatrix {
    ChoiMatrix {
        d_in: ch.d_in,
        d_out: ch.d_out,
        mat: choi_from_kraus(ch.d_in, ch.d_out, &ch.kraus),
    }
}

/// Eigenvalues below this fraction of the largest are treated as zero.
const CHOI_RANK_CUTOFF: f64 = 1e-14;

pub fn choi_to_kraus(choi: &ChoiMatrix) -> Result<QuantumChannel> {
    let (vals, vecs) = eigh(&choi.mat);
    let min = vals.first().copied().unwrap_or(0.0);
    if min < TOL_PSD {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let max = vals.last().copied().unwrap_or(0.0);
    let (di, dout) = (choi.d_in, choi.d_out);
    let mut kraus = Vec::new();
    for (k, &lambda) in vals.iter().enumerate().rev() {
        if lambda <= CHOI_RANK_CUTOFF * max.max(1.0) {
            continue;
        }
        let s = lambda.sqrt();
        let col = vecs.column(k);
        kraus.push(CMat::from_fn(dout, di, |a, i| col[i * dout + a] * s));
    }
    if kraus.is_empty() {
        kraus.push(CMat::zeros(dout, di));
    }
    QuantumChannel::new(di, dout, kraus)
}

/// Depolarizing channel `ρ ↦ (1−p)ρ + p·Tr(ρ) I/d`, Kraus form over the Weyl
/// operators.
pub fn depolarizing(d: usize, p: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("depolarizing p = {p} outside [0, 1]")));
    }
    depolarizing_extended(d, p)
}

/// Depolarizing family extended to the full CPTP range `p ∈ [0, d²/(d²−1)]`.
///
/// Twirls of channels with `F_e < 1/d²` land beyond `p = 1`.
pub fn depolarizing_extended(d: usize, p: f64) -> Result<QuantumChannel> {
    if d < 2 {
        return Err(Error::InvalidParameter("depolarizing needs d >= 2".into()));
    }
    let d2 = (d * d) as f64;
    let p_max = d2 / (d2 - 1.0);
    if !(0.0..=p_max + 1e-12).contains(&p) {
        return Err(Error::InvalidParameter(format!("depolarizing p = {p} outside [0, {p_max}]")));
    }
    let w0 = (1.0 - p + p / d2).max(0.0).sqrt();
    let w = (p / d2).sqrt();
    let kraus = weyl_set(d)
        .into_iter()
        .enumerate()
        .map(|(k, op)| op * c(if k == 0 { w0 } else { w }, 0.0))
        .collect();
    Ok(QuantumChannel::new(d, d, kraus)?.pruned(0.0))
}

/// Qubit amplitude damping with decay probability `theta`.
pub fn amplitude_damping(theta: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("damping theta = {theta} outside [0, 1]")));
    }
    let n0 = crate::linalg::real_diag(&[1.0, (1.0 - theta).sqrt()]);
    let mut n1 = CMat::zeros(2, 2);
    n1[(0, 1)] = c(theta.sqrt(), 0.0);
    QuantumChannel::new(2, 2, vec![n0, n1])
}

/// Random channel from a Gaussian Stinespring isometry `d_in → d_out·kraus_count`.
/// Deterministic for a given seed.
pub fn random_channel(
    d_in: usize,
    d_out: usize,
    kraus_count: usize,
    seed: u64,
) -> Result<QuantumChannel> {
    check_dim(d_in)?;
    check_dim(d_out)?;
    if kraus_count == 0 || kraus_count > d_in * d_out {
        return Err(Error::InvalidParameter(format!(
            "kraus_count = {kraus_count} outside [1, {}]",
            d_in * d_out
        )));
    }
    if d_out * kraus_count < d_in {
        return Err(Error::InvalidParameter(
            "d_out * kraus_count must be at least d_in".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(d_out * kraus_count, d_in, &mut rng);
    let v = g.qr().q();
    let kraus = (0..kraus_count)
        .map(|k| v.rows(k * d_out, d_out).into_owned())
        .collect();
    QuantumChannel::new(d_in, d_out, kraus)
}

/// Wire encoding of a matrix: rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|col| [m[(r, col)].re, m[(r, col)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("matrix rows must be nonempty and equal length".into()));
    }
    Ok(CMat::from_fn(nrows, ncols, |r, col| {
        let [re, im] = rows[r][col];
        c(re, im)
    }))
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    d_in: usize,
    d_out: usize,
    kraus: Vec<MatrixJson>,
}

impl From<QuantumChannel> for ChannelJson {
    fn from(ch: QuantumChannel) -> Self {
        ChannelJson {
            d_in: ch.d_in,
            d_out: ch.d_out,
            kraus: ch.kraus.iter().map(matrix_to_json).collect(),
        }
    }
}

impl TryFrom<ChannelJson> for QuantumChannel {
    type Error = Error;

    fn try_from(raw: ChannelJson) -> Result<Self> {
        let kraus = raw.kraus.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(raw.d_in, raw.d_out, kraus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{projector, basis_vector, random_density, inner};

    fn ket_density(d: usize, k: usize) -> CMat {
        projector(&basis_vector(d, k))
    }

    #[test]
    fn identity_channel_preserves_states() {
        let id = QuantumChannel::identity(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(3, &mut rng);
        assert!(max_abs_diff(&id.apply(&rho).unwrap(), &rho) < 1e-15);
    }

    #[test]
    fn full_depolarization_gives_maximally_mixed() {
        let ch = depolarizing(2, 1.0).unwrap();
        let out = ch.apply(&ket_density(2, 0)).unwrap();
        assert!(max_abs_diff(&out, &(identity(2) * c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn amplitude_damping_excited_state() {
        let ch = amplitude_damping(0.1).unwrap();
        let out = ch.apply(&ket_density(2, 1)).unwrap();
        let expected = crate::linalg::real_diag(&[0.1, 0.9]);
        assert!(max_abs_diff(&out, &expected) < 1e-15);
    }

    #[test]
    fn amplitude_damping_endpoints() {
        let zero = amplitude_damping(0.0).unwrap();
        assert_eq!(zero.kraus().len(), 2);
        assert!(max_abs_diff(&zero.kraus()[0], &identity(2)) < 1e-15);
        assert!(frobenius(&zero.kraus()[1]) == 0.0);

        let full = amplitude_damping(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = full.apply(&random_density(2, &mut rng)).unwrap();
        assert!(max_abs_diff(&out, &ket_density(2, 0)) < 1e-12);
        assert!(amplitude_damping(1.2).is_err());
    }

    #[test]
    fn apply_rejects_wrong_shape_and_non_density() {
        let ch = amplitude_damping(0.3).unwrap();
        assert!(matches!(ch.apply(&identity(3)), Err(Error::DimensionMismatch(_))));
        assert!(ch.apply(&identity(2)).is_ok());
        assert!(matches!(ch.apply_checked(&identity(2)), Err(Error::NotDensity(_))));
    }

    #[test]
    fn compose_with_identity_is_noop() {
        let q = random_channel(2, 2, 3, 9).unwrap();
        let id = QuantumChannel::identity(2).unwrap();
        let composed = compose(&id, &q).unwrap();
        assert!(composed.choi().distance(&q.choi()).unwrap() < 1e-12);
    }

    #[test]
    fn compose_amplitude_damping_grid() {
        for &t1 in &[0.0, 0.1, 0.35, 0.8] {
            for &t2 in &[0.05, 0.2, 0.6, 1.0] {
                let lhs = compose(&amplitude_damping(t1).unwrap(), &amplitude_damping(t2).unwrap())
                    .unwrap();
                let rhs = amplitude_damping(1.0 - (1.0 - t1) * (1.0 - t2)).unwrap();
                assert!(lhs.choi().distance(&rhs.choi()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn compose_depolarizing_grid() {
        for &p1 in &[0.0, 0.2, 0.5, 1.0] {
            for &p2 in &[0.1, 0.3, 0.9] {
                let lhs = compose(&depolarizing(2, p1).unwrap(), &depolarizing(2, p2).unwrap())
                    .unwrap();
                let rhs = depolarizing(2, p1 + p2 - p1 * p2).unwrap();
                assert!(lhs.choi().distance(&rhs.choi()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn compose_dimension_mismatch() {
        let a = QuantumChannel::identity(2).unwrap();
        let b = QuantumChannel::identity(3).unwrap();
        assert!(matches!(compose(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn tensor_powers() {
        let id16 = QuantumChannel::identity(2).unwrap().tensor_power(4).unwrap();
        assert_eq!(id16.d_in(), 16);
        assert!(id16.choi().distance(&QuantumChannel::identity(16).unwrap().choi()).unwrap() < 1e-15);

        let ad = amplitude_damping(0.3).unwrap();
        assert_eq!(ad.tensor_power(1).unwrap(), ad);
        assert!(ad.tensor_power(0).is_err());

        let ad4 = amplitude_damping(0.1).unwrap().tensor_power(4).unwrap();
        assert_eq!(ad4.kraus().len(), 16);
        let out = ad4.apply(&ket_density(16, 15)).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-14);
        assert!((out[(0, 0)].re - 1e-4).abs() < 1e-15);

        let big = QuantumChannel::identity(16).unwrap();
        assert!(matches!(big.tensor(&big), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn choi_of_identity_and_depolarizing() {
        let gamma = QuantumChannel::identity(2).unwrap().choi();
        let vals = crate::linalg::eigvalsh(gamma.matrix());
        assert!((vals[3] - 2.0).abs() < 1e-14);
        assert!(vals[..3].iter().all(|v| v.abs() < 1e-14));
        assert!((gamma.matrix().trace().re - 2.0).abs() < 1e-14);

        let dep = depolarizing(2, 1.0).unwrap().choi();
        assert!(max_abs_diff(dep.matrix(), &(identity(4) * c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn choi_round_trip() {
        let ad = amplitude_damping(0.1).unwrap();
        let back = ad.choi().to_channel().unwrap();
        assert!(back.choi().distance(&ad.choi()).unwrap() < 1e-12);
        assert!(back.kraus().len() <= 4);
    }

    #[test]
    fn choi_rejects_non_psd() {
        let mut m = depolarizing(2, 1.0).unwrap().choi().matrix().clone();
        m[(0, 0)] = c(-0.5, 0.0);
        m[(3, 3)] = c(1.5, 0.0);
        assert!(matches!(ChoiMatrix::from_matrix(2, 2, m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn validate_reports() {
        let id = QuantumChannel::identity(2).unwrap();
        let rep = validate_cptp(&id, 1e-10);
        assert_eq!(rep.tp_residual, 0.0);
        assert!(rep.passed);

        let half = identity(2) * c(0.5, 0.0);
        let rep = validate_kraus(2, 2, std::slice::from_ref(&half), 1e-10).unwrap();
        assert!((rep.tp_residual - 0.75).abs() < 1e-15);
        assert!(!rep.passed);
        assert!(matches!(
            QuantumChannel::new(2, 2, vec![half]),
            Err(Error::NotTracePreserving { .. })
        ));

        assert!(validate_cptp(&amplitude_damping(0.3).unwrap(), 1e-10).passed);
    }

    #[test]
    fn depolarizing_parameter_checks() {
        assert!(depolarizing(2, -0.1).is_err());
        assert!(depolarizing(2, 1.1).is_err());
        assert!(depolarizing(1, 0.5).is_err());
        assert!(depolarizing_extended(2, 4.0 / 3.0).is_ok());
        let zero = depolarizing(2, 0.0).unwrap();
        assert!(zero.choi().distance(&QuantumChannel::identity(2).unwrap().choi()).unwrap() < 1e-15);
        for d in 2..=4 {
            assert!(validate_cptp(&depolarizing(d, 0.37).unwrap(), 1e-12).passed);
        }
    }

    #[test]
    fn random_channels_are_deterministic_and_cptp() {
        let a = random_channel(2, 2, 4, 42).unwrap();
        let b = random_channel(2, 2, 4, 42).unwrap();
        assert_eq!(a, b);
        for seed in 0..20 {
            let ch = random_channel(3, 2, 3, seed).unwrap();
            assert!(validate_cptp(&ch, 1e-10).tp_residual < 1e-10);
        }
        assert!(random_channel(2, 2, 5, 0).is_err());
        assert!(random_channel(2, 2, 0, 0).is_err());
    }

    #[test]
    fn adjoint_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..10 {
            let q = random_channel(3, 2, 4, seed).unwrap();
            let n = gaussian_matrix(3, 3, &mut rng);
            let m = gaussian_matrix(2, 2, &mut rng);
            let lhs = inner(&q.apply(&n).unwrap(), &m);
            let rhs = inner(&n, &q.apply_adjoint(&m).unwrap());
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn json_round_trip_is_bit_stable() {
        let ch = random_channel(2, 3, 2, 5).unwrap();
        let text = ch.to_json_string();
        let back = QuantumChannel::from_json_str(&text).unwrap();
        assert_eq!(back, ch);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn json_rejects_invalid() {
        assert!(matches!(QuantumChannel::from_json_str("{"), Err(Error::Parse(_))));
        let not_tp = r#"{"d_in":1,"d_out":1,"kraus":[[[[0.5,0.0]]]]}"#;
        assert!(QuantumChannel::from_json_str(not_tp).is_err());
        let ok = r#"{"d_in":1,"d_out":1,"kraus":[[[[1.0,0.0]]]]}"#;
        assert!(QuantumChannel::from_json_str(ok).is_ok());
    }
}
