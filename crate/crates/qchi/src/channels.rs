//! Quantum channels in Kraus form, their Stinespring dilations and
//! complementary channels, plus the structured constructors used throughout:
//! truncation channels, classical-quantum channels, and degradability
//! certificates.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numerics::matrix::{hermitian_eigen, kron, CMatrix, CVector, C64};
use crate::numerics::states::{BipartiteState, DensityMatrix, PureState};

/// A completely positive trace-preserving map given by Kraus operators
/// Φ(ρ) = Σ_i K_i ρ K_i†, each K_i of shape d_out × d_in.
///
/// The family is stored exactly as given (it is *not* silently reduced to a
/// minimal family), so hand-built environments keep their labels; use
/// [`KrausChannel::minimal_kraus`] to get a family of size equal to the Choi
/// rank.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    /// Validate Σ K†K = I (within `tol.tp`) and wrap.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        Self::new_with(kraus, &Tolerances::default())
    }

    /// Validate with explicit tolerances.
    pub fn new_with(kraus: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Empty {
                what: "Kraus family",
            });
        }
        let d_out = kraus[0].nrows();
        let d_in = kraus[0].ncols();
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::DimMismatch {
                    context: "Kraus operator shapes",
                    expected: d_out * d_in,
                    got: k.nrows() * k.ncols(),
                });
            }
        }
        let mut sum = CMatrix::zeros(d_in, d_in);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let dev = (&sum - CMatrix::identity(d_in, d_in)).norm();
        if dev > tol.tp {
            return Err(Error::NotTracePreserving {
                deviation: dev,
                tol: tol.tp,
            });
        }
        Ok(Self { d_in, d_out, kraus })
    }

    /// Input dimension d_A.
    pub fn dim_in(&self) -> usize {
        self.d_in
    }

    /// Output dimension d_B.
    pub fn dim_out(&self) -> usize {
        self.d_out
    }

    /// Number of Kraus operators in the stored family (= environment
    /// dimension of the induced dilation, not necessarily minimal).
    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    /// Borrow the Kraus operators.
    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Apply the channel to a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.d_in {
            return Err(Error::DimMismatch {
                context: "channel input",
                expected: self.d_in,
                got: rho.dim(),
            });
        }
        Ok(DensityMatrix::trusted(self.apply_op(rho.matrix())))
    }

    /// Apply the channel to an arbitrary (not necessarily Hermitian) operator.
    /// Needed for matrix-unit tests such as degradability verification and
    /// off-diagonal image probes.
    pub fn apply_op(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }

    /// Adjoint (Heisenberg-picture) map Φ*(Y) = Σ K† Y K.
    pub fn adjoint_apply(&self, y: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            out += k.adjoint() * y * k;
        }
        out
    }

    /// Choi matrix C[(α,β),(α',β')] = Φ(|α⟩⟨α'|)[β,β'] with composite row
    /// index α·d_out + β. Equals Σ_i vec(K_i) vec(K_i)† with
    /// vec(K)[α·d_out + β] = K[β,α].
    pub fn choi_matrix(&self) -> CMatrix {
        let n = self.d_in * self.d_out;
        let mut c = CMatrix::zeros(n, n);
        for k in &self.kraus {
            let mut v = CVector::zeros(n);
            for alpha in 0..self.d_in {
                for beta in 0..self.d_out {
                    v[alpha * self.d_out + beta] = k[(beta, alpha)];
                }
            }
            c += &v * v.adjoint();
        }
        c
    }

    /// Choi rank: the number of Choi eigenvalues above `tol.kraus_rank`.
    /// This is the minimal environment dimension of any dilation.
    pub fn choi_rank(&self, tol: &Tolerances) -> usize {
        let (vals, _) = hermitian_eigen(&self.choi_matrix()).expect("Choi matrix is square");
        vals.iter().filter(|&&v| v > tol.kraus_rank).count()
    }

    /// A minimal Kraus family (size = Choi rank). If the stored family is
    /// already minimal (its Gram matrix Tr K_i†K_j has full rank), it is
    /// returned unchanged so hand-built representations survive round trips;
    /// otherwise operators are rebuilt from the dominant Choi eigenvectors.
    pub fn minimal_kraus(&self, tol: &Tolerances) -> Result<Self> {
        let m = self.kraus.len();
        let mut gram = CMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                gram[(i, j)] = (self.kraus[i].adjoint() * &self.kraus[j]).trace();
            }
        }
        let (gvals, _) = hermitian_eigen(&gram)?;
        let gram_rank = gvals.iter().filter(|&&v| v > tol.kraus_rank).count();
        if gram_rank == m {
            return Ok(self.clone());
        }
        let (cvals, cvecs) = hermitian_eigen(&self.choi_matrix())?;
        let mut kraus = Vec::new();
        for (a, &val) in cvals.iter().enumerate() {
            if val <= tol.kraus_rank {
                continue;
            }
            let col = cvecs.column(a);
            let mut k = CMatrix::zeros(self.d_out, self.d_in);
            let s = C64::new(val.sqrt(), 0.0);
            for alpha in 0..self.d_in {
                for beta in 0..self.d_out {
                    k[(beta, alpha)] = s * col[alpha * self.d_out + beta];
                }
            }
            kraus.push(k);
        }
        Self::new_with(kraus, tol)
    }

    /// Minimal Stinespring dilation: the isometry of [`stinespring_isometry`]
    /// built from the rank-reduced Kraus family, so the environment dimension
    /// equals the Choi rank.
    ///
    /// [`stinespring_isometry`]: KrausChannel::stinespring_isometry
    pub fn stinespring(&self, tol: &Tolerances) -> Result<StinespringIsometry> {
        let minimal = self.minimal_kraus(tol)?;
        Ok(StinespringIsometry {
            d_a: minimal.d_in,
            d_b: minimal.d_out,
            d_e: minimal.kraus.len(),
            v: minimal.stinespring_isometry(),
        })
    }

    /// Stinespring isometry V: A → B ⊗ E with V|ψ⟩ = Σ_i (K_i|ψ⟩) ⊗ |i⟩_E,
    /// i.e. V[β·d_E + i, α] = K_i[β, α]. The environment dimension d_E equals
    /// the stored family size.
    pub fn stinespring_isometry(&self) -> CMatrix {
        let d_e = self.kraus.len();
        let mut v = CMatrix::zeros(self.d_out * d_e, self.d_in);
        for (i, k) in self.kraus.iter().enumerate() {
            for alpha in 0..self.d_in {
                for beta in 0..self.d_out {
                    v[(beta * d_e + i, alpha)] = k[(beta, alpha)];
                }
            }
        }
        v
    }

    /// The dilated state VρV* on B ⊗ E for an input ρ.
    pub fn dilated_state(&self, rho: &DensityMatrix) -> Result<BipartiteState> {
        if rho.dim() != self.d_in {
            return Err(Error::DimMismatch {
                context: "channel input",
                expected: self.d_in,
                got: rho.dim(),
            });
        }
        let v = self.stinespring_isometry();
        let joint = &v * rho.matrix() * v.adjoint();
        BipartiteState::new(self.d_out, self.kraus.len(), DensityMatrix::trusted(joint))
    }

    /// Complementary channel Φ̂: A → E defined by Φ̂(ρ) = Tr_B VρV*.
    /// Its Kraus operators are (Ê_j)[i,α] = (K_i)[j,α] for j = 0..d_B−1.
    pub fn complementary(&self) -> KrausChannel {
        let d_e = self.kraus.len();
        let mut comp = Vec::with_capacity(self.d_out);
        for j in 0..self.d_out {
            let mut e = CMatrix::zeros(d_e, self.d_in);
            for (i, k) in self.kraus.iter().enumerate() {
                for alpha in 0..self.d_in {
                    e[(i, alpha)] = k[(j, alpha)];
                }
            }
            comp.push(e);
        }
        KrausChannel {
            d_in: self.d_in,
            d_out: d_e,
            kraus: comp,
        }
    }

    // --- Named constructors -------------------------------------------------

    /// Identity channel on dimension `d`.
    pub fn identity(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        Self::new(vec![CMatrix::identity(d, d)])
    }

    /// Completely dephasing channel in the computational basis:
    /// Π(ρ) = Σ_k ⟨k|ρ|k⟩ |k⟩⟨k|, Kraus {|k⟩⟨k|}.
    pub fn dephasing(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        let mut kraus = Vec::with_capacity(d);
        for k in 0..d {
            let mut m = CMatrix::zeros(d, d);
            m[(k, k)] = C64::new(1.0, 0.0);
            kraus.push(m);
        }
        Self::new(kraus)
    }

    /// Depolarizing channel ρ ↦ (1−p)ρ + p·I/d, given here for qubits and
    /// general d via the Heisenberg–Weyl family: Kraus
    /// {√(1−p·(d²−1)/d²)·I} ∪ {√(p/d²)·XᵃZᵇ : (a,b) ≠ (0,0)}.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadInput {
                detail: format!("depolarizing probability must be in [0,1], got {p}"),
            });
        }
        let df = d as f64;
        // Shift X: |k⟩ ↦ |k+1 mod d⟩; clock Z: |k⟩ ↦ ω^k |k⟩.
        let mut x = CMatrix::zeros(d, d);
        for k in 0..d {
            x[((k + 1) % d, k)] = C64::new(1.0, 0.0);
        }
        let mut z = CMatrix::zeros(d, d);
        for k in 0..d {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / df;
            z[(k, k)] = C64::new(theta.cos(), theta.sin());
        }
        let mut kraus = Vec::with_capacity(d * d);
        let id_weight = (1.0 - p * (df * df - 1.0) / (df * df)).sqrt();
        kraus.push(CMatrix::identity(d, d) * C64::new(id_weight, 0.0));
        let w = (p / (df * df)).sqrt();
        if w > 0.0 {
            let mut xa = CMatrix::identity(d, d);
            for a in 0..d {
                let mut xazb = xa.clone();
                for b in 0..d {
                    if a != 0 || b != 0 {
                        kraus.push(&xazb * C64::new(w, 0.0));
                    }
                    xazb *= &z;
                }
                xa *= &x;
            }
        }
        Self::new(kraus)
    }

    /// Truncation channel Λ(ρ) = PρP + σ·Tr((I − P)ρ), where `projector` is an
    /// orthogonal projector P and `anchor` σ is a state supported inside P.
    ///
    /// Kraus family: P itself, plus √s_j |χ_j⟩⟨q_b| for every eigenpair
    /// (s_j, χ_j) of σ and every basis vector q_b of ran(I − P).
    pub fn truncation(projector: &CMatrix, anchor: &DensityMatrix) -> Result<Self> {
        let d = projector.nrows();
        if projector.ncols() != d {
            return Err(Error::NotSquare {
                rows: projector.nrows(),
                cols: projector.ncols(),
            });
        }
        if anchor.dim() != d {
            return Err(Error::DimMismatch {
                context: "truncation anchor vs projector",
                expected: d,
                got: anchor.dim(),
            });
        }
        let idem = (projector * projector - projector).norm();
        let herm = (projector - projector.adjoint()).norm();
        if idem > 1e-8 || herm > 1e-8 {
            return Err(Error::NotAProjector {
                deviation: idem.max(herm),
            });
        }
        // Anchor must satisfy PσP = σ.
        let leak = (projector * anchor.matrix() * projector.adjoint() - anchor.matrix()).norm();
        if leak > 1e-8 {
            return Err(Error::AnchorOutsideSubspace { leak });
        }
        let complement = CMatrix::identity(d, d) - projector;
        let (cvals, cvecs) = hermitian_eigen(&complement)?;
        let (avals, avecs) = anchor.eigen();
        let mut kraus = vec![projector.clone()];
        for (b, &cv) in cvals.iter().enumerate() {
            if cv < 0.5 {
                continue; // eigenvalues of a projector are 0/1
            }
            let q = cvecs.column(b);
            for (j, &s) in avals.iter().enumerate() {
                if s <= 1e-14 {
                    continue;
                }
                let chi = avecs.column(j);
                let k = chi * q.adjoint() * C64::new(s.sqrt(), 0.0);
                kraus.push(k);
            }
        }
        Self::new(kraus)
    }

    /// Discrete classical-quantum channel Φ(ρ) = Σ_k ⟨k|ρ|k⟩ σ_k in the
    /// computational basis, with Kraus family {√s_{kj} |χ_{kj}⟩⟨k|} built from
    /// the eigendecompositions σ_k = Σ_j s_{kj} |χ_{kj}⟩⟨χ_{kj}|.
    pub fn cq_channel(output_states: &[DensityMatrix]) -> Result<Self> {
        if output_states.is_empty() {
            return Err(Error::Empty {
                what: "c-q output family",
            });
        }
        let d_in = output_states.len();
        let d_out = output_states[0].dim();
        for s in output_states {
            if s.dim() != d_out {
                return Err(Error::DimMismatch {
                    context: "c-q output state dimensions",
                    expected: d_out,
                    got: s.dim(),
                });
            }
        }
        let mut kraus = Vec::new();
        for (k, sigma) in output_states.iter().enumerate() {
            let (svals, svecs) = sigma.eigen();
            for (j, &s) in svals.iter().enumerate() {
                if s <= 1e-14 {
                    continue;
                }
                let chi = svecs.column(j);
                let mut op = CMatrix::zeros(d_out, d_in);
                let w = C64::new(s.sqrt(), 0.0);
                for beta in 0..d_out {
                    op[(beta, k)] = w * chi[beta];
                }
                kraus.push(op);
            }
        }
        Self::new(kraus)
    }

    /// Channel conjugated by a unitary on the input: ρ ↦ Φ(UρU†).
    pub fn precompose_unitary(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.d_in || u.ncols() != self.d_in {
            return Err(Error::DimMismatch {
                context: "unitary vs channel input",
                expected: self.d_in,
                got: u.nrows(),
            });
        }
        let kraus = self.kraus.iter().map(|k| k * u).collect();
        Self::new(kraus)
    }

    /// Composition Θ ∘ Φ (apply `self` first, then `theta`).
    pub fn compose(theta: &KrausChannel, phi: &KrausChannel) -> Result<Self> {
        if theta.d_in != phi.d_out {
            return Err(Error::DimMismatch {
                context: "composition inner dimension",
                expected: phi.d_out,
                got: theta.d_in,
            });
        }
        let mut kraus = Vec::with_capacity(theta.kraus.len() * phi.kraus.len());
        for t in &theta.kraus {
            for k in &phi.kraus {
                kraus.push(t * k);
            }
        }
        Self::new(kraus)
    }

    /// Tensor with the identity on a reference system R of dimension `d_r`
    /// (acts as Φ ⊗ Id_R; composite index a·d_r + r on the input and
    /// b·d_r + r on the output).
    pub fn tensor_with_identity(&self, d_r: usize) -> Result<Self> {
        if d_r == 0 {
            return Err(Error::Empty { what: "dimension" });
        }
        let id = CMatrix::identity(d_r, d_r);
        let kraus = self.kraus.iter().map(|k| kron(k, &id)).collect();
        Self::new(kraus)
    }

    /// Tensor product `self ⊗ other` acting on the composite space with the
    /// left factor major in the index (row b·d_other + e), matching
    /// [`BipartiteState`]'s convention.
    pub fn tensor(&self, other: &KrausChannel) -> Result<Self> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for ka in &self.kraus {
            for kb in &other.kraus {
                kraus.push(kron(ka, kb));
            }
        }
        Self::new(kraus)
    }
}

/// A Stinespring dilation V: A → B ⊗ E with V†V = I and d_E equal to the
/// Choi rank of the channel it dilates.
#[derive(Debug, Clone)]
pub struct StinespringIsometry {
    d_a: usize,
    d_b: usize,
    d_e: usize,
    v: CMatrix,
}

impl StinespringIsometry {
    /// Input dimension d_A.
    pub fn dim_in(&self) -> usize {
        self.d_a
    }

    /// Output dimension d_B.
    pub fn dim_out(&self) -> usize {
        self.d_b
    }

    /// Environment dimension d_E (= Choi rank).
    pub fn dim_env(&self) -> usize {
        self.d_e
    }

    /// The isometry matrix, shape (d_B·d_E) × d_A, composite row β·d_E + i.
    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }

    /// Isometry defect ‖V†V − I‖_F.
    pub fn isometry_defect(&self) -> f64 {
        (self.v.adjoint() * &self.v - CMatrix::identity(self.d_a, self.d_a)).norm()
    }
}

/// Verdict of a degradability check Φ̂ = Θ ∘ Φ.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DegradabilityCertificate {
    /// Largest Frobenius deviation ‖Θ(Φ(E_kl)) − Φ̂(E_kl)‖ over all matrix
    /// units E_kl.
    pub max_deviation: f64,
    /// Whether the deviation is below the tolerance.
    pub holds: bool,
}

/// Verify that `theta` degrades `phi`: Θ(Φ(X)) = Φ̂(X) for every input X.
/// Tested on the full operator basis of matrix units E_kl, which spans all
/// inputs by linearity.
pub fn verify_degrading(
    phi: &KrausChannel,
    theta: &KrausChannel,
    tol: f64,
) -> Result<DegradabilityCertificate> {
    let comp = phi.complementary();
    if theta.d_in != phi.d_out {
        return Err(Error::DimMismatch {
            context: "degrading map input vs channel output",
            expected: phi.d_out,
            got: theta.d_in,
        });
    }
    if theta.d_out != comp.d_out {
        return Err(Error::DimMismatch {
            context: "degrading map output vs environment",
            expected: comp.d_out,
            got: theta.d_out,
        });
    }
    let d = phi.d_in;
    let mut max_dev: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(k, l)] = C64::new(1.0, 0.0);
            let via_theta = theta.apply_op(&phi.apply_op(&unit));
            let direct = comp.apply_op(&unit);
            max_dev = max_dev.max((via_theta - direct).norm());
        }
    }
    Ok(DegradabilityCertificate {
        max_deviation: max_dev,
        holds: max_dev <= tol,
    })
}

/// Construct the degrading map Θ: B → E for a classical-quantum channel whose
/// output states have pairwise orthogonal supports. Θ measures which support
/// block the output lies in and re-prepares the matching environment state.
///
/// Errors with [`Error::OverlappingSupports`] when two output supports are not
/// orthogonal — exactly the case in which a c-q channel fails to be
/// degradable with this construction.
pub fn degrading_for_orthogonal_cq(output_states: &[DensityMatrix]) -> Result<KrausChannel> {
    if output_states.is_empty() {
        return Err(Error::Empty {
            what: "c-q output family",
        });
    }
    let d_b = output_states[0].dim();
    // Pairwise orthogonality of supports: ‖σ_i σ_j‖ must vanish.
    for i in 0..output_states.len() {
        for j in (i + 1)..output_states.len() {
            let overlap = (output_states[i].matrix() * output_states[j].matrix()).norm();
            if overlap > 1e-10 {
                return Err(Error::OverlappingSupports { i, j, overlap });
            }
        }
    }
    // Environment basis |kj⟩_E enumerates (input letter k, eigenvector j of σ_k),
    // matching the Kraus order produced by `cq_channel`.
    let mut env_labels: Vec<(usize, usize, f64, CVector)> = Vec::new();
    let mut support_bases: Vec<(usize, CVector)> = Vec::new(); // (letter k, basis vector of supp σ_k)
    for (k, sigma) in output_states.iter().enumerate() {
        let (svals, svecs) = sigma.eigen();
        for (j, &s) in svals.iter().enumerate() {
            if s <= 1e-14 {
                continue;
            }
            env_labels.push((k, j, s, svecs.column(j).clone_owned()));
            support_bases.push((k, svecs.column(j).clone_owned()));
        }
    }
    let d_e = env_labels.len();
    // Kraus operators of Θ: for each environment label (k, j) and each basis
    // vector q of supp σ_k, the operator √s_{kj} |kj⟩_E ⟨q|_B. Rows outside
    // any support are sent to a fixed environment state by the residual
    // projector handled below.
    let mut kraus = Vec::new();
    for (e_idx, (k, _j, s, _chi)) in env_labels.iter().enumerate() {
        for (kb, q) in &support_bases {
            if kb != k {
                continue;
            }
            let mut op = CMatrix::zeros(d_e, d_b);
            let w = C64::new(s.sqrt(), 0.0);
            for beta in 0..d_b {
                op[(e_idx, beta)] = w * q[beta].conj();
            }
            kraus.push(op);
        }
    }
    // Residual: part of B outside every support. Send it to the first
    // environment basis state so the map is trace preserving on all of B.
    let mut total_support = CMatrix::zeros(d_b, d_b);
    for sigma in output_states {
        total_support += sigma.support_projector(1e-12);
    }
    let residual = CMatrix::identity(d_b, d_b) - &total_support;
    let res_norm = residual.norm();
    if res_norm > 1e-10 {
        let (rvals, rvecs) = hermitian_eigen(&residual)?;
        for (b, &rv) in rvals.iter().enumerate() {
            if rv < 0.5 {
                continue;
            }
            let q = rvecs.column(b);
            let mut op = CMatrix::zeros(d_e, d_b);
            for beta in 0..d_b {
                op[(0, beta)] = q[beta].conj();
            }
            kraus.push(op);
        }
    }
    KrausChannel::new(kraus)
}

/// Test whether `phi` acts as a discrete classical-quantum channel in the
/// computational basis: Φ(ρ) depends on ρ only through its diagonal,
/// equivalently Φ(|k⟩⟨l|) = 0 for every off-diagonal matrix unit.
/// Returns the largest off-diagonal image norm alongside the verdict.
///
/// Only the canonical basis (or an explicitly supplied one via
/// [`is_discrete_cq_in_basis`]) is tested; no search over all bases is
/// attempted.
pub fn is_discrete_cq(phi: &KrausChannel, tol: f64) -> (bool, f64) {
    let d = phi.dim_in();
    let basis = CMatrix::identity(d, d);
    is_discrete_cq_in_basis(phi, &basis, tol).expect("identity basis is orthonormal")
}

/// [`is_discrete_cq`] against an arbitrary orthonormal basis given as the
/// columns of `basis`: tests Φ(|b_k⟩⟨b_l|) = 0 for k ≠ l.
pub fn is_discrete_cq_in_basis(
    phi: &KrausChannel,
    basis: &CMatrix,
    tol: f64,
) -> Result<(bool, f64)> {
    let d = phi.dim_in();
    if basis.nrows() != d || basis.ncols() != d {
        return Err(Error::DimMismatch {
            context: "basis vs channel input",
            expected: d,
            got: basis.nrows(),
        });
    }
    let defect = (basis.adjoint() * basis - CMatrix::identity(d, d)).norm();
    if defect > 1e-8 {
        return Err(Error::BadInput {
            detail: format!("basis columns are not orthonormal (defect {defect:.3e})"),
        });
    }
    let mut max_norm: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            if k == l {
                continue;
            }
            let unit = basis.column(k) * basis.column(l).adjoint();
            max_norm = max_norm.max(phi.apply_op(&unit).norm());
        }
    }
    Ok((max_norm <= tol, max_norm))
}

/// Output states σ_k = Φ(|k⟩⟨k|) of a channel read as c-q data.
pub fn cq_output_states(phi: &KrausChannel) -> Result<Vec<DensityMatrix>> {
    let mut out = Vec::with_capacity(phi.dim_in());
    for k in 0..phi.dim_in() {
        let basis = PureState::basis_state(phi.dim_in(), k)?;
        out.push(phi.apply(&basis.projector())?);
    }
    Ok(out)
}
