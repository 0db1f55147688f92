//! Finite-dimensional state and channel algebra.
//!
//! States are density matrices, channels are Kraus-operator lists, and the
//! thermodynamics enters through the free energy `F(ρ) = tr(ρH) − kB·T·S(ρ)`
//! with the Gibbs state as the unique free state. Thermal channels — the free
//! operations — arise from energy-conserving dilations over a Gibbs ancilla.
//!
//! All logarithms are natural; work carries the energy units of the supplied
//! Hamiltonian.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::consts::{PhysicalConstants, Tolerances};
use crate::error::{QworkError, Result};
use crate::linalg::{
    dagger, entropy_from_eigenvalues, herm_deviation, herm_eigen, hermitize, identity_c, max_abs,
    trace_prod_re, CMat, RVec,
};

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace against `tol`.
    pub fn new(entries: CMat, tol: &Tolerances) -> Result<Self> {
        let dim = square_dim(&entries).map_err(QworkError::InvalidState)?;
        let herm = herm_deviation(&entries);
        if herm > tol.herm {
            return Err(QworkError::InvalidState(format!(
                "not Hermitian: max |ρ − ρ†| = {herm:.3e}"
            )));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(QworkError::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let entries = hermitize(&entries);
        let (vals, _) = herm_eigen(&entries);
        if vals[0] < -tol.psd {
            return Err(QworkError::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                vals[0]
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Wraps a matrix known to satisfy the invariants (outputs of channels,
    /// Gibbs construction, optimizer iterates).
    pub(crate) fn from_valid(entries: CMat) -> Self {
        let dim = entries.nrows();
        Self { dim, entries }
    }

    /// `|ψ⟩⟨ψ|` from an arbitrary nonzero vector; normalizes internally.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < 1e-300 {
            return Err(QworkError::InvalidState("zero state vector".into()));
        }
        let dim = psi.len();
        let mut entries = CMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                entries[(i, j)] = psi[i] * psi[j].conj() / norm_sq;
            }
        }
        Ok(Self { dim, entries })
    }

    /// Projector onto the computational basis state `|k⟩`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut entries = CMat::zeros(dim, dim);
        entries[(k, k)] = C64::new(1.0, 0.0);
        Self { dim, entries }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            entries: identity_c(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> RVec {
        herm_eigen(&self.entries).0
    }
}

/// A Hermitian observable; used for system Hamiltonians and, in the
/// Heisenberg picture, for back-propagated observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    dim: usize,
    entries: CMat,
}

impl Hamiltonian {
    pub fn new(entries: CMat, tol: &Tolerances) -> Result<Self> {
        let dim = square_dim(&entries).map_err(QworkError::InvalidHamiltonian)?;
        let herm = herm_deviation(&entries);
        if herm > tol.herm {
            return Err(QworkError::InvalidHamiltonian(format!(
                "not Hermitian: max |H − H†| = {herm:.3e}"
            )));
        }
        Ok(Self {
            dim,
            entries: hermitize(&entries),
        })
    }

    /// Diagonal Hamiltonian from real level energies.
    pub fn diagonal(levels: &[f64]) -> Self {
        let dim = levels.len();
        let entries = CMat::from_diagonal(&DVector::from_iterator(
            dim,
            levels.iter().map(|&e| C64::new(e, 0.0)),
        ));
        Self { dim, entries }
    }

    pub(crate) fn from_valid(entries: CMat) -> Self {
        let dim = entries.nrows();
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }
}

/// A completely positive trace-preserving map in Kraus form,
/// `Ω(ρ) = Σ_k K_k ρ K_k†`.
///
/// Complete positivity is automatic in this representation; construction
/// checks trace preservation, `Σ_k K_k† K_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<CMat>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMat>, tol: &Tolerances) -> Result<Self> {
        let chan = Self::new_unchecked(ops)?;
        let report = validate_cptp(&chan, tol);
        if !report.pass {
            return Err(QworkError::InvalidChannel(format!(
                "violates Σ K†K = 1: deviation {:.3e} (tolerance {:.1e})",
                report.tp_deviation, tol.tp
            )));
        }
        Ok(chan)
    }

    /// Builds the channel without the trace-preservation check; shape
    /// consistency is still enforced. Meant for report-style validation of
    /// untrusted Kraus lists.
    pub fn new_unchecked(ops: Vec<CMat>) -> Result<Self> {
        if ops.is_empty() {
            return Err(QworkError::InvalidChannel("empty Kraus list".into()));
        }
        let (dim_out, dim_in) = (ops[0].nrows(), ops[0].ncols());
        if dim_in == 0 || dim_out == 0 {
            return Err(QworkError::InvalidChannel("zero-dimensional Kraus operator".into()));
        }
        for k in &ops {
            if k.nrows() != dim_out || k.ncols() != dim_in {
                return Err(QworkError::InvalidChannel(format!(
                    "inconsistent Kraus shapes: expected {dim_out}×{dim_in}, got {}×{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        Ok(Self { dim_in, dim_out, ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            ops: vec![identity_c(dim)],
        }
    }

    /// Full dephasing in the computational basis: `ρ → Σ_k |k⟩⟨k| ρ |k⟩⟨k|`.
    pub fn dephasing(dim: usize) -> Self {
        let ops = (0..dim)
            .map(|k| {
                let mut m = CMat::zeros(dim, dim);
                m[(k, k)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { dim_in: dim, dim_out: dim, ops }
    }

    /// Replacement channel `ρ → |k⟩⟨k|` with Kraus set `{|k⟩⟨j|}_j`.
    pub fn replace_with_basis_state(dim: usize, k: usize) -> Self {
        let ops = (0..dim)
            .map(|j| {
                let mut m = CMat::zeros(dim, dim);
                m[(k, j)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { dim_in: dim, dim_out: dim, ops }
    }

    /// Unitary conjugation channel `ρ → U ρ U†`.
    pub fn unitary(u: CMat) -> Result<Self> {
        let dim = square_dim(&u).map_err(QworkError::InvalidChannel)?;
        Ok(Self { dim_in: dim, dim_out: dim, ops: vec![u] })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_ops(&self) -> &[CMat] {
        &self.ops
    }
}

fn square_dim(m: &CMat) -> std::result::Result<usize, String> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        Err(format!("expected a nonempty square matrix, got {}×{}", m.nrows(), m.ncols()))
    } else {
        Ok(m.nrows())
    }
}

/// Von Neumann entropy `S(ρ) = −tr(ρ ln ρ)` in nats.
///
/// Eigenvalues numerically below zero (already bounded by the state's
/// construction tolerance) are clamped before the `λ ln λ` sum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let vals = rho.eigenvalues();
    // the state invariant bounds eigenvalues from below, so clamping cannot fail
    entropy_from_eigenvalues(&vals, f64::INFINITY).expect("clamped entropy")
}

pub(crate) fn entropy_raw(m: &CMat, psd_tol: f64) -> Result<f64> {
    let (vals, _) = herm_eigen(m);
    entropy_from_eigenvalues(&vals, psd_tol)
}

/// Gibbs state `exp(−H/kB·T)/Z` through the eigendecomposition of `H`.
pub fn gibbs_state(h: &Hamiltonian, consts: &PhysicalConstants) -> DensityMatrix {
    let (vals, vecs) = herm_eigen(h.entries());
    let beta = 1.0 / consts.kbt();
    // shift by the ground energy so the weights never overflow
    let e0 = vals[0];
    let weights: Vec<f64> = vals.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let d = CMat::from_diagonal(&DVector::from_iterator(
        h.dim(),
        weights.iter().map(|&w| C64::new(w / z, 0.0)),
    ));
    DensityMatrix::from_valid(hermitize(&(&vecs * d * vecs.adjoint())))
}

/// Free energy `F(ρ) = tr(ρH) − kB·T·S(ρ)`.
pub fn free_energy(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(QworkError::DimensionMismatch(format!(
            "state dim {} vs hamiltonian dim {}",
            rho.dim(),
            h.dim()
        )));
    }
    let u = trace_prod_re(rho.entries(), h.entries());
    Ok(u - consts.kbt() * von_neumann_entropy(rho))
}

pub(crate) fn apply_kraus_raw(ops: &[CMat], m: &CMat) -> CMat {
    let mut out = CMat::zeros(ops[0].nrows(), ops[0].nrows());
    for k in ops {
        out += k * m * dagger(k);
    }
    out
}

pub(crate) fn adjoint_kraus_raw(ops: &[CMat], m: &CMat) -> CMat {
    let mut out = CMat::zeros(ops[0].ncols(), ops[0].ncols());
    for k in ops {
        out += dagger(k) * m * k;
    }
    out
}

/// Schrödinger-picture action `Ω(ρ) = Σ_k K_k ρ K_k†`.
pub fn apply_channel(chan: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if chan.dim_in() != rho.dim() {
        return Err(QworkError::DimensionMismatch(format!(
            "channel input dim {} vs state dim {}",
            chan.dim_in(),
            rho.dim()
        )));
    }
    Ok(DensityMatrix::from_valid(apply_kraus_raw(
        &chan.ops,
        rho.entries(),
    )))
}

/// Heisenberg-picture adjoint `Ω†(A) = Σ_k K_k† A K_k`; unital whenever the
/// channel is trace preserving.
pub fn adjoint_apply(chan: &KrausChannel, obs: &Hamiltonian) -> Result<Hamiltonian> {
    if chan.dim_out() != obs.dim() {
        return Err(QworkError::DimensionMismatch(format!(
            "channel output dim {} vs observable dim {}",
            chan.dim_out(),
            obs.dim()
        )));
    }
    Ok(Hamiltonian::from_valid(adjoint_kraus_raw(
        &chan.ops,
        obs.entries(),
    )))
}

/// Outcome of the CPTP diagnostics in [`validate_cptp`].
#[derive(Debug, Clone, PartialEq)]
pub struct CptpReport {
    /// `max |Σ K†K − 1|`.
    pub tp_deviation: f64,
    /// Minimum eigenvalue of the Choi matrix built from the Kraus list.
    pub choi_min_eigenvalue: f64,
    pub tp_pass: bool,
    pub cp_pass: bool,
    pub pass: bool,
}

/// Reports trace preservation and Choi positivity of a Kraus list.
pub fn validate_cptp(chan: &KrausChannel, tol: &Tolerances) -> CptpReport {
    let sum = chan
        .ops
        .iter()
        .fold(CMat::zeros(chan.dim_in, chan.dim_in), |acc, k| acc + dagger(k) * k);
    let tp_deviation = max_abs(&(sum - identity_c(chan.dim_in)));

    // Choi matrix J = Σ_k vec(K_k) vec(K_k)† on the out⊗in space
    let d_in = chan.dim_in;
    let d_out = chan.dim_out;
    let mut choi = CMat::zeros(d_in * d_out, d_in * d_out);
    for k in &chan.ops {
        let mut v = DVector::<C64>::zeros(d_in * d_out);
        for i in 0..d_out {
            for j in 0..d_in {
                v[i * d_in + j] = k[(i, j)];
            }
        }
        choi += &v * v.adjoint();
    }
    let (vals, _) = herm_eigen(&choi);
    let choi_min_eigenvalue = vals[0];

    let tp_pass = tp_deviation <= tol.tp;
    let cp_pass = choi_min_eigenvalue >= -tol.psd;
    CptpReport {
        tp_deviation,
        choi_min_eigenvalue,
        tp_pass,
        cp_pass,
        pass: tp_pass && cp_pass,
    }
}

/// Builds the thermal channel `ρ → tr_A{V (ρ ⊗ τ_A) V†}` from an
/// energy-conserving dilation.
///
/// `V` must be unitary on the system⊗ancilla space and commute with
/// `H_T = H_S⊗1 + 1⊗H_A`; the ancilla is placed in the Gibbs state of `H_A`.
/// Kraus operators are extracted in the eigenbasis of that Gibbs state, one
/// per (row, column) pair of ancilla eigenvectors, weighted by the square
/// root of the thermal populations.
pub fn thermal_channel_from_dilation(
    v: &CMat,
    h_s: &Hamiltonian,
    h_a: &Hamiltonian,
    consts: &PhysicalConstants,
    tol: &Tolerances,
) -> Result<KrausChannel> {
    let d_s = h_s.dim();
    let d_a = h_a.dim();
    let d = d_s * d_a;
    if v.nrows() != d || v.ncols() != d {
        return Err(QworkError::DimensionMismatch(format!(
            "dilation unitary is {}×{}, expected {d}×{d}",
            v.nrows(),
            v.ncols()
        )));
    }
    let unitary_dev = max_abs(&(dagger(v) * v - identity_c(d)));
    if unitary_dev > tol.herm {
        return Err(QworkError::InvalidChannel(format!(
            "dilation is not unitary: max |V†V − 1| = {unitary_dev:.3e}"
        )));
    }
    let h_t = tensor_hamiltonian(h_s, h_a);
    let comm = v * h_t.entries() - h_t.entries() * v;
    let comm_norm = max_abs(&comm);
    if comm_norm > tol.comm {
        return Err(QworkError::NotThermal(format!(
            "[V, H_S⊗1 + 1⊗H_A] has norm {comm_norm:.3e}, so V is not energy conserving"
        )));
    }

    let tau = gibbs_state(h_a, consts);
    let (pops, basis) = herm_eigen(tau.entries());
    // K_{k,l} = √p_l (1⊗⟨k|) V (1⊗|l⟩), indices over the Gibbs eigenbasis
    let mut ops = Vec::with_capacity(d_a * d_a);
    for k in 0..d_a {
        for l in 0..d_a {
            let w = pops[l].max(0.0).sqrt();
            let mut op = CMat::zeros(d_s, d_s);
            for i in 0..d_s {
                for j in 0..d_s {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..d_a {
                        for b in 0..d_a {
                            acc += basis[(a, k)].conj()
                                * v[(i * d_a + a, j * d_a + b)]
                                * basis[(b, l)];
                        }
                    }
                    op[(i, j)] = w * acc;
                }
            }
            ops.push(op);
        }
    }
    KrausChannel::new(ops, tol)
}

/// Tensor product of two channels, Kraus set `{K_i ⊗ L_j}`.
pub fn tensor_channel(c1: &KrausChannel, c2: &KrausChannel) -> KrausChannel {
    let mut ops = Vec::with_capacity(c1.ops.len() * c2.ops.len());
    for k in &c1.ops {
        for l in &c2.ops {
            ops.push(k.kronecker(l));
        }
    }
    KrausChannel {
        dim_in: c1.dim_in * c2.dim_in,
        dim_out: c1.dim_out * c2.dim_out,
        ops,
    }
}

/// Non-interacting composite Hamiltonian `H₁⊗1 + 1⊗H₂`.
pub fn tensor_hamiltonian(h1: &Hamiltonian, h2: &Hamiltonian) -> Hamiltonian {
    let entries = h1.entries().kronecker(&identity_c(h2.dim()))
        + identity_c(h1.dim()).kronecker(h2.entries());
    Hamiltonian::from_valid(entries)
}

pub fn tensor_state(r1: &DensityMatrix, r2: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_valid(r1.entries().kronecker(r2.entries()))
}

/// Partial trace over the factors *not* listed in `keep`.
///
/// `dims` lists factor dimensions with the first factor most significant
/// (matching the Kronecker-product convention used throughout); `keep` holds
/// strictly increasing factor indices.
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<DensityMatrix> {
    partial_trace_raw(rho.entries(), dims, keep).map(DensityMatrix::from_valid)
}

pub(crate) fn partial_trace_raw(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if total != m.nrows() {
        return Err(QworkError::DimensionMismatch(format!(
            "factor dims {dims:?} multiply to {total}, matrix dim is {}",
            m.nrows()
        )));
    }
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&k| k >= dims.len())
    {
        return Err(QworkError::InvalidArgument(format!(
            "keep set {keep:?} must be strictly increasing factor indices below {}",
            dims.len()
        )));
    }

    let n = dims.len();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let decompose = |mut idx: usize| -> Vec<usize> {
        let mut digits = vec![0usize; n];
        for f in (0..n).rev() {
            digits[f] = idx % dims[f];
            idx /= dims[f];
        }
        digits
    };
    let kept_index = |digits: &[usize]| -> usize {
        keep.iter().fold(0, |acc, &k| acc * dims[k] + digits[k])
    };

    let mut out = CMat::zeros(kept_dim, kept_dim);
    for r in 0..total {
        let rd = decompose(r);
        for c in 0..total {
            let cd = decompose(c);
            let traced_match = (0..n)
                .filter(|f| !keep.contains(f))
                .all(|f| rd[f] == cd[f]);
            if traced_match {
                out[(kept_index(&rd), kept_index(&cd))] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Mixes a state toward the maximally mixed one: `(1−ε)ρ + ε·1/d`.
///
/// This is the interior floor used before matrix logarithms near the boundary
/// of the state space.
pub(crate) fn floored(m: &CMat, eps: f64) -> CMat {
    let d = m.nrows();
    m.scale(1.0 - eps) + identity_c(d).scale(eps / d as f64)
}

pub(crate) fn expectation_raw(rho: &CMat, obs: &CMat) -> f64 {
    trace_prod_re(rho, obs)
}
