//! Validated quantum states, bipartite indexing, reference-basis dephasing,
//! partial traces, conditional ensembles, and the example state generators.
//!
//! Bipartite entries follow the convention `ρ_{ik,jl}` at row `i·dB + k`,
//! column `j·dB + l`, where `i, j` index A and `k, l` index B.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, eigh, kron, ComplexMatrix, EIGEN_CLAMP, HERMITIAN_TOL};

/// Trace and positivity tolerance for state validation.
pub const STATE_TOL: f64 = 1e-9;

/// Measurement outcomes with probability below this are dropped.
pub const BRANCH_CUTOFF: f64 = 1e-12;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and symmetrizes. The error names the first violated invariant.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvalidState {
                invariant: "entries must be finite".into(),
                residual: f64::NAN,
            });
        }
        let dev = mat.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                invariant: "matrix is not Hermitian (max |ρ_ij - conj(ρ_ji)|)".into(),
                residual: dev,
            });
        }
        let mat = mat.hermitian_part();
        let trace_dev = (mat.trace().re - 1.0).abs();
        if trace_dev > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "trace deviates from 1".into(),
                residual: trace_dev,
            });
        }
        let min_eig = linalg::eigvalsh(&mat)?[0];
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "matrix is not positive semidefinite (minimum eigenvalue)".into(),
                residual: min_eig,
            });
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "pure state vector must have unit norm".into(),
                residual: (norm_sq - 1.0).abs(),
            });
        }
        Ok(Self::from_valid(ComplexMatrix::outer(psi)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_valid(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// For matrices that are states by construction (images of channels, mixtures).
    pub(crate) fn from_valid(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.hermitian_deviation() < 1e-9);
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat).expect("state is Hermitian")
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    /// Whether the largest eigenvalue is within `tol` of 1.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.eigenvalues().last().copied().unwrap_or(0.0) >= 1.0 - tol
    }

    /// The reference-basis dephasing channel: keeps the diagonal, zeroes the rest.
    pub fn dephase(&self) -> DensityMatrix {
        let n = self.dim();
        Self::from_valid(ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                self.mat[(i, i)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Real diagonal (populations in the reference basis).
    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(0.5 * linalg::trace_norm(&(&self.mat - &other.mat))?)
    }

    /// Convex combination `w·self + (1 − w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!("mixing weight {w} outside [0,1]")));
        }
        Ok(Self::from_valid(&self.mat.scale(w) + &other.mat.scale(1.0 - w)))
    }
}

/// Von Neumann entropy in bits, with eigenvalues `≤ 1e-12` clamped to zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    linalg::spectral_entropy(rho.matrix()).expect("state is Hermitian")
}

/// `S(ρ‖σ)` in bits, `+∞` on a support violation.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::relative_entropy_matrices(rho.matrix(), sigma.matrix())
}

/// One of the two parties of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Which party is measured in the reference basis: `OnA` is →, `OnB` is ←,
/// `Both` is ↔.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementSide {
    OnA,
    OnB,
    Both,
}

/// A density matrix on `C^{dA} ⊗ C^{dB}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    state: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(state: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: state.dim(),
            });
        }
        Ok(Self { state, dim_a, dim_b })
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// `ρ_{ik,jl}`.
    #[inline]
    pub fn entry(&self, i: usize, k: usize, j: usize, l: usize) -> Complex64 {
        self.matrix()[(i * self.dim_b + k, j * self.dim_b + l)]
    }

    fn with_matrix(&self, mat: ComplexMatrix) -> BipartiteState {
        BipartiteState {
            state: DensityMatrix::from_valid(mat),
            dim_a: self.dim_a,
            dim_b: self.dim_b,
        }
    }

    /// Reference-basis measurement on one or both parties (outcome forgotten).
    pub fn dephase_side(&self, side: MeasurementSide) -> BipartiteState {
        let db = self.dim_b;
        let m = self.matrix();
        self.with_matrix(ComplexMatrix::from_fn(m.dim(), |r, c| {
            let (i, k) = (r / db, r % db);
            let (j, l) = (c / db, c % db);
            let keep = match side {
                MeasurementSide::OnA => i == j,
                MeasurementSide::OnB => k == l,
                MeasurementSide::Both => i == j && k == l,
            };
            if keep {
                m[(r, c)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Reduced state of `keep`.
    pub fn partial_trace(&self, keep: Subsystem) -> DensityMatrix {
        let (da, db) = self.dims();
        let mat = match keep {
            Subsystem::A => ComplexMatrix::from_fn(da, |i, j| {
                (0..db).map(|k| self.entry(i, k, j, k)).sum()
            }),
            Subsystem::B => ComplexMatrix::from_fn(db, |k, l| {
                (0..da).map(|i| self.entry(i, k, i, l)).sum()
            }),
        };
        DensityMatrix::from_valid(mat)
    }

    /// Ensemble of post-measurement states of the unmeasured party after a
    /// reference-basis measurement on `measured`. Outcomes with probability
    /// below `1e-12` are dropped.
    pub fn conditional_ensemble(&self, measured: Subsystem) -> Ensemble {
        let (da, db) = self.dims();
        let mut members = Vec::new();
        match measured {
            Subsystem::B => {
                for k in 0..db {
                    let p: f64 = (0..da).map(|i| self.entry(i, k, i, k).re).sum();
                    if p < BRANCH_CUTOFF {
                        continue;
                    }
                    let cond = ComplexMatrix::from_fn(da, |i, j| self.entry(i, k, j, k) / p);
                    members.push((p, DensityMatrix::from_valid(cond)));
                }
            }
            Subsystem::A => {
                for i in 0..da {
                    let p: f64 = (0..db).map(|k| self.entry(i, k, i, k).re).sum();
                    if p < BRANCH_CUTOFF {
                        continue;
                    }
                    let cond = ComplexMatrix::from_fn(db, |k, l| self.entry(i, k, i, l) / p);
                    members.push((p, DensityMatrix::from_valid(cond)));
                }
            }
        }
        Ensemble::from_valid_members(members)
    }

    /// Transpose of the indices of one party.
    pub fn partial_transpose(&self, side: Subsystem) -> ComplexMatrix {
        let db = self.dim_b;
        ComplexMatrix::from_fn(self.matrix().dim(), |r, c| {
            let (i, k) = (r / db, r % db);
            let (j, l) = (c / db, c % db);
            match side {
                Subsystem::B => self.entry(i, l, j, k),
                Subsystem::A => self.entry(j, k, i, l),
            }
        })
    }

    /// `‖ρ^{T_B}‖₁ − 1`.
    pub fn negativity(&self) -> f64 {
        linalg::trace_norm(&self.partial_transpose(Subsystem::B)).expect("partial transpose is Hermitian")
            - 1.0
    }
}

/// Probability-weighted states with a cached mixture.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<(f64, DensityMatrix)>,
    mixture: DensityMatrix,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidParameter("ensemble must have at least one member".into()));
        };
        let dim = first.1.dim();
        for (p, rho) in &members {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.dim(),
                });
            }
            if !(*p >= 0.0) {
                return Err(Error::InvalidParameter(format!("negative ensemble weight {p}")));
            }
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidParameter(format!(
                "ensemble weights sum to {total}, not 1"
            )));
        }
        Ok(Self::from_valid_members(members))
    }

    pub(crate) fn from_valid_members(members: Vec<(f64, DensityMatrix)>) -> Self {
        let dim = members[0].1.dim();
        let mut mix = ComplexMatrix::zeros(dim);
        for (p, rho) in &members {
            mix = &mix + &rho.matrix().scale(*p);
        }
        Self {
            members,
            mixture: DensityMatrix::from_valid(mix),
        }
    }

    pub fn members(&self) -> &[(f64, DensityMatrix)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mixture(&self) -> &DensityMatrix {
        &self.mixture
    }

    pub fn dim(&self) -> usize {
        self.mixture.dim()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_major(vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `ρ ⊗ σ`.
pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> BipartiteState {
    BipartiteState {
        state: DensityMatrix::from_valid(kron(a.matrix(), b.matrix())),
        dim_a: a.dim(),
        dim_b: b.dim(),
    }
}

/// `|+⟩⟨+|` on one qubit.
pub fn plus_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(&[c(h, 0.), c(h, 0.)]).unwrap()
}

/// `|−⟩⟨−|` on one qubit.
pub fn minus_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(&[c(h, 0.), c(-h, 0.)]).unwrap()
}

/// Computational basis projector `|n⟩⟨n|`.
pub fn basis_state(dim: usize, n: usize) -> DensityMatrix {
    let mut diag = vec![0.0; dim];
    diag[n] = 1.0;
    DensityMatrix::from_valid(ComplexMatrix::from_real_diagonal(&diag))
}

/// `|+⟩|+⟩`.
pub fn product_plus_state() -> BipartiteState {
    product_state(&plus_state(), &plus_state())
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> BipartiteState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)];
    BipartiteState::new(DensityMatrix::from_pure(&psi).unwrap(), 2, 2).unwrap()
}

/// `½|+⟩⟨+|⊗|0⟩⟨0| + ½|−⟩⟨−|⊗|1⟩⟨1|`: both marginals are maximally mixed,
/// yet the joint state carries coherence on A.
pub fn intro_example_state() -> BipartiteState {
    let plus0 = product_state(&plus_state(), &basis_state(2, 0));
    let minus1 = product_state(&minus_state(), &basis_state(2, 1));
    let mat = &plus0.matrix().scale(0.5) + &minus1.matrix().scale(0.5);
    BipartiteState::new(DensityMatrix::from_valid(mat), 2, 2).unwrap()
}

/// State `Σ_ij c_ij |ii⟩⟨jj|`; `c` must itself be a density matrix.
pub fn schmidt_correlated(coefficients: &ComplexMatrix) -> Result<BipartiteState> {
    let coeffs = DensityMatrix::new(coefficients.clone())
        .map_err(|e| Error::InvalidCoefficients(e.to_string()))?;
    let d = coeffs.dim();
    let mut mat = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            mat[(i * d + i, j * d + j)] = coeffs.matrix()[(i, j)];
        }
    }
    Ok(BipartiteState {
        state: DensityMatrix::from_valid(mat),
        dim_a: d,
        dim_b: d,
    })
}

/// Two-site transverse Ising Hamiltonian
/// `H = λ σˣσˣ + J(σˣ⊗𝕀 + 𝕀⊗σˣ) + ελ(σᶻ⊗𝕀 + 𝕀⊗σᶻ)`.
pub fn ising_hamiltonian(j: f64, lambda: f64, epsilon: f64) -> ComplexMatrix {
    let x = pauli_x();
    let z = pauli_z();
    let id = ComplexMatrix::identity(2);
    let coupling = kron(&x, &x).scale(lambda);
    let transverse = (&kron(&x, &id) + &kron(&id, &x)).scale(j);
    let breaking = (&kron(&z, &id) + &kron(&id, &z)).scale(epsilon * lambda);
    &(&coupling + &transverse) + &breaking
}

/// Lowest eigenpair of [`ising_hamiltonian`]. A degenerate ground space
/// resolves to the first vector in the eigensolver's deterministic order.
pub fn ising_ground_vector(j: f64, lambda: f64, epsilon: f64) -> Result<(f64, Vec<Complex64>)> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be nonzero and finite".into()));
    }
    if !j.is_finite() || !epsilon.is_finite() {
        return Err(Error::InvalidParameter("J and epsilon must be finite".into()));
    }
    let eig = eigh(&ising_hamiltonian(j, lambda, epsilon))?;
    Ok((eig.values[0], eig.vectors[0].clone()))
}

/// Ground state projector of the two-site Ising model.
pub fn ising_ground_state(j: f64, lambda: f64, epsilon: f64) -> Result<BipartiteState> {
    let (_, v) = ising_ground_vector(j, lambda, epsilon)?;
    BipartiteState::new(DensityMatrix::from_pure(&v)?, 2, 2)
}

/// Eigenvalues of a state clamped at zero from below, for diagnostics.
pub fn clamped_spectrum(rho: &DensityMatrix) -> Vec<f64> {
    rho.eigenvalues()
        .into_iter()
        .map(|l| if l <= EIGEN_CLAMP { 0.0 } else { l })
        .collect()
}
