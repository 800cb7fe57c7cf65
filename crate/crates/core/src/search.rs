//! Maximal accessible coherence: the largest average coherence over
//! pure-state decompositions of a state, minus the state's own coherence.
//!
//! Every pure-state decomposition `ρ = Σ_j p_j |ψ_j⟩⟨ψ_j|` with `m` members
//! comes from an `m × r` isometry `U` acting on the weighted eigenvectors:
//! `√p_j |ψ_j⟩ = Σ_k U_jk √λ_k |e_k⟩`. The search runs random-restart ascent
//! over isometries, refining each with cyclic two-row complex rotations, which
//! keep `U` an isometry exactly. Results are lower bounds ("best found").

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::ensemble_accessible_coherence;
use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, EIGEN_CLAMP};
use crate::measures::{coherence, MeasureKind};
use crate::random::haar_isometry;
use crate::states::{DensityMatrix, Ensemble, BRANCH_CUTOFF};

/// Largest eigenvalue at or above `1 − PURITY_TOL` counts as pure.
pub const PURITY_TOL: f64 = 1e-10;

const ISOMETRY_TOL: f64 = 1e-10;

/// Coarse grid for each two-row rotation before local refinement.
const THETA_GRID: usize = 8;
const PHI_GRID: usize = 4;
const MIN_STEP: f64 = 1e-7;
const MAX_PAIR_STEPS: usize = 400;

/// An `size × rank` isometry selecting one pure-state decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionSpec {
    rank: usize,
    size: usize,
    /// Row-major, `size × rank`.
    mixing: Vec<Complex64>,
}

impl DecompositionSpec {
    pub fn new(rank: usize, size: usize, mixing: Vec<Complex64>) -> Result<Self> {
        if rank == 0 || size < rank {
            return Err(Error::InvalidParameter(format!(
                "decomposition needs size >= rank >= 1, got size {size}, rank {rank}"
            )));
        }
        if mixing.len() != size * rank {
            return Err(Error::DimensionMismatch {
                expected: size * rank,
                found: mixing.len(),
            });
        }
        let spec = Self { rank, size, mixing };
        let dev = spec.isometry_residual();
        if dev > ISOMETRY_TOL {
            return Err(Error::InvalidParameter(format!(
                "mixing columns are not orthonormal (residual {dev:.3e})"
            )));
        }
        Ok(spec)
    }

    /// Identity mixing: the eigen-ensemble.
    pub fn identity(rank: usize) -> Self {
        let mut mixing = vec![Complex64::new(0.0, 0.0); rank * rank];
        for k in 0..rank {
            mixing[k * rank + k] = Complex64::new(1.0, 0.0);
        }
        Self {
            rank,
            size: rank,
            mixing,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mixing(&self) -> &[Complex64] {
        &self.mixing
    }

    /// Max entrywise deviation of `U†U` from the identity.
    pub fn isometry_residual(&self) -> f64 {
        let r = self.rank;
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let dot: Complex64 = (0..self.size)
                    .map(|j| self.mixing[j * r + a].conj() * self.mixing[j * r + b])
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// Eigenpairs with eigenvalue above the clamp, largest first, as weighted
/// vectors `√λ_k |e_k⟩`.
fn weighted_support(rho: &DensityMatrix) -> Vec<Vec<Complex64>> {
    let eig = eigh(rho.matrix()).expect("state is Hermitian");
    eig.values
        .iter()
        .zip(&eig.vectors)
        .rev()
        .filter(|(l, _)| **l > EIGEN_CLAMP)
        .map(|(l, v)| v.iter().map(|z| z * l.sqrt()).collect())
        .collect()
}

/// Number of eigenvalues above `1e-12`.
pub fn state_rank(rho: &DensityMatrix) -> usize {
    rho.eigenvalues().iter().filter(|l| **l > EIGEN_CLAMP).count()
}

fn unnormalized_members(support: &[Vec<Complex64>], spec: &DecompositionSpec) -> Vec<Vec<Complex64>> {
    let dim = support[0].len();
    (0..spec.size)
        .map(|j| {
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            for (k, w) in support.iter().enumerate() {
                let u = spec.mixing[j * spec.rank + k];
                for (x, y) in psi.iter_mut().zip(w) {
                    *x += u * y;
                }
            }
            psi
        })
        .collect()
}

fn ensemble_from_vectors(vectors: &[Vec<Complex64>]) -> Ensemble {
    let members: Vec<(f64, DensityMatrix)> = vectors
        .iter()
        .filter_map(|psi| {
            let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if p < BRANCH_CUTOFF {
                return None;
            }
            let unit: Vec<Complex64> = psi.iter().map(|z| z / p.sqrt()).collect();
            Some((p, DensityMatrix::from_valid(ComplexMatrix::outer(&unit))))
        })
        .collect();
    Ensemble::from_valid_members(members)
}

/// The pure-state ensemble selected by `spec`.
pub fn decomposition_from_isometry(rho: &DensityMatrix, spec: &DecompositionSpec) -> Result<Ensemble> {
    let support = weighted_support(rho);
    if support.len() != spec.rank {
        return Err(Error::RankMismatch {
            state_rank: support.len(),
            spec_rank: spec.rank,
        });
    }
    Ok(ensemble_from_vectors(&unnormalized_members(&support, spec)))
}

/// `S(ρ)` for relative entropy (concavity of the dephased entropy bounds
/// any decomposition's average); `+∞` for l1, which has no certified bound here.
pub fn accessible_upper_bound(rho: &DensityMatrix, kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::RelativeEntropy => rho.entropy(),
        MeasureKind::L1 => f64::INFINITY,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Ensemble cardinality; `None` means `2·rank`.
    pub ensemble_size: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 500,
            seed: 0,
            ensemble_size: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_ensemble: Ensemble,
    pub restarts_used: usize,
    pub converged: bool,
    pub upper_bound: f64,
}

/// `p · C(ψ/√p)` for an unnormalized pure vector with `p = ‖ψ‖²`.
fn weighted_pure_coherence(psi: &[Complex64], kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::L1 => {
            let sum_abs: f64 = psi.iter().map(|z| z.norm()).sum();
            let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            sum_abs * sum_abs - p
        }
        MeasureKind::RelativeEntropy => {
            let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if p <= 0.0 {
                return 0.0;
            }
            psi.iter()
                .map(|z| z.norm_sqr())
                .filter(|&w| w > 0.0)
                .map(|w| -w * (w / p).log2())
                .sum()
        }
    }
}

/// `(cosθ·a − e^{iφ}sinθ·b, e^{−iφ}sinθ·a + cosθ·b)`.
fn rotate_pair(a: &[Complex64], b: &[Complex64], theta: f64, phi: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let na = a.iter().zip(b).map(|(x, y)| x * c - e * s * y).collect();
    let nb = a.iter().zip(b).map(|(x, y)| e.conj() * s * x + y * c).collect();
    (na, nb)
}

fn rotate_rows(mixing: &mut [Complex64], rank: usize, ra: usize, rb: usize, theta: f64, phi: f64) {
    let a: Vec<Complex64> = mixing[ra * rank..(ra + 1) * rank].to_vec();
    let b: Vec<Complex64> = mixing[rb * rank..(rb + 1) * rank].to_vec();
    let (na, nb) = rotate_pair(&a, &b, theta, phi);
    mixing[ra * rank..(ra + 1) * rank].copy_from_slice(&na);
    mixing[rb * rank..(rb + 1) * rank].copy_from_slice(&nb);
}

/// `p·C` of `c·a − e^{iφ}s·b` plus that of `e^{−iφ}s·a + c·b`, without allocating.
fn rotated_pair_value(a: &[Complex64], b: &[Complex64], theta: f64, phi: f64, kind: MeasureKind) -> f64 {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let (es, ecs) = (e * s, e.conj() * s);
    let (mut p_a, mut p_b) = (0.0, 0.0);
    let (mut abs_a, mut abs_b) = (0.0, 0.0);
    let (mut xlx_a, mut xlx_b) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let wa = (x * c - es * y).norm_sqr();
        let wb = (ecs * x + y * c).norm_sqr();
        p_a += wa;
        p_b += wb;
        match kind {
            MeasureKind::L1 => {
                abs_a += wa.sqrt();
                abs_b += wb.sqrt();
            }
            MeasureKind::RelativeEntropy => {
                if wa > 0.0 {
                    xlx_a += wa * wa.log2();
                }
                if wb > 0.0 {
                    xlx_b += wb * wb.log2();
                }
            }
        }
    }
    match kind {
        MeasureKind::L1 => abs_a * abs_a - p_a + abs_b * abs_b - p_b,
        MeasureKind::RelativeEntropy => {
            // −Σ w log(w/p) = p log p − Σ w log w
            let plogp = |p: f64| if p > 0.0 { p * p.log2() } else { 0.0 };
            plogp(p_a) - xlx_a + plogp(p_b) - xlx_b
        }
    }
}

/// Best `(θ, φ, value)` for the pair: coarse grid, then compass search whose
/// step doubles after a successful move and halves after a failed one.
fn optimize_pair(a: &[Complex64], b: &[Complex64], kind: MeasureKind) -> (f64, f64, f64) {
    let eval = |theta: f64, phi: f64| rotated_pair_value(a, b, theta, phi, kind);
    let pi = std::f64::consts::PI;
    let mut best = (0.0, 0.0, eval(0.0, 0.0));
    for ti in 0..THETA_GRID {
        let theta = -pi / 2.0 + pi * ti as f64 / THETA_GRID as f64;
        for pj in 0..PHI_GRID {
            let phi = 2.0 * pi * pj as f64 / PHI_GRID as f64;
            let v = eval(theta, phi);
            if v > best.2 {
                best = (theta, phi, v);
            }
        }
    }
    let max_step = pi / THETA_GRID as f64;
    let mut step = max_step;
    for _ in 0..MAX_PAIR_STEPS {
        if step <= MIN_STEP {
            break;
        }
        let (t0, p0, _) = best;
        let candidates = [(t0 + step, p0), (t0 - step, p0), (t0, p0 + step), (t0, p0 - step)];
        let mut moved = false;
        for (t, p) in candidates {
            let v = eval(t, p);
            if v > best.2 {
                best = (t, p, v);
                moved = true;
            }
        }
        step = if moved { (2.0 * step).min(max_step) } else { 0.5 * step };
    }
    best
}

struct RestartOutcome {
    mixing: Vec<Complex64>,
    objective: f64,
    converged: bool,
}

fn run_restart(
    support: &[Vec<Complex64>],
    size: usize,
    kind: MeasureKind,
    max_iters: usize,
    rng: &mut ChaCha8Rng,
) -> RestartOutcome {
    let rank = support.len();
    let mut mixing = haar_isometry(size, rank, rng);
    let spec = DecompositionSpec {
        rank,
        size,
        mixing: mixing.clone(),
    };
    let mut vectors = unnormalized_members(support, &spec);
    let mut contrib: Vec<f64> = vectors.iter().map(|v| weighted_pure_coherence(v, kind)).collect();
    let mut objective: f64 = contrib.iter().sum();
    let mut converged = false;

    for _ in 0..max_iters {
        let before = objective;
        for a in 0..size {
            for b in (a + 1)..size {
                let current = contrib[a] + contrib[b];
                let (theta, phi, value) = optimize_pair(&vectors[a], &vectors[b], kind);
                if value > current {
                    let (na, nb) = rotate_pair(&vectors[a], &vectors[b], theta, phi);
                    contrib[a] = weighted_pure_coherence(&na, kind);
                    contrib[b] = weighted_pure_coherence(&nb, kind);
                    vectors[a] = na;
                    vectors[b] = nb;
                    rotate_rows(&mut mixing, rank, a, b, theta, phi);
                }
            }
        }
        objective = contrib.iter().sum();
        if objective - before < 1e-8 {
            converged = true;
            break;
        }
    }
    RestartOutcome {
        mixing,
        objective,
        converged,
    }
}

/// Random-restart search for the maximal accessible coherence of `rho`.
///
/// Pure states return 0 without running any restarts. The eigen-ensemble is
/// always a candidate, so the result never falls below its value. Restart `n`
/// draws from ChaCha stream `n` of `seed`; restarts run in parallel and the
/// best one wins, ties going to the lowest index, so the result does not
/// depend on scheduling.
pub fn max_accessible_coherence(rho: &DensityMatrix, kind: MeasureKind, opts: &SearchOptions) -> SearchResult {
    let upper_bound = accessible_upper_bound(rho, kind);
    if rho.is_pure(PURITY_TOL) {
        return SearchResult {
            best_value: 0.0,
            best_ensemble: Ensemble::from_valid_members(vec![(1.0, rho.clone())]),
            restarts_used: 0,
            converged: true,
            upper_bound,
        };
    }

    let support = weighted_support(rho);
    let rank = support.len();
    let size = opts.ensemble_size.unwrap_or(2 * rank).max(rank);

    let eigen_spec = DecompositionSpec::identity(rank);
    let eigen_vectors = unnormalized_members(&support, &eigen_spec);
    let eigen_objective: f64 = eigen_vectors.iter().map(|v| weighted_pure_coherence(v, kind)).sum();

    let outcomes: Vec<RestartOutcome> = (0..opts.restarts)
        .into_par_iter()
        .map(|n| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(n as u64);
            run_restart(&support, size, kind, opts.max_iters, &mut rng)
        })
        .collect();

    let mut best_spec = eigen_spec;
    let mut best_objective = eigen_objective;
    let mut converged = true;
    for outcome in outcomes {
        if outcome.objective > best_objective {
            best_objective = outcome.objective;
            converged = outcome.converged;
            best_spec = DecompositionSpec {
                rank,
                size,
                mixing: outcome.mixing,
            };
        }
    }

    let best_ensemble = ensemble_from_vectors(&unnormalized_members(&support, &best_spec));
    // Reported value is recomputed from the ensemble itself.
    let best_value = ensemble_accessible_coherence(&best_ensemble, kind);
    SearchResult {
        best_value,
        best_ensemble,
        restarts_used: opts.restarts,
        converged,
        upper_bound,
    }
}

/// Accessible coherence of the eigen-ensemble.
pub fn eigen_ensemble_value(rho: &DensityMatrix, kind: MeasureKind) -> f64 {
    let support = weighted_support(rho);
    let e = ensemble_from_vectors(&unnormalized_members(&support, &DecompositionSpec::identity(support.len())));
    ensemble_accessible_coherence(&e, kind)
}

/// Coherence of assistance: the best average coherence found, i.e. the
/// accessible coherence plus the state's own coherence.
pub fn coherence_of_assistance(result: &SearchResult, rho: &DensityMatrix, kind: MeasureKind) -> f64 {
    result.best_value + coherence(rho, kind)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleMemberDump {
    pub probability: f64,
    /// Unit vector as `[re, im]` pairs.
    pub vector: Vec<[f64; 2]>,
}

/// Pure-member ensembles as probability + state vector, for serialization.
pub fn dump_pure_members(ensemble: &Ensemble) -> Vec<EnsembleMemberDump> {
    ensemble
        .members()
        .iter()
        .map(|(p, rho)| {
            let eig = eigh(rho.matrix()).expect("Hermitian");
            let top = eig.vectors.last().expect("nonempty");
            EnsembleMemberDump {
                probability: *p,
                vector: top.iter().map(|z| [z.re, z.im]).collect(),
            }
        })
        .collect()
}
