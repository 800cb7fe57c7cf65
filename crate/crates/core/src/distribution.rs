//! Splitting bipartite coherence into local coherence, locally accessible
//! coherence and remaining coherence:
//!
//! `C_AB = C_A + C^A_A + C_B + C^A_B + C^T`
//!
//! Locally accessible coherence of A is the coherence A gains on average when
//! B is measured in the reference basis and the outcome is sent to A.
//! Remaining coherence is what neither party can reach that way.

use serde::Serialize;

use crate::correlations::LocalEntropies;
use crate::error::{Error, Result};
use crate::measures::{coherence, l1_coherence, MeasureKind};
use crate::states::{BipartiteState, Ensemble, Subsystem};

/// Above this the partition is reported as an internal numerical fault.
pub const PARTITION_FAULT_TOL: f64 = 1e-7;

/// The five parts of bipartite coherence under one measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionReport {
    pub measure: MeasureKind,
    pub c_total: f64,
    pub c_a: f64,
    pub c_b: f64,
    pub acc_a: f64,
    pub acc_b: f64,
    pub remaining: f64,
    /// `c_total` minus the sum of the five parts.
    pub residual: f64,
}

impl DistributionReport {
    fn assemble(measure: MeasureKind, c_total: f64, c_a: f64, c_b: f64, acc_a: f64, acc_b: f64, remaining: f64) -> Self {
        let residual = c_total - (c_a + acc_a + c_b + acc_b + remaining);
        Self {
            measure,
            c_total,
            c_a,
            c_b,
            acc_a,
            acc_b,
            remaining,
            residual,
        }
    }

    /// `(c_total, c_a, acc_a, c_b, acc_b, remaining)`.
    pub fn parts(&self) -> [f64; 6] {
        [self.c_total, self.c_a, self.acc_a, self.c_b, self.acc_b, self.remaining]
    }

    /// Every numeric field multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            measure: self.measure,
            c_total: self.c_total * factor,
            c_a: self.c_a * factor,
            c_b: self.c_b * factor,
            acc_a: self.acc_a * factor,
            acc_b: self.acc_b * factor,
            remaining: self.remaining * factor,
            residual: self.residual * factor,
        }
    }
}

/// `Σ p_i C(ρ_i) − C(Σ p_i ρ_i)` for one fixed decomposition.
pub fn ensemble_accessible_coherence(ensemble: &Ensemble, kind: MeasureKind) -> f64 {
    let avg: f64 = ensemble
        .members()
        .iter()
        .map(|(p, rho)| p * coherence(rho, kind))
        .sum();
    avg - coherence(ensemble.mixture(), kind)
}

/// Closed-form locally accessible coherence of `side`.
pub fn local_accessible_coherence(state: &BipartiteState, side: Subsystem, kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::L1 => l1_accessible(state, side),
        MeasureKind::RelativeEntropy => rel_accessible(&LocalEntropies::of(state), side),
    }
}

/// Closed-form remaining coherence.
pub fn remaining_coherence(state: &BipartiteState, kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::L1 => l1_remaining(state),
        MeasureKind::RelativeEntropy => rel_remaining(&LocalEntropies::of(state)),
    }
}

/// Full partition under `kind`. Fails with `PartitionViolation` when the
/// parts do not add up to the total within `1e-7`.
pub fn distribution_report(state: &BipartiteState, kind: MeasureKind) -> Result<DistributionReport> {
    let report = match kind {
        MeasureKind::L1 => l1_report(state),
        MeasureKind::RelativeEntropy => rel_report(&LocalEntropies::of(state)),
    };
    if !(report.residual.abs() <= PARTITION_FAULT_TOL) {
        return Err(Error::PartitionViolation {
            residual: report.residual,
        });
    }
    Ok(report)
}

/// Relative-entropy partition from precomputed entropies. Total is the
/// bilateral coherence `S_ÃB̃ − S_AB`.
pub fn rel_report(s: &LocalEntropies) -> DistributionReport {
    DistributionReport::assemble(
        MeasureKind::RelativeEntropy,
        s.joint_deph_both - s.joint,
        s.a_deph - s.a,
        s.b_deph - s.b,
        rel_accessible(s, Subsystem::A),
        rel_accessible(s, Subsystem::B),
        rel_remaining(s),
    )
}

fn rel_accessible(s: &LocalEntropies, side: Subsystem) -> f64 {
    match side {
        Subsystem::A => s.joint_deph_both - s.joint_deph_b + s.a - s.a_deph,
        Subsystem::B => s.joint_deph_both - s.joint_deph_a + s.b - s.b_deph,
    }
}

fn rel_remaining(s: &LocalEntropies) -> f64 {
    s.joint_deph_b + s.joint_deph_a - s.joint - s.joint_deph_both
}

/// Sums of entry moduli over the four index classes of `ρ_{ik,jl}`.
struct L1Classes {
    /// `i≠j, k≠l`
    cross: f64,
    /// `i≠j, k=l`: `Σ_k |ρ_{ik,jk}|`
    a_only: f64,
    /// `i=j, k≠l`
    b_only: f64,
    /// `Σ_{i≠j} |Σ_k ρ_{ik,jk}|`, i.e. `C^{l1}(ρ_A)`
    a_marginal: f64,
    b_marginal: f64,
}

impl L1Classes {
    fn of(state: &BipartiteState) -> Self {
        let (da, db) = state.dims();
        let mut out = L1Classes {
            cross: 0.0,
            a_only: 0.0,
            b_only: 0.0,
            a_marginal: 0.0,
            b_marginal: 0.0,
        };
        for i in 0..da {
            for j in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        let z = state.entry(i, k, j, l).norm();
                        match (i != j, k != l) {
                            (true, true) => out.cross += z,
                            (true, false) => out.a_only += z,
                            (false, true) => out.b_only += z,
                            (false, false) => {}
                        }
                    }
                }
            }
        }
        out.a_marginal = l1_coherence(&state.partial_trace(Subsystem::A));
        out.b_marginal = l1_coherence(&state.partial_trace(Subsystem::B));
        out
    }
}

fn l1_accessible(state: &BipartiteState, side: Subsystem) -> f64 {
    let (da, db) = state.dims();
    let mut total = 0.0;
    match side {
        Subsystem::A => {
            for i in 0..da {
                for j in (0..da).filter(|&j| j != i) {
                    let moduli: f64 = (0..db).map(|k| state.entry(i, k, j, k).norm()).sum();
                    let summed: num_complex::Complex64 = (0..db).map(|k| state.entry(i, k, j, k)).sum();
                    total += moduli - summed.norm();
                }
            }
        }
        Subsystem::B => {
            for k in 0..db {
                for l in (0..db).filter(|&l| l != k) {
                    let moduli: f64 = (0..da).map(|i| state.entry(i, k, i, l).norm()).sum();
                    let summed: num_complex::Complex64 = (0..da).map(|i| state.entry(i, k, i, l)).sum();
                    total += moduli - summed.norm();
                }
            }
        }
    }
    total
}

fn l1_remaining(state: &BipartiteState) -> f64 {
    L1Classes::of(state).cross
}

fn l1_report(state: &BipartiteState) -> DistributionReport {
    let classes = L1Classes::of(state);
    DistributionReport::assemble(
        MeasureKind::L1,
        l1_coherence(state.state()),
        classes.a_marginal,
        classes.b_marginal,
        classes.a_only - classes.a_marginal,
        classes.b_only - classes.b_marginal,
        classes.cross,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::random::{random_bipartite, random_density_matrix};
    use crate::states::{
        basis_state, bell_state, intro_example_state, minus_state, plus_state, product_state,
        DensityMatrix,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ensemble_accessible_examples() {
        let pm = Ensemble::new(vec![(0.5, plus_state()), (0.5, minus_state())]).unwrap();
        assert!(close(ensemble_accessible_coherence(&pm, MeasureKind::RelativeEntropy), 1.0, 1e-12));
        assert!(close(ensemble_accessible_coherence(&pm, MeasureKind::L1), 1.0, 1e-12));
        let single = Ensemble::new(vec![(1.0, plus_state())]).unwrap();
        for kind in MeasureKind::ALL {
            assert!(ensemble_accessible_coherence(&single, kind).abs() < 1e-12);
        }
    }

    #[test]
    fn intro_example_local_accessible() {
        let s = intro_example_state();
        for kind in MeasureKind::ALL {
            assert!(close(local_accessible_coherence(&s, Subsystem::A, kind), 1.0, 1e-12));
            assert!(local_accessible_coherence(&s, Subsystem::B, kind).abs() < 1e-12);
        }
    }

    #[test]
    fn product_states_have_nothing_accessible() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let s = product_state(&random_density_matrix(2, &mut rng), &random_density_matrix(3, &mut rng));
        for kind in MeasureKind::ALL {
            for side in [Subsystem::A, Subsystem::B] {
                assert!(local_accessible_coherence(&s, side, kind).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_matches_conditional_ensemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (da, db) in [(2, 2), (2, 3), (3, 3)] {
            for _ in 0..40 {
                let s = random_bipartite(da, db, &mut rng);
                for kind in MeasureKind::ALL {
                    for side in [Subsystem::A, Subsystem::B] {
                        let closed = local_accessible_coherence(&s, side, kind);
                        let via_ensemble =
                            ensemble_accessible_coherence(&s.conditional_ensemble(side.other()), kind);
                        assert!(close(closed, via_ensemble, 1e-9), "{kind:?} {side:?}: {closed} vs {via_ensemble}");
                        assert!(closed >= -1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn remaining_examples() {
        for kind in MeasureKind::ALL {
            assert!(close(remaining_coherence(&bell_state(), kind), 1.0, 1e-12));
            assert!(remaining_coherence(&intro_example_state(), kind).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_incoherent_has_no_remaining() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let mut mat = ComplexMatrix::zeros(6);
        for (k, w) in [0.5, 0.25, 0.25].into_iter().enumerate() {
            let term = product_state(&random_density_matrix(2, &mut rng), &basis_state(3, k));
            mat = &mat + &term.matrix().scale(w);
        }
        let s = BipartiteState::new(DensityMatrix::new(mat).unwrap(), 2, 3).unwrap();
        assert!(remaining_coherence(&s, MeasureKind::RelativeEntropy).abs() < 1e-9);
    }

    #[test]
    fn intro_example_report() {
        for kind in MeasureKind::ALL {
            let r = distribution_report(&intro_example_state(), kind).unwrap();
            let want = [1.0, 0.0, 1.0, 0.0, 0.0, 0.0];
            for (got, want) in r.parts().iter().zip(want) {
                assert!(close(*got, want, 1e-9), "{kind:?}: {:?}", r.parts());
            }
        }
    }

    #[test]
    fn l1_split_of_a_only_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let s = random_bipartite(3, 2, &mut rng);
            let classes = L1Classes::of(&s);
            let r = distribution_report(&s, MeasureKind::L1).unwrap();
            assert!(close(classes.a_only, r.c_a + r.acc_a, 1e-9));
            assert!(close(classes.b_only, r.c_b + r.acc_b, 1e-9));
        }
    }

    #[test]
    fn rel_total_is_joint_coherence() {
        use crate::measures::rel_ent_coherence;
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..50 {
            let s = random_bipartite(2, 3, &mut rng);
            let r = distribution_report(&s, MeasureKind::RelativeEntropy).unwrap();
            assert!(close(r.c_total, rel_ent_coherence(s.state()), 1e-9));
        }
    }

    #[test]
    fn scaled_report_keeps_measure() {
        let r = distribution_report(&bell_state(), MeasureKind::RelativeEntropy).unwrap();
        let n = r.scaled(std::f64::consts::LN_2);
        assert_eq!(n.measure, r.measure);
        assert!(close(n.remaining, std::f64::consts::LN_2, 1e-12));
    }
}
