//! Coherence quantifiers in the reference (computational) basis.

use serde::{Deserialize, Serialize};

use crate::states::{BipartiteState, DensityMatrix, MeasurementSide};

/// Off-diagonal modulus at or below this counts as diagonal.
pub const DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "relative_entropy")]
    RelativeEntropy,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 2] = [MeasureKind::L1, MeasureKind::RelativeEntropy];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::L1 => "l1",
            MeasureKind::RelativeEntropy => "relative_entropy",
        }
    }

    /// Whether values under this measure carry entropy units.
    pub fn is_entropic(self) -> bool {
        matches!(self, MeasureKind::RelativeEntropy)
    }
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// `S(ρ_d) − S(ρ)` in bits.
pub fn rel_ent_coherence(rho: &DensityMatrix) -> f64 {
    rho.dephase().entropy() - rho.entropy()
}

pub fn coherence(rho: &DensityMatrix, kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::L1 => l1_coherence(rho),
        MeasureKind::RelativeEntropy => rel_ent_coherence(rho),
    }
}

/// Whether every off-diagonal entry has modulus `≤ 1e-12`.
pub fn is_incoherent(rho: &DensityMatrix) -> bool {
    let m = rho.matrix();
    let n = m.dim();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= DIAGONAL_TOL))
}

/// Unilateral (`OnA`, `OnB`) or bilateral (`Both`) relative-entropy coherence:
/// the entropy increase of the joint state under the chosen local dephasing.
pub fn bipartite_rel_coherence(state: &BipartiteState, side: MeasurementSide) -> f64 {
    state.dephase_side(side).state().entropy() - state.state().entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::random::{random_bipartite, random_density_matrix, random_ensemble};
    use crate::states::{
        basis_state, bell_state, intro_example_state, plus_state, product_state, relative_entropy,
        BipartiteState, Subsystem,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn l1_examples() {
        assert!((l1_coherence(&plus_state()) - 1.0).abs() < 1e-15);
        let d = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.5])).unwrap();
        assert_eq!(l1_coherence(&d), 0.0);
        assert!(is_incoherent(&d));
        assert!(!is_incoherent(&plus_state()));
        assert!((l1_coherence(intro_example_state().state()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rel_ent_examples() {
        assert!((rel_ent_coherence(&plus_state()) - 1.0).abs() < 1e-12);
        assert!((rel_ent_coherence(bell_state().state()) - 1.0).abs() < 1e-12);
        let d = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.2, 0.8])).unwrap();
        assert!(rel_ent_coherence(&d).abs() < 1e-15);
    }

    #[test]
    fn rel_ent_equals_relative_entropy_to_dephased() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 3, 4] {
            for _ in 0..50 {
                let rho = random_density_matrix(dim, &mut rng);
                let closed = rel_ent_coherence(&rho);
                let divergence = relative_entropy(&rho, &rho.dephase()).unwrap();
                assert!((closed - divergence).abs() < 1e-9);
                assert!(closed >= -1e-9);
            }
        }
    }

    #[test]
    fn bilateral_is_full_dephasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (da, db) in [(2, 2), (2, 3), (3, 2)] {
            let s = random_bipartite(da, db, &mut rng);
            let both = bipartite_rel_coherence(&s, MeasurementSide::Both);
            assert!((both - rel_ent_coherence(s.state())).abs() < 1e-12);
            for side in [MeasurementSide::OnA, MeasurementSide::OnB] {
                assert!(bipartite_rel_coherence(&s, side) >= -1e-9);
            }
        }
    }

    #[test]
    fn quantum_incoherent_has_no_right_coherence() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut mat = ComplexMatrix::zeros(6);
        for (k, w) in [0.2, 0.3, 0.5].into_iter().enumerate() {
            let a = random_density_matrix(2, &mut rng).dephase();
            let term = product_state(&a, &basis_state(3, k));
            mat = &mat + &term.matrix().scale(w);
        }
        let s = BipartiteState::new(DensityMatrix::new(mat).unwrap(), 2, 3).unwrap();
        assert!(bipartite_rel_coherence(&s, MeasurementSide::OnB).abs() < 1e-9);
    }

    #[test]
    fn incoherent_product_is_zero() {
        let a = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25, 0.75])).unwrap();
        let b = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.6, 0.4])).unwrap();
        let s = product_state(&a, &b);
        for side in [MeasurementSide::OnA, MeasurementSide::OnB, MeasurementSide::Both] {
            assert!(bipartite_rel_coherence(&s, side).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_never_increases_coherence() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let e = random_ensemble(3, 3, &mut rng);
            for kind in MeasureKind::ALL {
                let avg: f64 = e.members().iter().map(|(p, r)| p * coherence(r, kind)).sum();
                assert!(coherence(e.mixture(), kind) <= avg + 1e-9);
            }
        }
    }

    #[test]
    fn unilateral_identities() {
        use crate::correlations::discord;
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let s = random_bipartite(2, 3, &mut rng);
            let left = bipartite_rel_coherence(&s, MeasurementSide::OnB);
            let rhs = rel_ent_coherence(&s.partial_trace(Subsystem::B)) + discord(&s, MeasurementSide::OnB);
            assert!((left - rhs).abs() < 1e-9);
            let right = bipartite_rel_coherence(&s, MeasurementSide::OnA);
            let rhs = rel_ent_coherence(&s.partial_trace(Subsystem::A)) + discord(&s, MeasurementSide::OnA);
            assert!((right - rhs).abs() < 1e-9);
        }
    }
}
