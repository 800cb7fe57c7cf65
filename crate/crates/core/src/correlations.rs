//! Reference-basis discord, classical correlations, mutual information and
//! Holevo quantities.
//!
//! Discord here is not optimized over measurement bases: the local
//! measurement is always the reference-basis projective measurement.

use serde::Serialize;

use crate::states::{BipartiteState, Ensemble, MeasurementSide, Subsystem};

/// The eight entropies every discord and coherence formula in this crate is
/// built from. A tilde means the party was dephased in the reference basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalEntropies {
    /// `S_AB`
    pub joint: f64,
    /// `S_ÃB`
    pub joint_deph_a: f64,
    /// `S_AB̃`
    pub joint_deph_b: f64,
    /// `S_ÃB̃`
    pub joint_deph_both: f64,
    /// `S_A`
    pub a: f64,
    /// `S_B`
    pub b: f64,
    /// `S_Ã`
    pub a_deph: f64,
    /// `S_B̃`
    pub b_deph: f64,
}

impl LocalEntropies {
    pub fn of(state: &BipartiteState) -> Self {
        let rho_a = state.partial_trace(Subsystem::A);
        let rho_b = state.partial_trace(Subsystem::B);
        Self {
            joint: state.state().entropy(),
            joint_deph_a: state.dephase_side(MeasurementSide::OnA).state().entropy(),
            joint_deph_b: state.dephase_side(MeasurementSide::OnB).state().entropy(),
            joint_deph_both: state.dephase_side(MeasurementSide::Both).state().entropy(),
            a: rho_a.entropy(),
            b: rho_b.entropy(),
            a_deph: rho_a.dephase().entropy(),
            b_deph: rho_b.dephase().entropy(),
        }
    }

    /// `I_AB = S_A + S_B − S_AB`.
    pub fn mutual_information(&self) -> f64 {
        self.a + self.b - self.joint
    }

    /// Mutual information left after measuring `side`.
    pub fn measured_mutual_information(&self, side: MeasurementSide) -> f64 {
        match side {
            MeasurementSide::OnA => self.a_deph + self.b - self.joint_deph_a,
            MeasurementSide::OnB => self.a + self.b_deph - self.joint_deph_b,
            MeasurementSide::Both => self.a_deph + self.b_deph - self.joint_deph_both,
        }
    }

    pub fn discord(&self, side: MeasurementSide) -> f64 {
        self.mutual_information() - self.measured_mutual_information(side)
    }
}

/// Mutual information, the three reference-basis discords and the two
/// classical correlations, all in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordReport {
    pub mutual_info: f64,
    /// `D^←`, measurement on B.
    pub discord_left: f64,
    /// `D^→`, measurement on A.
    pub discord_right: f64,
    /// `D^↔`, measurement on both.
    pub discord_both: f64,
    /// `I_{AB̃}`
    pub classical_left: f64,
    /// `I_{ÃB̃}`
    pub classical_both: f64,
}

impl DiscordReport {
    pub fn of(state: &BipartiteState) -> Self {
        Self::from_entropies(&LocalEntropies::of(state))
    }

    pub fn from_entropies(s: &LocalEntropies) -> Self {
        Self {
            mutual_info: s.mutual_information(),
            discord_left: s.discord(MeasurementSide::OnB),
            discord_right: s.discord(MeasurementSide::OnA),
            discord_both: s.discord(MeasurementSide::Both),
            classical_left: s.measured_mutual_information(MeasurementSide::OnB),
            classical_both: s.measured_mutual_information(MeasurementSide::Both),
        }
    }

    /// Every field multiplied by `factor` (unit change).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            mutual_info: self.mutual_info * factor,
            discord_left: self.discord_left * factor,
            discord_right: self.discord_right * factor,
            discord_both: self.discord_both * factor,
            classical_left: self.classical_left * factor,
            classical_both: self.classical_both * factor,
        }
    }
}

pub fn mutual_information(state: &BipartiteState) -> f64 {
    let s_a = state.partial_trace(Subsystem::A).entropy();
    let s_b = state.partial_trace(Subsystem::B).entropy();
    s_a + s_b - state.state().entropy()
}

/// `I_AB − I` after the reference-basis measurement on `side`.
pub fn discord(state: &BipartiteState, side: MeasurementSide) -> f64 {
    LocalEntropies::of(state).discord(side)
}

/// Which classical correlation: `Left` is `I_{AB̃}`, `Both` is `I_{ÃB̃}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalSide {
    Left,
    Both,
}

/// Classical correlation computed as a Holevo quantity of A's conditional
/// ensemble obtained by measuring B.
pub fn classical_correlation(state: &BipartiteState, side: ClassicalSide) -> f64 {
    let ensemble = state.conditional_ensemble(Subsystem::B);
    match side {
        ClassicalSide::Left => holevo(&ensemble),
        ClassicalSide::Both => dephased_holevo(&ensemble),
    }
}

/// `χ = S(ρ) − Σ p_i S(ρ_i)`.
pub fn holevo(ensemble: &Ensemble) -> f64 {
    let avg: f64 = ensemble.members().iter().map(|(p, rho)| p * rho.entropy()).sum();
    ensemble.mixture().entropy() - avg
}

/// Holevo quantity after every member passes through the dephasing channel.
pub fn dephased_holevo(ensemble: &Ensemble) -> f64 {
    let avg: f64 = ensemble
        .members()
        .iter()
        .map(|(p, rho)| p * rho.dephase().entropy())
        .sum();
    ensemble.mixture().dephase().entropy() - avg
}
