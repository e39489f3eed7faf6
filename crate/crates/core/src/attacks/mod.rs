//! Eavesdropping attacks on a Gaussian entanglement-based protocol with
//! heterodyne detection: the entangling cloner, where Eve owns the
//! environment, and the all-optical teleportation attack, where the
//! physical channel stays out of her reach and she is limited by the
//! entanglement of her resource.

mod cloner;
mod optical;
mod optimize;
mod resources;

use crate::channels::{classify, is_entanglement_breaking, ChannelKind, GaussChannel};
use crate::error::{domain, Error, Result};
use crate::teleportation::AmplifierGain;

pub use cloner::{cloner_attack, cloner_state, holevo_bound, output_state};
pub use optical::{
    ao_attack_network, ao_attack_state, ao_attack_state_compact, ao_attack_state_dilated, eve_info,
    eve_modes, simulation_residual, AttackParams,
};
pub use optimize::{optimize_attack, optimize_attack_with, OptimizerSettings};
pub use resources::{
    entanglement_lower_bound, entropy_of_entanglement, gamma_min, Entanglement, EntanglementBound,
    MinSqueezing,
};

/// Alice's retained mode.
pub const ALICE: &str = "A";
/// The signal mode; after the channel it is Bob's mode.
pub const BOB: &str = "B";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reconciliation {
    /// Alice's data is the reference.
    Direct,
    /// Bob's data is the reference.
    Reverse,
}

impl Reconciliation {
    /// The mode whose heterodyne outcome is the reference variable.
    pub fn reference_mode(&self) -> &'static str {
        match self {
            Reconciliation::Direct => ALICE,
            Reconciliation::Reverse => BOB,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detection {
    Heterodyne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackScenario {
    pub channel: GaussChannel,
    /// Squeezing of Alice's two-mode squeezed vacuum.
    pub zeta: f64,
    pub detection: Detection,
    pub reconciliation: Reconciliation,
    pub gain: AmplifierGain,
}

impl AttackScenario {
    pub fn new(
        channel: GaussChannel,
        zeta: f64,
        reconciliation: Reconciliation,
        gain: AmplifierGain,
    ) -> Result<Self> {
        let sc = Self {
            channel,
            zeta,
            detection: Detection::Heterodyne,
            reconciliation,
            gain,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Thermal-loss channel `tau`, `epsilon`, heterodyne, reverse
    /// reconciliation, asymptotic gain.
    pub fn lossy(tau: f64, epsilon: f64, zeta: f64) -> Result<Self> {
        Self::new(
            GaussChannel::lossy(tau, epsilon)?,
            zeta,
            Reconciliation::Reverse,
            AmplifierGain::Asymptotic,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.zeta) {
            return Err(domain("zeta", self.zeta, "0 <= zeta < 1"));
        }
        match classify(&self.channel) {
            ChannelKind::PureLoss | ChannelKind::ThermalLoss | ChannelKind::Identity => {}
            kind => {
                return Err(Error::Unsupported(format!(
                    "attack scenario over a {kind} channel"
                )))
            }
        }
        if is_entanglement_breaking(&self.channel) {
            return Err(Error::Unsupported(
                "entanglement-breaking channel".to_owned(),
            ));
        }
        if let AmplifierGain::Finite(g) = self.gain {
            if !(g > 1.0) || !g.is_finite() {
                return Err(domain("g", g, "> 1"));
            }
        }
        Ok(())
    }

    pub fn with_reconciliation(mut self, reconciliation: Reconciliation) -> Self {
        self.reconciliation = reconciliation;
        self
    }

    pub fn with_gain(mut self, gain: AmplifierGain) -> Self {
        self.gain = gain;
        self
    }

    pub fn is_pure_loss(&self) -> bool {
        classify(&self.channel) == ChannelKind::PureLoss
    }
}

/// Outcome of an attack evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackResult {
    /// Squeezing of Eve's entanglement resource.
    pub gamma: f64,
    pub ent_resource: Entanglement,
    pub eta_star: f64,
    pub kappa_star: f64,
    /// `S(x:E)` in bits.
    pub eve_info_bits: f64,
    /// `χ` in bits.
    pub holevo_bits: f64,
    /// `|τ_eff - τ| + |v_eff - v|`, or the distance to feasibility when infeasible.
    pub residual: f64,
    pub feasible: bool,
}

/// Threshold on [`AttackResult::residual`] for a feasible result.
pub fn residual_tolerance(gain: AmplifierGain) -> f64 {
    match gain {
        AmplifierGain::Finite(_) => 1e-8,
        AmplifierGain::Asymptotic => 1e-4,
    }
}
