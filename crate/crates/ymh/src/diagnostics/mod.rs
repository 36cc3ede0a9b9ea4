//! Scalar functionals and identity checks evaluated on samplers and states.

pub mod cone;
pub mod energy;
pub mod fit;
pub mod kirchhoff;
pub mod norms;

use serde::{Deserialize, Serialize};

pub use cone::{cone_energy_identity, l2_cone_bound, local_energy, supnorm_profile, ConeIdentity, ConeRule, L2ConeBound, SupRule, SupSample};
pub use fit::{decay_fit, decay_suite, DecayFit, DecaySuite, DecayWindows};
pub use kirchhoff::{scalar_lightcone_representation, LightconeRepresentation};
pub use norms::{norm_equivalence_check, stress_divergence, NormEquivalence};
pub use energy::{energy_ball, energy_cylinder, energy_density, energy_reduced_ball, sobolev_energies, BallRule, SobolevEnergies};

/// Energy split into its non-negative parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub electric: f64,
    pub magnetic: f64,
    pub pi: f64,
    pub dphi: f64,
    /// |φ|² term of the cylinder energy; zero on Minkowski.
    pub mass: f64,
    pub quartic: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn from_parts(electric: f64, magnetic: f64, pi: f64, dphi: f64, mass: f64, quartic: f64) -> Self {
        EnergyBreakdown { electric, magnetic, pi, dphi, mass, quartic, total: electric + magnetic + pi + dphi + mass + quartic }
    }

    /// Parts in declaration order, total last.
    pub fn part(&self, k: usize) -> f64 {
        [self.electric, self.magnetic, self.pi, self.dphi, self.mass, self.quartic, self.total][k]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_parts(c * self.electric, c * self.magnetic, c * self.pi, c * self.dphi, c * self.mass, c * self.quartic)
    }

    pub fn accumulate(&mut self, o: &EnergyBreakdown, w: f64) {
        *self = Self::from_parts(
            self.electric + w * o.electric,
            self.magnetic + w * o.magnetic,
            self.pi + w * o.pi,
            self.dphi + w * o.dphi,
            self.mass + w * o.mass,
            self.quartic + w * o.quartic,
        );
    }
}

/// A constant fixed once on a reference run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrozenConstant {
    pub value: f64,
    pub reference: String,
    pub measured: f64,
}

/// Constants of the inequality checks, from `constants.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrozenConstants {
    /// C in the λ ≠ 0 bound of the cone L² lemma.
    pub l2_cone_c: FrozenConstant,
    /// Upper constant in |X|²_Γ ≤ C|X|²_Γ̂ on D⁺(B(1)).
    pub norm_upper_c: FrozenConstant,
}

pub fn frozen_constants() -> FrozenConstants {
    serde_json::from_str(include_str!("../../constants.json")).expect("constants.json is well formed")
}
