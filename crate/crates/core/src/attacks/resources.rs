use std::fmt;

use crate::channels::{is_entanglement_breaking, GaussChannel};
use crate::error::{domain, Result};

/// Entanglement in ebits; a maximally entangled resource is `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entanglement {
    Finite(f64),
    Infinite,
}

impl Entanglement {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Entanglement::Finite(e) => Some(e),
            Entanglement::Infinite => None,
        }
    }
}

impl fmt::Display for Entanglement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entanglement::Finite(e) => match f.precision() {
                Some(p) => write!(f, "{e:.p$}"),
                None => write!(f, "{e}"),
            },
            Entanglement::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinSqueezing {
    pub gamma: f64,
    /// False for entanglement-breaking channels and for the identity,
    /// whose simulation needs a maximally entangled resource.
    pub feasible: bool,
}

/// Smallest resource squeezing whose teleportation reproduces `ch`:
/// `(2√τ - √((v+1-τ)(v-1+τ))) / (τ + v + 1)`.
pub fn gamma_min(ch: &GaussChannel) -> MinSqueezing {
    if is_entanglement_breaking(ch) {
        return MinSqueezing {
            gamma: 0.0,
            feasible: false,
        };
    }
    let (tau, v) = (ch.tau(), ch.v());
    let radicand = ((v + (1.0 - tau)) * (v - (1.0 - tau))).max(0.0);
    let gamma = (2.0 * tau.sqrt() - radicand.sqrt()) / (tau + v + 1.0);
    let gamma = gamma.clamp(0.0, 1.0);
    MinSqueezing {
        gamma,
        feasible: gamma < 1.0,
    }
}

/// Entanglement entropy of a two-mode squeezed vacuum, in ebits.
pub fn entropy_of_entanglement(gamma: f64) -> Result<Entanglement> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(domain("gamma", gamma, ">= 0"));
    }
    if gamma >= 1.0 {
        return Ok(Entanglement::Infinite);
    }
    if gamma == 0.0 {
        return Ok(Entanglement::Finite(0.0));
    }
    let g2 = gamma * gamma;
    let num = 2.0 * g2 * gamma.ln() + (1.0 - g2) * (1.0 - g2).ln();
    Ok(Entanglement::Finite(
        num / ((g2 - 1.0) * std::f64::consts::LN_2),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementBound {
    pub gamma_min: f64,
    pub ebits: Entanglement,
    pub feasible: bool,
}

/// Least entanglement any teleportation simulation of `ch` consumes.
pub fn entanglement_lower_bound(ch: &GaussChannel) -> Result<EntanglementBound> {
    let m = gamma_min(ch);
    Ok(EntanglementBound {
        gamma_min: m.gamma,
        ebits: entropy_of_entanglement(m.gamma)?,
        feasible: m.feasible,
    })
}
