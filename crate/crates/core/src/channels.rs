//! Phase-insensitive single-mode Gaussian channels `(tau, v)`.
//!
//! A channel maps the covariance block of its target mode `σ_m → τ σ_m + v I`
//! and scales every cross block involving that mode by `√τ`.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};
use crate::gaussian::{apply_symplectic, beam_splitter, partial_trace, tmsv, CovMat, Symplectic};

/// Slack allowed on `v >= |1 - tau|` at construction.
pub const CHANNEL_TOL: f64 = 1e-9;
/// Tolerance on the boundary equalities used by [`classify`].
pub const CLASSIFY_TOL: f64 = 1e-12;
/// Allowed x/p asymmetry in [`effective_channel`].
pub const SYMMETRY_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussChannel {
    tau: f64,
    v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    PureLoss,
    ThermalLoss,
    PureAmplifier,
    ThermalAmplifier,
    AdditiveNoise,
    Identity,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChannelKind::PureLoss => "pure loss",
            ChannelKind::ThermalLoss => "thermal loss",
            ChannelKind::PureAmplifier => "pure amplifier",
            ChannelKind::ThermalAmplifier => "thermal amplifier",
            ChannelKind::AdditiveNoise => "additive noise",
            ChannelKind::Identity => "identity",
        };
        f.write_str(s)
    }
}

impl GaussChannel {
    pub fn new(tau: f64, v: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(domain("tau", tau, "> 0"));
        }
        if !(v >= 0.0) || !v.is_finite() {
            return Err(domain("v", v, ">= 0"));
        }
        if v < (1.0 - tau).abs() - CHANNEL_TOL {
            return Err(Error::UnphysicalChannel { tau, v });
        }
        Ok(Self { tau, v })
    }

    /// Lossy channel with `v = (1 - tau) epsilon`.
    pub fn lossy(tau: f64, epsilon: f64) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(domain("tau", tau, "0 < tau < 1"));
        }
        if !(epsilon >= 1.0) {
            return Err(domain("epsilon", epsilon, ">= 1"));
        }
        Self::new(tau, (1.0 - tau) * epsilon)
    }

    /// Amplifier with gain `tau > 1` and `v = (tau - 1) epsilon`.
    pub fn amplifier(tau: f64, epsilon: f64) -> Result<Self> {
        if !(tau > 1.0) {
            return Err(domain("tau", tau, "> 1"));
        }
        if !(epsilon >= 1.0) {
            return Err(domain("epsilon", epsilon, ">= 1"));
        }
        Self::new(tau, (tau - 1.0) * epsilon)
    }

    pub fn identity() -> Self {
        Self { tau: 1.0, v: 0.0 }
    }

    pub fn additive(v: f64) -> Result<Self> {
        Self::new(1.0, v)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Thermal noise `epsilon = v / |1 - tau|`; `None` when `tau = 1`.
    pub fn epsilon(&self) -> Option<f64> {
        let d = (1.0 - self.tau).abs();
        (d > CLASSIFY_TOL).then(|| self.v / d)
    }

    pub fn kind(&self) -> ChannelKind {
        classify(self)
    }

    /// `(τ₂τ₁, τ₂v₁ + v₂)`: `self` followed by `next`.
    pub fn then(&self, next: &GaussChannel) -> Result<GaussChannel> {
        GaussChannel::new(next.tau * self.tau, next.tau * self.v + next.v)
    }
}

pub fn classify(ch: &GaussChannel) -> ChannelKind {
    let (tau, v) = (ch.tau, ch.v);
    if (tau - 1.0).abs() <= CLASSIFY_TOL {
        if v <= CLASSIFY_TOL {
            ChannelKind::Identity
        } else {
            ChannelKind::AdditiveNoise
        }
    } else if tau < 1.0 {
        if (v - (1.0 - tau)).abs() <= CLASSIFY_TOL {
            ChannelKind::PureLoss
        } else {
            ChannelKind::ThermalLoss
        }
    } else if (v - (tau - 1.0)).abs() <= CLASSIFY_TOL {
        ChannelKind::PureAmplifier
    } else {
        ChannelKind::ThermalAmplifier
    }
}

/// `v >= 1 + tau`, the point where the minimal teleportation resource
/// squeezing reaches zero.
pub fn is_entanglement_breaking(ch: &GaussChannel) -> bool {
    ch.v >= 1.0 + ch.tau - CLASSIFY_TOL
}

/// Send mode `target` of `state` through `ch`.
pub fn apply_channel(ch: &GaussChannel, state: &CovMat, target: &str) -> Result<CovMat> {
    let k = state.index_of(target)?;
    let s = state.matrix();
    let dim = s.nrows();
    let st = ch.tau.sqrt();
    let scale = |i: usize| if i / 2 == k { st } else { 1.0 };
    let mut out = DMatrix::from_fn(dim, dim, |i, j| scale(i) * scale(j) * s[(i, j)]);
    out[(2 * k, 2 * k)] += ch.v;
    out[(2 * k + 1, 2 * k + 1)] += ch.v;
    Ok(CovMat::raw(out, state.labels().to_vec()))
}

/// Beam-splitter realization of a lossy channel: the signal is mixed at
/// transmissivity `tau` with one arm of a two-mode squeezed vacuum whose
/// reduced variance is `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub splitter: Symplectic,
    /// Squeezing of the purified thermal environment.
    pub env_gamma: f64,
}

pub fn dilation(ch: &GaussChannel) -> Result<Dilation> {
    let eps = match classify(ch) {
        ChannelKind::PureLoss | ChannelKind::ThermalLoss => (ch.v / (1.0 - ch.tau)).max(1.0),
        // limit of the lossy family: a fully transmitting splitter
        ChannelKind::Identity => 1.0,
        kind => return Err(Error::Unsupported(format!("dilation of a {kind} channel"))),
    };
    let env_gamma = ((eps - 1.0) / (eps + 1.0)).sqrt();
    Ok(Dilation {
        splitter: beam_splitter(ch.tau)?,
        env_gamma,
    })
}

impl Dilation {
    /// The environment state `tmsv(env_gamma)` on `env = [coupled, purifier]`.
    pub fn environment(&self, env: [&str; 2]) -> Result<CovMat> {
        tmsv(self.env_gamma, env)
    }

    /// Append the environment and couple its first mode to `target`.
    /// After the splitter `target` carries the channel output and `env[0]`
    /// the reflected port.
    pub fn apply(&self, state: &CovMat, target: &str, env: [&str; 2]) -> Result<CovMat> {
        let joint = state.direct_sum(&self.environment(env)?)?;
        apply_symplectic(&joint, &self.splitter, &[target, env[0]])
    }

    /// [`Dilation::apply`] followed by tracing out the environment.
    pub fn apply_traced(&self, state: &CovMat, target: &str, env: [&str; 2]) -> Result<CovMat> {
        let full = self.apply(state, target, env)?;
        partial_trace(&full, state.labels())
    }
}

/// Reference label of the probe passed to [`effective_channel`] black boxes.
pub const PROBE_REF: &str = "probe_ref";
/// Label of the probe mode the black box acts on (and returns its output under).
pub const PROBE_SIG: &str = "probe_sig";
const PROBE_GAMMA: f64 = 0.5;

/// Recover `(tau, v)` of a black-box single-mode map by sending one arm
/// of a two-mode squeezed probe through it.
///
/// The black box receives a state labeled `[PROBE_REF, PROBE_SIG]` and
/// must return a state that still contains `PROBE_REF` and carries the
/// output mode under `PROBE_SIG`.
pub fn effective_channel<F>(black_box: F) -> Result<GaussChannel>
where
    F: FnOnce(&CovMat) -> Result<CovMat>,
{
    let probe = tmsv(PROBE_GAMMA, [PROBE_REF, PROBE_SIG])?;
    let out = black_box(&probe)?;
    channel_from_io(&probe, PROBE_SIG, &out, PROBE_SIG, PROBE_REF)
}

/// Extract `(tau, v)` mapping mode `input_mode` of `input` to `output_mode`
/// of `output`, using the correlations of both with the untouched
/// `reference` mode.
pub fn channel_from_io(
    input: &CovMat,
    input_mode: &str,
    output: &CovMat,
    output_mode: &str,
    reference: &str,
) -> Result<GaussChannel> {
    let a_in = input.block(input_mode, input_mode)?;
    let c_in = input.block(reference, input_mode)?;
    let b_out = output.block(output_mode, output_mode)?;
    let c_out = output.block(reference, output_mode)?;

    let mut tau = [0.0; 2];
    let mut v = [0.0; 2];
    let mut ratio = [0.0; 2];
    for q in 0..2 {
        if c_in[(q, q)].abs() < 1e-12 {
            return Err(Error::NotPhaseInsensitive(
                "reference is uncorrelated with the probe".to_owned(),
            ));
        }
        ratio[q] = c_out[(q, q)] / c_in[(q, q)];
        tau[q] = ratio[q] * ratio[q];
        v[q] = b_out[(q, q)] - tau[q] * a_in[(q, q)];
    }
    let tol = |x: f64| SYMMETRY_CHECK_TOL * x.abs().max(1.0);
    if (ratio[0] - ratio[1]).abs() > tol(ratio[0]) {
        return Err(Error::NotPhaseInsensitive(format!(
            "cross-block scaling differs between quadratures ({} vs {})",
            ratio[0], ratio[1]
        )));
    }
    if (v[0] - v[1]).abs() > tol(v[0]) {
        return Err(Error::NotPhaseInsensitive(format!(
            "added noise differs between quadratures ({} vs {})",
            v[0], v[1]
        )));
    }
    let off = b_out[(0, 1)]
        .abs()
        .max(c_out[(0, 1)].abs())
        .max(c_out[(1, 0)].abs());
    if off > tol(b_out[(0, 0)]) {
        return Err(Error::NotPhaseInsensitive(format!(
            "output has x-p correlations ({off:e})"
        )));
    }
    GaussChannel::new(0.5 * (tau[0] + tau[1]), (0.5 * (v[0] + v[1])).max(0.0))
}
