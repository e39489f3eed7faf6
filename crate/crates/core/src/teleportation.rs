//! Teleportation as a channel: closed-form effective channels of the
//! Braunstein–Kimble and all-optical protocols, and the full matrix
//! pipeline of the all-optical protocol.

use crate::channels::GaussChannel;
use crate::channels::{apply_channel, CHANNEL_TOL};
use crate::error::{domain, Error, Result};
use crate::gaussian::{
    apply_symplectic, beam_splitter, partial_trace, tmsv_entries, two_mode_squeezer, CovMat,
    TwoModeStd,
};

/// Amplifier gain standing in for `g → ∞`.
pub const ASYMPTOTIC_GAIN: f64 = 1e6;

/// Label of the resource arm fed into the amplifier.
pub const RES_IDLER: &str = "res_idler";
/// Label of the resource arm mixed in at the receiving station.
pub const RES_RECEIVER: &str = "res_receiver";

/// Symmetric two-mode resource `[[a, c, ·], [c, b], ...]` with blocks
/// `diag(a, a)`, `diag(b, b)` and `diag(c, -c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceState {
    a: f64,
    b: f64,
    c: f64,
}

impl ResourceState {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(domain("c", c, ">= 0"));
        }
        let r = Self { a, b, c };
        r.std().to_covmat(RES_IDLER, RES_RECEIVER)?;
        Ok(r)
    }

    pub(crate) fn unchecked(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn tmsv(gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(domain("gamma", gamma, "0 <= gamma < 1"));
        }
        let (a, c) = tmsv_entries(gamma);
        Ok(Self { a, b: a, c })
    }

    /// Accepts only standard forms with `c_plus = -c_minus >= 0`.
    pub fn from_std(std: &TwoModeStd) -> Result<Self> {
        if (std.c_plus + std.c_minus).abs() > 1e-12 * std.c_plus.abs().max(1.0) {
            return Err(Error::Unsupported(
                "resource with c_plus != -c_minus".to_owned(),
            ));
        }
        Self::new(std.a, std.b, std.c_plus)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    fn std(&self) -> TwoModeStd {
        TwoModeStd {
            a: self.a,
            b: self.b,
            c_plus: self.c,
            c_minus: -self.c,
        }
    }

    pub fn to_covmat(&self, idler: &str, receiver: &str) -> Result<CovMat> {
        CovMat::from_parts(self.std().matrix(), &[idler, receiver])
    }
}

/// Gain of the two-mode squeezer at the sending station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplifierGain {
    Finite(f64),
    /// Evaluated as [`ASYMPTOTIC_GAIN`].
    Asymptotic,
}

impl AmplifierGain {
    pub fn value(&self) -> f64 {
        match *self {
            AmplifierGain::Finite(g) => g,
            AmplifierGain::Asymptotic => ASYMPTOTIC_GAIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportConfig {
    pub lambda: f64,
    pub gain: AmplifierGain,
    /// The physical channel between the two stations.
    pub env: GaussChannel,
}

impl TeleportConfig {
    pub fn new(lambda: f64, gain: AmplifierGain, env: GaussChannel) -> Result<Self> {
        let cfg = Self { lambda, gain, env };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(domain("lambda", self.lambda, ">= 0"));
        }
        let g = self.gain.value();
        if !(g > 1.0) || !g.is_finite() {
            return Err(domain("g", g, "> 1"));
        }
        if g * self.env.tau() < self.lambda {
            return Err(domain("lambda", self.lambda, "<= g * tau"));
        }
        Ok(())
    }

    /// Receiver splitter transmissivity `t = λ/(gτ)`.
    pub fn splitter_transmissivity(&self) -> f64 {
        self.lambda / (self.gain.value() * self.env.tau())
    }
}

/// Standard CV teleportation channel: `(λ, aλ - 2c√λ + b)`.
pub fn bk_effective_channel(res: &ResourceState, lambda: f64) -> Result<GaussChannel> {
    if !(lambda >= 0.0) {
        return Err(domain("lambda", lambda, ">= 0"));
    }
    let v_tel = res.a * lambda - 2.0 * res.c * lambda.sqrt() + res.b;
    if lambda <= 0.0 {
        return Err(domain("lambda", lambda, "> 0 for a channel"));
    }
    if v_tel < (1.0 - lambda).abs() - CHANNEL_TOL {
        return Err(Error::UnrealizableGain { lambda, v_tel });
    }
    GaussChannel::new(lambda, v_tel.max(0.0))
}

/// Noise of the all-optical protocol, without physicality checks.
pub(crate) fn ao_noise(res: &ResourceState, lambda: f64, g: f64, env: &GaussChannel) -> f64 {
    let (a, b, c) = (res.a, res.b, res.c);
    let tau = env.tau();
    let radicand = lambda * (g - 1.0) * (g * tau - lambda) / (tau * g * g);
    a * lambda - 2.0 * c * radicand.max(0.0).sqrt() - lambda * (a * tau + b - env.v()) / (tau * g)
        + b
}

/// All-optical teleportation channel for a finite amplifier gain.
pub fn ao_effective_channel(res: &ResourceState, cfg: &TeleportConfig) -> Result<GaussChannel> {
    cfg.validate()?;
    let v_tel = ao_noise(res, cfg.lambda, cfg.gain.value(), &cfg.env);
    if cfg.lambda <= 0.0 {
        return Err(domain("lambda", cfg.lambda, "> 0 for a channel"));
    }
    if v_tel < (1.0 - cfg.lambda).abs() - CHANNEL_TOL {
        return Err(Error::UnrealizableGain {
            lambda: cfg.lambda,
            v_tel,
        });
    }
    GaussChannel::new(cfg.lambda, v_tel.max(0.0))
}

/// Full covariance-matrix run of the all-optical protocol on mode `signal`
/// of `input`: squeezer on (signal, idler), environment channel on the
/// amplified signal, splitter on (signal, receiver arm), then the idler
/// and the splitter's second output are traced out.
pub fn ao_simulate(
    input: &CovMat,
    signal: &str,
    res: &ResourceState,
    cfg: &TeleportConfig,
) -> Result<CovMat> {
    cfg.validate()?;
    input.index_of(signal)?;
    let joint = input.direct_sum(&res.to_covmat(RES_IDLER, RES_RECEIVER)?)?;
    let amplified = apply_symplectic(
        &joint,
        &two_mode_squeezer(cfg.gain.value())?,
        &[signal, RES_IDLER],
    )?;
    let decohered = apply_channel(&cfg.env, &amplified, signal)?;
    let t = cfg.splitter_transmissivity();
    let mixed = apply_symplectic(&decohered, &beam_splitter(t)?, &[signal, RES_RECEIVER])?;
    partial_trace(&mixed, input.labels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{effective_channel, PROBE_SIG};
    use approx::assert_abs_diff_eq;

    #[test]
    fn bk_with_tmsv_unit_gain() {
        for &g in &[0.1, 0.5, 0.9] {
            let ch = bk_effective_channel(&ResourceState::tmsv(g).unwrap(), 1.0).unwrap();
            assert_eq!(ch.tau(), 1.0);
            assert_abs_diff_eq!(ch.v(), 2.0 * (1.0 - g) / (1.0 + g), epsilon = 1e-12);
        }
        let near = bk_effective_channel(&ResourceState::tmsv(0.999999).unwrap(), 1.0).unwrap();
        assert!(near.v() < 1e-5);
    }

    #[test]
    fn bk_domain() {
        let vac = ResourceState::new(1.0, 1.0, 0.0).unwrap();
        // no entanglement: v = λ + 1
        assert_abs_diff_eq!(
            bk_effective_channel(&vac, 4.0).unwrap().v(),
            5.0,
            epsilon = 1e-15
        );
        assert!(bk_effective_channel(&vac, -1.0).is_err());
        assert!(bk_effective_channel(&vac, 0.0).is_err());
    }

    #[test]
    fn resource_rejects_asymmetric_signs() {
        let std = TwoModeStd {
            a: 3.0,
            b: 3.0,
            c_plus: 1.0,
            c_minus: 0.5,
        };
        assert!(matches!(
            ResourceState::from_std(&std),
            Err(Error::Unsupported(_))
        ));
        assert!(ResourceState::new(1.0, 1.0, 1.0).is_err());
        assert!(ResourceState::new(2.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn ao_at_lambda_tau_closed_form() {
        // aτ - 2c√τ(g-1)/g - (aτ + b - v)/g + b at λ = τ
        let res = ResourceState::new(3.0, 2.5, 2.0).unwrap();
        let env = GaussChannel::new(0.4, 0.8).unwrap();
        let g = 7.0;
        let cfg = TeleportConfig::new(0.4, AmplifierGain::Finite(g), env).unwrap();
        let got = ao_effective_channel(&res, &cfg).unwrap();
        let (a, b, c, tau, v) = (3.0, 2.5, 2.0, 0.4_f64, 0.8);
        let expect = a * tau - 2.0 * c * tau.sqrt() * (g - 1.0) / g - (a * tau + b - v) / g + b;
        assert_abs_diff_eq!(got.v(), expect, epsilon = 1e-12);
        assert_eq!(got.tau(), 0.4);
    }

    #[test]
    fn ao_domain_errors() {
        let env = GaussChannel::new(0.5, 0.6).unwrap();
        assert!(TeleportConfig::new(1.0, AmplifierGain::Finite(1.5), env).is_err());
        assert!(TeleportConfig::new(0.5, AmplifierGain::Finite(1.0), env).is_err());
        assert!(TeleportConfig::new(0.5, AmplifierGain::Finite(3.0), env).is_ok());
    }

    #[test]
    fn finite_gain_is_noisier_when_resource_can_simulate() {
        // at λ = τ: v_AO - v_BK = (v - v_BK)/g, non-negative whenever the
        // resource alone is quieter than the environment
        let env = GaussChannel::new(0.3, 0.75).unwrap();
        for &gamma in &[0.45, 0.5, 0.6] {
            let res = ResourceState::tmsv(gamma).unwrap();
            let bk = bk_effective_channel(&res, 0.3).unwrap().v();
            assert!(bk <= env.v());
            for &g in &[2.0, 10.0, 100.0] {
                let cfg = TeleportConfig::new(0.3, AmplifierGain::Finite(g), env).unwrap();
                let ao = ao_effective_channel(&res, &cfg).unwrap().v();
                assert!(ao >= bk - 1e-12, "g={g} gamma={gamma}: {ao} < {bk}");
                assert_abs_diff_eq!(ao - bk, (env.v() - bk) / g, epsilon = 1e-12);
                assert!(cfg.splitter_transmissivity() <= 1.0);
            }
        }
    }

    #[test]
    fn classical_teleportation_penalty() {
        let res = ResourceState::tmsv(0.0).unwrap();
        let cfg =
            TeleportConfig::new(1.0, AmplifierGain::Asymptotic, GaussChannel::identity()).unwrap();
        let ch = effective_channel(|p| ao_simulate(p, PROBE_SIG, &res, &cfg)).unwrap();
        assert_abs_diff_eq!(ch.tau(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(ch.v(), 2.0, epsilon = 1e-4);
    }

    #[test]
    fn pipeline_output_entropy_grows_with_noise() {
        let input = crate::gaussian::tmsv(0.6, ["A", "S"]).unwrap();
        let env = GaussChannel::identity();
        let mut last = 0.0;
        for &gamma in &[0.999, 0.9, 0.5, 0.0] {
            let res = ResourceState::tmsv(gamma).unwrap();
            let cfg = TeleportConfig::new(1.0, AmplifierGain::Finite(1e4), env).unwrap();
            let out = ao_simulate(&input, "S", &res, &cfg).unwrap();
            let s = out.entropy().unwrap();
            assert!(s >= last);
            last = s;
        }
    }
}
