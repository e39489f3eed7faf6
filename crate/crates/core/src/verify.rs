//! Cross-module self-check: each check measures an error against a
//! closed form or an independent second computation.

use std::fmt;

use crate::attacks::{
    ao_attack_state, ao_attack_state_compact, cloner_attack, cloner_state, entropy_of_entanglement,
    eve_info, gamma_min, holevo_bound, optimize_attack, AttackParams, AttackScenario,
};
use crate::channels::{effective_channel, GaussChannel, PROBE_SIG};
use crate::error::Result;
use crate::gaussian::{partial_trace, tmsv, CovMat};
use crate::keyrate::mutual_information;
use crate::teleportation::{
    ao_effective_channel, ao_simulate, bk_effective_channel, AmplifierGain, ResourceState,
    TeleportConfig,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {:<32} error {:.3e}  tolerance {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn baseline() -> Result<AttackScenario> {
    AttackScenario::lossy(0.25, 1.01, 0.7)
}

/// `(τ, ε)` pairs spread over `[0.1, 0.9] × [1, 1.2]`.
fn channel_grid() -> Result<Vec<GaussChannel>> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let tau = 0.1 + 0.2 * i as f64;
            let eps = 1.0 + 0.05 * j as f64;
            out.push(GaussChannel::lossy(tau, eps)?);
        }
    }
    Ok(out)
}

fn reduced_tmsv_entropy(gamma: f64) -> Result<f64> {
    partial_trace(&tmsv(gamma, ["A", "B"])?, &["A"])?.entropy()
}

fn channel_error(a: &GaussChannel, b: &GaussChannel) -> f64 {
    (a.tau() - b.tau()).abs() + (a.v() - b.v()).abs()
}

struct Physicality(f64);

impl Physicality {
    fn see(&mut self, st: &CovMat) -> Result<()> {
        self.0 = self.0.min(st.min_symplectic_eigenvalue()?);
        Ok(())
    }
}

/// Run the suite with every tolerance multiplied by `tolerance_scale`.
pub fn run_checks(tolerance_scale: f64) -> Result<Report> {
    let sc = baseline()?;
    let mut phys = Physicality(f64::INFINITY);
    let mut checks = Vec::new();
    let mut push = |name, measured: f64, tolerance: f64| {
        checks.push(Check {
            name,
            measured,
            tolerance: tolerance * tolerance_scale,
        })
    };

    let gm = gamma_min(&sc.channel).gamma;
    push(
        "gamma_min_closed_form",
        (gm - 0.4451652046870816).abs(),
        1e-6,
    );

    let mut err = 0.0_f64;
    for i in 1..=9 {
        let tau = i as f64 / 10.0;
        err = err.max((gamma_min(&GaussChannel::lossy(tau, 1.0)?).gamma - tau.sqrt()).abs());
    }
    push("gamma_min_pure_loss_sqrt_tau", err, 1e-12);

    let mut err = 0.0_f64;
    for i in 1..=9 {
        let g = i as f64 / 10.0;
        let e = entropy_of_entanglement(g)?
            .finite()
            .unwrap_or(f64::INFINITY);
        err = err.max((e - reduced_tmsv_entropy(g)?).abs());
        phys.see(&tmsv(g, ["A", "B"])?)?;
    }
    push("entanglement_entropy_oracle", err, 1e-10);

    let mut err = 0.0_f64;
    for ch in channel_grid()? {
        let res = ResourceState::tmsv(gamma_min(&ch).gamma)?;
        err = err.max(channel_error(&bk_effective_channel(&res, ch.tau())?, &ch));
    }
    push("minimal_resource_identity", err, 1e-9);

    // γ_min of the baseline channel, λ = τ
    let res = ResourceState::tmsv(gm)?;
    let bk = bk_effective_channel(&res, sc.channel.tau())?;
    let cfg = TeleportConfig::new(sc.channel.tau(), AmplifierGain::Asymptotic, sc.channel)?;
    let ao = ao_effective_channel(&res, &cfg)?;
    push("bk_ao_large_gain", (ao.v() - bk.v()).abs(), 1e-4);

    let finite = TeleportConfig::new(0.6, AmplifierGain::Finite(50.0), sc.channel)?;
    let res = ResourceState::tmsv(0.7)?;
    let mut seen = None;
    let piped = effective_channel(|p| {
        let out = ao_simulate(p, PROBE_SIG, &res, &finite)?;
        seen = Some(out.clone());
        Ok(out)
    })?;
    if let Some(out) = &seen {
        phys.see(out)?;
    }
    push(
        "ao_pipeline_vs_closed_form",
        channel_error(&piped, &ao_effective_channel(&res, &finite)?),
        1e-8,
    );

    let mut err = 0.0_f64;
    for (k, ch) in channel_grid()?.into_iter().enumerate().step_by(2) {
        let zeta = 0.2 + 0.05 * (k % 15) as f64;
        let s = AttackScenario::new(ch, zeta, sc.reconciliation, sc.gain)?;
        let st = cloner_state(&s)?;
        phys.see(&st)?;
        err = err.max((eve_info(&st, &s)? - holevo_bound(&s)?).abs());
        cloner_attack(&s)?;
    }
    push("cloner_dual_computation", err, 1e-9);

    let chi = holevo_bound(&sc)?;
    let low = optimize_attack(&sc, gm)?;
    push("anchor_low_eta", 1.0 - low.eta_star, 1e-3);
    push("anchor_low_residual", low.residual, 1e-4);
    push(
        "anchor_low_below_holevo",
        if low.eve_info_bits < chi {
            0.0
        } else {
            low.eve_info_bits - chi + f64::MIN_POSITIVE
        },
        0.0,
    );

    let high = optimize_attack(&sc, 0.9999)?;
    push(
        "anchor_high_eta",
        (high.eta_star - sc.channel.tau()).abs(),
        1e-2,
    );
    push(
        "anchor_high_kappa",
        (high.kappa_star - 0.070534).abs(),
        1e-2,
    );
    push(
        "anchor_high_holevo_fraction",
        1.0 - high.eve_info_bits / chi,
        0.02,
    );
    push(
        "holevo_dominance",
        (low.eve_info_bits - chi)
            .max(high.eve_info_bits - chi)
            .max(0.0),
        1e-6,
    );

    for r in [&low, &high] {
        let p = AttackParams::new(r.gamma, r.eta_star, r.kappa_star, sc.gain.value())?;
        phys.see(&ao_attack_state(&sc, &p)?)?;
        phys.see(&ao_attack_state_compact(&sc, &p)?)?;
    }

    push(
        "mutual_information",
        (mutual_information(&sc) - 0.309524).abs(),
        1e-6,
    );
    push("physicality", (1.0 - phys.0).max(0.0), 1e-9);

    Ok(Report { checks })
}
