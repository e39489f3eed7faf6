use super::{entropy_of_entanglement, eve_info, AttackResult, AttackScenario, ALICE, BOB};
use crate::channels::{apply_channel, dilation, effective_channel, PROBE_SIG};
use crate::error::{Error, Result};
use crate::gaussian::{apply_symplectic, condition_heterodyne, thermal, tmsv, CovMat};

/// Eve's mode coupled to the signal.
pub const E1: &str = "E1";
/// Eve's purifying mode.
pub const E2: &str = "E2";

/// Agreement required between the two routes to Eve's information.
const DUAL_TOL: f64 = 1e-7;

/// Alice and Bob's state after the channel.
pub fn output_state(sc: &AttackScenario) -> Result<CovMat> {
    apply_channel(&sc.channel, &tmsv(sc.zeta, [ALICE, BOB])?, BOB)
}

/// The global state `[A, B, E1, E2]` of the entangling cloner. Over a
/// pure-loss channel Eve's injected state is vacuum and `E2` is absent.
pub fn cloner_state(sc: &AttackScenario) -> Result<CovMat> {
    let d = dilation(&sc.channel)?;
    let alice = tmsv(sc.zeta, [ALICE, BOB])?;
    let env = if d.env_gamma == 0.0 {
        thermal(1.0, E1)?
    } else {
        d.environment([E1, E2])?
    };
    apply_symplectic(&alice.direct_sum(&env)?, &d.splitter, &[BOB, E1])
}

/// `S(AB) - S(·|x)` for the heterodyne reference of the reconciliation.
pub fn holevo_bound(sc: &AttackScenario) -> Result<f64> {
    let out = output_state(sc)?;
    let conditional = condition_heterodyne(&out, sc.reconciliation.reference_mode())?;
    Ok((out.entropy()? - conditional.entropy()?).max(0.0))
}

pub fn cloner_attack(sc: &AttackScenario) -> Result<AttackResult> {
    sc.validate()?;
    let d = dilation(&sc.channel)?;
    let state = cloner_state(sc)?;
    let info = eve_info(&state, sc)?;
    let chi = holevo_bound(sc)?;
    if (info - chi).abs() > DUAL_TOL {
        return Err(Error::Inconsistent(format!(
            "cloner information {info} differs from Holevo bound {chi}"
        )));
    }
    let sim = effective_channel(|p| d.apply_traced(p, PROBE_SIG, [E1, E2]))?;
    let residual = (sim.tau() - sc.channel.tau()).abs() + (sim.v() - sc.channel.v()).abs();
    Ok(AttackResult {
        gamma: d.env_gamma,
        ent_resource: entropy_of_entanglement(d.env_gamma)?,
        eta_star: sc.channel.tau(),
        kappa_star: 0.0,
        eve_info_bits: info,
        holevo_bits: chi,
        residual,
        feasible: true,
    })
}
