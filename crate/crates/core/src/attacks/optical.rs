use super::{AttackScenario, ALICE, BOB};
use crate::channels::{dilation, effective_channel, PROBE_REF, PROBE_SIG};
use crate::error::{domain, Error, Result};
use crate::gaussian::{
    apply_symplectic, beam_splitter, condition_heterodyne, partial_trace, thermal, tmsv,
    two_mode_squeezer, CovMat, Symplectic,
};
use nalgebra::DMatrix;

/// Resource arm fed to the squeezer; Eve keeps the idler output.
pub const R1: &str = "R1";
/// Resource arm that meets `φ` on `B_η`, then the signal on `B_t`.
pub const R2: &str = "R2";
/// Arm of `φ` entering `B_η`; afterwards its second output.
pub const F1: &str = "F1";
/// Purifying arm of `φ`, absent over pure loss.
pub const F2: &str = "F2";
/// Environment of the physical channel in the dilated pipeline.
pub const N1: &str = "N1";
pub const N2: &str = "N2";

/// Eve's controls for one run of the all-optical attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParams {
    /// Resource squeezing.
    pub gamma: f64,
    /// Transmissivity of `B_η`.
    pub eta: f64,
    /// Squeezing of the auxiliary state `φ`; ignored over pure loss, where `φ` is vacuum.
    pub kappa: f64,
    /// Squeezer gain; the receiver splitter runs at `t = 1/g`.
    pub g: f64,
}

impl AttackParams {
    pub fn new(gamma: f64, eta: f64, kappa: f64, g: f64) -> Result<Self> {
        let p = Self {
            gamma,
            eta,
            kappa,
            g,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(domain("gamma", self.gamma, "0 <= gamma < 1"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(domain("eta", self.eta, "0 <= eta <= 1"));
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(domain("kappa", self.kappa, "0 <= kappa < 1"));
        }
        if !(self.g > 1.0) || !self.g.is_finite() {
            return Err(domain("g", self.g, "> 1"));
        }
        Ok(())
    }
}

enum Route {
    /// The whole network as one linear map plus added noise.
    Map { compact: bool },
    /// Operation by operation, with the channel as a beam-splitter dilation.
    Dilated,
}

/// `S_h⁻¹` with `h = 1/(1-τ)` on Eve's two amplified modes, leaving every
/// term of order `√g` in the first target and none in the second.
fn compact_frame(tau: f64) -> Result<Option<Symplectic>> {
    if tau >= 1.0 {
        return Ok(None);
    }
    Ok(Some(two_mode_squeezer(1.0 / (1.0 - tau))?.inverse()))
}

fn run(
    input: &CovMat,
    signal: &str,
    sc: &AttackScenario,
    p: &AttackParams,
    route: Route,
) -> Result<CovMat> {
    p.validate()?;
    input.index_of(signal)?;
    let phi = if sc.is_pure_loss() {
        thermal(1.0, F1)?
    } else {
        tmsv(p.kappa, [F1, F2])?
    };
    let joint = input
        .direct_sum(&tmsv(p.gamma, [R1, R2])?)?
        .direct_sum(&phi)?;
    let squeezer = two_mode_squeezer(p.g)?;
    let b_eta = beam_splitter(p.eta)?;
    let b_t = beam_splitter(1.0 / p.g)?;
    match route {
        Route::Dilated => {
            let amplified = apply_symplectic(&joint, &squeezer, &[signal, R1])?;
            let kept = amplified.labels().to_vec();
            let full = dilation(&sc.channel)?.apply(&amplified, signal, [N1, N2])?;
            let sent = partial_trace(&full, &kept)?;
            let mixed = apply_symplectic(&sent, &b_eta, &[R2, F1])?;
            apply_symplectic(&mixed, &b_t, &[signal, R2])
        }
        Route::Map { compact } => {
            let dim = 2 * joint.n_modes();
            let at = |labels: [&str; 2]| joint.indices_of(&labels);
            let k = joint.index_of(signal)?;
            let mut post = b_t.embed(&at([signal, R2])?, dim) * b_eta.embed(&at([R2, F1])?, dim);
            if compact {
                if let Some(frame) = compact_frame(sc.channel.tau())? {
                    post = frame.embed(&at([R1, R2])?, dim) * post;
                }
            }
            let st = sc.channel.tau().sqrt();
            let mut loss = DMatrix::identity(dim, dim);
            loss[(2 * k, 2 * k)] = st;
            loss[(2 * k + 1, 2 * k + 1)] = st;
            let map = &post * loss * squeezer.embed(&at([signal, R1])?, dim);
            let mut noise = DMatrix::zeros(dim, dim);
            noise[(2 * k, 2 * k)] = sc.channel.v();
            noise[(2 * k + 1, 2 * k + 1)] = sc.channel.v();
            let out = &map * joint.matrix() * map.transpose() + &post * noise * post.transpose();
            CovMat::from_parts(out, joint.labels())
        }
    }
}

/// Run the attack on mode `signal` of an arbitrary `input`. The output
/// keeps the input labels (with `signal` now Bob's mode) plus Eve's modes
/// `R1`, `R2`, `F1` and, over thermal loss, `F2`.
pub fn ao_attack_network(
    input: &CovMat,
    signal: &str,
    sc: &AttackScenario,
    p: &AttackParams,
) -> Result<CovMat> {
    run(input, signal, sc, p, Route::Map { compact: false })
}

/// The global state with Alice's two-mode squeezed vacuum as input.
pub fn ao_attack_state(sc: &AttackScenario, p: &AttackParams) -> Result<CovMat> {
    run(
        &tmsv(sc.zeta, [ALICE, BOB])?,
        BOB,
        sc,
        p,
        Route::Map { compact: false },
    )
}

/// [`ao_attack_state`] after Eve applies a fixed two-mode squeezer to `R1`
/// and `R2`. Her information is unchanged, but the large-gain terms end up
/// in one mode, which keeps the state well conditioned for `g` near 10⁶.
pub fn ao_attack_state_compact(sc: &AttackScenario, p: &AttackParams) -> Result<CovMat> {
    run(
        &tmsv(sc.zeta, [ALICE, BOB])?,
        BOB,
        sc,
        p,
        Route::Map { compact: true },
    )
}

/// Same as [`ao_attack_state`], with the physical channel realized by its
/// beam-splitter dilation on `N1`, `N2`, which are traced out afterwards.
pub fn ao_attack_state_dilated(sc: &AttackScenario, p: &AttackParams) -> Result<CovMat> {
    run(&tmsv(sc.zeta, [ALICE, BOB])?, BOB, sc, p, Route::Dilated)
}

/// Every label of `state` except Alice's and Bob's.
pub fn eve_modes(state: &CovMat) -> Vec<String> {
    state
        .labels()
        .iter()
        .filter(|l| l.as_str() != ALICE && l.as_str() != BOB)
        .cloned()
        .collect()
}

/// `S(E) - S(E|x)` with `x` the heterodyne outcome on the reference mode.
pub fn eve_info(state: &CovMat, sc: &AttackScenario) -> Result<f64> {
    state.index_of(ALICE)?;
    state.index_of(BOB)?;
    let eve = eve_modes(state);
    if eve.is_empty() {
        return Err(Error::Unsupported(
            "state has no eavesdropper modes".to_owned(),
        ));
    }
    let reference = sc.reconciliation.reference_mode();
    let mut with_ref = eve.clone();
    with_ref.push(reference.to_owned());
    let joint = partial_trace(state, &with_ref)?;
    let conditional = condition_heterodyne(&joint, reference)?;
    let marginal = partial_trace(state, &eve)?;
    Ok((marginal.entropy()? - conditional.entropy()?).max(0.0))
}

/// `|τ_eff - τ| + |v_eff - v|` of the Alice-to-Bob map the attack realizes.
pub fn simulation_residual(sc: &AttackScenario, p: &AttackParams) -> Result<f64> {
    let sim = effective_channel(|probe| {
        let out = ao_attack_network(probe, PROBE_SIG, sc, p)?;
        partial_trace(&out, &[PROBE_REF, PROBE_SIG])
    })?;
    Ok((sim.tau() - sc.channel.tau()).abs() + (sim.v() - sc.channel.v()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::{gamma_min, holevo_bound, Reconciliation};
    use crate::teleportation::ASYMPTOTIC_GAIN;
    use approx::assert_abs_diff_eq;

    fn scenario() -> AttackScenario {
        AttackScenario::lossy(0.25, 1.01, 0.7).unwrap()
    }

    #[test]
    fn labels_and_physicality() {
        let sc = scenario();
        let p = AttackParams::new(0.6, 0.4, 0.1, 50.0).unwrap();
        let st = ao_attack_state(&sc, &p).unwrap();
        assert_eq!(st.labels(), &["A", "B", "R1", "R2", "F1", "F2"]);
        assert!(st.is_physical());
        assert_eq!(eve_modes(&st), vec!["R1", "R2", "F1", "F2"]);

        let pl = AttackScenario::lossy(0.25, 1.0, 0.7).unwrap();
        let st = ao_attack_state(&pl, &p).unwrap();
        assert_eq!(st.labels(), &["A", "B", "R1", "R2", "F1"]);
    }

    #[test]
    fn dilated_matches_direct() {
        let sc = scenario();
        let p = AttackParams::new(0.7, 0.3, 0.05, 50.0).unwrap();
        let a = ao_attack_state(&sc, &p).unwrap();
        let b = ao_attack_state_dilated(&sc, &p).unwrap();
        assert_eq!(a.labels(), b.labels());
        let diff = (a.matrix() - b.matrix()).abs().max();
        assert!(diff < 1e-9, "{diff}");
    }

    #[test]
    fn compact_frame_keeps_information() {
        let sc = scenario();
        let p = AttackParams::new(0.9, 0.3, 0.05, 200.0).unwrap();
        let raw = ao_attack_state(&sc, &p).unwrap();
        let compact = ao_attack_state_compact(&sc, &p).unwrap();
        assert_abs_diff_eq!(
            eve_info(&raw, &sc).unwrap(),
            eve_info(&compact, &sc).unwrap(),
            epsilon = 1e-10
        );
        let ab = |s: &CovMat| partial_trace(s, &["A", "B"]).unwrap().matrix().clone();
        assert!((ab(&raw) - ab(&compact)).amax() < 1e-9);
        let big = AttackParams::new(0.9999, 0.25, 0.07, 1e6).unwrap();
        let st = ao_attack_state_compact(&sc, &big).unwrap();
        assert!(st.block("R2", "R2").unwrap().amax() < 1e6);
    }

    #[test]
    fn minimal_resource_simulates_channel() {
        let sc = scenario();
        let gm = gamma_min(&sc.channel).gamma;
        let p = AttackParams::new(gm, 1.0, 0.0, ASYMPTOTIC_GAIN).unwrap();
        let r = simulation_residual(&sc, &p).unwrap();
        assert!(r <= 1e-6, "{r}");
    }

    #[test]
    fn large_resource_anchor_simulates_channel() {
        let sc = scenario();
        let kappa = (0.01_f64 / 2.01).sqrt();
        let p = AttackParams::new(0.9999, 0.25, kappa, ASYMPTOTIC_GAIN).unwrap();
        let r = simulation_residual(&sc, &p).unwrap();
        assert!(r <= 1e-4, "{r}");
    }

    #[test]
    fn mismatched_parameters_leave_residual() {
        let sc = scenario();
        let p = AttackParams::new(0.3, 0.6, 0.4, 20.0).unwrap();
        assert!(simulation_residual(&sc, &p).unwrap() > 1e-3);
    }

    #[test]
    fn product_eve_has_no_information() {
        let sc = scenario();
        let ab = crate::attacks::output_state(&sc).unwrap();
        let st = ab.direct_sum(&tmsv(0.4, ["X", "Y"]).unwrap()).unwrap();
        assert_abs_diff_eq!(eve_info(&st, &sc).unwrap(), 0.0, epsilon = 1e-12);
        assert!(eve_info(&ab, &sc).is_err());
    }

    #[test]
    fn anchor_info_stays_below_holevo() {
        let kappa = (0.01_f64 / 2.01).sqrt();
        for rec in [Reconciliation::Reverse, Reconciliation::Direct] {
            let sc = scenario().with_reconciliation(rec);
            let chi = holevo_bound(&sc).unwrap();
            let p = AttackParams::new(0.9999, 0.25, kappa, ASYMPTOTIC_GAIN).unwrap();
            let info = eve_info(&ao_attack_state(&sc, &p).unwrap(), &sc).unwrap();
            // κ is the rounded anchor, so the channel only matches to ~1e-4
            assert!(info <= chi + 1e-4, "{info} > {chi}");
            assert!(info > 0.9 * chi, "{info} vs {chi}");
        }
    }

    #[test]
    fn parameter_domains() {
        assert!(AttackParams::new(1.0, 0.5, 0.0, 10.0).is_err());
        assert!(AttackParams::new(0.5, 1.5, 0.0, 10.0).is_err());
        assert!(AttackParams::new(0.5, 0.5, 1.0, 10.0).is_err());
        assert!(AttackParams::new(0.5, 0.5, 0.0, 1.0).is_err());
    }
}
