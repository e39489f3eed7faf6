use super::{
    ao_attack_state_compact, entropy_of_entanglement, eve_info, gamma_min, holevo_bound,
    residual_tolerance, simulation_residual, AttackParams, AttackResult, AttackScenario,
};
use crate::error::{domain, Result};
use crate::gaussian::tmsv_entries;
use crate::teleportation::{ao_noise, ResourceState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    /// Points of the coarse `η` scan.
    pub grid_points: usize,
    /// Bisection tolerance on `v_eff` when solving for `κ`.
    pub kappa_tol: f64,
    /// Width at which golden-section searches stop.
    pub eta_tol: f64,
    /// Lower end of the admissible `η` range, as a fraction of `τ`.
    pub eta_floor_factor: f64,
    /// `|v_eff(η_m) - v|` below which the feasible set is one point.
    pub touch_tol: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_points: 201,
            kappa_tol: 1e-10,
            eta_tol: 1e-9,
            eta_floor_factor: 0.8,
            touch_tol: 1e-8,
        }
    }
}

/// Closed-form noise of the attack map at `λ = τ`: the resource as seen
/// by the receiver splitter has arms `a_γ` and `η a_γ + (1-η) a_κ` with
/// correlation `√η c_γ`.
struct NoiseModel {
    tau: f64,
    v: f64,
    g: f64,
    a_gamma: f64,
    c_gamma: f64,
    sc: AttackScenario,
}

impl NoiseModel {
    fn new(sc: &AttackScenario, gamma: f64) -> Self {
        let (a_gamma, c_gamma) = tmsv_entries(gamma);
        Self {
            tau: sc.channel.tau(),
            v: sc.channel.v(),
            g: sc.gain.value(),
            a_gamma,
            c_gamma,
            sc: *sc,
        }
    }

    fn v_eff(&self, eta: f64, kappa: f64) -> f64 {
        let (a_kappa, _) = tmsv_entries(kappa);
        let res = ResourceState::unchecked(
            self.a_gamma,
            eta * self.a_gamma + (1.0 - eta) * a_kappa,
            eta.sqrt() * self.c_gamma,
        );
        ao_noise(&res, self.tau, self.g, &self.sc.channel)
    }

    /// `v_eff - v` with vacuum `φ`.
    fn gap(&self, eta: f64) -> f64 {
        self.v_eff(eta, 0.0) - self.v
    }

    /// `κ` with `v_eff(η, κ) = v`, given `gap(η) <= 0`.
    fn solve_kappa(&self, eta: f64, tol: f64) -> f64 {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        // v_eff grows without bound as κ → 1
        while hi - lo > 1e-16 {
            let mid = 0.5 * (lo + hi);
            let d = self.v_eff(eta, mid) - self.v;
            if d.abs() <= tol {
                return mid;
            }
            if d < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
fn golden_min(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Boundary of `{gap <= 0}` between `inside` (gap <= 0) and `outside`.
fn bisect_edge(m: &NoiseModel, mut inside: f64, mut outside: f64, tol: f64) -> f64 {
    while (outside - inside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if m.gap(mid) <= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

pub fn optimize_attack(sc: &AttackScenario, gamma: f64) -> Result<AttackResult> {
    optimize_attack_with(sc, gamma, &OptimizerSettings::default())
}

/// Maximize Eve's information over the `(η, κ)` pairs that reproduce the
/// channel, for a resource of squeezing `gamma`.
pub fn optimize_attack_with(
    sc: &AttackScenario,
    gamma: f64,
    settings: &OptimizerSettings,
) -> Result<AttackResult> {
    sc.validate()?;
    if !(0.0..1.0).contains(&gamma) {
        return Err(domain("gamma", gamma, "0 <= gamma < 1"));
    }
    if settings.grid_points < 3 {
        return Err(domain("grid_points", settings.grid_points as f64, ">= 3"));
    }
    let g = sc.gain.value();
    let chi = holevo_bound(sc)?;
    let ent = entropy_of_entanglement(gamma)?;
    let tau = sc.channel.tau();
    let infeasible = |distance: f64| AttackResult {
        gamma,
        ent_resource: ent,
        eta_star: 0.0,
        kappa_star: 0.0,
        eve_info_bits: 0.0,
        holevo_bits: chi,
        residual: distance,
        feasible: false,
    };
    let evaluate = |eta: f64, kappa: f64| -> Result<(f64, f64)> {
        let p = AttackParams::new(gamma, eta, kappa, g)?;
        let info = eve_info(&ao_attack_state_compact(sc, &p)?, sc)?;
        let residual = simulation_residual(sc, &p)?;
        Ok((info, residual))
    };
    let finish = |eta: f64, kappa: f64| -> Result<AttackResult> {
        let (info, residual) = evaluate(eta, kappa)?;
        Ok(AttackResult {
            gamma,
            ent_resource: ent,
            eta_star: eta,
            kappa_star: kappa,
            eve_info_bits: info,
            holevo_bits: chi,
            residual,
            feasible: residual <= residual_tolerance(sc.gain),
        })
    };

    let gmin = gamma_min(&sc.channel).gamma;
    if sc.is_pure_loss() {
        if gamma < gmin - 1e-9 {
            return Ok(infeasible(gmin - gamma));
        }
        let eta = (tau / (gamma * gamma)).min(1.0);
        return finish(eta, 0.0);
    }

    let model = NoiseModel::new(sc, gamma);
    let floor = (settings.eta_floor_factor * tau).max(1e-4);
    let (eta_m, gap_m) = golden_min(|e| model.gap(e), floor, 1.0, settings.eta_tol);
    if gap_m > settings.touch_tol {
        return Ok(infeasible(gap_m));
    }
    if gap_m >= -settings.touch_tol {
        return finish(eta_m, 0.0);
    }

    let edge_tol = 1e-13;
    let eta_lo = if model.gap(floor) <= 0.0 {
        floor
    } else {
        bisect_edge(&model, eta_m, floor, edge_tol)
    };
    // η = 1 leaves no room for added noise unless the gap closes exactly
    let (eta_hi, include_hi) = if model.gap(1.0) < -settings.touch_tol {
        (1.0, false)
    } else {
        (bisect_edge(&model, eta_m, 1.0, edge_tol), true)
    };

    let n = settings.grid_points;
    let steps = if include_hi { n - 1 } else { n };
    let grid: Vec<f64> = (0..n)
        .map(|i| eta_lo + (eta_hi - eta_lo) * i as f64 / steps as f64)
        .collect();
    let objective = |eta: f64| -> Result<(f64, f64)> {
        let kappa = model.solve_kappa(eta, settings.kappa_tol);
        let p = AttackParams::new(gamma, eta, kappa, g)?;
        Ok((eve_info(&ao_attack_state_compact(sc, &p)?, sc)?, kappa))
    };
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &eta) in grid.iter().enumerate() {
        let (info, _) = objective(eta)?;
        if info > best.1 {
            best = (i, info);
        }
    }
    let i = best.0;
    let lo = grid[i.saturating_sub(1)];
    let hi = if i + 1 < n {
        grid[i + 1]
    } else {
        eta_hi.min(grid[i])
    };
    let mut failure = None;
    let (eta_ref, neg_info) = golden_min(
        |eta| match objective(eta) {
            Ok((info, _)) => -info,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        settings.eta_tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let eta_star = if -neg_info >= best.1 {
        eta_ref
    } else {
        grid[i]
    };
    let kappa_star = model.solve_kappa(eta_star, settings.kappa_tol);
    finish(eta_star, kappa_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teleportation::AmplifierGain;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3) * (x - 0.3) + 1.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
        let (x, _) = golden_min(|x| -x, 0.0, 1.0, 1e-10);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn below_gamma_min_is_infeasible() {
        let sc = AttackScenario::lossy(0.25, 1.01, 0.7).unwrap();
        let r = optimize_attack(&sc, 0.3).unwrap();
        assert!(!r.feasible);
        assert!(r.residual > 0.0);
        assert_eq!(r.eve_info_bits, 0.0);
    }

    #[test]
    fn gamma_min_uses_the_whole_resource() {
        let sc = AttackScenario::lossy(0.25, 1.01, 0.7).unwrap();
        let gm = gamma_min(&sc.channel).gamma;
        let r = optimize_attack(&sc, gm).unwrap();
        assert!(r.feasible, "{r:?}");
        assert!(r.eta_star >= 1.0 - 1e-3, "{r:?}");
        assert!(r.eve_info_bits < r.holevo_bits);
    }

    #[test]
    fn kappa_solves_constraint() {
        let sc = AttackScenario::lossy(0.25, 1.01, 0.7).unwrap();
        let m = NoiseModel::new(&sc, 0.9);
        assert!(m.gap(0.3) < 0.0);
        let k = m.solve_kappa(0.3, 1e-10);
        let d = m.v_eff(0.3, k) - sc.channel.v();
        assert!(d.abs() <= 1e-10, "{k} {d}");
    }

    #[test]
    fn finite_gain_result_is_tight() {
        let sc = AttackScenario::lossy(0.25, 1.01, 0.7)
            .unwrap()
            .with_gain(AmplifierGain::Finite(100.0));
        let r = optimize_attack(&sc, 0.8).unwrap();
        assert!(r.feasible, "{r:?}");
        assert!(r.residual <= 1e-8);
        assert!(r.eve_info_bits <= r.holevo_bits + 1e-6);
    }

    #[test]
    fn large_resource_anchor() {
        let sc = AttackScenario::lossy(0.25, 1.01, 0.7).unwrap();
        let r = optimize_attack(&sc, 0.9999).unwrap();
        println!("{r:?}");
        assert!(r.feasible);
        assert!(r.eve_info_bits <= r.holevo_bits + 1e-6);
    }

    #[test]
    fn pure_loss_sets_eta_directly() {
        let sc = AttackScenario::lossy(0.25, 1.0, 0.7).unwrap();
        let r = optimize_attack(&sc, 0.8).unwrap();
        assert!((r.eta_star - 0.25 / 0.64).abs() < 1e-15);
        assert!(r.feasible, "{r:?}");
        assert!(!optimize_attack(&sc, 0.4).unwrap().feasible);
    }
}
