//! Mutual information, secret key rate and the key-rate sweep over Eve's
//! resource squeezing.

use std::fmt::Write as _;

use crate::attacks::{
    gamma_min, holevo_bound, optimize_attack_with, AttackScenario, OptimizerSettings,
};
use crate::error::{domain, Result};
use crate::gaussian::tmsv_entries;

/// Upper end of the default grid.
pub const DEFAULT_GAMMA_MAX: f64 = 0.9999;
pub const DEFAULT_GAMMA_COUNT: usize = 41;

pub const CSV_HEADER: &str =
    "gamma,ent_ebits,eta_star,kappa_star,eve_info_bits,holevo_bits,key_rate_bits,residual,feasible";

/// `I(a:b) = log₂((aτ + v + 1)/(τ + v + 1))` for heterodyne on both sides.
pub fn mutual_information(sc: &AttackScenario) -> f64 {
    let (a, _) = tmsv_entries(sc.zeta);
    let (tau, v) = (sc.channel.tau(), sc.channel.v());
    ((a * tau + v + 1.0) / (tau + v + 1.0)).log2()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRate {
    pub bits: f64,
    /// Negative rate: no key can be distilled against this attack.
    pub insecure: bool,
}

/// `K = β I(a:b) - S(x:E)`, negative values kept.
pub fn key_rate(sc: &AttackScenario, beta: f64, eve_info: f64) -> Result<KeyRate> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(domain("beta", beta, "0 <= beta <= 1"));
    }
    let bits = beta * mutual_information(sc) - eve_info;
    Ok(KeyRate {
        bits,
        insecure: bits < 0.0,
    })
}

/// `count` points from `lo` to `hi` spaced logarithmically in `1 - γ`.
pub fn log_gamma_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&lo) {
        return Err(domain("gamma_min", lo, "0 <= gamma_min < 1"));
    }
    if !(lo..1.0).contains(&hi) {
        return Err(domain("gamma_max", hi, "gamma_min <= gamma_max < 1"));
    }
    if count < 2 {
        return Ok(vec![lo; count.min(1)]);
    }
    if hi == lo {
        return Err(domain(
            "gamma_count",
            count as f64,
            "1 when gamma_min = gamma_max",
        ));
    }
    let (a, b) = ((1.0 - lo).ln(), (1.0 - hi).ln());
    let last = count - 1;
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == last => hi,
            i => 1.0 - (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect())
}

/// The default grid from `γ_min` of the scenario's channel to 0.9999.
pub fn default_gamma_grid(sc: &AttackScenario) -> Result<Vec<f64>> {
    log_gamma_grid(
        gamma_min(&sc.channel).gamma,
        DEFAULT_GAMMA_MAX,
        DEFAULT_GAMMA_COUNT,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    /// `None` for a maximally entangled resource.
    pub ent_ebits: Option<f64>,
    pub eta_star: f64,
    pub kappa_star: f64,
    pub eve_info_bits: f64,
    pub holevo_bits: f64,
    pub key_rate_bits: f64,
    pub residual: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub scenario: AttackScenario,
    pub beta: f64,
    pub settings: OptimizerSettings,
    pub mutual_info_bits: f64,
    pub holevo_bits: f64,
    pub rows: Vec<SweepRow>,
}

pub fn sweep(sc: &AttackScenario, beta: f64, gamma_grid: &[f64]) -> Result<SweepTable> {
    sweep_with(sc, beta, gamma_grid, &OptimizerSettings::default())
}

/// One optimized attack per grid point, in grid order. Infeasible points
/// report zero parameters and information, and their distance to the
/// feasible set as the residual.
pub fn sweep_with(
    sc: &AttackScenario,
    beta: f64,
    gamma_grid: &[f64],
    settings: &OptimizerSettings,
) -> Result<SweepTable> {
    sc.validate()?;
    key_rate(sc, beta, 0.0)?;
    if let Some(w) = gamma_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(domain("gamma_grid", w[1], "strictly increasing"));
    }
    let mi = mutual_information(sc);
    let chi = holevo_bound(sc)?;
    let mut rows = Vec::with_capacity(gamma_grid.len());
    for &gamma in gamma_grid {
        let r = optimize_attack_with(sc, gamma, settings)?;
        rows.push(SweepRow {
            gamma,
            ent_ebits: r.ent_resource.finite(),
            eta_star: r.eta_star,
            kappa_star: r.kappa_star,
            eve_info_bits: r.eve_info_bits,
            holevo_bits: r.holevo_bits,
            key_rate_bits: beta * mi - r.eve_info_bits,
            residual: r.residual,
            feasible: r.feasible,
        });
    }
    Ok(SweepTable {
        scenario: *sc,
        beta,
        settings: *settings,
        mutual_info_bits: mi,
        holevo_bits: chi,
        rows,
    })
}

/// Fixed-point with `precision` decimals; negative zero prints as zero.
pub fn fmt_fixed(x: f64, precision: usize) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => s,
    }
}

impl SweepTable {
    pub fn to_csv(&self, precision: usize) -> String {
        let f = |x: f64| fmt_fixed(x, precision);
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                f(r.gamma),
                r.ent_ebits.map_or_else(|| "inf".to_owned(), f),
                f(r.eta_star),
                f(r.kappa_star),
                f(r.eve_info_bits),
                f(r.holevo_bits),
                f(r.key_rate_bits),
                f(r.residual),
                r.feasible
            );
        }
        out
    }

    pub fn feasible_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.feasible)
    }

    /// First and last feasible rows.
    pub fn endpoints(&self) -> Option<(&SweepRow, &SweepRow)> {
        let first = self.feasible_rows().next()?;
        let last = self.feasible_rows().last()?;
        Some((first, last))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::Reconciliation;
    use crate::channels::GaussChannel;
    use crate::teleportation::AmplifierGain;
    use approx::assert_abs_diff_eq;

    fn scenario() -> AttackScenario {
        AttackScenario::lossy(0.25, 1.01, 0.7).unwrap()
    }

    #[test]
    fn mutual_information_values() {
        let sc = scenario();
        let a = (1.0 + 0.49) / (1.0 - 0.49);
        let expect = ((a * 0.25 + 0.7575 + 1.0) / (0.25 + 0.7575 + 1.0_f64)).log2();
        assert_abs_diff_eq!(mutual_information(&sc), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(mutual_information(&sc), 0.309524, epsilon = 1e-6);

        let zero = AttackScenario::lossy(0.25, 1.01, 0.0).unwrap();
        assert_eq!(mutual_information(&zero), 0.0);

        let id = AttackScenario::new(
            GaussChannel::identity(),
            0.7,
            Reconciliation::Reverse,
            AmplifierGain::Asymptotic,
        )
        .unwrap();
        assert_abs_diff_eq!(
            mutual_information(&id),
            ((a + 1.0) / 2.0).log2(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn key_rate_composition() {
        let sc = scenario();
        let k = key_rate(&sc, 1.0, 0.0).unwrap();
        assert_eq!(k.bits, mutual_information(&sc));
        let chi = holevo_bound(&sc).unwrap();
        let k = key_rate(&sc, 0.95, chi).unwrap();
        assert_eq!(k.bits, 0.95 * mutual_information(&sc) - chi);
        assert!(key_rate(&sc, 0.0, 0.1).unwrap().insecure);
        assert!(key_rate(&sc, 1.5, 0.0).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = log_gamma_grid(0.445, 0.9999, 41).unwrap();
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], 0.445);
        assert_eq!(g[40], 0.9999);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        // equal ratios of 1 - γ
        let r1 = (1.0 - g[1]) / (1.0 - g[0]);
        let r2 = (1.0 - g[21]) / (1.0 - g[20]);
        assert_abs_diff_eq!(r1, r2, epsilon = 1e-12);
        assert!(log_gamma_grid(0.5, 0.4, 3).is_err());
        assert_eq!(log_gamma_grid(0.5, 0.5, 1).unwrap(), vec![0.5]);
    }

    #[test]
    fn fixed_format() {
        assert_eq!(fmt_fixed(-1e-12, 9), "0.000000000");
        assert_eq!(fmt_fixed(-0.5, 3), "-0.500");
        assert_eq!(fmt_fixed(0.25, 2), "0.25");
    }

    #[test]
    fn small_sweep_has_infeasible_prefix() {
        let sc = scenario();
        let grid = [0.3, 0.4, 0.6, 0.9];
        let t = sweep(&sc, 0.95, &grid).unwrap();
        assert!(!t.rows[0].feasible && !t.rows[1].feasible);
        assert!(t.rows[2].feasible && t.rows[3].feasible);
        for r in &t.rows {
            assert_eq!(r.key_rate_bits, 0.95 * t.mutual_info_bits - r.eve_info_bits);
            assert_eq!(r.holevo_bits, t.holevo_bits);
        }
        assert!(t.rows[3].eve_info_bits >= t.rows[2].eve_info_bits);
        let csv = t.to_csv(9);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.lines().nth(1).unwrap().ends_with(",false"));
        assert!(sweep(&sc, 0.95, &[0.5, 0.5]).is_err());
    }
}
