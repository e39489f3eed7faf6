use cvqkd_attack::attacks::{
    ao_attack_state, ao_attack_state_compact, ao_attack_state_dilated, cloner_attack, eve_info,
    gamma_min, holevo_bound, optimize_attack, simulation_residual, AttackParams, AttackScenario,
    Reconciliation,
};
use cvqkd_attack::channels::GaussChannel;
use cvqkd_attack::keyrate::{key_rate, log_gamma_grid, mutual_information, sweep};
use cvqkd_attack::teleportation::AmplifierGain;

fn baseline() -> AttackScenario {
    AttackScenario::lossy(0.25, 1.01, 0.7).unwrap()
}

#[test]
fn optimum_reproduces_the_channel_and_its_information() {
    let sc = baseline();
    for gamma in [0.5, 0.8, 0.99] {
        let r = optimize_attack(&sc, gamma).unwrap();
        assert!(r.feasible);
        let p = AttackParams::new(gamma, r.eta_star, r.kappa_star, sc.gain.value()).unwrap();
        assert!(simulation_residual(&sc, &p).unwrap() <= 1e-4);
        let again = eve_info(&ao_attack_state_compact(&sc, &p).unwrap(), &sc).unwrap();
        assert!((again - r.eve_info_bits).abs() < 1e-12);
    }
}

#[test]
fn finite_gain_routes_agree() {
    let sc = baseline().with_gain(AmplifierGain::Finite(30.0));
    let r = optimize_attack(&sc, 0.7).unwrap();
    assert!(r.feasible && r.residual <= 1e-8, "{r:?}");
    let p = AttackParams::new(0.7, r.eta_star, r.kappa_star, 30.0).unwrap();
    let raw = eve_info(&ao_attack_state(&sc, &p).unwrap(), &sc).unwrap();
    let compact = eve_info(&ao_attack_state_compact(&sc, &p).unwrap(), &sc).unwrap();
    let dilated = eve_info(&ao_attack_state_dilated(&sc, &p).unwrap(), &sc).unwrap();
    assert!((raw - compact).abs() < 1e-10);
    assert!((raw - dilated).abs() < 1e-8);
    assert!(raw <= holevo_bound(&sc).unwrap() + 1e-9);
}

#[test]
fn direct_reconciliation_and_pure_loss() {
    let sc = baseline().with_reconciliation(Reconciliation::Direct);
    let chi = holevo_bound(&sc).unwrap();
    let r = optimize_attack(&sc, 0.99).unwrap();
    assert!(r.feasible);
    assert!(r.eve_info_bits <= chi + 1e-6 && r.eve_info_bits > 0.9 * chi);

    let pl = AttackScenario::lossy(0.5, 1.0, 0.6).unwrap();
    let gm = gamma_min(&pl.channel).gamma;
    assert!((gm - 0.5f64.sqrt()).abs() < 1e-12);
    assert!(!optimize_attack(&pl, gm - 1e-3).unwrap().feasible);
    let r = optimize_attack(&pl, 0.9).unwrap();
    assert!((r.eta_star - 0.5 / 0.81).abs() < 1e-12 && r.kappa_star == 0.0);
    assert!(r.eve_info_bits <= holevo_bound(&pl).unwrap() + 1e-6);
}

#[test]
fn cloner_is_the_upper_envelope_of_the_sweep() {
    let sc = baseline();
    let grid = log_gamma_grid(gamma_min(&sc.channel).gamma, 0.9999, 6).unwrap();
    let table = sweep(&sc, 0.95, &grid).unwrap();
    let cloner = cloner_attack(&sc).unwrap();
    assert!((cloner.eve_info_bits - table.holevo_bits).abs() < 1e-12);
    for r in &table.rows {
        assert!(r.eve_info_bits <= cloner.eve_info_bits + 1e-6);
        let k = key_rate(&sc, 0.95, r.eve_info_bits).unwrap();
        assert_eq!(k.bits, r.key_rate_bits);
    }
    let last = table.rows.last().unwrap();
    assert!(last.key_rate_bits < table.rows[0].key_rate_bits);
    assert!((table.mutual_info_bits - mutual_information(&sc)).abs() == 0.0);
}

#[test]
fn noisier_channels_need_more_squeezing() {
    let mut prev = 0.0;
    for eps in [1.0, 1.05, 1.1, 1.2] {
        let g = gamma_min(&GaussChannel::lossy(0.4, eps).unwrap()).gamma;
        assert!(g < prev || prev == 0.0, "eps {eps}: {g} vs {prev}");
        prev = g;
    }
}
