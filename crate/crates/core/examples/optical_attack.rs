//! The all-optical teleportation attack at a few resource squeezings:
//! optimized splitter and noise, simulation residual and Eve's information.

use cvqkd_attack::attacks::{
    ao_attack_state, gamma_min, holevo_bound, optimize_attack, AttackParams, AttackScenario,
};

fn main() -> cvqkd_attack::Result<()> {
    let sc = AttackScenario::lossy(0.25, 1.01, 0.7)?;
    let chi = holevo_bound(&sc)?;
    let gm = gamma_min(&sc.channel).gamma;
    println!("chi = {chi:.9}, gamma_min = {gm:.9}");
    for gamma in [0.4, gm, 0.6, 0.9, 0.9999] {
        let r = optimize_attack(&sc, gamma)?;
        if !r.feasible {
            println!(
                "gamma {gamma:.4}: cannot simulate the channel (gap {:.3e})",
                r.residual
            );
            continue;
        }
        println!(
            "gamma {gamma:.4}: eta* {:.6} kappa* {:.6} eve {:.9} ({:.2}% of chi) residual {:.1e}",
            r.eta_star,
            r.kappa_star,
            r.eve_info_bits,
            100.0 * r.eve_info_bits / chi,
            r.residual
        );
    }
    let p = AttackParams::new(0.9, 0.3, 0.05, sc.gain.value())?;
    println!(
        "attack state modes: {:?}",
        ao_attack_state(&sc, &p)?.labels()
    );
    Ok(())
}
