//! Standard and all-optical teleportation channels as the amplifier gain grows.

use cvqkd_attack::channels::{effective_channel, GaussChannel, PROBE_SIG};
use cvqkd_attack::teleportation::{
    ao_effective_channel, ao_simulate, bk_effective_channel, AmplifierGain, ResourceState,
    TeleportConfig,
};

fn main() -> cvqkd_attack::Result<()> {
    let env = GaussChannel::lossy(0.25, 1.01)?;
    let res = ResourceState::tmsv(0.5)?;
    let bk = bk_effective_channel(&res, env.tau())?;
    println!("standard: tau = {:.6}, v = {:.9}", bk.tau(), bk.v());
    for g in [2.0, 10.0, 1e2, 1e4, 1e6] {
        let cfg = TeleportConfig::new(env.tau(), AmplifierGain::Finite(g), env)?;
        let closed = ao_effective_channel(&res, &cfg)?;
        let piped = effective_channel(|p| ao_simulate(p, PROBE_SIG, &res, &cfg))?;
        println!(
            "g = {g:>9}: v = {:.9}  (full simulation {:.9}, t = {:.2e})",
            closed.v(),
            piped.v(),
            cfg.splitter_transmissivity()
        );
    }
    Ok(())
}
