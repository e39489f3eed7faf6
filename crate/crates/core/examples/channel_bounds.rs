//! Minimal resource squeezing and entanglement for a range of lossy channels.

use cvqkd_attack::attacks::entanglement_lower_bound;
use cvqkd_attack::channels::{classify, GaussChannel};

fn main() -> cvqkd_attack::Result<()> {
    println!(
        "{:>5} {:>6} {:>14} {:>10} {:>8}",
        "tau", "eps", "kind", "gamma_min", "ebits"
    );
    for tau in [0.1, 0.25, 0.5, 0.9] {
        for eps in [1.0, 1.01, 1.1, 2.0] {
            let ch = GaussChannel::lossy(tau, eps)?;
            let b = entanglement_lower_bound(&ch)?;
            println!(
                "{tau:>5} {eps:>6} {:>14} {:>10.6} {:>8.4}",
                classify(&ch).to_string(),
                b.gamma_min,
                b.ebits
            );
        }
    }
    Ok(())
}
