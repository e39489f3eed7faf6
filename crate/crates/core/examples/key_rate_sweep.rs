//! Key rate against resource squeezing; prints the CSV table to stdout.
//! `cargo run --release --example key_rate_sweep -- 0.3 1.02` sets tau and eps.

use cvqkd_attack::attacks::AttackScenario;
use cvqkd_attack::keyrate::{default_gamma_grid, sweep};

fn main() -> cvqkd_attack::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let tau = args.first().copied().unwrap_or(0.25);
    let eps = args.get(1).copied().unwrap_or(1.01);
    let sc = AttackScenario::lossy(tau, eps, 0.7)?;
    let table = sweep(&sc, 0.95, &default_gamma_grid(&sc)?)?;
    print!("{}", table.to_csv(6));
    if let Some((first, last)) = table.endpoints() {
        eprintln!(
            "K falls from {:.6} to {:.6} bits; chi = {:.6}",
            first.key_rate_bits, last.key_rate_bits, table.holevo_bits
        );
    }
    Ok(())
}
