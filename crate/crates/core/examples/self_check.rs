//! Run the built-in verification suite, then the same suite with every
//! tolerance zeroed to see which checks are exact.

use cvqkd_attack::verify::run_checks;

fn main() -> cvqkd_attack::Result<()> {
    let report = run_checks(1.0)?;
    println!("{report}\n");
    let exact = run_checks(0.0)?;
    for c in exact.checks.iter().filter(|c| c.passed()) {
        println!("exact: {}", c.name);
    }
    std::process::exit(if report.passed() { 0 } else { 1 });
}
