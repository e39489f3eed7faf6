//! Eve's information from the entangling cloner, directly and via the
//! Holevo bound of the Alice-Bob state.

use cvqkd_attack::attacks::Reconciliation;
use cvqkd_attack::attacks::{cloner_attack, cloner_state, eve_info, holevo_bound, AttackScenario};
use cvqkd_attack::keyrate::{key_rate, mutual_information};

fn main() -> cvqkd_attack::Result<()> {
    for rec in [Reconciliation::Reverse, Reconciliation::Direct] {
        let sc = AttackScenario::lossy(0.25, 1.01, 0.7)?.with_reconciliation(rec);
        let st = cloner_state(&sc)?;
        let chi = holevo_bound(&sc)?;
        let r = cloner_attack(&sc)?;
        let k = key_rate(&sc, 0.95, chi)?;
        println!("{rec:?}: modes {:?}", st.labels());
        println!(
            "  S(x:E) = {:.9}, chi = {:.9}, I(a:b) = {:.6}, K = {:.6}{}",
            eve_info(&st, &sc)?,
            chi,
            mutual_information(&sc),
            k.bits,
            if k.insecure { " (insecure)" } else { "" }
        );
        println!(
            "  cloner squeezing {:.6}, residual {:.1e}",
            r.gamma, r.residual
        );
    }
    Ok(())
}
