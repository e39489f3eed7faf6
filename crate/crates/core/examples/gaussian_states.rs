//! Build a two-mode squeezed vacuum, mix one arm with a thermal mode and
//! watch entropies and symplectic spectra.

use cvqkd_attack::gaussian::{
    apply_symplectic, beam_splitter, condition_heterodyne, partial_trace, thermal, tmsv,
};

fn main() -> cvqkd_attack::Result<()> {
    let pair = tmsv(0.6, ["a", "b"])?;
    println!("pure pair: S = {:.3e} bits", pair.entropy()?);
    println!(
        "one arm:   S = {:.6} bits",
        partial_trace(&pair, &["a"])?.entropy()?
    );

    let st = pair.direct_sum(&thermal(3.0, "c")?)?;
    let st = apply_symplectic(&st, &beam_splitter(0.7)?, &["b", "c"])?;
    println!("after mixing b with a thermal mode:");
    println!(
        "  symplectic eigenvalues {:?}",
        st.symplectic_eigenvalues()?
    );
    println!("  S(abc) = {:.6}", st.entropy()?);

    let ab = partial_trace(&st, &["a", "b"])?;
    let a_given_b = condition_heterodyne(&ab, "b")?;
    println!(
        "  S(a) = {:.6}, S(a | heterodyne b) = {:.6}",
        partial_trace(&ab, &["a"])?.entropy()?,
        a_given_b.entropy()?
    );
    Ok(())
}
