use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::covmat::{CovMat, SYMMETRY_TOL};
use super::symplectic::omega;

/// Eigenvalues at or below `1 + NU_FLOOR` contribute zero entropy.
pub const NU_FLOOR: f64 = 1e-12;

/// Symplectic eigenvalues of `state`, descending.
///
/// These are the moduli of the eigenvalues of `iΩσ`. With `σ = L Lᵀ`,
/// `iΩσ` is similar to the Hermitian `i Lᵀ Ω L`, so the `ν` are the
/// singular values of the antisymmetric `M = Lᵀ Ω L` (each appearing
/// twice). The large values are read from `M`; the small ones from
/// `M⁻¹ = L⁻¹ Ωᵀ L⁻ᵀ`, whose singular values are `1/ν`. Each estimate
/// is accurate relative to the largest value of its own spectrum.
pub fn symplectic_eigenvalues(state: &CovMat) -> Result<Vec<f64>> {
    let sigma = state.matrix();
    let dev = max_asymmetry(sigma);
    let scale = sigma.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    if dev > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(dev));
    }
    let n = state.n_modes();
    let chol = sigma.clone().cholesky().ok_or_else(|| {
        Error::Unphysical("covariance matrix is not positive definite".to_owned())
    })?;
    let l = chol.l();
    let w = omega(n);
    let m = l.transpose() * &w * &l;
    let large = paired_singular_values(m);

    let eye = DMatrix::identity(2 * n, 2 * n);
    let l_inv = l
        .solve_lower_triangular(&eye)
        .ok_or_else(|| Error::Unphysical("singular Cholesky factor".to_owned()))?;
    let m_inv = &l_inv * w.transpose() * l_inv.transpose();
    let small = paired_singular_values(m_inv);

    let nu_max = large[0];
    let nu_min = 1.0 / small[0];
    let split = (nu_max * nu_min).sqrt();
    let out = (0..n)
        .map(|k| {
            let from_large = large[k];
            if from_large >= split {
                from_large
            } else {
                1.0 / small[n - 1 - k]
            }
        })
        .collect();
    Ok(out)
}

/// Singular values of an antisymmetric matrix, deduplicated into `n` values, descending.
fn paired_singular_values(m: DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.chunks(2)
        .map(|p| 0.5 * (p[0] + p[p.len() - 1]))
        .collect()
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

/// Entropy contribution of a single symplectic eigenvalue, in bits.
pub fn entropy_term(nu: f64) -> f64 {
    if nu <= 1.0 + NU_FLOOR {
        return 0.0;
    }
    let p = 0.5 * (nu + 1.0);
    let m = 0.5 * (nu - 1.0);
    // p log p - m log m with p - m = 1, without the cancellation at large ν
    m * (1.0 / m).ln_1p() / std::f64::consts::LN_2 + p.log2()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(state: &CovMat) -> Result<f64> {
    Ok(symplectic_eigenvalues(state)?
        .into_iter()
        .map(entropy_term)
        .sum())
}
