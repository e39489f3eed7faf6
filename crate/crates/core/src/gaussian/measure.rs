use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};

use super::covmat::CovMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// rest, cross, measured block, labels of the rest
type Blocks = (DMatrix<f64>, DMatrix<f64>, Matrix2<f64>, Vec<String>);

/// Split `state` into (rest, cross, measured) blocks around `measured`.
fn split(state: &CovMat, measured: &str) -> Result<Blocks> {
    let k = state.index_of(measured)?;
    if state.n_modes() < 2 {
        return Err(Error::LastMode(measured.to_owned()));
    }
    let rest_modes: Vec<usize> = (0..state.n_modes()).filter(|&i| i != k).collect();
    let rows: Vec<usize> = rest_modes
        .iter()
        .flat_map(|&m| [2 * m, 2 * m + 1])
        .collect();
    let s = state.matrix();
    let rest = DMatrix::from_fn(rows.len(), rows.len(), |i, j| s[(rows[i], rows[j])]);
    let cross = DMatrix::from_fn(rows.len(), 2, |i, j| s[(rows[i], 2 * k + j)]);
    let meas = s.fixed_view::<2, 2>(2 * k, 2 * k).into_owned();
    let labels = rest_modes
        .iter()
        .map(|&m| state.labels()[m].clone())
        .collect();
    Ok((rest, cross, meas, labels))
}

/// Conditional state of the remaining modes after ideal heterodyne
/// detection of `measured`: `σ_rest - σ_cross (σ_meas + I)⁻¹ σ_crossᵀ`.
pub fn condition_heterodyne(state: &CovMat, measured: &str) -> Result<CovMat> {
    let (rest, cross, meas, labels) = split(state, measured)?;
    let inv = (meas + Matrix2::identity())
        .try_inverse()
        .ok_or_else(|| Error::Unphysical(format!("singular heterodyne block on `{measured}`")))?;
    let inv = DMatrix::from_fn(2, 2, |i, j| inv[(i, j)]);
    let out = rest - &cross * inv * cross.transpose();
    Ok(CovMat::raw(out, labels))
}

/// Conditional state after homodyne detection of one quadrature of
/// `measured`, using the pseudo-inverse of the projected block.
pub fn condition_homodyne(
    state: &CovMat,
    measured: &str,
    quadrature: Quadrature,
) -> Result<CovMat> {
    let (rest, cross, meas, labels) = split(state, measured)?;
    let q = match quadrature {
        Quadrature::X => 0,
        Quadrature::P => 1,
    };
    let var = meas[(q, q)];
    if var <= 0.0 {
        return Err(Error::Unphysical(format!(
            "non-positive measured variance on `{measured}`"
        )));
    }
    let col = cross.column(q).into_owned();
    let out = rest - (&col * col.transpose()) / var;
    Ok(CovMat::raw(out, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{thermal, tmsv, tmsv_entries};
    use approx::assert_abs_diff_eq;

    fn product() -> CovMat {
        tmsv(0.5, ["A", "B"])
            .unwrap()
            .direct_sum(&thermal(2.5, "E").unwrap())
            .unwrap()
    }

    #[test]
    fn heterodyne_on_product_leaves_rest() {
        let s = product();
        let out = condition_heterodyne(&s, "E").unwrap();
        assert_eq!(out, tmsv(0.5, ["A", "B"]).unwrap());
    }

    #[test]
    fn heterodyne_on_tmsv_is_pure() {
        let s = tmsv(0.7, ["A", "B"]).unwrap();
        let out = condition_heterodyne(&s, "B").unwrap();
        let (a, c) = tmsv_entries(0.7);
        let w = a - c * c / (a + 1.0);
        assert_abs_diff_eq!(w, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.matrix()[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.matrix()[(1, 1)], 1.0, epsilon = 1e-14);
        assert_eq!(out.labels(), &["A"]);
    }

    #[test]
    fn homodyne_on_tmsv() {
        let g = 0.6;
        let s = tmsv(g, ["A", "B"]).unwrap();
        let out = condition_homodyne(&s, "B", Quadrature::X).unwrap();
        let (a, c) = tmsv_entries(g);
        assert_abs_diff_eq!(out.matrix()[(0, 0)], a - c * c / a, epsilon = 1e-14);
        assert_abs_diff_eq!(out.matrix()[(1, 1)], a, epsilon = 1e-14);
        assert!(out.is_physical());
        let outp = condition_homodyne(&s, "B", Quadrature::P).unwrap();
        assert_abs_diff_eq!(outp.matrix()[(1, 1)], a - c * c / a, epsilon = 1e-14);
        assert_eq!(
            condition_homodyne(&product(), "E", Quadrature::P).unwrap(),
            tmsv(0.5, ["A", "B"]).unwrap()
        );
    }

    #[test]
    fn conditioning_errors() {
        let t = thermal(2.0, "E").unwrap();
        assert!(matches!(
            condition_heterodyne(&t, "E"),
            Err(Error::LastMode(_))
        ));
        assert!(matches!(
            condition_homodyne(&t, "E", Quadrature::X),
            Err(Error::LastMode(_))
        ));
        assert!(matches!(
            condition_heterodyne(&product(), "Z"),
            Err(Error::UnknownLabel(_))
        ));
    }
}
