use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};

use super::covmat::CovMat;

/// Tolerance on `S Ω Sᵀ = Ω`, relative to the largest squared entry of `S`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// A Gaussian unitary acting on `arity` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Symplectic {
    matrix: DMatrix<f64>,
    arity: usize,
}

/// The k-mode symplectic form, block-diagonal `[[0, 1], [-1, 0]]`.
pub fn omega(k: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        w[(2 * i, 2 * i + 1)] = 1.0;
        w[(2 * i + 1, 2 * i)] = -1.0;
    }
    w
}

impl Symplectic {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let rows = matrix.nrows();
        if rows == 0 || !rows.is_multiple_of(2) || matrix.ncols() != rows {
            return Err(Error::Shape {
                rows,
                cols: matrix.ncols(),
                modes: rows / 2,
            });
        }
        let s = Self {
            arity: rows / 2,
            matrix,
        };
        let dev = s.symplectic_deviation();
        let scale = s.matrix.iter().fold(1.0_f64, |a, x| a.max(x * x));
        if dev > SYMPLECTIC_TOL * scale {
            return Err(Error::NotSymplectic(dev));
        }
        Ok(s)
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * arity, 2 * arity),
            arity,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `max |S Ω Sᵀ - Ω|`.
    pub fn symplectic_deviation(&self) -> f64 {
        let w = omega(self.arity);
        let d = &self.matrix * &w * self.matrix.transpose() - &w;
        d.amax()
    }

    /// `S⁻¹ = -Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Symplectic {
        let w = omega(self.arity);
        Symplectic {
            matrix: -(&w * self.matrix.transpose() * &w),
            arity: self.arity,
        }
    }

    /// `S` acting on modes `idx` of a `dim`-dimensional phase space,
    /// identity elsewhere.
    pub(crate) fn embed(&self, idx: &[usize], dim: usize) -> DMatrix<f64> {
        let mut full = DMatrix::identity(dim, dim);
        for (a, &ma) in idx.iter().enumerate() {
            for (b, &mb) in idx.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        full[(2 * ma + i, 2 * mb + j)] = self.matrix[(2 * a + i, 2 * b + j)];
                    }
                }
            }
        }
        full
    }

    /// Composition: `self` applied after `first`.
    pub fn after(&self, first: &Symplectic) -> Result<Symplectic> {
        if self.arity != first.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: first.arity,
            });
        }
        Ok(Symplectic {
            matrix: &self.matrix * &first.matrix,
            arity: self.arity,
        })
    }
}

/// Two-mode squeezer (phase-insensitive amplifier) with gain `g = cosh² r`.
///
/// Acts on `(signal, idler)`:
/// ```text
/// √g      ·      √(g-1)   ·
/// ·       √g     ·        -√(g-1)
/// √(g-1)  ·      √g       ·
/// ·       -√(g-1) ·       √g
/// ```
pub fn two_mode_squeezer(g: f64) -> Result<Symplectic> {
    if g.is_nan() || g < 1.0 || g.is_infinite() {
        return Err(domain("g", g, ">= 1"));
    }
    let d = g.sqrt();
    let o = (g - 1.0).sqrt();
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..4 {
        m[(k, k)] = d;
    }
    m[(0, 2)] = o;
    m[(2, 0)] = o;
    m[(1, 3)] = -o;
    m[(3, 1)] = -o;
    Ok(Symplectic {
        matrix: m,
        arity: 2,
    })
}

/// Beam splitter of transmissivity `t` acting on `(first, second)`.
///
/// First output `√t·first - √(1-t)·second`, second output
/// `√(1-t)·first + √t·second`.
pub fn beam_splitter(t: f64) -> Result<Symplectic> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain("t", t, "0 <= t <= 1"));
    }
    let d = t.sqrt();
    let o = (1.0 - t).sqrt();
    let mut m = DMatrix::zeros(4, 4);
    for k in 0..4 {
        m[(k, k)] = d;
    }
    m[(0, 2)] = -o;
    m[(1, 3)] = -o;
    m[(2, 0)] = o;
    m[(3, 1)] = o;
    Ok(Symplectic {
        matrix: m,
        arity: 2,
    })
}

/// `σ → S σ Sᵀ` with `S` embedded on `targets` (in order) and identity elsewhere.
pub fn apply_symplectic<S: AsRef<str>>(
    state: &CovMat,
    s: &Symplectic,
    targets: &[S],
) -> Result<CovMat> {
    if targets.len() != s.arity() {
        return Err(Error::ArityMismatch {
            expected: s.arity(),
            got: targets.len(),
        });
    }
    let idx = state.indices_of(targets)?;
    let full = s.embed(&idx, 2 * state.n_modes());
    let out = &full * state.matrix() * full.transpose();
    Ok(CovMat::raw(out, state.labels().to_vec()))
}

/// Reduced state on `keep`, in the order given.
pub fn partial_trace<S: AsRef<str>>(state: &CovMat, keep: &[S]) -> Result<CovMat> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let idx = state.indices_of(keep)?;
    let rows: Vec<usize> = idx.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let src = state.matrix();
    let out = DMatrix::from_fn(rows.len(), rows.len(), |i, j| src[(rows[i], rows[j])]);
    let labels = keep.iter().map(|l| l.as_ref().to_owned()).collect();
    Ok(CovMat::raw(out, labels))
}
