use std::fmt;

use nalgebra::{DMatrix, Matrix2};

use crate::error::{domain, Error, Result};

use super::entropy;

/// Relative tolerance for the symmetry invariant.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Every symplectic eigenvalue of a physical state satisfies `nu >= 1 - PHYSICAL_TOL`.
pub const PHYSICAL_TOL: f64 = 1e-9;

/// Covariance matrix of a zero-mean multimode Gaussian state.
///
/// Quadratures are ordered `(x1, p1, ..., xn, pn)` in shot-noise units
/// (vacuum variance 1). Mode `i` owns the 2x2 block at rows/columns
/// `2i..2i+2` and is addressed by `labels[i]`.
#[derive(Clone, PartialEq)]
pub struct CovMat {
    matrix: DMatrix<f64>,
    labels: Vec<String>,
}

impl CovMat {
    /// Validated constructor: checks shape, label uniqueness, symmetry and
    /// the uncertainty principle.
    pub fn new<S: AsRef<str>>(matrix: DMatrix<f64>, labels: &[S]) -> Result<Self> {
        let state = Self::from_parts(matrix, labels)?;
        state.check_physical()?;
        Ok(state)
    }

    /// Like [`CovMat::new`] but without the physicality check.
    pub fn from_parts<S: AsRef<str>>(matrix: DMatrix<f64>, labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_owned()).collect();
        let n = labels.len();
        if n == 0 || matrix.nrows() != 2 * n || matrix.ncols() != 2 * n {
            return Err(Error::Shape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                modes: n,
            });
        }
        check_unique(&labels)?;
        let dev = asymmetry(&matrix);
        if dev > SYMMETRY_TOL * scale(&matrix) {
            return Err(Error::NotSymmetric(dev));
        }
        Ok(Self {
            matrix: symmetrize(matrix),
            labels,
        })
    }

    /// Internal constructor for results of operations that preserve the
    /// invariants by construction.
    pub(crate) fn raw(matrix: DMatrix<f64>, labels: Vec<String>) -> Self {
        debug_assert_eq!(matrix.nrows(), 2 * labels.len());
        Self {
            matrix: symmetrize(matrix),
            labels,
        }
    }

    /// The vacuum state on the given modes.
    pub fn vacuum<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let n = labels.len();
        Self::from_parts(DMatrix::identity(2 * n, 2 * n), labels)
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub(crate) fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let idx = labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<&str> = labels.iter().map(|l| l.as_ref()).collect();
        check_unique(&names)?;
        Ok(idx)
    }

    /// The 2x2 block `(row mode, column mode)`.
    pub fn block(&self, row: &str, col: &str) -> Result<Matrix2<f64>> {
        let i = self.index_of(row)?;
        let j = self.index_of(col)?;
        Ok(self.matrix.fixed_view::<2, 2>(2 * i, 2 * j).into_owned())
    }

    /// `self ⊕ other`; labels must be disjoint.
    pub fn direct_sum(&self, other: &CovMat) -> Result<CovMat> {
        let n1 = 2 * self.n_modes();
        let n2 = 2 * other.n_modes();
        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.matrix);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&other.matrix);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_unique(&labels)?;
        Ok(CovMat { matrix: m, labels })
    }

    /// Rename a single mode.
    pub fn relabel(mut self, from: &str, to: &str) -> Result<CovMat> {
        let i = self.index_of(from)?;
        if from != to && self.has_label(to) {
            return Err(Error::DuplicateLabel(to.to_owned()));
        }
        self.labels[i] = to.to_owned();
        Ok(self)
    }

    /// Symplectic eigenvalues in descending order.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        entropy::symplectic_eigenvalues(self)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        entropy::von_neumann_entropy(self)
    }

    /// Smallest symplectic eigenvalue; `Err` if the matrix is not positive definite.
    pub fn min_symplectic_eigenvalue(&self) -> Result<f64> {
        let nu = self.symplectic_eigenvalues()?;
        Ok(nu.last().copied().unwrap_or(f64::INFINITY))
    }

    pub fn is_physical(&self) -> bool {
        self.check_physical().is_ok()
    }

    pub fn check_physical(&self) -> Result<()> {
        let nu_min = self.min_symplectic_eigenvalue()?;
        if nu_min < 1.0 - PHYSICAL_TOL {
            return Err(Error::Unphysical(format!(
                "smallest symplectic eigenvalue {nu_min} < 1"
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for CovMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CovMat")
            .field("labels", &self.labels)
            .field("matrix", &self.matrix)
            .finish()
    }
}

/// Two-mode covariance matrix in standard form: `A = diag(a, a)`,
/// `B = diag(b, b)`, `C = diag(c_plus, c_minus)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeStd {
    pub a: f64,
    pub b: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl TwoModeStd {
    pub fn to_covmat(&self, first: &str, second: &str) -> Result<CovMat> {
        if self.a < 1.0 - PHYSICAL_TOL {
            return Err(domain("a", self.a, ">= 1"));
        }
        if self.b < 1.0 - PHYSICAL_TOL {
            return Err(domain("b", self.b, ">= 1"));
        }
        CovMat::new(self.matrix(), &[first, second])
    }

    pub(crate) fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = self.a;
        m[(1, 1)] = self.a;
        m[(2, 2)] = self.b;
        m[(3, 3)] = self.b;
        m[(0, 2)] = self.c_plus;
        m[(2, 0)] = self.c_plus;
        m[(1, 3)] = self.c_minus;
        m[(3, 1)] = self.c_minus;
        m
    }

    /// Read back the standard-form entries of a two-mode state.
    pub fn from_covmat(state: &CovMat) -> Result<Self> {
        if state.n_modes() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                got: state.n_modes(),
            });
        }
        let m = state.matrix();
        Ok(Self {
            a: m[(0, 0)],
            b: m[(2, 2)],
            c_plus: m[(0, 2)],
            c_minus: m[(1, 3)],
        })
    }
}

/// Two-mode squeezed vacuum with squeezing `gamma` on modes `labels`.
///
/// `a = b = (1 + g²)/(1 - g²)`, `c+ = -c- = 2g/(1 - g²)`.
pub fn tmsv(gamma: f64, labels: [&str; 2]) -> Result<CovMat> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(domain("gamma", gamma, "0 <= gamma < 1"));
    }
    let (a, c) = tmsv_entries(gamma);
    let std = TwoModeStd {
        a,
        b: a,
        c_plus: c,
        c_minus: -c,
    };
    CovMat::from_parts(std.matrix(), &labels)
}

/// `(a, c)` of a two-mode squeezed vacuum.
pub(crate) fn tmsv_entries(gamma: f64) -> (f64, f64) {
    let g2 = gamma * gamma;
    ((1.0 + g2) / (1.0 - g2), 2.0 * gamma / (1.0 - g2))
}

/// Single-mode thermal state `diag(variance, variance)`.
pub fn thermal(variance: f64, label: &str) -> Result<CovMat> {
    if variance.is_nan() || variance < 1.0 {
        return Err(domain("variance", variance, ">= 1"));
    }
    CovMat::from_parts(DMatrix::identity(2, 2) * variance, &[label])
}

pub(crate) fn check_unique<S: AsRef<str>>(labels: &[S]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].iter().any(|m| m.as_ref() == l.as_ref()) {
            return Err(Error::DuplicateLabel(l.as_ref().to_owned()));
        }
    }
    Ok(())
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

fn scale(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()))
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}
