//! Second-moment transport under quadratic Hamiltonians.
//!
//! For `H = Rᵀ A R` Hamilton's equations read `dR/dt = 2ΩA R`, so the flow
//! is the symplectic matrix `S(t) = exp(2ΩA t)` and second moments move as
//! `σ → S σ Sᵀ`. This holds for any state, Gaussian or not, because a
//! linear flow maps second moments to second moments. It is the independent
//! counterpart of the Wigner quadrature in [`crate::wigner_oracle`].

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};

use crate::error::{domain, Error, Result};
use crate::hamiltonian::{QuadForm4, QuadratureScale};
use crate::nc_algebra::standard_symplectic;
use crate::wigner_oracle::{FockPair, LocalMoments};

/// Physicality threshold on the smallest symplectic eigenvalue.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// `exp(m)` by scaling and squaring of the Taylor series.
pub(crate) fn expm(m: &Matrix4<f64>) -> Matrix4<f64> {
    let norm1 = (0..4)
        .map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    while norm1 / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let scaled = m / 2f64.powi(squarings);
    let mut sum = Matrix4::identity();
    let mut term = Matrix4::identity();
    for k in 1..=60 {
        term = term * scaled / k as f64;
        sum += term;
        if term.amax() < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticPropagator {
    s: Matrix4<f64>,
    t: f64,
    generator: QuadForm4,
}

impl SymplecticPropagator {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn generator(&self) -> &QuadForm4 {
        &self.generator
    }

    /// `‖S Ω Sᵀ − Ω‖` in max-abs norm.
    pub fn symplectic_residual(&self) -> f64 {
        let omega = standard_symplectic();
        (self.s * omega * self.s.transpose() - omega).amax()
    }

    /// Applies `self`, then `later`. Both must share a generator.
    pub fn then(&self, later: &SymplecticPropagator) -> Result<SymplecticPropagator> {
        if self.generator != later.generator {
            return Err(domain("cannot compose propagators of different generators"));
        }
        Ok(SymplecticPropagator {
            s: later.s * self.s,
            t: self.t + later.t,
            generator: self.generator,
        })
    }
}

/// `S(t) = exp(2ΩA t)`.
pub fn symplectic_propagator(a: &QuadForm4, t: f64) -> SymplecticPropagator {
    let generator = standard_symplectic() * a.matrix() * (2.0 * t);
    SymplecticPropagator {
        s: expm(&generator),
        t,
        generator: *a,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Rescaled quadratures; the vacuum is the identity.
    Dimensionless,
    EnergyScaled,
}

/// Two-mode covariance matrix and first moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovState {
    cm: Matrix4<f64>,
    first_moments: Vector4<f64>,
    units: Units,
}

impl CovState {
    pub fn new(cm: Matrix4<f64>, first_moments: Vector4<f64>, units: Units) -> Result<Self> {
        check_symmetric(&DMatrix::from_column_slice(4, 4, cm.as_slice()))?;
        if cm.cholesky().is_none() {
            let min = cm.symmetric_eigenvalues().min();
            return Err(Error::NonPositive { min_eigenvalue: min });
        }
        Ok(Self {
            cm,
            first_moments,
            units,
        })
    }

    pub fn cm(&self) -> &Matrix4<f64> {
        &self.cm
    }

    pub fn first_moments(&self) -> &Vector4<f64> {
        &self.first_moments
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// 2×2 block of mode 0 or 1.
    pub fn local_block(&self, mode: usize) -> Matrix2<f64> {
        self.cm.fixed_view::<2, 2>(2 * mode, 2 * mode).into_owned()
    }

    pub fn local_moments(&self, mode: usize, t: f64, scale: Option<QuadratureScale>) -> LocalMoments {
        let o = 2 * mode;
        LocalMoments {
            cm: self.local_block(mode),
            first: Vector2::new(self.first_moments[o], self.first_moments[o + 1]),
            t,
            scale,
        }
    }
}

/// `σ → S σ Sᵀ`, `d → S d`.
pub fn evolve_covariance(state: &CovState, prop: &SymplecticPropagator) -> CovState {
    let s = prop.matrix();
    let moved = s * state.cm * s.transpose();
    CovState {
        cm: (moved + moved.transpose()) * 0.5,
        first_moments: s * state.first_moments,
        units: state.units,
    }
}

/// `diag(2k+1, 2k+1, 2l+1, 2l+1)` with zero first moments.
pub fn initial_pair_covariance(pair: &FockPair) -> CovState {
    let a = (2 * pair.k() + 1) as f64;
    let b = (2 * pair.l() + 1) as f64;
    CovState {
        cm: Matrix4::from_diagonal(&Vector4::new(a, a, b, b)),
        first_moments: Vector4::zeros(),
        units: Units::Dimensionless,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalityReport {
    /// One value per mode, ascending.
    pub symplectic_eigenvalues: Vec<f64>,
    pub min: f64,
    pub physical: bool,
}

pub fn physicality_check(state: &CovState) -> Result<PhysicalityReport> {
    if state.units != Units::Dimensionless {
        return Err(domain("physicality is defined for dimensionless covariance matrices"));
    }
    physicality_check_matrix(&DMatrix::from_column_slice(4, 4, state.cm.as_slice()))
}

pub fn physicality_check_local(cm: &Matrix2<f64>) -> Result<PhysicalityReport> {
    physicality_check_matrix(&DMatrix::from_column_slice(2, 2, cm.as_slice()))
}

/// Checks `σ + iΩ ≥ 0` through the symplectic eigenvalues of an `n`-mode
/// covariance matrix, ordered `(Q1, P1, ..., Qn, Pn)`.
pub fn physicality_check_matrix(cm: &DMatrix<f64>) -> Result<PhysicalityReport> {
    let dim = cm.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || cm.ncols() != dim {
        return Err(domain(format!("covariance matrix must be square of even size, got {}x{}", dim, cm.ncols())));
    }
    check_symmetric(cm)?;
    let eig = SymmetricEigen::new(cm.clone());
    let min_eigenvalue = eig.eigenvalues.min();
    if !(min_eigenvalue > 0.0) {
        return Err(Error::NonPositive { min_eigenvalue });
    }
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let mut omega = DMatrix::zeros(dim, dim);
    for m in 0..dim / 2 {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    // K = σ^½ Ω σ^½ is antisymmetric with eigenvalues ±iν, so KᵀK has ν² twice.
    let k = &root * omega * &root;
    let gram = k.transpose() * &k;
    let mut squares: Vec<f64> = SymmetricEigen::new((&gram + gram.transpose()) * 0.5)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    squares.sort_by(f64::total_cmp);
    let symplectic_eigenvalues: Vec<f64> = squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect();
    let min = symplectic_eigenvalues[0];
    Ok(PhysicalityReport {
        physical: min >= 1.0 - PHYSICALITY_TOL,
        symplectic_eigenvalues,
        min,
    })
}

fn check_symmetric(cm: &DMatrix<f64>) -> Result<()> {
    let asymmetry = (cm - cm.transpose()).amax();
    if !asymmetry.is_finite() || asymmetry > 1e-12 * cm.amax().max(1.0) {
        return Err(Error::NonSymmetric { asymmetry });
    }
    Ok(())
}
