//! Deformed Heisenberg–Weyl algebra for two degrees of freedom.
//!
//! NC variables obey `[q1, q2] = iθ`, `[p1, p2] = iη`, `[q_i, p_i] = iħ`.
//! The Seiberg–Witten (SW) map realizes them linearly through canonical
//! variables `(Q1, P1, Q2, P2)`:
//!
//! ```text
//! q_i = ν Q_i − (θ / 2νħ) ε_ij P_j
//! p_i = μ P_i + (η / 2μħ) ε_ij Q_j        ε_12 = +1
//! ```
//!
//! subject to `θη = 4ħ²μν(1 − μν)`. We always pick `μ = ν` on the branch that
//! reduces to the identity map at `θη = 0`.
//!
//! All 4-vectors use the ordering `(Q1, P1, Q2, P2)`.

use nalgebra::Matrix4;

use crate::error::{domain, Error, Result};

pub const Q1: usize = 0;
pub const P1: usize = 1;
pub const Q2: usize = 2;
pub const P2: usize = 3;

/// The standard symplectic form Ω = [[0, 1], [-1, 0]] ⊕ [[0, 1], [-1, 0]].
pub fn standard_symplectic() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(Q1, P1)] = 1.0;
    omega[(P1, Q1)] = -1.0;
    omega[(Q2, P2)] = 1.0;
    omega[(P2, Q2)] = -1.0;
    omega
}

/// NC constants together with the SW scaling that realizes them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcAlgebra {
    theta: f64,
    eta: f64,
    hbar: f64,
    mu: f64,
    nu: f64,
}

impl NcAlgebra {
    pub fn new(theta: f64, eta: f64, hbar: f64) -> Result<Self> {
        let (mu, nu) = solve_sw_scaling(theta, eta, hbar)?;
        Ok(Self {
            theta,
            eta,
            hbar,
            mu,
            nu,
        })
    }

    /// θ = η = 0.
    pub fn commutative(hbar: f64) -> Result<Self> {
        Self::new(0.0, 0.0, hbar)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `|θη − 4ħ²μν(1 − μν)|`.
    pub fn constraint_residual(&self) -> f64 {
        let mn = self.mu * self.nu;
        (self.theta * self.eta - 4.0 * self.hbar * self.hbar * mn * (1.0 - mn)).abs()
    }

    pub fn sw_map(&self) -> Result<LinearMap4> {
        sw_map_matrix(self)
    }

    pub fn commutation_matrix(&self) -> CommutationMatrix {
        nc_commutation_matrix(self)
    }
}

/// Solves `θη = 4ħ²μν(1 − μν)` with `μ = ν = √s`,
/// `s = (1 + √(1 − θη/ħ²)) / 2`.
pub fn solve_sw_scaling(theta: f64, eta: f64, hbar: f64) -> Result<(f64, f64)> {
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(domain(format!("theta must be finite and >= 0, got {theta}")));
    }
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(domain(format!("eta must be finite and >= 0, got {eta}")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(domain(format!("hbar must be finite and > 0, got {hbar}")));
    }
    let hbar_sq = hbar * hbar;
    let theta_eta = theta * eta;
    if theta_eta > hbar_sq {
        return Err(Error::NoRealScaling { theta_eta, hbar_sq });
    }
    let x = theta_eta / hbar_sq;
    let s = 0.5 * (1.0 + (1.0 - x).sqrt());
    let root = s.sqrt();
    Ok((root, root))
}

/// A real 4×4 linear map on phase vectors, guaranteed invertible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap4 {
    entries: Matrix4<f64>,
}

impl LinearMap4 {
    pub fn new(entries: Matrix4<f64>) -> Result<Self> {
        let det = entries.determinant();
        let scale = entries.amax().max(f64::MIN_POSITIVE).powi(4);
        if !det.is_finite() || det.abs() <= 1e-12 * scale {
            return Err(Error::SingularMap { det });
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        Self {
            entries: Matrix4::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }
}

/// Matrix of commutators `[r_a, r_b] = i M_ab` for the NC variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationMatrix {
    entries: Matrix4<f64>,
}

impl CommutationMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.entries
    }
}

/// Rows give `(q1, p1, q2, p2) = T · (Q1, P1, Q2, P2)`.
///
/// `det T = (2μν − 1)² = 1 − θη/ħ²`, so the map degenerates at `θη = ħ²`
/// and construction fails there with [`Error::SingularMap`].
pub fn sw_map_matrix(alg: &NcAlgebra) -> Result<LinearMap4> {
    let NcAlgebra {
        theta,
        eta,
        hbar,
        mu,
        nu,
    } = *alg;
    let a = theta / (2.0 * nu * hbar);
    let b = eta / (2.0 * mu * hbar);
    let mut t = Matrix4::zeros();
    t[(Q1, Q1)] = nu;
    t[(Q1, P2)] = -a;
    t[(P1, P1)] = mu;
    t[(P1, Q2)] = b;
    t[(Q2, Q2)] = nu;
    t[(Q2, P1)] = a;
    t[(P2, P2)] = mu;
    t[(P2, Q1)] = -b;
    LinearMap4::new(t)
}

pub fn nc_commutation_matrix(alg: &NcAlgebra) -> CommutationMatrix {
    let mut m = Matrix4::zeros();
    let mut set = |i: usize, j: usize, v: f64| {
        m[(i, j)] = v;
        m[(j, i)] = -v;
    };
    set(Q1, P1, alg.hbar);
    set(Q2, P2, alg.hbar);
    set(Q1, Q2, alg.theta);
    set(P1, P2, alg.eta);
    CommutationMatrix { entries: m }
}

/// Max-abs norm of `T (ħΩ) Tᵀ − M`. Zero iff the SW-mapped canonical
/// variables satisfy the deformed algebra.
pub fn algebra_residual(t: &LinearMap4, alg: &NcAlgebra) -> f64 {
    let omega = standard_symplectic() * alg.hbar;
    let realized = t.matrix() * omega * t.matrix().transpose();
    (realized - nc_commutation_matrix(alg).matrix()).amax()
}
