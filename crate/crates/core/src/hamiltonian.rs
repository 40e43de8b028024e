//! The two-oscillator Hamiltonian, in NC variables and pulled back through
//! the SW map.
//!
//! Hamiltonians are quadratic forms `H(R) = Rᵀ A R` with no global ½.
//! In NC variables
//!
//! ```text
//! H = Σ_i (p_i²/2m + mΩ²q_i²/2) + (ω_B/2)(p1 q2 − p2 q1),   Ω² = ω² + ω_B²/4
//! ```
//!
//! and after the map it takes the form
//!
//! ```text
//! H = α²(Q1² + Q2²) + β²(P1² + P2²) + Γ (P1 Q2 − P2 Q1),    Γ = ω_B/2 + γ
//! ```
//!
//! The ω_B cross terms of α² and β² both carry `1/4ħ`. [`coefficient_residual`]
//! compares these closed forms with the exact pullback.

use nalgebra::{Matrix4, Vector4};

use crate::error::{domain, Error, Result};
use crate::nc_algebra::{standard_symplectic, LinearMap4, NcAlgebra, P1, P2, Q1, Q2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    mass: f64,
    omega: f64,
    omega_b: f64,
    omega2: f64,
}

impl OscillatorSpec {
    pub fn new(mass: f64, omega: f64, omega_b: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(domain(format!("mass must be > 0, got {mass}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(domain(format!("omega must be > 0, got {omega}")));
        }
        if !(omega_b.is_finite() && omega_b >= 0.0) {
            return Err(domain(format!("omega_B must be >= 0, got {omega_b}")));
        }
        Ok(Self {
            mass,
            omega,
            omega_b,
            omega2: omega * omega + omega_b * omega_b / 4.0,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    /// Ω² = ω² + ω_B²/4.
    pub fn omega2(&self) -> f64 {
        self.omega2
    }
}

/// Symmetric 4×4 quadratic form over `(Q1, P1, Q2, P2)`; `H(R) = Rᵀ A R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadForm4 {
    entries: Matrix4<f64>,
}

impl QuadForm4 {
    /// Rejects any asymmetry, however small.
    pub fn new(entries: Matrix4<f64>) -> Result<Self> {
        let asymmetry = (entries - entries.transpose()).amax();
        if asymmetry != 0.0 || entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonSymmetric { asymmetry });
        }
        Ok(Self { entries })
    }

    /// Averages `m` with its transpose.
    pub fn symmetrized(m: Matrix4<f64>) -> Self {
        let mut entries = (m + m.transpose()) * 0.5;
        // (a + b)/2 and (b + a)/2 agree in IEEE arithmetic, but copy to be exact
        for i in 0..4 {
            for j in (i + 1)..4 {
                entries[(j, i)] = entries[(i, j)];
            }
        }
        Self { entries }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn value(&self, r: &Vector4<f64>) -> f64 {
        r.dot(&(self.entries * r))
    }

    /// Diagonal part.
    pub fn diagonal_part(&self) -> Self {
        Self {
            entries: Matrix4::from_diagonal(&self.entries.diagonal()),
        }
    }

    /// Off-diagonal part.
    pub fn off_diagonal_part(&self) -> Self {
        Self {
            entries: self.entries - Matrix4::from_diagonal(&self.entries.diagonal()),
        }
    }

    /// Largest same-mode `Q·P` coupling, `max(|A[Q1,P1]|, |A[Q2,P2]|)`.
    pub fn same_mode_cross(&self) -> f64 {
        self.entries[(Q1, P1)].abs().max(self.entries[(Q2, P2)].abs())
    }
}

/// Sets the symmetric pair of slots so that `RᵀAR` gains `value · r_i r_j`.
fn set_cross(m: &mut Matrix4<f64>, i: usize, j: usize, value: f64) {
    m[(i, j)] = value / 2.0;
    m[(j, i)] = value / 2.0;
}

pub fn build_nc_quadratic_form(spec: &OscillatorSpec) -> QuadForm4 {
    let potential = spec.mass * spec.omega2 / 2.0;
    let kinetic = 1.0 / (2.0 * spec.mass);
    let mut a = Matrix4::from_diagonal(&Vector4::new(potential, kinetic, potential, kinetic));
    // (ω_B/2)(p1 q2 − p2 q1)
    set_cross(&mut a, P1, Q2, spec.omega_b / 2.0);
    set_cross(&mut a, P2, Q1, -spec.omega_b / 2.0);
    QuadForm4 { entries: a }
}

/// `H(q) = qᵀ A q` with `q = T R` becomes `Rᵀ (Tᵀ A T) R`.
pub fn pullback_quadratic_form(a_nc: &QuadForm4, t: &LinearMap4) -> QuadForm4 {
    let t = t.matrix();
    QuadForm4::symmetrized(t.transpose() * a_nc.entries * t)
}

/// γ = (θ/2ħ) mΩ² + η/(2mħ). Needs no SW scaling.
pub fn gamma_shift(spec: &OscillatorSpec, theta: f64, eta: f64, hbar: f64) -> f64 {
    theta / (2.0 * hbar) * spec.mass * spec.omega2 + eta / (2.0 * spec.mass * hbar)
}

/// Coefficients of the commutative-frame Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffSet {
    alpha2: f64,
    beta2: f64,
    gamma: f64,
    rate: f64,
    omega_b: f64,
}

impl CoeffSet {
    pub fn new(alpha2: f64, beta2: f64, gamma: f64, omega_b: f64) -> Result<Self> {
        if !(alpha2.is_finite() && alpha2 > 0.0 && beta2.is_finite() && beta2 > 0.0) {
            return Err(domain(format!(
                "alpha2 and beta2 must be > 0, got {alpha2} and {beta2}"
            )));
        }
        if !gamma.is_finite() || !(omega_b.is_finite() && omega_b >= 0.0) {
            return Err(domain("gamma and omega_B must be finite"));
        }
        Ok(Self {
            alpha2,
            beta2,
            gamma,
            rate: omega_b / 2.0 + gamma,
            omega_b,
        })
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha2.sqrt()
    }

    pub fn beta(&self) -> f64 {
        self.beta2.sqrt()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    /// Γ = ω_B/2 + γ, the mode-mixing rate.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// The commutative-frame form: diagonal `(α², β², α², β²)` and
    /// cross slots `±Γ/2`.
    pub fn quadratic_form(&self) -> QuadForm4 {
        let mut a = Matrix4::from_diagonal(&Vector4::new(
            self.alpha2,
            self.beta2,
            self.alpha2,
            self.beta2,
        ));
        set_cross(&mut a, P1, Q2, self.rate);
        set_cross(&mut a, P2, Q1, -self.rate);
        QuadForm4 { entries: a }
    }
}

pub fn closed_form_coefficients(spec: &OscillatorSpec, alg: &NcAlgebra) -> CoeffSet {
    let (m, w2, wb) = (spec.mass, spec.omega2, spec.omega_b);
    let (theta, eta, hbar) = (alg.theta(), alg.eta(), alg.hbar());
    let (mu, nu) = (alg.mu(), alg.nu());
    let alpha2 = nu * nu * m * w2 / 2.0
        + eta * eta / (8.0 * m * mu * mu * hbar * hbar)
        + (nu / mu) * wb * eta / (4.0 * hbar);
    let beta2 = mu * mu / (2.0 * m)
        + m * w2 * theta * theta / (8.0 * nu * nu * hbar * hbar)
        + (mu / nu) * wb * theta / (4.0 * hbar);
    let gamma = gamma_shift(spec, theta, eta, hbar);
    CoeffSet {
        alpha2,
        beta2,
        gamma,
        rate: wb / 2.0 + gamma,
        omega_b: wb,
    }
}

/// Max-abs difference between the exact pullback of the NC form and the
/// closed-form coefficient form.
pub fn coefficient_residual(spec: &OscillatorSpec, alg: &NcAlgebra) -> Result<f64> {
    let pulled = pullback_quadratic_form(&build_nc_quadratic_form(spec), &alg.sw_map()?);
    let closed = closed_form_coefficients(spec, alg).quadratic_form();
    Ok((pulled.entries - closed.entries).amax())
}

/// Norm of `[ΩA₀, ΩA_V]` where `A₀` is the local (diagonal) part and `A_V`
/// the mode coupling. A vanishing commutator means the coupling does no work.
pub fn parts_commute_check(coeffs: &CoeffSet) -> f64 {
    let form = coeffs.quadratic_form();
    let omega = standard_symplectic();
    let local = omega * form.diagonal_part().entries;
    let coupling = omega * form.off_diagonal_part().entries;
    (local * coupling - coupling * local).amax()
}

/// Maps physical quadratures to the rescaled ones, `u = Q/q`, `v = P/p`, with
/// `q = √(βħ/α)` and `p = √(αħ/β)`. In `(u, v)` the local Hamiltonian is
/// isotropic, `[u, v] = i`, and the vacuum has unit second moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScale {
    q: f64,
    p: f64,
    hbar: f64,
}

impl QuadratureScale {
    pub fn new(coeffs: &CoeffSet, hbar: f64) -> Self {
        let (a, b) = (coeffs.alpha(), coeffs.beta());
        Self {
            q: (b * hbar / a).sqrt(),
            p: (a * hbar / b).sqrt(),
            hbar,
        }
    }

    /// Physical length per unit `u`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Physical momentum per unit `v`.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `diag(q, p, q, p)`: physical = D · rescaled.
    pub fn to_physical(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::new(self.q, self.p, self.q, self.p))
    }

    /// The generator of the rescaled flow, `D A D / ħ`, for a physical form `A`.
    pub fn rescale_generator(&self, form: &QuadForm4) -> QuadForm4 {
        let d = self.to_physical();
        QuadForm4::symmetrized(d * form.entries * d / self.hbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> OscillatorSpec {
        OscillatorSpec::new(1.0, 4.0, 1.0).unwrap()
    }

    #[test]
    fn nc_form_entries() {
        let a = build_nc_quadratic_form(&base());
        let m = a.matrix();
        assert_eq!(m.diagonal(), Vector4::new(8.125, 0.5, 8.125, 0.5));
        assert_eq!(m[(P1, Q2)], 0.25);
        assert_eq!(m[(Q2, P1)], 0.25);
        assert_eq!(m[(P2, Q1)], -0.25);
        assert_eq!(m[(Q1, P2)], -0.25);
        assert_eq!(m[(Q1, P1)], 0.0);
        assert_eq!(a.value(&Vector4::new(1.0, 0.0, 0.0, 0.0)), 8.125);
        assert!(QuadForm4::new(*m).is_ok());
    }

    #[test]
    fn uncoupled_form_is_block_diagonal() {
        let a = build_nc_quadratic_form(&OscillatorSpec::new(1.0, 4.0, 0.0).unwrap());
        assert_eq!(a.entry(P1, Q2), 0.0);
        assert_eq!(a.off_diagonal_part().matrix().amax(), 0.0);
    }

    #[test]
    fn identity_pullback_is_noop() {
        let a = build_nc_quadratic_form(&base());
        assert_eq!(pullback_quadratic_form(&a, &LinearMap4::identity()), a);
    }

    #[test]
    fn commutative_limit_coefficients() {
        let spec = base();
        let alg = NcAlgebra::commutative(1.0).unwrap();
        let c = closed_form_coefficients(&spec, &alg);
        assert_eq!(c.alpha2(), spec.mass() * spec.omega2() / 2.0);
        assert_eq!(c.beta2(), 0.5);
        assert_eq!(c.gamma(), 0.0);
        assert_eq!(c.rate(), 0.5);
        let pulled = pullback_quadratic_form(&build_nc_quadratic_form(&spec), &alg.sw_map().unwrap());
        assert_eq!(pulled, c.quadratic_form());
        assert_eq!(coefficient_residual(&spec, &alg).unwrap(), 0.0);
    }

    #[test]
    fn pure_eta_shift_hand_expansion() {
        // θ = 0, η = 1: p1 = P1 + Q2/2, p2 = P2 − Q1/2; kinetic gives P1Q2/2 − P2Q1/2.
        let spec = base();
        let alg = NcAlgebra::new(0.0, 1.0, 1.0).unwrap();
        let pulled = pullback_quadratic_form(&build_nc_quadratic_form(&spec), &alg.sw_map().unwrap());
        assert!((pulled.entry(P1, Q2) - (0.5 + 0.5) / 2.0).abs() < 1e-15);
        let c = closed_form_coefficients(&spec, &alg);
        assert_eq!(c.gamma(), 0.5);
        assert_eq!(c.rate(), 1.0);
    }

    #[test]
    fn pure_theta_gamma_point_one() {
        let theta = 0.1 * 2.0 / 16.25;
        let c = closed_form_coefficients(&base(), &NcAlgebra::new(theta, 0.0, 1.0).unwrap());
        assert!((c.gamma() - 0.1).abs() < 1e-15);
        assert!((c.rate() - 0.6).abs() < 1e-15);
        let rounded = closed_form_coefficients(&base(), &NcAlgebra::new(0.012_307_692_3, 0.0, 1.0).unwrap());
        assert!((rounded.gamma() - 0.1).abs() < 1e-9);
    }

    #[test]
    fn coefficient_residual_three_quarters() {
        let spec = base();
        let alg = NcAlgebra::new(0.75, 1.0, 1.0).unwrap();
        assert!(coefficient_residual(&spec, &alg).unwrap() < 1e-12);
        let pulled = pullback_quadratic_form(&build_nc_quadratic_form(&spec), &alg.sw_map().unwrap());
        assert!(pulled.same_mode_cross() < 1e-12);
    }

    #[test]
    fn inverse_hbar_squared_alpha_term_fails_pullback() {
        // With 1/4ħ² in the ω_B η term the closed form disagrees with the exact
        // pullback whenever ħ ≠ 1.
        let spec = base();
        let hbar = 2.0;
        let alg = NcAlgebra::new(0.5, 1.5, hbar).unwrap();
        let c = closed_form_coefficients(&spec, &alg);
        let pulled = pullback_quadratic_form(&build_nc_quadratic_form(&spec), &alg.sw_map().unwrap());
        let (mu, nu) = (alg.mu(), alg.nu());
        let wrong = c.alpha2() - (nu / mu) * spec.omega_b() * alg.eta() / (4.0 * hbar)
            + (nu / mu) * spec.omega_b() * alg.eta() / (4.0 * hbar * hbar);
        assert!((pulled.entry(Q1, Q1) - c.alpha2()).abs() < 1e-12);
        assert!((pulled.entry(Q1, Q1) - wrong).abs() > 1e-3);
    }

    #[test]
    fn parts_commute() {
        let none = CoeffSet::new(8.125, 0.5, 0.0, 0.0).unwrap();
        assert_eq!(parts_commute_check(&none), 0.0);
        let c = closed_form_coefficients(&base(), &NcAlgebra::new(0.0, 1.0, 1.0).unwrap());
        assert!(parts_commute_check(&c) < 1e-12);
        let scaled = CoeffSet::new(1.0, 1.0, 0.3, 1.0).unwrap();
        assert!(parts_commute_check(&scaled) < 1e-12);
    }

    #[test]
    fn asymmetric_form_rejected() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 1e-17;
        assert!(matches!(QuadForm4::new(m), Err(Error::NonSymmetric { .. })));
        assert!(CoeffSet::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(OscillatorSpec::new(0.0, 1.0, 1.0).is_err());
        assert!(OscillatorSpec::new(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn rescaled_generator_is_isotropic() {
        let c = closed_form_coefficients(&base(), &NcAlgebra::new(0.3, 0.7, 1.0).unwrap());
        let scale = QuadratureScale::new(&c, 1.0);
        assert!((scale.q() * scale.p() - 1.0).abs() < 1e-15);
        let g = scale.rescale_generator(&c.quadratic_form());
        let ab = c.alpha() * c.beta();
        for i in 0..4 {
            assert!((g.entry(i, i) - ab).abs() < 1e-12);
        }
        assert!((g.entry(P1, Q2) - c.rate() / 2.0).abs() < 1e-12);
    }
}
