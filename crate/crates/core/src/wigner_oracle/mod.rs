//! Laguerre–Wigner two-mode states and their local moments.
//!
//! The state with quantum numbers `(k, l)` evolving under the mode-mixing
//! rate Γ has the Wigner function
//!
//! ```text
//! W(R, t) = (−1)^{k+l} / (π²ħ²) · exp[−(ξ₁² + ξ₂²)/ħ] · L_k(2ξ₁²/ħ) · L_l(2ξ₂²/ħ)
//! ```
//!
//! with `ξ₁², ξ₂²` the rotated local quadratic forms built by [`xi_forms`].
//! The `P₂²` term of `ξ₂²` mirrors the `P₁²` term of `ξ₁²`.
//!
//! Moments are integrated in the rescaled quadratures of
//! [`QuadratureScale`], where `ξ₁² + ξ₂² = ħ |u|²` for every `t`. The
//! Gaussian factor is then exactly the Gauss–Hermite weight and the
//! remaining integrand is a polynomial of degree `2(k + l)` per axis, so a
//! rule with `k + l + 2` points integrates every second moment exactly.

mod grid;
mod quadrature;

pub use grid::{gaussian_wigner, wigner_grid, GridSource, GridWindow, WignerGrid};
pub use quadrature::GaussHermite;

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::{CoeffSet, QuadForm4, QuadratureScale};
use crate::nc_algebra::{P1, P2, Q1, Q2};

/// Largest `k + l` accepted by [`FockPair`].
pub const MAX_FOCK_SUM: usize = 32;

/// Default Gauss–Hermite points per axis.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockPair {
    k: usize,
    l: usize,
}

impl FockPair {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k + l > MAX_FOCK_SUM {
            return Err(Error::InvalidFockPair {
                k,
                l,
                max: MAX_FOCK_SUM,
            });
        }
        Ok(Self { k, l })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn swapped(&self) -> Self {
        Self {
            k: self.l,
            l: self.k,
        }
    }

    /// Fewest quadrature points per axis that integrate all second moments exactly.
    pub fn min_order(&self) -> usize {
        self.k + self.l + 2
    }
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 1.0 - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 - x) * curr - jf * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// cos Γt, sin Γt and sin 2Γt.
#[derive(Debug, Clone, Copy)]
struct Mixing {
    c: f64,
    s: f64,
    s2: f64,
}

impl Mixing {
    fn new(rate: f64, t: f64) -> Self {
        let (s, c) = (rate * t).sin_cos();
        Self {
            c,
            s,
            s2: (2.0 * rate * t).sin(),
        }
    }

    /// `(ξ₁², ξ₂²)` at `r = (Q1, P1, Q2, P2)` with position weight `wq` and
    /// momentum weight `wp`.
    fn xi(&self, wq: f64, wp: f64, r: &[f64; 4]) -> (f64, f64) {
        let a1 = wq * r[Q1] * r[Q1] + wp * r[P1] * r[P1];
        let a2 = wq * r[Q2] * r[Q2] + wp * r[P2] * r[P2];
        let x = wq * r[Q1] * r[Q2] + wp * r[P1] * r[P2];
        let (c2, s2) = (self.c * self.c, self.s * self.s);
        (
            c2 * a1 + s2 * a2 - self.s2 * x,
            s2 * a1 + c2 * a2 + self.s2 * x,
        )
    }
}

/// The quadratic forms `ξ₁²` and `ξ₂²` over `(Q1, P1, Q2, P2)` at time `t`.
pub fn xi_forms(coeffs: &CoeffSet, t: f64) -> (QuadForm4, QuadForm4) {
    let mix = Mixing::new(coeffs.rate(), t);
    let wq = coeffs.alpha() / coeffs.beta();
    let wp = coeffs.beta() / coeffs.alpha();
    let (c2, s2) = (mix.c * mix.c, mix.s * mix.s);
    let build = |own: f64, other: f64, cross: f64, first: bool| {
        let mut m = Matrix4::zeros();
        let (mine, theirs) = if first { ((Q1, P1), (Q2, P2)) } else { ((Q2, P2), (Q1, P1)) };
        m[(mine.0, mine.0)] = own * wq;
        m[(mine.1, mine.1)] = own * wp;
        m[(theirs.0, theirs.0)] = other * wq;
        m[(theirs.1, theirs.1)] = other * wp;
        m[(Q1, Q2)] = cross * wq / 2.0;
        m[(Q2, Q1)] = cross * wq / 2.0;
        m[(P1, P2)] = cross * wp / 2.0;
        m[(P2, P1)] = cross * wp / 2.0;
        QuadForm4::symmetrized(m)
    };
    (
        build(c2, s2, -mix.s2, true),
        build(c2, s2, mix.s2, false),
    )
}

fn parity(pair: &FockPair) -> f64 {
    if (pair.k + pair.l).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Wigner function of the `(k, l)` state at phase point `r` and time `t`.
pub fn wigner_value(pair: &FockPair, r: &Vector4<f64>, t: f64, coeffs: &CoeffSet, hbar: f64) -> f64 {
    let mix = Mixing::new(coeffs.rate(), t);
    let wq = coeffs.alpha() / coeffs.beta();
    let wp = coeffs.beta() / coeffs.alpha();
    let (x1, x2) = mix.xi(wq, wp, &[r[0], r[1], r[2], r[3]]);
    let (y1, y2) = (x1 / hbar, x2 / hbar);
    parity(pair) / (PI * PI * hbar * hbar)
        * (-(y1 + y2)).exp()
        * laguerre(pair.k, 2.0 * y1)
        * laguerre(pair.l, 2.0 * y2)
}

/// `W · ħ² · e^{|u|²}` in rescaled coordinates: the polynomial left over
/// once the Gaussian factor is absorbed into the quadrature weight.
fn reduced_wigner(pair: &FockPair, mix: &Mixing, u: &[f64; 4]) -> f64 {
    let (y1, y2) = mix.xi(1.0, 1.0, u);
    parity(pair) / (PI * PI) * laguerre(pair.k, 2.0 * y1) * laguerre(pair.l, 2.0 * y2)
}

/// Local (single-mode) moments in rescaled quadratures `(u, v)`.
///
/// `cm` uses `σ_ab = ⟨ab + ba⟩ − 2⟨a⟩⟨b⟩`, so the vacuum is the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMoments {
    pub cm: Matrix2<f64>,
    pub first: Vector2<f64>,
    pub t: f64,
    /// Conversion back to physical `(Q, P)`, when known.
    pub scale: Option<QuadratureScale>,
}

impl LocalMoments {
    pub fn vacuum(t: f64) -> Self {
        Self {
            cm: Matrix2::identity(),
            first: Vector2::zeros(),
            t,
            scale: None,
        }
    }

    pub fn trace(&self) -> f64 {
        self.cm.trace()
    }

    /// Second moments in physical units: `σ_QQ = q² σ_uu`, `σ_QP = qp σ_uv`, `σ_PP = p² σ_vv`.
    pub fn physical_cm(&self) -> Option<Matrix2<f64>> {
        self.scale.map(|s| {
            let d = Matrix2::from_diagonal(&Vector2::new(s.q(), s.p()));
            d * self.cm * d
        })
    }
}

/// Raw integrals of the two-mode Wigner function in rescaled quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceMoments {
    /// `∫ W d⁴R`.
    pub norm: f64,
    /// First moments `⟨u1⟩, ⟨v1⟩, ⟨u2⟩, ⟨v2⟩`.
    pub mean: Vector4<f64>,
    /// Full 4×4 covariance matrix.
    pub cm: Matrix4<f64>,
    pub t: f64,
}

impl PhaseSpaceMoments {
    /// Local block of mode 1 (`mode == 0`) or mode 2 (`mode == 1`).
    pub fn local(&self, mode: usize, scale: Option<QuadratureScale>) -> LocalMoments {
        let o = 2 * mode;
        LocalMoments {
            cm: self.cm.fixed_view::<2, 2>(o, o).into_owned(),
            first: Vector2::new(self.mean[o], self.mean[o + 1]),
            t: self.t,
            scale,
        }
    }
}

/// Tensor-product Gauss–Hermite integrator over the 4-D rescaled phase space.
#[derive(Debug, Clone)]
pub struct MomentIntegrator {
    rule: GaussHermite,
}

impl MomentIntegrator {
    pub fn new(order: usize) -> Result<Self> {
        Ok(Self {
            rule: GaussHermite::new(order)?,
        })
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    fn check_order(&self, pair: &FockPair) -> Result<()> {
        if self.order() < pair.min_order() {
            return Err(Error::OrderTooLow {
                order: self.order(),
                required: pair.min_order(),
            });
        }
        Ok(())
    }

    /// Norm, first and second moments of the `(k, l)` state at time `t`
    /// under mixing rate `rate`.
    pub fn moments(&self, pair: &FockPair, t: f64, rate: f64) -> Result<PhaseSpaceMoments> {
        self.check_order(pair)?;
        let mix = Mixing::new(rate, t);
        let x = self.rule.nodes();
        let w = self.rule.weights();
        let n = x.len();

        // [norm, 4 first moments, 10 upper-triangular second moments]
        let partials: Vec<[f64; 15]> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut acc = [0.0; 15];
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let u = [x[a], x[b], x[c], x[d]];
                            let f = w[a] * w[b] * w[c] * w[d] * reduced_wigner(pair, &mix, &u);
                            acc[0] += f;
                            let mut slot = 5;
                            for i in 0..4 {
                                acc[1 + i] += f * u[i];
                                for j in i..4 {
                                    acc[slot] += f * u[i] * u[j];
                                    slot += 1;
                                }
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = [0.0; 15];
        for p in &partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t += v;
            }
        }

        let mean = Vector4::new(total[1], total[2], total[3], total[4]);
        let mut cm = Matrix4::zeros();
        let mut slot = 5;
        for i in 0..4 {
            for j in i..4 {
                let v = 2.0 * total[slot] - 2.0 * mean[i] * mean[j];
                cm[(i, j)] = v;
                cm[(j, i)] = v;
                slot += 1;
            }
        }
        Ok(PhaseSpaceMoments {
            norm: total[0],
            mean,
            cm,
            t,
        })
    }

    /// Reduced Wigner function of one mode at rescaled point `(u, v)`,
    /// as a density per `du dv`. `mode` is 0 or 1.
    pub fn marginal(&self, pair: &FockPair, mode: usize, u: f64, v: f64, t: f64, rate: f64) -> Result<f64> {
        self.check_order(pair)?;
        let mix = Mixing::new(rate, t);
        let x = self.rule.nodes();
        let w = self.rule.weights();
        let mut sum = 0.0;
        for (&xi, &wi) in x.iter().zip(w) {
            for (&xj, &wj) in x.iter().zip(w) {
                let point = if mode == 0 { [u, v, xi, xj] } else { [xi, xj, u, v] };
                sum += wi * wj * reduced_wigner(pair, &mix, &point);
            }
        }
        Ok((-(u * u + v * v)).exp() * sum)
    }
}

/// Local moments of both modes by Gauss–Hermite quadrature of the
/// two-mode Wigner function (the partial trace over the other mode).
pub fn quadrature_local_moments(
    pair: &FockPair,
    t: f64,
    coeffs: &CoeffSet,
    hbar: f64,
    order: usize,
) -> Result<(LocalMoments, LocalMoments)> {
    if order < pair.min_order() {
        return Err(Error::OrderTooLow {
            order,
            required: pair.min_order(),
        });
    }
    let moments = MomentIntegrator::new(order)?.moments(pair, t, coeffs.rate())?;
    let scale = Some(QuadratureScale::new(coeffs, hbar));
    Ok((moments.local(0, scale), moments.local(1, scale)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{closed_form_coefficients, OscillatorSpec};
    use crate::nc_algebra::NcAlgebra;

    fn coeffs() -> CoeffSet {
        closed_form_coefficients(
            &OscillatorSpec::new(1.0, 4.0, 1.0).unwrap(),
            &NcAlgebra::new(0.0, 1.0, 1.0).unwrap(),
        )
    }

    // L_n(x) = Σ_j C(n, j) (−x)^j / j!
    fn laguerre_sum(n: usize, x: f64) -> f64 {
        let mut total = 0.0;
        let mut binom = 1.0;
        let mut fact = 1.0;
        for j in 0..=n {
            if j > 0 {
                binom *= (n + 1 - j) as f64 / j as f64;
                fact *= j as f64;
            }
            total += binom * (-x).powi(j as i32) / fact;
        }
        total
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 0.25), 0.75);
        assert!((laguerre(2, 3.0) + 0.5).abs() < 1e-15);
        for n in 0..12 {
            for &x in &[0.0, 0.3, 1.7, 5.0] {
                assert!((laguerre(n, x) - laguerre_sum(n, x)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn xi_forms_limits() {
        let c = coeffs();
        let (f1, f2) = xi_forms(&c, 0.0);
        let (wq, wp) = (c.alpha() / c.beta(), c.beta() / c.alpha());
        assert_eq!(f1.matrix().diagonal(), Vector4::new(wq, wp, 0.0, 0.0));
        assert_eq!(f2.matrix().diagonal(), Vector4::new(0.0, 0.0, wq, wp));

        let swap_t = std::f64::consts::FRAC_PI_2 / c.rate();
        let (g1, g2) = xi_forms(&c, swap_t);
        assert!((g1.matrix() - f2.matrix()).amax() < 1e-14);
        assert!((g2.matrix() - f1.matrix()).amax() < 1e-14);

        for t in [0.1, 0.77, 3.2, 10.0] {
            let (a, b) = xi_forms(&c, t);
            assert!((a.matrix() + b.matrix() - f1.matrix() - f2.matrix()).amax() < 1e-14);
        }
    }

    #[test]
    fn wigner_at_origin() {
        let c = coeffs();
        let origin = Vector4::zeros();
        let vac = FockPair::new(0, 0).unwrap();
        assert_eq!(wigner_value(&vac, &origin, 1.3, &c, 1.0), 1.0 / (PI * PI));
        let one = FockPair::new(0, 1).unwrap();
        assert_eq!(wigner_value(&one, &origin, 0.0, &c, 1.0), -1.0 / (PI * PI));
        let hbar = 0.5;
        assert_eq!(wigner_value(&vac, &origin, 0.0, &c, hbar), 1.0 / (PI * PI * hbar * hbar));
    }

    #[test]
    fn reduced_integrand_matches_wigner_value() {
        let c = coeffs();
        let hbar = 0.7;
        let scale = QuadratureScale::new(&c, hbar);
        let pair = FockPair::new(2, 1).unwrap();
        let t = 0.9;
        let mix = Mixing::new(c.rate(), t);
        for u in [[0.1, -0.4, 0.8, 0.3], [1.2, 0.0, -0.5, 0.9], [0.0, 0.0, 0.0, 0.0]] {
            let r = Vector4::new(u[0] * scale.q(), u[1] * scale.p(), u[2] * scale.q(), u[3] * scale.p());
            let full = wigner_value(&pair, &r, t, &c, hbar);
            let norm2: f64 = u.iter().map(|x| x * x).sum();
            let rebuilt = reduced_wigner(&pair, &mix, &u) * (-norm2).exp() / (hbar * hbar);
            assert!((full - rebuilt).abs() < 1e-12 * full.abs().max(1e-3));
        }
    }

    #[test]
    fn vacuum_moments() {
        let (m1, m2) = quadrature_local_moments(&FockPair::new(0, 0).unwrap(), 0.8, &coeffs(), 1.0, 16).unwrap();
        assert!((m1.cm - Matrix2::identity()).amax() < 1e-13);
        assert!((m2.cm - Matrix2::identity()).amax() < 1e-13);
        assert!(m1.first.amax() < 1e-13);
    }

    #[test]
    fn fock_one_moments_follow_double_frequency() {
        let c = coeffs();
        let pair = FockPair::new(0, 1).unwrap();
        let (m1, m2) = quadrature_local_moments(&pair, 0.0, &c, 1.0, 16).unwrap();
        assert!((m1.cm - Matrix2::identity()).amax() < 1e-12);
        assert!((m2.cm - Matrix2::<f64>::identity() * 3.0).amax() < 1e-12);
        for t in [0.3, 1.1, 2.5] {
            let (m1, m2) = quadrature_local_moments(&pair, t, &c, 1.0, 16).unwrap();
            let cos2 = (2.0 * c.rate() * t).cos();
            assert!((m1.cm - (2.0 - cos2) * Matrix2::identity()).amax() < 1e-12);
            assert!((m2.cm - (2.0 + cos2) * Matrix2::identity()).amax() < 1e-12);
        }
    }

    #[test]
    fn minimal_order_is_exact() {
        let c = coeffs();
        let pair = FockPair::new(1, 2).unwrap();
        let (a1, a2) = quadrature_local_moments(&pair, 0.4, &c, 1.0, pair.min_order()).unwrap();
        let (b1, b2) = quadrature_local_moments(&pair, 0.4, &c, 1.0, 16).unwrap();
        assert!((a1.cm - b1.cm).amax() < 1e-11);
        assert!((a2.cm - b2.cm).amax() < 1e-11);
    }

    #[test]
    fn order_too_low() {
        let pair = FockPair::new(2, 2).unwrap();
        assert_eq!(
            quadrature_local_moments(&pair, 0.0, &coeffs(), 1.0, 5),
            Err(Error::OrderTooLow { order: 5, required: 6 })
        );
        assert!(FockPair::new(20, 13).is_err());
        assert!(FockPair::new(20, 12).is_ok());
    }

    #[test]
    fn physical_cm_scaling() {
        let c = coeffs();
        let (m1, _) = quadrature_local_moments(&FockPair::new(0, 0).unwrap(), 0.0, &c, 2.0, 8).unwrap();
        let phys = m1.physical_cm().unwrap();
        let s = m1.scale.unwrap();
        assert!((phys[(0, 0)] - s.q() * s.q()).abs() < 1e-12);
        assert!((phys[(1, 1)] - s.p() * s.p()).abs() < 1e-12);
        assert!(LocalMoments::vacuum(0.0).physical_cm().is_none());
    }

    #[test]
    fn marginal_normalized() {
        let integ = MomentIntegrator::new(16).unwrap();
        let pair = FockPair::new(1, 1).unwrap();
        let rule = GaussHermite::new(20).unwrap();
        // ∫ marginal du dv = ∫ e^{-u²-v²} (marginal e^{u²+v²}) du dv
        let mut total = 0.0;
        for (&u, &wu) in rule.nodes().iter().zip(rule.weights()) {
            for (&v, &wv) in rule.nodes().iter().zip(rule.weights()) {
                let m = integ.marginal(&pair, 0, u, v, 0.6, 1.0).unwrap();
                total += wu * wv * m * (u * u + v * v).exp();
            }
        }
        assert!((total - 1.0).abs() < 1e-12);
    }
}
