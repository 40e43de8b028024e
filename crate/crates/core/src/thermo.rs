//! Closed-form thermodynamics of the `(k, l) = (0, 1)` heat-exchange protocol.
//!
//! A dimensionless local moment block `M` becomes a thermal covariance matrix
//! `σ = (ħω/4)(2n̄+1) · M` and the internal energy is `E = Tr σ`. With
//! `Γ = γ + ω_B/2`:
//!
//! ```text
//! σ₁(t) = (ħω/4)(2n̄+1) (2 − cos Γt) · I      E₁(t) = ħω(2n̄+1) [1 − ½ cos Γt]
//! σ₂(t) = (ħω/4)(2m̄+1) (2 + cos Γt) · I      E₂(t) = (ħω/2)(2m̄+1) [2 + cos Γt]
//! ```
//!
//! Integrating the Laguerre–Wigner states directly gives local moments that
//! oscillate as `cos 2Γt`, so `scale(moments(t)) = σ(2t)`. Both routes are
//! kept; see [`crate::wigner_oracle`].

use nalgebra::Matrix2;

use crate::error::{domain, Error, Result};
use crate::wigner_oracle::LocalMoments;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    /// 0 for mode 1, 1 for mode 2.
    pub fn index(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
        }
    }
}

/// Bose occupation `n̄ = 1/(exp(ħω/k_BT) − 1)`.
pub fn mean_occupation(temperature: f64, omega: f64, hbar: f64, k_b: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(domain(format!("temperature must be > 0, got {temperature}")));
    }
    check_positive(omega, hbar, k_b)?;
    Ok(1.0 / (hbar * omega / (k_b * temperature)).exp_m1())
}

/// Inverse of [`mean_occupation`]: `T = ħω / (k_B ln(1 + 1/n̄))`.
pub fn temperature_of(n_bar: f64, omega: f64, hbar: f64, k_b: f64) -> Result<f64> {
    if !(n_bar > 0.0) || !n_bar.is_finite() {
        return Err(domain(format!("mean occupation must be > 0, got {n_bar}")));
    }
    check_positive(omega, hbar, k_b)?;
    Ok(hbar * omega / (k_b * (1.0 / n_bar).ln_1p()))
}

fn check_positive(omega: f64, hbar: f64, k_b: f64) -> Result<()> {
    for (name, v) in [("omega", omega), ("hbar", hbar), ("k_B", k_b)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(domain(format!("{name} must be > 0, got {v}")));
        }
    }
    Ok(())
}

/// Occupations of the two modes plus the constants that turn them into energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPair {
    n_bar: f64,
    m_bar: f64,
    omega: f64,
    hbar: f64,
    k_b: f64,
}

impl ThermalPair {
    pub fn new(n_bar: f64, m_bar: f64, omega: f64, hbar: f64, k_b: f64) -> Result<Self> {
        for (name, v) in [("n_bar", n_bar), ("m_bar", m_bar)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        check_positive(omega, hbar, k_b)?;
        Ok(Self {
            n_bar,
            m_bar,
            omega,
            hbar,
            k_b,
        })
    }

    pub fn from_temperatures(t1: f64, t2: f64, omega: f64, hbar: f64, k_b: f64) -> Result<Self> {
        Self::new(
            mean_occupation(t1, omega, hbar, k_b)?,
            mean_occupation(t2, omega, hbar, k_b)?,
            omega,
            hbar,
            k_b,
        )
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn m_bar(&self) -> f64 {
        self.m_bar
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    pub fn occupation(&self, mode: Mode) -> f64 {
        match mode {
            Mode::One => self.n_bar,
            Mode::Two => self.m_bar,
        }
    }

    /// `(ħω/4)(2n̄+1)` for the given mode.
    pub fn energy_scale(&self, mode: Mode) -> f64 {
        thermal_scale(self.occupation(mode), self.omega, self.hbar)
    }

    pub fn temperature(&self, mode: Mode) -> Result<f64> {
        temperature_of(self.occupation(mode), self.omega, self.hbar, self.k_b)
    }
}

fn thermal_scale(n_bar: f64, omega: f64, hbar: f64) -> f64 {
    hbar * omega / 4.0 * (2.0 * n_bar + 1.0)
}

/// Energy-scaled local covariance matrix: `scale · block`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalCM {
    /// Dimensionless moment block.
    pub block: Matrix2<f64>,
    /// `(ħω/4)(2n̄+1)`.
    pub scale: f64,
    pub mode: Mode,
    pub t: f64,
}

impl ThermalCM {
    pub fn matrix(&self) -> Matrix2<f64> {
        self.block * self.scale
    }
}

/// `cos Γt` with `Γ = γ + ω_B/2`, the common argument of the closed forms.
fn bracket_cos(t: f64, gamma: f64, omega_b: f64) -> f64 {
    ((gamma + omega_b / 2.0) * t).cos()
}

/// Thermal covariance matrix of the `(0, 1)` protocol at time `t`.
pub fn closed_form_covariance(mode: Mode, t: f64, pair: &ThermalPair, gamma: f64, omega_b: f64) -> ThermalCM {
    let c = bracket_cos(t, gamma, omega_b);
    let factor = match mode {
        // (ħω/2)(2n̄+1)[1 − ½cos] = (ħω/4)(2n̄+1)(2 − cos)
        Mode::One => 2.0 - c,
        Mode::Two => 2.0 + c,
    };
    ThermalCM {
        block: Matrix2::identity() * factor,
        scale: pair.energy_scale(mode),
        mode,
        t,
    }
}

/// `E = Tr σ`.
pub fn internal_energy(cm: &ThermalCM) -> f64 {
    cm.matrix().trace()
}

/// The energy expressions written out directly, independent of [`ThermalCM`].
pub fn closed_form_energy(mode: Mode, t: f64, pair: &ThermalPair, gamma: f64, omega_b: f64) -> f64 {
    let c = bracket_cos(t, gamma, omega_b);
    let hw = pair.hbar * pair.omega;
    match mode {
        Mode::One => hw * (2.0 * pair.n_bar + 1.0) * (1.0 - 0.5 * c),
        Mode::Two => hw / 2.0 * (2.0 * pair.m_bar + 1.0) * (2.0 + c),
    }
}

pub fn heat_exchanged(e_t: f64, e_0: f64) -> f64 {
    e_t - e_0
}

/// `(E(t) − E(0)) / t`.
pub fn heating_power(e_t: f64, e_0: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain(format!("heating power needs t > 0, got {t}")));
    }
    Ok((e_t - e_0) / t)
}

/// `τ = 2 arccos[−2(m̄−n̄)/(1+m̄+n̄)] / (2γ + ω_B)`.
pub fn equilibrium_time(pair: &ThermalPair, gamma: f64, omega_b: f64) -> Result<f64> {
    let rate2 = 2.0 * gamma + omega_b;
    if !(rate2 > 0.0) {
        return Err(domain(format!("2*gamma + omega_B must be > 0, got {rate2}")));
    }
    let argument = -2.0 * (pair.m_bar - pair.n_bar) / (1.0 + pair.m_bar + pair.n_bar);
    if !(-1.0..=1.0).contains(&argument) {
        return Err(Error::NoEquilibrium { argument });
    }
    Ok(2.0 * argument.acos() / rate2)
}

/// `Q₁ (1/k_BT₁ − 1/k_BT₂)`; nonnegative when heat flows from hot to cold.
pub fn second_law_functional(q1: f64, t1: f64, t2: f64, k_b: f64) -> Result<f64> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(domain(format!("temperatures must be > 0, got {t1} and {t2}")));
    }
    if !(k_b > 0.0) {
        return Err(domain(format!("k_B must be > 0, got {k_b}")));
    }
    Ok(q1 * (1.0 / (k_b * t1) - 1.0 / (k_b * t2)))
}

/// Multiplies a dimensionless moment block by `(ħω/4)(2n̄+1)`.
pub fn scale_covariance(moments: &LocalMoments, mode: Mode, n_bar: f64, omega: f64, hbar: f64) -> ThermalCM {
    ThermalCM {
        block: moments.cm,
        scale: thermal_scale(n_bar, omega, hbar),
        mode,
        t: moments.t,
    }
}

/// Energies, heat and power of the protocol for one choice of `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatFlow {
    pub pair: ThermalPair,
    pub gamma: f64,
    pub omega_b: f64,
}

impl HeatFlow {
    pub fn new(pair: ThermalPair, gamma: f64, omega_b: f64) -> Self {
        Self { pair, gamma, omega_b }
    }

    /// Γ = γ + ω_B/2.
    pub fn rate(&self) -> f64 {
        self.gamma + self.omega_b / 2.0
    }

    pub fn energy(&self, mode: Mode, t: f64) -> f64 {
        internal_energy(&closed_form_covariance(mode, t, &self.pair, self.gamma, self.omega_b))
    }

    pub fn heat(&self, mode: Mode, t: f64) -> f64 {
        heat_exchanged(self.energy(mode, t), self.energy(mode, 0.0))
    }

    /// Heating power of the colder mode 1; zero at `t = 0` by continuity.
    pub fn power(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        heating_power(self.energy(Mode::One, t), self.energy(Mode::One, 0.0), t)
    }

    pub fn equilibrium_time(&self) -> Result<f64> {
        equilibrium_time(&self.pair, self.gamma, self.omega_b)
    }

    /// Second-law functional at time `t` using the temperatures of the
    /// initial occupations.
    pub fn second_law(&self, t: f64) -> Result<f64> {
        second_law_functional(
            self.heat(Mode::One, t),
            self.pair.temperature(Mode::One)?,
            self.pair.temperature(Mode::Two)?,
            self.pair.k_b,
        )
    }

    /// `|Q₁ + Q₂|`. Zero for every `t` only when `n̄ = m̄`.
    pub fn heat_conservation_residual(&self, t: f64) -> f64 {
        (self.heat(Mode::One, t) + self.heat(Mode::Two, t)).abs()
    }
}
