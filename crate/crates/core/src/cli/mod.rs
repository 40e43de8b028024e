//! The four `nctherm` subcommands: `simulate`, `sweep`, `wigner`, `verify`.
//!
//! CSV output is comma-separated with a header row, numbers printed with 15
//! significant digits and `nan` for missing values; metadata follows the data
//! as `# key=value` lines.

mod config;
mod verify;

pub use config::{NcChoice, Params, RunConfig, KEYS};
pub use verify::{
    compare_oracles, run_verify, time_grid, CheckResult, OracleComparison, Status, VerifyReport,
};

use std::io::{self, Write};

use nalgebra::Vector2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::gamma_shift;
use crate::nc_algebra::solve_sw_scaling;
use crate::numfmt::fmt_g;
use crate::thermo::{closed_form_covariance, HeatFlow, Mode, ThermalCM};
use crate::wigner_oracle::{wigner_grid, GridSource, GridWindow, WignerGrid};

/// Grid half-width in standard deviations of the wider mode.
pub const WINDOW_SIGMAS: f64 = 6.0;
pub const DEFAULT_RESOLUTION: usize = 101;

/// One row of a `simulate` time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimRow {
    pub t: f64,
    pub e1: f64,
    pub e2: f64,
    pub q1: f64,
    pub q2: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub gamma: f64,
    pub rate: f64,
    /// NaN when the energies never cross.
    pub tau: f64,
    pub rows: Vec<SimRow>,
}

impl Simulation {
    pub fn heat_conservation_residual(&self) -> f64 {
        self.rows.iter().map(|r| (r.q1 + r.q2).abs()).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,E1,E2,Q1,Q2,P")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_g(r.t),
                fmt_g(r.e1),
                fmt_g(r.e2),
                fmt_g(r.q1),
                fmt_g(r.q2),
                fmt_g(r.power)
            )?;
        }
        writeln!(out, "# gamma={}", fmt_g(self.gamma))?;
        writeln!(out, "# Gamma={}", fmt_g(self.rate))?;
        writeln!(out, "# tau={}", fmt_g(self.tau))?;
        writeln!(out, "# heat_conservation_residual={}", fmt_g(self.heat_conservation_residual()))
    }
}

/// Energies, heats and heating power on `steps` points over `[0, min(t_max, τ)]`.
pub fn run_simulate(params: &Params) -> Result<Simulation> {
    let flow = HeatFlow::new(params.thermal, params.gamma(), params.spec.omega_b());
    let tau = match flow.equilibrium_time() {
        Ok(tau) => tau,
        Err(Error::NoEquilibrium { .. }) => f64::NAN,
        Err(e) => return Err(e),
    };
    let t_end = match (params.t_max, tau.is_nan()) {
        (Some(t), false) => t.min(tau),
        (Some(t), true) => t,
        (None, false) => tau,
        (None, true) => {
            return Err(Error::Config("no equilibrium time exists; t_max is required".into()))
        }
    };
    let last = (params.steps - 1) as f64;
    let rows = (0..params.steps)
        .map(|i| {
            let t = t_end * i as f64 / last;
            Ok(SimRow {
                t,
                e1: flow.energy(Mode::One, t),
                e2: flow.energy(Mode::Two, t),
                q1: flow.heat(Mode::One, t),
                q2: flow.heat(Mode::Two, t),
                power: flow.power(t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Simulation {
        gamma: flow.gamma,
        rate: flow.rate(),
        tau,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFlag {
    Ok,
    NoEquilibrium,
    NoRealScaling,
}

impl SweepFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepFlag::Ok => "ok",
            SweepFlag::NoEquilibrium => "no_equilibrium",
            SweepFlag::NoRealScaling => "no_real_scaling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// NaN when γ was given directly.
    pub theta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub rate: f64,
    pub tau: f64,
    pub power_at_tau: f64,
    pub second_law_at_tau: f64,
    pub flag: SweepFlag,
}

/// Points of a sweep: an explicit γ list or a θ × η grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepPoints {
    Gammas(Vec<f64>),
    Grid { thetas: Vec<f64>, etas: Vec<f64> },
}

impl SweepPoints {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        match (cfg.list("gammas")?, cfg.list("thetas")?, cfg.list("etas")?) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                Err(Error::Config("give either gammas or thetas/etas for a sweep".into()))
            }
            (Some(g), None, None) if !g.is_empty() => Ok(Self::Gammas(g)),
            (None, Some(thetas), Some(etas)) if !thetas.is_empty() && !etas.is_empty() => {
                Ok(Self::Grid { thetas, etas })
            }
            _ => Err(Error::Config("sweep needs a nonempty `gammas` list or `thetas` and `etas` lists".into())),
        }
    }
}

fn sweep_point(params: &Params, theta: f64, eta: f64, gamma: f64, scaling_ok: bool) -> SweepRow {
    let flow = HeatFlow::new(params.thermal, gamma, params.spec.omega_b());
    let mut row = SweepRow {
        theta,
        eta,
        gamma,
        rate: flow.rate(),
        tau: f64::NAN,
        power_at_tau: f64::NAN,
        second_law_at_tau: f64::NAN,
        flag: SweepFlag::Ok,
    };
    if !scaling_ok {
        row.flag = SweepFlag::NoRealScaling;
        return row;
    }
    match flow.equilibrium_time() {
        Ok(tau) => {
            row.tau = tau;
            row.power_at_tau = flow.power(tau).unwrap_or(f64::NAN);
            row.second_law_at_tau = flow.second_law(tau).unwrap_or(f64::NAN);
        }
        Err(_) => row.flag = SweepFlag::NoEquilibrium,
    }
    row
}

/// Evaluates every point concurrently; rows come back sorted by γ.
pub fn run_sweep(params: &Params, points: &SweepPoints) -> Vec<SweepRow> {
    let inputs: Vec<(f64, f64, f64, bool)> = match points {
        SweepPoints::Gammas(gs) => gs.iter().map(|&g| (f64::NAN, f64::NAN, g, true)).collect(),
        SweepPoints::Grid { thetas, etas } => thetas
            .iter()
            .flat_map(|&th| etas.iter().map(move |&et| (th, et)))
            .map(|(th, et)| {
                let ok = solve_sw_scaling(th, et, params.hbar).is_ok();
                (th, et, gamma_shift(&params.spec, th, et, params.hbar), ok)
            })
            .collect(),
    };
    let mut rows: Vec<SweepRow> = inputs
        .par_iter()
        .map(|&(th, et, g, ok)| sweep_point(params, th, et, g, ok))
        .collect();
    rows.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    rows
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,eta,gamma,Gamma,tau,P_tau,second_law_tau,flag")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_g(r.theta),
            fmt_g(r.eta),
            fmt_g(r.gamma),
            fmt_g(r.rate),
            fmt_g(r.tau),
            fmt_g(r.power_at_tau),
            fmt_g(r.second_law_at_tau),
            r.flag.as_str()
        )?;
    }
    Ok(())
}

/// Parses the `mode` key (1 or 2, default 1).
pub fn mode_from_config(cfg: &RunConfig) -> Result<Mode> {
    match cfg.get("mode").unwrap_or("1") {
        "1" => Ok(Mode::One),
        "2" => Ok(Mode::Two),
        other => Err(Error::Config(format!("mode must be 1 or 2, got {other}"))),
    }
}

/// Parses the `t` key; `tau` selects the equilibrium time.
pub fn time_from_config(cfg: &RunConfig, params: &Params) -> Result<f64> {
    match cfg.get("t") {
        None => Ok(0.0),
        Some("tau") => HeatFlow::new(params.thermal, params.gamma(), params.spec.omega_b()).equilibrium_time(),
        Some(_) => {
            let t = cfg.require_f64("t")?;
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("t must be >= 0, got {t}")));
            }
            Ok(t)
        }
    }
}

/// Gaussian Wigner grid of the thermal state of `mode` at time `t`, on a
/// window of ±6 standard deviations of the wider of the two modes.
pub fn run_wigner(params: &Params, mode: Mode, t: f64, resolution: usize) -> Result<WignerGrid> {
    let cm_of = |m: Mode| -> ThermalCM {
        closed_form_covariance(m, t, &params.thermal, params.gamma(), params.spec.omega_b())
    };
    let widest = [Mode::One, Mode::Two]
        .iter()
        .map(|&m| cm_of(m).matrix().symmetric_eigenvalues().max())
        .fold(0.0, f64::max);
    let window = GridWindow::symmetric(WINDOW_SIGMAS * widest.sqrt(), resolution)?;
    let source = GridSource::Gaussian {
        cm: cm_of(mode).matrix(),
        mean: Vector2::zeros(),
    };
    wigner_grid(&source, window, t)
}
