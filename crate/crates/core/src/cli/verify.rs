//! Cross-oracle self-check behind `nctherm verify`.

use std::io::{self, Write};

use nalgebra::{Matrix4, Vector4};

use super::Params;
use crate::error::Result;
use crate::gaussian_dynamics::{
    evolve_covariance, initial_pair_covariance, physicality_check, physicality_check_local,
    symplectic_propagator, CovState, Units,
};
use crate::hamiltonian::{
    build_nc_quadratic_form, closed_form_coefficients, coefficient_residual, parts_commute_check,
    pullback_quadratic_form, QuadratureScale,
};
use crate::nc_algebra::algebra_residual;
use crate::thermo::{closed_form_covariance, scale_covariance, HeatFlow, Mode};
use crate::wigner_oracle::{FockPair, MomentIntegrator};

/// Number of time points for the oracle comparisons.
pub const ORACLE_TIME_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this configuration.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    pub note: String,
}

impl CheckResult {
    /// Passes when `value <= tolerance`.
    fn below(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            status: if value <= tolerance { Status::Pass } else { Status::Fail },
            value,
            tolerance,
            note: String::new(),
        }
    }

    fn skip(name: &'static str, note: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::Skip,
            value: f64::NAN,
            tolerance: f64::NAN,
            note: note.into(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            if c.status == Status::Skip {
                writeln!(out, "{tag} {} ({})", c.name, c.note)?;
            } else {
                write!(out, "{tag} {} value={:.3e} tol={:.1e}", c.name, c.value, c.tolerance)?;
                if c.note.is_empty() {
                    writeln!(out)?;
                } else {
                    writeln!(out, " ({})", c.note)?;
                }
            }
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        writeln!(out, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Worst-case disagreement between the two moment oracles over a time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleComparison {
    /// Max-abs difference of the 4×4 covariance matrices.
    pub moment_diff: f64,
    /// Max |∫W − 1|.
    pub norm_error: f64,
    /// Max |first moment| from the quadrature.
    pub first_moment: f64,
    /// Max drift of the total dimensionless trace from `2(2k+1) + 2(2l+1)`.
    pub trace_drift: f64,
    /// Max same-mode cross moment |σ_uv|.
    pub local_cross: f64,
    /// Smallest symplectic eigenvalue seen in any transported or integrated CM.
    pub min_symplectic: f64,
}

/// Integrates the `(k, l)` state and transports its initial covariance with
/// `generator` (a rescaled form) at each time in `times`.
pub fn compare_oracles(
    pair: &FockPair,
    integrator: &MomentIntegrator,
    generator: &crate::hamiltonian::QuadForm4,
    rate: f64,
    times: &[f64],
) -> Result<OracleComparison> {
    let start = initial_pair_covariance(pair);
    let expected_trace = 2.0 * (2 * pair.k() + 1) as f64 + 2.0 * (2 * pair.l() + 1) as f64;
    let mut cmp = OracleComparison {
        moment_diff: 0.0,
        norm_error: 0.0,
        first_moment: 0.0,
        trace_drift: 0.0,
        local_cross: 0.0,
        min_symplectic: f64::INFINITY,
    };
    for &t in times {
        let quad = integrator.moments(pair, t, rate)?;
        let moved = evolve_covariance(&start, &symplectic_propagator(generator, t));
        cmp.moment_diff = cmp.moment_diff.max((quad.cm - moved.cm()).amax());
        cmp.norm_error = cmp.norm_error.max((quad.norm - 1.0).abs());
        cmp.first_moment = cmp.first_moment.max(quad.mean.amax());
        cmp.trace_drift = cmp
            .trace_drift
            .max((quad.cm.trace() - expected_trace).abs())
            .max((moved.cm().trace() - expected_trace).abs());
        cmp.min_symplectic = cmp.min_symplectic.min(physicality_check(&moved)?.min);
        for mode in 0..2 {
            let local = quad.local(mode, None);
            cmp.local_cross = cmp.local_cross.max(local.cm[(0, 1)].abs());
            cmp.min_symplectic = cmp.min_symplectic.min(physicality_check_local(&local.cm)?.min);
        }
    }
    Ok(cmp)
}

/// `n` evenly spaced times on `[0, t_end]`.
pub fn time_grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
}

pub fn run_verify(params: &Params) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let hbar = params.hbar;
    let spec = params.spec;
    let alg = params.algebra()?;
    let sw = alg.sw_map()?;

    report.checks.push(CheckResult::below(
        "sw_constraint",
        alg.constraint_residual(),
        1e-12 * hbar * hbar,
    ));
    report.checks.push(CheckResult::below("algebra_residual", algebra_residual(&sw, &alg), 1e-12));
    report.checks.push(CheckResult::below(
        "coefficient_residual",
        coefficient_residual(&spec, &alg)?,
        1e-10,
    ));
    let pulled = pullback_quadratic_form(&build_nc_quadratic_form(&spec), &sw);
    report.checks.push(CheckResult::below("same_mode_cross", pulled.same_mode_cross(), 1e-12));
    let coeffs = closed_form_coefficients(&spec, &alg);
    report.checks.push(CheckResult::below("parts_commute", parts_commute_check(&coeffs), 1e-12));

    let flow = HeatFlow::new(params.thermal, params.gamma(), spec.omega_b());
    let tau = flow.equilibrium_time().ok();
    let t_end = tau.or(params.t_max).unwrap_or_else(|| {
        let rate = coeffs.rate().abs();
        if rate > 0.0 {
            std::f64::consts::PI / rate
        } else {
            1.0
        }
    });
    let times = time_grid(t_end, ORACLE_TIME_POINTS);

    let generator = QuadratureScale::new(&coeffs, hbar).rescale_generator(&pulled);
    let mut pairs = vec![params.fock];
    let protocol = FockPair::new(0, 1)?;
    if params.fock != protocol {
        pairs.push(protocol);
    }
    let order = params.order.max(pairs.iter().map(FockPair::min_order).max().unwrap_or(2));
    let integrator = MomentIntegrator::new(order)?;
    let mut worst: Option<OracleComparison> = None;
    for pair in &pairs {
        let c = compare_oracles(pair, &integrator, &generator, coeffs.rate(), &times)?;
        worst = Some(match worst {
            None => c,
            Some(w) => OracleComparison {
                moment_diff: w.moment_diff.max(c.moment_diff),
                norm_error: w.norm_error.max(c.norm_error),
                first_moment: w.first_moment.max(c.first_moment),
                trace_drift: w.trace_drift.max(c.trace_drift),
                local_cross: w.local_cross.max(c.local_cross),
                min_symplectic: w.min_symplectic.min(c.min_symplectic),
            },
        });
    }
    let worst = worst.expect("at least one pair");
    let pair_note = pairs
        .iter()
        .map(|p| format!("({},{})", p.k(), p.l()))
        .collect::<Vec<_>>()
        .join(" ");
    report.checks.push(
        CheckResult::below("oracle_equivalence", worst.moment_diff, 1e-8)
            .with_note(format!("pairs {pair_note}, {} times", times.len())),
    );
    report.checks.push(CheckResult::below("wigner_normalization", worst.norm_error, 1e-10));
    report.checks.push(CheckResult::below("first_moments", worst.first_moment, 1e-12));
    report.checks.push(CheckResult::below("local_cross_moments", worst.local_cross, 1e-12));
    report.checks.push(CheckResult::below("moment_trace_conservation", worst.trace_drift, 1e-10));
    report.checks.push(CheckResult::below(
        "physicality",
        (1.0 - worst.min_symplectic).max(0.0),
        1e-10,
    ));

    // the closed form runs at half the frequency of the integrated states
    let mut bridge: f64 = 0.0;
    for &t in &times {
        let quad = integrator.moments(&protocol, t, coeffs.rate())?;
        for mode in [Mode::One, Mode::Two] {
            let scaled = scale_covariance(
                &quad.local(mode.index(), None),
                mode,
                params.thermal.occupation(mode),
                params.thermal.omega(),
                hbar,
            );
            let closed = closed_form_covariance(mode, 2.0 * t, &params.thermal, flow.gamma, spec.omega_b());
            bridge = bridge.max((scaled.matrix() - closed.matrix()).amax());
        }
    }
    report.checks.push(
        CheckResult::below("closed_form_frequency_relation", bridge, 1e-8)
            .with_note("scaled quadrature moments at t vs closed form at 2t"),
    );

    let unphysical = CovState::new(Matrix4::identity() * 0.5, Vector4::zeros(), Units::Dimensionless)?;
    let self_test = physicality_check(&unphysical)?;
    report.checks.push(CheckResult {
        name: "physicality_self_test",
        status: if self_test.physical { Status::Fail } else { Status::Pass },
        value: self_test.min,
        tolerance: 1.0,
        note: "0.5*I must be rejected".into(),
    });

    match tau {
        Some(tau) => report.checks.push(CheckResult::below(
            "equilibrium",
            (flow.energy(Mode::One, tau) - flow.energy(Mode::Two, tau)).abs(),
            1e-10,
        )),
        None => report.checks.push(CheckResult::skip("equilibrium", "energies never cross")),
    }

    let heat_residual = times
        .iter()
        .map(|&t| flow.heat_conservation_residual(t))
        .fold(0.0, f64::max);
    if params.thermal.n_bar() == params.thermal.m_bar() {
        report.checks.push(CheckResult::below("energy_conservation", heat_residual, 1e-12));
    } else {
        report.checks.push(CheckResult::skip(
            "energy_conservation",
            format!("n_bar != m_bar; heat_conservation_residual={heat_residual:.6e}"),
        ));
    }

    match (
        params.thermal.temperature(Mode::One),
        params.thermal.temperature(Mode::Two),
    ) {
        (Ok(_), Ok(_)) => {
            let mut min = f64::INFINITY;
            for &t in times.iter().skip(1) {
                min = min.min(flow.second_law(t)?);
            }
            report.checks.push(CheckResult {
                name: "second_law",
                status: if min >= -1e-12 { Status::Pass } else { Status::Fail },
                value: min,
                tolerance: -1e-12,
                note: "min of Q1(1/kT1 - 1/kT2), must be >= tol".into(),
            });
        }
        _ => report.checks.push(CheckResult::skip("second_law", "zero occupation has no temperature")),
    }

    Ok(report)
}
