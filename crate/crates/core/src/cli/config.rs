//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment. Every key can also be given as a
//! command-line flag of the same name, which wins over the file.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hamiltonian::{gamma_shift, OscillatorSpec};
use crate::nc_algebra::NcAlgebra;
use crate::thermo::ThermalPair;
use crate::wigner_oracle::{FockPair, DEFAULT_ORDER};

/// Every key the configuration understands.
pub const KEYS: &[&str] = &[
    "hbar", "m", "k_B", "omega", "omega_B", "theta", "eta", "gamma", "n_bar", "m_bar", "T1", "T2",
    "k", "l", "t_max", "steps", "order", "out", "gammas", "thetas", "etas", "mode", "t",
    "resolution",
];

const DEFAULT_STEPS: usize = 201;

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected `key = value`", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(config_err(format!("unknown key `{key}`")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| config_err(format!("`{key}` is not a number: {v}")))
            })
            .transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| config_err(format!("missing required key `{key}`")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| config_err(format!("`{key}` is not a nonnegative integer: {v}"))),
        }
    }

    /// Comma- or whitespace-separated list of numbers.
    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<f64>()
                            .map_err(|_| config_err(format!("`{key}` has a non-numeric entry: {s}")))
                    })
                    .collect()
            })
            .transpose()
    }
}

/// How the NC deformation is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NcChoice {
    Algebra(NcAlgebra),
    /// γ given directly; θ and η unknown.
    Gamma(f64),
}

/// A validated configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub hbar: f64,
    pub spec: OscillatorSpec,
    pub nc: NcChoice,
    pub thermal: ThermalPair,
    pub fock: FockPair,
    pub t_max: Option<f64>,
    pub steps: usize,
    pub order: usize,
}

impl Params {
    pub fn resolve(cfg: &RunConfig) -> Result<Self> {
        let hbar = cfg.f64_or("hbar", 1.0)?;
        let mass = cfg.f64_or("m", 1.0)?;
        let k_b = cfg.f64_or("k_B", 1.0)?;
        let omega = cfg.require_f64("omega")?;
        let omega_b = cfg.require_f64("omega_B")?;
        let spec = OscillatorSpec::new(mass, omega, omega_b)?;

        let nc = match (cfg.has("theta") || cfg.has("eta"), cfg.has("gamma")) {
            (true, true) => return Err(config_err("give either theta/eta or gamma, not both")),
            (false, false) => return Err(config_err("one of theta/eta or gamma is required")),
            (true, false) => {
                let theta = cfg.require_f64("theta")?;
                let eta = cfg.require_f64("eta")?;
                NcChoice::Algebra(NcAlgebra::new(theta, eta, hbar)?)
            }
            (false, true) => {
                let gamma = cfg.require_f64("gamma")?;
                if !gamma.is_finite() {
                    return Err(config_err("gamma must be finite"));
                }
                NcChoice::Gamma(gamma)
            }
        };

        let thermal = match (cfg.has("n_bar") || cfg.has("m_bar"), cfg.has("T1") || cfg.has("T2")) {
            (true, true) => return Err(config_err("give either n_bar/m_bar or T1/T2, not both")),
            (false, false) => return Err(config_err("one of n_bar/m_bar or T1/T2 is required")),
            (true, false) => ThermalPair::new(
                cfg.require_f64("n_bar")?,
                cfg.require_f64("m_bar")?,
                omega,
                hbar,
                k_b,
            )?,
            (false, true) => ThermalPair::from_temperatures(
                cfg.require_f64("T1")?,
                cfg.require_f64("T2")?,
                omega,
                hbar,
                k_b,
            )?,
        };

        let fock = FockPair::new(cfg.usize_or("k", 0)?, cfg.usize_or("l", 1)?)?;
        let t_max = cfg.f64("t_max")?;
        if let Some(t) = t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(config_err(format!("t_max must be > 0, got {t}")));
            }
        }
        let steps = cfg.usize_or("steps", DEFAULT_STEPS)?;
        if steps < 2 {
            return Err(config_err(format!("steps must be >= 2, got {steps}")));
        }
        let order = cfg.usize_or("order", DEFAULT_ORDER)?;
        if order == 0 {
            return Err(config_err("order must be >= 1"));
        }
        Ok(Self {
            hbar,
            spec,
            nc,
            thermal,
            fock,
            t_max,
            steps,
            order,
        })
    }

    pub fn gamma(&self) -> f64 {
        match self.nc {
            NcChoice::Algebra(alg) => gamma_shift(&self.spec, alg.theta(), alg.eta(), alg.hbar()),
            NcChoice::Gamma(g) => g,
        }
    }

    /// An algebra realizing the configured γ. A bare γ is realized with
    /// η = 0 and θ = 2ħγ/(mΩ²).
    pub fn algebra(&self) -> Result<NcAlgebra> {
        match self.nc {
            NcChoice::Algebra(alg) => Ok(alg),
            NcChoice::Gamma(g) => {
                if g < 0.0 {
                    return Err(config_err(format!(
                        "gamma = {g} cannot be realized with nonnegative theta, eta"
                    )));
                }
                let theta = 2.0 * self.hbar * g / (self.spec.mass() * self.spec.omega2());
                NcAlgebra::new(theta, 0.0, self.hbar)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE_CFG: &str = "
        # oscillators
        omega = 4
        omega_B = 1   # coupling
        gamma = 0
        n_bar = 2
        m_bar = 4
    ";

    #[test]
    fn parses_base() {
        let cfg = RunConfig::parse(BASE_CFG).unwrap();
        assert_eq!(cfg.get("omega_B"), Some("1"));
        let p = Params::resolve(&cfg).unwrap();
        assert_eq!(p.hbar, 1.0);
        assert_eq!(p.gamma(), 0.0);
        assert_eq!(p.thermal.n_bar(), 2.0);
        assert_eq!((p.fock.k(), p.fock.l()), (0, 1));
        assert_eq!(p.order, 16);
    }

    #[test]
    fn rejects_malformed() {
        assert!(RunConfig::parse("omega 4").is_err());
        assert!(RunConfig::parse("omgea = 4").is_err());
        let cfg = RunConfig::parse("omega = four").unwrap();
        assert!(cfg.f64("omega").is_err());
    }

    #[test]
    fn exclusive_groups() {
        let mut cfg = RunConfig::parse(BASE_CFG).unwrap();
        cfg.set("theta", "0.1").unwrap();
        cfg.set("eta", "0.1").unwrap();
        assert!(matches!(Params::resolve(&cfg), Err(Error::Config(_))));

        let mut cfg = RunConfig::parse(BASE_CFG).unwrap();
        cfg.set("T1", "10").unwrap();
        assert!(matches!(Params::resolve(&cfg), Err(Error::Config(_))));

        let cfg = RunConfig::parse("omega = 4\nomega_B = 1\nn_bar = 1\nm_bar = 2").unwrap();
        assert!(matches!(Params::resolve(&cfg), Err(Error::Config(_))));

        let cfg = RunConfig::parse("omega = 4\nomega_B = 1\ntheta = 0.1\nn_bar = 1\nm_bar = 2").unwrap();
        assert!(matches!(Params::resolve(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn temperatures_and_limits() {
        let cfg = RunConfig::parse("omega = 4\nomega_B = 1\ntheta = 0\neta = 1\nT1 = 9.8652\nT2 = 17.926\nsteps = 1").unwrap();
        assert!(Params::resolve(&cfg).is_err());
        let mut cfg = cfg;
        cfg.set("steps", "5").unwrap();
        let p = Params::resolve(&cfg).unwrap();
        assert!((p.thermal.n_bar() - 2.0).abs() < 1e-4);
        assert_eq!(p.gamma(), 0.5);

        cfg.set("theta", "2").unwrap();
        assert!(matches!(Params::resolve(&cfg), Err(Error::NoRealScaling { .. })));
    }

    #[test]
    fn gamma_realization() {
        let mut cfg = RunConfig::parse(BASE_CFG).unwrap();
        cfg.set("gamma", "0.1").unwrap();
        let p = Params::resolve(&cfg).unwrap();
        let alg = p.algebra().unwrap();
        assert_eq!(alg.eta(), 0.0);
        assert!((gamma_shift(&p.spec, alg.theta(), 0.0, 1.0) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn lists() {
        let cfg = RunConfig::parse("gammas = 0, 0.1 0.5").unwrap();
        assert_eq!(cfg.list("gammas").unwrap(), Some(vec![0.0, 0.1, 0.5]));
        assert_eq!(cfg.list("thetas").unwrap(), None);
    }
}
