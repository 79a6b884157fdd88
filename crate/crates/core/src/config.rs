//! Run configuration: a flat `key=value` file merged with command-line
//! overrides.
//!
//! Recognised keys:
//!
//! | key | meaning |
//! |-----|---------|
//! | `model` | `ye-markov`, `ye-nonmarkov`, `jcm-qubit`, `jcm-photon` or `ck` |
//! | `Gamma`, `gamma`, `lambda`, `alpha_x` | two-qubit model parameters |
//! | `g`, `alpha`, `alpha_im`, `n_max` | JCM coupling, coherent amplitude, cutoff |
//! | `rho11`, `rho22`, `rho12`, `rho12_im` | dephasing-model initial state |
//! | `start`, `stop`, `step` | dimensionless time grid |
//! | `tau` | comma-separated lags |
//! | `witness_tol`, `seed`, `out` | tolerance, RNG seed, output path |
//!
//! Lines starting with `#` are comments. Precedence, lowest first: model
//! defaults, config file, `KRAUS_WITNESS_TOL`, command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_6, PI};
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::models::jaynes_cummings::default_cutoff;
use crate::models::{CkInitial, ModelKind, ModelSpec};
use crate::witness::{uniform_grid, DEFAULT_SEED, DEFAULT_WITNESS_TOL};

/// Environment variable that overrides `witness_tol`.
pub const TOL_ENV: &str = "KRAUS_WITNESS_TOL";

const KEYS: &[&str] = &[
    "model", "Gamma", "gamma", "lambda", "alpha_x", "g", "alpha", "alpha_im", "n_max", "rho11",
    "rho22", "rho12", "rho12_im", "start", "stop", "step", "tau", "witness_tol", "seed", "out",
];

/// A malformed or inconsistent configuration. Always a usage error.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Raw `key -> value` settings in insertion-independent order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("line {}: expected key=value, got '{line}'", n + 1));
            };
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return err(format!("unknown config key '{key}'"));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Sets `key` only when `value` is present.
    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) -> Result<(), ConfigError> {
        match value {
            Some(v) => self.set(key, v.to_string()),
            None => Ok(()),
        }
    }

    /// Later settings win.
    pub fn merge(&mut self, other: Settings) {
        self.0.extend(other.0);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn num(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| ConfigError(format!("{key}: '{v}' is not a number")))
            })
            .transpose()
    }

    fn num_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.num(key)?.unwrap_or(default))
    }
}

/// Dimensionless time grid `start..=stop` in steps of `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let GridSpec { start, stop, step } = *self;
        if !(start >= 0.0) {
            return err(format!("grid invariant start >= 0 violated (start = {start})"));
        }
        if !(stop > start) {
            return err(format!("grid invariant stop > start violated (start = {start}, stop = {stop})"));
        }
        if !(step > 0.0) {
            return err(format!("grid invariant step > 0 violated (step = {step})"));
        }
        if !(step < (stop - start) / 10.0) {
            return err(format!(
                "grid invariant step < (stop - start)/10 violated (step = {step}, span = {})",
                stop - start
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        uniform_grid(self.start, self.stop, self.step).expect("validated grid")
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] step {}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub grid: GridSpec,
    pub taus: Vec<f64>,
    pub output_path: Option<PathBuf>,
    pub witness_tol: f64,
    pub seed: u64,
}

/// Grid and lags used by each figure.
pub fn model_defaults(kind: ModelKind) -> (GridSpec, Vec<f64>) {
    let grid = |stop, step| GridSpec {
        start: 0.0,
        stop,
        step,
    };
    match kind {
        ModelKind::YeMarkov => (grid(10.0, 0.02), vec![0.5, 1.0, 2.0]),
        ModelKind::YeNonMarkov => (grid(20.0, 0.02), vec![1.0]),
        ModelKind::JcmQubit | ModelKind::JcmPhoton => (grid(10.0, 0.01), vec![10.0]),
        ModelKind::CkDephase => (grid(2.0 * PI, 0.005), vec![FRAC_PI_6]),
    }
}

fn model_from(s: &Settings, kind: ModelKind) -> Result<ModelSpec, ConfigError> {
    let jcm = |s: &Settings| -> Result<(f64, Complex64, usize), ConfigError> {
        let alpha = Complex64::new(s.num_or("alpha", 0.0)?, s.num_or("alpha_im", 0.0)?);
        let n_max = match s.get("n_max") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| ConfigError(format!("n_max: '{v}' is not a nonnegative integer")))?,
            None if alpha.norm() <= crate::models::jaynes_cummings::MAX_ALPHA => default_cutoff(alpha),
            None => 0,
        };
        Ok((s.num_or("g", 1.0)?, alpha, n_max))
    };
    Ok(match kind {
        ModelKind::YeMarkov => ModelSpec::YeMarkov {
            rate: s.num_or("Gamma", 1.0)?,
            lambda: s.num_or("lambda", 0.5)?,
        },
        ModelKind::YeNonMarkov => ModelSpec::YeNonMarkov {
            rate: s.num_or("Gamma", 1.0)?,
            bandwidth: s.num_or("gamma", 1e-4)?,
            alpha_x: s.num_or("alpha_x", 0.5)?,
        },
        ModelKind::JcmQubit => {
            let (coupling, alpha_c, n_max) = jcm(s)?;
            ModelSpec::JcmQubit {
                coupling,
                alpha_c,
                n_max,
            }
        }
        ModelKind::JcmPhoton => {
            let (coupling, alpha_c, n_max) = jcm(s)?;
            ModelSpec::JcmPhoton {
                coupling,
                alpha_c,
                n_max,
            }
        }
        ModelKind::CkDephase => {
            let d = CkInitial::default();
            ModelSpec::CkDephase(CkInitial {
                rho11: s.num_or("rho11", d.rho11)?,
                rho22: s.num_or("rho22", d.rho22)?,
                rho12: Complex64::new(s.num_or("rho12", d.rho12.re)?, s.num_or("rho12_im", 0.0)?),
            })
        }
    })
}

impl RunConfig {
    /// Builds a configuration from already merged settings.
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let kind: ModelKind = s
            .get("model")
            .ok_or_else(|| ConfigError("no model given (use --model or model= in the config)".into()))?
            .parse()
            .map_err(ConfigError)?;
        let model = model_from(s, kind)?;
        if let Err(e) = model.validate() {
            // A cutoff that cannot hold the field is a numerical failure of
            // the requested run, reported by the command itself.
            if !matches!(e, crate::Error::CutoffTooSmall { .. }) {
                return err(format!("{kind}: {e}"));
            }
        }
        let (grid0, taus0) = model_defaults(kind);
        let grid = GridSpec {
            start: s.num_or("start", grid0.start)?,
            stop: s.num_or("stop", grid0.stop)?,
            step: s.num_or("step", grid0.step)?,
        };
        grid.validate()?;
        let taus = match s.get("tau") {
            Some(list) => list
                .split(',')
                .map(|v| {
                    let v = v.trim();
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| *x >= 0.0 && x.is_finite())
                        .ok_or_else(|| ConfigError(format!("tau: '{v}' is not a nonnegative number")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => taus0,
        };
        if taus.is_empty() {
            return err("tau list is empty");
        }
        let witness_tol = s.num_or("witness_tol", DEFAULT_WITNESS_TOL)?;
        if !(witness_tol >= 0.0) {
            return err(format!("witness_tol must be >= 0, got {witness_tol}"));
        }
        let seed = match s.get("seed") {
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError(format!("seed: '{v}' is not an unsigned integer")))?,
            None => DEFAULT_SEED,
        };
        Ok(Self {
            model,
            grid,
            taus,
            output_path: s.get("out").map(PathBuf::from),
            witness_tol,
            seed,
        })
    }

    /// File settings, then the tolerance from the environment, then `flags`.
    pub fn layered(
        file: Option<&Path>,
        env_tol: Option<&str>,
        flags: Settings,
    ) -> Result<Self, ConfigError> {
        let mut s = match file {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        if let Some(tol) = env_tol {
            s.set("witness_tol", tol)?;
        }
        s.merge(flags);
        Self::from_settings(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(text: &str) -> Settings {
        Settings::parse(text).unwrap()
    }

    #[test]
    fn parses_file_with_comments() {
        let s = settings("# dephasing\nmodel = ck\n\ntau=0.25, 1.0\nstep=0.01\n");
        let c = RunConfig::from_settings(&s).unwrap();
        assert_eq!(c.model, ModelSpec::ck());
        assert_eq!(c.taus, [0.25, 1.0]);
        assert_eq!(c.grid.step, 0.01);
        assert_eq!(c.witness_tol, DEFAULT_WITNESS_TOL);
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn rejects_unknown_keys_and_junk() {
        assert!(Settings::parse("model=ck\ncolour=red").is_err());
        assert!(Settings::parse("just words").is_err());
        assert!(RunConfig::from_settings(&settings("model=lindblad")).is_err());
        assert!(RunConfig::from_settings(&settings("lambda=1")).is_err());
        assert!(RunConfig::from_settings(&settings("model=ck\ntau=x")).is_err());
    }

    #[test]
    fn grid_invariants_named() {
        for (text, needle) in [
            ("model=ck\nstep=0", "step > 0"),
            ("model=ck\nstart=2\nstop=1", "stop > start"),
            ("model=ck\nstart=-1", "start >= 0"),
            ("model=ck\nstop=1\nstep=0.2", "step < (stop - start)/10"),
        ] {
            let e = RunConfig::from_settings(&settings(text)).unwrap_err();
            assert!(e.0.contains(needle), "{e}");
        }
    }

    #[test]
    fn layering_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "model=ye-markov\nlambda=1.5\nwitness_tol=1e-6\nseed=3\n").unwrap();

        let c = RunConfig::layered(Some(&path), None, Settings::default()).unwrap();
        assert_eq!(c.witness_tol, 1e-6);
        assert_eq!(c.model, ModelSpec::YeMarkov { rate: 1.0, lambda: 1.5 });

        let c = RunConfig::layered(Some(&path), Some("1e-5"), Settings::default()).unwrap();
        assert_eq!(c.witness_tol, 1e-5);

        let mut flags = Settings::default();
        flags.set("witness_tol", "1e-4").unwrap();
        flags.set("lambda", "2").unwrap();
        let c = RunConfig::layered(Some(&path), Some("1e-5"), flags).unwrap();
        assert_eq!(c.witness_tol, 1e-4);
        assert_eq!(c.seed, 3);
        assert_eq!(c.model, ModelSpec::YeMarkov { rate: 1.0, lambda: 2.0 });
    }

    #[test]
    fn parameter_ranges_are_usage_errors_but_cutoff_is_not() {
        assert!(RunConfig::from_settings(&settings("model=ye-markov\nlambda=7")).is_err());
        let c = RunConfig::from_settings(&settings("model=jcm-photon\nn_max=1\nalpha=2")).unwrap();
        assert!(matches!(c.model.validate(), Err(crate::Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn defaults_per_model() {
        let c = RunConfig::from_settings(&settings("model=jcm-qubit\nalpha=2")).unwrap();
        assert_eq!(c.taus, [10.0]);
        assert_eq!(c.model, ModelSpec::jcm_qubit(Complex64::new(2.0, 0.0)));
        assert_eq!(c.grid.points().len(), 1001);
    }
}
