//! Small-time structure of a model's Kraus operators.
//!
//! An LGKS generator arises when the non-leading operators scale as `√t`.
//! Operators that scale linearly in `t` put a time prefactor in front of the
//! generator instead, which is the non-Markovian structure.

use std::fmt;

use crate::channel::{apply, compose, lgks_rhs, LindbladSet};
use crate::error::{Error, Result};
use crate::models::ModelSpec;

/// Half-width of the exponent bands around 1/2, 1 and 2.
pub const EXPONENT_BAND: f64 = 0.05;
/// Minimum number of grid points accepted by [`small_time_exponents`].
pub const MIN_GRID_POINTS: usize = 6;

/// Operators whose Frobenius norm never exceeds this are treated as absent.
const ZERO_NORM: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentClass {
    SqrtT,
    LinearT,
    ConstIdentityDeficit,
    Unclassified,
}

impl fmt::Display for ExponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentClass::SqrtT => "SqrtT",
            ExponentClass::LinearT => "LinearT",
            ExponentClass::ConstIdentityDeficit => "ConstIdentityDeficit",
            ExponentClass::Unclassified => "Unclassified",
        })
    }
}

/// Fit for a single Kraus operator.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFit {
    pub index: usize,
    pub leading: bool,
    /// Slope of `log ‖·‖_F` against `log t`.
    pub exponent: f64,
    /// RMS deviation of the log-log data from the fitted line.
    pub residual: f64,
    pub class: ExponentClass,
    pub note: Option<&'static str>,
}

impl OperatorFit {
    /// Whether this fit decides the report-level class. Second-order terms
    /// are reported but do not vote.
    pub fn counts_toward_class(&self) -> bool {
        !self.leading && self.note.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport {
    pub fits: Vec<OperatorFit>,
    /// Largest per-operator residual.
    pub residual: f64,
    pub classification: ExponentClass,
    /// Dimensionless grid the fits were taken on.
    pub grid: Vec<f64>,
}

impl ExponentReport {
    pub fn fit(&self, index: usize) -> Option<&OperatorFit> {
        self.fits.iter().find(|f| f.index == index)
    }
}

/// `n` log-spaced points from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::GridTooCoarse {
            points: n,
            required: 2,
        });
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "geometric grid needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// Twelve points from 1e-4 to 1e-2 in dimensionless time.
pub fn default_small_time_grid() -> Vec<f64> {
    geometric_grid(1e-4, 1e-2, 12).expect("static grid")
}

fn classify(s: f64) -> (ExponentClass, Option<&'static str>) {
    if (s - 0.5).abs() <= EXPONENT_BAND {
        (ExponentClass::SqrtT, None)
    } else if (s - 1.0).abs() <= EXPONENT_BAND {
        (ExponentClass::LinearT, None)
    } else if (s - 2.0).abs() <= EXPONENT_BAND {
        (ExponentClass::LinearT, Some("second order"))
    } else {
        (ExponentClass::Unclassified, None)
    }
}

/// Least-squares line through `(x, y)`; returns slope and RMS residual.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icept - slope * a).powi(2))
        .sum();
    (slope, (ss / n).sqrt())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < MIN_GRID_POINTS {
        return Err(Error::GridTooCoarse {
            points: grid.len(),
            required: MIN_GRID_POINTS,
        });
    }
    if grid.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidGrid("small-time grid must be strictly positive".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("small-time grid must be ascending".into()));
    }
    Ok(())
}

/// Fits the power law of every Kraus operator of `model` over `grid`
/// (dimensionless time).
///
/// The leading operator (largest norm at `t = 0`) is fitted through
/// `‖K(t) - K(0)‖`; so is any other operator that does not vanish at `t = 0`.
pub fn small_time_exponents(model: &ModelSpec, grid: &[f64]) -> Result<ExponentReport> {
    check_grid(grid)?;
    model.validate()?;
    let origin = model.channel(0.0)?;
    let k0 = origin.operators();
    let leading = k0
        .iter()
        .enumerate()
        .map(|(i, k)| (i, k.frobenius_norm()))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0;

    let channels = grid
        .iter()
        .map(|&x| model.channel(model.physical_time(x)))
        .collect::<Result<Vec<_>>>()?;
    let log_t: Vec<f64> = grid.iter().map(|t| t.ln()).collect();

    let mut fits = Vec::new();
    for (i, base) in k0.iter().enumerate() {
        let subtract = i == leading || base.frobenius_norm() > 0.0;
        let norms: Vec<f64> = channels
            .iter()
            .map(|ch| {
                let k = &ch.operators()[i];
                if subtract {
                    (k - base).frobenius_norm()
                } else {
                    k.frobenius_norm()
                }
            })
            .collect();
        if norms.iter().all(|n| *n <= ZERO_NORM) && i != leading {
            continue;
        }
        if norms.iter().any(|n| *n <= ZERO_NORM) {
            return Err(Error::FitDegenerate(format!(
                "operator {i} of {} has zero norm on part of the grid",
                model.kind()
            )));
        }
        let log_n: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
        let (exponent, residual) = fit_line(&log_t, &log_n);
        let (class, note) = if i == leading {
            (ExponentClass::ConstIdentityDeficit, None)
        } else {
            classify(exponent)
        };
        fits.push(OperatorFit {
            index: i,
            leading: i == leading,
            exponent,
            residual,
            class,
            note,
        });
    }

    let voters = || fits.iter().filter(|f| f.counts_toward_class());
    let classification = if voters().any(|f| f.class == ExponentClass::SqrtT) {
        ExponentClass::SqrtT
    } else if voters().any(|f| f.class == ExponentClass::LinearT) {
        ExponentClass::LinearT
    } else {
        ExponentClass::Unclassified
    };
    let residual = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
    Ok(ExponentReport {
        fits,
        residual,
        classification,
        grid: grid.to_vec(),
    })
}

/// `‖rho(δ) - rho(0) - δ·rate·L[rho(0)]‖_F` with `δ` in physical time.
pub fn lgks_residual(model: &ModelSpec, lset: &LindbladSet, delta: f64) -> Result<f64> {
    let rho0 = model.initial_state()?;
    let rho_d = model.state(delta)?;
    let drift = lgks_rhs(lset, &rho0)?.scale_real(delta * lset.rate());
    let diff = rho_d.matrix().try_sub(rho0.matrix())?.try_sub(&drift)?;
    Ok(diff.frobenius_norm())
}

/// Largest entry of `Λ(t1)Λ(t2)rho0 - Λ(t1 + t2)rho0` over all pairs drawn
/// from `grid` (physical time).
pub fn semigroup_defect(model: &ModelSpec, grid: &[f64]) -> Result<f64> {
    let rho0 = model.initial_state()?;
    let channels = grid
        .iter()
        .map(|&t| model.channel(t))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0_f64;
    for (i, &t1) in grid.iter().enumerate() {
        for (j, &t2) in grid.iter().enumerate() {
            let two_step = apply(&compose(&channels[i], &channels[j])?, &rho0)?;
            let direct = apply(&model.channel(t1 + t2)?, &rho0)?;
            worst = worst.max((two_step.matrix() - direct.matrix()).max_abs());
        }
    }
    Ok(worst)
}
