//! Fidelity-difference witness, memory fidelity and a sampled BLP measure.
//!
//! Every time argument here is dimensionless (`Γt`, `gt` or `t`, see
//! [`ModelSpec::scaled_time`]). A negative fidelity difference is sufficient
//! for non-Markovianity but not necessary, so a clean scan never certifies
//! Markovian dynamics.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::apply;
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::models::{jaynes_cummings, ModelSpec};
use crate::state::{fidelity, trace_distance, DensityMatrix};

/// Default threshold below which a negative `G` counts as a violation.
pub const DEFAULT_WITNESS_TOL: f64 = 1e-8;
/// `F[rho(0), rho(τ)]` at or below this makes `G` undefined.
pub const DENOMINATOR_GUARD: f64 = 1e-12;
/// Allowed gap between closed-form and generic fidelity in a scan.
pub const CROSS_CHECK_TOL: f64 = 1e-9;
/// Every this many grid points a closed-form scan is cross-checked.
pub const CROSS_CHECK_STRIDE: usize = 10;
/// Minimum grid size for the BLP estimator.
pub const BLP_MIN_POINTS: usize = 200;
/// BLP values above this count as information backflow.
pub const BLP_TOL: f64 = 1e-6;
/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// `F[rho(s), rho(s + τ)]` in dimensionless time, generic route.
fn generic_pair_fidelity(model: &ModelSpec, s: f64, tau: f64) -> Result<f64> {
    let a = model.state(model.physical_time(s))?;
    let b = model.state(model.physical_time(s + tau))?;
    fidelity(&a, &b)
}

/// `F[rho(s), rho(s + τ)]`, closed form where the model has one.
pub fn pair_fidelity(model: &ModelSpec, s: f64, tau: f64) -> Result<f64> {
    let (t, lag) = (model.physical_time(s), model.physical_time(tau));
    match model.closed_form_fidelity(t, lag)? {
        Some(f) => Ok(f),
        None => generic_pair_fidelity(model, s, tau),
    }
}

fn check_nonnegative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: v,
            range: "[0, inf)",
        })
    }
}

fn reference_fidelity(model: &ModelSpec, tau: f64) -> Result<f64> {
    let f0 = pair_fidelity(model, 0.0, tau)?;
    if f0 <= DENOMINATOR_GUARD {
        return Err(Error::DegenerateDenominator { value: f0 });
    }
    Ok(f0)
}

/// `G(t, τ) = (F[rho(t), rho(t+τ)] - F[rho(0), rho(τ)]) / F[rho(0), rho(τ)]`.
pub fn fidelity_difference(model: &ModelSpec, t: f64, tau: f64) -> Result<f64> {
    check_nonnegative("t", t)?;
    check_nonnegative("tau", tau)?;
    let f0 = reference_fidelity(model, tau)?;
    Ok((pair_fidelity(model, t, tau)? - f0) / f0)
}

/// A series over a dimensionless time grid with its extrema.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub abscissa: Vec<f64>,
    pub values: Vec<f64>,
    pub min_value: f64,
    pub min_at: f64,
    pub max_value: f64,
    pub max_at: f64,
    pub witness_tol: f64,
    pub witness_triggered: bool,
}

impl ScanResult {
    pub fn from_series(abscissa: Vec<f64>, values: Vec<f64>, witness_tol: f64) -> Result<Self> {
        if abscissa.len() != values.len() || abscissa.is_empty() {
            return Err(Error::InvalidGrid(format!(
                "series of {} abscissae and {} values",
                abscissa.len(),
                values.len()
            )));
        }
        let (mut lo, mut hi) = (0, 0);
        for (i, v) in values.iter().enumerate() {
            if *v < values[lo] {
                lo = i;
            }
            if *v > values[hi] {
                hi = i;
            }
        }
        let min_value = values[lo];
        Ok(Self {
            min_value,
            min_at: abscissa[lo],
            max_value: values[hi],
            max_at: abscissa[hi],
            witness_tol,
            witness_triggered: min_value < -witness_tol,
            abscissa,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `start, start + step, ...` up to `stop` (inclusive within rounding).
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop > start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need start < stop and step > 0, got start={start}, stop={stop}, step={step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn check_scan_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidGrid("time grid must be nonnegative".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("time grid must be ascending".into()));
    }
    Ok(())
}

/// `G(t, τ)` over `grid`.
///
/// Uses the closed-form fidelity when the model provides one and checks it
/// against the generic Uhlmann fidelity at every tenth point.
pub fn scan_g(model: &ModelSpec, grid: &[f64], tau: f64, witness_tol: f64) -> Result<ScanResult> {
    check_scan_grid(grid)?;
    check_nonnegative("tau", tau)?;
    model.validate()?;
    let f0 = reference_fidelity(model, tau)?;
    let closed = model.has_closed_form();
    let values = grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = pair_fidelity(model, t, tau)?;
            if closed && i % CROSS_CHECK_STRIDE == 0 {
                let generic = generic_pair_fidelity(model, t, tau)?;
                if (generic - f).abs() > CROSS_CHECK_TOL {
                    return Err(Error::CrossCheckFailed {
                        t,
                        closed: f,
                        generic,
                    });
                }
            }
            Ok((f - f0) / f0)
        })
        .collect::<Result<Vec<_>>>()?;
    ScanResult::from_series(grid.to_vec(), values, witness_tol)
}

/// `F[rho(0), rho(t)]` over `grid`.
pub fn memory_fidelity(model: &ModelSpec, grid: &[f64]) -> Result<ScanResult> {
    check_scan_grid(grid)?;
    model.validate()?;
    let values = grid
        .par_iter()
        .map(|&t| pair_fidelity(model, 0.0, t))
        .collect::<Result<Vec<_>>>()?;
    ScanResult::from_series(grid.to_vec(), values, DEFAULT_WITNESS_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    NonMarkovianWitnessed,
    /// The witness stayed above tolerance. This is not evidence of
    /// Markovian dynamics.
    NoViolationFound,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::NonMarkovianWitnessed => "NonMarkovianWitnessed",
            Outcome::NoViolationFound => "NoViolationFound",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// The lag whose scan reached the lowest `G`.
    pub tau: f64,
    pub evidence: ScanResult,
    pub tolerance: f64,
}

/// Scans every lag in `taus` and reports the most negative one.
pub fn markovianity_verdict(
    model: &ModelSpec,
    taus: &[f64],
    grid: &[f64],
    witness_tol: f64,
) -> Result<Verdict> {
    if taus.is_empty() {
        return Err(Error::InvalidGrid("at least one lag tau is required".into()));
    }
    let mut best: Option<(f64, ScanResult)> = None;
    for &tau in taus {
        let scan = scan_g(model, grid, tau, witness_tol)?;
        if best.as_ref().is_none_or(|(_, b)| scan.min_value < b.min_value) {
            best = Some((tau, scan));
        }
    }
    let (tau, evidence) = best.expect("non-empty taus");
    let outcome = if evidence.witness_triggered {
        Outcome::NonMarkovianWitnessed
    } else {
        Outcome::NoViolationFound
    };
    Ok(Verdict {
        outcome,
        tau,
        evidence,
        tolerance: witness_tol,
    })
}

/// A labelled pair of initial states for the BLP estimator.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub label: String,
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
}

#[derive(Debug, Clone)]
pub enum PairSampling {
    /// The deterministic sample of [`default_pairs`].
    Default { seed: u64 },
    Explicit(Vec<StatePair>),
}

/// Lower-bound estimate of the BLP measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpEstimate {
    /// Maximum over the sampled pairs only.
    pub value: f64,
    pub pair_count: usize,
    pub best_pair: String,
    pub grid: Vec<f64>,
}

impl BlpEstimate {
    pub fn witnessed(&self) -> bool {
        self.value > BLP_TOL
    }
}

fn bloch_pair(label: String, n: [f64; 3]) -> Result<StatePair> {
    Ok(StatePair {
        label,
        rho1: DensityMatrix::from_bloch(n)?,
        rho2: DensityMatrix::from_bloch([-n[0], -n[1], -n[2]])?,
    })
}

/// Spherical Fibonacci points.
fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn random_ball(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if v.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

/// `A A† / Tr` for a seeded complex Gaussian-like `A`.
fn random_state(rng: &mut ChaCha8Rng, dim: usize, support: usize) -> Result<DensityMatrix> {
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..support {
        for j in 0..support {
            a[(i, j)] = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr))
}

fn basis_state(dim: usize, n: usize) -> Result<DensityMatrix> {
    let mut v = vec![Complex64::default(); dim];
    v[n] = c64(1.0, 0.0);
    DensityMatrix::pure(&v)
}

/// The deterministic pair sample used by [`PairSampling::Default`].
///
/// Qubits: 66 antipodal pure pairs on a Fibonacci grid plus 10 seeded mixed
/// pairs. Two-qubit models: the model's own initial-state family at perturbed
/// parameters plus 10 seeded random pairs. Field: neighbouring Fock states,
/// opposite coherent states and seeded random pairs on low photon numbers.
pub fn default_pairs(model: &ModelSpec, seed: u64) -> Result<Vec<StatePair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    match model {
        ModelSpec::JcmQubit { .. } | ModelSpec::CkDephase(_) => {
            for (i, n) in fibonacci_sphere(66).into_iter().enumerate() {
                pairs.push(bloch_pair(format!("antipodal #{i}"), n)?);
            }
            for i in 0..10 {
                pairs.push(StatePair {
                    label: format!("mixed #{i}"),
                    rho1: DensityMatrix::from_bloch(random_ball(&mut rng))?,
                    rho2: DensityMatrix::from_bloch(random_ball(&mut rng))?,
                });
            }
        }
        ModelSpec::YeMarkov { .. } | ModelSpec::YeNonMarkov { .. } => {
            let family = |x: f64| match model {
                ModelSpec::YeMarkov { .. } => crate::models::ye_markov_initial(x),
                _ => crate::models::ye_nonmarkov_initial(x),
            };
            let (name, params): (&str, &[f64]) = match model {
                ModelSpec::YeMarkov { .. } => ("lambda", &[0.0, 1.0, 2.0, 3.0, 4.0]),
                _ => ("alpha_x", &[0.0, 0.25, 0.5, 0.75, 1.0]),
            };
            for (i, &a) in params.iter().enumerate() {
                for &b in &params[i + 1..] {
                    pairs.push(StatePair {
                        label: format!("{name} {a} vs {b}"),
                        rho1: family(a)?,
                        rho2: family(b)?,
                    });
                }
            }
            for i in 0..10 {
                pairs.push(StatePair {
                    label: format!("random #{i}"),
                    rho1: random_state(&mut rng, 4, 4)?,
                    rho2: random_state(&mut rng, 4, 4)?,
                });
            }
        }
        ModelSpec::JcmPhoton { n_max, .. } => {
            let dim = model.dim();
            let n_max = *n_max;
            for n in 0..n_max.min(4) {
                pairs.push(StatePair {
                    label: format!("Fock {n} vs {}", n + 1),
                    rho1: basis_state(dim, n)?,
                    rho2: basis_state(dim, n + 1)?,
                });
            }
            for a in [0.5, 1.0] {
                let alpha = c64(a, 0.0);
                if jaynes_cummings::check_cutoff(alpha, n_max).is_ok() {
                    pairs.push(StatePair {
                        label: format!("coherent {a} vs -{a}"),
                        rho1: crate::models::jcm_photon_initial(alpha, n_max)?,
                        rho2: crate::models::jcm_photon_initial(-alpha, n_max)?,
                    });
                }
            }
            let support = (n_max + 1).min(4);
            for i in 0..10 {
                pairs.push(StatePair {
                    label: format!("random #{i}"),
                    rho1: random_state(&mut rng, dim, support)?,
                    rho2: random_state(&mut rng, dim, support)?,
                });
            }
        }
    }
    Ok(pairs)
}

/// Sum of the positive parts of `dD/dt` times the step, for one series.
fn positive_increase(d: &[f64], h: f64) -> f64 {
    let n = d.len();
    (0..n)
        .map(|k| {
            let sigma = if k == 0 {
                (d[1] - d[0]) / h
            } else if k + 1 == n {
                (d[n - 1] - d[n - 2]) / h
            } else {
                (d[k + 1] - d[k - 1]) / (2.0 * h)
            };
            sigma.max(0.0) * h
        })
        .sum()
}

/// Max over the sampled pairs of the integrated trace-distance increase.
///
/// `grid` is a uniform dimensionless grid with at least 200 points. The
/// result is a lower bound on the true measure.
pub fn blp_measure(model: &ModelSpec, pairs: &PairSampling, grid: &[f64]) -> Result<BlpEstimate> {
    if grid.len() < BLP_MIN_POINTS {
        return Err(Error::GridTooCoarse {
            points: grid.len(),
            required: BLP_MIN_POINTS,
        });
    }
    check_scan_grid(grid)?;
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if grid
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0))
    {
        return Err(Error::InvalidGrid("BLP grid must be uniform".into()));
    }
    model.validate()?;
    let owned;
    let pairs = match pairs {
        PairSampling::Default { seed } => {
            owned = default_pairs(model, *seed)?;
            &owned
        }
        PairSampling::Explicit(p) => p,
    };
    if pairs.is_empty() {
        return Err(Error::InvalidInitialState("no BLP pairs sampled".into()));
    }
    let channels = grid
        .par_iter()
        .map(|&s| model.channel(model.physical_time(s)))
        .collect::<Result<Vec<_>>>()?;
    let values = pairs
        .par_iter()
        .map(|pair| {
            let d = channels
                .iter()
                .map(|ch| trace_distance(&apply(ch, &pair.rho1)?, &apply(ch, &pair.rho2)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(positive_increase(&d, h))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (best, value) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    Ok(BlpEstimate {
        value,
        pair_count: pairs.len(),
        best_pair: pairs[best].label.clone(),
        grid: grid.to_vec(),
    })
}
