//! Resonant Jaynes-Cummings model: an initially excited qubit coupled to a
//! coherent (or vacuum) field, seen from either subsystem.
//!
//! Qubit basis order is `(|up>, |down>)`; the field lives on Fock states
//! `|0> .. |n_max + 1>`, where the last level only receives population.

use num_complex::Complex64;

use crate::channel::{apply, KrausChannel, LindbladSet};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::models::yu_eberly::{check_positive, check_time};
use crate::state::DensityMatrix;

/// Poisson weight allowed beyond the Fock cutoff.
pub const TAIL_BOUND: f64 = 1e-12;

/// `ceil(|α|² + 10|α| + 20)`.
pub fn default_cutoff(alpha: Complex64) -> usize {
    let a = alpha.norm();
    (a * a + 10.0 * a + 20.0).ceil() as usize
}

/// `sum_{n > n_max} e^{-m} m^n / n!` with mean `m = |α|²`.
pub fn poisson_tail(alpha: Complex64, n_max: usize) -> f64 {
    let mean = alpha.norm_sqr();
    if mean == 0.0 {
        return 0.0;
    }
    let mut weight = (-mean).exp();
    for n in 1..=n_max {
        weight *= mean / n as f64;
    }
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        weight *= mean / n as f64;
        tail += weight;
        if n as f64 > mean && weight <= tail * 1e-17 {
            return tail;
        }
        n += 1;
    }
}

/// Largest coherent amplitude accepted; beyond it `e^{-|α|²}` underflows.
pub const MAX_ALPHA: f64 = 20.0;

pub fn check_cutoff(alpha: Complex64, n_max: usize) -> Result<()> {
    if !(alpha.norm() <= MAX_ALPHA) {
        return Err(Error::ParamOutOfRange {
            name: "alpha_c",
            value: alpha.norm(),
            range: "|alpha_c| <= 20",
        });
    }
    let tail = poisson_tail(alpha, n_max);
    if n_max == 0 || tail > TAIL_BOUND {
        return Err(Error::CutoffTooSmall {
            n_max,
            tail,
            bound: TAIL_BOUND,
        });
    }
    Ok(())
}

/// `<n|α>` for `n = 0..=n_max`.
pub fn coherent_amplitudes(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut c = c64((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..=n_max {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    amps
}

fn amp(amps: &[Complex64], n: isize) -> Complex64 {
    if n < 0 {
        return Complex64::default();
    }
    amps.get(n as usize).copied().unwrap_or_default()
}

/// Full qubit Kraus set `K_N = <N| U(t) |α>`, `N = 0..=n_max+1`.
///
/// On `|up>` it reduces to `W_{N,up} |up><up| + W_{N,down} |down><up|`.
pub fn jcm_qubit_channel(t: f64, coupling: f64, alpha: Complex64, n_max: usize) -> Result<KrausChannel> {
    check_time(t)?;
    check_positive("g", coupling)?;
    check_cutoff(alpha, n_max)?;
    let amps = coherent_amplitudes(alpha, n_max);
    let gt = coupling * t;
    let minus_i = c64(0.0, -1.0);
    let ops = (0..=n_max as isize + 1)
        .map(|n| {
            let up = gt * ((n + 1) as f64).sqrt();
            let down = gt * (n as f64).sqrt();
            let mut k = ComplexMatrix::zeros(2);
            k[(0, 0)] = amp(&amps, n) * up.cos();
            k[(1, 0)] = minus_i * amp(&amps, n - 1) * down.sin();
            k[(0, 1)] = minus_i * amp(&amps, n + 1) * up.sin();
            k[(1, 1)] = amp(&amps, n) * down.cos();
            k
        })
        .collect();
    KrausChannel::new("jcm-qubit", ops)
}

pub fn jcm_qubit_initial() -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_real_diag(&[1.0, 0.0])).expect("excited state")
}

/// Reduced qubit state from the population and coherence sums
///
/// ```text
/// |a|² = Σ |c_N|²     cos²(gt√(N+1))
/// |b|² = Σ |c_{N-1}|² sin²(gt√N)
/// ab*  = Σ c_N c*_{N-1} cos(gt√(N+1)) sin(gt√N)
/// ```
///
/// with `rho = [[|a|², i ab*], [-i a*b, |b|²]]`.
pub fn jcm_qubit_state(t: f64, coupling: f64, alpha: Complex64, n_max: usize) -> Result<DensityMatrix> {
    check_time(t)?;
    check_positive("g", coupling)?;
    check_cutoff(alpha, n_max)?;
    let amps = coherent_amplitudes(alpha, n_max);
    let gt = coupling * t;
    let mut a2 = 0.0;
    let mut b2 = 0.0;
    let mut ab = Complex64::default();
    for n in 0..=n_max as isize + 1 {
        let cos_up = (gt * ((n + 1) as f64).sqrt()).cos();
        let sin_down = (gt * (n as f64).sqrt()).sin();
        let cn = amp(&amps, n);
        let cm = amp(&amps, n - 1);
        a2 += cn.norm_sqr() * cos_up * cos_up;
        b2 += cm.norm_sqr() * sin_down * sin_down;
        ab += cn * cm.conj() * cos_up * sin_down;
    }
    let i = c64(0.0, 1.0);
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = c64(a2, 0.0);
    m[(1, 1)] = c64(b2, 0.0);
    m[(0, 1)] = i * ab;
    m[(1, 0)] = (i * ab).conj();
    DensityMatrix::new(m)
}

/// Closed-form vacuum fidelity `(|cos gt cos g(t+τ)| + |sin gt sin g(t+τ)|)²`.
pub fn jcm_vacuum_fidelity(t: f64, tau: f64, coupling: f64) -> Result<f64> {
    check_time(t)?;
    check_time(tau)?;
    check_positive("g", coupling)?;
    let (x, y) = (coupling * t, coupling * (t + tau));
    let root = (x.cos() * y.cos()).abs() + (x.sin() * y.sin()).abs();
    Ok((root * root).min(1.0))
}

/// Field Kraus pair `V_up,up = Σ cos(gt√(n+1)) |n><n|`,
/// `V_down,up = -i Σ sin(gt√(n+1)) |n+1><n|` on `n_cut + 2` Fock levels.
///
/// Completeness holds on `|0> .. |n_cut>`; the top level is a sink.
pub fn jcm_photon_channel(t: f64, coupling: f64, n_cut: usize) -> Result<KrausChannel> {
    check_time(t)?;
    check_positive("g", coupling)?;
    if n_cut == 0 {
        return Err(Error::CutoffTooSmall {
            n_max: 0,
            tail: f64::NAN,
            bound: TAIL_BOUND,
        });
    }
    let dim = n_cut + 2;
    let gt = coupling * t;
    let mut stay = ComplexMatrix::zeros(dim);
    let mut emit = ComplexMatrix::zeros(dim);
    for n in 0..dim {
        let phase = gt * ((n + 1) as f64).sqrt();
        stay[(n, n)] = c64(phase.cos(), 0.0);
        if n + 1 < dim {
            emit[(n + 1, n)] = c64(0.0, -phase.sin());
        }
    }
    KrausChannel::with_valid_subspace("jcm-photon", vec![stay, emit], n_cut + 1)
}

/// Coherent field state truncated to `n_cut + 2` levels.
pub fn jcm_photon_initial(alpha: Complex64, n_cut: usize) -> Result<DensityMatrix> {
    check_cutoff(alpha, n_cut)?;
    let mut amps = coherent_amplitudes(alpha, n_cut);
    amps.push(Complex64::default());
    DensityMatrix::pure(&amps)
}

pub fn jcm_photon_state(t: f64, coupling: f64, alpha: Complex64, n_cut: usize) -> Result<DensityMatrix> {
    let channel = jcm_photon_channel(t, coupling, n_cut)?;
    apply(&channel, &jcm_photon_initial(alpha, n_cut)?)
}

/// `a^dag` on the truncated field space.
pub fn creation_operator(n_cut: usize) -> ComplexMatrix {
    let dim = n_cut + 2;
    let mut a_dag = ComplexMatrix::zeros(dim);
    for n in 0..dim - 1 {
        a_dag[(n + 1, n)] = c64(((n + 1) as f64).sqrt(), 0.0);
    }
    a_dag
}

/// `{a^dag}` at rate `g²`; the field's short-time generator carries an extra
/// factor of `t`, so this constant-rate set only fits to first order.
pub fn jcm_photon_lindblad(coupling: f64, n_cut: usize) -> Result<LindbladSet> {
    LindbladSet::new(vec![creation_operator(n_cut)], coupling * coupling)
}

/// `{σ-}` at rate `g²`.
pub fn jcm_qubit_lindblad(coupling: f64) -> Result<LindbladSet> {
    let mut lower = ComplexMatrix::zeros(2);
    lower[(1, 0)] = c64(1.0, 0.0);
    LindbladSet::new(vec![lower], coupling * coupling)
}
