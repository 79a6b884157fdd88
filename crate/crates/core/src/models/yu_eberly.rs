//! Two-qubit dephasing models: the Markovian channel with `γ(t) = e^{-Γt/2}`
//! and its coloured-noise variant with `p(t) = e^{-f(t)}`.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;

/// Decay amplitudes of both models at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFunctions {
    /// `e^{-Γt/2}`
    pub gamma_t: f64,
    /// `sqrt(1 - gamma_t^2)`
    pub omega_t: f64,
    /// `e^{-f(t)}`
    pub p_t: f64,
    /// `sqrt(1 - p_t^2)`
    pub q_t: f64,
    /// `Γ/2 [t + (e^{-γt} - 1)/γ]`
    pub f_t: f64,
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::ParamOutOfRange {
            name,
            value,
            range: "> 0",
        });
    }
    Ok(())
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=4.0).contains(&lambda) {
        return Err(Error::ParamOutOfRange {
            name: "lambda",
            value: lambda,
            range: "[0, 4]",
        });
    }
    Ok(())
}

pub(crate) fn check_alpha_x(alpha_x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha_x) {
        return Err(Error::ParamOutOfRange {
            name: "alpha_x",
            value: alpha_x,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// `(x - 1 + e^{-x}) / x`, accurate for small `x`.
fn relaxation_fraction(x: f64) -> f64 {
    if x < 0.1 {
        // sum_{k>=1} (-1)^{k+1} x^k / (k+1)!
        let mut term = x / 2.0;
        let mut sum = term;
        for k in 2..=12 {
            term *= -x / (k + 1) as f64;
            sum += term;
        }
        sum
    } else {
        (x + (-x).exp_m1()) / x
    }
}

/// `(γ(t), ω(t))` for the Markovian model.
fn markov_amplitudes(t: f64, rate: f64) -> (f64, f64) {
    let gamma = (-rate * t / 2.0).exp();
    let omega = (-(-rate * t).exp_m1()).sqrt();
    (gamma, omega)
}

pub fn ye_nonmarkov_decay(t: f64, rate: f64, bandwidth: f64) -> Result<DecayFunctions> {
    check_time(t)?;
    check_positive("Gamma", rate)?;
    check_positive("gamma", bandwidth)?;
    let (gamma_t, omega_t) = markov_amplitudes(t, rate);
    let f_t = rate / 2.0 * t * relaxation_fraction(bandwidth * t);
    let p_t = (-f_t).exp();
    let q_t = (-(-2.0 * f_t).exp_m1()).sqrt();
    Ok(DecayFunctions {
        gamma_t,
        omega_t,
        p_t,
        q_t,
        f_t,
    })
}

/// The diagonal Kraus quadruple shared by both models, with decay amplitude
/// `a` and its complement `b = sqrt(1 - a^2)`.
fn dephasing_quadruple(label: &str, a: f64, b: f64) -> KrausChannel {
    let ops = vec![
        ComplexMatrix::from_real_diag(&[a * a, a, a, 1.0]),
        ComplexMatrix::from_real_diag(&[a * b, 0.0, b, 0.0]),
        ComplexMatrix::from_real_diag(&[a * b, b, 0.0, 0.0]),
        ComplexMatrix::from_real_diag(&[b * b, 0.0, 0.0, 0.0]),
    ];
    KrausChannel::new(label, ops).expect("four 4x4 operators")
}

pub fn ye_markov_channel(t: f64, rate: f64) -> Result<KrausChannel> {
    check_time(t)?;
    check_positive("Gamma", rate)?;
    let (gamma, omega) = markov_amplitudes(t, rate);
    Ok(dephasing_quadruple("ye-markov", gamma, omega))
}

/// Channel of the coloured-noise model: `γ(t) -> p(t)`, `ω(t) -> q(t)`.
pub fn ye_nonmarkov_channel(t: f64, rate: f64, bandwidth: f64) -> Result<KrausChannel> {
    let d = ye_nonmarkov_decay(t, rate, bandwidth)?;
    Ok(dephasing_quadruple("ye-nonmarkov", d.p_t, d.q_t))
}

fn coherence_state(diag: [f64; 4], coherence: f64, norm: f64) -> Result<DensityMatrix> {
    let m = ComplexMatrix::from_real_rows([
        [diag[0], 0.0, 0.0, 0.0],
        [0.0, diag[1], coherence, 0.0],
        [0.0, coherence, diag[2], 0.0],
        [0.0, 0.0, 0.0, diag[3]],
    ]);
    DensityMatrix::new(m.scale_real(1.0 / norm))
}

/// Initial state of the Markovian model, `[1, 4, 4, 0]/9` with coherence `λ/9`.
pub fn ye_markov_initial(lambda: f64) -> Result<DensityMatrix> {
    check_lambda(lambda)?;
    coherence_state([1.0, 4.0, 4.0, 0.0], lambda, 9.0)
}

pub fn ye_markov_state(t: f64, rate: f64, lambda: f64) -> Result<DensityMatrix> {
    check_time(t)?;
    check_positive("Gamma", rate)?;
    check_lambda(lambda)?;
    let (gamma, _) = markov_amplitudes(t, rate);
    coherence_state([1.0, 4.0, 4.0, 0.0], lambda * gamma * gamma, 9.0)
}

/// Closed-form `F[rho(t), rho(t + tau)]` for the Markovian model.
pub fn ye_markov_fidelity(t: f64, tau: f64, rate: f64, lambda: f64) -> Result<f64> {
    check_time(t)?;
    check_time(tau)?;
    check_positive("Gamma", rate)?;
    check_lambda(lambda)?;
    let (g1, _) = markov_amplitudes(t, rate);
    let (g2, _) = markov_amplitudes(t + tau, rate);
    let (c1, c2) = (lambda * g1 * g1, lambda * g2 * g2);
    let root = 1.0 + ((4.0 + c1) * (4.0 + c2)).sqrt() + ((4.0 - c1) * (4.0 - c2)).sqrt();
    Ok((root * root / 81.0).min(1.0))
}

/// X-shaped initial state `[α, 1, 1, 1-α]/3` with coherence `1/3`.
pub fn ye_nonmarkov_initial(alpha_x: f64) -> Result<DensityMatrix> {
    check_alpha_x(alpha_x)?;
    coherence_state([alpha_x, 1.0, 1.0, 1.0 - alpha_x], 1.0, 3.0)
}

pub fn ye_nonmarkov_state(t: f64, rate: f64, bandwidth: f64, alpha_x: f64) -> Result<DensityMatrix> {
    check_alpha_x(alpha_x)?;
    let d = ye_nonmarkov_decay(t, rate, bandwidth)?;
    coherence_state([alpha_x, 1.0, 1.0, 1.0 - alpha_x], d.p_t * d.p_t, 3.0)
}

/// Closed-form `F[rho(t), rho(t + tau)]` for the coloured-noise model; it does
/// not depend on `α_x`.
pub fn ye_nonmarkov_fidelity(t: f64, tau: f64, rate: f64, bandwidth: f64) -> Result<f64> {
    check_time(tau)?;
    let d1 = ye_nonmarkov_decay(t, rate, bandwidth)?;
    let d2 = ye_nonmarkov_decay(t + tau, rate, bandwidth)?;
    let (p1, p2) = (d1.p_t * d1.p_t, d2.p_t * d2.p_t);
    let root = 1.0 + ((1.0 + p1) * (1.0 + p2)).sqrt() + d1.q_t * d2.q_t;
    Ok((root * root / 9.0).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply, validate_cptp};
    use crate::state::fidelity;

    #[test]
    fn markov_channel_at_zero_is_identity() {
        let ch = ye_markov_channel(0.0, 1.0).unwrap();
        let ops = ch.operators();
        assert_eq!(ops[0], ComplexMatrix::identity(4));
        assert!(ops[1..].iter().all(|k| k.max_abs() == 0.0));
        assert_eq!(ch.completeness_defect(), 0.0);
    }

    #[test]
    fn markov_channel_at_two_ln_two() {
        // e^{-ln 2} = 1/2, so γ = 1/2 and ω = sqrt(3)/2.
        let ch = ye_markov_channel(2.0 * std::f64::consts::LN_2, 1.0).unwrap();
        let k0 = &ch.operators()[0];
        let expected = ComplexMatrix::from_real_diag(&[0.25, 0.5, 0.5, 1.0]);
        assert!((k0 - &expected).max_abs() < 1e-15);
        let k3 = &ch.operators()[3];
        assert!((k3[(0, 0)].re - 0.75).abs() < 1e-15);
    }

    #[test]
    fn markov_channel_is_complete() {
        for i in 0..50 {
            let ch = ye_markov_channel(i as f64 * 0.37, 1.3).unwrap();
            assert!(validate_cptp(&ch, 1e-12).valid);
        }
    }

    #[test]
    fn broken_omega_reports_three_omega_squared() {
        let (gamma, omega) = markov_amplitudes(1.0, 1.0);
        let broken = dephasing_quadruple("broken", gamma, 2.0 * omega);
        let report = validate_cptp(&broken, 1e-10);
        assert!(!report.valid);
        // Row 0: γ^4 + 2 γ^2 (2ω)^2 + (2ω)^4 - 1 with γ^2 + ω^2 = 1.
        let w2 = omega * omega;
        let g2 = gamma * gamma;
        let row0 = (g2 * g2 + 8.0 * g2 * w2 + 16.0 * w2 * w2 - 1.0).abs();
        let row1 = 3.0 * w2;
        assert!((report.defect - row0.max(row1)).abs() < 1e-14);
        assert!(report.defect >= 3.0 * w2);
    }

    #[test]
    fn markov_state_matches_channel() {
        let rho0 = ye_markov_initial(0.5).unwrap();
        for t in [0.0, 0.3, 1.0, 4.2] {
            let by_channel = apply(&ye_markov_channel(t, 1.0).unwrap(), &rho0).unwrap();
            let closed = ye_markov_state(t, 1.0, 0.5).unwrap();
            assert!((by_channel.matrix() - closed.matrix()).max_abs() < 1e-12);
        }
        let rho = ye_markov_state(1.0, 1.0, 0.5).unwrap();
        assert!((rho.matrix()[(1, 2)].re - 0.5 * (-1.0_f64).exp() / 9.0).abs() < 1e-16);
    }

    #[test]
    fn markov_state_long_time_limit() {
        let rho = ye_markov_state(50.0, 1.0, 4.0).unwrap();
        assert!(rho.matrix()[(1, 2)].norm() <= 1e-10);
        let diag: Vec<f64> = (0..4).map(|i| rho.matrix()[(i, i)].re * 9.0).collect();
        assert_eq!(diag, vec![1.0, 4.0, 4.0, 0.0]);
    }

    #[test]
    fn markov_fidelity_examples() {
        assert!((ye_markov_fidelity(2.0, 0.0, 1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let limit = (1.0 + 18.0_f64.sqrt() + 14.0_f64.sqrt()).powi(2) / 81.0;
        assert!((ye_markov_fidelity(0.0, 60.0, 1.0, 0.5).unwrap() - limit).abs() < 1e-15);
        assert!((limit - 0.99652).abs() < 1e-5);
    }

    #[test]
    fn markov_fidelity_matches_generic() {
        for i in 0..20 {
            let t = 0.25 * i as f64;
            let closed = ye_markov_fidelity(t, 1.0, 1.0, 0.5).unwrap();
            let generic = fidelity(
                &ye_markov_state(t, 1.0, 0.5).unwrap(),
                &ye_markov_state(t + 1.0, 1.0, 0.5).unwrap(),
            )
            .unwrap();
            assert!((closed - generic).abs() < 1e-9);
        }
    }

    #[test]
    fn decay_identities() {
        let mut last_f = 0.0;
        for i in 0..200 {
            let t = 0.1 * i as f64;
            for bw in [1e-4, 0.01, 1.0, 10.0, 1e3] {
                let d = ye_nonmarkov_decay(t, 1.0, bw).unwrap();
                assert!((d.gamma_t.powi(2) + d.omega_t.powi(2) - 1.0).abs() < 1e-14);
                assert!((d.p_t.powi(2) + d.q_t.powi(2) - 1.0).abs() < 1e-14);
                assert!((0.0..=1.0).contains(&d.p_t) && (0.0..=1.0).contains(&d.q_t));
                assert!(d.f_t >= 0.0);
            }
            let f = ye_nonmarkov_decay(t, 1.0, 0.01).unwrap().f_t;
            assert!(f >= last_f);
            last_f = f;
        }
    }

    #[test]
    fn decay_limits() {
        let d0 = ye_nonmarkov_decay(0.0, 1.0, 1e-4).unwrap();
        assert_eq!((d0.p_t, d0.q_t, d0.f_t), (1.0, 0.0, 0.0));

        // γt << 1: p ≈ 1 - Γγt²/4
        let d = ye_nonmarkov_decay(1.0, 1.0, 1e-4).unwrap();
        assert!((d.p_t - (1.0 - 1e-4 / 4.0)).abs() < 1e-6);

        // γ -> ∞ recovers Γt/2.
        let d = ye_nonmarkov_decay(1.0, 1.0, 1e3).unwrap();
        assert!((d.f_t - 0.5).abs() < 1e-3);
    }

    #[test]
    fn series_and_direct_branches_agree() {
        for x in [0.099_999, 0.1] {
            let series = {
                let mut term = x / 2.0;
                let mut sum = term;
                for k in 2..=12 {
                    term *= -x / (k + 1) as f64;
                    sum += term;
                }
                sum
            };
            let direct = (x + (-x).exp_m1()) / x;
            assert!((series - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn nonmarkov_state_matches_channel_and_scaling() {
        let rho0 = ye_nonmarkov_initial(0.5).unwrap();
        for t in [0.0, 0.5, 3.0, 17.0] {
            let ch = ye_nonmarkov_channel(t, 1.0, 1e-4).unwrap();
            let by_channel = apply(&ch, &rho0).unwrap();
            let closed = ye_nonmarkov_state(t, 1.0, 1e-4, 0.5).unwrap();
            assert!((by_channel.matrix() - closed.matrix()).max_abs() < 1e-12);
            let p2 = ye_nonmarkov_decay(t, 1.0, 1e-4).unwrap().p_t.powi(2);
            assert!((closed.matrix()[(1, 2)].re - p2 / 3.0).abs() < 1e-15);
            for i in 0..4 {
                assert_eq!(closed.matrix()[(i, i)], rho0.matrix()[(i, i)]);
            }
        }
        let late = ye_nonmarkov_state(200.0, 1.0, 1.0, 0.5).unwrap();
        assert!(late.matrix()[(1, 2)].norm() < 1e-40);
    }

    #[test]
    fn nonmarkov_fidelity_examples() {
        assert!((ye_nonmarkov_fidelity(3.0, 0.0, 1.0, 1e-4).unwrap() - 1.0).abs() < 1e-15);
        assert!((ye_nonmarkov_fidelity(400.0, 1.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        for t in [0.0, 0.7, 5.0, 19.0] {
            let closed = ye_nonmarkov_fidelity(t, 1.0, 1.0, 1e-4).unwrap();
            let generic = fidelity(
                &ye_nonmarkov_state(t, 1.0, 1e-4, 0.3).unwrap(),
                &ye_nonmarkov_state(t + 1.0, 1.0, 1e-4, 0.3).unwrap(),
            )
            .unwrap();
            assert!((closed - generic).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn parameter_ranges() {
        assert!(ye_markov_state(0.0, 1.0, 4.5).is_err());
        assert!(ye_markov_channel(-1.0, 1.0).is_err());
        assert!(ye_nonmarkov_decay(1.0, 1.0, 0.0).is_err());
        assert!(ye_nonmarkov_initial(1.2).is_err());
    }
}
