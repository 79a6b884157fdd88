#![allow(dead_code)]

use kraus_witness::{ComplexMatrix, DensityMatrix, ModelSpec};
use num_complex::Complex64;
use proptest::prelude::*;

/// Every model in its default configuration, plus a coherent-field JCM.
pub fn models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::ye_markov(),
        ModelSpec::ye_nonmarkov(),
        ModelSpec::jcm_qubit(Complex64::new(0.0, 0.0)),
        ModelSpec::jcm_qubit(Complex64::new(1.0, 0.5)),
        ModelSpec::jcm_photon(Complex64::new(0.0, 0.0)),
        ModelSpec::ck(),
    ]
}

fn matrix_from(dim: usize, support: usize, raw: &[f64]) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..support {
        for j in 0..support {
            let k = 2 * (i * support + j);
            a[(i, j)] = Complex64::new(raw[k], raw[k + 1]);
        }
    }
    a
}

/// Mixed state `A A† / Tr` supported on the first `support` levels; `rank`
/// columns of `A` are kept so low-rank states appear too.
pub fn mixed_state(dim: usize, support: usize) -> impl Strategy<Value = DensityMatrix> {
    (
        prop::collection::vec(-1.0f64..1.0, 2 * support * support),
        1..=support,
    )
        .prop_filter_map("degenerate draw", move |(raw, rank)| {
            let mut a = matrix_from(dim, support, &raw);
            for i in 0..support {
                for j in rank..support {
                    a[(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
            let m = &a * &a.adjoint();
            let tr = m.trace().re;
            (tr > 1e-3).then(|| DensityMatrix::new(m.scale_real(1.0 / tr)).ok()).flatten()
        })
}

/// Unit-trace `A A† + I/10` (normalised): eigenvalues bounded away from zero.
pub fn well_conditioned(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |raw| {
        let a = matrix_from(dim, dim, &raw);
        let m = &(&a * &a.adjoint()) + &ComplexMatrix::identity(dim).scale_real(0.1);
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr)).expect("positive definite")
    })
}

/// Normalised state vector on the first `support` of `dim` levels.
pub fn pure_vector(dim: usize, support: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * support).prop_filter_map("zero vector", move |raw| {
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            for i in 0..support {
                v[i] = Complex64::new(raw[2 * i], raw[2 * i + 1]) / norm;
            }
            v
        })
    })
}

/// Probability vector with strictly positive entries.
pub fn probabilities(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, dim).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

/// Model index, dimensionless time and two states of the model's dimension.
pub fn model_and_pair() -> impl Strategy<Value = (usize, f64, DensityMatrix, DensityMatrix)> {
    let models = models();
    (0..models.len(), 0.0f64..10.0).prop_flat_map(move |(i, t)| {
        let dim = models[i].dim();
        let support = dim.min(4);
        (Just(i), Just(t), mixed_state(dim, support), mixed_state(dim, support))
    })
}

pub mod checks {
    use super::*;
    use kraus_witness::channel::apply;
    use kraus_witness::linalg::hermitian_eig;
    use kraus_witness::{fidelity, fidelity_difference, lgks_rhs, psd_sqrt, trace_distance, Error};
    use proptest::test_runner::TestCaseError;

    type Check = Result<(), TestCaseError>;

    fn fail(msg: String) -> TestCaseError {
        TestCaseError::fail(msg)
    }

    pub fn symmetry(a: &DensityMatrix, b: &DensityMatrix) -> Check {
        let ab = fidelity(a, b).map_err(|e| fail(e.to_string()))?;
        let ba = fidelity(b, a).map_err(|e| fail(e.to_string()))?;
        prop_assert!((ab - ba).abs() <= 1e-9, "F(a,b)={ab} F(b,a)={ba}");
        Ok(())
    }

    pub fn bounds(a: &DensityMatrix, b: &DensityMatrix) -> Check {
        let f = fidelity(a, b).map_err(|e| fail(e.to_string()))?;
        let d = trace_distance(a, b).map_err(|e| fail(e.to_string()))?;
        prop_assert!((0.0..=1.0).contains(&f), "F={f}");
        prop_assert!((0.0..=1.0).contains(&d), "D={d}");
        // Fuchs-van de Graaf: 1 - sqrt(F) <= D <= sqrt(1 - F).
        prop_assert!(1.0 - f.sqrt() <= d + 1e-9 && d <= (1.0 - f).max(0.0).sqrt() + 1e-9);
        Ok(())
    }

    pub fn pure_reduction(psi: &[Complex64], rho: &DensityMatrix) -> Check {
        let pure = DensityMatrix::pure(psi).map_err(|e| fail(e.to_string()))?;
        let f = fidelity(&pure, rho).map_err(|e| fail(e.to_string()))?;
        let expected = rho.expectation(psi).re;
        prop_assert!((f - expected).abs() <= 1e-10, "F={f} <psi|rho|psi>={expected}");
        Ok(())
    }

    /// `p` and `q` diagonal in a common random basis built from `h`.
    pub fn commuting(p: &[f64], q: &[f64], h: &DensityMatrix) -> Check {
        let u = hermitian_eig(h.matrix()).map_err(|e| fail(e.to_string()))?.eigenvectors;
        let rotate = |w: &[f64]| {
            let m = &(&u * &ComplexMatrix::from_real_diag(w)) * &u.adjoint();
            DensityMatrix::new(m.hermitian_part())
        };
        let a = rotate(p).map_err(|e| fail(e.to_string()))?;
        let b = rotate(q).map_err(|e| fail(e.to_string()))?;
        let f = fidelity(&a, &b).map_err(|e| fail(e.to_string()))?;
        let expected = p.iter().zip(q).map(|(x, y)| (x * y).sqrt()).sum::<f64>().powi(2);
        prop_assert!((f - expected).abs() <= 1e-10, "F={f} expected={expected}");
        Ok(())
    }

    /// `psd_sqrt(M)^2 = M` for any PSD input.
    pub fn sqrt_squares_back(m: &DensityMatrix) -> Check {
        let s = psd_sqrt(m.matrix()).map_err(|e| fail(e.to_string()))?;
        prop_assert!((&(&s * &s) - m.matrix()).frobenius_norm() <= 1e-9);
        prop_assert!(s.hermiticity_defect() <= 1e-12);
        Ok(())
    }

    /// `psd_sqrt(S0^2) = S0`. Only meaningful when `S0` is well conditioned:
    /// an eigenvalue near zero is recovered from its square to about
    /// `sqrt(eps)`.
    pub fn sqrt_recovers_root(s0: &DensityMatrix) -> Check {
        let s0 = s0.matrix();
        let s = psd_sqrt(&(s0 * s0)).map_err(|e| fail(e.to_string()))?;
        prop_assert!((&s - s0).frobenius_norm() <= 1e-9, "{}", (&s - s0).frobenius_norm());
        Ok(())
    }

    pub fn monotone_under_channel(model: &ModelSpec, t: f64, a: &DensityMatrix, b: &DensityMatrix) -> Check {
        let ch = model
            .channel(model.physical_time(t))
            .map_err(|e| fail(e.to_string()))?;
        let la = apply(&ch, a).map_err(|e| fail(e.to_string()))?;
        let lb = apply(&ch, b).map_err(|e| fail(e.to_string()))?;
        let before = fidelity(a, b).map_err(|e| fail(e.to_string()))?;
        let after = fidelity(&la, &lb).map_err(|e| fail(e.to_string()))?;
        prop_assert!(after >= before - 1e-9, "{model}: {before} -> {after}");
        let d0 = trace_distance(a, b).map_err(|e| fail(e.to_string()))?;
        let d1 = trace_distance(&la, &lb).map_err(|e| fail(e.to_string()))?;
        prop_assert!(d1 <= d0 + 1e-9, "{model}: D {d0} -> {d1}");
        // Trace and Hermiticity of the outputs.
        prop_assert!((la.matrix().trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(la.matrix().hermiticity_defect() <= 1e-11);
        Ok(())
    }

    pub fn g_vanishes_at_origin(model: &ModelSpec, tau: f64) -> Check {
        match fidelity_difference(model, 0.0, tau) {
            Ok(g) => {
                prop_assert_eq!(g, 0.0);
                Ok(())
            }
            Err(Error::DegenerateDenominator { .. }) => Ok(()),
            Err(e) => Err(fail(e.to_string())),
        }
    }

    pub fn generator_traceless(model: &ModelSpec, rho: &DensityMatrix) -> Check {
        let lset = model.lindblad_set().map_err(|e| fail(e.to_string()))?;
        let rhs = lgks_rhs(&lset, rho).map_err(|e| fail(e.to_string()))?;
        prop_assert!(rhs.trace().norm() <= 1e-10);
        prop_assert!(rhs.hermiticity_defect() <= 1e-10);
        Ok(())
    }
}
