//! Certified density matrices, Uhlmann fidelity and trace distance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eig, ComplexMatrix, Spectrum, PSD_TOL};

/// Tolerated `max |rho - rho^dag|` for a certified state.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerated `|Re tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-10;
/// Fidelity values in `(1, 1 + FIDELITY_OVERSHOOT]` clamp to 1.
pub const FIDELITY_OVERSHOOT: f64 = 1e-9;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Certifies `matrix` against the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_hermitian(&matrix, HERMITICITY_TOL)?;
        check_trace(&matrix, TRACE_TOL, HERMITICITY_TOL)?;
        check_psd(&matrix, PSD_TOL)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps the output of a completely positive map, which is PSD by
    /// construction; only Hermiticity and trace are checked.
    pub(crate) fn from_cp_output(matrix: ComplexMatrix) -> Result<Self> {
        check_trace(&matrix, TRACE_TOL, HERMITICITY_TOL)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Qubit state `(I + r.sigma) / 2` for a Bloch vector with `|r| <= 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let [x, y, z] = r;
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = c64((1.0 + z) / 2.0, 0.0);
        m[(1, 1)] = c64((1.0 - z) / 2.0, 0.0);
        m[(0, 1)] = c64(x / 2.0, -y / 2.0);
        m[(1, 0)] = c64(x / 2.0, y / 2.0);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_eig(&self.matrix)
    }

    /// `<psi| rho |psi>`.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::default();
        for i in 0..n {
            for j in 0..n {
                acc += psi[i].conj() * self.matrix[(i, j)] * psi[j];
            }
        }
        acc
    }
}

/// Checks `m` against every density-matrix invariant with a single tolerance.
///
/// The error names the first invariant that failed and by how much.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    check_hermitian(m, tol)?;
    check_trace(m, tol, tol)?;
    check_psd(m, tol)?;
    Ok(DensityMatrix {
        matrix: m.hermitian_part(),
    })
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::NonHermitian { defect });
    }
    Ok(())
}

fn check_trace(m: &ComplexMatrix, re_tol: f64, im_tol: f64) -> Result<()> {
    let tr = m.trace();
    if (tr.re - 1.0).abs() > re_tol || tr.im.abs() > im_tol {
        return Err(Error::TraceNotOne {
            re: tr.re,
            im: tr.im,
        });
    }
    Ok(())
}

fn check_psd(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let min = hermitian_eig(m)?.min_eigenvalue();
    if min < -tol {
        return Err(Error::NotPsd { eigenvalue: min });
    }
    Ok(())
}

/// Eigenvalues this close to zero, relative to the largest one, are below
/// the eigensolver's resolution and count as exact zeros.
fn rank_floor(spec: &Spectrum) -> f64 {
    let n = spec.eigenvalues.len() as f64;
    32.0 * f64::EPSILON * n * spec.max_eigenvalue().max(0.0)
}

fn clamp_psd_eigenvalues(spec: &Spectrum) -> Result<impl Fn(f64) -> f64> {
    let min = spec.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::NotPsd { eigenvalue: min });
    }
    let floor = rank_floor(spec);
    Ok(move |x: f64| if x <= floor { 0.0 } else { x })
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2`.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    let spec1 = rho1.spectrum()?;
    let clamp1 = clamp_psd_eigenvalues(&spec1)?;
    let root1 = spec1.map(|x| clamp1(x).sqrt());

    let inner = root1.matmul(rho2.matrix())?.matmul(&root1)?.hermitian_part();
    let spec = hermitian_eig(&inner)?;
    let clamp = clamp_psd_eigenvalues(&spec)?;
    let root_trace: f64 = spec.eigenvalues.iter().map(|&x| clamp(x).sqrt()).sum();
    let f = root_trace * root_trace;
    if f > 1.0 + FIDELITY_OVERSHOOT {
        return Err(Error::FidelityOvershoot { value: f });
    }
    Ok(f.min(1.0))
}

/// Trace distance `||rho1 - rho2||_1 / 2`.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let diff = rho1.matrix().try_sub(rho2.matrix())?;
    let spec = hermitian_eig(&diff)?;
    let d = 0.5 * spec.eigenvalues.iter().map(|x| x.abs()).sum::<f64>();
    Ok(d.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_real_diag(p)).unwrap()
    }

    #[test]
    fn fidelity_of_identical_states_is_one() {
        let rho = DensityMatrix::from_bloch([0.3, -0.2, 0.5]).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn commuting_states_use_classical_overlap() {
        let f = fidelity(&diag(&[0.7, 0.3]), &diag(&[0.4, 0.6])).unwrap();
        let expected = (0.28_f64.sqrt() + 0.18_f64.sqrt()).powi(2);
        assert!((f - expected).abs() < 1e-12);
    }

    #[test]
    fn pure_state_against_maximally_mixed() {
        let plus = DensityMatrix::from_bloch([1.0, 0.0, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((fidelity(&plus, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!((fidelity(&mixed, &plus).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let err = fidelity(&diag(&[1.0, 0.0]), &DensityMatrix::maximally_mixed(4)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 4
            }
        );
        assert!(trace_distance(&diag(&[1.0, 0.0]), &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let rho = diag(&[0.6, 0.4]);
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
        assert!((trace_distance(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
        let d = trace_distance(&DensityMatrix::maximally_mixed(2), &diag(&[0.75, 0.25])).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn validate_density_reports_failures() {
        assert!(validate_density(&ComplexMatrix::identity(2).scale_real(0.5), 1e-10).is_ok());
        assert_eq!(
            validate_density(&ComplexMatrix::from_real_diag(&[1.5, -0.5]), 1e-10).unwrap_err(),
            Error::NotPsd { eigenvalue: -0.5 }
        );
        assert!(matches!(
            validate_density(&ComplexMatrix::identity(2), 1e-10),
            Err(Error::TraceNotOne { re, .. }) if re == 2.0
        ));
        let mut skew = ComplexMatrix::identity(2).scale_real(0.5);
        skew[(0, 1)] = c64(0.1, 0.0);
        assert!(matches!(
            validate_density(&skew, 1e-10),
            Err(Error::NonHermitian { defect }) if (defect - 0.1).abs() < 1e-15
        ));
    }

    #[test]
    fn x_state_with_maximal_coherence_is_valid() {
        // Central block [[4, 4], [4, 4]] / 9 has eigenvalues 0 and 8/9.
        let lambda = 4.0;
        let m = ComplexMatrix::from_real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 4.0, lambda, 0.0],
            [0.0, lambda, 4.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .scale_real(1.0 / 9.0);
        let rho = validate_density(&m, 1e-10).unwrap();
        let spec = rho.spectrum().unwrap();
        let expected = [0.0, 0.0, 1.0 / 9.0, 8.0 / 9.0];
        for (got, want) in spec.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14);
        }
    }
}
