//! Qubit dephasing with a constant memory kernel: coherences oscillate as
//! `cos(t - t0)` while populations stay fixed.

use num_complex::Complex64;

use crate::channel::{KrausChannel, LindbladSet};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};
use crate::models::yu_eberly::check_time;
use crate::state::DensityMatrix;

/// Initial qubit state entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CkInitial {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: Complex64,
}

impl Default for CkInitial {
    fn default() -> Self {
        Self {
            rho11: 0.5,
            rho22: 0.5,
            rho12: c64(0.5, 0.0),
        }
    }
}

impl CkInitial {
    pub fn state(&self) -> Result<DensityMatrix> {
        self.state_with_coherence(self.rho12)
    }

    fn state_with_coherence(&self, coherence: Complex64) -> Result<DensityMatrix> {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = c64(self.rho11, 0.0);
        m[(1, 1)] = c64(self.rho22, 0.0);
        m[(0, 1)] = coherence;
        m[(1, 0)] = coherence.conj();
        DensityMatrix::new(m).map_err(|e| Error::InvalidInitialState(e.to_string()))
    }

    /// Whether the closed-form fidelity applies (all entries one half).
    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

/// `{cos((t-t0)/2) I, sin((t-t0)/2) σz}`.
pub fn ck_channel(t: f64, t0: f64) -> Result<KrausChannel> {
    check_time(t - t0)?;
    let half = (t - t0) / 2.0;
    KrausChannel::new(
        "ck-dephase",
        vec![
            ComplexMatrix::identity(2).scale_real(half.cos()),
            sigma_z().scale_real(half.sin()),
        ],
    )
}

/// Closed-form evolved state: coherence multiplied by `cos t`.
pub fn ck_map_state(t: f64, initial: &CkInitial) -> Result<DensityMatrix> {
    check_time(t)?;
    initial.state()?;
    initial.state_with_coherence(initial.rho12 * t.cos())
}

/// `F[rho(t), rho(t+τ)] = (1 + cos t cos(t+τ) + |sin t sin(t+τ)|) / 2` for
/// the default initial state.
pub fn ck_fidelity(t: f64, tau: f64) -> Result<f64> {
    check_time(t)?;
    check_time(tau)?;
    let s = t + tau;
    Ok((0.5 * (1.0 + t.cos() * s.cos() + (t.sin() * s.sin()).abs())).min(1.0))
}

/// `{σz}` at rate 1/2, i.e. the kernel `(σz ρ σz - ρ)/2`.
pub fn ck_lindblad() -> LindbladSet {
    LindbladSet::new(vec![sigma_z()], 0.5).expect("sigma_z")
}
