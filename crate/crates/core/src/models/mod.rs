//! The four exactly solvable models and a tagged [`ModelSpec`] that lets
//! probes and witnesses treat them uniformly.

pub mod dephasing;
pub mod jaynes_cummings;
pub mod yu_eberly;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

pub use dephasing::{ck_channel, ck_fidelity, ck_lindblad, ck_map_state, CkInitial};
pub use jaynes_cummings::{
    default_cutoff, jcm_photon_channel, jcm_photon_initial, jcm_photon_state, jcm_qubit_channel,
    jcm_qubit_initial, jcm_qubit_state, jcm_vacuum_fidelity,
};
pub use yu_eberly::{
    ye_markov_channel, ye_markov_fidelity, ye_markov_initial, ye_markov_state, ye_nonmarkov_channel,
    ye_nonmarkov_decay, ye_nonmarkov_fidelity, ye_nonmarkov_initial, ye_nonmarkov_state,
    DecayFunctions,
};

use crate::channel::{KrausChannel, LindbladSet};
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;

/// Model selector without parameters, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    YeMarkov,
    YeNonMarkov,
    JcmQubit,
    JcmPhoton,
    CkDephase,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::YeMarkov,
        ModelKind::YeNonMarkov,
        ModelKind::JcmQubit,
        ModelKind::JcmPhoton,
        ModelKind::CkDephase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::YeMarkov => "ye-markov",
            ModelKind::YeNonMarkov => "ye-nonmarkov",
            ModelKind::JcmQubit => "jcm-qubit",
            ModelKind::JcmPhoton => "jcm-photon",
            ModelKind::CkDephase => "ck",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!("unknown model '{s}' (expected ye-markov, ye-nonmarkov, jcm-qubit, jcm-photon or ck)")
            })
    }
}

/// One of the models together with its physical parameters.
///
/// Rates are inverse times; every time argument below is in the matching
/// physical unit, and [`ModelSpec::scaled_time`] gives the dimensionless
/// abscissa (`Γt`, `gt` or `t`).
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    YeMarkov {
        rate: f64,
        lambda: f64,
    },
    YeNonMarkov {
        rate: f64,
        bandwidth: f64,
        alpha_x: f64,
    },
    JcmQubit {
        coupling: f64,
        alpha_c: Complex64,
        n_max: usize,
    },
    JcmPhoton {
        coupling: f64,
        alpha_c: Complex64,
        n_max: usize,
    },
    CkDephase(CkInitial),
}

impl ModelSpec {
    /// Markovian two-qubit model with `Γ = 1`, `λ = 0.5`.
    pub fn ye_markov() -> Self {
        ModelSpec::YeMarkov {
            rate: 1.0,
            lambda: 0.5,
        }
    }

    /// Coloured-noise model with `Γ = 1`, `γ = 1e-4`, `α_x = 0.5`.
    pub fn ye_nonmarkov() -> Self {
        ModelSpec::YeNonMarkov {
            rate: 1.0,
            bandwidth: 1e-4,
            alpha_x: 0.5,
        }
    }

    /// Qubit side of the JCM with `g = 1` and field amplitude `alpha_c`.
    pub fn jcm_qubit(alpha_c: Complex64) -> Self {
        ModelSpec::JcmQubit {
            coupling: 1.0,
            alpha_c,
            n_max: default_cutoff(alpha_c),
        }
    }

    /// Field side of the JCM with `g = 1` and field amplitude `alpha_c`.
    pub fn jcm_photon(alpha_c: Complex64) -> Self {
        ModelSpec::JcmPhoton {
            coupling: 1.0,
            alpha_c,
            n_max: default_cutoff(alpha_c),
        }
    }

    pub fn ck() -> Self {
        ModelSpec::CkDephase(CkInitial::default())
    }

    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::YeMarkov => Self::ye_markov(),
            ModelKind::YeNonMarkov => Self::ye_nonmarkov(),
            ModelKind::JcmQubit => Self::jcm_qubit(Complex64::default()),
            ModelKind::JcmPhoton => Self::jcm_photon(Complex64::default()),
            ModelKind::CkDephase => Self::ck(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::YeMarkov { .. } => ModelKind::YeMarkov,
            ModelSpec::YeNonMarkov { .. } => ModelKind::YeNonMarkov,
            ModelSpec::JcmQubit { .. } => ModelKind::JcmQubit,
            ModelSpec::JcmPhoton { .. } => ModelKind::JcmPhoton,
            ModelSpec::CkDephase(_) => ModelKind::CkDephase,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use yu_eberly::{check_alpha_x, check_lambda, check_positive};
        match self {
            ModelSpec::YeMarkov { rate, lambda } => {
                check_positive("Gamma", *rate)?;
                check_lambda(*lambda)
            }
            ModelSpec::YeNonMarkov {
                rate,
                bandwidth,
                alpha_x,
            } => {
                check_positive("Gamma", *rate)?;
                check_positive("gamma", *bandwidth)?;
                check_alpha_x(*alpha_x)
            }
            ModelSpec::JcmQubit {
                coupling,
                alpha_c,
                n_max,
            }
            | ModelSpec::JcmPhoton {
                coupling,
                alpha_c,
                n_max,
            } => {
                check_positive("g", *coupling)?;
                jaynes_cummings::check_cutoff(*alpha_c, *n_max)
            }
            ModelSpec::CkDephase(init) => init.state().map(|_| ()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::YeMarkov { .. } | ModelSpec::YeNonMarkov { .. } => 4,
            ModelSpec::JcmQubit { .. } | ModelSpec::CkDephase(_) => 2,
            ModelSpec::JcmPhoton { n_max, .. } => n_max + 2,
        }
    }

    /// Rate that turns physical time into the dimensionless axis.
    pub fn time_scale(&self) -> f64 {
        match self {
            ModelSpec::YeMarkov { rate, .. } | ModelSpec::YeNonMarkov { rate, .. } => *rate,
            ModelSpec::JcmQubit { coupling, .. } | ModelSpec::JcmPhoton { coupling, .. } => *coupling,
            ModelSpec::CkDephase(_) => 1.0,
        }
    }

    pub fn scaled_time(&self, t: f64) -> f64 {
        self.time_scale() * t
    }

    pub fn physical_time(&self, scaled: f64) -> f64 {
        scaled / self.time_scale()
    }

    /// Symbol of the dimensionless axis.
    pub fn axis_label(&self) -> &'static str {
        match self.kind() {
            ModelKind::YeMarkov | ModelKind::YeNonMarkov => "Gamma t",
            ModelKind::JcmQubit | ModelKind::JcmPhoton => "g t",
            ModelKind::CkDephase => "t",
        }
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        match self {
            ModelSpec::YeMarkov { lambda, .. } => ye_markov_initial(*lambda),
            ModelSpec::YeNonMarkov { alpha_x, .. } => ye_nonmarkov_initial(*alpha_x),
            ModelSpec::JcmQubit { .. } => Ok(jcm_qubit_initial()),
            ModelSpec::JcmPhoton { alpha_c, n_max, .. } => jcm_photon_initial(*alpha_c, *n_max),
            ModelSpec::CkDephase(init) => init.state(),
        }
    }

    /// `rho(t)` from the model's closed form (the field state by channel
    /// application, which is exact for it).
    pub fn state(&self, t: f64) -> Result<DensityMatrix> {
        match self {
            ModelSpec::YeMarkov { rate, lambda } => ye_markov_state(t, *rate, *lambda),
            ModelSpec::YeNonMarkov {
                rate,
                bandwidth,
                alpha_x,
            } => ye_nonmarkov_state(t, *rate, *bandwidth, *alpha_x),
            ModelSpec::JcmQubit {
                coupling,
                alpha_c,
                n_max,
            } => jcm_qubit_state(t, *coupling, *alpha_c, *n_max),
            ModelSpec::JcmPhoton {
                coupling,
                alpha_c,
                n_max,
            } => jcm_photon_state(t, *coupling, *alpha_c, *n_max),
            ModelSpec::CkDephase(init) => ck_map_state(t, init),
        }
    }

    /// The dynamical map `Λ(t)` as a Kraus set.
    pub fn channel(&self, t: f64) -> Result<KrausChannel> {
        match self {
            ModelSpec::YeMarkov { rate, .. } => ye_markov_channel(t, *rate),
            ModelSpec::YeNonMarkov {
                rate, bandwidth, ..
            } => ye_nonmarkov_channel(t, *rate, *bandwidth),
            ModelSpec::JcmQubit {
                coupling,
                alpha_c,
                n_max,
            } => jcm_qubit_channel(t, *coupling, *alpha_c, *n_max),
            ModelSpec::JcmPhoton {
                coupling, n_max, ..
            } => jcm_photon_channel(t, *coupling, *n_max),
            ModelSpec::CkDephase(_) => ck_channel(t, 0.0),
        }
    }

    /// Closed-form `F[rho(t), rho(t + tau)]` where the model has one.
    pub fn closed_form_fidelity(&self, t: f64, tau: f64) -> Result<Option<f64>> {
        let f = match self {
            ModelSpec::YeMarkov { rate, lambda } => ye_markov_fidelity(t, tau, *rate, *lambda)?,
            ModelSpec::YeNonMarkov {
                rate, bandwidth, ..
            } => ye_nonmarkov_fidelity(t, tau, *rate, *bandwidth)?,
            ModelSpec::JcmQubit {
                coupling, alpha_c, ..
            } if *alpha_c == Complex64::default() => jcm_vacuum_fidelity(t, tau, *coupling)?,
            ModelSpec::CkDephase(init) if init.is_default() => ck_fidelity(t, tau)?,
            _ => return Ok(None),
        };
        Ok(Some(f))
    }

    pub fn has_closed_form(&self) -> bool {
        matches!(self.closed_form_fidelity(0.0, 0.0), Ok(Some(_)))
    }

    /// Constant-rate Lindblad set matching the model's leading small-time
    /// operators.
    pub fn lindblad_set(&self) -> Result<LindbladSet> {
        match self {
            ModelSpec::YeMarkov { rate, .. } | ModelSpec::YeNonMarkov { rate, .. } => {
                ye_lindblad(*rate)
            }
            ModelSpec::JcmQubit { coupling, .. } => jaynes_cummings::jcm_qubit_lindblad(*coupling),
            ModelSpec::JcmPhoton {
                coupling, n_max, ..
            } => jaynes_cummings::jcm_photon_lindblad(*coupling, *n_max),
            ModelSpec::CkDephase(_) => Ok(ck_lindblad()),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::YeMarkov { rate, lambda } => {
                write!(f, "ye-markov(Gamma={rate}, lambda={lambda})")
            }
            ModelSpec::YeNonMarkov {
                rate,
                bandwidth,
                alpha_x,
            } => write!(
                f,
                "ye-nonmarkov(Gamma={rate}, gamma={bandwidth}, alpha_x={alpha_x})"
            ),
            ModelSpec::JcmQubit {
                coupling,
                alpha_c,
                n_max,
            } => write!(f, "jcm-qubit(g={coupling}, alpha_c={alpha_c}, n_max={n_max})"),
            ModelSpec::JcmPhoton {
                coupling,
                alpha_c,
                n_max,
            } => write!(f, "jcm-photon(g={coupling}, alpha_c={alpha_c}, n_max={n_max})"),
            ModelSpec::CkDephase(init) => write!(
                f,
                "ck(rho11={}, rho22={}, rho12={})",
                init.rho11, init.rho22, init.rho12
            ),
        }
    }
}

/// `L1 = diag(1,0,1,0)`, `L2 = diag(1,1,0,0)` at rate `Γ`.
pub fn ye_lindblad(rate: f64) -> Result<LindbladSet> {
    LindbladSet::new(
        vec![
            ComplexMatrix::from_real_diag(&[1.0, 0.0, 1.0, 0.0]),
            ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0, 0.0]),
        ],
        rate,
    )
}
