//! Kraus channels and the LGKS generator.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;

/// Completeness defect above which [`apply`] refuses a channel.
pub const APPLY_TOL: f64 = 1e-8;
/// Default completeness tolerance for [`validate_cptp`].
pub const CPTP_TOL: f64 = 1e-10;
/// Population tolerated outside a channel's valid subspace.
pub const SUBSPACE_LEAK_TOL: f64 = 1e-12;

/// An ordered Kraus set `{K_i}` acting as `rho -> sum_i K_i rho K_i^dag`.
///
/// Truncated channels (a finite Fock space) are only complete on the leading
/// `valid_dim` basis states; the completeness defect is measured there.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    label: String,
    dim: usize,
    valid_dim: usize,
    operators: Vec<ComplexMatrix>,
    defect: f64,
}

impl KrausChannel {
    pub fn new(label: impl Into<String>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = operators.first().ok_or(Error::EmptyChannel)?.dim();
        Self::with_valid_subspace(label, operators, dim)
    }

    pub fn with_valid_subspace(
        label: impl Into<String>,
        operators: Vec<ComplexMatrix>,
        valid_dim: usize,
    ) -> Result<Self> {
        let dim = operators.first().ok_or(Error::EmptyChannel)?.dim();
        if let Some(bad) = operators.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if valid_dim == 0 || valid_dim > dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: valid_dim,
            });
        }
        let defect = completeness_defect(&operators, valid_dim);
        Ok(Self {
            label: label.into(),
            dim,
            valid_dim,
            operators,
            defect,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new("identity", vec![ComplexMatrix::identity(dim)]).expect("identity channel")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valid_dim(&self) -> usize {
        self.valid_dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `max |sum K_i^dag K_i - I|` over the valid subspace, computed once.
    pub fn completeness_defect(&self) -> f64 {
        self.defect
    }
}

fn completeness_defect(operators: &[ComplexMatrix], valid_dim: usize) -> f64 {
    let dim = operators[0].dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for k in operators {
        sum = &sum + &(&k.adjoint() * k);
    }
    let id = ComplexMatrix::identity(dim);
    let mut worst = 0.0_f64;
    for i in 0..valid_dim {
        for j in 0..valid_dim {
            worst = worst.max((sum[(i, j)] - id[(i, j)]).norm());
        }
    }
    worst
}

/// Outcome of a completeness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    pub defect: f64,
    pub valid: bool,
}

pub fn validate_cptp(channel: &KrausChannel, tol: f64) -> CptpReport {
    let defect = channel.completeness_defect();
    CptpReport {
        defect,
        valid: defect <= tol,
    }
}

/// `sum_i K_i rho K_i^dag`.
pub fn apply(channel: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != channel.dim {
        return Err(Error::DimensionMismatch {
            expected: channel.dim,
            found: rho.dim(),
        });
    }
    if channel.defect > APPLY_TOL {
        return Err(Error::InvalidChannel {
            defect: channel.defect,
            tol: APPLY_TOL,
        });
    }
    if channel.valid_dim < channel.dim {
        let weight: f64 = (channel.valid_dim..channel.dim)
            .map(|i| rho.matrix()[(i, i)].re)
            .sum();
        if weight > SUBSPACE_LEAK_TOL {
            return Err(Error::OutsideValidSubspace { weight });
        }
    }
    let mut out = ComplexMatrix::zeros(channel.dim);
    for k in &channel.operators {
        out = &out + &k.sandwich(rho.matrix())?;
    }
    DensityMatrix::from_cp_output(out)
}

/// The channel "`early`, then `late`": Kraus set `{L_i E_j}` over all pairs.
pub fn compose(late: &KrausChannel, early: &KrausChannel) -> Result<KrausChannel> {
    if late.dim != early.dim {
        return Err(Error::DimensionMismatch {
            expected: late.dim,
            found: early.dim,
        });
    }
    let mut ops = Vec::with_capacity(late.operators.len() * early.operators.len());
    for l in &late.operators {
        for e in &early.operators {
            ops.push(l * e);
        }
    }
    KrausChannel::with_valid_subspace(
        format!("{} . {}", late.label, early.label),
        ops,
        late.valid_dim.min(early.valid_dim),
    )
}

/// Lindblad operators `L_i` with an overall rate.
#[derive(Debug, Clone)]
pub struct LindbladSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    rate: f64,
}

impl LindbladSet {
    pub fn new(operators: Vec<ComplexMatrix>, rate: f64) -> Result<Self> {
        let dim = operators.first().ok_or(Error::EmptyChannel)?.dim();
        if let Some(bad) = operators.iter().find(|l| l.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if !(rate >= 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "rate",
                value: rate,
                range: ">= 0",
            });
        }
        Ok(Self {
            dim,
            operators,
            rate,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// `sum_i [L_i rho L_i^dag - (L_i^dag L_i rho + rho L_i^dag L_i) / 2]`,
/// without the rate prefactor.
pub fn lgks_rhs(lset: &LindbladSet, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != lset.dim {
        return Err(Error::DimensionMismatch {
            expected: lset.dim,
            found: rho.dim(),
        });
    }
    let r = rho.matrix();
    let mut out = ComplexMatrix::zeros(lset.dim);
    for l in &lset.operators {
        let ldl = &l.adjoint() * l;
        let anti = &(&ldl * r) + &(r * &ldl);
        out = &out + &(&l.sandwich(r)? - &anti.scale_real(0.5));
    }
    Ok(out)
}
