//! Data behind the five figures, as CSV.

use std::f64::consts::{FRAC_PI_6, PI};
use std::fmt::Write as _;
use std::io;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{CkInitial, ModelSpec};
use crate::witness::{memory_fidelity, pair_fidelity, scan_g, uniform_grid, DEFAULT_WITNESS_TOL};

/// Optional parameter overrides for a figure. Lags are dimensionless.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub tau: Option<f64>,
    /// Noise bandwidth `γ` (the non-Markovian curve in figure 3).
    pub gamma: Option<f64>,
    /// Noise strength `Γ`.
    pub big_gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub g: Option<f64>,
    /// `α_x` for figures 2 and 3, the coherent amplitude for figure 4.
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: u8,
    pub header: Vec<&'static str>,
    /// Each row starts with the dimensionless abscissa.
    pub rows: Vec<Vec<f64>>,
    /// Name of the plotted quantity summarised by [`FigureData::extrema`].
    pub quantity: &'static str,
}

impl FigureData {
    /// `(min, argmin, max, argmax)` over every plotted column.
    pub fn extrema(&self) -> (f64, f64, f64, f64) {
        let mut out = (f64::INFINITY, 0.0, f64::NEG_INFINITY, 0.0);
        for row in &self.rows {
            for &v in &row[1..] {
                if v < out.0 {
                    out.0 = v;
                    out.1 = row[0];
                }
                if v > out.2 {
                    out.2 = v;
                    out.3 = row[0];
                }
            }
        }
        out
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    pub fn summary(&self) -> String {
        let (lo, lo_at, hi, hi_at) = self.extrema();
        format!(
            "figure {}: {} rows, {} min {:.6e} at t={:.4}, max {:.6e} at t={:.4}",
            self.id,
            self.rows.len(),
            self.quantity,
            lo,
            lo_at,
            hi,
            hi_at
        )
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    /// Header plus one row per grid point, `{:.16e}` (17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{v:.16e}").expect("write to String");
            }
            s.push('\n');
        }
        s
    }
}

/// The default dimensionless grid of each figure.
pub fn default_grid(id: u8) -> Result<Vec<f64>> {
    match id {
        1 | 3 => uniform_grid(0.0, 10.0, 0.02),
        2 => uniform_grid(0.0, 20.0, 0.02),
        4 => uniform_grid(0.0, 10.0, 0.01),
        5 => uniform_grid(0.0, 2.0 * PI, 0.005),
        _ => Err(unknown(id)),
    }
}

fn unknown(id: u8) -> Error {
    Error::ParamOutOfRange {
        name: "figure",
        value: f64::from(id),
        range: "1..=5",
    }
}

fn g_series(model: &ModelSpec, grid: Vec<f64>, tau: f64) -> Result<Vec<Vec<f64>>> {
    let scan = scan_g(model, &grid, tau, DEFAULT_WITNESS_TOL)?;
    Ok(grid.into_iter().zip(scan.values).map(|(t, g)| vec![t, g]).collect())
}

/// Computes figure `id` (1 to 5) on its default grid.
pub fn figure_data(id: u8, o: &FigureOverrides) -> Result<FigureData> {
    let grid = default_grid(id)?;
    let rate = o.big_gamma.unwrap_or(1.0);
    let (header, quantity, rows) = match id {
        1 => {
            let model = ModelSpec::YeMarkov {
                rate,
                lambda: o.lambda.unwrap_or(0.5),
            };
            model.validate()?;
            let tau = o.tau.unwrap_or(1.0);
            let rows = grid
                .iter()
                .map(|&t| Ok(vec![t, pair_fidelity(&model, t, tau)?]))
                .collect::<Result<Vec<_>>>()?;
            (vec!["t", "F"], "F", rows)
        }
        2 => {
            let model = ModelSpec::YeNonMarkov {
                rate,
                bandwidth: o.gamma.unwrap_or(1e-4),
                alpha_x: o.alpha.unwrap_or(0.5),
            };
            (vec!["t", "G"], "G", g_series(&model, grid, o.tau.unwrap_or(1.0))?)
        }
        3 => {
            let family = |bandwidth| ModelSpec::YeNonMarkov {
                rate,
                bandwidth,
                alpha_x: o.alpha.unwrap_or(0.5),
            };
            let markov = memory_fidelity(&family(10.0), &grid)?;
            let nonmarkov = memory_fidelity(&family(o.gamma.unwrap_or(0.01)), &grid)?;
            let rows = grid
                .iter()
                .zip(markov.values.iter().zip(&nonmarkov.values))
                .map(|(&t, (&a, &b))| vec![t, a, b])
                .collect();
            (vec!["t", "F_markov", "F_nonmarkov"], "F", rows)
        }
        4 => {
            let alpha_c = Complex64::new(o.alpha.unwrap_or(0.0), 0.0);
            let mut model = ModelSpec::jcm_qubit(alpha_c);
            if let ModelSpec::JcmQubit { coupling, .. } = &mut model {
                *coupling = o.g.unwrap_or(1.0);
            }
            (vec!["t", "G"], "G", g_series(&model, grid, o.tau.unwrap_or(10.0))?)
        }
        5 => {
            let model = ModelSpec::CkDephase(CkInitial::default());
            (vec!["t", "G"], "G", g_series(&model, grid, o.tau.unwrap_or(FRAC_PI_6))?)
        }
        _ => return Err(unknown(id)),
    };
    Ok(FigureData {
        id,
        header,
        rows,
        quantity,
    })
}
