//! State files (JSON) and Ising sweep tables (CSV).
//!
//! A state file looks like
//!
//! ```json
//! { "dims": [2, 2], "matrix": [[[0.5, 0.0], ...], ...] }
//! ```
//!
//! with each entry an `[re, im]` pair and rows in the bipartite index
//! convention. `dims` of length one marks a single-system state.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{distribution_report, DistributionReport};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, LogBase};
use crate::measures::MeasureKind;
use crate::states::{self, BipartiteState, DensityMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// A parsed state: bipartite when the file declares two dimensions.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedState {
    Single(DensityMatrix),
    Bipartite(BipartiteState),
}

impl ParsedState {
    pub fn density_matrix(&self) -> &DensityMatrix {
        match self {
            ParsedState::Single(rho) => rho,
            ParsedState::Bipartite(s) => s.state(),
        }
    }

    pub fn into_bipartite(self) -> Result<BipartiteState> {
        match self {
            ParsedState::Bipartite(s) => Ok(s),
            ParsedState::Single(_) => Err(Error::Parse(
                "expected a bipartite state (dims of length 2)".into(),
            )),
        }
    }
}

impl StateFile {
    pub fn from_matrix(dims: Vec<usize>, m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dims, matrix }
    }

    pub fn from_bipartite(s: &BipartiteState) -> Self {
        Self::from_matrix(vec![s.dim_a(), s.dim_b()], s.matrix())
    }

    pub fn from_single(rho: &DensityMatrix) -> Self {
        Self::from_matrix(vec![rho.dim()], rho.matrix())
    }

    fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.matrix.len();
        if n == 0 {
            return Err(Error::Parse("matrix is empty".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "matrix row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
        }
        ComplexMatrix::from_row_major(data)
    }

    /// Shape checks, then full state validation.
    pub fn validate(&self) -> Result<ParsedState> {
        let mat = self.to_matrix()?;
        let product: usize = self.dims.iter().product();
        if self.dims.is_empty() || self.dims.len() > 2 || self.dims.contains(&0) {
            return Err(Error::Parse(format!(
                "dims must be [d] or [dA, dB] with positive entries, got {:?}",
                self.dims
            )));
        }
        if product != mat.dim() {
            return Err(Error::Parse(format!(
                "dims {:?} multiply to {product} but matrix is {}x{}",
                self.dims,
                mat.dim(),
                mat.dim()
            )));
        }
        let rho = DensityMatrix::new(mat)?;
        match self.dims.as_slice() {
            [_] => Ok(ParsedState::Single(rho)),
            [a, b] => Ok(ParsedState::Bipartite(BipartiteState::new(rho, *a, *b)?)),
            _ => unreachable!(),
        }
    }
}

pub fn parse_state_str(json: &str) -> Result<ParsedState> {
    let file: StateFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    file.validate()
}

pub fn parse_state(path: &Path) -> Result<ParsedState> {
    let text = fs::read_to_string(path)?;
    parse_state_str(&text)
}

pub fn state_to_json(file: &StateFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("state file serializes");
    s.push('\n');
    s
}

pub fn write_state(path: &Path, file: &StateFile) -> Result<()> {
    fs::write(path, state_to_json(file))?;
    Ok(())
}

/// Named state generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    IntroExample,
    Bell,
    Schmidt,
    IsingGround,
    ProductPlus,
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intro-example" => Ok(Generator::IntroExample),
            "bell" => Ok(Generator::Bell),
            "schmidt" => Ok(Generator::Schmidt),
            "ising-ground" => Ok(Generator::IsingGround),
            "product-plus" => Ok(Generator::ProductPlus),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }
}

/// Parameters consumed by [`generate`]; unused ones are ignored.
#[derive(Debug, Clone, Default)]
pub struct GeneratorParams {
    pub j: Option<f64>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    /// Coefficient matrix for `schmidt`.
    pub coefficients: Option<ComplexMatrix>,
}

pub const DEFAULT_EPSILON: f64 = 1e-3;

pub fn generate(generator: Generator, params: &GeneratorParams) -> Result<BipartiteState> {
    match generator {
        Generator::IntroExample => Ok(states::intro_example_state()),
        Generator::Bell => Ok(states::bell_state()),
        Generator::ProductPlus => Ok(states::product_plus_state()),
        Generator::Schmidt => {
            let c = params.coefficients.as_ref().ok_or_else(|| {
                Error::InvalidParameter("schmidt generator needs a coefficient matrix".into())
            })?;
            states::schmidt_correlated(c)
        }
        Generator::IsingGround => states::ising_ground_state(
            params.j.unwrap_or(0.0),
            params.lambda.unwrap_or(1.0),
            params.epsilon.unwrap_or(DEFAULT_EPSILON),
        ),
    }
}

/// One grid point of the Ising sweep: both partitions of the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub j_over_lambda: f64,
    pub l1: DistributionReport,
    pub rel: DistributionReport,
}

pub const SWEEP_HEADER: [&str; 15] = [
    "j_over_lambda",
    "l1_total",
    "l1_a",
    "l1_b",
    "l1_acc_a",
    "l1_acc_b",
    "l1_rem",
    "l1_residual",
    "rel_total",
    "rel_a",
    "rel_b",
    "rel_acc_a",
    "rel_acc_b",
    "rel_rem",
    "rel_residual",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    pub jmin: f64,
    pub jmax: f64,
    pub steps: usize,
    pub epsilon: f64,
    pub lambda: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            jmin: 0.0,
            jmax: 10.0,
            steps: 101,
            epsilon: DEFAULT_EPSILON,
            lambda: 1.0,
        }
    }
}

impl SweepParams {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.jmax
                } else {
                    self.jmin + (self.jmax - self.jmin) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// Partition of the Ising ground state at each `J/λ` on a uniform grid.
/// Grid points run in parallel; rows come back in grid order.
pub fn sweep_ising(params: &SweepParams) -> Result<Vec<SweepRow>> {
    if !(params.jmin <= params.jmax) || !params.jmin.is_finite() || !params.jmax.is_finite() {
        return Err(Error::InvalidRange(format!(
            "need jmin <= jmax, got {} > {}",
            params.jmin, params.jmax
        )));
    }
    if params.steps < 2 {
        return Err(Error::InvalidRange(format!("need steps >= 2, got {}", params.steps)));
    }
    params
        .grid()
        .into_par_iter()
        .map(|ratio| {
            let state = states::ising_ground_state(ratio * params.lambda, params.lambda, params.epsilon)?;
            let l1 = distribution_report(&state, MeasureKind::L1)?;
            let rel = distribution_report(&state, MeasureKind::RelativeEntropy)?;
            Ok(SweepRow {
                j_over_lambda: ratio,
                l1,
                rel,
            })
        })
        .collect()
}

/// 12 significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// Writes the sweep table. Relative-entropy columns are converted to `base`.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow], base: LogBase) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for row in rows {
        let rel = row.rel.scaled(base.from_bits(1.0));
        let l1 = &row.l1;
        let fields = [
            row.j_over_lambda,
            l1.c_total,
            l1.c_a,
            l1.c_b,
            l1.acc_a,
            l1.acc_b,
            l1.remaining,
            l1.residual,
            rel.c_total,
            rel.c_a,
            rel.c_b,
            rel.acc_a,
            rel.acc_b,
            rel.remaining,
            rel.residual,
        ];
        w.write_record(fields.iter().map(|x| format_value(*x))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
