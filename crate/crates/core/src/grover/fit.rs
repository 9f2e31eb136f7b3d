use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{asp_model_unchecked, derive_seed};
use crate::error::{Error, Result};

/// One measured point of an ASP curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AspPoint {
    pub cycles: usize,
    pub asp: f64,
    pub shots: u64,
}

impl AspPoint {
    /// One-sigma binomial standard error.
    pub fn stderr(&self) -> f64 {
        if self.shots == 0 {
            return 0.0;
        }
        (self.asp * (1.0 - self.asp) / self.shots as f64).sqrt()
    }
}

/// ASP against cycle count, cycles strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct AspCurve {
    points: Vec<AspPoint>,
}

impl AspCurve {
    pub fn new(points: Vec<AspPoint>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(&p.asp)) {
            return Err(Error::InvalidInput(format!(
                "ASP {} at M = {} outside [0, 1]",
                p.asp, p.cycles
            )));
        }
        if points.windows(2).any(|w| w[0].cycles >= w[1].cycles) {
            return Err(Error::InvalidInput(
                "cycle counts must be strictly increasing".into(),
            ));
        }
        Ok(AspCurve { points })
    }

    pub fn points(&self) -> &[AspPoint] {
        &self.points
    }

    /// Rows of `M  asp  stderr` (stderr is one sigma).
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("M\tasp\tstderr\n");
        for p in &self.points {
            let _ = writeln!(out, "{}\t{:.6}\t{:.6}", p.cycles, p.asp, p.stderr());
        }
        out
    }

    /// Reads rows of `M asp [shots]` separated by whitespace; `#` lines and a
    /// non-numeric header line are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() || fields[0].parse::<f64>().is_err() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected 'M asp [shots]'", i + 1));
            if fields.len() < 2 {
                return Err(bad());
            }
            points.push(AspPoint {
                cycles: fields[0].parse().map_err(|_| bad())?,
                asp: fields[1].parse().map_err(|_| bad())?,
                shots: match fields.get(2) {
                    Some(s) => s.parse::<f64>().map_err(|_| bad())? as u64,
                    None => 0,
                },
            });
        }
        Self::new(points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitWarning {
    /// The objective does not vary with `F` (for example all ASP values
    /// equal); the estimate sits on the grid boundary.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub fidelity: f64,
    /// Sum of squared residuals at the estimate.
    pub sse: f64,
    pub warning: Option<FitWarning>,
}

const GRID_STEP: f64 = 1e-3;
const TOLERANCE: f64 = 1e-6;

/// Least-squares `F` on `[0, 1]`: a grid of step `1e-3`, then golden-section
/// refinement around the best grid point down to `1e-6`.
pub fn fit_fidelity(curve: &AspCurve, n: usize) -> Result<FitResult> {
    if curve.points.len() < 2 {
        return Err(Error::InvalidInput("fit needs at least 2 points".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let sse = |f: f64| -> f64 {
        curve
            .points
            .iter()
            .map(|p| (asp_model_unchecked(n, p.cycles, f) - p.asp).powi(2))
            .sum()
    };
    let steps = (1.0 / GRID_STEP).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| sse(k as f64 * GRID_STEP)).collect();
    let (best, &best_sse) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let worst = grid.iter().copied().fold(f64::MIN, f64::max);
    let first = curve.points[0].asp;
    let all_equal = curve.points.iter().all(|p| p.asp == first);
    if worst - best_sse <= f64::EPSILON * worst.max(1.0) {
        return Ok(FitResult {
            fidelity: 0.0,
            sse: grid[0],
            warning: Some(FitWarning::Flat),
        });
    }
    let center = best as f64 * GRID_STEP;
    let (mut lo, mut hi) = ((center - GRID_STEP).max(0.0), (center + GRID_STEP).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (sse(x1), sse(x2));
    while hi - lo > TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = sse(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = sse(x2);
        }
    }
    let mut fidelity = (lo + hi) / 2.0;
    let mut value = sse(fidelity);
    // golden section cannot land exactly on a bracket end
    for edge in [0.0, 1.0] {
        if (edge - center).abs() <= GRID_STEP && sse(edge) < value {
            fidelity = edge;
            value = sse(edge);
        }
    }
    Ok(FitResult {
        fidelity,
        sse: value,
        warning: all_equal.then_some(FitWarning::Flat),
    })
}

/// Synthetic curve: at each `M` in `1..=max_cycles`, a binomial draw of
/// `shots` trials at the model ASP. `shots == 0` returns the exact model.
pub fn sample_curve(
    n: usize,
    f: f64,
    max_cycles: usize,
    shots: u64,
    seed: u64,
) -> Result<AspCurve> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidArgument(format!(
            "fidelity {f} outside [0, 1]"
        )));
    }
    let points = (1..=max_cycles)
        .map(|m| {
            let p = asp_model_unchecked(n, m, f);
            let asp = if shots == 0 {
                p
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, m as u64));
                let k = Binomial::new(shots, p)
                    .expect("p in [0, 1]")
                    .sample(&mut rng);
                k as f64 / shots as f64
            };
            AspPoint {
                cycles: m,
                asp,
                shots,
            }
        })
        .collect();
    AspCurve::new(points)
}
