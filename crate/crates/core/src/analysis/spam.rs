use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Column-stochastic readout matrix: `rows[measured][prepared]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix<T> {
    rows: Vec<Vec<T>>,
}

#[derive(Serialize, Deserialize)]
struct ConfusionFile {
    matrix: Vec<Vec<f64>>,
}

impl<T: Real> ConfusionMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput(
                "confusion matrix must be square".into(),
            ));
        }
        let tol = T::of(1e-9);
        for col in 0..d {
            if rows.iter().any(|r| !(r[col] >= T::zero())) {
                return Err(Error::InvalidInput(format!(
                    "column {col} has a negative or NaN entry"
                )));
            }
            let sum: T = rows.iter().map(|r| r[col]).sum();
            if (sum - T::one()).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "column {col} sums to {sum}, not 1"
                )));
            }
        }
        Ok(ConfusionMatrix { rows })
    }

    /// Tensor product of per-qubit matrices, first factor on wire 0.
    pub fn tensor(factors: &[ConfusionMatrix<T>]) -> Result<Self> {
        let mut acc = vec![vec![T::one()]];
        for f in factors {
            let (da, df) = (acc.len(), f.dim());
            let mut next = vec![vec![T::zero(); da * df]; da * df];
            for (i, row) in acc.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    for (k, frow) in f.rows.iter().enumerate() {
                        for (l, &b) in frow.iter().enumerate() {
                            next[i * df + k][j * df + l] = a * b;
                        }
                    }
                }
            }
            acc = next;
        }
        Self::new(acc)
    }

    /// Reads `{"matrix": [[...], ...]}` (rows = measured outcome).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfusionFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(
            file.matrix
                .into_iter()
                .map(|r| r.into_iter().map(T::of).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// `R p`.
    pub fn apply(&self, p: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(p).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Vec<Vec<T>>> {
        let d = self.dim();
        let mut a = self.rows.clone();
        let mut inv: Vec<Vec<T>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&i, &j| {
                    a[i][col]
                        .abs()
                        .partial_cmp(&a[j][col].abs())
                        .expect("finite")
                })
                .expect("non-empty range");
            if a[pivot][col].abs() < T::of(1e-12) {
                return Err(Error::Singular(format!(
                    "confusion matrix is singular at column {col}"
                )));
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = a[col][col];
            for j in 0..d {
                a[col][j] /= scale;
                inv[col][j] /= scale;
            }
            for i in 0..d {
                if i == col {
                    continue;
                }
                let factor = a[i][col];
                if factor == T::zero() {
                    continue;
                }
                for j in 0..d {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[i][j] -= factor * ac;
                    inv[i][j] -= factor * ic;
                }
            }
        }
        Ok(inv)
    }
}

fn norm_1<T: Real>(m: &[Vec<T>]) -> T {
    (0..m.len())
        .map(|c| m.iter().map(|r| r[c].abs()).sum::<T>())
        .fold(T::zero(), T::max)
}

/// Readout-corrected distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpamCorrection<T> {
    /// Negatives clipped to zero, then renormalized.
    pub corrected: Vec<T>,
    /// `R^{-1} raw` as is.
    pub bare: Vec<T>,
    /// Total magnitude of the negative entries of `bare`.
    pub negative_mass: T,
    /// One-norm condition number of `R`.
    pub condition_number: T,
}

/// Applies `R^{-1}` to `raw`, clipping negative probabilities.
pub fn spam_correct<T: Real>(r: &ConfusionMatrix<T>, raw: &[T]) -> Result<SpamCorrection<T>> {
    if raw.len() != r.dim() {
        return Err(Error::RegisterMismatch(format!(
            "distribution of length {} for a {}x{} confusion matrix",
            raw.len(),
            r.dim(),
            r.dim()
        )));
    }
    let inv = r.inverse()?;
    let bare: Vec<T> = inv
        .iter()
        .map(|row| row.iter().zip(raw).map(|(&a, &b)| a * b).sum())
        .collect();
    let negative_mass: T = bare.iter().filter(|&&p| p < T::zero()).map(|p| -*p).sum();
    let clipped: Vec<T> = bare.iter().map(|&p| p.max(T::zero())).collect();
    let total: T = clipped.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::InvalidInput(
            "corrected distribution has no positive mass".into(),
        ));
    }
    Ok(SpamCorrection {
        corrected: clipped.iter().map(|&p| p / total).collect(),
        bare,
        negative_mass,
        condition_number: norm_1(&r.rows) * norm_1(&inv),
    })
}
