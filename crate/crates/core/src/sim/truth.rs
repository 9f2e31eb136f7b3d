use std::fmt::Write as _;

use rayon::prelude::*;

use super::{binary_digits, run};
use crate::error::{Error, Result};
use crate::ir::Circuit;
use crate::scalar::Real;

/// Output distributions for every binary input.
///
/// `columns[input][output]` is the probability of reading binary `output`
/// after preparing binary `input`; `leakage[input]` is the mass left on
/// states holding a `|2>`. Columns plus leakage sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable<T> {
    pub n: usize,
    pub columns: Vec<Vec<T>>,
    pub leakage: Vec<T>,
}

/// Largest register [`TruthTable::of`] accepts (4^n entries).
pub const TRUTH_TABLE_MAX_WIRES: usize = 12;

impl<T: Real> TruthTable<T> {
    /// Simulates every binary input of `circuit`.
    pub fn of(circuit: &Circuit) -> Result<Self> {
        let n = circuit.num_wires();
        if n > TRUTH_TABLE_MAX_WIRES {
            return Err(Error::SizeGuard {
                size: n,
                limit: TRUTH_TABLE_MAX_WIRES,
            });
        }
        let rows = (0..1usize << n)
            .into_par_iter()
            .map(|input| {
                run::<T>(circuit, &binary_digits(input, n)).map(|s| s.binary_distribution())
            })
            .collect::<Result<Vec<_>>>()?;
        let (columns, leakage) = rows.into_iter().unzip();
        Ok(TruthTable {
            n,
            columns,
            leakage,
        })
    }

    /// Deterministic table of a classical reversible map `input -> f(input)`.
    pub fn from_permutation(n: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let size = 1usize << n;
        let mut seen = vec![false; size];
        let mut columns = vec![vec![T::zero(); size]; size];
        for (input, col) in columns.iter_mut().enumerate() {
            let out = f(input);
            if out >= size || std::mem::replace(&mut seen[out], true) {
                return Err(Error::InvalidArgument(format!(
                    "map is not a permutation of {n}-bit labels (input {input} -> {out})"
                )));
            }
            col[out] = T::one();
        }
        Ok(TruthTable {
            n,
            columns,
            leakage: vec![T::zero(); size],
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation(n, |s| s).expect("identity is a permutation")
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn max_leakage(&self) -> T {
        self.leakage
            .iter()
            .copied()
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// For a 0/1 table, the output of each input; `None` if any column is not
    /// a point mass within `tol`.
    pub fn as_permutation(&self, tol: T) -> Option<Vec<usize>> {
        self.columns
            .iter()
            .map(|col| {
                let (arg, &max) = col
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite probabilities"))?;
                ((T::one() - max).abs() <= tol).then_some(arg)
            })
            .collect()
    }

    /// Largest entrywise difference against another table (leakage included).
    pub fn max_deviation(&self, other: &Self) -> Option<T> {
        if self.n != other.n {
            return None;
        }
        let cols = self
            .columns
            .iter()
            .flatten()
            .zip(other.columns.iter().flatten());
        let leaks = self.leakage.iter().zip(&other.leakage);
        Some(
            cols.chain(leaks)
                .map(|(a, b)| (*a - *b).abs())
                .fold(T::zero(), |a, b| if b > a { b } else { a }),
        )
    }

    /// Tab-separated rendering: one row per input, one column per output, then
    /// leakage.
    pub fn to_tsv(&self) -> String {
        let n = self.n;
        let label = |s: usize| format!("{s:0n$b}");
        let mut out =
            String::from("# basis labels: wire 0 is the leftmost (most significant) digit\n");
        out.push_str("input");
        for o in 0..self.size() {
            let _ = write!(out, "\t{}", label(o));
        }
        out.push_str("\tleakage\n");
        for (i, col) in self.columns.iter().enumerate() {
            out.push_str(&label(i));
            for p in col {
                let _ = write!(out, "\t{:.6}", p.to_f64_lossy());
            }
            let _ = writeln!(out, "\t{:.6e}", self.leakage[i].to_f64_lossy());
        }
        out
    }
}
