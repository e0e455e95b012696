use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Maximum perturbation per column, plus the minimum bicluster shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningParams {
    epsilon: Vec<f64>,
    min_row: usize,
    min_col: usize,
}

impl MiningParams {
    /// Broadcasts a scalar ε to `m` columns.
    pub fn uniform(epsilon: f64, m: usize, min_row: usize, min_col: usize) -> Result<Self> {
        Self::per_column(vec![epsilon; m], min_row, min_col)
    }

    pub fn per_column(epsilon: Vec<f64>, min_row: usize, min_col: usize) -> Result<Self> {
        if let Some((j, e)) = epsilon
            .iter()
            .enumerate()
            .find(|(_, e)| !(e.is_finite() && **e >= 0.0))
        {
            return Err(Error::InvalidParams(format!(
                "epsilon for column {} must be a finite non-negative number, got {e}",
                j + 1
            )));
        }
        if min_row == 0 || min_col == 0 {
            return Err(Error::InvalidParams(
                "min_row and min_col must be at least 1".into(),
            ));
        }
        Ok(MiningParams {
            epsilon,
            min_row,
            min_col,
        })
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    /// The scalar ε if every column shares it.
    pub fn uniform_epsilon(&self) -> Option<f64> {
        let first = *self.epsilon.first()?;
        self.epsilon.iter().all(|&e| e == first).then_some(first)
    }

    pub fn max_epsilon(&self) -> f64 {
        self.epsilon.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_row(&self) -> usize {
        self.min_row
    }

    pub fn min_col(&self) -> usize {
        self.min_col
    }

    /// Same shape constraints, ε replaced by zero everywhere.
    pub fn perfect(&self) -> MiningParams {
        MiningParams {
            epsilon: vec![0.0; self.epsilon.len()],
            ..self.clone()
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> MiningParams {
        MiningParams {
            epsilon: vec![epsilon; self.epsilon.len()],
            ..self.clone()
        }
    }

    /// Checks the parameters against a concrete matrix.
    pub fn validate(&self, matrix: &DataMatrix) -> Result<()> {
        let (n, m) = (matrix.n_rows(), matrix.n_cols());
        if self.epsilon.len() != m {
            return Err(Error::InvalidParams(format!(
                "{} epsilon values for {m} columns",
                self.epsilon.len()
            )));
        }
        if self.min_row > n {
            return Err(Error::InvalidParams(format!(
                "min_row = {} exceeds the {n} rows of the matrix",
                self.min_row
            )));
        }
        if self.min_col > m {
            return Err(Error::InvalidParams(format!(
                "min_col = {} exceeds the {m} columns of the matrix",
                self.min_col
            )));
        }
        Ok(())
    }
}

/// The four enumeration algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Formal concepts of a 0/1 matrix.
    InClose2,
    /// Perfect CVC biclusters (ε = 0).
    Cvcp,
    /// Perturbed CVC biclusters, duplicates blocked by a symbol table.
    Cvc,
    /// Perturbed CVC biclusters, duplicates blocked by row-canonicity.
    Cvc2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::InClose2,
        Algorithm::Cvcp,
        Algorithm::Cvc,
        Algorithm::Cvc2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::InClose2 => "inclose2",
            Algorithm::Cvcp => "cvcp",
            Algorithm::Cvc => "cvc",
            Algorithm::Cvc2 => "cvc2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "unknown algorithm {s:?}; expected one of inclose2, cvcp, cvc, cvc2"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_epsilon_is_broadcast() {
        let p = MiningParams::uniform(0.5, 3, 1, 1).unwrap();
        assert_eq!(p.epsilon(), &[0.5, 0.5, 0.5]);
        assert_eq!(p.uniform_epsilon(), Some(0.5));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(MiningParams::uniform(-0.1, 2, 1, 1).is_err());
        assert!(MiningParams::uniform(f64::NAN, 2, 1, 1).is_err());
        assert!(MiningParams::uniform(0.1, 2, 0, 1).is_err());
        let a = DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(MiningParams::uniform(0.1, 2, 2, 1).unwrap().validate(&a).is_err());
        assert!(MiningParams::uniform(0.1, 2, 1, 3).unwrap().validate(&a).is_err());
        assert!(MiningParams::uniform(0.1, 3, 1, 1).unwrap().validate(&a).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fca".parse::<Algorithm>().is_err());
    }
}
