//! Exhaustive reference enumerators for small matrices.
//!
//! Every row subset is visited, so these stay deliberately naive.

use crate::bicluster::{Bicluster, BiclusterSet};
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::params::MiningParams;

/// Largest row count the oracles accept.
pub const MAX_ORACLE_ROWS: usize = 22;

fn guard(matrix: &DataMatrix) -> Result<()> {
    if matrix.n_rows() > MAX_ORACLE_ROWS {
        return Err(Error::TooLarge {
            n: matrix.n_rows(),
            limit: MAX_ORACLE_ROWS,
        });
    }
    Ok(())
}

fn rows_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// All maximal CVC biclusters meeting the size constraints.
///
/// For each row subset `I`, the column closure `J(I)` is every column whose
/// span over `I` is within ε; `(I, J(I))` is kept when no outside row keeps
/// all of `J(I)` within ε.
pub fn oracle_cvc(matrix: &DataMatrix, params: &MiningParams) -> Result<BiclusterSet> {
    guard(matrix)?;
    params.validate(matrix)?;
    let (n, m) = (matrix.n_rows(), matrix.n_cols());
    let eps = params.epsilon();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) < params.min_row() {
            continue;
        }
        let rows = rows_of(mask, n);
        let cols: Vec<usize> = (0..m).filter(|&j| matrix.span(&rows, j) <= eps[j]).collect();
        if cols.len() < params.min_col() {
            continue;
        }
        let row_maximal = (0..n).filter(|x| mask & (1 << x) == 0).all(|x| {
            cols.iter().any(|&j| {
                let (lo, hi) = matrix.min_max(&rows, j);
                let v = matrix.get(x, j);
                hi.max(v) - lo.min(v) > eps[j]
            })
        });
        if row_maximal {
            out.push(Bicluster::from_zero_based(&rows, &cols));
        }
    }
    Ok(BiclusterSet::from_vec(out))
}

/// All formal concepts `(I, J)` with `I↑ = J` and `J↓ = I` meeting the size
/// constraints. Requires a 0/1 matrix.
pub fn oracle_formal_concepts(matrix: &DataMatrix, params: &MiningParams) -> Result<BiclusterSet> {
    guard(matrix)?;
    params.validate(matrix)?;
    if !matrix.is_binary() {
        return Err(Error::InputDomain(
            "formal concepts need a matrix of 0s and 1s".into(),
        ));
    }
    let (n, m) = (matrix.n_rows(), matrix.n_cols());
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) < params.min_row() {
            continue;
        }
        let rows = rows_of(mask, n);
        let up: Vec<usize> = (0..m)
            .filter(|&j| rows.iter().all(|&i| matrix.get(i, j) == 1.0))
            .collect();
        let down: Vec<usize> = (0..n)
            .filter(|&i| up.iter().all(|&j| matrix.get(i, j) == 1.0))
            .collect();
        if down == rows && up.len() >= params.min_col() {
            out.push(Bicluster::from_zero_based(&rows, &up));
        }
    }
    Ok(BiclusterSet::from_vec(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::predicates::{is_correct_cvc, is_maximal};

    fn bic(rows: &[usize], cols: &[usize]) -> Bicluster {
        Bicluster::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn small_3x2_perfect() {
        let a = fixtures::small_3x2();
        let got = oracle_cvc(&a, &MiningParams::uniform(0.0, 2, 2, 1).unwrap()).unwrap();
        assert_eq!(got.into_vec(), vec![bic(&[1, 2], &[1]), bic(&[2, 3], &[2])]);
        let all = oracle_cvc(&a, &MiningParams::uniform(0.0, 2, 1, 1).unwrap()).unwrap();
        assert_eq!(
            all.into_vec(),
            vec![
                bic(&[1], &[1, 2]),
                bic(&[1, 2], &[1]),
                bic(&[2], &[1, 2]),
                bic(&[2, 3], &[2]),
                bic(&[3], &[1, 2]),
            ]
        );
    }

    #[test]
    fn m2_contains_the_shared_candidate() {
        let m2 = fixtures::m2();
        let params = MiningParams::uniform(1.0, 3, 2, 1).unwrap();
        let got = oracle_cvc(&m2, &params).unwrap();
        assert!(got.contains(&bic(&[2, 3], &[1, 2, 3])));
        for b in &got {
            assert!(is_maximal(&m2, b, params.epsilon()).unwrap());
        }
    }

    #[test]
    fn loose_epsilon_yields_whole_matrix() {
        let m2 = fixtures::m2();
        let got = oracle_cvc(&m2, &MiningParams::uniform(100.0, 3, 1, 1).unwrap()).unwrap();
        assert_eq!(got.into_vec(), vec![bic(&[1, 2, 3, 4, 5], &[1, 2, 3])]);
    }

    #[test]
    fn formal_concepts() {
        let p = MiningParams::uniform(0.0, 3, 1, 1).unwrap();
        let got = oracle_formal_concepts(&fixtures::b1(), &p).unwrap();
        assert_eq!(
            got.into_vec(),
            vec![
                bic(&[1, 2], &[1, 2]),
                bic(&[1, 2, 3], &[2]),
                bic(&[2], &[1, 2, 3]),
                bic(&[2, 3], &[2, 3]),
            ]
        );
        let eye = DataMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let p2 = MiningParams::uniform(0.0, 2, 1, 1).unwrap();
        assert_eq!(
            oracle_formal_concepts(&eye, &p2).unwrap().into_vec(),
            vec![bic(&[1], &[1]), bic(&[2], &[2])]
        );
        let zeros = DataMatrix::from_rows(&[[0.0, 0.0], [0.0, 0.0]]).unwrap();
        assert!(oracle_formal_concepts(&zeros, &p2).unwrap().is_empty());
    }

    #[test]
    fn size_guard() {
        let big = DataMatrix::new(23, 1, vec![0.0; 23]).unwrap();
        let p = MiningParams::uniform(0.0, 1, 1, 1).unwrap();
        assert!(matches!(oracle_cvc(&big, &p), Err(Error::TooLarge { n: 23, .. })));
        assert!(oracle_formal_concepts(&big, &p).is_err());
        assert!(oracle_formal_concepts(&fixtures::m2(), &MiningParams::uniform(0.0, 3, 1, 1).unwrap()).is_err());
    }

    #[test]
    fn outputs_are_correct_and_unique() {
        let a = DataMatrix::from_rows(&[
            [0.1, 0.9, 0.4],
            [0.2, 0.8, 0.9],
            [0.6, 0.85, 0.45],
            [0.15, 0.1, 0.5],
        ])
        .unwrap();
        let p = MiningParams::uniform(0.3, 3, 1, 1).unwrap();
        let got = oracle_cvc(&a, &p).unwrap();
        assert_eq!(got.duplicate_rowsets(), 0);
        for b in &got {
            assert!(is_correct_cvc(&a, b, p.epsilon()).unwrap());
            assert!(is_maximal(&a, b, p.epsilon()).unwrap());
        }
    }
}
