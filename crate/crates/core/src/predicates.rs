//! Elementary consistency predicates on one-based biclusters.
//!
//! These are the reference definitions shared by the oracle and the
//! verifier; the miners use the zero-based kernels instead.

use crate::bicluster::Bicluster;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// `max - min` of column `col` over `rows` (both one-based).
pub fn column_span(matrix: &DataMatrix, rows: &[usize], col: usize) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::Contract("column_span of an empty row-set".into()));
    }
    if col == 0 || col > matrix.n_cols() {
        return Err(Error::Contract(format!(
            "column {col} out of range 1..={}",
            matrix.n_cols()
        )));
    }
    if let Some(&bad) = rows.iter().find(|&&i| i == 0 || i > matrix.n_rows()) {
        return Err(Error::Contract(format!(
            "row {bad} out of range 1..={}",
            matrix.n_rows()
        )));
    }
    let (lo, hi) = rows
        .iter()
        .map(|&i| matrix.get(i - 1, col - 1))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    Ok(hi - lo)
}

/// Every column of `b` has span at most its ε.
pub fn is_correct_cvc(matrix: &DataMatrix, b: &Bicluster, epsilon: &[f64]) -> Result<bool> {
    check(matrix, b, epsilon)?;
    let rows = b.rows0();
    Ok(b.cols0()
        .into_iter()
        .all(|j| matrix.span(&rows, j) <= epsilon[j]))
}

/// Global `max - min` over all cells of `b` is at most `epsilon`.
pub fn is_correct_ctv(matrix: &DataMatrix, b: &Bicluster, epsilon: f64) -> Result<bool> {
    b.check_bounds(matrix.n_rows(), matrix.n_cols())?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &i in b.rows() {
        for &j in b.cols() {
            let v = matrix.get(i - 1, j - 1);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    Ok(hi - lo <= epsilon)
}

/// No single row and no single column can be added while staying correct.
///
/// Errors if `b` is not itself a correct CVC bicluster.
pub fn is_maximal(matrix: &DataMatrix, b: &Bicluster, epsilon: &[f64]) -> Result<bool> {
    if !is_correct_cvc(matrix, b, epsilon)? {
        return Err(Error::Contract(format!(
            "is_maximal called on {b}, which is not a correct CVC bicluster"
        )));
    }
    Ok(extending_row(matrix, b, epsilon).is_none() && extending_col(matrix, b, epsilon).is_none())
}

/// First row (one-based) outside `b` that keeps every column of `b` within ε.
pub fn extending_row(matrix: &DataMatrix, b: &Bicluster, epsilon: &[f64]) -> Option<usize> {
    let rows = b.rows0();
    let cols = b.cols0();
    let bounds: Vec<(f64, f64)> = cols.iter().map(|&j| matrix.min_max(&rows, j)).collect();
    (0..matrix.n_rows())
        .filter(|i| rows.binary_search(i).is_err())
        .find(|&x| {
            cols.iter().zip(&bounds).all(|(&j, &(lo, hi))| {
                let v = matrix.get(x, j);
                hi.max(v) - lo.min(v) <= epsilon[j]
            })
        })
        .map(|x| x + 1)
}

/// First column (one-based) outside `b` whose span over the rows of `b` is within ε.
pub fn extending_col(matrix: &DataMatrix, b: &Bicluster, epsilon: &[f64]) -> Option<usize> {
    let rows = b.rows0();
    let cols = b.cols0();
    (0..matrix.n_cols())
        .filter(|j| cols.binary_search(j).is_err())
        .find(|&y| matrix.span(&rows, y) <= epsilon[y])
        .map(|y| y + 1)
}

fn check(matrix: &DataMatrix, b: &Bicluster, epsilon: &[f64]) -> Result<()> {
    b.check_bounds(matrix.n_rows(), matrix.n_cols())?;
    if epsilon.len() != matrix.n_cols() {
        return Err(Error::Contract(format!(
            "{} epsilon values for {} columns",
            epsilon.len(),
            matrix.n_cols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn bic(rows: &[usize], cols: &[usize]) -> Bicluster {
        Bicluster::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn span_examples() {
        let a = DataMatrix::from_columns(&[vec![3.0, 3.0, 4.0, 4.5, 5.0, 6.0]]).unwrap();
        assert_eq!(column_span(&a, &[1], 1).unwrap(), 0.0);
        assert_eq!(column_span(&a, &[1, 2, 3, 4, 5, 6], 1).unwrap(), 3.0);
        let b = DataMatrix::from_columns(&[vec![0.0, 0.5, 1.0]]).unwrap();
        assert_eq!(column_span(&b, &[1, 2, 3], 1).unwrap(), 1.0);
        assert!(column_span(&b, &[], 1).is_err());
        assert!(column_span(&b, &[4], 1).is_err());
        assert!(column_span(&b, &[1], 2).is_err());
    }

    #[test]
    fn correctness_on_m2() {
        let m2 = fixtures::m2();
        let eps = [1.0; 3];
        assert!(is_correct_cvc(&m2, &bic(&[2], &[3]), &[0.0; 3]).unwrap());
        assert!(is_correct_cvc(&m2, &bic(&[2, 3], &[1, 2, 3]), &eps).unwrap());
        assert!(!is_correct_cvc(&m2, &bic(&[1, 2, 3, 4], &[1]), &eps).unwrap());
    }

    #[test]
    fn maximality_examples() {
        let a = fixtures::small_3x2();
        let eps = [0.0; 2];
        assert!(is_maximal(&a, &bic(&[1, 2], &[1]), &eps).unwrap());
        assert!(!is_maximal(&a, &bic(&[1], &[1]), &eps).unwrap());
        assert!(is_maximal(&fixtures::m2(), &bic(&[2, 3], &[1, 2, 3]), &[1.0; 3]).unwrap());

        let constant = DataMatrix::from_rows(&[[2.0, 2.0], [2.0, 2.0]]).unwrap();
        assert!(is_maximal(&constant, &bic(&[1, 2], &[1, 2]), &eps).unwrap());
        // incorrect input is a contract violation
        assert!(is_maximal(&a, &bic(&[1, 3], &[1]), &eps).is_err());
    }

    fn matrix_strategy() -> impl Strategy<Value = DataMatrix> {
        (1usize..7, 1usize..6).prop_flat_map(|(n, m)| {
            prop::collection::vec(0u8..5, n * m).prop_map(move |v| {
                DataMatrix::new(n, m, v.into_iter().map(f64::from).collect()).unwrap()
            })
        })
    }

    fn subset(mask: u32, len: usize) -> Vec<usize> {
        (1..=len).filter(|i| mask & (1 << (i - 1)) != 0).collect()
    }

    proptest! {
        // Sub-biclusters of a correct bicluster stay correct.
        #[test]
        fn anti_monotonicity(a in matrix_strategy(), rmask in 1u32..128, cmask in 1u32..64,
                             sr in 1u32..128, sc in 1u32..64, eps in 0.0f64..3.0) {
            let (n, m) = (a.n_rows(), a.n_cols());
            let mut rows = subset(rmask, n);
            if rows.is_empty() {
                rows.push(1);
            }
            let e = vec![eps; m];
            // keep only the columns that make the bicluster correct
            let cols: Vec<usize> = subset(cmask, m)
                .into_iter()
                .filter(|&c| column_span(&a, &rows, c).unwrap() <= eps)
                .collect();
            if cols.is_empty() {
                return Ok(());
            }
            prop_assert!(is_correct_cvc(&a, &bic(&rows, &cols), &e).unwrap());
            let pick = |items: &[usize], mask: u32| -> Vec<usize> {
                let picked: Vec<usize> = items.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &x)| x).collect();
                if picked.is_empty() { vec![items[0]] } else { picked }
            };
            let sub = bic(&pick(&rows, sr), &pick(&cols, sc));
            prop_assert!(is_correct_cvc(&a, &sub, &e).unwrap());
        }

        // A constant-value submatrix within ε is also column-wise within ε.
        #[test]
        fn ctv_implies_cvc(a in matrix_strategy(), rmask in 1u32..128, cmask in 1u32..64, eps in 0.0f64..3.0) {
            let rows = subset(rmask, a.n_rows());
            let cols = subset(cmask, a.n_cols());
            prop_assume!(!rows.is_empty() && !cols.is_empty());
            let b = bic(&rows, &cols);
            if is_correct_ctv(&a, &b, eps).unwrap() {
                prop_assert!(is_correct_cvc(&a, &b, &vec![eps; a.n_cols()]).unwrap());
            }
        }

        #[test]
        fn span_grows_with_rows(a in matrix_strategy(), rmask in 1u32..128, extra in 0usize..7, j in 0usize..6) {
            let n = a.n_rows();
            let j = j % a.n_cols() + 1;
            let rows = subset(rmask, n);
            prop_assume!(!rows.is_empty());
            let mut bigger = rows.clone();
            bigger.push(extra % n + 1);
            bigger.sort_unstable();
            bigger.dedup();
            let mut reversed = rows.clone();
            reversed.reverse();
            let s = column_span(&a, &rows, j).unwrap();
            prop_assert_eq!(s, column_span(&a, &reversed, j).unwrap());
            prop_assert!(column_span(&a, &bigger, j).unwrap() >= s);
        }
    }
}
