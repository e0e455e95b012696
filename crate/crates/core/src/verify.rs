//! Independent certification of mined solutions.

use serde::Serialize;

use crate::bicluster::{Bicluster, BiclusterSet};
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::params::MiningParams;
use crate::predicates::{extending_col, extending_row, is_correct_cvc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    OutOfBounds,
    Incorrect,
    /// The bicluster can take this one-based row.
    ExtendableByRow(usize),
    /// The bicluster can take this one-based column.
    ExtendableByCol(usize),
    TooFewRows,
    TooFewCols,
    DuplicateRowset,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Offence {
    pub bicluster: Bicluster,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n_biclusters: usize,
    pub all_correct: bool,
    pub all_maximal: bool,
    pub duplicate_rowsets: usize,
    pub size_violations: usize,
    pub details: Vec<Offence>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.details.is_empty()
    }
}

/// Checks every bicluster for correctness, maximality and the size
/// constraints, and counts repeated row-sets. Maximality is checked by
/// single-row and single-column extension; anti-monotonicity of the
/// correctness predicate makes that sufficient.
pub fn check_solution(matrix: &DataMatrix, set: &BiclusterSet, params: &MiningParams) -> Result<VerificationReport> {
    params.validate(matrix)?;
    let eps = params.epsilon();
    certify(
        matrix,
        set,
        params,
        |b| is_correct_cvc(matrix, b, eps),
        |b| extending_row(matrix, b, eps),
        |b| extending_col(matrix, b, eps),
    )
}

/// The same four checks for formal concepts of a 0/1 matrix: a bicluster
/// is correct when all its cells are 1, and maximal when no row or column
/// outside it is all 1 over the other side. ε is ignored.
pub fn check_concepts(matrix: &DataMatrix, set: &BiclusterSet, params: &MiningParams) -> Result<VerificationReport> {
    params.validate(matrix)?;
    if !matrix.is_binary() {
        return Err(Error::InputDomain("formal concepts need a 0/1 matrix".into()));
    }
    let one = |i: usize, j: usize| matrix.get(i - 1, j - 1) == 1.0;
    certify(
        matrix,
        set,
        params,
        |b| Ok(b.rows().iter().all(|&i| b.cols().iter().all(|&j| one(i, j)))),
        |b| (1..=matrix.n_rows()).find(|i| !b.rows().contains(i) && b.cols().iter().all(|&j| one(*i, j))),
        |b| (1..=matrix.n_cols()).find(|j| !b.cols().contains(j) && b.rows().iter().all(|&i| one(i, *j))),
    )
}

fn certify(
    matrix: &DataMatrix,
    set: &BiclusterSet,
    params: &MiningParams,
    correct: impl Fn(&Bicluster) -> Result<bool>,
    extending_row: impl Fn(&Bicluster) -> Option<usize>,
    extending_col: impl Fn(&Bicluster) -> Option<usize>,
) -> Result<VerificationReport> {
    let mut details = Vec::new();
    let mut report = |b: &Bicluster, violation| {
        details.push(Offence {
            bicluster: b.clone(),
            violation,
        })
    };
    let (mut incorrect, mut non_maximal, mut size_violations) = (0, 0, 0);
    for b in set {
        if b.check_bounds(matrix.n_rows(), matrix.n_cols()).is_err() {
            incorrect += 1;
            report(b, Violation::OutOfBounds);
            continue;
        }
        if !correct(b)? {
            incorrect += 1;
            report(b, Violation::Incorrect);
        } else if let Some(row) = extending_row(b) {
            non_maximal += 1;
            report(b, Violation::ExtendableByRow(row));
        } else if let Some(col) = extending_col(b) {
            non_maximal += 1;
            report(b, Violation::ExtendableByCol(col));
        }
        if b.rows().len() < params.min_row() {
            size_violations += 1;
            report(b, Violation::TooFewRows);
        }
        if b.cols().len() < params.min_col() {
            size_violations += 1;
            report(b, Violation::TooFewCols);
        }
    }
    let mut rowsets: Vec<&Bicluster> = set.iter().collect();
    rowsets.sort_by(|a, b| a.rows().cmp(b.rows()));
    let mut duplicate_rowsets = 0;
    for pair in rowsets.windows(2) {
        if pair[0].rows() == pair[1].rows() {
            duplicate_rowsets += 1;
            report(pair[1], Violation::DuplicateRowset);
        }
    }
    Ok(VerificationReport {
        n_biclusters: set.len(),
        all_correct: incorrect == 0,
        all_maximal: non_maximal == 0,
        duplicate_rowsets,
        size_violations,
        details,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SetDiff {
    /// In `b` but not in `a`.
    pub missing_from_a: Vec<Bicluster>,
    /// In `a` but not in `b`.
    pub missing_from_b: Vec<Bicluster>,
}

impl SetDiff {
    pub fn is_empty(&self) -> bool {
        self.missing_from_a.is_empty() && self.missing_from_b.is_empty()
    }
}

/// Two-way difference by exact `(rows, cols)` equality.
pub fn compare_sets(a: &BiclusterSet, b: &BiclusterSet) -> SetDiff {
    let (a, b) = (a.as_slice(), b.as_slice());
    let mut diff = SetDiff::default();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                diff.missing_from_b.push(x.clone());
                i += 1;
            }
            (Some(_), Some(y)) | (None, Some(y)) => {
                diff.missing_from_a.push(y.clone());
                j += 1;
            }
            (Some(x), None) => {
                diff.missing_from_b.push(x.clone());
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    diff
}
