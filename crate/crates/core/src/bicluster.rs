use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A submatrix `(rows, cols)`, both strictly ascending, one-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bicluster {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Bicluster {
    /// Validates one-based, strictly ascending, non-empty index lists.
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        check_indices("rows", &rows)?;
        check_indices("cols", &cols)?;
        Ok(Bicluster { rows, cols })
    }

    /// Converts zero-based internal index lists, sorting them if needed.
    pub(crate) fn from_zero_based(rows: &[usize], cols: &[usize]) -> Self {
        let mut rows: Vec<usize> = rows.iter().map(|i| i + 1).collect();
        let mut cols: Vec<usize> = cols.iter().map(|j| j + 1).collect();
        rows.sort_unstable();
        cols.sort_unstable();
        Bicluster { rows, cols }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn rows0(&self) -> Vec<usize> {
        self.rows.iter().map(|i| i - 1).collect()
    }

    pub fn cols0(&self) -> Vec<usize> {
        self.cols.iter().map(|j| j - 1).collect()
    }

    /// Checks that every index fits an `n × m` matrix.
    pub fn check_bounds(&self, n: usize, m: usize) -> Result<()> {
        let last_row = *self.rows.last().expect("non-empty");
        let last_col = *self.cols.last().expect("non-empty");
        if last_row > n || last_col > m {
            return Err(Error::Contract(format!(
                "bicluster {self} does not fit a {n}x{m} matrix"
            )));
        }
        Ok(())
    }

    /// The same submatrix seen in the transposed matrix.
    pub fn transposed(&self) -> Bicluster {
        Bicluster {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

fn check_indices(what: &str, idx: &[usize]) -> Result<()> {
    if idx.is_empty() {
        return Err(Error::Contract(format!("{what} must be non-empty")));
    }
    if idx[0] == 0 {
        return Err(Error::Contract(format!("{what} are one-based; found index 0")));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Contract(format!(
            "{what} must be strictly ascending: {idx:?}"
        )));
    }
    Ok(())
}

impl fmt::Display for Bicluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{")?;
        write_list(f, &self.rows)?;
        write!(f, "}}, {{")?;
        write_list(f, &self.cols)?;
        write!(f, "}})")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Biclusters in canonical order: by rows lexicographically, then by cols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BiclusterSet {
    items: Vec<Bicluster>,
}

impl BiclusterSet {
    /// Sorts into canonical order. Exact duplicates are kept so that
    /// verification can still count them.
    pub fn from_vec(mut items: Vec<Bicluster>) -> Self {
        items.sort();
        BiclusterSet { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Bicluster> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Bicluster] {
        &self.items
    }

    pub fn contains(&self, b: &Bicluster) -> bool {
        self.items.binary_search(b).is_ok()
    }

    pub fn into_vec(self) -> Vec<Bicluster> {
        self.items
    }

    /// Number of items whose row-set already appeared earlier in the set.
    pub fn duplicate_rowsets(&self) -> usize {
        let mut seen = HashSet::with_capacity(self.items.len());
        self.items.iter().filter(|b| !seen.insert(b.rows())).count()
    }

    pub fn transposed(&self) -> BiclusterSet {
        BiclusterSet::from_vec(self.items.iter().map(Bicluster::transposed).collect())
    }
}

impl FromIterator<Bicluster> for BiclusterSet {
    fn from_iter<T: IntoIterator<Item = Bicluster>>(iter: T) -> Self {
        BiclusterSet::from_vec(iter.into_iter().collect())
    }
}

impl IntoIterator for BiclusterSet {
    type Item = Bicluster;
    type IntoIter = std::vec::IntoIter<Bicluster>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

impl<'a> IntoIterator for &'a BiclusterSet {
    type Item = &'a Bicluster;
    type IntoIter = std::slice::Iter<'a, Bicluster>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
