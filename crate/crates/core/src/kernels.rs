//! Shared machinery of the miners: candidate row-sets by sort-and-sweep,
//! the canonicity family of tests, the row-check set update and the symbol
//! table.
//!
//! All indices here are zero-based and all row-sets are strictly ascending.

use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use crate::matrix::DataMatrix;

/// A maximal row window of one column, a candidate descendant row-set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateWindow {
    pub rows: Vec<usize>,
    pub col: usize,
}

/// Every maximal subset of `rows` whose values in `col` span at most `eps`.
///
/// The rows are sorted by `(value, row)` and swept with two pointers; window
/// `[s, e(s)]` is maximal exactly when `e(s) > e(s - 1)`. Windows come out
/// in ascending order of their smallest value. With `eps = 0` they partition
/// `rows`.
pub fn candidate_rowsets(
    matrix: &DataMatrix,
    rows: &[usize],
    col: usize,
    eps: f64,
) -> Vec<CandidateWindow> {
    candidate_rowsets_sized(matrix, rows, col, eps, 0)
}

/// The windows of [`candidate_rowsets`] holding at least `min_len` rows;
/// the smaller ones are never materialised.
pub fn candidate_rowsets_sized(
    matrix: &DataMatrix,
    rows: &[usize],
    col: usize,
    eps: f64,
    min_len: usize,
) -> Vec<CandidateWindow> {
    let (sorted, ranges) = window_ranges(matrix, rows, col, eps, min_len);
    ranges
        .into_iter()
        .map(|range| {
            let mut window = sorted[range].to_vec();
            window.sort_unstable();
            CandidateWindow { rows: window, col }
        })
        .collect()
}

/// The windows of [`candidate_rowsets_sized`] as ranges of `rows` sorted by
/// `(value, row)`. Both ends of the ranges ascend.
pub fn window_ranges(
    matrix: &DataMatrix,
    rows: &[usize],
    col: usize,
    eps: f64,
    min_len: usize,
) -> (Vec<usize>, Vec<Range<usize>>) {
    let mut sorted: Vec<(f64, usize)> = rows.iter().map(|&i| (matrix.get(i, col), i)).collect();
    sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut ranges = Vec::new();
    let mut end = 0;
    let mut prev_end = None;
    for start in 0..sorted.len() {
        if end < start {
            end = start;
        }
        while end + 1 < sorted.len() && sorted[end + 1].0 - sorted[start].0 <= eps {
            end += 1;
        }
        if prev_end.is_none_or(|p| end > p) && end + 1 - start >= min_len {
            ranges.push(start..end + 1);
        }
        prev_end = Some(end);
    }
    (sorted.into_iter().map(|(_, i)| i).collect(), ranges)
}

/// Size of the largest subset of `rows` whose values in `col` span at most
/// `eps`.
pub fn max_window_len(matrix: &DataMatrix, rows: &[usize], col: usize, eps: f64) -> usize {
    let mut values: Vec<f64> = rows.iter().map(|&i| matrix.get(i, col)).collect();
    values.sort_unstable_by(f64::total_cmp);
    longest_run(values.into_iter(), eps)
}

/// Longest run of ascending `values` spanning at most `eps`.
fn longest_run(values: impl Iterator<Item = f64> + Clone, eps: f64) -> usize {
    let mut lagging = values.clone();
    let mut low = f64::NEG_INFINITY;
    let (mut len, mut best) = (0, 0);
    for value in values {
        len += 1;
        while value - low > eps {
            low = lagging.next().expect("the lagging side stays behind");
            len -= 1;
        }
        best = best.max(len + 1);
    }
    best
}

/// Position of [`BucketGrid::slide`] along a sequence of windows, with the
/// last verdict established and how many rows may still change before it
/// has to be re-established.
#[derive(Default)]
struct Slide {
    current: Range<usize>,
    carried: Option<(bool, usize)>,
}

/// Per-column buckets of width just above ε / 8, fixed for a whole run.
///
/// Bucket counts bound the largest window of a row-set from both sides
/// without sorting, and an exact test runs only when the bounds straddle
/// the limit. The slack in the width absorbs rounding in the bucket index.
pub struct BucketGrid {
    m: usize,
    index: Vec<u32>,
    /// Bucket count per column; zero when the column is not bucketed.
    sizes: Vec<usize>,
    counts: Vec<u32>,
    marked: Vec<bool>,
}

impl BucketGrid {
    const MAX_BUCKETS: f64 = 65_536.0;
    /// Buckets per ε.
    const FINENESS: usize = 8;

    pub fn new(matrix: &DataMatrix, eps: &[f64]) -> Self {
        let (n, m) = (matrix.n_rows(), matrix.n_cols());
        let mut index = vec![0u32; n * m];
        let mut sizes = vec![0usize; m];
        let all: Vec<usize> = (0..n).collect();
        for k in 0..m {
            let (lo, hi) = matrix.min_max(&all, k);
            let width = eps[k] / Self::FINENESS as f64 * (1.0 + 1e-9);
            let well_scaled = eps[k] > 1e-6 * lo.abs().max(hi.abs());
            let buckets = ((hi - lo) / width).floor();
            if !(well_scaled && buckets < Self::MAX_BUCKETS) {
                continue;
            }
            let last = buckets as usize;
            sizes[k] = last + 1;
            for i in 0..n {
                let b = ((matrix.get(i, k) - lo) / width) as usize;
                index[i * m + k] = b.min(last) as u32;
            }
        }
        let widest = sizes.iter().copied().max().unwrap_or(0);
        BucketGrid {
            m,
            index,
            sizes,
            counts: vec![0; widest + 1],
            marked: vec![false; n],
        }
    }

    /// Whether at least `min_len` of `rows` lie within `eps` of each other
    /// in `col`.
    pub fn has_window(&mut self, matrix: &DataMatrix, rows: &[usize], col: usize, eps: f64, min_len: usize) -> bool {
        if rows.len() < min_len {
            return false;
        }
        let size = self.sizes[col];
        if size > 0 {
            let m = self.m;
            for &i in rows {
                self.counts[self.index[i * m + col] as usize] += 1;
            }
            let decided = self.decide(size, min_len);
            self.counts[..size].fill(0);
            if let Some(answer) = decided {
                return answer;
            }
        }
        max_window_len(matrix, rows, col, eps) >= min_len
    }

    /// [`BucketGrid::has_window`] for every window `sorted[range]` against
    /// the columns of `cols`: whether each window reaches at least `needed`
    /// of them. The ranges must ascend at both ends, as [`window_ranges`]
    /// gives them. `by_value[k]` caches the `(value, row)` pairs of all of
    /// `sorted` in ascending order of column `k`, or is empty until needed.
    #[allow(clippy::too_many_arguments)]
    pub fn reaches_enough(
        &mut self,
        matrix: &DataMatrix,
        sorted: &[usize],
        ranges: &[Range<usize>],
        cols: &[usize],
        eps: &[f64],
        min_len: usize,
        needed: usize,
        by_value: &mut [Vec<(f64, usize)>],
    ) -> Vec<bool> {
        let mut reached = vec![0; ranges.len()];
        let mut missed = vec![0; ranges.len()];
        let affordable = cols.len().saturating_sub(needed);
        let undecided = |w: usize, reached: &[usize], missed: &[usize]| {
            ranges[w].len() >= min_len && reached[w] < needed && missed[w] <= affordable
        };
        for &k in cols {
            let mut slide = Slide::default();
            for (w, range) in ranges.iter().enumerate() {
                if !undecided(w, &reached, &missed) {
                    continue;
                }
                let reaches = self.slide(&mut slide, matrix, sorted, range, k, eps[k], min_len, &mut by_value[k]);
                if reaches {
                    reached[w] += 1;
                } else {
                    missed[w] += 1;
                }
            }
            self.counts[..self.sizes[k]].fill(0);
        }
        (0..ranges.len())
            .map(|w| ranges[w].len() >= min_len && reached[w] >= needed)
            .collect()
    }

    /// Whether some window `sorted[range]` holds `min_len` rows whose values
    /// in column `k` span at most `eps`. Given all maximal windows of one
    /// column, this is the exact joint test of that column and `k`.
    /// `by_k` is the cache of [`BucketGrid::reaches_enough`] for `k`.
    #[allow(clippy::too_many_arguments)]
    pub fn any_window_reaches(
        &mut self,
        matrix: &DataMatrix,
        sorted: &[usize],
        ranges: &[Range<usize>],
        k: usize,
        eps: f64,
        min_len: usize,
        by_k: &mut Vec<(f64, usize)>,
    ) -> bool {
        let mut slide = Slide::default();
        let found = ranges
            .iter()
            .filter(|r| r.len() >= min_len)
            .any(|range| self.slide(&mut slide, matrix, sorted, range, k, eps, min_len, by_k));
        self.counts[..self.sizes[k]].fill(0);
        found
    }

    /// Whether `sorted[range]` holds `min_len` rows within `eps` on column
    /// `k`, for windows visited in ascending order through one `slide`.
    /// Bucket counts follow the windows incrementally. A verdict is reused
    /// while too few rows have come in (for a no) or gone out (for a yes)
    /// since it was established to change it.
    #[allow(clippy::too_many_arguments)]
    fn slide(
        &mut self,
        slide: &mut Slide,
        matrix: &DataMatrix,
        sorted: &[usize],
        range: &Range<usize>,
        k: usize,
        eps: f64,
        min_len: usize,
        by_k: &mut Vec<(f64, usize)>,
    ) -> bool {
        let (m, size) = (self.m, self.sizes[k]);
        let current = &slide.current;
        let gone = current.start..range.start.min(current.end);
        let come = range.start.max(current.end)..range.end;
        if size > 0 {
            for &i in &sorted[gone.clone()] {
                self.counts[self.index[i * m + k] as usize] -= 1;
            }
            for &i in &sorted[come.clone()] {
                self.counts[self.index[i * m + k] as usize] += 1;
            }
        }
        slide.current = range.clone();
        if let Some((verdict, margin)) = slide.carried {
            let change = if verdict { gone.len() } else { come.len() };
            if change <= margin {
                slide.carried = Some((verdict, margin - change));
                return verdict;
            }
        }
        let longest = match (size > 0).then(|| self.bounds(size)) {
            Some((lower, _)) if lower >= min_len => lower,
            Some((_, upper)) if upper < min_len => upper,
            _ => self.exact_window(matrix, sorted, range.clone(), k, eps, by_k),
        };
        let verdict = longest >= min_len;
        let margin = if verdict { longest - min_len } else { min_len - 1 - longest };
        slide.carried = Some((verdict, margin));
        verdict
    }

    /// Largest subset of the window `sorted[range]` within `eps` on column
    /// `k`, sorting all of `sorted` by `k` into `by_k` on first use.
    fn exact_window(
        &mut self,
        matrix: &DataMatrix,
        sorted: &[usize],
        range: Range<usize>,
        k: usize,
        eps: f64,
        by_k: &mut Vec<(f64, usize)>,
    ) -> usize {
        if by_k.is_empty() {
            *by_k = sorted.iter().map(|&i| (matrix.get(i, k), i)).collect();
            by_k.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        }
        for &i in &sorted[range.clone()] {
            self.marked[i] = true;
        }
        let values = by_k.iter().filter(|&&(_, i)| self.marked[i]).map(|&(v, _)| v);
        let longest = longest_run(values, eps);
        for &i in &sorted[range] {
            self.marked[i] = false;
        }
        longest
    }

    /// Settles a window test from the bucket counts of the first `size`
    /// buckets when the counts alone suffice. Rows in `FINENESS - 1`
    /// adjacent buckets are always within ε, and no window within ε spans
    /// more than `FINENESS + 2` buckets.
    fn decide(&self, size: usize, min_len: usize) -> Option<bool> {
        let (lower, upper) = self.bounds(size);
        if lower >= min_len {
            Some(true)
        } else if upper < min_len {
            Some(false)
        } else {
            None
        }
    }

    /// Bounds on the largest window of the counted rows: the most rows in
    /// `FINENESS - 1` adjacent buckets, which always lie within ε, and the
    /// most in `FINENESS + 2`, which contain any window within ε.
    fn bounds(&self, size: usize) -> (usize, usize) {
        let counts = &self.counts[..size];
        let (short, long) = (Self::FINENESS - 1, Self::FINENESS + 2);
        let (mut lower, mut upper) = (0, 0);
        let (mut short_sum, mut long_sum) = (0, 0);
        for b in 0..size {
            short_sum += counts[b];
            long_sum += counts[b];
            if b >= short {
                short_sum -= counts[b - short];
            }
            if b >= long {
                long_sum -= counts[b - long];
            }
            lower = lower.max(short_sum);
            upper = upper.max(long_sum);
        }
        (lower as usize, upper as usize)
    }
}

/// Lexicographic canonicity: `g` generated at column `j` is rejected when
/// some column `k < j` outside `cols` is already within ε on `g`.
pub fn is_canonical(
    matrix: &DataMatrix,
    g: &[usize],
    cols: &[usize],
    j: usize,
    eps: &[f64],
) -> bool {
    let mask = column_mask(matrix.n_cols(), cols);
    is_canonical_masked(matrix, g, &mask, j, eps)
}

pub(crate) fn is_canonical_masked(
    matrix: &DataMatrix,
    g: &[usize],
    in_cols: &[bool],
    j: usize,
    eps: &[f64],
) -> bool {
    !(0..j).any(|k| !in_cols[k] && matrix.within(g, k, eps[k]))
}

/// Canonicity for formal concepts: rejected when some column `k < j`
/// outside `cols` is all ones on `g`.
pub fn is_canonical_binary(matrix: &DataMatrix, g: &[usize], cols: &[usize], j: usize) -> bool {
    let mask = column_mask(matrix.n_cols(), cols);
    is_canonical_binary_masked(matrix, g, &mask, j)
}

pub(crate) fn is_canonical_binary_masked(
    matrix: &DataMatrix,
    g: &[usize],
    in_cols: &[bool],
    j: usize,
) -> bool {
    !(0..j).any(|k| !in_cols[k] && g.iter().all(|&i| matrix.get(i, k) == 1.0))
}

/// Row-maximality against the tracked rows: false when some `x ∈ gamma`
/// keeps every column of `h` within ε once added to `g`.
pub fn is_row_maximal(
    matrix: &DataMatrix,
    g: &[usize],
    h: &[usize],
    gamma: &[usize],
    eps: &[f64],
) -> bool {
    let bounds = Bounds::of(matrix, g, h);
    !gamma.iter().any(|&x| bounds.admits(matrix, x, eps))
}

/// Which part of the row-canonicity test rejected a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowCanonicalRule {
    /// A tracked row extends the candidate over the columns up to `j`,
    /// so a later column generates it.
    Extension,
    /// A lexicographically smaller parent row-set generates it at `j`.
    SmallerParent,
}

/// The row-canonicity test of the symbol-table-free miner.
///
/// With `jlt = {k ∈ cols : k < j}`, the candidate is rejected when some
/// `x ∈ gamma` either extends `g` over `jlt ∪ {j}`, or makes
/// `{i ∈ parent : i < x} ∪ {x} ∪ g` correct over `jlt`.
pub fn row_canonical_violation(
    matrix: &DataMatrix,
    g: &[usize],
    parent: &[usize],
    cols: &[usize],
    j: usize,
    gamma: &[usize],
    eps: &[f64],
) -> Option<RowCanonicalRule> {
    if gamma.is_empty() {
        return None;
    }
    let mut h: Vec<usize> = cols.iter().copied().filter(|&k| k < j).collect();
    h.sort_unstable();
    let jlt_len = h.len();
    h.push(j);

    let ext = Bounds::of(matrix, g, &h);
    if gamma.iter().any(|&x| ext.admits(matrix, x, eps)) {
        return Some(RowCanonicalRule::Extension);
    }

    let jlt = &h[..jlt_len];
    let g_bounds = Bounds::of(matrix, g, jlt);
    let prefix = PrefixBounds::of(matrix, parent, jlt);
    let smaller = gamma.iter().any(|&x| {
        let below = parent.partition_point(|&i| i < x);
        jlt.iter().enumerate().all(|(t, &k)| {
            let v = matrix.get(x, k);
            let (plo, phi) = prefix.get(below, t);
            let lo = g_bounds.lo[t].min(plo).min(v);
            let hi = g_bounds.hi[t].max(phi).max(v);
            hi - lo <= eps[k]
        })
    });
    smaller.then_some(RowCanonicalRule::SmallerParent)
}

pub fn is_row_canonical(
    matrix: &DataMatrix,
    g: &[usize],
    parent: &[usize],
    cols: &[usize],
    j: usize,
    gamma: &[usize],
    eps: &[f64],
) -> bool {
    row_canonical_violation(matrix, g, parent, cols, j, gamma, eps).is_none()
}

/// Rows to track for the descendants of candidate `g` created at column `j`.
///
/// With `p1` the `min_row`-th smallest and `p2` the `min_row`-th largest
/// value of `g` in column `j`, returns `gamma` plus every row of
/// `parent \ g` whose value lies in `[p1 - eps_j, p2 + eps_j]`.
pub fn compute_rm(
    matrix: &DataMatrix,
    g: &[usize],
    j: usize,
    gamma: &[usize],
    parent: &[usize],
    eps_j: f64,
    min_row: usize,
) -> Vec<usize> {
    debug_assert!(g.len() >= min_row && min_row >= 1);
    let mut vals: Vec<f64> = g.iter().map(|&i| matrix.get(i, j)).collect();
    vals.sort_unstable_by(f64::total_cmp);
    let p1 = vals[min_row - 1];
    let p2 = vals[vals.len() - min_row];

    let mut added = Vec::new();
    let mut gi = 0;
    for &i in parent {
        while gi < g.len() && g[gi] < i {
            gi += 1;
        }
        if gi < g.len() && g[gi] == i {
            continue;
        }
        let v = matrix.get(i, j);
        if p1 - v <= eps_j && v - p2 <= eps_j {
            added.push(i);
        }
    }
    merge_sorted(gamma, &added)
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        if a[x] < b[y] {
            out.push(a[x]);
            x += 1;
        } else if b[y] < a[x] {
            out.push(b[y]);
            y += 1;
        } else {
            out.push(a[x]);
            x += 1;
            y += 1;
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}

pub(crate) fn column_mask(m: usize, cols: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; m];
    for &k in cols {
        mask[k] = true;
    }
    mask
}

/// Per-column min/max of a row-set.
struct Bounds {
    cols: Vec<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Bounds {
    fn of(matrix: &DataMatrix, rows: &[usize], cols: &[usize]) -> Self {
        let (lo, hi) = cols.iter().map(|&k| matrix.min_max(rows, k)).unzip();
        Bounds {
            cols: cols.to_vec(),
            lo,
            hi,
        }
    }

    /// Adding row `x` keeps every column within its ε.
    fn admits(&self, matrix: &DataMatrix, x: usize, eps: &[f64]) -> bool {
        self.cols.iter().enumerate().all(|(t, &k)| {
            let v = matrix.get(x, k);
            self.hi[t].max(v) - self.lo[t].min(v) <= eps[k]
        })
    }
}

/// Running min/max over prefixes of an ascending row-set, per column.
struct PrefixBounds {
    width: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl PrefixBounds {
    fn of(matrix: &DataMatrix, rows: &[usize], cols: &[usize]) -> Self {
        let width = cols.len();
        let mut lo = vec![f64::INFINITY; (rows.len() + 1) * width];
        let mut hi = vec![f64::NEG_INFINITY; (rows.len() + 1) * width];
        for (p, &i) in rows.iter().enumerate() {
            for (t, &k) in cols.iter().enumerate() {
                let v = matrix.get(i, k);
                lo[(p + 1) * width + t] = lo[p * width + t].min(v);
                hi[(p + 1) * width + t] = hi[p * width + t].max(v);
            }
        }
        PrefixBounds { width, lo, hi }
    }

    /// Bounds over the first `len` rows.
    fn get(&self, len: usize, t: usize) -> (f64, f64) {
        (self.lo[len * self.width + t], self.hi[len * self.width + t])
    }
}

/// Registry of already generated row-sets.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    keys: Keys,
    key_bytes: usize,
}

#[derive(Debug, Clone)]
enum Keys {
    Hashed(HashSet<Box<[u8]>>),
    Ordered(BTreeSet<Box<[u8]>>),
}

/// Backing structure for a [`SymbolTable`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    #[default]
    Hashed,
    Ordered,
}

impl SymbolTable {
    pub fn new(kind: TableKind) -> Self {
        let keys = match kind {
            TableKind::Hashed => Keys::Hashed(HashSet::new()),
            TableKind::Ordered => Keys::Ordered(BTreeSet::new()),
        };
        SymbolTable { keys, key_bytes: 0 }
    }

    /// Records `rows`; true if it was absent.
    pub fn check_insert(&mut self, rows: &[usize]) -> bool {
        let key = encode_rowset(rows);
        let len = key.len();
        let fresh = match &mut self.keys {
            Keys::Hashed(set) => set.insert(key),
            Keys::Ordered(set) => set.insert(key),
        };
        if fresh {
            self.key_bytes += len;
        }
        fresh
    }

    pub fn contains(&self, rows: &[usize]) -> bool {
        let key = encode_rowset(rows);
        match &self.keys {
            Keys::Hashed(set) => set.contains(&key),
            Keys::Ordered(set) => set.contains(&key),
        }
    }

    pub fn len(&self) -> usize {
        match &self.keys {
            Keys::Hashed(set) => set.len(),
            Keys::Ordered(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total size of the stored keys.
    pub fn key_bytes(&self) -> usize {
        self.key_bytes
    }
}

/// Injective byte key of an ascending row-set: the first index followed by
/// the successive gaps, each as an unsigned LEB128 varint.
pub fn encode_rowset(rows: &[usize]) -> Box<[u8]> {
    let mut out = Vec::with_capacity(rows.len() + 1);
    let mut prev = 0;
    for (k, &i) in rows.iter().enumerate() {
        debug_assert!(k == 0 || i > prev, "row-set must be strictly ascending");
        let mut delta = if k == 0 { i } else { i - prev };
        prev = i;
        loop {
            let byte = (delta & 0x7f) as u8;
            delta >>= 7;
            if delta == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        }
    }
    out.into_boxed_slice()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn col(values: &[f64]) -> DataMatrix {
        DataMatrix::from_columns(&[values.to_vec()]).unwrap()
    }

    fn windows(a: &DataMatrix, rows: &[usize], eps: f64) -> Vec<Vec<usize>> {
        candidate_rowsets(a, rows, 0, eps)
            .into_iter()
            .map(|w| w.rows)
            .collect()
    }

    /// Maximal subsets with span ≤ eps, by exhaustive enumeration.
    fn brute_windows(values: &[f64], eps: f64) -> Vec<Vec<usize>> {
        let n = values.len();
        let ok = |mask: u32| {
            let sel: Vec<f64> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| values[i]).collect();
            let lo = sel.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = sel.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo <= eps
        };
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            if ok(mask) && (0..n).all(|x| mask & (1 << x) != 0 || !ok(mask | (1 << x))) {
                out.push((0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn window_examples() {
        let a = col(&[1.0, 1.2, 2.0, 2.1, 3.5]);
        let rows: Vec<usize> = (0..5).collect();
        assert_eq!(windows(&a, &rows, 0.5), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(
            windows(&a, &rows, 1.0),
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![4]]
        );
        assert_eq!(brute_windows(&[1.0, 1.2, 2.0, 2.1, 3.5], 1.0), windows(&a, &rows, 1.0));

        let constant = col(&[4.0; 4]);
        assert_eq!(windows(&constant, &[0, 1, 2, 3], 0.0), vec![vec![0, 1, 2, 3]]);

        let spread = col(&[0.0, 10.0, 20.0]);
        assert_eq!(windows(&spread, &[0, 1, 2], 1.0).len(), 3);
    }

    #[test]
    fn windows_only_see_the_given_rows() {
        let a = col(&[5.0, 1.0, 5.0, 9.0, 5.1]);
        assert_eq!(windows(&a, &[0, 2, 3, 4], 0.0), vec![vec![0, 2], vec![4], vec![3]]);
    }

    #[test]
    fn canonicity_examples() {
        let a = DataMatrix::from_rows(&[[5.0, 1.0, 0.0], [5.0, 2.0, 0.0], [5.0, 3.0, 9.0]]).unwrap();
        let eps = [0.0; 3];
        assert!(is_canonical(&a, &[0, 1], &[], 0, &eps));
        assert!(!is_canonical(&a, &[0, 1], &[], 2, &eps));
        assert!(is_canonical(&a, &[0, 1], &[0], 2, &eps));
        let b = DataMatrix::from_rows(&[[5.0, 1.0, 0.0], [6.0, 2.0, 0.0], [7.0, 3.0, 9.0]]).unwrap();
        assert!(is_canonical(&b, &[0, 1], &[], 2, &eps));
    }

    #[test]
    fn binary_canonicity() {
        let b1 = fixtures::b1();
        // {2,3} at column 3: column 2 is all ones on it
        assert!(!is_canonical_binary(&b1, &[1, 2], &[], 2));
        assert!(is_canonical_binary(&b1, &[1, 2], &[1], 2));
    }

    #[test]
    fn row_maximality_examples() {
        let m2 = fixtures::m2();
        let eps = [1.0; 3];
        assert!(is_row_maximal(&m2, &[0, 1], &[0], &[], &eps));
        assert!(is_row_maximal(&m2, &[1, 2], &[0, 1, 2], &[3], &eps));
        let a = DataMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0], [1.0, 9.0]]).unwrap();
        assert!(!is_row_maximal(&a, &[0, 1], &[0], &[2], &[0.0; 2]));
    }

    #[test]
    fn row_canonicity_examples() {
        let m2 = fixtures::m2();
        let eps = [1.0; 3];
        assert!(is_row_canonical(&m2, &[1, 2], &[0, 1, 2], &[0, 1], 2, &[], &eps));
        // from parent {1,2,3}: row 4 breaks column 3 and column 1
        assert_eq!(
            row_canonical_violation(&m2, &[1, 2], &[0, 1, 2], &[0, 1], 2, &[3], &eps),
            None
        );
        // from parent {2,3,4}: {1,2,3} is correct on columns {1,2}
        assert_eq!(
            row_canonical_violation(&m2, &[1, 2], &[1, 2, 3], &[0, 1], 2, &[0], &eps),
            Some(RowCanonicalRule::SmallerParent)
        );
    }

    #[test]
    fn row_canonicity_extension_uses_columns_before_j_only() {
        // Row 3 fits {1,2} on columns 1 and 3 but not on column 4 (index 3),
        // which sits after j = 2 in the inherited column-set.
        let a = DataMatrix::from_rows(&[
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 4.0, 0.0, 0.0],
            [0.0, 9.0, 0.0, 7.0],
        ])
        .unwrap();
        let eps = [0.0; 4];
        let g = [0, 1];
        assert!(!is_row_maximal(&a, &g, &[0], &[2], &eps));
        assert!(is_row_maximal(&a, &g, &[0, 3], &[2], &eps));
        assert_eq!(
            row_canonical_violation(&a, &g, &[0, 1], &[0, 3], 2, &[2], &eps),
            Some(RowCanonicalRule::Extension)
        );
    }

    #[test]
    fn compute_rm_examples() {
        // values {3,3,4,4.5,5,6} on rows 0..6, others -2, 7, 9
        let a = col(&[3.0, 3.0, 4.0, 4.5, 5.0, 6.0, -2.0, 7.0, 9.0]);
        let g: Vec<usize> = (0..6).collect();
        let parent: Vec<usize> = (0..9).collect();
        assert_eq!(compute_rm(&a, &g, 0, &[], &parent, 3.0, 2), vec![7]);
        assert_eq!(compute_rm(&a, &g, 0, &[], &g, 3.0, 2), Vec::<usize>::new());
        assert_eq!(compute_rm(&a, &g, 0, &[11, 20], &parent, 3.0, 2), vec![7, 11, 20]);
        // the window is [p1 - eps, p2 + eps] = [0, 8]
        let edge = col(&[3.0, 3.0, 4.0, 4.5, 5.0, 6.0, 0.0, 8.0, -1e-9]);
        assert_eq!(compute_rm(&edge, &g, 0, &[], &parent, 3.0, 2), vec![6, 7]);
    }

    #[test]
    fn symbol_table_examples() {
        for kind in [TableKind::Hashed, TableKind::Ordered] {
            let mut st = SymbolTable::new(kind);
            assert!(st.check_insert(&[1, 2]));
            assert!(!st.check_insert(&[1, 2]));
            assert!(st.check_insert(&[1, 2, 3]));
            assert!(st.contains(&[1, 2]));
            assert_eq!(st.len(), 2);
        }
    }

    proptest! {
        #[test]
        fn windows_match_brute_force(values in prop::collection::vec(0u8..8, 1..13), eps in 0u8..4) {
            let values: Vec<f64> = values.into_iter().map(|v| f64::from(v) * 0.5).collect();
            let eps = f64::from(eps) * 0.5;
            let a = col(&values);
            let rows: Vec<usize> = (0..values.len()).collect();
            let mut got = windows(&a, &rows, eps);
            got.sort();
            prop_assert_eq!(got, brute_windows(&values, eps));
        }

        #[test]
        fn sized_windows_and_longest_window(values in prop::collection::vec(0u8..8, 1..13), eps in 0u8..4, min_len in 0usize..6) {
            let values: Vec<f64> = values.into_iter().map(|v| f64::from(v) * 0.5).collect();
            let eps = f64::from(eps) * 0.5;
            let a = col(&values);
            let rows: Vec<usize> = (0..values.len()).collect();
            let all = candidate_rowsets(&a, &rows, 0, eps);
            let longest = all.iter().map(|w| w.rows.len()).max().unwrap();
            prop_assert_eq!(max_window_len(&a, &rows, 0, eps), longest);
            let mut expected = all;
            expected.retain(|w| w.rows.len() >= min_len);
            prop_assert_eq!(candidate_rowsets_sized(&a, &rows, 0, eps, min_len), expected);
        }

        #[test]
        fn window_test_agrees_with_longest_window(values in prop::collection::vec(0u8..40, 1..30), eps in 0u8..12, min_len in 0usize..12) {
            let values: Vec<f64> = values.into_iter().map(|v| f64::from(v) * 0.1).collect();
            let eps = f64::from(eps) * 0.1;
            let a = col(&values);
            let rows: Vec<usize> = (0..values.len()).collect();
            let mut grid = BucketGrid::new(&a, &[eps]);
            let expected = max_window_len(&a, &rows, 0, eps) >= min_len;
            prop_assert_eq!(grid.has_window(&a, &rows, 0, eps, min_len), expected);
            let half: Vec<usize> = rows.iter().copied().step_by(2).collect();
            let expected = max_window_len(&a, &half, 0, eps) >= min_len;
            prop_assert_eq!(grid.has_window(&a, &half, 0, eps, min_len), expected);
        }

        #[test]
        fn window_sweep_agrees_with_longest_window(
            cells in prop::collection::vec(0u8..40, 6..90),
            eps in 1u8..12,
            min_len in 1usize..8,
            needed in 1usize..4,
        ) {
            let m = 3;
            let n = cells.len() / m;
            let values: Vec<f64> = cells[..n * m].iter().map(|&v| f64::from(v) * 0.1).collect();
            let a = DataMatrix::new(n, m, values).unwrap();
            let eps = vec![f64::from(eps) * 0.1; m];
            let rows: Vec<usize> = (0..n).filter(|i| i % 3 != 1).collect();
            let (sorted, ranges) = window_ranges(&a, &rows, 0, eps[0], 0);
            let mut grid = BucketGrid::new(&a, &eps);
            let mut by_value = vec![Vec::new(); m];
            let got = grid.reaches_enough(&a, &sorted, &ranges, &[1, 2], &eps, min_len, needed, &mut by_value);
            for (range, got) in ranges.iter().zip(got) {
                let window = &sorted[range.clone()];
                let reached = [1, 2].iter().filter(|&&k| max_window_len(&a, window, k, eps[k]) >= min_len).count();
                prop_assert_eq!(got, window.len() >= min_len && reached >= needed);
            }
        }

        #[test]
        fn pair_test_finds_exactly_the_joint_windows(
            cells in prop::collection::vec(0u8..40, 2..60),
            eps in 1u8..12,
            min_len in 1usize..8,
        ) {
            let n = cells.len() / 2;
            let values: Vec<f64> = cells[..n * 2].iter().map(|&v| f64::from(v) * 0.1).collect();
            let a = DataMatrix::new(n, 2, values).unwrap();
            let eps = f64::from(eps) * 0.1;
            let rows: Vec<usize> = (0..n).collect();
            // The largest joint window has its lowest values on some pair of rows.
            let joint = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .map(|(x, y)| {
                    rows.iter()
                        .filter(|&&i| {
                            let (u, v) = (a.get(i, 0) - a.get(x, 0), a.get(i, 1) - a.get(y, 1));
                            (0.0..=eps).contains(&u) && (0.0..=eps).contains(&v)
                        })
                        .count()
                })
                .max()
                .unwrap_or(0);
            let mut grid = BucketGrid::new(&a, &[eps, eps]);
            let (sorted, ranges) = window_ranges(&a, &rows, 0, eps, min_len);
            let found = grid.any_window_reaches(&a, &sorted, &ranges, 1, eps, min_len, &mut Vec::new());
            prop_assert_eq!(found, joint >= min_len);
        }

        #[test]
        fn perfect_windows_partition(values in prop::collection::vec(0u8..4, 1..20)) {
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            let a = col(&values);
            let rows: Vec<usize> = (0..values.len()).collect();
            let mut all: Vec<usize> = windows(&a, &rows, 0.0).concat();
            all.sort_unstable();
            prop_assert_eq!(all, rows);
        }

        #[test]
        fn encoding_is_injective(a in prop::collection::btree_set(0usize..5000, 0..12),
                                 b in prop::collection::btree_set(0usize..5000, 0..12)) {
            let a: Vec<usize> = a.into_iter().collect();
            let b: Vec<usize> = b.into_iter().collect();
            prop_assert_eq!(a == b, encode_rowset(&a) == encode_rowset(&b));
        }

        // Whenever the extension rule fires, the candidate is also not
        // row-maximal over the columns up to j.
        #[test]
        fn extension_rule_implies_not_row_maximal(values in prop::collection::vec(0u8..3, 24), x in 4usize..6) {
            let a = DataMatrix::new(6, 4, values.into_iter().map(f64::from).collect()).unwrap();
            let eps = [1.0; 4];
            let parent = [0, 1, 2, 3];
            let g = [1, 2];
            let cols = [0, 1];
            let j = 2;
            if row_canonical_violation(&a, &g, &parent, &cols, j, &[x], &eps) == Some(RowCanonicalRule::Extension) {
                prop_assert!(!is_row_maximal(&a, &g, &[0, 1, 2], &[x], &eps));
            }
        }
    }
}

