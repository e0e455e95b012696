//! The incremental-closure search engine shared by the four miners.
//!
//! A node `(I, J)` is closed by scanning the attributes from its starting
//! column: a column whose span over `I` is within ε joins `J`, any other
//! column yields candidate row-sets that are filtered and queued. Only once
//! the closure is complete is the node reported and its queue drained, each
//! child inheriting the parent's final `J` plus its generating column.
//!
//! The recursion is driven by an explicit stack, so depth is bounded by
//! memory rather than the thread stack.

use std::collections::VecDeque;
use std::mem::size_of;
use std::ops::Range;
use std::time::{Duration, Instant};

use crate::bicluster::{Bicluster, BiclusterSet};
use crate::error::{Error, Result};
use crate::kernels::{self, RowCanonicalRule, SymbolTable, TableKind};
use crate::matrix::DataMatrix;
use crate::params::{Algorithm, MiningParams};

/// Receives biclusters as soon as their closure completes.
pub trait Sink {
    fn emit(&mut self, bicluster: Bicluster) -> Result<()>;

    /// Whether [`Sink::trace`] should be fed candidate events.
    fn wants_trace(&self) -> bool {
        false
    }

    fn trace(&mut self, _event: TraceEvent) {}
}

impl Sink for Vec<Bicluster> {
    fn emit(&mut self, bicluster: Bicluster) -> Result<()> {
        self.push(bicluster);
        Ok(())
    }
}

/// Counts biclusters and drops them.
#[derive(Debug, Default)]
pub struct CountingSink {
    pub count: usize,
}

impl Sink for CountingSink {
    fn emit(&mut self, _bicluster: Bicluster) -> Result<()> {
        self.count += 1;
        Ok(())
    }
}

/// Keeps every bicluster and every candidate decision.
#[derive(Debug, Default)]
pub struct TraceRecorder {
    pub biclusters: Vec<Bicluster>,
    pub events: Vec<TraceEvent>,
}

impl Sink for TraceRecorder {
    fn emit(&mut self, bicluster: Bicluster) -> Result<()> {
        self.biclusters.push(bicluster);
        Ok(())
    }

    fn wants_trace(&self) -> bool {
        true
    }

    fn trace(&mut self, event: TraceEvent) {
        self.events.push(event);
    }
}

/// One candidate row-set and what the filters made of it. Indices are
/// one-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub parent_rows: Vec<usize>,
    /// Parent column-set at the moment the candidate was tested.
    pub parent_cols: Vec<usize>,
    pub attr: usize,
    pub rows: Vec<usize>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Queued,
    TooSmall,
    NotCanonical,
    /// Neither the candidate nor any descendant can reach `min_col` columns.
    CannotReachMinCol,
    /// Blocked by the symbol table.
    AlreadySeen,
    NotRowMaximal,
    NotRowCanonical(RowCanonicalRule),
}

/// Resource caps; a run that hits one stops early and is flagged truncated.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Budget {
    pub max_time: Option<Duration>,
    pub max_aux_bytes: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MineOptions {
    /// Abandon nodes that can no longer reach `min_col` columns.
    pub prune_min_col: bool,
    pub table: TableKind,
    pub budget: Budget,
}

impl Default for MineOptions {
    fn default() -> Self {
        MineOptions {
            prune_min_col: true,
            table: TableKind::Hashed,
            budget: Budget::default(),
        }
    }
}

/// Counters of one mining run.
///
/// `peak_aux_bytes` is logical accounting: live queue entries (row-set and
/// row-check set), the node being closed, the column-sets of the open
/// frames and the symbol-table keys.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct MiningStats {
    pub n_biclusters: usize,
    pub nodes_closed: usize,
    pub nodes_pruned: usize,
    pub candidates: usize,
    pub queued: usize,
    pub peak_aux_bytes: usize,
    pub symbol_table_entries: usize,
    pub symbol_table_bytes: usize,
    pub truncated: bool,
}

pub fn mine(matrix: &DataMatrix, params: &MiningParams, algorithm: Algorithm) -> Result<BiclusterSet> {
    let mut out = Vec::new();
    mine_with(matrix, params, algorithm, &MineOptions::default(), &mut out)?;
    Ok(BiclusterSet::from_vec(out))
}

/// Formal concepts of a 0/1 matrix. ε is ignored.
pub fn mine_inclose2(matrix: &DataMatrix, params: &MiningParams) -> Result<BiclusterSet> {
    mine(matrix, params, Algorithm::InClose2)
}

/// Maximal perfect CVC biclusters. ε is ignored (taken as zero).
pub fn mine_cvcp(matrix: &DataMatrix, params: &MiningParams) -> Result<BiclusterSet> {
    mine(matrix, params, Algorithm::Cvcp)
}

pub fn mine_cvc(matrix: &DataMatrix, params: &MiningParams) -> Result<BiclusterSet> {
    mine(matrix, params, Algorithm::Cvc)
}

pub fn mine_cvc2(matrix: &DataMatrix, params: &MiningParams) -> Result<BiclusterSet> {
    mine(matrix, params, Algorithm::Cvc2)
}

/// Runs one miner, streaming biclusters into `sink`.
pub fn mine_with<S: Sink + ?Sized>(
    matrix: &DataMatrix,
    params: &MiningParams,
    algorithm: Algorithm,
    options: &MineOptions,
    sink: &mut S,
) -> Result<MiningStats> {
    params.validate(matrix)?;
    if algorithm == Algorithm::InClose2 && !matrix.is_binary() {
        return Err(Error::InputDomain(
            "inclose2 requires a matrix whose cells are all 0 or 1".into(),
        ));
    }
    let eps = match algorithm {
        Algorithm::InClose2 | Algorithm::Cvcp => vec![0.0; matrix.n_cols()],
        Algorithm::Cvc | Algorithm::Cvc2 => params.epsilon().to_vec(),
    };
    let table = (algorithm == Algorithm::Cvc).then(|| SymbolTable::new(options.table));
    let mut engine = Engine {
        matrix,
        eps,
        min_row: params.min_row(),
        min_col: params.min_col(),
        algorithm,
        prune: options.prune_min_col,
        budget: options.budget,
        table,
        grid: None,
        apart: Vec::new(),
        meter: Meter::default(),
        stats: MiningStats::default(),
    };
    if engine.prune && engine.min_row > 1 && matches!(algorithm, Algorithm::Cvc | Algorithm::Cvc2) {
        engine.grid = Some(kernels::BucketGrid::new(matrix, &engine.eps));
        engine.apart = vec![false; matrix.n_cols() * matrix.n_cols()];
    }
    engine.run(sink)?;
    let mut stats = engine.stats;
    stats.peak_aux_bytes = engine.meter.peak;
    if let Some(table) = &engine.table {
        stats.symbol_table_entries = table.len();
        stats.symbol_table_bytes = table.key_bytes();
    }
    Ok(stats)
}

const WORD: usize = size_of::<usize>();

/// Rows sorted by one column with their maximal windows, as
/// [`kernels::window_ranges`] gives them.
type Windows = (Vec<usize>, Vec<Range<usize>>);

struct Node {
    rows: Vec<usize>,
    cols: Vec<usize>,
    start: usize,
    gamma: Vec<usize>,
}

impl Node {
    fn bytes(&self) -> usize {
        size_of::<Node>() + WORD * (self.rows.len() + self.cols.len() + self.gamma.len())
    }
}

struct Child {
    rows: Vec<usize>,
    attr: usize,
    gamma: Vec<usize>,
}

impl Child {
    fn bytes(&self) -> usize {
        size_of::<Child>() + WORD * (self.rows.len() + self.gamma.len())
    }
}

/// A closed node whose children are still being explored.
struct Frame {
    cols: Vec<usize>,
    children: VecDeque<Child>,
}

impl Frame {
    fn bytes(cols: usize) -> usize {
        size_of::<Frame>() + WORD * cols
    }
}

#[derive(Default)]
struct Meter {
    current: usize,
    peak: usize,
}

impl Meter {
    fn add(&mut self, bytes: usize) {
        self.current += bytes;
        self.peak = self.peak.max(self.current);
    }

    fn release(&mut self, bytes: usize) {
        self.current -= bytes;
    }
}

struct Engine<'a> {
    matrix: &'a DataMatrix,
    eps: Vec<f64>,
    min_row: usize,
    min_col: usize,
    algorithm: Algorithm,
    prune: bool,
    budget: Budget,
    table: Option<SymbolTable>,
    grid: Option<kernels::BucketGrid>,
    /// `apart[j * m + k]`: no `min_row` rows of the node being closed stay
    /// consistent on `j` and `k` together.
    apart: Vec<bool>,
    meter: Meter,
    stats: MiningStats,
}

impl Engine<'_> {
    fn run<S: Sink + ?Sized>(&mut self, sink: &mut S) -> Result<()> {
        let started = Instant::now();
        let root = Node {
            rows: (0..self.matrix.n_rows()).collect(),
            cols: Vec::new(),
            start: 0,
            gamma: Vec::new(),
        };
        let mut stack: Vec<Frame> = Vec::new();
        stack.push(self.close(root, sink)?);
        while let Some(top) = stack.last_mut() {
            if self.over_budget(started) {
                self.stats.truncated = true;
                break;
            }
            match top.children.pop_front() {
                Some(child) => {
                    self.meter.release(child.bytes());
                    let mut cols = top.cols.clone();
                    let at = cols.partition_point(|&k| k < child.attr);
                    cols.insert(at, child.attr);
                    let node = Node {
                        rows: child.rows,
                        cols,
                        start: child.attr + 1,
                        gamma: child.gamma,
                    };
                    stack.push(self.close(node, sink)?);
                }
                None => {
                    let frame = stack.pop().expect("non-empty stack");
                    self.meter.release(Frame::bytes(frame.cols.len()));
                }
            }
        }
        Ok(())
    }

    /// A column can only ever join a node or one of its descendants if at
    /// least `min_row` of the node's rows are within ε on it. With `have`
    /// columns already held and `open` the columns still to be scanned,
    /// decides whether `min_col` is out of reach, stopping once the answer
    /// is known.
    fn cannot_reach_min_col(&mut self, rows: &[usize], have: usize, open: &[usize]) -> bool {
        if have >= self.min_col {
            return false;
        }
        let needed = self.min_col - have;
        if open.len() < needed {
            return true;
        }
        if self.min_row <= 1 {
            return false;
        }
        if rows.len() < self.min_row {
            return true;
        }
        let (mut found, mut left) = (0, open.len());
        for &k in open {
            left -= 1;
            if self.reaches(rows, k) {
                found += 1;
                if found >= needed {
                    return false;
                }
            } else if found + left < needed {
                return true;
            }
        }
        true
    }

    /// The columns of `cols` that can belong to a set of `needed` columns
    /// on which some `min_row` of `rows` stay consistent together. Every
    /// two columns of such a set must admit `min_row` rows jointly, so
    /// columns compatible with fewer than `needed - 1` others are dropped
    /// until none is left to drop. Pairs found incompatible are recorded in
    /// `apart`; `by_value` is the node's cache of rows sorted per column.
    fn jointly_reachable(
        &mut self,
        rows: &[usize],
        cols: &[usize],
        needed: usize,
        by_value: &mut [Vec<(f64, usize)>],
    ) -> Vec<usize> {
        let Some(grid) = self.grid.as_mut() else {
            return cols.to_vec();
        };
        if needed < 2 || cols.len() < needed {
            return cols.to_vec();
        }
        let (matrix, m) = (self.matrix, self.matrix.n_cols());
        let c = cols.len();
        let mut windows: Vec<Option<Windows>> = vec![None; c];
        // Pair outcomes are computed on demand: 0 unknown, 1 fits, 2 apart.
        let mut known = vec![0u8; c * c];
        let mut alive = vec![true; c];
        let mut left = c;
        loop {
            let mut dropped = false;
            for a in 0..c {
                if !alive[a] {
                    continue;
                }
                let mut degree = 0;
                for b in 0..c {
                    if degree + 1 >= needed {
                        break;
                    }
                    if b == a || !alive[b] {
                        continue;
                    }
                    if known[a * c + b] == 0 {
                        let (ka, kb) = (cols[a], cols[b]);
                        let (sorted, ranges) = windows[a].get_or_insert_with(|| {
                            kernels::window_ranges(matrix, rows, ka, self.eps[ka], self.min_row)
                        });
                        let fits = grid.any_window_reaches(
                            matrix,
                            sorted,
                            ranges,
                            kb,
                            self.eps[kb],
                            self.min_row,
                            &mut by_value[kb],
                        );
                        known[a * c + b] = if fits { 1 } else { 2 };
                        known[b * c + a] = known[a * c + b];
                        if !fits {
                            self.apart[cols[a] * m + cols[b]] = true;
                            self.apart[cols[b] * m + cols[a]] = true;
                        }
                    }
                    degree += usize::from(known[a * c + b] == 1);
                }
                if degree + 1 < needed {
                    alive[a] = false;
                    dropped = true;
                    left -= 1;
                    if left < needed {
                        return Vec::new();
                    }
                }
            }
            if !dropped {
                break;
            }
        }
        cols.iter().zip(alive).filter(|&(_, keep)| keep).map(|(&k, _)| k).collect()
    }

    /// Whether at least `min_row` of `rows` can stay consistent on column `k`.
    fn reaches(&mut self, rows: &[usize], k: usize) -> bool {
        match self.algorithm {
            Algorithm::InClose2 => rows.iter().filter(|&&i| self.matrix.get(i, k) == 1.0).count() >= self.min_row,
            _ => match self.grid.as_mut() {
                Some(grid) => grid.has_window(self.matrix, rows, k, self.eps[k], self.min_row),
                None => kernels::max_window_len(self.matrix, rows, k, self.eps[k]) >= self.min_row,
            },
        }
    }

    /// The columns after `j` outside the scope's column-set.
    fn open_after(&self, j: usize, in_cols: &[bool], reach: &[bool]) -> Vec<usize> {
        (j + 1..self.matrix.n_cols()).filter(|&k| !in_cols[k] && reach[k]).collect()
    }

    fn over_budget(&self, started: Instant) -> bool {
        self.budget
            .max_aux_bytes
            .is_some_and(|cap| self.meter.current > cap)
            || self
                .budget
                .max_time
                .is_some_and(|cap| started.elapsed() > cap)
    }

    /// Closes `node`, reports it, and returns its frame of queued children.
    fn close<S: Sink + ?Sized>(&mut self, node: Node, sink: &mut S) -> Result<Frame> {
        let matrix = self.matrix;
        let m = matrix.n_cols();
        let node_bytes = node.bytes();
        self.meter.add(node_bytes);
        self.stats.nodes_closed += 1;

        let Node {
            rows,
            mut cols,
            start,
            gamma,
        } = node;
        let mut in_cols = kernels::column_mask(m, &cols);
        let mut children = VecDeque::new();
        let mut pruned = false;

        // Columns no candidate of this node can reach are left out of the
        // candidate-level test.
        let mut reach = vec![true; m];
        let mut hopeless = false;
        let mut by_value = vec![Vec::new(); m];
        self.apart.fill(false);
        if self.prune && cols.len() < self.min_col {
            let open: Vec<usize> = (start..m).filter(|&k| !in_cols[k]).collect();
            if self.min_row > 1 && rows.len() >= self.min_row {
                for &k in &open {
                    reach[k] = self.reaches(&rows, k);
                }
                let needed = self.min_col - cols.len();
                let reachable: Vec<usize> = open.iter().copied().filter(|&k| reach[k]).collect();
                let kept = self.jointly_reachable(&rows, &reachable, needed, &mut by_value);
                for &k in &reachable {
                    reach[k] = false;
                }
                for &k in &kept {
                    reach[k] = true;
                }
                hopeless = kept.len() < needed;
            } else {
                hopeless = self.cannot_reach_min_col(&rows, cols.len(), &open);
            }
        }
        if hopeless {
            self.stats.nodes_pruned += 1;
            let frame_bytes = Frame::bytes(cols.len());
            self.meter.add(frame_bytes);
            self.meter.release(node_bytes);
            return Ok(Frame { cols, children });
        }
        let tracing = sink.wants_trace();

        for j in start..m {
            // Neither this node nor any candidate generated from here on can
            // reach min_col; children already queued still can.
            if self.prune && cols.len() + (m - j) < self.min_col {
                self.stats.nodes_pruned += 1;
                pruned = true;
                break;
            }
            if in_cols[j] {
                continue;
            }
            if self.algorithm == Algorithm::InClose2 {
                let g: Vec<usize> = rows
                    .iter()
                    .copied()
                    .filter(|&i| matrix.get(i, j) == 1.0)
                    .collect();
                if g.len() == rows.len() {
                    cols.push(j);
                    in_cols[j] = true;
                } else if g.len() >= self.min_row || (tracing && !g.is_empty()) {
                    let scope = Scope {
                        rows: &rows,
                        cols: &cols,
                        in_cols: &in_cols,
                        reach: &reach,
                        gamma: &gamma,
                    };
                    self.consider(g, j, &scope, None, &mut children, sink);
                }
            } else if matrix.within(&rows, j, self.eps[j]) {
                cols.push(j);
                in_cols[j] = true;
            } else {
                let scope = Scope {
                    rows: &rows,
                    cols: &cols,
                    in_cols: &in_cols,
                    reach: &reach,
                    gamma: &gamma,
                };
                let min_len = if tracing { 0 } else { self.min_row };
                let (sorted, ranges) = kernels::window_ranges(matrix, &rows, j, self.eps[j], min_len);
                let hopeless = self.window_reach(&sorted, &ranges, j, &scope, &mut by_value);
                for (range, hopeless) in ranges.into_iter().zip(hopeless) {
                    // Every filter rejects such a window; only a trace
                    // needs to know which one.
                    if hopeless == Some(true) && !tracing {
                        self.stats.candidates += 1;
                        continue;
                    }
                    let mut window = sorted[range].to_vec();
                    window.sort_unstable();
                    self.consider(window, j, &scope, hopeless, &mut children, sink);
                }
            }
        }

        cols.sort_unstable();
        if !pruned && rows.len() >= self.min_row && cols.len() >= self.min_col {
            self.stats.n_biclusters += 1;
            sink.emit(Bicluster::from_zero_based(&rows, &cols))?;
        }
        let frame_bytes = Frame::bytes(cols.len());
        self.meter.add(frame_bytes);
        self.meter.release(node_bytes);
        Ok(Frame { cols, children })
    }

    fn consider<S: Sink + ?Sized>(
        &mut self,
        g: Vec<usize>,
        j: usize,
        scope: &Scope<'_>,
        hopeless: Option<bool>,
        children: &mut VecDeque<Child>,
        sink: &mut S,
    ) {
        self.stats.candidates += 1;
        let verdict = self.judge(&g, j, scope, hopeless);
        if sink.wants_trace() {
            let mut parent_cols: Vec<usize> = scope.cols.iter().map(|k| k + 1).collect();
            parent_cols.sort_unstable();
            sink.trace(TraceEvent {
                parent_rows: scope.rows.iter().map(|i| i + 1).collect(),
                parent_cols,
                attr: j + 1,
                rows: g.iter().map(|i| i + 1).collect(),
                verdict,
            });
        }
        if verdict != Verdict::Queued {
            return;
        }
        let gamma = match self.algorithm {
            Algorithm::Cvc | Algorithm::Cvc2 => kernels::compute_rm(
                self.matrix,
                &g,
                j,
                scope.gamma,
                scope.rows,
                self.eps[j],
                self.min_row,
            ),
            Algorithm::InClose2 | Algorithm::Cvcp => Vec::new(),
        };
        let child = Child {
            rows: g,
            attr: j,
            gamma,
        };
        self.meter.add(child.bytes());
        self.stats.queued += 1;
        children.push_back(child);
    }

    /// Filters in order: size, symbol table, canonicity, row discipline.
    fn judge(&mut self, g: &[usize], j: usize, scope: &Scope<'_>, hopeless: Option<bool>) -> Verdict {
        if g.len() < self.min_row {
            return Verdict::TooSmall;
        }
        let matrix = self.matrix;
        match self.algorithm {
            Algorithm::InClose2 => {
                if !kernels::is_canonical_binary_masked(matrix, g, scope.in_cols, j) {
                    return Verdict::NotCanonical;
                }
                self.reach_verdict(g, j, scope, hopeless)
            }
            Algorithm::Cvcp => {
                if !kernels::is_canonical_masked(matrix, g, scope.in_cols, j, &self.eps) {
                    return Verdict::NotCanonical;
                }
                self.reach_verdict(g, j, scope, hopeless)
            }
            Algorithm::Cvc => {
                let table = self.table.as_mut().expect("cvc owns a symbol table");
                if table.contains(g) {
                    return Verdict::AlreadySeen;
                }
                if !kernels::is_canonical_masked(matrix, g, scope.in_cols, j, &self.eps) {
                    return Verdict::NotCanonical;
                }
                if self.reach_verdict(g, j, scope, hopeless) != Verdict::Queued {
                    return Verdict::CannotReachMinCol;
                }
                let table = self.table.as_mut().expect("cvc owns a symbol table");
                let mut h = scope.cols.to_vec();
                h.push(j);
                if !kernels::is_row_maximal(matrix, g, &h, scope.gamma, &self.eps) {
                    return Verdict::NotRowMaximal;
                }
                let before = table.key_bytes();
                table.check_insert(g);
                self.meter.add(table.key_bytes() - before);
                Verdict::Queued
            }
            Algorithm::Cvc2 => {
                if !kernels::is_canonical_masked(matrix, g, scope.in_cols, j, &self.eps) {
                    return Verdict::NotCanonical;
                }
                if self.reach_verdict(g, j, scope, hopeless) != Verdict::Queued {
                    return Verdict::CannotReachMinCol;
                }
                match kernels::row_canonical_violation(
                    matrix,
                    g,
                    scope.rows,
                    scope.cols,
                    j,
                    scope.gamma,
                    &self.eps,
                ) {
                    Some(rule) => Verdict::NotRowCanonical(rule),
                    None => Verdict::Queued,
                }
            }
        }
    }
}

impl Engine<'_> {
    /// The child `(g, cols ∪ {j})` can only gain columns after `j`.
    /// `hopeless` is the outcome of this test when already known.
    fn reach_verdict(&mut self, g: &[usize], j: usize, scope: &Scope<'_>, hopeless: Option<bool>) -> Verdict {
        let hopeless = self.prune
            && hopeless.unwrap_or_else(|| {
                self.cannot_reach_min_col(g, scope.cols.len() + 1, &self.open_after(j, scope.in_cols, scope.reach))
            });
        if hopeless {
            Verdict::CannotReachMinCol
        } else {
            Verdict::Queued
        }
    }

    /// The reachability test for every window of column `j`, swept
    /// across the windows in one pass per column when the grid allows.
    fn window_reach(
        &mut self,
        sorted: &[usize],
        ranges: &[Range<usize>],
        j: usize,
        scope: &Scope<'_>,
        by_value: &mut [Vec<(f64, usize)>],
    ) -> Vec<Option<bool>> {
        let have = scope.cols.len() + 1;
        let Some(grid) = self.grid.as_mut() else {
            return vec![None; ranges.len()];
        };
        if !self.prune || have >= self.min_col {
            return vec![None; ranges.len()];
        }
        let m = self.matrix.n_cols();
        // A window of `j` cannot reach a column the node's rows cannot
        // share with `j`.
        let open: Vec<usize> = (j + 1..m)
            .filter(|&k| !scope.in_cols[k] && scope.reach[k] && !self.apart[j * m + k])
            .collect();
        if have + open.len() < self.min_col {
            return vec![Some(true); ranges.len()];
        }
        grid.reaches_enough(self.matrix, sorted, ranges, &open, &self.eps, self.min_row, self.min_col - have, by_value)
            .into_iter()
            .map(|enough| Some(!enough))
            .collect()
    }
}

/// The node under closure, as seen by the candidate filters.
struct Scope<'s> {
    rows: &'s [usize],
    cols: &'s [usize],
    in_cols: &'s [bool],
    /// Columns the node's rows can reach with `min_row` of them.
    reach: &'s [bool],
    gamma: &'s [usize],
}
