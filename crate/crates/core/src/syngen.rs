//! Synthetic matrices with planted, overlapping CVC biclusters.
//!
//! Background cells are uniform on `[0, 1]`. Planted biclusters are laid out
//! as a chain before shuffling: bicluster `k + 1` starts
//! `bic_rows - ⌊overlap · bic_rows⌋` rows after bicluster `k`, and likewise
//! for columns (columns wrap around modulo `m`, rows must fit). Each planted
//! bicluster holds one base value per column; a column it shares with an
//! earlier bicluster that also shares rows reuses that bicluster's base.
//! Gaussian noise is then added everywhere and rows and columns are shuffled.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bicluster::Bicluster;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::predicates::{is_correct_cvc, is_maximal};

/// Attempts before giving up on a layout whose planted biclusters keep
/// failing the post-generation check.
pub const MAX_RETRIES: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub n_biclusters: usize,
    pub bic_rows: usize,
    pub bic_cols: usize,
    pub overlap: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    /// Also require every planted bicluster to be maximal at the returned ε,
    /// regenerating otherwise.
    pub require_maximal: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n: 10_000,
            m: 100,
            n_biclusters: 30,
            bic_rows: 200,
            bic_cols: 16,
            overlap: 0.2,
            noise_sigma: 0.05,
            seed: 0,
            require_maximal: true,
        }
    }
}

impl GeneratorConfig {
    /// The defaults shrunk to 500 × 30 with five 40 × 8 biclusters.
    pub fn small() -> Self {
        GeneratorConfig {
            n: 500,
            m: 30,
            n_biclusters: 5,
            bic_rows: 40,
            bic_cols: 8,
            ..GeneratorConfig::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn shared_rows(&self) -> usize {
        (self.overlap * self.bic_rows as f64).floor() as usize
    }

    pub fn shared_cols(&self) -> usize {
        (self.overlap * self.bic_cols as f64).floor() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::Generator("n and m must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(Error::Generator(format!(
                "overlap must lie in [0, 1), got {}",
                self.overlap
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::Generator(format!(
                "noise_sigma must be a finite non-negative number, got {}",
                self.noise_sigma
            )));
        }
        if self.n_biclusters == 0 {
            return Ok(());
        }
        if self.bic_rows == 0 || self.bic_cols == 0 {
            return Err(Error::Generator("planted biclusters need at least one row and one column".into()));
        }
        if self.bic_rows > self.n || self.bic_cols > self.m {
            return Err(Error::Generator(format!(
                "planted shape {}x{} does not fit a {}x{} matrix",
                self.bic_rows, self.bic_cols, self.n, self.m
            )));
        }
        let needed = (self.n_biclusters - 1) * (self.bic_rows - self.shared_rows()) + self.bic_rows;
        if needed > self.n {
            return Err(Error::Generator(format!(
                "{} biclusters of {} rows with overlap {} need {needed} rows, but n = {}",
                self.n_biclusters, self.bic_rows, self.overlap, self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedDataset {
    pub matrix: DataMatrix,
    /// Planted biclusters in generation order, indices after shuffling.
    pub planted: Vec<Bicluster>,
    /// Largest column span found inside any planted bicluster.
    pub epsilon: f64,
}

/// Generates a dataset; deterministic in `config.seed`.
pub fn generate(config: &GeneratorConfig) -> Result<GeneratedDataset> {
    config.validate()?;
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(attempt);
        let data = draw(config, &mut rng)?;
        if passes_check(config, &data)? {
            return Ok(data);
        }
    }
    Err(Error::Generator(format!(
        "no layout passed the planted-bicluster check after {MAX_RETRIES} attempts; \
         reduce noise_sigma or the number of biclusters"
    )))
}

fn passes_check(config: &GeneratorConfig, data: &GeneratedDataset) -> Result<bool> {
    let eps = vec![data.epsilon; data.matrix.n_cols()];
    for b in &data.planted {
        if !is_correct_cvc(&data.matrix, b, &eps)? {
            return Ok(false);
        }
        if config.require_maximal && !is_maximal(&data.matrix, b, &eps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Layout {
    rows: Vec<usize>,
    cols: Vec<usize>,
    bases: Vec<f64>,
}

fn draw(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<GeneratedDataset> {
    let (n, m) = (config.n, config.m);
    let mut values: Vec<f64> = (0..n * m).map(|_| rng.random::<f64>()).collect();

    let row_step = config.bic_rows - config.shared_rows();
    let col_step = config.bic_cols - config.shared_cols();
    let separation = 4.0 * config.noise_sigma;
    let mut layouts: Vec<Layout> = Vec::with_capacity(config.n_biclusters);
    for k in 0..config.n_biclusters {
        let rows: Vec<usize> = (k * row_step..k * row_step + config.bic_rows).collect();
        let cols: Vec<usize> = (0..config.bic_cols).map(|t| (k * col_step + t) % m).collect();
        let bases = cols
            .iter()
            .map(|&c| {
                let inherited = layouts.iter().rev().find_map(|prev| {
                    let at = prev.cols.iter().position(|&pc| pc == c)?;
                    shares_rows(&prev.rows, &rows).then_some(prev.bases[at])
                });
                inherited.unwrap_or_else(|| {
                    let taken: Vec<f64> = layouts
                        .iter()
                        .filter_map(|p| p.cols.iter().position(|&pc| pc == c).map(|at| p.bases[at]))
                        .collect();
                    separated_base(rng, &taken, separation)
                })
            })
            .collect();
        layouts.push(Layout { rows, cols, bases });
    }
    for layout in &layouts {
        for &i in &layout.rows {
            for (&j, &base) in layout.cols.iter().zip(&layout.bases) {
                values[i * m + j] = base;
            }
        }
    }

    if config.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, config.noise_sigma)
            .map_err(|e| Error::Generator(e.to_string()))?;
        for v in &mut values {
            *v += normal.sample(rng);
        }
    }

    // new row r holds old row row_order[r]
    let mut row_order: Vec<usize> = (0..n).collect();
    let mut col_order: Vec<usize> = (0..m).collect();
    row_order.shuffle(rng);
    col_order.shuffle(rng);
    let mut shuffled = Vec::with_capacity(n * m);
    for &old_i in &row_order {
        for &old_j in &col_order {
            shuffled.push(values[old_i * m + old_j]);
        }
    }
    let matrix = DataMatrix::new(n, m, shuffled)?;

    let row_pos = inverse(&row_order);
    let col_pos = inverse(&col_order);
    let planted: Vec<Bicluster> = layouts
        .iter()
        .map(|l| {
            let rows: Vec<usize> = l.rows.iter().map(|&i| row_pos[i]).collect();
            let mut cols: Vec<usize> = l.cols.iter().map(|&j| col_pos[j]).collect();
            cols.sort_unstable();
            cols.dedup();
            Bicluster::from_zero_based(&rows, &cols)
        })
        .collect();
    let epsilon = planted
        .iter()
        .flat_map(|b| {
            let rows = b.rows0();
            let matrix = &matrix;
            b.cols0().into_iter().map(move |j| matrix.span(&rows, j))
        })
        .fold(0.0, f64::max);
    Ok(GeneratedDataset {
        matrix,
        planted,
        epsilon,
    })
}

fn shares_rows(a: &[usize], b: &[usize]) -> bool {
    // both are contiguous ascending ranges
    a.first() <= b.last() && b.first() <= a.last()
}

/// A uniform draw kept away from `taken` by more than `separation` when a
/// few tries allow it; otherwise the best-separated draw.
fn separated_base(rng: &mut ChaCha8Rng, taken: &[f64], separation: f64) -> f64 {
    let gap = |v: f64| taken.iter().map(|t| (t - v).abs()).fold(f64::INFINITY, f64::min);
    let mut best = rng.random::<f64>();
    for _ in 0..64 {
        if gap(best) > separation {
            break;
        }
        let v = rng.random::<f64>();
        if gap(v) > gap(best) {
            best = v;
        }
    }
    best
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    pos
}
