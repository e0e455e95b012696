//! Timing and memory instrumentation for parameter sweeps.
//!
//! Each run mines into a counting sink, so the measured wall time covers
//! the search and nothing else. Memory is the engine's logical accounting
//! of auxiliary structures (see [`MiningStats`]).

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dataio::{load_matrix, preprocess, LoadOptions, PreprocessSpec};
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::miners::{mine_with, Budget, CountingSink, MineOptions, MiningStats};
use crate::params::{Algorithm, MiningParams};
use crate::syngen::{generate, GeneratorConfig};

pub const PLOT_HEADER: [&str; 11] = [
    "algorithm",
    "dataset",
    "n",
    "m",
    "epsilon",
    "min_row",
    "min_col",
    "n_biclusters",
    "wall_ms",
    "peak_aux_bytes",
    "aggregate",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    Median,
    Mean,
}

impl Aggregate {
    pub fn name(self) -> &'static str {
        match self {
            Aggregate::Median => "median",
            Aggregate::Mean => "mean",
        }
    }

    fn apply(self, values: &mut [f64]) -> f64 {
        if values.is_empty() {
            return 0.0;
        }
        match self {
            Aggregate::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Aggregate::Median => {
                values.sort_by(f64::total_cmp);
                let mid = values.len() / 2;
                if values.len() % 2 == 1 {
                    values[mid]
                } else {
                    (values[mid - 1] + values[mid]) / 2.0
                }
            }
        }
    }
}

/// Aggregated measurements of one algorithm on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub algorithm: Algorithm,
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub min_row: usize,
    pub min_col: usize,
    pub n_biclusters: usize,
    pub wall_ms: f64,
    pub peak_aux_bytes: usize,
    pub symbol_table_bytes: usize,
    pub repeats: usize,
    pub aggregate: Aggregate,
    /// At least one repeat hit the budget.
    pub truncated: bool,
}

/// Where the matrices of a benchmark come from.
#[derive(Debug, Clone)]
pub enum BenchSource<'a> {
    /// The same matrix for every repeat.
    Matrix { id: String, matrix: &'a DataMatrix },
    /// A fresh dataset per repeat; repeat `r` uses seed `config.seed + r`.
    Generated { id: String, config: GeneratorConfig },
}

impl BenchSource<'_> {
    fn id(&self) -> &str {
        match self {
            BenchSource::Matrix { id, .. } | BenchSource::Generated { id, .. } => id,
        }
    }

    fn default_aggregate(&self) -> Aggregate {
        match self {
            BenchSource::Matrix { .. } => Aggregate::Mean,
            BenchSource::Generated { .. } => Aggregate::Median,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BenchParams {
    /// Uniform ε; `None` uses the ε returned by the generator.
    pub epsilon: Option<f64>,
    pub min_row: usize,
    pub min_col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSettings {
    pub repeats: usize,
    /// `None` picks the median for generated data and the mean otherwise.
    pub aggregate: Option<Aggregate>,
    pub budget: Budget,
    /// Run repeats on separate threads.
    pub parallel: bool,
}

impl Default for BenchSettings {
    fn default() -> Self {
        BenchSettings {
            repeats: 1,
            aggregate: None,
            budget: Budget::default(),
            parallel: false,
        }
    }
}

struct Run {
    n: usize,
    m: usize,
    epsilon: f64,
    wall_ms: f64,
    stats: MiningStats,
}

fn run_once(matrix: &DataMatrix, params: &MiningParams, algorithm: Algorithm, budget: Budget) -> Result<Run> {
    let options = MineOptions {
        budget,
        ..MineOptions::default()
    };
    let mut sink = CountingSink::default();
    let started = Instant::now();
    let stats = mine_with(matrix, params, algorithm, &options, &mut sink)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(Run {
        n: matrix.n_rows(),
        m: matrix.n_cols(),
        epsilon: params.max_epsilon(),
        wall_ms,
        stats,
    })
}

/// Runs every algorithm `settings.repeats` times and aggregates per
/// algorithm. Budget overruns mark the report truncated instead of failing.
pub fn run_benchmark(
    source: &BenchSource<'_>,
    params: &BenchParams,
    algorithms: &[Algorithm],
    settings: &BenchSettings,
) -> Result<Vec<BenchReport>> {
    if algorithms.is_empty() {
        return Err(Error::InvalidParams("no algorithms to benchmark".into()));
    }
    if settings.repeats == 0 {
        return Err(Error::InvalidParams("repeats must be at least 1".into()));
    }
    let repeat = |r: usize| -> Result<Vec<Run>> {
        let (owned, epsilon);
        let matrix = match source {
            BenchSource::Matrix { matrix, .. } => {
                epsilon = params.epsilon.ok_or_else(|| {
                    Error::InvalidParams("an explicit epsilon is needed for a fixed matrix".into())
                })?;
                *matrix
            }
            BenchSource::Generated { config, .. } => {
                let data = generate(&config.clone().with_seed(config.seed.wrapping_add(r as u64)))?;
                epsilon = params.epsilon.unwrap_or(data.epsilon);
                owned = data.matrix;
                &owned
            }
        };
        let mining = MiningParams::uniform(epsilon, matrix.n_cols(), params.min_row, params.min_col)?;
        algorithms
            .iter()
            .map(|&alg| run_once(matrix, &mining, alg, settings.budget))
            .collect()
    };
    let runs: Vec<Vec<Run>> = if settings.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..settings.repeats)
                .map(|r| scope.spawn(move || repeat(r)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("benchmark thread panicked"))
                .collect::<Result<_>>()
        })?
    } else {
        (0..settings.repeats).map(repeat).collect::<Result<_>>()?
    };

    let aggregate = settings.aggregate.unwrap_or_else(|| source.default_aggregate());
    let reports = algorithms
        .iter()
        .enumerate()
        .map(|(a, &algorithm)| {
            let mine: Vec<&Run> = runs.iter().map(|per_alg| &per_alg[a]).collect();
            let agg = |f: &dyn Fn(&Run) -> f64| {
                let mut values: Vec<f64> = mine.iter().map(|r| f(r)).collect();
                aggregate.apply(&mut values)
            };
            BenchReport {
                algorithm,
                dataset: source.id().to_string(),
                n: mine[0].n,
                m: mine[0].m,
                epsilon: agg(&|r| r.epsilon),
                min_row: params.min_row,
                min_col: params.min_col,
                n_biclusters: agg(&|r| r.stats.n_biclusters as f64).round() as usize,
                wall_ms: agg(&|r| r.wall_ms),
                peak_aux_bytes: agg(&|r| r.stats.peak_aux_bytes as f64).round() as usize,
                symbol_table_bytes: agg(&|r| r.stats.symbol_table_bytes as f64).round() as usize,
                repeats: settings.repeats,
                aggregate,
                truncated: mine.iter().any(|r| r.stats.truncated),
            }
        })
        .collect();
    Ok(reports)
}

/// Writes the plot CSV: a header line and one line per report.
pub fn emit_plot_data(reports: &[BenchReport], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    let wrap = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    writer.write_record(PLOT_HEADER).map_err(wrap)?;
    for r in reports {
        writer
            .write_record([
                r.algorithm.name().to_string(),
                r.dataset.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.epsilon.to_string(),
                r.min_row.to_string(),
                r.min_col.to_string(),
                r.n_biclusters.to_string(),
                format!("{:.3}", r.wall_ms),
                r.peak_aux_bytes.to_string(),
                r.aggregate.name().to_string(),
            ])
            .map_err(wrap)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// A generator field or mining parameter swept by a [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    N,
    M,
    NBiclusters,
    BicRows,
    BicCols,
    Overlap,
    NoiseSigma,
    Epsilon,
    MinRow,
    MinCol,
}

impl SweepParameter {
    fn name(self) -> &'static str {
        match self {
            SweepParameter::N => "n",
            SweepParameter::M => "m",
            SweepParameter::NBiclusters => "n_biclusters",
            SweepParameter::BicRows => "bic_rows",
            SweepParameter::BicCols => "bic_cols",
            SweepParameter::Overlap => "overlap",
            SweepParameter::NoiseSigma => "noise_sigma",
            SweepParameter::Epsilon => "epsilon",
            SweepParameter::MinRow => "min_row",
            SweepParameter::MinCol => "min_col",
        }
    }

    fn is_generator_field(self) -> bool {
        !matches!(
            self,
            SweepParameter::Epsilon | SweepParameter::MinRow | SweepParameter::MinCol
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vary {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepSource {
    Generator(GeneratorConfig),
    Matrix {
        path: PathBuf,
        #[serde(default)]
        preprocess: PreprocessSpec,
    },
}

/// A benchmark described in JSON, e.g.
///
/// ```json
/// {
///   "name": "overlap",
///   "source": {"generator": {"n": 500, "m": 30, "n_biclusters": 5,
///                            "bic_rows": 40, "bic_cols": 8}},
///   "algorithms": ["cvc", "cvc2"],
///   "min_row": 40, "min_col": 8,
///   "vary": {"parameter": "overlap", "values": [0, 0.1, 0.2, 0.3]},
///   "repeats": 5
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub source: SweepSource,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default = "one")]
    pub min_row: usize,
    #[serde(default = "one")]
    pub min_col: usize,
    #[serde(default)]
    pub vary: Option<Vary>,
    #[serde(default = "one")]
    pub repeats: usize,
    #[serde(default)]
    pub aggregate: Option<Aggregate>,
    #[serde(default)]
    pub max_time_ms: Option<u64>,
    #[serde(default)]
    pub max_aux_bytes: Option<usize>,
    #[serde(default)]
    pub parallel: bool,
}

fn one() -> usize {
    1
}

impl SweepSpec {
    pub fn from_file(path: impl AsRef<Path>) -> Result<SweepSpec> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Runs every sweep point. Relative matrix paths resolve against
    /// `base_dir`.
    pub fn run(&self, base_dir: &Path) -> Result<Vec<BenchReport>> {
        let settings = BenchSettings {
            repeats: self.repeats,
            aggregate: self.aggregate,
            budget: Budget {
                max_time: self.max_time_ms.map(Duration::from_millis),
                max_aux_bytes: self.max_aux_bytes,
            },
            parallel: self.parallel,
        };
        let base = BenchParams {
            epsilon: self.epsilon,
            min_row: self.min_row,
            min_col: self.min_col,
        };
        let loaded = match &self.source {
            SweepSource::Matrix { path, preprocess: spec } => {
                let path = base_dir.join(path);
                let matrix = load_matrix(&path, LoadOptions::for_path(&path))?;
                Some(preprocess(&matrix, spec)?)
            }
            SweepSource::Generator(_) => None,
        };
        let points: Vec<Option<f64>> = match &self.vary {
            Some(vary) => vary.values.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let mut reports = Vec::new();
        for value in points {
            let mut params = base;
            let mut id = self.name.clone();
            let mut config = match &self.source {
                SweepSource::Generator(c) => Some(c.clone()),
                SweepSource::Matrix { .. } => None,
            };
            if let (Some(vary), Some(v)) = (&self.vary, value) {
                id = format!("{}:{}={}", self.name, vary.parameter.name(), v);
                apply(vary.parameter, v, &mut params, config.as_mut())?;
            }
            let source = match (&config, &loaded) {
                (Some(config), _) => BenchSource::Generated {
                    id,
                    config: config.clone(),
                },
                (None, Some(matrix)) => BenchSource::Matrix { id, matrix },
                (None, None) => unreachable!("a sweep has a generator or a matrix"),
            };
            reports.extend(run_benchmark(&source, &params, &self.algorithms, &settings)?);
        }
        Ok(reports)
    }
}

fn apply(
    parameter: SweepParameter,
    value: f64,
    params: &mut BenchParams,
    config: Option<&mut GeneratorConfig>,
) -> Result<()> {
    let count = || -> Result<usize> {
        if value >= 0.0 && value.fract() == 0.0 {
            Ok(value as usize)
        } else {
            Err(Error::InvalidParams(format!(
                "{} takes whole numbers, got {value}",
                parameter.name()
            )))
        }
    };
    match parameter {
        SweepParameter::Epsilon => params.epsilon = Some(value),
        SweepParameter::MinRow => params.min_row = count()?,
        SweepParameter::MinCol => params.min_col = count()?,
        _ => {
            let Some(config) = config else {
                return Err(Error::InvalidParams(format!(
                    "{} can only be swept on generated data",
                    parameter.name()
                )));
            };
            debug_assert!(parameter.is_generator_field());
            match parameter {
                SweepParameter::N => config.n = count()?,
                SweepParameter::M => config.m = count()?,
                SweepParameter::NBiclusters => config.n_biclusters = count()?,
                SweepParameter::BicRows => config.bic_rows = count()?,
                SweepParameter::BicCols => config.bic_cols = count()?,
                SweepParameter::Overlap => config.overlap = value,
                SweepParameter::NoiseSigma => config.noise_sigma = value,
                _ => unreachable!(),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn median_and_mean() {
        assert_eq!(Aggregate::Median.apply(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(Aggregate::Median.apply(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(Aggregate::Mean.apply(&mut [1.0, 2.0, 6.0]), 3.0);
    }

    #[test]
    fn m2_reports_agree_on_counts() {
        let m2 = fixtures::m2();
        let source = BenchSource::Matrix {
            id: "m2".into(),
            matrix: &m2,
        };
        let params = BenchParams {
            epsilon: Some(1.0),
            min_row: 2,
            min_col: 1,
        };
        let reports = run_benchmark(&source, &params, &[Algorithm::Cvc, Algorithm::Cvc2], &BenchSettings::default()).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].n_biclusters, reports[1].n_biclusters);
        assert!(reports[0].symbol_table_bytes > 0);
        assert_eq!(reports[1].symbol_table_bytes, 0);
        assert_eq!(reports[0].aggregate, Aggregate::Mean);
    }

    #[test]
    fn generated_repeats_use_median() {
        let source = BenchSource::Generated {
            id: "small".into(),
            config: GeneratorConfig {
                n: 120,
                m: 12,
                n_biclusters: 2,
                bic_rows: 20,
                bic_cols: 4,
                ..GeneratorConfig::default()
            },
        };
        let params = BenchParams {
            epsilon: None,
            min_row: 20,
            min_col: 4,
        };
        let settings = BenchSettings {
            repeats: 3,
            parallel: true,
            ..BenchSettings::default()
        };
        let reports = run_benchmark(&source, &params, &[Algorithm::Cvc2], &settings).unwrap();
        assert_eq!(reports[0].aggregate, Aggregate::Median);
        assert_eq!(reports[0].repeats, 3);
        assert!(reports[0].n_biclusters >= 2);
    }

    #[test]
    fn tiny_budget_truncates_without_failing() {
        let m2 = fixtures::m2();
        let source = BenchSource::Matrix {
            id: "m2".into(),
            matrix: &m2,
        };
        let params = BenchParams {
            epsilon: Some(1.0),
            min_row: 1,
            min_col: 1,
        };
        let settings = BenchSettings {
            budget: Budget {
                max_time: None,
                max_aux_bytes: Some(1),
            },
            ..BenchSettings::default()
        };
        let reports = run_benchmark(&source, &params, &[Algorithm::Cvc], &settings).unwrap();
        assert!(reports[0].truncated);
    }

    #[test]
    fn plot_csv_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.csv");
        emit_plot_data(&[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), format!("{}\n", PLOT_HEADER.join(",")));
        let report = BenchReport {
            algorithm: Algorithm::Cvc2,
            dataset: "d".into(),
            n: 5,
            m: 3,
            epsilon: 1.0,
            min_row: 2,
            min_col: 1,
            n_biclusters: 4,
            wall_ms: 0.5,
            peak_aux_bytes: 100,
            symbol_table_bytes: 0,
            repeats: 1,
            aggregate: Aggregate::Mean,
            truncated: false,
        };
        emit_plot_data(&[report], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "cvc2,d,5,3,1,2,1,4,0.500,100,mean");
    }

    #[test]
    fn sweep_spec_parses_and_runs() {
        let spec: SweepSpec = serde_json::from_str(
            r#"{
                "name": "ov",
                "source": {"generator": {"n": 100, "m": 10, "n_biclusters": 2,
                                         "bic_rows": 20, "bic_cols": 4, "seed": 3}},
                "algorithms": ["cvc", "cvc2"],
                "min_row": 20, "min_col": 4,
                "vary": {"parameter": "overlap", "values": [0, 0.1, 0.2, 0.3]}
            }"#,
        )
        .unwrap();
        let reports = spec.run(Path::new(".")).unwrap();
        assert_eq!(reports.len(), 8);
        for pair in reports.chunks(2) {
            assert_eq!(pair[0].n_biclusters, pair[1].n_biclusters);
            assert_eq!(pair[0].dataset, pair[1].dataset);
        }
        assert_eq!(reports[2].dataset, "ov:overlap=0.1");
    }

    #[test]
    fn generator_fields_need_generated_data() {
        let mut params = BenchParams::default();
        assert!(apply(SweepParameter::Overlap, 0.1, &mut params, None).is_err());
        assert!(apply(SweepParameter::MinRow, 1.5, &mut params, None).is_err());
        apply(SweepParameter::Epsilon, 0.25, &mut params, None).unwrap();
        assert_eq!(params.epsilon, Some(0.25));
    }
}
