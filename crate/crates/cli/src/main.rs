use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use rinclose::bench::{emit_plot_data, SweepSpec};
use rinclose::dataio::{
    load_matrix, preprocess, read_biclusters, read_epsilon_file, write_matrix, write_truth, BiclusterFormat,
    BiclusterWriter, GroundTruth, LoadOptions, MatrixFormat, PreprocessSpec,
};
use rinclose::miners::Budget;
use rinclose::oracle::{oracle_cvc, oracle_formal_concepts};
use rinclose::syngen::{generate, GeneratorConfig};
use rinclose::verify::{check_concepts, check_solution, compare_sets};
use rinclose::{mine_with, Algorithm, BiclusterSet, DataMatrix, Error, MineOptions, MiningParams};

/// Enumerate maximal biclusters with constant values on columns.
#[derive(Debug, Parser)]
#[command(name = "rinclose", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine every maximal bicluster of a matrix.
    Mine(MineArgs),
    /// Write a synthetic matrix with planted biclusters.
    Generate(GenerateArgs),
    /// Enumerate by brute force (small matrices only).
    Oracle(OracleArgs),
    /// Check a solution for correctness, maximality, size and duplicates.
    Verify(VerifyArgs),
    /// Run a benchmark sweep described in JSON.
    Bench(BenchArgs),
    /// Transform a matrix and write it back out.
    Preprocess(PreprocessArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Inclose2,
    Cvcp,
    Cvc,
    Cvc2,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Inclose2 => Algorithm::InClose2,
            AlgorithmArg::Cvcp => Algorithm::Cvcp,
            AlgorithmArg::Cvc => Algorithm::Cvc,
            AlgorithmArg::Cvc2 => Algorithm::Cvc2,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SetFormat {
    Jsonl,
    Csv,
}

impl From<SetFormat> for BiclusterFormat {
    fn from(f: SetFormat) -> Self {
        match f {
            SetFormat::Jsonl => BiclusterFormat::Jsonl,
            SetFormat::Csv => BiclusterFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Tsv,
}

impl From<TableFormat> for MatrixFormat {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => MatrixFormat::Csv,
            TableFormat::Tsv => MatrixFormat::Tsv,
        }
    }
}

#[derive(Debug, Args)]
struct MatrixInput {
    /// Matrix file, CSV or TSV.
    #[arg(long)]
    input: PathBuf,
    /// Overrides the format guessed from the file extension.
    #[arg(long, value_enum)]
    input_format: Option<TableFormat>,
    #[command(flatten)]
    transform: Transform,
}

#[derive(Debug, Args)]
struct Transform {
    /// Swap rows and columns before anything else.
    #[arg(long)]
    transpose: bool,
    /// Take the natural logarithm of every value.
    #[arg(long)]
    log: bool,
    /// Add this constant before the logarithm.
    #[arg(long, requires = "log")]
    shift: Option<f64>,
    /// Min-max scale every column to [0, 1].
    #[arg(long)]
    scale: bool,
}

impl Transform {
    fn spec(&self) -> PreprocessSpec {
        PreprocessSpec {
            transpose: self.transpose,
            log_transform: self.log,
            shift_constant: self.shift.unwrap_or(0.0),
            scale_columns: self.scale,
        }
    }
}

impl MatrixInput {
    fn load(&self) -> Result<DataMatrix, Error> {
        let mut options = LoadOptions::for_path(&self.input);
        if let Some(format) = self.input_format {
            options.format = format.into();
        }
        let matrix = load_matrix(&self.input, options)?;
        let spec = self.transform.spec();
        spec.validate()?;
        if spec == PreprocessSpec::default() {
            Ok(matrix)
        } else {
            preprocess(&matrix, &spec)
        }
    }
}

#[derive(Debug, Args)]
struct Thresholds {
    /// Uniform maximum perturbation.
    #[arg(long, conflicts_with = "epsilon_file")]
    epsilon: Option<f64>,
    /// One ε per column.
    #[arg(long)]
    epsilon_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    min_row: usize,
    #[arg(long, default_value_t = 1)]
    min_col: usize,
}

impl Thresholds {
    /// ε may be left out only when `optional` says it is ignored anyway.
    fn params(&self, matrix: &DataMatrix, optional: bool) -> Result<MiningParams, Error> {
        match (self.epsilon, &self.epsilon_file) {
            (Some(eps), _) => MiningParams::uniform(eps, matrix.n_cols(), self.min_row, self.min_col),
            (None, Some(path)) => MiningParams::per_column(read_epsilon_file(path)?, self.min_row, self.min_col),
            (None, None) if optional => MiningParams::uniform(0.0, matrix.n_cols(), self.min_row, self.min_col),
            (None, None) => Err(Error::InvalidParams("--epsilon or --epsilon-file is required".into())),
        }
    }
}

#[derive(Debug, Args)]
struct SetOutput {
    /// Where to write the biclusters; standard output when left out.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Defaults to the output's extension, else JSON lines.
    #[arg(long, value_enum)]
    format: Option<SetFormat>,
}

impl SetOutput {
    fn format(&self) -> BiclusterFormat {
        match (self.format, &self.output) {
            (Some(f), _) => f.into(),
            (None, Some(path)) => BiclusterFormat::from_path(path),
            (None, None) => BiclusterFormat::Jsonl,
        }
    }

    fn writer(&self) -> Result<BiclusterWriter<Box<dyn Write>>, Error> {
        let format = self.format();
        Ok(match &self.output {
            Some(path) => {
                let file = std::fs::File::create(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                BiclusterWriter::new(Box::new(io::BufWriter::new(file)), format, path)
            }
            None => BiclusterWriter::new(Box::new(io::BufWriter::new(io::stdout().lock())), format, "<stdout>"),
        })
    }
}

#[derive(Debug, Args)]
struct MineArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    thresholds: Thresholds,
    #[command(flatten)]
    output: SetOutput,
    /// Stop after this many milliseconds.
    #[arg(long)]
    max_time_ms: Option<u64>,
    /// Stop once the auxiliary structures exceed this many bytes.
    #[arg(long)]
    max_aux_bytes: Option<usize>,
    /// Print the run's counters as JSON to standard error.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// Which miner's output to reproduce.
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    thresholds: Thresholds,
    #[command(flatten)]
    output: SetOutput,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: MatrixInput,
    /// The biclusters to check.
    #[arg(long)]
    solution: PathBuf,
    /// Format of the solution and of `--against`; guessed from extensions
    /// when left out.
    #[arg(long, value_enum)]
    format: Option<SetFormat>,
    #[command(flatten)]
    thresholds: Thresholds,
    /// A second solution to compare against.
    #[arg(long)]
    against: Option<PathBuf>,
    /// Certify formal concepts of a 0/1 matrix instead.
    #[arg(long)]
    concepts: bool,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = GeneratorConfig::default().n)]
    n: usize,
    #[arg(long, default_value_t = GeneratorConfig::default().m)]
    m: usize,
    #[arg(long, default_value_t = GeneratorConfig::default().n_biclusters)]
    n_biclusters: usize,
    #[arg(long, default_value_t = GeneratorConfig::default().bic_rows)]
    bic_rows: usize,
    #[arg(long, default_value_t = GeneratorConfig::default().bic_cols)]
    bic_cols: usize,
    #[arg(long, default_value_t = GeneratorConfig::default().overlap)]
    overlap: f64,
    #[arg(long, default_value_t = GeneratorConfig::default().noise_sigma)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accept planted biclusters that are correct but not maximal.
    #[arg(long)]
    allow_non_maximal: bool,
    #[arg(long)]
    out_matrix: PathBuf,
    #[arg(long)]
    out_truth: PathBuf,
    #[arg(long, value_enum)]
    matrix_format: Option<TableFormat>,
    #[arg(long, value_enum)]
    truth_format: Option<SetFormat>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Sweep description; relative matrix paths resolve against its folder.
    #[arg(long)]
    spec: PathBuf,
    /// Overrides the repeat count of the description.
    #[arg(long)]
    repeats: Option<usize>,
    /// Plot data (tab-separated) goes here.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PreprocessArgs {
    #[command(flatten)]
    input: MatrixInput,
    #[arg(long)]
    output: PathBuf,
    /// Defaults to the output's extension.
    #[arg(long, value_enum)]
    output_format: Option<TableFormat>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Mine(args) => mine(args),
        Command::Generate(args) => generate_cmd(args),
        Command::Oracle(args) => oracle(args),
        Command::Verify(args) => verify(args),
        Command::Bench(args) => bench(args),
        Command::Preprocess(args) => preprocess_cmd(args),
    }
}

fn ignores_epsilon(algorithm: Algorithm) -> bool {
    matches!(algorithm, Algorithm::InClose2 | Algorithm::Cvcp)
}

fn mine(args: MineArgs) -> Result<ExitCode, Error> {
    let matrix = args.input.load()?;
    let algorithm = Algorithm::from(args.algorithm);
    let params = args.thresholds.params(&matrix, ignores_epsilon(algorithm))?;
    let options = MineOptions {
        budget: Budget {
            max_time: args.max_time_ms.map(Duration::from_millis),
            max_aux_bytes: args.max_aux_bytes,
        },
        ..MineOptions::default()
    };
    let mut writer = args.output.writer()?;
    let started = Instant::now();
    let stats = mine_with(&matrix, &params, algorithm, &options, &mut writer)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    writer.finish()?;
    if args.stats {
        let mut report = serde_json::to_value(&stats).expect("stats serialize");
        report["algorithm"] = algorithm.name().into();
        report["wall_ms"] = wall_ms.into();
        eprintln!("{report}");
    }
    if stats.truncated {
        eprintln!("warning: budget exhausted, the output is incomplete");
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: OracleArgs) -> Result<ExitCode, Error> {
    let matrix = args.input.load()?;
    let algorithm = Algorithm::from(args.algorithm);
    let params = args.thresholds.params(&matrix, ignores_epsilon(algorithm))?;
    let set = match algorithm {
        Algorithm::InClose2 => {
            if !matrix.is_binary() {
                return Err(Error::InputDomain(
                    "formal concepts need a matrix whose cells are all 0 or 1".into(),
                ));
            }
            oracle_formal_concepts(&matrix, &params)?
        }
        Algorithm::Cvcp => oracle_cvc(&matrix, &params.perfect())?,
        Algorithm::Cvc | Algorithm::Cvc2 => oracle_cvc(&matrix, &params)?,
    };
    let mut writer = args.output.writer()?;
    for b in &set {
        writer.write(b)?;
    }
    writer.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn read_set(path: &Path, format: Option<SetFormat>) -> Result<BiclusterSet, Error> {
    let format = format.map_or_else(|| BiclusterFormat::from_path(path), BiclusterFormat::from);
    Ok(BiclusterSet::from_vec(read_biclusters(path, format)?))
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let matrix = args.input.load()?;
    let params = args.thresholds.params(&matrix, args.concepts)?;
    let solution = read_set(&args.solution, args.format)?;
    let report = if args.concepts {
        check_concepts(&matrix, &solution, &params)?
    } else {
        check_solution(&matrix, &solution, &params)?
    };
    let mut clean = report.is_clean();
    let mut out = serde_json::json!({ "report": report });
    if let Some(path) = &args.against {
        let other = read_set(path, args.format)?;
        let diff = compare_sets(&solution, &other);
        clean &= diff.is_empty();
        out["diff"] = serde_json::to_value(&diff).expect("diff serializes");
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn generate_cmd(args: GenerateArgs) -> Result<ExitCode, Error> {
    let config = GeneratorConfig {
        n: args.n,
        m: args.m,
        n_biclusters: args.n_biclusters,
        bic_rows: args.bic_rows,
        bic_cols: args.bic_cols,
        overlap: args.overlap,
        noise_sigma: args.noise_sigma,
        seed: args.seed,
        require_maximal: !args.allow_non_maximal,
    };
    let data = generate(&config)?;
    let matrix_format = args
        .matrix_format
        .map_or_else(|| MatrixFormat::from_path(&args.out_matrix), MatrixFormat::from);
    write_matrix(&data.matrix, &args.out_matrix, matrix_format)?;
    let truth_format = args
        .truth_format
        .map_or_else(|| BiclusterFormat::from_path(&args.out_truth), BiclusterFormat::from);
    let truth = GroundTruth {
        epsilon: data.epsilon,
        biclusters: data.planted,
    };
    write_truth(&truth, &args.out_truth, truth_format)?;
    eprintln!("planted {} biclusters, epsilon {}", truth.biclusters.len(), truth.epsilon);
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let mut spec = SweepSpec::from_file(&args.spec)?;
    if let Some(repeats) = args.repeats {
        spec.repeats = repeats;
    }
    let base = args.spec.parent().unwrap_or(Path::new("."));
    let reports = spec.run(base)?;
    emit_plot_data(&reports, &args.out)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for report in &reports {
        let line = serde_json::to_string(report).expect("reports serialize");
        writeln!(out, "{line}").map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        })?;
    }
    Ok(ExitCode::SUCCESS)
}

fn preprocess_cmd(args: PreprocessArgs) -> Result<ExitCode, Error> {
    let matrix = args.input.load()?;
    let format = args
        .output_format
        .map_or_else(|| MatrixFormat::from_path(&args.output), MatrixFormat::from);
    write_matrix(&matrix, &args.output, format)?;
    Ok(ExitCode::SUCCESS)
}
