//! Reading and writing matrices, bicluster sets and ground-truth files.
//!
//! Matrix files are CSV or TSV with an optional header row and an optional
//! row-label column. Bicluster files hold one record per bicluster with
//! one-based indices, either as JSON lines (`{"rows":[2,3],"cols":[1,2,3]}`)
//! or as CSV lines with semicolon-joined index lists (`2;3,1;2;3`).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bicluster::Bicluster;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::miners::Sink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    #[default]
    Csv,
    Tsv,
}

impl MatrixFormat {
    /// `.tsv` and `.tab` files are tab-separated, anything else is CSV.
    pub fn from_path(path: &Path) -> MatrixFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("tsv") || ext.eq_ignore_ascii_case("tab") => {
                MatrixFormat::Tsv
            }
            _ => MatrixFormat::Csv,
        }
    }

    fn delimiter(self) -> u8 {
        match self {
            MatrixFormat::Csv => b',',
            MatrixFormat::Tsv => b'\t',
        }
    }
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "tsv" => Ok(MatrixFormat::Tsv),
            other => Err(Error::InvalidParams(format!("unknown matrix format `{other}`"))),
        }
    }
}

/// How to treat the first row and first column of a matrix file. `None`
/// means detect: the first row is a header when every field after the first
/// is non-numeric, and the first column holds labels when every body row
/// starts with a non-numeric field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub format: MatrixFormat,
    pub header: Option<bool>,
    pub row_labels: Option<bool>,
}

impl LoadOptions {
    pub fn for_path(path: &Path) -> LoadOptions {
        LoadOptions {
            format: MatrixFormat::from_path(path),
            ..LoadOptions::default()
        }
    }
}

fn is_number(field: &str) -> bool {
    field.parse::<f64>().is_ok()
}

/// Loads a numeric matrix. Errors carry one-based coordinates within the
/// numeric body.
pub fn load_matrix(path: impl AsRef<Path>, options: LoadOptions) -> Result<DataMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_matrix(BufReader::new(file), path, options)
}

/// Parses matrix text already in memory, as [`load_matrix`] does.
pub fn parse_matrix(text: &str, options: LoadOptions) -> Result<DataMatrix> {
    read_matrix(text.as_bytes(), Path::new("<memory>"), options)
}

fn read_matrix<R: Read>(input: R, path: &Path, options: LoadOptions) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.format.delimiter())
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if !record.iter().all(str::is_empty) {
            records.push(record);
        }
    }
    parse_records(path, &records, options)
}

fn parse_records(path: &Path, records: &[csv::StringRecord], options: LoadOptions) -> Result<DataMatrix> {
    let load_err = |row: usize, col: usize, message: String| Error::Load {
        path: path.to_path_buf(),
        row,
        col,
        message,
    };
    let Some(first) = records.first() else {
        return Err(load_err(0, 0, "no data rows".into()));
    };
    let header = options.header.unwrap_or_else(|| {
        let skip = usize::from(first.len() > 1);
        first.iter().skip(skip).all(|f| !is_number(f))
    });
    let body = &records[usize::from(header)..];
    if body.is_empty() {
        return Err(load_err(0, 0, "no data rows after the header".into()));
    }
    let labelled = options
        .row_labels
        .unwrap_or_else(|| body.iter().all(|r| r.len() > 1 && !r.get(0).is_some_and(is_number)));
    let offset = usize::from(labelled);

    let width = body[0].len();
    if width <= offset {
        return Err(load_err(1, 1, "row has no numeric columns".into()));
    }
    let m = width - offset;
    let mut values = Vec::with_capacity(body.len() * m);
    let mut labels = Vec::new();
    for (r, record) in body.iter().enumerate() {
        if record.len() != width {
            return Err(load_err(
                r + 1,
                record.len().saturating_sub(offset).min(m) + 1,
                format!("expected {m} values, found {}", record.len().saturating_sub(offset)),
            ));
        }
        if labelled {
            labels.push(record[0].to_string());
        }
        for (c, field) in record.iter().skip(offset).enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| load_err(r + 1, c + 1, format!("`{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(load_err(r + 1, c + 1, format!("`{field}` is not finite")));
            }
            values.push(v);
        }
    }
    let mut matrix = DataMatrix::new(body.len(), m, values)?;
    if labelled {
        matrix = matrix.with_row_labels(labels)?;
    }
    if header {
        let names: Vec<String> = first.iter().map(str::to_string).collect();
        let names = if names.len() == m + offset {
            names[offset..].to_vec()
        } else if names.len() == m {
            names
        } else {
            return Err(load_err(
                0,
                0,
                format!("header has {} fields for {m} columns", names.len()),
            ));
        };
        matrix = matrix.with_col_labels(names)?;
    }
    Ok(matrix)
}

/// Writes a matrix so that [`load_matrix`] reads back identical values.
/// Labels, when present, go to a header row and a first column.
pub fn write_matrix(matrix: &DataMatrix, path: impl AsRef<Path>, format: MatrixFormat) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(BufWriter::new(file));
    let wrap = |e: csv::Error| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let row_labels = matrix.row_labels();
    if let Some(cols) = matrix.col_labels() {
        let mut header: Vec<&str> = Vec::with_capacity(cols.len() + 1);
        if row_labels.is_some() {
            header.push("");
        }
        header.extend(cols.iter().map(String::as_str));
        writer.write_record(&header).map_err(wrap)?;
    }
    let mut fields: Vec<String> = Vec::with_capacity(matrix.n_cols() + 1);
    for i in 0..matrix.n_rows() {
        fields.clear();
        if let Some(labels) = row_labels {
            fields.push(labels[i].clone());
        }
        fields.extend(matrix.row(i).iter().map(|v| v.to_string()));
        writer.write_record(&fields).map_err(wrap)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Transformations applied by [`preprocess`], in field order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessSpec {
    pub transpose: bool,
    pub log_transform: bool,
    /// Added to every value before the logarithm.
    pub shift_constant: f64,
    /// Min-max scale each column to `[0, 1]`.
    pub scale_columns: bool,
}

impl PreprocessSpec {
    /// Logarithm after a shift of `1e-100`, then per-column scaling: the
    /// preparation used for gene-expression data.
    pub fn expression() -> Self {
        PreprocessSpec {
            transpose: false,
            log_transform: true,
            shift_constant: 1e-100,
            scale_columns: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shift_constant.is_finite() && self.shift_constant >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "shift constant must be finite and non-negative, got {}",
                self.shift_constant
            )));
        }
        if self.shift_constant != 0.0 && !self.log_transform {
            return Err(Error::InvalidParams(
                "a shift constant is only applied together with the log transform".into(),
            ));
        }
        Ok(())
    }
}

/// Applies transpose, shift, natural log and column scaling, each if
/// enabled. A constant column scales to all zeros. Error coordinates are
/// one-based positions in the input matrix.
pub fn preprocess(matrix: &DataMatrix, spec: &PreprocessSpec) -> Result<DataMatrix> {
    spec.validate()?;
    let mut out = if spec.transpose {
        matrix.transpose()
    } else {
        matrix.clone()
    };
    if spec.log_transform {
        let transposed = spec.transpose;
        out = out.try_map(|i, j, v| {
            let shifted = v + spec.shift_constant;
            let (row, col) = if transposed { (j + 1, i + 1) } else { (i + 1, j + 1) };
            if shifted <= 0.0 {
                return Err(Error::Preprocess {
                    row,
                    col,
                    message: format!("cannot take the logarithm of {shifted}"),
                });
            }
            Ok(shifted.ln())
        })?;
    }
    if spec.scale_columns {
        let bounds: Vec<(f64, f64)> = (0..out.n_cols())
            .map(|j| {
                out.column(j)
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
            })
            .collect();
        out = out.try_map(|_, j, v| {
            let (lo, hi) = bounds[j];
            Ok(if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
        })?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiclusterFormat {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for BiclusterFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(BiclusterFormat::Jsonl),
            "csv" => Ok(BiclusterFormat::Csv),
            other => Err(Error::InvalidParams(format!("unknown bicluster format `{other}`"))),
        }
    }
}

impl BiclusterFormat {
    /// `.csv` files use the CSV layout, anything else JSON lines.
    pub fn from_path(path: &Path) -> BiclusterFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => BiclusterFormat::Csv,
            _ => BiclusterFormat::Jsonl,
        }
    }
}

fn join(indices: &[usize]) -> String {
    indices.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

/// Renders one bicluster record without a line terminator.
pub fn format_bicluster(b: &Bicluster, format: BiclusterFormat) -> String {
    match format {
        BiclusterFormat::Jsonl => format!("{{\"rows\":[{}],\"cols\":[{}]}}", csv_list(b.rows()), csv_list(b.cols())),
        BiclusterFormat::Csv => format!("{},{}", join(b.rows()), join(b.cols())),
    }
}

fn csv_list(indices: &[usize]) -> String {
    indices.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Parses one record written by [`format_bicluster`].
pub fn parse_bicluster(line: &str, format: BiclusterFormat) -> std::result::Result<Bicluster, String> {
    let (rows, cols) = match format {
        BiclusterFormat::Jsonl => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Record {
                rows: Vec<usize>,
                cols: Vec<usize>,
            }
            let r: Record = serde_json::from_str(line).map_err(|e| e.to_string())?;
            (r.rows, r.cols)
        }
        BiclusterFormat::Csv => {
            let (rows, cols) = line
                .split_once(',')
                .ok_or_else(|| "expected `rows,cols`".to_string())?;
            (split_indices(rows)?, split_indices(cols)?)
        }
    };
    Bicluster::new(rows, cols).map_err(|e| e.to_string())
}

fn split_indices(list: &str) -> std::result::Result<Vec<usize>, String> {
    list.trim()
        .split(';')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("`{s}` is not an index")))
        .collect()
}

/// Streams biclusters to a writer, one record per line. Usable as a
/// mining [`Sink`].
pub struct BiclusterWriter<W: Write> {
    out: W,
    format: BiclusterFormat,
    path: PathBuf,
    written: usize,
}

impl BiclusterWriter<BufWriter<File>> {
    pub fn create(path: impl AsRef<Path>, format: BiclusterFormat) -> Result<Self> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(BiclusterWriter::new(BufWriter::new(file), format, path))
    }
}

impl<W: Write> BiclusterWriter<W> {
    /// `path` only labels I/O errors.
    pub fn new(out: W, format: BiclusterFormat, path: impl Into<PathBuf>) -> Self {
        BiclusterWriter {
            out,
            format,
            path: path.into(),
            written: 0,
        }
    }

    pub fn write(&mut self, b: &Bicluster) -> Result<()> {
        writeln!(self.out, "{}", format_bicluster(b, self.format)).map_err(|e| Error::io(&self.path, e))?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> usize {
        self.written
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.out)
    }
}

impl<W: Write> Sink for BiclusterWriter<W> {
    fn emit(&mut self, bicluster: Bicluster) -> Result<()> {
        self.write(&bicluster)
    }
}

pub fn write_biclusters<'a, I>(biclusters: I, path: impl AsRef<Path>, format: BiclusterFormat) -> Result<()>
where
    I: IntoIterator<Item = &'a Bicluster>,
{
    let mut writer = BiclusterWriter::create(path, format)?;
    for b in biclusters {
        writer.write(b)?;
    }
    writer.finish().map(drop)
}

/// Reads a bicluster file in file order. Blank lines are skipped.
pub fn read_biclusters(path: impl AsRef<Path>, format: BiclusterFormat) -> Result<Vec<Bicluster>> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for_each_line(path, |lineno, line| {
        out.push(parse_bicluster(line, format).map_err(|m| line_error(path, lineno, m))?);
        Ok(())
    })?;
    Ok(out)
}

fn line_error(path: &Path, lineno: usize, message: String) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: format!("line {lineno}: {message}"),
    }
}

fn for_each_line<F>(path: &Path, mut f: F) -> Result<()>
where
    F: FnMut(usize, &str) -> Result<()>,
{
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if !line.is_empty() {
            f(idx + 1, line)?;
        }
    }
    Ok(())
}

/// Planted biclusters together with the ε at which they are correct.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub epsilon: f64,
    pub biclusters: Vec<Bicluster>,
}

/// Writes an `epsilon` record followed by the biclusters. The record is
/// `{"epsilon":0.21}` in JSON lines and `epsilon,0.21` in CSV.
pub fn write_truth(truth: &GroundTruth, path: impl AsRef<Path>, format: BiclusterFormat) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let header = match format {
        BiclusterFormat::Jsonl => format!("{{\"epsilon\":{}}}", truth.epsilon),
        BiclusterFormat::Csv => format!("epsilon,{}", truth.epsilon),
    };
    writeln!(out, "{header}").map_err(|e| Error::io(path, e))?;
    let mut writer = BiclusterWriter::new(out, format, path);
    for b in &truth.biclusters {
        writer.write(b)?;
    }
    writer.finish().map(drop)
}

pub fn read_truth(path: impl AsRef<Path>, format: BiclusterFormat) -> Result<GroundTruth> {
    let path = path.as_ref();
    let mut epsilon = None;
    let mut biclusters = Vec::new();
    for_each_line(path, |lineno, line| {
        if epsilon.is_none() {
            let value = match format {
                BiclusterFormat::Jsonl => {
                    #[derive(Deserialize)]
                    struct Header {
                        epsilon: f64,
                    }
                    serde_json::from_str::<Header>(line).ok().map(|h| h.epsilon)
                }
                BiclusterFormat::Csv => line
                    .strip_prefix("epsilon,")
                    .and_then(|v| v.trim().parse::<f64>().ok()),
            };
            let value = value.ok_or_else(|| line_error(path, lineno, "expected an epsilon record".into()))?;
            epsilon = Some(value);
            return Ok(());
        }
        biclusters.push(parse_bicluster(line, format).map_err(|m| line_error(path, lineno, m))?);
        Ok(())
    })?;
    let epsilon = epsilon.ok_or_else(|| line_error(path, 1, "missing epsilon record".into()))?;
    Ok(GroundTruth { epsilon, biclusters })
}

/// Reads per-column ε values separated by commas, tabs, spaces or newlines.
pub fn read_epsilon_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| Error::Format {
                path: path.to_path_buf(),
                message: format!("`{s}` is not a number"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(text: &str) -> Result<DataMatrix> {
        parse_matrix(text, LoadOptions::default())
    }

    #[test]
    fn plain_csv() {
        let a = csv("1,2\n3,4\n").unwrap();
        assert_eq!(a, DataMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
        assert!(a.row_labels().is_none() && a.col_labels().is_none());
    }

    #[test]
    fn tsv_with_header_and_labels() {
        let opts = LoadOptions {
            format: MatrixFormat::Tsv,
            ..LoadOptions::default()
        };
        let a = parse_matrix("id\ts1\ts2\ng1\t0.5\t1\ng2\t2\t-3e2\n", opts).unwrap();
        assert_eq!(a.row(1), &[2.0, -300.0]);
        assert_eq!(a.row_labels().unwrap(), ["g1", "g2"]);
        assert_eq!(a.col_labels().unwrap(), ["s1", "s2"]);
    }

    #[test]
    fn header_without_corner_field() {
        let a = csv("s1,s2\ng1,1,2\n").unwrap();
        assert_eq!(a.col_labels().unwrap(), ["s1", "s2"]);
        assert_eq!(a.row_labels().unwrap(), ["g1"]);
    }

    #[test]
    fn bad_cell_is_located() {
        let err = csv("1,2,3\n4,5,6\n7,abc,9\n").unwrap_err();
        match err {
            Error::Load { row, col, .. } => assert_eq!((row, col), (3, 2)),
            other => panic!("{other}"),
        }
        let msg = csv("1,2\n3,4\n5,abc\n").unwrap_err().to_string();
        assert!(msg.contains("row 3, column 2"), "{msg}");
    }

    #[test]
    fn ragged_and_non_finite_rows_fail() {
        assert!(matches!(csv("1,2\n3\n"), Err(Error::Load { row: 2, .. })));
        assert!(matches!(csv("1,2\n3,NaN\n"), Err(Error::Load { row: 2, col: 2, .. })));
        assert!(matches!(csv("1,inf\n"), Err(Error::Load { row: 1, col: 2, .. })));
        assert!(csv("").is_err());
    }

    #[test]
    fn explicit_flags_override_detection() {
        let opts = LoadOptions {
            header: Some(true),
            row_labels: Some(false),
            ..LoadOptions::default()
        };
        let a = parse_matrix("10,20\n1,2\n", opts).unwrap();
        assert_eq!(a.n_rows(), 1);
        assert_eq!(a.col_labels().unwrap(), ["10", "20"]);
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = DataMatrix::from_rows(&[[0.1, 1.0 / 3.0], [1e-300, -2.5]])
            .unwrap()
            .with_row_labels(vec!["a".into(), "b".into()])
            .unwrap()
            .with_col_labels(vec!["x".into(), "y".into()])
            .unwrap();
        for fmt in [MatrixFormat::Csv, MatrixFormat::Tsv] {
            let path = dir.path().join("m.txt");
            write_matrix(&a, &path, fmt).unwrap();
            let back = load_matrix(&path, LoadOptions { format: fmt, ..LoadOptions::default() }).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn scaling_maps_to_unit_interval() {
        let a = DataMatrix::from_columns(&[[2.0, 4.0, 6.0], [5.0, 5.0, 5.0]]).unwrap();
        let spec = PreprocessSpec {
            scale_columns: true,
            ..PreprocessSpec::default()
        };
        let s = preprocess(&a, &spec).unwrap();
        assert_eq!(s.column(0).collect::<Vec<_>>(), [0.0, 0.5, 1.0]);
        assert_eq!(s.column(1).collect::<Vec<_>>(), [0.0, 0.0, 0.0]);
        assert_eq!(preprocess(&s, &spec).unwrap(), s);
    }

    #[test]
    fn log_shift_keeps_zero_finite() {
        let a = DataMatrix::from_rows(&[[0.0, 1.0]]).unwrap();
        let spec = PreprocessSpec {
            log_transform: true,
            shift_constant: 1e-100,
            ..PreprocessSpec::default()
        };
        let out = preprocess(&a, &spec).unwrap();
        assert_eq!(out.get(0, 0), 1e-100f64.ln());
        assert_eq!(out.get(0, 1), 0.0);
    }

    #[test]
    fn log_of_non_positive_is_located() {
        let a = DataMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, -1.0]]).unwrap();
        let spec = PreprocessSpec {
            log_transform: true,
            ..PreprocessSpec::default()
        };
        assert!(matches!(preprocess(&a, &spec), Err(Error::Preprocess { row: 2, col: 3, .. })));
        let t = PreprocessSpec { transpose: true, ..spec };
        assert!(matches!(preprocess(&a, &t), Err(Error::Preprocess { row: 2, col: 3, .. })));
        let bad = PreprocessSpec {
            shift_constant: 1.0,
            ..PreprocessSpec::default()
        };
        assert!(preprocess(&a, &bad).is_err());
    }

    #[test]
    fn transpose_step() {
        let a = DataMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        let spec = PreprocessSpec {
            transpose: true,
            ..PreprocessSpec::default()
        };
        let t = preprocess(&a, &spec).unwrap();
        assert_eq!((t.n_rows(), t.n_cols()), (3, 2));
        assert_eq!(t.get(2, 1), a.get(1, 2));
    }

    #[test]
    fn record_formats() {
        let b = Bicluster::new(vec![2, 3], vec![1, 2, 3]).unwrap();
        assert_eq!(format_bicluster(&b, BiclusterFormat::Jsonl), r#"{"rows":[2,3],"cols":[1,2,3]}"#);
        assert_eq!(format_bicluster(&b, BiclusterFormat::Csv), "2;3,1;2;3");
        assert_eq!(serde_json::to_string(&b).unwrap(), format_bicluster(&b, BiclusterFormat::Jsonl));
        for fmt in [BiclusterFormat::Jsonl, BiclusterFormat::Csv] {
            assert_eq!(parse_bicluster(&format_bicluster(&b, fmt), fmt).unwrap(), b);
        }
        assert!(parse_bicluster(r#"{"rows":[3,2],"cols":[1]}"#, BiclusterFormat::Jsonl).is_err());
        assert!(parse_bicluster("0,1", BiclusterFormat::Csv).is_err());
        assert!(parse_bicluster("1;x,1", BiclusterFormat::Csv).is_err());
    }

    #[test]
    fn empty_set_is_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        write_biclusters(&[], &path, BiclusterFormat::Jsonl).unwrap();
        assert_eq!(std::fs::read(&path).unwrap().len(), 0);
        assert!(read_biclusters(&path, BiclusterFormat::Jsonl).unwrap().is_empty());
    }

    #[test]
    fn truth_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let truth = GroundTruth {
            epsilon: 0.1 + 0.2,
            biclusters: vec![Bicluster::new(vec![1, 4], vec![2]).unwrap()],
        };
        for fmt in [BiclusterFormat::Jsonl, BiclusterFormat::Csv] {
            let path = dir.path().join("truth");
            write_truth(&truth, &path, fmt).unwrap();
            assert_eq!(read_truth(&path, fmt).unwrap(), truth);
        }
    }

    #[test]
    fn epsilon_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("eps.txt");
        std::fs::write(&path, "0.1, 0.2\n0.3\n").unwrap();
        assert_eq!(read_epsilon_file(&path).unwrap(), [0.1, 0.2, 0.3]);
        std::fs::write(&path, "0.1 x").unwrap();
        assert!(read_epsilon_file(&path).is_err());
    }
}
