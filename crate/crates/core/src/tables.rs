//! Sample-count and shift tables, with golden-file comparison.

use std::fmt::{self, Display};

use crate::bernoulli::required_samples;
use crate::cnh::delta_cnh;
use crate::error::{Error, Result};
use crate::stats::Probability;

const NSAMPLES_GOLDEN: &str = include_str!("../data/nsamples_table.csv");
const SHIFT_GOLDEN: &str = include_str!("../data/shift_table.csv");

const STANDARD_LEVELS: [f64; 9] = [0.66, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99, 0.995, 0.999];

const STANDARD_SHIFT_COLUMNS: [(f64, f64); 19] = [
    (0.66, 0.66),
    (0.66, 0.75),
    (0.75, 0.66),
    (0.75, 0.75),
    (0.75, 0.9),
    (0.9, 0.75),
    (0.9, 0.9),
    (0.9, 0.95),
    (0.95, 0.9),
    (0.95, 0.95),
    (0.95, 0.99),
    (0.99, 0.95),
    (0.99, 0.99),
    (0.99, 0.995),
    (0.995, 0.99),
    (0.995, 0.995),
    (0.995, 0.999),
    (0.999, 0.995),
    (0.999, 0.999),
];

const STANDARD_SAMPLE_SIZES: [usize; 36] = [
    3, 4, 5, 6, 8, 9, 10, 12, 14, 15, 20, 22, 25, 29, 30, 40, 45, 50, 59, 75, 90, 100, 200, 299, 300, 459, 500, 528,
    750, 919, 1000, 1058, 1379, 5296, 6905, 10000,
];

fn probabilities(values: &[f64]) -> Result<Vec<Probability>> {
    values.iter().map(|&v| Probability::new(v)).collect()
}

fn check_ascending<T: PartialOrd + Copy>(what: &str, values: &[T]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain(format!("{what} must not be empty")));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain(format!("{what} must be strictly ascending")));
    }
    Ok(())
}

/// Rows are confidence levels 1 - α, columns are target probabilities p.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCountSpec {
    probabilities: Vec<Probability>,
    confidences: Vec<Probability>,
}

impl SampleCountSpec {
    pub fn new(probabilities: Vec<Probability>, confidences: Vec<Probability>) -> Result<Self> {
        check_ascending("probabilities", &probabilities)?;
        check_ascending("confidences", &confidences)?;
        Ok(SampleCountSpec { probabilities, confidences })
    }

    /// The 9 x 9 layout of the published table.
    pub fn standard() -> Self {
        let levels = probabilities(&STANDARD_LEVELS).expect("valid levels");
        SampleCountSpec { probabilities: levels.clone(), confidences: levels }
    }

    pub fn probabilities(&self) -> &[Probability] {
        &self.probabilities
    }

    pub fn confidences(&self) -> &[Probability] {
        &self.confidences
    }
}

/// Rows are sample sizes, columns are (p, 1 - α) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSpec {
    sample_sizes: Vec<usize>,
    columns: Vec<(Probability, Probability)>,
}

impl ShiftSpec {
    pub fn new(sample_sizes: Vec<usize>, columns: Vec<(Probability, Probability)>) -> Result<Self> {
        check_ascending("sample_sizes", &sample_sizes)?;
        if sample_sizes[0] < 2 {
            return Err(Error::domain("sample sizes must be at least 2"));
        }
        check_ascending("columns", &columns)?;
        Ok(ShiftSpec { sample_sizes, columns })
    }

    /// The 36 x 19 layout of the published table.
    pub fn standard() -> Self {
        let columns = STANDARD_SHIFT_COLUMNS
            .iter()
            .map(|&(p, c)| (Probability::new(p).expect("valid p"), Probability::new(c).expect("valid confidence")))
            .collect();
        ShiftSpec { sample_sizes: STANDARD_SAMPLE_SIZES.to_vec(), columns }
    }

    pub fn sample_sizes(&self) -> &[usize] {
        &self.sample_sizes
    }

    pub fn columns(&self) -> &[(Probability, Probability)] {
        &self.columns
    }
}

/// A labelled grid of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    pub corner: String,
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    pub cells: Vec<Vec<T>>,
}

impl<T: Copy> Table<T> {
    pub fn cell(&self, row: &str, column: &str) -> Option<T> {
        let r = self.row_labels.iter().position(|l| l == row)?;
        let c = self.column_labels.iter().position(|l| l == column)?;
        Some(self.cells[r][c])
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        self.cells.iter().map(|row| row[c]).collect()
    }
}

/// Cell formatting shared by the CSV and text renderers.
pub trait CellFormat {
    fn format_cell(&self) -> String;
}

impl CellFormat for u64 {
    fn format_cell(&self) -> String {
        self.to_string()
    }
}

impl CellFormat for f64 {
    fn format_cell(&self) -> String {
        format!("{self:.3}")
    }
}

impl<T: CellFormat> Table<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.corner);
        for label in &self.column_labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.cells) {
            out.push_str(label);
            for cell in row {
                out.push(',');
                out.push_str(&cell.format_cell());
            }
            out.push('\n');
        }
        out
    }

    /// Right-aligned columns separated by two spaces.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<Vec<String>> = Vec::with_capacity(self.cells.len() + 1);
        rows.push(std::iter::once(self.corner.clone()).chain(self.column_labels.iter().cloned()).collect());
        for (label, row) in self.row_labels.iter().zip(&self.cells) {
            rows.push(std::iter::once(label.clone()).chain(row.iter().map(CellFormat::format_cell)).collect());
        }
        let ncols = rows[0].len();
        let widths: Vec<usize> =
            (0..ncols).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn level_label(p: Probability) -> String {
    p.value().to_string()
}

fn shift_column_label(p: Probability, confidence: Probability) -> String {
    format!("p{}/c{}", level_label(p), level_label(confidence))
}

/// Rounds up to 3 decimals, as the published shift table does.
pub fn round_shift(x: f64) -> f64 {
    (x * 1000.0).ceil() / 1000.0
}

pub fn nsamples_table(spec: &SampleCountSpec) -> Table<u64> {
    let cells = spec
        .confidences
        .iter()
        .map(|c| spec.probabilities.iter().map(|&p| required_samples(p, c.complement())).collect())
        .collect();
    Table {
        corner: "confidence".to_string(),
        row_labels: spec.confidences.iter().map(|&c| level_label(c)).collect(),
        column_labels: spec.probabilities.iter().map(|&p| level_label(p)).collect(),
        cells,
    }
}

pub fn shift_table(spec: &ShiftSpec) -> Result<Table<f64>> {
    let mut cells = Vec::with_capacity(spec.sample_sizes.len());
    for &n in &spec.sample_sizes {
        let row = spec
            .columns
            .iter()
            .map(|&(p, c)| delta_cnh(n, p, c.complement()).map(round_shift))
            .collect::<Result<Vec<f64>>>()?;
        cells.push(row);
    }
    Ok(Table {
        corner: "n".to_string(),
        row_labels: spec.sample_sizes.iter().map(|n| n.to_string()).collect(),
        column_labels: spec.columns.iter().map(|&(p, c)| shift_column_label(p, c)).collect(),
        cells,
    })
}

fn parse_csv<T: std::str::FromStr>(text: &str) -> Result<Table<T>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse { line: 1, message: "empty table".into() })?;
    let mut header = header.split(',').map(|s| s.trim().to_string());
    let corner = header.next().unwrap_or_default();
    let column_labels: Vec<String> = header.collect();
    let mut row_labels = Vec::new();
    let mut cells = Vec::new();
    for (i, line) in lines {
        let mut fields = line.split(',').map(str::trim);
        row_labels.push(fields.next().unwrap_or_default().to_string());
        let row = fields
            .map(|f| f.parse::<T>().map_err(|_| Error::Parse { line: i + 1, message: format!("bad cell {f:?}") }))
            .collect::<Result<Vec<T>>>()?;
        if row.len() != column_labels.len() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected {} cells, got {}", column_labels.len(), row.len()),
            });
        }
        cells.push(row);
    }
    Ok(Table { corner, row_labels, column_labels, cells })
}

pub fn golden_nsamples() -> Table<u64> {
    parse_csv(NSAMPLES_GOLDEN).expect("bundled sample-count table parses")
}

pub fn golden_shift() -> Table<f64> {
    parse_csv(SHIFT_GOLDEN).expect("bundled shift table parses")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellMismatch {
    pub row: String,
    pub column: String,
    pub expected: String,
    pub got: String,
}

/// Result of comparing a computed table with a golden one.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub cells_compared: usize,
    pub mismatches: Vec<CellMismatch>,
    pub missing: Vec<String>,
}

impl Divergence {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.missing.is_empty()
    }
}

impl Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "{} cells match", self.cells_compared);
        }
        writeln!(f, "{} of {} cells differ", self.mismatches.len(), self.cells_compared)?;
        for m in &self.mismatches {
            writeln!(f, "  [{}, {}] expected {} got {}", m.row, m.column, m.expected, m.got)?;
        }
        for m in &self.missing {
            writeln!(f, "  missing {m}")?;
        }
        Ok(())
    }
}

fn compare<T: CellFormat + Copy>(
    golden: &Table<T>,
    computed: &Table<T>,
    same: impl Fn(T, T) -> bool,
) -> Divergence {
    let mut out = Divergence { cells_compared: 0, mismatches: Vec::new(), missing: Vec::new() };
    for (r, row) in golden.row_labels.iter().enumerate() {
        for (c, column) in golden.column_labels.iter().enumerate() {
            let expected = golden.cells[r][c];
            match computed.cell(row, column) {
                Some(got) => {
                    out.cells_compared += 1;
                    if !same(expected, got) {
                        out.mismatches.push(CellMismatch {
                            row: row.clone(),
                            column: column.clone(),
                            expected: expected.format_cell(),
                            got: got.format_cell(),
                        });
                    }
                }
                None => out.missing.push(format!("[{row}, {column}]")),
            }
        }
    }
    out
}

pub fn compare_nsamples(computed: &Table<u64>) -> Divergence {
    compare(&golden_nsamples(), computed, |a, b| a == b)
}

/// Cells agree when within `tolerance`; pass 0 for exact agreement of the rounded values.
pub fn compare_shift(computed: &Table<f64>, tolerance: f64) -> Divergence {
    compare(&golden_shift(), computed, |a, b| (a - b).abs() <= tolerance + 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nsamples_spot_cells() {
        let t = nsamples_table(&SampleCountSpec::standard());
        assert_eq!(t.cell("0.95", "0.99"), Some(299));
        assert_eq!(t.cell("0.999", "0.999"), Some(6905));
        assert_eq!(t.cell("0.66", "0.66"), Some(3));
        assert_eq!(t.len(), 81);
    }

    #[test]
    fn shift_spot_cells() {
        let t = shift_table(&ShiftSpec::standard()).unwrap();
        assert_eq!(t.cell("3", "p0.9/c0.95"), Some(3.370));
        assert_eq!(t.cell("10000", "p0.99/c0.99"), Some(1.392));
        assert_eq!(t.cell("30", "p0.9/c0.9"), Some(1.074));
        assert_eq!(t.len(), 684);
    }

    #[test]
    fn golden_files_match() {
        let d = compare_nsamples(&nsamples_table(&SampleCountSpec::standard()));
        assert!(d.is_clean(), "{d}");
        let d = compare_shift(&shift_table(&ShiftSpec::standard()).unwrap(), 0.0);
        assert!(d.is_clean(), "{d}");
    }

    #[test]
    fn csv_round_trips_golden_text() {
        assert_eq!(nsamples_table(&SampleCountSpec::standard()).to_csv(), NSAMPLES_GOLDEN);
        assert_eq!(shift_table(&ShiftSpec::standard()).unwrap().to_csv(), SHIFT_GOLDEN);
    }

    #[test]
    fn divergence_names_cells() {
        let mut t = nsamples_table(&SampleCountSpec::standard());
        t.cells[5][6] = 300;
        let d = compare_nsamples(&t);
        assert_eq!(d.mismatches.len(), 1);
        assert_eq!(d.mismatches[0].row, "0.95");
        assert_eq!(d.mismatches[0].column, "0.99");
        assert!(d.to_string().contains("[0.95, 0.99] expected 299 got 300"));
    }

    #[test]
    fn text_is_aligned() {
        let text = nsamples_table(&SampleCountSpec::standard()).to_text();
        let widths: Vec<usize> = text.lines().map(|l| l.len()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn spec_rejects_unsorted() {
        let p = probabilities(&[0.9, 0.5]).unwrap();
        assert!(SampleCountSpec::new(p.clone(), p).is_err());
        assert!(ShiftSpec::new(vec![], vec![]).is_err());
        assert!(ShiftSpec::new(vec![1, 2], ShiftSpec::standard().columns).is_err());
    }
}
