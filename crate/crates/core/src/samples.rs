//! Sample sets and their text file format.
//!
//! One value per line, decimal or C-style hexadecimal (`0x1.8p+1`). Blank
//! lines are skipped; lines starting with `#` are comments, except for the
//! `# seed:`, `# generator:` and `# virtual_precision:` provenance headers.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub generator: Option<String>,
    pub virtual_precision: Option<u32>,
}

/// Ordered binary64 samples of one program output.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    pub provenance: Provenance,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("sample {i} is not finite: {}", values[i])));
        }
        Ok(SampleSet { values, provenance: Provenance::default() })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Empirical standard deviation with the n - 1 denominator.
    pub fn std_dev(&self) -> f64 {
        std_dev(&self.values)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut provenance = Provenance::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let line_no = idx + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                parse_header(comment.trim(), &mut provenance, line_no)?;
                continue;
            }
            let v = parse_value(line)
                .map_err(|message| Error::Parse { line: line_no, message })?;
            values.push(v);
        }
        Ok(SampleSet { values, provenance })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Renders the file format; `exact` selects hexadecimal literals.
    pub fn to_text(&self, exact: bool) -> String {
        let mut out = String::new();
        if let Some(g) = &self.provenance.generator {
            let _ = writeln!(out, "# generator: {g}");
        }
        if let Some(s) = self.provenance.seed {
            let _ = writeln!(out, "# seed: {s}");
        }
        if let Some(t) = self.provenance.virtual_precision {
            let _ = writeln!(out, "# virtual_precision: {t}");
        }
        for &v in &self.values {
            if exact {
                out.push_str(&format_hex(v));
            } else {
                let _ = write!(out, "{v:?}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>, exact: bool) -> Result<()> {
        std::fs::write(path, self.to_text(exact))?;
        Ok(())
    }
}

fn parse_header(comment: &str, provenance: &mut Provenance, line: usize) -> Result<()> {
    let Some((key, value)) = comment.split_once(':') else {
        return Ok(());
    };
    let value = value.trim();
    let bad = |what: &str| Error::Parse { line, message: format!("invalid {what} header: {value}") };
    match key.trim() {
        "seed" => provenance.seed = Some(value.parse().map_err(|_| bad("seed"))?),
        "generator" => provenance.generator = Some(value.to_string()),
        "virtual_precision" => {
            provenance.virtual_precision = Some(value.parse().map_err(|_| bad("virtual_precision"))?)
        }
        _ => {}
    }
    Ok(())
}

/// Parses one decimal or hexadecimal float literal; rejects non-finite values.
pub fn parse_value(text: &str) -> std::result::Result<f64, String> {
    let lower = text.to_ascii_lowercase();
    let digits = lower.trim_start_matches(['+', '-']);
    let v = if digits.starts_with("0x") {
        let s = lower.strip_prefix('+').unwrap_or(&lower);
        hexf_parse::parse_hexf64(s, false).map_err(|e| format!("bad hex float {text:?}: {e}"))?
    } else {
        text.parse::<f64>().map_err(|e| format!("bad number {text:?}: {e}"))?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value {text:?}"))
    }
}

/// C-style hexadecimal literal, `0x1.8p+1`; subnormals use a `0x0.` mantissa.
pub fn format_hex(x: f64) -> String {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if biased == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 { (0, -1022) } else { (1, biased - 1023) };
    let mut hex = format!("{frac:013x}");
    while hex.ends_with('0') {
        hex.pop();
    }
    let dot = if hex.is_empty() { String::new() } else { format!(".{hex}") };
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}0x{lead}{dot}p{esign}{}", exp.abs())
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub(crate) fn std_dev(v: &[f64]) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(v);
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (n - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_format_examples() {
        assert_eq!(format_hex(1.0), "0x1p+0");
        assert_eq!(format_hex(3.0), "0x1.8p+1");
        assert_eq!(format_hex(-0.5), "-0x1p-1");
        assert_eq!(format_hex(0.0), "0x0p+0");
        assert_eq!(format_hex(f64::from_bits(1)), "0x0.0000000000001p-1022");
        assert_eq!(format_hex(0.1), "0x1.999999999999ap-4");
    }

    #[test]
    fn parses_mixed_file() {
        let text = "# generator: cramer_x0/mca_rr\n# seed: 7\n\n1.5\n0x1.8p+1\n-0x1p-1\n1e-3\n";
        let s = SampleSet::parse(text).unwrap();
        assert_eq!(s.values(), &[1.5, 3.0, -0.5, 1e-3]);
        assert_eq!(s.provenance.seed, Some(7));
        assert_eq!(s.provenance.generator.as_deref(), Some("cramer_x0/mca_rr"));
    }

    #[test]
    fn rejects_garbage_with_line_number() {
        let err = SampleSet::parse("1.0\nabc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(SampleSet::parse("inf\n").is_err());
        assert!(SampleSet::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn round_trips_both_forms() {
        let vals = vec![1.9999999958366637, -1.9999999972244424, 5e-324, -0.0, 1e300];
        let s = SampleSet::new(vals.clone()).unwrap();
        for exact in [false, true] {
            let back = SampleSet::parse(&s.to_text(exact)).unwrap();
            let a: Vec<u64> = back.values().iter().map(|v| v.to_bits()).collect();
            let b: Vec<u64> = vals.iter().map(|v| v.to_bits()).collect();
            assert_eq!(a, b, "exact={exact}");
        }
    }

    #[test]
    fn sample_statistics() {
        let s = SampleSet::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean(), 2.5);
        assert!((s.std_dev() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
