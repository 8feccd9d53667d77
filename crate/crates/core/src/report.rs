//! End-to-end analysis of a sample set and its serializable report.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::bernoulli::{bernoulli_curves, required_samples, s_hat_b_fractional_in, s_hat_b_in, BitCurve, BitRange};
use crate::bits::{pow2, BitsEstimate, Clamp};
use crate::cnh::{
    cnh_report, contribution_shift, significance_shift, variance_ci, CnhCurvePoint, ConfidenceParams,
    VarianceInterval, DEFAULT_CONTRIBUTION_P, NORMALITY_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::error_model::{build_error_samples, ErrorKind, ErrorSampleSet, ErrorSpec, Reference, ReferenceSummary};
use crate::legacy::{cestac_shift, equivalent_probability, s_hat_cestac, s_hat_mca, CadnaPreset};
use crate::samples::{std_dev, Provenance, SampleSet};
use crate::stats::{normal_upper_tail, shapiro_wilk, Probability};
use crate::stochastic::{generate_cramer, NoiseConfig};
use crate::warning::Warning;

pub const SCHEMA: &str = "sigbits/1";

pub const DEFAULT_P: f64 = 0.95;
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Probabilities baked into the display notation.
pub const NOTATION_ERROR_P: f64 = 0.99;
pub const NOTATION_CONTRIBUTION_P: f64 = 0.51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Cnh,
    Bernoulli,
    Mca,
    Cestac,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Estimator::Cnh, Estimator::Bernoulli, Estimator::Mca, Estimator::Cestac];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Cnh => "cnh",
            Estimator::Bernoulli => "bernoulli",
            Estimator::Mca => "mca",
            Estimator::Cestac => "cestac",
        }
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| Error::Usage(format!("unknown estimator {s:?} (cnh|bernoulli|mca|cestac)")))
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma separated estimator list such as `cnh,mca`.
pub fn parse_estimators(list: &str) -> Result<BTreeSet<Estimator>> {
    let set = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Estimator::from_str)
        .collect::<Result<BTreeSet<_>>>()?;
    if set.is_empty() {
        return Err(Error::Usage("at least one estimator is required".into()));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" | "txt" => Ok(OutputFormat::Text),
            _ => Err(Error::Usage(format!("unknown format {s:?} (json|csv|text)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub kind: ErrorKind,
    pub estimators: BTreeSet<Estimator>,
    pub p: Probability,
    pub alpha: Probability,
    /// Target for contributing bits; 0.51 when absent.
    pub contribution_p: Option<f64>,
    pub bit_range: BitRange,
    pub strict: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            kind: ErrorKind::Relative,
            estimators: Estimator::ALL.into_iter().collect(),
            p: Probability::new(DEFAULT_P).expect("valid"),
            alpha: Probability::new(DEFAULT_ALPHA).expect("valid"),
            contribution_p: None,
            bit_range: BitRange::Binary64,
            strict: false,
        }
    }
}

impl AnalysisConfig {
    pub fn new(kind: ErrorKind, estimators: BTreeSet<Estimator>, p: f64, alpha: f64) -> Result<Self> {
        if estimators.is_empty() {
            return Err(Error::Usage("at least one estimator is required".into()));
        }
        Ok(AnalysisConfig {
            kind,
            estimators,
            p: Probability::new(p)?,
            alpha: Probability::new(alpha)?,
            ..Default::default()
        })
    }

    pub fn runs(&self, e: Estimator) -> bool {
        self.estimators.contains(&e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportInputs {
    pub source: Option<String>,
    pub samples: usize,
    pub provenance: Provenance,
    pub error_kind: ErrorKind,
    pub reference: ReferenceSummary,
    /// e_y of the reference; absolute errors are divided by 2^(e_y - 1).
    pub normalization_exponent: Option<i32>,
    pub p: f64,
    pub alpha: f64,
    pub contribution_p: f64,
    pub estimators: Vec<Estimator>,
    pub bit_range: u32,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnhSection {
    pub estimator: &'static str,
    pub p: f64,
    pub alpha: f64,
    pub sigma_hat: f64,
    pub variance_interval: VarianceInterval,
    pub delta: f64,
    pub s_cnh: BitsEstimate,
    pub contribution_p: f64,
    pub c_cnh: Option<BitsEstimate>,
    pub curve: Vec<CnhCurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernoulliSection {
    pub estimator: &'static str,
    pub p: f64,
    pub alpha: f64,
    pub required_samples: u64,
    pub available_samples: u64,
    pub s_b: BitsEstimate,
    pub s_b_fractional: BitsEstimate,
    /// Largest rank whose significance lower bound reaches p.
    pub significance_certified: Option<u32>,
    /// Largest rank whose contribution lower bound reaches the contribution target.
    pub contribution_certified: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McaSection {
    pub estimator: &'static str,
    /// Significance probability of the reported bit when σ is known exactly.
    pub p: f64,
    pub alpha: Option<f64>,
    pub s_mca: BitsEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CestacSection {
    pub estimator: &'static str,
    /// Probability at which the CESTAC shift certifies significance for this n.
    pub p: Option<f64>,
    pub alpha: f64,
    pub s_cestac: BitsEstimate,
    pub cadna_equivalent_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityResult {
    pub test: &'static str,
    pub w: f64,
    pub p_value: f64,
    pub threshold: f64,
    pub rejected: bool,
}

/// Display rule: ⌈k + 4.318108⌉ bits, with the 99 % error bound 2^-⌊k - 1.365037⌋.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Notation {
    /// -log2 of the upper confidence bound on σ, in normalized units.
    pub k: f64,
    pub bits: u32,
    pub decimal_digits: u32,
    pub value: f64,
    pub error_bound: f64,
    pub error_p: f64,
    pub contribution_p: f64,
    pub alpha: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignificanceReport {
    pub schema: &'static str,
    pub inputs: ReportInputs,
    pub cnh: Option<CnhSection>,
    pub bernoulli: Option<BernoulliSection>,
    pub mca: Option<McaSection>,
    pub cestac: Option<CestacSection>,
    pub curves: Vec<BitCurve>,
    pub normality: Option<NormalityResult>,
    pub notation: Option<Notation>,
    pub warnings: Vec<Warning>,
}

/// Divides absolute errors by 2^(e_y - 1) so bit ranks read as mantissa ranks.
pub fn normalized_errors(z: &ErrorSampleSet) -> Vec<f64> {
    let shift = z.normalization_shift() as i32;
    if shift == 0 {
        return z.z.clone();
    }
    let factor = pow2(-shift);
    z.z.iter().map(|&v| v * factor).collect()
}

/// Runs the configured estimators on `x` against `reference`.
pub fn analyze(x: &SampleSet, reference: Reference, config: &AnalysisConfig) -> Result<SignificanceReport> {
    if config.estimators.is_empty() {
        return Err(Error::Usage("at least one estimator is required".into()));
    }
    if x.len() < 2 {
        return Err(Error::Data(format!("at least 2 samples are needed, got {}", x.len())));
    }
    let n = x.len();
    let errors = build_error_samples(x, &ErrorSpec::new(config.kind, reference))?;
    let mut warnings = errors.warnings.clone();
    let zn = normalized_errors(&errors);
    let zset = ErrorSampleSet { z: zn.clone(), warnings: Vec::new(), ..errors.clone() };
    let params = ConfidenceParams { n, p: config.p, alpha: config.alpha };
    let contribution_p = config.contribution_p.unwrap_or(DEFAULT_CONTRIBUTION_P);

    let mut normality = None;
    let cnh = if config.runs(Estimator::Cnh) {
        let r = cnh_report(&zset, &params, Some(contribution_p))?;
        normality = r.normality.map(|sw| normality_result(sw.w, sw.p_value));
        warnings.extend(r.warnings);
        Some(CnhSection {
            estimator: "cnh",
            p: config.p.value(),
            alpha: config.alpha.value(),
            sigma_hat: r.sigma_hat,
            variance_interval: r.variance_interval,
            delta: r.delta,
            s_cnh: r.s_cnh,
            contribution_p: r.contribution_p,
            c_cnh: r.c_cnh,
            curve: r.curve,
        })
    } else {
        None
    };
    if normality.is_none() {
        normality = shapiro_wilk(&zn).ok().map(|sw| normality_result(sw.w, sw.p_value));
    }

    let mut curves = Vec::new();
    let bernoulli = if config.runs(Estimator::Bernoulli) {
        let (sig, con) = bernoulli_curves(&zn, config.alpha, config.bit_range)?;
        let required = required_samples(config.p, config.alpha);
        if (n as u64) < required {
            warnings.push(Warning::InsufficientSamples { required, available: n as u64 });
        }
        let s_b = s_hat_b_in(&zn, config.bit_range)?;
        if s_b.clamp == Clamp::NoCertifiedBit {
            warnings.push(Warning::NoTrustedBit { estimator: "s_b".into() });
        }
        let significance_certified = sig.last_certified(config.p.value());
        let contribution_certified = con.last_certified(contribution_p);
        for (curve, certified) in [(&sig, significance_certified), (&con, contribution_certified)] {
            let bits: Vec<u32> = curve
                .low_confidence_bits()
                .into_iter()
                .filter(|&k| certified.is_some_and(|c| k <= c))
                .collect();
            if !bits.is_empty() {
                warnings.push(Warning::CltPreconditionUnmet { estimator: format!("bernoulli_{}", curve.kind), bits });
            }
        }
        let section = BernoulliSection {
            estimator: "bernoulli",
            p: config.p.value(),
            alpha: config.alpha.value(),
            required_samples: required,
            available_samples: n as u64,
            s_b,
            s_b_fractional: s_hat_b_fractional_in(&zn, config.bit_range)?,
            significance_certified,
            contribution_certified,
        };
        curves.push(sig);
        curves.push(con);
        Some(section)
    } else {
        None
    };

    let mu = x.mean();
    let sigma = x.std_dev();
    let mca = if config.runs(Estimator::Mca) {
        match s_hat_mca(mu, sigma) {
            Ok(s_mca) => {
                push_clamp(&mut warnings, "s_mca", &s_mca, sigma == 0.0);
                Some(McaSection { estimator: "mca", p: 1.0 - 2.0 * normal_upper_tail(1.0), alpha: None, s_mca })
            }
            Err(e) => {
                warnings.push(Warning::EstimatorSkipped { estimator: "s_mca".into(), reason: e.to_string() });
                None
            }
        }
    } else {
        None
    };

    let cestac = if config.runs(Estimator::Cestac) {
        match s_hat_cestac(mu, sigma, n, config.alpha) {
            Ok(s_cestac) => {
                push_clamp(&mut warnings, "s_cestac", &s_cestac, sigma == 0.0);
                warnings.push(Warning::LegacyDiverges);
                let shift = cestac_shift(n, config.alpha)?;
                Some(CestacSection {
                    estimator: "cestac",
                    p: equivalent_probability(shift, n, config.alpha).ok(),
                    alpha: config.alpha.value(),
                    s_cestac,
                    cadna_equivalent_p: CadnaPreset::default().equivalent_probability()?,
                })
            }
            Err(e) => {
                warnings.push(Warning::EstimatorSkipped { estimator: "s_cestac".into(), reason: e.to_string() });
                None
            }
        }
    } else {
        None
    };

    let notation = notation(&zn, &errors, mu, config.alpha)?;

    Ok(SignificanceReport {
        schema: SCHEMA,
        inputs: ReportInputs {
            source: None,
            samples: n,
            provenance: x.provenance.clone(),
            error_kind: config.kind,
            reference: errors.reference,
            normalization_exponent: errors.normalization_exponent,
            p: config.p.value(),
            alpha: config.alpha.value(),
            contribution_p,
            estimators: config.estimators.iter().copied().collect(),
            bit_range: config.bit_range.max_bits(),
            strict: config.strict,
        },
        cnh,
        bernoulli,
        mca,
        cestac,
        curves,
        normality,
        notation,
        warnings,
    })
}

fn normality_result(w: f64, p_value: f64) -> NormalityResult {
    NormalityResult {
        test: "shapiro_wilk",
        w,
        p_value,
        threshold: NORMALITY_THRESHOLD,
        rejected: p_value < NORMALITY_THRESHOLD,
    }
}

fn push_clamp(warnings: &mut Vec<Warning>, estimator: &str, b: &BitsEstimate, degenerate: bool) {
    if b.is_clamped() && !degenerate {
        warnings.push(Warning::Clamped { estimator: estimator.into(), raw: b.raw, reported: b.bits });
    }
}

fn notation(zn: &[f64], errors: &ErrorSampleSet, value: f64, alpha: Probability) -> Result<Option<Notation>> {
    let sigma_hat = std_dev(zn);
    if sigma_hat == 0.0 {
        return Ok(None);
    }
    let interval = variance_ci(sigma_hat, zn.len(), alpha)?;
    let k = -interval.sigma_upper().log2();
    let err_shift = significance_shift(Probability::new(NOTATION_ERROR_P)?)?;
    let con_shift = contribution_shift(Probability::new(NOTATION_CONTRIBUTION_P)?)?;
    let bits = (k - con_shift).ceil().max(1.0) as u32;
    let decimal_digits = (bits as f64 * 2f64.log10()).ceil().max(1.0) as u32;
    let scale = match errors.kind {
        ErrorKind::Relative => errors.reference.value().abs(),
        ErrorKind::Absolute => pow2(errors.normalization_shift() as i32),
    };
    let error_bound = (-(k - err_shift).floor()).exp2() * scale;
    let text = format!("{} ± {}", format_significant(value, decimal_digits), format_bound(error_bound));
    Ok(Some(Notation {
        k,
        bits,
        decimal_digits,
        value,
        error_bound,
        error_p: NOTATION_ERROR_P,
        contribution_p: NOTATION_CONTRIBUTION_P,
        alpha: alpha.value(),
        text,
    }))
}

/// `x` rounded to `digits` significant decimal digits, fixed notation when short enough.
pub fn format_significant(x: f64, digits: u32) -> String {
    let digits = digits.clamp(1, 17) as usize;
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        c_exponent(&sci)
    }
}

/// Two significant digits, rounded up so the printed bound still bounds.
pub fn format_bound(b: f64) -> String {
    if b == 0.0 || !b.is_finite() {
        return b.to_string();
    }
    let mut e = b.log10().floor() as i32;
    let mut m = (b / 10f64.powi(e - 1)).ceil() / 10.0;
    if m >= 10.0 {
        m /= 10.0;
        e += 1;
    }
    c_exponent(&format!("{m:.1}e{e}"))
}

fn c_exponent(sci: &str) -> String {
    match sci.split_once('e') {
        Some((m, e)) => {
            let v: i32 = e.parse().unwrap_or(0);
            let sign = if v < 0 { '-' } else { '+' };
            format!("{m}e{sign}{:02}", v.abs())
        }
        None => sci.to_string(),
    }
}

impl Warning {
    /// Warnings that make `--strict` fail.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Warning::NormalityRejected { .. }
                | Warning::NormalityUntested { .. }
                | Warning::CltPreconditionUnmet { .. }
                | Warning::InsufficientSamples { .. }
        )
    }
}

impl SignificanceReport {
    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.inputs.source = Some(source.into());
        self
    }

    pub fn precondition_warnings(&self) -> Vec<&Warning> {
        self.warnings.iter().filter(|w| w.is_precondition()).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// One row per reported quantity: estimator, quantity, value, p, alpha.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("estimator,quantity,value,p,alpha\n");
        let mut row = |est: &str, q: &str, v: f64, p: Option<f64>, a: Option<f64>| {
            let opt = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{est},{q},{v},{},{}", opt(p), opt(a));
        };
        if let Some(c) = &self.cnh {
            row("cnh", "sigma_hat", c.sigma_hat, None, None);
            row("cnh", "delta", c.delta, Some(c.p), Some(c.alpha));
            row("cnh", "s_cnh", c.s_cnh.bits, Some(c.p), Some(c.alpha));
            if let Some(cc) = &c.c_cnh {
                row("cnh", "c_cnh", cc.bits, Some(c.contribution_p), Some(c.alpha));
            }
        }
        if let Some(b) = &self.bernoulli {
            row("bernoulli", "required_samples", b.required_samples as f64, Some(b.p), Some(b.alpha));
            row("bernoulli", "s_b", b.s_b.bits, Some(b.p), Some(b.alpha));
            row("bernoulli", "s_b_fractional", b.s_b_fractional.bits, Some(b.p), Some(b.alpha));
            if let Some(k) = b.significance_certified {
                row("bernoulli", "significance_certified", k as f64, Some(b.p), Some(b.alpha));
            }
            if let Some(k) = b.contribution_certified {
                row("bernoulli", "contribution_certified", k as f64, Some(self.inputs.contribution_p), Some(b.alpha));
            }
        }
        if let Some(m) = &self.mca {
            row("mca", "s_mca", m.s_mca.bits, Some(m.p), m.alpha);
        }
        if let Some(c) = &self.cestac {
            row("cestac", "s_cestac", c.s_cestac.bits, c.p, Some(c.alpha));
            row("cestac", "cadna_equivalent_p", c.cadna_equivalent_p, None, Some(0.05));
        }
        if let Some(nr) = &self.normality {
            row("shapiro_wilk", "p_value", nr.p_value, None, Some(nr.threshold));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.inputs;
        let _ = writeln!(out, "samples      {}", i.samples);
        if let Some(s) = &i.source {
            let _ = writeln!(out, "source       {s}");
        }
        let _ = writeln!(out, "error        {} vs {}", i.error_kind, reference_label(&i.reference));
        let _ = writeln!(out, "p / alpha    {} / {}", i.p, i.alpha);
        if let Some(c) = &self.cnh {
            let _ = writeln!(out, "s_cnh        {:.2}  (delta {:.3})", c.s_cnh.bits, c.delta);
            if let Some(cc) = &c.c_cnh {
                let _ = writeln!(out, "c_cnh        {:.2}  (p = {})", cc.bits, c.contribution_p);
            }
        }
        if let Some(b) = &self.bernoulli {
            let _ = writeln!(
                out,
                "s_b          {}  (fractional {:.2}; {} samples, {} required)",
                b.s_b.bits, b.s_b_fractional.bits, b.available_samples, b.required_samples
            );
        }
        if let Some(m) = &self.mca {
            let _ = writeln!(out, "s_mca        {:.2}", m.s_mca.bits);
        }
        if let Some(c) = &self.cestac {
            let _ = writeln!(out, "s_cestac     {:.2}", c.s_cestac.bits);
        }
        if let Some(nr) = &self.normality {
            let _ = writeln!(out, "shapiro-wilk W = {:.5}, p = {:.3e}", nr.w, nr.p_value);
        }
        if let Some(n) = &self.notation {
            let _ = writeln!(out, "notation     {}", n.text);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        Ok(match format {
            OutputFormat::Json => self.to_json()?,
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => self.to_text(),
        })
    }
}

fn reference_label(r: &ReferenceSummary) -> String {
    match r {
        ReferenceSummary::Scalar { value } => format!("{value}"),
        ReferenceSummary::Paired { mean } => format!("paired samples (mean {mean})"),
        ReferenceSummary::SampleMean { mean } => format!("sample mean {mean}"),
    }
}

/// Per-bit curve rows: k, successes, trials, p_hat, p_lower, kind.
pub fn curves_csv(curves: &[BitCurve]) -> String {
    let mut out = String::from("k,successes,trials,p_hat,p_lower,kind\n");
    for c in curves {
        for e in &c.entries {
            let _ = writeln!(out, "{},{},{},{},{},{}", e.k, e.successes, e.trials, e.p_hat, e.p_lower, c.kind);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoSettings {
    pub benchmark: &'static str,
    pub n: usize,
    pub noise: NoiseConfig,
}

/// Reports on both Cramer outputs of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub schema: &'static str,
    pub demo: DemoSettings,
    pub x0: SignificanceReport,
    pub x1: SignificanceReport,
}

impl DemoReport {
    pub fn precondition_warnings(&self) -> Vec<&Warning> {
        let mut w = self.x0.precondition_warnings();
        w.extend(self.x1.precondition_warnings());
        w
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Generates n Cramer runs and analyzes both outputs against their sample means.
pub fn demo_cramer(n: usize, noise: &NoiseConfig, config: &AnalysisConfig) -> Result<([SampleSet; 2], DemoReport)> {
    let [x0, x1] = generate_cramer(n, noise)?;
    let r0 = analyze(&x0, Reference::SampleMean, config)?.with_source("x0");
    let r1 = analyze(&x1, Reference::SampleMean, config)?.with_source("x1");
    let report = DemoReport {
        schema: SCHEMA,
        demo: DemoSettings { benchmark: "cramer", n, noise: *noise },
        x0: r0,
        x1: r1,
    };
    Ok(([x0, x1], report))
}
