//! Text formats: level lists, spacing CSVs, block reports and tabulated CDFs.
//!
//! Numbers are written in shortest round-trip decimal form, so reading a
//! file back reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use spacing_core::analysis::BlockReport;
use spacing_core::ensembles::ExtractionMode;
use spacing_core::laws::TabulatedCdf;
use spacing_core::SpacingSample;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] spacing_core::Error),
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

/// Formats a float as the shortest decimal that parses back to it.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// An ascending list of levels (zeta zero ordinates or energy levels).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFile {
    pub values: Vec<f64>,
    pub source_path: String,
}

struct Line<'a> {
    number: usize,
    /// 1-based column where `text` starts.
    column: usize,
    text: &'a str,
}

/// Non-blank, non-comment lines with their positions.
fn data_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let column = content.len() - trimmed.len() + 1;
        let trimmed = trimmed.trim_end();
        (!trimmed.is_empty()).then_some(Line {
            number: i + 1,
            column,
            text: trimmed,
        })
    })
}

fn parse_error(
    source: &str,
    line: usize,
    column: usize,
    message: impl Into<String>,
) -> FormatError {
    FormatError::Parse {
        source_name: source.to_string(),
        line,
        column,
        message: message.into(),
    }
}

fn parse_number(source: &str, line: usize, column: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| parse_error(source, line, column, format!("`{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(
            source,
            line,
            column,
            format!("`{field}` is not finite"),
        ));
    }
    Ok(v)
}

/// One decimal per line; `#` starts a comment. Values must be strictly ascending.
pub fn parse_levels_str(text: &str, source: &str) -> Result<LevelFile> {
    let mut values: Vec<f64> = Vec::new();
    for line in data_lines(text) {
        let v = parse_number(source, line.number, line.column, line.text)?;
        if let Some(&prev) = values.last() {
            if !(v > prev) {
                return Err(parse_error(
                    source,
                    line.number,
                    line.column,
                    format!("{v} does not exceed the previous level {prev}"),
                ));
            }
        }
        values.push(v);
    }
    if values.len() < 2 {
        let n = text.lines().count().max(1);
        return Err(parse_error(
            source,
            n,
            1,
            "at least two levels are required",
        ));
    }
    Ok(LevelFile {
        values,
        source_path: source.to_string(),
    })
}

pub fn parse_levels(path: &Path) -> Result<LevelFile> {
    parse_levels_str(&read_text(path)?, &path.display().to_string())
}

pub fn serialize_levels(levels: &LevelFile) -> String {
    let mut out = String::with_capacity(levels.values.len() * 20);
    for v in &levels.values {
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    out
}

/// Consecutive differences normalized to unit grand mean.
pub fn levels_to_spacings(levels: &LevelFile) -> Result<SpacingSample> {
    let raw: Vec<f64> = levels.values.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(SpacingSample::normalized(
        raw,
        None,
        format!("levels={}", levels.source_path),
    )?)
}

/// Raw consecutive differences.
pub fn level_differences(levels: &LevelFile) -> Vec<f64> {
    levels.values.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Spacing CSV: `#` header lines carrying provenance, a `spacing` column header, one value per row.
pub fn spacing_csv(sample: &SpacingSample) -> String {
    let mut out = String::with_capacity(sample.len() * 20 + 128);
    let _ = writeln!(out, "# provenance: {}", sample.provenance());
    let _ = writeln!(out, "# grand_mean: {}", fmt_f64(sample.grand_mean_used()));
    if let Some(mode) = sample.extraction_mode() {
        let _ = writeln!(out, "# mode: {mode}");
    }
    out.push_str("spacing\n");
    for s in sample.spacings() {
        out.push_str(&fmt_f64(*s));
        out.push('\n');
    }
    out
}

pub fn parse_spacing_csv(text: &str, source: &str) -> Result<SpacingSample> {
    let mut provenance = String::new();
    let mut grand_mean = 1.0;
    let mut mode = None;
    let mut values = Vec::new();
    let mut header_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        if let Some(comment) = raw.trim_start().strip_prefix('#') {
            let comment = comment.trim();
            if let Some(p) = comment.strip_prefix("provenance:") {
                provenance = p.trim().to_string();
            } else if let Some(g) = comment.strip_prefix("grand_mean:") {
                grand_mean = parse_number(source, number, 1, g.trim())?;
            } else if let Some(m) = comment.strip_prefix("mode:") {
                mode = Some(
                    m.trim()
                        .parse::<ExtractionMode>()
                        .map_err(|e| parse_error(source, number, 1, e.to_string()))?,
                );
            }
            continue;
        }
        let field = raw.trim();
        if field.is_empty() {
            continue;
        }
        if !header_seen && field.eq_ignore_ascii_case("spacing") {
            header_seen = true;
            continue;
        }
        let column = raw.len() - raw.trim_start().len() + 1;
        let first = field.split(',').next().unwrap_or("").trim();
        let v = parse_number(source, number, column, first)?;
        if v < 0.0 {
            return Err(parse_error(
                source,
                number,
                column,
                "spacings must be non-negative",
            ));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(parse_error(
            source,
            text.lines().count().max(1),
            1,
            "no spacings found",
        ));
    }
    if provenance.is_empty() {
        provenance = format!("file={source}");
    }
    Ok(SpacingSample::from_parts(
        values, grand_mean, mode, provenance,
    )?)
}

pub fn read_spacing_csv(path: &Path) -> Result<SpacingSample> {
    parse_spacing_csv(&read_text(path)?, &path.display().to_string())
}

/// `block,mean,variance,cv,kappa` with a provenance comment.
pub fn block_report_csv(report: &BlockReport, provenance: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {provenance} scheme={} block_size={} grand_mean={}",
        report.scheme,
        report.block_size,
        fmt_f64(report.grand_mean)
    );
    out.push_str("block,mean,variance,cv,kappa\n");
    for row in &report.rows {
        let s = &row.stats;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.block,
            fmt_f64(s.mean),
            fmt_f64(s.variance),
            fmt_f64(s.cv),
            fmt_f64(s.kappa_cv)
        );
    }
    out
}

/// Two columns `s,F(s)`; an optional non-numeric header row is skipped.
pub fn parse_tabulated_cdf(text: &str, source: &str) -> Result<TabulatedCdf> {
    let mut points = Vec::new();
    for (k, line) in data_lines(text).enumerate() {
        let fields: Vec<&str> = line.text.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(parse_error(
                source,
                line.number,
                line.column,
                format!("expected 2 columns, found {}", fields.len()),
            ));
        }
        if k == 0 && fields[0].parse::<f64>().is_err() {
            continue;
        }
        let s = parse_number(source, line.number, line.column, fields[0])?;
        let second = line.column + line.text.find(',').unwrap_or(0) + 1;
        let f = parse_number(source, line.number, second, fields[1])?;
        points.push((s, f));
    }
    Ok(TabulatedCdf::new(points)?)
}

/// Distinguishes a spacing CSV (single column) from a tabulated CDF (two columns).
pub fn looks_like_tabulated_cdf(text: &str) -> bool {
    data_lines(text)
        .find(|l| l.text.parse::<f64>().is_ok() || l.text.contains(','))
        .is_some_and(|l| l.text.contains(','))
}
