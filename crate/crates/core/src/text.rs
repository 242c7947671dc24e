//! Line-oriented helpers shared by the file readers.

use crate::error::{parse_err, Result};

/// Non-blank lines that are not `#` comments, with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_f64(line: usize, field: &str, what: &str) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| parse_err(line, format!("cannot parse {what} from {field:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what} is not finite")));
    }
    Ok(v)
}

pub(crate) fn parse_usize(line: usize, field: &str, what: &str) -> Result<usize> {
    field.trim().parse().map_err(|_| parse_err(line, format!("cannot parse {what} from {field:?}")))
}

/// Splits a comma separated record and checks the field count.
pub(crate) fn fields<'a>(line: usize, text: &'a str, allowed: &[usize]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if !allowed.contains(&parts.len()) {
        return Err(parse_err(line, format!("expected {allowed:?} comma separated fields, found {}", parts.len())));
    }
    Ok(parts)
}

/// True when the record looks like a header (first field is not numeric).
pub(crate) fn is_header(text: &str) -> bool {
    text.split(',').next().map(|f| f.trim().parse::<f64>().is_err()).unwrap_or(false)
}
