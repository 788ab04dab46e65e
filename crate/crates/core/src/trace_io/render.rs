//! Text rendering of numbers, report lines and assignment matrices.

use super::replay::ReportLine;
use crate::allocation::Payload;
use crate::matcher::AssignmentMatrix;

pub const CHECK_MARK: &str = "✓";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// At most this many significant digits, trailing zeros removed.
    Significant(usize),
    /// Shortest representation that parses back to the same value.
    Full,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Significant(6)
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_fraction(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_owned()
    }
}

/// Formats `x` for tables and CSV output. Negative zero prints as `0`.
pub fn format_number(x: f64, precision: Precision) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    match precision {
        Precision::Full => x.to_string(),
        Precision::Significant(d) => significant(x, d),
    }
}

/// `<lineNo> <REPORT> [payload]`; resource sets print as `{A,B}`.
pub fn render_report_line(line: &ReportLine) -> String {
    let mut out = format!("{} {}", line.line, line.report);
    match &line.payload {
        Some(Payload::Workload(w)) => {
            out.push(' ');
            out.push_str(w.as_str());
        }
        Some(Payload::Resources(set)) => {
            let items: Vec<&str> = set.iter().map(|r| r.as_str()).collect();
            out.push_str(" {");
            out.push_str(&items.join(","));
            out.push('}');
        }
        None => {}
    }
    out
}

/// Resource × workload grid with a check mark per assigned pair, in the
/// matrix's own row and column order. Columns are space aligned.
pub fn render_matrix(m: &AssignmentMatrix) -> String {
    let label_width = m
        .resources()
        .iter()
        .map(|r| r.as_str().chars().count())
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = m
        .workloads()
        .iter()
        .map(|w| w.as_str().chars().count().max(1))
        .collect();

    let mut out = String::new();
    let mut push_line = |cells: Vec<String>| {
        let mut line = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k > 0 {
                line.push_str("  ");
            }
            let width = if k == 0 { label_width } else { widths[k - 1] };
            line.push_str(cell);
            line.extend(std::iter::repeat(' ').take(width.saturating_sub(cell.chars().count())));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };

    let mut header = vec![String::new()];
    header.extend(m.workloads().iter().map(|w| w.to_string()));
    push_line(header);
    for (i, r) in m.resources().iter().enumerate() {
        let mut row = vec![r.to_string()];
        row.extend((0..widths.len()).map(|j| {
            if m.is_marked(i, j) {
                CHECK_MARK.to_owned()
            } else {
                String::new()
            }
        }));
        push_line(row);
    }
    out
}
