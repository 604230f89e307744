use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;

use crate::config::OutFormat;
use crate::record::ClaimRecord;

pub const CSV_HEADER: &str = "claim_id,sigma,t,param1,param2,value_re,value_im,magnitude,envelope,ratio,slope,verdict";

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn to_csv(records: &[ClaimRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        for row in &r.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.claim_id,
                num(row.sigma),
                num(row.t),
                opt(row.param1),
                opt(row.param2),
                num(row.value_re),
                num(row.value_im),
                num(row.magnitude),
                opt(row.envelope),
                opt(row.ratio),
                opt(r.slope()),
                row.verdict.as_str()
            );
        }
    }
    out
}

pub fn to_json(records: &[ClaimRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> anyhow::Result<Vec<ClaimRecord>> {
    serde_json::from_str(text).context("parsing records")
}

pub fn render(records: &[ClaimRecord], format: OutFormat) -> String {
    match format {
        OutFormat::Csv => to_csv(records),
        OutFormat::Json => to_json(records),
    }
}

pub fn emit(records: &[ClaimRecord], format: OutFormat, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, render(records, format)).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::Row;
    use zetasum_core::C64;

    fn sample() -> ClaimRecord {
        let mut r = ClaimRecord::new("chi", "x", "modulus");
        r.rows.push(Row::new(0.5, 1.0 / 3.0, C64::new(0.1, -2.0 / 7.0)).params(Some(1e-300), None).against(1e-9, true));
        r.settle();
        r
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(to_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_row_seventeen_digits() {
        let csv = to_csv(&[sample()]);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        let cells: Vec<_> = lines[1].split(',').collect();
        assert_eq!(cells.len(), 12);
        assert_eq!(cells[2], "3.3333333333333331e-1");
        assert_eq!(cells[2].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(cells[4], "");
        assert_eq!(cells[11], "pass");
    }

    #[test]
    fn json_round_trip_is_exact() {
        let recs = vec![sample()];
        let back = from_json(&to_json(&recs)).unwrap();
        assert_eq!(back, recs);
        assert_eq!(back[0].rows[0].t.to_bits(), (1.0f64 / 3.0).to_bits());
    }

    #[test]
    fn write_failure_names_path() {
        let e = emit(&[], OutFormat::Csv, Path::new("/nonexistent/dir/out.csv")).unwrap_err();
        assert!(format!("{e:#}").contains("/nonexistent/dir/out.csv"));
    }
}
