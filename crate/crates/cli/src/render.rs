//! Text rendering of tables and check reports.

use statgeo::report::{CheckReport, Status};
use statgeo::table::Table;

use crate::format::{aligned, number};

pub fn table_text(t: &Table) -> String {
    let at: Vec<String> = t.point.iter().map(|v| number(*v)).collect();
    let rows: Vec<(String, Vec<String>)> =
        t.rows.iter().map(|r| (r.label.clone(), r.values.iter().map(|v| number(*v)).collect())).collect();
    format!("{} of {} at ({})\n{}", t.table, t.fixture, at.join(", "), aligned(&t.columns, &rows))
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::HypothesisUnmet => "hypothesis-unmet",
        Status::Skipped => "skipped",
    }
}

/// One line per check with its note beneath, then report notes and a summary line.
pub fn check_text(r: &CheckReport) -> String {
    let name_w = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = format!("{} ({} points, seed {}, tolerance {:e})\n", r.fixture, r.points, r.seed, r.tolerance);
    for c in &r.checks {
        let mut line = format!("{:<16} {:<name_w$}  max {:.3e}", status_word(c.status), c.name, c.max_residual);
        if let Some(h) = c.hypothesis_residual {
            line.push_str(&format!("  hypothesis {h:.3e}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if let Some(note) = &c.note {
            out.push_str(&format!("{:17}note: {note}\n", ""));
        }
    }
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    let count = |s: Status| r.checks.iter().filter(|c| c.status == s).count();
    out.push_str(&format!(
        "{} passed, {} failed, {} hypothesis-unmet, {} skipped\n",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::HypothesisUnmet),
        count(Status::Skipped)
    ));
    out
}
