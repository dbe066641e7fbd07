use std::fmt::Write as _;

use ramseylab::{CheckReport, Config, Verdict};
use serde::Serialize;

use crate::Format;

/// Columns of the CSV rendering, in order.
pub const CSV_COLUMNS: [&str; 6] = ["check_name", "params", "lhs", "rhs", "margin", "verdict"];

#[derive(Serialize)]
struct Document<'a> {
    command: &'a str,
    precision_bits: u32,
    reports: &'a [CheckReport],
}

pub fn render(command: &str, cfg: &Config, reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => {
            let doc = Document {
                command,
                precision_bits: cfg.precision_bits,
                reports,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("in-memory write");
            for r in reports {
                let o = |v: &Option<String>| v.clone().unwrap_or_default();
                w.write_record([
                    r.check_name.clone(),
                    params(r, ";"),
                    o(&r.lhs),
                    o(&r.rhs),
                    o(&r.margin),
                    r.verdict.as_str().to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let _ = write!(s, "{:<28} {}", r.check_name, r.verdict.as_str());
                for (k, v) in [("lhs", &r.lhs), ("rhs", &r.rhs), ("margin", &r.margin)] {
                    if let Some(v) = v {
                        let _ = write!(s, "  {k}={v}");
                    }
                }
                if !r.params.is_empty() {
                    let _ = write!(s, "  [{}]", params(r, " "));
                }
                s.push('\n');
            }
            s
        }
    }
}

fn params(r: &CheckReport, sep: &str) -> String {
    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(sep)
}

/// 1 if anything failed, else 3 if a hypothesis was not met, else 0.
pub fn exit_code(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::HypothesisNotMet) {
        3
    } else {
        0
    }
}
