use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::EvalReport;
use crate::lang::Direction;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Tsv,
    Markdown,
    Json,
}

/// Rounds the shortest decimal representation of `value` to `places`
/// digits, ties to even. Working on the printed digits means 0.51615 is
/// treated as an exact tie even though its binary value sits just below.
pub fn round_half_even(value: f64, places: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let printed = format!("{}", value.abs());
    let (int_part, frac_part) = printed.split_once('.').unwrap_or((&printed, ""));
    let mut digits: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    let int_len = int_part.len();
    let frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    digits.truncate(int_len + places.min(frac.len()));
    while digits.len() < int_len + places {
        digits.push(0);
    }
    if frac.len() > places {
        let first = frac[places];
        let rest_nonzero = frac[places + 1..].iter().any(|&d| d != 0);
        let last_odd = digits.last().is_some_and(|d| d % 2 == 1);
        if first > 5 || (first == 5 && (rest_nonzero || last_odd)) {
            let mut i = digits.len();
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    let split = digits.len() - places;
    let mut out = String::new();
    let negative = value.is_sign_negative() && digits.iter().any(|&d| d != 0);
    if negative {
        out.push('-');
    }
    for d in &digits[..split] {
        out.push((b'0' + d) as char);
    }
    if places > 0 {
        out.push('.');
        for d in &digits[split..] {
            out.push((b'0' + d) as char);
        }
    }
    out
}

pub fn format_score(value: f64) -> String {
    round_half_even(value, 4)
}

const COLUMNS: [&str; 7] = [
    "model",
    "benchmark",
    "BLEU zh-en",
    "BLEU en-zh",
    "chrF++ zh-en",
    "chrF++ en-zh",
    "Avg",
];

fn cells(r: &EvalReport) -> Vec<String> {
    let cell = |d: Direction, bleu: bool| {
        r.per_direction
            .get(&d)
            .map(|s| format_score(if bleu { s.bleu } else { s.chrf }))
            .unwrap_or_else(|| "-".to_string())
    };
    vec![
        r.model_name.clone(),
        r.benchmark_name.clone(),
        cell(Direction::ZhEn, true),
        cell(Direction::EnZh, true),
        cell(Direction::ZhEn, false),
        cell(Direction::EnZh, false),
        format_score(r.avg),
    ]
}

pub fn render_report(reports: &[EvalReport], format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Tsv => {
            out.push_str(&COLUMNS.join("\t"));
            out.push('\n');
            for r in reports {
                out.push_str(&cells(r).join("\t"));
                out.push('\n');
            }
        }
        ReportFormat::Markdown => {
            let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
            for r in reports {
                let _ = writeln!(out, "| {} |", cells(r).join(" | "));
            }
        }
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(reports).expect("reports serialize");
            out.push('\n');
        }
    }
    out
}
