//! Per-point attack report CSV.

use std::fmt::Write as _;

use crate::attacks::{AttackBudget, Attacker};
use crate::data::{fmt_real, Dataset, Label};
use crate::error::Result;
use crate::evaluation::attack_all;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub index: usize,
    pub label: Label,
    pub predicted: Label,
    pub astute: bool,
    pub radius: Option<f64>,
    pub witness: Option<Vec<f64>>,
}

pub fn attack_report(attacker: &Attacker<'_>, test: &Dataset, budget: &AttackBudget) -> Result<Vec<ReportRow>> {
    let results = attack_all(attacker, test, budget)?;
    test.iter()
        .zip(results)
        .enumerate()
        .map(|(index, ((x, y), res))| {
            let predicted = attacker.classifier().predict(x)?;
            Ok(ReportRow {
                index,
                label: y,
                predicted,
                astute: predicted == y && !res.is_found(),
                radius: res.radius,
                witness: res.witness,
            })
        })
        .collect()
}

pub fn header(dim: usize) -> String {
    let mut h = String::from("index,label,predicted,astute,radius");
    for j in 0..dim {
        write!(h, ",witness_{j}").unwrap();
    }
    h
}

pub fn format_report(rows: &[ReportRow], dim: usize) -> String {
    let mut out = header(dim);
    out.push('\n');
    for r in rows {
        write!(out, "{},{},{},{},", r.index, r.label, r.predicted, r.astute).unwrap();
        if let Some(rad) = r.radius {
            out.push_str(&fmt_real(rad));
        }
        for j in 0..dim {
            out.push(',');
            if let Some(w) = &r.witness {
                out.push_str(&fmt_real(w[j]));
            }
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`format_report`]; errors carry the 1-based line number.
pub fn parse_report(text: &str) -> std::result::Result<Vec<ReportRow>, (usize, String)> {
    let mut lines = text.lines().enumerate();
    let Some((_, head)) = lines.next() else {
        return Err((0, "empty report".into()));
    };
    let cols: Vec<&str> = head.split(',').collect();
    if cols.len() < 5 || head.trim() != header(cols.len() - 5) {
        return Err((1, "unexpected header".into()));
    }
    let dim = cols.len() - 5;
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let ln = i + 1;
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 + dim {
            return Err((ln, format!("expected {} fields, found {}", 5 + dim, f.len())));
        }
        let bad = |what: &str, v: &str| (ln, format!("bad {what} `{v}`"));
        let real = |v: &str| v.parse::<f64>().map_err(|_| bad("number", v));
        let radius = if f[4].is_empty() { None } else { Some(real(f[4])?) };
        let witness = if f[5..].iter().all(|v| v.is_empty()) {
            None
        } else {
            Some(f[5..].iter().map(|v| real(v)).collect::<std::result::Result<Vec<_>, _>>()?)
        };
        rows.push(ReportRow {
            index: f[0].parse().map_err(|_| bad("index", f[0]))?,
            label: f[1].parse().map_err(|_| bad("label", f[1]))?,
            predicted: f[2].parse().map_err(|_| bad("label", f[2]))?,
            astute: f[3].parse().map_err(|_| bad("flag", f[3]))?,
            radius,
            witness,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::AttackMethod;
    use crate::classifiers::ClassifierConfig;
    use crate::data::{generate, RandomStream, ScenarioSpec};

    #[test]
    fn round_trip() {
        let train = generate(&ScenarioSpec::half_moons(200, 0.1), RandomStream::new(1, 0));
        let test = generate(&ScenarioSpec::half_moons(60, 0.1), RandomStream::new(1, 1));
        let m = ClassifierConfig::nn1().train(&train).unwrap();
        let a = Attacker::new(&m, AttackMethod::Exact).unwrap();
        let rows = attack_report(&a, &test, &AttackBudget::new(0.1).unwrap()).unwrap();
        assert!(rows.iter().any(|r| !r.astute));
        let text = format_report(&rows, 2);
        assert_eq!(parse_report(&text).unwrap(), rows);
        assert_eq!(parse_report("index,label\n").unwrap_err().0, 1);
        let broken = text.replacen("+1", "x", 1);
        assert!(parse_report(&broken).is_err());
    }
}
