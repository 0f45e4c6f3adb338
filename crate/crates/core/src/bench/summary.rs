//! Best / average tables over repeated runs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use crate::solver::Algorithm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub best: usize,
    pub avg: f64,
    pub mean_wall_time: f64,
}

/// One row per (instance, algorithm) in order of first appearance.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut cells: Vec<(String, Algorithm, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        match cells
            .iter_mut()
            .find(|(i, a, _)| *i == r.instance && *a == r.algorithm)
        {
            Some((_, _, rs)) => rs.push(r),
            None => cells.push((r.instance.clone(), r.algorithm, vec![r])),
        }
    }
    cells
        .into_iter()
        .map(|(instance, algorithm, rs)| {
            let runs = rs.len();
            let best = rs.iter().map(|r| r.best_fitness).min().unwrap_or(0);
            let avg = rs.iter().map(|r| r.best_fitness as f64).sum::<f64>() / runs as f64;
            let mean_wall_time = rs.iter().map(|r| r.wall_time).sum::<f64>() / runs as f64;
            SummaryRow {
                instance,
                algorithm,
                runs,
                best,
                avg,
                mean_wall_time,
            }
        })
        .collect()
}

pub fn to_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("instance,algorithm,runs,best,avg,mean_wall_time\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.1},{:.3}",
            r.instance, r.algorithm, r.runs, r.best, r.avg, r.mean_wall_time
        );
    }
    out
}

/// Aligned plain-text table.
pub fn to_text(rows: &[SummaryRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.instance.len())
        .chain(std::iter::once("instance".len()))
        .max()
        .unwrap_or(8);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:<10} {:>4} {:>8} {:>10} {:>10}",
        "instance", "algorithm", "runs", "best", "avg", "time[s]"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:<10} {:>4} {:>8} {:>10.1} {:>10.3}",
            r.instance,
            r.algorithm.id(),
            r.runs,
            r.best,
            r.avg,
            r.mean_wall_time
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(instance: &str, algorithm: Algorithm, fitness: usize) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            algorithm,
            run: 0,
            seed: 0,
            vertex_count: 0,
            best_fitness: fitness,
            wall_time: 1.0,
            iterations: 0,
            trace: vec![],
            solution: vec![],
        }
    }

    #[test]
    fn best_and_average() {
        let records: Vec<RunRecord> = [6, 6, 6]
            .into_iter()
            .map(|f| rec("dolphins", Algorithm::Brkga, f))
            .chain(
                [22, 24, 23]
                    .into_iter()
                    .map(|f| rec("football", Algorithm::Fast, f)),
            )
            .collect();
        let rows = summarize(&records);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].best, rows[0].avg), (6, 6.0));
        assert_eq!((rows[1].best, rows[1].avg), (22, 23.0));

        let csv = to_csv(&rows);
        assert!(csv.contains("football,fast,3,22,23.0,1.000"));
        let text = to_text(&rows);
        assert_eq!(text.lines().count(), 3);
    }
}
