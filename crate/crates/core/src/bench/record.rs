//! Per-run records and their newline-delimited JSON persistence.
//!
//! One JSON object per line:
//!
//! ```text
//! {"instance":"karate","algorithm":"fast-rev","run":0,"seed":123,"vertex_count":34,
//!  "best_fitness":3,"wall_time":0.01,"iterations":0,
//!  "trace":[{"elapsed":0.0,"iteration":0,"fitness":3}],"solution":[0,33,2]}
//! ```
//!
//! `solution` lists the original vertex ids of the best set found.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::brkga::{RunResult, TracePoint};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::Algorithm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub run: u32,
    pub seed: u64,
    pub vertex_count: usize,
    pub best_fitness: usize,
    pub wall_time: f64,
    pub iterations: u64,
    pub trace: Vec<TracePoint>,
    #[serde(default)]
    pub solution: Vec<u64>,
}

impl RunRecord {
    pub fn from_result(
        instance: &str,
        algorithm: Algorithm,
        run: u32,
        seed: u64,
        graph: &Graph,
        result: &RunResult,
    ) -> Self {
        RunRecord {
            instance: instance.to_owned(),
            algorithm,
            run,
            seed,
            vertex_count: graph.vertex_count(),
            best_fitness: result.best_fitness,
            wall_time: result.wall_time,
            iterations: result.iterations,
            trace: result.trace.clone(),
            solution: result.best.iter().map(|v| graph.label(v)).collect(),
        }
    }

    /// `true` if best-so-far fitness never increases along the trace.
    pub fn trace_is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].fitness <= w[0].fitness)
    }
}

pub fn write_records<W: Write>(mut out: W, records: &[RunRecord]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")
            .map_err(|e| Error::io("<records>", e))?;
    }
    Ok(())
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    for (index, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<records>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: index + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn save_records(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_records(&mut out, records)?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(BufReader::new(file))
}

/// `elapsed_seconds,fitness` lines with a header.
pub fn write_trace<W: Write>(mut out: W, trace: &[TracePoint]) -> std::io::Result<()> {
    writeln!(out, "elapsed_seconds,fitness")?;
    for p in trace {
        writeln!(out, "{},{}", p.elapsed, p.fitness)?;
    }
    Ok(())
}
