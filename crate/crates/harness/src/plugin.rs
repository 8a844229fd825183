//! Problems evaluated by an external process over a line protocol.
//!
//! For every evaluation the harness writes one line with the `n` decision
//! variables separated by spaces and reads back one line with `m + ng + nh`
//! numbers: objectives, then inequality constraints (`g <= 0` satisfied), then
//! equality constraints. The process is started once per run and killed when
//! the run ends.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::{Arc, Mutex};

use anyhow::{Context, Result};

use cmoea::metrics::HvBounds;
use cmoea::model::{Evaluation, ProblemSpec};

use crate::config::PluginEntry;

struct Pipes {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    line: String,
}

pub struct PluginEvaluator {
    name: String,
    m: usize,
    ng: usize,
    nh: usize,
    pipes: Mutex<Pipes>,
}

impl PluginEvaluator {
    pub fn spawn(entry: &PluginEntry) -> Result<Self> {
        let mut child = Command::new(&entry.command)
            .args(&entry.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .with_context(|| format!("starting plugin `{}` for {}", entry.command, entry.name))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(Self {
            name: entry.name.clone(),
            m: entry.m,
            ng: entry.ng,
            nh: entry.nh,
            pipes: Mutex::new(Pipes {
                child,
                stdin,
                stdout,
                line: String::new(),
            }),
        })
    }

    /// One request/response exchange.
    pub fn exchange(&self, x: &[f64]) -> Result<Evaluation<f64>> {
        let mut guard = self.pipes.lock().unwrap_or_else(|e| e.into_inner());
        let pipes = &mut *guard;
        let request: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        writeln!(pipes.stdin, "{}", request.join(" ")).context("writing to plugin")?;
        pipes.stdin.flush().context("writing to plugin")?;
        pipes.line.clear();
        let read = pipes
            .stdout
            .read_line(&mut pipes.line)
            .context("reading from plugin")?;
        anyhow::ensure!(read > 0, "plugin closed its output");
        let values = parse_response(&pipes.line, self.m + self.ng + self.nh)?;
        Ok(Evaluation {
            objectives: values[..self.m].to_vec(),
            inequality: values[self.m..self.m + self.ng].to_vec(),
            equality: values[self.m + self.ng..].to_vec(),
        })
    }
}

impl cmoea::model::Evaluator<f64> for PluginEvaluator {
    fn evaluate(&self, x: &[f64]) -> Evaluation<f64> {
        // The evaluator interface has no error channel; the runner catches the
        // unwind and records the run as failed.
        match self.exchange(x) {
            Ok(e) => e,
            Err(err) => panic!("plugin {}: {err:#}", self.name),
        }
    }
}

impl Drop for PluginEvaluator {
    fn drop(&mut self) {
        let pipes = self.pipes.get_mut().unwrap_or_else(|e| e.into_inner());
        let _ = pipes.child.kill();
        let _ = pipes.child.wait();
    }
}

fn parse_response(line: &str, expected: usize) -> Result<Vec<f64>> {
    let values = line
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("plugin sent `{t}`, not a number"))
        })
        .collect::<Result<Vec<_>>>()?;
    anyhow::ensure!(
        values.len() == expected,
        "plugin sent {} values, expected {expected}",
        values.len()
    );
    Ok(values)
}

/// Starts the plugin and wraps it as a problem.
pub fn plugin_problem(entry: &PluginEntry) -> Result<ProblemSpec<f64>> {
    let evaluator = PluginEvaluator::spawn(entry)?;
    Ok(ProblemSpec::new(
        entry.name.clone(),
        entry.m,
        entry.ng,
        entry.nh,
        entry.lower.clone(),
        entry.upper.clone(),
        Arc::new(evaluator),
    )?)
}

/// HV normalization box taken from the configured ideal and nadir points.
pub fn plugin_bounds(entry: &PluginEntry) -> HvBounds<f64> {
    HvBounds {
        ideal: entry.ideal.clone(),
        nadir: entry.nadir.clone(),
    }
}
