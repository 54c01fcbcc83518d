//! The `dynror` command line.
//!
//! Exit codes: 0 success or a true verdict, 1 a false verdict or a
//! counterexample, 2 an invalid signal or problem, 3 unreadable input.

use std::fs;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decision::{value, value_bruteforce};
use crate::dominance::{
    dominates_sufficient, dynamic_reveal_or_refine, falsify, strongly_dominates_as, DominanceReport, FalsifyConfig,
    FalsifyOutcome,
};
use crate::dynamic::{dynamic_join, to_experiment, validate_dynamic, DynamicSignal};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::gen::{GenConfig, Generator};
use crate::json::{
    counterexample_to_doc, dynamic_to_doc, experiment_to_doc, parse_document, parse_prior, problem_from_doc,
    problem_to_doc, signal_to_doc, Document, ProblemDoc,
};
use crate::render::render_svg;
use crate::signal::{join, reveal_or_refines, validate, Prior, StateSpace};

#[derive(Parser, Debug)]
#[command(name = "dynror", version, about = "Exact value of information and strong dominance for dynamic signals")]
struct Cli {
    /// Also print 6-place decimal approximations (marked with `~`).
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a signal or dynamic signal is a partition (and a filtration).
    Validate { input: String },
    /// Coarsest common refinement of two signals.
    Join { a: String, b: String },
    /// State-conditional distribution over realization paths.
    Experiment {
        input: String,
        /// List every product path (zeros included) up to this many rows.
        #[arg(long, default_value_t = 100_000)]
        max_rows: u128,
    },
    /// Optimal value and strategy of a dynamic signal in an extended problem.
    Value {
        signal: String,
        problem: String,
        /// `uniform`, an inline JSON map, or a file holding one.
        #[arg(long, default_value = "uniform")]
        prior: String,
        /// Enumerate adapted strategies instead of backward induction.
        #[arg(long)]
        bruteforce: bool,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Per-cell reveal-or-refine of `a` against `b`.
    Ror { a: String, b: String },
    /// Whether `a` dominates `b`.
    Dominates {
        a: String,
        b: String,
        /// Restrict to additively separable utilities.
        #[arg(long = "as", conflicts_with = "nonrobust")]
        as_only: bool,
        /// Sufficient check for problems without auxiliary information.
        #[arg(long)]
        nonrobust: bool,
    },
    /// Search for a problem in which `b` is strictly more valuable than `a`.
    Falsify {
        a: String,
        b: String,
        #[arg(long, default_value = "uniform")]
        prior: String,
        #[arg(long, default_value_t = FalsifyConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = FalsifyConfig::default().budget)]
        budget: u64,
    },
    /// Draw a random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// First draw index.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Emit a JSON array of this many consecutive draws.
        #[arg(long)]
        count: Option<u64>,
        #[arg(long, default_value_t = GenConfig::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = GenConfig::default().max_periods)]
        max_periods: usize,
        #[arg(long, default_value_t = GenConfig::default().max_cells_per_period)]
        max_cells: usize,
        #[arg(long, default_value_t = GenConfig::default().max_actions_per_period)]
        max_actions: usize,
        #[arg(long, default_value_t = GenConfig::default().denominator_bound)]
        denominator_bound: u32,
    },
    /// Draw a dynamic signal as SVG.
    Render {
        input: String,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// The bundled two-period example with its experiment table.
    DemoExample1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Signal,
    Dynamic,
    Problem,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Invalid(_)
        | Error::StateSpaceMismatch { .. }
        | Error::HorizonMismatch { .. }
        | Error::Precondition(_)
        | Error::BudgetExceeded { .. } => 2,
        Error::UnknownCell(_) | Error::UnknownState(_) | Error::Schema(_) | Error::Json(_) | Error::Io(_) => 3,
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_text(&mut self, path: &str) -> Result<String> {
        if path == "-" {
            if self.stdin_used {
                return Err(Error::Schema("standard input can be read only once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            Ok(fs::read_to_string(path)?)
        }
    }

    fn read_json(&mut self, path: &str) -> Result<Value> {
        Ok(serde_json::from_str(&self.read_text(path)?)?)
    }

    /// Parses and validates a signal document.
    fn document(&mut self, path: &str) -> Result<Document> {
        let doc = parse_document(&self.read_json(path)?)?;
        match &doc {
            Document::Static(s) => validate(s)?,
            Document::Dynamic(d) => validate_dynamic(d)?,
        }
        Ok(doc)
    }

    fn dynamic(&mut self, path: &str) -> Result<DynamicSignal> {
        Ok(self.document(path)?.into_dynamic())
    }

    fn prior(&mut self, arg: &str, states: &StateSpace) -> Result<Prior> {
        let t = arg.trim();
        if t == "uniform" || t.starts_with('{') {
            parse_prior(t, states)
        } else {
            let text = self.read_text(arg)?;
            parse_prior(&text, states)
        }
    }

    fn emit<T: Serialize>(&mut self, v: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut *self.out, v)?;
        writeln!(self.out)?;
        Ok(())
    }
}

fn summary_lines(report: &DominanceReport) -> Vec<String> {
    report
        .per_period
        .iter()
        .flat_map(|p| p.report.cells.iter().map(move |c| format!("period {}: {c}", p.period)))
        .collect()
}

fn execute(cli: Cli, io: &mut Io<'_>) -> Result<i32> {
    let decimal = cli.decimal;
    match cli.command {
        Command::Validate { input } => {
            let doc = parse_document(&io.read_json(&input)?)?;
            let (kind, check) = match &doc {
                Document::Static(s) => ("signal", validate(s)),
                Document::Dynamic(d) => ("dynamic", validate_dynamic(d)),
            };
            match check {
                Ok(()) => {
                    io.emit(&json!({"valid": true, "kind": kind}))?;
                    Ok(0)
                }
                Err(v) => {
                    io.emit(&json!({"valid": false, "kind": kind, "message": v.to_string(), "violation": v}))?;
                    Ok(2)
                }
            }
        }
        Command::Join { a, b } => {
            let (a, b) = (io.document(&a)?, io.document(&b)?);
            match (a, b) {
                (Document::Static(a), Document::Static(b)) => io.emit(&signal_to_doc(&join(&a, &b)?))?,
                (a, b) => io.emit(&dynamic_to_doc(&dynamic_join(&a.into_dynamic(), &b.into_dynamic())?))?,
            }
            Ok(0)
        }
        Command::Experiment { input, max_rows } => {
            let ds = io.dynamic(&input)?;
            io.emit(&experiment_to_doc(&to_experiment(&ds)?, max_rows, decimal))?;
            Ok(0)
        }
        Command::Value { signal, problem, prior, bruteforce, budget } => {
            let eta = io.dynamic(&signal)?;
            let doc: ProblemDoc = serde_json::from_value(io.read_json(&problem)?)?;
            let problem = problem_from_doc(&doc, Some(eta.states()))?;
            let prior = io.prior(&prior, eta.states())?;
            let result =
                if bruteforce { value_bruteforce(&eta, &problem, &prior, budget)? } else { value(&eta, &problem, &prior)? };
            io.emit(&result.report(&problem, decimal))?;
            Ok(0)
        }
        Command::Ror { a, b } => {
            let (a, b) = (io.document(&a)?, io.document(&b)?);
            let holds = match (a, b) {
                (Document::Static(a), Document::Static(b)) => {
                    let report = reveal_or_refines(&a, &b)?;
                    let summary: Vec<String> = report.cells.iter().map(ToString::to_string).collect();
                    io.emit(&json!({"verdict": report.holds, "cells": report.cells, "summary": summary}))?;
                    report.holds
                }
                (a, b) => {
                    let report = dynamic_reveal_or_refine(&a.into_dynamic(), &b.into_dynamic())?;
                    let mut v = serde_json::to_value(&report)?;
                    v["summary"] = json!(summary_lines(&report));
                    io.emit(&v)?;
                    report.verdict
                }
            };
            Ok(if holds { 0 } else { 1 })
        }
        Command::Dominates { a, b, as_only, nonrobust } => {
            let (a, b) = (io.dynamic(&a)?, io.dynamic(&b)?);
            let report = dynamic_reveal_or_refine(&a, &b)?;
            let (criterion, verdict) = if nonrobust {
                ("nonrobust-sufficient", dominates_sufficient(&a, &b)?)
            } else if as_only {
                ("as", strongly_dominates_as(&a, &b)?)
            } else {
                ("strong", report.verdict)
            };
            io.emit(&json!({
                "criterion": criterion,
                "verdict": verdict,
                "first_failure": report.first_failure,
                "summary": summary_lines(&report),
            }))?;
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Falsify { a, b, prior, seed, budget } => {
            let (a, b) = (io.dynamic(&a)?, io.dynamic(&b)?);
            let report = dynamic_reveal_or_refine(&a, &b)?;
            if report.verdict {
                io.emit(&json!({"status": "dominant", "summary": summary_lines(&report)}))?;
                return Ok(0);
            }
            let prior = io.prior(&prior, a.states())?;
            match falsify(&a, &b, &prior, FalsifyConfig { seed, budget })? {
                FalsifyOutcome::Found(cx) => {
                    let mut v = serde_json::to_value(counterexample_to_doc(&cx))?;
                    v["status"] = json!("counterexample");
                    if decimal {
                        v["w_dominant_decimal"] = json!(cx.w_dominant.to_decimal_string());
                        v["w_dominated_decimal"] = json!(cx.w_dominated.to_decimal_string());
                    }
                    io.emit(&v)?;
                    Ok(1)
                }
                FalsifyOutcome::NotFound { candidates } => {
                    io.emit(&json!({"status": "not-found", "candidates": candidates}))?;
                    Ok(0)
                }
            }
        }
        Command::Gen {
            kind,
            seed,
            index,
            count,
            max_states,
            max_periods,
            max_cells,
            max_actions,
            denominator_bound,
        } => {
            if max_states == 0 || max_periods == 0 || max_cells == 0 || max_actions == 0 || denominator_bound == 0 {
                return Err(Error::Schema("generator bounds must be positive".into()));
            }
            let cfg = GenConfig {
                seed,
                max_states,
                max_periods,
                max_cells_per_period: max_cells,
                max_actions_per_period: max_actions,
                denominator_bound,
                ..GenConfig::default()
            };
            let draw = |i: u64| -> Result<Value> {
                let mut g = Generator::for_draw(&cfg, i);
                let states = g.states();
                Ok(match kind {
                    Kind::Signal => serde_json::to_value(signal_to_doc(&g.signal_on(&states)))?,
                    Kind::Dynamic => {
                        let t = g.horizon();
                        serde_json::to_value(dynamic_to_doc(&g.dynamic_on(&states, t)))?
                    }
                    Kind::Problem => {
                        let t = g.horizon();
                        serde_json::to_value(problem_to_doc(&g.problem(t, &states)))?
                    }
                })
            };
            match count {
                None => io.emit(&draw(index)?)?,
                Some(n) => io.emit(&(index..index + n).map(draw).collect::<Result<Vec<_>>>()?)?,
            }
            Ok(0)
        }
        Command::Render { input, output } => {
            let svg = render_svg(&io.dynamic(&input)?);
            match output {
                Some(path) if path != "-" => fs::write(path, svg)?,
                _ => io.out.write_all(svg.as_bytes())?,
            }
            Ok(0)
        }
        Command::DemoExample1 => {
            let ds = fixtures::example1();
            let mut v = serde_json::to_value(dynamic_to_doc(&ds))?;
            v["experiment"] = serde_json::to_value(experiment_to_doc(&to_experiment(&ds)?, u128::MAX, decimal))?;
            io.emit(&v)?;
            Ok(0)
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { stdin, stdin_used: false, out: stdout };
    match execute(cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("dynror").chain(args.iter().copied());
        let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn demo_feeds_experiment() {
        let (code, demo, _) = call(&["demo-example1"], "");
        assert_eq!(code, 0);
        let (code, out, _) = call(&["experiment", "-"], &demo);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["table"].as_array().unwrap().len(), 12);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["validate", "/nonexistent.json"], "").0, 3);
        assert_eq!(call(&["validate", "-"], "{not json").0, 3);
        let overlap = r#"{"states":["a"],"cells":[{"id":"x","sections":{"a":[["0","1"]]}},
            {"id":"y","sections":{"a":[["1/2","1"]]}}]}"#;
        assert_eq!(call(&["validate", "-"], overlap).0, 2);
        assert_eq!(call(&["ror", "-", "-"], overlap).0, 2);
        assert_eq!(call(&["bogus"], "").0, 3);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn gen_respects_count() {
        let (code, out, _) = call(&["gen", "--kind", "signal", "--seed", "3", "--count", "4"], "");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 4);
        assert_eq!(call(&["gen", "--kind", "signal", "--max-cells", "0"], "").0, 3);
    }
}
