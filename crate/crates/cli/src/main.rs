//! Command-line driver: model verification suites, worked-model reports,
//! and identity-file checking. Exit codes: 0 all checks pass, 1 a
//! verification failed, 2 parse or input error. Stdout carries the report;
//! stderr only carries usage and input errors.

use braidgauge::fixtures;
use braidgauge::model::{parse_model, Model};
use braidgauge::report::{
    anyonic_report, composite_from_model, composite_report, parse_anyonic_params,
    parse_composite_params,
};
use braidgauge::suites::{run_suites, Suite};
use braidgauge::tangle::run_identity_file;
use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "braidgauge", version, about = "Exact gauge theory with braided structure groups", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites against a model file.
    Verify {
        /// Model file path or builtin name (anyonic.model, nline.model).
        #[arg(long)]
        model: String,
        /// algebra | hopf | comodule | principal | connection | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        output: Output,
    },
    /// Reports for the worked models.
    Report {
        #[command(subcommand)]
        which: ReportKind,
    },
    /// Check every identity in a wiring file against a model environment.
    Tangle {
        /// Identity file path or builtin name (hopf.tgl, comodule.tgl,
        /// yangbaxter.tgl).
        file: String,
        /// Model file path or builtin name for the environment.
        #[arg(long, default_value = "anyonic.model")]
        model: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum ReportKind {
    /// The reference model: one anyonic line over another.
    Anyonic {
        /// Comma-separated k=v scalar assignments:
        /// a1,a2,b1,b2,c1,c2,s0,s1,s2.
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// The composite base with a commutative degree-0 factor.
    Composite {
        /// Factor model file path or builtin name (defaults to the dual
        /// numbers).
        #[arg(long, default_value = "nline.model")]
        model: String,
        /// Comma-separated k=v assignments: A1,A2,a1,a2,b1,b2 (tensor
        /// term-lists), c1,c2,s0,s1,s2,a,b (factor term-lists).
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

impl Output {
    fn emit(&self, text: &str) -> Result<(), String> {
        match &self.out {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        }
    }
}

fn load_text(name: &str) -> Result<String, String> {
    if let Some(text) = fixtures::builtin(name) {
        return Ok(text.to_string());
    }
    std::fs::read_to_string(name).map_err(|e| format!("{name}: {e}"))
}

fn load_model(name: &str) -> Result<Model, String> {
    let text = load_text(name)?;
    parse_model(&text).map_err(|e| format!("{name}: {e}"))
}

fn parse_pairs(params: &Option<String>) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    if let Some(text) = params {
        for item in text.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("bad parameter '{item}', expected k=v"))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    Ok(out)
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn run() -> Result<u8, (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            model,
            suite,
            output,
        } => {
            let suite = Suite::parse(&suite)
                .ok_or_else(|| (EXIT_INPUT, format!("unknown suite '{suite}'")))?;
            let model = load_model(&model).map_err(|e| (EXIT_INPUT, e))?;
            let result = run_suites(&model, suite);
            output.emit(&result.text).map_err(|e| (EXIT_INPUT, e))?;
            Ok(if result.ok { 0 } else { EXIT_FAIL })
        }
        Command::Report { which } => match which {
            ReportKind::Anyonic { params, output } => {
                let pairs = parse_pairs(&params).map_err(|e| (EXIT_INPUT, e))?;
                let params = parse_anyonic_params(&pairs).map_err(|e| (EXIT_INPUT, e))?;
                let report = anyonic_report(&params);
                output.emit(&report.text).map_err(|e| (EXIT_INPUT, e))?;
                Ok(if report.ok { 0 } else { EXIT_FAIL })
            }
            ReportKind::Composite {
                model,
                params,
                output,
            } => {
                let parsed = load_model(&model).map_err(|e| (EXIT_INPUT, e))?;
                let composite = composite_from_model(&parsed).map_err(|e| (EXIT_INPUT, e))?;
                let pairs = parse_pairs(&params).map_err(|e| (EXIT_INPUT, e))?;
                let params =
                    parse_composite_params(&composite, &pairs).map_err(|e| (EXIT_INPUT, e))?;
                let report = composite_report(&composite, &params);
                output.emit(&report.text).map_err(|e| (EXIT_INPUT, e))?;
                Ok(if report.ok { 0 } else { EXIT_FAIL })
            }
        },
        Command::Tangle {
            file,
            model,
            output,
        } => {
            let text = load_text(&file).map_err(|e| (EXIT_INPUT, e))?;
            let model = load_model(&model).map_err(|e| (EXIT_INPUT, e))?;
            let env = model.tangle_env();
            let outcomes =
                run_identity_file(&text, &env).map_err(|e| (EXIT_INPUT, e.to_string()))?;
            let mut rendered = String::new();
            let mut ok = true;
            for o in &outcomes {
                match &o.witness {
                    None => rendered.push_str(&format!("line {}: pass  {}\n", o.line, o.text)),
                    Some(w) => {
                        ok = false;
                        rendered.push_str(&format!(
                            "line {}: FAIL at {}  {}\n",
                            o.line, w, o.text
                        ));
                    }
                }
            }
            rendered.push_str(&format!(
                "{} checks, {}\n",
                outcomes.len(),
                if ok { "all pass" } else { "failures found" }
            ));
            output.emit(&rendered).map_err(|e| (EXIT_INPUT, e))?;
            Ok(if ok { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
