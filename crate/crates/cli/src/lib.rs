//! Command-line front end: argument parsing, dispatch to the core library
//! and JSON reports.

pub mod acceptance;
pub mod args;
pub mod commands;
pub mod report;

use serde_json::Value;

use crate::acceptance::{run_suite_with, CriterionReport, SuiteOptions};
use crate::args::{Cli, Command};
use crate::report::{Envelope, ErrorInfo, SCHEMA_VERSION};

/// Exit status and JSON report of one invocation.
pub struct Outcome {
    pub code: i32,
    pub report: Envelope,
}

fn config_of(cli: &Cli) -> Value {
    let mut config = serde_json::to_value(&cli.command).expect("arguments serialize");
    if let Value::Object(map) = &mut config {
        map.insert("threads".into(), serde_json::to_value(cli.threads).expect("serializes"));
    }
    config
}

/// Execute a parsed command line. `progress` receives each acceptance
/// criterion as it finishes.
pub fn run_with(cli: &Cli, progress: impl FnMut(&CriterionReport)) -> Outcome {
    let config = config_of(cli);
    let command = cli.command.name();
    let result = match &cli.command {
        Command::Zcan(a) => commands::zcan(a),
        Command::Zgc(a) => commands::zgc(a),
        Command::Zmulti(a) => commands::zmulti(a),
        Command::Cylprob(a) => commands::cylprob(a),
        Command::McVerify(a) => commands::mc_verify(a, cli.threads),
        Command::Acceptance(a) => {
            let opts = SuiteOptions {
                suite: a.only,
                criteria: a.criteria.clone(),
                seed: a.seed,
                inject_perturbation: a.inject_perturbation,
                threads: cli.threads,
            };
            let suite = run_suite_with(&opts, progress);
            let code = if suite.all_passed { 0 } else { 1 };
            return Outcome {
                code,
                report: Envelope {
                    schema_version: SCHEMA_VERSION,
                    command,
                    config,
                    result: Some(serde_json::to_value(&suite).expect("report serializes")),
                    error: None,
                },
            };
        }
    };
    match result {
        Ok(value) => Outcome {
            code: 0,
            report: Envelope {
                schema_version: SCHEMA_VERSION,
                command,
                config,
                result: Some(value),
                error: None,
            },
        },
        Err(e) => Outcome {
            code: 1,
            report: Envelope {
                schema_version: SCHEMA_VERSION,
                command,
                config,
                result: None,
                error: Some(ErrorInfo::from(&e)),
            },
        },
    }
}

pub fn run(cli: &Cli) -> Outcome {
    run_with(cli, |_| {})
}
