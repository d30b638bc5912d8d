//! Scenario files for the `simulate` subcommand.

use std::fmt::Write as _;
use std::path::Path;

use ordinal_latent::confsets::CsMethod;
use ordinal_latent::harness::{
    coverage_study, coverage_study_design, negative_control, size_study, verify_identification, verify_random,
    LatentScenario, OrdinalDesign, TestKind, Theorem,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::CliError;

fn default_step() -> f64 {
    0.001
}

fn default_draws() -> usize {
    20_000
}

fn default_alpha() -> f64 {
    0.05
}

/// One study in a scenario file.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "study", rename_all = "snake_case", deny_unknown_fields)]
pub enum Study {
    Identification {
        scenario: LatentScenario,
        theorem: Theorem,
        #[serde(default = "default_step")]
        step: f64,
    },
    RandomIdentification {
        theorem: Theorem,
        count: usize,
        seed: u64,
        #[serde(default = "default_step")]
        step: f64,
    },
    NegativeControl {
        theorem: Theorem,
        #[serde(default = "default_step")]
        step: f64,
    },
    Coverage {
        scenario: LatentScenario,
        method: CsMethod,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_draws")]
        draws: usize,
    },
    CoverageDesign {
        design: OrdinalDesign,
        method: CsMethod,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_draws")]
        draws: usize,
        replications: usize,
        seed: u64,
    },
    Size {
        design: OrdinalDesign,
        test: TestKind,
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_draws")]
        draws: usize,
        replications: usize,
        seed: u64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ScenarioFile {
    Many { studies: Vec<Study> },
    One(Study),
}

/// Returns (parameters, result, human text, TSV summary).
pub fn run(path: &Path) -> Result<(Value, Value, String, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: ScenarioFile =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let studies = match file {
        ScenarioFile::Many { studies } => studies,
        ScenarioFile::One(s) => vec![s],
    };
    let mut results = Vec::new();
    let mut human = String::new();
    let mut tsv = String::from("study\tindex\tvalue\tmc_se\n");
    for (i, s) in studies.iter().enumerate() {
        let (name, value, metric, se) = run_study(s)?;
        let _ = writeln!(human, "[{i}] {name}: {metric:.4}{}", se.map(|s| format!(" (MC se {s:.4})")).unwrap_or_default());
        let _ = writeln!(tsv, "{name}\t{i}\t{metric}\t{}", se.map(|s| s.to_string()).unwrap_or_default());
        results.push(json!({ "study": name, "outcome": value }));
    }
    Ok((json!({ "scenario_file": path.display().to_string() }), json!(results), human, tsv))
}

/// (name, JSON outcome, headline metric, its MC standard error)
fn run_study(s: &Study) -> Result<(&'static str, Value, f64, Option<f64>), CliError> {
    Ok(match s {
        Study::Identification { scenario, theorem, step } => {
            let v = verify_identification(scenario, *theorem, *step)?;
            ("identification", json!(v), v.violations as f64, None)
        }
        Study::RandomIdentification { theorem, count, seed, step } => {
            let v = verify_random(*theorem, *count, *seed, *step)?;
            ("random_identification", json!(v), v.total.violations as f64, None)
        }
        Study::NegativeControl { theorem, step } => {
            let v = verify_identification(&negative_control(*theorem), *theorem, *step)?;
            ("negative_control", json!(v), v.violations as f64, None)
        }
        Study::Coverage { scenario, method, alpha, draws } => {
            let c = coverage_study(scenario, *method, *alpha, *draws)?;
            ("coverage", json!(c), c.coverage, Some(c.mc_se))
        }
        Study::CoverageDesign { design, method, alpha, draws, replications, seed } => {
            let c = coverage_study_design(design, *method, *alpha, *draws, *replications, *seed)?;
            ("coverage", json!(c), c.coverage, Some(c.mc_se))
        }
        Study::Size { design, test, alpha, draws, replications, seed } => {
            let c = size_study(design, *test, *alpha, *draws, *replications, *seed)?;
            ("size", json!(c), c.rate, Some(c.mc_se))
        }
    })
}
