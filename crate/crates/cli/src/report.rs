//! Dispatch and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use ordinal_latent::bayes::{bayes_decision, integer_counts, kish_scaled_counts, posterior_prob, Event, PosteriorConfig, Prior};
use ordinal_latent::confsets::{cs_between, cs_within_all, cs_within_fixed, ConfLimits};
use ordinal_latent::gauss::SimConfig;
use ordinal_latent::hypothesis::{test_nonsd1, test_sc, test_sd1, TestReport};
use ordinal_latent::identify::{between_set, single_crossing, within_all_set, within_pair_sets};
use ordinal_latent::{estimate_cdf, theta, OrdinalCdf, QuantileSet, RectSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, EventArg, InputArgs, PairArgs, PriorArg, SetKind, SimArgs, TestArg};
use crate::ingest::{ingest, InputFormat, Ingested};
use crate::{simulate, CliError};

pub const SCHEMA_VERSION: u32 = 1;
const INTERVAL_NOTE: &str = "every [lo, hi] pair denotes the half-open interval (lo, hi]";

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub format: InputFormat,
    pub x_label: String,
    pub y_label: String,
    pub n_raw_x: u64,
    pub n_raw_y: u64,
    pub effective_n_x: f64,
    pub effective_n_y: f64,
    pub weighted: bool,
    pub skipped_rows: usize,
    pub source_categories: Vec<i64>,
    pub merge: Option<String>,
}

/// Per-category table; `counts_*` re-ingest as tabulated input.
#[derive(Debug, Clone, Serialize)]
pub struct CdfTable {
    pub category: Vec<usize>,
    pub counts_x: Vec<f64>,
    pub counts_y: Vec<f64>,
    pub f_x: Vec<f64>,
    pub f_y: Vec<f64>,
    pub se_x: Vec<f64>,
    pub se_y: Vec<f64>,
}

/// Everything one invocation produces.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub generated_at: String,
    pub command: String,
    pub note: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cdf: Option<CdfTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    pub parameters: Value,
    pub warnings: Vec<String>,
    pub result: Value,
    #[serde(skip)]
    pub human: String,
    #[serde(skip)]
    json_path: Option<PathBuf>,
    #[serde(skip)]
    tsv: Option<(PathBuf, String)>,
}

impl Report {
    fn new(command: String, json_path: Option<PathBuf>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") },
            generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command,
            note: INTERVAL_NOTE,
            input: None,
            cdf: None,
            theta: None,
            parameters: Value::Null,
            warnings: Vec::new(),
            result: Value::Null,
            human: String::new(),
            json_path,
            tsv: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes the JSON report and any TSV export requested on the command line.
    pub fn emit_json(&self) -> Result<(), CliError> {
        if let Some((path, body)) = &self.tsv {
            std::fs::write(path, body).map_err(|e| CliError::io(path, e))?;
        }
        match &self.json_path {
            Some(p) if p.as_os_str() == "-" => println!("{}", self.to_json()),
            Some(p) => std::fs::write(p, self.to_json() + "\n").map_err(|e| CliError::io(p, e))?,
            None => {}
        }
        Ok(())
    }
}

pub fn qs_json(s: &QuantileSet) -> Value {
    json!(s.intervals().iter().map(|iv| [iv.lo(), iv.hi()]).collect::<Vec<_>>())
}

pub fn rects_json(s: &RectSet) -> Value {
    json!(s
        .rects()
        .iter()
        .map(|r| json!({ "x": [r.x.lo(), r.x.hi()], "y": [r.y.lo(), r.y.hi()] }))
        .collect::<Vec<_>>())
}

fn rects_text(s: &RectSet) -> String {
    if s.is_empty() {
        return "∅".into();
    }
    s.rects()
        .iter()
        .map(|r| format!("{} × {}", QuantileSet::from_interval(r.x).display(3), QuantileSet::from_interval(r.y).display(3)))
        .collect::<Vec<_>>()
        .join(" ∪ ")
}

struct Loaded {
    cx: OrdinalCdf,
    cy: OrdinalCdf,
    data: Ingested,
}

fn load(report: &mut Report, args: &InputArgs) -> Result<Loaded, CliError> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::Input(format!("--alpha {} outside (0, 1)", args.alpha)));
    }
    let data = ingest(args)?;
    let cx = estimate_cdf(&data.x)?;
    let cy = estimate_cdf(&data.y)?;
    let m = cx.categories() - 1;
    report.input = Some(InputInfo {
        path: args.input.display().to_string(),
        sha256: data.sha256.clone(),
        format: data.format,
        x_label: data.x.label().to_string(),
        y_label: data.y.label().to_string(),
        n_raw_x: data.x.n_raw(),
        n_raw_y: data.y.n_raw(),
        effective_n_x: data.x.effective_n(),
        effective_n_y: data.y.effective_n(),
        weighted: data.x.is_weighted(),
        skipped_rows: data.skipped_rows,
        source_categories: data.source_categories.clone(),
        merge: args.merge.clone(),
    });
    if data.skipped_rows > 0 {
        report.warnings.push(format!("skipped {} rows with a missing or unparseable category or weight", data.skipped_rows));
    }
    if data.x.is_weighted() {
        report.warnings.push("weighted data: standard errors use the Kish effective sample size".into());
    }
    report.cdf = Some(CdfTable {
        category: (1..=m + 1).collect(),
        counts_x: data.x.counts().to_vec(),
        counts_y: data.y.counts().to_vec(),
        f_x: (1..=m + 1).map(|j| cx.at(j)).collect(),
        f_y: (1..=m + 1).map(|j| cy.at(j)).collect(),
        se_x: (1..=m).map(|j| cx.std_error(j)).collect(),
        se_y: (1..=m).map(|j| cy.std_error(j)).collect(),
    });
    report.theta = Some(theta(&cx, &cy)?);
    let h = &mut report.human;
    let _ = writeln!(h, "X = {:?} (n = {}), Y = {:?} (n = {})", data.x.label(), data.x.n_raw(), data.y.label(), data.y.n_raw());
    Ok(Loaded { cx, cy, data })
}

fn pair(p: &PairArgs) -> Result<(usize, usize), CliError> {
    match (p.j, p.k) {
        (Some(j), Some(k)) => Ok((j, k)),
        _ => Err(CliError::Input("within-fixed needs --j and --k".into())),
    }
}

fn sim_config(s: &SimArgs) -> Result<SimConfig, CliError> {
    let cfg = SimConfig::new(s.draws, s.seed);
    cfg.validate()?;
    Ok(cfg)
}

fn limits_json(l: &ConfLimits) -> Value {
    json!({
        "critical": l.critical,
        "x_upper": l.x_upper, "x_lower": l.x_lower,
        "y_upper": l.y_upper, "y_lower": l.y_lower,
        "x_status": l.x_status, "y_status": l.y_status,
        "inverted_levels": l.inverted_levels,
    })
}

/// Runs one subcommand and assembles its report.
pub fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Estimate { input, tsv } => {
            let mut r = Report::new("estimate".into(), input.json.clone());
            load(&mut r, input)?;
            r.parameters = json!({});
            let table = r.cdf.as_ref().unwrap();
            let th = r.theta.as_ref().unwrap();
            r.result = json!({ "theta": th });
            let _ = writeln!(r.human, "{:>8} {:>10} {:>10} {:>10}", "category", "F_X", "F_Y", "theta");
            for j in 0..table.category.len() {
                let t = th.get(j).map(|v| format!("{v:.3}")).unwrap_or_default();
                let _ = writeln!(r.human, "{:>8} {:>10.3} {:>10.3} {:>10}", j + 1, table.f_x[j], table.f_y[j], t);
            }
            if let Some(path) = tsv {
                let mut body = String::from("category\tF_X\tF_Y\n");
                for j in 0..table.category.len() {
                    let _ = writeln!(body, "{}\t{}\t{}", j + 1, table.f_x[j], table.f_y[j]);
                }
                r.tsv = Some((path.clone(), body));
            }
            Ok(r)
        }
        Command::Identify { kind, input, pair: p } => {
            let mut r = Report::new(format!("identify {}", kind_name(*kind)), input.json.clone());
            let Loaded { cx, cy, .. } = load(&mut r, input)?;
            r.parameters = json!({ "j": p.j, "k": p.k });
            match kind {
                SetKind::Between => {
                    let s = between_set(&cx, &cy)?;
                    r.result = json!({ "set": qs_json(&s), "measure": s.measure() });
                    let _ = writeln!(r.human, "Q_X*(τ) > Q_Y*(τ) for τ in {}", s.display(3));
                }
                SetKind::WithinFixed => {
                    let (j, k) = pair(p)?;
                    let (a, b) = within_pair_sets(&cx, &cy, j, k)?;
                    r.result = json!({ "j": j, "k": k, "t_1": qs_json(&a), "t_2": qs_json(&b) });
                    let _ = writeln!(r.human, "smaller X* interquantile range for τ1 in {}, τ2 in {}", a.display(3), b.display(3));
                }
                SetKind::WithinAll => {
                    let s = within_all_set(&cx, &cy)?;
                    let m = single_crossing(&cx, &cy);
                    r.result = json!({ "single_crossing": m, "rects": rects_json(&s) });
                    let _ = writeln!(r.human, "single crossing after category: {}", m.map_or("none".into(), |m| m.to_string()));
                    let _ = writeln!(r.human, "smaller X* interquantile range on {}", rects_text(&s));
                }
            }
            Ok(r)
        }
        Command::Cs { kind, input, pair: p, sim } => {
            let mut r = Report::new(format!("cs {}", kind_name(*kind)), input.json.clone());
            let Loaded { cx, cy, .. } = load(&mut r, input)?;
            let cfg = sim_config(sim)?;
            r.parameters = json!({ "alpha": input.alpha, "seed": sim.seed, "draws": sim.draws, "j": p.j, "k": p.k });
            let a = input.alpha;
            match kind {
                SetKind::Between => {
                    let s = cs_between(&cx, &cy, a, &cfg)?;
                    r.result = json!({ "set": qs_json(&s.set), "limits": limits_json(&s.limits) });
                    let _ = writeln!(r.human, "{:.0}% inner confidence set: {}", 100.0 * (1.0 - a), s.set.display(3));
                    flag_inverted(&mut r, &s.limits);
                }
                SetKind::WithinFixed => {
                    let (j, k) = pair(p)?;
                    let s = cs_within_fixed(&cx, &cy, j, k, a, &cfg)?;
                    r.result = json!({ "j": j, "k": k, "rects": rects_json(&s.set), "limits": limits_json(&s.limits) });
                    let _ = writeln!(r.human, "{:.0}% inner confidence set: {}", 100.0 * (1.0 - a), rects_text(&s.set));
                    flag_inverted(&mut r, &s.limits);
                }
                SetKind::WithinAll => {
                    let s = cs_within_all(&cx, &cy, a, &cfg)?;
                    r.result = json!({ "rects": rects_json(&s.set), "limits": limits_json(&s.limits) });
                    let _ = writeln!(r.human, "{:.0}% inner confidence set: {}", 100.0 * (1.0 - a), rects_text(&s.set));
                    flag_inverted(&mut r, &s.limits);
                }
            }
            Ok(r)
        }
        Command::Test { kind, input, sim } => {
            let name = match kind {
                TestArg::Sd1 => "sd1",
                TestArg::Nonsd1 => "nonsd1",
                TestArg::Sc => "sc",
            };
            let mut r = Report::new(format!("test {name}"), input.json.clone());
            let Loaded { cx, cy, .. } = load(&mut r, input)?;
            let cfg = sim_config(sim)?;
            let a = input.alpha;
            let t: TestReport = match kind {
                TestArg::Sd1 => test_sd1(&cx, &cy, a, &cfg)?,
                TestArg::Nonsd1 => test_nonsd1(&cx, &cy, a)?,
                TestArg::Sc => test_sc(&cx, &cy, a, &cfg)?,
            };
            r.parameters = match kind {
                TestArg::Nonsd1 => json!({ "alpha": a }),
                _ => json!({ "alpha": a, "seed": sim.seed, "draws": sim.draws }),
            };
            let null = match kind {
                TestArg::Sd1 => "X SD1 Y",
                TestArg::Nonsd1 => "X does not SD1 Y",
                TestArg::Sc => "no single crossing of the X and Y CDFs",
            };
            let _ = writeln!(
                r.human,
                "H0: {null}; statistic {:.3}, critical value {:.3}: {}",
                t.statistic,
                t.critical_value,
                if t.reject { "reject" } else { "do not reject" }
            );
            r.result = serde_json::to_value(&t).expect("test report serializes");
            Ok(r)
        }
        Command::Bayes { input, event, prior, draws, seed } => {
            let alpha = &input.alpha;
            let mut r = Report::new("bayes".into(), input.json.clone());
            let Loaded { data, .. } = load(&mut r, input)?;
            let (counts_x, counts_y) = if data.x.is_weighted() {
                r.warnings.push("weighted counts rescaled to the Kish effective sample size and rounded for the Dirichlet posterior".into());
                (kish_scaled_counts(&data.x), kish_scaled_counts(&data.y))
            } else {
                (integer_counts(&data.x)?, integer_counts(&data.y)?)
            };
            let ev = match event {
                EventArg::Sd1 => Event::Sd1Xy,
                EventArg::Sd1Yx => Event::Sd1Yx,
                EventArg::Sc => Event::ScXy,
                EventArg::ScYx => Event::ScYx,
            };
            let pr = match prior {
                PriorArg::Uniform => Prior::Uniform,
                PriorArg::Improper => Prior::Improper,
            };
            let cfg = PosteriorConfig { draws: *draws, seed: *seed, prior: pr };
            let p = posterior_prob(&counts_x, &counts_y, ev, &cfg)?;
            let decision = bayes_decision(p, *alpha);
            r.parameters = json!({ "alpha": alpha, "seed": seed, "draws": draws, "event": ev, "prior": pr });
            r.result = json!({
                "event": ev, "probability": p, "decision": decision,
                "counts_x": counts_x, "counts_y": counts_y,
            });
            let _ = writeln!(r.human, "posterior P({ev:?}) = {p:.3} ({decision:?})");
            Ok(r)
        }
        Command::Simulate { scenario, json, tsv } => {
            let mut r = Report::new("simulate".into(), json.clone());
            let (params, result, human, summary) = simulate::run(scenario)?;
            r.input = None;
            r.parameters = params;
            r.result = result;
            r.human = human;
            if let Some(p) = tsv {
                r.tsv = Some((p.clone(), summary));
            }
            Ok(r)
        }
    }
}

fn flag_inverted(r: &mut Report, l: &ConfLimits) {
    if l.inverted_levels {
        r.warnings.push("a simulated level fell below 1/2, so a normal multiplier is negative; limits are reported as computed".into());
    }
}

fn kind_name(k: SetKind) -> &'static str {
    match k {
        SetKind::Between => "between",
        SetKind::WithinFixed => "within-fixed",
        SetKind::WithinAll => "within-all",
    }
}
