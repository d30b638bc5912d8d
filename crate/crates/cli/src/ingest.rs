//! CSV ingestion: raw per-respondent rows or tabulated counts.

use std::collections::BTreeMap;
use std::path::Path;

use ordinal_latent::{merge_categories, MergeSpec, OrdinalSample};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::InputArgs;
use crate::CliError;

pub const TABLE_HEADER: [&str; 3] = ["category", "count_x", "count_y"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    Raw,
    Tabulated,
}

/// What ingestion produced, plus bookkeeping for the report.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub x: OrdinalSample,
    pub y: OrdinalSample,
    pub format: InputFormat,
    pub sha256: String,
    /// Rows dropped for a missing or unparseable category or weight.
    pub skipped_rows: usize,
    /// Original category codes, before any merge, in order.
    pub source_categories: Vec<i64>,
}

pub fn ingest(args: &InputArgs) -> Result<Ingested, CliError> {
    let bytes = std::fs::read(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes.as_slice());
    let headers = rdr.headers().map_err(|e| CliError::Input(format!("reading CSV header: {e}")))?.clone();
    let tabulated = headers.iter().eq(TABLE_HEADER);
    let mut out = if tabulated {
        if args.x.is_some() || args.y.is_some() || args.weight_col.is_some() {
            return Err(CliError::Input("--x, --y and --weight-col apply to raw input only".into()));
        }
        read_table(&mut rdr)?
    } else {
        read_raw(&mut rdr, &headers, args)?
    };
    out.sha256 = sha256;
    if let Some(spec) = &args.merge {
        let spec: MergeSpec = spec.parse()?;
        out.x = merge_categories(&out.x, &spec)?;
        out.y = merge_categories(&out.y, &spec)?;
    }
    Ok(out)
}

fn read_table(rdr: &mut csv::Reader<&[u8]>) -> Result<Ingested, CliError> {
    let mut cats = Vec::new();
    let (mut cx, mut cy) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(format!("row {}: {e}", line + 2)))?;
        let num = |i: usize, what: &str| -> Result<f64, CliError> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| CliError::Input(format!("row {}: invalid {what} {:?}", line + 2, &rec[i])))
        };
        let cat: i64 = rec[0]
            .parse()
            .map_err(|_| CliError::Input(format!("row {}: category {:?} is not an integer", line + 2, &rec[0])))?;
        cats.push(cat);
        cx.push(num(1, "count_x")?);
        cy.push(num(2, "count_y")?);
    }
    if cats.iter().enumerate().any(|(i, c)| *c != i as i64 + 1) {
        return Err(CliError::Input("tabulated categories must be 1, 2, ..., J in order".into()));
    }
    Ok(Ingested {
        x: OrdinalSample::from_counts("x", cx)?,
        y: OrdinalSample::from_counts("y", cy)?,
        format: InputFormat::Tabulated,
        sha256: String::new(),
        skipped_rows: 0,
        source_categories: cats,
    })
}

#[derive(Default)]
struct GroupAcc {
    counts: BTreeMap<i64, f64>,
    rows: u64,
    wsq: f64,
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize, CliError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Input(format!("missing column {name:?}")))
}

fn read_raw(
    rdr: &mut csv::Reader<&[u8]>,
    headers: &csv::StringRecord,
    args: &InputArgs,
) -> Result<Ingested, CliError> {
    let (Some(xl), Some(yl)) = (&args.x, &args.y) else {
        return Err(CliError::Input("raw input needs --x and --y group labels".into()));
    };
    if xl == yl {
        return Err(CliError::Input("--x and --y must name different groups".into()));
    }
    let gcol = column(headers, &args.group_col)?;
    let ccol = column(headers, &args.category_col)?;
    let wcol = args.weight_col.as_deref().map(|w| column(headers, w)).transpose()?;
    let mut groups = [GroupAcc::default(), GroupAcc::default()];
    let mut skipped = 0;
    for (line, rec) in rdr.records().enumerate() {
        let row = line + 2;
        let rec = rec.map_err(|e| CliError::Input(format!("row {row}: {e}")))?;
        let g = match rec.get(gcol) {
            Some(v) if v == xl => 0,
            Some(v) if v == yl => 1,
            _ => continue,
        };
        let Ok(cat) = rec.get(ccol).unwrap_or("").parse::<i64>() else {
            skipped += 1;
            continue;
        };
        if let Some(j) = args.levels {
            if cat < 1 || cat > j as i64 {
                return Err(CliError::Input(format!("row {row}: category {cat} outside 1..={j}")));
            }
        }
        let w = match wcol {
            None => 1.0,
            Some(i) => {
                let raw = rec.get(i).unwrap_or("");
                if raw.is_empty() {
                    skipped += 1;
                    continue;
                }
                match raw.parse::<f64>() {
                    Ok(w) if w.is_finite() && w >= 0.0 => w,
                    _ => return Err(CliError::Input(format!("row {row}: non-numeric or negative weight {raw:?}"))),
                }
            }
        };
        let acc = &mut groups[g];
        *acc.counts.entry(cat).or_insert(0.0) += w;
        acc.rows += 1;
        acc.wsq += w * w;
    }
    for (acc, label) in groups.iter().zip([xl, yl]) {
        if acc.rows == 0 {
            return Err(CliError::Input(format!("group {label:?} has no usable rows")));
        }
    }
    let cats: Vec<i64> = match args.levels {
        Some(j) => (1..=j as i64).collect(),
        None => {
            let seen: std::collections::BTreeSet<i64> =
                groups.iter().flat_map(|g| g.counts.keys().copied()).collect();
            let (lo, hi) = (*seen.first().unwrap(), *seen.last().unwrap());
            if (hi - lo + 1) as usize != seen.len() {
                return Err(CliError::Input(format!(
                    "observed categories {seen:?} are not consecutive; declare them with --levels"
                )));
            }
            (lo..=hi).collect()
        }
    };
    let build = |acc: &GroupAcc, label: &str| -> Result<OrdinalSample, CliError> {
        let counts: Vec<f64> = cats.iter().map(|c| acc.counts.get(c).copied().unwrap_or(0.0)).collect();
        Ok(if wcol.is_some() {
            OrdinalSample::weighted(label, counts, acc.rows, acc.wsq)?
        } else {
            OrdinalSample::new(label, counts, acc.rows)?
        })
    };
    Ok(Ingested {
        x: build(&groups[0], xl)?,
        y: build(&groups[1], yl)?,
        format: InputFormat::Raw,
        sha256: String::new(),
        skipped_rows: skipped,
        source_categories: cats,
    })
}

/// Writes a tabulated-counts CSV that [`ingest`] reads back.
pub fn write_table(path: &Path, x: &[f64], y: &[f64]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Input(e.to_string()))?;
    let io = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(TABLE_HEADER).map_err(io)?;
    for (i, (a, b)) in x.iter().zip(y).enumerate() {
        w.write_record([(i + 1).to_string(), a.to_string(), b.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
