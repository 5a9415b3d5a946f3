//! Instance files and density dumps.
//!
//! JSON: `{"M": 2, "B": 5, "G": 8, "days": [2, 10]}`.
//! CSV: one row per agent with a column named `N`; the parameters come from
//! elsewhere (the command line).

use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{Instance, ProblemParams};
use crate::randomized::ThresholdDensity;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(rename = "M")]
    m: u32,
    #[serde(rename = "B")]
    b: u32,
    #[serde(rename = "G")]
    g: u32,
    days: Vec<u32>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn check_days(days: &[u32], field: impl Fn(usize) -> String) -> Result<()> {
    if days.is_empty() {
        return Err(parse_err("days", "no agents"));
    }
    for (i, &d) in days.iter().enumerate() {
        if d == 0 {
            return Err(parse_err(field(i), "active days must be at least 1"));
        }
        if i > 0 && days[i - 1] > d {
            return Err(parse_err(
                field(i),
                format!("days must be sorted ascending ({} before {d})", days[i - 1]),
            ));
        }
    }
    Ok(())
}

pub fn parse_instance_json(text: &str) -> Result<(ProblemParams, Instance)> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let params = ProblemParams::new(file.m, file.b, file.g)?;
    check_days(&file.days, |i| format!("days[{i}]"))?;
    let instance = Instance::for_params(&params, file.days)?;
    Ok((params, instance))
}

pub fn parse_instance_csv<R: Read>(reader: R, params: &ProblemParams) -> Result<Instance> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err("line 1", e.to_string()))?
        .clone();
    let col = headers
        .iter()
        .position(|h| h == "N")
        .ok_or_else(|| parse_err("line 1", "missing column \"N\""))?;
    let mut days = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(format!("line {line}"), e.to_string()))?;
        let raw = rec.get(col).unwrap_or("");
        let d: u32 = raw.parse().map_err(|_| {
            parse_err(
                format!("line {line}, field N"),
                format!("not a positive integer: {raw:?}"),
            )
        })?;
        days.push(d);
    }
    check_days(&days, |i| format!("line {}, field N", i + 2))?;
    Instance::for_params(params, days)
}

/// Reads a `.json` or `.csv` instance; CSV files need `params`.
pub fn read_instance(path: &Path, params: Option<ProblemParams>) -> Result<(ProblemParams, Instance)> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let params =
            params.ok_or_else(|| Error::InvalidArgument("CSV instances need --params M,B,G".into()))?;
        Ok((params, parse_instance_csv(text.as_bytes(), &params)?))
    } else {
        let (p, i) = parse_instance_json(&text)?;
        if let Some(given) = params {
            if given != p {
                return Err(Error::InvalidArgument(
                    "--params disagrees with the parameters in the instance file".into(),
                ));
            }
        }
        Ok((p, i))
    }
}

/// `day,mass,kind,ell,T` rows.
pub fn write_density_csv<W: Write>(out: W, density: &ThresholdDensity) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["day", "mass", "kind", "ell", "T"]).map_err(io)?;
    for (day, mass) in density.iter() {
        w.write_record([
            day.to_string(),
            format!("{mass:.12}"),
            density.kind.label().to_string(),
            density.ell.to_string(),
            format!("{}", density.threshold),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
