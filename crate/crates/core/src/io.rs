//! Two-group CSV ingest and export.
//!
//! The format is a headered CSV with columns `group,value`. The first group
//! label that appears becomes group 1, the second becomes group 2.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::ttest::TwoSampleData;

/// Labels written by [`write_two_group_csv`].
pub const GROUP_LABELS: [&str; 2] = ["group1", "group2"];

pub fn read_two_group_csv<R: Read>(reader: R) -> Result<TwoSampleData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(|e| Error::MalformedInput {
        line: 1,
        message: e.to_string(),
    })?;
    let names: Vec<&str> = headers.iter().collect();
    if names != ["group", "value"] {
        return Err(Error::MalformedInput {
            line: 1,
            message: format!("expected header `group,value`, found `{}`", names.join(",")),
        });
    }

    let mut labels: Vec<String> = Vec::new();
    let mut groups: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for record in rdr.records() {
        let record = record.map_err(|e| Error::MalformedInput {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::MalformedInput {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let label = &record[0];
        let value: f64 = record[1].parse().map_err(|_| Error::MalformedInput {
            line,
            message: format!("`{}` is not a number", &record[1]),
        })?;
        if !value.is_finite() {
            return Err(Error::MalformedInput {
                line,
                message: format!("value `{}` is not finite", &record[1]),
            });
        }
        let idx = match labels.iter().position(|l| l == label) {
            Some(i) => i,
            None if labels.len() < 2 => {
                labels.push(label.to_string());
                labels.len() - 1
            }
            None => {
                return Err(Error::MalformedInput {
                    line,
                    message: format!("third group label `{label}`; only two groups are supported"),
                })
            }
        };
        groups[idx].push(value);
    }
    if labels.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "input has {} group(s); two are required",
            labels.len()
        )));
    }
    let [g1, g2] = groups;
    TwoSampleData::new(g1, g2)
}

pub fn read_two_group_file(path: &Path) -> Result<TwoSampleData> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(format!("cannot open {}: {e}", path.display())))?;
    read_two_group_csv(std::io::BufReader::new(file))
}

/// Writes `group,value` rows, group 1 first. Values use the shortest
/// representation that round-trips.
pub fn write_two_group_csv<W: Write>(data: &TwoSampleData, mut out: W) -> Result<()> {
    writeln!(out, "group,value")?;
    for (label, group) in GROUP_LABELS.iter().zip([data.group1(), data.group2()]) {
        for v in group {
            writeln!(out, "{label},{}", crate::report::csv_number(*v))?;
        }
    }
    out.flush()?;
    Ok(())
}
