//! Sweep CSV files: a `# config: {...}` line, a header, then one row per
//! grid point. Rationals are written as `p/q`; absent values are empty.

use std::str::FromStr;

use translen_core::bounds::SweepRow;
use translen_core::rational::{format_ratio, parse_ratio, to_f64, Rational};

use crate::CliError;

const CONFIG_PREFIX: &str = "# config: ";

pub fn write_sweep(config: &serde_json::Value, rows: &[SweepRow]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(SweepRow::HEADER).map_err(io_failure)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for row in rows {
        writer
            .write_record([
                opt(row.g.map(|v| v.to_string())),
                opt(row.n.map(|v| v.to_string())),
                row.chi.to_string(),
                row.alpha_c.to_string(),
                opt(row.k_iterate.map(|v| v.to_string())),
                opt(row.lower.as_ref().map(format_ratio)),
                opt(row.upper_fixed_genus.as_ref().map(format_ratio)),
                opt(row.upper_penner.as_ref().map(format_ratio)),
                row.m.to_string(),
                row.r.to_string(),
            ])
            .map_err(io_failure)?;
    }
    let body = writer.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(format!("{CONFIG_PREFIX}{config}\n{body}"))
}

fn io_failure(e: csv::Error) -> CliError {
    CliError::Failure(e.to_string())
}

/// A parsed CSV: the echoed config (if any), header and raw cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub config: Option<serde_json::Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Result<usize, CliError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Input(format!("column {name:?} not in header {:?}", self.header)))
    }
}

pub fn read_table(text: &str) -> Result<Table, CliError> {
    let mut config = None;
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some(json) = line.strip_prefix(CONFIG_PREFIX) {
            config = Some(
                serde_json::from_str(json).map_err(|e| CliError::Input(format!("config line is not JSON: {e}")))?,
            );
        }
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> =
        reader.headers().map_err(input_error)?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()).map_err(input_error))
        .collect::<Result<Vec<Vec<String>>, _>>()?;
    Ok(Table { config, header, rows })
}

fn input_error(e: csv::Error) -> CliError {
    CliError::Input(format!("malformed CSV: {e}"))
}

fn cell<T: FromStr>(raw: &str, name: &str) -> Result<Option<T>, CliError> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse()
        .map(Some)
        .map_err(|_| CliError::Input(format!("column {name}: cannot parse {raw:?}")))
}

fn required<T: FromStr>(raw: &str, name: &str) -> Result<T, CliError> {
    cell(raw, name)?.ok_or_else(|| CliError::Input(format!("column {name} is empty")))
}

fn rational(raw: &str, name: &str) -> Result<Option<Rational>, CliError> {
    if raw.is_empty() {
        return Ok(None);
    }
    parse_ratio(raw).map(Some).map_err(|e| CliError::Input(format!("column {name}: {e}")))
}

/// Parses a sweep CSV back into rows.
pub fn read_sweep(text: &str) -> Result<(Option<serde_json::Value>, Vec<SweepRow>), CliError> {
    let table = read_table(text)?;
    if table.header != SweepRow::HEADER {
        return Err(CliError::Input(format!("unexpected sweep header {:?}", table.header)));
    }
    let rows = table
        .rows
        .iter()
        .map(|c| {
            if c.len() != SweepRow::HEADER.len() {
                return Err(CliError::Input(format!("row has {} cells", c.len())));
            }
            Ok(SweepRow {
                g: cell(&c[0], "g")?,
                n: cell(&c[1], "n")?,
                chi: required(&c[2], "chi")?,
                alpha_c: required(&c[3], "alpha_c")?,
                k_iterate: cell(&c[4], "k_iterate")?,
                lower: rational(&c[5], "lower")?,
                upper_fixed_genus: rational(&c[6], "upper_fixed_genus")?,
                upper_penner: rational(&c[7], "upper_penner")?,
                m: required(&c[8], "m")?,
                r: required(&c[9], "r")?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((table.config, rows))
}

/// `(x, y)` points from two named columns. Rows with an empty cell in either
/// column are skipped; every other cell must parse as a rational. `chi` is
/// taken by absolute value so it can sit on a log axis.
pub fn points(table: &Table, x: &str, y: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let (xi, yi) = (table.column(x)?, table.column(y)?);
    let value = |raw: &str, name: &str| -> Result<Option<f64>, CliError> {
        Ok(rational(raw, name)?.map(|q| {
            let v = to_f64(&q);
            if name == "chi" {
                v.abs()
            } else {
                v
            }
        }))
    };
    let mut out = Vec::new();
    for row in &table.rows {
        if let (Some(a), Some(b)) = (value(&row[xi], x)?, value(&row[yi], y)?) {
            out.push((a, b));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use translen_core::rational::ratio;

    fn sample() -> Vec<SweepRow> {
        vec![
            SweepRow {
                g: Some(5),
                n: Some(4),
                chi: -12,
                alpha_c: 1,
                k_iterate: Some(428),
                lower: Some(ratio(1, 428)),
                upper_fixed_genus: Some(ratio(1, 2)),
                upper_penner: Some(ratio(1, 4)),
                m: 4,
                r: 1,
            },
            SweepRow {
                g: None,
                n: None,
                chi: -15,
                alpha_c: 1,
                k_iterate: None,
                lower: None,
                upper_fixed_genus: None,
                upper_penner: Some(ratio(1, 5)),
                m: 5,
                r: 2,
            },
        ]
    }

    #[test]
    fn round_trip() {
        let config = serde_json::json!({"command": "penner sweep", "r": 1});
        let text = write_sweep(&config, &sample()).unwrap();
        assert!(text.starts_with("# config: {"));
        let (back_config, rows) = read_sweep(&text).unwrap();
        assert_eq!(back_config, Some(config.clone()));
        assert_eq!(rows, sample());
        assert_eq!(write_sweep(&config, &rows).unwrap(), text);
    }

    #[test]
    fn points_skip_empty_cells() {
        let text = write_sweep(&serde_json::json!({}), &sample()).unwrap();
        let table = read_table(&text).unwrap();
        assert_eq!(points(&table, "m", "upper_penner").unwrap(), vec![(4.0, 0.25), (5.0, 0.2)]);
        assert_eq!(points(&table, "chi", "lower").unwrap(), vec![(12.0, 1.0 / 428.0)]);
        assert!(points(&table, "nope", "lower").is_err());
    }

    #[test]
    fn malformed_rows_are_input_errors() {
        let bad = "g,n\n1,x\n";
        assert!(matches!(read_sweep(bad), Err(CliError::Input(_))));
    }
}
