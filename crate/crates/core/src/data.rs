//! Reading observations from text or CSV and writing statistic results.

use std::fmt::Write as _;
use std::path::Path;

use crate::distributions::Density;
use crate::error::{Error, Result};
use crate::gof_statistics::{SortedSample, StatisticResult};

/// One value with the (1-based) input line it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub line: u64,
    pub value: f64,
}

fn parse_value(field: &str, line: u64) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Validation(format!("line {line}: cannot parse `{}` as a number", field.trim())))
}

/// One number per line; blank lines and `#` comments are skipped. With
/// `column`, the text is read as CSV with a header row and that column used.
pub fn parse_observations(text: &str, column: Option<&str>) -> Result<Vec<Observation>> {
    let out = match column {
        None => text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("").trim();
                (!body.is_empty()).then(|| (i as u64 + 1, body))
            })
            .map(|(line, body)| parse_value(body, line).map(|value| Observation { line, value }))
            .collect::<Result<Vec<_>>>()?,
        Some(name) => {
            let mut rdr = csv::ReaderBuilder::new()
                .comment(Some(b'#'))
                .trim(csv::Trim::All)
                .from_reader(text.as_bytes());
            let headers = rdr.headers().map_err(csv_error)?.clone();
            let idx = headers.iter().position(|h| h == name).ok_or_else(|| {
                Error::Config(format!(
                    "no column `{name}`; available: {}",
                    headers.iter().collect::<Vec<_>>().join(", ")
                ))
            })?;
            let mut out = Vec::new();
            for rec in rdr.records() {
                let rec = rec.map_err(csv_error)?;
                let line = rec.position().map_or(0, |p| p.line());
                let field = rec
                    .get(idx)
                    .ok_or_else(|| Error::Validation(format!("line {line}: missing column `{name}`")))?;
                out.push(Observation {
                    line,
                    value: parse_value(field, line)?,
                });
            }
            out
        }
    };
    if out.is_empty() {
        return Err(Error::Validation("input contains no observations".into()));
    }
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Validation(format!("malformed CSV input: {e}"))
}

pub fn read_observations(path: &Path, column: Option<&str>) -> Result<Vec<Observation>> {
    let text = std::fs::read_to_string(path)?;
    parse_observations(&text, column)
}

/// Probability integral transform, reporting the input line of any value
/// outside the support.
pub fn pit_observations(obs: &[Observation], d: &dyn Density) -> Result<SortedSample> {
    let sup = d.support();
    let mut u = Vec::with_capacity(obs.len());
    for o in obs {
        if !o.value.is_finite() || !sup.contains(o.value) {
            return Err(Error::OutOfSupport {
                line: o.line,
                value: o.value,
                density: d.name().to_string(),
            });
        }
        u.push(d.cdf(o.value));
    }
    SortedSample::new(u)
}

/// `kind,n,value` rows.
pub fn results_csv(results: &[StatisticResult]) -> String {
    let mut s = String::from("kind,n,value\n");
    for r in results {
        let _ = writeln!(s, "{},{},{}", r.kind, r.n, r.value);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DensityKind;

    #[test]
    fn plain_lines_with_comments() {
        let obs = parse_observations("# header\n0.5\n\n-1.25  # note\n3e-2\n", None).unwrap();
        let lines: Vec<u64> = obs.iter().map(|o| o.line).collect();
        assert_eq!(lines, vec![2, 4, 5]);
        assert_eq!(obs[1].value, -1.25);
    }

    #[test]
    fn bad_number_names_line() {
        let err = parse_observations("1\nabc\n", None).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_observations("# only\n", None).is_err());
    }

    #[test]
    fn csv_column() {
        let text = "id,x\n1,0.25\n# skip\n2,-0.5\n";
        let obs = parse_observations(text, Some("x")).unwrap();
        assert_eq!(obs.iter().map(|o| o.value).collect::<Vec<_>>(), vec![0.25, -0.5]);
        assert_eq!(obs[0].line, 2);
        let err = parse_observations(text, Some("y")).unwrap_err().to_string();
        assert!(err.contains("id, x"), "{err}");
    }

    #[test]
    fn out_of_support_line() {
        let obs = parse_observations("0.1\n0.2\n1.5\n", None).unwrap();
        let err = pit_observations(&obs, &DensityKind::Uniform).unwrap_err();
        assert!(matches!(err, Error::OutOfSupport { line: 3, .. }));
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn csv_output() {
        let s = pit_observations(&parse_observations("0.0\n", None).unwrap(), &DensityKind::Normal).unwrap();
        let rows = results_csv(&crate::gof_statistics::all_stats(&s));
        assert!(rows.starts_with("kind,n,value\nD,1,"));
        assert_eq!(rows.lines().count(), 9);
    }
}
