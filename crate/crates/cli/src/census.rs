//! Two-column CSV input: `label,population` for census files,
//! `label,quota` for quota files and `label,bound` for bound files.
//! A first row whose second field is not a number is taken as a header.

use crate::error::{CliError, Result};
use apportion_core::rational::{self, Rational};
use apportion_core::{LowerBound, Problem, QuotaVector};
use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub labels: Vec<String>,
    pub populations: Vec<u64>,
}

impl Census {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn problem(&self, seats: u64) -> Result<Problem> {
        Ok(Problem::new(self.labels.clone(), self.populations.clone(), seats)?)
    }
}

struct Row {
    line: u64,
    label: String,
    value: String,
}

fn read_rows<R: Read>(reader: R) -> Result<Vec<Row>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        rows.push(Row {
            line,
            label: record[0].to_string(),
            value: record[1].to_string(),
        });
    }
    Ok(rows)
}

fn drop_header(rows: &mut Vec<Row>, numeric: impl Fn(&str) -> bool) {
    if rows.first().is_some_and(|r| !numeric(&r.value)) {
        rows.remove(0);
    }
}

fn check_labels(rows: &[Row]) -> Result<()> {
    let mut seen = HashMap::new();
    for row in rows {
        if row.label.is_empty() {
            return Err(CliError::Parse {
                line: row.line,
                message: "empty state label".into(),
            });
        }
        if let Some(first) = seen.insert(row.label.as_str(), row.line) {
            return Err(CliError::Parse {
                line: row.line,
                message: format!("duplicate state {:?} (first seen on line {first})", row.label),
            });
        }
    }
    Ok(())
}

fn is_digits(t: &str) -> bool {
    !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
}

pub fn parse_census<R: Read>(reader: R) -> Result<Census> {
    let mut rows = read_rows(reader)?;
    drop_header(&mut rows, |v| v.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+'));
    if rows.is_empty() {
        return Err(CliError::Input("census file has no rows".into()));
    }
    check_labels(&rows)?;
    let mut populations = Vec::with_capacity(rows.len());
    for row in &rows {
        if !is_digits(&row.value) {
            return Err(CliError::Parse {
                line: row.line,
                message: format!("population {:?} is not a positive integer", row.value),
            });
        }
        let pop: u64 = row.value.parse().map_err(|_| CliError::Parse {
            line: row.line,
            message: format!("population {:?} is out of range", row.value),
        })?;
        if pop == 0 {
            return Err(CliError::Parse {
                line: row.line,
                message: "population must be at least 1".into(),
            });
        }
        populations.push(pop);
    }
    Ok(Census {
        labels: rows.into_iter().map(|r| r.label).collect(),
        populations,
    })
}

pub fn write_census(census: &Census) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["state", "population"]).expect("in-memory write");
    for (label, pop) in census.labels.iter().zip(&census.populations) {
        w.write_record([label.as_str(), &pop.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Parse { line, message } => CliError::Input(format!("{}: line {line}: {message}", path.display())),
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        other => other,
    }
}

pub fn read_census(path: &Path) -> Result<Census> {
    parse_census(open(path)?).map_err(|e| in_file(path, e))
}

/// Labels and quotas, which may be decimals or `num/den`.
pub fn parse_quotas<R: Read>(reader: R) -> Result<(Vec<String>, QuotaVector)> {
    let mut rows = read_rows(reader)?;
    drop_header(&mut rows, |v| rational::parse_rational(v).is_ok());
    if rows.is_empty() {
        return Err(CliError::Input("quota file has no rows".into()));
    }
    check_labels(&rows)?;
    let quotas = rows
        .iter()
        .map(|row| {
            rational::parse_rational(&row.value).map_err(|e| CliError::Parse {
                line: row.line,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<Rational>>>()?;
    let quota = QuotaVector::from_quotas(quotas)?;
    Ok((rows.into_iter().map(|r| r.label).collect(), quota))
}

pub fn read_quotas(path: &Path) -> Result<(Vec<String>, QuotaVector)> {
    parse_quotas(open(path)?).map_err(|e| in_file(path, e))
}

/// `K` for a uniform bound, otherwise a `label,bound` file covering
/// exactly the given labels.
pub fn resolve_lower_bound(arg: &str, labels: &[String]) -> Result<LowerBound> {
    if is_digits(arg) {
        let k = arg
            .parse()
            .map_err(|_| CliError::Usage(format!("lower bound {arg:?} is out of range")))?;
        return Ok(LowerBound::uniform(labels.len(), k));
    }
    let path = Path::new(arg);
    let mut rows = read_rows(open(path)?).map_err(|e| in_file(path, e))?;
    drop_header(&mut rows, is_digits);
    check_labels(&rows).map_err(|e| in_file(path, e))?;
    let mut by_label = HashMap::new();
    for row in rows {
        if !is_digits(&row.value) {
            return Err(in_file(
                path,
                CliError::Parse {
                    line: row.line,
                    message: format!("bound {:?} is not a non-negative integer", row.value),
                },
            ));
        }
        let v: u64 = row.value.parse().map_err(|_| CliError::Input(format!("bound {:?} is out of range", row.value)))?;
        by_label.insert(row.label, v);
    }
    let bounds = labels
        .iter()
        .map(|l| {
            by_label
                .remove(l)
                .ok_or_else(|| CliError::Input(format!("{}: no bound for state {l:?}", path.display())))
        })
        .collect::<Result<Vec<u64>>>()?;
    if let Some(extra) = by_label.keys().next() {
        return Err(CliError::Input(format!("{}: unknown state {extra:?}", path.display())));
    }
    Ok(LowerBound(bounds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows() {
        let c = parse_census("A,2\nB,3".as_bytes()).unwrap();
        assert_eq!(c.labels, vec!["A", "B"]);
        assert_eq!(c.populations, vec![2, 3]);
    }

    #[test]
    fn header_is_optional() {
        let c = parse_census("state,population\nA,2\nB,3\n".as_bytes()).unwrap();
        assert_eq!(c.populations, vec![2, 3]);
    }

    #[test]
    fn duplicate_names_its_line() {
        let err = parse_census("A,2\nB,3\nA,4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_bad_populations() {
        for text in ["A,0\n", "A,2\nB,-1\n", "A,2\nB,1.5\n", "A,2\nB\n", "A,2\nB,x\n"] {
            let err = parse_census(text.as_bytes()).unwrap_err();
            assert!(matches!(err, CliError::Parse { .. }), "{text:?}: {err}");
        }
    }

    #[test]
    fn empty_file() {
        assert!(matches!(parse_census("".as_bytes()), Err(CliError::Input(_))));
        assert!(matches!(parse_census("state,population\n".as_bytes()), Err(CliError::Input(_))));
    }

    #[test]
    fn round_trip() {
        let c = Census {
            labels: (0..50).map(|i| format!("State {i}")).collect(),
            populations: (0..50).map(|i| 1000 + 37 * i).collect(),
        };
        assert_eq!(parse_census(write_census(&c).as_bytes()).unwrap(), c);
    }

    #[test]
    fn quotas_accept_decimals_and_fractions() {
        let (labels, q) = parse_quotas("A,1/2\nB,2.5\nC,5\n".as_bytes()).unwrap();
        assert_eq!(labels.len(), 3);
        assert_eq!(q.seats(), 8);
    }

    #[test]
    fn scalar_bound() {
        let labels = vec!["A".to_string(), "B".to_string()];
        assert_eq!(resolve_lower_bound("1", &labels).unwrap(), LowerBound(vec![1, 1]));
    }
}
