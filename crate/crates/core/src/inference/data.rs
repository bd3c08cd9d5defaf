use serde::Serialize;

use crate::error::{Error, Result};

/// Source tag of the bundled football sample.
pub const UEFA_SOURCE: &str = "bundled:uefa";

const UEFA_CSV: &str = include_str!("../../data/uefa.csv");

/// An ordered sample of observations strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSeries {
    values: Vec<f64>,
    label: String,
    source: String,
}

impl DataSeries {
    pub fn new(
        values: Vec<f64>,
        label: impl Into<String>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoData);
        }
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > 0.0 && v < 1.0))
        {
            return Err(Error::OutOfRange {
                row: i + 1,
                value: v,
            });
        }
        Ok(Self {
            values,
            label: label.into(),
            source: source.into(),
        })
    }

    /// Reads one column of a CSV text. A single header line is allowed; blank
    /// lines are skipped. `column` selects a field by header name or by
    /// zero-based index, defaulting to the first field. Reported row numbers
    /// are 1-based line numbers of the text.
    pub fn parse_csv(
        text: &str,
        column: Option<&str>,
        label: impl Into<String>,
        source: impl Into<String>,
    ) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();

        let mut index = match column {
            Some(c) => c.parse::<usize>().ok(),
            None => Some(0),
        };
        if let Some(&(row, first)) = lines.peek() {
            let fields: Vec<&str> = split_fields(first);
            let numeric = index
                .and_then(|i| fields.get(i))
                .is_some_and(|f| f.parse::<f64>().is_ok());
            if !numeric {
                // header line
                if let Some(name) = column.filter(|_| index.is_none()) {
                    index = fields.iter().position(|f| *f == name);
                    if index.is_none() {
                        return Err(Error::Parse {
                            row,
                            content: format!("no column named `{name}` in header `{first}`"),
                        });
                    }
                }
                lines.next();
            }
        }
        let index = index.unwrap_or(0);

        let mut values = Vec::new();
        for (row, line) in lines {
            let field = split_fields(line).get(index).copied().unwrap_or("");
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                row,
                content: line.to_string(),
            })?;
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::OutOfRange { row, value: v });
            }
            values.push(v);
        }
        Self::new(values, label, source)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The sample `1 - wᵢ`, in the same order.
    pub fn reflected(&self) -> DataSeries {
        DataSeries {
            values: self.values.iter().map(|w| 1.0 - w).collect(),
            label: format!("1 - {}", self.label),
            source: self.source.clone(),
        }
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

/// Raw CSV text of the bundled sample.
pub fn bundled_uefa_csv() -> &'static str {
    UEFA_CSV
}

/// Medium pass completion proportions in the UEFA Champions League,
/// seasons 2004/05 and 2005/06 (37 teams, three decimals).
pub fn bundled_uefa() -> DataSeries {
    DataSeries::parse_csv(UEFA_CSV, None, "uefa medium pass completion", UEFA_SOURCE)
        .expect("bundled data is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sample() {
        let d = bundled_uefa();
        assert_eq!(d.len(), 37);
        assert_eq!(d.values()[0], 0.289);
        assert_eq!(d.values()[36], 0.311);
        assert_eq!(d.source(), UEFA_SOURCE);
    }

    #[test]
    fn parse_errors_carry_rows() {
        assert_eq!(
            DataSeries::parse_csv("w\n0.2\nabc\n", None, "", ""),
            Err(Error::Parse {
                row: 3,
                content: "abc".into()
            })
        );
        assert_eq!(
            DataSeries::parse_csv("0.2\n\n1.0\n", None, "", ""),
            Err(Error::OutOfRange { row: 3, value: 1.0 })
        );
        assert_eq!(DataSeries::parse_csv("", None, "", ""), Err(Error::NoData));
        assert_eq!(
            DataSeries::parse_csv("w\n", None, "", ""),
            Err(Error::NoData)
        );
    }

    #[test]
    fn selects_columns() {
        let text = "x1,x2,w\n1.5,0.5,0.75\n1,3,0.25\n";
        let d = DataSeries::parse_csv(text, Some("w"), "", "").unwrap();
        assert_eq!(d.values(), &[0.75, 0.25]);
        let d = DataSeries::parse_csv("0.1,0.2\n0.3,0.4\n", Some("1"), "", "").unwrap();
        assert_eq!(d.values(), &[0.2, 0.4]);
        assert!(DataSeries::parse_csv(text, Some("nope"), "", "").is_err());
    }

    #[test]
    fn full_precision_round_trip() {
        let vals = [0.1 + 0.2, 1.0 / 3.0, 1e-300, 1.0 - f64::EPSILON];
        let text: String = vals.iter().map(|v| format!("{v}\n")).collect();
        let d = DataSeries::parse_csv(&text, None, "", "").unwrap();
        assert_eq!(d.values(), &vals);
    }

    #[test]
    fn reflection() {
        let d = DataSeries::new(vec![0.25, 0.5], "a", "b").unwrap();
        assert_eq!(d.reflected().values(), &[0.75, 0.5]);
    }
}
