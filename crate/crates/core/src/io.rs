//! Tabular output: CSV with a header row and 17 significant digits, and JSON
//! with the same fields.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde_json::{Map, Value};

use crate::forest::{Split, Topology};
use crate::projection::ApproxGeodesic;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

/// Formats a float with 17 significant digits; non-finite values as
/// `NaN`, `inf`, `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Table {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let line = |cells: Vec<String>| cells.join(",") + "\r\n";
        out += &line(self.headers.iter().map(|h| csv_field(h)).collect());
        for row in &self.rows {
            out += &line(
                row.iter()
                    .map(|c| match c {
                        Cell::Int(i) => i.to_string(),
                        Cell::Num(v) => format_number(*v),
                        Cell::Text(s) => csv_field(s),
                    })
                    .collect(),
            );
        }
        out
    }

    /// One JSON object per row, keyed by header. Non-finite numbers become
    /// the strings used in the CSV.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(h, c)| {
                            let v = match c {
                                Cell::Int(i) => Value::from(*i),
                                Cell::Num(v) => serde_json::Number::from_f64(*v)
                                    .map_or_else(|| Value::from(format_number(*v)), Value::Number),
                                Cell::Text(s) => Value::from(s.as_str()),
                            };
                            (h.clone(), v)
                        })
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("JSON values always serialize") + "\n"
    }
}

/// Square matrix with row labels in the first column.
pub fn matrix_table(labels: &[String], m: &DMatrix<f64>) -> Table {
    let mut t = Table::new(std::iter::once("label".to_string()).chain(labels.iter().cloned()));
    for (i, l) in labels.iter().enumerate() {
        let mut row = vec![Cell::from(l.as_str())];
        row.extend((0..m.ncols()).map(|j| Cell::Num(m[(i, j)])));
        t.push(row);
    }
    t
}

fn topology_text(t: &Topology) -> String {
    t.splits().iter().map(Split::to_string).collect::<Vec<_>>().join(" ")
}

/// Point table and topology sidecar for an approximate geodesic.
///
/// Point rows hold the index, a topology id, one weight per split occurring
/// anywhere on the path (0 where the split is absent), the length of the
/// segment ending at the point and the cumulative length. The sidecar maps
/// topology ids to their split sets.
pub fn geodesic_tables(g: &ApproxGeodesic) -> (Table, Table) {
    let mut all: Vec<Split> = g.points.iter().flat_map(|w| w.splits().iter().copied()).collect();
    all.sort();
    all.dedup();
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut sidecar = Table::new(["topology_id", "splits"]);
    let mut points = Table::new(
        ["index", "topology_id"]
            .into_iter()
            .map(String::from)
            .chain(all.iter().map(|s| format!("lambda[{s}]")))
            .chain(["segment_length", "cumulative_length"].map(String::from)),
    );
    let cumulative = g.cumulative_lengths();
    for (i, w) in g.points.iter().enumerate() {
        let text = topology_text(w.topology());
        let next = ids.len();
        let id = *ids.entry(text.clone()).or_insert_with(|| {
            sidecar.push(vec![next.into(), text.into()]);
            next
        });
        let mut row = vec![i.into(), id.into()];
        row.extend(
            all.iter()
                .map(|s| Cell::Num(w.topology().index_of(s).map_or(0.0, |k| w.lambda()[k]))),
        );
        row.push(Cell::Num(if i == 0 { 0.0 } else { g.segment_lengths[i - 1] }));
        row.push(Cell::Num(cumulative[i]));
        points.push(row);
    }
    (points, sidecar)
}
