//! CSV output: a `#`-prefixed header block (tool version, config echo,
//! column units, notes) followed by an RFC-4180 table with CRLF line ends.
//! Reals are written with 17 significant digits.

use std::cmp::Ordering;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Cell::Int(_) | Cell::Real(_) => 0,
            Cell::Bool(_) => 1,
            Cell::Text(_) => 2,
        }
    }

    fn as_f64(&self) -> f64 {
        match self {
            Cell::Int(v) => *v as f64,
            Cell::Real(v) => *v,
            _ => 0.0,
        }
    }

    /// Total order used to sort rows by their key columns.
    pub fn total_cmp(&self, other: &Cell) -> Ordering {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            (Cell::Bool(a), Cell::Bool(b)) => a.cmp(b),
            (a, b) if a.rank() == 0 && b.rank() == 0 => a.as_f64().total_cmp(&b.as_f64()),
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Real(v.unwrap_or(f64::NAN))
    }
}

/// `17` significant digits in scientific notation; `NaN`, `inf`, `-inf`
/// for non-finite values.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// A complete CSV document.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvReport {
    pub command: String,
    pub config: Vec<(String, String)>,
    /// `(name, unit)` per column.
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
    /// Rows are sorted on this many leading columns before rendering.
    pub key_columns: usize,
}

impl CsvReport {
    pub fn new(command: &str, columns: Vec<(&'static str, &'static str)>, key_columns: usize) -> Self {
        CsvReport { command: command.to_string(), config: Vec::new(), columns, rows: Vec::new(), notes: Vec::new(), key_columns }
    }

    pub fn echo(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|&(c, _)| c == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push_str("\r\n");
        };
        line(format!("# tool: stein-md {}", env!("CARGO_PKG_VERSION")));
        line(format!("# command: {}", self.command));
        for (k, v) in &self.config {
            line(format!("# config: {k}={v}"));
        }
        let units: Vec<String> = self.columns.iter().map(|(c, u)| format!("{c}[{u}]")).collect();
        line(format!("# units: {}", units.join(" ")));
        for n in &self.notes {
            line(format!("# note: {n}"));
        }

        let mut rows = self.rows.clone();
        let keys = self.key_columns;
        rows.sort_by(|a, b| {
            a.iter().zip(b.iter()).take(keys).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        });

        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        // writes into memory, which cannot fail
        w.write_record(self.columns.iter().map(|(c, _)| *c)).expect("in-memory CSV write");
        for r in &rows {
            w.write_record(r.iter().map(Cell::render)).expect("in-memory CSV write");
        }
        let body = w.into_inner().expect("in-memory CSV flush");
        out.push_str(&String::from_utf8(body).expect("CSV cells are UTF-8"));
        out
    }
}
