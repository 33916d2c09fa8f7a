//! The `mpgql` command: validate graph files, run queries, and an
//! interactive loop. Commands write to caller-supplied streams and return
//! exit codes so they can be tested without spawning processes.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mpgql_core::eval::{eval_query, format_label_set, ResultTable, ResultValue};
use mpgql_core::io::{load_file, GraphIoError};
use mpgql_core::model::{MetaPropertyGraph, Value};
use mpgql_core::syntax::parse_query;

pub const EXIT_OK: i32 = 0;
/// Invalid graph, bad query, or a query that cannot run.
pub const EXIT_DOMAIN: i32 = 1;
/// Unreadable input, malformed JSON or a document that breaks the schema.
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?}, expected table, json or csv")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Table => "table",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// A cell as text. Tables show dates as `DD-MM-YYYY`, other formats ISO.
fn cell(v: Option<&ResultValue>, format: OutputFormat) -> String {
    match v {
        None | Some(ResultValue::Null) => String::new(),
        Some(ResultValue::Value(v)) if format == OutputFormat::Table => v.display_dmy(),
        Some(ResultValue::LabelSet { labels, .. }) => format_label_set(labels),
        Some(other) => other.to_string(),
    }
}

/// Rows as rendered cells in column order, sorted.
fn sorted_cells(t: &ResultTable, format: OutputFormat) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| t.columns.iter().map(|c| cell(r.get(c), format)).collect())
        .collect();
    rows.sort();
    rows
}

fn render_table(t: &ResultTable) -> String {
    let rows = sorted_cells(t, OutputFormat::Table);
    let widths: Vec<usize> = t
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let rule = format!(
        "+{}+\n",
        widths.iter().map(|&w| "-".repeat(w + 2)).collect::<Vec<_>>().join("+")
    );
    let mut out = String::new();
    out.push_str(&rule);
    out.push_str(&line(&t.columns));
    out.push_str(&rule);
    for r in &rows {
        out.push_str(&line(r));
    }
    out.push_str(&rule);
    out.push_str(&format!(
        "({} row{})\n",
        rows.len(),
        if rows.len() == 1 { "" } else { "s" }
    ));
    out
}

fn json_value(v: &ResultValue) -> serde_json::Value {
    use serde_json::Value as J;
    match v {
        ResultValue::Null => J::Null,
        ResultValue::Object(o) => J::String(o.to_string()),
        ResultValue::LabelSet { labels, .. } => J::Array(labels.iter().cloned().map(J::String).collect()),
        ResultValue::Value(v) => match v {
            Value::String(s) => J::String(s.clone()),
            Value::Integer(i) => J::from(*i),
            Value::Decimal(d) => serde_json::Number::from_f64(d.0).map_or_else(|| J::String(v.to_string()), J::Number),
            Value::Boolean(b) => J::Bool(*b),
            Value::Date(_) => J::String(v.to_string()),
        },
    }
}

/// One JSON object per output binding, holding only the columns that
/// binding has.
fn render_json(t: &ResultTable) -> String {
    let mut rows: Vec<(Vec<String>, serde_json::Value)> = t
        .rows
        .iter()
        .map(|r| {
            let key = t.columns.iter().map(|c| cell(r.get(c), OutputFormat::Json)).collect();
            let obj = r.iter().map(|(k, v)| (k.clone(), json_value(v))).collect();
            (key, serde_json::Value::Object(obj))
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let arr = serde_json::Value::Array(rows.into_iter().map(|(_, v)| v).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("JSON values serialize");
    s.push('\n');
    s
}

fn render_csv(t: &ResultTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // A result with no columns still gets a (blank) header line.
    w.write_record(&t.columns).expect("writing to memory");
    for r in sorted_cells(t, OutputFormat::Csv) {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 cells")
}

/// Renders a result in the given format. Rows are sorted by their rendered
/// cells, so output is reproducible.
pub fn render_result(t: &ResultTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => render_table(t),
        OutputFormat::Json => render_json(t),
        OutputFormat::Csv => render_csv(t),
    }
}

fn load_error_code(e: &GraphIoError) -> i32 {
    match e {
        GraphIoError::Integrity(_) => EXIT_DOMAIN,
        _ => EXIT_INPUT,
    }
}

/// `mpgql validate FILE`
pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    match load_file(path) {
        Ok(_) => {
            writeln!(out, "OK")?;
            Ok(EXIT_OK)
        }
        Err(GraphIoError::Integrity(vs)) => {
            for v in &vs {
                writeln!(out, "{v}")?;
            }
            Ok(EXIT_DOMAIN)
        }
        Err(e) => {
            writeln!(err, "{}: {e}", path.display())?;
            Ok(EXIT_INPUT)
        }
    }
}

/// Parses and runs one query, returning the rendered result or a diagnostic.
pub fn run_query_text(g: &MetaPropertyGraph, text: &str, format: OutputFormat) -> Result<String, String> {
    let q = parse_query(text).map_err(|e| e.to_string())?;
    let t = eval_query(&q, g).map_err(|e| format!("error: {e}"))?;
    Ok(render_result(&t, format))
}

/// `mpgql query FILE (-q TEXT | -f FILE)`
pub fn cmd_query(
    path: &Path,
    query: &str,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let g = match load_file(path) {
        Ok(g) => g,
        Err(e) => {
            writeln!(err, "{}: {e}", path.display())?;
            return Ok(load_error_code(&e));
        }
    };
    match run_query_text(&g, query, format) {
        Ok(s) => {
            out.write_all(s.as_bytes())?;
            Ok(EXIT_OK)
        }
        Err(msg) => {
            writeln!(err, "{msg}")?;
            Ok(EXIT_DOMAIN)
        }
    }
}

pub const PROMPT: &str = "mpgql> ";
pub const CONTINUATION: &str = "  ...> ";

/// The interactive loop over any pair of streams.
///
/// Lines accumulate until the text parses as a complete query, a line ends
/// with `;`, or a blank line is entered. Lines starting with `:` at the
/// start of a query are commands: `:quit`, `:format table|json|csv`,
/// `:reload` and `:help`.
pub struct Repl {
    path: PathBuf,
    graph: MetaPropertyGraph,
    pub format: OutputFormat,
}

impl Repl {
    /// Loads the graph; failures are reported with their exit code.
    pub fn open(path: &Path, format: OutputFormat) -> Result<Self, (i32, String)> {
        let graph = load_file(path).map_err(|e| (load_error_code(&e), format!("{}: {e}", path.display())))?;
        Ok(Repl {
            path: path.to_owned(),
            graph,
            format,
        })
    }

    fn command(&mut self, line: &str, out: &mut dyn Write) -> io::Result<bool> {
        let mut words = line[1..].split_whitespace();
        match words.next().unwrap_or("") {
            "quit" | "q" | "exit" => return Ok(false),
            "format" => match words.next() {
                None => writeln!(out, "format: {}", self.format)?,
                Some(f) => match f.parse() {
                    Ok(f) => self.format = f,
                    Err(e) => writeln!(out, "error: {e}")?,
                },
            },
            "reload" => match load_file(&self.path) {
                Ok(g) => {
                    self.graph = g;
                    writeln!(out, "reloaded {}", self.path.display())?;
                }
                Err(e) => writeln!(out, "{}: {e}", self.path.display())?,
            },
            "help" => writeln!(
                out,
                "enter a query, ending with ';' or a blank line if it spans lines\n:format table|json|csv  :reload  :quit"
            )?,
            other => writeln!(out, "error: unknown command :{other}, try :help")?,
        }
        Ok(true)
    }

    fn submit(&self, text: &str, out: &mut dyn Write) -> io::Result<()> {
        match run_query_text(&self.graph, text, self.format) {
            Ok(s) => out.write_all(s.as_bytes()),
            Err(msg) => writeln!(out, "{msg}"),
        }
    }

    /// Runs until `:quit` or end of input.
    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write) -> io::Result<()> {
        let mut buffer = String::new();
        loop {
            write!(out, "{}", if buffer.is_empty() { PROMPT } else { CONTINUATION })?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                if !buffer.trim().is_empty() {
                    writeln!(out)?;
                    self.submit(&buffer, out)?;
                }
                writeln!(out)?;
                return Ok(());
            }
            let trimmed = line.trim();
            if buffer.is_empty() && trimmed.starts_with(':') {
                if !self.command(trimmed, out)? {
                    return Ok(());
                }
                continue;
            }
            if trimmed.is_empty() {
                if !buffer.trim().is_empty() {
                    self.submit(&buffer, out)?;
                }
                buffer.clear();
                continue;
            }
            if let Some(text) = trimmed.strip_suffix(';') {
                buffer.push_str(text);
                self.submit(&buffer, out)?;
                buffer.clear();
                continue;
            }
            buffer.push_str(&line);
            match parse_query(&buffer) {
                Err(e) if e.is_incomplete() => {}
                _ => {
                    self.submit(&buffer, out)?;
                    buffer.clear();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use mpgql_core::model::{ObjectId, Value};

    use super::*;

    fn table() -> ResultTable {
        let mut t = ResultTable {
            columns: vec!["a".into(), "b".into()],
            rows: Default::default(),
        };
        let d = mpgql_core::model::parse_date("2024-11-05").unwrap();
        t.rows.insert(
            [
                ("a".to_string(), ResultValue::Value(Value::Date(d))),
                ("b".to_string(), ResultValue::Null),
            ]
            .into(),
        );
        t.rows.insert(
            [(
                "a".to_string(),
                ResultValue::LabelSet {
                    id: ObjectId::label_set(1),
                    labels: BTreeSet::from(["B".to_string(), "A".to_string()]),
                },
            )]
            .into(),
        );
        t
    }

    #[test]
    fn table_uses_day_first_dates_and_blank_nulls() {
        let s = render_result(&table(), OutputFormat::Table);
        assert_eq!(
            s,
            "+------------+---+\n| a          | b |\n+------------+---+\n| 05-11-2024 |   |\n| {\"A\", \"B\"} |   |\n+------------+---+\n(2 rows)\n"
        );
    }

    #[test]
    fn csv_and_json_use_iso_dates() {
        let csv = render_result(&table(), OutputFormat::Csv);
        assert_eq!(csv, "a,b\n2024-11-05,\n\"{\"\"A\"\", \"\"B\"\"}\",\n");
        let json = render_result(&table(), OutputFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v[0]["a"], "2024-11-05");
        assert_eq!(v[0]["b"], serde_json::Value::Null);
        assert_eq!(v[1]["a"], serde_json::json!(["A", "B"]));
        assert!(v[1].get("b").is_none());
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("JSON".parse::<OutputFormat>(), Ok(OutputFormat::Json));
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
