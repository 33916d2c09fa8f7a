use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use mpgql_cli::{cmd_query, cmd_validate, OutputFormat, Repl, EXIT_DOMAIN, EXIT_INPUT, EXIT_OK};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture() -> PathBuf {
    root().join("fixtures/example.mpg.json")
}

fn query_text(i: usize) -> String {
    std::fs::read_to_string(root().join(format!("fixtures/queries/q{i}.mpgql"))).unwrap()
}

fn query(text: &str, format: OutputFormat) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmd_query(&fixture(), text, format, &mut out, &mut err).unwrap();
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mpgql-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn mpgql(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mpgql"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    cmd.env_remove("MPGQL_FORMAT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn example_queries_match_golden_tables() {
    for i in 1..=5 {
        let golden = std::fs::read_to_string(root().join(format!("crates/cli/tests/golden/q{i}.table"))).unwrap();
        let (code, out, err) = query(&query_text(i), OutputFormat::Table);
        assert_eq!(code, EXIT_OK, "q{i}: {err}");
        assert_eq!(out, golden, "q{i}");
    }
}

#[test]
fn nulls_are_empty_csv_cells() {
    let (code, out, _) = query("MATCH (x) RETURN x.Nope AS \"c\"", OutputFormat::Csv);
    assert_eq!(code, EXIT_OK);
    // Every node projects Null, and the rows collapse into one.
    assert_eq!(out, "c\n\"\"\n");
}

#[test]
fn q5_as_json_uses_iso_dates() {
    let (_, out, _) = query(&query_text(5), OutputFormat::Json);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v,
        serde_json::json!([{"reviewer name": "Lee", "Date": "2024-11-05", "Assigning editor": "Rose"}])
    );
}

#[test]
fn query_errors_are_domain_errors() {
    let (code, _, err) = query("MATCH (x RETURN x AS x", OutputFormat::Table);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.starts_with("error: "), "{err}");
    let (code, _, err) = query("MATCH (x) RETURN y AS y", OutputFormat::Table);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("y"), "{err}");
}

#[test]
fn validate_exit_codes() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(cmd_validate(&fixture(), &mut out, &mut err).unwrap(), EXIT_OK);
    assert_eq!(out, b"OK\n");

    let cyclic = temp_file(
        "cycle.json",
        r#"{"format_version": "1", "nodes": [{"id": "a"}], "edges": [], "rho": {"a": ["a"]}}"#,
    );
    let mut out = Vec::new();
    assert_eq!(cmd_validate(&cyclic, &mut out, &mut err).unwrap(), EXIT_DOMAIN);
    let out = String::from_utf8(out).unwrap();
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("CyclicReification"), "{out}");

    let missing = root().join("fixtures/no-such-file.json");
    assert_eq!(cmd_validate(&missing, &mut Vec::new(), &mut err).unwrap(), EXIT_INPUT);
    let broken = temp_file("broken.json", "{\"nodes\": [");
    assert_eq!(cmd_validate(&broken, &mut Vec::new(), &mut err).unwrap(), EXIT_INPUT);
    let schema = temp_file(
        "schema.json",
        r#"{"format_version": "1", "nodes": [], "edges": [], "extra": 1}"#,
    );
    assert_eq!(cmd_validate(&schema, &mut Vec::new(), &mut err).unwrap(), EXIT_INPUT);
}

#[test]
fn query_on_bad_graphs() {
    let cyclic = temp_file(
        "cycle-q.json",
        r#"{"format_version": "1", "nodes": [{"id": "a"}], "edges": [], "rho": {"a": ["a"]}}"#,
    );
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let q = "MATCH (x) RETURN x AS x";
    assert_eq!(
        cmd_query(&cyclic, q, OutputFormat::Table, &mut out, &mut err).unwrap(),
        EXIT_DOMAIN
    );
    let missing = root().join("fixtures/no-such-file.json");
    assert_eq!(
        cmd_query(&missing, q, OutputFormat::Table, &mut out, &mut err).unwrap(),
        EXIT_INPUT
    );
}

fn repl(input: &str) -> String {
    let mut r = Repl::open(&fixture(), OutputFormat::Table).unwrap();
    let mut out = Vec::new();
    r.run(&mut input.as_bytes(), &mut out).unwrap();
    String::from_utf8(out).unwrap()
}

#[test]
fn repl_runs_multi_line_queries() {
    let out = repl(&format!("{}\n", query_text(2)));
    for name in ["Lee", "Scopus", "Rose", "PubMed"] {
        assert!(out.contains(&format!("| {name}")), "{out}");
    }
    assert!(out.contains("(4 rows)"));
    assert!(out.contains(mpgql_cli::CONTINUATION));
}

#[test]
fn repl_switches_format() {
    let out = repl(&format!(
        ":format json\n{}\n:quit\nMATCH (x) RETURN x AS x;\n",
        query_text(3)
    ));
    let start = out.find('[').unwrap();
    let end = out.rfind(']').unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[start..=end]).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    // Nothing runs after :quit.
    assert!(!out.contains("n1"));
}

#[test]
fn repl_survives_garbage() {
    let out = repl("MATCH ) RETURN\nMATCH (x:Person) RETURN x.Name AS n;\n:nonsense\n:reload\n");
    assert!(out.contains("error: "), "{out}");
    assert!(out.contains("| Lee"), "{out}");
    assert!(out.contains("unknown command"), "{out}");
    assert!(out.contains("reloaded"), "{out}");
}

#[test]
fn binary_exit_codes_and_env_format() {
    let f = fixture();
    let f = f.to_str().unwrap();
    assert_eq!(mpgql(&["validate", f], "", &[]).status.code(), Some(0));
    assert_eq!(mpgql(&["validate", "/no/such/file"], "", &[]).status.code(), Some(2));
    let bad = mpgql(&["query", f, "-q", "MATCH"], "", &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());

    let q1 = root().join("fixtures/queries/q1.mpgql");
    let csv = mpgql(
        &["query", f, "-f", q1.to_str().unwrap()],
        "",
        &[("MPGQL_FORMAT", "csv")],
    );
    assert_eq!(csv.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("Publication_Co_Tags\n"));
    let table = mpgql(
        &["query", f, "-f", q1.to_str().unwrap(), "--format", "table"],
        "",
        &[("MPGQL_FORMAT", "csv")],
    );
    assert!(String::from_utf8_lossy(&table.stdout).starts_with("+---"));

    let session = mpgql(
        &["repl", f],
        "MATCH {p} WHERE KEY(p) = \"Name\" RETURN VAL(p) AS \"Names\"\n",
        &[],
    );
    assert_eq!(session.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&session.stdout).contains("(4 rows)"));
}
