mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use common::{fixtures, wiki_server};

fn bin(store: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wikiparadigm"));
    cmd.arg("--store").arg(store);
    cmd.env_remove("WIKIPARADIGM_ENDPOINT").env_remove("WIKIPARADIGM_RATE_LIMIT");
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (
        status.code().unwrap_or(-1),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn usage_errors_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(bin(tmp.path()).arg("frobnicate")).0, 1);
    assert_eq!(run(bin(tmp.path()).arg("batch")).0, 1);
    assert_eq!(run(bin(tmp.path()).args(["export", "--format", "xml"])).0, 1);
    assert_eq!(run(bin(tmp.path()).arg("--help")).0, 0);
}

#[test]
fn preview_prints_table() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out, _) = run(bin(tmp.path()).args(["preview", "{{vep-decl-stems|jog|i|en|ed|id}}"]));
    assert_eq!(code, 0);
    assert!(out.starts_with("jogi (vep-decl-stems)\n"));
    assert!(out.contains("46 slots: 42 forms, 3 unknown, 1 nonexistent"));
    assert!(out.lines().any(|l| l.starts_with("illative") && l.contains('?') && l.contains("jogihe")));

    let (code, _, err) = run(bin(tmp.path()).args(["preview", "hello"]));
    assert_eq!(code, 2);
    assert!(err.contains("no inflection template found"));
    assert!(!tmp.path().join("dictionary.ndjson").exists());
}

#[test]
fn rules_render() {
    let tmp = tempfile::tempdir().unwrap();
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/rules/vep-decl-stems.rules");
    let (code, out, _) = run(bin(tmp.path()).arg("rules").arg("render").arg(&file));
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("- ")).count(), 46);

    let bad = tmp.path().join("bad.rules");
    std::fs::write(&bad, "language: vep\n").unwrap();
    let (code, _, err) = run(bin(tmp.path()).arg("rules").arg("render").arg(&bad));
    assert_eq!(code, 2);
    assert!(err.contains("bad.rules"));
}

#[test]
fn parse_file_and_title() {
    let tmp = tempfile::tempdir().unwrap();
    let page = fixtures().join("pages/jogi.wiki");
    let (code, out, _) = run(bin(tmp.path()).arg("parse").arg(&page));
    assert_eq!(code, 0);
    let names: Vec<String> = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"krl-decl".to_string()));
    assert!(names.contains(&"vep-decl-stems".to_string()));

    let (base, _) = wiki_server();
    let (code, out, _) = run(bin(tmp.path()).args(["parse", "jogi"]).env("WIKIPARADIGM_ENDPOINT", &base));
    assert_eq!(code, 0);
    assert!(out.contains("vep-decl-stems"));
    let (code, _, err) = run(bin(tmp.path()).args(["parse", "zzz-no-such-page"]).env("WIKIPARADIGM_ENDPOINT", &base));
    assert_eq!(code, 2);
    assert!(err.contains("does not exist"));
}

#[test]
fn batch_export_import_dedupe() {
    let tmp = tempfile::tempdir().unwrap();
    let store = tmp.path().join("store");
    let (code, out, _) = run(bin(&store).arg("batch").arg("--dir").arg(fixtures().join("pages")));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["lemmas_created"], 2);
    assert_eq!(report["forms_created"], 73);

    let (code, tsv, _) = run(bin(&store).args(["export", "--format", "tsv"]));
    assert_eq!(code, 0);
    assert_eq!(tsv.lines().count(), 1 + 73);
    assert_eq!(tsv.lines().nth(1), Some("jogi\tvep\tnoun\tjogi\tcase=nominative;number=sg\tpending"));

    let legacy = fixtures().join("legacy/jogi.tsv");
    let (code, out, _) = run(bin(&store).arg("import").arg(&legacy));
    assert_eq!(code, 0, "{out}");
    let (_, out, _) = run(bin(&store).arg("dedupe"));
    let groups: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(groups.as_array().unwrap().len(), 1);
    assert_eq!(groups[0]["type"], "entries");
    let (code, _, _) = run(bin(&store).args(["dedupe", "--apply"]));
    assert_eq!(code, 0);
    let (_, out, _) = run(bin(&store).arg("dedupe"));
    assert_eq!(out.trim(), "[]");

    let (code, _, err) = run(bin(&store).arg("import").arg(tmp.path().join("missing.tsv")));
    assert_eq!(code, 2);
    assert!(err.contains("missing.tsv"));
    let log = std::fs::read_to_string(store.join("operations.log")).unwrap();
    assert_eq!(log.lines().count(), 3);
}

#[test]
fn batch_titles_from_wiki() {
    let tmp = tempfile::tempdir().unwrap();
    let (base, _) = wiki_server();
    let titles = tmp.path().join("titles.txt");
    std::fs::write(&titles, "jogi\nzzz-no-such-page\n").unwrap();
    let (code, out, _) = run(bin(&tmp.path().join("s"))
        .arg("batch")
        .arg("--titles")
        .arg(&titles)
        .arg("--auto-accept")
        .env("WIKIPARADIGM_ENDPOINT", &base)
        .env("WIKIPARADIGM_RATE_LIMIT", "50"));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["pages_processed"], 1);
    assert_eq!(report["lemmas_created"], 2);
    assert!(report["warnings"][0].as_str().unwrap().contains("zzz-no-such-page"));
}

fn http_get(addr: &str, path: &str) -> String {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(s, "GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut out = String::new();
    s.read_to_string(&mut out).unwrap();
    out
}

#[test]
fn serve_health_and_store_lock() {
    let tmp = tempfile::tempdir().unwrap();
    let mut child = bin(tmp.path())
        .args(["serve", "--bind", "127.0.0.1:0"])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    stderr.read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on http://").expect(&line).to_string();

    let resp = http_get(&addr, "/api/health");
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains("\"status\":\"ok\""));

    let (code, _, err) = run(bin(tmp.path()).args(["serve", "--bind", "127.0.0.1:0"]));
    assert_eq!(code, 2);
    assert!(err.contains("locked"));

    Command::new("kill").arg("-INT").arg(child.id().to_string()).status().unwrap();
    assert!(child.wait().unwrap().success());
    assert!(!tmp.path().join("store.lock").exists());
    assert!(tmp.path().join("dictionary.ndjson").exists());
}
