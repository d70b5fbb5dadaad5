#![allow(dead_code)]

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn jogi_page() -> String {
    std::fs::read_to_string(fixtures().join("pages/jogi.wiki")).unwrap()
}

/// A tiny raw-wikitext server. `jogi` is served from the fixtures, `flaky`
/// fails with 503 until the third request, `broken` always fails, anything
/// else is 404. Returns the base URL and a request counter.
pub fn wiki_server() -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let flaky = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            if reader.read_line(&mut request_line).is_err() {
                continue;
            }
            loop {
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                    break;
                }
            }
            counter.fetch_add(1, Ordering::SeqCst);
            let target = request_line.split_whitespace().nth(1).unwrap_or("");
            let title = target
                .split(['?', '&'])
                .find_map(|p| p.strip_prefix("title="))
                .unwrap_or("");
            let (status, body) = if !target.starts_with("/w/index.php") || !target.contains("action=raw") {
                ("400 Bad Request", String::new())
            } else {
                match title {
                    "jogi" => ("200 OK", jogi_page()),
                    "flaky" if flaky.fetch_add(1, Ordering::SeqCst) < 2 => ("503 Service Unavailable", String::new()),
                    "flaky" => ("200 OK", "{{vep-decl-stems|jog|i|en|ed|id}}".to_string()),
                    "broken" => ("500 Internal Server Error", String::new()),
                    _ => ("404 Not Found", String::new()),
                }
            };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: text/x-wiki; charset=UTF-8\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    (base, hits)
}
