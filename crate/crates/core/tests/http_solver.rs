use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use serde_json::{json, Value};
use tsbench_core::run::{run_tasks, RunOptions};
use tsbench_core::solvers::{HttpSolver, Message, SolverError};
use tsbench_core::synth::{gen_split, GenConfig};
use tsbench_core::tasks::{build_tasks, TaskPlan};
use tsbench_core::{DatasetKind, Solver, SolverConfig, SolverKind, Split, TaskInstance};

/// A reply the stub sends back: status code and body.
type Reply = (u16, String);

fn read_request(stream: &mut TcpStream) -> Option<(String, Value)> {
    let mut reader = BufReader::new(stream);
    let mut len = 0;
    let mut auth = String::new();
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).ok()? == 0 {
            return None;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        let lower = line.to_ascii_lowercase();
        if let Some(v) = lower.strip_prefix("content-length:") {
            len = v.trim().parse().ok()?;
        }
        if lower.starts_with("authorization:") {
            auth = line["authorization:".len()..].trim().to_string();
        }
    }
    let mut body = vec![0; len];
    reader.read_exact(&mut body).ok()?;
    Some((auth, serde_json::from_slice(&body).ok()?))
}

/// Serve until the process exits. `respond` sees the request number,
/// auth header and body.
fn serve<F>(respond: F) -> String
where
    F: Fn(usize, &str, &Value) -> Reply + Send + Sync + 'static,
{
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat", listener.local_addr().unwrap());
    let respond = Arc::new(respond);
    let seen = Arc::new(AtomicUsize::new(0));
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let respond = respond.clone();
            let seen = seen.clone();
            thread::spawn(move || {
                let Some((auth, body)) = read_request(&mut stream) else { return };
                let n = seen.fetch_add(1, Ordering::SeqCst);
                let (status, text) = respond(n, &auth, &body);
                let head = format!(
                    "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
                    text.len()
                );
                let _ = stream.write_all(head.as_bytes());
                let _ = stream.write_all(text.as_bytes());
            });
        }
    });
    url
}

fn chat(content: &str) -> String {
    json!({"choices": [{"message": {"role": "assistant", "content": content}}]}).to_string()
}

fn config(url: &str) -> SolverConfig {
    SolverConfig {
        endpoint: Some(url.into()),
        api_key: Some("sk-test".into()),
        model_name: "stub-model".into(),
        timeout: Duration::from_secs(5),
        backoff_base: Duration::from_millis(5),
        ..SolverConfig::new(SolverKind::Http)
    }
}

fn tasks(n: usize) -> Vec<TaskInstance> {
    let samples = gen_split(DatasetKind::Trend, Split::Test, n, &GenConfig::default()).unwrap();
    build_tasks(&samples, &[], &TaskPlan::default()).unwrap()
}

#[test]
fn sends_messages_and_reads_content() {
    let url = serve(|_, auth, body| {
        assert_eq!(auth, "Bearer sk-test");
        assert_eq!(body["model"], "stub-model");
        let last = body["messages"].as_array().unwrap().last().unwrap();
        (200, chat(&format!("echo {}", last["content"].as_str().unwrap().len())))
    });
    let solver = HttpSolver::new(config(&url)).unwrap();
    let task = &tasks(1)[0];
    let reply = solver.solve(task, &[Message::user(&task.prompt)]).unwrap();
    assert_eq!(reply, format!("echo {}", task.prompt.len()));
}

#[test]
fn retries_server_errors_then_succeeds() {
    let url = serve(|n, _, _| if n < 2 { (500, "{}".into()) } else { (200, chat("Yes")) });
    let dir = tempfile::tempdir().unwrap();
    let transcript = dir.path().join("t.jsonl");
    let solver = HttpSolver::new(SolverConfig {
        transcript: Some(transcript.clone()),
        ..config(&url)
    })
    .unwrap();
    let task = &tasks(1)[0];
    assert_eq!(solver.solve(task, &[Message::user(&task.prompt)]).unwrap(), "Yes");
    let record: Value = serde_json::from_str(std::fs::read_to_string(&transcript).unwrap().trim()).unwrap();
    assert_eq!(record["attempts"], 3);
    assert_eq!(record["response"], "Yes");
}

#[test]
fn gives_up_after_max_retries() {
    let url = serve(|_, _, _| (503, "busy".into()));
    let solver = HttpSolver::new(SolverConfig {
        max_retries: 2,
        ..config(&url)
    })
    .unwrap();
    let task = &tasks(1)[0];
    let err = solver.solve(task, &[Message::user("x")]).unwrap_err();
    assert!(matches!(err, SolverError::Status { status: 503, attempts: 3, .. }), "{err:?}");
}

#[test]
fn client_errors_and_bad_bodies_are_not_retried() {
    let url = serve(|n, _, _| match n {
        0 => (400, "bad request".into()),
        _ => (200, "{\"nothing\": true}".into()),
    });
    let solver = HttpSolver::new(config(&url)).unwrap();
    let task = &tasks(1)[0];
    let first = solver.solve(task, &[Message::user("x")]).unwrap_err();
    assert!(matches!(first, SolverError::Status { status: 400, attempts: 1, .. }), "{first:?}");
    let second = solver.solve(task, &[Message::user("x")]).unwrap_err();
    assert!(matches!(second, SolverError::MalformedResponse(_)), "{second:?}");
}

#[test]
fn concurrency_limit_is_respected() {
    let active = Arc::new(AtomicUsize::new(0));
    let peak = Arc::new(AtomicUsize::new(0));
    let (a, p) = (active.clone(), peak.clone());
    let url = serve(move |_, _, _| {
        let now = a.fetch_add(1, Ordering::SeqCst) + 1;
        p.fetch_max(now, Ordering::SeqCst);
        thread::sleep(Duration::from_millis(30));
        a.fetch_sub(1, Ordering::SeqCst);
        (200, chat("No"))
    });
    let solver = HttpSolver::new(SolverConfig {
        concurrency_limit: 2,
        ..config(&url)
    })
    .unwrap();
    let tasks = tasks(8);
    let opts = RunOptions {
        adaptive: false,
        workers: 8,
    };
    let results = run_tasks(&tasks, &solver, opts).unwrap();
    assert!(results.iter().all(|r| r.response.as_deref() == Some("No")));
    assert!(peak.load(Ordering::SeqCst) <= 2, "peak {}", peak.load(Ordering::SeqCst));
}

#[test]
fn unreachable_endpoint_is_a_transport_error() {
    // bind then drop to get a port nobody listens on
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let solver = HttpSolver::new(SolverConfig {
        max_retries: 1,
        ..config(&format!("http://127.0.0.1:{port}/"))
    })
    .unwrap();
    let task = &tasks(1)[0];
    let err = solver.solve(task, &[Message::user("x")]).unwrap_err();
    assert!(matches!(err, SolverError::Transport { attempts: 2, .. }), "{err:?}");
}

#[test]
fn missing_endpoint_is_a_config_error() {
    let err = HttpSolver::new(SolverConfig {
        endpoint: None,
        ..config("")
    })
    .err()
    .unwrap();
    assert!(matches!(err, SolverError::Config(_)));
}
