//! Generic chat-completion client.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::{json, Value};

use super::{Message, Solver, SolverConfig, SolverError};
use crate::tasks::TaskInstance;

/// Bounded pool of permits; a permit is returned when dropped.
struct Permits {
    take: Mutex<Receiver<()>>,
    give: SyncSender<()>,
}

struct Permit<'a>(&'a SyncSender<()>);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let _ = self.0.send(());
    }
}

impl Permits {
    fn new(n: usize) -> Self {
        let (give, take) = sync_channel(n);
        for _ in 0..n {
            give.send(()).expect("channel has capacity");
        }
        Self {
            take: Mutex::new(take),
            give,
        }
    }

    fn acquire(&self) -> Permit<'_> {
        self.take.lock().expect("permit lock").recv().expect("sender alive");
        Permit(&self.give)
    }
}

pub struct HttpSolver {
    config: SolverConfig,
    client: reqwest::blocking::Client,
    permits: Permits,
    transcript: Option<Mutex<File>>,
}

enum Attempt {
    Done(String),
    Retry(SolverError),
    Fail(SolverError),
}

impl HttpSolver {
    pub fn new(config: SolverConfig) -> Result<Self, SolverError> {
        config.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| SolverError::Config(e.to_string()))?;
        let transcript = match &config.transcript {
            Some(path) => Some(Mutex::new(
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(path)
                    .map_err(|e| SolverError::Config(format!("{}: {e}", path.display())))?,
            )),
            None => None,
        };
        Ok(Self {
            permits: Permits::new(config.concurrency_limit),
            config,
            client,
            transcript,
        })
    }

    fn endpoint(&self) -> &str {
        self.config.endpoint.as_deref().unwrap_or_default()
    }

    fn attempt(&self, body: &Value, attempts: u32) -> Attempt {
        let mut req = self.client.post(self.endpoint()).json(body);
        if let Some(key) = &self.config.api_key {
            req = req.bearer_auth(key);
        }
        let resp = match req.send() {
            Ok(r) => r,
            Err(e) if e.is_timeout() => return Attempt::Retry(SolverError::Timeout { attempts }),
            Err(e) => {
                return Attempt::Retry(SolverError::Transport {
                    attempts,
                    message: e.to_string(),
                })
            }
        };
        let status = resp.status();
        let text = match resp.text() {
            Ok(t) => t,
            Err(e) if e.is_timeout() => return Attempt::Retry(SolverError::Timeout { attempts }),
            Err(e) => {
                return Attempt::Retry(SolverError::Transport {
                    attempts,
                    message: e.to_string(),
                })
            }
        };
        if !status.is_success() {
            let err = SolverError::Status {
                status: status.as_u16(),
                attempts,
                body: text.chars().take(500).collect(),
            };
            return if status.is_server_error() || status.as_u16() == 429 {
                Attempt::Retry(err)
            } else {
                Attempt::Fail(err)
            };
        }
        match extract_content(&text) {
            Some(c) => Attempt::Done(c),
            None => Attempt::Fail(SolverError::MalformedResponse(text.chars().take(500).collect())),
        }
    }

    fn backoff(&self, retry: u32) -> Duration {
        let base = self.config.backoff_base.as_secs_f64() * 2f64.powi(retry as i32);
        let jitter = rand::rng().random_range(0.5..1.5);
        Duration::from_secs_f64(base * jitter)
    }

    fn record(&self, task: &TaskInstance, body: &Value, outcome: &Result<String, SolverError>, attempts: u32, elapsed: Duration) {
        let Some(file) = &self.transcript else {
            return;
        };
        let line = json!({
            "task_id": task.id,
            "request": body,
            "response": outcome.as_ref().ok(),
            "error": outcome.as_ref().err().map(|e| e.to_string()),
            "attempts": attempts,
            "elapsed_ms": elapsed.as_millis() as u64,
        });
        let mut f = file.lock().expect("transcript lock");
        if let Err(e) = writeln!(f, "{line}") {
            log::warn!("transcript write failed: {e}");
        }
    }
}

/// First message content of a chat-completion style reply.
fn extract_content(text: &str) -> Option<String> {
    let v: Value = serde_json::from_str(text).ok()?;
    let content = v
        .pointer("/choices/0/message/content")
        .or_else(|| v.pointer("/message/content"))
        .or_else(|| v.pointer("/content/0/text"))?;
    content.as_str().map(String::from)
}

impl Solver for HttpSolver {
    fn name(&self) -> &str {
        "http"
    }

    fn solve(&self, task: &TaskInstance, messages: &[Message]) -> Result<String, SolverError> {
        let body = json!({ "model": self.config.model_name, "messages": messages });
        let _permit = self.permits.acquire();
        let start = Instant::now();
        let mut attempts = 0;
        let outcome = loop {
            attempts += 1;
            match self.attempt(&body, attempts) {
                Attempt::Done(c) => break Ok(c),
                Attempt::Fail(e) => break Err(e),
                Attempt::Retry(e) if attempts > self.config.max_retries => break Err(e),
                Attempt::Retry(e) => {
                    log::info!("task {}: attempt {attempts} failed ({e}), retrying", task.id);
                    std::thread::sleep(self.backoff(attempts - 1));
                }
            }
        };
        self.record(task, &body, &outcome, attempts, start.elapsed());
        outcome
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_shapes() {
        assert_eq!(
            extract_content(r#"{"choices":[{"message":{"role":"assistant","content":"Yes"}}]}"#).as_deref(),
            Some("Yes")
        );
        assert_eq!(extract_content(r#"{"message":{"content":"No"}}"#).as_deref(), Some("No"));
        assert_eq!(extract_content(r#"{"choices":[]}"#), None);
        assert_eq!(extract_content("not json"), None);
    }
}
