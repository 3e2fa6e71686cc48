//! Structured progress log: one JSON object per line on stderr.

use std::io::Write;
use std::time::Instant;

use serde_json::{Map, Value};

#[derive(Debug)]
pub struct Logger {
    enabled: bool,
    start: Instant,
}

impl Logger {
    pub fn new(enabled: bool) -> Self {
        Self { enabled, start: Instant::now() }
    }

    /// Emits `{"event": event, "elapsed_ms": …, ..fields}`. Non-object `fields` go under `"data"`.
    pub fn event(&self, event: &str, fields: Value) {
        if !self.enabled {
            return;
        }
        let mut obj = Map::new();
        obj.insert("event".into(), event.into());
        obj.insert("elapsed_ms".into(), (self.start.elapsed().as_millis() as u64).into());
        match fields {
            Value::Object(m) => obj.extend(m),
            Value::Null => {}
            other => {
                obj.insert("data".into(), other);
            }
        }
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{}", Value::Object(obj));
    }
}
