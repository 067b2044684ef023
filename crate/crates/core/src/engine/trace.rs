use std::io::{self, Write};

use serde::Serialize;

/// Event payloads. Field order is fixed so serialized traces are
/// byte-reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Toggle {
        depth: usize,
        value: String,
    },
    Phase {
        depth: usize,
        phase: String,
        alternative: bool,
    },
    Subgoal {
        depth: usize,
        goal: String,
    },
    SelectOp {
        depth: usize,
        goal: String,
        op: String,
    },
    Apply {
        depth: usize,
        op: String,
    },
    Backtrack {
        depth: usize,
    },
    Deepen {
        bound: usize,
    },
    Prune {
        depth: usize,
        reason: String,
        item: String,
    },
}

impl Payload {
    pub fn event(&self) -> &'static str {
        match self {
            Payload::Toggle { .. } => "toggle",
            Payload::Phase { .. } => "phase",
            Payload::Subgoal { .. } => "subgoal",
            Payload::SelectOp { .. } => "select-op",
            Payload::Apply { .. } => "apply",
            Payload::Backtrack { .. } => "backtrack",
            Payload::Deepen { .. } => "deepen",
            Payload::Prune { .. } => "prune",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub seq: u64,
    pub payload: Payload,
}

impl TraceEvent {
    pub fn event(&self) -> &'static str {
        self.payload.event()
    }

    /// One JSON object: `{"seq":..,"event":..,"payload":{..}}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            seq: u64,
            event: &'static str,
            payload: &'a Payload,
        }
        serde_json::to_string(&Line {
            seq: self.seq,
            event: self.event(),
            payload: &self.payload,
        })
        .expect("trace events always serialize")
    }
}

/// Receiver for trace events, owned by the searching thread.
pub trait TraceSink {
    fn emit(&mut self, event: &TraceEvent);
}

impl TraceSink for Vec<TraceEvent> {
    fn emit(&mut self, event: &TraceEvent) {
        self.push(event.clone());
    }
}

/// Writes newline-delimited JSON. The first write error is kept and
/// later events are dropped.
pub struct JsonLinesSink<W: Write> {
    out: W,
    error: Option<io::Error>,
}

impl<W: Write> JsonLinesSink<W> {
    pub fn new(out: W) -> Self {
        JsonLinesSink { out, error: None }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> TraceSink for JsonLinesSink<W> {
    fn emit(&mut self, event: &TraceEvent) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{}", event.to_json()) {
                self.error = Some(e);
            }
        }
    }
}

/// Renders a whole trace as JSON lines.
pub fn render_trace(events: &[TraceEvent]) -> String {
    events.iter().map(|e| e.to_json() + "\n").collect()
}

pub(crate) struct Tracer<'a> {
    sink: Option<&'a mut dyn TraceSink>,
    seq: u64,
}

impl<'a> Tracer<'a> {
    pub(crate) fn new(sink: Option<&'a mut dyn TraceSink>) -> Self {
        Tracer { sink, seq: 0 }
    }

    pub(crate) fn off() -> Tracer<'static> {
        Tracer { sink: None, seq: 0 }
    }

    /// Payloads are built lazily so untraced searches pay nothing for
    /// rendering literal and operator names.
    pub(crate) fn emit(&mut self, payload: impl FnOnce() -> Payload) {
        if let Some(sink) = self.sink.as_deref_mut() {
            let ev = TraceEvent {
                seq: self.seq,
                payload: payload(),
            };
            self.seq += 1;
            sink.emit(&ev);
        }
    }
}
