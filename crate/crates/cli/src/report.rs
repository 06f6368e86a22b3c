use std::io::{Read, Write};
use std::time::Instant;

use ppart_core::{parse_poset, Error, Poset};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::Common;

pub const SCHEMA: &str = "ppart/1";

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_CAP: u8 = 4;

/// What a command produced.
pub enum Output {
    Json(Value),
    /// JSON with a nonzero exit code, e.g. a failed self test.
    JsonWithCode(Value, u8),
    Text(String),
}

pub struct Input {
    pub poset: Poset,
}

/// Failure of a command: a library error, or a problem outside the library.
pub enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Syntax { .. } => ("syntax", EXIT_INVALID),
        Error::Range(_) => ("range", EXIT_INVALID),
        Error::Cycle(_) => ("cycle", EXIT_INVALID),
        Error::Flavor { .. } => ("flavor", EXIT_INVALID),
        Error::Arg(_) => ("argument", EXIT_INVALID),
        Error::Label => ("label", EXIT_DOMAIN),
        Error::NotFwd => ("not_fwd", EXIT_DOMAIN),
        Error::Remainder { .. } => ("remainder", EXIT_DOMAIN),
        Error::Instability { .. } => ("instability", EXIT_DOMAIN),
        Error::Explosion { .. } => ("explosion", EXIT_CAP),
        Error::Cap { .. } => ("cap", EXIT_CAP),
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::Explosion { .. } => Some("raise the limit with --cap"),
        Error::Cap {
            what: "connected ideal set",
            ..
        } => Some("raise the limit with --vertex-cap"),
        Error::Instability { .. } => Some("retry with a larger --trunc"),
        _ => None,
    }
}

fn read_input(common: &Common) -> Result<Vec<u8>, String> {
    if common.poset.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read(&common.poset)
            .map_err(|e| format!("cannot read {}: {e}", common.poset.display()))
    }
}

fn emit(mut body: Map<String, Value>, command: &str, digest: Option<&str>) {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    if let Some(d) = digest {
        out.insert("input".into(), json!({ "sha256": d }));
    }
    out.append(&mut body);
    let text = serde_json::to_string_pretty(&Value::Object(out)).expect("reports serialise");
    write_stdout(&format!("{text}\n"));
}

// Write errors such as a closed pipe are ignored.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn emit_error(command: &str, digest: Option<&str>, kind: &str, message: String, code: u8) -> u8 {
    eprintln!("ppart {command}: {message}");
    let mut error = Map::new();
    error.insert("kind".into(), json!(kind));
    error.insert("message".into(), json!(message));
    error.insert("exit_code".into(), json!(code));
    let mut body = Map::new();
    body.insert("error".into(), Value::Object(error));
    emit(body, command, digest);
    code
}

/// Reads and parses the poset, runs the command and prints its report.
pub fn run<F>(command: &str, common: &Common, body: F) -> u8
where
    F: FnOnce(&Input) -> Result<Output, Failure>,
{
    let start = Instant::now();
    let bytes = match read_input(common) {
        Ok(b) => b,
        Err(message) => return emit_error(command, None, "io", message, EXIT_USAGE),
    };
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) => {
            return emit_error(
                command,
                Some(&digest),
                "syntax",
                "input is not UTF-8".into(),
                EXIT_INVALID,
            )
        }
    };
    let poset = match parse_poset(&text) {
        Ok(p) => p,
        Err(e) => {
            let (kind, code) = error_kind(&e);
            return emit_error(command, Some(&digest), kind, e.to_string(), code);
        }
    };
    let (value, code) = match body(&Input { poset }) {
        Ok(Output::Text(text)) => {
            write_stdout(&text);
            return EXIT_OK;
        }
        Ok(Output::Json(v)) => (v, EXIT_OK),
        Ok(Output::JsonWithCode(v, code)) => (v, code),
        Err(Failure::Io(message)) => {
            return emit_error(command, Some(&digest), "io", message, EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            let (kind, code) = error_kind(&e);
            let message = match hint(&e) {
                Some(h) => format!("{e}; {h}"),
                None => e.to_string(),
            };
            return emit_error(command, Some(&digest), kind, message, code);
        }
    };
    let mut body = Map::new();
    body.insert("result".into(), value);
    if common.timing {
        body.insert(
            "timing_ms".into(),
            json!(start.elapsed().as_secs_f64() * 1e3),
        );
    }
    emit(body, command, Some(&digest));
    code
}
