//! CSV and JSON emitters.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA: &str = "magicdist/1";

/// Reals are written with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `{"schema": ..., "command": ..., <body fields>}`.
pub fn envelope<T: Serialize>(command: &str, body: &T) -> Result<Value, CliError> {
    let mut value = json!({ "schema": SCHEMA, "command": command });
    match serde_json::to_value(body)? {
        Value::Object(fields) => {
            if let Some(m) = value.as_object_mut() {
                m.extend(fields);
            }
        }
        other => value["result"] = other,
    }
    Ok(value)
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, command: &str, body: &T) -> Result<(), CliError> {
    let value = envelope(command, body)?;
    serde_json::to_writer_pretty(&mut *out, &value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn comment_lines(out: &mut dyn Write, comments: &[(String, String)]) -> io::Result<()> {
    for (k, v) in comments {
        write!(out, "# {k}={v}\r\n")?;
    }
    Ok(())
}

/// Two-column CSV with leading and trailing comment lines.
pub fn write_points_csv(
    out: &mut dyn Write,
    header: [&str; 2],
    points: &[(f64, f64)],
    comments: &[(String, String)],
    footer: &[(String, String)],
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    comment_lines(&mut buf, comments)?;
    {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(&mut buf);
        writer.write_record(header).map_err(io::Error::from)?;
        for &(x, y) in points {
            writer.write_record([real(x), real(y)]).map_err(io::Error::from)?;
        }
        writer.flush()?;
    }
    comment_lines(&mut buf, footer)?;
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

/// Joined reals for comment values.
pub fn real_pair(a: f64, b: f64) -> String {
    format!("{};{}", real(a), real(b))
}
