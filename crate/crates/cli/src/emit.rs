use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::args::Format;

pub type Record = Map<String, Value>;

/// Writes records to `out`, or to stdout when no path is given. CSV columns
/// follow the keys of the first record.
pub fn write_records(records: &[Record], format: Format, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_to(records, format, io::BufWriter::new(file))
        }
        None => write_to(records, format, io::stdout().lock()),
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn write_to(records: &[Record], format: Format, mut w: impl Write) -> Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut w, r)?;
                w.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(&mut w);
            if let Some(first) = records.first() {
                let keys: Vec<&String> = first.keys().collect();
                out.write_record(&keys)?;
                for r in records {
                    out.write_record(keys.iter().map(|k| cell(r.get(*k))))?;
                }
            }
            out.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}
