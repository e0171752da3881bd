//! Record serialization: CSV with a fixed header, or newline-delimited JSON.

use super::config::Format;
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt::Display;
use std::io::Write;

/// A flat output row. CSV columns come from `HEADER`/`fields`, JSON from the
/// serde representation.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub(crate) fn cell<T: Display>(v: T) -> String {
    v.to_string()
}

pub(crate) fn opt_cell<T: Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_records<R: Record>(rows: &[R], format: Format, mut w: impl Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(R::HEADER).map_err(csv_err)?;
            for r in rows {
                let fields = r.fields();
                debug_assert_eq!(fields.len(), R::HEADER.len());
                out.write_record(&fields).map_err(csv_err)?;
            }
            out.flush()?;
        }
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut w, r).map_err(|e| Error::Io(e.to_string()))?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn records_to_string<R: Record>(rows: &[R], format: Format) -> Result<String> {
    let mut buf = Vec::new();
    write_records(rows, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("records are UTF-8"))
}
