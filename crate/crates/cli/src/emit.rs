use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn io(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("write failed: {e}"))
}

/// Pretty JSON followed by a newline.
pub fn json<T: Serialize>(out: &mut Vec<u8>, doc: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, doc).map_err(io)?;
    out.push(b'\n');
    Ok(())
}

pub fn csv<R, I>(out: &mut Vec<u8>, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn line(out: &mut Vec<u8>, text: impl std::fmt::Display) -> CliResult<()> {
    writeln!(out, "{text}").map_err(io)
}
