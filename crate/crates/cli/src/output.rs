//! Record sinks: plain text, JSON lines, or CSV with a fixed header.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A row of output. `HEADER` and `row` must agree in length.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn row(&self) -> Vec<String>;
    fn text(&self) -> String;
}

pub enum Sink<'a> {
    Text(&'a mut dyn Write),
    Json(&'a mut dyn Write),
    Csv {
        writer: Box<csv::Writer<&'a mut dyn Write>>,
        header_written: bool,
    },
}

impl<'a> Sink<'a> {
    /// `None` means plain text.
    pub fn new(format: Option<Format>, out: &'a mut dyn Write) -> Self {
        match format {
            None => Sink::Text(out),
            Some(Format::Json) => Sink::Json(out),
            Some(Format::Csv) => Sink::Csv {
                writer: Box::new(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)),
                header_written: false,
            },
        }
    }

    pub fn emit<R: Record>(&mut self, record: &R) -> io::Result<()> {
        match self {
            Sink::Text(out) => writeln!(out, "{}", record.text()),
            Sink::Json(out) => {
                serde_json::to_writer(&mut *out, record)?;
                writeln!(out)
            }
            Sink::Csv { writer, header_written } => {
                if !*header_written {
                    writer.write_record(R::HEADER)?;
                    *header_written = true;
                }
                writer.write_record(record.row())?;
                writer.flush()
            }
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::Text(out) | Sink::Json(out) => out.flush(),
            Sink::Csv { writer, .. } => writer.flush(),
        }
    }
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}
