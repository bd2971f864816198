//! Plain-text codec for the dCSR fileset.
//!
//! A network saved under prefix `P` with `k` partitions consists of
//!
//! | file | content |
//! |------|---------|
//! | `P.dist` | one line: the `k + 1` vertex offsets |
//! | `P.model` | one line per model: `name kind size [key=value]...` |
//! | `P.adjcy.p` | one line per local vertex: global neighbor indices |
//! | `P.coord.p` | one line per local vertex: `x y z` |
//! | `P.state.p` | one line per local vertex: vertex model and tuple, then one model and tuple per neighbor |
//! | `P.event.p` | one line per pending event: `target source time type [data]...` |
//!
//! Parsers accept any run of spaces or tabs between tokens and tolerate CR
//! before LF. Writers emit the canonical form: single spaces, LF endings,
//! ascending neighbor order, canonically sorted events, and floats in the
//! shortest decimal form that reads back to the same `f64`.

mod export;
mod fileset;
mod parse;
mod text;
mod write;

use std::fmt;
use std::path::PathBuf;

use crate::validate::Code;

pub use export::{export_edgelist, export_metis, parse_metis};
pub use fileset::{fileset_bytes, load_network, load_network_unchecked, save_network, save_network_unchecked, FilesetPath};
pub use parse::{parse_adjacency, parse_coord, parse_dist, parse_event, parse_model, parse_state, StateRows};
pub use text::format_f64;
pub(crate) use text::lines;
pub use write::{write_adjacency, write_coord, write_dist, write_event, write_model, write_state};

/// A located parse failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Filled in by the fileset loader; bare parsers leave it empty.
    pub file: Option<PathBuf>,
    /// 1-based.
    pub line: Option<usize>,
    pub code: Code,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(code: Code, line: usize, message: impl Into<String>) -> Self {
        ParseError {
            file: None,
            line: Some(line),
            code,
            message: message.into(),
        }
    }

    pub(crate) fn whole_file(code: Code, message: impl Into<String>) -> Self {
        ParseError {
            file: None,
            line: None,
            code,
            message: message.into(),
        }
    }

    pub(crate) fn in_file(mut self, path: impl Into<PathBuf>) -> Self {
        self.file = Some(path.into());
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{}", file.display())?;
            if let Some(line) = self.line {
                write!(f, ":{line}")?;
            }
            f.write_str(": ")?;
        } else if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ParseError {}
