use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::parse::{parse_adjacency, parse_coord, parse_dist, parse_event, parse_model, parse_state};
use super::write::{write_adjacency, write_coord, write_dist, write_event, write_model, write_state};
use super::ParseError;
use crate::error::{Error, Result};
use crate::model::{Distribution, ModelTable, Network, PartitionBlock};
use crate::validate::{validate, Code, FileKind};

/// Prefix naming a fileset: `<prefix>.dist`, `<prefix>.adjcy.3`, ...
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilesetPath {
    prefix: PathBuf,
}

impl FilesetPath {
    pub fn new(prefix: impl Into<PathBuf>) -> Self {
        FilesetPath {
            prefix: prefix.into(),
        }
    }

    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn file(&self, kind: FileKind, part: Option<usize>) -> PathBuf {
        let mut name: OsString = self.prefix.as_os_str().to_owned();
        name.push(".");
        name.push(kind.suffix());
        if let Some(p) = part {
            name.push(format!(".{p}"));
        }
        PathBuf::from(name)
    }

    pub fn dist(&self) -> PathBuf {
        self.file(FileKind::Dist, None)
    }

    pub fn model(&self) -> PathBuf {
        self.file(FileKind::Model, None)
    }

    pub fn partition_file(&self, kind: FileKind, p: usize) -> PathBuf {
        self.file(kind, Some(p))
    }

    /// Every file a saved network with `k` partitions consists of.
    pub fn files(&self, k: usize) -> Vec<PathBuf> {
        let mut files = vec![self.dist(), self.model()];
        for p in 0..k {
            files.extend(FileKind::PER_PARTITION.iter().map(|&kind| self.partition_file(kind, p)));
        }
        files
    }
}

impl<P: Into<PathBuf>> From<P> for FilesetPath {
    fn from(p: P) -> Self {
        FilesetPath::new(p)
    }
}

/// Writes the canonical fileset. Refuses networks that fail validation.
pub fn save_network(net: &Network, path: &FilesetPath) -> Result<()> {
    let report = validate(net);
    if !report.is_empty() {
        return Err(Error::Invalid(report));
    }
    save_network_unchecked(net, path)
}

/// Writes whatever is in memory without validating it first. Used to dump
/// broken networks for inspection and to build corrupted fixtures.
pub fn save_network_unchecked(net: &Network, path: &FilesetPath) -> Result<()> {
    if let Some(dir) = path.prefix().parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    write_file(&path.dist(), &write_dist(&net.distribution))?;
    write_file(&path.model(), &write_model(&net.models))?;
    net.partitions
        .par_iter()
        .enumerate()
        .try_for_each(|(p, block)| save_block(block, &net.models, path, p))
}

fn save_block(block: &PartitionBlock, models: &ModelTable, path: &FilesetPath, p: usize) -> Result<()> {
    write_file(&path.partition_file(FileKind::Adjacency, p), &write_adjacency(block))?;
    write_file(&path.partition_file(FileKind::Coord, p), &write_coord(block))?;
    write_file(&path.partition_file(FileKind::State, p), &write_state(block, models))?;
    write_file(&path.partition_file(FileKind::Event, p), &write_event(block))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if let Some(pos) = bytes.iter().position(|b| !b.is_ascii()) {
        let line = bytes[..pos].iter().filter(|&&b| b == b'\n').count() + 1;
        return Err(ParseError::new(Code::Syntax, line, format!("non-ASCII byte 0x{:02x}", bytes[pos]))
            .in_file(path)
            .into());
    }
    Ok(String::from_utf8(bytes).expect("ASCII is valid UTF-8"))
}

/// Loads and validates a fileset.
pub fn load_network(path: &FilesetPath) -> Result<Network> {
    let net = load_network_unchecked(path)?;
    let report = validate(&net);
    if !report.is_empty() {
        return Err(Error::Invalid(report));
    }
    Ok(net)
}

/// Parses a fileset without the cross-partition checks. Per-file errors are
/// still reported, tagged with the file path and line. `.dist` and `.model`
/// are read first; partitions are then parsed independently.
pub fn load_network_unchecked(path: &FilesetPath) -> Result<Network> {
    let dist_path = path.dist();
    let distribution = parse_dist(&read_text(&dist_path)?).map_err(|e| e.in_file(&dist_path))?;
    let model_path = path.model();
    let models = parse_model(&read_text(&model_path)?).map_err(|e| e.in_file(&model_path))?;

    // Report a missing partition file by name before parsing anything large.
    for p in 0..distribution.parts() {
        for kind in [FileKind::Adjacency, FileKind::Coord, FileKind::State] {
            let f = path.partition_file(kind, p);
            if !f.exists() {
                return Err(Error::io(
                    &f,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "missing partition file"),
                ));
            }
        }
    }

    let partitions = (0..distribution.parts())
        .into_par_iter()
        .map(|p| load_block(path, &distribution, &models, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Network {
        distribution,
        models,
        partitions,
    })
}

fn load_block(path: &FilesetPath, dist: &Distribution, models: &ModelTable, p: usize) -> Result<PartitionBlock> {
    let adj_path = path.partition_file(FileKind::Adjacency, p);
    let adjacency = parse_adjacency(&read_text(&adj_path)?, dist, p).map_err(|e| e.in_file(&adj_path))?;
    let coord_path = path.partition_file(FileKind::Coord, p);
    let coords = parse_coord(&read_text(&coord_path)?, dist.part_size(p)).map_err(|e| e.in_file(&coord_path))?;
    let state_path = path.partition_file(FileKind::State, p);
    let state = parse_state(&read_text(&state_path)?, &adjacency, models).map_err(|e| e.in_file(&state_path))?;
    let event_path = path.partition_file(FileKind::Event, p);
    // A network that has never run has no event files.
    let events = if event_path.exists() {
        parse_event(&read_text(&event_path)?, dist, p).map_err(|e| e.in_file(&event_path))?
    } else {
        Vec::new()
    };
    Ok(PartitionBlock {
        part_index: p,
        adjacency,
        coords,
        vertex_state: state.vertex_state,
        edge_state: state.edge_state,
        events,
    })
}

/// Total size in bytes of the fileset for a `k`-partition network. Absent
/// event files count as zero.
pub fn fileset_bytes(path: &FilesetPath, k: usize) -> Result<u64> {
    let mut total = 0;
    for f in path.files(k) {
        match fs::metadata(&f) {
            Ok(m) => total += m.len(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound && f.to_string_lossy().contains(".event.") => {}
            Err(e) => return Err(Error::io(f, e)),
        }
    }
    Ok(total)
}
