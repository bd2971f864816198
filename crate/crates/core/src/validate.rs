//! Whole-network invariant checking.
//!
//! [`validate`] is total: it keeps going after the first problem and returns
//! every violation it finds, each tagged with a stable [`Code`] and the file
//! and line where the offending record lives on disk.

use std::fmt;

use crate::model::{is_token, ModelKind, Network};

/// Stable violation codes. Parse errors reuse the same codes so a corruption
/// reports identically whether it is caught while reading or afterwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Malformed token or line structure.
    Syntax,
    /// Bad `.dist` content or a partition list that disagrees with it.
    Dist,
    /// Bad `.model` entry.
    ModelDef,
    /// Per-partition file has the wrong number of rows.
    RowCount,
    /// Edge state count differs from the neighbor count.
    EdgeCount,
    /// Vertex index outside `[0, n)`.
    BadRef,
    SelfLoop,
    /// Same neighbor listed twice on one line.
    DupNbr,
    /// `g` lists `u` but `u` does not list `g`.
    Asym,
    /// Both endpoints of an adjacent pair store `none`.
    BothNone,
    UnkModel,
    /// Vertex model used for an edge or vice versa.
    KindMismatch,
    TupleLen,
    /// Event stored in a partition that does not own its target.
    EvtOwner,
    /// Negative or non-finite arrival time.
    EvtTime,
    /// Malformed token (event type).
    Token,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "SYNTAX",
            Code::Dist => "DIST",
            Code::ModelDef => "MODELDEF",
            Code::RowCount => "ROWCOUNT",
            Code::EdgeCount => "EDGECOUNT",
            Code::BadRef => "BADREF",
            Code::SelfLoop => "SELFLOOP",
            Code::DupNbr => "DUPNBR",
            Code::Asym => "ASYM",
            Code::BothNone => "BOTHNONE",
            Code::UnkModel => "UNKMODEL",
            Code::KindMismatch => "KINDMISMATCH",
            Code::TupleLen => "TUPLELEN",
            Code::EvtOwner => "EVTOWNER",
            Code::EvtTime => "EVTTIME",
            Code::Token => "TOKEN",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FileKind {
    Dist,
    Model,
    Adjacency,
    Coord,
    State,
    Event,
}

impl FileKind {
    pub const PER_PARTITION: [FileKind; 4] = [
        FileKind::Adjacency,
        FileKind::Coord,
        FileKind::State,
        FileKind::Event,
    ];

    pub fn suffix(self) -> &'static str {
        match self {
            FileKind::Dist => "dist",
            FileKind::Model => "model",
            FileKind::Adjacency => "adjcy",
            FileKind::Coord => "coord",
            FileKind::State => "state",
            FileKind::Event => "event",
        }
    }

    pub fn is_per_partition(self) -> bool {
        !matches!(self, FileKind::Dist | FileKind::Model)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: Code,
    pub file: FileKind,
    pub partition: Option<usize>,
    /// 1-based line within `file`.
    pub line: Option<usize>,
    pub message: String,
}

impl Violation {
    /// `<prefix>.<suffix>[.<p>][:<line>]`
    pub fn locus(&self, prefix: &str) -> String {
        let mut s = format!("{prefix}.{}", self.file.suffix());
        if let Some(p) = self.partition {
            s.push_str(&format!(".{p}"));
        }
        if let Some(l) = self.line {
            s.push_str(&format!(":{l}"));
        }
        s
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.locus(""), self.code, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn has(&self, code: Code) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Violation> {
        self.violations.iter()
    }

    pub(crate) fn first_message(&self) -> String {
        self.violations
            .first()
            .map_or_else(String::new, |v| v.to_string())
    }

    fn push(
        &mut self,
        code: Code,
        file: FileKind,
        partition: Option<usize>,
        line: Option<usize>,
        message: String,
    ) {
        self.violations.push(Violation {
            code,
            file,
            partition,
            line,
            message,
        });
    }
}

/// Sorted copy of the global adjacency, with a flag per entry telling whether
/// the stored edge state there is `none`.
struct GlobalAdjacency {
    row_ptr: Vec<usize>,
    entries: Vec<(usize, bool)>,
}

impl GlobalAdjacency {
    fn row(&self, g: usize) -> &[(usize, bool)] {
        &self.entries[self.row_ptr[g]..self.row_ptr[g + 1]]
    }

    fn find(&self, g: usize, u: usize) -> Option<bool> {
        let row = self.row(g);
        row.binary_search_by_key(&u, |&(v, _)| v)
            .ok()
            .map(|i| row[i].1)
    }
}

pub fn validate(net: &Network) -> ValidationReport {
    let mut report = ValidationReport::default();
    let dist = &net.distribution;
    let n = dist.vertex_count();
    let k = dist.parts();

    if net.partitions.len() != k {
        report.push(
            Code::Dist,
            FileKind::Dist,
            None,
            Some(1),
            format!("distribution has {k} partitions, network has {}", net.partitions.len()),
        );
    }

    for (_, m) in net.models.iter() {
        for (key, value) in &m.params {
            if !value.is_finite() {
                report.push(
                    Code::ModelDef,
                    FileKind::Model,
                    None,
                    None,
                    format!("model {}: parameter {key} is not finite", m.name),
                );
            }
        }
    }

    // Row-structure checks; rows that fail them are excluded from the
    // cross-partition pass.
    let mut shape_ok = vec![false; k.min(net.partitions.len())];
    for (p, block) in net.partitions.iter().enumerate().take(k) {
        let at = Some(p);
        if block.part_index != p {
            report.push(
                Code::Dist,
                FileKind::Dist,
                None,
                Some(1),
                format!("partition at position {p} has index {}", block.part_index),
            );
        }
        let expected = dist.part_size(p);
        let mut ok = true;
        for (file, len) in [
            (FileKind::Adjacency, block.adjacency.len()),
            (FileKind::Coord, block.coords.len()),
            (FileKind::State, block.vertex_state.len()),
            (FileKind::State, block.edge_state.len()),
        ] {
            if len != expected {
                ok = false;
                report.push(
                    Code::RowCount,
                    file,
                    at,
                    None,
                    format!("{len} rows, distribution gives {expected}"),
                );
            }
        }
        shape_ok[p] = ok;
        let first = dist.offsets()[p];
        let rows = block
            .adjacency
            .len()
            .min(block.vertex_state.len())
            .min(block.edge_state.len());
        for i in 0..rows {
            let g = first + i;
            let line = Some(i + 1);
            let adj = &block.adjacency[i];
            let mut seen: Vec<usize> = Vec::with_capacity(adj.len());
            for &u in adj {
                if u >= n {
                    report.push(
                        Code::BadRef,
                        FileKind::Adjacency,
                        at,
                        line,
                        format!("vertex {g}: neighbor {u} out of range (n = {n})"),
                    );
                } else if u == g {
                    report.push(
                        Code::SelfLoop,
                        FileKind::Adjacency,
                        at,
                        line,
                        format!("vertex {g} lists itself"),
                    );
                }
                seen.push(u);
            }
            seen.sort_unstable();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    report.push(
                        Code::DupNbr,
                        FileKind::Adjacency,
                        at,
                        line,
                        format!("vertex {g}: neighbor {} listed twice", w[0]),
                    );
                }
            }

            let vs = &block.vertex_state[i];
            match net.models.get(vs.model) {
                None => report.push(
                    Code::UnkModel,
                    FileKind::State,
                    at,
                    line,
                    format!("vertex {g}: unknown model id {}", vs.model.0),
                ),
                Some(m) if m.kind != ModelKind::Vertex => report.push(
                    Code::KindMismatch,
                    FileKind::State,
                    at,
                    line,
                    format!("vertex {g}: {} is an edge model", m.name),
                ),
                Some(m) if m.state_size != vs.values.len() => report.push(
                    Code::TupleLen,
                    FileKind::State,
                    at,
                    line,
                    format!(
                        "vertex {g}: {} expects {} values, found {}",
                        m.name,
                        m.state_size,
                        vs.values.len()
                    ),
                ),
                Some(_) => {}
            }

            let edges = &block.edge_state[i];
            if edges.len() != adj.len() {
                report.push(
                    Code::EdgeCount,
                    FileKind::State,
                    at,
                    line,
                    format!(
                        "vertex {g}: {} edge entries for {} neighbors",
                        edges.len(),
                        adj.len()
                    ),
                );
            }
            for (j, e) in edges.iter().enumerate() {
                let nbr = adj.get(j).map_or_else(|| "?".to_string(), |u| u.to_string());
                match e.model {
                    None if !e.values.is_empty() => report.push(
                        Code::TupleLen,
                        FileKind::State,
                        at,
                        line,
                        format!("vertex {g}: none entry for {nbr} carries values"),
                    ),
                    None => {}
                    Some(id) => match net.models.get(id) {
                        None => report.push(
                            Code::UnkModel,
                            FileKind::State,
                            at,
                            line,
                            format!("vertex {g}: edge from {nbr} has unknown model id {}", id.0),
                        ),
                        Some(m) if m.kind != ModelKind::Edge => report.push(
                            Code::KindMismatch,
                            FileKind::State,
                            at,
                            line,
                            format!("vertex {g}: edge from {nbr} uses vertex model {}", m.name),
                        ),
                        Some(m) if m.state_size != e.values.len() => report.push(
                            Code::TupleLen,
                            FileKind::State,
                            at,
                            line,
                            format!(
                                "vertex {g}: edge from {nbr}: {} expects {} values, found {}",
                                m.name,
                                m.state_size,
                                e.values.len()
                            ),
                        ),
                        Some(_) => {}
                    },
                }
            }
        }

        for (j, ev) in block.events.iter().enumerate() {
            let line = Some(j + 1);
            if ev.target >= n {
                report.push(
                    Code::BadRef,
                    FileKind::Event,
                    at,
                    line,
                    format!("event target {} out of range", ev.target),
                );
            } else if !dist.range(p).contains(&ev.target) {
                report.push(
                    Code::EvtOwner,
                    FileKind::Event,
                    at,
                    line,
                    format!(
                        "event target {} is owned by partition {}",
                        ev.target,
                        dist.owner_of(ev.target).unwrap_or(usize::MAX)
                    ),
                );
            }
            if ev.source >= n {
                report.push(
                    Code::BadRef,
                    FileKind::Event,
                    at,
                    line,
                    format!("event source {} out of range", ev.source),
                );
            }
            if !(ev.arrival_time >= 0.0 && ev.arrival_time.is_finite()) {
                report.push(
                    Code::EvtTime,
                    FileKind::Event,
                    at,
                    line,
                    format!("arrival time {} is not a finite non-negative value", ev.arrival_time),
                );
            }
            if !is_token(&ev.event_type) {
                report.push(
                    Code::Token,
                    FileKind::Event,
                    at,
                    line,
                    format!("event type {:?} is not a token", ev.event_type),
                );
            }
        }
    }

    if shape_ok.len() == k && shape_ok.iter().all(|&ok| ok) {
        check_pairs(net, &mut report);
    }
    report
}

/// Symmetry and direction completeness across partitions.
fn check_pairs(net: &Network, report: &mut ValidationReport) {
    let n = net.vertex_count();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut entries = Vec::new();
    row_ptr.push(0);
    for block in &net.partitions {
        for (adj, edges) in block.adjacency.iter().zip(&block.edge_state) {
            let start = entries.len();
            entries.extend(
                adj.iter()
                    .zip(edges.iter().map(|e| e.is_none()).chain(std::iter::repeat(false)))
                    .map(|(&u, none)| (u, none)),
            );
            entries[start..].sort_unstable_by_key(|&(u, _)| u);
            row_ptr.push(entries.len());
        }
    }
    let global = GlobalAdjacency { row_ptr, entries };

    for (p, block) in net.partitions.iter().enumerate() {
        let first = net.distribution.offsets()[p];
        for (i, adj) in block.adjacency.iter().enumerate() {
            let g = first + i;
            for (j, &u) in adj.iter().enumerate() {
                if u >= n || u == g {
                    continue;
                }
                match global.find(u, g) {
                    None => report.push(
                        Code::Asym,
                        FileKind::Adjacency,
                        Some(p),
                        Some(i + 1),
                        format!("vertex {g} lists {u} but {u} does not list {g}"),
                    ),
                    Some(back_none) => {
                        let here_none = block.edge_state[i].get(j).is_some_and(|e| e.is_none());
                        if g < u && here_none && back_none {
                            report.push(
                                Code::BothNone,
                                FileKind::State,
                                Some(p),
                                Some(i + 1),
                                format!("pair {g}-{u} has no directed edge in either direction"),
                            );
                        }
                    }
                }
            }
        }
    }
}
