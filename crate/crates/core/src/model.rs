//! In-memory extended dCSR representation.

use std::cmp::Ordering;
use std::ops::Range;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Reserved edge model name for a neighbor that is only reached by an
/// outgoing edge. It carries no state and cannot be declared in a table.
pub const NONE_MODEL: &str = "none";

/// State tuple attached to a vertex, an edge or an event.
pub type Tuple = SmallVec<[f64; 2]>;

/// Prefix array over global vertex indices: partition `p` owns
/// `offsets[p]..offsets[p + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    offsets: Vec<usize>,
}

impl Distribution {
    pub fn new(offsets: Vec<usize>) -> Result<Self> {
        if offsets.len() < 2 {
            return Err(Error::Distribution(format!(
                "need at least 2 offsets, got {}",
                offsets.len()
            )));
        }
        if offsets[0] != 0 {
            return Err(Error::Distribution(format!(
                "first offset must be 0, got {}",
                offsets[0]
            )));
        }
        if let Some(w) = offsets.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Distribution(format!(
                "offsets decrease at position {}: {} > {}",
                w + 1,
                offsets[w],
                offsets[w + 1]
            )));
        }
        Ok(Distribution { offsets })
    }

    /// Splits `n` vertices into `k` contiguous blocks whose sizes differ by at
    /// most one.
    pub fn contiguous(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Distribution("k must be at least 1".into()));
        }
        Distribution::new((0..=k).map(|p| p * n / k).collect())
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        offsets.push(0);
        let mut acc = 0;
        for &s in sizes {
            acc += s;
            offsets.push(acc);
        }
        Distribution::new(offsets)
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Number of partitions `k`.
    pub fn parts(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Total vertex count `n`.
    pub fn vertex_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn range(&self, p: usize) -> Range<usize> {
        self.offsets[p]..self.offsets[p + 1]
    }

    pub fn part_size(&self, p: usize) -> usize {
        self.offsets[p + 1] - self.offsets[p]
    }

    /// The partition owning global vertex `g`. Empty partitions never own
    /// anything, so the lookup skips them.
    pub fn owner_of(&self, g: usize) -> Result<usize> {
        let n = self.vertex_count();
        if g >= n {
            return Err(Error::IndexOutOfRange { index: g, n });
        }
        Ok(self.offsets[1..].partition_point(|&end| end <= g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Vertex,
    Edge,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Vertex => "vertex",
            ModelKind::Edge => "edge",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub kind: ModelKind,
    pub state_size: usize,
    pub params: Vec<(String, f64)>,
}

impl Model {
    pub fn new(name: impl Into<String>, kind: ModelKind, state_size: usize) -> Self {
        Model {
            name: name.into(),
            kind,
            state_size,
            params: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.set_param(key, value);
        self
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    /// Overwrites `key` in place, or appends it if absent.
    pub fn set_param(&mut self, key: impl Into<String>, value: f64) {
        let key = key.into();
        match self.params.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.params.push((key, value)),
        }
    }
}

/// Index of a model within its [`ModelTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelId(pub u32);

/// A whitespace-free, printable ASCII token.
pub(crate) fn is_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_graphic())
}

/// Ordered model dictionary. Names are unique tokens and never `none`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelTable {
    models: Vec<Model>,
}

impl ModelTable {
    pub fn new(models: Vec<Model>) -> Result<Self> {
        let mut table = ModelTable::default();
        for m in models {
            table.push(m)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, model: Model) -> Result<ModelId> {
        if !is_token(&model.name) {
            return Err(Error::ModelTable(format!(
                "model name {:?} is not a token",
                model.name
            )));
        }
        if model.name == NONE_MODEL {
            return Err(Error::ModelTable(format!(
                "model name {NONE_MODEL:?} is reserved"
            )));
        }
        if self.id(&model.name).is_some() {
            return Err(Error::ModelTable(format!(
                "duplicate model name {:?}",
                model.name
            )));
        }
        for (i, (key, _)) in model.params.iter().enumerate() {
            if !is_token(key) || key.contains('=') {
                return Err(Error::ModelTable(format!(
                    "model {:?}: bad parameter key {key:?}",
                    model.name
                )));
            }
            if model.params[..i].iter().any(|(k, _)| k == key) {
                return Err(Error::ModelTable(format!(
                    "model {:?}: duplicate parameter {key:?}",
                    model.name
                )));
            }
        }
        self.models.push(model);
        Ok(ModelId(self.models.len() as u32 - 1))
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModelId, &Model)> {
        self.models
            .iter()
            .enumerate()
            .map(|(i, m)| (ModelId(i as u32), m))
    }

    pub fn id(&self, name: &str) -> Option<ModelId> {
        self.models
            .iter()
            .position(|m| m.name == name)
            .map(|i| ModelId(i as u32))
    }

    pub fn get(&self, id: ModelId) -> Option<&Model> {
        self.models.get(id.0 as usize)
    }

    pub fn by_name(&self, name: &str) -> Option<&Model> {
        self.id(name).and_then(|id| self.get(id))
    }

    /// Sets a parameter on the named model. Returns false if no such model.
    pub fn set_param(&mut self, model: &str, key: &str, value: f64) -> bool {
        match self.models.iter_mut().find(|m| m.name == model) {
            Some(m) => {
                m.set_param(key, value);
                true
            }
            None => false,
        }
    }

    /// Name for an edge slot, mapping `None` to `none`.
    pub fn edge_name(&self, id: Option<ModelId>) -> &str {
        match id {
            None => NONE_MODEL,
            Some(id) => self.get(id).map_or("?", |m| m.name.as_str()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexState {
    pub model: ModelId,
    pub values: Tuple,
}

/// State of the edge stored at a vertex for one neighbor. `model == None` is
/// the `none` placeholder: the neighbor is connected only by an edge leaving
/// this vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeState {
    pub model: Option<ModelId>,
    pub values: Tuple,
}

impl EdgeState {
    pub fn none() -> Self {
        EdgeState {
            model: None,
            values: Tuple::new(),
        }
    }

    pub fn new(model: ModelId, values: &[f64]) -> Self {
        EdgeState {
            model: Some(model),
            values: Tuple::from_slice(values),
        }
    }

    pub fn is_none(&self) -> bool {
        self.model.is_none()
    }
}

/// A message emitted by `source` that has not yet been applied at `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub target: usize,
    pub source: usize,
    /// Milliseconds.
    pub arrival_time: f64,
    pub event_type: String,
    pub data: Tuple,
}

impl Event {
    pub fn spike(target: usize, source: usize, arrival_time: f64) -> Self {
        Event {
            target,
            source,
            arrival_time,
            event_type: "spike".into(),
            data: Tuple::new(),
        }
    }

    /// Canonical ordering: (arrival_time, target, source, type, data).
    pub fn canonical_cmp(&self, other: &Event) -> Ordering {
        self.arrival_time
            .total_cmp(&other.arrival_time)
            .then(self.target.cmp(&other.target))
            .then(self.source.cmp(&other.source))
            .then_with(|| self.event_type.cmp(&other.event_type))
            .then_with(|| cmp_tuples(&self.data, &other.data))
    }
}

pub(crate) fn cmp_tuples(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// One partition: vertices `dist[p]..dist[p+1]` and the edges targeting them.
/// All per-vertex vectors are indexed by local vertex index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartitionBlock {
    pub part_index: usize,
    /// Undirected neighbor lists, global indices.
    pub adjacency: Vec<Vec<usize>>,
    pub coords: Vec<[f64; 3]>,
    pub vertex_state: Vec<VertexState>,
    /// Aligned with `adjacency`.
    pub edge_state: Vec<Vec<EdgeState>>,
    pub events: Vec<Event>,
}

impl PartitionBlock {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Directed edges stored in this block (`m_p`).
    pub fn edge_count(&self) -> usize {
        self.edge_state
            .iter()
            .flatten()
            .filter(|e| !e.is_none())
            .count()
    }

    /// Permutation putting neighbor line `i` in ascending order.
    pub fn sorted_neighbor_order(&self, i: usize) -> Vec<usize> {
        let row = &self.adjacency[i];
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by_key(|&j| row[j]);
        order
    }
}

/// Classic CSR over incoming edges: row `g` lists the sources of edges into
/// `g`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InCsr {
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    pub distribution: Distribution,
    pub models: ModelTable,
    pub partitions: Vec<PartitionBlock>,
}

impl Network {
    /// Builds a network from per-target incoming edge lists, deriving the
    /// undirected adjacency and the `none` placeholders. Neighbor lists come
    /// out ascending; events are routed to the partition owning their target.
    pub fn assemble(
        distribution: Distribution,
        models: ModelTable,
        coords: Vec<[f64; 3]>,
        vertex_state: Vec<VertexState>,
        incoming: Vec<Vec<(usize, EdgeState)>>,
        events: Vec<Event>,
    ) -> Result<Network> {
        let n = distribution.vertex_count();
        for (what, len) in [
            ("coords", coords.len()),
            ("vertex states", vertex_state.len()),
            ("incoming lists", incoming.len()),
        ] {
            if len != n {
                return Err(Error::Assemble(format!("{len} {what} for {n} vertices")));
            }
        }
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (g, row) in incoming.iter().enumerate() {
            for &(u, _) in row {
                if u >= n {
                    return Err(Error::IndexOutOfRange { index: u, n });
                }
                outgoing[u].push(g);
            }
        }

        let mut partitions: Vec<PartitionBlock> = (0..distribution.parts())
            .map(|p| PartitionBlock {
                part_index: p,
                ..Default::default()
            })
            .collect();
        let mut coords = coords.into_iter();
        let mut vertex_state = vertex_state.into_iter();
        for (g, (mut ins, outs)) in incoming.into_iter().zip(outgoing).enumerate() {
            let p = distribution.owner_of(g)?;
            ins.sort_by_key(|&(u, _)| u);
            // outs is ascending by construction; merge the two sorted lists.
            let mut adj = Vec::with_capacity(ins.len() + outs.len());
            let mut edges = Vec::with_capacity(ins.len() + outs.len());
            let mut ins = ins.into_iter().peekable();
            let mut outs = outs.into_iter().peekable();
            loop {
                match (ins.peek(), outs.peek()) {
                    (Some(&(u, _)), Some(&o)) if u == o => {
                        let (u, e) = ins.next().unwrap();
                        outs.next();
                        adj.push(u);
                        edges.push(e);
                    }
                    (Some(&(u, _)), Some(&o)) if u < o => {
                        let (u, e) = ins.next().unwrap();
                        adj.push(u);
                        edges.push(e);
                    }
                    (_, Some(_)) => {
                        adj.push(outs.next().unwrap());
                        edges.push(EdgeState::none());
                    }
                    (Some(_), None) => {
                        let (u, e) = ins.next().unwrap();
                        adj.push(u);
                        edges.push(e);
                    }
                    (None, None) => break,
                }
            }
            let block = &mut partitions[p];
            block.adjacency.push(adj);
            block.edge_state.push(edges);
            block.coords.push(coords.next().unwrap());
            block.vertex_state.push(vertex_state.next().unwrap());
        }
        for ev in events {
            let p = distribution.owner_of(ev.target)?;
            partitions[p].events.push(ev);
        }
        Ok(Network {
            distribution,
            models,
            partitions,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.distribution.vertex_count()
    }

    pub fn parts(&self) -> usize {
        self.distribution.parts()
    }

    /// Total directed edge count `m`.
    pub fn edge_count(&self) -> usize {
        self.partitions.iter().map(PartitionBlock::edge_count).sum()
    }

    pub fn event_count(&self) -> usize {
        self.partitions.iter().map(|b| b.events.len()).sum()
    }

    pub fn owner_of(&self, g: usize) -> Result<usize> {
        self.distribution.owner_of(g)
    }

    /// (partition, local index) of a global vertex.
    pub fn locate(&self, g: usize) -> Result<(usize, usize)> {
        let p = self.distribution.owner_of(g)?;
        Ok((p, g - self.distribution.offsets()[p]))
    }

    pub fn block_of(&self, g: usize) -> Result<(&PartitionBlock, usize)> {
        let (p, i) = self.locate(g)?;
        Ok((&self.partitions[p], i))
    }

    /// Number of directed edges whose target is `g`.
    pub fn in_degree(&self, g: usize) -> Result<usize> {
        let (block, i) = self.block_of(g)?;
        Ok(block.edge_state[i].iter().filter(|e| !e.is_none()).count())
    }

    /// In-degrees in global vertex order.
    pub fn in_degrees(&self) -> Vec<usize> {
        self.partitions
            .iter()
            .flat_map(|b| {
                b.edge_state
                    .iter()
                    .map(|row| row.iter().filter(|e| !e.is_none()).count())
            })
            .collect()
    }

    pub fn in_csr(&self) -> InCsr {
        let mut row_ptr = Vec::with_capacity(self.vertex_count() + 1);
        let mut col = Vec::new();
        row_ptr.push(0);
        for block in &self.partitions {
            for (adj, edges) in block.adjacency.iter().zip(&block.edge_state) {
                let start = col.len();
                col.extend(
                    adj.iter()
                        .zip(edges)
                        .filter(|(_, e)| !e.is_none())
                        .map(|(&u, _)| u),
                );
                col[start..].sort_unstable();
                row_ptr.push(col.len());
            }
        }
        InCsr { row_ptr, col }
    }

    /// Visits every directed edge as (source, target, state), in global
    /// target order and stored neighbor order.
    pub fn for_each_edge(&self, mut f: impl FnMut(usize, usize, &EdgeState)) {
        for (p, block) in self.partitions.iter().enumerate() {
            let first = self.distribution.offsets()[p];
            for (i, (adj, edges)) in block.adjacency.iter().zip(&block.edge_state).enumerate() {
                for (&u, e) in adj.iter().zip(edges) {
                    if !e.is_none() {
                        f(u, first + i, e);
                    }
                }
            }
        }
    }

    /// Coordinates in global vertex order.
    pub fn coords(&self) -> Vec<[f64; 3]> {
        self.partitions
            .iter()
            .flat_map(|b| b.coords.iter().copied())
            .collect()
    }

    /// Sorts every neighbor line ascending (permuting edge state along) and
    /// every event list canonically. Saving does this implicitly.
    pub fn canonicalize(&mut self) {
        for block in &mut self.partitions {
            for i in 0..block.adjacency.len() {
                let order = block.sorted_neighbor_order(i);
                block.adjacency[i] = order.iter().map(|&j| block.adjacency[i][j]).collect();
                block.edge_state[i] = order.iter().map(|&j| block.edge_state[i][j].clone()).collect();
            }
            block.events.sort_by(Event::canonical_cmp);
        }
    }

    /// Compares two networks up to neighbor order and event order, with
    /// floats compared bitwise. Returns a description of the first
    /// divergence, or `None` if they are equal.
    pub fn first_difference(&self, other: &Network) -> Option<String> {
        if self.distribution != other.distribution {
            return Some(format!(
                "distribution differs: {:?} vs {:?}",
                self.distribution.offsets(),
                other.distribution.offsets()
            ));
        }
        if self.models.len() != other.models.len() {
            return Some(format!(
                "model count differs: {} vs {}",
                self.models.len(),
                other.models.len()
            ));
        }
        for ((_, a), (_, b)) in self.models.iter().zip(other.models.iter()) {
            let same = a.name == b.name
                && a.kind == b.kind
                && a.state_size == b.state_size
                && a.params.len() == b.params.len()
                && a.params
                    .iter()
                    .zip(&b.params)
                    .all(|((ka, va), (kb, vb))| ka == kb && va.to_bits() == vb.to_bits());
            if !same {
                return Some(format!("model {:?} differs from {:?}", a.name, b.name));
            }
        }
        if self.partitions.len() != other.partitions.len() {
            return Some("partition count differs".into());
        }
        let mut left = self.clone();
        let mut right = other.clone();
        left.canonicalize();
        right.canonicalize();
        for (p, (a, b)) in left.partitions.iter().zip(&right.partitions).enumerate() {
            if a.part_index != b.part_index {
                return Some(format!("partition index {} vs {}", a.part_index, b.part_index));
            }
            let first = self.distribution.offsets()[p];
            if a.vertex_count() != b.vertex_count() {
                return Some(format!("partition {p}: vertex count differs"));
            }
            for i in 0..a.vertex_count() {
                let g = first + i;
                if !bits_eq(&a.coords[i], &b.coords[i]) {
                    return Some(format!("vertex {g}: coordinates differ"));
                }
                if a.vertex_state[i].model != b.vertex_state[i].model
                    || !bits_eq(&a.vertex_state[i].values, &b.vertex_state[i].values)
                {
                    return Some(format!("vertex {g}: vertex state differs"));
                }
                if a.adjacency[i] != b.adjacency[i] {
                    return Some(format!("vertex {g}: neighbor lists differ"));
                }
                for (j, (ea, eb)) in a.edge_state[i].iter().zip(&b.edge_state[i]).enumerate() {
                    if ea.model != eb.model || !bits_eq(&ea.values, &eb.values) {
                        return Some(format!(
                            "vertex {g}: edge state for neighbor {} differs",
                            a.adjacency[i][j]
                        ));
                    }
                }
                if a.edge_state[i].len() != b.edge_state[i].len() {
                    return Some(format!("vertex {g}: edge state count differs"));
                }
            }
            if a.events.len() != b.events.len() {
                return Some(format!(
                    "partition {p}: {} vs {} events",
                    a.events.len(),
                    b.events.len()
                ));
            }
            for (ea, eb) in a.events.iter().zip(&b.events) {
                if ea.canonical_cmp(eb) != Ordering::Equal {
                    return Some(format!(
                        "partition {p}: event {}->{} @ {} differs",
                        ea.source, ea.target, ea.arrival_time
                    ));
                }
            }
        }
        None
    }

    pub fn semantically_eq(&self, other: &Network) -> bool {
        self.first_difference(other).is_none()
    }
}

fn bits_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn lif_syn_models() -> ModelTable {
        ModelTable::new(vec![
            Model::new("lif", ModelKind::Vertex, 2),
            Model::new("syn", ModelKind::Edge, 2),
        ])
        .unwrap()
    }

    /// Network over `n` vertices with the given directed edges, weight 0.5 and
    /// delay 1 on every synapse, `k` contiguous partitions.
    pub fn from_edges(n: usize, k: usize, edges: &[(usize, usize)]) -> Network {
        let models = lif_syn_models();
        let syn = models.id("syn").unwrap();
        let lif = models.id("lif").unwrap();
        let mut incoming = vec![Vec::new(); n];
        for &(u, g) in edges {
            incoming[g].push((u, EdgeState::new(syn, &[0.5, 1.0])));
        }
        Network::assemble(
            Distribution::contiguous(n, k).unwrap(),
            models,
            (0..n).map(|g| [g as f64, 0.0, 0.0]).collect(),
            (0..n)
                .map(|_| VertexState {
                    model: lif,
                    values: Tuple::from_slice(&[0.0, 0.0]),
                })
                .collect(),
            incoming,
            Vec::new(),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::from_edges;
    use super::*;

    #[test]
    fn owner_of_examples() {
        let d = Distribution::new(vec![0, 4, 7, 10]).unwrap();
        assert_eq!(d.owner_of(5).unwrap(), 1);
        assert_eq!(d.owner_of(0).unwrap(), 0);
        assert_eq!(d.owner_of(9).unwrap(), 2);
        assert!(matches!(
            d.owner_of(10),
            Err(Error::IndexOutOfRange { index: 10, n: 10 })
        ));
        let single = Distribution::new(vec![0, 10]).unwrap();
        assert_eq!(single.owner_of(0).unwrap(), 0);
    }

    #[test]
    fn owner_of_skips_empty_partitions() {
        let d = Distribution::new(vec![0, 0, 3, 3, 5]).unwrap();
        assert_eq!(d.owner_of(0).unwrap(), 1);
        assert_eq!(d.owner_of(2).unwrap(), 1);
        assert_eq!(d.owner_of(3).unwrap(), 3);
    }

    #[test]
    fn distribution_rejects_bad_offsets() {
        assert!(Distribution::new(vec![0]).is_err());
        assert!(Distribution::new(vec![1, 4]).is_err());
        assert!(Distribution::new(vec![0, 7, 4]).is_err());
        assert!(Distribution::contiguous(5, 0).is_err());
        let d = Distribution::contiguous(10, 3).unwrap();
        assert_eq!(d.offsets(), &[0, 3, 6, 10]);
    }

    #[test]
    fn model_table_rejects_reserved_and_duplicates() {
        assert!(ModelTable::new(vec![Model::new("none", ModelKind::Edge, 0)]).is_err());
        assert!(ModelTable::new(vec![
            Model::new("a", ModelKind::Edge, 0),
            Model::new("a", ModelKind::Vertex, 1),
        ])
        .is_err());
        assert!(ModelTable::new(vec![Model::new("a b", ModelKind::Edge, 0)]).is_err());
    }

    #[test]
    fn in_degree_examples() {
        let net = from_edges(3, 1, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(net.in_degree(2).unwrap(), 2);
        assert_eq!(net.in_degree(0).unwrap(), 0);
        assert!(net.in_degree(3).is_err());
        let single = from_edges(1, 1, &[]);
        assert_eq!(single.in_degree(0).unwrap(), 0);
    }

    #[test]
    fn in_csr_examples() {
        let net = from_edges(3, 2, &[(0, 1), (0, 2), (1, 2)]);
        let csr = net.in_csr();
        assert_eq!(csr.row_ptr, vec![0, 0, 1, 3]);
        assert_eq!(csr.col, vec![0, 0, 1]);

        let empty = from_edges(3, 1, &[]);
        assert_eq!(empty.in_csr().row_ptr, vec![0, 0, 0, 0]);
        assert!(empty.in_csr().col.is_empty());

        let one = from_edges(2, 1, &[(1, 0)]);
        assert_eq!(one.in_csr(), InCsr { row_ptr: vec![0, 1, 1], col: vec![1] });
    }

    #[test]
    fn assemble_places_none_on_the_source_side() {
        let net = from_edges(2, 2, &[(1, 0)]);
        assert_eq!(net.partitions[0].adjacency, vec![vec![1]]);
        assert!(!net.partitions[0].edge_state[0][0].is_none());
        assert_eq!(net.partitions[1].adjacency, vec![vec![0]]);
        assert!(net.partitions[1].edge_state[0][0].is_none());
        assert_eq!(net.edge_count(), 1);
    }

    #[test]
    fn reciprocal_pair_stores_both_directions() {
        let net = from_edges(2, 1, &[(1, 0), (0, 1)]);
        assert_eq!(net.edge_count(), 2);
        assert!(net.partitions[0].edge_state.iter().flatten().all(|e| !e.is_none()));
    }

    #[test]
    fn first_difference_ignores_neighbor_order() {
        let a = from_edges(4, 2, &[(0, 1), (2, 1), (3, 1)]);
        let mut b = a.clone();
        b.partitions[0].adjacency[1].reverse();
        b.partitions[0].edge_state[1].reverse();
        assert!(a.semantically_eq(&b));
        b.partitions[0].edge_state[1][0].values[0] = 0.25;
        assert!(a.first_difference(&b).unwrap().contains("vertex 1"));
    }
}
