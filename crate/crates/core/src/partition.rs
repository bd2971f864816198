//! Partition assignment, redistribution and quality metrics.

use std::fmt::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::ParseError;
use crate::model::{Distribution, Event, Network, PartitionBlock};
use crate::validate::{validate, Code};

/// Part index per global vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    parts: Vec<usize>,
    k: usize,
}

impl Assignment {
    pub fn new(parts: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Assignment("k must be at least 1".into()));
        }
        if let Some((g, &a)) = parts.iter().enumerate().find(|(_, &a)| a >= k) {
            return Err(Error::Assignment(format!("vertex {g} assigned to part {a}, k = {k}")));
        }
        Ok(Assignment { parts, k })
    }

    /// The assignment a distribution already encodes.
    pub fn from_distribution(dist: &Distribution) -> Self {
        let mut parts = Vec::with_capacity(dist.vertex_count());
        for p in 0..dist.parts() {
            parts.extend(std::iter::repeat_n(p, dist.part_size(p)));
        }
        Assignment { parts, k: dist.parts() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &a in &self.parts {
            sizes[a] += 1;
        }
        sizes
    }

    /// Old-to-new vertex index map: vertices sorted by (part, old index).
    pub fn renumbering(&self) -> Vec<usize> {
        let mut next: Vec<usize> = Vec::with_capacity(self.k);
        let mut acc = 0;
        for s in self.part_sizes() {
            next.push(acc);
            acc += s;
        }
        self.parts
            .iter()
            .map(|&a| {
                let g = next[a];
                next[a] += 1;
                g
            })
            .collect()
    }

    /// One part index per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.parts.len() * 2);
        for a in &self.parts {
            writeln!(out, "{a}").unwrap();
        }
        out
    }
}

/// Reads a partition vector: exactly `n` lines, one part index each.
pub fn assignment_from_file(text: &str, n: usize, k: usize) -> Result<Assignment> {
    let rows: Vec<(usize, &str)> = crate::io::lines(text).collect();
    if rows.len() != n {
        return Err(ParseError::whole_file(
            Code::RowCount,
            format!("expected {n} lines, found {}", rows.len()),
        )
        .into());
    }
    let mut parts = Vec::with_capacity(n);
    for (line, row) in rows {
        let mut toks = row.split_ascii_whitespace();
        let a = match (toks.next(), toks.next()) {
            (Some(t), None) => t
                .parse::<usize>()
                .ok()
                .filter(|_| t.bytes().all(|b| b.is_ascii_digit())),
            _ => None,
        }
        .ok_or_else(|| ParseError::new(Code::Syntax, line, "expected one part index"))?;
        if a >= k {
            return Err(ParseError::new(Code::BadRef, line, format!("part {a} out of range (k = {k})")).into());
        }
        parts.push(a);
    }
    Assignment::new(parts, k)
}

/// Bins vertices into a `grid` of equal cells spanning the coordinate bounding
/// box, walks the cells in lexicographic (x, y, z) order and fills part `j`
/// until the running vertex count reaches `ceil(n (j+1) / k)`. Whole cells go
/// to one part. Cells are half-open except the last along each axis, and an
/// axis with zero extent collapses to a single cell.
pub fn voxel_partition(coords: &[[f64; 3]], grid: [usize; 3], k: usize) -> Result<Assignment> {
    let n = coords.len();
    if k == 0 || k > n && n > 0 {
        return Err(Error::Assignment(format!("cannot split {n} vertices into {k} parts")));
    }
    if grid.contains(&0) {
        return Err(Error::Assignment(format!("grid dimensions must be at least 1, got {grid:?}")));
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for c in coords {
        for a in 0..3 {
            if !c[a].is_finite() {
                return Err(Error::Assignment("non-finite coordinate".into()));
            }
            lo[a] = lo[a].min(c[a]);
            hi[a] = hi[a].max(c[a]);
        }
    }
    let cells_per_axis: [usize; 3] =
        std::array::from_fn(|a| if n == 0 || hi[a] <= lo[a] { 1 } else { grid[a] });
    let cell_of = |c: &[f64; 3]| -> usize {
        let mut idx = 0;
        for a in 0..3 {
            let cells = cells_per_axis[a];
            let i = if cells == 1 {
                0
            } else {
                let f = (c[a] - lo[a]) / (hi[a] - lo[a]) * cells as f64;
                (f.floor() as usize).min(cells - 1)
            };
            idx = idx * cells + i;
        }
        idx
    };
    let total_cells = cells_per_axis.iter().product::<usize>();
    let cell: Vec<usize> = coords.iter().map(cell_of).collect();
    let mut counts = vec![0usize; total_cells];
    for &c in &cell {
        counts[c] += 1;
    }

    let target = |j: usize| (n * (j + 1)).div_ceil(k);
    let mut cell_part = vec![0usize; total_cells];
    let mut j = 0;
    let mut filled = 0;
    for (c, &count) in counts.iter().enumerate() {
        cell_part[c] = j;
        filled += count;
        while j + 1 < k && filled >= target(j) {
            j += 1;
        }
    }
    Assignment::new(cell.into_iter().map(|c| cell_part[c]).collect(), k)
}

/// Rebuilds `net` under assignment `a`. Vertices are renumbered so each part
/// owns a contiguous global range (see [`Assignment::renumbering`]); all
/// indices in adjacency, state and events are remapped and events move to the
/// partition owning their new target.
pub fn redistribute(net: &Network, a: &Assignment) -> Result<Network> {
    let n = net.vertex_count();
    if a.len() != n {
        return Err(Error::Assignment(format!("{} entries for {n} vertices", a.len())));
    }
    let report = validate(net);
    if !report.is_empty() {
        return Err(Error::Invalid(report));
    }
    let new_of = a.renumbering();
    let mut old_of = vec![0; n];
    for (old, &new) in new_of.iter().enumerate() {
        old_of[new] = old;
    }
    let distribution = Distribution::from_sizes(&a.part_sizes())?;

    let mut events: Vec<Vec<Event>> = vec![Vec::new(); a.k()];
    for block in &net.partitions {
        for ev in &block.events {
            let target = new_of[ev.target];
            events[a.parts()[ev.target]].push(Event {
                target,
                source: new_of[ev.source],
                ..ev.clone()
            });
        }
    }

    let partitions = events
        .into_par_iter()
        .enumerate()
        .map(|(p, events)| {
            let range = distribution.range(p);
            let mut block = PartitionBlock {
                part_index: p,
                adjacency: Vec::with_capacity(range.len()),
                coords: Vec::with_capacity(range.len()),
                vertex_state: Vec::with_capacity(range.len()),
                edge_state: Vec::with_capacity(range.len()),
                events,
            };
            for new in range {
                let (src, i) = net.block_of(old_of[new]).expect("validated index");
                block
                    .adjacency
                    .push(src.adjacency[i].iter().map(|&u| new_of[u]).collect());
                block.coords.push(src.coords[i]);
                block.vertex_state.push(src.vertex_state[i].clone());
                block.edge_state.push(src.edge_state[i].clone());
            }
            block
        })
        .collect();

    Ok(Network {
        distribution,
        models: net.models.clone(),
        partitions,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionMetrics {
    /// Directed edges whose endpoints lie in different parts.
    pub edge_cut: usize,
    /// Largest part size over `ceil(n / k)`.
    pub balance: f64,
    pub part_vertices: Vec<usize>,
    /// Directed edges stored in each part (counted at their target).
    pub part_edges: Vec<usize>,
}

pub fn metrics(net: &Network, a: &Assignment) -> Result<PartitionMetrics> {
    let n = net.vertex_count();
    if a.len() != n {
        return Err(Error::Assignment(format!("{} entries for {n} vertices", a.len())));
    }
    let parts = a.parts();
    let mut edge_cut = 0;
    let mut part_edges = vec![0; a.k()];
    let mut bad = None;
    net.for_each_edge(|u, g, _| {
        if u >= n {
            bad = Some(u);
            return;
        }
        part_edges[parts[g]] += 1;
        if parts[u] != parts[g] {
            edge_cut += 1;
        }
    });
    if let Some(u) = bad {
        return Err(Error::IndexOutOfRange { index: u, n });
    }
    let part_vertices = a.part_sizes();
    let ideal = n.div_ceil(a.k()).max(1);
    let balance = part_vertices.iter().copied().max().unwrap_or(0) as f64 / ideal as f64;
    Ok(PartitionMetrics {
        edge_cut,
        balance,
        part_vertices,
        part_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::from_edges;

    fn flat(xs: &[f64]) -> Vec<[f64; 3]> {
        xs.iter().map(|&x| [x, 0.0, 0.0]).collect()
    }

    #[test]
    fn voxel_examples() {
        let a = voxel_partition(&flat(&[0.1, 0.2, 0.6, 0.9]), [2, 1, 1], 2).unwrap();
        assert_eq!(a.parts(), &[0, 0, 1, 1]);

        let a = voxel_partition(&flat(&[0.3, 5.0, -2.0]), [4, 4, 4], 1).unwrap();
        assert_eq!(a.parts(), &[0, 0, 0]);

        let corners: Vec<[f64; 3]> = (0..8)
            .map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
            .collect();
        let a = voxel_partition(&corners, [2, 1, 1], 2).unwrap();
        for (c, &p) in corners.iter().zip(a.parts()) {
            assert_eq!(p, if c[0] < 0.5 { 0 } else { 1 });
        }
    }

    #[test]
    fn voxel_boundary_goes_to_upper_cell() {
        // Extent [0, 1] in 2 cells: 0.5 sits on the boundary.
        let a = voxel_partition(&flat(&[0.0, 0.5, 1.0, 0.25]), [2, 1, 1], 2).unwrap();
        assert_eq!(a.parts(), &[0, 1, 1, 0]);
    }

    #[test]
    fn voxel_degenerate_and_errors() {
        let same = vec![[1.0, 1.0, 1.0]; 4];
        assert_eq!(voxel_partition(&same, [3, 3, 3], 2).unwrap().parts(), &[0, 0, 0, 0]);
        assert!(voxel_partition(&flat(&[0.0, 1.0]), [2, 1, 1], 3).is_err());
        assert!(voxel_partition(&flat(&[0.0, 1.0]), [0, 1, 1], 1).is_err());
        assert!(voxel_partition(&[], [1, 1, 1], 1).unwrap().is_empty());
    }

    #[test]
    fn assignment_file_examples() {
        assert_eq!(assignment_from_file("0\n1\n0\n", 3, 2).unwrap().parts(), &[0, 1, 0]);
        assert!(assignment_from_file("0\n2\n", 2, 2).is_err());
        assert!(assignment_from_file("", 0, 2).unwrap().is_empty());
        assert!(assignment_from_file("0\n", 2, 2).is_err());
        assert!(assignment_from_file("0 1\n", 1, 2).is_err());
        let a = Assignment::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(assignment_from_file(&a.to_text(), 3, 2).unwrap(), a);
    }

    #[test]
    fn renumbering_sorts_by_part_then_index() {
        let a = Assignment::new(vec![1, 0, 1, 0], 2).unwrap();
        assert_eq!(a.renumbering(), vec![2, 0, 3, 1]);
    }

    #[test]
    fn identity_redistribution() {
        let net = from_edges(5, 2, &[(0, 1), (1, 2), (4, 0)]);
        let back = redistribute(&net, &Assignment::from_distribution(&net.distribution)).unwrap();
        assert!(net.semantically_eq(&back), "{:?}", net.first_difference(&back));
    }

    #[test]
    fn path_split_in_two() {
        let net = from_edges(4, 1, &[(0, 1), (1, 2), (2, 3)]);
        let a = Assignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let split = redistribute(&net, &a).unwrap();
        assert_eq!(split.distribution.offsets(), &[0, 2, 4]);
        assert!(validate(&split).is_empty());
        assert_eq!(split.partitions[1].adjacency, vec![vec![1, 3], vec![2]]);
        assert_eq!(split.in_csr(), net.in_csr());
    }

    #[test]
    fn redistribute_rejects_bad_input() {
        let net = from_edges(3, 1, &[(0, 1)]);
        let a = Assignment::new(vec![0, 1], 2).unwrap();
        assert!(matches!(redistribute(&net, &a), Err(Error::Assignment(_))));
    }

    #[test]
    fn metric_examples() {
        let path = from_edges(4, 1, &[(0, 1), (1, 2), (2, 3)]);
        let m = metrics(&path, &Assignment::new(vec![0, 0, 1, 1], 2).unwrap()).unwrap();
        assert_eq!(m.edge_cut, 1);
        assert_eq!(m.balance, 1.0);
        assert_eq!(m.part_edges, vec![1, 2]);

        let one = metrics(&path, &Assignment::from_distribution(&path.distribution)).unwrap();
        assert_eq!((one.edge_cut, one.balance), (0, 1.0));

        let tri = from_edges(3, 1, &[(0, 1), (1, 2), (2, 0)]);
        let m = metrics(&tri, &Assignment::new(vec![0, 1, 2], 3).unwrap()).unwrap();
        assert_eq!(m.edge_cut, 3);
    }
}
