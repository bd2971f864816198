//! Exports to formats read by external graph tools.

use super::text::{lines, parse_index, push_f64, push_usize, tokens};
use super::ParseError;
use crate::model::Network;
use crate::validate::Code;

/// METIS graph file: header `n m` where `m` counts adjacent vertex pairs,
/// then one line per vertex with its 1-based undirected neighbors ascending.
pub fn export_metis(net: &Network) -> String {
    let total: usize = net
        .partitions
        .iter()
        .flat_map(|b| b.adjacency.iter().map(Vec::len))
        .sum();
    let mut out = String::new();
    push_usize(&mut out, net.vertex_count());
    out.push(' ');
    push_usize(&mut out, total / 2);
    out.push('\n');
    let mut row = Vec::new();
    for block in &net.partitions {
        for adj in &block.adjacency {
            row.clear();
            row.extend_from_slice(adj);
            row.sort_unstable();
            for (j, &u) in row.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                push_usize(&mut out, u + 1);
            }
            out.push('\n');
        }
    }
    out
}

/// Reads an unweighted METIS graph back into 0-based neighbor lists.
/// Comment lines start with `%`. Returns the header edge count alongside.
pub fn parse_metis(text: &str) -> Result<(usize, Vec<Vec<usize>>), ParseError> {
    let mut rows = lines(text).filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = rows
        .next()
        .ok_or_else(|| ParseError::whole_file(Code::Syntax, "missing header"))?;
    let head: Vec<&str> = tokens(header).collect();
    let (n, m) = match head.as_slice() {
        [n, m] | [n, m, "0"] | [n, m, "000"] => (
            parse_index(n).ok_or_else(|| ParseError::new(Code::Syntax, hline, "bad vertex count"))?,
            parse_index(m).ok_or_else(|| ParseError::new(Code::Syntax, hline, "bad edge count"))?,
        ),
        _ => {
            return Err(ParseError::new(
                Code::Syntax,
                hline,
                "expected header `n m` (weighted graphs are not supported)",
            ))
        }
    };
    let mut adjacency = Vec::with_capacity(n);
    for (line, row) in rows {
        if adjacency.len() == n {
            return Err(ParseError::new(Code::RowCount, line, format!("more than {n} vertex lines")));
        }
        let nbrs = tokens(row)
            .map(|t| match parse_index(t) {
                Some(u) if (1..=n).contains(&u) => Ok(u - 1),
                _ => Err(ParseError::new(Code::BadRef, line, format!("bad neighbor {t:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        adjacency.push(nbrs);
    }
    if adjacency.len() != n {
        return Err(ParseError::whole_file(
            Code::RowCount,
            format!("expected {n} vertex lines, found {}", adjacency.len()),
        ));
    }
    Ok((m, adjacency))
}

/// One line per directed edge, `source target model values...`, sorted by
/// (target, source).
pub fn export_edgelist(net: &Network) -> String {
    let mut out = String::new();
    let mut row = Vec::new();
    for (p, block) in net.partitions.iter().enumerate() {
        let first = net.distribution.offsets()[p];
        for (i, (adj, edges)) in block.adjacency.iter().zip(&block.edge_state).enumerate() {
            row.clear();
            row.extend(adj.iter().zip(edges).filter(|(_, e)| !e.is_none()));
            row.sort_unstable_by_key(|(u, _)| **u);
            for (&u, e) in &row {
                push_usize(&mut out, u);
                out.push(' ');
                push_usize(&mut out, first + i);
                out.push(' ');
                out.push_str(net.models.edge_name(e.model));
                for &v in &e.values {
                    out.push(' ');
                    push_f64(&mut out, v);
                }
                out.push('\n');
            }
        }
    }
    out
}
