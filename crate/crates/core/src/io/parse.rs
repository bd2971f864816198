use std::collections::HashSet;

use super::text::{lines, parse_f64, parse_index, tokens};
use super::ParseError;
use crate::model::{
    is_token, Distribution, EdgeState, Event, Model, ModelKind, ModelTable, Tuple, VertexState,
    NONE_MODEL,
};
use crate::validate::Code;

type Result<T> = std::result::Result<T, ParseError>;

pub fn parse_dist(text: &str) -> Result<Distribution> {
    let rows: Vec<_> = lines(text).collect();
    let (line, row) = match rows.as_slice() {
        [only] => *only,
        [] => return Err(ParseError::whole_file(Code::Dist, "empty distribution file")),
        _ => {
            return Err(ParseError::new(
                Code::Dist,
                2,
                format!("expected a single line, found {}", rows.len()),
            ))
        }
    };
    let offsets = tokens(row)
        .map(|t| {
            parse_index(t).ok_or_else(|| {
                ParseError::new(Code::Syntax, line, format!("{t:?} is not a vertex offset"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(offsets).map_err(|e| ParseError::new(Code::Dist, line, e.to_string()))
}

pub fn parse_model(text: &str) -> Result<ModelTable> {
    let mut table = ModelTable::default();
    for (line, row) in lines(text) {
        let mut toks = tokens(row);
        let Some(name) = toks.next() else { continue };
        let err = |code, msg: String| ParseError::new(code, line, msg);
        if name == NONE_MODEL {
            return Err(err(
                Code::ModelDef,
                format!("{NONE_MODEL:?} is reserved and cannot be declared"),
            ));
        }
        if !is_token(name) {
            return Err(err(Code::Syntax, format!("model name {name:?} is not a token")));
        }
        let kind = match toks.next() {
            Some("vertex") => ModelKind::Vertex,
            Some("edge") => ModelKind::Edge,
            Some(other) => {
                return Err(err(
                    Code::ModelDef,
                    format!("model {name}: kind {other:?} is neither vertex nor edge"),
                ))
            }
            None => return Err(err(Code::Syntax, format!("model {name}: missing kind"))),
        };
        let size = match toks.next() {
            Some(t) if t.starts_with('-') && t[1..].bytes().all(|b| b.is_ascii_digit()) && t.len() > 1 => {
                return Err(err(
                    Code::ModelDef,
                    format!("model {name}: negative state size {t}"),
                ))
            }
            Some(t) => parse_index(t).ok_or_else(|| {
                err(Code::Syntax, format!("model {name}: state size {t:?} is not an integer"))
            })?,
            None => return Err(err(Code::Syntax, format!("model {name}: missing state size"))),
        };
        let mut model = Model::new(name, kind, size);
        for t in toks {
            let parsed = t
                .split_once('=')
                .filter(|(k, _)| !k.is_empty())
                .and_then(|(k, v)| parse_f64(v).map(|v| (k, v)));
            let Some((key, value)) = parsed else {
                return Err(err(
                    Code::Syntax,
                    format!("model {name}: malformed parameter {t:?}, expected key=value"),
                ));
            };
            if model.param(key).is_some() {
                return Err(err(
                    Code::ModelDef,
                    format!("model {name}: parameter {key} given twice"),
                ));
            }
            model.params.push((key.to_string(), value));
        }
        table
            .push(model)
            .map_err(|e| err(Code::ModelDef, e.to_string()))?;
    }
    Ok(table)
}

fn check_row_count(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        Err(ParseError::new(
            Code::RowCount,
            found.min(expected) + 1,
            format!("expected {expected} lines, found {found}"),
        ))
    } else {
        Ok(())
    }
}

pub fn parse_adjacency(text: &str, dist: &Distribution, p: usize) -> Result<Vec<Vec<usize>>> {
    let n = dist.vertex_count();
    let first = dist.offsets()[p];
    let expected = dist.part_size(p);
    let mut rows = Vec::with_capacity(expected);
    let mut seen = HashSet::new();
    for (line, row) in lines(text) {
        if rows.len() == expected {
            check_row_count(lines(text).count(), expected)?;
        }
        let g = first + rows.len();
        let mut nbrs = Vec::new();
        seen.clear();
        for t in tokens(row) {
            let u = parse_index(t).ok_or_else(|| {
                ParseError::new(Code::Syntax, line, format!("{t:?} is not a vertex index"))
            })?;
            if u >= n {
                return Err(ParseError::new(
                    Code::BadRef,
                    line,
                    format!("neighbor {u} out of range (n = {n})"),
                ));
            }
            if u == g {
                return Err(ParseError::new(Code::SelfLoop, line, format!("vertex {g} lists itself")));
            }
            if !seen.insert(u) {
                return Err(ParseError::new(Code::DupNbr, line, format!("neighbor {u} listed twice")));
            }
            nbrs.push(u);
        }
        rows.push(nbrs);
    }
    check_row_count(rows.len(), expected)?;
    Ok(rows)
}

pub fn parse_coord(text: &str, expected_count: usize) -> Result<Vec<[f64; 3]>> {
    let mut out = Vec::with_capacity(expected_count);
    for (line, row) in lines(text) {
        if out.len() == expected_count {
            check_row_count(lines(text).count(), expected_count)?;
        }
        let mut xyz = [0.0; 3];
        let mut count = 0;
        for t in tokens(row) {
            if count == 3 {
                return Err(ParseError::new(Code::Syntax, line, "more than 3 coordinates"));
            }
            xyz[count] = parse_f64(t).ok_or_else(|| {
                ParseError::new(Code::Syntax, line, format!("{t:?} is not a number"))
            })?;
            count += 1;
        }
        if count != 3 {
            return Err(ParseError::new(
                Code::Syntax,
                line,
                format!("expected 3 coordinates, found {count}"),
            ));
        }
        out.push(xyz);
    }
    check_row_count(out.len(), expected_count)?;
    Ok(out)
}

/// Vertex and edge state parsed from one `.state.p` file.
#[derive(Clone, Debug, PartialEq)]
pub struct StateRows {
    pub vertex_state: Vec<VertexState>,
    pub edge_state: Vec<Vec<EdgeState>>,
}

struct StateLine<'a, I: Iterator<Item = &'a str>> {
    toks: std::iter::Peekable<I>,
    line: usize,
    models: &'a ModelTable,
}

impl<'a, I: Iterator<Item = &'a str>> StateLine<'a, I> {
    fn err(&self, code: Code, msg: String) -> ParseError {
        ParseError::new(code, self.line, msg)
    }

    fn is_model_token(&self, t: &str) -> bool {
        t == NONE_MODEL || self.models.id(t).is_some()
    }

    fn values(&mut self, model: &Model, what: &str) -> Result<Tuple> {
        let mut values = Tuple::with_capacity(model.state_size);
        for i in 0..model.state_size {
            let Some(t) = self.toks.next() else {
                return Err(self.err(
                    Code::TupleLen,
                    format!("{what}: {} expects {} values, line ends after {i}", model.name, model.state_size),
                ));
            };
            match parse_f64(t) {
                Some(v) => values.push(v),
                None if self.is_model_token(t) => {
                    return Err(self.err(
                        Code::TupleLen,
                        format!("{what}: {} expects {} values, found {i}", model.name, model.state_size),
                    ))
                }
                None => return Err(self.err(Code::Syntax, format!("{what}: {t:?} is not a number"))),
            }
        }
        Ok(values)
    }

    fn model(&self, t: &str, want: ModelKind, what: &str) -> Result<&'a Model> {
        match self.models.by_name(t) {
            Some(m) if m.kind == want => Ok(m),
            Some(m) => Err(self.err(
                Code::KindMismatch,
                format!("{what}: {} is a {} model", m.name, m.kind.as_str()),
            )),
            None if t == NONE_MODEL => Err(self.err(
                Code::KindMismatch,
                format!("{what}: {NONE_MODEL} is only valid for edges"),
            )),
            None if parse_f64(t).is_some() => Err(self.err(
                Code::TupleLen,
                format!("{what}: found value {t} where a model name was expected"),
            )),
            None => Err(self.err(Code::UnkModel, format!("{what}: unknown model {t:?}"))),
        }
    }
}

/// Parses state rows aligned with already-parsed adjacency: each line holds
/// the vertex model and tuple, then one entry per neighbor in adjacency
/// order. `none` entries consume no values.
pub fn parse_state(text: &str, adjacency: &[Vec<usize>], models: &ModelTable) -> Result<StateRows> {
    let expected = adjacency.len();
    let mut vertex_state = Vec::with_capacity(expected);
    let mut edge_state = Vec::with_capacity(expected);
    for (line, row) in lines(text) {
        let i = vertex_state.len();
        if i == expected {
            check_row_count(lines(text).count(), expected)?;
        }
        let mut cur = StateLine {
            toks: tokens(row).peekable(),
            line,
            models,
        };
        let Some(vname) = cur.toks.next() else {
            return Err(cur.err(Code::Syntax, "missing vertex model".into()));
        };
        let vmodel = cur.model(vname, ModelKind::Vertex, "vertex")?;
        let values = cur.values(vmodel, "vertex")?;
        vertex_state.push(VertexState {
            model: models.id(&vmodel.name).unwrap(),
            values,
        });

        let mut edges = Vec::with_capacity(adjacency[i].len());
        for &u in &adjacency[i] {
            let what = format!("edge from {u}");
            let Some(ename) = cur.toks.next() else {
                return Err(cur.err(
                    Code::EdgeCount,
                    format!("{} edge entries for {} neighbors", edges.len(), adjacency[i].len()),
                ));
            };
            if ename == NONE_MODEL {
                edges.push(EdgeState::none());
                continue;
            }
            let emodel = cur.model(ename, ModelKind::Edge, &what)?;
            let values = cur.values(emodel, &what)?;
            edges.push(EdgeState {
                model: models.id(&emodel.name),
                values,
            });
        }
        if let Some(t) = cur.toks.next() {
            let code = if parse_f64(t).is_some() {
                Code::TupleLen
            } else {
                Code::EdgeCount
            };
            return Err(cur.err(code, format!("unexpected trailing token {t:?}")));
        }
        edge_state.push(edges);
    }
    check_row_count(vertex_state.len(), expected)?;
    Ok(StateRows {
        vertex_state,
        edge_state,
    })
}

pub fn parse_event(text: &str, dist: &Distribution, p: usize) -> Result<Vec<Event>> {
    let n = dist.vertex_count();
    let mut events = Vec::new();
    for (line, row) in lines(text) {
        let mut toks = tokens(row);
        let Some(first) = toks.next() else { continue };
        let err = |code, msg: String| ParseError::new(code, line, msg);
        let index = |t: Option<&str>, what: &str| -> Result<usize> {
            let t = t.ok_or_else(|| err(Code::Syntax, format!("missing {what}")))?;
            let g = parse_index(t)
                .ok_or_else(|| err(Code::Syntax, format!("{what} {t:?} is not a vertex index")))?;
            if g >= n {
                return Err(err(Code::BadRef, format!("{what} {g} out of range (n = {n})")));
            }
            Ok(g)
        };
        let target = index(Some(first), "target")?;
        if !dist.range(p).contains(&target) {
            return Err(err(
                Code::EvtOwner,
                format!(
                    "target {target} is owned by partition {}, not {p}",
                    dist.owner_of(target).unwrap_or(usize::MAX)
                ),
            ));
        }
        let source = index(toks.next(), "source")?;
        let arrival_time = match toks.next() {
            None => return Err(err(Code::Syntax, "missing arrival time".into())),
            Some(t) => parse_f64(t)
                .ok_or_else(|| err(Code::Syntax, format!("arrival time {t:?} is not a number")))?,
        };
        if !(arrival_time >= 0.0 && arrival_time.is_finite()) {
            return Err(err(
                Code::EvtTime,
                format!("arrival time {arrival_time} must be finite and non-negative"),
            ));
        }
        let event_type = match toks.next() {
            None => return Err(err(Code::Syntax, "missing event type".into())),
            Some(t) if is_token(t) => t.to_string(),
            Some(t) => return Err(err(Code::Token, format!("event type {t:?} is not a token"))),
        };
        let data = toks
            .map(|t| {
                parse_f64(t).ok_or_else(|| err(Code::Syntax, format!("event data {t:?} is not a number")))
            })
            .collect::<Result<Tuple>>()?;
        events.push(Event {
            target,
            source,
            arrival_time,
            event_type,
            data,
        });
    }
    Ok(events)
}
