use super::text::{push_f64, push_usize};
use crate::model::{Distribution, Event, ModelTable, PartitionBlock};

pub fn write_dist(dist: &Distribution) -> String {
    let mut out = String::new();
    for (i, &o) in dist.offsets().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        push_usize(&mut out, o);
    }
    out.push('\n');
    out
}

pub fn write_model(models: &ModelTable) -> String {
    let mut out = String::new();
    for (_, m) in models.iter() {
        out.push_str(&m.name);
        out.push(' ');
        out.push_str(m.kind.as_str());
        out.push(' ');
        push_usize(&mut out, m.state_size);
        for (key, value) in &m.params {
            out.push(' ');
            out.push_str(key);
            out.push('=');
            push_f64(&mut out, *value);
        }
        out.push('\n');
    }
    out
}

fn push_values(out: &mut String, values: &[f64]) {
    for &v in values {
        out.push(' ');
        push_f64(out, v);
    }
}

/// Neighbors in ascending order.
pub fn write_adjacency(block: &PartitionBlock) -> String {
    let mut out = String::new();
    let mut sorted = Vec::new();
    for row in &block.adjacency {
        sorted.clear();
        sorted.extend_from_slice(row);
        sorted.sort_unstable();
        for (j, &u) in sorted.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            push_usize(&mut out, u);
        }
        out.push('\n');
    }
    out
}

pub fn write_coord(block: &PartitionBlock) -> String {
    let mut out = String::new();
    for [x, y, z] in &block.coords {
        push_f64(&mut out, *x);
        out.push(' ');
        push_f64(&mut out, *y);
        out.push(' ');
        push_f64(&mut out, *z);
        out.push('\n');
    }
    out
}

/// Edge entries follow the ascending neighbor order used by
/// [`write_adjacency`].
pub fn write_state(block: &PartitionBlock, models: &ModelTable) -> String {
    let mut out = String::new();
    for (i, vs) in block.vertex_state.iter().enumerate() {
        out.push_str(models.get(vs.model).map_or("?", |m| m.name.as_str()));
        push_values(&mut out, &vs.values);
        for j in block.sorted_neighbor_order(i) {
            let e = &block.edge_state[i][j];
            out.push(' ');
            out.push_str(models.edge_name(e.model));
            push_values(&mut out, &e.values);
        }
        out.push('\n');
    }
    out
}

/// Events sorted by (arrival time, target, source, type, data).
pub fn write_event(block: &PartitionBlock) -> String {
    let mut events: Vec<&Event> = block.events.iter().collect();
    events.sort_by(|a, b| a.canonical_cmp(b));
    let mut out = String::new();
    for ev in events {
        push_usize(&mut out, ev.target);
        out.push(' ');
        push_usize(&mut out, ev.source);
        out.push(' ');
        push_f64(&mut out, ev.arrival_time);
        out.push(' ');
        out.push_str(&ev.event_type);
        push_values(&mut out, &ev.data);
        out.push('\n');
    }
    out
}
