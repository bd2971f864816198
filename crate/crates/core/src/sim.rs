//! Clock-driven leaky integrate-and-fire reference simulator.
//!
//! Vertices use the `lif` model (state `v r`: membrane potential and
//! remaining refractory steps) and edges the `syn` model (state `w d`: weight
//! and delay in ms). Each partition steps its own vertices; spikes become
//! events addressed to the partition owning the target and are exchanged at
//! the end of every step. Because every delay is at least one step, an event
//! emitted in step `s` is never due before step `s + 2`.
//!
//! Time bookkeeping is in whole steps. Step `s` integrates from `s * dt` to
//! `(s + 1) * dt`, consumes events arriving at `s * dt`, and a spike produced
//! in it is recorded at `(s + 1) * dt`; its events arrive at
//! `(s + 1) * dt + delay`. The clock is persisted as the `time` parameter of
//! the `lif` model line, so a checkpoint is an ordinary fileset.

use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{format_f64, load_network, save_network, FilesetPath};
use crate::model::{Distribution, Event, Model, ModelKind, Network, Tuple};

pub const LIF_MODEL: &str = "lif";
pub const SYN_MODEL: &str = "syn";
pub const SPIKE_EVENT: &str = "spike";
/// Reserved `lif` parameter holding the simulation clock in ms.
pub const TIME_PARAM: &str = "time";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LifParams {
    /// Membrane time constant, ms.
    pub tau: f64,
    pub v_rest: f64,
    pub v_th: f64,
    pub v_reset: f64,
    pub refrac_steps: u32,
    /// Constant input added every step.
    pub bias: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        LifParams {
            tau: 10.0,
            v_rest: 0.0,
            v_th: 1.0,
            v_reset: 0.0,
            refrac_steps: 2,
            bias: 0.0,
        }
    }
}

impl LifParams {
    /// Reads parameters from a `lif` model line; absent keys keep defaults.
    pub fn from_model(model: &Model) -> std::result::Result<Self, String> {
        let d = LifParams::default();
        let get = |k: &str, v: f64| model.param(k).unwrap_or(v);
        let refrac = get("refrac", d.refrac_steps as f64);
        if !(refrac >= 0.0 && refrac.fract() == 0.0 && refrac <= u32::MAX as f64) {
            return Err(format!("refrac = {refrac} is not a whole number of steps"));
        }
        let p = LifParams {
            tau: get("tau", d.tau),
            v_rest: get("v_rest", d.v_rest),
            v_th: get("v_th", d.v_th),
            v_reset: get("v_reset", d.v_reset),
            refrac_steps: refrac as u32,
            bias: get("bias", d.bias),
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(format!("tau = {} must be positive", self.tau));
        }
        for (k, v) in [
            ("v_rest", self.v_rest),
            ("v_th", self.v_th),
            ("v_reset", self.v_reset),
            ("bias", self.bias),
        ] {
            if !v.is_finite() {
                return Err(format!("{k} = {v} is not finite"));
            }
        }
        Ok(())
    }

    pub fn to_model(&self) -> Model {
        Model::new(LIF_MODEL, ModelKind::Vertex, 2)
            .with_param("tau", self.tau)
            .with_param("v_rest", self.v_rest)
            .with_param("v_th", self.v_th)
            .with_param("v_reset", self.v_reset)
            .with_param("refrac", self.refrac_steps as f64)
            .with_param("bias", self.bias)
    }
}

/// One update of a LIF neuron. `input` is added after the leak.
pub fn lif_step(v: f64, r: u32, input: f64, p: &LifParams, dt: f64) -> (f64, u32, bool) {
    if r > 0 {
        return (p.v_reset, r - 1, false);
    }
    let v = v + dt * (-(v - p.v_rest) / p.tau) + input;
    if v >= p.v_th {
        (p.v_reset, p.refrac_steps, true)
    } else {
        (v, 0, false)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimConfig {
    /// Step size, ms.
    pub dt: f64,
    pub steps: u64,
    /// Extra constant input per global vertex, added on top of `bias`.
    pub drive: Option<Vec<f64>>,
}

/// Spikes as (step at which they are recorded, vertex).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpikeRecord {
    pub dt: f64,
    pub spikes: Vec<(u64, usize)>,
}

impl SpikeRecord {
    pub fn len(&self) -> usize {
        self.spikes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spikes.is_empty()
    }

    /// `time vertex` lines sorted by (time, vertex).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(step, g) in &self.spikes {
            writeln!(out, "{} {g}", format_f64(step as f64 * self.dt)).unwrap();
        }
        out
    }

    /// Maps vertex ids through `map` and re-sorts.
    pub fn relabel(&self, map: &[usize]) -> SpikeRecord {
        let mut spikes: Vec<_> = self.spikes.iter().map(|&(s, g)| (s, map[g])).collect();
        spikes.sort_unstable();
        SpikeRecord { dt: self.dt, spikes }
    }

    pub fn extend(&mut self, other: SpikeRecord) {
        self.spikes.extend(other.spikes);
        self.spikes.sort_unstable();
    }
}

/// Dynamic state of a run, detachable from the network structure.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    /// Clock in ms.
    pub time: f64,
    /// `(v, r)` per global vertex.
    pub dynamics: Vec<(f64, u32)>,
    /// In-flight events, any order.
    pub pending: Vec<Event>,
}

impl SimState {
    /// Reads the clock, vertex dynamics and events stored in a network.
    pub fn from_network(net: &Network) -> Result<SimState> {
        check_models(net)?;
        let time = net
            .models
            .by_name(LIF_MODEL)
            .and_then(|m| m.param(TIME_PARAM))
            .unwrap_or(0.0);
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::Sim(format!("stored time {time} is invalid")));
        }
        let mut dynamics = Vec::with_capacity(net.vertex_count());
        for (p, block) in net.partitions.iter().enumerate() {
            let first = net.distribution.offsets()[p];
            for (i, vs) in block.vertex_state.iter().enumerate() {
                let (v, r) = (vs.values[0], vs.values[1]);
                if !v.is_finite() {
                    return Err(Error::Sim(format!("vertex {}: v = {v} is not finite", first + i)));
                }
                if !(r >= 0.0 && r.fract() == 0.0 && r <= u32::MAX as f64) {
                    return Err(Error::Sim(format!(
                        "vertex {}: refractory count {r} is not a whole number",
                        first + i
                    )));
                }
                dynamics.push((v, r as u32));
            }
        }
        let pending = net
            .partitions
            .iter()
            .flat_map(|b| b.events.iter().cloned())
            .collect();
        Ok(SimState {
            time,
            dynamics,
            pending,
        })
    }

    /// Copy of `net` carrying this state: vertex tuples, events placed with
    /// their target's owner, and the clock on the `lif` line. A zero clock is
    /// only written if the network already stores one.
    pub fn apply(&self, net: &Network) -> Result<Network> {
        let n = net.vertex_count();
        if self.dynamics.len() != n {
            return Err(Error::Sim(format!(
                "state has {} vertices, network has {n}",
                self.dynamics.len()
            )));
        }
        let mut out = net.clone();
        let has_time = net
            .models
            .by_name(LIF_MODEL)
            .is_some_and(|m| m.param(TIME_PARAM).is_some());
        if self.time != 0.0 || has_time {
            out.models.set_param(LIF_MODEL, TIME_PARAM, self.time);
        }
        let mut dynamics = self.dynamics.iter();
        for block in &mut out.partitions {
            block.events.clear();
            for vs in &mut block.vertex_state {
                let &(v, r) = dynamics.next().unwrap();
                vs.values = Tuple::from_slice(&[v, r as f64]);
            }
        }
        for ev in &self.pending {
            let p = net.owner_of(ev.target)?;
            out.partitions[p].events.push(ev.clone());
        }
        for block in &mut out.partitions {
            block.events.sort_by(Event::canonical_cmp);
        }
        Ok(out)
    }
}

fn check_models(net: &Network) -> Result<()> {
    for (_, m) in net.models.iter() {
        let expected = match m.name.as_str() {
            LIF_MODEL => Some(ModelKind::Vertex),
            SYN_MODEL => Some(ModelKind::Edge),
            _ => None,
        };
        let used = net.partitions.iter().any(|b| {
            b.vertex_state.iter().any(|v| net.models.get(v.model) == Some(m))
                || b.edge_state.iter().flatten().any(|e| e.model.and_then(|id| net.models.get(id)) == Some(m))
        });
        match expected {
            Some(kind) if m.kind != kind || m.state_size != 2 => {
                return Err(Error::Sim(format!(
                    "model {} must be a {} model of size 2",
                    m.name,
                    kind.as_str()
                )))
            }
            None if used => {
                return Err(Error::Sim(format!("unsupported model {:?}", m.name)));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Whole steps represented by `ms`, if it is a multiple of `dt` up to
/// rounding noise.
fn to_steps(ms: f64, dt: f64) -> Option<u64> {
    let steps = (ms / dt).round();
    let tol = 1e-9 * ms.abs().max(dt);
    (steps >= 0.0 && (steps * dt - ms).abs() <= tol && steps < u64::MAX as f64).then_some(steps as u64)
}

#[derive(Clone, Debug)]
struct PartitionRuntime {
    first: usize,
    v: Vec<f64>,
    r: Vec<u32>,
    drive: Vec<f64>,
    /// Incoming (source, weight) per local vertex, sorted by source.
    incoming: Vec<Vec<(usize, f64)>>,
    /// Outgoing (target, delay in steps) per local vertex.
    outgoing: Vec<Vec<(usize, u64)>>,
    queue: BTreeMap<u64, Vec<Event>>,
}

impl PartitionRuntime {
    fn weight(&self, local: usize, source: usize) -> Option<f64> {
        let row = &self.incoming[local];
        row.binary_search_by_key(&source, |&(u, _)| u).ok().map(|j| row[j].1)
    }

    /// Advances one step. Returns spiking vertices and outgoing events.
    fn step(&mut self, step: u64, dt: f64, lif: &LifParams) -> (Vec<usize>, Vec<Event>) {
        let mut arrivals: Vec<(usize, f64)> = Vec::new();
        if let Some(events) = self.queue.remove(&step) {
            for ev in events {
                // Only spikes have an effect; other event types are dropped
                // when they come due.
                if ev.event_type == SPIKE_EVENT {
                    let local = ev.target - self.first;
                    let w = self.weight(local, ev.source).expect("checked at start");
                    arrivals.push((local, w));
                }
            }
        }
        // Summing each vertex's inputs in value order keeps the result
        // independent of vertex numbering and event order.
        arrivals.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut arrivals = arrivals.into_iter().peekable();

        let mut spiked = Vec::new();
        let mut out = Vec::new();
        let t_spike = (step + 1) as f64;
        for i in 0..self.v.len() {
            let mut syn = 0.0;
            while let Some(&(_, w)) = arrivals.peek().filter(|a| a.0 == i) {
                syn += w;
                arrivals.next();
            }
            let input = syn + lif.bias + self.drive[i];
            let (v, r, fired) = lif_step(self.v[i], self.r[i], input, lif, dt);
            self.v[i] = v;
            self.r[i] = r;
            if fired {
                let g = self.first + i;
                spiked.push(g);
                for &(target, delay) in &self.outgoing[i] {
                    out.push(Event::spike(target, g, (t_spike + delay as f64) * dt));
                }
            }
        }
        (spiked, out)
    }
}

/// A running simulation over one network.
#[derive(Clone, Debug)]
pub struct Simulator {
    base: Network,
    dt: f64,
    step: u64,
    lif: LifParams,
    dist: Distribution,
    parts: Vec<PartitionRuntime>,
}

impl Simulator {
    /// Starts from the state stored in `net` (clock, vertex tuples, events).
    pub fn new(net: &Network, dt: f64) -> Result<Simulator> {
        let state = SimState::from_network(net)?;
        Simulator::with_state(net, &state, dt)
    }

    pub fn with_state(net: &Network, state: &SimState, dt: f64) -> Result<Simulator> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Sim(format!("dt = {dt} must be positive")));
        }
        let report = crate::validate::validate(net);
        if !report.is_empty() {
            return Err(Error::Invalid(report));
        }
        check_models(net)?;
        let n = net.vertex_count();
        if state.dynamics.len() != n {
            return Err(Error::Sim("state does not match network".into()));
        }
        let lif = match net.models.by_name(LIF_MODEL) {
            Some(m) => LifParams::from_model(m).map_err(Error::Sim)?,
            None => LifParams::default(),
        };
        let step = to_steps(state.time, dt).ok_or_else(|| {
            Error::Sim(format!("stored time {} is not a multiple of dt = {dt}", state.time))
        })?;
        let dist = net.distribution.clone();

        let mut parts: Vec<PartitionRuntime> = (0..dist.parts())
            .map(|p| {
                let range = dist.range(p);
                PartitionRuntime {
                    first: range.start,
                    v: state.dynamics[range.clone()].iter().map(|d| d.0).collect(),
                    r: state.dynamics[range.clone()].iter().map(|d| d.1).collect(),
                    drive: vec![0.0; range.len()],
                    incoming: vec![Vec::new(); range.len()],
                    outgoing: vec![Vec::new(); range.len()],
                    queue: BTreeMap::new(),
                }
            })
            .collect();

        let mut failure = None;
        net.for_each_edge(|u, g, e| {
            if failure.is_some() {
                return;
            }
            let (w, d) = (e.values[0], e.values[1]);
            let delay = match to_steps(d, dt) {
                Some(s) if s >= 1 && w.is_finite() => s,
                _ => {
                    failure = Some(format!(
                        "edge {u}->{g}: delay {d} is not a positive multiple of dt = {dt} (or weight {w} is not finite)"
                    ));
                    return;
                }
            };
            let (pg, pu) = (dist.owner_of(g).unwrap(), dist.owner_of(u).unwrap());
            parts[pg].incoming[g - dist.offsets()[pg]].push((u, w));
            parts[pu].outgoing[u - dist.offsets()[pu]].push((g, delay));
        });
        if let Some(msg) = failure {
            return Err(Error::Sim(msg));
        }
        for part in &mut parts {
            part.incoming.iter_mut().for_each(|row| row.sort_unstable_by_key(|&(u, _)| u));
        }

        for ev in &state.pending {
            let p = dist.owner_of(ev.target)?;
            let due = to_steps(ev.arrival_time, dt).ok_or_else(|| {
                Error::Sim(format!(
                    "event {}->{}: arrival {} is not a multiple of dt = {dt}",
                    ev.source, ev.target, ev.arrival_time
                ))
            })?;
            if due < step {
                return Err(Error::Sim(format!(
                    "event {}->{} arrives at {} before the current time {}",
                    ev.source, ev.target, ev.arrival_time, state.time
                )));
            }
            let part = &mut parts[p];
            if ev.event_type == SPIKE_EVENT && part.weight(ev.target - part.first, ev.source).is_none() {
                return Err(Error::Sim(format!(
                    "spike event {}->{} has no matching synapse",
                    ev.source, ev.target
                )));
            }
            part.queue.entry(due).or_default().push(ev.clone());
        }

        Ok(Simulator {
            base: net.clone(),
            dt,
            step,
            lif,
            dist,
            parts,
        })
    }

    /// Adds a constant input per global vertex.
    pub fn set_drive(&mut self, drive: &[f64]) -> Result<()> {
        if drive.len() != self.dist.vertex_count() {
            return Err(Error::Sim(format!(
                "drive has {} entries for {} vertices",
                drive.len(),
                self.dist.vertex_count()
            )));
        }
        for (p, part) in self.parts.iter_mut().enumerate() {
            part.drive.copy_from_slice(&drive[self.dist.range(p)]);
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn current_step(&self) -> u64 {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn run(&mut self, steps: u64) -> SpikeRecord {
        let mut record = SpikeRecord {
            dt: self.dt,
            spikes: Vec::new(),
        };
        for _ in 0..steps {
            let step = self.step;
            let (dt, lif) = (self.dt, self.lif);
            let results: Vec<(Vec<usize>, Vec<Event>)> =
                self.parts.par_iter_mut().map(|p| p.step(step, dt, &lif)).collect();
            // Barrier: deliver to the owning partitions' queues.
            for (spiked, events) in results {
                record.spikes.extend(spiked.into_iter().map(|g| (step + 1, g)));
                for ev in events {
                    let p = self.dist.owner_of(ev.target).expect("validated target");
                    let due = to_steps(ev.arrival_time, dt).expect("aligned by construction");
                    self.parts[p].queue.entry(due).or_default().push(ev);
                }
            }
            self.step += 1;
        }
        record.spikes.sort_unstable();
        record
    }

    pub fn state(&self) -> SimState {
        let mut dynamics = Vec::with_capacity(self.dist.vertex_count());
        let mut pending = Vec::new();
        for part in &self.parts {
            dynamics.extend(part.v.iter().copied().zip(part.r.iter().copied()));
            pending.extend(part.queue.values().flatten().cloned());
        }
        SimState {
            time: self.time(),
            dynamics,
            pending,
        }
    }

    /// The network with the current state folded in.
    pub fn to_network(&self) -> Network {
        self.state().apply(&self.base).expect("state matches its own network")
    }
}

/// Runs `cfg.steps` steps from the state stored in `net`.
pub fn run(net: &Network, cfg: &SimConfig) -> Result<(Network, SpikeRecord)> {
    let mut sim = Simulator::new(net, cfg.dt)?;
    if let Some(drive) = &cfg.drive {
        sim.set_drive(drive)?;
    }
    let record = sim.run(cfg.steps);
    Ok((sim.to_network(), record))
}

/// Saves `net` with `state` folded in.
pub fn checkpoint(state: &SimState, net: &Network, path: &FilesetPath) -> Result<()> {
    save_network(&state.apply(net)?, path)
}

pub fn restore(path: &FilesetPath) -> Result<(SimState, Network)> {
    let net = load_network(path)?;
    let state = SimState::from_network(&net)?;
    Ok((state, net))
}
