#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dcsr::generator::{generate, GenKind, GenSpec};
use dcsr::io::{load_network, FilesetPath};
use dcsr::{Code, EdgeState, Error, Event, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tutorial_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/tutorial")
}

pub fn tutorial(name: &str) -> FilesetPath {
    FilesetPath::new(tutorial_dir().join(name))
}

/// All files of a fileset keyed by suffix (`dist`, `adjcy.0`, ...).
pub fn read_fileset(path: &FilesetPath, k: usize) -> BTreeMap<String, Vec<u8>> {
    let prefix = path.prefix().to_string_lossy().into_owned();
    path.files(k)
        .into_iter()
        .filter(|f| f.exists())
        .map(|f| {
            let name = f.to_string_lossy()[prefix.len() + 1..].to_string();
            let bytes = fs::read(&f).unwrap();
            (name, bytes)
        })
        .collect()
}

pub fn spec(kind: GenKind, n: usize, p: f64, k: usize, seed: u64) -> GenSpec {
    GenSpec {
        kind,
        n,
        p_conn: p,
        k,
        seed,
        ..GenSpec::default()
    }
}

/// ER fixture with a few in-flight spike events on real synapses.
pub fn fixture_with_events(n: usize, p: f64, k: usize, seed: u64) -> Network {
    fixture_of(GenKind::Er, n, p, k, seed)
}

pub fn fixture_of(kind: GenKind, n: usize, p: f64, k: usize, seed: u64) -> Network {
    let mut net = generate(&spec(kind, n, p, k, seed)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut edges = Vec::new();
    net.for_each_edge(|u, g, _| edges.push((u, g)));
    for _ in 0..edges.len().min(5) {
        let (u, g) = edges[rng.gen_range(0..edges.len())];
        let owner = net.owner_of(g).unwrap();
        let t = rng.gen_range(1..20) as f64;
        net.partitions[owner].events.push(Event::spike(g, u, t));
    }
    net
}

/// Codes reported when the network is loaded from `path`, whether from a
/// per-file parse error or from validation.
pub fn load_codes(path: &FilesetPath) -> Vec<Code> {
    match load_network(path) {
        Ok(_) => Vec::new(),
        Err(Error::Parse(e)) => vec![e.code],
        Err(Error::Invalid(report)) => report.iter().map(|v| v.code).collect(),
        Err(other) => panic!("unexpected load failure: {other}"),
    }
}

/// (partition, local index, position in neighbor list) of every adjacency
/// entry.
fn entries(net: &Network) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (p, b) in net.partitions.iter().enumerate() {
        for (i, row) in b.adjacency.iter().enumerate() {
            out.extend((0..row.len()).map(|j| (p, i, j)));
        }
    }
    out
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, items: &[T]) -> Option<T> {
    (!items.is_empty()).then(|| items[rng.gen_range(0..items.len())])
}

pub struct Mutation {
    pub name: &'static str,
    pub code: Code,
    pub apply: fn(&mut Network, &mut ChaCha8Rng) -> bool,
}

/// Corruption classes. `apply` returns false when the fixture offers no
/// place to seed the corruption.
pub const MUTATIONS: &[Mutation] = &[
    Mutation { name: "drop one direction of an adjacency", code: Code::Asym, apply: drop_reverse },
    Mutation { name: "neighbor index out of range", code: Code::BadRef, apply: bad_ref },
    Mutation { name: "extra value in an edge tuple", code: Code::TupleLen, apply: long_tuple },
    Mutation { name: "duplicate neighbor", code: Code::DupNbr, apply: dup_neighbor },
    Mutation { name: "vertex lists itself", code: Code::SelfLoop, apply: self_loop },
    Mutation { name: "both directions none", code: Code::BothNone, apply: both_none },
    Mutation { name: "event stored off its owner", code: Code::EvtOwner, apply: misplaced_event },
    Mutation { name: "vertex model on an edge", code: Code::KindMismatch, apply: kind_mismatch },
    Mutation { name: "negative event time", code: Code::EvtTime, apply: negative_time },
    Mutation { name: "vertex tuple too short", code: Code::TupleLen, apply: short_vertex_tuple },
];

fn drop_reverse(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let Some((p, i, j)) = pick(rng, &entries(net)) else { return false };
    let b = &mut net.partitions[p];
    b.adjacency[i].remove(j);
    b.edge_state[i].remove(j);
    true
}

fn bad_ref(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let n = net.vertex_count();
    let Some((p, i, j)) = pick(rng, &entries(net)) else { return false };
    net.partitions[p].adjacency[i][j] = n + rng.gen_range(0..3);
    true
}

fn long_tuple(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let real: Vec<_> = entries(net)
        .into_iter()
        .filter(|&(p, i, j)| !net.partitions[p].edge_state[i][j].is_none())
        .collect();
    let Some((p, i, j)) = pick(rng, &real) else { return false };
    net.partitions[p].edge_state[i][j].values.push(7.0);
    true
}

fn dup_neighbor(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let Some((p, i, j)) = pick(rng, &entries(net)) else { return false };
    let b = &mut net.partitions[p];
    let (u, e) = (b.adjacency[i][j], b.edge_state[i][j].clone());
    b.adjacency[i].push(u);
    b.edge_state[i].push(e);
    true
}

fn self_loop(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let n = net.vertex_count();
    if n == 0 {
        return false;
    }
    let g = rng.gen_range(0..n);
    let (p, i) = net.locate(g).unwrap();
    let b = &mut net.partitions[p];
    b.adjacency[i].push(g);
    b.edge_state[i].push(EdgeState::none());
    true
}

fn both_none(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    // A pair with exactly one synapse: blank it out.
    let mut one_way = Vec::new();
    net.for_each_edge(|u, g, _| one_way.push((u, g)));
    let has = |net: &Network, u: usize, g: usize| {
        let (b, i) = net.block_of(g).unwrap();
        b.adjacency[i].iter().zip(&b.edge_state[i]).any(|(&x, e)| x == u && !e.is_none())
    };
    one_way.retain(|&(u, g)| !has(net, g, u));
    let Some((u, g)) = pick(rng, &one_way) else { return false };
    let (p, i) = net.locate(g).unwrap();
    let b = &mut net.partitions[p];
    let j = b.adjacency[i].iter().position(|&x| x == u).unwrap();
    b.edge_state[i][j] = EdgeState::none();
    true
}

fn misplaced_event(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let k = net.parts();
    let n = net.vertex_count();
    if k < 2 || n == 0 {
        return false;
    }
    let g = rng.gen_range(0..n);
    let owner = net.owner_of(g).unwrap();
    let wrong = (owner + 1 + rng.gen_range(0..k - 1)) % k;
    net.partitions[wrong].events.push(Event::spike(g, (g + 1) % n, 4.0));
    true
}

fn kind_mismatch(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let Some(lif) = net.models.id("lif") else { return false };
    let real: Vec<_> = entries(net)
        .into_iter()
        .filter(|&(p, i, j)| !net.partitions[p].edge_state[i][j].is_none())
        .collect();
    let Some((p, i, j)) = pick(rng, &real) else { return false };
    net.partitions[p].edge_state[i][j].model = Some(lif);
    true
}

fn negative_time(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let n = net.vertex_count();
    if n == 0 {
        return false;
    }
    let g = rng.gen_range(0..n);
    let owner = net.owner_of(g).unwrap();
    net.partitions[owner].events.push(Event::spike(g, (g + 1) % n, -1.5));
    true
}

fn short_vertex_tuple(net: &mut Network, rng: &mut ChaCha8Rng) -> bool {
    let n = net.vertex_count();
    if n == 0 {
        return false;
    }
    let (p, i) = net.locate(rng.gen_range(0..n)).unwrap();
    net.partitions[p].vertex_state[i].values.pop();
    true
}

/// Recurrent fixture that keeps firing: constant bias on every neuron.
pub fn active_fixture(kind: GenKind, n: usize, seed: u64) -> Network {
    let mut s = spec(kind, n, 0.08, 1, seed);
    s.lif.bias = 0.12;
    s.weight = (0.1, 0.4);
    generate(&s).unwrap()
}

/// New-to-old vertex map of a redistribution.
pub fn old_ids(a: &dcsr::partition::Assignment) -> Vec<usize> {
    let new_of = a.renumbering();
    let mut old_of = vec![0; new_of.len()];
    for (old, &new) in new_of.iter().enumerate() {
        old_of[new] = old;
    }
    old_of
}

/// Spike text of `steps` steps after redistributing under `a`, with vertex
/// ids mapped back to those of `net`.
pub fn spikes_under(net: &Network, a: &dcsr::partition::Assignment, steps: u64, dt: f64) -> String {
    let moved = dcsr::partition::redistribute(net, a).unwrap();
    let (_, record) = dcsr::sim::run(
        &moved,
        &dcsr::sim::SimConfig { dt, steps, drive: None },
    )
    .unwrap();
    record.relabel(&old_ids(a)).to_text()
}

pub fn random_assignment(n: usize, k: usize, seed: u64) -> dcsr::partition::Assignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dcsr::partition::Assignment::new((0..n).map(|_| rng.gen_range(0..k)).collect(), k).unwrap()
}
