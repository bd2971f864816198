//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p dcsr --test acceptance -- --nocapture` (the output is
//! printed either way; the process exits non-zero if any check fails).

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use common::{
    active_fixture, fixture_of, load_codes, random_assignment, read_fileset, spec, spikes_under, tutorial,
    MUTATIONS,
};
use dcsr::generator::{linear_fit, scaling_run, GenKind};
use dcsr::io::{export_metis, load_network, parse_metis, save_network, save_network_unchecked, FilesetPath};
use dcsr::partition::{metrics, voxel_partition, Assignment};
use dcsr::sim::{checkpoint, lif_step, restore, LifParams, SimConfig, Simulator};
use dcsr::{validate, Distribution, EdgeState, Model, ModelKind, ModelTable, Network, Tuple, VertexState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const KINDS: [GenKind; 3] = [GenKind::Er, GenKind::Spatial, GenKind::Populations];

fn storage_linearity() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    // p = 0.02 and n chosen so that m is about 1e4, 1e5, 1e6 and 4e6.
    let base = spec(GenKind::Er, 708, 0.02, 4, 2024);
    let sizes = [708.0, 2237.0, 7072.0, 14143.0];
    let factors: Vec<f64> = sizes.iter().map(|n| n / 708.0).collect();
    let pts = scaling_run(&base, &factors, dir.path()).map_err(|e| e.to_string())?;
    let fit = linear_fit(&pts.iter().map(|p| (p.m as f64, p.bytes as f64)).collect::<Vec<_>>());
    let (a, b) = (&pts[2], &pts[3]);
    let byte_ratio = b.bytes as f64 / a.bytes as f64;
    let edge_ratio = b.m as f64 / a.m as f64;
    let rel = (byte_ratio / edge_ratio - 1.0).abs();
    let secs = start.elapsed().as_secs_f64();
    let summary = format!(
        "m = {:?}, R^2 = {:.5}, {:.1} bytes/synapse, doubling n: bytes x{byte_ratio:.3} vs edges x{edge_ratio:.3} ({:.2}%), {secs:.0} s",
        pts.iter().map(|p| p.m).collect::<Vec<_>>(),
        fit.r_squared,
        fit.slope,
        rel * 100.0
    );
    ensure(fit.r_squared >= 0.99, || format!("R^2 below 0.99: {summary}"))?;
    ensure(rel <= 0.10, || format!("doubling ratio off by more than 10%: {summary}"))?;
    ensure(secs < 300.0, || format!("slower than 5 min: {summary}"))?;
    Ok(summary)
}

fn round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ks = [1, 2, 4, 7];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..100u64 {
        let n = rng.gen_range(7..=2000);
        let k = ks[i as usize % 4];
        let kind = KINDS[i as usize % 3];
        let net = fixture_of(kind, n, 12.0 / n as f64, k, i);
        let a = FilesetPath::new(dir.path().join(format!("a{i}")));
        let b = FilesetPath::new(dir.path().join(format!("b{i}")));
        save_network(&net, &a).map_err(|e| format!("fixture {i}: {e}"))?;
        let back = load_network(&a).map_err(|e| format!("fixture {i}: {e}"))?;
        save_network(&back, &b).map_err(|e| format!("fixture {i}: {e}"))?;
        ensure(read_fileset(&a, k) == read_fileset(&b, k), || {
            format!("fixture {i} ({kind:?}, n={n}, k={k}) is not byte-idempotent")
        })?;
    }
    for name in ["tiny", "messy"] {
        let once = FilesetPath::new(dir.path().join(format!("{name}1")));
        let twice = FilesetPath::new(dir.path().join(format!("{name}2")));
        let net = load_network(&tutorial(name)).map_err(|e| format!("{name}: {e}"))?;
        save_network(&net, &once).map_err(|e| e.to_string())?;
        save_network(&load_network(&once).map_err(|e| e.to_string())?, &twice).map_err(|e| e.to_string())?;
        ensure(read_fileset(&once, 2) == read_fileset(&twice, 2), || format!("{name} is not stable"))?;
        ensure(read_fileset(&once, 2) == read_fileset(&tutorial("tiny"), 2), || {
            format!("{name} does not canonicalize to the tiny fileset")
        })?;
    }
    Ok("100 generator fixtures byte-idempotent; 2 tutorial filesets canonical-stable".into())
}

fn mutation_suite() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut clean = 0;
    for seed in 0..50u64 {
        let net = fixture_of(KINDS[seed as usize % 3], 20 + seed as usize * 3, 0.15, 1 + seed as usize % 5, seed);
        let report = validate(&net);
        ensure(report.is_empty(), || format!("false positive on clean fixture {seed}: {report:?}"))?;
        let path = FilesetPath::new(dir.path().join(format!("clean{seed}")));
        save_network(&net, &path).map_err(|e| e.to_string())?;
        let codes = load_codes(&path);
        ensure(codes.is_empty(), || format!("false positive loading clean fixture {seed}: {codes:?}"))?;
        clean += 1;
    }
    let mut seeded = 0;
    for (c, m) in MUTATIONS.iter().enumerate() {
        for seed in 0..10u64 {
            let mut net = fixture_of(KINDS[seed as usize % 3], 40, 0.2, 2 + seed as usize % 3, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 101 + c as u64);
            ensure((m.apply)(&mut net, &mut rng), || format!("{}: could not seed", m.name))?;
            let report = validate(&net);
            ensure(report.has(m.code), || format!("{} not reported as {}: {report:?}", m.name, m.code))?;
            let path = FilesetPath::new(dir.path().join(format!("m{c}_{seed}")));
            save_network_unchecked(&net, &path).map_err(|e| e.to_string())?;
            let codes = load_codes(&path);
            ensure(codes.contains(&m.code), || format!("{} on disk reported as {codes:?}", m.name))?;
            seeded += 1;
        }
    }
    let classes: BTreeSet<_> = MUTATIONS.iter().map(|m| m.code.as_str()).collect();
    Ok(format!(
        "{} corruption classes ({}), {seeded} seeded cases detected in memory and on disk, {clean} clean fixtures with no reports",
        MUTATIONS.len(),
        classes.into_iter().collect::<Vec<_>>().join(" ")
    ))
}

fn partition_invariance() -> Outcome {
    let steps = 1000;
    let mut spikes = 0;
    for f in 0..20u64 {
        let kind = KINDS[f as usize % 3];
        let n = 80 + 10 * f as usize;
        let net = active_fixture(kind, n, 300 + f);
        let base = spikes_under(&net, &Assignment::from_distribution(&net.distribution), steps, 1.0);
        ensure(!base.is_empty(), || format!("fixture {f} is silent"))?;
        spikes += base.lines().count();
        for k in [2, 4, 8] {
            let voxel = voxel_partition(&net.coords(), [4, 4, 4], k).map_err(|e| e.to_string())?;
            ensure(spikes_under(&net, &voxel, steps, 1.0) == base, || {
                format!("fixture {f} ({kind:?}): voxel k={k} differs")
            })?;
            let random = random_assignment(n, k, f * 10 + k as u64);
            ensure(spikes_under(&net, &random, steps, 1.0) == base, || {
                format!("fixture {f} ({kind:?}): random k={k} differs")
            })?;
        }
    }
    Ok(format!(
        "20 fixtures x k in {{2,4,8}} x {{voxel, random}}, {steps} steps, {spikes} reference spikes, all identical to k=1"
    ))
}

fn checkpoint_restart() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let err = |e: dcsr::Error| e.to_string();
    for (f, kind) in KINDS.iter().enumerate() {
        let net = active_fixture(*kind, 120, 70 + f as u64);
        let net = dcsr::partition::redistribute(&net, &random_assignment(120, 3, f as u64)).map_err(err)?;
        for t in [1u64, 13, 500] {
            let dt = 0.25;
            let mut straight = Simulator::new(&net, dt).map_err(err)?;
            let full = straight.run(2 * t);

            let mut first = Simulator::new(&net, dt).map_err(err)?;
            let mut split = first.run(t);
            let ck = FilesetPath::new(dir.path().join(format!("ck{f}_{t}")));
            checkpoint(&first.state(), &net, &ck).map_err(err)?;
            let (state, restored) = restore(&ck).map_err(err)?;
            let mut second = Simulator::with_state(&restored, &state, dt).map_err(err)?;
            split.extend(second.run(t));
            ensure(full.to_text() == split.to_text(), || format!("{kind:?} T={t}: spike records differ"))?;

            let a = FilesetPath::new(dir.path().join(format!("a{f}_{t}")));
            let b = FilesetPath::new(dir.path().join(format!("b{f}_{t}")));
            save_network(&straight.to_network(), &a).map_err(err)?;
            save_network(&second.to_network(), &b).map_err(err)?;
            ensure(read_fileset(&a, 3) == read_fileset(&b, 3), || {
                format!("{kind:?} T={t}: final filesets differ")
            })?;
        }
    }
    Ok("3 networks x T in {1, 13, 500}: final filesets and spike records byte-identical".into())
}

/// Network over an explicit directed edge list.
fn from_edge_list(n: usize, k: usize, edges: &[(usize, usize)]) -> Network {
    let models = ModelTable::new(vec![
        Model::new("lif", ModelKind::Vertex, 2),
        Model::new("syn", ModelKind::Edge, 2),
    ])
    .unwrap();
    let (lif, syn) = (models.id("lif").unwrap(), models.id("syn").unwrap());
    let mut incoming = vec![Vec::new(); n];
    for &(u, g) in edges {
        incoming[g].push((u, EdgeState::new(syn, &[1.0, 1.0])));
    }
    Network::assemble(
        Distribution::contiguous(n, k).unwrap(),
        models,
        vec![[0.0; 3]; n],
        vec![
            VertexState {
                model: lif,
                values: Tuple::from_slice(&[0.0, 0.0])
            };
            n
        ],
        incoming,
        Vec::new(),
    )
    .unwrap()
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let p: f64 = rng.gen_range(0.0..0.4);
    let mut edges = Vec::new();
    for u in 0..n {
        for g in 0..n {
            if u != g && rng.gen_bool(p) {
                edges.push((u, g));
            }
        }
    }
    edges
}

fn csr_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut total = 0;
    for trial in 0..1000 {
        let n = rng.gen_range(1..=50);
        let k = rng.gen_range(1..=n.min(6));
        let edges = random_edges(&mut rng, n);
        total += edges.len();
        let net = from_edge_list(n, k, &edges);

        let csr = net.in_csr();
        ensure(csr.row_ptr.len() == n + 1 && csr.row_ptr[0] == 0, || format!("graph {trial}: bad row_ptr"))?;
        for g in 0..n {
            let mut expected: Vec<usize> = edges.iter().filter(|e| e.1 == g).map(|e| e.0).collect();
            expected.sort_unstable();
            let got = &csr.col[csr.row_ptr[g]..csr.row_ptr[g + 1]];
            ensure(got == expected.as_slice(), || format!("graph {trial}: in-neighbors of {g} differ"))?;
        }

        let a = Assignment::new((0..n).map(|_| rng.gen_range(0..k)).collect(), k).map_err(|e| e.to_string())?;
        let brute = edges.iter().filter(|&&(u, g)| a.parts()[u] != a.parts()[g]).count();
        let m = metrics(&net, &a).map_err(|e| e.to_string())?;
        ensure(m.edge_cut == brute, || format!("graph {trial}: edge_cut {} vs {brute}", m.edge_cut))?;
        ensure(m.part_edges.iter().sum::<usize>() == edges.len(), || format!("graph {trial}: part_edges"))?;
    }
    Ok(format!("1000 graphs (n <= 50, {total} edges): in_csr and edge_cut match brute force"))
}

fn lif_trace() -> Outcome {
    let p = LifParams {
        tau: 10.0,
        v_rest: 0.0,
        v_th: 1.0,
        v_reset: 0.0,
        refrac_steps: 2,
        bias: 0.0,
    };
    let (mut v, mut r) = (0.0, 0);
    let mut first = None;
    let mut trace = Vec::new();
    for step in 1..=10 {
        let (nv, nr, fired) = lif_step(v, r, 0.2, &p, 1.0);
        trace.push(if fired { v } else { nv });
        if fired && first.is_none() {
            first = Some(step);
        }
        (v, r) = (nv, nr);
    }
    ensure(first == Some(7), || format!("first spike at step {first:?}"))?;

    // The same neuron through the network simulator.
    let models = ModelTable::new(vec![p.to_model(), Model::new("syn", ModelKind::Edge, 2)]).unwrap();
    let lif = models.id("lif").unwrap();
    let net = Network::assemble(
        Distribution::contiguous(1, 1).unwrap(),
        models,
        vec![[0.0; 3]],
        vec![VertexState {
            model: lif,
            values: Tuple::from_slice(&[0.0, 0.0]),
        }],
        vec![Vec::new()],
        Vec::new(),
    )
    .unwrap();
    let (_, record) = dcsr::sim::run(
        &net,
        &SimConfig {
            dt: 1.0,
            steps: 20,
            drive: Some(vec![0.2]),
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(record.spikes.first() == Some(&(7, 0)), || format!("simulator spikes {:?}", record.spikes))?;
    Ok(format!(
        "first spike at step 7 (v before threshold: {})",
        trace[..6].iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" ")
    ))
}

fn metis_reparse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut count = 0;
    let mut nets: Vec<Network> = (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=60);
            let edges = random_edges(&mut rng, n);
            from_edge_list(n, rng.gen_range(1..=n.min(4)), &edges)
        })
        .collect();
    nets.push(load_network(&tutorial("tiny")).map_err(|e| e.to_string())?);
    nets.extend((0..30).map(|i| fixture_of(KINDS[i % 3], 300, 0.05, 3, i as u64)));
    for (i, net) in nets.iter().enumerate() {
        let (m, adj) = parse_metis(&export_metis(net)).map_err(|e| format!("graph {i}: {e}"))?;
        let mut pairs = BTreeSet::new();
        net.for_each_edge(|u, g, _| {
            pairs.insert((u.min(g), u.max(g)));
        });
        ensure(m == pairs.len(), || format!("graph {i}: header {m} vs {} pairs", pairs.len()))?;
        let mut expected = vec![Vec::new(); net.vertex_count()];
        for &(a, b) in &pairs {
            expected[a].push(b);
            expected[b].push(a);
        }
        expected.iter_mut().for_each(|r| r.sort_unstable());
        ensure(adj == expected, || format!("graph {i}: re-parsed adjacency differs"))?;
        count += 1;
    }
    Ok(format!("{count} graphs: re-parsed adjacency and header pair count match"))
}

fn main() -> ExitCode {
    let checks: [Check; 8] = [
        ("storage linearity", storage_linearity),
        ("round-trip", round_trip),
        ("validator mutation suite", mutation_suite),
        ("partition invariance", partition_invariance),
        ("checkpoint/restart", checkpoint_restart),
        ("CSR oracle", csr_oracle),
        ("LIF trace", lif_trace),
        ("METIS export re-parse", metis_reparse),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance check(s) failed");
        ExitCode::FAILURE
    }
}
