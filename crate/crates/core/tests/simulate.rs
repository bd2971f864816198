mod common;

use common::{active_fixture, random_assignment, read_fileset, spikes_under, tutorial};
use dcsr::generator::GenKind;
use dcsr::io::{load_network, FilesetPath};
use dcsr::partition::{voxel_partition, Assignment};
use dcsr::sim::{checkpoint, restore, run, SimConfig, SimState, Simulator};

#[test]
fn tutorial_network_runs() {
    let net = load_network(&tutorial("tiny")).unwrap();
    let (out, record) = run(&net, &SimConfig { dt: 1.0, steps: 50, drive: None }).unwrap();
    assert!(!record.is_empty());
    assert_eq!(out.models.by_name("lif").unwrap().param("time"), Some(50.0));
    // Deterministic across repeated runs.
    let (_, again) = run(&net, &SimConfig { dt: 1.0, steps: 50, drive: None }).unwrap();
    assert_eq!(record, again);
}

#[test]
fn spikes_do_not_depend_on_partitioning() {
    for (seed, kind) in [(1, GenKind::Er), (2, GenKind::Populations), (3, GenKind::Spatial)] {
        let net = active_fixture(kind, 90, seed);
        let base = spikes_under(&net, &Assignment::from_distribution(&net.distribution), 300, 1.0);
        assert!(base.lines().count() > 100, "{kind:?}: too quiet");
        for k in [2, 4, 8] {
            let voxel = voxel_partition(&net.coords(), [4, 4, 4], k).unwrap();
            assert_eq!(spikes_under(&net, &voxel, 300, 1.0), base, "{kind:?} voxel k={k}");
            let random = random_assignment(90, k, seed + k as u64);
            assert_eq!(spikes_under(&net, &random, 300, 1.0), base, "{kind:?} random k={k}");
        }
    }
}

#[test]
fn checkpoint_restart_matches_straight_run() {
    let dir = tempfile::tempdir().unwrap();
    let net = active_fixture(GenKind::Er, 60, 5);
    let net = dcsr::partition::redistribute(&net, &random_assignment(60, 3, 5)).unwrap();
    for t in [1u64, 7, 40] {
        let dt = 0.5;
        let mut straight = Simulator::new(&net, dt).unwrap();
        let full = straight.run(2 * t);

        let mut first = Simulator::new(&net, dt).unwrap();
        let mut spikes = first.run(t);
        let ck = FilesetPath::new(dir.path().join(format!("ck{t}")));
        checkpoint(&first.state(), &net, &ck).unwrap();
        let (state, restored) = restore(&ck).unwrap();
        let mut second = Simulator::with_state(&restored, &state, dt).unwrap();
        spikes.extend(second.run(t));
        assert_eq!(spikes, full, "T = {t}");

        let a = FilesetPath::new(dir.path().join(format!("a{t}")));
        let b = FilesetPath::new(dir.path().join(format!("b{t}")));
        dcsr::io::save_network(&straight.to_network(), &a).unwrap();
        dcsr::io::save_network(&second.to_network(), &b).unwrap();
        assert_eq!(read_fileset(&a, 3), read_fileset(&b, 3), "T = {t}");
    }
}

#[test]
fn state_round_trips_through_network() {
    let net = load_network(&tutorial("tiny")).unwrap();
    let state = SimState::from_network(&net).unwrap();
    assert_eq!(state.time, 0.0);
    assert_eq!(state.pending.len(), 2);
    assert_eq!(state.apply(&net).unwrap().first_difference(&net), None);
}

#[test]
fn drive_overrides_silence() {
    let net = load_network(&tutorial("tiny")).unwrap();
    let mut quiet = net.clone();
    quiet.models.set_param("lif", "bias", 0.0);
    for b in &mut quiet.partitions {
        b.events.clear();
        b.vertex_state.iter_mut().for_each(|v| v.values[0] = 0.0);
    }
    let cfg = |drive| SimConfig { dt: 1.0, steps: 30, drive };
    assert!(run(&quiet, &cfg(None)).unwrap().1.is_empty());
    let (_, driven) = run(&quiet, &cfg(Some(vec![0.0, 0.0, 0.0, 0.0, 0.2]))).unwrap();
    assert_eq!(driven.spikes.first(), Some(&(7, 4)));
}
