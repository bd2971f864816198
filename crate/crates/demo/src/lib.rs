//! Browser bindings for three small views of the `dcsr` crate: a voxel
//! partition of a spatial network, a single LIF membrane trace, and a spike
//! raster of a partitioned recurrent network.
//!
//! Build with `wasm-pack build crates/demo --target web --out-dir www/pkg`
//! and serve `crates/demo/www`.

use dcsr::generator::{generate, GenKind, GenSpec};
use dcsr::partition::{metrics, redistribute, voxel_partition, Assignment};
use dcsr::sim::{lif_step, LifParams, SimConfig};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Vertex positions and part labels of a voxel-partitioned network.
#[wasm_bindgen]
pub struct VoxelView {
    xyz: Vec<f64>,
    parts: Vec<u32>,
    edges: Vec<u32>,
    edge_cut: usize,
    synapses: usize,
    balance: f64,
}

#[wasm_bindgen]
impl VoxelView {
    /// Flat `x, y, z` triples.
    #[wasm_bindgen(getter)]
    pub fn xyz(&self) -> Vec<f64> {
        self.xyz.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn parts(&self) -> Vec<u32> {
        self.parts.clone()
    }

    /// Flat `source, target` pairs.
    #[wasm_bindgen(getter)]
    pub fn edges(&self) -> Vec<u32> {
        self.edges.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn edge_cut(&self) -> usize {
        self.edge_cut
    }

    #[wasm_bindgen(getter)]
    pub fn synapses(&self) -> usize {
        self.synapses
    }

    #[wasm_bindgen(getter)]
    pub fn balance(&self) -> f64 {
        self.balance
    }
}

/// Generates a spatial network and splits it into `k` parts on a
/// `grid x grid x grid` voxel grid.
#[wasm_bindgen]
pub fn voxel_view(n: usize, k: usize, grid: usize, sigma: f64, seed: u64) -> Result<VoxelView, JsError> {
    let spec = GenSpec {
        kind: GenKind::Spatial,
        n,
        p_conn: 0.5,
        sigma,
        seed,
        ..GenSpec::default()
    };
    let net = generate(&spec).map_err(js_err)?;
    let coords = net.coords();
    let a = voxel_partition(&coords, [grid, grid, grid], k).map_err(js_err)?;
    let m = metrics(&net, &a).map_err(js_err)?;
    let mut edges = Vec::with_capacity(2 * net.edge_count());
    net.for_each_edge(|u, g, _| edges.extend([u as u32, g as u32]));
    Ok(VoxelView {
        xyz: coords.iter().flatten().copied().collect(),
        parts: a.parts().iter().map(|&p| p as u32).collect(),
        edges,
        edge_cut: m.edge_cut,
        synapses: net.edge_count(),
        balance: m.balance,
    })
}

/// Membrane potential of one neuron under constant drive, sampled after
/// each step. Spiking steps read `v_th` so the trace shows the crossing.
#[wasm_bindgen]
pub fn lif_trace(drive: f64, tau: f64, v_th: f64, refrac: u32, dt: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    let p = LifParams {
        tau,
        v_th,
        refrac_steps: refrac,
        ..LifParams::default()
    };
    p.check().map_err(js_err)?;
    if dt.is_nan() || dt <= 0.0 {
        return Err(js_err("dt must be positive"));
    }
    let (mut v, mut r) = (p.v_rest, 0);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(v);
    for _ in 0..steps {
        let (nv, nr, fired) = lif_step(v, r, drive, &p, dt);
        out.push(if fired { v_th } else { nv });
        (v, r) = (nv, nr);
    }
    Ok(out)
}

/// Spikes of a four-population network, as parallel arrays.
#[wasm_bindgen]
pub struct Raster {
    steps: Vec<u32>,
    vertices: Vec<u32>,
    parts: Vec<u32>,
    n: usize,
}

#[wasm_bindgen]
impl Raster {
    #[wasm_bindgen(getter)]
    pub fn steps(&self) -> Vec<u32> {
        self.steps.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn vertices(&self) -> Vec<u32> {
        self.vertices.clone()
    }

    /// Part of each vertex after voxel partitioning.
    #[wasm_bindgen(getter)]
    pub fn parts(&self) -> Vec<u32> {
        self.parts.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn n(&self) -> usize {
        self.n
    }
}

/// Runs a populations network split into `k` voxel parts. Vertex ids in the
/// result are the generator's, so the raster is the same for every `k`.
#[wasm_bindgen]
pub fn spike_raster(n: usize, k: usize, bias: f64, steps: u64, seed: u64) -> Result<Raster, JsError> {
    let mut spec = GenSpec {
        kind: GenKind::Populations,
        n,
        seed,
        weight: (0.1, 0.3),
        ..GenSpec::default()
    };
    spec.lif.bias = bias;
    let net = generate(&spec).map_err(js_err)?;
    let a: Assignment = voxel_partition(&net.coords(), [1, 1, 8], k).map_err(js_err)?;
    let moved = redistribute(&net, &a).map_err(js_err)?;
    let (_, record) = dcsr::sim::run(&moved, &SimConfig { dt: 1.0, steps, drive: None }).map_err(js_err)?;

    let new_of = a.renumbering();
    let mut old_of = vec![0; new_of.len()];
    for (old, &new) in new_of.iter().enumerate() {
        old_of[new] = old;
    }
    let record = record.relabel(&old_of);
    Ok(Raster {
        steps: record.spikes.iter().map(|&(s, _)| s as u32).collect(),
        vertices: record.spikes.iter().map(|&(_, g)| g as u32).collect(),
        parts: a.parts().iter().map(|&p| p as u32).collect(),
        n: net.vertex_count(),
    })
}
