//! Seeded synthetic networks.
//!
//! Every random draw comes from a ChaCha8 stream selected by
//! `(seed, 4 * vertex + purpose)` where purpose is 0 for coordinates, 1 for
//! the initial vertex state and 2 for the vertex's incoming edges. Streams are
//! independent, so vertices can be generated in any order or in parallel and
//! the output only depends on the `GenSpec`.

use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{fileset_bytes, save_network, FilesetPath};
use crate::model::{
    Distribution, EdgeState, Model, ModelKind, ModelTable, Network, Tuple, VertexState,
};
use crate::sim::LifParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Erdős–Rényi: every ordered pair connects with probability `p_conn`.
    Er,
    /// Distance-dependent: `p_conn * exp(-d^2 / 2 sigma^2)`.
    Spatial,
    /// Block structure: `prob_matrix[source population][target population]`.
    Populations,
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "er" => Ok(GenKind::Er),
            "spatial" => Ok(GenKind::Spatial),
            "populations" => Ok(GenKind::Populations),
            other => Err(Error::Spec(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Stream {
    Coord = 0,
    State = 1,
    Edges = 2,
}

fn stream(seed: u64, vertex: usize, purpose: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(4 * vertex as u64 + purpose as u64);
    rng
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    /// Vertex count for `er` and `spatial`; for `populations` it sizes the
    /// default populations when `populations` is empty.
    pub n: usize,
    pub populations: Vec<usize>,
    /// Indices of populations whose outgoing weights are negated.
    pub inhibitory: Vec<usize>,
    pub inhibitory_gain: f64,
    pub p_conn: f64,
    pub sigma: f64,
    pub prob_matrix: Vec<Vec<f64>>,
    /// Coordinate box, `[min, max]`.
    pub bounds: [[f64; 3]; 2],
    pub seed: u64,
    pub k: usize,
    /// Uniform synaptic weight range.
    pub weight: (f64, f64),
    /// Uniform integer delay range in ms.
    pub delay: (u32, u32),
    /// Uniform initial membrane potential range.
    pub v_init: (f64, f64),
    pub lif: LifParams,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            kind: GenKind::Er,
            n: 100,
            populations: Vec::new(),
            inhibitory: Vec::new(),
            inhibitory_gain: 4.0,
            p_conn: 0.1,
            sigma: 0.25,
            prob_matrix: Vec::new(),
            bounds: [[0.0; 3], [1.0; 3]],
            seed: 0,
            k: 1,
            weight: (0.05, 0.15),
            delay: (1, 5),
            v_init: (0.0, 1.0),
            lif: LifParams::default(),
        }
    }
}

const DEFAULT_FRACTIONS: [f64; 4] = [0.4, 0.1, 0.4, 0.1];
const DEFAULT_INHIBITORY: [usize; 2] = [1, 3];
const DEFAULT_MATRIX: [[f64; 4]; 4] = [
    [0.10, 0.15, 0.05, 0.02],
    [0.15, 0.15, 0.01, 0.01],
    [0.05, 0.02, 0.10, 0.15],
    [0.01, 0.01, 0.15, 0.15],
];

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Spec(format!("{key}: bad value {t:?}"))))
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Spec(format!("{key}: bad value {value:?}")))
}

fn parse_pair<T: FromStr + Copy>(key: &str, value: &str) -> Result<(T, T)> {
    match parse_list::<T>(key, value)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::Spec(format!("{key}: expected two comma-separated values"))),
    }
}

impl GenSpec {
    /// Sets one field from its config/CLI key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "kind" => self.kind = value.trim().parse()?,
            "n" => self.n = parse_one(key, value)?,
            "p" => self.p_conn = parse_one(key, value)?,
            "sigma" => self.sigma = parse_one(key, value)?,
            "k" => self.k = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "populations" => self.populations = parse_list(key, value)?,
            "inhibitory" => self.inhibitory = parse_list(key, value)?,
            "inhibitory_gain" => self.inhibitory_gain = parse_one(key, value)?,
            "pmatrix" => {
                self.prob_matrix = value
                    .split(';')
                    .filter(|r| !r.trim().is_empty())
                    .map(|row| parse_list(key, row))
                    .collect::<Result<_>>()?
            }
            "box" => match parse_list::<f64>(key, value)?.as_slice() {
                [a, b, c, d, e, f] => self.bounds = [[*a, *b, *c], [*d, *e, *f]],
                _ => return Err(Error::Spec("box: expected x0,y0,z0,x1,y1,z1".into())),
            },
            "weight" => self.weight = parse_pair(key, value)?,
            "delay" => self.delay = parse_pair(key, value)?,
            "v_init" => self.v_init = parse_pair(key, value)?,
            "tau" => self.lif.tau = parse_one(key, value)?,
            "v_rest" => self.lif.v_rest = parse_one(key, value)?,
            "v_th" => self.lif.v_th = parse_one(key, value)?,
            "v_reset" => self.lif.v_reset = parse_one(key, value)?,
            "refrac" => self.lif.refrac_steps = parse_one(key, value)?,
            "bias" => self.lif.bias = parse_one(key, value)?,
            other => return Err(Error::Spec(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key = value` config file on top of `self`. Blank lines and
    /// `#` comments are ignored.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("config line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Spec(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    /// Population sizes actually used (defaults derived from `n`).
    pub fn population_sizes(&self) -> Vec<usize> {
        match self.kind {
            GenKind::Populations if self.populations.is_empty() => {
                let mut sizes: Vec<usize> = DEFAULT_FRACTIONS
                    .iter()
                    .map(|f| (f * self.n as f64).floor() as usize)
                    .collect();
                let rest = self.n - sizes.iter().sum::<usize>();
                sizes[0] += rest;
                sizes
            }
            GenKind::Populations => self.populations.clone(),
            _ => vec![self.n],
        }
    }

    fn inhibitory_populations(&self) -> Vec<usize> {
        if self.kind == GenKind::Populations && self.populations.is_empty() && self.inhibitory.is_empty() {
            DEFAULT_INHIBITORY.to_vec()
        } else {
            self.inhibitory.clone()
        }
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        let pops = self.population_sizes().len();
        if !self.prob_matrix.is_empty() {
            self.prob_matrix.clone()
        } else if self.kind == GenKind::Populations && pops == 4 {
            DEFAULT_MATRIX.iter().map(|r| r.to_vec()).collect()
        } else {
            vec![vec![self.p_conn; pops]; pops]
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.population_sizes().iter().sum()
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Spec(msg));
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !prob(self.p_conn) {
            return bad(format!("p = {} is not a probability", self.p_conn));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.kind == GenKind::Spatial && !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma = {} must be positive", self.sigma));
        }
        let [lo, hi] = self.bounds;
        if (0..3).any(|a| !(lo[a].is_finite() && hi[a].is_finite() && lo[a] <= hi[a])) {
            return bad(format!("bad box {:?}", self.bounds));
        }
        if !(self.weight.0.is_finite() && self.weight.1.is_finite() && self.weight.0 <= self.weight.1) {
            return bad(format!("bad weight range {:?}", self.weight));
        }
        if !(1 <= self.delay.0 && self.delay.0 <= self.delay.1) {
            return bad(format!("delay range {:?} must satisfy 1 <= min <= max", self.delay));
        }
        if !(self.v_init.0.is_finite() && self.v_init.1.is_finite() && self.v_init.0 <= self.v_init.1) {
            return bad(format!("bad v_init range {:?}", self.v_init));
        }
        if !self.inhibitory_gain.is_finite() {
            return bad("inhibitory_gain must be finite".into());
        }
        self.lif.check().map_err(Error::Spec)?;
        let pops = self.population_sizes().len();
        let m = self.matrix();
        if m.len() != pops || m.iter().any(|r| r.len() != pops) {
            return bad(format!("probability matrix must be {pops}x{pops}"));
        }
        if m.iter().flatten().any(|&p| !prob(p)) {
            return bad("probability matrix entries must lie in [0, 1]".into());
        }
        if let Some(&i) = self.inhibitory_populations().iter().find(|&&i| i >= pops) {
            return bad(format!("inhibitory population {i} does not exist"));
        }
        Ok(())
    }

    pub fn models(&self) -> ModelTable {
        ModelTable::new(vec![
            self.lif.to_model(),
            Model::new("syn", ModelKind::Edge, 2),
        ])
        .expect("fixed model names")
    }
}

/// Visits selected indices in `0..len`, each chosen
/// independently with probability `p`, by sampling geometric gaps.
fn bernoulli_indices(rng: &mut ChaCha8Rng, len: usize, p: f64, mut f: impl FnMut(usize)) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        (0..len).for_each(f);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut pos = 0usize;
    loop {
        let u: f64 = rng.gen();
        let gap = ((1.0 - u).ln() / log_q).floor();
        if gap >= (len - pos) as f64 {
            return;
        }
        pos += gap as usize;
        f(pos);
        pos += 1;
        if pos >= len {
            return;
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Network> {
    spec.check()?;
    let sizes = spec.population_sizes();
    let n: usize = sizes.iter().sum();
    let pop_start: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    let pop_of = |g: usize| pop_start.partition_point(|&s| s <= g) - 1;
    let inhibitory = spec.inhibitory_populations();
    let matrix = spec.matrix();
    let models = spec.models();
    let lif = models.id("lif").unwrap();
    let syn = models.id("syn").unwrap();
    let [lo, hi] = spec.bounds;

    let coords: Vec<[f64; 3]> = (0..n)
        .into_par_iter()
        .map(|g| {
            let mut rng = stream(spec.seed, g, Stream::Coord);
            let mut c: [f64; 3] = std::array::from_fn(|a| uniform(&mut rng, lo[a], hi[a]));
            if spec.kind == GenKind::Populations {
                // Populations stack as slabs along z.
                let pop = pop_of(g);
                let h = (hi[2] - lo[2]) / sizes.len() as f64;
                c[2] = lo[2] + h * (pop as f64 + (c[2] - lo[2]) / (hi[2] - lo[2]).max(f64::MIN_POSITIVE));
            }
            c
        })
        .collect();

    let vertex_state: Vec<VertexState> = (0..n)
        .into_par_iter()
        .map(|g| {
            let mut rng = stream(spec.seed, g, Stream::State);
            VertexState {
                model: lif,
                values: Tuple::from_slice(&[uniform(&mut rng, spec.v_init.0, spec.v_init.1), 0.0]),
            }
        })
        .collect();

    let two_sigma_sq = 2.0 * spec.sigma * spec.sigma;
    let incoming: Vec<Vec<(usize, EdgeState)>> = (0..n)
        .into_par_iter()
        .map(|g| {
            let mut rng = stream(spec.seed, g, Stream::Edges);
            let mut sources = Vec::new();
            // Candidate index c in a source range maps around the target itself.
            match spec.kind {
                GenKind::Er => bernoulli_indices(&mut rng, n.saturating_sub(1), spec.p_conn, |c| {
                    sources.push(if c < g { c } else { c + 1 })
                }),
                GenKind::Spatial => {
                    for u in (0..n).filter(|&u| u != g) {
                        let d2: f64 = (0..3).map(|a| (coords[u][a] - coords[g][a]).powi(2)).sum();
                        let p = spec.p_conn * (-d2 / two_sigma_sq).exp();
                        if rng.gen::<f64>() < p {
                            sources.push(u);
                        }
                    }
                }
                GenKind::Populations => {
                    let tpop = pop_of(g);
                    for (spop, (&start, &size)) in pop_start.iter().zip(&sizes).enumerate() {
                        let skip = (start..start + size).contains(&g);
                        let len = if skip { size - 1 } else { size };
                        bernoulli_indices(&mut rng, len, matrix[spop][tpop], |c| {
                            let u = start + c;
                            sources.push(if skip && u >= g { u + 1 } else { u });
                        });
                    }
                }
            }
            sources
                .into_iter()
                .map(|u| {
                    let mut w = uniform(&mut rng, spec.weight.0, spec.weight.1);
                    if spec.kind == GenKind::Populations && inhibitory.contains(&pop_of(u)) {
                        w *= -spec.inhibitory_gain;
                    }
                    let span = spec.delay.1 - spec.delay.0 + 1;
                    let d = spec.delay.0 + ((rng.gen::<f64>() * span as f64) as u32).min(span - 1);
                    (u, EdgeState::new(syn, &[w, d as f64]))
                })
                .collect()
        })
        .collect();

    Network::assemble(
        Distribution::contiguous(n, spec.k)?,
        models,
        coords,
        vertex_state,
        incoming,
        Vec::new(),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub factor: f64,
    pub n: usize,
    pub m: usize,
    pub bytes: u64,
}

/// Generates and saves the base spec with vertex counts scaled by each
/// factor, recording total fileset bytes. Filesets are written under
/// `workdir` and removed once measured.
pub fn scaling_run(base: &GenSpec, factors: &[f64], workdir: &Path) -> Result<Vec<ScalingPoint>> {
    let mut out = Vec::with_capacity(factors.len());
    for (i, &factor) in factors.iter().enumerate() {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Spec(format!("scale factor {factor} must be positive")));
        }
        let mut spec = base.clone();
        spec.n = (base.n as f64 * factor).round() as usize;
        spec.populations = base
            .populations
            .iter()
            .map(|&s| (s as f64 * factor).round() as usize)
            .collect();
        let net = generate(&spec)?;
        let path = FilesetPath::new(workdir.join(format!("scale{i}")));
        save_network(&net, &path)?;
        let bytes = fileset_bytes(&path, net.parts())?;
        for f in path.files(net.parts()) {
            let _ = std::fs::remove_file(f);
        }
        out.push(ScalingPoint {
            factor,
            n: net.vertex_count(),
            m: net.edge_count(),
            bytes,
        });
    }
    Ok(out)
}

/// Ordinary least squares `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> LinearFit {
    let len = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    LinearFit {
        slope,
        intercept,
        r_squared: if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy },
    }
}
