//! The `dcsr` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a network fails validation, a simulation
//! cannot run on it, or `diff` finds a difference, 2 on usage errors,
//! unreadable files and syntax errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcsr::generator::{generate, GenKind, GenSpec};
use dcsr::io::{
    export_edgelist, export_metis, load_network, load_network_unchecked, save_network, FilesetPath,
};
use dcsr::partition::{assignment_from_file, metrics, redistribute, voxel_partition, Assignment};
use dcsr::sim::{Simulator, SpikeRecord};
use dcsr::{validate, Code, Error, Network};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "dcsr", version, about = "Inspect, partition and simulate dCSR network filesets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic network.
    Generate(GenerateArgs),
    /// Check a fileset for structural violations.
    Validate {
        prefix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print counts, models and degree statistics.
    Info {
        prefix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Repartition a network and write it under a new prefix.
    Partition(PartitionArgs),
    /// Export the graph for external tools.
    Export {
        prefix: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the LIF simulator and save the final state.
    Simulate(SimulateArgs),
    /// Compare two filesets semantically.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    n: Option<usize>,
    /// Connection probability (peak probability for `spatial`).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// Required, either here or in the config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Er,
    Spatial,
    Populations,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Er => GenKind::Er,
            KindArg::Spatial => GenKind::Spatial,
            KindArg::Populations => GenKind::Populations,
        }
    }
}

#[derive(Args, Debug)]
struct PartitionArgs {
    prefix: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    method: Method,
    /// Voxel grid cells per axis.
    #[arg(long, value_parser = parse_grid, default_value = "8,8,8")]
    grid: [usize; 3],
    /// Partition vector file, one part index per line (method `file`).
    #[arg(long)]
    parts: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Voxel,
    File,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Metis,
    Edgelist,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    prefix: PathBuf,
    #[arg(long)]
    steps: u64,
    /// Step size in ms.
    #[arg(long)]
    dt: f64,
    /// Also save the state every N steps under `<out>.step<S>`.
    #[arg(long)]
    checkpoint_every: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// Write spikes as `time vertex` lines.
    #[arg(long)]
    spikes: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<[usize; 3], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad grid size {t:?}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[x, y, z] if x > 0 && y > 0 && z > 0 => Ok([x, y, z]),
        _ => Err("expected three positive integers X,Y,Z".into()),
    }
}

/// Failure of a subcommand, with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } | Error::Spec(_) | Error::Assignment(_) => 2,
            Error::Parse(p) if p.code == Code::Syntax => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Validate { prefix, json } => cmd_validate(prefix, json, out),
        Command::Info { prefix, json } => cmd_info(prefix, json, out),
        Command::Partition(a) => cmd_partition(a, out),
        Command::Export { prefix, format, out: file } => cmd_export(prefix, format, file, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Diff { a, b, json } => cmd_diff(a, b, json, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write) -> Outcome {
    let mut spec = GenSpec::default();
    let mut seeded = false;
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        spec.apply_config(&text)?;
        seeded = text
            .lines()
            .filter_map(|l| l.split('#').next()?.split_once('='))
            .any(|(k, _)| k.trim() == "seed");
    }
    if let Some(kind) = a.kind {
        spec.kind = kind.into();
    }
    if let Some(n) = a.n {
        spec.n = n;
    }
    if let Some(p) = a.p {
        spec.p_conn = p;
    }
    if let Some(sigma) = a.sigma {
        spec.sigma = sigma;
    }
    if let Some(k) = a.k {
        spec.k = k;
    }
    if let Some(seed) = a.seed {
        spec.seed = seed;
        seeded = true;
    }
    if !seeded {
        return Err(Failure::usage("generate needs an explicit --seed (or `seed` in the config file)"));
    }
    let net = generate(&spec)?;
    save_network(&net, &FilesetPath::new(&a.out))?;
    writeln!(
        out,
        "wrote {}: n={} m={} k={}",
        a.out.display(),
        net.vertex_count(),
        net.edge_count(),
        net.parts()
    )?;
    Ok(0)
}

fn violation_json(prefix: &str, v: &dcsr::Violation) -> Value {
    json!({
        "code": v.code.as_str(),
        "location": v.locus(prefix),
        "partition": v.partition,
        "line": v.line,
        "message": v.message,
    })
}

fn cmd_validate(prefix: PathBuf, as_json: bool, out: &mut dyn Write) -> Outcome {
    let label = prefix.display().to_string();
    let net = match load_network_unchecked(&FilesetPath::new(&prefix)) {
        Ok(net) => net,
        Err(Error::Parse(e)) => {
            let code = if e.code == Code::Syntax { 2 } else { 1 };
            if as_json {
                let file = e.file.as_ref().map(|f| f.display().to_string());
                let location = match (&file, e.line) {
                    (Some(f), Some(l)) => Some(format!("{f}:{l}")),
                    (f, _) => f.clone(),
                };
                let report = json!({
                    "ok": false,
                    "violations": [{
                        "code": e.code.as_str(),
                        "location": location,
                        "partition": Value::Null,
                        "line": e.line,
                        "message": e.message,
                    }],
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap())?;
            } else {
                writeln!(out, "{e}")?;
            }
            return Ok(code);
        }
        Err(e) => return Err(e.into()),
    };
    let report = validate(&net);
    if as_json {
        let doc = json!({
            "ok": report.is_empty(),
            "violations": report.iter().map(|v| violation_json(&label, v)).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
    } else if report.is_empty() {
        writeln!(
            out,
            "OK: {label}: n={} m={} k={} events={}",
            net.vertex_count(),
            net.edge_count(),
            net.parts(),
            net.event_count()
        )?;
    } else {
        for v in report.iter() {
            writeln!(out, "{}: {}: {}", v.locus(&label), v.code, v.message)?;
        }
        writeln!(out, "{} violation(s)", report.len())?;
    }
    Ok(if report.is_empty() { 0 } else { 1 })
}

fn info_json(net: &Network) -> Value {
    let in_degrees = net.in_degrees();
    let mut sequence = in_degrees.clone();
    sequence.sort_unstable();
    let partitions: Vec<Value> = net
        .partitions
        .iter()
        .enumerate()
        .map(|(p, b)| {
            json!({
                "index": p,
                "first_vertex": net.distribution.offsets()[p],
                "vertices": b.vertex_count(),
                "edges": b.edge_count(),
                "events": b.events.len(),
            })
        })
        .collect();
    let models: Vec<Value> = net
        .models
        .iter()
        .map(|(_, m)| {
            json!({
                "name": m.name,
                "kind": m.kind.as_str(),
                "state_size": m.state_size,
                "params": m.params.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "n": net.vertex_count(),
        "m": net.edge_count(),
        "k": net.parts(),
        "events": net.event_count(),
        "dist": net.distribution.offsets(),
        "partitions": partitions,
        "models": models,
        "in_degrees": in_degrees,
        "in_degree_sequence": sequence,
    })
}

fn cmd_info(prefix: PathBuf, as_json: bool, out: &mut dyn Write) -> Outcome {
    let net = load_network(&FilesetPath::new(&prefix))?;
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&info_json(&net)).unwrap())?;
        return Ok(0);
    }
    let n = net.vertex_count();
    let degrees = net.in_degrees();
    writeln!(out, "vertices: {n}")?;
    writeln!(out, "synapses: {}", net.edge_count())?;
    writeln!(out, "partitions: {}", net.parts())?;
    writeln!(out, "events: {}", net.event_count())?;
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mean = if n == 0 { 0.0 } else { net.edge_count() as f64 / n as f64 };
    writeln!(out, "in-degree: mean {mean:.3}, max {max}")?;
    writeln!(out, "models:")?;
    for (_, m) in net.models.iter() {
        write!(out, "  {} {} {}", m.name, m.kind.as_str(), m.state_size)?;
        for (k, v) in &m.params {
            write!(out, " {k}={}", dcsr::io::format_f64(*v))?;
        }
        writeln!(out)?;
    }
    writeln!(out, "partition  first  vertices  synapses  events")?;
    for (p, b) in net.partitions.iter().enumerate() {
        writeln!(
            out,
            "{p:>9}  {:>5}  {:>8}  {:>8}  {:>6}",
            net.distribution.offsets()[p],
            b.vertex_count(),
            b.edge_count(),
            b.events.len()
        )?;
    }
    Ok(0)
}

fn cmd_partition(a: PartitionArgs, out: &mut dyn Write) -> Outcome {
    let net = load_network(&FilesetPath::new(&a.prefix))?;
    let assignment: Assignment = match a.method {
        Method::Voxel => voxel_partition(&net.coords(), a.grid, a.k)?,
        Method::File => {
            let path = a.parts.as_ref().ok_or_else(|| Failure::usage("--method file needs --parts FILE"))?;
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            assignment_from_file(&text, net.vertex_count(), a.k).map_err(|e| Failure {
                code: 2,
                message: format!("{}: {e}", path.display()),
            })?
        }
    };
    let m = metrics(&net, &assignment)?;
    let moved = redistribute(&net, &assignment)?;
    save_network(&moved, &FilesetPath::new(&a.out))?;
    writeln!(out, "wrote {}: k={}", a.out.display(), a.k)?;
    writeln!(out, "edge cut: {} of {} synapses", m.edge_cut, net.edge_count())?;
    writeln!(out, "balance: {:.4}", m.balance)?;
    writeln!(out, "part sizes: {:?}", m.part_vertices)?;
    Ok(0)
}

fn cmd_export(prefix: PathBuf, format: ExportFormat, file: PathBuf, out: &mut dyn Write) -> Outcome {
    let net = load_network(&FilesetPath::new(&prefix))?;
    let text = match format {
        ExportFormat::Metis => export_metis(&net),
        ExportFormat::Edgelist => export_edgelist(&net),
    };
    fs::write(&file, text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    writeln!(out, "wrote {}", file.display())?;
    Ok(0)
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Outcome {
    if a.checkpoint_every == Some(0) {
        return Err(Failure::usage("--checkpoint-every must be positive"));
    }
    let net = load_network(&FilesetPath::new(&a.prefix))?;
    let mut sim = Simulator::new(&net, a.dt)?;
    let mut record = SpikeRecord {
        dt: a.dt,
        spikes: Vec::new(),
    };
    let chunk = a.checkpoint_every.unwrap_or(a.steps.max(1));
    let mut done = 0;
    while done < a.steps {
        let n = chunk.min(a.steps - done);
        record.extend(sim.run(n));
        done += n;
        if a.checkpoint_every.is_some() && done < a.steps {
            let mut name = a.out.clone().into_os_string();
            name.push(format!(".step{}", sim.current_step()));
            save_network(&sim.to_network(), &FilesetPath::new(name))?;
        }
    }
    save_network(&sim.to_network(), &FilesetPath::new(&a.out))?;
    if let Some(path) = &a.spikes {
        fs::write(path, record.to_text()).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    writeln!(
        out,
        "simulated {} steps to t={} ms: {} spikes; wrote {}",
        a.steps,
        dcsr::io::format_f64(sim.time()),
        record.len(),
        a.out.display()
    )?;
    Ok(0)
}

fn cmd_diff(a: PathBuf, b: PathBuf, as_json: bool, out: &mut dyn Write) -> Outcome {
    let left = load_network(&FilesetPath::new(&a))?;
    let right = load_network(&FilesetPath::new(&b))?;
    let difference = left.first_difference(&right);
    if as_json {
        let doc = json!({ "equal": difference.is_none(), "difference": difference });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
    } else {
        match &difference {
            None => writeln!(out, "equal")?,
            Some(d) => writeln!(out, "differ: {d}")?,
        }
    }
    Ok(if difference.is_none() { 0 } else { 1 })
}
