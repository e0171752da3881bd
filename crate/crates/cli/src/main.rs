use clap::{Args, Parser, Subcommand, ValueEnum};
use hiconn::complex::build_clique_complex;
use hiconn::graph::{er_sample, parse_ratio, validate_probability, Graph, Schedule};
use hiconn::harness::{run, ExperimentConfig, Format, Settings};
use hiconn::hochster::graph_betti_table;
use hiconn::homology::{cocycle_norm, homology_norm, reduced_betti};
use hiconn::invariants::{cross_polytope_witness, delta, f_invariant, kappa_with, tau, CrossPolytopeWitness, KappaMethod, KappaOptions};
use hiconn::{Caps, Error, Result};
use serde_json::{json, Map, Value};
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hiconn", version, about = "Higher-dimensional connectivity of graphs over GF(2)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed for sampling and experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    #[arg(long, global = true)]
    cap_enumeration: Option<u64>,
    #[arg(long, global = true)]
    cap_faces: Option<u64>,
    #[arg(long, global = true)]
    cap_classes: Option<u64>,
    #[arg(long, global = true)]
    cap_cycles: Option<u64>,
    #[arg(long, global = true)]
    cap_coset: Option<u64>,
    #[arg(long, global = true)]
    cap_hochster: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p) and print it as an edge list.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "alpha")]
        p: Option<f64>,
        /// Use p = min(1, c n^-alpha).
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// δ, κ, Betti number and norms of an input graph.
    Invariants {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Largest deletion set the κ search tries (default: n).
        #[arg(long)]
        kappa_cap: Option<usize>,
        /// Skip the cocycle and homology norms.
        #[arg(long)]
        no_norms: bool,
        #[arg(long)]
        tau: bool,
        /// Also compute f, searching deletion sets up to this size.
        #[arg(long)]
        f: Option<usize>,
    },
    /// Graded Betti table of the Stanley–Reisner ring via Hochster's formula.
    Betti {
        #[arg(long)]
        input: PathBuf,
        /// Print the text grid instead of CSV/JSON.
        #[arg(long)]
        grid: bool,
    },
    /// A cross-polytope witness for an i-face, or a κ witness set.
    Witness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Comma-separated vertex labels of an i-face; omit for a κ witness.
        #[arg(long, value_delimiter = ',')]
        face: Option<Vec<usize>>,
    },
    /// Run an experiment from a config file, with flag overrides.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override any setting, e.g. --set trials=50.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        #[arg(long)]
        kind: Option<String>,
        /// Comma-separated vertex counts.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        timing: bool,
        /// Write the summary here (default: stderr).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

impl Global {
    fn caps(&self) -> Caps {
        let mut c = Caps::default();
        c.enumeration = self.cap_enumeration.unwrap_or(c.enumeration);
        c.faces = self.cap_faces.unwrap_or(c.faces);
        c.classes = self.cap_classes.unwrap_or(c.classes);
        c.cycles = self.cap_cycles.unwrap_or(c.cycles);
        c.coset = self.cap_coset.unwrap_or(c.coset);
        c.hochster_vertices = self.cap_hochster.unwrap_or(c.hochster_vertices);
        c
    }

    fn format(&self) -> Format {
        match self.format {
            Some(OutFormat::Json) => Format::Json,
            _ => Format::Csv,
        }
    }

    fn output(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let f = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Graph::read_edge_list(BufReader::new(f))
}

fn label_vec(g: &Graph, vs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    vs.into_iter().map(|v| g.label(v)).collect()
}

/// One flat object as JSON, or as a header plus one CSV row.
fn emit_object(obj: Map<String, Value>, format: Format, mut w: impl Write) -> Result<()> {
    match format {
        Format::Json => writeln!(w, "{}", Value::Object(obj))?,
        Format::Csv => {
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            };
            writeln!(w, "{}", obj.keys().cloned().collect::<Vec<_>>().join(","))?;
            let row: Vec<String> = obj.values().map(|v| {
                let c = cell(v);
                if c.contains([',', '"', '\n']) {
                    format!("\"{}\"", c.replace('"', "\"\""))
                } else {
                    c
                }
            }).collect();
            writeln!(w, "{}", row.join(","))?;
        }
    }
    Ok(())
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn sample(g: &Global, n: usize, p: Option<f64>, alpha: Option<String>, c: String) -> Result<()> {
    let p = match (p, alpha) {
        (Some(p), _) => validate_probability(p)?,
        (None, Some(a)) => Schedule::new(parse_ratio(&a)?, parse_ratio(&c)?)?.eval(n),
        (None, None) => return Err(Error::Validation("give --p or --alpha".into())),
    };
    er_sample(n, p, g.seed.unwrap_or(0)).write_edge_list(g.output()?)
}

fn invariants(gl: &Global, input: &Path, i: usize, kappa_cap: Option<usize>, no_norms: bool, want_tau: bool, f: Option<usize>) -> Result<()> {
    let caps = gl.caps();
    let g = read_graph(input)?;
    let x = build_clique_complex(&g, i + 1, caps.faces)?;
    let opts = KappaOptions {
        size_cap: kappa_cap,
        probe: true,
        method: KappaMethod::Auto,
    };
    let k = kappa_with(&g, i, &opts, &caps)?;
    let mut obj = Map::new();
    obj.insert("n".into(), json!(g.n()));
    obj.insert("edges".into(), json!(g.edge_count()));
    obj.insert("i".into(), json!(i));
    obj.insert("delta".into(), to_value(delta(&g, i)));
    obj.insert("kappa".into(), to_value(k.value));
    obj.insert("kappa_witness".into(), to_value(k.witness_labels(&g)));
    obj.insert("betti".into(), json!(reduced_betti(&x, i as isize)?));
    if !no_norms {
        obj.insert("cocycle_norm".into(), to_value(cocycle_norm(&x, i, &caps)?));
        obj.insert("homology_norm".into(), json!(homology_norm(&x, i, &caps)?));
    }
    if want_tau {
        obj.insert("tau".into(), to_value(tau(&g, &caps)?));
    }
    if let Some(cap) = f {
        let r = f_invariant(&g, cap, &caps)?;
        obj.insert("f".into(), to_value(r.value));
        obj.insert("f_partial".into(), json!(r.partial));
    }
    let format = if gl.format.is_none() { Format::Json } else { gl.format() };
    emit_object(obj, format, gl.output()?)
}

fn betti(gl: &Global, input: &Path, grid: bool) -> Result<()> {
    let g = read_graph(input)?;
    let table = graph_betti_table(&g, &gl.caps())?;
    let mut w = gl.output()?;
    if grid {
        write!(w, "{}", table.grid())?;
        return Ok(());
    }
    match gl.format() {
        Format::Csv => table.write_csv(w),
        Format::Json => {
            for ((i, j), b) in table.entries() {
                writeln!(w, "{}", json!({"i": i, "j": j, "degree": i + j, "beta": b}))?;
            }
            Ok(())
        }
    }
}

fn witness(gl: &Global, input: &Path, i: usize, face: Option<Vec<usize>>) -> Result<()> {
    let caps = gl.caps();
    let g = read_graph(input)?;
    let mut obj = Map::new();
    match face {
        Some(labels) => {
            if labels.len() != i + 1 {
                return Err(Error::Validation(format!("an {i}-face has {} vertices, got {}", i + 1, labels.len())));
            }
            let face: Vec<usize> = labels
                .iter()
                .map(|&l| g.index_of_label(l).ok_or_else(|| Error::Validation(format!("no vertex labeled {l}"))))
                .collect::<Result<_>>()?;
            match cross_polytope_witness(&g, &face)? {
                CrossPolytopeWitness::Found { a, b } => {
                    obj.insert("status".into(), json!("found"));
                    obj.insert("a".into(), json!(label_vec(&g, a)));
                    obj.insert("b".into(), json!(label_vec(&g, b)));
                }
                CrossPolytopeWitness::Failure { step } => {
                    obj.insert("status".into(), json!("failure"));
                    obj.insert("step".into(), json!(step));
                }
            }
        }
        None => {
            let opts = KappaOptions {
                method: KappaMethod::Auto,
                ..KappaOptions::default()
            };
            let k = kappa_with(&g, i, &opts, &caps)?;
            obj.insert("i".into(), json!(i));
            obj.insert("kappa".into(), to_value(k.value));
            obj.insert("witness".into(), to_value(k.witness_labels(&g)));
            obj.insert("witness_betti".into(), to_value(k.witness_dim_h));
        }
    }
    emit_object(obj, Format::Json, gl.output()?)
}

#[allow(clippy::too_many_arguments)]
fn experiment(
    gl: &Global,
    config: Option<PathBuf>,
    sets: Vec<String>,
    flags: [(&str, Option<String>); 7],
    timing: bool,
    summary: Option<PathBuf>,
) -> Result<()> {
    let mut settings = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Settings::parse(&text)?
        }
        None => Settings::default(),
    };
    for (key, value) in flags {
        if let Some(v) = value {
            settings.set(key, v);
        }
    }
    if timing {
        settings.set("timing", "true");
    }
    if let Some(seed) = gl.seed {
        settings.set("seed", seed.to_string());
    }
    if let Some(f) = gl.format {
        settings.set("format", if matches!(f, OutFormat::Json) { "json" } else { "csv" });
    }
    if let Some(out) = &gl.out {
        settings.set("output", out.display().to_string());
    }
    let caps = [
        ("cap_enumeration", gl.cap_enumeration.map(|v| v.to_string())),
        ("cap_faces", gl.cap_faces.map(|v| v.to_string())),
        ("cap_classes", gl.cap_classes.map(|v| v.to_string())),
        ("cap_cycles", gl.cap_cycles.map(|v| v.to_string())),
        ("cap_coset", gl.cap_coset.map(|v| v.to_string())),
        ("cap_hochster", gl.cap_hochster.map(|v| v.to_string())),
    ];
    for (key, value) in caps {
        if let Some(v) = value {
            settings.set(key, v);
        }
    }
    for s in sets {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Error::Validation(format!("--set expects KEY=VALUE, got {s:?}")))?;
        settings.set(k, v.trim());
    }
    let cfg = ExperimentConfig::from_settings(&settings)?;
    let report = run(&cfg)?;
    let out: Box<dyn Write> = match &cfg.output {
        Some(p) => Box::new(File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    report.write_records(cfg.format, out)?;
    match summary {
        Some(p) => report.write_summary(cfg.format, File::create(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?),
        None => report.write_summary(cfg.format, io::stderr().lock()),
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Sample { n, p, alpha, c } => sample(g, n, p, alpha, c),
        Command::Invariants {
            input,
            i,
            kappa_cap,
            no_norms,
            tau,
            f,
        } => invariants(g, &input, i, kappa_cap, no_norms, tau, f),
        Command::Betti { input, grid } => betti(g, &input, grid),
        Command::Witness { input, i, face } => witness(g, &input, i, face),
        Command::Experiment {
            config,
            sets,
            kind,
            n,
            p,
            alpha,
            i,
            trials,
            workers,
            timing,
            summary,
        } => {
            let flags = [
                ("kind", kind),
                ("n", n),
                ("p", p),
                ("alpha", alpha),
                ("i", i.map(|v| v.to_string())),
                ("trials", trials.map(|v| v.to_string())),
                ("workers", workers.map(|v| v.to_string())),
            ];
            experiment(g, config, sets, flags, timing, summary)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hiconn: {e}");
            ExitCode::from(if e.is_resource_guard() { 2 } else { 1 })
        }
    }
}
