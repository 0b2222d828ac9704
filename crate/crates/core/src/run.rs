//! Command driver behind the `dual-schur` binary.
//!
//! Every command computes all of its outputs in memory and writes them, together with
//! `manifest.json`, only once everything has succeeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{ContourChoice, ExperimentConfig};
use crate::critical::critical_gap_mc;
use crate::edge::{branch, edge_rescale, edge_scaling, ks_distance, Branch, TwTable};
use crate::error::{Error, Result};
use crate::kernel::{kernel_table, ContourConfig};
use crate::limit_shape::{limit_curve, support};
use crate::sampler::{monte_carlo, SampleValues, Statistic};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sample,
    LimitShape,
    Kernel,
    Fluctuations,
    Critical,
    TwTable,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::LimitShape => "limit-shape",
            Command::Kernel => "kernel",
            Command::Fluctuations => "fluctuations",
            Command::Critical => "critical",
            Command::TwTable => "tw-table",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub command: Command,
    pub crate_version: String,
    pub config: ExperimentConfig,
    pub outputs: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
}

/// Shortest round-trip decimal form.
pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

/// A CSV document whose first line names the format and its version.
struct Csv {
    text: String,
}

impl Csv {
    fn new(kind: &str, header: &[&str]) -> Self {
        let mut text = format!("# dual-schur {kind} v{FORMAT_VERSION}\n");
        text.push_str(&header.join(","));
        text.push('\n');
        Csv { text }
    }

    fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }
}

struct Outputs {
    files: Vec<(String, String)>,
    timings: BTreeMap<String, f64>,
}

impl Outputs {
    fn new() -> Self {
        Outputs { files: Vec::new(), timings: BTreeMap::new() }
    }

    fn add(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body));
    }

    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let r = f()?;
        self.timings.insert(label.to_string(), t.elapsed().as_secs_f64() * 1e3);
        Ok(r)
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Runs `command`, writing its files into `out`. The config is validated first.
pub fn run(command: Command, config: &ExperimentConfig, out: &Path) -> Result<Manifest> {
    config.validate()?;
    let mut o = Outputs::new();
    match command {
        Command::Sample => run_sample(config, &mut o)?,
        Command::LimitShape => run_limit_shape(config, &mut o)?,
        Command::Kernel => run_kernel(config, &mut o)?,
        Command::Fluctuations => run_fluctuations(config, &mut o)?,
        Command::Critical => run_critical(config, &mut o)?,
        Command::TwTable => run_tw_table(config, &mut o)?,
    }
    let manifest = Manifest {
        manifest_version: FORMAT_VERSION,
        command,
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        outputs: o.files.iter().map(|f| f.0.clone()).collect(),
        timings_ms: o.timings.clone(),
    };
    std::fs::create_dir_all(out)?;
    for (name, body) in &o.files {
        std::fs::write(out.join(name), body)?;
    }
    std::fs::write(out.join("manifest.json"), to_json(&manifest)?)?;
    Ok(manifest)
}

fn run_sample(cfg: &ExperimentConfig, o: &mut Outputs) -> Result<()> {
    let x = cfg.spec.specialization()?;
    let p = &cfg.sample;
    let batch = o.time("sampling", || monte_carlo(&x, p.count, p.statistic, cfg.seed, cfg.workers))?;
    match &batch.values {
        SampleValues::Scalars(v) => {
            let mut csv = Csv::new("samples", &["index", "value"]);
            for (i, val) in v.iter().enumerate() {
                csv.row(&[i.to_string(), val.to_string()]);
            }
            o.add("samples.csv", csv.text);
            let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
            for &val in v {
                *hist.entry(val).or_default() += 1;
            }
            let mut csv = Csv::new("histogram", &["value", "count"]);
            for (val, cnt) in hist {
                csv.row(&[val.to_string(), cnt.to_string()]);
            }
            o.add("histogram.csv", csv.text);
        }
        SampleValues::Shapes(shapes) => o.add("shapes.json", to_json(shapes)?),
    }
    Ok(())
}

fn run_limit_shape(cfg: &ExperimentConfig, o: &mut Outputs) -> Result<()> {
    let spec = cfg.spec.density()?;
    let curve = o.time("limit_curve", || limit_curve(&spec, cfg.limit_shape.grid_step))?;
    let mut csv = Csv::new("limit-shape", &["u", "omega", "rho"]);
    for p in &curve.points {
        csv.row(&[fmt_num(p.u), fmt_num(p.omega), fmt_num(p.rho)]);
    }
    o.add("curve.csv", csv.text);
    o.add("support.json", to_json(&curve.support)?);
    Ok(())
}

fn run_kernel(cfg: &ExperimentConfig, o: &mut Outputs) -> Result<()> {
    let x = cfg.spec.specialization()?;
    let k = &cfg.kernel;
    let mut contour = match k.contour {
        ContourChoice::Default => ContourConfig::for_spec(&x)?,
        ContourChoice::Saddle { t } => ContourConfig::saddle_adapted(&x, t)?,
    };
    contour.nodes = k.nodes;
    contour.max_nodes = k.max_nodes;
    contour.tol = k.tol;
    let pairs: Vec<_> = k.positions.iter().flat_map(|&a| k.positions.iter().map(move |&b| (a, b))).collect();
    let table = o.time("kernel", || kernel_table(&pairs, &x, &contour))?;
    let mut csv = Csv::new("kernel", &["m", "m_prime", "value", "nodes", "est_error"]);
    for e in &table.entries {
        csv.row(&[fmt_num(e.m.value()), fmt_num(e.m_prime.value()), fmt_num(e.value), e.nodes.to_string(), fmt_num(e.est_error)]);
    }
    o.add("kernel.csv", csv.text);
    o.add("contour.json", to_json(&contour)?);
    Ok(())
}

fn tw_csv(table: &TwTable) -> String {
    let mut csv = Csv::new("tw-table", &["s", "F"]);
    for (s, f) in table.s.iter().zip(&table.cdf) {
        csv.row(&[fmt_num(*s), fmt_num(*f)]);
    }
    csv.text
}

#[derive(Serialize)]
struct KsReport {
    ks_distance: f64,
    samples: usize,
    x_plus: f64,
    sigma: f64,
    branch: Branch,
    sample_mean: f64,
    tw_mean: f64,
}

fn run_fluctuations(cfg: &ExperimentConfig, o: &mut Outputs) -> Result<()> {
    let spec = cfg.spec.density()?;
    let b = branch(&spec)?;
    match b {
        Branch::Critical => return Err(Error::CriticalRegime),
        Branch::Concave => {
            return Err(Error::InvalidArgument(
                "concave edge: run on the transposed configuration (swap f and g, c -> 1/c)".into(),
            ))
        }
        Branch::Convex => {}
    }
    let sup = o.time("support", || support(&spec))?;
    let scaling = edge_scaling(&spec, &sup)?;
    let x = cfg.spec.specialization()?;
    let p = &cfg.fluctuations;
    let batch = o.time("sampling", || monte_carlo(&x, p.count, Statistic::Edge(b), cfg.seed, cfg.workers))?;
    let raw: Vec<f64> = batch.values.scalars().expect("edge statistic is scalar").iter().map(|&v| v as f64).collect();
    let rescaled = edge_rescale(&raw, &scaling, cfg.spec.n)?;
    let t = &p.table;
    let table = o.time("tw_table", || TwTable::with_config(t.from, t.to, t.step, &t.fredholm))?;
    let ks = ks_distance(&rescaled, |s| table.cdf(s))?;
    let mut csv = Csv::new("rescaled", &["index", "statistic", "rescaled"]);
    for (i, (r, s)) in raw.iter().zip(&rescaled).enumerate() {
        csv.row(&[i.to_string(), fmt_num(*r), fmt_num(*s)]);
    }
    o.add("rescaled.csv", csv.text);
    o.add("tw_table.csv", tw_csv(&table));
    let report = KsReport {
        ks_distance: ks,
        samples: rescaled.len(),
        x_plus: sup.x_plus,
        sigma: scaling.sigma.finite().unwrap_or(f64::INFINITY),
        branch: b,
        sample_mean: rescaled.iter().sum::<f64>() / rescaled.len() as f64,
        tw_mean: table.mean(),
    };
    o.add("ks.json", to_json(&report)?);
    Ok(())
}

fn run_critical(cfg: &ExperimentConfig, o: &mut Outputs) -> Result<()> {
    let spec = cfg.spec.density()?;
    let c = &cfg.critical;
    let gaps = o.time("sampling", || {
        critical_gap_mc(&spec, cfg.spec.n, cfg.spec.k, &c.deltas, c.samples, cfg.seed, cfg.workers)
    })?;
    let mut csv = Csv::new("gaps", &["delta", "theory", "empirical", "stderr"]);
    for g in &gaps {
        csv.row(&[g.delta.to_string(), fmt_num(g.theory), fmt_num(g.empirical), fmt_num(g.stderr)]);
    }
    o.add("gaps.csv", csv.text);
    Ok(())
}

fn run_tw_table(cfg: &ExperimentConfig, o: &mut Outputs) -> Result<()> {
    let t = &cfg.tw_table;
    let table = o.time("tw_table", || TwTable::with_config(t.from, t.to, t.step, &t.fredholm))?;
    o.add("tw_table.csv", tw_csv(&table));
    Ok(())
}

/// Default output directory for a command.
pub fn default_out_dir(command: Command) -> PathBuf {
    PathBuf::from("out").join(command.name())
}
