//! Command-line front end: `gen-net`, `zones`, `run` and `sweep`.
//!
//! Every flag can also be given in a TOML file passed with `--config`, keyed by
//! the flag name without its leading dashes (`avg-degree = 8.0`). Flags win
//! over the file. Exit codes: 0 success, 1 internal error, 2 usage or validation
//! error, 3 constraint violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use crate::eda::{EdaParams, EdaVariant, StdEstimator};
use crate::experiment::{
    derive_seed, sweep, EndpointPolicy, EngineConfig, ExperimentError, Instance, SweepConfig, TopologySource,
    ENDPOINT_STREAM, ENGINE_STREAM, TOPOLOGY_STREAM,
};
use crate::ga::GaParams;
use crate::report;
use crate::topology::{generate_random_network, load_network, Network, NodeId, TopologyParams};
use crate::zrp::{build_zone_table, ZoneParams};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Constraint(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "zrp-evo", version, about = "Zone routing route discovery with GA and EDA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random geometric network and write it as an edge list.
    GenNet(GenNetArgs),
    /// Dump the routing zone of every node.
    Zones(ZonesArgs),
    /// Run one engine on one instance.
    Run(RunArgs),
    /// Sweep network sizes, comparing engines on paired instances.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonFlags {
    /// TOML file with default values for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ShapeFlags {
    #[arg(long)]
    pub avg_degree: Option<f64>,
    #[arg(long)]
    pub cost_min: Option<u64>,
    #[arg(long)]
    pub cost_max: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct NetFlags {
    /// Edge-list topology file; replaces the generator flags.
    #[arg(long, conflicts_with = "n")]
    pub net: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub shape: ShapeFlags,
}

#[derive(Debug, Args, Default)]
pub struct EngineFlags {
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub sel_frac: Option<f64>,
    #[arg(long)]
    pub pc: Option<f64>,
    #[arg(long)]
    pub pm: Option<f64>,
    #[arg(long)]
    pub max_gen: Option<usize>,
    #[arg(long)]
    pub stall: Option<usize>,
    #[arg(long)]
    pub tournament: Option<usize>,
    /// Standard deviation divisor for the Gaussian EDA: population or sample.
    #[arg(long)]
    pub eda_std: Option<String>,
    /// Penalty per missing overlay link (default: above any linked route).
    #[arg(long)]
    pub penalty: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenNetArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub shape: ShapeFlags,
    /// Output file; standard output when absent and no --out-dir is given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Args)]
pub struct ZonesArgs {
    #[command(flatten)]
    pub net: NetFlags,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub net: NetFlags,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub src: Option<usize>,
    #[arg(long)]
    pub dst: Option<usize>,
    /// ga, eda-umda or eda-gauss.
    #[arg(long)]
    pub engine: Option<String>,
    #[command(flatten)]
    pub engine_flags: EngineFlags,
    /// Per-generation CSV path (default: <out-dir>/run.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fail with exit code 3 when the destination is unreachable.
    #[arg(long)]
    pub require_reachable: bool,
    #[command(flatten)]
    pub common: CommonFlags,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `start:end:step` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Comma-separated engine tags.
    #[arg(long)]
    pub engines: Option<String>,
    /// Network size whose average-fitness curves go into fig5.csv (default:
    /// the largest size).
    #[arg(long)]
    pub fig5_size: Option<usize>,
    #[command(flatten)]
    pub shape: ShapeFlags,
    #[arg(long)]
    pub r: Option<usize>,
    #[command(flatten)]
    pub engine_flags: EngineFlags,
    #[command(flatten)]
    pub common: CommonFlags,
}

/// Every option, as read from flags or from a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    pub net: Option<PathBuf>,
    pub n: Option<usize>,
    pub avg_degree: Option<f64>,
    pub cost_min: Option<u64>,
    pub cost_max: Option<u64>,
    pub r: Option<usize>,
    pub src: Option<usize>,
    pub dst: Option<usize>,
    pub engine: Option<String>,
    pub engines: Option<String>,
    pub pop: Option<usize>,
    pub sel_frac: Option<f64>,
    pub pc: Option<f64>,
    pub pm: Option<f64>,
    pub max_gen: Option<usize>,
    pub stall: Option<usize>,
    pub tournament: Option<usize>,
    pub eda_std: Option<String>,
    pub penalty: Option<f64>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub sizes: Option<String>,
    pub repeats: Option<usize>,
    pub fig5_size: Option<usize>,
    pub require_reachable: Option<bool>,
}

macro_rules! prefer {
    ($flags:ident, $file:ident; $($field:ident),* $(,)?) => {
        Settings { $($field: $flags.$field.or($file.$field)),* }
    };
}

impl Settings {
    /// Fields set here win over `file`.
    fn over(self, file: Settings) -> Settings {
        prefer!(self, file; net, n, avg_degree, cost_min, cost_max, r, src, dst, engine, engines,
            pop, sel_frac, pc, pm, max_gen, stall, tournament, eda_std, penalty, seed, out_dir, out,
            sizes, repeats, fig5_size, require_reachable)
    }

    fn with_common(mut self, c: CommonFlags) -> (Self, Option<PathBuf>) {
        self.seed = c.seed;
        self.out_dir = c.out_dir;
        (self, c.config)
    }

    fn with_shape(mut self, s: ShapeFlags) -> Self {
        self.avg_degree = s.avg_degree;
        self.cost_min = s.cost_min;
        self.cost_max = s.cost_max;
        self
    }

    fn with_net(mut self, f: NetFlags) -> Self {
        self.net = f.net;
        self.n = f.n;
        self.with_shape(f.shape)
    }

    fn with_engine(mut self, e: EngineFlags) -> Self {
        self.pop = e.pop;
        self.sel_frac = e.sel_frac;
        self.pc = e.pc;
        self.pm = e.pm;
        self.max_gen = e.max_gen;
        self.stall = e.stall;
        self.tournament = e.tournament;
        self.eda_std = e.eda_std;
        self.penalty = e.penalty;
        self
    }

    fn load(path: &Path) -> Result<Settings, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn zone_params(&self) -> Result<ZoneParams, CliError> {
        ZoneParams::new(self.r.unwrap_or(2)).map_err(usage)
    }

    fn topology_params(&self, n: usize, seed: u64) -> Result<TopologyParams, CliError> {
        let defaults = TopologyParams::default();
        let p = TopologyParams {
            n,
            target_avg_degree: self.avg_degree.unwrap_or(defaults.target_avg_degree),
            cost_min: self.cost_min.unwrap_or(defaults.cost_min),
            cost_max: self.cost_max.unwrap_or(defaults.cost_max),
            seed,
        };
        p.validate().map_err(usage)?;
        Ok(p)
    }

    fn generated_topology(&self) -> Result<TopologyParams, CliError> {
        let n = self.n.unwrap_or(TopologyParams::default().n);
        self.topology_params(n, derive_seed(self.seed(), n, 0, TOPOLOGY_STREAM))
    }

    fn topology(&self) -> Result<TopologySource, CliError> {
        match &self.net {
            Some(path) => Ok(TopologySource::Loaded(Arc::new(read_network(path)?))),
            None => Ok(TopologySource::Generate(self.generated_topology()?)),
        }
    }

    fn engine(&self, tag: &str) -> Result<EngineConfig, CliError> {
        let ga = GaParams::default();
        let eda = EdaParams::default();
        let std_estimator = match self.eda_std.as_deref() {
            None | Some("population") => StdEstimator::Population,
            Some("sample") => StdEstimator::Sample,
            Some(other) => return Err(CliError::Usage(format!("unknown --eda-std {other:?}"))),
        };
        let eda_with = |variant| {
            EngineConfig::Eda(EdaParams {
                population_size: self.pop.unwrap_or(eda.population_size),
                selected_fraction: self.sel_frac.unwrap_or(eda.selected_fraction),
                max_generations: self.max_gen.unwrap_or(eda.max_generations),
                stall_window: self.stall.unwrap_or(eda.stall_window),
                variant,
                std_estimator,
                max_route_len: None,
                seed: 0,
            })
        };
        let engine = match tag {
            "ga" => EngineConfig::Ga(GaParams {
                population_size: self.pop.unwrap_or(ga.population_size),
                crossover_prob: self.pc.unwrap_or(ga.crossover_prob),
                mutation_prob: self.pm.unwrap_or(ga.mutation_prob),
                max_generations: self.max_gen.unwrap_or(ga.max_generations),
                stall_window: self.stall.unwrap_or(ga.stall_window),
                tournament_size: self.tournament.unwrap_or(ga.tournament_size),
                max_route_len: None,
                seed: 0,
            }),
            "eda-umda" => eda_with(EdaVariant::Umda),
            "eda-gauss" => eda_with(EdaVariant::Gaussian),
            other => return Err(CliError::Usage(format!("unknown engine {other:?} (ga, eda-umda, eda-gauss)"))),
        };
        match &engine {
            EngineConfig::Ga(p) => p.validate(),
            EngineConfig::Eda(p) => p.validate(),
        }
        .map_err(usage)?;
        if let Some(p) = self.penalty {
            if !p.is_finite() || p <= 0.0 {
                return Err(CliError::Usage("--penalty must be positive".into()));
            }
        }
        Ok(engine)
    }
}

fn read_network(path: &Path) -> Result<Network, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    load_network(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Parses `start:end:step` (inclusive) or `a,b,c`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad --sizes {text:?}"));
    let sizes: Vec<usize> = if text.contains(':') {
        let parts: Vec<usize> =
            text.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let [start, end, step] = parts[..] else { return Err(bad()) };
        if step == 0 || start > end {
            return Err(bad());
        }
        (start..=end).step_by(step).collect()
    } else {
        text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad());
    }
    Ok(sizes)
}

/// Writes `content` to `out`, to `out_dir/default_name`, or to `stdout`.
fn emit(
    content: &str,
    out: Option<&Path>,
    out_dir: Option<&Path>,
    default_name: &str,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let path = match (out, out_dir) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(d)) => d.join(default_name),
        (None, None) => return stdout.write_all(content.as_bytes()).map_err(internal),
    };
    write_file(&path, content)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(internal)?;
    }
    fs::write(path, content).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

fn resolve(flags: Settings, config: Option<PathBuf>) -> Result<Settings, CliError> {
    match config {
        Some(path) => Ok(flags.over(Settings::load(&path)?)),
        None => Ok(flags),
    }
}

pub fn cmd_gen_net(args: GenNetArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (flags, config) =
        Settings { n: args.n, out: args.out, ..Default::default() }.with_shape(args.shape).with_common(args.common);
    let s = resolve(flags, config)?;
    let params = s.generated_topology()?;
    let net = generate_random_network(&params).map_err(usage)?;
    emit(&net.to_edge_list(), s.out.as_deref(), s.out_dir.as_deref(), "net.txt", stdout)
}

/// One line per node: `node | members | peripheral`.
pub fn zone_dump(net: &Network, params: ZoneParams) -> String {
    let join = |it: &mut dyn Iterator<Item = NodeId>| it.map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    let table = build_zone_table(net, params);
    let mut out = String::new();
    for zone in table.zones() {
        out.push_str(&format!(
            "{} | {} | {}\n",
            zone.center(),
            join(&mut zone.members()),
            join(&mut zone.peripheral().iter().copied())
        ));
    }
    out
}

pub fn cmd_zones(args: ZonesArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (flags, config) =
        Settings { r: args.r, out: args.out, ..Default::default() }.with_net(args.net).with_common(args.common);
    let s = resolve(flags, config)?;
    let zone = s.zone_params()?;
    let net = match s.topology()? {
        TopologySource::Loaded(net) => net,
        TopologySource::Generate(p) => Arc::new(generate_random_network(&p).map_err(usage)?),
    };
    emit(&zone_dump(&net, zone), s.out.as_deref(), s.out_dir.as_deref(), "zones.txt", stdout)
}

pub fn cmd_run(args: RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (flags, config) = Settings {
        r: args.r,
        src: args.src,
        dst: args.dst,
        engine: args.engine,
        out: args.out,
        require_reachable: args.require_reachable.then_some(true),
        ..Default::default()
    }
    .with_net(args.net)
    .with_engine(args.engine_flags)
    .with_common(args.common);
    let s = resolve(flags, config)?;

    let seed = s.seed();
    let zone = s.zone_params()?;
    let tag = s.engine.clone().unwrap_or_else(|| "ga".into());
    let topology = s.topology()?;
    let n = match &topology {
        TopologySource::Loaded(net) => net.node_count(),
        TopologySource::Generate(p) => p.n,
    };
    let engine = s.engine(&tag)?.with_seed(derive_seed(seed, n, 0, ENGINE_STREAM));
    let endpoints = match (s.src, s.dst) {
        (Some(a), Some(b)) => EndpointPolicy::Explicit { source: NodeId(a), destination: NodeId(b) },
        (None, None) => EndpointPolicy::RandomConnected,
        _ => return Err(CliError::Usage("--src and --dst must be given together".into())),
    };

    let instance = Instance::prepare(&topology, zone, endpoints, derive_seed(seed, n, 0, ENDPOINT_STREAM), s.penalty)
        .map_err(|e| match e {
        ExperimentError::NoConnectedPair => CliError::Constraint(e.to_string()),
        other => usage(other),
    })?;
    if s.require_reachable == Some(true) && instance.oracle.is_none() {
        return Err(CliError::Constraint(format!(
            "destination {} is unreachable from {}",
            instance.destination, instance.source
        )));
    }
    let result = instance.run(&engine).map_err(usage)?;

    let csv_path = s.out.clone().unwrap_or_else(|| s.out_dir.clone().unwrap_or_default().join("run.csv"));
    write_file(&csv_path, &report::run_csv(&result.run))?;
    writeln!(stdout, "{}", report::summary_line(&result, seed)).map_err(internal)
}

pub fn cmd_sweep(args: SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (flags, config) = Settings {
        sizes: args.sizes,
        repeats: args.repeats,
        engines: args.engines,
        fig5_size: args.fig5_size,
        r: args.r,
        ..Default::default()
    }
    .with_shape(args.shape)
    .with_engine(args.engine_flags)
    .with_common(args.common);
    let s = resolve(flags, config)?;

    if s.net.is_some() {
        return Err(CliError::Usage("sweep generates its own networks; --net is not accepted".into()));
    }
    let sizes = parse_sizes(s.sizes.as_deref().unwrap_or("100:1000:100"))?;
    let repeats = s.repeats.unwrap_or(10);
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let engines = s
        .engines
        .as_deref()
        .unwrap_or("ga,eda-umda")
        .split(',')
        .map(|t| s.engine(t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    for &n in &sizes {
        s.topology_params(n, 0)?;
    }
    let fig5_size = s.fig5_size.unwrap_or(*sizes.iter().max().unwrap_or(&0));
    if !sizes.contains(&fig5_size) {
        return Err(CliError::Usage(format!("--fig5-size {fig5_size} is not one of the swept sizes")));
    }
    let config = SweepConfig {
        topology: s.topology_params(sizes[0], 0)?,
        sizes,
        repeats,
        zone: s.zone_params()?,
        engines,
        seed: s.seed(),
        penalty: s.penalty,
    };
    let summary = sweep(&config).map_err(|e| CliError::Constraint(e.to_string()))?;

    let dir = s.out_dir.clone().unwrap_or_default();
    let outputs = [
        ("fig3.csv", report::fig3_csv(&summary)),
        ("fig4.csv", report::fig4_csv(&summary)),
        ("fig5.csv", report::fig5_csv(&summary, fig5_size)),
        ("trials.csv", report::trials_csv(&summary)),
    ];
    for (name, content) in &outputs {
        let path = dir.join(name);
        write_file(&path, content)?;
        writeln!(stdout, "wrote {}", path.display()).map_err(internal)?;
    }
    Ok(())
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::GenNet(a) => cmd_gen_net(a, stdout),
        Command::Zones(a) => cmd_zones(a, stdout),
        Command::Run(a) => cmd_run(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
