//! `spanom` command line: `generate`, `detect` and `study`.
//!
//! All three read one TOML file; flags override the matching keys. Exit codes
//! are 0 on success, 2 for bad configuration or input, and 3 when a detector
//! had no meaningful value (a degenerate computation). Detection is reported
//! in the output rows, never through the exit code.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::chisq::{chi_square_max, ChiSqConfig, ChiSqResult};
use crate::error::{Error, Result};
use crate::harness::{
    l1_reference, sensitivity_sweep, sweep_table, write_power_csv, write_quantiles_csv, write_samples_csv,
    AnomalyRecipe, DetectorSpec, ExpectationChoice, ModelRecipe, StudyConfig,
};
use crate::l1norm::{l1_detect_spectrum, L1Reference, L1Result};
use crate::netgen::{embed_anomaly_with, read_edge_list, sample_anomaly_nodes, write_edge_list, AnomalySpec, NetworkKind};
use crate::report::fmt_g6;
use crate::rng;
use crate::spectral::{network_spectrum, ExpectationModel, ExpectationOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "spanom", version, about = "Spectral anomaly detection for static networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one network from the `[network]` block and write it as an edge list.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Output file (default: <out-dir>/network.edges).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the configured detectors on an edge-list file.
    Detect {
        /// Edge-list file.
        network: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the `[study]` block and write quantiles.csv, samples.csv and power.csv.
    Study {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Replicates per study cell.
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Significance level for every detector.
    #[arg(long)]
    pub alpha: Option<f64>,
}

/// Parsed run configuration.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    /// Anomaly-free reference networks for L1 detectors that need them.
    pub history: usize,
    pub network: Option<NetworkBlock>,
    #[serde(rename = "detector")]
    pub detectors: Vec<DetectorSpec>,
    pub expectation: ExpectationBlock,
    pub study: Option<StudyBlock>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out_dir: PathBuf::from("."),
            threads: None,
            history: 1000,
            network: None,
            detectors: Vec::new(),
            expectation: ExpectationBlock::default(),
            study: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkBlock {
    pub n: usize,
    pub model: ModelRecipe,
    #[serde(default)]
    pub anomaly: Option<AnomalyRecipe>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpectationBlock {
    /// Explicit `E[A]` for `detect`; by default an ER expectation with the
    /// rate estimated from the file.
    pub model: Option<ExpectationModel>,
    /// Studies: estimate ER rates from each network instead of using the
    /// generating value.
    pub estimate: bool,
    pub zero_diagonal: bool,
}

impl ExpectationBlock {
    fn choice(&self) -> ExpectationChoice {
        ExpectationChoice { estimate: self.estimate, zero_diagonal: self.zero_diagonal }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyBlock {
    pub replicates: usize,
    pub cells: Vec<CellBlock>,
    pub grid: Option<GridBlock>,
}

impl Default for StudyBlock {
    fn default() -> Self {
        Self { replicates: 1000, cells: Vec::new(), grid: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellBlock {
    pub n: usize,
    pub model: ModelRecipe,
    #[serde(default)]
    pub anomaly: Option<AnomalyRecipe>,
    #[serde(default)]
    pub replicates: Option<usize>,
}

/// Cartesian product `n x models x anomalies`; an empty anomaly list gives
/// null-study cells.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub n: Vec<usize>,
    pub models: Vec<ModelRecipe>,
    #[serde(default)]
    pub anomalies: Vec<AnomalyRecipe>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies command-line overrides.
    pub fn apply(&mut self, common: &Common) {
        if let Some(s) = common.seed {
            self.seed = s;
        }
        if let Some(t) = common.threads {
            self.threads = Some(t);
        }
        if let Some(d) = &common.out_dir {
            self.out_dir = d.clone();
        }
        if let Some(r) = common.replicates {
            let study = self.study.get_or_insert_with(StudyBlock::default);
            study.replicates = r;
            for c in &mut study.cells {
                c.replicates = Some(r);
            }
        }
        if let Some(a) = common.alpha {
            for d in &mut self.detectors {
                d.set_alpha(a);
            }
        }
    }

    /// Study cells in order: explicit cells first, then the grid. Each cell
    /// gets its own seed, `seed + index`.
    pub fn study_cells(&self) -> Result<Vec<StudyConfig>> {
        let study = self.study.as_ref().ok_or_else(|| Error::Format("missing [study] block".into()))?;
        if self.detectors.is_empty() {
            return Err(Error::Format("a study needs at least one [[detector]]".into()));
        }
        let mut cells: Vec<(usize, ModelRecipe, Option<AnomalyRecipe>, usize)> = study
            .cells
            .iter()
            .map(|c| (c.n, c.model.clone(), c.anomaly, c.replicates.unwrap_or(study.replicates)))
            .collect();
        if let Some(g) = &study.grid {
            for &n in &g.n {
                for m in &g.models {
                    if g.anomalies.is_empty() {
                        cells.push((n, m.clone(), None, study.replicates));
                    }
                    for a in &g.anomalies {
                        cells.push((n, m.clone(), Some(*a), study.replicates));
                    }
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::Format("[study] defines no cells".into()));
        }
        let configs: Vec<StudyConfig> = cells
            .into_iter()
            .enumerate()
            .map(|(i, (n, model, anomaly, replicates))| StudyConfig {
                n,
                model,
                detectors: self.detectors.clone(),
                replicates,
                anomaly,
                base_seed: self.seed.wrapping_add(i as u64),
                expectation: self.expectation.choice(),
                history: self.history,
            })
            .collect();
        for (i, c) in configs.iter().enumerate() {
            c.validate().and_then(|_| c.model.resolve(c.n, c.base_seed)).map_err(|e| prefix(&format!("cell {i}"), e))?;
        }
        Ok(configs)
    }
}

fn prefix(what: &str, e: Error) -> Error {
    match e {
        Error::Degenerate(m) => Error::Degenerate(format!("{what}: {m}")),
        Error::Io(m) => Error::Io(format!("{what}: {m}")),
        other => Error::Format(format!("{what}: {other}")),
    }
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> u8 {
    if e.is_degenerate() {
        EXIT_DEGENERATE
    } else {
        EXIT_INPUT
    }
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply(common);
    if let Some(t) = cfg.threads {
        if t == 0 {
            return Err(Error::Format("threads must be at least 1".into()));
        }
        // fails only if a global pool already exists, which is harmless here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(cfg)
}

/// Draws the configured network and writes it. Returns the output path.
pub fn cmd_generate(cfg: &RunConfig, output: Option<&Path>, out: &mut impl Write) -> Result<PathBuf> {
    let net = cfg.network.as_ref().ok_or_else(|| Error::Format("missing [network] block".into()))?;
    let spec = net.model.resolve(net.n, cfg.seed)?;
    let mut r = rng::seeded(cfg.seed);
    let mut adj = spec.sample_with(net.n, &mut r)?;
    if let Some(a) = &net.anomaly {
        let nodes = sample_anomaly_nodes(net.n, a.size.nodes(net.n), &mut r)?;
        embed_anomaly_with(&mut adj, &AnomalySpec { nodes, mode: a.mode }, &spec, &mut r)?;
    }
    let path = output.map_or_else(|| cfg.out_dir.join("network.edges"), Path::to_path_buf);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    let file = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    write_edge_list(&adj, &mut w)?;
    w.flush()?;
    let edges = adj.entries().iter().enumerate().filter(|&(i, &v)| v > 0 && i / net.n < i % net.n).count();
    writeln!(
        out,
        "n={} kind={} edges={} density={} path={}",
        net.n,
        adj.kind(),
        edges,
        fmt_g6(adj.density()),
        path.display()
    )?;
    Ok(path)
}

/// One detector's outcome on a file.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectRow {
    ChiSquare(ChiSqResult),
    L1Norm(L1Result),
}

/// Runs every configured detector (default: unimproved chi-square) on the
/// network file and prints one header line and CSV row per detector. The
/// first degenerate outcome is returned as an error after all rows printed.
pub fn cmd_detect(cfg: &RunConfig, network: &Path, out: &mut impl Write) -> Result<Vec<DetectRow>> {
    let file = File::open(network).map_err(|e| Error::Io(format!("{}: {e}", network.display())))?;
    let adj = read_edge_list(BufReader::new(file)).map_err(|e| prefix(&network.display().to_string(), e))?;
    let n = adj.n();
    let detectors = if cfg.detectors.is_empty() { vec![DetectorSpec::ChiSquare(ChiSqConfig::default())] } else { cfg.detectors.clone() };
    let model = cfg.expectation.model.unwrap_or(match adj.kind() {
        NetworkKind::Binary => ExpectationModel::ErBinary { p0: None },
        NetworkKind::Count => ExpectationModel::ErCount { lambda0: None },
    });
    let opts = ExpectationOptions { zero_diagonal: cfg.expectation.zero_diagonal };
    let mut m = 0;
    for d in &detectors {
        m = m.max(d.eigenpairs(n)?);
    }
    let spectrum = network_spectrum(&adj, &model, opts, m)?;
    let mut rows = Vec::new();
    let mut first_degenerate = None;
    for d in &detectors {
        let row = match d {
            DetectorSpec::ChiSquare(c) => chi_square_max(&spectrum, c).map(DetectRow::ChiSquare),
            DetectorSpec::L1Norm(c) => {
                let reference = if c.needs_history() {
                    let net = cfg.network.as_ref().ok_or_else(|| {
                        Error::Format("this L1 configuration needs a [network] block to draw reference networks".into())
                    })?;
                    if net.n != n {
                        return Err(Error::Format(format!("[network] has n={} but the file has n={n}", net.n)));
                    }
                    let spec = net.model.resolve(n, cfg.seed)?;
                    l1_reference(&spec, n, c, cfg.expectation.choice(), cfg.history, cfg.seed)?
                } else {
                    L1Reference::without_history(c, c.resolved_m(n)?)?
                };
                l1_detect_spectrum(&spectrum, c, &reference).map(DetectRow::L1Norm)
            }
        };
        match row {
            Ok(DetectRow::ChiSquare(r)) => {
                writeln!(out, "{}\n{}", ChiSqResult::CSV_HEADER, r.csv_row())?;
                rows.push(DetectRow::ChiSquare(r));
            }
            Ok(DetectRow::L1Norm(r)) => {
                writeln!(out, "{}\n{}", L1Result::CSV_HEADER, r.csv_row())?;
                rows.push(DetectRow::L1Norm(r));
            }
            Err(e) if e.is_degenerate() => {
                first_degenerate.get_or_insert(prefix(d.name(), e));
            }
            Err(e) => return Err(e),
        }
    }
    match first_degenerate {
        Some(e) => Err(e),
        None => Ok(rows),
    }
}

/// Runs every study cell and writes the three CSV files into `out_dir`.
/// Fails only when no cell succeeded.
pub fn cmd_study(cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    let configs = cfg.study_cells()?;
    let cells = sensitivity_sweep(&configs)?;
    let rows = sweep_table(&cells);
    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::Io(format!("{}: {e}", cfg.out_dir.display())))?;
    let create = |name: &str| -> Result<BufWriter<File>> {
        let p = cfg.out_dir.join(name);
        Ok(BufWriter::new(File::create(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?))
    };
    let mut q = create("quantiles.csv")?;
    write_quantiles_csv(&mut q, &cells, &rows)?;
    q.flush()?;
    let mut s = create("samples.csv")?;
    write_samples_csv(&mut s, &cells)?;
    s.flush()?;
    let mut p = create("power.csv")?;
    write_power_csv(&mut p, &cells, &rows)?;
    p.flush()?;

    for cell in &cells {
        let c = &cell.config;
        let kind = if c.anomaly.is_some() { "power" } else { "null" };
        let status = match &cell.report {
            Ok(rep) => rep
                .detectors
                .iter()
                .map(|d| match (&d.failure, d.confusion, d.q95()) {
                    (Some(f), _, _) => format!("{} error ({f})", d.variant),
                    (None, Some(cf), _) => format!(
                        "{} DR={} FAR={}",
                        d.variant,
                        fmt_g6(cf.detection_rate()),
                        fmt_g6(cf.false_alarm_rate())
                    ),
                    (None, None, q) => format!("{} q95={}", d.variant, q.map_or("NaN".into(), fmt_g6)),
                })
                .collect::<Vec<_>>()
                .join("; "),
            Err(e) => format!("error: {e}"),
        };
        writeln!(
            out,
            "cell {} {kind} {} n={} density={} replicates={}: {status}",
            cell.index,
            c.model.name(),
            c.n,
            fmt_g6(c.model.density_param()),
            c.replicates
        )?;
    }
    if cells.iter().any(|c| c.report.is_ok()) {
        Ok(())
    } else {
        Err(Error::Degenerate("every study cell failed".into()))
    }
}

/// Parses `args` and runs the chosen subcommand.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Generate { common, output } => {
            load_config(common).and_then(|cfg| cmd_generate(&cfg, output.as_deref(), &mut out).map(|_| ()))
        }
        Command::Detect { network, common } => load_config(common).and_then(|cfg| cmd_detect(&cfg, network, &mut out).map(|_| ())),
        Command::Study { common } => load_config(common).and_then(|cfg| cmd_study(&cfg, &mut out)),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("spanom: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
