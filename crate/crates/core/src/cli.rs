//! Command-line front end.
//!
//! Every subcommand writes CSV (default) or JSON to stdout or `--output`.
//! CSV output starts with `# key=value` lines echoing the full invocation so
//! any artifact can be regenerated from its own header. Exit status is 0 on
//! success, 2 for invalid input and 3 when a requested quantity is
//! mathematically undefined (for example evidence under a flat prior).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{complexity_curve, significance_curve, Curve, Grid, ResolutionQuery};
use crate::criteria::{evaluate_menu, MenuOptions, ModelSpec, Partition, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::gaussian::{evidence_information, posterior, GaussianModel, PriorSpec};
use crate::io::{format_f64, read_samples_path, write_echo};
use crate::rng::DEFAULT_SEED;
use crate::simulation::{
    figure_prepost, figure_resolution, lindley_search, run_experiment, ExperimentConfig, ExperimentKind,
    ExperimentReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug, Serialize)]
#[command(name = "lindley", version, about = "Partition-indexed model selection for Gaussian location models")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Root seed for every random stream [default: 6840151270498500609]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum number of training/generalization subsets per estimate [default: 100000]
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// TOML experiment config (simulate, figures fig1/fig4)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for Monte Carlo runs [default: all cores]
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Aligned human-readable tables / indented JSON
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PriorArgs {
    /// Prior standard deviation of each free coordinate
    #[arg(long, conflicts_with = "improper")]
    pub tau: Option<f64>,
    /// Improper flat prior on the free coordinates
    #[arg(long)]
    pub improper: bool,
}

impl PriorArgs {
    fn prior(&self) -> Result<PriorSpec> {
        match (self.tau, self.improper) {
            (Some(t), false) => PriorSpec::normal(t),
            (None, true) => Ok(PriorSpec::ImproperFlat),
            _ => Err(Error::invalid("prior", "give exactly one of --tau or --improper")),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DataArgs {
    /// CSV file, one observation per row, optional header
    #[arg(long)]
    pub input: PathBuf,
    /// Known noise standard deviation (never estimated from the data)
    #[arg(long)]
    pub sigma: f64,
    /// Free-dimension counts of the nested model menu [default: 0 and D]
    #[arg(long, value_delimiter = ',')]
    pub free_dims: Vec<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Every criterion for a dataset and a menu of nested models
    Criteria {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        prior: PriorArgs,
        /// Partition ratio N_G / N_T
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        n_train: Option<usize>,
        #[arg(long)]
        n_gen: Option<usize>,
        /// Fraction for the fractional Bayes factor [default: 1/N]
        #[arg(long)]
        fraction: Option<f64>,
    },
    /// Log-evidence and posterior of each model
    Evidence {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        prior: PriorArgs,
    },
    /// Resolution thresholds of each decision rule
    Resolution {
        /// Standard error of the mean; or give --sigma and --n
        #[arg(long)]
        sigma_mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, default_value_t = 1)]
        delta_k: usize,
        #[arg(long, default_value_t = 2.0)]
        z: f64,
    },
    /// Significance level implied by the partition, on a grid of ratios
    Significance {
        #[arg(long, default_value_t = 1)]
        delta_k: usize,
        #[arg(long, default_value = "log:1e-3:1e3:61")]
        nu_grid: Grid,
    },
    /// A Lindley configuration: rejected by the test, favored by the Bayes factor
    Paradox {
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = 0.95)]
        posterior: f64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Run a Monte Carlo experiment from --config; flags override the file
    Simulate {
        #[arg(long)]
        experiment: Option<ExperimentKind>,
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Curve data for plotting
    Figures {
        #[command(subcommand)]
        figure: Figure,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "figure", rename_all = "lowercase")]
pub enum Figure {
    /// Bayes and frequentist resolution against sample size
    Fig1 {
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        n_grid: Option<Grid>,
        #[arg(long)]
        tau_grid: Option<Grid>,
        /// Displacement whose detection sample sizes are reported
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Complexity against partition ratio
    Fig2 {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "log:1e-3:1e3:61")]
        nu_grid: Grid,
    },
    /// Significance level against partition ratio
    Fig3 {
        #[arg(long, default_value_t = 1)]
        dk: usize,
        #[arg(long, default_value = "log:1e-3:1e3:61")]
        nu_grid: Grid,
    },
    /// Expected predictive and postdictive log-ratios against sample size
    Fig4 {
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        n_grid: Option<Grid>,
        #[arg(long)]
        replicates: Option<usize>,
    },
}

/// Rows of strings with a header; rendered as CSV or an aligned table.
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn from_curve(c: &Curve) -> Self {
        Self {
            columns: c.columns.clone(),
            rows: c.rows.iter().map(|r| r.iter().map(|&x| format_f64(x)).collect()).collect(),
        }
    }

    fn write<W: Write>(&self, w: &mut W, pretty: bool) -> Result<()> {
        if !pretty {
            let mut csv = csv::WriterBuilder::new().from_writer(&mut *w);
            csv.write_record(&self.columns)?;
            for r in &self.rows {
                csv.write_record(r)?;
            }
            csv.flush()?;
            return Ok(());
        }
        let shorten = |s: &str| s.parse::<f64>().map(|x| format!("{x:.6}")).unwrap_or_else(|_| s.to_string());
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| shorten(c)).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &[String]| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(w, "{}", line(&self.columns))?;
        for r in &cells {
            writeln!(w, "{}", line(r))?;
        }
        Ok(())
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_f64).unwrap_or_default()
}

/// Flattens the invocation into `key=value` pairs for the CSV header.
fn echo_pairs(cli: &Cli, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut out = vec![("tool".to_string(), format!("lindley {}", env!("CARGO_PKG_VERSION")))];
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, v) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            Value::Null => {}
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    walk("", &serde_json::to_value(&cli.command).unwrap_or(Value::Null), &mut out);
    for (k, v) in extra {
        out.push((k.to_string(), v.clone()));
    }
    // deterministic commands still name the seed so every artifact carries one
    if !out.iter().any(|(k, _)| k == "seed") {
        out.push(("seed".into(), cli.common.seed.unwrap_or(DEFAULT_SEED).to_string()));
    }
    out
}

struct Output<'a> {
    cli: &'a Cli,
    w: &'a mut dyn Write,
}

impl Output<'_> {
    fn csv(&mut self, extra: &[(&str, String)], notes: &[(String, String)], table: &Table) -> Result<()> {
        let mut echo = echo_pairs(self.cli, extra);
        echo.extend(notes.iter().cloned());
        write_echo(&mut self.w, &echo)?;
        table.write(&mut self.w, self.cli.common.pretty)
    }

    fn json(&mut self, extra: &[(&str, String)], result: Value) -> Result<()> {
        let config: serde_json::Map<String, Value> = echo_pairs(self.cli, extra)
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect();
        let doc = json!({ "config": config, "result": result });
        let text = if self.cli.common.pretty {
            serde_json::to_string_pretty(&doc)
        } else {
            serde_json::to_string(&doc)
        }
        .map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(self.w, "{text}")?;
        Ok(())
    }

    fn curve(&mut self, extra: &[(&str, String)], curve: &Curve) -> Result<()> {
        match self.cli.common.format {
            Format::Csv => self.csv(extra, &[], &Table::from_curve(curve)),
            Format::Json => self.json(extra, to_value(curve)?),
        }
    }

    fn report(&mut self, report: &ExperimentReport) -> Result<()> {
        let extra = [("seed", report.seed.to_string())];
        match self.cli.common.format {
            Format::Json => self.json(&extra, to_value(report)?),
            Format::Csv => {
                let mut notes: Vec<(String, String)> = vec![("config".into(), report.config.to_toml().replace('\n', "; "))];
                notes.extend(report.checks.iter().map(|(k, v)| (format!("check.{k}"), v.to_string())));
                notes.extend(report.markers.iter().map(|(k, v)| (format!("marker.{k}"), format_f64(*v))));
                if let Some(w) = &report.witness {
                    if let Value::Object(m) = to_value(w)? {
                        notes.extend(m.into_iter().map(|(k, v)| (format!("witness.{k}"), v.to_string())));
                    }
                }
                let table = match &report.curve {
                    Some(c) => Table::from_curve(c),
                    None => cells_table(report),
                };
                self.csv(&extra, &notes, &table)
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn cells_table(report: &ExperimentReport) -> Table {
    let mut rows = Vec::new();
    for c in &report.cells {
        let head = [
            c.n.to_string(),
            opt(c.nu),
            c.free_dims.map(|k| k.to_string()).unwrap_or_default(),
            c.partition.map(|p| p.n_train().to_string()).unwrap_or_default(),
            c.partition.map(|p| p.n_gen().to_string()).unwrap_or_default(),
        ];
        for (k, e) in &c.estimates {
            let mut r = head.to_vec();
            r.extend([k.clone(), format_f64(e.mean), format_f64(e.se), e.replicates.to_string()]);
            rows.push(r);
        }
        for (k, v) in &c.values {
            let mut r = head.to_vec();
            r.extend([k.clone(), format_f64(*v), String::new(), String::new()]);
            rows.push(r);
        }
        for (k, v) in &c.tallies {
            let mut r = head.to_vec();
            r.extend([k.clone(), v.to_string(), String::new(), String::new()]);
            rows.push(r);
        }
    }
    Table {
        columns: ["n", "nu", "free_dims", "n_train", "n_gen", "quantity", "mean", "se", "replicates"]
            .map(String::from)
            .to_vec(),
        rows,
    }
}

fn menu_for(data: &DataArgs, dim: usize, prior: &PriorSpec) -> Result<Vec<ModelSpec>> {
    let dims = if data.free_dims.is_empty() {
        if dim == 0 { vec![0] } else { vec![0, dim] }
    } else {
        data.free_dims.clone()
    };
    dims.iter()
        .map(|&k| {
            if k > dim {
                return Err(Error::invalid("free_dims", format!("{k} exceeds the data dimension {dim}")));
            }
            Ok(ModelSpec::new(format!("k{k}"), GaussianModel::nested(k, dim), *prior))
        })
        .collect()
}

fn experiment_config(cli: &Cli, kind: Option<ExperimentKind>) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.common.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(k) = kind {
        cfg.experiment = k;
    }
    if let Some(s) = cli.common.seed {
        cfg.seed = s;
    }
    if let Some(b) = cli.common.budget {
        cfg.budget = b;
    }
    Ok(cfg)
}

/// Executes a parsed invocation, writing results to `w`.
pub fn run(cli: &Cli, w: &mut dyn Write) -> Result<()> {
    let seed = cli.common.seed.unwrap_or(DEFAULT_SEED);
    let budget = cli.common.budget.unwrap_or(DEFAULT_BUDGET);
    let workers = cli.common.workers;
    let mut out = Output { cli, w };
    let common = [("seed", seed.to_string()), ("budget", budget.to_string())];

    match &cli.command {
        Command::Criteria {
            data,
            prior,
            nu,
            n_train,
            n_gen,
            fraction,
        } => {
            let prior = prior.prior()?;
            let samples = read_samples_path(&data.input, data.sigma)?;
            let partition = match (nu, n_train, n_gen) {
                (Some(v), None, None) => Partition::from_nu(*v, samples.n())?,
                (None, Some(t), Some(g)) => Partition::new(*t, *g)?,
                _ => {
                    return Err(Error::invalid(
                        "partition",
                        "give exactly one of --nu or the pair --n-train/--n-gen",
                    ))
                }
            };
            let menu = menu_for(data, samples.dim(), &prior)?;
            let eval = evaluate_menu(
                &samples,
                &menu,
                &MenuOptions {
                    partition,
                    budget,
                    seed,
                    fraction: *fraction,
                },
            )?;
            match cli.common.format {
                Format::Json => out.json(&common, to_value(&eval)?),
                Format::Csv => {
                    let mut notes: Vec<(String, String)> = eval
                        .selections
                        .iter()
                        .map(|s| (format!("selected.{}", s.criterion_id), s.model_id.clone()))
                        .collect();
                    notes.extend(eval.skipped.iter().map(|(id, why)| (format!("skipped.{id}"), why.clone())));
                    let rows = eval
                        .reports
                        .iter()
                        .map(|r| {
                            vec![
                                r.criterion_id.to_string(),
                                r.model_id.clone(),
                                r.free_dims.to_string(),
                                format_f64(r.value),
                                opt(r.complexity),
                                r.n_train.map(|v| v.to_string()).unwrap_or_default(),
                                r.n_gen.map(|v| v.to_string()).unwrap_or_default(),
                                opt(r.nu),
                                r.budget.map(|v| v.to_string()).unwrap_or_default(),
                                r.seed.map(|v| v.to_string()).unwrap_or_default(),
                                r.exhaustive.map(|v| v.to_string()).unwrap_or_default(),
                            ]
                        })
                        .collect();
                    let table = Table {
                        columns: [
                            "criterion_id",
                            "model_id",
                            "free_dims",
                            "value",
                            "complexity",
                            "n_train",
                            "n_gen",
                            "nu",
                            "budget",
                            "seed",
                            "exhaustive",
                        ]
                        .map(String::from)
                        .to_vec(),
                        rows,
                    };
                    out.csv(&common, &notes, &table)
                }
            }
        }
        Command::Evidence { data, prior } => {
            let prior = prior.prior()?;
            let samples = read_samples_path(&data.input, data.sigma)?;
            let menu = menu_for(data, samples.dim(), &prior)?;
            let mut rows = Vec::new();
            let mut json_rows = Vec::new();
            for m in &menu {
                let h = evidence_information(samples.summary(), &m.model, &m.prior)?;
                // a model with nothing free has no posterior to report
                let post = (m.model.free_dims() > 0)
                    .then(|| posterior(samples.summary(), &m.model, &m.prior))
                    .transpose()?;
                rows.push(vec![
                    m.id.clone(),
                    m.model.free_dims().to_string(),
                    format_f64(-h),
                    format_f64(h),
                    post.as_ref()
                        .map(|p| p.mean.iter().map(|&x| format_f64(x)).collect::<Vec<_>>().join(" "))
                        .unwrap_or_default(),
                    post.as_ref().map(|p| format_f64(p.sd)).unwrap_or_default(),
                ]);
                json_rows.push(json!({
                    "model_id": m.id, "free_dims": m.model.free_dims(),
                    "log_evidence": -h, "information": h, "posterior": post,
                }));
            }
            match cli.common.format {
                Format::Json => out.json(&[], Value::Array(json_rows)),
                Format::Csv => out.csv(
                    &[],
                    &[],
                    &Table {
                        columns: ["model_id", "free_dims", "log_evidence", "information", "posterior_mean", "posterior_sd"]
                            .map(String::from)
                            .to_vec(),
                        rows,
                    },
                ),
            }
        }
        Command::Resolution {
            sigma_mu,
            sigma,
            n,
            tau,
            nu,
            delta_k,
            z,
        } => {
            let sm = match (sigma_mu, sigma, n) {
                (Some(s), None, _) => *s,
                (None, Some(s), Some(n)) => s / n.sqrt(),
                _ => return Err(Error::invalid("sigma_mu", "give --sigma-mu, or --sigma with --n")),
            };
            let row = ResolutionQuery {
                sigma_mu: sm,
                tau: *tau,
                nu: *nu,
                n: n.unwrap_or(f64::NAN),
                delta_k: *delta_k,
                z: *z,
            }
            .evaluate()?;
            match cli.common.format {
                Format::Json => out.json(&[], to_value(&row)?),
                Format::Csv => {
                    let mut c = Curve::new(&[
                        "sigma_mu",
                        "frequentist",
                        "frequentist_p",
                        "aic",
                        "bic",
                        "nu",
                        "ic_nu",
                        "bayes",
                        "bayes_exact",
                    ]);
                    let nan = f64::NAN;
                    c.push(vec![
                        row.sigma_mu,
                        row.frequentist,
                        row.frequentist_p,
                        row.aic,
                        row.bic.unwrap_or(nan),
                        row.nu,
                        row.ic_nu,
                        row.bayes.unwrap_or(nan),
                        row.bayes_exact.unwrap_or(nan),
                    ]);
                    out.curve(&[], &c)
                }
            }
        }
        Command::Significance { delta_k, nu_grid } => out.curve(&[], &significance_curve(*delta_k, nu_grid)?),
        Command::Paradox {
            confidence,
            posterior,
            n,
            sigma,
        } => {
            let wit = lindley_search(*confidence, *posterior, *n, *sigma)?;
            match cli.common.format {
                Format::Json => out.json(&common, to_value(&wit)?),
                Format::Csv => {
                    let Value::Object(m) = to_value(&wit)? else { unreachable!() };
                    let rows = m.into_iter().map(|(k, v)| vec![k, v.to_string()]).collect();
                    out.csv(&common, &[], &Table {
                        columns: vec!["key".into(), "value".into()],
                        rows,
                    })
                }
            }
        }
        Command::Simulate { experiment, replicates } => {
            if cli.common.config.is_none() && experiment.is_none() {
                return Err(Error::invalid("config", "give --config or --experiment"));
            }
            let mut cfg = experiment_config(cli, *experiment)?;
            if let Some(r) = replicates {
                cfg.replicates = *r;
            }
            cfg.validate()?;
            out.report(&run_experiment(&cfg, workers)?)
        }
        Command::Figures { figure } => match figure {
            Figure::Fig1 {
                sigma,
                n_grid,
                tau_grid,
                mu,
            } => {
                let mut cfg = experiment_config(cli, Some(ExperimentKind::Resolution))?;
                if cli.common.config.is_none() {
                    cfg.n_grid = "pow2:0:20".parse()?;
                }
                if let Some(s) = sigma {
                    cfg.sigma = *s;
                }
                if let Some(g) = n_grid {
                    cfg.n_grid = g.clone();
                }
                if let Some(g) = tau_grid {
                    cfg.tau_grid = g.clone();
                }
                if let Some(m) = mu {
                    cfg.true_mean = vec![*m];
                }
                cfg.validate()?;
                out.report(&figure_resolution(&cfg)?)
            }
            Figure::Fig2 { k, nu_grid } => out.curve(&[], &complexity_curve(*k, nu_grid)?),
            Figure::Fig3 { dk, nu_grid } => out.curve(&[], &significance_curve(*dk, nu_grid)?),
            Figure::Fig4 {
                mu,
                sigma,
                tau,
                n_grid,
                replicates,
            } => {
                let mut cfg = experiment_config(cli, Some(ExperimentKind::Prepost))?;
                if cli.common.config.is_none() {
                    cfg.true_mean = vec![0.1];
                    cfg.tau = Some(1.0);
                    cfg.n_grid = "pow2:0:20".parse()?;
                }
                if let Some(m) = mu {
                    cfg.true_mean = vec![*m];
                }
                if let Some(s) = sigma {
                    cfg.sigma = *s;
                }
                if let Some(t) = tau {
                    cfg.tau = Some(*t);
                }
                if let Some(g) = n_grid {
                    cfg.n_grid = g.clone();
                }
                if let Some(r) = replicates {
                    cfg.replicates = *r;
                }
                cfg.validate()?;
                out.report(&figure_prepost(&cfg, workers)?)
            }
        },
    }
}

/// Exit code for an error: 3 for numeric-domain errors, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric_domain() {
        3
    } else {
        2
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.common.output {
        Some(path) => File::create(path).map_err(Error::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            run(&cli, &mut w)?;
            w.flush()?;
            Ok(())
        }),
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            run(&cli, &mut w)
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
