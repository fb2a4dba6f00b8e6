//! Commands behind the `vilenkin` binary.
//!
//! Each command takes an [`ExperimentConfig`] and returns its CSV files and a text
//! summary as a [`CommandOutput`]; writing to disk is a separate step so the
//! commands stay pure and testable.

mod config;

pub use config::{
    parse_generator, AlphaSpec, ExperimentConfig, RawConfig, CONFIG_KEYS, DEFAULT_DEPTH,
    DEFAULT_TOLERANCE, MAX_ORDER,
};

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::group::GeneratorSequence;
use crate::hardy::{hardy_power, select_alphas, strong_sum_curve, Counterexample, StrongSumMode};
use crate::identities::{CheckReport, IdentityChecker, Measure};
use crate::numeric::{format_f64, linear_fit, neumaier_prefix_sums};
use crate::vilenkin::VilenkinSystem;
use crate::Error;

/// `verify` runs on the longest prefix of the generator with at most this many points.
pub const VERIFY_MAX_ORDER: usize = 4096;
/// Largest rank swept by the Dirichlet-difference lower-bound checks.
pub const VERIFY_INEQUALITY_RANK: usize = 6;
/// Random block patterns drawn for the block lower bound.
pub const VERIFY_LEMMA5_PATTERNS: usize = 64;
/// Default `nmax` for the kernel dump.
pub const KERNELS_DEFAULT_NMAX: usize = 16;
/// Default `nmax` cap for the Lebesgue table.
pub const LEBESGUE_DEFAULT_NMAX: usize = 1024;
/// Largest decay of `T / ‖f‖_{H_{1/2}}^{1/2}` over the second half of the rows that
/// still counts as growth.
pub const GROWTH_RATIO_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for usage and configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn failed(e: Error) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Kernels,
    Lebesgue,
    Variation,
    Counterexample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Kernels => "kernels",
            Command::Lebesgue => "lebesgue",
            Command::Variation => "variation",
            Command::Counterexample => "counterexample",
        }
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
        match self {
            Command::Verify => verify(cfg),
            Command::Kernels => kernels(cfg),
            Command::Lebesgue => lebesgue(cfg),
            Command::Variation => variation(cfg),
            Command::Counterexample => counterexample(cfg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// CSV files, a summary and the pass/fail verdict of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub files: Vec<OutputFile>,
    pub summary: String,
    pub passed: bool,
}

impl CommandOutput {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.contents.as_str())
    }

    /// Writes every file plus `summary.txt` into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        for file in &self.files {
            fs::write(dir.join(&file.name), &file.contents)?;
        }
        fs::write(dir.join("summary.txt"), &self.summary)?;
        Ok(())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Builds the rayon global pool from `VILENKIN_THREADS` when it is set.
pub fn configure_threads(value: Option<&str>) -> Result<Option<usize>, CliError> {
    let Some(value) = value else {
        return Ok(None);
    };
    let threads = value
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::Config(format!(
                "VILENKIN_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(Some(threads))
}

/// The longest prefix of `generator` whose order stays within `max_order`.
fn verify_prefix(generator: &GeneratorSequence, max_order: usize) -> GeneratorSequence {
    let depth = (0..=generator.depth())
        .rev()
        .find(|&d| generator.scale(d) <= max_order)
        .unwrap_or(0);
    generator
        .truncate(depth)
        .expect("prefix depth within range")
}

/// Kernel identities, Dirichlet-difference bounds, tail bounds and randomized block bounds.
pub fn verify(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let generator = verify_prefix(&cfg.generator, VERIFY_MAX_ORDER);
    let checker = IdentityChecker::new(generator.clone()).with_tolerance(cfg.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut reports = checker.identity_sweep().map_err(failed)?;
    reports.extend(
        checker
            .inequality_sweep(VERIFY_INEQUALITY_RANK)
            .map_err(failed)?,
    );
    reports.extend(checker.tail_sweep().map_err(failed)?);
    reports.extend(
        checker
            .lemma5_sweep(VERIFY_LEMMA5_PATTERNS, &mut rng)
            .map_err(failed)?,
    );

    let mut csv = String::from(CheckReport::CSV_HEADER);
    csv.push('\n');
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    let passed = reports.iter().all(|r| r.passed);

    let mut summary = String::new();
    writeln!(summary, "generator: {:?}", generator.radices()).unwrap();
    if generator.depth() < cfg.generator.depth() {
        writeln!(
            summary,
            "checks run on the depth-{} prefix (order <= {VERIFY_MAX_ORDER})",
            generator.depth()
        )
        .unwrap();
    }
    let mut names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    for name in names {
        let group: Vec<&CheckReport> = reports.iter().filter(|r| r.name == name).collect();
        let failed = group.iter().filter(|r| !r.passed).count();
        let deviations = group.iter().filter_map(|r| match r.measure {
            Measure::Deviation(d) => Some(d),
            _ => None,
        });
        let margins = group.iter().filter_map(|r| match r.measure {
            Measure::Margin(m) => Some(m),
            _ => None,
        });
        let worst_dev = deviations.fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });
        let worst_margin = margins.fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.min(m)))
        });
        let detail = match (worst_dev, worst_margin) {
            (Some(d), _) => format!("max deviation {d:.3e}"),
            (None, Some(m)) => format!("min margin {m:.6e}"),
            (None, None) => "not applicable".to_string(),
        };
        writeln!(
            summary,
            "{name}: {} checks, {failed} failed, {detail}",
            group.len()
        )
        .unwrap();
    }
    writeln!(
        summary,
        "result: {}",
        if passed {
            "all checks passed"
        } else {
            "FAILED"
        }
    )
    .unwrap();
    Ok(CommandOutput {
        files: vec![OutputFile {
            name: "verify.csv".into(),
            contents: csv,
        }],
        summary,
        passed,
    })
}

/// `D_n` and `K_n` cell values for `1 <= n <= nmax`.
pub fn kernels(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let system = VilenkinSystem::new(cfg.generator.clone());
    let nmax = cfg.nmax.unwrap_or(KERNELS_DEFAULT_NMAX.min(system.order()));
    let rows: Vec<(String, String)> = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let d = system.dirichlet(n).expect("n within range");
            let k = system.fejer_kernel(n).expect("n within range");
            (kernel_rows(n, d.values()), kernel_rows(n, k.values()))
        })
        .collect();
    let header = "n,index,real,imag\n";
    let mut dirichlet = String::from(header);
    let mut fejer = String::from(header);
    for (d, k) in rows {
        dirichlet.push_str(&d);
        fejer.push_str(&k);
    }
    let summary = format!(
        "generator: {:?}\nkernels D_n and K_n for n = 1..={nmax} on {} cells\n",
        cfg.generator.radices(),
        system.order()
    );
    Ok(CommandOutput {
        files: vec![
            OutputFile {
                name: "dirichlet.csv".into(),
                contents: dirichlet,
            },
            OutputFile {
                name: "fejer.csv".into(),
                contents: fejer,
            },
        ],
        summary,
        passed: true,
    })
}

fn kernel_rows(n: usize, values: &[num_complex::Complex64]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{n},{i},{},{}", format_f64(v.re), format_f64(v.im)).unwrap();
    }
    out
}

/// Lebesgue constants `L_n = ‖D_n‖_1` for `1 <= n <= nmax`.
pub fn lebesgue(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let system = VilenkinSystem::new(cfg.generator.clone());
    let nmax = cfg
        .nmax
        .unwrap_or(LEBESGUE_DEFAULT_NMAX.min(system.order()));
    let values: Vec<f64> = (1..=nmax)
        .into_par_iter()
        .map(|n| system.lebesgue_constant(n).expect("n within range"))
        .collect();
    let mut csv = String::from("n,lebesgue\n");
    for (i, v) in values.iter().enumerate() {
        writeln!(csv, "{},{}", i + 1, format_f64(*v)).unwrap();
    }
    let mut summary = format!(
        "generator: {:?}\nLebesgue constants for n = 1..={nmax}\n",
        cfg.generator.radices()
    );
    if let Some((i, max)) = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
        writeln!(summary, "largest: L_{} = {max:.6}", i + 1).unwrap();
    }
    Ok(CommandOutput {
        files: vec![OutputFile {
            name: "lebesgue.csv".into(),
            contents: csv,
        }],
        summary,
        passed: true,
    })
}

/// `Σ_{1<=l<limit} v(l)` for every `limit <= bound`, indexed by `limit`.
fn variation_prefix(generator: &GeneratorSequence, bound: usize) -> Vec<f64> {
    let values: Vec<f64> = (0..bound)
        .into_par_iter()
        .map(|l| generator.variation(l).expect("l within range") as f64)
        .collect();
    let mut prefix = vec![0.0];
    prefix.extend(neumaier_prefix_sums(&values));
    prefix
}

/// Mean variation over `[1, M_n)` for every rank `1 <= n <= N`.
pub fn variation(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let g = &cfg.generator;
    let prefix = variation_prefix(g, g.order());
    let mut csv = String::from("n,M_n,mean_v,ratio\n");
    let mut ratios = Vec::new();
    for n in 1..=g.depth() {
        let m = g.scale(n);
        let mean = prefix[m] / (m - 1) as f64;
        ratios.push(mean / n as f64);
        writeln!(
            csv,
            "{n},{m},{},{}",
            format_f64(mean),
            format_f64(mean / n as f64)
        )
        .unwrap();
    }
    let mut summary = format!(
        "generator: {:?}\nmean of v over [1, M_n) for n = 1..={}\n",
        g.radices(),
        g.depth()
    );
    if let Some(last) = ratios.last() {
        writeln!(summary, "mean/n at n = {}: {last:.6}", g.depth()).unwrap();
    }
    Ok(CommandOutput {
        files: vec![OutputFile {
            name: "variation.csv".into(),
            contents: csv,
        }],
        summary,
        passed: true,
    })
}

/// Resolves the configured rank spec against the generator.
pub fn resolve_alphas(cfg: &ExperimentConfig) -> Result<Vec<usize>, CliError> {
    let depth = cfg.depth();
    match &cfg.alphas {
        AlphaSpec::Explicit(list) => Ok(list.clone()),
        AlphaSpec::Auto => {
            let start = if depth >= 5 { 4 } else { 1 };
            if depth <= start {
                return Err(CliError::Failed(format!(
                    "depth {depth} leaves no room for a rank"
                )));
            }
            Ok((start..depth).collect())
        }
        AlphaSpec::Greedy { count, base } => {
            select_alphas(&cfg.phi, *count, cfg.generator.radices(), *base).map_err(|e| match e {
                Error::AlphaBudget {
                    achieved,
                    requested,
                } => CliError::Failed(format!(
                    "only {} of {requested} ranks fit depth {depth} (found {achieved:?})",
                    achieved.len()
                )),
                other => CliError::Failed(other.to_string()),
            })
        }
    }
}

/// Growth of `T(n) = (1/(n φ_n)) Σ_{k<=n} ‖σ_k f‖_{1/2}^{1/2}` at `n = 2M_{α_k}`.
pub fn counterexample(cfg: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let alphas = resolve_alphas(cfg)?;
    let system = VilenkinSystem::new(cfg.generator.clone());
    let ce = Counterexample::new(system, cfg.phi.clone(), alphas).map_err(failed)?;
    let top = 2 * ce.scale(ce.len() - 1);
    let curve = strong_sum_curve(
        ce.system(),
        ce.function(),
        top,
        0.5,
        StrongSumMode::FejerPlain,
        Some(cfg.phi.clone()),
    )
    .map_err(failed)?;
    let prefix = variation_prefix(ce.generator(), ce.scale(ce.len() - 1));

    let mut csv = String::from("k,alpha_k,M_alpha,lambda_k,n,T_n,v_mean,norm_sigma\n");
    let mut t_values = Vec::new();
    let mut proxies = Vec::new();
    for k in 0..ce.len() {
        let m = ce.scale(k);
        let n = 2 * m;
        let t = curve.value(n).map_err(failed)?;
        let v_mean = prefix[m] / m as f64;
        t_values.push(t);
        proxies.push(ce.growth_proxy(k));
        writeln!(
            csv,
            "{},{},{m},{},{n},{},{},{}",
            k + 1,
            ce.alphas()[k],
            format_f64(ce.lambdas()[k]),
            format_f64(t),
            format_f64(v_mean),
            format_f64(curve.term(n))
        )
        .unwrap();
    }

    // T(2M_{α_k}) only sees atoms 1..=k, so it is compared with the norm of that prefix.
    let mut prefix_sum = crate::GridFunction::zero(ce.generator().clone());
    let mut normalized = Vec::with_capacity(ce.len());
    for (k, t) in t_values.iter().enumerate() {
        prefix_sum
            .add_scaled(
                num_complex::Complex64::new(ce.lambdas()[k], 0.0),
                &ce.atom(k),
            )
            .map_err(failed)?;
        let norm = hardy_power(&prefix_sum, 0.5).map_err(failed)?;
        normalized.push(t / norm);
    }

    let mut summary = String::new();
    writeln!(summary, "generator: {:?}", ce.generator().radices()).unwrap();
    writeln!(summary, "phi: {}", ce.phi()).unwrap();
    writeln!(summary, "alphas: {:?}", ce.alphas()).unwrap();
    writeln!(
        summary,
        "sum of lambda_k^(1/2): {:.6}",
        ce.coefficient_sum(0.5)
    )
    .unwrap();
    let ratios: Vec<String> = normalized.iter().map(|r| format!("{r:.6}")).collect();
    writeln!(
        summary,
        "T / |f_k|_H(1/2)^(1/2) per row: {}",
        ratios.join(" ")
    )
    .unwrap();
    let verdict = match linear_fit(&proxies, &t_values) {
        None => {
            writeln!(summary, "fit: not enough rows").unwrap();
            "undetermined"
        }
        Some(fit) => {
            writeln!(
                summary,
                "fit of T against the proxy: slope {:.6}, correlation {:.6}",
                fit.slope, fit.correlation
            )
            .unwrap();
            let half = t_values.len() / 2;
            let increasing = t_values[half..].windows(2).all(|w| w[1] > w[0]);
            let last = normalized[normalized.len() - 1];
            let holds_up = last >= normalized[half] * (1.0 - GROWTH_RATIO_SLACK);
            if increasing && holds_up && fit.slope > 0.0 && fit.correlation >= 0.9 {
                "divergent"
            } else {
                "bounded"
            }
        }
    };
    writeln!(summary, "growth: {verdict}").unwrap();
    Ok(CommandOutput {
        files: vec![OutputFile {
            name: "counterexample.csv".into(),
            contents: csv,
        }],
        summary,
        passed: true,
    })
}
