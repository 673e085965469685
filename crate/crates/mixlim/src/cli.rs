//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixlim_core::diagnostics::{diagnostics_report, DiagnosticsConfig};
use mixlim_core::model::{
    derive_instance, mean_z, mean_z_asymptotic, mu1, mu2, var_z, var_z_asymptotic, ModelParams,
};
use mixlim_core::regimes::{
    classify, normalization_plan, stable_scale, FluctuationRegime, LimitLaw, NormalizationPlan,
    RegimeReport,
};
use serde::Serialize;

use crate::driver;
use crate::error::{Error, Result};
use crate::grid::{self, Range};
use crate::output::{self, num};
use crate::verify::{self, TestKind, VerifyConfig};

pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(
    name = "mixlim",
    version,
    about = "Limit laws of sums from a light-tail / truncated heavy-tail mixture"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report the fluctuation and LLN regimes of (alpha, gamma1, gamma2).
    Classify(ClassifyArgs),
    /// Exact and leading-order moments of one row.
    Moments(MomentsArgs),
    /// Limit-condition diagnostics of one row.
    Diagnose(DiagnoseArgs),
    /// Simulate normalized row sums.
    Simulate(SimulateArgs),
    /// Test normalized sums against the predicted limit law.
    Verify(VerifyArgs),
    /// Classify every cell of a (gamma1, gamma2) grid.
    PhaseGrid(PhaseGridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma1: f64,
    #[arg(long, allow_hyphen_values = true)]
    gamma2: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(
            self.alpha,
            self.lambda,
            self.gamma1,
            self.gamma2,
        )?)
    }
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: u64,
    /// Scale beta_n; defaults to the regime's normalizing scale.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    x: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args, Serialize)]
struct RunArgs {
    #[arg(long = "reps", visible_alias = "replicates", default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads; defaults to MIXLIM_THREADS, then to the CPU count.
    #[arg(long, env = "MIXLIM_THREADS")]
    threads: Option<usize>,
}

impl RunArgs {
    fn threads(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TestArg {
    Auto,
    Normal,
    Stable,
    LlnFull,
    LlnLight,
}

impl From<TestArg> for TestKind {
    fn from(t: TestArg) -> Self {
        match t {
            TestArg::Auto => TestKind::Auto,
            TestArg::Normal => TestKind::Normal,
            TestArg::Stable => TestKind::Stable,
            TestArg::LlnFull => TestKind::LlnFull,
            TestArg::LlnLight => TestKind::LlnLight,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Ladder of row sizes, comma separated.
    #[arg(
        long = "n",
        visible_alias = "ladder",
        value_delimiter = ',',
        default_value = "10000,100000"
    )]
    ladder: Vec<u64>,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 0.01)]
    level: f64,
    #[arg(long = "test", visible_alias = "force-test", value_enum, default_value_t = TestArg::Auto)]
    test: TestArg,
    /// Size of the stable reference sample; defaults to the replicate count.
    #[arg(long)]
    reference_size: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    ecf_threshold: f64,
    #[arg(long, default_value_t = 0.05)]
    lln_delta: f64,
    #[arg(long, default_value_t = 0.95)]
    lln_coverage: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct PhaseGridArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    gamma1: Range,
    #[arg(long)]
    gamma2: Range,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().ansi().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Classify(a) => cmd_classify(a, out),
        Command::Moments(a) => cmd_moments(a, out),
        Command::Diagnose(a) => cmd_diagnose(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::PhaseGrid(a) => cmd_phase_grid(a, out),
    }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

#[derive(Serialize)]
struct ClassifyJson {
    schema: u32,
    alpha: f64,
    gamma1: f64,
    gamma2: f64,
    fluctuation: &'static str,
    branch: Option<&'static str>,
    lln: &'static str,
    zone: Option<u8>,
}

fn regime_json(alpha: f64, g1: f64, g2: f64, r: &RegimeReport) -> ClassifyJson {
    ClassifyJson {
        schema: 1,
        alpha,
        gamma1: g1,
        gamma2: g2,
        fluctuation: r.fluctuation.as_str(),
        branch: match r.fluctuation {
            FluctuationRegime::Stable(b) => Some(b.as_str()),
            _ => None,
        },
        lln: r.lln.as_str(),
        zone: r.zone,
    }
}

fn cmd_classify(a: ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.model.params()?;
    let r = classify(p.alpha(), p.gamma1(), p.gamma2());
    let j = regime_json(p.alpha(), p.gamma1(), p.gamma2(), &r);
    match a.format {
        Format::Json => output::write_json(out, &j),
        Format::Csv => writeln!(
            out,
            "alpha,gamma1,gamma2,zone,fluctuation,branch,lln\n{},{},{},{},{},{},{}",
            num(j.alpha),
            num(j.gamma1),
            num(j.gamma2),
            j.zone.unwrap_or(0),
            j.fluctuation,
            j.branch.unwrap_or(""),
            j.lln
        ),
        Format::Text => {
            let zone = j.zone.map_or("-".to_string(), |z| z.to_string());
            let fluct = match j.branch {
                Some(b) => format!("{} ({b})", j.fluctuation),
                None => j.fluctuation.to_string(),
            };
            writeln!(
                out,
                "fluctuation: {fluct}\nlln:         {}\nzone:        {zone}",
                j.lln
            )
        }
    }
    .map_err(stdout_err)?;
    Ok(if r.is_interior() { 0 } else { 2 })
}

#[derive(Serialize)]
struct MomentsJson {
    schema: u32,
    n: u64,
    eps: f64,
    truncation: f64,
    light_mean: f64,
    heavy_mean: f64,
    mean_z: f64,
    var_z: f64,
    mean_z_asymptotic: Option<f64>,
    var_z_asymptotic: Option<f64>,
}

fn cmd_moments(a: MomentsArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.model.params()?;
    let inst = derive_instance(&p, a.n)?;
    let finite = |v: mixlim_core::model::Asymptotic| if v.overflow { None } else { Some(v.value) };
    let j = MomentsJson {
        schema: 1,
        n: a.n,
        eps: inst.eps(),
        truncation: inst.truncation(),
        light_mean: mu1(1.0, p.lambda())?,
        heavy_mean: mu2(1.0, p.alpha(), inst.truncation())?,
        mean_z: mean_z(&p, &inst),
        var_z: var_z(&p, &inst),
        mean_z_asymptotic: finite(mean_z_asymptotic(&p, a.n)),
        var_z_asymptotic: finite(var_z_asymptotic(&p, a.n)),
    };
    let opt = |v: Option<f64>| v.map_or("overflow".to_string(), num);
    match a.format {
        Format::Json => output::write_json(out, &j),
        Format::Csv => writeln!(
            out,
            "n,eps,truncation,light_mean,heavy_mean,mean_z,var_z,mean_z_asymptotic,var_z_asymptotic\n{},{},{},{},{},{},{},{},{}",
            j.n,
            num(j.eps),
            num(j.truncation),
            num(j.light_mean),
            num(j.heavy_mean),
            num(j.mean_z),
            num(j.var_z),
            opt(j.mean_z_asymptotic),
            opt(j.var_z_asymptotic)
        ),
        Format::Text => writeln!(
            out,
            "eps_n        {:.6e}\nM_n          {:.6e}\nE X          {:.6e}\nE Y          {:.6e}\nE Z          {:.6e}  (leading order {})\nVar Z        {:.6e}  (leading order {})",
            j.eps,
            j.truncation,
            j.light_mean,
            j.heavy_mean,
            j.mean_z,
            opt(j.mean_z_asymptotic),
            j.var_z,
            opt(j.var_z_asymptotic)
        ),
    }
    .map_err(stdout_err)?;
    Ok(0)
}

#[derive(Serialize)]
struct DiagnoseJson {
    schema: u32,
    n: u64,
    beta: f64,
    delta: f64,
    tau: f64,
    tail_sum: Vec<(f64, f64)>,
    lyapounov: f64,
    centering_a_n: f64,
    truncated_variance: f64,
}

fn cmd_diagnose(a: DiagnoseArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.model.params()?;
    let inst = derive_instance(&p, a.n)?;
    let beta = match a.beta {
        Some(b) => b,
        None => {
            let report = classify(p.alpha(), p.gamma1(), p.gamma2());
            normalization_plan(&p, &inst, &report)
                .map_or_else(|_| stable_scale(&p, a.n), |plan| plan.scale)
        }
    };
    let cfg = DiagnosticsConfig {
        x_grid: a.x.clone(),
        delta: a.delta,
        tau: a.tau,
    };
    let r = diagnostics_report(&p, &inst, beta, &cfg)?;
    let j = DiagnoseJson {
        schema: 1,
        n: a.n,
        beta,
        delta: a.delta,
        tau: a.tau,
        tail_sum: r.tail_sum_values,
        lyapounov: r.lyapounov,
        centering_a_n: r.centering_a_n,
        truncated_variance: r.truncated_var,
    };
    match a.format {
        Format::Json => output::write_json(out, &j),
        Format::Csv => {
            let mut s = String::from("x,tail_sum\n");
            for (x, v) in &j.tail_sum {
                s.push_str(&format!("{},{}\n", num(*x), num(*v)));
            }
            write!(out, "{s}")
        }
        Format::Text => {
            let mut s = format!(
                "beta_n              {:.6e}\nlyapounov (d={})   {:.6e}\na_n                 {:.6e}\ntruncated var (t={}) {:.6e}\n",
                j.beta, j.delta, j.lyapounov, j.centering_a_n, j.tau, j.truncated_variance
            );
            for (x, v) in &j.tail_sum {
                s.push_str(&format!("tail sum at x={x:<6} {v:.6e}\n"));
            }
            write!(out, "{s}")
        }
    }
    .map_err(stdout_err)?;
    Ok(0)
}

#[derive(Serialize)]
struct PlanJson {
    center: f64,
    scale: f64,
    limit: &'static str,
    stable_alpha: Option<f64>,
    stable_tail_const: Option<f64>,
    stable_shift: Option<f64>,
    compensated: Option<bool>,
}

impl From<&NormalizationPlan> for PlanJson {
    fn from(p: &NormalizationPlan) -> Self {
        match p.limit {
            LimitLaw::StdNormal => PlanJson {
                center: p.center,
                scale: p.scale,
                limit: "std_normal",
                stable_alpha: None,
                stable_tail_const: None,
                stable_shift: None,
                compensated: None,
            },
            LimitLaw::Stable(r) => PlanJson {
                center: p.center,
                scale: p.scale,
                limit: "stable",
                stable_alpha: Some(r.spec.alpha()),
                stable_tail_const: Some(r.spec.tail_const()),
                stable_shift: Some(r.spec.shift()),
                compensated: Some(r.compensated),
            },
        }
    }
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    #[serde(flatten)]
    model: &'a ModelArgs,
    n: Option<u64>,
    n_ladder: Option<&'a [u64]>,
    replicates: usize,
    seed: u64,
    threads: usize,
    level: Option<f64>,
    out: Option<&'a Path>,
    format: Format,
}

#[derive(Serialize)]
struct SimulateMeta<'a> {
    schema: u32,
    version: &'static str,
    config: RunConfig<'a>,
    regime: ClassifyJson,
    plan: PlanJson,
    heavy_count_mean: f64,
}

/// `<out>.meta.json`
fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn validate_run(run: &RunArgs) -> Result<usize> {
    if run.replicates == 0 {
        return Err(Error::Usage("--reps must be at least 1".into()));
    }
    let threads = run.threads();
    if threads == 0 {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    Ok(threads)
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.model.params()?;
    let threads = validate_run(&a.run)?;
    if a.format == Format::Text {
        return Err(Error::Usage("simulate writes csv or json".into()));
    }
    let inst = derive_instance(&p, a.n)?;
    let report = classify(p.alpha(), p.gamma1(), p.gamma2());
    let plan = normalization_plan(&p, &inst, &report)?;
    let sample = driver::monte_carlo(&p, &inst, a.run.replicates, a.run.seed, &plan, threads)?;

    output::write_file(&a.out, |w| match a.format {
        Format::Json => output::write_values_json(w, a.n, &sample.values),
        _ => output::write_values_csv(w, &sample.values),
    })?;
    let meta = SimulateMeta {
        schema: 1,
        version: VERSION,
        config: RunConfig {
            command: "simulate",
            model: &a.model,
            n: Some(a.n),
            n_ladder: None,
            replicates: a.run.replicates,
            seed: a.run.seed,
            threads,
            level: None,
            out: Some(&a.out),
            format: a.format,
        },
        regime: regime_json(p.alpha(), p.gamma1(), p.gamma2(), &report),
        plan: PlanJson::from(&plan),
        heavy_count_mean: sample.heavy_count_mean,
    };
    output::write_file(&meta_path(&a.out), |w| output::write_json(w, &meta))?;
    writeln!(
        out,
        "wrote {} values to {}",
        sample.values.len(),
        a.out.display()
    )
    .map_err(stdout_err)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    report: &'a verify::VerifyReport,
    version: &'static str,
    config: RunConfig<'a>,
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let p = a.model.params()?;
    let threads = validate_run(&a.run)?;
    if a.format == Format::Csv {
        return Err(Error::Usage("verify writes json or text".into()));
    }
    if a.ladder.is_empty() {
        return Err(Error::Usage("--n needs at least one value".into()));
    }
    let cfg = VerifyConfig {
        replicates: a.run.replicates,
        seed: a.run.seed,
        level: a.level,
        threads,
        test: a.test.into(),
        reference_size: a.reference_size,
        ecf_threshold: a.ecf_threshold,
        lln_delta: a.lln_delta,
        lln_coverage: a.lln_coverage,
    };
    let report = verify::run(&p, &a.ladder, &cfg)?;
    let full = VerifyOutput {
        report: &report,
        version: VERSION,
        config: RunConfig {
            command: "verify",
            model: &a.model,
            n: None,
            n_ladder: Some(&a.ladder),
            replicates: a.run.replicates,
            seed: a.run.seed,
            threads,
            level: Some(a.level),
            out: a.out.as_deref(),
            format: a.format,
        },
    };
    let render = |w: &mut dyn Write| -> std::io::Result<()> {
        match a.format {
            Format::Text => write_verify_text(w, &report),
            _ => output::write_json(w, &full),
        }
    };
    match &a.out {
        Some(path) => output::write_file(path, |w| render(w))?,
        None => render(out).map_err(stdout_err)?,
    }
    if report.pass {
        Ok(0)
    } else {
        Err(Error::Verification(format!(
            "top rung did not pass at alpha={} gamma1={} gamma2={}",
            report.alpha, report.gamma1, report.gamma2
        )))
    }
}

fn write_verify_text(w: &mut dyn Write, r: &verify::VerifyReport) -> std::io::Result<()> {
    writeln!(w, "regime: {} / {}", r.fluctuation, r.lln)?;
    for rung in &r.rungs {
        write!(
            w,
            "n={:<10} {:<22} D={:.4} crit={:.4}",
            rung.n, rung.test, rung.statistic, rung.critical_value
        )?;
        if let Some(e) = rung.ecf_distance {
            write!(w, " ecf={e:.4}")?;
        }
        writeln!(w, " {}", if rung.pass { "pass" } else { "FAIL" })?;
    }
    if let Some(l) = &r.lln_check {
        for rung in &l.rungs {
            writeln!(
                w,
                "n={:<10} {} median={:.4} within(+-{})={:.3}",
                rung.n, l.mode, rung.median, l.delta, rung.within
            )?;
        }
    }
    writeln!(w, "verdict: {}", if r.pass { "pass" } else { "FAIL" })
}

fn cmd_phase_grid(a: PhaseGridArgs, out: &mut dyn Write) -> Result<i32> {
    if !(a.alpha > 0.0 && a.alpha < 2.0) {
        return Err(mixlim_core::Error::Domain {
            param: "alpha",
            value: a.alpha,
            reason: "heavy-tail index must lie in (0, 2)",
        }
        .into());
    }
    if !(a.gamma1.start > 0.0 && a.gamma2.start > 0.0) {
        return Err(Error::Usage("gamma ranges must start above 0".into()));
    }
    let cells = grid::phase_grid(a.alpha, &a.gamma1, &a.gamma2);
    match &a.out {
        Some(path) => output::write_file(path, |w| grid::write_csv(w, &cells))?,
        None => grid::write_csv(out, &cells).map_err(stdout_err)?,
    }
    Ok(0)
}
