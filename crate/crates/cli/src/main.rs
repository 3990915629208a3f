use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use weakshock::ccw::{integrate_ccw, write_ccw_csv, CcwVariant};
use weakshock::compare::compare_methods;
use weakshock::decay::{log_grid, loglog_slope};
use weakshock::gas::mach_from_p_jump;
use weakshock::reference::{reproduce_table1, TABLE1_SETS, TABLE1_TOLERANCE};
use weakshock::transport::{asymptotic_law, closed_form, integrate_truncated, Regime, Scenario};
use weakshock::wavefront::{fit_shock, formation_distance, BoundaryPulse};
use weakshock::{Error, GasParams, Geometry};

mod config;

use config::{FileConfig, PulseKind};

#[derive(Parser, Debug)]
#[command(name = "weakshock", version, about = "Decay of weak planar, cylindrical and spherical shocks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Ratio of specific heats
    #[arg(long)]
    gamma: Option<f64>,
    /// planar, cylindrical or spherical
    #[arg(long)]
    geometry: Option<Geometry>,
    /// Shock strength [p] at x = 1
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Gradient jump [p_x] at x = 1
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long)]
    x_end: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    /// Output file; standard output if omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML configuration file
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the weak-shock transport equations and write the history CSV
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        /// case1 or case2: which asymptote is attached
        #[arg(long)]
        regime: Option<Regime>,
    },
    /// Tabulate the closed-form solution beside the large-distance laws
    Asymptote {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        regime: Option<Regime>,
    },
    /// Reproduce the planar benchmark error table
    Table1 {
        #[command(flatten)]
        common: Common,
    },
    /// Run every method on matched weak data and write a JSON report
    CompareMethods {
        #[command(flatten)]
        common: Common,
    },
    /// Fit the shock to a boundary pulse with weakly nonlinear geometrical optics
    FitShock {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        pulse: Option<PulseKind>,
        /// Half-sine amplitude
        #[arg(long)]
        v0: Option<f64>,
        /// Pulse duration
        #[arg(long)]
        tau0: Option<f64>,
        /// Ramp slope at tau = 0
        #[arg(long)]
        slope: Option<f64>,
        /// tau,v CSV for a tabulated pulse
        #[arg(long)]
        pulse_file: Option<PathBuf>,
        /// First fitting position (default: just past shock formation)
        #[arg(long)]
        x_start: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Integrate the CCW shock ODE
    Ccw {
        #[command(flatten)]
        common: Common,
        /// Initial Mach number (default: from --h)
        #[arg(long)]
        mach0: Option<f64>,
        /// classic or generalized
        #[arg(long)]
        variant: Option<CcwVariant>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

enum Failure {
    Config(String),
    Numerical(String),
    Partial(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Partial(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Partial(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Invalid(_) | Error::Csv(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Flags merged over the file over the defaults.
struct Resolved {
    file: FileConfig,
    gas: GasParams,
    geom: Geometry,
    h: Option<f64>,
    k: Option<f64>,
    x_end: Option<f64>,
    rtol: f64,
    atol: f64,
    out: Option<PathBuf>,
}

impl Resolved {
    fn new(c: &Common) -> Result<Self, Failure> {
        let file = match &c.config {
            Some(p) => FileConfig::load(p).map_err(Failure::Config)?,
            None => FileConfig::default(),
        };
        let gamma = c.gamma.or(file.gamma).unwrap_or(1.4);
        let gas = GasParams::new(gamma)?;
        Ok(Self {
            gas,
            geom: c.geometry.or(file.geometry).unwrap_or(Geometry::Planar),
            h: c.h.or(file.h),
            k: c.k.or(file.k),
            x_end: c.x_end.or(file.x_end),
            rtol: c.rtol.or(file.rtol).unwrap_or(1e-10),
            atol: file.atol.unwrap_or(1e-14),
            out: c.out.clone().or(file.out.clone()),
            file,
        })
    }

    fn require(v: Option<f64>, name: &str) -> Result<f64, Failure> {
        v.ok_or_else(|| Failure::Config(format!("missing `{name}` (flag --{name} or config key `{name}`)")))
    }

    fn scenario(&self, samples: Option<usize>, regime: Option<Regime>) -> Result<Scenario, Failure> {
        let h = Self::require(self.h, "h")?;
        let k = Self::require(self.k, "k")?;
        let mut s = Scenario::new(self.geom, h, k, self.x_end.unwrap_or(100.0));
        s.gas = self.gas;
        s.rtol = self.rtol;
        s.atol = self.atol;
        s.samples = samples.unwrap_or(200);
        s.regime = regime.unwrap_or_default();
        s.validate()?;
        Ok(s)
    }

    fn sink(&self) -> Result<Box<dyn Write>, Failure> {
        sink(self.out.as_deref())
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Config(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_fail(e: io::Error) -> Failure {
    Failure::Numerical(format!("write failed: {e}"))
}

fn evolve(common: &Common, samples: Option<usize>, regime: Option<Regime>) -> Outcome {
    let r = Resolved::new(common)?;
    let scen = r.scenario(samples.or(r.file.evolve.samples), regime.or(r.file.evolve.regime))?;
    let hist = integrate_truncated(&scen)?;
    let mut w = r.sink()?;
    hist.write_csv(&mut w).map_err(io_fail)?;
    w.flush().map_err(io_fail)?;

    let last = hist.last().expect("history has samples");
    let tail: Vec<_> = hist.samples.iter().filter(|s| s.x >= last.x / 10.0).collect();
    let xs: Vec<f64> = tail.iter().map(|s| s.x).collect();
    let ps: Vec<f64> = tail.iter().map(|s| s.p_jump).collect();
    eprintln!(
        "x = {:.6e}  [p] = {:.6e}  [p_x] = {:.6e}  d log[p]/d log x (last decade) = {:.4}",
        last.x,
        last.p_jump,
        last.px_jump,
        loglog_slope(&xs, &ps)
    );
    if let Some(xb) = hist.breakdown {
        eprintln!("[p_x] blows up at x* = {xb:.10e}");
    }
    Ok(())
}

fn asymptote(common: &Common, samples: Option<usize>, regime: Option<Regime>) -> Outcome {
    let r = Resolved::new(common)?;
    let scen = r.scenario(samples.or(r.file.asymptote.samples), regime.or(r.file.asymptote.regime))?;
    let mut w = r.sink()?;
    writeln!(w, "x,p_closed,px_closed,p_asym,px_asym").map_err(io_fail)?;
    let grid = log_grid(1.0, scen.x_end, scen.samples + 1);
    for &x in &grid[1..] {
        let (p, px) = closed_form(x, scen.h, scen.k, scen.gas, scen.geom)?;
        let (pa, pxa) = asymptotic_law(x, scen.h, scen.k, scen.gas, scen.geom, scen.regime)?;
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", x, p, px, pa, pxa).map_err(io_fail)?;
    }
    w.flush().map_err(io_fail)
}

fn table1(common: &Common) -> Outcome {
    let r = Resolved::new(common)?;
    let rows = reproduce_table1(r.gas, r.rtol)?;
    if let Some(path) = &r.out {
        let mut w = sink(Some(path))?;
        writeln!(w, "set,x,p_err,p_err_ref,p_dev,px_err,px_err_ref,px_dev").map_err(io_fail)?;
        for row in &rows {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                row.set,
                row.x,
                row.p_err,
                row.p_err_ref,
                row.p_dev(),
                row.px_err,
                row.px_err_ref,
                row.px_dev()
            )
            .map_err(io_fail)?;
        }
        w.flush().map_err(io_fail)?;
    }
    let mut out = io::stdout().lock();
    let mut inside = 0;
    for set in [1, 2] {
        let reference = &TABLE1_SETS[set - 1];
        let (h, k) = (reference.h, reference.k);
        writeln!(out, "set {set}: h = {h}, k = {k}").map_err(io_fail)?;
        writeln!(
            out,
            "{:>8}  {:>11} {:>11} {:>8}  {:>11} {:>11} {:>8}",
            "x", "err [p]", "reference", "dev", "err [p_x]", "reference", "dev"
        )
        .map_err(io_fail)?;
        for row in rows.iter().filter(|row| row.set == set) {
            inside += row.within_tolerance() as usize;
            writeln!(
                out,
                "{:>8}  {:>11.4e} {:>11.4e} {:>+7.1}%  {:>11.4e} {:>11.4e} {:>+7.1}%",
                row.x,
                row.p_err,
                row.p_err_ref,
                100.0 * row.p_dev(),
                row.px_err,
                row.px_err_ref,
                100.0 * row.px_dev()
            )
            .map_err(io_fail)?;
        }
        writeln!(out).map_err(io_fail)?;
    }
    writeln!(
        out,
        "{inside}/{} rows within {:.0}% in both columns",
        rows.len(),
        100.0 * TABLE1_TOLERANCE
    )
    .map_err(io_fail)
}

fn compare(common: &Common) -> Outcome {
    let r = Resolved::new(common)?;
    let mut cfg = r.file.compare.clone().unwrap_or_default();
    if common.gamma.is_some() || r.file.gamma.is_some() {
        cfg.gamma = r.gas.gamma();
    }
    if let Some(h) = common.h {
        cfg.h = h;
    }
    if let Some(k) = common.k {
        cfg.k = k;
    }
    if let Some(x) = common.x_end {
        cfg.x_hi = x;
    }
    if let Some(g) = common.geometry {
        cfg.geometries = vec![g];
    }
    let report = compare_methods(&cfg)?;
    let mut w = r.sink()?;
    serde_json::to_writer_pretty(&mut w, &report)
        .map_err(|e| Failure::Numerical(format!("report serialization failed: {e}")))?;
    writeln!(w).map_err(io_fail)?;
    w.flush().map_err(io_fail)?;
    if !report.all_agree {
        warn!("not every cross-method check agrees; see the report");
    }
    if report.is_partial() {
        return Err(Failure::Partial(format!(
            "partial comparison: {}",
            report.failures.join("; ")
        )));
    }
    Ok(())
}

struct FitArgs {
    pulse: Option<PulseKind>,
    v0: Option<f64>,
    tau0: Option<f64>,
    slope: Option<f64>,
    pulse_file: Option<PathBuf>,
    x_start: Option<f64>,
    samples: Option<usize>,
}

fn build_pulse(r: &Resolved, a: &FitArgs) -> Result<BoundaryPulse, Failure> {
    let f = &r.file.fit_shock;
    let file = a.pulse_file.clone().or(f.file.clone());
    let kind = a.pulse.or(f.pulse).unwrap_or(if file.is_some() {
        PulseKind::Table
    } else {
        PulseKind::HalfSine
    });
    let tau0 = a.tau0.or(f.tau0).unwrap_or(1.0);
    Ok(match kind {
        PulseKind::HalfSine => BoundaryPulse::half_sine(a.v0.or(f.v0).unwrap_or(0.1), tau0)?,
        PulseKind::Ramp => BoundaryPulse::ramp(a.slope.or(f.slope).unwrap_or(0.4), tau0)?,
        PulseKind::Table => {
            let path = file.ok_or_else(|| Failure::Config("table pulse needs --pulse-file".into()))?;
            let rdr = File::open(&path)
                .map_err(|e| Failure::Config(format!("cannot open {}: {e}", path.display())))?;
            BoundaryPulse::from_csv(rdr)?
        }
    })
}

fn fit(common: &Common, a: FitArgs) -> Outcome {
    let r = Resolved::new(common)?;
    let pulse = build_pulse(&r, &a)?;
    let xf = formation_distance(&pulse, r.gas, r.geom)?;
    info!("shock forms at x = {xf}");
    let f = &r.file.fit_shock;
    let x_start = a.x_start.or(f.x_start).unwrap_or(1.01 * xf);
    let x_end = r.x_end.unwrap_or(1e4);
    let samples = a.samples.or(f.samples).unwrap_or(200);
    if !(x_start > 1.0 && x_end > x_start) || samples < 2 {
        return Err(Failure::Config(format!(
            "need 1 < x_start < x_end and samples >= 2, got x_start = {x_start}, x_end = {x_end}, samples = {samples}"
        )));
    }
    let fitted = fit_shock(&pulse, r.gas, r.geom, &log_grid(x_start, x_end, samples))?;
    let mut w = r.sink()?;
    fitted
        .write_csv_with_reference(&mut w, r.gas, r.geom)
        .map_err(io_fail)?;
    w.flush().map_err(io_fail)
}

fn ccw(common: &Common, mach0: Option<f64>, variant: Option<CcwVariant>, samples: Option<usize>) -> Outcome {
    let r = Resolved::new(common)?;
    let c = &r.file.ccw;
    let mach0 = match mach0.or(c.mach0) {
        Some(m) => m,
        None => mach_from_p_jump(Resolved::require(r.h, "h")?, r.gas)?,
    };
    let run = integrate_ccw(
        mach0,
        r.gas,
        r.geom,
        r.x_end.unwrap_or(100.0),
        variant.or(c.variant).unwrap_or_default(),
        samples.or(c.samples).unwrap_or(200),
    )?;
    let mut w = r.sink()?;
    write_ccw_csv(&run, &mut w).map_err(io_fail)?;
    w.flush().map_err(io_fail)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Evolve { common, samples, regime } => evolve(&common, samples, regime),
        Command::Asymptote { common, samples, regime } => asymptote(&common, samples, regime),
        Command::Table1 { common } => table1(&common),
        Command::CompareMethods { common } => compare(&common),
        Command::FitShock {
            common,
            pulse,
            v0,
            tau0,
            slope,
            pulse_file,
            x_start,
            samples,
        } => fit(
            &common,
            FitArgs {
                pulse,
                v0,
                tau0,
                slope,
                pulse_file,
                x_start,
                samples,
            },
        ),
        Command::Ccw {
            common,
            mach0,
            variant,
            samples,
        } => ccw(&common, mach0, variant, samples),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
