//! Command-line front end: `solve` one manufactured problem or run a `study`.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 if any solve failed to converge.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pxlap_dg::solver::{solve, Algorithm, SolverConfig, StoppingRule};
use pxlap_dg::study::{l2_error, manufactured_problem, run_study, write_study_csv};
use pxlap_dg::{Error, Result};

#[derive(Parser)]
#[command(name = "pxlap-dg", version, about = "P0 DG solver for the p(x)-Laplacian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the manufactured problem for one b on one mesh.
    Solve(SolveArgs),
    /// Run every (b, nx) combination and write the study CSV.
    Study(StudyArgs),
}

#[derive(Args, Default)]
struct SolverFlags {
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Algorithm 1 (coupled) or 2 (uncoupled).
    #[arg(long)]
    alg: Option<u8>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// `increment` (default) or `full`.
    #[arg(long)]
    stop: Option<String>,
    /// Run even if rho violates the step-size condition.
    #[arg(long)]
    force: bool,
    /// key=value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// Iteration history CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Mesh dump CSV.
    #[arg(long = "mesh-out")]
    mesh_out: Option<PathBuf>,
    /// Per-element solution CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct StudyArgs {
    /// Comma-separated list of b values.
    #[arg(long)]
    b: Option<String>,
    /// Comma-separated list of element counts per side.
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverFlags,
}

/// Flag values layered over an optional key=value file.
struct Settings {
    file: HashMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut file = HashMap::new();
        if let Some(path) = path {
            for (n, line) in fs::read_to_string(path)?.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Error::Input(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
                file.insert(k.trim().replace('_', "-"), v.trim().to_string());
            }
        }
        Ok(Self { file })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Input(format!("config value for `{key}` is invalid: {v}"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.get(flag, key)?
            .ok_or_else(|| Error::Input(format!("missing required --{key}")))
    }

    fn solver(&self, flags: &SolverFlags) -> Result<(f64, SolverConfig)> {
        let r: f64 = self.require(flags.r, "r")?;
        let mut cfg = SolverConfig { rho: self.get(flags.rho, "rho")?, ..Default::default() };
        cfg.algorithm = match self.get(flags.alg, "alg")? {
            None | Some(2) => Algorithm::Alg2,
            Some(1) => Algorithm::Alg1,
            Some(other) => return Err(Error::Input(format!("--alg must be 1 or 2, got {other}"))),
        };
        if let Some(tol) = self.get(flags.tol, "tol")? {
            cfg.tol_outer = tol;
        }
        if let Some(n) = self.get(flags.max_iter, "max-iter")? {
            cfg.max_outer = n;
        }
        cfg.stopping = match self.get(flags.stop.clone(), "stop")?.as_deref() {
            None | Some("increment") => StoppingRule::Increment,
            Some("full") => StoppingRule::Full,
            Some(other) => return Err(Error::Input(format!("--stop must be increment or full, got {other}"))),
        };
        cfg.force = flags.force || self.get::<bool>(None, "force")?.unwrap_or(false);
        Ok((r, cfg))
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Input(format!("bad {what} entry `{t}`"))))
        .collect()
}

fn run_solve(args: SolveArgs) -> Result<bool> {
    let settings = Settings::load(args.solver.config.as_ref())?;
    let (r, cfg) = settings.solver(&args.solver)?;
    let b: f64 = settings.require(args.b, "b")?;
    let nx: usize = settings.require(args.nx, "nx")?;
    let ny: usize = settings.get(args.ny, "ny")?.unwrap_or(nx);
    let out: Option<PathBuf> = settings.get(args.out, "out")?;

    let prob = manufactured_problem(b)?;
    let data = prob.problem_data(nx, ny, r)?;
    if let Some(path) = &args.mesh_out {
        data.mesh.write_csv(BufWriter::new(File::create(path)?))?;
    }
    let state = solve(&data, &cfg, None)?;
    let err = l2_error(&state.u, |x| prob.exact(x), &data.mesh)?;
    if let Some(path) = &args.trace {
        state.write_trace(BufWriter::new(File::create(path)?))?;
    }
    if let Some(path) = &out {
        use std::io::Write;
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "element,x,y,u_h,u_exact")?;
        for el in data.mesh.elements() {
            let [x, y] = el.barycenter;
            writeln!(w, "{},{:.12e},{:.12e},{:.12e},{:.12e}", el.index, x, y, state.u[el.index], prob.exact(el.barycenter))?;
        }
    }
    println!(
        "b={b} nx={nx} ny={ny} m={} l2_error={err:.10e} iterations={} Jh={:.10e} converged={}",
        data.mesh.n_elements(),
        state.iteration,
        state.energy().unwrap_or(f64::NAN),
        state.converged
    );
    Ok(state.converged)
}

fn run_study_cmd(args: StudyArgs) -> Result<bool> {
    let settings = Settings::load(args.solver.config.as_ref())?;
    let (r, cfg) = settings.solver(&args.solver)?;
    let b_list: Vec<f64> = parse_list(&settings.require(args.b, "b")?, "b")?;
    let nx_list: Vec<usize> = parse_list(&settings.require(args.nx, "nx")?, "nx")?;
    let out: PathBuf = settings.require(args.out, "out")?;
    let rows = run_study(&b_list, &nx_list, r, &cfg)?;
    write_study_csv(&rows, BufWriter::new(File::create(&out)?))?;
    for row in &rows {
        println!("{}", row.csv_line());
    }
    Ok(rows.iter().all(|r| r.converged))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            // usage errors share exit code 1 with other input errors; 2 means "not converged"
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Study(args) => run_study_cmd(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
