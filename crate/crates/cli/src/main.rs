//! `spintomo` command-line front end.
//!
//! Output goes to `--out PATH`, else to `$SPINTOMO_OUT_DIR/<name>`, else to
//! stdout. JSON is the canonical full-precision format; CSV is for plotting.
//!
//! File schemas:
//!
//! * tomogram / symbol table, CSV: `# kind: tomogram` then
//!   `twice_m,theta,phi,weight,re,im`, rows over `m` descending, polar nodes,
//!   azimuthal nodes. JSON: `{twice_j, polar, azimuthal, kind, rows: [..]}`
//!   with the same row fields.
//! * density matrix, JSON: `{dim, twice_j, basis: "descending_m", re, im}`,
//!   `re` and `im` flat row-major.
//! * figure grid, CSV: `#` lines with the fixed points, then
//!   `theta1,phi1,re,im`. JSON: the same data with `fixed` and `rows`.
//! * verify report, JSON: `{suite, config, passed, checks: [{suite, name,
//!   twice_j, measured, bound, tolerance, passed}], residuals}`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input or
//! configuration.

mod point;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spintomo::equivalence::{delta_j1, CgKernel};
use spintomo::figures::{figure_grid, FigureId, FigureSpec, DEFAULT_AZIMUTHAL_POINTS, DEFAULT_POLAR_POINTS};
use spintomo::io;
use spintomo::kernels::{ExplicitKernel, FourierKernel, KernelEvaluator, KernelPoint, RecurrenceKernel, TraceKernel};
use spintomo::random::{random_density_matrix, random_kernel_point, seeded};
use spintomo::tomography::{reconstruct, tomogram};
use spintomo::verify::{self, Suite, VerifyConfig};
use spintomo::{Complex64, DensityMatrix, PhasePoint, Projection, SphereQuadrature, Spin};

const OUT_DIR_ENV: &str = "SPINTOMO_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "spintomo", version, about = "Spin-tomographic kernels, tomograms and checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Twice the spin, 2j.
    #[arg(long = "twice-j", global = true)]
    twice_j: Option<u32>,
    /// Polar (Gauss-Legendre) quadrature order; default 2j+2.
    #[arg(long = "quad-L", global = true)]
    quad_l: Option<usize>,
    /// Azimuthal (trapezoid) quadrature order; default 4j+2.
    #[arg(long = "quad-M", global = true)]
    quad_m: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Random draws per verification check.
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Replaces every upper tolerance of the verification checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also run the 64³ Fourier brute-force kernel.
    #[arg(long, global = true)]
    slow: bool,
    /// Read (theta, phi) axis angles in degrees.
    #[arg(long, global = true)]
    degrees: bool,
    /// Default output directory when `--out` is absent.
    #[arg(long = "out-dir", env = OUT_DIR_ENV, global = true, hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Trace,
    Explicit,
    Cg,
    Recurrence,
    Fourier,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the star-product kernel at one point by several methods.
    Kernel {
        /// Doubled projections `m3,m2,m1`; random when absent.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        /// Axis of x3 as `theta,phi` or `x,y,z`; random when absent.
        #[arg(long, allow_hyphen_values = true)]
        n3: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n1: Option<String>,
        /// Methods to compare; `fourier` is added by `--slow`.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Method::Trace, Method::Explicit, Method::Cg, Method::Recurrence])]
        methods: Vec<Method>,
    },
    /// Export a kernel non-locality grid.
    Figure {
        /// fig1a, fig1b, fig1c_e or fig1d_f.
        id: String,
        #[arg(long = "n-theta", default_value_t = DEFAULT_POLAR_POINTS)]
        n_theta: usize,
        #[arg(long = "n-phi", default_value_t = DEFAULT_AZIMUTHAL_POINTS)]
        n_phi: usize,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        /// all, tomography, kernels, equivalence or recurrence.
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Tomogram of a state on the quadrature grid.
    Tomogram {
        /// `pure:<2m>`, `mixed`, `random` or a density-matrix JSON file.
        #[arg(long)]
        state: String,
    },
    /// Density matrix from a tomogram file.
    Reconstruct {
        /// Tomogram in JSON or CSV.
        input: PathBuf,
    },
}

/// Writes to `--out`, else into the output directory, else to stdout.
fn emit(g: &Global, default_name: &str, bytes: &[u8]) -> Result<()> {
    let path = match (&g.out, &g.out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            Some(dir.join(default_name))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => {
            std::fs::write(&p, bytes).with_context(|| format!("writing {}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            let written = out.write_all(bytes).and_then(|_| {
                if bytes.ends_with(b"\n") {
                    Ok(())
                } else {
                    out.write_all(b"\n")
                }
            });
            // A closed reader (`| head`) is not an error.
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn spin_arg(g: &Global) -> Result<Spin> {
    match g.twice_j {
        Some(tj) => Ok(Spin::from_twice(tj)),
        None => bail!("--twice-j is required"),
    }
}

fn quadrature(g: &Global, spin: Spin) -> Result<SphereQuadrature> {
    let def = SphereQuadrature::for_spin(spin);
    let l = g.quad_l.unwrap_or(def.polar());
    let m = g.quad_m.unwrap_or(def.azimuthal());
    let q = SphereQuadrature::new(l, m)?;
    q.check_resolves(spin)?;
    Ok(q)
}

fn kernel_point(g: &Global, spin: Spin, m: Option<&str>, axes: [Option<&str>; 3]) -> Result<KernelPoint> {
    let mut rng = seeded(g.seed);
    let random = random_kernel_point(spin, &mut rng);
    let twice_m = match m {
        Some(text) => point::parse_twice_m(text)?,
        None => random.twice_m(),
    };
    let defaults = [random.x3.axis, random.x2.axis, random.x1.axis];
    let mut pts = Vec::with_capacity(3);
    for ((tm, text), def) in twice_m.iter().zip(axes).zip(defaults) {
        let m: Projection = spin.projection(*tm)?;
        let axis = match text {
            Some(t) => point::parse_axis(t, g.degrees)?,
            None => def,
        };
        pts.push(PhasePoint::new(m, axis));
    }
    Ok(KernelPoint::new(pts[0], pts[1], pts[2]))
}

fn evaluator(method: Method, spin: Spin) -> Box<dyn KernelEvaluator> {
    match method {
        Method::Trace => Box::new(TraceKernel::new(spin)),
        Method::Explicit => Box::new(ExplicitKernel::new(spin)),
        Method::Cg => Box::new(CgKernel::new(spin)),
        Method::Recurrence => Box::new(RecurrenceKernel::new(spin)),
        Method::Fourier => Box::new(FourierKernel::new(spin)),
    }
}

fn cmd_kernel(g: &Global, m: Option<&str>, axes: [Option<&str>; 3], methods: &[Method]) -> Result<bool> {
    let spin = spin_arg(g)?;
    let p = kernel_point(g, spin, m, axes)?;
    let mut methods = methods.to_vec();
    if g.slow && !methods.contains(&Method::Fourier) {
        methods.push(Method::Fourier);
    }
    let values: Vec<(&'static str, Complex64)> = methods
        .iter()
        .map(|&me| {
            let k = evaluator(me, spin);
            (k.name(), k.evaluate(&p))
        })
        .collect();
    let bytes = match g.format {
        Format::Json => {
            let point = |x: &PhasePoint| json!({ "twice_m": x.m.twice(), "axis": x.axis.cartesian() });
            let mut gaps = Vec::new();
            for (i, (a, va)) in values.iter().enumerate() {
                for (b, vb) in &values[i + 1..] {
                    let d = va - vb;
                    gaps.push(json!({ "a": a, "b": b, "re": d.re, "im": d.im, "abs": d.norm() }));
                }
            }
            let mut doc = json!({
                "twice_j": spin.twice(),
                "point": { "x3": point(&p.x3), "x2": point(&p.x2), "x1": point(&p.x1) },
                "values": values.iter().map(|(n, v)| json!({ "method": n, "re": v.re, "im": v.im })).collect::<Vec<_>>(),
                "gaps": gaps,
            });
            if spin == Spin::ONE {
                let d = delta_j1(&p);
                doc["delta_j1"] = json!({ "re": d.re, "im": d.im });
            }
            serde_json::to_vec_pretty(&doc)?
        }
        Format::Csv => {
            let mut s = String::from("method,re,im\n");
            for (n, v) in &values {
                s += &format!("{n},{},{}\n", v.re, v.im);
            }
            s.into_bytes()
        }
    };
    emit(g, &format!("kernel.{}", g.format.ext()), &bytes)?;
    Ok(true)
}

fn cmd_figure(g: &Global, id: &str, n_theta: usize, n_phi: usize) -> Result<bool> {
    let id: FigureId = id.parse()?;
    let grid = figure_grid(&FigureSpec::of(id), n_theta, n_phi)?;
    let mut buf = Vec::new();
    match g.format {
        Format::Json => io::write_kernel_grid_json(&grid, &mut buf)?,
        Format::Csv => io::write_kernel_grid_csv(&grid, &mut buf)?,
    }
    emit(g, &format!("{id}.{}", g.format.ext()), &buf)?;
    Ok(true)
}

fn cmd_verify(g: &Global, suite: &str) -> Result<bool> {
    let suite: Suite = suite.parse()?;
    let defaults = VerifyConfig::default();
    let quad_orders = match (g.quad_l, g.quad_m) {
        (None, None) => None,
        (Some(l), Some(m)) => Some((l, m)),
        _ => bail!("--quad-L and --quad-M must be given together for verify"),
    };
    let config = VerifyConfig {
        spins: g.twice_j.map_or(defaults.spins, |tj| vec![tj]),
        seed: g.seed,
        samples: g.samples,
        tol_override: g.tol,
        quad_orders,
        slow: g.slow,
    };
    let report = verify::run(suite, &config)?;
    for c in report.failures() {
        eprintln!(
            "FAIL {} {} 2j={}: measured {:e}, bound {:e}",
            c.suite, c.name, c.twice_j, c.measured, c.tolerance
        );
    }
    let bytes = match g.format {
        Format::Json => serde_json::to_vec_pretty(&report)?,
        Format::Csv => {
            let mut s = String::from("suite,name,twice_j,measured,bound,tolerance,passed\n");
            for c in &report.checks {
                let bound = serde_json::to_value(c.bound)?;
                s += &format!(
                    "{},{},{},{},{},{},{}\n",
                    c.suite,
                    c.name,
                    c.twice_j,
                    c.measured,
                    bound.as_str().unwrap_or_default(),
                    c.tolerance,
                    c.passed
                );
            }
            s.into_bytes()
        }
    };
    emit(g, &format!("verify-{suite}.{}", g.format.ext()), &bytes)?;
    Ok(report.passed)
}

fn read_state(g: &Global, state: &str) -> Result<DensityMatrix> {
    if let Some(tm) = state.strip_prefix("pure:") {
        let tm: i32 = tm
            .parse()
            .with_context(|| format!("malformed projection in `{state}`"))?;
        let spin = spin_arg(g)?;
        return Ok(DensityMatrix::pure(spin, spin.projection(tm)?)?);
    }
    match state {
        "mixed" => Ok(DensityMatrix::maximally_mixed(spin_arg(g)?)),
        "random" => Ok(random_density_matrix(spin_arg(g)?, &mut seeded(g.seed))),
        path => {
            let f = File::open(path).with_context(|| format!("opening state file {path}"))?;
            let rho = io::read_density_matrix_json(BufReader::new(f))
                .with_context(|| format!("invalid density matrix in {path}"))?;
            if let Some(tj) = g.twice_j {
                if tj != rho.spin().twice() {
                    bail!("state file has 2j = {}, but --twice-j is {tj}", rho.spin().twice());
                }
            }
            Ok(rho)
        }
    }
}

fn cmd_tomogram(g: &Global, state: &str) -> Result<bool> {
    let rho = read_state(g, state)?;
    let quad = quadrature(g, rho.spin())?;
    let w = tomogram(&rho, &quad)?;
    let mut buf = Vec::new();
    match g.format {
        Format::Json => io::write_symbol_table_json(&w, &quad, &mut buf)?,
        Format::Csv => io::write_symbol_table_csv(&w, &quad, &mut buf)?,
    }
    emit(g, &format!("tomogram.{}", g.format.ext()), &buf)?;
    Ok(true)
}

fn cmd_reconstruct(g: &Global, input: &PathBuf) -> Result<bool> {
    if g.format != Format::Json {
        bail!("density matrices are written as JSON only");
    }
    let f = File::open(input).with_context(|| format!("opening {}", input.display()))?;
    let (w, quad) =
        io::read_symbol_table(BufReader::new(f)).with_context(|| format!("invalid tomogram in {}", input.display()))?;
    let rho = reconstruct(&w, &quad)?;
    let mut buf = Vec::new();
    io::write_density_matrix_json(&rho, &mut buf)?;
    emit(g, "density_matrix.json", &buf)?;
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    if let Some(t) = g.tol {
        if !(t.is_finite() && t >= 0.0) {
            bail!("--tol must be finite and non-negative, got {t}");
        }
    }
    match &cli.command {
        Command::Kernel { m, n3, n2, n1, methods } => {
            cmd_kernel(g, m.as_deref(), [n3.as_deref(), n2.as_deref(), n1.as_deref()], methods)
        }
        Command::Figure { id, n_theta, n_phi } => cmd_figure(g, id, *n_theta, *n_phi),
        Command::Verify { suite } => cmd_verify(g, suite),
        Command::Tomogram { state } => cmd_tomogram(g, state),
        Command::Reconstruct { input } => cmd_reconstruct(g, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
