mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freewreath_core::freeconv::{classical_add_conv, classical_mul_conv, free_add_conv, free_mul_conv, free_power};
use freewreath_core::graphs::{
    automorphism_group, classical_spectral_measure, connectivity_witness, disjoint_union, free_product, is_connected,
    is_homogeneous, quantum_measure,
};
use freewreath_core::stieltjes::{density_moment_check, sample_density, samples_to_csv, DEFAULT_EPSILON};
use freewreath_core::transforms::{cauchy_series, chi_transform, r_transform, s_transform, theta_series};
use freewreath_core::verify::{run_all, run_verification, Params, VerificationReport, DEFAULT_VERIFY_ORDER, REGISTRY};
use freewreath_core::{ClosedFormG, Error, PowerKind, PrecoloredGraph, Transform, DEFAULT_ORDER};

use input::MeasureArg;

#[derive(Parser)]
#[command(name = "freewreath", version, about = "Exact free convolutions, S/R transforms and quantum spectral measures of graphs")]
struct Cli {
    /// Truncation order (default 16, or 10 for `verify`)
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Input file (graph document for `graph`, measure JSON for `measure`/`series`)
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Numeric tolerance for density checks
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Graph symmetry and spectral measures
    Graph {
        #[arg(value_enum)]
        op: GraphOp,
        /// Built-in name (simplex:n, ngon:m, cube, rectangle, two_rectangles, edgeless:n) or a JSON file
        graph: Option<String>,
        /// Second factor for free-product
        #[arg(long = "with", value_name = "GRAPH")]
        with: Option<String>,
        /// Number of copies for disjoint-union
        #[arg(long, default_value_t = 2)]
        copies: usize,
        /// List group elements in `aut`
        #[arg(long)]
        elements: bool,
    },
    /// Classical and free convolutions of measures
    Measure {
        #[arg(value_enum)]
        op: MeasureOp,
        #[command(flatten)]
        pair: MeasurePair,
        /// n-fold power instead of a binary convolution (boxplus/boxtimes)
        #[arg(long)]
        power: Option<u32>,
    },
    /// Transforms of a measure as truncated series
    Series {
        #[arg(value_enum)]
        op: SeriesOp,
        #[command(flatten)]
        pair: MeasurePair,
    },
    /// Stieltjes inversion of the closed-form Cauchy transforms
    Density {
        #[arg(value_enum)]
        op: DensityOp,
        /// g2, g3, g4plus, cube or two_rectangles
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        /// Moment index for `check` (all of 0..=6 when omitted)
        #[arg(long)]
        k: Option<u32>,
    },
    /// Run a registered identity, or `all`
    Verify {
        name: String,
        /// Extra parameters as key=value (e.g. mu=eta:2, n=2, s=3)
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

#[derive(Args)]
struct MeasurePair {
    /// Measure literal: eta:4, dihedral:5, dirac:3/2, ..., inline JSON atoms, or @FILE
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphOp {
    Aut,
    Measure,
    Connected,
    Homogeneous,
    Witness,
    FreeProduct,
    DisjointUnion,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureOp {
    Conv,
    Mult,
    Boxplus,
    Boxtimes,
    Moments,
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesOp {
    S,
    R,
    Chi,
    Theta,
    Cauchy,
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityOp {
    Sample,
    Check,
}

/// Usage and validation failures; exit code 2.
enum Failure {
    Usage(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn json(v: Value) -> Self {
        Self { text: serde_json::to_string_pretty(&v).expect("json output") + "\n", failed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &out.text).map_err(|e| e.to_string()),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("{}", json!({"error": "io", "message": e}));
                return ExitCode::from(2);
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("{}", json!({"error": error_kind(&e), "message": e.to_string()}));
            ExitCode::from(2)
        }
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{']).next().unwrap_or("Error").to_string()
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Graph { op, graph, with, copies, elements } => graph_cmd(cli, *op, graph.as_deref(), with.as_deref(), *copies, *elements),
        Command::Measure { op, pair, power } => measure_cmd(cli, *op, pair, *power),
        Command::Series { op, pair } => series_cmd(cli, *op, pair),
        Command::Density { op, g, samples, epsilon, k } => density_cmd(cli, *op, g, *samples, *epsilon, *k),
        Command::Verify { name, params } => verify_cmd(cli, name, params),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(Error::InvalidParameter(msg.into()))
}

fn load_graph(cli: &Cli, positional: Option<&str>) -> Result<PrecoloredGraph, Failure> {
    match (positional, &cli.input) {
        (Some(spec), None) => Ok(input::graph(spec)?),
        (None, Some(path)) => Ok(freewreath_core::graphs::parse_graph(&input::read(path)?)?),
        (Some(_), Some(_)) => Err(usage("give the graph either positionally or with --in, not both")),
        (None, None) => Err(usage("missing graph: pass a built-in name, a file, or --in FILE")),
    }
}

fn graph_cmd(
    cli: &Cli,
    op: GraphOp,
    spec: Option<&str>,
    with: Option<&str>,
    copies: usize,
    elements: bool,
) -> Result<Output, Failure> {
    let x = load_graph(cli, spec)?;
    let order = cli.order.unwrap_or(DEFAULT_ORDER);
    let v = match op {
        GraphOp::Aut => {
            let g = automorphism_group(&x)?;
            let orbits: Vec<Vec<usize>> = g.orbits().iter().map(|o| o.iter().map(|v| v + 1).collect()).collect();
            let mut v = json!({"n": x.n(), "order": g.order(), "transitive": g.is_transitive(), "orbits": orbits});
            if elements {
                v["elements"] = json!(g.iter().collect::<Vec<_>>());
            }
            v
        }
        GraphOp::Measure => {
            let classical = classical_spectral_measure(&x)?;
            let quantum = match quantum_measure(&x, order) {
                Ok(q) => json!(q),
                Err(Error::UnsupportedGraph(reason)) => json!({"status": "unsupported", "reason": reason}),
                Err(e) => return Err(e.into()),
            };
            json!({"classical": classical, "quantum": quantum})
        }
        GraphOp::Connected => json!({"connected": is_connected(&x)}),
        GraphOp::Homogeneous => json!({"homogeneous": is_homogeneous(&x)?}),
        GraphOp::Witness => json!(connectivity_witness(&x)?),
        GraphOp::FreeProduct => {
            let y = input::graph(with.ok_or_else(|| usage("free-product needs --with GRAPH"))?)?;
            return Ok(Output { text: free_product(&x, &y).to_json() + "\n", failed: false });
        }
        GraphOp::DisjointUnion => {
            return Ok(Output { text: disjoint_union(&x, copies)?.to_json() + "\n", failed: false });
        }
    };
    Ok(Output::json(v))
}

fn measure_a(cli: &Cli, pair: &MeasurePair) -> Result<MeasureArg, Failure> {
    match (&pair.a, &cli.input) {
        (Some(a), None) => Ok(MeasureArg::parse(a)?),
        (None, Some(path)) => Ok(MeasureArg::parse(&input::read(path)?)?),
        (Some(_), Some(_)) => Err(usage("give the first measure either with --a or --in, not both")),
        (None, None) => Err(usage("missing measure: pass --a or --in")),
    }
}

fn measure_b(pair: &MeasurePair) -> Result<MeasureArg, Failure> {
    Ok(MeasureArg::parse(pair.b.as_deref().ok_or_else(|| usage("this operation needs --b"))?)?)
}

fn measure_cmd(cli: &Cli, op: MeasureOp, pair: &MeasurePair, power: Option<u32>) -> Result<Output, Failure> {
    let order = cli.order.unwrap_or(DEFAULT_ORDER);
    if let MeasureOp::Catalog = op {
        if pair.a.is_none() && cli.input.is_none() {
            let names = [
                "dirac:x", "eta:n", "nu:n", "dihedral:m", "uniform_group:n", "semicircle", "free_poisson", "poisson",
                "fuss_catalan:a,b,c", "cube", "two_rectangles",
            ];
            return Ok(Output::json(json!({"catalog": names})));
        }
    }
    let a = measure_a(cli, pair)?;
    let v = match op {
        MeasureOp::Conv | MeasureOp::Mult => {
            let b = measure_b(pair)?;
            let (x, y) = (a.atoms()?, b.atoms()?);
            let r = if matches!(op, MeasureOp::Conv) { classical_add_conv(&x, &y) } else { classical_mul_conv(&x, &y) };
            json!({"a": a.label(), "b": b.label(), "atoms": r})
        }
        MeasureOp::Boxplus | MeasureOp::Boxtimes => {
            let kind = if matches!(op, MeasureOp::Boxplus) { PowerKind::Boxplus } else { PowerKind::Boxtimes };
            let ma = a.moments(order)?;
            match power {
                Some(n) => {
                    if pair.b.is_some() {
                        return Err(usage("--power takes a single measure"));
                    }
                    json!({"a": a.label(), "power": n, "order": order, "moments": free_power(&ma, kind, n, order)?})
                }
                None => {
                    let b = measure_b(pair)?;
                    let mb = b.moments(order)?;
                    let r = match kind {
                        PowerKind::Boxplus => free_add_conv(&ma, &mb, order)?,
                        PowerKind::Boxtimes => free_mul_conv(&ma, &mb, order)?,
                    };
                    json!({"a": a.label(), "b": b.label(), "order": r.order(), "moments": r})
                }
            }
        }
        MeasureOp::Moments => {
            let m = a.moments(order)?;
            if cli.format == Format::Csv {
                let mut text = String::from("k,moment\n");
                for (k, s) in m.to_strings().iter().enumerate() {
                    text.push_str(&format!("{k},{s}\n"));
                }
                return Ok(Output { text, failed: false });
            }
            json!({"measure": a.label(), "order": order, "moments": m})
        }
        MeasureOp::Catalog => match &a {
            MeasureArg::Catalog(c) => match c.atoms()? {
                Some(atoms) => json!({"measure": c.name(), "atoms": atoms}),
                None => json!({"measure": c.name(), "order": order, "moments": a.moments(order)?}),
            },
            MeasureArg::Atoms(atoms) => json!({"measure": a.label(), "atoms": atoms}),
        },
    };
    Ok(Output::json(v))
}

fn series_cmd(cli: &Cli, op: SeriesOp, pair: &MeasurePair) -> Result<Output, Failure> {
    let order = cli.order.unwrap_or(DEFAULT_ORDER);
    let a = measure_a(cli, pair)?;
    // S and R lose one order relative to the moments they come from.
    let t: Transform = match op {
        SeriesOp::S => s_transform(&a.moments(order + 1)?, order + 1)?,
        SeriesOp::R => r_transform(&a.moments(order + 1)?, order + 1)?,
        SeriesOp::Chi => chi_transform(&a.moments(order)?, order)?,
        SeriesOp::Theta => theta_series(&a.moments(order)?, order)?,
        SeriesOp::Cauchy => cauchy_series(&a.moments(order.saturating_sub(1))?),
    };
    if cli.format == Format::Csv {
        let mut text = String::from("k,coeff\n");
        for (k, s) in t.series.to_strings().iter().enumerate() {
            text.push_str(&format!("{k},{s}\n"));
        }
        return Ok(Output { text, failed: false });
    }
    Ok(Output::json(json!({"measure": a.label(), "transform": t, "display": t.series.to_string()})))
}

fn density_cmd(
    cli: &Cli,
    op: DensityOp,
    g: &str,
    samples: usize,
    epsilon: f64,
    k: Option<u32>,
) -> Result<Output, Failure> {
    let g: ClosedFormG = g.parse()?;
    if epsilon <= 0.0 {
        return Err(usage("--epsilon must be positive"));
    }
    match op {
        DensityOp::Sample => {
            let s = sample_density(g, samples, epsilon);
            match cli.format {
                Format::Csv => Ok(Output { text: samples_to_csv(&s), failed: false }),
                Format::Json => Ok(Output::json(json!({"g": g.name(), "epsilon": epsilon, "samples": s}))),
            }
        }
        DensityOp::Check => {
            let tol = cli.tol.unwrap_or(1e-5);
            let ks: Vec<u32> = match k {
                Some(k) => vec![k],
                None => (0..=6).collect(),
            };
            let reports = ks.iter().map(|&k| density_moment_check(g, k, tol)).collect::<Result<Vec<_>, _>>()?;
            let failed = reports.iter().any(|r| !r.pass);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&reports).expect("json output") + "\n",
                Format::Csv => {
                    let mut t = String::from("g,k,numeric,exact,pass\n");
                    for r in &reports {
                        t.push_str(&format!("{},{},{},{},{}\n", r.closed_form, r.k, r.numeric, r.exact, r.pass));
                    }
                    t
                }
            };
            Ok(Output { text, failed })
        }
    }
}

fn verify_cmd(cli: &Cli, name: &str, raw: &[String]) -> Result<Output, Failure> {
    let mut params = Params::new();
    for kv in raw {
        let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("--param expects KEY=VALUE, got `{kv}`")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let order = cli.order.unwrap_or(DEFAULT_VERIFY_ORDER);
    params.insert("order".into(), order.to_string());
    let reports: Vec<VerificationReport> = if name == "all" {
        run_all(&params)?
    } else {
        if !REGISTRY.contains(&name) {
            return Err(Error::UnknownIdentity(name.into()).into());
        }
        vec![run_verification(name, &params)?]
    };
    let failed = reports.iter().any(|r| !r.pass);
    let text = match cli.format {
        Format::Json if name == "all" => serde_json::to_string_pretty(&reports).expect("json output") + "\n",
        Format::Json => serde_json::to_string_pretty(&reports[0]).expect("json output") + "\n",
        Format::Csv => {
            let mut t = String::from("name,pass,details\n");
            for r in &reports {
                t.push_str(&format!("{},{},\"{}\"\n", r.name, r.pass, r.details.replace('"', "\"\"")));
            }
            t
        }
    };
    Ok(Output { text, failed })
}
