use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pptgeo::angle::Angle;
use pptgeo::extremality::{is_extreme_in_t, verify_appendix};
use pptgeo::json::{
    bipartite_from_json, bipartite_to_json, choi_from_json, choi_to_json, parse, report_to_json,
    spec_from_json, spec_to_json, vector_to_json,
};
use pptgeo::krawtchouk::{nu_summary, solve};
use pptgeo::linalg::kernel_basis;
use pptgeo::maps::{
    antipodal_sum_choi, boundary_witness_search, decomposable_map, is_interior_sufficient, pairing,
    phi_theta_t, trace_map_decomposition_2n, trace_map_decomposition_33, DEFAULT_WITNESS_RESTARTS,
};
use pptgeo::states::{
    arc_of, combine, is_interior_of_s_sufficient, is_interior_of_t, is_ppt, kernel_vectors_w, rho,
    sigma, state_type,
};
use pptgeo::{BipartiteMatrix, Error, Tolerance};

#[derive(Parser)]
#[command(name = "pptgeo", version, about = "PPT states, positive maps and their convex geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, classify, or inspect bipartite states.
    #[command(subcommand)]
    State(StateCmd),
    /// Extreme-point test in the PPT set.
    Extremality(ExtremalityArgs),
    /// Convex combination of family states.
    Combine {
        /// JSON list of {family, b, theta, weight}, inline or as a file path.
        #[arg(long)]
        spec: String,
    },
    /// Positive and decomposable maps.
    #[command(subcommand)]
    Map(MapCmd),
    /// The Krawtchouk condition and ν values.
    #[command(subcommand)]
    Krawtchouk(KrawtchoukCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Rho,
    Sigma,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Decimal radians or a multiple of pi such as `pi/6`, `-pi/3`, `5*pi/12`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Angle,
}

#[derive(Subcommand)]
enum StateCmd {
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<String>,
    },
    Classify {
        #[arg(long = "in")]
        input: String,
    },
    Kernel {
        #[arg(long = "in")]
        input: String,
    },
}

#[derive(Args)]
struct ExtremalityArgs {
    #[arg(long = "in", conflicts_with_all = ["family", "b", "theta"])]
    input: Option<String>,
    #[arg(long, value_enum, requires_all = ["b", "theta"])]
    family: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<Angle>,
    /// Also check the explicit kernel bases and the combination identity.
    #[arg(long, requires = "family")]
    verify_appendix: bool,
}

#[derive(Subcommand)]
enum MapCmd {
    PhiTheta {
        #[arg(long, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    AntipodalSum {
        #[arg(long, allow_hyphen_values = true)]
        theta: Angle,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    TraceDecomp {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mu: Option<usize>,
    },
    Pair {
        #[arg(long)]
        state: String,
        #[arg(long)]
        map: String,
    },
    BoundaryWitness {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = DEFAULT_WITNESS_RESTARTS)]
        restarts: usize,
        /// Defaults to $PPTGEO_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum KrawtchoukCmd {
    Solve {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    Nu {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Self { code: 2, message: message.to_string() }
    }

    fn numerical(message: impl Display) -> Self {
        Self { code: 3, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Format(_) => Failure::usage(e),
            Error::NumericalFailure(_) | Error::ContractViolation(_) => Failure::numerical(e),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::State(cmd) => cmd_state(cmd),
        Command::Extremality(args) => cmd_extremality(args),
        Command::Combine { spec } => cmd_combine(&spec),
        Command::Map(cmd) => cmd_map(cmd),
        Command::Krawtchouk(cmd) => cmd_krawtchouk(cmd),
    };
    match outcome {
        Ok((report, summary)) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{report}");
            let _ = writeln!(std::io::stderr().lock(), "{summary}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn read_json(path_or_inline: &str) -> Result<Value, Failure> {
    let trimmed = path_or_inline.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        path_or_inline.to_string()
    } else {
        fs::read_to_string(path_or_inline)
            .map_err(|e| Failure::usage(format!("cannot read {path_or_inline}: {e}")))?
    };
    Ok(parse(&text)?)
}

fn build(family: Family, b: f64, theta: Angle) -> Result<BipartiteMatrix, Failure> {
    let t = theta.radians();
    Ok(match family {
        Family::Rho => rho(b, t)?,
        Family::Sigma => sigma(b, t)?,
    })
}

fn seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("PPTGEO_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("PPTGEO_SEED must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(0),
    }
}

/// Recovers `(family, b, θ)` when `x` is a positive multiple of `ρ_{b,θ}` or
/// `σ_{b,θ}`.
fn recognize(x: &BipartiteMatrix) -> Option<(&'static str, f64, f64)> {
    if (x.m(), x.n()) != (3, 3) {
        return None;
    }
    let corner = -x.get(0, 4);
    let scale = corner.norm();
    if scale == 0.0 {
        return None;
    }
    let theta = corner.arg();
    let b = x.get(2, 2).re / scale;
    if b <= 0.0 {
        return None;
    }
    let candidates = [("rho", rho(b, theta).ok()?), ("sigma", sigma(b, theta).ok()?)];
    candidates.into_iter().find_map(|(name, s)| {
        let gap = (x.matrix() - &s.matrix().scale(scale)).norm();
        (gap <= 1e-10 * x.matrix().norm()).then_some((name, b, theta))
    })
}

fn classify(x: &BipartiteMatrix) -> Result<Value, Failure> {
    let t = tol();
    let ppt = is_ppt(x, &t)?;
    let ty = state_type(x, &t).ok();
    let family = recognize(x);
    Ok(json!({
        "ppt": ppt,
        "type": ty.map(|s| json!([s.p, s.q])),
        "arc": family.map(|(_, _, theta)| arc_of(theta).to_string()),
        "family": family.map(|(name, b, theta)| json!({"name": name, "b": b, "theta": theta})),
        "interior_T": ppt && is_interior_of_t(x, &t)?,
        "interior_S_sufficient": is_interior_of_s_sufficient(x, &t),
    }))
}

fn describe(c: &Value) -> String {
    format!(
        "ppt={} type={} arc={} interior_T={} interior_S_sufficient={}",
        c["ppt"], c["type"], c["arc"], c["interior_T"], c["interior_S_sufficient"]
    )
}

fn cmd_state(cmd: StateCmd) -> Outcome {
    match cmd {
        StateCmd::Construct { family, normalize, out } => {
            let mut x = build(family.family, family.b, family.theta)?;
            if normalize {
                x = x.normalized()?;
            }
            let value = bipartite_to_json(&x);
            let summary = format!(
                "{} b={} theta={} arc={} trace={}",
                match family.family {
                    Family::Rho => "rho",
                    Family::Sigma => "sigma",
                },
                family.b,
                family.theta,
                family.theta.arc(),
                x.trace()
            );
            if let Some(path) = out {
                fs::write(&path, format!("{value}\n"))
                    .map_err(|e| Failure::usage(format!("cannot write {path}: {e}")))?;
                return Ok((json!({"written": path}), summary));
            }
            Ok((value, summary))
        }
        StateCmd::Classify { input } => {
            let x = bipartite_from_json(&read_json(&input)?)?;
            let c = classify(&x)?;
            let summary = describe(&c);
            Ok((c, summary))
        }
        StateCmd::Kernel { input } => {
            let x = bipartite_from_json(&read_json(&input)?)?;
            let basis = kernel_basis(x.matrix(), &tol())?;
            let mut labeled = Vec::new();
            if let Some(("rho", b, theta)) = recognize(&x) {
                for (label, w) in kernel_vectors_w(b, theta)? {
                    let residual = (x.matrix().as_dmatrix() * &w).norm();
                    labeled.push(json!({"label": label.to_string(), "vector": vector_to_json(&w), "residual": residual}));
                }
            }
            let summary = format!("kernel dimension {} ({} labeled vectors)", basis.len(), labeled.len());
            Ok((
                json!({
                    "dim": basis.len(),
                    "basis": basis.iter().map(vector_to_json).collect::<Vec<_>>(),
                    "labeled": labeled,
                }),
                summary,
            ))
        }
    }
}

fn cmd_extremality(args: ExtremalityArgs) -> Outcome {
    let x = match (&args.input, args.family, args.b, args.theta) {
        (Some(path), _, _, _) => bipartite_from_json(&read_json(path)?)?,
        (None, Some(f), Some(b), Some(theta)) => build(f, b, theta)?,
        _ => return Err(Failure::usage("give either --in <file> or --family, --b and --theta")),
    };
    // A non-PPT input is a failed precondition of the test, not a usage error.
    let report = is_extreme_in_t(&x, &tol()).map_err(|e| match e {
        Error::Domain(m) => Failure::numerical(m),
        other => other.into(),
    })?;
    let mut summary = format!(
        "dim Ker phi_D = {}, dim Ker phi_E = {}, intersection = {} -> {}",
        report.dim_ker_d,
        report.dim_ker_e,
        report.dim_intersection,
        if report.is_extreme { "extreme" } else { "not extreme" }
    );
    let value = report_to_json(&report);
    if !args.verify_appendix {
        return Ok((value, summary));
    }
    let (b, theta) = (args.b.expect("required"), args.theta.expect("required").radians());
    let appendix = verify_appendix(b, theta, &tol())?;
    summary.push_str(&format!(
        "\nX: rank {} max residual {:.3e} (corrected X13: {:.3e}); Y: {} distinct of {}, rank {}, max residual {:.3e}\n\
         X-combination residual {:.3e}; Y-combination residual ending -X7 {:.3e}, ending -Y7 {:.3e}",
        appendix.x_rank,
        appendix.max_phi_d_residual,
        appendix.corrected_max_phi_d_residual,
        appendix.y_distinct,
        appendix.y_listed,
        appendix.y_rank,
        appendix.max_phi_e_residual,
        appendix.combination.x_residual,
        appendix.combination.y_residual_ending_x7,
        appendix.combination.y_residual_ending_y7,
    ));
    let appendix = serde_json::to_value(&appendix).map_err(|e| Failure::numerical(e))?;
    Ok((json!({"extremality": value, "appendix": appendix}), summary))
}

fn angle_field(v: &Value) -> Result<Angle, Failure> {
    match v {
        Value::Number(n) => Ok(Angle::Radians(n.as_f64().ok_or_else(|| Failure::usage("bad theta"))?)),
        Value::String(s) => Ok(s.parse()?),
        _ => Err(Failure::usage("theta must be a number or an angle expression")),
    }
}

fn cmd_combine(spec: &str) -> Outcome {
    let items = read_json(spec)?;
    let items = items
        .as_array()
        .ok_or_else(|| Failure::usage("combine spec must be a JSON list"))?;
    let mut states = Vec::new();
    let mut weights = Vec::new();
    for item in items {
        let family = match item["family"].as_str() {
            Some("rho") => Family::Rho,
            Some("sigma") => Family::Sigma,
            _ => return Err(Failure::usage("family must be \"rho\" or \"sigma\"")),
        };
        let b = item["b"].as_f64().ok_or_else(|| Failure::usage("b must be a number"))?;
        let weight = item["weight"]
            .as_f64()
            .ok_or_else(|| Failure::usage("weight must be a number"))?;
        states.push(build(family, b, angle_field(&item["theta"])?)?);
        weights.push(weight);
    }
    let x = combine(&states, &weights)?;
    let c = classify(&x)?;
    let summary = describe(&c);
    Ok((json!({"state": bipartite_to_json(&x), "classification": c}), summary))
}

fn significant(x: f64, digits: usize) -> f64 {
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn cmd_map(cmd: MapCmd) -> Outcome {
    match cmd {
        MapCmd::PhiTheta { theta, t } => {
            let m = phi_theta_t(theta.radians(), t)?;
            Ok((choi_to_json(&m), format!("Phi_theta(t) at theta={theta}, t={t}")))
        }
        MapCmd::AntipodalSum { theta, t, s } => {
            let m = antipodal_sum_choi(theta.radians(), t, s)?;
            let interior = is_interior_sufficient(&m);
            Ok((
                json!({"map": choi_to_json(&m), "diagonal_positive": interior, "interior_P_sufficient": interior}),
                format!("antipodal sum at theta={theta}: diagonal Choi with positive entries, interior of the positive cone"),
            ))
        }
        MapCmd::TraceDecomp { m, mu } => {
            let spec = match (m, mu) {
                (2, Some(mu)) => trace_map_decomposition_2n(mu)?,
                (2, None) => return Err(Failure::usage("--m 2 requires --mu")),
                (3, None) => trace_map_decomposition_33(),
                (3, Some(_)) => return Err(Failure::usage("--mu applies to --m 2 only")),
                _ => return Err(Failure::usage("trace decompositions exist for --m 2 and --m 3")),
            };
            let map = decomposable_map(&spec)?;
            let (k, l) = spec.counts();
            let dim = map.choi().dim();
            let is_identity = map.choi().matrix() == &pptgeo::HermitianMatrix::identity(dim);
            Ok((
                json!({"spec": spec_to_json(&spec), "map": choi_to_json(&map), "k": k, "l": l, "choi_is_identity": is_identity}),
                format!("(k, l) = ({k}, {l}); Choi matrix is I_{dim}: {is_identity}"),
            ))
        }
        MapCmd::Pair { state, map } => {
            let x = bipartite_from_json(&read_json(&state)?)?;
            let phi = choi_from_json(&read_json(&map)?)?;
            let value = significant(pairing(&x, &phi)?, 12);
            Ok((json!({"pairing": value}), format!("<rho, phi> = {value}")))
        }
        MapCmd::BoundaryWitness { spec, restarts, seed: flag } => {
            let spec: pptgeo::DecomposableSpec = spec_from_json(&read_json(&spec)?)?;
            let seed = seed(flag)?;
            let found = boundary_witness_search(&spec, restarts, seed)?;
            let (value, summary) = match found {
                Some(w) => (
                    json!({"found": true, "xi": vector_to_json(&w.xi), "eta": vector_to_json(&w.eta), "residual": w.residual, "seed": seed, "restarts": restarts}),
                    format!("common zero found (residual {:.3e}): the map is on the boundary", w.residual),
                ),
                None => (
                    json!({"found": false, "seed": seed, "restarts": restarts}),
                    format!("no common zero in {restarts} restarts (inconclusive)"),
                ),
            };
            Ok((value, summary))
        }
    }
}

fn cmd_krawtchouk(cmd: KrawtchoukCmd) -> Outcome {
    match cmd {
        KrawtchoukCmd::Solve { m, n } => {
            let sols = solve(m, n)?;
            let pairs: Vec<String> = sols.iter().map(|s| format!("({}, {})", s.k, s.l)).collect();
            let summary = if pairs.is_empty() {
                format!("no solutions for (m, n) = ({m}, {n})")
            } else {
                format!("solutions: {}", pairs.join(", "))
            };
            Ok((serde_json::to_value(&sols).map_err(Failure::numerical)?, summary))
        }
        KrawtchoukCmd::Nu { m, n } => {
            let s = nu_summary(m, n)?;
            let show = |v: Option<usize>| v.map_or("unknown".to_string(), |x| x.to_string());
            let summary = format!(
                "nu(S)={} nu(T)={} nu(P)={} nu(D)={} (lower bound {})",
                s.s,
                show(s.t),
                show(s.p),
                show(s.d.value),
                s.d.lower_bound
            );
            Ok((serde_json::to_value(s).map_err(Failure::numerical)?, summary))
        }
    }
}
