//! `crhs`: command-line front end for the hypersurface toolkit.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 for usage errors (bad flags, unparsable expressions, parameter
//! constraints), 3 for internal errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crhs_core::catalog::{self, CatalogEntry, FlowConfig, VerifyConfig};
use crhs_core::expr::{parse_with, EvalPoint, Params, RealCoord};
use crhs_core::hypersurface::{
    find_point, flow_drift, levi_classify, polydisc_points, sample_points, tangency_residual, DefiningFunction,
    LEVI_TOL,
};
use crhs_core::liealg::{table_algebra, AlgebraParams, LieError};
use crhs_core::moser::moser_report;
use crhs_core::vfield::{commutator_at, integrate_flow, jacobi_at, verify_realization, HoloVectorField, VectorFieldFrame};
use crhs_core::{Complex64, Point};

#[derive(Parser)]
#[command(name = "crhs", version, about = "Homogeneous real hypersurfaces in C^3: checks and catalog")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse an expression and print it in canonical form.
    Parse { expr: String },
    /// Evaluate an expression at a point.
    Eval {
        expr: String,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Levi form class of a surface at a point.
    Levi {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        at: PointArgs,
        /// Levi degeneracy tolerance (relative).
        #[arg(long, default_value_t = LEVI_TOL)]
        tol: f64,
    },
    /// Bracket of two algebra elements, or commutator of two fields at a point.
    Bracket {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Coefficient vector of the first element (comma separated).
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// Fields `f;g;h` (give exactly two) instead of algebra elements.
        #[arg(long = "field", conflicts_with_all = ["x", "y"])]
        fields: Vec<String>,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Jacobi defect of a table algebra, or of a frame at random points.
    Jacobi {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long = "field")]
        fields: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Check that a frame realizes a table algebra.
    Realize {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long = "field")]
        fields: Vec<String>,
        /// Use the frame, algebra and parameters of a catalog entry.
        #[arg(long)]
        entry: Option<String>,
        /// Parameter sample of the entry.
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Tangency residual of fields to a surface at sampled surface points.
    Tangency {
        #[command(flatten)]
        surface: OptSurfaceArgs,
        #[arg(long = "field")]
        fields: Vec<String>,
        #[arg(long)]
        entry: Option<String>,
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// RK4 flow of a field; with a surface, reports the drift of |Φ|.
    Flow {
        #[arg(long)]
        field: String,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        surface: OptSurfaceArgs,
        #[arg(long = "t-end", default_value_t = 0.5)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Degree-4 normalization and the umbilicity invariant at a point.
    N220 {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        at: PointArgs,
    },
    /// The surface catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// One line per entry.
    List {
        #[arg(long)]
        section: Option<String>,
    },
    /// Write the catalog document.
    Export {
        /// Output path (standard output when omitted).
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the verifier.
    Verify {
        /// Restrict to these entry ids (repeatable).
        #[arg(long = "entry")]
        entries: Vec<String>,
        #[arg(long)]
        section: Option<String>,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Tangency tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "realization-tol", default_value_t = 1e-9)]
        realization_tol: f64,
        #[arg(long = "levi-tol", default_value_t = LEVI_TOL)]
        levi_tol: f64,
        /// Also compute the umbilicity invariant at base points.
        #[arg(long)]
        umbilic: bool,
        /// Also integrate every field from the first sampled points.
        #[arg(long)]
        flow: bool,
    },
}

#[derive(Args)]
struct PointArgs {
    /// Point as `re,re,re` (real z1, z2, w) or `re,im,re,im,re,im`.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Point as real coordinates, e.g. `y1=1,y2=0,v=1` (others are 0).
    #[arg(long = "at-real", conflicts_with = "at", allow_hyphen_values = true)]
    at_real: Option<String>,
}

#[derive(Args)]
struct ParamArgs {
    /// Named constant for expressions, `name=value` (repeatable).
    #[arg(long = "param", allow_hyphen_values = true)]
    params: Vec<String>,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Defining function Φ or an equation `lhs = rhs`.
    #[arg(long)]
    surface: String,
    /// Domain constraint `expr > 0` given as `expr` (repeatable).
    #[arg(long = "domain", allow_hyphen_values = true)]
    domain: Vec<String>,
    /// Project the point onto the surface along this real coordinate first.
    #[arg(long)]
    solve: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct OptSurfaceArgs {
    #[arg(long)]
    surface: Option<String>,
    #[arg(long = "domain", allow_hyphen_values = true)]
    domain: Vec<String>,
    #[arg(long)]
    solve: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Table row label, e.g. g5_35.
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command printed and whether its checks passed.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

type Res = Result<Outcome, Failure>;

fn done(text: impl Into<String>, json: Value, pass: bool) -> Res {
    Ok(Outcome {
        text: text.into(),
        json,
        pass,
    })
}

fn parse_params(a: &ParamArgs) -> Result<Params, Failure> {
    a.params
        .iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("--param expects name=value, got '{kv}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| Failure::usage(format!("bad number in --param '{kv}'")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn numbers(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::usage(format!("bad number '{t}' in '{s}'"))))
        .collect()
}

fn parse_point(a: &PointArgs) -> Result<Option<Point>, Failure> {
    if let Some(s) = &a.at {
        let v = numbers(s)?;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        return match v.len() {
            3 => Ok(Some(EvalPoint::new(c(v[0], 0.0), c(v[1], 0.0), c(v[2], 0.0)))),
            6 => Ok(Some(EvalPoint::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5])))),
            n => Err(Failure::usage(format!("--at needs 3 or 6 numbers, got {n}"))),
        };
    }
    if let Some(s) = &a.at_real {
        let mut r = [0.0; 6];
        for kv in s.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("--at-real expects name=value, got '{kv}'")))?;
            let c = RealCoord::from_name(k.trim()).ok_or_else(|| Failure::usage(format!("unknown coordinate '{k}'")))?;
            r[c.index()] = v.trim().parse().map_err(|_| Failure::usage(format!("bad number in '{kv}'")))?;
        }
        return Ok(Some(EvalPoint::from_real(r)));
    }
    Ok(None)
}

fn point_or_origin(a: &PointArgs) -> Result<Point, Failure> {
    Ok(parse_point(a)?.unwrap_or_else(EvalPoint::origin))
}

fn phi_source(s: &str) -> String {
    match s.split_once('=') {
        Some((l, r)) => format!("({}) - ({})", l.trim(), r.trim()),
        None => s.to_string(),
    }
}

fn build_surface(src: &str, domain: &[String], params: &Params) -> Result<DefiningFunction, Failure> {
    let dom: Vec<&str> = domain.iter().map(String::as_str).collect();
    DefiningFunction::parse(&phi_source(src), &dom, params).map_err(Failure::usage)
}

fn surface(a: &SurfaceArgs) -> Result<DefiningFunction, Failure> {
    build_surface(&a.surface, &a.domain, &parse_params(&a.params)?)
}

fn solve_coord(name: &str) -> Result<RealCoord, Failure> {
    RealCoord::from_name(name).ok_or_else(|| Failure::usage(format!("unknown coordinate '{name}'")))
}

/// The requested point, projected onto the surface when `--solve` is given.
fn surface_point(a: &SurfaceArgs, df: &DefiningFunction, at: &PointArgs) -> Result<Point, Failure> {
    let p = point_or_origin(at)?;
    match &a.solve {
        Some(v) => find_point(df, &p, solve_coord(v)?).map_err(Failure::usage),
        None => Ok(p),
    }
}

fn field(src: &str, params: &Params) -> Result<HoloVectorField, Failure> {
    let parts: Vec<&str> = src.split(';').map(str::trim).collect();
    let [f, g, h] = parts[..] else {
        return Err(Failure::usage(format!("a field is 'f;g;h', got '{src}'")));
    };
    HoloVectorField::parse([f, g, h], params).map_err(Failure::usage)
}

fn frame(srcs: &[String], params: &Params) -> Result<VectorFieldFrame, Failure> {
    Ok(VectorFieldFrame::new(srcs.iter().map(|s| field(s, params)).collect::<Result<_, _>>()?))
}

fn algebra_params(a: &AlgebraArgs) -> AlgebraParams {
    [("alpha", a.alpha), ("beta", a.beta), ("gamma", a.gamma), ("p", a.p), ("eps", a.eps), ("h", a.h)]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
}

fn complex_json(v: &[Complex64]) -> Value {
    json!(v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
}

fn complex_text(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{}{:+}i", c.re, c.im)).collect();
    format!("({})", parts.join(", "))
}

fn point_json(p: &Point) -> Value {
    complex_json(&p.primaries())
}

fn catalog_entries() -> Result<Vec<CatalogEntry>, Failure> {
    match std::env::var_os("CRHS_CATALOG") {
        Some(path) => catalog::load(&path).map_err(Failure::usage),
        None => Ok(catalog::full_catalog()),
    }
}

fn catalog_entry(id: &str) -> Result<CatalogEntry, Failure> {
    catalog_entries()?
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Failure::usage(format!("no catalog entry '{id}'")))
}

fn check_sample(e: &CatalogEntry, i: usize) -> Result<(), Failure> {
    if i >= e.sample_count() {
        return Err(Failure::usage(format!("entry {} has {} samples", e.id, e.sample_count())));
    }
    Ok(())
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::Parse { expr } => {
            let e = parse_with(&expr, &Params::new()).map_err(Failure::usage)?;
            let vars: Vec<&str> = e.vars().into_iter().map(|v| v.name()).collect();
            let json = json!({"input": expr, "expr": e.to_string(), "vars": vars, "holomorphic": e.is_holomorphic()});
            done(e.to_string(), json, true)
        }

        Cmd::Eval { expr, at, params } => {
            let e = parse_with(&expr, &parse_params(&params)?).map_err(Failure::usage)?;
            let p = point_or_origin(&at)?;
            let v = e.eval(&p).map_err(Failure::usage)?;
            done(format!("{}{:+}i", v.re, v.im), json!({"point": point_json(&p), "value": [v.re, v.im]}), true)
        }

        Cmd::Levi { surface: s, at, tol } => {
            let df = surface(&s)?;
            let p = surface_point(&s, &df, &at)?;
            let c = levi_classify(&df, &p, tol).map_err(Failure::usage)?;
            let json = json!({"point": point_json(&p), "kind": c.kind, "eigenvalues": c.eigenvalues});
            done(c.kind.to_string(), json, true)
        }

        Cmd::Bracket {
            algebra,
            x,
            y,
            fields,
            at,
            params,
        } => {
            if let (Some(x), Some(y)) = (x, y) {
                let name = algebra.algebra.as_deref().ok_or_else(|| Failure::usage("--x/--y need --algebra"))?;
                let sc = table_algebra(name, &algebra_params(&algebra))?;
                let z = sc.bracket(&numbers(&x)?, &numbers(&y)?)?;
                let text: Vec<String> = z.iter().map(|v| v.to_string()).collect();
                return done(text.join(", "), json!({"algebra": name, "bracket": z}), true);
            }
            if fields.len() != 2 {
                return Err(Failure::usage("give --x and --y with --algebra, or exactly two --field"));
            }
            let pr = parse_params(&params)?;
            let (a, b) = (field(&fields[0], &pr)?, field(&fields[1], &pr)?);
            let p = point_or_origin(&at)?;
            let c = commutator_at(&a, &b, &p).map_err(Failure::internal)?;
            done(complex_text(&c), json!({"point": point_json(&p), "commutator": complex_json(&c)}), true)
        }

        Cmd::Jacobi {
            algebra,
            fields,
            params,
            sampling,
            tol,
        } => {
            if let Some(name) = &algebra.algebra {
                let sc = table_algebra(name, &algebra_params(&algebra))?;
                let d = sc.jacobi_defect();
                let pass = d <= tol;
                let json = json!({"algebra": name, "jacobi_defect": d, "tol": tol, "pass": pass});
                return done(format!("jacobi defect {d:e} ({})", verdict(pass)), json, pass);
            }
            if fields.len() < 3 {
                return Err(Failure::usage("give --algebra, or at least three --field"));
            }
            let fr = frame(&fields, &parse_params(&params)?)?;
            let pts = polydisc_points(&EvalPoint::origin(), sampling.points.unwrap_or(10), sampling.radius, sampling.seed);
            let mut worst: f64 = 0.0;
            let n = fr.len();
            for p in &pts {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            let v = jacobi_at(&fr.fields[i], &fr.fields[j], &fr.fields[k], p).map_err(Failure::internal)?;
                            worst = v.iter().fold(worst, |m, c| m.max(c.norm()));
                        }
                    }
                }
            }
            let pass = worst <= tol.max(1e-8);
            let json = json!({"points": pts.len(), "jacobi_defect": worst, "pass": pass});
            done(format!("max cyclic sum {worst:e} ({})", verdict(pass)), json, pass)
        }

        Cmd::Realize {
            algebra,
            fields,
            entry,
            sample,
            at,
            params,
            sampling,
            tol,
        } => {
            let (fr, sc, center) = match entry {
                Some(id) => {
                    let e = catalog_entry(&id)?;
                    check_sample(&e, sample)?;
                    let p = e.sample_params(sample);
                    let fr = e
                        .frame(&p)
                        .map_err(Failure::usage)?
                        .ok_or_else(|| Failure::usage(format!("entry {id} has no frame")))?;
                    let sc = e
                        .algebra(&p)
                        .map_err(Failure::usage)?
                        .ok_or_else(|| Failure::usage(format!("entry {id} has no algebra")))?;
                    (fr, sc, e.stored_base_point(sample).unwrap_or_else(EvalPoint::origin))
                }
                None => {
                    let name = algebra.algebra.as_deref().ok_or_else(|| Failure::usage("give --algebra or --entry"))?;
                    let sc = table_algebra(name, &algebra_params(&algebra))?;
                    (frame(&fields, &parse_params(&params)?)?, sc, EvalPoint::origin())
                }
            };
            let center = parse_point(&at)?.unwrap_or(center);
            let pts = polydisc_points(&center, sampling.points.unwrap_or(20), sampling.radius, sampling.seed);
            let rep = verify_realization(&fr, &sc, &pts, tol).map_err(Failure::usage)?;
            let worst = rep.worst_pair.map(|(i, j)| format!(", worst [e{i}, e{j}]")).unwrap_or_default();
            let text = format!(
                "max bracket residual {:e} over {} points{worst} ({})",
                rep.max_residual,
                rep.points,
                verdict(rep.pass)
            );
            done(text, serde_json::to_value(&rep).map_err(Failure::internal)?, rep.pass)
        }

        Cmd::Tangency {
            surface: s,
            fields,
            entry,
            sample,
            at,
            sampling,
            tol,
        } => tangency(s, fields, entry, sample, at, sampling, tol),

        Cmd::Flow {
            field: f,
            at,
            surface: s,
            t_end,
            step,
            tol,
        } => {
            if !(step > 0.0) || !(t_end >= 0.0) {
                return Err(Failure::usage("--step must be positive and --t-end non-negative"));
            }
            let pr = parse_params(&s.params)?;
            let x = field(&f, &pr)?;
            let df = match &s.surface {
                Some(src) => Some(build_surface(src, &s.domain, &pr)?),
                None => None,
            };
            let mut p = point_or_origin(&at)?;
            if let (Some(df), Some(v)) = (&df, &s.solve) {
                p = find_point(df, &p, solve_coord(v)?).map_err(Failure::usage)?;
            }
            let traj = integrate_flow(&x, &p, t_end, step).map_err(Failure::internal)?;
            let end = traj.end();
            let mut json = json!({"start": point_json(&p), "end": point_json(end), "steps": traj.points.len() - 1});
            let mut text = format!("end {}", complex_text(&end.primaries()));
            let mut pass = true;
            if let Some(df) = &df {
                let d = flow_drift(&x, df, &p, t_end, step).map_err(Failure::internal)?;
                pass = d <= tol;
                json["drift"] = json!(d);
                json["pass"] = json!(pass);
                text.push_str(&format!("\nmax |Φ| along the flow {d:e} ({})", verdict(pass)));
            }
            done(text, json, pass)
        }

        Cmd::N220 { surface: s, at } => {
            let df = surface(&s)?;
            let p = surface_point(&s, &df, &at)?;
            let rep = moser_report(&df, &p).map_err(Failure::usage)?;
            let v = rep.n220.values();
            let text = format!(
                "model {:?}\nN220 (lambda1, lambda2, lambda3, mu1, mu2) = ({}, {}, {}, {}, {})\numbilic: {}",
                rep.model, v[0], v[1], v[2], v[3], v[4], rep.umbilic
            );
            done(text, serde_json::to_value(&rep).map_err(Failure::internal)?, true)
        }

        Cmd::Catalog { cmd } => catalog_cmd(cmd),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn tangency(
    s: OptSurfaceArgs,
    fields: Vec<String>,
    entry: Option<String>,
    sample: usize,
    at: PointArgs,
    sampling: SamplingArgs,
    tol: f64,
) -> Res {
    let (df, fr, base, var) = match entry {
        Some(id) => {
            let e = catalog_entry(&id)?;
            check_sample(&e, sample)?;
            let p = e.sample_params(sample);
            let df = e.defining_function(&p).map_err(Failure::usage)?;
            let fr = if fields.is_empty() {
                e.extended_frame(&p)
                    .map_err(Failure::usage)?
                    .or(e.frame(&p).map_err(Failure::usage)?)
                    .ok_or_else(|| Failure::usage(format!("entry {id} has no frame")))?
            } else {
                frame(&fields, &p)?
            };
            let var = e.solve_coord().map_err(Failure::usage)?;
            (df, fr, e.stored_base_point(sample).unwrap_or_else(EvalPoint::origin), var)
        }
        None => {
            let src = s.surface.as_deref().ok_or_else(|| Failure::usage("give --surface or --entry"))?;
            let df = build_surface(src, &s.domain, &parse_params(&s.params)?)?;
            let var = solve_coord(s.solve.as_deref().unwrap_or("v"))?;
            let seed = point_or_origin(&at)?;
            let base = find_point(&df, &seed, var).map_err(Failure::usage)?;
            (df, frame(&fields, &parse_params(&s.params)?)?, base, var)
        }
    };
    if fr.is_empty() {
        return Err(Failure::usage("no fields given"));
    }
    let n = sampling.points.unwrap_or(50);
    let mut pts = vec![base];
    if n > 1 {
        pts.extend(sample_points(&df, &base, n - 1, sampling.radius, sampling.seed, var).map_err(Failure::internal)?);
    }
    let mut per_field = Vec::new();
    for f in &fr.fields {
        let mut worst: f64 = 0.0;
        for p in &pts {
            worst = worst.max(tangency_residual(f, &df, p).map_err(Failure::internal)?);
        }
        per_field.push(worst);
    }
    let max = per_field.iter().copied().fold(0.0, f64::max);
    let pass = max <= tol;
    let lines: Vec<String> = per_field.iter().enumerate().map(|(i, r)| format!("e{}: {r:e}", i + 1)).collect();
    let text = format!("{}\nmax tangency residual {max:e} over {} points ({})", lines.join("\n"), pts.len(), verdict(pass));
    let json = json!({"points": pts.len(), "per_field": per_field, "max_residual": max, "tol": tol, "pass": pass});
    done(text, json, pass)
}

fn catalog_cmd(cmd: CatalogCmd) -> Res {
    let entries = catalog_entries()?;
    match cmd {
        CatalogCmd::List { section } => {
            let sel: Vec<&CatalogEntry> = entries
                .iter()
                .filter(|e| section.as_ref().is_none_or(|s| &e.section == s))
                .collect();
            let w = sel.iter().map(|e| e.id.len()).max().unwrap_or(0);
            let lines: Vec<String> = sel
                .iter()
                .map(|e| format!("{:<w$}  {:<9}  {:<13}  {}", e.id, e.section, format!("{:?}", e.expected_levi), e.equation))
                .collect();
            let json = json!(sel
                .iter()
                .map(|e| json!({"id": e.id, "section": e.section, "equation": e.equation,
                    "expected_levi": e.expected_levi, "algebra": e.algebra, "samples": e.sample_count()}))
                .collect::<Vec<_>>());
            done(lines.join("\n"), json, true)
        }
        CatalogCmd::Export { out } => {
            let text = catalog::to_json(&entries);
            match out {
                Some(path) => {
                    catalog::save(&entries, &path).map_err(Failure::internal)?;
                    done(format!("wrote {} entries to {path}", entries.len()), json!({"path": path, "entries": entries.len()}), true)
                }
                None => {
                    let v: Value = serde_json::from_str(&text).map_err(Failure::internal)?;
                    done(text, v, true)
                }
            }
        }
        CatalogCmd::Verify {
            entries: ids,
            section,
            sampling,
            tol,
            realization_tol,
            levi_tol,
            umbilic,
            flow,
        } => {
            for id in &ids {
                if !entries.iter().any(|e| &e.id == id) {
                    return Err(Failure::usage(format!("no catalog entry '{id}'")));
                }
            }
            let sel: Vec<CatalogEntry> = entries
                .into_iter()
                .filter(|e| ids.is_empty() || ids.contains(&e.id))
                .filter(|e| section.as_ref().is_none_or(|s| &e.section == s))
                .collect();
            let cfg = VerifyConfig {
                points: sampling.points.unwrap_or(50),
                radius: sampling.radius,
                tangency_tol: tol,
                realization_tol,
                levi_tol,
                seed: sampling.seed,
                check_umbilic: umbilic,
                flow: flow.then(FlowConfig::default),
            };
            let s = catalog::verify_all(&sel, &cfg);
            let json = serde_json::to_value(&s).map_err(Failure::internal)?;
            done(s.table().trim_end().to_string(), json, s.pass())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("report serializes"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
