use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use calabi::ansatz::{profile_from_cone, profile_from_local, ConeProfile, Profile};
use calabi::classifier::{atlas_boundaries, atlas_region_in, classify_tol, expected_kind};
use calabi::conesolver::{cone_quadratic, sweep_row, Branch};
use calabi::convexity::{certify_positive, certify_positive_on};
use calabi::curvlab::Point;
use calabi::exact::{int, parse_rat, tolerance_from_env, Rat};
use calabi::geoprobe::{growth_exponent, natural_end, ray_length, volume, Endpoint};
use calabi::report::{
    self, parse_surd, rs, Check, ClassificationJson, ConeSolveJson, CurvatureJson, GrowthJson, IdentityJson,
    IntegralJson, ProfileJson, Report, ATLAS_HEADER, SWEEP_HEADER,
};
use calabi::suites::{run_suite, Suite};
use calabi::surd::Surd;
use calabi::verify::{interior_window, point_in, verify_profile};
use calabi::{Error, Field};

/// Exact construction and verification of toric Bach-flat Kähler metrics.
#[derive(Parser)]
#[command(name = "calabi", version)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile from m, a and the scalar curvature s at r = a.
    Construct(Local),
    /// Profile pinned at r = a and r = b = x·a with a given cone weight.
    ConstructCone(ConeArgs),
    /// Global type of a profile, with a positivity certificate on (a, b).
    Classify(ClassifyArgs),
    /// Solve the cone quadratic at (m, x) and judge admissibility.
    ConeSolve(ConeSolveArgs),
    /// Exact curvature checks at random interior rational points.
    Verify(VerifyArgs),
    /// Region table over a grid of y = a·scal(a), as CSV.
    Atlas(AtlasArgs),
    /// Distances, volumes and growth along the diagonal ray.
    Probe(ProbeArgs),
    /// Run a named exact identity suite over a range of m.
    Identities(IdentitiesArgs),
    /// Batch cone sweep described by a JSON spec, as CSV.
    Sweep(SweepArgs),
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn m_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..)
}

#[derive(Args, Clone)]
struct Local {
    #[arg(long, value_parser = m_arg())]
    m: u32,
    #[arg(long, value_parser = rat_arg, default_value = "1")]
    a: Rat,
    /// Scalar curvature at r = a.
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
    s: Rat,
}

impl Local {
    fn profile(&self) -> Result<Profile, Error> {
        profile_from_local(self.m, &self.a, &self.s)
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        inputs(&[("m", self.m.to_string()), ("a", rs(&self.a)), ("s", rs(&self.s))])
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct ConeArgs {
    #[arg(long, value_parser = m_arg())]
    m: u32,
    #[arg(long, value_parser = rat_arg, default_value = "1")]
    a: Rat,
    /// b/a, greater than 1.
    #[arg(long, value_parser = rat_arg)]
    x: Rat,
    /// Weight p = −m b / p′(b); rational or "re+im*sqrt(d)".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "branch", required_unless_present = "branch")]
    weight: Option<String>,
    /// Take the weight from a root of the cone quadratic.
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
}

impl ConeArgs {
    fn cone(&self) -> Result<ConeProfile<Surd>, Error> {
        let weight = match (&self.weight, self.branch) {
            (Some(w), _) => parse_surd(w)?,
            (None, Some(b)) => {
                let q = cone_quadratic(self.m, &self.x)?;
                let br = match b {
                    BranchArg::Plus => Branch::Plus,
                    BranchArg::Minus => Branch::Minus,
                };
                let w = q.branch(br).or_else(|| q.branch(Branch::Double)).filter(|w| w.value.sign() > 0);
                w.ok_or_else(|| Error::NoSolution(format!("no positive {} weight at m = {}, x = {}", br, self.m, self.x)))?
                    .value
                    .clone()
            }
            (None, None) => return Err(Error::Parameter("give --weight or --branch".into())),
        };
        profile_from_cone(self.m, &self.a, &self.x, weight)
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        let mut i = inputs(&[("m", self.m.to_string()), ("a", rs(&self.a)), ("x", rs(&self.x))]);
        if let Some(w) = &self.weight {
            i.insert("weight".into(), w.clone());
        }
        if let Some(b) = self.branch {
            i.insert("branch".into(), if matches!(b, BranchArg::Plus) { "plus" } else { "minus" }.into());
        }
        i
    }
}

#[derive(Args)]
struct ClassifyArgs {
    /// Profile JSON file ("-" for stdin), as written by construct.
    #[arg(long, conflicts_with_all = ["m", "s", "x"])]
    profile: Option<String>,
    #[arg(long, value_parser = m_arg())]
    m: Option<u32>,
    #[arg(long, value_parser = rat_arg, default_value = "1")]
    a: Rat,
    #[arg(long, value_parser = rat_arg, allow_hyphen_values = true, conflicts_with = "x")]
    s: Option<Rat>,
    /// Classify a cone profile instead (with --weight or --branch).
    #[arg(long, value_parser = rat_arg)]
    x: Option<Rat>,
    #[arg(long, allow_hyphen_values = true, requires = "x")]
    weight: Option<String>,
    #[arg(long, value_enum, requires = "x")]
    branch: Option<BranchArg>,
}

#[derive(Args)]
struct ConeSolveArgs {
    #[arg(long, value_parser = m_arg())]
    m: u32,
    #[arg(long, value_parser = rat_arg)]
    x: Rat,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    local: Local,
    /// Number of random interior points.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=1000))]
    points: u32,
    /// Seed for the point sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long, value_parser = m_arg())]
    m: u32,
    /// lo:hi:n, n evenly spaced rational values of y including both ends.
    #[arg(long, allow_hyphen_values = true)]
    y_grid: String,
}

#[derive(Args)]
#[group(id = "what", required = true, multiple = false, args = ["growth", "length", "volume"])]
struct ProbeArgs {
    #[command(flatten)]
    local: Local,
    /// Fit the growth of volume against distance.
    #[arg(long)]
    growth: bool,
    /// Length of the diagonal ray from --from to --to.
    #[arg(long)]
    length: bool,
    /// Volume of {a < r < --to}.
    #[arg(long)]
    volume: bool,
    /// Use scal⁻²·g instead of g.
    #[arg(long)]
    conformal: bool,
    #[arg(long, value_parser = rat_arg)]
    from: Option<Rat>,
    /// Upper radius; defaults to the natural end of the metric.
    #[arg(long, value_parser = rat_arg)]
    to: Option<Rat>,
    /// Emit the growth samples as CSV.
    #[arg(long, requires = "growth")]
    csv: bool,
}

#[derive(Args)]
struct IdentitiesArgs {
    #[arg(long)]
    suite: String,
    /// lo:hi range of m.
    #[arg(long, default_value = "1:12")]
    m_range: String,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON file: {"m": [1, 3], "x": ["3", "7/2"]} or {"m": [...], "x_grid": "lo:hi:n"}.
    #[arg(long)]
    spec: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    m: Vec<u32>,
    #[serde(default)]
    x: Vec<String>,
    #[serde(default)]
    x_grid: Option<String>,
}

// ---------------------------------------------------------------------------

enum Output {
    Json(String),
    Csv(String),
}

struct Outcome {
    output: Output,
    /// A check failed: exit 1 after writing the output.
    failed: bool,
}

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn json<T: Serialize>(
    command: &str,
    inputs: BTreeMap<String, String>,
    outputs: T,
    notes: &[&str],
) -> Result<Output, Error> {
    let r = Report::new(command, inputs, outputs, notes.iter().map(|s| s.to_string()).collect());
    let mut s = serde_json::to_string_pretty(&r).map_err(|e| Error::Defect(e.to_string()))?;
    s.push('\n');
    Ok(Output::Json(s))
}

fn csv_text<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> Result<String, Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let err = |e: csv::Error| Error::Defect(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Defect(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Defect(e.to_string()))
}

fn read_source(path: &str) -> Result<String, Error> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parameter(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Parameter(format!("{path}: {e}")))?;
    }
    Ok(s)
}

/// A bare profile, or a construct report wrapping one.
fn read_profile(text: &str) -> Result<ProfileJson, Error> {
    let bad = |e: serde_json::Error| Error::Parse(format!("profile JSON: {e}"));
    let mut v: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
    if let Some(inner) = v.get_mut("outputs") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(bad)
}

/// "lo:hi:n" with n ≥ 1 evenly spaced values, both ends included.
fn grid(spec: &str) -> Result<Vec<Rat>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(Error::Parameter(format!("grid {spec:?} is not lo:hi:n")));
    };
    let (lo, hi) = (parse_rat(lo)?, parse_rat(hi)?);
    let n: i64 = n.parse().map_err(|_| Error::Parameter(format!("bad grid count in {spec:?}")))?;
    if !(1..=100_000).contains(&n) || hi < lo {
        return Err(Error::Parameter(format!("grid {spec:?} needs lo <= hi and 1 <= n <= 100000")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (&hi - &lo) / int(n - 1);
    Ok((0..n).map(|i| &lo + &step * int(i)).collect())
}

fn m_range(spec: &str) -> Result<Vec<i64>, Error> {
    let bad = || Error::Parameter(format!("m range {spec:?} is not lo:hi"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo < 1 || hi < lo || hi > 1000 {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// A random rational in (0, 1) with denominator at most 64.
fn unit_rat(rng: &mut ChaCha8Rng) -> Rat {
    let d: i64 = rng.gen_range(2..=64);
    Rat::new(rng.gen_range(1..d).into(), d.into())
}

// ---------------------------------------------------------------------------

const Q_NOTE: &str = "q lists monomial coefficients: q(r) = q0 + q1 r + (q3/6) r^3 + (q4/24) r^4, and p(r) = r^2 - q(r)";

fn construct(args: &Local) -> Result<Outcome, Error> {
    let pr = args.profile()?;
    let out = json("construct", args.inputs(), ProfileJson::from_profile(&pr), &[Q_NOTE])?;
    Ok(Outcome { output: out, failed: false })
}

fn construct_cone(args: &ConeArgs) -> Result<Outcome, Error> {
    let cp = args.cone()?;
    let out = json("construct-cone", args.inputs(), ProfileJson::from_cone(&cp), &[Q_NOTE])?;
    Ok(Outcome { output: out, failed: false })
}

#[derive(Serialize)]
struct ClassifyOut {
    profile: ProfileJson,
    classification: ClassificationJson,
}

fn classify_any<F: Field>(pr: &Profile<F>, cone_b: Option<&Rat>) -> Result<ClassificationJson, Error> {
    let c = classify_tol(pr, &tolerance_from_env()?)?;
    let b = cone_b.cloned().or_else(|| c.b.as_ref().and_then(|b| b.exact().cloned()));
    let cert = match b {
        Some(b) if b > pr.a => Some(certify_positive_on(&pr.p_poly(), &pr.a, &b)?),
        _ => None,
    };
    Ok(ClassificationJson::new(&c, cert.as_ref()))
}

fn classify(args: &ClassifyArgs) -> Result<Outcome, Error> {
    let (inputs, profile, classification) = if let Some(path) = &args.profile {
        let pj = read_profile(&read_source(path)?)?;
        let cone_b = match &pj.cone {
            Some(c) => Some(parse_rat(&c.b)?),
            None => None,
        };
        let cl = if pj.is_rational()? {
            classify_any(&pj.to_profile()?, cone_b.as_ref())?
        } else {
            classify_any(&pj.to_surd_profile()?, cone_b.as_ref())?
        };
        (inputs(&[("profile", path.clone())]), pj, cl)
    } else {
        let m = args.m.ok_or_else(|| Error::Parameter("give --profile or --m".into()))?;
        if let Some(x) = &args.x {
            let ca = ConeArgs { m, a: args.a.clone(), x: x.clone(), weight: args.weight.clone(), branch: args.branch };
            let cp = ca.cone()?;
            let cert = certify_positive(&cp)?;
            let c = classify_tol(&cp.base, &tolerance_from_env()?)?;
            (ca.inputs(), ProfileJson::from_cone(&cp), ClassificationJson::new(&c, Some(&cert)))
        } else {
            let s = args.s.clone().ok_or_else(|| Error::Parameter("give --s, or --x with a weight".into()))?;
            let l = Local { m, a: args.a.clone(), s };
            let pr = l.profile()?;
            (l.inputs(), ProfileJson::from_profile(&pr), classify_any(&pr, None)?)
        }
    };
    let out = json(
        "classify",
        inputs,
        ClassifyOut { profile, classification },
        &["the certificate decides p > 0 on (a, b) by exact root isolation"],
    )?;
    Ok(Outcome { output: out, failed: false })
}

fn cone_solve(args: &ConeSolveArgs) -> Result<Outcome, Error> {
    let q = cone_quadratic(args.m, &args.x)?;
    let j = ConeSolveJson::new(&q)?;
    let notes: &[&str] = if j.status == "nonexistence" {
        &["the Bach-flat cone quadratic has no positive root here, so no such metric exists"]
    } else {
        &["weights are exact in Q(sqrt(disc)); the cone angle is 2 pi / weight"]
    };
    let out = json("cone-solve", inputs(&[("m", args.m.to_string()), ("x", rs(&args.x))]), j, notes)?;
    Ok(Outcome { output: out, failed: false })
}

#[derive(Serialize)]
struct VerifyOut {
    passed: bool,
    bach_flat: bool,
    einstein_constant: String,
    checks: Vec<Check>,
    points: Vec<CurvatureJson>,
}

fn verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    let pr = args.local.profile()?;
    let window = interior_window(&pr)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let pts: Vec<Point> = (0..args.points)
        .map(|_| {
            let u = unit_rat(&mut rng);
            let t = unit_rat(&mut rng);
            point_in(&window, &u, &t)
        })
        .collect();
    let v = verify_profile(&pr, &pts)?;
    let mut inp = args.local.inputs();
    inp.insert("points".into(), args.points.to_string());
    inp.insert("seed".into(), args.seed.to_string());
    let passed = v.passed();
    let out = VerifyOut {
        passed,
        bach_flat: v.bach_flat,
        einstein_constant: rs(&v.einstein_constant),
        checks: v.checks,
        points: v.curvature.iter().map(CurvatureJson::new).collect(),
    };
    let out = json(
        "verify",
        inp,
        out,
        &[
            "points are sampled in a < r < min(first root of p, a + 10) with x1, x2 > 0",
            "einstein_constant is the scalar curvature of scal^-2 g",
        ],
    )?;
    Ok(Outcome { output: out, failed: !passed })
}

fn atlas(args: &AtlasArgs) -> Result<Outcome, Error> {
    let tol = tolerance_from_env()?;
    let mut rows = Vec::new();
    let mut failed = false;
    let bounds = atlas_boundaries(args.m, &tol)?;
    for y in grid(&args.y_grid)? {
        let region = atlas_region_in(args.m, &y, &bounds)?;
        let pr = calabi::ansatz::profile_from_y(args.m, &int(1), &y)?;
        let kind = classify_tol(&pr, &tol)?.kind;
        failed |= kind != expected_kind(&region);
        rows.push(report::atlas_record(&region, &kind.to_string()));
    }
    Ok(Outcome { output: Output::Csv(csv_text(ATLAS_HEADER, rows)?), failed })
}

#[derive(Serialize)]
struct ProbeOut {
    conformal: bool,
    from: Option<String>,
    to: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<IntegralJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    volume: Option<IntegralJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthJson>,
}

fn probe(args: &ProbeArgs) -> Result<Outcome, Error> {
    let pr = args.local.profile()?;
    let c = args.conformal;
    let end = match &args.to {
        Some(t) => Endpoint::Finite(t.clone()),
        None => natural_end(&pr, c)?,
    };
    let mut inp = args.local.inputs();
    inp.insert("conformal".into(), c.to_string());
    if let Some(t) = &args.to {
        inp.insert("to".into(), rs(t));
    }
    let mut out = ProbeOut { conformal: c, from: None, to: end.to_string(), length: None, volume: None, growth: None };
    if args.growth {
        let g = growth_exponent(&pr, c)?;
        if args.csv {
            let rows = g.samples.iter().map(|s| {
                [s.r.to_string(), s.gap.to_string(), s.distance.to_string(), s.volume.to_string()]
            });
            return Ok(Outcome { output: Output::Csv(csv_text(["r", "gap", "distance", "volume"], rows)?), failed: false });
        }
        out.to = g.end.to_string();
        out.growth = Some(GrowthJson::new(&g));
    } else if args.length {
        let from = args.from.clone().unwrap_or_else(|| pr.a.clone());
        inp.insert("from".into(), rs(&from));
        out.length = Some(IntegralJson::new(&ray_length(&pr, &from, &end, c)?));
        out.from = Some(rs(&from));
    } else {
        out.volume = Some(IntegralJson::new(&volume(&pr, &end, c)?));
    }
    let out = json(
        "probe",
        inp,
        out,
        &[
            "lengths run along the diagonal ray x1 = x2 = r/2",
            "divergent integrals are reported with the exponent of the integrand at the bad end",
        ],
    )?;
    Ok(Outcome { output: out, failed: false })
}

fn identities(args: &IdentitiesArgs) -> Result<Outcome, Error> {
    let suite: Suite = args.suite.parse()?;
    let ms = m_range(&args.m_range)?;
    let ids: Vec<IdentityJson> = run_suite(suite, &ms)?.iter().map(IdentityJson::new).collect();
    let failed = ids.iter().any(|i| !i.holds);
    let out = json(
        "identities",
        inputs(&[("suite", suite.to_string()), ("m_range", args.m_range.clone())]),
        ids,
        &["each identity is checked exactly, as polynomials in x or y with rational coefficients"],
    )?;
    Ok(Outcome { output: out, failed })
}

fn sweep(args: &SweepArgs) -> Result<Outcome, Error> {
    let spec: SweepSpec =
        serde_json::from_str(&read_source(&args.spec)?).map_err(|e| Error::Parse(format!("sweep spec: {e}")))?;
    let mut xs: Vec<Rat> = spec.x.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?;
    if let Some(g) = &spec.x_grid {
        xs.extend(grid(g)?);
    }
    if spec.m.is_empty() || xs.is_empty() || spec.m.contains(&0) {
        return Err(Error::Parameter("sweep spec needs positive m values and at least one x".into()));
    }
    let mut ms = spec.m.clone();
    ms.sort_unstable();
    ms.dedup();
    xs.sort();
    xs.dedup();
    let mut rows = Vec::new();
    for &m in &ms {
        for x in &xs {
            rows.push(report::sweep_record(&sweep_row(m, x)?));
        }
    }
    Ok(Outcome { output: Output::Csv(csv_text(SWEEP_HEADER, rows)?), failed: false })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Construct(a) => construct(a),
        Command::ConstructCone(a) => construct_cone(a),
        Command::Classify(a) => classify(a),
        Command::ConeSolve(a) => cone_solve(a),
        Command::Verify(a) => verify(a),
        Command::Atlas(a) => atlas(a),
        Command::Probe(a) => probe(a),
        Command::Identities(a) => identities(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let text = match &o.output {
                Output::Json(s) | Output::Csv(s) => s,
            };
            if let Err(e) = emit(&cli.out, text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if o.failed {
                eprintln!("check failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
