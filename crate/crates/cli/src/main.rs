use clap::{Args, Parser, Subcommand, ValueEnum};
use saito_core::arrangement::{build_family, check_saito_criterion, Arrangement, FamilySpec, SaitoOutcome};
use saito_core::cohomology::{
    ce_s_dims, coker_saito_dims, h_su_dims, invariants_h1_slice, predict_h1_dims, SliceDims,
};
use saito_core::derivation::{build_orthogonal_family, check_orthogonality, DerivationBasis, OrthogonalFamily};
use saito_core::enveloping::Enveloping;
use saito_core::report::{Bounds, Expected, GradedReport};
use saito_core::scalar::format_scalar;
use saito_core::verify::{self, CheckResult, Status};
use saito_core::{Error, Rational};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "saito-workbench", version, about = "Exact computations for free hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for slice computations.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Arrangement data, Saito matrix and conditions.
    Info(SourceArgs),
    /// Saito's criterion and the structural conditions.
    Check(SourceArgs),
    /// Graded dimensions of one of the cohomology spaces.
    Cohomology(CohomologyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Braid,
    #[value(name = "braid-deleted", alias = "braid_deleted")]
    BraidDeleted,
    Wreath,
}

#[derive(Args, Clone)]
struct SourceArgs {
    #[arg(long, value_enum, conflicts_with = "file")]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    /// Arrangement in JSON form.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
}

#[derive(Args, Clone)]
struct BoundArgs {
    #[arg(long)]
    max_order: Option<u32>,
    /// Weight window `LO..HI`.
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    H0su,
    H1su,
    CeS,
    CeH1,
    Coker,
    PredictH1,
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(long, value_enum)]
    space: Space,
    /// Cohomological degree for `ce-s`.
    #[arg(long, default_value_t = 1)]
    degree: usize,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Paper,
    Center,
    H0su,
    H1su,
    Ce,
    Hh1,
    Outer,
    Commutation,
    Liftings,
    Bezout,
    Pbw,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    bounds: BoundArgs,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

enum Source {
    Family(FamilySpec),
    File(Arrangement, Option<DerivationBasis<Rational>>),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Family(s) => s.to_string(),
            Source::File(a, _) => format!("file(n={})", a.n()),
        }
    }

    fn r(&self) -> Option<u32> {
        match self {
            Source::Family(s) => s.r(),
            Source::File(..) => None,
        }
    }

    fn spec(&self) -> Option<&FamilySpec> {
        match self {
            Source::Family(s) => Some(s),
            Source::File(..) => None,
        }
    }

    fn basis(&self) -> Result<DerivationBasis<Rational>, Failure> {
        match self {
            Source::Family(s) => Ok(build_family::<Rational>(s)?.basis),
            Source::File(_, Some(b)) => Ok(b.clone()),
            Source::File(_, None) => Err(Failure::Usage("the file has no basis".into())),
        }
    }
}

fn family_spec(args: &SourceArgs) -> Option<FamilySpec> {
    let family = match (args.family, args.r) {
        (Some(f), _) => f,
        (None, Some(_)) => FamilyArg::Wreath,
        (None, None) => return None,
    };
    let n = args.n.unwrap_or(3);
    Some(match family {
        FamilyArg::Braid => FamilySpec::Braid { n },
        FamilyArg::BraidDeleted => FamilySpec::BraidDeleted { n },
        FamilyArg::Wreath => FamilySpec::Wreath { n, r: args.r.unwrap_or(1) },
    })
}

fn load_source(args: &SourceArgs) -> Result<Source, Failure> {
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let (arr, basis) = Arrangement::from_json::<Rational>(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok(Source::File(arr, basis));
    }
    let spec = family_spec(args).ok_or_else(|| Failure::Usage("give --family (with --n/--r) or --file".into()))?;
    spec.validate()?;
    Ok(Source::Family(spec))
}

fn parse_weights(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("--weights expects LO..HI, got '{s}'"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn bounds(args: &BoundArgs) -> Result<Bounds, Failure> {
    let mut b = Bounds::default();
    if let Some(p) = args.max_order {
        b.max_order = p;
    }
    if let Some(w) = &args.weights {
        b.weights = parse_weights(w)?;
    }
    Ok(b)
}

fn emit(format: Format, json: &serde_json::Value, text: &str) {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(json).expect("serializable"),
        Format::Text => text.to_string(),
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{body}");
}

fn cmd_info(args: &SourceArgs, format: Format) -> Outcome {
    let src = load_source(args)?;
    let (arr, basis) = match &src {
        Source::Family(spec) => {
            let fam = build_family::<Rational>(spec)?;
            (fam.arrangement, Some(fam.basis))
        }
        Source::File(a, b) => (a.clone(), b.clone()),
    };
    let forms: Vec<String> = arr.form_polynomials().iter().map(ToString::to_string).collect();
    let q = arr.defining_polynomial_cyclotomic().to_string();
    let mut info = json!({
        "source": src.label(),
        "n": arr.n(),
        "hyperplanes": arr.num_hyperplanes(),
        "forms": forms,
        "defining_polynomial": q,
    });
    if let Some(b) = &basis {
        let matrix: Vec<Vec<String>> = b.saito_matrix().iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
        let (free, det) = match check_saito_criterion(&arr, b)? {
            SaitoOutcome::Free { scalar } => (true, format!("{}·Q", format_scalar(&scalar))),
            SaitoOutcome::NotBasis { determinant } => (false, determinant.to_string()),
        };
        info["saito_matrix"] = json!(matrix);
        info["determinant"] = json!(det);
        info["free"] = json!(free);
        info["weights"] = match b.weights() {
            Ok(w) => json!(w),
            Err(_) => json!(null),
        };
        info["triangular"] = json!(b.check_triangularizable());
        info["bezout"] = json!(b.check_bezout());
        info["orthogonality"] = match src.spec() {
            Some(spec) => {
                let fam: OrthogonalFamily<Rational> = build_orthogonal_family(spec)?;
                json!(check_orthogonality(b, &fam))
            }
            None => json!(null),
        };
    }
    let mut text = String::new();
    for (k, v) in info.as_object().expect("object") {
        text.push_str(&format!("{k}: {}\n", render_text(v)));
    }
    emit(format, &info, text.trim_end());
    Ok(())
}

fn render_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(a) => format!("[{}]", a.iter().map(render_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn emit_checks(format: Format, header: serde_json::Value, results: &[CheckResult]) -> Outcome {
    let passed = results.iter().all(|r| r.status != Status::Fail);
    let mut out = header;
    out["results"] = json!(results);
    out["passed"] = json!(passed);
    let mut text: Vec<String> = results.iter().map(ToString::to_string).collect();
    text.push(format!("passed: {passed}"));
    emit(format, &out, &text.join("\n"));
    if passed {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_check(args: &SourceArgs, format: Format) -> Outcome {
    let src = load_source(args)?;
    let results = match &src {
        Source::Family(spec) => vec![
            verify::check_saito(spec),
            verify::check_conditions(spec),
            verify::check_orthogonality_family(spec),
        ],
        Source::File(arr, basis) => {
            let b = basis.as_ref().ok_or_else(|| Failure::Usage("the file has no basis to check".into()))?;
            let free = check_saito_criterion(arr, b)?.is_free();
            let tri = b.check_triangularizable();
            let bez = b.check_bezout();
            let mk = |id: &str, ok: bool| CheckResult {
                id: id.into(),
                title: id.into(),
                status: if ok { Status::Pass } else { Status::Fail },
                expected: "true".into(),
                actual: ok.to_string(),
                notes: vec![],
            };
            vec![mk("saito", free), mk("triangular", tri), mk("bezout", bez)]
        }
    };
    emit_checks(format, json!({ "source": src.label() }), &results)
}

fn dims(v: &[SliceDims]) -> Vec<usize> {
    v.iter().map(|s| s.dim).collect()
}

fn cmd_cohomology(args: &CohomologyArgs, format: Format) -> Outcome {
    let src = load_source(&args.source)?;
    let b = bounds(&args.bounds)?;
    let basis = src.basis()?;
    let label = src.label();
    let p = b.max_order;
    let report = match args.space {
        Space::H0su | Space::H1su => {
            let q = if args.space == Space::H0su { 0 } else { 1 };
            let alg = Enveloping::new(basis.clone())?;
            let now = h_su_dims(&alg, q, b.weights, p)?;
            let next = h_su_dims(&alg, q, b.weights, p + 1)?;
            let stable = dims(&now) == dims(&next);
            let rep = GradedReport::new(if q == 0 { "h0su" } else { "h1su" }, label, src.r(), b, now, stable);
            if q == 0 {
                let n = basis.n();
                let expected = (b.weights.0..=b.weights.1)
                    .map(|d| if d < 0 { 0 } else { binomial(d as usize + n - 1, n - 1) })
                    .collect();
                rep.with_expected(Expected::PerWeight(expected))
            } else if basis.n() == 3 {
                let pred = predict_h1_dims(&basis, b.weights, p)?;
                rep.with_expected(Expected::PerWeight(pred.into_iter().map(|x| x.1).collect()))
            } else {
                rep
            }
        }
        Space::CeS => {
            let per = ce_s_dims(&basis, args.degree, b.weights)?;
            let rep = GradedReport::new(format!("ce-s q={}", args.degree), label, src.r(), b, per, true);
            match (args.degree, src.spec().and_then(verify::expected_hh1)) {
                (0, _) => rep.with_expected(Expected::Total(1)),
                (1, Some(e)) => rep.with_expected(Expected::Total(e)),
                _ => rep,
            }
        }
        Space::CeH1 => {
            if args.degree > 1 {
                return Err(Failure::Usage("ce-h1 is computed in degree 0 only".into()));
            }
            if basis.n() != 3 && basis.n() != 2 {
                return Err(Failure::Usage(format!("ce-h1 is supported for n = 2, 3, not n = {}", basis.n())));
            }
            let alg = Enveloping::new(basis.clone())?;
            let per = (b.weights.0..=b.weights.1)
                .map(|d| invariants_h1_slice(&alg, d, p))
                .collect::<saito_core::Result<Vec<_>>>()?;
            let next = (b.weights.0..=b.weights.1)
                .map(|d| invariants_h1_slice(&alg, d, p + 1))
                .collect::<saito_core::Result<Vec<_>>>()?;
            let stable = dims(&per) == dims(&next);
            let rep = GradedReport::new("ce-h1 q=0", label, src.r(), b, per, stable);
            match src.spec().and_then(verify::expected_hh1) {
                Some(_) => rep.with_expected(Expected::Total(0)),
                None => rep,
            }
        }
        Space::Coker => GradedReport::new("coker", label, src.r(), b, coker_saito_dims(&basis, b.weights)?, true),
        Space::PredictH1 => {
            if basis.n() != 3 {
                return Err(Failure::Usage(format!("predict-h1 needs n = 3, not n = {}", basis.n())));
            }
            let per = predict_h1_dims(&basis, b.weights, p)?
                .into_iter()
                .map(|(weight, dim)| SliceDims { weight, ker: dim, im: 0, dim })
                .collect();
            GradedReport::new("predict-h1", label, src.r(), b, per, true)
        }
    };
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).expect("valid json");
    emit(format, &json, &report.to_string());
    if report.matches == Some(false) {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn suite_items(suite: Suite) -> Vec<u32> {
    match suite {
        Suite::All | Suite::Paper => (1..=verify::ACCEPTANCE_ITEMS).collect(),
        Suite::Center => vec![7],
        Suite::H0su => vec![6],
        Suite::H1su => vec![8, 9],
        Suite::Ce => vec![12, 13],
        Suite::Hh1 => vec![13],
        Suite::Outer => vec![14],
        Suite::Commutation => vec![5, 15],
        Suite::Liftings => vec![10, 11],
        Suite::Bezout => vec![1, 2, 3],
        Suite::Pbw => vec![4],
    }
}

fn suite_checks(suite: Suite, spec: &FamilySpec, b: Bounds, seed: u64) -> Vec<CheckResult> {
    let wreath_r = match *spec {
        FamilySpec::Wreath { n: 3, r } => Some(r),
        _ => None,
    };
    let wreath_only = |id: &str, f: &dyn Fn(u32) -> Vec<CheckResult>| match wreath_r {
        Some(r) => f(r),
        None => vec![CheckResult::skipped(format!("{id}/{spec}"), id, "defined for rank-3 wreath families")],
    };
    let mut out = Vec::new();
    let all = matches!(suite, Suite::All | Suite::Paper);
    if all || suite == Suite::Bezout {
        out.push(verify::check_saito(spec));
        out.push(verify::check_conditions(spec));
        out.push(verify::check_orthogonality_family(spec));
    }
    if all || suite == Suite::Pbw {
        out.push(verify::check_pbw_oracle(spec, 200, seed));
    }
    if all || suite == Suite::Commutation {
        match *spec {
            FamilySpec::BraidDeleted { n: 2 } => out.push(verify::check_presentation_deleted_braid2()),
            _ => out.extend(wreath_only("commutation", &|r| vec![verify::check_commutation(r)])),
        }
    }
    if all || suite == Suite::H0su {
        out.push(verify::check_h0su(spec, b));
    }
    if all || suite == Suite::Center {
        out.push(verify::check_center(spec, b));
    }
    if all || suite == Suite::H1su {
        out.extend(wreath_only("eta-cocycles", &|r| vec![verify::check_eta_cocycles(r, b.max_order)]));
        out.push(verify::check_h1_structure(spec, b));
    }
    if all || suite == Suite::Liftings {
        out.extend(wreath_only("liftings", &|r| {
            vec![
                verify::check_closed_form_lifting(r),
                verify::check_delta_telescoping(100, seed),
                verify::check_lifting_independence(r, 2),
                verify::check_dsharp_formulas(r, 2),
            ]
        }));
    }
    if all || suite == Suite::Ce {
        out.push(verify::check_invariants(spec, b.max_order));
    }
    if all || suite == Suite::Ce || suite == Suite::Hh1 {
        out.push(verify::check_hh1(spec, b));
    }
    if all || suite == Suite::Outer {
        out.push(verify::check_outer(spec));
    }
    out
}

fn cmd_verify(args: &VerifyArgs, format: Format) -> Outcome {
    if args.source.file.is_some() {
        return Err(Failure::Usage("verify works on the built families; use check for files".into()));
    }
    let b = bounds(&args.bounds)?;
    let seed = verify::seed_from_env();
    let suite_name = args.suite.to_possible_value().expect("named").get_name().to_string();
    let (family, results) = match family_spec(&args.source) {
        Some(spec) => {
            spec.validate()?;
            (spec.to_string(), suite_checks(args.suite, &spec, b, seed))
        }
        None => (
            "acceptance".to_string(),
            suite_items(args.suite).into_iter().map(|i| verify::acceptance_item(i, seed)).collect(),
        ),
    };
    emit_checks(format, json!({ "suite": suite_name, "family": family, "seed": seed }), &results)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().expect("thread pool");
    }
    let res = match &cli.command {
        Command::Info(a) => cmd_info(a, cli.format),
        Command::Check(a) => cmd_check(a, cli.format),
        Command::Cohomology(a) => cmd_cohomology(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.format),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
