//! JSON front end for the `kappalift` binary.

use kappalift::global::{self, GlobalDocument, InducedGlobal, SeparateDocument, Verdict};
use kappalift::hecke::{ai_transfer, ai_transfer_tensor, bc_transfer, DEFAULT_DEGREE_BUDGET};
use kappalift::reps::{self, Factor, RepDocument, Side};
use kappalift::satake::{ai_fiber_bounded, bc_fiber_bounded, bc_map, delta_map, DEFAULT_MAX_RANK};
use kappalift::verify::{self, Limits, SuiteReport, DEFAULT_CASES, DEFAULT_SEED, SUITES};
use kappalift::{Coordinate, CyclicAlgebra, DocError, Error, FromJson, SatakeParam, SphericalRepE, SymLaurent, Tensor};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Verb {
    LiftSpherical,
    BcSpherical,
    Fibers,
    HeckeAi,
    HeckeBc,
    LiftUnitary,
    LiftElliptic,
    GlobalLift,
    Separate,
    Verify,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub cases: usize,
    pub suite: String,
    pub degree_budget: u32,
    pub max_rank: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            cases: DEFAULT_CASES,
            suite: "all".into(),
            degree_budget: DEFAULT_DEGREE_BUDGET,
            max_rank: DEFAULT_MAX_RANK,
        }
    }
}

/// Exit status and the JSON printed on stdout.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn ok(output: Value) -> Self {
        Outcome { code: EXIT_OK, output }
    }

    pub fn malformed(detail: impl Into<String>) -> Self {
        Outcome { code: EXIT_MALFORMED, output: error_json("Malformed", &detail.into()) }
    }

    fn domain(e: &Error) -> Self {
        Outcome { code: EXIT_DOMAIN, output: error_json(e.kind(), &e.to_string()) }
    }
}

fn error_json(kind: &str, detail: &str) -> Value {
    json!({"error": {"kind": kind, "detail": detail}})
}

enum Fail {
    Malformed(String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Domain(e)
    }
}

impl From<DocError> for Fail {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Malformed(m) => Fail::Malformed(m),
            DocError::Domain(e) => Fail::Domain(e),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn to_value<T: Serialize>(x: &T) -> Res<Value> {
    serde_json::to_value(x).map_err(|e| Fail::Malformed(e.to_string()))
}

fn field<'a>(v: &'a Value, key: &str) -> Res<&'a Value> {
    v.get(key).ok_or_else(|| Fail::Malformed(format!("missing field `{key}`")))
}

fn parse<T: FromJson>(v: &Value) -> Res<T> {
    Ok(T::from_json(v.clone())?)
}

fn plain<T: serde::de::DeserializeOwned>(v: &Value) -> Res<T> {
    serde_json::from_value(v.clone()).map_err(|e| Fail::Malformed(e.to_string()))
}

/// The algebra of a document: an `"algebra"` object, or top-level `d`, `r` and optional `s`, `zeta`.
fn algebra_of(v: &Value) -> Res<CyclicAlgebra> {
    if let Some(a) = v.get("algebra") {
        return parse(a);
    }
    let d: u64 = plain(field(v, "d")?)?;
    let r: u64 = plain(field(v, "r")?)?;
    let base = CyclicAlgebra::new(d, r)?;
    let mut a = json!({"d": d, "r": r, "s": base.s()});
    for key in ["s", "zeta"] {
        if let Some(x) = v.get(key) {
            a[key] = x.clone();
        }
    }
    parse(&a)
}

fn coords(v: &Value) -> Res<Vec<Coordinate>> {
    plain(v)
}

/// A parameter given as `{"rank", "coords"}` or as a bare coordinate list.
fn param_of(v: &Value) -> Res<SatakeParam> {
    if v.is_array() {
        Ok(SatakeParam::new(coords(v)?))
    } else {
        parse(v)
    }
}

/// A representation over `E`: a full document, or the shorthand `{d, r, s?, zeta?, y}` where
/// `y` is a list of blocks or a flat list split evenly into `r` blocks.
fn rep_e_of(v: &Value) -> Res<SphericalRepE> {
    if v.get("blocks").is_some() {
        return parse(v);
    }
    let alg = algebra_of(v)?;
    let y = field(v, "y")?;
    let nested = y.as_array().is_some_and(|a| a.iter().any(Value::is_array));
    let blocks: Vec<Vec<Coordinate>> = if nested {
        plain(y)?
    } else {
        let flat = coords(y)?;
        let r = alg.r() as usize;
        if flat.len() % r != 0 {
            return Err(Error::RankMismatch(format!("{} coordinates cannot be split into {r} blocks", flat.len())).into());
        }
        let m = flat.len() / r;
        (0..r).map(|i| flat[i * m..(i + 1) * m].to_vec()).collect()
    };
    Ok(SphericalRepE::new(alg, blocks.into_iter().map(SatakeParam::new).collect())?)
}

fn lift_spherical(v: &Value) -> Res<Value> {
    to_value(&delta_map(&rep_e_of(v)?))
}

fn bc_spherical(v: &Value) -> Res<Value> {
    to_value(&bc_map(&param_of(field(v, "y")?)?, algebra_of(v)?))
}

fn fibers(v: &Value, o: &Options) -> Res<Value> {
    if let Some(z) = v.get("z") {
        let fib = bc_fiber_bounded(&rep_e_of(z)?, o.max_rank)?;
        return Ok(json!({"kind": "bc", "count": fib.len(), "fiber": to_value(&fib)?}));
    }
    let fib = ai_fiber_bounded(&param_of(field(v, "pi")?)?, algebra_of(v)?, o.max_rank)?;
    Ok(json!({"kind": "ai", "count": fib.len(), "fiber": to_value(&fib)?}))
}

fn hecke_ai(v: &Value, o: &Options) -> Res<Value> {
    let f: SymLaurent = parse(field(v, "f")?)?;
    let alg = algebra_of(v)?;
    if v.get("blocks").and_then(Value::as_bool).unwrap_or(false) {
        to_value(&ai_transfer_tensor(&f, alg, o.degree_budget)?)
    } else {
        to_value(&ai_transfer(&f, alg, o.degree_budget)?)
    }
}

fn hecke_bc(v: &Value, o: &Options) -> Res<Value> {
    let alg = algebra_of(v)?;
    let t: Tensor = match v.get("factors") {
        Some(fs) => {
            let fs = fs.as_array().ok_or_else(|| Fail::Malformed("`factors` must be a list".into()))?;
            let fs = fs.iter().map(parse).collect::<Res<Vec<SymLaurent>>>()?;
            Tensor::from_factors(&fs)?
        }
        None => parse(field(v, "f")?)?,
    };
    to_value(&bc_transfer(&t, alg, o.degree_budget)?)
}

fn lift_unitary(v: &Value) -> Res<Value> {
    let doc: RepDocument = parse(v)?;
    to_value(&RepDocument::new(doc.d, reps::lift_unitary(&doc.rep)?))
}

fn lift_elliptic(v: &Value) -> Res<Value> {
    let doc: RepDocument = parse(v)?;
    let [Factor::Elliptic(e)] = doc.rep.factors() else {
        return Err(Error::ShapeError(format!("expected one elliptic representation, got {}", doc.rep)).into());
    };
    to_value(&RepDocument::new(doc.d, reps::lift_elliptic(e)?))
}

fn global_lift(v: &Value) -> Res<Value> {
    let doc: GlobalDocument = parse(v)?;
    if doc.reps.is_empty() {
        return Err(Error::ShapeError("no representation to lift".into()).into());
    }
    let mut factors = Vec::new();
    for pi in &doc.reps {
        if pi.side() != Side::E {
            return Err(Error::WrongSide(format!("{} is not over E", pi.atom())).into());
        }
        factors.extend(global::global_ai_lift(&doc.places, pi)?.factors().iter().cloned());
    }
    to_value(&InducedGlobal::new(doc.d, doc.places, factors)?)
}

fn separate(v: &Value) -> Res<Value> {
    let doc: SeparateDocument = parse(v)?;
    Ok(match global::separate(&doc.pi, &doc.pi_p)? {
        Verdict::Same { l, gamma } => json!({"verdict": "same", "l": l, "gamma": gamma}),
        Verdict::Distinct { place } => json!({"verdict": "distinct", "place": place}),
    })
}

/// Run the requested suites, concurrently when there are several.
fn verify(o: &Options) -> Res<(bool, Value)> {
    let names: Vec<&str> = if o.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&o.suite.as_str()) {
        vec![o.suite.as_str()]
    } else {
        return Err(Fail::Malformed(format!("unknown suite `{}`; expected one of {SUITES:?} or all", o.suite)));
    };
    let limits = Limits { degree_budget: o.degree_budget, max_rank: o.max_rank };
    let reports: Vec<SuiteReport> = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| s.spawn(move || verify::run_suite(n, o.seed, o.cases, limits).expect("known suite")))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let ok = reports.iter().all(SuiteReport::ok);
    Ok((ok, json!({"seed": o.seed, "cases": o.cases, "ok": ok, "suites": to_value(&reports)?})))
}

/// Execute one verb on an already parsed input document.
pub fn run(verb: Verb, input: &Value, o: &Options) -> Outcome {
    let r = match verb {
        Verb::LiftSpherical => lift_spherical(input),
        Verb::BcSpherical => bc_spherical(input),
        Verb::Fibers => fibers(input, o),
        Verb::HeckeAi => hecke_ai(input, o),
        Verb::HeckeBc => hecke_bc(input, o),
        Verb::LiftUnitary => lift_unitary(input),
        Verb::LiftElliptic => lift_elliptic(input),
        Verb::GlobalLift => global_lift(input),
        Verb::Separate => separate(input),
        Verb::Verify => match verify(o) {
            Ok((true, v)) => Ok(v),
            Ok((false, v)) => return Outcome { code: EXIT_VERIFY_FAILED, output: v },
            Err(e) => Err(e),
        },
    };
    match r {
        Ok(v) => Outcome::ok(v),
        Err(Fail::Malformed(m)) => Outcome::malformed(m),
        Err(Fail::Domain(e)) => Outcome::domain(&e),
    }
}

/// Parse raw input text, then run.
pub fn run_text(verb: Verb, text: &str, o: &Options) -> Outcome {
    if verb == Verb::Verify && text.trim().is_empty() {
        return run(verb, &Value::Null, o);
    }
    match serde_json::from_str::<Value>(text) {
        Ok(v) => run(verb, &v, o),
        Err(e) => Outcome::malformed(e.to_string()),
    }
}
