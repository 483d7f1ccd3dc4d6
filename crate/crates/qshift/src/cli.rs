//! Command-line front end. Every subcommand produces a [`Report`] with the
//! schema `{command, inputs, verdicts, data?}`; output is deterministic.
//!
//! Type labels follow `<letter><N>~<r>` (`A4~2`, `C3~1`) or `<letter><N>` for
//! finite types. With `--rank N` the number may be omitted (`--type C~1`).

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cartan::{CartanData, Family};
use crate::lweights::{compare_component, expected_lweight, o_sign, Component, Method, OSign, Pairing, RationalFn};
use crate::oscillator::{b_symbol, coeff, dj_images, verify_dj_relations, Coeff, OscExpr, OscParams};
use crate::repmodules::{eps_shape, fock_module, FockModule};
use crate::scalars::{parse_rat, Gauss, Rat, Scalar};
use crate::shiftability::{self, canonical_solution, classify, verify_solution};
use crate::suite::{Status, Verdict, CRITERIA};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad type label: {0}")]
    Label(String),
    #[error("bad --eval entry `{0}`: expected v=, b= or z= with a rational value")]
    Eval(String),
    #[error("bad --eps `{0}`: expected a bitstring of length {1}")]
    Eps(String, usize),
    #[error("bad --b: {0}")]
    B(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Engine(String),
}

type Res<T> = Result<T, CliError>;

fn engine<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Engine(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "qshift", version, about = "Exact checks for q-shiftable quantum affine algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Exact evaluation point, e.g. `--eval v=3/2 b=2 z=1/5`.
    #[arg(long, global = true, num_args = 1.., value_delimiter = ',')]
    pub eval: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a type admits a solution of the shift system.
    Classify(TypeArgs),
    /// Build the canonical solution and check every equation.
    Solve(TypeArgs),
    /// Check the defining relations on oscillator images.
    VerifyHom(ModuleArgs),
    /// Dump generator matrices and the weight table of a Fock module.
    Module(ModuleArgs),
    /// Multiplicity and highest-vector report of a Fock module.
    Weights(ModuleArgs),
    /// Highest l-weight of a component, compared with the closed formula.
    Lweight(LweightArgs),
    /// Run the whole acceptance suite.
    CheckAll(CheckAllArgs),
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    /// Type label such as `A4~2`.
    #[arg(long = "type")]
    pub type_label: String,
    /// Fills in or checks the number in the label.
    #[arg(long)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    /// Truncation `M` of each slot.
    #[arg(long, default_value_t = 6)]
    pub cutoff: usize,
    /// Bitstring `eps_1 .. eps_n`; all zeros by default.
    #[arg(long)]
    pub eps: Option<String>,
    /// Per-slot `b_j`: `b` for the symbol, or a scalar such as `2`, `q^2`.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<String>,
    /// Value of `z`; symbolic when absent.
    #[arg(long)]
    pub z: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    #[value(name = "l", alias = "level")]
    Level,
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus", alias = "\u{2212}")]
    Minus,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Braid,
    Closed,
}

#[derive(Debug, Args)]
pub struct LweightArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[arg(long, value_enum, allow_hyphen_values = true)]
    pub component: ComponentArg,
    /// `s` of `W_s` (type `A`, component `l`).
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Level `l` (type `A`, component `l`).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub level: i64,
    #[arg(long, value_enum, default_value = "braid")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 8)]
    pub cutoff: usize,
}

#[derive(Debug, Args)]
pub struct CheckAllArgs {
    /// Continue after a failing criterion.
    #[arg(long)]
    pub keep_going: bool,
}

/// Machine-checkable output of one run.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exact evaluation point; absent coordinates stay symbolic.
#[derive(Clone, Debug, Default)]
pub struct EvalPoint {
    pub v: Option<Rat>,
    pub b: Option<Rat>,
    pub z: Option<Rat>,
}

impl EvalPoint {
    pub fn parse(entries: &[String]) -> Res<EvalPoint> {
        let mut p = EvalPoint::default();
        for e in entries.iter().flat_map(|e| e.split_whitespace()) {
            let (k, val) = e.split_once('=').ok_or_else(|| CliError::Eval(e.into()))?;
            let r = parse_rat(val).ok_or_else(|| CliError::Eval(e.into()))?;
            if k.trim() != "v" && num_traits::Zero::is_zero(&r) {
                return Err(CliError::Eval(e.into()));
            }
            match k.trim() {
                "v" => p.v = Some(r),
                "b" => p.b = Some(r),
                "z" => p.z = Some(r),
                _ => return Err(CliError::Eval(e.into())),
            }
        }
        Ok(p)
    }

    fn inputs(&self) -> Value {
        let s = |r: &Option<Rat>| r.as_ref().map(|x| x.to_string());
        json!({"v": s(&self.v), "b": s(&self.b), "z": s(&self.z)})
    }

    /// Substitutes `b` and `z` (given either here or explicitly).
    fn specialize(&self, c: &Coeff, b: Option<&Scalar>, z: Option<&Scalar>) -> Coeff {
        let bv = b.cloned().or_else(|| self.b.clone().map(Scalar::from_rat));
        let zv = z.cloned().or_else(|| self.z.clone().map(Scalar::from_rat));
        if bv.is_none() && zv.is_none() {
            return c.clone();
        }
        let mut acc = Coeff::zero(0);
        for (e, s) in c.terms() {
            let mut s = s.clone();
            let mut ex = e.clone();
            for (slot, val) in [(0, &bv), (1, &zv)] {
                if let Some(x) = val {
                    s = s.mul(&x.pow(ex[slot]).expect("nonzero evaluation point"));
                    ex[slot] = 0;
                }
            }
            acc = acc.add(&Coeff::monomial(0, ex, s));
        }
        acc
    }

    /// Renders a coefficient; constants are evaluated when `v` is given.
    fn show(&self, c: &Coeff) -> String {
        match (&self.v, c.as_constant()) {
            (Some(v), Some(s)) => match s.eval(v) {
                Some(g) => gauss_str(&g),
                None => format!("pole at v={v}"),
            },
            _ => c.to_string(),
        }
    }

    fn show_scalar(&self, s: &Scalar) -> String {
        self.show(&coeff(s.clone()))
    }
}

fn gauss_str(g: &Gauss) -> String {
    use num_traits::Zero;
    match (g.re.is_zero(), g.im.is_zero()) {
        (_, true) => g.re.to_string(),
        (true, false) => format!("({})*i", g.im),
        _ => format!("{} + ({})*i", g.re, g.im),
    }
}

/// Resolves `--type` and `--rank` into Cartan data.
pub fn resolve_type(t: &TypeArgs) -> Res<CartanData> {
    let label = t.type_label.trim();
    let has_number = label.chars().nth(1).is_some_and(|c| c.is_ascii_digit());
    let full = match (has_number, t.rank) {
        (true, _) => label.to_string(),
        (false, Some(r)) => {
            let mut chars = label.chars();
            let letter = chars.next().ok_or_else(|| CliError::Label(label.into()))?;
            format!("{letter}{r}{}", chars.as_str())
        }
        (false, None) => return Err(CliError::Label(format!("{label} (needs --rank)"))),
    };
    let c = CartanData::parse(&full).map_err(|e| CliError::Label(e.to_string()))?;
    if let (true, Some(r)) = (has_number, t.rank) {
        if c.label.big_n != r {
            return Err(CliError::Label(format!("{full} does not have rank {r}")));
        }
    }
    Ok(c)
}

fn type_inputs(c: &CartanData) -> BTreeMap<String, Value> {
    BTreeMap::from([("type".to_string(), json!(c.label.to_string()))])
}

fn verdict(name: impl Into<String>, paper_ref: &str, ok: bool, residual: Option<String>) -> Verdict {
    Verdict::new(name, paper_ref, ok, residual)
}

pub fn run(cli: &Cli) -> Res<Report> {
    let point = EvalPoint::parse(&cli.eval)?;
    let mut report = match &cli.command {
        Command::Classify(t) => run_classify(t)?,
        Command::Solve(t) => run_solve(t)?,
        Command::VerifyHom(m) => run_verify_hom(m, &point)?,
        Command::Module(m) => run_module(m, &point)?,
        Command::Weights(m) => run_weights(m, &point)?,
        Command::Lweight(l) => run_lweight(l, &point)?,
        Command::CheckAll(a) => run_check_all(a),
    };
    if !cli.eval.is_empty() {
        report.inputs.insert("eval".into(), point.inputs());
    }
    Ok(report)
}

fn run_classify(t: &TypeArgs) -> Res<Report> {
    let c = resolve_type(t)?;
    let v = classify(&c).map_err(engine)?;
    let mut verdicts = vec![verdict("classification decided", "shiftable classification", true, None)];
    let mut data = json!({"verdict": v.name()});
    match &v {
        shiftability::Verdict::Shiftable { witness, report } => {
            data["witness"] = json!(witness.render());
            for e in &report.checks {
                verdicts.push(verdict(&e.name, "shift equations", e.passed, Some(e.residual.clone())));
            }
        }
        shiftability::Verdict::NotShiftable { reason } | shiftability::Verdict::NecessaryConditions { reason, .. } => {
            data["reason"] = json!(reason);
        }
    }
    Ok(Report { command: "classify".into(), inputs: type_inputs(&c), verdicts, data: Some(data) })
}

fn run_solve(t: &TypeArgs) -> Res<Report> {
    let c = resolve_type(t)?;
    let sol = canonical_solution(&c).map_err(engine)?;
    let rep = verify_solution(&sol, &c).map_err(engine)?;
    let verdicts = rep
        .checks
        .iter()
        .map(|e| verdict(&e.name, "shift equations", e.passed, Some(e.residual.clone())))
        .collect();
    let data = json!({"witness": sol.render(), "b": sol.b.as_ref().map(|b| b.to_string())});
    Ok(Report { command: "solve".into(), inputs: type_inputs(&c), verdicts, data: Some(data) })
}

/// The module of `--type --eps --b --z`, with `b` and `z` specialized.
fn build_module(m: &ModuleArgs, point: &EvalPoint) -> Res<(FockModule, BTreeMap<String, Value>)> {
    let c = resolve_type(&m.ty)?;
    if c.family().is_none() {
        return Err(CliError::Unsupported(format!("{} has no oscillator realization", c.label)));
    }
    let n = c.slots();
    let eps: Vec<u8> = match &m.eps {
        None => vec![0; n],
        Some(s) => {
            let bits: Option<Vec<u8>> = s.chars().map(|ch| ch.to_digit(2).map(|d| d as u8)).collect();
            bits.filter(|b| b.len() == n).ok_or_else(|| CliError::Eps(s.clone(), n))?
        }
    };
    let b: Vec<Coeff> = match m.b.len() {
        0 => vec![b_symbol(); n],
        k if k == n => m
            .b
            .iter()
            .map(|s| if s.trim() == "b" { Ok(b_symbol()) } else { Scalar::parse(s).map(coeff).map_err(|e| CliError::B(e.to_string())) })
            .collect::<Res<_>>()?,
        k => return Err(CliError::B(format!("{k} values for {n} slots"))),
    };
    let z = m.z.as_deref().map(Scalar::parse).transpose().map_err(|e| CliError::B(e.to_string()))?;
    if z.as_ref().is_some_and(Scalar::is_zero) {
        return Err(CliError::B("z must be nonzero".into()));
    }
    let mut module = fock_module(&c, &OscParams { eps: eps.clone(), b }, m.cutoff).map_err(engine)?;
    module.images = module.images.map_coeffs(&|x| point.specialize(x, None, z.as_ref()));
    let mut inputs = type_inputs(&c);
    inputs.insert("cutoff".into(), json!(m.cutoff));
    inputs.insert("eps".into(), json!(eps.iter().map(|e| char::from(b'0' + e)).collect::<String>()));
    inputs.insert("b".into(), json!(if m.b.is_empty() { vec!["b".to_string(); n] } else { m.b.clone() }));
    inputs.insert("z".into(), json!(m.z.clone().unwrap_or_else(|| "z".into())));
    Ok((module, inputs))
}

fn run_verify_hom(m: &ModuleArgs, point: &EvalPoint) -> Res<Report> {
    let (module, inputs) = build_module(m, point)?;
    let c = &module.cartan;
    let rep = verify_dj_relations(&module.images, c, m.cutoff).map_err(engine)?;
    let mut verdicts: Vec<Verdict> = rep
        .checks
        .iter()
        .map(|r| {
            let residual = r.first_failure.as_ref().map(|f| format!("nonzero on |{f:?}>"));
            verdict(&r.name, "algebra homomorphism", r.passed, residual)
        })
        .collect();
    let kd = module.images.k_delta(c).map_err(engine)?;
    let one = OscExpr::one(module.images.nu_v, module.images.slots);
    verdicts.push(verdict("K_delta=1", "central element", kd == one, Some(kd.to_string())));
    let untwisted = dj_images(c).map_err(engine)?;
    let data = json!({"interior": rep.checks.first().map(|r| r.interior), "generators": untwisted.xp.len()});
    Ok(Report { command: "verify-hom".into(), inputs, verdicts, data: Some(data) })
}

fn occ_str(m: &[u32]) -> String {
    let parts: Vec<String> = m.iter().map(u32::to_string).collect();
    format!("|{}>", parts.join(","))
}

fn weight_table(module: &FockModule, point: &EvalPoint) -> Res<(Vec<Value>, bool)> {
    let mut rows = Vec::new();
    let mut level_zero = true;
    for m in module.basis() {
        let w = module.weight_of_basis(&m).map_err(engine)?;
        level_zero &= w.is_level_zero(&module.cartan);
        rows.push(json!({
            "vector": occ_str(&m),
            "weight": w.values.iter().map(|x| point.show_scalar(x)).collect::<Vec<_>>(),
            "grade": module.grade(&m),
            "relative": module.relative_weight(&m),
        }));
    }
    Ok((rows, level_zero))
}

fn run_module(m: &ModuleArgs, point: &EvalPoint) -> Res<Report> {
    let (module, inputs) = build_module(m, point)?;
    let mut mats = serde_json::Map::new();
    for (name, op) in module.generator_matrices() {
        let entries: Vec<Value> = op
            .rows
            .iter()
            .enumerate()
            .flat_map(|(src, row)| {
                let from = occ_str(&crate::oscillator::occ_of(src, op.cutoff, op.arity));
                row.iter().map(move |(t, c)| (from.clone(), *t, c))
            })
            .map(|(from, t, c)| {
                json!({"from": from, "to": occ_str(&crate::oscillator::occ_of(t, op.cutoff, op.arity)), "coeff": point.show(c)})
            })
            .collect();
        mats.insert(name, Value::Array(entries));
    }
    let (weights, level_zero) = weight_table(&module, point)?;
    let verdicts = vec![verdict("weights level zero", "level-zero weights", level_zero, None)];
    let data = json!({"matrices": mats, "weights": weights});
    Ok(Report { command: "module".into(), inputs, verdicts, data: Some(data) })
}

fn run_weights(m: &ModuleArgs, point: &EvalPoint) -> Res<Report> {
    let (module, inputs) = build_module(m, point)?;
    let (_, level_zero) = weight_table(&module, point)?;
    let collision = module.weight_collision(&module.basis()).map_err(engine)?;
    let highest = module.highest_vectors();
    let mut verdicts = vec![
        verdict("weights level zero", "level-zero weights", level_zero, None),
        verdict(
            "multiplicity free",
            "multiplicity-free weights",
            collision.is_none(),
            collision.as_ref().map(|(a, b)| format!("{} and {} share a weight", occ_str(a), occ_str(b))),
        ),
    ];
    match module.expected_highest() {
        Some(want) => {
            let mut got = highest.clone();
            got.sort();
            verdicts.push(verdict(
                "highest vectors as listed",
                "highest vectors",
                got == want,
                Some(format!("found {got:?}, listed {want:?}")),
            ));
        }
        None if eps_shape(&module.eps).is_none() => verdicts.push(verdict(
            "no highest vectors for non-monotone eps",
            "highest vectors",
            highest.is_empty(),
            Some(format!("found {highest:?}")),
        )),
        None => {}
    }
    let data = json!({
        "dimension": module.dim(),
        "highest": highest.iter().map(|h| occ_str(h)).collect::<Vec<_>>(),
        "collision": collision.map(|(a, b)| [occ_str(&a), occ_str(&b)]),
    });
    Ok(Report { command: "weights".into(), inputs, verdicts, data: Some(data) })
}

fn eval_fn(f: &RationalFn, point: &EvalPoint) -> Option<String> {
    let (v, z) = (point.v.as_ref()?, point.z.as_ref()?);
    let at = |c: &Coeff| c.eval(&[Scalar::one(), Scalar::from_rat(z.clone())]).ok();
    let val = at(&f.num)?.div(&at(&f.den)?).ok()?;
    val.eval(v).map(|g| gauss_str(&g))
}

fn run_lweight(l: &LweightArgs, point: &EvalPoint) -> Res<Report> {
    let c = resolve_type(&l.ty)?;
    let comp = match l.component {
        ComponentArg::Level => Component::Level(l.s, l.level),
        ComponentArg::Plus => Component::Plus,
        ComponentArg::Minus => Component::Minus,
        ComponentArg::Full => Component::Full,
    };
    match (c.family(), comp) {
        (Some(Family::A), Component::Level(..)) | (Some(Family::C), Component::Plus | Component::Minus) => {}
        (Some(Family::A2 | Family::D), Component::Full) => {}
        _ => return Err(CliError::Unsupported(format!("component {comp:?} of {}", c.label))),
    }
    let method = match l.method {
        MethodArg::Braid => Method::Braid,
        MethodArg::Closed => Method::Closed,
    };
    let cmp = compare_component(&c, comp, method, l.cutoff).map_err(engine)?;
    let o: OSign = o_sign(&c);
    let lw = cmp.computed.specialize(&o);
    let f: BTreeMap<String, Value> = lw
        .nodes
        .iter()
        .zip(&lw.f)
        .map(|(i, f)| (format!("f_{i}"), json!({"f": f.render(), "value": eval_fn(f, point)})))
        .collect();
    let nodes: Vec<Value> = cmp
        .computed
        .nodes
        .iter()
        .map(|d| {
            json!({
                "node": d.node,
                "f0": point.show_scalar(&d.f0),
                "ratio": point.show_scalar(&d.ratio),
                "psi": point.show_scalar(&d.psi),
            })
        })
        .collect();
    let expected = expected_lweight(&c, comp).map_err(engine)?;
    let target = if cmp.pairing == Some(Pairing::Flipped) { o.flipped() } else { o.clone() };
    let sigma = expected.reference.map_or(1, |r| target.get(r));
    let kappa = expected.kappa.mul(&Scalar::from_int(i64::from(sigma)));
    let closed = json!({
        "form": "f_i(z) = (c_i + u) / (1 + c_i u)",
        "u": format!("{} z", point.show_scalar(&kappa)),
        "c": expected.c.iter().map(|x| point.show_scalar(x)).collect::<Vec<_>>(),
    });
    let residual = if cmp.violations.is_empty() { Some("differs from the closed formula".into()) } else { Some(cmp.violations.join("; ")) };
    let verdicts = vec![verdict("highest l-weight", "highest l-weights", cmp.passed(), residual)];
    let data = json!({
        "vector": occ_str(&cmp.vector),
        "o": o.values[1..].to_vec(),
        "pairing": cmp.pairing.map(|p| match p { Pairing::Direct => "o", Pairing::Flipped => "-o" }),
        "f": f,
        "closed_form": closed,
        "nodes": nodes,
    });
    let mut inputs = type_inputs(&c);
    inputs.insert("component".into(), json!(format!("{comp:?}")));
    inputs.insert("method".into(), json!(method.to_string()));
    inputs.insert("cutoff".into(), json!(l.cutoff));
    Ok(Report { command: "lweight".into(), inputs, verdicts, data: Some(data) })
}

fn run_check_all(a: &CheckAllArgs) -> Report {
    let mut verdicts = Vec::new();
    let mut summary = Vec::new();
    for run in CRITERIA {
        let r = run();
        let passed = r.passed();
        summary.push(json!({"id": r.id, "title": r.title, "passed": passed, "checks": r.verdicts.len()}));
        if !r.within_budget() {
            verdicts.push(verdict(
                format!("criterion {} time budget", r.id),
                &r.title,
                false,
                Some(format!("exceeded {}s", r.budget_secs.unwrap_or(0))),
            ));
        }
        verdicts.extend(r.verdicts.into_iter().map(|mut v| {
            v.name = format!("criterion {}: {}", r.id, v.name);
            v
        }));
        if !passed && !a.keep_going {
            break;
        }
    }
    let inputs = BTreeMap::from([("keep_going".to_string(), json!(a.keep_going))]);
    Report { command: "check-all".into(), inputs, verdicts, data: Some(json!({"criteria": summary})) }
}
