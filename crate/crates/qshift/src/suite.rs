//! The acceptance suite: ten criteria, each a list of named verdicts with an
//! exact residual on failure. Shared by `qshift check-all` and the
//! `acceptance` test target.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{represent_on, Algebra};
use crate::cartan::{CartanData, Family};
use crate::lweights::{
    compare_component, component_module, root_vector, Component, Method, Pairing, RootActions,
};
use crate::oscillator::{coeff, dj_images, verify_dj_relations, z_pow, Coeff, FockVec, OscExpr, OscParams};
use crate::repmodules::{
    admissible_tuples, auxiliary_identities, cor53_solver, equal_up_to_signs, eps_gt, fock_module,
    verify_sz_relations, w_module, SzModule,
};
use crate::scalars::{qint, tau_nu, Scalar};
use crate::shiftability::{canonical_solution, classify, verify_solution, worked_example};

/// Seed for the sampled tuples and random `eps`.
pub const SEED: u64 = 20_241_017;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub paper_ref: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, paper_ref: &str, ok: bool, residual: Option<String>) -> Self {
        Verdict {
            name: name.into(),
            paper_ref: paper_ref.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: if ok { None } else { residual.or_else(|| Some("check failed".into())) },
        }
    }

    fn from_result<T>(name: impl Into<String>, paper_ref: &str, r: Result<T, String>, ok: impl FnOnce(&T) -> Result<(), String>) -> Self {
        match r.and_then(|t| ok(&t)) {
            Ok(()) => Verdict::new(name, paper_ref, true, None),
            Err(e) => Verdict::new(name, paper_ref, false, Some(e)),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: String,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub elapsed: Duration,
    /// Wall-clock budget in seconds.
    pub budget_secs: Option<u64>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed) && self.within_budget()
    }

    pub fn within_budget(&self) -> bool {
        self.budget_secs.is_none_or(|b| self.elapsed.as_secs_f64() <= b as f64)
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.passed())
    }
}

fn timed(id: usize, title: &str, budget_secs: Option<u64>, f: impl FnOnce() -> Vec<Verdict>) -> CriterionReport {
    let t = Instant::now();
    let verdicts = f();
    CriterionReport { id, title: title.to_string(), verdicts, elapsed: t.elapsed(), budget_secs }
}

fn cd(label: &str) -> Result<CartanData, String> {
    CartanData::parse(label).map_err(|e| e.to_string())
}

pub const SHIFTABLE: &[&str] = &[
    "A1~1", "A2~1", "A3~1", "A4~1", "C2~1", "C3~1", "C4~1", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2", "D5~2",
];
pub const NOT_SHIFTABLE: &[&str] = &["B3~1", "G2~1", "D4~3", "F4~1", "A5~2", "A7~2", "E6~1"];

/// Types with at most three Fock slots, one group per family.
pub const SMALL: &[&str] = &["A1~1", "A2~1", "C2~1", "C3~1", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2"];

pub fn criterion1() -> CriterionReport {
    timed(1, "classification of shiftable affine types", Some(1), || {
        let mut out = Vec::new();
        for (labels, want) in [(SHIFTABLE, true), (NOT_SHIFTABLE, false)] {
            for &l in labels {
                let r = cd(l).and_then(|c| classify(&c).map_err(|e| e.to_string()));
                out.push(Verdict::from_result(format!("classify {l}"), "shiftable classification", r, |v| {
                    if v.is_shiftable() == want {
                        Ok(())
                    } else {
                        Err(format!("got {}", v.name()))
                    }
                }));
            }
        }
        out
    })
}

pub fn criterion2() -> CriterionReport {
    timed(2, "canonical solutions satisfy the shift system", Some(10), || {
        let mut out = Vec::new();
        let mut cases: Vec<(String, Result<_, String>)> = SHIFTABLE
            .iter()
            .map(|&l| (l.to_string(), cd(l).and_then(|c| canonical_solution(&c).map(|t| (c, t)).map_err(|e| e.to_string()))))
            .collect();
        for l in ["A2", "A1~1"] {
            cases.push((format!("worked {l}"), cd(l).and_then(|c| worked_example(&c).map(|t| (c, t)).map_err(|e| e.to_string()))));
        }
        for (name, r) in cases {
            let r = r.and_then(|(c, t)| verify_solution(&t, &c).map_err(|e| e.to_string()));
            out.push(Verdict::from_result(format!("solution {name}"), "canonical solutions", r, |rep| {
                match rep.failures().next() {
                    None => Ok(()),
                    Some(f) => Err(format!("{}: {}", f.name, f.residual)),
                }
            }));
        }
        out
    })
}

pub fn criterion3() -> CriterionReport {
    timed(3, "oscillator images satisfy the defining relations", Some(120), || {
        let mut out = Vec::new();
        for &l in SMALL {
            let r = cd(l).and_then(|c| {
                let img = dj_images(&c).map_err(|e| e.to_string())?;
                let rep = verify_dj_relations(&img, &c, 6).map_err(|e| e.to_string())?;
                let kd = img.k_delta(&c).map_err(|e| e.to_string())?;
                Ok((rep, kd == OscExpr::one(img.nu_v, img.slots)))
            });
            out.push(Verdict::from_result(format!("relations {l} M=6"), "algebra homomorphism", r, |(rep, kd)| {
                if let Some(f) = rep.checks.iter().find(|c| !c.passed) {
                    return Err(format!("{} fails at {:?}", f.name, f.first_failure));
                }
                if !rep.checks.iter().any(|c| c.name.starts_with("Serre")) {
                    return Err("no Serre relations checked".into());
                }
                if !kd {
                    return Err("K_delta image is not 1".into());
                }
                Ok(())
            }));
        }
        out
    })
}

pub fn criterion4() -> CriterionReport {
    timed(4, "S_z(f) relations and auxiliary identities", Some(120), || {
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for l in ["A1~1", "C2~1", "A4~2", "D3~2", "A2~1", "C3~1", "A6~2", "D4~2"] {
            let c = match cd(l) {
                Ok(c) => c,
                Err(e) => {
                    out.push(Verdict::new(format!("sz {l}"), "S_z(f) modules", false, Some(e)));
                    continue;
                }
            };
            let mut tuples = admissible_tuples(c.slots());
            if c.slots() >= 3 {
                tuples.shuffle(&mut rng);
                tuples.truncate(4);
            }
            for f in tuples {
                let tag: String = f.iter().map(|x| x.symbol()).collect();
                let r = SzModule::new(&c, &f).map_err(|e| e.to_string());
                let r = r.and_then(|m| {
                    let rep = verify_sz_relations(&m).map_err(|e| e.to_string())?;
                    let aux = if c.family() != Some(Family::A) && c.size() >= 3 {
                        auxiliary_identities(&m).map_err(|e| e.to_string())?
                    } else {
                        Vec::new()
                    };
                    Ok((rep, aux))
                });
                out.push(Verdict::from_result(format!("sz {l} f={tag}"), "S_z(f) module structure", r, |(rep, aux)| {
                    if let Some(f) = rep.failures().next() {
                        return Err(format!("{}: {}", f.name, f.residual));
                    }
                    if let Some(a) = aux.iter().find(|a| !a.passed) {
                        return Err(format!("{}: {}", a.name, a.residual));
                    }
                    Ok(())
                }));
            }
        }
        out
    })
}

fn random_eps(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..2u8)).collect()
}

pub fn criterion5() -> CriterionReport {
    timed(5, "multiplicity-free Fock modules", None, || {
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for &l in SMALL {
            let Ok(c) = cd(l) else { continue };
            let n = c.slots();
            let mut epss = vec![eps_gt(n, 0), eps_gt(n, 1.min(n)), eps_gt(n, n)];
            epss.push(random_eps(&mut rng, n));
            epss.push(random_eps(&mut rng, n));
            let mut seen = std::collections::BTreeSet::new();
            epss.retain(|e| seen.insert(e.clone()));
            for eps in epss {
                let tag: String = eps.iter().map(|e| char::from(b'0' + e)).collect();
                let r = fock_module(&c, &OscParams::with_eps(eps), 8).map_err(|e| e.to_string());
                out.push(Verdict::from_result(format!("weights {l} eps={tag} M=8"), "multiplicity-free weights", r, |m| {
                    for b in m.basis() {
                        let w = m.weight_of_basis(&b).map_err(|e| e.to_string())?;
                        if !w.is_level_zero(&c) {
                            return Err(format!("{b:?} is not level zero"));
                        }
                    }
                    match m.weight_collision(&m.basis()).map_err(|e| e.to_string())? {
                        None => Ok(()),
                        Some((a, b)) => Err(format!("{a:?} and {b:?} share a weight")),
                    }
                }));
            }
        }
        out
    })
}

pub fn criterion6() -> CriterionReport {
    timed(6, "highest vectors of the Fock modules", None, || {
        let mut out = Vec::new();
        for l in ["A1~1", "A2~1", "A3~1", "C2~1", "C3~1", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2"] {
            let Ok(c) = cd(l) else { continue };
            let n = c.slots();
            let ss: Vec<usize> = if c.family() == Some(Family::A) { (1..n).collect() } else { vec![n] };
            for s in ss {
                let r = fock_module(&c, &OscParams::with_eps(eps_gt(n, s)), 8).map_err(|e| e.to_string());
                out.push(Verdict::from_result(format!("highest {l} eps>{s} M=8"), "highest vectors", r, |m| {
                    let mut got = m.highest_vectors();
                    let mut want = m.expected_highest().ok_or("no listed vectors")?;
                    got.sort();
                    want.sort();
                    if got == want {
                        Ok(())
                    } else {
                        Err(format!("found {got:?}, listed {want:?}"))
                    }
                }));
            }
            if n >= 2 {
                let mut eps = vec![0u8; n];
                eps[0] = 1;
                let r = fock_module(&c, &OscParams::with_eps(eps), 8).map_err(|e| e.to_string());
                out.push(Verdict::from_result(format!("highest {l} eps=10.. M=8"), "highest vectors", r, |m| {
                    let got = m.highest_vectors();
                    if got.is_empty() {
                        Ok(())
                    } else {
                        Err(format!("accepted {got:?}"))
                    }
                }));
            }
        }
        out
    })
}

/// The components checked against the closed-form highest l-weights.
pub fn lweight_cases() -> Vec<(&'static str, Component)> {
    let mut cases = Vec::new();
    for s in [1, 2] {
        for l in -2..=2 {
            cases.push(("A2~1", Component::Level(s, l)));
        }
    }
    for t in ["C2~1", "C3~1"] {
        cases.push((t, Component::Plus));
        cases.push((t, Component::Minus));
    }
    for t in ["A2~2", "A4~2", "D3~2", "D4~2"] {
        cases.push((t, Component::Full));
    }
    cases
}

pub fn criterion7() -> CriterionReport {
    timed(7, "highest l-weights of W_s and W", Some(300), || {
        lweight_cases()
            .into_iter()
            .map(|(l, comp)| {
                let r = cd(l).and_then(|c| compare_component(&c, comp, Method::Braid, 8).map_err(|e| e.to_string()));
                let name = match r.as_ref().map(|x| x.pairing) {
                    Ok(Some(Pairing::Flipped)) => format!("lweight {l} {comp:?} (o -> -o)"),
                    _ => format!("lweight {l} {comp:?}"),
                };
                Verdict::from_result(name, "highest l-weights", r, |cmp| {
                    if !cmp.violations.is_empty() {
                        return Err(cmp.violations.join("; "));
                    }
                    if cmp.pairing.is_none() {
                        let f: Vec<String> = cmp.computed.nodes.iter().map(|d| format!("({}, {}, {})", d.f0, d.ratio, d.psi)).collect();
                        return Err(format!("computed (f0, o a, o b) = {}", f.join(" ")));
                    }
                    Ok(())
                })
            })
            .collect()
    })
}

fn unit(n: usize, k: u32) -> Vec<u32> {
    let mut m = vec![0; n];
    m[n - 1] = k;
    m
}

fn expect_eq(name: String, got: &FockVec, want: &FockVec) -> Verdict {
    let ok = got == want;
    Verdict::new(name, "highest l-weight computation", ok, Some(format!("got {got}, expected {want}")))
}

fn zc(s: Scalar, k: i32) -> Coeff {
    coeff(s).mul(&z_pow(k))
}

/// Intermediate actions in the highest l-weight computation.
pub fn checkpoints() -> Result<Vec<Verdict>, String> {
    let mut out = Vec::new();
    let q = Scalar::q();
    let e = |x: crate::scalars::ScalarError| x.to_string();
    let qh = |k: i32| Scalar::v_pow(2 * k);
    for l in ["C2~1", "C3~1"] {
        let c = cd(l)?;
        let n = c.slots();
        let ni = n as i32;
        let alg = Algebra::new(&c).map_err(|x| x.to_string())?;
        let m = w_module(&c, 8).map_err(|x| x.to_string())?;
        let two1 = qint(2, &alg.q_i(1)).map_err(e)?;
        let ra = RootActions::new(&alg, &m.images, n, Method::Braid).map_err(|x| x.to_string())?;
        let v = FockVec::basis(&vec![0; n]);
        let w1 = ra.x(1, &v);
        let c1 = Scalar::q_pow(1 - ni).div(&two1).map_err(e)?;
        out.push(expect_eq(format!("{l}: X_(delta-a_n).v+"), &w1, &FockVec::basis(&unit(n, 2)).scale(&zc(c1, 1))));
        let cp = Scalar::q_pow(-ni - 1).div(&two1).map_err(e)?;
        out.push(expect_eq(format!("{l}: psi_n.v+"), &ra.psi(&v), &v.scale(&zc(cp, 1))));
        let c2 = qh(-2 * ni - 3).neg();
        out.push(expect_eq(format!("{l}: X_(2delta-a_n).v+"), &ra.x(2, &v), &w1.scale(&zc(c2, 1))));
        let vm = FockVec::basis(&unit(n, 1));
        let ra1 = RootActions::new(&alg, &m.images, n - 1, Method::Braid).map_err(|x| x.to_string())?;
        let w1m = ra1.x(1, &vm);
        let c3 = qh(-2 * ni - 1);
        out.push(expect_eq(format!("{l}: X_(2delta-a_(n-1)).v-"), &ra1.x(2, &vm), &w1m.scale(&zc(c3, 1))));
    }
    for l in ["D3~2", "D4~2"] {
        let c = cd(l)?;
        let n = c.slots();
        let ni = n as i32;
        let alg = Algebra::new(&c).map_err(|x| x.to_string())?;
        let m = w_module(&c, 8).map_err(|x| x.to_string())?;
        let ra = RootActions::new(&alg, &m.images, n, Method::Braid).map_err(|x| x.to_string())?;
        let v = FockVec::basis(&vec![0; n]);
        let w1 = ra.x(1, &v);
        let tau = tau_nu(&q.mul(&q)).map_err(e)?;
        let cw = Scalar::q_pow(2 - 2 * ni);
        out.push(expect_eq(format!("{l}: X_(delta-a_n).v"), &w1, &FockVec::basis(&unit(n, 1)).scale(&zc(cw, 1))));
        let cp = Scalar::i().mul(&tau).mul(&Scalar::q_pow(-2 * ni)).neg();
        out.push(expect_eq(format!("{l}: psi_n.v"), &ra.psi(&v), &v.scale(&zc(cp, 1))));
        let c2 = Scalar::i().mul(&Scalar::q_pow(-2 * ni - 1)).neg();
        out.push(expect_eq(format!("{l}: X_(2delta-a_n).v"), &ra.x(2, &v), &w1.scale(&zc(c2, 1))));
    }
    for (l, methods) in [("A4~2", &[Method::Braid, Method::Closed][..]), ("A6~2", &[Method::Closed][..])] {
        let c = cd(l)?;
        let n = c.slots();
        let ni = n as i32;
        let alg = Algebra::new(&c).map_err(|x| x.to_string())?;
        let m = w_module(&c, 8).map_err(|x| x.to_string())?;
        let tau = tau_nu(&q).map_err(e)?;
        let itau = Scalar::i().mul(&tau);
        for &meth in methods {
            let x1 = root_vector(&alg, n, 1, meth).map_err(|x| x.to_string())?;
            let v = FockVec::basis(&vec![0; n]);
            let en = FockVec::basis(&unit(n, 1));
            let c1 = Scalar::q_pow(-2 * ni).mul(&itau);
            out.push(expect_eq(format!("{l} {meth}: X_(delta-a_n).v"), &represent_on(&x1, &m.images, &v), &en.scale(&zc(c1, 1))));
            let c2 = itau.mul(&Scalar::q_pow(-2 * ni - 1));
            out.push(expect_eq(
                format!("{l} {meth}: X_(delta-a_n).|e_n>"),
                &represent_on(&x1, &m.images, &en),
                &FockVec::basis(&unit(n, 2)).scale(&zc(c2, 1)),
            ));
        }
    }
    Ok(out)
}

pub fn criterion8() -> CriterionReport {
    timed(8, "intermediate actions of root vectors", None, || match checkpoints() {
        Ok(v) => v,
        Err(e) => vec![Verdict::new("checkpoints", "highest l-weight computation", false, Some(e))],
    })
}

pub fn criterion9() -> CriterionReport {
    timed(9, "braid and closed root vectors agree on highest vectors", Some(300), || {
        let mut out = Vec::new();
        for l in ["C2~1", "A2~2", "D3~2"] {
            let r: Result<Vec<Verdict>, String> = (|| {
                let c = cd(l)?;
                let alg = Algebra::new(&c).map_err(|x| x.to_string())?;
                let m = component_module(&c, Component::Full, 8).map_err(|x| x.to_string())?;
                let hv = m.highest_vectors();
                let mut vs = Vec::new();
                for i in crate::lweights::closed_nodes(&c) {
                    let xb = root_vector(&alg, i, 1, Method::Braid).map_err(|x| x.to_string())?;
                    let xc = root_vector(&alg, i, 1, Method::Closed).map_err(|x| x.to_string())?;
                    for h in &hv {
                        let v = FockVec::basis(h);
                        let (b, cl) = (represent_on(&xb, &m.images, &v), represent_on(&xc, &m.images, &v));
                        let ok = b == cl;
                        vs.push(Verdict::new(
                            format!("{l} node {i} on {h:?}"),
                            "closed forms of root vectors",
                            ok,
                            Some(format!("braid {b}, closed {cl}")),
                        ));
                    }
                }
                if hv.is_empty() {
                    return Err("no highest vectors".into());
                }
                Ok(vs)
            })();
            match r {
                Ok(v) => out.extend(v),
                Err(e) => out.push(Verdict::new(l, "closed forms of root vectors", false, Some(e))),
            }
        }
        out
    })
}

/// `lambda(K_i)` for the type-`A` family indexed by `s`, and its witness.
pub fn type_a_family(n: usize, s: usize) -> (Vec<Coeff>, Vec<Coeff>) {
    let b = crate::oscillator::b_symbol();
    let bp = |k: i32| b.pow(k).unwrap();
    let q = |k: i32| coeff(Scalar::q_pow(k));
    let ni = n as i32;
    let si = s as i32;
    let mut lambda = vec![crate::oscillator::coeff_one(); n];
    lambda[0] = q(1);
    lambda[s] = lambda[s].mul(&q(-si - 1)).mul(&bp(-ni));
    let t = (s + 1) % n;
    lambda[t] = lambda[t].mul(&q(si)).mul(&bp(ni));
    let mut witness = vec![bp(-1); n];
    for w in witness.iter_mut().take(s) {
        *w = q(-1).mul(&bp(-1));
    }
    witness[s] = q(si).mul(&bp(ni - 1));
    (lambda, witness)
}

/// The displayed highest weights for the families `C`, `A2`, `D`.
pub fn twisted_family(c: &CartanData) -> Vec<Vec<Coeff>> {
    let size = c.size();
    let one = crate::oscillator::coeff_one();
    let v = |k: i32| coeff(Scalar::v_pow(k));
    let iv = |k: i32| coeff(Scalar::i().mul(&Scalar::v_pow(k)));
    let with = |first: Coeff, last: Coeff| {
        let mut l = vec![one.clone(); size];
        l[0] = first;
        l[size - 1] = last;
        l
    };
    match c.family() {
        Some(Family::C) => {
            let mut a = with(v(2), v(-6));
            a[size - 2] = v(2);
            vec![a, with(v(2), v(-2))]
        }
        Some(Family::A2) => vec![with(v(4).neg(), iv(-2))],
        Some(Family::D) => vec![with(iv(4).neg(), iv(-4))],
        _ => Vec::new(),
    }
}

pub fn criterion10() -> CriterionReport {
    timed(10, "highest weights of the weight modules", None, || {
        let mut out = Vec::new();
        for l in ["A2~1", "A3~1"] {
            let r = cd(l).and_then(|c| cor53_solver(&c).map(|s| (c, s)).map_err(|e| e.to_string()));
            out.push(Verdict::from_result(format!("solver {l}"), "highest weights", r, |(c, sols)| {
                let n = c.size();
                let fams: Vec<_> = (0..n).map(|s| type_a_family(n, s)).collect();
                if sols.len() != fams.len() {
                    return Err(format!("{} solutions, {} expected", sols.len(), fams.len()));
                }
                for (lam, wit) in &fams {
                    let hit = sols.iter().any(|s| equal_up_to_signs(&s.lambda, lam) && equal_up_to_signs(&s.witness, wit));
                    if !hit {
                        let w: Vec<String> = wit.iter().map(|x| x.render(&[])).collect();
                        return Err(format!("missing witness {w:?}"));
                    }
                }
                Ok(())
            }));
        }
        for l in ["C2~1", "C3~1", "A2~2", "A4~2", "D3~2", "D4~2"] {
            let r = cd(l).and_then(|c| cor53_solver(&c).map(|s| (c, s)).map_err(|e| e.to_string()));
            out.push(Verdict::from_result(format!("solver {l}"), "highest weights", r, |(c, sols)| {
                let want = twisted_family(c);
                let all_listed = sols.iter().all(|s| want.iter().any(|w| equal_up_to_signs(&s.lambda, w)));
                let all_found = want.iter().all(|w| sols.iter().any(|s| equal_up_to_signs(&s.lambda, w)));
                if all_listed && all_found {
                    Ok(())
                } else {
                    let got: Vec<Vec<String>> =
                        sols.iter().map(|s| s.lambda.iter().map(|x| x.render(&[])).collect()).collect();
                    Err(format!("solved {got:?}"))
                }
            }));
        }
        out
    })
}

pub type CriterionFn = fn() -> CriterionReport;

pub const CRITERIA: [CriterionFn; 10] = [
    criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8, criterion9,
    criterion10,
];
