//! The q-shiftability system: verification of candidate tuples, the
//! canonical solutions for the four shiftable affine families, and a
//! classifier driven by degree-vector pruning.
//!
//! The classifier works on term supports only. A product of two terms whose
//! shifted coefficient differs from 1 has to be cancelled by another such
//! product with the same multidegree, otherwise the pair equation fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{is_symmetrizable, CartanData, Family};
use crate::laurent::{brace, change_of_vars, y_monomial, LaurentError, LaurentPoly, Ring};
use crate::scalars::{Rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiftError {
    #[error("type {0} is not shiftable")]
    NotShiftable(String),
    #[error("invalid rank-2 pair ({0}, {1})")]
    InvalidPair(i32, i32),
    #[error("Cartan matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("{0} does not match the template at node {1}")]
    Template(String, usize),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// One Laurent polynomial per node, over the `x`-ring of the type.
#[derive(Clone, Debug)]
pub struct SolutionTuple {
    pub label: String,
    pub ring: Ring,
    pub phis: Vec<LaurentPoly>,
    /// The value of `b` used, or `None` when `b` is left symbolic.
    pub b: Option<Scalar>,
}

impl SolutionTuple {
    pub fn render(&self) -> Vec<String> {
        self.phis.iter().map(|p| self.ring.render(p)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationCheck {
    pub name: String,
    pub passed: bool,
    /// Rendered residual, `"0"` on success.
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionReport {
    pub checks: Vec<EquationCheck>,
}

impl SolutionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `f g - zeta_j^{-1}(f) zeta_i^{-1}(g)`.
pub fn pair_residual(ring: &Ring, f: &LaurentPoly, g: &LaurentPoly, i: usize, j: usize) -> LaurentPoly {
    f.mul(g).sub(&ring.shift(j, true, f).mul(&ring.shift(i, true, g)))
}

/// Whether `(f, g)` is `(i, j)`-shiftable.
pub fn verify_pair_shiftable(ring: &Ring, f: &LaurentPoly, g: &LaurentPoly, i: usize, j: usize) -> bool {
    pair_residual(ring, f, g, i, j).is_zero()
}

/// `zeta_i(phi) - phi - {y_i}_i`.
pub fn diagonal_residual(cartan: &CartanData, ring: &Ring, phi: &LaurentPoly, i: usize) -> Result<LaurentPoly, ShiftError> {
    let y = y_monomial(cartan, i);
    Ok(ring.shift(i, false, phi).sub(phi).sub(&ring.brace(&y, i)?))
}

pub fn verify_solution(tuple: &SolutionTuple, cartan: &CartanData) -> Result<SolutionReport, ShiftError> {
    let ring = &tuple.ring;
    let mut checks = Vec::new();
    for (i, phi) in tuple.phis.iter().enumerate() {
        let r = diagonal_residual(cartan, ring, phi, i)?;
        checks.push(EquationCheck {
            name: format!("shift[{}]", cartan.node_name(i)),
            passed: r.is_zero(),
            residual: ring.render(&r),
        });
    }
    let n = tuple.phis.len();
    for i in 0..n {
        for j in i + 1..n {
            let r = pair_residual(ring, &tuple.phis[i], &tuple.phis[j], i, j);
            checks.push(EquationCheck {
                name: format!("pair[{},{}]", cartan.node_name(i), cartan.node_name(j)),
                passed: r.is_zero(),
                residual: ring.render(&r),
            });
        }
    }
    Ok(SolutionReport { checks })
}

/// `(beta_i^+, phi_{i,0}, beta_i^-)` with `phi = beta^+ y_i + phi_{i,0} + beta^- y_i^{-1}`.
pub fn decompose(cartan: &CartanData, ring: &Ring, phi: &LaurentPoly, i: usize) -> Result<(Scalar, LaurentPoly, Scalar), ShiftError> {
    let y = y_monomial(cartan, i);
    let (ye, _) = y.as_unit().unwrap();
    let yinv: Vec<i32> = ye.iter().map(|x| -x).collect();
    let nv = ring.nvars();
    let mut plus = Scalar::zero();
    let mut minus = Scalar::zero();
    let mut rest = LaurentPoly::zero(nv);
    for (e, c) in phi.terms() {
        if e == ye {
            plus = c.clone();
        } else if *e == yinv {
            minus = c.clone();
        } else if e[i] != 0 {
            return Err(ShiftError::Template(ring.render(phi), cartan.node_name(i)));
        } else {
            rest = rest.add(&LaurentPoly::monomial(nv, e.clone(), c.clone()));
        }
    }
    Ok((plus, rest, minus))
}

/// The template coefficients `beta_i^+ = -q_i (q_i - q_i^{-1})^{-2}` and
/// `beta_i^- = -q_i^{-1} (q_i - q_i^{-1})^{-2}`.
pub fn template_betas(qi: &Scalar) -> (Scalar, Scalar) {
    let qinv = qi.inv().expect("q_i is nonzero");
    let d = qi.sub(&qinv);
    let d2inv = d.mul(&d).inv().expect("q_i is not a root of unity");
    (qi.mul(&d2inv).neg(), qinv.mul(&d2inv).neg())
}

/// Checks that every entry matches the template with the expected betas.
pub fn check_template(tuple: &SolutionTuple, cartan: &CartanData) -> Result<(), ShiftError> {
    for (i, phi) in tuple.phis.iter().enumerate() {
        let (p, _, m) = decompose(cartan, &tuple.ring, phi, i)?;
        let (bp, bm) = template_betas(&tuple.ring.q_of(i));
        if p != bp || m != bm {
            return Err(ShiftError::Template(tuple.ring.render(phi), cartan.node_name(i)));
        }
    }
    Ok(())
}

fn unit(ring: &Ring, c: &Scalar, u: &LaurentPoly) -> LaurentPoly {
    u.mul(&ring.constant(c.clone()))
}

/// The displayed tuple for one of the four families. Type `A` keeps `b`
/// symbolic; the other families use their fixed `b`.
pub fn canonical_solution(cartan: &CartanData) -> Result<SolutionTuple, ShiftError> {
    let fam = cartan.family().ok_or_else(|| ShiftError::NotShiftable(cartan.label.to_string()))?;
    let ring = Ring::x_ring(cartan)?;
    let cv = change_of_vars(cartan)?;
    let size = cartan.size();
    let n = size - 1;
    let z = |j: usize| cv.z_unit(j);
    let zinv = |j: usize| cv.z_unit(j).inv().unwrap();
    let q = Scalar::q();
    let i = Scalar::i();
    let qv = |k: i32| Scalar::v_pow(k);
    let br = |u: LaurentPoly, node: usize| ring.brace(&u, node);
    let mut phis = Vec::with_capacity(size);
    let b;
    match fam {
        Family::A => {
            b = None;
            let bv = ring.b();
            let zslot = |k: usize| if k % size == 0 { z(size) } else { z(k % size) };
            let qb = bv.scale(&q);
            for k in 0..size {
                let f = brace(&qb.mul(&zslot(k)), &q)?.mul(&brace(&bv.mul(&zslot(k + 1)), &q)?);
                phis.push(f);
            }
        }
        Family::C => {
            let bc = i.mul(&qv(-1));
            b = Some(bc.clone());
            for k in 0..=n {
                let qk = ring.q_of(k).mul(&bc);
                let f = if k == 0 {
                    br(unit(&ring, &qk, &zinv(1)), 0)?.mul(&br(unit(&ring, &bc, &z(1)), 0)?)
                } else if k == n {
                    br(unit(&ring, &qk, &z(n)), n)?.mul(&br(unit(&ring, &bc, &zinv(n)), n)?)
                } else {
                    br(unit(&ring, &qk, &z(k)), k)?.mul(&br(unit(&ring, &bc, &z(k + 1)), k)?)
                };
                phis.push(f);
            }
        }
        Family::A2 => {
            b = Some(i.mul(&qv(-2)));
            let c_hi = i.mul(&qv(2));
            let c_lo = i.mul(&qv(-2));
            for k in 0..=n {
                let f = if k == n {
                    let qn = ring.q_of(n);
                    let pre = i.mul(&qn.sub(&qn.inv().unwrap()).inv().unwrap());
                    br(unit(&ring, &c_hi, &z(n)), n)?.scale(&pre)
                } else if k == 0 {
                    br(unit(&ring, &i.mul(&qv(-6)), &z(1)), 0)?.mul(&br(unit(&ring, &c_lo, &z(1)), 0)?)
                } else {
                    br(unit(&ring, &c_hi, &z(k)), k)?.mul(&br(unit(&ring, &c_lo, &z(k + 1)), k)?)
                };
                phis.push(f);
            }
        }
        Family::D => {
            b = Some(i.mul(&qv(-4)));
            let c_hi = i.mul(&q);
            let c_lo = i.mul(&qv(-4));
            for k in 0..=n {
                let f = if k == 0 || k == n {
                    let qk = ring.q_of(k);
                    let pre = i.mul(&qk.sub(&qk.inv().unwrap()).inv().unwrap());
                    let u = if k == 0 { unit(&ring, &c_lo, &z(1)) } else { unit(&ring, &c_hi, &z(n)) };
                    br(u, k)?.scale(&pre)
                } else {
                    br(unit(&ring, &c_hi, &z(k)), k)?.mul(&br(unit(&ring, &c_lo, &z(k + 1)), k)?)
                };
                phis.push(f);
            }
        }
    }
    Ok(SolutionTuple { label: cartan.label.to_string(), ring, phis, b })
}

/// The two worked examples: finite `A_2` and `A_1^(1)`, both with symbolic `b`.
pub fn worked_example(cartan: &CartanData) -> Result<SolutionTuple, ShiftError> {
    let ring = Ring::x_ring(cartan)?;
    let label = cartan.label.to_string();
    let q = Scalar::q();
    let b = ring.b();
    let qb = b.scale(&q);
    let m = |e: &[i32]| ring.mono(e);
    let bq = |u: &LaurentPoly| brace(u, &q);
    let phis = match label.as_str() {
        "A2" => vec![
            bq(&qb.mul(&m(&[1, 0])))?.mul(&bq(&b.mul(&m(&[-1, 1])))?),
            bq(&qb.mul(&m(&[-1, 1])))?.mul(&bq(&b.mul(&m(&[0, -1])))?),
        ],
        "A1~1" => vec![
            bq(&qb.mul(&m(&[1, -1])))?.mul(&bq(&b.mul(&m(&[-1, 1])))?),
            bq(&qb.mul(&m(&[-1, 1])))?.mul(&bq(&b.mul(&m(&[1, -1])))?),
        ],
        _ => return Err(ShiftError::NotShiftable(label)),
    };
    Ok(SolutionTuple { label, ring, phis, b: None })
}

/// Degree window searched for the rank-2 table.
pub const RANK2_WINDOW: i32 = 3;

/// Admissible degree configurations for a connected (or disconnected) pair.
///
/// `s` ranges over `x_j`-degrees of terms of `phi_{i,0}`, `t` over
/// `x_i`-degrees of terms of `phi_{j,0}`, where `lambda = a_ij`, `mu = a_ji`
/// and `|lambda| >= |mu|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank2Feasibility {
    pub lambda: i32,
    pub mu: i32,
    /// Every admissible pair `(S, T)` of degree sets inside the window.
    pub configs: Vec<(BTreeSet<i32>, BTreeSet<i32>)>,
}

impl Rank2Feasibility {
    pub fn is_none(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn s_values(&self) -> BTreeSet<i32> {
        self.configs.iter().flat_map(|(s, _)| s.iter().copied()).collect()
    }

    pub fn t_values(&self) -> BTreeSet<i32> {
        self.configs.iter().flat_map(|(_, t)| t.iter().copied()).collect()
    }

    pub fn phi_i0_may_vanish(&self) -> bool {
        self.configs.iter().any(|(s, _)| s.is_empty())
    }

    pub fn phi_j0_may_vanish(&self) -> bool {
        self.configs.iter().any(|(_, t)| t.is_empty())
    }

    /// Configurations not contained in a larger one.
    pub fn maximal(&self) -> Vec<(BTreeSet<i32>, BTreeSet<i32>)> {
        self.configs
            .iter()
            .filter(|(s, t)| {
                !self.configs.iter().any(|(s2, t2)| (s2 != s || t2 != t) && s.is_subset(s2) && t.is_subset(t2))
            })
            .cloned()
            .collect()
    }
}

impl fmt::Display for Rank2Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            return write!(f, "none");
        }
        let set = |s: &BTreeSet<i32>| {
            let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", v.join(", "))
        };
        let parts: Vec<String> = self
            .maximal()
            .iter()
            .map(|(s, t)| {
                let sp = if s.is_empty() { "phi_i0 = 0".to_string() } else { format!("s in {}", set(s)) };
                let tp = if t.is_empty() { "phi_j0 = 0".to_string() } else { format!("t in {}", set(t)) };
                format!("{sp}, {tp}")
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Whether a multiset of products passes the cancellation test: every
/// multidegree carrying a product with shifted coefficient other than 1 must
/// carry at least two such products.
fn cancellation_ok<K: std::hash::Hash + Eq>(products: impl Iterator<Item = (K, bool)>) -> bool {
    let mut groups: HashMap<K, u32> = HashMap::new();
    for (deg, shifted) in products {
        if shifted {
            *groups.entry(deg).or_insert(0) += 1;
        }
    }
    groups.values().all(|&c| c >= 2)
}

pub fn rank2_feasible(lambda: i32, mu: i32) -> Result<Rank2Feasibility, ShiftError> {
    static CACHE: OnceLock<Mutex<HashMap<(i32, i32), Rank2Feasibility>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(lambda, mu)) {
        return Ok(r.clone());
    }
    let r = rank2_compute(lambda, mu)?;
    cache.lock().unwrap().insert((lambda, mu), r.clone());
    Ok(r)
}

fn rank2_compute(lambda: i32, mu: i32) -> Result<Rank2Feasibility, ShiftError> {
    let connected = lambda < 0 && mu < 0 && (1..=4).contains(&(lambda * mu)) && lambda.abs() >= mu.abs();
    if !(connected || (lambda == 0 && mu == 0)) {
        return Err(ShiftError::InvalidPair(lambda, mu));
    }
    // d_i lambda = d_j mu
    let (di, dj) = if connected { (-mu, -lambda) } else { (1, 1) };
    let window: Vec<i32> = (-RANK2_WINDOW..=RANK2_WINDOW).collect();
    let nsub = 1u32 << window.len();
    let subset = |mask: u32| -> Vec<i32> { window.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x).collect() };
    let mut configs = Vec::new();
    for sm in 0..nsub {
        let s = subset(sm);
        for tm in 0..nsub {
            let t = subset(tm);
            // terms of phi_i and phi_j as (deg_i, deg_j)
            let mut ui: Vec<(i32, i32)> = vec![(2, mu), (-2, -mu)];
            ui.extend(s.iter().map(|&x| (0, x)));
            let mut wj: Vec<(i32, i32)> = vec![(lambda, 2), (-lambda, -2)];
            wj.extend(t.iter().map(|&x| (x, 0)));
            let products = ui.iter().flat_map(|u| {
                wj.iter().map(move |w| {
                    let shifted = dj * u.1 + di * w.0 != 0;
                    ((u.0 + w.0, u.1 + w.1), shifted)
                })
            });
            if cancellation_ok(products) {
                configs.push((s.iter().copied().collect(), t.iter().copied().collect()));
            }
        }
    }
    Ok(Rank2Feasibility { lambda, mu, configs })
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Shiftable { witness: SolutionTuple, report: SolutionReport },
    NotShiftable { reason: String },
    /// Non-affine input: only the necessary conditions are decided.
    NecessaryConditions { passed: bool, reason: String },
}

impl Verdict {
    pub fn is_shiftable(&self) -> bool {
        matches!(self, Verdict::Shiftable { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Shiftable { .. } => "Shiftable",
            Verdict::NotShiftable { .. } => "NotShiftable",
            Verdict::NecessaryConditions { passed: true, .. } => "NecessaryConditionsPassed",
            Verdict::NecessaryConditions { passed: false, .. } => "NecessaryConditionsFailed",
        }
    }
}

/// Outcome of the support search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportSearch {
    /// Supports of `phi_{j,0}` for every node passing all pair tests.
    Found(Vec<Vec<Vec<i32>>>),
    Failed(String),
}

fn rank2_for(cartan: &CartanData, i: usize, j: usize) -> Result<(Rank2Feasibility, bool), ShiftError> {
    let (aij, aji) = (cartan.a[i][j], cartan.a[j][i]);
    if aij.abs() >= aji.abs() {
        Ok((rank2_feasible(aij, aji)?, true))
    } else {
        Ok((rank2_feasible(aji, aij)?, false))
    }
}

/// Searches for term supports of the `phi_{j,0}` compatible with every pair
/// equation, starting from the rank-2 degree tables and the branch-node rule.
pub fn support_search(cartan: &CartanData) -> Result<SupportSearch, ShiftError> {
    let size = cartan.size();
    let name = |p: usize| cartan.node_name(p);
    let mut candidates: Vec<Vec<Vec<i32>>> = Vec::with_capacity(size);
    let mut required = vec![false; size];
    for j in 0..size {
        let nbrs: Vec<usize> = (0..size).filter(|&k| k != j && cartan.a[j][k] != 0).collect();
        let mut allowed: Vec<Vec<i32>> = Vec::new();
        for &k in &nbrs {
            let (r, j_is_i) = rank2_for(cartan, j, k)?;
            if r.is_none() {
                return Ok(SupportSearch::Failed(format!(
                    "pair ({}, {}) with (a_ij, a_ji) = ({}, {}) admits no degree vector",
                    name(j),
                    name(k),
                    r.lambda,
                    r.mu
                )));
            }
            let (vals, may_vanish) = if j_is_i { (r.s_values(), r.phi_i0_may_vanish()) } else { (r.t_values(), r.phi_j0_may_vanish()) };
            if !may_vanish {
                required[j] = true;
            }
            allowed.push(vals.into_iter().collect());
        }
        let mut monos: Vec<Vec<i32>> = vec![vec![0; size]];
        for (idx, &k) in nbrs.iter().enumerate() {
            let mut next = Vec::new();
            for m in &monos {
                for &d in &allowed[idx] {
                    let mut m2 = m.clone();
                    m2[k] = d;
                    next.push(m2);
                }
            }
            monos = next;
        }
        // branch-node rule: degrees in two neighbours never share a sign
        monos.retain(|m| nbrs.iter().all(|&a| nbrs.iter().all(|&b| a == b || m[a] * m[b] <= 0)));
        if required[j] && monos.is_empty() {
            return Ok(SupportSearch::Failed(format!(
                "node {} needs a nonzero phi_0 but no term has non-positive degree products over its neighbours",
                name(j)
            )));
        }
        candidates.push(monos);
    }
    let d: Vec<Rat> = cartan.d.clone();
    let ys: Vec<Vec<i32>> = (0..size).map(|i| (0..size).map(|k| cartan.a[k][i]).collect()).collect();
    let terms_of = |i: usize, supp: &[Vec<i32>]| -> Vec<Vec<i32>> {
        let mut t = vec![ys[i].clone(), ys[i].iter().map(|x| -x).collect()];
        t.extend(supp.iter().cloned());
        t
    };
    let pair_ok = |i: usize, si: &[Vec<i32>], j: usize, sj: &[Vec<i32>]| -> bool {
        let ti = terms_of(i, si);
        let tj = terms_of(j, sj);
        let products = ti.iter().flat_map(|u| {
            tj.iter().map(|w| {
                let ex = &d[j] * Rat::from_integer(u[j].into()) + &d[i] * Rat::from_integer(w[i].into());
                let deg: Vec<i32> = u.iter().zip(w).map(|(a, b)| a + b).collect();
                (deg, !ex.is_zero())
            })
        });
        cancellation_ok(products)
    };
    let mut chosen: Vec<Vec<Vec<i32>>> = Vec::with_capacity(size);
    fn rec(
        j: usize,
        size: usize,
        candidates: &[Vec<Vec<i32>>],
        required: &[bool],
        chosen: &mut Vec<Vec<Vec<i32>>>,
        pair_ok: &dyn Fn(usize, &[Vec<i32>], usize, &[Vec<i32>]) -> bool,
    ) -> bool {
        if j == size {
            return true;
        }
        let c = &candidates[j];
        let total = 1u64 << c.len();
        let start = if required[j] { 1 } else { 0 };
        for mask in start..total {
            let supp: Vec<Vec<i32>> = c.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, m)| m.clone()).collect();
            if (0..j).all(|i| pair_ok(i, &chosen[i], j, &supp)) {
                chosen.push(supp);
                if rec(j + 1, size, candidates, required, chosen, pair_ok) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if rec(0, size, &candidates, &required, &mut chosen, &pair_ok) {
        Ok(SupportSearch::Found(chosen))
    } else {
        Ok(SupportSearch::Failed("no choice of term supports passes every pair equation".into()))
    }
}

fn family_in_range(cartan: &CartanData) -> bool {
    let n = cartan.size() - 1;
    match cartan.family() {
        Some(Family::A) => n >= 1,
        Some(Family::C) | Some(Family::D) => n >= 2,
        Some(Family::A2) => n >= 1,
        None => false,
    }
}

pub fn classify(cartan: &CartanData) -> Result<Verdict, ShiftError> {
    if !is_symmetrizable(cartan) {
        return Err(ShiftError::NotSymmetrizable);
    }
    let search = support_search(cartan)?;
    if !cartan.is_affine() {
        return Ok(match search {
            SupportSearch::Found(_) => Verdict::NecessaryConditions {
                passed: true,
                reason: "degree-vector conditions pass; finite types are outside the affine classification".into(),
            },
            SupportSearch::Failed(r) => Verdict::NecessaryConditions { passed: false, reason: r },
        });
    }
    match search {
        SupportSearch::Failed(reason) => Ok(Verdict::NotShiftable { reason }),
        SupportSearch::Found(_) if family_in_range(cartan) => {
            let witness = canonical_solution(cartan)?;
            let report = verify_solution(&witness, cartan)?;
            Ok(Verdict::Shiftable { witness, report })
        }
        SupportSearch::Found(_) => Ok(Verdict::NotShiftable {
            reason: "degree conditions pass but the type is outside the four shiftable families".into(),
        }),
    }
}

/// Rank-2 table rows in the usual order, for reports.
pub fn rank2_table() -> BTreeMap<&'static str, (i32, i32)> {
    BTreeMap::from([("A2", (-1, -1)), ("B2", (-2, -1)), ("G2", (-3, -1)), ("A1~1", (-2, -2)), ("A2~2", (-4, -1))])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(s: &str) -> CartanData {
        CartanData::parse(s).unwrap()
    }

    fn set(v: &[i32]) -> BTreeSet<i32> {
        v.iter().copied().collect()
    }

    #[test]
    fn rank2_rows() {
        let a2 = rank2_feasible(-1, -1).unwrap();
        assert_eq!(a2.maximal(), vec![(set(&[-1, 1]), set(&[-1, 1]))]);
        assert!(!a2.phi_i0_may_vanish() && !a2.phi_j0_may_vanish());
        let b2 = rank2_feasible(-2, -1).unwrap();
        let mut m = b2.maximal();
        m.sort();
        assert_eq!(m, vec![(set(&[]), set(&[-2, 2])), (set(&[-1, 1]), set(&[0]))]);
        assert!(rank2_feasible(-3, -1).unwrap().is_none());
        let a11 = rank2_feasible(-2, -2).unwrap();
        assert_eq!(a11.maximal(), vec![(set(&[0]), set(&[0]))]);
        let a22 = rank2_feasible(-4, -1).unwrap();
        assert_eq!(a22.maximal(), vec![(set(&[]), set(&[0]))]);
        assert_eq!(rank2_feasible(0, 0).unwrap().maximal(), vec![(set(&[0]), set(&[0]))]);
        assert!(rank2_feasible(-1, -2).is_err());
    }

    #[test]
    fn canonical_tuples_verify() {
        for s in ["A1~1", "A2~1", "A3~1", "C2~1", "C3~1", "A2~2", "A4~2", "D3~2", "D4~2"] {
            let c = cd(s);
            let t = canonical_solution(&c).unwrap();
            let r = verify_solution(&t, &c).unwrap();
            if let Some(f) = r.failures().next() {
                panic!("{s}: {} residual {}", f.name, f.residual);
            }
            check_template(&t, &c).unwrap();
        }
    }

    #[test]
    fn worked_examples_verify() {
        for s in ["A2", "A1~1"] {
            let c = cd(s);
            let t = worked_example(&c).unwrap();
            assert!(verify_solution(&t, &c).unwrap().passed(), "{s}");
        }
        // the A_1^(1) example is the canonical A-type tuple at n = 1
        let c = cd("A1~1");
        assert_eq!(worked_example(&c).unwrap().phis, canonical_solution(&c).unwrap().phis);
    }

    #[test]
    fn perturbed_tuple_fails() {
        let c = cd("A2~2");
        let mut t = canonical_solution(&c).unwrap();
        t.phis[0] = t.phis[0].add(&t.ring.one());
        let r = verify_solution(&t, &c).unwrap();
        assert!(r.checks[0].passed);
        assert!(!r.passed());
    }

    #[test]
    fn pair_examples() {
        let c = cd("A2");
        let r = Ring::x_ring(&c).unwrap();
        assert!(verify_pair_shiftable(&r, &r.one(), &r.one(), 0, 1));
        assert!(!verify_pair_shiftable(&r, &r.var(1), &r.var(0), 0, 1));
    }

    #[test]
    fn classification() {
        for s in ["A1~1", "A2~1", "A3~1", "A4~1", "C2~1", "C3~1", "C4~1", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2", "D5~2"] {
            let v = classify(&cd(s)).unwrap();
            assert!(v.is_shiftable(), "{s}: {v:?}");
            if let Verdict::Shiftable { report, .. } = v {
                assert!(report.passed());
            }
        }
        for s in ["B3~1", "B4~1", "G2~1", "D4~3", "F4~1", "A5~2", "A7~2", "E6~1", "D4~1", "D5~1", "E6~2"] {
            let v = classify(&cd(s)).unwrap();
            assert_eq!(v.name(), "NotShiftable", "{s}: {v:?}");
        }
        assert_eq!(classify(&cd("A2")).unwrap().name(), "NecessaryConditionsPassed");
        assert_eq!(classify(&cd("G2")).unwrap().name(), "NecessaryConditionsFailed");
        assert_eq!(classify(&cd("D4")).unwrap().name(), "NecessaryConditionsFailed");
    }
}
