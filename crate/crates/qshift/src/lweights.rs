//! Root vectors `X_{k d~_i delta - alpha_i}`, the imaginary root vectors
//! `psi~_{i, d~_i}`, the sign map `o`, and highest l-weights of the Fock
//! modules `W_s`, `W`.
//!
//! Highest l-weights are read off through the two eigen-relations
//! `X_{2d~delta-alpha_i}.v = o(i) a X_{d~delta-alpha_i}.v` and
//! `psi~_{i,d~}.v = o(i) b / (q_i - q_i^{-1}) v`, giving
//! `f_i(z) = f_{i,0} (1 - (a - b) z) / (1 - a z)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{real_root_vector, represent_on, Algebra, AlgebraError, AlgebraExpr, DjLetter};
use crate::cartan::{CartanData, CartanError, Family};
use crate::laurent::LaurentError;
use crate::oscillator::{act, coeff, coeff_one, z_pow, Coeff, DjImages, FockVec, Occ};
use crate::repmodules::{FockModule, ModuleError};
use crate::scalars::{qfact, qint, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LWeightError {
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("no root vector for node {1} of {0} by this method")]
    NoRootVector(String, usize),
    #[error("{0:?} is not a highest vector")]
    NotHighest(Occ),
    #[error("X_(2 delta - alpha_{0}).v is not proportional to X_(delta - alpha_{0}).v")]
    NotProportional(usize),
    #[error("psi~_{0}.v is not proportional to v")]
    NotEigen(usize),
    #[error("action at node {0} carries the wrong power of z")]
    ZGrading(usize),
    #[error("K_{0} acts on v by a non-constant")]
    NonConstantWeight(usize),
    #[error("polynomial {0} does not have constant term 1")]
    BadDrinfeld(usize),
    #[error("k must be positive")]
    BadK,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

type Res<T> = Result<T, LWeightError>;

fn family(cartan: &CartanData) -> Res<Family> {
    cartan.family().ok_or_else(|| LWeightError::Unsupported(cartan.label.to_string()))
}

/// How `X_{d~_i delta - alpha_i}` is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `T_{omega~_i} T_i^{-1} X_i^+`, fully expanded.
    Braid,
    /// The leading monomials, exact on highest vectors.
    Closed,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Braid => "braid",
            Method::Closed => "closed",
        })
    }
}

// ---------------------------------------------------------------------------
// Sign map

/// `o: I_0 -> {+1, -1}`, stored by node (entry `0` is unused and zero).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OSign {
    pub values: Vec<i8>,
}

/// The alternating map with `o = +1` on the last node of `I_0`.
pub fn o_sign(cartan: &CartanData) -> OSign {
    let last = cartan.size() - 1;
    let values = (0..cartan.size())
        .map(|i| if i == 0 { 0 } else if (last - i) % 2 == 0 { 1 } else { -1 })
        .collect();
    OSign { values }
}

impl OSign {
    pub fn get(&self, i: usize) -> i8 {
        self.values[i]
    }

    pub fn flipped(&self) -> OSign {
        OSign { values: self.values.iter().map(|&x| -x).collect() }
    }

    /// The alternating map with `o(node) = sigma`.
    pub fn with_value(cartan: &CartanData, node: usize, sigma: i8) -> OSign {
        let o = o_sign(cartan);
        if o.get(node) == sigma {
            o
        } else {
            o.flipped()
        }
    }

    /// Adjacent nodes of `I_0` get opposite signs; in the twisted families
    /// other than `A_{2n}^(2)`, `a_ij = -2` forces `o(i) = 1`.
    pub fn is_valid(&self, cartan: &CartanData) -> bool {
        let size = cartan.size();
        let twisted = cartan.label.twist > 1 && cartan.family() != Some(Family::A2);
        for i in 1..size {
            if self.values[i].abs() != 1 {
                return false;
            }
            for j in 1..size {
                if i == j {
                    continue;
                }
                if cartan.a[i][j] < 0 && self.values[i] == self.values[j] {
                    return false;
                }
                if twisted && cartan.a[i][j] == -2 && self.values[i] != 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Both valid maps, or the single one when it is forced.
    pub fn all_valid(cartan: &CartanData) -> Vec<OSign> {
        let o = o_sign(cartan);
        [o.clone(), o.flipped()].into_iter().filter(|x| x.is_valid(cartan)).collect()
    }
}

// ---------------------------------------------------------------------------
// Root vectors

fn plus_word(alg: &Arc<Algebra>, nodes: &[usize], c: Scalar) -> AlgebraExpr {
    let zero = vec![0; alg.size()];
    AlgebraExpr::monomial(alg, nodes.iter().map(|&j| DjLetter::plus(j)).collect(), zero, c)
}

fn down(from: usize, to: usize) -> Vec<usize> {
    if from < to {
        Vec::new()
    } else {
        (to..=from).rev().collect()
    }
}

/// Nodes for which a closed form is available.
pub fn closed_nodes(cartan: &CartanData) -> Vec<usize> {
    let size = cartan.size();
    let n = size - 1;
    match cartan.family() {
        Some(Family::A) => (1..size).collect(),
        Some(Family::C) => vec![n - 1, n],
        Some(Family::A2) | Some(Family::D) => vec![n],
        None => Vec::new(),
    }
}

/// Nodes with a stored word for `omega~_i`.
pub fn braid_nodes(cartan: &CartanData) -> Vec<usize> {
    (1..cartan.size()).filter(|&i| cartan.reduced_word(i).is_ok()).collect()
}

/// Leading monomials of `X_{delta - alpha_i}`; for `A_{2n}^(2)` the two-term
/// form.
pub fn closed_root_vector(alg: &Arc<Algebra>, i: usize) -> Res<AlgebraExpr> {
    let cartan = &alg.cartan;
    let fam = family(cartan)?;
    let size = cartan.size();
    let n = size - 1;
    let none = || LWeightError::NoRootVector(cartan.label.to_string(), i);
    if !closed_nodes(cartan).contains(&i) {
        return Err(none());
    }
    let q = Scalar::q();
    let qinv = q.inv()?;
    Ok(match fam {
        Family::A => {
            let nn = size as i32;
            let mut w: Vec<usize> = (i + 1..size).collect();
            w.extend(down(i - 1, 1));
            w.push(0);
            plus_word(alg, &w, qinv.neg().pow(nn - 2)?)
        }
        Family::C if i + 1 == n => {
            let mut w = vec![n];
            w.extend(down(n - 2, 1));
            w.push(n - 1);
            w.extend(down(n - 2, 1));
            w.push(0);
            plus_word(alg, &w, Scalar::q_pow(-(n as i32)))
        }
        Family::C => {
            let mut w = Vec::new();
            for j in down(n - 1, 1) {
                w.push(j);
                w.push(j);
            }
            w.push(0);
            let two = qint(2, &alg.q_i(1))?;
            plus_word(alg, &w, qinv.div(&two)?.pow(n as i32 - 1)?)
        }
        Family::A2 => {
            let mut w = down(n - 1, 1);
            w.push(n);
            w.extend(down(n - 1, 1));
            w.push(0);
            let mut w2 = down(n - 1, 1);
            w2.extend(down(n - 1, 1));
            w2.push(0);
            w2.push(n);
            let n = n as i32;
            plus_word(alg, &w, Scalar::q_pow(-2 * n)).sub(&plus_word(alg, &w2, Scalar::q_pow(-2 * n + 1)))
        }
        Family::D => {
            let mut w = down(n - 1, 1);
            w.push(0);
            plus_word(alg, &w, Scalar::q_pow(-2 * n as i32 + 2))
        }
    })
}

/// `psi~ = [X, X_i^+]_{q_i^2}` for `X = X_{d~_i delta - alpha_i}`.
pub fn psi_tilde_of(alg: &Arc<Algebra>, x1: &AlgebraExpr, i: usize) -> Res<AlgebraExpr> {
    let qi = alg.q_i(i);
    Ok(x1.q_commutator(&AlgebraExpr::xp(alg, i), &qi.mul(&qi))?)
}

/// `psi~_{i, d~_i}` from the root vector produced by `method`.
pub fn psi_tilde(alg: &Arc<Algebra>, i: usize, method: Method) -> Res<AlgebraExpr> {
    psi_tilde_of(alg, &root_vector(alg, i, 1, method)?, i)
}

/// `1/[2]_i`, or `1/[3]_n!` at the short end of `A_{2n}^(2)`.
pub fn recursion_prefactor(alg: &Arc<Algebra>, i: usize) -> Res<Scalar> {
    let qi = alg.q_i(i);
    let is_a2_end = alg.cartan.family() == Some(Family::A2) && i + 1 == alg.size();
    Ok(if is_a2_end { qfact(3, &qi)?.inv()? } else { qint(2, &qi)?.inv()? })
}

/// `X_{k d~_i delta - alpha_i}`; `k >= 2` uses the commutator recursion
/// `X_{(k+1)} = c [X_{(k)}, psi~]`.
pub fn root_vector(alg: &Arc<Algebra>, i: usize, k: u32, method: Method) -> Res<AlgebraExpr> {
    if k == 0 {
        return Err(LWeightError::BadK);
    }
    let x1 = match method {
        Method::Braid => {
            if !braid_nodes(&alg.cartan).contains(&i) {
                return Err(LWeightError::NoRootVector(alg.cartan.label.to_string(), i));
            }
            real_root_vector(alg, i, 1)?
        }
        Method::Closed => closed_root_vector(alg, i)?,
    };
    if k == 1 {
        return Ok(x1);
    }
    let psi = psi_tilde_of(alg, &x1, i)?;
    let c = recursion_prefactor(alg, i)?;
    let mut x = x1;
    for _ in 1..k {
        x = x.commutator(&psi).scale(&c);
    }
    Ok(x)
}

/// Actions of `X_{k d~ delta - alpha_i}` and `psi~` on vectors, following the
/// recursion without expanding the nested commutators.
pub struct RootActions<'a> {
    images: &'a DjImages,
    x1: AlgebraExpr,
    psi: AlgebraExpr,
    pref: Coeff,
}

impl<'a> RootActions<'a> {
    pub fn new(alg: &Arc<Algebra>, images: &'a DjImages, i: usize, method: Method) -> Res<Self> {
        let x1 = root_vector(alg, i, 1, method)?;
        let psi = psi_tilde_of(alg, &x1, i)?;
        let pref = coeff(recursion_prefactor(alg, i)?);
        Ok(RootActions { images, x1, psi, pref })
    }

    pub fn psi(&self, w: &FockVec) -> FockVec {
        represent_on(&self.psi, self.images, w)
    }

    pub fn x(&self, k: u32, w: &FockVec) -> FockVec {
        if k <= 1 {
            return represent_on(&self.x1, self.images, w);
        }
        let a = self.x(k - 1, &self.psi(w));
        let b = self.psi(&self.x(k - 1, w));
        a.sub(&b).scale(&self.pref)
    }
}

// ---------------------------------------------------------------------------
// Rational functions in z

/// `num / den` with `num`, `den` polynomials in `z` over `Scalar`.
#[derive(Clone, Debug, Serialize)]
pub struct RationalFn {
    #[serde(serialize_with = "ser_poly")]
    pub num: Coeff,
    #[serde(serialize_with = "ser_poly")]
    pub den: Coeff,
}

fn ser_poly<S: serde::Serializer>(p: &Coeff, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&render_z(p))
}

fn render_z(p: &Coeff) -> String {
    p.render(&[])
}

/// Coefficients of a `b`-free Laurent polynomial in `z`.
fn z_coeffs(p: &Coeff) -> Option<BTreeMap<i32, Scalar>> {
    let mut out = BTreeMap::new();
    for (e, c) in p.terms() {
        if e[0] != 0 {
            return None;
        }
        out.insert(e[1], c.clone());
    }
    Some(out)
}

impl RationalFn {
    pub fn constant(c: Scalar) -> Self {
        RationalFn { num: coeff(c), den: coeff_one() }
    }

    /// `f0 (1 - (a - b) z) / (1 - a z)`.
    pub fn from_shape(f0: &Scalar, a: &Scalar, b: &Scalar) -> Self {
        let z = z_pow(1);
        let num = coeff_one().sub(&z.scale(&a.sub(b))).scale(f0);
        let den = coeff_one().sub(&z.scale(a));
        RationalFn { num, den }
    }

    /// `(c + u) / (1 + c u)` with `u = kappa z`.
    pub fn mobius(c: &Scalar, kappa: &Scalar) -> Self {
        let u = z_pow(1).scale(kappa);
        RationalFn { num: coeff(c.clone()).add(&u), den: coeff_one().add(&u.scale(c)) }
    }

    pub fn equals(&self, o: &RationalFn) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    fn parts(&self) -> Option<(BTreeMap<i32, Scalar>, BTreeMap<i32, Scalar>)> {
        let n = z_coeffs(&self.num)?;
        let d = z_coeffs(&self.den)?;
        let nonneg = n.keys().chain(d.keys()).all(|&e| e >= 0);
        nonneg.then_some((n, d))
    }

    /// `f(0)`, if `f` is regular there.
    pub fn at_zero(&self) -> Option<Scalar> {
        let (n, d) = self.parts()?;
        let d0 = d.get(&0)?;
        let n0 = n.get(&0).cloned().unwrap_or_else(Scalar::zero);
        n0.div(d0).ok()
    }

    /// `f(infinity)`, if `f` is regular there.
    pub fn at_infinity(&self) -> Option<Scalar> {
        let (n, d) = self.parts()?;
        let (&dd, dc) = d.iter().next_back()?;
        match n.iter().next_back() {
            None => Some(Scalar::zero()),
            Some((&nd, _)) if nd < dd => Some(Scalar::zero()),
            Some((&nd, nc)) if nd == dd => nc.div(dc).ok(),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        if self.den == coeff_one() {
            render_z(&self.num)
        } else {
            format!("({}) / ({})", render_z(&self.num), render_z(&self.den))
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---------------------------------------------------------------------------
// l-weights

/// Parameters of `f0 (1 - (a - b) z) / (1 - a z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub f0: Scalar,
    pub a: Scalar,
    pub b: Scalar,
}

/// One rational function per node of `I_0`.
#[derive(Clone, Debug, Serialize)]
pub struct LWeight {
    pub nodes: Vec<usize>,
    pub f: Vec<RationalFn>,
    /// Present when the entry was assembled from `(f0, a, b)`.
    pub shape: Vec<Option<Shape>>,
}

impl LWeight {
    pub fn from_shapes(nodes: Vec<usize>, shapes: Vec<Shape>) -> Self {
        let f = shapes.iter().map(|s| RationalFn::from_shape(&s.f0, &s.a, &s.b)).collect();
        LWeight { nodes, f, shape: shapes.into_iter().map(Some).collect() }
    }

    /// Names of violated invariants: regularity at `0` and infinity and
    /// `f(0) f(infinity) = 1`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, f) in self.nodes.iter().zip(&self.f) {
            match (f.at_zero(), f.at_infinity()) {
                (Some(z0), Some(zi)) => {
                    if !z0.mul(&zi).is_one() {
                        out.push(format!("f_{i}(0) f_{i}(inf) != 1"));
                    }
                }
                _ => out.push(format!("f_{i} is not regular at 0 and inf")),
            }
        }
        out
    }

    pub fn equals(&self, o: &LWeight) -> bool {
        self.nodes == o.nodes && self.f.iter().zip(&o.f).all(|(x, y)| x.equals(y))
    }

    pub fn is_trivial(&self) -> bool {
        self.f.iter().all(|f| f.equals(&RationalFn::constant(Scalar::one())))
    }
}

/// `f_i(z) = q_i^{deg P_i} P_i(q_i^{-2} z) / P_i(z)`, with `q_n^{2 deg}` and
/// `q_n^{-4}` at the short end of `A_{2n}^(2)`. `polys[i - 1]` is `P_i`.
pub fn drinfeld_rational(cartan: &CartanData, polys: &[Coeff]) -> Res<LWeight> {
    let size = cartan.size();
    if polys.len() + 1 != size {
        return Err(LWeightError::Unsupported(format!("{} polynomials for {}", polys.len(), cartan.label)));
    }
    let is_a2 = family(cartan)? == Family::A2;
    let mut f = Vec::new();
    for (idx, p) in polys.iter().enumerate() {
        let i = idx + 1;
        let cs = z_coeffs(p).ok_or(LWeightError::BadDrinfeld(i))?;
        if cs.keys().any(|&e| e < 0) || !cs.get(&0).is_some_and(|c| c.is_one()) {
            return Err(LWeightError::BadDrinfeld(i));
        }
        let deg = *cs.keys().next_back().unwrap();
        let d4 = cartan.d4(i)?;
        let (lead, shift) = if is_a2 && i + 1 == size { (2 * d4, -4 * d4) } else { (d4, -2 * d4) };
        let num = p.rescale(&[0, shift]).scale(&Scalar::v_pow(lead * deg));
        f.push(RationalFn { num, den: p.clone() });
    }
    let n = f.len();
    Ok(LWeight { nodes: (1..size).collect(), f, shape: vec![None; n] })
}

// ---------------------------------------------------------------------------
// Extraction on Fock modules

/// Net occupation change of `X_j^+` per slot.
fn displacement(images: &DjImages, j: usize) -> Vec<i64> {
    let mut d = vec![0i64; images.slots];
    if let Some((w, _)) = images.xp[j].terms().next() {
        for l in w {
            match l.kind {
                crate::oscillator::OscLetter::A => d[l.slot] -= 1,
                crate::oscillator::OscLetter::Ad => d[l.slot] += 1,
                crate::oscillator::OscLetter::K(_) => {}
            }
        }
    }
    d
}

fn d_tilde(cartan: &CartanData, i: usize) -> Res<i32> {
    let dt = &cartan.d_tilde[i];
    if !dt.is_integer() {
        return Err(LWeightError::Unsupported(cartan.label.to_string()));
    }
    Ok(dt.to_integer().to_i32().unwrap())
}

/// Every element of `U^+_{d~_i delta - alpha_i}` kills `v`, because the
/// target occupation is negative somewhere.
pub fn killed_by_displacement(module: &FockModule, v: &[u32], i: usize) -> Res<bool> {
    let cartan = &module.cartan;
    let delta = cartan.delta().ok_or_else(|| LWeightError::Unsupported(cartan.label.to_string()))?;
    let dt = d_tilde(cartan, i)?;
    let mut target: Vec<i64> = v.iter().map(|&x| i64::from(x)).collect();
    for j in 0..cartan.size() {
        let beta_j = i64::from(dt * delta[j] - i32::from(j == i));
        for (t, d) in target.iter_mut().zip(displacement(&module.images, j)) {
            *t += beta_j * d;
        }
    }
    Ok(target.iter().any(|&t| t < 0))
}

/// The scalar `c` with `p = c z^k`.
fn strip_z(p: &Coeff, k: i32) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    let (e, c) = p.as_unit()?;
    (e[0] == 0 && e[1] == k).then(|| c.clone())
}

/// Raw data at one node: `o(i) a`, `o(i) b`, and `f_{i,0} = lambda(K_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeData {
    pub node: usize,
    pub f0: Scalar,
    /// `X_{2 d~ delta - alpha_i}.v / X_{d~ delta - alpha_i}.v`.
    pub ratio: Scalar,
    /// `(q_i - q_i^{-1})` times the eigenvalue of `psi~_{i, d~_i}`.
    pub psi: Scalar,
    /// `X_{d~ delta - alpha_i}.v = 0`.
    pub degenerate: bool,
}

impl NodeData {
    /// `(f0, a, b)` under the sign map `o`.
    pub fn shape(&self, o: &OSign) -> Shape {
        let s = Scalar::from_int(i64::from(o.get(self.node)));
        Shape { f0: self.f0.clone(), a: self.ratio.mul(&s), b: self.psi.mul(&s) }
    }
}

/// `z`-power carried by `X_{k d~ delta - alpha_i}`.
fn z_weight(cartan: &CartanData, i: usize, k: u32) -> Res<i32> {
    let delta = cartan.delta().ok_or_else(|| LWeightError::Unsupported(cartan.label.to_string()))?;
    Ok(k as i32 * d_tilde(cartan, i)? * delta[0])
}

fn check_grading(w: &FockVec, k: i32, i: usize) -> Res<()> {
    for c in w.terms.values() {
        if c.terms().any(|(e, _)| e[1] != k) {
            return Err(LWeightError::ZGrading(i));
        }
    }
    Ok(())
}

/// Computes the data of node `i` on the highest vector `|v>`.
pub fn node_data(alg: &Arc<Algebra>, module: &FockModule, v: &[u32], i: usize, method: Method) -> Res<NodeData> {
    let cartan = &module.cartan;
    let vec = FockVec::basis(v);
    let kv = act(&module.images.k[i], &vec);
    let f0 = kv
        .ratio_to(&vec)
        .and_then(|c| c.as_constant())
        .ok_or(LWeightError::NonConstantWeight(i))?;
    let available = match method {
        Method::Braid => braid_nodes(cartan).contains(&i),
        Method::Closed => closed_nodes(cartan).contains(&i),
    };
    if !available {
        if killed_by_displacement(module, v, i)? {
            return Ok(NodeData { node: i, f0, ratio: Scalar::zero(), psi: Scalar::zero(), degenerate: true });
        }
        return Err(LWeightError::NoRootVector(cartan.label.to_string(), i));
    }
    let ra = RootActions::new(alg, &module.images, i, method)?;
    let w1 = ra.x(1, &vec);
    check_grading(&w1, z_weight(cartan, i, 1)?, i)?;
    let pv = ra.psi(&vec);
    let zk = z_weight(cartan, i, 1)?;
    let pc = pv.ratio_to(&vec).or_else(|| pv.is_zero().then(|| Coeff::zero(0))).ok_or(LWeightError::NotEigen(i))?;
    let pc = strip_z(&pc, zk).ok_or(LWeightError::ZGrading(i))?;
    let qi = alg.q_i(i);
    let psi = pc.mul(&qi.sub(&qi.inv()?));
    if w1.is_zero() {
        if !psi.is_zero() {
            return Err(LWeightError::NotEigen(i));
        }
        return Ok(NodeData { node: i, f0, ratio: Scalar::zero(), psi, degenerate: true });
    }
    let w2 = ra.x(2, &vec);
    check_grading(&w2, z_weight(cartan, i, 2)?, i)?;
    let r = w2.ratio_to(&w1).ok_or(LWeightError::NotProportional(i))?;
    let ratio = strip_z(&r, zk).ok_or(LWeightError::ZGrading(i))?;
    Ok(NodeData { node: i, f0, ratio, psi, degenerate: false })
}

/// `(a, b)` at node `i` under the sign map `o`.
pub fn extract_ab(
    alg: &Arc<Algebra>,
    module: &FockModule,
    v: &[u32],
    i: usize,
    method: Method,
    o: &OSign,
) -> Res<(Scalar, Scalar)> {
    if !module.highest_vector_check(v) {
        return Err(LWeightError::NotHighest(v.to_vec()));
    }
    let s = node_data(alg, module, v, i, method)?.shape(o);
    Ok((s.a, s.b))
}

/// The highest l-weight data of `|v>`, with the sign map still open.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicLWeight {
    pub label: String,
    pub vector: Occ,
    pub method: Method,
    pub nodes: Vec<NodeData>,
}

impl SymbolicLWeight {
    pub fn specialize(&self, o: &OSign) -> LWeight {
        let nodes = self.nodes.iter().map(|d| d.node).collect();
        LWeight::from_shapes(nodes, self.nodes.iter().map(|d| d.shape(o)).collect())
    }
}

/// Highest l-weight of the highest vector `|v>` of `module`.
pub fn lweight_of(alg: &Arc<Algebra>, module: &FockModule, v: &[u32], method: Method) -> Res<SymbolicLWeight> {
    if !module.highest_vector_check(v) {
        return Err(LWeightError::NotHighest(v.to_vec()));
    }
    let nodes = (1..module.cartan.size())
        .map(|i| node_data(alg, module, v, i, method))
        .collect::<Res<Vec<_>>>()?;
    Ok(SymbolicLWeight { label: module.cartan.label.to_string(), vector: v.to_vec(), method, nodes })
}

/// Checks the geometric progression `X_{(k+1)}.v = o(i) a X_{(k)}.v` for
/// `k = 2, ..., kmax - 1`.
pub fn progression_holds(
    alg: &Arc<Algebra>,
    module: &FockModule,
    v: &[u32],
    i: usize,
    method: Method,
    kmax: u32,
) -> Res<bool> {
    let d = node_data(alg, module, v, i, method)?;
    if d.degenerate {
        return Ok(true);
    }
    let ra = RootActions::new(alg, &module.images, i, method)?;
    let vec = FockVec::basis(v);
    let zk = z_weight(&module.cartan, i, 1)?;
    let step = coeff(d.ratio.clone()).mul(&z_pow(zk));
    let mut prev = ra.x(2, &vec);
    for k in 3..=kmax {
        let next = ra.x(k, &vec);
        check_grading(&next, z_weight(&module.cartan, i, k)?, i)?;
        if next != prev.scale(&step) {
            return Ok(false);
        }
        prev = next;
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Closed-form highest l-weights

/// The expected `f` for `W_s^{(l)}`, `W^+`/`W^-`, or `W`, as
/// `(c_i, kappa)` with `f_i = (c_i + u)/(1 + c_i u)`, `u = o(ref) kappa z`
/// (or `u = kappa z` when `ref` is `None`).
#[derive(Clone, Debug)]
pub struct ExpectedLWeight {
    pub c: Vec<Scalar>,
    pub kappa: Scalar,
    pub reference: Option<usize>,
}

impl ExpectedLWeight {
    pub fn specialize(&self, cartan: &CartanData, o: &OSign) -> LWeight {
        let sigma = self.reference.map_or(1, |r| o.get(r));
        let kappa = self.kappa.mul(&Scalar::from_int(i64::from(sigma)));
        let f = self.c.iter().map(|c| RationalFn::mobius(c, &kappa)).collect::<Vec<_>>();
        let n = f.len();
        LWeight { nodes: (1..cartan.size()).collect(), f, shape: vec![None; n] }
    }
}

/// Which component of a `W` module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Component {
    /// `W_s^{(l)}` in type `A`.
    Level(usize, i64),
    /// `W^+` (`v = |0>`).
    Plus,
    /// `W^-` (`v = |e_n>`).
    Minus,
    /// `W` for `A_{2n}^(2)`, `D_{n+1}^(2)`.
    Full,
}

/// The highest vector of a component.
pub fn component_vector(cartan: &CartanData, comp: Component) -> Res<Occ> {
    let n = cartan.slots();
    match comp {
        Component::Level(s, l) => crate::repmodules::v_ls(n, l, s)
            .ok_or_else(|| LWeightError::Unsupported(format!("s = {s}, l = {l}"))),
        Component::Plus | Component::Full => Ok(vec![0; n]),
        Component::Minus => {
            let mut m = vec![0; n];
            m[n - 1] = 1;
            Ok(m)
        }
    }
}

/// The displayed highest l-weights.
pub fn expected_lweight(cartan: &CartanData, comp: Component) -> Res<ExpectedLWeight> {
    let fam = family(cartan)?;
    let size = cartan.size();
    let n = size - 1;
    let q = Scalar::q();
    let qinv = q.inv()?;
    let mut c = vec![Scalar::one(); n];
    let bad = || LWeightError::Unsupported(format!("{comp:?} for {}", cartan.label));
    match (fam, comp) {
        (Family::A, Component::Level(s, l)) => {
            let nn = size as i32;
            for (idx, ci) in c.iter_mut().enumerate() {
                let i = idx + 1;
                let e = if l >= 0 {
                    i64::from(i + 1 == s) * l - i64::from(i == s) * (l + 1)
                } else {
                    i64::from(i == s) * (l - 1) - i64::from(i == s + 1) * l
                };
                *ci = Scalar::q_pow(e as i32);
            }
            Ok(ExpectedLWeight { c, kappa: qinv.neg().pow(nn)?, reference: Some(s) })
        }
        (Family::C, Component::Plus | Component::Minus) => {
            if comp == Component::Plus {
                c[n - 1] = Scalar::v_pow(-2);
            } else {
                c[n - 2] = Scalar::v_pow(2);
                c[n - 1] = Scalar::v_pow(-6);
            }
            Ok(ExpectedLWeight { c, kappa: Scalar::q_pow(-(n as i32) - 1), reference: Some(n) })
        }
        (Family::A2, Component::Full) => {
            let qn = cartan.q_of(n)?;
            c[n - 1] = Scalar::i().mul(&qn.inv()?);
            let tau = crate::scalars::tau_nu(&q)?;
            let kappa = Scalar::i().mul(&tau).mul(&Scalar::q_pow(-2 * n as i32 - 1));
            Ok(ExpectedLWeight { c, kappa, reference: Some(n) })
        }
        (Family::D, Component::Full) => {
            let qn = cartan.q_of(n)?;
            c[n - 1] = Scalar::i().mul(&qn.inv()?);
            Ok(ExpectedLWeight { c, kappa: Scalar::q_pow(-2 * n as i32), reference: None })
        }
        _ => Err(bad()),
    }
}

/// The module carrying a component.
pub fn component_module(cartan: &CartanData, comp: Component, cutoff: usize) -> Res<FockModule> {
    Ok(match comp {
        Component::Level(s, _) => crate::repmodules::ws_module(cartan.size(), s, cutoff)?,
        _ => crate::repmodules::w_module(cartan, cutoff)?,
    })
}

/// How the computed sign-map family lines up with the displayed one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `computed(o) = displayed(o)` for every valid `o`.
    Direct,
    /// `computed(o) = displayed(-o)` for every valid `o`.
    Flipped,
}

/// Outcome of comparing a computed highest l-weight against the display,
/// for every valid sign map.
#[derive(Clone, Debug, Serialize)]
pub struct LWeightComparison {
    pub label: String,
    pub component: Component,
    pub vector: Occ,
    pub method: Method,
    pub computed: SymbolicLWeight,
    pub pairing: Option<Pairing>,
    /// Invariant violations of the computed weights, over all valid `o`.
    pub violations: Vec<String>,
}

impl LWeightComparison {
    pub fn passed(&self) -> bool {
        self.pairing.is_some() && self.violations.is_empty()
    }
}

pub fn compare_component(cartan: &CartanData, comp: Component, method: Method, cutoff: usize) -> Res<LWeightComparison> {
    let alg = Algebra::new(cartan)?;
    let module = component_module(cartan, comp, cutoff)?;
    let v = component_vector(cartan, comp)?;
    let computed = lweight_of(&alg, &module, &v, method)?;
    let expected = expected_lweight(cartan, comp)?;
    let valid = OSign::all_valid(cartan);
    let agrees = |flip: bool| {
        valid.iter().all(|o| {
            let target = if flip { o.flipped() } else { o.clone() };
            (!flip || target.is_valid(cartan))
                && computed.specialize(o).equals(&expected.specialize(cartan, &target))
        })
    };
    let pairing = if agrees(false) {
        Some(Pairing::Direct)
    } else if agrees(true) {
        Some(Pairing::Flipped)
    } else {
        None
    };
    let mut violations: Vec<String> = valid.iter().flat_map(|o| computed.specialize(o).violations()).collect();
    violations.dedup();
    Ok(LWeightComparison {
        label: cartan.label.to_string(),
        component: comp,
        vector: v,
        method,
        computed,
        pairing,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(l: &str) -> CartanData {
        CartanData::parse(l).unwrap()
    }

    #[test]
    fn sign_maps() {
        let d = cd("D4~2");
        assert_eq!(OSign::all_valid(&d).len(), 1);
        assert_eq!(o_sign(&d).get(3), 1);
        assert_eq!(o_sign(&d).get(2), -1);
        let c = cd("C3~1");
        assert_eq!(OSign::all_valid(&c).len(), 2);
        assert!(!OSign { values: vec![0, 1, 1, 1] }.is_valid(&c));
    }

    #[test]
    fn closed_forms_print() {
        let alg = Algebra::new(&cd("D3~2")).unwrap();
        let x = closed_root_vector(&alg, 2).unwrap();
        assert_eq!(x.len(), 1);
        let alg = Algebra::new(&cd("A4~2")).unwrap();
        assert_eq!(closed_root_vector(&alg, 2).unwrap().len(), 2);
        assert!(closed_root_vector(&alg, 1).is_err());
    }

    #[test]
    fn c2_components() {
        let c = cd("C2~1");
        for comp in [Component::Plus, Component::Minus] {
            for m in [Method::Braid, Method::Closed] {
                let r = compare_component(&c, comp, m, 8).unwrap();
                assert!(r.passed(), "{comp:?} {m}: {:?}", r.computed);
            }
        }
    }

    #[test]
    fn drinfeld_shapes() {
        let c = cd("C2~1");
        let one = coeff_one();
        let w = drinfeld_rational(&c, &[one.clone(), one.clone()]).unwrap();
        assert!(w.is_trivial());
        let p = one.sub(&z_pow(1).scale(&Scalar::v_pow(3)));
        let w = drinfeld_rational(&c, &[p.clone(), one]).unwrap();
        assert!(w.violations().is_empty());
        let q1 = c.q_of(1).unwrap();
        let s = Shape { f0: q1.clone(), a: Scalar::v_pow(3), b: Scalar::v_pow(3).sub(&Scalar::v_pow(3).mul(&q1.pow(-2).unwrap())) };
        assert!(w.f[0].equals(&RationalFn::from_shape(&s.f0, &s.a, &s.b)));
        assert!(drinfeld_rational(&c, &[z_pow(1), coeff_one()]).is_err());
    }
}
