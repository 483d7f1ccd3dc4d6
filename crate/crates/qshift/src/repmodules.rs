//! Modules built from the shift data: the Laurent-ring modules `S_z(f)`,
//! their finite weight windows, the highest-weight solver, and Fock modules
//! (the oscillator modules `F`, and the explicit `W_s`, `W`).

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanData, CartanError, Family, Weight};
use crate::laurent::{brace, change_of_vars, LaurentError, LaurentPoly, Ring};
use crate::oscillator::{
    act, coeff, coeff_one, dj_images, occ_of, qnum, z_pow, Coeff, DjImages, FockOperator, FockVec, Letter, OscError,
    OscExpr, OscLetter, OscParams,
};
use crate::scalars::{qbinom, tau_nu_kappa, Scalar, ScalarError};

pub type Occ = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("division in {0} is not exact")]
    InexactDivision(String),
    #[error("f-tuple has length {0}, expected {1}")]
    BadTuple(usize, usize),
    #[error("eps has length {0}, expected {1}")]
    BadEps(usize, usize),
    #[error("s = {0} must satisfy 0 < s < {1}")]
    BadS(usize, usize),
    #[error("cutoff {0} is too small")]
    BadCutoff(usize),
    #[error("character point hits a pole")]
    Pole,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Osc(#[from] OscError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn family(cartan: &CartanData) -> Result<Family, ModuleError> {
    cartan.family().ok_or_else(|| ModuleError::Unsupported(cartan.label.to_string()))
}

/// `I_0`: the nodes other than `0`.
pub fn finite_nodes(cartan: &CartanData) -> Vec<usize> {
    (1..cartan.size()).collect()
}

/// Embeds a parameter-only coefficient into a ring with `nv` variables.
pub fn lift(c: &Coeff, nv: usize) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(nv);
    for (e, s) in c.terms() {
        let mut full = vec![0; nv];
        full.extend_from_slice(&e[c.nvars()..]);
        acc = acc.add(&LaurentPoly::monomial(nv, full, s.clone()));
    }
    acc
}

// ---------------------------------------------------------------------------
// Structure elements as products of braces

/// `{coef z_var^exp}_node`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraceFactor {
    pub coef: Coeff,
    /// One-based `z` index.
    pub var: usize,
    pub exp: i32,
    pub node: usize,
}

/// `phi_i = prefactor * prod braces`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFactors {
    pub prefactor: Scalar,
    pub braces: Vec<BraceFactor>,
}

/// The parameter `b` of the family: symbolic for type `A`.
pub fn b_value(cartan: &CartanData) -> Result<Coeff, ModuleError> {
    let i = Scalar::i();
    Ok(match family(cartan)? {
        Family::A => crate::oscillator::b_symbol(),
        Family::C => coeff(i.mul_vpow(-1)),
        Family::A2 => coeff(i.mul_vpow(-2)),
        Family::D => coeff(i.mul_vpow(-4)),
    })
}

/// Factored form of the displayed solution tuple, in terms of `z_j`.
pub fn phi_factors(cartan: &CartanData) -> Result<Vec<PhiFactors>, ModuleError> {
    let fam = family(cartan)?;
    let size = cartan.size();
    let n = size - 1;
    let i = Scalar::i();
    let q_of = |k: usize| cartan.q_of(k);
    let bf = |coef: Coeff, var: usize, exp: i32, node: usize| BraceFactor { coef, var, exp, node };
    let plain = |braces: Vec<BraceFactor>| PhiFactors { prefactor: Scalar::one(), braces };
    let pre = |k: usize| -> Result<Scalar, ModuleError> {
        let qk = q_of(k)?;
        Ok(i.mul(&qk.sub(&qk.inv()?).inv()?))
    };
    let b = b_value(cartan)?;
    let mut out = Vec::with_capacity(size);
    match fam {
        Family::A => {
            let slot = |k: usize| if k % size == 0 { size } else { k % size };
            let qb = b.scale(&Scalar::q());
            for k in 0..size {
                out.push(plain(vec![bf(qb.clone(), slot(k), 1, k), bf(b.clone(), slot(k + 1), 1, k)]));
            }
        }
        Family::C => {
            for k in 0..=n {
                let qkb = b.scale(&q_of(k)?);
                out.push(plain(if k == 0 {
                    vec![bf(qkb, 1, -1, 0), bf(b.clone(), 1, 1, 0)]
                } else if k == n {
                    vec![bf(qkb, n, 1, n), bf(b.clone(), n, -1, n)]
                } else {
                    vec![bf(qkb, k, 1, k), bf(b.clone(), k + 1, 1, k)]
                }));
            }
        }
        Family::A2 => {
            let hi = coeff(i.mul_vpow(2));
            let lo = coeff(i.mul_vpow(-2));
            for k in 0..=n {
                out.push(if k == n {
                    PhiFactors { prefactor: pre(n)?, braces: vec![bf(hi.clone(), n, 1, n)] }
                } else if k == 0 {
                    plain(vec![bf(coeff(i.mul_vpow(-6)), 1, 1, 0), bf(lo.clone(), 1, 1, 0)])
                } else {
                    plain(vec![bf(hi.clone(), k, 1, k), bf(lo.clone(), k + 1, 1, k)])
                });
            }
        }
        Family::D => {
            let hi = coeff(i.mul(&Scalar::q()));
            let lo = coeff(i.mul_vpow(-4));
            for k in 0..=n {
                out.push(if k == 0 {
                    PhiFactors { prefactor: pre(0)?, braces: vec![bf(lo.clone(), 1, 1, 0)] }
                } else if k == n {
                    PhiFactors { prefactor: pre(n)?, braces: vec![bf(hi.clone(), n, 1, n)] }
                } else {
                    plain(vec![bf(hi.clone(), k, 1, k), bf(lo.clone(), k + 1, 1, k)])
                });
            }
        }
    }
    Ok(out)
}

/// Expands factors in a ring where `zvar(j)` is the unit standing for `z_j`.
pub fn expand_phi(
    cartan: &CartanData,
    pf: &PhiFactors,
    nv: usize,
    zvar: &dyn Fn(usize) -> LaurentPoly,
) -> Result<LaurentPoly, ModuleError> {
    let mut acc = LaurentPoly::constant(nv, pf.prefactor.clone());
    for f in &pf.braces {
        let u = lift(&f.coef, nv).mul(&zvar(f.var).pow(f.exp)?);
        acc = acc.mul(&brace(&u, &cartan.q_of(f.node)?)?);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// S_z(f)

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FChoice {
    One,
    Brace,
}

impl FChoice {
    pub fn symbol(self) -> char {
        match self {
            FChoice::One => '1',
            FChoice::Brace => 'B',
        }
    }
}

/// Every tuple in `{1, b z_j - b^{-1} z_j^{-1}}^n`.
pub fn admissible_tuples(n: usize) -> Vec<Vec<FChoice>> {
    (0..1usize << n)
        .map(|mask| (0..n).map(|j| if mask >> j & 1 == 1 { FChoice::Brace } else { FChoice::One }).collect())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    Plus(usize),
    Minus(usize),
    K(usize),
    KInv(usize),
}

/// The module `S_z(f)` on the `z`-ring. `X.u = zeta^{+-1}(u) * (X.1)`, and
/// `K_i` multiplies by `y_i`. The parameter `z` stays symbolic.
#[derive(Clone, Debug)]
pub struct SzModule {
    pub cartan: CartanData,
    pub ring: Ring,
    pub b: LaurentPoly,
    pub f: Vec<LaurentPoly>,
    pub phis: Vec<LaurentPoly>,
    pub plus: Vec<LaurentPoly>,
    pub minus: Vec<LaurentPoly>,
    pub y: Vec<LaurentPoly>,
}

impl SzModule {
    pub fn new(cartan: &CartanData, choice: &[FChoice]) -> Result<SzModule, ModuleError> {
        let ring = Ring::z_ring(cartan)?;
        let nv = ring.nvars();
        if choice.len() != nv {
            return Err(ModuleError::BadTuple(choice.len(), nv));
        }
        let b = lift(&b_value(cartan)?, nv);
        let f = choice
            .iter()
            .enumerate()
            .map(|(j, c)| match c {
                FChoice::One => Ok(ring.one()),
                FChoice::Brace => {
                    let u = b.mul(&ring.var(j));
                    Ok(u.sub(&u.inv()?))
                }
            })
            .collect::<Result<Vec<_>, ModuleError>>()?;
        SzModule::with_f(cartan, f)
    }

    /// Builds the module for an arbitrary tuple `f`; divisions must be exact.
    pub fn with_f(cartan: &CartanData, f: Vec<LaurentPoly>) -> Result<SzModule, ModuleError> {
        let fam = family(cartan)?;
        let ring = Ring::z_ring(cartan)?;
        let nv = ring.nvars();
        if f.len() != nv {
            return Err(ModuleError::BadTuple(f.len(), nv));
        }
        let cv = change_of_vars(cartan)?;
        let b = lift(&b_value(cartan)?, nv);
        let size = cartan.size();
        let zv = |j: usize| ring.var(j - 1);
        let phis = phi_factors(cartan)?
            .iter()
            .map(|pf| expand_phi(cartan, pf, nv, &zv))
            .collect::<Result<Vec<_>, _>>()?;
        let y: Vec<LaurentPoly> = (0..size).map(|i| cv.y_in_z_ring(i)).collect();
        let fj = |j: usize| &f[j - 1];
        let sh = |i: usize, p: i32, x: &LaurentPoly| ring.shift_pow(i, p, x);
        let div = |a: &LaurentPoly, d: &LaurentPoly, what: String| {
            a.div_exact(d).map_err(|_| ModuleError::InexactDivision(what))
        };
        let bz = |j: usize, node: usize| -> Result<LaurentPoly, ModuleError> { Ok(ring.brace(&b.mul(&zv(j)), node)?) };
        let zp = |k: i32| ring.z().pow(k);
        let mut plus = Vec::with_capacity(size);
        let mut minus = Vec::with_capacity(size);
        // the generic middle formulas for node i acting on slots (s, t)
        let middle = |i: usize, s: usize, t: usize, zk: i32| -> Result<(LaurentPoly, LaurentPoly), ModuleError> {
            let p = fj(s).mul(&sh(i, 1, &div(&bz(t, i)?, fj(t), format!("X{i}+"))?)).mul(&zp(zk)?);
            let m = sh(i, -1, &div(&bz(s, i)?, fj(s), format!("X{i}-"))?).mul(fj(t)).mul(&zp(-zk)?);
            Ok((p, m))
        };
        match fam {
            Family::A => {
                let slot = |k: usize| if k % size == 0 { size } else { k % size };
                for i in 0..size {
                    let (p, m) = middle(i, slot(i), slot(i + 1), i32::from(i == 0))?;
                    plus.push(p);
                    minus.push(m);
                }
            }
            _ => {
                let (k1, k2) = fam.kappa();
                let (k1, k2) = (k1 as i32, k2 as i32);
                let n = size - 1;
                for i in 0..=n {
                    if i == 0 {
                        let den = sh(1, -1, fj(1)).pow(k1)?.mul(&sh(0, 1, fj(1)));
                        plus.push(div(&sh(0, 1, &phis[0]), &den, "X0+".into())?.mul(&ring.z()));
                        minus.push(fj(1).mul(&sh(1, 1, fj(1)).pow(k1)?).mul(&zp(-1)?));
                    } else if i == n {
                        plus.push(fj(n).mul(&sh(n - 1, -1, fj(n)).pow(k2)?));
                        let den = sh(n, -1, fj(n)).mul(&sh(n - 1, 1, fj(n)).pow(k2)?);
                        minus.push(div(&phis[n], &den, format!("X{n}-"))?);
                    } else {
                        let (p, m) = middle(i, i, i + 1, 0)?;
                        plus.push(p);
                        minus.push(m);
                    }
                }
            }
        }
        Ok(SzModule { cartan: cartan.clone(), ring, b, f, phis, plus, minus, y })
    }

    pub fn size(&self) -> usize {
        self.cartan.size()
    }

    pub fn structure(&self, g: Generator) -> Result<LaurentPoly, ModuleError> {
        Ok(match g {
            Generator::Plus(i) => self.plus[i].clone(),
            Generator::Minus(i) => self.minus[i].clone(),
            Generator::K(i) => self.y[i].clone(),
            Generator::KInv(i) => self.y[i].inv()?,
        })
    }
}

/// Action of one generator on `u`.
pub fn sz_action(m: &SzModule, g: Generator, u: &LaurentPoly) -> Result<LaurentPoly, ModuleError> {
    let c = m.structure(g)?;
    Ok(match g {
        Generator::Plus(i) => m.ring.shift_pow(i, 1, u).mul(&c),
        Generator::Minus(i) => m.ring.shift_pow(i, -1, u).mul(&c),
        Generator::K(_) | Generator::KInv(_) => u.mul(&c),
    })
}

/// Applies a word of generators, rightmost first.
pub fn sz_word(m: &SzModule, word: &[Generator], u: &LaurentPoly) -> Result<LaurentPoly, ModuleError> {
    let mut r = u.clone();
    for &g in word.iter().rev() {
        r = sz_action(m, g, &r)?;
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct SzCheck {
    pub name: String,
    pub passed: bool,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SzReport {
    pub label: String,
    pub f: String,
    pub checks: Vec<SzCheck>,
}

impl SzReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SzCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(ring: &Ring, name: String, residual: LaurentPoly) -> SzCheck {
    SzCheck { name, passed: residual.is_zero(), residual: ring.render(&residual) }
}

/// Checks the defining relations on `u = 1`. Every word in a relation shifts
/// `u` by the same product of `zeta`s, so this covers all `u`.
pub fn verify_sz_relations(m: &SzModule) -> Result<SzReport, ModuleError> {
    let cartan = &m.cartan;
    let size = m.size();
    let ring = &m.ring;
    let one = ring.one();
    let mut checks = Vec::new();
    for i in 0..size {
        let qi = cartan.q_of(i)?;
        let yinv = m.y[i].inv()?;
        for j in 0..size {
            for (sign, p) in [("+", 1), ("-", -1)] {
                let lhs = m.y[i].mul(&ring.shift_pow(j, p, &yinv));
                let rhs = ring.constant(qi.pow(p * cartan.a[i][j])?);
                checks.push(check(ring, format!("K{i} X{j}{sign} K{i}^-1"), lhs.sub(&rhs)));
            }
            let comm = sz_word(m, &[Generator::Plus(i), Generator::Minus(j)], &one)?
                .sub(&sz_word(m, &[Generator::Minus(j), Generator::Plus(i)], &one)?);
            let target = if i == j { ring.brace(&m.y[i], i)? } else { ring.constant(Scalar::zero()) };
            checks.push(check(ring, format!("[X{i}+, X{j}-]"), comm.sub(&target)));
            if i != j {
                let r = (1 - cartan.a[i][j]) as u32;
                for (sign, mk) in [("+", Generator::Plus as fn(usize) -> Generator), ("-", Generator::Minus)] {
                    let mut acc = ring.constant(Scalar::zero());
                    for k in 0..=r {
                        let mut word = vec![mk(i); (r - k) as usize];
                        word.push(mk(j));
                        word.extend(std::iter::repeat_n(mk(i), k as usize));
                        let c = qbinom(r, k, &qi)?;
                        let c = if k % 2 == 1 { c.neg() } else { c };
                        acc = acc.add(&sz_word(m, &word, &one)?.scale(&c));
                    }
                    checks.push(check(ring, format!("Serre X{i}{sign} X{j}{sign}"), acc));
                }
            }
        }
    }
    let marks = cartan.marks.clone().ok_or_else(|| CartanError::NotAffine(cartan.label.to_string()))?;
    let mut kd = ring.one();
    for (yi, &a) in m.y.iter().zip(&marks) {
        kd = kd.mul(&yi.pow(a as i32)?);
    }
    checks.push(check(ring, "K_delta = 1".into(), kd.sub(&one)));
    let f = m.f.iter().map(|x| ring.render(x)).collect::<Vec<_>>().join(", ");
    Ok(SzReport { label: cartan.label.to_string(), f: format!("({f})"), checks })
}

/// The four identities used for adjacent nodes touching `0` and `n`
/// (types other than `A`), each with both sign choices where they occur.
pub fn auxiliary_identities(m: &SzModule) -> Result<Vec<SzCheck>, ModuleError> {
    let fam = family(&m.cartan)?;
    if fam == Family::A || m.size() < 3 {
        return Err(ModuleError::Unsupported(m.cartan.label.to_string()));
    }
    let (k1, k2) = fam.kappa();
    let (k1, k2) = (k1 as i32, k2 as i32);
    let ring = &m.ring;
    let n = m.size() - 1;
    let sh = |i: usize, p: i32, x: &LaurentPoly| ring.shift_pow(i, p, x);
    let zv = |j: usize| ring.var(j - 1);
    let f1 = &m.f[0];
    let fnn = &m.f[n - 1];
    let bz1 = ring.brace(&m.b.mul(&zv(1)), 1)?;
    let bzn = ring.brace(&m.b.mul(&zv(n)), n - 1)?;
    let mut out = Vec::new();
    out.push(check(
        ring,
        "{b z1}_1 zeta1(phi0) = phi0 zeta0^-1({b z1}_1)".into(),
        bz1.mul(&sh(1, 1, &m.phis[0])).sub(&m.phis[0].mul(&sh(0, -1, &bz1))),
    ));
    for p in [1, -1] {
        let lhs = f1.pow(k1)?.mul(&sh(0, p, &sh(1, p, f1)));
        let rhs = f1.mul(&sh(1, -p, f1).pow(k1)?);
        out.push(check(ring, format!("f1^k1 zeta0^{p} zeta1^{p}(f1) = f1 zeta1^{}(f1)^k1", -p), lhs.sub(&rhs)));
    }
    out.push(check(
        ring,
        format!("{{b z{n}}}_{} phi{n} = zeta{n}^-1({{b z{n}}}) zeta{}^-1(phi{n})", n - 1, n - 1),
        bzn.mul(&m.phis[n]).sub(&sh(n, -1, &bzn).mul(&sh(n - 1, -1, &m.phis[n]))),
    ));
    for p in [1, -1] {
        let lhs = fnn.pow(k2)?.mul(&sh(n - 1, p, &sh(n, p, fnn)));
        let rhs = fnn.mul(&sh(n - 1, -p, fnn).pow(k2)?);
        out.push(check(
            ring,
            format!("f{n}^k2 zeta{}^{p} zeta{n}^{p}(f{n}) = f{n} zeta{}^{}(f{n})^k2", n - 1, n - 1, -p),
            lhs.sub(&rhs),
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Weighting

/// A finite window of the weight module attached to `S_z(f)`: lines are the
/// quotients by maximal ideals at character points `base * v^{offset}`.
#[derive(Clone, Debug)]
pub struct WeightedModule {
    pub base: Vec<Scalar>,
    pub radius: usize,
    /// `v`-exponent offsets of each line's character point.
    pub points: Vec<Vec<i32>>,
    /// `plus[i][line] = Some((target, scalar))` when the target is in the window.
    pub plus: Vec<Vec<Option<(usize, Scalar)>>>,
    pub minus: Vec<Vec<Option<(usize, Scalar)>>>,
    /// `k[i][line] = lambda(K_i)`.
    pub k: Vec<Vec<Scalar>>,
    /// Lines whose neighbours all lie in the window.
    pub interior: Vec<bool>,
}

fn eval_at(f: &LaurentPoly, base: &[Scalar], off: &[i32], b: &Scalar, z: &Scalar) -> Result<Scalar, ModuleError> {
    let mut pt: Vec<Scalar> = base.iter().zip(off).map(|(x, &o)| x.mul_vpow(o)).collect();
    pt.push(b.clone());
    pt.push(z.clone());
    f.eval(&pt).map_err(|_| ModuleError::Pole)
}

/// Lines within graph distance `radius` of `base`. Moving by `X_i^+` sends the
/// point `phi` to `phi * v^{-shift_i}`; the scalar is the structure element
/// evaluated at the target point.
pub fn weighting(
    m: &SzModule,
    base: &[Scalar],
    b: &Scalar,
    z: &Scalar,
    radius: usize,
) -> Result<WeightedModule, ModuleError> {
    let nv = m.ring.nvars();
    if base.len() != nv || base.iter().any(Scalar::is_zero) {
        return Err(ModuleError::Pole);
    }
    let size = m.size();
    let shifts = &m.ring.shifts;
    let step = |p: &[i32], i: usize, s: i32| -> Vec<i32> { p.iter().zip(&shifts[i]).map(|(a, d)| a + s * d).collect() };
    let mut index: HashMap<Vec<i32>, usize> = HashMap::new();
    let mut points = vec![vec![0; nv]];
    let mut depth = vec![0usize];
    index.insert(points[0].clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(l) = queue.pop_front() {
        if depth[l] == radius {
            continue;
        }
        for i in 0..size {
            for s in [-1, 1] {
                let t = step(&points[l], i, s);
                if !index.contains_key(&t) {
                    index.insert(t.clone(), points.len());
                    points.push(t);
                    depth.push(depth[l] + 1);
                    queue.push_back(points.len() - 1);
                }
            }
        }
    }
    let mut plus = vec![Vec::with_capacity(points.len()); size];
    let mut minus = vec![Vec::with_capacity(points.len()); size];
    let mut k = vec![Vec::with_capacity(points.len()); size];
    let mut interior = vec![true; points.len()];
    for (l, p) in points.iter().enumerate() {
        for i in 0..size {
            for (s, store, c) in [(-1, &mut plus, &m.plus[i]), (1, &mut minus, &m.minus[i])] {
                let t = step(p, i, s);
                let entry = match index.get(&t) {
                    Some(&tl) => Some((tl, eval_at(c, base, &t, b, z)?)),
                    None => {
                        interior[l] = false;
                        None
                    }
                };
                store[i].push(entry);
            }
            k[i].push(eval_at(&m.y[i], base, p, b, z)?);
        }
    }
    Ok(WeightedModule { base: base.to_vec(), radius, points, plus, minus, k, interior })
}

impl WeightedModule {
    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn weight(&self, line: usize) -> Vec<Scalar> {
        self.k.iter().map(|row| row[line].clone()).collect()
    }

    /// Every weight occurs on exactly one line of the window.
    pub fn is_multiplicity_free(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        (0..self.dim()).all(|l| seen.insert(self.weight(l)))
    }

    /// `X_i^{+-}` shift the weight by `alpha_i`: `lambda'(K_j) = lambda(K_j) q_i^{+-a_ij}`... checked
    /// in the form `lambda'(K_j) = lambda(K_j) q_j^{+-a_ji}`.
    pub fn moves_by_roots(&self, cartan: &CartanData) -> Result<bool, ModuleError> {
        let size = self.k.len();
        for i in 0..size {
            for (store, p) in [(&self.plus, 1), (&self.minus, -1)] {
                for (l, e) in store[i].iter().enumerate() {
                    if let Some((t, _)) = e {
                        for j in 0..size {
                            let expect = self.k[j][l].mul(&cartan.q_of(j)?.pow(p * cartan.a[j][i])?);
                            if expect != self.k[j][*t] {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// `[X_i^+, X_j^-] = delta_ij {K_i}_i` on every interior line.
    pub fn commutators_hold(&self, cartan: &CartanData) -> Result<bool, ModuleError> {
        let size = self.k.len();
        let get = |s: &Vec<Vec<Option<(usize, Scalar)>>>, i: usize, l: usize| s[i][l].clone();
        for l in (0..self.dim()).filter(|&l| self.interior[l]) {
            for i in 0..size {
                for j in 0..size {
                    let path = |a: &Vec<Vec<Option<(usize, Scalar)>>>, ai, b: &Vec<Vec<Option<(usize, Scalar)>>>, bi| {
                        let (t1, c1) = get(b, bi, l)?;
                        let (t2, c2) = get(a, ai, t1)?;
                        Some((t2, c1.mul(&c2)))
                    };
                    let (Some((t1, c1)), Some((t2, c2))) =
                        (path(&self.plus, i, &self.minus, j), path(&self.minus, j, &self.plus, i))
                    else {
                        continue;
                    };
                    if t1 != t2 {
                        return Ok(false);
                    }
                    let lhs = c1.sub(&c2);
                    let rhs = if i == j {
                        let qi = cartan.q_of(i)?;
                        let kk = &self.k[i][l];
                        kk.sub(&kk.inv()?).div(&qi.sub(&qi.inv()?))?
                    } else {
                        Scalar::zero()
                    };
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// Highest weights of the weight modules

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedWeight {
    /// For each node of `I_0`, the index of the brace factor that vanishes.
    pub vanishing: Vec<usize>,
    /// `m_j = phi(z_j)` for `j = 1..n` (the `+` branch of every sign).
    pub witness: Vec<Coeff>,
    /// `lambda(K_i)` for every node.
    pub lambda: Vec<Coeff>,
}

fn is_sign(c: &Coeff) -> bool {
    c.as_constant().is_some_and(|s| s.is_one() || s.neg().is_one())
}

/// `true` when `a_i / b_i` is `+-1` for every `i`.
pub fn equal_up_to_signs(a: &[Coeff], b: &[Coeff]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| y.inv().map(|yi| is_sign(&x.mul(&yi))).unwrap_or(false))
}

/// Solves `(phi + alpha_i)(zeta_i(phi_i)) = 0` for `i` in `I_0` by choosing
/// which brace factor of each `phi_i` vanishes. For type `A` the variables
/// also satisfy `z_1 ... z_n = 1`. Solutions are returned up to signs.
pub fn cor53_solver(cartan: &CartanData) -> Result<Vec<SolvedWeight>, ModuleError> {
    let fam = family(cartan)?;
    let factors = phi_factors(cartan)?;
    let cv = change_of_vars(cartan)?;
    let nv = cartan.slots();
    let nodes = finite_nodes(cartan);
    let mut out: Vec<SolvedWeight> = Vec::new();
    let counts: Vec<usize> = nodes.iter().map(|&i| factors[i].braces.len()).collect();
    let total: usize = counts.iter().product();
    'pattern: for code in 0..total {
        let mut c = code;
        let choice: Vec<usize> = counts
            .iter()
            .map(|&k| {
                let x = c % k;
                c /= k;
                x
            })
            .collect();
        let mut m: Vec<Option<Coeff>> = vec![None; nv];
        for (&i, &ch) in nodes.iter().zip(&choice) {
            let f = &factors[i].braces[ch];
            let val = f.coef.pow(-f.exp)?;
            match &m[f.var - 1] {
                Some(old) => {
                    if !is_sign(&old.mul(&val.inv()?)) {
                        continue 'pattern;
                    }
                }
                None => m[f.var - 1] = Some(val),
            }
        }
        let free: Vec<usize> = (0..nv).filter(|&j| m[j].is_none()).collect();
        if fam == Family::A {
            let mut prod = coeff_one();
            for x in m.iter().flatten() {
                prod = prod.mul(x);
            }
            match free.len() {
                0 => {
                    if !is_sign(&prod) {
                        continue;
                    }
                }
                1 => m[free[0]] = Some(prod.inv()?),
                _ => continue,
            }
        } else if !free.is_empty() {
            continue;
        }
        let witness: Vec<Coeff> = m.into_iter().map(Option::unwrap).collect();
        let lambda = (0..cartan.size())
            .map(|i| {
                let mut acc = coeff_one();
                for (j, &e) in cv.y_in_z[i].iter().enumerate() {
                    acc = acc.mul(&witness[j].pow(e)?);
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>, ModuleError>>()?;
        if !out.iter().any(|s| equal_up_to_signs(&s.witness, &witness)) {
            out.push(SolvedWeight { vanishing: choice, witness, lambda });
        }
    }
    Ok(out)
}

/// Evaluates `zeta_i(phi_i)` at the character `phi + alpha_i`, where `phi`
/// sends `z_j` to `witness[j]`.
pub fn highest_condition(cartan: &CartanData, witness: &[Coeff], i: usize) -> Result<Coeff, ModuleError> {
    let ring = Ring::z_ring(cartan)?;
    let zv = |j: usize| ring.var(j - 1);
    let pf = &phi_factors(cartan)?[i];
    let phi = expand_phi(cartan, pf, ring.nvars(), &zv)?;
    let shifted = ring.shift_pow(i, 1, &phi);
    let pt: Vec<Coeff> = witness.iter().zip(&ring.shifts[i]).map(|(w, &d)| w.scale(&Scalar::v_pow(-d))).collect();
    Ok(shifted.substitute(&pt)?)
}

// ---------------------------------------------------------------------------
// Fock modules

/// A module on `F^{(x) n}` given by generator images, truncated to `[0, M)^n`
/// for matrix output. Actions on basis vectors are exact.
#[derive(Clone, Debug)]
pub struct FockModule {
    pub cartan: CartanData,
    pub eps: Vec<u8>,
    pub images: DjImages,
    pub cutoff: usize,
}

/// `F^z_{eps,b}`: the oscillator images composed with `rho_{eps_j, b_j}`.
pub fn fock_module(cartan: &CartanData, params: &OscParams, cutoff: usize) -> Result<FockModule, ModuleError> {
    let slots = cartan.slots();
    if params.eps.len() != slots || params.b.len() != slots {
        return Err(ModuleError::BadEps(params.eps.len(), slots));
    }
    if cutoff < 2 {
        return Err(ModuleError::BadCutoff(cutoff));
    }
    let images = dj_images(cartan)?.twisted(params)?;
    Ok(FockModule { cartan: cartan.clone(), eps: params.eps.clone(), images, cutoff })
}

/// `eps_{>s}` as a vector.
pub fn eps_gt(n: usize, s: usize) -> Vec<u8> {
    (1..=n).map(|j| u8::from(j > s)).collect()
}

/// The `s` with `eps = eps_{>s}`, if any.
pub fn eps_shape(eps: &[u8]) -> Option<usize> {
    let s = eps.iter().take_while(|&&e| e == 0).count();
    eps[s..].iter().all(|&e| e == 1).then_some(s)
}

/// Multiplies generator images by signs (`+1`/`-1`); `K^{-1}` follows `K`.
pub fn sign_twist(images: &DjImages, xp: &[i8], xm: &[i8], k: &[i8]) -> DjImages {
    let app = |v: &[OscExpr], s: &[i8]| {
        v.iter().zip(s).map(|(e, &x)| if x < 0 { e.neg() } else { e.clone() }).collect::<Vec<_>>()
    };
    DjImages {
        xp: app(&images.xp, xp),
        xm: app(&images.xm, xm),
        k: app(&images.k, k),
        kinv: app(&images.kinv, k),
        ..images.clone()
    }
}

impl FockModule {
    pub fn slots(&self) -> usize {
        self.images.slots
    }

    pub fn dim(&self) -> usize {
        self.cutoff.pow(self.slots() as u32)
    }

    pub fn basis(&self) -> Vec<Occ> {
        (0..self.dim()).map(|i| occ_of(i, self.cutoff, self.slots())).collect()
    }

    pub fn act(&self, g: Generator, v: &FockVec) -> FockVec {
        let e = match g {
            Generator::Plus(i) => &self.images.xp[i],
            Generator::Minus(i) => &self.images.xm[i],
            Generator::K(i) => &self.images.k[i],
            Generator::KInv(i) => &self.images.kinv[i],
        };
        act(e, v)
    }

    /// Truncated matrices of all generators, in the order `X_i^+, X_i^-, K_i`.
    pub fn generator_matrices(&self) -> Vec<(String, FockOperator)> {
        let mut out = Vec::new();
        for i in 0..self.images.xp.len() {
            out.push((format!("X{i}+"), FockOperator::from_expr(&self.images.xp[i], self.cutoff)));
            out.push((format!("X{i}-"), FockOperator::from_expr(&self.images.xm[i], self.cutoff)));
            out.push((format!("K{i}"), FockOperator::from_expr(&self.images.k[i], self.cutoff)));
        }
        out
    }

    /// `lambda(K_i)` on the basis vector `|m>`.
    pub fn weight_of_basis(&self, m: &[u32]) -> Result<Weight, ModuleError> {
        let v = FockVec::basis(m);
        let values = self
            .images
            .k
            .iter()
            .map(|k| {
                let c = act(k, &v).coeff_of(m);
                c.as_constant().ok_or_else(|| ModuleError::Unsupported(format!("K image is not a scalar on {m:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Weight { values })
    }

    /// Coordinates `(-1)^{eps_j} (m_j + eps_j)` of the weight in the basis of
    /// the characters `delta~_j`.
    pub fn relative_weight(&self, m: &[u32]) -> Vec<i64> {
        m.iter()
            .zip(&self.eps)
            .map(|(&x, &e)| if e == 1 { -(x as i64 + 1) } else { x as i64 })
            .collect()
    }

    /// Weights on `[0, M)^n` are pairwise distinct.
    pub fn is_multiplicity_free(&self) -> Result<bool, ModuleError> {
        Ok(self.weight_collision(&self.basis())?.is_none())
    }

    /// Two vectors of `set` with the same weight, if any.
    pub fn weight_collision(&self, set: &[Occ]) -> Result<Option<(Occ, Occ)>, ModuleError> {
        let mut seen: HashMap<Weight, Occ> = HashMap::new();
        for m in set {
            if let Some(old) = seen.insert(self.weight_of_basis(m)?, m.clone()) {
                return Ok(Some((old, m.clone())));
            }
        }
        Ok(None)
    }

    /// `|m|_eps = sum_j (-1)^{eps_j} m_j`.
    pub fn grade(&self, m: &[u32]) -> i64 {
        m.iter().zip(&self.eps).map(|(&x, &e)| if e == 1 { -(x as i64) } else { x as i64 }).sum()
    }

    /// Basis vectors of `[0, M)^n` with `|m|_eps = l`.
    pub fn graded_component(&self, l: i64) -> Vec<Occ> {
        self.basis().into_iter().filter(|m| self.grade(m) == l).collect()
    }

    /// Basis vectors of `[0, M)^n` with `|m|_eps` of the given parity.
    pub fn parity_component(&self, parity: i64) -> Vec<Occ> {
        self.basis().into_iter().filter(|m| (self.grade(m) - parity).rem_euclid(2) == 0).collect()
    }

    /// Largest change of `|m|_eps` made by any generator on `[0, M)^n`,
    /// together with the gcd of all changes.
    pub fn grade_changes(&self) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for m in self.basis() {
            let v = FockVec::basis(&m);
            for i in 0..self.images.xp.len() {
                for g in [Generator::Plus(i), Generator::Minus(i)] {
                    for t in self.act(g, &v).terms.keys() {
                        out.insert(self.grade(t) - self.grade(&m));
                    }
                }
            }
        }
        out
    }

    /// `|m>` is killed by every `X_i^+` with `i` in `I_0`.
    pub fn highest_vector_check(&self, m: &[u32]) -> bool {
        let v = FockVec::basis(m);
        finite_nodes(&self.cartan).into_iter().all(|i| self.act(Generator::Plus(i), &v).is_zero())
    }

    /// All basis vectors of `[0, M)^n` passing [`Self::highest_vector_check`].
    pub fn highest_vectors(&self) -> Vec<Occ> {
        self.basis().into_iter().filter(|m| self.highest_vector_check(m)).collect()
    }

    /// The listed highest vectors inside `[0, M)^n`, when `eps` has the shape
    /// `eps_{>s}` that the family requires.
    pub fn expected_highest(&self) -> Option<Vec<Occ>> {
        let n = self.slots();
        let s = eps_shape(&self.eps)?;
        let unit = |j: usize, l: u32| {
            let mut m = vec![0; n];
            m[j - 1] = l;
            m
        };
        let mut out = BTreeSet::new();
        match self.cartan.family()? {
            Family::A => {
                for l in 0..self.cutoff as u32 {
                    if s > 0 {
                        out.insert(unit(s, l));
                    }
                    if s < n {
                        out.insert(unit(s + 1, l));
                    }
                }
            }
            Family::C => {
                if s != n {
                    return None;
                }
                out.insert(vec![0; n]);
                out.insert(unit(n, 1));
            }
            Family::A2 | Family::D => {
                if s != n {
                    return None;
                }
                out.insert(vec![0; n]);
            }
        }
        Some(out.into_iter().collect())
    }
}

/// `v_{l,s}` for type `A`: `|l e_s>` for `l >= 0`, `|-l e_{s+1}>` for `l < 0`.
pub fn v_ls(n: usize, l: i64, s: usize) -> Option<Occ> {
    let mut m = vec![0u32; n];
    if l >= 0 && s > 0 && s <= n {
        m[s - 1] = l as u32;
        Some(m)
    } else if l < 0 && s < n {
        m[s] = (-l) as u32;
        Some(m)
    } else {
        None
    }
}

fn osc(nu_v: i32, slots: usize, word: &[(usize, OscLetter)], c: Coeff) -> OscExpr {
    let w: Vec<Letter> = word.iter().map(|&(slot, kind)| Letter { slot, kind }).collect();
    OscExpr::word(nu_v, slots, &w, c)
}

/// `W_s` for `A_{n-1}^(1)` with `0 < s < n`, with `X_0^{+-}` carrying `z^{+-1}`.
pub fn ws_module(n: usize, s: usize, cutoff: usize) -> Result<FockModule, ModuleError> {
    if s == 0 || s >= n {
        return Err(ModuleError::BadS(s, n));
    }
    let cartan = CartanData::parse(&format!("A{}~1", n - 1))?;
    let nu_v = 4;
    use OscLetter::{Ad, A, K};
    let o = |w: &[(usize, OscLetter)], c: Coeff| osc(nu_v, n, w, c);
    let one = coeff_one;
    let q = |k: i32| coeff(Scalar::v_pow(4 * k));
    let mut xp = vec![o(&[(0, Ad), (n - 1, Ad)], z_pow(1))];
    let mut xm = vec![o(&[(0, A), (n - 1, A)], z_pow(-1).scale(&Scalar::from_int(-1)))];
    let mut k = vec![o(&[(0, K(1)), (n - 1, K(1))], q(1))];
    for i in 1..n {
        let (a, b) = (i - 1, i);
        if i < s {
            xp.push(o(&[(a, A), (b, Ad)], one()));
            xm.push(o(&[(a, Ad), (b, A)], one()));
            k.push(o(&[(a, K(-1)), (b, K(1))], one()));
        } else if i == s {
            xp.push(o(&[(a, A), (b, A)], coeff(Scalar::from_int(-1))));
            xm.push(o(&[(a, Ad), (b, Ad)], one()));
            k.push(o(&[(a, K(-1)), (b, K(-1))], q(-1)));
        } else {
            xp.push(o(&[(a, Ad), (b, A)], one()));
            xm.push(o(&[(a, A), (b, Ad)], one()));
            k.push(o(&[(a, K(1)), (b, K(-1))], one()));
        }
    }
    let kinv = k.iter().map(|x| x.inverse_unit()).collect::<Result<Vec<_>, _>>()?;
    let images =
        DjImages { label: cartan.label.to_string(), family: Family::A, nu_v, slots: n, xp, xm, k, kinv };
    Ok(FockModule { cartan, eps: eps_gt(n, s), images, cutoff })
}

/// `W` for the families `C`, `A2`, `D`, with `X_0^{+-}` carrying `z^{+-1}`.
pub fn w_module(cartan: &CartanData, cutoff: usize) -> Result<FockModule, ModuleError> {
    let fam = family(cartan)?;
    if fam == Family::A {
        return Err(ModuleError::Unsupported(cartan.label.to_string()));
    }
    let n = cartan.slots();
    let nu_v = crate::oscillator::nu_v_of(fam);
    let nu = Scalar::v_pow(nu_v);
    let (k1, k2) = fam.kappa();
    let sgn = |e: i64| if e % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
    let ipow = |e: i64| Scalar::i().pow(e as i32);
    use OscLetter::{Ad, A, K};
    let o = |w: &[(usize, OscLetter)], c: Coeff| osc(nu_v, n, w, c);
    let rep = |slot: usize, l: OscLetter, k: i64| vec![(slot, l); (k + 1) as usize];
    let inv_brk = |k: i64| qnum(k + 1, nu_v).inv();
    let mut xp = Vec::with_capacity(n + 1);
    let mut xm = Vec::with_capacity(n + 1);
    let mut kk = Vec::with_capacity(n + 1);
    xp.push(o(&rep(0, Ad, k1), z_pow(1).scale(&inv_brk(k1)?)));
    let c0 = sgn(k1 + k2).neg().mul(&ipow(1 - k1)?).mul(&inv_brk(k1)?).mul(&tau_nu_kappa(&nu, k1)?);
    xm.push(o(&rep(0, A, k1), z_pow(-1).scale(&c0)));
    let k0 = sgn(k1 + k2).mul(&ipow(1 - k1)?).mul_vpow(nu_v * (k1 as i32 + 1) / 2);
    kk.push(o(&[(0, K(k1 as i32 + 1))], coeff(k0)));
    for i in 1..n {
        let (a, b) = (i - 1, i);
        xp.push(o(&[(a, A), (b, Ad)], coeff_one()));
        xm.push(o(&[(a, Ad), (b, A)], coeff_one()));
        kk.push(o(&[(a, K(-1)), (b, K(1))], coeff_one()));
    }
    let cn = ipow(1 + k2)?.mul(&inv_brk(k2)?).mul(&tau_nu_kappa(&nu, k2)?);
    xp.push(o(&rep(n - 1, A, k2), coeff(cn)));
    xm.push(o(&rep(n - 1, Ad, k2), coeff(inv_brk(k2)?)));
    let kn = ipow(1 - k2)?.mul_vpow(-nu_v * (k2 as i32 + 1) / 2);
    kk.push(o(&[(n - 1, K(-(k2 as i32) - 1))], coeff(kn)));
    let kinv = kk.iter().map(|x| x.inverse_unit()).collect::<Result<Vec<_>, _>>()?;
    let images = DjImages { label: cartan.label.to_string(), family: fam, nu_v, slots: n, xp, xm, k: kk, kinv };
    Ok(FockModule { cartan: cartan.clone(), eps: vec![0; n], images, cutoff })
}

/// Signs `(xp, xm, k)` taking `F^z_{eps_{>n}, 1}` to `W`.
pub fn w_twist(fam: Family, size: usize) -> (Vec<i8>, Vec<i8>, Vec<i8>) {
    let (k1, k2) = fam.kappa();
    let s0: i8 = if (k1 + k2 + 1) % 2 == 0 { 1 } else { -1 };
    let sn: i8 = if k2 % 2 == 0 { 1 } else { -1 };
    let mut xp = vec![1; size];
    let mut xm = vec![1; size];
    let mut k = vec![1; size];
    xm[0] = s0;
    k[0] = s0;
    xp[size - 1] = sn;
    k[size - 1] = sn;
    (xp, xm, k)
}

/// Signs taking `F^z_{eps_{>s}, 1}` to `W_s` (both `X_k^{+-}` flipped on the
/// listed nodes).
pub fn ws_twist(n: usize, s: usize) -> Vec<i8> {
    (0..n).map(|k| if k > s { -1 } else { 1 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shiftability::canonical_solution;

    fn c(label: &str) -> CartanData {
        CartanData::parse(label).unwrap()
    }

    #[test]
    fn factors_expand_to_displayed_solution() {
        for label in ["A2~1", "A3~1", "C2~1", "C3~1", "A2~2", "A4~2", "D3~2", "D4~2"] {
            let cartan = c(label);
            let sol = canonical_solution(&cartan).unwrap();
            let cv = change_of_vars(&cartan).unwrap();
            let nv = cartan.size();
            let zv = |j: usize| cv.z_unit(j);
            for (i, pf) in phi_factors(&cartan).unwrap().iter().enumerate() {
                assert_eq!(expand_phi(&cartan, pf, nv, &zv).unwrap(), sol.phis[i], "{label} phi{i}");
            }
        }
    }

    #[test]
    fn sz_relations_small() {
        for label in ["A1~1", "A2~1", "C2~1", "A4~2", "D3~2"] {
            let cartan = c(label);
            for f in admissible_tuples(cartan.slots()) {
                let m = SzModule::new(&cartan, &f).unwrap();
                let r = verify_sz_relations(&m).unwrap();
                let bad: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
                assert!(bad.is_empty(), "{label} {:?}: {bad:?}", f);
            }
        }
    }

    #[test]
    fn auxiliary_and_perturbation() {
        let cartan = c("C2~1");
        let m = SzModule::new(&cartan, &[FChoice::Brace, FChoice::One]).unwrap();
        assert!(auxiliary_identities(&m).unwrap().iter().all(|c| c.passed));
        let ring = Ring::z_ring(&cartan).unwrap();
        let bad = SzModule::with_f(&cartan, vec![ring.var(0).mul(&ring.var(1)), ring.one()]).unwrap();
        assert!(!verify_sz_relations(&bad).unwrap().passed());
    }

    #[test]
    fn plus_one_on_trivial_tuple() {
        let cartan = c("C2~1");
        let m = SzModule::new(&cartan, &[FChoice::One, FChoice::One]).unwrap();
        let ring = &m.ring;
        let direct = ring.shift_pow(1, 1, &ring.brace(&m.b.mul(&ring.var(1)), 1).unwrap());
        assert_eq!(sz_action(&m, Generator::Plus(1), &ring.one()).unwrap(), direct);
    }

    #[test]
    fn weighting_window() {
        let cartan = c("C2~1");
        let m = SzModule::new(&cartan, &[FChoice::Brace, FChoice::One]).unwrap();
        let base = [Scalar::from_int(3), Scalar::from_int(5)];
        let b = Scalar::one();
        let w0 = weighting(&m, &base, &b, &Scalar::from_int(7), 0).unwrap();
        assert_eq!(w0.dim(), 1);
        let w = weighting(&m, &base, &b, &Scalar::from_int(7), 2).unwrap();
        assert!(w.dim() > 1);
        assert!(w.is_multiplicity_free());
        assert!(w.moves_by_roots(&cartan).unwrap());
        assert!(w.commutators_hold(&cartan).unwrap());
    }

    #[test]
    fn solver_c_and_twisted() {
        for label in ["C2~1", "C3~1", "A2~2", "A4~2", "D3~2", "D4~2"] {
            let cartan = c(label);
            let sols = cor53_solver(&cartan).unwrap();
            assert!(!sols.is_empty(), "{label}");
            for s in &sols {
                for i in finite_nodes(&cartan) {
                    assert!(highest_condition(&cartan, &s.witness, i).unwrap().is_zero());
                }
            }
        }
        assert_eq!(cor53_solver(&c("C3~1")).unwrap().len(), 2);
    }

    #[test]
    fn fock_weights_and_grading() {
        let cartan = c("A2~1");
        let m = fock_module(&cartan, &OscParams::with_eps(vec![0, 1, 1]), 4).unwrap();
        // |m> and |m + (1,-1,-1)> share K-eigenvalues; each graded piece is free
        assert_eq!(m.weight_collision(&m.basis()).unwrap().map(|p| m.grade(&p.1) - m.grade(&p.0)).map(i64::abs), Some(3));
        for l in -6..=3 {
            assert!(m.weight_collision(&m.graded_component(l)).unwrap().is_none());
        }
        assert_eq!(m.grade_changes(), BTreeSet::from([0]));
        let cc = c("C2~1");
        let m = fock_module(&cc, &OscParams::with_eps(vec![0, 0]), 4).unwrap();
        assert!(m.grade_changes().iter().all(|d| d % 2 == 0));
        assert_eq!(m.highest_vectors(), m.expected_highest().unwrap());
    }

    #[test]
    fn w_modules_are_twists() {
        for label in ["C2~1", "C3~1", "A2~2", "A4~2", "D3~2", "D4~2"] {
            let cartan = c(label);
            let n = cartan.slots();
            let f = fock_module(&cartan, &OscParams::eps_gt(n, n), 5).unwrap();
            let (xp, xm, k) = w_twist(cartan.family().unwrap(), cartan.size());
            let tw = sign_twist(&f.images, &xp, &xm, &k);
            let w = w_module(&cartan, 5).unwrap();
            assert_eq!(tw.xp, w.images.xp, "{label}");
            assert_eq!(tw.xm, w.images.xm, "{label}");
            assert_eq!(tw.k, w.images.k, "{label}");
        }
        for (n, s) in [(3, 1), (3, 2), (4, 2)] {
            let cartan = c(&format!("A{}~1", n - 1));
            let f = fock_module(&cartan, &OscParams::eps_gt(n, s), 5).unwrap();
            let t = ws_twist(n, s);
            let tw = sign_twist(&f.images, &t, &t, &vec![1; n]);
            let w = ws_module(n, s, 5).unwrap();
            assert_eq!(tw.xp, w.images.xp, "n={n} s={s}");
            assert_eq!(tw.xm, w.images.xm, "n={n} s={s}");
            assert_eq!(tw.k, w.images.k, "n={n} s={s}");
        }
    }
}
