//! The quantized oscillator algebra `B_nu`, its Fock representation, the
//! automorphisms `vartheta` and `theta_{b,m}`, and the images of the
//! Drinfeld-Jimbo generators in `B_nu^{(x)n}[z, z^{-1}]`.
//!
//! Expressions in the oscillator generators are kept symbolic ([`OscExpr`]).
//! They act on Fock vectors without any cutoff ([`FockVec`]); truncated
//! matrices ([`FockOperator`]) with shift bounds are used for relation checks.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanData, CartanError, Family};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::scalars::{qbinom, qint, tau_nu, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OscError {
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("slot {0} out of range 1..={1}")]
    BadSlot(usize, usize),
    #[error("parameter b must be a unit")]
    ZeroB,
    #[error("cutoff {0} leaves no interior for {1}")]
    EmptyInterior(usize, String),
    #[error("expression is not invertible: {0}")]
    NotInvertible(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Coefficients: Laurent polynomials in the parameters `b` and `z` only.
pub type Coeff = LaurentPoly;

pub fn coeff(s: Scalar) -> Coeff {
    LaurentPoly::constant(0, s)
}

pub fn coeff_one() -> Coeff {
    LaurentPoly::one(0)
}

pub fn z_pow(k: i32) -> Coeff {
    LaurentPoly::monomial(0, vec![0, k], Scalar::one())
}

/// The symbolic parameter `b`.
pub fn b_symbol() -> Coeff {
    LaurentPoly::b(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OscLetter {
    /// annihilation `a`
    A,
    /// creation `a^+`
    Ad,
    /// `k^p`
    K(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    /// Zero-based slot.
    pub slot: usize,
    pub kind: OscLetter,
}

pub type Word = Vec<Letter>;

/// Noncommutative polynomial in `a_s, a_s^+, k_s^{+-1}` with [`Coeff`]
/// coefficients. Words are normalized: slots sorted, and inside a slot all
/// `k` powers moved to the right.
#[derive(Clone, PartialEq, Eq)]
pub struct OscExpr {
    nu_v: i32,
    slots: usize,
    terms: BTreeMap<Word, Coeff>,
}

fn normalize_word(word: &[Letter], nu_v: i32, slots: usize) -> (i32, Word) {
    let mut factor = 0;
    let mut out = Vec::with_capacity(word.len());
    for s in 0..slots {
        let mut pending = 0;
        for l in word.iter().filter(|l| l.slot == s) {
            match l.kind {
                OscLetter::K(p) => pending += p,
                OscLetter::A => {
                    factor -= pending * nu_v;
                    out.push(*l);
                }
                OscLetter::Ad => {
                    factor += pending * nu_v;
                    out.push(*l);
                }
            }
        }
        if pending != 0 {
            out.push(Letter { slot: s, kind: OscLetter::K(pending) });
        }
    }
    (factor, out)
}

impl OscExpr {
    pub fn zero(nu_v: i32, slots: usize) -> Self {
        OscExpr { nu_v, slots, terms: BTreeMap::new() }
    }

    pub fn scalar(nu_v: i32, slots: usize, c: Coeff) -> Self {
        let mut e = OscExpr::zero(nu_v, slots);
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn one(nu_v: i32, slots: usize) -> Self {
        OscExpr::scalar(nu_v, slots, coeff_one())
    }

    pub fn letter(nu_v: i32, slots: usize, slot: usize, kind: OscLetter) -> Self {
        OscExpr::word(nu_v, slots, &[Letter { slot, kind }], coeff_one())
    }

    pub fn word(nu_v: i32, slots: usize, word: &[Letter], c: Coeff) -> Self {
        let mut e = OscExpr::zero(nu_v, slots);
        e.insert(word, c);
        e
    }

    fn insert(&mut self, word: &[Letter], c: Coeff) {
        if c.is_zero() {
            return;
        }
        let (f, w) = normalize_word(word, self.nu_v, self.slots);
        let c = if f != 0 { c.scale(&Scalar::v_pow(f)) } else { c };
        match self.terms.get_mut(&w) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: &dyn Fn(&Coeff) -> Coeff) -> OscExpr {
        let mut r = OscExpr::zero(self.nu_v, self.slots);
        for (w, c) in &self.terms {
            let c = f(c);
            if !c.is_zero() {
                r.terms.insert(w.clone(), c);
            }
        }
        r
    }

    pub fn nu_v(&self) -> i32 {
        self.nu_v
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &OscExpr) -> OscExpr {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.insert(w, c.clone());
        }
        r
    }

    pub fn neg(&self) -> OscExpr {
        self.scale(&coeff(Scalar::from_int(-1)))
    }

    pub fn sub(&self, o: &OscExpr) -> OscExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coeff) -> OscExpr {
        let mut r = OscExpr::zero(self.nu_v, self.slots);
        for (w, x) in &self.terms {
            r.insert(w, x.mul(c));
        }
        r
    }

    pub fn scale_scalar(&self, s: &Scalar) -> OscExpr {
        self.scale(&coeff(s.clone()))
    }

    pub fn mul(&self, o: &OscExpr) -> OscExpr {
        let mut r = OscExpr::zero(self.nu_v, self.slots);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.insert(&w, c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> OscExpr {
        let mut acc = OscExpr::one(self.nu_v, self.slots);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a single term made of `k` letters only.
    pub fn inverse_unit(&self) -> Result<OscExpr, OscError> {
        if self.terms.len() != 1 {
            return Err(OscError::NotInvertible(self.to_string()));
        }
        let (w, c) = self.terms.iter().next().unwrap();
        let mut inv = Vec::with_capacity(w.len());
        for l in w {
            match l.kind {
                OscLetter::K(p) => inv.push(Letter { slot: l.slot, kind: OscLetter::K(-p) }),
                _ => return Err(OscError::NotInvertible(self.to_string())),
            }
        }
        Ok(OscExpr::word(self.nu_v, self.slots, &inv, c.inv()?))
    }

    /// `xy - p^{-1} yx`.
    pub fn q_commutator(&self, o: &OscExpr, p: &Scalar) -> Result<OscExpr, OscError> {
        Ok(self.mul(o).sub(&o.mul(self).scale_scalar(&p.inv()?)))
    }

    /// Substitutes each letter of `slot` by `f(kind)`.
    pub fn substitute_slot(&self, slot: usize, f: &dyn Fn(OscLetter) -> Result<OscExpr, OscError>) -> Result<OscExpr, OscError> {
        let mut r = OscExpr::zero(self.nu_v, self.slots);
        for (w, c) in &self.terms {
            let mut acc = OscExpr::scalar(self.nu_v, self.slots, c.clone());
            for l in w {
                let img = if l.slot == slot { f(l.kind)? } else { OscExpr::word(self.nu_v, self.slots, &[*l], coeff_one()) };
                acc = acc.mul(&img);
            }
            r = r.add(&acc);
        }
        Ok(r)
    }

    /// Per-slot upward shift bound: largest occupation increase reached by
    /// any prefix (applied right to left) of any word.
    pub fn up_bounds(&self) -> Vec<u32> {
        let mut up = vec![0u32; self.slots];
        for w in self.terms.keys() {
            let mut cur = vec![0i32; self.slots];
            for l in w.iter().rev() {
                match l.kind {
                    OscLetter::A => cur[l.slot] -= 1,
                    OscLetter::Ad => {
                        cur[l.slot] += 1;
                        up[l.slot] = up[l.slot].max(cur[l.slot].max(0) as u32);
                    }
                    OscLetter::K(_) => {}
                }
            }
        }
        up
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let letters: Vec<String> = w
                    .iter()
                    .map(|l| match l.kind {
                        OscLetter::A => format!("a{}", l.slot + 1),
                        OscLetter::Ad => format!("a{}+", l.slot + 1),
                        OscLetter::K(p) => format!("k{}^{}", l.slot + 1, p),
                    })
                    .collect();
                if letters.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", letters.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for OscExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for OscExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `vartheta`: `a^+ -> -a`, `a -> a^+`, `k -> nu^{-1} k^{-1}`.
pub fn vartheta(nu_v: i32, slots: usize, slot: usize, kind: OscLetter) -> OscExpr {
    let l = |k| OscExpr::letter(nu_v, slots, slot, k);
    match kind {
        OscLetter::A => l(OscLetter::Ad),
        OscLetter::Ad => l(OscLetter::A).neg(),
        OscLetter::K(p) => l(OscLetter::K(-p)).scale_scalar(&Scalar::v_pow(-nu_v * p)),
    }
}

/// `theta_{b,m}`: `a -> b k^m a`, `a^+ -> b^{-1} a^+ k^{-m}`, `k -> k`.
pub fn theta(nu_v: i32, slots: usize, slot: usize, b: &Coeff, m: i32, kind: OscLetter) -> Result<OscExpr, OscError> {
    if !b.is_unit() {
        return Err(OscError::ZeroB);
    }
    let l = |k| OscExpr::letter(nu_v, slots, slot, k);
    Ok(match kind {
        OscLetter::A => l(OscLetter::K(m)).mul(&l(OscLetter::A)).scale(b),
        OscLetter::Ad => l(OscLetter::Ad).mul(&l(OscLetter::K(-m))).scale(&b.inv()?),
        OscLetter::K(p) => l(OscLetter::K(p)),
    })
}

/// Applies `vartheta^{eps} o theta_{b,0}` to every letter of `slot`, so that
/// the Fock action of the result is `rho_{eps,b}` of the original.
pub fn twist_slot(expr: &OscExpr, slot: usize, eps: u8, b: &Coeff) -> Result<OscExpr, OscError> {
    let (nu_v, slots) = (expr.nu_v, expr.slots);
    expr.substitute_slot(slot, &|kind| {
        let t = theta(nu_v, slots, slot, b, 0, kind)?;
        if eps == 0 {
            Ok(t)
        } else {
            t.substitute_slot(slot, &|k2| Ok(vartheta(nu_v, slots, slot, k2)))
        }
    })
}

/// Occupation vector.
pub type Occ = Vec<u32>;

/// A vector of the Fock space with finitely many nonzero coordinates.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FockVec {
    pub terms: BTreeMap<Occ, Coeff>,
}

impl FockVec {
    pub fn zero() -> Self {
        FockVec::default()
    }

    pub fn basis(m: &[u32]) -> Self {
        let mut v = FockVec::zero();
        v.terms.insert(m.to_vec(), coeff_one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Occ, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &FockVec) -> FockVec {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &FockVec) -> FockVec {
        self.add(&o.scale(&coeff(Scalar::from_int(-1))))
    }

    pub fn scale(&self, c: &Coeff) -> FockVec {
        let mut r = FockVec::zero();
        for (m, x) in &self.terms {
            r.add_term(m.clone(), x.mul(c));
        }
        r
    }

    /// The coefficient of `|m>`.
    pub fn coeff_of(&self, m: &[u32]) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| LaurentPoly::zero(0))
    }

    /// `c` with `self = c * o`, if the two vectors are proportional.
    pub fn ratio_to(&self, o: &FockVec) -> Option<Coeff> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero(0));
        }
        let (m, c0) = o.terms.iter().next().unwrap();
        let c = self.terms.get(m)?.div_exact(c0).ok()?;
        if *self == o.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let occ: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                format!("({c})|{}>", occ.join(","))
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for FockVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for FockVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `[m]_nu` for `nu = v^{nu_v}`.
pub fn qnum(m: i64, nu_v: i32) -> Scalar {
    qint(m, &Scalar::v_pow(nu_v)).expect("nu is not a root of unity")
}

/// Action of one word on a basis vector; `None` if the result vanishes.
pub fn act_word(word: &[Letter], nu_v: i32, m: &[u32]) -> Option<(Scalar, Occ)> {
    let mut occ = m.to_vec();
    let mut vexp = 0i32;
    let mut c = Scalar::one();
    for l in word.iter().rev() {
        let x = &mut occ[l.slot];
        match l.kind {
            OscLetter::A => {
                if *x == 0 {
                    return None;
                }
                c = c.mul(&qnum(*x as i64, nu_v));
                *x -= 1;
            }
            OscLetter::Ad => *x += 1,
            OscLetter::K(p) => vexp += nu_v * p * (*x as i32),
        }
    }
    Some((c.mul_vpow(vexp), occ))
}

/// Exact action of an expression on a Fock vector.
pub fn act(expr: &OscExpr, v: &FockVec) -> FockVec {
    let mut out = FockVec::zero();
    for (m, c) in &v.terms {
        for (w, wc) in expr.terms() {
            if let Some((s, m2)) = act_word(w, expr.nu_v, m) {
                out.add_term(m2, c.mul(wc).scale(&s));
            }
        }
    }
    out
}

/// Truncated sparse matrix on `[0, M)^n` with per-slot upward shift bounds.
#[derive(Clone, Debug)]
pub struct FockOperator {
    pub cutoff: usize,
    pub arity: usize,
    /// `rows[src]` lists `(target, coefficient)`; indices are mixed-radix.
    pub rows: Vec<Vec<(usize, Coeff)>>,
    pub up: Vec<u32>,
}

pub fn index_of(m: &[u32], cutoff: usize) -> Option<usize> {
    let mut idx = 0usize;
    for &x in m.iter().rev() {
        if x as usize >= cutoff {
            return None;
        }
        idx = idx * cutoff + x as usize;
    }
    Some(idx)
}

pub fn occ_of(mut idx: usize, cutoff: usize, arity: usize) -> Occ {
    let mut m = Vec::with_capacity(arity);
    for _ in 0..arity {
        m.push((idx % cutoff) as u32);
        idx /= cutoff;
    }
    m
}

impl FockOperator {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn from_expr(expr: &OscExpr, cutoff: usize) -> FockOperator {
        let arity = expr.slots;
        let dim = cutoff.pow(arity as u32);
        let rows = (0..dim)
            .map(|src| {
                let m = occ_of(src, cutoff, arity);
                let v = act(expr, &FockVec::basis(&m));
                v.terms.into_iter().filter_map(|(t, c)| index_of(&t, cutoff).map(|i| (i, c))).collect()
            })
            .collect();
        FockOperator { cutoff, arity, rows, up: expr.up_bounds() }
    }

    pub fn identity(cutoff: usize, arity: usize) -> FockOperator {
        let dim = cutoff.pow(arity as u32);
        FockOperator { cutoff, arity, rows: (0..dim).map(|i| vec![(i, coeff_one())]).collect(), up: vec![0; arity] }
    }

    fn merge(row: Vec<(usize, Coeff)>) -> Vec<(usize, Coeff)> {
        let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
        for (t, c) in row {
            let e = acc.entry(t).or_insert_with(|| LaurentPoly::zero(0));
            *e = e.add(&c);
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `self o other`; shift bounds add.
    pub fn compose(&self, other: &FockOperator) -> FockOperator {
        let rows = other
            .rows
            .iter()
            .map(|row| {
                let mut out = Vec::new();
                for (t, c) in row {
                    for (t2, c2) in &self.rows[*t] {
                        out.push((*t2, c.mul(c2)));
                    }
                }
                FockOperator::merge(out)
            })
            .collect();
        let up = self.up.iter().zip(&other.up).map(|(a, b)| a + b).collect();
        FockOperator { cutoff: self.cutoff, arity: self.arity, rows, up }
    }

    /// Sum; shift bounds take the componentwise maximum.
    pub fn add(&self, other: &FockOperator) -> FockOperator {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| FockOperator::merge(a.iter().chain(b.iter()).cloned().collect()))
            .collect();
        let up = self.up.iter().zip(&other.up).map(|(a, b)| *a.max(b)).collect();
        FockOperator { cutoff: self.cutoff, arity: self.arity, rows, up }
    }

    pub fn scale(&self, c: &Coeff) -> FockOperator {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(t, x)| (*t, x.mul(c))).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        FockOperator { cutoff: self.cutoff, arity: self.arity, rows, up: self.up.clone() }
    }

    pub fn sub(&self, other: &FockOperator) -> FockOperator {
        self.add(&other.scale(&coeff(Scalar::from_int(-1))))
    }

    /// Basis vectors whose images under every word stay below the cutoff.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let m = occ_of(i, self.cutoff, self.arity);
                m.iter().zip(&self.up).all(|(x, u)| (*x + *u) < self.cutoff as u32)
            })
            .collect()
    }

    /// First interior basis vector with a nonzero row, if any.
    pub fn first_nonzero_on_interior(&self) -> Option<Occ> {
        self.interior().into_iter().find(|&i| !self.rows[i].is_empty()).map(|i| occ_of(i, self.cutoff, self.arity))
    }
}

/// `a`, `a^+`, `k`, `k^{-1}` on a single slot.
pub struct FockGenerators {
    pub a: FockOperator,
    pub ad: FockOperator,
    pub k: FockOperator,
    pub kinv: FockOperator,
}

pub fn fock_generators(nu_v: i32, cutoff: usize) -> FockGenerators {
    let g = |k| FockOperator::from_expr(&OscExpr::letter(nu_v, 1, 0, k), cutoff);
    FockGenerators { a: g(OscLetter::A), ad: g(OscLetter::Ad), k: g(OscLetter::K(1)), kinv: g(OscLetter::K(-1)) }
}

/// Embeds a one-slot expression into slot `slot` (1-based) of `arity` slots.
pub fn tensor_embed(expr: &OscExpr, slot: usize, arity: usize) -> Result<OscExpr, OscError> {
    if slot == 0 || slot > arity || expr.slots != 1 {
        return Err(OscError::BadSlot(slot, arity));
    }
    let mut r = OscExpr::zero(expr.nu_v, arity);
    for (w, c) in expr.terms() {
        let w2: Word = w.iter().map(|l| Letter { slot: slot - 1, kind: l.kind }).collect();
        r.insert(&w2, c.clone());
    }
    Ok(r)
}

/// Images of `X_i^+`, `X_i^-`, `K_i`, `K_i^{-1}`.
#[derive(Clone, Debug)]
pub struct DjImages {
    pub label: String,
    pub family: Family,
    pub nu_v: i32,
    pub slots: usize,
    pub xp: Vec<OscExpr>,
    pub xm: Vec<OscExpr>,
    pub k: Vec<OscExpr>,
    pub kinv: Vec<OscExpr>,
}

/// `nu` as a power of `v` for each family.
pub fn nu_v_of(f: Family) -> i32 {
    match f {
        Family::A | Family::A2 => 4,
        Family::C => 2,
        Family::D => 8,
    }
}

/// Parameters `(eps, b)` of the composition with `rho_{eps_1,b_1} (x) ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscParams {
    pub eps: Vec<u8>,
    pub b: Vec<Coeff>,
}

impl OscParams {
    pub fn trivial(slots: usize) -> Self {
        OscParams { eps: vec![0; slots], b: vec![coeff_one(); slots] }
    }

    /// `eps_{>s}`: zeros in slots `1..=s`, ones after.
    pub fn eps_gt(slots: usize, s: usize) -> Self {
        OscParams { eps: (1..=slots).map(|j| u8::from(j > s)).collect(), b: vec![coeff_one(); slots] }
    }

    pub fn with_eps(eps: Vec<u8>) -> Self {
        let n = eps.len();
        OscParams { eps, b: vec![coeff_one(); n] }
    }
}

pub fn dj_images(cartan: &CartanData) -> Result<DjImages, OscError> {
    let fam = cartan.family().ok_or_else(|| OscError::Unsupported(cartan.label.to_string()))?;
    let size = cartan.size();
    let slots = cartan.slots();
    let nu_v = nu_v_of(fam);
    let nu = Scalar::v_pow(nu_v);
    let l = |s: usize, k: OscLetter| OscExpr::letter(nu_v, slots, s, k);
    let a = |s: usize| l(s, OscLetter::A);
    let ad = |s: usize| l(s, OscLetter::Ad);
    let k = |s: usize, p: i32| l(s, OscLetter::K(p));
    let sc = |c: Scalar| coeff(c);
    let two = qnum(2, nu_v);
    let inv2 = two.inv()?;
    let i = Scalar::i();
    let tau = tau_nu(&nu)?;
    let mut xp = Vec::with_capacity(size);
    let mut xm = Vec::with_capacity(size);
    let mut kk = Vec::with_capacity(size);
    let mid = |node: usize, s1: usize, s2: usize, zp: i32| {
        (
            a(s1).mul(&ad(s2)).scale(&z_pow(zp)),
            ad(s1).mul(&a(s2)).scale(&z_pow(-zp)),
            k(s1, -1).mul(&k(s2, 1)),
            node,
        )
    };
    match fam {
        Family::A => {
            let n = slots;
            let slot = |s: usize| (s + n - 1) % n;
            for node in 0..size {
                let (p, m, kx, _) = mid(node, slot(node), slot(node + 1), i32::from(node == 0));
                xp.push(p);
                xm.push(m);
                kk.push(kx);
            }
        }
        _ => {
            let n = slots;
            for node in 0..=n {
                if node == 0 {
                    match fam {
                        Family::C | Family::A2 => {
                            xp.push(ad(0).pow(2).scale(&z_pow(1)).scale_scalar(&inv2));
                            xm.push(a(0).pow(2).scale(&z_pow(-1)).scale_scalar(&inv2));
                            kk.push(k(0, 2).scale(&sc(nu.neg())));
                        }
                        _ => {
                            xp.push(ad(0).scale(&z_pow(1)));
                            xm.push(a(0).scale(&z_pow(-1)).scale_scalar(&i.mul(&tau)));
                            kk.push(k(0, 1).scale(&sc(i.mul(&Scalar::v_pow(nu_v / 2)).neg())));
                        }
                    }
                } else if node == n {
                    match fam {
                        Family::C => {
                            xp.push(a(n - 1).pow(2).scale_scalar(&inv2));
                            xm.push(ad(n - 1).pow(2).scale_scalar(&inv2));
                            kk.push(k(n - 1, -2).scale(&sc(nu.inv()?.neg())));
                        }
                        _ => {
                            xp.push(a(n - 1).scale_scalar(&i.mul(&tau)));
                            xm.push(ad(n - 1));
                            kk.push(k(n - 1, -1).scale(&sc(i.mul(&Scalar::v_pow(-nu_v / 2)))));
                        }
                    }
                } else {
                    let (p, m, kx, _) = mid(node, node - 1, node, 0);
                    xp.push(p);
                    xm.push(m);
                    kk.push(kx);
                }
            }
        }
    }
    let kinv = kk.iter().map(|x| x.inverse_unit()).collect::<Result<Vec<_>, _>>()?;
    Ok(DjImages { label: cartan.label.to_string(), family: fam, nu_v, slots, xp, xm, k: kk, kinv })
}

impl DjImages {
    /// Images composed with `rho_{eps_1,b_1} (x) ... (x) rho_{eps_n,b_n}`,
    /// expressed again in oscillator letters acting through `rho`.
    pub fn twisted(&self, params: &OscParams) -> Result<DjImages, OscError> {
        let tw = |e: &OscExpr| -> Result<OscExpr, OscError> {
            let mut r = e.clone();
            for s in 0..self.slots {
                r = twist_slot(&r, s, params.eps[s], &params.b[s])?;
            }
            Ok(r)
        };
        let map = |v: &[OscExpr]| v.iter().map(&tw).collect::<Result<Vec<_>, _>>();
        Ok(DjImages {
            label: self.label.clone(),
            family: self.family,
            nu_v: self.nu_v,
            slots: self.slots,
            xp: map(&self.xp)?,
            xm: map(&self.xm)?,
            k: map(&self.k)?,
            kinv: map(&self.kinv)?,
        })
    }

    /// Applies `f` to every coefficient of every image.
    pub fn map_coeffs(&self, f: &dyn Fn(&Coeff) -> Coeff) -> DjImages {
        let map = |v: &[OscExpr]| v.iter().map(|e| e.map_coeffs(f)).collect();
        DjImages { xp: map(&self.xp), xm: map(&self.xm), k: map(&self.k), kinv: map(&self.kinv), ..self.clone() }
    }

    /// Image of `K_beta` for `beta` in simple-root coordinates.
    pub fn k_beta(&self, beta: &[i32]) -> OscExpr {
        let mut acc = OscExpr::one(self.nu_v, self.slots);
        for (i, &b) in beta.iter().enumerate() {
            let f = if b >= 0 { &self.k[i] } else { &self.kinv[i] };
            acc = acc.mul(&f.pow(b.unsigned_abs()));
        }
        acc
    }

    /// Image of `K_delta`.
    pub fn k_delta(&self, cartan: &CartanData) -> Result<OscExpr, OscError> {
        let d = cartan.delta().ok_or_else(|| OscError::Unsupported(cartan.label.to_string()))?;
        Ok(self.k_beta(&d))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    pub interior: usize,
    pub first_failure: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub label: String,
    pub cutoff: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

enum Rel {
    Zero(String, OscExpr),
}

/// The defining relations as expressions that must vanish.
fn relation_exprs(img: &DjImages, cartan: &CartanData) -> Result<Vec<Rel>, OscError> {
    let size = cartan.size();
    let name = |p: usize| cartan.node_name(p);
    let one = OscExpr::one(img.nu_v, img.slots);
    let mut rels = Vec::new();
    for i in 0..size {
        rels.push(Rel::Zero(format!("K{}K{}^-1=1", name(i), name(i)), img.k[i].mul(&img.kinv[i]).sub(&one)));
        for j in i + 1..size {
            rels.push(Rel::Zero(format!("K{}K{}=K{}K{}", name(i), name(j), name(j), name(i)), img.k[i].mul(&img.k[j]).sub(&img.k[j].mul(&img.k[i]))));
        }
    }
    for i in 0..size {
        let qv = cartan.d4(i)?;
        for j in 0..size {
            let e = qv * cartan.a[i][j];
            let conj = |x: &OscExpr| img.k[i].mul(x).mul(&img.kinv[i]);
            rels.push(Rel::Zero(
                format!("K{}X{}+K{}^-1", name(i), name(j), name(i)),
                conj(&img.xp[j]).sub(&img.xp[j].scale_scalar(&Scalar::v_pow(e))),
            ));
            rels.push(Rel::Zero(
                format!("K{}X{}-K{}^-1", name(i), name(j), name(i)),
                conj(&img.xm[j]).sub(&img.xm[j].scale_scalar(&Scalar::v_pow(-e))),
            ));
        }
    }
    for i in 0..size {
        for j in 0..size {
            let comm = img.xp[i].mul(&img.xm[j]).sub(&img.xm[j].mul(&img.xp[i]));
            let rhs = if i == j {
                let qi = Scalar::v_pow(cartan.d4(i)?);
                let den = qi.sub(&qi.inv()?).inv()?;
                img.k[i].sub(&img.kinv[i]).scale_scalar(&den)
            } else {
                OscExpr::zero(img.nu_v, img.slots)
            };
            rels.push(Rel::Zero(format!("[X{}+,X{}-]", name(i), name(j)), comm.sub(&rhs)));
        }
    }
    for i in 0..size {
        let qi = Scalar::v_pow(cartan.d4(i)?);
        for j in 0..size {
            if i == j {
                continue;
            }
            let top = (1 - cartan.a[i][j]) as u32;
            for (sign, xs) in [("+", &img.xp), ("-", &img.xm)] {
                let mut acc = OscExpr::zero(img.nu_v, img.slots);
                for k in 0..=top {
                    let c = qbinom(top, k, &qi)?;
                    let c = if k % 2 == 1 { c.neg() } else { c };
                    let t = xs[i].pow(k).mul(&xs[j]).mul(&xs[i].pow(top - k)).scale_scalar(&c);
                    acc = acc.add(&t);
                }
                rels.push(Rel::Zero(format!("Serre{}({},{})", sign, name(i), name(j)), acc));
            }
        }
    }
    Ok(rels)
}

/// Checks the defining relations as operator identities on the interior of
/// `[0, M)^n`. Each relation is expanded symbolically first; words are then
/// applied exactly and truncation is avoided through the shift bounds.
pub fn verify_dj_relations(img: &DjImages, cartan: &CartanData, cutoff: usize) -> Result<RelationReport, OscError> {
    let rels = relation_exprs(img, cartan)?;
    let checks: Vec<Result<RelationCheck, OscError>> = rels
        .par_iter()
        .map(|Rel::Zero(name, e)| {
            let op = FockOperator::from_expr(e, cutoff);
            let interior = op.interior();
            if interior.is_empty() {
                return Err(OscError::EmptyInterior(cutoff, name.clone()));
            }
            let fail = op.first_nonzero_on_interior();
            Ok(RelationCheck { name: name.clone(), passed: fail.is_none(), interior: interior.len(), first_failure: fail })
        })
        .collect();
    let checks = checks.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(RelationReport { label: img.label.clone(), cutoff, checks })
}

/// The same relations composed as truncated matrices of the generator
/// images, checked on the interior given by the composed shift bounds.
pub fn verify_dj_relations_matrix(img: &DjImages, cartan: &CartanData, cutoff: usize) -> Result<RelationReport, OscError> {
    let size = cartan.size();
    let name = |p: usize| cartan.node_name(p);
    let m = |e: &OscExpr| FockOperator::from_expr(e, cutoff);
    let xp: Vec<FockOperator> = img.xp.iter().map(m).collect();
    let xm: Vec<FockOperator> = img.xm.iter().map(m).collect();
    let mut checks = Vec::new();
    let mut push = |nm: String, op: FockOperator| -> Result<(), OscError> {
        let interior = op.interior();
        if interior.is_empty() {
            return Err(OscError::EmptyInterior(cutoff, nm));
        }
        let fail = op.first_nonzero_on_interior();
        checks.push(RelationCheck { name: nm, passed: fail.is_none(), interior: interior.len(), first_failure: fail });
        Ok(())
    };
    for i in 0..size {
        for j in 0..size {
            let mut op = xp[i].compose(&xm[j]).sub(&xm[j].compose(&xp[i]));
            if i == j {
                let qi = Scalar::v_pow(cartan.d4(i)?);
                let den = qi.sub(&qi.inv()?).inv()?;
                op = op.sub(&m(&img.k[i].sub(&img.kinv[i]).scale_scalar(&den)));
            }
            push(format!("[X{}+,X{}-]", name(i), name(j)), op)?;
        }
    }
    for i in 0..size {
        let qi = Scalar::v_pow(cartan.d4(i)?);
        for j in 0..size {
            if i == j {
                continue;
            }
            let top = (1 - cartan.a[i][j]) as u32;
            for (sign, xs) in [("+", &xp), ("-", &xm)] {
                let pw = |k: u32| (0..k).fold(FockOperator::identity(cutoff, img.slots), |acc, _| acc.compose(&xs[i]));
                let mut acc: Option<FockOperator> = None;
                for k in 0..=top {
                    let c = qbinom(top, k, &qi)?;
                    let c = if k % 2 == 1 { c.neg() } else { c };
                    let t = pw(k).compose(&xs[j]).compose(&pw(top - k)).scale(&coeff(c));
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t),
                    });
                }
                push(format!("Serre{}({},{})", sign, name(i), name(j)), acc.unwrap())?;
            }
        }
    }
    Ok(RelationReport { label: img.label.clone(), cutoff, checks })
}

/// The four defining relations of `B_nu` on one slot, as expressions that
/// must vanish.
pub fn oscillator_relations(nu_v: i32) -> Vec<(String, OscExpr)> {
    let l = |k| OscExpr::letter(nu_v, 1, 0, k);
    let (a, ad, k, kinv) = (l(OscLetter::A), l(OscLetter::Ad), l(OscLetter::K(1)), l(OscLetter::K(-1)));
    let nu = Scalar::v_pow(nu_v);
    let nuinv = Scalar::v_pow(-nu_v);
    vec![
        ("[a,a+]_nu=k".into(), a.q_commutator(&ad, &nu).unwrap().sub(&k)),
        ("[a,a+]_nu^-1=k^-1".into(), a.q_commutator(&ad, &nuinv).unwrap().sub(&kinv)),
        ("kak^-1=nu^-1a".into(), k.mul(&a).mul(&kinv).sub(&a.scale_scalar(&nuinv))),
        ("ka+k^-1=nu a+".into(), k.mul(&ad).mul(&kinv).sub(&ad.scale_scalar(&nu))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(s: &str) -> CartanData {
        CartanData::parse(s).unwrap()
    }

    #[test]
    fn fock_basics() {
        let g = fock_generators(4, 6);
        assert!(g.a.rows[0].is_empty());
        assert_eq!(g.ad.rows[2], vec![(3, coeff_one())]);
        assert!(g.ad.rows[5].is_empty());
        let n = g.ad.compose(&g.a);
        for m in 1..5usize {
            assert_eq!(n.rows[m], vec![(m, coeff(qnum(m as i64, 4)))]);
        }
    }

    #[test]
    fn oscillator_relations_hold_exactly() {
        for nu_v in [2, 4, 8] {
            for (name, e) in oscillator_relations(nu_v) {
                for m in 0..6u32 {
                    assert!(act(&e, &FockVec::basis(&[m])).is_zero(), "{name} at {m}");
                }
            }
        }
    }

    #[test]
    fn automorphisms_preserve_relations() {
        let nu_v = 4;
        let b = coeff(Scalar::from_int(3)).mul(&b_symbol());
        for (name, e) in oscillator_relations(nu_v) {
            for eps in [0u8, 1] {
                let t = twist_slot(&e, 0, eps, &b).unwrap();
                for m in 0..6u32 {
                    assert!(act(&t, &FockVec::basis(&[m])).is_zero(), "{name} eps={eps}");
                }
            }
            let t = e.substitute_slot(0, &|k| theta(nu_v, 1, 0, &b, 2, k)).unwrap();
            assert!(act(&t, &FockVec::basis(&[3])).is_zero(), "{name} theta_b,2");
        }
        // vartheta^2(a) = -a
        let a = OscExpr::letter(nu_v, 1, 0, OscLetter::A);
        let t2 = a
            .substitute_slot(0, &|k| Ok(vartheta(nu_v, 1, 0, k)))
            .unwrap()
            .substitute_slot(0, &|k| Ok(vartheta(nu_v, 1, 0, k)))
            .unwrap();
        assert_eq!(t2, a.neg());
        let t = a.substitute_slot(0, &|k| theta(nu_v, 1, 0, &b, 0, k)).unwrap();
        assert_eq!(t, a.scale(&b));
    }

    #[test]
    fn tensor_embedding() {
        let k = OscExpr::letter(4, 1, 0, OscLetter::K(1));
        let k1 = tensor_embed(&k, 1, 2).unwrap();
        let v = act(&k1, &FockVec::basis(&[2, 3]));
        assert_eq!(v, FockVec::basis(&[2, 3]).scale(&coeff(Scalar::v_pow(8))));
        let a1 = tensor_embed(&OscExpr::letter(4, 1, 0, OscLetter::A), 1, 2).unwrap();
        let ad2 = tensor_embed(&OscExpr::letter(4, 1, 0, OscLetter::Ad), 2, 2).unwrap();
        assert_eq!(a1.mul(&ad2), ad2.mul(&a1));
        assert!(tensor_embed(&k, 3, 2).is_err());
    }

    #[test]
    fn k_delta_is_identity() {
        for s in ["A1~1", "A2~1", "A3~1", "C2~1", "C3~1", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2"] {
            let c = cd(s);
            let img = dj_images(&c).unwrap();
            assert_eq!(img.k_delta(&c).unwrap(), OscExpr::one(img.nu_v, img.slots), "{s}");
        }
    }

    #[test]
    fn relations_small() {
        for s in ["A1~1", "C2~1", "A2~2", "D3~2"] {
            let c = cd(s);
            let img = dj_images(&c).unwrap();
            let r = verify_dj_relations(&img, &c, 6).unwrap();
            for ch in &r.checks {
                assert!(ch.passed, "{s} {}: {:?}", ch.name, ch.first_failure);
            }
            let tw = img.twisted(&OscParams { eps: (0..img.slots).map(|j| (j % 2) as u8).collect(), b: vec![b_symbol(); img.slots] }).unwrap();
            assert!(verify_dj_relations(&tw, &c, 6).unwrap().passed(), "{s} twisted");
        }
    }

    #[test]
    fn matrix_path_agrees() {
        let c = cd("C2~1");
        let img = dj_images(&c).unwrap();
        let r = verify_dj_relations_matrix(&img, &c, 6).unwrap();
        assert!(r.passed());
        assert!(r.checks.iter().any(|ch| ch.name == "Serre+(1,0)"));
    }

    #[test]
    fn wrong_image_detected() {
        let c = cd("C2~1");
        let mut img = dj_images(&c).unwrap();
        img.xp[0] = img.xp[0].scale_scalar(&qnum(2, img.nu_v));
        let r = verify_dj_relations(&img, &c, 6).unwrap();
        let ch = r.checks.iter().find(|ch| ch.name == "[X0+,X0-]").unwrap();
        assert!(!ch.passed);
        assert_eq!(ch.first_failure, Some(vec![0, 0]));
    }

    #[test]
    fn uniform_actions_match_composition() {
        // X_i^+ |m> on a middle node: the composed action carries the sign
        // (-1)^{eps_{i+1}}
        let c = cd("C3~1");
        let img = dj_images(&c).unwrap();
        let b = [Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)];
        for eps in [[0u8, 0, 0], [1, 0, 1], [0, 1, 1], [1, 1, 0]] {
            let p = OscParams { eps: eps.to_vec(), b: b.iter().map(|x| coeff(x.clone())).collect() };
            let tw = img.twisted(&p).unwrap();
            let m = [2u32, 3, 1];
            let i = 1usize;
            let (ei, ej) = (eps[0], eps[1]);
            let got = act(&tw.xp[i], &FockVec::basis(&m));
            let mi = if ei == 0 { qnum(2, 2) } else { Scalar::one() };
            let mj = if ej == 1 { qnum(3, 2) } else { Scalar::one() };
            let sign = if ej == 1 { -1 } else { 1 };
            let c0 = b[0].mul(&b[1].inv().unwrap()).mul(&mi).mul(&mj).mul(&Scalar::from_int(sign));
            let target = [
                (2 - if ei == 0 { 1 } else { -1 }) as u32,
                (3 + if ej == 0 { 1 } else { -1 }) as u32,
                1,
            ];
            assert_eq!(got, FockVec::basis(&target).scale(&coeff(c0)), "{eps:?}");
        }
    }
}
