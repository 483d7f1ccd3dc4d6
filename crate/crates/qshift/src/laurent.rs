//! Laurent polynomials over [`Scalar`] in ring variables plus the central
//! parameters `b` and `z`, and the shift automorphisms `zeta_i`.
//!
//! A [`Ring`] names the variables and records how each `zeta_i` rescales
//! them. Two rings are used: the full ring in `x_0..x_n`, and the ring in the
//! `z_1..z_n` of the change of variables.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cartan::{CartanData, CartanError, Family};
use crate::scalars::{Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("division is not exact")]
    NotExact,
    #[error("evaluation hits a zero denominator")]
    ZeroDenominator,
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("unsupported type {0}")]
    Unsupported(String),
}

pub type Exps = Vec<i32>;

/// Finitely supported map from exponent vectors to nonzero scalars. Exponent
/// vectors have `nvars + 2` entries; the last two are `b` and `z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exps, Scalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars + 2], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        LaurentPoly::constant(nvars, Scalar::one())
    }

    pub fn monomial(nvars: usize, e: Exps, c: Scalar) -> Self {
        assert_eq!(e.len(), nvars + 2);
        let mut p = LaurentPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The variable in slot `j` (`nvars` is `b`, `nvars + 1` is `z`).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars + 2];
        e[j] = 1;
        LaurentPoly::monomial(nvars, e, Scalar::one())
    }

    pub fn b(nvars: usize) -> Self {
        LaurentPoly::var(nvars, nvars)
    }

    pub fn z(nvars: usize) -> Self {
        LaurentPoly::var(nvars, nvars + 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_unit(&self) -> Option<(&Exps, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Constant term value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let (e, c) = self.as_unit()?;
        if e.iter().all(|&x| x == 0) {
            Some(c.clone())
        } else {
            None
        }
    }

    fn insert_add(terms: &mut BTreeMap<Exps, Scalar>, e: Exps, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&e) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut t = self.terms.clone();
        for (e, c) in &o.terms {
            LaurentPoly::insert_add(&mut t, e.clone(), c.clone());
        }
        LaurentPoly { nvars: self.nvars, terms: t }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> LaurentPoly {
        if s.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul(s))).collect() }
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut t = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                LaurentPoly::insert_add(&mut t, e, c1.mul(c2));
            }
        }
        LaurentPoly { nvars: self.nvars, terms: t }
    }

    pub fn inv(&self) -> Result<LaurentPoly, LaurentError> {
        let (e, c) = self.as_unit().ok_or_else(|| LaurentError::NotUnit(self.to_string()))?;
        Ok(LaurentPoly::monomial(self.nvars, e.iter().map(|x| -x).collect(), c.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<LaurentPoly, LaurentError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = LaurentPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Multiplies every term with exponent `e` by `v^{sum_j w_j e_j}`.
    pub fn rescale(&self, w: &[i32]) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let k: i32 = w.iter().zip(e).map(|(a, b)| a * b).sum();
                    (e.clone(), c.mul_vpow(k))
                })
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `NotExact`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if d.is_zero() {
            return Err(LaurentError::Scalar(ScalarError::DivisionByZero));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if d.is_unit() {
            return Ok(self.mul(&d.inv()?));
        }
        let width = self.nvars + 2;
        let bounds = |p: &LaurentPoly| -> (Vec<i32>, Vec<i32>) {
            let mut lo = vec![i32::MAX; width];
            let mut hi = vec![i32::MIN; width];
            for e in p.terms.keys() {
                for k in 0..width {
                    lo[k] = lo[k].min(e[k]);
                    hi[k] = hi[k].max(e[k]);
                }
            }
            (lo, hi)
        };
        let (flo, fhi) = bounds(self);
        let (dlo, dhi) = bounds(d);
        let qlo: Vec<i32> = (0..width).map(|k| flo[k] - dlo[k]).collect();
        let qhi: Vec<i32> = (0..width).map(|k| fhi[k] - dhi[k]).collect();
        let (dle, dlc) = d.terms.iter().next_back().unwrap();
        let dlc_inv = dlc.inv()?;
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let qe: Exps = re.iter().zip(dle).map(|(a, b)| a - b).collect();
            if (0..width).any(|k| qe[k] < qlo[k] || qe[k] > qhi[k]) {
                return Err(LaurentError::NotExact);
            }
            let t = LaurentPoly::monomial(self.nvars, qe, rc.mul(&dlc_inv));
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    /// Evaluates at a point giving a value for every slot (variables, `b`, `z`).
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, LaurentError> {
        assert_eq!(point.len(), self.nvars + 2);
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    t = t.mul(&x.pow(k).map_err(|_| LaurentError::ZeroDenominator)?);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Replaces variable `j` by the unit `images[j]` (parameters kept).
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly, LaurentError> {
        assert_eq!(images.len(), self.nvars);
        let nv = images[0].nvars;
        let mut acc = LaurentPoly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = LaurentPoly::constant(nv, c.clone());
            for (j, img) in images.iter().enumerate() {
                if e[j] != 0 {
                    t = t.mul(&img.pow(e[j])?);
                }
            }
            let mut pe = vec![0; nv + 2];
            pe[nv] = e[self.nvars];
            pe[nv + 1] = e[self.nvars + 1];
            t = t.mul(&LaurentPoly::monomial(nv, pe, Scalar::one()));
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Sets `b` to a scalar value.
    pub fn specialize_b(&self, b: &Scalar) -> Result<LaurentPoly, LaurentError> {
        let mut t = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let k = e[self.nvars];
            e[self.nvars] = 0;
            LaurentPoly::insert_add(&mut t, e, c.mul(&b.pow(k)?));
        }
        Ok(LaurentPoly { nvars: self.nvars, terms: t })
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Exps> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: i32 = a.iter().map(|x| x.abs()).sum();
            let db: i32 = b.iter().map(|x| x.abs()).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for e in keys {
            let c = &self.terms[e];
            let mut mono = Vec::new();
            for (j, &k) in e.iter().enumerate() {
                let name = if j < self.nvars {
                    names.get(j).cloned().unwrap_or_else(|| format!("x{j}"))
                } else if j == self.nvars {
                    "b".into()
                } else {
                    "z".into()
                };
                match k {
                    0 => {}
                    1 => mono.push(name),
                    _ => mono.push(format!("{name}^{k}")),
                }
            }
            let cs = c.to_string();
            let neg_one = c.neg().is_one();
            let term = if mono.is_empty() {
                format!("({cs})")
            } else if c.is_one() || neg_one {
                mono.join("*")
            } else {
                format!("({cs})*{}", mono.join("*"))
            };
            if out.is_empty() {
                if neg_one && !mono.is_empty() {
                    out.push('-');
                }
            } else {
                out.push_str(if neg_one && !mono.is_empty() { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|j| format!("x{j}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Variable names and shift weights: `zeta_i` multiplies variable `j` by
/// `v^{shifts[i][j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub names: Vec<String>,
    pub shifts: Vec<Vec<i32>>,
    /// `v`-exponent of `q_i` for each node.
    pub qv: Vec<i32>,
}

impl Ring {
    /// The ring in `x_0..x_n` with `zeta_i(x_j) = q_i^{-delta_ij} x_j`.
    pub fn x_ring(cartan: &CartanData) -> Result<Ring, LaurentError> {
        let size = cartan.size();
        let qv: Vec<i32> = (0..size).map(|i| cartan.d4(i)).collect::<Result<_, _>>()?;
        let shifts = (0..size).map(|i| (0..size).map(|j| if i == j { -qv[i] } else { 0 }).collect()).collect();
        let names = (0..size).map(|p| format!("x{}", cartan.node_name(p))).collect();
        Ok(Ring { names, shifts, qv })
    }

    /// The ring in `z_1..z_n` with shifts induced from the `x`-ring.
    pub fn z_ring(cartan: &CartanData) -> Result<Ring, LaurentError> {
        let cv = change_of_vars(cartan)?;
        let size = cartan.size();
        let qv: Vec<i32> = (0..size).map(|i| cartan.d4(i)).collect::<Result<_, _>>()?;
        let shifts = (0..size)
            .map(|i| cv.z_in_x.iter().map(|e| -qv[i] * e[i]).collect())
            .collect();
        let names = (1..=cv.z_in_x.len()).map(|j| format!("z{j}")).collect();
        Ok(Ring { names, shifts, qv })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn nodes(&self) -> usize {
        self.shifts.len()
    }

    fn weights(&self, i: usize, power: i32) -> Vec<i32> {
        let mut w: Vec<i32> = self.shifts[i].iter().map(|x| x * power).collect();
        w.extend([0, 0]);
        w
    }

    /// `zeta_i^{power}(f)`.
    pub fn shift_pow(&self, i: usize, power: i32, f: &LaurentPoly) -> LaurentPoly {
        f.rescale(&self.weights(i, power))
    }

    /// `zeta_i(f)`, or `zeta_i^{-1}(f)` when `inverse`.
    pub fn shift(&self, i: usize, inverse: bool, f: &LaurentPoly) -> LaurentPoly {
        self.shift_pow(i, if inverse { -1 } else { 1 }, f)
    }

    pub fn q_of(&self, i: usize) -> Scalar {
        Scalar::v_pow(self.qv[i])
    }

    pub fn var(&self, j: usize) -> LaurentPoly {
        LaurentPoly::var(self.nvars(), j)
    }

    pub fn one(&self) -> LaurentPoly {
        LaurentPoly::one(self.nvars())
    }

    pub fn constant(&self, c: Scalar) -> LaurentPoly {
        LaurentPoly::constant(self.nvars(), c)
    }

    pub fn b(&self) -> LaurentPoly {
        LaurentPoly::b(self.nvars())
    }

    pub fn z(&self) -> LaurentPoly {
        LaurentPoly::z(self.nvars())
    }

    pub fn mono(&self, e: &[i32]) -> LaurentPoly {
        let mut v = e.to_vec();
        v.resize(self.nvars() + 2, 0);
        LaurentPoly::monomial(self.nvars(), v, Scalar::one())
    }

    /// `{u}_i = (u - u^{-1}) / (q_i - q_i^{-1})`.
    pub fn brace(&self, u: &LaurentPoly, i: usize) -> Result<LaurentPoly, LaurentError> {
        brace(u, &self.q_of(i))
    }

    pub fn render(&self, f: &LaurentPoly) -> String {
        f.render(&self.names)
    }
}

/// `(u - u^{-1}) / (qi - qi^{-1})` for a unit `u`.
pub fn brace(u: &LaurentPoly, qi: &Scalar) -> Result<LaurentPoly, LaurentError> {
    if !u.is_unit() {
        return Err(LaurentError::NotUnit(u.to_string()));
    }
    let den = qi.sub(&qi.inv()?);
    Ok(u.sub(&u.inv()?).scale(&den.inv()?))
}

/// `y_i = prod_j x_j^{a_ji}` in the `x`-ring.
pub fn y_monomial(cartan: &CartanData, i: usize) -> LaurentPoly {
    let size = cartan.size();
    let mut e: Exps = (0..size).map(|j| cartan.a[j][i]).collect();
    e.extend([0, 0]);
    LaurentPoly::monomial(size, e, Scalar::one())
}

/// The change of variables for the four shiftable families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeOfVars {
    /// `z_in_x[j-1]` is the `x`-exponent vector of `z_j`.
    pub z_in_x: Vec<Vec<i32>>,
    /// `y_in_z[i]` is the `z`-exponent vector of `y_i`.
    pub y_in_z: Vec<Vec<i32>>,
}

impl ChangeOfVars {
    pub fn z_unit(&self, j: usize) -> LaurentPoly {
        let size = self.z_in_x[0].len();
        let mut e = self.z_in_x[j - 1].clone();
        e.extend([0, 0]);
        LaurentPoly::monomial(size, e, Scalar::one())
    }

    /// `y_i` in the `z`-ring.
    pub fn y_in_z_ring(&self, i: usize) -> LaurentPoly {
        let nz = self.z_in_x.len();
        let mut e = self.y_in_z[i].clone();
        e.extend([0, 0]);
        LaurentPoly::monomial(nz, e, Scalar::one())
    }
}

/// `z_j` as `x`-monomials and `y_i` as `z`-monomials. For `A_{N-1}^(1)` there
/// are `N` slots and `z_N` plays the role of `z_0`.
pub fn change_of_vars(cartan: &CartanData) -> Result<ChangeOfVars, LaurentError> {
    let fam = cartan.family().ok_or_else(|| LaurentError::Unsupported(cartan.label.to_string()))?;
    let size = cartan.size();
    let s = cartan.slots();
    let mut z_in_x = Vec::with_capacity(s);
    for j in 1..=s {
        let mut e = vec![0; size];
        e[(j - 1) % size] -= 1;
        e[j % size] += 1;
        z_in_x.push(e);
    }
    let n = size - 1;
    match fam {
        Family::A => {}
        Family::C => {}
        Family::A2 => {
            z_in_x[n - 1][n] = 2;
        }
        Family::D => {
            z_in_x[0][0] = -2;
            z_in_x[n - 1][n] = 2;
        }
    }
    let mut y_in_z = vec![vec![0; s]; size];
    let slot = |i: usize| if i % size == 0 { s } else { i % size };
    for (i, y) in y_in_z.iter_mut().enumerate() {
        match fam {
            Family::A => {
                y[slot(i) - 1] += 1;
                y[slot(i + 1) - 1] -= 1;
            }
            _ => {
                if i == 0 {
                    y[0] = match fam {
                        Family::D => -1,
                        _ => -2,
                    };
                } else if i == n {
                    y[n - 1] = if fam == Family::C { 2 } else { 1 };
                } else {
                    y[i - 1] += 1;
                    y[i] -= 1;
                }
            }
        }
    }
    Ok(ChangeOfVars { z_in_x, y_in_z })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(s: &str) -> CartanData {
        CartanData::parse(s).unwrap()
    }

    #[test]
    fn shift_examples() {
        let c = cd("A2");
        let r = Ring::x_ring(&c).unwrap();
        let x1 = r.var(0);
        let x2 = r.var(1);
        let q = Scalar::q();
        assert_eq!(r.shift(0, false, &x1), x1.scale(&q.inv().unwrap()));
        assert_eq!(r.shift(0, false, &x2), x2);
        let m = x1.mul(&x1).mul(&x2);
        assert_eq!(r.shift(0, false, &m), m.scale(&q.pow(-2).unwrap()));
    }

    #[test]
    fn y_examples() {
        let c = cd("A1~1");
        assert_eq!(y_monomial(&c, 0), Ring::x_ring(&c).unwrap().mono(&[2, -2]));
        let a2 = cd("A2");
        assert_eq!(y_monomial(&a2, 0), Ring::x_ring(&a2).unwrap().mono(&[2, -1]));
    }

    #[test]
    fn brace_examples() {
        let c = cd("A2");
        let r = Ring::x_ring(&c).unwrap();
        let x1 = r.var(0);
        let q = Scalar::q();
        let den = q.sub(&q.inv().unwrap());
        let want = x1.sub(&x1.inv().unwrap()).scale(&den.inv().unwrap());
        assert_eq!(r.brace(&x1, 0).unwrap(), want);
        assert!(r.brace(&r.one(), 0).unwrap().is_zero());
        assert!(r.brace(&x1.add(&r.one()), 0).is_err());
    }

    #[test]
    fn shift_identities_all_types() {
        for s in ["A1~1", "A2~1", "A3~1", "A4~1", "C2~1", "C3~1", "C4~1", "A2~2", "A4~2", "A6~2", "A8~2", "D3~2", "D4~2", "D5~2"] {
            let c = cd(s);
            let r = Ring::x_ring(&c).unwrap();
            for i in 0..c.size() {
                for j in 0..c.size() {
                    let y = y_monomial(&c, j);
                    let qi = r.q_of(i);
                    let want = y.scale(&qi.pow(-c.a[i][j]).unwrap());
                    assert_eq!(r.shift(i, false, &y), want, "{s} {i} {j}");
                    let m = r.mono(&(0..c.size()).map(|k| (k as i32 * 3 + j as i32) % 5 - 2).collect::<Vec<_>>());
                    let a = r.shift(i, false, &r.shift(j, false, &m));
                    let b = r.shift(j, false, &r.shift(i, false, &m));
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn change_of_vars_consistency() {
        for s in ["A1~1", "A2~1", "A3~1", "A4~1", "C2~1", "C3~1", "C4~1", "A2~2", "A4~2", "A6~2", "A8~2", "D3~2", "D4~2", "D5~2"] {
            let c = cd(s);
            let cv = change_of_vars(&c).unwrap();
            let zs: Vec<LaurentPoly> = (1..=cv.z_in_x.len()).map(|j| cv.z_unit(j)).collect();
            for i in 0..c.size() {
                let y = cv.y_in_z_ring(i).substitute(&zs).unwrap();
                assert_eq!(y, y_monomial(&c, i), "{s} y_{i}");
            }
            // the z-ring shifts agree with shifting the x-expressions
            let zr = Ring::z_ring(&c).unwrap();
            let xr = Ring::x_ring(&c).unwrap();
            for i in 0..c.size() {
                for (j, z) in zs.iter().enumerate() {
                    let lhs = zr.shift(i, false, &zr.var(j)).substitute(&zs).unwrap();
                    assert_eq!(lhs, xr.shift(i, false, z));
                }
            }
        }
    }

    #[test]
    fn displayed_table_entries() {
        let c = change_of_vars(&cd("C3~1")).unwrap();
        assert_eq!(c.y_in_z[0], vec![-2, 0, 0]);
        let a = change_of_vars(&cd("A4~2")).unwrap();
        assert_eq!(a.y_in_z[2], vec![0, 1]);
        let d = change_of_vars(&cd("D4~2")).unwrap();
        assert_eq!(d.z_in_x[0], vec![-2, 1, 0, 0]);
        assert_eq!(d.z_in_x[2], vec![0, 0, -1, 2]);
        assert_eq!(d.y_in_z[0], vec![-1, 0, 0]);
    }

    #[test]
    fn exact_division() {
        let c = cd("A2~1");
        let r = Ring::x_ring(&c).unwrap();
        let x0 = r.var(0);
        let x1 = r.var(1);
        let b = r.b();
        let f = x0.add(&b.mul(&x1.inv().unwrap())).add(&r.constant(Scalar::i()));
        let g = x1.sub(&x0.mul(&x0)).add(&r.z());
        let h = f.mul(&g);
        assert_eq!(h.div_exact(&g).unwrap(), f);
        assert_eq!(h.div_exact(&f).unwrap(), g);
        assert_eq!(h.add(&r.one()).div_exact(&g), Err(LaurentError::NotExact));
    }
}
