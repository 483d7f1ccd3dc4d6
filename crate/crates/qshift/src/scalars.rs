//! The ground field: rational functions in `v` over the Gaussian rationals,
//! with `q = v^4`.
//!
//! A nonzero [`Scalar`] is stored as `v^e * N(v) / D(v)` where `N(0) != 0`,
//! `D(0) != 0`, `D` is monic and `gcd(N, D) = 1`. This form is unique, so
//! derived equality and hashing agree with field equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: Rat,
    pub im: Rat,
}

impl Gauss {
    pub fn new(re: Rat, im: Rat) -> Self {
        Gauss { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Gauss::new(Rat::from_integer(n.into()), Rat::zero())
    }

    pub fn zero() -> Self {
        Gauss::from_int(0)
    }

    pub fn one() -> Self {
        Gauss::from_int(1)
    }

    pub fn i() -> Self {
        Gauss::new(Rat::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Gauss {
        Gauss::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        if self.im.is_zero() && o.im.is_zero() {
            return Gauss::new(&self.re * &o.re, Rat::zero());
        }
        Gauss::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn inv(&self) -> Gauss {
        if self.im.is_zero() {
            return Gauss::new(self.re.recip(), Rat::zero());
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Gauss::new(&self.re / &n, -&self.im / &n)
    }
}

/// Dense polynomial in `v`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Gauss>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { c: vec![Gauss::one()] }
    }

    pub fn constant(g: Gauss) -> Self {
        Poly::from_coeffs(vec![g])
    }

    pub fn from_coeffs(mut c: Vec<Gauss>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Gauss] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &Gauss {
        self.c.last().expect("zero polynomial has no leading coefficient")
    }

    /// Lowest index with a nonzero coefficient.
    fn order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    fn shift_down(&self, k: usize) -> Poly {
        Poly { c: self.c[k..].to_vec() }
    }

    fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![Gauss::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(match (self.c.get(k), o.c.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(c)
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(Gauss::neg).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, g: &Gauss) -> Poly {
        if g.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|x| x.mul(g)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut c = vec![Gauss::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lead().inv();
        let mut r = self.c.clone();
        let dd = d.degree();
        let mut qc = vec![Gauss::zero(); self.c.len() - d.c.len() + 1];
        for k in (0..qc.len()).rev() {
            let t = r[k + dd].mul(&inv);
            if t.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = r[k + j].sub(&t.mul(b));
            }
            qc[k] = t;
        }
        (Poly::from_coeffs(qc), Poly::from_coeffs(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().inv())
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &Gauss) -> Gauss {
        let mut acc = Gauss::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

/// Element of `Q(i)(v)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    e: i32,
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { e: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { e: 0, num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(Gauss::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_gauss(Gauss::new(r, Rat::zero()))
    }

    pub fn from_gauss(g: Gauss) -> Self {
        if g.is_zero() {
            return Scalar::zero();
        }
        Scalar { e: 0, num: Poly::constant(g), den: Poly::one() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::from_gauss(Gauss::i())
    }

    /// `v^k`.
    pub fn v_pow(k: i32) -> Self {
        Scalar { e: k, num: Poly::one(), den: Poly::one() }
    }

    /// `q^k = v^{4k}`.
    pub fn q_pow(k: i32) -> Self {
        Scalar::v_pow(4 * k)
    }

    pub fn q() -> Self {
        Scalar::v_pow(4)
    }

    /// Builds `num/den` from arbitrary polynomials, normalizing.
    pub fn from_polys(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::normalize(0, num, den))
    }

    fn normalize(e: i32, num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        let (on, od) = (num.order(), den.order());
        let e = e + on as i32 - od as i32;
        let mut num = num.shift_down(on);
        let mut den = den.shift_down(od);
        if den.degree() > 0 && num.degree() > 0 {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        let l = den.lead().clone();
        if !l.is_one() {
            let li = l.inv();
            num = num.scale(&li);
            den = den.scale(&li);
        }
        Scalar { e, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in `v`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// `c * v^k` with `c` a Gaussian rational, if the value has that shape.
    pub fn as_monomial(&self) -> Option<(Gauss, i32)> {
        if self.is_zero() || !self.den.is_one() || self.num.degree() != 0 {
            return None;
        }
        Some((self.num.c[0].clone(), self.e))
    }

    /// The Gaussian rational value if the scalar is constant in `v`.
    pub fn as_constant(&self) -> Option<Gauss> {
        if self.is_zero() {
            return Some(Gauss::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    pub fn neg(&self) -> Scalar {
        Scalar { e: self.e, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let e = self.e + o.e;
        if self.den.is_one() && o.den.is_one() {
            return Scalar { e, num: self.num.mul(&o.num), den: Poly::one() };
        }
        let (mut n1, mut d2) = (self.num.clone(), o.den.clone());
        if n1.degree() > 0 && d2.degree() > 0 {
            let g = n1.gcd(&d2);
            if g.degree() > 0 {
                n1 = n1.divrem(&g).0;
                d2 = d2.divrem(&g).0;
            }
        }
        let (mut n2, mut d1) = (o.num.clone(), self.den.clone());
        if n2.degree() > 0 && d1.degree() > 0 {
            let g = n2.gcd(&d1);
            if g.degree() > 0 {
                n2 = n2.divrem(&g).0;
                d1 = d1.divrem(&g).0;
            }
        }
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let l = den.lead().clone();
        if l.is_one() {
            Scalar { e, num, den }
        } else {
            let li = l.inv();
            Scalar { e, num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let n1 = self.num.shift_up((self.e - e) as usize);
        let n2 = o.num.shift_up((o.e - e) as usize);
        if self.den.is_one() && o.den.is_one() {
            let num = n1.add(&n2);
            if num.is_zero() {
                return Scalar::zero();
            }
            let on = num.order();
            return Scalar { e: e + on as i32, num: num.shift_down(on), den: Poly::one() };
        }
        if self.den == o.den {
            return Scalar::normalize(e, n1.add(&n2), self.den.clone());
        }
        let num = n1.mul(&o.den).add(&n2.mul(&self.den));
        let den = self.den.mul(&o.den);
        if self.den.is_one() || o.den.is_one() {
            if num.is_zero() {
                return Scalar::zero();
            }
            let on = num.order();
            return Scalar { e: e + on as i32, num: num.shift_down(on), den };
        }
        Scalar::normalize(e, num, den)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let l = self.num.lead().inv();
        Ok(Scalar { e: -self.e, num: self.den.scale(&l), den: self.num.scale(&l) })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Multiplies by `v^k`.
    pub fn mul_vpow(&self, k: i32) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        Scalar { e: self.e + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn scale_gauss(&self, g: &Gauss) -> Scalar {
        if g.is_zero() || self.is_zero() {
            return Scalar::zero();
        }
        Scalar { e: self.e, num: self.num.scale(g), den: self.den.clone() }
    }

    pub fn pow(&self, k: i32) -> Result<Scalar, ScalarError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        if let Some((c, e)) = self.as_monomial() {
            let mut cc = Gauss::one();
            for _ in 0..k {
                cc = cc.mul(&c);
            }
            return Ok(Scalar::from_gauss(cc).mul_vpow(e * k));
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Exact evaluation at `v = v0`; `None` if the denominator vanishes.
    pub fn eval(&self, v0: &Rat) -> Option<Gauss> {
        self.eval_gauss(&Gauss::new(v0.clone(), Rat::zero()))
    }

    pub fn eval_gauss(&self, v0: &Gauss) -> Option<Gauss> {
        if self.is_zero() {
            return Some(Gauss::zero());
        }
        let d = self.den.eval(v0);
        if d.is_zero() {
            return None;
        }
        if v0.is_zero() && self.e != 0 {
            return if self.e > 0 { Some(Gauss::zero()) } else { None };
        }
        let mut p = Gauss::one();
        let vp = if self.e >= 0 { v0.clone() } else { v0.inv() };
        for _ in 0..self.e.unsigned_abs() {
            p = p.mul(&vp);
        }
        Some(self.num.eval(v0).mul(&d.inv()).mul(&p))
    }

    /// Numerator and denominator as plain polynomials in `v`.
    pub fn parts(&self) -> (Poly, Poly) {
        if self.e >= 0 {
            (self.num.shift_up(self.e as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.e) as usize))
        }
    }

    pub fn parse(s: &str) -> Result<Scalar, ScalarError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let r = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a Gaussian coefficient; the flag is true when a leading minus sign
/// was pulled out.
fn fmt_coeff(g: &Gauss) -> (bool, String) {
    if g.im.is_zero() {
        return (g.re.is_negative(), fmt_rat(&g.re.abs()));
    }
    let im_abs = g.im.abs();
    let im = if im_abs.is_one() { "i".to_string() } else { format!("{}*i", fmt_rat(&im_abs)) };
    if g.re.is_zero() {
        return (g.im.is_negative(), im);
    }
    let sign = if g.im.is_negative() { "-" } else { "+" };
    (false, format!("({}{}{})", fmt_rat(&g.re), sign, im))
}

fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.c.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = fmt_coeff(c);
        let vpart = match k {
            0 => String::new(),
            1 => "v".into(),
            _ => format!("v^{k}"),
        };
        let term = if k == 0 {
            body
        } else if body == "1" {
            vpart
        } else {
            format!("{body}*{vpart}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    out
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.parts();
        if d.is_one() {
            write!(f, "{}", fmt_poly(&n))
        } else {
            write!(f, "({})/({})", fmt_poly(&n), fmt_poly(&d))
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = acc.div(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = self.integer()?;
            let k = k.to_i32().ok_or_else(|| self.err("exponent too large"))?;
            return base.pow(if neg { -k } else { k });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(t.parse::<BigInt>().unwrap())
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let r = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some(b'v') => {
                self.pos += 1;
                Ok(Scalar::v_pow(1))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Scalar::q())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Scalar::from_rat(Rat::from_integer(n)))
            }
            _ => Err(self.err("expected number, v, q, i or '('")),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                $f(self, o)
            }
        }
    };
}

binop!(Add, add, |a: &Scalar, b: &Scalar| a.add(b));
binop!(Sub, sub, |a: &Scalar, b: &Scalar| a.sub(b));
binop!(Mul, mul, |a: &Scalar, b: &Scalar| a.mul(b));
binop!(Div, div, |a: &Scalar, b: &Scalar| a.div(b).expect("division by zero"));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// `[m]_base = (base^m - base^{-m}) / (base - base^{-1})`.
pub fn qint(m: i64, base: &Scalar) -> Result<Scalar, ScalarError> {
    if m == 0 {
        return Ok(Scalar::zero());
    }
    if let Some((c, k)) = base.as_monomial() {
        if c.is_one() && k != 0 {
            // [m]_{v^k} = sum_j v^{k(m-1-2j)}
            let sign = if m < 0 { -1 } else { 1 };
            let m = m.abs();
            let mut acc = Scalar::zero();
            for j in 0..m {
                acc = acc.add(&Scalar::v_pow(k * (m - 1 - 2 * j) as i32));
            }
            return Ok(if sign < 0 { acc.neg() } else { acc });
        }
    }
    let den = base.sub(&base.inv()?);
    if den.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    let m32 = i32::try_from(m).map_err(|_| ScalarError::DivisionByZero)?;
    base.pow(m32)?.sub(&base.pow(-m32)?).div(&den)
}

/// `[m]_base! = [1][2]...[m]`.
pub fn qfact(m: u32, base: &Scalar) -> Result<Scalar, ScalarError> {
    let mut acc = Scalar::one();
    for j in 1..=m {
        acc = acc.mul(&qint(j as i64, base)?);
    }
    Ok(acc)
}

/// Gaussian binomial `[m choose k]_base`.
pub fn qbinom(m: u32, k: u32, base: &Scalar) -> Result<Scalar, ScalarError> {
    if k > m {
        return Ok(Scalar::zero());
    }
    qfact(m, base)?.div(&qfact(k, base)?.mul(&qfact(m - k, base)?))
}

/// `(nu + 1) / (nu - 1)`.
pub fn tau_nu(nu: &Scalar) -> Result<Scalar, ScalarError> {
    nu.add(&Scalar::one()).div(&nu.sub(&Scalar::one()))
}

/// `(nu - kappa + 1) / (nu + kappa - 1)` for an integer `kappa`.
pub fn tau_nu_kappa(nu: &Scalar, kappa: i64) -> Result<Scalar, ScalarError> {
    let k = Scalar::from_int(kappa);
    nu.sub(&k).add(&Scalar::one()).div(&nu.add(&k).sub(&Scalar::one()))
}

/// Reduces a Gaussian rational to an integer pair when possible.
pub fn gauss_to_ints(g: &Gauss) -> Option<(i64, i64)> {
    if !g.re.is_integer() || !g.im.is_integer() {
        return None;
    }
    Some((g.re.to_integer().to_i64()?, g.im.to_integer().to_i64()?))
}

/// Parses a rational literal such as `3`, `-2/5`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        Some(Rat::new(a, b))
    } else {
        Some(Rat::from_integer(s.parse().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    #[test]
    fn canonical_forms_agree() {
        let a = s("(v^2-1)/(v-1)");
        assert_eq!(a, s("v+1"));
        assert_eq!(s("q"), Scalar::v_pow(4));
        assert_eq!(s("i*i"), Scalar::from_int(-1));
        assert_eq!(s("2/(2*v)"), Scalar::v_pow(-1));
    }

    #[test]
    fn render_round_trip() {
        for x in [
            "v^4 + 1",
            "(2+3*i)*v^3 - 1/2",
            "(v^8 + 1)/(v^8 - 1)",
            "-i*v^-3",
            "(1 - i)/(v^2 + (1+i))",
            "0",
        ] {
            let a = s(x);
            let back = s(&a.to_string());
            assert_eq!(a, back, "{x} -> {a}");
        }
    }

    #[test]
    fn qint_small() {
        let q = Scalar::q();
        assert!(qint(0, &q).unwrap().is_zero());
        assert!(qint(1, &q).unwrap().is_one());
        assert_eq!(qint(2, &q).unwrap(), s("q + q^-1"));
        assert_eq!(qint(-2, &q).unwrap(), s("-q - q^-1"));
        let three = Scalar::from_int(3);
        assert_eq!(qint(3, &three).unwrap(), s("9 + 1 + 1/9"));
    }

    #[test]
    fn qint_rejects_unit_base() {
        assert_eq!(qint(2, &Scalar::one()), Err(ScalarError::DivisionByZero));
        assert_eq!(qint(2, &Scalar::from_int(-1)), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn qint_identity() {
        let q = Scalar::q();
        let d = &q - &q.inv().unwrap();
        for m in -20i64..=20 {
            let lhs = &qint(m, &q).unwrap() * &d;
            let rhs = &q.pow(m as i32).unwrap() - &q.pow(-m as i32).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn qbinom_pascal() {
        let q = Scalar::v_pow(2);
        let b = qbinom(4, 2, &q).unwrap();
        assert_eq!(b, s("v^8 + v^4 + 2 + v^-4 + v^-8"));
    }

    #[test]
    fn tau_values() {
        let q = Scalar::q();
        assert_eq!(tau_nu(&q).unwrap(), s("(q+1)/(q-1)"));
        assert!(tau_nu(&Scalar::from_int(-1)).unwrap().is_zero());
        let two = Rat::from_integer(2.into());
        let t = tau_nu(&q.pow(2).unwrap()).unwrap();
        let val = t.eval(&two).unwrap();
        assert_eq!(val, Gauss::new(Rat::new(257.into(), 255.into()), Rat::zero()));
        let val = tau_nu(&q).unwrap().eval(&two).unwrap();
        assert_eq!(val, Gauss::new(Rat::new(17.into(), 15.into()), Rat::zero()));
        assert!(tau_nu(&Scalar::one()).is_err());
    }

    #[test]
    fn eval_is_homomorphism() {
        let a = s("(v^3 + i)/(v^2 - 3)");
        let b = s("(2*v - 1)/(v^5 + v + 1)");
        let v0 = Rat::new(3.into(), 2.into());
        let ea = a.eval(&v0).unwrap();
        let eb = b.eval(&v0).unwrap();
        assert_eq!((&a + &b).eval(&v0).unwrap(), ea.add(&eb));
        assert_eq!((&a * &b).eval(&v0).unwrap(), ea.mul(&eb));
    }
}
