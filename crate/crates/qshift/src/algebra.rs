//! Expressions in the Drinfeld-Jimbo generators `X_i^{+-}`, `K_beta`, the
//! braid operators `T_i`, `T_i^{-1}`, `T_tau`, the anti-automorphism `Phi`
//! and evaluation on Fock vectors through generator images.
//!
//! A monomial is a word in `X_i^{+-}` followed by a single `K_beta`. Words
//! are free: no Serre or PBW reduction is applied. The braid operators also
//! straighten their output, moving `X^-` letters to the left of `X^+`
//! letters with `[X_i^+, X_j^-] = delta_ij (K_i - K_i^{-1})/(q_i - q_i^{-1})`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::cartan::{CartanData, CartanError, ReducedWord, RootVec};
use crate::oscillator::{act, DjImages, FockOperator, FockVec, OscExpr};
use crate::scalars::{qfact, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("expression exceeds the size budget of {0} terms")]
    Budget(usize),
    #[error("cannot parse expression: {0}")]
    Parse(String),
    #[error("images are for {0}, expression is for {1}")]
    Mismatch(String, String),
    #[error("cutoff {0} leaves no interior")]
    EmptyInterior(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Default term budget; `QSHIFT_BUDGET` overrides it.
pub const DEFAULT_BUDGET: usize = 400_000;

pub fn budget() -> usize {
    std::env::var("QSHIFT_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn eps(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DjLetter {
    pub sign: Sign,
    pub node: usize,
}

impl DjLetter {
    pub fn plus(node: usize) -> Self {
        DjLetter { sign: Sign::Plus, node }
    }

    pub fn minus(node: usize) -> Self {
        DjLetter { sign: Sign::Minus, node }
    }
}

type Key = (Vec<DjLetter>, RootVec);

/// Which braid operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Braid {
    T(usize),
    TInv(usize),
}

/// The algebra `U_q(g)` for a Cartan datum: pairings and a cache of braid
/// images of generators.
pub struct Algebra {
    pub cartan: CartanData,
    d4: Vec<i32>,
    /// `v`-exponent of `q^{(alpha_i, alpha_j)}`.
    pair: Vec<Vec<i32>>,
    cache: RwLock<HashMap<(Braid, DjLetter), AlgebraExpr>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self.cartan.label)
    }
}

impl Algebra {
    pub fn new(cartan: &CartanData) -> Result<Arc<Algebra>, AlgebraError> {
        let size = cartan.size();
        let d4 = (0..size).map(|i| cartan.d4(i)).collect::<Result<Vec<_>, _>>()?;
        let pair = (0..size).map(|i| (0..size).map(|j| d4[i] * cartan.a[i][j]).collect()).collect();
        Ok(Arc::new(Algebra { cartan: cartan.clone(), d4, pair, cache: RwLock::new(HashMap::new()) }))
    }

    pub fn size(&self) -> usize {
        self.cartan.size()
    }

    pub fn q_i(&self, i: usize) -> Scalar {
        Scalar::v_pow(self.d4[i])
    }

    /// `v`-exponent of `q^{(beta, alpha_j)}`.
    fn pair_with(&self, beta: &[i32], j: usize) -> i32 {
        beta.iter().enumerate().map(|(i, b)| b * self.pair[i][j]).sum()
    }

    /// `v`-exponent collected when `K_beta` moves right past `word`.
    fn pass(&self, beta: &[i32], word: &[DjLetter]) -> i32 {
        if beta.iter().all(|&b| b == 0) {
            return 0;
        }
        word.iter().map(|l| l.sign.eps() * self.pair_with(beta, l.node)).sum()
    }
}

/// A finite sum of monomials `c * X_{l_1} ... X_{l_r} K_beta`.
#[derive(Clone)]
pub struct AlgebraExpr {
    alg: Arc<Algebra>,
    terms: BTreeMap<Key, Scalar>,
}

impl PartialEq for AlgebraExpr {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl Eq for AlgebraExpr {}

impl AlgebraExpr {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        AlgebraExpr { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(alg: &Arc<Algebra>, c: Scalar) -> Self {
        let mut e = AlgebraExpr::zero(alg);
        e.insert(Vec::new(), vec![0; alg.size()], c);
        e
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        AlgebraExpr::scalar(alg, Scalar::one())
    }

    pub fn x(alg: &Arc<Algebra>, sign: Sign, node: usize) -> Self {
        let mut e = AlgebraExpr::zero(alg);
        e.insert(vec![DjLetter { sign, node }], vec![0; alg.size()], Scalar::one());
        e
    }

    pub fn xp(alg: &Arc<Algebra>, node: usize) -> Self {
        AlgebraExpr::x(alg, Sign::Plus, node)
    }

    pub fn xm(alg: &Arc<Algebra>, node: usize) -> Self {
        AlgebraExpr::x(alg, Sign::Minus, node)
    }

    pub fn k(alg: &Arc<Algebra>, beta: RootVec) -> Self {
        let mut e = AlgebraExpr::zero(alg);
        e.insert(Vec::new(), beta, Scalar::one());
        e
    }

    /// `K_i^{p}`.
    pub fn k_node(alg: &Arc<Algebra>, i: usize, p: i32) -> Self {
        let mut beta = vec![0; alg.size()];
        beta[i] = p;
        AlgebraExpr::k(alg, beta)
    }

    /// A single monomial `c * word * K_beta`.
    pub fn monomial(alg: &Arc<Algebra>, word: Vec<DjLetter>, beta: RootVec, c: Scalar) -> Self {
        let mut e = AlgebraExpr::zero(alg);
        e.insert(word, beta, c);
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    fn insert(&mut self, word: Vec<DjLetter>, beta: RootVec, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (word, beta);
        match self.terms.get_mut(&key) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<DjLetter>, &RootVec, &Scalar)> {
        self.terms.iter().map(|((w, b), c)| (w, b, c))
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

    pub fn add(&self, o: &AlgebraExpr) -> AlgebraExpr {
        let mut r = self.clone();
        for ((w, b), c) in &o.terms {
            r.insert(w.clone(), b.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraExpr {
        let mut r = AlgebraExpr::zero(&self.alg);
        for ((w, b), c) in &self.terms {
            r.insert(w.clone(), b.clone(), c.mul(s));
        }
        r
    }

    pub fn neg(&self) -> AlgebraExpr {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, o: &AlgebraExpr) -> AlgebraExpr {
        self.add(&o.neg())
    }

    /// Product with `K` factors moved to the right.
    pub fn mul(&self, o: &AlgebraExpr) -> AlgebraExpr {
        let mut r = AlgebraExpr::zero(&self.alg);
        for ((w1, b1), c1) in &self.terms {
            for ((w2, b2), c2) in &o.terms {
                let f = self.alg.pass(b1, w2);
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                let b: RootVec = b1.iter().zip(b2).map(|(x, y)| x + y).collect();
                r.insert(w, b, c1.mul(c2).mul_vpow(f));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> AlgebraExpr {
        (0..k).fold(AlgebraExpr::one(&self.alg), |acc, _| acc.mul(self))
    }

    /// `(X)^k / [k]_i!` for a generator of node `i`.
    pub fn divided_power(&self, i: usize, k: u32) -> Result<AlgebraExpr, AlgebraError> {
        let f = qfact(k, &self.alg.q_i(i))?;
        Ok(self.pow(k).scale(&f.inv()?))
    }

    /// `[x, y]_p = xy - p^{-1} yx`.
    pub fn q_commutator(&self, y: &AlgebraExpr, p: &Scalar) -> Result<AlgebraExpr, AlgebraError> {
        Ok(self.mul(y).sub(&y.mul(self).scale(&p.inv()?)))
    }

    pub fn commutator(&self, y: &AlgebraExpr) -> AlgebraExpr {
        self.mul(y).sub(&y.mul(self))
    }

    /// Moves every `X^-` letter to the left of every `X^+` letter.
    pub fn straighten(&self) -> AlgebraExpr {
        let alg = &self.alg;
        let mut out = AlgebraExpr::zero(alg);
        // Pending terms ordered by (length, inversions): every rewrite lowers
        // the rank, so each key is processed once after all contributions.
        type Pending = BTreeMap<(usize, usize, Vec<DjLetter>, RootVec), Scalar>;
        fn push(work: &mut Pending, w: Vec<DjLetter>, b: RootVec, c: Scalar) {
            if c.is_zero() {
                return;
            }
            let inv = inversions(&w);
            let key = (w.len(), inv, w, b);
            match work.get_mut(&key) {
                Some(x) => {
                    let s = x.add(&c);
                    if s.is_zero() {
                        work.remove(&key);
                    } else {
                        *x = s;
                    }
                }
                None => {
                    work.insert(key, c);
                }
            }
        }
        let mut work = Pending::new();
        for ((w, b), c) in &self.terms {
            push(&mut work, w.clone(), b.clone(), c.clone());
        }
        while let Some(((_, _, w, b), c)) = work.pop_last() {
            let pos = w.windows(2).position(|p| p[0].sign == Sign::Plus && p[1].sign == Sign::Minus);
            let Some(p) = pos else {
                out.insert(w, b, c);
                continue;
            };
            let (i, j) = (w[p].node, w[p + 1].node);
            if i == j {
                let qi = alg.q_i(i);
                let den = qi.sub(&qi.inv().expect("q_i is a unit")).inv().expect("q is not a root of unity");
                let mut head = w[..p].to_vec();
                let tail = &w[p + 2..];
                head.extend_from_slice(tail);
                for s in [1, -1] {
                    let mut beta = vec![0; alg.size()];
                    beta[i] = s;
                    let f = alg.pass(&beta, tail);
                    let nb: RootVec = b.iter().zip(&beta).map(|(x, y)| x + y).collect();
                    let cc = c.mul(&den).mul_vpow(f);
                    push(&mut work, head.clone(), nb, if s == 1 { cc } else { cc.neg() });
                }
            }
            let mut sw = w;
            sw.swap(p, p + 1);
            push(&mut work, sw, b, c);
        }
        out
    }

    /// The anti-automorphism `Phi`: `X_i^{+-} -> X_i^{+-}`, `K_i -> K_i^{-1}`.
    pub fn phi(&self) -> AlgebraExpr {
        let mut r = AlgebraExpr::zero(&self.alg);
        for ((w, b), c) in &self.terms {
            let nb: RootVec = b.iter().map(|x| -x).collect();
            let rw: Vec<DjLetter> = w.iter().rev().copied().collect();
            let f = self.alg.pass(&nb, &rw);
            r.insert(rw, nb, c.mul_vpow(f));
        }
        r
    }

    /// `T_tau` for a diagram automorphism `tau` (node `j` goes to `tau[j]`).
    pub fn tau_apply(&self, tau: &[usize]) -> AlgebraExpr {
        let mut r = AlgebraExpr::zero(&self.alg);
        for ((w, b), c) in &self.terms {
            let nw = w.iter().map(|l| DjLetter { sign: l.sign, node: tau[l.node] }).collect();
            let mut nb = vec![0; b.len()];
            for (j, &x) in b.iter().enumerate() {
                nb[tau[j]] += x;
            }
            r.insert(nw, nb, c.clone());
        }
        r
    }

    /// Applies `T_i` or `T_i^{-1}` and straightens.
    pub fn braid_apply(&self, op: Braid) -> Result<AlgebraExpr, AlgebraError> {
        let alg = &self.alg;
        let i = match op {
            Braid::T(i) | Braid::TInv(i) => i,
        };
        let limit = budget();
        let mut out = AlgebraExpr::zero(alg);
        for ((w, b), c) in &self.terms {
            let mut acc = AlgebraExpr::scalar(alg, c.clone());
            for l in w {
                acc = acc.mul(&letter_image(alg, op, *l)?).straighten();
                if acc.len() > limit {
                    return Err(AlgebraError::Budget(limit));
                }
            }
            let nb = alg.cartan.reflect(i, b);
            acc = acc.mul(&AlgebraExpr::k(alg, nb)).straighten();
            out = out.add(&acc);
            if out.len() > limit {
                return Err(AlgebraError::Budget(limit));
            }
        }
        Ok(out)
    }

    /// `T_w = T_tau T_{i_1} ... T_{i_m}` applied to `self`.
    pub fn braid_word_apply(&self, w: &ReducedWord) -> Result<AlgebraExpr, AlgebraError> {
        let mut e = self.clone();
        for &i in w.word.iter().rev() {
            e = e.braid_apply(Braid::T(i))?;
        }
        if let Some(t) = &w.tau {
            e = e.tau_apply(t);
        }
        Ok(e)
    }

    /// Total degree: the root-lattice weight of each monomial, if they agree.
    pub fn degree(&self) -> Option<RootVec> {
        let mut deg: Option<RootVec> = None;
        for (w, _) in self.terms.keys() {
            let mut d = vec![0; self.alg.size()];
            for l in w {
                d[l.node] += l.sign.eps();
            }
            match &deg {
                None => deg = Some(d),
                Some(x) if *x == d => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// True when no `X^-` letter occurs.
    pub fn is_positive_part(&self) -> bool {
        self.terms.keys().all(|(w, b)| w.iter().all(|l| l.sign == Sign::Plus) && b.iter().all(|&x| x == 0))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((w, b), c)| {
                let mut s = format!("({c})");
                for l in w {
                    s.push_str(&format!(" X{}{}", l.node, if l.sign == Sign::Plus { "+" } else { "-" }));
                }
                if b.iter().any(|&x| x != 0) {
                    let ks: Vec<String> = b
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| **x != 0)
                        .map(|(i, x)| if *x == 1 { format!("a{i}") } else { format!("{x}a{i}") })
                        .collect();
                    s.push_str(&format!(" K[{}]", ks.join("+").replace("+-", "-")));
                }
                s
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses the output of [`AlgebraExpr::render`].
    pub fn parse(alg: &Arc<Algebra>, s: &str) -> Result<AlgebraExpr, AlgebraError> {
        let bad = || AlgebraError::Parse(s.to_string());
        let mut out = AlgebraExpr::zero(alg);
        if s.trim() == "0" {
            return Ok(out);
        }
        for term in split_terms(s) {
            let term = term.trim();
            if !term.starts_with('(') {
                return Err(bad());
            }
            let close = matching_paren(term).ok_or_else(bad)?;
            let c = Scalar::parse(&term[1..close]).map_err(|_| bad())?;
            let mut word = Vec::new();
            let mut beta = vec![0; alg.size()];
            for tok in term[close + 1..].split_whitespace() {
                if let Some(rest) = tok.strip_prefix('X') {
                    let (num, sg) = rest.split_at(rest.len() - 1);
                    let node: usize = num.parse().map_err(|_| bad())?;
                    if node >= alg.size() {
                        return Err(bad());
                    }
                    let sign = match sg {
                        "+" => Sign::Plus,
                        "-" => Sign::Minus,
                        _ => return Err(bad()),
                    };
                    word.push(DjLetter { sign, node });
                } else if let Some(rest) = tok.strip_prefix("K[").and_then(|r| r.strip_suffix(']')) {
                    let norm = rest.replace('-', "+-");
                    for part in norm.split('+').filter(|p| !p.is_empty()) {
                        let (coef, node) = part.split_once('a').ok_or_else(bad)?;
                        let k: i32 = match coef {
                            "" => 1,
                            "-" => -1,
                            x => x.parse().map_err(|_| bad())?,
                        };
                        let node: usize = node.parse().map_err(|_| bad())?;
                        if node >= alg.size() {
                            return Err(bad());
                        }
                        beta[node] += k;
                    }
                } else {
                    return Err(bad());
                }
            }
            out = out.add(&AlgebraExpr::monomial(alg, word, beta, c));
        }
        Ok(out)
    }
}

/// Number of pairs `X^+ ... X^-` in the wrong order.
fn inversions(w: &[DjLetter]) -> usize {
    let mut plus = 0;
    let mut inv = 0;
    for l in w {
        match l.sign {
            Sign::Plus => plus += 1,
            Sign::Minus => inv += plus,
        }
    }
    inv
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' if depth == 0 && i > 0 && bytes[i - 1] == b' ' && i + 1 < bytes.len() && bytes[i + 1] == b' ' => {
                out.push(&s[start..i - 1]);
                start = i + 2;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `T_i(l)`, before straightening.
fn t_letter(alg: &Arc<Algebra>, i: usize, l: DjLetter) -> Result<AlgebraExpr, AlgebraError> {
    let qi = alg.q_i(i);
    let j = l.node;
    if i == j {
        return Ok(match l.sign {
            Sign::Plus => AlgebraExpr::xm(alg, i).mul(&AlgebraExpr::k_node(alg, i, 1)).neg(),
            Sign::Minus => AlgebraExpr::k_node(alg, i, -1).mul(&AlgebraExpr::xp(alg, i)).neg(),
        });
    }
    let r = -alg.cartan.a[i][j];
    let xi = AlgebraExpr::x(alg, l.sign, i);
    let xj = AlgebraExpr::x(alg, l.sign, j);
    let mut acc = AlgebraExpr::zero(alg);
    for k in 0..=r {
        let sign = if (k + r) % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
        let t = match l.sign {
            Sign::Plus => xi
                .divided_power(i, (r - k) as u32)?
                .mul(&xj)
                .mul(&xi.divided_power(i, k as u32)?)
                .scale(&sign.mul(&qi.pow(-k)?)),
            Sign::Minus => xi
                .divided_power(i, k as u32)?
                .mul(&xj)
                .mul(&xi.divided_power(i, (r - k) as u32)?)
                .scale(&sign.mul(&qi.pow(k)?)),
        };
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Cached braid image of a generator.
pub fn letter_image(alg: &Arc<Algebra>, op: Braid, l: DjLetter) -> Result<AlgebraExpr, AlgebraError> {
    if let Some(e) = alg.cache.read().unwrap().get(&(op, l)) {
        return Ok(e.clone());
    }
    let e = match op {
        Braid::T(i) => t_letter(alg, i, l)?.straighten(),
        Braid::TInv(i) => t_letter(alg, i, l)?.phi().straighten(),
    };
    alg.cache.write().unwrap().insert((op, l), e.clone());
    Ok(e)
}

/// `X_{k d~_i delta - alpha_i} = T_{omega~_i}^k T_i^{-1} X_i^+` for `k >= 1`.
pub fn real_root_vector(alg: &Arc<Algebra>, i: usize, k: u32) -> Result<AlgebraExpr, AlgebraError> {
    let w = alg.cartan.reduced_word(i)?;
    let mut e = AlgebraExpr::xp(alg, i).braid_apply(Braid::TInv(i))?;
    for _ in 0..k {
        e = e.braid_word_apply(&w)?;
    }
    Ok(e)
}

/// Checks that the stored word sends `alpha_i` to `alpha_i - d~_i delta`
/// under the reflection action.
pub fn word_is_translation(cartan: &CartanData, i: usize) -> Result<bool, AlgebraError> {
    let w = cartan.reduced_word(i)?;
    let delta = cartan.delta().ok_or_else(|| CartanError::NotAffine(cartan.label.to_string()))?;
    let dt = &cartan.d_tilde[i];
    if !dt.is_integer() {
        return Ok(false);
    }
    let dt: i32 = num_traits::ToPrimitive::to_i32(&dt.to_integer()).unwrap();
    let img = cartan.apply_word(&w, &cartan.simple_root(i));
    let target: RootVec = (0..cartan.size()).map(|j| i32::from(j == i) - dt * delta[j]).collect();
    Ok(img == target)
}

/// Evaluates `expr` on a Fock vector through generator images.
pub fn represent_on(expr: &AlgebraExpr, images: &DjImages, v: &FockVec) -> FockVec {
    let mut kcache: HashMap<RootVec, OscExpr> = HashMap::new();
    let mut out = FockVec::zero();
    for ((w, b), c) in &expr.terms {
        let kb = kcache.entry(b.clone()).or_insert_with(|| images.k_beta(b));
        let mut u = act(kb, v);
        for l in w.iter().rev() {
            if u.is_zero() {
                break;
            }
            let img = match l.sign {
                Sign::Plus => &images.xp[l.node],
                Sign::Minus => &images.xm[l.node],
            };
            u = act(img, &u);
        }
        out = out.add(&u.scale(&crate::oscillator::coeff(c.clone())));
    }
    out
}

/// Truncated matrix of `expr` on `[0, M)^n`, with shift bounds summed over
/// the letters of each monomial.
pub fn represent(expr: &AlgebraExpr, images: &DjImages, cutoff: usize) -> Result<FockOperator, AlgebraError> {
    let slots = images.slots;
    let mut up = vec![0u32; slots];
    for (w, _) in expr.terms.keys() {
        let mut acc = vec![0u32; slots];
        for l in w {
            let img = match l.sign {
                Sign::Plus => &images.xp[l.node],
                Sign::Minus => &images.xm[l.node],
            };
            for (a, u) in acc.iter_mut().zip(img.up_bounds()) {
                *a += u;
            }
        }
        for (u, a) in up.iter_mut().zip(acc) {
            *u = (*u).max(a);
        }
    }
    let dim = cutoff.pow(slots as u32);
    let rows = (0..dim)
        .map(|src| {
            let m = crate::oscillator::occ_of(src, cutoff, slots);
            let v = represent_on(expr, images, &FockVec::basis(&m));
            v.terms
                .into_iter()
                .filter_map(|(t, c)| crate::oscillator::index_of(&t, cutoff).map(|i| (i, c)))
                .collect()
        })
        .collect();
    let op = FockOperator { cutoff, arity: slots, rows, up };
    if op.interior().is_empty() {
        return Err(AlgebraError::EmptyInterior(cutoff));
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::dj_images;

    fn alg(s: &str) -> Arc<Algebra> {
        Algebra::new(&CartanData::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn t_on_simple_generators() {
        let a = alg("C2~1");
        let t = AlgebraExpr::xp(&a, 1).braid_apply(Braid::T(1)).unwrap();
        assert_eq!(t, AlgebraExpr::xm(&a, 1).mul(&AlgebraExpr::k_node(&a, 1, 1)).neg());
        assert_eq!(t.render(), "(-1) X1- K[a1]");
        // a_02 = 0
        assert_eq!(AlgebraExpr::xp(&a, 2).braid_apply(Braid::T(0)).unwrap(), AlgebraExpr::xp(&a, 2));
        let k = AlgebraExpr::k_node(&a, 0, 1).braid_apply(Braid::T(1)).unwrap();
        assert_eq!(k, AlgebraExpr::k(&a, a.cartan.reflect(1, &[1, 0, 0])));
    }

    #[test]
    fn k_commutation_normal_form() {
        let a = alg("A2~1");
        let kx = AlgebraExpr::k_node(&a, 1, 1).mul(&AlgebraExpr::xp(&a, 2));
        let xk = AlgebraExpr::xp(&a, 2).mul(&AlgebraExpr::k_node(&a, 1, 1));
        assert_eq!(kx, xk.scale(&Scalar::q().inv().unwrap()));
        let x = AlgebraExpr::xp(&a, 0);
        assert!(x.q_commutator(&x, &Scalar::one()).unwrap().is_zero());
    }

    #[test]
    fn round_trip_and_multiplicative() {
        for s in ["C2~1", "A2~1", "A2~2", "D3~2", "A4~2", "C3~1"] {
            let a = alg(s);
            for i in 0..a.size() {
                for j in 0..a.size() {
                    for x in [AlgebraExpr::xp(&a, j), AlgebraExpr::xm(&a, j), AlgebraExpr::k_node(&a, j, 1)] {
                        let y = x.braid_apply(Braid::T(i)).unwrap().braid_apply(Braid::TInv(i)).unwrap();
                        assert_eq!(y, x, "{s}: T{i}^-1 T{i} on {x}");
                        let y = x.braid_apply(Braid::TInv(i)).unwrap().braid_apply(Braid::T(i)).unwrap();
                        assert_eq!(y, x, "{s}: T{i} T{i}^-1 on {x}");
                    }
                }
            }
            let x = AlgebraExpr::xp(&a, 0).mul(&AlgebraExpr::xm(&a, 1)).mul(&AlgebraExpr::k_node(&a, 1, 1));
            let y = AlgebraExpr::xp(&a, 1);
            for i in 0..a.size() {
                let lhs = x.mul(&y).braid_apply(Braid::T(i)).unwrap();
                let rhs = x.braid_apply(Braid::T(i)).unwrap().mul(&y.braid_apply(Braid::T(i)).unwrap()).straighten();
                assert_eq!(lhs, rhs, "{s}");
            }
        }
    }

    #[test]
    fn root_vector_words() {
        // a_ij a_ji = 1: T_j T_i X_j^+ = X_i^+
        let a = alg("C3~1");
        for (i, j) in [(1, 2), (2, 1)] {
            let e = AlgebraExpr::xp(&a, j).braid_apply(Braid::T(i)).unwrap().braid_apply(Braid::T(j)).unwrap();
            assert_eq!(e, AlgebraExpr::xp(&a, i));
        }
        // a_ij a_ji = 2: T_i T_j T_i X_j^+ = X_j^+
        let e = AlgebraExpr::xp(&a, 0)
            .braid_apply(Braid::T(1))
            .unwrap()
            .braid_apply(Braid::T(0))
            .unwrap()
            .braid_apply(Braid::T(1))
            .unwrap();
        assert_eq!(e, AlgebraExpr::xp(&a, 0));
    }

    #[test]
    fn stored_words_are_translations() {
        for s in ["A2~1", "A3~1", "C2~1", "C3~1", "A2~2", "A4~2", "D3~2", "D4~2"] {
            let c = CartanData::parse(s).unwrap();
            for i in c.finite_nodes() {
                if c.reduced_word(i).is_ok() {
                    assert!(word_is_translation(&c, i).unwrap(), "{s} node {i}");
                }
            }
        }
    }

    #[test]
    fn root_vector_a2_twisted() {
        let a = alg("A2~2");
        let e = real_root_vector(&a, 1, 1).unwrap();
        let direct = AlgebraExpr::xp(&a, 1).braid_apply(Braid::T(0)).unwrap();
        assert_eq!(e, direct);
        assert!(e.is_positive_part());
        assert_eq!(e.degree(), Some(vec![1, 1]));
    }

    #[test]
    fn render_parse_round_trip() {
        let a = alg("C2~1");
        let e = AlgebraExpr::xp(&a, 1).braid_apply(Braid::T(0)).unwrap().add(&AlgebraExpr::k(&a, vec![1, -2, 0]));
        let back = AlgebraExpr::parse(&a, &e.render()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn represent_is_multiplicative() {
        let c = CartanData::parse("C2~1").unwrap();
        let a = Algebra::new(&c).unwrap();
        let img = dj_images(&c).unwrap();
        let x = AlgebraExpr::xp(&a, 0).add(&AlgebraExpr::xm(&a, 1));
        let y = AlgebraExpr::xp(&a, 2).mul(&AlgebraExpr::k_node(&a, 1, 1));
        let v = FockVec::basis(&[1, 2]);
        let lhs = represent_on(&x.mul(&y), &img, &v);
        let rhs = represent_on(&x, &img, &represent_on(&y, &img, &v));
        assert_eq!(lhs, rhs);
        let kd = AlgebraExpr::k(&a, c.delta().unwrap());
        assert_eq!(represent_on(&kd, &img, &v), v);
        let comm = AlgebraExpr::xp(&a, 1).commutator(&AlgebraExpr::xm(&a, 1));
        let rhs = AlgebraExpr::k_node(&a, 1, 1).sub(&AlgebraExpr::k_node(&a, 1, -1));
        let q1 = a.q_i(1);
        let rhs = rhs.scale(&q1.sub(&q1.inv().unwrap()).inv().unwrap());
        assert_eq!(represent_on(&comm, &img, &v), represent_on(&rhs, &img, &v));
        let op = represent(&comm.sub(&rhs), &img, 6).unwrap();
        assert!(op.first_nonzero_on_interior().is_none());
    }
}
