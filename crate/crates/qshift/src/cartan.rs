//! Cartan data for affine and finite Kac labels, root-lattice reflections,
//! the stored translation words and weights as characters on the `K_i`.
//!
//! Node positions are `0..size()`. For affine labels position `p` is the node
//! `p`; for finite labels position `p` is the node `p + 1`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalars::{Rat, Scalar};

type R64 = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("cannot parse type label `{0}`")]
    BadLabel(String),
    #[error("invalid rank for {0}")]
    BadRank(String),
    #[error("node {0} out of range")]
    BadNode(usize),
    #[error("q_i is not a power of v^(1/4) for node {0}")]
    NotQuarterIntegral(usize),
    #[error("no stored word for node {1} of {0}")]
    NoWord(String, usize),
    #[error("pairing exponent {0} is not realizable as a power of v")]
    NotRealizable(String),
    #[error("{0} is not affine")]
    NotAffine(String),
}

/// A Kac label `X_N^(r)`, or a finite label when `twist == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeLabel {
    pub letter: char,
    pub big_n: usize,
    pub twist: u8,
}

impl TypeLabel {
    pub fn affine(letter: char, big_n: usize, twist: u8) -> Self {
        TypeLabel { letter, big_n, twist }
    }

    pub fn finite(letter: char, big_n: usize) -> Self {
        TypeLabel { letter, big_n, twist: 0 }
    }

    pub fn is_affine(&self) -> bool {
        self.twist > 0
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist == 0 {
            write!(f, "{}{}", self.letter, self.big_n)
        } else {
            write!(f, "{}{}~{}", self.letter, self.big_n, self.twist)
        }
    }
}

impl FromStr for TypeLabel {
    type Err = CartanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CartanError::BadLabel(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        if !('A'..='G').contains(&letter) {
            return Err(bad());
        }
        let rest: String = chars.collect();
        let (n, r) = match rest.split_once('~') {
            Some((n, r)) => (n, r.parse::<u8>().map_err(|_| bad())?),
            None => (rest.as_str(), 0),
        };
        let big_n = n.parse::<usize>().map_err(|_| bad())?;
        if r > 3 {
            return Err(bad());
        }
        Ok(TypeLabel { letter, big_n, twist: r })
    }
}

/// The four affine families admitting solutions of the shift system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `A_n^(1)`
    A,
    /// `C_n^(1)`
    C,
    /// `A_{2n}^(2)` with reversed numbering
    A2,
    /// `D_{n+1}^(2)`
    D,
}

impl Family {
    /// `(kappa_1, kappa_2)` for the non-A families.
    pub fn kappa(self) -> (i64, i64) {
        match self {
            Family::C => (1, 1),
            Family::A2 => (1, 0),
            Family::D => (0, 0),
            Family::A => (0, 0),
        }
    }
}

/// A root-lattice element in simple-root coordinates.
pub type RootVec = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub label: TypeLabel,
    /// `a[i][j] = a_ij`
    pub a: Vec<Vec<i32>>,
    pub d: Vec<Rat>,
    pub d_tilde: Vec<Rat>,
    pub marks: Option<Vec<i64>>,
    pub comarks: Option<Vec<i64>>,
}

fn build(size: usize, edges: &[(usize, usize, i32, i32)]) -> Vec<Vec<i32>> {
    let mut a = vec![vec![0; size]; size];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(i, j, aij, aji) in edges {
        a[i][j] = aij;
        a[j][i] = aji;
    }
    a
}

fn chain(from: usize, to: usize) -> Vec<(usize, usize, i32, i32)> {
    (from..to).map(|i| (i, i + 1, -1, -1)).collect()
}

/// Primitive positive integer vector spanning the kernel of `m`, if the
/// kernel is one-dimensional and positive.
fn positive_kernel(m: &[Vec<i32>]) -> Option<Vec<i64>> {
    let n = m.len();
    let mut rows: Vec<Vec<R64>> =
        m.iter().map(|r| r.iter().map(|&x| R64::from_integer(x as i64)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for k in 0..n {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c];
                for j in 0..n {
                    let t = rows[r][j] * f;
                    rows[k][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![R64::zero(); n];
    v[free] = R64::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[row][free];
    }
    let l = v.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let mut out: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = out.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    for x in out.iter_mut() {
        *x /= g;
    }
    if out.iter().all(|&x| x < 0) {
        for x in out.iter_mut() {
            *x = -*x;
        }
    }
    if out.iter().all(|&x| x > 0) {
        Some(out)
    } else {
        None
    }
}

/// Symmetrizer with `d_i a_ij = d_j a_ji`, smallest entry 1.
fn symmetrizer(a: &[Vec<i32>]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut d: Vec<Option<R64>> = vec![None; n];
    d[0] = Some(R64::one());
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if i == j || a[i][j] == 0 {
                continue;
            }
            if a[j][i] == 0 {
                return None;
            }
            let dj = d[i].unwrap() * R64::new(a[i][j] as i64, a[j][i] as i64);
            match d[j] {
                None => {
                    d[j] = Some(dj);
                    stack.push(j);
                }
                Some(x) if x != dj => return None,
                _ => {}
            }
        }
    }
    let d: Vec<R64> = d.into_iter().collect::<Option<_>>()?;
    let min = *d.iter().min().unwrap();
    Some(d.iter().map(|x| to_big(*x / min)).collect())
}

fn to_big(x: R64) -> Rat {
    Rat::new((*x.numer()).into(), (*x.denom()).into())
}

impl CartanData {
    pub fn parse(label: &str) -> Result<Self, CartanError> {
        CartanData::new(label.parse()?)
    }

    pub fn new(label: TypeLabel) -> Result<Self, CartanError> {
        let bad = || CartanError::BadRank(label.to_string());
        let nn = label.big_n;
        let a = match (label.twist, label.letter) {
            (1, 'A') if nn == 1 => build(2, &[(0, 1, -2, -2)]),
            (1, 'A') if nn >= 2 => {
                let mut e = chain(0, nn);
                e.push((nn, 0, -1, -1));
                build(nn + 1, &e)
            }
            (1, 'B') if nn >= 3 => {
                let mut e = vec![(0, 2, -1, -1), (1, 2, -1, -1)];
                e.extend(chain(2, nn - 1));
                e.push((nn - 1, nn, -1, -2));
                build(nn + 1, &e)
            }
            (1, 'C') if nn >= 2 => {
                let mut e = vec![(0, 1, -1, -2)];
                e.extend(chain(1, nn - 1));
                e.push((nn - 1, nn, -2, -1));
                build(nn + 1, &e)
            }
            (1, 'D') if nn >= 4 => {
                let mut e = vec![(0, 2, -1, -1), (1, 2, -1, -1)];
                e.extend(chain(2, nn - 2));
                e.push((nn - 2, nn - 1, -1, -1));
                e.push((nn - 2, nn, -1, -1));
                build(nn + 1, &e)
            }
            (1, 'E') if (6..=8).contains(&nn) => {
                // Bourbaki: 1-3-4-5-..., 2-4; the affine node hangs off the
                // end of the longest arm (E6: off 2, E7: off 1, E8: off 8).
                let mut e = vec![(1, 3, -1, -1), (2, 4, -1, -1)];
                e.extend(chain(3, nn));
                let extra = match nn {
                    6 => (0, 2, -1, -1),
                    7 => (0, 1, -1, -1),
                    _ => (0, 8, -1, -1),
                };
                e.push(extra);
                build(nn + 1, &e)
            }
            (1, 'F') if nn == 4 => build(5, &[(0, 1, -1, -1), (1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)]),
            (1, 'G') if nn == 2 => build(3, &[(0, 1, -1, -1), (1, 2, -1, -3)]),
            (2, 'A') if nn == 2 => build(2, &[(0, 1, -1, -4)]),
            (2, 'A') if nn >= 4 && nn % 2 == 0 => {
                let l = nn / 2;
                let mut e = vec![(0, 1, -1, -2)];
                e.extend(chain(1, l - 1));
                e.push((l - 1, l, -1, -2));
                build(l + 1, &e)
            }
            (2, 'A') if nn >= 5 && nn % 2 == 1 => {
                let l = nn.div_ceil(2);
                let mut e = vec![(0, 2, -1, -1), (1, 2, -1, -1)];
                e.extend(chain(2, l - 1));
                e.push((l - 1, l, -2, -1));
                build(l + 1, &e)
            }
            (2, 'D') if nn >= 3 => {
                let l = nn - 1;
                let mut e = vec![(0, 1, -2, -1)];
                e.extend(chain(1, l - 1));
                e.push((l - 1, l, -1, -2));
                build(l + 1, &e)
            }
            (2, 'E') if nn == 6 => build(5, &[(0, 1, -1, -1), (1, 2, -1, -1), (2, 3, -2, -1), (3, 4, -1, -1)]),
            (3, 'D') if nn == 4 => build(3, &[(0, 1, -1, -1), (1, 2, -3, -1)]),
            (0, 'A') if nn >= 1 => build(nn, &chain(0, nn - 1)),
            (0, 'B') if nn >= 2 => {
                let mut e = chain(0, nn - 2);
                e.push((nn - 2, nn - 1, -1, -2));
                build(nn, &e)
            }
            (0, 'C') if nn >= 2 => {
                let mut e = chain(0, nn - 2);
                e.push((nn - 2, nn - 1, -2, -1));
                build(nn, &e)
            }
            (0, 'D') if nn >= 4 => {
                let mut e = chain(0, nn - 3);
                e.push((nn - 3, nn - 2, -1, -1));
                e.push((nn - 3, nn - 1, -1, -1));
                build(nn, &e)
            }
            (0, 'E') if (6..=8).contains(&nn) => {
                let mut e = vec![(0, 2, -1, -1), (1, 3, -1, -1)];
                e.extend(chain(2, nn - 1));
                build(nn, &e)
            }
            (0, 'F') if nn == 4 => build(4, &[(0, 1, -1, -1), (1, 2, -1, -2), (2, 3, -1, -1)]),
            (0, 'G') if nn == 2 => build(2, &[(0, 1, -1, -3)]),
            _ => return Err(bad()),
        };
        let (marks, comarks) = if label.is_affine() {
            let t: Vec<Vec<i32>> = (0..a.len()).map(|i| (0..a.len()).map(|j| a[j][i]).collect()).collect();
            (Some(positive_kernel(&a).ok_or_else(bad)?), Some(positive_kernel(&t).ok_or_else(bad)?))
        } else {
            (None, None)
        };
        let d = match (&marks, &comarks) {
            (Some(m), Some(c)) => m.iter().zip(c).map(|(&m, &c)| Rat::new(c.into(), m.into())).collect(),
            _ => symmetrizer(&a).ok_or_else(bad)?,
        };
        let reversed_a2 = label.twist == 2 && label.letter == 'A' && label.big_n % 2 == 0;
        let d_tilde = if label.twist == 1 || reversed_a2 {
            vec![Rat::one(); a.len()]
        } else {
            d.clone()
        };
        Ok(CartanData { label, a, d, d_tilde, marks, comarks })
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }

    /// `n = |I| - 1` for affine labels, `|I|` for finite ones.
    pub fn rank(&self) -> usize {
        if self.label.is_affine() {
            self.size() - 1
        } else {
            self.size()
        }
    }

    pub fn is_affine(&self) -> bool {
        self.label.is_affine()
    }

    /// Display name of the node at position `p`.
    pub fn node_name(&self, p: usize) -> usize {
        if self.is_affine() {
            p
        } else {
            p + 1
        }
    }

    pub fn family(&self) -> Option<Family> {
        let l = self.label;
        match (l.twist, l.letter) {
            (1, 'A') => Some(Family::A),
            (1, 'C') => Some(Family::C),
            (2, 'A') if l.big_n % 2 == 0 => Some(Family::A2),
            (2, 'D') => Some(Family::D),
            _ => None,
        }
    }

    /// Number of oscillator slots in the realization of this type: `|I|`
    /// for `A_{n-1}^(1)`, `n` otherwise.
    pub fn slots(&self) -> usize {
        match self.family() {
            Some(Family::A) => self.size(),
            _ => self.size() - 1,
        }
    }

    /// Nodes of the finite part `I_0` (all nodes but 0).
    pub fn finite_nodes(&self) -> Vec<usize> {
        (1..self.size()).collect()
    }

    pub fn check_node(&self, i: usize) -> Result<(), CartanError> {
        if i < self.size() {
            Ok(())
        } else {
            Err(CartanError::BadNode(i))
        }
    }

    /// `4 d_i` if integral.
    pub fn d4(&self, i: usize) -> Result<i32, CartanError> {
        self.check_node(i)?;
        let x = &self.d[i] * Rat::from_integer(4.into());
        if x.is_integer() {
            Ok(num_traits::ToPrimitive::to_i32(&x.to_integer()).unwrap())
        } else {
            Err(CartanError::NotQuarterIntegral(i))
        }
    }

    /// `q_i = q^{d_i} = v^{4 d_i}`.
    pub fn q_of(&self, i: usize) -> Result<Scalar, CartanError> {
        Ok(Scalar::v_pow(self.d4(i)?))
    }

    /// `v`-exponent of `q^{(beta, gamma)}`.
    pub fn pair_v(&self, beta: &[i32], gamma: &[i32]) -> Result<i32, CartanError> {
        let mut acc = 0;
        for i in 0..self.size() {
            if beta[i] == 0 {
                continue;
            }
            let di = self.d4(i)?;
            for j in 0..self.size() {
                acc += beta[i] * gamma[j] * di * self.a[i][j];
            }
        }
        Ok(acc)
    }

    pub fn simple_root(&self, i: usize) -> RootVec {
        let mut r = vec![0; self.size()];
        r[i] = 1;
        r
    }

    pub fn delta(&self) -> Option<RootVec> {
        self.marks.as_ref().map(|m| m.iter().map(|&x| x as i32).collect())
    }

    /// `s_i(beta) = beta - <beta, alpha_i^vee> alpha_i`.
    pub fn reflect(&self, i: usize, beta: &[i32]) -> RootVec {
        let c: i32 = (0..self.size()).map(|j| beta[j] * self.a[i][j]).sum();
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    }

    /// Applies `w = tau s_{i_1} ... s_{i_m}` to `beta`.
    pub fn apply_word(&self, w: &ReducedWord, beta: &[i32]) -> RootVec {
        let mut b = beta.to_vec();
        for &i in w.word.iter().rev() {
            b = self.reflect(i, &b);
        }
        if let Some(t) = &w.tau {
            let mut out = vec![0; b.len()];
            for (j, &x) in b.iter().enumerate() {
                out[t[j]] += x;
            }
            b = out;
        }
        b
    }

    pub fn is_diagram_automorphism(&self, tau: &[usize]) -> bool {
        (0..self.size()).all(|i| (0..self.size()).all(|j| self.a[tau[i]][tau[j]] == self.a[i][j]))
    }

    /// The stored word for `omega~_i`.
    pub fn reduced_word(&self, i: usize) -> Result<ReducedWord, CartanError> {
        let none = || CartanError::NoWord(self.label.to_string(), i);
        let size = self.size();
        let n = self.rank();
        let fam = self.family().ok_or_else(none)?;
        match fam {
            Family::A => {
                // here n is the number of nodes
                let nn = size;
                if i == 0 || i >= nn {
                    return Err(none());
                }
                let tau: Vec<usize> = (0..nn).map(|j| (j + i) % nn).collect();
                let mut word = Vec::new();
                for k in 1..=i {
                    let hi = nn - i + k - 1;
                    word.extend((k..=hi).rev());
                }
                Ok(ReducedWord { tau: Some(tau), word })
            }
            Family::A2 => {
                if i != n {
                    return Err(none());
                }
                let mut word = Vec::new();
                for _ in 0..n {
                    word.extend(0..=n);
                }
                Ok(ReducedWord { tau: None, word })
            }
            Family::C | Family::D => {
                if i + 1 == n {
                    let mut word = Vec::new();
                    for _ in 0..n - 1 {
                        word.extend(0..=n);
                        word.push(n - 1);
                    }
                    Ok(ReducedWord { tau: None, word })
                } else if i == n {
                    let tau: Vec<usize> = (0..=n).map(|j| n - j).collect();
                    let mut word = vec![n];
                    for k in (1..n).rev() {
                        word.extend(k..=n);
                    }
                    Ok(ReducedWord { tau: Some(tau), word })
                } else {
                    Err(none())
                }
            }
        }
    }

    /// `lambda(K_i) = q^{(beta, alpha_i)}` for `beta` given in terms of
    /// fundamental weights, simple roots and `delta`.
    pub fn weight_from_hstar(&self, terms: &[(HStar, Rat)]) -> Result<Weight, CartanError> {
        let size = self.size();
        let mut e = vec![Rat::zero(); size];
        for (t, c) in terms {
            match *t {
                HStar::Omega(j) => {
                    self.check_node(j)?;
                    e[j] += c * &self.d[j];
                }
                HStar::Alpha(j) => {
                    self.check_node(j)?;
                    for (i, ei) in e.iter_mut().enumerate() {
                        *ei += c * &self.d[i] * Rat::from_integer(self.a[i][j].into());
                    }
                }
                HStar::Delta => {}
            }
        }
        let mut values = Vec::with_capacity(size);
        for x in e {
            let v = &x * Rat::from_integer(4.into());
            if !v.is_integer() {
                return Err(CartanError::NotRealizable(x.to_string()));
            }
            let k = num_traits::ToPrimitive::to_i32(&v.to_integer()).unwrap();
            values.push(Scalar::v_pow(k));
        }
        Ok(Weight { values })
    }
}

/// Basis elements of the dual Cartan used by [`CartanData::weight_from_hstar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HStar {
    Omega(usize),
    Alpha(usize),
    Delta,
}

/// `T_tau T_{i_1} ... T_{i_m}`; `tau` maps node `j` to `tau[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    pub tau: Option<Vec<usize>>,
    pub word: Vec<usize>,
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(t) = &self.tau {
            parts.push(format!("tau{t:?}"));
        }
        parts.extend(self.word.iter().map(|i| format!("s{i}")));
        write!(f, "{}", parts.join(" "))
    }
}

/// A character on the `K_i`: `values[i] = lambda(K_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub values: Vec<Scalar>,
}

impl Weight {
    pub fn trivial(size: usize) -> Self {
        Weight { values: vec![Scalar::one(); size] }
    }

    pub fn mul(&self, o: &Weight) -> Weight {
        Weight { values: self.values.iter().zip(&o.values).map(|(a, b)| a * b).collect() }
    }

    /// `lambda(K_delta) = prod_i lambda(K_i)^{a_i}`.
    pub fn on_delta(&self, cartan: &CartanData) -> Result<Scalar, CartanError> {
        let marks = cartan.marks.as_ref().ok_or_else(|| CartanError::NotAffine(cartan.label.to_string()))?;
        let mut acc = Scalar::one();
        for (v, &m) in self.values.iter().zip(marks) {
            acc = acc.mul(&v.pow(m as i32).expect("weights are invertible"));
        }
        Ok(acc)
    }

    pub fn is_level_zero(&self, cartan: &CartanData) -> bool {
        self.on_delta(cartan).map(|x| x.is_one()).unwrap_or(false)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Every affine label of rank `n <= max_rank` from the Kac tables.
pub fn affine_labels(max_rank: usize) -> Vec<TypeLabel> {
    let mut out = Vec::new();
    for big_n in 1..=12 {
        for (letter, twist) in [('A', 1), ('B', 1), ('C', 1), ('D', 1), ('E', 1), ('F', 1), ('G', 1), ('A', 2), ('D', 2), ('E', 2), ('D', 3)] {
            let l = TypeLabel::affine(letter, big_n, twist);
            if let Ok(c) = CartanData::new(l) {
                if c.rank() <= max_rank {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// True when `diag(d) A` is symmetric with positive `d`.
pub fn is_symmetrizable(c: &CartanData) -> bool {
    let n = c.size();
    (0..n).all(|i| (0..n).all(|j| &c.d[i] * Rat::from_integer(c.a[i][j].into()) == &c.d[j] * Rat::from_integer(c.a[j][i].into())))
        && c.d.iter().all(|x| x.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(s: &str) -> CartanData {
        CartanData::parse(s).unwrap()
    }

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a.into(), b.into())
    }

    #[test]
    fn a1_affine() {
        let c = cd("A1~1");
        assert_eq!(c.a, vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(c.marks, Some(vec![1, 1]));
    }

    #[test]
    fn a2_twisted_reversed() {
        let c = cd("A2~2");
        assert_eq!(c.a[1][0], -4);
        assert_eq!(c.a[0][1], -1);
        assert_eq!(c.marks, Some(vec![1, 2]));
        assert_eq!(c.d, vec![r(2, 1), r(1, 2)]);
        assert_eq!(c.d_tilde, vec![r(1, 1), r(1, 1)]);
    }

    #[test]
    fn symmetrizers_and_marks() {
        let c = cd("C3~1");
        assert_eq!(c.d, vec![r(1, 1), r(1, 2), r(1, 2), r(1, 1)]);
        assert_eq!(c.marks, Some(vec![1, 2, 2, 1]));
        let a = cd("A6~2");
        assert_eq!(a.d, vec![r(2, 1), r(1, 1), r(1, 1), r(1, 2)]);
        assert_eq!(a.marks, Some(vec![1, 2, 2, 2]));
        let d = cd("D3~2");
        assert_eq!(d.d, vec![r(1, 1), r(2, 1), r(1, 1)]);
        assert_eq!(d.d_tilde[1], r(2, 1));
        assert_eq!(d.marks, Some(vec![1, 1, 1]));
        assert_eq!(cd("F4~1").marks, Some(vec![1, 2, 3, 4, 2]));
        assert_eq!(cd("G2~1").marks, Some(vec![1, 2, 3]));
        assert_eq!(cd("D4~3").marks, Some(vec![1, 2, 1]));
        assert_eq!(cd("E6~2").marks, Some(vec![1, 2, 3, 2, 1]));
        assert_eq!(cd("E6~1").marks, Some(vec![1, 1, 2, 2, 3, 2, 1]));
    }

    #[test]
    fn invalid_labels() {
        assert!(CartanData::parse("C1~1").is_err());
        assert!(CartanData::parse("A3~2").is_err());
        assert!(CartanData::parse("X3~1").is_err());
        assert!(CartanData::parse("B2~1").is_err());
    }

    #[test]
    fn all_tables_valid() {
        for l in affine_labels(6) {
            let c = CartanData::new(l).unwrap();
            assert!(is_symmetrizable(&c), "{l}");
            let m = c.marks.clone().unwrap();
            for i in 0..c.size() {
                let s: i64 = (0..c.size()).map(|j| c.a[i][j] as i64 * m[j]).sum();
                assert_eq!(s, 0, "{l}");
            }
        }
    }

    #[test]
    fn q_values() {
        assert_eq!(cd("C3~1").q_of(1).unwrap(), Scalar::v_pow(2));
        assert_eq!(cd("A3~1").q_of(2).unwrap(), Scalar::v_pow(4));
        assert_eq!(cd("D4~2").q_of(1).unwrap(), Scalar::v_pow(8));
        assert!(cd("G2~1").q_of(2).is_err());
    }

    #[test]
    fn reflections() {
        let c = cd("A1~1");
        assert_eq!(c.reflect(0, &[0, 1]), vec![2, 1]);
        let c3 = cd("C3~1");
        for i in 0..4 {
            assert_eq!(c3.reflect(i, &c3.simple_root(i))[i], -1);
            let d = c3.delta().unwrap();
            assert_eq!(c3.reflect(i, &d), d);
            let x = vec![1, -2, 0, 3];
            assert_eq!(c3.reflect(i, &c3.reflect(i, &x)), x);
        }
    }

    #[test]
    fn stored_words() {
        let a22 = cd("A2~2");
        assert_eq!(a22.reduced_word(1).unwrap(), ReducedWord { tau: None, word: vec![0, 1] });
        let c2 = cd("C2~1");
        assert_eq!(c2.reduced_word(1).unwrap().word, vec![0, 1, 2, 1]);
        let d3 = cd("D3~2");
        let w = d3.reduced_word(2).unwrap();
        assert_eq!(w.word, vec![2, 1, 2]);
        assert_eq!(w.tau, Some(vec![2, 1, 0]));
    }

    #[test]
    fn words_translate_simple_roots() {
        for s in ["A2~1", "A3~1", "A4~1", "C2~1", "C3~1", "C4~1", "A2~2", "A4~2", "A6~2", "D3~2", "D4~2", "D5~2"] {
            let c = cd(s);
            let delta = c.delta().unwrap();
            for i in c.finite_nodes() {
                let Ok(w) = c.reduced_word(i) else { continue };
                if let Some(t) = &w.tau {
                    assert!(c.is_diagram_automorphism(t), "{s}");
                }
                let img = c.apply_word(&w, &c.simple_root(i));
                let dt = &c.d_tilde[i];
                assert!(dt.is_integer());
                let k = num_traits::ToPrimitive::to_i32(&dt.to_integer()).unwrap();
                let want: Vec<i32> = (0..c.size()).map(|j| c.simple_root(i)[j] - k * delta[j]).collect();
                assert_eq!(img, want, "{s} node {i}");
            }
        }
    }

    #[test]
    fn weights_from_hstar() {
        let c = cd("C3~1");
        let w = c.weight_from_hstar(&[]).unwrap();
        assert_eq!(w, Weight::trivial(4));
        let w = c.weight_from_hstar(&[(HStar::Delta, r(1, 1))]).unwrap();
        assert_eq!(w, Weight::trivial(4));
        let w = c
            .weight_from_hstar(&[(HStar::Omega(0), r(1, 2)), (HStar::Omega(2), r(1, 1)), (HStar::Omega(3), r(-3, 2))])
            .unwrap();
        assert_eq!(w.values, vec![Scalar::v_pow(2), Scalar::one(), Scalar::v_pow(2), Scalar::v_pow(-6)]);
        let d = c.weight_from_hstar(&[(HStar::Alpha(0), r(1, 1)), (HStar::Alpha(1), r(2, 1)), (HStar::Alpha(2), r(2, 1)), (HStar::Alpha(3), r(1, 1))]).unwrap();
        assert_eq!(d, Weight::trivial(4));
    }
}
