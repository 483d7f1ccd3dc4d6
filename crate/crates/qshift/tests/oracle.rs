//! Independent numeric recomputation of derived values. The library works
//! symbolically; here everything is evaluated at a rational point and
//! composed with plain sparse arithmetic over `Q(i)`, and a few results
//! are frozen.

use num_rational::BigRational;
use qshift::cartan::CartanData;
use qshift::lweights::{compare_component, o_sign, Component, Method};
use qshift::oscillator::{dj_images, occ_of, Coeff, FockOperator};
use qshift::scalars::{tau_nu, Gauss, Scalar};

type Num = Vec<Vec<(usize, Gauss)>>;

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn at(c: &Coeff, v: &BigRational, z: &BigRational) -> Gauss {
    let s = c.eval(&[Scalar::one(), Scalar::from_rat(z.clone())]).unwrap();
    s.eval(v).unwrap()
}

fn numeric(op: &FockOperator, v: &BigRational, z: &BigRational) -> Num {
    op.rows.iter().map(|row| row.iter().map(|(t, c)| (*t, at(c, v, z))).collect()).collect()
}

fn apply(op: &Num, x: &[Gauss]) -> Vec<Gauss> {
    let mut out = vec![Gauss::zero(); x.len()];
    for (src, xs) in x.iter().enumerate() {
        if xs.is_zero() {
            continue;
        }
        for (t, c) in &op[src] {
            out[*t] = out[*t].add(&c.mul(xs));
        }
    }
    out
}

/// `[X_i^+, X_j^-] = delta_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1})` on basis
/// vectors far enough from the cutoff.
fn check_commutators(label: &str) {
    let c = CartanData::parse(label).unwrap();
    let img = dj_images(&c).unwrap();
    let (m, v, z) = (7usize, r(3, 2), r(5, 3));
    let n = img.slots;
    let num = |e| numeric(&FockOperator::from_expr(e, m), &v, &z);
    let xp: Vec<Num> = img.xp.iter().map(num).collect();
    let xm: Vec<Num> = img.xm.iter().map(num).collect();
    let k: Vec<Num> = img.k.iter().map(num).collect();
    let kinv: Vec<Num> = img.kinv.iter().map(num).collect();
    let dim = m.pow(n as u32);
    let mut checked = 0;
    for src in 0..dim {
        if occ_of(src, m, n).iter().any(|&x| x as usize + 4 >= m) {
            continue;
        }
        let mut e = vec![Gauss::zero(); dim];
        e[src] = Gauss::one();
        for i in 0..c.size() {
            let qi = Scalar::v_pow(c.d4(i).unwrap()).eval(&v).unwrap();
            let den = qi.add(&qi.inv().mul(&Gauss::from_int(-1))).inv();
            for j in 0..c.size() {
                let a = apply(&xp[i], &apply(&xm[j], &e));
                let b = apply(&xm[j], &apply(&xp[i], &e));
                let mut lhs: Vec<Gauss> = a.iter().zip(&b).map(|(x, y)| x.sub(y)).collect();
                if i == j {
                    let kk = apply(&k[i], &e);
                    let ki = apply(&kinv[i], &e);
                    for t in 0..dim {
                        lhs[t] = lhs[t].sub(&kk[t].sub(&ki[t]).mul(&den));
                    }
                }
                assert!(lhs.iter().all(Gauss::is_zero), "{label}: [X{i}+, X{j}-] at {:?}", occ_of(src, m, n));
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn commutators_numeric_all_families() {
    for label in ["A1~1", "A2~1", "C2~1", "A2~2", "A4~2", "D3~2"] {
        check_commutators(label);
    }
}

#[test]
fn tau_at_two() {
    // q = v^4 = 16 at v = 2.
    let tau = |k| tau_nu(&Scalar::q_pow(k)).unwrap().eval(&r(2, 1)).unwrap();
    assert_eq!(tau(1), Gauss::new(r(17, 15), r(0, 1)));
    assert_eq!(tau(2), Gauss::new(r(257, 255), r(0, 1)));
}

/// `(c + u) / (1 + c u)` over `Q(i)`.
fn mobius(c: &Gauss, u: &Gauss) -> Gauss {
    c.add(u).mul(&Gauss::one().add(&c.mul(u)).inv())
}

fn lweight_value(label: &str, comp: Component, node: usize, v: &BigRational, z: &BigRational) -> Gauss {
    let c = CartanData::parse(label).unwrap();
    let cmp = compare_component(&c, comp, Method::Braid, 8).unwrap();
    let lw = cmp.computed.specialize(&o_sign(&c));
    let pos = lw.nodes.iter().position(|&i| i == node).unwrap();
    let f = &lw.f[pos];
    at(&f.num, v, z).mul(&at(&f.den, v, z).inv())
}

#[test]
fn frozen_lweight_values() {
    let (v, z) = (r(2, 1), r(3, 1));
    // C2~1, W^+: c = v^-2, u = v^-12 z.
    let want = mobius(&Gauss::new(r(1, 4), r(0, 1)), &Gauss::new(r(3, 4096), r(0, 1)));
    assert_eq!(want, Gauss::new(r(4108, 16387), r(0, 1)));
    assert_eq!(lweight_value("C2~1", Component::Plus, 2, &v, &z), want);
    // D3~2, W: c = i v^-4, u = v^-16 z.
    let want = mobius(&Gauss::new(r(0, 1), r(1, 16)), &Gauss::new(r(3, 65536), r(0, 1)));
    assert_eq!(want, Gauss::new(r(50528256, 1099511627785), r(68719476592, 1099511627785)));
    assert_eq!(lweight_value("D3~2", Component::Full, 2, &v, &z), want);
}
