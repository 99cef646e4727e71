//! Polynomial factorization over the residue field F_{p^m}, represented as
//! a Galois ring with r = 1: square-free decomposition, distinct-degree
//! splitting and seeded equal-degree splitting.

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};
use crate::ring::{Elem, GaloisRing};

/// unit · ∏ factor^mult with monic factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniFactorList {
    pub unit: Elem,
    pub factors: Vec<(Poly<Elem>, usize)>,
}

impl UniFactorList {
    pub fn expand(&self, ring: &GaloisRing) -> Poly<Elem> {
        let mut acc = Poly::constant(ring, self.unit);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = poly::mul(ring, &acc, f);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.factors
            .iter()
            .all(|(f, e)| *e == 1 && seen.insert(f.coeffs().to_vec()))
    }
}

fn check_field(f: &GaloisRing) {
    debug_assert!(f.is_field(), "expected a residue field");
}

pub fn make_monic(field: &GaloisRing, f: &Poly<Elem>) -> (Elem, Poly<Elem>) {
    match f.lead() {
        None => (Elem::ZERO, Poly::zero()),
        Some(&c) => {
            let inv = field.unit_inverse(c).expect("nonzero field element");
            (c, poly::scale(field, &inv, f))
        }
    }
}

/// Remainder of a by b ≠ 0.
pub fn rem(field: &GaloisRing, a: &Poly<Elem>, b: &Poly<Elem>) -> Poly<Elem> {
    divmod(field, a, b).1
}

pub fn divmod(field: &GaloisRing, a: &Poly<Elem>, b: &Poly<Elem>) -> (Poly<Elem>, Poly<Elem>) {
    let (c, bm) = make_monic(field, b);
    let (q, r) = poly::quorem(field, a, &bm).expect("monic");
    let cinv = field.unit_inverse(c).expect("nonzero");
    (poly::scale(field, &cinv, &q), r)
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(field: &GaloisRing, a: &Poly<Elem>, b: &Poly<Elem>) -> Poly<Elem> {
    check_field(field);
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    make_monic(field, &a).1
}

/// (g, s, t) with s·a + t·b = g = gcd(a, b) monic.
pub fn ext_gcd(
    field: &GaloisRing,
    a: &Poly<Elem>,
    b: &Poly<Elem>,
) -> (Poly<Elem>, Poly<Elem>, Poly<Elem>) {
    check_field(field);
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(field), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one(field));
    while !r1.is_zero() {
        let (q, r) = divmod(field, &r0, &r1);
        let s = poly::sub(field, &s0, &poly::mul(field, &q, &s1));
        let t = poly::sub(field, &t0, &poly::mul(field, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.lead() {
        None => (r0, s0, t0),
        Some(&c) => {
            let inv = field.unit_inverse(c).expect("nonzero");
            (
                poly::scale(field, &inv, &r0),
                poly::scale(field, &inv, &s0),
                poly::scale(field, &inv, &t0),
            )
        }
    }
}

/// a^e mod f.
pub fn powmod(field: &GaloisRing, a: &Poly<Elem>, mut e: u128, f: &Poly<Elem>) -> Poly<Elem> {
    let mut base = rem(field, a, f);
    let mut acc = rem(field, &Poly::one(field), f);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(field, &poly::mul(field, &acc, &base), f);
        }
        base = rem(field, &poly::mul(field, &base, &base), f);
        e >>= 1;
    }
    acc
}

/// p-th root of a polynomial whose exponents are all multiples of p.
fn pth_root(field: &GaloisRing, f: &Poly<Elem>) -> Poly<Elem> {
    let p = field.p() as usize;
    let e = field.size() / field.p() as u64;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.pow(c, e))
        .collect();
    Poly::new(field, coeffs)
}

/// Square-free decomposition of a monic f: pairs (g_i, i) with f = ∏ g_i^i.
pub fn squarefree_decomposition(field: &GaloisRing, f: &Poly<Elem>) -> Vec<(Poly<Elem>, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = poly::derivative(field, f);
    if df.is_zero() {
        let root = pth_root(field, f);
        let p = field.p() as usize;
        return squarefree_decomposition(field, &root)
            .into_iter()
            .map(|(g, i)| (g, i * p))
            .collect();
    }
    let mut c = gcd(field, f, &df);
    let mut w = divmod(field, f, &c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = gcd(field, &w, &c);
        let z = divmod(field, &w, &y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((make_monic(field, &z).1, i));
        }
        c = divmod(field, &c, &y).0;
        w = y;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(field, &make_monic(field, &c).1);
        let p = field.p() as usize;
        out.extend(
            squarefree_decomposition(field, &root)
                .into_iter()
                .map(|(g, j)| (g, j * p)),
        );
    }
    out
}

/// Distinct-degree factorization of a monic square-free f: (product, d).
pub fn distinct_degree(field: &GaloisRing, f: &Poly<Elem>) -> Vec<(Poly<Elem>, usize)> {
    let q = field.size() as u128;
    let x = Poly::monomial(field, field.one_elem(), 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            out.push((rest.clone(), rest.degree().unwrap()));
            break;
        }
        h = powmod(field, &h, q, &rest);
        let g = gcd(field, &poly::sub(field, &h, &x), &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = divmod(field, &rest, &g).0;
            h = rem(field, &h, &rest);
            out.push((g, d));
        }
    }
    out
}

/// Splits a monic square-free f whose irreducible factors all have degree d.
pub fn equal_degree<G: Rng + ?Sized>(
    field: &GaloisRing,
    f: &Poly<Elem>,
    d: usize,
    rng: &mut G,
) -> Vec<Poly<Elem>> {
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.clone()];
    }
    let q = field.size() as u128;
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| Elem(rng.gen_range(0..field.size() as u32))).collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if field.p() == 2 {
            // absolute trace a + a^2 + … + a^{2^{md−1}}
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..field.m() * d {
                cur = rem(field, &poly::mul(field, &cur, &cur), f);
                acc = poly::add(field, &acc, &cur);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - 1) / 2;
            poly::sub(field, &powmod(field, &a, e, f), &Poly::one(field))
        };
        let g = gcd(field, &b, f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divmod(field, f, &g).0;
            let mut out = equal_degree(field, &g, d, rng);
            out.extend(equal_degree(field, &make_monic(field, &h).1, d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles.
pub fn field_factor<G: Rng + ?Sized>(
    field: &GaloisRing,
    f: &Poly<Elem>,
    rng: &mut G,
) -> UniFactorList {
    check_field(field);
    let (unit, monic) = make_monic(field, f);
    let mut factors = Vec::new();
    for (g, mult) in squarefree_decomposition(field, &monic) {
        for (h, d) in distinct_degree(field, &g) {
            for irr in equal_degree(field, &h, d, rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|a, b| {
        (a.0.len(), a.0.coeffs(), a.1).cmp(&(b.0.len(), b.0.coeffs(), b.1))
    });
    UniFactorList { unit, factors }
}

/// Field factorization that insists on distinct simple factors.
pub fn squarefree_factor<G: Rng + ?Sized>(
    field: &GaloisRing,
    f: &Poly<Elem>,
    rng: &mut G,
) -> Result<UniFactorList> {
    let fl = field_factor(field, f, rng);
    if fl.is_squarefree() {
        Ok(fl)
    } else {
        Err(Error::NotSquareFree)
    }
}

/// Solutions of rows·x = rhs over a field in n unknowns, as a particular
/// solution (free variables zero) and a basis of the null space.
pub fn solve_affine(
    field: &GaloisRing,
    rows: &[Vec<Elem>],
    rhs: &[Elem],
    n: usize,
) -> Option<(Vec<Elem>, Vec<Vec<Elem>>)> {
    let mut m: Vec<Vec<Elem>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, &v)| {
            let mut r = row.clone();
            r.push(v);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != Elem::ZERO) else {
            continue;
        };
        m.swap(rank, p);
        let inv = field.unit_inverse(m[rank][c]).expect("nonzero in a field");
        for k in 0..=n {
            m[rank][k] = field.mul(m[rank][k], inv);
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != Elem::ZERO {
                let f = m[i][c];
                for k in 0..=n {
                    let sub = field.mul(f, m[rank][k]);
                    m[i][k] = field.sub(m[i][k], sub);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if m[rank..].iter().any(|row| row[n] != Elem::ZERO) {
        return None;
    }
    let mut x = vec![Elem::ZERO; n];
    for (row, &c) in m.iter().zip(&pivots) {
        x[c] = row[n];
    }
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Elem::ZERO; n];
            v[free] = field.one_elem();
            for (row, &c) in m.iter().zip(&pivots) {
                v[c] = field.neg(row[free]);
            }
            v
        })
        .collect();
    Some((x, kernel))
}
