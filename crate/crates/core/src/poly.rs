//! Dense univariate polynomials over any [`CoeffRing`] and sparse bivariate
//! polynomials over a Galois ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Elem, GaloisRing};

/// Dense ascending coefficient list with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn new<R: CoeffRing<Elem = E> + ?Sized>(ring: &R, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant<R: CoeffRing<Elem = E> + ?Sized>(ring: &R, c: E) -> Self {
        Poly::new(ring, vec![c])
    }

    pub fn one<R: CoeffRing<Elem = E> + ?Sized>(ring: &R) -> Self {
        Poly::constant(ring, ring.one())
    }

    /// c·Z^k.
    pub fn monomial<R: CoeffRing<Elem = E> + ?Sized>(ring: &R, c: E, k: usize) -> Self {
        let mut coeffs = vec![ring.zero(); k];
        coeffs.push(c);
        Poly::new(ring, coeffs)
    }

    /// Z − a.
    pub fn linear<R: CoeffRing<Elem = E> + ?Sized>(ring: &R, a: &E) -> Self {
        Poly::new(ring, vec![ring.neg(a), ring.one()])
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (degree + 1, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<R: CoeffRing<Elem = E> + ?Sized>(&self, ring: &R, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn is_monic<R: CoeffRing<Elem = E> + ?Sized>(&self, ring: &R) -> bool {
        self.lead().is_some_and(|c| ring.is_one(c))
    }

    pub fn map_into<R2: CoeffRing + ?Sized>(
        &self,
        ring: &R2,
        f: impl Fn(&E) -> R2::Elem,
    ) -> Poly<R2::Elem> {
        Poly::new(ring, self.coeffs.iter().map(f).collect())
    }
}

pub fn add<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let coeffs = (0..n)
        .map(|i| match (a.coeffs.get(i), b.coeffs.get(i)) {
            (Some(x), Some(y)) => ring.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    Poly::new(ring, coeffs)
}

pub fn neg<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>) -> Poly<R::Elem> {
    Poly::new(ring, a.coeffs.iter().map(|x| ring.neg(x)).collect())
}

pub fn sub<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
    let n = a.len().max(b.len());
    let coeffs = (0..n)
        .map(|i| match (a.coeffs.get(i), b.coeffs.get(i)) {
            (Some(x), Some(y)) => ring.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => ring.neg(y),
            (None, None) => unreachable!(),
        })
        .collect();
    Poly::new(ring, coeffs)
}

pub fn mul<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    Poly::new(ring, out)
}

/// a·b mod Z^k.
pub fn mul_trunc<R: CoeffRing + ?Sized>(
    ring: &R,
    a: &Poly<R::Elem>,
    b: &Poly<R::Elem>,
    k: usize,
) -> Poly<R::Elem> {
    let n = (a.len() + b.len()).saturating_sub(1).min(k);
    let mut out = vec![ring.zero(); n];
    for (i, x) in a.coeffs.iter().enumerate().take(n) {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    Poly::new(ring, out)
}

pub fn scale<R: CoeffRing + ?Sized>(ring: &R, c: &R::Elem, a: &Poly<R::Elem>) -> Poly<R::Elem> {
    Poly::new(ring, a.coeffs.iter().map(|x| ring.mul(c, x)).collect())
}

/// a mod Z^k.
pub fn trunc<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
    Poly::new(ring, a.coeffs.iter().take(k).cloned().collect())
}

/// Z^k · a.
pub fn shift_up<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
    if a.is_zero() {
        return Poly::zero();
    }
    let mut coeffs = vec![ring.zero(); k];
    coeffs.extend(a.coeffs.iter().cloned());
    Poly { coeffs }
}

pub fn derivative<R: CoeffRing + ?Sized>(ring: &R, a: &Poly<R::Elem>) -> Poly<R::Elem> {
    let coeffs = a
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| times_int(ring, c, i as u64))
        .collect();
    Poly::new(ring, coeffs)
}

/// c added to itself k times.
pub fn times_int<R: CoeffRing + ?Sized>(ring: &R, c: &R::Elem, mut k: u64) -> R::Elem {
    let mut acc = ring.zero();
    let mut base = c.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = ring.add(&acc, &base);
        }
        base = ring.add(&base, &base);
        k >>= 1;
    }
    acc
}

/// Division with remainder by a monic divisor.
pub fn quorem<R: CoeffRing + ?Sized>(
    ring: &R,
    f: &Poly<R::Elem>,
    h: &Poly<R::Elem>,
) -> Result<(Poly<R::Elem>, Poly<R::Elem>)> {
    if !h.is_monic(ring) {
        return Err(Error::DivisorNotMonic);
    }
    let dh = h.len() - 1;
    if f.len() <= dh {
        return Ok((Poly::zero(), f.clone()));
    }
    let mut rem = f.coeffs.clone();
    let mut quot = vec![ring.zero(); f.len() - dh];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dh].clone();
        if ring.is_zero(&c) {
            continue;
        }
        for (i, hc) in h.coeffs[..dh].iter().enumerate() {
            rem[k + i] = ring.sub(&rem[k + i], &ring.mul(&c, hc));
        }
        rem[k + dh] = ring.zero();
        quot[k] = c;
    }
    rem.truncate(dh);
    Ok((Poly::new(ring, quot), Poly::new(ring, rem)))
}

pub fn eval<R: CoeffRing + ?Sized>(ring: &R, f: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
    f.coeffs
        .iter()
        .rev()
        .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

/// Power-series inverse of `a` mod Z^k; a(0) must be a unit.
pub fn series_inverse<R: CoeffRing + ?Sized>(
    ring: &R,
    a: &Poly<R::Elem>,
    k: usize,
) -> Result<Poly<R::Elem>> {
    let a0 = a.coeffs.first().ok_or(Error::NotAUnit)?;
    let inv0 = ring.inv(a0).ok_or(Error::NotAUnit)?;
    let mut out = vec![ring.zero(); k];
    if k == 0 {
        return Ok(Poly::zero());
    }
    out[0] = inv0.clone();
    for i in 1..k {
        let mut acc = ring.zero();
        for j in 1..=i.min(a.len() - 1) {
            acc = ring.add(&acc, &ring.mul(&a.coeffs[j], &out[i - j]));
        }
        out[i] = ring.neg(&ring.mul(&inv0, &acc));
    }
    Ok(Poly::new(ring, out))
}

/// Binomial coefficients C(n, k) mod `modulus` for n < size, row-major.
pub(crate) fn binomials(size: usize, modulus: u64) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(size);
    for n in 0..size {
        let mut row = vec![1u64; n + 1];
        for k in 1..n {
            row[k] = (rows[n - 1][k - 1] + rows[n - 1][k]) % modulus;
        }
        rows.push(row);
    }
    rows
}

/// f(Z + a).
pub fn taylor_shift(ring: &GaloisRing, f: &Poly<Elem>, a: Elem) -> Poly<Elem> {
    // Horner in the shifted variable: ((c_d)(Z+a) + c_{d−1})(Z+a) + …
    let za = Poly::new(ring, vec![a, ring.one_elem()]);
    f.coeffs
        .iter()
        .rev()
        .fold(Poly::zero(), |acc, c| add(ring, &mul(ring, &acc, &za), &Poly::constant(ring, *c)))
}

impl Poly<Elem> {
    /// `poly{[e0];[e1];...}` ascending; zero is `poly{}`.
    pub fn to_text(&self, ring: &GaloisRing) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| ring.format_elem(c)).collect();
        format!("poly{{{}}}", parts.join(";"))
    }

    pub fn parse(ring: &GaloisRing, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("poly{")
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("bad polynomial {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Poly::zero());
        }
        let coeffs = inner
            .split(';')
            .map(|c| ring.parse_elem(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(ring, coeffs))
    }
}

/// Sparse bivariate polynomial Σ c_{ij} X^i Y^j over a Galois ring.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), Elem>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), Elem)>) -> Self {
        let mut q = BiPoly::zero();
        for ((i, j), c) in terms {
            q.set(i, j, c);
        }
        q
    }

    /// Polynomial in X only.
    pub fn from_x_poly(f: &Poly<Elem>) -> Self {
        BiPoly::from_terms(f.coeffs().iter().enumerate().map(|(i, &c)| ((i, 0), c)))
    }

    /// Σ_j c_j(X) Y^j from its Y-coefficients.
    pub fn from_y_coeffs(cols: &[Poly<Elem>]) -> Self {
        let mut q = BiPoly::zero();
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.coeffs().iter().enumerate() {
                q.set(i, j, x);
            }
        }
        q
    }

    pub fn set(&mut self, i: usize, j: usize, c: Elem) {
        if c == Elem::ZERO {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), c);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.terms.get(&(i, j)).copied().unwrap_or(Elem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Elem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Coefficients of Y^0, Y^1, … as polynomials in X.
    pub fn y_coeffs(&self, ring: &GaloisRing) -> Vec<Poly<Elem>> {
        let Some(dy) = self.deg_y() else {
            return Vec::new();
        };
        let mut cols = vec![Vec::new(); dy + 1];
        for (&(i, j), &c) in &self.terms {
            let col = &mut cols[j];
            if col.len() <= i {
                col.resize(i + 1, Elem::ZERO);
            }
            col[i] = c;
        }
        cols.into_iter().map(|c| Poly::new(ring, c)).collect()
    }

    /// Swaps the roles of X and Y.
    pub fn transpose(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), &c)| ((j, i), c)).collect(),
        }
    }

    pub fn add(&self, ring: &GaloisRing, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.terms {
            let v = ring.add(out.get(i, j), c);
            out.set(i, j, v);
        }
        out
    }

    pub fn sub(&self, ring: &GaloisRing, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), &c) in &other.terms {
            let v = ring.sub(out.get(i, j), c);
            out.set(i, j, v);
        }
        out
    }

    pub fn scale(&self, ring: &GaloisRing, c: Elem) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&k, &v)| (k, ring.mul(c, v))))
    }

    pub fn mul(&self, ring: &GaloisRing, other: &BiPoly) -> BiPoly {
        let mut acc: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for (&(i1, j1), &a) in &self.terms {
            for (&(i2, j2), &b) in &other.terms {
                let e = acc.entry((i1 + i2, j1 + j2)).or_insert(Elem::ZERO);
                *e = ring.add(*e, ring.mul(a, b));
            }
        }
        BiPoly::from_terms(acc)
    }

    pub fn eval(&self, ring: &GaloisRing, x: Elem, y: Elem) -> Elem {
        let cols = self.y_coeffs(ring);
        cols.iter()
            .rev()
            .fold(Elem::ZERO, |acc, c| ring.add(ring.mul(acc, y), eval(ring, c, &x)))
    }

    /// Q(x, Y) as a polynomial in Y.
    pub fn eval_x(&self, ring: &GaloisRing, x: Elem) -> Poly<Elem> {
        let cols = self.y_coeffs(ring);
        Poly::new(ring, cols.iter().map(|c| eval(ring, c, &x)).collect())
    }

    /// Q(X + x0, Y + y0) by binomial expansion.
    pub fn shift(&self, ring: &GaloisRing, x0: Elem, y0: Elem) -> BiPoly {
        let (Some(dx), Some(dy)) = (self.deg_x(), self.deg_y()) else {
            return BiPoly::zero();
        };
        let binom = binomials(dx.max(dy) + 1, ring.characteristic() as u64);
        let xpow = powers(ring, x0, dx);
        let ypow = powers(ring, y0, dy);
        let mut acc: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for (&(i, j), &c) in &self.terms {
            for a in 0..=i {
                let ca = ring.mul(c, ring.mul(ring.from_int(binom[i][a] as i64), xpow[i - a]));
                if ca == Elem::ZERO {
                    continue;
                }
                for b in 0..=j {
                    let term = ring.mul(ca, ring.mul(ring.from_int(binom[j][b] as i64), ypow[j - b]));
                    let e = acc.entry((a, b)).or_insert(Elem::ZERO);
                    *e = ring.add(*e, term);
                }
            }
        }
        BiPoly::from_terms(acc)
    }

    /// Y^d · Q(X, 1/Y).
    pub fn y_reverse(&self, d: usize) -> Result<BiPoly> {
        match self.deg_y() {
            Some(dy) if dy > d => Err(Error::DegreeTooSmall { d, actual: dy }),
            _ => Ok(BiPoly {
                terms: self.terms.iter().map(|(&(i, j), &c)| ((i, d - j), c)).collect(),
            }),
        }
    }

    /// Lines `i j [coef]`, sorted by (i, j).
    pub fn to_text(&self, ring: &GaloisRing) -> String {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| format!("{i} {j} {}\n", ring.format_elem(c)))
            .collect()
    }

    /// Parses `i j [coef]` lines; blank lines and `#` comments are skipped.
    /// Repeated monomials are summed.
    pub fn parse(ring: &GaloisRing, text: &str) -> Result<BiPoly> {
        let mut q = BiPoly::zero();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(3, char::is_whitespace);
            let mut next_usize = || -> Result<usize> {
                parts
                    .next()
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad term line {line:?}")))
            };
            let i = next_usize()?;
            let j = next_usize()?;
            let c = ring.parse_elem(
                parts
                    .next()
                    .ok_or_else(|| Error::Parse(format!("bad term line {line:?}")))?,
            )?;
            let v = ring.add(q.get(i, j), c);
            q.set(i, j, v);
        }
        Ok(q)
    }
}

fn powers(ring: &GaloisRing, x: Elem, d: usize) -> Vec<Elem> {
    let mut out = Vec::with_capacity(d + 1);
    let mut cur = ring.one_elem();
    for _ in 0..=d {
        out.push(cur);
        cur = ring.mul(cur, x);
    }
    out
}

/// Convenience: builds a polynomial over a shared ring from integer constants.
pub fn from_ints(ring: &Arc<GaloisRing>, coeffs: &[i64]) -> Poly<Elem> {
    Poly::new(ring.as_ref(), coeffs.iter().map(|&c| ring.from_int(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z4() -> Arc<GaloisRing> {
        GaloisRing::new(2, 2, 1).unwrap()
    }

    fn random_poly(ring: &GaloisRing, rng: &mut ChaCha8Rng, len: usize) -> Poly<Elem> {
        Poly::new(ring, (0..len).map(|_| Elem(rng.gen_range(0..ring.size() as u32))).collect())
    }

    #[test]
    fn quorem_examples() {
        let r = z4();
        let (q, rem) = quorem(r.as_ref(), &from_ints(&r, &[2, 2]), &from_ints(&r, &[1, 1])).unwrap();
        assert_eq!(q, from_ints(&r, &[2]));
        assert!(rem.is_zero());
        let f = from_ints(&r, &[1, 3, 2, 1]);
        let (q, rem) = quorem(r.as_ref(), &f, &Poly::one(r.as_ref())).unwrap();
        assert_eq!((q, rem), (f.clone(), Poly::zero()));
        let (q, rem) = quorem(r.as_ref(), &from_ints(&r, &[2, 3, 1]), &from_ints(&r, &[1, 1])).unwrap();
        assert_eq!(q, from_ints(&r, &[2, 1]));
        assert!(rem.is_zero());
        assert_eq!(
            quorem(r.as_ref(), &f, &from_ints(&r, &[1, 2])),
            Err(Error::DivisorNotMonic)
        );
    }

    #[test]
    fn quorem_round_trip_random() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (lf, lh) = (rng.gen_range(0..9), rng.gen_range(0..5));
            let f = random_poly(&r, &mut rng, lf);
            let mut h = random_poly(&r, &mut rng, lh).into_coeffs();
            h.push(r.one_elem());
            let h = Poly::new(r.as_ref(), h);
            let (q, rem) = quorem(r.as_ref(), &f, &h).unwrap();
            assert!(rem.len() < h.len());
            assert_eq!(add(r.as_ref(), &mul(r.as_ref(), &q, &h), &rem), f);
        }
    }

    #[test]
    fn eval_examples() {
        let r = z4();
        assert_eq!(eval(r.as_ref(), &from_ints(&r, &[1, -1]), &r.one_elem()), Elem::ZERO);
        let q = BiPoly::from_terms([((1, 1), r.one_elem()), ((0, 0), r.one_elem())]);
        assert_eq!(q.eval(&r, Elem::ZERO, r.from_int(3)), r.one_elem());
        // Y² − (1+X)Y + X
        let q = BiPoly::from_terms([
            ((0, 2), r.one_elem()),
            ((0, 1), r.from_int(-1)),
            ((1, 1), r.from_int(-1)),
            ((1, 0), r.one_elem()),
        ]);
        for u in 0..4 {
            assert_eq!(q.eval(&r, Elem(u), r.one_elem()), Elem::ZERO);
        }
    }

    #[test]
    fn shift_examples() {
        let r = z4();
        let one = r.one_elem();
        let y = BiPoly::from_terms([((0, 1), one)]);
        assert_eq!(y.shift(&r, Elem::ZERO, Elem::ZERO), y);
        assert_eq!(
            y.shift(&r, Elem::ZERO, one),
            BiPoly::from_terms([((0, 1), one), ((0, 0), one)])
        );
        let xy = BiPoly::from_terms([((1, 1), one)]);
        assert_eq!(
            xy.shift(&r, one, one),
            BiPoly::from_terms([((1, 1), one), ((1, 0), one), ((0, 1), one), ((0, 0), one)])
        );
    }

    #[test]
    fn shift_properties_random() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let q = BiPoly::from_terms(
                (0..6).map(|_| ((rng.gen_range(0..4), rng.gen_range(0..4)), Elem(rng.gen_range(0..16)))),
            );
            let (a, b) = (Elem(rng.gen_range(0..16)), Elem(rng.gen_range(0..16)));
            let s = q.shift(&r, a, b);
            assert_eq!(s.shift(&r, r.neg(a), r.neg(b)), q);
            let (x, y) = (Elem(rng.gen_range(0..16)), Elem(rng.gen_range(0..16)));
            assert_eq!(s.eval(&r, x, y), q.eval(&r, r.add(x, a), r.add(y, b)));
        }
    }

    #[test]
    fn y_reverse_examples() {
        let r = z4();
        let one = r.one_elem();
        let q = BiPoly::from_terms([((0, 2), one), ((1, 0), one)]);
        assert_eq!(
            q.y_reverse(2).unwrap(),
            BiPoly::from_terms([((1, 2), one), ((0, 0), one)])
        );
        let c = BiPoly::from_terms([((0, 0), one)]);
        assert_eq!(c.y_reverse(0).unwrap(), c);
        assert_eq!(q.y_reverse(1), Err(Error::DegreeTooSmall { d: 1, actual: 2 }));
        assert_eq!(q.y_reverse(5).unwrap().y_reverse(5).unwrap(), q);
    }

    #[test]
    fn text_round_trip() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let f = Poly::new(r.as_ref(), vec![r.theta(), Elem::ZERO, r.one_elem()]);
        let s = f.to_text(&r);
        assert_eq!(s, "poly{[0,1];[0,0];[1,0]}");
        assert_eq!(Poly::parse(&r, &s).unwrap(), f);
        let q = BiPoly::from_terms([((0, 1), r.theta()), ((2, 0), r.one_elem())]);
        assert_eq!(BiPoly::parse(&r, &q.to_text(&r)).unwrap(), q);
    }

    #[test]
    fn series_inverse_round_trip() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut a = random_poly(&r, &mut rng, 6).into_coeffs();
            if a.is_empty() {
                continue;
            }
            a[0] = r.one_elem();
            let a = Poly::new(r.as_ref(), a);
            let inv = series_inverse(r.as_ref(), &a, 8).unwrap();
            assert_eq!(mul_trunc(r.as_ref(), &a, &inv, 8), Poly::one(r.as_ref()));
        }
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let f = random_poly(&r, &mut rng, 5);
            let a = Elem(rng.gen_range(0..16));
            let g = taylor_shift(&r, &f, a);
            let x = Elem(rng.gen_range(0..16));
            assert_eq!(eval(r.as_ref(), &g, &x), eval(r.as_ref(), &f, &r.add(x, a)));
        }
    }
}
