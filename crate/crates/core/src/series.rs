//! Truncated power series R[V]/(V^ℓ) over a Galois ring R.

use std::sync::Arc;

use crate::poly::{self, Poly};
use crate::ring::{CoeffRing, Elem, GaloisRing};

#[derive(Clone, Debug)]
pub struct SeriesRing {
    base: Arc<GaloisRing>,
    prec: usize,
}

/// Fixed-length coefficient vector of a truncated series.
pub type Series = Vec<Elem>;

impl SeriesRing {
    pub fn new(base: &Arc<GaloisRing>, prec: usize) -> Self {
        assert!(prec > 0);
        SeriesRing {
            base: base.clone(),
            prec,
        }
    }

    pub fn base(&self) -> &Arc<GaloisRing> {
        &self.base
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn constant(&self, c: Elem) -> Series {
        let mut s = vec![Elem::ZERO; self.prec];
        s[0] = c;
        s
    }

    /// Embeds a polynomial in V, dropping terms of degree ≥ ℓ.
    pub fn from_poly(&self, f: &Poly<Elem>) -> Series {
        let mut s = vec![Elem::ZERO; self.prec];
        for (d, c) in s.iter_mut().zip(f.coeffs()) {
            *d = *c;
        }
        s
    }

    pub fn to_poly(&self, s: &Series) -> Poly<Elem> {
        Poly::new(self.base.as_ref(), s.clone())
    }
}

impl CoeffRing for SeriesRing {
    type Elem = Series;

    fn zero(&self) -> Series {
        vec![Elem::ZERO; self.prec]
    }
    fn one(&self) -> Series {
        self.constant(self.base.one_elem())
    }
    fn is_zero(&self, x: &Series) -> bool {
        x.iter().all(|c| *c == Elem::ZERO)
    }
    fn add(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Series, b: &Series) -> Series {
        a.iter().zip(b).map(|(&x, &y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Series) -> Series {
        a.iter().map(|&x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Series, b: &Series) -> Series {
        let r = &self.base;
        let mut out = vec![Elem::ZERO; self.prec];
        for (i, &x) in a.iter().enumerate() {
            if x == Elem::ZERO {
                continue;
            }
            match r.mul_row(x) {
                Some(row) => {
                    for (j, &y) in b[..self.prec - i].iter().enumerate() {
                        out[i + j] = r.add(out[i + j], Elem(row[y.0 as usize] as u32));
                    }
                }
                None => {
                    for (j, &y) in b[..self.prec - i].iter().enumerate() {
                        out[i + j] = r.add(out[i + j], r.mul(x, y));
                    }
                }
            }
        }
        out
    }
    /// V-adic valuation.
    fn valuation(&self, x: &Series) -> u32 {
        x.iter()
            .position(|c| *c != Elem::ZERO)
            .unwrap_or(self.prec) as u32
    }
    fn nilpotency(&self) -> u32 {
        self.prec as u32
    }
    fn is_unit(&self, x: &Series) -> bool {
        self.base.is_unit_elem(x[0])
    }
    fn inv(&self, x: &Series) -> Option<Series> {
        if !self.is_unit(x) {
            return None;
        }
        let f = Poly::new(self.base.as_ref(), x.clone());
        let inv = poly::series_inverse(self.base.as_ref(), &f, self.prec).ok()?;
        Some(self.from_poly(&inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_nilpotency() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let s = SeriesRing::new(&r, 5);
        let x = vec![r.theta(), r.from_int(2), Elem::ZERO, r.one_elem(), Elem::ZERO];
        let y = s.inv(&x).unwrap();
        assert_eq!(s.mul(&x, &y), s.one());
        let v = s.from_poly(&Poly::monomial(r.as_ref(), r.one_elem(), 1));
        let v4 = s.mul(&s.mul(&v, &v), &s.mul(&v, &v));
        assert_eq!(s.valuation(&v4), 4);
        assert!(s.is_zero(&s.mul(&v4, &v)));
        assert!(s.inv(&v).is_none());
        // a unit of R with V-valuation 0 but 2-adic content elsewhere
        let w = vec![r.from_int(2), r.one_elem(), Elem::ZERO, Elem::ZERO, Elem::ZERO];
        assert!(!s.is_unit(&w));
        assert_eq!(s.valuation(&w), 0);
    }
}
