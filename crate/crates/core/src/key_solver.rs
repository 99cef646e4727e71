//! Gröbner bases of the solution modules
//! M_k = {(f, g) ∈ R[Z]² : U·f ≡ g mod Z^k}
//! built one order at a time, plus the jump from M_k to M_{k+ℓ} through
//! discrepancy polynomials.
//!
//! Everything is phrased for the slightly more general relation
//! A·f − B·g ≡ 0 mod Z^k; M_k is A = U, B = 1.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};
use crate::ring::{Elem, GaloisRing};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairPoly {
    pub f: Poly<Elem>,
    pub g: Poly<Elem>,
}

impl PairPoly {
    pub fn new(f: Poly<Elem>, g: Poly<Elem>) -> Self {
        PairPoly { f, g }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// Position of the leading monomial: (Z^a, 0) ↦ 2a, (0, Z^b) ↦ 2b + 1.
    pub fn rank(&self) -> Option<usize> {
        let rf = self.f.degree().map(|d| 2 * d);
        let rg = self.g.degree().map(|d| 2 * d + 1);
        rf.max(rg)
    }

    pub fn lead_coeff(&self) -> Option<Elem> {
        let r = self.rank()?;
        Some(if r % 2 == 0 {
            *self.f.lead().unwrap()
        } else {
            *self.g.lead().unwrap()
        })
    }

    pub fn times_z(&self, ring: &GaloisRing) -> PairPoly {
        PairPoly {
            f: poly::shift_up(ring, &self.f, 1),
            g: poly::shift_up(ring, &self.g, 1),
        }
    }

    pub fn scale(&self, ring: &GaloisRing, c: Elem) -> PairPoly {
        PairPoly {
            f: poly::scale(ring, &c, &self.f),
            g: poly::scale(ring, &c, &self.g),
        }
    }

    /// a·self with a polynomial multiplier.
    pub fn mul_poly(&self, ring: &GaloisRing, a: &Poly<Elem>) -> PairPoly {
        PairPoly {
            f: poly::mul(ring, a, &self.f),
            g: poly::mul(ring, a, &self.g),
        }
    }

    pub fn sub(&self, ring: &GaloisRing, other: &PairPoly) -> PairPoly {
        PairPoly {
            f: poly::sub(ring, &self.f, &other.f),
            g: poly::sub(ring, &self.g, &other.g),
        }
    }
}

/// Coefficient of Z^k in a·b.
fn coeff_of_product(ring: &GaloisRing, a: &Poly<Elem>, b: &Poly<Elem>, k: usize) -> Elem {
    let bc = b.coeffs();
    let mut acc = Elem::ZERO;
    for (i, &x) in a.coeffs().iter().enumerate().take(k + 1) {
        if let Some(&y) = bc.get(k - i) {
            acc = ring.add(acc, ring.mul(x, y));
        }
    }
    acc
}

/// Coefficient of Z^k in A·f − B·g.
fn relation_coeff(ring: &GaloisRing, a: &Poly<Elem>, b: &Poly<Elem>, elt: &PairPoly, k: usize) -> Elem {
    ring.sub(
        coeff_of_product(ring, a, &elt.f, k),
        coeff_of_product(ring, b, &elt.g, k),
    )
}

/// Basis of {(f, g) : A f − B g ≡ 0 mod Z^k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub elements: Vec<PairPoly>,
    pub k: usize,
    pub a: Poly<Elem>,
    pub b: Poly<Elem>,
}

impl GroebnerBasis {
    /// Whether every element satisfies the relation modulo Z^k.
    pub fn is_valid(&self, ring: &GaloisRing) -> bool {
        self.elements
            .iter()
            .all(|e| (0..self.k).all(|i| relation_coeff(ring, &self.a, &self.b, e, i) == Elem::ZERO))
    }

    /// Elements with unit leading coefficient, by increasing rank.
    pub fn unit_leading(&self, ring: &GaloisRing) -> Vec<&PairPoly> {
        let mut out: Vec<&PairPoly> = self
            .elements
            .iter()
            .filter(|e| e.lead_coeff().is_some_and(|c| ring.is_unit_elem(c)))
            .collect();
        out.sort_by_key(|e| e.rank());
        out
    }
}

/// The full module R[Z]² as {p^i (1,0), p^i (0,1) : 0 ≤ i < r}. Over a
/// field this is {(1,0), (0,1)}; for r > 1 the p-multiples are needed so
/// that leading monomials with positive valuation are covered.
pub fn bf_init(ring: &GaloisRing, u: &Poly<Elem>) -> GroebnerBasis {
    init_relation(ring, u.clone(), Poly::one(ring))
}

fn init_relation(ring: &GaloisRing, a: Poly<Elem>, b: Poly<Elem>) -> GroebnerBasis {
    let mut elements = Vec::new();
    for i in 0..ring.r() {
        let c = Poly::constant(ring, ring.mul_p_pow(ring.one_elem(), i));
        elements.push(PairPoly::new(c.clone(), Poly::zero()));
        elements.push(PairPoly::new(Poly::zero(), c));
    }
    GroebnerBasis { elements, k: 0, a, b }
}

/// ζ = coefficient of Z^k in U·f − g.
pub fn discrepancy(ring: &GaloisRing, elt: &PairPoly, u: &Poly<Elem>, k: usize) -> Elem {
    relation_coeff(ring, u, &Poly::one(ring), elt, k)
}

/// Advances the basis from order k to k + 1.
pub fn bf_refine(ring: &GaloisRing, basis: &GroebnerBasis) -> GroebnerBasis {
    let k = basis.k;
    let zeta: Vec<Elem> = basis
        .elements
        .iter()
        .map(|e| relation_coeff(ring, &basis.a, &basis.b, e, k))
        .collect();
    let ranks: Vec<Option<usize>> = basis.elements.iter().map(PairPoly::rank).collect();
    let mut order: Vec<usize> = (0..basis.elements.len()).collect();
    order.sort_by_key(|&i| ranks[i]);

    let elements = basis
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if zeta[i] == Elem::ZERO {
                return e.clone();
            }
            let helper = order.iter().copied().find(|&j| {
                ranks[j].cmp(&ranks[i]) == Ordering::Less
                    && zeta[j] != Elem::ZERO
                    && ring.val(zeta[j]) <= ring.val(zeta[i])
            });
            match helper {
                Some(j) => {
                    let q = ring.divide(zeta[i], zeta[j]).expect("valuation checked");
                    e.sub(ring, &basis.elements[j].scale(ring, q))
                }
                None => e.times_z(ring),
            }
        })
        .collect();
    let out = GroebnerBasis {
        elements,
        k: k + 1,
        a: basis.a.clone(),
        b: basis.b.clone(),
    };
    debug_assert!(out.is_valid(ring), "refined basis left the module");
    out
}

fn solve_relation(ring: &GaloisRing, a: Poly<Elem>, b: Poly<Elem>, k: usize) -> GroebnerBasis {
    let mut basis = init_relation(ring, a, b);
    for _ in 0..k {
        basis = bf_refine(ring, &basis);
    }
    basis
}

/// Basis of M_k after k refinements.
pub fn bf_solve(ring: &GaloisRing, u: &Poly<Elem>, k: usize) -> GroebnerBasis {
    solve_relation(ring, u.clone(), Poly::one(ring), k)
}

/// Σ_{λ<ℓ} (U f − g)_{k+λ} Z^λ.
pub fn discrepancy_poly(
    ring: &GaloisRing,
    elt: &PairPoly,
    u: &Poly<Elem>,
    k: usize,
    ell: usize,
) -> Poly<Elem> {
    Poly::new(
        ring,
        (0..ell).map(|l| discrepancy(ring, elt, u, k + l)).collect(),
    )
}

/// (a, b) with a·elt_i − b·elt_j ∈ M_{k+ℓ} and deg a + deg b ≤ ℓ: the
/// lowest-ranked basis element of {(a, b) : a h_i − b h_j ≡ 0 mod Z^ℓ}
/// whose leading coefficient is a unit.
pub fn jump_pair(
    ring: &GaloisRing,
    elt_i: &PairPoly,
    elt_j: &PairPoly,
    u: &Poly<Elem>,
    k: usize,
    ell: usize,
) -> Result<(Poly<Elem>, Poly<Elem>)> {
    let hi = discrepancy_poly(ring, elt_i, u, k, ell);
    if ell == 0 || hi.is_zero() {
        return Ok((Poly::one(ring), Poly::zero()));
    }
    let hj = discrepancy_poly(ring, elt_j, u, k, ell);
    let basis = solve_relation(ring, hi, hj, ell);
    basis
        .unit_leading(ring)
        .into_iter()
        .find(|e| e.f.degree().unwrap_or(0) + e.g.degree().unwrap_or(0) <= ell)
        .map(|e| (e.f.clone(), e.g.clone()))
        .ok_or(Error::NoUnitLeadingPair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::from_ints;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn z4() -> Arc<GaloisRing> {
        GaloisRing::new(2, 2, 1).unwrap()
    }

    fn pair(ring: &Arc<GaloisRing>, f: &[i64], g: &[i64]) -> PairPoly {
        PairPoly::new(from_ints(ring, f), from_ints(ring, g))
    }

    #[test]
    fn discrepancy_examples() {
        let r = z4();
        let one = Poly::one(r.as_ref());
        assert_eq!(discrepancy(&r, &pair(&r, &[1], &[]), &one, 0), r.one_elem());
        assert_eq!(discrepancy(&r, &pair(&r, &[], &[1]), &one, 0), r.from_int(3));
        let u = from_ints(&r, &[1, 2, 3]);
        let f = from_ints(&r, &[1, 1]);
        let g = poly::trunc(r.as_ref(), &poly::mul(r.as_ref(), &u, &f), 2);
        // U f = 1 + 3Z + 1Z² + 3Z³: the coefficient at Z² survives
        assert_eq!(discrepancy(&r, &PairPoly::new(f.clone(), g.clone()), &u, 1), Elem::ZERO);
        assert_eq!(discrepancy(&r, &PairPoly::new(f, g), &u, 2), r.one_elem());
    }

    #[test]
    fn first_refinement_for_u_one() {
        let r = z4();
        let b = bf_refine(&r, &bf_init(&r, &Poly::one(r.as_ref())));
        assert_eq!(b.k, 1);
        assert!(b.elements.contains(&pair(&r, &[0, 1], &[])));
        assert!(b.elements.contains(&pair(&r, &[1], &[1])));
        assert!(b.is_valid(&r));
    }

    #[test]
    fn passes_through_members() {
        let r = z4();
        let u = from_ints(&r, &[1, 1]);
        let basis = GroebnerBasis {
            elements: vec![pair(&r, &[1], &[1, 1])],
            k: 1,
            a: u.clone(),
            b: Poly::one(r.as_ref()),
        };
        assert_eq!(bf_refine(&r, &basis).elements, basis.elements);
    }

    #[test]
    fn membership_random_gr42() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let u = Poly::new(r.as_ref(), (0..5).map(|_| Elem(rng.gen_range(0..16))).collect());
            let b = bf_solve(&r, &u, 4);
            assert!(b.is_valid(&r));
            assert_eq!(bf_solve(&r, &u, 0), bf_init(&r, &u));
        }
    }

    /// All pairs over Z4 with deg f, deg g ≤ d.
    fn all_pairs(r: &Arc<GaloisRing>, d: usize) -> Vec<PairPoly> {
        let n = d + 1;
        let total = 4usize.pow(2 * n as u32);
        (0..total)
            .map(|mut idx| {
                let mut digits = Vec::with_capacity(2 * n);
                for _ in 0..2 * n {
                    digits.push((idx % 4) as i64);
                    idx /= 4;
                }
                pair(r, &digits[..n], &digits[n..])
            })
            .collect()
    }

    fn lm_divides(r: &GaloisRing, small: &PairPoly, big: &PairPoly) -> bool {
        let (rs, rb) = (small.rank().unwrap(), big.rank().unwrap());
        rs % 2 == rb % 2
            && rs <= rb
            && r.val(small.lead_coeff().unwrap()) <= r.val(big.lead_coeff().unwrap())
    }

    #[test]
    fn spanning_exhaustive_z4() {
        let r = z4();
        let pairs = all_pairs(&r, 2);
        for u in [&[1i64, 1][..], &[1, 2, 3], &[1, 1, 3, 3], &[3, 0, 1]] {
            let u = from_ints(&r, u);
            for k in 0..=3 {
                let b = bf_solve(&r, &u, k);
                for p in &pairs {
                    if p.is_zero() {
                        continue;
                    }
                    let member = (0..k).all(|i| discrepancy(&r, p, &u, i) == Elem::ZERO);
                    if member {
                        assert!(
                            b.elements.iter().any(|e| !e.is_zero() && lm_divides(&r, e, p)),
                            "U={u:?} k={k} p={p:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn jump_trivial_cases() {
        let r = z4();
        let u = from_ints(&r, &[1, 1]);
        let m = pair(&r, &[1], &[1, 1]);
        assert_eq!(
            jump_pair(&r, &m, &m, &u, 1, 3).unwrap(),
            (Poly::one(r.as_ref()), Poly::zero())
        );
        let x = pair(&r, &[1], &[]);
        assert_eq!(
            jump_pair(&r, &x, &x, &u, 0, 0).unwrap(),
            (Poly::one(r.as_ref()), Poly::zero())
        );
    }

    #[test]
    fn jump_contract_random() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 40 {
            let u = Poly::new(r.as_ref(), (0..6).map(|_| Elem(rng.gen_range(0..16))).collect());
            let b = bf_solve(&r, &u, 2);
            let units = b.unit_leading(&r);
            if units.len() < 2 {
                continue;
            }
            let (ei, ej) = (units[0], units[1]);
            let Ok((a, bb)) = jump_pair(&r, ei, ej, &u, 2, 2) else {
                continue;
            };
            let comb = ei.mul_poly(&r, &a).sub(&r, &ej.mul_poly(&r, &bb));
            assert!((0..4).all(|i| discrepancy(&r, &comb, &u, i) == Elem::ZERO));
            assert!(a.degree().unwrap_or(0) + bb.degree().unwrap_or(0) <= 2);
            checked += 1;
        }
    }

    /// All nonzero polynomials of degree ≤ d over GR(4, 2).
    fn polys_up_to(r: &GaloisRing, d: usize) -> Vec<Poly<Elem>> {
        let count = 16usize.pow(d as u32 + 1);
        (0..count)
            .map(|mut x| {
                let c = (0..=d)
                    .map(|_| {
                        let e = Elem((x % 16) as u32);
                        x /= 16;
                        e
                    })
                    .collect();
                Poly::new(r, c)
            })
            .filter(|p| !p.is_zero())
            .collect()
    }

    #[test]
    fn jump_minimal_against_enumeration() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let rr = r.as_ref();
        let ell = 2;
        let by_degree: Vec<Vec<Poly<Elem>>> = (0..=ell).map(|d| polys_up_to(rr, d)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 4 {
            let u = Poly::new(rr, (0..6).map(|_| Elem(rng.gen_range(0..16))).collect());
            let b = bf_solve(&r, &u, 2);
            let units = b.unit_leading(&r);
            if units.len() < 2 {
                continue;
            }
            let (ei, ej) = (units[0], units[1]);
            let hi = discrepancy_poly(&r, ei, &u, 2, ell);
            if hi.is_zero() {
                continue;
            }
            let hj = discrepancy_poly(&r, ej, &u, 2, ell);
            let Ok((a, bb)) = jump_pair(&r, ei, ej, &u, 2, ell) else {
                continue;
            };
            let found = PairPoly::new(a, bb).rank().unwrap();
            let solves = |x: &Poly<Elem>, y: &Poly<Elem>| {
                let lhs = poly::sub(rr, &poly::mul(rr, x, &hi), &poly::mul(rr, y, &hj));
                (0..ell).all(|i| lhs.coeff(rr, i) == Elem::ZERO)
            };
            let mut best = usize::MAX;
            let zero = Poly::zero();
            for da in 0..=ell + 1 {
                // da = ell + 1 stands for a = 0
                let avec: Vec<&Poly<Elem>> = if da > ell {
                    vec![&zero]
                } else {
                    by_degree[da].iter().collect()
                };
                let bdeg = if da > ell { ell } else { ell - da };
                for x in avec {
                    for y in std::iter::once(&zero).chain(by_degree[bdeg].iter()) {
                        if (x.is_zero() && y.is_zero()) || !solves(x, y) {
                            continue;
                        }
                        let cand = PairPoly::new(x.clone(), y.clone());
                        if rr.is_unit_elem(cand.lead_coeff().unwrap()) {
                            best = best.min(cand.rank().unwrap());
                        }
                    }
                }
            }
            assert_eq!(found, best);
            checked += 1;
        }
    }
}
