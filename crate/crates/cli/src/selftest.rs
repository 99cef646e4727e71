//! Property suites run by `selftest` and the acceptance target.

use std::sync::Arc;

use leecode::field::{ext_gcd, make_monic};
use leecode::hensel::{factor_bivariate, lift_quad, FactorOptions, HenselQuad, MainVar};
use leecode::key_solver::{bf_init, bf_refine, discrepancy, discrepancy_poly, jump_pair, PairPoly};
use leecode::nega::{
    error_locator, key_equation, nega_construct, nega_encode, reconstruct_sigma, syndromes, unique_decode,
};
use leecode::poly;
use leecode::{BiPoly, Elem, GaloisRing, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trials::lee_error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    /// First violation found, if any.
    pub failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("suite {}: PASS ({} instances)", self.name, self.checked),
            Some(msg) => format!("suite {}: FAIL after {} instances: {msg}", self.name, self.checked),
        }
    }
}

/// Instance counts for the full suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSizes {
    pub hensel: usize,
    pub factor: usize,
    pub refine: usize,
    pub jump: usize,
    /// Jump instances that also get the exhaustive minimality check.
    pub jump_brute: usize,
    pub round_trip: usize,
}

impl SuiteSizes {
    pub const FULL: SuiteSizes = SuiteSizes {
        hensel: 500,
        factor: 500,
        refine: 200,
        jump: 100,
        jump_brute: 10,
        round_trip: 300,
    };

    pub const QUICK: SuiteSizes = SuiteSizes {
        hensel: 50,
        factor: 50,
        refine: 20,
        jump: 10,
        jump_brute: 2,
        round_trip: 30,
    };
}

pub fn run_all(sizes: SuiteSizes, seed: u64) -> Vec<SuiteResult> {
    vec![
        hensel_identities(sizes.hensel, seed),
        factor_products(sizes.factor, seed),
        refine_membership(sizes.refine, seed),
        jump_contract(sizes.jump, sizes.jump_brute, seed),
        locator_round_trip(sizes.round_trip, seed),
    ]
}

fn fail(name: &'static str, checked: usize, msg: String) -> SuiteResult {
    SuiteResult {
        name,
        checked,
        failure: Some(msg),
    }
}

fn pass(name: &'static str, checked: usize) -> SuiteResult {
    SuiteResult {
        name,
        checked,
        failure: None,
    }
}

fn random_poly(ring: &GaloisRing, deg: usize, rng: &mut ChaCha8Rng) -> Poly<Elem> {
    Poly::new(ring, (0..=deg).map(|_| ring.random_elem(rng)).collect())
}

fn lift(ring: &GaloisRing, f: &Poly<Elem>) -> Poly<Elem> {
    f.map_into(ring, |&c| ring.lift_coords(c))
}

fn reduce(ring: &GaloisRing, f: &Poly<Elem>) -> Poly<Elem> {
    f.map_into(ring.residue_ring(), |&c| ring.mu(c))
}

/// f* = g*·h* and s*·g* + t*·h* = 1 after lifting a coprime residue pair
/// to a perturbed f* over GR(4,2) or GR(8,2).
pub fn hensel_identities(count: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "hensel-post-identities";
    let rings = [GaloisRing::new(2, 2, 2).unwrap(), GaloisRing::new(2, 3, 2).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    let mut checked = 0;
    while checked < count {
        let r = rings[checked % 2].as_ref();
        let f = r.residue_ring();
        let gbar = random_poly(f, rng.gen_range(0..4), &mut rng);
        let hbar = make_monic(f, &random_poly(f, rng.gen_range(1..4), &mut rng)).1;
        if gbar.is_zero() || hbar.degree().unwrap_or(0) == 0 {
            continue;
        }
        let (d, s, t) = ext_gcd(f, &gbar, &hbar);
        if d.degree() != Some(0) {
            continue;
        }
        let (g, h) = (lift(r, &gbar), lift(r, &hbar));
        let noise = random_poly(r, g.len() + h.len() - 2, &mut rng);
        let two = r.from_int(r.p() as i64);
        let fstar = poly::add(r, &poly::mul(r, &g, &h), &poly::scale(r, &two, &noise));
        let quad = HenselQuad {
            g,
            h,
            s: lift(r, &s),
            t: lift(r, &t),
        };
        let out = match lift_quad(r, &fstar, quad, 1) {
            Ok(out) => out,
            Err(e) => return fail(NAME, checked, format!("lift failed: {e}")),
        };
        if poly::mul(r, &out.g, &out.h) != fstar {
            return fail(NAME, checked, format!("g*h* != f* for {}", fstar.to_text(r)));
        }
        let bez = poly::add(r, &poly::mul(r, &out.s, &out.g), &poly::mul(r, &out.t, &out.h));
        if bez != Poly::one(r) {
            return fail(NAME, checked, format!("s*g* + t*h* != 1 for {}", fstar.to_text(r)));
        }
        if !out.h.is_monic(r) || reduce(r, &out.h) != hbar || reduce(r, &out.g) != gbar {
            return fail(NAME, checked, "lifted factors do not reduce to the input".into());
        }
        checked += 1;
    }
    pass(NAME, checked)
}

fn random_bi(ring: &GaloisRing, dy: usize, dx: usize, rng: &mut ChaCha8Rng) -> BiPoly {
    let mut terms = vec![((0, dy), ring.one_elem())];
    for j in 0..dy {
        for i in 0..=dx {
            terms.push(((i, j), ring.random_elem(rng)));
        }
    }
    BiPoly::from_terms(terms)
}

/// The factor list of a random product of Y-monic factors over GR(4,2)
/// multiplies back to the input.
pub fn factor_products(count: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "factor-product-identity";
    let ring: Arc<GaloisRing> = GaloisRing::new(2, 2, 2).unwrap();
    let r = ring.as_ref();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < count {
        attempts += 1;
        if attempts > 4 * count + 20 {
            return fail(NAME, checked, format!("only {checked} of {attempts} instances factored"));
        }
        let mut q = random_bi(r, rng.gen_range(1..3), rng.gen_range(0..3), &mut rng);
        for _ in 0..rng.gen_range(0..3) {
            q = q.mul(r, &random_bi(r, rng.gen_range(1..3), rng.gen_range(0..3), &mut rng));
        }
        let opts = FactorOptions {
            max_subset: None,
            seed: rng.gen(),
        };
        let Ok(fl) = factor_bivariate(&ring, &q, MainVar::Y, &opts) else {
            continue;
        };
        if fl.expand(r) != q {
            return fail(NAME, checked, format!("product differs for\n{}", q.to_text(r)));
        }
        checked += 1;
    }
    pass(NAME, checked)
}

/// Every refinement step keeps each basis element in M_k.
pub fn refine_membership(count: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "key-solver-membership";
    let rings = [GaloisRing::new(2, 2, 1).unwrap(), GaloisRing::new(2, 2, 2).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
    for i in 0..count {
        let r = rings[i % 2].as_ref();
        let u = random_poly(r, rng.gen_range(0..6), &mut rng);
        let mut basis = bf_init(r, &u);
        for k in 1..=rng.gen_range(1..8) {
            basis = bf_refine(r, &basis);
            if !basis.is_valid(r) {
                return fail(NAME, i, format!("basis left M_{k} for U = {}", u.to_text(r)));
            }
        }
    }
    pass(NAME, count)
}

/// All nonzero polynomials of degree exactly d over the ring.
fn polys_of_degree(ring: &GaloisRing, elems: &[Elem], d: usize) -> Vec<Poly<Elem>> {
    let q = elems.len();
    let count = q.pow(d as u32 + 1);
    (0..count)
        .map(|mut x| {
            let c = (0..=d)
                .map(|_| {
                    let e = elems[x % q];
                    x /= q;
                    e
                })
                .collect();
            Poly::new(ring, c)
        })
        .filter(|p| p.degree() == Some(d))
        .collect()
}

fn ring_elements(ring: &GaloisRing) -> Vec<Elem> {
    let q = ring.characteristic() as u64;
    (0..ring.size())
        .map(|mut x| {
            let coords: Vec<u32> = (0..ring.m())
                .map(|_| {
                    let c = (x % q) as u32;
                    x /= q;
                    c
                })
                .collect();
            ring.from_coords(&coords).unwrap()
        })
        .collect()
}

/// jump_pair output lies in M_{k+ℓ} with deg a + deg b ≤ ℓ; on the first
/// `brute` instances no unit-leading solution with smaller rank exists
/// among all (a, b) with deg a + deg b ≤ ℓ.
pub fn jump_contract(count: usize, brute: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "jump-contract";
    let ring = GaloisRing::new(2, 2, 2).unwrap();
    let r = ring.as_ref();
    let elems = ring_elements(r);
    let (k, ell) = (2, 2);
    let by_degree: Vec<Vec<Poly<Elem>>> = (0..=ell).map(|d| polys_of_degree(r, &elems, d)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < count {
        attempts += 1;
        if attempts > 50 * count + 50 {
            return fail(NAME, checked, "too few instances with two unit-leading elements".into());
        }
        let u = random_poly(r, 5, &mut rng);
        let mut basis = bf_init(r, &u);
        for _ in 0..k {
            basis = bf_refine(r, &basis);
        }
        let units = basis.unit_leading(r);
        if units.len() < 2 {
            continue;
        }
        let (ei, ej) = (units[0], units[1]);
        let Ok((a, b)) = jump_pair(r, ei, ej, &u, k, ell) else {
            continue;
        };
        let comb = ei.mul_poly(r, &a).sub(r, &ej.mul_poly(r, &b));
        if (0..k + ell).any(|i| discrepancy(r, &comb, &u, i) != Elem::ZERO) {
            return fail(NAME, checked, format!("combination not in M_{} for U = {}", k + ell, u.to_text(r)));
        }
        let deg = |p: &Poly<Elem>| p.degree().unwrap_or(0);
        if deg(&a) + deg(&b) > ell {
            return fail(NAME, checked, "degree budget exceeded".into());
        }
        if checked < brute {
            let hi = discrepancy_poly(r, ei, &u, k, ell);
            let hj = discrepancy_poly(r, ej, &u, k, ell);
            let best = min_unit_rank(r, &by_degree, &hi, &hj, ell);
            let found = PairPoly::new(a, b).rank();
            if !hi.is_zero() && found != best {
                return fail(NAME, checked, format!("rank {found:?}, enumeration finds {best:?}"));
            }
        }
        checked += 1;
    }
    pass(NAME, checked)
}

/// Smallest rank of a unit-leading (a, b) ≠ 0 with a·hi ≡ b·hj mod Z^ℓ and
/// deg a + deg b ≤ ℓ.
fn min_unit_rank(
    r: &GaloisRing,
    by_degree: &[Vec<Poly<Elem>>],
    hi: &Poly<Elem>,
    hj: &Poly<Elem>,
    ell: usize,
) -> Option<usize> {
    let zero = Poly::zero();
    let upto = |d: usize| std::iter::once(&zero).chain(by_degree[..=d].iter().flatten());
    let mut best: Option<usize> = None;
    // a = 0 first, then a of each degree
    let a_choices = std::iter::once((&zero, ell)).chain(
        (0..=ell).flat_map(|d| by_degree[d].iter().map(move |a| (a, ell - d))),
    );
    for (a, room) in a_choices {
        for b in upto(room) {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let lhs = poly::sub(r, &poly::mul(r, a, hi), &poly::mul(r, b, hj));
            if (0..ell).any(|i| lhs.coeff(r, i) != Elem::ZERO) {
                continue;
            }
            let cand = PairPoly::new(a.clone(), b.clone());
            if r.is_unit_elem(cand.lead_coeff().unwrap()) {
                let rank = cand.rank().unwrap();
                best = Some(best.map_or(rank, |x: usize| x.min(rank)));
            }
        }
    }
    best
}

/// error_locator(e) is recovered from the syndromes of e through the key
/// equation and the Gröbner basis, and unique_decode returns e.
pub fn locator_round_trip(count: usize, seed: u64) -> SuiteResult {
    const NAME: &str = "locator-round-trip";
    let codes = [nega_construct(15, 3).unwrap(), nega_construct(31, 5).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
    for i in 0..count {
        let code = &codes[i % 2];
        let r = code.ring.as_ref();
        let w = rng.gen_range(0..=code.t);
        let no_double = i % 4 < 2;
        let doubles = if no_double { 0 } else { rng.gen_range(0..=w / 2) };
        let e = lee_error(code.n, w, doubles, &mut rng);
        if doubles == 0 {
            let key = match key_equation(r, &syndromes(code, &e), code.t) {
                Ok(k) => k,
                Err(err) => return fail(NAME, i, format!("key equation: {err}")),
            };
            let mut basis = bf_init(r, &key.big_u);
            for _ in 0..=code.t {
                basis = bf_refine(r, &basis);
            }
            let Some(best) = basis.unit_leading(r).into_iter().next() else {
                return fail(NAME, i, format!("no unit-leading element for {e:?}"));
            };
            let sigma = reconstruct_sigma(r, best);
            let inv = match r.unit_inverse(sigma.coeff(r, 0)) {
                Ok(x) => x,
                Err(_) => return fail(NAME, i, format!("σ(0) not a unit for {e:?}")),
            };
            if poly::scale(r, &inv, &sigma) != error_locator(&e, code) {
                return fail(NAME, i, format!("locator mismatch for {e:?}"));
            }
        }
        let msg: Vec<u8> = (0..code.k).map(|_| rng.gen_range(0..4)).collect();
        let c = nega_encode(code, &msg).unwrap();
        let y: Vec<u8> = c.iter().zip(&e).map(|(&a, &b)| (a + b) % 4).collect();
        match unique_decode(code, &y) {
            Ok((got, err)) if got == c && err == e => {}
            other => return fail(NAME, i, format!("unique_decode on {e:?} gave {other:?}")),
        }
    }
    pass(NAME, count)
}
