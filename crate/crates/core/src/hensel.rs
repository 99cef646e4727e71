//! Hensel lifting of coprime factorizations and bivariate factorization
//! over Galois rings.
//!
//! The lifting step is generic over [`CoeffRing`]: the same code lifts from
//! mod p to mod p^r in GR(p^r, m) and from mod V to mod V^ℓ in the series
//! ring R[V]/(V^ℓ) used for the parameter variable of a bivariate input.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{self, UniFactorList};
use crate::poly::{self, taylor_shift, BiPoly, Poly};
use crate::ring::{CoeffRing, Elem, GaloisRing};
use crate::series::SeriesRing;
use crate::smith::{kernel_basis, Matrix};

/// g, h, s, t with h monic and s·g + t·h = 1 modulo the current ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselQuad<E> {
    pub g: Poly<E>,
    pub h: Poly<E>,
    pub s: Poly<E>,
    pub t: Poly<E>,
}

/// Minimum uniformizer valuation over the coefficients.
fn poly_valuation<R: CoeffRing + ?Sized>(ring: &R, f: &Poly<R::Elem>) -> u32 {
    f.coeffs()
        .iter()
        .map(|c| ring.valuation(c))
        .min()
        .unwrap_or_else(|| ring.nilpotency())
}

/// One quadratic lifting step from modulus π^level to π^{2·level}.
pub fn hensel_step<R: CoeffRing + ?Sized>(
    ring: &R,
    fstar: &Poly<R::Elem>,
    quad: &HenselQuad<R::Elem>,
    level: u32,
) -> Result<HenselQuad<R::Elem>> {
    let HenselQuad { g, h, s, t } = quad;
    if !h.is_monic(ring) {
        return Err(Error::PreconditionViolated("h is not monic"));
    }
    let one = Poly::one(ring);
    let bez = poly::sub(
        ring,
        &poly::add(ring, &poly::mul(ring, s, g), &poly::mul(ring, t, h)),
        &one,
    );
    if poly_valuation(ring, &bez) < level {
        return Err(Error::PreconditionViolated("s g + t h is not 1 modulo the ideal"));
    }
    let e = poly::sub(ring, fstar, &poly::mul(ring, g, h));
    if poly_valuation(ring, &e) < level {
        return Err(Error::PreconditionViolated("f* differs from g h modulo the ideal"));
    }
    let (q, r) = poly::quorem(ring, &poly::mul(ring, s, &e), h)?;
    let g2 = poly::add(
        ring,
        g,
        &poly::add(ring, &poly::mul(ring, t, &e), &poly::mul(ring, &q, g)),
    );
    let h2 = poly::add(ring, h, &r);
    let b = poly::sub(
        ring,
        &poly::add(ring, &poly::mul(ring, s, &g2), &poly::mul(ring, t, &h2)),
        &one,
    );
    let (c, d) = poly::quorem(ring, &poly::mul(ring, s, &b), &h2)?;
    let s2 = poly::sub(ring, s, &d);
    let t2 = poly::sub(
        ring,
        t,
        &poly::add(ring, &poly::mul(ring, t, &b), &poly::mul(ring, &c, &g2)),
    );
    Ok(HenselQuad {
        g: g2,
        h: h2,
        s: s2,
        t: t2,
    })
}

/// Repeats the step from `level` until the ideal power vanishes.
pub fn lift_quad<R: CoeffRing + ?Sized>(
    ring: &R,
    fstar: &Poly<R::Elem>,
    mut quad: HenselQuad<R::Elem>,
    mut level: u32,
) -> Result<HenselQuad<R::Elem>> {
    let top = ring.nilpotency();
    while level < top {
        quad = hensel_step(ring, fstar, &quad, level)?;
        level *= 2;
    }
    Ok(quad)
}

fn coprime_mod_p(ring: &GaloisRing, g: &Poly<Elem>, h: &Poly<Elem>) -> Result<(Poly<Elem>, Poly<Elem>)> {
    let f = ring.residue_ring();
    let gb = g.map_into(f, |&c| ring.mu(c));
    let hb = h.map_into(f, |&c| ring.mu(c));
    let (d, s, t) = field::ext_gcd(f, &gb, &hb);
    if d.degree() != Some(0) {
        return Err(Error::NotSquareFree);
    }
    let lift = |x: &Poly<Elem>| x.map_into(ring, |&c| ring.lift_coords(c));
    Ok((lift(&s), lift(&t)))
}

/// Exact s, t over R with s·g + t·h = 1; needs μg, μh coprime and h monic.
pub fn bezout(ring: &GaloisRing, g: &Poly<Elem>, h: &Poly<Elem>) -> Result<(Poly<Elem>, Poly<Elem>)> {
    let (s, t) = coprime_mod_p(ring, g, h)?;
    let gh = poly::mul(ring, g, h);
    let quad = HenselQuad {
        g: g.clone(),
        h: h.clone(),
        s,
        t,
    };
    let out = lift_quad(ring, &gh, quad, 1)?;
    debug_assert_eq!(&out.g, g);
    Ok((out.s, out.t))
}

/// Lifts f ≡ g·h (mod p) to an exact factorization over a Galois ring;
/// h must be monic. Returns (g*, h*).
pub(crate) fn lift_pair_over_galois(
    ring: &GaloisRing,
    f: &Poly<Elem>,
    g: &Poly<Elem>,
    h: &Poly<Elem>,
) -> Result<(Poly<Elem>, Poly<Elem>)> {
    let (s, t) = coprime_mod_p(ring, g, h)?;
    let quad = HenselQuad {
        g: g.clone(),
        h: h.clone(),
        s,
        t,
    };
    let out = lift_quad(ring, f, quad, 1)?;
    Ok((out.g, out.h))
}

type BezoutFn<'a, E> = dyn Fn(&Poly<E>, &Poly<E>) -> Result<(Poly<E>, Poly<E>)> + 'a;

/// Balanced factor tree: each split is lifted completely before recursing.
fn tree_lift<R: CoeffRing + ?Sized>(
    ring: &R,
    f: &Poly<R::Elem>,
    base: &[Poly<R::Elem>],
    bez: &BezoutFn<'_, R::Elem>,
) -> Result<Vec<Poly<R::Elem>>> {
    if base.len() <= 1 {
        return Ok(vec![f.clone()]);
    }
    let mid = base.len() / 2;
    let product = |fs: &[Poly<R::Elem>]| {
        fs.iter()
            .fold(Poly::one(ring), |acc, x| poly::mul(ring, &acc, x))
    };
    let g0 = product(&base[..mid]);
    let h0 = product(&base[mid..]);
    let (s, t) = bez(&g0, &h0)?;
    let quad = lift_quad(
        ring,
        f,
        HenselQuad {
            g: g0,
            h: h0,
            s,
            t,
        },
        1,
    )?;
    let mut out = tree_lift(ring, &quad.g, &base[..mid], bez)?;
    out.extend(tree_lift(ring, &quad.h, &base[mid..], bez)?);
    Ok(out)
}

/// Lifts a square-free residue-field factorization of μ(f*) to R.
/// The unit of the result is the leading coefficient of f*.
pub fn multifactor_lift(
    ring: &GaloisRing,
    fstar: &Poly<Elem>,
    field_factors: &UniFactorList,
) -> Result<UniFactorList> {
    if !field_factors.is_squarefree() {
        return Err(Error::NotSquareFree);
    }
    let lc = *fstar.lead().ok_or(Error::PreconditionViolated("zero polynomial"))?;
    let inv = ring.unit_inverse(lc)?;
    let f = poly::scale(ring, &inv, fstar);
    let base: Vec<Poly<Elem>> = field_factors
        .factors
        .iter()
        .map(|(g, _)| g.map_into(ring, |&c| ring.lift_coords(c)))
        .collect();
    if base.is_empty() {
        return Ok(UniFactorList {
            unit: lc,
            factors: Vec::new(),
        });
    }
    let bez = |g: &Poly<Elem>, h: &Poly<Elem>| coprime_mod_p(ring, g, h);
    let lifted = tree_lift(ring, &f, &base, &bez)?;
    Ok(UniFactorList {
        unit: lc,
        factors: lifted.into_iter().map(|g| (g, 1)).collect(),
    })
}

/// Which variable the factors are taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MainVar {
    X,
    Y,
}

#[derive(Clone, Debug)]
pub struct FactorOptions {
    /// Largest number of lifted factors combined into one candidate.
    pub max_subset: Option<usize>,
    /// Seed for the equal-degree splitting over the residue field.
    pub seed: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            max_subset: None,
            seed: 0,
        }
    }
}

/// unit · ∏ factor^mult; the unit has degree 0 in the main variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiFactorList {
    pub unit: BiPoly,
    pub factors: Vec<(BiPoly, usize)>,
}

impl BiFactorList {
    pub fn expand(&self, ring: &GaloisRing) -> BiPoly {
        let mut acc = self.unit.clone();
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(ring, f);
            }
        }
        acc
    }

    fn transpose(self) -> BiFactorList {
        BiFactorList {
            unit: self.unit.transpose(),
            factors: self
                .factors
                .into_iter()
                .map(|(f, e)| (f.transpose(), e))
                .collect(),
        }
    }
}

/// Factors Q over R in the chosen main variable.
pub fn factor_bivariate(
    ring: &Arc<GaloisRing>,
    q: &BiPoly,
    main: MainVar,
    opts: &FactorOptions,
) -> Result<BiFactorList> {
    let out = match main {
        MainVar::Y => factor_with_extension(ring, q, opts)?,
        MainVar::X => factor_with_extension(ring, &q.transpose(), opts)?.transpose(),
    };
    debug_assert_eq!(out.expand(ring), *q, "factor product identity");
    Ok(out)
}

/// Factors in Y, specializing X at points of the quadratic extension when
/// no residue-field point gives a square-free image.
fn factor_with_extension(
    ring: &Arc<GaloisRing>,
    q: &BiPoly,
    opts: &FactorOptions,
) -> Result<BiFactorList> {
    match factor_in_y(ring, q, opts, false) {
        Err(Error::NoSquarefreeSpecialization) => {}
        other => return other,
    }
    let ext = GaloisRing::quadratic_extension(ring)?;
    let out = factor_in_y(&ext, q, opts, true)?;
    let in_base = |f: &BiPoly| f.terms().all(|(_, c)| ext.in_base(c));
    let (mut factors, foreign): (Vec<_>, Vec<_>) =
        out.factors.into_iter().map(|(f, _)| f).partition(|f| in_base(f));
    if !foreign.is_empty() {
        // conjugate factors recombine into a factor over the base ring
        let prod = foreign
            .iter()
            .skip(1)
            .fold(foreign[0].clone(), |acc, f| acc.mul(&ext, f));
        if !in_base(&prod) {
            return Err(Error::FactorizationFailed(Box::new(
                Error::NoSquarefreeSpecialization,
            )));
        }
        factors.push(prod);
    }
    factors.sort_by_key(|f| f.to_text(ring));
    Ok(BiFactorList {
        unit: out.unit,
        factors: factors.into_iter().map(|f| (f, 1)).collect(),
    })
}

struct Specialization {
    u: Elem,
    base: Vec<Poly<Elem>>,
}

/// First Teichmüller u with L(u) a unit and μQ(u, Y) square-free, together
/// with the lifted factors of Q(u, Y)/L(u) over R.
fn specialize(
    ring: &GaloisRing,
    cols: &[Poly<Elem>],
    rng: &mut ChaCha8Rng,
    outside_base: bool,
) -> Result<Specialization> {
    let field = ring.residue_ring();
    let lead = cols.last().expect("positive degree");
    let points = ring
        .teichmuller_set()
        .iter()
        .filter(|&&u| !outside_base || !ring.in_base(u));
    for &u in points {
        let lu = poly::eval(ring, lead, &u);
        if !ring.is_unit_elem(lu) {
            continue;
        }
        let qu = Poly::new(ring, cols.iter().map(|c| poly::eval(ring, c, &u)).collect());
        let qbar = qu.map_into(field, |&c| ring.mu(c));
        let Ok(fl) = field::squarefree_factor(field, &qbar, rng) else {
            continue;
        };
        let lifted = multifactor_lift(ring, &qu, &fl)?;
        return Ok(Specialization {
            u,
            base: lifted.factors.into_iter().map(|(f, _)| f).collect(),
        });
    }
    Err(Error::NoSquarefreeSpecialization)
}

/// Coefficients c_j(V + u) of a bivariate polynomial, as S-elements.
fn to_series(ring: &GaloisRing, s: &SeriesRing, q: &BiPoly, u: Elem) -> Poly<Vec<Elem>> {
    let cols = q.y_coeffs(ring);
    Poly::new(
        s,
        cols.iter()
            .map(|c| s.from_poly(&taylor_shift(ring, c, u)))
            .collect(),
    )
}

/// Inverse of `to_series` for coefficients of V-degree ≤ D.
fn from_series(ring: &GaloisRing, s: &SeriesRing, f: &Poly<Vec<Elem>>, u: Elem) -> BiPoly {
    let cols: Vec<Poly<Elem>> = f
        .coeffs()
        .iter()
        .map(|c| taylor_shift(ring, &s.to_poly(c), ring.neg(u)))
        .collect();
    BiPoly::from_y_coeffs(&cols)
}

/// Searches b with deg b ≤ db, b(0) a unit, such that every coefficient of
/// b·G has V-degree ≤ d.
fn leading_multiplier(
    ring: &GaloisRing,
    s: &SeriesRing,
    g: &Poly<Vec<Elem>>,
    db: usize,
    d: usize,
) -> Option<Vec<Elem>> {
    let prec = s.precision();
    let small = |c: &Vec<Elem>| c[d + 1..].iter().all(|&x| x == Elem::ZERO);
    if g.coeffs().iter().all(small) {
        return Some(s.one());
    }
    if db == 0 || d + 1 >= prec {
        return None;
    }
    let mut a = Matrix::zeros(0, db + 1);
    for c in g.coeffs() {
        for k in d + 1..prec {
            let row: Vec<Elem> = (0..=db)
                .map(|i| if i <= k { c[k - i] } else { Elem::ZERO })
                .collect();
            a.push_row(&row);
        }
    }
    let gen = kernel_basis(ring, &a)
        .into_iter()
        .find(|v| ring.is_unit_elem(v[0]))?;
    let mut b = s.zero();
    b[..=db].copy_from_slice(&gen);
    Some(b)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact division Q = H·W in R[X, Y], checked after computing W in S[Y].
fn divide_exact(
    ring: &GaloisRing,
    s: &SeriesRing,
    qrem: &BiPoly,
    h: &BiPoly,
    u: Elem,
) -> Option<BiPoly> {
    let d = qrem.deg_x().unwrap_or(0);
    let qs = to_series(ring, s, qrem, u);
    let hs = to_series(ring, s, h, u);
    let lc_inv = s.inv(hs.lead()?)?;
    let hm = poly::scale(s, &lc_inv, &hs);
    let (quot, rem) = poly::quorem(s, &qs, &hm).ok()?;
    if !rem.is_zero() {
        return None;
    }
    let w = poly::scale(s, &lc_inv, &quot);
    let mut w_coeffs = w.into_coeffs();
    for c in w_coeffs.iter_mut() {
        for x in c[d + 1..].iter_mut() {
            *x = Elem::ZERO;
        }
    }
    let w = from_series(ring, s, &Poly::new(s, w_coeffs), u);
    (h.mul(ring, &w) == *qrem).then_some(w)
}

fn factor_in_y(
    ring: &Arc<GaloisRing>,
    q: &BiPoly,
    opts: &FactorOptions,
    outside_base: bool,
) -> Result<BiFactorList> {
    let r = ring.as_ref();
    if q.is_zero() {
        return Err(Error::PreconditionViolated("cannot factor the zero polynomial"));
    }
    if q.deg_y() == Some(0) {
        return Ok(BiFactorList {
            unit: q.clone(),
            factors: Vec::new(),
        });
    }
    // strip p-content
    let content = q.terms().map(|(_, c)| r.val(c)).min().unwrap_or(0);
    let q1 = BiPoly::from_terms(q.terms().map(|(k, c)| (k, r.div_p_pow(c, content))));
    let unit_scalar = r.mul_p_pow(r.one_elem(), content);

    let cols = q1.y_coeffs(r);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let spec = specialize(r, &cols, &mut rng, outside_base)?;
    let u = spec.u;

    let dx = q1.deg_x().unwrap_or(0);
    let dl = cols.last().and_then(|c| c.degree()).unwrap_or(0);
    let s = SeriesRing::new(ring, dx + dl + 1);

    // monic-in-Y image over S and its lift
    let qs = to_series(r, &s, &q1, u);
    let lc_inv = s.inv(qs.lead().unwrap()).ok_or(Error::NotAUnit)?;
    let w = poly::scale(&s, &lc_inv, &qs);
    let base_s: Vec<Poly<Vec<Elem>>> = spec
        .base
        .iter()
        .map(|f| f.map_into(&s, |&c| s.constant(c)))
        .collect();
    let constants = |f: &Poly<Vec<Elem>>| f.map_into(r, |c| c[0]);
    let bez = |g: &Poly<Vec<Elem>>, h: &Poly<Vec<Elem>>| {
        let (a, b) = bezout(r, &constants(g), &constants(h))?;
        Ok((
            a.map_into(&s, |&c| s.constant(c)),
            b.map_into(&s, |&c| s.constant(c)),
        ))
    };
    let lifted = tree_lift(&s, &w, &base_s, &bez)?;

    let mut remaining: Vec<Poly<Vec<Elem>>> = lifted;
    let mut qrem = q1;
    let mut factors: Vec<BiPoly> = Vec::new();
    let max_subset = opts.max_subset.unwrap_or(usize::MAX);
    let mut size = 1;
    while size < remaining.len() && size <= max_subset {
        let mut found = false;
        for subset in subsets(remaining.len(), size) {
            let g = subset
                .iter()
                .fold(Poly::one(&s), |acc, &i| poly::mul(&s, &acc, &remaining[i]));
            let d = qrem.deg_x().unwrap_or(0);
            let db = qrem
                .y_coeffs(r)
                .last()
                .and_then(|c| c.degree())
                .unwrap_or(0);
            let Some(b) = leading_multiplier(r, &s, &g, db, d) else {
                continue;
            };
            let mut hs = poly::scale(&s, &b, &g).into_coeffs();
            for c in hs.iter_mut() {
                for x in c[d + 1..].iter_mut() {
                    *x = Elem::ZERO;
                }
            }
            let h = from_series(r, &s, &Poly::new(&s, hs), u);
            if let Some(w2) = divide_exact(r, &s, &qrem, &h, u) {
                factors.push(h);
                qrem = w2;
                for &i in subset.iter().rev() {
                    remaining.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }

    let unit_poly = BiPoly::from_terms([((0, 0), unit_scalar)]);
    let unit = if qrem.deg_y() == Some(0) {
        qrem.scale(r, unit_scalar)
    } else {
        factors.push(qrem);
        unit_poly
    };
    factors.sort_by_key(|f| f.to_text(r));
    Ok(BiFactorList {
        unit,
        factors: factors.into_iter().map(|f| (f, 1)).collect(),
    })
}
