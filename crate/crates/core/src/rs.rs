//! Reed-Solomon codes over Galois rings with Sudan / Guruswami-Sudan list
//! decoding: interpolate Q(X, Y) through the received points, factor it,
//! and read message polynomials off the factors linear in Y.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field;
use crate::hensel::{factor_bivariate, FactorOptions, MainVar};
use crate::poly::{self, binomials, BiPoly, Poly};
use crate::ring::{Elem, GaloisRing};
use crate::smith::{kernel_basis, normalize, smith_solve_homogeneous, Matrix};

/// Evaluation code of polynomials of degree < k at n Teichmüller points.
#[derive(Clone, Debug)]
pub struct RSCode {
    pub ring: Arc<GaloisRing>,
    pub n: usize,
    pub k: usize,
    pub alphas: Vec<Elem>,
}

impl RSCode {
    /// Uses the first n elements of the Teichmüller set as evaluation points.
    pub fn new(ring: &Arc<GaloisRing>, n: usize, k: usize) -> Result<RSCode> {
        let teich = ring.teichmuller_set();
        if n > teich.len() || k == 0 || k > n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k <= n <= {}, got n={n} k={k}",
                teich.len()
            )));
        }
        Ok(RSCode {
            ring: ring.clone(),
            n,
            k,
            alphas: teich[..n].to_vec(),
        })
    }

    pub fn encode(&self, f: &Poly<Elem>) -> Result<Vec<Elem>> {
        rs_encode(self, f)
    }
}

pub fn rs_encode(code: &RSCode, f: &Poly<Elem>) -> Result<Vec<Elem>> {
    if let Some(d) = f.degree().filter(|&d| d >= code.k) {
        return Err(Error::DegreeTooLarge {
            degree: d,
            bound: code.k - 1,
        });
    }
    let r = code.ring.as_ref();
    Ok(code.alphas.iter().map(|a| poly::eval(r, f, a)).collect())
}

pub fn hamming_distance(a: &[Elem], b: &[Elem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Monomials X^i Y^j allowed in the interpolation polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    pub indices: Vec<(usize, usize)>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.indices.binary_search(&(i, j)).is_ok()
    }

    pub fn max_j(&self) -> usize {
        self.indices.iter().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub(crate) fn from_iter(it: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut indices: Vec<_> = it.into_iter().collect();
        indices.sort();
        indices.dedup();
        SupportSet { indices }
    }
}

/// Number of linear conditions for `points` points of multiplicity e.
pub fn condition_count(points: usize, e: usize) -> usize {
    points * e * (e + 1) / 2
}

/// S = {(i, j) : i + (k−1) j ≤ e(n−t) − 1}. For k = 1 the Y-degree is
/// capped at e.
pub fn build_support(n: usize, k: usize, t: usize, e: usize) -> Result<SupportSet> {
    if t >= n || e == 0 || k == 0 {
        return Err(Error::InvalidParams(format!("need t < n and e, k >= 1 (n={n} k={k} t={t} e={e})")));
    }
    let bound = e * (n - t);
    let mut idx = Vec::new();
    // i + (k−1) j < bound
    let jmax = if k == 1 { e } else { (bound - 1) / (k - 1) };
    for j in 0..=jmax {
        let used = (k - 1) * j;
        if used >= bound {
            break;
        }
        for i in 0..bound - used {
            idx.push((i, j));
        }
    }
    let s = SupportSet::from_iter(idx);
    let needed = condition_count(n, e);
    if s.len() <= needed {
        return Err(Error::TooFewTerms {
            size: s.len(),
            needed,
        });
    }
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct ListDecodeConfig {
    pub t: usize,
    pub e: usize,
    pub support: SupportSet,
}

impl ListDecodeConfig {
    pub fn new(code: &RSCode, t: usize, e: usize) -> Result<Self> {
        Ok(ListDecodeConfig {
            t,
            e,
            support: build_support(code.n, code.k, t, e)?,
        })
    }
}

/// Rows forcing every coefficient of X^a Y^b, a + b < e, of Q(X + x, Y + y)
/// to vanish. Column c carries the monomial `exps[c]`.
pub(crate) fn multiplicity_rows(
    ring: &GaloisRing,
    x: Elem,
    y: Elem,
    exps: &[(usize, usize)],
    e: usize,
    binom: &[Vec<u64>],
) -> Vec<Vec<Elem>> {
    let di = exps.iter().map(|&(i, _)| i).max().unwrap_or(0);
    let dj = exps.iter().map(|&(_, j)| j).max().unwrap_or(0);
    let pow = |z: Elem, d: usize| {
        let mut v = Vec::with_capacity(d + 1);
        let mut c = ring.one_elem();
        for _ in 0..=d {
            v.push(c);
            c = ring.mul(c, z);
        }
        v
    };
    let (xp, yp) = (pow(x, di), pow(y, dj));
    let mut rows = Vec::with_capacity(e * (e + 1) / 2);
    for a in 0..e {
        for b in 0..e - a {
            rows.push(
                exps.iter()
                    .map(|&(i, j)| {
                        if i < a || j < b {
                            return Elem::ZERO;
                        }
                        let c = binom[i][a] * binom[j][b];
                        let c = ring.from_int((c % ring.characteristic() as u64) as i64);
                        ring.mul(c, ring.mul(xp[i - a], yp[j - b]))
                    })
                    .collect(),
            );
        }
    }
    rows
}

pub(crate) fn binomials_for(ring: &GaloisRing, exps: &[(usize, usize)]) -> Vec<Vec<u64>> {
    let d = exps.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
    binomials(d + 1, ring.characteristic() as u64)
}

pub(crate) fn poly_from_kernel(support: &[(usize, usize)], v: &[Elem]) -> BiPoly {
    BiPoly::from_terms(support.iter().copied().zip(v.iter().copied()))
}

fn interpolation_matrix(code: &RSCode, y: &[Elem], cfg: &ListDecodeConfig) -> Matrix {
    let r = code.ring.as_ref();
    let exps = &cfg.support.indices;
    let binom = binomials_for(r, exps);
    let mut a = Matrix::zeros(0, exps.len());
    for (&x, &yi) in code.alphas.iter().zip(y) {
        for row in multiplicity_rows(r, x, yi, exps, cfg.e, &binom) {
            a.push_row(&row);
        }
    }
    a
}

/// Whether Q passes through every (α_i, y_i) with multiplicity e.
pub fn check_interpolation(code: &RSCode, y: &[Elem], e: usize, q: &BiPoly) -> bool {
    let r = code.ring.as_ref();
    code.alphas.iter().zip(y).all(|(&x, &yi)| {
        let s = q.shift(r, x, yi);
        let ok = s.terms().all(|((a, b), _)| a + b >= e);
        ok
    })
}

/// Nonzero Q supported on S through every received point with multiplicity e.
pub fn interpolate(code: &RSCode, y: &[Elem], cfg: &ListDecodeConfig) -> Result<BiPoly> {
    check_word(code, y)?;
    let a = interpolation_matrix(code, y, cfg);
    let v = smith_solve_homogeneous(&code.ring, &a)?;
    let q = poly_from_kernel(&cfg.support.indices, &v);
    debug_assert!(check_interpolation(code, y, cfg.e, &q));
    Ok(q)
}

fn check_word(code: &RSCode, y: &[Elem]) -> Result<()> {
    if y.len() != code.n {
        return Err(Error::InvalidParams(format!(
            "received word has length {}, expected {}",
            y.len(),
            code.n
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub f: Poly<Elem>,
    pub codeword: Vec<Elem>,
    pub distance: usize,
}

/// Residue-field lifts examined per p-adic digit before giving up.
const ROOT_BRANCH_LIMIT: usize = 1 << 12;

/// Q(X, f(X)) as a polynomial in X.
fn substitute_y(ring: &GaloisRing, cols: &[Poly<Elem>], f: &Poly<Elem>) -> Poly<Elem> {
    cols.iter()
        .rev()
        .fold(Poly::zero(), |acc, c| poly::add(ring, &poly::mul(ring, &acc, f), c))
}

/// Roots g ∈ F[X] of Q with deg g < k, by the Roth–Ruckenstein recursion.
fn field_y_roots(field: &GaloisRing, q: &BiPoly, k: usize) -> Vec<Vec<Elem>> {
    if k == 0 {
        let at_zero = q.terms().all(|((_, j), _)| j != 0);
        return if at_zero { vec![Vec::new()] } else { Vec::new() };
    }
    let Some(v) = q.terms().map(|((i, _), _)| i).min() else {
        // Q = 0: every g is a root
        return all_words(field, k);
    };
    let q = BiPoly::from_terms(q.terms().map(|((i, j), c)| ((i - v, j), c)));
    let at_x0 = Poly::new(
        field,
        (0..=q.deg_y().unwrap_or(0)).map(|j| q.get(0, j)).collect(),
    );
    let mut out = Vec::new();
    for &gamma in field.teichmuller_set() {
        if poly::eval(field, &at_x0, &gamma) != Elem::ZERO {
            continue;
        }
        let next = BiPoly::from_terms(q.shift(field, Elem::ZERO, gamma).terms().map(|((i, j), c)| ((i + j, j), c)));
        for mut tail in field_y_roots(field, &next, k - 1) {
            tail.insert(0, gamma);
            out.push(tail);
        }
    }
    out
}

fn all_words(field: &GaloisRing, k: usize) -> Vec<Vec<Elem>> {
    let elems = field.teichmuller_set();
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                elems.iter().map(move |&e| {
                    let mut w = w.clone();
                    w.push(e);
                    w
                })
            })
            .collect()
    })
}

/// Every f ∈ R[X] with deg f < k and Q(X, f(X)) = 0: roots over the residue
/// field, then one p-adic digit at a time, each digit solving a linear
/// system over F.
pub fn y_roots(ring: &Arc<GaloisRing>, q: &BiPoly, k: usize) -> Result<Vec<Poly<Elem>>> {
    let r = ring.as_ref();
    let field = ring.residue_field();
    let qbar = BiPoly::from_terms(q.terms().map(|(ij, c)| (ij, r.mu(c))));
    let roots = field_y_roots(&field, &qbar, k);
    if roots.len() > ROOT_BRANCH_LIMIT {
        return Err(Error::TooLarge(format!("{} residue roots", roots.len())));
    }
    let lift = |g: &[Elem]| Poly::new(r, g.iter().map(|&c| r.lift_coords(c)).collect());
    let mut partial: Vec<Poly<Elem>> = roots.iter().map(|g| lift(g)).collect();
    let cols = q.y_coeffs(r);
    let dcols: Vec<Poly<Elem>> = cols
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| poly::scale(r, &r.from_int(j as i64), c))
        .collect();
    for j in 1..r.r() {
        let mut next = Vec::new();
        for f in &partial {
            let value = substitute_y(r, &cols, f);
            let a: Vec<Elem> = value.coeffs().iter().map(|&c| r.mu(r.div_p_pow(c, j))).collect();
            let slope = substitute_y(r, &dcols, f);
            let b: Vec<Elem> = slope.coeffs().iter().map(|&c| r.mu(c)).collect();
            // a + ḡ·b = 0 coefficientwise, ḡ of degree < k
            let len = a.len().max(b.len() + k);
            let rows: Vec<Vec<Elem>> = (0..len)
                .map(|d| (0..k).map(|l| if d >= l { b.get(d - l).copied().unwrap_or(Elem::ZERO) } else { Elem::ZERO }).collect())
                .collect();
            let rhs: Vec<Elem> = (0..len).map(|d| field.neg(a.get(d).copied().unwrap_or(Elem::ZERO))).collect();
            let Some((base, kernel)) = field::solve_affine(&field, &rows, &rhs, k) else {
                continue;
            };
            let count = (field.size() as usize).checked_pow(kernel.len() as u32);
            if count.map_or(true, |c| next.len() + c > ROOT_BRANCH_LIMIT) {
                return Err(Error::TooLarge(format!("{}-dimensional lift family", kernel.len())));
            }
            for coeffs in all_words(&field, kernel.len()) {
                let mut g = base.clone();
                for (c, v) in coeffs.iter().zip(&kernel) {
                    for (gi, &vi) in g.iter_mut().zip(v) {
                        *gi = field.add(*gi, field.mul(*c, vi));
                    }
                }
                let step: Vec<Elem> = g.iter().map(|&c| r.mul_p_pow(r.lift_coords(c), j)).collect();
                next.push(poly::add(r, f, &Poly::new(r, step)));
            }
        }
        partial = next;
    }
    partial.retain(|f| substitute_y(r, &cols, f).is_zero());
    Ok(partial)
}

/// Message polynomials read off the Y-linear factors b·Y + c of Q, together
/// with the Y-roots of Q of degree < k.
fn candidates_from(code: &RSCode, y: &[Elem], t: usize, q: &BiPoly, seed: u64) -> Result<Vec<Candidate>> {
    let r = code.ring.as_ref();
    let opts = FactorOptions {
        max_subset: Some(1),
        seed,
    };
    let factored = factor_bivariate(&code.ring, q, MainVar::Y, &opts);
    let roots = y_roots(&code.ring, q, code.k);
    if let (Err(e), Err(_)) = (&factored, &roots) {
        return Err(Error::FactorizationFailed(Box::new(e.clone())));
    }
    let mut messages = roots.unwrap_or_default();
    for (h, _) in factored.map(|fl| fl.factors).unwrap_or_default() {
        if h.deg_y() != Some(1) {
            continue;
        }
        let cols = h.y_coeffs(r);
        let (c, b) = (&cols[0], &cols[1]);
        let Ok(binv) = poly::series_inverse(r, b, code.k) else {
            continue;
        };
        messages.push(poly::neg(r, &poly::mul_trunc(r, c, &binv, code.k)));
    }
    let mut out = Vec::new();
    for f in messages {
        let codeword = rs_encode(code, &f)?;
        let distance = hamming_distance(&codeword, y);
        if distance <= t {
            out.push(Candidate {
                f,
                codeword,
                distance,
            });
        }
    }
    Ok(out)
}

const RETRIES: usize = 8;

/// All f with deg f < k and d(ev(f), y) ≤ t.
pub fn list_decode(code: &RSCode, y: &[Elem], cfg: &ListDecodeConfig, seed: u64) -> Result<Vec<Candidate>> {
    check_word(code, y)?;
    let r = code.ring.as_ref();
    let a = interpolation_matrix(code, y, cfg);
    let gens = kernel_basis(r, &a);
    let first = smith_solve_homogeneous(r, &a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempt = first;
    let mut last_err = None;
    for _ in 0..=RETRIES {
        let q = poly_from_kernel(&cfg.support.indices, &attempt);
        debug_assert!(check_interpolation(code, y, cfg.e, &q));
        match candidates_from(code, y, cfg.t, &q, seed) {
            Ok(mut list) => {
                let mut seen = BTreeSet::new();
                list.retain(|c| seen.insert(c.codeword.clone()));
                list.sort_by(|a, b| (a.distance, &a.codeword).cmp(&(b.distance, &b.codeword)));
                return Ok(list);
            }
            Err(e) => last_err = Some(e),
        }
        attempt = random_combination(r, &gens, &mut rng);
    }
    Err(last_err.unwrap_or(Error::DecodingFailure))
}

/// A random nonzero combination of kernel generators, normalized.
pub(crate) fn random_combination<G: Rng>(ring: &GaloisRing, gens: &[Vec<Elem>], rng: &mut G) -> Vec<Elem> {
    let len = gens.first().map_or(0, Vec::len);
    if gens.is_empty() {
        return Vec::new();
    }
    loop {
        let mut v = vec![Elem::ZERO; len];
        for g in gens {
            let c = ring.random_elem(rng);
            for (x, &y) in v.iter_mut().zip(g) {
                *x = ring.add(*x, ring.mul(c, y));
            }
        }
        if v.iter().any(|&x| x != Elem::ZERO) {
            normalize(ring, &mut v);
            return v;
        }
    }
}
