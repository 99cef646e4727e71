//! Quaternary negacyclic codes of odd length n in the Lee metric.
//!
//! The code with t roots is {c ∈ Z4[X]/(X^n + 1) : c(α^{2i−1}) = 0, 1 ≤ i ≤ t}
//! for α = −β, β of order n in GR(4, m). Decoding goes through the key
//! equation (1 + T)·φ ≡ ω mod Z^{t+1} solved with the Gröbner-basis
//! solver; list decoding beyond t interpolates the ratio σ_j/σ_i of two
//! basis locators by a rational function a/b.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field;
use crate::hensel::{factor_bivariate, FactorOptions, MainVar};
use crate::key_solver::{bf_solve, PairPoly};
use crate::poly::{self, BiPoly, Poly};
use crate::ring::{Elem, GaloisRing};
use crate::rs::{binomials_for, condition_count, multiplicity_rows, poly_from_kernel, random_combination, SupportSet};
use crate::smith::{kernel_basis, smith_solve_homogeneous, Matrix};

/// Sum of min(x, 4 − x) over the entries.
pub fn lee_weight(v: &[u8]) -> usize {
    v.iter().map(|&x| (x % 4).min(4 - x % 4) as usize).sum()
}

pub fn lee_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = (x + 4 - y % 4) % 4;
            d.min(4 - d) as usize
        })
        .sum()
}

fn sub_z4(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(&x, &y)| (x + 4 - y % 4) % 4).collect()
}

#[derive(Clone, Debug)]
pub struct NegaCode {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub ring: Arc<GaloisRing>,
    pub beta: Elem,
    pub alpha: Elem,
    /// Generator polynomial over Z4, ascending.
    pub gen: Vec<u8>,
    pub k: usize,
    /// α^l for 0 ≤ l < 2n.
    pows: Vec<Elem>,
}

fn order_of_two(n: usize) -> usize {
    let mut x = 2 % n;
    let mut m = 1;
    while x != 1 {
        x = x * 2 % n;
        m += 1;
    }
    m
}

/// Builds the code with roots α, α³, …, α^{2t−1}.
pub fn nega_construct(n: usize, t: usize) -> Result<NegaCode> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParams(format!("length {n} must be odd and > 1")));
    }
    if t == 0 || 2 * t - 1 >= 2 * n {
        return Err(Error::InvalidParams(format!("need 1 <= t and 2t-1 < 2n (t={t})")));
    }
    let m = order_of_two(n);
    let ring = GaloisRing::new(2, 2, m)?;
    let r = ring.as_ref();
    let full = (1u64 << m) - 1;
    let beta = r.pow(r.theta(), full / n as u64);
    if r.pow(beta, n as u64) != r.one_elem() {
        return Err(Error::RootOrderFailure);
    }
    let mut d = 2;
    let mut rest = n;
    while rest > 1 {
        if rest % d == 0 {
            if r.pow(beta, (n / d) as u64) == r.one_elem() {
                return Err(Error::RootOrderFailure);
            }
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    let alpha = r.neg(beta);
    let mut pows = Vec::with_capacity(2 * n);
    let mut x = r.one_elem();
    for _ in 0..2 * n {
        pows.push(x);
        x = r.mul(x, alpha);
    }

    // α^{2i−1} = −β^{(2i−1) mod n}; Frobenius sends −β^a to −β^{2a}
    let mut seen = vec![false; n];
    let mut gen = Poly::one(r);
    for i in 1..=t {
        let a0 = (2 * i - 1) % n;
        if seen[a0] {
            continue;
        }
        let mut a = a0;
        loop {
            seen[a] = true;
            let root_neg = r.pow(beta, a as u64);
            gen = poly::mul(r, &gen, &Poly::new(r, vec![root_neg, r.one_elem()]));
            a = a * 2 % n;
            if a == a0 {
                break;
            }
        }
    }
    let gen = gen
        .coeffs()
        .iter()
        .map(|&c| {
            let coords = r.coords(c);
            if coords[1..].iter().any(|&x| x != 0) {
                return Err(Error::PreconditionViolated("generator coefficient outside Z4"));
            }
            Ok(coords[0] as u8)
        })
        .collect::<Result<Vec<u8>>>()?;
    let k = n - (gen.len() - 1);
    Ok(NegaCode {
        n,
        t,
        m,
        ring,
        beta,
        alpha,
        gen,
        k,
        pows,
    })
}

impl NegaCode {
    /// α^l for any integer exponent.
    pub fn alpha_pow(&self, l: i64) -> Elem {
        self.pows[l.rem_euclid(2 * self.n as i64) as usize]
    }

    /// Evaluates a Z4 word at α^l.
    fn eval_word(&self, y: &[u8], l: usize) -> Elem {
        let r = self.ring.as_ref();
        y.iter().enumerate().fold(Elem::ZERO, |acc, (i, &c)| {
            if c % 4 == 0 {
                acc
            } else {
                r.add(acc, r.mul(r.from_int(c as i64), self.alpha_pow((i * l) as i64)))
            }
        })
    }

    fn check_len(&self, y: &[u8]) -> Result<()> {
        if y.len() != self.n || y.iter().any(|&c| c > 3) {
            return Err(Error::InvalidParams(format!(
                "word must have {} entries in 0..=3",
                self.n
            )));
        }
        Ok(())
    }

    /// Whether c(α^{2i−1}) = 0 for 1 ≤ i ≤ t.
    pub fn is_codeword(&self, c: &[u8]) -> bool {
        c.len() == self.n && syndromes(self, c).is_zero()
    }
}

/// msg·gen mod X^n + 1 as a length-n vector.
pub fn nega_encode(code: &NegaCode, msg: &[u8]) -> Result<Vec<u8>> {
    let deg = msg.iter().rposition(|&c| c % 4 != 0);
    if let Some(d) = deg {
        if d >= code.k {
            return Err(Error::DegreeTooLarge {
                degree: d,
                bound: code.k - 1,
            });
        }
    }
    let mut out = vec![0u8; code.n];
    for (i, &a) in msg.iter().enumerate() {
        for (j, &b) in code.gen.iter().enumerate() {
            let e = i + j;
            let prod = a as u32 * b as u32 % 4;
            if e < code.n {
                out[e] = ((out[e] as u32 + prod) % 4) as u8;
            } else {
                // X^n = −1
                out[e - code.n] = ((out[e - code.n] as u32 + 4 - prod) % 4) as u8;
            }
        }
    }
    Ok(out)
}

/// s = Σ_{i=1}^t y(α^{2i−1}) Z^{2i−1}.
pub fn syndromes(code: &NegaCode, y: &[u8]) -> Poly<Elem> {
    let r = code.ring.as_ref();
    let mut coeffs = vec![Elem::ZERO; 2 * code.t];
    for i in 1..=code.t {
        coeffs[2 * i - 1] = code.eval_word(y, 2 * i - 1);
    }
    Poly::new(r, coeffs)
}

/// σ = ∏ (1 − α^i Z) for e_i = 1, (1 + α^i Z) for e_i = 3, (1 − α^i Z)² for e_i = 2.
pub fn error_locator(e: &[u8], code: &NegaCode) -> Poly<Elem> {
    let r = code.ring.as_ref();
    let mut sigma = Poly::one(r);
    for (i, &c) in e.iter().enumerate() {
        let x = code.alpha_pow(i as i64);
        let factor = match c % 4 {
            0 => continue,
            3 => Poly::new(r, vec![r.one_elem(), x]),
            _ => Poly::new(r, vec![r.one_elem(), r.neg(x)]),
        };
        sigma = poly::mul(r, &sigma, &factor);
        if c % 4 == 2 {
            sigma = poly::mul(r, &sigma, &factor);
        }
    }
    sigma
}

/// Odd u with s·(u² − 1) ≡ Z·u′ through degree 2t − 1.
pub fn derive_u(ring: &GaloisRing, s: &Poly<Elem>, t: usize) -> Poly<Elem> {
    let mut u = vec![Elem::ZERO; 2 * t];
    for i in 1..=t {
        let d = 2 * i - 1;
        let cur = Poly::new(ring, u.clone());
        let su2 = poly::mul_trunc(ring, s, &poly::mul_trunc(ring, &cur, &cur, d + 1), d + 1);
        let rhs = ring.sub(su2.coeff(ring, d), s.coeff(ring, d));
        let inv = ring
            .unit_inverse(ring.from_int(d as i64))
            .expect("odd integers are units");
        u[d] = ring.mul(inv, rhs);
    }
    Poly::new(ring, u)
}

/// T with (1 + T(Z²))(1 + Z·u) ≡ 1 mod Z^{2t+2}.
pub fn derive_t(ring: &GaloisRing, u: &Poly<Elem>, t: usize) -> Result<Poly<Elem>> {
    let one_zu = poly::add(ring, &Poly::one(ring), &poly::shift_up(ring, u, 1));
    let inv = poly::series_inverse(ring, &one_zu, 2 * t + 2)?;
    let mut coeffs = vec![Elem::ZERO; t + 1];
    for (i, &c) in inv.coeffs().iter().enumerate() {
        if i % 2 == 1 {
            if c != Elem::ZERO {
                return Err(Error::OddCoefficientNonzero);
            }
        } else if i >= 2 {
            coeffs[i / 2] = c;
        }
    }
    Ok(Poly::new(ring, coeffs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyEqData {
    pub s: Poly<Elem>,
    pub u: Poly<Elem>,
    pub t_poly: Poly<Elem>,
    /// U = 1 + T.
    pub big_u: Poly<Elem>,
}

pub fn key_equation(ring: &GaloisRing, s: &Poly<Elem>, t: usize) -> Result<KeyEqData> {
    let u = derive_u(ring, s, t);
    let t_poly = derive_t(ring, &u, t)?;
    let big_u = poly::add(ring, &Poly::one(ring), &t_poly);
    Ok(KeyEqData {
        s: s.clone(),
        u,
        t_poly,
        big_u,
    })
}

fn substitute_square(ring: &GaloisRing, f: &Poly<Elem>) -> Poly<Elem> {
    let mut out = vec![Elem::ZERO; 2 * f.len()];
    for (i, &c) in f.coeffs().iter().enumerate() {
        out[2 * i] = c;
    }
    Poly::new(ring, out)
}

/// σ = ω(Z²) + (φ(Z²) − ω(Z²))/Z.
pub fn reconstruct_sigma(ring: &GaloisRing, pair: &PairPoly) -> Poly<Elem> {
    let w2 = substitute_square(ring, &pair.g);
    let diff = poly::sub(ring, &substitute_square(ring, &pair.f), &w2);
    let odd = Poly::new(ring, diff.coeffs().iter().skip(1).copied().collect());
    poly::add(ring, &w2, &odd)
}

/// Scales σ so that σ(0) = 1, when σ(0) is a unit.
fn normalize_locator(ring: &GaloisRing, sigma: &Poly<Elem>) -> Option<Poly<Elem>> {
    let c = ring.unit_inverse(sigma.coeff(ring, 0)).ok()?;
    Some(poly::scale(ring, &c, sigma))
}

/// Locator from the lowest-ranked basis element with unit leading coefficient.
fn unique_locator(ring: &GaloisRing, s: &Poly<Elem>, t: usize) -> Option<Poly<Elem>> {
    let key = key_equation(ring, s, t).ok()?;
    let basis = bf_solve(ring, &key.big_u, t + 1);
    let best = basis.unit_leading(ring).into_iter().next()?;
    normalize_locator(ring, &reconstruct_sigma(ring, best))
}

/// Error vector read from the roots of σ over GR(4, m): a root at α^{−i}
/// means e_i ∈ {1, 2}, a root at −α^{−i} means e_i ∈ {2, 3}. Rejects σ
/// whose degree differs from the Lee weight found.
fn read_errors(code: &NegaCode, sigma: &Poly<Elem>) -> Option<Vec<u8>> {
    let r = code.ring.as_ref();
    let n = code.n as i64;
    let e: Vec<u8> = (0..n)
        .map(|i| {
            let plus = poly::eval(r, sigma, &code.alpha_pow(-i)) == Elem::ZERO;
            let minus = poly::eval(r, sigma, &code.alpha_pow(n - i)) == Elem::ZERO;
            match (plus, minus) {
                (true, true) => 2,
                (true, false) => 1,
                (false, true) => 3,
                (false, false) => 0,
            }
        })
        .collect();
    (sigma.degree() == Some(lee_weight(&e))).then_some(e)
}

/// Positions i with σ̄(β̄^{−i}) = 0 over the residue field.
fn read_positions(code: &NegaCode, field: &GaloisRing, sigma: &Poly<Elem>) -> Option<Vec<usize>> {
    let r = code.ring.as_ref();
    let pos: Vec<usize> = (0..code.n)
        .filter(|&i| {
            let x = r.mu(code.alpha_pow(-(i as i64)));
            poly::eval(field, sigma, &x) == Elem::ZERO
        })
        .collect();
    (sigma.degree() == Some(pos.len())).then_some(pos)
}

fn accept(code: &NegaCode, y: &[u8], e: &[u8], bound: usize) -> bool {
    lee_weight(e) <= bound && syndromes(code, &sub_z4(y, e)).is_zero()
}

/// Codeword and error within Lee distance t, or DecodingFailure.
pub fn unique_decode(code: &NegaCode, y: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    code.check_len(y)?;
    let r = code.ring.as_ref();
    let s = syndromes(code, y);
    if s.is_zero() {
        return Ok((y.to_vec(), vec![0; code.n]));
    }
    if let Some(e) = unique_locator(r, &s, code.t).and_then(|sigma| read_errors(code, &sigma)) {
        if accept(code, y, &e, code.t) {
            return Ok((sub_z4(y, &e), e));
        }
    }
    let found = two_adic_decode(code, y, code.t, 0)?;
    found
        .into_iter()
        .next()
        .map(|e| (sub_z4(y, &e), e))
        .ok_or(Error::DecodingFailure)
}

/// Guessed higher syndromes are limited to this many field elements in total.
const EXTENSION_LIMIT: u64 = 1 << 18;

/// Binary error patterns (as position sets) of weight ≤ t + extra whose
/// odd syndromes over the residue field equal `sbar` (degree ≤ 2t − 1).
/// For extra > 0 the next `extra` odd syndromes are enumerated and each
/// guess is decoded with the enlarged designed distance.
fn binary_candidates(code: &NegaCode, sbar: &Poly<Elem>, extra: usize) -> Result<Vec<Vec<usize>>> {
    let field = code.ring.residue_ring();
    let t = code.t;
    if sbar.is_zero() && extra == 0 {
        return Ok(vec![Vec::new()]);
    }
    let fsize = field.size();
    let guesses = fsize
        .checked_pow(extra as u32)
        .filter(|&g| g <= EXTENSION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{fsize}^{extra} syndrome guesses")))?;
    let elems: Vec<Elem> = (0..fsize as u32).map(|i| field_elem(field, i)).collect();
    let mut out = BTreeSet::new();
    let mut coeffs = sbar.coeffs().to_vec();
    coeffs.resize(2 * (t + extra), Elem::ZERO);
    for mut g in 0..guesses {
        for x in 0..extra {
            coeffs[2 * (t + x) + 1] = elems[(g % fsize) as usize];
            g /= fsize;
        }
        let s = Poly::new(field, coeffs.clone());
        let Some(sigma) = unique_locator(field, &s, t + extra) else {
            continue;
        };
        let Some(pos) = read_positions(code, field, &sigma) else {
            continue;
        };
        if pos.len() > t + extra || (extra > 0 && pos.len() <= t + extra - 1) {
            // lighter patterns are found at a lower level
            continue;
        }
        if binary_syndromes(code, field, &pos, t) == Poly::new(field, sbar.coeffs().to_vec()) {
            out.insert(pos);
        }
    }
    Ok(out.into_iter().collect())
}

fn field_elem(field: &GaloisRing, mut i: u32) -> Elem {
    let p = field.p();
    let coords: Vec<u32> = (0..field.m())
        .map(|_| {
            let c = i % p;
            i /= p;
            c
        })
        .collect();
    field.from_coords(&coords).expect("digits below p")
}

fn binary_syndromes(code: &NegaCode, field: &GaloisRing, pos: &[usize], t: usize) -> Poly<Elem> {
    let r = code.ring.as_ref();
    let mut coeffs = vec![Elem::ZERO; 2 * t];
    for i in 1..=t {
        let d = 2 * i - 1;
        coeffs[d] = pos.iter().fold(Elem::ZERO, |acc, &p| {
            field.add(acc, r.mu(code.alpha_pow((p * d) as i64)))
        });
    }
    Poly::new(field, coeffs)
}

/// Splits the error as e = e₁ + 2f with e₁ the indicator of odd entries:
/// e₁ is decoded from μ(y) over the residue field, f from the halved
/// syndromes of y − e₁. Each binary step may exceed t by up to
/// `max_extra`. Returns verified error vectors of Lee weight ≤ bound.
fn two_adic_decode(code: &NegaCode, y: &[u8], bound: usize, max_extra: usize) -> Result<Vec<Vec<u8>>> {
    let r = code.ring.as_ref();
    let field = r.residue_ring();
    let s = syndromes(code, y);
    let sbar = s.map_into(field, |&c| r.mu(c));
    let mut found = BTreeSet::new();
    for x1 in 0..=max_extra {
        for odd in binary_candidates(code, &sbar, x1)? {
            let mut e1 = vec![0u8; code.n];
            for &i in &odd {
                e1[i] = 1;
            }
            let s2 = syndromes(code, &sub_z4(y, &e1));
            if s2.coeffs().iter().any(|&c| r.val(c) == 0) {
                continue;
            }
            let half = s2.map_into(field, |&c| r.mu(r.div_p_pow(c, 1)));
            for x2 in 0..=max_extra {
                let mut hit = false;
                for twos in binary_candidates(code, &half, x2)? {
                    let mut e = e1.clone();
                    for &i in &twos {
                        e[i] = (e[i] + 2) % 4;
                    }
                    if accept(code, y, &e, bound) {
                        found.insert(e);
                        hit = true;
                    }
                }
                if hit {
                    break;
                }
            }
        }
        if !found.is_empty() {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

/// Value of σ_j/σ_i at a point γ, or its reciprocal when that is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioValue {
    Finite(Elem),
    /// σ_i(γ) is not a unit but σ_j(γ) is; carries σ_i(γ)/σ_j(γ).
    Infinite(Elem),
    Ambiguous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioPoint {
    pub gamma: Elem,
    pub value: RatioValue,
}

/// Classifies σ_j/σ_i at γ = α^l, 0 ≤ l < 2n.
pub fn build_ratio_points(code: &NegaCode, sigma_i: &Poly<Elem>, sigma_j: &Poly<Elem>) -> Vec<RatioPoint> {
    let r = code.ring.as_ref();
    (0..2 * code.n)
        .map(|l| {
            let gamma = code.pows[l];
            let vi = poly::eval(r, sigma_i, &gamma);
            let vj = poly::eval(r, sigma_j, &gamma);
            let value = if let Ok(inv) = r.unit_inverse(vi) {
                RatioValue::Finite(r.mul(vj, inv))
            } else if let Ok(inv) = r.unit_inverse(vj) {
                RatioValue::Infinite(r.mul(vi, inv))
            } else {
                RatioValue::Ambiguous
            };
            RatioPoint { gamma, value }
        })
        .collect()
}

/// S = {(i, j) : i ≤ eτ/2, ⌊ℓ/2⌋·j ≤ eτ/2}; j ≤ 1 when ⌊ℓ/2⌋ = 0.
pub fn wu_support(tau: usize, t: usize, e: usize) -> SupportSet {
    let half = (tau - t) / 2;
    let cap = e * tau / 2;
    let jmax = if half == 0 { 1 } else { cap / half };
    SupportSet::from_iter((0..=cap).flat_map(|i| (0..=jmax).map(move |j| (i, j))))
}

/// Largest τ with (n − τ)² > n(n − d).
pub fn radius_bound(n: usize, d: usize) -> usize {
    let rhs = (n * (n - d.min(n))) as u128;
    (0..n)
        .rev()
        .find(|&tau| ((n - tau) as u128).pow(2) > rhs)
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NegaCandidate {
    pub codeword: Vec<u8>,
    pub error: Vec<u8>,
}

const RETRIES: usize = 8;

/// Interpolation matrix for the ratio points with X = γ².
fn ratio_matrix(code: &NegaCode, points: &[RatioPoint], support: &SupportSet, e: usize) -> Matrix {
    let r = code.ring.as_ref();
    let exps = &support.indices;
    let dmax = support.max_j();
    let rev: Vec<(usize, usize)> = exps.iter().map(|&(i, j)| (i, dmax - j)).collect();
    let binom = binomials_for(r, exps);
    let mut a = Matrix::zeros(0, exps.len());
    for pt in points {
        let x = r.mul(pt.gamma, pt.gamma);
        let rows = match pt.value {
            RatioValue::Finite(v) => multiplicity_rows(r, x, v, exps, e, &binom),
            RatioValue::Infinite(w) => multiplicity_rows(r, x, w, &rev, e, &binom),
            RatioValue::Ambiguous => continue,
        };
        for row in rows {
            a.push_row(&row);
        }
    }
    a
}

/// Ratio factors b·Y − a of Q: exact over R, or only their residues when
/// μQ has no square-free specialization.
enum RatioFactors {
    Exact(Vec<(Poly<Elem>, Poly<Elem>)>),
    Residue(Vec<(Poly<Elem>, Poly<Elem>)>),
}

/// Pairs (a, b) with deg a, deg b ≤ half and b unit-leading such that
/// b·Y − a divides Q.
///
/// When no square-free specialization exists (the interpolation
/// conditions at ±γ coincide mod 2, which typically makes μQ a square),
/// the linear factors are found over the residue field after taking
/// square roots of μQ, and only their residues are returned.
fn ratio_factors(code: &NegaCode, q: &BiPoly, half: usize, seed: u64) -> Result<RatioFactors> {
    let r = code.ring.as_ref();
    let opts = FactorOptions {
        max_subset: Some(1),
        seed,
    };
    let factors: Vec<BiPoly> = match factor_bivariate(&code.ring, q, MainVar::Y, &opts) {
        Ok(fl) => fl.factors.into_iter().map(|(f, _)| f).collect(),
        Err(Error::NoSquarefreeSpecialization) | Err(Error::FactorizationFailed(_)) => {
            return residue_ratio_factors(code, q, half, seed).map(RatioFactors::Residue);
        }
        Err(e) => return Err(Error::FactorizationFailed(Box::new(e))),
    };
    Ok(RatioFactors::Exact(
        linear_factors(r, &factors, half)
            .into_iter()
            .filter(|(_, b)| b.lead().is_some_and(|&c| r.is_unit_elem(c)))
            .collect(),
    ))
}

/// (a, b) from the factors b·Y − a with small coefficient degrees.
fn linear_factors(ring: &GaloisRing, factors: &[BiPoly], half: usize) -> Vec<(Poly<Elem>, Poly<Elem>)> {
    let small = |f: &Poly<Elem>| f.degree().unwrap_or(0) <= half;
    factors
        .iter()
        .filter(|h| h.deg_y() == Some(1))
        .filter_map(|h| {
            let cols = h.y_coeffs(ring);
            let (a, b) = (poly::neg(ring, &cols[0]), cols[1].clone());
            (small(&a) && small(&b)).then_some((a, b))
        })
        .collect()
}

/// Residues (ā, b̄) with b̄ monic of the ratio factors of μQ.
fn residue_ratio_factors(code: &NegaCode, q: &BiPoly, half: usize, seed: u64) -> Result<Vec<(Poly<Elem>, Poly<Elem>)>> {
    let r = code.ring.as_ref();
    let field = code.ring.residue_field();
    let f = field.as_ref();
    let mut qbar = BiPoly::from_terms(q.terms().map(|(k, c)| (k, r.mu(c))));
    while !qbar.is_zero() && qbar.terms().all(|((i, j), _)| i % 2 == 0 && j % 2 == 0) {
        let root = |c: Elem| f.pow(c, f.size() / 2);
        qbar = BiPoly::from_terms(qbar.terms().map(|((i, j), c)| ((i / 2, j / 2), root(c))));
    }
    let opts = FactorOptions {
        max_subset: Some(1),
        seed,
    };
    let fl = factor_bivariate(&field, &qbar, MainVar::Y, &opts).map_err(|e| Error::FactorizationFailed(Box::new(e)))?;
    let factors: Vec<BiPoly> = fl.factors.into_iter().map(|(g, _)| g).collect();
    Ok(linear_factors(f, &factors, half)
        .into_iter()
        .map(|(abar, bbar)| {
            let inv = f.unit_inverse(*bbar.lead().expect("Y-linear factor")).expect("field");
            (poly::scale(f, &inv, &abar), poly::scale(f, &inv, &bbar))
        })
        .collect())
}

/// Lifts of (ā, b̄) to R = GR(4, m) for which Σ = a(Z²)σ_i − b(Z²)σ_j has,
/// at every residue root β̄^{−i} of μΣ, one of ±α^{−i} as an exact root.
///
/// With a = â + 2a′, b = b̂ + 2b′ (coordinate lifts plus corrections, the
/// leading coefficient of b kept at 1) each position gives a linear
/// equation in (a′, b′) over the residue field whose right-hand side
/// depends on the sign of the root. Signs are enumerated on a maximal
/// independent set of positions and the solution checked on the rest.
fn lift_by_roots(
    code: &NegaCode,
    abar: &Poly<Elem>,
    bbar: &Poly<Elem>,
    sigma_i: &Poly<Elem>,
    sigma_j: &Poly<Elem>,
    half: usize,
) -> Vec<(Poly<Elem>, Poly<Elem>)> {
    let r = code.ring.as_ref();
    let field = r.residue_ring();
    let n = code.n as i64;
    let lift = |f: &Poly<Elem>| f.map_into(r, |&c| r.lift_coords(c));
    let (a0, b0) = (lift(abar), lift(bbar));
    let combine = |a: &Poly<Elem>, b: &Poly<Elem>| {
        poly::sub(
            r,
            &poly::mul(r, &substitute_square(r, a), sigma_i),
            &poly::mul(r, &substitute_square(r, b), sigma_j),
        )
    };
    let sigma0 = combine(&a0, &b0);
    let lead = bbar.degree().unwrap_or(0);
    // unknowns: a′_0..a′_h, then b′_k for k ≠ lead
    let free: Vec<usize> = (0..2 * (half + 1)).filter(|&u| u != half + 1 + lead).collect();

    let mut rows: Vec<Vec<Elem>> = Vec::new();
    let mut rhs: Vec<[Elem; 2]> = Vec::new();
    for i in 0..n {
        let plus = code.alpha_pow(-i);
        let minus = code.alpha_pow(n - i);
        let (vp, vm) = (poly::eval(r, &sigma0, &plus), poly::eval(r, &sigma0, &minus));
        if r.val(vp) == 0 || r.val(vm) == 0 {
            continue;
        }
        let g = r.mu(plus);
        let g2 = field.mul(g, g);
        let si = poly::eval(field, &sigma_i.map_into(field, |&c| r.mu(c)), &g);
        let sj = poly::eval(field, &sigma_j.map_into(field, |&c| r.mu(c)), &g);
        let row = free
            .iter()
            .map(|&u| {
                let (k, s) = if u <= half { (u, si) } else { (u - half - 1, sj) };
                field.mul(field.pow(g2, k as u64), s)
            })
            .collect();
        rows.push(row);
        // Σ(γ) = Σ₀(γ) + 2(…): the correction term must cancel Σ₀(γ)/2
        let half_val = |v: Elem| r.mu(r.div_p_pow(v, 1));
        rhs.push([half_val(vp), half_val(vm)]);
    }

    // maximal independent subset of rows, in order
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<Elem>> = chosen.iter().map(|&c| rows[c].clone()).collect();
        trial.push(rows[i].clone());
        if field_rank(field, trial) == chosen.len() + 1 {
            chosen.push(i);
        }
        if chosen.len() == free.len() {
            break;
        }
    }
    let mut out = BTreeSet::new();
    for signs in 0u32..1 << chosen.len() {
        let sel: Vec<Vec<Elem>> = chosen.iter().map(|&c| rows[c].clone()).collect();
        let vals: Vec<Elem> = chosen
            .iter()
            .enumerate()
            .map(|(k, &c)| rhs[c][(signs >> k & 1) as usize])
            .collect();
        let Some(delta) = field_solve(field, &sel, &vals, free.len()) else {
            continue;
        };
        let consistent = rows.iter().zip(&rhs).all(|(row, opts)| {
            let v = row
                .iter()
                .zip(&delta)
                .fold(Elem::ZERO, |acc, (&x, &d)| field.add(acc, field.mul(x, d)));
            opts.contains(&v)
        });
        if !consistent {
            continue;
        }
        let mut coeffs = vec![Elem::ZERO; 2 * (half + 1)];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let base = if k <= half { &a0 } else { &b0 };
            *c = base.coeff(r, if k <= half { k } else { k - half - 1 });
        }
        for (&u, &d) in free.iter().zip(&delta) {
            // Σ₀(γ) + 2·corr = 0 needs corr ≡ −Σ₀(γ)/2 ≡ Σ₀(γ)/2 mod 2
            let step = r.mul_p_pow(r.lift_coords(d), 1);
            coeffs[u] = if u <= half { r.sub(coeffs[u], step) } else { r.add(coeffs[u], step) };
        }
        let a = Poly::new(r, coeffs[..=half].to_vec());
        let b = Poly::new(r, coeffs[half + 1..].to_vec());
        out.insert((a.into_coeffs(), b.into_coeffs()));
    }
    out.into_iter()
        .map(|(a, b)| (Poly::new(r, a), Poly::new(r, b)))
        .collect()
}

/// Rank of a matrix over a field.
fn field_rank(field: &GaloisRing, rows: Vec<Vec<Elem>>) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let zeros = vec![Elem::ZERO; rows.len()];
    let (_, kernel) = field::solve_affine(field, &rows, &zeros, n).expect("homogeneous");
    n - kernel.len()
}

/// A solution of rows·x = vals with free variables set to zero.
fn field_solve(field: &GaloisRing, rows: &[Vec<Elem>], vals: &[Elem], n: usize) -> Option<Vec<Elem>> {
    field::solve_affine(field, rows, vals, n).map(|(x, _)| x)
}

/// Errors accepted from the ratio σ_j/σ_i, each with its (a, b).
fn wu_candidates(
    code: &NegaCode,
    y: &[u8],
    tau: usize,
    e: usize,
    sigma_i: &Poly<Elem>,
    sigma_j: &Poly<Elem>,
    seed: u64,
) -> Result<BTreeMap<Vec<u8>, (Poly<Elem>, Poly<Elem>)>> {
    let r = code.ring.as_ref();
    let support = wu_support(tau, code.t, e);
    let needed = condition_count(2 * code.n, e);
    if support.len() <= needed {
        return Err(Error::RadiusInfeasible {
            size: support.len(),
            needed,
        });
    }
    let half = (tau - code.t) / 2;
    let points = build_ratio_points(code, sigma_i, sigma_j);
    let a = ratio_matrix(code, &points, &support, e);
    let gens = kernel_basis(r, &a);
    let mut attempt = smith_solve_homogeneous(r, &a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = BTreeMap::new();
    let mut last_err = None;
    for _ in 0..=RETRIES {
        let q = poly_from_kernel(&support.indices, &attempt);
        let pairs = ratio_factors(code, &q, half, seed).map(|f| match f {
            RatioFactors::Exact(pairs) => pairs,
            RatioFactors::Residue(res) => res
                .iter()
                .flat_map(|(abar, bbar)| lift_by_roots(code, abar, bbar, sigma_i, sigma_j, half))
                .collect(),
        });
        match pairs {
            Ok(pairs) => {
                for (fa, fb) in pairs {
                    let big = poly::sub(
                        r,
                        &poly::mul(r, &substitute_square(r, &fa), sigma_i),
                        &poly::mul(r, &substitute_square(r, &fb), sigma_j),
                    );
                    let Some(big) = normalize_locator(r, &big) else {
                        continue;
                    };
                    if let Some(err) = read_errors(code, &big) {
                        if accept(code, y, &err, tau) {
                            found.entry(err).or_insert((fa, fb));
                        }
                    }
                }
                if !found.is_empty() {
                    return Ok(found);
                }
            }
            Err(err) => last_err = Some(err),
        }
        attempt = random_combination(r, &gens, &mut rng);
    }
    match last_err {
        Some(err) if found.is_empty() => Err(err),
        _ => Ok(found),
    }
}

/// Codewords within Lee distance τ of y.
///
/// Interpolates σ_j/σ_i by a/b from the two lowest unit-leading basis
/// locators; other unit-leading pairs are tried while the list is empty.
/// The 2-adic split decoder runs as well whenever τ > t, since errors of
/// magnitude 2 defeat the ratio interpolation.
pub fn wu_list_decode(code: &NegaCode, y: &[u8], tau: usize, e: usize, seed: u64) -> Result<Vec<NegaCandidate>> {
    code.check_len(y)?;
    if tau < code.t || e == 0 {
        return Err(Error::InvalidParams(format!("need tau >= t and e >= 1 (tau={tau})")));
    }
    let r = code.ring.as_ref();
    let mut errors: BTreeSet<Vec<u8>> = BTreeSet::new();
    if let Ok((_, err)) = unique_decode(code, y) {
        errors.insert(err);
    }
    if tau > code.t {
        let half = (tau - code.t) / 2;
        if half >= 1 {
            let support = wu_support(tau, code.t, e);
            let needed = condition_count(2 * code.n, e);
            if support.len() <= needed {
                return Err(Error::RadiusInfeasible {
                    size: support.len(),
                    needed,
                });
            }
            let s = syndromes(code, y);
            let key = key_equation(r, &s, code.t)?;
            let basis = bf_solve(r, &key.big_u, code.t + 1);
            let lead: Vec<Poly<Elem>> = basis
                .unit_leading(r)
                .into_iter()
                .map(|p| reconstruct_sigma(r, p))
                .collect();
            'pairs: for i in 0..lead.len() {
                for j in i + 1..lead.len() {
                    if let Ok(found) = wu_candidates(code, y, tau, e, &lead[i], &lead[j], seed) {
                        if !found.is_empty() {
                            errors.extend(found.into_keys());
                            break 'pairs;
                        }
                    }
                }
            }
        }
        let extra = tau - code.t;
        for err in two_adic_decode(code, y, tau, extra.min(MAX_EXTRA))? {
            errors.insert(err);
        }
    }
    if errors.is_empty() {
        return Err(Error::DecodingFailure);
    }
    let mut out: Vec<NegaCandidate> = errors
        .into_iter()
        .map(|err| NegaCandidate {
            codeword: sub_z4(y, &err),
            error: err,
        })
        .collect();
    out.sort_by_key(|c| (lee_weight(&c.error), c.codeword.clone()));
    for c in &out {
        debug_assert!(lee_distance(&c.codeword, y) <= tau && code.is_codeword(&c.codeword));
    }
    Ok(out)
}

/// Guessed syndromes per binary step in the 2-adic decoder.
const MAX_EXTRA: usize = 2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key_solver::discrepancy;
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn random_error(n: usize, weight: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let mut e = vec![0u8; n];
        let mut pos: Vec<usize> = (0..n).collect();
        pos.shuffle(rng);
        let mut left = weight;
        for &p in &pos {
            if left == 0 {
                break;
            }
            e[p] = match (left, rng.gen_range(0..3)) {
                (1, 0) | (_, 1) => 1,
                (_, 2) => 3,
                _ => 2,
            };
            left -= lee_weight(&e[p..=p]);
        }
        e
    }

    fn random_codeword(code: &NegaCode, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let msg: Vec<u8> = (0..code.k).map(|_| rng.gen_range(0..4)).collect();
        nega_encode(code, &msg).unwrap()
    }

    fn add(a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % 4).collect()
    }

    #[test]
    fn lee_weights() {
        assert_eq!(lee_weight(&[0, 1, 2, 3]), 4);
        assert_eq!(lee_weight(&[0; 9]), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let v: Vec<u8> = (0..10).map(|_| rng.gen_range(0..4)).collect();
            let w: Vec<u8> = (0..10).map(|_| rng.gen_range(0..4)).collect();
            assert_eq!(lee_distance(&v, &v), 0);
            assert_eq!(lee_distance(&v, &w), lee_distance(&w, &v));
            assert_eq!(lee_distance(&v, &w), lee_weight(&sub_z4(&v, &w)));
        }
    }

    #[test]
    fn known_ranks() {
        let table = [
            (15, 1, 11),
            (15, 2, 7),
            (15, 3, 5),
            (31, 1, 26),
            (31, 2, 21),
            (31, 3, 16),
            (31, 5, 11),
            (31, 7, 6),
        ];
        for (n, t, k) in table {
            let code = nega_construct(n, t).unwrap();
            assert_eq!(code.k, k, "({n}, {t})");
        }
        let code = nega_construct(63, 16).unwrap();
        assert_eq!(code.m, 6);
        assert!(nega_construct(14, 1).is_err());
        assert!(nega_construct(15, 0).is_err());
    }

    #[test]
    fn alpha_has_order_2n() {
        let code = nega_construct(15, 3).unwrap();
        let r = code.ring.as_ref();
        assert_eq!(r.pow(code.alpha, 15), r.neg(r.one_elem()));
        assert_eq!(code.alpha, r.neg(code.beta));
    }

    #[test]
    fn encoding() {
        let code = nega_construct(15, 3).unwrap();
        assert_eq!(nega_encode(&code, &[]).unwrap(), vec![0; 15]);
        let g = nega_encode(&code, &[1]).unwrap();
        assert_eq!(&g[..code.gen.len()], &code.gen[..]);
        assert!(code.is_codeword(&g));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            assert!(syndromes(&code, &random_codeword(&code, &mut rng)).is_zero());
        }
        let long = vec![1u8; code.k + 1];
        assert!(matches!(nega_encode(&code, &long), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn negacyclic_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, t) in [(15, 2), (31, 5)] {
            let code = nega_construct(n, t).unwrap();
            for _ in 0..10 {
                let c = random_codeword(&code, &mut rng);
                let mut shifted = vec![(4 - c[n - 1]) % 4];
                shifted.extend_from_slice(&c[..n - 1]);
                assert!(code.is_codeword(&shifted));
            }
        }
    }

    #[test]
    fn syndrome_examples() {
        let code = nega_construct(15, 3).unwrap();
        let r = code.ring.as_ref();
        let mut e = vec![0u8; 15];
        e[0] = 1;
        let s = syndromes(&code, &e);
        for i in 0..6 {
            let want = if i % 2 == 1 { r.one_elem() } else { Elem::ZERO };
            assert_eq!(s.coeff(r, i), want);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = random_codeword(&code, &mut rng);
        let e = random_error(15, 3, &mut rng);
        assert_eq!(syndromes(&code, &add(&c, &e)), syndromes(&code, &e));
    }

    #[test]
    fn locator_examples() {
        let code = nega_construct(15, 3).unwrap();
        let r = code.ring.as_ref();
        let mut e = vec![0u8; 15];
        assert_eq!(error_locator(&e, &code), Poly::one(r));
        e[0] = 1;
        assert_eq!(error_locator(&e, &code), crate::poly::from_ints(&code.ring, &[1, -1]));
        e[0] = 3;
        assert_eq!(error_locator(&e, &code), crate::poly::from_ints(&code.ring, &[1, 1]));
    }

    #[test]
    fn u_and_t_examples() {
        let code = nega_construct(15, 3).unwrap();
        let r = code.ring.as_ref();
        assert!(derive_u(r, &Poly::zero(), 3).is_zero());
        assert!(derive_t(r, &Poly::zero(), 3).unwrap().is_zero());
        let s1 = r.pow(code.beta, 4);
        let s = Poly::new(r, vec![Elem::ZERO, s1]);
        let u = derive_u(r, &s, 1);
        assert_eq!(u, Poly::new(r, vec![Elem::ZERO, r.neg(s1)]));
        let t = derive_t(r, &u, 1).unwrap();
        assert_eq!(t, Poly::new(r, vec![Elem::ZERO, s1]));
    }

    #[test]
    fn key_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let code = nega_construct(31, 5).unwrap();
        let r = code.ring.as_ref();
        let t = code.t;
        for _ in 0..20 {
            let w = rng.gen_range(0..=t);
            let s = syndromes(&code, &random_error(31, w, &mut rng));
            let key = key_equation(r, &s, t).unwrap();
            // s·(u² − 1) ≡ Z·u′ through degree 2t − 1
            let u2 = poly::mul(r, &key.u, &key.u);
            let lhs = poly::mul(r, &s, &poly::sub(r, &u2, &Poly::one(r)));
            let du = poly::derivative(r, &key.u);
            for d in (1..2 * t).step_by(2) {
                assert_eq!(lhs.coeff(r, d), du.coeff(r, d - 1));
            }
            // (1 + T(Z²))(1 + Z·u) ≡ 1 mod Z^{2t+2}
            let one_zu = poly::add(r, &Poly::one(r), &poly::shift_up(r, &key.u, 1));
            let prod = poly::mul(r, &substitute_square(r, &key.big_u), &one_zu);
            for d in 0..2 * t + 2 {
                let want = if d == 0 { r.one_elem() } else { Elem::ZERO };
                assert_eq!(prod.coeff(r, d), want);
            }
        }
    }

    #[test]
    fn radius_examples() {
        assert_eq!(radius_bound(63, 33), 19);
        assert_eq!(radius_bound(40, 40), 39);
        assert_eq!(radius_bound(64, 59), 46);
        assert_eq!(wu_support(19, 16, 2).len(), 400);
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (n, t, trials) in [(15, 3, 30), (31, 5, 30), (63, 16, 10)] {
            let code = nega_construct(n, t).unwrap();
            let r = code.ring.as_ref();
            for _ in 0..trials {
                let e = random_error(n, rng.gen_range(0..=t), &mut rng);
                if !e.contains(&2) {
                    let sigma = unique_locator(r, &syndromes(&code, &e), t).unwrap();
                    assert_eq!(sigma, error_locator(&e, &code), "{e:?}");
                }
                let c = random_codeword(&code, &mut rng);
                assert_eq!(unique_decode(&code, &add(&c, &e)).unwrap(), (c, e));
            }
        }
    }

    #[test]
    fn exhaustive_pairs_at_position_zero() {
        let code = nega_construct(15, 3).unwrap();
        for j in 0..15 {
            for a in 1..4u8 {
                for b in 0..4u8 {
                    let mut e = vec![0u8; 15];
                    e[j] = b;
                    e[0] = a;
                    if lee_weight(&e) > 3 {
                        continue;
                    }
                    assert_eq!(unique_decode(&code, &e).unwrap().1, e, "{e:?}");
                }
            }
        }
    }

    #[test]
    fn beyond_t_is_rejected_or_wrong_codeword() {
        let code = nega_construct(15, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let e = random_error(15, 3, &mut rng);
            if let Ok((c, err)) = unique_decode(&code, &e) {
                assert!(code.is_codeword(&c));
                assert!(lee_weight(&err) <= 2);
            }
        }
    }

    #[test]
    fn ratio_point_classes() {
        let code = nega_construct(15, 3).unwrap();
        let r = code.ring.as_ref();
        let sj = crate::poly::from_ints(&code.ring, &[1, 2, 3]);
        let pts = build_ratio_points(&code, &Poly::one(r), &sj);
        assert_eq!(pts.len(), 30);
        for p in &pts {
            assert_eq!(p.value, RatioValue::Finite(poly::eval(r, &sj, &p.gamma)));
        }
        let si = crate::poly::from_ints(&code.ring, &[1, -1]);
        let pts = build_ratio_points(&code, &si, &Poly::one(r));
        assert_eq!(pts[0].value, RatioValue::Infinite(Elem::ZERO));
        let pts = build_ratio_points(&code, &si, &crate::poly::from_ints(&code.ring, &[1, 1]));
        let count = |f: fn(&RatioValue) -> bool| pts.iter().filter(|p| f(&p.value)).count();
        let finite = count(|v| matches!(v, RatioValue::Finite(_)));
        let infinite = count(|v| matches!(v, RatioValue::Infinite(_)));
        let ambiguous = count(|v| matches!(v, RatioValue::Ambiguous));
        assert_eq!(finite + infinite + ambiguous, 30);
        // σ_i(±1) and σ_j(±1) are both nonunits
        assert_eq!(ambiguous, 2);
    }

    #[test]
    fn list_at_unique_radius() {
        let code = nega_construct(15, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = random_codeword(&code, &mut rng);
        let e = random_error(15, 3, &mut rng);
        let list = wu_list_decode(&code, &add(&c, &e), 3, 1, 0).unwrap();
        assert_eq!(list, vec![NegaCandidate { codeword: c, error: e.clone() }]);
        assert!(wu_list_decode(&code, &e, 2, 1, 0).is_err());
    }

    #[test]
    fn infeasible_radius() {
        let code = nega_construct(15, 1).unwrap();
        assert!(matches!(
            wu_list_decode(&code, &[0; 15], 3, 1, 0),
            Err(Error::RadiusInfeasible { .. })
        ));
    }

    #[test]
    fn jump_coherence() {
        let code = nega_construct(63, 16).unwrap();
        let wide = nega_construct(63, 19).unwrap();
        let r = code.ring.as_ref();
        let tau = 19;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 2 {
            let c = random_codeword(&code, &mut rng);
            let mut e = random_error(63, tau, &mut rng);
            e.iter_mut().filter(|x| **x == 2).for_each(|x| *x = 1);
            if lee_weight(&e) != tau {
                continue;
            }
            let y = add(&c, &e);
            let key = key_equation(r, &syndromes(&code, &y), code.t).unwrap();
            let basis = bf_solve(r, &key.big_u, code.t + 1);
            let lead = basis.unit_leading(r);
            let (pi, pj) = (lead[0], lead[1]);
            let (si, sj) = (reconstruct_sigma(r, pi), reconstruct_sigma(r, pj));
            let found = wu_candidates(&code, &y, tau, 2, &si, &sj, 0).unwrap();
            let (a, b) = found.get(&e).expect("true error accepted");
            let comb = pi.mul_poly(r, a).sub(r, &pj.mul_poly(r, b));
            let full = key_equation(r, &syndromes(&wide, &e), tau).unwrap();
            for k in 0..=tau {
                assert_eq!(discrepancy(r, &comb, &full.big_u, k), Elem::ZERO, "k = {k}");
            }
            checked += 1;
        }
    }
}
