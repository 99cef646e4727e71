//! Exhaustive reference searches. These never call the decoders.

use leecode::nega::{lee_weight, nega_encode, NegaCode};
use leecode::rs::{hamming_distance, RSCode};
use leecode::{Elem, Error, Poly, Result};

/// Largest message space the oracles will enumerate.
pub const ORACLE_LIMIT: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Hamming,
    Lee,
}

fn check_size(base: u64, k: usize) -> Result<u64> {
    base.checked_pow(k as u32)
        .filter(|&s| s <= ORACLE_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{base}^{k} messages")))
}

/// Rows x^i·gen, i < k, as Z4 vectors.
fn nega_basis(code: &NegaCode) -> Result<Vec<Vec<u8>>> {
    (0..code.k)
        .map(|i| {
            let mut msg = vec![0u8; i + 1];
            msg[i] = 1;
            nega_encode(code, &msg)
        })
        .collect()
}

/// Calls `visit` on every codeword, in message-lexicographic order with the
/// lowest message digit varying fastest. Consecutive codewords differ by a
/// sum of basis rows, so each step costs O(n) on average.
fn for_each_nega_codeword(code: &NegaCode, mut visit: impl FnMut(&[u8])) -> Result<()> {
    check_size(4, code.k)?;
    let basis = nega_basis(code)?;
    let mut digits = vec![0u8; code.k];
    let mut word = vec![0u8; code.n];
    loop {
        visit(&word);
        let mut i = 0;
        loop {
            if i == code.k {
                return Ok(());
            }
            for (w, &b) in word.iter_mut().zip(&basis[i]) {
                *w = (*w + b) % 4;
            }
            digits[i] = (digits[i] + 1) % 4;
            if digits[i] != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// Minimum Lee weight of a nonzero codeword; needs k ≤ 12.
pub fn oracle_lee_min_distance(code: &NegaCode) -> Result<usize> {
    if code.k > 12 {
        return Err(Error::TooLarge(format!("rank {} above 12", code.k)));
    }
    let mut best = usize::MAX;
    for_each_nega_codeword(code, |c| {
        let w = lee_weight(c);
        if w > 0 && w < best {
            best = w;
        }
    })?;
    Ok(best)
}

fn hamming_u8(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// All codewords within `radius` of y, sorted.
pub fn oracle_list_decode_nega(code: &NegaCode, y: &[u8], radius: usize, metric: Metric) -> Result<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for_each_nega_codeword(code, |c| {
        let d = match metric {
            Metric::Lee => leecode::nega::lee_distance(c, y),
            Metric::Hamming => hamming_u8(c, y),
        };
        if d <= radius {
            out.push(c.to_vec());
        }
    })?;
    out.sort();
    Ok(out)
}

/// All RS codewords within Hamming distance `radius` of y, sorted.
pub fn oracle_list_decode_rs(code: &RSCode, y: &[Elem], radius: usize) -> Result<Vec<Vec<Elem>>> {
    let ring = code.ring.as_ref();
    let size = ring.size();
    check_size(size, code.k)?;
    let elems: Vec<Elem> = all_elements(code)?;
    let mut out = Vec::new();
    let mut digits = vec![0usize; code.k];
    loop {
        let f = Poly::new(ring, digits.iter().map(|&d| elems[d]).collect());
        let c = code.encode(&f)?;
        if hamming_distance(&c, y) <= radius {
            out.push(c);
        }
        let mut i = 0;
        loop {
            if i == code.k {
                out.sort();
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < elems.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Every element of the code's ring, by coordinate vector.
fn all_elements(code: &RSCode) -> Result<Vec<Elem>> {
    let ring = code.ring.as_ref();
    let q = ring.characteristic();
    let m = ring.m();
    (0..ring.size())
        .map(|mut x| {
            let coords: Vec<u32> = (0..m)
                .map(|_| {
                    let c = (x % q as u64) as u32;
                    x /= q as u64;
                    c
                })
                .collect();
            ring.from_coords(&coords)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use leecode::nega::nega_construct;
    use leecode::GaloisRing;

    #[test]
    fn known_distances() {
        for (t, d) in [(2, 5), (3, 10)] {
            let code = nega_construct(15, t).unwrap();
            assert_eq!(oracle_lee_min_distance(&code).unwrap(), d);
        }
        let code = nega_construct(31, 7).unwrap();
        assert_eq!(oracle_lee_min_distance(&code).unwrap(), 26);
        let code = nega_construct(31, 1).unwrap();
        assert!(matches!(oracle_lee_min_distance(&code), Err(Error::TooLarge(_))));
    }

    #[test]
    fn radius_zero_returns_the_codeword() {
        let code = nega_construct(15, 3).unwrap();
        let c = nega_encode(&code, &[1, 2, 3]).unwrap();
        assert_eq!(oracle_list_decode_nega(&code, &c, 0, Metric::Lee).unwrap(), vec![c.clone()]);
        assert_eq!(oracle_list_decode_nega(&code, &c, 0, Metric::Hamming).unwrap(), vec![c]);

        let r = GaloisRing::new(2, 2, 2).unwrap();
        let rs = RSCode::new(&r, 4, 2).unwrap();
        let c = rs.encode(&Poly::new(r.as_ref(), vec![r.theta(), r.one_elem()])).unwrap();
        assert_eq!(oracle_list_decode_rs(&rs, &c, 0).unwrap(), vec![c]);
    }

    #[test]
    fn unique_within_half_distance() {
        let code = nega_construct(15, 3).unwrap();
        let c = nega_encode(&code, &[0, 3, 1, 1]).unwrap();
        let mut y = c.clone();
        y[2] = (y[2] + 1) % 4;
        y[7] = (y[7] + 2) % 4;
        assert_eq!(oracle_list_decode_nega(&code, &y, 3, Metric::Lee).unwrap(), vec![c]);
    }
}
