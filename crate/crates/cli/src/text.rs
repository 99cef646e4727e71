//! Line formats for words: Z4 words are comma-separated digits, ring words
//! are whitespace-separated elements in the `[c0,...]` format.

use leecode::{Elem, Error, GaloisRing, Result};

pub fn parse_z4_word(line: &str) -> Result<Vec<u8>> {
    line.split(',')
        .map(|s| match s.trim().parse::<u8>() {
            Ok(d) if d < 4 => Ok(d),
            _ => Err(Error::Parse(format!("bad Z4 digit {s:?}"))),
        })
        .collect()
}

pub fn format_z4_word(w: &[u8]) -> String {
    w.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_ring_word(ring: &GaloisRing, line: &str) -> Result<Vec<Elem>> {
    line.split_whitespace().map(|s| ring.parse_elem(s)).collect()
}

pub fn format_ring_word(ring: &GaloisRing, w: &[Elem]) -> String {
    w.iter().map(|&x| ring.format_elem(x)).collect::<Vec<_>>().join(" ")
}

/// Non-blank lines that do not start with `#`.
pub fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_round_trip() {
        let w = parse_z4_word("0, 1,2,3").unwrap();
        assert_eq!(w, vec![0, 1, 2, 3]);
        assert_eq!(format_z4_word(&w), "0,1,2,3");
        assert!(parse_z4_word("0,4").is_err());
        assert!(parse_z4_word("1,,2").is_err());
    }

    #[test]
    fn ring_round_trip() {
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let w = vec![r.theta(), r.from_int(3), Elem::ZERO];
        let s = format_ring_word(&r, &w);
        assert_eq!(s, "[0,1] [3,0] [0,0]");
        assert_eq!(parse_ring_word(&r, &s).unwrap(), w);
    }

    #[test]
    fn skips_comments() {
        let v: Vec<&str> = data_lines("# x\n\n 1,2 \n").collect();
        assert_eq!(v, vec!["1,2"]);
    }
}
