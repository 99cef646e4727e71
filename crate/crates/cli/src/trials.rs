//! Seeded Monte Carlo runs of the decoders.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use leecode::nega::{lee_weight, nega_construct, nega_encode, unique_decode, wu_list_decode, NegaCode};
use leecode::rs::{list_decode, ListDecodeConfig, RSCode};
use leecode::{Elem, Error, GaloisRing, Poly, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// [n, k] Reed-Solomon over GR(p^r, m).
    Rs { p: u32, r: u32, m: usize, n: usize, k: usize },
    /// Negacyclic Z4 code of length n with t roots.
    Nega { n: usize, t: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorModel {
    /// Exactly `radius` positions hit by nonzero values.
    Hamming,
    /// Lee weight exactly `radius`, entries 1, 2 or 3.
    Lee,
    /// Lee weight uniform in 0..=radius, entries 1, 2 or 3.
    LeeUpTo,
    /// Lee weight exactly `radius`, entries ±1 only.
    NoDouble,
    /// Lee weight exactly `radius` with at least one entry 2.
    WithDouble,
}

impl std::str::FromStr for ErrorModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "hamming" => ErrorModel::Hamming,
            "lee" => ErrorModel::Lee,
            "lee-upto" => ErrorModel::LeeUpTo,
            "no-double" => ErrorModel::NoDouble,
            "with-double" => ErrorModel::WithDouble,
            _ => return Err(format!("unknown error model {s:?}")),
        })
    }
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub family: Family,
    /// Decoding radius τ; also the error weight for the exact models.
    pub radius: usize,
    pub mult: usize,
    pub trials: usize,
    pub seed: u64,
    pub model: ErrorModel,
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// The decoder returned a list without the transmitted codeword.
    Miss,
    Failure,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Success => "success",
            Outcome::Miss => "miss",
            Outcome::Failure => "failure",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialResult {
    pub index: usize,
    pub outcome: Outcome,
    pub list_size: usize,
    pub micros: u128,
}

#[derive(Clone, Debug, Default)]
pub struct TrialReport {
    pub results: Vec<TrialResult>,
}

impl TrialReport {
    fn count(&self, o: Outcome) -> usize {
        self.results.iter().filter(|r| r.outcome == o).count()
    }

    pub fn successes(&self) -> usize {
        self.count(Outcome::Success)
    }

    pub fn misses(&self) -> usize {
        self.count(Outcome::Miss)
    }

    pub fn failures(&self) -> usize {
        self.count(Outcome::Failure)
    }

    /// `trial,outcome,listsize,micros` lines.
    pub fn machine_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            writeln!(s, "{},{},{},{}", r.index, r.outcome.label(), r.list_size, r.micros).unwrap();
        }
        s
    }

    /// Aligned table followed by aggregate counts. Timing is left out so
    /// the text is reproducible.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{:>6}  {:<8}  {:>5}", "trial", "outcome", "list").unwrap();
        for r in &self.results {
            writeln!(s, "{:>6}  {:<8}  {:>5}", r.index, r.outcome.label(), r.list_size).unwrap();
        }
        let n = self.results.len().max(1) as f64;
        writeln!(
            s,
            "trials={} successes={} misses={} failures={} success_rate={:.3}",
            self.results.len(),
            self.successes(),
            self.misses(),
            self.failures(),
            self.successes() as f64 / n
        )
        .unwrap();
        s
    }
}

enum Prepared {
    Rs(RSCode, ListDecodeConfig),
    Nega(NegaCode),
}

fn prepare(cfg: &TrialConfig) -> Result<Prepared> {
    match cfg.family {
        Family::Rs { p, r, m, n, k } => {
            let ring = GaloisRing::new(p, r, m)?;
            let code = RSCode::new(&ring, n, k)?;
            let dec = ListDecodeConfig::new(&code, cfg.radius, cfg.mult)?;
            if !matches!(cfg.model, ErrorModel::Hamming) {
                return Err(Error::InvalidParams("RS trials use the hamming error model".into()));
            }
            Ok(Prepared::Rs(code, dec))
        }
        Family::Nega { n, t } => {
            let code = nega_construct(n, t)?;
            if cfg.radius < t && !matches!(cfg.model, ErrorModel::LeeUpTo) {
                return Err(Error::InvalidParams(format!("radius {} below t = {t}", cfg.radius)));
            }
            if matches!(cfg.model, ErrorModel::WithDouble) && cfg.radius < 2 {
                return Err(Error::InvalidParams("with-double needs radius >= 2".into()));
            }
            Ok(Prepared::Nega(code))
        }
    }
}

/// Z4 error vector of Lee weight `weight`; `doubles` entries are 2 and
/// the remaining weight is spread over ±1 entries.
pub fn lee_error(n: usize, weight: usize, doubles: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let singles = weight - 2 * doubles;
    let pos = sample(rng, n, doubles + singles).into_vec();
    let mut e = vec![0u8; n];
    for &p in &pos[..doubles] {
        e[p] = 2;
    }
    for &p in &pos[doubles..] {
        e[p] = if rng.gen_bool(0.5) { 1 } else { 3 };
    }
    debug_assert_eq!(lee_weight(&e), weight);
    e
}

fn nega_error(n: usize, radius: usize, model: ErrorModel, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let weight = match model {
        ErrorModel::LeeUpTo => rng.gen_range(0..=radius),
        _ => radius,
    };
    let doubles = match model {
        ErrorModel::NoDouble => 0,
        ErrorModel::WithDouble => rng.gen_range(1..=weight / 2),
        ErrorModel::Hamming => {
            let mut e = vec![0u8; n];
            for p in sample(rng, n, weight.min(n)) {
                e[p] = rng.gen_range(1..4);
            }
            return e;
        }
        _ => rng.gen_range(0..=weight / 2),
    };
    lee_error(n, weight, doubles, rng)
}

fn rs_trial(code: &RSCode, dec: &ListDecodeConfig, cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> (Outcome, usize) {
    let ring = code.ring.as_ref();
    let f = Poly::new(ring, (0..code.k).map(|_| ring.random_elem(rng)).collect());
    let c = code.encode(&f).expect("degree below k");
    let mut y = c.clone();
    for i in sample(rng, code.n, cfg.radius.min(code.n)) {
        let mut d = Elem::ZERO;
        while d == Elem::ZERO {
            d = ring.random_elem(rng);
        }
        y[i] = ring.add(y[i], d);
    }
    match list_decode(code, &y, dec, rng.gen()) {
        Ok(list) if list.iter().any(|x| x.codeword == c) => (Outcome::Success, list.len()),
        Ok(list) => (Outcome::Miss, list.len()),
        Err(_) => (Outcome::Failure, 0),
    }
}

fn nega_trial(code: &NegaCode, cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> (Outcome, usize) {
    let msg: Vec<u8> = (0..code.k).map(|_| rng.gen_range(0..4)).collect();
    let c = nega_encode(code, &msg).expect("message length is k");
    let e = nega_error(code.n, cfg.radius, cfg.model, rng);
    let y: Vec<u8> = c.iter().zip(&e).map(|(&a, &b)| (a + b) % 4).collect();
    if cfg.radius <= code.t {
        return match unique_decode(code, &y) {
            Ok((got, _)) if got == c => (Outcome::Success, 1),
            Ok(_) => (Outcome::Miss, 1),
            Err(_) => (Outcome::Failure, 0),
        };
    }
    match wu_list_decode(code, &y, cfg.radius, cfg.mult, rng.gen()) {
        Ok(list) if list.iter().any(|x| x.codeword == c) => (Outcome::Success, list.len()),
        Ok(list) => (Outcome::Miss, list.len()),
        Err(_) => (Outcome::Failure, 0),
    }
}

/// Runs the trials; trial i draws everything from seed ⊕ i. Results are
/// returned in trial order whatever the thread count.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialReport> {
    let prepared = prepare(cfg)?;
    let threads = match cfg.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        t => t,
    }
    .min(cfg.trials.max(1));
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(cfg.trials));
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cfg.trials {
                    break;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ i as u64);
                let start = Instant::now();
                let (outcome, list_size) = match &prepared {
                    Prepared::Rs(code, dec) => rs_trial(code, dec, cfg, &mut rng),
                    Prepared::Nega(code) => nega_trial(code, cfg, &mut rng),
                };
                let micros = start.elapsed().as_micros();
                results.lock().unwrap().push(TrialResult {
                    index: i,
                    outcome,
                    list_size,
                    micros,
                });
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|r| r.index);
    Ok(TrialReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nega_cfg(radius: usize, trials: usize, model: ErrorModel) -> TrialConfig {
        TrialConfig {
            family: Family::Nega { n: 15, t: 3 },
            radius,
            mult: 1,
            trials,
            seed: 11,
            model,
            threads: 2,
        }
    }

    #[test]
    fn zero_trials() {
        let report = run_trials(&nega_cfg(3, 0, ErrorModel::Lee)).unwrap();
        assert!(report.results.is_empty());
        assert_eq!(report.machine_lines(), "");
    }

    #[test]
    fn unique_radius_always_succeeds() {
        let report = run_trials(&nega_cfg(3, 30, ErrorModel::Lee)).unwrap();
        assert_eq!(report.successes(), 30);
        assert_eq!(report.successes() + report.misses() + report.failures(), 30);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut cfg = nega_cfg(3, 12, ErrorModel::LeeUpTo);
        let a = run_trials(&cfg).unwrap();
        cfg.threads = 1;
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a.summary(), b.summary());
    }

    #[test]
    fn error_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let e = nega_error(63, 19, ErrorModel::NoDouble, &mut rng);
            assert_eq!(lee_weight(&e), 19);
            assert!(!e.contains(&2));
            let e = nega_error(63, 19, ErrorModel::WithDouble, &mut rng);
            assert_eq!(lee_weight(&e), 19);
            assert!(e.contains(&2));
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(run_trials(&nega_cfg(2, 1, ErrorModel::Lee)).is_err());
        let cfg = TrialConfig {
            family: Family::Rs { p: 2, r: 2, m: 2, n: 4, k: 2 },
            radius: 1,
            mult: 1,
            trials: 1,
            seed: 0,
            model: ErrorModel::Lee,
            threads: 1,
        };
        assert!(run_trials(&cfg).is_err());
    }
}
