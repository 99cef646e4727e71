//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (visible with `--nocapture`) and then asserts.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use leecode::nega::{nega_construct, wu_support};
use leecode::rs::{build_support, condition_count, list_decode, ListDecodeConfig, RSCode};
use leecode::{Elem, GaloisRing, Poly};
use leecode_cli::oracle::{oracle_lee_min_distance, oracle_list_decode_rs};
use leecode_cli::selftest::{run_all, SuiteSizes};
use leecode_cli::trials::{run_trials, ErrorModel, Family, TrialConfig, TrialReport};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Misses and failures tolerated in the worked-example trials.
const MAX_MISSES: usize = 0;
/// Property suites must finish within this budget.
const SUITE_BUDGET: Duration = Duration::from_secs(300);
/// Largest multiplicity tried in the oracle comparison.
const MAX_ORACLE_MULT: usize = 3;
const ORACLE_WORDS: usize = 200;

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {n} ({name}): {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn all_found(r: &TrialReport) -> bool {
    r.misses() + r.failures() <= MAX_MISSES
}

fn counts(r: &TrialReport) -> String {
    format!(
        "trials={} successes={} misses={} failures={}",
        r.results.len(),
        r.successes(),
        r.misses(),
        r.failures()
    )
}

#[test]
fn criterion_1_small_code_distances() {
    let rows = [(15, 1, 11, 3), (15, 2, 7, 5), (15, 3, 5, 10), (31, 7, 6, 26)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, t, k, d) in rows {
        let code = nega_construct(n, t).unwrap();
        let got = oracle_lee_min_distance(&code).unwrap();
        ok &= code.k == k && got == d;
        detail.push(format!("({n},{t}): k={} d_lee={got}", code.k));
    }
    report(1, "small code distances", ok, &detail.join(", "));
}

fn rs_config(radius: usize, mult: usize, trials: usize, seed: u64) -> TrialConfig {
    TrialConfig {
        family: Family::Rs {
            p: 2,
            r: 2,
            m: 6,
            n: 64,
            k: 6,
        },
        radius,
        mult,
        trials,
        seed,
        model: ErrorModel::Hamming,
        threads: 0,
    }
}

#[test]
fn criterion_2_rs_radius_41() {
    let support = build_support(64, 6, 41, 1).unwrap().len();
    let rep = run_trials(&rs_config(41, 1, 20, 0x4101)).unwrap();
    let ok = support == 65 && rep.results.len() == 20 && all_found(&rep);
    report(2, "RS radius 41", ok, &format!("|S|={support} {}", counts(&rep)));
}

#[test]
fn criterion_3_rs_radius_43() {
    let support = build_support(64, 6, 43, 2).unwrap().len();
    let rep = run_trials(&rs_config(43, 2, 10, 0x4302)).unwrap();
    let ok = support == 198 && support > 3 * 64 && rep.results.len() == 10 && all_found(&rep);
    report(3, "RS radius 43", ok, &format!("|S|={support} {}", counts(&rep)));
}

fn nega_config(radius: usize, mult: usize, trials: usize, seed: u64, model: ErrorModel) -> TrialConfig {
    TrialConfig {
        family: Family::Nega { n: 63, t: 16 },
        radius,
        mult,
        trials,
        seed,
        model,
        threads: 0,
    }
}

#[test]
fn criterion_4_nega_radius_19() {
    let support = wu_support(19, 16, 2).len();
    let needed = condition_count(2 * 63, 2);
    let plain = run_trials(&nega_config(19, 2, 10, 0x1902, ErrorModel::NoDouble)).unwrap();
    let doubles = run_trials(&nega_config(19, 2, 5, 0x1922, ErrorModel::WithDouble)).unwrap();
    let ok = support == 400 && needed == 378 && all_found(&plain) && all_found(&doubles);
    report(
        4,
        "negacyclic radius 19",
        ok,
        &format!("|S|={support} > {needed}; no-double {}; with-double {}", counts(&plain), counts(&doubles)),
    );
}

#[test]
fn criterion_5_unique_decoding() {
    let rep = run_trials(&nega_config(16, 1, 200, 0x1600, ErrorModel::LeeUpTo)).unwrap();
    let ok = rep.successes() == 200;
    report(5, "unique decoding", ok, &counts(&rep));
}

fn random_word(ring: &GaloisRing, code: &RSCode, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    if rng.gen_bool(0.5) {
        return (0..code.n).map(|_| ring.random_elem(rng)).collect();
    }
    // a codeword with a few random symbols replaced
    let f = Poly::new(ring, (0..code.k).map(|_| ring.random_elem(rng)).collect());
    let mut y = code.encode(&f).unwrap();
    let hits = rng.gen_range(0..=code.n - code.k);
    for i in sample(rng, code.n, hits) {
        y[i] = ring.random_elem(rng);
    }
    y
}

/// Compares list_decode with the oracle for every (t, e) whose support set
/// is large enough. Returns (comparisons, mismatches, first mismatch).
fn oracle_equivalence(ring: &std::sync::Arc<GaloisRing>, n: usize, k: usize, seed: u64) -> (usize, usize, String) {
    let code = RSCode::new(ring, n, k).unwrap();
    let configs: Vec<ListDecodeConfig> = (0..n)
        .flat_map(|t| (1..=MAX_ORACLE_MULT).map(move |e| (t, e)))
        .filter_map(|(t, e)| ListDecodeConfig::new(&code, t, e).ok())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut compared, mut bad, mut first) = (0, 0, String::new());
    for w in 0..ORACLE_WORDS {
        let y = random_word(ring, &code, &mut rng);
        for cfg in &configs {
            let truth: BTreeSet<Vec<Elem>> = oracle_list_decode_rs(&code, &y, cfg.t).unwrap().into_iter().collect();
            let got: BTreeSet<Vec<Elem>> = match list_decode(&code, &y, cfg, w as u64) {
                Ok(list) => list.into_iter().map(|c| c.codeword).collect(),
                Err(e) => {
                    if first.is_empty() {
                        first = format!("[{n},{k}] t={} e={}: {e}", cfg.t, cfg.e);
                    }
                    bad += 1;
                    compared += 1;
                    continue;
                }
            };
            compared += 1;
            if got != truth {
                bad += 1;
                if first.is_empty() {
                    first = format!(
                        "[{n},{k}] t={} e={}: decoder {} vs oracle {}",
                        cfg.t,
                        cfg.e,
                        got.len(),
                        truth.len()
                    );
                }
            }
        }
    }
    (compared, bad, first)
}

#[test]
fn criterion_6_oracle_equivalence() {
    // GR(4,2) has only 4 Teichmüller points, so the [5,2] code is taken
    // over GR(4,3)
    let small = GaloisRing::new(2, 2, 2).unwrap();
    let larger = GaloisRing::new(2, 2, 3).unwrap();
    let (c1, b1, f1) = oracle_equivalence(&small, 4, 2, 0x42);
    let (c2, b2, f2) = oracle_equivalence(&larger, 5, 2, 0x52);
    let ok = b1 + b2 == 0 && c1 > 0 && c2 > 0;
    let mut detail = format!("[4,2]/GR(4,2): {c1} comparisons, {b1} mismatches; [5,2]/GR(4,3): {c2} comparisons, {b2} mismatches");
    for f in [f1, f2] {
        if !f.is_empty() {
            detail.push_str("; first: ");
            detail.push_str(&f);
        }
    }
    report(6, "oracle equivalence", ok, &detail);
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let results = run_all(SuiteSizes::FULL, 7);
    let elapsed = start.elapsed();
    for r in &results {
        println!("  {}", r.line());
    }
    let ok = results.iter().all(|r| r.passed()) && elapsed <= SUITE_BUDGET;
    report(7, "property suites", ok, &format!("{} suites in {:.1}s", results.len(), elapsed.as_secs_f64()));
}
