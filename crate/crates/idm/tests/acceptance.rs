//! Acceptance suite. Each test below is one acceptance criterion and
//! emits exactly one pass/fail line through the harness.

use std::collections::BTreeSet;
use std::time::Instant;

use idm::dynamic_dictionary::build_ipm;
use idm::oracle::{ipm_count_oracle, oracle_answer, random_instance};
use idm::recompression::build_rslp;
use idm::{EngineOptions, Fragment, QueryEngine, Text, TextIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn frags(dict: &[(usize, usize)]) -> Vec<Fragment> {
    dict.iter().map(|&(a, b)| Fragment::new(a, b)).collect()
}

fn static_engine(letters: &[u64], dict: &[(usize, usize)], warmup: bool) -> QueryEngine {
    let text = Text::from_ints(letters).unwrap();
    let opts = EngineOptions { with_warmup: warmup, ..Default::default() };
    QueryEngine::new(&text, &frags(dict), &opts).unwrap()
}

fn pattern_string(e: &QueryEngine, p: Fragment) -> String {
    e.fragment_letters(p).iter().map(|&c| c as u8 as char).collect()
}

#[test]
fn criterion_1_golden_example_exact() {
    let letters: Vec<u64> = "adaaaabaabbaac".bytes().map(u64::from).collect();
    let dict = [(3, 4), (3, 6), (9, 12), (14, 14)];
    let e = static_engine(&letters, &dict, true);

    assert!(e.exists(2, 12).unwrap());
    assert!(!e.exists(1, 3).unwrap());
    let report: Vec<(String, usize)> = e
        .report(2, 12)
        .unwrap()
        .into_iter()
        .map(|(s, p)| (pattern_string(&e, p), s))
        .collect();
    assert_eq!(
        report,
        [("aa", 3), ("aaaa", 3), ("aa", 4), ("aa", 5), ("aa", 8), ("abba", 9)]
            .map(|(p, s)| (p.to_owned(), s))
    );
    assert_eq!(e.count(2, 12).unwrap(), 6);
    assert_eq!(e.count_warmup(2, 12).unwrap(), 6);
    let distinct: Vec<String> = e
        .report_distinct(2, 12)
        .unwrap()
        .into_iter()
        .map(|p| pattern_string(&e, p))
        .collect();
    assert_eq!(distinct, ["aa", "aaaa", "abba"]);
}

#[test]
fn criterion_2_dynamic_matrix_vector_gadget() {
    let letters = [1u64, 0, 3, 0, 0, 0, 3, 4, 0, 2, 0, 4];
    let text = Text::from_ints(&letters).unwrap();
    let opts = EngineOptions { dynamic: true, epoch: Some(4), ..Default::default() };
    let mut e = QueryEngine::new(&text, &[], &opts).unwrap();
    e.insert(Fragment::new(1, 1)).unwrap();
    e.insert(Fragment::new(10, 10)).unwrap();
    let answers: Vec<bool> = [(1, 4), (5, 8), (9, 12)]
        .iter()
        .map(|&(i, j)| e.exists(i, j).unwrap())
        .collect();
    assert_eq!(answers, [true, false, true]);
}

#[test]
fn criterion_3_oracle_equivalence_on_random_instances() {
    let alphabets = [1u64, 2, 4, 26];
    let deadline = Instant::now();
    let mut instances = 0usize;
    for seed in 0..1000u64 {
        // Mostly small texts (all ranges are checked exhaustively), with a
        // sprinkling of larger ones up to the n <= 300 envelope.
        let n = if seed % 50 == 0 { 100 + (seed as usize % 201) } else { 5 + (seed as usize * 7) % 56 };
        let alphabet = alphabets[(seed % 4) as usize];
        let d = 1 + (seed as usize * 13) % 50;
        let (letters, dict) = random_instance(seed, n, alphabet, d);
        let e = static_engine(&letters, &dict, true);
        let index = TextIndex::new(&Text::from_ints(&letters).unwrap()).unwrap();
        let ipm = build_ipm(&index);

        for i in 1..=n {
            for j in i..=n {
                let want = oracle_answer(&letters, &dict, i, j);
                assert_eq!(e.exists(i, j).unwrap(), want.exists(), "seed {seed} exists {i} {j}");
                assert_eq!(e.count(i, j).unwrap(), want.count as u64, "seed {seed} count {i} {j}");
                assert_eq!(
                    e.count_warmup(i, j).unwrap(),
                    want.count as u64,
                    "seed {seed} warmup {i} {j}"
                );

                let got: BTreeSet<(usize, Vec<u64>)> = e
                    .report(i, j)
                    .unwrap()
                    .into_iter()
                    .map(|(s, p)| (s, e.fragment_letters(p)))
                    .collect();
                let want_set: BTreeSet<(usize, Vec<u64>)> = want
                    .occurrences
                    .iter()
                    .map(|&(s, id)| {
                        let (a, b) = dict[id];
                        (s, letters[a - 1..b].to_vec())
                    })
                    .collect();
                assert_eq!(got, want_set, "seed {seed} report {i} {j}");

                let got: BTreeSet<Vec<u64>> = e
                    .report_distinct(i, j)
                    .unwrap()
                    .into_iter()
                    .map(|p| e.fragment_letters(p))
                    .collect();
                let want_set: BTreeSet<Vec<u64>> = want
                    .distinct
                    .iter()
                    .map(|&id| {
                        let (a, b) = dict[id];
                        letters[a - 1..b].to_vec()
                    })
                    .collect();
                assert_eq!(got, want_set, "seed {seed} distinct {i} {j}");

                // Internal pattern matching: rotate through the dictionary
                // so every pattern gets covered across the range sweep.
                let pat = dict[(i * 31 + j) % dict.len()];
                assert_eq!(
                    ipm.count(&index, Fragment::new(pat.0, pat.1), i, j).unwrap(),
                    ipm_count_oracle(&letters, pat, (i, j)) as u64,
                    "seed {seed} ipm {pat:?} {i} {j}"
                );
            }
        }
        instances += 1;
    }
    assert_eq!(instances, 1000);
    assert!(
        deadline.elapsed().as_secs() < 600,
        "suite exceeded the ten-minute budget: {:?}",
        deadline.elapsed()
    );
}

#[test]
fn criterion_4_dynamic_answers_match_static_rebuilds() {
    for script in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD11A + script);
        let n = rng.gen_range(20..=150);
        let alphabet = [1u64, 2, 4, 26][rng.gen_range(0..4)];
        let letters: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=alphabet)).collect();
        let text = Text::from_ints(&letters).unwrap();
        let m = match script % 4 {
            0 => 1,
            1 => 3,
            2 => (n as f64).sqrt().ceil() as usize,
            _ => n,
        };
        let opts = EngineOptions { dynamic: true, epoch: Some(m), ..Default::default() };
        let mut e = QueryEngine::new(&text, &[], &opts).unwrap();
        let mut dict: Vec<(usize, usize)> = Vec::new();
        let mut static_e: Option<QueryEngine> = None;

        for _ in 0..500 {
            let roll = rng.gen_range(0..10u8);
            if roll < 3 && !dict.is_empty() {
                let k = rng.gen_range(0..dict.len());
                let (a, b) = dict.swap_remove(k);
                e.delete(Fragment::new(a, b)).unwrap();
                static_e = None;
            } else if roll < 6 {
                // Insert a fragment whose content is not already present.
                for _ in 0..20 {
                    let a = rng.gen_range(1..=n);
                    let b = rng.gen_range(a..=n.min(a + 12));
                    if e.insert(Fragment::new(a, b)).is_ok() {
                        dict.push((a, b));
                        static_e = None;
                        break;
                    }
                }
            } else {
                let s = static_e.get_or_insert_with(|| static_engine(&letters, &dict, false));
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(i..=n);
                assert_eq!(e.exists(i, j).unwrap(), s.exists(i, j).unwrap(), "script {script}");
                assert_eq!(e.count(i, j).unwrap(), s.count(i, j).unwrap(), "script {script}");
                assert_eq!(e.report(i, j).unwrap(), s.report(i, j).unwrap(), "script {script}");
                assert_eq!(
                    e.report_distinct(i, j).unwrap(),
                    s.report_distinct(i, j).unwrap(),
                    "script {script}"
                );
            }
        }
    }
}

#[test]
fn criterion_5_distinct_count_approximation_bounds() {
    let mut worst_per_n = Vec::new();
    for (n, queries) in [(100usize, 400), (1000, 400), (10_000, 200), (100_000, 100)] {
        let (letters, dict) = random_instance(0xCDA + n as u64, n, 2, 30);
        let e = static_engine(&letters, &dict, false);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut worst = 1.0f64;
        for _ in 0..queries {
            let i = rng.gen_range(1..=n);
            let j = rng.gen_range(i..=n);
            let approx = e.count_distinct_approx(i, j).unwrap();
            let truth = e.report_distinct(i, j).unwrap().len() as u64;
            let cap = truth * (approx.contained_nodes + approx.anchor_queries);
            assert!(
                truth <= approx.value && approx.value <= cap,
                "n {n} range ({i},{j}): true {truth}, approx {approx:?}"
            );
            if truth > 0 {
                worst = worst.max(approx.value as f64 / truth as f64);
            }
        }
        worst_per_n.push((n, worst));
    }
    // Informational: the worst ratio should grow like O(log n), not be a
    // hard failure if a constant drifts.
    println!("max approx/true ratios: {worst_per_n:?}");
    for (n, worst) in worst_per_n {
        let c = worst / (n as f64).log2();
        println!("n={n} worst={worst:.2} fitted c={c:.3}");
    }
}

#[test]
fn criterion_6_parse_and_runs_invariants() {
    let families: Vec<(&str, Box<dyn Fn(usize) -> Vec<u64>>)> = vec![
        ("random", Box::new(|n| {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            (0..n).map(|_| rng.gen_range(1..=4u64)).collect()
        })),
        ("unary", Box::new(|n| vec![1; n])),
        ("fibonacci", Box::new(|n| {
            let (mut a, mut b) = (vec![1u64], vec![1u64, 2]);
            while b.len() < n {
                let c = [b.clone(), a].concat();
                a = b;
                b = c;
            }
            b.truncate(n);
            b
        })),
        ("thue_morse", Box::new(|n| {
            (0..n).map(|i| 1 + (i.count_ones() as u64 & 1)).collect()
        })),
    ];
    // Documented constants: depth <= 6 ceil(log2 n), popped runs <= 12 ceil(log2 n).
    let (alpha, beta) = (6usize, 12usize);
    for (name, gen) in &families {
        for n in [100usize, 1000, 10_000, 100_000] {
            let letters = gen(n);
            let text = Text::from_ints(&letters).unwrap();
            let index = TextIndex::new(&text).unwrap();
            assert!(index.runs().len() < n, "{name} n={n}: runs {}", index.runs().len());
            let rslp = build_rslp(&text);
            let log = (n as f64).log2().ceil() as usize;
            assert!(rslp.depth() <= alpha * log, "{name} n={n}: depth {}", rslp.depth());
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 ^ 0xF00D);
            for _ in 0..200 {
                let a = rng.gen_range(1..=n);
                let b = rng.gen_range(a..=n);
                let popped = rslp.popped_sequence(Fragment::new(a, b));
                assert!(
                    popped.runs.len() <= beta * log,
                    "{name} n={n} ({a},{b}): {} popped runs",
                    popped.runs.len()
                );
            }
        }
    }

    // Equal fragments have identical popped sequences: sample 1000 pairs
    // on a repetitive text where long repeats are plentiful.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 4000usize;
    let letters: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=2u64)).collect();
    let text = Text::from_ints(&letters).unwrap();
    let rslp = build_rslp(&text);
    let mut pairs = 0;
    while pairs < 1000 {
        let len = rng.gen_range(1..=24);
        let a = rng.gen_range(1..=n - len + 1);
        let b = rng.gen_range(1..=n - len + 1);
        if a == b || letters[a - 1..a - 1 + len] != letters[b - 1..b - 1 + len] {
            continue;
        }
        let pa = rslp.popped_sequence(Fragment::new(a, a + len - 1));
        let pb = rslp.popped_sequence(Fragment::new(b, b + len - 1));
        assert_eq!(pa, pb, "popped sequences differ for equal fragments at {a} and {b}");
        pairs += 1;
    }
}

#[test]
fn criterion_7_performance_smoke() {
    let (n, d) = (100_000usize, 10_000usize);
    let (letters, dict) = random_instance(0x9E4F, n, 26, d);
    let t0 = Instant::now();
    let e = static_engine(&letters, &dict, false);
    let build = t0.elapsed();
    assert!(build.as_secs() <= 60, "build took {build:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ranges: Vec<(usize, usize)> = (0..10_000)
        .map(|_| {
            let i = rng.gen_range(1..=n);
            (i, rng.gen_range(i..=n))
        })
        .collect();

    let t0 = Instant::now();
    for &(i, j) in &ranges {
        std::hint::black_box(e.exists(i, j).unwrap());
    }
    let exists_us = t0.elapsed().as_secs_f64() * 1e6 / ranges.len() as f64;
    assert!(exists_us <= 10.0, "mean exists latency {exists_us:.2} us");

    let count_ranges = &ranges[..1000];
    let t0 = Instant::now();
    for &(i, j) in count_ranges {
        std::hint::black_box(e.count(i, j).unwrap());
    }
    let count_ms = t0.elapsed().as_secs_f64() * 1e3 / count_ranges.len() as f64;
    assert!(count_ms <= 1.0, "mean count latency {count_ms:.3} ms");

    // Report latency must stay at "10 us plus time linear in the output".
    let mut out_total = 0usize;
    let report_ranges: Vec<(usize, usize)> = (0..2000)
        .map(|_| {
            let i = rng.gen_range(1..=n - 50);
            (i, i + rng.gen_range(0..50))
        })
        .collect();
    let t0 = Instant::now();
    for &(i, j) in &report_ranges {
        out_total += std::hint::black_box(e.report(i, j).unwrap()).len()
            + std::hint::black_box(e.report_distinct(i, j).unwrap()).len();
    }
    let report_us = t0.elapsed().as_secs_f64() * 1e6 / report_ranges.len() as f64;
    let allowance = 10.0 + 2.0 * out_total as f64 / report_ranges.len() as f64;
    assert!(report_us <= allowance, "mean report latency {report_us:.2} us (allowance {allowance:.2})");

    // Polylogarithmic scaling: doubling n must not blow up count latency.
    let (letters2, dict2) = random_instance(0x9E50, 2 * n, 26, d);
    let e2 = static_engine(&letters2, &dict2, false);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ranges2: Vec<(usize, usize)> = (0..1000)
        .map(|_| {
            let i = rng.gen_range(1..=2 * n);
            (i, rng.gen_range(i..=2 * n))
        })
        .collect();
    let t0 = Instant::now();
    for &(i, j) in &ranges2 {
        std::hint::black_box(e2.count(i, j).unwrap());
    }
    let count2_ms = t0.elapsed().as_secs_f64() * 1e3 / ranges2.len() as f64;
    let ratio = count2_ms / count_ms;
    println!("count latency: n={n} {count_ms:.4} ms, n={} {count2_ms:.4} ms, ratio {ratio:.2}", 2 * n);
    assert!(ratio <= 5.0, "doubling n multiplied count latency by {ratio:.2}");
}
