//! Brute-force reference answers and reproducible random instances.
//!
//! Everything here works on plain letter slices and `(start, end)` pairs by
//! direct scanning; it deliberately shares no code with the index
//! structures it is used to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact answers for one `(text, dictionary, range)` triple.
///
/// Patterns are identified by canonical ids: the index of the first
/// dictionary fragment with the same letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    /// Occurrences `(start, pattern id)` inside the range, sorted.
    pub occurrences: Vec<(usize, usize)>,
    /// Sorted canonical ids of the patterns occurring in the range.
    pub distinct: Vec<usize>,
    pub count: usize,
    pub distinct_count: usize,
}

impl OracleAnswer {
    pub fn exists(&self) -> bool {
        self.count > 0
    }
}

fn frag<'a>(letters: &'a [u64], f: (usize, usize)) -> &'a [u64] {
    &letters[f.0 - 1..f.1]
}

/// Canonical id per dictionary entry: index of the first entry with equal
/// content.
pub fn canonical_ids(letters: &[u64], dict: &[(usize, usize)]) -> Vec<usize> {
    let mut ids = Vec::with_capacity(dict.len());
    for (k, &f) in dict.iter().enumerate() {
        let id = (0..k)
            .find(|&e| frag(letters, dict[e]) == frag(letters, f))
            .unwrap_or(k);
        ids.push(id);
    }
    ids
}

/// Naive scan answering all query families for the range `[i..j]`
/// (1-based inclusive). Fragments in `dict` must be valid for `letters`.
pub fn oracle_answer(
    letters: &[u64],
    dict: &[(usize, usize)],
    i: usize,
    j: usize,
) -> OracleAnswer {
    let ids = canonical_ids(letters, dict);
    let mut occurrences = Vec::new();
    let mut distinct = Vec::new();
    for (k, &f) in dict.iter().enumerate() {
        if ids[k] != k {
            continue; // duplicate content, counted once
        }
        let pat = frag(letters, f);
        let mut seen = false;
        if i <= j && j <= letters.len() && i >= 1 {
            for s in i..=j.saturating_sub(pat.len() - 1) {
                if letters[s - 1..s - 1 + pat.len()] == *pat {
                    occurrences.push((s, k));
                    seen = true;
                }
            }
        }
        if seen {
            distinct.push(k);
        }
    }
    occurrences.sort_unstable();
    distinct.sort_unstable();
    OracleAnswer {
        count: occurrences.len(),
        distinct_count: distinct.len(),
        occurrences,
        distinct,
    }
}

/// Number of occurrences of the fragment `pat` inside the fragment `range`
/// of the same text (internal pattern matching, by scanning).
pub fn ipm_count_oracle(letters: &[u64], pat: (usize, usize), range: (usize, usize)) -> usize {
    let p = frag(letters, pat);
    let (i, j) = range;
    if j + 1 - i < p.len() {
        return 0;
    }
    (i..=j + 1 - p.len())
        .filter(|&s| letters[s - 1..s - 1 + p.len()] == *p)
        .count()
}

/// Reproducible random `(text, dictionary)` instance. The dictionary mixes
/// short, long, nested, and square-shaped fragments so periodic code paths
/// get exercised even on larger alphabets.
pub fn random_instance(
    seed: u64,
    n: usize,
    alphabet: u64,
    d: usize,
) -> (Vec<u64>, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=alphabet)).collect();
    let mut dict: Vec<(usize, usize)> = Vec::with_capacity(d);
    for _ in 0..d {
        let f = match rng.gen_range(0..4u8) {
            0 => {
                let len = rng.gen_range(1..=3.min(n));
                let s = rng.gen_range(1..=n + 1 - len);
                (s, s + len - 1)
            }
            1 => {
                let len = rng.gen_range(1..=n);
                let s = rng.gen_range(1..=n + 1 - len);
                (s, s + len - 1)
            }
            2 if !dict.is_empty() => {
                // Nested: sub-fragment of an earlier pattern.
                let (a, b) = dict[rng.gen_range(0..dict.len())];
                let s = rng.gen_range(a..=b);
                let e = rng.gen_range(s..=b);
                (s, e)
            }
            _ => square_fragment(&letters, &mut rng),
        };
        dict.push(f);
    }
    (letters, dict)
}

/// Tries to find a fragment of the form XX (a square); falls back to a
/// random short fragment.
fn square_fragment(letters: &[u64], rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = letters.len();
    for _ in 0..20 {
        let p = rng.gen_range(1..=4.min(n));
        if 2 * p > n {
            continue;
        }
        let s = rng.gen_range(1..=n + 1 - 2 * p);
        if letters[s - 1..s - 1 + p] == letters[s - 1 + p..s - 1 + 2 * p] {
            let reps = rng.gen_range(2..=4);
            let e = (s + reps * p - 1).min(n);
            let e = if (s..=e).all(|k| k < s + p || letters[k - 1] == letters[k - 1 - p]) {
                e
            } else {
                s + 2 * p - 1
            };
            return (s, e);
        }
    }
    let len = rng.gen_range(1..=2.min(n));
    let s = rng.gen_range(1..=n + 1 - len);
    (s, s + len - 1)
}
