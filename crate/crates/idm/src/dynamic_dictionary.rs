//! Dynamic dictionary mode: single-pattern internal matching over a
//! position/rank grid, pattern collections keyed by leftmost occurrence
//! with a minimum-length sub-dictionary, and epoch rebuilds of the static
//! indexes every `m` updates with per-pattern adjustment in between.

use std::collections::{BTreeMap, BTreeSet};

use crate::count_queries::{build_bai, build_count_index, CountIndex};
use crate::error::{Error, Result};
use crate::geometry2d::PointSet2D;
use crate::internal_dictionary::{build_dictionary, InternalDictionary};
use crate::recompression::Rslp;
use crate::report_distinct::{build_layers, ReportDistinctIndex};
use crate::text_core::{Fragment, TextIndex};

/// Content-canonical identity of a pattern: (leftmost occurrence start,
/// length). Two fragments hold the same string iff their keys are equal.
pub type PatternKey = (usize, usize);

/// Single-pattern internal matching: exists/report/count of one fragment's
/// occurrences inside a window, via a grid of (start, suffix rank) points.
#[derive(Debug)]
pub struct IpmIndex {
    grid: PointSet2D,
}

pub fn build_ipm(index: &TextIndex) -> IpmIndex {
    let points = (1..=index.len())
        .map(|a| (a as u64, index.fwd.isa[a - 1] as u64, 1))
        .collect();
    IpmIndex { grid: PointSet2D::new(points) }
}

impl IpmIndex {
    /// Exact number of occurrences of the fragment `pat` inside T[i..j].
    pub fn count(&self, index: &TextIndex, pat: Fragment, i: usize, j: usize) -> Result<u64> {
        index.check_fragment(pat)?;
        index.check_fragment(Fragment::new(i, j))?;
        let m = pat.len();
        if j + 1 - i < m {
            return Ok(0);
        }
        // Starts in [i .. j-m+1] whose suffix rank lies in the lex
        // interval of the pattern's locus.
        let node = index.fwd.tree.node(index.locus(pat).node);
        let (x1, x2) = (i as u64, (j + 1 - m) as u64);
        let (y1, y2) = (node.lex_lo as u64, node.lex_hi as u64);
        let dom = |x: u64, y: u64| self.grid.dominance_count(x, y);
        let mut v = dom(x2, y2) - dom(x1 - 1, y2);
        if y1 > 0 {
            v -= dom(x2, y1 - 1) - dom(x1 - 1, y1 - 1);
        }
        debug_assert!(v >= 0);
        Ok(v as u64)
    }

    pub fn exists(&self, index: &TextIndex, pat: Fragment, i: usize, j: usize) -> Result<bool> {
        Ok(self.count(index, pat, i, j)? > 0)
    }

    /// Start positions of all occurrences of `pat` inside T[i..j], in no
    /// particular order, found by argmin splitting over the suffix array
    /// interval of the pattern's locus.
    pub fn report(&self, index: &TextIndex, pat: Fragment, i: usize, j: usize) -> Result<Vec<usize>> {
        index.check_fragment(pat)?;
        index.check_fragment(Fragment::new(i, j))?;
        let m = pat.len();
        let mut out = Vec::new();
        if j + 1 - i < m {
            return Ok(out);
        }
        let node = index.fwd.tree.node(index.locus(pat).node);
        let (lo0, hi0) = (node.lex_lo as usize, node.lex_hi as usize);
        let hi_bound = (j - m) as u32;
        let lo_bound = (i - 1) as u32;
        let mut stack = vec![(lo0, hi0)];
        while let Some((lo, hi)) = stack.pop() {
            if lo > hi {
                continue;
            }
            let k = index.fwd.sa_min_argmin(lo, hi);
            let v = index.fwd.sa[k];
            if v > hi_bound {
                continue;
            }
            if v >= lo_bound {
                out.push(v as usize + 1);
            }
            if k > lo {
                stack.push((lo, k - 1));
            }
            if k < hi {
                stack.push((k + 1, hi));
            }
        }
        Ok(out)
    }
}

/// Smallest position where the string held by `pat` occurs.
pub fn leftmost_occurrence(index: &TextIndex, pat: Fragment) -> Result<usize> {
    index.check_fragment(pat)?;
    Ok(index.fwd.leftmost_occurrence(index.locus(pat)) + 1)
}

/// The static indexes of one epoch: built over the dictionary as of the
/// last rebuild (`D^r`), plus the distinct-reporting structure over its
/// minimum sub-dictionary (`D'` of that epoch).
struct EpochBase {
    count: CountIndex,
    dprime_dict: InternalDictionary,
    dprime_rd: ReportDistinctIndex,
}

/// A dictionary under insertions and deletions. Queries combine the epoch
/// base's static answers with per-pattern internal-matching adjustments
/// for the up-to-`m` patterns added or removed since the last rebuild.
pub struct DynamicDictionary {
    m: usize,
    updates: usize,
    rebuilds: u64,
    ipm: IpmIndex,
    /// Lengths of the current patterns, grouped by leftmost occurrence.
    collections: BTreeMap<usize, BTreeSet<usize>>,
    current: BTreeSet<PatternKey>,
    /// Current dictionary vs the epoch base dictionary.
    added: BTreeSet<PatternKey>,
    removed: BTreeSet<PatternKey>,
    /// Current D' vs the epoch base D'.
    dprime_added: BTreeSet<PatternKey>,
    base_dprime: BTreeSet<PatternKey>,
    base: EpochBase,
}

fn key_fragment(key: PatternKey) -> Fragment {
    Fragment::new(key.0, key.0 + key.1 - 1)
}

fn build_base(index: &TextIndex, rslp: &Rslp, keys: &BTreeSet<PatternKey>) -> Result<EpochBase> {
    let frags: Vec<Fragment> = keys.iter().map(|&k| key_fragment(k)).collect();
    let dict = build_dictionary(index, &frags)?;
    let bai = build_bai(index, rslp, &dict);
    let count = build_count_index(index, rslp, &dict, bai);
    let mut dprime: Vec<Fragment> = Vec::new();
    let mut last_p = usize::MAX;
    for &(p, len) in keys.iter() {
        // Keys are sorted, so the first length per position is the minimum.
        if p != last_p {
            dprime.push(key_fragment((p, len)));
            last_p = p;
        }
    }
    let dprime_dict = build_dictionary(index, &dprime)?;
    let dprime_rd = build_layers(index, &dprime_dict);
    Ok(EpochBase { count, dprime_dict, dprime_rd })
}

impl DynamicDictionary {
    /// Builds the dynamic state over an initial dictionary (duplicates
    /// collapse) with a rebuild every `m` updates.
    pub fn new(
        index: &TextIndex,
        rslp: &Rslp,
        initial: &[Fragment],
        m: usize,
    ) -> Result<Self> {
        assert!(m >= 1, "epoch length must be positive");
        let ipm = build_ipm(index);
        let mut current = BTreeSet::new();
        let mut collections: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &f in initial {
            index.check_fragment(f)?;
            let key = (leftmost_occurrence(index, f)?, f.len());
            if current.insert(key) {
                collections.entry(key.0).or_default().insert(key.1);
            }
        }
        let base = build_base(index, rslp, &current)?;
        let base_dprime = collections
            .iter()
            .map(|(&p, lens)| (p, *lens.first().unwrap()))
            .collect();
        Ok(Self {
            m,
            updates: 0,
            rebuilds: 0,
            ipm,
            collections,
            current,
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
            dprime_added: BTreeSet::new(),
            base_dprime,
            base,
        })
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    /// Number of epoch rebuilds performed so far.
    pub fn rebuild_count(&self) -> u64 {
        self.rebuilds
    }

    pub fn ipm(&self) -> &IpmIndex {
        &self.ipm
    }

    /// Canonical key of a fragment, for content-based membership tests.
    pub fn key_of(&self, index: &TextIndex, pat: Fragment) -> Result<PatternKey> {
        Ok((leftmost_occurrence(index, pat)?, pat.len()))
    }

    pub fn insert(&mut self, index: &TextIndex, rslp: &Rslp, pat: Fragment) -> Result<()> {
        if pat.is_empty() {
            return Err(Error::EmptyFragment { start: pat.start, end: pat.end });
        }
        index.check_fragment(pat)?;
        let key = self.key_of(index, pat)?;
        if !self.current.insert(key) {
            return Err(Error::PatternAlreadyPresent { start: pat.start, end: pat.end });
        }
        if !self.removed.remove(&key) {
            self.added.insert(key);
        }
        let lens = self.collections.entry(key.0).or_default();
        let old_min = lens.first().copied();
        lens.insert(key.1);
        let new_min = *lens.first().unwrap();
        self.dprime_change(key.0, old_min, Some(new_min));
        self.tick(index, rslp)
    }

    pub fn delete(&mut self, index: &TextIndex, rslp: &Rslp, pat: Fragment) -> Result<()> {
        if pat.is_empty() {
            return Err(Error::EmptyFragment { start: pat.start, end: pat.end });
        }
        index.check_fragment(pat)?;
        let key = self.key_of(index, pat)?;
        if !self.current.remove(&key) {
            return Err(Error::PatternNotFound { start: pat.start, end: pat.end });
        }
        if !self.added.remove(&key) {
            self.removed.insert(key);
        }
        let lens = self.collections.get_mut(&key.0).unwrap();
        let old_min = lens.first().copied();
        lens.remove(&key.1);
        let new_min = lens.first().copied();
        if lens.is_empty() {
            self.collections.remove(&key.0);
        }
        self.dprime_change(key.0, old_min, new_min);
        self.tick(index, rslp)
    }

    fn dprime_change(&mut self, p: usize, old_min: Option<usize>, new_min: Option<usize>) {
        if old_min == new_min {
            return;
        }
        // Base D' members that stop being minima need no bookkeeping: the
        // query-time filter against `collections` drops them.
        if let Some(o) = old_min {
            self.dprime_added.remove(&(p, o));
        }
        if let Some(nw) = new_min {
            let key = (p, nw);
            if !self.base_dprime.contains(&key) {
                self.dprime_added.insert(key);
            }
        }
    }

    fn tick(&mut self, index: &TextIndex, rslp: &Rslp) -> Result<()> {
        self.updates += 1;
        if self.updates >= self.m {
            self.rebuild(index, rslp)?;
        }
        Ok(())
    }

    /// Rebuilds the epoch base over the current dictionary and clears the
    /// deltas.
    pub fn rebuild(&mut self, index: &TextIndex, rslp: &Rslp) -> Result<()> {
        self.base = build_base(index, rslp, &self.current)?;
        self.base_dprime = self
            .collections
            .iter()
            .map(|(&p, lens)| (p, *lens.first().unwrap()))
            .collect();
        self.added.clear();
        self.removed.clear();
        self.dprime_added.clear();
        self.updates = 0;
        self.rebuilds += 1;
        Ok(())
    }

    /// Exact occurrence count inside T[i..j]: static epoch count, minus
    /// removed patterns, plus added ones, each adjusted individually.
    pub fn count(&self, index: &TextIndex, rslp: &Rslp, i: usize, j: usize) -> Result<u64> {
        let mut v = self.base.count.count(index, rslp, i, j)? as i64;
        for &key in &self.removed {
            v -= self.ipm.count(index, key_fragment(key), i, j)? as i64;
        }
        for &key in &self.added {
            v += self.ipm.count(index, key_fragment(key), i, j)? as i64;
        }
        debug_assert!(v >= 0);
        Ok(v as u64)
    }

    pub fn exists(&self, index: &TextIndex, rslp: &Rslp, i: usize, j: usize) -> Result<bool> {
        Ok(self.count(index, rslp, i, j)? > 0)
    }

    /// Distinct patterns (as canonical keys) occurring inside T[i..j]:
    /// the static distinct report over the epoch's minimum sub-dictionary,
    /// filtered to the current one and extended by the patterns added to
    /// it since, then each reported collection ascended by length while
    /// its members occur.
    pub fn report_distinct(
        &self,
        index: &TextIndex,
        i: usize,
        j: usize,
    ) -> Result<Vec<PatternKey>> {
        index.check_fragment(Fragment::new(i, j))?;
        let in_current_dprime = |key: &PatternKey| {
            self.collections
                .get(&key.0)
                .is_some_and(|lens| lens.first() == Some(&key.1))
        };
        let mut hits: Vec<PatternKey> = Vec::new();
        for id in self.base.dprime_rd.report_distinct(i, j)? {
            let f = self.base.dprime_dict.pattern(id);
            let key = (f.start, f.len());
            if in_current_dprime(&key) {
                hits.push(key);
            }
        }
        for &key in &self.dprime_added {
            debug_assert!(in_current_dprime(&key));
            if self.ipm.exists(index, key_fragment(key), i, j)? {
                hits.push(key);
            }
        }
        let mut out = Vec::new();
        for (p, min_len) in hits {
            out.push((p, min_len));
            for &len in self.collections[&p].iter().skip(1) {
                // Members of a collection are nested prefixes, so the
                // first non-occurring length ends the walk.
                if self.ipm.exists(index, key_fragment((p, len)), i, j)? {
                    out.push((p, len));
                } else {
                    break;
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// All occurrences `(canonical key, start)` inside T[i..j], sorted.
    pub fn report(
        &self,
        index: &TextIndex,
        i: usize,
        j: usize,
    ) -> Result<Vec<(PatternKey, usize)>> {
        let mut out = Vec::new();
        for key in self.report_distinct(index, i, j)? {
            for s in self.ipm.report(index, key_fragment(key), i, j)? {
                out.push((key, s));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Current patterns as canonical keys, sorted.
    pub fn keys(&self) -> Vec<PatternKey> {
        self.current.iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_answer, random_instance};
    use crate::recompression::build_rslp;
    use crate::text_core::Text;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn make(letters: &[u64]) -> (TextIndex, Rslp) {
        let text = Text::from_ints(letters).unwrap();
        let index = TextIndex::new(&text).unwrap();
        let rslp = build_rslp(&text);
        (index, rslp)
    }

    #[test]
    fn ipm_golden_examples() {
        let letters: Vec<u64> = "adaaaabaabbaac".bytes().map(u64::from).collect();
        let (index, _) = make(&letters);
        let ipm = build_ipm(&index);
        assert_eq!(ipm.count(&index, Fragment::new(3, 4), 2, 12).unwrap(), 4);
        assert_eq!(ipm.count(&index, Fragment::new(3, 6), 1, 14).unwrap(), 1);
        assert_eq!(ipm.count(&index, Fragment::new(3, 6), 1, 3).unwrap(), 0);
        let mut starts = ipm.report(&index, Fragment::new(3, 4), 2, 12).unwrap();
        starts.sort_unstable();
        assert_eq!(starts, vec![3, 4, 5, 8]);
        assert!(ipm.exists(&index, Fragment::new(9, 12), 2, 12).unwrap());
        assert!(!ipm.exists(&index, Fragment::new(9, 12), 1, 11).unwrap());
    }

    #[test]
    fn leftmost_occurrence_examples() {
        let letters: Vec<u64> = "adaaaabaabbaac".bytes().map(u64::from).collect();
        let (index, _) = make(&letters);
        assert_eq!(leftmost_occurrence(&index, Fragment::new(4, 5)).unwrap(), 3);
        assert_eq!(leftmost_occurrence(&index, Fragment::new(1, 14)).unwrap(), 1);
        assert_eq!(leftmost_occurrence(&index, Fragment::new(14, 14)).unwrap(), 14);
    }

    #[test]
    fn ipm_matches_naive_on_random_texts() {
        for seed in 0..25 {
            let (letters, _) = random_instance(seed, 28, 2, 0);
            let (index, _) = make(&letters);
            let ipm = build_ipm(&index);
            let n = letters.len();
            for ps in 1..=n {
                for pe in ps..=n.min(ps + 5) {
                    let m = pe + 1 - ps;
                    for i in 1..=n {
                        for j in i..=n {
                            let naive = (i..=(j + 1).saturating_sub(m))
                                .filter(|&s| letters[s - 1..s + m - 1] == letters[ps - 1..pe])
                                .count() as u64;
                            assert_eq!(
                                ipm.count(&index, Fragment::new(ps, pe), i, j).unwrap(),
                                naive
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn omv_reduction_vector() {
        let letters: Vec<u64> = vec![1, 0, 3, 0, 0, 0, 3, 4, 0, 2, 0, 4];
        let (index, rslp) = make(&letters);
        let mut dynd = DynamicDictionary::new(&index, &rslp, &[], 4).unwrap();
        // Single-letter patterns for letters 1 and 2.
        dynd.insert(&index, &rslp, Fragment::new(1, 1)).unwrap();
        dynd.insert(&index, &rslp, Fragment::new(10, 10)).unwrap();
        assert!(dynd.exists(&index, &rslp, 1, 4).unwrap());
        assert!(!dynd.exists(&index, &rslp, 5, 8).unwrap());
        assert!(dynd.exists(&index, &rslp, 9, 12).unwrap());
    }

    #[test]
    fn rebuild_fires_every_m_updates() {
        let letters: Vec<u64> = "abcabcabc".bytes().map(u64::from).collect();
        let (index, rslp) = make(&letters);
        let mut dynd = DynamicDictionary::new(&index, &rslp, &[], 3).unwrap();
        dynd.insert(&index, &rslp, Fragment::new(1, 2)).unwrap();
        dynd.insert(&index, &rslp, Fragment::new(2, 3)).unwrap();
        assert_eq!(dynd.rebuild_count(), 0);
        dynd.insert(&index, &rslp, Fragment::new(3, 4)).unwrap();
        assert_eq!(dynd.rebuild_count(), 1);
    }

    #[test]
    fn duplicate_and_absent_updates_error() {
        let letters: Vec<u64> = "abcabc".bytes().map(u64::from).collect();
        let (index, rslp) = make(&letters);
        let mut dynd = DynamicDictionary::new(&index, &rslp, &[], 100).unwrap();
        dynd.insert(&index, &rslp, Fragment::new(1, 2)).unwrap();
        // Same content at a different position is the same pattern.
        assert!(matches!(
            dynd.insert(&index, &rslp, Fragment::new(4, 5)),
            Err(Error::PatternAlreadyPresent { .. })
        ));
        assert!(matches!(
            dynd.delete(&index, &rslp, Fragment::new(2, 3)),
            Err(Error::PatternNotFound { .. })
        ));
        dynd.delete(&index, &rslp, Fragment::new(4, 5)).unwrap();
        assert!(dynd.is_empty());
    }

    /// Reference answers from a fresh static build over the current set.
    fn check_against_fresh(
        letters: &[u64],
        index: &TextIndex,
        rslp: &Rslp,
        dynd: &DynamicDictionary,
    ) {
        let pairs: Vec<(usize, usize)> = dynd
            .keys()
            .iter()
            .map(|&(p, len)| (p, p + len - 1))
            .collect();
        let n = letters.len();
        for i in 1..=n {
            for j in i..=n {
                let want = oracle_answer(letters, &pairs, i, j);
                assert_eq!(
                    dynd.count(index, rslp, i, j).unwrap(),
                    want.count as u64,
                    "count ({i},{j}) dict {pairs:?}"
                );
                assert_eq!(dynd.exists(index, rslp, i, j).unwrap(), want.exists());
                let got_distinct = dynd.report_distinct(index, i, j).unwrap();
                let mut want_distinct: Vec<PatternKey> = want
                    .distinct
                    .iter()
                    .map(|&e| {
                        let (a, b) = pairs[e];
                        (
                            leftmost_occurrence(index, Fragment::new(a, b)).unwrap(),
                            b + 1 - a,
                        )
                    })
                    .collect();
                want_distinct.sort_unstable();
                assert_eq!(got_distinct, want_distinct, "distinct ({i},{j})");
                let got_report = dynd.report(index, i, j).unwrap();
                let mut want_report: Vec<(PatternKey, usize)> = want
                    .occurrences
                    .iter()
                    .map(|&(s, e)| {
                        let (a, b) = pairs[e];
                        let key = (
                            leftmost_occurrence(index, Fragment::new(a, b)).unwrap(),
                            b + 1 - a,
                        );
                        (key, s)
                    })
                    .collect();
                want_report.sort_unstable();
                assert_eq!(got_report, want_report, "report ({i},{j})");
            }
        }
    }

    #[test]
    fn randomized_update_scripts_match_static() {
        for seed in 0..12 {
            let mut rng = StdRng::seed_from_u64(9000 + seed);
            let n = rng.gen_range(10..=26);
            let sigma = *[1usize, 2, 3].get(rng.gen_range(0..3)).unwrap();
            let letters: Vec<u64> =
                (0..n).map(|_| rng.gen_range(0..sigma as u64)).collect();
            let (index, rslp) = make(&letters);
            let m = [1usize, 3, 7][rng.gen_range(0..3)];
            let mut dynd = DynamicDictionary::new(&index, &rslp, &[], m).unwrap();
            for _ in 0..40 {
                let a = rng.gen_range(1..=n);
                let b = rng.gen_range(a..=n.min(a + 6));
                let f = Fragment::new(a, b);
                let key = dynd.key_of(&index, f).unwrap();
                if dynd.current.contains(&key) {
                    dynd.delete(&index, &rslp, f).unwrap();
                } else {
                    dynd.insert(&index, &rslp, f).unwrap();
                }
                // D' invariant: stored minimum per collection.
                for (p, lens) in &dynd.collections {
                    assert!(!lens.is_empty());
                    assert!(dynd.current.contains(&(*p, *lens.first().unwrap())));
                }
                check_against_fresh(&letters, &index, &rslp, &dynd);
            }
        }
    }
}
