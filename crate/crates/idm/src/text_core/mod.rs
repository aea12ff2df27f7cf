//! Text representation and the suffix/periodicity toolbox every other
//! module builds on: LCE queries, suffix-tree loci, runs and 2-period
//! queries. Positions in the public API are 1-based and ranges inclusive.

mod runs;
pub(crate) mod suffix;

use crate::error::{Error, Result};

pub(crate) use suffix::{Locus, StIndex};

/// An immutable text over an integer alphabet. Letters are remapped to a
/// dense rank space internally; the original values are kept for display.
#[derive(Debug, Clone)]
pub struct Text {
    raw: Vec<u64>,
    syms: Vec<u32>,
}

impl Text {
    /// Builds a text from arbitrary integer letters.
    pub fn from_ints(letters: &[u64]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut sorted: Vec<u64> = letters.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let syms = letters
            .iter()
            .map(|v| (sorted.partition_point(|&x| x < *v) + 1) as u32)
            .collect();
        Ok(Self { raw: letters.to_vec(), syms })
    }

    /// Builds a text from the bytes of `s`.
    pub fn from_str(s: &str) -> Result<Self> {
        Self::from_ints(&s.bytes().map(u64::from).collect::<Vec<_>>())
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Original letter at a 1-based position.
    pub fn letter(&self, pos: usize) -> u64 {
        self.raw[pos - 1]
    }

    /// Rank-space symbols (values in 1..=sigma), 0-based slice.
    pub(crate) fn syms(&self) -> &[u32] {
        &self.syms
    }
}

/// A fragment T[start..end] of the text, 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fragment {
    pub start: usize,
    pub end: usize,
}

impl Fragment {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

/// A maximal repetition: T[start..end] has smallest period `period`, the
/// exponent is at least 2, and the repetition extends neither left nor right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

/// Suffix structures of the text and of its reverse, plus the run lookup.
#[derive(Debug)]
pub struct TextIndex {
    text: Text,
    pub(crate) fwd: StIndex,
    pub(crate) rev: StIndex,
    runs: Vec<Run>,
    lookup: runs::RunLookup,
}

impl TextIndex {
    pub fn new(text: &Text) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyText);
        }
        let mut fwd_syms = text.syms.clone();
        fwd_syms.push(0);
        let mut rev_syms: Vec<u32> = text.syms.iter().rev().copied().collect();
        rev_syms.push(0);
        let fwd = StIndex::build(fwd_syms);
        let rev = StIndex::build(rev_syms);
        let runs = runs::compute_runs(&fwd, &rev);
        let lookup = runs::RunLookup::new(runs.clone());
        Ok(Self { text: text.clone(), fwd, rev, runs, lookup })
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn check_pos(&self, pos: usize) -> Result<()> {
        if pos >= 1 && pos <= self.len() {
            Ok(())
        } else {
            Err(Error::PositionOutOfRange { pos, n: self.len() })
        }
    }

    pub(crate) fn check_fragment(&self, frag: Fragment) -> Result<()> {
        if frag.start >= 1 && frag.start <= frag.end && frag.end <= self.len() {
            Ok(())
        } else {
            Err(Error::InvalidRange { i: frag.start, j: frag.end, n: self.len() })
        }
    }

    /// Longest common extension: length of the longest common prefix of the
    /// suffixes starting at 1-based positions `a` and `b`.
    pub fn lce(&self, a: usize, b: usize) -> Result<usize> {
        self.check_pos(a)?;
        self.check_pos(b)?;
        if a == b {
            return Ok(self.len() + 1 - a);
        }
        Ok(self.fwd.lce(a - 1, b - 1))
    }

    /// Longest common suffix of the prefixes ending at `a` and `b` (1-based).
    pub fn lcs(&self, a: usize, b: usize) -> usize {
        if a == b {
            return a;
        }
        let n = self.len();
        self.rev.lce(n - a, n - b)
    }

    /// Locus of a fragment in the suffix tree of the text.
    pub(crate) fn locus(&self, frag: Fragment) -> Locus {
        self.fwd.locus(frag.start - 1, frag.len())
    }

    /// All maximal repetitions, sorted by start position.
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Smallest period of the fragment if it is at most half the fragment
    /// length; `None` marks the fragment aperiodic in that sense.
    pub fn two_period(&self, frag: Fragment) -> Result<Option<usize>> {
        Ok(self.periodic_extension(frag)?.map(|r| r.period))
    }

    /// The unique run containing the fragment with the same smallest period,
    /// when the smallest period is at most half the fragment length.
    pub fn periodic_extension(&self, frag: Fragment) -> Result<Option<Run>> {
        self.check_fragment(frag)?;
        let run = self.lookup.query(frag.start, frag.end);
        Ok(run.filter(|r| 2 * r.period <= frag.len()))
    }

    /// Whether two fragments hold the same string.
    pub fn frag_eq(&self, a: Fragment, b: Fragment) -> bool {
        a.len() == b.len()
            && (a.start == b.start || self.fwd.lce(a.start - 1, b.start - 1) >= a.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(s: &str) -> TextIndex {
        TextIndex::new(&Text::from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn empty_text_rejected() {
        assert!(matches!(Text::from_str(""), Err(Error::EmptyText)));
        assert!(matches!(Text::from_ints(&[]), Err(Error::EmptyText)));
    }

    #[test]
    fn rank_space_preserves_order_and_equality() {
        let t = Text::from_ints(&[100, 7, 100, 3]).unwrap();
        assert_eq!(t.syms(), &[3, 2, 3, 1]);
        assert_eq!(t.letter(1), 100);
        assert_eq!(t.letter(4), 3);
    }

    #[test]
    fn lce_example() {
        let idx = index("adaaaabaabbaac");
        assert_eq!(idx.lce(3, 4).unwrap(), 3);
        assert_eq!(idx.lce(1, 1).unwrap(), 14);
        assert_eq!(idx.lce(1, 2).unwrap(), 0);
        assert!(idx.lce(0, 3).is_err());
        assert!(idx.lce(3, 15).is_err());
    }

    #[test]
    fn lcs_matches_scan() {
        let idx = index("adaaaabaabbaac");
        let s: Vec<u8> = "adaaaabaabbaac".bytes().collect();
        for a in 1..=s.len() {
            for b in 1..=s.len() {
                let mut h = 0;
                while h < a && h < b && s[a - 1 - h] == s[b - 1 - h] {
                    h += 1;
                    if a == b {
                        h = a;
                        break;
                    }
                }
                assert_eq!(idx.lcs(a, b), h, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn two_period_examples() {
        let idx = index("adaaaabaabbaac");
        assert_eq!(idx.two_period(Fragment::new(5, 10)).unwrap(), Some(3));
        assert_eq!(idx.two_period(Fragment::new(6, 9)).unwrap(), None);
        assert_eq!(idx.two_period(Fragment::new(3, 3)).unwrap(), None);
        assert_eq!(idx.two_period(Fragment::new(3, 4)).unwrap(), Some(1));
    }

    #[test]
    fn periodic_extension_examples() {
        let idx = index("adaaaabaabbaac");
        assert_eq!(
            idx.periodic_extension(Fragment::new(3, 4)).unwrap(),
            Some(Run { start: 3, end: 6, period: 1 })
        );
        assert_eq!(
            idx.periodic_extension(Fragment::new(5, 10)).unwrap(),
            Some(Run { start: 5, end: 10, period: 3 })
        );
        assert_eq!(idx.periodic_extension(Fragment::new(6, 9)).unwrap(), None);
        assert!(idx.periodic_extension(Fragment::new(0, 2)).is_err());
    }

    #[test]
    fn two_period_matches_naive_on_random_texts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0003);
        for _ in 0..120 {
            let n = rng.gen_range(1..=40);
            let letters: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
            let text = Text::from_ints(&letters).unwrap();
            let idx = TextIndex::new(&text).unwrap();
            for i in 1..=n {
                for j in i..=n {
                    let len = j - i + 1;
                    let naive = (1..=len / 2)
                        .find(|&p| (i + p..=j).all(|k| letters[k - 1] == letters[k - 1 - p]));
                    assert_eq!(
                        idx.two_period(Fragment::new(i, j)).unwrap(),
                        naive,
                        "letters {letters:?} frag ({i},{j})"
                    );
                    if let Some(run) = idx.periodic_extension(Fragment::new(i, j)).unwrap() {
                        assert!(run.start <= i && run.end >= j);
                        assert_eq!(Some(run.period), naive);
                    }
                }
            }
        }
    }

    #[test]
    fn frag_eq_matches_slices() {
        let idx = index("abaababa");
        let s: Vec<u8> = "abaababa".bytes().collect();
        let n = s.len();
        for i in 1..=n {
            for j in i..=n {
                for k in 1..=n {
                    for l in k..=n {
                        let want = s[i - 1..j] == s[k - 1..l];
                        assert_eq!(
                            idx.frag_eq(Fragment::new(i, j), Fragment::new(k, l)),
                            want
                        );
                    }
                }
            }
        }
    }
}
