//! Run-length straight-line program over the text, built by recompression:
//! rounds alternate collapsing maximal unary blocks into powers and pairing
//! adjacent symbols under a derandomized alphabet partition. The resulting
//! parse is locally consistent: equal fragments have equal popped
//! sequences, which is what makes the counting structures work.

use std::collections::HashMap;

use crate::text_core::{Fragment, Text};

/// Documented depth constant: the number of compression rounds (and hence
/// the parse-tree depth) stays below `ALPHA * ceil(log2 n) + 2`. Each pair
/// round removes at least a quarter of the symbol boundaries, block rounds
/// never lengthen the sequence, and rounds that would change nothing are
/// skipped.
pub const ALPHA: usize = 6;

/// Documented popped-sequence constant: every popped sequence has at most
/// `BETA * ceil(log2 n) + 4` runs (at most two pops per round).
pub const BETA: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Production {
    /// A terminal; carries the original letter value.
    Terminal(u64),
    Concat(u32, u32),
    /// `Power(base, k)` expands to `k >= 2` copies of the base.
    Power(u32, u64),
}

#[derive(Debug)]
struct RoundSeq {
    syms: Vec<u32>,
    /// Text offset (0-based) of each element's expansion; one extra entry
    /// holding the total length.
    start_pos: Vec<u64>,
    /// Index of each element's parent in the next round (empty for the
    /// final round).
    parent: Vec<u32>,
    /// First child index in the previous round, with a sentinel (empty for
    /// round 0).
    child_start: Vec<u32>,
}

#[derive(Debug)]
enum Transition {
    Block,
    /// Pair compression under this round's partition: `true` = left class.
    Pair(HashMap<u32, bool>),
}

/// The grammar plus its full round-by-round parse, which doubles as the
/// materialized parse tree (an element of a round is a tree node; elements
/// that pass through a round unchanged are the same node seen twice).
#[derive(Debug)]
pub struct Rslp {
    prods: Vec<Production>,
    exp_len: Vec<u64>,
    rounds: Vec<RoundSeq>,
    transitions: Vec<Transition>,
    /// Leftmost text offset (0-based) of each symbol as a parse node.
    repr_off: Vec<u64>,
    n: usize,
}

/// Popped sequence of a fragment, run-length encoded: `(symbol, count)`
/// with adjacent equal symbols merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoppedSequence {
    pub runs: Vec<(u32, u64)>,
}

/// The landmark lengths L(S) of a fragment and the derived interior
/// breakpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandmarkSet {
    /// Sorted, deduplicated values in [0..|S|].
    pub values: Vec<u64>,
    len: u64,
}

impl LandmarkSet {
    /// Interior breakpoints, represented by their integer part: value `b`
    /// stands for the inter-position b + 1/2, for b in [1..|S|-1].
    pub fn interior_breakpoints(&self) -> Vec<u64> {
        self.values
            .iter()
            .copied()
            .filter(|&b| b >= 1 && b < self.len)
            .collect()
    }
}

/// A parse node: element `idx` of round `round`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct NodeRef {
    pub round: u32,
    pub idx: u32,
}

pub fn build_rslp(text: &Text) -> Rslp {
    let n = text.len();
    let mut prods: Vec<Production> = Vec::new();
    let mut exp_len: Vec<u64> = Vec::new();
    let mut term_memo: HashMap<u32, u32> = HashMap::new();
    let mut pow_memo: HashMap<(u32, u64), u32> = HashMap::new();
    let mut pair_memo: HashMap<(u32, u32), u32> = HashMap::new();

    let new_sym = |prods: &mut Vec<Production>, exp_len: &mut Vec<u64>, p: Production, len: u64| {
        prods.push(p);
        exp_len.push(len);
        (prods.len() - 1) as u32
    };

    let syms0: Vec<u32> = text
        .syms()
        .iter()
        .enumerate()
        .map(|(k, &rank)| {
            *term_memo.entry(rank).or_insert_with(|| {
                new_sym(&mut prods, &mut exp_len, Production::Terminal(text.letter(k + 1)), 1)
            })
        })
        .collect();

    let start_pos = |syms: &[u32], exp_len: &[u64]| {
        let mut pos = Vec::with_capacity(syms.len() + 1);
        let mut acc = 0u64;
        pos.push(0);
        for &s in syms {
            acc += exp_len[s as usize];
            pos.push(acc);
        }
        pos
    };

    let mut rounds = vec![RoundSeq {
        start_pos: start_pos(&syms0, &exp_len),
        syms: syms0,
        parent: Vec::new(),
        child_start: Vec::new(),
    }];
    let mut transitions = Vec::new();

    while rounds.last().unwrap().syms.len() > 1 {
        let cur_syms = rounds.last().unwrap().syms.clone();
        let has_block = cur_syms.windows(2).any(|w| w[0] == w[1]);
        let mut next: Vec<u32> = Vec::new();
        let mut parent: Vec<u32> = vec![0; cur_syms.len()];
        let mut child_start: Vec<u32> = Vec::new();
        if has_block {
            let mut i = 0;
            while i < cur_syms.len() {
                let s = cur_syms[i];
                let mut j = i + 1;
                while j < cur_syms.len() && cur_syms[j] == s {
                    j += 1;
                }
                let sym = if j - i >= 2 {
                    let k = (j - i) as u64;
                    *pow_memo.entry((s, k)).or_insert_with(|| {
                        let len = exp_len[s as usize] * k;
                        new_sym(&mut prods, &mut exp_len, Production::Power(s, k), len)
                    })
                } else {
                    s
                };
                child_start.push(i as u32);
                for p in &mut parent[i..j] {
                    *p = next.len() as u32;
                }
                next.push(sym);
                i = j;
            }
            transitions.push(Transition::Block);
        } else {
            let is_left = derandomized_partition(&cur_syms);
            let mut i = 0;
            while i < cur_syms.len() {
                let a = cur_syms[i];
                let paired = i + 1 < cur_syms.len()
                    && is_left[&a]
                    && !is_left[&cur_syms[i + 1]];
                let (sym, width) = if paired {
                    let b = cur_syms[i + 1];
                    let id = *pair_memo.entry((a, b)).or_insert_with(|| {
                        let len = exp_len[a as usize] + exp_len[b as usize];
                        new_sym(&mut prods, &mut exp_len, Production::Concat(a, b), len)
                    });
                    (id, 2)
                } else {
                    (a, 1)
                };
                child_start.push(i as u32);
                for p in &mut parent[i..i + width] {
                    *p = next.len() as u32;
                }
                next.push(sym);
                i += width;
            }
            transitions.push(Transition::Pair(is_left));
        }
        child_start.push(cur_syms.len() as u32);
        rounds.last_mut().unwrap().parent = parent;
        rounds.push(RoundSeq {
            start_pos: start_pos(&next, &exp_len),
            syms: next,
            parent: Vec::new(),
            child_start,
        });
    }

    let mut repr_off = vec![u64::MAX; prods.len()];
    for r in &rounds {
        for (k, &s) in r.syms.iter().enumerate() {
            let off = r.start_pos[k];
            if off < repr_off[s as usize] {
                repr_off[s as usize] = off;
            }
        }
    }

    Rslp { prods, exp_len, rounds, transitions, repr_off, n }
}

/// Greedy left/right alphabet partition by conditional expectation: at
/// least a quarter of the (all-distinct) adjacent pairs end up compressible.
fn derandomized_partition(syms: &[u32]) -> HashMap<u32, bool> {
    let mut out_pairs: HashMap<u32, HashMap<u32, u64>> = HashMap::new();
    let mut in_pairs: HashMap<u32, HashMap<u32, u64>> = HashMap::new();
    for w in syms.windows(2) {
        debug_assert_ne!(w[0], w[1]);
        *out_pairs.entry(w[0]).or_default().entry(w[1]).or_insert(0) += 1;
        *in_pairs.entry(w[1]).or_default().entry(w[0]).or_insert(0) += 1;
    }
    let mut alphabet: Vec<u32> = syms.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut is_left: HashMap<u32, bool> = HashMap::new();
    for &s in &alphabet {
        // Doubled gains keep the 1/2 weights of undecided neighbors exact.
        let mut gain_l = 0u64;
        if let Some(outs) = out_pairs.get(&s) {
            for (&t, &c) in outs {
                match is_left.get(&t) {
                    Some(false) => gain_l += 2 * c,
                    Some(true) => {}
                    None => gain_l += c,
                }
            }
        }
        let mut gain_r = 0u64;
        if let Some(ins) = in_pairs.get(&s) {
            for (&t, &c) in ins {
                match is_left.get(&t) {
                    Some(true) => gain_r += 2 * c,
                    Some(false) => {}
                    None => gain_r += c,
                }
            }
        }
        is_left.insert(s, gain_l >= gain_r);
    }
    is_left
}

impl Rslp {
    pub fn text_len(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> u32 {
        self.rounds.last().unwrap().syms[0]
    }

    pub fn production(&self, sym: u32) -> &Production {
        &self.prods[sym as usize]
    }

    pub fn expansion_len(&self, sym: u32) -> u64 {
        self.exp_len[sym as usize]
    }

    pub fn symbol_count(&self) -> usize {
        self.prods.len()
    }

    /// Parse-tree depth (number of compression rounds).
    pub fn depth(&self) -> usize {
        self.rounds.len() - 1
    }

    /// One production per line, topologically sorted (children first).
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (id, p) in self.prods.iter().enumerate() {
            match p {
                Production::Terminal(c) => writeln!(out, "S{id} -> '{c}'").unwrap(),
                Production::Concat(a, b) => writeln!(out, "S{id} -> S{a} S{b}").unwrap(),
                Production::Power(b, k) => writeln!(out, "S{id} -> S{b}^{k}").unwrap(),
            }
        }
        out
    }

    /// Locally consistent popped sequence: ascend the rounds over the
    /// fragment, peeling boundary elements that might take part in a
    /// compression together with context outside the fragment. Block
    /// rounds peel the first and last maximal unary run; pair rounds peel
    /// the first element when it is right-class and the last when
    /// left-class. The peeling depends only on the fragment's content.
    pub fn popped_sequence(&self, frag: Fragment) -> PoppedSequence {
        assert!(frag.start >= 1 && frag.start <= frag.end && frag.end <= self.n);
        let mut a = frag.start - 1; // half-open element range in the round
        let mut b = frag.end;
        let mut left: Vec<(u32, u64)> = Vec::new();
        let mut right: Vec<(u32, u64)> = Vec::new();
        for (q, tr) in self.transitions.iter().enumerate() {
            if a >= b {
                break;
            }
            let syms = &self.rounds[q].syms;
            match tr {
                Transition::Block => {
                    let s = syms[a];
                    let mut r = a + 1;
                    while r < b && syms[r] == s {
                        r += 1;
                    }
                    left.push((s, (r - a) as u64));
                    a = r;
                    if a < b {
                        let s2 = syms[b - 1];
                        let mut l2 = b - 1;
                        while l2 > a && syms[l2 - 1] == s2 {
                            l2 -= 1;
                        }
                        right.push((s2, (b - l2) as u64));
                        b = l2;
                    }
                }
                Transition::Pair(is_left) => {
                    if !is_left[&syms[a]] {
                        left.push((syms[a], 1));
                        a += 1;
                    }
                    if a < b && is_left[&syms[b - 1]] {
                        right.push((syms[b - 1], 1));
                        b -= 1;
                    }
                }
            }
            if a >= b {
                break;
            }
            let parent = &self.rounds[q].parent;
            let (pa, pb) = (parent[a] as usize, parent[b - 1] as usize + 1);
            a = pa;
            b = pb;
        }
        // Only n = 1 (no transitions at all) leaves a surviving core.
        for k in a..b {
            let q = self.transitions.len();
            left.push((self.rounds[q].syms[k], 1));
        }
        let mut runs: Vec<(u32, u64)> = Vec::new();
        for (s, c) in left.into_iter().chain(right.into_iter().rev()) {
            match runs.last_mut() {
                Some((ls, lc)) if *ls == s => *lc += c,
                _ => runs.push((s, c)),
            }
        }
        PoppedSequence { runs }
    }

    /// The landmark set L(S) of the fragment, per the run-length encoding
    /// F_1^{p_1}..F_t^{p_t} of its popped sequence:
    /// {|g(F_1)|, |g(F_1^{p_1})|, ..., |g(F_1^{p_1}..F_{t-1}^{p_{t-1}})|,
    ///  |g(F_1^{p_1}..F_t^{p_t - 1})|}.
    pub fn landmarks(&self, frag: Fragment) -> LandmarkSet {
        let popped = self.popped_sequence(frag);
        self.landmarks_of(&popped)
    }

    pub fn landmarks_of(&self, popped: &PoppedSequence) -> LandmarkSet {
        let runs = &popped.runs;
        let t = runs.len();
        let total: u64 = runs.iter().map(|&(s, c)| self.exp_len[s as usize] * c).sum();
        let mut values = Vec::new();
        values.push(self.exp_len[runs[0].0 as usize]);
        let mut acc = 0u64;
        for (i, &(s, c)) in runs.iter().enumerate() {
            acc += self.exp_len[s as usize] * c;
            if i + 1 < t || t == 1 {
                values.push(acc);
            }
        }
        let (last_s, _) = runs[t - 1];
        values.push(total - self.exp_len[last_s as usize]);
        values.sort_unstable();
        values.dedup();
        LandmarkSet { values, len: total }
    }

    /// Leftmost text offset (0-based) at which `sym` occurs as a parse
    /// node, i.e. the representative occurrence of g(sym).
    pub(crate) fn repr_off(&self, sym: u32) -> u64 {
        self.repr_off[sym as usize]
    }

    // Parse-node navigation used by the counting descent.

    pub(crate) fn top_node(&self) -> NodeRef {
        NodeRef { round: (self.rounds.len() - 1) as u32, idx: 0 }
    }

    pub(crate) fn node_sym(&self, v: NodeRef) -> u32 {
        self.rounds[v.round as usize].syms[v.idx as usize]
    }

    /// Text span of a node as 0-based half-open offsets.
    pub(crate) fn node_span(&self, v: NodeRef) -> (u64, u64) {
        let r = &self.rounds[v.round as usize];
        (r.start_pos[v.idx as usize], r.start_pos[v.idx as usize + 1])
    }

    /// Child nodes (in the previous round); empty iff `v` is a leaf
    /// element of round 0.
    #[cfg(test)]
    pub(crate) fn node_children(&self, v: NodeRef) -> Vec<NodeRef> {
        if v.round == 0 {
            return Vec::new();
        }
        let r = &self.rounds[v.round as usize];
        let lo = r.child_start[v.idx as usize];
        let hi = r.child_start[v.idx as usize + 1];
        (lo..hi)
            .map(|idx| NodeRef { round: v.round - 1, idx })
            .collect()
    }

    /// Number of children of `v` (0 iff `v` is a leaf element of round 0).
    pub(crate) fn node_child_count(&self, v: NodeRef) -> u32 {
        if v.round == 0 {
            return 0;
        }
        let r = &self.rounds[v.round as usize];
        r.child_start[v.idx as usize + 1] - r.child_start[v.idx as usize]
    }

    /// The `t`-th child of `v` (0-based), without materializing the list.
    pub(crate) fn node_child(&self, v: NodeRef, t: u32) -> NodeRef {
        let r = &self.rounds[v.round as usize];
        NodeRef { round: v.round - 1, idx: r.child_start[v.idx as usize] + t }
    }
}
