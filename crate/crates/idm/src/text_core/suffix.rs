//! Suffix array, LCP table and suffix tree over a sentinel-terminated
//! symbol sequence. Everything in this file is 0-based; the public
//! `TextIndex` layer translates to 1-based positions.

use crate::rmq::MinSparseTable;

pub(crate) const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct StNode {
    pub parent: u32,
    /// String depth (number of characters from the root).
    pub depth: u32,
    /// Suffix start of some leaf in the subtree (the leftmost one).
    pub repr: u32,
    /// Suffix start if this node is a leaf, `NO_NODE` otherwise.
    pub leaf: u32,
    /// Lexicographic rank interval of the leaves below, inclusive.
    pub lex_lo: u32,
    pub lex_hi: u32,
    /// Entry/exit times of a character-granularity Euler tour. For two
    /// fragments U, V of the underlying string, U is a prefix of V iff
    /// `rank_lo(U) <= rank_lo(V) <= rank_hi(U)`; the intervals of
    /// prefix-incomparable fragments are disjoint.
    pub rank_lo: u64,
    pub rank_hi: u64,
    pub children: Vec<u32>,
}

/// A (possibly implicit) suffix tree node: the explicit node `node` is the
/// nearest explicit descendant, `len` the string depth of the locus itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Locus {
    pub node: u32,
    pub len: u32,
}

#[derive(Debug)]
pub(crate) struct SuffixTree {
    pub nodes: Vec<StNode>,
    /// leaf_of[a] = id of the leaf for the suffix starting at position a.
    pub leaf_of: Vec<u32>,
    /// Binary-lifting ancestor table; `up[0]` is the parent array.
    up: Vec<Vec<u32>>,
}

/// Full suffix structure of one string: array, inverse, LCP with RMQ and
/// the suffix tree.
#[derive(Debug)]
pub(crate) struct StIndex {
    /// Total length including the sentinel.
    pub n: usize,
    pub sym: Vec<u32>,
    pub sa: Vec<u32>,
    pub isa: Vec<u32>,
    lcp_rmq: MinSparseTable<u32>,
    /// Min over `sa` values, for leftmost-occurrence queries.
    sa_min: MinSparseTable<u32>,
    pub tree: SuffixTree,
}

pub(crate) fn suffix_array(sym: &[u32]) -> Vec<u32> {
    let n = sym.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u64> = sym.iter().map(|&c| c as u64).collect();
    let mut tmp = vec![0u64; n];
    let mut k = 1usize;
    loop {
        let key = |i: u32| {
            let i = i as usize;
            let second = if i + k < n { rank[i + k] + 1 } else { 0 };
            (rank[i], second)
        };
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0] as usize] = 0;
        for w in 1..n {
            let prev = sa[w - 1];
            let cur = sa[w];
            tmp[cur as usize] =
                tmp[prev as usize] + u64::from(key(prev) != key(cur));
        }
        rank.copy_from_slice(&tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

fn lcp_array(sym: &[u32], sa: &[u32], isa: &[u32]) -> Vec<u32> {
    // Kasai's algorithm.
    let n = sym.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for a in 0..n {
        let r = isa[a] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let b = sa[r - 1] as usize;
        while a + h < n && b + h < n && sym[a + h] == sym[b + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

impl SuffixTree {
    fn build(n: usize, sa: &[u32], lcp: &[u32]) -> Self {
        let mut nodes: Vec<StNode> = Vec::with_capacity(2 * n + 2);
        let new_node = |nodes: &mut Vec<StNode>, parent: u32, depth: u32| -> u32 {
            nodes.push(StNode {
                parent,
                depth,
                repr: 0,
                leaf: NO_NODE,
                lex_lo: 0,
                lex_hi: 0,
                rank_lo: 0,
                rank_hi: 0,
                children: Vec::new(),
            });
            (nodes.len() - 1) as u32
        };
        let root = new_node(&mut nodes, NO_NODE, 0);
        let mut leaf_of = vec![NO_NODE; n];
        let mut stack: Vec<u32> = vec![root];
        for r in 0..n {
            let l = if r == 0 { 0 } else { lcp[r] };
            let mut last = NO_NODE;
            while nodes[*stack.last().unwrap() as usize].depth > l {
                last = stack.pop().unwrap();
            }
            let mut top = *stack.last().unwrap();
            if nodes[top as usize].depth < l {
                // Split: a fresh internal node takes over the popped child.
                debug_assert!(last != NO_NODE);
                let u = new_node(&mut nodes, top, l);
                let popped = nodes[top as usize].children.pop();
                debug_assert_eq!(popped, Some(last));
                nodes[top as usize].children.push(u);
                nodes[last as usize].parent = u;
                nodes[u as usize].children.push(last);
                stack.push(u);
                top = u;
            }
            let a = sa[r];
            let leaf_depth = (n - a as usize) as u32;
            let leaf = new_node(&mut nodes, top, leaf_depth);
            nodes[leaf as usize].leaf = a;
            nodes[leaf as usize].lex_lo = r as u32;
            nodes[leaf as usize].lex_hi = r as u32;
            nodes[top as usize].children.push(leaf);
            leaf_of[a as usize] = leaf;
            stack.push(leaf);
        }

        // Post-order pass: representative leaf and lex-rank intervals;
        // pre/post pass: Euler character times.
        let mut order: Vec<u32> = Vec::with_capacity(nodes.len());
        let mut dfs: Vec<(u32, usize)> = vec![(root, 0)];
        let mut cr: u64 = 0;
        while let Some(&mut (v, ref mut ci)) = dfs.last_mut() {
            let vi = v as usize;
            if *ci == 0 {
                nodes[vi].rank_lo = cr;
                if nodes[vi].leaf != NO_NODE {
                    cr += 1;
                }
            }
            if *ci < nodes[vi].children.len() {
                let c = nodes[vi].children[*ci];
                *ci += 1;
                cr += u64::from(nodes[c as usize].depth - nodes[vi].depth);
                dfs.push((c, 0));
            } else {
                nodes[vi].rank_hi = cr;
                if nodes[vi].parent != NO_NODE {
                    cr += u64::from(nodes[vi].depth - nodes[nodes[vi].parent as usize].depth);
                }
                order.push(v);
                dfs.pop();
            }
        }
        for &v in &order {
            let vi = v as usize;
            if nodes[vi].leaf != NO_NODE {
                nodes[vi].repr = nodes[vi].leaf;
            } else {
                let first = nodes[vi].children[0] as usize;
                let last = *nodes[vi].children.last().unwrap() as usize;
                nodes[vi].repr = nodes[first].repr;
                nodes[vi].lex_lo = nodes[first].lex_lo;
                nodes[vi].lex_hi = nodes[last].lex_hi;
            }
        }

        // Binary lifting over the explicit nodes.
        let max_depth = n.max(1);
        let levels = max_depth.ilog2() as usize + 1;
        let mut up = Vec::with_capacity(levels);
        up.push(
            nodes
                .iter()
                .map(|nd| if nd.parent == NO_NODE { root } else { nd.parent })
                .collect::<Vec<u32>>(),
        );
        for k in 1..levels {
            let prev = &up[k - 1];
            up.push(prev.iter().map(|&p| prev[p as usize]).collect());
        }

        SuffixTree { nodes, leaf_of, up }
    }

    /// Highest ancestor (including `v` itself) with string depth >= `len`.
    pub fn weighted_ancestor(&self, v: u32, len: u32) -> u32 {
        debug_assert!(len >= 1 && self.nodes[v as usize].depth >= len);
        let mut cur = v;
        for k in (0..self.up.len()).rev() {
            let cand = self.up[k][cur as usize];
            if self.nodes[cand as usize].depth >= len {
                cur = cand;
            }
        }
        cur
    }

    #[inline]
    pub fn node(&self, v: u32) -> &StNode {
        &self.nodes[v as usize]
    }
}

impl StIndex {
    /// `sym` must end with a sentinel 0 that occurs nowhere else; all other
    /// values must be >= 1.
    pub fn build(sym: Vec<u32>) -> Self {
        let n = sym.len();
        debug_assert!(n >= 1 && *sym.last().unwrap() == 0);
        let sa = suffix_array(&sym);
        let mut isa = vec![0u32; n];
        for (r, &a) in sa.iter().enumerate() {
            isa[a as usize] = r as u32;
        }
        let lcp = lcp_array(&sym, &sa, &isa);
        let sa_min = MinSparseTable::new(sa.clone());
        let tree = SuffixTree::build(n, &sa, &lcp);
        let lcp_rmq = MinSparseTable::new(lcp);
        Self { n, sym, sa, isa, lcp_rmq, sa_min, tree }
    }

    /// Longest common prefix length of the suffixes starting at `a` and `b`
    /// (0-based, sentinel included in the count only for `a == b`).
    pub fn lce(&self, a: usize, b: usize) -> usize {
        if a == b {
            return self.n - a;
        }
        let (ra, rb) = (self.isa[a] as usize, self.isa[b] as usize);
        let (lo, hi) = if ra < rb { (ra + 1, rb) } else { (rb + 1, ra) };
        self.lcp_rmq.min(lo, hi) as usize
    }

    /// Locus of the fragment of length `len` starting at `a` (0-based).
    pub fn locus(&self, a: usize, len: usize) -> Locus {
        debug_assert!(len >= 1 && a + len < self.n);
        let leaf = self.tree.leaf_of[a];
        let node = self.tree.weighted_ancestor(leaf, len as u32);
        Locus { node, len: len as u32 }
    }

    /// Euler entry time of a (possibly implicit) locus.
    #[inline]
    pub fn rank_lo(&self, locus: Locus) -> u64 {
        let nd = self.tree.node(locus.node);
        nd.rank_lo - u64::from(nd.depth - locus.len)
    }

    /// Euler exit time of a (possibly implicit) locus.
    #[inline]
    pub fn rank_hi(&self, locus: Locus) -> u64 {
        let nd = self.tree.node(locus.node);
        nd.rank_hi + u64::from(nd.depth - locus.len)
    }

    /// Index (within `[lo..hi]`, inclusive) of the leftmost minimum of `sa`.
    pub fn sa_min_argmin(&self, lo: usize, hi: usize) -> usize {
        self.sa_min.argmin(lo, hi)
    }

    /// Smallest starting position of an occurrence of the fragment at `locus`.
    pub fn leftmost_occurrence(&self, locus: Locus) -> usize {
        let nd = self.tree.node(locus.node);
        self.sa_min.min(nd.lex_lo as usize, nd.lex_hi as usize) as usize
    }
}
