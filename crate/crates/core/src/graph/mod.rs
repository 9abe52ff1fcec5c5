//! Simple undirected graphs stored as bit rows.
//!
//! Vertices are `0..n`. Row `v` holds one bit per vertex, set iff that vertex
//! is adjacent to `v`. The relation is kept symmetric with an empty diagonal
//! by every constructor, so downstream code can intersect rows directly.

mod families;
pub mod io;

pub use families::{alon_r2, complete, cycle, edgeless, intersection_family, random_graph, SubsetFamilySpec};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("m", &self.m).field("edges", &self.edges()).finish()
    }
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate and reversed pairs collapse
    /// into one undirected edge.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop on vertex {u}")));
            }
            g.insert(u, v);
        }
        Ok(g)
    }

    /// Edgeless graph on `n` vertices; `n` may be zero here, callers check.
    pub(crate) fn empty(n: usize) -> Graph {
        let words = words_for(n);
        Graph { n, words, bits: vec![0; n * words], m: 0 }
    }

    pub(crate) fn insert(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        if !self.has_edge(u, v) {
            self.bits[u * self.words + v / 64] |= 1 << (v % 64);
            self.bits[v * self.words + u / 64] |= 1 << (u % 64);
            self.m += 1;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Number of 64-bit words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    /// All edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_edgeless(&self) -> bool {
        self.m == 0
    }

    pub fn is_complete(&self) -> bool {
        self.m == self.n * (self.n - 1) / 2
    }

    /// Same vertex set; distinct vertices are adjacent iff they are not adjacent here.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for v in 0..self.n {
            let row = &mut g.bits[v * self.words..(v + 1) * self.words];
            for (w, (dst, src)) in row.iter_mut().zip(self.row(v)).enumerate() {
                *dst = !src & valid_mask(self.n, w);
            }
            row[v / 64] &= !(1 << (v % 64));
        }
        g.m = self.n * (self.n - 1) / 2 - self.m;
        g
    }

    /// Copy of the graph with one more edge (no-op if already present).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::input(format!("cannot add edge ({u}, {v})")));
        }
        let mut g = self.clone();
        g.insert(u, v);
        Ok(g)
    }

    /// True iff no two vertices of `set` are adjacent (and all are in range).
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&v| v < self.n)
            && set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// Checks the storage invariants: symmetric, empty diagonal, no stray
    /// bits past `n`, cached edge count correct.
    pub fn check_invariants(&self) -> bool {
        let mut ones = 0;
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            for (w, word) in self.row(u).iter().enumerate() {
                if word & !valid_mask(self.n, w) != 0 {
                    return false;
                }
            }
            for v in self.neighbors(u) {
                if !self.has_edge(v, u) {
                    return false;
                }
                ones += 1;
            }
        }
        ones == 2 * self.m
    }
}

fn valid_mask(n: usize, word: usize) -> u64 {
    let lo = word * 64;
    if n >= lo + 64 {
        u64::MAX
    } else if n <= lo {
        0
    } else {
        (1u64 << (n - lo)) - 1
    }
}

/// Iterates the positions of set bits in a bit row, ascending.
pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}
