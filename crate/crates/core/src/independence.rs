//! The noncontextual bound: the independence number `α(G)`.
//!
//! [`max_independent_set`] searches for a maximum clique in the complement
//! with a bitset branch and bound. At every node the candidate set is
//! greedily colored; a color class is an independent set of the complement,
//! so the number of classes bounds how much the current clique can still
//! grow. If the time budget runs out the best set found so far is returned
//! together with the best bound still open at the root.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{iter_bits, Graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceResult {
    pub lower_bound: usize,
    pub upper_bound: usize,
    /// Sorted ascending; independent in the graph, of size `lower_bound`.
    pub witness_set: Vec<usize>,
    pub exact: bool,
    pub nodes_explored: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

impl IndependenceResult {
    fn finished(witness: Vec<usize>, nodes: u64, start: Instant) -> Self {
        let k = witness.len();
        IndependenceResult {
            lower_bound: k,
            upper_bound: k,
            witness_set: witness,
            exact: true,
            nodes_explored: nodes,
            elapsed: start.elapsed().as_secs_f64(),
        }
    }
}

/// Largest graph [`brute_force_alpha`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 25;

/// Exact `α(G)` by include/exclude enumeration. Only for small graphs; this
/// is the reference the branch and bound is tested against.
pub fn brute_force_alpha(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Unsupported(format!(
            "brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}; use max_independent_set"
        )));
    }
    let closed: Vec<u32> = (0..n).map(|v| g.row(v)[0] as u32 | 1 << v).collect();
    fn rec(cand: u32, size: u32, best: &mut u32, closed: &[u32]) {
        if size + cand.count_ones() <= *best {
            return;
        }
        if cand == 0 {
            *best = size;
            return;
        }
        let v = cand.trailing_zeros() as usize;
        rec(cand & !closed[v], size + 1, best, closed);
        rec(cand & !(1 << v), size, best, closed);
    }
    let mut best = 0;
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    rec(all, 0, &mut best, &closed);
    Ok(best as usize)
}

/// Minimum-degree greedy: repeatedly take the vertex of smallest degree in
/// the remaining graph (lowest index on ties) and delete its neighbourhood.
pub fn greedy_lower_bound(g: &Graph) -> IndependenceResult {
    let start = Instant::now();
    let witness = greedy_set(g);
    let n = g.n();
    IndependenceResult {
        lower_bound: witness.len(),
        upper_bound: n,
        exact: witness.len() == n,
        witness_set: witness,
        nodes_explored: 0,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

fn greedy_set(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut set = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
        set.push(v);
        let removed: Vec<usize> = std::iter::once(v).chain(g.neighbors(v).filter(|&u| alive[u])).collect();
        for &u in &removed {
            alive[u] = false;
        }
        for &u in &removed {
            for w in g.neighbors(u) {
                if alive[w] {
                    degree[w] -= 1;
                }
            }
        }
    }
    set.sort_unstable();
    set
}

/// Default search budget.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(600);

/// `α(G)` by branch and bound, exact if the search finishes within `budget`.
pub fn max_independent_set(g: &Graph, budget: Duration) -> IndependenceResult {
    let start = Instant::now();
    let n = g.n();
    if g.is_edgeless() {
        return IndependenceResult::finished((0..n).collect(), 0, start);
    }
    if g.is_complete() {
        return IndependenceResult::finished(vec![0], 0, start);
    }

    // Relabel so that position 0 has the largest degree in the complement
    // (fewest conflicts in g); ties by index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut search = CliqueSearch::new(g, &order, start, budget);

    let greedy = greedy_set(g);
    search.best = greedy.iter().map(|&v| search.position[v]).collect();

    let mut root = vec![0u64; search.words];
    for p in 0..n {
        root[p / 64] |= 1 << (p % 64);
    }
    let mut clique = Vec::with_capacity(n);
    search.expand(&mut clique, &root, true);

    let mut witness: Vec<usize> = search.best.iter().map(|&p| order[p]).collect();
    witness.sort_unstable();
    let lower = witness.len();
    let (upper, exact) = match search.root_open_bound {
        Some(b) if search.timed_out => (b.max(lower), b <= lower),
        _ => (lower, true),
    };
    debug_assert!(g.is_independent(&witness));
    IndependenceResult {
        lower_bound: lower,
        upper_bound: upper,
        witness_set: witness,
        exact,
        nodes_explored: search.nodes,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

struct CliqueSearch {
    words: usize,
    /// adjacency of the complement, in search positions
    adj: Vec<u64>,
    position: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    start: Instant,
    budget: Duration,
    timed_out: bool,
    /// color bound of the root branch being explored when time ran out
    root_open_bound: Option<usize>,
}

impl CliqueSearch {
    fn new(g: &Graph, order: &[usize], start: Instant, budget: Duration) -> Self {
        let n = g.n();
        let words = n.div_ceil(64);
        let mut position = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let mut adj = vec![0u64; n * words];
        for p in 0..n {
            let v = order[p];
            for q in 0..n {
                if p != q && !g.has_edge(v, order[q]) {
                    adj[p * words + q / 64] |= 1 << (q % 64);
                }
            }
        }
        CliqueSearch {
            words,
            adj,
            position,
            best: Vec::new(),
            nodes: 0,
            start,
            budget,
            timed_out: false,
            root_open_bound: None,
        }
    }

    fn row(&self, p: usize) -> &[u64] {
        &self.adj[p * self.words..(p + 1) * self.words]
    }

    /// Greedy sequential coloring of `cand`. Returns the vertices whose color
    /// exceeds `min_color` in coloring order, with their colors
    /// (nondecreasing).
    fn color(&self, cand: &[u64], min_color: usize) -> Vec<(usize, usize)> {
        let mut uncolored = cand.to_vec();
        let mut class = vec![0u64; self.words];
        let mut out = Vec::new();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            class.copy_from_slice(&uncolored);
            while let Some(p) = first_bit(&class) {
                class[p / 64] &= !(1 << (p % 64));
                uncolored[p / 64] &= !(1 << (p % 64));
                for (c, a) in class.iter_mut().zip(self.row(p)) {
                    *c &= !a;
                }
                if color > min_color {
                    out.push((p, color));
                }
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, cand: &[u64], root: bool) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.start.elapsed() >= self.budget {
            self.timed_out = true;
        }
        let min_color = self.best.len().saturating_sub(clique.len());
        let colored = self.color(cand, min_color);
        let mut cand = cand.to_vec();
        let mut next = vec![0u64; self.words];
        for &(p, color) in colored.iter().rev() {
            if clique.len() + color <= self.best.len() {
                break;
            }
            if self.timed_out {
                if root {
                    self.root_open_bound = Some(color);
                }
                return;
            }
            clique.push(p);
            let mut any = false;
            for ((n, c), a) in next.iter_mut().zip(&cand).zip(self.row(p)) {
                *n = c & a;
                any |= *n != 0;
            }
            if any {
                let next_cand = next.clone();
                self.expand(clique, &next_cand, false);
            } else if clique.len() > self.best.len() {
                self.best = clique.clone();
            }
            clique.pop();
            cand[p / 64] &= !(1 << (p % 64));
            if self.timed_out && root {
                self.root_open_bound = Some(color);
                return;
            }
        }
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    iter_bits(words).next()
}
