use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::input(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("complete graph needs at least 1 vertex"));
    }
    Ok(Graph::empty(n).complement())
}

pub fn edgeless(n: usize) -> Result<Graph> {
    Graph::new(n, &[])
}

/// Parameters of the subset intersection graph `G(q, s)`: vertices are the
/// `q`-subsets of `{1, …, 2q}`, adjacent iff they share exactly `s` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetFamilySpec {
    pub q: usize,
    pub s: usize,
}

impl SubsetFamilySpec {
    pub fn new(q: usize, s: usize) -> Result<Self> {
        let spec = SubsetFamilySpec { q, s };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > self.s && self.s > 0) {
            return Err(Error::input(format!("G(q, s) needs q > s > 0, got q={} s={}", self.q, self.s)));
        }
        // masks are u64 and n = C(2q, q) must stay enumerable
        if self.q > 12 {
            return Err(Error::Unsupported(format!("q={} is too large to enumerate", self.q)));
        }
        Ok(())
    }

    /// The vertex labels: each `q`-subset as a bit mask over `{1..2q}` (bit
    /// `e-1` for element `e`), in lexicographic order of the sorted element lists.
    pub fn subsets(&self) -> Vec<u64> {
        let ground = 2 * self.q;
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..self.q).collect();
        loop {
            out.push(idx.iter().fold(0u64, |m, &e| m | 1 << e));
            // advance to the next combination in lexicographic order
            let Some(i) = (0..self.q).rev().find(|&i| idx[i] < ground - self.q + i) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..self.q {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

pub fn intersection_family(spec: SubsetFamilySpec) -> Result<Graph> {
    spec.validate()?;
    let subsets = spec.subsets();
    let mut g = Graph::empty(subsets.len());
    for (i, a) in subsets.iter().enumerate() {
        for (j, b) in subsets.iter().enumerate().skip(i + 1) {
            if (a & b).count_ones() as usize == spec.s {
                g.insert(i, j);
            }
        }
    }
    Ok(g)
}

/// The 64-vertex member of Alon's family: its complement is 16 disjoint
/// squares on the blocks `{4g, 4g+1, 4g+2, 4g+3}`, each traversed in that order.
pub fn alon_r2() -> Graph {
    let mut squares = Graph::empty(64);
    for block in 0..16 {
        let base = 4 * block;
        for k in 0..4 {
            squares.insert(base + k, base + (k + 1) % 4);
        }
    }
    squares.complement()
}

/// Erdős–Rényi graph. Pairs `(u, v)`, `u < v`, are visited in lexicographic
/// order and each is kept iff a uniform `f64` draw from
/// `ChaCha8Rng::seed_from_u64(seed)` is below `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability must lie in [0, 1], got {p}")));
    }
    if n == 0 {
        return Err(Error::input("graph must have at least one vertex"));
    }
    let mut rng = rng::seeded(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}
