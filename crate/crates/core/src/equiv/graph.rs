use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use crate::error::{Error, Result};
use crate::modring::ModMatrix;

/// Default bound on search-tree nodes for [`GiSolutions`].
pub const DEFAULT_NODE_CAP: u64 = 200_000;

/// A symmetric matrix over `Z_k` read as a graph: diagonal entries are vertex
/// colors, off-diagonal entries are edge weights (0 meaning no edge).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModMatrix", into = "ModMatrix")]
pub struct WeightedGraph {
    adj: ModMatrix,
}

impl WeightedGraph {
    pub fn new(adj: ModMatrix) -> Result<Self> {
        if !adj.is_square() {
            return Err(Error::NonSquare { rows: adj.rows(), cols: adj.cols() });
        }
        if !adj.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(WeightedGraph { adj })
    }

    pub fn order(&self) -> usize {
        self.adj.rows()
    }

    pub fn modulus(&self) -> u64 {
        self.adj.modulus()
    }

    pub fn adjacency(&self) -> &ModMatrix {
        &self.adj
    }

    pub fn color(&self, v: usize) -> u64 {
        self.adj.get(v, v)
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        self.adj.get(u, v)
    }

    /// The graph `B` with `B[p(i)][p(j)] = A[i][j]`.
    pub fn relabel(&self, p: &Permutation) -> WeightedGraph {
        let n = self.order();
        let mut b = ModMatrix::zeros(self.modulus(), n, n);
        for i in 0..n {
            for j in 0..n {
                b.set(p.image(i), p.image(j), self.adj.get(i, j));
            }
        }
        WeightedGraph { adj: b }
    }
}

impl TryFrom<ModMatrix> for WeightedGraph {
    type Error = Error;
    fn try_from(m: ModMatrix) -> Result<Self> {
        WeightedGraph::new(m)
    }
}

impl From<WeightedGraph> for ModMatrix {
    fn from(g: WeightedGraph) -> Self {
        g.adj
    }
}

pub fn graph_from_projection(pi: &ModMatrix) -> Result<WeightedGraph> {
    WeightedGraph::new(pi.clone())
}

/// True iff `a1[p(i)][p(j)] = a2[i][j]` for all `i, j`.
pub fn is_isomorphism(a1: &WeightedGraph, a2: &WeightedGraph, p: &Permutation) -> bool {
    let n = a1.order();
    a2.order() == n
        && p.len() == n
        && (0..n).all(|i| (0..n).all(|j| a1.weight(p.image(i), p.image(j)) == a2.weight(i, j)))
}

/// Partial vertex map from the second graph to the first, as forced by the
/// singleton cells of the current partition.
pub type PartialMap = [Option<usize>];

type Prune<'a> = Box<dyn Fn(&PartialMap) -> bool + 'a>;

struct Frame {
    c1: Vec<usize>,
    c2: Vec<usize>,
    target: usize,
    candidates: Vec<usize>,
    next: usize,
}

/// Lazy enumeration of isomorphisms `p` with `a1[p(i)][p(j)] = a2[i][j]`,
/// by colour refinement and individualization with backtracking.
///
/// Candidates are tried in increasing vertex order inside the lowest colour
/// class with more than one vertex, so the enumeration order is fixed.
pub struct GiSolutions<'a> {
    a1: &'a WeightedGraph,
    a2: &'a WeightedGraph,
    prune: Option<Prune<'a>>,
    stack: Vec<Frame>,
    root: Option<(Vec<usize>, Vec<usize>)>,
    nodes: u64,
    node_cap: u64,
    capped: bool,
    leaves: u64,
}

impl<'a> GiSolutions<'a> {
    pub fn new(a1: &'a WeightedGraph, a2: &'a WeightedGraph) -> Self {
        let mut s = GiSolutions {
            a1,
            a2,
            prune: None,
            stack: Vec::new(),
            root: None,
            nodes: 0,
            node_cap: DEFAULT_NODE_CAP,
            capped: false,
            leaves: 0,
        };
        let n = a1.order();
        if a2.order() == n && a1.modulus() == a2.modulus() {
            let mut c1: Vec<usize> = (0..n).map(|v| a1.color(v) as usize).collect();
            let mut c2: Vec<usize> = (0..n).map(|v| a2.color(v) as usize).collect();
            if refine(a1, a2, &mut c1, &mut c2) {
                s.root = Some((c1, c2));
            }
        }
        s
    }

    pub fn with_node_cap(mut self, cap: u64) -> Self {
        self.node_cap = cap;
        self
    }

    /// Restricts the search to branches whose forced partial map passes
    /// `prune`. Every complete solution consistent with a rejected partial
    /// map is skipped.
    pub fn with_prune(mut self, prune: impl Fn(&PartialMap) -> bool + 'a) -> Self {
        self.prune = Some(Box::new(prune));
        self
    }

    /// Search-tree nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Complete labellings checked by conjugation so far.
    pub fn leaves(&self) -> u64 {
        self.leaves
    }

    /// True when the node cap stopped the search before it was exhausted.
    pub fn capped(&self) -> bool {
        self.capped
    }

    /// Handles a refined partition: returns a solution at a leaf, or pushes
    /// a frame for an inner node.
    fn visit(&mut self, c1: Vec<usize>, c2: Vec<usize>) -> Option<Permutation> {
        let n = c1.len();
        let mut count: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for v in 0..n {
            count.entry(c1[v]).or_insert((0, v)).0 += 1;
        }
        if let Some(prune) = &self.prune {
            let mut map = vec![None; n];
            let first2: BTreeMap<usize, usize> = (0..n).rev().map(|w| (c2[w], w)).collect();
            for (color, &(size, v)) in &count {
                if size == 1 {
                    map[first2[color]] = Some(v);
                }
            }
            if !prune(&map) {
                return None;
            }
        }
        match count.iter().find(|(_, &(size, _))| size > 1) {
            None => {
                self.leaves += 1;
                let mut images = vec![0; n];
                let by_color: BTreeMap<usize, usize> = (0..n).map(|v| (c1[v], v)).collect();
                for w in 0..n {
                    images[w] = by_color[&c2[w]];
                }
                let p = Permutation::from_images(images).expect("discrete partitions give a bijection");
                is_isomorphism(self.a1, self.a2, &p).then_some(p)
            }
            Some((&color, &(_, target))) => {
                let candidates = (0..n).filter(|&w| c2[w] == color).collect();
                self.stack.push(Frame { c1, c2, target, candidates, next: 0 });
                None
            }
        }
    }
}

impl Iterator for GiSolutions<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if let Some((c1, c2)) = self.root.take() {
            if let Some(p) = self.visit(c1, c2) {
                return Some(p);
            }
        }
        while let Some(top) = self.stack.last_mut() {
            if top.next == top.candidates.len() {
                self.stack.pop();
                continue;
            }
            if self.nodes >= self.node_cap {
                self.capped = true;
                self.stack.clear();
                return None;
            }
            self.nodes += 1;
            let w = top.candidates[top.next];
            top.next += 1;
            let fresh = top.c1.len() * 2 + 1;
            let (mut c1, mut c2) = (top.c1.clone(), top.c2.clone());
            c1[top.target] = fresh;
            c2[w] = fresh;
            if !refine(self.a1, self.a2, &mut c1, &mut c2) {
                continue;
            }
            if let Some(p) = self.visit(c1, c2) {
                return Some(p);
            }
        }
        None
    }
}

/// First isomorphism in enumeration order, if any.
pub fn solve_weighted_gi(a1: &WeightedGraph, a2: &WeightedGraph) -> Option<Permutation> {
    GiSolutions::new(a1, a2).next()
}

type Signature = (usize, Vec<(usize, u64)>);

fn signature(a: &WeightedGraph, c: &[usize], v: usize) -> Signature {
    let mut nbrs: Vec<(usize, u64)> =
        (0..c.len()).filter(|&u| u != v && a.weight(v, u) != 0).map(|u| (c[u], a.weight(v, u))).collect();
    nbrs.sort_unstable();
    (c[v], nbrs)
}

/// Joint colour refinement of both graphs to a common equitable partition.
/// Colours are ranks of signatures over both graphs, so they stay
/// comparable. Returns false when the colour histograms diverge.
fn refine(a1: &WeightedGraph, a2: &WeightedGraph, c1: &mut [usize], c2: &mut [usize]) -> bool {
    let n = c1.len();
    let mut classes = usize::MAX;
    loop {
        let s1: Vec<Signature> = (0..n).map(|v| signature(a1, c1, v)).collect();
        let s2: Vec<Signature> = (0..n).map(|v| signature(a2, c2, v)).collect();
        let mut all: Vec<&Signature> = s1.iter().chain(&s2).collect();
        all.sort_unstable();
        all.dedup();
        for v in 0..n {
            c1[v] = all.binary_search(&&s1[v]).expect("present");
            c2[v] = all.binary_search(&&s2[v]).expect("present");
        }
        let mut h1 = c1.to_vec();
        let mut h2 = c2.to_vec();
        h1.sort_unstable();
        h2.sort_unstable();
        if h1 != h2 {
            return false;
        }
        if all.len() == classes {
            return true;
        }
        classes = all.len();
    }
}
