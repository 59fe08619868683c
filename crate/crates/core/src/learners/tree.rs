//! CART-style decision trees on weighted Gini impurity, and random forests
//! of them.
//!
//! Splits have the form `x[feature] > threshold`; absent sparse entries are
//! zeros and always fall left. Thresholds are midpoints between adjacent
//! distinct values observed in the node.

use alloc::vec::Vec;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use super::{ForestParams, TreeParams};
use crate::corpus::Label;
use crate::features::SparseVector;
use crate::rng::{streams, SeedStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
    /// Weighted positive fraction of the training rows that reached this leaf.
    Leaf {
        positive: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf_value(&self, x: &SparseVector) -> f64 {
        let mut at = 0usize;
        loop {
            match self.nodes[at] {
                Node::Leaf { positive } => return positive,
                Node::Split { feature, threshold, left, right } => {
                    at = if x.get(feature as usize) > threshold { right } else { left } as usize;
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, at: usize) -> usize {
            match t.nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left as usize).max(go(t, right as usize)),
            }
        }
        go(self, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Forest {
    /// Fraction of trees whose leaf predicts the positive class.
    pub fn vote_fraction(&self, x: &SparseVector) -> f64 {
        let pos = self.trees.iter().filter(|t| t.leaf_value(x) > 0.5).count();
        pos as f64 / self.trees.len() as f64
    }
}

/// Improvement a candidate split needs over the best found so far.
const MIN_GAIN: f64 = 1e-12;

struct Builder<'a> {
    x: &'a [SparseVector],
    pos: Vec<bool>,
    w: &'a [f64],
    max_depth: usize,
    min_leaf: usize,
    /// Random feature subset size per node, with its generator (forests only).
    subset: Option<(usize, SeedStream)>,
    nodes: Vec<Node>,
}

/// `W * gini` for a node with positive weight `p` and total weight `t`.
fn weighted_gini(p: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let q = p / t;
    t * 2.0 * q * (1.0 - q)
}

struct Candidate {
    feature: u32,
    threshold: f64,
    impurity: f64,
}

impl Builder<'_> {
    fn totals(&self, rows: &[usize]) -> (f64, f64) {
        let mut p = 0.0;
        let mut t = 0.0;
        for &r in rows {
            t += self.w[r];
            if self.pos[r] {
                p += self.w[r];
            }
        }
        (p, t)
    }

    fn leaf(&mut self, p: f64, t: f64) -> u32 {
        let positive = if t > 0.0 { p / t } else { 0.0 };
        self.nodes.push(Node::Leaf { positive });
        (self.nodes.len() - 1) as u32
    }

    fn build(&mut self, rows: Vec<usize>, depth: usize) -> u32 {
        let (p, t) = self.totals(&rows);
        let parent = weighted_gini(p, t);
        if depth >= self.max_depth || rows.len() < 2 * self.min_leaf || parent <= MIN_GAIN * t.max(1.0) {
            return self.leaf(p, t);
        }
        let Some(best) = self.best_split(&rows, p, t, parent) else {
            return self.leaf(p, t);
        };
        let (right, left): (Vec<usize>, Vec<usize>) =
            rows.into_iter().partition(|&r| self.x[r].get(best.feature as usize) > best.threshold);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { positive: 0.0 });
        let l = self.build(left, depth + 1);
        let r = self.build(right, depth + 1);
        self.nodes[at] = Node::Split { feature: best.feature, threshold: best.threshold, left: l, right: r };
        at as u32
    }

    fn best_split(&mut self, rows: &[usize], p_all: f64, t_all: f64, parent: f64) -> Option<Candidate> {
        // Non-zero values per feature among the node's rows.
        let mut buckets: HashMap<u32, Vec<(f64, usize)>> = HashMap::new();
        for &r in rows {
            for &(j, v) in self.x[r].entries() {
                buckets.entry(j).or_default().push((v, r));
            }
        }
        let mut features: Vec<u32> = buckets
            .iter()
            .filter(|(_, b)| b.len() < rows.len() || b.iter().any(|e| e.0 != b[0].0))
            .map(|(j, _)| *j)
            .collect();
        features.sort_unstable();
        if let Some((k, rng)) = self.subset.as_mut() {
            if features.len() > *k {
                // Partial Fisher-Yates: the first k slots become a uniform sample.
                for i in 0..*k {
                    let j = i + rng.index(features.len() - i);
                    features.swap(i, j);
                }
                features.truncate(*k);
                features.sort_unstable();
            }
        }
        let mut best: Option<Candidate> = None;
        let mut best_imp = parent;
        for f in features {
            let Some(bucket) = buckets.get_mut(&f) else {
                continue;
            };
            bucket.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let zeros = rows.len() - bucket.len();
            let (mut rp, mut rt, mut rn) = (0.0, 0.0, 0usize);
            let mut i = 0;
            while i < bucket.len() {
                let v = bucket[i].0;
                while i < bucket.len() && bucket[i].0 == v {
                    let r = bucket[i].1;
                    rt += self.w[r];
                    if self.pos[r] {
                        rp += self.w[r];
                    }
                    rn += 1;
                    i += 1;
                }
                let next = if i < bucket.len() {
                    bucket[i].0
                } else if zeros > 0 {
                    0.0
                } else {
                    break;
                };
                if rn < self.min_leaf {
                    continue;
                }
                if rows.len() - rn < self.min_leaf {
                    break;
                }
                let imp = weighted_gini(rp, rt) + weighted_gini(p_all - rp, t_all - rt);
                if imp < best_imp - MIN_GAIN {
                    best_imp = imp;
                    best = Some(Candidate { feature: f, threshold: (v + next) / 2.0, impurity: imp });
                }
            }
        }
        best.filter(|c| c.impurity < parent)
    }
}

pub(super) fn fit_tree(
    p: &TreeParams,
    x: &[SparseVector],
    y: &[Label],
    w: &[f64],
    subset: Option<(usize, SeedStream)>,
) -> Tree {
    let mut b = Builder {
        x,
        pos: y.iter().map(|l| l.is_positive()).collect(),
        w,
        max_depth: p.max_depth,
        min_leaf: p.min_leaf,
        subset,
        nodes: Vec::new(),
    };
    b.build((0..x.len()).collect(), 0);
    Tree { nodes: b.nodes }
}

/// `ceil(sqrt(v))` without floating-point rounding surprises.
pub fn ceil_sqrt(v: usize) -> usize {
    let mut r = libm::sqrt(v as f64) as usize;
    while r * r < v {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= v {
        r -= 1;
    }
    r.max(1)
}

/// Bagged trees: each tree sees a uniform bootstrap sample of size N (rows
/// keep their weights, renormalized) and samples features per node.
pub(super) fn fit_forest(
    p: &ForestParams,
    x: &[SparseVector],
    y: &[Label],
    w: &[f64],
    dim: usize,
    seed: u64,
) -> Forest {
    let k = p.max_features.unwrap_or_else(|| ceil_sqrt(dim));
    let tp = TreeParams { max_depth: p.max_depth, min_leaf: p.min_leaf };
    let mut root = SeedStream::new(seed, streams::FOREST);
    let n = x.len();
    let mut trees = Vec::with_capacity(p.n_trees);
    for _ in 0..p.n_trees {
        let tree_seed = root.child_seed();
        let mut rng = SeedStream::new(tree_seed, 0);
        let idx: Vec<usize> = (0..n).map(|_| rng.index(n)).collect();
        let xs: Vec<SparseVector> = idx.iter().map(|&i| x[i].clone()).collect();
        let ys: Vec<Label> = idx.iter().map(|&i| y[i]).collect();
        let mut ws: Vec<f64> = idx.iter().map(|&i| w[i]).collect();
        let s: f64 = ws.iter().sum();
        if s > 0.0 {
            for v in &mut ws {
                *v /= s;
            }
        }
        trees.push(fit_tree(&tp, &xs, &ys, &ws, Some((k, SeedStream::new(tree_seed, 1)))));
    }
    Forest { trees }
}
