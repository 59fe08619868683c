//! k-nearest neighbours under cosine distance.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::KnnParams;
use crate::corpus::Label;
use crate::features::SparseVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub points: Vec<SparseVector>,
    pub labels: Vec<Label>,
}

/// `1 - cos(a, b)`; a zero vector is at distance 1 from everything.
pub fn cosine_distance(a: &SparseVector, na: f64, b: &SparseVector, nb: f64) -> f64 {
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    1.0 - a.dot(b) / (na * nb)
}

impl KnnModel {
    pub(super) fn fit(p: &KnnParams, x: &[SparseVector], y: &[Label]) -> Self {
        KnnModel { k: p.k, points: x.to_vec(), labels: y.to_vec() }
    }

    /// Indices of the k nearest stored points; equal distances go to the lower index.
    pub fn neighbours(&self, x: &SparseVector) -> Vec<usize> {
        let nx = x.norm();
        let mut d: Vec<(f64, usize)> =
            self.points.iter().enumerate().map(|(i, p)| (cosine_distance(x, nx, p, p.norm()), i)).collect();
        let k = self.k.min(d.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < d.len() {
            d.select_nth_unstable_by(k - 1, cmp);
            d.truncate(k);
        }
        d.sort_by(cmp);
        d.into_iter().map(|e| e.1).collect()
    }

    pub fn positive_fraction(&self, x: &SparseVector) -> f64 {
        let nb = self.neighbours(x);
        let pos = nb.iter().filter(|&&i| self.labels[i].is_positive()).count();
        pos as f64 / nb.len() as f64
    }
}
