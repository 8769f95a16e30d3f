//! Rooted plane trees and their amplitudes.
//!
//! Summing amplitudes of plane trees (children linearly ordered) with unit
//! weight reproduces the formal inverse directly: every ordered expansion
//! of `G_i = u_i + Σ w G…G` appears exactly once, so no symmetry factors
//! are needed.

use std::collections::HashMap;

use crate::coupling::CouplingTensor;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::series::{GradedSeries, GradedSeriesVector};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PlaneTree {
    /// A source leaf carrying `u_i`.
    Leaf,
    /// An interaction vertex with ordered incoming subtrees.
    Vertex(Vec<PlaneTree>),
}

impl PlaneTree {
    /// Number of interaction vertices.
    pub fn size(&self) -> usize {
        match self {
            PlaneTree::Leaf => 0,
            PlaneTree::Vertex(ch) => 1 + ch.iter().map(PlaneTree::size).sum::<usize>(),
        }
    }

    /// `Σ (k_v - 1)` over vertices.
    pub fn theta_weight(&self) -> usize {
        match self {
            PlaneTree::Leaf => 0,
            PlaneTree::Vertex(ch) => ch.len() - 1 + ch.iter().map(PlaneTree::theta_weight).sum::<usize>(),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlaneTree::Leaf => 1,
            PlaneTree::Vertex(ch) => ch.iter().map(PlaneTree::leaves).sum(),
        }
    }

    pub fn max_in_degree(&self) -> usize {
        match self {
            PlaneTree::Leaf => 0,
            PlaneTree::Vertex(ch) => ch
                .iter()
                .map(PlaneTree::max_in_degree)
                .fold(ch.len(), usize::max),
        }
    }
}

/// Values `𝒜_i(T)` for every root index `i`.
#[derive(Clone, PartialEq, Debug)]
pub struct Amplitude(pub Vec<Polynomial>);

struct Enumerator {
    max_in_degree: usize,
    memo: HashMap<usize, Vec<PlaneTree>>,
}

impl Enumerator {
    /// All trees of exactly the given weight, leaf included at weight 0.
    fn of_weight(&mut self, weight: usize) -> Vec<PlaneTree> {
        if let Some(v) = self.memo.get(&weight) {
            return v.clone();
        }
        let mut out = Vec::new();
        if weight == 0 {
            out.push(PlaneTree::Leaf);
        } else {
            for k in 2..=self.max_in_degree.min(weight + 1) {
                let rest = weight - (k - 1);
                for parts in compositions(rest, k) {
                    let choices: Vec<Vec<PlaneTree>> = parts.iter().map(|&w| self.of_weight(w)).collect();
                    for children in cartesian(&choices) {
                        out.push(PlaneTree::Vertex(children));
                    }
                }
            }
        }
        self.memo.insert(weight, out.clone());
        out
    }
}

/// Ordered ways of writing `total` as `parts` non-negative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut tail in compositions(total - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn cartesian(choices: &[Vec<PlaneTree>]) -> Vec<Vec<PlaneTree>> {
    let mut out: Vec<Vec<PlaneTree>> = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for t in options {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Every plane tree with in-degrees in `2..=max_in_degree` and θ-weight in
/// `1..=max_weight`, ordered by weight.
pub fn enumerate_trees(max_in_degree: usize, max_weight: usize) -> Vec<PlaneTree> {
    let mut e = Enumerator {
        max_in_degree,
        memo: HashMap::new(),
    };
    (1..=max_weight).flat_map(|w| e.of_weight(w)).collect()
}

/// Contracts couplings along the tree; leaves receive `sources`.
pub fn tree_amplitude(tree: &PlaneTree, w: &CouplingTensor, sources: &[Polynomial]) -> Amplitude {
    match tree {
        PlaneTree::Leaf => Amplitude(sources.to_vec()),
        PlaneTree::Vertex(children) => {
            let amps: Vec<Amplitude> = children.iter().map(|c| tree_amplitude(c, w, sources)).collect();
            let dim = w.dim();
            let nvars = sources[0].nvars();
            let k = children.len();
            let mut out = vec![Polynomial::zero(nvars); dim];
            let mut seq = vec![0usize; k];
            loop {
                let factors: Option<Polynomial> = seq
                    .iter()
                    .enumerate()
                    .try_fold(Polynomial::one(nvars), |acc, (slot, &j)| {
                        let a = &amps[slot].0[j];
                        (!a.is_zero()).then(|| &acc * a)
                    });
                if let Some(prod) = factors {
                    for (target, slot) in out.iter_mut().enumerate() {
                        let c = w.full_entry(target, &seq);
                        if !c.is_zero() {
                            *slot = &*slot + &prod.scale(&c);
                        }
                    }
                }
                if !advance(&mut seq, dim) {
                    break;
                }
            }
            Amplitude(out)
        }
    }
}

/// Odometer increment over `dim^len`; false once wrapped around.
pub(crate) fn advance(seq: &mut [usize], dim: usize) -> bool {
    for x in seq.iter_mut().rev() {
        *x += 1;
        if *x < dim {
            return true;
        }
        *x = 0;
    }
    false
}

/// Formal inverse as a sum of plane-tree amplitudes, grade `r` collecting
/// the trees of θ-weight `r`.
pub fn tree_oracle_inverse(w: &CouplingTensor, order: usize) -> Result<GradedSeriesVector> {
    let n = w.dim();
    if n == 0 {
        return Err(Error::Precondition("empty coupling tensor".into()));
    }
    let sources: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(i, n)).collect();
    let mut grades = vec![vec![Polynomial::zero(n); n]; order + 1];
    grades[0] = sources.clone();
    for tree in enumerate_trees(w.max_degree() as usize, order) {
        let r = tree.theta_weight();
        let amp = tree_amplitude(&tree, w, &sources);
        for (slot, a) in grades[r].iter_mut().zip(amp.0) {
            *slot = &*slot + &a;
        }
    }
    let comps: Vec<GradedSeries> = (0..n)
        .map(|i| GradedSeries::from_grades(n, grades.iter().map(|g| g[i].clone()).collect()))
        .collect::<Result<_>>()?;
    GradedSeriesVector::from_components(n, &comps)
}

/// Number of plane trees of each weight `1..=max_weight`.
pub fn tree_counts(max_in_degree: usize, max_weight: usize) -> Vec<usize> {
    let trees = enumerate_trees(max_in_degree, max_weight);
    (1..=max_weight)
        .map(|r| trees.iter().filter(|t| t.theta_weight() == r).count())
        .collect()
}
