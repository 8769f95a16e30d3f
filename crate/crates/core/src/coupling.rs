//! Coupling tensors `w^(k)_{i,j1..jk}` of a normalized system
//! `F(z) = z - Σ_k W^(k)(z)`.
//!
//! Storage is fully symmetrized: one entry per sorted index tuple, holding
//! the coefficient of the monomial `z_{j1}…z_{jk}` in `W^(k)_i`. The
//! redundant per-sequence tensor used by tree contractions is recovered by
//! spreading that coefficient evenly over the distinct orderings.

use std::collections::BTreeMap;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Monomial, PolySystem, Polynomial};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CouplingKey {
    pub degree: u32,
    pub target: usize,
    pub inputs: Vec<usize>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CouplingTensor {
    dim: usize,
    max_degree: u32,
    entries: BTreeMap<CouplingKey, Coefficient>,
}

impl CouplingTensor {
    pub fn new(dim: usize, max_degree: u32) -> Self {
        CouplingTensor {
            dim,
            max_degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CouplingKey, &Coefficient)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c` to the canonical entry for `(k, i, sort(js))`.
    pub fn add(&mut self, target: usize, inputs: &[usize], c: &Coefficient) -> Result<()> {
        let k = inputs.len() as u32;
        if k < 2 || k > self.max_degree {
            return Err(Error::CouplingIndex(format!(
                "degree {k} outside 2..={}",
                self.max_degree
            )));
        }
        if target >= self.dim || inputs.iter().any(|&j| j >= self.dim) {
            return Err(Error::CouplingIndex(format!(
                "index outside dimension {}",
                self.dim
            )));
        }
        let mut inputs = inputs.to_vec();
        inputs.sort_unstable();
        let key = CouplingKey {
            degree: k,
            target,
            inputs,
        };
        let v = self.entries.entry(key.clone()).or_default();
        *v += c;
        if v.is_zero() {
            self.entries.remove(&key);
        }
        Ok(())
    }

    /// Canonical (monomial) coefficient for `(i, js)` in any order.
    pub fn get(&self, target: usize, inputs: &[usize]) -> Coefficient {
        let mut inputs = inputs.to_vec();
        inputs.sort_unstable();
        self.entries
            .get(&CouplingKey {
                degree: inputs.len() as u32,
                target,
                inputs,
            })
            .cloned()
            .unwrap_or_default()
    }

    /// The symmetric redundant tensor entry `w_{i, j1..jk}` for an ordered
    /// sequence: the monomial coefficient divided by its number of distinct
    /// orderings.
    pub fn full_entry(&self, target: usize, sequence: &[usize]) -> Coefficient {
        let c = self.get(target, sequence);
        if c.is_zero() {
            return c;
        }
        let orderings = distinct_orderings(sequence);
        &c * &Coefficient::ratio(1, orderings)
    }

    pub fn has_degree(&self, k: u32) -> bool {
        self.entries.keys().any(|key| key.degree == k)
    }

    /// Reads off the couplings of `F = z - Σ W^(k)`. Fails unless `F` is
    /// square with zero constant part and identity linear part.
    pub fn from_system(f: &PolySystem) -> Result<Self> {
        f.require_square()?;
        let n = f.nvars();
        let mut w = CouplingTensor::new(n, f.degree_bound().max(2));
        for (i, comp) in f.components().iter().enumerate() {
            for (m, c) in comp.terms() {
                match m.degree() {
                    0 => {
                        return Err(Error::NotNormalized(format!(
                            "component {} has constant term {c}",
                            i + 1
                        )))
                    }
                    1 => {
                        let j = m.exps().iter().position(|&e| e == 1).unwrap();
                        let want = if i == j { Coefficient::one() } else { Coefficient::zero() };
                        if *c != want {
                            return Err(Error::NotNormalized(format!(
                                "linear part is not the identity (component {}, variable {})",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                    _ => {
                        let inputs: Vec<usize> = m
                            .exps()
                            .iter()
                            .enumerate()
                            .flat_map(|(j, &e)| std::iter::repeat_n(j, e as usize))
                            .collect();
                        w.add(i, &inputs, &-c)?;
                    }
                }
            }
            // an identity coefficient that is missing also breaks normalization
            if comp.coefficient(&Monomial::var(i, n)) != Coefficient::one() {
                return Err(Error::NotNormalized(format!(
                    "component {} lacks the term z{}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(w)
    }

    /// `W^(k)_i` as polynomials in `dim` variables.
    pub fn homogeneous_part(&self, k: u32) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(self.dim); self.dim];
        for (key, c) in self.entries.iter().filter(|(key, _)| key.degree == k) {
            out[key.target] = &out[key.target] + &monomial_of(&key.inputs, self.dim, c);
        }
        out
    }

    /// `Σ_k W^(k)_i`.
    pub fn nonlinear_part(&self) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(self.dim); self.dim];
        for (key, c) in &self.entries {
            out[key.target] = &out[key.target] + &monomial_of(&key.inputs, self.dim, c);
        }
        out
    }

    /// Rebuilds `F = z - Σ W`, with degree bound `max_degree`.
    pub fn to_system(&self) -> PolySystem {
        let comps = self
            .nonlinear_part()
            .iter()
            .enumerate()
            .map(|(i, w)| &Polynomial::var(i, self.dim) - w)
            .collect();
        PolySystem::new(self.dim, comps)
            .and_then(|s| s.with_degree_bound(self.max_degree))
            .expect("couplings stay within their degree bound")
    }
}

fn monomial_of(inputs: &[usize], dim: usize, c: &Coefficient) -> Polynomial {
    let mut e = vec![0; dim];
    for &j in inputs {
        e[j] += 1;
    }
    Polynomial::term(Monomial::new(e), c.clone())
}

/// Number of distinct orderings of a multiset, `k! / Π m_j!`.
pub fn distinct_orderings(sequence: &[usize]) -> i64 {
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for &j in sequence {
        *counts.entry(j).or_default() += 1;
    }
    let fact = |m: i64| (1..=m).product::<i64>();
    counts.values().fold(fact(sequence.len() as i64), |acc, &m| acc / fact(m))
}
