//! Sparse multivariate polynomials over Gaussian rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], ordered graded
//! lexicographically, so iteration order (and every printed or serialized
//! form) is deterministic. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Range, Sub};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

/// An exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree counted only over the variables in `block`.
    pub fn block_degree(&self, block: &Range<usize>) -> u32 {
        self.0[block.clone()].iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Optional truncation applied while multiplying: drop every term whose
/// degree in `block` exceeds `cap`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub block: Range<usize>,
    pub cap: u32,
}

impl Truncation {
    fn keeps(&self, m: &Monomial) -> bool {
        m.block_degree(&self.block) <= self.cap
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Coefficient, nvars: usize) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Coefficient::one(), nvars)
    }

    /// The coordinate function `z_i` (0-based).
    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        Self::term(Monomial::var(i, nvars), Coefficient::one())
    }

    pub fn term(m: Monomial, c: Coefficient) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Coefficient)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ExponentLength {
                    got: e.len(),
                    nvars,
                });
            }
            p.add_term(Monomial(e), &c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(&Monomial::one(self.nvars))
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn block_degree(&self, block: &Range<usize>) -> u32 {
        self.terms
            .keys()
            .map(|m| m.block_degree(block))
            .max()
            .unwrap_or(0)
    }

    /// Largest term under the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coefficient)> {
        self.terms.iter().next_back()
    }

    /// Largest term of highest total degree that is not constant, used as a
    /// compact witness of non-constancy.
    pub fn nonconstant_witness(&self) -> Option<Polynomial> {
        self.terms
            .iter()
            .rev()
            .find(|(m, _)| m.degree() > 0)
            .map(|(m, c)| Polynomial::term(m.clone(), c.clone()))
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_nvars(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(other)?;
        Ok(self.mul_truncated(other, None))
    }

    /// Product, dropping terms rejected by `trunc`.
    pub fn mul_truncated(&self, other: &Polynomial, trunc: Option<&Truncation>) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if trunc.is_none_or(|t| t.keeps(&m)) {
                    out.add_term(m, &(ca * cb));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term rejected by `trunc`.
    pub fn truncate(&self, trunc: &Truncation) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| trunc.keeps(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of the terms of total degree exactly `c`.
    pub fn homogeneous_part(&self, c: u32) -> Polynomial {
        self.filter_terms(|m| m.degree() == c)
    }

    /// Sum of the terms whose degree in `block` is exactly `c`.
    pub fn block_homogeneous_part(&self, block: &Range<usize>, c: u32) -> Polynomial {
        self.filter_terms(|m| m.block_degree(block) == c)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.nvars {
            return Err(Error::VarIndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), &(c * &Coefficient::from_int(e as i64)));
        }
        Ok(out)
    }

    /// Substitutes `subs[j]` for the variable `z_j`. All substitutions must
    /// live in a common ring, which becomes the ring of the result.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        self.compose_truncated(subs, None)
    }

    pub fn compose_truncated(
        &self,
        subs: &[Polynomial],
        trunc: Option<&Truncation>,
    ) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let target = match subs.first() {
            Some(s) => s.nvars,
            // a polynomial in zero variables is a constant
            None => return Ok(self.clone()),
        };
        for s in subs {
            if s.nvars != target {
                return Err(Error::NvarsMismatch {
                    left: target,
                    right: s.nvars,
                });
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = subs
            .iter()
            .map(|_| vec![Polynomial::one(target)])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(c.clone(), target);
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e as usize {
                    let next = powers[j]
                        .last()
                        .unwrap()
                        .mul_truncated(&subs[j], trunc);
                    powers[j].push(next);
                }
                acc = acc.mul_truncated(&powers[j][e as usize], trunc);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, &cc);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point.
    pub fn eval(&self, point: &[Coefficient]) -> Result<Coefficient> {
        let subs: Vec<Polynomial> = point
            .iter()
            .map(|c| Polynomial::constant(c.clone(), 0))
            .collect();
        if subs.is_empty() {
            if self.nvars != 0 {
                return Err(Error::ArityMismatch {
                    expected: self.nvars,
                    got: 0,
                });
            }
            return Ok(self.constant_term());
        }
        Ok(self.compose(&subs)?.constant_term())
    }

    /// Moves into a ring with `nvars` variables, sending `z_i` to
    /// `z_{map[i]}`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Keeps the terms free of `z_m, z_{m+1}, …` and drops those variables
    /// from the ring, i.e. evaluates them at zero.
    pub fn restrict_to_leading(&self, m: usize) -> Polynomial {
        let mut out = Polynomial::zero(m);
        for (mono, c) in &self.terms {
            if mono.0[m.min(self.nvars)..].iter().all(|&e| e == 0) {
                let mut e = mono.0[..m.min(self.nvars)].to_vec();
                e.resize(m, 0);
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Views the polynomial in a larger ring, new variables appended.
    pub fn lift(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        let map: Vec<usize> = (0..self.nvars).collect();
        self.embed(nvars, &map)
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(divisor)?;
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quo = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(Error::InexactDivision);
            }
            let qm = m.div(&lm);
            let qc = c * &lc_inv;
            for (dm, dc) in &divisor.terms {
                rem.add_term(qm.mul(dm), &-(&qc * dc));
            }
            quo.add_term(qm, &qc);
        }
        Ok(quo)
    }

    /// Pretty form using the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect();
            let negative = c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into());
            let abs = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names("z", self.nvars)))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Coefficient::one())
    }
}

/// A vector of polynomials in a common ring, i.e. a map `K^nvars -> K^m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolySystem {
    nvars: usize,
    components: Vec<Polynomial>,
    degree_bound: u32,
}

impl PolySystem {
    /// A system whose degree bound is its actual degree.
    pub fn new(nvars: usize, components: Vec<Polynomial>) -> Result<Self> {
        for c in &components {
            if c.nvars != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: c.nvars,
                });
            }
        }
        let degree_bound = components.iter().map(Polynomial::degree).max().unwrap_or(0);
        Ok(PolySystem {
            nvars,
            components,
            degree_bound,
        })
    }

    pub fn with_degree_bound(mut self, d: u32) -> Result<Self> {
        let deg = self.degree();
        if deg > d {
            return Err(Error::DegreeBound {
                degree: deg,
                bound: d,
            });
        }
        self.degree_bound = d;
        Ok(self)
    }

    pub fn identity(n: usize) -> Self {
        PolySystem {
            nvars: n,
            components: (0..n).map(|i| Polynomial::var(i, n)).collect(),
            degree_bound: 1,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn is_square(&self) -> bool {
        self.components.len() == self.nvars
    }

    pub fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NonSquareSystem {
                components: self.components.len(),
                nvars: self.nvars,
            });
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .components
                .iter()
                .enumerate()
                .all(|(i, c)| *c == Polynomial::var(i, self.nvars))
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    pub fn compose(&self, inner: &PolySystem) -> Result<PolySystem> {
        if inner.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: inner.len(),
            });
        }
        let comps = self
            .components
            .iter()
            .map(|c| {
                if inner.is_empty() {
                    Ok(Polynomial::constant(c.constant_term(), inner.nvars))
                } else {
                    c.compose(&inner.components)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(inner.nvars, comps)
    }

    /// `F(0)` as a vector of constants.
    pub fn constant_part(&self) -> Vec<Coefficient> {
        self.components.iter().map(Polynomial::constant_term).collect()
    }

    pub fn checked_sub(&self, other: &PolySystem) -> Result<PolySystem> {
        if self.len() != other.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(self.nvars, comps)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        self.components
            .iter()
            .map(|c| c.display_with(names))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_with(&default_names("z", self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize, n: usize) -> Polynomial {
        Polynomial::var(i, n)
    }

    fn c(n: i64, nv: usize) -> Polynomial {
        Polynomial::constant(Coefficient::from_int(n), nv)
    }

    #[test]
    fn product_of_variables() {
        let p = &z(0, 2) * &z(1, 2);
        assert_eq!(p, Polynomial::term(Monomial::new(vec![1, 1]), Coefficient::one()));
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &(&z(0, 2) * &z(1, 2)) + &c(3, 2);
        let q = &p + &(-&p);
        assert!(q.is_zero());
        assert_eq!(q.num_terms(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let a = &z(0, 2) - &z(1, 2);
        let b = &z(0, 2) + &z(1, 2);
        let expect = &z(0, 2).pow(2) - &z(1, 2).pow(2);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn nvars_mismatch_is_an_error() {
        assert!(matches!(
            z(0, 1).checked_add(&z(0, 2)),
            Err(Error::NvarsMismatch { .. })
        ));
        assert!(z(0, 1).checked_mul(&z(0, 2)).is_err());
    }

    #[test]
    fn compose_examples() {
        // z1^2 at z1 + z2
        let p = z(0, 1).pow(2);
        let s = &z(0, 2) + &z(1, 2);
        let expect = &(&z(0, 2).pow(2) + &(&z(0, 2) * &z(1, 2)).scale(&2.into())) + &z(1, 2).pow(2);
        assert_eq!(p.compose(std::slice::from_ref(&s)).unwrap(), expect);
        // identity substitution
        assert_eq!(z(0, 1).compose(std::slice::from_ref(&s)).unwrap(), s);
        // z - z^3 at u + u^3
        let p = &z(0, 1) - &z(0, 1).pow(3);
        let u = z(0, 1);
        let sub = &u + &u.pow(3);
        let expect = &sub - &sub.pow(3);
        let got = p.compose(&[sub]).unwrap();
        assert_eq!(got, expect);
        // hand expansion: u + u^3 - (u^3 + 3u^5 + 3u^7 + u^9) = u - 3u^5 - 3u^7 - u^9
        let hand = Polynomial::from_terms(
            1,
            vec![
                (vec![1], 1.into()),
                (vec![5], (-3).into()),
                (vec![7], (-3).into()),
                (vec![9], (-1).into()),
            ],
        )
        .unwrap();
        assert_eq!(got, hand);
        assert!(matches!(
            p.compose(&[]),
            Err(Error::ArityMismatch { expected: 1, got: 0 })
        ));
    }

    #[test]
    fn derivative_examples() {
        let p = &z(0, 2).pow(2) * &z(1, 2);
        assert_eq!(
            p.partial_derivative(0).unwrap(),
            (&z(0, 2) * &z(1, 2)).scale(&2.into())
        );
        assert!(z(0, 2).pow(3).partial_derivative(1).unwrap().is_zero());
        let q = &z(0, 2) - &(&z(0, 2) * &z(1, 2).pow(2)).scale(&3.into());
        assert_eq!(
            q.partial_derivative(0).unwrap(),
            &c(1, 2) - &z(1, 2).pow(2).scale(&3.into())
        );
        assert!(matches!(
            q.partial_derivative(2),
            Err(Error::VarIndexOutOfRange { index: 2, nvars: 2 })
        ));
    }

    #[test]
    fn homogeneous_parts() {
        let p = &(&c(1, 2) + &z(0, 2)) + &(&z(0, 2) * &z(1, 2));
        assert_eq!(p.homogeneous_part(2), &z(0, 2) * &z(1, 2));
        assert!(z(0, 2).pow(3).homogeneous_part(2).is_zero());
        let sum = (0..=p.degree()).fold(Polynomial::zero(2), |acc, d| &acc + &p.homogeneous_part(d));
        assert_eq!(sum, p);
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
        let p = &(&z(0, 2).pow(2) + &z(1, 2)) + &c_one();
        assert_eq!(p.to_string(), "z1^2 + z2 + 1");
        fn c_one() -> Polynomial {
            Polynomial::one(2)
        }
    }

    #[test]
    fn exact_division() {
        let a = &z(0, 2) - &z(1, 2);
        let b = &(&z(0, 2) + &z(1, 2)) + &Polynomial::one(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(matches!(b.div_exact(&a), Err(Error::InexactDivision)));
        assert!(a.div_exact(&Polynomial::zero(2)).is_err());
    }

    #[test]
    fn from_terms_checks_length() {
        assert!(matches!(
            Polynomial::from_terms(2, vec![(vec![1], Coefficient::one())]),
            Err(Error::ExponentLength { got: 1, nvars: 2 })
        ));
    }

    #[test]
    fn system_composition() {
        let f = PolySystem::new(2, vec![&z(0, 2) - &z(1, 2).pow(2), z(1, 2)]).unwrap();
        let g = PolySystem::new(2, vec![&z(0, 2) + &z(1, 2).pow(2), z(1, 2)]).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().is_identity());
        assert!(f.clone().with_degree_bound(1).is_err());
        assert_eq!(f.with_degree_bound(3).unwrap().degree_bound(), 3);
    }
}
