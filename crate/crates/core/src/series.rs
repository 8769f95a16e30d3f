//! Truncated power series in the bookkeeping variable θ whose coefficients
//! are polynomials in the source variables `u`.
//!
//! A series of order `N` stores grades `0..=N`; products drop every grade
//! above the smaller order of the two factors.

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::matrix::Ring;
use crate::poly::Polynomial;

#[derive(Clone, PartialEq, Debug)]
pub struct GradedSeries {
    nvars: usize,
    grades: Vec<Polynomial>,
}

impl GradedSeries {
    pub fn zero(nvars: usize, order: usize) -> Self {
        GradedSeries {
            nvars,
            grades: vec![Polynomial::zero(nvars); order + 1],
        }
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::from_grade(Polynomial::one(nvars), 0, order)
    }

    /// The series `θ^grade · p` (zero if `grade > order`).
    pub fn from_grade(p: Polynomial, grade: usize, order: usize) -> Self {
        let mut s = Self::zero(p.nvars(), order);
        if grade <= order {
            s.grades[grade] = p;
        }
        s
    }

    pub fn from_grades(nvars: usize, grades: Vec<Polynomial>) -> Result<Self> {
        if grades.is_empty() {
            return Err(Error::Precondition("a series needs at least grade 0".into()));
        }
        if let Some(p) = grades.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::NvarsMismatch {
                left: nvars,
                right: p.nvars(),
            });
        }
        Ok(GradedSeries { nvars, grades })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, r: usize) -> &Polynomial {
        &self.grades[r]
    }

    pub fn grades(&self) -> &[Polynomial] {
        &self.grades
    }

    pub fn is_zero(&self) -> bool {
        self.grades.iter().all(Polynomial::is_zero)
    }

    pub fn first_nonzero_grade(&self) -> Option<usize> {
        self.grades.iter().position(|p| !p.is_zero())
    }

    /// Restricts to grades `0..=order`.
    pub fn truncate(&self, order: usize) -> Self {
        GradedSeries {
            nvars: self.nvars,
            grades: self.grades[..=order.min(self.order())].to_vec(),
        }
    }

    /// Sum of all stored grades, forgetting θ.
    pub fn sum(&self) -> Polynomial {
        self.grades
            .iter()
            .fold(Polynomial::zero(self.nvars), |acc, p| &acc + p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        GradedSeries {
            nvars: self.nvars,
            grades: (0..=order).map(|r| &self.grades[r] + &other.grades[r]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        GradedSeries {
            nvars: self.nvars,
            grades: (0..=order).map(|r| &self.grades[r] - &other.grades[r]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(self.nvars, order);
        for (a, pa) in self.grades.iter().enumerate().take(order + 1) {
            if pa.is_zero() {
                continue;
            }
            for (b, pb) in other.grades.iter().enumerate().take(order + 1 - a) {
                if pb.is_zero() {
                    continue;
                }
                out.grades[a + b] = &out.grades[a + b] + &(pa * pb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        GradedSeries {
            nvars: self.nvars,
            grades: self.grades.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplies by `θ^s`, keeping the order.
    pub fn shift(&self, s: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(self.nvars, order);
        for r in 0..=order {
            if r + s <= order {
                out.grades[r + s] = self.grades[r].clone();
            }
        }
        out
    }

    /// `exp` of a series with vanishing grade 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.grades[0].is_zero() {
            return Err(Error::Precondition(
                "exp needs a series without constant grade".into(),
            ));
        }
        let order = self.order();
        let mut out = Self::one(self.nvars, order);
        let mut power = Self::one(self.nvars, order);
        for m in 1..=order {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&Coefficient::ratio(1, factorial(m))));
        }
        Ok(out)
    }

    /// Applies a substitution of the `u` variables grade by grade.
    pub fn compose_grades(&self, subs: &[Polynomial]) -> Result<Self> {
        let grades = self
            .grades
            .iter()
            .map(|p| p.compose(subs))
            .collect::<Result<Vec<_>>>()?;
        let nvars = subs.first().map_or(self.nvars, Polynomial::nvars);
        Ok(GradedSeries { nvars, grades })
    }
}

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product()
}

impl Ring for GradedSeries {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.order())
    }
    fn one_like(&self) -> Self {
        Self::one(self.nvars, self.order())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// A vector of graded series sharing the source ring and the order; stored
/// grade-major, `grades[r][i]` being the θ^r coefficient of component `i`.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedSeriesVector {
    nvars: usize,
    dim: usize,
    grades: Vec<Vec<Polynomial>>,
}

impl GradedSeriesVector {
    pub fn from_components(nvars: usize, comps: &[GradedSeries]) -> Result<Self> {
        let order = comps.iter().map(GradedSeries::order).min().unwrap_or(0);
        if let Some(c) = comps.iter().find(|c| c.nvars != nvars) {
            return Err(Error::NvarsMismatch {
                left: nvars,
                right: c.nvars,
            });
        }
        let grades = (0..=order)
            .map(|r| comps.iter().map(|c| c.grades[r].clone()).collect())
            .collect();
        Ok(GradedSeriesVector {
            nvars,
            dim: comps.len(),
            grades,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, r: usize) -> &[Polynomial] {
        &self.grades[r]
    }

    pub fn component(&self, i: usize) -> GradedSeries {
        GradedSeries {
            nvars: self.nvars,
            grades: self.grades.iter().map(|g| g[i].clone()).collect(),
        }
    }

    pub fn components(&self) -> Vec<GradedSeries> {
        (0..self.dim).map(|i| self.component(i)).collect()
    }

    /// Component-wise sum over the grades, i.e. the truncated series at θ = 1.
    pub fn sum(&self) -> Vec<Polynomial> {
        self.components().iter().map(GradedSeries::sum).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        GradedSeriesVector {
            nvars: self.nvars,
            dim: self.dim,
            grades: self.grades[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.grades.iter().flatten().all(Polynomial::is_zero)
    }

    /// Lowest grade holding a nonzero entry.
    pub fn first_nonzero_grade(&self) -> Option<usize> {
        self.grades
            .iter()
            .position(|g| g.iter().any(|p| !p.is_zero()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ArityMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let order = self.order().min(other.order());
        Ok(GradedSeriesVector {
            nvars: self.nvars,
            dim: self.dim,
            grades: (0..=order)
                .map(|r| {
                    self.grades[r]
                        .iter()
                        .zip(&other.grades[r])
                        .map(|(a, b)| a.checked_sub(b))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

/// Evaluates `p` at a vector of graded series, truncating at `order`.
pub fn evaluate(p: &Polynomial, args: &[GradedSeries], order: usize) -> Result<GradedSeries> {
    if args.len() != p.nvars() {
        return Err(Error::ArityMismatch {
            expected: p.nvars(),
            got: args.len(),
        });
    }
    let nvars = match args.first() {
        Some(a) => a.nvars,
        None => return Ok(GradedSeries::from_grade(Polynomial::constant(p.constant_term(), 0), 0, order)),
    };
    let args: Vec<GradedSeries> = args.iter().map(|a| a.truncate(order)).collect();
    let mut powers: Vec<Vec<GradedSeries>> = args
        .iter()
        .map(|_| vec![GradedSeries::one(nvars, order)])
        .collect();
    let mut out = GradedSeries::zero(nvars, order);
    for (m, c) in p.terms() {
        let mut acc = GradedSeries::from_grade(Polynomial::constant(c.clone(), nvars), 0, order);
        for (j, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[j].len() <= e as usize {
                let next = powers[j].last().unwrap().mul(&args[j]);
                powers[j].push(next);
            }
            acc = acc.mul(&powers[j][e as usize]);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Polynomial {
        Polynomial::var(0, 1)
    }

    #[test]
    fn truncated_product_drops_high_grades() {
        let a = GradedSeries::from_grades(1, vec![Polynomial::one(1), u()]).unwrap();
        let sq = a.mul(&a);
        assert_eq!(sq.order(), 1);
        assert_eq!(sq.grade(1), &u().scale(&2.into()));
    }

    #[test]
    fn exp_of_nilpotent_part() {
        // exp(θ u) through order 3
        let x = GradedSeries::from_grade(u(), 1, 3);
        let e = x.exp().unwrap();
        assert_eq!(e.grade(0), &Polynomial::one(1));
        assert_eq!(e.grade(2), &u().pow(2).scale(&Coefficient::ratio(1, 2)));
        assert_eq!(e.grade(3), &u().pow(3).scale(&Coefficient::ratio(1, 6)));
        assert!(GradedSeries::one(1, 2).exp().is_err());
    }

    #[test]
    fn shift_and_evaluate() {
        let x = GradedSeries::from_grade(u(), 0, 3);
        let s = x.shift(2);
        assert_eq!(s.first_nonzero_grade(), Some(2));
        // (z^2) at u + θu^2
        let g = GradedSeries::from_grades(1, vec![u(), u().pow(2), Polynomial::zero(1)]).unwrap();
        let v = evaluate(&Polynomial::var(0, 1).pow(2), &[g], 2).unwrap();
        assert_eq!(v.grade(0), &u().pow(2));
        assert_eq!(v.grade(1), &u().pow(3).scale(&2.into()));
        assert_eq!(v.grade(2), &u().pow(4));
    }
}
