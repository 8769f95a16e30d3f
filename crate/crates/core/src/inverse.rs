//! Inversion of polynomial maps in a block of variables, the remaining
//! variables acting as parameters.
//!
//! For components `F(x; p) = b(p) + A(p)·x + O(x²)` with `det A` a nonzero
//! constant, `A⁻¹ = adj(A)/det A` is polynomial in `p` and the normalized
//! map `A⁻¹(F - b) = x + Q(x; p)` is inverted by the fixed point
//! `G = y - Q(G)`, truncated in the block degree.

use std::ops::Range;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{Polynomial, Truncation};

/// The affine part of a map in a block of variables.
#[derive(Clone, Debug)]
pub struct AffineNormalization {
    pub block: Range<usize>,
    /// Block-degree-0 part `b(p)`.
    pub offset: Vec<Polynomial>,
    /// `A(p)`, entry `(i, j)` the coefficient of `x_j` in component `i`.
    pub linear: PolyMatrix,
    pub linear_inverse: PolyMatrix,
    pub det: Coefficient,
}

/// Jacobian determinant of `comps` with respect to the variables of
/// `block`.
pub fn block_jacobian_det(comps: &[Polynomial], block: &Range<usize>) -> Result<Polynomial> {
    let nvars = ambient(comps)?;
    if comps.len() != block.len() {
        return Err(Error::NonSquare {
            rows: block.len(),
            cols: comps.len(),
        });
    }
    let rows = block
        .clone()
        .map(|v| {
            comps
                .iter()
                .map(|c| c.partial_derivative(v))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Polynomial::one(nvars));
    }
    PolyMatrix::from_rows(rows)?.det()
}

fn ambient(comps: &[Polynomial]) -> Result<usize> {
    comps
        .first()
        .map(Polynomial::nvars)
        .ok_or_else(|| Error::Precondition("empty system".into()))
}

/// Extracts `b`, `A` and `A⁻¹`. Fails with the determinant when `det A`
/// is not a nonzero constant.
pub fn normalize_block(comps: &[Polynomial], block: Range<usize>) -> Result<AffineNormalization> {
    let nvars = ambient(comps)?;
    let m = block.len();
    if comps.len() != m {
        return Err(Error::NonSquare {
            rows: m,
            cols: comps.len(),
        });
    }
    let offset: Vec<Polynomial> = comps
        .iter()
        .map(|c| c.block_homogeneous_part(&block, 0))
        .collect();
    let mut linear = PolyMatrix::from_fn(m, m, |_, _| Polynomial::zero(nvars));
    for (i, c) in comps.iter().enumerate() {
        for (mono, coef) in c.block_homogeneous_part(&block, 1).terms() {
            let j = block
                .clone()
                .find(|&v| mono.exps()[v] == 1)
                .expect("block degree one");
            let mut e = mono.exps().to_vec();
            e[j] = 0;
            let t = Polynomial::term(crate::poly::Monomial::new(e), coef.clone());
            let cur = linear.get(i, j - block.start).clone();
            linear.set(i, j - block.start, &cur + &t);
        }
    }
    let det = linear.det()?;
    if !det.is_constant() || det.is_zero() {
        return Err(Error::SingularLinearPart(det.to_string()));
    }
    let det = det.constant_term();
    let inv_det = det.inv()?;
    let linear_inverse = linear
        .adjugate(&Polynomial::one(nvars))?
        .map(|p| p.scale(&inv_det));
    Ok(AffineNormalization {
        block,
        offset,
        linear,
        linear_inverse,
        det,
    })
}

impl AffineNormalization {
    /// `A⁻¹ · v`.
    pub fn apply_inverse(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        let m = v.len();
        (0..m)
            .map(|i| {
                (0..m).fold(Polynomial::zero(v[0].nvars()), |acc, j| {
                    &acc + &(self.linear_inverse.get(i, j) * &v[j])
                })
            })
            .collect()
    }

    /// `A⁻¹(F - b)`, of the form `x + O(x²)`.
    pub fn normalized(&self, comps: &[Polynomial]) -> Vec<Polynomial> {
        let shifted: Vec<Polynomial> = comps.iter().zip(&self.offset).map(|(c, b)| c - b).collect();
        self.apply_inverse(&shifted)
    }
}

/// Substitution vector replacing the block variables by `values` and
/// keeping every other variable.
pub fn block_substitution(nvars: usize, block: &Range<usize>, values: &[Polynomial]) -> Vec<Polynomial> {
    (0..nvars)
        .map(|v| {
            if block.contains(&v) {
                values[v - block.start].clone()
            } else {
                Polynomial::var(v, nvars)
            }
        })
        .collect()
}

/// Candidate inverse in the block, with block degree of the normalized
/// inverse capped at `cap`. The result is not certified; callers compose.
pub fn invert_in_block(comps: &[Polynomial], block: Range<usize>, cap: u32) -> Result<Vec<Polynomial>> {
    let nvars = ambient(comps)?;
    let norm = normalize_block(comps, block.clone())?;
    let normalized = norm.normalized(comps);
    let ys: Vec<Polynomial> = block.clone().map(|v| Polynomial::var(v, nvars)).collect();
    let q: Vec<Polynomial> = normalized.iter().zip(&ys).map(|(f, y)| f - y).collect();
    let trunc = Truncation {
        block: block.clone(),
        cap: cap.max(1),
    };
    let mut g = ys.clone();
    for _ in 0..cap.max(1) {
        let subs = block_substitution(nvars, &block, &g);
        let next: Vec<Polynomial> = q
            .iter()
            .zip(&ys)
            .map(|(qi, y)| Ok(y - &qi.compose_truncated(&subs, Some(&trunc))?.truncate(&trunc)))
            .collect::<Result<Vec<_>>>()?;
        if next == g {
            break;
        }
        g = next;
    }
    // undo the affine normalization: x = G(A⁻¹(y - b))
    let shifted: Vec<Polynomial> = ys.iter().zip(&norm.offset).map(|(y, b)| y - b).collect();
    let inner = norm.apply_inverse(&shifted);
    let subs = block_substitution(nvars, &block, &inner);
    g.iter().map(|gi| gi.compose(&subs)).collect()
}

/// `outer(inner)` in the block: block variables of `outer` receive the
/// components of `inner`, parameters stay.
pub fn compose_in_block(
    outer: &[Polynomial],
    inner: &[Polynomial],
    block: &Range<usize>,
) -> Result<Vec<Polynomial>> {
    let nvars = ambient(outer)?;
    let subs = block_substitution(nvars, block, inner);
    outer.iter().map(|p| p.compose(&subs)).collect()
}

/// True if `candidate` is a two-sided inverse of `comps` in the block.
pub fn is_block_inverse(comps: &[Polynomial], candidate: &[Polynomial], block: &Range<usize>) -> Result<bool> {
    let nvars = ambient(comps)?;
    let ids: Vec<Polynomial> = block.clone().map(|v| Polynomial::var(v, nvars)).collect();
    Ok(compose_in_block(comps, candidate, block)? == ids
        && compose_in_block(candidate, comps, block)? == ids)
}
