//! Partial elimination of the variables `z₂`.
//!
//! A square system `S` on `z = (z₁, z₂)` with `|z₁| = n1` is split into
//! `S₁` and `R(z₂; z₁) = S₂(z₁, z₂)`. When `R(·; z₁)` has a polynomial
//! inverse `R⁻¹(y₂; z₁)` for every value of `z₁`, the eliminated system is
//! `H(z₁; y₂) = S₁(z₁, R⁻¹(y₂; z₁))`.
//!
//! All of these live in one ring with `N` variables: the first `n1` are
//! `z₁` (or `y₁`), the remaining ones are `z₂` or `y₂` depending on the
//! object.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::inverse::{self, block_jacobian_det, block_substitution, normalize_block};
use crate::jacobian::{self, constant_determinant_verdict, MembershipVerdict, Verdict, Witness};
use crate::poly::{PolySystem, Polynomial};

#[derive(Clone, PartialEq, Debug)]
pub struct SplitSystem {
    pub system: PolySystem,
    pub n1: usize,
}

pub fn split(s: &PolySystem, n1: usize) -> Result<SplitSystem> {
    s.require_square()?;
    if n1 > s.nvars() {
        return Err(Error::SplitOutOfRange { n1, dim: s.nvars() });
    }
    Ok(SplitSystem { system: s.clone(), n1 })
}

impl SplitSystem {
    pub fn dim(&self) -> usize {
        self.system.nvars()
    }

    pub fn n2(&self) -> usize {
        self.dim() - self.n1
    }

    pub fn z1_block(&self) -> Range<usize> {
        0..self.n1
    }

    pub fn z2_block(&self) -> Range<usize> {
        self.n1..self.dim()
    }

    pub fn s1(&self) -> &[Polynomial] {
        &self.system.components()[..self.n1]
    }

    /// `R(z₂; z₁)`, the last `n2` components.
    pub fn r(&self) -> &[Polynomial] {
        &self.system.components()[self.n1..]
    }

    /// `det_{z₂} J_R`, a polynomial in `(z₁, z₂)`.
    pub fn r_jacobian_det(&self) -> Result<Polynomial> {
        if self.n2() == 0 {
            return Ok(Polynomial::one(self.dim()));
        }
        block_jacobian_det(self.r(), &self.z2_block())
    }

    fn ids(&self, block: Range<usize>) -> Vec<Polynomial> {
        block.map(|v| Polynomial::var(v, self.dim())).collect()
    }
}

/// `R⁻¹(y₂; z₁)` as `n2` polynomials in `(z₁, y₂)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PartialInverse {
    pub n1: usize,
    pub components: Vec<Polynomial>,
    /// Exact two-sided composition with `R` holds identically in `z₁`.
    pub certified: bool,
    /// Obtained from an affine `R` without series truncation.
    pub closed_form: bool,
}

/// Inverts `R(·; z₁)`. An affine `R` is inverted in closed form; otherwise
/// the fixed-point series with polynomial coefficients in `z₁` is truncated
/// at block degree `cap` (default `deg(R)^(n2-1)`) and certified by
/// composition. Fails with the determinant when `det_{z₂} J_R` is not a
/// nonzero constant, since then some `R(·; z₁)` is not invertible.
pub fn invert_r(split: &SplitSystem, cap: Option<u32>) -> Result<PartialInverse> {
    let n1 = split.n1;
    if split.n2() == 0 {
        return Ok(PartialInverse {
            n1,
            components: Vec::new(),
            certified: true,
            closed_form: true,
        });
    }
    let det = split.r_jacobian_det()?;
    if !det.is_constant() || det.is_zero() {
        return Err(Error::SingularLinearPart(det.to_string()));
    }
    let block = split.z2_block();
    let r = split.r();
    let affine = r.iter().all(|c| c.block_degree(&block) <= 1);
    let components = if affine {
        let norm = normalize_block(r, block.clone())?;
        let shifted: Vec<Polynomial> = split
            .ids(block.clone())
            .iter()
            .zip(&norm.offset)
            .map(|(y, b)| y - b)
            .collect();
        norm.apply_inverse(&shifted)
    } else {
        let deg = r.iter().map(|c| c.block_degree(&block)).max().unwrap_or(1);
        let bound = deg.saturating_pow(split.n2() as u32 - 1);
        inverse::invert_in_block(r, block.clone(), cap.unwrap_or(bound))?
    };
    let certified = inverse::is_block_inverse(r, &components, &block)?;
    Ok(PartialInverse {
        n1,
        components,
        certified,
        closed_form: affine,
    })
}

impl PartialInverse {
    /// `R⁻¹(0; z₁)`.
    pub fn at_zero(&self) -> Result<Vec<Polynomial>> {
        let Some(first) = self.components.first() else {
            return Ok(Vec::new());
        };
        let nv = first.nvars();
        let subs: Vec<Polynomial> = (0..nv)
            .map(|v| {
                if v < self.n1 {
                    Polynomial::var(v, nv)
                } else {
                    Polynomial::zero(nv)
                }
            })
            .collect();
        self.components.iter().map(|c| c.compose(&subs)).collect()
    }
}

fn require_certified(rinv: &PartialInverse) -> Result<()> {
    if !rinv.certified {
        return Err(Error::Uncertified);
    }
    Ok(())
}

/// `H(z₁; y₂) = S₁(z₁, R⁻¹(y₂; z₁))`.
pub fn build_h(split: &SplitSystem, rinv: &PartialInverse) -> Result<Vec<Polynomial>> {
    require_certified(rinv)?;
    let subs = block_substitution(split.dim(), &split.z2_block(), &rinv.components);
    split.s1().iter().map(|c| c.compose(&subs)).collect()
}

/// `H(·; 0)` as a system in the `n1` variables `z₁`.
pub fn restricted_h(split: &SplitSystem, rinv: &PartialInverse) -> Result<PolySystem> {
    let h = build_h(split, rinv)?;
    let n1 = split.n1;
    PolySystem::new(n1, h.iter().map(|p| p.restrict_to_leading(n1)).collect())
}

/// The point `(z₁, R⁻¹(0; z₁))` of the variety `S₂ = 0`, as a substitution.
fn variety_substitution(split: &SplitSystem, rinv: &PartialInverse) -> Result<Vec<Polynomial>> {
    Ok(block_substitution(split.dim(), &split.z2_block(), &rinv.at_zero()?))
}

/// `det J_S` on the variety `(z₁, R⁻¹(0; z₁))`, in the ring of `S`.
pub fn det_on_variety(split: &SplitSystem, rinv: &PartialInverse) -> Result<Polynomial> {
    require_certified(rinv)?;
    let subs = variety_substitution(split, rinv)?;
    det_composed(&split.system, &subs)
}

/// `det J_S(subs)`, composing the entries before taking the determinant.
fn det_composed(s: &PolySystem, subs: &[Polynomial]) -> Result<Polynomial> {
    let j = jacobian::jacobian_matrix(s)?;
    if j.rows() == 0 {
        return Ok(Polynomial::one(s.nvars()));
    }
    j.compose(subs)?.det()
}

#[derive(Clone, PartialEq, Debug)]
pub struct SchurReport {
    pub holds: bool,
    /// `det J_S(z₁, R⁻¹(y₂; z₁))`.
    pub lhs: Polynomial,
    /// `det J_R(·; z₁)` at `R⁻¹(y₂; z₁)` times `det J_H(·; y₂)(z₁)`.
    pub rhs: Polynomial,
}

impl SchurReport {
    pub fn difference(&self) -> Polynomial {
        &self.lhs - &self.rhs
    }
}

/// Checks the block determinant identity
/// `det J_S(z₁, R⁻¹(y₂; z₁)) = det J_R(R⁻¹(y₂; z₁); z₁) · det J_H(z₁; y₂)`
/// as a polynomial identity in `(z₁, y₂)`.
pub fn schur_identity_check(split: &SplitSystem, rinv: &PartialInverse) -> Result<SchurReport> {
    require_certified(rinv)?;
    let n = split.dim();
    let subs = block_substitution(n, &split.z2_block(), &rinv.components);
    let lhs = det_composed(&split.system, &subs)?;
    let det_r = split.r_jacobian_det()?.compose(&subs)?;
    let h = build_h(split, rinv)?;
    let det_h = if split.n1 == 0 {
        Polynomial::one(n)
    } else {
        block_jacobian_det(&h, &split.z1_block())?
    };
    let rhs = &det_r * &det_h;
    Ok(SchurReport {
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Outcome of the `R` stage shared by both classifiers.
enum RStage {
    Ready(PartialInverse),
    Rejected(MembershipVerdict),
}

fn r_stage(split: &SplitSystem, cap: Option<u32>) -> Result<RStage> {
    let det = split.r_jacobian_det()?;
    if !det.is_constant() || det.is_zero() {
        return Ok(RStage::Rejected(MembershipVerdict::new(
            Verdict::NonMember,
            Some(Witness::Determinant(det)),
            "det J_R(·; z₁) is not a nonzero constant, so R(·; z₁) is not invertible for every z₁",
        )));
    }
    let rinv = invert_r(split, cap)?;
    if !rinv.certified {
        return Ok(RStage::Rejected(MembershipVerdict::new(
            Verdict::Undetermined,
            None,
            "no certified polynomial inverse of R(·; z₁) within the degree cap",
        )));
    }
    Ok(RStage::Ready(rinv))
}

/// `R(·; z₁)` has a constant Jacobian determinant and a polynomial inverse
/// for every `z₁`, and `det J_F` is a nonzero constant on
/// `(z₁, R⁻¹(0; z₁))`.
pub fn is_jlin_partial(f: &PolySystem, n1: usize) -> Result<MembershipVerdict> {
    let s = split(f, n1)?;
    let rinv = match r_stage(&s, None)? {
        RStage::Ready(r) => r,
        RStage::Rejected(v) => return Ok(v),
    };
    Ok(constant_determinant_verdict(
        det_on_variety(&s, &rinv)?,
        "det J_F(z₁, R⁻¹(0; z₁))",
    ))
}

/// `R(·; z₁)` is invertible for every `z₁` and `H(·; 0)` has a polynomial
/// inverse, which is the restriction `y₁ ↦ (F⁻¹)₁(y₁, 0)`.
pub fn is_j_partial(f: &PolySystem, n1: usize, degree_cap: Option<u32>) -> Result<MembershipVerdict> {
    let s = split(f, n1)?;
    let rinv = match r_stage(&s, None)? {
        RStage::Ready(r) => r,
        RStage::Rejected(v) => return Ok(v),
    };
    let h0 = restricted_h(&s, &rinv)?;
    if n1 == 0 {
        return Ok(MembershipVerdict::new(
            Verdict::Member,
            Some(Witness::Inverse(h0)),
            "nothing left after eliminating every variable",
        ));
    }
    let mut v = jacobian::certify_polynomial_inverse(&h0, degree_cap)?;
    v.detail = format!("H(·; 0): {}", v.detail);
    Ok(v)
}

/// Inverts `H(·; y₂)` in `z₁` with `y₂` as parameters. Requires the linear
/// part of `H` in `z₁` to have constant nonzero determinant.
pub fn invert_h(split: &SplitSystem, rinv: &PartialInverse, cap: u32) -> Result<Vec<Polynomial>> {
    let h = build_h(split, rinv)?;
    if split.n1 == 0 {
        return Ok(Vec::new());
    }
    let hinv = inverse::invert_in_block(&h, split.z1_block(), cap)?;
    if !inverse::is_block_inverse(&h, &hinv, &split.z1_block())? {
        return Err(Error::CertificationFailed("H(·; y₂)⁻¹".into()));
    }
    Ok(hinv)
}

/// `S⁻¹ = (H⁻¹(y₁; y₂), R⁻¹(y₂; H⁻¹(y₁; y₂)))`, certified both ways.
pub fn assemble_inverse(split: &SplitSystem, hinv: &[Polynomial], rinv: &PartialInverse) -> Result<PolySystem> {
    require_certified(rinv)?;
    let n = split.dim();
    let subs = block_substitution(n, &split.z1_block(), hinv);
    let mut comps = hinv.to_vec();
    for c in &rinv.components {
        comps.push(c.compose(&subs)?);
    }
    let inv = PolySystem::new(n, comps)?;
    let left = split.system.compose(&inv)?;
    let right = inv.compose(&split.system)?;
    if !left.is_identity() {
        return Err(Error::CertificationFailed(format!("S∘S⁻¹ = {left}")));
    }
    if !right.is_identity() {
        return Err(Error::CertificationFailed(format!("S⁻¹∘S = {right}")));
    }
    Ok(inv)
}

/// Restriction of `S⁻¹` to the slice `y₂ = 0`:
/// `y₁ ↦ (H⁻¹(y₁; 0), R⁻¹(0; H⁻¹(y₁; 0)))`, given `H⁻¹(·; 0)` in `n1`
/// variables. Certified by `S(slice(y₁)) = (y₁, 0)` and
/// `slice(H(z₁; 0)) = (z₁, R⁻¹(0; z₁))`.
pub fn assemble_slice_inverse(split: &SplitSystem, hinv0: &PolySystem, rinv: &PartialInverse) -> Result<PolySystem> {
    require_certified(rinv)?;
    let n = split.dim();
    let n1 = split.n1;
    if hinv0.nvars() != n1 || hinv0.len() != n1 {
        return Err(Error::ArityMismatch {
            expected: n1,
            got: hinv0.len(),
        });
    }
    // R⁻¹(0; z₁) written in n1 variables, then evaluated at H⁻¹(y₁; 0)
    let r0: Vec<Polynomial> = rinv
        .at_zero()?
        .iter()
        .map(|c| c.restrict_to_leading(n1))
        .collect();
    let mut comps = hinv0.components().to_vec();
    for c in &r0 {
        comps.push(if n1 == 0 { c.clone() } else { c.compose(hinv0.components())? });
    }
    let slice = PolySystem::new(n1, comps)?;

    let image = split.system.compose(&slice)?;
    let expect: Vec<Polynomial> = (0..n)
        .map(|i| if i < n1 { Polynomial::var(i, n1) } else { Polynomial::zero(n1) })
        .collect();
    if image.components() != expect.as_slice() {
        return Err(Error::CertificationFailed(format!("S(slice) = {image}")));
    }
    let h0 = restricted_h(split, rinv)?;
    let back = slice.compose(&h0)?;
    let mut on_variety: Vec<Polynomial> = (0..n1).map(|i| Polynomial::var(i, n1)).collect();
    on_variety.extend(r0);
    if back.components() != on_variety.as_slice() {
        return Err(Error::CertificationFailed(format!("slice(H(·; 0)) = {back}")));
    }
    Ok(slice)
}

/// Reads `H⁻¹(y₁; y₂) = (S⁻¹)₁(y₁, y₂)` off a known inverse of `S`.
pub fn h_inverse_from_full(split: &SplitSystem, sinv: &PolySystem) -> Vec<Polynomial> {
    sinv.components()[..split.n1].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coefficient;
    use crate::reduction::{phi, Variant};

    fn z(i: usize, n: usize) -> Polynomial {
        Polynomial::var(i, n)
    }

    fn sys(n: usize, comps: Vec<Polynomial>) -> PolySystem {
        PolySystem::new(n, comps).unwrap()
    }

    #[test]
    fn split_blocks() {
        let s = sys(2, vec![&z(0, 2) + &z(1, 2), &z(1, 2) - &z(0, 2).pow(3)]);
        let sp = split(&s, 1).unwrap();
        assert_eq!(sp.r(), &[&z(1, 2) - &z(0, 2).pow(3)]);
        assert!(split(&s, 2).unwrap().r().is_empty());
        assert_eq!(split(&s, 0).unwrap().r(), s.components());
        assert!(split(&s, 3).is_err());
    }

    #[test]
    fn affine_r_closed_form() {
        // R = z2 - a z1^d has R⁻¹ = y2 + a z1^d
        let a = Coefficient::ratio(3, 2);
        let s = sys(2, vec![z(0, 2), &z(1, 2) - &z(0, 2).pow(4).scale(&a)]);
        let rinv = invert_r(&split(&s, 1).unwrap(), None).unwrap();
        assert!(rinv.certified && rinv.closed_form);
        assert_eq!(rinv.components, vec![&z(1, 2) + &z(0, 2).pow(4).scale(&a)]);
    }

    #[test]
    fn identity_r() {
        let rinv = invert_r(&split(&PolySystem::identity(2), 1).unwrap(), None).unwrap();
        assert_eq!(rinv.components, vec![z(1, 2)]);
    }

    #[test]
    fn r_singular_for_some_parameter() {
        // R = z2 - a z1^(d-1) z2 with d = 3
        let s = sys(2, vec![z(0, 2), &z(1, 2) - &(&z(0, 2).pow(2) * &z(1, 2))]);
        let sp = split(&s, 1).unwrap();
        assert!(matches!(invert_r(&sp, None), Err(Error::SingularLinearPart(_))));
        let v = is_jlin_partial(&s, 1).unwrap();
        assert_eq!(v.verdict, Verdict::NonMember);
        assert!(matches!(v.witness, Some(Witness::Determinant(_))));
    }

    #[test]
    fn nonlinear_r_series() {
        // R = (z2 - z3^2 z1, z3) in z2, z3 with parameter z1
        let n = 3;
        let s = sys(n, vec![z(0, n), &z(1, n) - &(&z(2, n).pow(2) * &z(0, n)), z(2, n)]);
        let rinv = invert_r(&split(&s, 1).unwrap(), None).unwrap();
        assert!(rinv.certified && !rinv.closed_form);
        assert_eq!(rinv.components[0], &z(1, n) + &(&z(2, n).pow(2) * &z(0, n)));
    }

    #[test]
    fn h_of_linear_split() {
        let s = sys(2, vec![&z(0, 2) + &z(1, 2), z(1, 2)]);
        let sp = split(&s, 1).unwrap();
        let rinv = invert_r(&sp, None).unwrap();
        assert_eq!(build_h(&sp, &rinv).unwrap(), vec![&z(0, 2) + &z(1, 2)]);
        assert!(schur_identity_check(&sp, &rinv).unwrap().holds);
    }

    #[test]
    fn h_recovers_source_from_phi_images() {
        let f = sys(1, vec![&z(0, 1) - &z(0, 1).pow(3).scale(&4.into())]);
        for v in [Variant::Algebraic, Variant::Qft] {
            let img = phi(&f, v).unwrap();
            let sp = img.split().unwrap();
            let rinv = invert_r(&sp, None).unwrap();
            assert_eq!(restricted_h(&sp, &rinv).unwrap().components(), f.components());
            let report = schur_identity_check(&sp, &rinv).unwrap();
            assert!(report.holds, "{v}: {:?}", report.difference());
        }
    }

    #[test]
    fn triangular_full_inverse() {
        // S = (z1 + z2^2, z2), S⁻¹ = (y1 - y2^2, y2)
        let s = sys(2, vec![&z(0, 2) + &z(1, 2).pow(2), z(1, 2)]);
        let sp = split(&s, 1).unwrap();
        let rinv = invert_r(&sp, None).unwrap();
        let hinv = invert_h(&sp, &rinv, 2).unwrap();
        let inv = assemble_inverse(&sp, &hinv, &rinv).unwrap();
        assert_eq!(inv.components(), &[&z(0, 2) - &z(1, 2).pow(2), z(1, 2)]);
        assert_eq!(h_inverse_from_full(&sp, &inv), hinv);
    }

    #[test]
    fn identity_inverse_assembly() {
        let sp = split(&PolySystem::identity(3), 2).unwrap();
        let rinv = invert_r(&sp, None).unwrap();
        let hinv = invert_h(&sp, &rinv, 1).unwrap();
        assert!(assemble_inverse(&sp, &hinv, &rinv).unwrap().is_identity());
    }

    #[test]
    fn slice_inverse_of_phi_image() {
        let f = sys(2, vec![&z(0, 2) - &z(1, 2).pow(2), z(1, 2)]).with_degree_bound(3).unwrap();
        let img = phi(&f, Variant::Algebraic).unwrap();
        let sp = img.split().unwrap();
        let rinv = invert_r(&sp, None).unwrap();
        let v = is_j_partial(&img.system, 2, None).unwrap();
        assert_eq!(v.verdict, Verdict::Member);
        let slice = assemble_slice_inverse(&sp, v.inverse().unwrap(), &rinv).unwrap();
        assert_eq!(slice.len(), 6);
    }

    #[test]
    fn phi_image_of_catalan_map_is_not_partially_invertible() {
        let f = sys(1, vec![&z(0, 1) - &z(0, 1).pow(2)]).with_degree_bound(3).unwrap();
        let img = phi(&f, Variant::Algebraic).unwrap();
        assert_eq!(is_j_partial(&img.system, 1, None).unwrap().verdict, Verdict::NonMember);
        assert_eq!(is_jlin_partial(&img.system, 1).unwrap().verdict, Verdict::NonMember);
    }

    #[test]
    fn boundaries() {
        let f = sys(2, vec![&z(0, 2) - &z(1, 2).pow(3), z(1, 2)]);
        assert_eq!(is_jlin_partial(&f, 2).unwrap().verdict, jacobian::is_jlin(&f).unwrap().verdict);
        assert_eq!(is_j_partial(&f, 2, None).unwrap().verdict, Verdict::Member);
        // n1 = 0: R = S must be invertible, H is empty
        assert_eq!(is_j_partial(&f, 0, None).unwrap().verdict, Verdict::Member);
        assert_eq!(is_jlin_partial(&f, 0).unwrap().verdict, Verdict::Member);
        let g = sys(2, vec![z(0, 2).pow(2), z(1, 2)]);
        assert_eq!(is_jlin_partial(&g, 0).unwrap().verdict, Verdict::NonMember);
    }
}
