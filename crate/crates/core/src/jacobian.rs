//! Jacobian matrices and the membership predicates for constant Jacobian
//! determinant and for polynomial invertibility.
//!
//! Index convention: entry `(i, j)` of `J_F` is `∂F_j/∂z_i`.

use std::fmt;

use crate::coeff::Coefficient;
use crate::coupling::CouplingTensor;
use crate::error::Result;
use crate::inverse::normalize_block;
use crate::matrix::PolyMatrix;
use crate::poly::{PolySystem, Polynomial};
use crate::qft;

pub fn jacobian_matrix(f: &PolySystem) -> Result<PolyMatrix> {
    f.require_square()?;
    let n = f.nvars();
    let rows = (0..n)
        .map(|i| {
            f.components()
                .iter()
                .map(|c| c.partial_derivative(i))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if n == 0 {
        return Ok(PolyMatrix::from_fn(0, 0, |_, _| Polynomial::zero(0)));
    }
    PolyMatrix::from_rows(rows)
}

pub fn det_jacobian(f: &PolySystem) -> Result<Polynomial> {
    if f.nvars() == 0 {
        f.require_square()?;
        return Ok(Polynomial::one(0));
    }
    jacobian_matrix(f)?.det()
}

/// `F - F(0)`.
pub fn drop_degree_zero(f: &PolySystem) -> Result<PolySystem> {
    let n = f.nvars();
    let comps = f
        .components()
        .iter()
        .map(|c| c - &Polynomial::constant(c.constant_term(), n))
        .collect();
    PolySystem::new(n, comps)?.with_degree_bound(f.degree_bound())
}

pub fn extract_couplings(f: &PolySystem) -> Result<CouplingTensor> {
    CouplingTensor::from_system(f)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Member,
    NonMember,
    Undetermined,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non_member",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Witness {
    /// The nonzero constant value of a determinant.
    Constant(Coefficient),
    /// A determinant that is not a nonzero constant.
    Determinant(Polynomial),
    /// An explicit inverse, certified by composition.
    Inverse(PolySystem),
    /// `F∘G - id` for a failed candidate `G`.
    Residual(Vec<Polynomial>),
}

#[derive(Clone, PartialEq, Debug)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub detail: String,
    /// Degree cap used by an inverse search, with the bound it was compared
    /// against.
    pub degree_cap: Option<u32>,
    pub degree_bound: Option<u32>,
}

impl MembershipVerdict {
    pub fn new(verdict: Verdict, witness: Option<Witness>, detail: impl Into<String>) -> Self {
        MembershipVerdict {
            verdict,
            witness,
            detail: detail.into(),
            degree_cap: None,
            degree_bound: None,
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    pub fn constant(&self) -> Option<&Coefficient> {
        match &self.witness {
            Some(Witness::Constant(c)) => Some(c),
            _ => None,
        }
    }

    /// A single non-constant term of a determinant witness.
    pub fn offending_term(&self) -> Option<Polynomial> {
        match &self.witness {
            Some(Witness::Determinant(d)) => d.nonconstant_witness().or_else(|| Some(d.clone())),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Option<&PolySystem> {
        match &self.witness {
            Some(Witness::Inverse(g)) => Some(g),
            _ => None,
        }
    }
}

/// Verdict on a determinant: member iff it is a nonzero constant.
pub fn constant_determinant_verdict(det: Polynomial, what: &str) -> MembershipVerdict {
    if det.is_constant() && !det.is_zero() {
        let c = det.constant_term();
        MembershipVerdict::new(Verdict::Member, Some(Witness::Constant(c.clone())), format!("{what} = {c}"))
    } else {
        let detail = format!("{what} is not a nonzero constant");
        MembershipVerdict::new(Verdict::NonMember, Some(Witness::Determinant(det)), detail)
    }
}

/// `det J_F` is a nonzero constant.
pub fn is_jlin(f: &PolySystem) -> Result<MembershipVerdict> {
    Ok(constant_determinant_verdict(det_jacobian(f)?, "det J_F"))
}

/// Degree bound `d^(n-1)` for a polynomial inverse of a degree-`d` map in
/// `n` variables.
pub fn inverse_degree_bound(f: &PolySystem) -> u32 {
    let d = f.degree().max(1);
    let e = f.nvars().saturating_sub(1) as u32;
    d.saturating_pow(e)
}

/// Searches for a polynomial inverse of degree at most `cap` (default: the
/// degree bound). The candidate comes from the θ-graded formal inverse of
/// the normalized map and is kept only after exact two-sided composition.
/// Failure is reported as non-member when `cap` reaches the degree bound and
/// undetermined below it.
pub fn certify_polynomial_inverse(f: &PolySystem, degree_cap: Option<u32>) -> Result<MembershipVerdict> {
    let lin = is_jlin(f)?;
    let bound = inverse_degree_bound(f);
    let cap = degree_cap.unwrap_or(bound).max(1);
    let finish = |mut v: MembershipVerdict| {
        v.degree_cap = Some(cap);
        v.degree_bound = Some(bound);
        v
    };
    if !lin.is_member() {
        let mut v = lin;
        v.detail = format!("{}; no polynomial inverse exists", v.detail);
        return Ok(finish(v));
    }
    let n = f.nvars();
    if n == 0 {
        return Ok(finish(MembershipVerdict::new(
            Verdict::Member,
            Some(Witness::Inverse(f.clone())),
            "empty system",
        )));
    }
    // F = b + A z + Q(z) with constant invertible A
    let norm = normalize_block(f.components(), 0..n)?;
    let normalized = PolySystem::new(n, norm.normalized(f.components()))?;
    let w = CouplingTensor::from_system(&normalized)?;
    let g = qft::formal_inverse_fixed_point(&w, cap as usize - 1)?.sum();
    let ys: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(i, n)).collect();
    let shifted: Vec<Polynomial> = ys.iter().zip(&norm.offset).map(|(y, b)| y - b).collect();
    let inner = norm.apply_inverse(&shifted);
    let candidate = PolySystem::new(
        n,
        g.iter().map(|gi| gi.compose(&inner)).collect::<Result<Vec<_>>>()?,
    )?;
    let left = f.compose(&candidate)?;
    let right = candidate.compose(f)?;
    if left.is_identity() && right.is_identity() {
        return Ok(finish(MembershipVerdict::new(
            Verdict::Member,
            Some(Witness::Inverse(candidate)),
            "F∘G = G∘F = id",
        )));
    }
    let residual: Vec<Polynomial> = left
        .components()
        .iter()
        .zip(&ys)
        .map(|(c, y)| c - y)
        .collect();
    let residual = if residual.iter().all(Polynomial::is_zero) {
        right.components().iter().zip(&ys).map(|(c, y)| c - y).collect()
    } else {
        residual
    };
    let v = if cap >= bound {
        MembershipVerdict::new(
            Verdict::NonMember,
            Some(Witness::Residual(residual)),
            format!("no inverse of degree ≤ {cap}, which reaches the bound {bound}"),
        )
    } else {
        MembershipVerdict::new(
            Verdict::Undetermined,
            Some(Witness::Residual(residual)),
            format!("no inverse of degree ≤ {cap}, below the bound {bound}"),
        )
    };
    Ok(finish(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize, n: usize) -> Polynomial {
        Polynomial::var(i, n)
    }

    fn sys(n: usize, comps: Vec<Polynomial>) -> PolySystem {
        PolySystem::new(n, comps).unwrap()
    }

    #[test]
    fn jacobian_convention() {
        let f = sys(2, vec![&z(0, 2) - &z(1, 2).pow(2), z(1, 2)]);
        let j = jacobian_matrix(&f).unwrap();
        assert_eq!(j.get(0, 0), &Polynomial::one(2));
        assert!(j.get(0, 1).is_zero());
        assert_eq!(j.get(1, 0), &z(1, 2).scale(&(-2).into()));
        assert_eq!(j.get(1, 1), &Polynomial::one(2));
        assert_eq!(det_jacobian(&f).unwrap(), Polynomial::one(2));
    }

    #[test]
    fn lin_membership() {
        let id = is_jlin(&PolySystem::identity(2)).unwrap();
        assert_eq!(id.verdict, Verdict::Member);
        assert_eq!(id.constant(), Some(&Coefficient::one()));
        let sq = is_jlin(&sys(2, vec![z(0, 2).pow(2), z(1, 2)])).unwrap();
        assert_eq!(sq.verdict, Verdict::NonMember);
        assert_eq!(sq.offending_term(), Some(z(0, 2).scale(&2.into())));
    }

    #[test]
    fn constants_are_dropped() {
        let f = sys(2, vec![&(&z(0, 2) - &z(1, 2).pow(2)) + &Polynomial::one(2), &z(1, 2) - &Polynomial::constant(2.into(), 2)]);
        let g = drop_degree_zero(&f).unwrap();
        assert_eq!(g.components(), &[&z(0, 2) - &z(1, 2).pow(2), z(1, 2)]);
        assert_eq!(drop_degree_zero(&g).unwrap(), g);
    }

    #[test]
    fn triangular_inverse_is_certified() {
        let f = sys(2, vec![&z(0, 2) - &z(1, 2).pow(2), z(1, 2)]);
        let v = certify_polynomial_inverse(&f, Some(2)).unwrap();
        assert_eq!(v.verdict, Verdict::Member);
        assert_eq!(v.inverse().unwrap().components(), &[&z(0, 2) + &z(1, 2).pow(2), z(1, 2)]);
    }

    #[test]
    fn affine_and_shifted_maps() {
        // F = (2 z1 + z2^3 + 1, z2 - 3)
        let f = sys(
            2,
            vec![
                &(&z(0, 2).scale(&2.into()) + &z(1, 2).pow(3)) + &Polynomial::one(2),
                &z(1, 2) - &Polynomial::constant(3.into(), 2),
            ],
        );
        let v = certify_polynomial_inverse(&f, None).unwrap();
        assert_eq!(v.verdict, Verdict::Member, "{}", v.detail);
        let g = v.inverse().unwrap();
        assert!(f.compose(g).unwrap().is_identity());
    }

    #[test]
    fn one_dimensional_quadratic_has_no_inverse() {
        let f = sys(1, vec![&z(0, 1) - &z(0, 1).pow(2)]);
        let v = certify_polynomial_inverse(&f, Some(10)).unwrap();
        assert_eq!(v.verdict, Verdict::NonMember);
        assert!(matches!(v.witness, Some(Witness::Determinant(_))));
    }

    #[test]
    fn cap_below_bound_is_undetermined() {
        // (z1 - z2^3, z2) needs degree 3 and the bound is 3
        let f = sys(2, vec![&z(0, 2) - &z(1, 2).pow(3), z(1, 2)]);
        let v = certify_polynomial_inverse(&f, Some(2)).unwrap();
        assert_eq!(v.verdict, Verdict::Undetermined);
        assert!(matches!(v.witness, Some(Witness::Residual(_))));
        assert_eq!(certify_polynomial_inverse(&f, None).unwrap().verdict, Verdict::Member);
    }

    #[test]
    fn identity_is_its_own_inverse() {
        let v = certify_polynomial_inverse(&PolySystem::identity(3), Some(4)).unwrap();
        assert_eq!(v.inverse(), Some(&PolySystem::identity(3)));
    }
}
