//! The degree-reduction map `Φ: P(n, d) → P(n(n+1), d-1)`.
//!
//! Variables of the image are `z⁽¹⁾ = (z_1..z_n)` followed by the `n²`
//! auxiliary variables `z⁽²⁾_{ij}`, stored at 0-based position
//! `n + i·n + j`. With 1-based `i, j` this is the global variable `i·n + j`.
//!
//! Two constructions are provided. The algebraic one moves the derivative
//! terms of every degree into the auxiliary block:
//!
//! ```text
//! F̃_i    = Σ_j z⁽²⁾_{ij} z_j
//! F̃_{ij} = z⁽²⁾_{ij} - Σ_c (1/c) ∂_j (F_c)_i (z⁽¹⁾)
//! ```
//!
//! The coupling transform relocates only the top-degree coupling of a
//! normalized system `F = z - Σ W⁽ᵏ⁾` without quadratic part:
//!
//! ```text
//! F̃_i    = z_i - Σ_{3≤k<d} W⁽ᵏ⁾_i(z⁽¹⁾) - Σ_j z_j z⁽²⁾_{ij}
//! F̃_{ij} = z⁽²⁾_{ij} - (1/d) ∂_j W⁽ᵈ⁾_i(z⁽¹⁾)
//! ```

use std::fmt;

use crate::coeff::Coefficient;
use crate::coupling::CouplingTensor;
use crate::elimination::{self, SplitSystem};
use crate::error::{Error, Result};
use crate::jacobian::{self, MembershipVerdict};
use crate::poly::{PolySystem, Polynomial};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    Algebraic,
    Qft,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Algebraic => "algebraic",
            Variant::Qft => "qft",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebraic" => Ok(Variant::Algebraic),
            "qft" => Ok(Variant::Qft),
            other => Err(Error::Parse(format!("unknown variant '{other}'"))),
        }
    }
}

/// 0-based position of `z⁽²⁾_{ij}` among the `n(n+1)` variables.
pub fn aux_index(n: usize, i: usize, j: usize) -> usize {
    n + i * n + j
}

#[derive(Clone, PartialEq, Debug)]
pub struct ReducedSystem {
    pub system: PolySystem,
    pub source_dim: usize,
    pub source_degree: u32,
    pub variant: Variant,
}

impl ReducedSystem {
    /// `(i, j, global index)` with 1-based entries, as written to files.
    pub fn index_map(&self) -> Vec<(usize, usize, usize)> {
        index_map(self.source_dim)
    }

    pub fn split(&self) -> Result<SplitSystem> {
        elimination::split(&self.system, self.source_dim)
    }
}

pub fn index_map(n: usize) -> Vec<(usize, usize, usize)> {
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j, i * n + j)))
        .collect()
}

fn check_degree(d: u32) -> Result<()> {
    if d < 3 {
        return Err(Error::DegreeTooLow(d));
    }
    Ok(())
}

/// Algebraic construction; `d` is the declared degree bound of `f`.
pub fn phi_algebraic(f: &PolySystem) -> Result<ReducedSystem> {
    f.require_square()?;
    let d = f.degree_bound();
    check_degree(d)?;
    if f.constant_part().iter().any(|c| !c.is_zero()) {
        return Err(Error::ConstantPart);
    }
    let n = f.nvars();
    let big = n * (n + 1);
    let mut comps = Vec::with_capacity(big);
    for i in 0..n {
        let p = (0..n).fold(Polynomial::zero(big), |acc, j| {
            &acc + &(&Polynomial::var(aux_index(n, i, j), big) * &Polynomial::var(j, big))
        });
        comps.push(p);
    }
    for i in 0..n {
        for j in 0..n {
            let mut shift = Polynomial::zero(n);
            for c in 1..=d {
                let fc = f.component(i).homogeneous_part(c);
                if fc.is_zero() {
                    continue;
                }
                shift = &shift + &fc.partial_derivative(j)?.scale(&Coefficient::ratio(1, c as i64));
            }
            comps.push(&Polynomial::var(aux_index(n, i, j), big) - &shift.lift(big));
        }
    }
    Ok(ReducedSystem {
        system: PolySystem::new(big, comps)?.with_degree_bound(d - 1)?,
        source_dim: n,
        source_degree: d,
        variant: Variant::Algebraic,
    })
}

/// Coupling transform on tensors. Requires degree `d ≥ 3` and no quadratic
/// couplings.
pub fn phi_qft(w: &CouplingTensor) -> Result<CouplingTensor> {
    let d = w.max_degree();
    check_degree(d)?;
    if w.has_degree(2) {
        return Err(Error::QuadraticCouplings);
    }
    let n = w.dim();
    let mut out = CouplingTensor::new(n * (n + 1), d - 1);
    for (key, c) in w.entries() {
        if key.degree < d {
            out.add(key.target, &key.inputs, c)?;
            continue;
        }
        // (1/d) ∂_j of the monomial c·z^α
        let mut alpha = vec![0u32; n];
        for &j in &key.inputs {
            alpha[j] += 1;
        }
        for j in 0..n {
            if alpha[j] == 0 {
                continue;
            }
            let mut rest = key.inputs.clone();
            let pos = rest.iter().position(|&x| x == j).unwrap();
            rest.remove(pos);
            let coef = c * &Coefficient::ratio(alpha[j] as i64, d as i64);
            out.add(aux_index(n, key.target, j), &rest, &coef)?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.add(i, &[j, aux_index(n, i, j)], &Coefficient::one())?;
        }
    }
    Ok(out)
}

/// Coupling transform of a normalized system.
pub fn phi_qft_system(f: &PolySystem) -> Result<ReducedSystem> {
    let w = CouplingTensor::from_system(f)?;
    let wt = phi_qft(&w)?;
    Ok(ReducedSystem {
        system: wt.to_system(),
        source_dim: f.nvars(),
        source_degree: w.max_degree(),
        variant: Variant::Qft,
    })
}

pub fn phi(f: &PolySystem, variant: Variant) -> Result<ReducedSystem> {
    match variant {
        Variant::Algebraic => phi_algebraic(f),
        Variant::Qft => phi_qft_system(f),
    }
}

/// Recognizes `ft` as `Φ(F)` for the given variant and returns `F` (with
/// degree bound one above that of `ft`). Recovery is confirmed by
/// recomputing the image.
pub fn is_in_image_of_phi(ft: &PolySystem, n: usize, variant: Variant) -> Result<Option<PolySystem>> {
    let big = n * (n + 1);
    if ft.nvars() != big || ft.len() != big {
        return Err(Error::NotReducedDimension(ft.nvars()));
    }
    let d = ft.degree_bound() + 1;
    if d < 3 {
        return Ok(None);
    }
    let only_first = |p: &Polynomial| (n..big).all(|v| !p.uses_var(v));
    let mut aux_parts = vec![vec![Polynomial::zero(n); n]; n];
    for i in 0..n {
        for j in 0..n {
            let a = aux_index(n, i, j);
            let rest = &Polynomial::var(a, big) - ft.component(a);
            if !only_first(&rest) {
                return Ok(None);
            }
            aux_parts[i][j] = rest.restrict_to_leading(n);
        }
    }
    let mut comps = Vec::with_capacity(n);
    for (i, row) in aux_parts.iter().enumerate() {
        let bilinear = (0..n).fold(Polynomial::zero(big), |acc, j| {
            &acc + &(&Polynomial::var(aux_index(n, i, j), big) * &Polynomial::var(j, big))
        });
        let top = row
            .iter()
            .enumerate()
            .fold(Polynomial::zero(n), |acc, (j, q)| &acc + &(&Polynomial::var(j, n) * q));
        let fi = match variant {
            Variant::Algebraic => {
                if *ft.component(i) != bilinear {
                    return Ok(None);
                }
                top
            }
            Variant::Qft => {
                let low = &(&Polynomial::var(i, big) - &bilinear) - ft.component(i);
                if !only_first(&low) {
                    return Ok(None);
                }
                &(&Polynomial::var(i, n) - &low.restrict_to_leading(n)) - &top
            }
        };
        comps.push(fi);
    }
    let f = match PolySystem::new(n, comps).and_then(|s| s.with_degree_bound(d)) {
        Ok(f) => f,
        Err(_) => return Ok(None),
    };
    match phi(&f, variant) {
        Ok(img) if img.system == *ft => Ok(Some(f)),
        _ => Ok(None),
    }
}

/// Applies `Φ` repeatedly until the degree bound reaches `target` (at least
/// 2) or `max_steps` applications have been made. The algebraic variant
/// drops the constant part before each step.
pub fn reduce_repeatedly(f: &PolySystem, variant: Variant, target: u32, max_steps: usize) -> Result<Vec<ReducedSystem>> {
    let mut out: Vec<ReducedSystem> = Vec::new();
    let mut cur = f.clone();
    while cur.degree_bound() > target.max(2) && out.len() < max_steps {
        if variant == Variant::Algebraic {
            cur = jacobian::drop_degree_zero(&cur)?;
        }
        let next = phi(&cur, variant)?;
        cur = next.system.clone();
        out.push(next);
    }
    Ok(out)
}

/// Both sides of the reduction theorem on one instance.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub variant: Variant,
    pub source_dim: usize,
    pub source_degree: u32,
    pub lin_source: MembershipVerdict,
    pub lin_image: MembershipVerdict,
    pub inv_source: MembershipVerdict,
    pub inv_image: MembershipVerdict,
    /// `c` with `det J_Φ(F)(z⁽¹⁾, R⁻¹(0; z⁽¹⁾)) = c · det J_F(z⁽¹⁾)`, if any.
    pub transport_constant: Option<Coefficient>,
    pub h_recovers_source: bool,
}

impl TheoremReport {
    pub fn lin_agrees(&self) -> bool {
        self.lin_source.verdict == self.lin_image.verdict
    }

    pub fn inv_agrees(&self) -> bool {
        self.inv_source.verdict == self.inv_image.verdict
    }

    pub fn holds(&self) -> bool {
        self.lin_agrees() && self.inv_agrees() && self.h_recovers_source && self.transport_constant.is_some()
    }
}

/// Evaluates `is_jlin(F)` against `is_jlin_partial(Φ(F), n)` and the
/// certified inverse of `F` against `is_j_partial(Φ(F), n)`. The algebraic
/// variant first drops the constant part of `F`.
pub fn verify_theorem_main(f: &PolySystem, variant: Variant, degree_cap: Option<u32>) -> Result<TheoremReport> {
    let f = match variant {
        Variant::Algebraic => jacobian::drop_degree_zero(f)?,
        Variant::Qft => f.clone(),
    };
    let n = f.nvars();
    let img = phi(&f, variant)?;
    let split = img.split()?;

    let lin_source = jacobian::is_jlin(&f)?;
    let lin_image = elimination::is_jlin_partial(&img.system, n)?;
    let inv_source = jacobian::certify_polynomial_inverse(&f, degree_cap)?;
    let inv_image = elimination::is_j_partial(&img.system, n, degree_cap)?;

    let rinv = elimination::invert_r(&split, None)?;
    let h0 = elimination::restricted_h(&split, &rinv)?;
    let h_recovers_source = h0.components() == f.components();

    let det_src = jacobian::det_jacobian(&f)?;
    let det_img = elimination::det_on_variety(&split, &rinv)?.restrict_to_leading(n);
    let transport_constant = proportionality(&det_img, &det_src);

    Ok(TheoremReport {
        variant,
        source_dim: n,
        source_degree: img.source_degree,
        lin_source,
        lin_image,
        inv_source,
        inv_image,
        transport_constant,
        h_recovers_source,
    })
}

/// `c` with `a = c·b`, when `b ≠ 0` and such a constant exists.
fn proportionality(a: &Polynomial, b: &Polynomial) -> Option<Coefficient> {
    let (_, lb) = b.leading_term()?;
    let c = match a.leading_term() {
        Some((_, la)) => la.checked_div(lb).ok()?,
        None => Coefficient::zero(),
    };
    (b.scale(&c) == *a).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::Verdict;

    fn z(i: usize, n: usize) -> Polynomial {
        Polynomial::var(i, n)
    }

    fn cubic(c: i64) -> PolySystem {
        PolySystem::new(1, vec![&z(0, 1) - &z(0, 1).pow(3).scale(&c.into())]).unwrap()
    }

    #[test]
    fn algebraic_one_dimensional_cubic() {
        // F̃ = (z2 z1, z2 - 1 + c z1²)
        let img = phi_algebraic(&cubic(5)).unwrap();
        let expect = vec![
            &z(1, 2) * &z(0, 2),
            &(&z(1, 2) - &Polynomial::one(2)) + &z(0, 2).pow(2).scale(&5.into()),
        ];
        assert_eq!(img.system.components(), expect.as_slice());
        assert_eq!(img.system.degree_bound(), 2);
    }

    #[test]
    fn algebraic_identity_source() {
        let f = PolySystem::identity(1).with_degree_bound(3).unwrap();
        let img = phi_algebraic(&f).unwrap();
        assert_eq!(img.system.components(), &[&z(1, 2) * &z(0, 2), &z(1, 2) - &Polynomial::one(2)]);
    }

    #[test]
    fn preconditions() {
        let quad = PolySystem::new(1, vec![&z(0, 1) - &z(0, 1).pow(2)]).unwrap();
        assert_eq!(phi_algebraic(&quad), Err(Error::DegreeTooLow(2)));
        let shifted = PolySystem::new(1, vec![&z(0, 1).pow(3) + &Polynomial::one(1)]).unwrap();
        assert_eq!(phi_algebraic(&shifted), Err(Error::ConstantPart));
        let mixed = PolySystem::new(1, vec![&(&z(0, 1) - &z(0, 1).pow(2)) - &z(0, 1).pow(3)]).unwrap();
        assert_eq!(phi_qft_system(&mixed), Err(Error::QuadraticCouplings));
    }

    #[test]
    fn qft_one_dimensional_cubic() {
        // F̃ = (z1 - z1 z2, z2 - c z1²)
        let img = phi_qft_system(&cubic(7)).unwrap();
        let expect = vec![
            &z(0, 2) - &(&z(0, 2) * &z(1, 2)),
            &z(1, 2) - &z(0, 2).pow(2).scale(&7.into()),
        ];
        assert_eq!(img.system.components(), expect.as_slice());
    }

    #[test]
    fn qft_without_couplings_has_only_unit_links() {
        let wt = phi_qft(&CouplingTensor::new(2, 3)).unwrap();
        assert_eq!(wt.entries().count(), 4);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(wt.get(i, &[j, aux_index(2, i, j)]), Coefficient::one());
            }
        }
    }

    #[test]
    fn index_convention() {
        assert_eq!(aux_index(2, 0, 0), 2);
        assert_eq!(aux_index(2, 1, 1), 5);
        assert_eq!(index_map(2), vec![(1, 1, 3), (1, 2, 4), (2, 1, 5), (2, 2, 6)]);
    }

    #[test]
    fn image_recognition_round_trip() {
        let f = cubic(3);
        for v in [Variant::Algebraic, Variant::Qft] {
            let img = phi(&f, v).unwrap();
            assert_eq!(is_in_image_of_phi(&img.system, 1, v).unwrap(), Some(f.clone()));
        }
        let id = PolySystem::identity(2).with_degree_bound(2).unwrap();
        assert_eq!(is_in_image_of_phi(&id, 1, Variant::Algebraic).unwrap(), None);
        assert!(is_in_image_of_phi(&PolySystem::identity(3), 1, Variant::Qft).is_err());
    }

    #[test]
    fn iterated_reduction_reaches_degree_two() {
        let f = PolySystem::new(1, vec![&z(0, 1) - &z(0, 1).pow(4)]).unwrap();
        let chain = reduce_repeatedly(&f, Variant::Algebraic, 2, 5).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[1].system.nvars(), 6);
        assert_eq!(chain[1].system.degree_bound(), 2);
    }

    #[test]
    fn theorem_on_triangular_source() {
        let f = PolySystem::new(2, vec![&z(0, 2) - &z(1, 2).pow(3), z(1, 2)]).unwrap();
        for v in [Variant::Algebraic, Variant::Qft] {
            let r = verify_theorem_main(&f, v, None).unwrap();
            assert!(r.holds(), "{v}: {r:?}");
            assert_eq!(r.lin_image.verdict, Verdict::Member);
            assert_eq!(r.inv_image.verdict, Verdict::Member);
            assert_eq!(r.transport_constant, Some(Coefficient::one()));
        }
    }

    #[test]
    fn theorem_on_non_member() {
        let f = PolySystem::new(2, vec![z(0, 2).pow(3), z(1, 2)]).unwrap();
        let r = verify_theorem_main(&f, Variant::Algebraic, None).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.lin_source.verdict, Verdict::NonMember);
        assert_eq!(r.lin_image.verdict, Verdict::NonMember);
    }
}
