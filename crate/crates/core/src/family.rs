//! The two-dimensional homogeneous family
//!
//! ```text
//! F_1 = z_1 - Σ_k a_{1,k} z_1^k z_2^(d-k)
//! F_2 = z_2 - Σ_k a_{2,k} z_1^k z_2^(d-k)
//! ```
//!
//! with closed-form membership tests, split as `z₁ = (z_1)`, `z₂ = (z_2)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::Coefficient;
use crate::elimination;
use crate::error::{Error, Result};
use crate::jacobian::{self, Verdict};
use crate::poly::{Monomial, PolySystem, Polynomial};

#[derive(Clone, PartialEq, Debug)]
pub struct FamilyInstance {
    pub d: u32,
    /// `a_{1,0..=d}`.
    pub a1: Vec<Coefficient>,
    /// `a_{2,0..=d}`.
    pub a2: Vec<Coefficient>,
}

impl FamilyInstance {
    pub fn new(d: u32, a1: Vec<Coefficient>, a2: Vec<Coefficient>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DegreeTooLow(d));
        }
        for a in [&a1, &a2] {
            if a.len() != d as usize + 1 {
                return Err(Error::ArityMismatch {
                    expected: d as usize + 1,
                    got: a.len(),
                });
            }
        }
        Ok(FamilyInstance { d, a1, a2 })
    }

    /// All coefficients zero.
    pub fn zero(d: u32) -> Self {
        let z = vec![Coefficient::zero(); d as usize + 1];
        FamilyInstance {
            d,
            a1: z.clone(),
            a2: z,
        }
    }

    /// `a_{i,k}` with `i ∈ {1, 2}`.
    pub fn a(&self, i: usize, k: u32) -> &Coefficient {
        match i {
            1 => &self.a1[k as usize],
            2 => &self.a2[k as usize],
            _ => panic!("component index {i} outside {{1, 2}}"),
        }
    }

    pub fn with(mut self, i: usize, k: u32, c: Coefficient) -> Self {
        match i {
            1 => self.a1[k as usize] = c,
            2 => self.a2[k as usize] = c,
            _ => panic!("component index {i} outside {{1, 2}}"),
        }
        self
    }

    /// Reads the coefficients back from a system of the family shape.
    pub fn from_system(f: &PolySystem) -> Result<Self> {
        if f.nvars() != 2 || f.len() != 2 {
            return Err(Error::Schema("the family lives in two variables".into()));
        }
        let d = f.degree_bound();
        let mut inst = FamilyInstance::new(d, vec![Coefficient::zero(); d as usize + 1], vec![Coefficient::zero(); d as usize + 1])?;
        for (i, comp) in f.components().iter().enumerate() {
            let top = comp.homogeneous_part(d);
            if (comp - &top) != Polynomial::var(i, 2) {
                return Err(Error::Schema(format!(
                    "component {} is not z{} minus a form of degree {d}",
                    i + 1,
                    i + 1
                )));
            }
            for (m, c) in top.terms() {
                let k = m.exps()[0];
                inst = inst.with(i + 1, k, -c);
            }
        }
        Ok(inst)
    }
}

fn family_monomial(k: u32, d: u32, c: &Coefficient) -> Polynomial {
    Polynomial::term(Monomial::new(vec![k, d - k]), c.clone())
}

pub fn family_system(inst: &FamilyInstance) -> PolySystem {
    let d = inst.d;
    let comps = [&inst.a1, &inst.a2]
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (0..=d).fold(Polynomial::var(i, 2), |acc, k| &acc - &family_monomial(k, d, &a[k as usize]))
        })
        .collect();
    PolySystem::new(2, comps)
        .and_then(|s| s.with_degree_bound(d))
        .expect("family components have degree at most d")
}

/// `det J_F` from the coefficient expansion
/// `1 - Σ_k (a_{1,k+1}(k+1) + a_{2,k}(d-k)) z_1^k z_2^(d-1-k)
///    + Σ_{k,l} a_{1,k} a_{2,l} d(k-l) z_1^(k+l-1) z_2^(2d-k-l-1)`.
pub fn det_expansion(inst: &FamilyInstance) -> Polynomial {
    let d = inst.d as i64;
    let mut out = Polynomial::one(2);
    for k in 0..d {
        let c = &(&inst.a1[k as usize + 1] * &Coefficient::from_int(k + 1))
            + &(&inst.a2[k as usize] * &Coefficient::from_int(d - k));
        out = &out - &Polynomial::term(Monomial::new(vec![k as u32, (d - 1 - k) as u32]), c);
    }
    for k in 0..=d {
        for l in 0..=d {
            if k + l == 0 {
                continue;
            }
            let c = &(&inst.a1[k as usize] * &inst.a2[l as usize]) * &Coefficient::from_int(d * (k - l));
            let m = Monomial::new(vec![(k + l - 1) as u32, (2 * d - k - l - 1) as u32]);
            out = &out + &Polynomial::term(m, c);
        }
    }
    out
}

/// Conditions for a constant Jacobian determinant:
/// `a_{1,k+1}(k+1) + a_{2,k}(d-k) = 0` for `k < d`, and
/// `Σ_k a_{1,k} a_{2,m-k} d(2k-m) = 0` for every `m ≥ 1`.
pub fn closed_form_jlin_conditions(inst: &FamilyInstance) -> bool {
    let d = inst.d as i64;
    let linear = (0..d).all(|k| {
        let c = &(&inst.a1[k as usize + 1] * &Coefficient::from_int(k + 1))
            + &(&inst.a2[k as usize] * &Coefficient::from_int(d - k));
        c.is_zero()
    });
    let quadratic = (1..=2 * d).all(|m| {
        let s = (0..=d.min(m))
            .filter(|&k| m - k <= d)
            .fold(Coefficient::zero(), |acc, k| {
                let t = &(&inst.a1[k as usize] * &inst.a2[(m - k) as usize]) * &Coefficient::from_int(d * (2 * k - m));
                &acc + &t
            });
        s.is_zero()
    });
    linear && quadratic
}

/// Conditions for the partial class with one eliminated variable:
/// `a_{2,k} = 0` for `k < d`, `a_{1,d} = 0`, and either every `a_{1,k}`
/// with `k < d` vanishes or `a_{2,d} = 0`.
pub fn closed_form_partial_conditions(inst: &FamilyInstance) -> bool {
    let d = inst.d as usize;
    inst.a2[..d].iter().all(Coefficient::is_zero)
        && inst.a1[d].is_zero()
        && (inst.a1[..d].iter().all(Coefficient::is_zero) || inst.a2[d].is_zero())
}

fn require_affine_r(inst: &FamilyInstance) -> Result<()> {
    if inst.a2[..inst.d as usize].iter().any(|c| !c.is_zero()) {
        return Err(Error::Precondition(
            "a_{2,k} must vanish for k < d so that R⁻¹(0; z_1) = a_{2,d} z_1^d".into(),
        ));
    }
    Ok(())
}

/// `det J_F(z_1, a_{2,d} z_1^d)` as a polynomial in `z_1`, obtained by
/// substituting into [`det_expansion`].
pub fn specialized_jacobian(inst: &FamilyInstance) -> Result<Polynomial> {
    require_affine_r(inst)?;
    let z1 = Polynomial::var(0, 1);
    let z2 = z1.pow(inst.d).scale(&inst.a2[inst.d as usize]);
    det_expansion(inst).compose(&[z1, z2])
}

/// The same restriction through the general pipeline: Jacobian matrix,
/// determinant and the certified `R⁻¹`.
pub fn specialized_jacobian_pipeline(inst: &FamilyInstance) -> Result<Polynomial> {
    require_affine_r(inst)?;
    let s = elimination::split(&family_system(inst), 1)?;
    let rinv = elimination::invert_r(&s, None)?;
    Ok(elimination::det_on_variety(&s, &rinv)?.restrict_to_leading(1))
}

/// One term of the displayed formula
/// `1 + Σ_{k=1}^d a_{1,k} a_{2,d}^(d-k) (k(d-1) - d²) z_1^((d-1)(d-1-k))
///    + a_{1,0} a_{2,d}^d z_1^((d-1)(d+1))`.
#[derive(Clone, PartialEq, Debug)]
pub struct DisplayedTerm {
    /// `None` for the trailing `a_{1,0}` term.
    pub k: Option<u32>,
    pub coefficient: Coefficient,
    pub exponent: i64,
}

pub fn displayed_terms(inst: &FamilyInstance) -> Vec<DisplayedTerm> {
    let d = inst.d;
    let di = d as i64;
    let a2d = &inst.a2[d as usize];
    let mut out: Vec<DisplayedTerm> = (1..=d)
        .map(|k| {
            let ki = k as i64;
            let factor = Coefficient::from_int(ki * (di - 1) - di * di);
            DisplayedTerm {
                k: Some(k),
                coefficient: &(&inst.a1[k as usize] * &a2d.pow(d - k)) * &factor,
                exponent: (di - 1) * (di - 1 - ki),
            }
        })
        .collect();
    out.push(DisplayedTerm {
        k: None,
        coefficient: &inst.a1[0] * &a2d.pow(d),
        exponent: (di - 1) * (di + 1),
    });
    out
}

/// Termwise comparison of [`displayed_terms`] with the substituted
/// determinant. Terms with negative exponent or zero coefficient are
/// skipped.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct DisplayComparison {
    pub terms_checked: usize,
    /// Each `(k(d-1) - d²)`-coefficient occurs in the substituted
    /// determinant.
    pub coefficients_match: bool,
    /// Each such coefficient sits at exponent `(d-1)(d-1-k)`.
    pub sum_exponents_match: bool,
    /// The trailing term sits at exponent `(d-1)(d+1)`.
    pub final_exponent_matches: bool,
    /// The trailing term has coefficient `a_{1,0} a_{2,d}^d`.
    pub final_coefficient_matches: bool,
    pub mismatches: Vec<String>,
}

impl DisplayComparison {
    /// The sub-checks named by the reproduction criterion: the sum
    /// coefficients and both exponent patterns.
    pub fn criterion_holds(&self) -> bool {
        self.coefficients_match && self.sum_exponents_match && self.final_exponent_matches
    }
}

pub fn compare_with_display(inst: &FamilyInstance) -> Result<DisplayComparison> {
    let direct = specialized_jacobian(inst)?;
    let coeff_at = |e: i64| -> Coefficient {
        if e < 0 {
            return Coefficient::zero();
        }
        direct.coefficient(&Monomial::new(vec![e as u32]))
    };
    let mut cmp = DisplayComparison {
        coefficients_match: true,
        sum_exponents_match: true,
        final_exponent_matches: true,
        final_coefficient_matches: true,
        ..Default::default()
    };
    for t in displayed_terms(inst) {
        if t.exponent < 0 || t.coefficient.is_zero() {
            continue;
        }
        cmp.terms_checked += 1;
        match t.k {
            Some(k) => {
                if !direct.terms().any(|(_, c)| *c == t.coefficient) {
                    cmp.coefficients_match = false;
                    cmp.mismatches.push(format!("k={k}: coefficient {} absent", t.coefficient));
                }
                let got = coeff_at(t.exponent);
                if got != t.coefficient {
                    cmp.sum_exponents_match = false;
                    cmp.mismatches.push(format!(
                        "k={k}: expected {} at z1^{}, found {got}",
                        t.coefficient, t.exponent
                    ));
                }
            }
            None => {
                let got = coeff_at(t.exponent);
                if got.is_zero() {
                    cmp.final_exponent_matches = false;
                    cmp.mismatches.push(format!("a_(1,0) term: nothing at z1^{}", t.exponent));
                } else if got != t.coefficient {
                    cmp.final_coefficient_matches = false;
                    cmp.mismatches.push(format!(
                        "a_(1,0) term: expected {} at z1^{}, found {got}",
                        t.coefficient, t.exponent
                    ));
                }
            }
        }
    }
    Ok(cmp)
}

/// Verdicts of the general classifiers next to the closed forms.
#[derive(Clone, PartialEq, Debug)]
pub struct InstanceReport {
    pub id: usize,
    pub instance: FamilyInstance,
    pub jlin: Verdict,
    pub jlin_closed_form: bool,
    pub jlin_partial: Verdict,
    pub partial_closed_form: bool,
    pub j_partial: Verdict,
    /// `(F⁻¹)_1(y_1, 0)` when certified.
    pub restricted_inverse: Option<Polynomial>,
}

impl InstanceReport {
    pub fn closed_forms_agree(&self) -> bool {
        (self.jlin == Verdict::Member) == self.jlin_closed_form
            && (self.jlin_partial == Verdict::Member) == self.partial_closed_form
    }

    pub fn partial_classes_agree(&self) -> bool {
        self.jlin_partial == self.j_partial
    }
}

pub fn classify(id: usize, inst: &FamilyInstance) -> Result<InstanceReport> {
    let f = family_system(inst);
    let jpart = elimination::is_j_partial(&f, 1, None)?;
    Ok(InstanceReport {
        id,
        instance: inst.clone(),
        jlin: jacobian::is_jlin(&f)?.verdict,
        jlin_closed_form: closed_form_jlin_conditions(inst),
        jlin_partial: elimination::is_jlin_partial(&f, 1)?.verdict,
        partial_closed_form: closed_form_partial_conditions(inst),
        j_partial: jpart.verdict,
        restricted_inverse: jpart.inverse().map(|g| g.component(0).clone()),
    })
}

#[derive(Clone, PartialEq, Debug)]
pub struct FamilyReport {
    pub d: u32,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
}

impl FamilyReport {
    pub fn closed_form_disagreements(&self) -> Vec<usize> {
        self.instances.iter().filter(|r| !r.closed_forms_agree()).map(|r| r.id).collect()
    }

    pub fn partial_disagreements(&self) -> Vec<usize> {
        self.instances.iter().filter(|r| !r.partial_classes_agree()).map(|r| r.id).collect()
    }

    /// An instance in the partial class but not in the classical one.
    pub fn partial_only_witness(&self) -> Option<&InstanceReport> {
        self.instances
            .iter()
            .find(|r| r.jlin_partial == Verdict::Member && r.jlin == Verdict::NonMember)
    }

    /// An instance in the classical class but not in the partial one.
    pub fn classical_only_witness(&self) -> Option<&InstanceReport> {
        self.instances
            .iter()
            .find(|r| r.jlin == Verdict::Member && r.jlin_partial == Verdict::NonMember)
    }

    pub fn passed(&self) -> bool {
        self.closed_form_disagreements().is_empty()
            && self.partial_disagreements().is_empty()
            && self.partial_only_witness().is_some()
            && self.classical_only_witness().is_some()
    }
}

pub fn equality_jlin_j_partial_check(d: u32, seed: u64, corpus: &[FamilyInstance]) -> Result<FamilyReport> {
    let instances = corpus
        .iter()
        .enumerate()
        .map(|(id, inst)| classify(id, inst))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport { d, seed, instances })
}

const POOL: [(i64, i64); 7] = [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)];

fn pool_value(rng: &mut ChaCha8Rng) -> Coefficient {
    let (p, q) = POOL[rng.gen_range(0..POOL.len())];
    Coefficient::ratio(p, q)
}

fn dense_value(rng: &mut ChaCha8Rng) -> Coefficient {
    Coefficient::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

fn nonzero_pool_value(rng: &mut ChaCha8Rng) -> Coefficient {
    loop {
        let c = pool_value(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `F = z - v (ℓ·z)^d` with `ℓ·v = 0`, which has determinant 1.
pub fn rank_one_instance(d: u32, l1: &Coefficient, l2: &Coefficient, t: &Coefficient) -> FamilyInstance {
    let v1 = &-l2 * t;
    let v2 = l1 * t;
    let coeffs = |v: &Coefficient| -> Vec<Coefficient> {
        (0..=d)
            .map(|k| &(&(v * &Coefficient::from_int(binomial(d, k))) * &l1.pow(k)) * &l2.pow(d - k))
            .collect()
    };
    FamilyInstance {
        d,
        a1: coeffs(&v1),
        a2: coeffs(&v2),
    }
}

/// One random instance from the stratified sampler used by the corpus.
pub fn sample_instance(rng: &mut ChaCha8Rng, d: u32) -> FamilyInstance {
    let du = d as usize;
    let draw = |rng: &mut ChaCha8Rng, dense: bool| {
        if dense {
            dense_value(rng)
        } else {
            pool_value(rng)
        }
    };
    match rng.gen_range(0..6) {
        // first case: only a_{2,d}, possibly perturbed
        0 => {
            let mut inst = FamilyInstance::zero(d).with(2, d, nonzero_pool_value(rng));
            if rng.gen_bool(0.5) {
                let k = rng.gen_range(0..=d);
                inst = inst.with(1, k, pool_value(rng));
            }
            inst
        }
        // second case: a_{2,·} = 0, a_{1,k<d} free, sometimes a_{1,d} ≠ 0
        1 => {
            let mut inst = FamilyInstance::zero(d);
            for k in 0..d {
                let dense = rng.gen_bool(0.3);
                inst.a1[k as usize] = draw(rng, dense);
            }
            if rng.gen_bool(0.3) {
                inst.a1[du] = nonzero_pool_value(rng);
            }
            inst
        }
        // rank-one maps with constant determinant
        2 => {
            let (l1, l2) = (pool_value(rng), nonzero_pool_value(rng));
            rank_one_instance(d, &l1, &l2, &nonzero_pool_value(rng))
        }
        // a_{2,k<d} = 0 with a mix of everything else
        3 => {
            let mut inst = FamilyInstance::zero(d);
            inst.a2[du] = draw(rng, false);
            for k in 0..=du {
                if rng.gen_bool(0.4) {
                    inst.a1[k] = draw(rng, false);
                }
            }
            inst
        }
        // sparse pool draws
        4 => {
            let mut inst = FamilyInstance::zero(d);
            for k in 0..=du {
                if rng.gen_bool(0.25) {
                    inst.a1[k] = draw(rng, false);
                }
                if rng.gen_bool(0.25) {
                    inst.a2[k] = draw(rng, false);
                }
            }
            inst
        }
        // dense random rationals
        _ => {
            let mut inst = FamilyInstance::zero(d);
            for k in 0..=du {
                inst.a1[k] = draw(rng, true);
                inst.a2[k] = draw(rng, true);
            }
            inst
        }
    }
}

/// `count` instances; instance `i` is drawn from the stream seeded with
/// `seed + i`.
pub fn corpus(d: u32, seed: u64, count: usize) -> Vec<FamilyInstance> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            sample_instance(&mut rng, d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> Polynomial {
        Polynomial::var(i, 2)
    }

    #[test]
    fn zero_instance_is_identity() {
        assert!(family_system(&FamilyInstance::zero(3)).is_identity());
    }

    #[test]
    fn first_and_second_cases() {
        let first = FamilyInstance::zero(3).with(2, 3, Coefficient::one());
        assert_eq!(family_system(&first).components(), &[z(0), &z(1) - &z(0).pow(3)]);
        let second = FamilyInstance::zero(3).with(1, 0, Coefficient::one());
        assert_eq!(family_system(&second).components(), &[&z(0) - &z(1).pow(3), z(1)]);
    }

    #[test]
    fn expansion_matches_differentiation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            for _ in 0..20 {
                let inst = sample_instance(&mut rng, d);
                let f = family_system(&inst);
                assert_eq!(det_expansion(&inst), jacobian::det_jacobian(&f).unwrap());
            }
        }
    }

    #[test]
    fn jlin_conditions_small_cases() {
        assert!(closed_form_jlin_conditions(&FamilyInstance::zero(2)));
        let bad = FamilyInstance::zero(2).with(1, 1, Coefficient::one());
        assert!(!closed_form_jlin_conditions(&bad));
        let f = family_system(&bad);
        assert_eq!(jacobian::is_jlin(&f).unwrap().verdict, Verdict::NonMember);
    }

    #[test]
    fn partial_conditions_small_cases() {
        let first = FamilyInstance::zero(3).with(2, 3, Coefficient::from_int(5));
        assert!(closed_form_partial_conditions(&first));
        let second = FamilyInstance::zero(3).with(1, 1, Coefficient::one()).with(1, 0, 2.into());
        assert!(closed_form_partial_conditions(&second));
        let skew = FamilyInstance::zero(3).with(2, 2, Coefficient::one());
        assert!(!closed_form_partial_conditions(&skew));
        let r = classify(0, &skew).unwrap();
        assert_eq!(r.jlin_partial, Verdict::NonMember);
    }

    #[test]
    fn specialized_known_terms() {
        // d = 3, a_{1,1} = a_{2,3} = 1: coefficient 1·2 - 9 = -7
        let inst = FamilyInstance::zero(3).with(1, 1, Coefficient::one()).with(2, 3, Coefficient::one());
        let p = specialized_jacobian(&inst).unwrap();
        let x = Polynomial::var(0, 1);
        assert_eq!(p, &Polynomial::one(1) - &x.pow(6).scale(&7.into()));
        // d = 2, a_{1,0} = a_{2,2} = 1: the term sits at z1^3
        let inst = FamilyInstance::zero(2).with(1, 0, Coefficient::one()).with(2, 2, Coefficient::one());
        let p = specialized_jacobian(&inst).unwrap();
        assert_eq!(p, &Polynomial::one(1) - &x.pow(3).scale(&4.into()));
        assert_eq!(specialized_jacobian_pipeline(&inst).unwrap(), p);
        assert!(specialized_jacobian(&FamilyInstance::zero(2).with(2, 0, Coefficient::one())).is_err());
    }

    #[test]
    fn display_comparison_reports_exponent_shift() {
        let inst = FamilyInstance::zero(3).with(1, 1, Coefficient::one()).with(2, 3, Coefficient::one());
        let cmp = compare_with_display(&inst).unwrap();
        assert!(cmp.coefficients_match);
        assert!(!cmp.sum_exponents_match);
        let only_a10 = FamilyInstance::zero(2).with(1, 0, Coefficient::one()).with(2, 2, Coefficient::one());
        let cmp = compare_with_display(&only_a10).unwrap();
        assert!(cmp.final_exponent_matches);
        assert!(!cmp.final_coefficient_matches);
    }

    #[test]
    fn rank_one_maps_have_unit_determinant() {
        let inst = rank_one_instance(3, &Coefficient::one(), &Coefficient::one(), &Coefficient::one());
        assert!(closed_form_jlin_conditions(&inst));
        let r = classify(0, &inst).unwrap();
        assert_eq!(r.jlin, Verdict::Member);
        assert_eq!(r.jlin_partial, Verdict::NonMember);
    }

    #[test]
    fn system_round_trip() {
        for inst in corpus(3, 5, 30) {
            assert_eq!(FamilyInstance::from_system(&family_system(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn witnesses_of_both_differences() {
        let report = equality_jlin_j_partial_check(3, 1, &corpus(3, 1, 60)).unwrap();
        assert!(report.partial_only_witness().is_some());
        assert!(report.classical_only_witness().is_some());
        assert!(report.passed());
    }
}
