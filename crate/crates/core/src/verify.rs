//! The acceptance suite: random and curated corpora and one report per
//! criterion. Every check is exact.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::coupling::CouplingTensor;
use crate::elimination;
use crate::error::Result;
use crate::family;
use crate::jacobian::{self, Verdict};
use crate::poly::{Monomial, PolySystem, Polynomial};
use crate::qft;
use crate::reduction::{self, Variant};

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct CriterionReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub checked: usize,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

impl CriterionReport {
    fn new(id: &str, title: &str) -> Self {
        CriterionReport {
            id: id.to_string(),
            title: title.to_string(),
            passed: true,
            checked: 0,
            notes: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.passed = false;
        if self.failures.len() < 20 {
            self.failures.push(what);
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// `PASS [id] title (checked N)` plus the first failure, if any.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{status} [{}] {} ({} checks)", self.id, self.title, self.checked);
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(": {f}"));
        }
        s
    }
}

// ---------------------------------------------------------------------------
// generators

const POOL: [(i64, i64); 6] = [(1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)];

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// A nonzero rational from the small pool or, less often, a dense `p/q`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Coefficient {
    if rng.gen_bool(0.7) {
        let (p, q) = POOL[rng.gen_range(0..POOL.len())];
        Coefficient::ratio(p, q)
    } else {
        loop {
            let p = rng.gen_range(-9..=9);
            if p != 0 {
                return Coefficient::ratio(p, rng.gen_range(1..=9));
            }
        }
    }
}

/// A nonzero Gaussian rational; the imaginary part is zero half the time.
pub fn random_gaussian(rng: &mut ChaCha8Rng) -> Coefficient {
    let re = random_rational(rng);
    if rng.gen_bool(0.5) {
        re
    } else {
        &re + &(&random_rational(rng) * &Coefficient::i())
    }
}

/// All exponent vectors of total degree `d` in `n` variables, restricted
/// to the variables in `allowed`.
pub fn monomials_of_degree(n: usize, d: u32, allowed: &[usize]) -> Vec<Monomial> {
    fn rec(allowed: &[usize], d: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        match allowed.split_first() {
            None => {
                if d == 0 {
                    out.push(Monomial::new(cur.clone()));
                }
            }
            Some((&v, rest)) => {
                for e in (0..=d).rev() {
                    cur[v] = e;
                    rec(rest, d - e, cur, out);
                }
                cur[v] = 0;
            }
        }
    }
    let mut out = Vec::new();
    rec(allowed, d, &mut vec![0; n], &mut out);
    out
}

/// Homogeneous of degree `d` in the variables `allowed`; each monomial is
/// present with probability `density`, and at least one is.
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: u32,
    allowed: &[usize],
    density: f64,
    complex: bool,
) -> Polynomial {
    let monos = monomials_of_degree(n, d, allowed);
    let draw = |rng: &mut ChaCha8Rng| if complex { random_gaussian(rng) } else { random_rational(rng) };
    let mut terms: Vec<(Vec<u32>, Coefficient)> = monos
        .iter()
        .filter(|_| rng.gen_bool(density))
        .map(|m| m.exps().to_vec())
        .collect::<Vec<_>>()
        .into_iter()
        .map(|e| (e, draw(rng)))
        .collect();
    if terms.is_empty() && !monos.is_empty() {
        let m = &monos[rng.gen_range(0..monos.len())];
        terms.push((m.exps().to_vec(), draw(rng)));
    }
    Polynomial::from_terms(n, terms).expect("exponents fit")
}

/// Random polynomial with homogeneous parts of degrees `lo..=hi`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, lo: u32, hi: u32, density: f64) -> Polynomial {
    let all: Vec<usize> = (0..n).collect();
    (lo..=hi).fold(Polynomial::zero(n), |acc, k| {
        if rng.gen_bool(0.75) {
            &acc + &random_homogeneous(rng, n, k, &all, density, false)
        } else {
            acc
        }
    })
}

/// `z - Σ W^(k)` with random couplings of degrees `lo..=d`; degree `d`
/// always present.
pub fn random_normalized(rng: &mut ChaCha8Rng, n: usize, d: u32, lo: u32) -> PolySystem {
    let all: Vec<usize> = (0..n).collect();
    let comps = (0..n)
        .map(|i| {
            let mut w = Polynomial::zero(n);
            for k in lo..d {
                if rng.gen_bool(0.6) {
                    w = &w + &random_homogeneous(rng, n, k, &all, 0.4, false);
                }
            }
            if i == 0 || rng.gen_bool(0.6) {
                w = &w + &random_homogeneous(rng, n, d, &all, 0.4, false);
            }
            &Polynomial::var(i, n) - &w
        })
        .collect();
    PolySystem::new(n, comps)
        .and_then(|s| s.with_degree_bound(d))
        .expect("degrees fit")
}

/// `T_i = z_i - p_i(z_{i+1}, …, z_n)` with `p_i` of degrees `lo..=d`; the
/// first component always reaches degree `d`.
pub fn random_triangular(rng: &mut ChaCha8Rng, n: usize, d: u32, lo: u32) -> PolySystem {
    let comps = (0..n)
        .map(|i| {
            let later: Vec<usize> = (i + 1..n).collect();
            let mut p = Polynomial::zero(n);
            if !later.is_empty() {
                for k in lo..=d {
                    if k == d && i == 0 || rng.gen_bool(0.5) {
                        p = &p + &random_homogeneous(rng, n, k, &later, 0.6, false);
                    }
                }
            }
            &Polynomial::var(i, n) - &p
        })
        .collect();
    PolySystem::new(n, comps)
        .and_then(|s| s.with_degree_bound(d))
        .expect("degrees fit")
}

/// A random invertible linear map and its inverse, built from elementary
/// shears and scalings.
pub fn random_linear(rng: &mut ChaCha8Rng, n: usize) -> (PolySystem, PolySystem) {
    let mut l = PolySystem::identity(n);
    let mut linv = PolySystem::identity(n);
    if n == 0 {
        return (l, linv);
    }
    for _ in 0..2 * n {
        let mut e: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(i, n)).collect();
        let mut einv = e.clone();
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let c = random_rational(rng);
        if i == j {
            e[i] = e[i].scale(&c);
            einv[i] = einv[i].scale(&c.inv().expect("nonzero"));
        } else {
            e[i] = &e[i] + &Polynomial::var(j, n).scale(&c);
            einv[i] = &einv[i] - &Polynomial::var(j, n).scale(&c);
        }
        let e = PolySystem::new(n, e).expect("square");
        let einv = PolySystem::new(n, einv).expect("square");
        l = e.compose(&l).expect("same ring");
        linv = linv.compose(&einv).expect("same ring");
    }
    (l, linv)
}

/// `L⁻¹ ∘ T ∘ L`, keeping the degree bound of `T`.
pub fn conjugate(t: &PolySystem, l: &PolySystem, linv: &PolySystem) -> PolySystem {
    linv.compose(&t.compose(l).expect("same ring"))
        .and_then(|s| s.with_degree_bound(t.degree_bound()))
        .expect("degree is preserved")
}

/// Normalized corpus for the series criteria: `n ∈ {1, 2}`, `d ∈ {2, 3, 4}`.
pub fn normalized_corpus(seed: u64, count: usize) -> Vec<CouplingTensor> {
    (0..count)
        .map(|idx| {
            let mut rng = rng_for(seed, idx as u64);
            let n = 1 + idx % 2;
            let d = 2 + (idx / 2 % 3) as u32;
            let f = random_normalized(&mut rng, n, d, 2);
            CouplingTensor::from_system(&f).expect("normalized by construction")
        })
        .collect()
}

/// One source for the lin-side transport check.
#[derive(Clone, Debug)]
pub struct TransportCase {
    pub id: usize,
    pub kind: &'static str,
    pub system: PolySystem,
    /// Normalized with no quadratic couplings, so the qft variant applies.
    pub qft_compatible: bool,
}

/// 100 sources with `n = 2`, `d ∈ {3, 4}`, mixing conjugated triangular
/// maps, generic normalized maps and non-normalized compositions.
pub fn transport_corpus(seed: u64, count: usize) -> Vec<TransportCase> {
    (0..count)
        .map(|id| {
            let mut rng = rng_for(seed, id as u64);
            let d = 3 + (id % 2) as u32;
            let (l, linv) = random_linear(&mut rng, 2);
            let (kind, system, qft_compatible) = match id / 2 % 4 {
                0 => {
                    let t = random_triangular(&mut rng, 2, d, 2);
                    ("conjugated triangular", conjugate(&t, &l, &linv), false)
                }
                1 => {
                    let t = random_triangular(&mut rng, 2, d, 3);
                    ("conjugated triangular, cubic and up", conjugate(&t, &l, &linv), true)
                }
                2 => ("generic normalized", random_normalized(&mut rng, 2, d, 3), true),
                _ => {
                    let mut t = random_triangular(&mut rng, 2, d, 2);
                    if rng.gen_bool(0.5) {
                        let k = rng.gen_range(2..=d);
                        let extra = Polynomial::var(0, 2).pow(k).scale(&random_rational(&mut rng));
                        let mut comps = t.components().to_vec();
                        comps[0] = &comps[0] + &extra;
                        t = PolySystem::new(2, comps).unwrap().with_degree_bound(d).unwrap();
                    }
                    let (m, _) = random_linear(&mut rng, 2);
                    let s = m.compose(&t.compose(&l).unwrap()).unwrap().with_degree_bound(d).unwrap();
                    ("linear ∘ triangular ∘ linear, sometimes perturbed", s, false)
                }
            };
            TransportCase {
                id,
                kind,
                system,
                qft_compatible,
            }
        })
        .collect()
}

/// Curated sources for the invertibility side: `(system, invertible)`.
/// The invertible ones are conjugated triangular maps; the others carry a
/// term `c z_1^k`, `k ≥ 2`, on top of a triangular map, so their Jacobian
/// determinant is not constant.
pub fn invertibility_corpus(seed: u64, per_class: usize) -> Vec<(PolySystem, bool)> {
    let mut out = Vec::new();
    for id in 0..per_class {
        let mut rng = rng_for(seed, id as u64);
        let d = 3 + (id % 2) as u32;
        let lo = if id % 4 < 2 { 3 } else { 2 };
        let (l, linv) = random_linear(&mut rng, 2);
        let t = random_triangular(&mut rng, 2, d, lo);
        out.push((conjugate(&t, &l, &linv), true));
    }
    for id in 0..per_class {
        let mut rng = rng_for(seed, (1000 + id) as u64);
        let d = 3 + (id % 2) as u32;
        let lo = if id % 4 < 2 { 3 } else { 2 };
        let (l, linv) = random_linear(&mut rng, 2);
        let t = random_triangular(&mut rng, 2, d, lo);
        let k = rng.gen_range(lo..=d);
        let mut comps = t.components().to_vec();
        comps[0] = &comps[0] - &Polynomial::var(0, 2).pow(k).scale(&random_rational(&mut rng));
        let t = PolySystem::new(2, comps).unwrap().with_degree_bound(d).unwrap();
        out.push((conjugate(&t, &l, &linv), false));
    }
    out
}

/// `S = (S₁, R)` with `R = A(z₁) z₂ + b(z₁)`, `det A` a nonzero constant.
pub fn random_affine_split(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> PolySystem {
    let n = n1 + n2;
    let z1: Vec<usize> = (0..n1).collect();
    let mut comps: Vec<Polynomial> = (0..n1).map(|_| random_polynomial(rng, n, 1, 3, 0.3)).collect();
    let (m, _) = random_linear(rng, n2);
    // constant invertible A, then a unipotent z₁-dependent shear when n2 = 2
    let block: Vec<usize> = (n1..n).collect();
    let mut r: Vec<Polynomial> = m.components().iter().map(|c| c.embed(n, &block)).collect();
    if n2 == 2 && n1 > 0 {
        let k = rng.gen_range(1..=2);
        let p = random_homogeneous(rng, n, k, &z1, 0.6, false);
        r[0] = &r[0] + &(&p * &r[1]);
    }
    for c in r.iter_mut() {
        let b = if n1 > 0 {
            let k = rng.gen_range(1..=3);
            random_homogeneous(rng, n, k, &z1, 0.5, false)
        } else {
            Polynomial::zero(n)
        };
        *c = &*c + &b;
    }
    comps.extend(r);
    PolySystem::new(n, comps).expect("square")
}

// ---------------------------------------------------------------------------
// criteria

fn err_line(report: &mut CriterionReport, what: &str, e: crate::error::Error) {
    report.fail(format!("{what}: error {e}"));
}

/// Formal inverse satisfies `F(G(u)) = u` through θ-order 5.
pub fn criterion_1(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("1", "inversion round-trip through θ-order 5");
    let corpus = normalized_corpus(seed, 100);
    for (idx, w) in corpus.iter().enumerate() {
        let n = w.dim();
        let sources: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(i, n)).collect();
        let res = qft::formal_inverse_fixed_point(w, 5).and_then(|g| qft::inversion_defect(w, &sources, &g));
        match res {
            Ok(defect) => rep.check(defect.is_zero(), || {
                format!("system {idx}: defect at grade {:?}", defect.first_nonzero_grade())
            }),
            Err(e) => err_line(&mut rep, &format!("system {idx}"), e),
        }
    }
    rep.note(format!("{} systems, n ≤ 2, d ≤ 4, seed {seed}", corpus.len()));
    rep
}

fn catalan(k: u64) -> u64 {
    // C_k = binom(2k, k) / (k + 1)
    let mut c: u64 = 1;
    for i in 0..k {
        c = c * (2 * k - i) / (i + 1);
    }
    c / (k + 1)
}

/// Tree sum equals the fixed point grade by grade; Catalan check for the
/// one-dimensional quadratic.
pub fn criterion_2(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("2", "tree oracle equals the fixed point through order 5");
    let corpus = normalized_corpus(seed, 24);
    for (idx, w) in corpus.iter().enumerate() {
        let res = qft::formal_inverse_fixed_point(w, 5)
            .and_then(|g| qft::tree_oracle_inverse(w, 5).map(|t| (g, t)));
        match res {
            Ok((g, t)) => rep.check(g == t, || {
                let first = (0..=5).find(|&r| g.grade(r) != t.grade(r));
                format!("system {idx} (n={}, d={}): first differing grade {first:?}", w.dim(), w.max_degree())
            }),
            Err(e) => err_line(&mut rep, &format!("system {idx}"), e),
        }
    }
    let mut w = CouplingTensor::new(1, 2);
    w.add(0, &[0, 0], &Coefficient::one()).expect("valid index");
    match qft::formal_inverse_fixed_point(&w, 5) {
        Ok(g) => {
            for r in 0..=5usize {
                let expect = Polynomial::var(0, 1)
                    .pow(r as u32 + 1)
                    .scale(&Coefficient::from_int(catalan(r as u64) as i64));
                rep.check(g.grade(r)[0] == expect, || format!("grade {r} is {}, expected Catalan {}", g.grade(r)[0], catalan(r as u64)));
            }
        }
        Err(e) => err_line(&mut rep, "Catalan series", e),
    }
    rep.note(format!("{} systems plus the Catalan series 1, 1, 2, 5, 14, 42", corpus.len()));
    rep
}

/// `Z · det J_F(G) = 1` through θ-order 4.
pub fn criterion_3(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("3", "partition function times Jacobian determinant is 1");
    let corpus = normalized_corpus(seed, 100);
    for (idx, w) in corpus.iter().enumerate() {
        match qft::z_det_identity_check(w, 4) {
            Ok(c) => rep.check(c.holds, || format!("system {idx}: first bad grade {:?}", c.first_bad_grade)),
            Err(e) => err_line(&mut rep, &format!("system {idx}"), e),
        }
    }
    rep.note(format!("{} systems through order 4", corpus.len()));
    rep
}

fn variants_for(qft_compatible: bool) -> Vec<Variant> {
    if qft_compatible {
        vec![Variant::Algebraic, Variant::Qft]
    } else {
        vec![Variant::Algebraic]
    }
}

/// `is_jlin(F)` agrees with `is_jlin_partial(Φ(F), n)`, and the
/// determinant on the variety equals `det J_F`.
pub fn criterion_4(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("4", "lin-side transport through the reduction");
    let corpus = transport_corpus(seed, 100);
    let (mut members, mut qft_runs) = (0, 0);
    for case in &corpus {
        let f = &case.system;
        let lin = match jacobian::is_jlin(f) {
            Ok(v) => v,
            Err(e) => {
                err_line(&mut rep, &format!("source {}", case.id), e);
                continue;
            }
        };
        if lin.is_member() {
            members += 1;
        }
        for variant in variants_for(case.qft_compatible) {
            if variant == Variant::Qft {
                qft_runs += 1;
            }
            let res = reduction::phi(f, variant).and_then(|img| {
                let v = elimination::is_jlin_partial(&img.system, 2)?;
                let split = img.split()?;
                let rinv = elimination::invert_r(&split, None)?;
                let on_variety = elimination::det_on_variety(&split, &rinv)?.restrict_to_leading(2);
                Ok((v, on_variety))
            });
            match res {
                Ok((v, on_variety)) => {
                    rep.check(v.verdict == lin.verdict, || {
                        format!("source {} ({}), {variant}: {} vs {}", case.id, case.kind, lin.verdict, v.verdict)
                    });
                    let det = jacobian::det_jacobian(f).expect("square");
                    rep.check(on_variety == det, || {
                        format!("source {} ({}), {variant}: determinant on the variety differs", case.id, case.kind)
                    });
                }
                Err(e) => err_line(&mut rep, &format!("source {}, {variant}", case.id), e),
            }
        }
    }
    rep.note(format!(
        "{} sources ({members} members), {qft_runs} qft images, seed {seed}",
        corpus.len()
    ));
    if members == 0 || members == corpus.len() {
        rep.fail("corpus does not contain both classes".into());
    }
    rep
}

/// Certified inverse of `F` agrees with `is_j_partial(Φ(F), n)`; slice
/// inverses are certified and restrict to `F⁻¹`.
pub fn criterion_5(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("5", "invertibility-side transport through the reduction");
    let corpus = invertibility_corpus(seed, 20);
    for (idx, (f, invertible)) in corpus.iter().enumerate() {
        let src = match jacobian::certify_polynomial_inverse(f, None) {
            Ok(v) => v,
            Err(e) => {
                err_line(&mut rep, &format!("source {idx}"), e);
                continue;
            }
        };
        let expected = if *invertible { Verdict::Member } else { Verdict::NonMember };
        rep.check(src.verdict == expected, || format!("source {idx}: certify gave {}", src.verdict));
        let normalized_cubic = CouplingTensor::from_system(f).is_ok_and(|w| !w.has_degree(2));
        for variant in variants_for(normalized_cubic) {
            let res = reduction::phi(f, variant).and_then(|img| {
                let v = elimination::is_j_partial(&img.system, 2, None)?;
                let slice = match v.inverse() {
                    Some(hinv0) => {
                        let split = img.split()?;
                        let rinv = elimination::invert_r(&split, None)?;
                        Some(elimination::assemble_slice_inverse(&split, hinv0, &rinv)?)
                    }
                    None => None,
                };
                Ok((v, slice))
            });
            match res {
                Ok((v, slice)) => {
                    rep.check(v.verdict == src.verdict, || {
                        format!("source {idx}, {variant}: {} vs {}", src.verdict, v.verdict)
                    });
                    if let (Some(slice), Some(g)) = (slice, src.inverse()) {
                        rep.check(slice.components()[..2] == *g.components(), || {
                            format!("source {idx}, {variant}: slice inverse does not restrict to F⁻¹")
                        });
                    }
                }
                Err(e) => err_line(&mut rep, &format!("source {idx}, {variant}"), e),
            }
        }
    }
    rep.note(format!("{} curated sources, seed {seed}", corpus.len()));
    rep
}

/// Block determinant identity on reduced images and on random affine
/// splits.
pub fn criterion_6(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("6", "block determinant identity");
    let mut images = Vec::new();
    for case in transport_corpus(seed, 100) {
        for variant in variants_for(case.qft_compatible) {
            images.push((format!("image of source {} ({variant})", case.id), reduction::phi(&case.system, variant)));
        }
    }
    for (idx, (f, _)) in invertibility_corpus(seed, 20).iter().enumerate() {
        images.push((format!("image of curated source {idx}"), reduction::phi(f, Variant::Algebraic)));
    }
    let n_images = images.len();
    for (what, img) in images {
        let res = img.and_then(|img| {
            let split = img.split()?;
            let rinv = elimination::invert_r(&split, None)?;
            elimination::schur_identity_check(&split, &rinv)
        });
        match res {
            Ok(r) => rep.check(r.holds, || format!("{what}: lhs - rhs = {}", r.difference())),
            Err(e) => err_line(&mut rep, &what, e),
        }
    }
    for idx in 0..50 {
        let mut rng = rng_for(seed, 5000 + idx);
        let n1 = rng.gen_range(1..=2);
        let n2 = rng.gen_range(1..=2);
        let s = random_affine_split(&mut rng, n1, n2);
        let res = elimination::split(&s, n1).and_then(|split| {
            let rinv = elimination::invert_r(&split, None)?;
            elimination::schur_identity_check(&split, &rinv)
        });
        match res {
            Ok(r) => rep.check(r.holds, || format!("affine split {idx}: lhs - rhs = {}", r.difference())),
            Err(e) => err_line(&mut rep, &format!("affine split {idx}"), e),
        }
    }
    rep.note(format!("{n_images} reduced images and 50 affine splits, seed {seed}"));
    rep
}

/// Projection onto the instances where `R⁻¹` has the closed form.
fn with_affine_r(inst: &family::FamilyInstance) -> family::FamilyInstance {
    let mut out = inst.clone();
    for k in 0..inst.d as usize {
        out.a2[k] = Coefficient::zero();
    }
    out
}

/// Closed forms against the general classifiers, the specialized
/// determinant against the pipeline, and witnesses of both differences.
pub fn criterion_7_classifiers(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("7a", "two-dimensional family: closed forms and classifiers");
    for d in 2..=4u32 {
        let corpus = family::corpus(d, seed, 500);
        let report = match family::equality_jlin_j_partial_check(d, seed, &corpus) {
            Ok(r) => r,
            Err(e) => {
                err_line(&mut rep, &format!("d={d}"), e);
                continue;
            }
        };
        for r in &report.instances {
            rep.check(r.closed_forms_agree(), || format!("d={d}, instance {}: closed forms disagree", r.id));
            rep.check(r.partial_classes_agree(), || {
                format!("d={d}, instance {}: {} vs {}", r.id, r.jlin_partial, r.j_partial)
            });
        }
        match report.partial_only_witness() {
            Some(w) => rep.note(format!("d={d}: instance {} is in the partial class only", w.id)),
            None => rep.fail(format!("d={d}: no instance in the partial class only")),
        }
        match report.classical_only_witness() {
            Some(w) => rep.note(format!("d={d}: instance {} is in the classical class only", w.id)),
            None => rep.fail(format!("d={d}: no instance in the classical class only")),
        }
        for (id, inst) in corpus.iter().enumerate() {
            let p = with_affine_r(inst);
            let res = family::specialized_jacobian(&p)
                .and_then(|a| family::specialized_jacobian_pipeline(&p).map(|b| (a, b)));
            match res {
                Ok((a, b)) => rep.check(a == b, || format!("d={d}, instance {id}: specialized {a} vs pipeline {b}")),
                Err(e) => err_line(&mut rep, &format!("d={d}, instance {id}"), e),
            }
        }
    }
    rep.note(format!("500 instances per d ∈ {{2, 3, 4}}, seed {seed}"));
    rep
}

/// Termwise comparison with the displayed closed form of the specialized
/// determinant.
pub fn criterion_7_display(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("7b", "two-dimensional family: displayed specialized determinant");
    for d in 2..=4u32 {
        let mut counts = [0usize; 4];
        for (id, inst) in family::corpus(d, seed, 500).iter().enumerate() {
            match family::compare_with_display(&with_affine_r(inst)) {
                Ok(c) => {
                    if c.terms_checked == 0 {
                        continue;
                    }
                    counts[0] += usize::from(!c.coefficients_match);
                    counts[1] += usize::from(!c.sum_exponents_match);
                    counts[2] += usize::from(!c.final_exponent_matches);
                    counts[3] += usize::from(!c.final_coefficient_matches);
                    rep.check(c.criterion_holds(), || {
                        format!("d={d}, instance {id}: {}", c.mismatches.join("; "))
                    });
                }
                Err(e) => err_line(&mut rep, &format!("d={d}, instance {id}"), e),
            }
        }
        rep.note(format!(
            "d={d}: mismatching instances: coefficient {}, sum exponent {}, final exponent {}, final coefficient {}",
            counts[0], counts[1], counts[2], counts[3]
        ));
    }
    rep
}

fn random_cubic_quartic_tensor(rng: &mut ChaCha8Rng, n: usize, d: u32) -> CouplingTensor {
    let f = random_normalized(rng, n, d, 3);
    CouplingTensor::from_system(&f).expect("normalized by construction")
}

/// The reduced inverse restricted to `(u, 0)` reproduces `G`, and the
/// auxiliary coordinates have the closed form.
pub fn criterion_8(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("8", "inverse of the reduced system");
    for (n, d, order, count) in [(1usize, 3u32, 5usize, 5u64), (2, 4, 4, 3)] {
        for idx in 0..count {
            let mut rng = rng_for(seed, 8000 + 10 * n as u64 + idx);
            let w = random_cubic_quartic_tensor(&mut rng, n, d);
            match qft::reduced_inverse_check(&w, order) {
                Ok(r) => rep.check(r.holds(), || {
                    format!("n={n}, d={d}, instance {idx}: first bad grade {:?}", r.first_bad_grade)
                }),
                Err(e) => err_line(&mut rep, &format!("n={n}, d={d}, instance {idx}"), e),
            }
        }
    }
    rep.note("n=1, d=3 through order 5 and n=2, d=4 through order 4");
    rep
}

/// `G(u, θ) = λ⁻¹ G(λu, λ⁻¹θ)` for three values of `λ`.
pub fn criterion_9(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("9", "θ-homogeneity of the formal inverse");
    let corpus = normalized_corpus(seed, 30);
    let lambdas = [Coefficient::from_int(2), Coefficient::ratio(3, 2), Coefficient::from_int(-1)];
    for (idx, w) in corpus.iter().enumerate() {
        for l in &lambdas {
            match qft::theta_homogeneity_check(w, 4, l) {
                Ok(ok) => rep.check(ok, || format!("system {idx}, λ = {l}")),
                Err(e) => err_line(&mut rep, &format!("system {idx}, λ = {l}"), e),
            }
        }
    }
    rep.note(format!("{} systems, λ ∈ {{2, 3/2, -1}}, order 4", corpus.len()));
    rep
}

/// Euler identity on random homogeneous polynomials and the chain rule for
/// Jacobian determinants on random compositions.
pub fn criterion_10(seed: u64) -> CriterionReport {
    let mut rep = CriterionReport::new("10", "Euler identity and chain rule");
    for idx in 0..200u64 {
        let mut rng = rng_for(seed, 10_000 + idx);
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=4u32);
        let all: Vec<usize> = (0..n).collect();
        let a = random_homogeneous(&mut rng, n, d, &all, 0.5, true);
        let euler = (0..n).fold(Polynomial::zero(n), |acc, i| {
            &acc + &(&Polynomial::var(i, n) * &a.partial_derivative(i).expect("in range"))
        });
        let lhs = euler.scale(&Coefficient::ratio(1, d as i64));
        rep.check(lhs == a, || format!("homogeneous instance {idx}: {a}"));
    }
    for idx in 0..200u64 {
        let mut rng = rng_for(seed, 20_000 + idx);
        let n = rng.gen_range(1..=3);
        let mk = |rng: &mut ChaCha8Rng| {
            let comps = (0..n).map(|_| random_polynomial(rng, n, 0, 2, 0.4)).collect();
            PolySystem::new(n, comps).expect("square")
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let res = (|| -> Result<bool> {
            let lhs = jacobian::det_jacobian(&f.compose(&g)?)?;
            let rhs = &jacobian::det_jacobian(&g)? * &jacobian::det_jacobian(&f)?.compose(g.components())?;
            Ok(lhs == rhs)
        })();
        match res {
            Ok(ok) => rep.check(ok, || format!("composite instance {idx}")),
            Err(e) => err_line(&mut rep, &format!("composite instance {idx}"), e),
        }
    }
    rep.note(format!("200 homogeneous and 200 composite instances, seed {seed}"));
    rep
}

/// Every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_1(seed),
        criterion_2(seed),
        criterion_3(seed),
        criterion_4(seed),
        criterion_5(seed),
        criterion_6(seed),
        criterion_7_classifiers(seed),
        criterion_7_display(seed),
        criterion_8(seed),
        criterion_9(seed),
        criterion_10(seed),
    ]
}
