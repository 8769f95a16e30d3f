//! θ-graded formal inverses, the partition function and the identities
//! tying them to Jacobian determinants and to the reduced system.
//!
//! Couplings of degree `k` carry the weight `θ^(k-1)`, so the grade of a
//! term of the inverse counts `Σ (k_v - 1)` over the vertices of the trees
//! producing it. With sources `u`, grade `r` of `G` is homogeneous of
//! degree `r + 1` in `u`.

pub mod tree;

use crate::coeff::Coefficient;
use crate::coupling::CouplingTensor;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::reduction;
use crate::series::{evaluate, GradedSeries, GradedSeriesVector};

pub use tree::{enumerate_trees, tree_amplitude, tree_oracle_inverse, Amplitude, PlaneTree};

fn source_vars(n: usize) -> Vec<Polynomial> {
    (0..n).map(|i| Polynomial::var(i, n)).collect()
}

/// Grade-by-grade solution of `G_i = u_i + Σ_k θ^(k-1) W_i^(k)(G)`.
pub fn formal_inverse_fixed_point(w: &CouplingTensor, order: usize) -> Result<GradedSeriesVector> {
    formal_inverse_with_sources(w, &source_vars(w.dim()), order)
}

/// As [`formal_inverse_fixed_point`] with arbitrary grade-0 sources, all
/// living in a common ring.
pub fn formal_inverse_with_sources(
    w: &CouplingTensor,
    sources: &[Polynomial],
    order: usize,
) -> Result<GradedSeriesVector> {
    let n = w.dim();
    if sources.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: sources.len(),
        });
    }
    let nvars = sources.first().map_or(0, Polynomial::nvars);
    let parts: Vec<(usize, Vec<Polynomial>)> = (2..=w.max_degree())
        .filter(|&k| w.has_degree(k))
        .map(|k| (k as usize, w.homogeneous_part(k)))
        .collect();
    let mut g: Vec<GradedSeries> = sources
        .iter()
        .map(|s| GradedSeries::from_grade(s.clone(), 0, order))
        .collect();
    for r in 1..=order {
        let mut next = vec![Polynomial::zero(nvars); n];
        for (k, wk) in &parts {
            if k - 1 > r {
                continue;
            }
            let s = r - (k - 1);
            let args: Vec<GradedSeries> = g.iter().map(|gi| gi.truncate(s)).collect();
            for (i, wi) in wk.iter().enumerate() {
                if wi.is_zero() {
                    continue;
                }
                next[i] = &next[i] + evaluate(wi, &args, s)?.grade(s);
            }
        }
        for (gi, p) in g.iter_mut().zip(next) {
            let mut grades = gi.grades().to_vec();
            grades[r] = p;
            *gi = GradedSeries::from_grades(nvars, grades)?;
        }
    }
    GradedSeriesVector::from_components(nvars, &g)
}

/// `F(G) - sources` with `F = z - Σ θ^(k-1) W^(k)`, through the order of
/// `g`.
pub fn inversion_defect(
    w: &CouplingTensor,
    sources: &[Polynomial],
    g: &GradedSeriesVector,
) -> Result<GradedSeriesVector> {
    let order = g.order();
    let comps = g.components();
    let mut out = Vec::with_capacity(w.dim());
    for i in 0..w.dim() {
        let mut acc = comps[i].sub(&GradedSeries::from_grade(sources[i].clone(), 0, order));
        for k in 2..=w.max_degree() {
            let wi = &w.homogeneous_part(k)[i];
            if wi.is_zero() {
                continue;
            }
            acc = acc.sub(&evaluate(wi, &comps, order)?.shift(k as usize - 1));
        }
        out.push(acc);
    }
    GradedSeriesVector::from_components(g.nvars(), &out)
}

/// `M = 1 - J_F(G(u))` as a graded matrix, entry `(i, j)` equal to
/// `Σ_k θ^(k-1) ∂_i W_j^(k)` evaluated at `G`.
pub fn one_minus_jacobian_at(w: &CouplingTensor, g: &GradedSeriesVector) -> Result<Matrix<GradedSeries>> {
    let n = w.dim();
    let order = g.order();
    let comps = g.components();
    let nvars = g.nvars();
    let mut entries = vec![GradedSeries::zero(nvars, order); n * n];
    for k in 2..=w.max_degree() {
        if !w.has_degree(k) {
            continue;
        }
        let wk = w.homogeneous_part(k);
        for (j, wj) in wk.iter().enumerate() {
            for i in 0..n {
                let d = wj.partial_derivative(i)?;
                if d.is_zero() {
                    continue;
                }
                let v = evaluate(&d, &comps, order)?.shift(k as usize - 1);
                entries[i * n + j] = entries[i * n + j].add(&v);
            }
        }
    }
    Ok(Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone()))
}

/// `det J_F(G(u))` by cofactor expansion over graded series.
pub fn jacobian_det_at(w: &CouplingTensor, g: &GradedSeriesVector) -> Result<GradedSeries> {
    let m = one_minus_jacobian_at(w, g)?;
    let one = GradedSeries::one(g.nvars(), g.order());
    let j = Matrix::from_fn(m.rows(), m.cols(), |i, k| {
        if i == k {
            one.sub(m.get(i, k))
        } else {
            GradedSeries::zero(g.nvars(), g.order()).sub(m.get(i, k))
        }
    });
    j.det_minors(&one)
}

/// `ln Z(0,u) = Σ_{r≥1} (1/r) tr((1 - J_F(G(u)))^r)` through θ-order `order`.
pub fn log_partition_function(w: &CouplingTensor, order: usize) -> Result<GradedSeries> {
    let g = formal_inverse_fixed_point(w, order)?;
    let m = one_minus_jacobian_at(w, &g)?;
    let n = w.dim();
    let mut acc = GradedSeries::zero(n, order);
    let mut power = m.clone();
    // M has no grade 0, so M^r starts at grade r
    for r in 1..=order {
        if r > 1 {
            power = power.checked_mul(&m)?;
        }
        acc = acc.add(&power.trace()?.scale(&Coefficient::ratio(1, r as i64)));
    }
    Ok(acc)
}

/// Outcome of comparing two graded quantities grade by grade.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedCheck {
    pub holds: bool,
    pub order: usize,
    /// Lowest grade where the two sides differ.
    pub first_bad_grade: Option<usize>,
    pub residual: Option<Polynomial>,
}

impl GradedCheck {
    fn from_residual(r: &GradedSeries) -> Self {
        let first = r.first_nonzero_grade();
        GradedCheck {
            holds: first.is_none(),
            order: r.order(),
            first_bad_grade: first,
            residual: first.map(|g| r.grade(g).clone()),
        }
    }
}

/// `exp(ln Z) · det J_F(G(u)) ≡ 1` through θ-order `order`.
pub fn z_det_identity_check(w: &CouplingTensor, order: usize) -> Result<GradedCheck> {
    let g = formal_inverse_fixed_point(w, order)?;
    let z = log_partition_function(w, order)?.exp()?;
    let det = jacobian_det_at(w, &g)?;
    let residual = z.mul(&det).sub(&GradedSeries::one(w.dim(), order));
    Ok(GradedCheck::from_residual(&residual))
}

/// The matrix `L_{a,b} = Σ_k θ^(k-1) Σ_ℓ Σ_{j: j_ℓ = b} w_{a,j_1..j_k}
/// Π_{m≠ℓ} G_{j_m}` built by direct contraction of the redundant tensor.
fn chain_matrix(w: &CouplingTensor, g: &GradedSeriesVector) -> Vec<Vec<GradedSeries>> {
    let n = w.dim();
    let order = g.order();
    let nvars = g.nvars();
    let comps = g.components();
    let mut l = vec![vec![GradedSeries::zero(nvars, order); n]; n];
    for k in 2..=w.max_degree() as usize {
        if !w.has_degree(k as u32) || k - 1 > order {
            continue;
        }
        let mut seq = vec![0usize; k];
        loop {
            for (a, row) in l.iter_mut().enumerate() {
                let c = w.full_entry(a, &seq);
                if c.is_zero() {
                    continue;
                }
                for slot in 0..k {
                    let mut prod = GradedSeries::one(nvars, order).scale(&c);
                    for (m, &j) in seq.iter().enumerate() {
                        if m != slot {
                            prod = prod.mul(&comps[j]);
                        }
                    }
                    let b = seq[slot];
                    row[b] = row[b].add(&prod.shift(k - 1));
                }
            }
            if !tree::advance(&mut seq, n) {
                break;
            }
        }
    }
    l
}

/// One-loop graphs of cycle length `r`: `(1/r) Σ_{b_1..b_r} Π L_{b_m b_{m+1}}`
/// summed over explicit index cycles.
pub fn cycle_expansion(w: &CouplingTensor, order: usize, r: usize) -> Result<GradedSeries> {
    if r == 0 {
        return Err(Error::Precondition("cycle length must be positive".into()));
    }
    let g = formal_inverse_fixed_point(w, order)?;
    let l = chain_matrix(w, &g);
    let n = w.dim();
    let mut acc = GradedSeries::zero(n, order);
    let mut cycle = vec![0usize; r];
    loop {
        let mut prod = GradedSeries::one(n, order);
        for m in 0..r {
            prod = prod.mul(&l[cycle[m]][cycle[(m + 1) % r]]);
        }
        acc = acc.add(&prod);
        if !tree::advance(&mut cycle, n) {
            break;
        }
    }
    Ok(acc.scale(&Coefficient::ratio(1, r as i64)))
}

/// `(1/r) tr(M^r)` from the Jacobian route, for comparison with
/// [`cycle_expansion`].
pub fn trace_power_term(w: &CouplingTensor, order: usize, r: usize) -> Result<GradedSeries> {
    let g = formal_inverse_fixed_point(w, order)?;
    let m = one_minus_jacobian_at(w, &g)?;
    let mut p = m.clone();
    for _ in 1..r {
        p = p.checked_mul(&m)?;
    }
    Ok(p.trace()?.scale(&Coefficient::ratio(1, r as i64)))
}

#[derive(Clone, PartialEq, Debug)]
pub struct ReducedInverseReport {
    pub order: usize,
    pub source_dim: usize,
    pub degree: u32,
    /// `G̃_i(ũ) = G_i(u)` for `i < n`.
    pub first_block_equal: bool,
    /// `G̃_{n+i·n+j} = θ^(d-2) Σ w^(d)_{i,j,j2..jd} G_{j2}…G_{jd}`.
    pub auxiliary_closed_form: bool,
    pub first_bad_grade: Option<usize>,
}

impl ReducedInverseReport {
    pub fn holds(&self) -> bool {
        self.first_block_equal && self.auxiliary_closed_form
    }
}

/// Compares the inverse of the reduced coupling tensor, fed with
/// `ũ = (u, 0, …, 0)`, against the original inverse.
pub fn reduced_inverse_check(w: &CouplingTensor, order: usize) -> Result<ReducedInverseReport> {
    let n = w.dim();
    let d = w.max_degree();
    let wt = reduction::phi_qft(w)?;
    let g = formal_inverse_fixed_point(w, order)?;
    let mut sources = source_vars(n);
    sources.extend((0..n * n).map(|_| Polynomial::zero(n)));
    let gt = formal_inverse_with_sources(&wt, &sources, order)?;

    let mut first_bad = None;
    let mut note_bad = |r: usize| {
        first_bad = Some(first_bad.map_or(r, |b: usize| b.min(r)));
    };
    let mut first_block_equal = true;
    for r in 0..=order {
        if g.grade(r)[..n] != gt.grade(r)[..n] {
            first_block_equal = false;
            note_bad(r);
        }
    }

    let comps = g.components();
    let mut auxiliary_closed_form = true;
    for i in 0..n {
        for j in 0..n {
            let mut expect = GradedSeries::zero(n, order);
            let mut seq = vec![0usize; d as usize - 1];
            loop {
                let mut full = vec![j];
                full.extend(&seq);
                let c = w.full_entry(i, &full);
                if !c.is_zero() {
                    let prod = seq
                        .iter()
                        .fold(GradedSeries::one(n, order).scale(&c), |acc, &jj| acc.mul(&comps[jj]));
                    expect = expect.add(&prod);
                }
                if !tree::advance(&mut seq, n) {
                    break;
                }
            }
            let expect = expect.shift(d as usize - 2);
            let got = gt.component(reduction::aux_index(n, i, j));
            if let Some(r) = got.sub(&expect).first_nonzero_grade() {
                auxiliary_closed_form = false;
                note_bad(r);
            }
        }
    }
    Ok(ReducedInverseReport {
        order,
        source_dim: n,
        degree: d,
        first_block_equal,
        auxiliary_closed_form,
        first_bad_grade: first_bad,
    })
}

/// Checks `G(u, θ) = λ⁻¹ G(λu, λ⁻¹θ)` grade by grade: grade `r` of the
/// right side is `λ^(-r-1) g_r(λu)`.
pub fn theta_homogeneity_check(w: &CouplingTensor, order: usize, lambda: &Coefficient) -> Result<bool> {
    if lambda.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let g = formal_inverse_fixed_point(w, order)?;
    Ok(rescaled(&g, lambda, -1)? == g)
}

/// `λ^p · G(λu, λ⁻¹θ)` as a graded vector.
pub fn rescaled(g: &GradedSeriesVector, lambda: &Coefficient, prefactor_power: i32) -> Result<GradedSeriesVector> {
    let n = g.nvars();
    let subs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(i, n).scale(lambda)).collect();
    let comps = g
        .components()
        .iter()
        .map(|c| {
            let grades = c
                .grades()
                .iter()
                .enumerate()
                .map(|(r, p)| Ok(p.compose(&subs)?.scale(&lambda.powi(prefactor_power - r as i32)?)))
                .collect::<Result<Vec<_>>>()?;
            GradedSeries::from_grades(n, grades)
        })
        .collect::<Result<Vec<_>>>()?;
    GradedSeriesVector::from_components(n, &comps)
}
