//! Dense matrices over the exact rings used in this crate, with
//! determinants by cofactor expansion and by expansion over memoized
//! minors (any ring), and by fraction-free Bareiss elimination
//! (polynomials).

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// The handful of ring operations the matrix routines need.
pub trait Ring: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
}

impl Ring for Polynomial {
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        Polynomial::one(self.nvars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PolyMatrix = Matrix<Polynomial>;

impl<T: Ring> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Precondition("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::NonSquare {
                rows: self.cols,
                cols: other.rows,
            });
        }
        let zero = self.data.first().or(other.data.first()).map(T::zero_like);
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone().expect("non-empty matrix");
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero_elem() && !b.is_zero_elem() {
                    acc = acc.ring_add(&a.ring_mul(b));
                }
            }
            acc
        }))
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows {
            acc = acc.ring_add(self.get(i, i));
        }
        Ok(acc)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// Laplace expansion along the first row. `unit` is returned for the
    /// empty matrix.
    pub fn det_cofactor(&self, unit: &T) -> Result<T> {
        self.require_square()?;
        Ok(self.det_rec(unit))
    }

    fn det_rec(&self, unit: &T) -> T {
        match self.rows {
            0 => unit.one_like(),
            1 => self.data[0].clone(),
            2 => self
                .get(0, 0)
                .ring_mul(self.get(1, 1))
                .ring_sub(&self.get(0, 1).ring_mul(self.get(1, 0))),
            n => {
                let mut acc = unit.zero_like();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero_elem() {
                        continue;
                    }
                    let term = a.ring_mul(&self.minor(0, j).det_rec(unit));
                    acc = if j % 2 == 0 {
                        acc.ring_add(&term)
                    } else {
                        acc.ring_sub(&term)
                    };
                }
                acc
            }
        }
    }

    /// Laplace expansion with every minor on the trailing rows computed
    /// once: `n 2^(n-1)` ring products and no division.
    pub fn det_minors(&self, unit: &T) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(unit.one_like());
        }
        // minors[mask] = det of the last |mask| rows on the columns in mask
        let mut minors: Vec<Option<T>> = vec![None; 1 << n];
        minors[0] = Some(unit.one_like());
        for k in 1..=n {
            let row = n - k;
            for mask in 1usize..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let mut acc = unit.zero_like();
                let mut sign_pos = true;
                for j in 0..n {
                    if mask & (1 << j) == 0 {
                        continue;
                    }
                    let a = self.get(row, j);
                    let rest = minors[mask & !(1 << j)].as_ref().expect("smaller minors come first");
                    if !a.is_zero_elem() && !rest.is_zero_elem() {
                        let term = a.ring_mul(rest);
                        acc = if sign_pos { acc.ring_add(&term) } else { acc.ring_sub(&term) };
                    }
                    sign_pos = !sign_pos;
                }
                minors[mask] = Some(acc);
            }
        }
        Ok(minors[(1 << n) - 1].take().expect("full minor"))
    }

    /// Classical adjugate, `adj(M)_{ij} = (-1)^{i+j} det M_{ji}`.
    pub fn adjugate(&self, unit: &T) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(Matrix::from_fn(1, 1, |_, _| unit.one_like()));
        }
        Ok(Matrix::from_fn(n, n, |i, j| {
            let d = self.minor(j, i).det_rec(unit);
            if (i + j) % 2 == 0 {
                d
            } else {
                unit.zero_like().ring_sub(&d)
            }
        }))
    }
}

impl PolyMatrix {
    /// Fraction-free Bareiss elimination; every division is exact.
    pub fn det_bareiss(&self) -> Result<Polynomial> {
        self.require_square()?;
        let n = self.rows;
        let nvars = self.data.first().map_or(0, Polynomial::nvars);
        if n == 0 {
            return Ok(Polynomial::one(nvars));
        }
        let mut m: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = Polynomial::one(nvars);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(Polynomial::zero(nvars)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev)?;
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -&det } else { det })
    }

    /// Exact determinant by expansion over memoized minors.
    pub fn det(&self) -> Result<Polynomial> {
        let nvars = self.data.first().map_or(0, Polynomial::nvars);
        self.det_minors(&Polynomial::one(nvars))
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero(nvars)
            }
        })
    }

    /// Substitutes `subs` into every entry.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|p| p.compose(subs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Coefficient;

    fn z(i: usize) -> Polynomial {
        Polynomial::var(i, 3)
    }

    fn k(n: i64) -> Polynomial {
        Polynomial::constant(Coefficient::from_int(n), 3)
    }

    #[test]
    fn identity_has_unit_determinant() {
        for n in 1..6 {
            assert_eq!(PolyMatrix::identity(n, 2).det().unwrap(), Polynomial::one(2));
        }
    }

    #[test]
    fn triangular_determinant() {
        let m = PolyMatrix::from_rows(vec![
            vec![k(1), k(0)],
            vec![z(1).scale(&(-2).into()), k(1)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), k(1));
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        // a 4x4 matrix with a zero leading pivot, forcing a row swap
        let rows = vec![
            vec![k(0), z(0), &z(1) + &k(1), k(2)],
            vec![z(2), k(1), &z(0) * &z(1), k(0)],
            vec![k(3), &z(2) - &z(0), k(0), z(1)],
            vec![z(0), k(0), k(1), &z(2) * &z(2)],
        ];
        let m = PolyMatrix::from_rows(rows).unwrap();
        let a = m.det_bareiss().unwrap();
        let b = m.det_cofactor(&k(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(m.det_minors(&k(1)).unwrap(), b);
        assert!(!a.is_zero());
    }

    #[test]
    fn singular_matrix() {
        let m = PolyMatrix::from_rows(vec![
            vec![z(0), z(1), k(0), k(0)],
            vec![z(0), z(1), k(0), k(0)],
            vec![k(0), k(0), k(1), k(0)],
            vec![k(0), k(0), k(0), k(1)],
        ])
        .unwrap();
        assert!(m.det_bareiss().unwrap().is_zero());
    }

    #[test]
    fn non_square_is_an_error() {
        let m = PolyMatrix::from_rows(vec![vec![k(1), k(2)]]).unwrap();
        assert!(matches!(m.det(), Err(Error::NonSquare { rows: 1, cols: 2 })));
    }

    #[test]
    fn adjugate_inverts() {
        let m = PolyMatrix::from_rows(vec![
            vec![k(1), z(0), k(0)],
            vec![k(0), k(1), z(1)],
            vec![k(0), k(0), k(1)],
        ])
        .unwrap();
        let adj = m.adjugate(&k(1)).unwrap();
        assert_eq!(m.checked_mul(&adj).unwrap(), PolyMatrix::identity(3, 3));
    }
}
