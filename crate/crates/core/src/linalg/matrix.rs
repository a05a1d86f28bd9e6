use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.render(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution<E> {
    pub particular: Option<Vec<E>>,
    pub kernel_basis: Vec<Vec<E>>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn from_cols(field: &F, rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(field: &F, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: entries.iter().map(|&x| field.from_i64(x)).collect(),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, b) in orow.iter().enumerate() {
                    if !f.is_zero(b) {
                        out.data[base + j] = f.mul_add(&out.data[base + j], a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.mul_add(&acc, a, b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, s)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// self + s * other
    pub fn add_scaled(&mut self, s: &F::Elem, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if self.field.is_zero(s) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !self.field.is_zero(b) {
                *a = self.field.mul_add(a, s, b);
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> F::Elem {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t = self.field.add(&t, self.get(i, i));
        }
        t
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row count");
        let mut out = Self::zeros(&self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column count");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| !f.is_zero(m.get(r, c))) else {
                continue;
            };
            m.swap_rows(prow, r);
            let inv = f.inv(m.get(prow, c)).expect("nonzero pivot");
            m.scale_row(prow, &inv);
            let pivot_row: Vec<F::Elem> = m.row(prow).to_vec();
            for r in 0..m.rows {
                if r == prow {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let neg = f.neg(&factor);
                let base = r * m.cols;
                for (j, pv) in pivot_row.iter().enumerate().skip(c) {
                    if !f.is_zero(pv) {
                        m.data[base + j] = f.mul_add(&m.data[base + j], &neg, pv);
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &F::Elem) {
        for c in 0..self.cols {
            let v = self.field.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space {x : self * x = 0}, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let Rref { matrix, pivots } = self.rref();
        kernel_from_rref(&self.field, &matrix, &pivots, self.cols)
    }

    /// Some x with self * x = b, if one exists.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let bm = Matrix::from_cols(&self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&bm);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(matrix.select(&rows, &cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Nilpotent iff its n-th power vanishes.
    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        let mut m = self.clone();
        let mut reach = 1usize;
        while reach < self.rows {
            m = m.mul(&m);
            reach *= 2;
            if m.is_zero() {
                return true;
            }
        }
        m.is_zero()
    }

    /// Basis of the column space (as vectors), in RREF-of-transpose normal form.
    pub fn column_space(&self) -> Vec<Vec<F::Elem>> {
        let t = self.transpose().rref();
        (0..t.pivots.len()).map(|r| t.matrix.row(r).to_vec()).collect()
    }
}

pub(crate) fn kernel_from_rref<F: Field>(
    field: &F,
    rref: &Matrix<F>,
    pivots: &[usize],
    ncols: usize,
) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(rref.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Solve A x = b, returning one solution (if consistent) and a kernel basis.
pub fn solve_linear<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<LinearSolution<F::Elem>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("{:?} vs {:?}", a.field().spec(), b.field().spec())));
    }
    if b.cols() != 1 || b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, b is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(LinearSolution { particular: a.solve(&b.col(0)), kernel_basis: a.kernel() })
}

pub fn vec_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn vec_scale<F: Field>(f: &F, s: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(s, x)).collect()
}

/// a += s * b
pub fn vec_axpy<F: Field>(f: &F, a: &mut [F::Elem], s: &F::Elem, b: &[F::Elem]) {
    if f.is_zero(s) {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !f.is_zero(y) {
            *x = f.mul_add(x, s, y);
        }
    }
}

pub fn vec_is_zero<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    a.iter().all(|x| f.is_zero(x))
}

pub fn unit_vec<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};

    #[test]
    fn identity_system_over_f2() {
        let f = PrimeField::new(2).unwrap();
        let a = Matrix::identity(&f, 2);
        let b = Matrix::from_i64(&f, 2, 1, &[1, 0]);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.particular, Some(vec![1, 0]));
        assert!(s.kernel_basis.is_empty());
    }

    #[test]
    fn zero_system() {
        let f = PrimeField::new(2).unwrap();
        let a = Matrix::zeros(&f, 2, 2);
        let b = Matrix::from_i64(&f, 2, 1, &[0, 0]);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.particular, Some(vec![0, 0]));
        assert_eq!(s.kernel_basis.len(), 2);
    }

    #[test]
    fn inconsistent_rank_one_over_q() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, 2, 2, &[1, 1, 1, 1]);
        let b = Matrix::from_i64(&q, 2, 1, &[1, 0]);
        let s = solve_linear(&a, &b).unwrap();
        assert!(s.particular.is_none());
        assert_eq!(s.kernel_basis.len(), 1);
    }

    #[test]
    fn shape_errors() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, 2, 2, &[1, 0, 0, 1]);
        let b = Matrix::from_i64(&q, 3, 1, &[1, 0, 0]);
        assert!(matches!(solve_linear(&a, &b), Err(Error::DimensionMismatch(_))));
        let f = PrimeField::new(3).unwrap();
        let a3 = Matrix::from_i64(&f, 2, 2, &[1, 0, 0, 1]);
        let b2 = Matrix::from_i64(&PrimeField::new(5).unwrap(), 2, 1, &[1, 0]);
        assert!(matches!(solve_linear(&a3, &b2), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, 3, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(&q, 3));
        let sing = Matrix::from_i64(&q, 2, 2, &[1, 2, 2, 4]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn nilpotency() {
        let f = PrimeField::new(3).unwrap();
        let j = Matrix::from_i64(&f, 3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert!(j.is_nilpotent());
        assert!(!Matrix::identity(&f, 3).is_nilpotent());
    }
}
