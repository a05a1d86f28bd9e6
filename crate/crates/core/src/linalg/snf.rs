use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Small dense integer matrix, used for Cartan matrices and their Smith forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} integer matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("integer matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let t = self.get(i, k).checked_mul(other.get(k, j)).ok_or(Error::Overflow("product"))?;
                    acc = acc.checked_add(t).ok_or(Error::Overflow("product"))?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return Ok(0);
                };
                a.swap(k, s);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(Error::Overflow("determinant"))?;
                    a[i][j] = v / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow("determinant"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal entries, each dividing the next; length min(rows, cols).
    pub diag: Vec<u64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

fn row_op(m: &mut IntMatrix, target: usize, src: usize, q: i64) -> Result<()> {
    for c in 0..m.cols {
        let v = m.get(target, c).checked_sub(q.checked_mul(m.get(src, c)).ok_or(Error::Overflow("snf"))?).ok_or(Error::Overflow("snf"))?;
        m.set(target, c, v);
    }
    Ok(())
}

fn col_op(m: &mut IntMatrix, target: usize, src: usize, q: i64) -> Result<()> {
    for r in 0..m.rows {
        let v = m.get(r, target).checked_sub(q.checked_mul(m.get(r, src)).ok_or(Error::Overflow("snf"))?).ok_or(Error::Overflow("snf"))?;
        m.set(r, target, v);
    }
    Ok(())
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for c in 0..m.cols {
        m.data.swap(a * m.cols + c, b * m.cols + c);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in 0..m.rows {
        m.data.swap(r * m.cols + a, r * m.cols + b);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols {
        let v = -m.get(r, c);
        m.set(r, c, v);
    }
}

/// Smith normal form with unimodular transforms: left * a * right = diag.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm> {
    let mut m = a.clone();
    let mut left = IntMatrix::identity(a.rows);
    let mut right = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);
    for t in 0..n {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for r in t..m.rows {
            for c in t..m.cols {
                let v = m.get(r, c);
                if v != 0 && best.map_or(true, |(br, bc)| v.abs() < m.get(br, bc).abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        swap_rows(&mut m, t, pr);
        swap_rows(&mut left, t, pr);
        swap_cols(&mut m, t, pc);
        swap_cols(&mut right, t, pc);
        loop {
            let mut changed = false;
            for r in t + 1..m.rows {
                let q = m.get(r, t).div_euclid(m.get(t, t));
                if q != 0 {
                    row_op(&mut m, r, t, q)?;
                    row_op(&mut left, r, t, q)?;
                }
                if m.get(r, t) != 0 {
                    swap_rows(&mut m, t, r);
                    swap_rows(&mut left, t, r);
                    changed = true;
                }
            }
            for c in t + 1..m.cols {
                let q = m.get(t, c).div_euclid(m.get(t, t));
                if q != 0 {
                    col_op(&mut m, c, t, q)?;
                    col_op(&mut right, c, t, q)?;
                }
                if m.get(t, c) != 0 {
                    swap_cols(&mut m, t, c);
                    swap_cols(&mut right, t, c);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let d = m.get(t, t);
            let bad = (t + 1..m.rows).find(|&r| (t + 1..m.cols).any(|c| m.get(r, c) % d != 0));
            match bad {
                Some(r) => {
                    row_op(&mut m, t, r, -1)?;
                    row_op(&mut left, t, r, -1)?;
                }
                None => break,
            }
        }
        if m.get(t, t) < 0 {
            negate_row(&mut m, t);
            negate_row(&mut left, t);
        }
    }
    let diag = (0..n).map(|i| m.get(i, i).unsigned_abs()).collect();
    Ok(SmithForm { diag, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hand elimination oracle for 2x2 inputs: d1 = gcd of entries, d1*d2 = |det|.
    fn snf_2x2_oracle(m: [[i64; 2]; 2]) -> (u64, u64) {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let g = [m[0][0], m[0][1], m[1][0], m[1][1]].iter().fold(0u64, |acc, x| gcd(acc, x.unsigned_abs()));
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).unsigned_abs();
        if g == 0 {
            (0, 0)
        } else {
            (g, det / g)
        }
    }

    fn check(m: [[i64; 2]; 2]) {
        let a = IntMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]);
        let s = smith_normal_form(&a).unwrap();
        let (d1, d2) = snf_2x2_oracle(m);
        assert_eq!(s.diag, vec![d1, d2], "input {m:?}");
        let prod = s.left.mul(&a).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod.get(0, 0) as u64, d1);
        assert_eq!(prod.get(1, 1).unsigned_abs(), d2);
        assert_eq!(prod.get(0, 1), 0);
        assert_eq!(prod.get(1, 0), 0);
        assert_eq!(s.left.determinant().unwrap().abs(), 1);
        assert_eq!(s.right.determinant().unwrap().abs(), 1);
    }

    #[test]
    fn cartan_of_two_vertex_algebra() {
        check([[3, 1], [1, 2]]);
        let a = IntMatrix::from_rows(&[vec![3, 1], vec![1, 2]]);
        assert_eq!(smith_normal_form(&a).unwrap().diag, vec![1, 5]);
    }

    #[test]
    fn trivial_cases() {
        check([[2, 0], [0, 2]]);
        check([[0, 0], [0, 0]]);
        check([[3, 2], [2, 3]]);
        check([[4, 6], [6, 4]]);
    }

    #[test]
    fn rectangular() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12]]);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.diag, vec![2, 6]);
    }

    #[test]
    fn determinant_small() {
        let a = IntMatrix::from_rows(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        assert_eq!(a.determinant().unwrap(), 4);
    }
}
