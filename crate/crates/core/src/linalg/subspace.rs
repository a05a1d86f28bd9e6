use super::field::Field;
use super::matrix::{vec_axpy, vec_is_zero, Matrix};

/// A subspace of F^n held as the nonzero rows of a reduced row echelon form.
/// Coordinates with respect to those rows are read off the pivot entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| super::matrix::unit_vec(field, ambient, i)).collect();
        Subspace { field: field.clone(), ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn span(field: &F, ambient: usize, vectors: &[Vec<F::Elem>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let m = Matrix::from_rows(field, ambient, vectors);
        let r = m.rref();
        let rows = (0..r.pivots.len()).map(|i| r.matrix.row(i).to_vec()).collect();
        Subspace { field: field.clone(), ambient, rows, pivots: r.pivots }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The representative of v modulo this subspace that vanishes on every pivot.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&out[p]) {
                let c = f.neg(&out[p]);
                vec_axpy(f, &mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        vec_is_zero(&self.field, &self.reduce(v))
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn combine(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            vec_axpy(&self.field, &mut out, c, row);
        }
        out
    }

    /// Adds v to the subspace; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field.clone();
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = f.neg(&row[p]);
                vec_axpy(&f, row, &c, &w);
            }
        }
        let pos = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.rows.insert(pos, w);
        self.pivots.insert(pos, p);
        true
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for v in &other.rows {
            out.insert(v);
        }
        out
    }

    pub fn intersect(&self, other: &Self) -> Self {
        // x = sum a_i u_i = sum b_j w_j ; solve on the stacked coefficient system.
        let f = &self.field;
        let k1 = self.dim();
        let k2 = other.dim();
        if k1 == 0 || k2 == 0 {
            return Self::zero(f, self.ambient);
        }
        let mut cols = Vec::with_capacity(k1 + k2);
        for u in &self.rows {
            cols.push(u.clone());
        }
        for w in &other.rows {
            cols.push(w.iter().map(|x| f.neg(x)).collect());
        }
        let m = Matrix::from_cols(f, self.ambient, &cols);
        let vs: Vec<Vec<F::Elem>> =
            m.kernel().into_iter().map(|k| self.combine(&k[..k1])).collect();
        Self::span(f, self.ambient, &vs)
    }

    /// Indices of the standard basis vectors not hit by a pivot; they span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn as_columns(&self) -> Matrix<F> {
        Matrix::from_cols(&self.field, self.ambient, &self.rows)
    }
}

/// A quotient Z/B of two nested subspaces, with canonical representatives:
/// representatives are reduced modulo B and then put in echelon form.
#[derive(Clone, Debug)]
pub struct QuotientSpace<F: Field> {
    sub: Subspace<F>,
    reps: Subspace<F>,
}

impl<F: Field> QuotientSpace<F> {
    /// `top` must contain `bottom`; only `top`'s span matters.
    pub fn new(field: &F, ambient: usize, top: &[Vec<F::Elem>], bottom: &[Vec<F::Elem>]) -> Self {
        let sub = Subspace::span(field, ambient, bottom);
        let reduced: Vec<Vec<F::Elem>> = top.iter().map(|v| sub.reduce(v)).collect();
        let reps = Subspace::span(field, ambient, &reduced);
        QuotientSpace { sub, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }
    pub fn representatives(&self) -> &[Vec<F::Elem>] {
        self.reps.basis()
    }
    pub fn bottom(&self) -> &Subspace<F> {
        &self.sub
    }

    /// Coordinates of the class of v; `None` when v is not in the top space.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.reps.coords(&self.sub.reduce(v))
    }

    pub fn represent(&self, coords: &[F::Elem]) -> Vec<F::Elem> {
        self.reps.combine(coords)
    }
}
