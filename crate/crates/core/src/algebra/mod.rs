//! Finite-dimensional basic algebras over a field.
//!
//! Every algebra is stored in a canonical basis: each basis element lies in one
//! block `e_s A e_t`, the vertex idempotents are themselves basis elements, and the
//! remaining basis elements span the Jacobson radical. Multiplication composes
//! left to right, so an arrow `s -> t` lives in `e_s A e_t` and the product `a*b`
//! means "a, then b".

mod ideal;
mod invariants;
mod presentation;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::matrix::{vec_axpy, vec_is_zero};
use crate::linalg::{Field, IntMatrix, Matrix, Subspace};

pub use ideal::{ideal_generated, nabla_ideal, quotient_by_ideal, socle_ideal, AlgebraIdeal, Quotient};
pub use invariants::{
    compare_reports, global_dimension, invariant_report, is_selfinjective, trace_form_radical, GlobalDimension,
    InvariantReport, ReportComparison,
};
pub use presentation::{evaluate_relation, from_presentation, presentation_of, Arrow, PathPresentation, Quiver, Relation};

pub type AlgRef<F> = Arc<FdAlgebra<F>>;

#[derive(Clone, Debug)]
pub struct FdAlgebra<F: Field> {
    field: F,
    vertex_labels: Vec<String>,
    labels: Vec<String>,
    block: Vec<(usize, usize)>,
    idempotents: Vec<usize>,
    block_index: Vec<Vec<Vec<usize>>>,
    /// left[a] has column b equal to the coordinates of a*b.
    left: Vec<Matrix<F>>,
    /// right[a] has column b equal to the coordinates of b*a.
    right: Vec<Matrix<F>>,
    gens: Vec<usize>,
    loewy_length: usize,
    words: Option<Vec<Vec<usize>>>,
}

impl<F: Field> PartialEq for FdAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.block == other.block
            && self.idempotents == other.idempotents
            && self.left == other.left
    }
}

impl<F: Field> FdAlgebra<F> {
    /// Builds an algebra from a multiplication rule on basis elements.
    /// `prod(a, b)` returns the coordinates of `basis[a] * basis[b]`.
    pub fn from_table(
        field: &F,
        vertex_labels: Vec<String>,
        labels: Vec<String>,
        block: Vec<(usize, usize)>,
        idempotents: Vec<usize>,
        prod: impl Fn(usize, usize) -> Vec<F::Elem>,
    ) -> Result<Self> {
        let n = labels.len();
        let nv = vertex_labels.len();
        if block.len() != n || idempotents.len() != nv {
            return Err(Error::DimensionMismatch("basis metadata lengths disagree".into()));
        }
        let mut block_index = vec![vec![Vec::new(); nv]; nv];
        for (b, &(s, t)) in block.iter().enumerate() {
            if s >= nv || t >= nv {
                return Err(Error::InvalidInput(format!("basis element {b} has block ({s},{t}) out of range")));
            }
            block_index[s][t].push(b);
        }
        for (v, &e) in idempotents.iter().enumerate() {
            if block.get(e) != Some(&(v, v)) {
                return Err(Error::InvalidInput(format!("idempotent of vertex {v} is not in block ({v},{v})")));
            }
        }
        let mut left: Vec<Matrix<F>> = (0..n).map(|_| Matrix::zeros(field, n, n)).collect();
        let mut right: Vec<Matrix<F>> = (0..n).map(|_| Matrix::zeros(field, n, n)).collect();
        for a in 0..n {
            for b in 0..n {
                let c = prod(a, b);
                if c.len() != n {
                    return Err(Error::DimensionMismatch(format!("product ({a},{b}) has {} coordinates", c.len())));
                }
                let (s, t1) = block[a];
                let (t2, u) = block[b];
                for (k, x) in c.iter().enumerate() {
                    if field.is_zero(x) {
                        continue;
                    }
                    if t1 != t2 || block[k] != (s, u) {
                        return Err(Error::InvalidInput(format!(
                            "product {}*{} leaves its block",
                            labels[a], labels[b]
                        )));
                    }
                    left[a].set(k, b, x.clone());
                    right[b].set(k, a, x.clone());
                }
            }
        }
        let mut alg = FdAlgebra {
            field: field.clone(),
            vertex_labels,
            labels,
            block,
            idempotents,
            block_index,
            left,
            right,
            gens: Vec::new(),
            loewy_length: 0,
            words: None,
        };
        alg.check_idempotents()?;
        alg.loewy_length = alg.compute_loewy_length()?;
        alg.gens = alg.compute_generators();
        Ok(alg)
    }

    fn check_idempotents(&self) -> Result<()> {
        let f = &self.field;
        for b in 0..self.dim() {
            let (s, t) = self.block[b];
            let lb = self.basis_product(self.idempotents[s], b);
            let rb = self.basis_product(b, self.idempotents[t]);
            let unit = crate::linalg::matrix::unit_vec(f, self.dim(), b);
            if lb != unit || rb != unit {
                return Err(Error::InvalidInput(format!("vertex idempotents do not act as units on {}", self.labels[b])));
            }
        }
        Ok(())
    }

    fn compute_loewy_length(&self) -> Result<usize> {
        let rad = self.radical_indices();
        let f = &self.field;
        for &a in &rad {
            for &b in &rad {
                let c = self.basis_product(a, b);
                if self.idempotents.iter().any(|&e| !f.is_zero(&c[e])) {
                    return Err(Error::NonBasic(format!(
                        "{}*{} has an idempotent component; the given radical is not an ideal",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        let mut power = Subspace::span(
            f,
            self.dim(),
            &rad.iter().map(|&r| crate::linalg::matrix::unit_vec(f, self.dim(), r)).collect::<Vec<_>>(),
        );
        let mut length = 1;
        while power.dim() > 0 {
            if length > self.dim() + 1 {
                return Err(Error::NonBasic("radical is not nilpotent".into()));
            }
            let mut next = Subspace::zero(f, self.dim());
            for x in power.basis() {
                for &g in &rad {
                    next.insert(&self.right[g].mul_vec(x));
                }
            }
            power = next;
            length += 1;
        }
        Ok(length)
    }

    fn compute_generators(&self) -> Vec<usize> {
        let mut span = self.radical_power(2);
        let mut gens = Vec::new();
        for r in self.radical_indices() {
            if span.insert(&crate::linalg::matrix::unit_vec(&self.field, self.dim(), r)) {
                gens.push(r);
            }
        }
        gens
    }

    /// Records each basis element as a word in the arrows, and fixes the arrows as generators.
    pub(crate) fn set_words(&mut self, words: Vec<Vec<usize>>, gens: Vec<usize>) {
        self.words = Some(words);
        self.gens = gens;
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }
    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, b: usize) -> &str {
        &self.labels[b]
    }
    pub fn block(&self, b: usize) -> (usize, usize) {
        self.block[b]
    }
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.block
    }
    pub fn block_indices(&self, s: usize, t: usize) -> &[usize] {
        &self.block_index[s][t]
    }
    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }
    pub fn is_idempotent_index(&self, b: usize) -> bool {
        self.idempotents[self.block[b].0] == b
    }
    pub fn radical_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&b| !self.is_idempotent_index(b)).collect()
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    /// Basis elements written as words in the generators, when the algebra came from a presentation.
    pub fn words(&self) -> Option<&[Vec<usize>]> {
        self.words.as_deref()
    }
    pub fn loewy_length(&self) -> usize {
        self.loewy_length
    }
    pub fn left_matrix(&self, a: usize) -> &Matrix<F> {
        &self.left[a]
    }
    pub fn right_matrix(&self, a: usize) -> &Matrix<F> {
        &self.right[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    pub fn zero(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_vector(&self, b: usize) -> Vec<F::Elem> {
        crate::linalg::matrix::unit_vec(&self.field, self.dim(), b)
    }

    pub fn unit(&self) -> Vec<F::Elem> {
        let mut u = self.zero();
        for &e in &self.idempotents {
            u[e] = self.field.one();
        }
        u
    }

    pub fn basis_product(&self, a: usize, b: usize) -> Vec<F::Elem> {
        self.left[a].col(b)
    }

    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate() {
            if !f.is_zero(xa) {
                let ay = self.left[a].mul_vec(y);
                vec_axpy(f, &mut out, xa, &ay);
            }
        }
        out
    }

    /// Matrix of left multiplication by x.
    pub fn left_mult(&self, x: &[F::Elem]) -> Matrix<F> {
        let mut m = Matrix::zeros(&self.field, self.dim(), self.dim());
        for (a, xa) in x.iter().enumerate() {
            m.add_scaled(xa, &self.left[a]);
        }
        m
    }

    /// Matrix of right multiplication by x.
    pub fn right_mult(&self, x: &[F::Elem]) -> Matrix<F> {
        let mut m = Matrix::zeros(&self.field, self.dim(), self.dim());
        for (a, xa) in x.iter().enumerate() {
            m.add_scaled(xa, &self.right[a]);
        }
        m
    }

    /// e_s x e_t
    pub fn block_part(&self, x: &[F::Elem], s: usize, t: usize) -> Vec<F::Elem> {
        let mut out = self.zero();
        for &b in &self.block_index[s][t] {
            out[b] = x[b].clone();
        }
        out
    }

    /// An element of e_v A e_v is a unit there iff its idempotent coefficient is nonzero.
    pub fn is_unit_in_corner(&self, x: &[F::Elem], v: usize) -> bool {
        !self.field.is_zero(&x[self.idempotents[v]])
    }

    pub fn in_radical(&self, x: &[F::Elem]) -> bool {
        self.idempotents.iter().all(|&e| self.field.is_zero(&x[e]))
    }

    pub fn cartan_matrix(&self) -> IntMatrix {
        let n = self.num_vertices();
        let mut c = IntMatrix::zeros(n, n);
        for s in 0..n {
            for t in 0..n {
                c.set(s, t, self.block_index[s][t].len() as i64);
            }
        }
        c
    }

    /// The k-th power of the radical (rad^0 = A).
    pub fn radical_power(&self, k: usize) -> Subspace<F> {
        let f = &self.field;
        if k == 0 {
            return Subspace::full(f, self.dim());
        }
        let rad = self.radical_indices();
        let mut power = Subspace::span(f, self.dim(), &rad.iter().map(|&r| self.basis_vector(r)).collect::<Vec<_>>());
        for _ in 1..k {
            let mut next = Subspace::zero(f, self.dim());
            for x in power.basis() {
                for &g in &rad {
                    next.insert(&self.right[g].mul_vec(x));
                }
            }
            power = next;
        }
        power
    }

    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for &b in self.gens.iter().chain(&self.idempotents) {
            let d = self.right[b].sub(&self.left[b]);
            for r in 0..n {
                if !vec_is_zero(&self.field, d.row(r)) {
                    rows.push(d.row(r).to_vec());
                }
            }
        }
        if rows.is_empty() {
            return n;
        }
        Matrix::from_rows(&self.field, n, &rows).kernel().len()
    }

    /// First basis triple with (ab)c != a(bc), if any.
    pub fn check_associativity(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                if self.block[a].1 != self.block[b].0 {
                    continue;
                }
                let ab = self.basis_product(a, b);
                for c in 0..self.dim() {
                    if self.block[b].1 != self.block[c].0 {
                        continue;
                    }
                    let lhs = self.right[c].mul_vec(&ab);
                    let bc = self.basis_product(b, c);
                    let rhs = self.left[a].mul_vec(&bc);
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The opposite algebra on the same basis.
    pub fn opposite(&self) -> FdAlgebra<F> {
        let block = self.block.iter().map(|&(s, t)| (t, s)).collect();
        let mut block_index = vec![vec![Vec::new(); self.num_vertices()]; self.num_vertices()];
        for (b, &(s, t)) in self.block.iter().enumerate() {
            block_index[t][s].push(b);
        }
        FdAlgebra {
            field: self.field.clone(),
            vertex_labels: self.vertex_labels.clone(),
            labels: self.labels.clone(),
            block,
            idempotents: self.idempotents.clone(),
            block_index,
            left: self.right.clone(),
            right: self.left.clone(),
            gens: self.gens.clone(),
            loewy_length: self.loewy_length,
            words: None,
        }
    }

    /// Direct product of two algebras; vertices of `other` come after those of `self`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("product of algebras".into()));
        }
        let n1 = self.dim();
        let nv1 = self.num_vertices();
        let mut vertex_labels = self.vertex_labels.clone();
        vertex_labels.extend(other.vertex_labels.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut block = self.block.clone();
        block.extend(other.block.iter().map(|&(s, t)| (s + nv1, t + nv1)));
        let mut idem = self.idempotents.clone();
        idem.extend(other.idempotents.iter().map(|e| e + n1));
        let n = n1 + other.dim();
        FdAlgebra::from_table(&self.field, vertex_labels, labels, block, idem, |a, b| {
            let mut out = vec![self.field.zero(); n];
            if a < n1 && b < n1 {
                for (k, x) in self.basis_product(a, b).into_iter().enumerate() {
                    out[k] = x;
                }
            } else if a >= n1 && b >= n1 {
                for (k, x) in other.basis_product(a - n1, b - n1).into_iter().enumerate() {
                    out[n1 + k] = x;
                }
            }
            out
        })
    }

    /// Σ x_a * (action of basis element a), for any family of matrices indexed by the basis.
    pub fn combine_matrices(&self, x: &[F::Elem], mats: &[Matrix<F>]) -> Matrix<F> {
        let mut m = Matrix::zeros(&self.field, mats[0].rows(), mats[0].cols());
        for (a, xa) in x.iter().enumerate() {
            m.add_scaled(xa, &mats[a]);
        }
        m
    }

    pub fn render_element(&self, x: &[F::Elem]) -> String {
        let f = &self.field;
        let mut parts = Vec::new();
        for (b, xb) in x.iter().enumerate() {
            if f.is_zero(xb) {
                continue;
            }
            if f.is_one(xb) {
                parts.push(self.labels[b].clone());
            } else {
                parts.push(format!("{}*{}", f.render(xb), self.labels[b]));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Sum of products of the words' generators; used to check relations in tests and reports.
    pub fn evaluate_path(&self, factors: &[Vec<F::Elem>]) -> Vec<F::Elem> {
        let mut acc = self.unit();
        for x in factors {
            acc = self.mul(&acc, x);
        }
        acc
    }
}

/// k[t]/(t^m) in the canonical basis 1, t, ..., t^{m-1}.
pub fn truncated_polynomial<F: Field>(field: &F, m: usize) -> Result<FdAlgebra<F>> {
    if m == 0 {
        return Err(Error::InvalidInput("k[t]/(t^0) is the zero ring".into()));
    }
    let labels = (0..m)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        })
        .collect();
    let mut alg = FdAlgebra::from_table(field, vec!["1".into()], labels, vec![(0, 0); m], vec![0], |a, b| {
        let mut v = vec![field.zero(); m];
        if a + b < m {
            v[a + b] = field.one();
        }
        v
    })?;
    if m > 1 {
        alg.set_words((0..m).map(|i| vec![0; i]).collect(), vec![1]);
    }
    Ok(alg)
}

/// The semisimple algebra k^n.
pub fn semisimple<F: Field>(field: &F, n: usize) -> Result<FdAlgebra<F>> {
    FdAlgebra::from_table(
        field,
        (1..=n).map(|i| i.to_string()).collect(),
        (1..=n).map(|i| format!("e{i}")).collect(),
        (0..n).map(|i| (i, i)).collect(),
        (0..n).collect(),
        |a, b| {
            let mut v = vec![field.zero(); n];
            if a == b {
                v[a] = field.one();
            }
            v
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;

    #[test]
    fn truncated_polynomial_basics() {
        let f = PrimeField::new(2).unwrap();
        let a = truncated_polynomial(&f, 3).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.cartan_matrix(), IntMatrix::from_rows(&[vec![3]]));
        assert_eq!(a.loewy_length(), 3);
        assert_eq!(a.generators(), &[1]);
        assert_eq!(a.center_dim(), 3);
        assert!(a.check_associativity().is_none());
        let t = a.basis_vector(1);
        assert_eq!(a.mul(&t, &t), a.basis_vector(2));
        assert!(a.mul(&a.basis_vector(2), &t).iter().all(|x| *x == 0));
    }

    #[test]
    fn semisimple_is_identity_cartan() {
        let f = PrimeField::new(3).unwrap();
        let a = semisimple(&f, 2).unwrap();
        assert_eq!(a.cartan_matrix(), IntMatrix::identity(2));
        assert_eq!(a.loewy_length(), 1);
        assert!(a.generators().is_empty());
    }

    #[test]
    fn rejects_non_nilpotent_radical() {
        let f = PrimeField::new(2).unwrap();
        // basis e, x with x*x = x: x would be an idempotent inside the claimed radical
        let r = FdAlgebra::from_table(&f, vec!["1".into()], vec!["e".into(), "x".into()], vec![(0, 0); 2], vec![0], |a, b| {
            let mut v = vec![0u32; 2];
            match (a, b) {
                (0, k) | (k, 0) => v[k] = 1,
                _ => v[1] = 1,
            }
            v
        });
        assert!(matches!(r, Err(Error::NonBasic(_))));
    }

    #[test]
    fn opposite_swaps_blocks() {
        let f = PrimeField::new(2).unwrap();
        let a = truncated_polynomial(&f, 2).unwrap();
        let b = a.product(&semisimple(&f, 1).unwrap()).unwrap();
        assert_eq!(b.num_vertices(), 2);
        assert_eq!(b.dim(), 3);
        let op = b.opposite();
        assert!(op.check_associativity().is_none());
    }
}
