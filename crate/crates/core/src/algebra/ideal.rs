use std::collections::VecDeque;
use std::sync::Arc;

use super::{AlgRef, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};

/// A two-sided ideal, held as a subspace of its parent algebra.
#[derive(Clone, Debug)]
pub struct AlgebraIdeal<F: Field> {
    parent: AlgRef<F>,
    space: Subspace<F>,
}

impl<F: Field> AlgebraIdeal<F> {
    pub fn from_basis(parent: &AlgRef<F>, vectors: &[Vec<F::Elem>]) -> Result<Self> {
        let space = Subspace::span(parent.field(), parent.dim(), vectors);
        let ideal = AlgebraIdeal { parent: Arc::clone(parent), space };
        if !ideal.is_two_sided() {
            return Err(Error::Precondition("the given subspace is not a two-sided ideal".into()));
        }
        Ok(ideal)
    }

    pub fn zero(parent: &AlgRef<F>) -> Self {
        AlgebraIdeal { parent: Arc::clone(parent), space: Subspace::zero(parent.field(), parent.dim()) }
    }

    pub fn parent(&self) -> &AlgRef<F> {
        &self.parent
    }
    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        self.space.basis()
    }
    pub fn contains(&self, x: &[F::Elem]) -> bool {
        self.space.contains(x)
    }

    pub fn is_two_sided(&self) -> bool {
        let a = &self.parent;
        self.space.basis().iter().all(|x| {
            (0..a.dim()).all(|b| self.space.contains(&a.left_matrix(b).mul_vec(x)) && self.space.contains(&a.right_matrix(b).mul_vec(x)))
        })
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.space.same_as(&other.space)
    }
}

/// The two-sided ideal generated by some elements.
pub fn ideal_generated<F: Field>(alg: &AlgRef<F>, elems: &[Vec<F::Elem>]) -> AlgebraIdeal<F> {
    let mut space = Subspace::zero(alg.field(), alg.dim());
    let mut queue: VecDeque<Vec<F::Elem>> = elems.iter().cloned().collect();
    let multipliers: Vec<usize> = alg.idempotents().iter().chain(alg.generators()).copied().collect();
    while let Some(v) = queue.pop_front() {
        if space.insert(&v) {
            for &b in &multipliers {
                queue.push_back(alg.left_matrix(b).mul_vec(&v));
                queue.push_back(alg.right_matrix(b).mul_vec(&v));
            }
        }
    }
    AlgebraIdeal { parent: Arc::clone(alg), space }
}

/// {a : e A a = 0} for e the sum of the listed vertex idempotents.
pub fn nabla_ideal<F: Field>(alg: &AlgRef<F>, e: &[usize]) -> Result<AlgebraIdeal<F>> {
    let n = alg.dim();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for &v in e {
        if v >= alg.num_vertices() {
            return Err(Error::InvalidInput(format!("vertex index {v} out of range")));
        }
        for t in 0..alg.num_vertices() {
            for &b in alg.block_indices(v, t) {
                let l = alg.left_matrix(b);
                for r in 0..n {
                    rows.push(l.row(r).to_vec());
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..n).map(|i| alg.basis_vector(i)).collect()
    } else {
        Matrix::from_rows(alg.field(), n, &rows).kernel()
    };
    let space = Subspace::span(alg.field(), n, &kernel);
    let ideal = AlgebraIdeal { parent: Arc::clone(alg), space };
    if !ideal.is_two_sided() {
        return Err(Error::Internal("nabla ideal failed to be two-sided".into()));
    }
    Ok(ideal)
}

/// soc(⊕ A e_v) for the listed vertices, as a subspace of A; must be a two-sided ideal.
pub fn socle_ideal<F: Field>(alg: &AlgRef<F>, vertices: &[usize]) -> Result<AlgebraIdeal<F>> {
    let n = alg.dim();
    let rad = alg.radical_indices();
    let mut columns: Vec<usize> = Vec::new();
    for &v in vertices {
        for s in 0..alg.num_vertices() {
            columns.extend_from_slice(alg.block_indices(s, v));
        }
    }
    // solve r * x = 0 for all radical basis elements r, with x supported on the columns
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for &r in &rad {
        let l = alg.left_matrix(r).select(&(0..n).collect::<Vec<_>>(), &columns);
        for i in 0..n {
            rows.push(l.row(i).to_vec());
        }
    }
    let kernel = if rows.is_empty() {
        (0..columns.len()).map(|i| crate::linalg::matrix::unit_vec(alg.field(), columns.len(), i)).collect()
    } else {
        Matrix::from_rows(alg.field(), columns.len(), &rows).kernel()
    };
    let vectors: Vec<Vec<F::Elem>> = kernel
        .into_iter()
        .map(|k| {
            let mut x = alg.zero();
            for (c, val) in columns.iter().zip(k) {
                x[*c] = val;
            }
            x
        })
        .collect();
    AlgebraIdeal::from_basis(alg, &vectors)
        .map_err(|_| Error::Precondition("the socle of the given projective is not a two-sided ideal".into()))
}

/// A quotient algebra together with the bookkeeping that relates it to its parent.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    pub algebra: FdAlgebra<F>,
    /// Parent vertex of each surviving vertex.
    pub vertices: Vec<usize>,
    /// Parent basis index of each quotient basis element.
    pub basis: Vec<usize>,
    ideal: Subspace<F>,
}

impl<F: Field> Quotient<F> {
    /// Image of a parent element in the quotient.
    pub fn project(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        let r = self.ideal.reduce(x);
        self.basis.iter().map(|&b| r[b].clone()).collect()
    }

    /// Parent index of a surviving vertex, inverted.
    pub fn vertex_of(&self, parent_vertex: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == parent_vertex)
    }
}

pub fn quotient_by_ideal<F: Field>(alg: &AlgRef<F>, ideal: &AlgebraIdeal<F>) -> Result<Quotient<F>> {
    if !Arc::ptr_eq(alg, ideal.parent()) && **alg != **ideal.parent() {
        return Err(Error::AlgebraMismatch);
    }
    if !ideal.is_two_sided() {
        return Err(Error::Precondition("basis does not span an ideal".into()));
    }
    let f = alg.field();
    // An ideal decomposes along blocks; echelon pivots therefore stay inside blocks.
    let space = &ideal.space;
    let keep = space.complement_indices();
    let vertices: Vec<usize> = (0..alg.num_vertices()).filter(|&v| keep.contains(&alg.idempotent(v))).collect();
    let vmap = |v: usize| vertices.iter().position(|&w| w == v);
    let mut basis: Vec<usize> = Vec::new();
    for &b in &keep {
        let (s, t) = alg.block(b);
        if vmap(s).is_some() && vmap(t).is_some() {
            basis.push(b);
        } else {
            return Err(Error::Internal("ideal pivots crossed a block boundary".into()));
        }
    }
    // idempotents first, in vertex order
    basis.sort_by_key(|&b| (!alg.is_idempotent_index(b), b));
    let n = basis.len();
    let labels = basis.iter().map(|&b| alg.label(b).to_string()).collect();
    let block = basis.iter().map(|&b| {
        let (s, t) = alg.block(b);
        (vmap(s).unwrap(), vmap(t).unwrap())
    });
    let block: Vec<(usize, usize)> = block.collect();
    let idem: Vec<usize> = (0..vertices.len()).collect();
    let vlabels = vertices.iter().map(|&v| alg.vertex_labels()[v].clone()).collect();
    let algebra = FdAlgebra::from_table(f, vlabels, labels, block, idem, |a, b| {
        let prod = alg.basis_product(basis[a], basis[b]);
        let r = space.reduce(&prod);
        (0..n).map(|i| r[basis[i]].clone()).collect()
    })?;
    Ok(Quotient { algebra, vertices, basis, ideal: space.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{semisimple, truncated_polynomial};
    use crate::linalg::PrimeField;

    #[test]
    fn kill_top_socle() {
        let f = PrimeField::new(2).unwrap();
        let a = Arc::new(truncated_polynomial(&f, 3).unwrap());
        let soc = socle_ideal(&a, &[0]).unwrap();
        assert_eq!(soc.dim(), 1);
        let q = quotient_by_ideal(&a, &soc).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert_eq!(q.algebra.loewy_length(), 2);
    }

    #[test]
    fn quotient_by_radical_and_zero() {
        let f = PrimeField::new(2).unwrap();
        let a = Arc::new(truncated_polynomial(&f, 3).unwrap());
        let rad = ideal_generated(&a, &[a.basis_vector(1)]);
        assert_eq!(rad.dim(), 2);
        assert_eq!(quotient_by_ideal(&a, &rad).unwrap().algebra.dim(), 1);
        let z = AlgebraIdeal::zero(&a);
        assert_eq!(quotient_by_ideal(&a, &z).unwrap().algebra, *a);
    }

    #[test]
    fn nabla_on_products() {
        let f = PrimeField::new(2).unwrap();
        let a = Arc::new(semisimple(&f, 2).unwrap());
        let nab = nabla_ideal(&a, &[0]).unwrap();
        assert_eq!(nab.dim(), 1);
        assert!(nab.contains(&a.basis_vector(1)));
        assert_eq!(nabla_ideal(&a, &[0, 1]).unwrap().dim(), 0);
        let q = quotient_by_ideal(&a, &nab).unwrap();
        assert_eq!(q.algebra.num_vertices(), 1);
        assert_eq!(q.vertices, vec![0]);
    }

    #[test]
    fn rejects_non_ideal() {
        let f = PrimeField::new(2).unwrap();
        let a = Arc::new(truncated_polynomial(&f, 3).unwrap());
        assert!(AlgebraIdeal::from_basis(&a, &[a.basis_vector(1)]).is_err());
    }
}
