//! Finite-dimensional left modules over a basic algebra.
//!
//! A module stores one action matrix per algebra basis element and a vertex for
//! every basis vector (the idempotent that fixes it). A basis element lying in
//! `e_s A e_t` maps the vertex-`t` part into the vertex-`s` part.

mod decompose;
mod functors;
mod hom;

use std::sync::Arc;

use crate::algebra::{AlgRef, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};

pub use decompose::{
    add_equal, decompose, isomorphic, isomorphic_indecomposables, split_structured, IsoClasses, SplitPiece, Summand,
};
pub use functors::{
    dual_to, duality_d, injective, is_injective, is_projective, max_nu_stable, min_right_approximation, nakayama,
    nakayama_permutation, projective_cover, radical_subspace, socle_subspace, socle_radical_top, syzygy, Approximation, LoewyParts, ProjectiveCover,
};
pub(crate) use decompose::local_scalar;
pub use hom::{hom_space, intertwiners, is_module_hom};

#[derive(Clone, Debug)]
pub struct FdModule<F: Field> {
    algebra: AlgRef<F>,
    vertex: Vec<usize>,
    action: Vec<Matrix<F>>,
}

pub fn same_algebra<F: Field>(a: &AlgRef<F>, b: &AlgRef<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Field> FdModule<F> {
    /// Validated constructor: checks idempotent actions and the product rule on composable basis pairs.
    pub fn new(algebra: &AlgRef<F>, vertex: Vec<usize>, action: Vec<Matrix<F>>) -> Result<Self> {
        let m = FdModule { algebra: Arc::clone(algebra), vertex, action };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: &AlgRef<F>, vertex: Vec<usize>, action: Vec<Matrix<F>>) -> Self {
        FdModule { algebra: Arc::clone(algebra), vertex, action }
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let f = a.field();
        let n = self.dim();
        if self.action.len() != a.dim() {
            return Err(Error::DimensionMismatch(format!("{} action matrices for an algebra of dimension {}", self.action.len(), a.dim())));
        }
        if self.vertex.iter().any(|&v| v >= a.num_vertices()) {
            return Err(Error::InvalidInput("basis vector with an unknown vertex".into()));
        }
        for m in &self.action {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch("action matrix of the wrong size".into()));
            }
        }
        for v in 0..a.num_vertices() {
            let e = &self.action[a.idempotent(v)];
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j && self.vertex[i] == v { f.one() } else { f.zero() };
                    if *e.get(i, j) != want {
                        return Err(Error::InvalidInput(format!("idempotent of vertex {} does not act as the vertex projection", a.vertex_labels()[v])));
                    }
                }
            }
        }
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                if a.block(x).1 != a.block(y).0 || (a.is_idempotent_index(x) && a.is_idempotent_index(y)) {
                    continue;
                }
                let lhs = self.action[x].mul(&self.action[y]);
                let rhs = a.combine_matrices(&a.basis_product(x, y), &self.action);
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!("action does not respect the product {}*{}", a.label(x), a.label(y))));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &AlgRef<F> {
        &self.algebra
    }
    pub fn field(&self) -> &F {
        self.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.vertex.len()
    }
    pub fn vertices(&self) -> &[usize] {
        &self.vertex
    }
    pub fn action(&self, b: usize) -> &Matrix<F> {
        &self.action[b]
    }
    pub fn actions(&self) -> &[Matrix<F>] {
        &self.action
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, x: &[F::Elem]) -> Matrix<F> {
        self.algebra.combine_matrices(x, &self.action)
    }

    pub fn act_on(&self, x: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        let mut out = vec![f.zero(); self.dim()];
        for (b, xb) in x.iter().enumerate() {
            if !f.is_zero(xb) {
                let v = self.action[b].mul_vec(m);
                crate::linalg::matrix::vec_axpy(f, &mut out, xb, &v);
            }
        }
        out
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        let mut d = vec![0; self.algebra.num_vertices()];
        for &v in &self.vertex {
            d[v] += 1;
        }
        d
    }

    pub fn indices_at(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.vertex[i] == v).collect()
    }

    pub fn zero_module(algebra: &AlgRef<F>) -> Self {
        let f = algebra.field();
        FdModule { algebra: Arc::clone(algebra), vertex: vec![], action: (0..algebra.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect() }
    }

    pub fn regular(algebra: &AlgRef<F>) -> Self {
        let vertex = (0..algebra.dim()).map(|b| algebra.block(b).0).collect();
        let action = (0..algebra.dim()).map(|b| algebra.left_matrix(b).clone()).collect();
        FdModule { algebra: Arc::clone(algebra), vertex, action }
    }

    /// Basis indices of A e_v, the support of the projective P_v inside A.
    pub fn projective_support(algebra: &FdAlgebra<F>, v: usize) -> Vec<usize> {
        (0..algebra.dim()).filter(|&b| algebra.block(b).1 == v).collect()
    }

    /// P_v = A e_v with basis the algebra basis elements ending at v.
    pub fn projective(algebra: &AlgRef<F>, v: usize) -> Self {
        let idx = Self::projective_support(algebra, v);
        let vertex = idx.iter().map(|&b| algebra.block(b).0).collect();
        let action = (0..algebra.dim()).map(|b| algebra.left_matrix(b).select(&idx, &idx)).collect();
        FdModule { algebra: Arc::clone(algebra), vertex, action }
    }

    pub fn simple(algebra: &AlgRef<F>, v: usize) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim())
            .map(|b| {
                let mut m = Matrix::zeros(f, 1, 1);
                if b == algebra.idempotent(v) {
                    m.set(0, 0, f.one());
                }
                m
            })
            .collect();
        FdModule { algebra: Arc::clone(algebra), vertex: vec![v], action }
    }

    /// Module from arrow matrices over a presented algebra. The matrix of an arrow
    /// `s -> t` maps the vertex-`t` space to the vertex-`s` space.
    pub fn from_arrow_actions(algebra: &AlgRef<F>, dims: &[usize], arrows: &[Matrix<F>]) -> Result<Self> {
        let words = algebra
            .words()
            .ok_or_else(|| Error::Precondition("arrow actions need an algebra built from a presentation".into()))?;
        if dims.len() != algebra.num_vertices() || arrows.len() != algebra.generators().len() {
            return Err(Error::DimensionMismatch("vertex dimensions or arrow matrices do not match the quiver".into()));
        }
        let f = algebra.field();
        let mut offset = vec![0; dims.len() + 1];
        for v in 0..dims.len() {
            offset[v + 1] = offset[v] + dims[v];
        }
        let n = offset[dims.len()];
        let vertex: Vec<usize> = (0..dims.len()).flat_map(|v| std::iter::repeat(v).take(dims[v])).collect();
        let mut full = Vec::new();
        for (ai, &g) in algebra.generators().iter().enumerate() {
            let (s, t) = algebra.block(g);
            let m = &arrows[ai];
            if m.rows() != dims[s] || m.cols() != dims[t] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    algebra.label(g),
                    dims[s],
                    dims[t],
                    m.rows(),
                    m.cols()
                )));
            }
            let mut big = Matrix::zeros(f, n, n);
            big.paste(offset[s], offset[t], m);
            full.push(big);
        }
        let mut action = Vec::with_capacity(algebra.dim());
        for (b, word) in words.iter().enumerate() {
            if word.is_empty() {
                let v = algebra.block(b).0;
                let mut e = Matrix::zeros(f, n, n);
                for i in offset[v]..offset[v + 1] {
                    e.set(i, i, f.one());
                }
                action.push(e);
            } else {
                let mut m = full[word[0]].clone();
                for &a in &word[1..] {
                    m = m.mul(&full[a]);
                }
                action.push(m);
            }
        }
        FdModule::new(algebra, vertex, action)
    }

    pub fn direct_sum(parts: &[&FdModule<F>]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        let alg = &first.algebra;
        for p in parts {
            if !same_algebra(alg, &p.algebra) {
                return Err(Error::AlgebraMismatch);
            }
        }
        let f = alg.field();
        let n: usize = parts.iter().map(|p| p.dim()).sum();
        let mut vertex = Vec::with_capacity(n);
        for p in parts {
            vertex.extend_from_slice(&p.vertex);
        }
        let action = (0..alg.dim())
            .map(|b| {
                let mut m = Matrix::zeros(f, n, n);
                let mut o = 0;
                for p in parts {
                    m.paste(o, o, &p.action[b]);
                    o += p.dim();
                }
                m
            })
            .collect();
        Ok(FdModule { algebra: Arc::clone(alg), vertex, action })
    }

    /// The submodule spanned by an invariant subspace, with a vertex-adapted basis.
    /// Returns the submodule and its inclusion matrix (self.dim x sub.dim).
    pub fn submodule(&self, sub: &Subspace<F>) -> Result<(FdModule<F>, Matrix<F>)> {
        let f = self.field();
        let a = &self.algebra;
        // split each vector into vertex parts so that the echelon basis is vertex-homogeneous
        let mut parts = Vec::new();
        for v in 0..a.num_vertices() {
            let e = &self.action[a.idempotent(v)];
            for x in sub.basis() {
                parts.push(e.mul_vec(x));
            }
        }
        let w = Subspace::span(f, self.dim(), &parts);
        if w.dim() != sub.dim() {
            return Err(Error::Precondition("subspace is not stable under the idempotents".into()));
        }
        let basis = w.basis();
        let vertex: Vec<usize> = basis.iter().map(|x| self.vertex[x.iter().position(|c| !f.is_zero(c)).unwrap()]).collect();
        let k = basis.len();
        let mut action = Vec::with_capacity(a.dim());
        for b in 0..a.dim() {
            let mut m = Matrix::zeros(f, k, k);
            for (j, x) in basis.iter().enumerate() {
                let y = self.action[b].mul_vec(x);
                let c = w.coords(&y).ok_or_else(|| Error::Precondition("subspace is not a submodule".into()))?;
                for (i, ci) in c.into_iter().enumerate() {
                    m.set(i, j, ci);
                }
            }
            action.push(m);
        }
        Ok((FdModule { algebra: Arc::clone(a), vertex, action }, w.as_columns()))
    }

    /// self / sub, with the projection matrix (quotient.dim x self.dim).
    pub fn quotient(&self, sub: &Subspace<F>) -> Result<(FdModule<F>, Matrix<F>)> {
        let f = self.field();
        let a = &self.algebra;
        let (subm, incl) = self.submodule(sub)?;
        let w = Subspace::span(f, self.dim(), &(0..subm.dim()).map(|j| incl.col(j)).collect::<Vec<_>>());
        let keep = w.complement_indices();
        let k = keep.len();
        let mut proj = Matrix::zeros(f, k, self.dim());
        for c in 0..self.dim() {
            let r = w.reduce(&crate::linalg::matrix::unit_vec(f, self.dim(), c));
            for (i, &kk) in keep.iter().enumerate() {
                proj.set(i, c, r[kk].clone());
            }
        }
        let vertex = keep.iter().map(|&i| self.vertex[i]).collect();
        let action = (0..a.dim())
            .map(|b| {
                let sel = self.action[b].select(&(0..self.dim()).collect::<Vec<_>>(), &keep);
                proj.mul(&sel)
            })
            .collect();
        Ok((FdModule { algebra: Arc::clone(a), vertex, action }, proj))
    }

    /// Image of a module matrix with columns in this module's coordinates, as a module.
    pub fn transport(&self, iso: &Matrix<F>) -> Result<FdModule<F>> {
        let inv = iso.inverse().ok_or_else(|| Error::Precondition("base change is not invertible".into()))?;
        let action = self.action.iter().map(|m| inv.mul(m).mul(iso)).collect();
        let m = FdModule { algebra: Arc::clone(&self.algebra), vertex: self.vertex.clone(), action };
        Ok(m)
    }
}
