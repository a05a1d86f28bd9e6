//! Hom in the homotopy category: chain maps X -> Z[n] modulo null-homotopic maps.
//!
//! The source is a complex of projectives, so a map X^i -> Z^{i+n} is the same as
//! a choice of image g_j in e_{v_j} Z^{i+n} for every generator of X^i. All the
//! linear algebra runs on those generator images.

use std::collections::BTreeMap;

use super::{ModComplex, ProjComplex, ProjMap};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, QuotientSpace};
use crate::modcat::{same_algebra, FdModule};

/// Components f^i : X^i -> Z^{i+shift} as module-map matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<F: Field> {
    pub shift: i64,
    pub components: BTreeMap<i64, Matrix<F>>,
}

impl<F: Field> ChainMap<F> {
    /// self, then other (other must start where self lands).
    pub fn then(&self, other: &ChainMap<F>) -> ChainMap<F> {
        let mut components = BTreeMap::new();
        for (&i, f) in &self.components {
            if let Some(g) = other.components.get(&(i + self.shift)) {
                components.insert(i, g.mul(f));
            }
        }
        ChainMap { shift: self.shift + other.shift, components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|m| m.is_zero())
    }

    /// Block-diagonal matrix on the total spaces, degree by degree in increasing order.
    /// Only meaningful for shift 0 endomorphisms.
    pub fn total_matrix(&self, field: &F) -> Matrix<F> {
        let mut out = Matrix::zeros(field, 0, 0);
        for m in self.components.values() {
            out = out.direct_sum(m);
        }
        out
    }

    /// Components as maps of projectives, when the target is a complex of projectives.
    pub fn as_proj_maps(&self, x: &ProjComplex<F>, z: &ProjComplex<F>) -> BTreeMap<i64, ProjMap<F>> {
        let alg = x.algebra();
        self.components
            .iter()
            .map(|(&i, m)| (i, ProjMap::from_matrix(alg, x.term(i), z.term(i + self.shift), m)))
            .collect()
    }
}

/// Position of each generator block in the unknown vector.
#[derive(Clone, Debug)]
struct Layout {
    /// (degree of X, summand, coordinate indices inside Z^{degree+shift}, offset)
    blocks: Vec<(i64, usize, Vec<usize>, usize)>,
    len: usize,
}

fn layout<F: Field>(x: &ProjComplex<F>, z: &ModComplex<F>, shift: i64) -> Layout {
    let mut blocks = Vec::new();
    let mut len = 0;
    for (&i, verts) in x.terms() {
        for (j, &v) in verts.iter().enumerate() {
            let idx = z.term(i + shift).map(|m| m.indices_at(v)).unwrap_or_default();
            let n = idx.len();
            blocks.push((i, j, idx, len));
            len += n;
        }
    }
    Layout { blocks, len }
}

impl Layout {
    fn find(&self, deg: i64, j: usize) -> &(i64, usize, Vec<usize>, usize) {
        self.blocks.iter().find(|b| b.0 == deg && b.1 == j).expect("block exists")
    }
}

/// The two halves of the chain-map and homotopy operators, from layout(s) to layout(s+1):
/// `dx` is "d_X then g" and `dz` is "g then d_Z".
fn operators<F: Field>(x: &ProjComplex<F>, z: &ModComplex<F>, s: i64) -> (Matrix<F>, Matrix<F>, Layout, Layout) {
    let f = x.algebra().field();
    let src = layout(x, z, s);
    let tgt = layout(x, z, s + 1);
    let mut dx = Matrix::zeros(f, tgt.len, src.len);
    let mut dz = Matrix::zeros(f, tgt.len, src.len);
    for (i, j, rows, roff) in &tgt.blocks {
        if rows.is_empty() {
            continue;
        }
        let (i, j) = (*i, *j);
        // d_X^i then g^{i+1}: sum over components k of X^{i+1}
        if let Some(zm) = z.term(i + s + 1) {
            let d = x.diff(i);
            for k in 0..d.tgt().len() {
                let e = d.entry(j, k);
                if e.iter().all(|c| f.is_zero(c)) {
                    continue;
                }
                let (_, _, cols, coff) = src.find(i + 1, k);
                if cols.is_empty() {
                    continue;
                }
                let blk = zm.act(e).select(rows, cols);
                paste_add(&mut dx, *roff, *coff, &blk);
            }
        }
        // g^i then d_Z^{i+s}
        if let Some(dzm) = z.diff(i + s) {
            let (_, _, cols, coff) = src.find(i, j);
            if !cols.is_empty() {
                let blk = dzm.select(rows, cols);
                paste_add(&mut dz, *roff, *coff, &blk);
            }
        }
    }
    (dx, dz, src, tgt)
}

fn paste_add<F: Field>(m: &mut Matrix<F>, r0: usize, c0: usize, blk: &Matrix<F>) {
    let f = m.field().clone();
    for r in 0..blk.rows() {
        for c in 0..blk.cols() {
            let v = f.add(m.get(r0 + r, c0 + c), blk.get(r, c));
            m.set(r0 + r, c0 + c, v);
        }
    }
}

fn sign<F: Field>(f: &F, n: i64) -> F::Elem {
    if n.rem_euclid(2) == 0 {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

/// A basis of Hom_K(X, Z[n]).
#[derive(Clone, Debug)]
pub struct HomK<F: Field> {
    source: ProjComplex<F>,
    target: ModComplex<F>,
    shift: i64,
    layout: Layout,
    space: QuotientSpace<F>,
    chain_dim: usize,
}

/// Hom_K(X, Z[n]) for a complex of projectives X and any bounded complex Z.
pub fn hom_in_k<F: Field>(x: &ProjComplex<F>, z: &ModComplex<F>, n: i64) -> Result<HomK<F>> {
    if !same_algebra(x.algebra(), z.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let f = x.algebra().field();
    let (dx, dz, lay, _) = operators(x, z, n);
    let mut cond = dx;
    cond.add_scaled(&f.neg(&sign(f, n)), &dz);
    let chains = cond.kernel();
    let (hx, hz, hlay, _) = operators(x, z, n - 1);
    let mut null = hx;
    null.add_scaled(&sign(f, n), &hz);
    let boundaries: Vec<Vec<F::Elem>> = (0..hlay.len).map(|c| null.col(c)).collect();
    let space = QuotientSpace::new(f, lay.len, &chains, &boundaries);
    Ok(HomK { source: x.clone(), target: z.clone(), shift: n, layout: lay, space, chain_dim: chains.len() })
}

/// Convenience wrapper for two complexes of projectives.
pub fn hom_in_k_proj<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, n: i64) -> Result<HomK<F>> {
    hom_in_k(x, &ModComplex::from_proj(y), n)
}

impl<F: Field> HomK<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn shift(&self) -> i64 {
        self.shift
    }
    /// Dimension of the space of all chain maps, before dividing out homotopies.
    pub fn chain_map_dim(&self) -> usize {
        self.chain_dim
    }
    pub fn source(&self) -> &ProjComplex<F> {
        &self.source
    }
    pub fn target(&self) -> &ModComplex<F> {
        &self.target
    }

    /// Chain map representing the k-th basis class.
    pub fn basis_map(&self, k: usize) -> ChainMap<F> {
        self.vector_to_map(&self.space.representatives()[k])
    }

    /// Chain map representing the class with the given coordinates.
    pub fn map_of_coords(&self, coords: &[F::Elem]) -> ChainMap<F> {
        self.vector_to_map(&self.space.represent(coords))
    }

    pub fn basis(&self) -> Vec<ChainMap<F>> {
        (0..self.dim()).map(|k| self.basis_map(k)).collect()
    }

    /// Coordinates of the class of a chain map; `None` if it is not a chain map of this shape.
    pub fn coords(&self, m: &ChainMap<F>) -> Option<Vec<F::Elem>> {
        if m.shift != self.shift {
            return None;
        }
        self.space.coords(&self.map_to_vector(m)?)
    }

    /// The chain map is null-homotopic (its class vanishes).
    pub fn is_null(&self, m: &ChainMap<F>) -> Option<bool> {
        let f = self.source.algebra().field();
        self.coords(m).map(|c| c.iter().all(|x| f.is_zero(x)))
    }

    fn vector_to_map(&self, v: &[F::Elem]) -> ChainMap<F> {
        let alg = self.source.algebra();
        let f = alg.field();
        let mut components = BTreeMap::new();
        for (&i, verts) in self.source.terms() {
            let Some(zm) = self.target.term(i + self.shift) else { continue };
            let mut cols = Vec::new();
            for (j, &w) in verts.iter().enumerate() {
                let (_, _, idx, off) = self.layout.find(i, j);
                let mut g = vec![f.zero(); zm.dim()];
                for (k, &r) in idx.iter().enumerate() {
                    g[r] = v[off + k].clone();
                }
                for b in FdModule::projective_support(alg, w) {
                    cols.push(zm.action(b).mul_vec(&g));
                }
            }
            components.insert(i, Matrix::from_cols(f, zm.dim(), &cols));
        }
        ChainMap { shift: self.shift, components }
    }

    fn map_to_vector(&self, m: &ChainMap<F>) -> Option<Vec<F::Elem>> {
        let alg = self.source.algebra();
        let f = alg.field();
        let mut v = vec![f.zero(); self.layout.len];
        for (&i, verts) in self.source.terms() {
            let Some(zm) = self.target.term(i + self.shift) else { continue };
            let comp = m.components.get(&i);
            let mut off_in_term = 0;
            for (j, &w) in verts.iter().enumerate() {
                let sup = FdModule::projective_support(alg, w);
                let pos = sup.iter().position(|&b| b == alg.idempotent(w)).expect("idempotent in P_w");
                let (_, _, idx, off) = self.layout.find(i, j);
                if let Some(c) = comp {
                    if c.rows() != zm.dim() {
                        return None;
                    }
                    let col = c.col(off_in_term + pos);
                    for (k, &r) in idx.iter().enumerate() {
                        v[off + k] = col[r].clone();
                    }
                }
                off_in_term += sup.len();
            }
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{truncated_polynomial, AlgRef};
    use crate::linalg::PrimeField;

    fn t3() -> AlgRef<PrimeField> {
        Arc::new(truncated_polynomial(&PrimeField::new(2).unwrap(), 3).unwrap())
    }

    #[test]
    fn stalks_have_no_higher_homs() {
        let a = t3();
        let s = ProjComplex::stalk(&a, &[0], 0);
        for n in -2..=2 {
            let h = hom_in_k_proj(&s, &s, n).unwrap();
            assert_eq!(h.dim(), if n == 0 { 3 } else { 0 }, "shift {n}");
        }
    }

    #[test]
    fn cross_term_identity() {
        let a = t3();
        let x = ProjComplex::direct_sum(&[&ProjComplex::stalk(&a, &[0], 0), &ProjComplex::stalk(&a, &[0], -1)]).unwrap();
        assert!(hom_in_k_proj(&x, &x, -1).unwrap().dim() > 0);
        assert!(hom_in_k_proj(&x, &x, 1).unwrap().dim() > 0);
    }

    #[test]
    fn contractible_complex_is_zero_in_k() {
        let a = t3();
        let c = ProjComplex::two_term(&a, ProjMap::identity(&a, &[0]), 0).unwrap();
        let h = hom_in_k_proj(&c, &c, 0).unwrap();
        assert_eq!(h.dim(), 0);
        assert!(h.chain_map_dim() > 0);
    }

    /// Counted by hand for C = (A --t--> A): degree-0 chain maps are pairs (a, b)
    /// with t a = b t, so a is free and b - a lies in (t^2); homotopies give (t h, t h).
    #[test]
    fn endomorphisms_of_a_cone_by_hand() {
        let a = t3();
        let t = ProjMap::from_entries(&a, &[0], &[0], vec![a.basis_vector(1)]).unwrap();
        let c = ProjComplex::two_term(&a, t, 0).unwrap();
        let h = hom_in_k_proj(&c, &c, 0).unwrap();
        assert_eq!(h.chain_map_dim(), 4);
        assert_eq!(h.dim(), 2);
        // Hom(C, C[1]) : maps A^0 -> A^1 with nothing to commute, modulo t h, h t
        let h1 = hom_in_k_proj(&c, &c, 1).unwrap();
        assert_eq!(h1.dim(), 1);
        let h_1 = hom_in_k_proj(&c, &c, -1).unwrap();
        assert_eq!(h_1.dim(), 1);
    }

    #[test]
    fn basis_maps_round_trip() {
        let a = t3();
        let t = ProjMap::from_entries(&a, &[0], &[0], vec![a.basis_vector(1)]).unwrap();
        let c = ProjComplex::two_term(&a, t, 0).unwrap();
        let h = hom_in_k_proj(&c, &c, 0).unwrap();
        for k in 0..h.dim() {
            let m = h.basis_map(k);
            let co = h.coords(&m).unwrap();
            for (l, x) in co.iter().enumerate() {
                assert_eq!(*x, if l == k { a.field().one() } else { a.field().zero() });
            }
        }
    }
}
