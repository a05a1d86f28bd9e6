//! Indecomposable summands of complexes and their endomorphism algebras in K^b.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::homk::{hom_in_k_proj, ChainMap, HomK};
use super::{normalize_radical, ProjComplex, ProjMap};
use crate::algebra::{AlgRef, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};
use crate::modcat::{local_scalar, projective_cover, split_structured, FdModule};

/// An indecomposable summand of a complex, with split inclusion and projection.
#[derive(Clone, Debug)]
pub struct ComplexSummand<F: Field> {
    pub complex: ProjComplex<F>,
    pub inclusion: BTreeMap<i64, ProjMap<F>>,
    pub projection: BTreeMap<i64, ProjMap<F>>,
}

/// Split a radical complex into indecomposable complexes. The input is normalized
/// first, so the summands are radical and the splitting is valid in K^b.
pub fn decompose_complex<F: Field>(x: &ProjComplex<F>, seed: u64) -> Result<Vec<ComplexSummand<F>>> {
    let x = normalize_radical(x);
    let alg = Arc::clone(x.algebra());
    let f = alg.field();
    let nv = alg.num_vertices();
    let degs = x.degrees();
    if degs.is_empty() {
        return Ok(Vec::new());
    }
    let modules: Vec<FdModule<F>> = degs.iter().map(|&i| x.term_module(i)).collect();
    let mut offsets = vec![0];
    for m in &modules {
        offsets.push(offsets.last().unwrap() + m.dim());
    }
    let total = *offsets.last().unwrap();
    let mut labels = Vec::with_capacity(total);
    for (d, m) in modules.iter().enumerate() {
        labels.extend(m.vertices().iter().map(|&v| d * nv + v));
    }
    let mut mats: Vec<Matrix<F>> = (0..alg.dim())
        .map(|b| {
            let mut out = Matrix::zeros(f, 0, 0);
            for m in &modules {
                out = out.direct_sum(m.action(b));
            }
            out
        })
        .collect();
    let mut dtot = Matrix::zeros(f, total, total);
    for (d, &i) in degs.iter().enumerate() {
        if d + 1 < degs.len() && degs[d + 1] == i + 1 {
            dtot.paste(offsets[d + 1], offsets[d], &x.diff(i).to_matrix(&alg));
        }
    }
    mats.push(dtot);
    let mut commuting: Vec<usize> = alg.generators().to_vec();
    commuting.push(alg.dim());
    let pieces = split_structured(f, &labels, &mats, &commuting, seed)?;

    let mut out = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let mut terms = BTreeMap::new();
        let mut incl = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for (d, &i) in degs.iter().enumerate() {
            let idx: Vec<usize> = (0..piece.labels.len()).filter(|&c| piece.labels[c] / nv == d).collect();
            if idx.is_empty() {
                continue;
            }
            let verts: Vec<usize> = idx.iter().map(|&c| piece.labels[c] % nv).collect();
            let actions: Vec<Matrix<F>> = (0..alg.dim()).map(|b| piece.mats[b].select(&idx, &idx)).collect();
            let w = FdModule::new_unchecked(&alg, verts, actions);
            let cover = projective_cover(&w)?;
            let epi_inv = cover.epi.inverse().ok_or_else(|| Error::Internal("summand of a projective is not projective".into()))?;
            let rows: Vec<usize> = (offsets[d]..offsets[d + 1]).collect();
            let basis_i = piece.basis.select(&rows, &idx);
            let proj_i = piece.projection.select(&idx, &rows);
            incl.insert(i, ProjMap::from_matrix(&alg, &cover.tops, x.term(i), &basis_i.mul(&cover.epi)));
            proj.insert(i, ProjMap::from_matrix(&alg, x.term(i), &cover.tops, &epi_inv.mul(&proj_i)));
            terms.insert(i, cover.tops);
        }
        let mut diffs = BTreeMap::new();
        for (&i, iota) in &incl {
            if let Some(pi) = proj.get(&(i + 1)) {
                diffs.insert(i, iota.then(&x.diff(i), &alg).then(pi, &alg));
            }
        }
        let complex = ProjComplex::new(&alg, terms, diffs)?;
        out.push(ComplexSummand { complex, inclusion: incl, projection: proj });
    }
    Ok(out)
}

fn same_shape<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> bool {
    let sorted = |v: &[usize]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    x.degrees() == y.degrees() && x.terms().iter().all(|(&i, v)| sorted(v) == sorted(y.term(i)))
}

/// Isomorphism test for two indecomposable radical complexes: some basis class of
/// Hom_K(X, Y) is represented by a degreewise invertible chain map.
pub fn isomorphic_indecomposable_complexes<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> Result<bool> {
    if !same_shape(x, y) {
        return Ok(false);
    }
    let f = x.algebra().field();
    let h = hom_in_k_proj(x, y, 0)?;
    Ok(h.basis().iter().any(|m| m.total_matrix(f).is_invertible()))
}

/// X ≅ Y in K^b, by comparing indecomposable summands with multiplicity.
pub fn isomorphic_complexes<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>, seed: u64) -> Result<bool> {
    let xs = decompose_complex(x, seed)?;
    let mut ys: Vec<ProjComplex<F>> = decompose_complex(y, seed)?.into_iter().map(|s| s.complex).collect();
    if xs.len() != ys.len() {
        return Ok(false);
    }
    for s in xs {
        let mut hit = None;
        for (k, c) in ys.iter().enumerate() {
            if isomorphic_indecomposable_complexes(&s.complex, c)? {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                ys.remove(k);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// One basis element of an endomorphism algebra: a chain map between two summands.
#[derive(Clone, Debug)]
pub struct EndBasisElement<F: Field> {
    pub source: usize,
    pub target: usize,
    pub map: ChainMap<F>,
}

/// End_K(X) for a complex X, presented on its basic part: one vertex per
/// isomorphism class of indecomposable summands.
#[derive(Clone, Debug)]
pub struct EndAlgebra<F: Field> {
    pub algebra: FdAlgebra<F>,
    /// Representatives of the summand classes, indexed by vertex.
    pub summands: Vec<ProjComplex<F>>,
    /// How often each class occurs in X.
    pub multiplicities: Vec<usize>,
    pub basis: Vec<EndBasisElement<F>>,
}

/// Group summands into isomorphism classes (first occurrence is the representative).
pub fn summand_classes<F: Field>(x: &ProjComplex<F>, seed: u64) -> Result<(Vec<ProjComplex<F>>, Vec<usize>)> {
    let mut reps: Vec<ProjComplex<F>> = Vec::new();
    let mut mult = Vec::new();
    for s in decompose_complex(x, seed)? {
        let mut found = None;
        for (k, r) in reps.iter().enumerate() {
            if isomorphic_indecomposable_complexes(r, &s.complex)? {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => mult[k] += 1,
            None => {
                reps.push(s.complex);
                mult.push(1);
            }
        }
    }
    Ok((reps, mult))
}

/// The endomorphism algebra in K^b of the basic part of X, as a basic algebra whose
/// vertices are the summand classes and whose block (s, t) is Hom_K(X_s, X_t).
pub fn end_algebra_of_complex<F: Field>(x: &ProjComplex<F>, seed: u64) -> Result<EndAlgebra<F>> {
    let (summands, multiplicities) = summand_classes(x, seed)?;
    if summands.is_empty() {
        return Err(Error::InvalidInput("the complex is zero in the homotopy category".into()));
    }
    let alg: &AlgRef<F> = x.algebra();
    let f = alg.field();
    let n = summands.len();
    let mut homs: Vec<Vec<HomK<F>>> = Vec::with_capacity(n);
    for s in &summands {
        homs.push(summands.iter().map(|t| hom_in_k_proj(s, t, 0)).collect::<Result<_>>()?);
    }
    // change of basis for each block: new basis vectors in class coordinates
    let mut change: Vec<Vec<Matrix<F>>> = vec![Vec::new(); n];
    let mut basis = Vec::new();
    let mut block = Vec::new();
    let mut labels = Vec::new();
    let mut idempotents = vec![0; n];
    let mut index: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
    for s in 0..n {
        for t in 0..n {
            let h = &homs[s][t];
            let d = h.dim();
            let cols: Vec<Vec<F::Elem>> = if s == t {
                let id = identity_chain_map(&summands[s]);
                let id_c = h.coords(&id).ok_or_else(|| Error::Internal("identity is not a chain map".into()))?;
                let mut rad = Vec::new();
                for k in 0..d {
                    let m = h.basis_map(k);
                    let c = local_scalar(f, &m.total_matrix(f)).ok_or_else(|| {
                        Error::Precondition("a summand endomorphism has no eigenvalue in the base field".into())
                    })?;
                    let mut v = crate::linalg::matrix::unit_vec(f, d, k);
                    crate::linalg::matrix::vec_axpy(f, &mut v, &f.neg(&c), &id_c);
                    rad.push(v);
                }
                let rad = Subspace::span(f, d, &rad);
                if rad.dim() + 1 != d {
                    return Err(Error::Internal("summand endomorphism ring is not local with residue field k".into()));
                }
                let mut cols = vec![id_c];
                cols.extend(rad.basis().iter().cloned());
                cols
            } else {
                (0..d).map(|k| crate::linalg::matrix::unit_vec(f, d, k)).collect()
            };
            for (k, c) in cols.iter().enumerate() {
                let b = basis.len();
                if s == t && k == 0 {
                    idempotents[s] = b;
                    labels.push(format!("e{}", s + 1));
                } else {
                    labels.push(format!("f{}_{}_{}", s + 1, t + 1, k));
                }
                index[s][t].push(b);
                block.push((s, t));
                basis.push(EndBasisElement { source: s, target: t, map: h.map_of_coords(c) });
            }
            change[s].push(if d == 0 { Matrix::zeros(f, 0, 0) } else { Matrix::from_cols(f, d, &cols) });
        }
    }
    let inv: Vec<Vec<Option<Matrix<F>>>> =
        change.iter().map(|row| row.iter().map(|m| if m.rows() == 0 { None } else { m.inverse() }).collect()).collect();
    let dim = basis.len();
    let mut table = vec![vec![None; dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let (s, t) = block[a];
            let (t2, u) = block[b];
            if t != t2 {
                continue;
            }
            let comp = basis[a].map.then(&basis[b].map);
            let c = homs[s][u].coords(&comp).ok_or_else(|| Error::Internal("composite is not a chain map".into()))?;
            let mut out = vec![f.zero(); dim];
            if let Some(m) = &inv[s][u] {
                let y = m.mul_vec(&c);
                for (k, &pos) in index[s][u].iter().enumerate() {
                    out[pos] = y[k].clone();
                }
            }
            table[a][b] = Some(out);
        }
    }
    let vertex_labels = (1..=n).map(|v| v.to_string()).collect();
    let algebra = FdAlgebra::from_table(f, vertex_labels, labels, block, idempotents, |a, b| {
        table[a][b].clone().unwrap_or_else(|| vec![f.zero(); dim])
    })?;
    Ok(EndAlgebra { algebra, summands, multiplicities, basis })
}

pub(crate) fn identity_chain_map<F: Field>(x: &ProjComplex<F>) -> ChainMap<F> {
    let alg = x.algebra();
    let components = x.degrees().into_iter().map(|i| (i, Matrix::identity(alg.field(), x.term_module(i).dim()))).collect();
    ChainMap { shift: 0, components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{from_presentation, truncated_polynomial, PathPresentation, Quiver};
    use crate::linalg::PrimeField;

    fn a2() -> AlgRef<PrimeField> {
        let f = PrimeField::new(3).unwrap();
        let mut q = Quiver::new(vec!["1".into(), "2".into()]);
        q.add_arrow("a", 0, 1);
        Arc::new(from_presentation(&f, &PathPresentation { quiver: q, relations: vec![], cap: 2 }).unwrap())
    }

    #[test]
    fn end_of_stalk_is_the_algebra() {
        let a = a2();
        let x = ProjComplex::stalk(&a, &[0, 1], 0);
        let e = end_algebra_of_complex(&x, 1).unwrap();
        assert_eq!(e.algebra.dim(), a.dim());
        assert_eq!(e.algebra.cartan_matrix().to_rows().iter().flatten().sum::<i64>(), 3);
        let e1 = end_algebra_of_complex(&x.shift(1), 1).unwrap();
        assert_eq!(e1.algebra.dim(), a.dim());
    }

    #[test]
    fn repeated_summands_are_grouped() {
        let a = a2();
        let x = ProjComplex::stalk(&a, &[0, 0, 1], 0);
        let e = end_algebra_of_complex(&x, 1).unwrap();
        assert_eq!(e.multiplicities.iter().sum::<usize>(), 3);
        assert_eq!(e.summands.len(), 2);
    }

    #[test]
    fn cone_splits_from_stalk() {
        let t = Arc::new(truncated_polynomial(&PrimeField::new(2).unwrap(), 3).unwrap());
        let d = ProjMap::from_entries(&t, &[0], &[0], vec![t.basis_vector(1)]).unwrap();
        let c = ProjComplex::two_term(&t, d, 0).unwrap();
        let x = ProjComplex::direct_sum(&[&c, &ProjComplex::stalk(&t, &[0], 0)]).unwrap();
        let parts = decompose_complex(&x, 5).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(isomorphic_complexes(&x, &ProjComplex::direct_sum(&[&ProjComplex::stalk(&t, &[0], 0), &c]).unwrap(), 5).unwrap());
        assert!(!isomorphic_complexes(&c, &ProjComplex::stalk(&t, &[0], 0), 5).unwrap());
        let e = end_algebra_of_complex(&c, 5).unwrap();
        assert_eq!(e.algebra.dim(), 2);
    }
}
