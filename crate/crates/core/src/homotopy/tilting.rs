use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::end::summand_classes;
use super::homk::hom_in_k_proj;
use super::{normalize_radical, ProjComplex, ProjMap};
use crate::algebra::{AlgRef, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Field, IntMatrix, Matrix};
use crate::modcat::{nakayama_permutation, projective_cover, FdModule};

/// How the generation axiom is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generation {
    /// The complex comes from a construction known to produce a generator.
    ByConstruction,
    /// Only the K0 rank condition, which is necessary but not sufficient, was checked.
    NecessaryOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TiltingReport {
    pub self_orthogonal: bool,
    /// First shift n with Hom(T, T[n]) nonzero, and that dimension.
    pub failing_shift: Option<i64>,
    pub failing_dim: Option<usize>,
    /// Shifts examined for self-orthogonality.
    pub shifts_checked: Vec<i64>,
    pub num_summands: usize,
    pub k0_rank: usize,
    pub k0_rank_full: bool,
    pub generation: Generation,
    pub verdict: bool,
}

/// K0 classes (alternating projective multiplicities) of the indecomposable summand classes.
pub fn k0_classes<F: Field>(t: &ProjComplex<F>, seed: u64) -> Result<Vec<Vec<i64>>> {
    Ok(summand_classes(t, seed)?.0.iter().map(|c| c.k0_class()).collect())
}

fn integer_rank(rows: &[Vec<i64>], cols: usize) -> Result<usize> {
    if rows.is_empty() || cols == 0 {
        return Ok(0);
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(rows))?;
    Ok(snf.diag.iter().filter(|&&d| d != 0).count())
}

pub fn tilting_report<F: Field>(t: &ProjComplex<F>, generation: Generation, seed: u64) -> Result<TiltingReport> {
    let t = normalize_radical(t);
    let nv = t.algebra().num_vertices();
    let (lo, hi) = match (t.min_degree(), t.max_degree()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Ok(TiltingReport {
                self_orthogonal: true,
                failing_shift: None,
                failing_dim: None,
                shifts_checked: Vec::new(),
                num_summands: 0,
                k0_rank: 0,
                k0_rank_full: nv == 0,
                generation,
                verdict: nv == 0,
            })
        }
    };
    let width = hi - lo;
    let shifts: Vec<i64> = (-width..=width).filter(|&n| n != 0).collect();
    let mut failing = None;
    for &n in &shifts {
        let d = hom_in_k_proj(&t, &t, n)?.dim();
        if d > 0 {
            failing = Some((n, d));
            break;
        }
    }
    let classes = k0_classes(&t, seed)?;
    let k0_rank = integer_rank(&classes, nv)?;
    let self_orthogonal = failing.is_none();
    let k0_rank_full = k0_rank == nv;
    Ok(TiltingReport {
        self_orthogonal,
        failing_shift: failing.map(|x| x.0),
        failing_dim: failing.map(|x| x.1),
        shifts_checked: shifts,
        num_summands: classes.len(),
        k0_rank,
        k0_rank_full,
        generation,
        verdict: self_orthogonal && k0_rank_full,
    })
}

/// D(e_v A) as a left module; the basis is dual to the basis elements in block (v, *).
fn dual_row<F: Field>(alg: &AlgRef<F>, v: usize) -> Result<(FdModule<F>, Vec<usize>)> {
    let idx: Vec<usize> = (0..alg.dim()).filter(|&b| alg.block(b).0 == v).collect();
    let vertex = idx.iter().map(|&b| alg.block(b).1).collect();
    let action = (0..alg.dim()).map(|a| alg.right_matrix(a).select(&idx, &idx).transpose()).collect();
    Ok((FdModule::new(alg, vertex, action)?, idx))
}

/// ν applied to a map of projectives, as a matrix between the modules ⊕ D(e_v A).
fn nu_matrix<F: Field>(alg: &FdAlgebra<F>, d: &ProjMap<F>, rows: &BTreeMap<usize, Vec<usize>>) -> Matrix<F> {
    let f = alg.field();
    let rsz: usize = d.tgt().iter().map(|w| rows[w].len()).sum();
    let csz: usize = d.src().iter().map(|v| rows[v].len()).sum();
    let mut m = Matrix::zeros(f, rsz, csz);
    let mut c0 = 0;
    for (j, v) in d.src().iter().enumerate() {
        let mut r0 = 0;
        for (i, w) in d.tgt().iter().enumerate() {
            // Hom(d, A) on this entry is x -> a x from e_w A to e_v A; ν is its transpose
            let l = alg.left_mult(d.entry(j, i)).select(&rows[v], &rows[w]);
            m.paste(r0, c0, &l.transpose());
            r0 += rows[w].len();
        }
        c0 += rows[v].len();
    }
    m
}

/// Termwise Nakayama functor. Each ν P_v = D(e_v A) must again be projective.
pub fn nakayama_complex<F: Field>(t: &ProjComplex<F>) -> Result<ProjComplex<F>> {
    let alg = t.algebra();
    let f = alg.field();
    let mut rows = BTreeMap::new();
    let mut covers = BTreeMap::new();
    let used: BTreeSet<usize> = t.terms().values().flatten().copied().collect();
    for &v in &used {
        let (iv, idx) = dual_row(alg, v)?;
        let cover = projective_cover(&iv)?;
        if cover.module.dim() != iv.dim() {
            return Err(Error::Precondition(format!("ν P_{} is not projective", alg.vertex_labels()[v])));
        }
        rows.insert(v, idx);
        covers.insert(v, cover);
    }
    let epi_sum = |verts: &[usize]| {
        let mut m = Matrix::zeros(f, 0, 0);
        for v in verts {
            m = m.direct_sum(&covers[v].epi);
        }
        m
    };
    let tops = |verts: &[usize]| -> Vec<usize> { verts.iter().flat_map(|v| covers[v].tops.clone()).collect() };
    let terms = t.terms().iter().map(|(&i, v)| (i, tops(v))).collect();
    let mut diffs = BTreeMap::new();
    for (&i, d) in t.diffs() {
        let nu = nu_matrix(alg, d, &rows);
        let inv = epi_sum(d.tgt()).inverse().ok_or_else(|| Error::Internal("cover of a projective is not invertible".into()))?;
        let m = inv.mul(&nu).mul(&epi_sum(d.src()));
        diffs.insert(i, ProjMap::from_matrix(alg, &tops(d.src()), &tops(d.tgt()), &m));
    }
    ProjComplex::new(alg, terms, diffs)
}

/// add(X) = add(νX) for the sum X of the given projectives.
fn nu_stable_set<F: Field>(alg: &AlgRef<F>, verts: &BTreeSet<usize>) -> Result<bool> {
    let perm = nakayama_permutation(alg)?;
    let mut image = BTreeSet::new();
    for &v in verts {
        match perm[v] {
            Some(w) => {
                image.insert(w);
            }
            None => return Ok(false),
        }
    }
    Ok(&image == verts)
}

/// The negative-degree terms of T and the positive-degree terms of Q̄ are ν-stable
/// up to additive closure.
pub fn is_almost_nu_stable<F: Field>(t: &ProjComplex<F>, qbar: &ProjComplex<F>) -> Result<bool> {
    if t.max_degree().is_some_and(|d| d > 0) {
        return Err(Error::InvalidInput("T must be concentrated in degrees <= 0".into()));
    }
    if qbar.min_degree().is_some_and(|d| d < 0) {
        return Err(Error::InvalidInput("the second complex must be concentrated in degrees >= 0".into()));
    }
    let neg: BTreeSet<usize> = t.terms().iter().filter(|(&i, _)| i < 0).flat_map(|(_, v)| v.iter().copied()).collect();
    let pos: BTreeSet<usize> = qbar.terms().iter().filter(|(&i, _)| i > 0).flat_map(|(_, v)| v.iter().copied()).collect();
    Ok(nu_stable_set(t.algebra(), &neg)? && nu_stable_set(qbar.algebra(), &pos)?)
}
