//! Bounded complexes of projective modules and the homotopy category.
//!
//! A term is a list of vertices standing for the direct sum of the indecomposable
//! projectives `P_v = A e_v`. A map between such sums is a matrix of algebra
//! elements: entry `[j][i]` lies in `e_{src_j} A e_{tgt_i}` and sends the generator
//! of the j-th source summand to the i-th target summand (right multiplication).
//! Maps compose left to right, like the algebra.

mod end;
mod homk;
mod tilting;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgRef, AlgebraIdeal, FdAlgebra, Quotient};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Subspace};
use crate::modcat::FdModule;

pub use end::{
    decompose_complex, end_algebra_of_complex, isomorphic_complexes, isomorphic_indecomposable_complexes, summand_classes,
    ComplexSummand, EndAlgebra, EndBasisElement,
};
pub use homk::{hom_in_k, hom_in_k_proj, ChainMap, HomK};
pub use tilting::{
    is_almost_nu_stable, k0_classes, nakayama_complex, tilting_report, Generation, TiltingReport,
};

/// Basis indices of P_v inside the algebra, and offsets of each summand in ⊕ P_v.
pub(crate) fn proj_layout<F: Field>(alg: &FdAlgebra<F>, verts: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut supports = Vec::with_capacity(verts.len());
    let mut offsets = Vec::with_capacity(verts.len() + 1);
    let mut o = 0;
    for &v in verts {
        offsets.push(o);
        let s = FdModule::projective_support(alg, v);
        o += s.len();
        supports.push(s);
    }
    offsets.push(o);
    (supports, offsets)
}

/// ⊕ P_v as a module.
pub fn proj_module<F: Field>(alg: &AlgRef<F>, verts: &[usize]) -> FdModule<F> {
    if verts.is_empty() {
        return FdModule::zero_module(alg);
    }
    let parts: Vec<FdModule<F>> = verts.iter().map(|&v| FdModule::projective(alg, v)).collect();
    FdModule::direct_sum(&parts.iter().collect::<Vec<_>>()).expect("same algebra")
}

/// Split a vector of ⊕ P_v into its summands, each as an algebra element.
pub(crate) fn vector_to_elements<F: Field>(alg: &FdAlgebra<F>, verts: &[usize], v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let (supports, offsets) = proj_layout(alg, verts);
    supports
        .iter()
        .zip(&offsets)
        .map(|(s, &o)| {
            let mut x = alg.zero();
            for (k, &b) in s.iter().enumerate() {
                x[b] = v[o + k].clone();
            }
            x
        })
        .collect()
}

pub(crate) fn elements_to_vector<F: Field>(alg: &FdAlgebra<F>, verts: &[usize], xs: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let (supports, offsets) = proj_layout(alg, verts);
    let mut out = vec![alg.field().zero(); offsets[verts.len()]];
    for ((s, &o), x) in supports.iter().zip(&offsets).zip(xs) {
        for (k, &b) in s.iter().enumerate() {
            out[o + k] = x[b].clone();
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap<F: Field> {
    src: Vec<usize>,
    tgt: Vec<usize>,
    entries: Vec<Vec<F::Elem>>,
}

impl<F: Field> ProjMap<F> {
    pub fn zero(alg: &FdAlgebra<F>, src: &[usize], tgt: &[usize]) -> Self {
        ProjMap { src: src.to_vec(), tgt: tgt.to_vec(), entries: vec![alg.zero(); src.len() * tgt.len()] }
    }

    pub fn identity(alg: &FdAlgebra<F>, verts: &[usize]) -> Self {
        let mut m = Self::zero(alg, verts, verts);
        for (j, &v) in verts.iter().enumerate() {
            m.entries[j * verts.len() + j] = alg.basis_vector(alg.idempotent(v));
        }
        m
    }

    /// Entries given row by row (one row per source summand); each must lie in its block.
    pub fn from_entries(alg: &FdAlgebra<F>, src: &[usize], tgt: &[usize], entries: Vec<Vec<F::Elem>>) -> Result<Self> {
        if entries.len() != src.len() * tgt.len() || entries.iter().any(|x| x.len() != alg.dim()) {
            return Err(Error::DimensionMismatch("map entries do not match the summands".into()));
        }
        let m = ProjMap { src: src.to_vec(), tgt: tgt.to_vec(), entries };
        for j in 0..src.len() {
            for i in 0..tgt.len() {
                let x = m.entry(j, i);
                if alg.block_part(x, src[j], tgt[i]) != *x {
                    return Err(Error::InvalidInput(format!(
                        "entry ({j},{i}) is not in e_{} A e_{}",
                        alg.vertex_labels()[src[j]],
                        alg.vertex_labels()[tgt[i]]
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Read a module map between the sums (columns = source coordinates) off the generator images.
    pub fn from_matrix(alg: &FdAlgebra<F>, src: &[usize], tgt: &[usize], m: &Matrix<F>) -> Self {
        let (supports, offsets) = proj_layout(alg, src);
        let mut entries = Vec::with_capacity(src.len() * tgt.len());
        for (j, &v) in src.iter().enumerate() {
            let pos = supports[j].iter().position(|&b| b == alg.idempotent(v)).expect("idempotent in P_v");
            let col = m.col(offsets[j] + pos);
            entries.extend(vector_to_elements(alg, tgt, &col));
        }
        ProjMap { src: src.to_vec(), tgt: tgt.to_vec(), entries }
    }

    pub fn src(&self) -> &[usize] {
        &self.src
    }
    pub fn tgt(&self) -> &[usize] {
        &self.tgt
    }
    pub fn entry(&self, j: usize, i: usize) -> &Vec<F::Elem> {
        &self.entries[j * self.tgt.len() + i]
    }
    pub fn entries(&self) -> &[Vec<F::Elem>] {
        &self.entries
    }
    pub fn set_entry(&mut self, j: usize, i: usize, x: Vec<F::Elem>) {
        let n = self.tgt.len();
        self.entries[j * n + i] = x;
    }

    /// Image of the generator of the j-th source summand, as a vector of ⊕ P_tgt.
    pub fn generator_image(&self, alg: &FdAlgebra<F>, j: usize) -> Vec<F::Elem> {
        let row: Vec<Vec<F::Elem>> = (0..self.tgt.len()).map(|i| self.entry(j, i).clone()).collect();
        elements_to_vector(alg, &self.tgt, &row)
    }

    /// self, then other.
    pub fn then(&self, other: &Self, alg: &FdAlgebra<F>) -> Self {
        assert_eq!(self.tgt, other.src, "composable maps");
        let mut out = Self::zero(alg, &self.src, &other.tgt);
        for j in 0..self.src.len() {
            for k in 0..other.tgt.len() {
                let mut acc = alg.zero();
                for i in 0..self.tgt.len() {
                    let a = self.entry(j, i);
                    if a.iter().all(|c| alg.field().is_zero(c)) {
                        continue;
                    }
                    let p = alg.mul(a, other.entry(i, k));
                    crate::linalg::matrix::vec_axpy(alg.field(), &mut acc, &alg.field().one(), &p);
                }
                out.set_entry(j, k, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self, f: &F) -> Self {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| crate::linalg::matrix::vec_add(f, a, b)).collect();
        ProjMap { src: self.src.clone(), tgt: self.tgt.clone(), entries }
    }

    pub fn scale(&self, s: &F::Elem, f: &F) -> Self {
        let entries = self.entries.iter().map(|a| crate::linalg::matrix::vec_scale(f, s, a)).collect();
        ProjMap { src: self.src.clone(), tgt: self.tgt.clone(), entries }
    }

    pub fn is_zero(&self, f: &F) -> bool {
        self.entries.iter().all(|a| a.iter().all(|c| f.is_zero(c)))
    }

    /// All entries lie in the radical, i.e. the map is a radical map.
    pub fn is_radical(&self, alg: &FdAlgebra<F>) -> bool {
        self.entries.iter().all(|a| alg.in_radical(a))
    }

    /// Matrix of the map between the modules ⊕ P_src and ⊕ P_tgt.
    pub fn to_matrix(&self, alg: &FdAlgebra<F>) -> Matrix<F> {
        let f = alg.field();
        let (ssup, soff) = proj_layout(alg, &self.src);
        let (_, toff) = proj_layout(alg, &self.tgt);
        let mut m = Matrix::zeros(f, toff[self.tgt.len()], soff[self.src.len()]);
        for (j, sup) in ssup.iter().enumerate() {
            for (k, &b) in sup.iter().enumerate() {
                let row: Vec<Vec<F::Elem>> = (0..self.tgt.len()).map(|i| alg.left_matrix(b).mul_vec(self.entry(j, i))).collect();
                let v = elements_to_vector(alg, &self.tgt, &row);
                for (r, x) in v.into_iter().enumerate() {
                    m.set(r, soff[j] + k, x);
                }
            }
        }
        m
    }

    pub fn select(&self, src_idx: &[usize], tgt_idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(src_idx.len() * tgt_idx.len());
        for &j in src_idx {
            for &i in tgt_idx {
                entries.push(self.entry(j, i).clone());
            }
        }
        ProjMap { src: src_idx.iter().map(|&j| self.src[j]).collect(), tgt: tgt_idx.iter().map(|&i| self.tgt[i]).collect(), entries }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self, alg: &FdAlgebra<F>) -> Self {
        let mut src = self.src.clone();
        src.extend_from_slice(&other.src);
        let mut tgt = self.tgt.clone();
        tgt.extend_from_slice(&other.tgt);
        let mut m = Self::zero(alg, &src, &tgt);
        for j in 0..self.src.len() {
            for i in 0..self.tgt.len() {
                m.set_entry(j, i, self.entry(j, i).clone());
            }
        }
        for j in 0..other.src.len() {
            for i in 0..other.tgt.len() {
                m.set_entry(self.src.len() + j, self.tgt.len() + i, other.entry(j, i).clone());
            }
        }
        m
    }

    pub fn render(&self, alg: &FdAlgebra<F>) -> Vec<Vec<String>> {
        (0..self.src.len()).map(|j| (0..self.tgt.len()).map(|i| alg.render_element(self.entry(j, i))).collect()).collect()
    }
}

/// Inverse of a unit of the local ring e_v A e_v.
pub(crate) fn corner_inverse<F: Field>(alg: &FdAlgebra<F>, x: &[F::Elem], v: usize) -> Option<Vec<F::Elem>> {
    let f = alg.field();
    let e = alg.idempotent(v);
    let c = f.inv(&x[e])?;
    // x = c0 (e + n) with n nilpotent; x^{-1} = c0^{-1} Σ (-n)^k
    let mut n = crate::linalg::matrix::vec_scale(f, &c, x);
    n[e] = f.zero();
    let neg_n = crate::linalg::matrix::vec_scale(f, &f.neg(&f.one()), &n);
    let mut term = alg.basis_vector(e);
    let mut acc = alg.basis_vector(e);
    for _ in 0..alg.loewy_length() {
        term = alg.mul(&term, &neg_n);
        crate::linalg::matrix::vec_axpy(f, &mut acc, &f.one(), &term);
    }
    Some(crate::linalg::matrix::vec_scale(f, &c, &acc))
}

/// A bounded complex of finitely generated projective modules, d^i : X^i -> X^{i+1}.
#[derive(Clone, Debug)]
pub struct ProjComplex<F: Field> {
    alg: AlgRef<F>,
    terms: BTreeMap<i64, Vec<usize>>,
    diffs: BTreeMap<i64, ProjMap<F>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComplexDescription {
    pub terms: BTreeMap<i64, Vec<String>>,
    pub differentials: BTreeMap<i64, Vec<Vec<String>>>,
    pub radical: bool,
}

impl<F: Field> ProjComplex<F> {
    /// Build and validate (shapes, blocks and d∘d = 0). Empty terms are dropped and
    /// missing differentials between nonzero terms are zero.
    pub fn new(alg: &AlgRef<F>, terms: BTreeMap<i64, Vec<usize>>, diffs: BTreeMap<i64, ProjMap<F>>) -> Result<Self> {
        let terms: BTreeMap<i64, Vec<usize>> = terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        for (&i, d) in &diffs {
            let s = terms.get(&i).map(|v| v.as_slice()).unwrap_or(&[]);
            let t = terms.get(&(i + 1)).map(|v| v.as_slice()).unwrap_or(&[]);
            if d.src() != s || d.tgt() != t {
                return Err(Error::DimensionMismatch(format!("differential in degree {i} does not match the terms")));
            }
        }
        let mut x = ProjComplex { alg: Arc::clone(alg), terms, diffs: BTreeMap::new() };
        let degs: Vec<i64> = x.terms.keys().copied().collect();
        for i in degs {
            if x.terms.contains_key(&(i + 1)) {
                let d = diffs.get(&i).cloned().unwrap_or_else(|| ProjMap::zero(alg, &x.terms[&i], &x.terms[&(i + 1)]));
                x.diffs.insert(i, ProjMap::from_entries(alg, d.src(), d.tgt(), d.entries().to_vec())?);
            }
        }
        for (&i, d) in &x.diffs {
            if let Some(d2) = x.diffs.get(&(i + 1)) {
                if !d.then(d2, alg).is_zero(alg.field()) {
                    return Err(Error::InvalidInput(format!("d∘d is not zero at degree {i}")));
                }
            }
        }
        Ok(x)
    }

    pub fn zero(alg: &AlgRef<F>) -> Self {
        ProjComplex { alg: Arc::clone(alg), terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn stalk(alg: &AlgRef<F>, verts: &[usize], degree: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(degree, verts.to_vec());
        ProjComplex::new(alg, terms, BTreeMap::new()).expect("stalk complexes are valid")
    }

    /// Two-term complex P --d--> Q with P in degree `degree`.
    pub fn two_term(alg: &AlgRef<F>, d: ProjMap<F>, degree: i64) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert(degree, d.src().to_vec());
        terms.insert(degree + 1, d.tgt().to_vec());
        let mut diffs = BTreeMap::new();
        diffs.insert(degree, d);
        ProjComplex::new(alg, terms, diffs)
    }

    pub fn algebra(&self) -> &AlgRef<F> {
        &self.alg
    }
    pub fn terms(&self) -> &BTreeMap<i64, Vec<usize>> {
        &self.terms
    }
    pub fn term(&self, i: i64) -> &[usize] {
        self.terms.get(&i).map(|v| v.as_slice()).unwrap_or(&[])
    }
    pub fn diff(&self, i: i64) -> ProjMap<F> {
        self.diffs.get(&i).cloned().unwrap_or_else(|| ProjMap::zero(&self.alg, self.term(i), self.term(i + 1)))
    }
    pub fn diffs(&self) -> &BTreeMap<i64, ProjMap<F>> {
        &self.diffs
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_radical(&self) -> bool {
        self.diffs.values().all(|d| d.is_radical(&self.alg))
    }

    /// d∘d = 0 at every degree.
    pub fn check_d_squared(&self) -> bool {
        self.diffs.iter().all(|(i, d)| self.diffs.get(&(i + 1)).map_or(true, |d2| d.then(d2, &self.alg).is_zero(self.alg.field())))
    }

    pub fn term_module(&self, i: i64) -> FdModule<F> {
        proj_module(&self.alg, self.term(i))
    }

    /// (X[n])^i = X^{i+n}, with differential (-1)^n d.
    pub fn shift(&self, n: i64) -> Self {
        let f = self.alg.field();
        let sign = if n.rem_euclid(2) == 0 { f.one() } else { f.neg(&f.one()) };
        let terms = self.terms.iter().map(|(&i, v)| (i - n, v.clone())).collect();
        let diffs = self.diffs.iter().map(|(&i, d)| (i - n, d.scale(&sign, f))).collect();
        ProjComplex { alg: Arc::clone(&self.alg), terms, diffs }
    }

    /// Brutal truncation keeping the degrees i with keep(i).
    fn truncate(&self, keep: impl Fn(i64) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(i, _)| keep(**i)).map(|(&i, v)| (i, v.clone())).collect();
        let diffs = self.diffs.iter().filter(|(i, _)| keep(**i) && keep(**i + 1)).map(|(&i, d)| (i, d.clone())).collect();
        ProjComplex { alg: Arc::clone(&self.alg), terms, diffs }
    }

    /// σ_{<i}
    pub fn sigma_lt(&self, i: i64) -> Self {
        self.truncate(|d| d < i)
    }

    /// σ_{≥i}
    pub fn sigma_geq(&self, i: i64) -> Self {
        self.truncate(|d| d >= i)
    }

    pub fn direct_sum(parts: &[&ProjComplex<F>]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        let alg = &first.alg;
        let mut terms: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for p in parts {
            if !crate::modcat::same_algebra(alg, &p.alg) {
                return Err(Error::AlgebraMismatch);
            }
            for (&i, v) in &p.terms {
                terms.entry(i).or_default().extend_from_slice(v);
            }
        }
        let mut diffs = BTreeMap::new();
        for &i in terms.keys() {
            if !terms.contains_key(&(i + 1)) {
                continue;
            }
            let mut d = ProjMap::zero(alg, &[], &[]);
            for p in parts {
                d = d.direct_sum(&p.diff(i), alg);
            }
            diffs.insert(i, d);
        }
        ProjComplex::new(alg, terms, diffs)
    }

    /// Total module ⊕_i X^i, the layout used for decomposition.
    pub(crate) fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn describe(&self) -> ComplexDescription {
        let labels = self.alg.vertex_labels();
        ComplexDescription {
            terms: self.terms.iter().map(|(&i, v)| (i, v.iter().map(|&w| format!("P{}", labels[w])).collect())).collect(),
            differentials: self.diffs.iter().filter(|(_, d)| !d.is_zero(self.alg.field())).map(|(&i, d)| (i, d.render(&self.alg))).collect(),
            radical: self.is_radical(),
        }
    }

    /// Alternating sum of projective multiplicities, one entry per vertex.
    pub fn k0_class(&self) -> Vec<i64> {
        let mut c = vec![0i64; self.alg.num_vertices()];
        for (&i, v) in &self.terms {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for &w in v {
                c[w] += s;
            }
        }
        c
    }
}

/// Homotopy-equivalent radical complex, by repeatedly splitting off contractible
/// summands P --unit--> P (Gaussian elimination).
pub fn normalize_radical<F: Field>(x: &ProjComplex<F>) -> ProjComplex<F> {
    let alg = Arc::clone(&x.alg);
    let mut terms = x.terms.clone();
    let mut diffs = x.diffs.clone();
    loop {
        let mut found = None;
        'search: for (&i, d) in &diffs {
            for j in 0..d.src().len() {
                for k in 0..d.tgt().len() {
                    if d.src()[j] == d.tgt()[k] && alg.is_unit_in_corner(d.entry(j, k), d.src()[j]) {
                        found = Some((i, j, k));
                        break 'search;
                    }
                }
            }
        }
        let Some((i, j0, k0)) = found else { break };
        let d = diffs[&i].clone();
        let phi_inv = corner_inverse(&alg, d.entry(j0, k0), d.src()[j0]).expect("unit");
        let keep_src: Vec<usize> = (0..d.src().len()).filter(|&j| j != j0).collect();
        let keep_tgt: Vec<usize> = (0..d.tgt().len()).filter(|&k| k != k0).collect();
        // ε' = ε - γ φ^{-1} δ
        let mut nd = d.select(&keep_src, &keep_tgt);
        let f = alg.field();
        for (a, &j) in keep_src.iter().enumerate() {
            let g = alg.mul(d.entry(j, k0), &phi_inv);
            if alg.in_radical(&g) && g.iter().all(|c| f.is_zero(c)) {
                continue;
            }
            for (b, &k) in keep_tgt.iter().enumerate() {
                let corr = alg.mul(&g, d.entry(j0, k));
                let v = crate::linalg::matrix::vec_sub(f, nd.entry(a, b), &corr);
                nd.set_entry(a, b, v);
            }
        }
        if let Some(prev) = diffs.get(&(i - 1)).cloned() {
            let all: Vec<usize> = (0..prev.src().len()).collect();
            diffs.insert(i - 1, prev.select(&all, &keep_src));
        }
        if let Some(next) = diffs.get(&(i + 1)).cloned() {
            let all: Vec<usize> = (0..next.tgt().len()).collect();
            diffs.insert(i + 1, next.select(&keep_tgt, &all));
        }
        diffs.insert(i, nd);
        terms.get_mut(&i).expect("term").remove(j0);
        terms.get_mut(&(i + 1)).expect("term").remove(k0);
    }
    let terms: BTreeMap<i64, Vec<usize>> = terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
    let diffs = diffs
        .into_iter()
        .filter(|(i, _)| terms.contains_key(i) && terms.contains_key(&(i + 1)))
        .collect();
    ProjComplex { alg, terms, diffs }
}

/// A bounded complex of arbitrary modules, d^i : Z^i -> Z^{i+1} as matrices.
#[derive(Clone, Debug)]
pub struct ModComplex<F: Field> {
    alg: AlgRef<F>,
    terms: BTreeMap<i64, FdModule<F>>,
    diffs: BTreeMap<i64, Matrix<F>>,
}

impl<F: Field> ModComplex<F> {
    pub fn new(alg: &AlgRef<F>, terms: BTreeMap<i64, FdModule<F>>, diffs: BTreeMap<i64, Matrix<F>>) -> Result<Self> {
        let terms: BTreeMap<i64, FdModule<F>> = terms.into_iter().filter(|(_, m)| m.dim() > 0).collect();
        let z = ModComplex { alg: Arc::clone(alg), terms, diffs: BTreeMap::new() };
        let mut out = z.clone();
        for (&i, d) in &diffs {
            let (s, t) = (z.dim_at(i), z.dim_at(i + 1));
            if s == 0 || t == 0 {
                continue;
            }
            if d.rows() != t || d.cols() != s {
                return Err(Error::DimensionMismatch(format!("differential in degree {i} has the wrong shape")));
            }
            if !crate::modcat::is_module_hom(&z.terms[&i], &z.terms[&(i + 1)], d) {
                return Err(Error::InvalidInput(format!("differential in degree {i} is not a module map")));
            }
            out.diffs.insert(i, d.clone());
        }
        for (&i, d) in &out.diffs {
            if let Some(d2) = out.diffs.get(&(i + 1)) {
                if !d2.mul(d).is_zero() {
                    return Err(Error::InvalidInput(format!("d∘d is not zero at degree {i}")));
                }
            }
        }
        Ok(out)
    }

    pub fn from_proj(x: &ProjComplex<F>) -> Self {
        let terms = x.terms.keys().map(|&i| (i, x.term_module(i))).collect();
        let diffs = x.diffs.iter().map(|(&i, d)| (i, d.to_matrix(&x.alg))).collect();
        ModComplex { alg: Arc::clone(&x.alg), terms, diffs }
    }

    pub fn stalk(m: &FdModule<F>, degree: i64) -> Self {
        let mut terms = BTreeMap::new();
        if m.dim() > 0 {
            terms.insert(degree, m.clone());
        }
        ModComplex { alg: Arc::clone(m.algebra()), terms, diffs: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &AlgRef<F> {
        &self.alg
    }
    pub fn terms(&self) -> &BTreeMap<i64, FdModule<F>> {
        &self.terms
    }
    pub fn term(&self, i: i64) -> Option<&FdModule<F>> {
        self.terms.get(&i)
    }
    pub fn dim_at(&self, i: i64) -> usize {
        self.terms.get(&i).map_or(0, |m| m.dim())
    }
    /// d^i, or None when it is zero or one side vanishes.
    pub fn diffs(&self) -> &BTreeMap<i64, Matrix<F>> {
        &self.diffs
    }
    pub fn diff(&self, i: i64) -> Option<&Matrix<F>> {
        self.diffs.get(&i)
    }
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn direct_sum(parts: &[&ModComplex<F>]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        let alg = Arc::clone(&first.alg);
        let f = alg.field();
        let mut degs: Vec<i64> = parts.iter().flat_map(|p| p.terms.keys().copied()).collect();
        degs.sort();
        degs.dedup();
        let mut terms = BTreeMap::new();
        for &i in &degs {
            let mods: Vec<&FdModule<F>> = parts.iter().filter_map(|p| p.terms.get(&i)).collect();
            terms.insert(i, FdModule::direct_sum(&mods)?);
        }
        let mut diffs = BTreeMap::new();
        for &i in &degs {
            if !terms.contains_key(&(i + 1)) {
                continue;
            }
            let mut d = Matrix::zeros(f, 0, 0);
            for p in parts {
                let blk = p.diffs.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(f, p.dim_at(i + 1), p.dim_at(i)));
                d = d.direct_sum(&blk);
            }
            diffs.insert(i, d);
        }
        ModComplex::new(&alg, terms, diffs)
    }

    /// The subcomplex I·Z and the quotient Z/IZ (both over the same algebra).
    pub fn split_by_ideal(&self, ideal: &AlgebraIdeal<F>) -> Result<(ModComplex<F>, ModComplex<F>)> {
        let (sub, quo, _) = self.split_with_projection(ideal)?;
        Ok((sub, quo))
    }

    /// As `split_by_ideal`, also returning the termwise projections Z^i -> Z^i/IZ^i.
    pub fn split_with_projection(
        &self,
        ideal: &AlgebraIdeal<F>,
    ) -> Result<(ModComplex<F>, ModComplex<F>, BTreeMap<i64, Matrix<F>>)> {
        let f = self.alg.field();
        let mut sub_terms = BTreeMap::new();
        let mut quo_terms = BTreeMap::new();
        let mut incl = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for (&i, m) in &self.terms {
            let mut vecs = Vec::new();
            for x in ideal.basis() {
                let act = m.act(x);
                for c in 0..m.dim() {
                    vecs.push(act.col(c));
                }
            }
            let space = Subspace::span(f, m.dim(), &vecs);
            let (s, si) = m.submodule(&space)?;
            let (q, qp) = m.quotient(&space)?;
            sub_terms.insert(i, s);
            quo_terms.insert(i, q);
            incl.insert(i, si);
            proj.insert(i, qp);
        }
        let mut sub_diffs = BTreeMap::new();
        let mut quo_diffs = BTreeMap::new();
        for (&i, d) in &self.diffs {
            // restriction: coordinates of d ι_i in the basis ι_{i+1}
            let (si, sn) = (&incl[&i], &incl[&(i + 1)]);
            let img = d.mul(si);
            let mut cols = Vec::new();
            for c in 0..img.cols() {
                cols.push(sn.solve(&img.col(c)).ok_or_else(|| Error::Internal("I·Z is not a subcomplex".into()))?);
            }
            sub_diffs.insert(i, if cols.is_empty() { Matrix::zeros(f, sn.cols(), 0) } else { Matrix::from_cols(f, sn.cols(), &cols) });
            // induced map on quotients: π_{i+1} d s_i with s_i a section of π_i
            let (pi, pn) = (&proj[&i], &proj[&(i + 1)]);
            let mut sec = Vec::new();
            for r in 0..pi.rows() {
                sec.push(pi.solve(&crate::linalg::matrix::unit_vec(f, pi.rows(), r)).expect("projection is onto"));
            }
            let s = if sec.is_empty() { Matrix::zeros(f, pi.cols(), 0) } else { Matrix::from_cols(f, pi.cols(), &sec) };
            quo_diffs.insert(i, pn.mul(d).mul(&s));
        }
        Ok((ModComplex::new(&self.alg, sub_terms, sub_diffs)?, ModComplex::new(&self.alg, quo_terms, quo_diffs)?, proj))
    }
}

/// T/IT as a complex of projectives over A/I, together with I·T over A.
pub struct QuotientComplex<F: Field> {
    pub quotient: Quotient<F>,
    pub complex: ProjComplex<F>,
    pub sub: ModComplex<F>,
}

/// Reduce a complex of projectives modulo an ideal: P_v becomes P̄_v over A/I.
pub fn quotient_complex<F: Field>(x: &ProjComplex<F>, ideal: &AlgebraIdeal<F>) -> Result<QuotientComplex<F>> {
    let alg = x.algebra();
    let q = crate::algebra::quotient_by_ideal(alg, ideal)?;
    let qa: AlgRef<F> = Arc::new(q.algebra.clone());
    let map_verts = |vs: &[usize]| -> (Vec<usize>, Vec<usize>) {
        let mut keep = Vec::new();
        let mut out = Vec::new();
        for (j, &v) in vs.iter().enumerate() {
            if let Some(w) = q.vertex_of(v) {
                keep.push(j);
                out.push(w);
            }
        }
        (keep, out)
    };
    let mut terms = BTreeMap::new();
    for (&i, v) in x.terms() {
        terms.insert(i, map_verts(v).1);
    }
    let mut diffs = BTreeMap::new();
    for (&i, d) in x.diffs() {
        let (ks, s) = map_verts(d.src());
        let (kt, t) = map_verts(d.tgt());
        let mut entries = Vec::new();
        for &j in &ks {
            for &k in &kt {
                entries.push(q.project(d.entry(j, k)));
            }
        }
        diffs.insert(i, ProjMap::from_entries(&qa, &s, &t, entries)?);
    }
    let complex = ProjComplex::new(&qa, terms, diffs)?;
    let (sub, _) = ModComplex::from_proj(x).split_by_ideal(ideal)?;
    Ok(QuotientComplex { quotient: q, complex, sub })
}
