//! Minimal projective resolutions, Ext groups and Yoneda products.
//!
//! A class in Ext^d(X, Y) is stored as a cocycle P_d -> Y, i.e. one vector of
//! e_v Y per indecomposable summand P_v of P_d. Products lift the first cocycle
//! to a chain map between resolutions (comparison lift) and compose.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::AlgRef;
use crate::error::{Error, Result};
use crate::homotopy::ProjMap;
use crate::linalg::matrix::vec_axpy;
use crate::linalg::{Field, Matrix, QuotientSpace, Subspace};
use crate::modcat::{projective_cover, same_algebra, FdModule};

/// P_len -> ... -> P_1 -> P_0 -> M -> 0, minimal.
#[derive(Clone, Debug)]
pub struct ProjResolution<F: Field> {
    alg: AlgRef<F>,
    /// modules[0] = M, modules[k] = Ω^k M for k >= 1.
    modules: Vec<FdModule<F>>,
    terms: Vec<Vec<usize>>,
    term_modules: Vec<FdModule<F>>,
    /// epis[k] : P_k -> Ω^k M (dim Ω^k M x dim P_k).
    epis: Vec<Matrix<F>>,
    /// incls[k] : Ω^k M -> P_{k-1} for k >= 1; incls[0] is unused.
    incls: Vec<Matrix<F>>,
    /// diffs[k] : P_k -> P_{k-1} as a map of projectives; diffs[0] is unused.
    diffs: Vec<ProjMap<F>>,
    /// The resolution stopped because some Ω^k M vanished.
    finite: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResolutionSummary {
    pub terms: Vec<Vec<String>>,
    pub finite: bool,
}

/// Minimal projective resolution with at least `cap + 1` differentials (or until
/// it stops), so that Ext^d is available for every d <= cap.
pub fn min_proj_resolution<F: Field>(m: &FdModule<F>, cap: usize) -> Result<ProjResolution<F>> {
    let alg = Arc::clone(m.algebra());
    let f = alg.field();
    let mut res = ProjResolution {
        alg: Arc::clone(&alg),
        modules: vec![m.clone()],
        terms: Vec::new(),
        term_modules: Vec::new(),
        epis: Vec::new(),
        incls: vec![Matrix::zeros(f, 0, 0)],
        diffs: Vec::new(),
        finite: false,
    };
    for k in 0..=cap + 1 {
        let cur = res.modules[k].clone();
        if cur.dim() == 0 {
            res.finite = true;
            break;
        }
        let cover = projective_cover(&cur)?;
        res.terms.push(cover.tops.clone());
        res.term_modules.push(cover.module.clone());
        res.epis.push(cover.epi.clone());
        if k == 0 {
            res.diffs.push(ProjMap::zero(&alg, &[], &[]));
        } else {
            let d = res.incls[k].mul(&cover.epi);
            res.diffs.push(ProjMap::from_matrix(&alg, &cover.tops, &res.terms[k - 1], &d));
        }
        let kernel = Subspace::span(f, cover.module.dim(), &cover.epi.kernel());
        let (omega, incl) = cover.module.submodule(&kernel)?;
        res.modules.push(omega);
        res.incls.push(incl);
    }
    Ok(res)
}

impl<F: Field> ProjResolution<F> {
    pub fn algebra(&self) -> &AlgRef<F> {
        &self.alg
    }
    pub fn module(&self) -> &FdModule<F> {
        &self.modules[0]
    }
    /// Ω^k M, when computed.
    pub fn syzygy(&self, k: usize) -> Option<&FdModule<F>> {
        self.modules.get(k)
    }
    /// Vertices of P_k (empty beyond the end of a finite resolution).
    pub fn term(&self, k: usize) -> &[usize] {
        self.terms.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_finite(&self) -> bool {
        self.finite
    }
    /// Largest d with Ext^d computable from this resolution.
    pub fn ext_cap(&self) -> usize {
        if self.finite {
            usize::MAX
        } else {
            self.terms.len().saturating_sub(2)
        }
    }
    /// Projective dimension, when the resolution stopped.
    pub fn projective_dimension(&self) -> Option<usize> {
        self.finite.then(|| self.terms.len().saturating_sub(1))
    }

    /// d_k : P_k -> P_{k-1} for k >= 1.
    pub fn differential(&self, k: usize) -> ProjMap<F> {
        if k >= 1 && k < self.diffs.len() {
            self.diffs[k].clone()
        } else {
            ProjMap::zero(&self.alg, self.term(k), self.term(k.wrapping_sub(1)))
        }
    }

    fn known(&self, k: usize) -> Result<()> {
        if k < self.terms.len() || self.finite {
            Ok(())
        } else {
            Err(Error::CapExceeded(format!("resolution has {} terms, degree {k} requested", self.terms.len())))
        }
    }

    fn term_module(&self, k: usize) -> FdModule<F> {
        self.term_modules.get(k).cloned().unwrap_or_else(|| FdModule::zero_module(&self.alg))
    }

    /// The resolution of Ω M obtained by dropping P_0.
    pub fn tail(&self) -> Result<ProjResolution<F>> {
        if self.terms.is_empty() {
            return Err(Error::InvalidInput("the zero module has no syzygy resolution".into()));
        }
        let mut incls = vec![Matrix::zeros(self.alg.field(), 0, 0)];
        incls.extend(self.incls.iter().skip(2).cloned());
        let mut diffs = vec![ProjMap::zero(&self.alg, &[], &[])];
        diffs.extend(self.diffs.iter().skip(2).cloned());
        Ok(ProjResolution {
            alg: Arc::clone(&self.alg),
            modules: self.modules[1..].to_vec(),
            terms: self.terms[1..].to_vec(),
            term_modules: self.term_modules[1..].to_vec(),
            epis: self.epis[1..].to_vec(),
            incls,
            diffs,
            finite: self.finite,
        })
    }

    /// Exactness at every computed degree and radical differentials.
    pub fn check(&self) -> bool {
        let alg = &self.alg;
        for k in 0..self.terms.len() {
            let d_in = if k + 1 < self.terms.len() { Some(self.diffs[k + 1].to_matrix(alg)) } else { None };
            let out = if k == 0 { self.epis[0].clone() } else { self.diffs[k].to_matrix(alg) };
            let ker = self.term_modules[k].dim() - out.rank();
            if let Some(d) = d_in {
                if !out.mul(&d).is_zero() || d.rank() != ker || !self.diffs[k + 1].is_radical(alg) {
                    return false;
                }
            }
        }
        self.epis[0].rank() == self.modules[0].dim() || self.terms.is_empty()
    }

    pub fn summary(&self) -> ResolutionSummary {
        let labels = self.alg.vertex_labels();
        ResolutionSummary {
            terms: self.terms.iter().map(|t| t.iter().map(|&v| format!("P{}", labels[v])).collect()).collect(),
            finite: self.finite,
        }
    }
}

/// Coordinates of the cochain space Hom(P, Y) for P = ⊕ P_v: one block e_v Y per summand.
fn cochain_layout<F: Field>(verts: &[usize], y: &FdModule<F>) -> (Vec<Vec<usize>>, usize) {
    let mut blocks = Vec::with_capacity(verts.len());
    let mut len = 0;
    for &v in verts {
        let idx = y.indices_at(v);
        len += idx.len();
        blocks.push(idx);
    }
    (blocks, len)
}

/// Matrix of g -> (d then g) from Hom(Q, Y) to Hom(P, Y) for a map d : P -> Q.
fn precompose_matrix<F: Field>(d: &ProjMap<F>, y: &FdModule<F>) -> Matrix<F> {
    let f = y.field();
    let (rows, rlen) = cochain_layout(d.src(), y);
    let (cols, clen) = cochain_layout(d.tgt(), y);
    let mut m = Matrix::zeros(f, rlen, clen);
    let mut r0 = 0;
    for (j, rj) in rows.iter().enumerate() {
        let mut c0 = 0;
        for (k, ck) in cols.iter().enumerate() {
            let e = d.entry(j, k);
            if !rj.is_empty() && !ck.is_empty() && e.iter().any(|c| !f.is_zero(c)) {
                m.paste(r0, c0, &y.act(e).select(rj, ck));
            }
            c0 += ck.len();
        }
        r0 += rj.len();
    }
    m
}

/// Split a cochain vector into full vectors of Y, one per summand.
fn cochain_vectors<F: Field>(verts: &[usize], y: &FdModule<F>, v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let f = y.field();
    let (blocks, _) = cochain_layout(verts, y);
    let mut out = Vec::with_capacity(verts.len());
    let mut o = 0;
    for idx in blocks {
        let mut g = vec![f.zero(); y.dim()];
        for (k, &r) in idx.iter().enumerate() {
            g[r] = v[o + k].clone();
        }
        o += idx.len();
        out.push(g);
    }
    out
}

fn cochain_from_vectors<F: Field>(verts: &[usize], y: &FdModule<F>, gs: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let (blocks, len) = cochain_layout(verts, y);
    let mut out = Vec::with_capacity(len);
    for (idx, g) in blocks.iter().zip(gs) {
        out.extend(idx.iter().map(|&r| g[r].clone()));
    }
    out
}

/// Ext^d(M, Y) computed from a resolution of M.
#[derive(Clone, Debug)]
pub struct ExtGroup<F: Field> {
    res: Arc<ProjResolution<F>>,
    target: FdModule<F>,
    degree: usize,
    space: QuotientSpace<F>,
    cochain_dim: usize,
}

/// A class with its normalized cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtClass<F: Field> {
    pub degree: usize,
    pub cocycle: Vec<F::Elem>,
    pub coords: Vec<F::Elem>,
}

pub fn ext_group<F: Field>(res: &Arc<ProjResolution<F>>, y: &FdModule<F>, d: usize) -> Result<ExtGroup<F>> {
    if !same_algebra(res.algebra(), y.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    res.known(d + 1)?;
    let f = y.field();
    let (_, len) = cochain_layout(res.term(d), y);
    let cocycles = precompose_matrix(&res.differential(d + 1), y).kernel();
    let boundaries: Vec<Vec<F::Elem>> = if d == 0 {
        Vec::new()
    } else {
        let b = precompose_matrix(&res.differential(d), y);
        (0..b.cols()).map(|c| b.col(c)).collect()
    };
    let space = QuotientSpace::new(f, len, &cocycles, &boundaries);
    Ok(ExtGroup { res: Arc::clone(res), target: y.clone(), degree: d, space, cochain_dim: len })
}

/// Ext^d(M, Y) from scratch.
pub fn ext<F: Field>(m: &FdModule<F>, y: &FdModule<F>, d: usize) -> Result<ExtGroup<F>> {
    ext_group(&Arc::new(min_proj_resolution(m, d)?), y, d)
}

impl<F: Field> ExtGroup<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn resolution(&self) -> &Arc<ProjResolution<F>> {
        &self.res
    }
    pub fn target(&self) -> &FdModule<F> {
        &self.target
    }
    pub fn cochain_dim(&self) -> usize {
        self.cochain_dim
    }

    pub fn class(&self, k: usize) -> ExtClass<F> {
        let f = self.target.field();
        let coords = (0..self.dim()).map(|l| if l == k { f.one() } else { f.zero() }).collect();
        ExtClass { degree: self.degree, cocycle: self.space.representatives()[k].clone(), coords }
    }

    pub fn basis(&self) -> Vec<ExtClass<F>> {
        (0..self.dim()).map(|k| self.class(k)).collect()
    }

    pub fn class_of(&self, cocycle: &[F::Elem]) -> Option<ExtClass<F>> {
        let coords = self.space.coords(cocycle)?;
        Some(ExtClass { degree: self.degree, cocycle: self.space.represent(&coords), coords })
    }

    pub fn from_coords(&self, coords: &[F::Elem]) -> ExtClass<F> {
        ExtClass { degree: self.degree, cocycle: self.space.represent(coords), coords: coords.to_vec() }
    }

    pub fn zero_class(&self) -> ExtClass<F> {
        let f = self.target.field();
        self.from_coords(&vec![f.zero(); self.dim()])
    }

    /// The degree-0 cocycle of a module map M -> Y (dim Y x dim M).
    pub fn class_of_hom(&self, phi: &Matrix<F>) -> Result<ExtClass<F>> {
        if self.degree != 0 {
            return Err(Error::InvalidInput("only degree-0 classes come from module maps".into()));
        }
        let composite = phi.mul(&self.res.epis[0]);
        let alg = &self.res.alg;
        let gens: Vec<Vec<F::Elem>> = generator_positions(alg, self.res.term(0)).into_iter().map(|c| composite.col(c)).collect();
        let v = cochain_from_vectors(self.res.term(0), &self.target, &gens);
        self.class_of(&v).ok_or_else(|| Error::InvalidInput("the matrix is not a module map".into()))
    }

    /// The module map M -> Y of a degree-0 class.
    pub fn hom_of_class(&self, c: &ExtClass<F>) -> Result<Matrix<F>> {
        if self.degree != 0 {
            return Err(Error::InvalidInput("only degree-0 classes are module maps".into()));
        }
        let alg = &self.res.alg;
        let gs = cochain_vectors(self.res.term(0), &self.target, &c.cocycle);
        let mut cols = Vec::new();
        for (&v, g) in self.res.term(0).iter().zip(&gs) {
            for b in FdModule::projective_support(alg, v) {
                cols.push(self.target.action(b).mul_vec(g));
            }
        }
        let f = self.target.field();
        let on_p = if cols.is_empty() { Matrix::zeros(f, self.target.dim(), 0) } else { Matrix::from_cols(f, self.target.dim(), &cols) };
        // factor through the epi P_0 -> M using a section
        let epi = &self.res.epis[0];
        let m = self.res.module().dim();
        let mut sec = Vec::with_capacity(m);
        for r in 0..m {
            sec.push(epi.solve(&crate::linalg::matrix::unit_vec(f, m, r)).ok_or_else(|| Error::Internal("augmentation is not onto".into()))?);
        }
        let s = if sec.is_empty() { Matrix::zeros(f, epi.cols(), 0) } else { Matrix::from_cols(f, epi.cols(), &sec) };
        Ok(on_p.mul(&s))
    }
}

/// Column of each summand generator e_v inside ⊕ P_v.
fn generator_positions<F: Field>(alg: &crate::algebra::FdAlgebra<F>, verts: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(verts.len());
    let mut o = 0;
    for &v in verts {
        let sup = FdModule::projective_support(alg, v);
        out.push(o + sup.iter().position(|&b| b == alg.idempotent(v)).expect("idempotent in P_v"));
        o += sup.len();
    }
    out
}

/// Solve `mat * p = rhs` with p supported on the coordinates `cols`, adding a random
/// kernel element when `rng` is given.
fn solve_at<F: Field>(mat: &Matrix<F>, cols: &[usize], rhs: &[F::Elem], rng: Option<&mut ChaCha8Rng>) -> Option<Vec<F::Elem>> {
    let f = mat.field();
    let all: Vec<usize> = (0..mat.rows()).collect();
    let sub = mat.select(&all, cols);
    let mut p = if cols.is_empty() {
        if rhs.iter().all(|c| f.is_zero(c)) {
            Vec::new()
        } else {
            return None;
        }
    } else {
        sub.solve(rhs)?
    };
    if let Some(rng) = rng {
        for k in sub.kernel() {
            let c = f.random(rng);
            vec_axpy(f, &mut p, &c, &k);
        }
    }
    let mut out = vec![f.zero(); mat.cols()];
    for (i, &c) in cols.iter().enumerate() {
        out[c] = p[i].clone();
    }
    Some(out)
}

/// Comparison lift of a cocycle f : P^X_i -> Y to maps F_k : P^X_{i+k} -> P^Y_k, k = 0..=steps.
pub fn lift_cocycle<F: Field>(
    res_x: &ProjResolution<F>,
    i: usize,
    f_cocycle: &[F::Elem],
    res_y: &ProjResolution<F>,
    steps: usize,
    perturb: Option<u64>,
) -> Result<Vec<ProjMap<F>>> {
    let alg = &res_x.alg;
    let mut rng = perturb.map(ChaCha8Rng::seed_from_u64);
    res_x.known(i + steps)?;
    res_y.known(steps)?;
    let y = res_y.module();
    let mut out: Vec<ProjMap<F>> = Vec::with_capacity(steps + 1);
    // F_0 : generator images of f lifted through P^Y_0 -> Y
    let src0 = res_x.term(i);
    let tgt0 = res_y.term(0);
    let p0 = res_y.term_module(0);
    let fs = cochain_vectors(src0, y, f_cocycle);
    let mut entries = Vec::with_capacity(src0.len() * tgt0.len());
    for (&v, g) in src0.iter().zip(&fs) {
        let p = if tgt0.is_empty() {
            if g.iter().any(|c| !alg.field().is_zero(c)) {
                return Err(Error::Internal("cocycle into zero module is nonzero".into()));
            }
            Vec::new()
        } else {
            solve_at(&res_y.epis[0], &p0.indices_at(v), g, rng.as_mut()).ok_or_else(|| Error::Internal("comparison lift failed in degree 0".into()))?
        };
        entries.extend(crate::homotopy::vector_to_elements(alg, tgt0, &p));
    }
    out.push(ProjMap::from_entries(alg, src0, tgt0, entries)?);
    for k in 0..steps {
        let lhs = res_x.differential(i + k + 1).then(&out[k], alg);
        let src = res_x.term(i + k + 1);
        let tgt = res_y.term(k + 1);
        let pk = res_y.term_module(k + 1);
        let dy = res_y.differential(k + 1).to_matrix(alg);
        let mut entries = Vec::with_capacity(src.len() * tgt.len());
        for (j, &v) in src.iter().enumerate() {
            let rhs = lhs.generator_image(alg, j);
            let p = if tgt.is_empty() {
                if rhs.iter().any(|c| !alg.field().is_zero(c)) {
                    return Err(Error::Internal(format!("comparison lift failed in degree {}", k + 1)));
                }
                Vec::new()
            } else {
                solve_at(&dy, &pk.indices_at(v), &rhs, rng.as_mut())
                    .ok_or_else(|| Error::Internal(format!("comparison lift failed in degree {}", k + 1)))?
            };
            entries.extend(crate::homotopy::vector_to_elements(alg, tgt, &p));
        }
        out.push(ProjMap::from_entries(alg, src, tgt, entries)?);
    }
    Ok(out)
}

/// Cocycle of (map of projectives) then (cocycle): P -> Q -> Z.
fn compose_with_cocycle<F: Field>(m: &ProjMap<F>, g_cocycle: &[F::Elem], z: &FdModule<F>) -> Vec<F::Elem> {
    precompose_matrix(m, z).mul_vec(g_cocycle)
}

/// Yoneda product f·g = f then g[i] for f in Ext^i(X, Y) and g in Ext^j(Y, Z),
/// landing in `out` = Ext^{i+j}(X, Z). `perturb` picks a different (random) comparison lift.
pub fn yoneda_product<F: Field>(
    fg: &ExtGroup<F>,
    f: &ExtClass<F>,
    gg: &ExtGroup<F>,
    g: &ExtClass<F>,
    out: &ExtGroup<F>,
    perturb: Option<u64>,
) -> Result<ExtClass<F>> {
    let (i, j) = (fg.degree, gg.degree);
    if out.degree != i + j {
        return Err(Error::InvalidInput(format!("product of degrees {i} and {j} cannot land in degree {}", out.degree)));
    }
    if !Arc::ptr_eq(&fg.res, &out.res) && !same_module(fg.res.module(), out.res.module()) {
        return Err(Error::InvalidInput("the output group has a different source".into()));
    }
    if !same_module(&fg.target, gg.res.module()) || !same_module(&gg.target, &out.target) {
        return Err(Error::InvalidInput("Ext classes are not composable".into()));
    }
    let lifts = lift_cocycle(&out.res, i, &f.cocycle, &gg.res, j, perturb)?;
    let cocycle = compose_with_cocycle(&lifts[j], &g.cocycle, &gg.target);
    out.class_of(&cocycle).ok_or_else(|| Error::Internal("product is not a cocycle".into()))
}

pub(crate) fn same_module<F: Field>(a: &FdModule<F>, b: &FdModule<F>) -> bool {
    same_algebra(a.algebra(), b.algebra()) && a.vertices() == b.vertices() && a.actions() == b.actions()
}

/// The dimension-shift image of f in Ext^k(X, X) inside Ext^k(ΩX, ΩX), computed
/// along the tail of the resolution. `tail_group` must be Ext^k(ΩX, ΩX) built on `res.tail()`.
pub fn syzygy_transport<F: Field>(
    group: &ExtGroup<F>,
    f: &ExtClass<F>,
    tail_group: &ExtGroup<F>,
) -> Result<ExtClass<F>> {
    let k = group.degree;
    if k == 0 {
        return Err(Error::InvalidInput("syzygy transport needs a positive degree".into()));
    }
    if tail_group.degree != k {
        return Err(Error::InvalidInput("transport keeps the degree".into()));
    }
    if !crate::algebra::is_selfinjective(&group.res.alg)? {
        return Err(Error::Precondition("syzygy transport needs a self-injective algebra".into()));
    }
    let res = &group.res;
    if !same_module(&group.target, res.module()) {
        return Err(Error::InvalidInput("transport acts on self-extensions".into()));
    }
    let lifts = lift_cocycle(res, k, &f.cocycle, res, 1, None)?;
    let omega = res.syzygy(1).ok_or_else(|| Error::CapExceeded("syzygy not computed".into()))?;
    if !same_module(omega, tail_group.res.module()) || !same_module(omega, &tail_group.target) {
        return Err(Error::InvalidInput("tail group is not Ext(ΩX, ΩX) on the tail resolution".into()));
    }
    // F_1 : P_{k+1} -> P_1, then P_1 -> ΩX
    let alg = &res.alg;
    let f1 = &lifts[1];
    let epi = &res.epis[1];
    let gens: Vec<Vec<F::Elem>> = (0..f1.src().len()).map(|j| epi.mul_vec(&f1.generator_image(alg, j))).collect();
    let cocycle = cochain_from_vectors(f1.src(), omega, &gens);
    tail_group.class_of(&cocycle).ok_or_else(|| Error::Internal("transported class is not a cocycle".into()))
}
