use serde::Serialize;

use super::{AlgRef, FdAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, Field, Matrix, Subspace};
use crate::modcat::{is_projective, nakayama_permutation, syzygy, FdModule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub num_simples: usize,
    pub cartan: Vec<Vec<i64>>,
    pub cartan_snf: Vec<u64>,
    pub dim_algebra: usize,
    pub dim_center: usize,
    pub loewy_length: usize,
}

pub fn invariant_report<F: Field>(alg: &FdAlgebra<F>) -> Result<InvariantReport> {
    let c = alg.cartan_matrix();
    let snf = smith_normal_form(&c)?;
    Ok(InvariantReport {
        num_simples: alg.num_vertices(),
        cartan: c.to_rows(),
        cartan_snf: snf.diag,
        dim_algebra: alg.dim(),
        dim_center: alg.center_dim(),
        loewy_length: alg.loewy_length(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportComparison {
    pub consistent: bool,
    pub same_num_simples: bool,
    pub same_cartan_snf: bool,
    pub same_dim: bool,
    pub same_center_dim: bool,
}

/// Consistent when the number of simples and the Cartan Smith forms agree; the
/// other fields are informational.
pub fn compare_reports(a: &InvariantReport, b: &InvariantReport) -> ReportComparison {
    let same_num_simples = a.num_simples == b.num_simples;
    let same_cartan_snf = a.cartan_snf == b.cartan_snf;
    ReportComparison {
        consistent: same_num_simples && same_cartan_snf,
        same_num_simples,
        same_cartan_snf,
        same_dim: a.dim_algebra == b.dim_algebra,
        same_center_dim: a.dim_center == b.dim_center,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GlobalDimension {
    Finite(usize),
    AtLeast(usize),
}

impl std::fmt::Display for GlobalDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlobalDimension::Finite(n) => write!(f, "{n}"),
            GlobalDimension::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

/// Projective dimension of one module, if at most `cap`.
pub fn projective_dimension<F: Field>(m: &FdModule<F>, cap: usize) -> Result<Option<usize>> {
    let mut cur = m.clone();
    for i in 0..=cap {
        if is_projective(&cur)? {
            return Ok(Some(i));
        }
        cur = syzygy(&cur)?.0;
    }
    Ok(None)
}

/// Maximum projective dimension of the simples; `AtLeast(cap)` once some
/// resolution is still running at length `cap`.
pub fn global_dimension<F: Field>(alg: &AlgRef<F>, cap: usize) -> Result<GlobalDimension> {
    if cap == 0 {
        return Err(Error::InvalidInput("global dimension cap must be positive".into()));
    }
    let mut best = 0;
    for v in 0..alg.num_vertices() {
        match projective_dimension(&FdModule::simple(alg, v), cap)? {
            Some(d) => best = best.max(d),
            None => return Ok(GlobalDimension::AtLeast(cap)),
        }
    }
    Ok(GlobalDimension::Finite(best))
}

pub fn is_selfinjective<F: Field>(alg: &AlgRef<F>) -> Result<bool> {
    Ok(nakayama_permutation(alg)?.iter().all(|w| w.is_some()))
}

/// Radical of the trace form tr(L_x L_y) of the regular representation. Equals the
/// Jacobson radical in characteristic 0 or p > dim A; used as an independent check.
pub fn trace_form_radical<F: Field>(alg: &FdAlgebra<F>) -> Result<Subspace<F>> {
    let f = alg.field();
    let n = alg.dim();
    let p = f.characteristic();
    if p != 0 && p <= n as u64 {
        return Err(Error::Precondition(format!("trace form radical needs characteristic 0 or above {n}")));
    }
    let mut gram = Matrix::zeros(f, n, n);
    for a in 0..n {
        for b in 0..n {
            gram.set(a, b, alg.left_matrix(a).mul(alg.left_matrix(b)).trace());
        }
    }
    Ok(Subspace::span(f, n, &gram.kernel()))
}
