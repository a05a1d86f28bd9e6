use super::{same_algebra, FdModule};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

/// Basis of all matrices phi (target x source) that preserve labels
/// (phi[i][k] = 0 unless the labels of i and k agree) and satisfy
/// `phi * s = t * phi` for every pair `(s, t)`.
pub fn intertwiners<F: Field>(
    field: &F,
    src_labels: &[usize],
    tgt_labels: &[usize],
    pairs: &[(&Matrix<F>, &Matrix<F>)],
) -> Vec<Matrix<F>> {
    let ns = src_labels.len();
    let nt = tgt_labels.len();
    let mut var = vec![vec![usize::MAX; ns]; nt];
    let mut vars = Vec::new();
    for i in 0..nt {
        for k in 0..ns {
            if tgt_labels[i] == src_labels[k] {
                var[i][k] = vars.len();
                vars.push((i, k));
            }
        }
    }
    let nv = vars.len();
    if nv == 0 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (s, t) in pairs {
        for i in 0..nt {
            for j in 0..ns {
                // (phi s)[i][j] - (t phi)[i][j]
                let mut row = vec![field.zero(); nv];
                let mut nonzero = false;
                for k in 0..ns {
                    let x = var[i][k];
                    if x != usize::MAX && !field.is_zero(s.get(k, j)) {
                        row[x] = field.add(&row[x], s.get(k, j));
                        nonzero = true;
                    }
                }
                for l in 0..nt {
                    let x = var[l][j];
                    if x != usize::MAX && !field.is_zero(t.get(i, l)) {
                        row[x] = field.sub(&row[x], t.get(i, l));
                        nonzero = true;
                    }
                }
                if nonzero && row.iter().any(|c| !field.is_zero(c)) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..nv).map(|x| crate::linalg::matrix::unit_vec(field, nv, x)).collect()
    } else {
        Matrix::from_rows(field, nv, &rows).kernel()
    };
    kernel
        .into_iter()
        .map(|k| {
            let mut m = Matrix::zeros(field, nt, ns);
            for (x, &(i, j)) in vars.iter().enumerate() {
                m.set(i, j, k[x].clone());
            }
            m
        })
        .collect()
}

/// Basis of Hom_A(M, N); each map is a dim N x dim M matrix.
pub fn hom_space<F: Field>(m: &FdModule<F>, n: &FdModule<F>) -> Result<Vec<Matrix<F>>> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let a = m.algebra();
    let pairs: Vec<(&Matrix<F>, &Matrix<F>)> = a.generators().iter().map(|&g| (m.action(g), n.action(g))).collect();
    Ok(intertwiners(a.field(), m.vertices(), n.vertices(), &pairs))
}

pub fn is_module_hom<F: Field>(m: &FdModule<F>, n: &FdModule<F>, phi: &Matrix<F>) -> bool {
    if phi.rows() != n.dim() || phi.cols() != m.dim() {
        return false;
    }
    (0..m.algebra().dim()).all(|b| phi.mul(m.action(b)) == n.action(b).mul(phi))
}
