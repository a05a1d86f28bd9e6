//! Turns parsed input into algebra objects: module and complex specs given on the
//! command line are resolved against the algebra file.
//!
//! Module specs: `regular`, `simple:v`, `projective:v`, `injective:v`, `quot:k` (A/J^k),
//! `omega:<spec>`, the name of a `module` block, and sums `spec+spec`.
//! Complex specs: the name of a `complex` block, `stalk:v,w@deg`, `idem:v,w`.

use std::collections::BTreeMap;
use std::sync::Arc;

use ayoneda::algebra::{from_presentation, AlgRef};
use ayoneda::homotopy::{ProjComplex, ProjMap};
use ayoneda::linalg::{Field, Matrix};
use ayoneda::modcat::{injective, syzygy, FdModule};
use ayoneda::quotients::idempotent_tilting;
use num_rational::BigRational;

use crate::error::CliError;
use crate::text::{AlgebraFile, ComplexBlock, ModuleBlock, Term};

pub struct Context<F: Field> {
    pub field: F,
    pub file: AlgebraFile,
    pub alg: AlgRef<F>,
    pub seed: u64,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn scalar<F: Field>(f: &F, c: &BigRational) -> Result<F::Elem, CliError> {
    f.from_ratio(c.numer(), c.denom())
        .ok_or_else(|| usage(format!("coefficient {c} has a denominator that vanishes in the field")))
}

impl<F: Field> Context<F> {
    pub fn new(field: F, file: AlgebraFile, seed: u64) -> Result<Self, CliError> {
        let alg = Arc::new(from_presentation(&field, &file.presentation)?);
        Ok(Context { field, file, alg, seed })
    }

    pub fn vertex(&self, label: &str) -> Result<usize, CliError> {
        self.alg.vertex_index(label.trim()).ok_or_else(|| usage(format!("unknown vertex {:?}", label.trim())))
    }

    /// A comma-separated list of vertex labels.
    pub fn vertices(&self, list: &str) -> Result<Vec<usize>, CliError> {
        list.split(',').filter(|s| !s.trim().is_empty()).map(|s| self.vertex(s)).collect()
    }

    fn only_vertex(&self, what: &str) -> Result<usize, CliError> {
        if self.alg.num_vertices() == 1 {
            Ok(0)
        } else {
            Err(usage(format!("{what} needs a vertex, as in {what}:1")))
        }
    }

    pub fn module(&self, spec: &str) -> Result<FdModule<F>, CliError> {
        let parts = split_top(spec, '+');
        if parts.len() > 1 {
            let mods = parts.iter().map(|p| self.module(p)).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&FdModule<F>> = mods.iter().collect();
            return Ok(FdModule::direct_sum(&refs)?);
        }
        let spec = spec.trim();
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let vertex = |what: &str| match arg {
            Some(a) => self.vertex(a),
            None => self.only_vertex(what),
        };
        match head {
            "regular" => Ok(FdModule::regular(&self.alg)),
            "simple" => Ok(FdModule::simple(&self.alg, vertex("simple")?)),
            "projective" => Ok(FdModule::projective(&self.alg, vertex("projective")?)),
            "injective" => Ok(injective(&self.alg, vertex("injective")?)?),
            "quot" => {
                let k: usize = arg
                    .and_then(|a| a.trim().parse().ok())
                    .filter(|&k| k > 0)
                    .ok_or_else(|| usage("quot needs a positive radical power, as in quot:2"))?;
                Ok(FdModule::regular(&self.alg).quotient(&self.alg.radical_power(k))?.0)
            }
            "omega" => {
                let inner = arg.ok_or_else(|| usage("omega needs a module, as in omega:simple:1"))?;
                Ok(syzygy(&self.module(inner)?)?.0)
            }
            name => match self.file.modules.iter().find(|m| m.name == name) {
                Some(block) => self.module_block(block),
                None => Err(usage(format!("unknown module {name:?}"))),
            },
        }
    }

    fn module_block(&self, block: &ModuleBlock) -> Result<FdModule<F>, CliError> {
        let q = &self.file.presentation.quiver;
        let dims = &block.dims;
        if dims.len() != q.vertices.len() {
            return Err(CliError::Syntax {
                line: block.line,
                col: 1,
                msg: format!("module {} lists {} dimensions for {} vertices", block.name, dims.len(), q.vertices.len()),
            });
        }
        let mut mats = Vec::with_capacity(q.arrows.len());
        for a in &q.arrows {
            let (r, c) = (dims[a.source], dims[a.target]);
            let m = match block.arrows.iter().find(|(l, _)| *l == a.label) {
                None => Matrix::zeros(&self.field, r, c),
                Some((_, rows)) => {
                    let shape_ok = rows.len() == r && rows.iter().all(|row| row.len() == c);
                    if !shape_ok && !(r * c == 0 && rows.iter().all(|row| row.is_empty())) {
                        return Err(CliError::Syntax {
                            line: block.line,
                            col: 1,
                            msg: format!("module {}: arrow {} needs a {r}x{c} matrix", block.name, a.label),
                        });
                    }
                    let mut m = Matrix::zeros(&self.field, r, c);
                    for (i, row) in rows.iter().enumerate().take(r) {
                        for (j, x) in row.iter().enumerate() {
                            m.set(i, j, scalar(&self.field, x)?);
                        }
                    }
                    m
                }
            };
            mats.push(m);
        }
        Ok(FdModule::from_arrow_actions(&self.alg, dims, &mats)?)
    }

    /// Evaluates a parsed expression in the algebra.
    pub fn element(&self, terms: &[Term]) -> Result<Vec<F::Elem>, CliError> {
        let f = &self.field;
        let gens = self.alg.generators();
        let mut out = self.alg.zero();
        for (c, path, idem) in terms {
            let x = match idem {
                Some(v) => self.alg.basis_vector(self.alg.idempotent(*v)),
                None => {
                    let factors: Vec<Vec<F::Elem>> = path.iter().map(|&a| self.alg.basis_vector(gens[a])).collect();
                    self.alg.evaluate_path(&factors)
                }
            };
            let s = scalar(f, c)?;
            for (o, xi) in out.iter_mut().zip(&x) {
                *o = f.mul_add(o, &s, xi);
            }
        }
        Ok(out)
    }

    pub fn complex(&self, spec: &str) -> Result<ProjComplex<F>, CliError> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("stalk:") {
            let (verts, deg) = match rest.split_once('@') {
                Some((v, d)) => (v, d.trim().parse::<i64>().map_err(|_| usage(format!("bad degree {d:?}")))?),
                None => (rest, 0),
            };
            return Ok(ProjComplex::stalk(&self.alg, &self.vertices(verts)?, deg));
        }
        if let Some(rest) = spec.strip_prefix("idem:") {
            return Ok(idempotent_tilting(&self.alg, &self.vertices(rest)?, self.seed)?);
        }
        match self.file.complexes.iter().find(|c| c.name == spec) {
            Some(block) => self.complex_block(block),
            None => Err(usage(format!("unknown complex {spec:?}"))),
        }
    }

    fn complex_block(&self, block: &ComplexBlock) -> Result<ProjComplex<F>, CliError> {
        let bad = |msg: String| CliError::Syntax { line: block.line, col: 1, msg };
        let mut diffs = BTreeMap::new();
        for (&deg, src) in &block.terms {
            let tgt = block.terms.get(&(deg + 1)).cloned().unwrap_or_default();
            let mut entries = vec![self.alg.zero(); src.len() * tgt.len()];
            let mut any = false;
            for (d, j, i, expr) in &block.entries {
                if *d != deg {
                    continue;
                }
                if *j >= src.len() || *i >= tgt.len() {
                    return Err(bad(format!("complex {}: entry {d} {j} {i} is outside the terms", block.name)));
                }
                entries[j * tgt.len() + i] = self.element(expr)?;
                any = true;
            }
            if any {
                diffs.insert(deg, ProjMap::from_entries(&self.alg, src, &tgt, entries)?);
            }
        }
        for (d, ..) in &block.entries {
            if !block.terms.contains_key(d) {
                return Err(bad(format!("complex {}: entry in degree {d} has no term", block.name)));
            }
        }
        Ok(ProjComplex::new(&self.alg, block.terms.clone(), diffs)?)
    }
}

/// Splits at `sep` outside brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
