//! Line-oriented input format.
//!
//! ```text
//! field p=2                 # or: field rational
//! vertex 1
//! vertex 2
//! arrow a: 1 -> 2
//! relation +1*a.b -1*c.d    # paths compose left to right
//! cap path=4
//! module M
//!   dims 1 1
//!   arrow a [[1]]           # maps the vertex-2 space to the vertex-1 space
//! end
//! complex T
//!   term -1 2
//!   term 0 1
//!   entry -1 0 0 a          # degree, source summand, target summand, element
//! end
//! ```

use std::collections::BTreeMap;

use ayoneda::algebra::{PathPresentation, Quiver, Relation};
use ayoneda::linalg::FieldSpec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleBlock {
    pub name: String,
    pub line: usize,
    pub dims: Vec<usize>,
    /// Arrow label with its matrix rows.
    pub arrows: Vec<(String, Vec<Vec<BigRational>>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBlock {
    pub name: String,
    pub line: usize,
    pub terms: BTreeMap<i64, Vec<usize>>,
    /// (degree, source summand, target summand, element).
    pub entries: Vec<(i64, usize, usize, Vec<Term>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFile {
    pub field: Option<FieldSpec>,
    pub presentation: PathPresentation,
    pub cap_given: bool,
    pub modules: Vec<ModuleBlock>,
    pub complexes: Vec<ComplexBlock>,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::Syntax { line, col, msg: msg.into() }
}

/// Column (1-based) of `needle` inside `raw`, or of the first non-blank character.
fn col_of(raw: &str, needle: &str) -> usize {
    raw.find(needle).map(|i| i + 1).unwrap_or_else(|| raw.len() - raw.trim_start().len() + 1)
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// One term of an element: coefficient, arrow path, and the vertex when the term is an idempotent.
pub type Term = (BigRational, Vec<usize>, Option<usize>);

/// Parses `+1*a.b - 2*c + 3/4*e1`-style linear combinations of paths; `e<vertex>` is the
/// idempotent of that vertex.
pub fn parse_expression(quiver: &Quiver, text: &str, line: usize, col0: usize) -> Result<Vec<Term>, CliError> {
    let compact: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(syntax(line, col0, "empty expression"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    while start < compact.len() {
        let mut end = start + 1;
        while end < compact.len() && !(matches!(compact[end].1, '+' | '-') && !matches!(compact[end - 1].1, '+' | '-' | '*' | '/')) {
            end += 1;
        }
        let col = col0 + compact[start].0;
        let term: String = compact[start..end].iter().map(|(_, c)| *c).collect();
        let body = term.trim_start_matches(['+', '-']);
        let neg = term[..term.len() - body.len()].matches('-').count() % 2 == 1;
        let (coeff, path) = match body.split_once('*') {
            Some((c, p)) => (parse_rational(c).ok_or_else(|| syntax(line, col, format!("bad coefficient {c:?}")))?, p),
            None => (BigRational::one(), body),
        };
        if path.is_empty() {
            return Err(syntax(line, col, "missing path"));
        }
        let coeff = if neg { -coeff } else { coeff };
        let (arrows, idem) = parse_path(quiver, path).map_err(|m| syntax(line, col, m))?;
        terms.push((coeff, arrows, idem));
        start = end;
    }
    Ok(terms)
}

/// Arrow indices of `a.b.c`, checking composability, or an idempotent `e<v>`.
fn parse_path(quiver: &Quiver, path: &str) -> Result<(Vec<usize>, Option<usize>), String> {
    let labels: Vec<&str> = path.split('.').collect();
    if labels.len() == 1 && quiver.arrow_index(labels[0]).is_none() {
        if let Some(v) = labels[0].strip_prefix('e').and_then(|v| quiver.vertices.iter().position(|x| x == v)) {
            return Ok((Vec::new(), Some(v)));
        }
    }
    let mut arrows = Vec::with_capacity(labels.len());
    for l in labels {
        arrows.push(quiver.arrow_index(l).ok_or_else(|| format!("unknown arrow {l:?}"))?);
    }
    for w in arrows.windows(2) {
        let (a, b) = (&quiver.arrows[w[0]], &quiver.arrows[w[1]]);
        if a.target != b.source {
            return Err(format!("path {path} is not composable at {}.{}", a.label, b.label));
        }
    }
    Ok((arrows, None))
}

/// `[[1,0],[1/2,3]]`; `[]` is the matrix without rows.
fn parse_matrix(s: &str) -> Option<Vec<Vec<BigRational>>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact.strip_prefix('[')?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    let inner = inner.strip_prefix('[')?.strip_suffix(']')?;
    inner
        .split("],[")
        .map(|row| if row.is_empty() { Some(Vec::new()) } else { row.split(',').map(parse_rational).collect() })
        .collect()
}

fn vertex_of(q: &Quiver, label: &str, line: usize, col: usize) -> Result<usize, CliError> {
    q.vertices.iter().position(|v| v == label).ok_or_else(|| syntax(line, col, format!("unknown vertex {label:?}")))
}

enum Block {
    None,
    Module(ModuleBlock),
    Complex(ComplexBlock),
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile, CliError> {
    let mut field = None;
    let mut quiver = Quiver::new(Vec::new());
    let mut relations: Vec<(usize, usize, String)> = Vec::new();
    let mut cap = None;
    let mut modules = Vec::new();
    let mut complexes = Vec::new();
    let mut block = Block::None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let col = col_of(raw, words[0]);
        match &mut block {
            Block::Module(m) => {
                match words[0] {
                    "end" => {
                        if let Block::Module(m) = std::mem::replace(&mut block, Block::None) {
                            modules.push(m);
                        }
                    }
                    "dims" => {
                        m.dims = words[1..]
                            .iter()
                            .map(|w| w.parse().map_err(|_| syntax(line, col_of(raw, w), format!("bad dimension {w:?}"))))
                            .collect::<Result<_, _>>()?;
                    }
                    "arrow" => {
                        let label = words.get(1).ok_or_else(|| syntax(line, col, "arrow needs a label"))?;
                        if quiver.arrow_index(label).is_none() {
                            return Err(syntax(line, col_of(raw, label), format!("unknown arrow {label:?}")));
                        }
                        let mtext = content[nth_word_offset(content, 2)..].trim();
                        let mat = parse_matrix(mtext).ok_or_else(|| syntax(line, col_of(raw, mtext), "matrix must be a list of rows"))?;
                        m.arrows.push((label.to_string(), mat));
                    }
                    other => return Err(syntax(line, col, format!("unexpected {other:?} inside a module block"))),
                }
                continue;
            }
            Block::Complex(c) => {
                match words[0] {
                    "end" => {
                        if let Block::Complex(c) = std::mem::replace(&mut block, Block::None) {
                            complexes.push(c);
                        }
                    }
                    "term" => {
                        let deg: i64 = words
                            .get(1)
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| syntax(line, col, "term needs an integer degree"))?;
                        let verts = words[2..]
                            .iter()
                            .map(|w| vertex_of(&quiver, w, line, col_of(raw, w)))
                            .collect::<Result<Vec<_>, _>>()?;
                        c.terms.insert(deg, verts);
                    }
                    "entry" => {
                        if words.len() < 5 {
                            return Err(syntax(line, col, "entry needs degree, source, target and an element"));
                        }
                        let nums: Vec<i64> = words[1..4]
                            .iter()
                            .map(|w| w.parse::<i64>().map_err(|_| syntax(line, col_of(raw, w), format!("bad index {w:?}"))))
                            .collect::<Result<_, _>>()?;
                        if nums[1] < 0 || nums[2] < 0 {
                            return Err(syntax(line, col, "summand indices are natural numbers"));
                        }
                        let expr_start = nth_word_offset(content, 4);
                        let terms = parse_expression(&quiver, &content[expr_start..], line, expr_start + 1)?;
                        c.entries.push((nums[0], nums[1] as usize, nums[2] as usize, terms));
                    }
                    other => return Err(syntax(line, col, format!("unexpected {other:?} inside a complex block"))),
                }
                continue;
            }
            Block::None => {}
        }
        match words[0] {
            "field" => {
                field = Some(match words.get(1).copied() {
                    Some("rational") => FieldSpec::Rationals,
                    Some(w) if w.starts_with("p=") => {
                        let p: u32 = w[2..].parse().map_err(|_| syntax(line, col_of(raw, w), "bad characteristic"))?;
                        FieldSpec::prime(p).map_err(|e| syntax(line, col_of(raw, w), e.to_string()))?
                    }
                    _ => return Err(syntax(line, col, "expected `field p=<prime>` or `field rational`")),
                });
            }
            "vertex" => {
                let label = words.get(1).ok_or_else(|| syntax(line, col, "vertex needs a label"))?;
                if quiver.vertices.iter().any(|v| v == label) {
                    return Err(syntax(line, col_of(raw, label), format!("duplicate vertex {label:?}")));
                }
                quiver.vertices.push(label.to_string());
            }
            "arrow" => {
                // arrow <label>: <src> -> <dst>
                let rest = content.trim_start()["arrow".len()..].trim();
                let (label, ends) = rest.split_once(':').ok_or_else(|| syntax(line, col, "expected `arrow <label>: <src> -> <dst>`"))?;
                let label = label.trim();
                let (s, t) = ends.split_once("->").ok_or_else(|| syntax(line, col, "expected `<src> -> <dst>`"))?;
                let (s, t) = (s.trim(), t.trim());
                if label.is_empty() || label.contains('.') || label.contains(char::is_whitespace) {
                    return Err(syntax(line, col_of(raw, label), format!("bad arrow label {label:?}")));
                }
                if quiver.arrow_index(label).is_some() {
                    return Err(syntax(line, col_of(raw, label), format!("duplicate arrow {label:?}")));
                }
                let src = vertex_of(&quiver, s, line, col_of(raw, s))?;
                let dst = vertex_of(&quiver, t, line, col_of(raw, &format!("-> {t}")) + 3)?;
                quiver.add_arrow(label, src, dst);
            }
            "relation" => {
                let start = nth_word_offset(content, 1);
                relations.push((line, start + 1, content[start..].to_string()));
            }
            "cap" => {
                let w = words.get(1).ok_or_else(|| syntax(line, col, "expected `cap path=<n>`"))?;
                let n = w
                    .strip_prefix("path=")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| syntax(line, col_of(raw, w), "expected `cap path=<positive n>`"))?;
                cap = Some(n);
            }
            "module" => {
                let name = words.get(1).ok_or_else(|| syntax(line, col, "module needs a name"))?;
                block = Block::Module(ModuleBlock { name: name.to_string(), line, dims: Vec::new(), arrows: Vec::new() });
            }
            "complex" => {
                let name = words.get(1).ok_or_else(|| syntax(line, col, "complex needs a name"))?;
                block = Block::Complex(ComplexBlock { name: name.to_string(), line, terms: BTreeMap::new(), entries: Vec::new() });
            }
            other => return Err(syntax(line, col, format!("unknown directive {other:?}"))),
        }
    }
    match block {
        Block::Module(m) => return Err(syntax(m.line, 1, format!("module {} is missing `end`", m.name))),
        Block::Complex(c) => return Err(syntax(c.line, 1, format!("complex {} is missing `end`", c.name))),
        Block::None => {}
    }
    if quiver.vertices.is_empty() {
        return Err(syntax(1, 1, "no vertices declared"));
    }
    let mut rels = Vec::new();
    for (line, col, text) in relations {
        let terms = parse_expression(&quiver, &text, line, col)?;
        let mut out = Vec::new();
        let mut ends = None;
        for (c, p, idem) in terms {
            if idem.is_some() || p.is_empty() {
                return Err(syntax(line, col, "relations are combinations of paths of positive length"));
            }
            let e = quiver.path_endpoints(&p).map_err(|e| syntax(line, col, e.to_string()))?;
            if *ends.get_or_insert(e) != e {
                return Err(syntax(line, col, "relation terms must share their endpoints"));
            }
            out.push((c, p));
        }
        rels.push(Relation { terms: out });
    }
    let cap_given = cap.is_some();
    let presentation = PathPresentation { quiver, relations: rels, cap: cap.unwrap_or(DEFAULT_PATH_CAP) };
    Ok(AlgebraFile { field, presentation, cap_given, modules, complexes })
}

/// Path cap used when a file does not declare one.
pub const DEFAULT_PATH_CAP: usize = 12;

/// Byte offset of the n-th whitespace-separated word (0-based).
fn nth_word_offset(s: &str, n: usize) -> usize {
    let mut count = 0;
    let mut in_word = false;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            in_word = false;
        } else if !in_word {
            if count == n {
                return i;
            }
            count += 1;
            in_word = true;
        }
    }
    s.len()
}

/// Renders a presentation in the input grammar; parsing the result gives the same presentation.
pub fn render_presentation(p: &PathPresentation, field: Option<FieldSpec>) -> String {
    let mut out = String::new();
    match field {
        Some(FieldSpec::Prime(q)) => out.push_str(&format!("field p={q}\n")),
        Some(FieldSpec::Rationals) => out.push_str("field rational\n"),
        None => {}
    }
    for v in &p.quiver.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in &p.quiver.arrows {
        out.push_str(&format!("arrow {}: {} -> {}\n", a.label, p.quiver.vertices[a.source], p.quiver.vertices[a.target]));
    }
    for r in &p.relations {
        let terms: Vec<String> = r
            .terms
            .iter()
            .map(|(c, path)| {
                let sign = if c < &BigRational::zero() { "-" } else { "+" };
                let mag = if c < &BigRational::zero() { -c.clone() } else { c.clone() };
                let labels: Vec<&str> = path.iter().map(|&a| p.quiver.arrows[a].label.as_str()).collect();
                format!("{sign}{mag}*{}", labels.join("."))
            })
            .collect();
        out.push_str(&format!("relation {}\n", terms.join(" ")));
    }
    out.push_str(&format!("cap path={}\n", p.cap));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const T3: &str = "field p=2\nvertex 1\narrow t: 1 -> 1\nrelation +1*t.t.t\ncap path=4\n";

    #[test]
    fn truncated_polynomial_file() {
        let f = parse_algebra_file(T3).unwrap();
        assert_eq!(f.field, Some(FieldSpec::Prime(2)));
        assert_eq!(f.presentation.quiver.vertices.len(), 1);
        assert_eq!(f.presentation.quiver.arrows.len(), 1);
        assert_eq!(f.presentation.relations.len(), 1);
        assert_eq!(f.presentation.cap, 4);
    }

    #[test]
    fn undeclared_vertex_is_located() {
        let err = parse_algebra_file("vertex 1\narrow a: 1 -> 7\n").unwrap_err();
        match err {
            CliError::Syntax { line, col, msg } => {
                assert_eq!(line, 2);
                assert_eq!(col, 15);
                assert!(msg.contains("unknown vertex"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn duplicates_and_bad_paths_are_rejected() {
        assert!(parse_algebra_file("vertex 1\nvertex 1\n").is_err());
        assert!(parse_algebra_file("vertex 1\narrow a: 1 -> 1\narrow a: 1 -> 1\n").is_err());
        let e = parse_algebra_file("vertex 1\nvertex 2\narrow a: 1 -> 2\nrelation a.a\n").unwrap_err();
        assert!(e.to_string().contains("not composable"), "{e}");
    }

    #[test]
    fn expressions_with_coefficients() {
        let f = parse_algebra_file("vertex 1\narrow x: 1 -> 1\narrow y: 1 -> 1\nrelation x.y - 3/2*y.x + -1*x.x.x\n").unwrap();
        let r = &f.presentation.relations[0];
        assert_eq!(r.terms.len(), 3);
        assert_eq!(r.terms[1].0, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        assert_eq!(r.terms[2].1, vec![0, 0, 0]);
    }

    #[test]
    fn blocks() {
        let text = format!("{T3}module K\n  dims 1\n  arrow t [[0]]\nend\ncomplex C\n  term -1 1\n  term 0 1\n  entry -1 0 0 t\nend\n");
        let f = parse_algebra_file(&text).unwrap();
        assert_eq!(f.modules[0].dims, vec![1]);
        assert_eq!(f.complexes[0].terms.len(), 2);
        assert_eq!(f.complexes[0].entries[0].3[0].1, vec![0]);
        assert!(parse_algebra_file(&format!("{T3}module K\n dims 1\n")).is_err());
    }

    #[test]
    fn matrices() {
        assert_eq!(parse_matrix("[]"), Some(vec![]));
        let m = parse_matrix("[[1, 0], [1/2, -3]]").unwrap();
        assert_eq!(m[1][0], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(m[1][1], BigRational::from_integer(BigInt::from(-3)));
        assert!(parse_matrix("[[1,x]]").is_none());
        assert!(parse_matrix("1,2").is_none());
    }

    #[test]
    fn rendering_round_trips() {
        let f = parse_algebra_file("field rational\nvertex a\nvertex b\narrow x: a -> b\narrow y: b -> a\nrelation x.y\nrelation -2*y.x.y\ncap path=5\n")
            .unwrap();
        let text = render_presentation(&f.presentation, f.field);
        let g = parse_algebra_file(&text).unwrap();
        assert_eq!(f.presentation, g.presentation);
        assert_eq!(g.field, Some(FieldSpec::Rationals));
    }
}
