//! Admissible degree sets: subsets of the naturals containing 0 on which truncated
//! Yoneda products stay associative.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSet {
    elements: Vec<u64>,
    cap: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    MissingZero,
    Triple(u64, u64, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub admissible: bool,
    pub witness: Option<Violation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Scale(u64),
    Intersect,
    Power(u32),
}

impl DegreeSet {
    pub fn new<I: IntoIterator<Item = u64>>(elements: I) -> Self {
        let set: BTreeSet<u64> = elements.into_iter().collect();
        DegreeSet { elements: set.into_iter().collect(), cap: None }
    }

    pub fn with_cap(mut self, cap: u64) -> Result<Self> {
        if let Some(&m) = self.elements.last() {
            if m > cap {
                return Err(Error::InvalidInput(format!("element {m} exceeds cap {cap}")));
            }
        }
        self.cap = Some(cap);
        Ok(self)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }
    pub fn cap(&self) -> Option<u64> {
        self.cap
    }
    pub fn contains(&self, d: u64) -> bool {
        self.elements.binary_search(&d).is_ok()
    }
    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Parses "0,3,4"; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            out.push(tok.parse::<u64>().map_err(|_| Error::InvalidInput(format!("not a natural number: {tok:?}")))?);
        }
        Ok(DegreeSet::new(out))
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn is_admissible(s: &DegreeSet) -> AdmissibleReport {
    if !s.contains(0) {
        return AdmissibleReport { admissible: false, witness: Some(Violation::MissingZero) };
    }
    for &i in s.elements() {
        for &j in s.elements() {
            for &k in s.elements() {
                if !s.contains(i + j + k) {
                    continue;
                }
                if s.contains(i + j) != s.contains(j + k) {
                    return AdmissibleReport { admissible: false, witness: Some(Violation::Triple(i, j, k)) };
                }
            }
        }
    }
    AdmissibleReport { admissible: true, witness: None }
}

/// `{x*n : 0 <= x < m+1}` cut off at `cap`; `m = None` means unbounded.
pub fn phi_family(n: u64, m: Option<u64>, cap: u64) -> Result<DegreeSet> {
    if n == 0 {
        return Err(Error::InvalidInput("the step n must be positive".into()));
    }
    let top = match m {
        Some(m) => (m.saturating_mul(n)).min(cap),
        None => cap,
    };
    DegreeSet::new((0..=top / n).map(|x| x * n)).with_cap(cap)
}

pub fn set_op(a: &DegreeSet, b: Option<&DegreeSet>, op: SetOp) -> Result<(DegreeSet, bool)> {
    let out = match op {
        SetOp::Scale(m) => DegreeSet::new(a.elements().iter().map(|x| x * m)),
        SetOp::Intersect => {
            let b = b.ok_or_else(|| Error::InvalidInput("intersection needs two sets".into()))?;
            DegreeSet::new(a.elements().iter().copied().filter(|x| b.contains(*x)))
        }
        SetOp::Power(m) => {
            if m < 1 {
                return Err(Error::InvalidInput("power needs m >= 1".into()));
            }
            let mut v = Vec::new();
            for &x in a.elements() {
                v.push(x.checked_pow(m).ok_or(Error::Overflow("set power"))?);
            }
            DegreeSet::new(v)
        }
    };
    let adm = is_admissible(&out).admissible;
    Ok((out, adm))
}

/// Every subset of {0..=max} that contains 0.
pub fn subsets_with_zero(max: u64) -> Vec<DegreeSet> {
    let rest = max as u32;
    (0u64..(1u64 << rest))
        .map(|mask| DegreeSet::new(std::iter::once(0).chain((1..=max).filter(|d| mask >> (d - 1) & 1 == 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_sets() {
        assert!(is_admissible(&DegreeSet::new([0, 3, 4])).admissible);
        assert!(is_admissible(&DegreeSet::new([0, 1, 2, 3, 4])).admissible);
        assert!(is_admissible(&DegreeSet::new([0])).admissible);
        let sq = set_op(&DegreeSet::new([0, 3, 4, 5, 12, 13]), None, SetOp::Power(2)).unwrap();
        assert_eq!(sq.0.elements(), &[0, 9, 16, 25, 144, 169]);
        assert!(!sq.1);
        let rep = is_admissible(&sq.0);
        assert_eq!(rep.witness, Some(Violation::Triple(9, 16, 144)));
    }

    #[test]
    fn missing_zero() {
        let r = is_admissible(&DegreeSet::new([1, 2]));
        assert_eq!(r.witness, Some(Violation::MissingZero));
    }

    #[test]
    fn families() {
        assert_eq!(phi_family(2, Some(3), 100).unwrap().elements(), &[0, 2, 4, 6]);
        assert_eq!(phi_family(1, Some(0), 100).unwrap().elements(), &[0]);
        assert_eq!(phi_family(1, None, 5).unwrap().elements(), &[0, 1, 2, 3, 4, 5]);
        assert!(phi_family(0, Some(1), 5).is_err());
    }

    #[test]
    fn operations() {
        let (s, a) = set_op(&DegreeSet::new([0, 1, 2]), None, SetOp::Scale(3)).unwrap();
        assert_eq!(s.elements(), &[0, 3, 6]);
        assert!(a);
        let (s, a) = set_op(&DegreeSet::new([0, 3, 4]), Some(&DegreeSet::new([0, 4, 8])), SetOp::Intersect).unwrap();
        assert_eq!(s.elements(), &[0, 4]);
        assert!(a);
        assert!(set_op(&DegreeSet::new([0]), None, SetOp::Power(0)).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let all = subsets_with_zero(8);
        assert_eq!(all.len(), 256);
        assert!(all.iter().all(|s| s.contains(0)));
    }
}
