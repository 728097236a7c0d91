use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical covariate index set: nonempty, strictly increasing, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Validates and canonicalizes `indices`. Duplicates are an error rather
    /// than being silently merged.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadSubset("empty index set".into()));
        }
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::BadSubset(format!("duplicate index {}", w[0])));
        }
        Ok(Self(indices))
    }

    /// Like [`Subset::new`] but also checks every index is below `p`.
    pub fn within(indices: Vec<usize>, p: usize) -> Result<Self> {
        let s = Self::new(indices)?;
        s.check_range(p)?;
        Ok(s)
    }

    pub fn singleton(j: usize) -> Self {
        Self(vec![j])
    }

    /// Builds a subset from 1-based indices as written by users.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::BadSubset("1-based index 0".into()));
        }
        Self::new(indices.iter().map(|j| j - 1).collect())
    }

    pub fn check_range(&self, p: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= p => Err(Error::BadSubset(format!(
                "index {last} out of range for {p} covariates"
            ))),
            _ => Ok(()),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn is_superset_of(&self, other: &Subset) -> bool {
        other.0.iter().all(|&j| self.contains(j))
    }

    /// Sorted merge of two canonical sets.
    pub fn union(&self, other: &Subset) -> Subset {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() && k < b.len() {
            match a[i].cmp(&b[k]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[k]);
                    k += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[k..]);
        Subset(out)
    }

    pub fn with(&self, j: usize) -> Subset {
        self.union(&Subset::singleton(j))
    }

    /// Relabels every index through `map` (old index -> new index).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Subset {
        let mut v: Vec<usize> = self.0.iter().map(|&j| map(j)).collect();
        v.sort_unstable();
        Subset(v)
    }

    /// Tie-break order: smaller cardinality first, then lexicographic.
    pub fn tie_order(&self, other: &Subset) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl TryFrom<Vec<usize>> for Subset {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Subset::new(v)
    }
}

impl From<Subset> for Vec<usize> {
    fn from(s: Subset) -> Self {
        s.0
    }
}

/// Renders 1-based, e.g. `{1,2,3}`.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        f.write_str("}")
    }
}
