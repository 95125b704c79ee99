use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A set of positions in a word, stored 0-based and strictly increasing.
///
/// Text and JSON forms are 1-based, matching the usual way of writing
/// facets such as `{2,3,5}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Facet(pub Vec<usize>);

impl Facet {
    /// Sorts and deduplicates the given 0-based positions.
    pub fn new(mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        Facet(positions)
    }

    pub fn from_one_based(positions: &[usize]) -> Self {
        Facet::new(positions.iter().map(|&p| p.checked_sub(1).expect("positions are 1-based")).collect())
    }

    /// Parses a comma separated list of 1-based positions, with optional
    /// braces.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if s.is_empty() {
            return Ok(Facet::default());
        }
        let mut out = Vec::new();
        for tok in s.split(',') {
            let v: usize =
                tok.trim().parse().map_err(|_| Error::InvalidInput(format!("bad position `{}`", tok.trim())))?;
            if v == 0 {
                return Err(Error::InvalidInput("positions are 1-based".into()));
            }
            out.push(v - 1);
        }
        Ok(Facet::new(out))
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    /// Membership mask over a word of length `m`.
    pub fn mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for &p in &self.0 {
            mask[p] = true;
        }
        mask
    }

    /// `self \ {i} ∪ {j}`.
    pub fn exchange(&self, i: usize, j: usize) -> Facet {
        Facet::new(self.0.iter().copied().filter(|&p| p != i).chain(std::iter::once(j)).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|p| p + 1).collect()
    }

    /// Comma-joined 1-based positions without braces.
    pub fn label(&self) -> String {
        self.to_one_based().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label())
    }
}

impl fmt::Debug for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Facet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = Facet::parse("{2, 3,9}").unwrap();
        assert_eq!(f.positions(), &[1, 2, 8]);
        assert_eq!(f.to_string(), "{2,3,9}");
        assert_eq!(f.exchange(8, 4), Facet::from_one_based(&[2, 3, 5]));
        assert!(Facet::parse("0,1").is_err());
        assert!(Facet::parse("").unwrap().is_empty());
        assert_eq!(serde_json::to_string(&f).unwrap(), "[2,3,9]");
    }
}
