use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a root in [`super::CoxeterSystem::roots`]. Positive roots come
/// first; the negative of root `b < N` is `b + N`.
pub type RootId = usize;

/// A group element, stored as the permutation it induces on the root system.
///
/// Composition, inversion and root images are integer operations; the linear
/// action on arbitrary vectors is recovered from the images of the simple
/// roots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Arc<[u16]>);

impl GroupElement {
    pub(crate) fn from_perm(perm: Vec<u16>) -> Self {
        GroupElement(perm.into())
    }

    pub(crate) fn identity(num_roots: usize) -> Self {
        GroupElement((0..num_roots as u16).collect::<Vec<_>>().into())
    }

    pub fn perm(&self) -> &[u16] {
        &self.0
    }

    /// Image of a root under this element.
    #[inline]
    pub fn image(&self, root: RootId) -> RootId {
        self.0[root] as RootId
    }

    /// `self * other`, acting first by `other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement(other.0.iter().map(|&b| self.0[b as usize]).collect::<Vec<_>>().into())
    }

    pub fn inverse(&self) -> GroupElement {
        let mut inv = vec![0u16; self.0.len()];
        for (b, &img) in self.0.iter().enumerate() {
            inv[img as usize] = b as u16;
        }
        GroupElement(inv.into())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &b)| i == b as usize)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({:?})", &self.0[..])
    }
}

/// A word in the simple generators, stored 0-based.
///
/// Text and JSON forms use 1-based letters, so `Word::parse("2,3,1")` holds
/// the letters `[1, 2, 0]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based letters.
    pub fn from_one_based(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l.checked_sub(1).expect("letters are 1-based")).collect())
    }

    /// Parses a comma separated list of 1-based letters. Whitespace is ignored
    /// and the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for tok in s.split(',') {
            let v: usize = tok
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad letter `{}` in word `{s}`", tok.trim())))?;
            if v == 0 {
                return Err(Error::InvalidInput(format!("letters are 1-based, got 0 in `{s}`")));
            }
            out.push(v - 1);
        }
        Ok(Word(out))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| (l + 1).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}
