//! Bitmask sets over a small labelled ground set.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Mask = u64;

pub const MAX_GROUND: usize = 64;

pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn bit(i: usize) -> Mask {
    1 << i
}

pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn full(n: usize) -> Mask {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

/// All submasks of `m`, including `0` and `m`.
pub fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// Sorts by size then value and removes duplicates.
pub fn canonical(mut sets: Vec<Mask>) -> Vec<Mask> {
    sets.sort_by_key(|&m| (m.count_ones(), m));
    sets.dedup();
    sets
}

/// The inclusion-minimal nonempty members, canonically ordered.
pub fn minimal_nonempty(sets: &[Mask]) -> Vec<Mask> {
    let sorted = canonical(sets.iter().copied().filter(|&m| m != 0).collect());
    let mut out: Vec<Mask> = Vec::new();
    for m in sorted {
        if !out.iter().any(|&o| is_subset(o, m)) {
            out.push(m);
        }
    }
    out
}

/// A lexicographically ordered ground set indexing bit positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Ground {
    labels: Vec<String>,
}

impl Ground {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = v.len();
        v.sort();
        v.dedup();
        if v.len() != n {
            return Err(Error::input("ground set lists a label twice"));
        }
        if v.len() > MAX_GROUND {
            return Err(Error::Resource {
                what: "ground set",
                size: v.len(),
                cap: MAX_GROUND,
            });
        }
        Ok(Ground { labels: v })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn all(&self) -> Mask {
        full(self.len())
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn mask<I, S>(&self, labels: I) -> Result<Mask>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        labels.into_iter().try_fold(0, |acc, l| {
            let l = l.as_ref();
            self.index(l)
                .map(|i| acc | bit(i))
                .ok_or_else(|| Error::input(format!("unknown element {l}")))
        })
    }

    pub fn set(&self, m: Mask) -> BTreeSet<String> {
        bits(m).map(|i| self.labels[i].clone()).collect()
    }

    pub fn list(&self, m: Mask) -> Vec<String> {
        bits(m).map(|i| self.labels[i].clone()).collect()
    }

    pub fn show(&self, m: Mask) -> ShowSet<'_> {
        ShowSet { ground: self, m }
    }
}

pub struct ShowSet<'a> {
    ground: &'a Ground,
    m: Mask,
}

impl fmt::Display for ShowSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.ground.list(self.m).join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submask_count() {
        assert_eq!(submasks(0b1011).count(), 8);
        assert_eq!(submasks(0).count(), 1);
    }

    #[test]
    fn minimal_drops_supersets_and_empty() {
        assert_eq!(minimal_nonempty(&[0b11, 0b1, 0, 0b110]), vec![0b1, 0b110]);
    }

    #[test]
    fn ground_masks() {
        let g = Ground::new(["b", "a", "c"]).unwrap();
        assert_eq!(g.mask(["a", "c"]).unwrap(), 0b101);
        assert_eq!(g.show(0b110).to_string(), "{b,c}");
        assert!(g.mask(["z"]).is_err());
        assert!(Ground::new(["a", "a"]).is_err());
    }
}
