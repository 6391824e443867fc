//! Sort permutations of dimension-1 cycles.
//!
//! A permutation maps a time index to a sorted rank: `x_t = x^(sigma(t))`, so
//! `images[t]` is the rank of the `t`-th iterate of the cycle. Rotating the
//! time origin gives the same cycle, hence the canonical form `sigma(0) = 0`
//! (the cycle starts at its smallest point). Reflecting `x -> -x` maps a
//! feasible permutation to `K - 1 - sigma`, so each reflection pair needs only
//! one representative.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `K` accepted by [`reduced_permutations`]; `(K-1)!` grows too fast beyond.
pub const MAX_ENUMERATION_K: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &r in &images {
            if r >= k || std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation of 0..{k}")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Rank of the iterate at time `t`.
    pub fn rank(&self, t: usize) -> usize {
        self.images[t]
    }

    /// `time_of_rank()[r]` is the time index whose iterate has rank `r`.
    pub fn time_of_rank(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (t, &r) in self.images.iter().enumerate() {
            inv[r] = t;
        }
        inv
    }

    pub fn is_canonical(&self) -> bool {
        self.images.first() == Some(&0)
    }

    /// Rotation of the time origin that puts rank 0 first.
    pub fn canonical(&self) -> Self {
        let k = self.len();
        let start = self.images.iter().position(|&r| r == 0).unwrap_or(0);
        Permutation {
            images: (0..k).map(|t| self.images[(t + start) % k]).collect(),
        }
    }

    /// Image of the cycle under `x -> -x`, in canonical form.
    pub fn reflect(&self) -> Self {
        let k = self.len();
        Permutation {
            images: self.images.iter().map(|&r| k - 1 - r).collect(),
        }
        .canonical()
    }
}

/// The zigzag ordering `0, 1, 3, 5, ..., (top), ..., 6, 4, 2`: odd ranks
/// climb, then even ranks descend back to the start.
pub fn conjectured_permutation(k: usize) -> Result<Permutation> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("cycle length must be at least 3, got {k}")));
    }
    let up = k / 2; // ceil((k - 1) / 2)
    let images = (0..k)
        .map(|t| match t {
            0 => 0,
            t if t <= up => 2 * t - 1,
            t => 2 * (k - t),
        })
        .collect();
    Permutation::new(images)
}

/// Every canonical permutation of length `k`, in lexicographic order.
pub fn canonical_permutations(k: usize) -> Vec<Permutation> {
    let mut tail: Vec<usize> = (1..k).collect();
    let mut out = Vec::new();
    loop {
        let mut images = Vec::with_capacity(k);
        images.push(0);
        images.extend_from_slice(&tail);
        out.push(Permutation { images });
        if !next_permutation(&mut tail) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// One canonical representative per reflection pair. Reflection-invariant
/// permutations (only possible for even `k`) appear once. The zigzag
/// permutation represents its own pair; other pairs use the
/// lexicographically smaller member.
pub fn reduced_permutations(k: usize) -> Result<Vec<Permutation>> {
    if !(3..=MAX_ENUMERATION_K).contains(&k) {
        return Err(Error::InvalidInput(format!(
            "full enumeration needs 3 <= K <= {MAX_ENUMERATION_K}, got {k}"
        )));
    }
    let zigzag = conjectured_permutation(k)?;
    let zigzag_partner = zigzag.reflect();
    Ok(canonical_permutations(k)
        .into_iter()
        .filter(|p| {
            if *p == zigzag {
                true
            } else if *p == zigzag_partner {
                false
            } else {
                *p <= p.reflect()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    /// Orbits of all k! permutations under time rotation and reflection,
    /// counted by brute force without canonical forms.
    fn orbit_count(k: usize) -> usize {
        let mut all: Vec<usize> = (0..k).collect();
        let mut seen = HashSet::new();
        let mut orbits = 0;
        loop {
            if !seen.contains(&all) {
                orbits += 1;
                for s in 0..k {
                    let rot: Vec<usize> = (0..k).map(|t| all[(t + s) % k]).collect();
                    let refl: Vec<usize> = rot.iter().map(|r| k - 1 - r).collect();
                    seen.insert(rot);
                    seen.insert(refl);
                }
            }
            if !next_permutation(&mut all) {
                break;
            }
        }
        orbits
    }

    #[test]
    fn zigzag_examples() {
        assert_eq!(conjectured_permutation(3).unwrap(), perm(&[0, 1, 2]));
        assert_eq!(conjectured_permutation(4).unwrap(), perm(&[0, 1, 3, 2]));
        assert_eq!(conjectured_permutation(5).unwrap(), perm(&[0, 1, 3, 4, 2]));
        assert_eq!(conjectured_permutation(6).unwrap(), perm(&[0, 1, 3, 5, 4, 2]));
        assert_eq!(conjectured_permutation(7).unwrap(), perm(&[0, 1, 3, 5, 6, 4, 2]));
        assert!(conjectured_permutation(2).is_err());
        for k in 3..30 {
            assert!(conjectured_permutation(k).unwrap().is_canonical());
        }
    }

    #[test]
    fn reduced_counts_match_orbit_oracle() {
        for k in 3..=8 {
            let reduced = reduced_permutations(k).unwrap();
            assert_eq!(reduced.len(), orbit_count(k), "k = {k}");
            assert!(reduced.iter().all(Permutation::is_canonical));
        }
        assert_eq!(reduced_permutations(4).unwrap().len(), 4);
        assert_eq!(reduced_permutations(5).unwrap().len(), 12);
    }

    #[test]
    fn reduced_list_covers_every_canonical_permutation() {
        for k in 3..=7 {
            let reduced: HashSet<_> = reduced_permutations(k).unwrap().into_iter().collect();
            for p in canonical_permutations(k) {
                assert!(reduced.contains(&p) || reduced.contains(&p.reflect()), "{p}");
            }
            assert!(reduced.contains(&conjectured_permutation(k).unwrap()));
        }
    }

    #[test]
    fn k4_representatives() {
        // (0,1,3,2) and (0,2,3,1) are their own reflections
        assert_eq!(perm(&[0, 1, 3, 2]).reflect(), perm(&[0, 1, 3, 2]));
        assert_eq!(perm(&[0, 2, 3, 1]).reflect(), perm(&[0, 2, 3, 1]));
        assert_eq!(perm(&[0, 1, 2, 3]).reflect(), perm(&[0, 3, 2, 1]));
        let r = reduced_permutations(4).unwrap();
        let want = [perm(&[0, 1, 3, 2]), perm(&[0, 1, 2, 3]), perm(&[0, 2, 1, 3]), perm(&[0, 2, 3, 1])];
        for w in &want {
            assert!(r.contains(w), "{w}");
        }
    }

    #[test]
    fn enumeration_bounds() {
        assert!(reduced_permutations(2).is_err());
        assert!(reduced_permutations(10).is_err());
        assert_eq!(canonical_permutations(5).len(), 24);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let p: std::result::Result<Permutation, _> = serde_json::from_str("[0,2,1]");
        assert_eq!(p.unwrap(), perm(&[0, 2, 1]));
        assert!(serde_json::from_str::<Permutation>("[1,1,0]").is_err());
    }

    #[test]
    fn inverse_and_canonical() {
        let p = perm(&[2, 0, 3, 1]);
        assert_eq!(p.canonical(), perm(&[0, 3, 1, 2]));
        assert_eq!(p.time_of_rank(), vec![1, 3, 0, 2]);
    }
}
