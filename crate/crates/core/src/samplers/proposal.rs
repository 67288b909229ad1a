use rand::Rng;

use crate::error::{Error, Result};

/// Distinct proposal indices `j_1..j_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProposalSet {
    indices: Vec<usize>,
}

impl ProposalSet {
    /// Validates distinctness and range `[0, n)`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidProposal("empty proposal set".into()));
        }
        if indices.len() >= n {
            return Err(Error::InvalidProposal(format!(
                "{} proposals among {n} states (at most n-1 allowed)",
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange(format!("proposal {} of {n}", bad + 1)));
        }
        for (a, &i) in indices.iter().enumerate() {
            if indices[..a].contains(&i) {
                return Err(Error::InvalidProposal(format!("duplicate proposal {}", i + 1)));
            }
        }
        Ok(Self { indices })
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    /// Rejects sets containing the relabeled current state `n - 1`.
    pub(crate) fn check_excludes_last(&self, n: usize) -> Result<()> {
        if self.contains(n - 1) || self.indices.iter().any(|&i| i >= n) {
            return Err(Error::InvalidProposal(format!(
                "proposals must lie in [1, {}]",
                n - 1
            )));
        }
        Ok(())
    }
}

/// Uniform size-`d` subset of `[0, n) \ {current}`, returned sorted.
///
/// Runs a partial Fisher-Yates shuffle over the `n - 1` candidate states
/// without materializing them. Consumes exactly `d` calls to
/// `Rng::random_range`, one per drawn element.
pub fn propose_uniform<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    current: usize,
    d: usize,
) -> Result<ProposalSet> {
    if current >= n {
        return Err(Error::IndexOutOfRange(format!(
            "current state {} of {n}",
            current + 1
        )));
    }
    if d == 0 || d >= n {
        return Err(Error::InvalidProposal(format!(
            "d={d} must lie in [1, {}]",
            n.saturating_sub(1)
        )));
    }
    let m = n - 1;
    // Swapped positions of the virtual array `pos -> pos (+1 if >= current)`.
    let mut swapped: Vec<(usize, usize)> = Vec::with_capacity(d);
    let value_at = |swapped: &[(usize, usize)], pos: usize| -> usize {
        swapped
            .iter()
            .rev()
            .find(|(p, _)| *p == pos)
            .map(|(_, v)| *v)
            .unwrap_or(if pos >= current { pos + 1 } else { pos })
    };
    let mut out = Vec::with_capacity(d);
    for u in 0..d {
        let k = rng.random_range(u..m);
        let picked = value_at(&swapped, k);
        let displaced = value_at(&swapped, u);
        swapped.push((k, displaced));
        swapped.push((u, picked));
        out.push(picked);
    }
    out.sort_unstable();
    Ok(ProposalSet::from_sorted_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(ProposalSet::new(vec![1, 1], 4).is_err());
        assert!(ProposalSet::new(vec![4], 4).is_err());
        assert!(ProposalSet::new(vec![], 4).is_err());
        assert!(ProposalSet::new(vec![0, 1, 2, 3], 4).is_err());
        assert!(ProposalSet::new(vec![2, 0], 4).is_ok());
    }

    #[test]
    fn forced_proposals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(propose_uniform(&mut rng, 2, 0, 1).unwrap().indices(), &[1]);
            assert_eq!(
                propose_uniform(&mut rng, 5, 4, 4).unwrap().indices(),
                &[0, 1, 2, 3]
            );
        }
    }

    #[test]
    fn proposals_are_distinct_and_exclude_current() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let n = rng.random_range(2..40);
            let c = rng.random_range(0..n);
            let d = rng.random_range(1..n);
            let j = propose_uniform(&mut rng, n, c, d).unwrap();
            assert_eq!(j.len(), d);
            assert!(!j.contains(c));
            assert!(j.indices().windows(2).all(|w| w[0] < w[1]));
            assert!(j.indices().iter().all(|&i| i < n));
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(propose_uniform(&mut rng, 5, 0, 0).is_err());
        assert!(propose_uniform(&mut rng, 5, 0, 5).is_err());
        assert!(propose_uniform(&mut rng, 5, 5, 1).is_err());
    }
}
