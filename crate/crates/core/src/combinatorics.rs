//! Streaming enumeration of set partitions and fixed-size subsets.
//!
//! Partitions are generated as restricted growth strings: element `i` is
//! assigned block label `a[i]`, with `a[0] = 0` and each label at most one
//! more than every label before it. Labels therefore number blocks in order
//! of their smallest element, which is exactly the canonical block order of
//! [`SetPartition`]. Only the current string is held in memory.

use std::fmt;

use crate::error::{Error, Result};
use crate::Limits;

/// Largest ground set for which subsets and counting functions are offered.
pub const MAX_SUBSET_N: usize = 30;

/// A partition of `{1..n}` into nonempty blocks.
///
/// Blocks are sorted by their smallest element and each block is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds the partition described by a restricted growth string.
    pub fn from_labels(labels: &[usize]) -> Self {
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        SetPartition { blocks }
    }

    /// Canonicalizes arbitrary blocks, checking they partition `{1..n}`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut blocks: Vec<Vec<usize>> = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgs("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i == 0 || i > n || seen[i] {
                    return Err(Error::InvalidArgs(format!("bad or repeated element {i}")));
                }
                seen[i] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::InvalidArgs("blocks do not cover 1..n".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            let items: Vec<String> = block.iter().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        f.write_str("}")
    }
}

/// Partitions of `{1..n}` into exactly `k` blocks, in lexicographic order of
/// their restricted growth strings.
///
/// [`advance`](Self::advance) exposes the label string without allocating;
/// the `Iterator` impl yields owned [`SetPartition`]s.
#[derive(Debug, Clone)]
pub struct PartitionsIntoK {
    labels: Vec<usize>,
    k: usize,
    state: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

impl PartitionsIntoK {
    fn new(n: usize, k: usize) -> Self {
        // smallest string reaching label k-1: zeros, then 1, 2, .., k-1
        let first = n - k;
        let labels = (0..n).map(|i| i.saturating_sub(first)).collect();
        PartitionsIntoK {
            labels,
            k,
            state: State::Fresh,
        }
    }

    /// Steps to the next partition and returns its block labels.
    pub fn advance(&mut self) -> Option<&[usize]> {
        match self.state {
            State::Done => return None,
            State::Fresh => {
                self.state = State::Running;
                return Some(&self.labels);
            }
            State::Running => {}
        }
        let n = self.labels.len();
        let top = self.k - 1;
        // prefix maxima of labels[..i]
        let mut prefix_max = vec![0usize; n];
        let mut m = 0;
        for (slot, &label) in prefix_max.iter_mut().zip(&self.labels) {
            *slot = m;
            m = m.max(label);
        }
        for i in (1..n).rev() {
            let next = self.labels[i] + 1;
            if next > top || next > prefix_max[i] + 1 {
                continue;
            }
            let mut cur = prefix_max[i].max(next);
            if cur + (n - 1 - i) < top {
                continue;
            }
            self.labels[i] = next;
            for j in i + 1..n {
                if top - cur == n - j {
                    cur += 1;
                    self.labels[j] = cur;
                } else {
                    self.labels[j] = 0;
                }
            }
            return Some(&self.labels);
        }
        self.state = State::Done;
        None
    }
}

impl Iterator for PartitionsIntoK {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        self.advance().map(SetPartition::from_labels)
    }
}

pub fn partitions_into_k_blocks(n: usize, k: usize) -> Result<PartitionsIntoK> {
    partitions_into_k_blocks_with(n, k, &Limits::default())
}

pub fn partitions_into_k_blocks_with(
    n: usize,
    k: usize,
    limits: &Limits,
) -> Result<PartitionsIntoK> {
    if n > limits.partition_cap {
        return Err(Error::UnsupportedSize {
            n,
            cap: limits.partition_cap,
        });
    }
    if k < 1 || k > n {
        return Err(Error::InvalidArgs(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok(PartitionsIntoK::new(n, k))
}

/// All partitions with at least `kmin` blocks, by increasing block count.
pub fn partitions_with_at_least(
    n: usize,
    kmin: usize,
) -> Result<impl Iterator<Item = SetPartition>> {
    partitions_with_at_least_with(n, kmin, &Limits::default())
}

pub fn partitions_with_at_least_with(
    n: usize,
    kmin: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = SetPartition>> {
    if kmin < 1 || kmin > n {
        return Err(Error::InvalidArgs(format!(
            "need 1 <= kmin <= n, got n={n}, kmin={kmin}"
        )));
    }
    let streams = (kmin..=n)
        .map(|k| partitions_into_k_blocks_with(n, k, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(streams.into_iter().flatten())
}

/// A sorted set of distinct 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.first() == Some(&0) || indices.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidArgs(format!(
                "{indices:?} is not a set of 1-based indices"
            )));
        }
        Ok(IndexSubset(indices))
    }

    pub fn empty() -> Self {
        IndexSubset(Vec::new())
    }

    /// Subset encoded by a bitmask, bit `i` standing for index `i + 1`.
    pub fn from_mask(mask: u64) -> Self {
        IndexSubset(
            (0..64)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| b + 1)
                .collect(),
        )
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> IndexSubset {
        IndexSubset((1..=n).filter(|i| !self.contains(*i)).collect())
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// `k`-subsets of `{1..n}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct SubsetsOfSize {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Iterator for SubsetsOfSize {
    type Item = IndexSubset;

    fn next(&mut self) -> Option<IndexSubset> {
        if self.done {
            return None;
        }
        let out = IndexSubset(self.current.clone());
        let k = self.current.len();
        // bump the rightmost index that still has room
        match (0..k)
            .rev()
            .find(|&i| self.current[i] < self.n - (k - 1 - i))
        {
            Some(i) => {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

pub fn subsets_of_size(n: usize, k: usize) -> Result<SubsetsOfSize> {
    if n > MAX_SUBSET_N || k > n {
        return Err(Error::InvalidArgs(format!(
            "need 0 <= k <= n <= {MAX_SUBSET_N}, got n={n}, k={k}"
        )));
    }
    Ok(SubsetsOfSize {
        n,
        current: (1..=k).collect(),
        done: false,
    })
}

fn check_counting_args(n: usize, k: usize) -> Result<()> {
    if n > MAX_SUBSET_N || k > n {
        return Err(Error::InvalidArgs(format!(
            "need 0 <= k <= n <= {MAX_SUBSET_N}, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Stirling numbers of the second kind, `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
pub fn stirling2(n: usize, k: usize) -> Result<u128> {
    check_counting_args(n, k)?;
    let mut row = vec![0u128; n + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=m).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    Ok(row[k])
}

pub fn bell(n: usize) -> Result<u128> {
    check_counting_args(n, 0)?;
    (0..=n).map(|k| stirling2(n, k)).sum()
}

pub fn binomial(n: usize, k: usize) -> Result<u128> {
    check_counting_args(n, k)?;
    let k = k.min(n - k);
    Ok((0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn all_singletons() {
        let parts: Vec<_> = partitions_into_k_blocks(3, 3).unwrap().collect();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].blocks(), &[vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn five_into_three_and_four() {
        assert_eq!(partitions_into_k_blocks(5, 3).unwrap().count(), 25);
        let four: Vec<_> = partitions_into_k_blocks(5, 4).unwrap().collect();
        assert_eq!(four.len(), 10);
        for p in &four {
            let mut sizes: Vec<_> = p.blocks().iter().map(Vec::len).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![1, 1, 1, 2]);
        }
    }

    #[test]
    fn one_block_and_n_equal_one() {
        let parts: Vec<_> = partitions_into_k_blocks(4, 1).unwrap().collect();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].blocks(), &[vec![1, 2, 3, 4]]);
        assert_eq!(partitions_into_k_blocks(1, 1).unwrap().count(), 1);
    }

    #[test]
    fn at_least() {
        let parts: Vec<_> = partitions_with_at_least(4, 3).unwrap().collect();
        assert_eq!(parts.len(), 7);
        assert_eq!(parts.iter().filter(|p| p.block_count() == 3).count(), 6);
        assert_eq!(partitions_with_at_least(5, 3).unwrap().count(), 36);
        assert_eq!(partitions_with_at_least(3, 3).unwrap().count(), 1);
    }

    #[test]
    fn canonical_form_and_order() {
        let parts: Vec<_> = partitions_into_k_blocks(4, 2).unwrap().collect();
        for p in &parts {
            assert_eq!(
                SetPartition::from_blocks(4, p.blocks().to_vec()).unwrap(),
                *p
            );
        }
        assert_eq!(parts.first().unwrap().to_string(), "{{1,2,3},{4}}");
        assert_eq!(parts.last().unwrap().to_string(), "{{1},{2,3,4}}");
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            partitions_into_k_blocks(4, 0),
            Err(Error::InvalidArgs(_))
        ));
        assert!(matches!(
            partitions_into_k_blocks(4, 5),
            Err(Error::InvalidArgs(_))
        ));
        assert_eq!(
            partitions_into_k_blocks(13, 3).err(),
            Some(Error::UnsupportedSize { n: 13, cap: 12 })
        );
        let limits = Limits {
            partition_cap: 14,
            ..Limits::default()
        };
        assert!(partitions_into_k_blocks_with(13, 3, &limits).is_ok());
        assert!(matches!(subsets_of_size(3, 4), Err(Error::InvalidArgs(_))));
        assert!(matches!(stirling2(31, 2), Err(Error::InvalidArgs(_))));
    }

    #[test]
    fn subsets() {
        let empty: Vec<_> = subsets_of_size(4, 0).unwrap().collect();
        assert_eq!(empty, vec![IndexSubset::empty()]);
        let pairs: Vec<_> = subsets_of_size(4, 2)
            .unwrap()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            pairs,
            ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]
        );
        assert_eq!(subsets_of_size(5, 3).unwrap().count(), 10);
        assert_eq!(subsets_of_size(3, 3).unwrap().count(), 1);
        assert_eq!(subsets_of_size(0, 0).unwrap().count(), 1);
    }

    #[test]
    fn counting_values() {
        assert_eq!(stirling2(5, 3).unwrap(), 25);
        assert_eq!(bell(4).unwrap(), 15);
        assert_eq!(bell(0).unwrap(), 1);
        assert_eq!(bell(12).unwrap(), 4_213_597);
        for n in 0..=30 {
            assert_eq!(stirling2(n, n).unwrap(), 1);
        }
        assert_eq!(binomial(30, 15).unwrap(), 155_117_520);
    }

    #[test]
    fn no_duplicates_up_to_eight() {
        for n in 1..=8 {
            for k in 1..=n {
                let set: BTreeSet<_> = partitions_into_k_blocks(n, k).unwrap().collect();
                assert_eq!(set.len() as u128, stirling2(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn subset_masks_and_complements() {
        let s = IndexSubset::from_mask(0b1010);
        assert_eq!(s.indices(), &[2, 4]);
        assert_eq!(s.complement(5).indices(), &[1, 3, 5]);
        assert!(IndexSubset::new(vec![2, 2]).is_err());
        assert!(IndexSubset::new(vec![0, 1]).is_err());
    }
}
