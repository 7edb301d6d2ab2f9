//! Exhaustive, restartable enumeration of small structures.

use super::PreferentialStructure;
use crate::error::{Error, Result};

/// Largest base the enumerator accepts.
pub const MAX_ENUM_POINTS: usize = 4;
/// Largest per-point copy count the enumerator accepts.
pub const MAX_ENUM_COPIES: usize = 2;

/// Every structure with 1..=`max_copies` copies per point and any irreflexive
/// attack relation. Order: copy-count vectors lexicographically (first point
/// slowest), then relation masks ascending. Bit `k` of a mask is the `k`-th
/// ordered pair `(attacker, attacked)` of distinct copies.
pub fn enumerate_structures(names: &[String], max_copies: usize) -> Result<StructureStream> {
    if names.len() > MAX_ENUM_POINTS || max_copies > MAX_ENUM_COPIES || max_copies == 0 {
        return Err(Error::Budget(format!(
            "enumeration needs 1..={MAX_ENUM_POINTS} points and 1..={MAX_ENUM_COPIES} copies, got {} and {max_copies}",
            names.len()
        )));
    }
    Ok(StructureStream {
        names: names.to_vec(),
        max_copies,
        counts: vec![1; names.len()],
        mask: 0,
        done: false,
        position: 0,
    })
}

#[derive(Clone, Debug)]
pub struct StructureStream {
    names: Vec<String>,
    max_copies: usize,
    counts: Vec<usize>,
    mask: u64,
    done: bool,
    position: u128,
}

fn pair_count(counts: &[usize]) -> u32 {
    let n: usize = counts.iter().sum();
    (n * n.saturating_sub(1)) as u32
}

impl StructureStream {
    /// Index of the next structure to be yielded.
    pub fn position(&self) -> u128 {
        self.position
    }

    /// Total number of structures in the stream.
    pub fn total(&self) -> u128 {
        let mut counts = vec![1; self.names.len()];
        let mut sum = 0u128;
        loop {
            sum += 1u128 << pair_count(&counts);
            if !advance(&mut counts, self.max_copies) {
                return sum;
            }
        }
    }

    /// Restart so that the next yielded structure is number `index`.
    pub fn seek(&mut self, index: u128) {
        self.counts = vec![1; self.names.len()];
        self.position = index;
        self.done = false;
        let mut rest = index;
        loop {
            let block = 1u128 << pair_count(&self.counts);
            if rest < block {
                self.mask = rest as u64;
                return;
            }
            rest -= block;
            if !advance(&mut self.counts, self.max_copies) {
                self.done = true;
                return;
            }
        }
    }

    fn build(&self) -> PreferentialStructure {
        let mut s = PreferentialStructure::new(self.names.clone()).expect("checked size");
        for (p, &k) in self.counts.iter().enumerate() {
            for _ in 0..k {
                s.add_copy(p, "");
            }
        }
        let n = s.copy_count();
        let mut bit = 0;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                if self.mask >> bit & 1 == 1 {
                    s.insert_edge(a, b);
                }
                bit += 1;
            }
        }
        s
    }
}

/// Next copy-count vector, last point fastest.
fn advance(counts: &mut [usize], max: usize) -> bool {
    for k in (0..counts.len()).rev() {
        if counts[k] < max {
            counts[k] += 1;
            for c in &mut counts[k + 1..] {
                *c = 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for StructureStream {
    type Item = PreferentialStructure;

    fn next(&mut self) -> Option<PreferentialStructure> {
        if self.done {
            return None;
        }
        let s = self.build();
        self.position += 1;
        let pairs = pair_count(&self.counts);
        if pairs < 64 && self.mask + 1 < 1u64 << pairs {
            self.mask += 1;
        } else if advance(&mut self.counts, self.max_copies) {
            self.mask = 0;
        } else {
            self.done = true;
        }
        Some(s)
    }
}
