//! Empirical block frequencies along a finite path prefix and recovery of the
//! ergodic component that generated it.
//!
//! Frequencies count every overlapping window and are normalized by the
//! number of complete windows `N − k + 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bayes_predictors::Decomposition;
use crate::components::{ComponentLaw, EXACT_BLOCK_MAX_LEN};
use crate::error::{Error, Result};
use crate::process_core::{Alphabet, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFrequencyTable {
    k: usize,
    prefix_len: usize,
    alphabet_size: usize,
    counts: BTreeMap<Vec<Symbol>, usize>,
}

impl BlockFrequencyTable {
    pub fn block_len(&self) -> usize {
        self.k
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn windows(&self) -> usize {
        self.prefix_len - self.k + 1
    }

    pub fn frequency(&self, block: &[Symbol]) -> f64 {
        self.counts.get(block).copied().unwrap_or(0) as f64 / self.windows() as f64
    }

    /// Observed blocks with their frequencies, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&[Symbol], f64)> + '_ {
        let w = self.windows() as f64;
        self.counts.iter().map(move |(b, c)| (b.as_slice(), *c as f64 / w))
    }

    /// Every block of length `k`, observed or not.
    pub fn all_blocks(&self) -> Vec<Vec<Symbol>> {
        all_blocks(self.alphabet_size, self.k)
    }
}

/// All words of length `k` over `{0, …, size−1}` in lexicographic order.
pub fn all_blocks(size: usize, k: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|b| {
                (0..size).map(move |s| {
                    let mut next = b.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    out
}

pub fn block_frequencies(prefix: &[Symbol], alphabet: &Alphabet, k: usize) -> Result<BlockFrequencyTable> {
    if k == 0 {
        return Err(Error::InvalidParameter("block length must be at least 1".into()));
    }
    if prefix.len() < k {
        return Err(Error::PrefixTooShort { k, len: prefix.len() });
    }
    for &s in prefix {
        alphabet.check(s)?;
    }
    let mut counts = BTreeMap::new();
    for w in prefix.windows(k) {
        *counts.entry(w.to_vec()).or_insert(0) += 1;
    }
    Ok(BlockFrequencyTable { k, prefix_len: prefix.len(), alphabet_size: alphabet.len(), counts })
}

/// `max_b |Π(b) − μ(b)|` over every block `b` of the table's length.
pub fn max_gap_to_law<L: ComponentLaw + ?Sized>(table: &BlockFrequencyTable, law: &L) -> Result<f64> {
    if table.k > EXACT_BLOCK_MAX_LEN {
        return Err(Error::BlockTooLong { len: table.k, max: EXACT_BLOCK_MAX_LEN });
    }
    let mut worst: f64 = 0.0;
    for block in table.all_blocks() {
        let exact = law.exact_block_probability(&block)?;
        worst = worst.max((table.frequency(&block) - exact).abs());
    }
    Ok(worst)
}

/// Largest frequency gap over all block lengths `1..=max_k`.
pub fn max_gap_up_to<L: ComponentLaw + ?Sized>(
    prefix: &[Symbol],
    law: &L,
    max_k: usize,
) -> Result<f64> {
    let alphabet = law.alphabet();
    let mut worst: f64 = 0.0;
    for k in 1..=max_k {
        worst = worst.max(max_gap_to_law(&block_frequencies(prefix, &alphabet, k)?, law)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Identification {
    pub index: usize,
    pub label: String,
    /// Max-over-blocks gap between the table and the chosen component.
    pub score: f64,
}

/// Picks the component whose exact block law is closest to the table in
/// max-over-blocks distance; ties go to the lowest index.
pub fn identify_component(table: &BlockFrequencyTable, dec: &Decomposition) -> Result<Identification> {
    if dec.alphabet_size() != table.alphabet_size {
        return Err(Error::AlphabetMismatch { left: table.alphabet_size, right: dec.alphabet_size() });
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in dec.components().iter().enumerate() {
        let score = max_gap_to_law(table, c)?;
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((i, score));
        }
    }
    let (index, score) = best.expect("decomposition is nonempty");
    Ok(Identification { index, label: dec.labels()[index].clone(), score })
}

/// Row of the `block,frequency,exact,gap` export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRow {
    pub block: String,
    pub frequency: f64,
    pub exact: f64,
    pub gap: f64,
}

/// One row per block of the table's length, labelled with `alphabet` symbols
/// joined without separators (e.g. `WBG`) or with `-` for multi-character labels.
pub fn block_rows<L: ComponentLaw + ?Sized>(table: &BlockFrequencyTable, law: &L) -> Result<Vec<BlockRow>> {
    let alphabet = law.alphabet();
    let sep = if alphabet.symbols().iter().all(|s| s.chars().count() == 1) { "" } else { "-" };
    table
        .all_blocks()
        .into_iter()
        .map(|b| {
            let exact = law.exact_block_probability(&b)?;
            let frequency = table.frequency(&b);
            let block = b
                .iter()
                .map(|&s| alphabet.label(s).unwrap_or("?"))
                .collect::<Vec<_>>()
                .join(sep);
            Ok(BlockRow { block, frequency, exact, gap: (frequency - exact).abs() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::BernoulliComponent;

    fn bits() -> Alphabet {
        Alphabet::numeric(2).unwrap()
    }

    #[test]
    fn frequency_examples() {
        let prefix = [0, 1, 0, 1, 0, 1];
        let t1 = block_frequencies(&prefix, &bits(), 1).unwrap();
        assert_eq!(t1.frequency(&[0]), 0.5);
        assert_eq!(t1.frequency(&[1]), 0.5);

        let t2 = block_frequencies(&prefix, &bits(), 2).unwrap();
        assert_eq!(t2.windows(), 5);
        assert_eq!(t2.frequency(&[0, 1]), 0.6);
        assert_eq!(t2.frequency(&[1, 0]), 0.4);
        assert_eq!(t2.frequency(&[0, 0]), 0.0);

        let t3 = block_frequencies(&[1; 10], &bits(), 3).unwrap();
        assert_eq!(t3.entries().collect::<Vec<_>>(), vec![(&[1, 1, 1][..], 1.0)]);
    }

    #[test]
    fn frequency_errors() {
        assert_eq!(
            block_frequencies(&[0, 1], &bits(), 3).unwrap_err(),
            Error::PrefixTooShort { k: 3, len: 2 }
        );
        assert!(block_frequencies(&[0, 2], &bits(), 1).is_err());
        assert!(block_frequencies(&[0, 1], &bits(), 0).is_err());
    }

    #[test]
    fn identification_tie_break_and_singleton() {
        let t = block_frequencies(&[0, 1, 1, 0], &bits(), 1).unwrap();
        let dec = Decomposition::bernoulli(&[0.4], None).unwrap();
        assert_eq!(identify_component(&t, &dec).unwrap().index, 0);
        let dec = Decomposition::bernoulli(&[0.2, 0.2], None).unwrap();
        assert_eq!(identify_component(&t, &dec).unwrap().index, 0);
    }

    #[test]
    fn block_rows_cover_every_block() {
        let t = block_frequencies(&[0, 1, 1, 0, 1], &bits(), 2).unwrap();
        let rows = block_rows(&t, &BernoulliComponent::new(0.5).unwrap()).unwrap();
        assert_eq!(rows.iter().map(|r| r.block.as_str()).collect::<Vec<_>>(), ["00", "01", "10", "11"]);
        assert!(rows.iter().all(|r| r.exact == 0.25));
        assert!((rows.iter().map(|r| r.frequency).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
