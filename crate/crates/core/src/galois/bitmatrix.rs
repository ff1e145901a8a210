//! Packed matrices over `F_2` with deterministic elimination.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        let (w, b) = (i / 64, i % 64);
        if v {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, o: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set index.
    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Rows over `F_2` with a fixed column count.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitRow>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn push(&mut self, row: BitRow) {
        assert_eq!(row.words.len(), self.cols.div_ceil(64), "row width");
        self.rows.push(row);
    }

    /// Rank together with, for each row, whether it was independent of the
    /// rows before it. Pivots are the lowest set column of each reduced row.
    pub fn echelon(&self) -> (usize, Vec<bool>) {
        let mut pivots: Vec<Option<BitRow>> = vec![None; self.cols];
        let mut independent = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut r = row.clone();
            let fresh = loop {
                match r.lowest() {
                    None => break false,
                    Some(c) => match &pivots[c] {
                        Some(p) => r.xor_assign(p),
                        None => {
                            pivots[c] = Some(r);
                            break true;
                        }
                    },
                }
            };
            independent.push(fresh);
        }
        (independent.iter().filter(|&&b| b).count(), independent)
    }

    pub fn rank(&self) -> usize {
        self.echelon().0
    }

    /// Each row as a string of `0`/`1` characters.
    pub fn to_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|i| if r.get(i) { '1' } else { '0' }).collect())
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}
