//! Streaming pairwise summation.
//!
//! Values are buffered in fixed blocks; each full block is reduced by
//! recursive halving and its sum enters a binary carry chain, so the total is
//! a balanced tree over the whole stream. Rounding error grows like
//! `O(log n)` rather than `O(n)`, without storing the stream.

const BLOCK: usize = 128;

#[derive(Debug, Clone)]
pub struct PairwiseSum {
    block: [f64; BLOCK],
    len: usize,
    levels: [f64; 64],
    occupied: u64,
}

impl Default for PairwiseSum {
    fn default() -> Self {
        PairwiseSum {
            block: [0.0; BLOCK],
            len: 0,
            levels: [0.0; 64],
            occupied: 0,
        }
    }
}

impl PairwiseSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        self.block[self.len] = x;
        self.len += 1;
        if self.len == BLOCK {
            let s = pairwise(&self.block);
            self.len = 0;
            self.carry(s);
        }
    }

    fn carry(&mut self, mut s: f64) {
        let mut level = 0;
        while self.occupied & (1 << level) != 0 {
            s += self.levels[level];
            self.occupied &= !(1 << level);
            level += 1;
        }
        self.levels[level] = s;
        self.occupied |= 1 << level;
    }

    pub fn total(&self) -> f64 {
        let mut acc = pairwise(&self.block[..self.len]);
        for level in 0..64 {
            if self.occupied & (1 << level) != 0 {
                acc += self.levels[level];
            }
        }
        acc
    }
}

/// Pairwise sum of a slice.
pub fn pairwise(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let (l, r) = xs.split_at(xs.len() / 2);
        pairwise(l) + pairwise(r)
    }
}

impl Extend<f64> for PairwiseSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Neumaier-compensated reference sum.
    fn neumaier(xs: impl Iterator<Item = f64>) -> f64 {
        let mut sum = 0.0f64;
        let mut c = 0.0f64;
        for x in xs {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                c += (sum - t) + x;
            } else {
                c += (x - t) + sum;
            }
            sum = t;
        }
        sum + c
    }

    #[test]
    fn small_streams_match_plain_sum() {
        for n in [0usize, 1, 7, 127, 128, 129, 1000] {
            let mut acc = PairwiseSum::new();
            acc.extend((0..n).map(|i| i as f64));
            assert_eq!(acc.total(), (n * n.saturating_sub(1) / 2) as f64);
        }
    }

    #[test]
    fn accuracy_on_ill_scaled_stream() {
        // many small terms mixed with rare large ones
        let n = 2_000_000u64;
        let term = |i: u64| {
            if i.is_multiple_of(10_007) {
                1e6 + (i as f64).sqrt()
            } else {
                0.1 + 1e-3 * ((i % 97) as f64)
            }
        };
        let mut acc = PairwiseSum::new();
        acc.extend((0..n).map(term));
        let reference = neumaier((0..n).map(term));
        assert!(((acc.total() - reference) / reference).abs() < 1e-14);
        let naive: f64 = (0..n).map(term).sum();
        assert!(
            ((acc.total() - reference) / reference).abs()
                <= ((naive - reference) / reference).abs()
        );
    }
}
