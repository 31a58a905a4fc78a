//! Search for representations whose addends share no low-zone bit.

/// With carry-free addition the low zones of the sum are the disjoint union of
/// the addends' low zones, so a representation is an exact cover of the
/// target's low bits plus enough copies of `d0` to make up the 1S part.
pub(crate) struct CarryFreeSearch {
    low_width: u32,
    /// `(low bits, 1S quotient)` of every generator except `d0`, bucketed by lowest set bit.
    by_lowest_bit: Vec<Vec<(u64, u64)>>,
}

impl CarryFreeSearch {
    /// `generators` must contain `d0 = 2^low_width` and otherwise only
    /// integers with some low bit set.
    pub(crate) fn new(generators: &[u64], low_width: u32) -> Self {
        let d0 = 1u64 << low_width;
        let mut by_lowest_bit = vec![Vec::new(); low_width as usize];
        for &g in generators.iter().filter(|&&g| g != d0) {
            let low = g & (d0 - 1);
            assert!(low != 0, "only d0 may have empty low zones");
            by_lowest_bit[low.trailing_zeros() as usize].push((low, g >> low_width));
        }
        CarryFreeSearch {
            low_width,
            by_lowest_bit,
        }
    }

    pub(crate) fn representable(&self, n: u64) -> bool {
        let low = n & ((1u64 << self.low_width) - 1);
        self.cover(low, n >> self.low_width)
    }

    fn cover(&self, remaining: u64, quota: u64) -> bool {
        if remaining == 0 {
            return true;
        }
        let b = remaining.trailing_zeros() as usize;
        self.by_lowest_bit[b].iter().any(|&(low, q)| {
            low & !remaining == 0 && q <= quota && self.cover(remaining & !low, quota - q)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cover_with_quota() {
        // d0 = 16; generators 16, 16+3, 32+4, 48+8.
        let s = CarryFreeSearch::new(&[16, 19, 36, 56], 4);
        assert!(s.representable(16 * 5 + 7)); // 19 + 36 + 2·16
        assert!(!s.representable(16 + 7)); // needs quotient 3
        assert!(!s.representable(16 * 5 + 1)); // bit 0 alone is not available
        assert!(s.representable(0));
    }
}
