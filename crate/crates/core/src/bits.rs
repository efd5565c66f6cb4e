//! Helpers for bit-vectors stored as `u64` word slices.
//!
//! Bit `i` of a vector lives in word `i / 64` at position `i % 64`
//! (LSB-first). All matrix rows, columns, and slice payloads in this crate
//! use this layout, so intersection-and-count is a word-wise
//! `(a & b).count_ones()` loop.

/// Number of `u64` words needed to hold `bits` bits.
#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Reads bit `i`.
#[inline]
pub fn get(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// Sets bit `i`.
#[inline]
pub fn set(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

/// Total number of set bits.
#[inline]
pub fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| u64::from(w.count_ones())).sum()
}

/// Number of set bits in the intersection of two equal-layout vectors.
///
/// This is the kernel's one arithmetic primitive: `BitCount(AND(a, b))`.
#[inline]
pub fn and_popcount(a: &[u64], b: &[u64]) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| u64::from((x & y).count_ones()))
        .sum()
}

/// Iterates the positions of set bits in ascending order.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        std::iter::successors(
            (w != 0).then_some(w),
            |&t| {
                let t = t & (t - 1);
                (t != 0).then_some(t)
            },
        )
        .map(move |t| wi * 64 + t.trailing_zeros() as usize)
    })
}
