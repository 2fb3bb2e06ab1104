//! Fixed-width bit rows stored as `u64` words.
//!
//! Tournaments keep one row per vertex for each direction, concept classes
//! keep one row per concept. All rows of a given structure share the same
//! word count so that intersections are plain word-wise `&`.

pub const WORD_BITS: usize = 64;

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
pub fn get(row: &[u64], i: usize) -> bool {
    row[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
}

#[inline]
pub fn set(row: &mut [u64], i: usize) {
    row[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}

#[inline]
pub fn clear(row: &mut [u64], i: usize) {
    row[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
}

#[inline]
pub fn count(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

/// Row with bits `0..len` set.
pub fn full(len: usize) -> Vec<u64> {
    let mut row = vec![u64::MAX; words_for(len)];
    let tail = len % WORD_BITS;
    if tail != 0 {
        if let Some(last) = row.last_mut() {
            *last = (1u64 << tail) - 1;
        }
    }
    row
}

/// Iterator over the indices of set bits, ascending.
pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD_BITS + tz)
        })
    })
}

pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut row = vec![0; words_for(len)];
    for i in indices {
        set(&mut row, i);
    }
    row
}
