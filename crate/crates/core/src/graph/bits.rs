//! Word-slice bitset helpers.

#[inline]
pub(crate) fn count(w: &[u64]) -> usize {
    w.iter().map(|x| x.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn is_empty(w: &[u64]) -> bool {
    w.iter().all(|&x| x == 0)
}

#[inline]
pub(crate) fn first(w: &[u64]) -> Option<usize> {
    w.iter()
        .enumerate()
        .find(|(_, &x)| x != 0)
        .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
}

#[inline]
pub(crate) fn set(w: &mut [u64], i: usize) {
    w[i / 64] |= 1 << (i % 64);
}

#[inline]
pub(crate) fn clear(w: &mut [u64], i: usize) {
    w[i / 64] &= !(1 << (i % 64));
}

#[inline]
pub(crate) fn and_assign(w: &mut [u64], other: &[u64]) {
    for (a, b) in w.iter_mut().zip(other) {
        *a &= b;
    }
}

#[inline]
pub(crate) fn and_not_assign(w: &mut [u64], other: &[u64]) {
    for (a, b) in w.iter_mut().zip(other) {
        *a &= !b;
    }
}

#[inline]
pub(crate) fn and_into(out: &mut [u64], a: &[u64], b: &[u64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x & y;
    }
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

/// Clears bits at positions >= n.
pub(crate) fn truncate(w: &mut [u64], n: usize) {
    for (i, word) in w.iter_mut().enumerate() {
        let lo = i * 64;
        if lo >= n {
            *word = 0;
        } else if n - lo < 64 {
            *word &= (1u64 << (n - lo)) - 1;
        }
    }
}

pub(crate) fn ones(w: &[u64]) -> impl Iterator<Item = usize> + '_ {
    w.iter().enumerate().flat_map(|(i, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                None
            } else {
                let t = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(i * 64 + t)
            }
        })
    })
}
