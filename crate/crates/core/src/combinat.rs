//! Small combinatorial helpers shared by every module.

/// `C(n, 2)`.
#[inline]
pub const fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Exact binomial coefficient; panics on `u64` overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// Rank of the pair `{i, j}` in colex order: `(0,1), (0,2), (1,2), (0,3), ...`.
#[inline]
pub fn pair_rank(i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(lo < hi);
    choose2(hi) + lo
}

/// Inverse of [`pair_rank`].
pub fn pair_unrank(rank: usize) -> (usize, usize) {
    let mut hi = 1;
    while choose2(hi + 1) <= rank {
        hi += 1;
    }
    (rank - choose2(hi), hi)
}

/// Iterator over all `k`-subsets of `0..n` as bitmasks, in colex order
/// (which is increasing numeric order of the masks).
#[derive(Clone, Debug)]
pub struct Subsets {
    next: Option<u64>,
    limit: u64,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 63, "subset enumeration limited to 63 elements");
        let limit = 1u64 << n;
        let next = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some((1u64 << k) - 1)
        };
        Subsets { next, limit }
    }
}

impl Iterator for Subsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt)
        };
        Some(cur)
    }
}

/// Sizes of the balanced split of `n` into `parts` parts, largest first.
pub fn balanced_split(n: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    let (q, r) = (n / parts, n % parts);
    (0..parts).map(|i| q + usize::from(i < r)).collect()
}

/// Calls `f` on every nonincreasing sequence of `parts` nonnegative
/// integers summing to `n`.
pub fn for_each_partition(n: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rem: usize, max: usize, slot: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if slot == buf.len() {
            if rem == 0 {
                f(buf);
            }
            return;
        }
        let left = buf.len() - slot;
        // the remaining slots can hold at most `left * max`
        if rem > left * max {
            return;
        }
        let lo = rem.div_ceil(left);
        for v in (lo..=max.min(rem)).rev() {
            buf[slot] = v;
            rec(rem - v, v, slot + 1, buf, f);
        }
    }
    if parts == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut buf = vec![0; parts];
    rec(n, n, 0, &mut buf, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_rank_roundtrip() {
        let mut expect = 0;
        for j in 1..20 {
            for i in 0..j {
                assert_eq!(pair_rank(i, j), expect);
                assert_eq!(pair_unrank(expect), (i, j));
                expect += 1;
            }
        }
    }

    #[test]
    fn subsets_count_and_order() {
        for n in 0..10 {
            for k in 0..=n + 1 {
                let all: Vec<u64> = Subsets::new(n, k).collect();
                assert_eq!(all.len() as u64, binomial(n as u64, k as u64));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                assert!(all.iter().all(|m| m.count_ones() as usize == k));
            }
        }
    }

    #[test]
    fn partitions_match_count() {
        // p(10) restricted to at most 3 parts = 14
        let mut seen = 0;
        for_each_partition(10, 3, &mut |p| {
            assert_eq!(p.iter().sum::<usize>(), 10);
            assert!(p.windows(2).all(|w| w[0] >= w[1]));
            seen += 1;
        });
        assert_eq!(seen, 14);
        let mut empty = 0;
        for_each_partition(0, 0, &mut |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn balanced() {
        assert_eq!(balanced_split(7, 3), vec![3, 2, 2]);
        assert_eq!(balanced_split(0, 2), vec![0, 0]);
    }
}
