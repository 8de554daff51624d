use crate::combinat::{choose2, pair_rank, pair_unrank, Subsets};
use crate::error::{invalid, Result};

/// Largest `n` the exact engines accept; pair masks must fit a `u64`.
pub const MAX_SEARCH_N: usize = 11;

/// Pair and `s`-set bookkeeping shared by the engines. Pairs are numbered
/// by colex rank, so the pairs inside `{0..=k}` are exactly the ranks below
/// `C(k+1, 2)`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub s: usize,
    pub pairs: usize,
    /// Pair mask of every `s`-set.
    pub set_pairs: Vec<u64>,
    /// Indices of the `s`-sets containing each pair.
    pub cover: Vec<Vec<u32>>,
    /// `Some(k)` when assigning this rank completes the pairs inside `{0..=k}`.
    pub completes: Vec<Option<usize>>,
}

impl Layout {
    pub fn new(n: usize, s: usize) -> Result<Self> {
        if s < 2 || s > n {
            return Err(invalid(format!("need 2 <= s <= n, got n = {n}, s = {s}")));
        }
        if n > MAX_SEARCH_N {
            return Err(invalid(format!("exact search supports n <= {MAX_SEARCH_N}, got {n}")));
        }
        let pairs = choose2(n);
        let mut set_pairs = Vec::new();
        let mut cover = vec![Vec::new(); pairs];
        for (idx, x) in Subsets::new(n, s).enumerate() {
            let members: Vec<usize> = (0..n).filter(|&v| x >> v & 1 == 1).collect();
            let mut mask = 0u64;
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    let r = pair_rank(i, j);
                    mask |= 1 << r;
                    cover[r].push(idx as u32);
                }
            }
            set_pairs.push(mask);
        }
        let completes = (0..pairs)
            .map(|r| {
                let (_, hi) = pair_unrank(r);
                (r + 1 == choose2(hi + 1)).then_some(hi)
            })
            .collect();
        Ok(Layout { s, pairs, set_pairs, cover, completes })
    }

    pub fn sets(&self) -> usize {
        self.set_pairs.len()
    }

    /// Whether swapping `i` and `i+1` (both at most `k`) makes the weights on
    /// `{0..=k}` lexicographically larger in rank order.
    pub fn transposition_beats(&self, w: &[u32], i: usize, k: usize) -> bool {
        let tau = |v: usize| {
            if v == i {
                i + 1
            } else if v == i + 1 {
                i
            } else {
                v
            }
        };
        for r in 0..choose2(k + 1) {
            let (x, y) = pair_unrank(r);
            let image = w[pair_rank(tau(x), tau(y))];
            if image != w[r] {
                return image > w[r];
            }
        }
        false
    }
}
