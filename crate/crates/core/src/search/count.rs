use num_bigint::BigUint;

use super::layout::Layout;
use crate::error::{Error, Result};

struct Counter<'a> {
    lay: &'a Layout,
    q: u64,
    set_sum: Vec<u64>,
    acc: u128,
    total: BigUint,
    nodes: u64,
    budget: u64,
}

impl Counter<'_> {
    fn room(&self, p: usize) -> i64 {
        self.lay.cover[p].iter().map(|&x| self.q as i64 - self.set_sum[x as usize] as i64).min().unwrap_or(self.q as i64)
    }

    fn add(&mut self, k: u64) {
        self.acc += u128::from(k);
        if self.acc > u128::from(u64::MAX) {
            self.total += BigUint::from(self.acc);
            self.acc = 0;
        }
    }

    fn rec(&mut self, p: usize) -> Result<()> {
        let ub = self.room(p);
        if ub < 0 {
            return Ok(());
        }
        // the last pair closes every set it lies in, so each value up to
        // the residual completes a member
        if p + 1 == self.lay.pairs {
            self.add(ub as u64 + 1);
            return Ok(());
        }
        for v in 0..=ub as u32 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget {
                    what: "family count",
                    needed: format!("more than {} nodes", self.budget),
                    budget: self.budget,
                });
            }
            for &x in &self.lay.cover[p] {
                self.set_sum[x as usize] += u64::from(v);
            }
            let r = self.rec(p + 1);
            for &x in &self.lay.cover[p] {
                self.set_sum[x as usize] -= u64::from(v);
            }
            r?;
        }
        Ok(())
    }
}

/// `|F(n,s,q)|` by depth-first enumeration with forward checking.
pub(crate) fn count(lay: &Layout, q: u64, budget: u64) -> Result<(BigUint, u64)> {
    let mut c = Counter {
        lay,
        q,
        set_sum: vec![0; lay.sets()],
        acc: 0,
        total: BigUint::from(0u32),
        nodes: 0,
        budget,
    };
    c.rec(0)?;
    let total = c.total + BigUint::from(c.acc);
    Ok((total, c.nodes))
}
