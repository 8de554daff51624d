//! Unpruned enumeration of every weight vector up to a cap. Deliberately
//! shares no code with the pruned engines.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};

/// Everything one full scan yields.
#[derive(Clone, Debug)]
pub struct OracleScan {
    pub max_sum: u64,
    pub sum_witness: Vec<u32>,
    pub max_product: BigUint,
    pub product_witness: Vec<u32>,
    pub count: BigUint,
    pub assignments: u64,
}

/// Pairs listed as `(0,1), (0,2), (1,2), (0,3), ...`.
fn pair_list(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..n {
        for i in 0..j {
            out.push((i, j));
        }
    }
    out
}

fn s_sets(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, s: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, s, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, s, 0, &mut Vec::new(), &mut out);
    out
}

/// Scans all `(cap+1)^C(n,2)` weight vectors, refusing when that exceeds
/// `budget`.
pub fn oracle_scan(n: usize, s: usize, q: u64, cap: u32, budget: u64) -> Result<OracleScan> {
    if s < 2 || s > n {
        return Err(invalid(format!("need 2 <= s <= n, got n = {n}, s = {s}")));
    }
    let pairs = pair_list(n);
    let total = (0..pairs.len()).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(cap) + 1));
    match total {
        Some(t) if t <= u128::from(budget) => {}
        _ => {
            return Err(Error::Budget {
                what: "brute-force oracle",
                needed: total.map_or_else(|| "more than 2^128".into(), |t| t.to_string()),
                budget,
            })
        }
    }
    let sets = s_sets(n, s);
    let mut cover: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    for (k, set) in sets.iter().enumerate() {
        for (p, &(i, j)) in pairs.iter().enumerate() {
            if set.contains(&i) && set.contains(&j) {
                cover[p].push(k);
            }
        }
    }
    let mut w = vec![0u32; pairs.len()];
    let mut sums = vec![0u64; sets.len()];
    let mut violated = 0usize;
    let mut scan = OracleScan {
        max_sum: 0,
        sum_witness: w.clone(),
        max_product: BigUint::zero(),
        product_witness: w.clone(),
        count: BigUint::zero(),
        assignments: 0,
    };
    let mut have = false;
    let mut count: u128 = 0;
    loop {
        scan.assignments += 1;
        if violated == 0 {
            count += 1;
            let sum: u64 = w.iter().map(|&x| u64::from(x)).sum();
            if !have || sum > scan.max_sum {
                scan.max_sum = sum;
                scan.sum_witness.copy_from_slice(&w);
            }
            let prod = w.iter().try_fold(1u128, |acc, &x| acc.checked_mul(u128::from(x)));
            let prod = match prod {
                Some(p) => BigUint::from(p),
                None => w.iter().map(|&x| BigUint::from(x)).product(),
            };
            if !have || prod > scan.max_product {
                scan.max_product = prod;
                scan.product_witness.copy_from_slice(&w);
            }
            have = true;
        }
        // odometer step, least significant pair first
        let mut k = 0;
        loop {
            if k == w.len() {
                scan.count = BigUint::from(count);
                return Ok(scan);
            }
            if w[k] < cap {
                w[k] += 1;
                for &x in &cover[k] {
                    sums[x] += 1;
                    if sums[x] == q + 1 {
                        violated += 1;
                    }
                }
                break;
            }
            for &x in &cover[k] {
                let before = sums[x];
                sums[x] -= u64::from(cap);
                if before > q && sums[x] <= q {
                    violated -= 1;
                }
            }
            w[k] = 0;
            k += 1;
        }
    }
}
