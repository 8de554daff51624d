use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{invalid, Result};

/// The `(a, r, d)` triple parameterising `T_{r,d}(a, n)`.
///
/// `a` is the base multiplicity, `r` the number of parts and `d` the
/// deficiency of the special part `V_0`, whose internal edges carry `a - d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub a: u32,
    pub r: u32,
    pub d: u32,
}

impl Params {
    pub fn new(a: u32, r: u32, d: u32) -> Result<Self> {
        let p = Params { a, r, d };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a == 0 {
            return Err(invalid("a must be at least 1"));
        }
        if self.r == 0 {
            return Err(invalid("r must be at least 1"));
        }
        if self.d >= self.a {
            return Err(invalid(format!("d = {} must be at most a - 1 = {}", self.d, self.a - 1)));
        }
        Ok(())
    }

    /// `(r-1)(d+1)+2`, the smallest `s` at which sum-extremal `s`-sets see
    /// the full structure of the construction.
    pub fn s_base(&self) -> usize {
        (self.r as usize - 1) * (self.d as usize + 1) + 2
    }

    /// Weight of edges inside `V_0`.
    pub fn low(&self) -> u32 {
        self.a - self.d
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={},r={},d={}", self.a, self.r, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Params::new(2, 2, 1).is_ok());
        assert!(Params::new(2, 2, 2).is_err());
        assert!(Params::new(0, 2, 0).is_err());
        assert!(Params::new(3, 0, 0).is_err());
        assert_eq!(Params::new(3, 3, 2).unwrap().s_base(), 8);
        assert_eq!(Params::new(2, 2, 1).unwrap().s_base(), 4);
    }
}
