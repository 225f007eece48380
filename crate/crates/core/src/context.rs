use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::scalar::is_prime;

/// Parameters shared by every algebra: rank `n`, optional degree `r`, optional
/// characteristic data `(p, h)` and the enumeration window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraContext {
    pub n: usize,
    pub r: Option<i64>,
    pub p: Option<u64>,
    pub h: Option<u32>,
    pub window: i64,
}

impl AlgebraContext {
    pub fn new(n: usize) -> Result<Self> {
        let ctx = AlgebraContext { n, r: None, p: None, h: None, window: 2 };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        precondition(self.n >= 2, || format!("rank n must be at least 2, got {}", self.n))?;
        if let Some(r) = self.r {
            precondition(r >= 0, || format!("degree r must be nonnegative, got {r}"))?;
        }
        if let Some(p) = self.p {
            precondition(is_prime(p), || format!("{p} is not prime"))?;
        }
        if let Some(h) = self.h {
            precondition(h >= 1, || format!("level h must be at least 1, got {h}"))?;
        }
        precondition(self.window >= 0, || format!("window must be nonnegative, got {}", self.window))
    }

    pub fn modp(&self) -> Result<ModPContext> {
        let p = self.p.ok_or_else(|| crate::error::Error::Precondition("a prime p is required".into()))?;
        ModPContext::new(p, self.h.unwrap_or(1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModPContext {
    pub p: u64,
    pub h: u32,
    pub q: i64,
}

impl ModPContext {
    pub fn new(p: u64, h: u32) -> Result<Self> {
        precondition(is_prime(p), || format!("{p} is not prime"))?;
        precondition(h >= 1, || format!("level h must be at least 1, got {h}"))?;
        Ok(ModPContext { p, h, q: (p as i64).pow(h) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants() {
        assert!(AlgebraContext::new(1).is_err());
        let mut ctx = AlgebraContext::new(2).unwrap();
        ctx.p = Some(4);
        assert!(ctx.validate().is_err());
        assert_eq!(ModPContext::new(3, 2).unwrap().q, 9);
        assert!(ModPContext::new(2, 0).is_err());
    }
}
