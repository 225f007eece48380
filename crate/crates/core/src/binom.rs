//! Generalized binomial and multinomial coefficients, plus the Lucas-style
//! residue computation used in characteristic p.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{precondition, Result};
use crate::matrix::PeriodicVector;

/// `m (m-1) ... (m-k+1) / k!`, valid for every integer `m`. Zero when `k < 0`.
pub fn gbinom(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if m >= 0 && k > m {
        return BigInt::zero();
    }
    let mut res = BigInt::one();
    for t in 0..k {
        // res = m(m-1)...(m-t+1)/t!; multiplying by (m-t)/(t+1) stays integral.
        res = res * BigInt::from(m - t) / BigInt::from(t + 1);
    }
    res
}

/// Machine-integer variant for small arguments; `None` on overflow.
pub fn gbinom_i128(m: i64, k: i64) -> Option<i128> {
    if k < 0 {
        return Some(0);
    }
    if m >= 0 && k > m {
        return Some(0);
    }
    let mut res: i128 = 1;
    for t in 0..k {
        res = res.checked_mul((m - t) as i128)? / (t as i128 + 1);
    }
    Some(res)
}

/// Product of `gbinom(mu_i, lambda_i)` over one period.
pub fn vec_binom(mu: &PeriodicVector, lambda: &PeriodicVector) -> BigInt {
    let mut res = BigInt::one();
    for (&m, &l) in mu.entries().iter().zip(lambda.entries()) {
        let b = gbinom(m, l);
        if b.is_zero() {
            return b;
        }
        res *= b;
    }
    res
}

/// `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let mut total: i64 = 0;
    let mut res = BigInt::one();
    for &p in parts {
        total += p as i64;
        res *= gbinom(total, p as i64);
    }
    res
}

/// `gbinom(t, s)` reduced mod `p`, computed from the base-p digits of
/// `t mod p^h` and `s`. Requires `0 <= s < p^h`.
pub fn lucas_check(t: i64, s: i64, p: u64, h: u32) -> Result<u64> {
    let q = (p as i64).pow(h);
    precondition((0..q).contains(&s), || format!("lower index {s} must lie in [0, {q})"))?;
    let mut top = t.rem_euclid(q);
    let mut bottom = s;
    let mut res: u64 = 1;
    let p_i = p as i64;
    while bottom > 0 || top > 0 {
        let (a, b) = (top % p_i, bottom % p_i);
        let digit = gbinom(a, b).to_u64().expect("digit binomial is small") % p;
        res = res * digit % p;
        top /= p_i;
        bottom /= p_i;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_values() {
        assert_eq!(gbinom(-1, 2), BigInt::from(1));
        assert_eq!(gbinom(2, 5), BigInt::from(0));
        assert_eq!(gbinom(5, 2), BigInt::from(10));
        assert_eq!(gbinom(-3, 3), BigInt::from(-10));
        assert_eq!(gbinom(7, 0), BigInt::from(1));
        let v = |x: &[i64]| PeriodicVector::new(x.to_vec());
        assert_eq!(vec_binom(&v(&[1, 0]), &v(&[1, 0])), BigInt::from(1));
        assert_eq!(vec_binom(&v(&[0, 1]), &v(&[1, 0])), BigInt::from(0));
        assert_eq!(multinomial(&[2, 1, 1]), BigInt::from(12));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_check(3, 1, 2, 1).unwrap(), 1);
        assert_eq!(lucas_check(1, 1, 2, 1).unwrap(), 1);
        assert_eq!(lucas_check(2, 1, 2, 1).unwrap(), 0);
        assert_eq!(lucas_check(5, 2, 3, 1).unwrap(), 1);
        assert!(lucas_check(5, 3, 3, 1).is_err());
    }

    #[test]
    fn lucas_agrees_with_reduction_on_random_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
            let h = rng.gen_range(1..=3u32);
            let q = (p as i64).pow(h);
            let t = rng.gen_range(-3 * q..3 * q);
            let s = rng.gen_range(0..q);
            let direct = gbinom(t, s).mod_floor(&BigInt::from(p)).to_u64().unwrap();
            assert_eq!(lucas_check(t, s, p, h).unwrap(), direct, "t={t} s={s} p={p} h={h}");
        }
    }

    proptest! {
        #[test]
        fn pascal(m in -40i64..40, k in 1i64..12) {
            prop_assert_eq!(gbinom(m, k), gbinom(m - 1, k) + gbinom(m - 1, k - 1));
        }

        #[test]
        fn falling_factorial(m in -20i64..20, k in 0i64..8) {
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            for t in 0..k {
                num *= BigInt::from(m - t);
                den *= BigInt::from(t + 1);
            }
            prop_assert_eq!(gbinom(m, k), num / den);
            prop_assert_eq!(gbinom_i128(m, k).map(BigInt::from), Some(gbinom(m, k)));
        }
    }
}
