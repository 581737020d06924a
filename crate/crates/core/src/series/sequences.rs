use num_bigint::BigInt;
use num_traits::One;

use super::{check_order, Rational, SeriesError, MAX_ORDER};

fn factorials(m: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for i in 1..=m {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

/// `k_1..k_m` from `k_m + 1!·k_{m-1} + 2!·k_{m-2} + ... + (m-1)!·k_1 = m·m!`.
pub fn k_sequence(m: usize) -> Result<Vec<BigInt>, SeriesError> {
    check_order(m, 1)?;
    let fact = factorials(m);
    let mut k: Vec<BigInt> = Vec::with_capacity(m);
    for j in 1..=m {
        let mut v = BigInt::from(j) * &fact[j];
        for s in 1..j {
            v -= &fact[s] * &k[j - s - 1];
        }
        k.push(v);
    }
    Ok(k)
}

/// `r_t = (t-1)!·(1 - 2^-t)` for `t = 1..=m`.
pub fn r_sequence(m: usize) -> Result<Vec<Rational>, SeriesError> {
    // ratio_expansion(m) needs r_{m+1}, hence the extra slot.
    if m == 0 {
        return Err(SeriesError::OrderTooSmall { min: 1, got: 0 });
    }
    if m > MAX_ORDER + 1 {
        return Err(SeriesError::OrderTooLarge(m));
    }
    let fact = factorials(m);
    Ok((1..=m)
        .map(|t| {
            let pow = BigInt::one() << t;
            Rational::from_integer(fact[t - 1].clone()) * Rational::new(&pow - 1, pow)
        })
        .collect())
}
