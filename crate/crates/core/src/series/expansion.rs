use num_traits::{One, Signed, Zero};

use super::cipolla::power_suffix;
use super::{check_order, k_sequence, r_sequence, ratio, Rational, SeriesError, SeriesPoly};

fn k_series(m: usize) -> Result<SeriesPoly, SeriesError> {
    let mut coeffs = vec![Rational::from_integer(0.into())];
    coeffs.extend(k_sequence(m)?.into_iter().map(Rational::from_integer));
    Ok(SeriesPoly::from_coeffs(coeffs, m))
}

/// `D(n) = 1 + k_1 b + ... + k_m b^m`, `b = 1/log p_n`.
pub fn d_expansion(m: usize) -> Result<SeriesPoly, SeriesError> {
    check_order(m, 0)?;
    if m == 0 {
        return Ok(SeriesPoly::constant(Rational::one(), 0));
    }
    let mut s = k_series(m)?;
    let one = SeriesPoly::constant(Rational::one(), m);
    s = &s + &one;
    Ok(s)
}

/// Coefficients `g_0..g_m` with `A_n/G_n = e · sum g_j b^j + O(b^{m+1})`.
///
/// Forms `S1 = 1/2 + sum_{w=1..m} b^w (r_w - r_{w+1} + sum_{v<w} r_v k_{w-v})`
/// and `S2 = exp(sum_j k_j b^j)`, both truncated at order `m`, and returns
/// the truncated product.
pub fn ratio_expansion(m: usize) -> Result<SeriesPoly, SeriesError> {
    check_order(m, 0)?;
    if m == 0 {
        return Ok(SeriesPoly::constant(ratio(1, 2), 0));
    }
    let k: Vec<Rational> = k_sequence(m)?.into_iter().map(Rational::from_integer).collect();
    let r = r_sequence(m + 1)?;
    let mut s1 = vec![ratio(1, 2)];
    for w in 1..=m {
        let mut c = &r[w - 1] - &r[w];
        for v in 1..w {
            c += &r[v - 1] * &k[w - v - 1];
        }
        s1.push(c);
    }
    let s1 = SeriesPoly::from_coeffs(s1, m);
    let s2 = k_series(m)?.exp()?;
    s1.checked_mul(&s2)
}

/// Renders `e · sum g_j L^-j` as `e/2 + e/(4L) + e/L² + 61e/(12L³) + ...`.
pub fn format_ratio_expansion(g: &SeriesPoly) -> String {
    let mut out = String::new();
    for (j, c) in g.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out.push_str(match (out.is_empty(), c.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        let num = c.numer().abs();
        let den = c.denom();
        if num.is_one() {
            out.push('e');
        } else {
            out.push_str(&format!("{num}e"));
        }
        let power = if j == 0 {
            String::new()
        } else {
            format!("L{}", power_suffix(j))
        };
        match (den.is_one(), power.is_empty()) {
            (true, true) => {}
            (true, false) => out.push_str(&format!("/{power}")),
            (false, true) => out.push_str(&format!("/{den}")),
            (false, false) => out.push_str(&format!("/({den}{power})")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
