//! Exact rational objective values and the threshold search over them.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact nonnegative rational, always kept in lowest terms.
pub type Ratio = num_rational::Ratio<i128>;

/// An objective value: a finite ratio or the `+inf` sentinel used when the
/// minimization domain is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Finite(Ratio),
    Infinite,
}

impl Objective {
    pub fn finite(num: i128, den: i128) -> Self {
        Objective::Finite(Ratio::new(num, den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Objective::Infinite)
    }

    pub fn as_ratio(&self) -> Option<Ratio> {
        match self {
            Objective::Finite(r) => Some(*r),
            Objective::Infinite => None,
        }
    }

    /// Six-decimal rendering with round-half-even; `inf` for the sentinel.
    pub fn to_decimal(&self) -> String {
        match self {
            Objective::Finite(r) => decimal6(r),
            Objective::Infinite => String::from("inf"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Objective::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Objective::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Objective {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Objective {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Objective::Finite(a), Objective::Finite(b)) => a.cmp(b),
            (Objective::Finite(_), Objective::Infinite) => Ordering::Less,
            (Objective::Infinite, Objective::Finite(_)) => Ordering::Greater,
            (Objective::Infinite, Objective::Infinite) => Ordering::Equal,
        }
    }
}

/// `num/den`, or `inf`.
impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Objective::Infinite => f.write_str("inf"),
        }
    }
}

fn decimal6(r: &Ratio) -> String {
    const SCALE: i128 = 1_000_000;
    let (num, den) = (*r.numer(), *r.denom());
    let neg = num < 0;
    let num = num.unsigned_abs();
    let den = den as u128;
    let int = num / den;
    let rem = num % den;
    let scaled = rem * SCALE as u128;
    let mut frac = scaled / den;
    let rest = scaled % den;
    let mut int = int;
    match (2 * rest).cmp(&den) {
        Ordering::Greater => frac += 1,
        Ordering::Equal if frac % 2 == 1 => frac += 1,
        _ => {}
    }
    if frac == SCALE as u128 {
        frac = 0;
        int += 1;
    }
    let sign = if neg && (int != 0 || frac != 0) { "-" } else { "" };
    format!("{sign}{int}.{frac:06}")
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`, for `0 <= lo <= hi`.
pub fn simplest_in_interval(lo: Ratio, hi: Ratio) -> Result<Ratio> {
    if lo < Ratio::zero() || lo > hi {
        return Err(Error::InvalidParameter(format!("bad interval [{lo}, {hi}]")));
    }
    let (n, d) = simplest(*lo.numer(), *lo.denom(), *hi.numer(), *hi.denom(), 0)?;
    Ok(Ratio::new(n, d))
}

fn simplest(ln: i128, ld: i128, hn: i128, hd: i128, depth: u32) -> Result<(i128, i128)> {
    if depth > 256 {
        return Err(Error::Reconstruction(String::from("continued fraction too deep")));
    }
    let a = ln / ld;
    if a * ld == ln {
        return Ok((a, 1));
    }
    let next = a + 1;
    if next.checked_mul(hd).ok_or(Error::Overflow)? <= hn {
        return Ok((next, 1));
    }
    // a < lo <= hi < a + 1: recurse on the reciprocals of the fractional parts.
    let (n, d) = simplest(hd, hn - a * hd, ld, ln - a * ld, depth + 1)?;
    Ok((a.checked_mul(n).and_then(|x| x.checked_add(d)).ok_or(Error::Overflow)?, n))
}

/// Finds the largest threshold `tau` with `feasible(tau)`, exactly.
///
/// `feasible` must be monotone (true on `[0, opt]`, false above) and the
/// optimum must be `+inf` or a ratio `c / s` with integer `c <= upper` and
/// `1 <= s <= total_importance`. Two such ratios differ by at least
/// `1 / total_importance^2`, so bisecting on a grid of width
/// `1 / (2 total_importance^2)` isolates the optimum, which is then recovered
/// as the simplest rational in the final cell.
pub fn max_feasible_threshold<F>(total_importance: u64, upper: u128, mut feasible: F) -> Result<Objective>
where
    F: FnMut(Ratio) -> Result<bool>,
{
    if total_importance == 0 {
        return Ok(Objective::Infinite);
    }
    let top = i128::try_from(upper).map_err(|_| Error::Overflow)?.checked_add(1).ok_or(Error::Overflow)?;
    if feasible(Ratio::from_integer(top))? {
        return Ok(Objective::Infinite);
    }
    let f = total_importance as i128;
    let grid = f.checked_mul(f).and_then(|x| x.checked_mul(2)).ok_or(Error::Overflow)?;
    let mut lo: i128 = 0;
    let mut hi: i128 = grid.checked_mul(top).ok_or(Error::Overflow)?;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(Ratio::new(mid, grid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = simplest_in_interval(Ratio::new(lo, grid), Ratio::new(lo + 1, grid))?;
    if *tau.denom() > f || !feasible(tau)? {
        return Err(Error::Reconstruction(format!("{}/{}", tau.numer(), tau.denom())));
    }
    Ok(Objective::Finite(tau))
}
