//! Exact rational parameters and growth specifications.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational parameter strictly greater than 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alpha(Ratio<u64>);

impl Alpha {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer <= denom {
            return Err(Error::InvalidAlpha(format!("{numer}/{denom}")));
        }
        Ok(Alpha(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `a < α·b`.
    pub fn lt_times(&self, a: u64, b: u64) -> bool {
        (a as u128) * (self.denom() as u128) < (self.numer() as u128) * (b as u128)
    }

    /// `a ≤ α·b`.
    pub fn le_times(&self, a: u64, b: u64) -> bool {
        (a as u128) * (self.denom() as u128) <= (self.numer() as u128) * (b as u128)
    }

    /// `a ≥ α·b`.
    pub fn ge_times(&self, a: u64, b: u64) -> bool {
        !self.lt_times(a, b)
    }

    /// `a > α·b`.
    pub fn gt_times(&self, a: u64, b: u64) -> bool {
        !self.le_times(a, b)
    }

    /// `min{α, 1 + 1/α, 1 + (α − 1)/α}`.
    pub fn alpha_star(&self) -> Alpha {
        let a = self.0;
        let one = Ratio::from_integer(1);
        let m = a.min(one + one / a).min(one + (a - one) / a);
        Alpha(m)
    }

    /// `min{α, 1 + 1/α}`.
    pub fn stack_base(&self) -> Alpha {
        let one = Ratio::from_integer(1);
        Alpha(self.0.min(one + one / self.0))
    }

    pub fn min(self, other: Alpha) -> Alpha {
        Alpha(self.0.min(other.0))
    }
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts `"1.62"`, `"5/4"` or `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAlpha(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Alpha::new(n, d).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || frac.len() > 18 {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let numer = int.checked_mul(denom).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        Alpha::new(numer, denom).map_err(|_| bad())
    }
}

impl fmt::Display for Alpha {
    /// Decimal when the denominator is of the form 2^a·5^b, `n/d` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        let mut k = 0u32;
        let mut p = 1u64;
        while k <= 18 {
            if p % d == 0 {
                let scaled = n as u128 * (p / d) as u128;
                let int = scaled / p as u128;
                let frac = scaled % p as u128;
                if k == 0 {
                    return write!(f, "{int}");
                }
                let digits = format!("{:0width$}", frac, width = k as usize);
                return write!(f, "{int}.{}", digits.trim_end_matches('0'));
            }
            p = p.saturating_mul(10);
            k += 1;
        }
        write!(f, "{n}/{d}")
    }
}

impl Serialize for Alpha {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `β = base^(1/root)` with a rational base above 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Beta {
    pub base: Alpha,
    pub root: u32,
}

impl Beta {
    pub fn new(base: Alpha, root: u32) -> Self {
        assert!(root >= 1);
        Beta { base, root }
    }

    pub fn to_f64(&self) -> f64 {
        self.base.to_f64().powf(1.0 / self.root as f64)
    }

    /// Exact test of `r ≥ β^h`, i.e. `r^root · den^h ≥ num^h`.
    pub fn admits(&self, r: u64, h: u32) -> bool {
        let lhs = BigUint::from(r).pow(self.root) * BigUint::from(self.base.denom()).pow(h);
        lhs >= BigUint::from(self.base.numer()).pow(h)
    }

    /// `⌈β^h⌉` for `h = 0..=max_h`, saturating at `u64::MAX`.
    pub fn thresholds(&self, max_h: u32) -> Vec<u64> {
        (0..=max_h)
            .map(|h| {
                let guess = self.to_f64().powi(h as i32);
                if !guess.is_finite() || guess >= 1.8e19 {
                    return u64::MAX;
                }
                let mut r = (guess.floor() as u64).saturating_sub(1).max(1);
                while r > 1 && self.admits(r - 1, h) {
                    r -= 1;
                }
                while !self.admits(r, h) {
                    r += 1;
                }
                r
            })
            .collect()
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "({})^(1/{})", self.base, self.root)
        }
    }
}

/// One growth property of a merge tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GrowthSpec {
    /// The `ell`-th ancestor of every node is at least `alpha` times longer.
    Fast { ell: u32, alpha: Alpha },
    /// Every node of height h has length at least `β^h`.
    Middle { beta: Beta },
    /// Every node of height h has length at least `2^(h − γ)`.
    Tight { gamma: u32 },
}

impl GrowthSpec {
    pub fn fast(ell: u32, alpha: Alpha) -> Self {
        assert!(ell >= 1);
        GrowthSpec::Fast { ell, alpha }
    }

    /// The middle-growth constant implied by a fast-growth one,
    /// `β = min{2, α}^(1/ℓ)`.
    pub fn implied_middle(&self) -> Option<GrowthSpec> {
        match *self {
            GrowthSpec::Fast { ell, alpha } => Some(GrowthSpec::Middle {
                beta: Beta::new(alpha.min(Alpha::new(2, 1).unwrap()), ell),
            }),
            _ => None,
        }
    }
}

impl fmt::Display for GrowthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthSpec::Fast { ell, alpha } => write!(f, "fast({ell}, {alpha})"),
            GrowthSpec::Middle { beta } => write!(f, "middle({beta})"),
            GrowthSpec::Tight { gamma } => write!(f, "tight({gamma})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let a: Alpha = "1.62".parse().unwrap();
        assert_eq!((a.numer(), a.denom()), (81, 50));
        assert_eq!(a.to_string(), "1.62");
        assert_eq!("5/4".parse::<Alpha>().unwrap().to_string(), "1.25");
        assert_eq!("2".parse::<Alpha>().unwrap().to_string(), "2");
        assert_eq!(Alpha::new(7, 6).unwrap().to_string(), "7/6");
        for bad in ["1", "0.5", "abc", "", "1/0", "-2", "1.2.3"] {
            assert!(bad.parse::<Alpha>().is_err(), "{bad}");
        }
    }

    #[test]
    fn rational_comparisons() {
        let a = Alpha::new(3, 2).unwrap();
        assert!(a.lt_times(6, 5));
        assert!(!a.lt_times(15, 10));
        assert!(a.le_times(15, 10));
    }

    #[test]
    fn alpha_star_values() {
        let s = |x: &str| x.parse::<Alpha>().unwrap().alpha_star();
        assert_eq!(s("1.2"), Alpha::new(7, 6).unwrap());
        assert_eq!(s("2"), Alpha::new(3, 2).unwrap());
        assert_eq!(s("1.5"), Alpha::new(4, 3).unwrap());
        let b = "3".parse::<Alpha>().unwrap().stack_base();
        assert_eq!(b, Alpha::new(4, 3).unwrap());
    }

    #[test]
    fn beta_thresholds_are_exact() {
        let beta = Beta::new(Alpha::new(2, 1).unwrap(), 5);
        let th = beta.thresholds(30);
        for (h, &t) in th.iter().enumerate() {
            assert!(beta.admits(t, h as u32));
            assert!(t == 1 || !beta.admits(t - 1, h as u32));
        }
        assert_eq!(th[0], 1);
        assert_eq!(th[5], 2);
        assert_eq!(th[10], 4);
        assert_eq!(th[6], 3);
    }
}
