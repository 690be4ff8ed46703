use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use alloc::format;

use crate::Error;

/// A code rate kept as an exact, reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rate {
    num: u64,
    den: u64,
}

const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rate {
    /// Builds `num/den` in lowest terms. Panics when `den` is zero.
    pub const fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "rate denominator must be non-zero");
        let g = gcd(num, den);
        let g = if g == 0 { 1 } else { g };
        Rate {
            num: num / g,
            den: den / g,
        }
    }

    pub const fn numer(&self) -> u64 {
        self.num
    }

    pub const fn denom(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// True for rates strictly between 0 and 1.
    pub fn is_proper(&self) -> bool {
        self.num > 0 && self.num < self.den
    }
}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `p/q` or a plain decimal such as `0.75`.
impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidInput(format!("cannot parse rate {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Rate::new(p, q));
        }
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        Ok(Rate::new(whole * den + frac, den))
    }
}
