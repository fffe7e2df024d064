//! Exact positive rationals over `u128` with checked arithmetic, prime
//! factorization over {2, 3, 5} and prime-limit (smoothness) tests.
//!
//! Every [`Ratio`] is kept in lowest terms, so the derived `Eq` and `Hash`
//! agree with the rational value. Arithmetic never wraps: any intermediate
//! that does not fit in 128 bits yields [`Error::Overflow`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction of two strictly positive integers.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };
    pub const TWO: Ratio = Ratio { num: 2, den: 1 };
    /// The diapente, 3:2.
    pub const FIFTH: Ratio = Ratio { num: 3, den: 2 };
    /// The diatessaron, 4:3.
    pub const FOURTH: Ratio = Ratio { num: 4, den: 3 };

    /// Builds `num/den` in lowest terms.
    pub fn new(num: u128, den: u128) -> Result<Ratio> {
        if num == 0 || den == 0 {
            return Err(Error::NonPositive {
                num: num.min(i128::MAX as u128) as i128,
                den: den.min(i128::MAX as u128) as i128,
            });
        }
        let g = num.gcd(&den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    /// Signed entry point: rejects zero and negative parts.
    pub fn from_signed(num: i128, den: i128) -> Result<Ratio> {
        if num <= 0 || den <= 0 {
            return Err(Error::NonPositive { num, den });
        }
        Ratio::new(num as u128, den as u128)
    }

    pub fn integer(n: u128) -> Result<Ratio> {
        Ratio::new(n, 1)
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn recip(&self) -> Ratio {
        Ratio {
            num: self.den,
            den: self.num,
        }
    }

    pub fn checked_mul(&self, rhs: &Ratio) -> Result<Ratio> {
        // Cross-cancel first so that products of reduced inputs stay small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = (self.num / g1).checked_mul(rhs.num / g2).ok_or(Error::Overflow)?;
        let den = (self.den / g2).checked_mul(rhs.den / g1).ok_or(Error::Overflow)?;
        Ok(Ratio { num, den })
    }

    pub fn checked_div(&self, rhs: &Ratio) -> Result<Ratio> {
        self.checked_mul(&rhs.recip())
    }

    pub fn checked_add(&self, rhs: &Ratio) -> Result<Ratio> {
        let g = self.den.gcd(&rhs.den);
        let left = self.num.checked_mul(rhs.den / g).ok_or(Error::Overflow)?;
        let right = rhs.num.checked_mul(self.den / g).ok_or(Error::Overflow)?;
        let num = left.checked_add(right).ok_or(Error::Overflow)?;
        let den = (self.den / g).checked_mul(rhs.den).ok_or(Error::Overflow)?;
        Ratio::new(num, den)
    }

    /// Integer power; negative exponents invert.
    pub fn checked_pow(&self, exp: i32) -> Result<Ratio> {
        let base = if exp < 0 { self.recip() } else { *self };
        let e = exp.unsigned_abs();
        let num = base.num.checked_pow(e).ok_or(Error::Overflow)?;
        let den = base.den.checked_pow(e).ok_or(Error::Overflow)?;
        Ok(Ratio { num, den })
    }

    /// Multiplies by `2^k` (any sign of `k`).
    pub fn scale_by_pow2(&self, k: i32) -> Result<Ratio> {
        self.checked_mul(&Ratio::TWO.checked_pow(k)?)
    }

    /// `max(self, other) / min(self, other)`, always ≥ 1.
    pub fn distance(&self, other: &Ratio) -> Result<Ratio> {
        if self >= other {
            self.checked_div(other)
        } else {
            other.checked_div(self)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Size in cents, `1200 · log2(self)`.
    pub fn cents(&self) -> f64 {
        1200.0 * ((self.num as f64).log2() - (self.den as f64).log2())
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        // Continued-fraction comparison: never multiplies, so it cannot overflow.
        let (mut a, mut b, mut c, mut d) = (self.num, self.den, other.num, other.den);
        let mut flipped = false;
        loop {
            let (q1, r1) = a.div_rem(&b);
            let (q2, r2) = c.div_rem(&d);
            let ord = match q1.cmp(&q2) {
                Ordering::Equal => match (r1 == 0, r2 == 0) {
                    (true, true) => Ordering::Equal,
                    (true, false) => Ordering::Less,
                    (false, true) => Ordering::Greater,
                    (false, false) => {
                        // Compare the fractional parts r1/b and r2/d through their reciprocals.
                        (a, b, c, d) = (b, r1, d, r2);
                        flipped = !flipped;
                        continue;
                    }
                },
                ord => ord,
            };
            return if flipped { ord.reverse() } else { ord };
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `num/den`, `num:den` and bare integers.
    fn from_str(s: &str) -> Result<Ratio> {
        let bad = || Error::Parse(s.to_string());
        let text = s.trim();
        let (n, d) = match text.split_once(['/', ':']) {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: i128 = n.parse().map_err(|_| bad())?;
        let den: i128 = d.parse().map_err(|_| bad())?;
        Ratio::from_signed(num, den)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for literal ratios known to be valid.
///
/// # Panics
/// If either part is zero.
pub fn r(num: u128, den: u128) -> Ratio {
    Ratio::new(num, den).expect("literal ratio with zero part")
}

pub fn make_ratio(num: i128, den: i128) -> Result<Ratio> {
    Ratio::from_signed(num, den)
}

/// Exponents of a ratio over 2, 3 and 5, plus whatever is left over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorization {
    pub exp2: i32,
    pub exp3: i32,
    pub exp5: i32,
    /// Coprime to 2, 3 and 5 in both numerator and denominator.
    pub residual: Ratio,
}

impl Factorization {
    pub fn recompose(&self) -> Result<Ratio> {
        Ratio::TWO
            .checked_pow(self.exp2)?
            .checked_mul(&Ratio::integer(3)?.checked_pow(self.exp3)?)?
            .checked_mul(&Ratio::integer(5)?.checked_pow(self.exp5)?)?
            .checked_mul(&self.residual)
    }

    pub fn is_five_limit(&self) -> bool {
        self.residual == Ratio::ONE
    }
}

/// Removes every factor `p` from `n`, returning the multiplicity and the cofactor.
fn strip(mut n: u128, p: u128) -> (i32, u128) {
    let mut count = 0;
    while n.is_multiple_of(p) {
        n /= p;
        count += 1;
    }
    (count, n)
}

pub fn factorize(r: &Ratio) -> Factorization {
    let (n2, num) = strip(r.num, 2);
    let (n3, num) = strip(num, 3);
    let (n5, num) = strip(num, 5);
    let (d2, den) = strip(r.den, 2);
    let (d3, den) = strip(den, 3);
    let (d5, den) = strip(den, 5);
    Factorization {
        exp2: n2 - d2,
        exp3: n3 - d3,
        exp5: n5 - d5,
        // Already coprime: both came from a reduced ratio.
        residual: Ratio { num, den },
    }
}

/// A prime limit: the set of primes a tone may be built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    primes: BTreeSet<u32>,
}

impl Restriction {
    pub fn new<I: IntoIterator<Item = u32>>(primes: I) -> Result<Restriction> {
        let primes: BTreeSet<u32> = primes.into_iter().collect();
        if primes.is_empty() {
            return Err(Error::InvalidRestriction("no primes given".into()));
        }
        if !primes.contains(&2) {
            return Err(Error::InvalidRestriction("2 must always be allowed".into()));
        }
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidRestriction(format!("{p} is not prime")));
        }
        Ok(Restriction { primes })
    }

    /// {2, 3}: the Pythagorean universe.
    pub fn pythagorean() -> Restriction {
        Restriction { primes: [2, 3].into() }
    }

    /// {2, 3, 5}: the natural universe.
    pub fn natural() -> Restriction {
        Restriction {
            primes: [2, 3, 5].into(),
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u32> + '_ {
        self.primes.iter().copied()
    }

    pub fn allows(&self, p: u32) -> bool {
        self.primes.contains(&p)
    }

    fn strip_all(&self, n: u128) -> u128 {
        self.primes.iter().fold(n, |acc, &p| strip(acc, u128::from(p)).1)
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.primes.iter().map(u32::to_string).collect();
        write!(f, "({})", list.join(","))
    }
}

impl FromStr for Restriction {
    type Err = Error;

    /// Comma-separated primes, e.g. `2,3,5`; surrounding parentheses are tolerated.
    fn from_str(s: &str) -> Result<Restriction> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let primes = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidRestriction(format!("{:?} is not an integer", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Restriction::new(primes)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// True iff both parts of `r` factor entirely over the restriction's primes.
pub fn is_smooth(r: &Ratio, restriction: &Restriction) -> bool {
    restriction.strip_all(r.num) == 1 && restriction.strip_all(r.den) == 1
}

/// The rational square root of `r`, when one exists.
pub fn exact_sqrt(r: &Ratio) -> Option<Ratio> {
    // A reduced ratio is a rational square iff both parts are perfect squares.
    let sn = r.num.sqrt();
    let sd = r.den.sqrt();
    (sn * sn == r.num && sd * sd == r.den).then_some(Ratio { num: sn, den: sd })
}
