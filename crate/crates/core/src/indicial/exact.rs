//! Exact arithmetic in `Q(√r)`: enough to compare the closed-form weights and
//! roots without rounding when the inputs are rational.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -q } else { q })
}

/// Serde adaptors writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).ok_or_else(|| de::Error::custom(format!("`{text}` is not a rational")))
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.collect_str(q),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            match Option::<String>::deserialize(d)? {
                Some(text) => super::super::parse_rational(&text)
                    .map(Some)
                    .ok_or_else(|| de::Error::custom(format!("`{text}` is not a rational"))),
                None => Ok(None),
            }
        }
    }
}

/// Square factors below this bound are moved out of radicands, which makes the
/// representation canonical for every radicand arising at desk scale.
const SQUARE_FREE_TRIAL_LIMIT: u64 = 100_000;

/// `p + q·√r` with `r >= 0`; `r` is kept a square-free integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "serde_rational")]
    pub p: BigRational,
    #[serde(with = "serde_rational")]
    pub q: BigRational,
    #[serde(with = "serde_rational")]
    pub r: BigRational,
}

impl Surd {
    pub fn rational(p: BigRational) -> Self {
        Self {
            p,
            q: BigRational::zero(),
            r: BigRational::zero(),
        }
    }

    /// Builds `p + q√r`, folding perfect-square radicands into `p`.
    pub fn new(p: BigRational, q: BigRational, r: BigRational) -> Self {
        assert!(!r.is_negative(), "negative radicand");
        if q.is_zero() || r.is_zero() {
            return Self::rational(p);
        }
        // √(n/d) = √(nd)/d, then pull square factors out of nd.
        let mut coeff = q / BigRational::from_integer(r.denom().clone());
        let mut rest = r.numer() * r.denom();
        let mut f = BigInt::from(2);
        let limit = BigInt::from(SQUARE_FREE_TRIAL_LIMIT);
        while &f * &f <= rest && f <= limit {
            let sq = &f * &f;
            while (&rest % &sq).is_zero() {
                rest /= &sq;
                coeff *= BigRational::from_integer(f.clone());
            }
            f += 1;
        }
        if rest.is_one() {
            return Self::rational(p + coeff);
        }
        if let Some(s) = rational_sqrt(&BigRational::from_integer(rest.clone())) {
            return Self::rational(p + coeff * s);
        }
        Self {
            p,
            q: coeff,
            r: BigRational::from_integer(rest),
        }
    }

    pub fn sqrt_of(r: BigRational) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), r)
    }

    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        if sq == Ordering::Equal || sp == sq {
            return if sp == Ordering::Equal { sq } else { sp };
        }
        if sp == Ordering::Equal {
            return sq;
        }
        // Opposite signs: compare p² with q²r.
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.r;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        self.sub_rational(x).signum()
    }

    pub fn add_rational(&self, x: &BigRational) -> Self {
        Self {
            p: &self.p + x,
            q: self.q.clone(),
            r: self.r.clone(),
        }
    }

    pub fn sub_rational(&self, x: &BigRational) -> Self {
        self.add_rational(&-x.clone())
    }

    pub fn neg(&self) -> Self {
        Self {
            p: -self.p.clone(),
            q: -self.q.clone(),
            r: self.r.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `self * self`, defined only for a rational or pure surd (where the square
    /// stays in `Q(√r)`).
    pub fn square(&self) -> Self {
        Self::new(
            &self.p * &self.p + &self.q * &self.q * &self.r,
            int(2) * &self.p * &self.q,
            self.r.clone(),
        )
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) + to_f64(&self.q) * to_f64(&self.r).sqrt()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.r != other.r && !self.is_rational() && !other.is_rational() {
            return None;
        }
        let r = if self.is_rational() { other.r.clone() } else { self.r.clone() };
        let diff = Surd::new(&self.p - &other.p, &self.q - &other.q, r);
        Some(diff.signum())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.p);
        }
        let sign = if self.q.is_negative() { "-" } else { "+" };
        let q = self.q.abs();
        let coeff = if q.is_one() { String::new() } else { format!("{q}*") };
        if self.p.is_zero() {
            let lead = if self.q.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}sqrt({})", self.r)
        } else {
            write!(f, "{} {sign} {coeff}sqrt({})", self.p, self.r)
        }
    }
}

/// The rational square root of `x`, if it exists.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
