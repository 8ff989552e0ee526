//! Exact points of `V = R^r` representable as `a + b*alpha` per coordinate,
//! with `a`, `b` rational and `alpha` a fixed formal irrational.
//!
//! Only exact pair arithmetic is ever performed on `alpha`; no relations and
//! no real embedding. A point lies in `M = Q*Lambda` exactly when every
//! coordinate has a vanishing `alpha`-part.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().ok()?;
            let den: BigInt = d.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rat::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(num))
        }
    }
}

/// Formats a rational as `"a"` when integral, `"a/b"` otherwise (denominator
/// positive and reduced, as `BigRational` guarantees).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One exact coordinate: `rat + irr*alpha`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    pub rat: Rat,
    pub irr: Rat,
}

impl Scalar {
    pub fn from_rat(rat: Rat) -> Self {
        Scalar {
            rat,
            irr: Rat::zero(),
        }
    }

    pub fn new(rat: Rat, irr: Rat) -> Self {
        Scalar { rat, irr }
    }

    pub fn zero() -> Self {
        Scalar {
            rat: Rat::zero(),
            irr: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// In `Q` iff the alpha-part vanishes.
    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Scalar {
            rat: &self.rat * c,
            irr: &self.irr * c,
        }
    }
}

impl std::ops::Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat + &rhs.rat,
            irr: &self.irr + &rhs.irr,
        }
    }
}

impl std::ops::Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            rat: &self.rat - &rhs.rat,
            irr: &self.irr - &rhs.irr,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", rat_to_string(&self.rat))
        } else if self.rat.is_zero() {
            write!(f, "{}a", rat_to_string(&self.irr))
        } else if self.irr.is_negative() {
            write!(
                f,
                "{}{}a",
                rat_to_string(&self.rat),
                rat_to_string(&self.irr)
            )
        } else {
            write!(
                f,
                "{}+{}a",
                rat_to_string(&self.rat),
                rat_to_string(&self.irr)
            )
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point of `V`, exact coordinates of fixed rank.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point { coords }
    }

    /// Point with the given rational coordinates and no alpha-part.
    pub fn from_rats(rats: Vec<Rat>) -> Self {
        Point {
            coords: rats.into_iter().map(Scalar::from_rat).collect(),
        }
    }

    /// Convenience constructor from integer numerator/denominator pairs.
    pub fn from_fracs(parts: &[(i64, i64)]) -> Self {
        Point::from_rats(
            parts
                .iter()
                .map(|&(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    pub fn zero(rank: usize) -> Self {
        Point {
            coords: vec![Scalar::zero(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// In `M = Q*Lambda` iff every coordinate has zero alpha-part.
    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(Scalar::is_rational)
    }

    pub fn rat_coords(&self) -> Vec<Rat> {
        self.coords.iter().map(|s| s.rat.clone()).collect()
    }

    pub fn irr_coords(&self) -> Vec<Rat> {
        self.coords.iter().map(|s| s.irr.clone()).collect()
    }

    pub fn add(&self, rhs: &Point) -> Point {
        assert_eq!(self.rank(), rhs.rank());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Point) -> Point {
        assert_eq!(self.rank(), rhs.rank());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Point {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Point {
        Point {
            coords: self.coords.iter().map(|s| s.scale(c)).collect(),
        }
    }

    /// `self * m` for an integer dilation factor.
    pub fn mul_int(&self, m: u32) -> Point {
        self.scale(&Rat::from_integer(BigInt::from(m)))
    }

    /// `self / m` for an integer dilation factor.
    pub fn div_int(&self, m: u32) -> Point {
        self.scale(&Rat::new(BigInt::one(), BigInt::from(m)))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
