//! Square classes in `Q_p*` (p odd) and `R*`, their mod-2 cup products, and
//! the local value of δ2.
//!
//! `Q_p*/(Q_p*)²` is written in the basis `{u, 𝔭}` where `u` is the
//! smallest positive non-residue and `𝔭 = p`. The cup product lands in
//! `Br(Q_p)[2] = {0, 1/2}`, recorded as a [`LocalInvariant`] bit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::arith::{self, OddPrime, RationalNZ};
use crate::error::{Error, Result};

/// An odd prime or the real place. The prime 2 is never a place here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Odd(OddPrime),
    Real,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Odd(p) => p.fmt(f),
            Place::Real => f.write_str("R"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "R" || s == "r" {
            return Ok(Place::Real);
        }
        let p: BigUint = s
            .parse()
            .map_err(|_| Error::Parse(format!("expected a prime or R, got {s:?}")))?;
        if p == BigUint::from(2u32) {
            return Err(Error::UnsupportedPlace("the place 2 is handled by reciprocity".into()));
        }
        Ok(Place::Odd(OddPrime::new(p)?))
    }
}

/// An element of `{0, 1/2} ⊂ Q/Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LocalInvariant {
    pub half: bool,
}

impl LocalInvariant {
    pub const ZERO: Self = Self { half: false };
    pub const HALF: Self = Self { half: true };

    pub fn is_zero(self) -> bool {
        !self.half
    }

    pub fn bit(self) -> u8 {
        self.half as u8
    }
}

/// Addition in `Q/Z` restricted to `{0, 1/2}`.
impl std::ops::Add for LocalInvariant {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        Self { half: self.half ^ rhs.half }
    }
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.half { "1/2" } else { "0" })
    }
}

/// `u^{e_u} 𝔭^{e_p}` modulo squares in `Q_p*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalSquareClass {
    pub p: OddPrime,
    pub e_u: bool,
    pub e_p: bool,
}

impl LocalSquareClass {
    pub fn trivial(p: &OddPrime) -> Self {
        Self { p: p.clone(), e_u: false, e_p: false }
    }

    pub fn is_trivial(&self) -> bool {
        !self.e_u && !self.e_p
    }

    /// Group law (bitwise XOR).
    pub fn plus(&self, other: &Self) -> Result<Self> {
        same_prime(self, other)?;
        Ok(Self { p: self.p.clone(), e_u: self.e_u ^ other.e_u, e_p: self.e_p ^ other.e_p })
    }
}

impl fmt::Display for LocalSquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.e_u, self.e_p) {
            (false, false) => f.write_str("1"),
            (true, false) => f.write_str("u"),
            (false, true) => f.write_str("p"),
            (true, true) => f.write_str("u·p"),
        }
    }
}

fn same_prime(c1: &LocalSquareClass, c2: &LocalSquareClass) -> Result<()> {
    if c1.p != c2.p {
        return Err(Error::Domain(format!("square classes at {} and {}", c1.p, c2.p)));
    }
    Ok(())
}

/// Sign of a nonzero real modulo squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RealSquareClass {
    pub negative: bool,
}

pub fn square_class_qp(x: &RationalNZ, p: &OddPrime) -> LocalSquareClass {
    let (v, w) = arith::unit_residue(x, p.get());
    let e_u = arith::legendre_unchecked(&arith::to_bigint(&w), p.get()) == -1;
    LocalSquareClass { p: p.clone(), e_u, e_p: v.rem_euclid(2) == 1 }
}

/// Class of the canonical square root of a local square `x`.
pub fn sqrt_square_class_qp(x: &RationalNZ, p: &OddPrime) -> Result<LocalSquareClass> {
    let (v, w) = arith::unit_residue(x, p.get());
    let root = match arith::sqrt_mod_unchecked(&arith::to_bigint(&w), p.get()) {
        Some(r) if v % 2 == 0 => r,
        _ => return Err(Error::NotASquare(format!("{x} in Q_{p}"))),
    };
    Ok(LocalSquareClass {
        p: p.clone(),
        e_u: arith::legendre_unchecked(&arith::to_bigint(&root), p.get()) == -1,
        e_p: (v / 2).rem_euclid(2) == 1,
    })
}

pub fn is_local_square(x: &RationalNZ, p: &OddPrime) -> bool {
    square_class_qp(x, p).is_trivial()
}

/// Class of `-1`: `u` when `p ≡ 3 mod 4`, trivial otherwise.
pub fn class_of_minus_one(p: &OddPrime) -> LocalSquareClass {
    LocalSquareClass { p: p.clone(), e_u: p.residue(4) == 3, e_p: false }
}

/// Class of `2`: `u` when `p ≡ ±3 mod 8`, trivial otherwise.
pub fn class_of_two(p: &OddPrime) -> LocalSquareClass {
    let r = p.residue(8);
    LocalSquareClass { p: p.clone(), e_u: r == 3 || r == 5, e_p: false }
}

/// Mod-2 cup product on `H¹(Q_p, Z/2)`, extended bilinearly from
/// `u∪u = 0`, `u∪𝔭 = 𝔭∪u = 1/2`, `𝔭∪𝔭 = {-1}∪𝔭`.
pub fn cup_qp(c1: &LocalSquareClass, c2: &LocalSquareClass) -> Result<LocalInvariant> {
    same_prime(c1, c2)?;
    let pp = c1.p.residue(4) == 3;
    let half = (c1.e_u && c2.e_p) ^ (c1.e_p && c2.e_u) ^ (c1.e_p && c2.e_p && pp);
    Ok(LocalInvariant { half })
}

pub fn square_class_r(x: &RationalNZ) -> RealSquareClass {
    RealSquareClass { negative: x.is_negative() }
}

pub fn cup_r(c1: RealSquareClass, c2: RealSquareClass) -> LocalInvariant {
    LocalInvariant { half: c1.negative && c2.negative }
}

/// Local invariant of `{b} ∪ {a}` at the given place.
pub fn delta2_local(b: &RationalNZ, a: &RationalNZ, place: &Place) -> LocalInvariant {
    match place {
        Place::Odd(p) => cup_qp(&square_class_qp(b, p), &square_class_qp(a, p))
            .expect("classes computed at the same prime"),
        Place::Real => cup_r(square_class_r(b), square_class_r(a)),
    }
}

/// Convenience for callers holding a plain prime.
pub fn odd_place(p: u64) -> Result<Place> {
    Ok(Place::Odd(OddPrime::from_u64(p)?))
}

#[cfg(test)]
pub(crate) fn rational(n: i64) -> RationalNZ {
    RationalNZ::from_int(num_bigint::BigInt::from(n)).expect("nonzero literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::from_u64(n).unwrap()
    }

    fn class(e_u: bool, e_p: bool, q: u64) -> LocalSquareClass {
        LocalSquareClass { p: p(q), e_u, e_p }
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_class_qp(&rational(5), &p(5)), class(false, true, 5));
        assert_eq!(square_class_qp(&rational(1), &p(5)), class(false, false, 5));
        assert_eq!(square_class_qp(&rational(-1), &p(5)), class(false, false, 5));
        assert_eq!(square_class_qp(&rational(-1), &p(7)), class(true, false, 7));
    }

    #[test]
    fn sqrt_class_examples() {
        assert_eq!(sqrt_square_class_qp(&rational(25), &p(5)), Ok(class(false, true, 5)));
        assert_eq!(sqrt_square_class_qp(&rational(4), &p(5)), Ok(class(true, false, 5)));
        assert_eq!(sqrt_square_class_qp(&rational(9), &p(7)), Ok(class(true, false, 7)));
        assert!(matches!(
            sqrt_square_class_qp(&rational(5), &p(5)),
            Err(Error::NotASquare(_))
        ));
    }

    #[test]
    fn cup_table() {
        let u = class(true, false, 5);
        let pi = class(false, true, 5);
        assert_eq!(cup_qp(&u, &pi), Ok(LocalInvariant::HALF));
        assert_eq!(cup_qp(&u, &u), Ok(LocalInvariant::ZERO));
        assert_eq!(cup_qp(&pi, &pi), Ok(LocalInvariant::ZERO));
        let pi7 = class(false, true, 7);
        assert_eq!(cup_qp(&pi7, &pi7), Ok(LocalInvariant::HALF));
        assert!(matches!(cup_qp(&u, &pi7), Err(Error::Domain(_))));
    }

    #[test]
    fn cup_symmetric_and_minus_one_rule() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
            let all: Vec<_> = (0..4).map(|i| class(i & 1 == 1, i & 2 == 2, q)).collect();
            for c1 in &all {
                for c2 in &all {
                    assert_eq!(cup_qp(c1, c2), cup_qp(c2, c1));
                }
                // 𝔭∪𝔭 = {-1}∪𝔭 extends to x∪x = {-1}∪x for every class.
                assert_eq!(cup_qp(c1, c1), cup_qp(&class_of_minus_one(&p(q)), c1));
            }
        }
    }

    #[test]
    fn real_cup() {
        let neg = RealSquareClass { negative: true };
        let pos = RealSquareClass { negative: false };
        assert_eq!(cup_r(neg, neg), LocalInvariant::HALF);
        assert_eq!(cup_r(neg, pos), LocalInvariant::ZERO);
        assert_eq!(cup_r(pos, pos), LocalInvariant::ZERO);
        assert!(square_class_r(&rational(-3)).negative);
        assert!(!square_class_r(&rational(3)).negative);
    }

    #[test]
    fn delta2_local_examples() {
        let five = odd_place(5).unwrap();
        assert_eq!(delta2_local(&rational(-1), &rational(5), &five), LocalInvariant::ZERO);
        // u = 2 at 5; (u·y², p·x²) with y = 3/7, x = 4.
        let b = &rational(2) * &RationalNZ::from_ratio(9, 49).unwrap();
        let a = &rational(5) * &rational(16);
        assert_eq!(delta2_local(&b, &a, &five), LocalInvariant::HALF);
        assert_eq!(delta2_local(&rational(3), &rational(-7), &five), LocalInvariant::ZERO);
    }

    #[test]
    fn classes_of_two_and_minus_one_match_legendre() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(class_of_two(&p(q)), square_class_qp(&rational(2), &p(q)));
            assert_eq!(class_of_minus_one(&p(q)), square_class_qp(&rational(-1), &p(q)));
        }
    }

    #[test]
    fn place_parsing() {
        assert_eq!("R".parse::<Place>(), Ok(Place::Real));
        assert_eq!("7".parse::<Place>(), Ok(odd_place(7).unwrap()));
        assert!(matches!("2".parse::<Place>(), Err(Error::UnsupportedPlace(_))));
        assert!(matches!("9".parse::<Place>(), Err(Error::InvalidPrime(_))));
    }
}
