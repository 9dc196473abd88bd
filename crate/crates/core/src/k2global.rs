//! Global δ2 over Q through Milnor K2: tame symbols at odd primes, the
//! symbol at 2, and the reciprocity check tying them to local invariants.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::arith::{self, OddPrime, RationalNZ};
use crate::localclass::{delta2_local, LocalInvariant, Place};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TameSymbolValue {
    /// A unit residue in `[1, p)`.
    Odd { p: OddPrime, value: BigUint },
    /// `±1`.
    Two { sign: i8 },
}

impl TameSymbolValue {
    pub fn is_trivial(&self) -> bool {
        match self {
            TameSymbolValue::Odd { value, .. } => value.is_one(),
            TameSymbolValue::Two { sign } => *sign == 1,
        }
    }

    pub fn place_label(&self) -> String {
        match self {
            TameSymbolValue::Odd { p, .. } => p.to_string(),
            TameSymbolValue::Two { .. } => "2".into(),
        }
    }

    pub fn value_label(&self) -> String {
        match self {
            TameSymbolValue::Odd { value, .. } => value.to_string(),
            TameSymbolValue::Two { sign } => sign.to_string(),
        }
    }
}

impl fmt::Display for TameSymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})_{}", self.value_label(), self.place_label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta2GlobalVerdict {
    pub zero: bool,
    pub witnesses: Vec<TameSymbolValue>,
}

/// `(b,a)_p = (-1)^{v(b)v(a)} b^{v(a)} a^{-v(b)} mod p`.
pub fn tame_symbol_odd(b: &RationalNZ, a: &RationalNZ, p: &OddPrime) -> TameSymbolValue {
    let pp = p.get();
    let (vb, beta) = arith::unit_residue(b, pp);
    let (va, alpha) = arith::unit_residue(a, pp);
    let pow = |base: &BigUint, e: i64| -> BigUint {
        let r = base.modpow(&BigUint::from(e.unsigned_abs()), pp);
        if e < 0 {
            r.modinv(pp).expect("unit residue")
        } else {
            r
        }
    };
    let mut value = (pow(&beta, va) * pow(&alpha, -vb)) % pp;
    if (vb * va).is_odd() {
        value = pp - value;
    }
    TameSymbolValue::Odd { p: p.clone(), value }
}

/// `x = (-1)^i 2^j 5^k u` with `u ≡ 1 mod 8`; returns `(i, j, k)`.
pub fn decompose_2adic(x: &RationalNZ) -> (bool, i64, bool) {
    let two = BigUint::from(2u32);
    let (vn, n) = arith::split_valuation(x.numer().magnitude(), &two);
    let (vd, d) = arith::split_valuation(x.denom().magnitude(), &two);
    // Odd d is its own inverse mod 8.
    let mut r = ((n % 8u32) * (d % 8u32) % 8u32).to_u32().expect("small");
    if x.is_negative() {
        r = (8 - r) % 8;
    }
    let (i, k) = match r {
        1 => (false, false),
        5 => (false, true),
        7 => (true, false),
        3 => (true, true),
        _ => unreachable!("odd residue"),
    };
    (i, vn - vd, k)
}

/// `(b,a)_2 = (-1)^{iI + jK + kJ}`.
pub fn symbol_at_2(b: &RationalNZ, a: &RationalNZ) -> TameSymbolValue {
    let (i, j, k) = decompose_2adic(b);
    let (ii, jj, kk) = decompose_2adic(a);
    let odd = (i && ii) ^ (j.is_odd() && kk) ^ (k && jj.is_odd());
    TameSymbolValue::Two { sign: if odd { -1 } else { 1 } }
}

/// Odd primes dividing the numerator or denominator of `b` or of `a`,
/// ascending.
pub fn odd_support(b: &RationalNZ, a: &RationalNZ) -> Vec<OddPrime> {
    let mut primes = BTreeSet::new();
    for x in [b, a] {
        for n in [x.numer().magnitude(), x.denom().magnitude()] {
            for (p, _) in arith::factor_natural(n) {
                if p.is_odd() {
                    primes.insert(p);
                }
            }
        }
    }
    primes
        .into_iter()
        .map(|p| OddPrime::new(p).expect("factor_natural returns primes"))
        .collect()
}

/// `δ2(b,a) = 0` iff `b ⊗ a` vanishes in `K2(Q)`.
pub fn delta2_global(b: &RationalNZ, a: &RationalNZ) -> Delta2GlobalVerdict {
    let mut witnesses: Vec<_> = odd_support(b, a)
        .iter()
        .map(|p| tame_symbol_odd(b, a, p))
        .filter(|s| !s.is_trivial())
        .collect();
    let s2 = symbol_at_2(b, a);
    if !s2.is_trivial() {
        witnesses.push(s2);
    }
    Delta2GlobalVerdict { zero: witnesses.is_empty(), witnesses }
}

/// Sum of the local invariants of `{b}∪{a}` over odd places and R.
pub fn odd_and_real_invariant_sum(b: &RationalNZ, a: &RationalNZ) -> LocalInvariant {
    odd_support(b, a)
        .into_iter()
        .map(Place::Odd)
        .chain(std::iter::once(Place::Real))
        .map(|v| delta2_local(b, a, &v))
        .fold(LocalInvariant::ZERO, |acc, x| acc + x)
}

/// Whether the invariants away from 2 sum to the invariant at 2, as global
/// reciprocity demands.
pub fn reciprocity_holds(b: &RationalNZ, a: &RationalNZ) -> bool {
    odd_and_real_invariant_sum(b, a).half == !symbol_at_2(b, a).is_trivial()
}

/// The mod-2 layer: `{b}∪{a} = 0` in `H²(G_Q, Z/2)` iff every local
/// invariant vanishes, including the one at 2.
pub fn delta2_mod2_global_zero(b: &RationalNZ, a: &RationalNZ) -> bool {
    symbol_at_2(b, a).is_trivial()
        && odd_support(b, a)
            .into_iter()
            .map(Place::Odd)
            .chain(std::iter::once(Place::Real))
            .all(|v| delta2_local(b, a, &v).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localclass::rational;
    use num_bigint::BigInt;

    fn p(n: u64) -> OddPrime {
        OddPrime::from_u64(n).unwrap()
    }

    /// Evaluates the displayed formula over Q and then finds the residue by
    /// exhaustive search.
    fn brute_force(b: &RationalNZ, a: &RationalNZ, q: u64) -> u64 {
        let pb = BigUint::from(q);
        let vb = arith::valuation(b, &pb);
        let va = arith::valuation(a, &pb);
        let mut x = &b.pow(va as i32) * &a.pow(-vb as i32);
        if (vb * va) % 2 != 0 {
            x = -x;
        }
        let m = BigInt::from(q);
        let num = x.numer().mod_floor(&m);
        let den = x.denom().mod_floor(&m);
        (1..q)
            .find(|r| (BigInt::from(*r) * &den - &num).mod_floor(&m) == BigInt::from(0))
            .expect("p-unit")
    }

    #[test]
    fn tame_symbol_examples() {
        for q in [3u64, 5, 7, 11, 13] {
            let s = tame_symbol_odd(&rational(q as i64), &rational(-(q as i64)), &p(q));
            assert!(s.is_trivial());
        }
        assert!(tame_symbol_odd(&rational(6), &rational(-14), &p(5)).is_trivial());
        let s = tame_symbol_odd(&rational(5), &rational(7), &p(5));
        assert_eq!(s.value_label(), "3");
        assert_eq!(brute_force(&rational(5), &rational(7), 5), 3);
    }

    #[test]
    fn tame_symbol_matches_brute_force() {
        let xs = ["5", "-25/3", "7/125", "-10", "45/14", "2", "-1", "625/8"];
        for q in [3u64, 5, 7] {
            for sb in xs {
                for sa in xs {
                    let (b, a) = (sb.parse().unwrap(), sa.parse().unwrap());
                    let s = tame_symbol_odd(&b, &a, &p(q));
                    assert_eq!(s.value_label(), brute_force(&b, &a, q).to_string(), "{sb} {sa} {q}");
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose_2adic(&rational(5)), (false, 0, true));
        assert_eq!(decompose_2adic(&rational(-1)), (true, 0, false));
        assert_eq!(decompose_2adic(&rational(24)), (true, 3, true));
        assert_eq!(decompose_2adic(&"-3/16".parse().unwrap()), (false, -4, true));
    }

    #[test]
    fn symbol_at_2_examples() {
        for q in [3i64, 5, 7, 11, 13, 17, 19] {
            assert!(symbol_at_2(&rational(q), &rational(-q)).is_trivial());
        }
        assert!(symbol_at_2(&rational(1), &rational(-6)).is_trivial());
        assert_eq!(symbol_at_2(&rational(2), &rational(5)), TameSymbolValue::Two { sign: -1 });
        // The oracle: reciprocity with the invariant of {2}∪{5} at 5.
        assert!(reciprocity_holds(&rational(2), &rational(5)));
        assert_eq!(odd_and_real_invariant_sum(&rational(2), &rational(5)), LocalInvariant::HALF);
    }

    #[test]
    fn delta2_global_examples() {
        for q in [3i64, 5, 7, 11, 13] {
            assert!(delta2_global(&rational(q), &rational(-q)).zero);
        }
        // Zero only in the mod-2 layer: the tame symbol at 5 is -1 = 4.
        let v = delta2_global(&rational(-1), &rational(5));
        assert_eq!(v.witnesses, vec![TameSymbolValue::Odd { p: p(5), value: BigUint::from(4u32) }]);
        assert!(delta2_mod2_global_zero(&rational(-1), &rational(5)));
        let v = delta2_global(&rational(18), &rational(5));
        assert!(!v.zero);
        assert!(v.witnesses.iter().any(|w| w.place_label() == "5"));
    }

    #[test]
    fn cancelling_support_still_counts() {
        // ab = 1 but the symbol at 3 is -1.
        let v = delta2_global(&rational(3), &"1/3".parse().unwrap());
        assert!(!v.zero);
        assert_eq!(v.witnesses[0].place_label(), "3");
    }
}
