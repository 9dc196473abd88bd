//! Exact integer and rational arithmetic: nonzero rationals, factorization,
//! primality, and residue symbols modulo odd primes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul, Neg};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonzero rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalNZ(BigRational);

impl RationalNZ {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        if num.is_zero() {
            return Err(Error::Zero);
        }
        Ok(Self(BigRational::new(num, den)))
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Result<Self> {
        Self::new(n.into(), BigInt::one())
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_big_rational(r: BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::Zero);
        }
        Ok(Self(r))
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        Self(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn pow(&self, e: i32) -> Self {
        Self(num_traits::Pow::pow(&self.0, e))
    }

    /// `1 - self`, which fails exactly when `self == 1`.
    pub fn one_minus(&self) -> Result<Self> {
        Self::from_big_rational(BigRational::one() - &self.0)
    }
}

impl Mul for &RationalNZ {
    type Output = RationalNZ;
    fn mul(self, rhs: &RationalNZ) -> RationalNZ {
        RationalNZ(&self.0 * &rhs.0)
    }
}

impl Mul for RationalNZ {
    type Output = RationalNZ;
    fn mul(self, rhs: RationalNZ) -> RationalNZ {
        RationalNZ(self.0 * rhs.0)
    }
}

impl Div for &RationalNZ {
    type Output = RationalNZ;
    fn div(self, rhs: &RationalNZ) -> RationalNZ {
        RationalNZ(&self.0 / &rhs.0)
    }
}

impl Neg for &RationalNZ {
    type Output = RationalNZ;
    fn neg(self) -> RationalNZ {
        RationalNZ(-&self.0)
    }
}

impl Neg for RationalNZ {
    type Output = RationalNZ;
    fn neg(self) -> RationalNZ {
        RationalNZ(-self.0)
    }
}

impl fmt::Display for RationalNZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for RationalNZ {
    type Err = Error;

    /// Accepts exactly `-?digits(/digits)?`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected -?digits(/digits)?, got {s:?}"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (n, d) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit());
        if !digits(n) || !d.is_none_or(digits) {
            return Err(bad());
        }
        let mut num: BigInt = n.parse().map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let den: BigInt = match d {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        Self::new(num, den)
    }
}

/// Signed prime factorization of a nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    /// Strictly increasing primes with nonzero exponents.
    pub factors: Vec<(BigUint, i64)>,
}

impl Factorization {
    pub fn exponent(&self, p: &BigUint) -> i64 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn reconstruct(&self) -> RationalNZ {
        let mut num = BigInt::from(self.sign);
        let mut den = BigInt::one();
        for (p, e) in &self.factors {
            let pe = BigInt::from(p.pow(e.unsigned_abs() as u32));
            if *e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        RationalNZ::new(num, den).expect("a factorization never reconstructs zero")
    }
}

pub fn factor(x: &RationalNZ) -> Factorization {
    let mut exps: BTreeMap<BigUint, i64> = BTreeMap::new();
    for (p, e) in factor_natural(x.numer().magnitude()) {
        *exps.entry(p).or_default() += e as i64;
    }
    for (p, e) in factor_natural(x.denom().magnitude()) {
        *exps.entry(p).or_default() -= e as i64;
    }
    Factorization {
        sign: if x.is_negative() { -1 } else { 1 },
        factors: exps.into_iter().filter(|(_, e)| *e != 0).collect(),
    }
}

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Prime factorization of a positive integer, primes ascending. `1` gives
/// the empty list.
pub fn factor_natural(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out: BTreeMap<BigUint, u32> = BTreeMap::new();
    if let Some(small) = n.to_u64() {
        factor_u64(small, &mut out);
    } else {
        let mut rem = n.clone();
        for &p in small_primes() {
            let pb = BigUint::from(p);
            if &pb * &pb > rem {
                break;
            }
            while (&rem % &pb).is_zero() {
                rem /= &pb;
                *out.entry(pb.clone()).or_default() += 1;
            }
        }
        if let Some(r) = rem.to_u64() {
            factor_u64(r, &mut out);
        } else if !rem.is_one() {
            split_big(rem, &mut out);
        }
    }
    out.into_iter().collect()
}

fn factor_u64(mut n: u64, out: &mut BTreeMap<BigUint, u32>) {
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        while n.is_multiple_of(p) {
            n /= p;
            *out.entry(BigUint::from(p)).or_default() += 1;
        }
    }
    if n > 1 {
        split_u64(n, out);
    }
}

/// `n` has no prime factor up to the trial limit (or is itself prime).
fn split_u64(n: u64, out: &mut BTreeMap<BigUint, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(BigUint::from(n)).or_default() += 1;
        return;
    }
    if let Some((r, k)) = perfect_power(&BigUint::from(n)) {
        let mut sub = BTreeMap::new();
        split_u64(r.to_u64().expect("root of a u64"), &mut sub);
        for (q, e) in sub {
            *out.entry(q).or_default() += e * k;
        }
        return;
    }
    let d = pollard_rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

fn split_big(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if let Some(small) = n.to_u64() {
        split_u64(small, out);
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_default() += 1;
        return;
    }
    if let Some((r, k)) = perfect_power(&n) {
        let mut sub = BTreeMap::new();
        split_big(r, &mut sub);
        for (q, e) in sub {
            *out.entry(q).or_default() += e * k;
        }
        return;
    }
    let d = pollard_rho_big(&n);
    let q = &n / &d;
    split_big(d, out);
    split_big(q, out);
}

/// Largest `k >= 2` with `n = r^k`, if any. Rho cannot split prime powers.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    (2..=bits).rev().find_map(|k| {
        let r = n.nth_root(k);
        (r.pow(k) == *n && r > BigUint::one()).then_some((r, k))
    })
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Bases that make Miller–Rabin deterministic below 3.3·10²⁴.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
/// Extra bases used above that bound.
const MR_EXTRA: [u64; 11] = [43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn is_prime_big_mr(n: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let bound: BigUint = "3317044064679887385961981".parse().unwrap();
    let extra: &[u64] = if *n >= bound { &MR_EXTRA } else { &[] };
    'outer: for &a in MR_BASES.iter().chain(extra) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    is_prime_big_mr(n)
}

/// Brent's variant; `n` must be odd and composite.
fn pollard_rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut r = 1u64;
        let mut q = 1u64;
        let mut ys = 2u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn pollard_rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        let mut x = BigUint::from(2u8);
        let mut y = x.clone();
        let mut g = one.clone();
        while g.is_one() {
            x = f(&x);
            y = f(&f(&y));
            g = diff(&x, &y).gcd(n);
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

/// An odd prime, validated once at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddPrime(BigUint);

impl OddPrime {
    pub fn new(p: BigUint) -> Result<Self> {
        check_odd_prime(&p)?;
        Ok(Self(p))
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p))
    }

    pub fn get(&self) -> &BigUint {
        &self.0
    }

    /// `p mod m` for small `m`.
    pub fn residue(&self, m: u32) -> u32 {
        (&self.0 % m).to_u32().expect("small modulus")
    }

    pub fn to_rational(&self) -> RationalNZ {
        RationalNZ::from_int(to_bigint(&self.0)).expect("primes are nonzero")
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn check_odd_prime(p: &BigUint) -> Result<()> {
    if p.is_even() || !is_prime(p) {
        return Err(Error::InvalidPrime(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// `a mod p` as a value in `[0, p)`.
pub fn reduce_mod(a: &BigInt, p: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, p.clone());
    a.mod_floor(&m)
        .to_biguint()
        .expect("mod_floor is nonnegative")
}

pub(crate) fn legendre_unchecked(a: &BigInt, p: &BigUint) -> i8 {
    let r = reduce_mod(a, p);
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigUint) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(legendre_unchecked(a, p))
}

pub fn is_fourth_power_mod(a: &BigInt, p: &BigUint) -> Result<bool> {
    check_odd_prime(p)?;
    let r = reduce_mod(a, p);
    if r.is_zero() {
        return Err(Error::NotAUnit(format!("{p} divides {a}")));
    }
    let pm1 = p - 1u32;
    let e = &pm1 / pm1.gcd(&BigUint::from(4u32));
    Ok(r.modpow(&e, p).is_one())
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub(crate) fn smallest_nonresidue(p: &BigUint) -> BigUint {
    let mut z = BigUint::from(2u32);
    while legendre_unchecked(&BigInt::from(z.clone()), p) != -1 {
        z += 1u32;
    }
    z
}

pub(crate) fn sqrt_mod_unchecked(a: &BigInt, p: &BigUint) -> Option<BigUint> {
    if legendre_unchecked(a, p) != 1 {
        return None;
    }
    let r = reduce_mod(a, p);
    let one = BigUint::one();
    let pm1 = p - &one;
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    let z = smallest_nonresidue(p);
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = r.modpow(&q, p);
    let mut root = r.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        root = (&root * &b) % p;
    }
    let other = p - &root;
    Some(root.min(other))
}

/// Square root of a nonzero quadratic residue, normalized to `[1, (p-1)/2]`.
/// Returns `None` for non-residues and for `a ≡ 0`.
pub fn sqrt_mod(a: &BigInt, p: &BigUint) -> Result<Option<BigUint>> {
    check_odd_prime(p)?;
    Ok(sqrt_mod_unchecked(a, p))
}

/// Exponent of `p` in `n > 0`, with the cofactor.
pub(crate) fn split_valuation(n: &BigUint, p: &BigUint) -> (i64, BigUint) {
    let mut v = 0;
    let mut rem = n.clone();
    loop {
        let (q, r) = rem.div_rem(p);
        if !r.is_zero() {
            return (v, rem);
        }
        rem = q;
        v += 1;
    }
}

/// `v_p(x)`.
///
/// # Panics
/// If `p < 2`.
pub fn valuation(x: &RationalNZ, p: &BigUint) -> i64 {
    assert!(*p >= BigUint::from(2u32), "valuation needs p >= 2");
    split_valuation(x.numer().magnitude(), p).0 - split_valuation(x.denom().magnitude(), p).0
}

/// Writes `x = p^v · w` and returns `v` together with `w mod p`, which is a
/// unit residue.
pub(crate) fn unit_residue(x: &RationalNZ, p: &BigUint) -> (i64, BigUint) {
    let (vn, n) = split_valuation(x.numer().magnitude(), p);
    let (vd, d) = split_valuation(x.denom().magnitude(), p);
    let n = if x.is_negative() {
        (p - (&n % p)) % p
    } else {
        &n % p
    };
    let dinv = (&d % p).modinv(p).expect("cofactor is a unit mod p");
    (vn - vd, (n * dinv) % p)
}

pub(crate) fn to_bigint(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}
