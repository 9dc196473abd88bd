//! Nilpotent quotients of the free group on `x, y`.
//!
//! Elements are kept in the normal form
//! `y^a x^b [x,y]^c [[x,y],x]^d [[x,y],y]^e` with `[x,y] = x y x⁻¹ y⁻¹`.
//! Multiplication uses collection formulas that follow from
//! `x^b y^a = y^a x^b [x,y]^{ab} [[x,y],y]^{b·C(a+1,2)} [[x,y],x]^{a·C(b+1,2)}`
//! together with `[x,y]^c y^a = y^a [x,y]^c [[x,y],y]^{ca}` and
//! `[x,y]^c x^b = x^b [x,y]^c [[x,y],x]^{cb}`. The Magnus embedding into
//! truncated noncommutative power series gives an independent product.

use std::fmt;

use rand::Rng;

use crate::cohomology::{Cochain1, Cochain2, GaloisModel};
use crate::error::{Error, Result};
use crate::verify::{CheckReport, SuiteOptions, SuiteReport};

/// Which finite quotient the exponents live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuotientSpec {
    /// `π/[π]₄` with `c, d, e` mod `m`. For even `m` the exponents `a, b`
    /// are kept mod `2m`: a quotient with every exponent mod `m` does not
    /// exist there, since conjugating `y^m` by `x` produces
    /// `[[x,y],y]^{m(m+1)/2}`.
    Full4(u32),
    /// `π/[π]₃²`: `a, b` mod 4 and `c` mod 2; order 32.
    Tower3,
    /// `π/([π]₄²·([π]₂²)²)`: `a, b` mod 4 and `c, d, e` mod 2; order 128.
    Tower4,
}

const MAX_FULL_MODULUS: u32 = 1 << 12;

impl QuotientSpec {
    pub fn full4(m: u32) -> Result<Self> {
        if !(2..=MAX_FULL_MODULUS).contains(&m) {
            return Err(Error::Domain(format!("FULL4 modulus {m} outside 2..={MAX_FULL_MODULUS}")));
        }
        Ok(QuotientSpec::Full4(m))
    }

    /// Moduli of `(a, b, c, d, e)`; a modulus of 1 means the coordinate is
    /// absent.
    pub fn moduli(self) -> [i64; 5] {
        match self {
            QuotientSpec::Full4(m) => {
                let m = m as i64;
                let ab = if m % 2 == 0 { 2 * m } else { m };
                [ab, ab, m, m, m]
            }
            QuotientSpec::Tower3 => [4, 4, 2, 1, 1],
            QuotientSpec::Tower4 => [4, 4, 2, 2, 2],
        }
    }

    pub fn order(self) -> u64 {
        self.moduli().iter().map(|&m| m as u64).product()
    }

    /// Nilpotency class of the quotient.
    pub fn class(self) -> usize {
        match self {
            QuotientSpec::Tower3 => 2,
            _ => 3,
        }
    }

    /// The action of `(χ, f)` depends only on `χ` modulo this number.
    pub fn chi_modulus_needed(self) -> i64 {
        match self {
            QuotientSpec::Full4(_) => 2 * self.moduli()[2],
            QuotientSpec::Tower3 | QuotientSpec::Tower4 => 4,
        }
    }

    /// All elements in lexicographic exponent order.
    pub fn elements(self) -> impl Iterator<Item = NilpotentElement> {
        let m = self.moduli();
        let total = self.order();
        (0..total).map(move |mut idx| {
            let mut exps = [0i64; 5];
            for i in (0..5).rev() {
                exps[i] = (idx % m[i] as u64) as i64;
                idx /= m[i] as u64;
            }
            NilpotentElement { spec: self, exps }
        })
    }

    /// Whether reducing exponents gives a homomorphism onto `target`.
    pub fn projects_to(self, target: QuotientSpec) -> bool {
        let (s, t) = (self.moduli(), target.moduli());
        target.class() <= self.class() && (0..5).all(|i| s[i] % t[i] == 0)
    }
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientSpec::Full4(m) => write!(f, "FULL4({m})"),
            QuotientSpec::Tower3 => f.write_str("TOWER3"),
            QuotientSpec::Tower4 => f.write_str("TOWER4"),
        }
    }
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// An element `y^a x^b [x,y]^c [[x,y],x]^d [[x,y],y]^e` with every exponent
/// reduced into `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NilpotentElement {
    spec: QuotientSpec,
    exps: [i64; 5],
}

impl NilpotentElement {
    /// Builds the element with the given integer exponents.
    pub fn new(spec: QuotientSpec, exps: [i64; 5]) -> Self {
        let m = spec.moduli();
        let mut out = [0; 5];
        for i in 0..5 {
            out[i] = exps[i].rem_euclid(m[i]);
        }
        Self { spec, exps: out }
    }

    pub fn identity(spec: QuotientSpec) -> Self {
        Self::new(spec, [0; 5])
    }

    pub fn x(spec: QuotientSpec) -> Self {
        Self::new(spec, [0, 1, 0, 0, 0])
    }

    pub fn y(spec: QuotientSpec) -> Self {
        Self::new(spec, [1, 0, 0, 0, 0])
    }

    /// `[x,y]`.
    pub fn z(spec: QuotientSpec) -> Self {
        Self::new(spec, [0, 0, 1, 0, 0])
    }

    /// `[[x,y],x]`.
    pub fn zx(spec: QuotientSpec) -> Self {
        Self::new(spec, [0, 0, 0, 1, 0])
    }

    /// `[[x,y],y]`.
    pub fn zy(spec: QuotientSpec) -> Self {
        Self::new(spec, [0, 0, 0, 0, 1])
    }

    pub fn spec(&self) -> QuotientSpec {
        self.spec
    }

    /// `(a, b, c, d, e)`.
    pub fn exponents(&self) -> [i64; 5] {
        self.exps
    }

    pub fn a(&self) -> i64 {
        self.exps[0]
    }
    pub fn b(&self) -> i64 {
        self.exps[1]
    }
    pub fn c(&self) -> i64 {
        self.exps[2]
    }
    pub fn d(&self) -> i64 {
        self.exps[3]
    }
    pub fn e(&self) -> i64 {
        self.exps[4]
    }

    pub fn is_identity(&self) -> bool {
        self.exps == [0; 5]
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let [a1, b1, c1, d1, e1] = self.exps;
        let [a2, b2, c2, d2, e2] = rhs.exps;
        Self::new(
            self.spec,
            [
                a1 + a2,
                b1 + b2,
                c1 + c2 + b1 * a2,
                d1 + d2 + b2 * c1 + a2 * binom2(b1 + 1) + a2 * b1 * b2,
                e1 + e2 + a2 * c1 + b1 * binom2(a2 + 1),
            ],
        )
    }

    pub fn inverse(&self) -> Self {
        let [a1, b1, c1, d1, e1] = self.exps;
        let (a2, b2) = (-a1, -b1);
        Self::new(
            self.spec,
            [
                a2,
                b2,
                -c1 - b1 * a2,
                -d1 - b2 * c1 - a2 * binom2(b1 + 1) - a2 * b1 * b2,
                -e1 - a2 * c1 - b1 * binom2(a2 + 1),
            ],
        )
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::identity(self.spec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Reduces the exponents into a smaller quotient.
    pub fn project(&self, target: QuotientSpec) -> Result<Self> {
        if !self.spec.projects_to(target) {
            return Err(Error::Domain(format!("{} does not project to {target}", self.spec)));
        }
        Ok(Self::new(target, self.exps))
    }

    /// Drops every coordinate above the given level: level 1 keeps nothing,
    /// level 2 keeps `(a, b)`, level 3 keeps `(a, b, c)`.
    pub fn truncate(&self, level: usize) -> Self {
        let mut exps = self.exps;
        for e in exps.iter_mut().skip(match level {
            0 | 1 => 0,
            2 => 2,
            3 => 3,
            _ => 5,
        }) {
            *e = 0;
        }
        Self { spec: self.spec, exps }
    }
}

impl fmt::Display for NilpotentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.exps;
        write!(f, "y^{a} x^{b} [x,y]^{c} [[x,y],x]^{d} [[x,y],y]^{e} in {}", self.spec)
    }
}

fn same_spec(e1: &NilpotentElement, e2: &NilpotentElement) -> Result<()> {
    if e1.spec != e2.spec {
        return Err(Error::Domain(format!("{} vs {}", e1.spec, e2.spec)));
    }
    Ok(())
}

pub fn nf_mul(e1: &NilpotentElement, e2: &NilpotentElement) -> Result<NilpotentElement> {
    same_spec(e1, e2)?;
    Ok(e1.mul_unchecked(e2))
}

impl std::ops::Mul for NilpotentElement {
    type Output = NilpotentElement;

    /// # Panics
    /// If the operands live in different quotients; use [`nf_mul`] for a
    /// checked product.
    fn mul(self, rhs: Self) -> Self {
        nf_mul(&self, &rhs).expect("operands in the same quotient")
    }
}

/// `[g, h] = g h g⁻¹ h⁻¹`.
pub fn commutator(g: &NilpotentElement, h: &NilpotentElement) -> Result<NilpotentElement> {
    same_spec(g, h)?;
    Ok(g.mul_unchecked(h).mul_unchecked(&g.inverse()).mul_unchecked(&h.inverse()))
}

/// Action of a Galois element with cyclotomic value `chi` and `f`-value
/// `f`, determined by `σ(x) = x^χ` and `σ(y) = [x,y]^{-f} y^χ [x,y]^f`.
///
/// On the level-3 part this is `y^{χa} x^{χb} [x,y]^{χ²c}` times
/// `[[x,y],x]^{-κχ²c} [[x,y],y]^{-κχ²c - fχa}` with `κ = (χ-1)/2`; the two
/// degree-3 generators are scaled by `χ³`.
pub fn galois_act(chi: i64, f: i64, e: &NilpotentElement) -> Result<NilpotentElement> {
    if chi % 2 == 0 {
        return Err(Error::InvalidCharacter(format!("chi = {chi} is even")));
    }
    let [a, b, c, d, ee] = e.exps;
    let kappa = (chi - 1) / 2;
    let chi2 = chi * chi;
    let chi3 = chi2 * chi;
    Ok(NilpotentElement::new(
        e.spec,
        [
            chi * a,
            chi * b,
            chi2 * c,
            chi3 * d - kappa * chi2 * c,
            chi3 * ee - kappa * chi2 * c - f * chi * a,
        ],
    ))
}

// ---------------------------------------------------------------------------
// Magnus series

/// Truncated noncommutative power series in `ξ, η` modulo words of length
/// four, with coefficients mod `m`.
///
/// Word `w` of length `ℓ` is stored at index `2^ℓ - 1 + bits(w)` where `ξ`
/// is bit 0 and `η` is bit 1, first letter most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagnusSeries {
    modulus: i64,
    coeffs: [i64; 15],
}

/// Letters of a Magnus word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Xi,
    Eta,
}

fn word_index(word: &[Letter]) -> usize {
    assert!(word.len() <= 3, "words have length at most 3");
    let bits = word.iter().fold(0usize, |acc, l| 2 * acc + (*l == Letter::Eta) as usize);
    (1 << word.len()) - 1 + bits
}

fn index_word(idx: usize) -> (usize, usize) {
    let len = (usize::BITS - (idx + 1).leading_zeros() - 1) as usize;
    (len, idx + 1 - (1 << len))
}

fn concat_index(i: usize, j: usize) -> Option<usize> {
    let (l1, b1) = index_word(i);
    let (l2, b2) = index_word(j);
    (l1 + l2 <= 3).then(|| (1 << (l1 + l2)) - 1 + (b1 << l2) + b2)
}

/// Generalized binomial coefficient `C(n, k)` for `k ≤ 3`.
fn gbinom(n: i64, k: usize) -> i64 {
    let n = n as i128;
    let v = match k {
        0 => 1,
        1 => n,
        2 => n * (n - 1) / 2,
        3 => n * (n - 1) * (n - 2) / 6,
        _ => unreachable!(),
    };
    v as i64
}

impl MagnusSeries {
    pub fn one(modulus: i64) -> Self {
        let mut coeffs = [0; 15];
        coeffs[0] = 1 % modulus;
        Self { modulus, coeffs }
    }

    /// `M(x) = 1 + ξ`.
    pub fn xi(modulus: i64) -> Self {
        let mut s = Self::one(modulus);
        s.coeffs[word_index(&[Letter::Xi])] = 1;
        s
    }

    /// `M(y) = 1 + η`.
    pub fn eta(modulus: i64) -> Self {
        let mut s = Self::one(modulus);
        s.coeffs[word_index(&[Letter::Eta])] = 1;
        s
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn coefficient(&self, word: &[Letter]) -> i64 {
        self.coeffs[word_index(word)]
    }

    fn reduce(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = c.rem_euclid(self.modulus);
        }
        self
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = [0i64; 15];
        for i in 0..15 {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..15 {
                if let Some(k) = concat_index(i, j) {
                    out[k] = (out[k] + self.coeffs[i] * rhs.coeffs[j]) % self.modulus;
                }
            }
        }
        Self { modulus: self.modulus, coeffs: out }.reduce()
    }

    /// `self^n` for any integer `n`, via `(1+N)^n = Σ C(n,k) N^k`.
    pub fn pow(&self, n: i64) -> Self {
        let mut nil = *self;
        nil.coeffs[0] = 0;
        let mut out = Self::one(self.modulus);
        let mut power = Self::one(self.modulus);
        for k in 1..=3 {
            power = power.mul_unchecked(&nil);
            let coef = gbinom(n, k).rem_euclid(self.modulus);
            for i in 0..15 {
                out.coeffs[i] += coef * power.coeffs[i];
            }
        }
        out.reduce()
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    fn commutator(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
            .mul_unchecked(&self.inverse())
            .mul_unchecked(&other.inverse())
    }

    fn add_scaled(&mut self, other: &Self, k: i64) {
        for i in 0..15 {
            self.coeffs[i] = (self.coeffs[i] + k * other.coeffs[i]).rem_euclid(self.modulus);
        }
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let (len, bits) = index_word(i);
            let word: String = (0..len)
                .rev()
                .map(|k| if (bits >> k) & 1 == 1 { 'η' } else { 'ξ' })
                .collect();
            match (c, word.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => f.write_str(&word)?,
                _ => write!(f, "{c}{word}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " (mod {})", self.modulus)
    }
}

/// Series of the five basis elements, computed from `1 + ξ` and `1 + η`
/// alone: `[M(y), M(x), M([x,y]), M([[x,y],x]), M([[x,y],y])]`.
fn basis_series(modulus: i64) -> [MagnusSeries; 5] {
    let x = MagnusSeries::xi(modulus);
    let y = MagnusSeries::eta(modulus);
    let z = x.commutator(&y);
    let zx = z.commutator(&x);
    let zy = z.commutator(&y);
    [y, x, z, zx, zy]
}

fn check_magnus_modulus(spec: QuotientSpec, m: i64) -> Result<()> {
    if m < 2 || spec.moduli().iter().any(|&k| m % k != 0) {
        return Err(Error::Precision(format!(
            "Magnus modulus {m} is not a multiple of every exponent modulus of {spec}"
        )));
    }
    Ok(())
}

pub fn magnus_embed(e: &NilpotentElement, m: i64) -> Result<MagnusSeries> {
    check_magnus_modulus(e.spec, m)?;
    let basis = basis_series(m);
    Ok(basis
        .iter()
        .zip(e.exps)
        .fold(MagnusSeries::one(m), |acc, (s, k)| acc.mul_unchecked(&s.pow(k))))
}

pub fn magnus_mul(s1: &MagnusSeries, s2: &MagnusSeries) -> Result<MagnusSeries> {
    if s1.modulus != s2.modulus {
        return Err(Error::Domain(format!("series mod {} and {}", s1.modulus, s2.modulus)));
    }
    Ok(s1.mul_unchecked(s2))
}

/// Recovers the normal form by peeling off `y^a`, then `x^b`, then solving
/// for the commutator exponents. Fails if the series is not the image of a
/// group element.
pub fn nf_from_magnus(s: &MagnusSeries, spec: QuotientSpec) -> Result<NilpotentElement> {
    use Letter::{Eta, Xi};
    let m = s.modulus;
    check_magnus_modulus(spec, m)?;
    if s.coeffs[0] != 1 % m {
        return Err(Error::Domain("constant coefficient is not 1".into()));
    }
    // The leading pure power of a letter must be (1 + letter)^n for an
    // integer n; its coefficients depend on n mod 6m only.
    let power_of = |letter: Letter, src: &MagnusSeries| -> Result<(i64, MagnusSeries)> {
        let base = if letter == Xi { MagnusSeries::xi(m) } else { MagnusSeries::eta(m) };
        let lead = src.coefficient(&[letter]);
        (0..6)
            .map(|k| lead + k * m)
            .map(|n| (n, base.pow(n)))
            .find(|(_, p)| {
                (1..=3).all(|len| {
                    let word = vec![letter; len];
                    p.coefficient(&word) == src.coefficient(&word)
                })
            })
            .ok_or_else(|| Error::Domain(format!("{s} is not the image of a group element")))
    };
    let (a, ya) = power_of(Eta, s)?;
    let rest = ya.inverse().mul_unchecked(s);
    let (b, xb) = power_of(Xi, &rest)?;
    let rest = xb.inverse().mul_unchecked(&rest);

    let [_, _, z, zx, zy] = basis_series(m);
    let c = rest.coefficient(&[Xi, Eta]) * z.coefficient(&[Xi, Eta]);
    let mut residual = rest;
    residual.add_scaled(&z, -c);
    residual.coeffs[0] = (residual.coeffs[0] + c) % m;

    let (w1, w2) = ([Eta, Xi, Xi], [Eta, Eta, Xi]);
    let (p11, p12, p21, p22) = (
        zx.coefficient(&w1),
        zy.coefficient(&w1),
        zx.coefficient(&w2),
        zy.coefficient(&w2),
    );
    let det = (p11 * p22 - p12 * p21).rem_euclid(m);
    let det_inv = mod_inverse(det, m)
        .ok_or_else(|| Error::Precision(format!("degree-3 system singular mod {m}")))?;
    let (r1, r2) = (residual.coefficient(&w1), residual.coefficient(&w2));
    let d = ((p22 * r1 - p12 * r2).rem_euclid(m) * det_inv).rem_euclid(m);
    let e = ((p11 * r2 - p21 * r1).rem_euclid(m) * det_inv).rem_euclid(m);
    residual.add_scaled(&zx, -d);
    residual.add_scaled(&zy, -e);
    residual.coeffs[0] = (residual.coeffs[0] + d + e) % m;
    if residual != MagnusSeries::one(m) {
        return Err(Error::Domain(format!("{s} is not the image of a group element")));
    }
    Ok(NilpotentElement::new(spec, [a, b, c, d, e]))
}

fn mod_inverse(x: i64, m: i64) -> Option<i64> {
    (1..m).find(|k| (x * k).rem_euclid(m) == 1 % m).or((m == 1).then_some(0))
}

// ---------------------------------------------------------------------------
// Boundary of a set-theoretic section

/// Coboundary of the section that forgets the top layer of a 1-cocycle
/// `p: G → quotient`.
///
/// With `s(p(g))` the truncation of `p(g)` to `level`, the element
/// `s(p(g)) · g·s(p(h)) · s(p(gh))⁻¹` lies in the next layer of the lower
/// central series. For `level = 2` the result is its `[x,y]`-coordinate;
/// for `level = 3` its `[[x,y],x]`- and `[[x,y],y]`-coordinates.
///
/// `f` supplies the `f`-value of each group element for the action.
pub fn boundary_of_section(
    model: &GaloisModel,
    f: &Cochain1,
    p: &[NilpotentElement],
    level: usize,
) -> Result<Vec<Cochain2>> {
    let n = model.order();
    if p.len() != n {
        return Err(Error::Domain(format!("cocycle has {} values on a group of order {n}", p.len())));
    }
    if !f.same_model(model) {
        return Err(Error::Domain("f lives on a different model".into()));
    }
    let spec = p[0].spec;
    if p.iter().any(|e| e.spec != spec) {
        return Err(Error::Domain("cocycle values in different quotients".into()));
    }
    if !(level == 2 || level == 3) || level > spec.class() {
        return Err(Error::Domain(format!("level {level} unsupported for {spec}")));
    }
    if model.chi_modulus() % spec.chi_modulus_needed() != 0 {
        return Err(Error::Domain(format!(
            "{spec} needs chi mod {}, model has chi mod {}",
            spec.chi_modulus_needed(),
            model.chi_modulus()
        )));
    }
    let top = spec.moduli()[level..].iter().copied().max().unwrap_or(1);
    if f.modulus() % top != 0 && level == 3 {
        return Err(Error::Domain(format!("f mod {} is too coarse for {spec}", f.modulus())));
    }
    let act = |g: usize, e: &NilpotentElement| {
        galois_act(model.chi(g), f.at(g), e).expect("model characters are odd")
    };

    let section: Vec<NilpotentElement> = p.iter().map(|e| e.truncate(level)).collect();
    let mut kernel: Vec<[i64; 5]> = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            let gh = model.mul(g, h);
            let lifted = p[g].mul_unchecked(&act(g, &p[h]));
            if lifted.truncate(level) != section[gh] {
                return Err(Error::InvalidCocycle(format!(
                    "p({gh}) != p({g}) · {g}·p({h}) at level {level}"
                )));
            }
            let boundary = section[g]
                .mul_unchecked(&act(g, &section[h]))
                .mul_unchecked(&section[gh].inverse());
            if !boundary.truncate(level).is_identity() {
                return Err(Error::Internal("section boundary left the kernel".into()));
            }
            kernel.push(boundary.exps);
        }
    }
    let coords: &[usize] = if level == 2 { &[2] } else { &[3, 4] };
    coords
        .iter()
        .map(|&i| {
            let values = kernel.iter().map(|k| k[i]).collect();
            Cochain2::from_values(model, spec.moduli()[i], level as u32, values)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Suite

fn random_element<R: Rng>(spec: QuotientSpec, rng: &mut R) -> NilpotentElement {
    let m = spec.moduli();
    NilpotentElement::new(spec, std::array::from_fn(|i| rng.gen_range(0..m[i])))
}

/// Cross-checks of the collection formulas: associativity, agreement with
/// the Magnus product, the commutation identity for `x^b y^a`, and the
/// Galois action being a compatible family of automorphisms.
pub fn nilpotent_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("nilpotent quotients");
    let mut rng = opts.rng(0x6e69_6c70);
    let t3 = QuotientSpec::Tower3;
    let t4 = QuotientSpec::Tower4;
    let f4 = QuotientSpec::Full4(4);
    let f8 = QuotientSpec::Full4(8);
    let tower4: Vec<_> = t4.elements().collect();

    let mut assoc = CheckReport::new("associativity in TOWER4");
    if opts.exhaustive {
        for &g in &tower4 {
            for &h in &tower4 {
                let gh = g * h;
                for &k in &tower4 {
                    assoc.record((gh * k) == g * (h * k), || format!("{g}; {h}; {k}"));
                }
            }
        }
    } else {
        for _ in 0..opts.samples.max(1) * 64 {
            let (g, h, k) = (random_element(t4, &mut rng), random_element(t4, &mut rng), random_element(t4, &mut rng));
            assoc.record((g * h) * k == g * (h * k), || format!("{g}; {h}; {k}"));
        }
    }
    for _ in 0..2000 {
        let (g, h, k) = (random_element(f8, &mut rng), random_element(f8, &mut rng), random_element(f8, &mut rng));
        assoc.record((g * h) * k == g * (h * k), || format!("{g}; {h}; {k}"));
    }
    report.checks.push(assoc);

    let mut magnus = CheckReport::new("collection = Magnus product");
    let magnus_product = |g: &NilpotentElement, h: &NilpotentElement, m: i64| -> Result<NilpotentElement> {
        let s = magnus_mul(&magnus_embed(g, m)?, &magnus_embed(h, m)?)?;
        nf_from_magnus(&s, g.spec())
    };
    for spec in [t3, t4] {
        for g in spec.elements() {
            for h in spec.elements() {
                let ok = magnus_product(&g, &h, 4).map(|p| p == g * h).unwrap_or(false);
                magnus.record(ok, || format!("{g} · {h}"));
            }
        }
    }
    for _ in 0..10_000 {
        let (g, h) = (random_element(f8, &mut rng), random_element(f8, &mut rng));
        let ok = magnus_product(&g, &h, 16).map(|p| p == g * h).unwrap_or(false);
        magnus.record(ok, || format!("{g} · {h}"));
    }
    report.checks.push(magnus);

    let mut switch = CheckReport::new("x^b y^a commutation identity");
    for spec in [t4, f8] {
        let (x, y) = (NilpotentElement::x(spec), NilpotentElement::y(spec));
        let range = spec.moduli()[0];
        for a in 0..range {
            for b in 0..range {
                let lhs = x.pow(b) * y.pow(a);
                let rhs = y.pow(a)
                    * x.pow(b)
                    * NilpotentElement::z(spec).pow(a * b)
                    * NilpotentElement::zy(spec).pow(b * binom2(a + 1))
                    * NilpotentElement::zx(spec).pow(a * binom2(b + 1));
                switch.record(lhs == rhs, || format!("a = {a}, b = {b} in {spec}"));
            }
        }
    }
    report.checks.push(switch);

    let mut auto = CheckReport::new("Galois action is an automorphism");
    let mut compose = CheckReport::new("Galois action composes");
    let actions: Vec<(i64, i64)> = [1, 3, 5, 7].iter().flat_map(|&c| [(c, 0), (c, 1)]).collect();
    for &(chi, f) in &actions {
        let act = |e: &NilpotentElement| galois_act(chi, f, e).expect("odd chi");
        for &g in &tower4 {
            for &h in &tower4 {
                auto.record(act(&(g * h)) == act(&g) * act(&h), || format!("chi = {chi}, f = {f}: {g}; {h}"));
            }
        }
        for &(chi2, f2) in &actions {
            for &g in &tower4 {
                let twice = act(&galois_act(chi2, f2, &g).expect("odd chi"));
                let once = galois_act(chi * chi2, f + chi * chi * f2, &g).expect("odd chi");
                compose.record(twice == once, || format!("({chi},{f}) after ({chi2},{f2}) on {g}"));
            }
        }
    }
    for _ in 0..2000 {
        let chi = 2 * rng.gen_range(0..8) + 1;
        let f = rng.gen_range(0..8);
        let (g, h) = (random_element(f8, &mut rng), random_element(f8, &mut rng));
        let act = |e: &NilpotentElement| galois_act(chi, f, e).expect("odd chi");
        auto.record(act(&(g * h)) == act(&g) * act(&h), || format!("chi = {chi}, f = {f}: {g}; {h}"));
    }
    report.checks.push(auto);
    report.checks.push(compose);

    let mut projection = CheckReport::new("projections are homomorphisms");
    for _ in 0..10_000 {
        let (g, h) = (random_element(f4, &mut rng), random_element(f4, &mut rng));
        let chi = 2 * rng.gen_range(0..4) + 1;
        let f = rng.gen_range(0..2);
        let ok = [t4, t3].iter().all(|&t| {
            let p = |e: &NilpotentElement| e.project(t).expect("FULL4(4) projects");
            p(&(g * h)) == p(&g) * p(&h)
                && p(&galois_act(chi, f, &g).expect("odd")) == galois_act(chi, f, &p(&g)).expect("odd")
        });
        projection.record(ok, || format!("{g}; {h}"));
        let (g8, h8) = (random_element(f8, &mut rng), random_element(f8, &mut rng));
        let p = |e: &NilpotentElement| e.project(t4).expect("FULL4(8) projects");
        projection.record(p(&(g8 * h8)) == p(&g8) * p(&h8), || format!("{g8}; {h8}"));
    }
    for &g in &tower4 {
        for &h in &tower4 {
            let p = |e: &NilpotentElement| e.project(t3).expect("TOWER4 projects");
            projection.record(p(&(g * h)) == p(&g) * p(&h), || format!("{g}; {h}"));
        }
    }
    report.checks.push(projection);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const T4: QuotientSpec = QuotientSpec::Tower4;

    #[test]
    fn orders() {
        assert_eq!(QuotientSpec::Tower3.order(), 32);
        assert_eq!(T4.order(), 128);
        assert_eq!(QuotientSpec::Full4(3).order(), 243);
        assert_eq!(QuotientSpec::Full4(4).order(), 4 * 4u64.pow(5));
        assert_eq!(T4.elements().count(), 128);
    }

    #[test]
    fn x_times_y() {
        for m in [2, 3, 4, 8] {
            let s = QuotientSpec::Full4(m);
            let xy = NilpotentElement::x(s) * NilpotentElement::y(s);
            assert_eq!(xy.exponents(), [1, 1, 1, 1, 1], "m = {m}");
        }
    }

    #[test]
    fn inverses_in_tower4() {
        for g in T4.elements() {
            assert!((g * g.inverse()).is_identity());
            assert!((g.inverse() * g).is_identity());
        }
    }

    #[test]
    fn commutator_examples() {
        let s = QuotientSpec::Full4(16);
        for a in -5i64..=5 {
            let xa = NilpotentElement::x(s).pow(a);
            let ya = NilpotentElement::y(s).pow(a);
            let k = commutator(&xa, &ya).unwrap();
            let t = -a * binom2(a);
            assert_eq!(k, NilpotentElement::new(s, [0, 0, a * a, t, t]), "a = {a}");
        }
        let g = NilpotentElement::new(s, [3, 5, 7, 2, 9]);
        assert!(commutator(&g, &g).unwrap().is_identity());
        let k = commutator(&NilpotentElement::x(s), &NilpotentElement::z(s)).unwrap();
        assert_eq!(k, NilpotentElement::zx(s).inverse());
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let g = NilpotentElement::x(T4);
        let h = NilpotentElement::x(QuotientSpec::Tower3);
        assert!(matches!(nf_mul(&g, &h), Err(Error::Domain(_))));
        assert!(matches!(commutator(&g, &h), Err(Error::Domain(_))));
    }

    #[test]
    fn galois_examples() {
        for g in T4.elements() {
            assert_eq!(galois_act(1, 0, &g).unwrap(), g);
        }
        for chi in [1, 3, 5, 7] {
            for f in 0..2 {
                let img = galois_act(chi, f, &NilpotentElement::y(T4)).unwrap();
                assert_eq!(img.e(), (-f * chi).rem_euclid(2));
            }
        }
        assert!(matches!(galois_act(2, 0, &NilpotentElement::x(T4)), Err(Error::InvalidCharacter(_))));
    }

    #[test]
    fn magnus_examples() {
        let s = magnus_embed(&NilpotentElement::x(T4), 4).unwrap();
        assert_eq!(s, MagnusSeries::xi(4));
        let z = magnus_embed(&NilpotentElement::z(QuotientSpec::Full4(8)), 16).unwrap();
        use Letter::{Eta, Xi};
        assert_eq!(z.coefficient(&[Xi, Eta]), 1);
        assert_eq!(z.coefficient(&[Eta, Xi]), 15);
        assert_eq!(z.coefficient(&[Xi]), 0);
        assert!(matches!(magnus_embed(&NilpotentElement::x(T4), 2), Err(Error::Precision(_))));
        assert!(matches!(
            magnus_embed(&NilpotentElement::x(QuotientSpec::Full4(8)), 8),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn magnus_round_trip_tower4() {
        for g in T4.elements() {
            let s = magnus_embed(&g, 4).unwrap();
            assert_eq!(nf_from_magnus(&s, T4).unwrap(), g);
        }
    }

    #[test]
    fn non_group_series_rejected() {
        let mut s = MagnusSeries::one(8);
        s.coeffs[word_index(&[Letter::Xi, Letter::Xi])] = 1;
        assert!(nf_from_magnus(&s, QuotientSpec::Tower4).is_err());
    }

    #[test]
    fn projection_rules() {
        assert!(QuotientSpec::Full4(4).projects_to(T4));
        assert!(QuotientSpec::Full4(8).projects_to(T4));
        assert!(T4.projects_to(QuotientSpec::Tower3));
        assert!(!QuotientSpec::Tower3.projects_to(T4));
        assert!(!QuotientSpec::Full4(3).projects_to(T4));
    }

    #[test]
    fn word_indexing() {
        for i in 0..15 {
            let (len, bits) = index_word(i);
            assert!(len <= 3 && bits < (1 << len));
            assert_eq!((1 << len) - 1 + bits, i);
        }
        assert_eq!(concat_index(1, 2), Some(word_index(&[Letter::Xi, Letter::Eta])));
        assert_eq!(concat_index(3, 3), None);
    }
}
