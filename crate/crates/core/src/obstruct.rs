//! Point-level evaluation of δ2 and δ3 mod 2 for `(b, a) ∈ Q* × Q*`.
//!
//! Odd places use the three-case local criterion on square classes. The
//! real place is evaluated directly through the cochain closed forms over
//! `Gal(C/R)`. The place 2 is never evaluated; reciprocity accounts for it.
//! Globally, only the mod-2 δ2 layer and the `(-p³, p)` family with
//! `p ≡ 5 mod 8` are decided.

use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{self, OddPrime, RationalNZ};
use crate::cohomology::{delta3_closed_form, f_bar_from_chi8, valid_lifts, Cochain1, GaloisModel};
use crate::error::{Error, Result};
use crate::k2global::{self, Delta2GlobalVerdict, TameSymbolValue};
use crate::localclass::{
    class_of_minus_one, class_of_two, cup_qp, delta2_local, sqrt_square_class_qp, square_class_qp,
    LocalInvariant, LocalSquareClass, Place,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Delta3Status {
    Zero,
    Nonzero,
    BlockedByDelta2,
}

impl Delta3Status {
    pub fn label(self) -> &'static str {
        match self {
            Delta3Status::Zero => "zero",
            Delta3Status::Nonzero => "nonzero",
            Delta3Status::BlockedByDelta2 => "blocked_by_delta2",
        }
    }
}

impl fmt::Display for Delta3Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Delta3Status::Zero => "ZERO",
            Delta3Status::Nonzero => "NONZERO",
            Delta3Status::BlockedByDelta2 => "BLOCKED_BY_DELTA2",
        })
    }
}

/// The three cases of the local criterion at an odd prime.
///
/// * (i): `-b` is a square and `{2√-b}∪{a} ≠ 0`
/// * (ii): `-a` is a square and `{2√-a}∪{b} + {2}∪{a} ≠ 0`
/// * (iii): `ab` is a square and `{2√(ab)}∪{a} ≠ 0`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremCase {
    I,
    II,
    III,
}

impl TheoremCase {
    pub const ALL: [TheoremCase; 3] = [TheoremCase::I, TheoremCase::II, TheoremCase::III];

    pub fn label(self) -> &'static str {
        match self {
            TheoremCase::I => "i",
            TheoremCase::II => "ii",
            TheoremCase::III => "iii",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseTrace {
    pub case: TheoremCase,
    pub applicable: bool,
    /// Zero whenever the case is not applicable.
    pub cup: LocalInvariant,
}

/// Values of the two δ3 components at `(τ, τ)` for one lift over `Gal(C/R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealLiftDetail {
    pub lift: String,
    pub x: LocalInvariant,
    pub y: LocalInvariant,
}

impl RealLiftDetail {
    pub fn vanishes(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta3LocalResult {
    pub place: Place,
    pub status: Delta3Status,
    /// Empty at the real place and when δ2 blocks the evaluation.
    pub cases: Vec<CaseTrace>,
    /// `(label, class)` pairs, e.g. `("{-b}", "u")`.
    pub classes_used: Vec<(String, String)>,
    /// Only filled at the real place.
    pub real_lifts: Vec<RealLiftDetail>,
}

impl Delta3LocalResult {
    pub fn case(&self, case: TheoremCase) -> Option<&CaseTrace> {
        self.cases.iter().find(|t| t.case == case)
    }

    pub fn to_json(&self) -> Value {
        let cases: Vec<Value> = self
            .cases
            .iter()
            .map(|t| json!({"case": t.case.label(), "applicable": t.applicable, "cup": t.cup.bit()}))
            .collect();
        json!({"place": self.place.to_string(), "status": self.status.label(), "cases": cases})
    }
}

impl fmt::Display for Delta3LocalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "place {}: {}", self.place, self.status)?;
        for t in &self.cases {
            if t.applicable {
                write!(f, "\n  case ({}) applies, cup = {}", t.case.label(), t.cup)?;
            } else {
                write!(f, "\n  case ({}) does not apply", t.case.label())?;
            }
        }
        for l in &self.real_lifts {
            write!(f, "\n  lift {}: components ({}, {})", l.lift, l.x, l.y)?;
        }
        if !self.classes_used.is_empty() {
            let cls: Vec<String> = self.classes_used.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "\n  classes: {}", cls.join(" "))?;
        }
        Ok(())
    }
}

/// Odd primes in the support of `b` or of `a`, ascending, followed by R.
///
/// At an odd prime outside this list every class entering δ2 or the local
/// δ3 criterion is a unit class, so both vanish there.
pub fn relevant_places(b: &RationalNZ, a: &RationalNZ) -> Vec<Place> {
    k2global::odd_support(b, a)
        .into_iter()
        .map(Place::Odd)
        .chain(std::iter::once(Place::Real))
        .collect()
}

fn cup(c1: &LocalSquareClass, c2: &LocalSquareClass) -> LocalInvariant {
    cup_qp(c1, c2).expect("classes at one prime")
}

fn plus(c1: &LocalSquareClass, c2: &LocalSquareClass) -> LocalSquareClass {
    c1.plus(c2).expect("classes at one prime")
}

/// The canonical root class of `x`, or the opposite root when asked.
fn root_class(x: &RationalNZ, p: &OddPrime, opposite: bool) -> Option<LocalSquareClass> {
    let r = sqrt_square_class_qp(x, p).ok()?;
    Some(if opposite { plus(&r, &class_of_minus_one(p)) } else { r })
}

/// Evaluates the three cases at `p` without checking the δ2 precondition.
///
/// With `opposite_root` set, every square root is replaced by its negative.
/// Once δ2 vanishes locally the cup values do not depend on that choice.
pub fn theorem_cases(b: &RationalNZ, a: &RationalNZ, p: &OddPrime, opposite_root: bool) -> Vec<CaseTrace> {
    let two = class_of_two(p);
    let cls_b = square_class_qp(b, p);
    let cls_a = square_class_qp(a, p);
    let ab = b * a;
    let inputs = [(TheoremCase::I, -b), (TheoremCase::II, -a), (TheoremCase::III, ab)];
    inputs
        .into_iter()
        .map(|(case, x)| match root_class(&x, p, opposite_root) {
            None => CaseTrace { case, applicable: false, cup: LocalInvariant::ZERO },
            Some(r) => {
                let two_root = plus(&two, &r);
                let cup = match case {
                    TheoremCase::I | TheoremCase::III => cup(&two_root, &cls_a),
                    TheoremCase::II => cup(&two_root, &cls_b) + cup(&two, &cls_a),
                };
                CaseTrace { case, applicable: true, cup }
            }
        })
        .collect()
}

pub fn delta3_local_odd(b: &RationalNZ, a: &RationalNZ, p: &OddPrime) -> Delta3LocalResult {
    let place = Place::Odd(p.clone());
    let ab = b * a;
    let mut classes_used = vec![
        ("{-b}".to_string(), square_class_qp(&-b, p).to_string()),
        ("{-a}".to_string(), square_class_qp(&-a, p).to_string()),
        ("{ab}".to_string(), square_class_qp(&ab, p).to_string()),
        ("{2}".to_string(), class_of_two(p).to_string()),
    ];
    if !delta2_local(b, a, &place).is_zero() {
        return Delta3LocalResult {
            place,
            status: Delta3Status::BlockedByDelta2,
            cases: Vec::new(),
            classes_used,
            real_lifts: Vec::new(),
        };
    }
    let cases = theorem_cases(b, a, p, false);
    for (label, x) in [("{√-b}", -b), ("{√-a}", -a), ("{√ab}", ab)] {
        if let Some(r) = root_class(&x, p, false) {
            classes_used.push((label.to_string(), r.to_string()));
        }
    }
    let nonzero = cases.iter().any(|t| t.applicable && !t.cup.is_zero());
    Delta3LocalResult {
        place,
        status: if nonzero { Delta3Status::Nonzero } else { Delta3Status::Zero },
        cases,
        classes_used,
        real_lifts: Vec::new(),
    }
}

fn kummer_mod4(model: &GaloisModel, x: &RationalNZ) -> Cochain1 {
    let v = if x.is_negative() { 3 } else { 0 };
    Cochain1::from_fn(model, 4, 1, |[g]| if g == 0 { 0 } else { v }).expect("valid coefficients")
}

fn bit_at_tau(c: &crate::cohomology::Cochain2) -> LocalInvariant {
    LocalInvariant { half: c.at(1, 1) % 2 == 1 }
}

/// Evaluates both δ3 components for every lift over `Gal(C/R)`.
pub fn delta3_local_real(b: &RationalNZ, a: &RationalNZ) -> Delta3LocalResult {
    let classes_used = vec![
        ("{b}".to_string(), if b.is_negative() { "-1" } else { "1" }.to_string()),
        ("{a}".to_string(), if a.is_negative() { "-1" } else { "1" }.to_string()),
    ];
    let blocked = Delta3LocalResult {
        place: Place::Real,
        status: Delta3Status::BlockedByDelta2,
        cases: Vec::new(),
        classes_used: classes_used.clone(),
        real_lifts: Vec::new(),
    };
    if b.is_negative() && a.is_negative() {
        return blocked;
    }
    let model = GaloisModel::real_place();
    let (kb, ka) = (kummer_mod4(&model, b), kummer_mod4(&model, a));
    let f = f_bar_from_chi8(&model);
    let lifts = valid_lifts(&kb, &ka).expect("mod-4 Kummer cocycles");
    let real_lifts: Vec<RealLiftDetail> = lifts
        .iter()
        .map(|c| {
            let (x, y) = delta3_closed_form(&kb, &ka, c, &f).expect("valid lift");
            let lift = if c.is_zero() { "c = 0" } else { "c = {-1}" };
            RealLiftDetail { lift: lift.into(), x: bit_at_tau(&x), y: bit_at_tau(&y) }
        })
        .collect();
    let zero = real_lifts.iter().any(RealLiftDetail::vanishes);
    Delta3LocalResult {
        place: Place::Real,
        status: if zero { Delta3Status::Zero } else { Delta3Status::Nonzero },
        cases: Vec::new(),
        classes_used,
        real_lifts,
    }
}

pub fn delta3_local(b: &RationalNZ, a: &RationalNZ, place: &Place) -> Delta3LocalResult {
    match place {
        Place::Odd(p) => delta3_local_odd(b, a, p),
        Place::Real => delta3_local_real(b, a),
    }
}

/// Verdicts of the congruence shortcut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub delta2_zero: bool,
    /// `None` when δ2 is nonzero.
    pub delta3_zero: Option<bool>,
}

/// For integers with `p ∥ ab`: δ2 vanishes at `p` iff `a + b` is a square
/// mod `p`, and then δ3 vanishes iff `a + b` is a fourth power mod `p`.
pub fn delta3_congruence(b: &RationalNZ, a: &RationalNZ, p: &OddPrime) -> Result<CongruenceVerdict> {
    if !b.is_integer() || !a.is_integer() {
        return Err(Error::InapplicableFastPath(format!("({b}, {a}) are not both integers")));
    }
    if arith::valuation(&(b * a), p.get()) != 1 {
        return Err(Error::InapplicableFastPath(format!("{p} does not divide {b}·{a} exactly once")));
    }
    // p divides exactly one of b, a, so p does not divide the sum.
    let sum: BigInt = b.numer() + a.numer();
    let delta2_zero = arith::legendre(&sum, p.get())? == 1;
    let delta3_zero = if delta2_zero { Some(arith::is_fourth_power_mod(&sum, p.get())?) } else { None };
    Ok(CongruenceVerdict { delta2_zero, delta3_zero })
}

/// δ3 components at one place for `(-p³, p)` with the lift `c₀ = 3·C(p,2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecificLiftReport {
    pub p: OddPrime,
    pub components: Vec<(Place, LocalInvariant, LocalInvariant)>,
}

impl SpecificLiftReport {
    pub fn at(&self, place: &Place) -> Option<(LocalInvariant, LocalInvariant)> {
        self.components.iter().find(|(v, _, _)| v == place).map(|(_, x, y)| (*x, *y))
    }
}

impl fmt::Display for SpecificLiftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "point (-{0}^3, {0}), lift c0 = 3*C({0},2)", self.p)?;
        for (v, x, y) in &self.components {
            writeln!(f, "  place {v}: ({x}, {y})")?;
        }
        write!(f, "  every other odd place: (0, 0)")
    }
}

pub fn delta3_specific_lift_family(p: &OddPrime) -> Result<SpecificLiftReport> {
    if p.residue(4) != 1 {
        return Err(Error::Inapplicable(format!("{p} is not 1 mod 4")));
    }
    let at_p = cup(&class_of_two(p), &square_class_qp(&p.to_rational(), p));
    // At R the point is (negative, positive), the Kummer class of p is
    // trivial, and c0 restricts to the zero cochain.
    let model = GaloisModel::real_place();
    let b = -p.to_rational().pow(3);
    let (kb, ka) = (kummer_mod4(&model, &b), kummer_mod4(&model, &p.to_rational()));
    let c0 = Cochain1::zero(&model, 2, 2)?;
    let (x, y) = delta3_closed_form(&kb, &ka, &c0, &f_bar_from_chi8(&model))?;
    Ok(SpecificLiftReport {
        p: p.clone(),
        components: vec![
            (Place::Odd(p.clone()), at_p, at_p),
            (Place::Real, bit_at_tau(&x), bit_at_tau(&y)),
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalFamilyVerdict {
    pub p: OddPrime,
    pub zero: bool,
    pub trace: Vec<String>,
}

impl fmt::Display for GlobalFamilyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.zero { "ZERO" } else { "NONZERO" };
        write!(f, "delta3 mod 2 of (-{0}^3, {0}): {v}", self.p)?;
        for line in &self.trace {
            write!(f, "\n  - {line}")?;
        }
        Ok(())
    }
}

/// Global δ3 mod 2 of `(-p³, p)` for `p ≡ 5 mod 8`.
///
/// The local ingredients are recomputed rather than assumed; a failure of
/// any of them is reported as an internal error.
pub fn delta3_global_family(p: &OddPrime) -> Result<GlobalFamilyVerdict> {
    if p.residue(8) != 5 {
        return Err(Error::OutOfFamily(format!("{p} is not 5 mod 8")));
    }
    let a = p.to_rational();
    let b = -a.pow(3);
    let mut trace = Vec::new();
    if !k2global::delta2_mod2_global_zero(&b, &a) {
        return Err(Error::Internal(format!("delta2 mod 2 of (-{p}^3, {p}) is nonzero")));
    }
    trace.push("delta2 mod 2 vanishes at every place, so lifts to the level-3 quotient exist".into());
    let local = delta3_local_odd(&b, &a, p);
    if local.status != Delta3Status::Zero {
        return Err(Error::Internal(format!("local delta3 at {p} is {}", local.status)));
    }
    let spec = delta3_specific_lift_family(p)?;
    trace.push(format!(
        "at {p}: no case of the local criterion fires, so some lift vanishes there \
         (the lift c0 gives {:?} and must be adjusted)",
        spec.at(&Place::Odd(p.clone())).map(|(x, y)| (x.bit(), y.bit())).unwrap_or_default()
    ));
    let real = delta3_local_real(&b, &a);
    let good: Vec<&str> = real.real_lifts.iter().filter(|l| l.vanishes()).map(|l| l.lift.as_str()).collect();
    if good.is_empty() {
        return Err(Error::Internal("no lift vanishes at R".into()));
    }
    trace.push(format!("at R: the lift {} gives (0, 0); lifts at R can be shifted by {{-1}}", good[0]));
    trace.push(format!("at odd primes other than {p}: all classes are units, components (0, 0)"));
    trace.push("at 2: the invariants of a global class sum to zero, which fixes the last place".into());
    Ok(GlobalFamilyVerdict { p: p.clone(), zero: true, trace })
}

/// Everything computed for one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub b: RationalNZ,
    pub a: RationalNZ,
    pub delta2_local: Vec<(Place, LocalInvariant)>,
    /// Full coefficients in `K2(Q)`.
    pub delta2_global: Delta2GlobalVerdict,
    /// Coefficients reduced mod 2: vanishes iff every local invariant,
    /// including the one at 2, vanishes.
    pub delta2_mod2_zero: bool,
    pub delta3_local: Vec<Delta3LocalResult>,
    pub notes: Vec<String>,
}

impl ObstructionReport {
    /// Places (and the place 2) where the mod-2 δ2 invariant is `1/2`,
    /// labelled by the corresponding tame symbol value.
    pub fn delta2_mod2_witnesses(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .delta2_local
            .iter()
            .filter(|(_, inv)| !inv.is_zero())
            .map(|(v, _)| match v {
                Place::Odd(p) => (v.to_string(), k2global::tame_symbol_odd(&self.b, &self.a, p).value_label()),
                Place::Real => (v.to_string(), "-1".to_string()),
            })
            .collect();
        let s2 = k2global::symbol_at_2(&self.b, &self.a);
        if !s2.is_trivial() {
            out.push((s2.place_label(), s2.value_label()));
        }
        out
    }

    /// The obstructed places for δ3, in order.
    pub fn delta3_nonzero_places(&self) -> Vec<&Place> {
        self.delta3_local.iter().filter(|r| r.status == Delta3Status::Nonzero).map(|r| &r.place).collect()
    }

    pub fn verdict(&self) -> String {
        if !self.delta2_mod2_zero {
            let places: Vec<String> = self.delta2_mod2_witnesses().into_iter().map(|(v, _)| v).collect();
            return format!("not on the curve: delta2 mod 2 is nonzero at {}", places.join(", "));
        }
        let bad = self.delta3_nonzero_places();
        if !bad.is_empty() {
            let places: Vec<String> = bad.iter().map(|v| v.to_string()).collect();
            return format!("not on the curve: delta3 mod 2 is nonzero at {}", places.join(", "));
        }
        "no obstruction found: delta2 mod 2 vanishes and delta3 mod 2 vanishes at every listed place; \
         the global delta3 is not decided"
            .into()
    }

    /// JSON with the stable field names; the verdict is the first note. `delta2.global` and `witnesses`
    /// describe the mod-2 layer; `delta2.k2` carries the `K2(Q)` layer.
    pub fn to_json(&self) -> Value {
        let witnesses = |ws: Vec<(String, String)>| -> Vec<Value> {
            ws.into_iter().map(|(place, value)| json!({"place": place, "value": value})).collect()
        };
        let zero = |z: bool| if z { "zero" } else { "nonzero" };
        let k2: Vec<(String, String)> = self
            .delta2_global
            .witnesses
            .iter()
            .map(|w: &TameSymbolValue| (w.place_label(), w.value_label()))
            .collect();
        let local: Vec<Value> = self
            .delta2_local
            .iter()
            .map(|(v, inv)| json!({"place": v.to_string(), "invariant": inv.bit()}))
            .collect();
        json!({
            "point": {"b": self.b.to_string(), "a": self.a.to_string()},
            "delta2": {
                "global": zero(self.delta2_mod2_zero),
                "witnesses": witnesses(self.delta2_mod2_witnesses()),
                "local": local,
                "k2": {"global": zero(self.delta2_global.zero), "witnesses": witnesses(k2)},
            },
            "delta3_mod2": {
                "local": self.delta3_local.iter().map(Delta3LocalResult::to_json).collect::<Vec<_>>(),
            },
            "notes": std::iter::once(format!("verdict: {}", self.verdict()))
                .chain(self.notes.iter().cloned())
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = |z: bool| if z { "zero" } else { "nonzero" };
        writeln!(f, "point (b, a) = ({}, {})", self.b, self.a)?;
        write!(f, "delta2 mod 2: {}", zero(self.delta2_mod2_zero))?;
        for (v, w) in self.delta2_mod2_witnesses() {
            write!(f, "  witness ({w})_{v}")?;
        }
        write!(f, "\ndelta2 in K2(Q): {}", zero(self.delta2_global.zero))?;
        for w in &self.delta2_global.witnesses {
            write!(f, "  witness {w}")?;
        }
        writeln!(f)?;
        for (v, inv) in &self.delta2_local {
            writeln!(f, "  local delta2 at {v}: {inv}")?;
        }
        writeln!(f, "delta3 mod 2:")?;
        for r in &self.delta3_local {
            for line in r.to_string().lines() {
                writeln!(f, "  {line}")?;
            }
        }
        writeln!(f, "verdict: {}", self.verdict())?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

pub fn report(b: &RationalNZ, a: &RationalNZ) -> ObstructionReport {
    let places = relevant_places(b, a);
    let delta2_local: Vec<(Place, LocalInvariant)> =
        places.iter().map(|v| (v.clone(), delta2_local(b, a, v))).collect();
    let delta3_local: Vec<Delta3LocalResult> = places.iter().map(|v| delta3_local(b, a, v)).collect();
    let mut notes = Vec::new();
    notes.push(format!(
        "reciprocity: the odd and real invariants sum to {}, the symbol at 2 is {}; {}",
        k2global::odd_and_real_invariant_sum(b, a),
        k2global::symbol_at_2(b, a).value_label(),
        if k2global::reciprocity_holds(b, a) { "consistent" } else { "INCONSISTENT" }
    ));
    for r in &delta3_local {
        let Place::Odd(p) = &r.place else { continue };
        let Ok(fast) = delta3_congruence(b, a, p) else { continue };
        let theorem_d2 = crate::localclass::delta2_local(b, a, &r.place).is_zero();
        let theorem_d3 = (r.status != Delta3Status::BlockedByDelta2).then_some(r.status == Delta3Status::Zero);
        let agrees = fast.delta2_zero == theorem_d2 && fast.delta3_zero == theorem_d3;
        notes.push(format!(
            "fast path at {p}: a+b is {}a square{}; {}",
            if fast.delta2_zero { "" } else { "not " },
            match fast.delta3_zero {
                Some(true) => " and a fourth power",
                Some(false) => " but not a fourth power",
                None => "",
            },
            if agrees { "agrees with the local criterion" } else { "DISAGREES with the local criterion" }
        ));
    }
    notes.push("odd places not listed are unobstructed; the place 2 is not evaluated".into());
    let delta2_global = k2global::delta2_global(b, a);
    let delta2_mod2_zero = k2global::delta2_mod2_global_zero(b, a);
    ObstructionReport { b: b.clone(), a: a.clone(), delta2_local, delta2_global, delta2_mod2_zero, delta3_local, notes }
}
