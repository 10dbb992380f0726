//! Exact symbolic expressions over L-factors.
//!
//! Leaves are Rankin-Selberg factors `L(s, alpha x beta)` (complete, partial
//! `L^S` or local `L_S`), epsilon factors, the Tamagawa constant, opaque local
//! zeta and Jacquet-integral symbols, and exact rationals. Nothing in a tree is
//! ever floating point.
//!
//! Trees are kept in a light normal form by the smart constructors (no nested
//! products or sums, no zero inside a product, no inverse of zero). [`cancel`]
//! computes a canonical form: each product becomes a rational coefficient times
//! a sorted multiset of factors with integer exponents, where the partial and
//! local factors of one Rankin-Selberg pair are regrouped through
//! `L^S * L_S = L`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cuspidal_data::{CuspidalDatum, RepLabel};
use crate::weyl::{inverted_roots, BlockPermutation};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("inverse of the zero expression")]
    DivisionByZero,
    #[error("root pair ({i}, {j}) must satisfy i < j < k = {k}")]
    InvalidRootPair { i: usize, j: usize, k: usize },
    #[error("block permutation does not act on the datum's composition")]
    InconsistentBlockPermutation,
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl ExprError {
    pub fn code(&self) -> &'static str {
        match self {
            ExprError::DivisionByZero => "division_by_zero",
            ExprError::InvalidRootPair { .. } => "invalid_root_pair",
            ExprError::InconsistentBlockPermutation => "inconsistent_block_permutation",
            ExprError::Parse { .. } => "expression_parse",
        }
    }

    fn parse(path: &str, message: impl Into<String>) -> Self {
        ExprError::Parse { path: path.to_string(), message: message.into() }
    }
}

/// One side of a Rankin-Selberg pair: a label, the label of its
/// contragredient, and whether the contragredient is taken.
///
/// The presentation is canonical: `(x, dualized)` and `(dual(x), !dualized)`
/// denote the same representation and the one with the smaller label is kept
/// (for self-dual labels, the undualised one).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepRef {
    label: String,
    dual: String,
    dualized: bool,
}

impl RepRef {
    pub fn new(label: impl Into<String>, dual: impl Into<String>, dualized: bool) -> Self {
        let (label, dual) = (label.into(), dual.into());
        if dual < label || (dual == label && dualized) {
            let flipped = !dualized && dual != label;
            RepRef { label: dual, dual: label, dualized: flipped }
        } else {
            RepRef { label, dual, dualized }
        }
    }

    pub fn of(label: &RepLabel, dualized: bool) -> Self {
        RepRef::new(label.id.clone(), label.dual_id.clone(), dualized)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dual_label(&self) -> &str {
        &self.dual
    }

    pub fn is_dualized(&self) -> bool {
        self.dualized
    }

    /// Label of the representation this reference denotes.
    pub fn effective_id(&self) -> &str {
        if self.dualized {
            &self.dual
        } else {
            &self.label
        }
    }

    /// Label of the contragredient of the denoted representation.
    pub fn contragredient_id(&self) -> &str {
        if self.dualized {
            &self.label
        } else {
            &self.dual
        }
    }

    pub fn contragredient(&self) -> RepRef {
        RepRef::new(self.label.clone(), self.dual.clone(), !self.dualized)
    }
}

/// Which Euler factors an L-function keeps, relative to a finite place set `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Completion {
    Complete,
    /// `L^S`: the places outside `S`.
    Partial(String),
    /// `L_S`: the places in `S`.
    Local(String),
}

/// Opaque and concrete building blocks of an expression.
///
/// Rankin-Selberg and epsilon factors are symmetric in their two arguments,
/// so the pair is stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LLeaf {
    RankinSelberg { left: RepRef, right: RepRef, s: Rational, completion: Completion },
    Epsilon { left: RepRef, right: RepRef, s: Rational },
    /// `Delta_H^{S,*}`.
    Tamagawa { places: String },
    /// `Z_S(0, [Phi_S,] Omega_S^{Q_n}(N_{pi,S}(sigma) W^{M_P}_{phi,S}))` as one
    /// symbol keyed by the block order `sigma`.
    LocalZeta { sigma: Vec<usize>, places: String, schwartz: Option<String> },
    /// `Omega^R_S(W^{M_P}_{phi,S})`.
    Jacquet { parabolic: String, places: String },
    Rational(Rational),
}

impl LLeaf {
    pub fn rankin_selberg(a: RepRef, b: RepRef, s: Rational, completion: Completion) -> Self {
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        LLeaf::RankinSelberg { left, right, s, completion }
    }

    pub fn epsilon(a: RepRef, b: RepRef, s: Rational) -> Self {
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        LLeaf::Epsilon { left, right, s }
    }

    /// Pole order at `s = 1`: one for a complete or partial `L(s, alpha x beta)`
    /// evaluated at 1 with `alpha = beta^v`, zero otherwise. Local factors of
    /// unitary generic representations are holomorphic at `s = 1`.
    pub fn pole_order_at_one(&self) -> i64 {
        match self {
            LLeaf::RankinSelberg { left, right, s, completion } => {
                let pole = s.is_one()
                    && !matches!(completion, Completion::Local(_))
                    && left.effective_id() == right.contragredient_id();
                i64::from(pole)
            }
            _ => 0,
        }
    }
}

/// A symbolic expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LExpr {
    Zero,
    Leaf(LLeaf),
    Product(Vec<LExpr>),
    Sum(Vec<LExpr>),
    Inverse(Box<LExpr>),
}

impl From<LLeaf> for LExpr {
    fn from(leaf: LLeaf) -> Self {
        LExpr::leaf(leaf)
    }
}

impl std::ops::Mul for LExpr {
    type Output = LExpr;

    fn mul(self, other: LExpr) -> LExpr {
        LExpr::product([self, other])
    }
}

impl LExpr {
    pub fn leaf(leaf: LLeaf) -> Self {
        match leaf {
            LLeaf::Rational(r) if r.is_zero() => LExpr::Zero,
            leaf => LExpr::Leaf(leaf),
        }
    }

    pub fn one() -> Self {
        LExpr::Leaf(LLeaf::Rational(Rational::one()))
    }

    pub fn rational(r: Rational) -> Self {
        LExpr::leaf(LLeaf::Rational(r))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LExpr::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, LExpr::Leaf(LLeaf::Rational(r)) if r.is_one())
    }

    /// Flattened product; absorbs zero, drops unit factors.
    pub fn product(factors: impl IntoIterator<Item = LExpr>) -> Self {
        let mut out = Vec::new();
        for f in factors {
            match f {
                LExpr::Zero => return LExpr::Zero,
                LExpr::Product(inner) => out.extend(inner),
                f if f.is_one() => {}
                f => out.push(f),
            }
        }
        match out.len() {
            0 => LExpr::one(),
            1 => out.pop().expect("one factor"),
            _ => LExpr::Product(out),
        }
    }

    /// Flattened sum; drops zero terms.
    pub fn sum(terms: impl IntoIterator<Item = LExpr>) -> Self {
        let mut out = Vec::new();
        for t in terms {
            match t {
                LExpr::Zero => {}
                LExpr::Sum(inner) => out.extend(inner),
                t => out.push(t),
            }
        }
        match out.len() {
            0 => LExpr::Zero,
            1 => out.pop().expect("one term"),
            _ => LExpr::Sum(out),
        }
    }

    pub fn inverse(self) -> Result<Self, ExprError> {
        match self {
            LExpr::Zero => Err(ExprError::DivisionByZero),
            LExpr::Inverse(inner) => Ok(*inner),
            LExpr::Leaf(LLeaf::Rational(r)) => Ok(LExpr::rational(r.recip())),
            e => Ok(LExpr::Inverse(Box::new(e))),
        }
    }

    /// Visits every leaf.
    pub fn leaves(&self) -> Vec<&LLeaf> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a LExpr, out: &mut Vec<&'a LLeaf>) {
            match e {
                LExpr::Zero => {}
                LExpr::Leaf(l) => out.push(l),
                LExpr::Product(v) | LExpr::Sum(v) => v.iter().for_each(|x| walk(x, out)),
                LExpr::Inverse(x) => walk(x, out),
            }
        }
        walk(self, &mut out);
        out
    }
}

/// Which of the two equivalent shapes of the rank-one normalising factor to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationForm {
    /// `L(1-s, pi_i^v x pi_j) / L(1+s, pi_i x pi_j^v)`.
    #[default]
    EpsilonFree,
    /// `L(s, pi_i x pi_j^v) / (eps(s, pi_i x pi_j^v) L(1+s, pi_i x pi_j^v))`.
    WithEpsilon,
}

fn rs(datum: &CuspidalDatum, i: usize, di: bool, j: usize, dj: bool, s: Rational, c: Completion) -> LExpr {
    LExpr::Leaf(LLeaf::rankin_selberg(RepRef::of(datum.label(i), di), RepRef::of(datum.label(j), dj), s, c))
}

/// `prod_{a < b} L(1, alpha_a x alpha_b^v)` over an ordered list of representations.
pub fn l_hat_for_labels(labels: &[&RepLabel], completion: &Completion) -> LExpr {
    let mut factors = Vec::new();
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            factors.push(LExpr::Leaf(LLeaf::rankin_selberg(
                RepRef::of(labels[a], false),
                RepRef::of(labels[b], true),
                Rational::one(),
                completion.clone(),
            )));
        }
    }
    LExpr::product(factors)
}

/// `L(1, pi, n_P^-) = prod_{1 <= i < j <= k} L(1, pi_i x pi_j^v)`.
pub fn l_hat_n_minus(datum: &CuspidalDatum, completion: &Completion) -> LExpr {
    let labels: Vec<&RepLabel> = datum.labels().iter().collect();
    l_hat_for_labels(&labels, completion)
}

/// The rank-one normalising factor `n_pi(beta, s)` for the root between blocks `i < j`.
pub fn n_beta(
    datum: &CuspidalDatum,
    i: usize,
    j: usize,
    s: Rational,
    form: NormalizationForm,
) -> Result<LExpr, ExprError> {
    let k = datum.k();
    if !(i < j && j < k) {
        return Err(ExprError::InvalidRootPair { i, j, k });
    }
    let one = Rational::one();
    let denominator = rs(datum, i, false, j, true, one + s, Completion::Complete).inverse()?;
    Ok(match form {
        NormalizationForm::EpsilonFree => {
            LExpr::product([rs(datum, i, true, j, false, one - s, Completion::Complete), denominator])
        }
        NormalizationForm::WithEpsilon => {
            let eps = LExpr::Leaf(LLeaf::epsilon(
                RepRef::of(datum.label(i), false),
                RepRef::of(datum.label(j), true),
                s,
            ));
            LExpr::product([rs(datum, i, false, j, true, s, Completion::Complete), eps.inverse()?, denominator])
        }
    })
}

/// `n_pi(w, 0) = prod_{beta > 0, w beta < 0} n_pi(beta, 0)`, cancelled.
pub fn n_w(datum: &CuspidalDatum, bp: &BlockPermutation) -> Result<LExpr, ExprError> {
    if bp.source() != datum.composition() {
        return Err(ExprError::InconsistentBlockPermutation);
    }
    let factors = inverted_roots(bp)
        .into_iter()
        .map(|(i, j)| n_beta(datum, i, j, Rational::zero(), NormalizationForm::EpsilonFree))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cancel(&LExpr::product(factors)))
}

/// Pole order at `s = 1` (negative for a zero). Products add, inverses negate,
/// sums take the maximum over their terms without looking for cancellation
/// between terms. The zero expression reports 0.
pub fn pole_order_at_one(expr: &LExpr) -> i64 {
    match expr {
        LExpr::Zero => 0,
        LExpr::Leaf(l) => l.pole_order_at_one(),
        LExpr::Product(v) => v.iter().map(pole_order_at_one).sum(),
        LExpr::Sum(v) => v.iter().map(pole_order_at_one).max().unwrap_or(0),
        LExpr::Inverse(x) => -pole_order_at_one(x),
    }
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

/// Key of a Rankin-Selberg leaf with its completion stripped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RsKey {
    left: RepRef,
    right: RepRef,
    s: Rational,
}

#[derive(Debug, Default)]
struct Monomial {
    coeff: Option<Rational>,
    /// per pair: exponents of the complete factor and of `L^S`, `L_S` per place set
    rs: BTreeMap<RsKey, RsExponents>,
    other: BTreeMap<LExpr, i64>,
}

#[derive(Debug, Default, Clone)]
struct RsExponents {
    complete: i64,
    partial: BTreeMap<String, i64>,
    local: BTreeMap<String, i64>,
}

impl Monomial {
    fn unit() -> Self {
        Monomial { coeff: Some(Rational::one()), ..Default::default() }
    }

    fn add_leaf(&mut self, leaf: &LLeaf, e: i64) {
        match leaf {
            LLeaf::Rational(r) => {
                let c = self.coeff.get_or_insert_with(Rational::one);
                *c = if r.is_zero() { Rational::zero() } else { *c * rpow(*r, e) };
            }
            LLeaf::RankinSelberg { left, right, s, completion } => {
                let key = RsKey { left: left.clone(), right: right.clone(), s: *s };
                let slot = self.rs.entry(key).or_default();
                match completion {
                    Completion::Complete => slot.complete += e,
                    Completion::Partial(p) => *slot.partial.entry(p.clone()).or_default() += e,
                    Completion::Local(p) => *slot.local.entry(p.clone()).or_default() += e,
                }
            }
            leaf => *self.other.entry(LExpr::Leaf(leaf.clone())).or_default() += e,
        }
    }

    fn absorb(&mut self, other: Monomial, e: i64) {
        if let Some(c) = other.coeff {
            let cur = self.coeff.get_or_insert_with(Rational::one);
            *cur = if c.is_zero() { Rational::zero() } else { *cur * rpow(c, e) };
        }
        for (k, v) in other.rs {
            let slot = self.rs.entry(k).or_default();
            slot.complete += e * v.complete;
            for (p, x) in v.partial {
                *slot.partial.entry(p).or_default() += e * x;
            }
            for (p, x) in v.local {
                *slot.local.entry(p).or_default() += e * x;
            }
        }
        for (k, v) in other.other {
            *self.other.entry(k).or_default() += e * v;
        }
    }
}

fn rpow(r: Rational, e: i64) -> Rational {
    if e >= 0 {
        r.pow(e as i32)
    } else {
        r.recip().pow((-e) as i32)
    }
}

/// `None` for an expression that is identically zero.
fn monomial(expr: &LExpr) -> Option<Monomial> {
    match expr {
        LExpr::Zero => None,
        LExpr::Leaf(l) => {
            let mut m = Monomial::unit();
            m.add_leaf(l, 1);
            Some(m)
        }
        LExpr::Product(v) => {
            let mut m = Monomial::unit();
            for f in v {
                m.absorb(monomial(f)?, 1);
            }
            Some(m)
        }
        LExpr::Inverse(x) => {
            let mut m = Monomial::unit();
            m.absorb(monomial(x)?, -1);
            Some(m)
        }
        LExpr::Sum(v) => {
            match LExpr::sum(v.iter().map(cancel)) {
                LExpr::Zero => None,
                s @ LExpr::Sum(_) => {
                    let mut m = Monomial::unit();
                    m.other.insert(s, 1);
                    Some(m)
                }
                single => monomial(&single),
            }
        }
    }
}

/// The common part of two exponents of equal sign, zero otherwise.
fn common(a: i64, b: i64) -> i64 {
    if a > 0 && b > 0 {
        a.min(b)
    } else if a < 0 && b < 0 {
        a.max(b)
    } else {
        0
    }
}

fn power(base: LExpr, e: i64, out: &mut Vec<LExpr>) {
    for _ in 0..e.unsigned_abs() {
        out.push(if e > 0 { base.clone() } else { LExpr::Inverse(Box::new(base.clone())) });
    }
}

/// Canonical form: products become a coefficient and a sorted list of factors
/// (repeated for powers, wrapped in `Inverse` for negative exponents), equal
/// leaves in numerator and denominator cancel, and `L^S * L_S` recombines into
/// the complete `L`. Sums keep their term order. Idempotent.
pub fn cancel(expr: &LExpr) -> LExpr {
    let Some(mono) = monomial(expr) else {
        return LExpr::Zero;
    };
    let coeff = mono.coeff.unwrap_or_else(Rational::one);
    if coeff.is_zero() {
        return LExpr::Zero;
    }
    let mut factors: Vec<(LExpr, i64)> = Vec::new();
    for (key, mut ex) in mono.rs {
        // `L^S * L_S = L` is only a normal form for a single place set; with
        // several place sets the exponents are kept as they are.
        let places: BTreeSet<&String> = ex.partial.keys().chain(ex.local.keys()).collect();
        if places.len() == 1 {
            let p = places.into_iter().next().expect("one place set").clone();
            let a = ex.partial.get(&p).copied().unwrap_or(0) + ex.complete;
            let b = ex.local.get(&p).copied().unwrap_or(0) + ex.complete;
            let c = common(a, b);
            ex.complete = c;
            ex.partial.insert(p.clone(), a - c);
            ex.local.insert(p, b - c);
        }
        let leaf = |completion: Completion| {
            LExpr::Leaf(LLeaf::RankinSelberg {
                left: key.left.clone(),
                right: key.right.clone(),
                s: key.s,
                completion,
            })
        };
        factors.push((leaf(Completion::Complete), ex.complete));
        for (p, e) in ex.partial {
            factors.push((leaf(Completion::Partial(p)), e));
        }
        for (p, e) in ex.local {
            factors.push((leaf(Completion::Local(p)), e));
        }
    }
    factors.extend(mono.other);
    factors.retain(|(_, e)| *e != 0);
    factors.sort();

    let mut out = Vec::new();
    if !coeff.is_one() {
        out.push(LExpr::Leaf(LLeaf::Rational(coeff)));
    }
    for (f, e) in factors {
        power(f, e, &mut out);
    }
    match out.len() {
        0 => LExpr::one(),
        1 => out.pop().expect("one factor"),
        _ => LExpr::Product(out),
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

fn rational_to_json(r: &Rational) -> Value {
    if r.is_integer() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

fn rational_from_json(v: &Value, path: &str) -> Result<Rational, ExprError> {
    let s = v.as_str().ok_or_else(|| ExprError::parse(path, "expected a rational string"))?;
    let bad = || ExprError::parse(path, format!("malformed rational {s:?}"));
    match s.split_once('/') {
        None => s.trim().parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

fn rep_to_json(r: &RepRef) -> Value {
    json!({ "label": r.label, "dual": r.dual, "dualized": r.dualized })
}

fn rep_from_json(v: &Value, path: &str) -> Result<RepRef, ExprError> {
    let label = get_str(v, "label", path)?;
    let dual = get_str(v, "dual", path)?;
    let dualized = v
        .get("dualized")
        .and_then(Value::as_bool)
        .ok_or_else(|| ExprError::parse(&format!("{path}.dualized"), "expected a boolean"))?;
    Ok(RepRef::new(label, dual, dualized))
}

fn get_str<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a str, ExprError> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| ExprError::parse(&format!("{path}.{key}"), "expected a string"))
}

fn completion_to_json(c: &Completion, obj: &mut Map<String, Value>) {
    let (kind, places) = match c {
        Completion::Complete => ("complete", None),
        Completion::Partial(p) => ("partial", Some(p)),
        Completion::Local(p) => ("local", Some(p)),
    };
    obj.insert("completion".into(), json!(kind));
    if let Some(p) = places {
        obj.insert("places".into(), json!(p));
    }
}

impl LLeaf {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        match self {
            LLeaf::RankinSelberg { left, right, s, completion } => {
                obj.insert("kind".into(), json!("rankin_selberg"));
                obj.insert("left".into(), rep_to_json(left));
                obj.insert("right".into(), rep_to_json(right));
                obj.insert("s".into(), rational_to_json(s));
                completion_to_json(completion, &mut obj);
            }
            LLeaf::Epsilon { left, right, s } => {
                obj.insert("kind".into(), json!("epsilon"));
                obj.insert("left".into(), rep_to_json(left));
                obj.insert("right".into(), rep_to_json(right));
                obj.insert("s".into(), rational_to_json(s));
            }
            LLeaf::Tamagawa { places } => {
                obj.insert("kind".into(), json!("tamagawa"));
                obj.insert("places".into(), json!(places));
            }
            LLeaf::LocalZeta { sigma, places, schwartz } => {
                obj.insert("kind".into(), json!("local_zeta"));
                obj.insert("sigma".into(), json!(sigma.iter().map(|x| x + 1).collect::<Vec<_>>()));
                obj.insert("places".into(), json!(places));
                if let Some(phi) = schwartz {
                    obj.insert("schwartz".into(), json!(phi));
                }
            }
            LLeaf::Jacquet { parabolic, places } => {
                obj.insert("kind".into(), json!("jacquet"));
                obj.insert("parabolic".into(), json!(parabolic));
                obj.insert("places".into(), json!(places));
            }
            LLeaf::Rational(r) => {
                obj.insert("kind".into(), json!("rational"));
                obj.insert("value".into(), rational_to_json(r));
            }
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value, path: &str) -> Result<LLeaf, ExprError> {
        let kind = get_str(v, "kind", path)?;
        let pair = || -> Result<(RepRef, RepRef, Rational), ExprError> {
            let left = rep_from_json(v.get("left").unwrap_or(&Value::Null), &format!("{path}.left"))?;
            let right = rep_from_json(v.get("right").unwrap_or(&Value::Null), &format!("{path}.right"))?;
            let s = rational_from_json(v.get("s").unwrap_or(&Value::Null), &format!("{path}.s"))?;
            Ok((left, right, s))
        };
        match kind {
            "rankin_selberg" => {
                let (l, r, s) = pair()?;
                let completion = match get_str(v, "completion", path)? {
                    "complete" => Completion::Complete,
                    "partial" => Completion::Partial(get_str(v, "places", path)?.to_string()),
                    "local" => Completion::Local(get_str(v, "places", path)?.to_string()),
                    other => {
                        return Err(ExprError::parse(&format!("{path}.completion"), format!("unknown completion {other:?}")))
                    }
                };
                Ok(LLeaf::rankin_selberg(l, r, s, completion))
            }
            "epsilon" => {
                let (l, r, s) = pair()?;
                Ok(LLeaf::epsilon(l, r, s))
            }
            "tamagawa" => Ok(LLeaf::Tamagawa { places: get_str(v, "places", path)?.to_string() }),
            "local_zeta" => {
                let sigma = v
                    .get("sigma")
                    .and_then(Value::as_array)
                    .ok_or_else(|| ExprError::parse(&format!("{path}.sigma"), "expected an array"))?
                    .iter()
                    .map(|x| match x.as_u64() {
                        Some(i) if i >= 1 => Ok(i as usize - 1),
                        _ => Err(ExprError::parse(&format!("{path}.sigma"), "expected one-based indices")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if !crate::cuspidal_data::is_permutation(&sigma) {
                    return Err(ExprError::parse(&format!("{path}.sigma"), "not a permutation"));
                }
                let schwartz = match v.get("schwartz") {
                    None => None,
                    Some(x) => Some(
                        x.as_str()
                            .ok_or_else(|| ExprError::parse(&format!("{path}.schwartz"), "expected a string"))?
                            .to_string(),
                    ),
                };
                Ok(LLeaf::LocalZeta { sigma, places: get_str(v, "places", path)?.to_string(), schwartz })
            }
            "jacquet" => Ok(LLeaf::Jacquet {
                parabolic: get_str(v, "parabolic", path)?.to_string(),
                places: get_str(v, "places", path)?.to_string(),
            }),
            "rational" => Ok(LLeaf::Rational(rational_from_json(
                v.get("value").unwrap_or(&Value::Null),
                &format!("{path}.value"),
            )?)),
            other => Err(ExprError::parse(&format!("{path}.kind"), format!("unknown leaf kind {other:?}"))),
        }
    }
}

impl LExpr {
    /// Canonical JSON tree. The zero expression is the number `0`.
    pub fn to_json(&self) -> Value {
        match self {
            LExpr::Zero => json!(0),
            LExpr::Leaf(l) => json!({ "leaf": l.to_json() }),
            LExpr::Product(v) => json!({ "product": v.iter().map(LExpr::to_json).collect::<Vec<_>>() }),
            LExpr::Sum(v) => json!({ "sum": v.iter().map(LExpr::to_json).collect::<Vec<_>>() }),
            LExpr::Inverse(x) => json!({ "inverse": x.to_json() }),
        }
    }

    /// Inverse of [`LExpr::to_json`]. Input is rebuilt through the smart
    /// constructors, so non-normalised trees are normalised on the way in.
    pub fn from_json(v: &Value) -> Result<LExpr, ExprError> {
        fn go(v: &Value, path: &str) -> Result<LExpr, ExprError> {
            if v.as_i64() == Some(0) {
                return Ok(LExpr::Zero);
            }
            let obj = v.as_object().ok_or_else(|| ExprError::parse(path, "expected an object or 0"))?;
            if obj.len() != 1 {
                return Err(ExprError::parse(path, "expected exactly one node key"));
            }
            let (key, inner) = obj.iter().next().expect("one key");
            let list = |name: &str| -> Result<Vec<LExpr>, ExprError> {
                inner
                    .as_array()
                    .ok_or_else(|| ExprError::parse(&format!("{path}.{name}"), "expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| go(x, &format!("{path}.{name}[{i}]")))
                    .collect()
            };
            match key.as_str() {
                "leaf" => Ok(LExpr::leaf(LLeaf::from_json(inner, &format!("{path}.leaf"))?)),
                "product" => Ok(LExpr::product(list("product")?)),
                "sum" => Ok(LExpr::sum(list("sum")?)),
                "inverse" => go(inner, &format!("{path}.inverse"))?.inverse(),
                other => Err(ExprError::parse(path, format!("unknown node {other:?}"))),
            }
        }
        go(v, "$")
    }

    pub fn parse(text: &str) -> Result<LExpr, ExprError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ExprError::parse("$", e.to_string()))?;
        LExpr::from_json(&v)
    }
}

// ---------------------------------------------------------------------------
// LaTeX
// ---------------------------------------------------------------------------

fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '_' | '&' | '%' | '$' | '#' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '\\' => out.push_str("\\backslash "),
            '^' => out.push_str("\\hat{}"),
            '~' => out.push_str("\\sim "),
            c => out.push(c),
        }
    }
    out
}

/// Alphabetic tags such as `Phi` become control words, anything else is escaped.
fn latex_tag(s: &str) -> String {
    if s.len() > 1 && s.chars().all(|c| c.is_ascii_alphabetic()) {
        format!("\\{s}")
    } else {
        latex_escape(s)
    }
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn latex_rep(r: &RepRef) -> String {
    let base = format!("\\pi_{{{}}}", latex_escape(&r.label));
    if r.dualized {
        format!("{base}^{{\\vee}}")
    } else {
        base
    }
}

fn latex_sigma(sigma: &[usize]) -> String {
    let inner: Vec<String> = sigma.iter().map(|x| (x + 1).to_string()).collect();
    format!("\\sigma_{{({})}}", inner.join(","))
}

impl LLeaf {
    pub fn to_latex(&self) -> String {
        match self {
            LLeaf::RankinSelberg { left, right, s, completion } => {
                let name = match completion {
                    Completion::Complete => "L".to_string(),
                    Completion::Partial(p) => format!("L^{{{}}}", latex_escape(p)),
                    Completion::Local(p) => format!("L_{{{}}}", latex_escape(p)),
                };
                format!("{name}({}, {} \\times {})", latex_rational(s), latex_rep(left), latex_rep(right))
            }
            LLeaf::Epsilon { left, right, s } => {
                format!("\\varepsilon({}, {} \\times {})", latex_rational(s), latex_rep(left), latex_rep(right))
            }
            LLeaf::Tamagawa { places } => format!("\\Delta_H^{{{},*}}", latex_escape(places)),
            LLeaf::LocalZeta { sigma, places, schwartz } => {
                let p = latex_escape(places);
                let inner = format!("N_{{\\pi,{p}}}({}) W^{{M_P}}_{{\\varphi,{p}}}", latex_sigma(sigma));
                match schwartz {
                    None => format!("Z_{{{p}}}(0, \\Omega_{{{p}}}^{{Q_n}}({inner}))"),
                    Some(phi) => format!(
                        "Z_{{{p}}}(0, {}_{{{p}}}, \\Omega^{{M_{{Q_n}}}}_{{{p}}}({inner}))",
                        latex_tag(phi)
                    ),
                }
            }
            LLeaf::Jacquet { parabolic, places } => {
                let p = latex_escape(places);
                if parabolic.is_empty() {
                    format!("\\Omega_{{{p}}}(W^{{M_P}}_{{\\varphi,{p}}})")
                } else {
                    format!("\\Omega^{{{}}}_{{{p}}}(W^{{M_P}}_{{\\varphi,{p}}})", latex_escape(parabolic))
                }
            }
            LLeaf::Rational(r) => latex_rational(r),
        }
    }

    fn needs_parens_for_power(&self) -> bool {
        matches!(self, LLeaf::Tamagawa { .. } | LLeaf::Rational(_))
    }
}

impl LExpr {
    /// LaTeX rendering. Runs of identical factors are written as powers and
    /// inverses as `(-1)`-th powers.
    pub fn to_latex(&self) -> String {
        match self {
            LExpr::Zero => "0".to_string(),
            LExpr::Leaf(l) => l.to_latex(),
            LExpr::Sum(v) => v.iter().map(LExpr::to_latex).collect::<Vec<_>>().join(" + "),
            LExpr::Inverse(_) | LExpr::Product(_) => {
                let factors: Vec<&LExpr> = match self {
                    LExpr::Product(v) => v.iter().collect(),
                    e => vec![e],
                };
                // group consecutive identical (base, sign) factors
                let mut groups: Vec<(&LExpr, i64)> = Vec::new();
                for f in factors {
                    let (base, e) = match f {
                        LExpr::Inverse(x) => (x.as_ref(), -1),
                        x => (x, 1),
                    };
                    match groups.last_mut() {
                        Some((b, ex)) if *b == base && (*ex > 0) == (e > 0) => *ex += e,
                        _ => groups.push((base, e)),
                    }
                }
                let mut out = String::new();
                for (idx, (base, e)) in groups.iter().enumerate() {
                    if idx > 0 {
                        out.push(' ');
                    }
                    let body = match base {
                        LExpr::Sum(_) => format!("\\left[ {} \\right]", base.to_latex()),
                        LExpr::Product(_) | LExpr::Inverse(_) => format!("\\left( {} \\right)", base.to_latex()),
                        LExpr::Leaf(l) if *e != 1 && l.needs_parens_for_power() => format!("({})", l.to_latex()),
                        _ => base.to_latex(),
                    };
                    out.push_str(&body);
                    if *e != 1 {
                        let _ = write!(out, "^{{{e}}}");
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuspidal_data::CuspidalDatum;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn datum(parts: &[usize], ids: &[&str]) -> CuspidalDatum {
        let total: usize = parts.iter().sum();
        CuspidalDatum::self_dual(parts, ids, total / 2, total % 2).unwrap()
    }

    fn ab(a: &str, b: &str, c: Completion) -> LExpr {
        LExpr::Leaf(LLeaf::rankin_selberg(RepRef::new(a, a, false), RepRef::new(b, b, true), r(1), c))
    }

    #[test]
    fn rep_ref_canonicalisation() {
        // a has contragredient a*; a^v and a* denote the same representation
        assert_eq!(RepRef::new("a", "a*", true), RepRef::new("a*", "a", false));
        assert_eq!(RepRef::new("a", "a", true), RepRef::new("a", "a", false));
        assert_ne!(RepRef::new("a", "a*", true), RepRef::new("a", "a*", false));
        let x = RepRef::new("b", "c", false);
        assert_eq!(x.contragredient().contragredient(), x);
        assert_eq!(x.contragredient().effective_id(), "c");
    }

    #[test]
    fn l_hat_examples() {
        assert!(l_hat_n_minus(&datum(&[3], &["a"]), &Completion::Complete).is_one());
        let two = l_hat_n_minus(&datum(&[1, 2], &["a", "b"]), &Completion::Complete);
        assert_eq!(two, ab("a", "b", Completion::Complete));
        let three = l_hat_n_minus(&datum(&[1, 1, 1], &["a", "b", "c"]), &Completion::Complete);
        match three {
            LExpr::Product(v) => assert_eq!(v, vec![
                ab("a", "b", Completion::Complete),
                ab("a", "c", Completion::Complete),
                ab("b", "c", Completion::Complete),
            ]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn n_beta_forms() {
        let d = datum(&[1, 1], &["a", "b"]);
        let at0 = n_beta(&d, 0, 1, r(0), NormalizationForm::EpsilonFree).unwrap();
        let expect = LExpr::product([
            LExpr::Leaf(LLeaf::rankin_selberg(RepRef::new("a", "a", true), RepRef::new("b", "b", false), r(1), Completion::Complete)),
            ab("a", "b", Completion::Complete).inverse().unwrap(),
        ]);
        assert_eq!(at0, expect);

        let s = Rational::new(1, 2);
        let eps = n_beta(&d, 0, 1, s, NormalizationForm::WithEpsilon).unwrap();
        assert_eq!(
            eps.to_latex(),
            "L(\\frac{1}{2}, \\pi_{a} \\times \\pi_{b}) \\varepsilon(\\frac{1}{2}, \\pi_{a} \\times \\pi_{b})^{-1} L(\\frac{3}{2}, \\pi_{a} \\times \\pi_{b})^{-1}"
        );
        assert_eq!(n_beta(&d, 1, 1, s, NormalizationForm::EpsilonFree).unwrap_err().code(), "invalid_root_pair");
        assert_eq!(n_beta(&d, 1, 0, s, NormalizationForm::EpsilonFree).unwrap_err().code(), "invalid_root_pair");
    }

    #[test]
    fn epsilon_form_rendering_keeps_duals() {
        let d = CuspidalDatum::from_ids(
            &[1, 1],
            &["a", "b"],
            &[("a".to_string(), "c".to_string())].into_iter().collect(),
            1,
            0,
        )
        .unwrap();
        let e = n_beta(&d, 0, 1, r(0), NormalizationForm::WithEpsilon).unwrap();
        assert!(e.to_latex().contains("\\pi_{a} \\times \\pi_{b}"));
    }

    #[test]
    fn n_w_examples() {
        let d = datum(&[2, 3], &["a", "b"]);
        let id = BlockPermutation::from_order(d.composition(), vec![0, 1]).unwrap();
        assert!(n_w(&d, &id).unwrap().is_one());
        let swap = BlockPermutation::from_order(d.composition(), vec![1, 0]).unwrap();
        // L(1, pi_2 x pi_1^v) / L(1, pi_1 x pi_2^v)
        let expect = cancel(&LExpr::product([
            LExpr::Leaf(LLeaf::rankin_selberg(RepRef::new("b", "b", false), RepRef::new("a", "a", true), r(1), Completion::Complete)),
            ab("a", "b", Completion::Complete).inverse().unwrap(),
        ]));
        assert_eq!(n_w(&d, &swap).unwrap(), expect);
        let other = BlockPermutation::from_order(&crate::Composition::new(vec![1, 4]).unwrap(), vec![1, 0]).unwrap();
        assert_eq!(n_w(&d, &other).unwrap_err(), ExprError::InconsistentBlockPermutation);
    }

    #[test]
    fn cancel_examples() {
        let l = ab("a", "b", Completion::Complete);
        assert!(cancel(&LExpr::product([l.clone(), l.clone().inverse().unwrap()])).is_one());
        let s = Completion::Partial("S".into());
        let loc = Completion::Local("S".into());
        assert_eq!(cancel(&LExpr::product([ab("a", "b", s.clone()), ab("a", "b", loc.clone())])), l);
        // different place sets stay apart
        let t = Completion::Local("T".into());
        let kept = cancel(&LExpr::product([ab("a", "b", s.clone()), ab("a", "b", t)]));
        assert_eq!(kept.leaves().len(), 2);
        // complete / partial = local
        assert_eq!(cancel(&LExpr::product([l.clone(), ab("a", "b", s).inverse().unwrap()])), ab("a", "b", loc));
    }

    #[test]
    fn cancel_collects_rationals_and_zero() {
        let l = ab("a", "b", Completion::Complete);
        let e = LExpr::product([LExpr::rational(Rational::new(2, 3)), l.clone(), LExpr::rational(r(3))]);
        assert_eq!(cancel(&e), LExpr::Product(vec![LExpr::rational(r(2)), l.clone()]));
        assert!(cancel(&LExpr::sum([LExpr::Zero, LExpr::Zero])).is_zero());
        assert_eq!(LExpr::Zero.inverse().unwrap_err(), ExprError::DivisionByZero);
        assert!(LExpr::product([l, LExpr::Zero]).is_zero());
        assert!(LExpr::rational(r(0)).is_zero());
    }

    #[test]
    fn pole_orders() {
        let aa = ab("a", "a", Completion::Complete);
        assert_eq!(pole_order_at_one(&aa), 1);
        assert_eq!(pole_order_at_one(&aa.clone().inverse().unwrap()), -1);
        assert_eq!(pole_order_at_one(&ab("a", "a", Completion::Partial("S".into()))), 1);
        assert_eq!(pole_order_at_one(&ab("a", "a", Completion::Local("S".into()))), 0);
        assert_eq!(pole_order_at_one(&ab("a", "b", Completion::Complete)), 0);
        let sum = LExpr::sum([aa.clone(), LExpr::product([aa.clone(), aa.clone()])]);
        assert_eq!(pole_order_at_one(&sum), 2);
        assert_eq!(pole_order_at_one(&LExpr::Zero), 0);
        // a and a* are contragredient: L(1, a x a*) has no pole, L(1, a x a) does
        let a = RepRef::new("a", "a*", false);
        let astar = RepRef::new("a*", "a", false);
        let l = |x: &RepRef, y: &RepRef| LLeaf::rankin_selberg(x.clone(), y.clone(), r(1), Completion::Complete);
        assert_eq!(l(&a, &astar).pole_order_at_one(), 1);
        assert_eq!(l(&a, &a).pole_order_at_one(), 0);
        assert_eq!(l(&a, &a.contragredient()).pole_order_at_one(), 1);
    }

    #[test]
    fn latex_of_canonical_powers() {
        let l = ab("a", "b", Completion::Partial("S".into()));
        let e = cancel(&LExpr::product([l.clone(), l.clone(), LExpr::Leaf(LLeaf::Tamagawa { places: "S".into() }).inverse().unwrap()]));
        let tex = e.to_latex();
        // b is self-dual, so pi_b^v is written pi_b
        assert!(tex.contains("L^{S}(1, \\pi_{a} \\times \\pi_{b})^{2}"), "{tex}");
        let x = RepRef::new("x", "y", false);
        let leaf = LLeaf::rankin_selberg(x.clone(), x.contragredient(), r(1), Completion::Complete);
        assert_eq!(leaf.to_latex(), "L(1, \\pi_{x} \\times \\pi_{x}^{\\vee})");
        assert!(tex.contains("(\\Delta_H^{S,*})^{-1}"), "{tex}");
        assert_eq!(LExpr::Zero.to_latex(), "0");
    }

    #[test]
    fn json_round_trip_simple() {
        let e = LExpr::sum([
            LExpr::product([
                ab("a", "b", Completion::Local("S".into())),
                LExpr::Leaf(LLeaf::LocalZeta { sigma: vec![1, 0], places: "S".into(), schwartz: Some("Phi".into()) }),
            ]),
            LExpr::Leaf(LLeaf::Jacquet { parabolic: "".into(), places: "S".into() }).inverse().unwrap(),
            LExpr::rational(Rational::new(-3, 4)),
        ]);
        let text = e.to_json().to_string();
        assert_eq!(LExpr::parse(&text).unwrap(), e);
        assert_eq!(LExpr::Zero.to_json().to_string(), "0");
        assert!(LExpr::parse("0").unwrap().is_zero());
        assert_eq!(LExpr::parse(r#"{"inverse": 0}"#).unwrap_err(), ExprError::DivisionByZero);
        assert_eq!(LExpr::parse(r#"{"leaf": {"kind": "rational", "value": "1/0"}}"#).unwrap_err().code(), "expression_parse");
        assert_eq!(LExpr::parse(r#"{"wat": []}"#).unwrap_err().code(), "expression_parse");
    }
}
