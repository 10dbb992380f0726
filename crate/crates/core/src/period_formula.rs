//! Assembly of the period of a cuspidal Eisenstein series on `GL(2n+m)`
//! against `GL(n) x GL(n+m)` as a symbolic sum over fixed points:
//!
//! ```text
//! (Delta_H^{S,*})^{-1} L(1, pi, n_P^-)^{-1}
//!     sum_{sigma in Fix(pi)} L^S(1, T_sigma X) L_S(1, pi_sigma, n_{P_sigma}^-) Z_S(sigma)
//! ```
//!
//! For `m = 0` the local zeta leaf additionally carries a Schwartz function
//! tag and is evaluated at `lambda = 0`.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cuspidal_data::{CuspidalDatum, RepLabel};
use crate::fixed_points::{enumerate_fix, tangent_l_data, FixedPoint, Orientation};
use crate::lfunction::{
    l_hat_for_labels, l_hat_n_minus, n_w, Completion, ExprError, LExpr, LLeaf, Rational, RepRef,
};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("the equal-rank formula needs m = 0, got m = {m}")]
    NotEqualRank { m: usize },
    #[error("unknown output format {0:?} (expected latex or json)")]
    UnknownFormat(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl FormulaError {
    pub fn code(&self) -> &'static str {
        match self {
            FormulaError::NotEqualRank { .. } => "not_equal_rank",
            FormulaError::UnknownFormat(_) => "unknown_format",
            FormulaError::Expr(e) => e.code(),
        }
    }
}

/// Why an assembled formula is identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VanishingReason {
    /// Two blocks carry the same representation, so `L(1, pi, n_P^-)` has a
    /// pole and the right-hand side is read as 0.
    LabelCollision,
    /// `Fix(pi)` is empty.
    EmptyFix,
}

impl VanishingReason {
    pub fn code(&self) -> &'static str {
        match self {
            VanishingReason::LabelCollision => "label_collision",
            VanishingReason::EmptyFix => "empty_fix",
        }
    }
}

impl fmt::Display for VanishingReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One summand, indexed by a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub fixed_point: FixedPoint,
    /// `L^S(1, T_sigma X)`
    pub tangent: LExpr,
    /// `L_S(1, pi_sigma, n_{P_sigma}^-)`
    pub local_factor: LExpr,
    /// the opaque local zeta integral at `sigma`
    pub zeta: LExpr,
    /// product of the three
    pub expr: LExpr,
}

impl Term {
    pub fn to_json(&self) -> Value {
        json!({
            "fixed_point": self.fixed_point.to_json(),
            "tangent": self.tangent.to_json(),
            "local_factor": self.local_factor.to_json(),
            "zeta": self.zeta.to_json(),
            "expr": self.expr.to_json(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodFormula {
    pub datum: CuspidalDatum,
    pub places: String,
    pub schwartz: Option<String>,
    /// `(Delta_H^{S,*})^{-1} L(1, pi, n_P^-)^{-1}`, or zero under a label collision
    pub prefactor: LExpr,
    /// empty when the formula vanishes
    pub terms: Vec<Term>,
    pub expr: LExpr,
    pub vanishing_reason: Option<VanishingReason>,
}

impl PeriodFormula {
    pub fn is_zero(&self) -> bool {
        self.expr.is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "datum": self.datum.to_json(),
            "places": self.places,
            "schwartz": self.schwartz,
            "vanishing_reason": self.vanishing_reason.map(|r| r.code()),
            "prefactor": self.prefactor.to_json(),
            "terms": self.terms.iter().map(Term::to_json).collect::<Vec<_>>(),
            "expr": self.expr.to_json(),
        })
    }
}

fn labels_of<'a>(datum: &'a CuspidalDatum, blocks: &[usize]) -> Vec<&'a RepLabel> {
    blocks.iter().map(|&b| datum.label(b)).collect()
}

fn rs_leaf(datum: &CuspidalDatum, i: usize, di: bool, j: usize, dj: bool, c: &Completion) -> LExpr {
    LExpr::Leaf(LLeaf::rankin_selberg(
        RepRef::of(datum.label(i), di),
        RepRef::of(datum.label(j), dj),
        Rational::from_integer(1),
        c.clone(),
    ))
}

/// `L^S(1, T_sigma X) = prod_{i in I, j in I^c} L^S(1, pi_i^v x pi_j) L^S(1, pi_i x pi_j^v)`.
pub fn tangent_expr(fp: &FixedPoint, places: &str) -> LExpr {
    let datum = fp.datum();
    let partial = Completion::Partial(places.to_string());
    LExpr::product(tangent_l_data(fp).factors.iter().map(|f| match f.orientation {
        Orientation::DualFirst => rs_leaf(datum, f.i, true, f.j, false, &partial),
        Orientation::DualSecond => rs_leaf(datum, f.i, false, f.j, true, &partial),
    }))
}

/// `L_S(1, pi_sigma, n_{P_sigma}^-)`: the pairs of blocks in the order of `sigma`.
pub fn local_factor_expr(fp: &FixedPoint, places: &str) -> LExpr {
    let labels = labels_of(fp.datum(), fp.sigma().sigma());
    l_hat_for_labels(&labels, &Completion::Local(places.to_string()))
}

pub fn zeta_expr(fp: &FixedPoint, places: &str, schwartz: Option<&str>) -> LExpr {
    LExpr::Leaf(LLeaf::LocalZeta {
        sigma: fp.sigma().sigma().to_vec(),
        places: places.to_string(),
        schwartz: schwartz.map(str::to_string),
    })
}

pub fn build_term(fp: &FixedPoint, places: &str, schwartz: Option<&str>) -> Term {
    let tangent = tangent_expr(fp, places);
    let local_factor = local_factor_expr(fp, places);
    let zeta = zeta_expr(fp, places, schwartz);
    let expr = LExpr::product([tangent.clone(), local_factor.clone(), zeta.clone()]);
    Term { fixed_point: fp.clone(), tangent, local_factor, zeta, expr }
}

/// One term per fixed point, in the order of [`enumerate_fix`], regardless of
/// whether the formula vanishes.
pub fn fixed_point_terms(datum: &CuspidalDatum, places: &str, schwartz: Option<&str>) -> Vec<Term> {
    enumerate_fix(datum).iter().map(|fp| build_term(fp, places, schwartz)).collect()
}

/// `(Delta_H^{S,*})^{-1} L(1, pi, n_P^-)^{-1}`.
pub fn prefactor(datum: &CuspidalDatum, places: &str) -> LExpr {
    let tamagawa = LExpr::Leaf(LLeaf::Tamagawa { places: places.to_string() });
    let l_hat = l_hat_n_minus(datum, &Completion::Complete);
    LExpr::product([
        tamagawa.inverse().expect("leaf is nonzero"),
        l_hat.inverse().expect("product of leaves is nonzero"),
    ])
}

fn assemble(datum: &CuspidalDatum, places: &str, schwartz: Option<&str>) -> PeriodFormula {
    let zero = |reason| PeriodFormula {
        datum: datum.clone(),
        places: places.to_string(),
        schwartz: schwartz.map(str::to_string),
        prefactor: LExpr::Zero,
        terms: Vec::new(),
        expr: LExpr::Zero,
        vanishing_reason: Some(reason),
    };
    if datum.has_label_collision() {
        return zero(VanishingReason::LabelCollision);
    }
    let terms = fixed_point_terms(datum, places, schwartz);
    if terms.is_empty() {
        return zero(VanishingReason::EmptyFix);
    }
    let prefactor = prefactor(datum, places);
    let sum = LExpr::sum(terms.iter().map(|t| t.expr.clone()));
    PeriodFormula {
        datum: datum.clone(),
        places: places.to_string(),
        schwartz: schwartz.map(str::to_string),
        expr: LExpr::product([prefactor.clone(), sum]),
        prefactor,
        terms,
        vanishing_reason: None,
    }
}

/// The period of `E(phi)` for the datum, `S` given as an opaque tag.
pub fn assemble_period(datum: &CuspidalDatum, places: &str) -> PeriodFormula {
    assemble(datum, places, None)
}

/// The equal-rank (`m = 0`) period, with the Schwartz function tag threaded
/// into every local zeta leaf. The spectral parameter is fixed at 0.
pub fn assemble_equal_rank(
    datum: &CuspidalDatum,
    places: &str,
    schwartz: &str,
) -> Result<PeriodFormula, FormulaError> {
    if datum.m() != 0 {
        return Err(FormulaError::NotEqualRank { m: datum.m() });
    }
    Ok(assemble(datum, places, Some(schwartz)))
}

/// `W_{E(phi),S} = L(1, pi, n_P^-)^{-1} Omega_S(W^{M_P}_{phi,S})`, read as 0
/// when `L(1, pi, n_P^-)` has a pole.
pub fn whittaker_normalization(datum: &CuspidalDatum, places: &str) -> LExpr {
    if datum.has_label_collision() {
        return LExpr::Zero;
    }
    let jacquet = LExpr::Leaf(LLeaf::Jacquet { parabolic: String::new(), places: places.to_string() });
    LExpr::product([
        l_hat_n_minus(datum, &Completion::Complete).inverse().expect("nonzero"),
        jacquet,
    ])
}

/// The summand for `fp`, prefactor included, rebuilt along the constant-term
/// route: the Rankin-Selberg unfolding on `M_{Q_n}` gives
/// `(Delta_H^{S,*})^{-1} L^S(1, Pi_n^v x Pi_{n+m})`, the intertwining operator
/// contributes `n_pi(w, 0)`, and the unramified Whittaker functional of the
/// Eisenstein series on `M_{Q_n}` divides by `L^S` of the pairs inside each
/// of `I`, `I^c`.
pub fn term_via_normalization(
    fp: &FixedPoint,
    places: &str,
    schwartz: Option<&str>,
) -> Result<LExpr, FormulaError> {
    let datum = fp.datum();
    let partial = Completion::Partial(places.to_string());
    let tamagawa = LExpr::Leaf(LLeaf::Tamagawa { places: places.to_string() }).inverse()?;
    let unfolding = LExpr::product(
        fp.subset()
            .iter()
            .flat_map(|&i| fp.complement().iter().map(move |&j| (i, j)))
            .map(|(i, j)| rs_leaf(datum, i, true, j, false, &partial)),
    );
    let intertwining = n_w(datum, fp.sigma())?;
    let inner = LExpr::product([
        l_hat_for_labels(&labels_of(datum, fp.subset()), &partial),
        l_hat_for_labels(&labels_of(datum, fp.complement()), &partial),
    ])
    .inverse()?;
    Ok(LExpr::product([tamagawa, unfolding, intertwining, inner, zeta_expr(fp, places, schwartz)]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Latex,
    Json,
}

impl FromStr for OutputFormat {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "latex" => Ok(OutputFormat::Latex),
            "json" => Ok(OutputFormat::Json),
            other => Err(FormulaError::UnknownFormat(other.to_string())),
        }
    }
}

/// Deterministic rendering. LaTeX is the bare right-hand side (`0` when the
/// formula vanishes); JSON is the full document, pretty-printed.
pub fn emit(formula: &PeriodFormula, format: OutputFormat) -> String {
    match format {
        OutputFormat::Latex => formula.expr.to_latex(),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&formula.to_json()).expect("json values always serialise")
        }
    }
}
