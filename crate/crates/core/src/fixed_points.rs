//! The fixed-point set of a cuspidal datum on `GL(2n+m) / GL(n) x GL(n+m)`.
//!
//! A fixed point is a subset `I` of the blocks with `sum_{i in I} n_i = n`.
//! Equivalently it is the block order `sigma` listing `I` and then its
//! complement, each increasingly; `t = |I|` is the split index. The underlying
//! Weyl element of `sigma` lies in `W(P;Q_n)` for `Q_n = (n, n+m)` and this
//! gives a bijection between the two sets.

use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cuspidal_data::{mask_indices, subsets_with_sum, Composition, CuspidalDatum};
use crate::weyl::{self, BlockPermutation, WeylError};

#[derive(Debug, Clone)]
pub struct FixedPoint {
    subset: Vec<usize>,
    complement: Vec<usize>,
    sigma: BlockPermutation,
    datum: Arc<CuspidalDatum>,
}

impl PartialEq for FixedPoint {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.datum == other.datum
    }
}

impl Eq for FixedPoint {}

impl FixedPoint {
    /// Blocks in `I`, zero-based and increasing.
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// Blocks in the complement of `I`.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// The split index `t = |I|`.
    pub fn split(&self) -> usize {
        self.subset.len()
    }

    pub fn sigma(&self) -> &BlockPermutation {
        &self.sigma
    }

    /// The composition of `P_sigma`, i.e. the block sizes in the order of `sigma`.
    pub fn target(&self) -> &Composition {
        self.sigma.target()
    }

    pub fn datum(&self) -> &CuspidalDatum {
        &self.datum
    }

    /// `{"I": [...], "t": t, "sigma": [...]}` with one-based indices.
    pub fn to_json(&self) -> Value {
        json!({
            "I": self.subset.iter().map(|&i| i + 1).collect::<Vec<_>>(),
            "t": self.split(),
            "sigma": self.sigma.sigma_one_line(),
        })
    }
}

/// `Q_n`, the composition `(n, n+m)`; the empty first block is dropped when `n = 0`.
pub fn q_n(datum: &CuspidalDatum) -> Composition {
    Composition::from_nonzero([datum.n(), datum.n() + datum.m()]).expect("N >= 1")
}

/// One fixed point per subset `I` with `sum n_i = n`, lexicographic in `I`.
pub fn enumerate_fix(datum: &CuspidalDatum) -> Vec<FixedPoint> {
    let shared = Arc::new(datum.clone());
    let k = datum.k();
    subsets_with_sum(datum.parts(), datum.n())
        .into_iter()
        .map(|mask| {
            let subset = mask_indices(mask, k);
            let complement: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 0).collect();
            let order: Vec<usize> = subset.iter().chain(&complement).copied().collect();
            let sigma = BlockPermutation::from_order(datum.composition(), order)
                .expect("order is a permutation of the blocks");
            FixedPoint { subset, complement, sigma, datum: Arc::clone(&shared) }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("|Fix| = {fix} but |W(P;Q_n)| = {weyl}")]
    CountMismatch { fix: usize, weyl: usize },
    #[error("fixed point with I = {subset:?} has Weyl element {perm:?} outside W(P;Q_n)")]
    NotInWeylSet { subset: Vec<usize>, perm: Vec<usize> },
    #[error("fixed point with I = {subset:?}: w M_P w^-1 is not M_(P_sigma)")]
    LeviMismatch { subset: Vec<usize> },
}

impl BijectionError {
    pub fn code(&self) -> &'static str {
        match self {
            BijectionError::Weyl(e) => e.code(),
            BijectionError::CountMismatch { .. } => "bijection_count_mismatch",
            BijectionError::NotInWeylSet { .. } => "bijection_not_in_weyl_set",
            BijectionError::LeviMismatch { .. } => "bijection_levi_mismatch",
        }
    }
}

/// Cross-checks the bijection `Fix(pi) <-> W(P;Q_n)`: equal sizes, every
/// fixed point's Weyl element lies in `W(P;Q_n)`, and it conjugates `M_P`
/// onto `M_{P_sigma}` (it is the element of `W(P, P_sigma)` for `sigma`).
pub fn fix_matches_weyl(datum: &CuspidalDatum) -> Result<(), BijectionError> {
    let fix = enumerate_fix(datum);
    let p = datum.composition();
    let weyl_set = weyl::w_p_semicolon_q(p, &q_n(datum))?;
    if fix.len() != weyl_set.len() {
        return Err(BijectionError::CountMismatch { fix: fix.len(), weyl: weyl_set.len() });
    }
    for fp in &fix {
        let perm = fp.sigma.element().perm();
        if !weyl_set.iter().any(|w| w.perm() == perm) {
            return Err(BijectionError::NotInWeylSet {
                subset: fp.subset.clone(),
                perm: fp.sigma.element().one_line(),
            });
        }
        let conjugates_onto = weyl::w_p_q(p, fp.target())?.iter().any(|bp| bp == &fp.sigma);
        if !conjugates_onto {
            return Err(BijectionError::LeviMismatch { subset: fp.subset.clone() });
        }
    }
    Ok(())
}

/// Which side of a Rankin-Selberg pair carries the contragredient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `L(s, pi_i^v x pi_j)`
    DualFirst,
    /// `L(s, pi_i x pi_j^v)`
    DualSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangentFactor {
    pub i: usize,
    pub j: usize,
    pub orientation: Orientation,
}

impl TangentFactor {
    /// Orientation-free description `(label of the dualised side, label of the
    /// other side)`, used to compare factor multisets across fixed points.
    pub fn descriptor(&self, datum: &CuspidalDatum) -> (String, String) {
        let (dual_side, plain_side) = match self.orientation {
            Orientation::DualFirst => (self.i, self.j),
            Orientation::DualSecond => (self.j, self.i),
        };
        (datum.label(dual_side).id.clone(), datum.label(plain_side).id.clone())
    }
}

/// Factors of `L(s, T_sigma X)` = `prod_{(i,j) in I x I^c} L(s, pi_i^v x pi_j) L(s, pi_i x pi_j^v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentLData {
    pub factors: Vec<TangentFactor>,
}

pub fn tangent_l_data(fp: &FixedPoint) -> TangentLData {
    let mut factors = Vec::with_capacity(2 * fp.subset.len() * fp.complement.len());
    for &i in &fp.subset {
        for &j in &fp.complement {
            factors.push(TangentFactor { i, j, orientation: Orientation::DualFirst });
            factors.push(TangentFactor { i, j, orientation: Orientation::DualSecond });
        }
    }
    TangentLData { factors }
}

/// Whether `L(s, T_sigma X)` has a pole at `s = 1`. Both `L(s, pi_i^v x pi_j)`
/// and `L(s, pi_i x pi_j^v)` have a pole there exactly when `pi_i = pi_j`;
/// equal labels always sit on blocks of equal size.
pub fn has_pole_at_one(fp: &FixedPoint) -> bool {
    tangent_l_data(fp).factors.iter().any(|f| fp.datum.label(f.i).id == fp.datum.label(f.j).id)
}
