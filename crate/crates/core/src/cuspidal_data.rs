//! Standard parabolics of `GL(N)` and cuspidal data on their Levi factors.
//!
//! A standard parabolic is encoded by its [`Composition`] `(n_1, ..., n_k)` of
//! `N`; the Levi factor is `GL(n_1) x ... x GL(n_k)`. A cuspidal representation
//! of a block is an opaque [`RepLabel`]: the only structure ever used is
//! equality of labels and the contragredient involution.
//!
//! Labels are taken to be already normalised by the unramified unitary twist,
//! i.e. two blocks carry the same label exactly when their representations
//! agree after that normalisation. Callers holding data at the level of the
//! un-normalised representation must merge labels themselves; whether a twist
//! merges labels that are distinct before normalisation is not representable
//! here.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::SCHEMA_VERSION;

/// Hard upper bound on the number of blocks `k`; subset enumeration is `2^k`.
pub const MAX_BLOCKS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("composition must have at least one part")]
    EmptyComposition,
    #[error("parts[{index}]: block sizes must be positive")]
    ZeroPart { index: usize },
    #[error("{parts} parts but {labels} labels")]
    LengthMismatch { parts: usize, labels: usize },
    #[error("2n + m = {} but the composition has total {total}", 2 * .n + .m)]
    SplitMismatch { n: usize, m: usize, total: usize },
    #[error("{k} blocks exceeds the limit of {max}")]
    TooManyBlocks { k: usize, max: usize },
    #[error("duality is not an involution at label {label:?}")]
    NonInvolutiveDual { label: String },
    #[error("label {label:?} is attached to blocks of sizes {first} and {second}")]
    InconsistentRank { label: String, first: usize, second: usize },
}

impl DatumError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            DatumError::Schema { .. } => "schema_violation",
            DatumError::EmptyComposition => "empty_composition",
            DatumError::ZeroPart { .. } => "zero_part",
            DatumError::LengthMismatch { .. } => "length_mismatch",
            DatumError::SplitMismatch { .. } => "split_mismatch",
            DatumError::TooManyBlocks { .. } => "too_many_blocks",
            DatumError::NonInvolutiveDual { .. } => "non_involutive_dual",
            DatumError::InconsistentRank { .. } => "inconsistent_rank",
        }
    }

    /// JSON-style path of the offending field.
    pub fn path(&self) -> String {
        match self {
            DatumError::Schema { path, .. } => path.clone(),
            DatumError::EmptyComposition => "$.parts".into(),
            DatumError::ZeroPart { index } => format!("$.parts[{index}]"),
            DatumError::LengthMismatch { .. } => "$.labels".into(),
            DatumError::SplitMismatch { .. } => "$.n".into(),
            DatumError::TooManyBlocks { .. } => "$.parts".into(),
            DatumError::NonInvolutiveDual { label } => format!("$.dual.{label}"),
            DatumError::InconsistentRank { .. } => "$.labels".into(),
        }
    }

    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        DatumError::Schema { path: path.into(), message: message.into() }
    }
}

/// An ordered list of positive block sizes `(n_1, ..., n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, DatumError> {
        if parts.is_empty() {
            return Err(DatumError::EmptyComposition);
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(DatumError::ZeroPart { index });
        }
        Ok(Composition { parts })
    }

    /// Builds a composition from possibly-zero block sizes, dropping zeros.
    pub fn from_nonzero(parts: impl IntoIterator<Item = usize>) -> Result<Self, DatumError> {
        Composition::new(parts.into_iter().filter(|&p| p > 0).collect())
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks `k`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `N`, the rank of the ambient `GL(N)`.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Zero-based position ranges of the blocks.
    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|&p| {
                let r = start..start + p;
                start += p;
                r
            })
            .collect()
    }

    /// For each position `0..N`, the index of the block containing it.
    pub fn block_of_position(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(b, &p)| std::iter::repeat_n(b, p))
            .collect()
    }

    /// The composition whose block at position `p` is block `order[p]` of `self`.
    ///
    /// # Panics
    /// If `order` is not a permutation of `0..k`.
    pub fn permuted(&self, order: &[usize]) -> Composition {
        assert!(is_permutation(order) && order.len() == self.len());
        Composition { parts: order.iter().map(|&i| self.parts[i]).collect() }
    }
}

pub(crate) fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    for &x in v {
        if x >= v.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Opaque label of a cuspidal representation together with the label of its
/// contragredient. A self-dual label has `dual_id == id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepLabel {
    pub id: String,
    pub dual_id: String,
}

impl RepLabel {
    pub fn new(id: impl Into<String>, dual_id: impl Into<String>) -> Self {
        RepLabel { id: id.into(), dual_id: dual_id.into() }
    }

    pub fn self_dual(id: impl Into<String>) -> Self {
        let id = id.into();
        RepLabel { dual_id: id.clone(), id }
    }

    pub fn is_self_dual(&self) -> bool {
        self.id == self.dual_id
    }

    /// Label of the contragredient representation.
    pub fn dual(&self) -> RepLabel {
        RepLabel { id: self.dual_id.clone(), dual_id: self.id.clone() }
    }
}

/// A cuspidal datum `(M_P, pi)` on `GL(2n+m)` together with the split `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuspidalDatum {
    composition: Composition,
    labels: Vec<RepLabel>,
    n: usize,
    m: usize,
}

impl CuspidalDatum {
    pub fn new(
        composition: Composition,
        labels: Vec<RepLabel>,
        n: usize,
        m: usize,
    ) -> Result<Self, DatumError> {
        let k = composition.len();
        if k > MAX_BLOCKS {
            return Err(DatumError::TooManyBlocks { k, max: MAX_BLOCKS });
        }
        if labels.len() != k {
            return Err(DatumError::LengthMismatch { parts: k, labels: labels.len() });
        }
        let total = composition.total();
        if 2 * n + m != total {
            return Err(DatumError::SplitMismatch { n, m, total });
        }

        let mut dual_of: BTreeMap<&str, &str> = BTreeMap::new();
        for l in &labels {
            for (a, b) in [(l.id.as_str(), l.dual_id.as_str()), (l.dual_id.as_str(), l.id.as_str())]
            {
                match dual_of.insert(a, b) {
                    Some(prev) if prev != b => {
                        return Err(DatumError::NonInvolutiveDual { label: a.to_string() })
                    }
                    _ => {}
                }
            }
        }

        // A label names one cuspidal representation, hence one block size; the
        // contragredient lives on a block of the same size.
        let mut rank_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (l, &size) in labels.iter().zip(composition.parts()) {
            for id in [l.id.as_str(), l.dual_id.as_str()] {
                if let Some(&first) = rank_of.get(id) {
                    if first != size {
                        return Err(DatumError::InconsistentRank {
                            label: id.to_string(),
                            first,
                            second: size,
                        });
                    }
                } else {
                    rank_of.insert(id, size);
                }
            }
        }

        Ok(CuspidalDatum { composition, labels, n, m })
    }

    /// Convenience constructor from raw parts, label ids and a (possibly
    /// partial) duality map; unlisted labels are self-dual.
    pub fn from_ids(
        parts: &[usize],
        ids: &[&str],
        dual: &BTreeMap<String, String>,
        n: usize,
        m: usize,
    ) -> Result<Self, DatumError> {
        let dual = normalize_duality(dual)?;
        let labels = ids
            .iter()
            .map(|id| {
                let d = dual.get(*id).cloned().unwrap_or_else(|| id.to_string());
                RepLabel::new(*id, d)
            })
            .collect();
        CuspidalDatum::new(Composition::new(parts.to_vec())?, labels, n, m)
    }

    /// Datum with self-dual labels.
    pub fn self_dual(parts: &[usize], ids: &[&str], n: usize, m: usize) -> Result<Self, DatumError> {
        CuspidalDatum::from_ids(parts, ids, &BTreeMap::new(), n, m)
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn parts(&self) -> &[usize] {
        self.composition.parts()
    }

    pub fn labels(&self) -> &[RepLabel] {
        &self.labels
    }

    pub fn label(&self, block: usize) -> &RepLabel {
        &self.labels[block]
    }

    pub fn k(&self) -> usize {
        self.composition.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn total(&self) -> usize {
        self.composition.total()
    }

    /// The datum `(M_{P'}, pi')` with block `order[p]` of `self` placed at position `p`.
    pub fn permuted(&self, order: &[usize]) -> CuspidalDatum {
        CuspidalDatum {
            composition: self.composition.permuted(order),
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            n: self.n,
            m: self.m,
        }
    }

    /// The contragredient datum: every label replaced by its dual.
    pub fn dualized(&self) -> CuspidalDatum {
        CuspidalDatum {
            composition: self.composition.clone(),
            labels: self.labels.iter().map(RepLabel::dual).collect(),
            n: self.n,
            m: self.m,
        }
    }

    /// True if two distinct blocks carry the same label.
    pub fn has_label_collision(&self) -> bool {
        let mut seen = BTreeSet::new();
        !self.labels.iter().all(|l| seen.insert(l.id.as_str()))
    }

    /// Normalised duality map restricted to non-self-dual labels of this datum.
    pub fn duality_map(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for l in self.labels.iter().filter(|l| !l.is_self_dual()) {
            out.insert(l.id.clone(), l.dual_id.clone());
            out.insert(l.dual_id.clone(), l.id.clone());
        }
        out
    }

    /// JSON document in the input schema (with `schema_version`).
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "parts": self.parts(),
            "labels": self.labels.iter().map(|l| l.id.clone()).collect::<Vec<_>>(),
            "dual": self.duality_map(),
            "n": self.n,
            "m": self.m,
        })
    }
}

/// Closes a partial duality map under the involution, adding the missing
/// reverse entries. Fails if some label would receive two different duals.
pub fn normalize_duality(
    dual: &BTreeMap<String, String>,
) -> Result<BTreeMap<String, String>, DatumError> {
    let mut out = dual.clone();
    for (a, b) in dual {
        match out.get(b) {
            None => {
                out.insert(b.clone(), a.clone());
            }
            Some(back) if back == a => {}
            Some(_) => return Err(DatumError::NonInvolutiveDual { label: b.clone() }),
        }
    }
    Ok(out)
}

/// Subsets `I` of `0..k` (as bitmasks) with `sum_{i in I} parts[i] == target`,
/// ordered lexicographically by their sorted index lists.
pub(crate) fn subsets_with_sum(parts: &[usize], target: usize) -> Vec<u32> {
    let k = parts.len();
    assert!(k <= MAX_BLOCKS);
    let mut out: Vec<u32> = (0u32..1 << k)
        .filter(|&mask| {
            (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| parts[i]).sum::<usize>() == target
        })
        .collect();
    out.sort_by_cached_key(|&mask| mask_indices(mask, k));
    out
}

pub(crate) fn mask_indices(mask: u32, k: usize) -> Vec<usize> {
    (0..k).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Regularity: for every `I` with `sum_{i in I} n_i = n`, no label in `I`
/// equals a label in the complement.
pub fn check_regularity(datum: &CuspidalDatum) -> bool {
    let k = datum.k();
    subsets_with_sum(datum.parts(), datum.n()).into_iter().all(|mask| {
        let inside: BTreeSet<&str> =
            (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| datum.labels[i].id.as_str()).collect();
        (0..k).filter(|&j| mask >> j & 1 == 0).all(|j| !inside.contains(datum.labels[j].id.as_str()))
    })
}

/// Evenness: the multiset of `(block size, label)` pairs splits into
/// identical pairs.
pub fn is_even(datum: &CuspidalDatum) -> bool {
    let mut counts: BTreeMap<(usize, &str), usize> = BTreeMap::new();
    for (&p, l) in datum.parts().iter().zip(&datum.labels) {
        *counts.entry((p, l.id.as_str())).or_default() += 1;
    }
    counts.values().all(|c| c % 2 == 0)
}

/// Parses and validates a datum document:
///
/// ```json
/// {"parts": [2, 3], "labels": ["a", "b"], "dual": {"a": "a*"}, "n": 2, "m": 1}
/// ```
///
/// `dual` is optional and closed under the involution; unlisted labels are
/// self-dual. `m` may be omitted, in which case it is `N - 2n`.
pub fn parse_datum(text: &str) -> Result<CuspidalDatum, DatumError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| DatumError::schema("$", e.to_string()))?;
    datum_from_json(&value)
}

pub fn datum_from_json(value: &Value) -> Result<CuspidalDatum, DatumError> {
    let obj = value.as_object().ok_or_else(|| DatumError::schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "schema_version" | "parts" | "labels" | "dual" | "n" | "m") {
            return Err(DatumError::schema(format!("$.{key}"), "unknown field"));
        }
    }
    if let Some(v) = obj.get("schema_version") {
        if v.as_u64() != Some(SCHEMA_VERSION) {
            return Err(DatumError::schema(
                "$.schema_version",
                format!("unsupported schema version (expected {SCHEMA_VERSION})"),
            ));
        }
    }

    let parts = required_array(obj, "parts")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| DatumError::schema(format!("$.parts[{i}]"), "expected a non-negative integer"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ids = required_array(obj, "labels")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| DatumError::schema(format!("$.labels[{i}]"), "expected a string"))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut dual = BTreeMap::new();
    if let Some(d) = obj.get("dual") {
        let d = d.as_object().ok_or_else(|| DatumError::schema("$.dual", "expected an object"))?;
        for (k, v) in d {
            let v = v
                .as_str()
                .ok_or_else(|| DatumError::schema(format!("$.dual.{k}"), "expected a string"))?;
            dual.insert(k.clone(), v.to_string());
        }
    }

    let n = required_uint(obj, "n")?;
    let composition = Composition::new(parts)?;
    let m = match obj.get("m") {
        Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| {
            DatumError::schema("$.m", "expected a non-negative integer")
        })?,
        None => composition.total().checked_sub(2 * n).ok_or(DatumError::SplitMismatch {
            n,
            m: 0,
            total: composition.total(),
        })?,
    };

    let dual = normalize_duality(&dual)?;
    let labels = ids
        .into_iter()
        .map(|id| {
            let d = dual.get(&id).cloned().unwrap_or_else(|| id.clone());
            RepLabel { id, dual_id: d }
        })
        .collect();
    CuspidalDatum::new(composition, labels, n, m)
}

fn required_array<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>, DatumError> {
    obj.get(key)
        .ok_or_else(|| DatumError::schema(format!("$.{key}"), "missing field"))?
        .as_array()
        .ok_or_else(|| DatumError::schema(format!("$.{key}"), "expected an array"))
}

fn required_uint(obj: &Map<String, Value>, key: &str) -> Result<usize, DatumError> {
    obj.get(key)
        .ok_or_else(|| DatumError::schema(format!("$.{key}"), "missing field"))?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| DatumError::schema(format!("$.{key}"), "expected a non-negative integer"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn datum(parts: &[usize], ids: &[&str], n: usize, m: usize) -> CuspidalDatum {
        CuspidalDatum::self_dual(parts, ids, n, m).unwrap()
    }

    /// Regularity by the literal definition over all subsets, written
    /// independently of the bitmask helpers.
    fn regular_oracle(d: &CuspidalDatum) -> bool {
        let k = d.k();
        let mut ok = true;
        let mut subset = vec![false; k];
        loop {
            let s: usize = (0..k).filter(|&i| subset[i]).map(|i| d.parts()[i]).sum();
            if s == d.n() {
                for i in (0..k).filter(|&i| subset[i]) {
                    for j in (0..k).filter(|&j| !subset[j]) {
                        if d.label(i).id == d.label(j).id {
                            ok = false;
                        }
                    }
                }
            }
            // binary increment
            let mut c = 0;
            while c < k && subset[c] {
                subset[c] = false;
                c += 1;
            }
            if c == k {
                break;
            }
            subset[c] = true;
        }
        ok
    }

    #[test]
    fn regularity_examples() {
        assert!(check_regularity(&datum(&[2, 3], &["a", "b"], 2, 1)));
        assert!(!check_regularity(&datum(&[1, 1], &["a", "a"], 1, 0)));
        let d = datum(&[2, 2, 1], &["a", "a", "b"], 2, 1);
        assert_eq!(check_regularity(&d), regular_oracle(&d));
        assert!(!check_regularity(&d));
    }

    #[test]
    fn evenness_examples() {
        assert!(is_even(&datum(&[2, 2], &["a", "a"], 2, 0)));
        assert!(!is_even(&datum(&[2, 2], &["a", "b"], 2, 0)));
        assert!(!is_even(&datum(&[1, 1, 1], &["a", "a", "a"], 1, 1)));
        assert!(!is_even(&datum(&[1, 1, 1], &["a", "b", "c"], 1, 1)));
    }

    #[test]
    fn parse_valid_document() {
        let d = parse_datum(r#"{"parts":[2,3],"labels":["a","b"],"dual":{"a":"a*","b":"b"},"n":2,"m":1}"#)
            .unwrap();
        assert_eq!(d.parts(), &[2, 3]);
        assert_eq!(d.label(0), &RepLabel::new("a", "a*"));
        assert!(d.label(1).is_self_dual());
        assert_eq!((d.n(), d.m()), (2, 1));
    }

    #[test]
    fn parse_length_mismatch() {
        let err = parse_datum(r#"{"parts":[2],"labels":["a","b"],"n":1,"m":0}"#).unwrap_err();
        assert_eq!(err, DatumError::LengthMismatch { parts: 1, labels: 2 });
        assert_eq!(err.code(), "length_mismatch");
    }

    #[test]
    fn parse_closes_the_involution() {
        let d = parse_datum(r#"{"parts":[1,1],"labels":["a","b"],"dual":{"a":"b"},"n":1,"m":0}"#)
            .unwrap();
        assert_eq!(d.label(0).dual_id, "b");
        assert_eq!(d.label(1).dual_id, "a");
    }

    #[test]
    fn parse_infers_m() {
        let d = parse_datum(r#"{"parts":[1,1],"labels":["a","b"],"n":1}"#).unwrap();
        assert_eq!(d.m(), 0);
    }

    #[test]
    fn parse_rejects_bad_inputs() {
        let cases = [
            (r#"{"parts":[1,1],"labels":["a","b"],"dual":{"a":"b","b":"c"},"n":1,"m":0}"#, "non_involutive_dual"),
            (r#"{"parts":[1,1],"labels":["a","b"],"dual":{"a":"x","c":"x"},"n":1,"m":0}"#, "non_involutive_dual"),
            (r#"{"parts":[2,3],"labels":["a","b"],"n":2,"m":2}"#, "split_mismatch"),
            (r#"{"parts":[2,0],"labels":["a","b"],"n":1,"m":0}"#, "zero_part"),
            (r#"{"parts":[],"labels":[],"n":0,"m":0}"#, "empty_composition"),
            (r#"{"parts":[1,"x"],"labels":["a","b"],"n":1,"m":0}"#, "schema_violation"),
            (r#"{"parts":[1,2],"labels":["a","a"],"n":1,"m":1}"#, "inconsistent_rank"),
            (r#"{"parts":[1,1],"labels":["a","b"],"n":1,"m":0,"extra":3}"#, "schema_violation"),
            (r#"{"parts":[1,1],"labels":["a","b"],"m":0}"#, "schema_violation"),
            (r#"[1,2]"#, "schema_violation"),
        ];
        for (text, code) in cases {
            let err = parse_datum(text).unwrap_err();
            assert_eq!(err.code(), code, "{text}: {err}");
        }
        let err = parse_datum(r#"{"parts":[1,"x"],"labels":["a","b"],"n":1,"m":0}"#).unwrap_err();
        assert_eq!(err.path(), "$.parts[1]");
    }

    #[test]
    fn too_many_blocks() {
        let parts = vec![1; MAX_BLOCKS + 1];
        let ids: Vec<String> = (0..parts.len()).map(|i| format!("x{i}")).collect();
        let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
        let err = CuspidalDatum::self_dual(&parts, &ids, 10, 1).unwrap_err();
        assert_eq!(err.code(), "too_many_blocks");
    }

    #[test]
    fn json_round_trip() {
        let d = parse_datum(r#"{"parts":[1,1,2],"labels":["a","b","c"],"dual":{"a":"b"},"n":2,"m":0}"#)
            .unwrap();
        let again = datum_from_json(&d.to_json()).unwrap();
        assert_eq!(d, again);
    }

    fn arb_datum() -> impl Strategy<Value = CuspidalDatum> {
        (1usize..=6)
            .prop_flat_map(|k| (prop::collection::vec(1usize..=3, k), prop::collection::vec(0usize..3, k)))
            .prop_flat_map(|(parts, label_idx)| {
                let total: usize = parts.iter().sum();
                (Just(parts), Just(label_idx), 0..=total / 2)
            })
            .prop_map(|(parts, label_idx, n)| {
                let total: usize = parts.iter().sum();
                // label ids depend on the block size so ranks stay consistent
                let ids: Vec<String> =
                    parts.iter().zip(&label_idx).map(|(p, l)| format!("r{p}_{l}")).collect();
                let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
                // r{p}_0 and r{p}_1 are contragredient to each other, r{p}_2 is self-dual
                let dual: BTreeMap<String, String> =
                    (1..=3).map(|p| (format!("r{p}_0"), format!("r{p}_1"))).collect();
                CuspidalDatum::from_ids(&parts, &ids, &dual, n, total - 2 * n).unwrap()
            })
    }

    proptest! {
        #[test]
        fn regularity_matches_oracle(d in arb_datum()) {
            prop_assert_eq!(check_regularity(&d), regular_oracle(&d));
        }

        #[test]
        fn regularity_invariant_under_block_permutation(d in arb_datum(), seed in any::<u64>()) {
            let k = d.k();
            let mut order: Vec<usize> = (0..k).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..k).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(check_regularity(&d), check_regularity(&d.permuted(&order)));
        }

        #[test]
        fn regularity_invariant_under_duality(d in arb_datum()) {
            prop_assert_eq!(check_regularity(&d), check_regularity(&d.dualized()));
        }

        #[test]
        fn even_implies_even_total(d in arb_datum()) {
            if is_even(&d) {
                prop_assert_eq!(d.total() % 2, 0);
            }
        }
    }
}
