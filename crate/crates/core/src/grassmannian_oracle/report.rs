//! The finiteness criterion, checked by counting splittings over several fields.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::rep::{FqMatrixRep, RepSpec};
use super::splittings::{enumerate_splittings, gaussian_binomial, tangent_dimension, verify_splitting};
use super::{OracleError, OracleLimits};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The condition holds and the splittings are exactly the subsets, all isolated.
    PassFinite,
    /// The condition fails and the splittings outnumber the subsets, growing with `q`.
    PassInfinite,
    Fail,
}

impl Verdict {
    pub fn code(&self) -> &'static str {
        match self {
            Verdict::PassFinite => "pass_finite",
            Verdict::PassInfinite => "pass_infinite",
            Verdict::Fail => "fail",
        }
    }
}

/// Results at one field size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldRow {
    pub q: u32,
    pub subspaces: u128,
    pub splittings: usize,
    /// splittings with no equivariant deformation
    pub isolated: usize,
    pub max_equivariant: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitenessReport {
    pub spec: RepSpec,
    pub n: usize,
    pub distinct_across_splits: bool,
    pub subset_count: usize,
    pub rows: Vec<FieldRow>,
    pub verdict: Verdict,
}

/// Runs the enumeration at each `q` (sorted, deduplicated; the input's own `q`
/// when the list is empty), re-verifies every splitting, and compares the
/// counts with the subset count and with whether every admissible split keeps
/// isomorphic blocks on one side, read off the declared blocks.
pub fn check_finiteness_criterion(
    spec: &RepSpec,
    n: usize,
    q_list: &[u32],
    limits: &OracleLimits,
) -> Result<FinitenessReport, OracleError> {
    let mut qs: Vec<u32> = if q_list.is_empty() { vec![spec.q] } else { q_list.to_vec() };
    qs.sort_unstable();
    qs.dedup();
    let mut rows = Vec::with_capacity(qs.len());
    for q in qs {
        let at_q = RepSpec { q, ..spec.clone() };
        let rep = FqMatrixRep::build(&at_q, limits)?;
        let splits = enumerate_splittings(&rep, n)?;
        let mut isolated = 0;
        let mut max_equivariant = 0;
        for s in &splits {
            verify_splitting(&rep, s, n).map_err(|e| OracleError::SelfCheck(e.to_string()))?;
            let t = tangent_dimension(&rep, s)?;
            if t.equivariant == 0 {
                isolated += 1;
            }
            max_equivariant = max_equivariant.max(t.equivariant);
        }
        rows.push(FieldRow {
            q,
            subspaces: gaussian_binomial(rep.dimension(), n, u64::from(q)),
            splittings: splits.len(),
            isolated,
            max_equivariant,
        });
    }

    let distinct_across_splits = spec.distinct_across_splits(n);
    let subset_count = spec.subset_count(n);
    let finite = rows.iter().all(|r| r.splittings == subset_count && r.isolated == r.splittings);
    let infinite = rows.iter().all(|r| r.splittings > subset_count && r.max_equivariant > 0)
        && rows.windows(2).all(|w| w[0].splittings <= w[1].splittings);
    let verdict = match (distinct_across_splits, finite, infinite) {
        (true, true, _) => Verdict::PassFinite,
        (false, _, true) => Verdict::PassInfinite,
        _ => Verdict::Fail,
    };
    Ok(FinitenessReport { spec: spec.clone(), n, distinct_across_splits, subset_count, rows, verdict })
}

impl FinitenessReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "group": self.spec.group.tag(),
            "blocks": self.spec.blocks.iter().map(|b| json!({
                "tag": b.tag,
                "dim": b.dim,
                "character": b.character,
            })).collect::<Vec<_>>(),
            "n": self.n,
            "distinct_across_splits": self.distinct_across_splits,
            "subset_count": self.subset_count,
            "rows": self.rows.iter().map(|r| json!({
                "q": r.q,
                "subspaces": r.subspaces.to_string(),
                "splittings": r.splittings,
                "isolated": r.isolated,
                "max_equivariant_tangent": r.max_equivariant,
            })).collect::<Vec<_>>(),
            "verdict": self.verdict.code(),
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let blocks: Vec<String> =
            self.spec.blocks.iter().map(|b| format!("{}(dim {}, {:?})", b.tag, b.dim, b.character)).collect();
        let _ = writeln!(out, "group      {}", self.spec.group.tag());
        let _ = writeln!(out, "blocks     {}", blocks.join(" + "));
        let _ = writeln!(out, "n          {}", self.n);
        let _ = writeln!(out, "distinct   {}", if self.distinct_across_splits { "yes" } else { "no" });
        let _ = writeln!(out, "subsets    {}", self.subset_count);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>5} {:>12} {:>10} {:>9} {:>8}", "q", "subspaces", "splittings", "isolated", "max_eq");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5} {:>12} {:>10} {:>9} {:>8}",
                r.q, r.subspaces, r.splittings, r.isolated, r.max_equivariant
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "verdict    {}", self.verdict.code());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::rep::rep_spec_from_json;
    use super::*;

    fn spec(group: &str, blocks: &[(&str, usize, i64)], n: usize) -> RepSpec {
        rep_spec_from_json(&json!({
            "group": group,
            "q": 3,
            "blocks": blocks.iter().map(|(t, d, c)| json!({"tag": t, "dim": d, "character": [c]})).collect::<Vec<_>>(),
            "n": n,
        }))
        .unwrap()
    }

    #[test]
    fn distinct_characters_over_large_primes() {
        let s = spec("cyclic:5", &[("a", 1, 0), ("b", 1, 1), ("c", 1, 2)], 1);
        let limits = OracleLimits { max_dim: 6, max_q: 31 };
        let r = check_finiteness_criterion(&s, 1, &[31, 11], &limits).unwrap();
        assert_eq!(r.verdict, Verdict::PassFinite);
        assert_eq!(r.rows.iter().map(|x| (x.q, x.splittings)).collect::<Vec<_>>(), vec![(11, 3), (31, 3)]);
        assert_eq!(check_finiteness_criterion(&s, 1, &[31], &OracleLimits::default()).unwrap_err().code(), "field_cap");
    }

    #[test]
    fn repeated_pair_grows() {
        let s = spec("cyclic:2", &[("s", 1, 1), ("s", 1, 1)], 1);
        let r = check_finiteness_criterion(&s, 1, &[3, 5], &OracleLimits::default()).unwrap();
        assert!(!r.distinct_across_splits);
        assert_eq!(r.subset_count, 2);
        assert_eq!(r.rows.iter().map(|x| x.splittings).collect::<Vec<_>>(), vec![4, 6]);
        assert_eq!(r.verdict, Verdict::PassInfinite);
        let table = r.to_table();
        assert!(table.contains("verdict    pass_infinite"), "{table}");
        assert_eq!(r.to_json()["rows"][1]["splittings"], json!(6));
    }

    #[test]
    fn single_irreducible_block() {
        let s = spec("cyclic:4", &[("x", 2, 1)], 1);
        let r = check_finiteness_criterion(&s, 1, &[3, 7], &OracleLimits::default()).unwrap();
        assert_eq!(r.subset_count, 0);
        assert!(r.rows.iter().all(|x| x.splittings == 0));
        assert_eq!(r.verdict, Verdict::PassFinite);
    }

    #[test]
    fn repeated_blocks_on_one_side_stay_finite() {
        // I = {x} or I = {a, a}: the two copies of a are never separated
        let s = spec("cyclic:4", &[("a", 1, 0), ("a", 1, 0), ("x", 2, 1)], 2);
        let r = check_finiteness_criterion(&s, 2, &[3, 7], &OracleLimits::default()).unwrap();
        assert!(r.distinct_across_splits);
        assert_eq!(r.subset_count, 2);
        assert_eq!(r.verdict, Verdict::PassFinite);
    }
}
