//! Inputs shared by the benchmarks.

use periodfix::grassmannian_oracle::{rep_spec_from_json, FqMatrixRep, OracleLimits};
use periodfix::{Composition, CuspidalDatum};
use serde_json::json;

/// `k` blocks of size `part`, labels `p0, p1, ...`, all self-dual, with `n`
/// as close to `N / 2` as the parity allows.
pub fn distinct_datum(k: usize, part: usize) -> CuspidalDatum {
    let parts = vec![part; k];
    let ids: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let total = k * part;
    CuspidalDatum::self_dual(&parts, &refs, total / 2, total % 2).expect("valid datum")
}

pub fn composition(parts: &[usize]) -> Composition {
    Composition::new(parts.to_vec()).expect("positive parts")
}

/// `Z/r` acting through the characters `0..dim` on `F_q^dim`.
pub fn character_sum(r: u32, dim: usize, q: u32, n: usize) -> FqMatrixRep {
    let spec = rep_spec_from_json(&json!({
        "group": format!("cyclic:{r}"),
        "q": q,
        "blocks": (0..dim).map(|i| json!({"tag": format!("c{i}"), "dim": 1, "character": [i]})).collect::<Vec<_>>(),
        "n": n,
    }))
    .expect("valid spec");
    FqMatrixRep::build(&spec, &OracleLimits::default()).expect("admissible")
}
