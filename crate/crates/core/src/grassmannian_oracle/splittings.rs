//! Exhaustive enumeration of invariant splittings `F_q^N = V + W`.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::field::Fp;
use super::linalg::{kernel, mat_add, mat_mul, mat_vec, rank, rref, scale, Mat, Rref};
use super::rep::FqMatrixRep;
use super::OracleError;

/// `V` of dimension `n` and an invariant complement `W`, both in reduced row
/// echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantSplitting {
    pub v_basis: Vec<Vec<u32>>,
    pub w_basis: Vec<Vec<u32>>,
}

impl InvariantSplitting {
    pub fn to_json(&self) -> Value {
        json!({ "V": self.v_basis, "W": self.w_basis })
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = u128::from(q);
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Increasing `k`-subsets of `0..n`, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Is the row space of an RREF matrix with the given pivots stable under `g`?
fn stable(f: Fp, g: &Mat, rows: &[Vec<u32>], pivots: &[usize], scratch: &mut Vec<u32>) -> bool {
    rows.iter().all(|row| {
        scratch.clear();
        scratch.extend(g.iter().map(|gr| gr.iter().zip(row).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))));
        for (r, &p) in rows.iter().zip(pivots) {
            let c = scratch[p];
            if c != 0 {
                for (x, &y) in scratch.iter_mut().zip(r) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        scratch.iter().all(|&x| x == 0)
    })
}

/// The averaged projector onto `V` along some complement is equivariant; its
/// kernel is an invariant complement.
fn invariant_complement(rep: &FqMatrixRep, v: &Rref) -> Vec<Vec<u32>> {
    let f = rep.field();
    let dim = rep.dimension();
    // projector onto V along the coordinate complement: column p_i is row i
    let mut p = vec![vec![0u32; dim]; dim];
    for (row, &piv) in v.rows.iter().zip(&v.pivots) {
        for (r, &x) in row.iter().enumerate() {
            p[r][piv] = x;
        }
    }
    let mut avg = vec![vec![0u32; dim]; dim];
    for (g, g_inv) in rep.elements() {
        avg = mat_add(f, &avg, &mat_mul(f, &mat_mul(f, g, &p), g_inv));
    }
    let order = (rep.group_order() % u64::from(f.q())) as u32;
    let avg = scale(f, &avg, f.inv(order));
    let ker = kernel(f, &avg, dim);
    rref(f, &ker, dim).rows
}

/// All `n`-dimensional invariant subspaces `V` of the representation, each
/// with the invariant complement obtained by averaging a projector. Subspaces
/// are visited once each via their reduced row echelon form, pivot patterns in
/// lexicographic order; the order of the result does not depend on the
/// thread count.
pub fn enumerate_splittings(rep: &FqMatrixRep, n: usize) -> Result<Vec<InvariantSplitting>, OracleError> {
    let dim = rep.dimension();
    if 2 * n > dim {
        return Err(OracleError::InvalidN { n, dim });
    }
    let f = rep.field();
    let q = f.q();
    let patterns = combinations(dim, n);
    let per_pattern: Vec<(u128, Vec<Vec<Vec<u32>>>)> = patterns
        .par_iter()
        .map(|pivots| {
            // free entries: row i, column c > pivots[i], c not a pivot
            let free: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| ((pivots[i] + 1)..dim).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let mut rows: Vec<Vec<u32>> = (0..n)
                .map(|i| (0..dim).map(|c| u32::from(c == pivots[i])).collect())
                .collect();
            let mut digits = vec![0u32; free.len()];
            let mut scratch = Vec::with_capacity(dim);
            let mut visited = 0u128;
            let mut found = Vec::new();
            loop {
                visited += 1;
                if rep.generators().iter().all(|g| stable(f, g, &rows, pivots, &mut scratch)) {
                    found.push(rows.clone());
                }
                // odometer over the free entries
                let mut pos = 0;
                loop {
                    if pos == free.len() {
                        return (visited, found);
                    }
                    digits[pos] += 1;
                    if digits[pos] == q {
                        digits[pos] = 0;
                        let (i, c) = free[pos];
                        rows[i][c] = 0;
                        pos += 1;
                    } else {
                        let (i, c) = free[pos];
                        rows[i][c] = digits[pos];
                        break;
                    }
                }
            }
        })
        .collect();

    let visited: u128 = per_pattern.iter().map(|(v, _)| v).sum();
    let expected = gaussian_binomial(dim, n, u64::from(q));
    if visited != expected {
        return Err(OracleError::SelfCheck(format!(
            "visited {visited} subspaces, the Gaussian binomial is {expected}"
        )));
    }
    let vs: Vec<(Vec<Vec<u32>>, Vec<usize>)> = per_pattern
        .into_iter()
        .zip(&patterns)
        .flat_map(|((_, found), pivots)| found.into_iter().map(move |rows| (rows, pivots.clone())))
        .collect();
    Ok(vs
        .into_par_iter()
        .map(|(rows, pivots)| {
            let v = Rref { rows, pivots };
            let w_basis = invariant_complement(rep, &v);
            InvariantSplitting { v_basis: v.rows, w_basis }
        })
        .collect())
}

/// Independent re-check of a splitting: dimensions, `V + W = F_q^N`, and
/// stability of both pieces under every generator, by rank counts.
pub fn verify_splitting(rep: &FqMatrixRep, split: &InvariantSplitting, n: usize) -> Result<(), OracleError> {
    let f = rep.field();
    let dim = rep.dimension();
    let fail = |msg: &str| Err(OracleError::InvalidSplit(msg.to_string()));
    let well_formed = |b: &[Vec<u32>]| b.iter().all(|v| v.len() == dim && v.iter().all(|&x| x < f.q()));
    if n > dim {
        return fail("n exceeds N");
    }
    if !well_formed(&split.v_basis) || !well_formed(&split.w_basis) {
        return fail("basis vectors have the wrong length or entries");
    }
    if rank(f, &split.v_basis) != n || split.v_basis.len() != n {
        return fail("V does not have dimension n");
    }
    if rank(f, &split.w_basis) != dim - n || split.w_basis.len() != dim - n {
        return fail("W does not have dimension N - n");
    }
    let union: Vec<Vec<u32>> = split.v_basis.iter().chain(&split.w_basis).cloned().collect();
    if rank(f, &union) != dim {
        return fail("V and W do not span");
    }
    for g in rep.generators() {
        for (basis, name) in [(&split.v_basis, "V"), (&split.w_basis, "W")] {
            for b in basis.iter() {
                let mut ext = basis.clone();
                ext.push(mat_vec(f, g, b));
                if rank(f, &ext) != basis.len() {
                    return fail(&format!("{name} is not stable"));
                }
            }
        }
    }
    Ok(())
}

/// Matrices of the generators restricted to the span of an RREF basis.
fn restricted(rep: &FqMatrixRep, basis: &[Vec<u32>]) -> Result<Vec<Mat>, OracleError> {
    let f = rep.field();
    let red = rref(f, basis, rep.dimension());
    if red.rank() != basis.len() {
        return Err(OracleError::InvalidSplit("basis is not linearly independent".into()));
    }
    rep.generators()
        .iter()
        .map(|g| {
            let cols: Vec<Vec<u32>> = red
                .rows
                .iter()
                .map(|b| {
                    red.coordinates(f, &mat_vec(f, g, b))
                        .ok_or_else(|| OracleError::InvalidSplit("subspace is not stable".into()))
                })
                .collect::<Result<_, _>>()?;
            // column j holds the image of basis vector j
            Ok((0..basis.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect())
        })
        .collect()
}

/// `dim {X : b_g X = X a_g for all g}` for actions `a` (dimension `s`) and
/// `b` (dimension `t`), X of shape `t x s`.
pub fn intertwiner_dimension(f: Fp, a: &[Mat], b: &[Mat]) -> usize {
    let s = a.first().map_or(0, Vec::len);
    let t = b.first().map_or(0, Vec::len);
    let unknowns = s * t;
    if unknowns == 0 {
        return 0;
    }
    let mut eqs = Vec::new();
    for (ag, bg) in a.iter().zip(b) {
        for r in 0..t {
            for c in 0..s {
                // (b X)[r][c] - (X a)[r][c]
                let mut eq = vec![0u32; unknowns];
                for l in 0..t {
                    eq[l * s + c] = f.add(eq[l * s + c], bg[r][l]);
                }
                for l in 0..s {
                    eq[r * s + l] = f.sub(eq[r * s + l], ag[l][c]);
                }
                eqs.push(eq);
            }
        }
    }
    unknowns - rref(f, &eqs, unknowns).rank()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangentDimension {
    /// `dim Hom(V, W) + dim Hom(W, V)`
    pub total: usize,
    /// `dim Hom_G(V, W) + dim Hom_G(W, V)`
    pub equivariant: usize,
}

pub fn tangent_dimension(rep: &FqMatrixRep, split: &InvariantSplitting) -> Result<TangentDimension, OracleError> {
    let (v, w) = (split.v_basis.len(), split.w_basis.len());
    if v + w != rep.dimension() {
        return Err(OracleError::InvalidSplit("dimensions do not add up to N".into()));
    }
    let f = rep.field();
    let av = restricted(rep, &split.v_basis)?;
    let aw = restricted(rep, &split.w_basis)?;
    Ok(TangentDimension {
        total: 2 * v * w,
        equivariant: intertwiner_dimension(f, &av, &aw) + intertwiner_dimension(f, &aw, &av),
    })
}

#[cfg(test)]
mod tests {
    use super::super::rep::rep_spec_from_json;
    use super::super::OracleLimits;
    use super::*;

    fn rep(group: &str, q: u32, blocks: &[(&str, usize, i64)]) -> FqMatrixRep {
        let v = json!({
            "group": group,
            "q": q,
            "blocks": blocks.iter().map(|(t, d, c)| json!({"tag": t, "dim": d, "character": [c]})).collect::<Vec<_>>(),
            "n": 1,
        });
        let limits = OracleLimits { max_dim: 6, max_q: 31 };
        FqMatrixRep::build(&rep_spec_from_json(&v).unwrap(), &limits).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 1, 5), 31);
        assert_eq!(gaussian_binomial(5, 0, 7), 1);
        assert_eq!(gaussian_binomial(2, 3, 7), 0);
        assert_eq!(combinations(4, 2).len(), 6);
    }

    #[test]
    fn distinct_characters_give_eigenlines() {
        let r = rep("cyclic:3", 7, &[("a", 1, 0), ("b", 1, 1), ("c", 1, 2)]);
        let splits = enumerate_splittings(&r, 1).unwrap();
        assert_eq!(splits.len(), 3);
        let lines: Vec<Vec<Vec<u32>>> = splits.iter().map(|s| s.v_basis.clone()).collect();
        assert_eq!(lines, vec![vec![vec![1, 0, 0]], vec![vec![0, 1, 0]], vec![vec![0, 0, 1]]]);
        for s in &splits {
            verify_splitting(&r, s, 1).unwrap();
            assert_eq!(tangent_dimension(&r, s).unwrap(), TangentDimension { total: 4, equivariant: 0 });
        }
    }

    #[test]
    fn irreducible_plane_has_no_invariant_line() {
        let r = rep("cyclic:4", 3, &[("x", 2, 1)]);
        assert!(enumerate_splittings(&r, 1).unwrap().is_empty());
    }

    #[test]
    fn repeated_character_plane() {
        let r = rep("cyclic:2", 5, &[("s", 1, 1), ("s", 1, 1)]);
        let splits = enumerate_splittings(&r, 1).unwrap();
        assert_eq!(splits.len(), 6);
        for s in &splits {
            verify_splitting(&r, s, 1).unwrap();
            assert_eq!(tangent_dimension(&r, s).unwrap().equivariant, 2);
        }
    }

    #[test]
    fn degenerate_n_zero() {
        let r = rep("cyclic:2", 3, &[("a", 1, 0), ("b", 1, 1)]);
        let splits = enumerate_splittings(&r, 0).unwrap();
        assert_eq!(splits.len(), 1);
        assert_eq!(tangent_dimension(&r, &splits[0]).unwrap().total, 0);
        assert_eq!(enumerate_splittings(&r, 2).unwrap_err().code(), "invalid_n");
    }

    #[test]
    fn verification_rejects_bad_splittings() {
        let r = rep("cyclic:2", 3, &[("a", 1, 0), ("b", 1, 1)]);
        let not_stable = InvariantSplitting { v_basis: vec![vec![1, 1]], w_basis: vec![vec![0, 1]] };
        assert_eq!(verify_splitting(&r, &not_stable, 1).unwrap_err().code(), "invalid_split");
        assert!(tangent_dimension(&r, &not_stable).is_err());
        let not_spanning = InvariantSplitting { v_basis: vec![vec![1, 0]], w_basis: vec![vec![1, 0]] };
        assert!(verify_splitting(&r, &not_spanning, 1).is_err());
    }

    #[test]
    fn order_is_independent_of_thread_count() {
        let r = rep("cyclic:2", 5, &[("s", 1, 1), ("s", 1, 1), ("t", 1, 0)]);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| enumerate_splittings(&r, 1).unwrap())
        };
        let one = run(1);
        // q + 1 lines in the isotypic plane and the trivial line
        assert_eq!(one.len(), 7);
        assert_eq!(one, run(4));
    }
}
