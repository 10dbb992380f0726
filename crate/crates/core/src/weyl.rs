//! Double cosets of Young subgroups in `S_N`, the Weyl group of `GL(N)`.
//!
//! A permutation `w` is stored in one-line notation, zero-based: `w[i]` is the
//! image of position `i`. For compositions `P` (source) and `Q` (target) the
//! minimal representatives `{}_Q W_P` of `W^Q \ W / W^P` are exactly the `w`
//! that are increasing on every block of `P` and whose inverse is increasing on
//! every block of `Q`.
//!
//! Representatives are built directly: a double coset is determined by the
//! matrix `c[a][b]` counting the positions of `P`-block `a` sent into `Q`-block
//! `b`, and the minimal element fills each `Q`-block with the contributions of
//! `P`-blocks in increasing order.

use serde_json::{json, Value};
use thiserror::Error;

use crate::cuspidal_data::{is_permutation, Composition};

/// Largest `N` accepted by the enumerators.
pub const MAX_RANK: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("compositions have different totals {source_total} and {target_total}")]
    RankMismatch { source_total: usize, target_total: usize },
    #[error("rank {rank} exceeds the limit of {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("{0:?} is not a block order for the source composition")]
    InvalidBlockOrder(Vec<usize>),
}

impl WeylError {
    pub fn code(&self) -> &'static str {
        match self {
            WeylError::RankMismatch { .. } => "rank_mismatch",
            WeylError::RankTooLarge { .. } => "rank_too_large",
            WeylError::InvalidBlockOrder(_) => "invalid_block_order",
        }
    }
}

/// A permutation of `0..N` tagged with the source and target compositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Vec<usize>,
    source: Composition,
    target: Composition,
}

impl WeylElement {
    pub fn new(perm: Vec<usize>, source: Composition, target: Composition) -> Result<Self, WeylError> {
        check_totals(&source, &target)?;
        if perm.len() != source.total() || !is_permutation(&perm) {
            return Err(WeylError::InvalidBlockOrder(perm));
        }
        Ok(WeylElement { perm, source, target })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// One-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.perm.iter().map(|&x| x + 1).collect()
    }

    pub fn source(&self) -> &Composition {
        &self.source
    }

    pub fn target(&self) -> &Composition {
        &self.target
    }

    /// Number of inversions, i.e. the Coxeter length.
    pub fn length(&self) -> usize {
        inversions(&self.perm)
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &w) in self.perm.iter().enumerate() {
            inv[w] = i;
        }
        inv
    }

    /// The defining property of `{}_Q W_P`.
    pub fn is_minimal(&self) -> bool {
        let inv = self.inverse_perm();
        let increasing_on = |v: &[usize], c: &Composition| {
            c.block_ranges().into_iter().all(|r| v[r].windows(2).all(|w| w[0] < w[1]))
        };
        increasing_on(&self.perm, &self.source) && increasing_on(&inv, &self.target)
    }

    /// `c[a][b]`: number of positions of source block `a` mapped into target block `b`.
    pub fn block_matrix(&self) -> Vec<Vec<usize>> {
        let tb = self.target.block_of_position();
        let mut c = vec![vec![0; self.target.len()]; self.source.len()];
        for (a, r) in self.source.block_ranges().into_iter().enumerate() {
            for i in r {
                c[a][tb[self.perm[i]]] += 1;
            }
        }
        c
    }

    pub fn to_json(&self) -> Value {
        json!(self.one_line())
    }
}

pub(crate) fn inversions(v: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                count += 1;
            }
        }
    }
    count
}

/// An element of `W(P, P')` viewed as a reordering of the blocks of `P`.
///
/// `sigma[p]` is the source block placed at target position `p`, so the target
/// composition is `(n_{sigma(0)}, ..., n_{sigma(k-1)})`. The underlying Weyl
/// element carries each source block onto its target position preserving the
/// internal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPermutation {
    sigma: Vec<usize>,
    element: WeylElement,
}

impl BlockPermutation {
    pub fn from_order(source: &Composition, sigma: Vec<usize>) -> Result<Self, WeylError> {
        if sigma.len() != source.len() || !is_permutation(&sigma) {
            return Err(WeylError::InvalidBlockOrder(sigma));
        }
        let target = source.permuted(&sigma);
        let src_ranges = source.block_ranges();
        let tgt_ranges = target.block_ranges();
        let mut perm = vec![0; source.total()];
        for (p, &b) in sigma.iter().enumerate() {
            for (i, j) in src_ranges[b].clone().zip(tgt_ranges[p].clone()) {
                perm[i] = j;
            }
        }
        Ok(BlockPermutation { sigma, element: WeylElement { perm, source: source.clone(), target } })
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// One-based one-line notation of `sigma`.
    pub fn sigma_one_line(&self) -> Vec<usize> {
        self.sigma.iter().map(|&x| x + 1).collect()
    }

    pub fn element(&self) -> &WeylElement {
        &self.element
    }

    pub fn source(&self) -> &Composition {
        self.element.source()
    }

    pub fn target(&self) -> &Composition {
        self.element.target()
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    pub fn to_json(&self) -> Value {
        json!({ "sigma": self.sigma_one_line(), "w": self.element.one_line() })
    }
}

fn check_totals(p: &Composition, q: &Composition) -> Result<(), WeylError> {
    if p.total() != q.total() {
        return Err(WeylError::RankMismatch { source_total: p.total(), target_total: q.total() });
    }
    Ok(())
}

fn check_rank(p: &Composition, q: &Composition) -> Result<(), WeylError> {
    check_totals(p, q)?;
    if p.total() > MAX_RANK {
        return Err(WeylError::RankTooLarge { rank: p.total(), max: MAX_RANK });
    }
    Ok(())
}

/// All non-negative integer matrices with the given row and column sums.
fn contingency_tables(rows: &[usize], cols: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn fill_row(
        remaining: usize,
        b: usize,
        caps: &[usize],
        row: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if b + 1 == caps.len() {
            if remaining <= caps[b] {
                row.push(remaining);
                out.push(row.clone());
                row.pop();
            }
            return;
        }
        for x in 0..=remaining.min(caps[b]) {
            row.push(x);
            fill_row(remaining - x, b + 1, caps, row, out);
            row.pop();
        }
    }

    fn go(
        a: usize,
        rows: &[usize],
        caps: &mut Vec<usize>,
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if a == rows.len() {
            if caps.iter().all(|&c| c == 0) {
                out.push(acc.clone());
            }
            return;
        }
        let mut choices = Vec::new();
        fill_row(rows[a], 0, caps, &mut Vec::new(), &mut choices);
        for row in choices {
            for (c, &x) in caps.iter_mut().zip(&row) {
                *c -= x;
            }
            acc.push(row.clone());
            go(a + 1, rows, caps, acc, out);
            acc.pop();
            for (c, &x) in caps.iter_mut().zip(&row) {
                *c += x;
            }
        }
    }

    let mut out = Vec::new();
    go(0, rows, &mut cols.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// The minimal element of the double coset with block matrix `c`.
fn min_rep_from_table(p: &Composition, q: &Composition, c: &[Vec<usize>]) -> Vec<usize> {
    let src = p.block_ranges();
    let tgt = q.block_ranges();
    let mut next_in_target: Vec<usize> = tgt.iter().map(|r| r.start).collect();
    let mut perm = vec![0; p.total()];
    // Q-blocks receive P-block contributions in increasing order of a
    for (a, row) in c.iter().enumerate() {
        let mut pos = src[a].start;
        for (b, &count) in row.iter().enumerate() {
            for _ in 0..count {
                perm[pos] = next_in_target[b];
                next_in_target[b] += 1;
                pos += 1;
            }
        }
    }
    perm
}

/// `{}_Q W_P`: one minimal representative per `(W^Q, W^P)` double coset, in
/// lexicographic order of one-line notation.
pub fn enumerate_min_reps(p: &Composition, q: &Composition) -> Result<Vec<WeylElement>, WeylError> {
    check_rank(p, q)?;
    let mut out: Vec<WeylElement> = contingency_tables(p.parts(), q.parts())
        .iter()
        .map(|c| WeylElement { perm: min_rep_from_table(p, q, c), source: p.clone(), target: q.clone() })
        .collect();
    out.sort();
    Ok(out)
}

/// `W(P;Q)`: minimal representatives conjugating `M_P` into `M_Q`, i.e. each
/// `P`-block lands inside a single `Q`-block.
pub fn w_p_semicolon_q(p: &Composition, q: &Composition) -> Result<Vec<WeylElement>, WeylError> {
    Ok(enumerate_min_reps(p, q)?
        .into_iter()
        .filter(|w| w.block_matrix().iter().all(|row| row.iter().filter(|&&x| x > 0).count() == 1))
        .collect())
}

/// `W(P,Q)`: minimal representatives with `w M_P w^{-1} = M_Q`, returned as
/// block permutations in the order of their Weyl elements. These are exactly
/// the block orders `sigma` with `P_sigma = Q`, so they are built directly.
pub fn w_p_q(p: &Composition, q: &Composition) -> Result<Vec<BlockPermutation>, WeylError> {
    check_rank(p, q)?;
    if p.len() != q.len() {
        return Ok(Vec::new());
    }
    fn go(p: &[usize], q: &[usize], used: &mut Vec<bool>, sigma: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let pos = sigma.len();
        if pos == q.len() {
            out.push(sigma.clone());
            return;
        }
        for b in 0..p.len() {
            if !used[b] && p[b] == q[pos] {
                used[b] = true;
                sigma.push(b);
                go(p, q, used, sigma, out);
                sigma.pop();
                used[b] = false;
            }
        }
    }
    let mut orders = Vec::new();
    go(p.parts(), q.parts(), &mut vec![false; p.len()], &mut Vec::new(), &mut orders);
    let mut out = orders.into_iter().map(|sigma| BlockPermutation::from_order(p, sigma)).collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.element.cmp(&b.element));
    Ok(out)
}

/// `P` and `Q` are associate iff `W(P,Q)` is nonempty.
pub fn are_associate(p: &Composition, q: &Composition) -> Result<bool, WeylError> {
    Ok(!w_p_q(p, q)?.is_empty())
}

/// Pairs of source blocks `(i, j)`, `i < j`, whose relative order `sigma`
/// reverses. These index the positive roots of `A_P` made negative by `w`.
pub fn inverted_roots(bp: &BlockPermutation) -> Vec<(usize, usize)> {
    let k = bp.sigma.len();
    let mut position = vec![0; k];
    for (p, &b) in bp.sigma.iter().enumerate() {
        position[b] = p;
    }
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if position[i] > position[j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// All compositions of `n`, in lexicographic order.
pub fn compositions_of(n: usize) -> Vec<Composition> {
    fn go(rest: usize, acc: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition::new(acc.clone()).expect("positive parts"));
            return;
        }
        for first in 1..=rest {
            acc.push(first);
            go(rest - first, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    /// Number of double cosets by grouping all of `S_3` under explicit left and
    /// right multiplication by the Young subgroups.
    fn s3_double_cosets(p: &Composition, q: &Composition) -> usize {
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2],
            vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0],
        ];
        let preserves = |u: &Vec<usize>, comp: &Composition| {
            let b = comp.block_of_position();
            (0..3).all(|i| b[u[i]] == b[i])
        };
        let wp: Vec<_> = perms.iter().filter(|u| preserves(u, p)).cloned().collect();
        let wq: Vec<_> = perms.iter().filter(|u| preserves(u, q)).cloned().collect();
        let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
        for w in &perms {
            let mut coset: Vec<Vec<usize>> = Vec::new();
            for v in &wq {
                for u in &wp {
                    coset.push((0..3).map(|i| v[w[u[i]]]).collect());
                }
            }
            coset.sort();
            coset.dedup();
            if !classes.contains(&coset) {
                classes.push(coset);
            }
        }
        classes.len()
    }

    #[test]
    fn borel_of_gl2() {
        let reps = enumerate_min_reps(&c(&[1, 1]), &c(&[1, 1])).unwrap();
        let lines: Vec<_> = reps.iter().map(WeylElement::one_line).collect();
        assert_eq!(lines, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn gl3_mixed_pair_matches_brute_force() {
        let (p, q) = (c(&[2, 1]), c(&[1, 2]));
        let reps = enumerate_min_reps(&p, &q).unwrap();
        assert_eq!(reps.len(), s3_double_cosets(&p, &q));
        assert_eq!(reps.len(), 2);
        for comps in compositions_of(3) {
            for other in compositions_of(3) {
                assert_eq!(enumerate_min_reps(&comps, &other).unwrap().len(), s3_double_cosets(&comps, &other));
            }
        }
    }

    #[test]
    fn full_levi_has_only_identity() {
        for n in 1..=6 {
            let reps = enumerate_min_reps(&c(&[n]), &c(&[n])).unwrap();
            assert_eq!(reps.len(), 1);
            assert_eq!(reps[0].perm(), (0..n).collect::<Vec<_>>().as_slice());
        }
    }

    #[test]
    fn w_p_semicolon_q_examples() {
        let only_identity = w_p_semicolon_q(&c(&[2, 3]), &c(&[2, 3])).unwrap();
        assert_eq!(only_identity.len(), 1);
        assert_eq!(only_identity[0].one_line(), vec![1, 2, 3, 4, 5]);
        assert_eq!(w_p_semicolon_q(&c(&[1, 1]), &c(&[2])).unwrap().len(), 1);
        assert!(w_p_semicolon_q(&c(&[2]), &c(&[1, 1])).unwrap().is_empty());
    }

    #[test]
    fn torus_into_gl2_uses_every_min_rep() {
        // W^Q = S_2 makes the identity and the transposition one double coset
        let p = c(&[1, 1]);
        let q = c(&[2]);
        assert_eq!(w_p_semicolon_q(&p, &q).unwrap(), enumerate_min_reps(&p, &q).unwrap());
    }

    #[test]
    fn w_p_q_examples() {
        let swap = w_p_q(&c(&[2, 3]), &c(&[3, 2])).unwrap();
        assert_eq!(swap.len(), 1);
        assert_eq!(swap[0].sigma(), &[1, 0]);
        assert_eq!(swap[0].element().one_line(), vec![4, 5, 1, 2, 3]);

        let distinct = w_p_q(&c(&[1, 2, 3]), &c(&[1, 2, 3])).unwrap();
        assert_eq!(distinct.len(), 1);
        assert!(distinct[0].is_identity());

        let twos = w_p_q(&c(&[2, 2]), &c(&[2, 2])).unwrap();
        let sigmas: Vec<_> = twos.iter().map(|b| b.sigma().to_vec()).collect();
        assert_eq!(sigmas, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn associate_examples() {
        assert!(are_associate(&c(&[2, 3]), &c(&[3, 2])).unwrap());
        assert!(!are_associate(&c(&[2, 3]), &c(&[1, 4])).unwrap());
        assert!(are_associate(&c(&[1, 1, 2]), &c(&[2, 1, 1])).unwrap());
        assert_eq!(
            are_associate(&c(&[2, 3]), &c(&[2, 2])).unwrap_err(),
            WeylError::RankMismatch { source_total: 5, target_total: 4 }
        );
    }

    #[test]
    fn inverted_root_examples() {
        let p = c(&[1, 2, 3]);
        let id = BlockPermutation::from_order(&p, vec![0, 1, 2]).unwrap();
        assert!(inverted_roots(&id).is_empty());
        let swap = BlockPermutation::from_order(&c(&[2, 3]), vec![1, 0]).unwrap();
        assert_eq!(inverted_roots(&swap), vec![(0, 1)]);
        // sigma = (2,3,1) one-based
        let cyc = BlockPermutation::from_order(&p, vec![1, 2, 0]).unwrap();
        assert_eq!(inverted_roots(&cyc), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn rank_cap() {
        let big = c(&[11]);
        assert_eq!(enumerate_min_reps(&big, &big).unwrap_err().code(), "rank_too_large");
    }

    #[test]
    fn block_permutation_from_order_is_minimal_in_w_p_q() {
        for comp in compositions_of(5) {
            let k = comp.len();
            let mut sigma: Vec<usize> = (0..k).collect();
            sigma.reverse();
            let bp = BlockPermutation::from_order(&comp, sigma).unwrap();
            assert!(bp.element().is_minimal());
            assert!(w_p_q(&comp, bp.target()).unwrap().contains(&bp));
        }
    }

    #[test]
    fn w_p_q_matches_filtered_double_cosets() {
        for p in compositions_of(6) {
            for q in compositions_of(6) {
                // minimal representatives whose block matrix is a permutation matrix
                let expected: Vec<WeylElement> = w_p_semicolon_q(&p, &q)
                    .unwrap()
                    .into_iter()
                    .filter(|w| {
                        let c = w.block_matrix();
                        (0..q.len()).all(|b| c.iter().filter(|row| row[b] > 0).count() == 1)
                            && c.iter().enumerate().all(|(a, row)| row.iter().all(|&x| x == 0 || x == p.parts()[a]))
                    })
                    .collect();
                let got: Vec<WeylElement> = w_p_q(&p, &q).unwrap().iter().map(|b| b.element().clone()).collect();
                assert_eq!(got, expected, "{p:?} {q:?}");
                for b in w_p_q(&p, &q).unwrap() {
                    assert!((0..q.len()).all(|j| q.parts()[j] == p.parts()[b.sigma()[j]]));
                }
                assert_eq!(are_associate(&p, &q).unwrap(), {
                    let mut a = p.parts().to_vec();
                    let mut b = q.parts().to_vec();
                    a.sort();
                    b.sort();
                    a == b
                });
            }
        }
    }

    fn next_permutation(v: &mut [usize]) -> bool {
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    #[test]
    fn inverted_roots_count_is_inversion_count_of_sigma() {
        for comp in compositions_of(5) {
            let k = comp.len();
            let mut sigma: Vec<usize> = (0..k).collect();
            loop {
                let bp = BlockPermutation::from_order(&comp, sigma.clone()).unwrap();
                assert_eq!(inverted_roots(&bp).len(), inversions(&sigma));
                if !next_permutation(&mut sigma) {
                    break;
                }
            }
        }
    }
}
