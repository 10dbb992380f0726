//! Dense linear algebra over a prime field. Matrices are row-major
//! `Vec<Vec<u32>>` acting on column vectors.

use super::field::Fp;

pub type Mat = Vec<Vec<u32>>;

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
}

pub fn mat_mul(f: Fp, a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0, |acc, l| f.add(acc, f.mul(row[l], b[l][j]))))
                .collect()
        })
        .collect()
}

pub fn mat_vec(f: Fp, a: &Mat, v: &[u32]) -> Vec<u32> {
    a.iter().map(|row| row.iter().zip(v).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))).collect()
}

pub fn mat_pow(f: Fp, a: &Mat, mut e: u64) -> Mat {
    let (mut base, mut acc) = (a.clone(), identity(a.len()));
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(f, &acc, &base);
        }
        base = mat_mul(f, &base, &base);
        e >>= 1;
    }
    acc
}

pub fn scale(f: Fp, a: &Mat, c: u32) -> Mat {
    a.iter().map(|row| row.iter().map(|&x| f.mul(x, c)).collect()).collect()
}

pub fn mat_add(f: Fp, a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| f.add(x, y)).collect()).collect()
}

/// Reduced row echelon form of the row space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` in the basis `rows`, or `None` if `v` is not in the span.
    pub fn coordinates(&self, f: Fp, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&p| v[p]).collect();
        let mut residual = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&coords) {
            for (x, &y) in residual.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        residual.iter().all(|&x| x == 0).then_some(coords)
    }
}

pub fn rref(f: Fp, rows: &[Vec<u32>], ncols: usize) -> Rref {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                let pivot = m[r].clone();
                for (x, &y) in m[i].iter_mut().zip(&pivot).take(ncols) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Rref { rows: m, pivots }
}

/// Rank by plain forward elimination, independent of [`rref`].
pub fn rank(f: Fp, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) {
            m.swap(r, p);
            let inv = f.inv(m[r][c]);
            for i in r + 1..m.len() {
                let factor = f.mul(m[i][c], inv);
                let pivot = m[r].clone();
                for (x, &y) in m[i].iter_mut().zip(&pivot).take(ncols).skip(c) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
            r += 1;
        }
    }
    r
}

/// Basis of `{x : A x = 0}`.
pub fn kernel(f: Fp, a: &Mat, ncols: usize) -> Vec<Vec<u32>> {
    let red = rref(f, a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u32; ncols];
            x[fc] = 1;
            for (row, &p) in red.rows.iter().zip(&red.pivots) {
                x[p] = f.neg(row[fc]);
            }
            x
        })
        .collect()
}
