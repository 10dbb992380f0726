//! Prime fields `F_q` and their extensions `F_{q^d}`.

/// True for primes; trial division, which is plenty for field sizes in use here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Distinct prime divisors, increasing.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The prime field `F_q`; elements are `u32` in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    q: u32,
}

impl Fp {
    pub fn new(q: u32) -> Option<Fp> {
        is_prime(u64::from(q)).then_some(Fp { q })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.q)) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(b)) % u64::from(self.q)) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) + u64::from(self.q) - u64::from(b)) % u64::from(self.q)) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.q)) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a % self.q, 1 % self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "inverse of zero in F_{}", self.q);
        self.pow(a, u64::from(self.q) - 2)
    }
}

/// Polynomial over `F_q`, coefficients from the constant term up, no trailing zeros.
type Poly = Vec<u32>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(f: Fp, a: &[u32], m: &[u32]) -> Poly {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(lead, c));
            }
        }
        r.pop();
    }
    r
}

/// All monic polynomials of degree `d`, in lexicographic order of their
/// lower coefficients.
fn monic_polys(q: u32, d: usize) -> impl Iterator<Item = Poly> {
    let count = (q as u64).pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut p = Vec::with_capacity(d + 1);
        for _ in 0..d {
            p.push((idx % q as u64) as u32);
            idx /= q as u64;
        }
        p.push(1);
        p
    })
}

/// Irreducibility by trial division by every monic polynomial of degree at most `d / 2`.
fn is_irreducible(f: Fp, p: &[u32]) -> bool {
    let d = p.len() - 1;
    (1..=d / 2).all(|e| monic_polys(f.q, e).all(|m| !trim(poly_rem(f, p, &m)).is_empty()))
}

/// `F_{q^d}` as `F_q[x] / (f)` for the first irreducible monic `f` of degree
/// `d`, with a fixed primitive element. Elements are coefficient vectors of
/// length `d`.
#[derive(Debug, Clone)]
pub struct ExtField {
    fp: Fp,
    d: usize,
    modulus: Poly,
    primitive: Vec<u32>,
}

impl ExtField {
    pub fn new(fp: Fp, d: usize) -> ExtField {
        assert!(d >= 1);
        let modulus = monic_polys(fp.q, d)
            .find(|p| is_irreducible(fp, p))
            .expect("irreducible polynomials exist in every degree");
        let mut field = ExtField { fp, d, modulus, primitive: Vec::new() };
        let order = field.order() - 1;
        let factors = prime_factors(order);
        let one = field.one();
        field.primitive = (1..field.order())
            .map(|idx| field.element_from_index(idx))
            .find(|a| factors.iter().all(|p| field.pow(a, order / p) != one))
            .expect("the multiplicative group is cyclic");
        field
    }

    pub fn base(&self) -> Fp {
        self.fp
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `q^d`.
    pub fn order(&self) -> u64 {
        u64::from(self.fp.q).pow(self.d as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> &[u32] {
        &self.primitive
    }

    fn element_from_index(&self, mut idx: u64) -> Vec<u32> {
        let q = u64::from(self.fp.q);
        (0..self.d)
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect()
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.d];
        v[0] = 1;
        v
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.fp;
        let mut prod = vec![0u32; 2 * self.d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        let mut r = poly_rem(f, &prod, &self.modulus);
        r.resize(self.d, 0);
        r
    }

    pub fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let (mut base, mut acc) = (a.to_vec(), self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `alpha^{(q^d - 1) e / r}` for the primitive element `alpha`: the value
    /// at a generator of the character `t -> zeta_r^{e t}`. `None` unless the
    /// order of `zeta_r^e` divides `q^d - 1`.
    pub fn root_of_unity_power(&self, e: u64, r: u64) -> Option<Vec<u32>> {
        let e = e % r;
        let g = gcd(e, r);
        let (e, r) = (e / g, r / g);
        let m = self.order() - 1;
        m.is_multiple_of(r).then(|| self.pow(&self.primitive, m / r * e))
    }

    /// Matrix of multiplication by `c` in the basis `1, x, ..., x^{d-1}`,
    /// acting on column vectors.
    pub fn multiplication_matrix(&self, c: &[u32]) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0u32; self.d]; self.d];
        let mut xj = self.one();
        let x: Vec<u32> = (0..self.d).map(|i| u32::from(i == 1)).collect();
        for j in 0..self.d {
            let col = self.mul(c, &xj);
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col[i];
            }
            xj = self.mul(&xj, &x);
        }
        m
    }
}
