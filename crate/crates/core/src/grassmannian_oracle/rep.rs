//! Representation specs and their realization as matrices over `F_q`.
//!
//! A block with character `(e_1, ..., e_g)` and dimension `d` is the field
//! `F_{q^d}` with the `i`-th generator acting by multiplication by
//! `zeta_{r_i}^{e_i}`. It is irreducible of dimension `d` exactly when the
//! exponent vector has a Frobenius orbit (multiplication by `q`) of size `d`,
//! and two blocks are isomorphic exactly when their exponent vectors lie in
//! one orbit.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::field::{gcd, ExtField, Fp};
use super::linalg::{identity, mat_mul, mat_pow, Mat};
use super::{OracleError, OracleLimits};
use crate::cuspidal_data::subsets_with_sum;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u32),
    Product(u32, u32),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec, OracleError> {
        let bad = || OracleError::schema("$.group", format!("expected \"cyclic:r\" or \"product:r1,r2\", got {text:?}"));
        let order = |s: &str| s.trim().parse::<u32>().ok().filter(|&r| r >= 1).ok_or_else(bad);
        match text.split_once(':') {
            Some(("cyclic", r)) => Ok(GroupSpec::Cyclic(order(r)?)),
            Some(("product", rs)) => {
                let (a, b) = rs.split_once(',').ok_or_else(bad)?;
                Ok(GroupSpec::Product(order(a)?, order(b)?))
            }
            _ => Err(bad()),
        }
    }

    pub fn orders(&self) -> Vec<u32> {
        match *self {
            GroupSpec::Cyclic(r) => vec![r],
            GroupSpec::Product(a, b) => vec![a, b],
        }
    }

    pub fn order(&self) -> u64 {
        self.orders().iter().map(|&r| u64::from(r)).product()
    }

    pub fn generator_count(&self) -> usize {
        self.orders().len()
    }

    pub fn tag(&self) -> String {
        match self {
            GroupSpec::Cyclic(r) => format!("cyclic:{r}"),
            GroupSpec::Product(a, b) => format!("product:{a},{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    pub tag: String,
    pub dim: usize,
    /// one exponent per generator, reduced modulo the generator's order
    pub character: Vec<u32>,
}

/// Parsed rep-spec document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSpec {
    pub group: GroupSpec,
    pub q: u32,
    pub blocks: Vec<BlockSpec>,
    pub n: usize,
    /// explicit generator matrices, replacing the block-diagonal realization
    pub generators: Option<Vec<Mat>>,
}

impl RepSpec {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.dim).collect()
    }

    /// Number of subsets `I` of the blocks with `sum_{i in I} dim_i = n`.
    pub fn subset_count(&self, n: usize) -> usize {
        subsets_with_sum(&self.block_dims(), n).len()
    }

    /// No subset `I` with `sum dim_i = n` separates two isomorphic blocks.
    pub fn distinct_across_splits(&self, n: usize) -> bool {
        let k = self.blocks.len();
        subsets_with_sum(&self.block_dims(), n).into_iter().all(|mask| {
            (0..k).filter(|&i| mask >> i & 1 == 1).all(|i| {
                (0..k).filter(|&j| mask >> j & 1 == 0).all(|j| self.blocks[i].tag != self.blocks[j].tag)
            })
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "group": self.group.tag(),
            "q": self.q,
            "blocks": self.blocks.iter().map(|b| json!({
                "tag": b.tag,
                "dim": b.dim,
                "character": b.character,
            })).collect::<Vec<_>>(),
            "n": self.n,
        });
        if let Some(g) = &self.generators {
            v["generators"] = json!(g);
        }
        v
    }
}

pub fn parse_rep_spec(text: &str) -> Result<RepSpec, OracleError> {
    let v: Value = serde_json::from_str(text).map_err(|e| OracleError::schema("$", e.to_string()))?;
    rep_spec_from_json(&v)
}

fn get_uint(v: &Value, key: &str, path: &str) -> Result<u64, OracleError> {
    v.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| OracleError::schema(format!("{path}.{key}"), "expected a non-negative integer"))
}

pub fn rep_spec_from_json(v: &Value) -> Result<RepSpec, OracleError> {
    let obj = v.as_object().ok_or_else(|| OracleError::schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !["schema_version", "group", "q", "blocks", "n", "generators"].contains(&key.as_str()) {
            return Err(OracleError::schema(format!("$.{key}"), "unknown field"));
        }
    }
    if let Some(sv) = obj.get("schema_version") {
        if sv.as_u64() != Some(SCHEMA_VERSION) {
            return Err(OracleError::schema("$.schema_version", format!("unsupported, expected {SCHEMA_VERSION}")));
        }
    }
    let group = GroupSpec::parse(
        obj.get("group").and_then(Value::as_str).ok_or_else(|| OracleError::schema("$.group", "expected a string"))?,
    )?;
    let q = u32::try_from(get_uint(v, "q", "$")?).map_err(|_| OracleError::schema("$.q", "too large"))?;
    let n = get_uint(v, "n", "$")? as usize;
    let blocks_json = obj
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| OracleError::schema("$.blocks", "expected an array"))?;
    if blocks_json.is_empty() {
        return Err(OracleError::schema("$.blocks", "at least one block is required"));
    }
    let orders = group.orders();
    let mut blocks = Vec::with_capacity(blocks_json.len());
    for (i, b) in blocks_json.iter().enumerate() {
        let path = format!("$.blocks[{i}]");
        let tag = b
            .get("tag")
            .and_then(Value::as_str)
            .filter(|t| !t.is_empty())
            .ok_or_else(|| OracleError::schema(format!("{path}.tag"), "expected a non-empty string"))?
            .to_string();
        let dim = get_uint(b, "dim", &path)? as usize;
        if dim == 0 {
            return Err(OracleError::schema(format!("{path}.dim"), "must be positive"));
        }
        let chars = b
            .get("character")
            .and_then(Value::as_array)
            .ok_or_else(|| OracleError::schema(format!("{path}.character"), "expected an array of integers"))?;
        if chars.len() != orders.len() {
            return Err(OracleError::schema(
                format!("{path}.character"),
                format!("expected {} exponent(s) for {}", orders.len(), group.tag()),
            ));
        }
        let character = chars
            .iter()
            .zip(&orders)
            .enumerate()
            .map(|(j, (c, &r))| {
                c.as_i64()
                    .map(|e| e.rem_euclid(i64::from(r)) as u32)
                    .ok_or_else(|| OracleError::schema(format!("{path}.character[{j}]"), "expected an integer"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.push(BlockSpec { tag, dim, character });
    }
    let generators = match obj.get("generators") {
        None => None,
        Some(g) => Some(parse_generators(g)?),
    };
    Ok(RepSpec { group, q, blocks, n, generators })
}

fn parse_generators(g: &Value) -> Result<Vec<Mat>, OracleError> {
    let list = g.as_array().ok_or_else(|| OracleError::schema("$.generators", "expected an array of matrices"))?;
    list.iter()
        .enumerate()
        .map(|(i, m)| {
            let rows = m.as_array().ok_or_else(|| OracleError::schema(format!("$.generators[{i}]"), "expected a matrix"))?;
            rows.iter()
                .enumerate()
                .map(|(r, row)| {
                    row.as_array()
                        .ok_or_else(|| OracleError::schema(format!("$.generators[{i}][{r}]"), "expected a row"))?
                        .iter()
                        .map(|x| {
                            x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| {
                                OracleError::schema(format!("$.generators[{i}][{r}]"), "expected non-negative integers")
                            })
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Size of the orbit of `character` under multiplication by `q` modulo the group orders.
pub fn frobenius_orbit_size(character: &[u32], orders: &[u32], q: u32) -> usize {
    let step = |c: &[u32]| -> Vec<u32> {
        c.iter().zip(orders).map(|(&e, &r)| ((u64::from(e) * u64::from(q)) % u64::from(r)) as u32).collect()
    };
    let mut x = step(character);
    let mut size = 1;
    while x != character {
        x = step(&x);
        size += 1;
    }
    size
}

fn same_orbit(a: &[u32], b: &[u32], orders: &[u32], q: u32) -> bool {
    let mut x = a.to_vec();
    for _ in 0..frobenius_orbit_size(a, orders, q) {
        if x == b {
            return true;
        }
        x = x.iter().zip(orders).map(|(&e, &r)| ((u64::from(e) * u64::from(q)) % u64::from(r)) as u32).collect();
    }
    false
}

/// A representation of a finite abelian group on `F_q^N`, validated against
/// its declared blocks.
#[derive(Debug, Clone)]
pub struct FqMatrixRep {
    field: Fp,
    group: GroupSpec,
    generators: Vec<Mat>,
    blocks: Vec<BlockSpec>,
    dimension: usize,
    /// every group element with its inverse
    elements: Vec<(Mat, Mat)>,
}

impl FqMatrixRep {
    pub fn build(spec: &RepSpec, limits: &OracleLimits) -> Result<FqMatrixRep, OracleError> {
        let q = spec.q;
        let field = Fp::new(q).ok_or(OracleError::NotPrime { q })?;
        if q > limits.max_q {
            return Err(OracleError::FieldCap { q, max: limits.max_q });
        }
        let dimension = spec.dimension();
        if dimension > limits.max_dim {
            return Err(OracleError::DimensionCap { dim: dimension, max: limits.max_dim });
        }
        let order = spec.group.order();
        if gcd(u64::from(q), order) != 1 {
            return Err(OracleError::NotSemisimple { q, order });
        }
        let orders = spec.group.orders();
        for (index, b) in spec.blocks.iter().enumerate() {
            let orbit = frobenius_orbit_size(&b.character, &orders, q);
            if orbit != b.dim {
                return Err(OracleError::BlockNotIrreducible { index, q, dim: b.dim, orbit });
            }
        }
        for i in 0..spec.blocks.len() {
            for j in i + 1..spec.blocks.len() {
                let (a, b) = (&spec.blocks[i], &spec.blocks[j]);
                let iso = a.dim == b.dim && same_orbit(&a.character, &b.character, &orders, q);
                if iso != (a.tag == b.tag) {
                    return Err(OracleError::TagMismatch { first: i, second: j, isomorphic: iso });
                }
            }
        }

        let mut fields: BTreeMap<usize, ExtField> = BTreeMap::new();
        let block_mats: Vec<Vec<Mat>> = spec
            .blocks
            .iter()
            .map(|b| {
                let k = fields.entry(b.dim).or_insert_with(|| ExtField::new(field, b.dim));
                b.character
                    .iter()
                    .zip(&orders)
                    .map(|(&e, &r)| {
                        let c = k.root_of_unity_power(u64::from(e), u64::from(r)).expect("orbit size equals degree");
                        k.multiplication_matrix(&c)
                    })
                    .collect()
            })
            .collect();

        let generators = match &spec.generators {
            None => (0..orders.len())
                .map(|g| block_diagonal(&block_mats.iter().map(|m| m[g].clone()).collect::<Vec<_>>()))
                .collect(),
            Some(gens) => {
                if gens.len() != orders.len() {
                    return Err(OracleError::GeneratorShape(format!(
                        "{} needs {} generator(s), got {}",
                        spec.group.tag(),
                        orders.len(),
                        gens.len()
                    )));
                }
                for (i, g) in gens.iter().enumerate() {
                    if g.len() != dimension || g.iter().any(|row| row.len() != dimension) {
                        return Err(OracleError::GeneratorShape(format!("generator {i} is not {dimension}x{dimension}")));
                    }
                    if g.iter().flatten().any(|&x| x >= q) {
                        return Err(OracleError::GeneratorShape(format!("generator {i} has entries outside 0..{q}")));
                    }
                }
                gens.clone()
            }
        };

        for (g, &r) in generators.iter().zip(&orders) {
            if mat_pow(field, g, u64::from(r)) != identity(dimension) {
                return Err(OracleError::RelationViolated(format!("a generator does not have order dividing {r}")));
            }
        }
        if generators.len() == 2
            && mat_mul(field, &generators[0], &generators[1]) != mat_mul(field, &generators[1], &generators[0])
        {
            return Err(OracleError::RelationViolated("the generators do not commute".into()));
        }

        let mut elements = vec![(identity(dimension), identity(dimension))];
        for (g, &r) in generators.iter().zip(&orders) {
            let g_inv = mat_pow(field, g, u64::from(r) - 1);
            let mut next = Vec::with_capacity(elements.len() * r as usize);
            for (x, x_inv) in &elements {
                let (mut y, mut y_inv) = (x.clone(), x_inv.clone());
                for _ in 0..r {
                    next.push((y.clone(), y_inv.clone()));
                    y = mat_mul(field, g, &y);
                    y_inv = mat_mul(field, &y_inv, &g_inv);
                }
            }
            elements = next;
        }

        let rep = FqMatrixRep {
            field,
            group: spec.group,
            generators,
            blocks: spec.blocks.clone(),
            dimension,
            elements,
        };
        if spec.generators.is_some() {
            rep.check_declared_blocks(&block_mats)?;
        }
        Ok(rep)
    }

    /// For explicit generators: every declared isomorphism class occurs with
    /// its declared multiplicity. With the dimensions adding up to `N` and the
    /// representation semisimple, this pins down the isomorphism type.
    fn check_declared_blocks(&self, block_mats: &[Vec<Mat>]) -> Result<(), OracleError> {
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, b) in self.blocks.iter().enumerate() {
            *seen.entry(b.tag.as_str()).or_default() += 1;
            if seen[b.tag.as_str()] > 1 {
                continue;
            }
            let multiplicity = self.blocks.iter().filter(|x| x.tag == b.tag).count();
            let found = super::splittings::intertwiner_dimension(self.field, &block_mats[i], &self.generators);
            if found != multiplicity * b.dim {
                return Err(OracleError::InconsistentBlocks { tag: b.tag.clone(), expected: multiplicity, found: found / b.dim });
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn group_order(&self) -> u64 {
        self.group.order()
    }

    pub fn elements(&self) -> &[(Mat, Mat)] {
        &self.elements
    }
}

fn block_diagonal(blocks: &[Mat]) -> Mat {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![0u32; n]; n];
    let mut offset = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                out[offset + i][offset + j] = x;
            }
        }
        offset += b.len();
    }
    out
}
