//! The ring Z_d, permutations of Z_d and of Z_d^n, and finite functions
//! Z_d^n -> Z_d stored as dense images.

use std::fmt;

use serde_json::Value;

use crate::error::{FfeError, Result};

pub const MIN_D: u32 = 2;
pub const MAX_D: u32 = 12;
pub const MIN_N: usize = 1;
pub const MAX_N: usize = 4;

pub(crate) fn check_d(d: u32) -> Result<()> {
    if (MIN_D..=MAX_D).contains(&d) {
        Ok(())
    } else {
        Err(FfeError::UnsupportedDimension(d))
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if (MIN_N..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(FfeError::UnsupportedArity(n))
    }
}

/// Reduce a signed integer into `0..d`.
#[inline]
pub fn modd(v: i64, d: u32) -> u32 {
    v.rem_euclid(d as i64) as u32
}

/// A prime-power factor `p^m` of the local dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u32,
    pub m: u32,
}

impl PrimePower {
    pub fn modulus(&self) -> u32 {
        self.p.pow(self.m)
    }
}

/// The ring Z_d together with its prime-power factorisation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    d: u32,
    factors: Vec<PrimePower>,
}

impl RingSpec {
    pub fn new(d: u32) -> Result<Self> {
        check_d(d)?;
        Ok(Self {
            d,
            factors: factorize(d),
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].m == 1
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// CRT idempotents: `e_i = 1 mod q_i` and `e_i = 0 mod q_j` for `j != i`.
    pub fn crt_idempotents(&self) -> Vec<u32> {
        let d = self.d;
        self.factors
            .iter()
            .map(|f| {
                let q = f.modulus();
                (0..d)
                    .find(|&e| e % q == 1 && e % (d / q) == 0)
                    .expect("coprime factors")
            })
            .collect()
    }

    /// Combine residues modulo each prime-power factor into a residue mod d.
    pub fn crt_combine(&self, residues: &[u32]) -> u32 {
        let e = self.crt_idempotents();
        let sum: u64 = residues.iter().zip(&e).map(|(&r, &ei)| r as u64 * ei as u64).sum();
        (sum % self.d as u64) as u32
    }
}

/// Prime factorisation of `d` as `(p, m)` pairs, ascending in `p`.
pub fn factorize(mut d: u32) -> Vec<PrimePower> {
    let mut out = Vec::new();
    let mut p = 2;
    while d > 1 {
        if d.is_multiple_of(p) {
            let mut m = 0;
            while d.is_multiple_of(p) {
                d /= p;
                m += 1;
            }
            out.push(PrimePower { p, m });
        }
        p += 1;
    }
    out
}

/// A permutation of Z_d given by its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    map: Vec<u32>,
}

impl Perm {
    pub fn new(map: Vec<u32>) -> Result<Self> {
        let d = map.len();
        let mut seen = vec![false; d];
        for &v in &map {
            let v = v as usize;
            if v >= d || seen[v] {
                return Err(FfeError::NotPermutation(format!("{map:?}")));
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(d: u32) -> Self {
        Self { map: (0..d).collect() }
    }

    /// The cyclic shift `x -> x + k`.
    pub fn shift(d: u32, k: u32) -> Self {
        Self {
            map: (0..d).map(|x| (x + k) % d).collect(),
        }
    }

    /// The transposition of `a` and `b`.
    pub fn transposition(d: u32, a: u32, b: u32) -> Self {
        let mut map: Vec<u32> = (0..d).collect();
        map.swap(a as usize, b as usize);
        Self { map }
    }

    pub fn d(&self) -> u32 {
        self.map.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Self { map: inv }
    }

    /// `self ∘ other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Self {
        Self {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// True when the permutation is a single cycle through all of Z_d.
    pub fn is_full_cycle(&self) -> bool {
        let d = self.map.len();
        let mut x = 0u32;
        for step in 1..=d {
            x = self.map[x as usize];
            if x == 0 {
                return step == d;
            }
        }
        false
    }
}

/// A permutation of the point set Z_d^n, indexed by flat row-major index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointPerm {
    d: u32,
    n: usize,
    map: Vec<u32>,
}

impl PointPerm {
    pub fn new(d: u32, n: usize, map: Vec<u32>) -> Result<Self> {
        let len = (d as usize).pow(n as u32);
        if map.len() != len {
            return Err(FfeError::Length {
                expected: len,
                found: map.len(),
            });
        }
        let p = Perm::new(map)?;
        Ok(Self { d, n, map: p.map })
    }

    pub fn identity(d: u32, n: usize) -> Self {
        let len = d.pow(n as u32);
        Self {
            d,
            n,
            map: (0..len).collect(),
        }
    }

    /// The product permutation acting with `perms[k]` on coordinate `k`.
    pub fn from_sites(d: u32, perms: &[Perm]) -> Result<Self> {
        let n = perms.len();
        for p in perms {
            if p.d() != d {
                return Err(FfeError::DimensionMismatch {
                    expected: d,
                    found: p.d(),
                });
            }
        }
        let len = (d as usize).pow(n as u32);
        let mut map = Vec::with_capacity(len);
        let mut pt = vec![0u32; n];
        for idx in 0..len {
            unflatten(idx, d, &mut pt);
            let img: Vec<u32> = pt.iter().zip(perms).map(|(&x, p)| p.apply(x)).collect();
            map.push(flatten(&img, d) as u32);
        }
        Ok(Self { d, n, map })
    }

    /// Acts with `perm` on coordinate `site` only.
    pub fn from_site(d: u32, n: usize, site: usize, perm: &Perm) -> Result<Self> {
        if site >= n {
            return Err(site_error(site, n));
        }
        let mut perms = vec![Perm::identity(d); n];
        perms[site] = perm.clone();
        Self::from_sites(d, &perms)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, idx: usize) -> usize {
        self.map[idx] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Self {
            d: self.d,
            n: self.n,
            map: inv,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PointPerm) -> Self {
        Self {
            d: self.d,
            n: self.n,
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

pub(crate) fn site_error(site: usize, n: usize) -> FfeError {
    FfeError::InvalidArgument(format!("site {site} out of range for n={n}"))
}

/// Flat row-major index of a point; the first coordinate varies slowest.
#[inline]
pub fn flatten(x: &[u32], d: u32) -> usize {
    x.iter().fold(0usize, |acc, &v| acc * d as usize + v as usize)
}

/// Inverse of [`flatten`], written into `out`.
#[inline]
pub fn unflatten(mut idx: usize, d: u32, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % d as usize) as u32;
        idx /= d as usize;
    }
}

/// A validated point of Z_d^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTuple(Vec<u32>);

impl IndexTuple {
    pub fn new(d: u32, coords: Vec<u32>) -> Result<Self> {
        if let Some(&v) = coords.iter().find(|&&v| v >= d) {
            return Err(FfeError::Residue { value: v as i64, d });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

/// A function Z_d^n -> Z_d, stored as its image in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFunction {
    d: u32,
    n: usize,
    values: Vec<u8>,
}

impl FiniteFunction {
    pub fn new(d: u32, n: usize, values: Vec<u32>) -> Result<Self> {
        check_d(d)?;
        check_n(n)?;
        let len = (d as usize).pow(n as u32);
        if values.len() != len {
            return Err(FfeError::Length {
                expected: len,
                found: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= d) {
            return Err(FfeError::Residue { value: v as i64, d });
        }
        Ok(Self {
            d,
            n,
            values: values.into_iter().map(|v| v as u8).collect(),
        })
    }

    /// Builds a function from signed values, reducing each modulo d.
    pub fn from_signed(d: u32, n: usize, values: &[i64]) -> Result<Self> {
        Self::new(d, n, values.iter().map(|&v| modd(v, d)).collect())
    }

    pub fn from_fn(d: u32, n: usize, mut f: impl FnMut(&[u32]) -> i64) -> Result<Self> {
        check_d(d)?;
        check_n(n)?;
        let len = (d as usize).pow(n as u32);
        let mut pt = vec![0u32; n];
        let values = (0..len)
            .map(|i| {
                unflatten(i, d, &mut pt);
                modd(f(&pt), d) as u8
            })
            .collect();
        Ok(Self { d, n, values })
    }

    pub fn zero(d: u32, n: usize) -> Result<Self> {
        Self::from_fn(d, n, |_| 0)
    }

    /// Bipartite function from a `d x d` matrix of residues.
    pub fn from_matrix(d: u32, rows: &[Vec<u32>]) -> Result<Self> {
        if rows.len() != d as usize {
            return Err(FfeError::Length {
                expected: d as usize,
                found: rows.len(),
            });
        }
        let mut values = Vec::with_capacity((d * d) as usize);
        for r in rows {
            if r.len() != d as usize {
                return Err(FfeError::Length {
                    expected: d as usize,
                    found: r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(d, 2, values)
    }

    pub(crate) fn from_raw(d: u32, n: usize, values: Vec<u8>) -> Self {
        debug_assert_eq!(values.len(), (d as usize).pow(n as u32));
        Self { d, n, values }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    #[inline]
    pub fn at(&self, idx: usize) -> u32 {
        self.values[idx] as u32
    }

    /// Matrix entry for a bipartite function.
    #[inline]
    pub fn entry(&self, x: u32, y: u32) -> u32 {
        self.values[(x * self.d + y) as usize] as u32
    }

    pub fn point(&self, idx: usize) -> Vec<u32> {
        let mut pt = vec![0; self.n];
        unflatten(idx, self.d, &mut pt);
        pt
    }

    pub fn eval(&self, x: &[u32]) -> Result<u32> {
        if x.len() != self.n {
            return Err(FfeError::ArityMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        if let Some(&v) = x.iter().find(|&&v| v >= self.d) {
            return Err(FfeError::Residue {
                value: v as i64,
                d: self.d,
            });
        }
        Ok(self.values[flatten(x, self.d)] as u32)
    }

    pub fn eval_tuple(&self, x: &IndexTuple) -> Result<u32> {
        self.eval(x.coords())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(FfeError::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        if self.n != other.n {
            return Err(FfeError::ArityMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u32, u32) -> u32) -> Result<Self> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (op(a as u32, b as u32) % self.d) as u8)
            .collect();
        Ok(Self {
            d: self.d,
            n: self.n,
            values,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let d = self.d;
        self.zip_with(other, move |a, b| a + d - b)
    }

    pub fn neg(&self) -> Self {
        let d = self.d;
        self.map_values(|v| (d - v) % d)
    }

    pub fn scale(&self, c: i64) -> Self {
        let d = self.d;
        let c = modd(c, d);
        self.map_values(|v| v * c % d)
    }

    pub fn add_constant(&self, c: i64) -> Self {
        let d = self.d;
        let c = modd(c, d);
        self.map_values(|v| (v + c) % d)
    }

    fn map_values(&self, op: impl Fn(u32) -> u32) -> Self {
        Self {
            d: self.d,
            n: self.n,
            values: self.values.iter().map(|&v| op(v as u32) as u8).collect(),
        }
    }

    /// `x -> f(x_1, .., σ(x_site), .., x_n)`.
    pub fn compose_site_permutation(&self, site: usize, sigma: &Perm) -> Result<Self> {
        let pp = PointPerm::from_site(self.d, self.n, site, sigma)?;
        self.compose_global_permutation(&pp)
    }

    /// `x -> f(σ(x))` for a permutation of the whole point set.
    pub fn compose_global_permutation(&self, sigma: &PointPerm) -> Result<Self> {
        if sigma.d() != self.d || sigma.n() != self.n {
            return Err(FfeError::InvalidArgument(format!(
                "point permutation on Z_{}^{} applied to a function on Z_{}^{}",
                sigma.d(),
                sigma.n(),
                self.d,
                self.n
            )));
        }
        let values = (0..self.values.len()).map(|i| self.values[sigma.apply(i)]).collect();
        Ok(Self {
            d: self.d,
            n: self.n,
            values,
        })
    }

    /// Forward difference `f(x + e_site) - f(x)` along one coordinate.
    pub fn difference(&self, site: usize) -> Result<Self> {
        let shifted = self.compose_site_permutation(site, &Perm::shift(self.d, 1))?;
        shifted.sub(self)
    }

    /// Adds `h(x_site)` to every value.
    pub fn add_local(&self, site: usize, h: &[u32]) -> Result<Self> {
        if site >= self.n {
            return Err(site_error(site, self.n));
        }
        if h.len() != self.d as usize {
            return Err(FfeError::Length {
                expected: self.d as usize,
                found: h.len(),
            });
        }
        let stride = (self.d as usize).pow((self.n - 1 - site) as u32);
        let d = self.d as usize;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| ((v as u32 + h[(i / stride) % d]) % self.d) as u8)
            .collect();
        Ok(Self {
            d: self.d,
            n: self.n,
            values,
        })
    }

    /// The bipartite function with the roles of the two sites exchanged.
    pub fn transpose(&self) -> Result<Self> {
        if self.n != 2 {
            return Err(FfeError::ArityMismatch {
                expected: 2,
                found: self.n,
            });
        }
        let d = self.d;
        Ok(Self::from_fn(d, 2, |x| self.entry(x[1], x[0]) as i64).expect("shape already validated"))
    }

    /// Rows of a bipartite function.
    pub fn to_matrix(&self) -> Result<Vec<Vec<u32>>> {
        if self.n != 2 {
            return Err(FfeError::ArityMismatch {
                expected: 2,
                found: self.n,
            });
        }
        Ok(self
            .values
            .chunks(self.d as usize)
            .map(|r| r.iter().map(|&v| v as u32).collect())
            .collect())
    }

    /// The image as a JSON value `{"d":..,"n":..,"values":[nested]}`.
    pub fn to_json_value(&self) -> Value {
        serde_json::json!({ "d": self.d, "n": self.n, "values": self.nested_values() })
    }

    /// Values nested to depth n.
    pub fn nested_values(&self) -> Value {
        fn nest(vals: &[u8], d: usize, depth: usize) -> Value {
            if depth == 1 {
                Value::from(vals.iter().map(|&v| v as u64).collect::<Vec<_>>())
            } else {
                let chunk = vals.len() / d;
                Value::Array(vals.chunks(chunk).map(|c| nest(c, d, depth - 1)).collect())
            }
        }
        nest(&self.values, self.d as usize, self.n)
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses `{"d":..,"values":[..]}` with values nested to depth n, or a
    /// flat list together with an explicit `"n"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| FfeError::Parse("missing integer field \"d\"".into()))? as u32;
        check_d(d)?;
        let values = v
            .get("values")
            .ok_or_else(|| FfeError::Parse("missing field \"values\"".into()))?;
        let depth = nesting_depth(values);
        let n = match v.get("n") {
            Some(nv) => {
                nv.as_u64()
                    .ok_or_else(|| FfeError::Parse("field \"n\" must be an integer".into()))? as usize
            }
            None => depth,
        };
        check_n(n)?;
        if depth != n && depth != 1 {
            return Err(FfeError::Parse(format!(
                "values nested to depth {depth}, expected {n} or a flat list"
            )));
        }
        let mut flat = Vec::new();
        flatten_json(values, depth, d as usize, &mut flat)?;
        let flat: Vec<u32> = flat
            .into_iter()
            .map(|x| {
                if x >= 0 && x < d as i64 {
                    Ok(x as u32)
                } else {
                    Err(FfeError::Residue { value: x, d })
                }
            })
            .collect::<Result<_>>()?;
        Self::new(d, n, flat)
    }
}

fn nesting_depth(v: &Value) -> usize {
    match v {
        Value::Array(a) => 1 + a.first().map(nesting_depth).unwrap_or(0),
        _ => 0,
    }
}

fn flatten_json(v: &Value, depth: usize, d: usize, out: &mut Vec<i64>) -> Result<()> {
    let arr = v
        .as_array()
        .ok_or_else(|| FfeError::Parse("expected an array".into()))?;
    if depth > 1 && arr.len() != d {
        return Err(FfeError::Length {
            expected: d,
            found: arr.len(),
        });
    }
    for item in arr {
        if depth == 1 {
            out.push(
                item.as_i64()
                    .ok_or_else(|| FfeError::Parse(format!("not an integer: {item}")))?,
            );
        } else {
            flatten_json(item, depth - 1, d, out)?;
        }
    }
    Ok(())
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 2 {
            for (i, row) in self.values.chunks(self.d as usize).enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                write!(f, "{}", cells.join(" "))?;
            }
            Ok(())
        } else {
            let cells: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorisation_and_crt() {
        let r = RingSpec::new(12).unwrap();
        assert_eq!(r.factors(), &[PrimePower { p: 2, m: 2 }, PrimePower { p: 3, m: 1 }]);
        assert_eq!(r.crt_idempotents(), vec![9, 4]);
        assert_eq!(r.crt_combine(&[3, 2]), 11);
        assert!(RingSpec::new(7).unwrap().is_prime());
        assert!(RingSpec::new(1).is_err());
        assert!(RingSpec::new(13).is_err());
    }

    #[test]
    fn eval_and_range_errors() {
        let f = FiniteFunction::from_matrix(3, &[vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(f.eval(&[2, 1]).unwrap(), 2);
        assert_eq!(f.eval(&[1, 3]), Err(FfeError::Residue { value: 3, d: 3 }));
        assert!(f.eval(&[1]).is_err());
        assert!(FiniteFunction::new(3, 2, vec![0; 8]).is_err());
        assert!(FiniteFunction::new(3, 1, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn site_permutation_composes() {
        let f = FiniteFunction::from_fn(4, 2, |x| (x[0] * x[1]) as i64).unwrap();
        let s = Perm::new(vec![1, 2, 3, 0]).unwrap();
        let g = f.compose_site_permutation(0, &s).unwrap();
        assert_eq!(g.eval(&[3, 2]).unwrap(), 0);
        assert_eq!(g.eval(&[1, 3]).unwrap(), 2);
    }

    #[test]
    fn global_composition_order() {
        let f = FiniteFunction::from_fn(3, 2, |x| (x[0] * x[0] + 2 * x[1]) as i64).unwrap();
        let a = PointPerm::new(3, 2, vec![3, 1, 2, 0, 4, 5, 6, 8, 7]).unwrap();
        let b = PointPerm::from_sites(3, &[Perm::shift(3, 1), Perm::identity(3)]).unwrap();
        let lhs = f
            .compose_global_permutation(&a)
            .unwrap()
            .compose_global_permutation(&b)
            .unwrap();
        let rhs = f.compose_global_permutation(&a.compose(&b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip_nested_and_flat() {
        let f = FiniteFunction::from_json(r#"{"d":3,"n":2,"values":[[0,0,0],[0,1,2],[0,2,1]]}"#).unwrap();
        assert_eq!(FiniteFunction::from_json(&f.to_json()).unwrap(), f);
        let flat = FiniteFunction::from_json(r#"{"d":3,"n":2,"values":[0,0,0,0,1,2,0,2,1]}"#).unwrap();
        assert_eq!(flat, f);
        let g = FiniteFunction::from_fn(2, 3, |x| (x[0] * x[1] * x[2]) as i64).unwrap();
        assert_eq!(FiniteFunction::from_json(&g.to_json()).unwrap(), g);
        assert!(FiniteFunction::from_json(r#"{"d":3,"values":[[0,0],[0,1]]}"#).is_err());
    }

    #[test]
    fn cycles() {
        assert!(Perm::shift(5, 2).is_full_cycle());
        assert!(!Perm::transposition(3, 0, 1).is_full_cycle());
        assert!(Perm::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn difference_of_product() {
        let f = FiniteFunction::from_fn(5, 2, |x| (x[0] * x[1]) as i64).unwrap();
        let df = f.difference(0).unwrap();
        assert_eq!(df, FiniteFunction::from_fn(5, 2, |x| x[1] as i64).unwrap());
    }
}
