//! LFP orbits of bipartite FFE states, their LU grouping, LFP invariants and
//! the catalogue format.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{FfeError, Result};
use crate::fp::dephase;
use crate::poly::{enumerate_polynomial_functions, polynomial_function_count, ENUMERATION_BUDGET};
use crate::ring::{check_d, FiniteFunction};
use crate::spectral::{singular_values, trace_powers, LuSignature};

/// Largest number of dephased matrices enumerated by a scope-all run.
pub const ALL_SCOPE_BUDGET: u128 = 10_000_000;

/// Largest d whose dephased core fits the packed orbit key.
pub const MAX_ORBIT_D: u32 = 7;

const KEY_BITS: u32 = 3;

/// Which states seed a classification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// Every dephased matrix.
    All,
    /// Dephased images of polynomial (tensor-edge hypergraph) functions.
    Teh,
}

impl FromStr for Scope {
    type Err = FfeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Scope::All),
            "teh" => Ok(Scope::Teh),
            other => Err(FfeError::Parse(format!("unknown scope {other:?} (expected all|teh)"))),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::All => "all",
            Scope::Teh => "teh",
        })
    }
}

/// Byte encoding of a bipartite image matrix: `d` followed by the `d²`
/// residues in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn of(f: &FiniteFunction) -> Result<Self> {
        require_bipartite(f)?;
        let mut bytes = Vec::with_capacity(f.len() + 1);
        bytes.push(f.d() as u8);
        bytes.extend_from_slice(f.values());
        Ok(Self(bytes))
    }

    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_function(&self) -> Result<FiniteFunction> {
        let d = *self.0.first().ok_or_else(|| FfeError::Parse("empty key".into()))? as u32;
        FiniteFunction::new(d, 2, self.0[1..].iter().map(|&v| v as u32).collect())
    }
}

fn require_bipartite(f: &FiniteFunction) -> Result<()> {
    if f.n() == 2 {
        Ok(())
    } else {
        Err(FfeError::ArityMismatch {
            expected: 2,
            found: f.n(),
        })
    }
}

fn check_orbit_d(d: u32) -> Result<()> {
    check_d(d)?;
    if d > MAX_ORBIT_D {
        return Err(FfeError::Budget {
            required: d as u128,
            budget: MAX_ORBIT_D as u128,
        });
    }
    Ok(())
}

/// Packs the core `(1..d) x (1..d)` of a dephased matrix, first entry most
/// significant, so integer order equals row-major lexicographic order.
#[inline]
fn pack(d: usize, m: &[u8]) -> u128 {
    let mut key = 0u128;
    for x in 1..d {
        for y in 1..d {
            key = (key << KEY_BITS) | m[x * d + y] as u128;
        }
    }
    key
}

#[inline]
fn unpack(d: usize, mut key: u128, m: &mut [u8]) {
    m[..d * d].fill(0);
    for x in (1..d).rev() {
        for y in (1..d).rev() {
            m[x * d + y] = (key & ((1 << KEY_BITS) - 1)) as u8;
            key >>= KEY_BITS;
        }
    }
}

#[inline]
fn dephase_in_place(d: usize, m: &mut [u8]) {
    let dd = d as u8;
    let origin = m[0];
    let first_row: Vec<u8> = m[..d].to_vec();
    for x in 0..d {
        let row0 = m[x * d];
        for y in 0..d {
            let v = m[x * d + y] as u32 + 2 * d as u32 + origin as u32 - row0 as u32 - first_row[y] as u32;
            m[x * d + y] = (v % dd as u32) as u8;
        }
    }
}

fn key_of(f: &FiniteFunction) -> u128 {
    let rep = dephase(f).representative;
    pack(f.d() as usize, rep.values())
}

fn function_of(d: u32, key: u128) -> FiniteFunction {
    let mut m = vec![0u8; (d * d) as usize];
    unpack(d as usize, key, &mut m);
    FiniteFunction::from_raw(d, 2, m)
}

/// All dephased matrices reachable from `start` by adjacent row and column
/// transpositions followed by re-dephasing, sorted ascending.
fn orbit_keys(d: usize, start: u128) -> Vec<u128> {
    let mut seen: FxHashSet<u128> = FxHashSet::default();
    let mut order = vec![start];
    seen.insert(start);
    let mut base = [0u8; 64];
    let mut work = [0u8; 64];
    let mut head = 0;
    while head < order.len() {
        unpack(d, order[head], &mut base);
        head += 1;
        for i in 0..d - 1 {
            work[..d * d].copy_from_slice(&base[..d * d]);
            for y in 0..d {
                work.swap(i * d + y, (i + 1) * d + y);
            }
            if i == 0 {
                dephase_in_place(d, &mut work);
            }
            let k = pack(d, &work);
            if seen.insert(k) {
                order.push(k);
            }
            work[..d * d].copy_from_slice(&base[..d * d]);
            for x in 0..d {
                work.swap(x * d + i, x * d + i + 1);
            }
            if i == 0 {
                dephase_in_place(d, &mut work);
            }
            let k = pack(d, &work);
            if seen.insert(k) {
                order.push(k);
            }
        }
    }
    order.sort_unstable();
    order
}

/// The dephased members of the LFP orbit of `f`, in lexicographic order.
pub fn lfp_orbit(f: &FiniteFunction) -> Result<Vec<FiniteFunction>> {
    require_bipartite(f)?;
    check_orbit_d(f.d())?;
    let d = f.d();
    Ok(orbit_keys(d as usize, key_of(f))
        .into_iter()
        .map(|k| function_of(d, k))
        .collect())
}

/// The lexicographically smallest dephased member of the orbit of `f`.
pub fn canonical_representative(f: &FiniteFunction) -> Result<FiniteFunction> {
    require_bipartite(f)?;
    check_orbit_d(f.d())?;
    let d = f.d();
    Ok(function_of(d, orbit_keys(d as usize, key_of(f))[0]))
}

/// True iff the dephased form of `f` lies in the LFP orbit of `class_rep`.
pub fn membership_check(f: &FiniteFunction, class_rep: &FiniteFunction) -> Result<bool> {
    require_bipartite(f)?;
    require_bipartite(class_rep)?;
    if f.d() != class_rep.d() {
        return Err(FfeError::DimensionMismatch {
            expected: class_rep.d(),
            found: f.d(),
        });
    }
    check_orbit_d(f.d())?;
    let target = key_of(f);
    Ok(orbit_keys(f.d() as usize, key_of(class_rep))
        .binary_search(&target)
        .is_ok())
}

/// `Σ_x f(x) mod d`.
pub fn invariant_it(f: &FiniteFunction) -> u32 {
    (f.values().iter().map(|&v| v as u64).sum::<u64>() % f.d() as u64) as u32
}

/// Sizes of the groups of equal hyperplane sums `S_a = Σ_{x : x_axis = a} f(x)`
/// mod d, sorted descending.
pub fn invariant_row_signature(f: &FiniteFunction, axis: usize) -> Result<Vec<usize>> {
    if axis >= f.n() {
        return Err(FfeError::InvalidArgument(format!(
            "axis {axis} out of range for n={}",
            f.n()
        )));
    }
    let d = f.d() as usize;
    let stride = d.pow((f.n() - 1 - axis) as u32);
    let mut sums = vec![0u64; d];
    for (i, &v) in f.values().iter().enumerate() {
        sums[(i / stride) % d] += v as u64;
    }
    let mut groups: BTreeMap<u64, usize> = BTreeMap::new();
    for s in sums {
        *groups.entry(s % d as u64).or_default() += 1;
    }
    let mut sizes: Vec<usize> = groups.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

/// Histogram of `f(a,b) - f(c,b) + f(c,e) - f(a,e)` over all quadruples.
pub fn haagerup_histogram(f: &FiniteFunction) -> Result<Vec<u64>> {
    require_bipartite(f)?;
    let d = f.d();
    let mut hist = vec![0u64; d as usize];
    for a in 0..d {
        for c in 0..d {
            for b in 0..d {
                let ab = f.entry(a, b) + d - f.entry(c, b);
                for e in 0..d {
                    let v = ab + f.entry(c, e) + d - f.entry(a, e);
                    hist[(v % d) as usize] += 1;
                }
            }
        }
    }
    Ok(hist)
}

/// `⌈d^{d^n - n(d-1) - 1} / (d!)^n⌉`.
pub fn lower_bound(d: u32, n: u32) -> Result<BigUint> {
    if d < 2 || n < 1 {
        return Err(FfeError::InvalidArgument(format!(
            "lower bound needs d >= 2 and n >= 1, got ({d}, {n})"
        )));
    }
    let dn = (d as u64)
        .checked_pow(n)
        .filter(|&v| v <= 1 << 20)
        .ok_or(FfeError::Budget {
            required: u128::MAX,
            budget: 1 << 20,
        })?;
    let exponent = dn - n as u64 * (d as u64 - 1) - 1;
    let num = BigUint::from(d).pow(exponent as u32);
    let fact: BigUint = (1..=d).fold(BigUint::one(), |acc, k| acc * k);
    let den = fact.pow(n);
    let (q, r) = (&num / &den, &num % &den);
    Ok(if r.is_zero() { q } else { q + 1u32 })
}

/// LFP invariants of a class representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    #[serde(rename = "I_t")]
    pub i_t: u32,
    pub row_signature: Vec<usize>,
    pub col_signature: Vec<usize>,
    pub haagerup: Vec<u64>,
}

impl Invariants {
    pub fn of(f: &FiniteFunction) -> Result<Self> {
        Ok(Self {
            i_t: invariant_it(f),
            row_signature: invariant_row_signature(f, 0)?,
            col_signature: invariant_row_signature(f, 1)?,
            haagerup: haagerup_histogram(f)?,
        })
    }
}

/// One LFP class.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub id: usize,
    pub representative: FiniteFunction,
    pub orbit_size: u64,
    pub contains_polynomial: bool,
    pub polynomials: Vec<String>,
    pub invariants: Invariants,
    pub singular_values: Vec<f64>,
    pub lu_class: Option<usize>,
}

/// One LU class: LFP classes sharing an exact trace-power signature.
#[derive(Debug, Clone, PartialEq)]
pub struct LuClassRecord {
    pub id: usize,
    pub signature: LuSignature,
    pub lfp_classes: Vec<usize>,
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed_count: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalogue {
    pub d: u32,
    pub scope: Scope,
    pub classes: Vec<OrbitRecord>,
    pub lu_classes: Vec<LuClassRecord>,
    pub provenance: Provenance,
    /// Wall-clock time of the run; not part of the serialised form, which
    /// must not depend on scheduling.
    pub elapsed: Duration,
}

/// Dephased polynomial images keyed by packed matrix, with the normal form
/// of the (already dephased) polynomial computing each.
fn dephased_polynomials(d: u32) -> Result<FxHashMap<u128, String>> {
    let mut out = FxHashMap::default();
    for (p, f) in enumerate_polynomial_functions(d, 2)? {
        let rep = dephase(&f).representative;
        if rep == f {
            out.insert(pack(d as usize, f.values()), p.to_string());
        }
    }
    Ok(out)
}

struct RawClass {
    representative: u128,
    orbit_size: u64,
    polynomials: Vec<String>,
}

/// Partitions the scope into LFP classes. Seeds are processed in parallel;
/// each BFS claims the seeds it reaches, and duplicate discoveries of the
/// same orbit are merged on their minimal member.
pub fn classify_lfp(d: u32, scope: Scope, threads: usize) -> Result<Catalogue> {
    let started = Instant::now();
    check_orbit_d(d)?;
    let du = d as usize;
    let core = (du - 1) * (du - 1);
    let total_all = (d as u128).checked_pow(core as u32).unwrap_or(u128::MAX);
    if scope == Scope::All && total_all > ALL_SCOPE_BUDGET {
        return Err(FfeError::Budget {
            required: total_all,
            budget: ALL_SCOPE_BUDGET,
        });
    }
    let poly_count = polynomial_function_count(d, 2)?;
    if scope == Scope::Teh && poly_count > ENUMERATION_BUDGET {
        return Err(FfeError::Budget {
            required: poly_count,
            budget: ENUMERATION_BUDGET,
        });
    }
    let polys = if poly_count <= ENUMERATION_BUDGET {
        dephased_polynomials(d)?
    } else {
        FxHashMap::default()
    };

    let seeds: Vec<u128> = match scope {
        Scope::All => (0..total_all as u64).map(|i| index_to_key(du, i)).collect(),
        Scope::Teh => {
            let mut s: Vec<u128> = polys.keys().copied().collect();
            s.sort_unstable();
            s
        }
    };
    let seed_index: FxHashMap<u128, usize> = match scope {
        Scope::All => FxHashMap::default(),
        Scope::Teh => seeds.iter().enumerate().map(|(i, &k)| (k, i)).collect(),
    };
    let lookup = |k: u128| -> Option<usize> {
        match scope {
            Scope::All => Some(key_to_index(du, k) as usize),
            Scope::Teh => seed_index.get(&k).copied(),
        }
    };
    let claimed: Vec<AtomicBool> = (0..seeds.len()).map(|_| AtomicBool::new(false)).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| FfeError::InvalidArgument(e.to_string()))?;
    let mut raw: Vec<RawClass> = pool.install(|| {
        seeds
            .par_iter()
            .enumerate()
            .with_min_len(64)
            .filter_map(|(i, &seed)| {
                if claimed[i].swap(true, Ordering::AcqRel) {
                    return None;
                }
                let orbit = orbit_keys(du, seed);
                let mut polynomials = Vec::new();
                for &m in &orbit {
                    if let Some(j) = lookup(m) {
                        claimed[j].store(true, Ordering::Release);
                    }
                    if let Some(p) = polys.get(&m) {
                        polynomials.push(p.clone());
                    }
                }
                polynomials.sort();
                Some(RawClass {
                    representative: orbit[0],
                    orbit_size: orbit.len() as u64,
                    polynomials,
                })
            })
            .collect()
    });
    raw.sort_unstable_by_key(|c| c.representative);
    raw.dedup_by_key(|c| c.representative);

    if scope == Scope::All {
        let covered: u128 = raw.iter().map(|c| c.orbit_size as u128).sum();
        debug_assert_eq!(covered, total_all, "orbits must partition the dephased matrices");
    }

    let classes = pool.install(|| {
        raw.into_par_iter()
            .enumerate()
            .map(|(id, c)| {
                let representative = function_of(d, c.representative);
                Ok(OrbitRecord {
                    id,
                    invariants: Invariants::of(&representative)?,
                    singular_values: rounded(singular_values(&representative)?),
                    representative,
                    orbit_size: c.orbit_size,
                    contains_polynomial: !c.polynomials.is_empty(),
                    polynomials: c.polynomials,
                    lu_class: None,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    Ok(Catalogue {
        d,
        scope,
        classes,
        lu_classes: Vec::new(),
        provenance: Provenance {
            seed_count: seeds.len() as u64,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        elapsed: started.elapsed(),
    })
}

fn rounded(v: Vec<f64>) -> Vec<f64> {
    v.into_iter().map(|x| ((x * 1e12).round() / 1e12).max(0.0)).collect()
}

fn index_to_key(d: usize, mut idx: u64) -> u128 {
    let core = (d - 1) * (d - 1);
    let mut key = 0u128;
    for pos in 0..core {
        let digit = (idx % d as u64) as u128;
        idx /= d as u64;
        key |= digit << (KEY_BITS as usize * pos);
    }
    key
}

fn key_to_index(d: usize, mut key: u128) -> u64 {
    let core = (d - 1) * (d - 1);
    let mut idx = 0u64;
    let mut scale = 1u64;
    for _ in 0..core {
        idx += (key & ((1 << KEY_BITS) - 1)) as u64 * scale;
        key >>= KEY_BITS;
        scale *= d as u64;
    }
    idx
}

/// Groups LFP classes by the exact trace-power signature of their
/// representatives. LU ids follow the order of first appearance.
pub fn classify_lu(mut cat: Catalogue) -> Result<Catalogue> {
    let sigs: Vec<LuSignature> = cat
        .classes
        .par_iter()
        .map(|c| trace_powers(&c.representative))
        .collect::<Result<Vec<_>>>()?;
    let mut index: FxHashMap<&LuSignature, usize> = FxHashMap::default();
    let mut lu: Vec<LuClassRecord> = Vec::new();
    for (class, sig) in cat.classes.iter_mut().zip(&sigs) {
        let id = *index.entry(sig).or_insert_with(|| {
            lu.push(LuClassRecord {
                id: lu.len(),
                signature: sig.clone(),
                lfp_classes: Vec::new(),
                singular_values: class.singular_values.clone(),
            });
            lu.len() - 1
        });
        lu[id].lfp_classes.push(class.id);
        class.lu_class = Some(id);
    }
    cat.lu_classes = lu;
    Ok(cat)
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    id: usize,
    representative: Vec<Vec<u32>>,
    orbit_size: u64,
    contains_polynomial: bool,
    polynomials: Vec<String>,
    #[serde(flatten)]
    invariants: Invariants,
    singular_values: Vec<f64>,
    lu_class: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct LuClassJson {
    id: usize,
    lfp_classes: Vec<usize>,
    singular_values: Vec<f64>,
    trace_powers: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CatalogueJson {
    d: u32,
    scope: Scope,
    classes: Vec<ClassJson>,
    lu_classes: Vec<LuClassJson>,
    provenance: Provenance,
}

impl Catalogue {
    pub fn lfp_class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn lu_class_count(&self) -> usize {
        self.lu_classes.len()
    }

    /// Index of the class containing `f`, if it lies in this catalogue.
    pub fn find_class(&self, f: &FiniteFunction) -> Result<Option<usize>> {
        if f.d() != self.d {
            return Err(FfeError::DimensionMismatch {
                expected: self.d,
                found: f.d(),
            });
        }
        let rep = canonical_representative(f)?;
        Ok(self
            .classes
            .binary_search_by(|c| c.representative.values().cmp(rep.values()))
            .ok())
    }

    pub fn to_json(&self) -> String {
        let dto = CatalogueJson {
            d: self.d,
            scope: self.scope,
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    id: c.id,
                    representative: c.representative.to_matrix().expect("bipartite"),
                    orbit_size: c.orbit_size,
                    contains_polynomial: c.contains_polynomial,
                    polynomials: c.polynomials.clone(),
                    invariants: c.invariants.clone(),
                    singular_values: c.singular_values.clone(),
                    lu_class: c.lu_class,
                })
                .collect(),
            lu_classes: self
                .lu_classes
                .iter()
                .map(|l| LuClassJson {
                    id: l.id,
                    lfp_classes: l.lfp_classes.clone(),
                    singular_values: l.singular_values.clone(),
                    trace_powers: l.signature.to_strings(),
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&dto).expect("plain data")
    }

    /// One row per LFP class.
    pub fn to_csv(&self) -> Result<String> {
        let join = |v: Vec<String>, sep: &str| v.join(sep);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "id",
            "orbit_size",
            "contains_polynomial",
            "polynomials",
            "I_t",
            "row_signature",
            "col_signature",
            "haagerup",
            "singular_values",
            "lu_class",
            "representative",
        ])
        .map_err(|e| FfeError::Io(e.to_string()))?;
        for c in &self.classes {
            let inv = &c.invariants;
            w.write_record([
                c.id.to_string(),
                c.orbit_size.to_string(),
                c.contains_polynomial.to_string(),
                join(c.polynomials.clone(), ";"),
                inv.i_t.to_string(),
                join(inv.row_signature.iter().map(ToString::to_string).collect(), " "),
                join(inv.col_signature.iter().map(ToString::to_string).collect(), " "),
                join(inv.haagerup.iter().map(ToString::to_string).collect(), " "),
                join(c.singular_values.iter().map(|s| format!("{s:.5}")).collect(), " "),
                c.lu_class.map(|l| l.to_string()).unwrap_or_default(),
                join(c.representative.values().iter().map(ToString::to_string).collect(), ""),
            ])
            .map_err(|e| FfeError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| FfeError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| FfeError::Io(e.to_string()))
    }
}
