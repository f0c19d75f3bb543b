//! Polynomial functions over Z_d: the composite-degree normal form,
//! enumeration of all polynomial functions, recognition of polynomial
//! images, and the tensor-edge-hypergraph view.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{FfeError, Result};
use crate::ring::{check_n, modd, unflatten, FiniteFunction, PrimePower, RingSpec};

/// Enumerations beyond this many functions are refused.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// `ν_p(e!)`, via Legendre's formula.
pub fn composite_degree(p: u32, e: u32) -> u32 {
    let mut total = 0;
    let mut pk = p as u64;
    while pk <= e as u64 {
        total += e / pk as u32;
        pk *= p as u64;
    }
    total
}

/// Composite degree of a multivariate monomial, capped at `m`.
pub fn monomial_composite_degree(p: u32, m: u32, exponents: &[u32]) -> u32 {
    exponents.iter().map(|&e| composite_degree(p, e)).sum::<u32>().min(m)
}

/// Per-exponent composite degrees for `Z_{p^m}` up to the first exponent
/// whose single-variable monomial is no longer admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeDegreeTable {
    pub p: u32,
    pub m: u32,
    degrees: Vec<u32>,
}

impl CompositeDegreeTable {
    pub fn new(p: u32, m: u32) -> Self {
        let mut degrees = Vec::new();
        let mut e = 0;
        loop {
            let c = composite_degree(p, e);
            degrees.push(c);
            if c >= m {
                break;
            }
            e += 1;
        }
        Self { p, m, degrees }
    }

    /// Largest exponent that may appear in an admissible monomial.
    pub fn max_exponent(&self) -> u32 {
        self.degrees.len() as u32 - 2
    }

    pub fn degree(&self, e: u32) -> u32 {
        self.degrees
            .get(e as usize)
            .copied()
            .unwrap_or_else(|| composite_degree(self.p, e))
    }
}

/// Exponent vector of a monomial `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Value of the monomial at integer point `x`, reduced mod `modulus`.
    pub fn eval(&self, x: &[u32], modulus: u32) -> u32 {
        let q = modulus as u64;
        self.0
            .iter()
            .zip(x)
            .fold(1 % q, |acc, (&e, &xi)| acc * pow_mod(xi as u64, e, q) % q) as u32
    }

    /// Display-order key: higher total degree first, then larger exponents.
    fn display_key(&self) -> (std::cmp::Reverse<u32>, std::cmp::Reverse<Vec<u32>>) {
        (std::cmp::Reverse(self.degree()), std::cmp::Reverse(self.0.clone()))
    }
}

fn pow_mod(mut b: u64, mut e: u32, q: u64) -> u64 {
    let mut r = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

/// Admissible monomials for `Z_{p^m}` in `n` variables with the modulus
/// `p^{m - c}` of their coefficients.
pub fn admissible_monomials(p: u32, m: u32, n: usize) -> Vec<(Monomial, u32)> {
    let table = CompositeDegreeTable::new(p, m);
    let emax = table.max_exponent();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let c: u32 = exps.iter().map(|&e| table.degree(e)).sum();
        if c < m {
            out.push((Monomial(exps.clone()), p.pow(m - c)));
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if exps[k] < emax {
                exps[k] += 1;
                break;
            }
            exps[k] = 0;
        }
    }
}

/// A polynomial over Z_d in `n` variables with coefficients in `0..d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    d: u32,
    n: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(d: u32, n: usize) -> Result<Self> {
        RingSpec::new(d)?;
        check_n(n)?;
        Ok(Self {
            d,
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms<I>(d: u32, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut p = Self::zero(d, n)?;
        for (exps, c) in terms {
            if exps.len() != n {
                return Err(FfeError::ArityMismatch {
                    expected: n,
                    found: exps.len(),
                });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        let d = self.d;
        let entry = self.terms.entry(m).or_insert(0);
        *entry = (*entry + modd(c, d)) % d;
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> u32 {
        self.terms.get(&Monomial(exps.to_vec())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[u32]) -> u32 {
        let d = self.d;
        self.terms
            .iter()
            .fold(0u64, |acc, (m, &c)| (acc + c as u64 * m.eval(x, d) as u64) % d as u64) as u32
    }

    pub fn to_function(&self) -> FiniteFunction {
        FiniteFunction::from_fn(self.d, self.n, |x| self.eval(x) as i64).expect("validated on construction")
    }

    /// The unique representative with admissible monomials and coefficients
    /// below their moduli, computing the same function.
    pub fn normal_form(&self) -> Self {
        let ring = RingSpec::new(self.d).expect("validated on construction");
        let coeffs: BTreeMap<Vec<u32>, i64> = self.terms.iter().map(|(m, &c)| (m.0.clone(), c as i64)).collect();
        let parts: Vec<BTreeMap<Vec<u32>, u32>> =
            ring.factors().iter().map(|pp| reduce_component(*pp, &coeffs)).collect();
        combine_components(&ring, self.n, &parts)
    }

    pub fn is_normal_form(&self) -> bool {
        *self == self.normal_form()
    }

    /// Parses the textual grammar: terms joined by `+` (or `-`), factors
    /// joined by `*`, powers written `v^k`. Variables are `x`, `y` when
    /// `n = 2` and `x1 .. xn` in general.
    pub fn parse(text: &str, d: u32, n: usize) -> Result<Self> {
        let mut poly = Self::zero(d, n)?;
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(FfeError::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1i64, rest),
                None => (1i64, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(FfeError::Parse(format!("empty term in {text:?}")));
            }
            let mut coeff = sign;
            let mut exps = vec![0u32; n];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(FfeError::Parse(format!("empty factor in {term:?}")));
                }
                if factor.bytes().all(|b| b.is_ascii_digit()) {
                    let v: i64 = factor
                        .parse()
                        .map_err(|_| FfeError::Parse(format!("bad integer {factor:?}")))?;
                    coeff = coeff * (v % d as i64) % d as i64;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((nm, pw)) => {
                        let pw: u32 = pw
                            .parse()
                            .map_err(|_| FfeError::Parse(format!("bad exponent in {factor:?}")))?;
                        (nm, pw)
                    }
                    None => (factor, 1),
                };
                let var = variable_index(name, n)
                    .ok_or_else(|| FfeError::Parse(format!("unknown variable {name:?} for n={n}")))?;
                exps[var] += power;
            }
            poly.add_term(Monomial(exps), coeff);
        }
        Ok(poly)
    }
}

fn variable_index(name: &str, n: usize) -> Option<usize> {
    match (name, n) {
        ("x", 2) | ("x", 1) => Some(0),
        ("y", 2) => Some(1),
        _ => {
            let k: usize = name.strip_prefix('x')?.parse().ok()?;
            (1..=n).contains(&k).then(|| k - 1)
        }
    }
}

fn variable_name(k: usize, n: usize) -> String {
    match (n, k) {
        (2, 0) => "x".into(),
        (2, 1) => "y".into(),
        _ => format!("x{}", k + 1),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, u32)> = self.terms().collect();
        terms.sort_by_key(|(m, _)| m.display_key());
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|(m, c)| {
                let mut factors = Vec::new();
                if c != 1 || m.is_constant() {
                    factors.push(c.to_string());
                }
                for (k, &e) in m.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(variable_name(k, self.n)),
                        _ => factors.push(format!("{}^{}", variable_name(k, self.n), e)),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// Signed Stirling numbers of the first kind modulo `q`, rows `0..=emax`.
fn stirling_first_mod(emax: u32, q: i64) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; emax as usize + 1]; emax as usize + 1];
    s[0][0] = 1;
    for e in 1..=emax as usize {
        for j in 1..=e {
            s[e][j] = (s[e - 1][j - 1] - (e as i64 - 1) % q * s[e - 1][j]).rem_euclid(q);
        }
    }
    s
}

/// Reduces integer coefficients to the normal form modulo one prime-power
/// factor. A coefficient exceeding its bound `b` on `x^e` is lowered using
/// `b * (x)_e = 0`, which rewrites `b * x^e` through lower monomials.
fn reduce_component(pp: PrimePower, coeffs: &BTreeMap<Vec<u32>, i64>) -> BTreeMap<Vec<u32>, u32> {
    let q = pp.modulus() as i64;
    let emax = coeffs.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0);
    let stirling = stirling_first_mod(emax, q);
    let mut work: BTreeMap<(u32, Vec<u32>), i64> = coeffs
        .iter()
        .map(|(e, &c)| ((e.iter().sum(), e.clone()), c.rem_euclid(q)))
        .collect();
    let mut out = BTreeMap::new();
    while let Some(((_, exps), c)) = work.pop_last() {
        let c = c.rem_euclid(q);
        if c == 0 {
            continue;
        }
        let cdeg = monomial_composite_degree(pp.p, pp.m, &exps);
        let bound = pp.p.pow(pp.m - cdeg) as i64;
        let (t, r) = (c / bound, c % bound);
        if r != 0 {
            out.insert(exps.clone(), r as u32);
        }
        if t == 0 {
            continue;
        }
        let scale = (t * bound) % q;
        let mut lower = vec![0u32; exps.len()];
        loop {
            if lower != exps {
                let coef = lower
                    .iter()
                    .zip(&exps)
                    .fold(1i64, |acc, (&j, &e)| acc * stirling[e as usize][j as usize] % q);
                if coef != 0 {
                    let key = (lower.iter().sum(), lower.clone());
                    let slot = work.entry(key).or_insert(0);
                    *slot = (*slot - scale * coef).rem_euclid(q);
                }
            }
            if !odometer_below(&mut lower, &exps) {
                break;
            }
        }
    }
    out
}

/// Advances `v` through all vectors with `v <= cap` componentwise.
fn odometer_below(v: &mut [u32], cap: &[u32]) -> bool {
    for k in (0..v.len()).rev() {
        if v[k] < cap[k] {
            v[k] += 1;
            return true;
        }
        v[k] = 0;
    }
    false
}

fn combine_components(ring: &RingSpec, n: usize, parts: &[BTreeMap<Vec<u32>, u32>]) -> Polynomial {
    let d = ring.d();
    let idem = ring.crt_idempotents();
    let mut poly = Polynomial {
        d,
        n,
        terms: BTreeMap::new(),
    };
    for (part, &e) in parts.iter().zip(&idem) {
        for (exps, &c) in part {
            poly.add_term(Monomial(exps.clone()), c as i64 * e as i64);
        }
    }
    poly
}

/// Returns the normal-form polynomial computing `f`, or `None` when `f` is
/// not a polynomial function.
pub fn is_polynomial(f: &FiniteFunction) -> Option<Polynomial> {
    let ring = RingSpec::new(f.d()).ok()?;
    let n = f.n();
    let d = f.d();
    let mut parts = Vec::new();
    let mut pt = vec![0u32; n];
    for pp in ring.factors() {
        let q = pp.modulus();
        let basis = admissible_monomials(pp.p, pp.m, n);
        let rows: Vec<Vec<u64>> = (0..f.len())
            .map(|i| {
                unflatten(i, d, &mut pt);
                let mut row: Vec<u64> = basis.iter().map(|(m, _)| m.eval(&pt, q) as u64).collect();
                row.push((f.at(i) % q) as u64);
                row
            })
            .collect();
        let sol = linsolve::solve(pp.p, pp.m, rows, basis.len())?;
        let coeffs: BTreeMap<Vec<u32>, i64> = basis
            .iter()
            .zip(sol)
            .map(|((m, _), c)| (m.0.clone(), c as i64))
            .collect();
        parts.push(reduce_component(*pp, &coeffs));
    }
    Some(combine_components(&ring, n, &parts))
}

mod linsolve {
    /// Solves `A x = b` over `Z_{p^m}`; each row holds `cols` coefficients
    /// followed by the right-hand side. Pivots of minimal valuation are
    /// scaled to `p^v`; the multiple `p^{m-v}` of each pivot row is fed back
    /// so constraints on later unknowns are retained.
    pub fn solve(p: u32, m: u32, mut pool: Vec<Vec<u64>>, cols: usize) -> Option<Vec<u64>> {
        let q = (p as u64).pow(m);
        let p = p as u64;
        let mut pivots: Vec<(usize, u32, Vec<u64>)> = Vec::new();
        for col in 0..cols {
            pool.retain(|r| r.iter().any(|&v| v != 0));
            let best = pool
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| valuation(r[col], p))
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let mut row = pool.swap_remove(bi);
            let v = valuation(row[col], p);
            let pv = p.pow(v);
            let unit = row[col] / pv;
            let inv = inverse_unit(unit % q, q);
            for x in row.iter_mut() {
                *x = *x * inv % q;
            }
            for other in pool.iter_mut() {
                if other[col] != 0 {
                    let factor = other[col] / pv;
                    for (o, &r) in other.iter_mut().zip(&row) {
                        *o = (*o + q - factor * r % q) % q;
                    }
                }
            }
            let mult = q / pv;
            if mult != q {
                let extra: Vec<u64> = row.iter().map(|&x| x * mult % q).collect();
                if extra.iter().any(|&x| x != 0) {
                    pool.push(extra);
                }
            }
            pivots.push((col, v, row));
        }
        if pool.iter().any(|r| r[cols] % q != 0) {
            return None;
        }
        let mut x = vec![0u64; cols];
        for (col, v, row) in pivots.iter().rev() {
            let mut rhs = row[cols] as i128;
            for j in col + 1..cols {
                rhs -= row[j] as i128 * x[j] as i128;
            }
            let rhs = rhs.rem_euclid(q as i128) as u64;
            let pv = p.pow(*v);
            if !rhs.is_multiple_of(pv) {
                return None;
            }
            x[*col] = rhs / pv;
        }
        Some(x)
    }

    fn valuation(mut a: u64, p: u64) -> u32 {
        let mut v = 0;
        while a.is_multiple_of(p) {
            a /= p;
            v += 1;
        }
        v
    }

    fn inverse_unit(a: u64, q: u64) -> u64 {
        let (mut r0, mut r1) = (q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        t0.rem_euclid(q as i64) as u64
    }
}

/// One coefficient slot of the enumeration: a monomial in one CRT component.
#[derive(Debug, Clone)]
struct Slot {
    monomial: Monomial,
    bound: u32,
    /// CRT idempotent of the component, as the Z_d multiplier.
    lift: u32,
    /// Image of `lift * monomial` as a function mod d.
    unit_image: Vec<u8>,
}

/// Number of distinct polynomial functions Z_d^n -> Z_d.
pub fn polynomial_function_count(d: u32, n: usize) -> Result<u128> {
    let ring = RingSpec::new(d)?;
    check_n(n)?;
    let mut total: u128 = 1;
    for pp in ring.factors() {
        for (_, b) in admissible_monomials(pp.p, pp.m, n) {
            total = total.saturating_mul(b as u128);
        }
    }
    Ok(total)
}

/// Iterator over every polynomial function with its normal form.
pub struct PolynomialFunctions {
    d: u32,
    n: usize,
    slots: Vec<Slot>,
    counter: Vec<u32>,
    done: bool,
}

/// Enumerates every polynomial function `Z_d^n -> Z_d` exactly once,
/// paired with its normal form. Refuses counts above [`ENUMERATION_BUDGET`].
pub fn enumerate_polynomial_functions(d: u32, n: usize) -> Result<PolynomialFunctions> {
    let count = polynomial_function_count(d, n)?;
    if count > ENUMERATION_BUDGET {
        return Err(FfeError::Budget {
            required: count,
            budget: ENUMERATION_BUDGET,
        });
    }
    let ring = RingSpec::new(d)?;
    let idem = ring.crt_idempotents();
    let len = (d as usize).pow(n as u32);
    let mut pt = vec![0u32; n];
    let mut slots = Vec::new();
    for (pp, &lift) in ring.factors().iter().zip(&idem) {
        for (monomial, bound) in admissible_monomials(pp.p, pp.m, n) {
            let unit_image = (0..len)
                .map(|i| {
                    unflatten(i, d, &mut pt);
                    (monomial.eval(&pt, d) * lift % d) as u8
                })
                .collect();
            slots.push(Slot {
                monomial,
                bound,
                lift,
                unit_image,
            });
        }
    }
    let counter = vec![0; slots.len()];
    Ok(PolynomialFunctions {
        d,
        n,
        slots,
        counter,
        done: false,
    })
}

impl Iterator for PolynomialFunctions {
    type Item = (Polynomial, FiniteFunction);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let d = self.d;
        let len = (d as usize).pow(self.n as u32);
        let mut image = vec![0u32; len];
        let mut poly = Polynomial {
            d,
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (slot, &c) in self.slots.iter().zip(&self.counter) {
            if c == 0 {
                continue;
            }
            for (acc, &u) in image.iter_mut().zip(&slot.unit_image) {
                *acc += c * u as u32;
            }
            poly.add_term(slot.monomial.clone(), c as i64 * slot.lift as i64);
        }
        let f = FiniteFunction::from_raw(d, self.n, image.into_iter().map(|v| (v % d) as u8).collect());
        self.done = true;
        for (k, slot) in self.slots.iter().enumerate().rev() {
            if self.counter[k] + 1 < slot.bound {
                self.counter[k] += 1;
                self.done = false;
                break;
            }
            self.counter[k] = 0;
        }
        Some((poly, f))
    }
}

/// The hypergraph view of a polynomial: each monomial becomes a weighted
/// hyperedge on the variables it involves, labelled by its exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorEdgeHypergraph {
    pub d: u32,
    pub n: usize,
    /// Vertex set -> (exponents on those vertices -> weight).
    pub edges: BTreeMap<Vec<usize>, BTreeMap<Vec<u32>, u32>>,
}

pub fn poly_to_teh(poly: &Polynomial) -> TensorEdgeHypergraph {
    let mut edges: BTreeMap<Vec<usize>, BTreeMap<Vec<u32>, u32>> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let support: Vec<usize> = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, _)| k).collect();
        let exps: Vec<u32> = support.iter().map(|&k| m.0[k]).collect();
        edges.entry(support).or_default().insert(exps, c);
    }
    TensorEdgeHypergraph {
        d: poly.d(),
        n: poly.n(),
        edges,
    }
}

pub fn teh_to_poly(teh: &TensorEdgeHypergraph) -> Result<Polynomial> {
    let mut poly = Polynomial::zero(teh.d, teh.n)?;
    for (support, labels) in &teh.edges {
        for (exps, &w) in labels {
            if exps.len() != support.len() || support.iter().any(|&k| k >= teh.n) {
                return Err(FfeError::InvalidArgument(format!(
                    "malformed hyperedge {support:?} {exps:?}"
                )));
            }
            let mut full = vec![0u32; teh.n];
            for (&k, &e) in support.iter().zip(exps) {
                full[k] = e;
            }
            poly.add_term(Monomial(full), w as i64);
        }
    }
    Ok(poly)
}

/// A diagonal phase gate `ω^{w · x^e}` acting on the support of `x^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialGate {
    pub monomial: Monomial,
    pub weight: u32,
}

impl MonomialGate {
    pub fn support(&self) -> Vec<usize> {
        self.monomial
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Gate list preparing the state of `poly` from the uniform superposition.
pub fn monomial_gate_list(poly: &Polynomial) -> Vec<MonomialGate> {
    let mut terms: Vec<(&Monomial, u32)> = poly.terms().collect();
    terms.sort_by_key(|(m, _)| m.display_key());
    terms
        .into_iter()
        .map(|(m, c)| MonomialGate {
            monomial: m.clone(),
            weight: c,
        })
        .collect()
}

/// Accumulated phase function after applying `gates` to the uniform state.
pub fn apply_gates(d: u32, n: usize, gates: &[MonomialGate]) -> Result<FiniteFunction> {
    let mut f = FiniteFunction::zero(d, n)?;
    for g in gates {
        if g.monomial.0.len() != n {
            return Err(FfeError::ArityMismatch {
                expected: n,
                found: g.monomial.0.len(),
            });
        }
        let layer = FiniteFunction::from_fn(d, n, |x| g.weight as i64 * g.monomial.eval(x, d) as i64)?;
        f = f.add(&layer)?;
    }
    Ok(f)
}
