//! Exact arithmetic in Z[ω_d] and Q(ω_d), `ω_d = e^{2πi/d}`, for d ≤ 12.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{FfeError, Result};
use crate::ring::MAX_D;

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut q = vec![0i64; num.len() + 1 - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1] / den[dl - 1];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic_table() -> &'static Vec<Vec<i64>> {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<i64>> = vec![vec![]; MAX_D as usize + 1];
        for d in 1..=MAX_D as usize {
            let mut p = vec![0i64; d + 1];
            p[0] = -1;
            p[d] = 1;
            for (e, q) in table.iter().enumerate().take(d).skip(1) {
                if d % e == 0 {
                    p = poly_div_exact(&p, q);
                }
            }
            table[d] = p;
        }
        table
    })
}

/// Coefficients of Φ_d, lowest degree first.
pub fn cyclotomic_polynomial(d: u32) -> Result<&'static [i64]> {
    if d == 0 || d > MAX_D {
        return Err(FfeError::UnsupportedDimension(d));
    }
    Ok(&cyclotomic_table()[d as usize])
}

/// Euler's totient, which is the degree of Φ_d.
pub fn phi(d: u32) -> usize {
    (1..=d).filter(|&k| k.gcd(&d) == 1).count()
}

/// An element of Z[ω_d] in the power basis `1, ω, .., ω^{φ(d)-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    d: u32,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(d: u32) -> Self {
        Self {
            d,
            coeffs: vec![BigInt::zero(); phi(d)],
        }
    }

    pub fn from_int(d: u32, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(d);
        z.coeffs[0] = v.into();
        z
    }

    pub fn one(d: u32) -> Self {
        Self::from_int(d, 1)
    }

    /// `ω^k`.
    pub fn omega_pow(d: u32, k: i64) -> Self {
        let mut counts = vec![0i64; d as usize];
        counts[k.rem_euclid(d as i64) as usize] = 1;
        Self::from_exponent_counts(d, &counts)
    }

    /// `Σ_k counts[k] ω^k` for `k` in `0..d`.
    pub fn from_exponent_counts(d: u32, counts: &[i64]) -> Self {
        cyclotomic_reduce(d, &counts.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()).expect("d already validated")
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in Z.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// The Galois automorphism `ω -> ω^k`, `gcd(k, d) = 1`.
    pub fn galois(&self, k: u32) -> Self {
        let d = self.d as usize;
        let mut raw = vec![BigInt::zero(); d];
        for (j, c) in self.coeffs.iter().enumerate() {
            raw[(j * k as usize) % d] += c;
        }
        cyclotomic_reduce(self.d, &raw).expect("d already validated")
    }

    /// Complex conjugation, `ω -> ω^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.d - 1)
    }

    /// Product of all non-trivial Galois conjugates; `self * adjugate` is the
    /// field norm, a rational integer.
    pub fn adjugate(&self) -> Self {
        let mut acc = Self::one(self.d);
        for k in 2..=self.d {
            if k.gcd(&self.d) == 1 {
                acc = &acc * &self.galois(k);
            }
        }
        acc
    }

    /// Norm down to Q.
    pub fn norm(&self) -> BigInt {
        let prod = self * &self.adjugate();
        prod.as_integer().cloned().expect("field norm is rational")
    }

    /// Greatest common divisor of the integer coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divides every coefficient by `k`, which must divide them all.
    pub fn div_exact(&self, k: &BigInt) -> Self {
        Self {
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.d as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc += pw * c.to_f64().unwrap_or(f64::NAN);
            pw *= w;
        }
        acc
    }
}

/// Folds exponents mod d and reduces modulo Φ_d.
pub fn cyclotomic_reduce(d: u32, raw: &[BigInt]) -> Result<CyclotomicInt> {
    let phi_d = cyclotomic_polynomial(d)?;
    let deg = phi_d.len() - 1;
    let mut folded = vec![BigInt::zero(); (d as usize).max(deg)];
    for (k, c) in raw.iter().enumerate() {
        folded[k % d as usize] += c;
    }
    for i in (deg..folded.len()).rev() {
        if folded[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut folded[i]);
        for (j, &pj) in phi_d[..deg].iter().enumerate() {
            if pj != 0 {
                folded[i - deg + j] -= &c * pj;
            }
        }
    }
    folded.truncate(deg);
    Ok(CyclotomicInt { d, coeffs: folded })
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: Self) -> CyclotomicInt {
        debug_assert_eq!(self.d, rhs.d);
        CyclotomicInt {
            d: self.d,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: Self) -> CyclotomicInt {
        debug_assert_eq!(self.d, rhs.d);
        CyclotomicInt {
            d: self.d,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            d: self.d,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: Self) -> CyclotomicInt {
        debug_assert_eq!(self.d, rhs.d);
        let mut raw = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        cyclotomic_reduce(self.d, &raw).expect("d already validated")
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// An element of Q(ω_d) as `numerator / denominator` with a positive
/// integer denominator sharing no factor with the numerator's content.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicRat {
    num: CyclotomicInt,
    den: BigInt,
}

impl CyclotomicRat {
    pub fn new(num: CyclotomicInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(FfeError::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: CyclotomicInt, den: BigInt) -> Self {
        let (num, den) = if den.is_negative() { (-&num, -den) } else { (num, den) };
        if num.is_zero() {
            return Self {
                den: BigInt::one(),
                num,
            };
        }
        let g = num.content().gcd(&den);
        if g.is_one() {
            Self { num, den }
        } else {
            Self {
                num: num.div_exact(&g),
                den: den / g,
            }
        }
    }

    pub fn from_int(d: u32, v: impl Into<BigInt>) -> Self {
        Self {
            num: CyclotomicInt::from_int(d, v),
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(d: u32, n: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        Self::new(CyclotomicInt::from_int(d, n), m.into())
    }

    pub fn zero(d: u32) -> Self {
        Self::from_int(d, 0)
    }

    pub fn numerator(&self) -> &CyclotomicInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(FfeError::InvalidArgument("inverse of zero".into()));
        }
        let adj = self.num.adjugate();
        let norm = (&self.num * &adj)
            .as_integer()
            .cloned()
            .expect("field norm is rational");
        Ok(Self::normalized(adj.scale(&self.den), norm))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        Self::new(self.num.clone(), &self.den * k)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.num.to_complex() / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<CyclotomicInt> for CyclotomicRat {
    fn from(num: CyclotomicInt) -> Self {
        Self {
            num,
            den: BigInt::one(),
        }
    }
}

impl Add for &CyclotomicRat {
    type Output = CyclotomicRat;
    fn add(self, rhs: Self) -> CyclotomicRat {
        let num = &self.num.scale(&rhs.den) + &rhs.num.scale(&self.den);
        CyclotomicRat::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &CyclotomicRat {
    type Output = CyclotomicRat;
    fn sub(self, rhs: Self) -> CyclotomicRat {
        let num = &self.num.scale(&rhs.den) - &rhs.num.scale(&self.den);
        CyclotomicRat::normalized(num, &self.den * &rhs.den)
    }
}

impl Neg for &CyclotomicRat {
    type Output = CyclotomicRat;
    fn neg(self) -> CyclotomicRat {
        CyclotomicRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &CyclotomicRat {
    type Output = CyclotomicRat;
    fn mul(self, rhs: Self) -> CyclotomicRat {
        CyclotomicRat::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl fmt::Display for CyclotomicRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// Exact rank over Q(ω_d). Each pivot row is multiplied by the adjugate of
/// its pivot so the pivot becomes a rational integer; eliminated rows are
/// divided by their integer content to limit coefficient growth.
pub fn rank(mut rows: Vec<Vec<CyclotomicInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pi) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pi);
        let adj = rows[r][c].adjugate();
        let pivot_row: Vec<CyclotomicInt> = rows[r].iter().map(|x| x * &adj).collect();
        let norm = pivot_row[c].as_integer().cloned().expect("field norm is rational");
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let a = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &x.scale(&norm) - &(&a * p);
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(&x.content()));
            if !g.is_zero() && !g.is_one() {
                for x in row.iter_mut() {
                    *x = x.div_exact(&g);
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}
