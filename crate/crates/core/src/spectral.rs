//! Exact and numeric spectral quantities of bipartite FFE states.
//!
//! `A_{xy} = ω^{f(x,y)}` is the unnormalised coefficient matrix and
//! `G_{ij} = Σ_k ω^{f(k,i) - f(k,j)}` its column Gram matrix. The reduced
//! state is `ρ = G / d²`.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::{rank, CyclotomicInt, CyclotomicRat};
use crate::error::{FfeError, Result};
use crate::ring::FiniteFunction;

/// Convergence threshold on off-diagonal magnitudes.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Entrywise tolerance of [`verify_lu_map_f4_f22`].
pub const LU_MAP_TOLERANCE: f64 = 1e-9;

/// Eigenvalues of `ρ` below this are reported as exact zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-11;

pub const JACOBI_MAX_SWEEPS: usize = 100;

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

/// Square matrix over Z[ω_d].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    d: u32,
    entries: Vec<CyclotomicInt>,
}

impl GramMatrix {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicInt {
        &self.entries[i * self.d as usize + j]
    }

    fn mul(&self, other: &GramMatrix) -> GramMatrix {
        let d = self.d as usize;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = CyclotomicInt::zero(self.d);
                for k in 0..d {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        GramMatrix { d: self.d, entries }
    }

    pub fn trace(&self) -> CyclotomicInt {
        (0..self.d as usize).fold(CyclotomicInt::zero(self.d), |acc, i| &acc + self.get(i, i))
    }

    /// Hermitian under `ω -> ω^{-1}`.
    pub fn is_hermitian(&self) -> bool {
        let d = self.d as usize;
        (0..d).all(|i| (0..d).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }
}

pub fn gram(f: &FiniteFunction) -> Result<GramMatrix> {
    require_bipartite(f)?;
    let d = f.d();
    let du = d as usize;
    let mut entries = Vec::with_capacity(du * du);
    let mut counts = vec![0i64; du];
    for i in 0..d {
        for j in 0..d {
            counts.iter_mut().for_each(|c| *c = 0);
            for k in 0..d {
                counts[((f.entry(k, i) + d - f.entry(k, j)) % d) as usize] += 1;
            }
            entries.push(CyclotomicInt::from_exponent_counts(d, &counts));
        }
    }
    Ok(GramMatrix { d, entries })
}

/// Exact `(tr G², .., tr G^d)`; equal signatures characterise LU classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LuSignature {
    pub d: u32,
    pub traces: Vec<CyclotomicInt>,
}

impl LuSignature {
    /// `tr ρ^k = tr G^k / d^{2k}` for `k = 1..=d`.
    pub fn normalized(&self) -> Vec<CyclotomicRat> {
        let d = self.d;
        let mut out = vec![CyclotomicRat::from_int(d, 1)];
        for (idx, t) in self.traces.iter().enumerate() {
            let k = idx as u32 + 2;
            let den = BigInt::from(d).pow(2 * k);
            out.push(CyclotomicRat::new(t.clone(), den).expect("nonzero denominator"));
        }
        out
    }

    /// Traces rendered in the power basis of Z[ω_d].
    pub fn to_strings(&self) -> Vec<String> {
        self.traces.iter().map(|t| t.to_string()).collect()
    }
}

pub fn trace_powers(f: &FiniteFunction) -> Result<LuSignature> {
    let g = gram(f)?;
    let mut power = g.clone();
    let mut traces = Vec::with_capacity(f.d() as usize - 1);
    for _ in 2..=f.d() {
        power = power.mul(&g);
        traces.push(power.trace());
    }
    Ok(LuSignature { d: f.d(), traces })
}

/// Characteristic-polynomial coefficients `c_1 .. c_d` of `ρ`, from the
/// normalised trace powers via Newton's identities.
pub fn char_poly_coeffs(f: &FiniteFunction) -> Result<Vec<CyclotomicRat>> {
    let d = f.d();
    let p = trace_powers(f)?.normalized();
    let mut e = vec![CyclotomicRat::from_int(d, 1)];
    for k in 1..=d as usize {
        let mut acc = CyclotomicRat::zero(d);
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.div_int(k as i64)?);
    }
    Ok(e.into_iter()
        .skip(1)
        .enumerate()
        .map(|(k, ek)| if k % 2 == 0 { -&ek } else { ek })
        .collect())
}

/// True iff the spectrum of `ρ` is `1/r` with multiplicity `r` and zero
/// otherwise.
pub fn subspace_maximally_entangled(f: &FiniteFunction, r: u32) -> Result<bool> {
    let d = f.d();
    if r == 0 || r > d {
        return Err(FfeError::InvalidArgument(format!(
            "subspace dimension {r} outside 1..={d}"
        )));
    }
    let coeffs = char_poly_coeffs(f)?;
    for (idx, c) in coeffs.iter().enumerate() {
        let k = idx as u32 + 1;
        let ek = if k <= r {
            let binom = binomial(r as u64, k as u64);
            let sign = if k % 2 == 1 { -1 } else { 1 };
            CyclotomicRat::from_ratio(d, BigInt::from(binom) * sign, BigInt::from(r).pow(k))?
        } else {
            CyclotomicRat::zero(d)
        };
        if *c != ek {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Exact rank of the coefficient matrix over Q(ω_d).
pub fn schmidt_rank(f: &FiniteFunction) -> Result<usize> {
    require_bipartite(f)?;
    let d = f.d();
    let rows = (0..d)
        .map(|x| {
            (0..d)
                .map(|y| CyclotomicInt::omega_pow(d, f.entry(x, y) as i64))
                .collect()
        })
        .collect();
    Ok(rank(rows))
}

/// `ω^f` is a Butson Hadamard matrix, i.e. `G = d·I` exactly.
pub fn is_butson_hadamard(f: &FiniteFunction) -> Result<bool> {
    let g = gram(f)?;
    let d = f.d() as usize;
    let zero = CyclotomicInt::zero(f.d());
    Ok((0..d).all(|i| (0..d).all(|j| i == j || *g.get(i, j) == zero)))
}

/// Numeric `ρ = G / d²`.
pub fn reduced_density_numeric(f: &FiniteFunction) -> Result<Vec<Vec<Complex64>>> {
    require_bipartite(f)?;
    let d = f.d();
    let norm = (d * d) as f64;
    let w = |e: u32| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / d as f64);
    Ok((0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    (0..d)
                        .map(|k| w((f.entry(k, i) + d - f.entry(k, j)) % d))
                        .sum::<Complex64>()
                        / norm
                })
                .collect()
        })
        .collect())
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(FfeError::Numeric("non-finite matrix entry".into()));
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].abs())
            .fold(0.0, f64::max);
        if off < JACOBI_TOLERANCE {
            let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
            ev.sort_by(|x, y| y.total_cmp(x));
            return Ok(ev);
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (rp, rq) = (row[p], row[q]);
                    row[p] = c * rp - s * rq;
                    row[q] = s * rp + c * rq;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
            }
        }
    }
    Err(FfeError::Numeric(format!(
        "Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )))
}

/// Square roots of the eigenvalues of `ρ`, descending. `ρ = A + iB` is
/// diagonalised through the real symmetric embedding `[[A, -B], [B, A]]`,
/// whose spectrum is that of `ρ` with every value doubled.
pub fn singular_values(f: &FiniteFunction) -> Result<Vec<f64>> {
    let rho = reduced_density_numeric(f)?;
    let d = rho.len();
    let mut m = vec![vec![0.0; 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            let z = rho[i][j];
            m[i][j] = z.re;
            m[i + d][j + d] = z.re;
            m[i][j + d] = -z.im;
            m[i + d][j] = z.im;
        }
    }
    let ev = jacobi_eigenvalues(m)?;
    Ok(ev
        .iter()
        .step_by(2)
        .map(|&l| if l < EIGENVALUE_FLOOR { 0.0 } else { l.sqrt() })
        .collect())
}

/// The closed form stated for `tr ρ²` of rank-2 states `g_A(x)·y` whose
/// `g_A` takes two values with multiplicities `n1`, `n2`:
/// `(2d - 1)/d² + (d - 1)/d³ · (n1² - n1 + n2² - n2)`.
pub fn rank2_trace_formula(d: u32, n1: u32, n2: u32) -> Result<BigRational> {
    check_rank2_counts(d, n1, n2)?;
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let (d, n1, n2) = (d as i64, n1 as i64, n2 as i64);
    Ok(r(2 * d - 1, d * d) + r(d - 1, d * d * d) * r(n1 * n1 - n1 + n2 * n2 - n2, 1))
}

/// `tr ρ² = (n1² + n2²)/d²` for the same family: `ρ` has eigenvalues
/// `n1/d` and `n2/d` when the two output characters are orthogonal.
pub fn rank2_trace_exact(d: u32, n1: u32, n2: u32) -> Result<BigRational> {
    check_rank2_counts(d, n1, n2)?;
    Ok(BigRational::new(BigInt::from(n1 * n1 + n2 * n2), BigInt::from(d * d)))
}

fn check_rank2_counts(d: u32, n1: u32, n2: u32) -> Result<()> {
    if n1 == 0 || n2 == 0 || n1 + n2 != d {
        return Err(FfeError::InvalidArgument(format!(
            "counts ({n1}, {n2}) do not split d={d}"
        )));
    }
    Ok(())
}

/// Normalised `tr ρ²` as an exact rational when it lies in Q.
pub fn purity_rational(f: &FiniteFunction) -> Result<Option<BigRational>> {
    let sig = trace_powers(f)?;
    let t2 = &sig.normalized()[1];
    Ok(t2
        .numerator()
        .as_integer()
        .map(|n| BigRational::new(n.clone(), t2.denominator().clone())))
}

/// `binom(p^{m-1}, k) · p^k ≡ 0 (mod p^m)` for `0 < k ≤ p^{m-1}`.
pub fn kummer_check(p: u32, m: u32, k: u64) -> Result<bool> {
    if p < 2 || !(2..p).all(|q| !p.is_multiple_of(q)) {
        return Err(FfeError::InvalidArgument(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(FfeError::InvalidArgument("m must be positive".into()));
    }
    let top = (p as u64).pow(m - 1);
    if k == 0 || k > top {
        return Err(FfeError::InvalidArgument(format!("k={k} outside 1..={top}")));
    }
    let value = binomial(top, k) * BigUint::from(p).pow(k as u32);
    Ok((value % BigUint::from(p).pow(m)).is_zero())
}

type CMatrix = Vec<Vec<Complex64>>;

/// `ω^{f(x,y)} / scale` as a complex matrix.
pub fn phase_matrix(f: &FiniteFunction, scale: f64) -> Result<CMatrix> {
    require_bipartite(f)?;
    let d = f.d();
    Ok((0..d)
        .map(|x| {
            (0..d)
                .map(|y| {
                    Complex64::from_polar(
                        1.0 / scale,
                        2.0 * std::f64::consts::PI * f.entry(x, y) as f64 / d as f64,
                    )
                })
                .collect()
        })
        .collect())
}

/// The unitary Fourier matrix `ω^{xy}/√d`.
pub fn fourier_matrix(d: u32) -> CMatrix {
    let s = (d as f64).sqrt();
    (0..d)
        .map(|x| {
            (0..d)
                .map(|y| Complex64::from_polar(1.0 / s, 2.0 * std::f64::consts::PI * (x * y % d) as f64 / d as f64))
                .collect()
        })
        .collect()
}

fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn transpose(a: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn conjugate(a: &CMatrix) -> CMatrix {
    a.iter().map(|r| r.iter().map(|z| z.conj()).collect()).collect()
}

/// State matrix `Ψ` after applying `1 ⊗ U`: `Ψ' = Ψ Uᵀ`.
pub fn apply_second_site(state: &CMatrix, u: &CMatrix) -> CMatrix {
    matmul(state, &transpose(u))
}

/// `|<a|b>| ≈ 1` for normalised state matrices.
pub fn equal_up_to_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let overlap: Complex64 = a
        .iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| x.conj() * y)
        .sum();
    let na: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().flatten().map(|z| z.norm_sqr()).sum();
    (overlap.norm() - (na * nb).sqrt()).abs() < tol && (na - nb).abs() < tol
}

/// The d=4 local unitary `F_4ᵀ · H*` on the second site, where `H` is the
/// unitary coefficient matrix of `xy² + x²y + 2xy`.
pub fn lu_map_f4_f22() -> CMatrix {
    let f22 = f22_function();
    let h = phase_matrix(&f22, 2.0).expect("bipartite");
    matmul(&transpose(&fourier_matrix(4)), &conjugate(&h))
}

pub(crate) fn f22_function() -> FiniteFunction {
    FiniteFunction::from_fn(4, 2, |x| {
        let (a, b) = (x[0] as i64, x[1] as i64);
        a * b * b + a * a * b + 2 * a * b
    })
    .expect("d=4 is supported")
}

/// Applies [`lu_map_f4_f22`] to `|f22>` and compares with `|xy>` up to a
/// global phase.
pub fn verify_lu_map_f4_f22() -> bool {
    let f4 = FiniteFunction::from_fn(4, 2, |x| (x[0] * x[1]) as i64).expect("d=4 is supported");
    let psi22 = phase_matrix(&f22_function(), 4.0).expect("bipartite");
    let psi4 = phase_matrix(&f4, 4.0).expect("bipartite");
    equal_up_to_phase(&apply_second_site(&psi22, &lu_map_f4_f22()), &psi4, LU_MAP_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::poly::Polynomial;

    fn poly(s: &str, d: u32) -> FiniteFunction {
        Polynomial::parse(s, d, 2).unwrap().to_function()
    }

    fn rand_fn(d: u32, rng: &mut ChaCha8Rng) -> FiniteFunction {
        FiniteFunction::new(d, 2, (0..d * d).map(|_| rng.gen_range(0..d)).collect()).unwrap()
    }

    #[test]
    fn gram_examples() {
        let g = gram(&poly("0", 3)).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| *g.get(i, j) == CyclotomicInt::from_int(3, 3))));
        let g = gram(&poly("x*y", 5)).unwrap();
        assert!((0..5).all(|i| (0..5).all(|j| *g.get(i, j) == CyclotomicInt::from_int(5, if i == j { 5 } else { 0 }))));
    }

    #[test]
    fn gram_matches_numeric_and_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in [2u32, 3, 4, 5, 6, 8, 12] {
            let f = rand_fn(d, &mut rng);
            let g = gram(&f).unwrap();
            assert!(g.is_hermitian());
            let a = phase_matrix(&f, 1.0).unwrap();
            for i in 0..d as usize {
                assert_eq!(*g.get(i, i), CyclotomicInt::from_int(d, d));
                for j in 0..d as usize {
                    let num: Complex64 = (0..d as usize).map(|k| a[k][i] * a[k][j].conj()).sum();
                    assert!((g.get(i, j).to_complex() - num).norm() < 1e-9);
                }
            }
            assert_eq!(g.trace(), CyclotomicInt::from_int(d, d * d));
        }
    }

    #[test]
    fn trace_power_extremes() {
        for d in 2..=7u32 {
            let me = trace_powers(&poly("x*y", d)).unwrap().normalized();
            let sep = trace_powers(&poly("0", d)).unwrap().normalized();
            for (k, (m, s)) in me.iter().zip(&sep).enumerate() {
                let k = k as u32 + 1;
                assert_eq!(*m, CyclotomicRat::from_ratio(d, 1, BigInt::from(d).pow(k - 1)).unwrap());
                assert_eq!(*s, CyclotomicRat::from_int(d, 1));
            }
        }
    }

    #[test]
    fn signature_entries_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in [3u32, 4, 6] {
            let sig = trace_powers(&rand_fn(d, &mut rng)).unwrap();
            assert!(sig.traces.iter().all(|t| t.conj() == *t));
        }
    }

    #[test]
    fn schmidt_rank_examples() {
        assert_eq!(schmidt_rank(&poly("0", 4)).unwrap(), 1);
        assert_eq!(schmidt_rank(&poly("x*y", 5)).unwrap(), 5);
        assert_eq!(schmidt_rank(&poly("2*x*y", 6)).unwrap(), 3);
        assert_eq!(schmidt_rank(&poly("3*x*y", 6)).unwrap(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in [3u32, 4, 6] {
            for _ in 0..10 {
                let f = rand_fn(d, &mut rng);
                let numeric = singular_values(&f).unwrap().iter().filter(|&&s| s > 1e-8).count();
                assert_eq!(schmidt_rank(&f).unwrap(), numeric);
            }
        }
    }

    #[test]
    fn hadamard_examples() {
        assert!(is_butson_hadamard(&poly("x*y", 4)).unwrap());
        assert!(is_butson_hadamard(&f22_function()).unwrap());
        assert!(!is_butson_hadamard(&poly("0", 4)).unwrap());
        let sv = singular_values(&poly("x*y", 6)).unwrap();
        assert!(sv.iter().all(|s| (s - 1.0 / 6f64.sqrt()).abs() < 1e-9));
    }

    #[test]
    fn singular_value_examples() {
        let sv = singular_values(&poly("0", 3)).unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-12 && sv[1].abs() < 1e-6 && sv[2].abs() < 1e-6);
        let class5 = FiniteFunction::from_matrix(3, &[vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]).unwrap();
        let sv = singular_values(&class5).unwrap();
        for (a, b) in sv.iter().zip([0.77814, 0.57735, 0.24732]) {
            assert!((a - b).abs() < 1e-4, "{sv:?}");
        }
        let err = jacobi_eigenvalues(vec![vec![f64::NAN, 1.0], vec![1.0, 0.0]]);
        assert!(err.is_err());
    }

    #[test]
    fn char_poly_first_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in [2u32, 3, 4, 5, 6] {
            let c = char_poly_coeffs(&rand_fn(d, &mut rng)).unwrap();
            assert_eq!(c[0], CyclotomicRat::from_int(d, -1));
        }
        let c = char_poly_coeffs(&poly("0", 4)).unwrap();
        assert!(c[1..].iter().all(CyclotomicRat::is_zero));
    }

    /// The second coefficient of the family `k x^{d-1} y^{d-1}` equals
    /// `2(d-1)²/d⁴ · (1 - cos(2πk/d))`, derived from its two-valued rows.
    #[test]
    fn c2_of_corner_family() {
        for d in [5u32, 7] {
            for k in 1..d {
                let f = poly(&format!("{k}*x^{e}*y^{e}", e = d - 1), d);
                let c2 = char_poly_coeffs(&f).unwrap()[1].to_complex();
                let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
                let expected = 2.0 * ((d - 1) * (d - 1)) as f64 / (d as f64).powi(4) * (1.0 - theta.cos());
                assert!((c2.re - expected).abs() < 1e-9 && c2.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn subspace_entanglement_examples() {
        assert!(subspace_maximally_entangled(&poly("3*x*y", 6), 2).unwrap());
        assert!(!subspace_maximally_entangled(&poly("3*x*y", 6), 3).unwrap());
        assert!(subspace_maximally_entangled(&poly("x^2*y", 4), 2).unwrap());
        assert!(subspace_maximally_entangled(&poly("0", 4), 1).unwrap());
        assert!(!subspace_maximally_entangled(&poly("0", 4), 2).unwrap());
        assert!(subspace_maximally_entangled(&poly("x*y", 4), 4).unwrap());
        assert!(subspace_maximally_entangled(&poly("x*y", 4), 5).is_err());
    }

    #[test]
    fn rank2_closed_forms() {
        assert_eq!(
            rank2_trace_formula(3, 1, 2).unwrap(),
            BigRational::new(19.into(), 27.into())
        );
        assert_eq!(
            rank2_trace_exact(3, 1, 2).unwrap(),
            BigRational::new(5.into(), 9.into())
        );
        assert!(rank2_trace_formula(4, 1, 2).is_err());
        let x2y = purity_rational(&poly("x^2*y", 3)).unwrap().unwrap();
        assert_eq!(x2y, rank2_trace_exact(3, 1, 2).unwrap());
        let even = rank2_trace_formula(6, 3, 3).unwrap();
        for n1 in 1..6 {
            assert!(rank2_trace_formula(6, n1, 6 - n1).unwrap() >= even);
        }
    }

    #[test]
    fn kummer_examples() {
        assert!(kummer_check(2, 2, 1).unwrap());
        assert!(kummer_check(3, 3, 2).unwrap());
        assert!(kummer_check(4, 2, 1).is_err());
        assert!(kummer_check(3, 2, 4).is_err());
    }

    #[test]
    fn lu_map_fixture() {
        assert!(verify_lu_map_f4_f22());
        let f4 = poly("x*y", 4);
        let psi4 = phase_matrix(&f4, 4.0).unwrap();
        let back = apply_second_site(&psi4, &transpose(&conjugate(&lu_map_f4_f22())));
        let psi22 = phase_matrix(&f22_function(), 4.0).unwrap();
        assert!(equal_up_to_phase(&back, &psi22, 1e-9));
        let id: CMatrix = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        assert!(equal_up_to_phase(&apply_second_site(&psi4, &id), &psi4, 1e-9));
    }

    /// With the plain `F_2 ⊗ F_2` in place of the coefficient matrix of
    /// `f22`, the image is `|xy>` with rows 1 and 2 exchanged.
    #[test]
    fn lu_map_with_tensor_fourier_is_row_swapped() {
        let f2 = fourier_matrix(2);
        let h: CMatrix = (0..4)
            .map(|i| (0..4).map(|j| f2[i / 2][j / 2] * f2[i % 2][j % 2]).collect())
            .collect();
        let u = matmul(&transpose(&fourier_matrix(4)), &conjugate(&h));
        let psi22 = phase_matrix(&f22_function(), 4.0).unwrap();
        let out = apply_second_site(&psi22, &u);
        let psi4 = phase_matrix(&poly("x*y", 4), 4.0).unwrap();
        assert!(!equal_up_to_phase(&out, &psi4, 1e-9));
        let mut swapped = psi4.clone();
        swapped.swap(1, 2);
        assert!(equal_up_to_phase(&out, &swapped, 1e-9));
    }
}
