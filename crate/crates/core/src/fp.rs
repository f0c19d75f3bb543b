//! The finite-function-encoding Pauli (FP) group: elements `ω^c X_π Z_h`,
//! their local (LFP) subgroup, and the dephased normal form.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FfeError, Result};
use crate::ring::{modd, FiniteFunction, Perm, PointPerm};

/// `ω^c · X_π · Z_h`, acting on FFE states by `|g> -> ω^c |(g + h)∘π⁻¹>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpElement {
    global_phase: u32,
    perm: PointPerm,
    phase_fn: FiniteFunction,
}

impl FpElement {
    pub fn new(global_phase: i64, perm: PointPerm, phase_fn: FiniteFunction) -> Result<Self> {
        check_shape(&perm, &phase_fn)?;
        let d = phase_fn.d();
        Ok(Self {
            global_phase: modd(global_phase, d),
            perm,
            phase_fn,
        })
    }

    /// Builds `ω^c · Z_h · X_π`, rewritten as `ω^c · X_π · Z_{h∘π}`.
    pub fn from_z_then_x(global_phase: i64, phase_fn: FiniteFunction, perm: PointPerm) -> Result<Self> {
        check_shape(&perm, &phase_fn)?;
        let h = phase_fn.compose_global_permutation(&perm)?;
        Self::new(global_phase, perm, h)
    }

    pub fn identity(d: u32, n: usize) -> Result<Self> {
        Self::new(0, PointPerm::identity(d, n), FiniteFunction::zero(d, n)?)
    }

    pub fn pure_x(perm: PointPerm) -> Result<Self> {
        let zero = FiniteFunction::zero(perm.d(), perm.n())?;
        Self::new(0, perm, zero)
    }

    pub fn pure_z(phase_fn: FiniteFunction) -> Self {
        let perm = PointPerm::identity(phase_fn.d(), phase_fn.n());
        Self {
            global_phase: 0,
            perm,
            phase_fn,
        }
    }

    pub fn d(&self) -> u32 {
        self.phase_fn.d()
    }

    pub fn n(&self) -> usize {
        self.phase_fn.n()
    }

    pub fn global_phase(&self) -> u32 {
        self.global_phase
    }

    pub fn perm(&self) -> &PointPerm {
        &self.perm
    }

    pub fn phase_fn(&self) -> &FiniteFunction {
        &self.phase_fn
    }

    /// Returns `((g + h)∘π⁻¹, c)`.
    pub fn apply(&self, g: &FiniteFunction) -> Result<(FiniteFunction, u32)> {
        let shifted = g.add(&self.phase_fn)?;
        Ok((
            shifted.compose_global_permutation(&self.perm.inverse())?,
            self.global_phase,
        ))
    }

    /// `self · other`: `(X_π Z_h)(X_σ Z_g) = X_{π∘σ} Z_{h∘σ + g}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let h_sigma = self.phase_fn.compose_global_permutation(&other.perm)?;
        let phase_fn = h_sigma.add(&other.phase_fn)?;
        Ok(Self {
            global_phase: (self.global_phase + other.global_phase) % self.d(),
            perm: self.perm.compose(&other.perm),
            phase_fn,
        })
    }

    /// `ω^{-c} X_{π⁻¹} Z_{-h∘π⁻¹}`.
    pub fn inverse(&self) -> Self {
        let d = self.d();
        let inv = self.perm.inverse();
        let phase_fn = self
            .phase_fn
            .compose_global_permutation(&inv)
            .expect("same shape")
            .neg();
        Self {
            global_phase: (d - self.global_phase) % d,
            perm: inv,
            phase_fn,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.global_phase == 0 && self.perm.is_identity() && self.phase_fn.values().iter().all(|&v| v == 0)
    }

    /// True when the X and Z parts commute, i.e. `h∘π = h`.
    pub fn parts_commute(&self) -> bool {
        self.phase_fn
            .compose_global_permutation(&self.perm)
            .expect("same shape")
            == self.phase_fn
    }
}

fn check_shape(perm: &PointPerm, h: &FiniteFunction) -> Result<()> {
    if perm.d() != h.d() {
        return Err(FfeError::DimensionMismatch {
            expected: h.d(),
            found: perm.d(),
        });
    }
    if perm.n() != h.n() {
        return Err(FfeError::ArityMismatch {
            expected: h.n(),
            found: perm.n(),
        });
    }
    Ok(())
}

/// Single-site operator `X_π Z_h` with `h` a function of that site alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalOp {
    pub perm: Vec<u32>,
    pub phase: Vec<u32>,
}

impl LocalOp {
    pub fn identity(d: u32) -> Self {
        Self {
            perm: (0..d).collect(),
            phase: vec![0; d as usize],
        }
    }
}

/// A local FP element: one `X_{π_i} Z_{h_i}` per site and a global phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LfpElement {
    pub sites: Vec<LocalOp>,
    pub global_phase: u32,
}

impl LfpElement {
    pub fn new(d: u32, sites: Vec<LocalOp>, global_phase: u32) -> Result<Self> {
        if sites.is_empty() {
            return Err(FfeError::InvalidArgument(
                "an LFP element needs at least one site".into(),
            ));
        }
        for s in &sites {
            if s.perm.len() != d as usize || s.phase.len() != d as usize {
                return Err(FfeError::Length {
                    expected: d as usize,
                    found: s.perm.len().max(s.phase.len()),
                });
            }
            Perm::new(s.perm.clone())?;
            if let Some(&v) = s.phase.iter().find(|&&v| v >= d) {
                return Err(FfeError::Residue { value: v as i64, d });
            }
        }
        if global_phase >= d {
            return Err(FfeError::Residue {
                value: global_phase as i64,
                d,
            });
        }
        Ok(Self { sites, global_phase })
    }

    pub fn identity(d: u32, n: usize) -> Self {
        Self {
            sites: vec![LocalOp::identity(d); n],
            global_phase: 0,
        }
    }

    pub fn d(&self) -> u32 {
        self.sites[0].perm.len() as u32
    }

    pub fn n(&self) -> usize {
        self.sites.len()
    }

    /// The FP element with product permutation and summed phase functions.
    pub fn lift(&self) -> Result<FpElement> {
        let d = self.d();
        let n = self.n();
        let perms: Vec<Perm> = self
            .sites
            .iter()
            .map(|s| Perm::new(s.perm.clone()))
            .collect::<Result<_>>()?;
        let perm = PointPerm::from_sites(d, &perms)?;
        let mut h = FiniteFunction::zero(d, n)?;
        for (k, s) in self.sites.iter().enumerate() {
            h = h.add_local(k, &s.phase)?;
        }
        FpElement::new(self.global_phase as i64, perm, h)
    }

    /// Applies the element to `f`, discarding the global phase.
    pub fn act(&self, f: &FiniteFunction) -> Result<FiniteFunction> {
        if f.n() != self.n() {
            return Err(FfeError::ArityMismatch {
                expected: self.n(),
                found: f.n(),
            });
        }
        Ok(self.lift()?.apply(f)?.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(text: &str, d: u32) -> Result<Self> {
        let raw: LfpElement = serde_json::from_str(text)?;
        Self::new(d, raw.sites, raw.global_phase)
    }
}

/// Uniform random LFP element, deterministic in `seed`.
pub fn random_lfp(d: u32, n: usize, seed: u64) -> LfpElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_lfp_with(d, n, &mut rng)
}

pub fn random_lfp_with<R: Rng + ?Sized>(d: u32, n: usize, rng: &mut R) -> LfpElement {
    let sites = (0..n)
        .map(|_| {
            let mut perm: Vec<u32> = (0..d).collect();
            perm.shuffle(rng);
            let phase = (0..d).map(|_| rng.gen_range(0..d)).collect();
            LocalOp { perm, phase }
        })
        .collect();
    LfpElement {
        sites,
        global_phase: rng.gen_range(0..d),
    }
}

/// A dephased representative with the local-Z correction producing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DephasedForm {
    pub representative: FiniteFunction,
    pub correction: LfpElement,
}

/// Removes single-variable phases. For `n = 2` the result has zero first
/// row and column; for `n >= 3` only the coordinate axes are zeroed.
pub fn dephase(f: &FiniteFunction) -> DephasedForm {
    let d = f.d();
    let n = f.n();
    let origin = f.at(0) as i64;
    let axis = |k: usize, a: u32| {
        let mut x = vec![0u32; n];
        x[k] = a;
        f.eval(&x).expect("in range") as i64
    };
    let mut sites: Vec<LocalOp> = (0..n)
        .map(|k| LocalOp {
            perm: (0..d).collect(),
            phase: (0..d).map(|a| modd(-axis(k, a), d)).collect(),
        })
        .collect();
    for v in sites[0].phase.iter_mut() {
        *v = modd(*v as i64 + (n as i64 - 1) * origin, d);
    }
    let correction = LfpElement { sites, global_phase: 0 };
    let representative = correction.act(f).expect("shape matches");
    DephasedForm {
        representative,
        correction,
    }
}

/// True if `f` already satisfies the dephasing condition of its arity.
pub fn is_dephased(f: &FiniteFunction) -> bool {
    dephase(f).representative == *f
}

/// Permutes rows and columns of an image matrix and adds constants to them:
/// `f'(x, y) = f(r⁻¹(x), c⁻¹(y)) + a(x) + b(y)`.
pub fn image_matrix_row_col_ops(
    f: &FiniteFunction,
    row_perm: &Perm,
    col_perm: &Perm,
    row_phases: &[u32],
    col_phases: &[u32],
) -> Result<FiniteFunction> {
    if f.n() != 2 {
        return Err(FfeError::ArityMismatch {
            expected: 2,
            found: f.n(),
        });
    }
    let (ri, ci) = (row_perm.inverse(), col_perm.inverse());
    let d = f.d();
    if row_perm.d() != d || col_perm.d() != d {
        return Err(FfeError::DimensionMismatch {
            expected: d,
            found: row_perm.d().min(col_perm.d()),
        });
    }
    if row_phases.len() != d as usize || col_phases.len() != d as usize {
        return Err(FfeError::Length {
            expected: d as usize,
            found: row_phases.len().min(col_phases.len()),
        });
    }
    FiniteFunction::from_fn(d, 2, |x| {
        (f.entry(ri.apply(x[0]), ci.apply(x[1])) + row_phases[x[0] as usize] + col_phases[x[1] as usize]) as i64
    })
}
