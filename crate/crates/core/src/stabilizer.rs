//! FP stabilizers `S_{f,π} = X_π Z_{f∘π - f}` of FFE states.

use crate::cyclo::{rank, CyclotomicInt};
use crate::error::{FfeError, Result};
use crate::fp::FpElement;
use crate::ring::{unflatten, FiniteFunction, Perm, PointPerm};

/// Largest `d^n` for which the fixed space is computed exactly.
pub const FIXED_SPACE_BUDGET: usize = 256;

/// Largest `d` for which the per-site witness search is exhaustive.
pub const WITNESS_SEARCH_MAX_D: u32 = 6;

/// One d-cycle per site, optionally with witnesses `π_i` such that
/// `κ_i = π_i⁻¹ ∘ κ⁺ ∘ π_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSpec {
    cycles: Vec<Perm>,
    witnesses: Option<Vec<Perm>>,
}

impl CycleSpec {
    pub fn new(cycles: Vec<Perm>) -> Result<Self> {
        if cycles.is_empty() {
            return Err(FfeError::InvalidArgument(
                "a cycle specification needs at least one site".into(),
            ));
        }
        let d = cycles[0].d();
        for c in &cycles {
            if c.d() != d {
                return Err(FfeError::DimensionMismatch {
                    expected: d,
                    found: c.d(),
                });
            }
            if !c.is_full_cycle() {
                return Err(FfeError::NotFullCycle(d));
            }
        }
        Ok(Self {
            cycles,
            witnesses: None,
        })
    }

    /// `κ⁺ : k -> k + 1` on every site.
    pub fn kappa_plus(d: u32, n: usize) -> Self {
        Self {
            cycles: vec![Perm::shift(d, 1); n],
            witnesses: None,
        }
    }

    pub fn from_witnesses(witnesses: Vec<Perm>) -> Result<Self> {
        let d = witnesses
            .first()
            .map(Perm::d)
            .ok_or_else(|| FfeError::InvalidArgument("no witnesses".into()))?;
        let kp = Perm::shift(d, 1);
        let cycles: Vec<Perm> = witnesses.iter().map(|w| w.inverse().compose(&kp).compose(w)).collect();
        let mut spec = Self::new(cycles)?;
        spec.witnesses = Some(witnesses);
        Ok(spec)
    }

    /// Parses `"1,2,0;1,2,0"`: one image list per site separated by `;`.
    pub fn parse(text: &str) -> Result<Self> {
        let cycles = text
            .split(';')
            .map(|site| {
                let map = site
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<u32>()
                            .map_err(|_| FfeError::Parse(format!("bad cycle entry {v:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Perm::new(map)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cycles)
    }

    pub fn d(&self) -> u32 {
        self.cycles[0].d()
    }

    pub fn n(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[Perm] {
        &self.cycles
    }

    pub fn witnesses(&self) -> Option<&[Perm]> {
        self.witnesses.as_deref()
    }

    /// The cycle of `site` acting on the whole point set.
    pub fn point_perm(&self, site: usize) -> Result<PointPerm> {
        PointPerm::from_site(self.d(), self.n(), site, &self.cycles[site])
    }
}

/// A complete set of stabilizers, one per site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerSet {
    pub function: FiniteFunction,
    pub cycles: CycleSpec,
    pub elements: Vec<FpElement>,
}

/// `X_π Z_{f∘π - f}`, which maps `|f>` to itself with zero phase.
pub fn make_stabilizer(f: &FiniteFunction, pi: &PointPerm) -> Result<FpElement> {
    let h = f.compose_global_permutation(pi)?.sub(f)?;
    FpElement::new(0, pi.clone(), h)
}

pub fn complete_set(f: &FiniteFunction, cycles: &CycleSpec) -> Result<StabilizerSet> {
    if cycles.d() != f.d() {
        return Err(FfeError::DimensionMismatch {
            expected: f.d(),
            found: cycles.d(),
        });
    }
    if cycles.n() != f.n() {
        return Err(FfeError::ArityMismatch {
            expected: f.n(),
            found: cycles.n(),
        });
    }
    let elements = (0..f.n())
        .map(|k| make_stabilizer(f, &cycles.point_perm(k)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizerSet {
        function: f.clone(),
        cycles: cycles.clone(),
        elements,
    })
}

/// Dimension of the common +1 eigenspace of the set.
pub fn unique_fixed_space_dim(set: &StabilizerSet) -> Result<usize> {
    fixed_space_dim(&set.elements)
}

/// Dimension over Q(ω_d) of the joint fixed space of FP elements realised as
/// monomial matrices `M[π(x)][x] = ω^{h(x) + c}`.
pub fn fixed_space_dim(elements: &[FpElement]) -> Result<usize> {
    let Some(first) = elements.first() else {
        return Err(FfeError::InvalidArgument("no operators given".into()));
    };
    let (d, n) = (first.d(), first.n());
    let dim = first.phase_fn().len();
    if dim > FIXED_SPACE_BUDGET {
        return Err(FfeError::Budget {
            required: dim as u128,
            budget: FIXED_SPACE_BUDGET as u128,
        });
    }
    let mut rows = Vec::with_capacity(elements.len() * dim);
    for el in elements {
        if el.d() != d || el.n() != n {
            return Err(FfeError::InvalidArgument("operators act on different spaces".into()));
        }
        let inv = el.perm().inverse();
        for y in 0..dim {
            let x = inv.apply(y);
            let mut row = vec![CyclotomicInt::zero(d); dim];
            let phase = el.phase_fn().at(x) as i64 + el.global_phase() as i64;
            row[x] = CyclotomicInt::omega_pow(d, phase);
            row[y] = &row[y] - &CyclotomicInt::one(d);
            rows.push(row);
        }
    }
    Ok(dim - rank(rows))
}

/// True when `f∘κ - f` does not depend on `x_site`, with `κ` acting on
/// that site; equivalently the stabilizer's X and Z parts commute.
pub fn internally_commutes(f: &FiniteFunction, site: usize, kappa: &Perm) -> Result<bool> {
    if !kappa.is_full_cycle() {
        return Err(FfeError::NotFullCycle(f.d()));
    }
    let pp = PointPerm::from_site(f.d(), f.n(), site, kappa)?;
    let h = f.compose_global_permutation(&pp)?.sub(f)?;
    let d = f.d();
    let stride = (d as usize).pow((f.n() - 1 - site) as u32);
    let mut pt = vec![0u32; f.n()];
    Ok((0..h.len()).all(|i| {
        unflatten(i, d, &mut pt);
        let base = i - pt[site] as usize * stride;
        h.at(i) == h.at(base)
    }))
}

/// Per-site internal commutativity for a cycle specification.
pub fn internal_commutativity(f: &FiniteFunction, cycles: &CycleSpec) -> Result<Vec<bool>> {
    if cycles.n() != f.n() {
        return Err(FfeError::ArityMismatch {
            expected: f.n(),
            found: cycles.n(),
        });
    }
    (0..f.n())
        .map(|k| internally_commutes(f, k, &cycles.cycles()[k]))
        .collect()
}

/// Checks the cycles `κ_i = π_i⁻¹ κ⁺ π_i` built from the given witnesses.
pub fn internally_commuting_set_exists_for(f: &FiniteFunction, witnesses: &[Perm]) -> Result<bool> {
    let spec = CycleSpec::from_witnesses(witnesses.to_vec())?;
    Ok(internal_commutativity(f, &spec)?.into_iter().all(|b| b))
}

/// Outcome of the exhaustive search for an internally commuting set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(CycleSpec),
    NoneExists,
    Unknown,
}

/// Searches every d-cycle independently on each site. The per-site tests
/// do not interact, so this exhausts all `(d!)^n` witness tuples.
pub fn search_internally_commuting_set(f: &FiniteFunction) -> Result<WitnessSearch> {
    let d = f.d();
    if d > WITNESS_SEARCH_MAX_D {
        return Ok(WitnessSearch::Unknown);
    }
    let candidates = all_full_cycles(d);
    let mut chosen = Vec::with_capacity(f.n());
    for site in 0..f.n() {
        let mut hit = None;
        for c in &candidates {
            if internally_commutes(f, site, c)? {
                hit = Some(c.clone());
                break;
            }
        }
        match hit {
            Some(c) => chosen.push(c),
            None => return Ok(WitnessSearch::NoneExists),
        }
    }
    Ok(WitnessSearch::Found(CycleSpec::new(chosen)?))
}

/// All d-cycles on Z_d.
pub fn all_full_cycles(d: u32) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut rest: Vec<u32> = (1..d).collect();
    permute(&mut rest, 0, &mut |order| {
        let mut map = vec![0u32; d as usize];
        let mut prev = 0u32;
        for &v in order {
            map[prev as usize] = v;
            prev = v;
        }
        map[prev as usize] = 0;
        out.push(Perm::new(map).expect("cycle is a permutation"));
    });
    out
}

fn permute(v: &mut [u32], k: usize, emit: &mut impl FnMut(&[u32])) {
    if k == v.len() {
        emit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, emit);
        v.swap(k, i);
    }
}

/// True iff `f(σ(a), σ⁻¹(b), t) = f(σ(b), σ⁻¹(a), t)` for all `a, b` and
/// every assignment `t` of the remaining sites.
pub fn continuous_symmetry_predicate(f: &FiniteFunction, sigma: &Perm) -> Result<bool> {
    if f.n() < 2 {
        return Err(FfeError::ArityMismatch {
            expected: 2,
            found: f.n(),
        });
    }
    let d = f.d();
    let si = sigma.inverse();
    let tail_len = (d as usize).pow((f.n() - 2) as u32);
    let mut tail = vec![0u32; f.n() - 2];
    let mut x = vec![0u32; f.n()];
    for t in 0..tail_len {
        unflatten(t, d, &mut tail);
        x[2..].copy_from_slice(&tail);
        for a in 0..d {
            for b in 0..d {
                x[0] = sigma.apply(a);
                x[1] = si.apply(b);
                let lhs = f.eval(&x)?;
                x[0] = sigma.apply(b);
                x[1] = si.apply(a);
                if lhs != f.eval(&x)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::poly::Polynomial;

    fn poly(s: &str, d: u32, n: usize) -> FiniteFunction {
        Polynomial::parse(s, d, n).unwrap().to_function()
    }

    /// Independent oracle: the joint fixed space of monomial matrices with
    /// root-of-unity entries is spanned by one vector per orbit of the
    /// generated permutation group whose phase potentials are consistent.
    fn fixed_space_by_potentials(elements: &[FpElement]) -> usize {
        let d = elements[0].d() as i64;
        let dim = elements[0].phase_fn().len();
        let mut pot: Vec<Option<i64>> = vec![None; dim];
        let mut count = 0;
        for root in 0..dim {
            if pot[root].is_some() {
                continue;
            }
            pot[root] = Some(0);
            let mut stack = vec![root];
            let mut consistent = true;
            while let Some(x) = stack.pop() {
                let px = pot[x].unwrap();
                for el in elements {
                    let y = el.perm().apply(x);
                    let py = (px + el.phase_fn().at(x) as i64 + el.global_phase() as i64).rem_euclid(d);
                    match pot[y] {
                        None => {
                            pot[y] = Some(py);
                            stack.push(y);
                        }
                        Some(v) if v != py => consistent = false,
                        _ => {}
                    }
                }
            }
            if consistent {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn stabilizer_examples() {
        let z = FiniteFunction::zero(3, 2).unwrap();
        let kp = PointPerm::from_site(3, 2, 0, &Perm::shift(3, 1)).unwrap();
        assert!(make_stabilizer(&z, &kp)
            .unwrap()
            .phase_fn()
            .values()
            .iter()
            .all(|&v| v == 0));
        let s = make_stabilizer(&poly("x*y", 3, 2), &kp).unwrap();
        assert_eq!(s.phase_fn(), &poly("y", 3, 2));
    }

    #[test]
    fn stabilizes_all_global_perms_d2() {
        let mut all: Vec<u32> = (0..4).collect();
        let mut perms = Vec::new();
        permute(&mut all, 0, &mut |p| perms.push(p.to_vec()));
        assert_eq!(perms.len(), 24);
        for code in 0..16u32 {
            let f = FiniteFunction::new(2, 2, (0..4).map(|i| code >> i & 1).collect()).unwrap();
            for p in &perms {
                let s = make_stabilizer(&f, &PointPerm::new(2, 2, p.clone()).unwrap()).unwrap();
                assert_eq!(s.apply(&f).unwrap(), (f.clone(), 0));
            }
        }
    }

    #[test]
    fn graph_state_stabilizers_are_local() {
        let set = complete_set(&poly("x*y", 2, 2), &CycleSpec::kappa_plus(2, 2)).unwrap();
        assert_eq!(set.elements[0].phase_fn(), &poly("y", 2, 2));
        assert_eq!(set.elements[1].phase_fn(), &poly("x", 2, 2));
        assert_eq!(unique_fixed_space_dim(&set).unwrap(), 1);
    }

    #[test]
    fn fixed_space_examples() {
        let set = complete_set(&poly("2*x*y", 3, 2), &CycleSpec::kappa_plus(3, 2)).unwrap();
        assert_eq!(unique_fixed_space_dim(&set).unwrap(), 1);
        assert_eq!(fixed_space_dim(&set.elements[..1]).unwrap(), 3);
        let big = FiniteFunction::zero(5, 4).unwrap();
        let set = complete_set(&big, &CycleSpec::kappa_plus(5, 4)).unwrap();
        assert!(matches!(unique_fixed_space_dim(&set), Err(FfeError::Budget { .. })));
    }

    #[test]
    fn fixed_space_agrees_with_potential_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let d = rng.gen_range(2..=4u32);
            let f = FiniteFunction::new(d, 2, (0..d * d).map(|_| rng.gen_range(0..d)).collect()).unwrap();
            let mut els: Vec<FpElement> = (0..2)
                .map(|_| {
                    let mut map: Vec<u32> = (0..d * d).collect();
                    map.shuffle(&mut rng);
                    let pp = PointPerm::new(d, 2, map).unwrap();
                    let h = FiniteFunction::new(d, 2, (0..d * d).map(|_| rng.gen_range(0..d)).collect()).unwrap();
                    FpElement::new(rng.gen_range(0..d) as i64, pp, h).unwrap()
                })
                .collect();
            let set = complete_set(&f, &CycleSpec::kappa_plus(d, 2)).unwrap();
            els.extend(set.elements.iter().take(1).cloned());
            assert_eq!(fixed_space_dim(&els).unwrap(), fixed_space_by_potentials(&els));
            assert_eq!(
                fixed_space_dim(&set.elements).unwrap(),
                fixed_space_by_potentials(&set.elements)
            );
        }
    }

    #[test]
    fn internal_commutativity_examples() {
        let kp = Perm::shift(3, 1);
        assert!(!internally_commutes(&poly("x^2*y", 3, 2), 0, &kp).unwrap());
        assert!(internally_commutes(&poly("x^2*y", 3, 2), 1, &kp).unwrap());
        assert!(internally_commutes(&poly("2*x*y + x + 1", 3, 2), 0, &kp).unwrap());
        assert!(internally_commutes(&poly("1", 3, 2), 0, &kp).unwrap());
        assert!(internally_commutes(&poly("0", 3, 2), 0, &Perm::transposition(3, 0, 1)).is_err());
        let s = make_stabilizer(&poly("x^2*y", 3, 2), &PointPerm::from_site(3, 2, 0, &kp).unwrap()).unwrap();
        assert!(!s.parts_commute());
    }

    #[test]
    fn witness_checks() {
        let ids = vec![Perm::identity(3), Perm::identity(3)];
        assert!(internally_commuting_set_exists_for(&poly("x*y", 3, 2), &ids).unwrap());
        assert!(internally_commuting_set_exists_for(&poly("0", 3, 2), &ids).unwrap());
        let f = poly("x^2*y", 3, 2);
        let mut all = vec![0u32, 1, 2];
        let mut perms = Vec::new();
        permute(&mut all, 0, &mut |p| perms.push(Perm::new(p.to_vec()).unwrap()));
        for w in &perms {
            assert!(!internally_commuting_set_exists_for(&f, &[w.clone(), Perm::identity(3)]).unwrap());
        }
        assert_eq!(search_internally_commuting_set(&f).unwrap(), WitnessSearch::NoneExists);
        let spec = CycleSpec::from_witnesses(vec![Perm::new(vec![1, 0, 2]).unwrap(); 2]).unwrap();
        assert_eq!(spec.cycles()[0], Perm::new(vec![2, 0, 1]).unwrap());
        assert_eq!(all_full_cycles(5).len(), 24);
        let big = FiniteFunction::zero(7, 2).unwrap();
        assert_eq!(search_internally_commuting_set(&big).unwrap(), WitnessSearch::Unknown);
    }

    #[test]
    fn cycle_spec_validation() {
        assert!(CycleSpec::parse("1,2,0;2,0,1").is_ok());
        assert!(matches!(
            CycleSpec::parse("1,0,2;1,2,0"),
            Err(FfeError::NotFullCycle(3))
        ));
        assert!(CycleSpec::parse("1,2,x").is_err());
    }

    #[test]
    fn continuous_symmetry_examples() {
        let kp = Perm::shift(3, 1);
        assert!(continuous_symmetry_predicate(&poly("x1*x3 + x2*x3", 3, 3), &kp).unwrap());
        assert!(!continuous_symmetry_predicate(&poly("x*y", 3, 2), &kp).unwrap());
        assert!(continuous_symmetry_predicate(&poly("2", 3, 2), &Perm::transposition(3, 0, 2)).unwrap());
        assert!(continuous_symmetry_predicate(&FiniteFunction::zero(3, 1).unwrap(), &kp).is_err());
    }

    #[test]
    fn commuting_permutations_give_commuting_stabilizers() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let f = FiniteFunction::new(4, 2, (0..16).map(|_| rng.gen_range(0..4)).collect()).unwrap();
            let a = PointPerm::from_site(4, 2, 0, &Perm::shift(4, rng.gen_range(0..4))).unwrap();
            let b = PointPerm::from_site(4, 2, 1, &Perm::shift(4, rng.gen_range(0..4))).unwrap();
            let c = a.compose(&b);
            for (p, q) in [(&a, &b), (&a, &c)] {
                let sp = make_stabilizer(&f, p).unwrap();
                let sq = make_stabilizer(&f, q).unwrap();
                assert_eq!(sp.multiply(&sq).unwrap(), sq.multiply(&sp).unwrap());
            }
        }
    }
}
