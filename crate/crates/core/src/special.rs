//! Named bipartite functions used throughout the examples and tests.

use std::fmt;
use std::str::FromStr;

use crate::error::{FfeError, Result};
use crate::ring::{FiniteFunction, RingSpec};

const S6_MATRIX: [[u32; 6]; 6] = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 2, 2, 4, 4],
    [0, 2, 0, 4, 4, 2],
    [0, 2, 4, 0, 2, 4],
    [0, 4, 4, 2, 0, 2],
    [0, 4, 2, 4, 2, 0],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialState {
    /// `xy`.
    Fourier,
    /// `(d/r)xy`.
    MOverR(u32),
    /// `x^{p^{m-1}} y` for `d = p^m`.
    PPower,
    /// `x y^{p^{m-1}}` for `d = p^m`.
    PPowerT,
    /// `xy² + x²y + 2xy` at d=4.
    F22,
    /// `x²y + xy² + 3xy` at d=4.
    H4,
    /// Phase function of `F_3 ⊗ F_2` at d=6, rows and columns indexed by
    /// `2a + b` with `a ∈ Z_3`, `b ∈ Z_2`.
    F32Fixture,
    /// Phase function of the isolated Hadamard matrix `S_6`.
    S6Fixture,
    /// `k x^{d-1} y`.
    Rank2F(u32),
    /// `k x y^{d-1}`.
    Rank2G(u32),
    /// `k x^{d-1} y^{d-1}`.
    Rank2H(u32),
}

impl SpecialState {
    pub fn name(&self) -> &'static str {
        match self {
            SpecialState::Fourier => "fourier",
            SpecialState::MOverR(_) => "m_over_r",
            SpecialState::PPower => "p_power",
            SpecialState::PPowerT => "p_power_T",
            SpecialState::F22 => "f22",
            SpecialState::H4 => "h4",
            SpecialState::F32Fixture => "f32_fixture",
            SpecialState::S6Fixture => "s6_fixture",
            SpecialState::Rank2F(_) => "rank2_f",
            SpecialState::Rank2G(_) => "rank2_g",
            SpecialState::Rank2H(_) => "rank2_h",
        }
    }

    pub fn param(&self) -> Option<u32> {
        match *self {
            SpecialState::MOverR(v) | SpecialState::Rank2F(v) | SpecialState::Rank2G(v) | SpecialState::Rank2H(v) => {
                Some(v)
            }
            _ => None,
        }
    }

    /// The state's function over `Z_d`.
    pub fn function(&self, d: u32) -> Result<FiniteFunction> {
        let ring = RingSpec::new(d)?;
        let need_d = |want: u32| {
            if d == want {
                Ok(())
            } else {
                Err(FfeError::InvalidArgument(format!(
                    "{} is defined only for d={want}, got d={d}",
                    self.name()
                )))
            }
        };
        let need_k = |k: u32| {
            if (1..d).contains(&k) {
                Ok(())
            } else {
                Err(FfeError::InvalidArgument(format!(
                    "{} needs 1 <= k < d, got k={k}",
                    self.name()
                )))
            }
        };
        let pow = |b: u32, e: u32| (b as i64).pow(e);
        let top = d - 1;
        match *self {
            SpecialState::Fourier => FiniteFunction::from_fn(d, 2, |x| (x[0] * x[1]) as i64),
            SpecialState::MOverR(r) => {
                if r == 0 || !d.is_multiple_of(r) {
                    return Err(FfeError::InvalidArgument(format!(
                        "m_over_r needs r dividing d={d}, got r={r}"
                    )));
                }
                FiniteFunction::from_fn(d, 2, |x| ((d / r) * x[0] * x[1]) as i64)
            }
            SpecialState::PPower | SpecialState::PPowerT => {
                if !ring.is_prime_power() {
                    return Err(FfeError::InvalidArgument(format!(
                        "{} needs a prime-power d, got {d}",
                        self.name()
                    )));
                }
                let pp = ring.factors()[0];
                let e = pp.p.pow(pp.m - 1);
                let transpose = matches!(self, SpecialState::PPowerT);
                FiniteFunction::from_fn(d, 2, |x| {
                    let (a, b) = if transpose { (x[1], x[0]) } else { (x[0], x[1]) };
                    pow(a, e) * b as i64
                })
            }
            SpecialState::F22 => {
                need_d(4)?;
                FiniteFunction::from_fn(d, 2, |x| {
                    let (a, b) = (x[0] as i64, x[1] as i64);
                    a * b * b + a * a * b + 2 * a * b
                })
            }
            SpecialState::H4 => {
                need_d(4)?;
                FiniteFunction::from_fn(d, 2, |x| {
                    let (a, b) = (x[0] as i64, x[1] as i64);
                    a * a * b + a * b * b + 3 * a * b
                })
            }
            SpecialState::F32Fixture => {
                need_d(6)?;
                FiniteFunction::from_fn(6, 2, |x| {
                    let (a1, a2, b1, b2) = (x[0] / 2, x[0] % 2, x[1] / 2, x[1] % 2);
                    (2 * a1 * b1 + 3 * a2 * b2) as i64
                })
            }
            SpecialState::S6Fixture => {
                need_d(6)?;
                FiniteFunction::from_matrix(6, &S6_MATRIX.map(|r| r.to_vec()))
            }
            SpecialState::Rank2F(k) => {
                need_k(k)?;
                FiniteFunction::from_fn(d, 2, |x| k as i64 * pow(x[0], top) % d as i64 * x[1] as i64)
            }
            SpecialState::Rank2G(k) => {
                need_k(k)?;
                FiniteFunction::from_fn(d, 2, |x| k as i64 * x[0] as i64 * pow(x[1], top) % d as i64)
            }
            SpecialState::Rank2H(k) => {
                need_k(k)?;
                FiniteFunction::from_fn(d, 2, |x| {
                    k as i64 * (pow(x[0], top) % d as i64) * (pow(x[1], top) % d as i64)
                })
            }
        }
    }
}

impl FromStr for SpecialState {
    type Err = FfeError;

    /// Parses `name` or `name:param`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => {
                let v = p
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| FfeError::Parse(format!("bad parameter in {s:?}")))?;
                (n.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        let need =
            |p: Option<u32>| p.ok_or_else(|| FfeError::Parse(format!("{name} needs a parameter, e.g. {name}:2")));
        let state = match name {
            "fourier" | "f4" => SpecialState::Fourier,
            "m_over_r" => SpecialState::MOverR(need(param)?),
            "p_power" => SpecialState::PPower,
            "p_power_T" => SpecialState::PPowerT,
            "f22" => SpecialState::F22,
            "h4" => SpecialState::H4,
            "f32_fixture" | "f32" => SpecialState::F32Fixture,
            "s6_fixture" | "s6" => SpecialState::S6Fixture,
            "rank2_f" => SpecialState::Rank2F(need(param)?),
            "rank2_g" => SpecialState::Rank2G(need(param)?),
            "rank2_h" => SpecialState::Rank2H(need(param)?),
            other => return Err(FfeError::Parse(format!("unknown special function {other:?}"))),
        };
        if param.is_some() && state.param().is_none() {
            return Err(FfeError::Parse(format!("{name} takes no parameter")));
        }
        Ok(state)
    }
}

impl fmt::Display for SpecialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(p) => write!(f, "{}:{p}", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Builds the named function; `param` is `r` for `m_over_r` and `k` for the
/// rank-2 families.
pub fn special_function(name: &str, d: u32, param: Option<u32>) -> Result<FiniteFunction> {
    let spec = match param {
        Some(p) => format!("{name}:{p}"),
        None => name.to_string(),
    };
    spec.parse::<SpecialState>()?.function(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{is_polynomial, Polynomial};

    fn poly(s: &str, d: u32) -> FiniteFunction {
        Polynomial::parse(s, d, 2).unwrap().to_function()
    }

    #[test]
    fn named_polynomials() {
        assert_eq!(special_function("fourier", 2, None).unwrap(), poly("x*y", 2));
        assert_eq!(special_function("m_over_r", 6, Some(2)).unwrap(), poly("3*x*y", 6));
        assert_eq!(special_function("p_power", 4, None).unwrap(), poly("x^2*y", 4));
        assert_eq!(special_function("p_power_T", 9, None).unwrap(), poly("x*y^3", 9));
        assert_eq!(
            special_function("f22", 4, None).unwrap(),
            poly("x*y^2 + x^2*y + 2*x*y", 4)
        );
        assert_eq!(
            special_function("h4", 4, None).unwrap(),
            poly("x^2*y + x*y^2 + 3*x*y", 4)
        );
        assert_eq!(special_function("rank2_f", 5, Some(3)).unwrap(), poly("3*x^4*y", 5));
        assert_eq!(special_function("rank2_g", 5, Some(2)).unwrap(), poly("2*x*y^4", 5));
        assert_eq!(special_function("rank2_h", 7, Some(4)).unwrap(), poly("4*x^6*y^6", 7));
    }

    #[test]
    fn fixtures() {
        let s6 = special_function("s6_fixture", 6, None).unwrap();
        assert_eq!(s6.to_matrix().unwrap()[1], vec![0, 0, 2, 2, 4, 4]);
        let f32 = special_function("f32_fixture", 6, None).unwrap();
        assert!(is_polynomial(&s6).is_none());
        assert!(is_polynomial(&f32).is_none());
    }

    #[test]
    fn f32_is_the_tensor_fourier_phase() {
        let f32 = special_function("f32_fixture", 6, None).unwrap();
        let rows = f32.to_matrix().unwrap();
        assert_eq!(rows[1], vec![0, 3, 0, 3, 0, 3]);
        assert_eq!(rows[2], vec![0, 0, 2, 2, 4, 4]);
        assert_eq!(rows[5], vec![0, 3, 4, 1, 2, 5]);
        assert!(crate::spectral::is_butson_hadamard(&f32).unwrap());
        let mut misprint = rows.clone();
        misprint[2] = vec![0, 0, 2, 2, 2, 2];
        let misprint = FiniteFunction::from_matrix(6, &misprint).unwrap();
        assert!(!crate::spectral::is_butson_hadamard(&misprint).unwrap());
    }

    #[test]
    fn invalid_combinations() {
        assert!(special_function("f22", 6, None).is_err());
        assert!(special_function("s6_fixture", 4, None).is_err());
        assert!(special_function("m_over_r", 6, Some(4)).is_err());
        assert!(special_function("p_power", 6, None).is_err());
        assert!(special_function("rank2_h", 5, Some(5)).is_err());
        assert!(special_function("rank2_h", 5, None).is_err());
        assert!(special_function("fourier", 5, Some(1)).is_err());
        assert!(special_function("nope", 5, None).is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["fourier", "m_over_r:3", "rank2_h:2", "s6_fixture", "p_power_T"] {
            assert_eq!(s.parse::<SpecialState>().unwrap().to_string(), s);
        }
    }
}
