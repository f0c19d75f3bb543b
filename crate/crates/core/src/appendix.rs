//! Golden class listings for d = 3 (all states), d = 4 and d = 6 (polynomial
//! states), and their comparison against a computed catalogue.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{Catalogue, Scope};
use crate::error::{FfeError, Result};
use crate::fp::dephase;
use crate::poly::Polynomial;
use crate::ring::FiniteFunction;

/// Singular values are compared at this absolute tolerance.
pub const SINGULAR_VALUE_TOLERANCE: f64 = 1e-4;

const D3_ALL: &str = include_str!("../fixtures/appendix_d3_all.json");
const D4_TEH: &str = include_str!("../fixtures/appendix_d4_teh.json");
const D6_TEH: &str = include_str!("../fixtures/appendix_d6_teh.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMember {
    pub polynomial: String,
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureClass {
    pub id: usize,
    pub singular_values: Vec<f64>,
    pub members: Vec<FixtureMember>,
}

/// Which variable indexes the rows of the listed matrices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixRows {
    #[default]
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixFixture {
    pub d: u32,
    pub scope: Scope,
    #[serde(default)]
    pub matrix_rows: MatrixRows,
    pub classes: Vec<FixtureClass>,
}

impl AppendixFixture {
    pub fn from_json(text: &str) -> Result<Self> {
        let fx: Self = serde_json::from_str(text)?;
        if fx.classes.is_empty() {
            return Err(FfeError::InvalidArgument("fixture lists no classes".into()));
        }
        Ok(fx)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The listing shipped with the crate for `d` ∈ {3, 4, 6}.
    pub fn builtin(d: u32) -> Result<Self> {
        match d {
            3 => Self::from_json(D3_ALL),
            4 => Self::from_json(D4_TEH),
            6 => Self::from_json(D6_TEH),
            _ => Err(FfeError::InvalidArgument(format!(
                "no class listing for d={d} (available: 3, 4, 6)"
            ))),
        }
    }

    /// The listed matrix as a function `f(x, y)`.
    pub fn member_function(&self, member: &FixtureMember) -> Result<FiniteFunction> {
        let m = FiniteFunction::from_matrix(self.d, &member.matrix)?;
        Ok(match self.matrix_rows {
            MatrixRows::X => m,
            MatrixRows::Y => m.transpose()?,
        })
    }

    pub fn member_count(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Failed, but the mismatch is a known defect of the listing.
    Documented,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceReport {
    pub d: u32,
    pub checks: Vec<Check>,
}

impl ConformanceReport {
    /// True when every check passes or fails only in a documented way.
    pub fn is_conformant(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

impl fmt::Display for ConformanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Documented => "KNOWN",
            };
            writeln!(f, "{tag} d={} {}: {}", self.d, c.name, c.detail)?;
        }
        write!(
            f,
            "{}",
            if self.is_conformant() {
                "conformant"
            } else {
                "NOT conformant"
            }
        )
    }
}

/// Known listing defects, as (d, check name).
const DOCUMENTED: &[(u32, &str)] = &[(6, "class-count"), (6, "classes-distinct")];

fn status(d: u32, name: &str, ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else if DOCUMENTED.contains(&(d, name)) {
        CheckStatus::Documented
    } else {
        CheckStatus::Fail
    }
}

/// Compares a listing against a catalogue computed at the same `d`.
pub fn verify_appendix(fixture: &AppendixFixture, catalogue: &Catalogue) -> Result<ConformanceReport> {
    let d = fixture.d;
    if catalogue.d != d {
        return Err(FfeError::DimensionMismatch {
            expected: d,
            found: catalogue.d,
        });
    }
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            status: status(d, name, ok),
            detail,
        });
    };

    let mut bad_members = Vec::new();
    let mut landing: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for class in &fixture.classes {
        for m in &class.members {
            let matrix = fixture.member_function(m)?;
            let image = Polynomial::parse(&m.polynomial, d, 2)?.to_function();
            if dephase(&image).representative != matrix {
                bad_members.push(format!("class {} {}", class.id, m.polynomial));
            }
            match catalogue.find_class(&matrix)? {
                Some(id) => {
                    landing.entry(class.id).or_default().insert(id);
                }
                None => bad_members.push(format!("class {} {} not in catalogue", class.id, m.polynomial)),
            }
        }
    }
    push(
        "listing-integrity",
        bad_members.is_empty(),
        if bad_members.is_empty() {
            format!("{} listed polynomials match their matrices", fixture.member_count())
        } else {
            format!("mismatched: {}", bad_members.join(", "))
        },
    );

    let split: Vec<String> = landing
        .iter()
        .filter(|(_, ids)| ids.len() > 1)
        .map(|(fx, ids)| format!("{fx}->{ids:?}"))
        .collect();
    push(
        "membership",
        split.is_empty(),
        if split.is_empty() {
            "every listed class lies in a single computed class".into()
        } else {
            format!(
                "listed classes spread over several computed classes: {}",
                split.join(", ")
            )
        },
    );

    let mut sv_bad = Vec::new();
    for class in &fixture.classes {
        for &id in landing.get(&class.id).into_iter().flatten() {
            let got = &catalogue.classes[id].singular_values;
            let close = got.len() == class.singular_values.len()
                && got
                    .iter()
                    .zip(&class.singular_values)
                    .all(|(a, b)| (a - b).abs() <= SINGULAR_VALUE_TOLERANCE);
            if !close {
                sv_bad.push(format!(
                    "class {} computed {got:?} listed {:?}",
                    class.id, class.singular_values
                ));
            }
        }
    }
    push(
        "singular-values",
        sv_bad.is_empty(),
        if sv_bad.is_empty() {
            format!(
                "all {} class headers agree within {SINGULAR_VALUE_TOLERANCE:e}",
                fixture.classes.len()
            )
        } else {
            sv_bad.join("; ")
        },
    );

    let computed: Vec<usize> = catalogue
        .classes
        .iter()
        .filter(|c| c.contains_polynomial)
        .map(|c| c.id)
        .collect();
    push(
        "class-count",
        computed.len() == fixture.classes.len(),
        format!("listed {} computed {}", fixture.classes.len(), computed.len()),
    );

    let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (fx, ids) in &landing {
        for &id in ids {
            owners.entry(id).or_default().push(*fx);
        }
    }
    let merged: Vec<String> = owners
        .iter()
        .filter(|(_, fx)| fx.len() > 1)
        .map(|(id, fx)| format!("{fx:?}->{id}"))
        .collect();
    push(
        "classes-distinct",
        merged.is_empty(),
        if merged.is_empty() {
            "distinct listed classes are distinct computed classes".into()
        } else {
            format!("listed classes that are LFP-equivalent: {}", merged.join(", "))
        },
    );

    let poly_total: usize = catalogue.classes.iter().map(|c| c.polynomials.len()).sum();
    push(
        "coverage",
        poly_total == fixture.member_count(),
        format!(
            "listed members {} computed dephased polynomials {poly_total}",
            fixture.member_count()
        ),
    );

    Ok(ConformanceReport { d, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_lfp, Scope};

    #[test]
    fn builtin_listings_load() {
        assert_eq!(AppendixFixture::builtin(3).unwrap().member_count(), 81);
        assert_eq!(AppendixFixture::builtin(4).unwrap().classes.len(), 17);
        assert_eq!(AppendixFixture::builtin(6).unwrap().member_count(), 162);
        assert!(AppendixFixture::builtin(5).is_err());
        assert!(AppendixFixture::from_json(r#"{"d":3,"scope":"all","classes":[]}"#).is_err());
    }

    #[test]
    fn d3_listing_conforms() {
        let cat = classify_lfp(3, Scope::All, 1).unwrap();
        let report = verify_appendix(&AppendixFixture::builtin(3).unwrap(), &cat).unwrap();
        assert!(report.checks.iter().all(|c| c.status == CheckStatus::Pass), "{report}");
    }

    #[test]
    fn corrupted_listing_is_flagged() {
        let cat = classify_lfp(3, Scope::All, 1).unwrap();
        let mut fx = AppendixFixture::builtin(3).unwrap();
        fx.classes[1].singular_values[0] = 0.5;
        fx.classes[2].members[0].polynomial = "x*y".into();
        let report = verify_appendix(&fx, &cat).unwrap();
        assert!(!report.is_conformant());
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failed, vec!["listing-integrity", "singular-values"]);
    }
}
