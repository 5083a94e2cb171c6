//! Machine-readable output documents.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::motivic::{Coefficient, RationalFunction, TPoly, UPoly, ZetaForm};
use crate::series::{MultiIndex, Rational};
use crate::zeta::{CheckResult, CheckStatus};

/// Exponent (as a string key) to coefficient.
pub type CoeffMap<V> = BTreeMap<String, V>;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FactorDoc<V> {
    /// 1-based variable index
    pub variable: usize,
    pub coefficient: CoeffMap<V>,
    pub multiplicity: u32,
}

/// `numerator / prod (1 - U^-1 T_i)^{e_i}` with integer Laurent coefficients.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ZetaDoc {
    pub variables: usize,
    pub numerator: BTreeMap<String, CoeffMap<i64>>,
    pub denominator: Vec<FactorDoc<i64>>,
    pub text: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SpecializationDoc {
    pub u: String,
    pub cartier: bool,
    pub label: String,
    /// Empty for rational coefficients, `q` for Laurent polynomials in `q`.
    pub symbol: String,
    pub variables: usize,
    pub numerator: BTreeMap<String, CoeffMap<String>>,
    pub denominator: Vec<FactorDoc<String>>,
    pub text: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SemigroupDoc {
    pub elements: Vec<Vec<u64>>,
    pub l_table: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckDoc {
    pub name: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl From<&CheckResult> for CheckDoc {
    fn from(c: &CheckResult) -> Self {
        CheckDoc {
            name: c.name.clone(),
            status: c.status.as_str().into(),
            detail: c.detail.clone(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct OutputDocument {
    pub command: String,
    pub input: String,
    pub mode: String,
    pub d: usize,
    pub conductor: Vec<u64>,
    pub delta: u64,
    pub gorenstein: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poincare: Option<ZetaDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialization: Option<SpecializationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckDoc>>,
}

impl OutputDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn has_failure(&self) -> bool {
        self.checks
            .iter()
            .flatten()
            .any(|c| CheckStatus::parse(&c.status) == Some(CheckStatus::Fail))
    }
}

fn upoly_map(p: &UPoly) -> Result<CoeffMap<i64>, String> {
    p.terms()
        .iter()
        .map(|(e, c)| {
            c.to_i64()
                .map(|c| (e.to_string(), c))
                .ok_or_else(|| format!("coefficient {c} does not fit in a 64-bit integer"))
        })
        .collect()
}

fn upoly_from_map(m: &CoeffMap<i64>) -> Result<UPoly, String> {
    let terms = m
        .iter()
        .map(|(e, c)| e.parse::<i64>().map(|e| (e, *c)).map_err(|_| format!("bad exponent key {e:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UPoly::from_terms(terms))
}

fn exponent_from_key(key: &str, d: usize) -> Result<MultiIndex, String> {
    let entries = key
        .split(',')
        .map(|x| x.parse::<u64>().map_err(|_| format!("bad monomial key {key:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != d {
        return Err(format!("monomial key {key:?} has {} entries, expected {d}", entries.len()));
    }
    Ok(MultiIndex::new(entries))
}

impl ZetaDoc {
    pub fn new(z: &ZetaForm) -> Result<Self, String> {
        let numerator = z
            .numerator()
            .terms()
            .iter()
            .map(|(m, c)| Ok((m.key(), upoly_map(c)?)))
            .collect::<Result<_, String>>()?;
        let denominator = z
            .denominator()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| FactorDoc {
                variable: i + 1,
                coefficient: BTreeMap::from([("-1".to_string(), 1)]),
                multiplicity: e,
            })
            .collect();
        Ok(ZetaDoc {
            variables: z.d(),
            numerator,
            denominator,
            text: z.to_string(),
        })
    }

    /// Rebuilds the form; the inverse of [`ZetaDoc::new`].
    pub fn to_zeta_form(&self) -> Result<ZetaForm, String> {
        let d = self.variables;
        let terms = self
            .numerator
            .iter()
            .map(|(k, c)| Ok((exponent_from_key(k, d)?, upoly_from_map(c)?)))
            .collect::<Result<Vec<_>, String>>()?;
        let mut denominator = vec![0; d];
        for f in &self.denominator {
            if f.variable == 0 || f.variable > d || f.coefficient != BTreeMap::from([("-1".to_string(), 1)]) {
                return Err(format!("unexpected denominator factor {f:?}"));
            }
            denominator[f.variable - 1] += f.multiplicity;
        }
        Ok(ZetaForm::new(TPoly::from_terms(d, terms), denominator))
    }
}

/// Coefficients that can be written as a map of exponent to rational string.
pub trait CoefficientMap: Coefficient {
    fn coeff_map(&self) -> CoeffMap<String>;
}

impl CoefficientMap for Rational {
    fn coeff_map(&self) -> CoeffMap<String> {
        BTreeMap::from([("0".to_string(), self.to_string())])
    }
}

impl CoefficientMap for UPoly {
    fn coeff_map(&self) -> CoeffMap<String> {
        self.terms().iter().map(|(e, c)| (e.to_string(), c.to_string())).collect()
    }
}

impl SpecializationDoc {
    pub fn new<C: CoefficientMap>(f: &RationalFunction<C>, u: &str, cartier: bool, label: &str, symbol: &str) -> Self {
        SpecializationDoc {
            u: u.into(),
            cartier,
            label: label.into(),
            symbol: symbol.into(),
            variables: f.d(),
            numerator: f.numerator().terms().iter().map(|(m, c)| (m.key(), c.coeff_map())).collect(),
            denominator: f
                .factors()
                .iter()
                .map(|x| FactorDoc {
                    variable: x.var + 1,
                    coefficient: x.a.coeff_map(),
                    multiplicity: x.mult,
                })
                .collect(),
            text: f.render(symbol),
        }
    }
}
