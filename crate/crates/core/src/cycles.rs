//! Conic Lagrangian cycles `Σ n_ν [Λ_ν]` on `(C*)^n` and the Euler
//! characteristic they determine, `χ = Σ n_ν · gdeg(Λ_ν)`.
//!
//! Cycles are read from JSON documents of the form
//!
//! ```text
//! {"n": 2, "components": [
//!     {"hypersurface": "1+x+y", "mult": 2},
//!     {"point": [1, [2, -1]], "mult": -1},
//!     {"zero_section": true, "mult": 1},
//!     {"complete_intersection": ["x-2", "y-3"], "mult": 1}
//! ]}
//! ```
//!
//! Point coordinates are numbers or `[re, im]` pairs. A hypersurface is
//! taken as given: for a reducible `f` the count is whatever the conormal
//! system of `V(f)` yields, without splitting into irreducible pieces.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::euler::{self, EulerError, Nondegeneracy};
use crate::gauss::{
    gaussian_degree_ci, gaussian_degree_hypersurface, gaussian_degree_special, GaussConfig,
    GaussError, SpecialLagrangian,
};
use crate::laurent::{parse, LaurentPolynomial, ParseError, TorusPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CycleError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("component {index}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("component {0} has multiplicity zero")]
    ZeroMultiplicity(usize),
    #[error("component {0} repeats an earlier component")]
    Duplicate(usize),
    #[error("component {index}: {source}")]
    Parse { index: usize, source: ParseError },
    #[error("component {component}: {source}")]
    Gauss {
        component: String,
        source: GaussError,
    },
    #[error("component {0}: samples did not agree on a Gaussian degree")]
    NotAgreed(String),
}

/// One irreducible conic Lagrangian `T*_Z G`, described by `Z`.
#[derive(Debug, Clone, PartialEq)]
pub enum CycleComponent {
    /// `Z = G`.
    ZeroSection,
    Point(TorusPoint),
    Hypersurface(LaurentPolynomial),
    CompleteIntersection(Vec<LaurentPolynomial>),
}

impl CycleComponent {
    fn rank(&self) -> u8 {
        match self {
            Self::ZeroSection => 0,
            Self::Point(_) => 1,
            Self::Hypersurface(_) => 2,
            Self::CompleteIntersection(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::ZeroSection => "zero_section",
            Self::Point(_) => "point",
            Self::Hypersurface(_) => "hypersurface",
            Self::CompleteIntersection(_) => "complete_intersection",
        }
    }

    /// Ambient dimension implied by the descriptor (`None` for the zero
    /// section, which fits any).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Self::ZeroSection => None,
            Self::Point(p) => Some(p.dimension()),
            Self::Hypersurface(f) => Some(f.dimension()),
            Self::CompleteIntersection(fs) => fs.first().map(LaurentPolynomial::dimension),
        }
    }

    fn content(&self) -> Value {
        match self {
            Self::ZeroSection => Value::Bool(true),
            Self::Point(p) => {
                Value::Array(p.coords().iter().map(|z| json!([z.re, z.im])).collect())
            }
            Self::Hypersurface(f) => Value::String(f.to_string()),
            Self::CompleteIntersection(fs) => {
                Value::Array(fs.iter().map(|f| Value::String(f.to_string())).collect())
            }
        }
    }

    /// Short human-readable descriptor, also the sort key within a kind.
    pub fn label(&self) -> String {
        format!("{}:{}", self.kind(), self.content())
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.content().to_string().cmp(&other.content().to_string()))
    }
}

/// Formal integer combination of conic Lagrangians in `T*(C*)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianCycle {
    n: usize,
    components: Vec<(CycleComponent, i64)>,
}

fn check_component(n: usize, index: usize, c: &CycleComponent) -> Result<(), CycleError> {
    if let CycleComponent::CompleteIntersection(fs) = c {
        if fs.is_empty() || fs.len() > n {
            return Err(CycleError::Schema(format!(
                "component {index}: complete intersection needs 1..={n} equations"
            )));
        }
    }
    let dims: Vec<usize> = match c {
        CycleComponent::CompleteIntersection(fs) => fs.iter().map(|f| f.dimension()).collect(),
        other => other.dimension().into_iter().collect(),
    };
    for found in dims {
        if found != n {
            return Err(CycleError::DimensionMismatch {
                index,
                expected: n,
                found,
            });
        }
    }
    Ok(())
}

impl LagrangianCycle {
    /// Validates the components; multiplicities must be nonzero and the
    /// descriptors pairwise distinct.
    pub fn new(n: usize, components: Vec<(CycleComponent, i64)>) -> Result<Self, CycleError> {
        if n == 0 {
            return Err(CycleError::Schema("n must be positive".into()));
        }
        for (i, (c, m)) in components.iter().enumerate() {
            check_component(n, i, c)?;
            if *m == 0 {
                return Err(CycleError::ZeroMultiplicity(i));
            }
            if components[..i].iter().any(|(d, _)| d == c) {
                return Err(CycleError::Duplicate(i));
            }
        }
        Ok(Self { n, components })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[(CycleComponent, i64)] {
        &self.components
    }

    /// `a · self + b · other`, merging equal components and dropping those
    /// whose multiplicity cancels.
    pub fn combine(&self, a: i64, other: &Self, b: i64) -> Result<Self, CycleError> {
        if self.n != other.n {
            return Err(CycleError::DimensionMismatch {
                index: 0,
                expected: self.n,
                found: other.n,
            });
        }
        let mut out: Vec<(CycleComponent, i64)> = Vec::new();
        let terms = self
            .components
            .iter()
            .map(|(c, m)| (c, a * m))
            .chain(other.components.iter().map(|(c, m)| (c, b * m)));
        for (c, m) in terms {
            match out.iter_mut().find(|(d, _)| d == c) {
                Some(entry) => entry.1 += m,
                None => out.push((c.clone(), m)),
            }
        }
        out.retain(|(_, m)| *m != 0);
        Ok(Self {
            n: self.n,
            components: out,
        })
    }

    /// Bit-exact JSON: components sorted by kind, then by content.
    pub fn to_canonical_json(&self) -> String {
        let mut comps: Vec<&(CycleComponent, i64)> = self.components.iter().collect();
        comps.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let items: Vec<Value> = comps
            .iter()
            .map(|(c, m)| {
                let mut obj = Map::new();
                obj.insert(c.kind().to_string(), c.content());
                obj.insert("mult".to_string(), json!(m));
                Value::Object(obj)
            })
            .collect();
        json!({ "n": self.n, "components": items }).to_string()
    }
}

fn complex_of(v: &Value, index: usize) -> Result<Complex64, CycleError> {
    let bad = || CycleError::Schema(format!("component {index}: bad point coordinate {v}"));
    match v {
        Value::Number(x) => Ok(Complex64::new(x.as_f64().ok_or_else(bad)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(bad()),
    }
}

fn polynomial_of(v: &Value, n: usize, index: usize) -> Result<LaurentPolynomial, CycleError> {
    let text = v.as_str().ok_or_else(|| {
        CycleError::Schema(format!("component {index}: polynomials must be strings"))
    })?;
    parse(text, n).map_err(|source| CycleError::Parse { index, source })
}

fn component_of(
    obj: &Map<String, Value>,
    n: usize,
    index: usize,
) -> Result<CycleComponent, CycleError> {
    const KINDS: [&str; 4] = [
        "zero_section",
        "point",
        "hypersurface",
        "complete_intersection",
    ];
    if let Some(k) = obj
        .keys()
        .find(|k| *k != "mult" && !KINDS.contains(&k.as_str()))
    {
        return Err(CycleError::Schema(format!(
            "component {index}: unknown field `{k}`"
        )));
    }
    let present: Vec<&str> = KINDS
        .iter()
        .copied()
        .filter(|k| obj.contains_key(*k))
        .collect();
    let [kind] = present[..] else {
        return Err(CycleError::Schema(format!(
            "component {index}: exactly one descriptor field is required"
        )));
    };
    let v = &obj[kind];
    match kind {
        "zero_section" => match v {
            Value::Bool(true) => Ok(CycleComponent::ZeroSection),
            _ => Err(CycleError::Schema(format!(
                "component {index}: zero_section must be true"
            ))),
        },
        "point" => {
            let coords = v
                .as_array()
                .ok_or_else(|| {
                    CycleError::Schema(format!("component {index}: point must be an array"))
                })?
                .iter()
                .map(|c| complex_of(c, index))
                .collect::<Result<Vec<_>, _>>()?;
            let found = coords.len();
            if found != n {
                return Err(CycleError::DimensionMismatch {
                    index,
                    expected: n,
                    found,
                });
            }
            TorusPoint::new(coords)
                .map(CycleComponent::Point)
                .map_err(|e| CycleError::Schema(format!("component {index}: {e}")))
        }
        "hypersurface" => Ok(CycleComponent::Hypersurface(polynomial_of(v, n, index)?)),
        _ => {
            let fs = v
                .as_array()
                .ok_or_else(|| {
                    CycleError::Schema(format!(
                        "component {index}: complete_intersection must be an array"
                    ))
                })?
                .iter()
                .map(|f| polynomial_of(f, n, index))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CycleComponent::CompleteIntersection(fs))
        }
    }
}

/// Reads and validates a cycle document.
pub fn parse_cycle(document: &str) -> Result<LagrangianCycle, CycleError> {
    let root: Value =
        serde_json::from_str(document).map_err(|e| CycleError::Json(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| CycleError::Schema("document must be an object".into()))?;
    if let Some(k) = obj.keys().find(|k| *k != "n" && *k != "components") {
        return Err(CycleError::Schema(format!("unknown field `{k}`")));
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| CycleError::Schema("`n` must be a positive integer".into()))?
        as usize;
    let items = obj
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| CycleError::Schema("`components` must be an array".into()))?;
    let mut components = Vec::with_capacity(items.len());
    for (index, item) in items.iter().enumerate() {
        let obj = item
            .as_object()
            .ok_or_else(|| CycleError::Schema(format!("component {index} must be an object")))?;
        let mult = obj.get("mult").and_then(Value::as_i64).ok_or_else(|| {
            CycleError::Schema(format!("component {index}: `mult` must be an integer"))
        })?;
        components.push((component_of(obj, n, index)?, mult));
    }
    LagrangianCycle::new(n, components)
}

/// Characteristic cycle of the constant sheaf (shifted to be perverse) on a
/// smooth `Z`: the conormal variety of `Z` with multiplicity one.
pub fn cc_of_constant_on_smooth(
    n: usize,
    component: CycleComponent,
) -> Result<LagrangianCycle, CycleError> {
    LagrangianCycle::new(n, vec![(component, 1)])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub component: String,
    pub multiplicity: i64,
    pub gdeg: u64,
    pub agreed: bool,
    /// Mixed-volume bound of the conormal system, when one was solved.
    pub bkk: Option<u64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleReport {
    pub chi: i64,
    pub components: Vec<ComponentReport>,
}

fn component_gdeg(
    n: usize,
    c: &CycleComponent,
    cfg: &GaussConfig,
) -> Result<(u64, bool, Option<u64>, Vec<String>), GaussError> {
    match c {
        CycleComponent::ZeroSection => Ok((
            gaussian_degree_special(&SpecialLagrangian::ZeroSection { dimension: n }),
            true,
            None,
            Vec::new(),
        )),
        CycleComponent::Point(p) => Ok((
            gaussian_degree_special(&SpecialLagrangian::Point(p.clone())),
            true,
            None,
            Vec::new(),
        )),
        CycleComponent::Hypersurface(f) => {
            let r = gaussian_degree_hypersurface(f, cfg)?;
            Ok((r.gdeg, r.agreed, Some(r.bkk), r.warnings))
        }
        CycleComponent::CompleteIntersection(fs) => {
            let r = gaussian_degree_ci(fs, cfg)?;
            Ok((r.gdeg, r.agreed, Some(r.bkk), r.warnings))
        }
    }
}

/// `Σ n_ν · gdeg(Λ_ν)`, with a report per component. Fails if any
/// component's samples disagree.
pub fn chi_via_cc(cycle: &LagrangianCycle, cfg: &GaussConfig) -> Result<CycleReport, CycleError> {
    let components: Vec<ComponentReport> = cycle
        .components
        .par_iter()
        .map(|(c, m)| {
            let (gdeg, agreed, bkk, warnings) =
                component_gdeg(cycle.n, c, cfg).map_err(|source| CycleError::Gauss {
                    component: c.label(),
                    source,
                })?;
            Ok(ComponentReport {
                component: c.label(),
                multiplicity: *m,
                gdeg,
                agreed,
                bkk,
                warnings,
            })
        })
        .collect::<Result<_, CycleError>>()?;
    if let Some(bad) = components.iter().find(|r| !r.agreed) {
        return Err(CycleError::NotAgreed(bad.component.clone()));
    }
    let chi = components
        .iter()
        .map(|r| r.multiplicity * r.gdeg as i64)
        .sum();
    Ok(CycleReport { chi, components })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Unequal,
    NotApplicable,
    Unresolved,
}

/// Both sides of `gdeg(T*_Z G) = (-1)^dim Z · χ(Z)` for `Z = V(f)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub verdict: Verdict,
    pub gdeg: Option<u64>,
    pub chi: Option<i64>,
    /// `(-1)^(n-1) · χ(Z)`.
    pub signed_chi: Option<i64>,
    pub agreed: Option<bool>,
    pub bkk: Option<u64>,
    pub nondegeneracy: Option<Nondegeneracy>,
    pub notes: Vec<String>,
}

impl IdentityReport {
    fn not_applicable(note: String, nondegeneracy: Option<Nondegeneracy>) -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            gdeg: None,
            chi: None,
            signed_chi: None,
            agreed: None,
            bkk: None,
            nondegeneracy,
            notes: vec![note],
        }
    }
}

/// Computes the Gaussian degree numerically and the Euler characteristic
/// combinatorially, for nondegenerate `f`. Never fails: problems are
/// reported in the verdict.
pub fn verify_cor_1_5(f: &LaurentPolynomial, cfg: &GaussConfig) -> IdentityReport {
    let check = match euler::nondegeneracy_check(f, &cfg.tracker) {
        Ok(v) => v,
        Err(e) => return IdentityReport::not_applicable(e.to_string(), None),
    };
    match &check {
        Nondegeneracy::Nondegenerate => {}
        Nondegeneracy::Degenerate { .. } => {
            return IdentityReport::not_applicable("degenerate".into(), Some(check))
        }
        Nondegeneracy::Inconclusive { reason } => {
            return IdentityReport::not_applicable(
                format!("nondegeneracy inconclusive: {reason}"),
                Some(check.clone()),
            )
        }
    }
    let chi = match euler::chi_nondegenerate_hypersurface(f) {
        Ok(r) => r.chi,
        Err(e) => return IdentityReport::not_applicable(e.to_string(), Some(check)),
    };
    let n = f.dimension();
    let signed = if n % 2 == 1 { chi } else { -chi };
    let mut notes = Vec::new();
    if f.dimension() == 2 {
        if let Err(EulerError::PickMismatch { pick, volume }) = euler::chi_curve_pick(f) {
            notes.push(format!("lattice count {pick} differs from volume {volume}"));
        }
    }
    match gaussian_degree_hypersurface(f, cfg) {
        Ok(r) => {
            notes.extend(r.warnings.iter().cloned());
            let verdict = if !r.agreed {
                Verdict::Unresolved
            } else if r.gdeg as i64 == signed {
                Verdict::Equal
            } else {
                Verdict::Unequal
            };
            IdentityReport {
                verdict,
                gdeg: Some(r.gdeg),
                chi: Some(chi),
                signed_chi: Some(signed),
                agreed: Some(r.agreed),
                bkk: Some(r.bkk),
                nondegeneracy: Some(check),
                notes,
            }
        }
        Err(e) => {
            notes.push(e.to_string());
            IdentityReport {
                verdict: Verdict::Unresolved,
                gdeg: None,
                chi: Some(chi),
                signed_chi: Some(signed),
                agreed: None,
                bkk: None,
                nondegeneracy: Some(check),
                notes,
            }
        }
    }
}
