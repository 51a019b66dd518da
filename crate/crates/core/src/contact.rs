//! Characteristic numbers for curves meeting point, tangency and
//! triple-contact conditions.
//!
//! A reduced plane curve `C` enters only through its degree `c`, its class
//! `č` and its number of cusps `κ`; the counts are meaningful when `C` has
//! no worse singularities than ordinary nodes and cusps, contains no line,
//! and sits in general position. None of this is checked.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Monomial, VarId};
use crate::recursion::{InvariantLabel, InvariantTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub c: u64,
    pub cdual: u64,
    pub kappa: u64,
}

impl CurveInvariants {
    pub fn new(c: u64, cdual: u64, kappa: u64) -> Self {
        CurveInvariants { c, cdual, kappa }
    }

    /// Caveats about using this curve as a contact condition.
    pub fn lint(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.c == 0 {
            out.push("curve degree 0 is not a curve".to_string());
        }
        if self.c == 1 {
            out.push(
                "a line is outside the hypotheses; the count need not be enumerative".to_string(),
            );
        }
        out
    }
}

impl fmt::Display for CurveInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.c, self.cdual, self.kappa)
    }
}

/// Degree, class and cusp count of a curve of degree `c` with `nodes`
/// ordinary nodes and `cusps` ordinary cusps.
pub fn plucker_class(c: u64, nodes: u64, cusps: u64) -> Result<CurveInvariants> {
    if c == 0 {
        return Err(Error::InvalidCurve("degree must be at least 1".into()));
    }
    let class = i128::from(c) * (i128::from(c) - 1) - 2 * i128::from(nodes) - 3 * i128::from(cusps);
    if class < 0 {
        return Err(Error::InvalidCurve(format!(
            "degree {c} with {nodes} nodes and {cusps} cusps would have negative class {class}"
        )));
    }
    Ok(CurveInvariants::new(c, class as u64, cusps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionProfile {
    pub degree: u32,
    pub points: u32,
    pub tangent: Vec<CurveInvariants>,
    pub osculate: Vec<CurveInvariants>,
}

impl ConditionProfile {
    pub fn conditions(&self) -> u32 {
        self.points + self.tangent.len() as u32 + 2 * self.osculate.len() as u32
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let want = 3 * self.degree - 1;
        if self.conditions() != want {
            return Err(Error::DimensionMismatch {
                degree: self.degree,
                got: self.conditions(),
                want,
            });
        }
        Ok(())
    }
}

impl fmt::Display for ConditionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={},s={},t={}",
            self.points,
            self.tangent.len(),
            self.osculate.len()
        )
    }
}

fn class_name(v: VarId) -> &'static str {
    match v {
        VarId::Y200 => "h2",
        VarId::Y020 => "hd2",
        VarId::Y201 => "h2z",
        VarId::Y021 => "hd2z",
        VarId::Y210 => "h2hd",
        _ => unreachable!("not an insertion class"),
    }
}

/// Insertion as a linear combination of basis classes.
type Insertion = Vec<(BigInt, VarId)>;

fn point() -> Insertion {
    vec![(BigInt::one(), VarId::Y200)]
}

fn tangency(k: &CurveInvariants) -> Insertion {
    vec![(k.c.into(), VarId::Y020), (k.cdual.into(), VarId::Y200)]
}

fn triple(k: &CurveInvariants) -> Insertion {
    vec![
        (k.c.into(), VarId::Y021),
        (k.cdual.into(), VarId::Y201),
        (k.kappa.into(), VarId::Y210),
    ]
}

/// Expand a product of insertions into monomials in the basis classes.
fn expand(insertions: &[Insertion]) -> Vec<(BigInt, Monomial)> {
    let mut terms = vec![(BigInt::one(), Monomial::one())];
    for ins in insertions {
        let mut next = Vec::new();
        for (c, m) in &terms {
            for (k, v) in ins {
                next.push((c * k, m.clone().with(*v, m.exponent(*v) + 1)));
            }
        }
        terms = next;
    }
    terms
}

fn insertion_name(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, e) in m.iter() {
        match (v, e) {
            (VarId::Y200, e) => parts.push(format!("(h2)^{e}")),
            (v, e) => parts.extend(std::iter::repeat_n(class_name(v).to_string(), e as usize)),
        }
    }
    parts.join(".")
}

fn label_for(extra: &Monomial) -> Option<InvariantLabel> {
    InvariantLabel::ALL
        .into_iter()
        .find(|l| &l.monomial() == extra)
}

/// `(A, B, K)` with `N_d(C) = A·c + B·č + K·κ`.
pub fn contact_coefficients(d: u32, table: &InvariantTable) -> Result<(BigInt, BigInt, BigInt)> {
    Ok((
        table.get(d, InvariantLabel::Hd2Z)?.clone(),
        table.get(d, InvariantLabel::H2Z)?.clone(),
        table.get(d, InvariantLabel::H2Hd)?.clone(),
    ))
}

/// Curves of degree `d` through `3d−3` points with a triple contact with `curve`.
pub fn contact_number(d: u32, curve: &CurveInvariants, table: &InvariantTable) -> Result<BigInt> {
    let (a, b, k) = contact_coefficients(d, table)?;
    Ok(a * curve.c + b * curve.cdual + k * curve.kappa)
}

/// Linear form in `c`, `č`, `κ`, e.g. `21c+30č+10κ`.
pub fn format_formula(a: &BigInt, b: &BigInt, k: &BigInt) -> String {
    let mut out = String::new();
    for (coef, sym) in [(a, "c"), (b, "č"), (k, "κ")] {
        if coef.is_zero() {
            continue;
        }
        let neg = coef < &BigInt::zero();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let abs = if neg { -coef } else { coef.clone() };
        if !abs.is_one() {
            out.push_str(&abs.to_string());
        }
        out.push_str(sym);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn contact_formula(d: u32, table: &InvariantTable) -> Result<String> {
    let (a, b, k) = contact_coefficients(d, table)?;
    Ok(format_formula(&a, &b, &k))
}

/// Count for a mixture of point, tangency and triple-contact conditions.
///
/// Only profiles with at least `3d−3` points are computable from the
/// stored invariants; others fail with [`Error::UnsupportedProfile`] naming
/// the invariants that would be needed.
pub fn mixed_count(profile: &ConditionProfile, table: &InvariantTable) -> Result<BigInt> {
    profile.validate()?;
    let d = profile.degree;
    let base = 3 * d - 3;
    let mut insertions: Vec<Insertion> = (0..profile.points).map(|_| point()).collect();
    insertions.extend(profile.tangent.iter().map(tangency));
    insertions.extend(profile.osculate.iter().map(triple));
    let terms = expand(&insertions);

    if profile.points < base {
        let mut missing: Vec<String> = terms
            .iter()
            .map(|(_, m)| m)
            .filter(|m| m.exponent(VarId::Y200) < base)
            .map(|m| format!("<{}>_{d}", insertion_name(m)))
            .collect();
        missing.sort();
        missing.dedup();
        return Err(Error::UnsupportedProfile {
            points: profile.points,
            min_points: base,
            missing,
        });
    }

    let row = table.row(d)?;
    let mut total = BigInt::zero();
    for (c, m) in terms {
        if c.is_zero() {
            continue;
        }
        let extra = m.clone().with(VarId::Y200, m.exponent(VarId::Y200) - base);
        let l = label_for(&extra).expect("weight-two insertion is one of the thirteen");
        total += c * &row[l.index()];
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactResult {
    pub degree: u32,
    pub profile: String,
    pub count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// [`mixed_count`] packaged with the profile, the symbolic formula when a
/// single curve is involved, and curve lints.
pub fn evaluate(profile: &ConditionProfile, table: &InvariantTable) -> Result<ContactResult> {
    let count = mixed_count(profile, table)?;
    let d = profile.degree;
    let row = table.row(d)?;
    let get = |l: InvariantLabel| &row[l.index()];
    let zero = BigInt::zero();
    let formula = match (profile.tangent.len(), profile.osculate.len()) {
        (0, 1) => Some(contact_formula(d, table)?),
        (1, 0) => Some(format_formula(
            get(InvariantLabel::H2Hd2),
            get(InvariantLabel::H2H2),
            &zero,
        )),
        _ => None,
    };
    let warnings = profile
        .tangent
        .iter()
        .chain(&profile.osculate)
        .flat_map(|c| c.lint())
        .collect();
    Ok(ContactResult {
        degree: d,
        profile: profile.to_string(),
        count: count.to_string(),
        formula,
        warnings,
    })
}

/// Profile for `3d−3` points and one triple contact.
pub fn triple_contact_profile(d: u32, curve: CurveInvariants) -> ConditionProfile {
    ConditionProfile {
        degree: d,
        points: (3 * d).saturating_sub(3),
        tangent: Vec::new(),
        osculate: vec![curve],
    }
}
