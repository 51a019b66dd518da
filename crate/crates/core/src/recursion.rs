//! Degree-by-degree recursion for the thirteen invariants whose insertions
//! include at least `3d−3` point classes `h²`.
//!
//! Only the tail of each potential `N^(d)` is ever stored: the monomials with
//! `y200`-exponent at least `3d−3`. The recursion differentiates the
//! associativity identity `3d−6` more times in `y200` and reads every factor
//! from a tail of lower degree.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::chow::{lambda_pair, BasisIndex};
use crate::error::{Error, Result};
use crate::poly::{factorial, rat, ratio, Monomial, Poly, Rational, VarId};
use crate::potentials::{build_tail_matrix, DivisorExponents, GluingMatrix};

/// Number of boundary configurations contributing the tail term.
pub const BOUNDARY_MULTIPLICITY: i64 = 18;

/// Weight cap used for the gluing matrix by [`compute_up_to`].
pub const DEFAULT_CAP: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantLabel {
    H2Hd,
    H2Z,
    Hd2Z,
    H2H2,
    H2Hd2,
    H2Hz,
    H2Hdz,
    Hd2Hd2,
    Hd2Hz,
    Hd2Hdz,
    HzHz,
    HzHdz,
    HdzHdz,
}

impl InvariantLabel {
    pub const ALL: [InvariantLabel; 13] = [
        InvariantLabel::H2Hd,
        InvariantLabel::H2Z,
        InvariantLabel::Hd2Z,
        InvariantLabel::H2H2,
        InvariantLabel::H2Hd2,
        InvariantLabel::H2Hz,
        InvariantLabel::H2Hdz,
        InvariantLabel::Hd2Hd2,
        InvariantLabel::Hd2Hz,
        InvariantLabel::Hd2Hdz,
        InvariantLabel::HzHz,
        InvariantLabel::HzHdz,
        InvariantLabel::HdzHdz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InvariantLabel::H2Hd => "h2hd",
            InvariantLabel::H2Z => "h2z",
            InvariantLabel::Hd2Z => "hd2z",
            InvariantLabel::H2H2 => "h2.h2",
            InvariantLabel::H2Hd2 => "h2.hd2",
            InvariantLabel::H2Hz => "h2.hz",
            InvariantLabel::H2Hdz => "h2.hdz",
            InvariantLabel::Hd2Hd2 => "hd2.hd2",
            InvariantLabel::Hd2Hz => "hd2.hz",
            InvariantLabel::Hd2Hdz => "hd2.hdz",
            InvariantLabel::HzHz => "hz.hz",
            InvariantLabel::HzHdz => "hz.hdz",
            InvariantLabel::HdzHdz => "hdz.hdz",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The extra insertions beyond the `3d−3` point classes, as reduced
    /// variables with multiplicity.
    pub fn insertions(self) -> &'static [(VarId, u32)] {
        use VarId::*;
        match self {
            InvariantLabel::H2Hd => &[(Y210, 1)],
            InvariantLabel::H2Z => &[(Y201, 1)],
            InvariantLabel::Hd2Z => &[(Y021, 1)],
            InvariantLabel::H2H2 => &[(Y200, 2)],
            InvariantLabel::H2Hd2 => &[(Y200, 1), (Y020, 1)],
            InvariantLabel::H2Hz => &[(Y200, 1), (Y101, 1)],
            InvariantLabel::H2Hdz => &[(Y200, 1), (Y011, 1)],
            InvariantLabel::Hd2Hd2 => &[(Y020, 2)],
            InvariantLabel::Hd2Hz => &[(Y020, 1), (Y101, 1)],
            InvariantLabel::Hd2Hdz => &[(Y020, 1), (Y011, 1)],
            InvariantLabel::HzHz => &[(Y101, 2)],
            InvariantLabel::HzHdz => &[(Y101, 1), (Y011, 1)],
            InvariantLabel::HdzHdz => &[(Y011, 2)],
        }
    }

    /// Monomial `y^b` of the derivative form (point classes stripped).
    pub fn monomial(self) -> Monomial {
        Monomial::from_pairs(self.insertions())
    }

    /// Full monomial `y^a` in `N^(d)`, `a = b + (3d−3)·e200`.
    pub fn tail_monomial(self, d: u32) -> Monomial {
        let b = self.monomial();
        let e = b.exponent(VarId::Y200) + 3 * d - 3;
        b.with(VarId::Y200, e)
    }
}

impl fmt::Display for InvariantLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InvariantLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InvariantLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Cache(format!("unknown invariant label {s:?}")))
    }
}

pub type Invariants = [BigInt; 13];

/// The part of `N^(d)` with `y200`-exponent at least `3d−3`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailPolynomial {
    degree: u32,
    poly: Poly,
}

impl TailPolynomial {
    /// Lowest stored `y200`-exponent.
    pub fn base(degree: u32) -> u32 {
        3 * degree - 3
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn from_invariants(degree: u32, inv: &Invariants) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut poly = Poly::zero();
        for l in InvariantLabel::ALL {
            let m = l.tail_monomial(degree);
            let c = Rational::new(inv[l.index()].clone(), m.factorial());
            poly.add_term(m, c);
        }
        let t = TailPolynomial { degree, poly };
        t.check()?;
        Ok(t)
    }

    /// Lift `∂^{3d−3} N^(d) / ∂y200^{3d−3}` back to the tail of `N^(d)`.
    pub fn from_derivative(degree: u32, q: &Poly) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let base = Self::base(degree);
        let mut poly = Poly::zero();
        for (m, c) in q.terms() {
            let e = m.exponent(VarId::Y200);
            let rising: BigInt = (e + 1..=e + base).fold(BigInt::one(), |acc, k| acc * k);
            poly.add_term(
                m.clone().with(VarId::Y200, e + base),
                c / Rational::from_integer(rising),
            );
        }
        let t = TailPolynomial { degree, poly };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let d = self.degree;
        let malformed = |reason: String| Error::MalformedTail { degree: d, reason };
        for (m, _) in self.poly.terms() {
            if m.gluing_degree() > 0 {
                return Err(malformed(format!("gluing variable in {m}")));
            }
            if m.exponent(VarId::Y200) < Self::base(d) {
                return Err(malformed(format!("{m} lies below the tail")));
            }
            if m.weight() != 3 * d - 1 {
                return Err(malformed(format!(
                    "{m} has weight {} != {}",
                    m.weight(),
                    3 * d - 1
                )));
            }
        }
        if self.poly.len() > 13 {
            return Err(malformed(format!("{} monomials", self.poly.len())));
        }
        Ok(())
    }

    /// `∂^k N^(d) / ∂y200^k`, readable only for `k >= 3d−3`.
    pub fn y200_derivative(&self, k: u32) -> Result<Poly> {
        let base = Self::base(self.degree);
        if k < base {
            return Err(Error::OutsideTail {
                degree: self.degree,
                order: k,
                min: base,
            });
        }
        if k > 3 * self.degree - 1 {
            return Ok(Poly::zero());
        }
        Ok(self.poly.partial(VarId::Y200, k))
    }
}

/// The divisor axiom as a multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisorRule;

impl DivisorRule {
    /// Multiplier for inserting basis element `s` in degree `d`, or `None`
    /// when `s` is not the fundamental class or a divisor.
    pub fn multiplier(s: BasisIndex, d: u32) -> Option<i64> {
        let d = i64::from(d);
        match s.exponents() {
            [0, 0, 0] => Some(0),
            [1, 0, 0] => Some(d),
            [0, 1, 0] => Some(2 * d - 2),
            [0, 0, 1] => Some(3 * d - 6),
            _ => None,
        }
    }

    /// Same as [`DivisorRule::multiplier`] for divisors, but read off the
    /// ring pairing.
    pub fn from_pairing(s: BasisIndex, d: u32) -> Result<Rational> {
        lambda_pair(d, &s.z_element())
    }
}

/// `D_s F`: derivative along `y_s`, or the divisor multiplier.
fn insert(s: BasisIndex, f: &Poly, d: u32) -> Poly {
    match DivisorRule::multiplier(s, d) {
        Some(k) => f.scale(&rat(k)),
        None => f.partial(VarId::reduced(s).expect("non-divisor basis element"), 1),
    }
}

pub fn seed_degree1() -> TailPolynomial {
    use VarId::*;
    let m = |p: &[(VarId, u32)]| Monomial::from_pairs(p);
    let poly = Poly::from_terms([
        (m(&[(Y210, 1)]), rat(1)),
        (m(&[(Y201, 1)]), rat(3)),
        (m(&[(Y021, 1)]), rat(-3)),
        (m(&[(Y200, 2)]), ratio(1, 2)),
        (m(&[(Y200, 1), (Y011, 1)]), rat(-3)),
        (m(&[(Y011, 2)]), ratio(9, 2)),
    ]);
    TailPolynomial { degree: 1, poly }
}

/// Derivative orders already applied to the tails, with the twelve insertions.
struct Inserted {
    by_basis: Vec<Poly>,
}

impl Inserted {
    fn new(tail: &TailPolynomial, order: u32) -> Result<Self> {
        let f = tail.y200_derivative(order)?;
        let by_basis = BasisIndex::ALL
            .into_iter()
            .map(|s| insert(s, &f, tail.degree()))
            .collect();
        Ok(Inserted { by_basis })
    }

    fn get(&self, s: BasisIndex) -> &Poly {
        &self.by_basis[s.position()]
    }
}

fn bilinear(t: &GluingMatrix, f: &Inserted, g: &Inserted) -> Poly {
    let mut acc = Poly::zero();
    for (s, u, entry) in t.nonzero() {
        let fs = f.get(s);
        let gu = g.get(u);
        if fs.is_zero() || gu.is_zero() {
            continue;
        }
        acc = &acc + &(&(fs * entry) * gu);
    }
    acc
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// The tail of `N^(d)` from the tails of all lower degrees.
pub fn rhs_degree(
    d: u32,
    tails: &BTreeMap<u32, TailPolynomial>,
    t: &GluingMatrix,
) -> Result<TailPolynomial> {
    if d < 2 {
        return Err(Error::ZeroDegree);
    }
    if t.cap < 2 {
        return Err(Error::CapTooSmall(t.cap));
    }
    let m = 3 * d - 6;
    let mut q = Poly::zero();
    for d1 in 1..d {
        let d2 = d - d1;
        let expected = DivisorExponents::of_degree(d);
        let got = DivisorExponents::of_degree(d1)
            .plus(DivisorExponents::of_degree(d2))
            .plus(t.prefactor);
        if got != expected {
            return Err(Error::PrefactorMismatch { d1, d2 });
        }
        let t1 = tails.get(&d1).ok_or(Error::MissingTail(d1))?;
        let t2 = tails.get(&d2).ok_or(Error::MissingTail(d2))?;
        let top1 = 3 * d1 - 1;
        let top2 = 3 * d2 - 1;
        for a1 in 0..=m {
            let a2 = m - a1;
            let binom = Rational::from_integer(binomial(m, a1));
            if a1 < top1 && a2 < top2 {
                let f = Inserted::new(t1, a1 + 1)?;
                let g = Inserted::new(t2, a2 + 1)?;
                let k = &binom * rat(i64::from(d1 * d2));
                q = &q + &bilinear(t, &f, &g).scale(&k);
            }
            if a1 <= top1 && a2 + 2 <= top2 {
                let f = Inserted::new(t1, a1)?;
                let g = Inserted::new(t2, a2 + 2)?;
                let k = -(&binom * rat(i64::from(d1 * d1)));
                q = &q + &bilinear(t, &f, &g).scale(&k);
            }
        }
    }
    TailPolynomial::from_derivative(d, &q.scale(&rat(BOUNDARY_MULTIPLICITY)))
}

/// `a!` times each tail coefficient, in label order.
pub fn extract_invariants(tail: &TailPolynomial) -> Result<Invariants> {
    tail.check()?;
    let d = tail.degree();
    let mut out: Invariants = std::array::from_fn(|_| BigInt::zero());
    for l in InvariantLabel::ALL {
        let m = l.tail_monomial(d);
        let v = tail.poly().coefficient(&m) * Rational::from_integer(m.factorial());
        if !v.is_integer() {
            return Err(Error::NonIntegral {
                degree: d,
                label: l.as_str(),
                value: v.to_string(),
            });
        }
        out[l.index()] = v.to_integer();
    }
    Ok(out)
}

/// The five "three times the preceding row" identities, as
/// `(larger, smaller)` label pairs.
pub const RATIO_IDENTITIES: [(InvariantLabel, InvariantLabel); 5] = [
    (InvariantLabel::H2Z, InvariantLabel::H2Hd),
    (InvariantLabel::H2Hz, InvariantLabel::H2Hd2),
    (InvariantLabel::Hd2Hz, InvariantLabel::Hd2Hd2),
    (InvariantLabel::HzHz, InvariantLabel::Hd2Hz),
    (InvariantLabel::HzHdz, InvariantLabel::Hd2Hdz),
];

/// First violated ratio identity, if any.
pub fn ratio_violation(inv: &Invariants) -> Option<(InvariantLabel, InvariantLabel)> {
    RATIO_IDENTITIES
        .into_iter()
        .find(|(big, small)| inv[big.index()] != BigInt::from(3) * &inv[small.index()])
}

/// Invariants by degree, contiguous from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    rows: BTreeMap<u32, Invariants>,
}

impl Default for InvariantTable {
    fn default() -> Self {
        Self::new()
    }
}

impl InvariantTable {
    /// Table holding the degree-1 seed only.
    pub fn new() -> Self {
        let seed = extract_invariants(&seed_degree1()).expect("seed is well formed");
        InvariantTable {
            rows: BTreeMap::from([(1, seed)]),
        }
    }

    pub fn max_degree(&self) -> u32 {
        *self
            .rows
            .keys()
            .next_back()
            .expect("table always holds the seed")
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, d: u32) -> Result<&Invariants> {
        if d == 0 {
            return Err(Error::ZeroDegree);
        }
        self.rows.get(&d).ok_or(Error::MissingDegree(d))
    }

    pub fn get(&self, d: u32, label: InvariantLabel) -> Result<&BigInt> {
        Ok(&self.row(d)?[label.index()])
    }

    /// Keep only degrees `<= dmax`.
    pub fn truncated(&self, dmax: u32) -> InvariantTable {
        InvariantTable {
            rows: self
                .rows
                .range(1..=dmax.max(1))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Compute missing degrees up to `dmax`, resuming from what is stored.
    pub fn extend_to(&mut self, dmax: u32) -> Result<()> {
        if dmax == 0 {
            return Err(Error::ZeroDegree);
        }
        if dmax <= self.max_degree() {
            return Ok(());
        }
        let t = build_tail_matrix(DEFAULT_CAP)?;
        let mut tails = BTreeMap::new();
        for (&d, inv) in &self.rows {
            tails.insert(d, TailPolynomial::from_invariants(d, inv)?);
        }
        for d in self.max_degree() + 1..=dmax {
            let tail = rhs_degree(d, &tails, &t)?;
            let inv = extract_invariants(&tail)?;
            self.rows.insert(d, inv);
            tails.insert(d, tail);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut degrees = Map::new();
        for (d, inv) in &self.rows {
            let mut row = Map::new();
            for l in InvariantLabel::ALL {
                row.insert(
                    l.as_str().to_string(),
                    Value::String(inv[l.index()].to_string()),
                );
            }
            degrees.insert(d.to_string(), Value::Object(row));
        }
        Value::Object(degrees)
    }

    /// Parse and validate a cached table.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: String| Error::Cache(msg);
        let obj = v
            .as_object()
            .ok_or_else(|| bad("top level is not an object".into()))?;
        let mut rows = BTreeMap::new();
        for (key, row) in obj {
            let d: u32 = key
                .parse()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| bad(format!("bad degree key {key:?}")))?;
            let row = row
                .as_object()
                .ok_or_else(|| bad(format!("degree {d}: row is not an object")))?;
            if row.len() != 13 {
                return Err(bad(format!(
                    "degree {d}: expected 13 labels, found {}",
                    row.len()
                )));
            }
            let mut inv: Invariants = std::array::from_fn(|_| BigInt::zero());
            for (label, value) in row {
                let l: InvariantLabel = label.parse()?;
                let s = value.as_str().ok_or_else(|| {
                    bad(format!(
                        "degree {d}, {label}: value must be a decimal string"
                    ))
                })?;
                inv[l.index()] = s
                    .parse()
                    .map_err(|_| bad(format!("degree {d}, {label}: {s:?} is not an integer")))?;
            }
            if let Some((big, small)) = ratio_violation(&inv) {
                return Err(bad(format!("degree {d}: {big} != 3 * {small}")));
            }
            rows.insert(d, inv);
        }
        let expected: Vec<u32> = (1..=rows.len() as u32).collect();
        if rows.keys().copied().collect::<Vec<_>>() != expected {
            return Err(bad("degrees are not contiguous from 1".into()));
        }
        let seed = InvariantTable::new();
        if rows.get(&1) != seed.rows.get(&1) {
            return Err(bad("degree 1 does not match the seed".into()));
        }
        Ok(InvariantTable { rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_json())?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Labels as rows, degrees as columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label");
        for d in self.degrees() {
            out.push_str(&format!(",{d}"));
        }
        out.push('\n');
        for l in InvariantLabel::ALL {
            out.push_str(l.as_str());
            for inv in self.rows.values() {
                out.push_str(&format!(",{}", inv[l.index()]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> = InvariantLabel::ALL
            .iter()
            .map(|l| {
                self.rows
                    .values()
                    .map(|inv| inv[l.index()].to_string())
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = self
            .degrees()
            .enumerate()
            .map(|(j, d)| {
                cells
                    .iter()
                    .map(|row| row[j].len())
                    .chain([d.to_string().len() + 2])
                    .max()
                    .unwrap()
            })
            .collect();
        let mut out = format!("{:<8}", "");
        for (d, w) in self.degrees().zip(&widths) {
            out.push_str(&format!("  {:>w$}", format!("d={d}"), w = w));
        }
        out.push('\n');
        for (l, row) in InvariantLabel::ALL.iter().zip(&cells) {
            out.push_str(&format!("{:<8}", l.as_str()));
            for (v, w) in row.iter().zip(&widths) {
                out.push_str(&format!("  {v:>w$}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Table for degrees `1..=dmax`.
pub fn compute_up_to(dmax: u32) -> Result<InvariantTable> {
    let mut table = InvariantTable::new();
    table.extend_to(dmax)?;
    Ok(table)
}

/// Table for degrees `1..=dmax`, resumed from and written back to `cache`.
pub fn compute_with_cache(dmax: u32, cache: &Path) -> Result<InvariantTable> {
    let mut table = if cache.exists() {
        InvariantTable::load(cache)?
    } else {
        InvariantTable::new()
    };
    let before = table.max_degree();
    table.extend_to(dmax)?;
    if table.max_degree() > before || !cache.exists() {
        table.save(cache)?;
    }
    Ok(table.truncated(dmax))
}
