//! Sparse multivariate polynomials over exact rationals with a weight grading.
//!
//! Every potential in this crate is a [`Poly`] in a fixed, small alphabet of
//! variables ([`VarId`]): the eight reduced coordinates `y_k` of a class in
//! the z-basis, plus the gluing coordinates that only live while the tail
//! potential is being assembled. Monomials are dense exponent arrays indexed
//! by that alphabet, so ordering, hashing and equality are cheap and
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chow::BasisIndex;

/// Exact rational coefficient.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// The variable alphabet.
///
/// `Y*` are coefficients of a class in the z-basis (subscript = basis label).
/// `Z*` are the δ-coefficients of the double-cover potential (z-basis; the
/// `Z110` slot stands for the `ȟ²` basis element). `W*` are the δ-coefficients
/// of the triple-cover potential in the i-basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    Y200,
    Y020,
    Y210,
    Y101,
    Y201,
    Y011,
    Y021,
    Y211,
    Z010,
    Z110,
    Z210,
    W001,
    W101,
    W201,
    W011,
    W021,
    W211,
}

pub const NUM_VARS: usize = 17;

impl VarId {
    pub const ALL: [VarId; NUM_VARS] = [
        VarId::Y200,
        VarId::Y020,
        VarId::Y210,
        VarId::Y101,
        VarId::Y201,
        VarId::Y011,
        VarId::Y021,
        VarId::Y211,
        VarId::Z010,
        VarId::Z110,
        VarId::Z210,
        VarId::W001,
        VarId::W101,
        VarId::W201,
        VarId::W011,
        VarId::W021,
        VarId::W211,
    ];

    /// The eight reduced variables, i.e. the non-identity, non-divisor
    /// elements of the z-basis.
    pub const REDUCED: [VarId; 8] = [
        VarId::Y200,
        VarId::Y020,
        VarId::Y210,
        VarId::Y101,
        VarId::Y201,
        VarId::Y011,
        VarId::Y021,
        VarId::Y211,
    ];

    pub const Z_GLUING: [VarId; 3] = [VarId::Z010, VarId::Z110, VarId::Z210];

    pub const W_GLUING: [VarId; 6] = [
        VarId::W001,
        VarId::W101,
        VarId::W201,
        VarId::W011,
        VarId::W021,
        VarId::W211,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            VarId::Y200 => "y200",
            VarId::Y020 => "y020",
            VarId::Y210 => "y210",
            VarId::Y101 => "y101",
            VarId::Y201 => "y201",
            VarId::Y011 => "y011",
            VarId::Y021 => "y021",
            VarId::Y211 => "y211",
            VarId::Z010 => "z010",
            VarId::Z110 => "z110",
            VarId::Z210 => "z210",
            VarId::W001 => "w001",
            VarId::W101 => "w101",
            VarId::W201 => "w201",
            VarId::W011 => "w011",
            VarId::W021 => "w021",
            VarId::W211 => "w211",
        }
    }

    pub fn from_name(name: &str) -> Option<VarId> {
        VarId::ALL.into_iter().find(|v| v.name() == name)
    }

    /// Three-digit subscript as written in the variable name.
    pub fn subscript(self) -> [u32; 3] {
        let b = self.name().as_bytes();
        [
            u32::from(b[1] - b'0'),
            u32::from(b[2] - b'0'),
            u32::from(b[3] - b'0'),
        ]
    }

    pub fn is_gluing(self) -> bool {
        !matches!(self.name().as_bytes()[0], b'y')
    }

    /// `cod(Y_k) - 1` for reduced variables; gluing variables weigh nothing.
    pub fn weight(self) -> u32 {
        if self.is_gluing() {
            0
        } else {
            self.subscript().iter().sum::<u32>() - 1
        }
    }

    /// The reduced variable attached to a z-basis element, if any.
    pub fn reduced(k: BasisIndex) -> Option<VarId> {
        VarId::REDUCED
            .into_iter()
            .find(|v| v.subscript() == k.exponents())
    }

    /// The i-basis δ-coefficient `w_l` for the label `l` (only labels
    /// carrying an `i` factor have one).
    pub fn w_for(l: BasisIndex) -> Option<VarId> {
        VarId::W_GLUING
            .into_iter()
            .find(|v| v.subscript() == l.exponents())
    }

    /// The z-basis element glued through a `Z*` slot. `Z110` is the `ȟ²`
    /// slot.
    pub fn z_slot_basis(self) -> Option<BasisIndex> {
        match self {
            VarId::Z010 => BasisIndex::from_label("010"),
            VarId::Z110 => BasisIndex::from_label("020"),
            VarId::Z210 => BasisIndex::from_label("210"),
            _ => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A monomial `∏ v^{e_v}`; absent variables have exponent zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial([u32; NUM_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NUM_VARS])
    }

    pub fn var(v: VarId) -> Self {
        Self::one().with(v, 1)
    }

    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut m = Self::one();
        for &(v, e) in pairs {
            m.0[v.index()] += e;
        }
        m
    }

    pub fn with(mut self, v: VarId, e: u32) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        VarId::ALL
            .into_iter()
            .map(|v| (v, self.0[v.index()]))
            .filter(|&(_, e)| e > 0)
    }

    pub fn weight(&self) -> u32 {
        self.iter().map(|(v, e)| v.weight() * e).sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total degree in the gluing variables.
    pub fn gluing_degree(&self) -> u32 {
        self.iter()
            .filter(|(v, _)| v.is_gluing())
            .map(|(_, e)| e)
            .sum()
    }

    /// `a! = ∏ a_v!`
    pub fn factorial(&self) -> BigInt {
        self.iter()
            .fold(BigInt::one(), |acc, (_, e)| acc * factorial(e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o += e;
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial: monomial → nonzero rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(v: VarId) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// `∂^order p / ∂v^order`.
    pub fn partial(&self, v: VarId, order: u32) -> Poly {
        if order == 0 {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e < order {
                continue;
            }
            let falling: BigInt = (e - order + 1..=e).fold(BigInt::one(), |acc, k| acc * k);
            out.add_term(
                m.clone().with(v, e - order),
                c * Rational::from_integer(falling),
            );
        }
        out
    }

    /// Drop every monomial of weight greater than `cap`.
    pub fn truncate_weight(&self, cap: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// `Some(w)` when every monomial has weight `w` (the zero polynomial is
    /// homogeneous of every weight and reports `None`).
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(Monomial::weight);
        let w = weights.next()?;
        weights.all(|x| x == w).then_some(w)
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// `Σ_{n ≤ max_order} arg^n / n!`.
    pub fn exp_series(arg: &Poly, max_order: u32) -> Poly {
        let mut out = Poly::one();
        let mut power = Poly::one();
        for n in 1..=max_order {
            power = &power * arg;
            out = &out + &power.scale(&Rational::new(BigInt::one(), factorial(n)));
        }
        out
    }

    /// Coefficients as `(monomial, coefficient)` strings, in canonical order.
    pub fn to_string_pairs(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.to_string(), c.to_string()))
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y(v: VarId) -> Poly {
        Poly::var(v)
    }

    fn c(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    fn seed() -> Poly {
        // N^(1)
        let mut p = &y(VarId::Y210) + &(&c(3) * &y(VarId::Y201));
        p = &p - &(&c(3) * &y(VarId::Y021));
        p = &p + &y(VarId::Y200).pow(2).scale(&ratio(1, 2));
        p = &p - &(&c(3) * &(&y(VarId::Y200) * &y(VarId::Y011)));
        &p + &y(VarId::Y011).pow(2).scale(&ratio(9, 2))
    }

    #[test]
    fn weights_follow_codimension() {
        let w: Vec<u32> = VarId::REDUCED.iter().map(|v| v.weight()).collect();
        assert_eq!(w, vec![1, 1, 2, 1, 2, 1, 2, 3]);
        assert!(VarId::ALL
            .iter()
            .filter(|v| v.is_gluing())
            .all(|v| v.weight() == 0));
    }

    #[test]
    fn add_examples() {
        assert!((&y(VarId::Y200) + &(-&y(VarId::Y200))).is_zero());
        let half_sq = y(VarId::Y020).pow(2).scale(&ratio(1, 2));
        assert_eq!(&half_sq + &half_sq, y(VarId::Y020).pow(2));
        let lhs = &(&c(3) * &y(VarId::Y201)) + &(&y(VarId::Y210) - &(&c(3) * &y(VarId::Y021)));
        let expected = seed().filter(|m| m.degree() == 1);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&y(VarId::Y200) * &y(VarId::Y200), y(VarId::Y200).pow(2));
        let f = &y(VarId::Y200) - &(&c(3) * &y(VarId::Y011));
        let sq = &f * &f;
        let quad = seed().filter(|m| m.degree() == 2);
        assert_eq!(sq, quad.scale(&rat(2)));
        assert_eq!(
            sq.coefficient(&Monomial::from_pairs(&[(VarId::Y200, 1), (VarId::Y011, 1)])),
            rat(-6)
        );
    }

    #[test]
    fn partial_examples() {
        assert_eq!(y(VarId::Y200).pow(3).partial(VarId::Y200, 3), c(6));
        assert_eq!(seed().partial(VarId::Y210, 1), Poly::one());
        let p = &y(VarId::Y200).pow(2) * &y(VarId::Y011);
        assert!(p.partial(VarId::Y011, 2).is_zero());
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(seed().coefficient(&Monomial::var(VarId::Y021)), rat(-3));
        assert_eq!(
            seed().coefficient(&Monomial::from_pairs(&[(VarId::Y200, 2)])),
            ratio(1, 2)
        );
        assert!(Poly::zero()
            .coefficient(&Monomial::var(VarId::Y200))
            .is_zero());
    }

    #[test]
    fn truncate_examples() {
        let p = &y(VarId::Y211) + &(&y(VarId::Y200) * &y(VarId::Y020));
        assert_eq!(p.truncate_weight(2), &y(VarId::Y200) * &y(VarId::Y020));
        assert_eq!(p.truncate_weight(u32::MAX), p);

        // Taylor oracle: exp(2x) = Σ 2^n x^n / n!, kept up to x^2.
        let x = VarId::Y020;
        let oracle = Poly::from_terms((0..=2u32).map(|n| {
            (
                Monomial::one().with(x, n),
                Rational::new(BigInt::from(2).pow(n), factorial(n)),
            )
        }));
        let got = Poly::exp_series(&y(x).scale(&rat(2)), 6).truncate_weight(2);
        assert_eq!(got, oracle);
        assert_eq!(
            oracle,
            &(&Poly::one() + &y(x).scale(&rat(2))) + &y(x).pow(2).scale(&rat(2))
        );
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(
            seed().to_string(),
            "1/2*y200^2 - 3*y200*y011 + y210 + 3*y201 + 9/2*y011^2 - 3*y021"
        );
        assert_eq!(Poly::zero().to_string(), "0");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let term = (
            prop::collection::vec((0usize..NUM_VARS, 0u32..3), 0..3),
            -5i64..6,
            1i64..4,
        );
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            Poly::from_terms(ts.into_iter().map(|(exps, n, d)| {
                let mut m = Monomial::one();
                for (i, e) in exps {
                    m = m.mul(&Monomial::one().with(VarId::ALL[i], e));
                }
                (m, ratio(n, d))
            }))
        })
    }

    fn arb_var() -> impl Strategy<Value = VarId> {
        (0usize..NUM_VARS).prop_map(|i| VarId::ALL[i])
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&Poly::one() * &a, a.clone());
            prop_assert!((&a - &a).is_zero());
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn partials_commute(p in arb_poly(), u in arb_var(), v in arb_var()) {
            prop_assert_eq!(p.partial(u, 1).partial(v, 1), p.partial(v, 1).partial(u, 1));
            prop_assert_eq!(p.partial(u, 2), p.partial(u, 1).partial(u, 1));
        }

        #[test]
        fn truncation_is_a_ring_map(a in arb_poly(), b in arb_poly(), cap in 0u32..5) {
            let direct = (&a * &b).truncate_weight(cap);
            let split = (&a.truncate_weight(cap) * &b.truncate_weight(cap)).truncate_weight(cap);
            prop_assert_eq!(direct, split);
        }

        #[test]
        fn products_of_homogeneous_are_homogeneous(a in arb_poly(), b in arb_poly()) {
            if let (Some(wa), Some(wb)) = (a.homogeneous_weight(), b.homogeneous_weight()) {
                let p = &a * &b;
                if !p.is_zero() {
                    prop_assert_eq!(p.homogeneous_weight(), Some(wa + wb));
                }
            }
        }
    }
}
