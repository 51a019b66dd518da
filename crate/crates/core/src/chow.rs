//! The intersection ring of the variety of second-order curvilinear data.
//!
//! `A*(S₂)` is generated by `h`, `ȟ` and `i` subject to
//! `h³ = ȟ³ = h² − hȟ + ȟ² = 0` and `i² = 3(h − ȟ)i`; the second divisor at
//! infinity satisfies `i − z = 3(h − ȟ)` and `iz = 0`. Classes are stored in
//! the z-basis
//!
//! ```text
//! 1, h, h², ȟ, ȟ², h²ȟ, z, hz, h²z, ȟz, ȟ²z, h²ȟz
//! ```
//!
//! as a pair `P₀ + P₁·z` with `P₀, P₁` in the six-dimensional ring of the
//! incidence correspondence. `i` is never stored; it is expanded as
//! `z + 3(h − ȟ)` on input.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, Rational};

/// Label `(a, b, c)` of the basis element `h^a ȟ^b z^c` (z-basis) or
/// `h^a ȟ^b i^c` (i-basis).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    h: u8,
    hd: u8,
    z: u8,
}

const fn bi(h: u8, hd: u8, z: u8) -> BasisIndex {
    BasisIndex { h, hd, z }
}

impl BasisIndex {
    /// The twelve legal labels, in z-basis order.
    pub const ALL: [BasisIndex; 12] = [
        bi(0, 0, 0),
        bi(1, 0, 0),
        bi(2, 0, 0),
        bi(0, 1, 0),
        bi(0, 2, 0),
        bi(2, 1, 0),
        bi(0, 0, 1),
        bi(1, 0, 1),
        bi(2, 0, 1),
        bi(0, 1, 1),
        bi(0, 2, 1),
        bi(2, 1, 1),
    ];

    /// i-basis order: `h²ȟi, ȟ²i, ȟi, h²i, hi, i, h²ȟ, ȟ², ȟ, h², h, 1`.
    pub const I_ORDER: [BasisIndex; 12] = [
        bi(2, 1, 1),
        bi(0, 2, 1),
        bi(0, 1, 1),
        bi(2, 0, 1),
        bi(1, 0, 1),
        bi(0, 0, 1),
        bi(2, 1, 0),
        bi(0, 2, 0),
        bi(0, 1, 0),
        bi(2, 0, 0),
        bi(1, 0, 0),
        bi(0, 0, 0),
    ];

    pub fn new(h: u8, hd: u8, z: u8) -> Option<Self> {
        let k = bi(h, hd, z);
        BasisIndex::ALL.contains(&k).then_some(k)
    }

    pub fn from_label(label: &str) -> Option<Self> {
        let b = label.as_bytes();
        if b.len() != 3 || !b.iter().all(u8::is_ascii_digit) {
            return None;
        }
        BasisIndex::new(b[0] - b'0', b[1] - b'0', b[2] - b'0')
    }

    pub fn label(self) -> String {
        format!("{}{}{}", self.h, self.hd, self.z)
    }

    pub fn exponents(self) -> [u32; 3] {
        [u32::from(self.h), u32::from(self.hd), u32::from(self.z)]
    }

    pub fn codim(self) -> u32 {
        self.exponents().iter().sum()
    }

    /// Position in [`BasisIndex::ALL`].
    pub fn position(self) -> usize {
        BasisIndex::ALL.iter().position(|&k| k == self).unwrap()
    }

    fn s1_position(self) -> usize {
        S1_BASIS
            .iter()
            .position(|&e| e == (self.h, self.hd))
            .unwrap()
    }

    /// `h^a ȟ^b z^c` with this label.
    pub fn z_element(self) -> ChowClass {
        ChowClass::basis(self)
    }

    /// `h^a ȟ^b i^c` with this label.
    pub fn i_element(self) -> ChowClass {
        let base = ChowClass::basis(bi(self.h, self.hd, 0));
        if self.z == 1 {
            base.mul(&ChowClass::i())
        } else {
            base
        }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.h, self.hd, self.z)
    }
}

/// Monomials `h^a ȟ^b` spanning the ring of the incidence correspondence.
const S1_BASIS: [(u8, u8); 6] = [(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (2, 1)];

type S1 = [Rational; 6];

fn s1_zero() -> S1 {
    std::array::from_fn(|_| Rational::zero())
}

/// Normal form of `h^a ȟ^b` using `h³ = ȟ³ = 0` and `hȟ = h² + ȟ²`.
fn s1_monomial(a: u32, b: u32) -> S1 {
    let mut out = s1_zero();
    if a >= 3 || b >= 3 {
        return out;
    }
    if a >= 1 && b >= 1 && (a, b) != (2, 1) {
        let left = s1_monomial(a + 1, b - 1);
        let right = s1_monomial(a - 1, b + 1);
        for (o, (l, r)) in out.iter_mut().zip(left.iter().zip(right.iter())) {
            *o = l + r;
        }
        return out;
    }
    let pos = S1_BASIS
        .iter()
        .position(|&(x, y)| (u32::from(x), u32::from(y)) == (a, b))
        .expect("reduced monomial is a basis element");
    out[pos] = Rational::one();
    out
}

fn s1_mul(p: &S1, q: &S1) -> S1 {
    let mut out = s1_zero();
    for (i, pi) in p.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            if qj.is_zero() {
                continue;
            }
            let (a1, b1) = S1_BASIS[i];
            let (a2, b2) = S1_BASIS[j];
            let m = s1_monomial(u32::from(a1 + a2), u32::from(b1 + b2));
            let c = pi * qj;
            for (o, x) in out.iter_mut().zip(m.iter()) {
                if !x.is_zero() {
                    *o += &c * x;
                }
            }
        }
    }
    out
}

fn s1_add(p: &S1, q: &S1) -> S1 {
    std::array::from_fn(|k| &p[k] + &q[k])
}

fn s1_scale(p: &S1, c: &Rational) -> S1 {
    std::array::from_fn(|k| &p[k] * c)
}

/// `3(ȟ − h)`, the factor in `z² = 3(ȟ − h)z`.
fn z_square_factor() -> S1 {
    let mut f = s1_zero();
    f[1] = rat(-3);
    f[3] = rat(3);
    f
}

/// A class in `A*(S₂)`, as coordinates in the z-basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChowClass {
    coords: [Rational; 12],
}

impl Default for ChowClass {
    fn default() -> Self {
        ChowClass::zero()
    }
}

impl ChowClass {
    pub fn zero() -> Self {
        ChowClass {
            coords: std::array::from_fn(|_| Rational::zero()),
        }
    }

    pub fn one() -> Self {
        ChowClass::basis(bi(0, 0, 0))
    }

    pub fn basis(k: BasisIndex) -> Self {
        let mut c = ChowClass::zero();
        c.coords[k.position()] = Rational::one();
        c
    }

    pub fn from_coords(coords: [Rational; 12]) -> Self {
        ChowClass { coords }
    }

    pub fn h() -> Self {
        ChowClass::basis(bi(1, 0, 0))
    }

    pub fn hd() -> Self {
        ChowClass::basis(bi(0, 1, 0))
    }

    pub fn z() -> Self {
        ChowClass::basis(bi(0, 0, 1))
    }

    /// `i = z + 3(h − ȟ)`.
    pub fn i() -> Self {
        let mut c = ChowClass::z();
        c.coords[bi(1, 0, 0).position()] = rat(3);
        c.coords[bi(0, 1, 0).position()] = rat(-3);
        c
    }

    pub fn coords(&self) -> &[Rational; 12] {
        &self.coords
    }

    pub fn coord(&self, k: BasisIndex) -> &Rational {
        &self.coords[k.position()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn split(&self) -> (S1, S1) {
        let mut p0 = s1_zero();
        let mut p1 = s1_zero();
        for k in BasisIndex::ALL {
            let target = if k.z == 0 { &mut p0 } else { &mut p1 };
            target[k.s1_position()] = self.coord(k).clone();
        }
        (p0, p1)
    }

    fn join(p0: &S1, p1: &S1) -> Self {
        let mut c = ChowClass::zero();
        for k in BasisIndex::ALL {
            let src = if k.z == 0 { p0 } else { p1 };
            c.coords[k.position()] = src[k.s1_position()].clone();
        }
        c
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        ChowClass {
            coords: std::array::from_fn(|k| &self.coords[k] + &other.coords[k]),
        }
    }

    pub fn sub(&self, other: &ChowClass) -> ChowClass {
        ChowClass {
            coords: std::array::from_fn(|k| &self.coords[k] - &other.coords[k]),
        }
    }

    pub fn scale(&self, c: &Rational) -> ChowClass {
        ChowClass {
            coords: std::array::from_fn(|k| &self.coords[k] * c),
        }
    }

    /// Product reduced to z-basis normal form.
    pub fn mul(&self, other: &ChowClass) -> ChowClass {
        let (a0, a1) = self.split();
        let (b0, b1) = other.split();
        let c0 = s1_mul(&a0, &b0);
        let mixed = s1_add(&s1_mul(&a0, &b1), &s1_mul(&a1, &b0));
        let zz = s1_mul(&s1_mul(&a1, &b1), &z_square_factor());
        ChowClass::join(&c0, &s1_add(&mixed, &zz))
    }

    pub fn pow(&self, n: u32) -> ChowClass {
        (0..n).fold(ChowClass::one(), |acc, _| acc.mul(self))
    }

    /// Degree of the top-dimensional part, normalised by `∫ h²ȟz = 1`.
    pub fn integrate(&self) -> Rational {
        self.coord(bi(2, 1, 1)).clone()
    }

    /// Codimensions carrying a nonzero coordinate.
    pub fn codims(&self) -> Vec<u32> {
        let mut out: Vec<u32> = BasisIndex::ALL
            .into_iter()
            .filter(|&k| !self.coord(k).is_zero())
            .map(BasisIndex::codim)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Coordinates in the i-basis (ordered as [`BasisIndex::I_ORDER`]).
    pub fn to_i_basis(&self) -> IClass {
        // P₀ + P₁z = (P₀ + 3(ȟ − h)P₁) + P₁i
        let (p0, p1) = self.split();
        let shifted = s1_add(&p0, &s1_mul(&p1, &z_square_factor()));
        IClass::from_parts(&shifted, &p1)
    }

    pub fn from_i_basis(c: &IClass) -> ChowClass {
        // Q₀ + Q₁i = (Q₀ + 3(h − ȟ)Q₁) + Q₁z
        let (q0, q1) = c.parts();
        let back = s1_add(&q0, &s1_scale(&s1_mul(&q1, &z_square_factor()), &rat(-1)));
        ChowClass::join(&back, &q1)
    }
}

fn write_linear(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (Rational, &'static str)>,
) -> fmt::Result {
    let mut first = true;
    for (c, name) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        if name == "1" {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            f.write_str(name)?;
        } else if abs.is_integer() {
            write!(f, "{abs}{name}")?;
        } else {
            write!(f, "{abs}*{name}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

const Z_NAMES: [&str; 12] = [
    "1", "h", "h^2", "hd", "hd^2", "h^2hd", "z", "hz", "h^2z", "hdz", "hd^2z", "h^2hdz",
];

const I_NAMES: [&str; 12] = [
    "h^2hdi", "hd^2i", "hdi", "h^2i", "hi", "i", "h^2hd", "hd^2", "hd", "h^2", "h", "1",
];

impl fmt::Display for ChowClass {
    /// Juxtaposition syntax accepted back by the expression parser, e.g.
    /// `-3hz + 3hdz`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, self.coords.iter().cloned().zip(Z_NAMES))
    }
}

/// A class written in the i-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IClass {
    coords: [Rational; 12],
}

impl IClass {
    pub fn coords(&self) -> &[Rational; 12] {
        &self.coords
    }

    /// Coefficient of `Y*_l`.
    pub fn coord(&self, l: BasisIndex) -> &Rational {
        let pos = BasisIndex::I_ORDER.iter().position(|&k| k == l).unwrap();
        &self.coords[pos]
    }

    fn from_parts(p0: &S1, p1: &S1) -> Self {
        IClass {
            coords: std::array::from_fn(|n| {
                let k = BasisIndex::I_ORDER[n];
                let src = if k.z == 0 { p0 } else { p1 };
                src[k.s1_position()].clone()
            }),
        }
    }

    fn parts(&self) -> (S1, S1) {
        let mut p0 = s1_zero();
        let mut p1 = s1_zero();
        for (n, k) in BasisIndex::I_ORDER.into_iter().enumerate() {
            let target = if k.z == 0 { &mut p0 } else { &mut p1 };
            target[k.s1_position()] = self.coords[n].clone();
        }
        (p0, p1)
    }
}

impl fmt::Display for IClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, self.coords.iter().cloned().zip(I_NAMES))
    }
}

/// `∫ a·b·c`.
pub fn triple_product(a: &ChowClass, b: &ChowClass, c: &ChowClass) -> Rational {
    a.mul(b).mul(c).integrate()
}

/// Pairing of a divisor class with the class of a degree-`d` strict lift:
/// `h ↦ d`, `ȟ ↦ 2d − 2`, `i ↦ 0` (hence `z ↦ 3d − 6`).
pub fn lambda_pair(d: u32, divisor: &ChowClass) -> Result<Rational> {
    if divisor.codims().iter().any(|&c| c != 1) {
        return Err(Error::NotADivisor(divisor.to_string()));
    }
    let d = i64::from(d);
    Ok(divisor.coord(bi(1, 0, 0)) * rat(d)
        + divisor.coord(bi(0, 1, 0)) * rat(2 * d - 2)
        + divisor.coord(bi(0, 0, 1)) * rat(3 * d - 6))
}

fn dual_table() -> &'static [BasisIndex; 12] {
    static TABLE: OnceLock<[BasisIndex; 12]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|n| {
            let k = BasisIndex::ALL[n];
            let candidates: Vec<BasisIndex> = [[2u8, 1, 1], [1, 2, 1]]
                .iter()
                .filter_map(|t| {
                    let h = t[0].checked_sub(k.h)?;
                    let hd = t[1].checked_sub(k.hd)?;
                    let z = t[2].checked_sub(k.z)?;
                    BasisIndex::new(h, hd, z)
                })
                .collect();
            assert_eq!(candidates.len(), 1, "dual label of {k} is not unique");
            let dual = candidates[0];
            assert!(
                k.z_element().mul(&dual.i_element()).integrate().is_one(),
                "Y_{k} does not pair to 1 with Y*_{dual}"
            );
            dual
        })
    })
}

/// The label `k*` with `k + k* ∈ {211, 121}`; `Y_k` and `Y*_{k*}` pair to 1.
pub fn dual_index(k: BasisIndex) -> BasisIndex {
    dual_table()[k.position()]
}

/// Consistency checks of the rewrite system against the defining relations.
pub fn check_relations() -> std::result::Result<(), String> {
    let (h, hd, i, z) = (
        ChowClass::h(),
        ChowClass::hd(),
        ChowClass::i(),
        ChowClass::z(),
    );
    let checks = [
        ("h^3 = 0", h.pow(3)),
        ("hd^3 = 0", hd.pow(3)),
        (
            "h^2 - h*hd + hd^2 = 0",
            h.pow(2).sub(&h.mul(&hd)).add(&hd.pow(2)),
        ),
        (
            "i^2 = 3(h - hd)i",
            i.mul(&i).sub(&h.sub(&hd).scale(&rat(3)).mul(&i)),
        ),
        ("i*z = 0", i.mul(&z)),
        (
            "i - z = 3(h - hd)",
            i.sub(&z).sub(&h.sub(&hd).scale(&rat(3))),
        ),
    ];
    for (name, residue) in checks {
        if !residue.is_zero() {
            return Err(format!("{name} fails: residue {residue}"));
        }
    }
    Ok(())
}

/// `P[k][l] = ∫ Y_k · Y*_l` over all 144 label pairs.
pub fn pairing_matrix() -> Vec<Vec<Rational>> {
    BasisIndex::ALL
        .iter()
        .map(|k| {
            BasisIndex::ALL
                .iter()
                .map(|l| k.z_element().mul(&l.i_element()).integrate())
                .collect()
        })
        .collect()
}
