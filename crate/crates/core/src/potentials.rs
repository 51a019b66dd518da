//! Potentials of the twigs that glue two stable lifts together, and the
//! gluing matrix fed to the recursion.
//!
//! A degenerate lift over a nodal curve carries three middle twigs: a triple
//! cover of a fiber of `S₂ → S₁`, a double cover of the lifted fiber of
//! `S₁ → P²`, and another triple cover. Their potentials `R12` (double cover,
//! δ-insertions in the z-basis) and `R23` (triple cover, δ-insertions in the
//! i-basis) are sums of selected monomials of exponential generating series;
//! the tail potential glues `R23 · R12 · R23` through the diagonal class.
//!
//! Divisor variables only ever appear through `exp(2y010)` (from `R12`) and
//! `exp(3y001)` (from each `R23`). They are carried as a symbolic
//! [`DivisorExponents`] prefactor and never expanded.

use serde::Serialize;

use crate::chow::{dual_index, BasisIndex};
use crate::error::{Error, Result};
use crate::poly::{rat, ratio, Monomial, Poly, Rational, VarId};

/// `exp(h·y100 + hd·y010 + z·y001)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorExponents {
    pub h: i64,
    pub hd: i64,
    pub z: i64,
}

impl DivisorExponents {
    /// `E^(d) = exp(d·y100 + (2d−2)·y010 + (3d−6)·y001)`.
    pub fn of_degree(d: u32) -> Self {
        let d = i64::from(d);
        DivisorExponents {
            h: d,
            hd: 2 * d - 2,
            z: 3 * d - 6,
        }
    }

    pub fn plus(self, o: Self) -> Self {
        DivisorExponents {
            h: self.h + o.h,
            hd: self.hd + o.hd,
            z: self.z + o.z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialKind {
    R12,
    R23,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RPotential {
    pub kind: PotentialKind,
    /// Polynomial part; the divisor dependence lives in `prefactor`.
    pub body: Poly,
    pub prefactor: DivisorExponents,
    pub cap: u32,
}

impl RPotential {
    pub fn gluing_vars(&self) -> &'static [VarId] {
        match self.kind {
            PotentialKind::R12 => &VarId::Z_GLUING,
            PotentialKind::R23 => &VarId::W_GLUING,
        }
    }
}

/// Subscript of a variable as it enters the double-cover constraint. The
/// `ȟ²` coordinate plays the role of the `hȟ` slot (`y110 = y020`).
fn r12_subscript(v: VarId) -> Option<[u32; 3]> {
    match v {
        VarId::Y020 => Some([1, 1, 0]),
        VarId::Y210 | VarId::Z010 | VarId::Z110 | VarId::Z210 => Some(v.subscript()),
        _ => None,
    }
}

fn r23_subscript(v: VarId) -> Option<[u32; 3]> {
    let s = v.subscript();
    (s[2] == 1 && !matches!(v, VarId::Z010 | VarId::Z110 | VarId::Z210)).then_some(s)
}

fn subscript_sum(m: &Monomial, sub: fn(VarId) -> Option<[u32; 3]>) -> Option<[u32; 3]> {
    let mut acc = [0u32; 3];
    for (v, e) in m.iter() {
        let s = sub(v)?;
        for (a, x) in acc.iter_mut().zip(s) {
            *a += x * e;
        }
    }
    Some(acc)
}

/// `∏ exp(c_v·v)` where each factor is expanded only as far as `bound(v)`,
/// keeping only monomials of gluing degree `<= 2` and weight `<= cap`.
fn exp_product(factors: &[(VarId, Rational)], bound: impl Fn(VarId) -> u32, cap: u32) -> Poly {
    factors.iter().fold(Poly::one(), |acc, (v, c)| {
        let series = Poly::exp_series(&Poly::var(*v).scale(c), bound(*v));
        (&acc * &series).filter(|m| m.gluing_degree() <= 2 && m.weight() <= cap)
    })
}

/// Largest useful power of `v` when every constrained subscript coordinate
/// must stay `<= limit`.
fn exponent_bound(
    v: VarId,
    sub: fn(VarId) -> Option<[u32; 3]>,
    coords: &[usize],
    limit: u32,
) -> u32 {
    if v.is_gluing() {
        return 2;
    }
    let s = sub(v).expect("variable belongs to the potential");
    coords
        .iter()
        .filter(|&&c| s[c] > 0)
        .map(|&c| limit / s[c])
        .min()
        .expect("variable has a positive constrained coordinate")
}

/// Double-cover potential: monomials of
/// `½ exp(2y010) exp(2y110) exp(2y210) exp(z010) exp(z110) exp(z210)` that are
/// quadratic in the z's with subscript sum `(2, n+2, 0)`.
pub fn build_r12(cap: u32) -> RPotential {
    let factors = [
        (VarId::Y020, rat(2)),
        (VarId::Y210, rat(2)),
        (VarId::Z010, rat(1)),
        (VarId::Z110, rat(1)),
        (VarId::Z210, rat(1)),
    ];
    let series = exp_product(&factors, |v| exponent_bound(v, r12_subscript, &[0], 2), cap);
    let body = series
        .filter(|m| {
            let n = m.degree() - m.gluing_degree();
            m.gluing_degree() == 2 && subscript_sum(m, r12_subscript) == Some([2, n + 2, 0])
        })
        .scale(&ratio(1, 2))
        .truncate_weight(cap);
    RPotential {
        kind: PotentialKind::R12,
        body,
        prefactor: DivisorExponents { h: 0, hd: 2, z: 0 },
        cap,
    }
}

/// Triple-cover potential: monomials of
/// `⅓ ∏_{k₃=1} exp(3y_k) ∏_{l₃=1} exp(w_l)` quadratic in the w's with
/// subscript sum `(2, 1, n+2)` or `(1, 2, n+2)`.
pub fn build_r23(cap: u32) -> RPotential {
    let mut factors: Vec<(VarId, Rational)> = VarId::REDUCED
        .into_iter()
        .filter(|v| v.subscript()[2] == 1)
        .map(|v| (v, rat(3)))
        .collect();
    factors.extend(VarId::W_GLUING.into_iter().map(|v| (v, rat(1))));
    let series = exp_product(
        &factors,
        |v| exponent_bound(v, r23_subscript, &[0, 1], 2),
        cap,
    );
    let body = series
        .filter(|m| {
            let n = m.degree() - m.gluing_degree();
            m.gluing_degree() == 2
                && matches!(
                    subscript_sum(m, r23_subscript),
                    Some([2, 1, t]) | Some([1, 2, t]) if t == n + 2
                )
        })
        .scale(&ratio(1, 3))
        .truncate_weight(cap);
    RPotential {
        kind: PotentialKind::R23,
        body,
        prefactor: DivisorExponents { h: 0, hd: 0, z: 3 },
        cap,
    }
}

/// Second δ-derivatives of the tail potential, indexed by z-basis labels
/// `(s, t)` and taken with respect to the dual i-basis coordinates
/// `(w_{s*}, w_{t*})`. The divisor prefactor is stripped.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingMatrix {
    entries: Vec<Poly>,
    pub prefactor: DivisorExponents,
    pub cap: u32,
}

impl GluingMatrix {
    pub fn entry(&self, s: BasisIndex, t: BasisIndex) -> &Poly {
        &self.entries[s.position() * 12 + t.position()]
    }

    /// Pairs `(s, t)` with a nonzero entry, in basis order.
    pub fn nonzero(&self) -> impl Iterator<Item = (BasisIndex, BasisIndex, &Poly)> {
        BasisIndex::ALL.into_iter().flat_map(move |s| {
            BasisIndex::ALL
                .into_iter()
                .map(move |t| (s, t, self.entry(s, t)))
                .filter(|(_, _, p)| !p.is_zero())
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            s: String,
            t: String,
            terms: Vec<(String, String)>,
        }
        #[derive(Serialize)]
        struct Dump {
            cap: u32,
            prefactor: DivisorExponents,
            entries: Vec<Entry>,
        }
        let dump = Dump {
            cap: self.cap,
            prefactor: self.prefactor,
            entries: self
                .nonzero()
                .map(|(s, t, p)| Entry {
                    s: s.label(),
                    t: t.label(),
                    terms: p.to_string_pairs(),
                })
                .collect(),
        };
        serde_json::to_value(dump).expect("plain data serializes")
    }
}

/// The tail potential itself, as a polynomial in the y's and w's:
/// `½ Σ_{u,v} ∂R23/∂w_{u*} · ∂²R12/∂z_u∂z_v · ∂R23/∂w_{v*}`.
pub fn tail_potential(r12: &RPotential, r23: &RPotential) -> Poly {
    let mut total = Poly::zero();
    for &zu in &VarId::Z_GLUING {
        let wu = glued_w(zu);
        let left = r23.body.partial(wu, 1);
        for &zv in &VarId::Z_GLUING {
            let middle = r12.body.partial(zu, 1).partial(zv, 1);
            if middle.is_zero() {
                continue;
            }
            let right = r23.body.partial(glued_w(zv), 1);
            total = &total + &(&(&left * &middle) * &right);
        }
    }
    total.scale(&ratio(1, 2))
}

/// The i-basis slot of the triple cover that is glued to a z-basis slot of
/// the double cover.
fn glued_w(z: VarId) -> VarId {
    let k = z.z_slot_basis().expect("z gluing variable");
    VarId::w_for(dual_index(k)).expect("dual of a fiber class carries i")
}

pub fn build_tail_matrix(cap: u32) -> Result<GluingMatrix> {
    if cap < 2 {
        return Err(Error::CapTooSmall(cap));
    }
    let r12 = build_r12(cap);
    let r23 = build_r23(cap);
    let tail = tail_potential(&r12, &r23);
    let mut entries = Vec::with_capacity(144);
    for s in BasisIndex::ALL {
        for t in BasisIndex::ALL {
            let entry = match (VarId::w_for(dual_index(s)), VarId::w_for(dual_index(t))) {
                (Some(ws), Some(wt)) => tail.partial(ws, 1).partial(wt, 1).truncate_weight(cap),
                _ => Poly::zero(),
            };
            entries.push(entry);
        }
    }
    Ok(GluingMatrix {
        entries,
        prefactor: r12.prefactor.plus(r23.prefactor).plus(r23.prefactor),
        cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarId::*;
    use num_traits::Zero;

    fn m(pairs: &[(VarId, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    #[test]
    fn r12_gluing_constant_part() {
        let r = build_r12(0);
        let expected = Poly::from_terms([
            (m(&[(Z010, 1), (Z210, 1)]), ratio(1, 2)),
            (m(&[(Z110, 2)]), ratio(1, 4)),
        ]);
        assert_eq!(r.body.filter(|x| x.weight() == 0), expected);
        assert_eq!(r.body, expected);
    }

    #[test]
    fn r12_selected_coefficients() {
        let r = build_r12(2);
        assert_eq!(
            r.body.coefficient(&m(&[(Y020, 1), (Z010, 1), (Z110, 1)])),
            rat(1)
        );
        assert!(r
            .body
            .coefficient(&m(&[(Y020, 1), (Z110, 1), (Z210, 1)]))
            .is_zero());
        assert!(r.body.terms().all(|(x, _)| x.exponent(Z210) < 2));
        assert_eq!(r.prefactor, DivisorExponents { h: 0, hd: 2, z: 0 });
    }

    #[test]
    fn r23_gluing_constant_part() {
        let r = build_r23(0);
        let expected = Poly::from_terms([
            (m(&[(W201, 1), (W011, 1)]), ratio(1, 3)),
            (m(&[(W001, 1), (W211, 1)]), ratio(1, 3)),
            (m(&[(W101, 1), (W021, 1)]), ratio(1, 3)),
        ]);
        assert_eq!(r.body, expected);
    }

    #[test]
    fn r23_selected_coefficients() {
        let r = build_r23(3);
        assert_eq!(r.body.coefficient(&m(&[(Y011, 1), (W101, 2)])), ratio(1, 2));
        assert!(r
            .body
            .terms()
            .all(|(x, _)| x.exponent(W001) < 2 || x.degree() > 2));
        assert!(r.body.coefficient(&m(&[(W001, 2)])).is_zero());
    }

    #[test]
    fn alphabets_and_quadraticity() {
        for cap in 0..=4 {
            let r12 = build_r12(cap);
            let r23 = build_r23(cap);
            for (x, _) in r12.body.terms() {
                assert_eq!(x.gluing_degree(), 2);
                for v in [Y200, Y101, Y011, Y201, Y021, Y211] {
                    assert_eq!(x.exponent(v), 0);
                }
                assert!(VarId::W_GLUING.iter().all(|&w| x.exponent(w) == 0));
            }
            for (x, _) in r23.body.terms() {
                assert_eq!(x.gluing_degree(), 2);
                for v in [Y200, Y020, Y210] {
                    assert_eq!(x.exponent(v), 0);
                }
                assert!(VarId::Z_GLUING.iter().all(|&z| x.exponent(z) == 0));
            }
        }
    }

    #[test]
    fn matrix_structure() {
        let t = build_tail_matrix(2).unwrap();
        for s in BasisIndex::ALL {
            for u in BasisIndex::ALL {
                assert_eq!(t.entry(s, u), t.entry(u, s));
                if dual_index(s).exponents()[2] == 0 || dual_index(u).exponents()[2] == 0 {
                    assert!(t.entry(s, u).is_zero());
                }
                for (x, _) in t.entry(s, u).terms() {
                    assert_eq!(x.exponent(Y200), 0);
                    assert_eq!(x.gluing_degree(), 0);
                    assert!(x.weight() <= 2);
                }
            }
        }
        assert_eq!(t.prefactor, DivisorExponents { h: 0, hd: 2, z: 6 });
        assert!(t.nonzero().count() > 0);
    }

    #[test]
    fn prefactor_cancels_against_degree_factors() {
        let pre = build_tail_matrix(2).unwrap().prefactor;
        for d in 2..12u32 {
            for d1 in 1..d {
                let lhs = DivisorExponents::of_degree(d1)
                    .plus(DivisorExponents::of_degree(d - d1))
                    .plus(pre);
                assert_eq!(lhs, DivisorExponents::of_degree(d));
            }
        }
    }

    #[test]
    fn cap_below_two_is_rejected() {
        assert!(matches!(build_tail_matrix(1), Err(Error::CapTooSmall(1))));
    }

    #[test]
    fn cap_independent_up_to_weight_two() {
        let a = build_tail_matrix(2).unwrap();
        let b = build_tail_matrix(3).unwrap();
        for s in BasisIndex::ALL {
            for t in BasisIndex::ALL {
                assert_eq!(a.entry(s, t), &b.entry(s, t).truncate_weight(2));
            }
        }
    }

    #[test]
    fn json_dump_lists_nonzero_entries() {
        let t = build_tail_matrix(2).unwrap();
        let v = t.to_json();
        assert_eq!(v["prefactor"]["z"], 6);
        assert_eq!(v["entries"].as_array().unwrap().len(), t.nonzero().count());
    }
}
