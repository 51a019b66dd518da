//! Independent oracles and the self-test driver.
//!
//! The Kontsevich recursion and the brute-force series expander deliberately
//! share no code with `potentials` or `recursion`; the expander only uses
//! [`Poly`] as a container for its output.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chow::{check_relations, dual_index, pairing_matrix, BasisIndex};
use crate::contact::contact_coefficients;
use crate::error::Result;
use crate::poly::{Monomial, Poly, Rational, VarId};
use crate::potentials::{build_r12, build_r23, build_tail_matrix, PotentialKind};
use crate::recursion::{
    compute_up_to, extract_invariants, ratio_violation, seed_degree1, InvariantLabel,
    InvariantTable,
};

/// Reference invariants, rows in label order, columns `d = 1..=6`.
pub const REFERENCE_INVARIANTS: [[&str; 6]; 13] = [
    ["1", "1", "10", "428", "51040", "13300176"],
    ["3", "3", "30", "1284", "153120", "39900528"],
    ["-3", "0", "21", "1452", "216180", "64150200"],
    ["1", "1", "12", "620", "87304", "26312976"],
    ["0", "2", "36", "2184", "335792", "106976160"],
    ["0", "6", "108", "6552", "1007376", "320928480"],
    ["-3", "0", "54", "4872", "894528", "315755712"],
    ["0", "4", "100", "7200", "1222192", "415085088"],
    ["0", "12", "300", "21600", "3666576", "1245255264"],
    ["0", "0", "150", "15912", "3223944", "1214002800"],
    ["0", "36", "900", "64800", "10999728", "3735765792"],
    ["0", "0", "450", "47736", "9671832", "3642008400"],
    ["9", "0", "63", "22860", "6556140", "2948122440"],
];

/// Reference triple-contact coefficients `(A, B, K)` for `d = 1..=6`.
pub const REFERENCE_CONTACT: [[&str; 3]; 6] = [
    ["-3", "3", "1"],
    ["0", "3", "1"],
    ["21", "30", "10"],
    ["1452", "1284", "428"],
    ["216180", "153120", "51040"],
    ["64150200", "39900528", "13300176"],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub check: String,
    pub status: Status,
    /// Inclusive degree range, when the check is degree-indexed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl OracleReport {
    fn pass(check: &str, degrees: Option<(u32, u32)>) -> Self {
        OracleReport {
            check: check.to_string(),
            status: Status::Pass,
            degrees,
            expected: None,
            actual: None,
            detail: None,
        }
    }

    fn fail(
        check: &str,
        degrees: Option<(u32, u32)>,
        expected: String,
        actual: String,
        detail: String,
    ) -> Self {
        OracleReport {
            check: check.to_string(),
            status: Status::Fail,
            degrees,
            expected: Some(expected),
            actual: Some(actual),
            detail: Some(detail),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Rational plane curves of degree `d` through `3d−1` general points.
pub fn kontsevich(d: u32) -> BigInt {
    assert!(d >= 1, "degree must be positive");
    let mut n: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for e in 2..=u64::from(d) {
        let mut total = BigInt::zero();
        for a in 1..e {
            let b = e - a;
            let pair = &n[a as usize] * &n[b as usize];
            let first = binomial(3 * e - 4, 3 * a - 2) * BigInt::from(a * a * b * b);
            let second = binomial(3 * e - 4, 3 * a - 1) * BigInt::from(a * a * a * b);
            total += pair * (first - second);
        }
        n.push(total);
    }
    n.swap_remove(d as usize)
}

/// Brute-force expansion of the twig potentials straight from their
/// generating series, truncated at weight `cap`.
pub fn expand_twig_series(kind: PotentialKind, cap: u32) -> Poly {
    // ys: (variable, subscript label, coefficient in the exponential)
    // allowed: admissible (first, second) subscript sums; MAX means free
    type Series<'a> = (
        Vec<(VarId, &'a str, i64)>,
        Vec<(VarId, &'a str)>,
        Rational,
        Vec<[u32; 2]>,
    );
    let (ys, gluing, scale, allowed): Series = match kind {
        PotentialKind::R12 => (
            vec![(VarId::Y020, "110", 2), (VarId::Y210, "210", 2)],
            vec![
                (VarId::Z010, "010"),
                (VarId::Z110, "110"),
                (VarId::Z210, "210"),
            ],
            Rational::new(1.into(), 2.into()),
            vec![[2, u32::MAX]],
        ),
        PotentialKind::R23 => (
            vec![
                (VarId::Y101, "101", 3),
                (VarId::Y201, "201", 3),
                (VarId::Y011, "011", 3),
                (VarId::Y021, "021", 3),
                (VarId::Y211, "211", 3),
            ],
            vec![
                (VarId::W001, "001"),
                (VarId::W101, "101"),
                (VarId::W201, "201"),
                (VarId::W011, "011"),
                (VarId::W021, "021"),
                (VarId::W211, "211"),
            ],
            Rational::new(1.into(), 3.into()),
            vec![[2, 1], [1, 2]],
        ),
    };
    let digits = |s: &str| -> [u32; 3] {
        let b = s.as_bytes();
        [0, 1, 2].map(|k| u32::from(b[k] - b'0'))
    };
    let fits = |sum: [u32; 3]| {
        allowed
            .iter()
            .any(|a| a[0] == sum[0] && (a[1] == u32::MAX || a[1] == sum[1]))
    };
    // A y-variable of codimension c costs weight c−1 (the ȟ² slot is
    // labelled 110 in the subscript but has codimension 2).
    let weight = |v: VarId| -> u32 {
        let name = &v.name()[1..];
        digits(name).iter().sum::<u32>() - 1
    };
    let mut out = Poly::zero();
    let mut exps = vec![0u32; ys.len()];
    loop {
        let w: u32 = ys
            .iter()
            .zip(&exps)
            .map(|((v, _, _), e)| weight(*v) * e)
            .sum();
        if w <= cap {
            let mut base = [0u32; 3];
            let mut coeff = scale.clone();
            let mut mono = Monomial::one();
            for ((v, label, c), &e) in ys.iter().zip(&exps) {
                let s = digits(label);
                for k in 0..3 {
                    base[k] += s[k] * e;
                }
                let mut fact = BigInt::one();
                for j in 1..=e {
                    fact *= j;
                }
                coeff *= Rational::new(BigInt::from(*c).pow(e), fact);
                mono = mono.with(*v, e);
            }
            for a in 0..gluing.len() {
                for b in a..gluing.len() {
                    let (sa, sb) = (digits(gluing[a].1), digits(gluing[b].1));
                    let sum = [0, 1, 2].map(|k| base[k] + sa[k] + sb[k]);
                    if !fits(sum) {
                        continue;
                    }
                    let mut m = mono.clone();
                    let c = if a == b {
                        m = m.with(gluing[a].0, 2);
                        &coeff / Rational::from_integer(2.into())
                    } else {
                        m = m.with(gluing[a].0, 1).with(gluing[b].0, 1);
                        coeff.clone()
                    };
                    out.add_term(m, c);
                }
            }
        }
        // odometer over exponents 0..=cap
        let mut k = 0;
        loop {
            if k == exps.len() {
                return out;
            }
            exps[k] += 1;
            if exps[k] <= cap {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

fn range(lo: u32, hi: u32) -> Option<(u32, u32)> {
    Some((lo, hi))
}

fn check_pairing() -> OracleReport {
    let p = pairing_matrix();
    for (a, k) in BasisIndex::ALL.iter().enumerate() {
        for (b, l) in BasisIndex::ALL.iter().enumerate() {
            let want = if *l == dual_index(*k) {
                Rational::one()
            } else {
                Rational::zero()
            };
            if p[a][b] != want {
                return OracleReport::fail(
                    "pairing",
                    None,
                    want.to_string(),
                    p[a][b].to_string(),
                    format!("integral of Y_{k} * Y*_{l}"),
                );
            }
        }
    }
    OracleReport::pass("pairing", None)
}

fn check_ring_relations() -> OracleReport {
    match check_relations() {
        Ok(()) => OracleReport::pass("relations", None),
        Err(e) => OracleReport::fail("relations", None, "0".into(), "nonzero".into(), e),
    }
}

fn check_seed() -> OracleReport {
    let got: Vec<String> = match extract_invariants(&seed_degree1()) {
        Ok(inv) => inv.iter().map(|x| x.to_string()).collect(),
        Err(e) => {
            return OracleReport::fail(
                "seed",
                range(1, 1),
                "13 integers".into(),
                "error".into(),
                e.to_string(),
            )
        }
    };
    let want: Vec<String> = REFERENCE_INVARIANTS
        .iter()
        .map(|r| r[0].to_string())
        .collect();
    if got == want {
        OracleReport::pass("seed", range(1, 1))
    } else {
        OracleReport::fail(
            "seed",
            range(1, 1),
            want.join(","),
            got.join(","),
            "degree-1 invariants".into(),
        )
    }
}

fn check_invariants(table: &InvariantTable, hi: u32) -> OracleReport {
    for d in 1..=hi {
        for l in InvariantLabel::ALL {
            let want = REFERENCE_INVARIANTS[l.index()][d as usize - 1];
            let got = table.get(d, l).map(|v| v.to_string()).unwrap_or_default();
            if got != want {
                return OracleReport::fail(
                    "invariants",
                    range(1, hi),
                    want.into(),
                    got,
                    format!("{l} at d={d}"),
                );
            }
        }
    }
    OracleReport::pass("invariants", range(1, hi))
}

fn check_ratios(table: &InvariantTable) -> OracleReport {
    let hi = table.max_degree();
    for d in table.degrees() {
        let row = table.row(d).expect("degree listed");
        if let Some((big, small)) = ratio_violation(row) {
            return OracleReport::fail(
                "ratios",
                range(1, hi),
                format!("3*{}", row[small.index()]),
                row[big.index()].to_string(),
                format!("{big} = 3*{small} at d={d}"),
            );
        }
    }
    OracleReport::pass("ratios", range(1, hi))
}

fn check_kontsevich(table: &InvariantTable) -> OracleReport {
    let hi = table.max_degree();
    for d in table.degrees() {
        let want = kontsevich(d);
        let got = table.get(d, InvariantLabel::H2H2).expect("degree listed");
        if *got != want {
            return OracleReport::fail(
                "kontsevich",
                range(1, hi),
                want.to_string(),
                got.to_string(),
                format!("h2.h2 at d={d}"),
            );
        }
    }
    OracleReport::pass("kontsevich", range(1, hi))
}

fn check_contact(table: &InvariantTable, hi: u32) -> OracleReport {
    for d in 1..=hi {
        let want = REFERENCE_CONTACT[d as usize - 1].join(",");
        let got = match contact_coefficients(d, table) {
            Ok((a, b, k)) => format!("{a},{b},{k}"),
            Err(e) => e.to_string(),
        };
        if got != want {
            return OracleReport::fail(
                "contact",
                range(1, hi),
                want,
                got,
                format!("(A, B, K) at d={d}"),
            );
        }
    }
    OracleReport::pass("contact", range(1, hi))
}

fn check_construction() -> OracleReport {
    for cap in 0..=3 {
        for (kind, built) in [
            (PotentialKind::R12, build_r12(cap).body),
            (PotentialKind::R23, build_r23(cap).body),
        ] {
            let oracle = expand_twig_series(kind, cap);
            if built != oracle {
                return OracleReport::fail(
                    "construction",
                    None,
                    oracle.to_string(),
                    built.to_string(),
                    format!("{kind:?} at cap {cap}"),
                );
            }
        }
    }
    let base = match build_tail_matrix(2) {
        Ok(t) => t,
        Err(e) => {
            return OracleReport::fail(
                "construction",
                None,
                "matrix".into(),
                "error".into(),
                e.to_string(),
            )
        }
    };
    for cap in 3..=4 {
        let wider = build_tail_matrix(cap).expect("cap above 2");
        for s in BasisIndex::ALL {
            for t in BasisIndex::ALL {
                let cut = wider.entry(s, t).truncate_weight(2);
                if &cut != base.entry(s, t) {
                    return OracleReport::fail(
                        "construction",
                        None,
                        base.entry(s, t).to_string(),
                        cut.to_string(),
                        format!("gluing entry ({s}, {t}) at cap {cap}"),
                    );
                }
            }
        }
    }
    OracleReport::pass("construction", None)
}

/// All checks against a precomputed table covering `1..=dmax`.
pub fn run_selftest_on(table: &InvariantTable) -> Vec<OracleReport> {
    let dmax = table.max_degree();
    let reference_max = dmax.min(6);
    vec![
        check_pairing(),
        check_ring_relations(),
        check_seed(),
        check_invariants(table, reference_max),
        check_ratios(table),
        check_kontsevich(table),
        check_contact(table, reference_max),
        check_construction(),
    ]
}

pub fn run_selftest(dmax: u32) -> Result<Vec<OracleReport>> {
    Ok(run_selftest_on(&compute_up_to(dmax)?))
}

/// Like [`run_selftest`], resuming from a cache file. A cache that fails
/// validation yields a single failing `cache` report.
pub fn run_selftest_cached(dmax: u32, cache: &Path) -> Result<Vec<OracleReport>> {
    match crate::recursion::compute_with_cache(dmax, cache) {
        Ok(table) => Ok(run_selftest_on(&table)),
        Err(e @ (crate::Error::Cache(_) | crate::Error::Json(_))) => Ok(vec![OracleReport::fail(
            "cache",
            None,
            "valid cache".into(),
            cache.display().to_string(),
            e.to_string(),
        )]),
        Err(e) => Err(e),
    }
}
