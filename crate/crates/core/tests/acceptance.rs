//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use semple_gw::chow::{
    check_relations, dual_index, lambda_pair, pairing_matrix, BasisIndex, ChowClass,
};
use semple_gw::contact::{
    contact_coefficients, contact_number, mixed_count, triple_contact_profile, CurveInvariants,
};
use semple_gw::potentials::{build_r12, build_r23, build_tail_matrix, PotentialKind};
use semple_gw::recursion::{compute_up_to, ratio_violation, InvariantLabel, InvariantTable};
use semple_gw::verify::{expand_twig_series, kontsevich, REFERENCE_CONTACT, REFERENCE_INVARIANTS};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn invariant_table_reproduction(table: &InvariantTable, elapsed: Duration) -> Outcome {
    for d in 1..=6u32 {
        for l in InvariantLabel::ALL {
            let got = table.get(d, l).map_err(|e| e.to_string())?.to_string();
            let want = REFERENCE_INVARIANTS[l.index()][d as usize - 1];
            ensure(got == want, || {
                format!("{l} at d={d}: expected {want}, got {got}")
            })?;
        }
    }
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "78 invariants exact, computed in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn degree1_seed(table: &InvariantTable) -> Outcome {
    let row = table.row(1).map_err(|e| e.to_string())?;
    let got: Vec<String> = row.iter().map(|x| x.to_string()).collect();
    let want = [
        "1", "3", "-3", "1", "0", "0", "-3", "0", "0", "0", "0", "0", "9",
    ];
    ensure(got == want, || format!("expected {want:?}, got {got:?}"))?;
    Ok("13 values exact".into())
}

fn contact_coefficient_reproduction(table: &InvariantTable) -> Outcome {
    for d in 1..=6u32 {
        let (a, b, k) = contact_coefficients(d, table).map_err(|e| e.to_string())?;
        let got = [a.to_string(), b.to_string(), k.to_string()];
        let want = REFERENCE_CONTACT[d as usize - 1];
        ensure(got == want, || {
            format!("d={d}: expected {want:?}, got {got:?}")
        })?;
    }
    Ok("(A, B, K) exact for d=1..6".into())
}

fn kontsevich_oracle(table: &InvariantTable) -> Outcome {
    for d in 1..=8u32 {
        let got = table
            .get(d, InvariantLabel::H2H2)
            .map_err(|e| e.to_string())?;
        let want = kontsevich(d);
        ensure(*got == want, || format!("d={d}: oracle {want}, got {got}"))?;
        if d <= 6 {
            let reference = REFERENCE_INVARIANTS[InvariantLabel::H2H2.index()][d as usize - 1];
            ensure(want.to_string() == reference, || {
                format!("d={d}: oracle {want} vs reference {reference}")
            })?;
        }
    }
    Ok("h2.h2 equals the Kontsevich recursion for d=1..8".into())
}

fn ratio_identities(table: &InvariantTable) -> Outcome {
    for d in table.degrees() {
        let row = table.row(d).map_err(|e| e.to_string())?;
        if let Some((big, small)) = ratio_violation(row) {
            return Err(format!("d={d}: {big} != 3*{small}"));
        }
    }
    ensure(table.max_degree() >= 8, || "table stops before d=8".into())?;
    Ok(format!(
        "five identities exact for d=1..{}",
        table.max_degree()
    ))
}

fn ring_properties(table: &InvariantTable) -> Outcome {
    let p = pairing_matrix();
    for (a, k) in BasisIndex::ALL.iter().enumerate() {
        for (b, l) in BasisIndex::ALL.iter().enumerate() {
            let want = i64::from(*l == dual_index(*k));
            ensure(p[a][b] == BigInt::from(want).into(), || {
                format!("pairing ({k}, {l}) = {}", p[a][b])
            })?;
        }
    }
    check_relations()?;
    let (h, hd, i, z) = (
        ChowClass::h(),
        ChowClass::hd(),
        ChowClass::i(),
        ChowClass::z(),
    );
    let three_h_minus_hd = h.sub(&hd).scale(&BigInt::from(3).into());
    ensure(i.mul(&i) == three_h_minus_hd.mul(&i), || {
        "i^2 != 3(h - hd)i".into()
    })?;
    ensure(i.mul(&z).is_zero(), || "iz != 0".into())?;
    for a in BasisIndex::ALL {
        for b in BasisIndex::ALL {
            for c in BasisIndex::ALL {
                let (x, y, w) = (a.z_element(), b.z_element(), c.z_element());
                ensure(x.mul(&y).mul(&w) == x.mul(&y.mul(&w)), || {
                    format!("associativity fails on ({a}, {b}, {c})")
                })?;
            }
        }
    }
    let lambda = lambda_pair(1, &z).map_err(|e| e.to_string())?;
    let h2h2 = table
        .get(1, InvariantLabel::H2H2)
        .map_err(|e| e.to_string())?
        .clone();
    let v = lambda * num_rational::BigRational::from_integer(h2h2);
    ensure(v == BigInt::from(-3).into(), || {
        format!("<h^2 h^2 z>_1 = {v}")
    })?;
    Ok("pairing is the dual permutation, relations hold, 1728 triples associative, <h^2.h^2.z>_1 = -3".into())
}

fn construction_equivalence() -> Outcome {
    for cap in 0..=3 {
        ensure(
            expand_twig_series(PotentialKind::R12, cap) == build_r12(cap).body,
            || format!("R12 differs at cap {cap}"),
        )?;
        ensure(
            expand_twig_series(PotentialKind::R23, cap) == build_r23(cap).body,
            || format!("R23 differs at cap {cap}"),
        )?;
    }
    let base = build_tail_matrix(2).map_err(|e| e.to_string())?;
    for cap in 3..=4 {
        let wide = build_tail_matrix(cap).map_err(|e| e.to_string())?;
        for s in BasisIndex::ALL {
            for t in BasisIndex::ALL {
                ensure(
                    &wide.entry(s, t).truncate_weight(2) == base.entry(s, t),
                    || format!("gluing entry ({s}, {t}) changes at cap {cap}"),
                )?;
            }
        }
    }
    Ok("series match at caps 0..3; gluing matrix stable at caps 2..4".into())
}

fn contact_sanity(table: &InvariantTable) -> Outcome {
    for c in 2..=10u64 {
        let n = contact_number(1, &CurveInvariants::new(c, c * (c - 1), 0), table)
            .map_err(|e| e.to_string())?;
        ensure(n == BigInt::from(3 * c * (c - 2)), || {
            format!("flexes of a smooth degree-{c} curve: {n}")
        })?;
    }
    let mut checked = 0;
    for d in 1..=6u32 {
        for c in 0..=4u64 {
            for cd in 0..=6u64 {
                for k in 0..=2u64 {
                    let curve = CurveInvariants::new(c, cd, k);
                    let a = mixed_count(&triple_contact_profile(d, curve), table)
                        .map_err(|e| e.to_string())?;
                    let b = contact_number(d, &curve, table).map_err(|e| e.to_string())?;
                    ensure(a == b, || format!("d={d}, curve {curve}: {a} != {b}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "flex counts for c=2..10; mixed count agrees on {checked} curve/degree pairs"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let computed = compute_up_to(8);
    let elapsed = start.elapsed();
    let table = match computed {
        Ok(t) => t,
        Err(e) => {
            println!("FAIL computing the invariant table: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<Criterion> = vec![
        (
            "invariant table reproduction",
            Box::new(|| invariant_table_reproduction(&table, elapsed)),
        ),
        ("degree-1 seed", Box::new(|| degree1_seed(&table))),
        (
            "contact coefficient reproduction",
            Box::new(|| contact_coefficient_reproduction(&table)),
        ),
        ("kontsevich oracle", Box::new(|| kontsevich_oracle(&table))),
        ("ratio identities", Box::new(|| ratio_identities(&table))),
        ("ring properties", Box::new(|| ring_properties(&table))),
        (
            "construction equivalence",
            Box::new(construction_equivalence),
        ),
        ("contact sanity", Box::new(|| contact_sanity(&table))),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(note) => println!("PASS [{}] {name}: {note}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
