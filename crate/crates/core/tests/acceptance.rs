//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are known not to hold for the
//! implemented definitions (see the project notes). The run fails when any
//! criterion's outcome differs from its expectation, so a regression and an
//! unexpected pass are both reported.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use entangle::census::census;
use entangle::classify::{
    construct_g6d, detection_groups, enumerate_nonab_genus0, intersect_lifted, match_maximal,
    maximal_filter, maximal_groups, permissible_splits, pretwist_search, serre_level6_group,
    table_rows,
};
use entangle::goursat::{decompose, direct_product};
use entangle::group::subgroup_conjugate;
use entangle::invariants::{curve_invariants, genus, gl2_level, is_admissible, sl2_level};
use entangle::lattice::{filter_exact_level, subgroup_classes_composite, DEFAULT_BUDGET};
use entangle::ratfield::{verify_all, ModelSelection};
use entangle::{MatGroup, SmallGroup};

const LEVELS: [u32; 6] = [6, 10, 12, 15, 18, 20];

/// Criteria whose stated target is not met; each has a ledger entry.
const EXPECTED_FAILURES: [u32; 2] = [8, 11];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn check(ok: bool, pass: String, fail: String) -> Outcome {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn c1_curve_invariants() -> Outcome {
    let got: Vec<_> = maximal_groups()
        .iter()
        .map(|(_, g)| curve_invariants(g))
        .collect();
    let tuples: Vec<_> = got.iter().map(|c| c.tuple()).collect();
    let want = [(6, 0, 3, 1), (30, 0, 6, 3), (15, 3, 3, 1), (24, 0, 3, 4)];
    let ok = tuples == want && got.iter().all(|c| c.genus == 0);
    check(ok, format!("{tuples:?}, genus 0"), format!("got {got:?}"))
}

fn c2_table_rows() -> Outcome {
    let want: [(usize, usize, usize, usize); 6] = [
        (4, 4, 0, 0),
        (1, 1, 0, 0),
        (12, 10, 2, 0),
        (1, 1, 0, 0),
        (10, 10, 0, 0),
        (4, 3, 0, 1),
    ];
    let mut got = Vec::new();
    for m in LEVELS {
        let records: Vec<_> = enumerate_nonab_genus0(m, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.record)
            .collect();
        for r in table_rows(m, &records) {
            got.push((r.count_total, r.count_d3, r.count_d6, r.count_dic3));
        }
    }
    check(
        got == want,
        format!("{got:?}"),
        format!("got {got:?}, want {want:?}"),
    )
}

fn c3_maximal() -> Outcome {
    let mut items = Vec::new();
    for m in LEVELS {
        items.extend(enumerate_nonab_genus0(m, DEFAULT_BUDGET).map_err(|e| e.to_string())?);
    }
    maximal_filter(&mut items).map_err(|e| e.to_string())?;
    let maximal: Vec<MatGroup> = items
        .iter()
        .filter(|c| c.record.maximal)
        .map(|c| c.group.clone())
        .collect();
    let matches = match_maximal(&items).map_err(|e| e.to_string())?;
    let refs = maximal_groups();
    let mut problems = Vec::new();
    let mut matched = BTreeSet::new();
    for (m, g) in matches.iter().zip(&maximal) {
        let (Some(lvl), Some(c)) = (m.reference_level, m.conjugator) else {
            problems.push(format!("{} unmatched", m.record.label));
            continue;
        };
        let r = &refs.iter().find(|(l, _)| *l == lvl).unwrap().1;
        let x =
            entangle::ResidueMatrix::new(g.level(), c.map(i64::from)).map_err(|e| e.to_string())?;
        if r.conjugate_by(&x) != *g {
            problems.push(format!("{}: witness does not conjugate", m.record.label));
        }
        if !g.contains_minus_identity() {
            problems.push(format!("{}: lacks -I", m.record.label));
        }
        if m.record
            .factorizations
            .iter()
            .any(|f| f.quotient != SmallGroup::D3)
        {
            problems.push(format!("{}: quotient not D3", m.record.label));
        }
        if m.record.gl2_level != m.record.sl2_level {
            problems.push(format!("{}: levels differ", m.record.label));
        }
        matched.insert(lvl);
    }
    let ok = maximal.len() == 4 && matched.len() == 4 && problems.is_empty();
    check(
        ok,
        format!("4 classes matched at levels {matched:?} with verified conjugators"),
        format!(
            "{} maximal, matched {matched:?}, {problems:?}",
            maximal.len()
        ),
    )
}

fn c4_pretwist() -> Outcome {
    let mut survivors = 0;
    let mut runs = 0;
    for m in LEVELS {
        for (m1, m2) in permissible_splits(m) {
            let r = pretwist_search(m, m1, m2, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            survivors += r.survivors.len();
            runs += 1;
        }
    }
    check(
        survivors == 0,
        format!("{runs} searches, empty final list"),
        format!("{survivors} survivors"),
    )
}

fn c5_level_ratio() -> Outcome {
    let mut swept = 0;
    let mut bad = Vec::new();
    for m in LEVELS {
        let all = subgroup_classes_composite(m, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        for g in filter_exact_level(&all, m) {
            let s = sl2_level(&g);
            let st = sl2_level(&g.adjoin_minus_identity());
            if !(s == st || s == 2 * st) || !gl2_level(&g).is_multiple_of(s) {
                bad.push(g.label());
            }
            swept += 1;
        }
    }
    check(
        bad.is_empty(),
        format!("{swept} classes of exact level"),
        format!("violations: {bad:?}"),
    )
}

/// Every subgroup of `ambient` by closure under adjoining single elements.
fn naive_subgroups(ambient: &MatGroup) -> Vec<MatGroup> {
    let mut seen = BTreeSet::new();
    let trivial = MatGroup::trivial(ambient.level());
    seen.insert(trivial.codes().to_vec());
    let mut frontier = vec![trivial];
    let mut out = Vec::new();
    while let Some(h) = frontier.pop() {
        for x in ambient.iter() {
            if !h.contains(&x) {
                let k = h.extend(&x);
                if seen.insert(k.codes().to_vec()) {
                    frontier.push(k);
                }
            }
        }
        out.push(h);
    }
    out
}

fn c6_goursat_vs_naive() -> Outcome {
    let ambient = MatGroup::gl2(6);
    let fast = subgroup_classes_composite(6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let all = naive_subgroups(&ambient);
    let mut reps: Vec<MatGroup> = Vec::new();
    for h in &all {
        let known = reps
            .iter()
            .any(|r| r.order() == h.order() && subgroup_conjugate(r, h).ok().flatten().is_some());
        if !known {
            reps.push(h.clone());
        }
    }
    let mut problems = Vec::new();
    for r in &reps {
        let hits = fast
            .iter()
            .filter(|f| f.order() == r.order() && subgroup_conjugate(f, r).ok().flatten().is_some())
            .count();
        if hits != 1 {
            problems.push(format!("{} matched {hits} times", r.label()));
        }
    }
    for f in &fast {
        match decompose(f, 2, 3) {
            Ok(d) if d.reconstruct() == *f => {}
            _ => problems.push(format!("{}: round trip failed", f.label())),
        }
    }
    let ok = fast.len() == reps.len() && problems.is_empty();
    check(
        ok,
        format!(
            "{} classes ({} subgroups) agree; decompose then rebuild is the identity",
            reps.len(),
            all.len()
        ),
        format!("fast {} vs naive {}: {problems:?}", fast.len(), reps.len()),
    )
}

fn c7_commutators() -> Outcome {
    let mut cyclic = 0;
    let mut nonabelian = 0;
    let mut bad = Vec::new();
    for m in [6u32, 10, 12] {
        let classes = subgroup_classes_composite(m, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        for g in &classes {
            for (m1, m2) in permissible_splits(m) {
                let d = decompose(g, m1, m2).map_err(|e| e.to_string())?;
                let q = d.quotient.identify();
                let derived = d.reconstruct().derived_subgroup();
                let product = direct_product(&d.g1.derived_subgroup(), &d.g2.derived_subgroup());
                match q {
                    SmallGroup::Trivial | SmallGroup::Cyclic(_) => {
                        cyclic += 1;
                        if derived != product {
                            bad.push(format!("{} cyclic", g.label()));
                        }
                    }
                    _ if !q.is_abelian() => {
                        nonabelian += 1;
                        if !(derived.is_subgroup_of(&product) && derived.order() < product.order())
                        {
                            bad.push(format!("{} non-abelian", g.label()));
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    let ok = bad.is_empty() && cyclic >= 50 && nonabelian >= 50;
    check(
        ok,
        format!("{cyclic} cyclic equalities, {nonabelian} strict inclusions"),
        format!("cyclic {cyclic}, non-abelian {nonabelian}, violations {bad:?}"),
    )
}

fn c8_models() -> Outcome {
    let mut sel = vec![
        ModelSelection::Level10,
        ModelSelection::Level15,
        ModelSelection::Level18,
        ModelSelection::FactorLemmas,
    ];
    sel.extend([-3, 5, 8].map(ModelSelection::Ed));
    let reports = verify_all(&sel);
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.checks
                .iter()
                .filter(|c| !c.passed)
                .map(move |c| match &c.note {
                    Some(n) => format!("{}: {} ({n})", r.model, c.name),
                    None => format!("{}: {}", r.model, c.name),
                })
        })
        .collect();
    check(
        failed.is_empty(),
        format!("{total} identities"),
        format!(
            "{} of {total} identities fail: {}",
            failed.len(),
            failed.join("; ")
        ),
    )
}

fn c9_g6d_family() -> Outcome {
    let mut problems = Vec::new();
    for d in [-3i64, 5, 8, -7] {
        let g = construct_g6d(d).map_err(|e| e.to_string())?;
        let want = num_integer::lcm(6, d.unsigned_abs() as u32);
        if sl2_level(&g) != 6
            || gl2_level(&g) != want
            || genus(&g) != 0
            || g.contains_minus_identity()
        {
            problems.push(format!("D={d}"));
        }
        let base = g
            .reduce(6)
            .map_err(|e| e.to_string())?
            .adjoin_minus_identity();
        if base.derived_subgroup().contains_minus_identity() {
            problems.push(format!("D={d}: -I in commutator"));
        }
    }
    let g5 = construct_g6d(5).map_err(|e| e.to_string())?;
    let q = decompose(&g5, 3, 10)
        .map_err(|e| e.to_string())?
        .quotient
        .identify();
    if q != SmallGroup::D6 {
        problems.push(format!("D=5 split (3,10) quotient {q}"));
    }
    check(
        problems.is_empty(),
        "levels, genus, -I and the D6 quotient at (3,10) confirmed".into(),
        format!("{problems:?}"),
    )
}

fn c10_serre_level6() -> Outcome {
    let g = serre_level6_group();
    let gt = g.adjoin_minus_identity();
    let mut own = Vec::new();
    let mut meet = Vec::new();
    for (_, h) in detection_groups() {
        let ht = h.adjoin_minus_identity();
        own.push(genus(&ht));
        meet.push(genus(
            &intersect_lifted(&gt, &ht).map_err(|e| e.to_string())?,
        ));
    }
    let g15 = &maximal_groups()[2].1;
    let adm = is_admissible(g15);
    let ok = own == [0, 0, 0, 0, 0, 0, 1, 0, 1, 2]
        && meet == [0, 1, 1, 0, 0, 1, 2, 0, 1, 2]
        && !adm.det_surjective
        && !adm.has_complex_conjugation
        && g.order() == 36
        && g.gl2_index() == 8;
    check(
        ok,
        format!(
            "genera {own:?} / {meet:?}; level-15 group fails both conditions; order 36, index 8"
        ),
        format!(
            "genera {own:?} / {meet:?}, admissibility {adm:?}, order {} index {}",
            g.order(),
            g.gl2_index()
        ),
    )
}

fn c11_census() -> Outcome {
    let checkpoints = [250u64, 500, 1000, 2000, 4000];
    let report = census(4000, &checkpoints).map_err(|e| e.to_string())?;
    let at = |t: u64| report.checkpoints.iter().find(|r| r.t == t).unwrap();
    let row = at(1000);
    let expected = 1e6 / (2.0 * std::f64::consts::PI.powi(2) / 6.0);
    let rel = (row.total as f64 - expected).abs() / expected;
    let count_ok = rel <= 0.02;
    let exponent = report.fitted_exponent.unwrap_or(f64::NAN);
    let exponent_ok = (0.55..=0.80).contains(&exponent);
    let ratios: Vec<f64> = report.checkpoints.iter().map(|r| r.serre_ratio).collect();
    let ratio_ok = row.serre_ratio > 0.99 && ratios.windows(2).all(|w| w[0] <= w[1]);
    let detail = format!(
        "count at 1000 = {} vs {expected:.1} (rel. error {rel:.4}, {}); exponent {exponent:.3} ({}); ratios {ratios:.5?} ({})",
        row.total,
        if count_ok { "ok" } else { "outside 2%" },
        if exponent_ok { "ok" } else { "outside [0.55, 0.80]" },
        if ratio_ok { "ok" } else { "not > 0.99 and non-decreasing" },
    );
    check(count_ok && exponent_ok && ratio_ok, detail.clone(), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            1,
            "curve invariants of the four maximal groups",
            c1_curve_invariants,
        ),
        (
            2,
            "per-split entanglement counts at six levels",
            c2_table_rows,
        ),
        (3, "maximal non-abelian genus-0 classes", c3_maximal),
        (4, "pre-twist search", c4_pretwist),
        (5, "SL2-level ratio sweep", c5_level_ratio),
        (
            6,
            "Goursat enumeration vs naive closure in GL2(Z/6)",
            c6_goursat_vs_naive,
        ),
        (7, "commutators of fibered products", c7_commutators),
        (8, "exact model identities", c8_models),
        (9, "D6-family groups", c9_g6d_family),
        (
            10,
            "level-6 detection genera and admissibility",
            c10_serre_level6,
        ),
        (11, "specialization census", c11_census),
    ];
    let mut mismatches = Vec::new();
    for (n, name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{status} {n:>2} {name} [{secs:.1}s]: {detail}");
        if outcome.is_ok() == EXPECTED_FAILURES.contains(&n) {
            mismatches.push(n);
        }
    }
    if mismatches.is_empty() {
        println!(
            "acceptance: outcomes match expectations (expected failures: {EXPECTED_FAILURES:?})"
        );
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {mismatches:?}");
        ExitCode::FAILURE
    }
}
