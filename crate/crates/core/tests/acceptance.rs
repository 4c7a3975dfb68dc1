//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero when a criterion fails for a reason other than a known
//! erratum of the source data.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use autbound_core::bounds::{enumerate_exceptional, highdim_sweep, ratio_matches, xi};
use autbound_core::catalog::{
    build, external::EXTERNAL, lookup, verify_example, CheckStatus, PRIMITIVE_GROUPS, VerifyOptions,
};
use autbound_core::group::{GeneratedGroup, GroupOptions, Strategy};
use autbound_core::invariant::{
    invariant_dimension, reynolds_basis, semiinvariant_degrees, InvariantOptions,
};
use autbound_core::poly::{diagonal_stabilizer, exponent_minor_bound, is_invariant, HomogPoly};
use num_bigint::BigUint;

use common::properties as suite;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Fails only on a recorded inconsistency in the source data.
    KnownFail(String),
}

type Criterion = fn() -> Result<Outcome, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("exceptional-partition table", table2),
        ("primitive bound values", xi_values),
        ("no exceptional partitions for 27 <= N <= 40", highdim),
        ("tier-1 group orders", tier1_orders),
        ("large group orders", large_orders),
        ("invariance of printed forms", invariance),
        ("semi-invariant degrees", invariant_degrees),
        ("lattice bounds", lattice_bounds),
        ("property suites", properties),
    ];
    let mut failed = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(panic_message(p)))
            .unwrap_or_else(Outcome::Fail);
        let secs = start.elapsed().as_secs_f64();
        let line = match outcome {
            Outcome::Pass(msg) => format!("PASS  {name}: {msg}"),
            Outcome::Fail(msg) => {
                failed = true;
                format!("FAIL  {name}: {msg}")
            }
            Outcome::KnownFail(msg) => format!("FAIL  {name}: {msg} (known erratum)"),
        };
        println!("criterion {}  {line}  [{secs:.1} s]", i + 1);
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table2() -> Result<Outcome, String> {
    let fixture = include_str!("fixtures/table2.tsv");
    let rows = enumerate_exceptional(2, 26).map_err(|e| e.to_string())?;
    let expected: Vec<Vec<&str>> = fixture.lines().map(|l| l.split('\t').collect()).collect();
    ensure(rows.len() == expected.len(), || {
        format!("{} rows, expected {}", rows.len(), expected.len())
    })?;
    for (row, exp) in rows.iter().zip(&expected) {
        let got = (row.index.to_string(), row.n.to_string(), row.partition.to_string(), row.max_d.to_string());
        let want = (exp[0].to_string(), exp[1].to_string(), exp[2].to_string(), exp[3].to_string());
        ensure(got == want, || format!("row {}: got {got:?}, expected {want:?}", exp[0]))?;
        let ratio = row.ratio.as_ref().ok_or("missing ratio")?;
        ensure(ratio_matches(exp[4], ratio), || {
            format!("row {}: ratio {} vs {}", exp[0], row.ratio_display, exp[4])
        })?;
    }
    Ok(Outcome::Pass(format!("{} rows match", rows.len())))
}

fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn xi_values() -> Result<Outcome, String> {
    let table: [(u32, u64); 9] = [
        (2, 60),
        (3, 360),
        (4, 25920),
        (5, 25920),
        (6, 6531840),
        (7, 1451520),
        (8, 348364800),
        (9, 4199040),
        (12, 448345497600),
    ];
    for n in 2..=40 {
        let want = table
            .iter()
            .find(|(k, _)| *k == n)
            .map(|&(_, v)| BigUint::from(v))
            .unwrap_or_else(|| factorial(n + 1));
        ensure(xi(n) == want, || format!("N = {n}: {} != {want}", xi(n)))?;
    }
    Ok(Outcome::Pass("N = 2..40".into()))
}

fn highdim() -> Result<Outcome, String> {
    let reports = highdim_sweep(27, 40).map_err(|e| e.to_string())?;
    ensure(reports.len() == 14, || format!("{} reports", reports.len()))?;
    for r in &reports {
        ensure(r.holds, || format!("N = {} fails at {}", r.n, r.worst))?;
    }
    Ok(Outcome::Pass("all 14 values of N".into()))
}

fn group_of(id: &str) -> Result<GeneratedGroup, String> {
    lookup(id)
        .and_then(|r| r.group())
        .map_err(|e| e.to_string())
}

fn tier1_orders() -> Result<Outcome, String> {
    let expected: [(&str, u128, u64, u128); 6] = [
        ("ex-1-4", 672, 4, 168),
        ("ex-1-6", 2160, 6, 360),
        ("ex-1-6-2", 1296, 6, 216),
        ("ex-2-4", 7680, 4, 1920),
        ("ex-2-6", 41472, 6, 6912),
        ("ex-2-12", 1036800, 12, 86400),
    ];
    for (id, order, scalar, pgl) in expected {
        let g = group_of(id)?;
        for strategy in [Strategy::Closure, Strategy::Bsgs] {
            let opts = GroupOptions {
                strategy,
                ..GroupOptions::default()
            };
            let s = g.summary(&opts).map_err(|e| format!("{id}: {e}"))?;
            let got = (s.order, s.scalar_order, s.pgl_order);
            ensure(got == (order, scalar, pgl), || {
                format!("{id} via {strategy:?}: {got:?}")
            })?;
        }
    }
    Ok(Outcome::Pass("six examples, closure and Schreier-Sims agree".into()))
}

fn large_orders() -> Result<Outcome, String> {
    let expected: [(&str, u128, u64, u128); 2] = [
        ("ex-4-6", 39191040, 6, 6531840),
        ("ex-4-12", 2239488000, 12, 186624000),
    ];
    let opts = GroupOptions {
        strategy: Strategy::Bsgs,
        ..GroupOptions::default()
    };
    let mut detail = Vec::new();
    for (id, order, scalar, pgl) in expected {
        let g = group_of(id)?;
        let s = g.summary(&opts).map_err(|e| format!("{id}: {e}"))?;
        let got = (s.order, s.scalar_order, s.pgl_order);
        ensure(got == (order, scalar, pgl), || format!("{id}: {got:?}"))?;
        // scalar order, block surjectivity and invariance through the catalog
        let rec = lookup(id).map_err(|e| e.to_string())?;
        let report = verify_example(
            &rec,
            &VerifyOptions {
                tier3: true,
                cross_check: false,
                ..VerifyOptions::default()
            },
        );
        let bad: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.status != CheckStatus::Pass)
            .map(|c| c.name.clone())
            .collect();
        ensure(bad.is_empty(), || format!("{id}: {bad:?}"))?;
        detail.push(format!("{id} at primes {:?}", s.primes));
    }
    Ok(Outcome::Pass(detail.join(", ")))
}

fn invariance() -> Result<Outcome, String> {
    let cases: [(&str, fn() -> Vec<_>, fn() -> HomogPoly); 7] = [
        ("Klein quartic", build::ex_1_4_generators, build::klein_quartic),
        ("Hessian sextic", build::ex_1_6_2_generators, build::hessian_sextic),
        ("ex-2-4 quartic", build::ex_2_4_generators, build::ex_2_4_quartic),
        ("ex-2-6 sextic", build::ex_2_6_generators, build::ex_2_6_sextic),
        ("ex-2-12 dodecic", build::ex_2_12_generators, build::ex_2_12_dodecic),
        ("Todd sextic", build::ex_4_6_generators, build::todd_sextic),
        ("ex-4-12 dodecic", build::ex_4_12_generators, build::ex_4_12_dodecic),
    ];
    let mut not_invariant = Vec::new();
    for (name, gens, form) in cases {
        if !is_invariant(&gens(), &form()).map_err(|e| e.to_string())? {
            not_invariant.push(name);
        }
    }
    let wiman = is_invariant(&build::ex_1_6_generators(), &build::wiman_sextic())
        .map_err(|e| e.to_string())?;
    ensure(!wiman, || "Wiman sextic unexpectedly invariant".into())?;
    let valentiner = GeneratedGroup::new(build::ex_1_6_generators()).map_err(|e| e.to_string())?;
    let dim = invariant_dimension(&valentiner, 6, &InvariantOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(dim == 1, || format!("degree-6 invariant dimension {dim}"))?;

    if not_invariant.is_empty() {
        return Ok(Outcome::Pass("seven forms invariant, Wiman substitute check passes".into()));
    }
    if not_invariant != ["ex-2-4 quartic"] {
        return Err(format!("not invariant: {not_invariant:?}"));
    }
    // the printed quartic is invariant after the recorded diagonal change
    let rec = lookup("ex-2-4").map_err(|e| e.to_string())?;
    let report = verify_example(&rec, &VerifyOptions::default());
    let changed = report
        .checks
        .iter()
        .any(|c| c.name.contains("coordinate change") && c.status == CheckStatus::Pass);
    ensure(changed, || "ex-2-4 quartic fails even after the coordinate change".into())?;
    Ok(Outcome::KnownFail(
        "ex-2-4 quartic is not fixed by its printed generators; it is fixed after x0, x3 are scaled by i; \
         the other six forms and the Wiman checks pass"
            .into(),
    ))
}

fn invariant_degrees() -> Result<Outcome, String> {
    // (id, smallest degree, next degree)
    let core: [(&str, u32, Option<u32>); 6] = [
        ("2a5", 12, None),
        ("2s4", 6, None),
        ("2a4", 4, None),
        ("valentiner", 6, None),
        ("klein", 4, Some(6)),
        ("a5-dim3", 2, None),
    ];
    let extended: [(&str, u32); 4] = [("sp4-3", 12), ("psp4-3", 4), ("2a7", 8), ("2s6", 8)];
    let opts = InvariantOptions::default();
    let degrees_of = |g: &GeneratedGroup, cap: u32| {
        semiinvariant_degrees(g, cap, &opts).map_err(|e| e.to_string())
    };
    for (id, first, next) in core {
        let p = PRIMITIVE_GROUPS.iter().find(|p| p.id == id).ok_or("missing group")?;
        let g = GeneratedGroup::new((p.build)()).map_err(|e| e.to_string())?;
        let degs = degrees_of(&g, first + 2)?;
        ensure(degs.first() == Some(&first), || format!("{id}: {degs:?}"))?;
        if let Some(n) = next {
            ensure(degs.get(1) == Some(&n), || format!("{id}: {degs:?}"))?;
        }
    }
    let valentiner = GeneratedGroup::new(build::ex_1_6_generators()).map_err(|e| e.to_string())?;
    let basis = reynolds_basis(&valentiner, 6, &opts).map_err(|e| e.to_string())?;
    ensure(basis.len() == 1, || format!("Valentiner sextic basis of size {}", basis.len()))?;
    for (id, first) in extended {
        let e = EXTERNAL.iter().find(|e| e.id == id).ok_or("missing external group")?;
        let g = e.group().map_err(|e| e.to_string())?;
        let degs = degrees_of(&g, first)?;
        ensure(degs.first() == Some(&first), || format!("{id}: {degs:?}"))?;
    }
    Ok(Outcome::Pass("core and extended profiles".into()))
}

fn lattice_bounds() -> Result<Outcome, String> {
    for n in 1..=6usize {
        for d in 3..=12u32 {
            let f = HomogPoly::fermat(n, d);
            let s = diagonal_stabilizer(&f).map_err(|e| e.to_string())?;
            let want = BigUint::from(d).pow(n as u32);
            ensure(s.order == want, || format!("Fermat N={n} d={d}: {}", s.order))?;
        }
    }
    let forms = [
        build::klein_quartic(),
        build::wiman_sextic(),
        build::hessian_sextic(),
        build::ex_2_4_quartic(),
        build::ex_2_6_sextic(),
        build::ex_2_12_dodecic(),
        build::todd_sextic(),
        build::ex_4_12_dodecic(),
    ];
    for f in &forms {
        let bound = BigUint::from(f.degree()).pow(f.nvars() as u32);
        let s = diagonal_stabilizer(f).map_err(|e| e.to_string())?;
        ensure(s.order <= bound, || format!("stabilizer {} > {bound}", s.order))?;
        let m = exponent_minor_bound(f).map_err(|e| e.to_string())?;
        ensure(m.det > 0.into() && m.within_bound, || format!("minor det {}", m.det))?;
    }
    Ok(Outcome::Pass(format!("Fermat grid and {} catalog forms", forms.len())))
}

fn properties() -> Result<Outcome, String> {
    let suites: [(&str, fn()); 8] = [
        ("field axioms", suite::field_axioms),
        ("reduction homomorphism", suite::reduction_is_a_ring_homomorphism),
        ("action composition", suite::action_composes),
        ("Molien/Reynolds agreement", suite::molien_matches_reynolds),
        ("concatenation inequality", suite::concatenation_inequality),
        ("disjoint-block equality", suite::concatenation_equality_on_disjoint_blocks),
        ("block-order independence", suite::bound_ignores_block_order),
        ("max degree scan", suite::max_degree_closed_form_matches_scan),
    ];
    for (name, run) in suites {
        catch_unwind(run).map_err(|p| format!("{name}: {}", panic_message(p)))?;
    }
    Ok(Outcome::Pass(format!("{} suites", suites.len())))
}
