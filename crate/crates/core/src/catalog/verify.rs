//! Verification of registry records against their expected numbers.

use std::fmt::Display;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::parse_literal;
use crate::bounds::bound_b;
use crate::group::{
    permutation_group_order, CycloMatrix, GeneratedGroup, GroupError, GroupOptions, Strategy,
    Tier, TIER1_MAX,
};
use crate::invariant::{
    molien_series, reynolds_basis, semiinvariant_degrees, InvariantError, InvariantOptions,
};
use crate::poly::{
    avoids_variables, diagonal_stabilizer, exponent_minor_bound, is_invariant,
    smoothness_necessary, HomogPoly,
};

use super::external::EXTERNAL;
use super::{
    fermat_record, main_theorem_bound, CatalogError, Erratum, ExampleRecord, PolynomialRole,
    PRIMITIVE_GROUPS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not run because tier 3 was not enabled.
    SkippedTier3,
    /// Not run because a closure or chain budget was exhausted.
    SkippedBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub status: CheckStatus,
}

impl Check {
    fn compare(name: impl Into<String>, expected: impl Display, computed: impl Display) -> Self {
        let (e, c) = (expected.to_string(), computed.to_string());
        let status = if e == c {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name: name.into(),
            expected: e,
            computed: c,
            status,
        }
    }

    fn holds(name: impl Into<String>, expected: impl Display, computed: impl Display, ok: bool) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        }
    }

    fn skipped(name: impl Into<String>, expected: impl Display, why: impl Display, status: CheckStatus) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            computed: why.to_string(),
            status,
        }
    }

    fn error(name: impl Into<String>, expected: impl Display, err: impl Display) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            computed: format!("error: {err}"),
            status: CheckStatus::Fail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    Pass,
    /// Every run check passed; some were skipped because tier 3 was off.
    ConditionalPass,
    /// No check failed but a budget was exhausted.
    BudgetExhausted,
    Fail,
}

impl Overall {
    fn of(checks: &[Check]) -> Self {
        if checks.iter().any(|c| c.status == CheckStatus::Fail) {
            Overall::Fail
        } else if checks.iter().any(|c| c.status == CheckStatus::SkippedBudget) {
            Overall::BudgetExhausted
        } else if checks.iter().any(|c| c.status == CheckStatus::SkippedTier3) {
            Overall::ConditionalPass
        } else {
            Overall::Pass
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub checks: Vec<Check>,
    pub overall: Overall,
    pub tier: Option<Tier>,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub group: GroupOptions,
    pub tier3: bool,
    /// Recompute tier-1 orders by both closure and Schreier–Sims.
    pub cross_check: bool,
    /// Fermat grid of `verify_all`: `1 ≤ n ≤ fermat_max_n`, `3 ≤ d ≤ fermat_max_d`.
    pub fermat_max_n: u32,
    pub fermat_max_d: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            group: GroupOptions::default(),
            tier3: false,
            cross_check: true,
            fermat_max_n: 2,
            fermat_max_d: 5,
        }
    }
}

fn is_budget(e: &GroupError) -> bool {
    matches!(e, GroupError::CapExceeded { .. } | GroupError::BudgetExceeded(_))
}

fn group_checks(
    rec: &ExampleRecord,
    g: &GeneratedGroup,
    opts: &VerifyOptions,
    checks: &mut Vec<Check>,
) -> Option<Tier> {
    let e = rec.expected;
    let names = ["order of Lin(f)", "order of scalar subgroup", "order of Lin(X)"];
    let expected = [e.linf_order, e.scalar_order as u128, e.linx_order];
    if rec.tier3 && !opts.tier3 {
        for (n, x) in names.iter().zip(expected) {
            checks.push(Check::skipped(*n, x, "requires --tier3", CheckStatus::SkippedTier3));
        }
        return None;
    }
    match g.summary(&opts.group) {
        Ok(s) => {
            let computed = [s.order, s.scalar_order as u128, s.pgl_order];
            for ((n, x), c) in names.iter().zip(expected).zip(computed) {
                checks.push(Check::compare(*n, x, c));
            }
            if opts.cross_check && s.order <= TIER1_MAX as u128 {
                let by = |strategy| {
                    g.summary(&GroupOptions {
                        strategy,
                        ..opts.group
                    })
                    .map(|s| s.order)
                };
                match (by(Strategy::Closure), by(Strategy::Bsgs)) {
                    (Ok(a), Ok(b)) => checks.push(Check::holds(
                        "closure and Schreier-Sims agree",
                        s.order,
                        format!("{a} / {b}"),
                        a == b && a == s.order,
                    )),
                    (Err(err), _) | (_, Err(err)) => {
                        checks.push(Check::error("closure and Schreier-Sims agree", s.order, err))
                    }
                }
            }
            Some(s.tier)
        }
        Err(err) if is_budget(&err) => {
            for (n, x) in names.iter().zip(expected) {
                checks.push(Check::skipped(*n, x, &err, CheckStatus::SkippedBudget));
            }
            None
        }
        Err(err) => {
            checks.push(Check::error(names[0], e.linf_order, err));
            None
        }
    }
}

fn errata_checks(rec: &ExampleRecord, g: &GeneratedGroup, f: Option<&HomogPoly>, checks: &mut Vec<Check>) {
    for erratum in &rec.errata {
        match erratum {
            Erratum::CorrectedGenerator { index, printed, .. } => {
                let name = format!("printed generator {} has infinite order", index + 1);
                let parsed: Result<Vec<Vec<_>>, _> = printed
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| parse_literal(s, rec.generators.conductor))
                            .collect()
                    })
                    .collect();
                let outcome = parsed
                    .map_err(GroupError::from)
                    .and_then(CycloMatrix::from_rows)
                    .and_then(|m| {
                        let mut gens = g.generators().to_vec();
                        gens[*index] = m;
                        let printed_group = GeneratedGroup::new(gens)?;
                        let red = printed_group.reduce_from(3)?;
                        printed_group.check_finite_orders(&red)
                    });
                match outcome {
                    Err(GroupError::NonFiniteOrder { index: i }) if i == *index => {
                        checks.push(Check::holds(name, "infinite order", "infinite order", true))
                    }
                    Ok(_) => checks.push(Check::holds(name, "infinite order", "finite order", false)),
                    Err(e) => checks.push(Check::error(name, "infinite order", e)),
                }
            }
            Erratum::CoordinateChange { diagonal, .. } => {
                let name = "form invariant after the recorded coordinate change";
                let Some(f) = f else { continue };
                let outcome = diagonal
                    .iter()
                    .map(|s| parse_literal(s, rec.generators.conductor))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())
                    .and_then(|diag| {
                        let changed = f.substitute(&CycloMatrix::diagonal(&diag)).map_err(|e| e.to_string())?;
                        is_invariant(g.generators(), &changed).map_err(|e| e.to_string())
                    });
                match outcome {
                    Ok(ok) => checks.push(Check::holds(name, true, ok, ok)),
                    Err(e) => checks.push(Check::error(name, true, e)),
                }
            }
        }
    }
}

fn form_checks(
    rec: &ExampleRecord,
    g: &GeneratedGroup,
    f: &HomogPoly,
    opts: &VerifyOptions,
    checks: &mut Vec<Check>,
) {
    let invariant = is_invariant(g.generators(), f);
    match rec.polynomial_role {
        PolynomialRole::Invariant => match invariant {
            Ok(ok) => checks.push(Check::holds("form invariant under generators", true, ok, ok)),
            Err(e) => checks.push(Check::error("form invariant under generators", true, e)),
        },
        PolynomialRole::OtherCoordinates => {
            match invariant {
                Ok(ok) => checks.push(Check::holds(
                    "printed form invariant under printed generators",
                    false,
                    ok,
                    !ok,
                )),
                Err(e) => checks.push(Check::error("printed form invariant under printed generators", false, e)),
            }
            let name = format!("dimension of degree-{} invariants", rec.d);
            let inv_opts = InvariantOptions {
                group: opts.group,
                ..InvariantOptions::default()
            };
            match molien_series(g, rec.d, &inv_opts) {
                Ok(m) => checks.push(Check::compare(name, 1, m.coefficients[rec.d as usize])),
                Err(InvariantError::Group(e)) if is_budget(&e) => {
                    checks.push(Check::skipped(name, 1, e, CheckStatus::SkippedBudget))
                }
                Err(e) => checks.push(Check::error(name, 1, e)),
            }
        }
    }
    let smooth = smoothness_necessary(f);
    checks.push(Check::holds(
        "monomial smoothness condition",
        "every variable has a witness",
        if smooth.pass() {
            "all witnessed".to_string()
        } else {
            format!("missing for {:?}", smooth.failing())
        },
        smooth.pass(),
    ));
    let nvars = rec.n as usize + 2;
    for k in 1..nvars.div_ceil(2) {
        match avoids_variables(f, k) {
            Ok(ok) => checks.push(Check::holds(
                format!("not contained in a linear space of codimension {k}"),
                true,
                ok,
                ok,
            )),
            Err(e) => checks.push(Check::error(format!("avoids {k} variables"), true, e)),
        }
    }
    let cap = BigUint::from(rec.d).pow(nvars as u32);
    match diagonal_stabilizer(f) {
        Ok(s) => checks.push(Check::holds(
            "diagonal stabilizer order at most d^(n+2)",
            format!("<= {cap}"),
            &s.order,
            s.order <= cap,
        )),
        Err(e) => checks.push(Check::error("diagonal stabilizer order at most d^(n+2)", format!("<= {cap}"), e)),
    }
    if smooth.pass() {
        match exponent_minor_bound(f) {
            Ok(m) => checks.push(Check::holds(
                "exponent minor 0 < det <= d^(n+2)",
                format!("<= {cap}"),
                &m.det,
                m.within_bound,
            )),
            Err(e) => checks.push(Check::error("exponent minor 0 < det <= d^(n+2)", format!("<= {cap}"), e)),
        }
    }
}

fn block_checks(rec: &ExampleRecord, g: &GeneratedGroup, checks: &mut Vec<Check>) {
    let r = rec.blocks.len();
    if r < 2 {
        return;
    }
    let full: usize = (1..=r).product();
    match g.block_permutations(&rec.blocks) {
        Ok(perms) => checks.push(Check::compare(
            "block permutations generate the symmetric group",
            full,
            permutation_group_order(&perms),
        )),
        Err(e) => checks.push(Check::error("block permutations generate the symmetric group", full, e)),
    }
}

/// Runs every applicable check on one record.
pub fn verify_example(rec: &ExampleRecord, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut tier = None;
    match (rec.group(), rec.form()) {
        (Ok(g), Ok(f)) => {
            tier = group_checks(rec, &g, opts, &mut checks);
            if let Some(f) = &f {
                form_checks(rec, &g, f, opts, &mut checks);
            }
            errata_checks(rec, &g, f.as_ref(), &mut checks);
            block_checks(rec, &g, &mut checks);
        }
        (Err(e), _) | (_, Err(e)) => checks.push(Check::error("load record", "valid data", e)),
    }
    VerificationReport {
        id: rec.id.clone(),
        overall: Overall::of(&checks),
        checks,
        tier,
        wall_ms: start.elapsed().as_millis(),
    }
}

/// Reports for every record followed by the Fermat grid, in order.
pub fn verify_all(records: &[ExampleRecord], opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out: Vec<VerificationReport> = records.iter().map(|r| verify_example(r, opts)).collect();
    for n in 1..=opts.fermat_max_n {
        for d in 3..=opts.fermat_max_d {
            out.push(verify_example(&fermat_record(n, d), opts));
        }
    }
    out
}

/// Which primitive groups the invariant-degree suite covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Groups built from printed generators.
    Core,
    /// Also the groups shipped under `data/external/`.
    Extended,
}

/// Identifiers of the primitive groups in a profile.
pub fn primitive_ids(profile: Profile) -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = PRIMITIVE_GROUPS.iter().map(|p| p.id).collect();
    if profile == Profile::Extended {
        ids.extend(EXTERNAL.iter().map(|e| e.id));
    }
    ids
}

fn invariant_error(name: &str, expected: impl Display, e: InvariantError) -> Check {
    match e {
        InvariantError::Group(g) if is_budget(&g) => {
            Check::skipped(name, expected, g, CheckStatus::SkippedBudget)
        }
        e => Check::error(name, expected, e),
    }
}

/// Smallest semi-invariant degrees of a primitive group, and for the
/// Valentiner group the uniqueness of its sextic invariant.
pub fn verify_primitive(id: &str, opts: &VerifyOptions) -> Result<VerificationReport, CatalogError> {
    let start = Instant::now();
    let (group, claimed, next, derived_order) = if let Some(p) = PRIMITIVE_GROUPS.iter().find(|p| p.id == id) {
        (GeneratedGroup::new((p.build)())?, p.semiinvariant_degree, p.next_degree, None)
    } else if let Some(e) = EXTERNAL.iter().find(|e| e.id == id) {
        (e.group()?, e.semiinvariant_degree, None, Some(e.derived_order))
    } else {
        return Err(CatalogError::UnknownId(id.to_string()));
    };
    let inv_opts = InvariantOptions {
        group: opts.group,
        ..InvariantOptions::default()
    };
    let mut checks = Vec::new();
    if let Some(order) = derived_order {
        let name = "order of the derived subgroup";
        match group
            .derived_subgroup(&opts.group)
            .and_then(|d| d.summary(&opts.group))
        {
            Ok(s) => checks.push(Check::compare(name, order, s.order)),
            Err(e) if is_budget(&e) => checks.push(Check::skipped(name, order, e, CheckStatus::SkippedBudget)),
            Err(e) => checks.push(Check::error(name, order, e)),
        }
    }
    let cap = next.unwrap_or(claimed).max(claimed);
    match semiinvariant_degrees(&group, cap, &inv_opts) {
        Ok(degrees) => {
            let first = degrees.first().map_or("none".to_string(), u32::to_string);
            checks.push(Check::compare("smallest semi-invariant degree", claimed, first));
            if let Some(n) = next {
                let second = degrees.get(1).map_or("none".to_string(), u32::to_string);
                checks.push(Check::compare("next semi-invariant degree", n, second));
            }
        }
        Err(e) => checks.push(invariant_error("smallest semi-invariant degree", claimed, e)),
    }
    if id == "valentiner" {
        match molien_series(&group, 6, &inv_opts) {
            Ok(m) => checks.push(Check::compare("dimension of sextic invariants", 1, m.coefficients[6])),
            Err(e) => checks.push(invariant_error("dimension of sextic invariants", 1, e)),
        }
        match reynolds_basis(&group, 6, &inv_opts) {
            Ok(basis) => {
                let invariant = basis
                    .iter()
                    .all(|f| is_invariant(group.generators(), f).unwrap_or(false));
                checks.push(Check::holds(
                    "Reynolds basis of sextic invariants",
                    "1 invariant form",
                    format!("{} forms, invariant: {invariant}", basis.len()),
                    basis.len() == 1 && invariant,
                ));
            }
            Err(e) => checks.push(invariant_error("Reynolds basis of sextic invariants", 1, e)),
        }
    }
    Ok(VerificationReport {
        id: id.to_string(),
        overall: Overall::of(&checks),
        checks,
        tier: None,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Consistency of a record's expected numbers with the bounds.
pub fn bound_consistency(rec: &ExampleRecord) -> Result<Vec<Check>, CatalogError> {
    let e = rec.expected;
    let mut checks = vec![Check::compare(
        "Lin(f) order = scalar order x Lin(X) order",
        e.linf_order,
        e.scalar_order as u128 * e.linx_order,
    )];
    let nvars = rec.n + 2;
    let generic: BigUint = (1..=nvars).map(BigUint::from).product::<BigUint>() * BigUint::from(rec.d).pow(rec.n + 1);
    let linx = BigUint::from(e.linx_order);
    if let Some(b) = main_theorem_bound(rec.n, rec.d) {
        // only a group beyond the generic bound has to attain the exceptional one
        if linx > generic {
            checks.push(Check::compare("Lin(X) order equals the theorem bound", b, e.linx_order));
        } else {
            checks.push(Check::holds(
                "Lin(X) order at most the theorem bound",
                format!("<= {b}"),
                e.linx_order,
                e.linx_order <= b,
            ));
        }
    }
    let (relation, ok) = if rec.is_fermat() || rec.id == "ex-1-6-2" {
        ("=", linx == generic)
    } else {
        (">", linx > generic)
    };
    checks.push(Check::holds(
        format!("Lin(X) order {relation} (n+2)! d^(n+1)"),
        format!("{relation} {generic}"),
        &linx,
        ok,
    ));
    let pi = rec.partition()?;
    let b = bound_b(&pi, rec.d)?;
    checks.push(Check::holds(
        format!("Lin(f) order <= B({pi}, {})", rec.d),
        format!("<= {b}"),
        e.linf_order,
        BigUint::from(e.linf_order) <= b,
    ));
    let center_cap = BigUint::from(rec.d).pow(rec.blocks.len() as u32);
    checks.push(Check::holds(
        "scalar order <= d^r",
        format!("<= {center_cap}"),
        e.scalar_order,
        BigUint::from(e.scalar_order) <= center_cap,
    ));
    Ok(checks)
}

/// Process exit code for a set of reports: 1 on any mismatch, 3 when a
/// budget was exhausted without mismatch, 0 otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.overall == Overall::Fail) {
        1
    } else if reports.iter().any(|r| r.overall == Overall::BudgetExhausted) {
        3
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    #[test]
    fn fermat_verifies() {
        let rep = verify_example(&fermat_record(2, 5), &VerifyOptions::default());
        assert_eq!(rep.overall, Overall::Pass, "{:#?}", rep.checks);
    }

    #[test]
    fn tier3_gate_is_explicit() {
        let rec = lookup("ex-4-12").unwrap();
        let rep = verify_example(&rec, &VerifyOptions::default());
        assert_eq!(rep.overall, Overall::ConditionalPass, "{:#?}", rep.checks);
        assert!(rep
            .checks
            .iter()
            .any(|c| c.status == CheckStatus::SkippedTier3));
    }

    #[test]
    fn bound_consistency_of_dodecic() {
        let checks = bound_consistency(&lookup("ex-2-12").unwrap()).unwrap();
        assert!(checks.iter().all(|c| c.status == CheckStatus::Pass), "{checks:#?}");
    }
}
