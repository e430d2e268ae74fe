//! The executable acceptance suite: every top-level correctness criterion of
//! the crate as a structured, deterministic check list. The CLI `verify`
//! subcommand and the `acceptance` integration test both drive this module,
//! so the gate the tests enforce is exactly the gate a user can rerun.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_traits::One;

use crate::cyclo::Mu4;
use crate::epsilon::{check_functional_equation, deligne_constant, local_constant};
use crate::ffield::{gauss_sum_closed_form, FiniteField};
use crate::groups::{dichotomy_corpus, FiniteGroup};
use crate::lambda::{
    lambda_dispatch, lambda_klein_four, q2_quadratic_catalog, tame_quadratic_crosscheck, FieldCtx,
    LambdaKind,
};
use crate::padic::{
    conductor_after_trace, AddChar, ExtensionDescriptor, LocalField, MultChar, TowerStep,
};
use crate::{Cyclo, Error, Rat};

/// Which slice of the acceptance suite to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    Gauss,
    Epsilon,
    Lambda,
    Groups,
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Scope> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Ok(Scope::All),
            "gauss" => Ok(Scope::Gauss),
            "epsilon" => Ok(Scope::Epsilon),
            "lambda" => Ok(Scope::Lambda),
            "groups" => Ok(Scope::Groups),
            other => Err(Error::BadInput(format!(
                "unknown scope {other:?} (want all|gauss|epsilon|lambda|groups)"
            ))),
        }
    }
}

/// A single expected-versus-got comparison.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl Check {
    fn eq<T: PartialEq + std::fmt::Display>(name: impl Into<String>, expected: T, got: T) -> Check {
        let pass = expected == got;
        Check { name: name.into(), expected: expected.to_string(), got: got.to_string(), pass }
    }

    fn bool(name: impl Into<String>, pass: bool) -> Check {
        Check { name: name.into(), expected: "true".into(), got: pass.to_string(), pass }
    }

    fn error(name: impl Into<String>, err: &Error) -> Check {
        Check {
            name: name.into(),
            expected: "ok".into(),
            got: format!("error: {err}"),
            pass: false,
        }
    }
}

/// Result of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub millis: u128,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CriterionReport {
    pub fn summary_line(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let mut line = format!(
            "[{}] {} — {} ({} checks, {} failed, {} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len(),
            failed,
            self.millis,
        );
        if !self.pass {
            for c in self.checks.iter().filter(|c| !c.pass).take(5) {
                let _ = write!(line, "\n    {}: expected {}, got {}", c.name, c.expected, c.got);
            }
        }
        line
    }
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    scope: Scope,
    budget_ms: Option<u128>,
    run: fn() -> Vec<Check>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: "c1-q2-golden-table",
        title: "seven quadratic lambda values over Q_2 via the epsilon sum",
        scope: Scope::Lambda,
        budget_ms: Some(1_000),
        run: q2_golden_table,
    },
    Criterion {
        id: "c2-gauss-oracle",
        title: "brute-force vs closed-form Gauss sums, p <= 47, s <= 3",
        scope: Scope::Gauss,
        budget_ms: Some(30_000),
        run: gauss_oracle,
    },
    Criterion {
        id: "c3-functional-equation",
        title: "W(chi)W(chi^-1) = chi(-1) across the quadratic characters",
        scope: Scope::Epsilon,
        budget_ms: None,
        run: functional_equations,
    },
    Criterion {
        id: "c4-klein-four",
        title: "Klein-four epsilon product vs the closed form",
        scope: Scope::Lambda,
        budget_ms: None,
        run: klein_four_two_ways,
    },
    Criterion {
        id: "c5-tame-quadratic",
        title: "tame quadratic closed form vs residue Gauss sums and the four-case table",
        scope: Scope::Lambda,
        budget_ms: None,
        run: tame_quadratic,
    },
    Criterion {
        id: "c6-group-dichotomy",
        title: "sign-character dichotomy over the group corpus",
        scope: Scope::Groups,
        budget_ms: Some(10_000),
        run: group_dichotomy,
    },
    Criterion {
        id: "c7-dispatcher",
        title: "lambda dispatcher spot checks",
        scope: Scope::Lambda,
        budget_ms: None,
        run: dispatcher_spots,
    },
    Criterion {
        id: "c8-conductor-tower",
        title: "conductor-after-trace tower composition",
        scope: Scope::Epsilon,
        budget_ms: None,
        run: conductor_tower,
    },
];

fn in_scope(c: &Criterion, scope: Scope) -> bool {
    scope == Scope::All || c.scope == scope
}

/// Ids of all acceptance criteria, in report order.
pub fn criterion_ids() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.id).collect()
}

/// Run a single criterion by id.
pub fn run_by_id(id: &str) -> Option<CriterionReport> {
    CRITERIA.iter().find(|c| c.id == id).map(run_criterion)
}

/// Run the criteria in a scope, at most `max_threads` at a time, and return
/// the reports sorted by id (aggregation is order-independent).
pub fn run_scope(scope: Scope, max_threads: usize) -> Vec<CriterionReport> {
    let selected: Vec<&Criterion> = CRITERIA.iter().filter(|c| in_scope(c, scope)).collect();
    let threads = max_threads.max(1).min(selected.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let reports = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= selected.len() {
                    break;
                }
                let report = run_criterion(selected[idx]);
                reports.lock().unwrap().push(report);
            });
        }
    });
    let mut reports = reports.into_inner().unwrap();
    reports.sort_by_key(|r| r.id);
    reports
}

fn run_criterion(c: &Criterion) -> CriterionReport {
    let start = Instant::now();
    let mut checks = (c.run)();
    let millis = start.elapsed().as_millis();
    if let Some(budget) = c.budget_ms {
        checks.push(Check {
            name: format!("{} runtime < {} ms", c.id, budget),
            expected: format!("< {budget}"),
            got: millis.to_string(),
            pass: millis < budget,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    CriterionReport { id: c.id, title: c.title, millis, checks, pass }
}

// ----- criterion 1 ---------------------------------------------------------

fn q2_golden_table() -> Vec<Check> {
    let golden = [
        ("Q2(sqrt(5))", Mu4::One),
        ("Q2(sqrt(-1))", Mu4::I),
        ("Q2(sqrt(-5))", Mu4::I),
        ("Q2(sqrt(2))", Mu4::One),
        ("Q2(sqrt(10))", Mu4::MinusOne),
        ("Q2(sqrt(-2))", Mu4::I),
        ("Q2(sqrt(-10))", Mu4::MinusI),
    ];
    let records = match q2_quadratic_catalog(&Rat::one()) {
        Ok(r) => r,
        Err(e) => return vec![Check::error("catalog", &e)],
    };
    let mut checks = Vec::new();
    let mut product = Mu4::One;
    for (record, (ext, expected)) in records.iter().zip(golden) {
        checks.push(Check::eq(format!("lambda {ext}"), expected, record.lambda));
        checks.push(Check::eq(
            format!("catalog row order {ext}"),
            ext.to_string(),
            record.extension.to_string(),
        ));
        product = product.mul(record.lambda);
    }
    checks.push(Check::eq("product of all seven lambdas", Mu4::One, product));
    checks
}

// ----- criterion 2 ---------------------------------------------------------

const ODD_PRIMES_TO_47: [u64; 14] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn gauss_oracle() -> Vec<Check> {
    let mut checks = Vec::new();
    for p in ODD_PRIMES_TO_47 {
        for s in 1..=3u32 {
            let name = format!("gauss p={p} s={s}");
            let field = match FiniteField::new(p, s) {
                Ok(f) => f,
                Err(e) => {
                    checks.push(Check::error(name, &e));
                    continue;
                }
            };
            let brute: Cyclo = match field.gauss_sum_bruteforce() {
                Ok(v) => v,
                Err(e) => {
                    checks.push(Check::error(name, &e));
                    continue;
                }
            };
            let closed: Cyclo = match gauss_sum_closed_form(p, s) {
                Ok(v) => v,
                Err(e) => {
                    checks.push(Check::error(name, &e));
                    continue;
                }
            };
            let (br, bi) = brute.eval_complex();
            let (cr, ci) = closed.eval_complex();
            let numeric = ((br - cr).powi(2) + (bi - ci).powi(2)).sqrt();
            checks.push(Check {
                name: format!("{name} exact"),
                expected: format!("{closed}"),
                got: format!("{brute}"),
                pass: brute == closed,
            });
            checks.push(Check {
                name: format!("{name} numeric"),
                expected: "< 1e-8".into(),
                got: format!("{numeric:.3e}"),
                pass: numeric < 1e-8,
            });
        }
    }
    checks
}

// ----- criterion 3 ---------------------------------------------------------

fn functional_equations() -> Vec<Check> {
    let mut checks = Vec::new();
    let psi2 = AddChar::canonical(LocalField::qp(2).unwrap()).unwrap();
    for (k, chi) in crate::lambda::q2_quadratic_characters().iter().enumerate() {
        let name = format!("functional equation Q_2 quadratic #{}", k + 1);
        match check_functional_equation(chi, &psi2) {
            Ok(ok) => checks.push(Check::bool(name, ok)),
            Err(e) => checks.push(Check::error(name, &e)),
        }
    }
    for p in [3u64, 5, 7, 11, 13] {
        let psi = AddChar::canonical(LocalField::qp(p).unwrap()).unwrap();
        let chars = [
            MultChar::unramified_quadratic(p).unwrap(),
            MultChar::ramified_quadratic(p, 1).unwrap(),
            MultChar::ramified_quadratic(p, -1).unwrap(),
        ];
        for (k, chi) in chars.iter().enumerate() {
            let name = format!("functional equation Q_{p} quadratic #{}", k + 1);
            match check_functional_equation(chi, &psi) {
                Ok(ok) => checks.push(Check::bool(name, ok)),
                Err(e) => checks.push(Check::error(name, &e)),
            }
        }
    }
    checks
}

// ----- criterion 4 ---------------------------------------------------------

fn klein_four_two_ways() -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [3u64, 5, 7, 13] {
        let expected = if p % 4 == 1 { Mu4::MinusOne } else { Mu4::One };
        let psi = AddChar::canonical(LocalField::qp(p).unwrap()).unwrap();
        let trio = [
            MultChar::unramified_quadratic(p).unwrap(),
            MultChar::ramified_quadratic(p, 1).unwrap(),
            MultChar::ramified_quadratic(p, -1).unwrap(),
        ];
        // Route one: the epsilon product.
        let mut product = Cyclo::one();
        let mut failed = None;
        for chi in &trio {
            match local_constant(chi, &psi) {
                Ok(w) => product = &product * &w.value,
                Err(e) => failed = Some(e),
            }
        }
        let name = format!("klein-four epsilon product p={p}");
        match (failed, product.snap_fourth_root()) {
            (Some(e), _) | (None, Err(e)) => checks.push(Check::error(name, &e)),
            (None, Ok(got)) => checks.push(Check::eq(name, expected, got)),
        }
        // Route two: the closed form.
        match lambda_klein_four(p) {
            Ok(v) => checks.push(Check::eq(
                format!("klein-four closed form p={p}"),
                expected,
                v.as_exact().unwrap_or(Mu4::One),
            )),
            Err(e) => checks.push(Check::error(format!("klein-four closed form p={p}"), &e)),
        }
        // The Deligne-constant route agrees (the character product is
        // trivial).
        match deligne_constant(&trio, &psi).map(|c| c.snap_fourth_root()) {
            Ok(Ok(got)) => checks.push(Check::eq(
                format!("klein-four deligne constant p={p}"),
                expected,
                got,
            )),
            Ok(Err(e)) | Err(e) => {
                checks.push(Check::error(format!("klein-four deligne constant p={p}"), &e))
            }
        }
    }
    checks
}

// ----- criterion 5 ---------------------------------------------------------

fn tame_quadratic() -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        match tame_quadratic_crosscheck(p) {
            Err(e) => checks.push(Check::error(format!("tame quadratic p={p}"), &e)),
            Ok(report) => {
                checks.push(Check::bool(
                    format!("p={p} closed form = q^(-1/2)*gauss(brute)"),
                    report.gauss_ratio_matches,
                ));
                checks.push(Check::bool(
                    format!("p={p} theorem multiset {{l2, l3}}"),
                    report.theorem_multiset_matches,
                ));
                checks.push(Check::bool(format!("p={p} squares rule"), report.squares_match));
                for row in &report.rows {
                    checks.push(Check::bool(
                        format!("p={p} n(psi)={} relations l1*l2*l3 and l1*l3=-l2", row.n_psi),
                        row.relations_hold,
                    ));
                    checks.push(Check::bool(
                        format!("p={p} n(psi)={} table row {}", row.n_psi, row.row_label),
                        row.row_matches,
                    ));
                }
            }
        }
    }
    checks
}

// ----- criterion 6 ---------------------------------------------------------

fn group_dichotomy() -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, group) in dichotomy_corpus() {
        match group.delta_consistency_check() {
            Ok(ok) => checks.push(Check::bool(format!("dichotomy {name}"), ok)),
            Err(e) => checks.push(Check::error(format!("dichotomy {name}"), &e)),
        }
    }
    checks
}

// ----- criterion 7 ---------------------------------------------------------

fn dispatcher_spots() -> Vec<Check> {
    let mut checks = Vec::new();
    let ctx5 = FieldCtx::new(5, 5, 0, true).unwrap();
    let ctx7 = FieldCtx::new(7, 7, 0, false).unwrap();
    let ctx2 = FieldCtx::new(2, 2, 0, false).unwrap();

    let spot =
        |checks: &mut Vec<Check>, name: &str, g: &FiniteGroup, ctx: &FieldCtx, want: &str| {
            match lambda_dispatch(g, ctx) {
                Ok(v) => checks.push(Check::eq(
                    format!("dispatch {name}"),
                    want.to_string(),
                    v.to_string(),
                )),
                Err(e) => checks.push(Check::error(format!("dispatch {name}"), &e)),
            }
        };
    spot(&mut checks, "Z3 over Q_5", &FiniteGroup::cyclic(3), &ctx5, "1");
    spot(&mut checks, "Z9 over Q_7", &FiniteGroup::cyclic(9), &ctx7, "1");
    spot(&mut checks, "Q8 over Q_5", &FiniteGroup::dicyclic(2), &ctx5, "1");
    spot(&mut checks, "Q16 over Q_7", &FiniteGroup::dicyclic(4), &ctx7, "1");
    spot(&mut checks, "V over Q_5", &FiniteGroup::klein_four(), &ctx5, "-1");
    spot(
        &mut checks,
        "V over Q_13",
        &FiniteGroup::klein_four(),
        &FieldCtx::new(13, 13, 0, true).unwrap(),
        "-1",
    );
    spot(&mut checks, "V over Q_7", &FiniteGroup::klein_four(), &ctx7, "1");
    spot(&mut checks, "E8 over Q_2", &FiniteGroup::elementary_abelian_2(3), &ctx2, "1");

    match lambda_dispatch(&FiniteGroup::cyclic(8), &ctx5) {
        Ok(v) => checks.push(Check::bool(
            "dispatch Z8 over Q_5 is symbolic W(alpha)",
            matches!(v.kind, LambdaKind::SymbolicWAlpha { exponent: 1, prefactor: Mu4::One }),
        )),
        Err(e) => checks.push(Check::error("dispatch Z8 over Q_5", &e)),
    }
    checks.push(Check::eq(
        "dispatch E8 over odd p is rejected",
        Error::TameImpossible.to_string(),
        match lambda_dispatch(&FiniteGroup::elementary_abelian_2(3), &ctx5) {
            Err(e) => e.to_string(),
            Ok(v) => format!("unexpected value {v}"),
        },
    ));
    checks
}

// ----- criterion 8 ---------------------------------------------------------

fn conductor_tower() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut total = 0usize;
    let mut failed = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let base = LocalField::qp(p).unwrap();
        let mut steps: Vec<TowerStep> = Vec::new();
        for f in 1..=4u64 {
            steps.push(TowerStep::Unramified(f));
        }
        for e in 1..=9u64 {
            if crate::arith::gcd(e, p) == 1 {
                steps.push(TowerStep::TotallyTame(e));
            }
        }
        for s1 in &steps {
            for s2 in &steps {
                let e_total = step_e(s1) * step_e(s2);
                let f_total = step_f(s1) * step_f(s2);
                if e_total > 9 || f_total > 4 {
                    continue;
                }
                let degree = e_total * f_total;
                let ext1 = one_step(&base, s1);
                let mid = ext1.top().unwrap();
                let ext2 = one_step(&mid, s2);
                let composed = ExtensionDescriptor::galois(
                    base.clone(),
                    vec![s1.clone(), s2.clone()],
                    FiniteGroup::cyclic(degree as usize),
                )
                .unwrap();
                for n in -3i64..=3 {
                    total += 1;
                    let stepwise = conductor_after_trace(&ext1, n)
                        .and_then(|n1| conductor_after_trace(&ext2, n1));
                    let direct = conductor_after_trace(&composed, n);
                    let ok = match (&stepwise, &direct) {
                        (Ok(a), Ok(b)) => a == b,
                        _ => false,
                    };
                    if !ok {
                        failed.push(format!("p={p} {s1:?}+{s2:?} n={n}"));
                    }
                    // Unramified steps must preserve the conductor.
                    if matches!(s1, TowerStep::Unramified(_))
                        && conductor_after_trace(&ext1, n) != Ok(n)
                    {
                        failed.push(format!("unramified preservation p={p} {s1:?} n={n}"));
                    }
                }
            }
        }
    }
    checks.push(Check {
        name: format!("stepwise = composed over {total} tame tower cases"),
        expected: "0 failures".into(),
        got: if failed.is_empty() {
            "0 failures".into()
        } else {
            format!("{} failures, first: {}", failed.len(), failed[0])
        },
        pass: failed.is_empty(),
    });
    checks
}

fn step_e(s: &TowerStep) -> u64 {
    match s {
        TowerStep::Unramified(_) => 1,
        TowerStep::TotallyTame(e) | TowerStep::WildMarker(e) => *e,
    }
}

fn step_f(s: &TowerStep) -> u64 {
    match s {
        TowerStep::Unramified(f) => *f,
        _ => 1,
    }
}

fn one_step(base: &LocalField, s: &TowerStep) -> ExtensionDescriptor {
    match s {
        TowerStep::Unramified(f) => ExtensionDescriptor::unramified(base.clone(), *f).unwrap(),
        TowerStep::TotallyTame(e) => {
            ExtensionDescriptor::tame_totally_ramified(base.clone(), *e).unwrap()
        }
        TowerStep::WildMarker(_) => unreachable!("sweep is tame"),
    }
}
