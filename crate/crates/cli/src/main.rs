//! Command-line front end: one subcommand per computation plus `verify`,
//! which runs the full acceptance suite. Output is either an ASCII table or
//! versioned JSON (`"schema": 1`); orderings are fixed so identical flags
//! produce identical bytes.
//!
//! Exit codes: 0 on success, 1 when a computation fails or any check fails,
//! 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use lambda_local::epsilon::{check_functional_equation, local_constant};
use lambda_local::ffield::{gauss_sum_closed_form, FiniteField};
use lambda_local::groups::{catalog as group_catalog, group_from_json, FiniteGroup};
use lambda_local::lambda::{
    lambda_dispatch, lambda_klein_four, lambda_odd_galois, lambda_square_class_extension,
    lambda_tame_quadratic, lambda_unramified, q2_quadratic_catalog, tame_quadratic_crosscheck,
    FieldCtx, LambdaValue, PsiCase, TraceUnitClass,
};
use lambda_local::padic::{AddChar, ExtensionDescriptor, LocalField, MultChar, TowerStep};
use lambda_local::verify::{run_scope, Scope};
use lambda_local::{Cyclo, Error};

#[derive(Parser)]
#[command(name = "lambda-local", version, about = "Exact local constants and lambda functions")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic Gauss sum over GF(p^s), brute force and/or closed form.
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        /// Only the brute-force character sum.
        #[arg(long)]
        brute: bool,
        /// Only the closed form.
        #[arg(long)]
        closed: bool,
    },
    /// Local constant W(chi, psi) of a character of Q_p^*.
    Epsilon {
        #[arg(long)]
        p: u64,
        /// Character as inline JSON, e.g.
        /// '{"a":2,"on_uniformizer":"+1","on_units":{"3":"-1","5":"+1"}}'.
        #[arg(long)]
        chi: Option<String>,
        /// Character JSON read from a file.
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        /// Rational b replacing psi by b*psi.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        psi_shift: String,
    },
    /// Lambda-function computations.
    Lambda {
        #[command(subcommand)]
        which: LambdaCmd,
    },
    /// Finite-group analysis.
    Group {
        #[command(subcommand)]
        which: GroupCmd,
    },
    /// Run the acceptance checks (scope: all, gauss, epsilon, lambda,
    /// groups). Parallelism is capped by LAMBDA_LOCAL_THREADS.
    Verify {
        #[arg(default_value = "all")]
        scope: String,
    },
}

#[derive(Subcommand)]
enum LambdaCmd {
    /// Even-degree unramified extension of Q_p.
    Unramified {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n_psi: i64,
    },
    /// Any tower inside an odd-degree Galois extension.
    Odd {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        degree: u64,
    },
    /// Tamely ramified quadratic extension, residue field of size p^s.
    TameQuad {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Declare the trace unit class a nonsquare.
        #[arg(long)]
        nonsquare_trace: bool,
        /// Evaluate at the conductor -1 character instead of the canonical
        /// one.
        #[arg(long)]
        psi_minus_one: bool,
    },
    /// Klein-four extension over residue size q (odd).
    Klein {
        #[arg(long)]
        q: u64,
    },
    /// The extension whose norm group is exactly the squares.
    SquareClass {
        #[arg(long)]
        p: Option<u64>,
        /// Base field as JSON {"p":2,"tower":[["unramified",2]]}.
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
    },
    /// Dispatch on the Sylow-2 shape of a Galois group.
    Dispatch {
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long)]
        p: u64,
        /// Residue field size (defaults to p).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n_psi: i64,
        /// Only consulted for p = 2; for odd p it is derived from q.
        #[arg(long)]
        i_in_f: bool,
    },
    /// The seven quadratic extensions of Q_2 with lambdas via the epsilon
    /// sum.
    Catalog {
        /// Catalog name; only "q2" exists.
        target: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        psi_shift: String,
    },
    /// Tame quadratic crosscheck at an odd prime.
    Crosscheck {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Sylow-2 classification and sign-character data of a group.
    Classify {
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
    },
}

#[derive(serde::Serialize)]
struct CheckOut {
    name: String,
    expected: String,
    got: String,
    pass: bool,
}

impl CheckOut {
    fn new(name: &str, expected: impl ToString, got: impl ToString) -> CheckOut {
        let expected = expected.to_string();
        let got = got.to_string();
        CheckOut { name: name.to_string(), pass: expected == got, expected, got }
    }
}

/// Structured command output; the exit status is nonzero exactly when a
/// check fails.
#[derive(serde::Serialize)]
struct RunReport {
    schema: u32,
    command: String,
    results: Vec<serde_json::Value>,
    checks: Vec<CheckOut>,
    status: String,
    #[serde(skip)]
    table: Table,
}

#[derive(Default)]
struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl RunReport {
    fn new(command: String) -> RunReport {
        RunReport {
            schema: 1,
            command,
            results: Vec::new(),
            checks: Vec::new(),
            status: "ok".into(),
            table: Table::default(),
        }
    }

    fn finalize(&mut self) {
        if self.checks.iter().any(|c| !c.pass) {
            self.status = "failed".into();
        }
    }

    fn all_pass(&self) -> bool {
        self.status == "ok"
    }

    fn print(&self, format: Format) {
        match format {
            Format::Json => {
                println!("{}", serde_json::to_string_pretty(self).expect("report serializes"));
            }
            Format::Table => {
                if !self.table.headers.is_empty() {
                    print_table(&self.table);
                }
                for line in &self.table.footer {
                    println!("{line}");
                }
                for c in &self.checks {
                    println!(
                        "check {:<40} [{}] expected {}, got {}",
                        c.name,
                        if c.pass { "ok" } else { "FAIL" },
                        c.expected,
                        c.got
                    );
                }
            }
        }
    }
}

fn print_table(t: &Table) {
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.len()).collect();
    for row in &t.rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let line = |cells: &[String]| {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!(
                "{:<width$}",
                cell,
                width = widths.get(i).copied().unwrap_or(0)
            ));
        }
        println!("{}", out.trim_end());
    };
    line(&t.headers);
    println!("{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("--"));
    for row in &t.rows {
        line(row);
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::BadInput(format!("cannot parse rational {s:?}: {e}")))
}

fn cyclo_json(v: &Cyclo) -> serde_json::Value {
    serde_json::to_value(v).expect("cyclotomic numbers serialize")
}

fn numeric_json(v: &Cyclo) -> serde_json::Value {
    let (re, im) = v.eval_complex();
    serde_json::json!([re, im])
}

fn read_json_input(
    inline: Option<&str>,
    path: Option<&PathBuf>,
    what: &str,
) -> Result<serde_json::Value, Error> {
    let text = match (inline, path) {
        (Some(s), None) => s.to_string(),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            return Err(Error::BadInput(format!(
                "{what}: provide exactly one of the inline JSON or --in FILE"
            )))
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("bad {what} JSON: {e}")))
}

fn lambda_result_json(label: &str, v: &LambdaValue) -> serde_json::Value {
    let mut obj = v.to_json();
    obj["input"] = serde_json::Value::String(label.to_string());
    obj
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            report.print(cli.format);
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command) -> Result<RunReport, Error> {
    match command {
        Command::Gauss { p, s, brute, closed } => cmd_gauss(*p, *s, *brute, *closed),
        Command::Epsilon { p, chi, input, psi_shift } => {
            cmd_epsilon(*p, chi.as_deref(), input.as_ref(), psi_shift)
        }
        Command::Lambda { which } => cmd_lambda(which),
        Command::Group { which } => cmd_group(which),
        Command::Verify { scope } => cmd_verify(scope),
    }
}

fn cmd_gauss(p: u64, s: u32, brute: bool, closed: bool) -> Result<RunReport, Error> {
    let mut report = RunReport::new(format!("gauss --p {p} --s {s}"));
    let both = brute == closed; // neither or both flags: run the pair
    let mut values: Vec<(&str, Cyclo)> = Vec::new();
    if brute || both {
        let field = FiniteField::new(p, s)?;
        values.push(("brute", field.gauss_sum_bruteforce()?));
    }
    if closed || both {
        values.push(("closed", gauss_sum_closed_form(p, s)?));
    }
    report.table.headers = ["route", "value", "numeric"].iter().map(|s| s.to_string()).collect();
    for (route, v) in &values {
        let (re, im) = v.eval_complex();
        report.results.push(serde_json::json!({
            "p": p,
            "s": s,
            "route": route,
            "value": cyclo_json(v),
            "numeric": numeric_json(v),
        }));
        report.table.rows.push(vec![
            route.to_string(),
            v.to_string(),
            format!("{re:.6} + {im:.6}i"),
        ]);
    }
    if both {
        report.checks.push(CheckOut::new(
            "brute force equals closed form",
            values[0].1.to_string(),
            values[1].1.to_string(),
        ));
    }
    report.finalize();
    Ok(report)
}

fn cmd_epsilon(
    p: u64,
    chi: Option<&str>,
    input: Option<&PathBuf>,
    psi_shift: &str,
) -> Result<RunReport, Error> {
    let mut report = RunReport::new(format!("epsilon --p {p} --psi-shift {psi_shift}"));
    let chi_json = read_json_input(chi, input, "character")?;
    let chi = MultChar::from_json(p, &chi_json)?;
    let shift = parse_rational(psi_shift)?;
    let psi = AddChar::canonical(LocalField::qp(p)?)?.shifted(&shift)?;
    let w = local_constant(&chi, &psi)?;
    let functional_eq = check_functional_equation(&chi, &psi)?;
    let unit_modulus = &w.value * &w.value.conjugate() == Cyclo::one();
    report.results.push(serde_json::json!({
        "value": cyclo_json(&w.value),
        "numeric": numeric_json(&w.value),
        "a": w.a_chi,
        "n_psi": w.n_psi,
        "nu_c": w.nu_c,
        "checks": {"functional_eq": functional_eq, "unit_modulus": unit_modulus},
    }));
    report.table.headers = ["field", "value"].iter().map(|s| s.to_string()).collect();
    report.table.rows = vec![
        vec!["W(chi, psi)".into(), w.value.to_string()],
        vec!["a(chi)".into(), w.a_chi.to_string()],
        vec!["n(psi)".into(), w.n_psi.to_string()],
        vec!["nu(c)".into(), w.nu_c.to_string()],
    ];
    report.checks.push(CheckOut::new("functional equation", true, functional_eq));
    report.checks.push(CheckOut::new("unit modulus", true, unit_modulus));
    report.finalize();
    Ok(report)
}

fn cmd_lambda(which: &LambdaCmd) -> Result<RunReport, Error> {
    match which {
        LambdaCmd::Unramified { p, degree, n_psi } => {
            let base = LocalField::qp(*p)?;
            let ext = ExtensionDescriptor::unramified(base.clone(), *degree)?;
            let psi = psi_with_conductor(&base, *n_psi)?;
            let v = lambda_unramified(&ext, &psi)?;
            simple_lambda_report(
                format!("lambda unramified --p {p} --degree {degree} --n-psi {n_psi}"),
                &v,
            )
        }
        LambdaCmd::Odd { p, degree } => {
            let base = LocalField::qp(*p)?;
            let ext = ExtensionDescriptor::galois(
                base,
                vec![TowerStep::Unramified(*degree)],
                FiniteGroup::cyclic(*degree as usize),
            )?;
            let v = lambda_odd_galois(&ext)?;
            simple_lambda_report(format!("lambda odd --p {p} --degree {degree}"), &v)
        }
        LambdaCmd::TameQuad { p, s, nonsquare_trace, psi_minus_one } => {
            let case = if *psi_minus_one {
                PsiCase::ConductorMinusOne
            } else if *nonsquare_trace {
                PsiCase::Canonical(TraceUnitClass::NonSquare)
            } else {
                PsiCase::Canonical(TraceUnitClass::Square)
            };
            let v = lambda_tame_quadratic(*p, *s, case)?;
            simple_lambda_report(format!("lambda tame-quad --p {p} --s {s}"), &v)
        }
        LambdaCmd::Klein { q } => {
            let v = lambda_klein_four(*q)?;
            simple_lambda_report(format!("lambda klein --q {q}"), &v)
        }
        LambdaCmd::SquareClass { p, input } => {
            let field = match (p, input) {
                (Some(p), None) => LocalField::qp(*p)?,
                (None, Some(path)) => {
                    let v = read_json_input(None, Some(path), "field")?;
                    serde_json::from_value(v)
                        .map_err(|e| Error::BadInput(format!("bad field JSON: {e}")))?
                }
                _ => {
                    return Err(Error::BadInput(
                        "square-class: provide exactly one of --p or --in".into(),
                    ))
                }
            };
            let v = lambda_square_class_extension(&field)?;
            simple_lambda_report("lambda square-class".to_string(), &v)
        }
        LambdaCmd::Dispatch { catalog, input, p, q, n_psi, i_in_f } => {
            let group = load_group(catalog.as_deref(), input.as_ref())?;
            let q_f = q.unwrap_or(*p);
            let i_in_f = if *p == 2 { *i_in_f } else { q_f % 4 == 1 };
            let ctx = FieldCtx::new(*p, q_f, *n_psi, i_in_f)?;
            let v = lambda_dispatch(&group, &ctx)?;
            let mut report = simple_lambda_report(
                format!("lambda dispatch --p {p} --q {q_f} --n-psi {n_psi}"),
                &v,
            )?;
            report.results[0]["group_order"] = serde_json::json!(group.order());
            Ok(report)
        }
        LambdaCmd::Catalog { target, psi_shift } => cmd_catalog(target, psi_shift),
        LambdaCmd::Crosscheck { p } => cmd_crosscheck(*p),
    }
}

fn psi_with_conductor(base: &LocalField, n_psi: i64) -> Result<AddChar, Error> {
    let psi = AddChar::canonical(base.clone())?;
    let delta = n_psi - psi.conductor();
    let p = BigRational::from_integer(base.p().into());
    psi.shifted(&p.pow(delta as i32))
}

fn simple_lambda_report(command: String, v: &LambdaValue) -> Result<RunReport, Error> {
    let mut report = RunReport::new(command.clone());
    report.results.push(lambda_result_json(&command, v));
    report.table.headers = ["lambda", "provenance"].iter().map(|s| s.to_string()).collect();
    report.table.rows = vec![vec![v.to_string(), v.provenance.to_string()]];
    report.finalize();
    Ok(report)
}

fn load_group(catalog: Option<&str>, input: Option<&PathBuf>) -> Result<FiniteGroup, Error> {
    match (catalog, input) {
        (Some(name), None) => group_catalog(name),
        (None, Some(path)) => {
            let v = read_json_input(None, Some(path), "group")?;
            group_from_json(&v)
        }
        _ => Err(Error::BadInput("provide exactly one of --catalog or --in".into())),
    }
}

fn cmd_catalog(target: &str, psi_shift: &str) -> Result<RunReport, Error> {
    if target.to_ascii_lowercase() != "q2" {
        return Err(Error::BadInput(format!("unknown catalog {target:?}; only \"q2\" exists")));
    }
    let shift = parse_rational(psi_shift)?;
    let mut report = RunReport::new(format!("lambda catalog q2 --psi-shift {psi_shift}"));
    let records = q2_quadratic_catalog(&shift)?;
    report.table.headers = [
        "extension",
        "character",
        "a",
        "chi(2)",
        "chi(3)",
        "chi(5)",
        "norm group",
        "lambda",
        "expected",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut product = lambda_local::Mu4::One;
    for r in &records {
        product = product.mul(r.lambda);
        report.results.push(serde_json::json!({
            "extension": r.extension,
            "character": r.label,
            "a": r.conductor,
            "chi": r.chi.to_json(),
            "norm_group": r.norm_group,
            "lambda": r.lambda.to_string(),
            "expected": r.expected.to_string(),
            "numeric": numeric_json(&r.epsilon.value),
        }));
        let chi_json = r.chi.to_json();
        let units = &chi_json["on_units"];
        report.table.rows.push(vec![
            r.extension.to_string(),
            r.label.to_string(),
            r.conductor.to_string(),
            chi_json["on_uniformizer"].as_str().unwrap_or("+1").to_string(),
            units.get("3").and_then(|v| v.as_str()).unwrap_or("+1").to_string(),
            units.get("5").and_then(|v| v.as_str()).unwrap_or("+1").to_string(),
            r.norm_group.to_string(),
            r.lambda.to_string(),
            r.expected.to_string(),
        ]);
        report.checks.push(CheckOut::new(
            &format!("lambda {}", r.extension),
            r.expected,
            r.lambda,
        ));
    }
    report.table.footer.push(format!("product = {product}"));
    report.checks.push(CheckOut::new("product of lambdas", "1", product));
    report.finalize();
    Ok(report)
}

fn cmd_crosscheck(p: u64) -> Result<RunReport, Error> {
    let mut report = RunReport::new(format!("lambda crosscheck --p {p}"));
    let cc = tame_quadratic_crosscheck(p)?;
    report.table.headers = [
        "n(psi)",
        "row",
        "lambda1",
        "lambda2",
        "lambda3",
        "lambda_KF",
        "relations",
        "row match",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for row in &cc.rows {
        report.results.push(serde_json::json!({
            "n_psi": row.n_psi,
            "row": row.row_label,
            "lambda1": row.lambda1.to_string(),
            "lambda2": row.lambda2.to_string(),
            "lambda3": row.lambda3.to_string(),
            "lambda_kf": row.lambda_kf.to_string(),
        }));
        report.table.rows.push(vec![
            row.n_psi.to_string(),
            row.row_label.clone(),
            row.lambda1.to_string(),
            row.lambda2.to_string(),
            row.lambda3.to_string(),
            row.lambda_kf.to_string(),
            row.relations_hold.to_string(),
            row.row_matches.to_string(),
        ]);
        report.checks.push(CheckOut::new(
            &format!("relations at n(psi)={}", row.n_psi),
            true,
            row.relations_hold,
        ));
        report.checks.push(CheckOut::new(
            &format!("table row at n(psi)={}", row.n_psi),
            true,
            row.row_matches,
        ));
    }
    report.checks.push(CheckOut::new("gauss ratio", true, cc.gauss_ratio_matches));
    report.checks.push(CheckOut::new("theorem multiset", true, cc.theorem_multiset_matches));
    report.checks.push(CheckOut::new("squares rule", true, cc.squares_match));
    report.finalize();
    Ok(report)
}

fn cmd_group(which: &GroupCmd) -> Result<RunReport, Error> {
    match which {
        GroupCmd::Classify { catalog, input } => {
            let group = load_group(catalog.as_deref(), input.as_ref())?;
            let mut report = RunReport::new("group classify".to_string());
            let sylow = group.sylow2()?;
            let class = group.classify_sylow2(&sylow)?;
            let derived = group.commutator_subgroup();
            let ab = group.quotient(&derived)?.abelian_invariants()?;
            let delta1 = group.delta_sign_character(&group.trivial_subgroup())?;
            let delta1_trivial = delta1.iter().all(|&s| s == 1);
            let class_label = match class {
                lambda_local::groups::Sylow2Class::Trivial => "Trivial".to_string(),
                lambda_local::groups::Sylow2Class::NontrivialCyclic => {
                    "NontrivialCyclic".to_string()
                }
                lambda_local::groups::Sylow2Class::MetacyclicNotCyclic { contains_klein } => {
                    format!("MetacyclicNotCyclic{{contains_klein: {contains_klein}}}")
                }
                lambda_local::groups::Sylow2Class::NotMetacyclic => "NotMetacyclic".to_string(),
            };
            report.results.push(serde_json::json!({
                "order": group.order(),
                "sylow2_order": sylow.order(),
                "class": class_label,
                "rk2_abelianization": ab.rk2(),
                "commutator_order": derived.order(),
                "delta1_trivial": delta1_trivial,
            }));
            report.table.headers = ["field", "value"].iter().map(|s| s.to_string()).collect();
            report.table.rows = vec![
                vec!["order".into(), group.order().to_string()],
                vec!["sylow2 order".into(), sylow.order().to_string()],
                vec!["class".into(), class_label],
                vec!["rk2(G/G')".into(), ab.rk2().to_string()],
                vec!["|G'|".into(), derived.order().to_string()],
                vec!["delta1 trivial".into(), delta1_trivial.to_string()],
            ];
            report.checks.push(CheckOut::new(
                "sign-character dichotomy",
                true,
                group.delta_consistency_check()?,
            ));
            report.finalize();
            Ok(report)
        }
    }
}

fn cmd_verify(scope: &str) -> Result<RunReport, Error> {
    let scope: Scope = scope.parse()?;
    let threads = std::env::var("LAMBDA_LOCAL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let reports = run_scope(scope, threads);
    let mut out = RunReport::new(format!("verify {scope:?}").to_lowercase());
    let mut passed = 0usize;
    for r in &reports {
        out.table.footer.push(r.summary_line());
        out.results.push(serde_json::json!({
            "id": r.id,
            "title": r.title,
            "millis": r.millis as u64,
            "pass": r.pass,
            "checks": r.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "expected": c.expected,
                "got": c.got,
                "pass": c.pass,
            })).collect::<Vec<_>>(),
        }));
        out.checks.push(CheckOut::new(r.id, true, r.pass));
        if r.pass {
            passed += 1;
        }
    }
    out.table.footer.push(format!("{passed}/{} criteria passed", reports.len()));
    out.finalize();
    Ok(out)
}
