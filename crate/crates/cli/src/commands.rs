use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use sendovlab::constants::compute_constants;
use sendovlab::construct::{prop6_polynomial, prop7_polynomial, NearExtremal};
use sendovlab::estimate::{estimate_radius, exact_radius, quadratic_approx};
use sendovlab::polycore::{in_s, DiskTolerance};
use sendovlab::report::Check;
use sendovlab::verify::{
    corollaries_suite, lemma8_suite, scaling_suite, t_identity_suite, Family, ScalingRow,
};

use crate::output::{emit_record, emit_table, round_sig, sink, to_value, Format};
use crate::{CliError, FamilyArg, SearchArgs, Suite, VerifyArgs};

pub fn constants(ns: &[usize], format: Format, out: Option<&Path>) -> Result<(), CliError> {
    if let Some(&bad) = ns.iter().find(|&&n| n < 3) {
        return Err(CliError::Usage(format!("constants need n >= 3, got {bad}")));
    }
    let all = ns
        .iter()
        .map(|&n| compute_constants(n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = sink(out)?;
    if format == Format::Json {
        let mut v = to_value(&all);
        crate::output::round_json(&mut v, format.digits());
        serde_json::to_writer_pretty(&mut w, &v).map_err(std::io::Error::from)?;
        writeln!(w)?;
        w.flush()?;
        return Ok(());
    }
    let rows = all
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("n".into(), json!(c.n));
            m.insert("u1".into(), json!(c.u1));
            m.insert("u2".into(), json!(c.u2));
            m.insert("d1".into(), json!(c.d1));
            m.insert("d2".into(), json!(c.d2));
            m.insert("slope".into(), json!(c.slope));
            m.insert("d".into(), json!(c.d));
            m.insert("delta".into(), json!(c.delta));
            m.insert("alpha".into(), json!(c.alpha));
            m.insert("gamma1".into(), json!(c.gamma1));
            m.insert("gamma2".into(), json!(c.gamma2));
            m.insert("c3".into(), json!(c.c3));
            m.insert("c4".into(), json!(c.c4));
            m.insert("curvature".into(), json!(c.curvature));
            m
        })
        .collect();
    emit_table(rows, format, &mut w)?;
    Ok(())
}

fn check_rows(checks: &[Check]) -> Vec<Map<String, Value>> {
    checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), json!(c.name));
            m.insert("passed".into(), json!(c.passed));
            m.insert("applies".into(), json!(c.applies));
            m.insert("measure".into(), json!(c.measure));
            m
        })
        .collect()
}

fn scaling_line(r: &ScalingRow) -> String {
    let label = match r.n {
        Some(n) => format!("{} n={n}", r.family),
        None => r.family.clone(),
    };
    let z2 = r
        .z2_residual
        .map(|z| format!(", Z2 residual {:e}", round_sig(z, 3)))
        .unwrap_or_default();
    format!(
        "{label}: exponent {} (target {}, need >= {}){z2}, contracted roots in disk: {}",
        round_sig(r.exponent, 6),
        r.target,
        r.threshold,
        if r.contracted_in_s { "yes" } else { "no" }
    )
}

pub fn verify(args: &VerifyArgs, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let (name, checks, rows) = match args.suite {
        Suite::Lemma8 => ("lemma8", lemma8_suite(args.max_n)?, Vec::new()),
        Suite::TIdentities => ("t-identities", t_identity_suite(args.max_n)?, Vec::new()),
        Suite::Corollaries => (
            "corollaries",
            corollaries_suite(args.beta, args.search.starts, args.search.seed)?,
            Vec::new(),
        ),
        Suite::Scaling => {
            let family = match args.family {
                FamilyArg::Prop6 => Family::Prop6,
                FamilyArg::Prop7 => Family::Prop7(args.indices.0.clone()),
            };
            let (rows, checks) = scaling_suite(&family)?;
            ("scaling", checks, rows)
        }
    };
    let failures: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let mut w = sink(out)?;
    match format {
        Format::Json => {
            let mut v = json!({
                "suite": name,
                "passed": failures.is_empty(),
                "total": checks.len(),
                "failures": failures,
                "checks": checks,
            });
            if !rows.is_empty() {
                v["scaling"] = to_value(&rows);
            }
            crate::output::round_json(&mut v, format.digits());
            serde_json::to_writer_pretty(&mut w, &v).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
        Format::Csv => emit_table(check_rows(&checks), format, &mut w)?,
        Format::Text => {
            for r in &rows {
                writeln!(w, "{}", scaling_line(r))?;
            }
            for c in &checks {
                if args.all || !c.passed {
                    let verdict = match (c.applies, c.passed) {
                        (false, _) => "n/a ",
                        (true, true) => "PASS",
                        (true, false) => "FAIL",
                    };
                    writeln!(w, "{verdict}  {}  ({})", c.name, round_sig(c.measure, 6))?;
                }
            }
            writeln!(
                w,
                "{name}: {} checks, {} failed",
                checks.len(),
                failures.len()
            )?;
        }
    }
    w.flush()?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failures.len()))
    }
}

fn contracted_json(c: &sendovlab::construct::Contracted) -> Value {
    json!({
        "factor": c.factor,
        "critical_distance": c.critical_distance,
        "raw_max_modulus": c.raw_max_modulus,
        "max_modulus": c.poly.max_modulus(),
        "in_s": in_s(&c.poly, DiskTolerance::default()),
        "roots": to_value(&c.poly)["roots"],
    })
}

pub fn construct(
    family: FamilyArg,
    n: Option<usize>,
    beta: f64,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (mut v, f): (Value, Box<dyn NearExtremal>) = match family {
        FamilyArg::Prop6 => {
            if n.is_some_and(|n| n != 5) {
                return Err(CliError::Usage("the sextic family has index 5 only".into()));
            }
            let f = prop6_polynomial(beta)?;
            let mut v = json!({"family": "prop6", "n": 5, "degree": 6});
            merge(&mut v, to_value(&f));
            (v, Box::new(f))
        }
        FamilyArg::Prop7 => {
            let n = n.ok_or_else(|| CliError::Usage("--n is required for prop7".into()))?;
            let c = compute_constants(n)?;
            let f = prop7_polynomial(&c, beta)?;
            let mut v = json!({"family": "prop7", "n": n, "degree": n + 1});
            merge(&mut v, to_value(&f));
            (v, Box::new(f))
        }
    };
    v["t"] = json!(1.0 - beta);
    v["critical_distance"] = json!(f.critical_distance());
    v["critical_points"] = to_value(&f.critical_points().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>());
    let rooted = f.rooted()?;
    v["roots"] = to_value(&rooted)["roots"].clone();
    v["max_modulus"] = json!(rooted.max_modulus());
    v["contracted"] = contracted_json(&f.contracted()?);
    let mut w = sink(out)?;
    emit_record(v, format, &mut w)?;
    Ok(())
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        for (k, v) in b {
            a.insert(k, v);
        }
    }
}

pub fn estimate(
    n: usize,
    beta: f64,
    search: &SearchArgs,
    real_only: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let e = estimate_radius(n, beta, search.starts, search.seed, real_only)?;
    let mut v = to_value(&e);
    v["real_only"] = json!(real_only);
    v["exact"] = json!(exact_radius(n, beta));
    v["quadratic"] = json!(quadratic_approx(n, beta).ok());
    let mut w = sink(out)?;
    emit_record(v, format, &mut w)?;
    if e.converged {
        Ok(())
    } else {
        Err(CliError::NoConvergence(format!(
            "no local search met the simplex tolerance for n={n} beta={beta}"
        )))
    }
}
