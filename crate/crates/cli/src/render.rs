use std::fmt::Write as _;

use aflt_core::criterion::{ScanResult, Verdict};

use crate::commands::Report;
use crate::Format;

pub(crate) fn render(report: &Report, format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => csv_bytes(report).map_err(|e| e.to_string()),
        Format::Text => Ok(text(report).into_bytes()),
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn cert_kind(v: &Verdict) -> String {
    v.certificate.as_ref().map(|c| c.kind.to_string()).unwrap_or_default()
}

fn csv_bytes(report: &Report) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report {
        Report::Check(v) => {
            w.write_record(["d", "radical", "outcome", "method", "t", "threshold", "best_prime", "witness", "certificate_kind"])?;
            w.write_record([
                v.d.to_string(),
                v.radical.to_string(),
                v.outcome.to_string(),
                format!("{:?}", v.method),
                opt(&v.t),
                v.threshold.to_string(),
                opt(&v.best_prime),
                v.witness.as_ref().map(|s| s.lambda.to_string()).unwrap_or_default(),
                cert_kind(v),
            ])?;
        }
        Report::Scan(rows) => {
            w.write_record(["d", "status", "outcome", "method", "t", "threshold", "certificate_kind", "detail"])?;
            for row in rows {
                let d = row.d.to_string();
                match &row.result {
                    ScanResult::Verdict(v) => w.write_record([
                        d,
                        "verdict".into(),
                        v.outcome.to_string(),
                        format!("{:?}", v.method),
                        opt(&v.t),
                        v.threshold.to_string(),
                        cert_kind(v),
                        v.witness.as_ref().map(|s| s.lambda.to_string()).unwrap_or_default(),
                    ])?,
                    ScanResult::Skipped { reason } => {
                        w.write_record([d.as_str(), "skipped", "", "", "", "", "", reason])?
                    }
                    ScanResult::Error { message } => {
                        w.write_record([d.as_str(), "error", "", "", "", "", "", message])?
                    }
                }
            }
        }
        Report::Sunit(r) => {
            w.write_record(["source", "lambda", "mu", "relevant", "orbit_id", "r1", "r2", "s1", "s2", "v"])?;
            let blocks = [("param", r.param.as_ref().map(|p| &p.solutions)), ("brute", r.brute.as_ref().map(|b| &b.solutions))];
            for (src, sols) in blocks {
                for s in sols.into_iter().flatten() {
                    let p = s.params.as_ref();
                    w.write_record([
                        src.to_string(),
                        s.lambda.to_string(),
                        s.mu.to_string(),
                        s.relevant.to_string(),
                        s.orbit_id.to_string(),
                        opt(&p.map(|p| p.r1)),
                        opt(&p.map(|p| p.r2)),
                        opt(&p.map(|p| p.s1)),
                        opt(&p.map(|p| p.s2)),
                        opt(&p.map(|p| &p.v)),
                    ])?;
                }
            }
        }
        Report::Frey(r) => {
            let f = &r.invariants;
            w.write_record(["field", "value"])?;
            for (k, v) in [
                ("A", &f.coef_a),
                ("B", &f.coef_b),
                ("C", &f.coef_c),
                ("a", &f.a),
                ("b", &f.b),
                ("c", &f.c),
                ("c4", &f.c4),
                ("delta", &f.delta),
                ("j", &f.j),
            ] {
                w.write_record([k, &v.to_string()])?;
            }
            w.write_record(["p", &f.p.to_string()])?;
            w.write_record(["even_coefficients", &f.even_coefficients.join(";")])?;
            for u in &r.u_identity {
                let val = match (&u.report, &u.skipped) {
                    (Some(rep), _) => format!("holds={} v_P(j)={} expected={}", rep.holds, rep.v_p_j, rep.expected),
                    (None, Some(why)) => format!("skipped: {why}"),
                    _ => String::new(),
                };
                w.write_record([format!("u_identity_{}", u.prime), val])?;
            }
            for s in &r.semistability {
                w.write_record([format!("semistable_{}", s.q), format!("{:?} holds={}", s.reduction, s.holds)])?;
            }
            for m in &r.vm {
                w.write_record([format!("vm_{}", m.m), format!("t={} v_m(j)={} holds={}", m.t, m.v_m_j, m.holds)])?;
            }
        }
        Report::Density(d) => {
            let r = &d.report;
            w.write_record(["field", "value"])?;
            let rows: [(&str, String); 14] = [
                ("x", r.x.to_string()),
                ("r_max", r.r_max.to_string()),
                ("n_sf", r.n_sf.to_string()),
                ("n_sf_3_mod_8", r.n_sf_3_mod_8.to_string()),
                ("cprime_count", r.cprime_count.to_string()),
                ("cprime_outside_3_mod_8", r.cprime_outside_3_mod_8.to_string()),
                ("cprime_incomplete_r", r.cprime_incomplete_r.iter().map(u32::to_string).collect::<Vec<_>>().join(";")),
                ("squarefree_fraction", r.squarefree_fraction.to_string()),
                ("six_over_pi_squared", r.six_over_pi_squared.to_string()),
                ("fraction_3_mod_8", r.fraction_3_mod_8.to_string()),
                ("delta_rel_c", r.delta_rel_c.to_string()),
                ("delta_rel_d", r.delta_rel_d.to_string()),
                ("reference_delta_rel_d", r.reference_delta_rel_d.to_string()),
                ("cprime", d.cprime.iter().map(|e| e.d.to_string()).collect::<Vec<_>>().join(";")),
            ];
            for (k, v) in rows {
                w.write_record([k, &v])?;
            }
        }
        Report::Mersenne(rows) => {
            w.write_record(["m", "mersenne", "digits", "omega", "fully_factored", "probable", "h_lower_holds", "factors"])?;
            for r in rows {
                let s = &r.stat;
                w.write_record([
                    s.m.to_string(),
                    s.mersenne.to_string(),
                    s.digits.to_string(),
                    s.omega.to_string(),
                    s.fully_factored.to_string(),
                    s.probable.to_string(),
                    opt(&r.h_lower_holds),
                    factor_string(&s.factors),
                ])?;
            }
        }
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn factor_string(fs: &[(u128, u32)]) -> String {
    fs.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn verdict_text(out: &mut String, v: &Verdict) {
    let _ = writeln!(out, "Q(sqrt(-{})), odd radical {}: {} ({:?})", v.d, v.radical, v.outcome, v.method);
    if let Some(t) = v.t {
        let _ = writeln!(out, "  t = {t}, threshold = {} at {}", v.threshold, opt(&v.best_prime));
    }
    if let Some(w) = &v.witness {
        let _ = writeln!(out, "  witness: lambda = {}, mu = {}", w.lambda, w.mu);
    }
    for h in &v.hypotheses {
        let _ = writeln!(out, "  hypothesis: {h}");
    }
    if let Some(c) = &v.certificate {
        let _ = writeln!(out, "  certificate {} -> {:?}", c.kind, c.conclusion);
        for s in &c.steps {
            let m = s.modulus.map(|m| format!("mod {m}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "    [{:?}] {m}: {}", s.outcome, s.assertion);
        }
        for g in &c.gaps {
            let _ = writeln!(out, "    gap: {g}");
        }
    }
    let _ = writeln!(out, "  orbits evaluated: {}", v.orbits.len());
}

fn text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Check(v) => verdict_text(&mut out, v),
        Report::Scan(rows) => {
            for row in rows {
                match &row.result {
                    ScanResult::Verdict(v) => {
                        let _ = writeln!(out, "{:>8}  {}  t={} threshold={}", row.d, v.outcome, opt(&v.t), v.threshold);
                    }
                    ScanResult::Skipped { reason } => {
                        let _ = writeln!(out, "{:>8}  skipped: {reason}", row.d);
                    }
                    ScanResult::Error { message } => {
                        let _ = writeln!(out, "{:>8}  error: {message}", row.d);
                    }
                }
            }
        }
        Report::Sunit(r) => {
            let q = r.q.map_or_else(|| "none".to_string(), |q| q.to_string());
            let _ = writeln!(out, "Q(sqrt(-{})), 2 {:?}, q = {q}", r.d, r.two_splitting);
            if let Some(p) = &r.param {
                let _ = writeln!(out, "parametrized ({}): {} orbits", p.method, p.solutions.len());
                for s in &p.solutions {
                    let params = s.params.as_ref().map(|p| format!("  r1={} r2={} s1={} s2={} v={}", p.r1, p.r2, p.s1, p.s2, p.v));
                    let _ = writeln!(out, "  {}{}", s.lambda, params.unwrap_or_default());
                }
            }
            if let Some(b) = &r.brute {
                let _ = writeln!(out, "brute force (coords <= {}): {} orbits", b.bounds.coord_bound, b.solutions.len());
                for s in &b.solutions {
                    let _ = writeln!(out, "  {}{}", s.lambda, if s.relevant { "" } else { "  (irrelevant)" });
                }
            }
            if let Some(a) = &r.agreement {
                let _ = writeln!(out, "agreement: {}", if a.brute_in_param { "yes" } else { "NO" });
                for m in &a.missing_from_param {
                    let _ = writeln!(out, "  missing from parametrization: {m}");
                }
            }
            for n in &r.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        Report::Frey(r) => {
            let f = &r.invariants;
            let _ = writeln!(out, "{}*({})^{p} + {}*({})^{p} + {}*({})^{p} = 0", f.coef_a, f.a, f.coef_b, f.b, f.coef_c, f.c, p = f.p);
            let _ = writeln!(out, "c4 = {}\ndelta = {}\nj = {}", f.c4, f.delta, f.j);
            if !f.even_coefficients.is_empty() {
                let _ = writeln!(out, "even coefficients: {}", f.even_coefficients.join(", "));
            }
            for u in &r.u_identity {
                match (&u.report, &u.skipped) {
                    (Some(rep), _) => {
                        let _ = writeln!(out, "{}: v(j) = {} expected {} ({:?})", u.prime, rep.v_p_j, rep.expected, rep.inertia);
                    }
                    (None, Some(why)) => {
                        let _ = writeln!(out, "{}: skipped ({why})", u.prime);
                    }
                    _ => {}
                }
            }
            for s in &r.semistability {
                let _ = writeln!(out, "{}: {:?}, v(delta) = {}, v(c4) = {}", s.q, s.reduction, s.v_q_delta, s.v_q_c4);
            }
            for m in &r.vm {
                let _ = writeln!(out, "{}: t = {}, v(j) = {} ({:?})", m.m, m.t, m.v_m_j, m.inertia);
            }
        }
        Report::Density(d) => {
            let r = &d.report;
            let _ = writeln!(out, "X = {}, r_max = {}", r.x, r.r_max);
            let _ = writeln!(out, "squarefree: {} ({:.6} vs 6/pi^2 = {:.6})", r.n_sf, r.squarefree_fraction, r.six_over_pi_squared);
            let _ = writeln!(out, "squarefree 3 mod 8: {} ({:.6} of squarefree)", r.n_sf_3_mod_8, r.fraction_3_mod_8);
            let _ = writeln!(out, "C': {} members: {}", r.cprime_count, d.cprime.iter().map(|e| e.d.to_string()).collect::<Vec<_>>().join(", "));
            let _ = writeln!(out, "delta_rel(C) = {:.6}, delta_rel(D) = {:.6} (reference {:.6})", r.delta_rel_c, r.delta_rel_d, r.reference_delta_rel_d);
            if !r.cprime_incomplete_r.is_empty() {
                let _ = writeln!(out, "incomplete factorizations at r = {:?}", r.cprime_incomplete_r);
            }
        }
        Report::Mersenne(rows) => {
            for r in rows {
                let s = &r.stat;
                let flag = if s.fully_factored { "" } else { "  (incomplete)" };
                let _ = writeln!(out, "m = {:>3}  omega = {:>2}  {}{flag}", s.m, s.omega, factor_string(&s.factors));
            }
        }
    }
    out
}
