use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reflectia::derivforms::rank2_verify;
use reflectia::formulas::{catalan_family, cluster_fh, h_to_f_check, CatalanKind};
use reflectia::groups::{catalog, declared_profile, generate_checked, resolve_group, NumerologyProfile};
use reflectia::molien::{group_hilbert, molien};
use reflectia::verify::{check_catalog, closed_form, suite, verify_all, verify_group, VerifyReport};
use reflectia::{Error, QTSLaurent};

#[derive(Parser)]
#[command(name = "reflectia", version, about = "Triply-graded Molien series of complex reflection groups")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GroupArg {
    /// Catalog name (G24, H3, E6) or constructor (G(3,1,2), A4, B3, I2(7)).
    #[arg(long)]
    group: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// List or validate the group catalog.
    Groups {
        #[arg(value_enum)]
        action: GroupsAction,
        /// `check` generates entries up to this order.
        #[arg(long, default_value_t = 200_000)]
        max_order: u64,
    },
    /// Brute-force Hilbert series, or ν_r with --r.
    Hilb {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        cap: Option<i64>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Closed-form ν_r.
    Formula {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        r: usize,
    },
    /// Brute force against every closed form and slice identity.
    Verify {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        allow_large: bool,
    },
    /// Verify the whole suite in parallel.
    VerifyAll {
        #[arg(long)]
        max_order: Option<u64>,
        /// Also run groups that take tens of seconds (E7).
        #[arg(long)]
        include_slow: bool,
    },
    Catalan(CatalanArgs),
    Narayana(CatalanArgs),
    Kirkman(CatalanArgs),
    /// Cluster f- and h-vectors with the product formula.
    Cluster {
        #[command(flatten)]
        g: GroupArg,
    },
    Identity {
        #[command(subcommand)]
        which: IdentityCmd,
    },
    /// The four rank-2 checks on derivations and forms.
    Rank2 {
        #[command(flatten)]
        g: GroupArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupsAction {
    List,
    Check,
}

#[derive(Args)]
struct CatalanArgs {
    #[command(flatten)]
    g: GroupArg,
    #[arg(long)]
    p: i64,
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Subcommand)]
enum IdentityCmd {
    /// Residual of the h-to-f identity for the coincidental profile (n, e1, a).
    HToF {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        e1: i64,
        #[arg(long)]
        a: i64,
        #[arg(long, default_value_t = 30)]
        cap: i64,
    },
}

/// Command output: JSON payload, text rendering and whether every check passed.
struct Out {
    json: Value,
    text: String,
    ok: bool,
}

fn ok(json: Value, text: String) -> Out {
    Out { json, text, ok: true }
}

fn series_json(p: &QTSLaurent) -> Value {
    json!({ "terms": p.to_records(), "cap": p.cap(), "text": p.render() })
}

fn profile_of(name: &str) -> Result<(String, NumerologyProfile), Error> {
    let spec = resolve_group(name)?;
    let p = declared_profile(&spec).ok_or_else(|| Error::Refused(format!("{} has no declared numerology", spec.name)))?;
    Ok((spec.name, p))
}

fn report_text(rep: &VerifyReport) -> String {
    let mut s = format!("{} |W|={} {}\n", rep.group, rep.order, if rep.pass { "PASS" } else { "FAIL" });
    s += &format!("  degrees {:?} coexponents {:?}\n", rep.profile.degrees, rep.profile.coexponents);
    for o in &rep.per_r {
        s += &format!("  ν_{} [{}] {}\n", o.r, o.source, if o.equal { "equal" } else { "DIFFERS" });
        if !o.equal {
            s += &format!("    brute    {}\n    expected {}\n", o.brute, o.expected);
        }
    }
    let slices = rep.slice_checks.iter().filter(|c| c.pass).count();
    let psi = rep.psi_checks.iter().filter(|c| c.pass).count();
    s += &format!("  slice checks {slices}/{}\n", rep.slice_checks.len());
    s += &format!("  ψ checks {psi}/{}\n", rep.psi_checks.len());
    s += &format!("  numerology {}\n", if rep.numerology.pass { "ok" } else { "MISMATCH" });
    for f in rep.failures() {
        s += &format!("  failed: {f}\n");
    }
    s += &format!("  {} ms", rep.millis);
    s
}

fn run(cmd: Cmd) -> Result<Out, Error> {
    match cmd {
        Cmd::Groups { action: GroupsAction::List, .. } => {
            let mut rows = Vec::new();
            let mut text = String::new();
            for e in catalog()?.groups {
                text += &format!("{:<6} rank {} |W|={} degrees {:?}\n", e.name, e.n, e.expected_order, e.expected_degrees);
                rows.push(json!({ "name": e.name, "rank": e.n, "order": e.expected_order, "degrees": e.expected_degrees }));
            }
            text += "constructors: A<n> B<n> D<n> E6 E7 E8 F4 H3 H4 I2(m) G(de,e,n)";
            Ok(ok(json!({ "groups": rows }), text))
        }
        Cmd::Groups { action: GroupsAction::Check, max_order } => {
            let checks = check_catalog(max_order)?;
            let all = checks.iter().all(|c| c.pass);
            let mut text = String::new();
            for c in &checks {
                let gen = c.generated_order.map_or("not generated".to_string(), |o| format!("generated {o}"));
                text += &format!("{:<6} {} declared {} {gen}", c.name, if c.pass { "ok  " } else { "FAIL" }, c.declared_order);
                if let Some(e) = &c.error {
                    text += &format!(" ({e})");
                }
                text.push('\n');
            }
            text += if all { "catalog ok" } else { "catalog has failures" };
            Ok(Out { json: json!({ "checks": checks, "pass": all }), text, ok: all })
        }
        Cmd::Hilb { g, r, cap, allow_large } => {
            let spec = resolve_group(&g.group)?;
            let group = generate_checked(&spec, allow_large)?;
            match r {
                Some(r) => {
                    let res = molien(&group)?;
                    let nu = res.nu.get(r).ok_or_else(|| Error::Malformed(format!("r = {r} exceeds rank {}", res.profile.n)))?;
                    let text = format!("ν_{r}({}) = {}", spec.name, nu.render());
                    Ok(ok(json!({ "group": spec.name, "r": r, "nu": series_json(nu) }), text))
                }
                None => {
                    let cap = match cap {
                        Some(c) => c,
                        None => declared_profile(&spec).map_or(8, |p| p.default_cap()),
                    };
                    let series = group_hilbert(&group, cap)?;
                    let text = format!("Hilb({}) = {}", spec.name, series.render());
                    Ok(ok(json!({ "group": spec.name, "series": series_json(&series) }), text))
                }
            }
        }
        Cmd::Formula { g, r } => {
            let spec = resolve_group(&g.group)?;
            let (source, nu) = closed_form(&spec.name, r)?;
            let text = format!("ν_{r}({}) [{source}] = {}", spec.name, nu.render());
            Ok(ok(json!({ "group": spec.name, "r": r, "source": source, "nu": series_json(&nu) }), text))
        }
        Cmd::Verify { g, allow_large } => {
            let rep = verify_group(&g.group, allow_large)?;
            Ok(Out { text: report_text(&rep), ok: rep.pass, json: serde_json::to_value(&rep).expect("report serializes") })
        }
        Cmd::VerifyAll { max_order, include_slow } => {
            let names = suite(max_order, include_slow)?;
            let results = verify_all(&names, include_slow);
            let mut rows = Vec::new();
            let mut text = String::new();
            let mut all = true;
            for (name, r) in results {
                match r {
                    Ok(rep) => {
                        all &= rep.pass;
                        text += &format!("{:<10} {} |W|={} {} ms\n", name, if rep.pass { "PASS" } else { "FAIL" }, rep.order, rep.millis);
                        for f in rep.failures() {
                            text += &format!("    failed: {f}\n");
                        }
                        rows.push(serde_json::to_value(&rep).expect("report serializes"));
                    }
                    Err(e) => {
                        all = false;
                        text += &format!("{name:<10} ERROR {e}\n");
                        rows.push(json!({ "group": name, "error": e.to_string(), "pass": false }));
                    }
                }
            }
            text += &format!("{} groups, {}", names.len(), if all { "all PASS" } else { "FAILURES" });
            Ok(Out { json: json!({ "reports": rows, "pass": all }), text, ok: all })
        }
        Cmd::Catalan(a) => catalan(a, CatalanKind::Catalan),
        Cmd::Narayana(a) => catalan(a, CatalanKind::Narayana),
        Cmd::Kirkman(a) => catalan(a, CatalanKind::Kirkman),
        Cmd::Cluster { g } => {
            let (name, p) = profile_of(&g.group)?;
            let counts = (0..=p.n).map(|r| cluster_fh(&p, r)).collect::<Result<Vec<_>, _>>()?;
            let all = counts.iter().all(|c| c.f == c.cluster_product);
            let f: Vec<i64> = counts.iter().map(|c| c.f).collect();
            let h: Vec<i64> = counts.iter().map(|c| c.h).collect();
            let fr: Vec<i64> = counts.iter().map(|c| c.cluster_product).collect();
            let text = format!("{name}\n  f = {f:?}\n  h = {h:?}\n  product formula {fr:?} {}", if all { "agrees" } else { "DISAGREES" });
            Ok(Out { json: json!({ "group": name, "f": f, "h": h, "cluster_product": fr, "pass": all }), text, ok: all })
        }
        Cmd::Identity { which: IdentityCmd::HToF { n, e1, a, cap } } => {
            if n == 0 || e1 < 1 || a < 1 {
                return Err(Error::Malformed("need n ≥ 1, e1 ≥ 1, a ≥ 1".into()));
            }
            let p = NumerologyProfile::coincidental_from(n, e1, a);
            let residual = h_to_f_check(&p, cap)?;
            let zero = residual.is_zero();
            let text = format!("h-to-f residual to q^{cap}: {}", if zero { "0".to_string() } else { residual.render() });
            Ok(Out { json: json!({ "n": n, "e1": e1, "a": a, "cap": cap, "residual": series_json(&residual), "pass": zero }), text, ok: zero })
        }
        Cmd::Rank2 { g } => {
            let spec = resolve_group(&g.group)?;
            let rep = rank2_verify(&spec)?;
            let mut text = format!("{} |W|={} deg Q={} {}\n  Q = {}\n", rep.group, rep.order, rep.degree_q, if rep.pass { "PASS" } else { "FAIL" }, rep.q);
            for c in &rep.checks {
                text += &format!("  {} {}\n", if c.pass { "ok  " } else { "FAIL" }, c.name);
            }
            text.pop();
            Ok(Out { text, ok: rep.pass, json: serde_json::to_value(&rep).expect("report serializes") })
        }
    }
}

fn catalan(a: CatalanArgs, kind: CatalanKind) -> Result<Out, Error> {
    let (name, p) = profile_of(&a.g.group)?;
    let poly = catalan_family(&p, a.p, a.r, kind, true)?;
    let label = match kind {
        CatalanKind::Catalan => "Cat".to_string(),
        CatalanKind::Narayana => format!("Nar_{}", a.r.unwrap_or(0)),
        CatalanKind::Kirkman => format!("Kirk_{}", a.r.unwrap_or(0)),
    };
    let text = format!("{label}^({})({name}; q) = {}", a.p, poly.render());
    Ok(ok(json!({ "group": name, "kind": kind, "p": a.p, "r": a.r, "value": series_json(&poly) }), text))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli.cmd) {
        Ok(out) => {
            if as_json {
                let mut v = out.json;
                if let Value::Object(m) = &mut v {
                    m.insert("schema".into(), json!(1));
                }
                emit(&serde_json::to_string_pretty(&v).expect("json serializes"));
            } else {
                emit(&out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if as_json {
                emit(&json!({ "schema": 1, "error": e.to_string() }).to_string());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(if matches!(e, Error::UnknownGroup(_)) { 2 } else { 1 })
        }
    }
}
