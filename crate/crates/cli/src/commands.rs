use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use g2fib_core::enumerate::catalog::enumerate_case;
use g2fib_core::enumerate::CaseTag;
use g2fib_core::format::{from_json, to_dot, to_json};
use g2fib_core::indices::IndexAssignment;
use g2fib_core::rational::fmt_q;
use g2fib_core::resolve::type20_note;
use g2fib_core::*;

type Result<T> = std::result::Result<T, Report>;

use crate::{Command, FiberArg, Format, EXIT_INADMISSIBLE, EXIT_INVALID, EXIT_NON_UNIQUE, EXIT_OK, EXIT_PARSE, OUT_DIR_VAR};

/// Text and structured forms of one report and its exit code.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

fn fail(msg: String, code: u8) -> Report {
    Report { text: format!("error: {msg}\n"), json: json!({ "error": msg }), code }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Serde(_) => EXIT_PARSE,
        Error::NonUnique { .. } | Error::UnderDetermined(_) => EXIT_NON_UNIQUE,
        _ => EXIT_INVALID,
    }
}

fn from_core(e: Error) -> Report {
    let code = exit_for(&e);
    fail(e.to_string(), code)
}

fn read_graph(path: &Path) -> Result<FiberGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display()), EXIT_PARSE))?;
    from_json(&text).map_err(from_core)
}

fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone().or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| fail(format!("{}: {e}", dir.display()), EXIT_INVALID))?;
    }
    std::fs::write(path, content).map_err(|e| fail(format!("{}: {e}", path.display()), EXIT_INVALID))
}

pub fn dispatch(cmd: &Command, format: Format) -> u8 {
    let r = run(cmd).unwrap_or_else(|r| r);
    match format {
        Format::Text => {
            if r.code == EXIT_OK || !r.text.starts_with("error:") {
                print!("{}", r.text);
            } else {
                eprint!("{}", r.text);
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("reports serialize")),
    }
    r.code
}

fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Catalog { case, depth, chain_bound, out } => catalog(case, *depth, *chain_bound, &out_dir(out)),
        Command::Validate { file } => Ok(validate(&read_graph(file)?)),
        Command::Indices { file, no_mults } => indices(&read_graph(file)?, *no_mults),
        Command::ClassifyGerm { germ } => classify(germ),
        Command::Resolve { pencil, global, fiber, dot, out } => resolve(pencil.as_deref(), *global, *fiber, *dot, &out_dir(out)),
        Command::Holonomy { file } => holonomy(&read_graph(file)?),
        Command::IsotrivialCheck { file } => Ok(isotrivial(&read_graph(file)?)),
        Command::ExportDot { file, out } => {
            let dot = to_dot(&read_graph(file)?);
            match out {
                Some(p) => {
                    write_file(p, &dot)?;
                    Ok(Report { text: format!("wrote {}\n", p.display()), json: json!({ "written": [p] }), code: EXIT_OK })
                }
                None => Ok(Report { text: dot.clone(), json: json!({ "dot": dot }), code: EXIT_OK }),
            }
        }
    }
}

fn catalog(case: &str, depth: usize, chain_bound: usize, dir: &Path) -> Result<Report> {
    let cases: Vec<CaseTag> = if case == "all" {
        CaseTag::ALL.to_vec()
    } else {
        vec![CaseTag::parse(case).ok_or_else(|| fail(format!("unknown case `{case}`"), EXIT_PARSE))?]
    };
    let bounds = CatalogBounds { depth_limit: depth, chain_bound };
    let entries: Vec<CatalogEntry> = if cases.len() > 1 {
        enumerate_catalog(bounds)
    } else {
        enumerate_case(cases[0], bounds)
    };
    let mut manifest = Vec::new();
    let mut code = EXIT_OK;
    for (k, e) in entries.iter().enumerate() {
        let name = format!("{}-{:04}.fiber.json", e.case, k + 1);
        write_file(&dir.join(&name), &to_json(&e.graph))?;
        let valid = validate_fiber(&e.graph).pass();
        if !valid {
            code = EXIT_INVALID;
        }
        manifest.push(json!({
            "file": name,
            "case": e.case.to_string(),
            "source": e.source,
            "family": e.family,
            "chain_len": e.chain_len,
            "outcome": if valid { "valid" } else { "invalid" },
        }));
    }
    let doc = json!({
        "parameters": { "case": case, "depth": depth, "chain_bound": chain_bound },
        "entries": manifest,
    });
    write_file(&dir.join("manifest.json"), &(serde_json::to_string_pretty(&doc).expect("manifest serializes") + "\n"))?;
    let text = format!("wrote {} fiber graphs and manifest.json to {}\n", entries.len(), dir.display());
    Ok(Report { text, json: doc, code })
}

fn validate(g: &FiberGraph) -> Report {
    let r = validate_fiber(g);
    let mut text = String::new();
    if r.pass() {
        text.push_str("valid\n");
    } else {
        for v in &r.violations {
            let _ = writeln!(text, "violation: {v}");
        }
    }
    let code = if r.pass() { EXIT_OK } else { EXIT_INVALID };
    Report { text, json: json!({ "valid": r.pass(), "violations": r.violations }), code }
}

fn index_table(a: &IndexAssignment) -> String {
    let mut text = String::from("point\tbranches\tindices\teigenpair\n");
    for n in &a.nodes {
        let (m, k) = a.eigenpairs[&n.point];
        let _ = writeln!(
            text,
            "{}\t{}, {}\t{}, {}\t({m}, {k})",
            n.point,
            n.branches[0].component,
            n.branches[1].component,
            fmt_q(&n.branches[0].index),
            fmt_q(&n.branches[1].index)
        );
    }
    text
}

fn indices(g: &FiberGraph, no_mults: bool) -> Result<Report> {
    if no_mults {
        let (a, cert) = solve_indices(g).map_err(from_core)?;
        let code = if cert.unique { EXIT_OK } else { EXIT_NON_UNIQUE };
        let mut text = index_table(&a);
        if !cert.unique {
            let _ = writeln!(text, "not certified unique at {}", cert.kernel_points.join(", "));
        }
        let mults = multiplicities_from_eigenpairs(g, &a).map_err(from_core)?;
        let _ = writeln!(text, "multiplicities: {mults:?}");
        Ok(Report { text, json: json!({ "assignment": a, "certificate": cert, "multiplicities": mults }), code })
    } else {
        let a = indices_from_multiplicities(g).map_err(from_core)?;
        Ok(Report { text: index_table(&a), json: json!({ "assignment": a }), code: EXIT_OK })
    }
}

fn classify(text: &str) -> Result<Report> {
    let h = parse_germ(text).map_err(from_core)?;
    let c = classify_germ(&h).map_err(from_core)?;
    let line = format!(
        "{h}: generation {}, {}, normal form {}\n",
        c.generation,
        if c.terminal { "terminal" } else { "not terminal" },
        c.id
    );
    Ok(Report { text: line, json: json!({ "germ": h.to_string(), "class": c }), code: EXIT_OK })
}

fn resolve(pencil: Option<&str>, global: bool, fiber: FiberArg, dot: bool, dir: &Path) -> Result<Report> {
    let which = match fiber {
        FiberArg::Zero => Fiber::Zero,
        FiberArg::Inf => Fiber::Inf,
    };
    let tag = match fiber {
        FiberArg::Zero => "0",
        FiberArg::Inf => "inf",
    };
    let (stem, resolution) = if global {
        ("global", assemble_global_example().resolution)
    } else {
        let p = pencil.ok_or_else(|| fail("a pencil 'N / D' or --global is required".into(), EXIT_PARSE))?;
        ("pencil", resolve_pencil(&PencilGerm::parse(p).map_err(from_core)?))
    };
    let g = resolution.fiber(which);
    let mut text = format!("{} blow-ups\ncurve\tself\tnu_num\tnu_den\n", resolution.blowups);
    for c in &resolution.curves {
        let _ = writeln!(text, "{}\t{}\t{}\t{}", c.id, c.self_int, c.nu_num, c.nu_den);
    }
    let mut written = vec![dir.join(format!("{stem}-{tag}.fiber.json"))];
    write_file(&written[0], &to_json(&g))?;
    if dot {
        written.push(dir.join(format!("{stem}-{tag}.dot")));
        write_file(&written[1], &to_dot(&g))?;
    }
    let report = validate_fiber(&g);
    let note = type20_note(&g);
    if global {
        let _ = writeln!(text, "{tag}-fiber: {}", if report.pass() { "valid" } else { "invalid" });
        if let Some(n) = &note {
            let _ = writeln!(text, "note: {n}");
        }
        let c = collapse_all(&g);
        let _ = writeln!(text, "contracted: {}", if c.contracted.is_empty() { "none".into() } else { c.contracted.join(", ") });
        for (id, why) in &c.halted {
            let _ = writeln!(text, "halted at {id}: {why}");
        }
    }
    for p in &written {
        let _ = writeln!(text, "wrote {}", p.display());
    }
    let json = json!({
        "resolution": resolution,
        "fiber": g,
        "valid": report.pass(),
        "note": note,
        "written": written,
    });
    Ok(Report { text, json, code: EXIT_OK })
}

fn holonomy(g: &FiberGraph) -> Result<Report> {
    let v = validate_fiber(g);
    if !v.pass() {
        return Ok(validate(g));
    }
    let r = holonomy_report(g).map_err(from_core)?;
    let mut text = String::from("component\tgenerated\ttotal\n");
    for c in &r.per_component {
        let _ = writeln!(text, "{}\t{}\t{}", c.id, c.generated_order, c.total_order);
    }
    for e in &r.elliptic.generators {
        let _ = writeln!(text, "elliptic generator on {}: orders {:?}", e.source, e.admissible_orders);
    }
    for v in &r.elliptic.violations {
        let _ = writeln!(text, "violation: {v}");
    }
    let _ = writeln!(text, "monodromy order: {}", r.monodromy_order);
    let _ = writeln!(text, "transmission consistent: {}", r.transmission_consistent);
    text.push_str(&verdict_text(&r.isotrivial));
    Ok(Report { text, json: json!(r), code: EXIT_OK })
}

fn verdict_text(v: &holonomy::IsotrivialVerdict) -> String {
    if v.admissible {
        let names: Vec<String> = v.candidates.iter().map(|c| c.to_string()).collect();
        format!("isotrivial: admissible; candidate groups: {}\n", names.join(", "))
    } else {
        format!("isotrivial: inadmissible; offending primes {:?}\n", v.offending_primes)
    }
}

fn isotrivial(g: &FiberGraph) -> Report {
    let v = isotrivial_admissibility(g);
    let code = if v.admissible { EXIT_OK } else { EXIT_INADMISSIBLE };
    Report { text: verdict_text(&v), json: json!(v), code }
}
