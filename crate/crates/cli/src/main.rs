mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hallq::algebra::HallElement;
use hallq::cache::{DiskCache, CACHE_ENV};
use hallq::engine::Engine;
use hallq::error::{Error, Result};
use hallq::hallpoly::{fit_polynomial, FitOptions};
use hallq::modspec::{ModuleSpec, SlotAssignment, SpecTriple};
use hallq::orbit::ClassKey;
use hallq::quiver::{DimVector, Quiver};
use hallq::rep::{Guards, Representation};

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "hallq", version, about = "Exact Ringel-Hall algebra computations for acyclic quivers")]
struct Cli {
    /// Quiver file: {"vertices": [...], "arrows": [[name, source, target], ...]}.
    #[arg(long, global = true)]
    quiver: Option<PathBuf>,

    /// Field size (a prime power).
    #[arg(long, default_value_t = 2, global = true)]
    q: u32,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Pointwise scans are limited to 2^enum-exp points.
    #[arg(long, default_value_t = Guards::default().enum_exp, global = true)]
    enum_exp: u32,

    /// Hom-space enumeration is limited to 2^hom-exp elements.
    #[arg(long, default_value_t = Guards::default().hom_exp, global = true)]
    hom_exp: u32,

    #[arg(long, env = CACHE_ENV, global = true)]
    cache_dir: Option<PathBuf>,

    /// Do not read or write the Hall number cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iso-classes of one dimension vector.
    Enumerate { dim: String },
    /// Hall number g^L_{MN}: submodules of L isomorphic to N with quotient M.
    Hallnum { l: String, m: String, n: String },
    /// Twisted Hall product of two elements.
    Product { x: String, y: String },
    /// Quantum Serre relations for every ordered vertex pair.
    Serre,
    /// The three regular components of E_{nδ} on a tame quiver.
    EComponents { n: u32 },
    /// Rank of the PBW family at a degree against the rational Hall algebra.
    PbwRank { degree: String },
    /// Hall polynomial of `target;quotient;...;sub` by interpolation.
    Hallpoly {
        spec: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u32, 3, 5, 7])]
        primes: Vec<u32>,
        #[arg(long, default_value_t = 11)]
        validate: u32,
    },
    /// Counit, coassociativity, antipode and Green's formula up to a total dimension.
    HopfCheck { bound: u32 },
    /// Extension order against hom order on one dimension vector.
    Orders { dim: String },
    /// Preprojective / regular (with tube) / preinjective part of a module.
    Classify { module: String },
    /// dim H^r_{nδ} - dim C_{nδ}.
    GradedGap { n: u32 },
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("hallq"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("hallq"))
}

fn load_quiver(path: Option<&Path>) -> Result<Arc<Quiver>> {
    let path = path.ok_or_else(|| Error::Input("--quiver is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(Quiver::from_json(&text)?))
}

/// A module given as a label expression, inline representation JSON, or a
/// path to a representation JSON file.
fn resolve_module(e: &Engine, text: &str) -> Result<ClassKey> {
    let t = text.trim();
    if t.starts_with('{') {
        return e.identify(&Representation::from_json(t, e.quiver().clone())?);
    }
    if t.ends_with(".json") && Path::new(t).is_file() {
        let body = std::fs::read_to_string(t)?;
        return e.identify(&Representation::from_json(&body, e.quiver().clone())?);
    }
    e.instantiate_key(&ModuleSpec::parse(t)?, SlotAssignment::Forward)
}

fn element_json(e: &Engine, x: &HallElement) -> Result<Value> {
    let mut terms = Vec::new();
    for (k, c) in x.terms() {
        terms.push(json!({ "class": e.label(k)?, "dim": k.dim.0, "coeff": c.to_string() }));
    }
    Ok(json!({ "q": x.q(), "terms": terms }))
}

fn element_rows(e: &Engine, name: &str, x: &HallElement) -> Result<Vec<Vec<String>>> {
    x.terms().iter().map(|(k, c)| Ok(vec![name.to_string(), e.label(k)?, c.to_string()])).collect()
}

fn element_text(e: &Engine, x: &HallElement) -> Result<String> {
    if x.is_zero() {
        return Ok("0".into());
    }
    let mut parts = Vec::new();
    for (k, c) in x.terms() {
        let c = c.to_string();
        let c = if c.contains(' ') { format!("({c})") } else { c };
        parts.push(format!("{c}*u[{}]", e.label(k)?));
    }
    Ok(parts.join(" + "))
}

fn dim_arg(e: &Engine, s: &str) -> Result<DimVector> {
    DimVector::parse(s, e.n())
}

fn enumerate(e: &Engine, dim: &str) -> Result<Report> {
    let d = dim_arg(e, dim)?;
    let table = e.classes(&d)?;
    let g = e.group_order(&d);
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut mass = 0u128;
    for k in &table.keys {
        let info = e.info(k)?;
        let aut = e.aut_order(k)?;
        mass += g / aut;
        let summands: Vec<String> = info
            .summands
            .iter()
            .map(|(s, m)| Ok(format!("{m}x{}", e.label(s)?)))
            .collect::<Result<_>>()?;
        rows.push(vec![
            e.label(k)?,
            info.dim_end.to_string(),
            aut.to_string(),
            (g / aut).to_string(),
            info.orbit_dim.to_string(),
            summands.join(" "),
        ]);
        items.push(json!({
            "class": e.label(k)?,
            "dim_end": info.dim_end,
            "aut_order": aut.to_string(),
            "orbit_size": (g / aut).to_string(),
            "orbit_dim": info.orbit_dim,
            "summands": summands,
        }));
    }
    let space = e.space_dim(&d);
    let text = {
        let mut s = format!("{} classes at {d} over F_{}\n", rows.len(), e.q());
        for r in &rows {
            s.push_str(&format!("{}  end={} aut={} orbit={}\n", r[0], r[1], r[2], r[3]));
        }
        s.push_str(&format!("orbit mass {mass} = q^{space}: {}", mass == (e.q() as u128).pow(space as u32)));
        s
    };
    Ok(Report::new(text, json!({ "dim": d.0, "q": e.q(), "classes": items, "orbit_mass": mass.to_string(), "space_dim": space }))
        .table(&["class", "dim_end", "aut_order", "orbit_size", "orbit_dim", "summands"], rows))
}

fn hallnum(e: &Engine, l: &str, m: &str, n: &str) -> Result<Report> {
    let (lk, mk, nk) = (resolve_module(e, l)?, resolve_module(e, m)?, resolve_module(e, n)?);
    let g = e.hall_number_keys(&lk, &mk, &nk)?;
    Ok(Report::new(g.to_string(), json!({ "L": e.label(&lk)?, "M": e.label(&mk)?, "N": e.label(&nk)?, "g": g.to_string() })))
}

fn product(e: &Engine, x: &str, y: &str) -> Result<Report> {
    let (a, b) = (e.parse_element(x)?, e.parse_element(y)?);
    let p = e.product(&a, &b)?;
    Ok(Report::new(element_text(e, &p)?, element_json(e, &p)?).table(&["element", "class", "coeff"], element_rows(e, "product", &p)?))
}

fn serre(e: &Engine) -> Result<Report> {
    let (failed, pairs) = e.serre_all(true)?;
    let ok = failed.is_empty();
    let text = if ok {
        format!("PASS ({pairs} vertex pairs)")
    } else {
        format!("FAIL ({} of {pairs} vertex pairs)", failed.len())
    };
    let failed_ids: Vec<[usize; 2]> = failed.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    Ok(Report::new(text, json!({ "pass": ok, "pairs": pairs, "failed": failed_ids })).failed(!ok))
}

fn e_components(e: &Engine, n: u32) -> Result<Report> {
    let c = e.e_delta_components(n)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (name, x) in [("E1", &c.e1), ("E2", &c.e2), ("E3", &c.e3)] {
        rows.extend(element_rows(e, name, x)?);
        text.push_str(&format!("{name} = {}\n", element_text(e, x)?));
    }
    let js = json!({
        "n": n,
        "E1": element_json(e, &c.e1)?,
        "E2": element_json(e, &c.e2)?,
        "E3": element_json(e, &c.e3)?,
    });
    Ok(Report::new(text, js).table(&["component", "class", "coeff"], rows))
}

fn pbw_rank(e: &Engine, degree: &str) -> Result<Report> {
    let d = dim_arg(e, degree)?;
    let (rank, members) = e.pbw_rank(&d)?;
    let target = e.rational_basis(&d)?.len();
    let ok = rank == members && rank == target;
    let text = format!("{} (rank {rank}, members {members}, dim H^r {target})", if ok { "PASS" } else { "FAIL" });
    Ok(Report::new(text, json!({ "degree": d.0, "rank": rank, "members": members, "rational_dim": target, "pass": ok }))
        .failed(!ok))
}

fn hallpoly(cli: &Cli, quiver: &Arc<Quiver>, spec: &str, primes: &[u32], validate: u32) -> Result<Report> {
    let triple = SpecTriple::parse(spec)?;
    let opts = FitOptions {
        primes: primes.to_vec(),
        validation: validate,
        guards: guards(cli)?,
        cache_dir: cache_dir(cli),
    };
    let p = fit_polynomial(quiver, &triple, &opts)?;
    let rows = p.coefficients.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.clone()]).collect();
    let text = format!("{}  [{}]", p.polynomial, p.status);
    Ok(Report::new(text, serde_json::to_value(&p)?).table(&["power", "coefficient"], rows))
}

fn hopf_check(e: &Engine, bound: u32) -> Result<Report> {
    let classes = e.classes_up_to(bound)?;
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for lam in &classes {
        let r = e.hopf_report(lam)?;
        let right = e.hopf_axiom_check_right(lam)?;
        if !(r.counit && r.coassociative && r.antipode && r.antipode_formulas_agree && right) {
            failures.push(e.label(lam)?);
        }
        reports.push(json!({
            "class": e.label(lam)?,
            "counit": r.counit,
            "coassociative": r.coassociative,
            "antipode": r.antipode,
            "antipode_right": right,
            "antipode_formulas_agree": r.antipode_formulas_agree,
        }));
    }
    let mut all = vec![e.zero_key()];
    all.extend(classes.iter().cloned());
    let mut pairs = 0usize;
    let mut green_failures = Vec::new();
    for m in &all {
        for n in &all {
            if m.dim.total() + n.dim.total() <= bound {
                pairs += 1;
                if !e.green_compatibility_check(m, n)? {
                    green_failures.push([e.label(m)?, e.label(n)?]);
                }
            }
        }
    }
    let mode = e.select_volume_mode(bound)?;
    let ok = failures.is_empty() && green_failures.is_empty();
    let mode_name = match mode {
        Some(m) => serde_json::to_value(m)?.as_str().unwrap_or_default().to_string(),
        None => "none".into(),
    };
    let text = format!(
        "{} ({} classes, {pairs} pairs; pairing volume: {mode_name})",
        if ok { "PASS" } else { "FAIL" },
        classes.len()
    );
    let rows = reports
        .iter()
        .map(|r| {
            ["class", "counit", "coassociative", "antipode", "antipode_right", "antipode_formulas_agree"]
                .iter()
                .map(|f| match &r[*f] {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                })
                .collect()
        })
        .collect();
    let js = json!({
        "pass": ok,
        "bound": bound,
        "classes": reports,
        "green_pairs": pairs,
        "green_failures": green_failures,
        "volume_mode": mode,
        "volume_modes_checked": ["dimension", "orbit_size"],
    });
    Ok(Report::new(text, js)
        .table(&["class", "counit", "coassociative", "antipode", "antipode_right", "antipode_formulas_agree"], rows)
        .failed(!ok))
}

fn orders(e: &Engine, dim: &str) -> Result<Report> {
    let d = dim_arg(e, dim)?;
    let r = e.orders_agree(&d)?;
    let ok = r.agree();
    let text = if ok {
        format!("AGREE ({} classes, {} ordered pairs)", r.classes, r.pairs)
    } else {
        format!("DISAGREE ({} of {} ordered pairs)", r.disagreements.len(), r.pairs)
    };
    let rows = r
        .relations
        .iter()
        .map(|x| {
            vec![
                x.lower.clone(),
                x.upper.clone(),
                x.ext.to_string(),
                x.hom.to_string(),
                x.witness.as_ref().map(|w| w.join(" > ")).unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Report::new(text, serde_json::to_value(&r)?)
        .table(&["lower", "upper", "ext", "hom", "witness"], rows)
        .failed(!ok))
}

fn classify(e: &Engine, module: &str) -> Result<Report> {
    let k = resolve_module(e, module)?;
    let c = e.classify_key(&k)?;
    let cj = serde_json::to_value(&c)?;
    let text = format!("{}: {}", e.label(&k)?, cj);
    Ok(Report::new(text, json!({ "class": e.label(&k)?, "classification": cj })))
}

fn graded_gap(e: &Engine, n: u32) -> Result<Report> {
    let g = e.graded_gap(n)?;
    Ok(Report::new(format!("l = {}", g.gap), serde_json::to_value(&g)?))
}

fn guards(cli: &Cli) -> Result<Guards> {
    if cli.enum_exp == 0 || cli.hom_exp == 0 {
        return Err(Error::Input("guards must be positive".into()));
    }
    Ok(Guards { enum_exp: cli.enum_exp, hom_exp: cli.hom_exp })
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        return None;
    }
    cli.cache_dir.clone().or_else(default_cache_dir)
}

fn engine(cli: &Cli, quiver: &Arc<Quiver>) -> Result<Engine> {
    let mut e = Engine::new(quiver.clone(), cli.q, guards(cli)?)?;
    if let Some(dir) = cache_dir(cli) {
        e = e.with_cache(DiskCache::open(&dir, &quiver.content_hash(), cli.q)?);
    }
    Ok(e)
}

fn run(cli: &Cli) -> Result<Report> {
    if cli.jobs > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let quiver = load_quiver(cli.quiver.as_deref())?;
    if let Command::Hallpoly { spec, primes, validate } = &cli.command {
        return hallpoly(cli, &quiver, spec, primes, *validate);
    }
    let e = engine(cli, &quiver)?;
    let report = match &cli.command {
        Command::Enumerate { dim } => enumerate(&e, dim),
        Command::Hallnum { l, m, n } => hallnum(&e, l, m, n),
        Command::Product { x, y } => product(&e, x, y),
        Command::Serre => serre(&e),
        Command::EComponents { n } => e_components(&e, *n),
        Command::PbwRank { degree } => pbw_rank(&e, degree),
        Command::HopfCheck { bound } => hopf_check(&e, *bound),
        Command::Orders { dim } => orders(&e, dim),
        Command::Classify { module } => classify(&e, module),
        Command::GradedGap { n } => graded_gap(&e, *n),
        Command::Hallpoly { .. } => unreachable!("handled above"),
    }?;
    e.flush_cache()?;
    Ok(report)
}

fn error_json(err: &Error) -> Value {
    let mut v = json!({ "error": err.kind(), "message": err.to_string(), "exit_code": err.exit_code() });
    if let Error::GuardExceeded { what, needed, limit } = err {
        v["guard"] = json!({ "what": what, "needed": needed.to_string(), "limit": limit.to_string() });
    }
    v
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(cli.format).as_bytes());
            ExitCode::from(if report.failed { 3 } else { 0 })
        }
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
