use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bprod_core::classify::{classify_simple, Frontier};
use bprod_core::dimensions::dim_report_symbol;
use bprod_core::eisenstein::{to_f64, EisensteinProvider};
use bprod_core::genus::GenusSymbol;
use bprod_core::lifts::{
    coefficient_formula_check, product_weight_from_constant, verify_modularity, LiftCase, DEFAULT_SAMPLE_POINTS,
};
use bprod_core::orthoprod::{product_expansion_cone_case, weyl_group_expansion, ProductCase};
use bprod_core::qseries::{eta_quotient, QSeries};
use bprod_core::search::search_singular;
use bprod_core::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::{json, Value};

/// Environment variable naming a directory for cached eta expansions.
const CACHE_ENV: &str = "BPROD_CACHE_DIR";

#[derive(Parser)]
#[command(name = "bprod", version, about = "Simple lattices and singular-weight Borcherds products")]
struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of modular and cusp forms for ρ* of a genus.
    Dim {
        genus: String,
        #[arg(long)]
        k: i64,
    },
    /// Gauss sums G(n) = Σ e(n·Q(γ)) and the Milgram check.
    Gauss {
        genus: String,
        #[arg(long, default_value_t = 1)]
        n: i64,
    },
    /// Classify simple lattices of square-free level.
    Classify {
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        /// Write the run manifest here (TSV mode).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Eisenstein coefficients q(γ, m).
    Eis {
        #[arg(long)]
        genus: String,
        #[arg(long, default_value_t = 5)]
        mmax: i64,
    },
    /// Principal parts of holomorphic products of singular weight.
    SearchSingular {
        #[arg(long)]
        genus: String,
        /// Most negative exponent considered.
        #[arg(long, default_value = "-3")]
        m_floor: String,
    },
    /// Γ₁(N)-lift of the eta quotient for the level 3 or level 2 example.
    Lift {
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 20)]
        trunc: i64,
    },
    /// Product expansion at a level N cusp.
    ExpandProduct {
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 6)]
        height: i64,
    },
    /// Quick end-to-end checks.
    Selftest,
}

fn parse_genus(s: &str) -> Result<GenusSymbol> {
    s.parse()
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Write to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")));
}

/// f for a lift case, read from or written to the cache directory if set.
fn cached_eta(case: LiftCase, trunc: Rational64) -> Result<(QSeries, Option<PathBuf>)> {
    let spec = case.spec();
    let Some(dir) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
        return Ok((eta_quotient(&spec, trunc)?, None));
    };
    let tag: Vec<String> = spec.r.iter().map(|(d, r)| format!("{d}_{r}")).collect();
    let path = dir.join(format!("eta_N{}_{}_t{}.txt", spec.level, tag.join("_"), trunc).replace('/', "over"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(s) = text.trim().parse::<QSeries>() {
            return Ok((s, Some(path)));
        }
    }
    let s = eta_quotient(&spec, trunc)?;
    if std::fs::create_dir_all(&dir).is_ok() {
        let _ = std::fs::write(&path, s.to_string());
    }
    Ok((s, Some(path)))
}

fn cmd_dim(genus: &str, k: i64) -> Result<Value> {
    let g = parse_genus(genus)?;
    Ok(dim_report_symbol(&g, k)?.to_json(&g.to_string()))
}

fn cmd_gauss(genus: &str, n: i64) -> Result<Value> {
    let g = parse_genus(genus)?;
    let d = g.form();
    Ok(json!({
        "genus": g.to_string(),
        "n": n,
        "order": d.order().to_string(),
        "gauss_sum": d.gauss_sum(n).to_string(),
        "normalized": d.normalized_gauss(n).to_string(),
        "signature_mod8": g.signature_mod8(),
        "milgram_ok": g.milgram_ok(),
    }))
}

fn cmd_classify(level: Option<u64>, nmax: Option<u32>, format: Format, manifest: Option<PathBuf>) -> Result<()> {
    let mut frontier = Frontier::default();
    frontier.level = level;
    if let Some(n) = nmax {
        frontier.n_max = n;
    }
    let start = Instant::now();
    let c = classify_simple(&frontier)?;
    let mut m = c.manifest();
    m["command"] = json!("classify");
    m["seconds"] = json!(start.elapsed().as_secs_f64());
    m["version"] = json!(env!("CARGO_PKG_VERSION"));
    match format {
        Format::Tsv => {
            emit(&c.tsv());
            if let Some(p) = manifest {
                std::fs::write(&p, serde_json::to_string_pretty(&m).expect("serializable"))
                    .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display())))?;
            }
        }
        Format::Json => print_json(&json!({"manifest": m, "lattices": c.lattices})),
    }
    Ok(())
}

fn cmd_eis(genus: &str, mmax: i64) -> Result<Value> {
    let g = parse_genus(genus)?;
    let p = EisensteinProvider::for_symbol(&g)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut rows = Vec::new();
    for gamma in p.form.elements() {
        let zero = gamma.iter().all(|&x| x == 0);
        let norm = p.form.q_value(&gamma);
        if !p.covers(&gamma) || !seen.insert((zero, norm)) {
            continue;
        }
        let base = -norm - (-norm).floor();
        let mut m = base;
        while m <= Rational64::from_integer(mmax) {
            let q = p.q(&gamma, m)?;
            rows.push(json!({
                "gamma": gamma, "Q": norm.to_string(), "m": m.to_string(),
                "q": q.to_string(), "approx": to_f64(&q),
            }));
            m += 1;
        }
    }
    Ok(json!({"genus": g.to_string(), "weight": p.weight(), "coefficients": rows}))
}

fn cmd_search(genus: &str, m_floor: &str) -> Result<Value> {
    let g = parse_genus(genus)?;
    let floor = parse_rational(m_floor)?;
    Ok(search_singular(&g, floor)?.to_json())
}

fn cmd_lift(case: &str, trunc: i64) -> Result<Value> {
    let case = LiftCase::parse(case)?;
    if trunc < 1 {
        return Err(Error::Invalid("trunc must be positive".into()));
    }
    let t = Rational64::from_integer(trunc);
    let (f, cache) = cached_eta(case, t)?;
    let form = case.build(t)?;
    let gamma = case.gamma(&form.form);
    let formula = coefficient_formula_check(&form, case, &gamma, t)?;
    let points: Vec<Complex64> = DEFAULT_SAMPLE_POINTS.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
    let modularity = verify_modularity(&form, &points, 1e-8);
    let mut v = form.to_json();
    v["case"] = json!(format!("{case:?}").to_lowercase());
    v["genus"] = json!(case.symbol().to_string());
    v["gamma"] = json!(gamma);
    v["eta_quotient"] = json!(f.to_string());
    v["eta_cache"] = json!(cache.map(|p| p.display().to_string()));
    v["product_weight"] = json!(product_weight_from_constant(&form).to_string());
    v["formula_check"] = json!({"checked": formula.checked, "mismatches": formula.mismatches.len()});
    v["modularity"] = json!({
        "status": format!("{:?}", modularity.status).to_lowercase(),
        "max_error": modularity.points.iter().map(|p| p.error).fold(0.0, f64::max),
    });
    Ok(v)
}

fn cmd_expand(case: &str, height: i64) -> Result<Value> {
    let case = ProductCase::parse(case)?;
    if height < 1 {
        return Err(Error::Invalid("height must be positive".into()));
    }
    let h = Rational64::from_integer(height);
    let k = case.cusp().k;
    if case.is_weyl() {
        Ok(weyl_group_expansion(case, None, h)?.to_json(&k))
    } else {
        Ok(product_expansion_cone_case(case, None, h)?.to_json(&k))
    }
}

fn cmd_selftest() -> Result<bool> {
    let mut ok = true;
    let mut line = |name: &str, pass: bool| {
        emit(&format!("{}\t{name}\n", if pass { "PASS" } else { "FAIL" }));
        ok &= pass;
    };
    let g: GenusSymbol = "II_(2,4)(3^+5)".parse()?;
    line("dimS(3^+5, k=3) = 0", dim_report_symbol(&g, 3)?.dim_s_int()? == 0);
    let p = EisensteinProvider::for_symbol(&g)?;
    let gamma = p.form.elements().find(|x| p.form.q_value(x) == Rational64::new(2, 3)).expect("element");
    let q = p.q(&gamma, Rational64::new(1, 3))?;
    line("q(γ, 1/3) = -2 on 3^+5", q == num_rational::BigRational::from_integer((-2).into()));
    let s = search_singular(&g, Rational64::from_integer(-3))?;
    line("one singular-weight candidate on 3^+5", s.candidates.len() == 1);
    let f = LiftCase::Level3.build(Rational64::from_integer(4))?;
    line("level 3 lift has c(0,0) = 2", f.constant_term() == 2.into());
    let cone = product_expansion_cone_case(ProductCase::Level3Cone, None, Rational64::from_integer(5))?;
    line("level 3 cone expansion has singular support", cone.verdict());
    let weyl = weyl_group_expansion(ProductCase::Level3Weyl, None, Rational64::from_integer(6))?;
    line("level 3 Weyl chamber identity", weyl.verdict());
    Ok(ok)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    }
    let out = match cli.command {
        Command::Dim { genus, k } => cmd_dim(&genus, k)?,
        Command::Gauss { genus, n } => cmd_gauss(&genus, n)?,
        Command::Classify {
            level,
            nmax,
            format,
            manifest,
        } => {
            cmd_classify(level, nmax, format, manifest)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Eis { genus, mmax } => cmd_eis(&genus, mmax)?,
        Command::SearchSingular { genus, m_floor } => cmd_search(&genus, &m_floor)?,
        Command::Lift { case, trunc } => cmd_lift(&case, trunc)?,
        Command::ExpandProduct { case, height } => cmd_expand(&case, height)?,
        Command::Selftest => {
            return Ok(if cmd_selftest()? { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    };
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
