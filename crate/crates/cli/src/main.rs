use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use eqdeg::analysis::{analyze, prepare, render_spectrum, render_text, AnalysisConfig};
use eqdeg::basicdeg::basic_degree;
use eqdeg::burnside::{BurnsideRing, FiniteBurnside};
use eqdeg::chartab::CharacterTable;
use eqdeg::error::EqError;
use eqdeg::gamma::GammaPrime;
use eqdeg::o2gamma::O2Gamma;
use eqdeg::permgroup::{FiniteGroup, Group, SubgroupClassLattice};
use eqverify::pipeline::{system_from, verify, VerifyOptions, VerifyReport};
use eqverify::VerifyError;

const CACHE_ENV: &str = "EQDEG_CACHE_DIR";

#[derive(Parser)]
#[command(name = "eqdeg", version, about = "Equivariant degree analysis of symmetric reversible delay systems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Largest Fourier mode in the sign table.
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Mode multiplier for the resonant case.
    #[arg(long, global = true)]
    s: Option<usize>,
    /// Newton tolerance for `verify`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print JSON only.
    #[arg(long, global = true)]
    json_only: bool,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Full degree analysis; writes report.json and report.txt.
    Analyze {
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Conjugacy classes of subgroups with Weyl orders.
    Lattice { group: String },
    /// Multiplication table of the Burnside ring.
    Burnside { group: String },
    /// Basic degree of the irreducible (k, l) of O(2) x G x Z2, with l counted from 1.
    BasicDeg { group: String, k: usize, l: usize },
    /// Sign table of xi_(k,l).
    Spectrum { config: PathBuf },
    /// Newton corroboration along the negative spectral blocks.
    Verify { config: PathBuf },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        let core = cause
            .downcast_ref::<EqError>()
            .or_else(|| match cause.downcast_ref::<VerifyError>() {
                Some(VerifyError::Core(c)) => Some(c),
                _ => None,
            });
        if let Some(c) = core {
            return match c {
                EqError::Degenerate(_) | EqError::ResonantS { .. } => 2,
                EqError::Recurrence(_) | EqError::Internal(_) | EqError::LatticeMismatch => 1,
                _ => 3,
            };
        }
        if cause.downcast_ref::<VerifyError>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads)
        .build_global()
    {
        eprintln!("warning: thread pool: {}", e);
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load_config(path: &Path, c: &Common) -> anyhow::Result<(String, AnalysisConfig)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg = AnalysisConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    if c.kmax.is_some() {
        cfg.options.k_max = c.kmax;
    }
    if c.s.is_some() {
        cfg.options.s = c.s;
    }
    if let Some(t) = c.tol {
        cfg.options.tol = t;
    }
    Ok((text, cfg))
}

fn to_json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let c = &cli.common;
    match &cli.command {
        Command::Analyze { config, out } => run_analyze(config, out, c),
        Command::Lattice { group } => run_lattice(group, c.json_only),
        Command::Burnside { group } => run_burnside(group, c.json_only),
        Command::BasicDeg { group, k, l } => run_basic_deg(group, *k, *l, c.json_only),
        Command::Spectrum { config } => {
            let (_, cfg) = load_config(config, c)?;
            let p = prepare(&cfg)?;
            if c.json_only {
                to_json(&p.spectrum)
            } else {
                let labels: Vec<String> = (0..p.table.rows.len()).map(|l| format!("{}", l + 1)).collect();
                Ok(render_spectrum(&p.spectrum, &labels))
            }
        }
        Command::Verify { config } => run_verify(config, c),
    }
}

fn cache_key(text: &str, c: &Common) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update(text.as_bytes());
    h.update(format!("{:?}|{:?}|{:?}", c.kmax, c.s, c.tol).as_bytes());
    h.finalize().iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{:02x}", b);
        s
    })
}

fn run_analyze(config: &Path, out: &Path, c: &Common) -> anyhow::Result<String> {
    let (text, cfg) = load_config(config, c)?;
    let with_verify = cfg.options.verify && cfg.system.is_some();
    let cached = std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(cache_key(&text, c)));
    let hit = cached.as_ref().filter(|d| !with_verify && d.join("report.json").is_file());
    let (json, mut txt) = match hit {
        Some(d) => (
            std::fs::read_to_string(d.join("report.json"))?,
            std::fs::read_to_string(d.join("report.txt"))?,
        ),
        None => {
            let a = analyze(&cfg)?;
            let pair = (to_json(&a.report)?, render_text(&a.report));
            if let Some(d) = &cached {
                std::fs::create_dir_all(d)?;
                std::fs::write(d.join("report.json"), &pair.0)?;
                std::fs::write(d.join("report.txt"), &pair.1)?;
            }
            std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
            if with_verify {
                let raw = cfg.system.as_ref().expect("checked above");
                let spec = system_from(&a, raw)?;
                let mut opts = VerifyOptions::default();
                if let Some(t) = c.tol {
                    opts.newton.tol = t;
                }
                let rep = verify(&a, &spec, &opts)?;
                std::fs::write(out.join("verify.json"), to_json(&rep)?)?;
                let mut pair = pair;
                pair.1.push_str("\nnumerical corroboration (verify.json):\n");
                pair.1.push_str(&render_verify(&rep));
                pair
            } else {
                pair
            }
        }
    };
    if !txt.ends_with('\n') {
        txt.push('\n');
    }
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    std::fs::write(out.join("report.json"), &json)?;
    std::fs::write(out.join("report.txt"), &txt)?;
    Ok(if c.json_only { json } else { txt })
}

fn group_with_table(name: &str) -> anyhow::Result<(Group, CharacterTable)> {
    let g = Group::preset(name)?;
    let t = CharacterTable::bundled(name, &g)?;
    Ok((g, t))
}

fn lattice_names(name: &str, g: &Group) -> anyhow::Result<Option<GammaPrime>> {
    Ok(match CharacterTable::bundled(name, g) {
        Ok(t) => Some(GammaPrime::new(g.clone(), t)?),
        Err(EqError::Unknown(_)) => None,
        Err(e) => return Err(e.into()),
    })
}

fn run_lattice(name: &str, json_only: bool) -> anyhow::Result<String> {
    let g = Group::preset(name)?;
    let gp = lattice_names(name, &g)?;
    let own;
    let lat = match &gp {
        Some(gp) => &gp.base_lattice,
        None => {
            own = SubgroupClassLattice::build(&g);
            &own
        }
    };
    let names: Vec<String> = lat
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| match &gp {
            Some(gp) => gp.base_name(&c.representative),
            None => format!("H{}", i),
        })
        .collect();
    if json_only {
        let rows: Vec<serde_json::Value> = lat
            .classes
            .iter()
            .zip(&names)
            .map(|(c, n)| {
                serde_json::json!({
                    "name": n,
                    "order": c.order,
                    "class_size": c.class_size,
                    "normalizer_order": c.normalizer_order,
                    "weyl_order": c.weyl_order,
                    "representative": c.representative.elements,
                })
            })
            .collect();
        return to_json(&serde_json::json!({"group": name, "order": g.order(), "classes": rows}));
    }
    let mut s = String::new();
    let subgroups: usize = lat.classes.iter().map(|c| c.class_size).sum();
    let _ = writeln!(
        s,
        "{} (order {}): {} subgroups in {} conjugacy classes",
        name,
        g.order(),
        subgroups,
        lat.len()
    );
    let _ = writeln!(s, "{:>4} {:>12} {:>6} {:>6} {:>6}", "#", "name", "|H|", "conj", "|W|");
    for (i, (c, n)) in lat.classes.iter().zip(&names).enumerate() {
        let _ = writeln!(s, "{:>4} {:>12} {:>6} {:>6} {:>6}", i, n, c.order, c.class_size, c.weyl_order);
    }
    Ok(s)
}

fn run_burnside(name: &str, json_only: bool) -> anyhow::Result<String> {
    let g = Group::preset(name)?;
    let gp = lattice_names(name, &g)?;
    let own = SubgroupClassLattice::build(&g);
    let mut ring = FiniteBurnside::new(&g, &own);
    if let Some(gp) = &gp {
        ring = ring.with_names(own.classes.iter().map(|c| gp.base_name(&c.representative)).collect());
    }
    let n = own.len();
    let table: Vec<Vec<String>> = (0..n)
        .map(|h| {
            (0..n)
                .map(|k| ring.render(&ring.element(ring.mul_classes(h, k))))
                .collect()
        })
        .collect();
    if json_only {
        let names: Vec<String> = (0..n).map(|h| ring.class_name(h)).collect();
        return to_json(&serde_json::json!({"group": name, "classes": names, "products": table}));
    }
    let mut s = String::new();
    let _ = writeln!(s, "Burnside ring of {} ({} classes)", name, n);
    for h in 0..n {
        for k in h..n {
            let _ = writeln!(s, "({}) * ({}) = {}", ring.class_name(h), ring.class_name(k), table[h][k]);
        }
    }
    Ok(s)
}

fn run_basic_deg(name: &str, k: usize, l: usize, json_only: bool) -> anyhow::Result<String> {
    let (g, t) = group_with_table(name)?;
    if l == 0 || l > t.rows.len() {
        return Err(EqError::Config(format!("l must lie in 1..={}", t.rows.len())).into());
    }
    let reg = O2Gamma::for_kmax(GammaPrime::new(g, t)?, k.max(1))?;
    let d = basic_degree(&reg, k, l - 1)?;
    let sq = reg.ring_mul(&d.element, &d.element)?;
    if json_only {
        return to_json(&serde_json::json!({
            "group": name,
            "k": k,
            "l": l,
            "degree": reg.to_json(&d.element),
            "maximal": d.orbit_types.maximal.iter().map(|&h| reg.class_json(h)).collect::<Vec<_>>(),
            "square_is_unit": sq == reg.unit(),
        }));
    }
    let mut s = String::new();
    let _ = writeln!(s, "deg_V({},{}) = {}", k, l, reg.render(&d.element));
    let names: Vec<String> = d.orbit_types.maximal.iter().map(|&h| reg.name(h)).collect();
    let _ = writeln!(s, "maximal orbit types: {}", names.join(", "));
    let _ = writeln!(s, "square equals unit: {}", sq == reg.unit());
    Ok(s)
}

fn run_verify(config: &Path, c: &Common) -> anyhow::Result<String> {
    let (_, cfg) = load_config(config, c)?;
    let raw = cfg
        .system
        .as_ref()
        .ok_or_else(|| EqError::Config("config has no `system` block".into()))?;
    let a = analyze(&cfg)?;
    let spec = system_from(&a, raw)?;
    let mut opts = VerifyOptions::default();
    if let Some(t) = c.tol {
        opts.newton.tol = t;
    }
    let rep = verify(&a, &spec, &opts)?;
    if c.json_only {
        return to_json(&rep);
    }
    Ok(render_verify(&rep))
}

fn render_verify(rep: &VerifyReport) -> String {
    let mut s = String::new();
    if let Some(v) = &rep.reversibility_violation {
        let _ = writeln!(s, "warning: {}", v);
    }
    if let Some(v) = &rep.oddness_violation {
        let _ = writeln!(s, "warning: {}", v);
    }
    let _ = writeln!(
        s,
        "a-priori sample check: {} of {} samples with x.f(x, y) <= 0",
        rep.a3.negative_samples, rep.a3.samples
    );
    for r in &rep.runs {
        let _ = writeln!(
            s,
            "block (k={}, l={}): residual {:.3e} after {} iterations; {}",
            r.k,
            r.l + 1,
            r.residual,
            r.iterations,
            r.verdict
        );
    }
    let _ = writeln!(s, "{}", rep.note);
    s
}
