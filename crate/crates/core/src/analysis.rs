//! Configuration schema and the end-to-end pipeline: group and table,
//! isotypic decomposition, linearization, spectrum, degree and conclusions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::burnside::BurnsideRing;
use crate::chartab::{CharacterTable, IsotypicDecomposition, TableSpec};
use crate::cyclotomic::{parse_rational, Rational};
use crate::ddedeg::{
    assemble_omega, mu_from_matrices, required_modes, sign_table, parity_backed_conclusions, resonant_conclusions,
    Conclusion, LinearizationData, Matrix, MatrixRep, SpectralTable,
};
use crate::basicdeg::Factor;
use crate::error::{EqError, Result};
use crate::gamma::GammaPrime;
use crate::o2gamma::O2Gamma;
use crate::permgroup::{FiniteGroup, Group};

pub const NAMING_NOTE: &str = "class names are generated from explicit generators (D: vertex reflections, \
D̃: edge reflections, ^p: contains the antipode, ^-/^z/^d: twisted by the antipode) and may differ from \
other naming dictionaries; the fingerprint (|H|, |Z|, |L|, |R|, |K|, |W|) identifies a class";

/// An exact rational read from a JSON number or string (`"6.9"`, `"-11/10"`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(d)?;
        let s = match &v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            _ => return Err(D::Error::custom(format!("expected a number, got {}", v))),
        };
        parse_rational(&s)
            .map(Exact)
            .ok_or_else(|| D::Error::custom(format!("not a rational number: {}", s)))
    }
}

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

pub type ExactMatrix = Vec<Vec<Exact>>;

fn to_matrix(m: &ExactMatrix) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x.0).collect()).collect()
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    /// `Z<n>`, `D<n>` or `S<n>`.
    #[serde(default)]
    pub preset: Option<String>,
    /// Cycle-notation generators, e.g. `"(1 2 3 4 5 6)"`.
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub degree: Option<usize>,
    /// Name of a bundled table for generator input; words refer to `a`, `b`, ….
    #[serde(default)]
    pub table_name: Option<String>,
    #[serde(default)]
    pub table: Option<TableSpec>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepConfig {
    /// The action of the group on its own points.
    #[default]
    Natural,
    /// Images of the generators as permutations of `degree` coordinates.
    Permutation { generators: Vec<String>, degree: usize },
    /// Matrices of the generators.
    Matrices { generators: Vec<ExactMatrix> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LinConfig {
    /// `μ_j^l`, one row per irreducible (all of them, or only those present).
    Mu(Vec<Vec<Exact>>),
    /// `A_0, …, A_{m-1}`.
    Matrices(Vec<ExactMatrix>),
    /// `A_j = scales[j] · base`.
    Scaled { base: ExactMatrix, scales: Vec<Exact> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub verify: bool,
}

fn default_tol() -> f64 {
    1e-9
}

impl Default for Options {
    fn default() -> Self {
        Options {
            k_max: None,
            s: None,
            tol: default_tol(),
            verify: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub group: GroupConfig,
    #[serde(default)]
    pub representation: RepConfig,
    pub m: usize,
    pub linearization: LinConfig,
    #[serde(default)]
    pub options: Options,
    /// Optional nonlinear system for the numerical verifier; kept opaque here.
    #[serde(default)]
    pub system: Option<serde_json::Value>,
}

impl AnalysisConfig {
    pub fn from_json(text: &str) -> Result<AnalysisConfig> {
        serde_json::from_str(text).map_err(|e| EqError::Config(e.to_string()))
    }
}

/// Builds the group and its character table.
pub fn load_group(cfg: &GroupConfig) -> Result<(Group, CharacterTable)> {
    let group = match (&cfg.preset, &cfg.generators) {
        (Some(p), None) => Group::preset(p)?,
        (None, Some(gens)) => {
            let g: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
            Group::from_cycle_strings(&g, cfg.degree)?
        }
        _ => return Err(EqError::Config("group needs exactly one of preset or generators".into())),
    };
    let table = if let Some(spec) = &cfg.table {
        CharacterTable::bind(spec, &group)?
    } else {
        let name = cfg
            .table_name
            .clone()
            .or_else(|| cfg.preset.clone())
            .ok_or_else(|| EqError::Config("generator input needs table or table_name".into()))?;
        CharacterTable::bundled(&name, &group)?
    };
    Ok((group, table))
}

pub fn load_representation(cfg: &RepConfig, group: &Group) -> Result<MatrixRep> {
    match cfg {
        RepConfig::Natural => Ok(MatrixRep::permutation(group)),
        RepConfig::Permutation { generators, degree } => {
            if generators.len() != group.generators().len() {
                return Err(EqError::Config(format!(
                    "{} generator images for {} generators",
                    generators.len(),
                    group.generators().len()
                )));
            }
            let mats = generators
                .iter()
                .map(|s| {
                    let p = crate::permgroup::Permutation::parse_cycles(s, *degree)?;
                    let mut m = vec![vec![Rational::from_integer(0); *degree]; *degree];
                    for i in 0..*degree {
                        m[p.apply(i)][i] = Rational::from_integer(1);
                    }
                    Ok(m)
                })
                .collect::<Result<Vec<_>>>()?;
            MatrixRep::from_generators(group, &mats)
        }
        RepConfig::Matrices { generators } => {
            let mats: Vec<Matrix> = generators.iter().map(to_matrix).collect();
            MatrixRep::from_generators(group, &mats)
        }
    }
}

/// Reads `μ` from any of the accepted forms.
pub fn load_linearization(
    cfg: &LinConfig,
    m: usize,
    rep: &MatrixRep,
    table: &CharacterTable,
    decomp: &IsotypicDecomposition,
) -> Result<LinearizationData> {
    match cfg {
        LinConfig::Mu(rows) => {
            let nl = table.rows.len();
            let present = decomp.present();
            let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| x.0).collect()).collect();
            let full = if rows.len() == nl {
                rows
            } else if rows.len() == present.len() {
                let mut full = vec![vec![Rational::from_integer(0); m]; nl];
                for (r, &l) in rows.into_iter().zip(&present) {
                    full[l] = r;
                }
                full
            } else {
                return Err(EqError::Config(format!(
                    "mu needs {} rows (or {} for the irreducibles present), got {}",
                    nl,
                    present.len(),
                    rows.len()
                )));
            };
            LinearizationData::new(m, full)
        }
        LinConfig::Matrices(mats) => {
            if mats.len() != m {
                return Err(EqError::Config(format!("{} matrices for m = {}", mats.len(), m)));
            }
            let mats: Vec<Matrix> = mats.iter().map(to_matrix).collect();
            mu_from_matrices(rep, table, &mats)
        }
        LinConfig::Scaled { base, scales } => {
            if scales.len() != m {
                return Err(EqError::Config(format!("{} scales for m = {}", scales.len(), m)));
            }
            let b = to_matrix(base);
            let mats: Vec<Matrix> = scales
                .iter()
                .map(|s| b.iter().map(|r| r.iter().map(|x| x * s.0).collect()).collect())
                .collect();
            mu_from_matrices(rep, table, &mats)
        }
    }
}

/// Everything up to and including the sign table.
pub struct Prepared {
    pub group: Group,
    pub table: CharacterTable,
    pub rep: MatrixRep,
    pub character: Vec<String>,
    pub decomposition: IsotypicDecomposition,
    pub data: LinearizationData,
    pub spectrum: SpectralTable,
}

pub fn prepare(cfg: &AnalysisConfig) -> Result<Prepared> {
    let (group, table) = load_group(&cfg.group)?;
    let rep = load_representation(&cfg.representation, &group)?;
    let chi = rep.character(&table);
    let decomposition = table.isotypic_multiplicities(&chi)?;
    let flags = table.real_type_flags(&group);
    for l in decomposition.present() {
        if !flags[l] {
            return Err(EqError::NotRealType(table.row_names[l].clone()));
        }
    }
    let data = load_linearization(&cfg.linearization, cfg.m, &rep, &table, &decomposition)?;
    let spectrum = sign_table(&data, &decomposition, cfg.options.k_max)?;
    Ok(Prepared {
        character: chi.iter().map(|c| c.to_string()).collect(),
        group,
        table,
        rep,
        decomposition,
        data,
        spectrum,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub group: String,
    pub group_order: usize,
    pub irreducibles: Vec<String>,
    pub character: Vec<String>,
    pub multiplicities: Vec<usize>,
    pub m: usize,
    pub mu: LinearizationData,
    pub spectrum: SpectralTable,
    pub degenerate: bool,
    pub s: Option<usize>,
    pub factors: Vec<Factor>,
    pub odd_factors: usize,
    pub degree: Option<serde_json::Value>,
    pub omega: Option<serde_json::Value>,
    pub omega_text: Option<String>,
    pub conclusions: Vec<Conclusion>,
    /// Indices into `conclusions` backed by an odd survival parity.
    pub parity_backed: Vec<usize>,
    pub classes: Vec<serde_json::Value>,
    pub naming_note: &'static str,
}

pub struct Analysis {
    pub prepared: Prepared,
    pub registry: O2Gamma,
    pub report: AnalysisReport,
}

/// Runs the full pipeline. With a resonant spectrum an `s` is required.
pub fn analyze(cfg: &AnalysisConfig) -> Result<Analysis> {
    let prepared = prepare(cfg)?;
    let sp = &prepared.spectrum;
    let s = cfg.options.s;
    let modes = required_modes(sp, if sp.is_degenerate() { s } else { None });
    let lcm = modes.iter().fold(1usize, |a, &k| num_integer::lcm(a, k));
    let gp = GammaPrime::new(prepared.group.clone(), prepared.table.clone())?;
    let registry = O2Gamma::new(gp, lcm)?;
    let factors = sp.factors();
    let odd_factors = factors.iter().filter(|f| f.mult % 2 == 1).count();
    let (degree, omega, omega_text, conclusions, parity_backed) = if sp.is_degenerate() {
        let s = s.ok_or_else(|| EqError::Degenerate(sp.resonant.iter().map(|&k| k as u32).collect()))?;
        let c = resonant_conclusions(&registry, sp, s)?;
        let idx = (0..c.len()).collect();
        (None, None, None, c, idx)
    } else {
        let rep = assemble_omega(&registry, sp)?;
        let backed = parity_backed_conclusions(&rep);
        let idx = rep
            .conclusions
            .iter()
            .enumerate()
            .filter(|(_, c)| backed.iter().any(|b| b.class == c.class && b.k == c.k))
            .map(|(i, _)| i)
            .collect();
        (
            Some(registry.to_json(&rep.degree)),
            Some(registry.to_json(&rep.omega)),
            Some(registry.render(&rep.omega)),
            rep.conclusions,
            idx,
        )
    };
    let mut ids: Vec<usize> = conclusions.iter().map(|c| c.class).collect();
    ids.sort_unstable();
    ids.dedup();
    let report = AnalysisReport {
        name: cfg.name.clone(),
        group: prepared.table.name.clone(),
        group_order: prepared.group.order(),
        irreducibles: prepared.table.row_names.clone(),
        character: prepared.character.clone(),
        multiplicities: prepared.decomposition.multiplicities.clone(),
        m: cfg.m,
        mu: prepared.data.clone(),
        spectrum: prepared.spectrum.clone(),
        degenerate: prepared.spectrum.is_degenerate(),
        s: if prepared.spectrum.is_degenerate() { s } else { None },
        factors,
        odd_factors,
        degree,
        omega,
        omega_text,
        conclusions,
        parity_backed,
        classes: ids.into_iter().map(|h| registry.class_json(h)).collect(),
        naming_note: NAMING_NOTE,
    };
    Ok(Analysis {
        prepared,
        registry,
        report,
    })
}

/// Sign grid with the irreducibles present as columns.
pub fn render_spectrum(sp: &SpectralTable, labels: &[String]) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:>4}", "k\\l");
    for &l in &sp.irreps {
        let _ = write!(s, " {:>10}", labels[l]);
    }
    s.push('\n');
    for k in 0..=sp.k_max {
        let _ = write!(s, "{:>4}", k);
        for &l in &sp.irreps {
            let _ = write!(s, " {:>1} {:>8.4}", sp.signs[k][l].symbol(), sp.xi[k][l]);
        }
        s.push('\n');
    }
    s
}

pub fn render_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    if let Some(n) = &r.name {
        let _ = writeln!(s, "{}", n);
    }
    let _ = writeln!(s, "group {} (order {}), m = {}", r.group, r.group_order, r.m);
    let _ = writeln!(s, "character: ({})", r.character.join(", "));
    let present: Vec<String> = r
        .multiplicities
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0)
        .map(|(l, m)| format!("{}^{}", r.irreducibles[l], m))
        .collect();
    let _ = writeln!(s, "isotypic components: {}", present.join(" + "));
    let _ = writeln!(s, "mu_j^l:");
    for &l in &r.spectrum.irreps {
        let row: Vec<String> = r.mu.mu[l].iter().map(|q| q.to_string()).collect();
        let _ = writeln!(s, "  {:>6}: {}", r.irreducibles[l], row.join(" "));
    }
    let _ = writeln!(s, "sign and value of xi_(k,l):");
    s.push_str(&render_spectrum(&r.spectrum, &r.irreducibles));
    if r.degenerate {
        let _ = writeln!(s, "resonant modes: {:?}", r.spectrum.resonant);
        if let Some(sv) = r.s {
            let _ = writeln!(s, "degenerate case with s = {}: conclusions from odd multiples of s", sv);
        }
    } else {
        let blocks: Vec<String> = r
            .factors
            .iter()
            .map(|f| format!("({},{})^{}", f.k, r.irreducibles[f.l], f.mult))
            .collect();
        let _ = writeln!(
            s,
            "negative blocks: {} ({} with odd multiplicity): {}",
            r.factors.len(),
            r.odd_factors,
            blocks.join(" ")
        );
        if let Some(o) = &r.omega_text {
            let _ = writeln!(s, "omega = {}", o);
        }
    }
    let _ = writeln!(s, "guaranteed extended orbit types: {}", r.conclusions.len());
    for (i, c) in r.conclusions.iter().enumerate() {
        let irr: Vec<&str> = c.irreps.iter().map(|&l| r.irreducibles[l].as_str()).collect();
        let coeff = c.coefficient.map(|v| format!("{:+}", v)).unwrap_or_else(|| "n/a".into());
        let _ = writeln!(
            s,
            "  k={} [{}] ({})  coeff {}  x_o {}  parity {}{}  fingerprint {:?}",
            c.k,
            irr.join(","),
            c.name,
            coeff,
            c.x_o,
            c.parity,
            if r.parity_backed.contains(&i) { " (odd)" } else { "" },
            c.fingerprint
        );
    }
    let _ = writeln!(s, "note: {}", r.naming_note);
    s
}
