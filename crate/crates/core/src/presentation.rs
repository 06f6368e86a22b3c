//! Presentations of the P-partition ring: the toric, graded and initial
//! generator families, the standard P-partition ideal, and export to text
//! and Macaulay2 input.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{for_each_extension, LinearExtension};
use crate::partitions::delta_data;
use crate::poset::{IdealSet, PiPair, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealKind {
    Toric,
    Graded,
    Initial,
}

impl std::str::FromStr for IdealKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<IdealKind> {
        match s {
            "toric" => Ok(IdealKind::Toric),
            "graded" => Ok(IdealKind::Graded),
            "initial" => Ok(IdealKind::Initial),
            other => Err(Error::Arg(format!("unknown ideal kind `{other}`"))),
        }
    }
}

/// `lhs - rhs`, or the monomial `lhs` when `rhs` is empty. Monomials are
/// lists of variables `U_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzGenerator {
    pub pair: PiPair,
    pub kind: IdealKind,
    pub lhs: Vec<IdealSet>,
    pub rhs: Vec<IdealSet>,
}

impl SyzGenerator {
    pub fn is_binomial(&self) -> bool {
        !self.rhs.is_empty()
    }

    /// The polynomial as text, e.g. `U15*U126 - U1256*U1`.
    pub fn render(&self, n: usize) -> String {
        let mono = |m: &[IdealSet]| {
            m.iter()
                .map(|&j| variable_name(j, n))
                .collect::<Vec<_>>()
                .join("*")
        };
        if self.rhs.is_empty() {
            mono(&self.lhs)
        } else {
            format!("{} - {}", mono(&self.lhs), mono(&self.rhs))
        }
    }
}

fn generator(pair: PiPair, kind: IdealKind) -> SyzGenerator {
    let lhs = vec![pair.j1, pair.j2];
    let rhs = match kind {
        IdealKind::Toric => {
            let mut r = vec![pair.union];
            r.extend(pair.intersection_components.iter().copied());
            r
        }
        IdealKind::Graded if pair.intersection_connected() => {
            vec![pair.union, pair.intersection()]
        }
        IdealKind::Graded | IdealKind::Initial => Vec::new(),
    };
    SyzGenerator {
        pair,
        kind,
        lhs,
        rhs,
    }
}

/// One generator of the chosen ideal per pair in `Π(P)`.
pub fn generators(p: &Poset, kind: IdealKind) -> Vec<SyzGenerator> {
    p.nontrivial_pairs()
        .into_iter()
        .map(|pair| generator(pair, kind))
        .collect()
}

pub fn toric_generators(p: &Poset) -> Vec<SyzGenerator> {
    generators(p, IdealKind::Toric)
}

pub fn graded_generators(p: &Poset) -> Vec<SyzGenerator> {
    generators(p, IdealKind::Graded)
}

pub fn initial_generators(p: &Poset) -> Vec<SyzGenerator> {
    generators(p, IdealKind::Initial)
}

fn degree_of(m: &[IdealSet], n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for j in m {
        for l in j.labels() {
            out[l - 1] += 1;
        }
    }
    out
}

/// Whether every binomial is homogeneous for the map `U_J ↦ x^J`.
pub fn verify_vanishing(p: &Poset, gens: &[SyzGenerator]) -> bool {
    gens.iter()
        .filter(|g| g.is_binomial())
        .all(|g| degree_of(&g.lhs, p.n()) == degree_of(&g.rhs, p.n()))
}

/// Whether every pair in `Π(P)` has connected intersection.
pub fn is_graded_iso(p: &Poset) -> bool {
    p.nontrivial_pairs()
        .iter()
        .all(PiPair::intersection_connected)
}

/// Whether `P` has a minimum element.
pub fn hibi_check(p: &Poset) -> bool {
    p.minimum().is_some()
}

/// Generators of the ideal of standard P-partitions inside the weak
/// P-partition ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupIdealData {
    /// `Σ_{i ∈ Des(w)} χ_{w|[1,i]}` over `w ∈ L(P)`, deduplicated and sorted.
    pub generators: Vec<Vec<u32>>,
    /// The single generator `δ` when the ideal is principal.
    pub principal: Option<Vec<u32>>,
}

pub fn semigroup_ideal(p: &Poset) -> SemigroupIdealData {
    let mut generators = Vec::new();
    for_each_extension(p, |w| {
        let ext = LinearExtension::new(p, w.to_vec());
        let prefixes = ext.prefixes();
        let mut f = vec![0u32; p.n()];
        for &i in &ext.des_set {
            for l in prefixes[i - 1].labels() {
                f[l - 1] += 1;
            }
        }
        generators.push(f);
        true
    });
    generators.sort();
    generators.dedup();
    let d = delta_data(p);
    SemigroupIdealData {
        generators,
        principal: d.satisfies_labelled_condition.then_some(d.delta),
    }
}

/// `U` followed by the member labels, separated by underscores once labels
/// can have two digits.
pub fn variable_name(j: IdealSet, n: usize) -> String {
    if n >= 10 {
        format!("U_{}", j.label_string(true))
    } else {
        format!("U{}", j.label_string(false))
    }
}

fn m2_variable_name(j: IdealSet, n: usize) -> String {
    if n >= 10 {
        let parts: Vec<String> = j.labels().map(|l| l.to_string()).collect();
        if parts.len() == 1 {
            format!("U_{}", parts[0])
        } else {
            format!("U_({})", parts.join(","))
        }
    } else {
        variable_name(j, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Text,
    M2,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExportFormat> {
        match s {
            "text" => Ok(ExportFormat::Text),
            "m2" => Ok(ExportFormat::M2),
            other => Err(Error::Arg(format!("unknown export format `{other}`"))),
        }
    }
}

/// The polynomial ring on `U_J`, `J ∈ J_conn(P)`, and the chosen ideal.
pub fn export(p: &Poset, format: ExportFormat, kind: IdealKind) -> String {
    let n = p.n();
    let conn = p.connected_ideals();
    let gens = generators(p, kind);
    let mut out = String::new();
    match format {
        ExportFormat::Text => {
            let vars: Vec<String> = conn.iter().map(|&j| variable_name(j, n)).collect();
            let _ = writeln!(
                out,
                "# {} ideal of a poset on {} elements",
                kind_name(kind),
                n
            );
            let _ = writeln!(out, "S = k[{}]", vars.join(", "));
            let _ = writeln!(out, "generators {}", gens.len());
            for g in &gens {
                let _ = writeln!(out, "{}", g.render(n));
            }
        }
        ExportFormat::M2 => {
            let vars: Vec<String> = conn.iter().map(|&j| m2_variable_name(j, n)).collect();
            let degrees: Vec<String> = conn
                .iter()
                .map(|j| {
                    let d: Vec<String> = j.indicator(n).iter().map(|v| v.to_string()).collect();
                    format!("{{{}}}", d.join(","))
                })
                .collect();
            let _ = writeln!(
                out,
                "-- {} ideal of a poset on {} elements",
                kind_name(kind),
                n
            );
            let _ = writeln!(
                out,
                "S = QQ[{}, Degrees => {{{}}}];",
                vars.join(", "),
                degrees.join(", ")
            );
            let polys: Vec<String> = gens
                .iter()
                .map(|g| {
                    let mono = |m: &[IdealSet]| {
                        m.iter()
                            .map(|&j| m2_variable_name(j, n))
                            .collect::<Vec<_>>()
                            .join("*")
                    };
                    if g.rhs.is_empty() {
                        mono(&g.lhs)
                    } else {
                        format!("{} - {}", mono(&g.lhs), mono(&g.rhs))
                    }
                })
                .collect();
            if polys.is_empty() {
                let _ = writeln!(out, "I = ideal(0_S);");
            } else {
                let _ = writeln!(out, "I = ideal({});", polys.join(", "));
            }
            let _ = writeln!(out, "R = S/I;");
        }
    }
    out
}

fn kind_name(kind: IdealKind) -> &'static str {
    match kind {
        IdealKind::Toric => "toric",
        IdealKind::Graded => "graded",
        IdealKind::Initial => "initial",
    }
}
