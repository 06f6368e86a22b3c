use std::path::Path;

use num_bigint::BigUint;
use ppart_core::complexes::{delta_complex, forest_consistency, p_forests};
use ppart_core::extensions::{linear_extensions, maj_polynomial, maj_polynomial_dp};
use ppart_core::identities::{run_all, Limits, Outcome};
use ppart_core::partitions::{delta_data, stanley_delta_chain};
use ppart_core::presentation::{
    export, generators, hibi_check, is_graded_iso, semigroup_ideal, verify_vanishing, ExportFormat,
    IdealKind,
};
use ppart_core::series::{
    count_extensions_fast, duplication_product, hilbert_truncated, hook_count, hook_formula_given,
    hook_formula_labelled, initial_series, koszul_inverse, numerator_degree_bound,
    numerator_polynomial, rational_sum_truncated,
};
use ppart_core::structure::{
    ci_test_counts, ci_test_ideals, classify as classify_poset, classify_seeded,
    duplication_predictions, forbidden_scan,
};
use ppart_core::{Error, Flavor, Grading, QPoly, TruncSeries};
use serde_json::{json, Value};

use crate::report::{Failure, Input, Output, EXIT_DOMAIN};
use crate::{Common, Form};

/// Largest element count for which `analyze` lists every order ideal.
const IDEAL_TABLE_MAX_N: usize = 16;

fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn poly(p: &QPoly) -> Value {
    json!({
        "coefficients": p,
        "text": p.to_string(),
        "at_one": p.eval_one().to_string(),
    })
}

fn series(s: &TruncSeries) -> Value {
    let mut v = serde_json::to_value(s).expect("series serialise");
    v["text"] = json!(s.to_string());
    v
}

pub fn analyze(input: &Input) -> Result<Output, Failure> {
    let p = &input.poset;
    let ideals = (p.n() <= IDEAL_TABLE_MAX_N).then(|| {
        p.ideals()
            .into_iter()
            .filter(|j| !j.is_empty())
            .map(|j| json!({ "ideal": j, "components": p.component_count(j) }))
            .collect::<Vec<_>>()
    });
    let pairs: Vec<Value> = p
        .nontrivial_pairs()
        .iter()
        .map(|pp| {
            json!({
                "j1": pp.j1,
                "j2": pp.j2,
                "union": pp.union,
                "intersection_components": pp.intersection_components,
            })
        })
        .collect();
    Ok(Output::Json(json!({
        "n": p.n(),
        "covers": p.cover_relations(),
        "naturally_labelled": p.is_naturally_labelled(),
        "strictly_labelled": p.is_strictly_labelled(),
        "connected": p.is_connected(),
        "minimum": p.minimum(),
        "ideals": ideals,
        "connected_ideals": p.connected_ideals(),
        "pairs": pairs,
        "count_test": ci_test_counts(p),
        "delta": delta_data(p),
        "equal_length_chains": stanley_delta_chain(p),
    })))
}

pub fn extensions(input: &Input, common: &Common, list: bool) -> Result<Output, Failure> {
    let p = &input.poset;
    let (count, route) = count_extensions_fast(p)?;
    let (maj, method) = match maj_polynomial(p, common.cap) {
        Ok(m) => (m, "enumeration"),
        Err(Error::Explosion { .. }) if !list => (maj_polynomial_dp(p)?, "ideal_lattice"),
        Err(e) => return Err(e.into()),
    };
    let mut out = json!({
        "count": big(&count),
        "count_route": route,
        "maj_polynomial": poly(&maj),
        "maj_method": method,
    });
    if list {
        out["extensions"] =
            serde_json::to_value(linear_extensions(p, common.cap)?).expect("serialise");
    }
    Ok(Output::Json(out))
}

pub fn classify(input: &Input, forbidden: bool, seed: Option<u64>) -> Result<Output, Failure> {
    let p = &input.poset;
    let c = match seed {
        Some(s) => classify_seeded(p, s),
        None => classify_poset(p),
    };
    let mut out = json!({
        "complete_intersection": c.is_ci(),
        "classification": c,
        "ideal_test": ci_test_ideals(p),
        "count_test": ci_test_counts(p),
    });
    if let Some(recipe) = c.recipe() {
        out["duplication_predictions"] = json!(duplication_predictions(p, recipe));
    }
    if forbidden {
        out["forbidden"] = match forbidden_scan(p) {
            Some((which, embedding)) => json!({ "which": which, "embedding": embedding }),
            None => Value::Null,
        };
    }
    Ok(Output::Json(out))
}

pub fn hook(input: &Input, count_only: bool) -> Result<Output, Failure> {
    let p = &input.poset;
    let c = classify_poset(p);
    if !c.is_ci() {
        return Err(Error::NotFwd.into());
    }
    let count = hook_count(p)?;
    if count_only {
        return Ok(Output::Json(json!({ "count": big(&count) })));
    }
    let (polynomial, form) = if p.is_naturally_labelled() {
        (hook_formula_given(p, &c)?, "natural")
    } else {
        (hook_formula_labelled(p)?, "labelled")
    };
    Ok(Output::Json(json!({
        "count": big(&count),
        "form": form,
        "polynomial": poly(&polynomial),
    })))
}

pub fn hilbert(
    input: &Input,
    common: &Common,
    flavor: Flavor,
    grading: Grading,
    form: Form,
) -> Result<Output, Failure> {
    let p = &input.poset;
    let order = common.trunc;
    let mut out = json!({ "form": form_name(form), "order": order });
    match form {
        Form::Series => {
            out["flavor"] = json!(flavor);
            out["series"] = series(&hilbert_truncated(p, flavor, grading, order)?);
        }
        Form::Initial => out["series"] = series(&initial_series(p, grading, order)?),
        Form::RationalSum => out["series"] = series(&rational_sum_truncated(p, grading, order)?),
        Form::Product => {
            out["series"] = series(&duplication_product(p, &classify_poset(p), grading, order)?)
        }
        Form::Numerator => {
            let bound = numerator_degree_bound(p);
            out["numerator"] = series(&numerator_polynomial(p, order)?);
            out["degree_bound"] = json!(bound);
            out["certified"] = json!(order >= bound);
        }
        Form::Koszul => {
            let report = koszul_inverse(p, order)?;
            out["nonnegative"] = json!(report.nonnegative);
            out["first_negative"] = json!(report.first_negative);
            out["series"] = series(&report.series);
        }
    }
    Ok(Output::Json(out))
}

fn form_name(form: Form) -> &'static str {
    match form {
        Form::Series => "series",
        Form::Numerator => "numerator",
        Form::RationalSum => "rational-sum",
        Form::Product => "product",
        Form::Koszul => "koszul",
        Form::Initial => "initial",
    }
}

pub fn presentation(
    input: &Input,
    format: Option<ExportFormat>,
    kind: IdealKind,
    out: Option<&Path>,
) -> Result<Output, Failure> {
    let p = &input.poset;
    if let Some(format) = format {
        let text = export(p, format, kind);
        return match out {
            Some(path) => {
                std::fs::write(path, &text)
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
                Ok(Output::Json(json!({
                    "written": path.display().to_string(),
                    "bytes": text.len(),
                })))
            }
            None => Ok(Output::Text(text)),
        };
    }
    let gens = generators(p, kind);
    let rendered: Vec<String> = gens.iter().map(|g| g.render(p.n())).collect();
    Ok(Output::Json(json!({
        "ideal": kind,
        "variables": p.connected_ideals(),
        "generators": rendered,
        "balanced": verify_vanishing(p, &gens),
        "graded_isomorphic": is_graded_iso(p),
        "minimum_element": hibi_check(p),
        "standard_ideal": semigroup_ideal(p),
    })))
}

pub fn complex(input: &Input, _common: &Common, vertex_cap: usize) -> Result<Output, Failure> {
    let p = &input.poset;
    let complex = delta_complex(p, vertex_cap)?;
    let facets: Vec<Value> = complex
        .facets
        .iter()
        .map(|f| json!(complex.facet_ideals(f)))
        .collect();
    let forests = p_forests(p, vertex_cap)?;
    let consistency = forest_consistency(p, vertex_cap)?;
    let forest_values: Vec<Value> = forests
        .iter()
        .zip(&consistency.terms)
        .map(|(f, count)| json!({ "parent": f.parent, "extensions": big(count) }))
        .collect();
    Ok(Output::Json(json!({
        "vertices": complex.vertices,
        "facets": facets,
        "minimal_non_faces": complex.minimal_non_faces(),
        "forests": forest_values,
        "forest_extension_total": big(&consistency.total),
        "extensions": big(&consistency.extensions),
        "consistent": consistency.passed,
    })))
}

pub fn selftest(input: &Input, common: &Common) -> Result<Output, Failure> {
    let limits = Limits {
        order: common.trunc,
        ..Limits::default()
    };
    let checks = run_all(&input.poset, limits)?;
    let passed = checks.iter().all(|c| !c.failed());
    let summary = json!({
        "passed": passed,
        "counts": {
            "pass": checks.iter().filter(|c| c.outcome == Outcome::Pass).count(),
            "fail": checks.iter().filter(|c| c.outcome == Outcome::Fail).count(),
            "skipped": checks.iter().filter(|c| c.outcome == Outcome::Skipped).count(),
        },
        "checks": checks,
    });
    Ok(if passed {
        Output::Json(summary)
    } else {
        Output::JsonWithCode(summary, EXIT_DOMAIN)
    })
}
