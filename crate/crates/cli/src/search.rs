//! Best-effort search for classes with long filtrations.

use ivhs_core::{xi_phi_filtration, Field, Result};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::lab::{self, ClassRun, Lab, TaskOutput};
use crate::scenario::{KsSpec, PhiSpec, SearchConfig, TEMPLATES};
use crate::util;

/// Recipe of the `i`-th search sample: random-`U` annihilator classes, random
/// tails and annihilator templates in rotation.
pub fn recipe(seed: u64, i: usize) -> KsSpec {
    let mut rng = util::rng(seed, "search:recipe", i as u64);
    match i % 3 {
        0 => KsSpec::Annihilator { label: None, u_dim: rng.gen_range(1..=2) },
        1 => {
            let n = rng.gen_range(1..=3);
            KsSpec::Tails { label: None, orders: (0..n).map(|_| rng.gen_range(1..=3)).collect() }
        }
        _ => KsSpec::Template { label: None, name: TEMPLATES[(i / 3) % TEMPLATES.len()].to_string() },
    }
}

struct Finding {
    length: usize,
    sample: usize,
    json: Value,
    checks: Vec<Value>,
}

fn explore<K: Field>(lab: &Lab<K>, cfg: &SearchConfig, seed: u64, i: usize) -> Result<Vec<Finding>> {
    let spec = recipe(seed, i);
    let class_seed = util::substream(seed, "search:class", i as u64);
    let mut run = ClassRun::with_seed(lab, &spec, format!("search#{i}"), class_seed);
    let rank = run.cup(lab)?.rank;
    let w = run.cup(lab)?.w.clone();
    let table = run.table(lab)?.clone();
    let k = &lab.field;
    let mut out = Vec::new();
    for j in 0..cfg.phi_samples {
        let phi = lab.choose_phi(&PhiSpec::Random, &w, util::substream(class_seed, "search:phi", j as u64))?;
        let f = xi_phi_filtration(&table.values, &phi)?;
        if f.length < 2 {
            continue;
        }
        let mut json = json!({
            "sample": i,
            "spec": serde_json::to_value(&spec).expect("spec serializes"),
            "rank": rank,
            "phi": util::vector(k, &phi),
            "length": f.length,
            "partition": f.partition,
        });
        let mut checks = Vec::new();
        if f.length >= 3 {
            let start = f.graded_bases[f.length - 1][0].clone();
            let (string, qij, hankel, cs) = lab::string_quadrics(lab, &table, &phi, &start, class_seed)?;
            json["string"] = string;
            json["qij"] = qij;
            json["hankel"] = hankel;
            checks = cs;
        }
        out.push(Finding { length: f.length, sample: i, json, checks });
    }
    Ok(out)
}

/// Findings with `l >= 2`, longest first; an empty list is a valid result.
pub fn search<K: Field>(lab: &Lab<K>, cfg: &SearchConfig, seed: u64) -> Result<TaskOutput> {
    let results: Vec<Result<Vec<Finding>>> = (0..cfg.budget).into_par_iter().map(|i| explore(lab, cfg, seed, i)).collect();
    let mut findings = Vec::new();
    let mut skipped = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(f) => findings.extend(f),
            Err(e) if e.is_invariant_violation() => return Err(e),
            Err(e) => skipped.push(json!({"sample": i, "error": util::error(&e)})),
        }
    }
    findings.sort_by(|a, b| b.length.cmp(&a.length).then(a.sample.cmp(&b.sample)));
    let checks = findings.iter().flat_map(|f| f.checks.iter().cloned()).collect();
    let result = json!({
        "budget": cfg.budget,
        "phi_samples": cfg.phi_samples,
        "findings": findings.into_iter().map(|f| f.json).collect::<Vec<_>>(),
        "skipped": skipped,
    });
    Ok((result, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_rotate_and_repeat() {
        assert!(matches!(recipe(0, 0), KsSpec::Annihilator { .. }));
        assert!(matches!(recipe(0, 1), KsSpec::Tails { .. }));
        assert!(matches!(recipe(0, 5), KsSpec::Template { .. }));
        assert_eq!(serde_json::to_value(recipe(9, 4)).unwrap(), serde_json::to_value(recipe(9, 4)).unwrap());
    }
}
