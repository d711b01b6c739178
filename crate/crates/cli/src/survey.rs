//! Empirical partition tables per rank stratum.

use std::collections::BTreeMap;

use ivhs_core::Field;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::lab::{ClassRun, Lab};
use crate::scenario::{KsSpec, PhiSpec, SurveyConfig};
use crate::util;

/// One sampling recipe and its display name.
pub fn recipes(cfg: &SurveyConfig) -> Vec<(String, KsSpec)> {
    let mut out = Vec::new();
    for k in 1..=cfg.max_secant {
        out.push((format!("secant:{k}"), KsSpec::Secant { label: None, count: k, coeffs: None }));
    }
    for m in 2..=cfg.max_tail_order {
        out.push((format!("tail:{m}"), KsSpec::Tails { label: None, orders: vec![m] }));
    }
    for u in 2..=cfg.max_u_dim {
        out.push((format!("annihilator:{u}"), KsSpec::Annihilator { label: None, u_dim: u }));
    }
    for t in &cfg.templates {
        out.push((format!("template:{t}"), KsSpec::Template { label: None, name: t.clone() }));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sample {
    pub rank: usize,
    pub partition: Vec<usize>,
    pub length: usize,
}

/// Rank, partition and length of one seeded class with a random `φ`.
pub fn sample<K: Field>(lab: &Lab<K>, spec: &KsSpec, label: String, seed: u64) -> ivhs_core::Result<Sample> {
    let mut run = ClassRun::with_seed(lab, spec, label, seed);
    let rank = run.cup(lab)?.rank;
    let f = run.filtration(lab, &PhiSpec::Random)?;
    Ok(Sample { rank, partition: f.partition.clone(), length: f.length })
}

pub fn survey<K: Field>(lab: &Lab<K>, cfg: &SurveyConfig, seed: u64) -> Value {
    let jobs: Vec<(usize, usize)> = (0..recipes(cfg).len()).flat_map(|r| (0..cfg.per_rank_samples).map(move |i| (r, i))).collect();
    let recipes = recipes(cfg);
    let results: Vec<ivhs_core::Result<Sample>> = jobs
        .par_iter()
        .map(|&(r, i)| {
            let (name, spec) = &recipes[r];
            sample(lab, spec, format!("{name}#{i}"), util::substream(seed, &format!("survey:{name}"), i as u64))
        })
        .collect();

    // (recipe, rank) -> (partition, l) -> count
    let mut rows: BTreeMap<(usize, usize), BTreeMap<(Vec<usize>, usize), usize>> = BTreeMap::new();
    let mut failures: BTreeMap<usize, BTreeMap<String, usize>> = BTreeMap::new();
    for (&(r, _), res) in jobs.iter().zip(&results) {
        match res {
            Ok(s) => *rows.entry((r, s.rank)).or_default().entry((s.partition.clone(), s.length)).or_default() += 1,
            Err(e) => *failures.entry(r).or_default().entry(e.kind().to_string()).or_default() += 1,
        }
    }
    let table: Vec<Value> = rows
        .iter()
        .map(|(&(r, rank), counts)| {
            let total: usize = counts.values().sum();
            let modal = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(k, _)| k.clone());
            let entries: Vec<Value> = counts
                .iter()
                .map(|((h, l), n)| json!({"partition": h, "length": l, "count": n, "modal": modal.as_ref() == Some(&(h.clone(), *l))}))
                .collect();
            json!({"recipe": recipes[r].0, "rank": rank, "samples": total, "observed": entries})
        })
        .collect();
    let failures: Vec<Value> = failures
        .iter()
        .map(|(&r, kinds)| json!({"recipe": recipes[r].0, "errors": kinds}))
        .collect();
    json!({"per_rank_samples": cfg.per_rank_samples, "rows": table, "failures": failures})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipe_names() {
        let cfg = SurveyConfig { per_rank_samples: 1, max_secant: 2, max_tail_order: 3, max_u_dim: 2, templates: vec!["scroll".into()] };
        let names: Vec<String> = recipes(&cfg).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["secant:1", "secant:2", "tail:2", "tail:3", "annihilator:2", "template:scroll"]);
    }
}
