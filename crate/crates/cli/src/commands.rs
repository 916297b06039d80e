//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use hurwitz_core::dyck::{enumerate_hurwitz_dyck_paths_with, is_pruned_dyck, DyckConfig};
use hurwitz_core::graph::{canonical_hash, type_dir_name};
use hurwitz_core::mobile::{enumerate_mobiles_with, MobileConfig};
use hurwitz_core::oracle::OracleConfig;
use hurwitz_core::partition::types_within;
use hurwitz_core::poly::{expected_degree, fit_chamber_polynomial, chambers, hyperplanes, SampleBox};
use hurwitz_core::pruned_tropical::{enumerate_pruned_with, PrunedOptions};
use hurwitz_core::recursion::PrunedRecursion;
use hurwitz_core::tropical::{enumerate_monodromy_graphs_with, DEFAULT_STATE_CAP};
use hurwitz_core::{HurwitzError, HurwitzType, Partition, PrunedSide, Rational, Result, Scalar};

use crate::engines::{evaluate, Engine, Limits};

/// The record printed by `compute` and `export-graphs`.
#[derive(Debug, Clone, Serialize)]
pub struct ComputeRecord {
    #[serde(rename = "type")]
    pub type_key: String,
    pub engine: String,
    pub value: String,
    pub objects: Option<usize>,
    pub elapsed_ms: u64,
}

impl ComputeRecord {
    pub fn text(&self) -> String {
        let objects = self.objects.map(|o| format!(" objects={o}")).unwrap_or_default();
        format!("{} [{}] = {}{objects} ({} ms)", self.type_key, self.engine, self.value, self.elapsed_ms)
    }
}

/// Builds the recursion evaluator, backed by a cache file if requested.
pub fn recursion(cache: Option<&Path>, limits: &Limits) -> Result<PrunedRecursion<Rational>> {
    let rec = match cache {
        Some(path) => PrunedRecursion::with_cache_file(path)?,
        None => PrunedRecursion::new(),
    };
    Ok(rec.with_oracle_config(limits.oracle()))
}

/// `compute`: one number by one engine.
pub fn compute(engine: Engine, t: &HurwitzType, limits: &Limits, cache: Option<&Path>) -> Result<ComputeRecord> {
    let rec = recursion(cache, limits)?;
    let start = Instant::now();
    let eval = evaluate(engine, t, limits, &rec)?;
    Ok(ComputeRecord {
        type_key: t.to_string(),
        engine: engine.name().into(),
        value: eval.value.to_pq(),
        objects: eval.objects,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// One type of a cross-check sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckEntry {
    #[serde(rename = "type")]
    pub type_key: String,
    /// Engine name to value or `skipped: <reason>`, for classical numbers.
    pub classical: BTreeMap<String, String>,
    /// The same for numbers pruned on the μ side.
    pub pruned: BTreeMap<String, String>,
    pub agree: bool,
}

/// The sweep summary.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub max_d: u32,
    pub max_b: i64,
    pub types: usize,
    pub disagreeing: Vec<String>,
    pub skipped_entries: usize,
    pub pass: bool,
    pub results: Vec<CrosscheckEntry>,
}

fn agree(values: &BTreeMap<String, String>) -> bool {
    let mut computed = values.values().filter(|v| !v.starts_with("skipped"));
    match computed.next() {
        Some(first) => computed.all(|v| v == first),
        None => true,
    }
}

fn run_engines(engines: &[Engine], t: &HurwitzType, limits: &Limits, rec: &PrunedRecursion<Rational>) -> BTreeMap<String, String> {
    engines
        .iter()
        .map(|&e| {
            let v = match evaluate(e, t, limits, rec) {
                Ok(ev) => ev.value.to_pq(),
                Err(err) => format!("skipped: {err}"),
            };
            (e.name().to_string(), v)
        })
        .collect()
}

fn crosscheck_type(t: &HurwitzType, limits: &Limits, rec: &PrunedRecursion<Rational>) -> CrosscheckEntry {
    let single = t.genus == 0 && t.nu.parts().iter().all(|&p| p == 1);
    let mut classical_engines = vec![Engine::Oracle, Engine::Tropical];
    if single {
        classical_engines.push(Engine::Dyck);
    }
    let classical = run_engines(&classical_engines, t, limits, rec);
    let pruned = run_engines(
        &[Engine::Oracle, Engine::Recursion, Engine::PrunedTropical],
        &t.clone().pruned(PrunedSide::Left),
        limits,
        rec,
    );
    let ok = agree(&classical) && agree(&pruned);
    CrosscheckEntry { type_key: t.key(), classical, pruned, agree: ok }
}

/// `crosscheck`: every type within the bounds through every applicable
/// engine, in parallel. Engine errors mark entries as skipped.
pub fn crosscheck(max_d: u32, max_b: i64, limits: &Limits, cache: Option<&Path>, out: Option<&Path>) -> Result<CrosscheckReport> {
    let types = types_within(max_d, max_b);
    let rec = recursion(cache, limits)?;
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(types.len()));
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(types.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(t) = types.get(i) else { break };
                let entry = crosscheck_type(t, limits, &rec);
                results.lock().expect("results lock").push(entry);
            });
        }
    });
    rec.save()?;
    let mut results = results.into_inner().expect("results lock");
    results.sort_by(|a, b| a.type_key.cmp(&b.type_key));
    let disagreeing: Vec<String> = results.iter().filter(|e| !e.agree).map(|e| e.type_key.clone()).collect();
    let skipped_entries = results
        .iter()
        .flat_map(|e| e.classical.values().chain(e.pruned.values()))
        .filter(|v| v.starts_with("skipped"))
        .count();
    let report = CrosscheckReport {
        max_d,
        max_b,
        types: results.len(),
        pass: disagreeing.is_empty(),
        disagreeing,
        skipped_entries,
        results,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(&report).map_err(|e| HurwitzError::Io(e.to_string()))?;
        fs::write(dir.join("crosscheck.json"), text + "\n")?;
    }
    Ok(report)
}

/// One exported object.
#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub hash: String,
    pub weight: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pruned: Option<bool>,
}

/// The manifest written next to exported objects.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    #[serde(rename = "type")]
    pub type_key: String,
    pub engine: String,
    pub count: usize,
    pub total: String,
    pub objects: Vec<ManifestEntry>,
}

/// `export-graphs`: one file per enumerated object plus `manifest.json`,
/// in a directory named after the type.
pub fn export_graphs(engine: Engine, t: &HurwitzType, limits: &Limits, out: &Path) -> Result<(ComputeRecord, PathBuf)> {
    let start = Instant::now();
    let dir = out.join(type_dir_name(&t.key()));
    fs::create_dir_all(&dir)?;
    let mut objects = Vec::new();
    let mut write = |ext: &str, body: String, canonical: &str, weight: String, mults: Option<Vec<String>>, pruned: Option<bool>| -> Result<()> {
        let hash = canonical_hash(canonical);
        let file = format!("{hash}.{ext}");
        fs::write(dir.join(&file), body)?;
        objects.push(ManifestEntry { file, hash, weight, multiplicities: mults, pruned });
        Ok(())
    };
    let mut total = Rational::int(0);
    match engine {
        Engine::Tropical => {
            let graphs = enumerate_monodromy_graphs_with(t, limits.budget.unwrap_or(DEFAULT_STATE_CAP))?;
            let (am, an) = (t.mu.automorphisms(), t.nu.automorphisms());
            for (i, g) in graphs.iter().enumerate() {
                let w = g.multiplicity::<Rational>(am, an);
                total += w.clone();
                write("dot", g.to_dot(&format!("graph {i}")), &g.canonical_form(), w.to_pq(), None, None)?;
            }
        }
        Engine::PrunedTropical => {
            let rec = PrunedRecursion::<Rational>::new().with_oracle_config(limits.oracle());
            let graphs = enumerate_pruned_with(t, &rec, PrunedOptions::default())?;
            for (i, g) in graphs.iter().enumerate() {
                total += g.weight.clone();
                let mults = g.multiplicities.iter().map(|m| m.to_pq()).collect();
                write("dot", g.to_dot(&format!("pruned graph {i}")), &g.canonical_form(), g.weight.to_pq(), Some(mults), None)?;
            }
        }
        Engine::Dyck => {
            let config = match limits.budget {
                Some(steps) => DyckConfig { max_degree: u32::MAX, max_steps: steps },
                None => DyckConfig::default(),
            };
            let paths = enumerate_hurwitz_dyck_paths_with(&t.mu, &config)?;
            for p in &paths {
                let s = p.serialize();
                total += Rational::int(1);
                write("path", s.clone() + "\n", &s, "1/1".into(), None, Some(is_pruned_dyck(p)))?;
            }
        }
        Engine::Mobile => {
            let config = match limits.budget {
                Some(steps) => MobileConfig { max_degree: u32::MAX, max_steps: steps },
                None => MobileConfig::default(),
            };
            let mobiles = enumerate_mobiles_with(&t.mu, &t.nu, &config)?;
            for (i, m) in mobiles.iter().enumerate() {
                total += Rational::int(1);
                let canonical = format!("{:?}", m.edges);
                write("dot", m.to_dot(&format!("mobile {i}")), &canonical, "1/1".into(), None, None)?;
            }
        }
        Engine::Oracle | Engine::Recursion => {
            return Err(HurwitzError::Inapplicable(format!("{} does not enumerate objects", engine.name())));
        }
    }
    let manifest = Manifest { type_key: t.to_string(), engine: engine.name().into(), count: objects.len(), total: total.to_pq(), objects };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| HurwitzError::Io(e.to_string()))?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    let record = ComputeRecord {
        type_key: t.to_string(),
        engine: engine.name().into(),
        value: manifest.total.clone(),
        objects: Some(manifest.count),
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok((record, dir))
}

/// One chamber of the polynomiality lab.
#[derive(Debug, Clone, Serialize)]
pub struct ChamberRecord {
    pub signature: String,
    pub points: usize,
    pub polynomial: Option<String>,
    pub interpolation: Vec<Vec<i64>>,
    pub verification: Vec<Vec<i64>>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The lab report.
#[derive(Debug, Clone, Serialize)]
pub struct PolyReport {
    pub genus: u32,
    pub m: usize,
    pub n: usize,
    pub pruned: bool,
    pub refined: bool,
    pub degree: u32,
    pub walls: Vec<String>,
    pub chambers: Vec<ChamberRecord>,
    pub pass: bool,
}

/// Options of the `poly` subcommand.
#[derive(Debug, Clone, Copy)]
pub struct PolyOptions {
    pub genus: u32,
    pub m: usize,
    pub n: usize,
    pub pruned: bool,
    pub refined: bool,
    pub sample: SampleBox,
}

/// `poly`: fits a polynomial in every chamber with enough sample points.
/// Chambers too sparse to fit are listed with a note and do not fail the
/// run; a held-out disagreement does.
pub fn poly(opts: &PolyOptions, limits: &Limits) -> Result<PolyReport> {
    let rec = PrunedRecursion::<Rational>::new().with_oracle_config(limits.oracle());
    let config = OracleConfig { max_degree: u32::MAX, ..limits.oracle() };
    let g = opts.genus;
    let engine = |mu: &[u32], nu: &[u32]| -> Result<Rational> {
        if opts.pruned {
            rec.ph(g, mu, nu)
        } else {
            let t = HurwitzType::new(g, Partition::new(mu.to_vec())?, Partition::new(nu.to_vec())?)?;
            hurwitz_core::oracle::double_hurwitz_with(&t, &config)
        }
    };
    let walls = hyperplanes(opts.m, opts.n, opts.refined);
    let degree = expected_degree(g, opts.m, opts.n);
    let mut records = Vec::new();
    for (sig, points) in chambers(opts.m, opts.n, &walls, opts.sample) {
        let count = points.len();
        let record = match fit_chamber_polynomial(&engine, opts.m, &points, &sig, degree) {
            Ok(fit) => ChamberRecord {
                signature: sig.to_string(),
                points: count,
                polynomial: Some(fit.polynomial.to_string()),
                interpolation: fit.interpolation,
                verification: fit.verification,
                pass: true,
                note: None,
            },
            Err(e @ (HurwitzError::SingularSystem(_) | HurwitzError::FitMismatch(_))) => ChamberRecord {
                signature: sig.to_string(),
                points: count,
                polynomial: None,
                interpolation: Vec::new(),
                verification: Vec::new(),
                pass: !matches!(e, HurwitzError::FitMismatch(_)),
                note: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        };
        records.push(record);
    }
    let pass = records.iter().all(|r| r.pass);
    Ok(PolyReport {
        genus: g,
        m: opts.m,
        n: opts.n,
        pruned: opts.pruned,
        refined: opts.refined,
        degree,
        walls: walls.iter().map(|w| w.to_string()).collect(),
        chambers: records,
        pass,
    })
}
