//! Cross-module oracle suites, one per acceptance criterion.

use std::path::PathBuf;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    b_even, delta_gaps_raw, delta_obligations_hold, hoffman_bound, hoffman_floor, inequality_suite, stability_verdict,
    threshold, threshold_raw, InequalityGrid,
};
use crate::error::Result;
use crate::geometry::{enumerate_generators_capped, is_totally_isotropic, load_or_build, DualPolarGraph, PolarSpace};
use crate::lp::delsarte_lp;
use crate::qcore::{num_generators, ExactInt, ExactRat, Family, PolarParams};
use crate::search::{check_lemma_3_1, check_lemma_3_2, max_ekr, EKRInstance, DEFAULT_MAXIMAL_CAP};
use crate::spectra::{lambda, extremal_position_violations, unimodality_violations, verify_spectrum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub graph_qs: Vec<u64>,
    /// Largest graph enumerated against the generator count.
    pub enumeration_max_n: u64,
    /// Largest graph kept in the cache and used for spectral checks.
    pub cache_max_n: u64,
    /// Largest graph for maximal-set enumeration.
    pub structural_max_n: u64,
    pub symbolic_qs: Vec<u64>,
    pub theorem_qs: Vec<u64>,
    pub symbolic_max_d: usize,
    pub stability_qs: Vec<u64>,
    pub stability_max_d: usize,
    pub budget: u64,
    pub cache_dir: Option<PathBuf>,
    pub inequalities: InequalityGrid,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            graph_qs: vec![2, 3, 4],
            enumeration_max_n: 1000,
            cache_max_n: 300,
            structural_max_n: 150,
            symbolic_qs: vec![2, 3, 4, 5, 9],
            theorem_qs: vec![3, 4, 5, 9],
            symbolic_max_d: 8,
            stability_qs: vec![3, 4],
            stability_max_d: 60,
            budget: crate::search::DEFAULT_BUDGET,
            cache_dir: None,
            inequalities: InequalityGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    /// First failures, or a short summary.
    pub detail: String,
    pub millis: u64,
}

pub const SUITE_NAMES: [&str; 12] = [
    "generator count vs enumeration",
    "per-vertex codimension profiles",
    "spectral annihilation",
    "small-index eigenvalues",
    "Hoffman sharpness at t = d-1",
    "clique <= LP <= Hoffman",
    "extremal eigenvalue positions",
    "unimodality and eigenvalue bound",
    "inequality suite",
    "threshold obligations and stability",
    "maximal-set structure",
    "b2 vanishes at t = 2",
];

/// Every valid `(family, q, d)` with at most `max_n` generators.
pub fn params_up_to(qs: &[u64], max_n: u64) -> Vec<PolarParams> {
    let cap = ExactInt::from(max_n);
    let mut out = Vec::new();
    for f in Family::ALL {
        for &q in qs {
            for d in 1.. {
                let Ok(p) = PolarParams::new(f, q, d) else { break };
                if num_generators(&p) > cap {
                    break;
                }
                out.push(p);
            }
        }
    }
    out
}

fn symbolic_grid(qs: &[u64], max_d: usize) -> Vec<PolarParams> {
    Family::ALL
        .into_iter()
        .flat_map(|f| qs.iter().map(move |&q| (f, q)))
        .flat_map(|(f, q)| (1..=max_d).filter_map(move |d| PolarParams::new(f, q, d).ok()))
        .collect()
}

/// The cached graphs, built or loaded in parallel.
pub fn load_graphs(cfg: &VerifyConfig, max_n: u64) -> Result<Vec<DualPolarGraph>> {
    params_up_to(&cfg.graph_qs, max_n)
        .par_iter()
        .map(|p| load_or_build(cfg.cache_dir.as_deref(), p, max_n.max(1) as usize))
        .collect()
}

struct Acc {
    checked: u64,
    failures: Vec<String>,
}

impl Acc {
    fn new() -> Self {
        Acc { checked: 0, failures: Vec::new() }
    }

    fn add(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn extend(&mut self, checked: u64, failures: Vec<String>) {
        self.checked += checked;
        self.failures.extend(failures);
    }

    fn finish(self, id: u32, start: Instant, note: String) -> SuiteResult {
        let passed = self.failures.is_empty();
        let detail = if passed { note } else { self.failures.iter().take(5).cloned().collect::<Vec<_>>().join("; ") };
        SuiteResult {
            id,
            name: SUITE_NAMES[id as usize - 1].into(),
            passed,
            checked: self.checked,
            detail,
            millis: start.elapsed().as_millis() as u64,
        }
    }
}

fn error_result(id: u32, start: Instant, e: crate::Error) -> SuiteResult {
    let mut acc = Acc::new();
    acc.add(false, || format!("error: {e}"));
    acc.finish(id, start, String::new())
}

pub fn enumeration_suite(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let ps = params_up_to(&cfg.graph_qs, cfg.enumeration_max_n);
    let results: Vec<(bool, String)> = ps
        .par_iter()
        .map(|p| {
            let tag = p.notation();
            let space = match PolarSpace::new(*p) {
                Ok(s) => s,
                Err(e) => return (false, format!("{tag}: {e}")),
            };
            match enumerate_generators_capped(p, cfg.enumeration_max_n as usize) {
                Err(e) => (false, format!("{tag}: {e}")),
                Ok(gens) => {
                    let mut keys: Vec<Vec<u8>> = gens.iter().map(|g| g.to_bytes()).collect();
                    keys.sort();
                    keys.dedup();
                    let ok = ExactInt::from(keys.len()) == num_generators(p)
                        && gens.iter().all(|g| {
                            g.dim() == p.d() && is_totally_isotropic(g, &space.form, &space.field).unwrap_or(false)
                        });
                    (ok, format!("{tag}: {} enumerated, {} expected", keys.len(), num_generators(p)))
                }
            }
        })
        .collect();
    let mut acc = Acc::new();
    for (ok, msg) in results {
        acc.add(ok, || msg);
    }
    acc.finish(1, start, format!("{} parameter sets", ps.len()))
}

pub fn profile_suite(graphs: &[DualPolarGraph]) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    for g in graphs {
        let bad = g.profile_mismatch();
        acc.add(bad.is_none(), || format!("{}: vertex/codim/got/expected {:?}", g.params().notation(), bad));
    }
    acc.finish(2, start, format!("{} graphs", graphs.len()))
}

pub fn annihilation_suite(graphs: &[DualPolarGraph]) -> SuiteResult {
    let start = Instant::now();
    let jobs: Vec<(usize, usize)> = graphs.iter().enumerate().flat_map(|(i, g)| (0..=g.d()).map(move |t| (i, t))).collect();
    let results: Vec<(bool, String)> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let g = &graphs[i];
            match verify_spectrum(g, t) {
                Ok(c) => (c.passed(), format!("{} t={t}: witness {:?}", g.params().notation(), c.witness)),
                Err(e) => (false, format!("{} t={t}: {e}", g.params().notation())),
            }
        })
        .collect();
    let mut acc = Acc::new();
    for (ok, msg) in results {
        acc.add(ok, || msg);
    }
    acc.finish(3, start, format!("{} (graph, t) pairs", jobs.len()))
}

pub fn small_eigenvalue_suite(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    for p in symbolic_grid(&cfg.symbolic_qs, cfg.symbolic_max_d) {
        let d = p.d() as i64;
        for r in 1..=d {
            let v = lambda(&p, r, d - 1);
            acc.add(v.as_ref().map(|x| *x == ExactInt::from(-1)).unwrap_or(false), || {
                format!("{} r={r}: lambda^(d-1) = {v:?}", p.notation())
            });
        }
        if d == 2 {
            let l1 = lambda(&p, 1, 0).ok();
            let l2 = lambda(&p, 2, 0).ok();
            acc.add(l1 == Some(-p.qpow_half(p.twice_epsilon())), || format!("{}: lambda_1^0 = {l1:?}", p.notation()));
            acc.add(l2 == Some(ExactInt::from(p.q())), || format!("{}: lambda_2^0 = {l2:?}", p.notation()));
        }
    }
    acc.finish(4, start, String::new())
}

/// `(family, q, d, t)` for the sharpness check.
pub const SHARPNESS_INSTANCES: [(Family, u64, usize, usize); 4] = [
    (Family::Symplectic, 2, 2, 1),
    (Family::HyperbolicQPlus, 2, 3, 2),
    (Family::Symplectic, 2, 3, 2),
    (Family::EllipticQMinus, 2, 2, 1),
];

fn graph_for(cfg: &VerifyConfig, p: &PolarParams) -> Result<DualPolarGraph> {
    load_or_build(cfg.cache_dir.as_deref(), p, crate::geometry::DEFAULT_CAP)
}

pub fn sharpness_suite(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    let mut sizes = Vec::new();
    for (f, q, d, t) in SHARPNESS_INSTANCES {
        let p = match PolarParams::new(f, q, d) {
            Ok(p) => p,
            Err(e) => return error_result(5, start, e),
        };
        let g = match graph_for(cfg, &p) {
            Ok(g) => g,
            Err(e) => return error_result(5, start, e),
        };
        let r = max_ekr(&EKRInstance::new(&g, t), cfg.budget);
        let hf = hoffman_floor(&p, t).ok();
        acc.add(r.optimal && hf == Some(ExactInt::from(r.size)), || {
            format!("{} t={t}: clique {} (optimal {}), Hoffman floor {hf:?}", p.notation(), r.size, r.optimal)
        });
        sizes.push(format!("{}={}", p.notation(), r.size));
    }
    acc.finish(5, start, sizes.join(" "))
}

pub fn sandwich_suite(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    let mut inst: Vec<(Family, u64, usize, usize)> = SHARPNESS_INSTANCES.to_vec();
    inst.push((Family::Symplectic, 2, 3, 1));
    let mut rows = Vec::new();
    for (f, q, d, t) in inst {
        let res = (|| -> Result<(usize, bool, ExactRat, ExactRat)> {
            let p = PolarParams::new(f, q, d)?;
            let g = graph_for(cfg, &p)?;
            let r = max_ekr(&EKRInstance::new(&g, t), cfg.budget);
            Ok((r.size, r.optimal, delsarte_lp(&p, t)?.value, hoffman_bound(&p, t)?))
        })();
        match res {
            Ok((c, opt, lp, h)) => {
                let cr = ExactRat::from_integer(c.into());
                acc.add(opt && cr <= lp && lp <= h, || format!("{f:?} q={q} d={d} t={t}: {c} / {lp} / {h}"));
                rows.push(format!("{c}<={lp}<={h}"));
            }
            Err(e) => acc.add(false, || format!("{f:?} q={q} d={d} t={t}: {e}")),
        }
    }
    acc.finish(6, start, rows.join(" "))
}

fn per_index_suite(
    id: u32,
    cfg: &VerifyConfig,
    check: fn(&PolarParams, usize) -> Result<Vec<String>>,
) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    for p in symbolic_grid(&cfg.theorem_qs, cfg.symbolic_max_d) {
        for a in 0..p.d() {
            match check(&p, a) {
                Ok(v) => acc.extend(1, v),
                Err(e) => acc.add(false, || format!("{} a={a}: {e}", p.notation())),
            }
        }
    }
    acc.finish(id, start, String::new())
}

pub fn extremal_suite(cfg: &VerifyConfig) -> SuiteResult {
    let mut r = per_index_suite(7, cfg, extremal_position_violations);
    if r.passed {
        // q = 2 is outside the claim; report what happens there
        let off: usize = symbolic_grid(&[2], cfg.symbolic_max_d)
            .iter()
            .flat_map(|p| (0..p.d()).map(move |a| extremal_position_violations(p, a).map(|v| v.len()).unwrap_or(0)))
            .sum();
        r.detail = format!("q=2 (not asserted): {off} case mismatches");
    }
    r
}

pub fn unimodality_suite(cfg: &VerifyConfig) -> SuiteResult {
    per_index_suite(8, cfg, unimodality_violations)
}

pub fn inequality_suite_result(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    let checks = inequality_suite(&cfg.inequalities);
    let summary = checks.iter().map(|c| format!("{}:{}", c.lemma, c.instances)).collect::<Vec<_>>().join(" ");
    for c in checks {
        acc.extend(c.instances, c.violations.into_iter().map(|v| format!("{}: {v}", c.lemma)).collect());
    }
    acc.finish(9, start, summary)
}

pub fn stability_suite(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    // gap obligations for every type, independent of the field order
    for te in 0..=4 {
        for d in 1..=cfg.stability_max_d {
            for t in (0..=d).filter(|&t| threshold_raw(3, d, t)) {
                let g = delta_gaps_raw(d as i64, t as i64, te);
                acc.add(delta_obligations_hold(&g, t), || format!("2e={te} d={d} t={t}: {g:?}"));
            }
        }
    }
    let ps = symbolic_grid(&cfg.stability_qs, cfg.stability_max_d);
    let results: Vec<(bool, String)> = ps
        .par_iter()
        .flat_map_iter(|p| {
            (0..=p.d()).filter(|&t| threshold(p, t)).map(move |t| {
                let v = stability_verdict(p, t);
                (matches!(v, Ok(true)), format!("{} t={t}: {v:?}", p.notation()))
            })
        })
        .collect();
    for (ok, msg) in results {
        acc.add(ok, || msg);
    }
    acc.finish(10, start, String::new())
}

pub fn structure_suite(graphs: &[DualPolarGraph]) -> SuiteResult {
    let start = Instant::now();
    let jobs: Vec<(usize, Option<usize>)> = graphs
        .iter()
        .enumerate()
        .flat_map(|(i, g)| (0..=g.d()).map(move |t| (i, Some(t))).chain(std::iter::once((i, None))))
        .collect();
    let results: Vec<(bool, String)> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let g = &graphs[i];
            let (c, which) = match t {
                Some(t) => (check_lemma_3_1(g, t, DEFAULT_MAXIMAL_CAP), format!("extension t={t}")),
                None => (check_lemma_3_2(g, DEFAULT_MAXIMAL_CAP), "maximum t=1".to_string()),
            };
            (c.passed(), format!("{} {which}: complete {} failures {:?}", g.params().notation(), c.complete, c.failures))
        })
        .collect();
    let mut acc = Acc::new();
    for (ok, msg) in results {
        acc.add(ok, || msg);
    }
    acc.finish(11, start, format!("{} graphs", graphs.len()))
}

pub fn b2_suite(cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    let mut acc = Acc::new();
    let mut qs = cfg.inequalities.qs.clone();
    qs.extend(&cfg.symbolic_qs);
    qs.sort_unstable();
    qs.dedup();
    for p in symbolic_grid(&qs, cfg.stability_max_d).into_iter().filter(|p| p.d() >= 4) {
        let b = b_even(&p, 2);
        acc.add(b.as_ref().map(|b| b.values[1].is_zero()).unwrap_or(false), || format!("{}: {b:?}", p.notation()));
    }
    acc.finish(12, start, String::new())
}

/// Run the selected suites (all when `ids` is empty).
pub fn run_suites(cfg: &VerifyConfig, ids: &[u32]) -> Result<Vec<SuiteResult>> {
    let want = |i: u32| ids.is_empty() || ids.contains(&i);
    let cached = if want(2) || want(3) { load_graphs(cfg, cfg.cache_max_n)? } else { Vec::new() };
    let mut out = Vec::new();
    for id in 1..=12u32 {
        if !want(id) {
            continue;
        }
        out.push(match id {
            1 => enumeration_suite(cfg),
            2 => profile_suite(&cached),
            3 => annihilation_suite(&cached),
            4 => small_eigenvalue_suite(cfg),
            5 => sharpness_suite(cfg),
            6 => sandwich_suite(cfg),
            7 => extremal_suite(cfg),
            8 => unimodality_suite(cfg),
            9 => inequality_suite_result(cfg),
            10 => stability_suite(cfg),
            11 => {
                let small: Vec<DualPolarGraph> = if cached.is_empty() {
                    load_graphs(cfg, cfg.structural_max_n)?
                } else {
                    cached.iter().filter(|g| g.n() as u64 <= cfg.structural_max_n).cloned().collect()
                };
                structure_suite(&small)
            }
            _ => b2_suite(cfg),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> VerifyConfig {
        VerifyConfig {
            enumeration_max_n: 40,
            cache_max_n: 40,
            structural_max_n: 40,
            symbolic_max_d: 5,
            stability_max_d: 20,
            inequalities: InequalityGrid { qs: vec![2, 3, 4], max_d: 8, max_n: 8, x_max: 10.0, x_points: 50, max_z: 6 },
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn cheap_suites_pass() {
        let cfg = tiny();
        for r in run_suites(&cfg, &[1, 2, 3, 4, 7, 8, 9, 10, 11, 12]).unwrap() {
            assert!(r.passed, "{r:?}");
            assert!(r.checked > 0, "{r:?}");
        }
    }

    #[test]
    fn parameter_listing() {
        let ps = params_up_to(&[2], 30);
        let names: Vec<String> = ps.iter().map(|p| p.notation()).collect();
        assert!(names.contains(&"Q+(5,2)".to_string()));
        assert!(!names.contains(&"W(5,2)".to_string()));
        assert!(ps.iter().all(|p| num_generators(p) <= ExactInt::from(30)));
    }
}
