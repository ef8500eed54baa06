//! Batch verification of catalog entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::expr::Params;
use crate::hypersurface::{flow_drift, levi_classify, sample_points, tangency_residual, DefiningFunction, LeviClass};
use crate::moser::moser_report;
use crate::vfield::{real_rank_at, verify_realization, HoloVectorField};
use crate::Point;

use super::{CatalogEntry, ExpectedLevi};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowConfig {
    /// Number of sampled points used as flow starts.
    pub points: usize,
    pub t_end: f64,
    pub step: f64,
    pub tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            points: 5,
            t_end: 0.5,
            step: 1e-3,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Surface points per sample (base point included).
    pub points: usize,
    pub radius: f64,
    pub tangency_tol: f64,
    pub realization_tol: f64,
    pub levi_tol: f64,
    pub seed: u64,
    pub check_umbilic: bool,
    pub flow: Option<FlowConfig>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            points: 50,
            radius: 0.5,
            tangency_tol: 1e-8,
            realization_tol: 1e-9,
            levi_tol: crate::hypersurface::LEVI_TOL,
            seed: 0,
            check_umbilic: false,
            flow: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Umbilicity {
    NotChecked,
    Yes,
    No,
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub index: usize,
    pub params: Params,
    pub base_point: [[f64; 2]; 3],
    pub levi: Option<LeviClass>,
    pub tangency: Option<f64>,
    pub realization: Option<f64>,
    pub extension_realization: Option<f64>,
    pub frame_rank: Option<usize>,
    pub flow_drift: Option<f64>,
    pub umbilicity: Umbilicity,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub section: String,
    pub expected_levi: ExpectedLevi,
    pub samples: Vec<SampleReport>,
    pub pass: bool,
}

impl EntryReport {
    pub fn failures(&self) -> impl Iterator<Item = (usize, &String)> {
        self.samples.iter().flat_map(|s| s.failures.iter().map(move |f| (s.index, f)))
    }

    fn max_of(&self, f: impl Fn(&SampleReport) -> Option<f64>) -> Option<f64> {
        self.samples.iter().filter_map(f).reduce(f64::max)
    }
}

/// FNV-1a, used to derive a per-entry seed that does not depend on order.
fn fnv(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn fmt_err(what: &str, e: impl std::fmt::Display) -> String {
    format!("{what}: {e}")
}

fn check_fields(
    fields: &[HoloVectorField],
    df: &DefiningFunction,
    pts: &[Point],
) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for f in fields {
        for p in pts {
            worst = worst.max(tangency_residual(f, df, p).map_err(|e| fmt_err("tangency", e))?);
        }
    }
    Ok(worst)
}

fn verify_sample(entry: &CatalogEntry, i: usize, cfg: &VerifyConfig) -> SampleReport {
    let params = entry.sample_params(i);
    let mut r = SampleReport {
        index: i,
        params: params.clone(),
        base_point: [[0.0; 2]; 3],
        levi: None,
        tangency: None,
        realization: None,
        extension_realization: None,
        frame_rank: None,
        flow_drift: None,
        umbilicity: Umbilicity::NotChecked,
        failures: Vec::new(),
    };
    let Some(base) = entry.stored_base_point(i) else {
        r.failures.push("no stored base point".into());
        return r;
    };
    r.base_point = base.primaries().map(|c| [c.re, c.im]);
    let df = match entry.defining_function(&params) {
        Ok(df) => df,
        Err(e) => {
            r.failures.push(fmt_err("equation", e));
            return r;
        }
    };
    let var = match entry.solve_coord() {
        Ok(v) => v,
        Err(e) => {
            r.failures.push(e.to_string());
            return r;
        }
    };

    match levi_classify(&df, &base, cfg.levi_tol) {
        Ok(c) => {
            if !entry.expected_levi.accepts(c.kind) {
                r.failures.push(format!("Levi form {} but expected {:?}", c.kind, entry.expected_levi));
            }
            r.levi = Some(c);
        }
        Err(e) => r.failures.push(fmt_err("Levi form", e)),
    }

    if cfg.check_umbilic {
        r.umbilicity = match r.levi.map(|c| c.kind) {
            Some(crate::hypersurface::LeviKind::Degenerate) => Umbilicity::Unsupported("Levi-degenerate".into()),
            _ => match moser_report(&df, &base) {
                Ok(m) if m.umbilic => Umbilicity::Yes,
                Ok(_) => Umbilicity::No,
                Err(e) => Umbilicity::Unsupported(e.to_string()),
            },
        };
        let got = match r.umbilicity {
            Umbilicity::Yes => Some(true),
            Umbilicity::No => Some(false),
            _ => None,
        };
        if let (Some(want), Some(got)) = (entry.spherical, got) {
            if want != got {
                r.failures.push(format!("umbilic = {got}, expected spherical = {want}"));
            }
        }
    }

    let frame = match entry.frame(&params) {
        Ok(Some(f)) => f,
        Ok(None) => return r,
        Err(e) => {
            r.failures.push(fmt_err("frame", e));
            return r;
        }
    };

    let seed = cfg.seed.wrapping_add(fnv(&entry.id)).wrapping_add(i as u64);
    let mut pts = vec![base];
    if cfg.points > 1 {
        match sample_points(&df, &base, cfg.points - 1, cfg.radius, seed, var) {
            Ok(p) => pts.extend(p),
            Err(e) => {
                r.failures.push(fmt_err("sampling", e));
                return r;
            }
        }
    }

    match check_fields(&frame.fields, &df, &pts) {
        Ok(t) => {
            if !(t <= cfg.tangency_tol) {
                r.failures.push(format!("tangency residual {t:.3e} > {:.0e}", cfg.tangency_tol));
            }
            r.tangency = Some(t);
        }
        Err(e) => r.failures.push(e),
    }

    match real_rank_at(&frame, &base) {
        Ok(k) => {
            if k < 5 {
                r.failures.push(format!("frame has real rank {k} at the base point"));
            }
            r.frame_rank = Some(k);
        }
        Err(e) => r.failures.push(fmt_err("rank", e)),
    }

    match entry.algebra(&params) {
        Ok(Some(sc)) => match verify_realization(&frame, &sc, &pts, cfg.realization_tol) {
            Ok(rep) => {
                if !rep.pass {
                    r.failures.push(format!(
                        "realization residual {:.3e} > {:.0e} at pair {:?}",
                        rep.max_residual, cfg.realization_tol, rep.worst_pair
                    ));
                }
                r.realization = Some(rep.max_residual);
            }
            Err(e) => r.failures.push(fmt_err("realization", e)),
        },
        Ok(None) => {}
        Err(e) => r.failures.push(e.to_string()),
    }

    if entry.extension.is_some() {
        let ext = entry.extended_frame(&params);
        let sc = entry.extension_algebra(&params);
        match (ext, sc) {
            (Ok(Some(ext)), Ok(Some(sc))) => {
                match check_fields(&ext.fields[frame.len()..], &df, &pts) {
                    Ok(t) => {
                        if !(t <= cfg.tangency_tol) {
                            r.failures.push(format!("extension tangency residual {t:.3e}"));
                        }
                        r.tangency = r.tangency.map(|x| x.max(t));
                    }
                    Err(e) => r.failures.push(e),
                }
                match verify_realization(&ext, &sc, &pts, cfg.realization_tol) {
                    Ok(rep) => {
                        if !rep.pass {
                            r.failures.push(format!(
                                "extension realization residual {:.3e} at pair {:?}",
                                rep.max_residual, rep.worst_pair
                            ));
                        }
                        r.extension_realization = Some(rep.max_residual);
                    }
                    Err(e) => r.failures.push(fmt_err("extension realization", e)),
                }
            }
            (Err(e), _) => r.failures.push(fmt_err("extension", e)),
            (_, Err(e)) => r.failures.push(e.to_string()),
            _ => {}
        }
    }

    if let Some(fc) = cfg.flow {
        let all = match entry.extended_frame(&params) {
            Ok(Some(x)) => x,
            _ => frame,
        };
        let mut worst: f64 = 0.0;
        for p in pts.iter().take(fc.points) {
            for f in &all.fields {
                match flow_drift(f, &df, p, fc.t_end, fc.step) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => {
                        r.failures.push(fmt_err("flow", e));
                        return r;
                    }
                }
            }
        }
        if !(worst <= fc.tol) {
            r.failures.push(format!("flow drift {worst:.3e} > {:.0e}", fc.tol));
        }
        r.flow_drift = Some(worst);
    }
    r
}

/// Verify every parameter sample of one entry.
pub fn verify_entry(entry: &CatalogEntry, cfg: &VerifyConfig) -> EntryReport {
    let samples: Vec<SampleReport> = (0..entry.sample_count()).map(|i| verify_sample(entry, i, cfg)).collect();
    EntryReport {
        id: entry.id.clone(),
        section: entry.section.clone(),
        expected_levi: entry.expected_levi,
        pass: samples.iter().all(|s| s.failures.is_empty()),
        samples,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SectionCount {
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub config: VerifyConfig,
    pub entries: Vec<EntryReport>,
    pub by_section: BTreeMap<String, SectionCount>,
    pub failures: usize,
}

impl Summary {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }

    /// Aligned human-readable table, one row per entry.
    pub fn table(&self) -> String {
        let cell = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.2e}"));
        let mut rows = vec![[
            "id".to_string(),
            "section".into(),
            "samples".into(),
            "levi".into(),
            "tangency".into(),
            "realization".into(),
            "flow".into(),
            "result".into(),
        ]];
        for e in &self.entries {
            let mut kinds: Vec<String> = e
                .samples
                .iter()
                .filter_map(|s| s.levi.map(|l| l.kind.to_string()))
                .collect();
            kinds.dedup();
            rows.push([
                e.id.clone(),
                e.section.clone(),
                e.samples.len().to_string(),
                kinds.join("/"),
                cell(e.max_of(|s| s.tangency)),
                cell(e.max_of(|s| s.realization.into_iter().chain(s.extension_realization).reduce(f64::max))),
                cell(e.max_of(|s| s.flow_drift)),
                if e.pass { "PASS".into() } else { "FAIL".into() },
            ]);
        }
        let mut width = [0usize; 8];
        for r in &rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
            writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
        }
        for e in &self.entries {
            for (i, f) in e.failures() {
                writeln!(out, "{} [sample {i}]: {f}", e.id).unwrap();
            }
        }
        let (n, ok) = (self.entries.len(), self.entries.iter().filter(|e| e.pass).count());
        writeln!(out, "{ok}/{n} entries passed").unwrap();
        out
    }
}

/// Verify entries in parallel; the summary keeps the input order.
pub fn verify_all(entries: &[CatalogEntry], cfg: &VerifyConfig) -> Summary {
    let reports: Vec<EntryReport> = entries.par_iter().map(|e| verify_entry(e, cfg)).collect();
    let mut by_section: BTreeMap<String, SectionCount> = BTreeMap::new();
    for r in &reports {
        let c = by_section.entry(r.section.clone()).or_default();
        c.entries += 1;
        if r.pass {
            c.passed += 1;
        } else {
            c.failed += 1;
        }
    }
    Summary {
        config: *cfg,
        failures: reports.iter().filter(|r| !r.pass).count(),
        entries: reports,
        by_section,
    }
}
