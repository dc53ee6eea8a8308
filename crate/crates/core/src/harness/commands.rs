use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::cone::*;
use crate::field::SampledField;
use crate::twisted::{apply_product, twisted_convolution_with, ProductKind};
use crate::wavefront::{angular_containment, estimate_wf};
use crate::{par, Error, Result};

use super::calibration::run_calibration;
use super::config::{ConditionForm, ConeCheck, FieldSpec, JobConfig};
use super::report::{Check, VerificationReport};
use super::suites::{run_suite, SuiteContext};

/// Whether the command's own checks passed. Errors are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

/// Loads the config (or defaults) and applies command-line overrides.
pub fn resolve_config(opts: &RunOptions) -> Result<JobConfig> {
    let mut cfg = match &opts.config {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if opts.threads.is_some() {
        cfg.threads = opts.threads;
    }
    if cfg.threads == Some(0) {
        return Err(Error::Config("threads must be positive".into()));
    }
    Ok(cfg)
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn safe_name(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn product_anchor(kind: ProductKind) -> &'static str {
    match kind {
        ProductKind::Star => "twisted convolution",
        ProductKind::Product => "twisted convolution product",
        ProductKind::Pointwise => "pointwise product",
    }
}

/// `product` and `star`. `star` forces the twisted convolution.
pub fn cmd_product(cfg: &mut JobConfig, out: &Path, force_star: bool) -> Result<Outcome> {
    if force_star {
        cfg.product.kind = ProductKind::Star;
    }
    let p = &cfg.product;
    let grid = p.grid.build()?;
    let theta = p.theta.resolve(grid.dim())?;
    let f = p.f.load(&grid)?;
    let g = p.g.load(&grid)?;
    let result = match p.kind {
        ProductKind::Star => twisted_convolution_with(&f, &g, &theta, p.boundary)?,
        kind => apply_product(kind, &f, &g, &theta)?,
    };
    let name = match p.kind {
        ProductKind::Star => "star",
        _ => "product",
    };
    write_json(
        &out.join(format!("{name}.json")),
        &json!({
            "anchor": product_anchor(p.kind),
            "kind": p.kind,
            "field": result.to_json(),
            "config": cfg.to_json(),
        }),
    )?;
    if p.csv {
        write_slice(&result, &out.join(format!("{name}.csv")))?;
    }
    Ok(Outcome::Pass)
}

/// Values along the first axis with the other coordinates nearest zero.
fn write_slice(f: &SampledField, path: &Path) -> Result<()> {
    use std::io::Write;
    let g = f.grid();
    let mid = g.nearest_index(0.0).unwrap_or(g.points() / 2);
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,re,im,abs")?;
    for j in 0..g.points() {
        let mut idx = vec![mid; g.dim()];
        idx[0] = j;
        let z = f.values()[g.ravel(&idx)];
        writeln!(w, "{},{},{},{}", g.coord(j), z.re, z.im, z.norm())?;
    }
    Ok(())
}

pub fn cmd_wf(cfg: &JobConfig, out: &Path) -> Result<Outcome> {
    let c = &cfg.wf;
    let grid = c.grid.build()?;
    let u = c.field.load(&grid)?;
    let window = c.window.build(&grid)?;
    let est = estimate_wf(&u, &window, &c.estimator)?;
    let mut doc = json!({
        "anchor": "global wavefront set estimate",
        "estimate": est.to_json(),
        "flagged_count": est.flagged_count(),
        "config": cfg.to_json(),
    });
    if let FieldSpec::Analytic(d) = &c.field {
        let exact = d.exact_wf();
        let rep = angular_containment(&est, &exact, 10.0)?;
        doc["exact_wf"] = exact.to_json();
        doc["containment"] = rep.to_json();
    }
    write_json(&out.join("wf.json"), &doc)?;
    fs::create_dir_all(out)?;
    est.write_csv(BufWriter::new(fs::File::create(out.join("wf.csv"))?))?;
    Ok(Outcome::Pass)
}

fn set_dim_half(s: &ConicSet) -> Result<usize> {
    if !s.dim().is_multiple_of(2) {
        return Err(Error::Config(format!("conic set dimension {} is odd", s.dim())));
    }
    Ok(s.dim() / 2)
}

fn verdict_check(name: &str, anchor: &str, holds: bool, expect: Option<bool>, detail: Value) -> Check {
    let ok = expect.map_or(holds, |e| e == holds);
    let mut c = Check::new(name, anchor).holds(ok).detail(detail);
    c.measured = json!(holds);
    c
}

fn run_cone_check(cfg: &JobConfig, check: &ConeCheck, out: &Path) -> Result<Check> {
    let theta_spec = &cfg.cone.theta;
    match check {
        ConeCheck::Existence { name, u, v, form, expect } => {
            let (u, v) = (u.load()?, v.load()?);
            let theta = theta_spec.resolve(set_dim_half(&u)?)?;
            let r = match form {
                ConditionForm::Direct => existence_condition(&u, &v, &theta)?,
                ConditionForm::Inverse => existence_condition_inverse_form(&u, &v, &theta)?,
                ConditionForm::Pointwise => pointwise_criterion(&u, &v)?,
            };
            Ok(verdict_check(name, "existence condition", r.holds, *expect, r.to_json()))
        }
        ConeCheck::Algebra { name, gamma1, gamma1_origin, gamma2, expect } => {
            let (g1, g2) = (gamma1.load()?, gamma2.load()?);
            let theta = theta_spec.resolve(g1.dim())?;
            let r = cone_algebra_check(&g1, *gamma1_origin, &g2, &theta)?;
            Ok(verdict_check(name, "cone pair closed under the product", r.pass(), *expect, r.to_json()))
        }
        ConeCheck::FlipPair { name, gamma, expect } => {
            let r = flip_pair_condition(&gamma.load()?)?;
            Ok(verdict_check(name, "wavefront pairs (x, xi), (x, -xi)", r.holds, *expect, r.to_json()))
        }
        ConeCheck::PredictedProduct { name, u, v, expect } | ConeCheck::PredictedStar { name, u, v, expect } => {
            let star = matches!(check, ConeCheck::PredictedStar { .. });
            let (u, v) = (u.load()?, v.load()?);
            let theta = theta_spec.resolve(set_dim_half(&u)?)?;
            let set = if star { predicted_star_wf(&u, &v, &theta)? } else { predicted_product_wf(&u, &v, &theta)? };
            let anchor = if star { "predicted wavefront of the twisted convolution" } else { "predicted wavefront of the product" };
            let file = out.join(format!("{}.json", safe_name(name)));
            write_json(&file, &json!({"anchor": anchor, "set": set.to_json(), "config": cfg.to_json()}))?;
            let mut detail = json!({"set": set.to_json(), "file": file.display().to_string()});
            let ok = match expect {
                Some(e) => {
                    let same = same_set(&set, &e.load()?)?;
                    detail["matches_expected"] = json!(same);
                    same
                }
                None => true,
            };
            Ok(Check::new(name, anchor).holds(ok).detail(detail))
        }
    }
}

pub fn cmd_cone(cfg: &JobConfig, out: &Path) -> Result<Outcome> {
    // representation errors abort the run; they are config errors
    for c in &cfg.cone.checks {
        match c {
            ConeCheck::Existence { u, v, .. } | ConeCheck::PredictedProduct { u, v, .. } | ConeCheck::PredictedStar { u, v, .. } => {
                u.load()?;
                v.load()?;
            }
            ConeCheck::Algebra { gamma1, gamma2, .. } => {
                gamma1.load()?;
                gamma2.load()?;
            }
            ConeCheck::FlipPair { gamma, .. } => {
                gamma.load()?;
            }
        }
    }
    let checks = &cfg.cone.checks;
    let results = par::map_indices(checks.len(), |i| {
        let t = std::time::Instant::now();
        let c = run_cone_check(cfg, &checks[i], out);
        (c, t.elapsed().as_secs_f64())
    });
    let mut list = Vec::new();
    for (i, (c, secs)) in results.into_iter().enumerate() {
        let mut c = match c {
            Ok(c) => c,
            Err(e) => Check::errored(checks[i].name(), "cone calculus", &e),
        };
        c.seconds = secs;
        list.push(c);
    }
    let report = VerificationReport::new("cone", list);
    print!("{}", report.summary());
    write_json(&out.join("cone_report.json"), &report.to_json(&cfg.to_json()))?;
    Ok(Outcome::from_bool(report.pass()))
}

pub fn cmd_verify(cfg: &mut JobConfig, suite: Option<&str>, out: &Path) -> Result<Outcome> {
    if let Some(s) = suite {
        cfg.verify.suite = s.to_string();
    }
    let ctx = SuiteContext { seed: cfg.seed, ..SuiteContext::default() };
    let report = run_suite(&cfg.verify.suite, &ctx)?;
    print!("{}", report.summary());
    write_json(
        &out.join(format!("verify_{}.json", safe_name(&cfg.verify.suite))),
        &report.to_json(&cfg.to_json()),
    )?;
    Ok(Outcome::from_bool(report.pass()))
}

pub fn cmd_calibrate(cfg: &JobConfig, out: &Path) -> Result<Outcome> {
    let cal = run_calibration(&cfg.calibrate)?;
    let mut doc = serde_json::to_value(&cal)?;
    doc["anchor"] = json!("normalization constants measured against brute-force sums");
    doc["config"] = cfg.to_json();
    write_json(&out.join("calibration.json"), &doc)?;
    for c in &cal.star_constant {
        println!("c({}) = {:.15} (analytic {:.15})", c.dim, c.measured, c.analytic);
    }
    for c in &cal.parseval {
        println!("parseval({}) = {:.15}", c.dim, c.measured);
    }
    Ok(Outcome::Pass)
}
