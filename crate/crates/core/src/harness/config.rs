use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cone::rational::q_from_f64;
use crate::cone::{ConicSet, Q};
use crate::field::{AnalyticDistribution, AntisymmetricMatrix, Grid, SampledField};
use crate::spectral::{gaussian_window, hann_window, WindowFunction};
use crate::twisted::{Boundary, ProductKind};
use crate::wavefront::EstimatorParams;
use crate::{Error, Result};

pub const SCHEMA: &str = "twistlab.config/1";
pub const DEFAULT_SEED: u64 = 0x7457_1a8b;

fn default_schema() -> String {
    SCHEMA.into()
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Top-level job description. Each subcommand reads its own section and
/// ignores the others.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub product: ProductConfig,
    #[serde(default)]
    pub wf: WfConfig,
    #[serde(default)]
    pub cone: ConeConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub calibrate: CalibrateConfig,
}

impl Default for JobConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config parses")
    }
}

impl JobConfig {
    /// Parses and checks the schema tag. Relative file references are
    /// resolved against `base`.
    pub fn from_str_with_base(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg: JobConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema != SCHEMA {
            return Err(Error::Config(format!("unsupported schema {:?}, expected {SCHEMA:?}", cfg.schema)));
        }
        if let Some(b) = base {
            cfg.rebase(b);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_str_with_base(&text, path.parent())
            .map_err(|e| Error::Config(format!("{}: {}", path.display(), strip_prefix(&e))))
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for f in [&mut self.product.f, &mut self.product.g, &mut self.wf.field] {
            if let FieldSpec::File(p) = f {
                fix(p);
            }
        }
        for c in &mut self.cone.checks {
            for s in c.sets_mut() {
                if let SetSpec::File(p) = s {
                    fix(p);
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::Config(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub points: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.dim, self.points, self.half_width)
    }
}

/// One matrix entry: a float or an exact `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
}

impl Entry {
    fn to_q(&self) -> Result<Q> {
        match self {
            Entry::Number(x) if x.is_finite() => Ok(q_from_f64(*x)),
            Entry::Number(x) => Err(Error::Config(format!("non-finite matrix entry {x}"))),
            Entry::Text(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Config(format!("cannot parse {s:?} as a rational"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if d == num_bigint::BigInt::from(0) {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// `"zero"`, `"symplectic"` or an explicit matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    Named(String),
    Matrix(Vec<Vec<Entry>>),
}

impl Default for ThetaSpec {
    fn default() -> Self {
        ThetaSpec::Named("zero".into())
    }
}

impl ThetaSpec {
    pub fn resolve(&self, dim: usize) -> Result<AntisymmetricMatrix> {
        match self {
            ThetaSpec::Named(s) if s == "zero" => Ok(AntisymmetricMatrix::zero(dim)),
            ThetaSpec::Named(s) if s == "symplectic" => {
                if !dim.is_multiple_of(2) {
                    return Err(Error::Config(format!("symplectic theta needs even dimension, got {dim}")));
                }
                Ok(AntisymmetricMatrix::symplectic(dim / 2))
            }
            ThetaSpec::Named(s) => Err(Error::Config(format!("unknown theta {s:?}"))),
            ThetaSpec::Matrix(rows) => {
                if rows.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: rows.len() });
                }
                let m = rows
                    .iter()
                    .map(|r| r.iter().map(Entry::to_q).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                AntisymmetricMatrix::from_rational(m)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSpec {
    Analytic(AnalyticDistribution),
    /// Sampled field JSON as written by `product`.
    File(PathBuf),
}

impl FieldSpec {
    pub fn load(&self, grid: &Grid) -> Result<SampledField> {
        match self {
            FieldSpec::Analytic(d) => d.sample(grid),
            FieldSpec::File(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let f = SampledField::from_json(v.get("field").unwrap_or(&v))?;
                f.grid().check_same(grid)?;
                Ok(f)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum WindowSpec {
    #[default]
    Gaussian,
    Hann { half_width: f64, power: u32 },
}


impl WindowSpec {
    pub fn build(&self, grid: &Grid) -> Result<WindowFunction> {
        match self {
            WindowSpec::Gaussian => Ok(gaussian_window(grid)),
            WindowSpec::Hann { half_width, power } => hann_window(grid, *half_width, *power),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductConfig {
    pub kind: ProductKind,
    pub grid: GridSpec,
    pub theta: ThetaSpec,
    pub f: FieldSpec,
    pub g: FieldSpec,
    pub boundary: Boundary,
    /// Also write a CSV slice along the first axis through the origin.
    pub csv: bool,
}

impl Default for ProductConfig {
    fn default() -> Self {
        let g = AnalyticDistribution::standard_gaussian(1);
        Self {
            kind: ProductKind::Product,
            grid: GridSpec { dim: 1, points: 64, half_width: 8.0 },
            theta: ThetaSpec::default(),
            f: FieldSpec::Analytic(g.clone()),
            g: FieldSpec::Analytic(g),
            boundary: Boundary::ZeroPad,
            csv: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WfConfig {
    pub grid: GridSpec,
    pub field: FieldSpec,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default)]
    pub estimator: EstimatorParams,
}

impl Default for WfConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec { dim: 1, points: 128, half_width: 12.0 },
            field: FieldSpec::Analytic(AnalyticDistribution::delta(&[0.0])),
            window: WindowSpec::Gaussian,
            estimator: EstimatorParams::default(),
        }
    }
}

/// Conic set given inline, by file, or as the exact wavefront set of a
/// catalog distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetSpec {
    Inline(Value),
    File(PathBuf),
    ExactWf(AnalyticDistribution),
}

impl SetSpec {
    pub fn load(&self) -> Result<ConicSet> {
        match self {
            SetSpec::Inline(v) => ConicSet::from_json(v),
            SetSpec::File(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
                ConicSet::from_json(v.get("set").unwrap_or(&v))
            }
            SetSpec::ExactWf(d) => Ok(d.exact_wf()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConditionForm {
    #[default]
    Direct,
    /// `ξ = 2θ⁻¹x` phrasing; needs invertible `θ`.
    Inverse,
    /// The `θ = 0` pointwise-product criterion.
    Pointwise,
}

/// One exact cone computation. `expect` turns it into a pass/fail check.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeCheck {
    Existence {
        name: String,
        u: SetSpec,
        v: SetSpec,
        #[serde(default)]
        form: ConditionForm,
        #[serde(default)]
        expect: Option<bool>,
    },
    Algebra {
        name: String,
        gamma1: SetSpec,
        #[serde(default = "yes")]
        gamma1_origin: bool,
        gamma2: SetSpec,
        #[serde(default)]
        expect: Option<bool>,
    },
    FlipPair {
        name: String,
        gamma: SetSpec,
        #[serde(default)]
        expect: Option<bool>,
    },
    PredictedProduct {
        name: String,
        u: SetSpec,
        v: SetSpec,
        #[serde(default)]
        expect: Option<SetSpec>,
    },
    PredictedStar {
        name: String,
        u: SetSpec,
        v: SetSpec,
        #[serde(default)]
        expect: Option<SetSpec>,
    },
}

fn yes() -> bool {
    true
}

impl ConeCheck {
    pub fn name(&self) -> &str {
        match self {
            ConeCheck::Existence { name, .. }
            | ConeCheck::Algebra { name, .. }
            | ConeCheck::FlipPair { name, .. }
            | ConeCheck::PredictedProduct { name, .. }
            | ConeCheck::PredictedStar { name, .. } => name,
        }
    }

    fn sets_mut(&mut self) -> Vec<&mut SetSpec> {
        match self {
            ConeCheck::Existence { u, v, .. } => vec![u, v],
            ConeCheck::Algebra { gamma1, gamma2, .. } => vec![gamma1, gamma2],
            ConeCheck::FlipPair { gamma, .. } => vec![gamma],
            ConeCheck::PredictedProduct { u, v, expect, .. } | ConeCheck::PredictedStar { u, v, expect, .. } => {
                let mut s = vec![u, v];
                if let Some(e) = expect {
                    s.push(e);
                }
                s
            }
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    #[serde(default)]
    pub theta: ThetaSpec,
    #[serde(default)]
    pub checks: Vec<ConeCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub suite: String,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { suite: "all".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    pub dims: Vec<usize>,
    pub points: usize,
    pub half_width: f64,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        Self { dims: vec![1, 2], points: 32, half_width: 6.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_schema() {
        let c = JobConfig::from_str_with_base("{}", None).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.schema, SCHEMA);
        let back = JobConfig::from_str_with_base(&c.to_json().to_string(), None).unwrap();
        assert_eq!(back.to_json(), c.to_json());
        let e = JobConfig::from_str_with_base(r#"{"schema": "twistlab.config/0"}"#, None).unwrap_err();
        assert!(e.to_string().contains("unsupported schema"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "{\n  \"seed\": 1,\n  \"bogus\": 2\n}";
        let e = JobConfig::from_str_with_base(text, None).unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
    }

    #[test]
    fn theta_specs() {
        let t: ThetaSpec = serde_json::from_str(r#"[["0", "1/3"], ["-1/3", 0]]"#).unwrap();
        let m = t.resolve(2).unwrap();
        assert_eq!(m.to_rational()[0][1], Q::new(1.into(), 3.into()));
        let bad: ThetaSpec = serde_json::from_str("[[0, 1], [1, 0]]").unwrap();
        assert!(matches!(bad.resolve(2), Err(Error::NotAntisymmetric)));
        assert!(ThetaSpec::Named("symplectic".into()).resolve(3).is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn cone_check_parses() {
        let text = r#"{"check": "algebra", "name": "lc",
            "gamma1": {"inline": {"dim": 2, "components": []}},
            "gamma2": {"exact_wf": {"kind": "delta", "a": [0.0]}}}"#;
        let c: ConeCheck = serde_json::from_str(text).unwrap();
        assert_eq!(c.name(), "lc");
    }
}
