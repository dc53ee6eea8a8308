//! Finite exact descriptions of closed conic subsets of `R^d \ {0}`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::feasibility::LinearSystem;
use super::rational::*;
use crate::error::{Error, Result};
use crate::numerics;

/// Convex polyhedral cone in `R^n` (as a set it always contains its apex)
/// used as one side of a product `X × Ξ`. `origin` says whether the apex
/// itself belongs to the factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub dim: usize,
    pub generators: Vec<QVec>,
    pub origin: bool,
}

impl Factor {
    pub fn zero(dim: usize) -> Self {
        Self { dim, generators: Vec::new(), origin: true }
    }

    /// `R^n`, apex included.
    pub fn space(dim: usize) -> Self {
        let mut generators = Vec::new();
        for i in 0..dim {
            generators.push(unit(dim, i));
            generators.push(neg(&unit(dim, i)));
        }
        Self { dim, generators, origin: true }
    }

    pub fn cone(dim: usize, generators: Vec<QVec>, origin: bool) -> Self {
        Self { dim, generators, origin }
    }
}

/// Direction with an angular tolerance, as produced by numerical estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    pub center: Vec<f64>,
    pub radius_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    /// Nonnegative combinations of the generators, minus the listed
    /// subspaces (each the common kernel of a set of linear forms).
    Polyhedral { generators: Vec<QVec>, excluded: Vec<QMat> },
    Ray { direction: QVec },
    /// Linear span of the basis.
    Subspace { basis: Vec<QVec> },
    /// `X × Ξ` in `R^n × R^n`.
    Product { x: Factor, xi: Factor },
    /// `{(x, Ax)}`.
    Graph { matrix: QMat },
    Caps { caps: Vec<Cap> },
}

/// Closed convex cone given by generators, with a list of linear subspaces
/// (each as the common kernel of some forms) removed. The origin is always
/// removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCone {
    pub dim: usize,
    pub generators: Vec<QVec>,
    pub excluded: Vec<QMat>,
}

impl Component {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Polyhedral { .. } => "polyhedral",
            Self::Ray { .. } => "ray",
            Self::Subspace { .. } => "subspace",
            Self::Product { .. } => "product",
            Self::Graph { .. } => "graph",
            Self::Caps { .. } => "caps",
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Self::Caps { .. })
    }

    /// Exact convex form; `Ok(None)` for an empty component.
    pub fn to_poly(&self, dim: usize) -> Result<Option<PolyCone>> {
        let mut excluded = Vec::new();
        let generators = match self {
            Self::Polyhedral { generators, excluded: ex } => {
                excluded = ex.clone();
                generators.clone()
            }
            Self::Ray { direction } => vec![direction.clone()],
            Self::Subspace { basis } => basis.iter().flat_map(|b| [b.clone(), neg(b)]).collect(),
            Self::Graph { matrix } => {
                let n = matrix.len();
                let mut g = Vec::new();
                for i in 0..n {
                    let mut v = unit(n, i);
                    v.extend(matrix.iter().map(|r| r[i].clone()));
                    g.push(neg(&v));
                    g.push(v);
                }
                g
            }
            Self::Product { x, xi } => {
                let n = x.dim;
                if (x.generators.is_empty() && !x.origin) || (xi.generators.is_empty() && !xi.origin) {
                    return Ok(None);
                }
                let mut g = Vec::new();
                for h in &x.generators {
                    let mut v = h.clone();
                    v.extend(zeros(n));
                    g.push(v);
                }
                for h in &xi.generators {
                    let mut v = zeros(n);
                    v.extend(h.iter().cloned());
                    g.push(v);
                }
                if !x.origin {
                    excluded.push((0..n).map(|i| unit(2 * n, i)).collect());
                }
                if !xi.origin {
                    excluded.push((0..n).map(|i| unit(2 * n, n + i)).collect());
                }
                g
            }
            Self::Caps { .. } => return Err(Error::NotExact),
        };
        let generators: Vec<QVec> = generators.into_iter().filter(|g| !is_zero_vec(g)).collect();
        if generators.is_empty() {
            return Ok(None);
        }
        Ok(Some(PolyCone { dim, generators, excluded }))
    }

    fn validate(&self, dim: usize) -> std::result::Result<(), String> {
        let check = |v: &QVec, d: usize| {
            if v.len() == d {
                Ok(())
            } else {
                Err(format!("vector of length {} in ambient dimension {d}", v.len()))
            }
        };
        match self {
            Self::Polyhedral { generators, excluded } => {
                generators.iter().try_for_each(|g| check(g, dim))?;
                excluded.iter().flatten().try_for_each(|f| check(f, dim))
            }
            Self::Ray { direction } => {
                check(direction, dim)?;
                if is_zero_vec(direction) {
                    Err("zero ray direction".into())
                } else {
                    Ok(())
                }
            }
            Self::Subspace { basis } => basis.iter().try_for_each(|g| check(g, dim)),
            Self::Graph { matrix } => {
                if 2 * matrix.len() != dim || matrix.iter().any(|r| r.len() != matrix.len()) {
                    Err("graph matrix must be n×n with 2n = ambient dimension".into())
                } else {
                    Ok(())
                }
            }
            Self::Product { x, xi } => {
                if x.dim + xi.dim != dim || x.dim != xi.dim {
                    return Err("product factors must split the ambient dimension evenly".into());
                }
                x.generators.iter().chain(&xi.generators).try_for_each(|g| check(g, x.dim))
            }
            Self::Caps { caps } => caps.iter().try_for_each(|c| {
                if c.center.len() != dim || numerics::norm(&c.center) == 0.0 {
                    Err("cap center has wrong length or is zero".into())
                } else {
                    Ok(())
                }
            }),
        }
    }
}

impl PolyCone {
    /// Exact membership of a nonzero vector.
    pub fn contains(&self, v: &[Q]) -> bool {
        if is_zero_vec(v) {
            return false;
        }
        if self.excluded.iter().any(|forms| forms.iter().all(|f| dot(f, v).is_zero())) {
            return false;
        }
        self.closed_contains(v)
    }

    /// Membership in the closed cone (apex and excluded faces included).
    pub fn closed_contains(&self, v: &[Q]) -> bool {
        let k = self.generators.len();
        let mut sys = LinearSystem::new(k);
        for i in 0..self.dim {
            sys.eq(self.generators.iter().map(|g| g[i].clone()).collect(), v[i].clone());
        }
        matches!(sys.solve(), Ok(Some(_)))
    }

    /// `d × k` matrix whose columns are the generators.
    pub fn generator_matrix(&self) -> QMat {
        (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i].clone()).collect())
            .collect()
    }
}

/// A closed conic set: finite union of components in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicSet {
    dim: usize,
    components: Vec<Component>,
}

impl ConicSet {
    pub fn new(dim: usize, components: Vec<Component>) -> Result<Self> {
        for (index, c) in components.iter().enumerate() {
            c.validate(dim).map_err(|reason| Error::Representation { index, reason })?;
        }
        Ok(Self { dim, components })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, components: Vec::new() }
    }

    /// `{0} × (R^n \ 0)`.
    pub fn zero_times_space(n: usize) -> Self {
        Self { dim: 2 * n, components: vec![Component::Product { x: Factor::zero(n), xi: Factor::space(n) }] }
    }

    /// `(R^n \ 0) × {0}`.
    pub fn space_times_zero(n: usize) -> Self {
        Self { dim: 2 * n, components: vec![Component::Product { x: Factor::space(n), xi: Factor::zero(n) }] }
    }

    /// `{(x, Ax) : x ≠ 0}`.
    pub fn graph(matrix: QMat) -> Self {
        Self { dim: 2 * matrix.len(), components: vec![Component::Graph { matrix }] }
    }

    pub fn polyhedral(dim: usize, generators: Vec<QVec>) -> Self {
        Self { dim, components: vec![Component::Polyhedral { generators, excluded: Vec::new() }] }
    }

    pub fn product(x: Factor, xi: Factor) -> Self {
        Self { dim: x.dim + xi.dim, components: vec![Component::Product { x, xi }] }
    }

    pub fn caps(dim: usize, caps: Vec<Cap>) -> Self {
        Self { dim, components: vec![Component::Caps { caps }] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_exact(&self) -> bool {
        self.components.iter().all(Component::is_exact)
    }

    pub fn union(&self, other: &ConicSet) -> ConicSet {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        ConicSet { dim: self.dim, components }
    }

    /// Exact convex pieces; caps are rejected.
    pub fn poly_components(&self) -> Result<Vec<PolyCone>> {
        let mut out = Vec::new();
        for c in &self.components {
            if let Some(p) = c.to_poly(self.dim)? {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Convex pieces with caps replaced by rays through their centers.
    pub(crate) fn poly_components_relaxed(&self) -> Vec<PolyCone> {
        let mut out = Vec::new();
        for c in &self.components {
            match c {
                Component::Caps { caps } => {
                    for cap in caps {
                        out.push(PolyCone {
                            dim: self.dim,
                            generators: vec![qvec_from_f64(&cap.center)],
                            excluded: Vec::new(),
                        });
                    }
                }
                other => {
                    if let Some(p) = other.to_poly(self.dim).expect("exact component") {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// Membership of a nonzero vector: exact for rational components, within
    /// the cap radius for sampled caps.
    pub fn member(&self, v: &[Q]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        if is_zero_vec(v) {
            return Err(Error::InvalidField("membership query at the origin".into()));
        }
        for c in &self.components {
            let hit = match c {
                Component::Caps { caps } => {
                    let vf = to_f64(v);
                    caps.iter().any(|cap| numerics::angle_deg(&vf, &cap.center) <= cap.radius_deg)
                }
                other => other.to_poly(self.dim)?.is_some_and(|p| p.contains(v)),
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn member_f64(&self, v: &[f64]) -> Result<bool> {
        self.member(&qvec_from_f64(v))
    }

    /// Smallest angle (degrees) between `v` and any point of the closed set;
    /// `None` for the empty set.
    pub fn angular_distance(&self, v: &[f64]) -> Option<f64> {
        let mut best: Option<f64> = None;
        for c in &self.components {
            let d = match c {
                Component::Caps { caps } => caps
                    .iter()
                    .map(|cap| (numerics::angle_deg(v, &cap.center) - cap.radius_deg).max(0.0))
                    .fold(f64::INFINITY, f64::min),
                other => match other.to_poly(self.dim).expect("exact") {
                    Some(p) => {
                        let gens: Vec<Vec<f64>> = p.generators.iter().map(|g| to_f64(g)).collect();
                        cone_angle(&gens, v)
                    }
                    None => continue,
                },
            };
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
        best
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "components": self.components.iter().map(component_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let dim = value
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Config("conic set needs integer \"dim\"".into()))? as usize;
        let comps = value
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Config("conic set needs \"components\" array".into()))?;
        let mut components = Vec::with_capacity(comps.len());
        for (index, c) in comps.iter().enumerate() {
            components.push(
                parse_component(c, dim).map_err(|reason| Error::Representation { index, reason })?,
            );
        }
        Self::new(dim, components)
    }
}

/// Angle in degrees from `v` to the cone generated by `gens`, via
/// nonnegative least squares projection.
pub fn cone_angle(gens: &[Vec<f64>], v: &[f64]) -> f64 {
    let nv = numerics::norm(v);
    let u: Vec<f64> = v.iter().map(|x| x / nv).collect();
    let lambda = nnls(gens, &u);
    let d = u.len();
    let mut p = vec![0.0; d];
    for (g, l) in gens.iter().zip(&lambda) {
        for i in 0..d {
            p[i] += g[i] * l;
        }
    }
    let pn = numerics::norm(&p);
    if pn < 1e-14 {
        return 90.0_f64.max(
            gens.iter()
                .map(|g| numerics::angle_deg(g, &u))
                .fold(f64::INFINITY, f64::min),
        );
    }
    let r: Vec<f64> = u.iter().zip(&p).map(|(a, b)| a - b).collect();
    numerics::norm(&r).atan2(pn).to_degrees()
}

/// Lawson–Hanson nonnegative least squares `min ‖Gλ − b‖, λ ≥ 0` with the
/// columns of `G` given as `gens`.
fn nnls(gens: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let k = gens.len();
    let mut x = vec![0.0; k];
    let mut passive = vec![false; k];
    let resid = |x: &[f64]| -> Vec<f64> {
        let mut r = b.to_vec();
        for (g, l) in gens.iter().zip(x) {
            for i in 0..r.len() {
                r[i] -= g[i] * l;
            }
        }
        r
    };
    for _ in 0..(3 * k + 10) {
        let r = resid(&x);
        let w: Vec<f64> = gens.iter().map(|g| numerics::dot(g, &r)).collect();
        let cand = (0..k).filter(|&j| !passive[j] && w[j] > 1e-12).max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = cand else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..k).filter(|&i| passive[i]).collect();
            let z = least_squares(gens, &idx, b);
            if z.iter().all(|&v| v > 1e-15) {
                for (t, &i) in idx.iter().enumerate() {
                    x[i] = z[t];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (t, &i) in idx.iter().enumerate() {
                if z[t] <= 1e-15 {
                    alpha = alpha.min(x[i] / (x[i] - z[t]));
                }
            }
            for (t, &i) in idx.iter().enumerate() {
                x[i] += alpha * (z[t] - x[i]);
                if x[i] <= 1e-15 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if idx.iter().all(|&i| !passive[i]) {
                break;
            }
        }
    }
    x
}

fn least_squares(gens: &[Vec<f64>], idx: &[usize], b: &[f64]) -> Vec<f64> {
    let m = idx.len();
    let mut a = vec![vec![0.0; m + 1]; m];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            a[r][c] = numerics::dot(&gens[i], &gens[j]);
        }
        a[r][m] = numerics::dot(&gens[i], b);
    }
    // Gaussian elimination with partial pivoting; tiny ridge for rank defects
    for (r, row) in a.iter_mut().enumerate() {
        row[r] += 1e-14;
    }
    for c in 0..m {
        let p = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        if d.abs() < 1e-300 {
            continue;
        }
        for r in 0..m {
            if r != c {
                let f = a[r][c] / d;
                for j in c..=m {
                    a[r][j] -= f * a[c][j];
                }
            }
        }
    }
    (0..m).map(|r| if a[r][r].abs() < 1e-300 { 0.0 } else { a[r][m] / a[r][r] }).collect()
}

fn q_json(x: &Q) -> Value {
    let n = x.numer().to_i64();
    let d = x.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => json!([n, d]),
        _ => json!([x.numer().to_string(), x.denom().to_string()]),
    }
}

pub(crate) fn vec_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_json).collect())
}

pub(crate) fn vecs_json(v: &[QVec]) -> Value {
    Value::Array(v.iter().map(|x| vec_json(x)).collect())
}

fn factor_json(f: &Factor) -> Value {
    json!({"dim": f.dim, "generators": vecs_json(&f.generators), "origin": f.origin})
}

fn component_json(c: &Component) -> Value {
    match c {
        Component::Polyhedral { generators, excluded } if excluded.is_empty() => {
            json!({"kind": "polyhedral", "generators": vecs_json(generators)})
        }
        Component::Polyhedral { generators, excluded } => json!({
            "kind": "polyhedral",
            "generators": vecs_json(generators),
            "excluded": excluded.iter().map(|f| vecs_json(f)).collect::<Vec<_>>(),
        }),
        Component::Ray { direction } => json!({"kind": "ray", "direction": vec_json(direction)}),
        Component::Subspace { basis } => json!({"kind": "subspace", "basis": vecs_json(basis)}),
        Component::Graph { matrix } => json!({"kind": "graph", "matrix": vecs_json(matrix)}),
        Component::Product { x, xi } => json!({"kind": "product", "x": factor_json(x), "xi": factor_json(xi)}),
        Component::Caps { caps } => json!({
            "kind": "caps",
            "caps": caps.iter().map(|c| json!({"center": c.center, "radius_deg": c.radius_deg})).collect::<Vec<_>>(),
        }),
    }
}

fn parse_big(v: &Value) -> std::result::Result<BigInt, String> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| format!("non-integer {n}")),
        Value::String(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

/// Accepts `[num, den]`, a bare integer, or a decimal number (converted exactly).
fn parse_q(v: &Value) -> std::result::Result<Q, String> {
    match v {
        Value::Array(p) if p.len() == 2 => {
            let d = parse_big(&p[1])?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Q::new(parse_big(&p[0])?, d))
        }
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(qi(i)),
            None => n.as_f64().filter(|f| f.is_finite()).map(q_from_f64).ok_or_else(|| format!("bad number {n}")),
        },
        Value::String(_) => Ok(Q::from_integer(parse_big(v)?)),
        other => Err(format!("expected rational, got {other}")),
    }
}

fn parse_vec(v: &Value) -> std::result::Result<QVec, String> {
    v.as_array().ok_or_else(|| format!("expected vector, got {v}"))?.iter().map(parse_q).collect()
}

fn parse_vecs(v: Option<&Value>, what: &str) -> std::result::Result<Vec<QVec>, String> {
    v.and_then(Value::as_array)
        .ok_or_else(|| format!("missing \"{what}\""))?
        .iter()
        .map(parse_vec)
        .collect()
}

fn parse_factor(v: Option<&Value>, n: usize) -> std::result::Result<Factor, String> {
    let v = v.ok_or("missing product factor")?;
    Ok(Factor {
        dim: n,
        generators: parse_vecs(v.get("generators"), "generators")?,
        origin: v.get("origin").and_then(Value::as_bool).unwrap_or(true),
    })
}

fn parse_component(v: &Value, dim: usize) -> std::result::Result<Component, String> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or("missing \"kind\"")?;
    match kind {
        "polyhedral" => {
            let excluded = match v.get("excluded").and_then(Value::as_array) {
                Some(list) => list.iter().map(|f| parse_vecs(Some(f), "excluded")).collect::<std::result::Result<_, _>>()?,
                None => Vec::new(),
            };
            Ok(Component::Polyhedral { generators: parse_vecs(v.get("generators"), "generators")?, excluded })
        }
        "ray" => Ok(Component::Ray { direction: parse_vec(v.get("direction").ok_or("missing \"direction\"")?)? }),
        "subspace" => Ok(Component::Subspace { basis: parse_vecs(v.get("basis"), "basis")? }),
        "graph" => Ok(Component::Graph { matrix: parse_vecs(v.get("matrix"), "matrix")? }),
        "product" => Ok(Component::Product {
            x: parse_factor(v.get("x"), dim / 2)?,
            xi: parse_factor(v.get("xi"), dim / 2)?,
        }),
        "caps" => {
            let caps = v.get("caps").and_then(Value::as_array).ok_or("missing \"caps\"")?;
            let caps = caps
                .iter()
                .map(|c| {
                    let center: Vec<f64> = serde_json::from_value(c.get("center").cloned().unwrap_or(Value::Null))
                        .map_err(|e| format!("cap center: {e}"))?;
                    let radius_deg = c.get("radius_deg").and_then(Value::as_f64).ok_or("cap needs radius_deg")?;
                    Ok(Cap { center, radius_deg })
                })
                .collect::<std::result::Result<Vec<_>, String>>()?;
            Ok(Component::Caps { caps })
        }
        other => Err(format!("unknown component kind {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let s = ConicSet::zero_times_space(1);
        assert!(s.member(&qvec(&[0, 5])).unwrap());
        assert!(!s.member(&qvec(&[1, 5])).unwrap());
        let g = ConicSet::graph(vec![qvec(&[2])]);
        assert!(g.member(&qvec(&[3, 6])).unwrap());
        assert!(g.member(&qvec(&[-3, -6])).unwrap());
        assert!(!g.member(&qvec(&[3, 5])).unwrap());
        assert!(s.member(&qvec(&[0, 0])).is_err());
        assert!(s.member(&qvec(&[0, 0, 1])).is_err());
    }

    #[test]
    fn product_exclusion() {
        // Γ1 × Γ2 with Γ2 one-sided and 0 ∉ Γ2
        let p = ConicSet::product(Factor::space(1), Factor::cone(1, vec![qvec(&[1])], false));
        assert!(p.member(&qvec(&[3, 1])).unwrap());
        assert!(!p.member(&qvec(&[3, 0])).unwrap());
        assert!(!p.member(&qvec(&[3, -1])).unwrap());
    }

    #[test]
    fn caps_membership_is_angular() {
        let c = ConicSet::caps(2, vec![Cap { center: vec![1.0, 0.0], radius_deg: 5.0 }]);
        assert!(c.member_f64(&[1.0, 0.05]).unwrap());
        assert!(!c.member_f64(&[1.0, 0.2]).unwrap());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let s = ConicSet::zero_times_space(2).union(&ConicSet::graph(vec![vec![q(1, 2), qi(0)], vec![qi(0), qi(-3)]]));
        let back = ConicSet::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let bad = json!({"dim": 2, "components": [{"kind": "ray", "direction": [[1,1]]}, {"kind": "ray", "direction": [[1, 2], [1, 1]]}]});
        match ConicSet::from_json(&bad) {
            Err(Error::Representation { index, .. }) => assert_eq!(index, 0),
            other => panic!("{other:?}"),
        }
        let bad_kind = json!({"dim": 2, "components": [{"kind": "blob"}]});
        assert!(ConicSet::from_json(&bad_kind).is_err());
    }

    #[test]
    fn angular_distance_to_axes() {
        let s = ConicSet::zero_times_space(1);
        let d = s.angular_distance(&[1.0, 1.0]).unwrap();
        assert!((d - 45.0).abs() < 1e-9);
        assert!(s.angular_distance(&[0.0, -2.0]).unwrap() < 1e-9);
        let half = ConicSet::polyhedral(2, vec![qvec(&[1, 0])]);
        assert!((half.angular_distance(&[-1.0, 0.0]).unwrap() - 180.0).abs() < 1e-9);
        assert!(ConicSet::empty(2).angular_distance(&[1.0, 0.0]).is_none());
    }
}
