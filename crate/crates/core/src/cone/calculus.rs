//! Set-level wavefront calculus: Fourier rotation, chirp shear, pullback,
//! the twisted product existence condition and predicted wavefront sets,
//! and the algebra conditions on product cones.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::conic::{vec_json, vecs_json, Cap, Component, ConicSet, Factor, PolyCone};
use super::feasibility::LinearSystem;
use super::rational::*;
use crate::error::{Error, Result};
use crate::field::AntisymmetricMatrix;

/// Search for `z ≥ 0` with `eqs · z = 0` such that, for every group of
/// linear forms, at least one form is nonzero at `z`.
pub(crate) struct ConeProblem {
    vars: usize,
    eqs: Vec<QVec>,
    groups: Vec<Vec<QVec>>,
}

impl ConeProblem {
    pub(crate) fn new(vars: usize) -> Self {
        Self { vars, eqs: Vec::new(), groups: Vec::new() }
    }

    pub(crate) fn eq(&mut self, row: QVec) -> &mut Self {
        self.eqs.push(row);
        self
    }

    pub(crate) fn nonzero(&mut self, forms: Vec<QVec>) -> &mut Self {
        self.groups.push(forms);
        self
    }

    fn satisfies(&self, z: &[Q]) -> bool {
        z.iter().all(|v| !v.is_negative())
            && self.eqs.iter().all(|e| dot(e, z).is_zero())
            && self.groups.iter().all(|g| g.iter().any(|f| !dot(f, z).is_zero()))
    }

    pub(crate) fn find(&self) -> Result<Option<QVec>> {
        let mut parts = Vec::new();
        for group in &self.groups {
            let mut found = None;
            'forms: for f in group.iter().filter(|f| !is_zero_vec(f)) {
                for sign in [Q::one(), -Q::one()] {
                    let mut sys = LinearSystem::new(self.vars);
                    for e in &self.eqs {
                        sys.eq(e.clone(), Q::zero());
                    }
                    sys.ge(scale(f, &sign), Q::one());
                    if let Some(z) = sys.solve()? {
                        found = Some(z);
                        break 'forms;
                    }
                }
            }
            match found {
                Some(z) => parts.push(z),
                None => return Ok(None),
            }
        }
        if parts.is_empty() {
            return Ok(Some(zeros(self.vars)));
        }
        // Each group fails only on a proper subspace of combination weights,
        // so a moment curve (1, s, s², ...) leaves all of them for some small s.
        for s in 1..=(2 * parts.len() as i64 + 2) {
            let mut z = zeros(self.vars);
            let mut c = Q::one();
            for p in &parts {
                z = add(&z, &scale(p, &c));
                c *= qi(s);
            }
            if self.satisfies(&z) {
                return Ok(Some(z));
            }
        }
        Err(Error::TooLarge(parts.len()))
    }
}

/// Extreme rays of the pointed cone `{z ≥ 0 : eqs · z = 0}`, found as the
/// minimal supports carrying a one-dimensional kernel of constant sign.
pub(crate) fn extreme_rays(eqs: &[QVec], vars: usize) -> Vec<QVec> {
    let r = rank(eqs);
    let mut rays = Vec::new();
    let mut subset = Vec::new();
    for size in 1..=vars.min(r + 1) {
        subsets(vars, size, 0, &mut subset, &mut |cols| {
            let sub: QMat = eqs.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            let ns = if sub.is_empty() { identity(cols.len()) } else { nullspace(&sub, cols.len()) };
            if ns.len() != 1 {
                return;
            }
            let v = &ns[0];
            let positive = v.iter().all(Signed::is_positive);
            let negative = v.iter().all(Signed::is_negative);
            if !(positive || negative) {
                return;
            }
            let mut z = zeros(vars);
            for (k, &c) in cols.iter().enumerate() {
                z[c] = if positive { v[k].clone() } else { -v[k].clone() };
            }
            rays.push(z);
        });
    }
    rays
}

fn subsets(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == size {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < size - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, size, i + 1, cur, f);
        cur.pop();
    }
}

/// Generators of `T({z ≥ 0 : eqs · z = 0})`, primitive and deduplicated.
pub(crate) fn image_generators(eqs: &[QVec], vars: usize, t: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    for ray in extreme_rays(eqs, vars) {
        let img = primitive(&mat_vec(t, &ray));
        if !is_zero_vec(&img) && !out.contains(&img) {
            out.push(img);
        }
    }
    out
}

fn columns(rows: &[QVec], k: usize) -> QMat {
    (0..k).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// `(x, ξ) ↦ (ξ, −x)`.
fn rotate_vec(v: &[Q]) -> QVec {
    let n = v.len() / 2;
    v[n..].iter().cloned().chain(v[..n].iter().map(|a| -a)).collect()
}

fn rotate_f64(v: &[f64]) -> Vec<f64> {
    let n = v.len() / 2;
    v[n..].iter().cloned().chain(v[..n].iter().map(|a| -a)).collect()
}

fn negate_factor(f: &Factor) -> Factor {
    Factor { dim: f.dim, generators: f.generators.iter().map(|g| neg(g)).collect(), origin: f.origin }
}

fn check_even(s: &ConicSet) -> Result<usize> {
    if !s.dim().is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: s.dim() + 1, got: s.dim() });
    }
    Ok(s.dim() / 2)
}

/// Image under `(x, ξ) ↦ (ξ, −x)`.
pub fn wf_fourier_rotate(s: &ConicSet) -> Result<ConicSet> {
    check_even(s)?;
    let comps = s
        .components()
        .iter()
        .map(|c| match c {
            Component::Polyhedral { generators, excluded } => Component::Polyhedral {
                generators: generators.iter().map(|g| rotate_vec(g)).collect(),
                // R is orthogonal, so forms transform like vectors
                excluded: excluded.iter().map(|f| f.iter().map(|r| rotate_vec(r)).collect()).collect(),
            },
            Component::Ray { direction } => Component::Ray { direction: rotate_vec(direction) },
            Component::Subspace { basis } => Component::Subspace { basis: basis.iter().map(|b| rotate_vec(b)).collect() },
            Component::Graph { matrix } => match inverse(matrix) {
                Some(inv) => Component::Graph { matrix: mat_neg(&inv) },
                None => {
                    let n = matrix.len();
                    let basis = (0..n)
                        .map(|i| {
                            let mut v = unit(n, i);
                            v.extend(matrix.iter().map(|r| r[i].clone()));
                            rotate_vec(&v)
                        })
                        .collect();
                    Component::Subspace { basis }
                }
            },
            Component::Product { x, xi } => Component::Product { x: xi.clone(), xi: negate_factor(x) },
            Component::Caps { caps } => Component::Caps {
                caps: caps.iter().map(|c| Cap { center: rotate_f64(&c.center), radius_deg: c.radius_deg }).collect(),
            },
        })
        .collect();
    ConicSet::new(s.dim(), comps)
}

/// Image under `(a, b) ↦ (−b, a)`.
pub fn wf_fourier_rotate_inverse(s: &ConicSet) -> Result<ConicSet> {
    wf_fourier_rotate(&wf_fourier_rotate(&wf_fourier_rotate(s)?)?)
}

/// Image under `(x, ξ) ↦ (x, ξ + Ax)` for symmetric `A`.
pub fn wf_chirp_shear(s: &ConicSet, a: &QMat) -> Result<ConicSet> {
    let n = check_even(s)?;
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    if !is_symmetric(a) {
        return Err(Error::NotSymmetric);
    }
    if a.iter().all(|r| is_zero_vec(r)) {
        return Ok(s.clone());
    }
    let shear = |v: &[Q]| -> QVec {
        let ax = mat_vec(a, &v[..n]);
        v[..n].iter().cloned().chain(v[n..].iter().zip(&ax).map(|(p, q)| p + q)).collect()
    };
    // forms pull back through the inverse shear: (f_x, f_ξ) ↦ (f_x − A f_ξ, f_ξ)
    let shear_form = |f: &[Q]| -> QVec {
        let af = mat_vec(a, &f[n..]);
        f[..n].iter().zip(&af).map(|(p, q)| p - q).chain(f[n..].iter().cloned()).collect()
    };
    let af: Vec<Vec<f64>> = a.iter().map(|r| to_f64(r)).collect();
    let mut comps = Vec::new();
    for c in s.components() {
        let out = match c {
            Component::Polyhedral { generators, excluded } => Component::Polyhedral {
                generators: generators.iter().map(|g| shear(g)).collect(),
                excluded: excluded.iter().map(|f| f.iter().map(|r| shear_form(r)).collect()).collect(),
            },
            Component::Ray { direction } => Component::Ray { direction: shear(direction) },
            Component::Subspace { basis } => Component::Subspace { basis: basis.iter().map(|b| shear(b)).collect() },
            Component::Graph { matrix } => Component::Graph {
                matrix: matrix.iter().zip(a).map(|(r, s)| add(r, s)).collect(),
            },
            Component::Product { x, xi } if xi.generators.is_empty() && spans_space(x) => {
                Component::Graph { matrix: a.clone() }
            }
            Component::Product { .. } => match c.to_poly(s.dim())? {
                Some(p) => Component::Polyhedral {
                    generators: p.generators.iter().map(|g| shear(g)).collect(),
                    excluded: p.excluded.iter().map(|f| f.iter().map(|r| shear_form(r)).collect()).collect(),
                },
                None => continue,
            },
            Component::Caps { caps } => Component::Caps {
                caps: caps
                    .iter()
                    .map(|c| {
                        let ax = crate::numerics::mat_vec(&af, &c.center[..n]);
                        let mut v = c.center.clone();
                        for i in 0..n {
                            v[n + i] += ax[i];
                        }
                        let nv = crate::numerics::norm(&v);
                        Cap { center: v.iter().map(|x| x / nv).collect(), radius_deg: c.radius_deg }
                    })
                    .collect(),
            },
        };
        comps.push(out);
    }
    ConicSet::new(s.dim(), comps)
}

fn spans_space(f: &Factor) -> bool {
    let p = PolyCone { dim: f.dim, generators: f.generators.clone(), excluded: Vec::new() };
    !f.generators.is_empty()
        && (0..f.dim).all(|i| p.closed_contains(&unit(f.dim, i)) && p.closed_contains(&neg(&unit(f.dim, i))))
}

/// Result of pulling a set back along a linear map.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub set: ConicSet,
    pub well_defined: bool,
    /// A point `(0, η)` of the input with `Aᵀη = 0` when ill-defined.
    pub witness: Option<QVec>,
}

/// Pullback along `A : R^n → R^m` (given as `m` rows of length `n`): the
/// closure of `{(x, Aᵀη) : (Ax, η) ∈ S}` together with `ker A × {0}`.
pub fn wf_pullback(s: &ConicSet, a: &QMat) -> Result<Pullback> {
    let m = check_even(s)?;
    if a.len() != m || a.is_empty() {
        return Err(Error::DimensionMismatch { expected: m, got: a.len() });
    }
    let n = a[0].len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Representation { index: 0, reason: "ragged pullback matrix".into() });
    }
    let at = transpose(a);
    let polys = s.poly_components()?;
    // well-definedness: no (0, η) ∈ S with Aᵀη = 0
    let mut witness = None;
    for p in &polys {
        let k = p.generators.len();
        let gm = p.generator_matrix();
        let mut prob = ConeProblem::new(k);
        for row in &gm[..m] {
            prob.eq(row.clone());
        }
        for row in mat_mul(&at, &gm[m..]) {
            prob.eq(row);
        }
        prob.nonzero(gm.clone());
        for forms in &p.excluded {
            prob.nonzero(mat_mul(forms, &gm));
        }
        if let Some(z) = prob.find()? {
            witness = Some(mat_vec(&gm, &z));
            break;
        }
    }
    let is_identity = m == n && *a == identity(n);
    let mut comps = Vec::new();
    if is_identity {
        comps = s.components().to_vec();
    } else {
        for p in &polys {
            let k = p.generators.len();
            let gm = p.generator_matrix();
            let vars = k + 2 * n;
            // G_y λ − A x⁺ + A x⁻ = 0
            let eqs: Vec<QVec> = (0..m)
                .map(|i| {
                    let mut row = gm[i].clone();
                    row.extend(a[i].iter().map(|v| -v));
                    row.extend(a[i].iter().cloned());
                    row
                })
                .collect();
            let at_g = mat_mul(&at, &gm[m..]);
            let mut t: QMat = Vec::with_capacity(2 * n);
            for i in 0..n {
                let mut row = zeros(k);
                row.extend(unit(n, i));
                row.extend(neg(&unit(n, i)));
                t.push(row);
            }
            for row in &at_g {
                let mut r = row.clone();
                r.extend(zeros(2 * n));
                t.push(r);
            }
            let gens = image_generators(&eqs, vars, &t);
            if !gens.is_empty() {
                comps.push(Component::Polyhedral { generators: gens, excluded: Vec::new() });
            }
        }
        let ker = nullspace(a, n);
        if !ker.is_empty() {
            let gens = ker.iter().flat_map(|b| [b.clone(), neg(b)]).collect();
            comps.push(Component::Product { x: Factor::cone(n, gens, true), xi: Factor::zero(n) });
        }
    }
    Ok(Pullback { set: ConicSet::new(2 * n, comps)?, well_defined: witness.is_none(), witness })
}

/// Outcome of an exact (or, for sampled caps, numerical) condition check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    pub exact: bool,
    pub witness: Option<Vec<QVec>>,
}

impl ConditionReport {
    fn from_witness(w: Option<Vec<QVec>>, exact: bool) -> Self {
        Self { holds: w.is_none(), exact, witness: w }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "verdict": if self.exact { "exact" } else { "numerical" },
            "witness": self.witness.as_ref().map(|w| vecs_json(w)),
        })
    }
}

fn exact_pieces(s: &ConicSet) -> (Vec<PolyCone>, bool) {
    (s.poly_components_relaxed(), s.is_exact())
}

fn theta_q(theta: &AntisymmetricMatrix, n: usize) -> Result<QMat> {
    if theta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: theta.dim() });
    }
    Ok(theta.to_rational())
}

fn flip_xi(v: &[Q]) -> QVec {
    let n = v.len() / 2;
    v[..n].iter().cloned().chain(v[n..].iter().map(|a| -a)).collect()
}

/// Whether `x − ½θξ = 0` has no solution with `(x, ξ) ∈ WFu`,
/// `(x, −ξ) ∈ WFv`, `(x, ξ) ≠ 0`. The witness is `[(x, ξ)]`.
pub fn existence_condition(wfu: &ConicSet, wfv: &ConicSet, theta: &AntisymmetricMatrix) -> Result<ConditionReport> {
    let n = check_even(wfu)?;
    same_dim(wfu, wfv)?;
    let th = theta_q(theta, n)?;
    let (pu, eu) = exact_pieces(wfu);
    let (pv, ev) = exact_pieces(wfv);
    for p in &pu {
        for qc in &pv {
            let (kp, kq) = (p.generators.len(), qc.generators.len());
            let gp = p.generator_matrix();
            let gq = qc.generator_matrix();
            let mut prob = ConeProblem::new(kp + kq);
            // G_Q μ − flip(G_P λ) = 0
            for i in 0..2 * n {
                let s = if i < n { -Q::one() } else { Q::one() };
                let mut row = scale(&gp[i], &s);
                row.extend(gq[i].iter().cloned());
                prob.eq(row);
            }
            // x − ½θξ = 0
            let half = q(1, 2);
            let th_xi = mat_mul(&th, &gp[n..]);
            for i in 0..n {
                let mut row: QVec = gp[i].iter().zip(&th_xi[i]).map(|(a, b)| a - &half * b).collect();
                row.extend(zeros(kq));
                prob.eq(row);
            }
            let lift_p = |forms: &[QVec]| -> Vec<QVec> {
                mat_mul(forms, &gp).into_iter().map(|mut r| {
                    r.extend(zeros(kq));
                    r
                }).collect()
            };
            let lift_q = |forms: &[QVec]| -> Vec<QVec> {
                mat_mul(forms, &gq).into_iter().map(|r| zeros(kp).into_iter().chain(r).collect()).collect()
            };
            prob.nonzero(lift_p(&identity(2 * n)));
            for f in &p.excluded {
                prob.nonzero(lift_p(f));
            }
            for f in &qc.excluded {
                prob.nonzero(lift_q(f));
            }
            if let Some(z) = prob.find()? {
                let v = mat_vec(&gp, &z[..kp]);
                return Ok(ConditionReport::from_witness(Some(vec![v]), eu && ev));
            }
        }
    }
    Ok(ConditionReport::from_witness(None, eu && ev))
}

/// The same condition for invertible θ, parametrized by `x`:
/// `(x, 2θ⁻¹x) ∈ WFu` implies `(x, −2θ⁻¹x) ∉ WFv`.
pub fn existence_condition_inverse_form(
    wfu: &ConicSet,
    wfv: &ConicSet,
    theta: &AntisymmetricMatrix,
) -> Result<ConditionReport> {
    let n = check_even(wfu)?;
    same_dim(wfu, wfv)?;
    let th = theta_q(theta, n)?;
    let inv = inverse(&th).ok_or_else(|| Error::InvalidField("θ is not invertible".into()))?;
    let b = mat_scale(&inv, &qi(2));
    witness_along_map(wfu, wfv, n, &b)
}

/// Pointwise form for θ = 0: `(0, ξ) ∈ WFu` implies `(0, −ξ) ∉ WFv`.
pub fn pointwise_criterion(wfu: &ConicSet, wfv: &ConicSet) -> Result<ConditionReport> {
    let n = check_even(wfu)?;
    same_dim(wfu, wfv)?;
    // parametrize by ξ: u-point (0, ξ), v-point (0, −ξ)
    let (pu, eu) = exact_pieces(wfu);
    let (pv, ev) = exact_pieces(wfv);
    for p in &pu {
        for qc in &pv {
            let w = pair_along(p, qc, n, &|t: &[Q]| zeros(n).into_iter().chain(t.iter().cloned()).collect())?;
            if let Some(t) = w {
                let v: QVec = zeros(n).into_iter().chain(t).collect();
                return Ok(ConditionReport::from_witness(Some(vec![v]), eu && ev));
            }
        }
    }
    Ok(ConditionReport::from_witness(None, eu && ev))
}

fn witness_along_map(wfu: &ConicSet, wfv: &ConicSet, n: usize, b: &QMat) -> Result<ConditionReport> {
    let (pu, eu) = exact_pieces(wfu);
    let (pv, ev) = exact_pieces(wfv);
    let embed = |x: &[Q]| -> QVec { x.iter().cloned().chain(mat_vec(b, x)).collect() };
    for p in &pu {
        for qc in &pv {
            if let Some(x) = pair_along(p, qc, n, &embed)? {
                return Ok(ConditionReport::from_witness(Some(vec![embed(&x)]), eu && ev));
            }
        }
    }
    Ok(ConditionReport::from_witness(None, eu && ev))
}

/// Finds `t ≠ 0` with `e(t) ∈ P` and `flip(e(t)) ∈ Q` for a linear
/// embedding `e : R^n → R^{2n}`.
fn pair_along(p: &PolyCone, qc: &PolyCone, n: usize, e: &dyn Fn(&[Q]) -> QVec) -> Result<Option<QVec>> {
    let d = 2 * n;
    let (kp, kq) = (p.generators.len(), qc.generators.len());
    let emb: QMat = columns(&(0..n).map(|i| e(&unit(n, i))).collect::<Vec<_>>(), d);
    let flipped: QMat = (0..d).map(|i| if i < n { emb[i].clone() } else { neg(&emb[i]) }).collect();
    let gp = p.generator_matrix();
    let gq = qc.generator_matrix();
    // variables: λ (kp), μ (kq), t⁺ (n), t⁻ (n)
    let vars = kp + kq + 2 * n;
    let mut prob = ConeProblem::new(vars);
    let row_with = |lam: &QVec, mu: &QVec, tr: &QVec| -> QVec {
        lam.iter().cloned().chain(mu.iter().cloned()).chain(tr.iter().map(|v| -v)).chain(tr.iter().cloned()).collect()
    };
    for i in 0..d {
        prob.eq(row_with(&gp[i], &zeros(kq), &emb[i]));
        prob.eq(row_with(&zeros(kp), &gq[i], &flipped[i]));
    }
    let t_forms: Vec<QVec> = (0..n)
        .map(|i| zeros(kp + kq).into_iter().chain(unit(n, i)).chain(neg(&unit(n, i))).collect())
        .collect();
    prob.nonzero(t_forms.clone());
    let lift = |forms: &QMat, m: &QMat| -> Vec<QVec> {
        // forms ∘ M applied to t = t⁺ − t⁻
        mat_mul(forms, m)
            .into_iter()
            .map(|r| zeros(kp + kq).into_iter().chain(r.iter().cloned()).chain(neg(&r)).collect())
            .collect()
    };
    for f in &p.excluded {
        prob.nonzero(lift(f, &emb));
    }
    for f in &qc.excluded {
        prob.nonzero(lift(f, &flipped));
    }
    Ok(prob.find()?.map(|z| {
        let off = kp + kq;
        (0..n).map(|i| &z[off + i] - &z[off + n + i]).collect()
    }))
}

fn same_dim(a: &ConicSet, b: &ConicSet) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

/// Closure of `{(x + ½θη, ξ + η) : (x, ξ) ∈ WFu ∪ {0}, (y, η) ∈ WFv ∪ {0},
/// y = x + ½θ(η + ξ)} \ {0}`. Zero contributions are enumerated as separate
/// pairings; face exclusions of the inputs are dropped.
pub fn predicted_product_wf(wfu: &ConicSet, wfv: &ConicSet, theta: &AntisymmetricMatrix) -> Result<ConicSet> {
    let n = check_even(wfu)?;
    same_dim(wfu, wfv)?;
    let th = theta_q(theta, n)?;
    let half = q(1, 2);
    let pu = wfu.poly_components_relaxed();
    let pv = wfv.poly_components_relaxed();
    let mut us: Vec<Option<&PolyCone>> = pu.iter().map(Some).collect();
    us.push(None);
    let mut vs: Vec<Option<&PolyCone>> = pv.iter().map(Some).collect();
    vs.push(None);
    let empty = |d| PolyCone { dim: d, generators: Vec::new(), excluded: Vec::new() };
    let zero_u = empty(2 * n);
    let zero_v = empty(2 * n);
    let mut comps = Vec::new();
    for u in &us {
        for v in &vs {
            if u.is_none() && v.is_none() {
                continue;
            }
            let p = u.unwrap_or(&zero_u);
            let qc = v.unwrap_or(&zero_v);
            let (kp, kq) = (p.generators.len(), qc.generators.len());
            let gp = if kp > 0 { p.generator_matrix() } else { vec![Vec::new(); 2 * n] };
            let gq = if kq > 0 { qc.generator_matrix() } else { vec![Vec::new(); 2 * n] };
            let th_xi = mat_mul(&th, &gp[n..]);
            let th_eta = mat_mul(&th, &gq[n..]);
            // y − x − ½θ(η + ξ) = 0
            let eqs: Vec<QVec> = (0..n)
                .map(|i| {
                    let lam = gp[i].iter().zip(&th_xi[i]).map(|(a, b)| -a - &half * b);
                    let mu = gq[i].iter().zip(&th_eta[i]).map(|(a, b)| a - &half * b);
                    lam.chain(mu).collect()
                })
                .collect();
            // output (x + ½θη, ξ + η)
            let mut t: QMat = Vec::with_capacity(2 * n);
            for i in 0..n {
                t.push(gp[i].iter().cloned().chain(th_eta[i].iter().map(|b| &half * b)).collect());
            }
            for i in 0..n {
                t.push(gp[n + i].iter().cloned().chain(gq[n + i].iter().cloned()).collect());
            }
            let gens = image_generators(&eqs, kp + kq, &t);
            if !gens.is_empty() {
                comps.push(Component::Polyhedral { generators: gens, excluded: Vec::new() });
            }
        }
    }
    simplify(ConicSet::new(2 * n, comps)?)
}

/// `R(predicted_product_wf(R⁻¹ WFu, R⁻¹ WFv))` with `R(x, ξ) = (ξ, −x)`.
pub fn predicted_star_wf(wfu: &ConicSet, wfv: &ConicSet, theta: &AntisymmetricMatrix) -> Result<ConicSet> {
    let u = wf_fourier_rotate_inverse(wfu)?;
    let v = wf_fourier_rotate_inverse(wfv)?;
    wf_fourier_rotate(&predicted_product_wf(&u, &v, theta)?)
}

/// Drops components contained in another component.
pub fn simplify(s: ConicSet) -> Result<ConicSet> {
    if !s.is_exact() {
        return Ok(s);
    }
    let comps = s.components().to_vec();
    let polys: Vec<Option<PolyCone>> = comps.iter().map(|c| c.to_poly(s.dim())).collect::<Result<_>>()?;
    let mut keep = vec![true; comps.len()];
    for i in 0..comps.len() {
        let Some(pi) = &polys[i] else {
            keep[i] = false;
            continue;
        };
        for j in 0..comps.len() {
            if i == j || !keep[j] {
                continue;
            }
            if let Some(pj) = &polys[j] {
                if poly_contains(pj, pi)? {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let kept = comps.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    ConicSet::new(s.dim(), kept)
}

/// Whether `small ⊆ big` as sets with their exclusions.
pub(crate) fn poly_contains(big: &PolyCone, small: &PolyCone) -> Result<bool> {
    if !small.generators.iter().all(|g| big.closed_contains(g)) {
        return Ok(false);
    }
    let gs = small.generator_matrix();
    for forms in &big.excluded {
        let mut prob = ConeProblem::new(small.generators.len());
        for row in mat_mul(forms, &gs) {
            prob.eq(row);
        }
        prob.nonzero(gs.clone());
        for f in &small.excluded {
            prob.nonzero(mat_mul(f, &gs));
        }
        if prob.find()?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every component of `small` lies inside a single component of `big`.
/// Sufficient for `small ⊆ big`; exact for the single-component sets used here.
pub fn contains_componentwise(big: &ConicSet, small: &ConicSet) -> Result<bool> {
    same_dim(big, small)?;
    let b = big.poly_components()?;
    for p in small.poly_components()? {
        let mut inside = false;
        for c in &b {
            if poly_contains(c, &p)? {
                inside = true;
                break;
            }
        }
        if !inside {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn same_set(a: &ConicSet, b: &ConicSet) -> Result<bool> {
    Ok(contains_componentwise(a, b)? && contains_componentwise(b, a)?)
}

/// Pair condition: `(x, ξ) ∈ Γ` implies `(x, −ξ) ∉ Γ`.
pub fn flip_pair_condition(gamma: &ConicSet) -> Result<ConditionReport> {
    let n = check_even(gamma)?;
    let (ps, exact) = exact_pieces(gamma);
    for a in &ps {
        for b in &ps {
            let ga = a.generator_matrix();
            let gb = b.generator_matrix();
            let (ka, kb) = (a.generators.len(), b.generators.len());
            let mut prob = ConeProblem::new(ka + kb);
            for i in 0..2 * n {
                let s = if i < n { -Q::one() } else { Q::one() };
                let mut row = scale(&ga[i], &s);
                row.extend(gb[i].iter().cloned());
                prob.eq(row);
            }
            let lift_a = |forms: &[QVec]| -> Vec<QVec> {
                mat_mul(forms, &ga).into_iter().map(|mut r| {
                    r.extend(zeros(kb));
                    r
                }).collect()
            };
            prob.nonzero(lift_a(&identity(2 * n)));
            for f in &a.excluded {
                prob.nonzero(lift_a(f));
            }
            for f in &b.excluded {
                prob.nonzero(mat_mul(f, &gb).into_iter().map(|r| zeros(ka).into_iter().chain(r).collect()).collect());
            }
            if let Some(z) = prob.find()? {
                let v = mat_vec(&ga, &z[..ka]);
                let w = flip_xi(&v);
                return Ok(ConditionReport::from_witness(Some(vec![v, w]), exact));
            }
        }
    }
    Ok(ConditionReport::from_witness(None, exact))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub detail: String,
    pub witness: Vec<QVec>,
}

impl Verdict {
    fn holds(detail: &str) -> Self {
        Self { status: Status::Holds, detail: detail.into(), witness: Vec::new() }
    }

    fn fails(detail: &str, witness: Vec<QVec>) -> Self {
        Self { status: Status::Fails, detail: detail.into(), witness }
    }

    fn unknown(detail: &str) -> Self {
        Self { status: Status::Unknown, detail: detail.into(), witness: Vec::new() }
    }

    fn to_json(&self) -> Value {
        json!({"status": self.status.label(), "detail": self.detail, "witness": vecs_json(&self.witness)})
    }
}

/// Verdicts on the product-cone algebra conditions for `Γ₁ × Γ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport {
    /// Γ₂ closed under addition with no sum equal to 0.
    pub closed_under_addition: Verdict,
    /// 0 ∉ Γ₂.
    pub origin_excluded: Verdict,
    /// `x ∈ Γ₁, ξ ∈ Γ₂ ⇒ x + ½θξ ∈ Γ₁`.
    pub implication: Verdict,
    pub exact: bool,
}

impl AlgebraReport {
    pub fn pass(&self) -> bool {
        [&self.closed_under_addition, &self.origin_excluded, &self.implication]
            .iter()
            .all(|v| v.status == Status::Holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "verdict": if self.exact { "exact" } else { "numerical" },
            "closed_under_addition": self.closed_under_addition.to_json(),
            "origin_excluded": self.origin_excluded.to_json(),
            "implication": self.implication.to_json(),
        })
    }
}

/// Checks the conditions under which `S'_{Γ₁×Γ₂}` is closed under the
/// twisted product. `gamma1_origin` says whether `0 ∈ Γ₁`.
pub fn cone_algebra_check(
    gamma1: &ConicSet,
    gamma1_origin: bool,
    gamma2: &ConicSet,
    theta: &AntisymmetricMatrix,
) -> Result<AlgebraReport> {
    let n = gamma2.dim();
    same_dim(gamma1, gamma2)?;
    let th = theta_q(theta, n)?;
    let exact = gamma1.is_exact() && gamma2.is_exact();
    let g2 = gamma2.poly_components_relaxed();
    let g1 = gamma1.poly_components_relaxed();
    let relaxed2 = relaxed_set(n, &g2);
    let relaxed1 = relaxed_set(n, &g1);

    let closed_under_addition = addition_verdict(&g2, &relaxed2)?;
    let origin_excluded = if g2.is_empty() {
        Verdict::holds("Γ₂ empty")
    } else {
        Verdict::holds("origin excluded by representation")
    };

    let mut implication = Verdict::holds("½θh lies in every component of Γ₁ for every generator h of Γ₂");
    let half_th = mat_scale(&th, &q(1, 2));
    'outer: for k in &g1 {
        for c2 in &g2 {
            for h in &c2.generators {
                let shift = mat_vec(&half_th, h);
                if is_zero_vec(&shift) || k.closed_contains(&shift) {
                    continue;
                }
                // look for x = εg near the apex with x + ½θh outside Γ₁
                let mut found = None;
                for g in &k.generators {
                    for e in [1i64, 10, 100, 1000] {
                        let x = scale(g, &q(1, e));
                        let y = add(&x, &shift);
                        let inside = if is_zero_vec(&y) {
                            gamma1_origin
                        } else {
                            relaxed1.member(&y)?
                        };
                        if !inside {
                            found = Some(vec![x, h.clone(), y]);
                            break;
                        }
                    }
                    if found.is_some() {
                        break;
                    }
                }
                implication = match found {
                    Some(w) => Verdict::fails("x + ½θξ ∉ Γ₁ for x ∈ Γ₁, ξ ∈ Γ₂ (witness x, ξ, x + ½θξ)", w),
                    None => Verdict::unknown("½θh outside a component of Γ₁ but no witness found"),
                };
                break 'outer;
            }
        }
    }
    Ok(AlgebraReport { closed_under_addition, origin_excluded, implication, exact })
}

fn relaxed_set(n: usize, polys: &[PolyCone]) -> ConicSet {
    let comps = polys
        .iter()
        .map(|p| Component::Polyhedral { generators: p.generators.clone(), excluded: p.excluded.clone() })
        .collect();
    ConicSet::new(n, comps).expect("components already validated")
}

fn addition_verdict(g2: &[PolyCone], set: &ConicSet) -> Result<Verdict> {
    // salience across every pair of components: ξ ∈ A, η ∈ B, ξ + η = 0
    for (ia, a) in g2.iter().enumerate() {
        for b in &g2[ia..] {
            let (ka, kb) = (a.generators.len(), b.generators.len());
            let ga = a.generator_matrix();
            let gb = b.generator_matrix();
            let mut prob = ConeProblem::new(ka + kb);
            for i in 0..a.dim {
                prob.eq(ga[i].iter().cloned().chain(gb[i].iter().cloned()).collect());
            }
            prob.nonzero(ga.iter().map(|r| r.iter().cloned().chain(zeros(kb)).collect()).collect());
            for f in &a.excluded {
                prob.nonzero(mat_mul(f, &ga).into_iter().map(|mut r| {
                    r.extend(zeros(kb));
                    r
                }).collect());
            }
            for f in &b.excluded {
                prob.nonzero(mat_mul(f, &gb).into_iter().map(|r| zeros(ka).into_iter().chain(r).collect()).collect());
            }
            if let Some(z) = prob.find()? {
                let xi = mat_vec(&ga, &z[..ka]);
                let eta = mat_vec(&gb, &z[ka..]);
                return Ok(Verdict::fails("ξ + η = 0 with ξ, η ∈ Γ₂", vec![xi, eta]));
            }
        }
    }
    // sums of two components must stay inside Γ₂
    for (ia, a) in g2.iter().enumerate() {
        for b in &g2[ia + 1..] {
            let joined = PolyCone {
                dim: a.dim,
                generators: a.generators.iter().chain(&b.generators).cloned().collect(),
                excluded: Vec::new(),
            };
            let mut covered = false;
            for c in g2 {
                if poly_contains(c, &joined)? {
                    covered = true;
                    break;
                }
            }
            if covered {
                continue;
            }
            for g in &a.generators {
                for h in &b.generators {
                    let s = add(g, h);
                    if !set.member(&s)? {
                        return Ok(Verdict::fails("ξ + η ∉ Γ₂ with ξ, η ∈ Γ₂", vec![g.clone(), h.clone(), s]));
                    }
                }
            }
            return Ok(Verdict::unknown("sum of two components not covered by a single component"));
        }
    }
    Ok(Verdict::holds("components salient and closed under addition"))
}

/// Agreement between a list of unit directions and a conic set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub count: usize,
    pub within: usize,
    pub fraction: f64,
    /// Largest angle (degrees) from a direction to the set, minus nothing.
    pub max_angle_deg: f64,
    pub tol_deg: f64,
}

impl ContainmentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "count": self.count,
            "within": self.within,
            "fraction": self.fraction,
            "max_angle_deg": self.max_angle_deg,
            "tol_deg": self.tol_deg,
        })
    }
}

/// Fraction of `directions` within `tol_deg` of `s`; an empty list counts as
/// fully contained.
pub fn angular_containment_directions(directions: &[Vec<f64>], s: &ConicSet, tol_deg: f64) -> Result<ContainmentReport> {
    let mut within = 0;
    let mut max_angle: f64 = 0.0;
    for d in directions {
        if d.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), got: d.len() });
        }
        let a = s.angular_distance(d).unwrap_or(180.0);
        max_angle = max_angle.max(a);
        if a <= tol_deg {
            within += 1;
        }
    }
    let count = directions.len();
    let fraction = if count == 0 { 1.0 } else { within as f64 / count as f64 };
    Ok(ContainmentReport { count, within, fraction, max_angle_deg: max_angle, tol_deg })
}

pub fn witness_json(w: &[Q]) -> Value {
    vec_json(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_rays_of_simple_cones() {
        // z1 + z2 − z3 = 0 in the orthant: rays e1+e3, e2+e3
        let rays = extreme_rays(&[qvec(&[1, 1, -1])], 3);
        assert_eq!(rays.len(), 2);
        assert!(rays.contains(&qvec(&[1, 0, 1])));
        assert!(rays.contains(&qvec(&[0, 1, 1])));
        assert_eq!(extreme_rays(&[], 2).len(), 2);
    }

    #[test]
    fn rotation_examples() {
        let d = ConicSet::zero_times_space(2);
        let r = wf_fourier_rotate(&d).unwrap();
        assert!(same_set(&r, &ConicSet::space_times_zero(2)).unwrap());
        let a = vec![qvec(&[2, 1]), qvec(&[1, 3])];
        let g = wf_fourier_rotate(&ConicSet::graph(a.clone())).unwrap();
        assert_eq!(g, ConicSet::graph(mat_neg(&inverse(&a).unwrap())));
        let mut s = d.union(&ConicSet::graph(a)).union(&ConicSet::polyhedral(4, vec![qvec(&[1, 2, 3, 4])]));
        let orig = s.clone();
        for _ in 0..4 {
            s = wf_fourier_rotate(&s).unwrap();
        }
        assert_eq!(s, orig);
    }

    #[test]
    fn shear_examples() {
        let a = vec![qvec(&[1, 2]), qvec(&[2, -1])];
        let s = wf_chirp_shear(&ConicSet::space_times_zero(2), &a).unwrap();
        assert_eq!(s, ConicSet::graph(a.clone()));
        let poly = ConicSet::polyhedral(4, vec![qvec(&[1, 0, 2, 0]), qvec(&[0, 1, 0, -1])]);
        let back = wf_chirp_shear(&wf_chirp_shear(&poly, &a).unwrap(), &mat_neg(&a)).unwrap();
        assert_eq!(back, poly);
        assert_eq!(wf_chirp_shear(&poly, &vec![zeros(2), zeros(2)]).unwrap(), poly);
        assert!(matches!(wf_chirp_shear(&poly, &vec![qvec(&[0, 1]), qvec(&[0, 0])]), Err(Error::NotSymmetric)));
    }

    #[test]
    fn pullback_examples() {
        let s = ConicSet::zero_times_space(1);
        let id = wf_pullback(&s, &identity(2).into_iter().take(1).map(|r| r[..1].to_vec()).collect()).unwrap();
        assert!(id.well_defined);
        assert_eq!(id.set, s);
        let zero = wf_pullback(&s, &vec![qvec(&[0])]).unwrap();
        assert!(!zero.well_defined);
        assert!(zero.witness.is_some());
    }

    #[test]
    fn existence_examples() {
        let t = AntisymmetricMatrix::symplectic(1);
        let pw = ConicSet::space_times_zero(2);
        let dl = ConicSet::zero_times_space(2);
        assert!(existence_condition(&pw, &dl, &t).unwrap().holds);
        let z = AntisymmetricMatrix::zero(2);
        let r = existence_condition(&dl, &dl, &z).unwrap();
        assert!(!r.holds);
        let w = &r.witness.unwrap()[0];
        assert!(is_zero_vec(&w[..2]) && !is_zero_vec(&w[2..]));
        assert!(!pointwise_criterion(&dl, &dl).unwrap().holds);
    }

    #[test]
    fn predicted_sets() {
        let t = AntisymmetricMatrix::symplectic(1);
        let pw = ConicSet::space_times_zero(2);
        let dl = ConicSet::zero_times_space(2);
        let p = predicted_product_wf(&pw, &dl, &t).unwrap();
        assert!(same_set(&p, &dl).unwrap());
        let z = AntisymmetricMatrix::zero(2);
        let p0 = predicted_product_wf(&dl, &pw, &z).unwrap();
        assert!(same_set(&p0, &dl).unwrap());
        let e = ConicSet::empty(4);
        assert!(predicted_product_wf(&e, &e, &t).unwrap().components().is_empty());
        let s = predicted_star_wf(&dl, &dl, &t).unwrap();
        assert!(same_set(&s, &dl).unwrap());
    }

    #[test]
    fn pair_condition_examples() {
        let one_sided = ConicSet::product(Factor::space(1), Factor::cone(1, vec![qvec(&[1])], false));
        assert!(flip_pair_condition(&one_sided).unwrap().holds);
        let sym = ConicSet::zero_times_space(1);
        let r = flip_pair_condition(&sym).unwrap();
        assert!(!r.holds && r.witness.unwrap().len() == 2);
        let ray = ConicSet::new(2, vec![Component::Ray { direction: qvec(&[0, 1]) }]).unwrap();
        assert!(flip_pair_condition(&ray).unwrap().holds);
    }
}
