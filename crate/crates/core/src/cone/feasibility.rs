//! Exact feasibility of `{z ≥ 0 : A z = b, C z ≥ d}` over the rationals by
//! Gaussian elimination of the equalities followed by Fourier–Motzkin
//! elimination, with back-substitution producing a witness.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::rational::{abs_max, rref, Q, QVec};
use crate::error::{Error, Result};

const MAX_CONSTRAINTS: usize = 50_000;

#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    pub vars: usize,
    pub equalities: Vec<(QVec, Q)>,
    pub inequalities: Vec<(QVec, Q)>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self { vars, ..Default::default() }
    }

    pub fn eq(&mut self, row: QVec, rhs: Q) -> &mut Self {
        debug_assert_eq!(row.len(), self.vars);
        self.equalities.push((row, rhs));
        self
    }

    pub fn ge(&mut self, row: QVec, rhs: Q) -> &mut Self {
        debug_assert_eq!(row.len(), self.vars);
        self.inequalities.push((row, rhs));
        self
    }

    /// A nonnegative solution, or `None` when the system is infeasible.
    pub fn solve(&self) -> Result<Option<QVec>> {
        solve(self)
    }
}

/// `a·z ≥ c` over the free variables.
type Ineq = (QVec, Q);

fn normalize(ineqs: Vec<Ineq>) -> Vec<Ineq> {
    let mut best: HashMap<QVec, Q> = HashMap::new();
    let mut out_order = Vec::new();
    for (a, c) in ineqs {
        let m = abs_max(&a);
        let (a, c) = if m.is_zero() {
            (a, c)
        } else {
            (a.iter().map(|x| x / &m).collect::<QVec>(), c / &m)
        };
        match best.get_mut(&a) {
            Some(prev) => {
                if c > *prev {
                    *prev = c;
                }
            }
            None => {
                out_order.push(a.clone());
                best.insert(a, c);
            }
        }
    }
    out_order
        .into_iter()
        .map(|a| {
            let c = best.remove(&a).expect("present");
            (a, c)
        })
        .collect()
}

fn solve(sys: &LinearSystem) -> Result<Option<QVec>> {
    let k = sys.vars;
    // eliminate equalities
    let mut aug: Vec<QVec> = sys
        .equalities
        .iter()
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) {
        return Ok(None);
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let fpos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let nf = free.len();

    // z_p = b_r − Σ_f aug[r][f] z_f
    let express = |var: usize| -> (QVec, Q) {
        if let Some(&i) = fpos.get(&var) {
            let mut v = vec![Q::zero(); nf];
            v[i] = Q::from_integer(1.into());
            (v, Q::zero())
        } else {
            let r = pivots.iter().position(|&p| p == var).expect("pivot");
            let v = free.iter().map(|&f| -aug[r][f].clone()).collect();
            (v, aug[r][k].clone())
        }
    };
    let exprs: Vec<(QVec, Q)> = (0..k).map(express).collect();

    let mut ineqs: Vec<Ineq> = Vec::new();
    for (coef, cst) in &exprs {
        // coef·z + cst ≥ 0
        ineqs.push((coef.clone(), -cst.clone()));
    }
    for (row, rhs) in &sys.inequalities {
        let mut a = vec![Q::zero(); nf];
        let mut c = rhs.clone();
        for (var, w) in row.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let (coef, cst) = &exprs[var];
            for (ai, ci) in a.iter_mut().zip(coef) {
                *ai += w * ci;
            }
            c -= w * cst;
        }
        ineqs.push((a, c));
    }

    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(nf);
    let mut current = normalize(ineqs);
    for var in 0..nf {
        let (mut pos, mut negs, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, c) in &current {
            if a[var].is_positive() {
                pos.push((a.clone(), c.clone()));
            } else if a[var].is_negative() {
                negs.push((a.clone(), c.clone()));
            } else {
                rest.push((a.clone(), c.clone()));
            }
        }
        if rest.len() + pos.len() * negs.len() > MAX_CONSTRAINTS {
            return Err(Error::TooLarge(rest.len() + pos.len() * negs.len()));
        }
        for (ap, cp) in &pos {
            for (an, cn) in &negs {
                // ap[var] > 0, an[var] < 0: combine to cancel var
                let sp = -an[var].clone();
                let sn = ap[var].clone();
                let a: QVec = ap.iter().zip(an).map(|(x, y)| x * &sp + y * &sn).collect();
                let c = cp * &sp + cn * &sn;
                rest.push((a, c));
            }
        }
        stages.push(std::mem::take(&mut current));
        current = normalize(rest);
    }
    if current.iter().any(|(_, c)| c.is_positive()) {
        return Ok(None);
    }

    let mut zf = vec![Q::zero(); nf];
    for var in (0..nf).rev() {
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for (a, c) in &stages[var] {
            if a[var].is_zero() {
                continue;
            }
            let mut rhs = c.clone();
            for j in var + 1..nf {
                rhs -= &a[j] * &zf[j];
            }
            let bound = rhs / &a[var];
            if a[var].is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        let value = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u.min(Q::zero()),
            (None, None) => Q::zero(),
        };
        zf[var] = value;
    }
    let z: QVec = exprs
        .iter()
        .map(|(coef, cst)| coef.iter().zip(&zf).fold(cst.clone(), |acc, (a, b)| acc + a * b))
        .collect();
    debug_assert!(check(sys, &z));
    Ok(Some(z))
}

/// Verifies a candidate solution exactly.
pub fn check(sys: &LinearSystem, z: &[Q]) -> bool {
    use super::rational::dot;
    z.iter().all(|x| !x.is_negative())
        && sys.equalities.iter().all(|(r, b)| dot(r, z) == *b)
        && sys.inequalities.iter().all(|(r, d)| dot(r, z) >= *d)
}

#[cfg(test)]
mod tests {
    use super::super::rational::{qi, qvec};
    use super::*;

    #[test]
    fn simple_feasible() {
        // z0 + z1 = 3, z0 - z1 >= 1
        let mut s = LinearSystem::new(2);
        s.eq(qvec(&[1, 1]), qi(3)).ge(qvec(&[1, -1]), qi(1));
        let z = s.solve().unwrap().unwrap();
        assert!(check(&s, &z));
    }

    #[test]
    fn simple_infeasible() {
        let mut s = LinearSystem::new(2);
        s.eq(qvec(&[1, 1]), qi(0)).ge(qvec(&[1, 0]), qi(1));
        assert!(s.solve().unwrap().is_none());
        let mut t = LinearSystem::new(1);
        t.eq(qvec(&[0]), qi(1));
        assert!(t.solve().unwrap().is_none());
    }

    #[test]
    fn cone_membership_system() {
        // (1,2) = a*(1,0) + b*(0,1) + c*(1,1)
        let mut s = LinearSystem::new(3);
        s.eq(qvec(&[1, 0, 1]), qi(1)).eq(qvec(&[0, 1, 1]), qi(2));
        let z = s.solve().unwrap().unwrap();
        assert!(check(&s, &z));
        // (-1, 0) not in cone{(1,0),(0,1),(1,1)}
        let mut t = LinearSystem::new(3);
        t.eq(qvec(&[1, 0, 1]), qi(-1)).eq(qvec(&[0, 1, 1]), qi(0));
        assert!(t.solve().unwrap().is_none());
    }
}
