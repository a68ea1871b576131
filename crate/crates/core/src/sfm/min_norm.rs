use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::{maximality_closure, MinimizerResult, SetFunction};

type Q = BigRational;

const MAX_MAJOR_ITERATIONS: usize = 100_000;

/// Exact Fujishige-Wolfe minimization.
///
/// Finds the minimum-norm point `x*` of the base polytope of
/// `f - f(∅)`; the set `{i : x*_i <= 0}` is then the maximal minimizer of
/// `f`. A closure pass is applied afterwards, which is a no-op when the
/// oracle is submodular.
pub fn minimize_polynomial(oracle: &dyn SetFunction) -> Result<MinimizerResult> {
    let n = oracle.ground_size();
    let f_empty = oracle.eval(&[]);
    if n == 0 {
        return Ok(MinimizerResult {
            value: f_empty,
            minimizer: vec![],
            is_maximal: true,
        });
    }

    let greedy = |w: &[Q]| -> Vec<Q> {
        let mut order: Vec<usize> = (0..n).collect();
        // ascending weight, ties by index
        order.sort_by(|&a, &b| w[a].cmp(&w[b]).then(a.cmp(&b)));
        let mut base = vec![Q::zero(); n];
        let mut prefix: Vec<usize> = Vec::with_capacity(n);
        let mut prev = f_empty.clone();
        for &e in &order {
            let pos = prefix.partition_point(|&i| i < e);
            prefix.insert(pos, e);
            let cur = oracle.eval(&prefix);
            base[e] = &cur - &prev;
            prev = cur;
        }
        base
    };

    let mut points: Vec<Vec<Q>> = vec![greedy(&vec![Q::zero(); n])];
    let mut lambda: Vec<Q> = vec![Q::one()];
    let mut x = points[0].clone();

    let mut converged = false;
    for _ in 0..MAX_MAJOR_ITERATIONS {
        let q = greedy(&x);
        let xx = dot(&x, &x);
        if dot(&x, &q) >= xx {
            converged = true;
            break;
        }
        if points.contains(&q) {
            return Err(Error::InternalInvariant(
                "min-norm-point re-entered an extreme base already in the corral".into(),
            ));
        }
        points.push(q);
        lambda.push(Q::zero());

        // minor cycle
        loop {
            let mu = affine_minimizer(&points)?;
            if mu.iter().all(Signed::is_positive) {
                lambda = mu;
                x = combine(&points, &lambda, n);
                break;
            }
            let mut theta: Option<Q> = None;
            for (l, m) in lambda.iter().zip(&mu) {
                if m.is_positive() {
                    continue;
                }
                let t = l / (l - m);
                if theta.as_ref().is_none_or(|th| &t < th) {
                    theta = Some(t);
                }
            }
            let theta = theta.expect("some coefficient is nonpositive");
            let keep_old = Q::one() - &theta;
            lambda = lambda
                .iter()
                .zip(&mu)
                .map(|(l, m)| &keep_old * l + &theta * m)
                .collect();
            let mut i = 0;
            while i < points.len() {
                if lambda[i].is_zero() {
                    points.remove(i);
                    lambda.remove(i);
                } else {
                    i += 1;
                }
            }
            if points.is_empty() {
                return Err(Error::InternalInvariant(
                    "min-norm-point corral emptied".into(),
                ));
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged(MAX_MAJOR_ITERATIONS));
    }

    let start: Vec<usize> = (0..n).filter(|&i| !x[i].is_positive()).collect();
    let order: Vec<usize> = (0..n).collect();
    let minimizer = maximality_closure(oracle, &start, &order);
    let value = oracle.eval(&minimizer);
    Ok(MinimizerResult {
        value,
        minimizer,
        is_maximal: true,
    })
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(points: &[Vec<Q>], coeffs: &[Q], n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (p, c) in points.iter().zip(coeffs) {
        for (o, v) in out.iter_mut().zip(p) {
            *o += c * v;
        }
    }
    out
}

/// Coefficients `mu` (summing to 1) of the minimum-norm point of the
/// affine hull of `points`, from the KKT system
/// `[G 1; 1ᵀ 0] [mu; t] = [0; 1]` with `G` the Gram matrix.
fn affine_minimizer(points: &[Vec<Q>]) -> Result<Vec<Q>> {
    let k = points.len();
    let mut a: Vec<Vec<Q>> = vec![vec![Q::zero(); k + 2]; k + 1];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = dot(&points[i], &points[j]);
        }
        a[i][k] = Q::one();
        a[k][i] = Q::one();
    }
    a[k][k + 1] = Q::one();

    let size = k + 1;
    for col in 0..size {
        let Some(p) = (col..size).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::InternalInvariant(
                "corral points are affinely dependent".into(),
            ));
        };
        a.swap(p, col);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v -= &factor * pv;
            }
        }
    }
    Ok((0..k).map(|i| a[i][k + 1].clone()).collect())
}
