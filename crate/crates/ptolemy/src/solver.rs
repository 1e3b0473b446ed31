//! Numerical solution of gauge-fixed Ptolemy systems at desk scale.
//!
//! Damped Newton iteration from many random starts, with the overdetermined
//! system handled through the normal equations and every candidate re-verified
//! against the full relation set. Deterministic for a fixed seed: per-start
//! randomness depends only on (seed, start index).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mat::Mat;
use crate::variety::PolynomialSystem;
use crate::{Scalar, C};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("assignment has {0} values, system has {1} variables")]
    MissingVariable(usize, usize),
    #[error("parametrization root {0} fails verification (residual {1})")]
    ParametrizationInconsistent(usize, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Newton,
    Substituted,
    User,
}

impl Source {
    pub fn tag(&self) -> &'static str {
        match self {
            Source::Newton => "newton",
            Source::Substituted => "substituted",
            Source::User => "user",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PtolemySolution<T> {
    /// One value per system variable; gauge-fixed variables are exactly 1.
    pub values: Vec<C<T>>,
    pub residual: T,
    pub source: Source,
}

#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub residual_tol: T,
    pub dedup_distance: T,
    pub nonvanishing_tol: T,
    pub annulus: (T, T),
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            starts: 2000,
            seed: 0,
            max_iterations: 200,
            residual_tol: T::of(1e-12),
            dedup_distance: T::of(1e-6),
            nonvanishing_tol: T::of(1e-8),
            annulus: (T::of(0.1), T::of(3.0)),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub starts: usize,
    pub converged: usize,
    pub rejected_nonvanishing: usize,
    pub distinct: usize,
    /// More than 10% of converged starts stayed pairwise distinct after
    /// dedup: the solution set is probably not zero-dimensional.
    pub suspected_positive_dimensional: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<T> {
    pub solutions: Vec<PtolemySolution<T>>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone)]
pub struct VerifyReport<T> {
    pub residuals: Vec<T>,
    pub max_residual: T,
    pub min_modulus: T,
    pub pass: bool,
}

/// Per-relation residuals of a full assignment, including the nonvanishing
/// check.
pub fn verify_solution<T: Scalar>(
    system: &PolynomialSystem,
    values: &[C<T>],
    tol: T,
    nonvanishing_tol: T,
) -> Result<VerifyReport<T>, SolverError> {
    if values.len() != system.variable_count() {
        return Err(SolverError::MissingVariable(values.len(), system.variable_count()));
    }
    let residuals: Vec<T> = system.relations.iter().map(|r| r.eval(values).norm()).collect();
    let max_residual = residuals.iter().copied().fold(T::zero(), T::max);
    let min_modulus = values.iter().map(|z| z.norm()).fold(T::infinity(), T::min);
    let pass = max_residual < tol && min_modulus > nonvanishing_tol;
    Ok(VerifyReport { residuals, max_residual, min_modulus, pass })
}

fn assemble<T: Scalar>(system: &PolynomialSystem, free: &[usize], x: &[C<T>]) -> Vec<C<T>> {
    let mut values = vec![C::new(T::one(), T::zero()); system.variable_count()];
    for (k, &v) in free.iter().enumerate() {
        values[v] = x[k];
    }
    values
}

fn residual_vec<T: Scalar>(system: &PolynomialSystem, values: &[C<T>]) -> Vec<C<T>> {
    system.relations.iter().map(|r| r.eval(values)).collect()
}

fn norm2<T: Scalar>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// One damped Newton run on the free variables; returns the full assignment
/// when it converges.
fn newton_run<T: Scalar>(
    system: &PolynomialSystem,
    free: &[usize],
    start: &[C<T>],
    config: &SolverConfig<T>,
) -> Option<Vec<C<T>>> {
    let nf = free.len();
    let nr = system.relations.len();
    let mut x = start.to_vec();
    let mut grad = vec![C::new(T::zero(), T::zero()); system.variable_count()];
    let target = config.residual_tol * T::of(0.01);
    for _ in 0..config.max_iterations {
        let values = assemble(system, free, &x);
        let f = residual_vec(system, &values);
        let fnorm = norm2(&f);
        if !fnorm.is_finite() {
            return None;
        }
        if fnorm < target {
            return Some(values);
        }
        // Jacobian over free variables
        let mut jac = Mat::<T>::zeros(nr, nf);
        for (ri, rel) in system.relations.iter().enumerate() {
            rel.grad(&values, &mut grad);
            for (k, &v) in free.iter().enumerate() {
                jac[(ri, k)] = grad[v];
            }
        }
        // normal equations J^H J dx = -J^H f
        let jh = jac.adjoint();
        let normal = jh.mul(&jac);
        let rhs: Vec<C<T>> = (0..nf)
            .map(|i| -(0..nr).map(|k| jh[(i, k)] * f[k]).sum::<C<T>>())
            .collect();
        let dx = normal.solve(&rhs)?;
        // step halving
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<C<T>> = x
                .iter()
                .zip(&dx)
                .map(|(&xi, &di)| xi + di * C::new(lambda, T::zero()))
                .collect();
            let tv = assemble(system, free, &trial);
            let tnorm = norm2(&residual_vec(system, &tv));
            if tnorm.is_finite() && tnorm < fnorm {
                x = trial;
                accepted = true;
                break;
            }
            lambda = lambda * T::of(0.5);
        }
        if !accepted {
            return None;
        }
    }
    let values = assemble(system, free, &x);
    if norm2(&residual_vec(system, &values)) < target {
        Some(values)
    } else {
        None
    }
}

fn lex_cmp<T: Scalar>(a: &[C<T>], b: &[C<T>]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b) {
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            o => return o,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn max_dist<T: Scalar>(a: &[C<T>], b: &[C<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(T::zero(), T::max)
}

/// Multistart Newton over the gauge-fixed system. Returns deduplicated,
/// verified solutions in canonical (lexicographic) order.
pub fn solve_newton_multistart<T: Scalar>(
    system: &PolynomialSystem,
    config: &SolverConfig<T>,
) -> SolveOutcome<T> {
    let free = system.free_variables();
    let (r0, r1) = config.annulus;
    let mut found: Vec<Vec<C<T>>> = Vec::new();
    let mut stats = SolveStats { starts: config.starts, ..Default::default() };
    for idx in 0..config.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (idx as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let start: Vec<C<T>> = (0..free.len())
            .map(|_| {
                let r = T::of(rng.gen_range(0.0..1.0));
                let th = T::of(rng.gen_range(0.0..std::f64::consts::TAU));
                let radius = r0 + (r1 - r0) * r;
                C::from_polar(radius, th)
            })
            .collect();
        let Some(values) = newton_run(system, &free, &start, config) else {
            continue;
        };
        stats.converged += 1;
        let report =
            verify_solution(system, &values, config.residual_tol, config.nonvanishing_tol)
                .expect("assembled assignment has full length");
        if !report.pass {
            if report.min_modulus <= config.nonvanishing_tol {
                stats.rejected_nonvanishing += 1;
            }
            continue;
        }
        found.push(values);
    }
    found.sort_by(|a, b| lex_cmp(a, b));
    let mut distinct: Vec<Vec<C<T>>> = Vec::new();
    for v in found {
        if distinct.iter().all(|u| max_dist(u, &v) > config.dedup_distance) {
            distinct.push(v);
        }
    }
    stats.distinct = distinct.len();
    stats.suspected_positive_dimensional = stats.converged >= 20
        && stats.distinct * 10 > stats.converged
        && stats.distinct > 4;
    let solutions = distinct
        .into_iter()
        .map(|values| {
            let residual = system.residual(&values);
            PtolemySolution { values, residual, source: Source::Newton }
        })
        .collect();
    SolveOutcome { solutions, stats }
}

/// Polynomial with rational coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    pub coeffs: Vec<(i64, i64)>,
}

impl RationalPoly {
    pub fn new(coeffs: &[(i64, i64)]) -> Self {
        assert!(coeffs.iter().all(|&(_, d)| d != 0));
        RationalPoly { coeffs: coeffs.to_vec() }
    }

    pub fn constant(num: i64, den: i64) -> Self {
        Self::new(&[(num, den)])
    }

    pub fn eval<T: Scalar>(&self, u: C<T>) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for &(num, den) in self.coeffs.iter().rev() {
            acc = acc * u + C::new(T::of(num as f64) / T::of(den as f64), T::zero());
        }
        acc
    }

    fn degree(&self) -> usize {
        let mut d = 0;
        for (i, &(num, _)) in self.coeffs.iter().enumerate() {
            if num != 0 {
                d = i;
            }
        }
        d
    }
}

/// All complex roots of a rational-coefficient polynomial, by Aberth-Ehrlich
/// iteration. Deterministic; intended for the small minimal polynomials of
/// solution components.
pub fn poly_roots<T: Scalar>(p: &RationalPoly) -> Vec<C<T>> {
    let deg = p.degree();
    assert!(deg >= 1, "constant polynomial has no roots");
    let coeffs: Vec<C<T>> = p.coeffs[..=deg]
        .iter()
        .map(|&(n, d)| C::new(T::of(n as f64) / T::of(d as f64), T::zero()))
        .collect();
    let eval = |z: C<T>| {
        let mut acc = C::new(T::zero(), T::zero());
        for c in coeffs.iter().rev() {
            acc = acc * z + *c;
        }
        acc
    };
    let deriv = |z: C<T>| {
        let mut acc = C::new(T::zero(), T::zero());
        for (i, c) in coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + *c * C::new(T::of(i as f64), T::zero());
        }
        acc
    };
    // starts on a slightly irrational spiral to break symmetric stalls
    let mut roots: Vec<C<T>> = (0..deg)
        .map(|k| {
            let ang = T::of(0.4) + T::of(2.0) * T::PI() * T::of(k as f64) / T::of(deg as f64);
            let rad = T::of(1.0) + T::of(0.17) * T::of(k as f64);
            C::from_polar(rad, ang)
        })
        .collect();
    for _ in 0..300 {
        let mut moved = T::zero();
        for k in 0..deg {
            let z = roots[k];
            let pz = eval(z);
            let dz = deriv(z);
            if pz.norm() == T::zero() {
                continue;
            }
            let newton = pz / dz;
            let mut repulse = C::new(T::zero(), T::zero());
            for (j, &w) in roots.iter().enumerate() {
                if j != k {
                    repulse = repulse + (z - w).inv();
                }
            }
            let denom = C::new(T::one(), T::zero()) - newton * repulse;
            let step = newton / denom;
            roots[k] = z - step;
            moved = moved.max(step.norm());
        }
        if moved < T::of(1e-15) {
            break;
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    roots
}

/// Solutions of a zero-dimensional component described by polynomials in
/// a single parameter `u` with minimal polynomial `minpoly`: one verified
/// solution per root.
pub fn substitute_component<T: Scalar>(
    system: &PolynomialSystem,
    parametrization: &[RationalPoly],
    minpoly: &RationalPoly,
    residual_tol: T,
) -> Result<Vec<PtolemySolution<T>>, SolverError> {
    if parametrization.len() != system.variable_count() {
        return Err(SolverError::MissingVariable(
            parametrization.len(),
            system.variable_count(),
        ));
    }
    let mut out = Vec::new();
    for (k, root) in poly_roots::<T>(minpoly).into_iter().enumerate() {
        let values: Vec<C<T>> = parametrization.iter().map(|p| p.eval(root)).collect();
        let residual = system.residual(&values);
        if residual > residual_tol {
            return Err(SolverError::ParametrizationInconsistent(k, format!("{residual}")));
        }
        out.push(PtolemySolution { values, residual, source: Source::Substituted });
    }
    Ok(out)
}
