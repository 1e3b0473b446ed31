//! Flattenings, the extended pre-Bloch element of a solution, and the Rogers
//! dilogarithm regulator computing complex volume.

use thiserror::Error;

use crate::triangulation::Triangulation;
use crate::variety::{subsimplices, IntegralPoint, PolynomialSystem, VariableLookup};
use crate::{Scalar, C};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlochError {
    #[error("not a flattening: no sign choice makes exp(e) +- exp(f) = 1 (defect {0})")]
    NotAFlattening(String),
    #[error("cross-ratio degenerate (numerically 0 or 1): {0}")]
    DegenerateCrossRatio(String),
    #[error("flattening branch integers p, q not close to integers: p = {0}, q = {1}")]
    NonIntegralBranch(String, String),
}

/// SL solutions carry even flattenings; pSL solutions allow odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    OddAllowed,
}

/// A pair (e, f) with exp(e) + exp(f) = 1, up to signs in the odd-allowed
/// case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flattening<T> {
    pub e: C<T>,
    pub f: C<T>,
    pub parity: Parity,
}

impl<T: Scalar> Flattening<T> {
    pub fn new(e: C<T>, f: C<T>, parity: Parity, tol: T) -> Result<Self, BlochError> {
        let fl = Flattening { e, f, parity };
        fl.signs(tol)?;
        Ok(fl)
    }

    /// The sign choice (s_e, s_f) with s_e exp(e) + s_f exp(f) = 1. Even
    /// parity requires (+1, +1).
    pub fn signs(&self, tol: T) -> Result<(i8, i8), BlochError> {
        let ee = self.e.exp();
        let ff = self.f.exp();
        let one = C::new(T::one(), T::zero());
        let candidates: &[(i8, i8)] = match self.parity {
            Parity::Even => &[(1, 1)],
            Parity::OddAllowed => &[(1, 1), (1, -1), (-1, 1), (-1, -1)],
        };
        let mut best: Option<((i8, i8), T)> = None;
        for &(se, sf) in candidates {
            let scale = |s: i8, z: C<T>| if s == 1 { z } else { -z };
            let defect = (scale(se, ee) + scale(sf, ff) - one).norm();
            if best.map_or(true, |(_, d)| defect < d) {
                best = Some(((se, sf), defect));
            }
        }
        let ((se, sf), defect) = best.unwrap();
        if defect > tol {
            return Err(BlochError::NotAFlattening(format!("{defect}")));
        }
        Ok((se, sf))
    }

    /// Decompose as [z; p, q] with principal logarithms:
    /// e = log z + p pi i, f = log(1-z) + q pi i.
    pub fn branch_data(&self, tol: T) -> Result<(C<T>, i64, i64), BlochError> {
        let (se, sf) = self.signs(tol)?;
        let scale = |s: i8, z: C<T>| if s == 1 { z } else { -z };
        let z = scale(se, self.e.exp());
        let one = C::new(T::one(), T::zero());
        if z.norm() < tol || (z - one).norm() < tol {
            return Err(BlochError::DegenerateCrossRatio(format!("{z:?}")));
        }
        debug_assert!((scale(sf, self.f.exp()) - (one - z)).norm() <= tol.max(T::of(1e-6)));
        let pi = T::PI();
        let p_f = (self.e - z.ln()) / C::new(T::zero(), pi);
        let q_f = (self.f - (one - z).ln()) / C::new(T::zero(), pi);
        let p = p_f.re.round();
        let q = q_f.re.round();
        let int_tol = T::of(1e-6).max(T::epsilon() * T::of(1e4));
        if (p_f - C::new(p, T::zero())).norm() > int_tol
            || (q_f - C::new(q, T::zero())).norm() > int_tol
        {
            return Err(BlochError::NonIntegralBranch(format!("{p_f}"), format!("{q_f}")));
        }
        Ok((z, p.to_i64().unwrap_or(0), q.to_i64().unwrap_or(0)))
    }
}


// Coefficients B_k / (k! (k+1)) of the series
// Li2(1 - e^{-u}) = sum_k c_k u^{k+1}, |u| < 2 pi.
const LOG_SERIES: [f64; 44] = [
    1.0,
    -0.25,
    0.02777777777777777778,
    0.0,
    -0.0002777777777777777778,
    0.0,
    4.724111866969009826e-6,
    0.0,
    -9.185773074661963551e-8,
    0.0,
    1.897886998897099907e-9,
    0.0,
    -4.064761645144225527e-11,
    0.0,
    8.921691020456452555e-13,
    0.0,
    -1.993929586072107569e-14,
    0.0,
    4.518980029619918192e-16,
    0.0,
    -1.035651761218124701e-17,
    0.0,
    2.395218621026186746e-19,
    0.0,
    -5.581785874325009336e-21,
    0.0,
    1.309150755418321286e-22,
    0.0,
    -3.087419802426740293e-24,
    0.0,
    7.31597565270220342e-26,
    0.0,
    -1.740845657234000741e-27,
    0.0,
    4.15763564461389972e-29,
    0.0,
    -9.962148488284622103e-31,
    0.0,
    2.394034424896165301e-32,
    0.0,
    -5.768347355367390084e-34,
    0.0,
    1.393179479647007978e-35,
    0.0,
];

/// Principal-branch dilogarithm Li_2. The branch cut is [1, inf); real
/// arguments on the cut take the limit from below the cut.
pub fn dilog<T: Scalar>(z: C<T>) -> C<T> {
    // on-cut convention: limit from Im < 0
    let z = if z.im == T::zero() && z.re > T::one() {
        C::new(z.re, -T::zero())
    } else {
        z
    };
    dilog_inner(z)
}

fn dilog_inner<T: Scalar>(z: C<T>) -> C<T> {
    let zero = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());
    if z == zero {
        return zero;
    }
    let pi = T::PI();
    if z == one {
        return C::new(pi * pi / T::of(6.0), T::zero());
    }
    let r = z.norm();
    if r > T::of(1.3) {
        // inversion: Li2(z) = -Li2(1/z) - pi^2/6 - ln(-z)^2 / 2
        let l = (-z).ln();
        return -dilog_inner(one / z) - C::new(pi * pi / T::of(6.0), T::zero())
            - l * l * C::new(T::of(0.5), T::zero());
    }
    if r <= T::of(0.55) {
        return dilog_series(z);
    }
    if z.re > T::of(0.5) {
        // reflection: Li2(z) = pi^2/6 - ln(z) ln(1-z) - Li2(1-z)
        let w = one - z;
        return C::new(pi * pi / T::of(6.0), T::zero()) - z.ln() * w.ln() - dilog_inner(w);
    }
    // annulus with Re z <= 1/2: |log(1-z)| is comfortably below 2 pi
    let u = -(one - z).ln();
    let mut acc = zero;
    let mut upow = u;
    for c in LOG_SERIES {
        if c != 0.0 {
            acc = acc + upow * C::new(T::of(c), T::zero());
        }
        upow = upow * u;
    }
    acc
}

fn dilog_series<T: Scalar>(z: C<T>) -> C<T> {
    let mut acc = C::new(T::zero(), T::zero());
    let mut zpow = z;
    for k in 1..90u32 {
        let kk = T::of(k as f64);
        acc = acc + zpow / C::new(kk * kk, T::zero());
        zpow = zpow * z;
        if zpow.norm() < T::of(1e-18) {
            break;
        }
    }
    acc
}

/// Rogers dilogarithm of a flattening:
/// `Li2(z) + (log z + p pi i)(log(1-z) - q pi i)/2 - pi^2/6`.
/// Well defined modulo 4 pi^2 for even flattenings, pi^2 for odd ones.
pub fn rogers_r<T: Scalar>(fl: &Flattening<T>) -> Result<C<T>, BlochError> {
    let (z, p, q) = fl.branch_data(T::of(1e-8).max(T::epsilon() * T::of(1e4)))?;
    let one = C::new(T::one(), T::zero());
    let pi = T::PI();
    let ipi = C::new(T::zero(), pi);
    let a = z.ln() + ipi * C::new(T::of(p as f64), T::zero());
    let b = (one - z).ln() - ipi * C::new(T::of(q as f64), T::zero());
    Ok(dilog(z) + a * b * C::new(T::of(0.5), T::zero())
        - C::new(pi * pi / T::of(6.0), T::zero()))
}

/// Log-parameters w_ij of a flattening (e, f): e on edges 01/23, -f on
/// 12/03, -e+f on 02/13.
pub fn log_parameter<T: Scalar>(fl: &Flattening<T>, i: u8, j: u8) -> C<T> {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 1) | (2, 3) => fl.e,
        (1, 2) | (0, 3) => -fl.f,
        (0, 2) | (1, 3) => -fl.e + fl.f,
        _ => unreachable!("not an edge"),
    }
}

/// Signed formal sum of flattenings.
#[derive(Debug, Clone)]
pub struct ExtendedBlochElement<T> {
    pub terms: Vec<(i8, Flattening<T>)>,
    pub parity: Parity,
}

/// How logarithms of the solution values are chosen. One lift per variable
/// class; identified points share it.
#[derive(Debug, Clone)]
pub enum LiftPolicy {
    /// Principal logarithm of the value.
    Principal,
    /// Half of the principal logarithm of the square: a section of
    /// C -> C*/{+-1}, used for pSL solutions.
    PslHalfSquare,
    /// Principal (or pSL) lift shifted by the given multiple of 2 pi i
    /// (pi i in the pSL case) per variable class.
    Shifted { base: Box<LiftPolicy>, multiples: Vec<i32> },
}

impl LiftPolicy {
    /// Half-square lifts only fix values up to sign, so they force
    /// odd-allowed flattenings regardless of the obstruction class.
    pub fn parity_floor(&self) -> Parity {
        match self {
            LiftPolicy::Principal => Parity::Even,
            LiftPolicy::PslHalfSquare => Parity::OddAllowed,
            LiftPolicy::Shifted { base, .. } => base.parity_floor(),
        }
    }

    fn lift<T: Scalar>(&self, values: &[C<T>]) -> Vec<C<T>> {
        match self {
            LiftPolicy::Principal => values.iter().map(|z| z.ln()).collect(),
            LiftPolicy::PslHalfSquare => values
                .iter()
                .map(|z| (z * z).ln() * C::new(T::of(0.5), T::zero()))
                .collect(),
            LiftPolicy::Shifted { base, multiples } => {
                let unit = match **base {
                    LiftPolicy::PslHalfSquare => T::PI(),
                    _ => T::of(2.0) * T::PI(),
                };
                base.lift(values)
                    .into_iter()
                    .zip(multiples)
                    .map(|(l, &m)| l + C::new(T::zero(), unit * T::of(m as f64)))
                    .collect()
            }
        }
    }
}

/// Validation tolerance for flattenings: 1e-10 at f64, scaled up for
/// scalar types with less precision.
pub fn flattening_tol<T: Scalar>() -> T {
    T::of(1e-10).max(T::epsilon() * T::of(1e3))
}

/// Flattening of one subsimplex from the six lifted coordinates around it:
/// `(c03 + c12 - c02 - c13, c01 + c23 - c02 - c13)`.
pub fn flattening_of_subsimplex<T: Scalar>(
    lifted: impl Fn(u8, u8) -> C<T>,
    parity: Parity,
) -> Result<Flattening<T>, BlochError> {
    let e = lifted(0, 3) + lifted(1, 2) - lifted(0, 2) - lifted(1, 3);
    let f = lifted(0, 1) + lifted(2, 3) - lifted(0, 2) - lifted(1, 3);
    Flattening::new(e, f, parity, flattening_tol::<T>())
}

fn lifted_coordinate<'a, T: Scalar>(
    lookup: &'a VariableLookup,
    lifts: &'a [C<T>],
    s: usize,
) -> impl Fn(&IntegralPoint) -> C<T> + 'a {
    move |t| lifts[lookup.id(s, t)]
}

/// Flattening parity of elements built from a solution: odd as soon as the
/// obstruction class is nontrivial or the lift only determines values up to
/// sign.
pub fn element_parity(system: &PolynomialSystem, policy: &LiftPolicy) -> Parity {
    if system.sigma.is_trivial() && policy.parity_floor() == Parity::Even {
        Parity::Even
    } else {
        Parity::OddAllowed
    }
}

/// The extended (pre-)Bloch element of a verified solution: the signed sum
/// over simplices and subsimplices of the subsimplex flattenings, with one
/// shared logarithm per variable class.
pub fn lambda_element<T: Scalar>(
    tri: &Triangulation,
    system: &PolynomialSystem,
    values: &[C<T>],
    policy: &LiftPolicy,
) -> Result<ExtendedBlochElement<T>, BlochError> {
    let parity = element_parity(system, policy);
    let lifts = policy.lift(values);
    let lookup = VariableLookup::new(tri, system.n, &system.variables);
    let signs = tri.signs();
    let mut terms = Vec::new();
    for s in 0..tri.simplex_count() {
        let coord = lifted_coordinate(&lookup, &lifts, s);
        for alpha in subsimplices(system.n) {
            let fl = flattening_of_subsimplex(
                |i, j| {
                    let mut t = alpha;
                    t[i as usize] += 1;
                    t[j as usize] += 1;
                    coord(&t)
                },
                parity,
            )?;
            terms.push((signs[s], fl));
        }
    }
    Ok(ExtendedBlochElement { terms, parity })
}

/// Per edge-point class, the signed sum of log-parameters over all incident
/// subsimplex edges. Vanishes (up to rounding) for consistent lifts.
pub fn edge_log_sums<T: Scalar>(
    tri: &Triangulation,
    system: &PolynomialSystem,
    values: &[C<T>],
    policy: &LiftPolicy,
) -> Result<Vec<((usize, IntegralPoint), C<T>)>, BlochError> {
    let lifts = policy.lift(values);
    let lookup = VariableLookup::new(tri, system.n, &system.variables);
    edge_log_sums_with_point_lifts(tri, system, |s, t| lifts[lookup.id(s, t)])
}

/// Generalization of [`edge_log_sums`] with an arbitrary lift per (simplex,
/// point) incidence. Shared lifts make every sum vanish; lifts disagreeing
/// across an identification leave a nonzero sum as the report.
pub fn edge_log_sums_with_point_lifts<T: Scalar>(
    tri: &Triangulation,
    system: &PolynomialSystem,
    lift: impl Fn(usize, &IntegralPoint) -> C<T>,
) -> Result<Vec<((usize, IntegralPoint), C<T>)>, BlochError> {
    // point-level lifts may sit on either sign branch
    let parity = if system.sigma.is_trivial() { Parity::Even } else { Parity::OddAllowed };
    let lookup = VariableLookup::new(tri, system.n, &system.variables);
    let signs = tri.signs();
    let n = system.n;
    // accumulate per variable class, then report only edge-point classes
    let mut sums: Vec<C<T>> = vec![C::new(T::zero(), T::zero()); system.variable_count()];
    for s in 0..tri.simplex_count() {
        let coord = |t: &IntegralPoint| lift(s, t);
        for i in 0..4u8 {
            for j in (i + 1)..4u8 {
                for k in 1..n {
                    let mut t = [0u8; 4];
                    t[i as usize] = n - k;
                    t[j as usize] = k;
                    let mut alpha = t;
                    alpha[i as usize] -= 1;
                    alpha[j as usize] -= 1;
                    let fl = flattening_of_subsimplex(
                        |a, b| {
                            let mut p = alpha;
                            p[a as usize] += 1;
                            p[b as usize] += 1;
                            coord(&p)
                        },
                        parity,
                    )?;
                    let w = log_parameter(&fl, i, j);
                    let id = lookup.id(s, &t);
                    sums[id] = sums[id] + w * C::new(T::of(signs[s] as f64), T::zero());
                }
            }
        }
    }
    let mut out = Vec::new();
    for var in &system.variables {
        let (_, t) = var.rep;
        // edge points lie on exactly one edge: two nonzero coordinates
        if t.iter().filter(|&&x| x > 0).count() == 2 {
            out.push((var.rep, sums[var.id]));
        }
    }
    Ok(out)
}

/// A complex volume, with the Chern-Simons part reduced into the canonical
/// window: (-2 pi^2, 2 pi^2] for SL, (-pi^2/2, pi^2/2] for pSL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVolumeClass<T> {
    pub value: C<T>,
    pub parity: Parity,
}

impl<T: Scalar> ComplexVolumeClass<T> {
    pub fn modulus(parity: Parity) -> T {
        let pi2 = T::PI() * T::PI();
        match parity {
            Parity::Even => T::of(4.0) * pi2,
            Parity::OddAllowed => pi2,
        }
    }

    pub fn volume(&self) -> T {
        self.value.re
    }

    pub fn chern_simons(&self) -> T {
        self.value.im
    }
}

/// Reduce x into the half-open window (-m/2, m/2].
pub fn reduce_mod<T: Scalar>(x: T, modulus: T) -> T {
    let half = modulus / T::of(2.0);
    let mut y = x - ((x + half) / modulus).floor() * modulus;
    if y <= -half {
        y += modulus;
    }
    y
}

/// Complex volume of an element: `Vol_C = -i * sum sign * R(flattening)`,
/// with the imaginary (Chern-Simons) part reduced per parity.
pub fn complex_volume<T: Scalar>(
    el: &ExtendedBlochElement<T>,
) -> Result<ComplexVolumeClass<T>, BlochError> {
    let mut total = C::new(T::zero(), T::zero());
    for (sign, fl) in &el.terms {
        total = total + rogers_r(fl)? * C::new(T::of(*sign as f64), T::zero());
    }
    let vol_c = total * C::new(T::zero(), -T::one());
    let m = ComplexVolumeClass::<T>::modulus(el.parity);
    Ok(ComplexVolumeClass { value: C::new(vol_c.re, reduce_mod(vol_c.im, m)), parity: el.parity })
}

/// Convenience: lambda element and complex volume of a verified solution
/// with the default lift for its parity.
pub fn solution_volume<T: Scalar>(
    tri: &Triangulation,
    system: &PolynomialSystem,
    values: &[C<T>],
) -> Result<ComplexVolumeClass<T>, BlochError> {
    let policy = if system.sigma.is_trivial() {
        LiftPolicy::Principal
    } else {
        LiftPolicy::PslHalfSquare
    };
    let el = lambda_element(tri, system, values, &policy)?;
    complex_volume(&el)
}

/// The five flattenings of the lifted five-term relation determined by two
/// flattenings and a branch choice for the third cross-ratio. Test oracle
/// for the relation `sum (-1)^i R(fl_i) = 0 mod 4 pi^2`.
pub fn five_term_family<T: Scalar>(
    fl0: &Flattening<T>,
    fl1: &Flattening<T>,
    k2: i32,
) -> Result<[Flattening<T>; 5], BlochError> {
    let (e0, f0) = (fl0.e, fl0.f);
    let (e1, f1) = (fl1.e, fl1.f);
    let one = C::new(T::one(), T::zero());
    let e2 = e1 - e0;
    let z2 = e2.exp();
    let two_pi = C::new(T::zero(), T::of(2.0) * T::PI());
    let f2 = (one - z2).ln() + two_pi * C::new(T::of(k2 as f64), T::zero());
    let e3 = e1 - e0 - f1 + f0;
    let f3 = f2 - f1;
    let e4 = f0 - f1;
    let f4 = f2 - f1 + e0;
    let tol = T::of(1e-9);
    Ok([
        *fl0,
        *fl1,
        Flattening::new(e2, f2, Parity::Even, tol)?,
        Flattening::new(e3, f3, Parity::Even, tol)?,
        Flattening::new(e4, f4, Parity::Even, tol)?,
    ])
}
