//! The canonical irreducible representation `SL(2,C) -> SL(n,C)` on matrices
//! and on Ptolemy cochains.
//!
//! The matrix form acts on degree-(n-1) monomials in two variables, in the
//! basis scaled by binomial coefficients so that the generator images are
//! `q(a^{n-1}, -a^{n-3}, ..)` on counter-diagonal generators and
//! `pi_{n-1}(x..x) ... pi_1(x)` on unipotents.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mat::Mat;
use crate::reconstruct::Cochain;
use crate::variety::{integral_points, IntegralPoint};
use crate::{Scalar, C};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IrrepError {
    #[error("input matrix is not unit determinant (defect {0})")]
    NotUnitDeterminant(String),
    #[error("input cochain does not satisfy its Ptolemy relation (residual {0})")]
    InvalidInputCochain(String),
    #[error("scaling check failed: {0}")]
    ScalingFailed(String),
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Image of a 2x2 unit-determinant matrix under the (n-1)-st symmetric
/// power.
pub fn phi_n_matrix<T: Scalar>(g: &Mat<T>, n: u8) -> Result<Mat<T>, IrrepError> {
    assert_eq!((g.nrows(), g.ncols()), (2, 2));
    let det = g.det();
    let defect = (det - C::new(T::one(), T::zero())).norm();
    if defect > T::of(1e-10) {
        return Err(IrrepError::NotUnitDeterminant(format!("{defect}")));
    }
    let m = n as usize - 1;
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let mut out = Mat::<T>::zeros(n as usize, n as usize);
    for k in 0..n as usize {
        // expand (a X + c Y)^(m-k) (b X + d Y)^k; coefficient of X^(m-j) Y^j
        let mut poly = vec![C::new(T::zero(), T::zero()); m + 1];
        poly[0] = C::new(T::one(), T::zero());
        let mut deg = 0usize;
        let mul_linear = |poly: &mut Vec<C<T>>, deg: &mut usize, p: C<T>, q: C<T>| {
            // multiply by (p X + q Y)
            let mut next = vec![C::new(T::zero(), T::zero()); m + 1];
            for i in 0..=*deg {
                next[i] = next[i] + poly[i] * p;
                next[i + 1] = next[i + 1] + poly[i] * q;
            }
            *poly = next;
            *deg += 1;
        };
        for _ in 0..m - k {
            mul_linear(&mut poly, &mut deg, a, c);
        }
        for _ in 0..k {
            mul_linear(&mut poly, &mut deg, b, d);
        }
        for j in 0..n as usize {
            let scale = T::of(binomial(m, k) / binomial(m, j));
            out[(j, k)] = poly[j] * C::new(scale, T::zero());
        }
    }
    Ok(out)
}

/// Lift of a level-2 cochain to level n: `phi_n(c)_t = prod_{i<j}
/// c_ij^{t_i t_j}`. Preserves the (sigma-)Ptolemy relations; vertex points
/// map to 1.
pub fn phi_n_cochain<T: Scalar>(
    c: &Cochain<T>,
    n: u8,
    face_signs: [i8; 4],
) -> Result<Cochain<T>, IrrepError> {
    let edge = |i: usize, j: usize| {
        let mut t = [0u8; 4];
        t[i] = 1;
        t[j] = 1;
        c[&t]
    };
    // level-2 relation with the sigma signs
    let s1 = T::of((face_signs[2] * face_signs[3]) as f64);
    let s2 = T::of((face_signs[0] * face_signs[3]) as f64);
    let resid = (edge(0, 3) * edge(1, 2) * C::new(s1, T::zero())
        + edge(0, 1) * edge(2, 3) * C::new(s2, T::zero())
        - edge(0, 2) * edge(1, 3))
    .norm();
    if resid > T::of(1e-9) {
        return Err(IrrepError::InvalidInputCochain(format!("{resid}")));
    }
    let mut out = BTreeMap::new();
    for t in integral_points(n) {
        let mut v = C::new(T::one(), T::zero());
        for i in 0..4usize {
            for j in i + 1..4usize {
                let e = t[i] as i32 * t[j] as i32;
                if e != 0 {
                    v = v * edge(i, j).powi(e);
                }
            }
        }
        out.insert(t, v);
    }
    Ok(out)
}

/// phi_n on a full solution of a level-2 system: value per level-n variable
/// class, computed at the class representative from the simplex's level-2
/// cochain.
pub fn phi_n_solution<T: Scalar>(
    tri: &crate::triangulation::Triangulation,
    system2: &crate::variety::PolynomialSystem,
    values2: &[C<T>],
    system_n: &crate::variety::PolynomialSystem,
) -> Result<Vec<C<T>>, IrrepError> {
    assert_eq!(system2.n, 2);
    let lookup2 = crate::variety::VariableLookup::new(tri, 2, &system2.variables);
    let mut out = Vec::with_capacity(system_n.variable_count());
    for var in &system_n.variables {
        let (s, t) = var.rep;
        let mut v = C::new(T::one(), T::zero());
        for i in 0..4usize {
            for j in i + 1..4usize {
                let e = t[i] as i32 * t[j] as i32;
                if e != 0 {
                    let mut p: IntegralPoint = [0; 4];
                    p[i] = 1;
                    p[j] = 1;
                    v = v * values2[lookup2.id(s, &p)].powi(e);
                }
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// `R(lambda(phi_n(c))) - C(n+1,3) R(lambda(c))`, reduced modulo the parity
/// window; vanishes per the scaling law.
pub struct ScalingReport<T> {
    pub factor: u64,
    pub base: C<T>,
    pub lifted: C<T>,
    pub defect: T,
}

pub fn scaling_check<T: Scalar>(
    tri: &crate::triangulation::Triangulation,
    system2: &crate::variety::PolynomialSystem,
    values2: &[C<T>],
    n: u8,
) -> Result<ScalingReport<T>, IrrepError> {
    use crate::bloch::{complex_volume, lambda_element, ComplexVolumeClass, LiftPolicy, reduce_mod};
    let fail = |e: &dyn std::fmt::Display| IrrepError::ScalingFailed(e.to_string());
    let factor = crate::variety::t_count(3, n - 2);
    let system_n = crate::variety::generate_relations(tri, n, &system2.sigma)
        .map_err(|e| fail(&e))?;
    let values_n = phi_n_solution(tri, system2, values2, &system_n)?;
    let resid = system_n.residual(&values_n);
    if resid > T::of(1e-9) {
        return Err(IrrepError::ScalingFailed(format!(
            "phi_n image violates level-n relations: {resid}"
        )));
    }
    let policy = if system2.sigma.is_trivial() {
        LiftPolicy::Principal
    } else {
        LiftPolicy::PslHalfSquare
    };
    let base = complex_volume(&lambda_element(tri, system2, values2, &policy).map_err(|e| fail(&e))?)
        .map_err(|e| fail(&e))?;
    let lifted =
        complex_volume(&lambda_element(tri, &system_n, &values_n, &policy).map_err(|e| fail(&e))?)
            .map_err(|e| fail(&e))?;
    let modulus = ComplexVolumeClass::<T>::modulus(lifted.parity);
    let scaled = base.value * C::new(T::of(factor as f64), T::zero());
    let defect_re = (lifted.value.re - scaled.re).abs();
    let defect_im = reduce_mod(lifted.value.im - scaled.im, modulus).abs();
    Ok(ScalingReport {
        factor,
        base: base.value,
        lifted: lifted.value,
        defect: defect_re.max(defect_im),
    })
}
