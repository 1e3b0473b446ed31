//! Integer-relation detection via exact LLL lattice reduction.
//!
//! Numerical evidence for volume relations: given a target value and a small
//! basis of reference values, search for integer coefficients r with
//! `r_0 target + sum r_i basis_i ~ 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RelationError {
    #[error("basis must be nonempty")]
    EmptyBasis,
    #[error("dimension {0} exceeds the cap of 8")]
    DimensionCap(usize),
    #[error("precision scale {0} outside (10, 1e15]: f64 inputs carry at most ~15 digits")]
    PrecisionInsufficient(f64),
}

#[derive(Debug, Clone)]
pub struct RelationQuery {
    pub target: f64,
    pub basis: Vec<f64>,
    pub coefficient_bound: i64,
    pub precision_scale: f64,
}

impl RelationQuery {
    pub fn new(target: f64, basis: &[f64]) -> Self {
        RelationQuery {
            target,
            basis: basis.to_vec(),
            coefficient_bound: 64,
            precision_scale: 1e8,
        }
    }
}

/// Exact LLL with delta = 0.99 on integer row vectors.
fn lll_reduce(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let dot_q = |a: &[BigRational], b: &[BigInt]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * BigRational::from_integer(y.clone())).sum()
    };
    let dot_qq = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    };

    // Gram-Schmidt data recomputed from scratch; dimensions here are <= 8
    let gram = |basis: &Vec<Vec<BigInt>>| -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
        let m = basis[0].len();
        let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut mu: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut v: Vec<BigRational> =
                basis[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            for j in 0..i {
                let denom = dot_qq(&star[j], &star[j]);
                let m_ij = if denom.is_zero() {
                    BigRational::zero()
                } else {
                    dot_q(&star[j], &basis[i]) / denom.clone()
                };
                mu[i][j] = m_ij.clone();
                for k in 0..m {
                    let upd = v[k].clone() - m_ij.clone() * star[j][k].clone();
                    v[k] = upd;
                }
            }
            star.push(v);
        }
        (star, mu)
    };

    let (mut star, mut mu) = gram(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 10_000 {
            break;
        }
        // size reduction
        for j in (0..k).rev() {
            let rounded = round_rational(&mu[k][j]);
            if !rounded.is_zero() {
                let row = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&row) {
                    *x -= &rounded * y;
                }
                let (s, m2) = gram(basis);
                star = s;
                mu = m2;
            }
        }
        // Lovasz condition
        let bk = dot_qq(&star[k], &star[k]);
        let bk1 = dot_qq(&star[k - 1], &star[k - 1]);
        let lhs = bk + mu[k][k - 1].clone() * mu[k][k - 1].clone() * bk1.clone();
        if lhs >= delta.clone() * bk1 {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let (s, m2) = gram(basis);
            star = s;
            mu = m2;
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }
}

fn round_rational(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let num = x.numer();
    let den = x.denom();
    // round half away from zero
    let doubled = num * 2 + if num.is_negative() { -den.clone() } else { den.clone() };
    doubled / (den * two)
}

/// Find integer coefficients `(r_0, r_1, ..)` with
/// `|r_0 target + sum r_i basis_i|` below `10 / scale * max|r|`, or None.
pub fn find_integer_relation(q: &RelationQuery) -> Result<Option<Vec<i64>>, RelationError> {
    if q.basis.is_empty() {
        return Err(RelationError::EmptyBasis);
    }
    let dim = q.basis.len() + 1;
    if dim > 8 {
        return Err(RelationError::DimensionCap(dim));
    }
    if !(q.precision_scale > 10.0 && q.precision_scale <= 1e15) {
        return Err(RelationError::PrecisionInsufficient(q.precision_scale));
    }
    let values: Vec<f64> = std::iter::once(q.target).chain(q.basis.iter().copied()).collect();
    let scaled: Vec<BigInt> = values
        .iter()
        .map(|&v| BigInt::from((v * q.precision_scale).round() as i128))
        .collect();
    // rows: identity block plus the scaled-value column
    let mut lattice: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut row = vec![BigInt::zero(); dim + 1];
            row[i] = BigInt::one();
            row[dim] = scaled[i].clone();
            row
        })
        .collect();
    lll_reduce(&mut lattice);

    let tol = 10.0 / q.precision_scale;
    for row in &lattice {
        let coeffs: Vec<i64> = row[..dim].iter().filter_map(|x| x.to_i64()).collect();
        if coeffs.len() != dim {
            continue;
        }
        let maxc = coeffs.iter().map(|c| c.abs()).max().unwrap_or(0);
        if maxc == 0 || maxc > q.coefficient_bound {
            continue;
        }
        if coeffs[0] == 0 {
            continue; // must involve the target
        }
        let residual: f64 = coeffs.iter().zip(&values).map(|(&c, &v)| c as f64 * v).sum();
        if residual.abs() < tol * maxc as f64 {
            // normalize: positive leading coefficient
            let sign = if coeffs[0] < 0 { -1 } else { 1 };
            return Ok(Some(coeffs.into_iter().map(|c| c * sign).collect()));
        }
    }
    Ok(None)
}

/// Search with a pi^2/d column over the conventional denominators. All
/// denominators are tried and the relation with the smallest max
/// coefficient wins (a relation found at d=1 reappears at d=3 scaled down);
/// returns (denominator, coefficients).
pub fn find_relation_with_pi2(
    target: f64,
    basis: &[f64],
    bound: i64,
    scale: f64,
    denominators: &[i64],
) -> Result<Option<(i64, Vec<i64>)>, RelationError> {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut best: Option<(i64, Vec<i64>)> = None;
    for &d in denominators {
        let mut full = basis.to_vec();
        full.push(pi2 / d as f64);
        let q = RelationQuery {
            target,
            basis: full,
            coefficient_bound: bound,
            precision_scale: scale,
        };
        if let Some(coeffs) = find_integer_relation(&q)? {
            let maxc = coeffs.iter().map(|c| c.abs()).max().unwrap_or(0);
            let better = match &best {
                None => true,
                Some((_, prev)) => maxc < prev.iter().map(|c| c.abs()).max().unwrap_or(0),
            };
            if better {
                best = Some((d, coeffs));
            }
        }
    }
    Ok(best)
}

/// Conventional denominators for the pi^2 column.
pub const PI2_DENOMINATORS: [i64; 7] = [1, 2, 3, 4, 6, 12, 15];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_self_relation() {
        let v = 1.234567890123;
        let q = RelationQuery::new(v, &[v]);
        let r = find_integer_relation(&q).unwrap().unwrap();
        assert_eq!(r, vec![1, -1]);
    }

    #[test]
    fn m034_real_part_relation() {
        // 6.332666642 = 2 * 3.166333321 with a pi^2 column unused
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let q = RelationQuery::new(6.332666642, &[3.166333321, pi2]);
        let r = find_integer_relation(&q).unwrap().unwrap();
        assert_eq!(r, vec![1, -2, 0]);
    }

    #[test]
    fn m034_imaginary_part_relation() {
        // 1.024134714 = 2 * 2.157001424 - pi^2/3
        let got = find_relation_with_pi2(
            1.024134714,
            &[2.157001424],
            16,
            1e8,
            &PI2_DENOMINATORS,
        )
        .unwrap()
        .unwrap();
        assert_eq!(got.0, 3);
        assert_eq!(got.1, vec![1, -2, 1]);
        // re-verify the residual
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let resid = 1.024134714 - 2.0 * 2.157001424 + pi2 / 3.0;
        assert!(resid.abs() < 1e-7);
    }

    #[test]
    fn negative_control() {
        // unrelated transcendental-ish values admit no small relation
        let q = RelationQuery {
            target: 0.7390851332151607,
            basis: vec![0.5671432904097838, 1.4142135623730951],
            coefficient_bound: 100,
            precision_scale: 1e10,
        };
        assert_eq!(find_integer_relation(&q).unwrap(), None);
    }

    #[test]
    fn scaling_inputs_preserves_coefficients() {
        let v1 = 0.847213595499958;
        let v2 = 2.0 * v1;
        let q1 = RelationQuery::new(v2, &[v1]);
        let r1 = find_integer_relation(&q1).unwrap().unwrap();
        let q2 = RelationQuery::new(3.0 * v2, &[3.0 * v1]);
        let r2 = find_integer_relation(&q2).unwrap().unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1, vec![1, -2]);
    }

    #[test]
    fn found_relations_reverify() {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let q = RelationQuery::new(2.0 * 1.0149416064096535 + pi2 / 6.0, &[
            1.0149416064096535,
            pi2 / 6.0,
        ]);
        let r = find_integer_relation(&q).unwrap().unwrap();
        let vals = [2.0 * 1.0149416064096535 + pi2 / 6.0, 1.0149416064096535, pi2 / 6.0];
        let resid: f64 = r.iter().zip(vals).map(|(&c, v)| c as f64 * v).sum();
        assert!(resid.abs() < 10.0 / 1e8 * r.iter().map(|c| c.abs()).max().unwrap() as f64);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            find_integer_relation(&RelationQuery::new(1.0, &[])),
            Err(RelationError::EmptyBasis)
        ));
        let q = RelationQuery { precision_scale: 1e20, ..RelationQuery::new(1.0, &[1.0]) };
        assert!(matches!(
            find_integer_relation(&q),
            Err(RelationError::PrecisionInsufficient(_))
        ));
        let q = RelationQuery::new(1.0, &[1.0; 9]);
        assert!(matches!(find_integer_relation(&q), Err(RelationError::DimensionCap(10))));
    }
}
