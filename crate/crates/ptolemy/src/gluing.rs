//! Cross-ratios of level-2 solutions and Thurston's gluing equations.
//!
//! Edge-parameter convention (from the log-parameters of a flattening):
//! edges 01 and 23 carry z, edges 03 and 12 carry z' = 1/(1-z), and edges
//! 02 and 13 carry z'' = 1 - 1/z.

use thiserror::Error;

use crate::triangulation::{CuspCurve, Triangulation};
use crate::variety::{PolynomialSystem, VariableLookup};
use crate::{Scalar, C};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GluingError {
    #[error("degenerate shape in simplex {0}: z = {1}")]
    DegenerateShape(usize, String),
    #[error("unknown curve label `{0}`")]
    UnknownCurveLabel(String),
    #[error("cross-ratios only defined for n = 2 solutions (got n = {0})")]
    WrongLevel(u8),
}

/// Shape parameters z_i per simplex, with z' = 1/(1-z) and z'' = 1 - 1/z.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeAssignment<T> {
    pub shapes: Vec<C<T>>,
}

impl<T: Scalar> ShapeAssignment<T> {
    pub fn new(shapes: Vec<C<T>>, tol: T) -> Result<Self, GluingError> {
        let one = C::new(T::one(), T::zero());
        for (s, &z) in shapes.iter().enumerate() {
            if z.norm() < tol || (z - one).norm() < tol {
                return Err(GluingError::DegenerateShape(s, format!("{z}")));
            }
        }
        Ok(ShapeAssignment { shapes })
    }

    pub fn z(&self, s: usize) -> C<T> {
        self.shapes[s]
    }

    pub fn z_prime(&self, s: usize) -> C<T> {
        let one = C::new(T::one(), T::zero());
        one / (one - self.shapes[s])
    }

    pub fn z_double_prime(&self, s: usize) -> C<T> {
        let one = C::new(T::one(), T::zero());
        one - one / self.shapes[s]
    }

    /// Parameter kinds 0, 1, 2 for z, z', z''.
    pub fn parameter(&self, s: usize, kind: usize) -> C<T> {
        match kind {
            0 => self.z(s),
            1 => self.z_prime(s),
            2 => self.z_double_prime(s),
            _ => unreachable!("parameter kind"),
        }
    }
}

/// Edge position to parameter kind: {01,23} -> z, {03,12} -> z', {02,13} -> z''.
pub fn edge_parameter_kind(i: u8, j: u8) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 1) | (2, 3) => 0,
        (0, 3) | (1, 2) => 1,
        (0, 2) | (1, 3) => 2,
        _ => unreachable!("not an edge"),
    }
}

/// Cross-ratio of a single level-2 cochain: `z = c03 c12 / (c02 c13)`.
pub fn cross_ratio_of_cochain<T: Scalar>(
    c: &crate::reconstruct::Cochain<T>,
) -> Result<C<T>, GluingError> {
    let at = |i: usize, j: usize| {
        let mut t = [0u8; 4];
        t[i] = 1;
        t[j] = 1;
        c[&t]
    };
    let z = at(0, 3) * at(1, 2) / (at(0, 2) * at(1, 3));
    ShapeAssignment::new(vec![z], T::of(1e-8)).map(|s| s.shapes[0])
}

/// Cross-ratios `z_s = c03 c12 / (c02 c13)` of a level-2 solution.
pub fn cross_ratios<T: Scalar>(
    tri: &Triangulation,
    system: &PolynomialSystem,
    values: &[C<T>],
) -> Result<ShapeAssignment<T>, GluingError> {
    if system.n != 2 {
        return Err(GluingError::WrongLevel(system.n));
    }
    let lookup = VariableLookup::new(tri, 2, &system.variables);
    let coord = |s: usize, i: usize, j: usize| {
        let mut t = [0u8; 4];
        t[i] = 1;
        t[j] = 1;
        values[lookup.id(s, &t)]
    };
    let shapes: Vec<C<T>> = (0..tri.simplex_count())
        .map(|s| coord(s, 0, 3) * coord(s, 1, 2) / (coord(s, 0, 2) * coord(s, 1, 3)))
        .collect();
    ShapeAssignment::new(shapes, T::of(1e-8))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    Edge,
    Cusp,
}

/// One gluing equation: a product of per-simplex powers of (z, z', z'').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingEquation {
    pub kind: EquationKind,
    pub label: String,
    /// (simplex, exponents on z, z', z'')
    pub terms: Vec<(usize, [i64; 3])>,
}

impl GluingEquation {
    pub fn evaluate<T: Scalar>(&self, shapes: &ShapeAssignment<T>) -> C<T> {
        let mut acc = C::new(T::one(), T::zero());
        for &(s, exps) in &self.terms {
            for (kind, &e) in exps.iter().enumerate() {
                if e != 0 {
                    acc = acc * shapes.parameter(s, kind).powi(e as i32);
                }
            }
        }
        acc
    }
}

/// One equation per edge class: the product over incidences of the edge's
/// parameter, with exponent the orientation sign of the simplex.
pub fn edge_equations(tri: &Triangulation) -> Vec<GluingEquation> {
    let classes = tri.cell_classes();
    let signs = tri.signs();
    classes
        .edge_classes
        .iter()
        .enumerate()
        .map(|(idx, class)| {
            let mut per_simplex: std::collections::BTreeMap<usize, [i64; 3]> =
                std::collections::BTreeMap::new();
            for &(s, (i, j)) in class {
                let kind = edge_parameter_kind(i, j);
                per_simplex.entry(s).or_insert([0; 3])[kind] += signs[s] as i64;
            }
            GluingEquation {
                kind: EquationKind::Edge,
                label: format!("edge_{idx}"),
                terms: per_simplex.into_iter().collect(),
            }
        })
        .collect()
}

/// Products of all equations at the given shapes; an equation passes when
/// its product is within tolerance of 1.
pub fn evaluate_equations<T: Scalar>(
    eqs: &[GluingEquation],
    shapes: &ShapeAssignment<T>,
) -> Vec<C<T>> {
    eqs.iter().map(|eq| eq.evaluate(shapes)).collect()
}

/// Evaluate a cusp curve supplied with the triangulation file.
pub fn cusp_equation_eval<T: Scalar>(
    curve: &CuspCurve,
    shapes: &ShapeAssignment<T>,
) -> C<T> {
    let eq = GluingEquation {
        kind: EquationKind::Cusp,
        label: curve.label.clone(),
        terms: curve.terms.iter().map(|t| (t.simplex, t.exponents)).collect(),
    };
    eq.evaluate(shapes)
}

/// Look up a curve by label and evaluate it.
pub fn cusp_equation_by_label<T: Scalar>(
    tri: &Triangulation,
    label: &str,
    shapes: &ShapeAssignment<T>,
) -> Result<C<T>, GluingError> {
    let curve = tri
        .curves
        .iter()
        .find(|c| c.label == label)
        .ok_or_else(|| GluingError::UnknownCurveLabel(label.to_string()))?;
    Ok(cusp_equation_eval(curve, shapes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_newton_multistart, SolverConfig};
    use crate::triangulation::parse_triangulation;
    use crate::variety::{choose_gauge, diagonal_action_exponents, generate_relations};
    use crate::C64;

    const FIG8: &str = "\
tri fig8 2
g 0 0 1 2
g 0 1 1 3
g 0 2 1 0
g 0 3 1 1
g 1 0 0 2
g 1 1 0 3
g 1 2 0 0
g 1 3 0 1
curve meridian
term 0 0 0 1
term 1 0 0 1
curve longitude
term 0 -1 0 1
term 1 1 0 -1
";

    fn fig8_solutions() -> (Triangulation, PolynomialSystem, Vec<Vec<C64>>) {
        let tri = parse_triangulation(FIG8).unwrap();
        let reps = tri.enumerate_h2(16).unwrap();
        let sys = generate_relations(&tri, 2, &reps[1]).unwrap();
        let action = diagonal_action_exponents(&tri, 2, &sys.variables);
        let sys = choose_gauge(&sys, &action);
        let out = solve_newton_multistart(&sys, &SolverConfig::<f64> {
            starts: 250,
            ..Default::default()
        });
        let values = out.solutions.into_iter().map(|s| s.values).collect();
        (tri, sys, values)
    }

    #[test]
    fn shape_invariants() {
        let (tri, sys, sols) = fig8_solutions();
        for v in &sols {
            let shapes = cross_ratios(&tri, &sys, v).unwrap();
            for s in 0..2 {
                let one = C64::new(1.0, 0.0);
                let prod = shapes.z(s) * shapes.z_prime(s) * shapes.z_double_prime(s);
                assert!((prod + one).norm() < 1e-10);
                let alt = one - one / shapes.z(s);
                assert!((alt - shapes.z_double_prime(s)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fig8_geometric_shapes_and_edge_equations() {
        let (tri, sys, sols) = fig8_solutions();
        assert_eq!(sols.len(), 2);
        let eqs = edge_equations(&tri);
        assert_eq!(eqs.len(), 2);
        // total degree 12: six parameters per simplex across both equations
        let total: i64 = eqs
            .iter()
            .flat_map(|e| e.terms.iter())
            .map(|(_, ex)| ex.iter().map(|v| v.abs()).sum::<i64>())
            .sum();
        assert_eq!(total, 12);
        for v in &sols {
            let shapes = cross_ratios(&tri, &sys, v).unwrap();
            // the two shapes are e^{+-i pi/3} in each solution
            for s in 0..2 {
                assert!((shapes.z(s).norm() - 1.0).abs() < 1e-10);
                assert!((shapes.z(s).re - 0.5).abs() < 1e-10);
            }
            for p in evaluate_equations(&eqs, &shapes) {
                assert!((p - C64::new(1.0, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn fig8_cusp_curves_complete() {
        let (tri, sys, sols) = fig8_solutions();
        for v in &sols {
            let shapes = cross_ratios(&tri, &sys, v).unwrap();
            for label in ["meridian", "longitude"] {
                let p = cusp_equation_by_label(&tri, label, &shapes).unwrap();
                assert!((p - C64::new(1.0, 0.0)).norm() < 1e-9, "{label}");
            }
        }
        let shapes = cross_ratios(&tri, &sys, &sols[0]).unwrap();
        assert!(matches!(
            cusp_equation_by_label(&tri, "nope", &shapes),
            Err(GluingError::UnknownCurveLabel(_))
        ));
    }

    #[test]
    fn empty_curve_evaluates_to_one() {
        let shapes = ShapeAssignment::new(vec![C64::new(0.3, 0.8)], 1e-8).unwrap();
        let curve = CuspCurve { label: "empty".into(), terms: vec![] };
        assert_eq!(cusp_equation_eval(&curve, &shapes), C64::new(1.0, 0.0));
    }

    #[test]
    fn random_shapes_fail_edge_equations() {
        let tri = parse_triangulation(FIG8).unwrap();
        let eqs = edge_equations(&tri);
        let shapes =
            ShapeAssignment::new(vec![C64::new(0.3, 0.8), C64::new(-1.2, 0.4)], 1e-8).unwrap();
        let prods = evaluate_equations(&eqs, &shapes);
        assert!(prods.iter().any(|p| (p - C64::new(1.0, 0.0)).norm() > 1e-3));
    }

    #[test]
    fn degenerate_shape_rejected() {
        assert!(matches!(
            ShapeAssignment::new(vec![C64::new(1.0, 1e-12)], 1e-8),
            Err(GluingError::DegenerateShape(..))
        ));
    }

    #[test]
    fn five2_three_edge_equations() {
        let text = "\
tri five2 3
g 0 0 1 1
g 0 1 1 2
g 0 2 2 1
g 0 3 2 0
g 1 0 2 3
g 1 1 0 0
g 1 2 0 1
g 1 3 2 2
g 2 0 0 3
g 2 1 0 2
g 2 2 1 3
g 2 3 1 0
";
        let tri = parse_triangulation(text).unwrap();
        assert_eq!(edge_equations(&tri).len(), 3);
    }

    #[test]
    fn pythagorean_single_simplex_shape() {
        // c03 c12 / (c02 c13) = 9/25 on the 3-4-5 cochain
        let mut c = crate::reconstruct::Cochain::<f64>::new();
        for t in crate::variety::integral_points(2) {
            let v = match t {
                [1, 0, 0, 1] | [0, 1, 1, 0] => 3.0,
                [1, 0, 1, 0] | [0, 1, 0, 1] => 5.0,
                [1, 1, 0, 0] | [0, 0, 1, 1] => 4.0,
                _ => 1.0,
            };
            c.insert(t, C64::new(v, 0.0));
        }
        let z = cross_ratio_of_cochain(&c).unwrap();
        assert!((z - C64::new(9.0 / 25.0, 0.0)).norm() < 1e-13);
        // a degenerate cochain with c03 c12 = c02 c13 is rejected
        for t in crate::variety::integral_points(2) {
            c.insert(t, C64::new(2.0, 0.0));
        }
        assert!(matches!(
            cross_ratio_of_cochain(&c),
            Err(GluingError::DegenerateShape(..))
        ));
    }
}
