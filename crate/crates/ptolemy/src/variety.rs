//! The Ptolemy variety as an explicit polynomial system.
//!
//! Variables are classes of non-vertex integral points of the simplices under
//! the face identifications; there is one degree-2 relation per (simplex,
//! subsimplex) pair, with signs twisted by an obstruction cocycle.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use thiserror::Error;

use crate::triangulation::{vertex_map, Triangulation, Z2Cocycle};
use crate::{Scalar, C};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarietyError {
    #[error("sigma is not a cocycle (coboundary nonzero on simplex {0})")]
    InvalidCocycle(usize),
    #[error("sigma has {0} values but the triangulation has {1} face classes")]
    CocycleLength(usize, usize),
    #[error("unsupported export format `{0}`")]
    UnsupportedFormat(String),
}

/// An integral point of the standard simplex at level n: non-negative
/// coordinates summing to n.
pub type IntegralPoint = [u8; 4];

pub fn point_level(t: &IntegralPoint) -> u8 {
    t.iter().sum()
}

pub fn is_vertex_point(t: &IntegralPoint, n: u8) -> bool {
    t.iter().any(|&x| x == n)
}

/// All of T^3(l) in lexicographic order.
pub fn integral_points(l: u8) -> Vec<IntegralPoint> {
    let mut out = Vec::new();
    for a in 0..=l {
        for b in 0..=l - a {
            for c in 0..=l - a - b {
                out.push([a, b, c, l - a - b - c]);
            }
        }
    }
    out
}

/// Number of elements of T^k(l), i.e. C(l+k, k).
pub fn t_count(k: u8, l: u8) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 1..=k as u64 {
        num *= l as u64 + i;
        den *= i;
    }
    num / den
}

/// Subsimplex anchors: T^3(n-2).
pub fn subsimplices(n: u8) -> Vec<IntegralPoint> {
    assert!(n >= 2);
    integral_points(n - 2)
}

/// A class of identified integral points; the representative is the
/// lexicographically least (simplex, point) member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtolemyVariable {
    pub id: usize,
    pub rep: (usize, IntegralPoint),
    pub members: Vec<(usize, IntegralPoint)>,
}

impl PtolemyVariable {
    pub fn name(&self) -> String {
        let (s, t) = self.rep;
        format!("c_s{}_{}{}{}{}", s, t[0], t[1], t[2], t[3])
    }
}

/// One Ptolemy relation `s1 * m0 + s2 * m1 - m2 = 0`, where the monomials are
/// (c_{a03} c_{a12}, c_{a01} c_{a23}, c_{a02} c_{a13}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtolemyRelation {
    pub simplex: usize,
    pub alpha: IntegralPoint,
    pub signs: (i8, i8),
    pub monomials: [(usize, usize); 3],
}

impl PtolemyRelation {
    pub fn eval<T: Scalar>(&self, values: &[C<T>]) -> C<T> {
        let s1 = C::new(T::of(self.signs.0 as f64), T::zero());
        let s2 = C::new(T::of(self.signs.1 as f64), T::zero());
        let m = |k: usize| values[self.monomials[k].0] * values[self.monomials[k].1];
        s1 * m(0) + s2 * m(1) - m(2)
    }

    /// Gradient with respect to every variable (sparse: at most 6 entries).
    pub fn grad<T: Scalar>(&self, values: &[C<T>], out: &mut [C<T>]) {
        for v in out.iter_mut() {
            *v = C::new(T::zero(), T::zero());
        }
        let coef = [
            C::new(T::of(self.signs.0 as f64), T::zero()),
            C::new(T::of(self.signs.1 as f64), T::zero()),
            C::new(-T::one(), T::zero()),
        ];
        for k in 0..3 {
            let (a, b) = self.monomials[k];
            out[a] = out[a] + coef[k] * values[b];
            out[b] = out[b] + coef[k] * values[a];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub n: u8,
    pub variables: Vec<PtolemyVariable>,
    pub relations: Vec<PtolemyRelation>,
    /// Variable ids fixed to 1 by the gauge choice.
    pub gauge: Vec<usize>,
    pub sigma: Z2Cocycle,
}

impl PolynomialSystem {
    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn free_variables(&self) -> Vec<usize> {
        (0..self.variables.len()).filter(|v| !self.gauge.contains(v)).collect()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name() == name)
    }

    /// Max relation residual of a full assignment.
    pub fn residual<T: Scalar>(&self, values: &[C<T>]) -> T {
        self.relations
            .iter()
            .map(|r| r.eval(values).norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

fn point_index(points: &[IntegralPoint], t: &IntegralPoint) -> usize {
    points.binary_search(t).expect("integral point lookup")
}

/// Classes of non-vertex integral points under the face identifications.
pub fn identify_variables(tri: &Triangulation, n: u8) -> Vec<PtolemyVariable> {
    let pts = integral_points(n);
    let nonvertex: Vec<IntegralPoint> =
        pts.iter().copied().filter(|t| !is_vertex_point(t, n)).collect();
    let m = nonvertex.len();
    let idx = |s: usize, t: &IntegralPoint| s * m + point_index(&nonvertex, t);

    let mut parent: Vec<usize> = (0..tri.simplex_count() * m).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    };

    for s in 0..tri.simplex_count() {
        for f in 0..4u8 {
            let (sp, fp) = tri.gluing(s, f);
            let map = vertex_map(f, fp);
            for t in &nonvertex {
                if t[f as usize] != 0 {
                    continue;
                }
                let mut tp = [0u8; 4];
                for v in 0..4u8 {
                    if v != f {
                        tp[map[v as usize] as usize] = t[v as usize];
                    }
                }
                union(&mut parent, idx(s, t), idx(sp, &tp));
            }
        }
    }

    let mut classes: BTreeMap<usize, Vec<(usize, IntegralPoint)>> = BTreeMap::new();
    for s in 0..tri.simplex_count() {
        for t in &nonvertex {
            let root = find(&mut parent, idx(s, t));
            classes.entry(root).or_default().push((s, *t));
        }
    }
    classes
        .into_values()
        .enumerate()
        .map(|(id, members)| PtolemyVariable { id, rep: members[0], members })
        .collect()
}

/// Map from (simplex, point) to its variable id.
pub struct VariableLookup {
    n: u8,
    nonvertex: Vec<IntegralPoint>,
    table: Vec<usize>,
}

impl VariableLookup {
    pub fn new(tri: &Triangulation, n: u8, variables: &[PtolemyVariable]) -> Self {
        let pts = integral_points(n);
        let nonvertex: Vec<IntegralPoint> =
            pts.iter().copied().filter(|t| !is_vertex_point(t, n)).collect();
        let m = nonvertex.len();
        let mut table = vec![usize::MAX; tri.simplex_count() * m];
        for var in variables {
            for &(s, t) in &var.members {
                table[s * m + point_index(&nonvertex, &t)] = var.id;
            }
        }
        VariableLookup { n, nonvertex, table }
    }

    pub fn id(&self, s: usize, t: &IntegralPoint) -> usize {
        debug_assert!(!is_vertex_point(t, self.n));
        self.table[s * self.nonvertex.len() + point_index(&self.nonvertex, t)]
    }
}

/// Generate the (sigma-twisted) Ptolemy relations. Trivial sigma yields
/// coefficient signs (+1, +1) on every relation.
pub fn generate_relations(
    tri: &Triangulation,
    n: u8,
    sigma: &Z2Cocycle,
) -> Result<PolynomialSystem, VarietyError> {
    let classes = tri.cell_classes();
    if sigma.values.len() != classes.face_classes.len() {
        return Err(VarietyError::CocycleLength(sigma.values.len(), classes.face_classes.len()));
    }
    let cob = tri.coboundary_two(&classes, sigma);
    if let Some(s) = cob.iter().position(|&v| v != 1) {
        return Err(VarietyError::InvalidCocycle(s));
    }

    let variables = identify_variables(tri, n);
    let lookup = VariableLookup::new(tri, n, &variables);
    let mut relations = Vec::new();
    for s in 0..tri.simplex_count() {
        let sg: Vec<i8> = (0..4u8).map(|f| tri.sigma_on_face(&classes, sigma, s, f)).collect();
        for alpha in subsimplices(n) {
            let pt = |i: usize, j: usize| {
                let mut t = alpha;
                t[i] += 1;
                t[j] += 1;
                lookup.id(s, &t)
            };
            relations.push(PtolemyRelation {
                simplex: s,
                alpha,
                signs: (sg[2] * sg[3], sg[0] * sg[3]),
                monomials: [(pt(0, 3), pt(1, 2)), (pt(0, 1), pt(2, 3)), (pt(0, 2), pt(1, 3))],
            });
        }
    }
    Ok(PolynomialSystem { n, variables, relations, gauge: vec![], sigma: sigma.clone() })
}

/// Exponent matrix of the diagonal action: row per variable, column per
/// (vertex class, level k) with k in 0..n-1. Acting by diag(d_0, ..,
/// d_{n-1}) at a vertex multiplies c_t by the first t_v diagonal entries;
/// with det-1 eliminating d_{n-1}, the free parameters are d_0..d_{n-2}.
pub fn diagonal_action_exponents(
    tri: &Triangulation,
    n: u8,
    variables: &[PtolemyVariable],
) -> Vec<Vec<i64>> {
    let classes = tri.cell_classes();
    let vclass = |s: usize, v: u8| {
        classes
            .vertex_classes
            .iter()
            .position(|c| c.contains(&(s, v)))
            .expect("vertex class lookup")
    };
    let ncols = classes.vertex_classes.len() * (n as usize - 1);
    variables
        .iter()
        .map(|var| {
            let (s, t) = var.rep;
            let mut row = vec![0i64; ncols];
            for v in 0..4u8 {
                let vc = vclass(s, v);
                for k in 0..(n - 1) {
                    if t[v as usize] > k {
                        row[vc * (n as usize - 1) + k as usize] += 1;
                    }
                }
            }
            row
        })
        .collect()
}

/// Rank over the rationals, by exact fraction-free elimination.
fn rational_rank_rows(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i64>>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != Ratio::from_integer(0)) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c];
        for i in 0..m.len() {
            if i != rank && m[i][c] != Ratio::from_integer(0) {
                let factor = m[i][c] / pivot;
                let row = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x = *x - factor * y;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Greedy-lexicographic gauge: walk variables in order, fixing each one whose
/// exponent row is rationally independent of the rows already fixed, until
/// the action rank is exhausted.
pub fn choose_gauge(system: &PolynomialSystem, action: &[Vec<i64>]) -> PolynomialSystem {
    let total_rank = rational_rank_rows(action);
    let mut fixed: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (v, row) in action.iter().enumerate() {
        if fixed.len() == total_rank {
            break;
        }
        rows.push(row.clone());
        if rational_rank_rows(&rows) == rows.len() {
            fixed.push(v);
        } else {
            rows.pop();
        }
    }
    let mut out = system.clone();
    out.gauge = fixed;
    out
}

/// Rescale a full assignment along the diagonal action so that every gauge
/// variable becomes exactly 1. Solutions map to solutions.
pub fn rescale_to_gauge<T: Scalar>(
    system: &PolynomialSystem,
    action: &[Vec<i64>],
    values: &[C<T>],
) -> Option<Vec<C<T>>> {
    use crate::mat::Mat;
    let g = &system.gauge;
    if g.is_empty() {
        return Some(values.to_vec());
    }
    let ncols = action[0].len();
    // solve action[g] * theta = -log(values[g]) in the least-squares sense
    // (rows of gauge vars are independent by construction)
    let mut a = Mat::<T>::zeros(g.len(), ncols);
    for (i, &v) in g.iter().enumerate() {
        for j in 0..ncols {
            a[(i, j)] = C::new(T::of(action[v][j] as f64), T::zero());
        }
    }
    let b: Vec<C<T>> = g.iter().map(|&v| -values[v].ln()).collect();
    let at = a.adjoint();
    let normal = at.mul(&a);
    let rhs: Vec<C<T>> = (0..ncols)
        .map(|i| (0..g.len()).map(|k| at[(i, k)] * b[k]).sum())
        .collect();
    let theta = normal.solve(&rhs)?;
    let scaled: Vec<C<T>> = values
        .iter()
        .enumerate()
        .map(|(v, &c)| {
            let shift: C<T> = (0..ncols)
                .map(|j| theta[j] * C::new(T::of(action[v][j] as f64), T::zero()))
                .sum();
            c * shift.exp()
        })
        .collect();
    Some(scaled)
}

/// The eta coboundary action on assignments: flips the sign of c_t whenever
/// the total parity of t_i t_j over edges with eta = -1 is odd. Diamond
/// coordinates are unchanged; solutions of P^sigma map to solutions of
/// P^(delta(eta) sigma).
pub fn apply_eta<T: Scalar>(
    tri: &Triangulation,
    variables: &[PtolemyVariable],
    values: &[C<T>],
    eta: &[i8],
) -> Vec<C<T>> {
    let classes = tri.cell_classes();
    variables
        .iter()
        .map(|var| {
            let (s, t) = var.rep;
            let mut sign = 1i8;
            let edges: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            for (i, j) in edges {
                if eta[tri.edge_class_index(&classes, s, i as u8, j as u8)] == -1
                    && (t[i] as u32 * t[j] as u32) % 2 == 1
                {
                    sign = -sign;
                }
            }
            values[var.id] * C::new(T::of(sign as f64), T::zero())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    AlgebraText,
    StructuredJson,
}

impl std::str::FromStr for ExportFormat {
    type Err = VarietyError;
    fn from_str(s: &str) -> Result<Self, VarietyError> {
        match s {
            "ideal" | "generic-algebra-text" | "text" => Ok(ExportFormat::AlgebraText),
            "json" | "structured-json" => Ok(ExportFormat::StructuredJson),
            other => Err(VarietyError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Export the ideal with the auxiliary nonvanishing equation appended.
pub fn export_ideal(system: &PolynomialSystem, format: ExportFormat) -> String {
    let name = |id: usize| {
        if system.gauge.contains(&id) {
            "1".to_string()
        } else {
            system.variables[id].name()
        }
    };
    match format {
        ExportFormat::AlgebraText => {
            let mut out = String::new();
            for r in &system.relations {
                let term = |k: usize| {
                    format!("{} * {}", name(r.monomials[k].0), name(r.monomials[k].1))
                };
                let s1 = if r.signs.0 == 1 { "" } else { "- " };
                let s2 = if r.signs.1 == 1 { "+ " } else { "- " };
                writeln!(out, "{}{} {}{} - {}", s1, term(0), s2, term(1), term(2)).unwrap();
            }
            let mut prod: Vec<String> = (0..system.variables.len()).map(name).collect();
            prod.retain(|n| n != "1");
            prod.push("t".to_string());
            writeln!(out, "{} - 1", prod.join(" * ")).unwrap();
            out
        }
        ExportFormat::StructuredJson => {
            let mut out = String::from("{\n  \"schema\": 1,\n  \"variables\": [");
            let names: Vec<String> =
                system.variables.iter().map(|v| format!("\"{}\"", v.name())).collect();
            out.push_str(&names.join(", "));
            out.push_str("],\n  \"gauge\": [");
            let fixed: Vec<String> =
                system.gauge.iter().map(|&v| format!("\"{}\"", system.variables[v].name())).collect();
            out.push_str(&fixed.join(", "));
            out.push_str("],\n  \"relations\": [\n");
            let rows: Vec<String> = system
                .relations
                .iter()
                .map(|r| {
                    format!(
                        "    {{\"simplex\": {}, \"alpha\": [{},{},{},{}], \"signs\": [{}, {}], \"monomials\": [[\"{}\", \"{}\"], [\"{}\", \"{}\"], [\"{}\", \"{}\"]]}}",
                        r.simplex,
                        r.alpha[0], r.alpha[1], r.alpha[2], r.alpha[3],
                        r.signs.0, r.signs.1,
                        system.variables[r.monomials[0].0].name(),
                        system.variables[r.monomials[0].1].name(),
                        system.variables[r.monomials[1].0].name(),
                        system.variables[r.monomials[1].1].name(),
                        system.variables[r.monomials[2].0].name(),
                        system.variables[r.monomials[2].1].name(),
                    )
                })
                .collect();
            out.push_str(&rows.join(",\n"));
            out.push_str("\n  ]\n}\n");
            out
        }
    }
}
