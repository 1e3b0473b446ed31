//! Recovering the decorated representation from Ptolemy coordinates.
//!
//! Long edges are counter-diagonal matrices read off edge coordinates, short
//! edges are unit upper-triangular products of diamond coordinates, and
//! together they form a cocycle on the truncated simplex whose hexagonal face
//! products are (sigma times) the identity. The determinant formula for the
//! coordinates of a matrix tuple serves as the independent oracle.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mat::{counter_diagonal, pi_product, Mat};
use crate::variety::{integral_points, IntegralPoint};
use crate::{Scalar, C};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("tuple is not generic: coordinate at {0:?} vanishes")]
    NonGenericTuple(IntegralPoint),
    #[error("matrix is not generic: counter-diagonal minor {0} vanishes")]
    NonGenericMatrix(usize),
    #[error("coordinate at {0:?} is zero")]
    ZeroCoordinate(IntegralPoint),
    #[error("round trip mismatch at {0:?}: error {1}")]
    RoundTripMismatch(IntegralPoint, String),
    #[error("hexagon product on face opposite {0} differs from sigma: error {1}")]
    FaceProductMismatch(u8, String),
    #[error("path is not edge-connected at step {0}")]
    DisconnectedPath(usize),
}

/// Ptolemy coordinates of one simplex: a value for every integral point of
/// T^3(n), vertex points included (they are 1 for unit-determinant tuples).
pub type Cochain<T> = BTreeMap<IntegralPoint, C<T>>;

/// Determinant oracle: `c_t = det` of the first `t_i` columns of each `g_i`,
/// concatenated. Defined for tuples of any length k+1 (here k = 3 unless the
/// input says otherwise).
pub fn ptolemy_from_tuple<T: Scalar>(
    gs: &[Mat<T>],
    n: u8,
    genericity_tol: T,
) -> Result<Cochain<T>, ReconstructError> {
    assert!(gs.len() == 4, "expected a 4-tuple of matrices");
    for g in gs {
        assert_eq!(g.nrows(), n as usize);
        assert_eq!(g.ncols(), n as usize);
    }
    let mut out = Cochain::new();
    for t in integral_points(n) {
        let mut cols = Mat::<T>::zeros(n as usize, n as usize);
        let mut c = 0usize;
        for (g, &ti) in gs.iter().zip(t.iter()) {
            for j in 0..ti as usize {
                for i in 0..n as usize {
                    cols[(i, c)] = g[(i, j)];
                }
                c += 1;
            }
        }
        let det = cols.det();
        if det.norm() < genericity_tol {
            return Err(ReconstructError::NonGenericTuple(t));
        }
        out.insert(t, det);
    }
    Ok(out)
}

/// The xyq decomposition of a generic matrix: unique unit upper-triangular
/// x, y with `x^{-1} A y` counter-diagonal, by the minor formulas.
pub fn xyq_decompose<T: Scalar>(
    a: &Mat<T>,
    genericity_tol: T,
) -> Result<(Mat<T>, Mat<T>, Mat<T>), ReconstructError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    // genericity: the counter-diagonal minors |A|_{k..n, 1..n-k+1}
    for k in 1..=n {
        let rows: Vec<usize> = (k - 1..n).collect();
        let cols: Vec<usize> = (0..n - k + 1).collect();
        if a.minor(&rows, &cols).norm() < genericity_tol {
            return Err(ReconstructError::NonGenericMatrix(k));
        }
    }
    let mut q = Mat::<T>::zeros(n, n);
    q[(n - 1, 0)] = a[(n - 1, 0)];
    for j in 2..=n {
        let num = a.minor(
            &(n - j..n).collect::<Vec<_>>(),
            &(0..j).collect::<Vec<_>>(),
        );
        let den = a.minor(
            &(n - j + 1..n).collect::<Vec<_>>(),
            &(0..j - 1).collect::<Vec<_>>(),
        );
        let sign = if (j - 1) % 2 == 0 { T::one() } else { -T::one() };
        q[(n - j, j - 1)] = num / den * C::new(sign, T::zero());
    }
    let mut x = Mat::<T>::identity(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let mut rows: Vec<usize> = vec![i - 1];
            rows.extend(j..n);
            let cols: Vec<usize> = (0..n - j + 1).collect();
            let num = a.minor(&rows, &cols);
            let den = a.minor(&(j - 1..n).collect::<Vec<_>>(), &cols);
            x[(i - 1, j - 1)] = num / den;
        }
    }
    let mut y = Mat::<T>::identity(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let rows: Vec<usize> = (n - j + 1..n).collect();
            let cols: Vec<usize> = (1..=j).filter(|&c| c != i).map(|c| c - 1).collect();
            let num = if j > 1 {
                a.minor(&rows, &cols)
            } else {
                C::new(T::one(), T::zero())
            };
            let den = a.minor(&rows, &(0..j - 1).collect::<Vec<_>>());
            let sign = if (i + j) % 2 == 0 { T::one() } else { -T::one() };
            y[(i - 1, j - 1)] = num / den * C::new(sign, T::zero());
        }
    }
    Ok((x, y, q))
}

fn coordinate<T: Scalar>(c: &Cochain<T>, t: IntegralPoint) -> Result<C<T>, ReconstructError> {
    let v = *c.get(&t).ok_or(ReconstructError::ZeroCoordinate(t))?;
    if v.norm() == T::zero() {
        return Err(ReconstructError::ZeroCoordinate(t));
    }
    Ok(v)
}

/// Long edge `q_ij`, i < j: counter-diagonal with entries
/// `a_k = (-1)^(k-1) c_{(n-k) e_i + k e_j} / c_{(n-k+1) e_i + (k-1) e_j}`.
pub fn long_edge<T: Scalar>(
    c: &Cochain<T>,
    i: u8,
    j: u8,
    n: u8,
) -> Result<Mat<T>, ReconstructError> {
    assert!(i < j && j < 4);
    let mut entries = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let mut num = [0u8; 4];
        num[i as usize] = n - k;
        num[j as usize] = k;
        let mut den = [0u8; 4];
        den[i as usize] = n - k + 1;
        den[j as usize] = k - 1;
        let sign = if (k - 1) % 2 == 0 { T::one() } else { -T::one() };
        entries.push(coordinate(c, num)? / coordinate(c, den)? * C::new(sign, T::zero()));
    }
    Ok(counter_diagonal(&entries))
}

/// One diamond coordinate on a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiamondCoordinate<T> {
    pub face: (u8, u8, u8),
    pub type_vertex: u8,
    pub position: (u8, u8),
    pub value: C<T>,
}

/// Diamond coordinates of type `tau` on the face with ascending vertices
/// (u, v, w), indexed by (row r, column s), r + s <= n. The three grids:
///
/// * tau = u (first): vertex t with t_v, t_w >= 1 at (r, s) = (t_w, t_u + 1),
///   value `-(c_t c_{t+2e_u-e_v-e_w}) / (c_{t+e_u-e_v} c_{t+e_u-e_w})`;
/// * tau = v (middle): vertex t with t_u, t_v >= 1 at (t_w + 1, t_v),
///   value `+(c_{t-e_v+e_w} c_{t-e_u+e_v}) / (c_t c_{t-e_u+e_w})`;
/// * tau = w (last): vertex t with t_u, t_v >= 1 at (t_v, t_w + 1),
///   value `-(c_t c_{t+2e_w-e_u-e_v}) / (c_{t+e_w-e_u} c_{t+e_w-e_v})`.
///
/// For a pSL cochain each value is multiplied by the sign of the face.
pub fn diamond_coordinates<T: Scalar>(
    c: &Cochain<T>,
    face: (u8, u8, u8),
    tau: u8,
    n: u8,
    face_sign: i8,
) -> Result<Vec<DiamondCoordinate<T>>, ReconstructError> {
    let (u, v, w) = face;
    assert!(u < v && v < w && w < 4);
    assert!(tau == u || tau == v || tau == w);
    let sigma = C::new(T::of(face_sign as f64), T::zero());
    let mut out = Vec::new();
    let shift = |t: IntegralPoint, deltas: &[(u8, i8)]| -> IntegralPoint {
        let mut s = t;
        for &(idx, d) in deltas {
            s[idx as usize] = (s[idx as usize] as i8 + d) as u8;
        }
        s
    };
    for t in integral_points(n) {
        if (0..4u8).any(|m| m != u && m != v && m != w && t[m as usize] != 0) {
            continue;
        }
        let (tu, tv, tw) = (t[u as usize], t[v as usize], t[w as usize]);
        let entry = if tau == u {
            if tv < 1 || tw < 1 {
                continue;
            }
            let num = coordinate(c, t)? * coordinate(c, shift(t, &[(u, 2), (v, -1), (w, -1)]))?;
            let den = coordinate(c, shift(t, &[(u, 1), (v, -1)]))?
                * coordinate(c, shift(t, &[(u, 1), (w, -1)]))?;
            DiamondCoordinate {
                face,
                type_vertex: tau,
                position: (tw, tu + 1),
                value: -num / den * sigma,
            }
        } else if tau == v {
            if tu < 1 || tv < 1 {
                continue;
            }
            let num = coordinate(c, shift(t, &[(v, -1), (w, 1)]))?
                * coordinate(c, shift(t, &[(u, -1), (v, 1)]))?;
            let den = coordinate(c, t)? * coordinate(c, shift(t, &[(u, -1), (w, 1)]))?;
            DiamondCoordinate {
                face,
                type_vertex: tau,
                position: (tw + 1, tv),
                value: num / den * sigma,
            }
        } else {
            if tu < 1 || tv < 1 {
                continue;
            }
            let num = coordinate(c, t)? * coordinate(c, shift(t, &[(w, 2), (u, -1), (v, -1)]))?;
            let den = coordinate(c, shift(t, &[(w, 1), (u, -1)]))?
                * coordinate(c, shift(t, &[(w, 1), (v, -1)]))?;
            DiamondCoordinate {
                face,
                type_vertex: tau,
                position: (tv, tw + 1),
                value: -num / den * sigma,
            }
        };
        out.push(entry);
    }
    out.sort_by_key(|d| d.position);
    Ok(out)
}

/// Short edge `alpha^i_{jk}`, j < k: the product
/// `pi_{n-1}(d_{1,1},..,d_{1,n-1}) ... pi_1(d_{n-1,1})` of the type-i diamond
/// coordinates on the face {i, j, k}.
pub fn short_edge<T: Scalar>(
    c: &Cochain<T>,
    i: u8,
    j: u8,
    k: u8,
    n: u8,
    face_sign: i8,
) -> Result<Mat<T>, ReconstructError> {
    assert!(j < k);
    let mut face = [i, j, k];
    face.sort_unstable();
    let diamonds = diamond_coordinates(c, (face[0], face[1], face[2]), i, n, face_sign)?;
    let at = |r: u8, s: u8| {
        diamonds
            .iter()
            .find(|d| d.position == (r, s))
            .map(|d| d.value)
            .expect("diamond grid position")
    };
    let mut m = Mat::<T>::identity(n as usize);
    for r in 1..n {
        let row: Vec<C<T>> = (1..=n - r).map(|s| at(r, s)).collect();
        m = m.mul(&pi_product(n as usize, &row));
    }
    Ok(m)
}

/// The (G, N)-cocycle data of one simplex.
#[derive(Clone)]
pub struct TruncatedSimplexCocycle<T> {
    pub n: u8,
    /// long[(i, j)] for i < j
    pub long: BTreeMap<(u8, u8), Mat<T>>,
    /// short[(i, j, k)] for j < k, i distinct from both
    pub short: BTreeMap<(u8, u8, u8), Mat<T>>,
}

impl<T: Scalar> TruncatedSimplexCocycle<T> {
    pub fn long_edge(&self, i: u8, j: u8) -> Mat<T> {
        if i < j {
            self.long[&(i, j)].clone()
        } else {
            self.long[&(j, i)].inverse().expect("counter-diagonal invertible")
        }
    }

    pub fn short_edge(&self, i: u8, j: u8, k: u8) -> Mat<T> {
        if j < k {
            self.short[&(i, j, k)].clone()
        } else {
            self.short[&(i, k, j)].inverse().expect("unipotent invertible")
        }
    }
}

/// Build the cocycle of one simplex from its coordinates and verify it:
/// the reconstructed tuple `(N, q01 N, a012 q02 N, a013 q03 N)` must
/// reproduce the coordinates (up to the eta sign ambiguity when sigma is
/// nontrivial), and each hexagonal face product must equal sigma times the
/// identity.
pub fn reconstruct_and_verify<T: Scalar>(
    c: &Cochain<T>,
    n: u8,
    face_signs: [i8; 4],
    tol: T,
) -> Result<TruncatedSimplexCocycle<T>, ReconstructError> {
    let mut long = BTreeMap::new();
    for i in 0..4u8 {
        for j in i + 1..4u8 {
            long.insert((i, j), long_edge(c, i, j, n)?);
        }
    }
    let mut short = BTreeMap::new();
    for i in 0..4u8 {
        for j in 0..4u8 {
            for k in j + 1..4u8 {
                if j == i || k == i {
                    continue;
                }
                let opposite: u8 = (0..4u8).find(|&m| m != i && m != j && m != k).unwrap();
                short.insert(
                    (i, j, k),
                    short_edge(c, i, j, k, n, face_signs[opposite as usize])?,
                );
            }
        }
    }
    let cocycle = TruncatedSimplexCocycle { n, long, short };

    // round trip through the determinant oracle
    let g0 = Mat::<T>::identity(n as usize);
    let g1 = cocycle.long_edge(0, 1);
    let g2 = cocycle.short_edge(0, 1, 2).mul(&cocycle.long_edge(0, 2));
    let g3 = cocycle.short_edge(0, 1, 3).mul(&cocycle.long_edge(0, 3));
    let recovered = ptolemy_from_tuple(&[g0, g1, g2, g3], n, T::of(1e-13))
        .map_err(|_| ReconstructError::RoundTripMismatch([0; 4], "degenerate".into()))?;
    let trivial_sigma = face_signs == [1; 4];
    for (t, &want) in c.iter() {
        let got = recovered[t];
        let err = if trivial_sigma {
            (got - want).norm()
        } else {
            // eta lift flips individual coordinate signs
            (got - want).norm().min((got + want).norm())
        };
        if err > tol * (T::one() + want.norm()) {
            return Err(ReconstructError::RoundTripMismatch(*t, format!("{err}")));
        }
    }

    // hexagon products
    for m in 0..4u8 {
        let mut face: Vec<u8> = (0..4u8).filter(|&v| v != m).collect();
        face.sort_unstable();
        let (i, j, k) = (face[0], face[1], face[2]);
        let p = cocycle
            .long_edge(i, j)
            .mul(&cocycle.short_edge(j, i, k))
            .mul(&cocycle.long_edge(j, k))
            .mul(&cocycle.short_edge(k, j, i))
            .mul(&cocycle.long_edge(k, i))
            .mul(&cocycle.short_edge(i, k, j));
        let sigma = C::new(T::of(face_signs[m as usize] as f64), T::zero());
        let mut target = Mat::<T>::identity(n as usize);
        for d in 0..n as usize {
            target[(d, d)] = sigma;
        }
        let err = p.sub(&target).max_norm();
        if err > tol {
            return Err(ReconstructError::FaceProductMismatch(m, format!("{err}")));
        }
    }
    Ok(cocycle)
}

/// One step of a path in the truncated-simplex complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStep {
    /// Long edge of a simplex from vertex i to vertex j.
    Long { simplex: usize, from: u8, to: u8 },
    /// Short edge at vertex v of a simplex, from the (v, a) corner to the
    /// (v, b) corner.
    Short { simplex: usize, vertex: u8, from: u8, to: u8 },
}

/// Endpoint id of a step within the complex: the corner (simplex, vertex,
/// direction) classes under face identifications.
fn corner_class(
    tri: &crate::triangulation::Triangulation,
    s: usize,
    v: u8,
    u: u8,
) -> (usize, u8, u8) {
    // canonical representative: smallest (s, v, u) reachable by crossing faces
    let mut best = (s, v, u);
    let mut stack = vec![(s, v, u)];
    let mut seen = vec![(s, v, u)];
    while let Some((cs, cv, cu)) = stack.pop() {
        for f in 0..4u8 {
            if f == cv || f == cu {
                continue;
            }
            let (sp, fp) = tri.gluing(cs, f);
            let map = crate::triangulation::vertex_map(f, fp);
            let next = (sp, map[cv as usize], map[cu as usize]);
            if !seen.contains(&next) {
                seen.push(next);
                stack.push(next);
                if next < best {
                    best = next;
                }
            }
        }
    }
    best
}

/// Ordered product of cocycle labels along a path; inverse labels for
/// reversed long/short edges come out of the per-simplex cocycles.
pub fn path_product<T: Scalar>(
    tri: &crate::triangulation::Triangulation,
    cocycles: &[TruncatedSimplexCocycle<T>],
    path: &[PathStep],
) -> Result<Mat<T>, ReconstructError> {
    assert_eq!(cocycles.len(), tri.simplex_count());
    let n = cocycles.first().map_or(2, |c| c.n) as usize;
    let mut product = Mat::<T>::identity(n);
    let mut position: Option<(usize, u8, u8)> = None;
    for (idx, step) in path.iter().enumerate() {
        let (start, end, label) = match *step {
            PathStep::Long { simplex, from, to } => {
                assert!(from != to && from < 4 && to < 4);
                (
                    corner_class(tri, simplex, from, to),
                    corner_class(tri, simplex, to, from),
                    cocycles[simplex].long_edge(from, to),
                )
            }
            PathStep::Short { simplex, vertex, from, to } => {
                assert!(from != to && from != vertex && to != vertex);
                (
                    corner_class(tri, simplex, vertex, from),
                    corner_class(tri, simplex, vertex, to),
                    cocycles[simplex].short_edge(vertex, from, to),
                )
            }
        };
        if let Some(pos) = position {
            if pos != start {
                return Err(ReconstructError::DisconnectedPath(idx));
            }
        }
        position = Some(end);
        product = product.mul(&label);
    }
    Ok(product)
}
