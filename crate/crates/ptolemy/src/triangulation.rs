//! Ordered triangulations: parsing, cell classes, orientation signs, and
//! obstruction classes in `H^2(K; Z/2)`.
//!
//! A triangulation is a finite set of ordered 3-simplices with every face
//! glued to another face by the unique order-preserving simplicial map. Face
//! `f` of a simplex is the one opposite vertex `f`; its vertices are
//! `{0..3} \ {f}` in increasing order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Identifies one face of one simplex.
pub type FaceRef = (usize, u8);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("face ({0}, {1}) is not glued")]
    UngluedFace(usize, u8),
    #[error("gluing is not an involution at simplex {0}, face {1}")]
    NonInvolutiveGluing(usize, u8),
    #[error("vertex map for simplex {0}, face {1} is not order-preserving")]
    NonOrderPreservingMap(usize, u8),
    #[error("no consistent orientation signs exist")]
    NonOrientable,
    #[error("supplied orientation signs are inconsistent")]
    BadSigns,
    #[error("edge class {0} has odd 02/13 incidence count {1}")]
    ParityViolation(usize, usize),
    #[error("|H^2| exceeds cap: rank {0} free classes")]
    H2TooLarge(usize),
}

/// A cusp curve supplied with the triangulation file: per-simplex integer
/// exponents on the three cross-ratio parameters (z, z', z'').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspCurve {
    pub label: String,
    pub terms: Vec<CurveTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveTerm {
    pub simplex: usize,
    pub exponents: [i64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub name: String,
    simplex_count: usize,
    /// gluings[s][f] = (neighbor simplex, neighbor face)
    gluings: Vec<[FaceRef; 4]>,
    /// Orientation signs, one per simplex, first simplex normalized to +1
    /// (unless signs were supplied).
    signs: Vec<i8>,
    pub curves: Vec<CuspCurve>,
}

/// Order-preserving vertex correspondence induced by gluing face `f` to
/// face `fp`: the i-th smallest vertex of `f` maps to the i-th smallest of
/// `fp`. Returns a table over all four vertices; the entry for `f` itself is
/// meaningless and set to `fp`.
pub fn vertex_map(f: u8, fp: u8) -> [u8; 4] {
    let from: Vec<u8> = (0..4).filter(|&v| v != f).collect();
    let to: Vec<u8> = (0..4).filter(|&v| v != fp).collect();
    let mut map = [fp; 4];
    for i in 0..3 {
        map[from[i] as usize] = to[i];
    }
    map
}

const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.iter().position(|&e| e == (a, b)).unwrap()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller id as root so representatives are lex-least
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            map.entry(r).or_default().push(i);
        }
        map.into_values().collect()
    }
}

/// Partitions of vertices, edges and faces under the gluing identifications.
/// Each class is sorted; its first entry is the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellClasses {
    pub vertex_classes: Vec<Vec<(usize, u8)>>,
    pub edge_classes: Vec<Vec<(usize, (u8, u8))>>,
    pub face_classes: Vec<Vec<FaceRef>>,
}

/// A Z/2-valued 2-cochain, one value in {+1,-1} per face class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Cocycle {
    pub values: Vec<i8>,
}

impl Z2Cocycle {
    /// Cochain degree: these live on the 2-cells of K.
    pub const DEGREE: u8 = 2;

    pub fn trivial(face_classes: usize) -> Self {
        Z2Cocycle { values: vec![1; face_classes] }
    }
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 1)
    }
}

impl Triangulation {
    /// Build directly from gluing data, validating everything the parser
    /// would. `signs`: verified when given, computed by propagation when
    /// absent.
    pub fn new(
        name: String,
        gluings: Vec<[FaceRef; 4]>,
        signs: Option<Vec<i8>>,
        curves: Vec<CuspCurve>,
    ) -> Result<Self, TriangulationError> {
        let n = gluings.len();
        if n == 0 {
            return Err(TriangulationError::MalformedInput("no simplices".into()));
        }
        for (s, row) in gluings.iter().enumerate() {
            for f in 0..4u8 {
                let (sp, fp) = row[f as usize];
                if sp >= n || fp > 3 {
                    return Err(TriangulationError::MalformedInput(format!(
                        "gluing target ({sp}, {fp}) out of range"
                    )));
                }
                if (sp, fp) == (s, f) {
                    return Err(TriangulationError::MalformedInput(format!(
                        "face ({s}, {f}) glued to itself"
                    )));
                }
                if gluings[sp][fp as usize] != (s, f) {
                    return Err(TriangulationError::NonInvolutiveGluing(s, f));
                }
            }
        }
        for c in &curves {
            for t in &c.terms {
                if t.simplex >= n {
                    return Err(TriangulationError::MalformedInput(format!(
                        "curve `{}` references simplex {}",
                        c.label, t.simplex
                    )));
                }
            }
        }
        let mut tri = Triangulation { name, simplex_count: n, gluings, signs: vec![], curves };
        let computed = tri.propagate_signs()?;
        tri.signs = match signs {
            None => computed,
            Some(given) => {
                if given.len() != n || given.iter().any(|&s| s != 1 && s != -1) {
                    return Err(TriangulationError::MalformedInput("bad signs line".into()));
                }
                // valid iff equal to the computed assignment up to global flip
                let flipped: Vec<i8> = computed.iter().map(|&s| -s).collect();
                if given == computed || given == flipped {
                    given
                } else {
                    return Err(TriangulationError::BadSigns);
                }
            }
        };
        Ok(tri)
    }

    pub fn simplex_count(&self) -> usize {
        self.simplex_count
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn gluing(&self, s: usize, f: u8) -> FaceRef {
        self.gluings[s][f as usize]
    }

    /// Sign propagation across the gluing graph. A pairing of face `f` with
    /// face `f'` is compatible with a global orientation iff
    /// `eps' = -eps * (-1)^(f+f')`.
    fn propagate_signs(&self) -> Result<Vec<i8>, TriangulationError> {
        let n = self.simplex_count;
        let mut eps = vec![0i8; n];
        for start in 0..n {
            if eps[start] != 0 {
                continue;
            }
            eps[start] = 1;
            let mut stack = vec![start];
            while let Some(s) = stack.pop() {
                for f in 0..4u8 {
                    let (sp, fp) = self.gluings[s][f as usize];
                    let want = if (f + fp) % 2 == 1 { eps[s] } else { -eps[s] };
                    if eps[sp] == 0 {
                        eps[sp] = want;
                        stack.push(sp);
                    } else if eps[sp] != want {
                        return Err(TriangulationError::NonOrientable);
                    }
                }
            }
        }
        Ok(eps)
    }

    pub fn cell_classes(&self) -> CellClasses {
        let n = self.simplex_count;
        let vid = |s: usize, v: u8| s * 4 + v as usize;
        let eid = |s: usize, a: u8, b: u8| s * 6 + edge_index(a, b);
        let fid = |s: usize, f: u8| s * 4 + f as usize;

        let mut uf_v = UnionFind::new(4 * n);
        let mut uf_e = UnionFind::new(6 * n);
        let mut uf_f = UnionFind::new(4 * n);
        for s in 0..n {
            for f in 0..4u8 {
                let (sp, fp) = self.gluings[s][f as usize];
                uf_f.union(fid(s, f), fid(sp, fp));
                let map = vertex_map(f, fp);
                for v in 0..4u8 {
                    if v == f {
                        continue;
                    }
                    uf_v.union(vid(s, v), vid(sp, map[v as usize]));
                }
                for &(a, b) in EDGES.iter() {
                    if a == f || b == f {
                        continue;
                    }
                    uf_e.union(eid(s, a, b), eid(sp, map[a as usize], map[b as usize]));
                }
            }
        }
        let vertex_classes = uf_v
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| (i / 4, (i % 4) as u8)).collect())
            .collect();
        let edge_classes = uf_e
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| (i / 6, EDGES[i % 6])).collect())
            .collect();
        let face_classes = uf_f
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| (i / 4, (i % 4) as u8)).collect())
            .collect();
        CellClasses { vertex_classes, edge_classes, face_classes }
    }

    /// Consistent orientation signs (first simplex +1), re-derived from the
    /// gluing graph.
    pub fn orientation_signs(&self) -> Result<Vec<i8>, TriangulationError> {
        self.propagate_signs()
    }

    /// Index of the face class containing face (s, f) within
    /// `classes.face_classes`.
    pub fn face_class_index(&self, classes: &CellClasses, s: usize, f: u8) -> usize {
        classes
            .face_classes
            .iter()
            .position(|c| c.contains(&(s, f)))
            .expect("face class lookup")
    }

    pub fn edge_class_index(&self, classes: &CellClasses, s: usize, a: u8, b: u8) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        classes
            .edge_classes
            .iter()
            .position(|c| c.contains(&(s, (a, b))))
            .expect("edge class lookup")
    }

    /// The value `sigma_i` of a cocycle on the face opposite vertex `i` of
    /// simplex `s`.
    pub fn sigma_on_face(&self, classes: &CellClasses, sigma: &Z2Cocycle, s: usize, f: u8) -> i8 {
        sigma.values[self.face_class_index(classes, s, f)]
    }

    /// Coboundary of a 2-cochain: per simplex the product of its four face
    /// values. Zero coboundary means all products are +1.
    pub fn coboundary_two(&self, classes: &CellClasses, sigma: &Z2Cocycle) -> Vec<i8> {
        (0..self.simplex_count)
            .map(|s| (0..4u8).map(|f| self.sigma_on_face(classes, sigma, s, f)).product())
            .collect()
    }

    /// Coboundary of a 1-cochain on edge classes: value on each face class is
    /// the product of the cochain over the three edges of a representative
    /// face.
    pub fn coboundary_one(&self, classes: &CellClasses, eta: &[i8]) -> Z2Cocycle {
        let values = classes
            .face_classes
            .iter()
            .map(|class| {
                let (s, f) = class[0];
                let vs: Vec<u8> = (0..4u8).filter(|&v| v != f).collect();
                let mut sign = 1i8;
                for i in 0..3 {
                    for j in i + 1..3 {
                        sign *= eta[self.edge_class_index(classes, s, vs[i], vs[j])];
                    }
                }
                sign
            })
            .collect();
        Z2Cocycle { values }
    }

    /// Representatives of `H^2(K; Z/2)`, one per class, trivial cocycle
    /// first, each the lexicographically smallest vector in its coset
    /// (encoding -1 as 1 over GF(2)).
    pub fn enumerate_h2(&self, cap_rank: u32) -> Result<Vec<Z2Cocycle>, TriangulationError> {
        let classes = self.cell_classes();
        let nf = classes.face_classes.len();
        let ne = classes.edge_classes.len();

        // delta2 rows over GF(2): one row per simplex
        let mut d2: Vec<Vec<u8>> = Vec::new();
        for s in 0..self.simplex_count {
            let mut row = vec![0u8; nf];
            for f in 0..4u8 {
                row[self.face_class_index(&classes, s, f)] ^= 1;
            }
            d2.push(row);
        }
        // image of delta1: one generator per edge class
        let mut d1: Vec<Vec<u8>> = Vec::new();
        for e in 0..ne {
            let mut eta = vec![1i8; ne];
            eta[e] = -1;
            let sigma = self.coboundary_one(&classes, &eta);
            d1.push(sigma.values.iter().map(|&v| if v == -1 { 1 } else { 0 }).collect());
        }

        let (d2_rref, d2_piv) = rref_gf2(d2);
        // kernel basis of delta2
        let mut kernel: Vec<Vec<u8>> = Vec::new();
        for c in 0..nf {
            if d2_piv.contains(&c) {
                continue;
            }
            let mut v = vec![0u8; nf];
            v[c] = 1;
            for (ri, &pc) in d2_piv.iter().enumerate() {
                if d2_rref[ri][c] == 1 {
                    v[pc] = 1;
                }
            }
            kernel.push(v);
        }
        let (img, img_piv) = rref_gf2(d1);
        // quotient basis: kernel vectors reduced mod image, deduplicated
        let reduce = |mut v: Vec<u8>| -> Vec<u8> {
            for (ri, &pc) in img_piv.iter().enumerate() {
                if v[pc] == 1 {
                    for (x, y) in v.iter_mut().zip(&img[ri]) {
                        *x ^= *y;
                    }
                }
            }
            v
        };
        let mut quotient: Vec<Vec<u8>> = Vec::new();
        for k in &kernel {
            let mut v = reduce(k.clone());
            // reduce against quotient basis collected so far
            let mut qb = quotient.clone();
            let (qr, qp) = rref_gf2(std::mem::take(&mut qb));
            for (ri, &pc) in qp.iter().enumerate() {
                if v[pc] == 1 {
                    for (x, y) in v.iter_mut().zip(&qr[ri]) {
                        *x ^= *y;
                    }
                }
            }
            if v.iter().any(|&b| b == 1) {
                quotient.push(v);
            }
        }
        let rank = quotient.len() as u32;
        if rank > cap_rank {
            return Err(TriangulationError::H2TooLarge(rank as usize));
        }
        let mut reps: Vec<Vec<u8>> = Vec::new();
        for mask in 0u64..(1u64 << rank) {
            let mut v = vec![0u8; nf];
            for (i, q) in quotient.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, y) in v.iter_mut().zip(q) {
                        *x ^= *y;
                    }
                }
            }
            reps.push(reduce(v));
        }
        reps.sort();
        reps.dedup();
        Ok(reps
            .into_iter()
            .map(|v| Z2Cocycle {
                values: v.into_iter().map(|b| if b == 1 { -1 } else { 1 }).collect(),
            })
            .collect())
    }

    /// Per edge class, the number of incident simplex-edges in position 02 or
    /// 13. For any valid closed ordered triangulation these counts are even;
    /// an odd count signals corrupted class data.
    pub fn check_edge_parity(&self) -> Result<Vec<(usize, usize)>, TriangulationError> {
        let classes = self.cell_classes();
        let mut out = Vec::new();
        for (i, class) in classes.edge_classes.iter().enumerate() {
            let count = class
                .iter()
                .filter(|&&(_, e)| e == (0, 2) || e == (1, 3))
                .count();
            if count % 2 == 1 {
                return Err(TriangulationError::ParityViolation(i, count));
            }
            out.push((i, count));
        }
        Ok(out)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tri {} {}", self.name, self.simplex_count).unwrap();
        for s in 0..self.simplex_count {
            for f in 0..4u8 {
                let (sp, fp) = self.gluings[s][f as usize];
                writeln!(out, "g {} {} {} {}", s, f, sp, fp).unwrap();
            }
        }
        let signs: Vec<String> = self.signs.iter().map(|s| s.to_string()).collect();
        writeln!(out, "signs {}", signs.join(" ")).unwrap();
        for c in &self.curves {
            writeln!(out, "curve {}", c.label).unwrap();
            for t in &c.terms {
                writeln!(
                    out,
                    "term {} {} {} {}",
                    t.simplex, t.exponents[0], t.exponents[1], t.exponents[2]
                )
                .unwrap();
            }
        }
        out
    }
}

fn rref_gf2(mut rows: Vec<Vec<u8>>) -> (Vec<Vec<u8>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(r, pr);
        for i in 0..rows.len() {
            if i != r && rows[i][c] == 1 {
                let (head, tail) = rows.split_at_mut(std::cmp::max(i, r));
                let (a, b) = if i < r { (&mut head[i], &tail[0]) } else { (&mut tail[0], &head[r]) };
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x ^= *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Parse the line-oriented triangulation format.
pub fn parse_triangulation(text: &str) -> Result<Triangulation, TriangulationError> {
    let mut name = None;
    let mut count = 0usize;
    let mut gluings: Vec<[Option<FaceRef>; 4]> = Vec::new();
    let mut signs: Option<Vec<i8>> = None;
    let mut curves: Vec<CuspCurve> = Vec::new();
    let bad = |msg: &str| TriangulationError::MalformedInput(msg.to_string());

    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "tri" => {
                if toks.len() != 3 || name.is_some() {
                    return Err(bad("expected single `tri <name> <count>` header"));
                }
                name = Some(toks[1].to_string());
                count = toks[2].parse().map_err(|_| bad("bad simplex count"))?;
                if count == 0 {
                    return Err(bad("simplex count must be positive"));
                }
                gluings = vec![[None; 4]; count];
            }
            "g" => {
                if name.is_none() {
                    return Err(bad("`g` before `tri` header"));
                }
                if toks.len() != 5 && toks.len() != 6 {
                    return Err(bad("expected `g <s> <f> <s'> <f'>`"));
                }
                let s: usize = toks[1].parse().map_err(|_| bad("bad simplex index"))?;
                let f: u8 = toks[2].parse().map_err(|_| bad("bad face index"))?;
                let sp: usize = toks[3].parse().map_err(|_| bad("bad neighbor index"))?;
                let fp: u8 = toks[4].parse().map_err(|_| bad("bad neighbor face"))?;
                if s >= count || f > 3 || sp >= count || fp > 3 {
                    return Err(bad("gluing indices out of range"));
                }
                // optional explicit vertex image triple, e.g. `013`: must be
                // the order-preserving correspondence (increasing digits)
                if toks.len() == 6 {
                    let digits: Vec<u8> = toks[5]
                        .chars()
                        .map(|c| c.to_digit(10).map(|d| d as u8))
                        .collect::<Option<_>>()
                        .ok_or_else(|| bad("bad vertex map token"))?;
                    let expect: Vec<u8> = (0..4u8).filter(|&v| v != fp).collect();
                    if digits != expect {
                        return Err(TriangulationError::NonOrderPreservingMap(s, f));
                    }
                }
                if gluings[s][f as usize].is_some() {
                    return Err(bad("duplicate gluing line"));
                }
                gluings[s][f as usize] = Some((sp, fp));
            }
            "signs" => {
                if toks.len() != count + 1 {
                    return Err(bad("signs line length mismatch"));
                }
                let parsed: Result<Vec<i8>, _> = toks[1..].iter().map(|t| t.parse()).collect();
                let v = parsed.map_err(|_| bad("bad sign token"))?;
                if v.iter().any(|&s| s != 1 && s != -1) {
                    return Err(bad("signs must be +1 or -1"));
                }
                signs = Some(v);
            }
            "curve" => {
                if toks.len() != 2 {
                    return Err(bad("expected `curve <label>`"));
                }
                curves.push(CuspCurve { label: toks[1].to_string(), terms: vec![] });
            }
            "term" => {
                let c = curves.last_mut().ok_or_else(|| bad("`term` before `curve`"))?;
                if toks.len() != 5 {
                    return Err(bad("expected `term <simplex> <a> <b> <c>`"));
                }
                let s: usize = toks[1].parse().map_err(|_| bad("bad term simplex"))?;
                let parse_i = |t: &str| t.parse::<i64>().map_err(|_| bad("bad term exponent"));
                c.terms.push(CurveTerm {
                    simplex: s,
                    exponents: [parse_i(toks[2])?, parse_i(toks[3])?, parse_i(toks[4])?],
                });
            }
            other => {
                return Err(bad(&format!("unknown directive `{other}`")));
            }
        }
    }

    let name = name.ok_or_else(|| bad("missing `tri` header"))?;
    let mut table = Vec::with_capacity(count);
    for (s, row) in gluings.into_iter().enumerate() {
        let mut full = [(0usize, 0u8); 4];
        for f in 0..4 {
            full[f] = row[f].ok_or(TriangulationError::UngluedFace(s, f as u8))?;
        }
        table.push(full);
    }
    Triangulation::new(name, table, signs, curves)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIG8: &str = "\
tri fig8 2
g 0 0 1 2
g 0 1 1 3
g 0 2 1 0
g 0 3 1 1
g 1 0 0 2
g 1 1 0 3
g 1 2 0 0
g 1 3 0 1
";

    const FIVE2: &str = "\
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

    const S1S2: &str = "\
tri s1s2 2
g 0 0 0 3
g 0 1 1 1
g 0 2 1 2
g 0 3 0 0
g 1 0 1 3
g 1 1 0 1
g 1 2 0 2
g 1 3 1 0
";

    #[test]
    fn parse_fig8() {
        let tri = parse_triangulation(FIG8).unwrap();
        assert_eq!(tri.simplex_count(), 2);
        let classes = tri.cell_classes();
        assert_eq!(classes.vertex_classes.len(), 1);
        assert_eq!(classes.edge_classes.len(), 2);
        assert_eq!(classes.face_classes.len(), 4);
        assert_eq!(tri.signs(), &[1, -1]);
    }

    #[test]
    fn parse_five2() {
        let tri = parse_triangulation(FIVE2).unwrap();
        assert_eq!(tri.simplex_count(), 3);
        let classes = tri.cell_classes();
        assert_eq!(classes.vertex_classes.len(), 1);
        assert_eq!(classes.edge_classes.len(), 3);
        assert_eq!(tri.signs(), &[1, 1, 1]);
    }

    #[test]
    fn parse_s1s2() {
        let tri = parse_triangulation(S1S2).unwrap();
        let classes = tri.cell_classes();
        assert_eq!(classes.vertex_classes.len(), 1);
        assert_eq!(classes.edge_classes.len(), 3);
        assert_eq!(tri.signs(), &[1, -1]);
    }

    #[test]
    fn unglued_face_rejected() {
        let text = "tri t 1\ng 0 0 0 1\ng 0 1 0 0\ng 0 2 0 3\n";
        assert_eq!(parse_triangulation(text), Err(TriangulationError::UngluedFace(0, 3)));
    }

    #[test]
    fn non_involutive_rejected() {
        let text = "\
tri t 2
g 0 0 1 0
g 0 1 1 1
g 0 2 1 2
g 0 3 1 3
g 1 0 0 0
g 1 1 0 2
g 1 2 0 1
g 1 3 0 3
";
        assert!(matches!(
            parse_triangulation(text),
            Err(TriangulationError::NonInvolutiveGluing(..))
        ));
    }

    #[test]
    fn non_order_preserving_rejected() {
        let text = "tri t 1\ng 0 0 0 1 032\ng 0 1 0 0\ng 0 2 0 3\ng 0 3 0 2\n";
        assert_eq!(
            parse_triangulation(text),
            Err(TriangulationError::NonOrderPreservingMap(0, 0))
        );
    }

    #[test]
    fn explicit_order_preserving_accepted() {
        let text = "tri t 1\ng 0 0 0 1 023\ng 0 1 0 0\ng 0 2 0 3\ng 0 3 0 2\n";
        assert!(parse_triangulation(text).is_ok());
    }

    #[test]
    fn one_simplex_self_paired() {
        let text = "tri tiny 1\ng 0 0 0 1\ng 0 1 0 0\ng 0 2 0 3\ng 0 3 0 2\n";
        let tri = parse_triangulation(text).unwrap();
        let classes = tri.cell_classes();
        assert_eq!(classes.vertex_classes.len(), 2);
        assert_eq!(classes.edge_classes.len(), 3);
        assert_eq!(classes.face_classes.len(), 2);
    }

    #[test]
    fn non_orientable_detected() {
        let text = "tri bad 1\ng 0 0 0 2\ng 0 2 0 0\ng 0 1 0 3\ng 0 3 0 1\n";
        assert_eq!(parse_triangulation(text), Err(TriangulationError::NonOrientable));
    }

    #[test]
    fn supplied_signs_verified() {
        let ok = format!("{FIG8}signs 1 -1\n");
        assert!(parse_triangulation(&ok).is_ok());
        let flipped = format!("{FIG8}signs -1 1\n");
        assert!(parse_triangulation(&flipped).is_ok());
        let bad = format!("{FIG8}signs 1 1\n");
        assert_eq!(parse_triangulation(&bad), Err(TriangulationError::BadSigns));
    }

    #[test]
    fn face_class_count_is_twice_simplices() {
        for text in [FIG8, FIVE2, S1S2] {
            let tri = parse_triangulation(text).unwrap();
            let classes = tri.cell_classes();
            assert_eq!(classes.face_classes.len(), 2 * tri.simplex_count());
        }
    }

    #[test]
    fn h2_counts() {
        for (text, expect) in [(FIG8, 2), (FIVE2, 2), (S1S2, 2)] {
            let tri = parse_triangulation(text).unwrap();
            let reps = tri.enumerate_h2(16).unwrap();
            assert_eq!(reps.len(), expect);
            assert!(reps[0].is_trivial());
            // every representative is a cocycle
            let classes = tri.cell_classes();
            for rep in &reps {
                assert!(tri.coboundary_two(&classes, rep).iter().all(|&v| v == 1));
            }
        }
    }

    #[test]
    fn h2_trivial_example() {
        // two-vertex one-simplex complex with |H^2| = 1
        let text = "tri tiny 1\ng 0 0 0 1\ng 0 1 0 0\ng 0 2 0 3\ng 0 3 0 2\n";
        let tri = parse_triangulation(text).unwrap();
        let reps = tri.enumerate_h2(16).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(reps[0].is_trivial());
    }

    #[test]
    fn h2_cap_enforced() {
        let tri = parse_triangulation(FIG8).unwrap();
        assert!(matches!(tri.enumerate_h2(0), Err(TriangulationError::H2TooLarge(1))));
    }

    #[test]
    fn h2_distinct_representatives_not_cohomologous() {
        let tri = parse_triangulation(FIG8).unwrap();
        let classes = tri.cell_classes();
        let reps = tri.enumerate_h2(16).unwrap();
        // product of the two representatives must not be a coboundary: check
        // against all 2^ne eta's (tiny here)
        let ne = classes.edge_classes.len();
        let product: Vec<i8> = reps[0]
            .values
            .iter()
            .zip(&reps[1].values)
            .map(|(a, b)| a * b)
            .collect();
        for mask in 0u32..(1 << ne) {
            let eta: Vec<i8> =
                (0..ne).map(|e| if mask >> e & 1 == 1 { -1 } else { 1 }).collect();
            assert_ne!(tri.coboundary_one(&classes, &eta).values, product);
        }
    }

    #[test]
    fn edge_parity_passes_on_fixtures() {
        for text in [FIG8, FIVE2, S1S2] {
            let tri = parse_triangulation(text).unwrap();
            let counts = tri.check_edge_parity().unwrap();
            assert!(counts.iter().all(|&(_, c)| c % 2 == 0));
        }
        // figure-8: each edge class sees each simplex's 02 and 13 once
        let tri = parse_triangulation(FIG8).unwrap();
        let counts = tri.check_edge_parity().unwrap();
        assert_eq!(counts.iter().map(|&(_, c)| c).sum::<usize>(), 4);
    }

    #[test]
    fn parity_violation_on_corrupted_classes() {
        // deliberately non-involutive gluing table (bypasses `new`), found by
        // scanning corrupted maps; the class partition has an odd 02/13 count
        let tri = Triangulation {
            name: "corrupt".into(),
            simplex_count: 2,
            gluings: vec![
                [(1, 1), (0, 2), (0, 3), (0, 2)],
                [(1, 2), (1, 2), (1, 3), (1, 1)],
            ],
            signs: vec![1, 1],
            curves: vec![],
        };
        assert!(matches!(
            tri.check_edge_parity(),
            Err(TriangulationError::ParityViolation(..))
        ));
    }

    #[test]
    fn serialize_parse_round_trip() {
        for text in [FIG8, FIVE2, S1S2] {
            let tri = parse_triangulation(text).unwrap();
            let again = parse_triangulation(&tri.serialize()).unwrap();
            assert_eq!(tri, again);
        }
    }

    #[test]
    fn curves_parsed() {
        let text = format!(
            "{FIG8}curve meridian\nterm 0 0 0 1\nterm 1 0 0 1\ncurve longitude\nterm 0 -1 0 1\nterm 1 1 0 -1\n"
        );
        let tri = parse_triangulation(&text).unwrap();
        assert_eq!(tri.curves.len(), 2);
        assert_eq!(tri.curves[0].label, "meridian");
        assert_eq!(tri.curves[0].terms[0].exponents, [0, 0, 1]);
    }
}
