//! Labeled polyhedral complexes: the generalized permutohedron `Π(u)` for
//! `u = (d p1, p2, 0, ..., 0)`, its gluing with simplices for products
//! `(x_1^{p1}, ..., x_n^{p1}) (x_1^{p2}, ..., x_n^{p2})`, and numerical
//! certificates that a complex supports a minimal cellular resolution.
//!
//! Acyclicity of `C_{<=b}` is tested on the order complex of its face
//! poset, which has the same homology as the regular cell complex and needs
//! no cell orientations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::betti::GradedBettiTable;
use crate::error::{Error, Result};
use crate::linalg::{FieldChar, IntMatrix};
use crate::monomial::{canonical_order, minimalize, Monomial, MonomialIdeal};
use crate::simplicial::SimplicialComplex;
use crate::special::SpecialIdealSpec;

/// Upper bound on distinct label lcms examined by [`supports_resolution`].
pub const MAX_LCM_POINTS: usize = 1_000_000;

/// A nonempty cell: its dimension, sorted vertex ids and lcm label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub label: Monomial,
}

/// A polyhedral complex with monomial labels, stored by its face poset.
///
/// Faces are sorted by `(dim, vertices)`; the vertex set determines a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledComplex {
    vertex_labels: Vec<Monomial>,
    faces: Vec<Face>,
    /// Codimension-one subfaces of each face, as face indices.
    boundary: Vec<Vec<usize>>,
}

impl LabeledComplex {
    /// Builds a complex from vertex labels and `(dim, vertex set)` cells.
    ///
    /// Every vertex must appear as a 0-cell, every cell of dimension `k >= 1`
    /// must have at least `k + 1` faces of dimension `k - 1` among its
    /// subsets, and cell labels are the lcm of their vertex labels.
    pub fn new(vertex_labels: Vec<Monomial>, cells: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        let Some(first) = vertex_labels.first() else {
            return Err(Error::InvalidArgument("complex has no vertices".into()));
        };
        let n = first.nvars();
        if let Some(bad) = vertex_labels.iter().find(|m| m.nvars() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.nvars(),
            });
        }
        let mut by_set: BTreeMap<(usize, Vec<usize>), ()> = BTreeMap::new();
        for (dim, mut vs) in cells {
            vs.sort_unstable();
            vs.dedup();
            if vs.is_empty() || vs.len() < dim + 1 {
                return Err(Error::InvalidArgument(format!(
                    "a {dim}-cell needs at least {} vertices, got {vs:?}",
                    dim + 1
                )));
            }
            if let Some(&v) = vs.iter().find(|&&v| v >= vertex_labels.len()) {
                return Err(Error::InvalidArgument(format!("vertex id {v} out of range")));
            }
            by_set.insert((dim, vs), ());
        }
        for v in 0..vertex_labels.len() {
            if !by_set.contains_key(&(0, vec![v])) {
                return Err(Error::InvalidArgument(format!("vertex {v} has no 0-cell")));
            }
        }
        let faces: Vec<Face> = by_set
            .into_keys()
            .map(|(dim, vertices)| {
                let label = vertices
                    .iter()
                    .skip(1)
                    .fold(vertex_labels[vertices[0]].clone(), |acc, &v| {
                        acc.lcm_unchecked(&vertex_labels[v])
                    });
                Face { dim, vertices, label }
            })
            .collect();
        let mut boundary = vec![Vec::new(); faces.len()];
        for (fi, f) in faces.iter().enumerate() {
            if f.dim == 0 {
                continue;
            }
            boundary[fi] = faces
                .iter()
                .enumerate()
                .filter(|(_, g)| g.dim + 1 == f.dim && is_subset(&g.vertices, &f.vertices))
                .map(|(gi, _)| gi)
                .collect();
            if boundary[fi].len() < f.dim + 1 {
                return Err(Error::InvalidArgument(format!(
                    "{}-cell {:?} has only {} boundary cells",
                    f.dim,
                    f.vertices,
                    boundary[fi].len()
                )));
            }
        }
        Ok(Self {
            vertex_labels,
            faces,
            boundary,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vertex_labels[0].nvars()
    }

    pub fn vertex_labels(&self) -> &[Monomial] {
        &self.vertex_labels
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Indices of the codimension-one subfaces of face `idx`.
    pub fn boundary(&self, idx: usize) -> &[usize] {
        &self.boundary[idx]
    }

    /// Number of faces in each dimension `0..=dim`.
    pub fn face_counts(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let mut counts = vec![0; top + 1];
        for f in &self.faces {
            counts[f.dim] += 1;
        }
        counts
    }

    /// `Σ (-1)^dim f_dim`.
    pub fn euler_characteristic(&self) -> i64 {
        self.face_counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// The ideal generated by the vertex labels.
    pub fn ideal(&self) -> Result<MonomialIdeal> {
        minimalize(self.vertex_labels.iter().cloned())
    }

    /// One line per face: `dim TAB sorted-vertex-ids TAB label`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for f in &self.faces {
            let ids: Vec<String> = f.vertices.iter().map(ToString::to_string).collect();
            writeln!(out, "{}\t{}\t{}", f.dim, ids.join(","), f.label).unwrap();
        }
        out
    }

    /// The complex with one face and everything above it removed.
    pub fn without_face(&self, dim: usize, vertices: &[usize]) -> Result<Self> {
        let mut target = vertices.to_vec();
        target.sort_unstable();
        if !self.faces.iter().any(|f| f.dim == dim && f.vertices == target) {
            return Err(Error::InvalidArgument(format!("no {dim}-face on {target:?}")));
        }
        let cells = self
            .faces
            .iter()
            .filter(|f| !(f.dim >= dim && is_subset(&target, &f.vertices)))
            .map(|f| (f.dim, f.vertices.clone()))
            .collect();
        Self::new(self.vertex_labels.clone(), cells)
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Builds a complex from faces given as sets of vertex labels; vertex ids
/// follow the canonical generator order of the labels.
fn from_label_sets(faces: Vec<(usize, Vec<Monomial>)>) -> Result<LabeledComplex> {
    let mut labels: Vec<Monomial> = faces
        .iter()
        .flat_map(|(_, vs)| vs.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    labels.sort_by(canonical_order);
    let id: HashMap<&Monomial, usize> = labels.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let cells = faces
        .iter()
        .map(|(dim, vs)| (*dim, vs.iter().map(|m| id[m]).collect()))
        .collect();
    LabeledComplex::new(labels, cells)
}

/// Vertices `(i, j)` of `Π(u)`: `d p1` in coordinate `i`, `p2` in coordinate `j`.
fn permutohedron_vertices(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// Faces of `Π(u)` as sets of vertex positions `(i, j)`, with dimensions.
///
/// Each face is the set of vertices satisfying a choice of `v_k = 0` or
/// `v_k = p2` pins. The combinatorial type is the same for every
/// `0 < d p1 < p2`, so dimensions are computed with `d p1 = 1`, `p2 = 3`.
fn permutohedron_faces(n: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let verts = permutohedron_vertices(n);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        // pin[k]: 0 = free, 1 = v_k = 0, 2 = v_k = p2
        let mut c = code;
        let pin: Vec<usize> = (0..n)
            .map(|_| {
                let p = c % 3;
                c /= 3;
                p
            })
            .collect();
        let chosen: Vec<usize> = (0..verts.len())
            .filter(|&v| {
                let (i, j) = verts[v];
                (0..n).all(|k| match pin[k] {
                    1 => k != i && k != j,
                    2 => k == j,
                    _ => true,
                })
            })
            .collect();
        if chosen.is_empty() || !seen.insert(chosen.clone()) {
            continue;
        }
        let pinned_high = pin.iter().filter(|&&p| p == 2).count();
        debug_assert!(pinned_high <= 1, "two coordinates cannot both equal p2");
        let points: Vec<Vec<i64>> = chosen
            .iter()
            .map(|&v| {
                let (i, j) = verts[v];
                let mut x = vec![0i64; n];
                x[i] = 1;
                x[j] = 3;
                x
            })
            .collect();
        let diffs: Vec<Vec<i64>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
            .collect();
        let dim = if diffs.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&diffs).rank(FieldChar::ZERO)
        };
        out.push((dim, chosen.iter().map(|&v| verts[v]).collect()));
    }
    out
}

fn vertex_label(n: usize, i: usize, j: usize, low: &BigUint, high: &BigUint) -> Monomial {
    let mut e = vec![BigUint::zero(); n];
    e[i] = low.clone();
    e[j] = high.clone();
    Monomial::new(e)
}

/// `Π(u)` for `u = (d p1, p2, 0, ..., 0)` with vertex labels
/// `x_i^{d p1} x_j^{p2}` (`i != j`).
pub fn build_permutohedron(n: usize, d: u64, p1: &BigUint, p2: &BigUint) -> Result<LabeledComplex> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if n > 12 {
        return Err(Error::TooLarge(format!("{n} variables for a permutohedron")));
    }
    let low = p1 * d;
    if low.is_zero() || &low >= p2 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < d*p1 < p2, got d*p1 = {low}, p2 = {p2}"
        )));
    }
    let faces = permutohedron_faces(n)
        .into_iter()
        .map(|(dim, vs)| {
            (
                dim,
                vs.into_iter().map(|(i, j)| vertex_label(n, i, j, &low, p2)).collect(),
            )
        })
        .collect();
    from_label_sets(faces)
}

/// The complex for `(x_1^{p1}, ..., x_n^{p1})(x_1^{p2}, ..., x_n^{p2})`:
/// `Π(p1, p2, 0, ..., 0)` with, for each `j`, the simplex on
/// `{x_j^{p2} x_i^{p1} : all i}` attached along the facet `v_j = p2`.
///
/// Requires `s = 2`, `a = (1, 1)` and `ℓ_1 = ℓ_2 = n`.
pub fn build_glued(spec: &SpecialIdealSpec) -> Result<LabeledComplex> {
    let n = spec.nvars();
    if spec.num_factors() != 2 || spec.a() != [1, 1] || spec.ell() != [n, n] {
        return Err(Error::InvalidSpec(format!(
            "gluing needs two factors with a = 1,1 and l = {n},{n}; got {spec}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidSpec("gluing needs n >= 2".into()));
    }
    let (p1, p2) = (&spec.p()[0], &spec.p()[1]);
    let mut faces: Vec<(usize, Vec<Monomial>)> = permutohedron_faces(n)
        .into_iter()
        .map(|(dim, vs)| {
            (
                dim,
                vs.into_iter().map(|(i, j)| vertex_label(n, i, j, p1, p2)).collect(),
            )
        })
        .collect();
    let mut seen: BTreeSet<Vec<Monomial>> = faces
        .iter()
        .map(|(_, vs)| {
            let mut s = vs.clone();
            s.sort();
            s
        })
        .collect();
    for j in 0..n {
        let simplex: Vec<Monomial> = (0..n)
            .map(|i| {
                let mut e = vec![BigUint::zero(); n];
                e[i] += p1;
                e[j] += p2;
                Monomial::new(e)
            })
            .collect();
        for mask in 1u64..(1u64 << n) {
            let mut sub: Vec<Monomial> = (0..n)
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| simplex[k].clone())
                .collect();
            sub.sort();
            if seen.insert(sub.clone()) {
                faces.push((sub.len() - 1, sub));
            }
        }
    }
    from_label_sets(faces)
}

/// Either every `C_{<=b}` is acyclic, or a multidegree where it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    Supported,
    Fails { b: Monomial },
}

impl Support {
    pub fn is_supported(&self) -> bool {
        *self == Support::Supported
    }
}

/// All chains of the face poset (strictly increasing in containment), as
/// sorted lists of face indices.
fn chains(c: &LabeledComplex) -> Vec<Vec<usize>> {
    let below: Vec<Vec<usize>> = c
        .faces
        .iter()
        .map(|f| {
            c.faces
                .iter()
                .enumerate()
                .filter(|(_, g)| g.dim < f.dim && is_subset(&g.vertices, &f.vertices))
                .map(|(gi, _)| gi)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    fn extend(top: usize, below: &[Vec<usize>], chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let mut sorted = chain.clone();
        sorted.sort_unstable();
        out.push(sorted);
        for &g in &below[top] {
            chain.push(g);
            extend(g, below, chain, out);
            chain.pop();
        }
    }
    for f in 0..c.faces.len() {
        extend(f, &below, &mut vec![f], &mut out);
    }
    out
}

/// The distinct lcms of sets of face labels, in ascending order.
fn label_lattice(c: &LabeledComplex) -> Result<Vec<Monomial>> {
    let mut lattice: BTreeSet<Monomial> = BTreeSet::new();
    for f in &c.faces {
        let new: Vec<Monomial> = lattice
            .iter()
            .map(|m| m.lcm_unchecked(&f.label))
            .chain(std::iter::once(f.label.clone()))
            .collect();
        lattice.extend(new);
        if lattice.len() > MAX_LCM_POINTS {
            return Err(Error::TooLarge("lcm lattice of the face labels".into()));
        }
    }
    Ok(lattice.into_iter().collect())
}

/// Checks that every subcomplex `C_{<=b}` is void or acyclic over the field.
///
/// Only lcms of face labels need checking, since `C_{<=b}` equals
/// `C_{<=b'}` for `b'` the lcm of the labels dividing `b`. The first
/// failure in graded order is reported.
pub fn supports_resolution(c: &LabeledComplex, field: FieldChar) -> Result<Support> {
    let all_chains = chains(c);
    let lattice = label_lattice(c)?;
    let failure = lattice.par_iter().find_first(|b| {
        let inside: Vec<bool> = c.faces.iter().map(|f| f.label.divides_unchecked(b)).collect();
        let mut faces: BTreeSet<Vec<usize>> = all_chains
            .iter()
            .filter(|ch| ch.iter().all(|&f| inside[f]))
            .cloned()
            .collect();
        if faces.is_empty() {
            return false;
        }
        faces.insert(Vec::new());
        !SimplicialComplex::from_faces_unchecked(faces)
            .reduced_homology(field)
            .is_acyclic()
    });
    Ok(match failure {
        Some(b) => Support::Fails { b: b.clone() },
        None => Support::Supported,
    })
}

/// No face shares its label with a codimension-one subface.
pub fn is_minimal_cellular(c: &LabeledComplex) -> bool {
    c.faces
        .iter()
        .enumerate()
        .all(|(fi, f)| c.boundary[fi].iter().all(|&g| c.faces[g].label != f.label))
}

/// Reads the Betti table of the supported resolution off the cells:
/// each `k`-face contributes to `β_{k+1, deg(label)}`.
pub fn cellular_betti(c: &LabeledComplex, field: FieldChar) -> Result<GradedBettiTable> {
    if !is_minimal_cellular(c) {
        return Err(Error::Precondition("complex is not minimal".into()));
    }
    if let Support::Fails { b } = supports_resolution(c, field)? {
        return Err(Error::Precondition(format!(
            "complex does not support a resolution (fails at {b})"
        )));
    }
    let mut counts: BTreeMap<(usize, BigUint), u64> = BTreeMap::new();
    for f in &c.faces {
        *counts.entry((f.dim + 1, f.label.degree())).or_default() += 1;
    }
    GradedBettiTable::from_entries(
        std::iter::once((0, BigUint::zero(), 1)).chain(counts.into_iter().map(|((i, d), m)| (i, d, m))),
    )
}

/// Total degree of a label as `u64`, for display and tests.
pub fn label_degree(f: &Face) -> Option<u64> {
    f.label.degree().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::betti_table;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn chars() -> [FieldChar; 3] {
        [FieldChar::ZERO, FieldChar::new(2).unwrap(), FieldChar::new(3).unwrap()]
    }

    fn hexagon() -> LabeledComplex {
        build_permutohedron(3, 1, &big(1), &big(2)).unwrap()
    }

    #[test]
    fn hexagon_shape() {
        let h = hexagon();
        assert_eq!(h.face_counts(), vec![6, 6, 1]);
        let labels: Vec<String> = h.vertex_labels().iter().map(ToString::to_string).collect();
        assert_eq!(labels, ["a^2*b", "a^2*c", "a*b^2", "a*c^2", "b^2*c", "b*c^2"]);
        for (fi, f) in h.faces().iter().enumerate() {
            if f.dim == 1 {
                assert_eq!(label_degree(f), Some(4));
                assert_eq!(h.boundary(fi).len(), 2);
            }
        }
        let top = h.faces().last().unwrap();
        assert_eq!((top.dim, top.label.to_string()), (2, "a^2*b^2*c^2".to_string()));
    }

    #[test]
    fn segment_and_larger_permutohedra() {
        let seg = build_permutohedron(2, 1, &big(1), &big(2)).unwrap();
        assert_eq!(seg.face_counts(), vec![2, 1]);
        assert_eq!(seg.ideal().unwrap().to_string(), "a^2*b,a*b^2");
        let p4 = build_permutohedron(4, 1, &big(1), &big(2)).unwrap();
        assert_eq!(p4.face_counts()[0], 12);
        assert_eq!(p4.euler_characteristic(), 1);
        assert_eq!(p4.face_counts().len(), 4);
        for n in 2..=5 {
            let c = build_permutohedron(n, 2, &big(1), &big(5)).unwrap();
            assert_eq!(c.euler_characteristic(), 1, "n = {n}");
            assert_eq!(c.face_counts()[0], n * (n - 1));
        }
    }

    #[test]
    fn permutohedron_rejects_bad_parameters() {
        assert!(build_permutohedron(3, 2, &big(1), &big(2)).is_err());
        assert!(build_permutohedron(1, 1, &big(1), &big(2)).is_err());
        assert!(build_permutohedron(3, 1, &big(0), &big(2)).is_err());
    }

    #[test]
    fn hexagon_supports_minimal_resolution() {
        let h = hexagon();
        assert!(is_minimal_cellular(&h));
        for f in chars() {
            assert!(supports_resolution(&h, f).unwrap().is_supported());
            let t = cellular_betti(&h, f).unwrap();
            assert_eq!(t.to_tsv(), "0\t0\t1\n1\t3\t6\n2\t4\t6\n3\t6\t1\n");
            assert_eq!(t, betti_table(&h.ideal().unwrap(), f).unwrap());
        }
    }

    #[test]
    fn mutilated_hexagon_has_witness() {
        let h = hexagon();
        let hollow = h.without_face(2, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(hollow.face_counts(), vec![6, 6]);
        let s = supports_resolution(&hollow, FieldChar::ZERO).unwrap();
        assert_eq!(
            s,
            Support::Fails {
                b: Monomial::from_exps(&[2, 2, 2])
            }
        );
        assert!(cellular_betti(&hollow, FieldChar::ZERO).is_err());
    }

    #[test]
    fn equal_labels_are_not_minimal() {
        let u = Monomial::from_exps(&[1, 0]);
        let edge = LabeledComplex::new(vec![u.clone(), u], vec![(0, vec![0]), (0, vec![1]), (1, vec![0, 1])]).unwrap();
        assert!(!is_minimal_cellular(&edge));
        let point = LabeledComplex::new(vec![Monomial::from_exps(&[1])], vec![(0, vec![0])]).unwrap();
        assert_eq!(
            cellular_betti(&point, FieldChar::ZERO).unwrap().to_tsv(),
            "0\t0\t1\n1\t1\t1\n"
        );
    }

    #[test]
    fn constructor_checks_cells() {
        let labels = vec![Monomial::from_exps(&[1, 0]), Monomial::from_exps(&[0, 1])];
        assert!(LabeledComplex::new(labels.clone(), vec![(0, vec![0])]).is_err());
        assert!(LabeledComplex::new(labels.clone(), vec![(0, vec![0]), (0, vec![1]), (2, vec![0, 1])]).is_err());
        assert!(LabeledComplex::new(labels, vec![(0, vec![0]), (0, vec![1]), (0, vec![2])]).is_err());
    }

    #[test]
    fn glued_complexes() {
        let spec = SpecialIdealSpec::from_parts(3, &[3, 3], &[1, 1], &[1, 2]).unwrap();
        let g = build_glued(&spec).unwrap();
        assert_eq!(g.face_counts(), vec![9, 12, 4]);
        assert_eq!(g.ideal().unwrap(), crate::special::expand_spec(&spec).unwrap());
        assert!(is_minimal_cellular(&g));
        for f in chars() {
            let t = cellular_betti(&g, f).unwrap();
            assert_eq!(t.totals(), vec![1, 9, 12, 4]);
            assert_eq!(t, betti_table(&g.ideal().unwrap(), f).unwrap());
        }

        let path = build_glued(&SpecialIdealSpec::from_parts(2, &[2, 2], &[1, 1], &[1, 2]).unwrap()).unwrap();
        assert_eq!(path.face_counts(), vec![4, 3]);
        assert_eq!(path.ideal().unwrap().to_string(), "a^3,a^2*b,a*b^2,b^3");

        let wide = build_glued(&SpecialIdealSpec::from_parts(3, &[3, 3], &[1, 1], &[1, 4]).unwrap()).unwrap();
        assert_eq!(wide.face_counts(), vec![9, 12, 4]);
        assert_eq!(
            cellular_betti(&wide, FieldChar::ZERO).unwrap().totals(),
            vec![1, 9, 12, 4]
        );
    }

    #[test]
    fn glued_rejects_other_shapes() {
        for (n, ell, a, p) in [
            (3, vec![3, 3], vec![2, 1], vec![1, 4]),
            (3, vec![3, 2], vec![1, 1], vec![1, 2]),
            (3, vec![3], vec![1], vec![1]),
            (3, vec![3, 3], vec![1, 2], vec![1, 2]),
        ] {
            let spec = SpecialIdealSpec::from_parts(n, &ell, &a, &p).unwrap();
            assert!(build_glued(&spec).is_err(), "{spec}");
        }
    }

    #[test]
    fn dump_format() {
        let seg = build_permutohedron(2, 1, &big(1), &big(2)).unwrap();
        assert_eq!(seg.dump(), "0\t0\ta^2*b\n0\t1\ta*b^2\n1\t0,1\ta^2*b^2\n");
    }
}
