//! Finite abstract simplicial complexes and their reduced homology.

use std::collections::{BTreeSet, HashMap};

use crate::linalg::{FieldChar, IntMatrix};

/// A downward-closed family of finite vertex sets.
///
/// The void complex (no faces) and the irrelevant complex `{∅}` are
/// different: the latter has `H̃_{-1}` of dimension one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    faces: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn void() -> Self {
        Self::default()
    }

    /// The complex `{∅}`.
    pub fn irrelevant() -> Self {
        Self {
            faces: BTreeSet::from([Vec::new()]),
        }
    }

    /// The complex generated by `facets` (every subset of a facet is a face).
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = usize>,
    {
        let mut faces = BTreeSet::new();
        for facet in facets {
            let mut f: Vec<usize> = facet.into_iter().collect();
            f.sort_unstable();
            f.dedup();
            for mask in 0u64..(1u64 << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                faces.insert(sub);
            }
        }
        Self { faces }
    }

    /// Builds a complex from an explicit face list, which must already be
    /// downward closed.
    pub fn from_faces<I>(faces: I) -> Option<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let faces = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        let c = Self { faces };
        c.is_downward_closed().then_some(c)
    }

    pub(crate) fn from_faces_unchecked(faces: BTreeSet<Vec<usize>>) -> Self {
        let c = Self { faces };
        debug_assert!(c.is_downward_closed());
        c
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.faces.contains(face)
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Dimension of the largest face; `-1` for `{∅}` and `None` for the void complex.
    pub fn dim(&self) -> Option<isize> {
        self.faces.iter().map(|f| f.len() as isize - 1).max()
    }

    pub fn is_downward_closed(&self) -> bool {
        self.faces.iter().all(|f| {
            (0..f.len()).all(|skip| {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                self.faces.contains(&sub)
            })
        })
    }

    /// Reduced homology dimensions over the given field.
    pub fn reduced_homology(&self, field: FieldChar) -> ReducedHomology {
        let Some(top) = self.dim() else {
            return ReducedHomology { dims: Vec::new() };
        };
        // by_dim[k + 1] holds the k-faces, k = -1..=top
        let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); (top + 2) as usize];
        for f in &self.faces {
            by_dim[f.len()].push(f);
        }
        // rank of ∂_k : C_k -> C_{k-1}, indexed by k + 1; ∂_{-1} = 0
        let mut ranks = vec![0usize; by_dim.len() + 1];
        for k in 0..=top {
            let idx = (k + 1) as usize;
            let lower: HashMap<&Vec<usize>, usize> = by_dim[idx - 1].iter().enumerate().map(|(i, f)| (*f, i)).collect();
            let mut mat = IntMatrix::zeros(by_dim[idx - 1].len(), by_dim[idx].len());
            for (col, face) in by_dim[idx].iter().enumerate() {
                for skip in 0..face.len() {
                    let sub: Vec<usize> = face
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    let row = lower[&sub];
                    mat.set(row, col, if skip % 2 == 0 { 1 } else { -1 });
                }
            }
            ranks[idx] = mat.rank(field);
        }
        let dims = (0..by_dim.len())
            .map(|idx| by_dim[idx].len() - ranks[idx] - ranks[idx + 1])
            .collect();
        ReducedHomology { dims }
    }
}

/// Dimensions of `H̃_k` for `k = -1, 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedHomology {
    dims: Vec<usize>,
}

impl ReducedHomology {
    /// `dim H̃_k`; zero outside the stored range.
    pub fn get(&self, k: isize) -> usize {
        if k < -1 {
            return 0;
        }
        self.dims.get((k + 1) as usize).copied().unwrap_or(0)
    }

    /// Pairs `(k, dim H̃_k)` with nonzero dimension.
    pub fn nonzero(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| (i as isize - 1, d))
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Raw dimensions starting at `k = -1`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}
