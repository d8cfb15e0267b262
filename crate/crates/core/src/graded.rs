//! Z_n-graded finite-dimensional vector spaces over Q(q), degree-homogeneous
//! linear maps with an explicit degree shift, exact subspace algebra, and the
//! anyonic braiding.
//!
//! Subspaces are stored as reduced row-echelon bases, so two computations of
//! the same subspace compare syntactically equal. Basis ordering of tensor
//! products is lexicographic with the left factor major; tensor basis names
//! join the factor names with '.'.

use crate::scalar::Scalar;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("grading modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(
        "entry ({row}, {col}) violates degree homogeneity: |{cod}| != |{dom}| + {shift} (mod n)"
    )]
    NotHomogeneous {
        row: usize,
        col: usize,
        cod: String,
        dom: String,
        shift: u32,
    },
    #[error("duplicate basis name: {0}")]
    DuplicateName(String),
    #[error("basis degree {degree} out of range for modulus {modulus}")]
    DegreeRange { degree: u32, modulus: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVector {
    pub name: String,
    pub degree: u32,
}

/// A finite-dimensional Z_n-graded vector space with a named, ordered basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    modulus: u32,
    basis: Vec<BasisVector>,
}

impl GradedSpace {
    pub fn new(
        modulus: u32,
        basis: Vec<(impl Into<String>, u32)>,
    ) -> Result<Arc<GradedSpace>, GradedError> {
        let basis: Vec<BasisVector> = basis
            .into_iter()
            .map(|(name, degree)| BasisVector {
                name: name.into(),
                degree,
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        for v in &basis {
            if v.degree >= modulus {
                return Err(GradedError::DegreeRange {
                    degree: v.degree,
                    modulus,
                });
            }
            if !seen.insert(v.name.clone()) {
                return Err(GradedError::DuplicateName(v.name.clone()));
            }
        }
        Ok(Arc::new(GradedSpace { modulus, basis }))
    }

    /// One-dimensional space in degree 0; the tensor unit.
    pub fn unit(modulus: u32) -> Arc<GradedSpace> {
        GradedSpace::new(modulus, vec![("1", 0u32)]).unwrap()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn degree(&self, index: usize) -> u32 {
        self.basis[index].degree
    }

    pub fn name(&self, index: usize) -> &str {
        &self.basis[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|v| v.name == name)
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![Scalar::zero(self.modulus); self.dim()]
    }

    pub fn basis_vector(&self, index: usize) -> Vec<Scalar> {
        let mut v = self.zero_vector();
        v[index] = Scalar::one(self.modulus);
        v
    }

    /// Degree of a homogeneous vector, None for 0 or mixed-degree vectors.
    pub fn homogeneous_degree(&self, v: &[Scalar]) -> Option<u32> {
        let mut deg = None;
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                match deg {
                    None => deg = Some(self.basis[i].degree),
                    Some(d) if d == self.basis[i].degree => {}
                    Some(_) => return None,
                }
            }
        }
        deg
    }

    /// Tensor product, basis ordered with the left factor major.
    pub fn tensor(v: &Arc<GradedSpace>, w: &Arc<GradedSpace>) -> Arc<GradedSpace> {
        assert_eq!(v.modulus, w.modulus, "grading modulus mismatch");
        let n = v.modulus;
        let mut basis = Vec::with_capacity(v.dim() * w.dim());
        for a in &v.basis {
            for b in &w.basis {
                basis.push(BasisVector {
                    name: format!("{}.{}", a.name, b.name),
                    degree: (a.degree + b.degree) % n,
                });
            }
        }
        Arc::new(GradedSpace {
            modulus: n,
            basis,
        })
    }

    pub fn tensor_power(v: &Arc<GradedSpace>, k: usize) -> Arc<GradedSpace> {
        assert!(k >= 1);
        let mut acc = v.clone();
        for _ in 1..k {
            acc = GradedSpace::tensor(&acc, v);
        }
        acc
    }

    /// Render a vector as a sum of named basis terms, deterministically.
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        assert_eq!(v.len(), self.dim());
        let mut out = String::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = match c.as_rational() {
                Some(r) => {
                    use num::Signed;
                    if r.is_negative() {
                        ('-', Scalar::from_rational(self.modulus, -r))
                    } else {
                        ('+', c.clone())
                    }
                }
                None => ('+', c.clone()),
            };
            if out.is_empty() {
                if sign == '-' {
                    out.push_str("- ");
                }
            } else {
                out.push_str(if sign == '-' { " - " } else { " + " });
            }
            if !mag.is_one() {
                if mag.as_rational().is_some() {
                    out.push_str(&mag.format());
                } else {
                    out.push('(');
                    out.push_str(&mag.format());
                    out.push(')');
                }
                out.push(' ');
            }
            out.push_str(&self.basis[i].name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub type SpaceRef = Arc<GradedSpace>;

/// A degree-homogeneous linear map with an explicit degree shift:
/// a nonzero entry (i, j) requires |cod_i| = |dom_j| + shift (mod n).
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    dom: SpaceRef,
    cod: SpaceRef,
    shift: u32,
    /// row-major, rows indexed by codomain basis
    mat: Vec<Vec<Scalar>>,
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GradedMap({} -> {}, shift {}, {}x{})",
            self.dom.dim(),
            self.cod.dim(),
            self.shift,
            self.cod.dim(),
            self.dom.dim()
        )
    }
}

impl GradedMap {
    pub fn new(
        dom: SpaceRef,
        cod: SpaceRef,
        shift: u32,
        mat: Vec<Vec<Scalar>>,
    ) -> Result<GradedMap, GradedError> {
        if dom.modulus() != cod.modulus() {
            return Err(GradedError::ModulusMismatch(dom.modulus(), cod.modulus()));
        }
        let n = dom.modulus();
        let shift = shift % n.max(1);
        if mat.len() != cod.dim() {
            return Err(GradedError::Dimension {
                expected: cod.dim(),
                got: mat.len(),
            });
        }
        for (i, row) in mat.iter().enumerate() {
            if row.len() != dom.dim() {
                return Err(GradedError::Dimension {
                    expected: dom.dim(),
                    got: row.len(),
                });
            }
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && cod.degree(i) != (dom.degree(j) + shift) % n {
                    return Err(GradedError::NotHomogeneous {
                        row: i,
                        col: j,
                        cod: cod.name(i).to_string(),
                        dom: dom.name(j).to_string(),
                        shift,
                    });
                }
            }
        }
        Ok(GradedMap {
            dom,
            cod,
            shift,
            mat,
        })
    }

    /// Build from images of the domain basis vectors.
    pub fn from_images(
        dom: SpaceRef,
        cod: SpaceRef,
        shift: u32,
        images: Vec<Vec<Scalar>>,
    ) -> Result<GradedMap, GradedError> {
        if images.len() != dom.dim() {
            return Err(GradedError::Dimension {
                expected: dom.dim(),
                got: images.len(),
            });
        }
        let n = dom.modulus();
        let mut mat = vec![vec![Scalar::zero(n); dom.dim()]; cod.dim()];
        for (j, img) in images.iter().enumerate() {
            if img.len() != cod.dim() {
                return Err(GradedError::Dimension {
                    expected: cod.dim(),
                    got: img.len(),
                });
            }
            for (i, c) in img.iter().enumerate() {
                mat[i][j] = c.clone();
            }
        }
        GradedMap::new(dom, cod, shift, mat)
    }

    pub fn identity(space: &SpaceRef) -> GradedMap {
        let n = space.modulus();
        let d = space.dim();
        let mut mat = vec![vec![Scalar::zero(n); d]; d];
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = Scalar::one(n);
        }
        GradedMap {
            dom: space.clone(),
            cod: space.clone(),
            shift: 0,
            mat,
        }
    }

    pub fn zero(dom: SpaceRef, cod: SpaceRef, shift: u32) -> GradedMap {
        let n = dom.modulus();
        assert_eq!(n, cod.modulus());
        let mat = vec![vec![Scalar::zero(n); dom.dim()]; cod.dim()];
        GradedMap {
            dom,
            cod,
            shift: shift % n.max(1),
            mat,
        }
    }

    pub fn dom(&self) -> &SpaceRef {
        &self.dom
    }

    pub fn cod(&self) -> &SpaceRef {
        &self.cod
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn matrix(&self) -> &Vec<Vec<Scalar>> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.mat[row][col]
    }

    pub fn is_zero_map(&self) -> bool {
        self.mat.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dom.dim(), "apply: dimension mismatch");
        let n = self.dom.modulus();
        let mut out = vec![Scalar::zero(n); self.cod.dim()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, row) in self.mat.iter().enumerate() {
                if !row[j].is_zero() {
                    let t = &row[j] * c;
                    out[i] += &t;
                }
            }
        }
        out
    }

    /// Image of a named basis vector.
    pub fn apply_basis(&self, j: usize) -> Vec<Scalar> {
        self.mat.iter().map(|row| row[j].clone()).collect()
    }

    /// self after other: (self . other)(v) = self(other(v)). Shifts add mod n.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(
            other.cod.as_ref(),
            self.dom.as_ref(),
            "compose: domain/codomain mismatch"
        );
        let n = self.dom.modulus();
        let mut mat = vec![vec![Scalar::zero(n); other.dom.dim()]; self.cod.dim()];
        for (j, _col) in other.dom.basis().iter().enumerate() {
            let mid = other.apply_basis(j);
            let img = self.apply(&mid);
            for (i, c) in img.into_iter().enumerate() {
                mat[i][j] = c;
            }
        }
        GradedMap {
            dom: other.dom.clone(),
            cod: self.cod.clone(),
            shift: (self.shift + other.shift) % n.max(1),
            mat,
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.dom.as_ref(), other.dom.as_ref());
        assert_eq!(self.cod.as_ref(), other.cod.as_ref());
        assert_eq!(self.shift, other.shift, "add: shift mismatch");
        let mat = self
            .mat
            .iter()
            .zip(other.mat.iter())
            .map(|(r, s)| r.iter().zip(s.iter()).map(|(a, b)| a + b).collect())
            .collect();
        GradedMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            shift: self.shift,
            mat,
        }
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.dom.as_ref(), other.dom.as_ref());
        assert_eq!(self.cod.as_ref(), other.cod.as_ref());
        assert_eq!(self.shift, other.shift, "sub: shift mismatch");
        let mat = self
            .mat
            .iter()
            .zip(other.mat.iter())
            .map(|(r, s)| r.iter().zip(s.iter()).map(|(a, b)| a - b).collect())
            .collect();
        GradedMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            shift: self.shift,
            mat,
        }
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        let mat = self
            .mat
            .iter()
            .map(|r| r.iter().map(|a| a * c).collect())
            .collect();
        GradedMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            shift: self.shift,
            mat,
        }
    }

    /// f (x) g on the tensor product spaces. Both shifts must be 0.
    pub fn tensor(f: &GradedMap, g: &GradedMap) -> GradedMap {
        assert_eq!(f.shift, 0, "tensor: left factor must have shift 0");
        assert_eq!(g.shift, 0, "tensor: right factor must have shift 0");
        let dom = GradedSpace::tensor(&f.dom, &g.dom);
        let cod = GradedSpace::tensor(&f.cod, &g.cod);
        let n = dom.modulus();
        let gd = g.dom.dim();
        let gc = g.cod.dim();
        let mut mat = vec![vec![Scalar::zero(n); dom.dim()]; cod.dim()];
        for (fi, frow) in f.mat.iter().enumerate() {
            for (fj, fc) in frow.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                for (gi, grow) in g.mat.iter().enumerate() {
                    for (gj, gc_) in grow.iter().enumerate() {
                        if gc_.is_zero() {
                            continue;
                        }
                        mat[fi * gc + gi][fj * gd + gj] = fc * gc_;
                    }
                }
            }
        }
        GradedMap {
            dom,
            cod,
            shift: 0,
            mat,
        }
    }

    /// First counterexample basis vector on which two maps differ.
    pub fn first_difference(&self, other: &GradedMap) -> Option<usize> {
        assert_eq!(self.dom.as_ref(), other.dom.as_ref());
        assert_eq!(self.cod.as_ref(), other.cod.as_ref());
        (0..self.dom.dim()).find(|&j| self.apply_basis(j) != other.apply_basis(j))
    }
}

/// The anyonic braiding psi: V (x) W -> W (x) V, psi(v (x) w) = q^(|v||w|) w (x) v.
pub fn braiding(v: &SpaceRef, w: &SpaceRef) -> GradedMap {
    assert_eq!(v.modulus(), w.modulus(), "braiding: modulus mismatch");
    let n = v.modulus();
    let dom = GradedSpace::tensor(v, w);
    let cod = GradedSpace::tensor(w, v);
    let mut mat = vec![vec![Scalar::zero(n); dom.dim()]; cod.dim()];
    for (i, bv) in v.basis().iter().enumerate() {
        for (j, bw) in w.basis().iter().enumerate() {
            let col = i * w.dim() + j;
            let row = j * v.dim() + i;
            mat[row][col] = Scalar::root_power(n, (bv.degree * bw.degree) % n);
        }
    }
    GradedMap {
        dom,
        cod,
        shift: 0,
        mat,
    }
}

/// Inverse braiding W (x) V -> V (x) W with psi_inv . psi = id.
pub fn braiding_inverse(v: &SpaceRef, w: &SpaceRef) -> GradedMap {
    assert_eq!(v.modulus(), w.modulus(), "braiding: modulus mismatch");
    let n = v.modulus();
    let dom = GradedSpace::tensor(w, v);
    let cod = GradedSpace::tensor(v, w);
    let mut mat = vec![vec![Scalar::zero(n); dom.dim()]; cod.dim()];
    for (i, bv) in v.basis().iter().enumerate() {
        for (j, bw) in w.basis().iter().enumerate() {
            let col = j * v.dim() + i;
            let row = i * w.dim() + j;
            let e = (bv.degree * bw.degree) % n;
            let inv_e = (n - e) % n;
            mat[row][col] = Scalar::root_power(n, inv_e);
        }
    }
    GradedMap {
        dom,
        cod,
        shift: 0,
        mat,
    }
}

/// A subspace in reduced row-echelon form. Two subspaces are equal iff their
/// echelon matrices are identical; every row is degree-homogeneous.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: SpaceRef,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {})",
            self.rows.len(),
            self.ambient.dim()
        )
    }
}

impl Subspace {
    /// Span of the given vectors.
    pub fn span(ambient: &SpaceRef, vectors: &[Vec<Scalar>]) -> Subspace {
        let mut s = Subspace {
            ambient: ambient.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        for v in vectors {
            s.insert(v.clone());
        }
        s.assert_graded();
        s
    }

    pub fn zero(ambient: &SpaceRef) -> Subspace {
        Subspace {
            ambient: ambient.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: &SpaceRef) -> Subspace {
        let vecs: Vec<_> = (0..ambient.dim()).map(|i| ambient.basis_vector(i)).collect();
        Subspace::span(ambient, &vecs)
    }

    fn assert_graded(&self) {
        for row in &self.rows {
            assert!(
                self.ambient.homogeneous_degree(row).is_some(),
                "echelon row of a graded subspace is not degree-homogeneous"
            );
        }
    }

    /// Reduce and insert one vector; returns true if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ambient.dim());
        self.reduce_in_place(&mut v);
        let pivot = match v.iter().position(|c| !c.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = v[pivot].inverse().expect("nonzero pivot");
        for c in v.iter_mut() {
            *c = &*c * &inv;
        }
        // clear the new pivot column from existing rows
        for row in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(v.iter()) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        let at = self
            .pivots
            .iter()
            .position(|&p| p > pivot)
            .unwrap_or(self.pivots.len());
        self.pivots.insert(at, pivot);
        self.rows.insert(at, v);
        true
    }

    fn reduce_in_place(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row.iter()) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
    }

    pub fn ambient(&self) -> &SpaceRef {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|c| c.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of v in the echelon basis, None if v is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (c, row) in coords.iter().zip(self.rows.iter()) {
            if !c.is_zero() {
                for (x, y) in w.iter_mut().zip(row.iter()) {
                    if !y.is_zero() {
                        *x -= &(c * y);
                    }
                }
            }
        }
        if w.iter().all(|c| c.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn from_coordinates(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.rows.len());
        let mut v = self.ambient.zero_vector();
        for (c, row) in coords.iter().zip(self.rows.iter()) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row.iter()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        v
    }

    /// The subspace as an abstract graded space plus its inclusion map.
    /// Basis names reuse the ambient name when an echelon row is a plain
    /// basis vector and are synthesized otherwise.
    pub fn as_space(&self, stem: &str) -> (SpaceRef, GradedMap) {
        let n = self.ambient.modulus();
        let mut basis = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            let deg = self
                .ambient
                .homogeneous_degree(row)
                .expect("graded subspace row");
            let single = row.iter().filter(|c| !c.is_zero()).count() == 1
                && row[self.pivots[k]].is_one();
            let name = if single {
                self.ambient.name(self.pivots[k]).to_string()
            } else {
                format!("{stem}{k}")
            };
            basis.push((name, deg));
        }
        let space = GradedSpace::new(n, basis).expect("subspace basis");
        let images = self.rows.clone();
        let incl = GradedMap::from_images(space.clone(), self.ambient.clone(), 0, images)
            .expect("inclusion is graded");
        (space, incl)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient.as_ref(), other.ambient.as_ref());
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Intersection by the Zassenhaus block trick.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient.as_ref(), other.ambient.as_ref());
        let n = self.ambient.modulus();
        let d = self.ambient.dim();
        // rows [v | v] for v in self, [w | 0] for w in other; echelon; rows with
        // zero left half have right half in the intersection
        let mut acc: Vec<Vec<Scalar>> = Vec::new();
        let mut push = |mut row: Vec<Scalar>| {
            // plain elimination on 2d columns
            for r in &acc {
                let p = r.iter().position(|c: &Scalar| !c.is_zero()).unwrap();
                if !row[p].is_zero() {
                    let f = row[p].clone();
                    for (x, y) in row.iter_mut().zip(r.iter()) {
                        if !y.is_zero() {
                            *x -= &(&f * y);
                        }
                    }
                }
            }
            if let Some(p) = row.iter().position(|c| !c.is_zero()) {
                let inv = row[p].inverse().unwrap();
                for c in row.iter_mut() {
                    *c = &*c * &inv;
                }
                let at = acc
                    .iter()
                    .position(|r| r.iter().position(|c| !c.is_zero()).unwrap() > p)
                    .unwrap_or(acc.len());
                acc.insert(at, row);
            }
        };
        for v in &self.rows {
            let mut row = v.clone();
            row.extend(v.iter().cloned());
            push(row);
        }
        for w in &other.rows {
            let mut row = w.clone();
            row.extend(vec![Scalar::zero(n); d]);
            push(row);
        }
        let mut out = Subspace::zero(&self.ambient);
        for r in &acc {
            if r[..d].iter().all(|c| c.is_zero()) {
                out.insert(r[d..].to_vec());
            }
        }
        out
    }

    /// Quotient of the ambient space by this subspace: the quotient space
    /// (basis = non-pivot ambient coordinates) and the projection map.
    pub fn quotient(&self, stem: &str) -> (SpaceRef, GradedMap) {
        let n = self.ambient.modulus();
        let free: Vec<usize> = (0..self.ambient.dim())
            .filter(|i| !self.pivots.contains(i))
            .collect();
        let basis: Vec<(String, u32)> = free
            .iter()
            .map(|&i| {
                (
                    format!("{stem}{}", self.ambient.name(i)),
                    self.ambient.degree(i),
                )
            })
            .collect();
        let q = GradedSpace::new(n, basis).expect("quotient basis");
        let mut mat = vec![vec![Scalar::zero(n); self.ambient.dim()]; free.len()];
        for j in 0..self.ambient.dim() {
            let mut v = self.ambient.basis_vector(j);
            self.reduce_in_place(&mut v);
            for (k, &i) in free.iter().enumerate() {
                mat[k][j] = v[i].clone();
            }
        }
        let proj =
            GradedMap::new(self.ambient.clone(), q.clone(), 0, mat).expect("projection is graded");
        (q, proj)
    }

    /// A section of the quotient projection: coset representative for each
    /// quotient basis vector (the corresponding free ambient coordinate).
    pub fn quotient_section(&self, quotient_space: &SpaceRef) -> GradedMap {
        let free: Vec<usize> = (0..self.ambient.dim())
            .filter(|i| !self.pivots.contains(i))
            .collect();
        assert_eq!(free.len(), quotient_space.dim());
        let images: Vec<Vec<Scalar>> = free.iter().map(|&i| self.ambient.basis_vector(i)).collect();
        GradedMap::from_images(quotient_space.clone(), self.ambient.clone(), 0, images)
            .expect("section is graded")
    }
}

/// Kernel of a graded map, as a canonical subspace of the domain.
pub fn kernel(f: &GradedMap) -> Subspace {
    kernel_of_stack(&[f.clone()])
}

/// Joint kernel of several maps out of the same domain.
pub fn kernel_of_stack(fs: &[GradedMap]) -> Subspace {
    assert!(!fs.is_empty());
    let dom = fs[0].dom().clone();
    for f in fs {
        assert_eq!(f.dom().as_ref(), dom.as_ref(), "joint kernel: domain mismatch");
    }
    let n = dom.modulus();
    let cols = dom.dim();
    // gather all rows, echelonize, then read off the nullspace
    let mut echelon: Vec<Vec<Scalar>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for f in fs {
        for row in f.matrix() {
            let mut v = row.clone();
            for (r, &p) in echelon.iter().zip(pivots.iter()) {
                if !v[p].is_zero() {
                    let c = v[p].clone();
                    for (x, y) in v.iter_mut().zip(r.iter()) {
                        if !y.is_zero() {
                            *x -= &(&c * y);
                        }
                    }
                }
            }
            if let Some(p) = v.iter().position(|c| !c.is_zero()) {
                let inv = v[p].inverse().unwrap();
                for c in v.iter_mut() {
                    *c = &*c * &inv;
                }
                for (r, _) in echelon.iter_mut().zip(pivots.iter()) {
                    if !r[p].is_zero() {
                        let c = r[p].clone();
                        for (x, y) in r.iter_mut().zip(v.iter()) {
                            if !y.is_zero() {
                                *x -= &(&c * y);
                            }
                        }
                    }
                }
                let at = pivots.iter().position(|&pp| pp > p).unwrap_or(pivots.len());
                pivots.insert(at, p);
                echelon.insert(at, v);
            }
        }
    }
    // free columns parametrize the kernel
    let mut out = Subspace::zero(&dom);
    for j in 0..cols {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = vec![Scalar::zero(n); cols];
        v[j] = Scalar::one(n);
        for (r, &p) in echelon.iter().zip(pivots.iter()) {
            if !r[j].is_zero() {
                v[p] = -&r[j];
            }
        }
        out.insert(v);
    }
    out.assert_graded();
    out
}

/// Image of a graded map, as a canonical subspace of the codomain.
pub fn image(f: &GradedMap) -> Subspace {
    let cols: Vec<Vec<Scalar>> = (0..f.dom().dim()).map(|j| f.apply_basis(j)).collect();
    Subspace::span(f.cod(), &cols)
}

/// Solve f(x) = y exactly; None when y is outside the image.
pub fn solve(f: &GradedMap, y: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(y.len(), f.cod().dim());
    let n = f.dom().modulus();
    let dcols = f.dom().dim();
    // echelonize [A | y] column-tracking
    let mut echelon: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for (i, row) in f.matrix().iter().enumerate() {
        let mut v = row.clone();
        let mut rhs = y[i].clone();
        for ((r, rr), &p) in echelon.iter().zip(pivots.iter()) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, yv) in v.iter_mut().zip(r.iter()) {
                    if !yv.is_zero() {
                        *x -= &(&c * yv);
                    }
                }
                rhs -= &(&c * rr);
            }
        }
        if let Some(p) = v.iter().position(|c| !c.is_zero()) {
            let inv = v[p].inverse().unwrap();
            for c in v.iter_mut() {
                *c = &*c * &inv;
            }
            rhs = &rhs * &inv;
            pivots.push(p);
            echelon.push((v, rhs));
        } else if !rhs.is_zero() {
            return None;
        }
    }
    // back-substitute with free variables set to zero
    let mut x = vec![Scalar::zero(n); dcols];
    for k in (0..echelon.len()).rev() {
        let (row, rhs) = &echelon[k];
        let p = pivots[k];
        let mut val = rhs.clone();
        for j in (p + 1)..dcols {
            if !row[j].is_zero() && !x[j].is_zero() {
                val -= &(&row[j] * &x[j]);
            }
        }
        x[p] = val;
    }
    // confirm (guards against inconsistent rows that eliminated to zero)
    if f.apply(&x) == y.to_vec() {
        Some(x)
    } else {
        None
    }
}

/// Exact inverse of a bijective graded map; None if not bijective.
pub fn invert(f: &GradedMap) -> Option<GradedMap> {
    if f.dom().dim() != f.cod().dim() {
        return None;
    }
    let mut images = Vec::with_capacity(f.cod().dim());
    for i in 0..f.cod().dim() {
        let e = f.cod().basis_vector(i);
        images.push(solve(f, &e)?);
    }
    let n = f.dom().modulus();
    let inv_shift = if f.shift() == 0 {
        0
    } else {
        n - f.shift()
    };
    GradedMap::from_images(f.cod().clone(), f.dom().clone(), inv_shift, images).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Scalar {
        Scalar::root_of_unity(3)
    }

    fn sample_spaces() -> (SpaceRef, SpaceRef) {
        let v = GradedSpace::new(3, vec![("1", 0u32), ("t", 1), ("t2", 2)]).unwrap();
        let w = GradedSpace::new(3, vec![("a", 1u32), ("b", 2)]).unwrap();
        (v, w)
    }

    #[test]
    fn tensor_dimensions_and_degrees() {
        let (v, w) = sample_spaces();
        let t = GradedSpace::tensor(&v, &w);
        assert_eq!(t.dim(), v.dim() * w.dim());
        assert_eq!(t.name(0), "1.a");
        assert_eq!(t.degree(0), 1);
        // theta (x) xi style degree sum: |t2| + |b| = 2 + 2 = 1 mod 3
        let i = t.index_of("t2.b").unwrap();
        assert_eq!(t.degree(i), 1);
    }

    #[test]
    fn degree_homogeneity_enforced() {
        let (v, _) = sample_spaces();
        let n = 3;
        let mut mat = vec![vec![Scalar::zero(n); 3]; 3];
        mat[0][1] = Scalar::one(n); // |1| = 0 vs |t| = 1: not homogeneous at shift 0
        let err = GradedMap::new(v.clone(), v.clone(), 0, mat).unwrap_err();
        assert!(matches!(err, GradedError::NotHomogeneous { .. }));
    }

    #[test]
    fn shifted_maps_compose_with_added_shift() {
        let (v, _) = sample_spaces();
        let n = 3;
        // shift 2 map (degree -1): t -> 1, t2 -> t
        let mut mat = vec![vec![Scalar::zero(n); 3]; 3];
        mat[0][1] = Scalar::one(n);
        mat[1][2] = Scalar::one(n);
        let beta = GradedMap::new(v.clone(), v.clone(), 2, mat).unwrap();
        let sq = beta.compose(&beta);
        assert_eq!(sq.shift(), 1);
        assert_eq!(sq.apply(&v.basis_vector(2))[0], Scalar::one(n));
    }

    #[test]
    fn braiding_on_basis_and_inverse() {
        let (v, w) = sample_spaces();
        let psi = braiding(&v, &w);
        // psi(t (x) a) = q^(1*1) a (x) t
        let vw = GradedSpace::tensor(&v, &w);
        let wv = GradedSpace::tensor(&w, &v);
        let col = vw.index_of("t.a").unwrap();
        let img = psi.apply(&vw.basis_vector(col));
        let row = wv.index_of("a.t").unwrap();
        assert_eq!(img[row], q());
        // degree-0 second factor braids by a plain flip
        let z = GradedSpace::new(3, vec![("z", 0u32)]).unwrap();
        let psi0 = braiding(&v, &z);
        for j in 0..psi0.dom().dim() {
            let img = psi0.apply(&psi0.dom().basis_vector(j));
            assert!(img.iter().any(|c| c.is_one()));
        }
        let inv = braiding_inverse(&v, &w);
        let round = inv.compose(&psi);
        assert_eq!(round, GradedMap::identity(&vw));
    }

    #[test]
    fn hexagon_identity() {
        // psi_{U (x) V, W} = (psi_{U,W} (x) id_V) . (id_U (x) psi_{V,W})
        let u = GradedSpace::new(3, vec![("u0", 0u32), ("u1", 1)]).unwrap();
        let (v, w) = sample_spaces();
        let uv = GradedSpace::tensor(&u, &v);
        let lhs = braiding(&uv, &w);
        let rhs = GradedMap::tensor(&braiding(&u, &w), &GradedMap::identity(&v))
            .compose(&GradedMap::tensor(&GradedMap::identity(&u), &braiding(&v, &w)));
        assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn interchange_law() {
        let (v, w) = sample_spaces();
        let f = braiding(&v, &w); // V(x)W -> W(x)V
        let g = GradedMap::identity(&v);
        let lhs = GradedMap::tensor(&GradedMap::identity(&f.cod().clone()), &g)
            .compose(&GradedMap::tensor(&f, &GradedMap::identity(&v)));
        let rhs = GradedMap::tensor(&f, &g);
        assert_eq!(lhs.matrix(), rhs.matrix());
    }

    fn random_map(rng: &mut ChaCha8Rng, dom: &SpaceRef, cod: &SpaceRef) -> GradedMap {
        let n = dom.modulus();
        let mut mat = vec![vec![Scalar::zero(n); dom.dim()]; cod.dim()];
        for (i, row) in mat.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                if cod.degree(i) == dom.degree(j) {
                    *c = Scalar::from_ratio(n, rng.gen_range(-3..=3), rng.gen_range(1..=3));
                }
            }
        }
        GradedMap::new(dom.clone(), cod.clone(), 0, mat).unwrap()
    }

    #[test]
    fn rank_nullity_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = GradedSpace::new(
            3,
            vec![("a", 0u32), ("b", 0), ("c", 1), ("d", 1), ("e", 2)],
        )
        .unwrap();
        let w = GradedSpace::new(3, vec![("x", 0u32), ("y", 1), ("z", 2)]).unwrap();
        for _ in 0..25 {
            let f = random_map(&mut rng, &v, &w);
            let k = kernel(&f);
            let im = image(&f);
            assert_eq!(k.dim() + im.dim(), v.dim());
            for row in k.rows() {
                assert!(f.apply(row).iter().all(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let (v, _) = sample_spaces();
        assert_eq!(kernel(&GradedMap::identity(&v)).dim(), 0);
    }

    #[test]
    fn subspace_canonical_equality_and_ops() {
        let (v, _) = sample_spaces();
        let n = 3;
        let a = Subspace::span(
            &v,
            &[v.basis_vector(1), {
                let mut x = v.basis_vector(1);
                x[1] = Scalar::from_integer(n, 2);
                x
            }],
        );
        let b = Subspace::span(&v, &[v.basis_vector(1)]);
        assert_eq!(a, b);
        let c = Subspace::span(&v, &[v.basis_vector(0), v.basis_vector(1)]);
        assert!(c.contains_subspace(&a));
        assert_eq!(a.intersect(&c), a);
        assert_eq!(a.sum(&c), c);
        let (qs, proj) = b.quotient("cls_");
        assert_eq!(qs.dim(), 2);
        assert!(proj.apply(&v.basis_vector(1)).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn solve_and_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (v, _) = sample_spaces();
        for _ in 0..10 {
            let f = random_map(&mut rng, &v, &v);
            if let Some(g) = invert(&f) {
                assert_eq!(g.compose(&f), GradedMap::identity(&v));
                assert_eq!(f.compose(&g), GradedMap::identity(&v));
            }
            let x = v.basis_vector(rng.gen_range(0..3));
            let y = f.apply(&x);
            let sol = solve(&f, &y).expect("y is in the image");
            assert_eq!(f.apply(&sol), y);
        }
    }

    #[test]
    fn quotient_projection_is_surjective_with_kernel_s() {
        let (v, _) = sample_spaces();
        let s = Subspace::span(&v, &[v.basis_vector(2)]);
        let (qs, proj) = s.quotient("cls_");
        assert_eq!(image(&proj).dim(), qs.dim());
        assert_eq!(kernel(&proj), s);
    }
}
