//! Universal differential forms on an algebra P: Omega^n(P) realized as the
//! joint kernel of the adjacent multiplications inside the (n+1)-fold tensor
//! power, the differential d as the alternating sum of unit insertions, the
//! wedge product by junction multiplication, and the P-bimodule actions.
//!
//! Forms carry coordinates over the canonical echelon basis of their carrier;
//! ambient helpers work on raw tensor-power vectors so that large degrees can
//! be handled without materializing a carrier.

use crate::algebra::Algebra;
use crate::graded::{kernel_of_stack, GradedMap, GradedSpace, SpaceRef, Subspace};
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// Multi-index helpers for P^(x)k with left-factor-major ordering.
pub fn unrank(mut idx: usize, k: usize, dim: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in (0..k).rev() {
        out[slot] = idx % dim;
        idx /= dim;
    }
    out
}

pub fn rank(indices: &[usize], dim: usize) -> usize {
    indices.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Multiply tensor slots (slot, slot+1) of a vector in P^(x)k.
pub fn slot_mult(alg: &Algebra, k: usize, slot: usize, v: &[Scalar]) -> Vec<Scalar> {
    assert!(slot + 1 < k);
    let d = alg.dim();
    let n = alg.modulus();
    assert_eq!(v.len(), d.pow(k as u32));
    let mut out = vec![Scalar::zero(n); d.pow((k - 1) as u32)];
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let factors = unrank(idx, k, d);
        let prod = alg.mul_basis(factors[slot], factors[slot + 1]);
        for (t, pc) in prod.iter().enumerate() {
            if pc.is_zero() {
                continue;
            }
            let mut nf: Vec<usize> = Vec::with_capacity(k - 1);
            nf.extend_from_slice(&factors[..slot]);
            nf.push(t);
            nf.extend_from_slice(&factors[slot + 2..]);
            out[rank(&nf, d)] += &(c * pc);
        }
    }
    out
}

/// Insert the algebra unit as a new tensor slot at the given position.
pub fn insert_unit(alg: &Algebra, k: usize, at: usize, v: &[Scalar]) -> Vec<Scalar> {
    assert!(at <= k);
    let d = alg.dim();
    let n = alg.modulus();
    assert_eq!(v.len(), d.pow(k as u32));
    let mut out = vec![Scalar::zero(n); d.pow((k + 1) as u32)];
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let factors = unrank(idx, k, d);
        for (u, uc) in alg.unit().iter().enumerate() {
            if uc.is_zero() {
                continue;
            }
            let mut nf: Vec<usize> = Vec::with_capacity(k + 1);
            nf.extend_from_slice(&factors[..at]);
            nf.push(u);
            nf.extend_from_slice(&factors[at..]);
            out[rank(&nf, d)] += &(c * uc);
        }
    }
    out
}

/// Membership in Omega^degree: all adjacent multiplications vanish.
pub fn is_form(alg: &Algebra, degree: usize, v: &[Scalar]) -> bool {
    for slot in 0..degree {
        if slot_mult(alg, degree + 1, slot, v).iter().any(|c| !c.is_zero()) {
            return false;
        }
    }
    true
}

/// d on a degree-n ambient vector: the signed sum of unit insertions.
pub fn d_ambient(alg: &Algebra, degree: usize, v: &[Scalar]) -> Vec<Scalar> {
    let k = degree + 1;
    let d = alg.dim();
    let n = alg.modulus();
    let mut out = vec![Scalar::zero(n); d.pow((k + 1) as u32)];
    let mut sign = true;
    for at in 0..=k {
        let ins = insert_unit(alg, k, at, v);
        if sign {
            for (x, y) in out.iter_mut().zip(ins.iter()) {
                *x += y;
            }
        } else {
            for (x, y) in out.iter_mut().zip(ins.iter()) {
                *x -= y;
            }
        }
        sign = !sign;
    }
    out
}

/// Wedge of ambient vectors: multiply the junction slots.
pub fn wedge_ambient(
    alg: &Algebra,
    adeg: usize,
    a: &[Scalar],
    bdeg: usize,
    b: &[Scalar],
) -> Vec<Scalar> {
    let d = alg.dim();
    let n = alg.modulus();
    let ka = adeg + 1;
    let kb = bdeg + 1;
    assert_eq!(a.len(), d.pow(ka as u32));
    assert_eq!(b.len(), d.pow(kb as u32));
    let mut out = vec![Scalar::zero(n); d.pow((ka + kb - 1) as u32)];
    for (ia, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let fa = unrank(ia, ka, d);
        for (ib, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let fb = unrank(ib, kb, d);
            let prod = alg.mul_basis(fa[ka - 1], fb[0]);
            let coeff = ca * cb;
            for (t, pc) in prod.iter().enumerate() {
                if pc.is_zero() {
                    continue;
                }
                let mut nf: Vec<usize> = Vec::with_capacity(ka + kb - 1);
                nf.extend_from_slice(&fa[..ka - 1]);
                nf.push(t);
                nf.extend_from_slice(&fb[1..]);
                out[rank(&nf, d)] += &(&coeff * pc);
            }
        }
    }
    out
}

/// Left or right multiplication of a form by an algebra element.
pub fn act_ambient(
    alg: &Algebra,
    degree: usize,
    p: &[Scalar],
    v: &[Scalar],
    left: bool,
) -> Vec<Scalar> {
    if left {
        wedge_ambient(alg, 0, p, degree, v)
    } else {
        wedge_ambient(alg, degree, v, 0, p)
    }
}

/// Omega^n(P) with its canonical carrier inside P^(x)(n+1).
pub struct FormSpace {
    degree: usize,
    ambient: SpaceRef,
    carrier: Subspace,
}

impl fmt::Debug for FormSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormSpace(degree {}, dim {})", self.degree, self.dim())
    }
}

impl PartialEq for FormSpace {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.ambient == other.ambient
            && self.carrier == other.carrier
    }
}

impl Eq for FormSpace {}

impl FormSpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient(&self) -> &SpaceRef {
        &self.ambient
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }
}

/// An element of Omega^n(P), stored in carrier coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    space: Arc<FormSpace>,
    coords: Vec<Scalar>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(degree {}, {:?})", self.space.degree, self.coords)
    }
}

impl Form {
    pub fn space(&self) -> &Arc<FormSpace> {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.space.degree
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn ambient_vector(&self) -> Vec<Scalar> {
        self.space.carrier.from_coordinates(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Form) -> Form {
        assert!(Arc::ptr_eq(&self.space, &other.space));
        Form {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        assert!(Arc::ptr_eq(&self.space, &other.space));
        Form {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        Form {
            space: self.space.clone(),
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }
}

/// The tower of form spaces over one algebra, cached per degree.
#[derive(Clone)]
pub struct Calculus {
    alg: Arc<Algebra>,
    cache: Arc<Mutex<HashMap<usize, Arc<FormSpace>>>>,
}

impl fmt::Debug for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Calculus(dim {})", self.alg.dim())
    }
}

impl Calculus {
    pub fn new(alg: Arc<Algebra>) -> Calculus {
        Calculus {
            alg,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    /// Omega^n as a canonical subspace; insert-once cached per degree.
    pub fn omega(&self, degree: usize) -> Arc<FormSpace> {
        if let Some(fs) = self.cache.lock().unwrap().get(&degree) {
            return fs.clone();
        }
        let ambient = GradedSpace::tensor_power(self.alg.space(), degree + 1);
        let carrier = if degree == 0 {
            Subspace::full(&ambient)
        } else {
            let mut maps = Vec::with_capacity(degree);
            for slot in 0..degree {
                maps.push(self.adjacent_mult_map(degree + 1, slot, &ambient));
            }
            kernel_of_stack(&maps)
        };
        let fs = Arc::new(FormSpace {
            degree,
            ambient,
            carrier,
        });
        self.cache
            .lock()
            .unwrap()
            .entry(degree)
            .or_insert(fs.clone());
        fs
    }

    fn adjacent_mult_map(&self, k: usize, slot: usize, ambient: &SpaceRef) -> GradedMap {
        let cod = GradedSpace::tensor_power(self.alg.space(), k - 1);
        let images: Vec<Vec<Scalar>> = (0..ambient.dim())
            .map(|idx| slot_mult(&self.alg, k, slot, &ambient.basis_vector(idx)))
            .collect();
        GradedMap::from_images(ambient.clone(), cod, 0, images).expect("multiplication is graded")
    }

    /// Wrap an ambient vector, asserting joint-kernel membership.
    pub fn form_from_ambient(&self, degree: usize, v: &[Scalar]) -> Form {
        let space = self.omega(degree);
        let coords = space
            .carrier
            .coordinates(v)
            .expect("vector lies outside the form space");
        Form { space, coords }
    }

    pub fn zero_form(&self, degree: usize) -> Form {
        let space = self.omega(degree);
        let coords = vec![Scalar::zero(self.alg.modulus()); space.dim()];
        Form { space, coords }
    }

    /// The unit 1 as a 0-form.
    pub fn unit_form(&self) -> Form {
        self.form_from_ambient(0, &self.alg.unit().to_vec())
    }

    /// Exterior differential; the image is asserted to lie in the next
    /// joint kernel.
    pub fn d(&self, u: &Form) -> Form {
        let v = d_ambient(&self.alg, u.degree(), &u.ambient_vector());
        self.form_from_ambient(u.degree() + 1, &v)
    }

    pub fn wedge(&self, u: &Form, v: &Form) -> Form {
        let w = wedge_ambient(
            &self.alg,
            u.degree(),
            &u.ambient_vector(),
            v.degree(),
            &v.ambient_vector(),
        );
        self.form_from_ambient(u.degree() + v.degree(), &w)
    }

    /// Left or right module action of an algebra element.
    pub fn act(&self, p: &[Scalar], u: &Form, left: bool) -> Form {
        let w = act_ambient(&self.alg, u.degree(), p, &u.ambient_vector(), left);
        self.form_from_ambient(u.degree(), &w)
    }

    /// d of a 0-degree element given by algebra coordinates.
    pub fn d_of_element(&self, p: &[Scalar]) -> Form {
        let v = d_ambient(&self.alg, 0, p);
        self.form_from_ambient(1, &v)
    }
}

/// Push a subspace of M (x) M through an inclusion M -> P into P (x) P.
pub fn push_tensor2(incl: &GradedMap, rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let dm = incl.dom().dim();
    let dp = incl.cod().dim();
    let n = incl.dom().modulus();
    rows.iter()
        .map(|row| {
            let mut out = vec![Scalar::zero(n); dp * dp];
            for (idx, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, b) = (idx / dm, idx % dm);
                let ia = incl.apply_basis(a);
                let ib = incl.apply_basis(b);
                for (x, cx) in ia.iter().enumerate() {
                    if cx.is_zero() {
                        continue;
                    }
                    for (y, cy) in ib.iter().enumerate() {
                        if cy.is_zero() {
                            continue;
                        }
                        out[x * dp + y] += &(&(c * cx) * cy);
                    }
                }
            }
            out
        })
        .collect()
}

/// The horizontal subspaces (Omega^1 M) P inside P (Omega^1 M) P inside
/// Omega^1 P, for a subalgebra M of P given by its inclusion.
pub fn horizontal_subspaces(
    p: &Algebra,
    m: &Algebra,
    incl: &GradedMap,
) -> (Subspace, Subspace) {
    let m_calc = Calculus::new(Arc::new(m.clone()));
    let omega1m = m_calc.omega(1);
    let pushed = push_tensor2(incl, omega1m.carrier().rows());
    let pp = GradedSpace::tensor_power(p.space(), 2);
    // (Omega^1 M) P: right-multiply generators by a basis of P
    let mut right = Subspace::zero(&pp);
    for u in &pushed {
        for j in 0..p.dim() {
            let v = act_ambient(p, 1, &p.space().basis_vector(j), u, false);
            right.insert(v);
        }
    }
    // P (Omega^1 M) P = P . ((Omega^1 M) P)
    let mut both = Subspace::zero(&pp);
    let right_rows: Vec<Vec<Scalar>> = right.rows().to_vec();
    for u in &right_rows {
        for i in 0..p.dim() {
            let v = act_ambient(p, 1, &p.space().basis_vector(i), u, true);
            both.insert(v);
        }
    }
    (both, right)
}
