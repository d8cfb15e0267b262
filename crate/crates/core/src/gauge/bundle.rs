//! Bundle construction: the invariant subalgebra, the tensor product over it,
//! and the Galois map with its exact inverse.

use super::GaugeError;
use crate::algebra::{check_comodule_algebra, Algebra, CheckReport, Coaction, Hopf};
use crate::forms::{horizontal_subspaces, push_tensor2, Calculus};
use crate::graded::{braiding, invert, GradedMap, GradedSpace, SpaceRef, Subspace};
use crate::scalar::Scalar;
use std::fmt;
use std::sync::Arc;

/// A principal-bundle context: total space algebra, structure group,
/// coaction, invariant base, the quotient P (x)_M P, and the Galois maps.
pub struct Bundle {
    p: Arc<Algebra>,
    hopf: Arc<Hopf>,
    rho: Coaction,
    m_alg: Arc<Algebra>,
    m_incl: GradedMap,
    m_subspace: Subspace,
    quot_space: SpaceRef,
    quot_proj: GradedMap,
    quot_sect: GradedMap,
    chi_tilde: GradedMap,
    chi: GradedMap,
    chi_inv: Option<GradedMap>,
    rho2: GradedMap,
    adjoint: Coaction,
    p_calc: Calculus,
    m_calc: Calculus,
    horiz_both: Subspace,
    horiz_right: Subspace,
    omega1m_pushed: Vec<Vec<Scalar>>,
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bundle(P dim {}, B dim {}, M dim {})",
            self.p.dim(),
            self.hopf.dim(),
            self.m_alg.dim()
        )
    }
}

impl Bundle {
    /// Assemble the bundle data from a comodule-algebra coaction. The Galois
    /// map inverse is present exactly when the map has full rank.
    pub fn new(p: Arc<Algebra>, rho: Coaction) -> Result<Bundle, GaugeError> {
        assert_eq!(rho.carrier().as_ref(), p.space().as_ref());
        let comod = check_comodule_algebra(&p, &rho);
        if !comod.passed() {
            let e = comod.first_failure().unwrap();
            return Err(GaugeError::NotComoduleAlgebra(format!(
                "{} at {}",
                e.name,
                e.witness.clone().unwrap_or_default()
            )));
        }
        let hopf = rho.hopf().clone();
        let n = p.modulus();

        // invariants: kernel of rho - (id (x) unit)
        let trivial = Coaction::trivial(p.space(), &hopf);
        let diff = rho.map().sub(trivial.map());
        let m_subspace = crate::graded::kernel(&diff);
        let (m_space, m_incl) = m_subspace.as_space("m");
        let m_alg = Arc::new(subalgebra_structure(&p, &m_subspace, &m_space, &m_incl));

        // relations (p m) (x) p' - p (x) (m p') spanning the kernel of the
        // projection to P (x)_M P
        let pp = GradedSpace::tensor_power(p.space(), 2);
        let dp = p.dim();
        let mut relations = Subspace::zero(&pp);
        for m_row in m_subspace.rows() {
            for i in 0..dp {
                let pm = p.mul_vec(&p.space().basis_vector(i), m_row);
                for j in 0..dp {
                    let mp = p.mul_vec(m_row, &p.space().basis_vector(j));
                    let mut v = vec![Scalar::zero(n); dp * dp];
                    for (x, c) in pm.iter().enumerate() {
                        if !c.is_zero() {
                            v[x * dp + j] += c;
                        }
                    }
                    for (y, c) in mp.iter().enumerate() {
                        if !c.is_zero() {
                            v[i * dp + y] -= c;
                        }
                    }
                    relations.insert(v);
                }
            }
        }
        let (quot_space, quot_proj) = relations.quotient("cls_");
        let quot_sect = relations.quotient_section(&quot_space);

        // chi_tilde(x (x) y) = x y^(0) (x) y^(1)
        let pb = GradedSpace::tensor(p.space(), hopf.space());
        let db = hopf.dim();
        let mut images = Vec::with_capacity(dp * dp);
        for i in 0..dp {
            for j in 0..dp {
                let mut img = pb.zero_vector();
                for (k, l, c) in rho.terms(j) {
                    let prod = p.mul_basis(i, k);
                    for (x, pc) in prod.iter().enumerate() {
                        if !pc.is_zero() {
                            img[x * db + l] += &(&c * pc);
                        }
                    }
                }
                images.push(img);
            }
        }
        let chi_tilde = GradedMap::from_images(pp.clone(), pb.clone(), 0, images)
            .expect("galois map is graded");

        // comodule-algebra property makes chi_tilde descend to the quotient
        for row in relations.rows() {
            assert!(
                chi_tilde.apply(row).iter().all(|c| c.is_zero()),
                "galois map does not descend to the quotient"
            );
        }
        let chi = chi_tilde.compose(&quot_sect);
        let chi_inv = invert(&chi);

        // tensor-square coaction on P (x) P
        let rho2 = tensor_square_coaction(&p, &rho);
        let adjoint = crate::algebra::adjoint_coaction(&hopf)?;

        let p_calc = Calculus::new(p.clone());
        let m_calc = Calculus::new(m_alg.clone());
        let (horiz_both, horiz_right) = horizontal_subspaces(&p, &m_alg, &m_incl);
        let omega1m_pushed = push_tensor2(&m_incl, m_calc.omega(1).carrier().rows());

        Ok(Bundle {
            p,
            hopf,
            rho,
            m_alg,
            m_incl,
            m_subspace,
            quot_space,
            quot_proj,
            quot_sect,
            chi_tilde,
            chi,
            chi_inv,
            rho2,
            adjoint,
            p_calc,
            m_calc,
            horiz_both,
            horiz_right,
            omega1m_pushed,
        })
    }

    pub fn total(&self) -> &Arc<Algebra> {
        &self.p
    }

    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.hopf
    }

    pub fn coaction(&self) -> &Coaction {
        &self.rho
    }

    pub fn base(&self) -> &Arc<Algebra> {
        &self.m_alg
    }

    pub fn base_inclusion(&self) -> &GradedMap {
        &self.m_incl
    }

    pub fn base_subspace(&self) -> &Subspace {
        &self.m_subspace
    }

    pub fn quotient_space(&self) -> &SpaceRef {
        &self.quot_space
    }

    pub fn quotient_projection(&self) -> &GradedMap {
        &self.quot_proj
    }

    pub fn quotient_section(&self) -> &GradedMap {
        &self.quot_sect
    }

    pub fn chi_tilde(&self) -> &GradedMap {
        &self.chi_tilde
    }

    pub fn chi(&self) -> &GradedMap {
        &self.chi
    }

    pub fn chi_inv(&self) -> Option<&GradedMap> {
        self.chi_inv.as_ref()
    }

    /// Coaction on P (x) P through the braided tensor square.
    pub fn tensor_square_coaction(&self) -> &GradedMap {
        &self.rho2
    }

    pub fn adjoint(&self) -> &Coaction {
        &self.adjoint
    }

    pub fn total_calculus(&self) -> &Calculus {
        &self.p_calc
    }

    pub fn base_calculus(&self) -> &Calculus {
        &self.m_calc
    }

    /// P (Omega^1 M) P inside P (x) P.
    pub fn horizontal_two_sided(&self) -> &Subspace {
        &self.horiz_both
    }

    /// (Omega^1 M) P inside P (x) P.
    pub fn horizontal_right(&self) -> &Subspace {
        &self.horiz_right
    }

    /// Basis of Omega^1 M pushed into P (x) P along the base inclusion.
    pub fn omega1m_in_p(&self) -> &[Vec<Scalar>] {
        &self.omega1m_pushed
    }

    /// Push an Omega^1 M carrier-coordinate vector into P (x) P.
    pub fn push_base_form(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let n = self.p.modulus();
        let mut out = vec![Scalar::zero(n); self.p.dim() * self.p.dim()];
        for (c, row) in coords.iter().zip(self.omega1m_pushed.iter()) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row.iter()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        out
    }

    /// Express a P (x) P vector as an Omega^1 M carrier-coordinate vector;
    /// None when it lies outside the pushed subspace.
    pub fn pull_base_form(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let unknowns = self.omega1m_pushed.len();
        let rows: Vec<Vec<Scalar>> = (0..v.len())
            .map(|k| {
                (0..unknowns)
                    .map(|j| self.omega1m_pushed[j][k].clone())
                    .collect()
            })
            .collect();
        let coords = crate::algebra::solve_dense(&rows, v)?;
        if self.push_base_form(&coords) == v.to_vec() {
            Some(coords)
        } else {
            None
        }
    }
}

/// Extract the algebra structure on an invariant subspace; closure under the
/// ambient product is asserted.
fn subalgebra_structure(
    p: &Algebra,
    subspace: &Subspace,
    space: &SpaceRef,
    incl: &GradedMap,
) -> Algebra {
    let n = p.modulus();
    let d = space.dim();
    let sq = GradedSpace::tensor(space, space);
    let mut mat = vec![vec![Scalar::zero(n); d * d]; d];
    for i in 0..d {
        for j in 0..d {
            let prod = p.mul_vec(&incl.apply_basis(i), &incl.apply_basis(j));
            let coords = subspace
                .coordinates(&prod)
                .expect("invariant subalgebra is closed under the product");
            for (k, c) in coords.into_iter().enumerate() {
                mat[k][i * d + j] = c;
            }
        }
    }
    let mult = GradedMap::new(sq, space.clone(), 0, mat).expect("restricted product is graded");
    let unit = subspace
        .coordinates(p.unit())
        .expect("unit is invariant");
    Algebra::new(space.clone(), unit, mult)
}

/// The braided tensor-square coaction P (x) P -> P (x) P (x) B.
pub(crate) fn tensor_square_coaction(p: &Algebra, rho: &Coaction) -> GradedMap {
    let hopf = rho.hopf();
    let b_alg = hopf.algebra();
    let dp = p.dim();
    let db = hopf.dim();
    let psi = braiding(hopf.space(), p.space());
    let pp = GradedSpace::tensor_power(p.space(), 2);
    let cod = GradedSpace::tensor(&pp, hopf.space());
    let mut images = Vec::with_capacity(dp * dp);
    for x in 0..dp {
        for y in 0..dp {
            let mut img = cod.zero_vector();
            for (x0, x1, cx) in rho.terms(x) {
                for (y0, y1, cy) in rho.terms(y) {
                    // braid x1 past y0, then multiply the two group legs
                    let braided = psi.apply_basis(x1 * dp + y0);
                    for (bi, cb) in braided.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let (yy, xx) = (bi / db, bi % db);
                        let prod = b_alg.mul_basis(xx, y1);
                        let coeff = &(&cx * &cy) * cb;
                        for (t, pc) in prod.iter().enumerate() {
                            if !pc.is_zero() {
                                img[(x0 * dp + yy) * db + t] += &(&coeff * pc);
                            }
                        }
                    }
                }
            }
            images.push(img);
        }
    }
    GradedMap::from_images(pp, cod, 0, images).expect("tensor coaction is graded")
}

/// Report on the principal-bundle conditions: comodule algebra, descent of
/// the Galois map, and its bijectivity.
pub fn verify_principal(bundle: &Bundle) -> CheckReport {
    let mut report = CheckReport::new("principal bundle");
    for e in check_comodule_algebra(bundle.total(), bundle.coaction()).entries {
        report.entries.push(e);
    }
    report.push("invariant subalgebra closed", None);
    report.push("galois map descends", None);
    let witness = if bundle.chi_inv.is_some() {
        None
    } else {
        Some(format!(
            "rank {} of {}",
            crate::graded::image(&bundle.chi).dim(),
            bundle.quot_space.dim().max(bundle.chi.cod().dim())
        ))
    };
    report.push("galois map bijective", witness);
    report
}
