//! Trivializations and trivial bundles: the tensor product bundle, the
//! object isomorphism M (x) B = P, and the translation-style lift of the
//! Galois inverse.

use super::bundle::Bundle;
use super::GaugeError;
use crate::algebra::{
    braided_tensor_algebra, convolution, convolution_unit, Algebra, CheckReport, Coaction,
    Hopf,
};
use crate::algebra::difference_witness;
use crate::graded::{GradedMap, GradedSpace};
use crate::scalar::Scalar;
use std::sync::Arc;

/// A trivialization of a bundle: an equivariant, convolution-invertible,
/// unit-preserving morphism from the structure group to the total space.
#[derive(Clone, Debug)]
pub struct Trivialization {
    phi: GradedMap,
    phi_inv: GradedMap,
}

impl Trivialization {
    pub fn new(phi: GradedMap, phi_inv: GradedMap) -> Trivialization {
        assert_eq!(phi.dom().as_ref(), phi_inv.dom().as_ref());
        assert_eq!(phi.cod().as_ref(), phi_inv.cod().as_ref());
        Trivialization { phi, phi_inv }
    }

    pub fn phi(&self) -> &GradedMap {
        &self.phi
    }

    pub fn phi_inv(&self) -> &GradedMap {
        &self.phi_inv
    }

    /// Equivariance, unit preservation, and the two-sided convolution
    /// inverse property.
    pub fn check(&self, bundle: &Bundle) -> CheckReport {
        let mut report = CheckReport::new("trivialization");
        let hopf = bundle.hopf();
        let p = bundle.total();
        let witness = if self.phi.apply(hopf.algebra().unit()) == p.unit().to_vec() {
            None
        } else {
            Some("1".to_string())
        };
        report.push("unit preserved", witness);
        let lhs = bundle.coaction().map().compose(&self.phi);
        let rhs = GradedMap::tensor(&self.phi, &GradedMap::identity(hopf.space()))
            .compose(hopf.comul());
        report.push("equivariance", difference_witness(&lhs, &rhs));
        let unit = convolution_unit(hopf, p);
        let left = convolution(hopf, p, &self.phi, &self.phi_inv);
        report.push("right inverse", difference_witness(&left, &unit));
        let right = convolution(hopf, p, &self.phi_inv, &self.phi);
        report.push("left inverse", difference_witness(&right, &unit));
        report
    }
}

/// The braided tensor product bundle on M (x) B with the coaction
/// id (x) comul, trivialized by inclusion of the group factor.
pub fn trivial_bundle(
    m: &Algebra,
    hopf: &Arc<Hopf>,
) -> Result<(Bundle, Trivialization), GaugeError> {
    let p = Arc::new(braided_tensor_algebra(m, hopf.algebra()));
    let rho_map = GradedMap::tensor(&GradedMap::identity(m.space()), hopf.comul());
    let rho = Coaction::new(p.space().clone(), hopf.clone(), rho_map);
    let bundle = Bundle::new(p.clone(), rho)?;
    let db = hopf.dim();
    let n = hopf.modulus();
    let mut phi_images = Vec::with_capacity(db);
    let mut phi_inv_images = Vec::with_capacity(db);
    for b in 0..db {
        let mut img = p.space().zero_vector();
        for (i, c) in m.unit().iter().enumerate() {
            if !c.is_zero() {
                img[i * db + b] = c.clone();
            }
        }
        phi_images.push(img);
        let s = hopf.antipode().apply_basis(b);
        let mut img = p.space().zero_vector();
        for (i, c) in m.unit().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, sc) in s.iter().enumerate() {
                if !sc.is_zero() {
                    img[i * db + j] += &(c * sc);
                }
            }
        }
        phi_inv_images.push(img);
        let _ = n;
    }
    let phi =
        GradedMap::from_images(hopf.space().clone(), p.space().clone(), 0, phi_images).unwrap();
    let phi_inv =
        GradedMap::from_images(hopf.space().clone(), p.space().clone(), 0, phi_inv_images)
            .unwrap();
    let triv = Trivialization::new(phi, phi_inv);
    let report = triv.check(&bundle);
    if !report.passed() {
        let e = report.first_failure().unwrap();
        return Err(GaugeError::Validation(format!(
            "trivialization {} at {}",
            e.name,
            e.witness.clone().unwrap_or_default()
        )));
    }
    Ok((bundle, triv))
}

/// Build a bundle from trivialization data and return the object isomorphism
/// M (x) B = P together with its inverse. All round-trip identities are
/// validated; a failure aborts naming the identity.
pub fn bundle_from_trivialization(
    p: Arc<Algebra>,
    rho: Coaction,
    triv: Trivialization,
) -> Result<(Bundle, Trivialization, GradedMap, GradedMap), GaugeError> {
    let bundle = Bundle::new(p.clone(), rho)?;
    let report = triv.check(&bundle);
    if !report.passed() {
        let e = report.first_failure().unwrap();
        return Err(GaugeError::Validation(format!(
            "trivialization {} at {}",
            e.name,
            e.witness.clone().unwrap_or_default()
        )));
    }
    let hopf = bundle.hopf().clone();
    let m_space = bundle.base().space().clone();
    let mb = GradedSpace::tensor(&m_space, hopf.space());
    let db = hopf.dim();
    let n = p.modulus();

    // theta(m (x) b) = incl(m) phi(b)
    let mut images = Vec::with_capacity(mb.dim());
    for i in 0..m_space.dim() {
        let mi = bundle.base_inclusion().apply_basis(i);
        for b in 0..db {
            images.push(p.mul_vec(&mi, &triv.phi().apply_basis(b)));
        }
    }
    let theta = GradedMap::from_images(mb.clone(), p.space().clone(), 0, images).unwrap();

    // theta_inv(p) = p^(0) phi_inv(p^(1)_(1)) (x) p^(1)_(2), corestricted to M (x) B
    let mut images = Vec::with_capacity(p.dim());
    for j in 0..p.dim() {
        let mut acc_pb = vec![Scalar::zero(n); p.dim() * db];
        for (p0, p1, c) in bundle.coaction().terms(j) {
            for (l, r, cc) in hopf.comul_terms(p1) {
                let prod = p.mul_vec(&p.space().basis_vector(p0), &triv.phi_inv().apply_basis(l));
                let coeff = &c * &cc;
                for (x, pc) in prod.iter().enumerate() {
                    if !pc.is_zero() {
                        acc_pb[x * db + r] += &(&coeff * pc);
                    }
                }
            }
        }
        // express the P legs in M coordinates
        let mut img = mb.zero_vector();
        for r in 0..db {
            let slice: Vec<Scalar> = (0..p.dim()).map(|x| acc_pb[x * db + r].clone()).collect();
            let coords = bundle.base_subspace().coordinates(&slice).ok_or_else(|| {
                GaugeError::Validation("trivialization inverse lands in M (x) B".to_string())
            })?;
            for (k, c) in coords.into_iter().enumerate() {
                img[k * db + r] = c;
            }
        }
        images.push(img);
    }
    let theta_inv = GradedMap::from_images(p.space().clone(), mb, 0, images).unwrap();

    let round = theta.compose(&theta_inv);
    if round != GradedMap::identity(p.space()) {
        return Err(GaugeError::Validation(
            "theta . theta_inv = id on P".to_string(),
        ));
    }
    let round = theta_inv.compose(&theta);
    if round != GradedMap::identity(theta_inv.cod()) {
        return Err(GaugeError::Validation(
            "theta_inv . theta = id on M (x) B".to_string(),
        ));
    }
    let chi = bundle.chi();
    let chi_inv = bundle
        .chi_inv()
        .ok_or_else(|| GaugeError::NotPrincipal("galois map has no inverse".to_string()))?;
    // the class of the translation lift must realize the Galois inverse
    let lift = translation_lift(&bundle, &triv);
    let lift_class = bundle.quotient_projection().compose(&lift);
    if chi.compose(&lift_class) != GradedMap::identity(chi.cod()) {
        return Err(GaugeError::Validation(
            "chi . chi_inv = id on P (x) B".to_string(),
        ));
    }
    if &lift_class != chi_inv {
        return Err(GaugeError::Validation(
            "translation lift represents the galois inverse".to_string(),
        ));
    }
    if chi_inv.compose(chi) != GradedMap::identity(bundle.quotient_space()) {
        return Err(GaugeError::Validation(
            "chi_inv . chi = id on the quotient".to_string(),
        ));
    }
    Ok((bundle, triv, theta, theta_inv))
}

/// The translation-style lift P (x) B -> P (x) P of the Galois inverse:
/// p (x) b -> p phi_inv(b_(1)) (x) phi(b_(2)). Its class in the quotient is
/// the Galois inverse.
pub fn translation_lift(bundle: &Bundle, triv: &Trivialization) -> GradedMap {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let db = hopf.dim();
    let dp = p.dim();
    let n = p.modulus();
    let pb = GradedSpace::tensor(p.space(), hopf.space());
    let pp = GradedSpace::tensor_power(p.space(), 2);
    let mut images = Vec::with_capacity(pb.dim());
    for i in 0..dp {
        for b in 0..db {
            let mut img = vec![Scalar::zero(n); dp * dp];
            for (l, r, c) in hopf.comul_terms(b) {
                let left = p.mul_vec(&p.space().basis_vector(i), &triv.phi_inv().apply_basis(l));
                let right = triv.phi().apply_basis(r);
                for (x, lc) in left.iter().enumerate() {
                    if lc.is_zero() {
                        continue;
                    }
                    for (y, rc) in right.iter().enumerate() {
                        if !rc.is_zero() {
                            img[x * dp + y] += &(&(&c * lc) * rc);
                        }
                    }
                }
            }
            images.push(img);
        }
    }
    GradedMap::from_images(pb, pp, 0, images).expect("translation lift is graded")
}
