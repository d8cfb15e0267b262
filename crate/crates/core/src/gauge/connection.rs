//! Connections on principal bundles and their equivalent projections, the
//! strongness condition, and the correspondence with gauge fields on a
//! trivial bundle.

use super::bundle::Bundle;
use super::trivial::Trivialization;
use super::GaugeError;
use crate::algebra::{CheckReport, Hopf};
use crate::forms::{act_ambient, d_ambient, wedge_ambient, Calculus, Form};
use crate::graded::{GradedMap, GradedSpace, Subspace};
use crate::scalar::Scalar;
use std::fmt;

/// A gauge field (local connection): one base 1-form per structure-group
/// basis vector, vanishing at the unit and degree-homogeneous.
#[derive(Clone, PartialEq, Eq)]
pub struct GaugeField {
    values: Vec<Form>,
}

impl fmt::Debug for GaugeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaugeField({} components)", self.values.len())
    }
}

impl GaugeField {
    pub fn new(hopf: &Hopf, m_calc: &Calculus, values: Vec<Form>) -> GaugeField {
        assert_eq!(values.len(), hopf.dim());
        let m = m_calc.algebra().space();
        for (i, v) in values.iter().enumerate() {
            assert_eq!(v.degree(), 1);
            let amb = v.ambient_vector();
            if let Some(deg) = v.space().ambient().homogeneous_degree(&amb) {
                assert_eq!(
                    deg,
                    hopf.space().degree(i),
                    "gauge field component is not degree-matched"
                );
            }
            let _ = m;
        }
        // vanishing at the unit of B
        let n = hopf.modulus();
        let mut at_unit = values[0].scale(&Scalar::zero(n));
        for (i, c) in hopf.algebra().unit().iter().enumerate() {
            if !c.is_zero() {
                at_unit = at_unit.add(&values[i].scale(c));
            }
        }
        assert!(at_unit.is_zero(), "gauge field must vanish at the unit");
        GaugeField { values }
    }

    pub fn zero(hopf: &Hopf, m_calc: &Calculus) -> GaugeField {
        let values = (0..hopf.dim()).map(|_| m_calc.zero_form(1)).collect();
        GaugeField { values }
    }

    pub fn values(&self) -> &[Form] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Form {
        &self.values[i]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// A connection form: one total-space 1-form (ambient coordinates in
/// P (x) P) per structure-group basis vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Connection {
    values: Vec<Vec<Scalar>>,
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Connection({} components)", self.values.len())
    }
}

impl Connection {
    pub fn from_ambient_values(bundle: &Bundle, values: Vec<Vec<Scalar>>) -> Connection {
        assert_eq!(values.len(), bundle.hopf().dim());
        let omega1 = bundle.total_calculus().omega(1);
        for v in &values {
            assert!(
                omega1.carrier().contains(v),
                "connection component lies outside Omega^1 P"
            );
        }
        Connection { values }
    }

    pub fn values(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[Scalar] {
        &self.values[i]
    }

    pub fn apply(&self, b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(b[0].order()); self.values[0].len()];
        for (c, v) in b.iter().zip(self.values.iter()) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(v.iter()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Connection) -> Connection {
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
            .collect();
        Connection { values }
    }

    pub fn sub(&self, other: &Connection) -> Connection {
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| x - y).collect())
            .collect();
        Connection { values }
    }
}

/// Convolution of two form-valued morphisms out of B through the coproduct,
/// wedging the values.
pub(crate) fn conv_forms(
    hopf: &Hopf,
    alg: &crate::algebra::Algebra,
    fdeg: usize,
    f: &[Vec<Scalar>],
    gdeg: usize,
    g: &[Vec<Scalar>],
) -> Vec<Vec<Scalar>> {
    let n = alg.modulus();
    let out_len = alg.dim().pow((fdeg + gdeg + 1) as u32);
    (0..hopf.dim())
        .map(|i| {
            let mut acc = vec![Scalar::zero(n); out_len];
            for (l, r, c) in hopf.comul_terms(i) {
                let w = wedge_ambient(alg, fdeg, &f[l], gdeg, &g[r]);
                for (x, y) in acc.iter_mut().zip(w.iter()) {
                    if !y.is_zero() {
                        *x += &(&c * y);
                    }
                }
            }
            acc
        })
        .collect()
}

/// The trivial connection induced by a trivialization.
pub fn trivial_connection(bundle: &Bundle, triv: &Trivialization) -> Connection {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let phi: Vec<Vec<Scalar>> = (0..hopf.dim()).map(|b| triv.phi().apply_basis(b)).collect();
    let phi_inv: Vec<Vec<Scalar>> = (0..hopf.dim())
        .map(|b| triv.phi_inv().apply_basis(b))
        .collect();
    let d_phi: Vec<Vec<Scalar>> = phi.iter().map(|v| d_ambient(p, 0, v)).collect();
    let values = conv_forms(hopf, p, 0, &phi_inv, 1, &d_phi);
    Connection::from_ambient_values(bundle, values)
}

/// The connection induced by a gauge field on a trivial bundle:
/// phi_inv * d phi + phi_inv * A * phi.
pub fn connection_from_field(
    bundle: &Bundle,
    triv: &Trivialization,
    field: &GaugeField,
) -> Connection {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let base = trivial_connection(bundle, triv);
    let phi: Vec<Vec<Scalar>> = (0..hopf.dim()).map(|b| triv.phi().apply_basis(b)).collect();
    let phi_inv: Vec<Vec<Scalar>> = (0..hopf.dim())
        .map(|b| triv.phi_inv().apply_basis(b))
        .collect();
    let a_in_p: Vec<Vec<Scalar>> = field
        .values()
        .iter()
        .map(|form| bundle.push_base_form(form.coords()))
        .collect();
    let inner = conv_forms(hopf, p, 0, &phi_inv, 1, &a_in_p);
    let dressed = conv_forms(hopf, p, 1, &inner, 0, &phi);
    let dressed = Connection::from_ambient_values(bundle, dressed);
    base.add(&dressed)
}

/// Recover the gauge field of a strong connection: A = phi * alpha * phi_inv
/// with alpha the difference from the trivial connection. A connection whose
/// difference does not land in the base forms is rejected.
pub fn field_from_connection(
    bundle: &Bundle,
    triv: &Trivialization,
    omega: &Connection,
) -> Result<GaugeField, GaugeError> {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let alpha = omega.sub(&trivial_connection(bundle, triv));
    let phi: Vec<Vec<Scalar>> = (0..hopf.dim()).map(|b| triv.phi().apply_basis(b)).collect();
    let phi_inv: Vec<Vec<Scalar>> = (0..hopf.dim())
        .map(|b| triv.phi_inv().apply_basis(b))
        .collect();
    let inner = conv_forms(hopf, p, 0, &phi, 1, alpha.values());
    let dressed = conv_forms(hopf, p, 1, &inner, 0, &phi_inv);
    let m_calc = bundle.base_calculus();
    let mut values = Vec::with_capacity(hopf.dim());
    for (i, v) in dressed.iter().enumerate() {
        let coords = bundle.pull_base_form(v).ok_or_else(|| {
            GaugeError::NotStrong(format!(
                "component at {} is not a base form",
                hopf.space().name(i)
            ))
        })?;
        let omega1m = m_calc.omega(1);
        values.push(m_calc.form_from_ambient(1, &omega1m.carrier().from_coordinates(&coords)));
    }
    Ok(GaugeField::new(hopf, m_calc, values))
}

/// The projection associated to a connection, as a map on the ambient
/// tensor square: left multiplication after the Galois map and the
/// connection.
pub fn projection_from_connection(bundle: &Bundle, omega: &Connection) -> GradedMap {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let dp = p.dim();
    let db = hopf.dim();
    let pp = GradedSpace::tensor_power(p.space(), 2);
    let mut images = Vec::with_capacity(pp.dim());
    for idx in 0..pp.dim() {
        let chi_val = bundle.chi_tilde().apply_basis(idx);
        let n = p.modulus();
        let mut img = vec![Scalar::zero(n); dp * dp];
        for (k, c) in chi_val.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (pi, bi) = (k / db, k % db);
            let moved = act_ambient(p, 1, &p.space().basis_vector(pi), omega.value(bi), true);
            for (x, y) in img.iter_mut().zip(moved.iter()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        images.push(img);
    }
    GradedMap::from_images(pp.clone(), pp, 0, images).expect("projection is graded")
}

/// Reconstruct a connection from a projection:
/// omega(b) = Pi(lift(chi_inv(1 (x) (b - eps(b) 1)))).
pub fn connection_from_projection(
    bundle: &Bundle,
    pi: &GradedMap,
) -> Result<Connection, GaugeError> {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let chi_inv = bundle
        .chi_inv()
        .ok_or_else(|| GaugeError::NotPrincipal("galois map has no inverse".to_string()))?;
    let n = p.modulus();
    let db = hopf.dim();
    let omega1 = bundle.total_calculus().omega(1);
    let mut values = Vec::with_capacity(db);
    for b in 0..db {
        // 1 (x) (b - eps(b) 1) in P (x) B
        let mut v = vec![Scalar::zero(n); p.dim() * db];
        let eps = hopf.counit_of(&hopf.space().basis_vector(b));
        for (i, c) in p.unit().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            v[i * db + b] += c;
            for (j, u) in hopf.algebra().unit().iter().enumerate() {
                if !u.is_zero() {
                    v[i * db + j] -= &(&(c * u) * &eps);
                }
            }
        }
        let class = chi_inv.apply(&v);
        let rep = bundle.quotient_section().apply(&class);
        if !omega1.carrier().contains(&rep) {
            return Err(GaugeError::Validation(
                "galois inverse representative lies in Omega^1 P".to_string(),
            ));
        }
        values.push(pi.apply(&rep));
    }
    Ok(Connection::from_ambient_values(bundle, values))
}

/// The three connection conditions: the Galois image condition, adjoint
/// equivariance, and strongness.
pub fn check_connection(bundle: &Bundle, omega: &Connection) -> CheckReport {
    let mut report = CheckReport::new("connection");
    let p = bundle.total();
    let hopf = bundle.hopf();
    let db = hopf.dim();
    let n = p.modulus();

    // omega vanishes at the unit of B
    let mut at_unit = vec![Scalar::zero(n); p.dim() * p.dim()];
    for (i, c) in hopf.algebra().unit().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (x, y) in at_unit.iter_mut().zip(omega.value(i).iter()) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }
    report.push(
        "vanishes at the unit",
        if at_unit.iter().all(|c| c.is_zero()) {
            None
        } else {
            Some("1".to_string())
        },
    );

    // galois image: chi_tilde . omega = 1 (x) (id - unit eps)
    let mut witness = None;
    for b in 0..db {
        let lhs = bundle.chi_tilde().apply(omega.value(b));
        let mut rhs = vec![Scalar::zero(n); p.dim() * db];
        let eps = hopf.counit_of(&hopf.space().basis_vector(b));
        for (i, c) in p.unit().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            rhs[i * db + b] += c;
            for (j, u) in hopf.algebra().unit().iter().enumerate() {
                if !u.is_zero() {
                    rhs[i * db + j] -= &(&(c * u) * &eps);
                }
            }
        }
        if lhs != rhs {
            witness = Some(hopf.space().name(b).to_string());
            break;
        }
    }
    report.push("galois image condition", witness);

    // equivariance: rho2 . omega = (omega (x) id) . Ad
    let mut witness = None;
    for b in 0..db {
        let lhs = bundle.tensor_square_coaction().apply(omega.value(b));
        let mut rhs = vec![Scalar::zero(n); p.dim() * p.dim() * db];
        for (l, r, c) in bundle.adjoint().terms(b) {
            for (x, y) in omega.value(l).iter().enumerate() {
                if !y.is_zero() {
                    rhs[x * db + r] += &(&c * y);
                }
            }
        }
        if lhs != rhs {
            witness = Some(hopf.space().name(b).to_string());
            break;
        }
    }
    report.push("adjoint equivariance", witness);

    // strongness: (id - Pi) d maps P into (Omega^1 M) P
    let pi = projection_from_connection(bundle, omega);
    let mut witness = None;
    for j in 0..p.dim() {
        let dpj = d_ambient(p, 0, &p.space().basis_vector(j));
        let projected = pi.apply(&dpj);
        let residual: Vec<Scalar> = dpj
            .iter()
            .zip(projected.iter())
            .map(|(a, b)| a - b)
            .collect();
        if !bundle.horizontal_right().contains(&residual) {
            witness = Some(p.space().name(j).to_string());
            break;
        }
    }
    report.push("strongness", witness);
    report
}

/// The projection conditions: idempotence, vanishing on the two-sided
/// horizontal forms, Galois compatibility, left-module property, and
/// equivariance.
pub fn check_projection(bundle: &Bundle, pi: &GradedMap) -> CheckReport {
    let mut report = CheckReport::new("projection");
    let p = bundle.total();
    let omega1 = bundle.total_calculus().omega(1);
    let carrier: &Subspace = omega1.carrier();

    let mut witness = None;
    for (k, row) in carrier.rows().iter().enumerate() {
        let once = pi.apply(row);
        if pi.apply(&once) != once {
            witness = Some(format!("basis form {k}"));
            break;
        }
    }
    report.push("idempotent", witness);

    let mut witness = None;
    for (k, row) in bundle.horizontal_two_sided().rows().iter().enumerate() {
        if pi.apply(row).iter().any(|c| !c.is_zero()) {
            witness = Some(format!("horizontal generator {k}"));
            break;
        }
    }
    report.push("vanishes on P(Omega^1 M)P", witness);

    let mut witness = None;
    for (k, row) in carrier.rows().iter().enumerate() {
        if bundle.chi_tilde().apply(&pi.apply(row)) != bundle.chi_tilde().apply(row) {
            witness = Some(format!("basis form {k}"));
            break;
        }
    }
    report.push("galois compatibility", witness);

    let mut witness = None;
    'outer: for i in 0..p.dim() {
        let e = p.space().basis_vector(i);
        for (k, row) in carrier.rows().iter().enumerate() {
            let lhs = pi.apply(&act_ambient(p, 1, &e, row, true));
            let rhs = act_ambient(p, 1, &e, &pi.apply(row), true);
            if lhs != rhs {
                witness = Some(format!("{} . basis form {}", p.space().name(i), k));
                break 'outer;
            }
        }
    }
    report.push("left module morphism", witness);

    let rho2 = bundle.tensor_square_coaction();
    let db = bundle.hopf().dim();
    let dp = p.dim();
    let mut witness = None;
    for (k, row) in carrier.rows().iter().enumerate() {
        let lhs = rho2.apply(&pi.apply(row));
        let coacted = rho2.apply(row);
        // apply pi to the P (x) P legs
        let n = p.modulus();
        let mut rhs = vec![Scalar::zero(n); dp * dp * db];
        for (idx, c) in coacted.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (pp_idx, b_idx) = (idx / db, idx % db);
            let moved = pi.apply_basis(pp_idx);
            for (x, y) in moved.iter().enumerate() {
                if !y.is_zero() {
                    rhs[x * db + b_idx] += &(c * y);
                }
            }
        }
        if lhs != rhs {
            witness = Some(format!("basis form {k}"));
            break;
        }
    }
    report.push("comodule intertwiner", witness);

    // the kernel on Omega^1 P is exactly the two-sided horizontal subspace
    let restricted_kernel = crate::graded::kernel(pi).intersect(carrier);
    let witness = if restricted_kernel == *bundle.horizontal_two_sided() {
        None
    } else {
        Some(format!(
            "kernel dim {} vs {}",
            restricted_kernel.dim(),
            bundle.horizontal_two_sided().dim()
        ))
    };
    report.push("kernel is P(Omega^1 M)P", witness);
    report
}
