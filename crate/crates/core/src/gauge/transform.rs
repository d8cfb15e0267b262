//! Local and global gauge transformations, the induced bundle morphism, the
//! transformed bundle with its new product, and transport of connections.

use super::bundle::Bundle;
use super::connection::{conv_forms, Connection, GaugeField};
use super::trivial::Trivialization;
use super::GaugeError;
use crate::algebra::{
    convolution, convolution_inverse, convolution_unit, Algebra, CheckReport, Coaction,
    difference_witness, Hopf,
};
use crate::forms::{d_ambient, Calculus, Form};
use crate::graded::{GradedMap, GradedSpace};
use crate::scalar::Scalar;
use std::fmt;
use std::sync::Arc;

/// A local gauge transformation: a convolution-invertible morphism from the
/// structure group to the base with value 1 at the unit.
#[derive(Clone)]
pub struct LocalGauge {
    gamma: GradedMap,
    gamma_inv: GradedMap,
}

impl fmt::Debug for LocalGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalGauge")
    }
}

impl LocalGauge {
    /// Validates unit normalization and computes the convolution inverse.
    pub fn new(hopf: &Hopf, m: &Algebra, gamma: GradedMap) -> Result<LocalGauge, GaugeError> {
        assert_eq!(gamma.dom().as_ref(), hopf.space().as_ref());
        assert_eq!(gamma.cod().as_ref(), m.space().as_ref());
        if gamma.apply(hopf.algebra().unit()) != m.unit().to_vec() {
            return Err(GaugeError::Validation(
                "gauge transformation preserves the unit".to_string(),
            ));
        }
        let gamma_inv = convolution_inverse(hopf, m, &gamma)?;
        Ok(LocalGauge { gamma, gamma_inv })
    }

    pub fn identity(hopf: &Hopf, m: &Algebra) -> LocalGauge {
        let unit = convolution_unit(hopf, m);
        LocalGauge {
            gamma: unit.clone(),
            gamma_inv: unit,
        }
    }

    pub fn gamma(&self) -> &GradedMap {
        &self.gamma
    }

    pub fn gamma_inv(&self) -> &GradedMap {
        &self.gamma_inv
    }
}

/// Convolution composition of local gauge transformations.
pub fn local_gauge_compose(
    hopf: &Hopf,
    m: &Algebra,
    a: &LocalGauge,
    b: &LocalGauge,
) -> LocalGauge {
    let gamma = convolution(hopf, m, a.gamma(), b.gamma());
    let gamma_inv = convolution(hopf, m, b.gamma_inv(), a.gamma_inv());
    LocalGauge { gamma, gamma_inv }
}

pub fn local_gauge_inverse(a: &LocalGauge) -> LocalGauge {
    LocalGauge {
        gamma: a.gamma_inv.clone(),
        gamma_inv: a.gamma.clone(),
    }
}

/// Gauge transform of a gauge field:
/// gamma_inv * A * gamma + gamma_inv * d gamma, computed in the base
/// calculus.
pub fn transform_field(
    hopf: &Hopf,
    m_calc: &Calculus,
    field: &GaugeField,
    gauge: &LocalGauge,
) -> GaugeField {
    let m = m_calc.algebra().as_ref();
    let db = hopf.dim();
    let gamma: Vec<Vec<Scalar>> = (0..db).map(|b| gauge.gamma().apply_basis(b)).collect();
    let gamma_inv: Vec<Vec<Scalar>> = (0..db).map(|b| gauge.gamma_inv().apply_basis(b)).collect();
    let a_amb: Vec<Vec<Scalar>> = field.values().iter().map(|f| f.ambient_vector()).collect();
    let d_gamma: Vec<Vec<Scalar>> = gamma.iter().map(|v| d_ambient(m, 0, v)).collect();
    let conjugated = conv_forms(
        hopf,
        m,
        1,
        &conv_forms(hopf, m, 0, &gamma_inv, 1, &a_amb),
        0,
        &gamma,
    );
    let inhomog = conv_forms(hopf, m, 0, &gamma_inv, 1, &d_gamma);
    let values: Vec<Form> = conjugated
        .iter()
        .zip(inhomog.iter())
        .map(|(a, b)| {
            let sum: Vec<Scalar> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
            m_calc.form_from_ambient(1, &sum)
        })
        .collect();
    GaugeField::new(hopf, m_calc, values)
}

/// Gauge transform of a local section: sigma * gamma.
pub fn transform_section(
    hopf: &Hopf,
    m_calc: &Calculus,
    rho_v: &Coaction,
    sigma: &[Form],
    gauge: &LocalGauge,
) -> Vec<Form> {
    let m = m_calc.algebra().as_ref();
    let deg = sigma[0].degree();
    let n = m.modulus();
    let _ = hopf;
    (0..rho_v.carrier().dim())
        .map(|i| {
            let mut acc = vec![Scalar::zero(n); m.dim().pow((deg + 1) as u32)];
            for (l, r, c) in rho_v.terms(i) {
                let g = gauge.gamma().apply_basis(r);
                let w = crate::forms::wedge_ambient(m, deg, &sigma[l].ambient_vector(), 0, &g);
                for (x, y) in acc.iter_mut().zip(w.iter()) {
                    if !y.is_zero() {
                        *x += &(&c * y);
                    }
                }
            }
            m_calc.form_from_ambient(deg, &acc)
        })
        .collect()
}

/// A global gauge transformation with its bundle morphism.
#[derive(Clone)]
pub struct GlobalGauge {
    gamma_map: GradedMap,
    gamma_map_inv: GradedMap,
    theta: GradedMap,
    theta_inv: GradedMap,
}

impl fmt::Debug for GlobalGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlobalGauge")
    }
}

impl GlobalGauge {
    /// The equivariant morphism B -> P.
    pub fn gamma(&self) -> &GradedMap {
        &self.gamma_map
    }

    pub fn gamma_inv(&self) -> &GradedMap {
        &self.gamma_map_inv
    }

    /// The bundle morphism P -> P.
    pub fn theta(&self) -> &GradedMap {
        &self.theta
    }

    pub fn theta_inv(&self) -> &GradedMap {
        &self.theta_inv
    }
}

/// The bundle morphism of an equivariant Gamma: multiply the coaction legs.
pub fn theta_of(bundle: &Bundle, gamma: &GradedMap) -> GradedMap {
    let p = bundle.total();
    let images: Vec<Vec<Scalar>> = (0..p.dim())
        .map(|j| {
            let n = p.modulus();
            let mut acc = vec![Scalar::zero(n); p.dim()];
            for (p0, p1, c) in bundle.coaction().terms(j) {
                let g = gamma.apply_basis(p1);
                let prod = p.mul_vec(&p.space().basis_vector(p0), &g);
                for (x, y) in acc.iter_mut().zip(prod.iter()) {
                    if !y.is_zero() {
                        *x += &(&c * y);
                    }
                }
            }
            acc
        })
        .collect();
    GradedMap::from_images(p.space().clone(), p.space().clone(), 0, images)
        .expect("bundle morphism is graded")
}

/// Global gauge transformation of a trivial bundle induced by a local one:
/// Gamma = phi_inv * gamma * phi, Theta = mult . (id (x) Gamma) . rho.
pub fn global_gauge(
    bundle: &Bundle,
    triv: &Trivialization,
    gauge: &LocalGauge,
) -> Result<GlobalGauge, GaugeError> {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let gamma_in_p = bundle.base_inclusion().compose(gauge.gamma());
    let gamma_inv_in_p = bundle.base_inclusion().compose(gauge.gamma_inv());
    let gamma_map = convolution(
        hopf,
        p,
        &convolution(hopf, p, triv.phi_inv(), &gamma_in_p),
        triv.phi(),
    );
    let gamma_map_inv = convolution(
        hopf,
        p,
        &convolution(hopf, p, triv.phi_inv(), &gamma_inv_in_p),
        triv.phi(),
    );
    let unit = convolution_unit(hopf, p);
    if convolution(hopf, p, &gamma_map, &gamma_map_inv) != unit
        || convolution(hopf, p, &gamma_map_inv, &gamma_map) != unit
    {
        return Err(GaugeError::Validation(
            "Gamma * Gamma_inv = unit".to_string(),
        ));
    }
    let theta = theta_of(bundle, &gamma_map);
    let theta_inv = theta_of(bundle, &gamma_map_inv);
    if theta_inv.compose(&theta) != GradedMap::identity(p.space()) {
        return Err(GaugeError::Validation("Theta invertible".to_string()));
    }
    Ok(GlobalGauge {
        gamma_map,
        gamma_map_inv,
        theta,
        theta_inv,
    })
}

/// The global gauge conditions: unit preservation, convolution
/// invertibility, and adjoint equivariance; plus the properties of the
/// induced bundle morphism.
pub fn check_global(bundle: &Bundle, global: &GlobalGauge) -> CheckReport {
    let mut report = CheckReport::new("global gauge");
    let p = bundle.total();
    let hopf = bundle.hopf();
    let witness = if global.gamma().apply(hopf.algebra().unit()) == p.unit().to_vec() {
        None
    } else {
        Some("1".to_string())
    };
    report.push("unit preserved", witness);
    let unit = convolution_unit(hopf, p);
    let conv = convolution(hopf, p, global.gamma(), global.gamma_inv());
    report.push("convolution invertible", difference_witness(&conv, &unit));
    let lhs = bundle.coaction().map().compose(global.gamma());
    let rhs_images: Vec<Vec<Scalar>> = (0..hopf.dim())
        .map(|b| {
            let n = p.modulus();
            let mut acc = vec![Scalar::zero(n); p.dim() * hopf.dim()];
            for (l, r, c) in bundle.adjoint().terms(b) {
                for (x, y) in global.gamma().apply_basis(l).iter().enumerate() {
                    if !y.is_zero() {
                        acc[x * hopf.dim() + r] += &(&c * y);
                    }
                }
            }
            acc
        })
        .collect();
    let rhs = GradedMap::from_images(
        hopf.space().clone(),
        GradedSpace::tensor(p.space(), hopf.space()),
        0,
        rhs_images,
    )
    .unwrap();
    report.push("adjoint equivariance", difference_witness(&lhs, &rhs));

    // Theta fixes the unit, is a left module morphism over the base, and
    // intertwines the coaction
    let witness = if global.theta().apply(p.unit()) == p.unit().to_vec() {
        None
    } else {
        Some("1".to_string())
    };
    report.push("bundle morphism preserves the unit", witness);
    let mut witness = None;
    'outer: for row in bundle.base_subspace().rows() {
        for j in 0..p.dim() {
            let lhs = global
                .theta()
                .apply(&p.mul_vec(row, &p.space().basis_vector(j)));
            let rhs = p.mul_vec(row, &global.theta().apply_basis(j));
            if lhs != rhs {
                witness = Some(p.space().name(j).to_string());
                break 'outer;
            }
        }
    }
    report.push("bundle morphism is base-linear", witness);
    let lhs = bundle.coaction().map().compose(global.theta());
    let rhs = GradedMap::tensor(global.theta(), &GradedMap::identity(hopf.space()))
        .compose(bundle.coaction().map());
    report.push(
        "bundle morphism intertwines the coaction",
        difference_witness(&lhs, &rhs),
    );
    report
}

/// The transformed bundle: same space and coaction, new product
/// Theta . mult . (Theta_inv (x) Theta_inv).
pub fn transformed_bundle(bundle: &Bundle, global: &GlobalGauge) -> Result<Bundle, GaugeError> {
    let p = bundle.total();
    let n = p.modulus();
    let d = p.dim();
    let mut mat = vec![vec![Scalar::zero(n); d * d]; d];
    for i in 0..d {
        let ti = global.theta_inv().apply_basis(i);
        for j in 0..d {
            let tj = global.theta_inv().apply_basis(j);
            let prod = global.theta().apply(&p.mul_vec(&ti, &tj));
            for (k, c) in prod.into_iter().enumerate() {
                mat[k][i * d + j] = c;
            }
        }
    }
    let sq = GradedSpace::tensor_power(p.space(), 2);
    let mult = GradedMap::new(sq, p.space().clone(), 0, mat).expect("transformed product");
    let unit = global.theta().apply(p.unit());
    let new_p = Arc::new(Algebra::new(p.space().clone(), unit, mult));
    let rho = Coaction::new(
        p.space().clone(),
        bundle.hopf().clone(),
        bundle.coaction().map().clone(),
    );
    Bundle::new(new_p, rho)
}

/// Transport a connection along a bundle morphism: (Theta (x) Theta) . omega.
pub fn transport_connection(
    target: &Bundle,
    global: &GlobalGauge,
    omega: &Connection,
) -> Connection {
    let values = omega
        .values()
        .iter()
        .map(|v| apply_tensor_square(global.theta(), v))
        .collect();
    Connection::from_ambient_values(target, values)
}

/// Apply f (x) f to a vector in the tensor square.
pub fn apply_tensor_square(f: &GradedMap, v: &[Scalar]) -> Vec<Scalar> {
    let d = f.dom().dim();
    let n = f.dom().modulus();
    let dc = f.cod().dim();
    let mut out = vec![Scalar::zero(n); dc * dc];
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (i, j) = (idx / d, idx % d);
        let fi = f.apply_basis(i);
        let fj = f.apply_basis(j);
        for (x, cx) in fi.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (y, cy) in fj.iter().enumerate() {
                if !cy.is_zero() {
                    out[x * dc + y] += &(&(c * cx) * cy);
                }
            }
        }
    }
    out
}
