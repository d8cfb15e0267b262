//! The reference model: the tensor product bundle of two anyonic lines, its
//! four-parameter gauge fields, two-parameter gauge group, and the
//! closed-form flat family and gauge canonical form.

use super::bundle::Bundle;
use super::connection::GaugeField;
use super::transform::{transform_field, LocalGauge};
use super::trivial::{bundle_from_trivialization, Trivialization};
use super::GaugeError;
use crate::algebra::{Coaction, Hopf};
use crate::forms::Form;
use crate::graded::{GradedMap, SpaceRef};
use crate::models::{anyonic_hopf, anyonic_line};
use crate::scalar::Scalar;
use std::sync::Arc;

/// Gauge field coordinates (a1, a2, b1, b2) in the basis
/// A(xi) = a1 dt + a2 t^2 dt^2, A(xi^2) = b1 dt^2 + b2 t dt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub a1: Scalar,
    pub a2: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
}

/// Gauge group coordinates: gamma(xi) = c1 t, gamma(xi^2) = c2 t^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeParams {
    pub c1: Scalar,
    pub c2: Scalar,
}

/// Scalar section coordinates: sigma(1) = s0, sigma(xi) = s1 t,
/// sigma(xi^2) = s2 t^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionParams {
    pub s0: Scalar,
    pub s1: Scalar,
    pub s2: Scalar,
}

/// The assembled reference bundle with its object isomorphism and the named
/// base 1-forms used by the parameter coordinates.
pub struct AnyonicModel {
    hopf: Arc<Hopf>,
    bundle: Bundle,
    triv: Trivialization,
    theta_iso: GradedMap,
    theta_iso_inv: GradedMap,
    base_power: [usize; 3],
    dt: Form,
    t2dt2: Form,
    dt2: Form,
    tdt: Form,
}

impl AnyonicModel {
    pub fn new() -> AnyonicModel {
        let m = anyonic_line(3, "theta");
        let hopf = anyonic_hopf();
        let (bundle0, triv) = super::trivial::trivial_bundle(&m, &hopf).expect("reference bundle");
        let rho = Coaction::new(
            bundle0.total().space().clone(),
            hopf.clone(),
            bundle0.coaction().map().clone(),
        );
        let (bundle, triv, theta_iso, theta_iso_inv) =
            bundle_from_trivialization(bundle0.total().clone(), rho, triv)
                .expect("object isomorphism");
        // locate the base powers 1, t, t^2 by degree
        let base = bundle.base().space().clone();
        let mut base_power = [usize::MAX; 3];
        for (i, v) in base.basis().iter().enumerate() {
            base_power[v.degree as usize] = i;
        }
        assert!(base_power.iter().all(|&i| i != usize::MAX));
        let m_calc = bundle.base_calculus().clone();
        let t = base.basis_vector(base_power[1]);
        let t2 = base.basis_vector(base_power[2]);
        let dt = m_calc.d_of_element(&t);
        let dt2 = m_calc.d_of_element(&t2);
        let t2dt2 = m_calc.act(&t2, &dt2, true);
        let tdt = m_calc.act(&t, &dt, true);
        AnyonicModel {
            hopf,
            bundle,
            triv,
            theta_iso,
            theta_iso_inv,
            base_power,
            dt,
            t2dt2,
            dt2,
            tdt,
        }
    }

    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.hopf
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn trivialization(&self) -> &Trivialization {
        &self.triv
    }

    pub fn object_iso(&self) -> (&GradedMap, &GradedMap) {
        (&self.theta_iso, &self.theta_iso_inv)
    }

    pub fn base_space(&self) -> &SpaceRef {
        self.bundle.base().space()
    }

    /// Basis index of t^k in the base.
    pub fn base_power(&self, k: usize) -> usize {
        self.base_power[k]
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(3)
    }

    pub fn q(&self) -> Scalar {
        Scalar::root_of_unity(3)
    }

    /// 1 + q, the quantum integer [2].
    pub fn two_q(&self) -> Scalar {
        &self.one() + &self.q()
    }

    pub fn dt(&self) -> &Form {
        &self.dt
    }

    pub fn t2dt2(&self) -> &Form {
        &self.t2dt2
    }

    pub fn dt2(&self) -> &Form {
        &self.dt2
    }

    pub fn tdt(&self) -> &Form {
        &self.tdt
    }

    pub fn field(&self, params: &FieldParams) -> GaugeField {
        let m_calc = self.bundle.base_calculus();
        let values = vec![
            m_calc.zero_form(1),
            self.dt.scale(&params.a1).add(&self.t2dt2.scale(&params.a2)),
            self.dt2.scale(&params.b1).add(&self.tdt.scale(&params.b2)),
        ];
        GaugeField::new(&self.hopf, m_calc, values)
    }

    /// Read the four parameters back off a gauge field.
    pub fn field_params(&self, field: &GaugeField) -> FieldParams {
        let [a1, a2] = self.express(field.value(1), [&self.dt, &self.t2dt2]);
        let [b1, b2] = self.express(field.value(2), [&self.dt2, &self.tdt]);
        FieldParams { a1, a2, b1, b2 }
    }

    fn express(&self, form: &Form, basis: [&Form; 2]) -> [Scalar; 2] {
        let target = form.coords();
        let rows: Vec<Vec<Scalar>> = (0..target.len())
            .map(|k| vec![basis[0].coords()[k].clone(), basis[1].coords()[k].clone()])
            .collect();
        let sol = crate::algebra::solve_dense(&rows, target)
            .expect("form lies in the two-dimensional degree component");
        [sol[0].clone(), sol[1].clone()]
    }

    pub fn gauge(&self, params: &GaugeParams) -> Result<LocalGauge, GaugeError> {
        let base = self.base_space();
        let images = vec![
            base.basis_vector(self.base_power[0]),
            base.basis_vector(self.base_power[1])
                .iter()
                .map(|c| c * &params.c1)
                .collect(),
            base.basis_vector(self.base_power[2])
                .iter()
                .map(|c| c * &params.c2)
                .collect(),
        ];
        let gamma =
            GradedMap::from_images(self.hopf.space().clone(), base.clone(), 0, images).unwrap();
        LocalGauge::new(&self.hopf, self.bundle.base(), gamma)
    }

    pub fn gauge_params(&self, gauge: &LocalGauge) -> GaugeParams {
        let c1 = gauge.gamma().apply_basis(1)[self.base_power[1]].clone();
        let c2 = gauge.gamma().apply_basis(2)[self.base_power[2]].clone();
        GaugeParams { c1, c2 }
    }

    /// Scalar local sections for the coregular fiber.
    pub fn section(&self, params: &SectionParams) -> Vec<Form> {
        let m_calc = self.bundle.base_calculus();
        let base = self.base_space();
        let value = |k: usize, s: &Scalar| {
            let v: Vec<Scalar> = base
                .basis_vector(self.base_power[k])
                .iter()
                .map(|c| c * s)
                .collect();
            m_calc.form_from_ambient(0, &v)
        };
        vec![
            value(0, &params.s0),
            value(1, &params.s1),
            value(2, &params.s2),
        ]
    }

    pub fn section_params(&self, sigma: &[Form]) -> SectionParams {
        let read = |form: &Form, k: usize| form.ambient_vector()[self.base_power[k]].clone();
        SectionParams {
            s0: read(&sigma[0], 0),
            s1: read(&sigma[1], 1),
            s2: read(&sigma[2], 2),
        }
    }

    /// The two-parameter flat family a2 = 0, b2 = -(1+q) a1^2.
    pub fn flat_field(&self, a1: &Scalar, b1: &Scalar) -> GaugeField {
        let b2 = -&(&self.two_q() * &(a1 * a1));
        self.field(&FieldParams {
            a1: a1.clone(),
            a2: Scalar::zero(3),
            b1: b1.clone(),
            b2,
        })
    }

    /// Whether the parameters satisfy the closed-form flat conditions.
    pub fn flat_conditions(&self, params: &FieldParams) -> bool {
        params.a2.is_zero() && params.b2 == -&(&self.two_q() * &(&params.a1 * &params.a1))
    }

    /// The gauge that normalizes a1 = b1 = 0 and the resulting canonical
    /// representative (0, a2, 0, b2 + (1+q) a1^2). The representative is
    /// recomputed through the gauge action and cross-checked.
    pub fn canonical_form(
        &self,
        field: &GaugeField,
    ) -> Result<(GaugeField, LocalGauge, FieldParams), GaugeError> {
        let p = self.field_params(field);
        let gauge = self.gauge(&GaugeParams {
            c1: -&p.a1,
            c2: &(-&p.b1) + &(&self.two_q() * &(&p.a1 * &p.a1)),
        })?;
        let transformed =
            transform_field(&self.hopf, self.bundle.base_calculus(), field, &gauge);
        let expect = FieldParams {
            a1: Scalar::zero(3),
            a2: p.a2.clone(),
            b1: Scalar::zero(3),
            b2: &p.b2 + &(&self.two_q() * &(&p.a1 * &p.a1)),
        };
        let got = self.field_params(&transformed);
        if got != expect {
            return Err(GaugeError::Validation(
                "canonical form matches the closed-form representative".to_string(),
            ));
        }
        Ok((transformed, gauge, got))
    }
}

impl Default for AnyonicModel {
    fn default() -> Self {
        AnyonicModel::new()
    }
}
