//! Curvature of a gauge field and the Bianchi residual, computed in the base
//! calculus.

use super::connection::{conv_forms, GaugeField};
use crate::algebra::Hopf;
use crate::forms::{d_ambient, Calculus, Form};
use crate::scalar::Scalar;

/// F = dA + A * A, one base 2-form per structure-group basis vector.
pub fn curvature(hopf: &Hopf, m_calc: &Calculus, field: &GaugeField) -> Vec<Form> {
    let m = m_calc.algebra().as_ref();
    let a_amb: Vec<Vec<Scalar>> = field.values().iter().map(|f| f.ambient_vector()).collect();
    let a_wedge_a = conv_forms(hopf, m, 1, &a_amb, 1, &a_amb);
    a_amb
        .iter()
        .zip(a_wedge_a.iter())
        .map(|(a, aa)| {
            let da = d_ambient(m, 1, a);
            let sum: Vec<Scalar> = da.iter().zip(aa.iter()).map(|(x, y)| x + y).collect();
            m_calc.form_from_ambient(2, &sum)
        })
        .collect()
}

/// dF + A * F - F * A as ambient 3-tensors over the base; identically zero
/// for every gauge field.
pub fn bianchi_residual(hopf: &Hopf, m_calc: &Calculus, field: &GaugeField) -> Vec<Vec<Scalar>> {
    let m = m_calc.algebra().as_ref();
    let f = curvature(hopf, m_calc, field);
    let f_amb: Vec<Vec<Scalar>> = f.iter().map(|x| x.ambient_vector()).collect();
    let a_amb: Vec<Vec<Scalar>> = field.values().iter().map(|x| x.ambient_vector()).collect();
    let af = conv_forms(hopf, m, 1, &a_amb, 2, &f_amb);
    let fa = conv_forms(hopf, m, 2, &f_amb, 1, &a_amb);
    f_amb
        .iter()
        .zip(af.iter().zip(fa.iter()))
        .map(|(fv, (x, y))| {
            let df = d_ambient(m, 2, fv);
            df.iter()
                .zip(x.iter().zip(y.iter()))
                .map(|(a, (b, c))| &(a + b) - c)
                .collect()
        })
        .collect()
}

pub fn bianchi_residual_is_zero(hopf: &Hopf, m_calc: &Calculus, field: &GaugeField) -> bool {
    bianchi_residual(hopf, m_calc, field)
        .iter()
        .all(|v| v.iter().all(|c| c.is_zero()))
}
