//! Verification suites over a loaded model: algebra, hopf, comodule,
//! principal, and connection checks, rendered deterministically in
//! declaration order.

use crate::algebra::{check_algebra, check_comodule_algebra, check_hopf, CheckReport};
use crate::forms::Form;
use crate::gauge::{
    check_connection, check_projection, connection_from_field, field_from_connection,
    projection_from_connection, verify_principal, Bundle, GaugeField, Trivialization,
};
use crate::model::Model;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Hopf,
    Comodule,
    Principal,
    Connection,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "algebra" => Suite::Algebra,
            "hopf" => Suite::Hopf,
            "comodule" => Suite::Comodule,
            "principal" => Suite::Principal,
            "connection" => Suite::Connection,
            "all" => Suite::All,
            _ => return None,
        })
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

pub struct SuiteOutput {
    pub text: String,
    pub ok: bool,
}

fn render(out: &mut SuiteOutput, heading: &str, report: &CheckReport) {
    out.text.push_str(&format!("[{heading}]\n"));
    for e in &report.entries {
        match &e.witness {
            None => out.text.push_str(&format!("  {}: pass\n", e.name)),
            Some(w) => {
                out.ok = false;
                out.text.push_str(&format!("  {}: FAIL at {}\n", e.name, w));
            }
        }
    }
}

/// Run the selected suites against every matching object of the model.
pub fn run_suites(model: &Model, suite: Suite) -> SuiteOutput {
    let mut out = SuiteOutput {
        text: String::new(),
        ok: true,
    };
    if suite.includes(Suite::Algebra) {
        for (name, alg) in model.algebras() {
            render(&mut out, &format!("algebra {name}"), &check_algebra(alg));
        }
    }
    if suite.includes(Suite::Hopf) {
        for (name, hopf) in model.hopfs() {
            render(&mut out, &format!("hopf {name}"), &check_hopf(hopf));
        }
    }
    if suite.includes(Suite::Comodule) {
        for (name, coaction) in model.coactions() {
            let alg = model
                .algebras()
                .find(|(_, a)| a.space().as_ref() == coaction.carrier().as_ref())
                .map(|(_, a)| a.clone());
            match alg {
                Some(alg) => render(
                    &mut out,
                    &format!("comodule {name}"),
                    &check_comodule_algebra(&alg, coaction),
                ),
                None => {
                    out.ok = false;
                    out.text
                        .push_str(&format!("[comodule {name}]\n  carrier is not a declared algebra: FAIL\n"));
                }
            }
        }
    }
    if suite.includes(Suite::Principal) || suite.includes(Suite::Connection) {
        for (name, coaction) in model.coactions() {
            let alg = model
                .algebras()
                .find(|(_, a)| a.space().as_ref() == coaction.carrier().as_ref())
                .map(|(_, a)| a.clone());
            let alg = match alg {
                Some(a) => a,
                None => continue,
            };
            let bundle = match Bundle::new(alg, coaction.clone()) {
                Ok(b) => b,
                Err(e) => {
                    if suite.includes(Suite::Principal) {
                        out.ok = false;
                        out.text.push_str(&format!(
                            "[principal {name}]\n  bundle construction: FAIL ({e})\n"
                        ));
                    }
                    continue;
                }
            };
            if suite.includes(Suite::Principal) {
                render(
                    &mut out,
                    &format!("principal {name}"),
                    &verify_principal(&bundle),
                );
            }
            if suite.includes(Suite::Connection) {
                let (phi, phi_inv) = match (model.named_map("phi"), model.named_map("phi_inv")) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue,
                };
                if phi.map.cod().as_ref() != bundle.total().space().as_ref() {
                    continue;
                }
                let triv = Trivialization::new(phi.map.clone(), phi_inv.map.clone());
                render(
                    &mut out,
                    &format!("trivialization of {name}"),
                    &triv.check(&bundle),
                );
                let report = connection_suite(&bundle, &triv);
                render(&mut out, &format!("connections on {name}"), &report);
            }
        }
    }
    out
}

/// Exercise the trivial connection and every basis gauge field: the three
/// connection conditions, the projection properties, and both round trips.
fn connection_suite(bundle: &Bundle, triv: &Trivialization) -> CheckReport {
    let mut report = CheckReport::new("connections");
    let hopf = bundle.hopf();
    let m_calc = bundle.base_calculus();
    let omega1 = m_calc.omega(1);

    let mut fields: Vec<(String, GaugeField)> = vec![(
        "zero field".to_string(),
        GaugeField::zero(hopf, m_calc),
    )];
    for i in 1..hopf.dim() {
        let want = hopf.space().degree(i);
        for (k, row) in omega1.carrier().rows().iter().enumerate() {
            if omega1.ambient().homogeneous_degree(row) != Some(want) {
                continue;
            }
            let mut values: Vec<Form> = (0..hopf.dim()).map(|_| m_calc.zero_form(1)).collect();
            let mut coords = vec![Scalar::zero(hopf.modulus()); omega1.dim()];
            coords[k] = Scalar::one(hopf.modulus());
            values[i] = m_calc.form_from_ambient(1, &omega1.carrier().from_coordinates(&coords));
            fields.push((
                format!("basis field {}:{k}", hopf.space().name(i)),
                GaugeField::new(hopf, m_calc, values),
            ));
        }
    }
    for (label, field) in &fields {
        let omega = connection_from_field(bundle, triv, field);
        let conn = check_connection(bundle, &omega);
        report.push(
            format!("{label}: connection conditions"),
            conn.first_failure().map(|e| {
                format!("{} at {}", e.name, e.witness.clone().unwrap_or_default())
            }),
        );
        let pi = projection_from_connection(bundle, &omega);
        let proj = check_projection(bundle, &pi);
        report.push(
            format!("{label}: projection properties"),
            proj.first_failure().map(|e| {
                format!("{} at {}", e.name, e.witness.clone().unwrap_or_default())
            }),
        );
        let round = field_from_connection(bundle, triv, &omega);
        let witness = match round {
            Ok(back) if &back == field => None,
            Ok(_) => Some("field round trip".to_string()),
            Err(e) => Some(format!("field round trip ({e})")),
        };
        report.push(format!("{label}: field round trip"), witness);
        let witness = match crate::gauge::connection_from_projection(bundle, &pi) {
            Ok(back) if back == omega => None,
            Ok(_) => Some("projection round trip".to_string()),
            Err(e) => Some(format!("projection round trip ({e})")),
        };
        report.push(format!("{label}: projection round trip"), witness);
    }
    report
}
