//! Associated fiber bundles, cross sections, local sections, and covariant
//! derivatives on the reference model.

use braidgauge::algebra::{check_comodule_algebra, Coaction};
use braidgauge::associated::{
    associated_bundle, coregular_iso, covariant_d, global_to_local, is_pseudotensorial,
    is_strongly_tensorial, local_from_section, local_to_global, nabla, pseudo_from_section,
    section_from_local, section_from_pseudo, section_times_curvature, tensor_coaction,
    trivialize_associated, FiberComodule, PseudoForm,
};
use braidgauge::forms::Form;
use braidgauge::gauge::{
    connection_from_field, curvature, projection_from_connection, transform_field,
    transform_section, AnyonicModel, FieldParams, GaugeParams, SectionParams,
};
use braidgauge::graded::{image, GradedMap};
use braidgauge::models::ground_field_hopf;
use braidgauge::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one() -> Scalar {
    Scalar::one(3)
}

fn rat(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_ratio(3, rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn random_params(rng: &mut ChaCha8Rng) -> FieldParams {
    FieldParams {
        a1: rat(rng),
        a2: rat(rng),
        b1: rat(rng),
        b2: rat(rng),
    }
}

fn random_section(rng: &mut ChaCha8Rng) -> SectionParams {
    SectionParams {
        s0: rat(rng),
        s1: rat(rng),
        s2: rat(rng),
    }
}

#[test]
fn coregular_fiber_gives_back_the_total_space() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let assoc = associated_bundle(model.bundle(), fiber);
    assert_eq!(assoc.dim(), model.bundle().total().dim());
    let (forward, backward) = coregular_iso(model.bundle(), &assoc);
    // mutually inverse
    let p_space = model.bundle().total().space().clone();
    assert_eq!(
        backward.compose(&forward),
        GradedMap::identity(&p_space)
    );
    for j in 0..p_space.dim() {
        let img = forward.apply_basis(j);
        assert!(assoc.carrier().contains(&img), "image lands in E");
    }
    // round trip on E
    for row in assoc.carrier().rows() {
        let back = forward.apply(&backward.apply(row));
        assert_eq!(&back, row);
    }
    // unit maps to unit
    assert_eq!(
        forward.apply(model.bundle().total().unit()),
        assoc.unit().to_vec()
    );
    // algebra isomorphism: transported structure constants agree with P
    let p = model.bundle().total();
    for i in 0..p.dim() {
        for j in 0..p.dim() {
            let ei = forward.apply_basis(i);
            let ej = forward.apply_basis(j);
            // multiply inside P (x) V with the braided tensor product
            let prod = braided_pv_product(&model, &ei, &ej);
            let back = backward.apply(&prod);
            assert_eq!(back, p.mul_basis(i, j));
        }
    }
}

/// The braided tensor product algebra structure on P (x) B_R.
fn braided_pv_product(model: &AnyonicModel, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let p = model.bundle().total();
    let b = model.hopf().algebra();
    let pv = braidgauge::algebra::braided_tensor_algebra(p, b);
    pv.mul_vec(x, y)
}

#[test]
fn trivial_fiber_recovers_the_base() {
    let model = AnyonicModel::new();
    let k = ground_field_hopf(3);
    // the one-dimensional trivial comodule over the reference group
    let unit_space = braidgauge::graded::GradedSpace::unit(3);
    let rho = Coaction::trivial(&unit_space, model.hopf());
    let fiber = FiberComodule::new(rho, vec![one()]).unwrap();
    let assoc = associated_bundle(model.bundle(), fiber);
    assert_eq!(assoc.dim(), model.bundle().base().dim());
    let _ = k;
}

#[test]
fn adjoint_fiber_dimension_regression() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::adjoint(model.hopf()).unwrap();
    let assoc = associated_bundle(model.bundle(), fiber);
    assert_eq!(assoc.dim(), 9);
}

#[test]
fn tensor_coaction_on_the_coregular_fiber_is_a_comodule_but_not_multiplicative() {
    // The tensor coaction on P (x) B_R satisfies the comodule axioms, but
    // the structure group is not braided-commutative with respect to the
    // coregular comodule here, so the product compatibility fails; the
    // mismatch at (1 (x) xi)(phi(xi) (x) 1) carries a bare q factor that no
    // braiding placement in the coaction can remove. The fixed-point
    // subspace is nevertheless closed under the product, which is what the
    // coregular isomorphism test checks.
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let coact = tensor_coaction(model.bundle(), &fiber);
    let p = model.bundle().total();
    let pv = braidgauge::algebra::braided_tensor_algebra(p, model.hopf().algebra());
    let rho = Coaction::new(pv.space().clone(), model.hopf().clone(), coact);
    assert!(rho.check().passed());
    let report = check_comodule_algebra(&pv, &rho);
    let mult = report
        .entries
        .iter()
        .find(|e| e.name == "coaction multiplicative")
        .unwrap();
    assert!(!mult.pass);
    // products of fixed points can leave the fixed points; the algebra
    // structure on E is the one transported through the isomorphism with P,
    // checked in the coregular test above
    let assoc = associated_bundle(model.bundle(), FiberComodule::coregular(model.hopf()));
    let escaped = assoc.carrier().rows().iter().any(|r1| {
        assoc
            .carrier()
            .rows()
            .iter()
            .any(|r2| !assoc.carrier().contains(&pv.mul_vec(r1, r2)))
    });
    assert!(escaped);
}

#[test]
fn local_sections_globalize_and_return() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..5 {
        let sigma = model.section(&random_section(&mut rng));
        let global = local_to_global(
            model.bundle(),
            model.trivialization(),
            &fiber,
            &sigma,
        );
        assert!(is_pseudotensorial(model.bundle(), &fiber, &global));
        assert!(is_strongly_tensorial(model.bundle(), &global));
        let back = global_to_local(model.bundle(), model.trivialization(), &fiber, &global)
            .unwrap();
        assert_eq!(back, sigma);
    }
}

#[test]
fn degree_one_sections_globalize_and_return() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let m_calc = model.bundle().base_calculus();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    // a degree-1 local section: one base 1-form per fiber basis vector with
    // matching degrees
    let omega1 = m_calc.omega(1);
    for _ in 0..3 {
        let mut sigma: Vec<Form> = Vec::new();
        for i in 0..3 {
            let degree_needed = model.hopf().space().degree(i);
            let mut coords = vec![Scalar::zero(3); omega1.dim()];
            for (k, row) in omega1.carrier().rows().iter().enumerate() {
                if omega1.ambient().homogeneous_degree(row) == Some(degree_needed) {
                    coords[k] = rat(&mut rng);
                }
            }
            sigma.push(m_calc.form_from_ambient(
                1,
                &omega1.carrier().from_coordinates(&coords),
            ));
        }
        let global = local_to_global(model.bundle(), model.trivialization(), &fiber, &sigma);
        assert!(is_pseudotensorial(model.bundle(), &fiber, &global));
        assert!(is_strongly_tensorial(model.bundle(), &global));
        let back =
            global_to_local(model.bundle(), model.trivialization(), &fiber, &global).unwrap();
        assert_eq!(back, sigma);
    }
}

#[test]
fn unit_section_globalizes_to_the_trivialization() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    // sigma = unit . counit
    let sigma = model.section(&SectionParams {
        s0: one(),
        s1: Scalar::zero(3),
        s2: Scalar::zero(3),
    });
    let global = local_to_global(model.bundle(), model.trivialization(), &fiber, &sigma);
    for (i, v) in global.values().iter().enumerate() {
        assert_eq!(v, &model.trivialization().phi().apply_basis(i));
    }
}

#[test]
fn cross_sections_correspond_to_pseudotensorial_zero_forms() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let assoc = associated_bundle(model.bundle(), fiber);
    // Sigma = phi is a pseudotensorial 0-form with Sigma(eta) = 1
    let phi_values: Vec<Vec<Scalar>> = (0..3)
        .map(|b| model.trivialization().phi().apply_basis(b))
        .collect();
    let sigma_form = PseudoForm::new(0, phi_values);
    assert!(is_pseudotensorial(model.bundle(), assoc.fiber(), &sigma_form));
    let s = section_from_pseudo(model.bundle(), &assoc, &sigma_form).unwrap();
    // s agrees with the counit collapse through the coregular isomorphism
    let (_, backward) = coregular_iso(model.bundle(), &assoc);
    for (k, row) in assoc.carrier().rows().iter().enumerate() {
        let via_iso = backward.apply(row);
        // project to the base: phi after counit collapse multiplies to the
        // same element
        let coords = model.bundle().base_subspace().coordinates(&{
            let mut acc = vec![Scalar::zero(3); model.bundle().total().dim()];
            let db = 3;
            for (idx, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, v) = (idx / db, idx % db);
                let prod = model.bundle().total().mul_vec(
                    &model.bundle().total().space().basis_vector(i),
                    &model.trivialization().phi().apply_basis(v),
                );
                for (x, y) in acc.iter_mut().zip(prod.iter()) {
                    if !y.is_zero() {
                        *x += &(c * y);
                    }
                }
            }
            acc
        });
        let expect = coords.expect("s lands in the base");
        let mut got = vec![Scalar::zero(3); model.bundle().base().dim()];
        for (j, c) in s.apply_basis(k).iter().enumerate() {
            got[j] = c.clone();
        }
        assert_eq!(got, expect);
        let _ = via_iso;
    }
    // round trip through the converse construction
    let back = pseudo_from_section(model.bundle(), &assoc, &s).unwrap();
    for (a, b) in back.values().iter().zip(sigma_form.values().iter()) {
        assert_eq!(a, b);
    }
}

#[test]
fn cross_section_round_trip_on_random_draws() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let assoc = associated_bundle(model.bundle(), fiber);
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..5 {
        // random pseudotensorial 0-form with Sigma(eta) = 1: sigma * phi of
        // a random scalar section with s0 = 1
        let sigma = model.section(&SectionParams {
            s0: one(),
            s1: rat(&mut rng),
            s2: rat(&mut rng),
        });
        let global = local_to_global(
            model.bundle(),
            model.trivialization(),
            assoc.fiber(),
            &sigma,
        );
        let s = section_from_pseudo(model.bundle(), &assoc, &global).unwrap();
        let back = pseudo_from_section(model.bundle(), &assoc, &s).unwrap();
        for (a, b) in back.values().iter().zip(global.values().iter()) {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn associated_trivialization_and_tensor_form() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let assoc = associated_bundle(model.bundle(), fiber);
    let triv_e = trivialize_associated(model.bundle(), model.trivialization(), &assoc).unwrap();
    // theta_E is bijective onto E
    assert_eq!(image(&triv_e.theta_e).dim(), assoc.dim());
    assert_eq!(assoc.dim(), 9);
    // the transported product on M (x) V is the braided tensor product
    // algebra structure
    let m = model.bundle().base();
    let v_alg = model.hopf().algebra();
    let mv_alg = braidgauge::algebra::braided_tensor_algebra(m, v_alg);
    let d = mv_alg.dim();
    for i in 0..d {
        for j in 0..d {
            let ei = triv_e.theta_e.apply_basis(i);
            let ej = triv_e.theta_e.apply_basis(j);
            let prod = braided_pv_product(&model, &ei, &ej);
            let back = triv_e
                .theta_e_inv(&prod)
                .expect("transported product lands in M (x) V");
            assert_eq!(back, mv_alg.mul_basis(i, j), "at pair ({i}, {j})");
        }
    }
}

#[test]
fn trivial_fiber_associated_trivialization_is_identity_on_the_base() {
    let model = AnyonicModel::new();
    let unit_space = braidgauge::graded::GradedSpace::unit(3);
    let rho = Coaction::trivial(&unit_space, model.hopf());
    let fiber = FiberComodule::new(rho, vec![one()]).unwrap();
    let assoc = associated_bundle(model.bundle(), fiber);
    let triv_e = trivialize_associated(model.bundle(), model.trivialization(), &assoc).unwrap();
    // theta_E carries m (x) 1 to the inclusion of m
    for k in 0..model.bundle().base().dim() {
        let img = triv_e.theta_e.apply_basis(k);
        let incl = model.bundle().base_inclusion().apply_basis(k);
        assert_eq!(img, incl);
    }
}

#[test]
fn local_and_cross_sections_correspond() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let assoc = associated_bundle(model.bundle(), fiber);
    let triv_e = trivialize_associated(model.bundle(), model.trivialization(), &assoc).unwrap();
    let m_calc = model.bundle().base_calculus();
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..5 {
        let params = SectionParams {
            s0: one(),
            s1: rat(&mut rng),
            s2: rat(&mut rng),
        };
        let sigma = model.section(&params);
        let s = section_from_local(model.bundle(), &assoc, &triv_e, &sigma).unwrap();
        let back = local_from_section(&assoc, &triv_e, m_calc, &s);
        assert_eq!(back, sigma);
        // the cross section is base-linear: s(m e) = m s(e)
        let m = model.bundle().base();
        for row_idx in 0..assoc.dim() {
            let e_row = &assoc.carrier().rows()[row_idx];
            for mi in 0..m.dim() {
                let m_in_p = model.bundle().base_inclusion().apply_basis(mi);
                let moved = assoc.act_left(model.bundle().total(), &m_in_p, e_row);
                let coords = assoc.carrier().coordinates(&moved).expect("E is a module");
                let lhs = s.apply(&coords);
                let rhs = m.mul_vec(
                    &m.space().basis_vector(mi),
                    &s.apply_basis(row_idx),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn covariant_derivative_closed_forms() {
    let model = AnyonicModel::new();
    let m_calc = model.bundle().base_calculus();
    let rho_v = Coaction::coregular(model.hopf());
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..10 {
        let sp = random_section(&mut rng);
        let fp = random_params(&mut rng);
        let sigma = model.section(&sp);
        let field = model.field(&fp);
        let ns = nabla(m_calc, &rho_v, &sigma, &field);
        assert!(ns[0].is_zero());
        // nabla sigma(xi) = (s1 - s0 a1) dt - s0 a2 t^2 dt^2
        let expect_xi = model
            .dt()
            .scale(&(&sp.s1 - &(&sp.s0 * &fp.a1)))
            .sub(&model.t2dt2().scale(&(&sp.s0 * &fp.a2)));
        assert_eq!(ns[1], expect_xi);
        // nabla sigma(xi^2) = (s2 - s0 b1) dt^2 - (s0 b2 + (1+q) s1 a1) t dt
        let two_q = model.two_q();
        let expect_xi2 = model
            .dt2()
            .scale(&(&sp.s2 - &(&sp.s0 * &fp.b1)))
            .sub(&model.tdt().scale(
                &(&(&sp.s0 * &fp.b2) + &(&two_q * &(&sp.s1 * &fp.a1))),
            ));
        assert_eq!(ns[2], expect_xi2);
    }
    // A = 0 reduces the covariant derivative to d
    let sigma = model.section(&random_section(&mut rng));
    let zero = model.field(&FieldParams {
        a1: Scalar::zero(3),
        a2: Scalar::zero(3),
        b1: Scalar::zero(3),
        b2: Scalar::zero(3),
    });
    let ns = nabla(m_calc, &rho_v, &sigma, &zero);
    for (ni, si) in ns.iter().zip(sigma.iter()) {
        assert_eq!(ni, &m_calc.d(si));
    }
}

#[test]
fn nabla_squared_is_minus_curvature_pairing() {
    let model = AnyonicModel::new();
    let m_calc = model.bundle().base_calculus();
    let rho_v = Coaction::coregular(model.hopf());
    let mut rng = ChaCha8Rng::seed_from_u64(131);
    for _ in 0..10 {
        let sigma = model.section(&random_section(&mut rng));
        let field = model.field(&random_params(&mut rng));
        let first = nabla(m_calc, &rho_v, &sigma, &field);
        let second = nabla(m_calc, &rho_v, &first, &field);
        let f = curvature(model.hopf(), m_calc, &field);
        let sf = section_times_curvature(m_calc, &rho_v, &sigma, &f);
        for (lhs, rhs) in second.iter().zip(sf.iter()) {
            let sum = lhs.add(rhs);
            assert!(sum.is_zero(), "nabla^2 + sigma * F = 0");
        }
    }
}

#[test]
fn section_transform_law_and_covariance() {
    let model = AnyonicModel::new();
    let m_calc = model.bundle().base_calculus();
    let rho_v = Coaction::coregular(model.hopf());
    let hopf = model.hopf();
    let mut rng = ChaCha8Rng::seed_from_u64(137);
    for _ in 0..10 {
        let sp = random_section(&mut rng);
        let cp = GaugeParams {
            c1: rat(&mut rng),
            c2: rat(&mut rng),
        };
        let sigma = model.section(&sp);
        let gauge = model.gauge(&cp).unwrap();
        let moved = transform_section(hopf, m_calc, &rho_v, &sigma, &gauge);
        let got = model.section_params(&moved);
        let two_q = model.two_q();
        assert_eq!(got.s0, sp.s0);
        assert_eq!(got.s1, &sp.s1 + &(&sp.s0 * &cp.c1));
        assert_eq!(
            got.s2,
            &(&sp.s2 + &(&sp.s0 * &cp.c2)) + &(&two_q * &(&sp.s1 * &cp.c1))
        );
        // identity gauge leaves sections alone
        let id = model
            .gauge(&GaugeParams {
                c1: Scalar::zero(3),
                c2: Scalar::zero(3),
            })
            .unwrap();
        assert_eq!(transform_section(hopf, m_calc, &rho_v, &sigma, &id), sigma);
        // covariance: nabla^gamma sigma^gamma = (nabla sigma)^gamma
        let field = model.field(&random_params(&mut rng));
        let lhs = nabla(
            m_calc,
            &rho_v,
            &moved,
            &transform_field(hopf, m_calc, &field, &gauge),
        );
        let rhs = transform_section(hopf, m_calc, &rho_v, &nabla(m_calc, &rho_v, &sigma, &field), &gauge);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn covariant_d_descends_to_nabla() {
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let rho_v = Coaction::coregular(model.hopf());
    let m_calc = model.bundle().base_calculus();
    let mut rng = ChaCha8Rng::seed_from_u64(139);
    for _ in 0..3 {
        let sigma = model.section(&random_section(&mut rng));
        let field = model.field(&random_params(&mut rng));
        let omega = connection_from_field(model.bundle(), model.trivialization(), &field);
        let pi = projection_from_connection(model.bundle(), &omega);
        let global = local_to_global(model.bundle(), model.trivialization(), &fiber, &sigma);
        let d_global = covariant_d(model.bundle(), &pi, &global);
        assert!(is_strongly_tensorial(model.bundle(), &d_global));
        let expect = local_to_global(
            model.bundle(),
            model.trivialization(),
            &fiber,
            &nabla(m_calc, &rho_v, &sigma, &field),
        );
        assert_eq!(d_global.values(), expect.values());
        // D^2 = - (sigma * F) * phi
        let dd = covariant_d(model.bundle(), &pi, &d_global);
        let f = curvature(model.hopf(), m_calc, &field);
        let sf = section_times_curvature(m_calc, &rho_v, &sigma, &f);
        let expect2 = local_to_global(model.bundle(), model.trivialization(), &fiber, &sf);
        for (a, b) in dd.values().iter().zip(expect2.values().iter()) {
            let sum: Vec<Scalar> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
            assert!(sum.iter().all(|c| c.is_zero()), "D^2 + (sigma F) phi = 0");
        }
    }
}

#[test]
fn covariant_d_of_degree_one_forms() {
    // spot check on one-form sections: D(sigma * phi) = (nabla sigma) * phi
    let model = AnyonicModel::new();
    let fiber = FiberComodule::coregular(model.hopf());
    let rho_v = Coaction::coregular(model.hopf());
    let m_calc = model.bundle().base_calculus();
    let omega1 = m_calc.omega(1);
    let mut rng = ChaCha8Rng::seed_from_u64(149);
    let mut sigma: Vec<Form> = Vec::new();
    for i in 0..3 {
        let degree_needed = model.hopf().space().degree(i);
        let mut coords = vec![Scalar::zero(3); omega1.dim()];
        for (k, row) in omega1.carrier().rows().iter().enumerate() {
            if omega1.ambient().homogeneous_degree(row) == Some(degree_needed) {
                coords[k] = rat(&mut rng);
            }
        }
        sigma.push(m_calc.form_from_ambient(1, &omega1.carrier().from_coordinates(&coords)));
    }
    let field = model.field(&random_params(&mut rng));
    let omega = connection_from_field(model.bundle(), model.trivialization(), &field);
    let pi = projection_from_connection(model.bundle(), &omega);
    let global = local_to_global(model.bundle(), model.trivialization(), &fiber, &sigma);
    let d_global = covariant_d(model.bundle(), &pi, &global);
    let expect = local_to_global(
        model.bundle(),
        model.trivialization(),
        &fiber,
        &nabla(m_calc, &rho_v, &sigma, &field),
    );
    assert_eq!(d_global.values(), expect.values());
}

#[test]
fn non_strongly_tensorial_forms_are_rejected_on_return() {
    // an equivariant adjoint-valued 1-form that is not horizontal cannot be
    // pulled back to a local section
    let model = AnyonicModel::new();
    let fiber = FiberComodule::adjoint(model.hopf()).unwrap();
    // difference of a strong connection and a connection that is not strong
    // is equivariant with vanishing galois image but not strongly tensorial;
    // simplest concrete instance: the non-horizontal equivariant component
    // of d phi(xi)
    let triv = model.trivialization();
    let omega0 = braidgauge::gauge::trivial_connection(model.bundle(), triv);
    let values: Vec<Vec<braidgauge::scalar::Scalar>> = (0..3)
        .map(|i| omega0.value(i).to_vec())
        .collect();
    let form = PseudoForm::new(1, values);
    assert!(is_pseudotensorial(model.bundle(), &fiber, &form));
    assert!(!is_strongly_tensorial(model.bundle(), &form));
    match global_to_local(model.bundle(), triv, &fiber, &form) {
        Err(braidgauge::gauge::GaugeError::NotStrong(msg)) => {
            assert!(msg.contains("not a base form"), "{msg}");
        }
        other => panic!("expected a strongness rejection, got {other:?}"),
    }
}
