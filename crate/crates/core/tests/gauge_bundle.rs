//! Principal-bundle machinery on the reference model: Galois maps, object
//! isomorphisms, connections, projections, and their correspondences.

use braidgauge::algebra::Coaction;
use braidgauge::forms::d_ambient;
use braidgauge::gauge::{
    check_connection, check_projection, connection_from_field, connection_from_projection,
    field_from_connection, projection_from_connection, trivial_bundle, trivial_connection,
    verify_principal, AnyonicModel, Bundle, Connection, FieldParams, GaugeError,
};
use braidgauge::graded::{image, kernel, GradedMap, GradedSpace, Subspace};
use braidgauge::models::{anyonic_hopf, anyonic_line, ground_field_hopf};
use braidgauge::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

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

#[test]
fn reference_bundle_is_principal() {
    let model = AnyonicModel::new();
    let report = verify_principal(model.bundle());
    assert!(report.passed(), "{report}");
    // invariants are spanned by the powers of the base generator
    let m = model.bundle().base_subspace();
    assert_eq!(m.dim(), 3);
    let p_space = model.bundle().total().space().clone();
    for name in ["1.1", "theta.1", "theta2.1"] {
        assert!(m.contains(&p_space.basis_vector(p_space.index_of(name).unwrap())));
    }
    // quotient dimension matches dim P * dim B through the Galois bijection
    assert_eq!(model.bundle().quotient_space().dim(), 27);
    assert_eq!(
        model.bundle().quotient_space().dim(),
        model.bundle().total().dim() * model.bundle().hopf().dim()
    );
}

#[test]
fn quotient_kills_the_defining_relations() {
    let model = AnyonicModel::new();
    let bundle = model.bundle();
    let p = bundle.total();
    let proj = bundle.quotient_projection();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        // random homogeneous triple p, m, p'
        let i = rng.gen_range(0..p.dim());
        let j = rng.gen_range(0..p.dim());
        let m_row = &bundle.base_subspace().rows()[rng.gen_range(0..3)];
        let pm = p.mul_vec(&p.space().basis_vector(i), m_row);
        let mp = p.mul_vec(m_row, &p.space().basis_vector(j));
        let mut v = vec![Scalar::zero(3); p.dim() * p.dim()];
        for (x, c) in pm.iter().enumerate() {
            if !c.is_zero() {
                v[x * p.dim() + j] += c;
            }
        }
        for (y, c) in mp.iter().enumerate() {
            if !c.is_zero() {
                v[i * p.dim() + y] -= c;
            }
        }
        assert!(proj.apply(&v).iter().all(|c| c.is_zero()));
    }
}

#[test]
fn chi_tilde_on_unit_tensor_is_the_coaction() {
    let model = AnyonicModel::new();
    let bundle = model.bundle();
    let p = bundle.total();
    for j in 0..p.dim() {
        let mut v = vec![Scalar::zero(3); p.dim() * p.dim()];
        v[0 * p.dim() + j] = one(); // 1 (x) p_j with the unit at index 0
        assert_eq!(
            bundle.chi_tilde().apply(&v),
            bundle.coaction().map().apply_basis(j)
        );
    }
}

#[test]
fn trivial_group_gives_the_base_itself() {
    let m = anyonic_line(3, "theta");
    let k = ground_field_hopf(3);
    let (bundle, _triv) = trivial_bundle(&m, &k).unwrap();
    assert_eq!(bundle.base_subspace().dim(), 3);
    assert!(verify_principal(&bundle).passed());
    assert_eq!(bundle.quotient_space().dim(), 3);
}

#[test]
fn coregular_total_space_has_scalar_invariants() {
    // P = B with the coregular coaction: invariants are the scalars
    let hopf = anyonic_hopf();
    let p = Arc::new(hopf.algebra().clone());
    let rho = Coaction::coregular(&hopf);
    let bundle = Bundle::new(p, rho).unwrap();
    assert_eq!(bundle.base_subspace().dim(), 1);
    assert!(verify_principal(&bundle).passed());
}

#[test]
fn trivial_coaction_with_nontrivial_group_is_not_principal() {
    let m = anyonic_line(3, "theta");
    let hopf = anyonic_hopf();
    let p = Arc::new(m.clone());
    let rho = Coaction::trivial(m.space(), &hopf);
    let bundle = Bundle::new(p, rho).unwrap();
    assert!(bundle.chi_inv().is_none());
    let report = verify_principal(&bundle);
    assert!(!report.passed());
    assert_eq!(
        report.first_failure().unwrap().name,
        "galois map bijective"
    );
}

#[test]
fn object_isomorphism_round_trips() {
    let model = AnyonicModel::new();
    let (theta, theta_inv) = model.object_iso();
    let p_space = model.bundle().total().space().clone();
    assert_eq!(theta_inv.compose(theta), GradedMap::identity(theta.dom()));
    assert_eq!(theta.compose(theta_inv), GradedMap::identity(&p_space));
    // theta(t (x) xi) = t xi in the total space
    let mb = theta.dom().clone();
    let col = mb.index_of("theta.1.xi").unwrap();
    let img = theta.apply_basis(col);
    let expect_idx = p_space.index_of("theta.xi").unwrap();
    assert!(img[expect_idx].is_one());
    assert_eq!(img.iter().filter(|c| !c.is_zero()).count(), 1);
}

#[test]
fn trivial_connection_passes_all_three_conditions() {
    let model = AnyonicModel::new();
    let omega0 = trivial_connection(model.bundle(), model.trivialization());
    let report = check_connection(model.bundle(), &omega0);
    assert!(report.passed(), "{report}");
    let pi = projection_from_connection(model.bundle(), &omega0);
    let report = check_projection(model.bundle(), &pi);
    assert!(report.passed(), "{report}");
}

#[test]
fn zero_connection_fails_the_galois_image_condition() {
    let model = AnyonicModel::new();
    let p = model.bundle().total();
    let zero = Connection::from_ambient_values(
        model.bundle(),
        vec![vec![Scalar::zero(3); p.dim() * p.dim()]; 3],
    );
    let report = check_connection(model.bundle(), &zero);
    let entry = report
        .entries
        .iter()
        .find(|e| e.name == "galois image condition")
        .unwrap();
    assert!(!entry.pass);
}

#[test]
fn connection_of_unit_field_matches_the_hand_expansion() {
    // A = (1, 0, 0, 0): omega(xi) = d phi(xi) + dt as total-space forms
    let model = AnyonicModel::new();
    let field = model.field(&FieldParams {
        a1: one(),
        a2: Scalar::zero(3),
        b1: Scalar::zero(3),
        b2: Scalar::zero(3),
    });
    let omega = connection_from_field(model.bundle(), model.trivialization(), &field);
    let p = model.bundle().total();
    let ps = p.space().clone();
    let dp = p.dim();
    let phi_xi = ps.index_of("1.xi").unwrap();
    let theta = ps.index_of("theta.1").unwrap();
    let mut expect = vec![Scalar::zero(3); dp * dp];
    expect[0 * dp + phi_xi] += &one();
    expect[phi_xi * dp + 0] -= &one();
    expect[0 * dp + theta] += &one();
    expect[theta * dp + 0] -= &one();
    assert_eq!(omega.value(1), &expect[..]);
}

#[test]
fn connections_from_random_fields_pass_and_round_trip() {
    let model = AnyonicModel::new();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let params = random_params(&mut rng);
        let field = model.field(&params);
        let omega = connection_from_field(model.bundle(), model.trivialization(), &field);
        let report = check_connection(model.bundle(), &omega);
        assert!(report.passed(), "{report}");
        let back = field_from_connection(model.bundle(), model.trivialization(), &omega).unwrap();
        assert_eq!(back, field);
        assert_eq!(model.field_params(&back), params);
        // projection round trip
        let pi = projection_from_connection(model.bundle(), &omega);
        assert!(check_projection(model.bundle(), &pi).passed());
        let omega_back = connection_from_projection(model.bundle(), &pi).unwrap();
        assert_eq!(omega_back, omega);
    }
}

#[test]
fn trivial_connection_recovers_the_zero_field() {
    let model = AnyonicModel::new();
    let omega0 = trivial_connection(model.bundle(), model.trivialization());
    let field = field_from_connection(model.bundle(), model.trivialization(), &omega0).unwrap();
    assert!(field.is_zero());
}

#[test]
fn differences_of_strong_connections_are_killed_by_chi_tilde() {
    let model = AnyonicModel::new();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..5 {
        let f1 = model.field(&random_params(&mut rng));
        let f2 = model.field(&random_params(&mut rng));
        let o1 = connection_from_field(model.bundle(), model.trivialization(), &f1);
        let o2 = connection_from_field(model.bundle(), model.trivialization(), &f2);
        let alpha = o1.sub(&o2);
        for v in alpha.values() {
            assert!(model
                .bundle()
                .chi_tilde()
                .apply(v)
                .iter()
                .all(|c| c.is_zero()));
        }
    }
}

/// Solve for all equivariant alpha with chi_tilde . alpha = 0 and
/// alpha(1) = 0; the solution space is strictly larger than the strong
/// differences, exhibiting a non-strong connection.
#[test]
fn a_non_strong_connection_exists_and_is_rejected() {
    let model = AnyonicModel::new();
    let bundle = model.bundle();
    let p = bundle.total();
    let hopf = model.hopf();
    let dp2 = p.dim() * p.dim();
    let db = hopf.dim();
    let unknowns = 2 * dp2; // alpha(xi), alpha(xi^2) ambient
    let n = 3;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut push_row = |row: Vec<Scalar>| rows.push(row);
    let pp = GradedSpace::tensor_power(p.space(), 2);
    // degree homogeneity: alpha(xi) concentrated in degree 1, alpha(xi^2) in 2
    for (slot, want) in [(0usize, 1u32), (1, 2)] {
        for k in 0..dp2 {
            if pp.degree(k) != want {
                let mut row = vec![Scalar::zero(n); unknowns];
                row[slot * dp2 + k] = one();
                push_row(row);
            }
        }
    }
    // membership in Omega^1 P and chi_tilde . alpha = 0
    for slot in 0..2 {
        for out in 0..p.dim() {
            let mut row = vec![Scalar::zero(n); unknowns];
            for k in 0..dp2 {
                let v = braidgauge::forms::slot_mult(p, 2, 0, &pp.basis_vector(k));
                row[slot * dp2 + k] = v[out].clone();
            }
            push_row(row);
        }
        for out in 0..p.dim() * db {
            let mut row = vec![Scalar::zero(n); unknowns];
            for k in 0..dp2 {
                row[slot * dp2 + k] = bundle.chi_tilde().apply_basis(k)[out].clone();
            }
            push_row(row);
        }
    }
    // adjoint equivariance per structure-group generator
    let rho2 = bundle.tensor_square_coaction();
    for (slot, b) in [(0usize, 1usize), (1, 2)] {
        let ad_terms = bundle.adjoint().terms(b);
        for out in 0..dp2 * db {
            let mut row = vec![Scalar::zero(n); unknowns];
            for k in 0..dp2 {
                row[slot * dp2 + k] += &rho2.apply_basis(k)[out];
            }
            let (pp_idx, b_idx) = (out / db, out % db);
            for (l, r, c) in &ad_terms {
                if *r == b_idx && *l >= 1 {
                    row[(l - 1) * dp2 + pp_idx] -= c;
                }
            }
            push_row(row);
        }
    }
    // nullspace through a degree-0 wrapper space
    let fake = GradedSpace::new(3, (0..unknowns).map(|i| (format!("u{i}"), 0u32)).collect())
        .unwrap();
    let fake_out =
        GradedSpace::new(3, (0..rows.len()).map(|i| (format!("r{i}"), 0u32)).collect()).unwrap();
    let mat = GradedMap::new(fake.clone(), fake_out, 0, rows).unwrap();
    let solutions = kernel(&mat);

    // strong differences span a 4-dimensional subspace
    let omega0 = trivial_connection(bundle, model.trivialization());
    let mut strong = Subspace::zero(&fake);
    let mut basis_fields = Vec::new();
    for i in 0..4 {
        let mut p4 = [
            Scalar::zero(3),
            Scalar::zero(3),
            Scalar::zero(3),
            Scalar::zero(3),
        ];
        p4[i] = one();
        basis_fields.push(FieldParams {
            a1: p4[0].clone(),
            a2: p4[1].clone(),
            b1: p4[2].clone(),
            b2: p4[3].clone(),
        });
    }
    for params in &basis_fields {
        let omega = connection_from_field(bundle, model.trivialization(), &model.field(params));
        let alpha = omega.sub(&omega0);
        let mut v = Vec::with_capacity(unknowns);
        v.extend(alpha.value(1).iter().cloned());
        v.extend(alpha.value(2).iter().cloned());
        strong.insert(v);
    }
    assert_eq!(strong.dim(), 4);
    assert!(solutions.dim() > strong.dim(), "only strong differences found");
    // pick a solution outside the strong subspace and build the connection
    let extra = solutions
        .rows()
        .iter()
        .find(|r| !strong.contains(r))
        .expect("a non-strong direction");
    let alpha_values = vec![
        vec![Scalar::zero(3); dp2],
        extra[..dp2].to_vec(),
        extra[dp2..].to_vec(),
    ];
    let omega = Connection::from_ambient_values(bundle, alpha_values).add(&omega0);
    let report = check_connection(bundle, &omega);
    let strongness = report
        .entries
        .iter()
        .find(|e| e.name == "strongness")
        .unwrap();
    assert!(!strongness.pass, "constructed connection should not be strong");
    for name in ["galois image condition", "adjoint equivariance"] {
        assert!(report.entries.iter().find(|e| e.name == name).unwrap().pass);
    }
    match field_from_connection(bundle, model.trivialization(), &omega) {
        Err(GaugeError::NotStrong(_)) => {}
        other => panic!("expected a strongness rejection, got {other:?}"),
    }
}

#[test]
fn projection_kernel_matches_rank_count() {
    let model = AnyonicModel::new();
    let omega0 = trivial_connection(model.bundle(), model.trivialization());
    let pi = projection_from_connection(model.bundle(), &omega0);
    // rank on the one-form carrier equals codim of the horizontal forms
    let omega1 = model.bundle().total_calculus().omega(1);
    let mut im = Subspace::zero(pi.cod());
    for row in omega1.carrier().rows() {
        im.insert(pi.apply(row));
    }
    assert_eq!(im.dim(), omega1.dim() - model.bundle().horizontal_two_sided().dim());
    let _ = image(&pi);
    let _ = d_ambient(model.bundle().total(), 0, &model.bundle().total().unit().to_vec());
}

#[test]
fn scalar_invariants_quotient_has_full_size() {
    // M = k 1 makes the tensor product over M the plain tensor square
    let hopf = anyonic_hopf();
    let p = Arc::new(hopf.algebra().clone());
    let rho = Coaction::coregular(&hopf);
    let bundle = Bundle::new(p, rho).unwrap();
    assert_eq!(bundle.base_subspace().dim(), 1);
    assert_eq!(
        bundle.quotient_space().dim(),
        bundle.total().dim() * bundle.total().dim()
    );
}

#[test]
fn single_adjacent_multiplication_kernel_dimension() {
    // mult (x) id on the triple tensor power of the base has an
    // 18-dimensional kernel: multiplication is surjective, so the rank is
    // dim M^2
    let m = anyonic_line(3, "theta");
    let m3 = GradedSpace::tensor_power(m.space(), 3);
    let m2 = GradedSpace::tensor_power(m.space(), 2);
    let images: Vec<Vec<Scalar>> = (0..m3.dim())
        .map(|i| braidgauge::forms::slot_mult(&m, 3, 0, &m3.basis_vector(i)))
        .collect();
    let map = GradedMap::from_images(m3, m2, 0, images).unwrap();
    assert_eq!(kernel(&map).dim(), 18);
}
