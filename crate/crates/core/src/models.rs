//! Builders for the reference structures: the anyonic line k[t]/t^n with its
//! generator in degree 1, the 3-dimensional anyonic braided group, and the
//! dual numbers k[x]/x^2 in degree 0.

use crate::algebra::{Algebra, Hopf};
use crate::graded::{GradedMap, GradedSpace, SpaceRef};
use crate::scalar::Scalar;
use std::sync::Arc;

fn power_name(stem: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => stem.to_string(),
        _ => format!("{stem}{k}"),
    }
}

/// k[stem]/stem^n with the generator in degree 1, graded mod n.
pub fn anyonic_line(n: u32, stem: &str) -> Algebra {
    let basis: Vec<(String, u32)> = (0..n as usize)
        .map(|k| (power_name(stem, k), k as u32 % n))
        .collect();
    let space = GradedSpace::new(n, basis).unwrap();
    let mut products = Vec::new();
    for a in 1..n as usize {
        for b in 1..n as usize {
            let img = if a + b < n as usize {
                space.basis_vector(a + b)
            } else {
                space.zero_vector()
            };
            products.push((a, b, img));
        }
    }
    Algebra::from_table(space, 0, &products)
}

/// The anyonic structure group: k[xi]/xi^3 with primitive generator,
/// counit eps(xi) = 0 and antipode S(xi) = -xi, S(xi^2) = q xi^2.
pub fn anyonic_hopf() -> Arc<Hopf> {
    let n = 3;
    let algebra = anyonic_line(n, "xi");
    let b = algebra.space().clone();
    let one = Scalar::one(n);
    let q = Scalar::root_of_unity(n);
    let bb = GradedSpace::tensor(&b, &b);
    let term = |i: usize, j: usize| i * 3 + j;
    let mut comul_images = vec![bb.zero_vector(), bb.zero_vector(), bb.zero_vector()];
    comul_images[0][term(0, 0)] = one.clone();
    comul_images[1][term(1, 0)] = one.clone();
    comul_images[1][term(0, 1)] = one.clone();
    comul_images[2][term(2, 0)] = one.clone();
    comul_images[2][term(1, 1)] = &one + &q;
    comul_images[2][term(0, 2)] = one.clone();
    let comul = GradedMap::from_images(b.clone(), bb, 0, comul_images).unwrap();
    let unit_space = GradedSpace::unit(n);
    let counit = GradedMap::from_images(
        b.clone(),
        unit_space,
        0,
        vec![
            vec![one.clone()],
            vec![Scalar::zero(n)],
            vec![Scalar::zero(n)],
        ],
    )
    .unwrap();
    let antipode = GradedMap::from_images(
        b.clone(),
        b.clone(),
        0,
        vec![
            b.basis_vector(0),
            b.basis_vector(1).iter().map(|c| -c).collect(),
            b.basis_vector(2).iter().map(|c| c * &q).collect(),
        ],
    )
    .unwrap();
    Arc::new(Hopf::new(algebra, comul, counit, antipode, None))
}

/// The dual numbers k[x]/x^2, concentrated in degree 0 (graded mod n).
pub fn dual_numbers(n: u32) -> Algebra {
    let space = GradedSpace::new(n, vec![("1", 0u32), ("x", 0)]).unwrap();
    let zero = space.zero_vector();
    Algebra::from_table(space, 0, &[(1, 1, zero)])
}

/// The ground field as an algebra on the tensor unit.
pub fn ground_field(n: u32) -> Algebra {
    let space = GradedSpace::unit(n);
    Algebra::from_table(space, 0, &[])
}

/// The ground field as a (trivial) braided group.
pub fn ground_field_hopf(n: u32) -> Arc<Hopf> {
    let algebra = ground_field(n);
    let b = algebra.space().clone();
    let bb = GradedSpace::tensor(&b, &b);
    let one = Scalar::one(n);
    let comul = GradedMap::from_images(b.clone(), bb, 0, vec![vec![one.clone()]]).unwrap();
    let counit = GradedMap::identity(&b);
    let antipode = GradedMap::identity(&b);
    Arc::new(Hopf::new(algebra, comul, counit, antipode, None))
}

/// Ambient helper: the space of k[t]/t^3 style lines.
pub fn line_space(n: u32, stem: &str) -> SpaceRef {
    anyonic_line(n, stem).space().clone()
}
