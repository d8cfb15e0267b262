//! Associated fiber bundles: the fixed-point subspace of P (x) V under the
//! braided tensor coaction, cross sections, pseudotensorial and strongly
//! tensorial forms, local sections, and the covariant derivatives on both.

use crate::algebra::{Algebra, Coaction, Hopf};
use crate::forms::{act_ambient, d_ambient, wedge_ambient, Calculus, Form};
use crate::gauge::{Bundle, GaugeError, GaugeField, Trivialization};
use crate::graded::{braiding, braiding_inverse, kernel, GradedMap, GradedSpace, SpaceRef, Subspace};
use crate::scalar::Scalar;
use std::fmt;
use std::sync::Arc;

/// A fiber: a comodule with a fixed point of the coaction serving as unit.
#[derive(Clone)]
pub struct FiberComodule {
    rho_v: Coaction,
    unit_point: Vec<Scalar>,
}

impl fmt::Debug for FiberComodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiberComodule(dim {})", self.rho_v.carrier().dim())
    }
}

impl FiberComodule {
    pub fn new(rho_v: Coaction, unit_point: Vec<Scalar>) -> Result<FiberComodule, GaugeError> {
        assert_eq!(unit_point.len(), rho_v.carrier().dim());
        // the unit point must be fixed: rho(eta) = eta (x) 1
        let db = rho_v.hopf().dim();
        let mut expect = vec![Scalar::zero(rho_v.carrier().modulus()); rho_v.carrier().dim() * db];
        for (i, c) in unit_point.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, u) in rho_v.hopf().algebra().unit().iter().enumerate() {
                if !u.is_zero() {
                    expect[i * db + j] += &(c * u);
                }
            }
        }
        if rho_v.map().apply(&unit_point) != expect {
            return Err(GaugeError::Validation(
                "fiber unit point is fixed under the coaction".to_string(),
            ));
        }
        Ok(FiberComodule { rho_v, unit_point })
    }

    /// The structure group as its own fiber under the coregular coaction.
    pub fn coregular(hopf: &Arc<Hopf>) -> FiberComodule {
        let rho = Coaction::coregular(hopf);
        let unit = hopf.algebra().unit().to_vec();
        FiberComodule::new(rho, unit).expect("unit is a fixed point of the coproduct")
    }

    /// The structure group under the adjoint coaction.
    pub fn adjoint(hopf: &Arc<Hopf>) -> Result<FiberComodule, GaugeError> {
        let rho = crate::algebra::adjoint_coaction(hopf)?;
        let unit = hopf.algebra().unit().to_vec();
        FiberComodule::new(rho, unit)
    }

    pub fn space(&self) -> &SpaceRef {
        self.rho_v.carrier()
    }

    pub fn coaction(&self) -> &Coaction {
        &self.rho_v
    }

    pub fn unit_point(&self) -> &[Scalar] {
        &self.unit_point
    }
}

/// The associated bundle E = fixed points of P (x) V, with the induced map
/// from the base.
pub struct AssociatedBundle {
    fiber: FiberComodule,
    ambient: SpaceRef,
    carrier: Subspace,
    coaction_pv: GradedMap,
    unit: Vec<Scalar>,
}

impl fmt::Debug for AssociatedBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AssociatedBundle(dim {})", self.carrier.dim())
    }
}

/// The braided tensor coaction on P (x) V.
pub fn tensor_coaction(bundle: &Bundle, fiber: &FiberComodule) -> GradedMap {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let v = fiber.space();
    let dp = p.dim();
    let dv = v.dim();
    let db = hopf.dim();
    let psi = braiding(hopf.space(), v);
    let n = p.modulus();
    let pv = GradedSpace::tensor(p.space(), v);
    let cod = GradedSpace::tensor(&pv, hopf.space());
    let mut images = Vec::with_capacity(dp * dv);
    for x in 0..dp {
        for y in 0..dv {
            let mut img = cod.zero_vector();
            for (x0, x1, cx) in bundle.coaction().terms(x) {
                for (y0, y1, cy) in fiber.coaction().terms(y) {
                    let braided = psi.apply_basis(x1 * dv + y0);
                    for (bi, cb) in braided.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let (vv, xx) = (bi / db, bi % db);
                        let prod = hopf.algebra().mul_basis(xx, y1);
                        let coeff = &(&cx * &cy) * cb;
                        for (t, pc) in prod.iter().enumerate() {
                            if !pc.is_zero() {
                                img[(x0 * dv + vv) * db + t] += &(&coeff * pc);
                            }
                        }
                    }
                }
            }
            images.push(img);
            let _ = n;
        }
    }
    GradedMap::from_images(pv, cod, 0, images).expect("tensor coaction is graded")
}

/// E as the kernel of (tensor coaction) - (id (x) unit).
pub fn associated_bundle(bundle: &Bundle, fiber: FiberComodule) -> AssociatedBundle {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let coaction_pv = tensor_coaction(bundle, &fiber);
    let pv = coaction_pv.dom().clone();
    let db = hopf.dim();
    let n = p.modulus();
    // id (x) unit as a map P (x) V -> P (x) V (x) B
    let mut images = Vec::with_capacity(pv.dim());
    for i in 0..pv.dim() {
        let mut img = coaction_pv.cod().zero_vector();
        for (j, u) in hopf.algebra().unit().iter().enumerate() {
            if !u.is_zero() {
                img[i * db + j] = u.clone();
            }
        }
        images.push(img);
        let _ = n;
    }
    let triv = GradedMap::from_images(pv.clone(), coaction_pv.cod().clone(), 0, images).unwrap();
    let carrier = kernel(&coaction_pv.sub(&triv));
    // the unit of E is the image of the base unit: 1_P (x) eta_V
    let mut unit = pv.zero_vector();
    let dv = fiber.space().dim();
    for (i, c) in p.unit().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, u) in fiber.unit_point().iter().enumerate() {
            if !u.is_zero() {
                unit[i * dv + j] += &(c * u);
            }
        }
    }
    assert!(carrier.contains(&unit), "unit lies in the fixed points");
    AssociatedBundle {
        fiber,
        ambient: pv,
        carrier,
        coaction_pv,
        unit,
    }
}

impl AssociatedBundle {
    pub fn fiber(&self) -> &FiberComodule {
        &self.fiber
    }

    pub fn ambient(&self) -> &SpaceRef {
        &self.ambient
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn coaction(&self) -> &GradedMap {
        &self.coaction_pv
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Left action of the total space on P (x) V (multiplying the P leg),
    /// used through the base inclusion for the module structure over M.
    pub fn act_left(&self, p_alg: &Algebra, x: &[Scalar], e: &[Scalar]) -> Vec<Scalar> {
        let dv = self.fiber.space().dim();
        let dp = p_alg.dim();
        let n = p_alg.modulus();
        let mut out = vec![Scalar::zero(n); dp * dv];
        for (idx, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, v) = (idx / dv, idx % dv);
            let prod = p_alg.mul_vec(x, &p_alg.space().basis_vector(i));
            for (k, pc) in prod.iter().enumerate() {
                if !pc.is_zero() {
                    out[k * dv + v] += &(c * pc);
                }
            }
        }
        out
    }
}

/// The mutually inverse maps P -> E -> P for the coregular fiber:
/// (id (x) S) . rho and id (x) eps.
pub fn coregular_iso(bundle: &Bundle, assoc: &AssociatedBundle) -> (GradedMap, GradedMap) {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let db = hopf.dim();
    let n = p.modulus();
    let forward_images: Vec<Vec<Scalar>> = (0..p.dim())
        .map(|j| {
            let mut img = vec![Scalar::zero(n); p.dim() * db];
            for (p0, p1, c) in bundle.coaction().terms(j) {
                for (k, sc) in hopf.antipode().apply_basis(p1).iter().enumerate() {
                    if !sc.is_zero() {
                        img[p0 * db + k] += &(&c * sc);
                    }
                }
            }
            img
        })
        .collect();
    let forward = GradedMap::from_images(
        p.space().clone(),
        assoc.ambient().clone(),
        0,
        forward_images,
    )
    .unwrap();
    let backward_images: Vec<Vec<Scalar>> = (0..assoc.ambient().dim())
        .map(|idx| {
            let (i, v) = (idx / db, idx % db);
            let eps = hopf.counit_of(&hopf.space().basis_vector(v));
            p.space()
                .basis_vector(i)
                .iter()
                .map(|c| c * &eps)
                .collect()
        })
        .collect();
    let backward = GradedMap::from_images(
        assoc.ambient().clone(),
        p.space().clone(),
        0,
        backward_images,
    )
    .unwrap();
    (forward, backward)
}

/// A pseudotensorial form: one ambient n-form on the total space per fiber
/// basis vector, intertwining the coactions.
#[derive(Clone, PartialEq, Eq)]
pub struct PseudoForm {
    degree: usize,
    values: Vec<Vec<Scalar>>,
}

impl fmt::Debug for PseudoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PseudoForm(degree {}, {} components)",
            self.degree,
            self.values.len()
        )
    }
}

impl PseudoForm {
    pub fn new(degree: usize, values: Vec<Vec<Scalar>>) -> PseudoForm {
        PseudoForm { degree, values }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[Scalar] {
        &self.values[i]
    }
}

/// The coaction on the (n+1)-fold tensor power of the total space applied to
/// one ambient vector.
pub fn power_coaction(bundle: &Bundle, k: usize, v: &[Scalar]) -> Vec<Scalar> {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let dp = p.dim();
    let db = hopf.dim();
    let n = p.modulus();
    // terms: (tensor index, group index, coeff), folded leg by leg
    let mut terms: Vec<(usize, usize, Scalar)> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(idx, c)| (idx, 0usize, c.clone()))
        .collect();
    // normalize the group leg to the unit index decomposition
    let unit = hopf.algebra().unit();
    let unit_terms: Vec<(usize, Scalar)> = unit
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, c.clone()))
        .collect();
    let mut seeded = Vec::new();
    for (idx, _, c) in terms.drain(..) {
        for (j, u) in &unit_terms {
            seeded.push((idx, *j, &c * u));
        }
    }
    terms = seeded;
    let psi = braiding(hopf.space(), p.space());
    for slot in (0..k).rev() {
        let mut next: Vec<(usize, usize, Scalar)> = Vec::new();
        let stride = dp.pow((k - 1 - slot) as u32);
        for (idx, g, c) in &terms {
            let factor = (idx / stride) % dp;
            let rest = idx - factor * stride;
            for (f0, f1, cf) in bundle.coaction().terms(factor) {
                // braid f1 past the group leg accumulated so far? the legs
                // to the right of this slot have already contributed; fold
                // right-to-left so the new group leg multiplies from the left
                // after braiding past the remaining P legs to its right.
                // Right-to-left folding keeps the braiding local: the new
                // group leg must cross the already-processed P legs, which
                // sit to the right of this slot in positions slot+1..k.
                let mut carriers: Vec<(usize, usize, Scalar)> =
                    vec![(rest + f0 * stride, f1, c * &cf)];
                // cross the group leg over each later P leg
                for later in (slot + 1)..k {
                    let lstride = dp.pow((k - 1 - later) as u32);
                    let mut moved = Vec::new();
                    for (tidx, tg, tc) in carriers.drain(..) {
                        let lfac = (tidx / lstride) % dp;
                        let без = tidx - lfac * lstride;
                        for (bi, cb) in psi.apply_basis(tg * dp + lfac).iter().enumerate() {
                            if cb.is_zero() {
                                continue;
                            }
                            let (newp, newg) = (bi / db, bi % db);
                            moved.push((без + newp * lstride, newg, &tc * cb));
                        }
                    }
                    carriers = moved;
                }
                for (tidx, tg, tc) in carriers {
                    // multiply the braided group leg onto the accumulated one
                    let prod = hopf.algebra().mul_basis(tg, *g);
                    for (t, pc) in prod.iter().enumerate() {
                        if !pc.is_zero() {
                            next.push((tidx, t, &tc * pc));
                        }
                    }
                }
            }
        }
        terms = next;
    }
    let mut out = vec![Scalar::zero(n); dp.pow(k as u32) * db];
    for (idx, g, c) in terms {
        out[idx * db + g] += &c;
    }
    out
}

/// Equivariance of a pseudotensorial form: the power coaction after the form
/// equals the form after the fiber coaction.
pub fn is_pseudotensorial(bundle: &Bundle, fiber: &FiberComodule, form: &PseudoForm) -> bool {
    let hopf = bundle.hopf();
    let db = hopf.dim();
    let k = form.degree() + 1;
    let dp_k = bundle.total().dim().pow(k as u32);
    for i in 0..fiber.space().dim() {
        let lhs = power_coaction(bundle, k, form.value(i));
        let mut rhs = vec![Scalar::zero(3); dp_k * db];
        for (v0, v1, c) in fiber.coaction().terms(i) {
            for (x, y) in form.value(v0).iter().enumerate() {
                if !y.is_zero() {
                    rhs[x * db + v1] += &(&c * y);
                }
            }
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Whether every component factors through (Omega^n M) P.
pub fn is_strongly_tensorial(bundle: &Bundle, form: &PseudoForm) -> bool {
    if form.degree() == 0 {
        return true;
    }
    if form.degree() == 1 {
        return form
            .values()
            .iter()
            .all(|v| bundle.horizontal_right().contains(v));
    }
    // higher degrees: (Omega^n M) P spanned by base n-forms right-multiplied
    // into the total space
    let p = bundle.total();
    let m_calc = bundle.base_calculus();
    let omega_m = m_calc.omega(form.degree());
    let pushed = push_power(bundle, omega_m.carrier().rows(), form.degree() + 1);
    let amb = GradedSpace::tensor_power(p.space(), form.degree() + 1);
    let mut span = Subspace::zero(&amb);
    for u in &pushed {
        for j in 0..p.dim() {
            span.insert(act_ambient(p, form.degree(), &p.space().basis_vector(j), u, false));
        }
    }
    form.values().iter().all(|v| span.contains(v))
}

/// Push base tensor-power vectors into the total space along the inclusion.
pub fn push_power(bundle: &Bundle, rows: &[Vec<Scalar>], k: usize) -> Vec<Vec<Scalar>> {
    let incl = bundle.base_inclusion();
    let dm = incl.dom().dim();
    let dp = incl.cod().dim();
    let n = incl.dom().modulus();
    rows.iter()
        .map(|row| {
            let mut out = vec![Scalar::zero(n); dp.pow(k as u32)];
            for (idx, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let factors = crate::forms::unrank(idx, k, dm);
                // expand each factor through the inclusion
                let mut partial: Vec<(usize, Scalar)> = vec![(0usize, c.clone())];
                for f in factors {
                    let img = incl.apply_basis(f);
                    let mut next = Vec::new();
                    for (acc, ac) in &partial {
                        for (t, tc) in img.iter().enumerate() {
                            if !tc.is_zero() {
                                next.push((acc * dp + t, ac * tc));
                            }
                        }
                    }
                    partial = next;
                }
                for (i, v) in partial {
                    out[i] += &v;
                }
            }
            out
        })
        .collect()
}

/// sigma * phi: the strongly tensorial form of a local section through the
/// fiber coaction.
pub fn local_to_global(
    bundle: &Bundle,
    triv: &Trivialization,
    fiber: &FiberComodule,
    sigma: &[Form],
) -> PseudoForm {
    let p = bundle.total();
    let deg = sigma[0].degree();
    let n = p.modulus();
    let pushed: Vec<Vec<Scalar>> = push_power(
        bundle,
        &sigma.iter().map(|s| s.ambient_vector()).collect::<Vec<_>>(),
        deg + 1,
    );
    let values = (0..fiber.space().dim())
        .map(|i| {
            let mut acc = vec![Scalar::zero(n); p.dim().pow((deg + 1) as u32)];
            for (v0, v1, c) in fiber.coaction().terms(i) {
                let w = wedge_ambient(p, deg, &pushed[v0], 0, &triv.phi().apply_basis(v1));
                for (x, y) in acc.iter_mut().zip(w.iter()) {
                    if !y.is_zero() {
                        *x += &(&c * y);
                    }
                }
            }
            acc
        })
        .collect();
    PseudoForm::new(deg, values)
}

/// Sigma * phi_inv: recover the local section of a strongly tensorial form;
/// components outside the base forms are rejected.
pub fn global_to_local(
    bundle: &Bundle,
    triv: &Trivialization,
    fiber: &FiberComodule,
    form: &PseudoForm,
) -> Result<Vec<Form>, GaugeError> {
    let p = bundle.total();
    let deg = form.degree();
    let n = p.modulus();
    let m_calc = bundle.base_calculus();
    let mut out = Vec::with_capacity(fiber.space().dim());
    for i in 0..fiber.space().dim() {
        let mut acc = vec![Scalar::zero(n); p.dim().pow((deg + 1) as u32)];
        for (v0, v1, c) in fiber.coaction().terms(i) {
            let w = wedge_ambient(p, deg, form.value(v0), 0, &triv.phi_inv().apply_basis(v1));
            for (x, y) in acc.iter_mut().zip(w.iter()) {
                if !y.is_zero() {
                    *x += &(&c * y);
                }
            }
        }
        let pulled = pull_power(bundle, &acc, deg + 1).ok_or_else(|| {
            GaugeError::NotStrong(format!(
                "section component at {} is not a base form",
                fiber.space().name(i)
            ))
        })?;
        out.push(m_calc.form_from_ambient(deg, &pulled));
    }
    Ok(out)
}

/// Express a total-space tensor-power vector in base coordinates when it
/// lies in the image of the inclusion power.
pub fn pull_power(bundle: &Bundle, v: &[Scalar], k: usize) -> Option<Vec<Scalar>> {
    let incl = bundle.base_inclusion();
    let dm = incl.dom().dim();
    let rows: Vec<Vec<Scalar>> = (0..dm.pow(k as u32))
        .map(|idx| {
            let mut unit = vec![Scalar::zero(incl.dom().modulus()); dm.pow(k as u32)];
            unit[idx] = Scalar::one(incl.dom().modulus());
            unit
        })
        .collect();
    let pushed = push_power(bundle, &rows, k);
    // solve sum_j coords_j pushed_j = v
    let cols = v.len();
    let eq_rows: Vec<Vec<Scalar>> = (0..cols)
        .map(|r| pushed.iter().map(|p| p[r].clone()).collect())
        .collect();
    let coords = crate::algebra::solve_dense(&eq_rows, v)?;
    // confirm
    let n = incl.dom().modulus();
    let mut check = vec![Scalar::zero(n); cols];
    for (c, p) in coords.iter().zip(pushed.iter()) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in check.iter_mut().zip(p.iter()) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }
    if check == v.to_vec() {
        Some(coords)
    } else {
        None
    }
}

/// Covariant derivative on local sections:
/// nabla sigma = d sigma + (-1)^(n+1) sigma * A.
pub fn nabla(
    m_calc: &Calculus,
    fiber_rho: &Coaction,
    sigma: &[Form],
    field: &GaugeField,
) -> Vec<Form> {
    let m = m_calc.algebra().as_ref();
    let deg = sigma[0].degree();
    let sign_minus = deg % 2 == 0;
    (0..fiber_rho.carrier().dim())
        .map(|i| {
            let mut acc = d_ambient(m, deg, &sigma[i].ambient_vector());
            for (v0, v1, c) in fiber_rho.terms(i) {
                let w = wedge_ambient(
                    m,
                    deg,
                    &sigma[v0].ambient_vector(),
                    1,
                    &field.value(v1).ambient_vector(),
                );
                for (x, y) in acc.iter_mut().zip(w.iter()) {
                    if !y.is_zero() {
                        if sign_minus {
                            *x -= &(&c * y);
                        } else {
                            *x += &(&c * y);
                        }
                    }
                }
            }
            m_calc.form_from_ambient(deg + 1, &acc)
        })
        .collect()
}

/// sigma * F through the fiber coaction, as ambient base 2+n forms.
pub fn section_times_curvature(
    m_calc: &Calculus,
    fiber_rho: &Coaction,
    sigma: &[Form],
    curv: &[Form],
) -> Vec<Form> {
    let m = m_calc.algebra().as_ref();
    let deg = sigma[0].degree();
    let n = m.modulus();
    (0..fiber_rho.carrier().dim())
        .map(|i| {
            let mut acc = vec![Scalar::zero(n); m.dim().pow((deg + 3) as u32)];
            for (v0, v1, c) in fiber_rho.terms(i) {
                let w = wedge_ambient(
                    m,
                    deg,
                    &sigma[v0].ambient_vector(),
                    2,
                    &curv[v1].ambient_vector(),
                );
                for (x, y) in acc.iter_mut().zip(w.iter()) {
                    if !y.is_zero() {
                        *x += &(&c * y);
                    }
                }
            }
            m_calc.form_from_ambient(deg + 2, &acc)
        })
        .collect()
}

/// The covariant derivative on pseudotensorial forms: (id - Pi) after d,
/// extending the projection to higher forms one 1-form factor at a time.
pub fn covariant_d(bundle: &Bundle, pi: &GradedMap, form: &PseudoForm) -> PseudoForm {
    let p = bundle.total();
    let deg = form.degree();
    let values = form
        .values()
        .iter()
        .map(|v| {
            let dv = d_ambient(p, deg, v);
            project_complement(bundle, pi, deg + 1, &dv)
        })
        .collect();
    PseudoForm::new(deg + 1, values)
}

/// Apply (id - Pi) to every 1-form factor of an ambient n-form:
/// p0 (x) ... (x) pn -> p0 . Q(d p1) ^ ... ^ Q(d pn).
pub fn project_complement(
    bundle: &Bundle,
    pi: &GradedMap,
    degree: usize,
    v: &[Scalar],
) -> Vec<Scalar> {
    let p = bundle.total();
    let dp = p.dim();
    let n = p.modulus();
    let k = degree + 1;
    // Q d per basis element
    let qd: Vec<Vec<Scalar>> = (0..dp)
        .map(|j| {
            let dj = d_ambient(p, 0, &p.space().basis_vector(j));
            let pid = pi.apply(&dj);
            dj.iter().zip(pid.iter()).map(|(a, b)| a - b).collect()
        })
        .collect();
    let mut out = vec![Scalar::zero(n); dp.pow(k as u32)];
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let factors = crate::forms::unrank(idx, k, dp);
        // p0 as a 0-form, then wedge the projected differentials
        let mut acc: Vec<Scalar> = p.space().basis_vector(factors[0]);
        let mut acc_deg = 0usize;
        for &f in &factors[1..] {
            acc = wedge_ambient(p, acc_deg, &acc, 1, &qd[f]);
            acc_deg += 1;
        }
        for (x, y) in out.iter_mut().zip(acc.iter()) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }
    out
}

/// Cross section of an associated bundle from a pseudotensorial 0-form:
/// multiply the E legs pairwise, corestricted to the base.
pub fn section_from_pseudo(
    bundle: &Bundle,
    assoc: &AssociatedBundle,
    form: &PseudoForm,
) -> Result<GradedMap, GaugeError> {
    assert_eq!(form.degree(), 0);
    let p = bundle.total();
    let dv = assoc.fiber().space().dim();
    let n = p.modulus();
    let mut images = Vec::with_capacity(assoc.dim());
    for row in assoc.carrier().rows() {
        let mut acc = vec![Scalar::zero(n); p.dim()];
        for (idx, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, v) = (idx / dv, idx % dv);
            let prod = p.mul_vec(&p.space().basis_vector(i), form.value(v));
            for (x, y) in acc.iter_mut().zip(prod.iter()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        let coords = bundle.base_subspace().coordinates(&acc).ok_or_else(|| {
            GaugeError::Validation("cross section lands in the base".to_string())
        })?;
        images.push(coords);
    }
    let (e_space, _incl) = assoc.carrier().as_space("e");
    GradedMap::from_images(e_space, bundle.base().space().clone(), 0, images)
        .map_err(|e| GaugeError::Validation(format!("cross section is graded: {e}")))
}

/// Pseudotensorial 0-form from a cross section, through the Galois inverse
/// and the inverse antipode. The assembled element lies in P (x) E, so the
/// section applies slice by slice; membership is validated.
pub fn pseudo_from_section(
    bundle: &Bundle,
    assoc: &AssociatedBundle,
    section: &GradedMap,
) -> Result<PseudoForm, GaugeError> {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let sinv = hopf
        .antipode_inv()
        .ok_or_else(|| GaugeError::Validation("antipode is invertible".to_string()))?;
    let chi_inv = bundle
        .chi_inv()
        .ok_or_else(|| GaugeError::NotPrincipal("galois map has no inverse".to_string()))?;
    let v_space = assoc.fiber().space();
    let dv = v_space.dim();
    let dp = p.dim();
    let db = hopf.dim();
    let n = p.modulus();
    let psi = braiding_inverse(hopf.space(), v_space);
    let mut values = Vec::with_capacity(dv);
    for i in 0..dv {
        // assemble sum t1 (x) (t2 (x) v) in P (x) (P (x) V)
        let mut big = vec![Scalar::zero(n); dp * dp * dv];
        for (v0, v1, c) in assoc.fiber().coaction().terms(i) {
            for (bi, cb) in psi.apply_basis(v0 * db + v1).iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (b_leg, v_leg) = (bi / dv, bi % dv);
                for (k, sc) in sinv.apply_basis(b_leg).iter().enumerate() {
                    if sc.is_zero() {
                        continue;
                    }
                    let mut one_k = vec![Scalar::zero(n); dp * db];
                    for (u, uc) in p.unit().iter().enumerate() {
                        if !uc.is_zero() {
                            one_k[u * db + k] += uc;
                        }
                    }
                    let class = chi_inv.apply(&one_k);
                    let rep = bundle.quotient_section().apply(&class);
                    let coeff = &(&c * cb) * sc;
                    for (ridx, rc) in rep.iter().enumerate() {
                        if rc.is_zero() {
                            continue;
                        }
                        let (t1, t2) = (ridx / dp, ridx % dp);
                        big[(t1 * dp + t2) * dv + v_leg] += &(&coeff * rc);
                    }
                }
            }
        }
        let mut acc = vec![Scalar::zero(n); dp];
        for t1 in 0..dp {
            let slice: Vec<Scalar> = (0..dp * dv)
                .map(|r| big[t1 * (dp * dv) + r].clone())
                .collect();
            if slice.iter().all(|c| c.is_zero()) {
                continue;
            }
            let coords = assoc.carrier().coordinates(&slice).ok_or_else(|| {
                GaugeError::Validation(
                    "galois legs of the section construction land in E".to_string(),
                )
            })?;
            let m_val = section.apply(&coords);
            let m_in_p = bundle.base_inclusion().apply(&m_val);
            let prod = p.mul_vec(&p.space().basis_vector(t1), &m_in_p);
            for (x, y) in acc.iter_mut().zip(prod.iter()) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        }
        values.push(acc);
    }
    Ok(PseudoForm::new(0, values))
}

/// Trivialization of an associated bundle: phi_E and the object isomorphism
/// theta_E with its inverse, all validated.
pub struct AssociatedTrivialization {
    mv_space: SpaceRef,
    base_subspace: Subspace,
    fiber_dim: usize,
    pub phi_e: GradedMap,
    pub theta_e: GradedMap,
    /// the inverse formula as an endomap of P (x) V
    pub theta_e_inv_ambient: GradedMap,
}

impl AssociatedTrivialization {
    /// M (x) V, the trivial model of the associated bundle.
    pub fn mv_space(&self) -> &SpaceRef {
        &self.mv_space
    }

    /// Apply the inverse formula and corestrict to M (x) V; None when the
    /// left legs fall outside the base.
    pub fn theta_e_inv(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let acc = self.theta_e_inv_ambient.apply(v);
        let dv = self.fiber_dim;
        let dp = acc.len() / dv;
        let mut img = self.mv_space.zero_vector();
        for v_leg in 0..dv {
            let slice: Vec<Scalar> = (0..dp).map(|x| acc[x * dv + v_leg].clone()).collect();
            let coords = self.base_subspace.coordinates(&slice)?;
            for (k, c) in coords.into_iter().enumerate() {
                img[k * dv + v_leg] = c;
            }
        }
        Some(img)
    }
}

pub fn trivialize_associated(
    bundle: &Bundle,
    triv: &Trivialization,
    assoc: &AssociatedBundle,
) -> Result<AssociatedTrivialization, GaugeError> {
    let p = bundle.total();
    let hopf = bundle.hopf();
    let sinv = hopf
        .antipode_inv()
        .ok_or_else(|| GaugeError::Validation("antipode is invertible".to_string()))?;
    let v_space = assoc.fiber().space().clone();
    let dv = v_space.dim();
    let dp = p.dim();
    let db = hopf.dim();
    let n = p.modulus();
    let psi = braiding_inverse(hopf.space(), &v_space);

    // phi_E(v) = phi(S_inv(v^(1)~)) (x) v^(0)~ with the coaction legs braided
    let mut images = Vec::with_capacity(dv);
    for i in 0..dv {
        let mut img = vec![Scalar::zero(n); dp * dv];
        for (v0, v1, c) in assoc.fiber().coaction().terms(i) {
            for (bi, cb) in psi.apply_basis(v0 * db + v1).iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (b_leg, v_leg) = (bi / dv, bi % dv);
                for (k, sc) in sinv.apply_basis(b_leg).iter().enumerate() {
                    if sc.is_zero() {
                        continue;
                    }
                    let phi_val = triv.phi().apply_basis(k);
                    let coeff = &(&c * cb) * sc;
                    for (x, pc) in phi_val.iter().enumerate() {
                        if !pc.is_zero() {
                            img[x * dv + v_leg] += &(&coeff * pc);
                        }
                    }
                }
            }
        }
        if !assoc.carrier().contains(&img) {
            return Err(GaugeError::Validation(
                "phi_E lands in the associated bundle".to_string(),
            ));
        }
        images.push(img);
    }
    let phi_e =
        GradedMap::from_images(v_space.clone(), assoc.ambient().clone(), 0, images).unwrap();

    // theta_E(m (x) v) = m . phi_E(v)
    let m_space = bundle.base().space().clone();
    let mv = GradedSpace::tensor(&m_space, &v_space);
    let mut images = Vec::with_capacity(mv.dim());
    for mi in 0..m_space.dim() {
        let m_in_p = bundle.base_inclusion().apply_basis(mi);
        for vi in 0..dv {
            images.push(assoc.act_left(p, &m_in_p, &phi_e.apply_basis(vi)));
        }
    }
    let theta_e =
        GradedMap::from_images(mv.clone(), assoc.ambient().clone(), 0, images).unwrap();

    // theta_E_inv acts on the total-space leg alone:
    // p (x) v -> p^(0) phi_inv(p^(1)) (x) v. On the tensor bundle this
    // collapses to the counit of the middle leg; it inverts theta_E on E and
    // is defined on all of P (x) V.
    let mut images = Vec::with_capacity(assoc.ambient().dim());
    for idx in 0..assoc.ambient().dim() {
        let (pi_, vi) = (idx / dv, idx % dv);
        let mut acc = vec![Scalar::zero(n); dp * dv];
        for (p0, p1, c) in bundle.coaction().terms(pi_) {
            let prod = p.mul_vec(
                &p.space().basis_vector(p0),
                &triv.phi_inv().apply_basis(p1),
            );
            for (x, pc) in prod.iter().enumerate() {
                if !pc.is_zero() {
                    acc[x * dv + vi] += &(&c * pc);
                }
            }
        }
        images.push(acc);
    }
    let theta_e_inv_ambient =
        GradedMap::from_images(assoc.ambient().clone(), assoc.ambient().clone(), 0, images)
            .unwrap();
    let triv_e = AssociatedTrivialization {
        mv_space: mv.clone(),
        base_subspace: bundle.base_subspace().clone(),
        fiber_dim: dv,
        phi_e,
        theta_e,
        theta_e_inv_ambient,
    };

    // validations: theta_E . theta_E_inv = id on E and theta_E_inv . theta_E
    // = id on M (x) V
    for row in assoc.carrier().rows() {
        let coords = triv_e.theta_e_inv(row).ok_or_else(|| {
            GaugeError::Validation("theta_E_inv lands in M (x) V on E".to_string())
        })?;
        let back = triv_e.theta_e.apply(&coords);
        if &back != row {
            return Err(GaugeError::Validation(
                "theta_E . theta_E_inv = id on E".to_string(),
            ));
        }
    }
    for i in 0..mv.dim() {
        let back = triv_e
            .theta_e_inv(&triv_e.theta_e.apply_basis(i))
            .ok_or_else(|| {
                GaugeError::Validation("theta_E_inv lands in M (x) V on E".to_string())
            })?;
        if back != mv.basis_vector(i) {
            return Err(GaugeError::Validation(
                "theta_E_inv . theta_E = id on M (x) V".to_string(),
            ));
        }
    }
    Ok(triv_e)
}

/// Cross section from a local section: s = mult . (id (x) sigma) . theta_E_inv.
pub fn section_from_local(
    bundle: &Bundle,
    assoc: &AssociatedBundle,
    triv_e: &AssociatedTrivialization,
    sigma: &[Form],
) -> Result<GradedMap, GaugeError> {
    let m = bundle.base();
    let dv = assoc.fiber().space().dim();
    let n = m.modulus();
    let mut images = Vec::with_capacity(assoc.dim());
    for row in assoc.carrier().rows() {
        let mv_coords = triv_e.theta_e_inv(row).ok_or_else(|| {
            GaugeError::Validation("theta_E_inv lands in M (x) V on E".to_string())
        })?;
        let mut acc = vec![Scalar::zero(n); m.dim()];
        for (idx, c) in mv_coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mi, vi) = (idx / dv, idx % dv);
            let prod = m.mul_vec(&m.space().basis_vector(mi), &sigma[vi].ambient_vector());
            for (x, y) in acc.iter_mut().zip(prod.iter()) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        images.push(acc);
    }
    let (e_space, _) = assoc.carrier().as_space("e");
    GradedMap::from_images(e_space, m.space().clone(), 0, images)
        .map_err(|e| GaugeError::Validation(format!("cross section is graded: {e}")))
}

/// Local section from a cross section: sigma = s . phi_E.
pub fn local_from_section(
    assoc: &AssociatedBundle,
    triv_e: &AssociatedTrivialization,
    m_calc: &Calculus,
    section: &GradedMap,
) -> Vec<Form> {
    let dv = assoc.fiber().space().dim();
    (0..dv)
        .map(|i| {
            let e_vec = triv_e.phi_e.apply_basis(i);
            let coords = assoc
                .carrier()
                .coordinates(&e_vec)
                .expect("phi_E lands in E");
            let m_val = section.apply(&coords);
            m_calc.form_from_ambient(0, &m_val)
        })
        .collect()
}
