//! Algebras, braided Hopf algebras and (co)module structures given by
//! structure constants, the convolution algebra of morphisms, and axiom
//! checkers that report pass/fail per axiom with a counterexample witness.

use crate::graded::{braiding, GradedMap, GradedSpace, SpaceRef};
use crate::scalar::Scalar;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("convolution inverse does not exist: {0}")]
    NotConvInvertible(String),
    #[error("invalid comodule data: {0}")]
    InvalidComodule(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

/// One axiom checked, with a witness basis vector on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

/// Ordered list of axiom checks; entries appear in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub title: String,
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> CheckReport {
        CheckReport {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, witness: Option<String>) {
        self.entries.push(CheckEntry {
            name: name.into(),
            pass: witness.is_none(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| !e.pass)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.title)?;
        for e in &self.entries {
            match &e.witness {
                None => writeln!(f, "  {}: pass", e.name)?,
                Some(w) => writeln!(f, "  {}: FAIL at {}", e.name, w)?,
            }
        }
        Ok(())
    }
}

/// Compare two maps; on difference return the offending domain basis name.
pub fn difference_witness(a: &GradedMap, b: &GradedMap) -> Option<String> {
    a.first_difference(b).map(|j| a.dom().name(j).to_string())
}

/// A unital algebra given by structure constants.
#[derive(Clone)]
pub struct Algebra {
    space: SpaceRef,
    unit: Vec<Scalar>,
    mult: GradedMap,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim {})", self.space.dim())
    }
}

impl Algebra {
    pub fn new(space: SpaceRef, unit: Vec<Scalar>, mult: GradedMap) -> Algebra {
        assert_eq!(unit.len(), space.dim());
        let sq = GradedSpace::tensor(&space, &space);
        assert_eq!(mult.dom().as_ref(), sq.as_ref(), "mult domain");
        assert_eq!(mult.cod().as_ref(), space.as_ref(), "mult codomain");
        assert_eq!(mult.shift(), 0);
        Algebra { space, unit, mult }
    }

    /// Build from the products of non-unit basis pairs; products with the
    /// declared unit are filled in by the unit law, everything else is zero
    /// unless listed.
    pub fn from_table(
        space: SpaceRef,
        unit_index: usize,
        products: &[(usize, usize, Vec<Scalar>)],
    ) -> Algebra {
        let n = space.modulus();
        let d = space.dim();
        let mut mat = vec![vec![Scalar::zero(n); d * d]; d];
        for j in 0..d {
            mat[j][unit_index * d + j] = Scalar::one(n);
            if j != unit_index {
                mat[j][j * d + unit_index] = Scalar::one(n);
            }
        }
        for (a, b, img) in products {
            assert!(*a != unit_index && *b != unit_index, "unit products are implied");
            for (i, c) in img.iter().enumerate() {
                mat[i][a * d + b] = c.clone();
            }
        }
        let sq = GradedSpace::tensor(&space, &space);
        let mult = GradedMap::new(sq, space.clone(), 0, mat).expect("mult is graded");
        let mut unit = vec![Scalar::zero(n); d];
        unit[unit_index] = Scalar::one(n);
        Algebra { space, unit, mult }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn modulus(&self) -> u32 {
        self.space.modulus()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn mult(&self) -> &GradedMap {
        &self.mult
    }

    /// Product of two basis vectors.
    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.mult.apply_basis(i * self.dim() + j)
    }

    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.modulus();
        let mut out = vec![Scalar::zero(n); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let coeff = a * b;
                let prod = self.mul_basis(i, j);
                for (k, c) in prod.iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&coeff * c);
                    }
                }
            }
        }
        out
    }

    /// Unit map from the tensor unit space.
    pub fn unit_map(&self) -> GradedMap {
        let one = GradedSpace::unit(self.modulus());
        GradedMap::from_images(one, self.space.clone(), 0, vec![self.unit.clone()])
            .expect("unit is degree 0")
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..i {
                if self.mul_basis(i, j) != self.mul_basis(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_degree_zero(&self) -> bool {
        self.space.basis().iter().all(|b| b.degree == 0)
    }
}

/// Associativity and unit laws, checked on all basis tuples.
pub fn check_algebra(a: &Algebra) -> CheckReport {
    let mut report = CheckReport::new("algebra");
    let d = a.dim();
    let mut witness = None;
    'assoc: for i in 0..d {
        for j in 0..d {
            let ij = a.mul_basis(i, j);
            for k in 0..d {
                let jk = a.mul_basis(j, k);
                let lhs = a.mul_vec(&ij, &a.space.basis_vector(k));
                let rhs = a.mul_vec(&a.space.basis_vector(i), &jk);
                if lhs != rhs {
                    witness = Some(format!(
                        "{}.{}.{}",
                        a.space.name(i),
                        a.space.name(j),
                        a.space.name(k)
                    ));
                    break 'assoc;
                }
            }
        }
    }
    report.push("associativity", witness);
    let mut witness = None;
    for i in 0..d {
        let e = a.space.basis_vector(i);
        if a.mul_vec(&a.unit, &e) != e || a.mul_vec(&e, &a.unit) != e {
            witness = Some(a.space.name(i).to_string());
            break;
        }
    }
    report.push("unit laws", witness);
    report
}

/// The braided tensor product algebra on A (x) C:
/// (a (x) c)(a' (x) c') multiplies after braiding c past a'.
pub fn braided_tensor_algebra(a: &Algebra, c: &Algebra) -> Algebra {
    assert_eq!(a.modulus(), c.modulus());
    let n = a.modulus();
    let space = GradedSpace::tensor(a.space(), c.space());
    let dc = c.dim();
    let psi = braiding(c.space(), a.space());
    let d = space.dim();
    let mut mat = vec![vec![Scalar::zero(n); d * d]; d];
    for i1 in 0..a.dim() {
        for j1 in 0..dc {
            for i2 in 0..a.dim() {
                for j2 in 0..dc {
                    let col = (i1 * dc + j1) * d + (i2 * dc + j2);
                    // psi(c_{j1} (x) a_{i2}) = sum over (a_k (x) c_l)
                    let braided = psi.apply_basis(j1 * a.dim() + i2);
                    for (bi, coeff) in braided.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let (k, l) = (bi / dc, bi % dc);
                        let left = a.mul_basis(i1, k);
                        let right = c.mul_basis(l, j2);
                        for (x, lc) in left.iter().enumerate() {
                            if lc.is_zero() {
                                continue;
                            }
                            for (y, rc) in right.iter().enumerate() {
                                if rc.is_zero() {
                                    continue;
                                }
                                let v = &(coeff * lc) * rc;
                                mat[x * dc + y][col] += &v;
                            }
                        }
                    }
                }
            }
        }
    }
    let sq = GradedSpace::tensor(&space, &space);
    let mult = GradedMap::new(sq, space.clone(), 0, mat).expect("braided product is graded");
    let mut unit = vec![Scalar::zero(n); d];
    for (i, ac) in a.unit().iter().enumerate() {
        for (j, cc) in c.unit().iter().enumerate() {
            let v = ac * cc;
            if !v.is_zero() {
                unit[i * dc + j] = v;
            }
        }
    }
    Algebra::new(space, unit, mult)
}

/// A braided Hopf algebra: algebra + coproduct, counit, antipode.
#[derive(Clone)]
pub struct Hopf {
    algebra: Algebra,
    comul: GradedMap,
    counit: GradedMap,
    antipode: GradedMap,
    antipode_inv: Option<GradedMap>,
}

impl fmt::Debug for Hopf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hopf(dim {})", self.algebra.dim())
    }
}

impl Hopf {
    pub fn new(
        algebra: Algebra,
        comul: GradedMap,
        counit: GradedMap,
        antipode: GradedMap,
        antipode_inv: Option<GradedMap>,
    ) -> Hopf {
        let b = algebra.space();
        let sq = GradedSpace::tensor(b, b);
        assert_eq!(comul.dom().as_ref(), b.as_ref());
        assert_eq!(comul.cod().as_ref(), sq.as_ref());
        assert_eq!(counit.dom().as_ref(), b.as_ref());
        assert_eq!(counit.cod().dim(), 1);
        assert_eq!(antipode.dom().as_ref(), b.as_ref());
        assert_eq!(antipode.cod().as_ref(), b.as_ref());
        let antipode_inv = antipode_inv.or_else(|| crate::graded::invert(&antipode));
        Hopf {
            algebra,
            comul,
            counit,
            antipode,
            antipode_inv,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn space(&self) -> &SpaceRef {
        self.algebra.space()
    }

    pub fn modulus(&self) -> u32 {
        self.algebra.modulus()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn comul(&self) -> &GradedMap {
        &self.comul
    }

    pub fn counit(&self) -> &GradedMap {
        &self.counit
    }

    pub fn antipode(&self) -> &GradedMap {
        &self.antipode
    }

    pub fn antipode_inv(&self) -> Option<&GradedMap> {
        self.antipode_inv.as_ref()
    }

    /// counit value of a vector, as a scalar.
    pub fn counit_of(&self, v: &[Scalar]) -> Scalar {
        self.counit.apply(v).remove(0)
    }

    /// Coproduct of a basis vector as sparse (left, right, coeff) terms.
    pub fn comul_terms(&self, i: usize) -> Vec<(usize, usize, Scalar)> {
        let d = self.dim();
        self.comul
            .apply_basis(i)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / d, k % d, c))
            .collect()
    }

    /// Iterated coproduct: list of (legs, coeff) over basis tensors.
    pub fn comul_iterated(&self, i: usize, legs: usize) -> Vec<(Vec<usize>, Scalar)> {
        assert!(legs >= 1);
        let mut terms = vec![(vec![i], Scalar::one(self.modulus()))];
        while terms[0].0.len() < legs {
            let mut next = Vec::new();
            for (idxs, coeff) in &terms {
                // expand the last leg
                let last = *idxs.last().unwrap();
                for (l, r, c) in self.comul_terms(last) {
                    let mut v = idxs[..idxs.len() - 1].to_vec();
                    v.push(l);
                    v.push(r);
                    next.push((v, coeff * &c));
                }
            }
            terms = merge_terms(next);
        }
        terms
    }
}

fn merge_terms(terms: Vec<(Vec<usize>, Scalar)>) -> Vec<(Vec<usize>, Scalar)> {
    let mut map: std::collections::BTreeMap<Vec<usize>, Scalar> = std::collections::BTreeMap::new();
    for (k, c) in terms {
        match map.get_mut(&k) {
            Some(acc) => *acc += &c,
            None => {
                map.insert(k, c);
            }
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Coassociativity and counit laws.
pub fn check_coalgebra(h: &Hopf) -> CheckReport {
    let mut report = CheckReport::new("coalgebra");
    let b = h.space();
    let id = GradedMap::identity(b);
    let lhs = GradedMap::tensor(&h.comul, &id).compose(&h.comul);
    let rhs = GradedMap::tensor(&id, &h.comul).compose(&h.comul);
    report.push("coassociativity", difference_witness(&lhs, &rhs));
    let mut witness = None;
    for i in 0..h.dim() {
        let mut left = b.zero_vector();
        let mut right = b.zero_vector();
        for (l, r, c) in h.comul_terms(i) {
            let el = h.counit_of(&b.basis_vector(l));
            let er = h.counit_of(&b.basis_vector(r));
            for (t, acc) in left.iter_mut().enumerate() {
                if t == r {
                    *acc += &(&el * &c);
                }
            }
            for (t, acc) in right.iter_mut().enumerate() {
                if t == l {
                    *acc += &(&er * &c);
                }
            }
        }
        if left != b.basis_vector(i) || right != b.basis_vector(i) {
            witness = Some(b.name(i).to_string());
            break;
        }
    }
    report.push("counit laws", witness);
    report
}

/// All braided-group axioms: (co)algebra, the coproduct and counit being
/// algebra maps into the braided tensor square, and the antipode axioms.
pub fn check_hopf(h: &Hopf) -> CheckReport {
    let mut report = CheckReport::new("hopf");
    let alg = check_algebra(h.algebra());
    for e in alg.entries {
        report.entries.push(e);
    }
    let coalg = check_coalgebra(h);
    for e in coalg.entries {
        report.entries.push(e);
    }

    // comultiplication is an algebra map into the braided tensor square
    let bb = braided_tensor_algebra(h.algebra(), h.algebra());
    let b = h.space();
    let d = h.dim();
    let mut witness = None;
    'outer: for i in 0..d {
        for j in 0..d {
            let lhs = h.comul.apply(&h.algebra().mul_basis(i, j));
            let rhs = bb.mul_vec(&h.comul.apply_basis(i), &h.comul.apply_basis(j));
            if lhs != rhs {
                witness = Some(format!("{}.{}", b.name(i), b.name(j)));
                break 'outer;
            }
        }
    }
    if witness.is_none() {
        let lhs = h.comul.apply(h.algebra().unit());
        let rhs = bb.unit().to_vec();
        if lhs != rhs {
            witness = Some("1".to_string());
        }
    }
    report.push("coproduct multiplicative", witness);

    let mut witness = None;
    'outer2: for i in 0..d {
        for j in 0..d {
            let lhs = h.counit_of(&h.algebra().mul_basis(i, j));
            let rhs = &h.counit_of(&b.basis_vector(i)) * &h.counit_of(&b.basis_vector(j));
            if lhs != rhs {
                witness = Some(format!("{}.{}", b.name(i), b.name(j)));
                break 'outer2;
            }
        }
    }
    if witness.is_none() && !h.counit_of(h.algebra().unit()).is_one() {
        witness = Some("1".to_string());
    }
    report.push("counit multiplicative", witness);

    let unit_counit = convolution_unit(h, h.algebra());
    let id = GradedMap::identity(b);
    let left = convolution(h, h.algebra(), &h.antipode, &id);
    report.push("antipode (left)", difference_witness(&left, &unit_counit));
    let right = convolution(h, h.algebra(), &id, &h.antipode);
    report.push("antipode (right)", difference_witness(&right, &unit_counit));

    if let Some(sinv) = h.antipode_inv() {
        let round = sinv.compose(&h.antipode);
        report.push("antipode inverse", difference_witness(&round, &id));
    }
    report
}

/// Convolution product of morphisms B -> A: mult_A . (f (x) g) . comul_B.
pub fn convolution(h: &Hopf, target: &Algebra, f: &GradedMap, g: &GradedMap) -> GradedMap {
    assert_eq!(f.dom().as_ref(), h.space().as_ref());
    assert_eq!(g.dom().as_ref(), h.space().as_ref());
    assert_eq!(f.cod().as_ref(), target.space().as_ref());
    assert_eq!(g.cod().as_ref(), target.space().as_ref());
    assert_eq!(f.shift(), 0);
    assert_eq!(g.shift(), 0);
    let mut images = Vec::with_capacity(h.dim());
    for i in 0..h.dim() {
        let mut acc = target.space().zero_vector();
        for (l, r, c) in h.comul_terms(i) {
            let prod = target.mul_vec(&f.apply_basis(l), &g.apply_basis(r));
            for (k, p) in prod.iter().enumerate() {
                if !p.is_zero() {
                    acc[k] += &(&c * p);
                }
            }
        }
        images.push(acc);
    }
    GradedMap::from_images(h.space().clone(), target.space().clone(), 0, images)
        .expect("convolution is graded")
}

/// The convolution unit eta_A . eps_B.
pub fn convolution_unit(h: &Hopf, target: &Algebra) -> GradedMap {
    let mut images = Vec::with_capacity(h.dim());
    for i in 0..h.dim() {
        let e = h.counit_of(&h.space().basis_vector(i));
        images.push(
            target
                .unit()
                .iter()
                .map(|c| c * &e)
                .collect::<Vec<Scalar>>(),
        );
    }
    GradedMap::from_images(h.space().clone(), target.space().clone(), 0, images)
        .expect("convolution unit is graded")
}

/// Convolution inverse of f: B -> A.
///
/// When f(1) = 1 the geometric series in (f - eta.eps) terminates for the
/// nilpotent reference models; otherwise fall back to an exact linear solve
/// for the unknown inverse matrix.
pub fn convolution_inverse(
    h: &Hopf,
    target: &Algebra,
    f: &GradedMap,
) -> Result<GradedMap, AlgebraError> {
    let unit = convolution_unit(h, target);
    let f_at_unit = f.apply(unit_vector_of(h));
    if f_at_unit == target.unit().to_vec() {
        let r = f.sub(&unit);
        let mut inv = unit.clone();
        let mut power = unit.clone();
        let mut sign = true; // next term is subtracted
        for _ in 0..=h.dim() {
            power = convolution(h, target, &power, &r);
            if power.is_zero_map() {
                let check = convolution(h, target, f, &inv);
                if check == unit {
                    let check2 = convolution(h, target, &inv, f);
                    if check2 == unit {
                        return Ok(inv);
                    }
                }
                break;
            }
            inv = if sign { inv.sub(&power) } else { inv.add(&power) };
            sign = !sign;
        }
    }
    // generic route: solve f * g = eta.eps and check the other side
    solve_convolution(h, target, f, &unit)
}

fn unit_vector_of<'a>(h: &'a Hopf) -> &'a [Scalar] {
    h.algebra().unit()
}

fn solve_convolution(
    h: &Hopf,
    target: &Algebra,
    f: &GradedMap,
    unit: &GradedMap,
) -> Result<GradedMap, AlgebraError> {
    // unknowns: entries of g (d_A x d_B); equations: for each b and output
    // coordinate, sum over comul terms of f(b_1) g(b_2) = unit(b).
    let da = target.dim();
    let db = h.dim();
    let n = h.modulus();
    let unknowns = da * db;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for bi in 0..db {
        let mut coeff = vec![vec![Scalar::zero(n); unknowns]; da];
        for (l, r, c) in h.comul_terms(bi) {
            let fl = f.apply_basis(l);
            for (x, fx) in fl.iter().enumerate() {
                if fx.is_zero() {
                    continue;
                }
                // g(e_r) = sum_y g[y][r] e_y; product x * y
                for y in 0..da {
                    let prod = target.mul_basis(x, y);
                    for (k, p) in prod.iter().enumerate() {
                        if !p.is_zero() {
                            coeff[k][y * db + r] += &(&(&c * fx) * p);
                        }
                    }
                }
            }
        }
        let target_img = unit.apply_basis(bi);
        for (k, row) in coeff.into_iter().enumerate() {
            rows.push(row);
            rhs.push(target_img[k].clone());
        }
    }
    let sol = solve_dense(&rows, &rhs).ok_or_else(|| {
        AlgebraError::NotConvInvertible(format!(
            "no solution; f at the unit is {}",
            target.space().format_vector(&f.apply(unit_vector_of(h)))
        ))
    })?;
    let mut mat = vec![vec![Scalar::zero(n); db]; da];
    for y in 0..da {
        for r in 0..db {
            mat[y][r] = sol[y * db + r].clone();
        }
    }
    let g = GradedMap::new(h.space().clone(), target.space().clone(), 0, mat)
        .map_err(|e| AlgebraError::NotConvInvertible(e.to_string()))?;
    let other = convolution(h, target, &g, f);
    if &other != unit {
        return Err(AlgebraError::NotConvInvertible(
            "one-sided inverse only".into(),
        ));
    }
    Ok(g)
}

/// Exact dense linear solve; None when inconsistent.
pub(crate) fn solve_dense(rows: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), rhs.len());
    if rows.is_empty() {
        return Some(Vec::new());
    }
    let cols = rows[0].len();
    let mut echelon: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for (row, r) in rows.iter().zip(rhs.iter()) {
        let mut v = row.clone();
        let mut b = r.clone();
        for ((er, eb), &p) in echelon.iter().zip(pivots.iter()) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, y) in v.iter_mut().zip(er.iter()) {
                    if !y.is_zero() {
                        *x -= &(&c * y);
                    }
                }
                b -= &(&c * eb);
            }
        }
        if let Some(p) = v.iter().position(|c| !c.is_zero()) {
            let inv = v[p].inverse().unwrap();
            for c in v.iter_mut() {
                *c = &*c * &inv;
            }
            b = &b * &inv;
            pivots.push(p);
            echelon.push((v, b));
        } else if !b.is_zero() {
            return None;
        }
    }
    let n = rhs[0].order();
    let mut x = vec![Scalar::zero(n); cols];
    for k in (0..echelon.len()).rev() {
        let (row, b) = &echelon[k];
        let p = pivots[k];
        let mut val = b.clone();
        for j in (p + 1)..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                val -= &(&row[j] * &x[j]);
            }
        }
        x[p] = val;
    }
    Some(x)
}

/// A right coaction of a braided Hopf algebra on a carrier space.
#[derive(Clone)]
pub struct Coaction {
    carrier: SpaceRef,
    hopf: Arc<Hopf>,
    map: GradedMap,
}

impl fmt::Debug for Coaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Coaction(carrier dim {}, hopf dim {})",
            self.carrier.dim(),
            self.hopf.dim()
        )
    }
}

impl Coaction {
    pub fn new(carrier: SpaceRef, hopf: Arc<Hopf>, map: GradedMap) -> Coaction {
        assert_eq!(map.dom().as_ref(), carrier.as_ref());
        let expected = GradedSpace::tensor(&carrier, hopf.space());
        assert_eq!(map.cod().as_ref(), expected.as_ref());
        assert_eq!(map.shift(), 0);
        Coaction { carrier, hopf, map }
    }

    pub fn carrier(&self) -> &SpaceRef {
        &self.carrier
    }

    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.hopf
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }

    /// Sparse terms (carrier index, hopf index, coeff) of the coaction of a
    /// basis vector.
    pub fn terms(&self, i: usize) -> Vec<(usize, usize, Scalar)> {
        let db = self.hopf.dim();
        self.map
            .apply_basis(i)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / db, k % db, c))
            .collect()
    }

    /// The trivial coaction v -> v (x) 1.
    pub fn trivial(carrier: &SpaceRef, hopf: &Arc<Hopf>) -> Coaction {
        let n = carrier.modulus();
        let cod = GradedSpace::tensor(carrier, hopf.space());
        let db = hopf.dim();
        let mut images = Vec::with_capacity(carrier.dim());
        for i in 0..carrier.dim() {
            let mut v = cod.zero_vector();
            for (j, c) in hopf.algebra().unit().iter().enumerate() {
                if !c.is_zero() {
                    v[i * db + j] = c.clone();
                }
            }
            images.push(v);
            let _ = n;
        }
        let map = GradedMap::from_images(carrier.clone(), cod, 0, images).unwrap();
        Coaction::new(carrier.clone(), hopf.clone(), map)
    }

    /// The right regular coaction of a Hopf algebra on itself.
    pub fn coregular(hopf: &Arc<Hopf>) -> Coaction {
        Coaction::new(hopf.space().clone(), hopf.clone(), hopf.comul().clone())
    }

    /// Comodule axioms only (no algebra compatibility).
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("comodule");
        let id_v = GradedMap::identity(&self.carrier);
        let id_b = GradedMap::identity(self.hopf.space());
        let lhs = GradedMap::tensor(&self.map, &id_b).compose(&self.map);
        let rhs = GradedMap::tensor(&id_v, self.hopf.comul()).compose(&self.map);
        report.push("coaction coassociativity", difference_witness(&lhs, &rhs));
        let mut witness = None;
        for i in 0..self.carrier.dim() {
            let mut v = self.carrier.zero_vector();
            for (l, r, c) in self.terms(i) {
                let e = self.hopf.counit_of(&self.hopf.space().basis_vector(r));
                v[l] += &(&c * &e);
            }
            if v != self.carrier.basis_vector(i) {
                witness = Some(self.carrier.name(i).to_string());
                break;
            }
        }
        report.push("counit law", witness);
        report
    }
}

/// The braided right adjoint coaction of a Hopf algebra on itself:
/// (id (x) mult) . (id (x) S (x) id) . (psi (x) id) . (comul (x) id) . comul.
/// The comodule axioms are validated; failure is a hard error.
pub fn adjoint_coaction(hopf: &Arc<Hopf>) -> Result<Coaction, AlgebraError> {
    let b = hopf.space();
    let id = GradedMap::identity(b);
    let psi = braiding(b, b);
    let step1 = GradedMap::tensor(&hopf.comul().clone(), &id).compose(hopf.comul());
    let step2 = GradedMap::tensor(&psi, &id).compose(&step1);
    let step3 = GradedMap::tensor(&GradedMap::tensor(&id, hopf.antipode()), &id).compose(&step2);
    // collapse the last two legs with the product
    let mult_right = GradedMap::tensor(&id, hopf.algebra().mult());
    let map = mult_right.compose(&step3);
    let coaction = Coaction::new(b.clone(), hopf.clone(), map);
    let report = coaction.check();
    if !report.passed() {
        let e = report.first_failure().unwrap();
        return Err(AlgebraError::Validation(format!(
            "adjoint coaction fails {} at {}",
            e.name,
            e.witness.clone().unwrap_or_default()
        )));
    }
    Ok(coaction)
}

/// Comodule axioms plus multiplicativity into the braided tensor product
/// algebra and unit covariance.
pub fn check_comodule_algebra(a: &Algebra, rho: &Coaction) -> CheckReport {
    assert_eq!(rho.carrier().as_ref(), a.space().as_ref());
    let mut report = CheckReport::new("comodule algebra");
    for e in rho.check().entries {
        report.entries.push(e);
    }
    let ab = braided_tensor_algebra(a, rho.hopf().algebra());
    let d = a.dim();
    let mut witness = None;
    'outer: for i in 0..d {
        for j in 0..d {
            let lhs = rho.map().apply(&a.mul_basis(i, j));
            let rhs = ab.mul_vec(&rho.map().apply_basis(i), &rho.map().apply_basis(j));
            if lhs != rhs {
                witness = Some(format!("{}.{}", a.space().name(i), a.space().name(j)));
                break 'outer;
            }
        }
    }
    report.push("coaction multiplicative", witness);
    let lhs = rho.map().apply(a.unit());
    let witness = if lhs == ab.unit().to_vec() {
        None
    } else {
        Some("1".to_string())
    };
    report.push("unit covariant", witness);
    report
}

/// Build the coaction v -> v (x) 1 + beta(v) (x) xi + beta^2(v)/(1+q) (x) xi^2
/// from a degree -1 operator with beta^3 = 0, for the 3-dimensional anyonic
/// structure group with basis (1, xi, xi^2).
pub fn anyonic_comodule(
    v: &SpaceRef,
    beta: &GradedMap,
    hopf: &Arc<Hopf>,
) -> Result<Coaction, AlgebraError> {
    let n = v.modulus();
    if n != 3 || hopf.dim() != 3 {
        return Err(AlgebraError::InvalidComodule(
            "anyonic comodules require modulus 3 and a 3-dimensional structure group".into(),
        ));
    }
    if beta.shift() != n - 1 {
        return Err(AlgebraError::InvalidComodule(format!(
            "beta must have degree -1 (shift {}), got shift {}",
            n - 1,
            beta.shift()
        )));
    }
    let beta2 = beta.compose(beta);
    let beta3 = beta2.compose(beta);
    if !beta3.is_zero_map() {
        return Err(AlgebraError::InvalidComodule("beta^3 != 0".into()));
    }
    let one = Scalar::one(n);
    let q = Scalar::root_of_unity(n);
    let inv_1q = (&one + &q).inverse().expect("1+q is invertible");
    let cod = GradedSpace::tensor(v, hopf.space());
    let db = hopf.dim();
    let mut images = Vec::with_capacity(v.dim());
    for i in 0..v.dim() {
        let mut img = cod.zero_vector();
        img[i * db] = one.clone();
        for (k, c) in beta.apply_basis(i).iter().enumerate() {
            if !c.is_zero() {
                img[k * db + 1] += c;
            }
        }
        for (k, c) in beta2.apply_basis(i).iter().enumerate() {
            if !c.is_zero() {
                img[k * db + 2] += &(c * &inv_1q);
            }
        }
        images.push(img);
    }
    let map = GradedMap::from_images(v.clone(), cod, 0, images)
        .map_err(|e| AlgebraError::InvalidComodule(e.to_string()))?;
    let coaction = Coaction::new(v.clone(), hopf.clone(), map);
    let report = coaction.check();
    if !report.passed() {
        let e = report.first_failure().unwrap();
        return Err(AlgebraError::InvalidComodule(format!(
            "comodule axiom {} fails at {}",
            e.name,
            e.witness.clone().unwrap_or_default()
        )));
    }
    Ok(coaction)
}
