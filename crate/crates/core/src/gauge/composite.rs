//! The composite model: base M = N (x) k[t]/t^3 with N a commutative
//! degree-0 algebra, a fixed complement of the line's 1-forms in the tensor
//! square, and the component decomposition of base 1-forms it induces.

use super::bundle::Bundle;
use super::connection::GaugeField;
use super::transform::LocalGauge;
use super::trivial::{trivial_bundle, Trivialization};
use super::GaugeError;
use crate::algebra::{braided_tensor_algebra, Algebra, Hopf};
use crate::forms::{Calculus, Form};
use crate::graded::GradedMap;
use crate::models::{anyonic_hopf, anyonic_line};
use crate::scalar::Scalar;
use std::sync::Arc;

/// Component data of one base 1-form in the splitting
/// Omega^1 M = Omega^1 N (x) span{1(x)1 | 1(x)t | 1(x)t^2}
///           + (N (x) N) (x) Omega^1(k[t]/t^3):
/// three complement coefficients and six line-form coefficients, each an
/// element of N (x) N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeField {
    /// coefficients of 1 (x) t^k for k = 0, 1, 2
    pub complement: [Vec<Scalar>; 3],
    /// coefficients of t dt^2, t^2 dt, dt, t^2 dt^2, dt^2, t dt
    pub line: [Vec<Scalar>; 6],
}

/// The six-component parameters of a composite gauge field:
/// A(xi) = A1 (1(x)t) + a1 dt + a2 t^2 dt^2,
/// A(xi^2) = A2 (1(x)t^2) + b1 dt^2 + b2 t dt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeParams {
    pub cap_a1: Vec<Scalar>,
    pub cap_a2: Vec<Scalar>,
    pub a1: Vec<Scalar>,
    pub a2: Vec<Scalar>,
    pub b1: Vec<Scalar>,
    pub b2: Vec<Scalar>,
}

pub struct CompositeModel {
    n_alg: Arc<Algebra>,
    nn_alg: Algebra,
    hopf: Arc<Hopf>,
    m_alg: Arc<Algebra>,
    bundle: Bundle,
    triv: Trivialization,
    /// inverse of the change of basis [complement | line forms] on the
    /// tensor square of the line
    tt_resolve: Vec<Vec<Scalar>>,
    line_dim: usize,
}

impl CompositeModel {
    /// Requires N commutative and concentrated in degree 0.
    pub fn new(n_alg: Arc<Algebra>) -> Result<CompositeModel, GaugeError> {
        if !n_alg.is_degree_zero() {
            return Err(GaugeError::Validation(
                "composite base factor must be concentrated in degree 0".to_string(),
            ));
        }
        if !n_alg.is_commutative() {
            return Err(GaugeError::Validation(
                "composite base factor must be commutative".to_string(),
            ));
        }
        if n_alg.modulus() != 3 {
            return Err(GaugeError::Validation(
                "composite model uses grading modulus 3".to_string(),
            ));
        }
        let line = anyonic_line(3, "theta");
        let m_alg = Arc::new(braided_tensor_algebra(&n_alg, &line));
        let hopf = anyonic_hopf();
        let (bundle, triv) = trivial_bundle(&m_alg, &hopf)?;
        // the computed base must agree index-by-index with the abstract M
        for k in 0..m_alg.dim() {
            let embedded = bundle.base_inclusion().apply_basis(k);
            let mut expect = bundle.total().space().zero_vector();
            expect[k * hopf.dim()] = Scalar::one(3);
            assert_eq!(embedded, expect, "base indexing convention");
        }
        let nn_alg = braided_tensor_algebra(&n_alg, &n_alg);
        let tt_resolve = line_tensor_square_resolution();
        Ok(CompositeModel {
            n_alg,
            nn_alg,
            hopf,
            m_alg,
            bundle,
            triv,
            tt_resolve,
            line_dim: 3,
        })
    }

    pub fn factor(&self) -> &Arc<Algebra> {
        &self.n_alg
    }

    /// The tensor square N (x) N as an algebra.
    pub fn factor_square(&self) -> &Algebra {
        &self.nn_alg
    }

    pub fn hopf(&self) -> &Arc<Hopf> {
        &self.hopf
    }

    pub fn base(&self) -> &Arc<Algebra> {
        &self.m_alg
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn trivialization(&self) -> &Trivialization {
        &self.triv
    }

    pub fn base_calculus(&self) -> &Calculus {
        self.bundle.base_calculus()
    }

    fn dn(&self) -> usize {
        self.n_alg.dim()
    }

    /// d on the factor: 1 (x) a - a (x) 1 in N (x) N.
    pub fn d_factor(&self, a: &[Scalar]) -> Vec<Scalar> {
        crate::forms::d_ambient(&self.n_alg, 0, a)
    }

    /// Left action a . u = (a (x) 1) u in N (x) N.
    pub fn dot_left(&self, a: &[Scalar], u: &[Scalar]) -> Vec<Scalar> {
        let embedded = self.embed_factor(a, true);
        self.nn_alg.mul_vec(&embedded, u)
    }

    /// Right action u . a = u (1 (x) a) in N (x) N.
    pub fn dot_right(&self, u: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        let embedded = self.embed_factor(a, false);
        self.nn_alg.mul_vec(u, &embedded)
    }

    /// a (x) 1 or 1 (x) a in N (x) N.
    pub fn embed_factor(&self, a: &[Scalar], left: bool) -> Vec<Scalar> {
        let dn = self.dn();
        let mut out = vec![Scalar::zero(3); dn * dn];
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, u) in self.n_alg.unit().iter().enumerate() {
                if !u.is_zero() {
                    let idx = if left { i * dn + j } else { j * dn + i };
                    out[idx] += &(c * u);
                }
            }
        }
        out
    }

    pub fn tensor_factor(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let dn = self.dn();
        let mut out = vec![Scalar::zero(3); dn * dn];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i * dn + j] = x * y;
                }
            }
        }
        out
    }

    pub fn is_factor_one_form(&self, u: &[Scalar]) -> bool {
        crate::forms::is_form(&self.n_alg, 1, u)
    }

    /// Decompose a base 1-form into its complement and line components.
    pub fn split(&self, form: &Form) -> CompositeField {
        let v = form.ambient_vector();
        let dn = self.dn();
        let lt = self.line_dim;
        let dm = dn * lt;
        // w[(a,b)][(i,j)] over the T (x) T and N (x) N gratings
        let mut components: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(3); dn * dn]; lt * lt];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (x, y) = (idx / dm, idx % dm);
            let (i, a) = (x / lt, x % lt);
            let (j, b) = (y / lt, y % lt);
            components[a * lt + b][i * dn + j] += c;
        }
        // resolve the T (x) T coordinates against [complement | line basis]
        let mut out_complement: [Vec<Scalar>; 3] = core::array::from_fn(|_| vec![Scalar::zero(3); dn * dn]);
        let mut out_line: [Vec<Scalar>; 6] = core::array::from_fn(|_| vec![Scalar::zero(3); dn * dn]);
        for nn in 0..dn * dn {
            let tt_vec: Vec<Scalar> = (0..lt * lt).map(|k| components[k][nn].clone()).collect();
            for (row, resolved) in self.tt_resolve.iter().enumerate() {
                let mut acc = Scalar::zero(3);
                for (k, r) in resolved.iter().enumerate() {
                    if !r.is_zero() && !tt_vec[k].is_zero() {
                        acc += &(r * &tt_vec[k]);
                    }
                }
                if row < 3 {
                    out_complement[row][nn] = acc;
                } else {
                    out_line[row - 3][nn] = acc;
                }
            }
        }
        CompositeField {
            complement: out_complement,
            line: out_line,
        }
    }

    /// Reassemble a base 1-form from components.
    pub fn assemble(&self, parts: &CompositeField) -> Form {
        let dn = self.dn();
        let lt = self.line_dim;
        let dm = dn * lt;
        let mut v = vec![Scalar::zero(3); dm * dm];
        let mut add = |nn_coef: &[Scalar], tt_vec: &[(usize, usize, i64)]| {
            for (idx, c) in nn_coef.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, j) = (idx / dn, idx % dn);
                for &(a, b, s) in tt_vec {
                    let x = (i * lt + a) * dm + (j * lt + b);
                    let scaled = c * &Scalar::from_integer(3, s);
                    v[x] += &scaled;
                }
            }
        };
        for (k, coef) in parts.complement.iter().enumerate() {
            add(coef, &[(0, k, 1)]);
        }
        for (which, coef) in parts.line.iter().enumerate() {
            add(coef, &line_form_terms(which));
        }
        self.base_calculus().form_from_ambient(1, &v)
    }

    /// Build the gauge field with the given six components.
    pub fn field(&self, params: &CompositeParams) -> Result<GaugeField, GaugeError> {
        for (name, u) in [("A1", &params.cap_a1), ("A2", &params.cap_a2)] {
            if !self.is_factor_one_form(u) {
                return Err(GaugeError::Validation(format!(
                    "component {name} lies in Omega^1 N"
                )));
            }
        }
        let zero = vec![Scalar::zero(3); self.dn() * self.dn()];
        let xi_part = CompositeField {
            complement: [zero.clone(), params.cap_a1.clone(), zero.clone()],
            line: [
                zero.clone(),
                zero.clone(),
                params.a1.clone(),
                params.a2.clone(),
                zero.clone(),
                zero.clone(),
            ],
        };
        let xi2_part = CompositeField {
            complement: [zero.clone(), zero.clone(), params.cap_a2.clone()],
            line: [
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                params.b1.clone(),
                params.b2.clone(),
            ],
        };
        let values = vec![
            self.base_calculus().zero_form(1),
            self.assemble(&xi_part),
            self.assemble(&xi2_part),
        ];
        Ok(GaugeField::new(&self.hopf, self.base_calculus(), values))
    }

    /// Read the six components back off a gauge field; zero elsewhere is
    /// asserted.
    pub fn params_of(&self, field: &GaugeField) -> CompositeParams {
        let xi = self.split(field.value(1));
        let xi2 = self.split(field.value(2));
        let zero = |v: &[Scalar]| v.iter().all(|c| c.is_zero());
        assert!(zero(&xi.complement[0]) && zero(&xi.complement[2]));
        assert!(zero(&xi.line[0]) && zero(&xi.line[1]) && zero(&xi.line[4]) && zero(&xi.line[5]));
        assert!(zero(&xi2.complement[0]) && zero(&xi2.complement[1]));
        assert!(
            zero(&xi2.line[0]) && zero(&xi2.line[1]) && zero(&xi2.line[2]) && zero(&xi2.line[3])
        );
        CompositeParams {
            cap_a1: xi.complement[1].clone(),
            cap_a2: xi2.complement[2].clone(),
            a1: xi.line[2].clone(),
            a2: xi.line[3].clone(),
            b1: xi2.line[4].clone(),
            b2: xi2.line[5].clone(),
        }
    }

    /// The flat family indexed by two factor elements:
    /// (da, db + (1+q)(d(a^2) - a da), a (x) 1, 0, b (x) 1 + (1+q) a (x) a,
    ///  -(1+q) a (x) a).
    pub fn flat_params(&self, a: &[Scalar], b: &[Scalar]) -> CompositeParams {
        let one = Scalar::one(3);
        let q = Scalar::root_of_unity(3);
        let two_q = &one + &q;
        let da = self.d_factor(a);
        let a_sq = self.n_alg.mul_vec(a, a);
        let da_sq = self.d_factor(&a_sq);
        let ada = self.dot_left(a, &da);
        let cap_a2: Vec<Scalar> = self
            .d_factor(b)
            .iter()
            .zip(da_sq.iter().zip(ada.iter()))
            .map(|(db, (x, y))| db + &(&two_q * &(x - y)))
            .collect();
        let a_x_a = self.tensor_factor(a, a);
        let b1: Vec<Scalar> = self
            .embed_factor(b, true)
            .iter()
            .zip(a_x_a.iter())
            .map(|(x, y)| x + &(&two_q * y))
            .collect();
        let b2: Vec<Scalar> = a_x_a.iter().map(|y| -&(&two_q * y)).collect();
        CompositeParams {
            cap_a1: da,
            cap_a2,
            a1: self.embed_factor(a, true),
            a2: vec![Scalar::zero(3); a_x_a.len()],
            b1,
            b2,
        }
    }

    /// Local gauge with factor-valued coordinates: gamma(xi) = c1 t,
    /// gamma(xi^2) = c2 t^2.
    pub fn gauge(&self, c1: &[Scalar], c2: &[Scalar]) -> Result<LocalGauge, GaugeError> {
        let base = self.bundle.base().space().clone();
        let lt = self.line_dim;
        let build = |k: usize, c: &[Scalar]| {
            let mut v = base.zero_vector();
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    v[i * lt + k] = x.clone();
                }
            }
            v
        };
        let images = vec![
            build(0, self.n_alg.unit()),
            build(1, c1),
            build(2, c2),
        ];
        let gamma =
            GradedMap::from_images(self.hopf.space().clone(), base, 0, images).unwrap();
        LocalGauge::new(&self.hopf, self.bundle.base(), gamma)
    }

    /// Scalar sections with factor-valued coordinates.
    pub fn section(&self, s0: &[Scalar], s1: &[Scalar], s2: &[Scalar]) -> Vec<Form> {
        let base = self.bundle.base().space().clone();
        let lt = self.line_dim;
        let m_calc = self.base_calculus();
        let build = |k: usize, s: &[Scalar]| {
            let mut v = base.zero_vector();
            for (i, x) in s.iter().enumerate() {
                if !x.is_zero() {
                    v[i * lt + k] = x.clone();
                }
            }
            m_calc.form_from_ambient(0, &v)
        };
        vec![build(0, s0), build(1, s1), build(2, s2)]
    }
}

/// Terms of the line 1-form basis inside the tensor square, as
/// (left power, right power, integer coefficient):
/// t dt^2, t^2 dt, dt, t^2 dt^2, dt^2, t dt.
fn line_form_terms(which: usize) -> Vec<(usize, usize, i64)> {
    match which {
        0 => vec![(1, 2, 1)],
        1 => vec![(2, 1, 1)],
        2 => vec![(0, 1, 1), (1, 0, -1)],
        3 => vec![(2, 2, 1)],
        4 => vec![(0, 2, 1), (2, 0, -1)],
        5 => vec![(1, 1, 1), (2, 0, -1)],
        _ => unreachable!(),
    }
}

/// Rows express, for a vector in the tensor square of the line, its
/// coefficients over [1(x)1, 1(x)t, 1(x)t^2, then the six line forms].
fn line_tensor_square_resolution() -> Vec<Vec<Scalar>> {
    // columns of the change of basis
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..3 {
        let mut v = vec![Scalar::zero(3); 9];
        v[k] = Scalar::one(3);
        cols.push(v);
    }
    for which in 0..6 {
        let mut v = vec![Scalar::zero(3); 9];
        for (a, b, s) in line_form_terms(which) {
            v[a * 3 + b] = Scalar::from_integer(3, s);
        }
        cols.push(v);
    }
    // invert the 9 x 9 matrix exactly
    let mut aug: Vec<Vec<Scalar>> = (0..9)
        .map(|r| {
            let mut row: Vec<Scalar> = (0..9).map(|c| cols[c][r].clone()).collect();
            for k in 0..9 {
                row.push(if k == r {
                    Scalar::one(3)
                } else {
                    Scalar::zero(3)
                });
            }
            row
        })
        .collect();
    for col in 0..9 {
        let pivot = (col..9).find(|&r| !aug[r][col].is_zero()).expect("invertible");
        aug.swap(col, pivot);
        let inv = aug[col][col].inverse().unwrap();
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..9 {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..18 {
                    let delta = &f * &aug[col][c];
                    aug[r][c] -= &delta;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[9..].to_vec()).collect()
}
