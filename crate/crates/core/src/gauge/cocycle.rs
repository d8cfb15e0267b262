//! The canonical cross-product form of a trivial bundle: transport of the
//! total product onto M (x) B, extraction of the action and cocycle, and the
//! rebuild of the product from them.

use super::GaugeError;
use crate::algebra::{Algebra, Hopf};
use crate::graded::{braiding, GradedMap, GradedSpace};
use crate::scalar::Scalar;
use std::sync::Arc;

/// Action and cocycle extracted from a transported product.
#[derive(Clone, Debug)]
pub struct CocycleData {
    /// B (x) M -> M
    pub action: GradedMap,
    /// B (x) B -> M
    pub cocycle: GradedMap,
}

/// Transport the total-space product onto M (x) B along the object
/// isomorphism; always associative and unital.
pub fn transport_product(
    p: &Algebra,
    theta: &GradedMap,
    theta_inv: &GradedMap,
) -> Algebra {
    let mb = theta.dom().clone();
    let n = p.modulus();
    let d = mb.dim();
    let mut mat = vec![vec![Scalar::zero(n); d * d]; d];
    for i in 0..d {
        let ti = theta.apply_basis(i);
        for j in 0..d {
            let tj = theta.apply_basis(j);
            let prod = theta_inv.apply(&p.mul_vec(&ti, &tj));
            for (k, c) in prod.into_iter().enumerate() {
                mat[k][i * d + j] = c;
            }
        }
    }
    let sq = GradedSpace::tensor(&mb, &mb);
    let mult = GradedMap::new(sq, mb.clone(), 0, mat).expect("transported product is graded");
    let unit = theta_inv.apply(p.unit());
    Algebra::new(mb, unit, mult)
}

/// Extract the action and cocycle of a product in canonical form on
/// M (x) B: the counit projection of (1 (x) b)(m (x) 1) and
/// (1 (x) b)(1 (x) b').
pub fn extract_cocycle(
    transported: &Algebra,
    hopf: &Arc<Hopf>,
    m: &Algebra,
) -> CocycleData {
    let db = hopf.dim();
    let dm = m.dim();
    let n = m.modulus();
    let counit_project = |v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(n); dm];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mi, bi) = (idx / db, idx % db);
            let e = hopf.counit_of(&hopf.space().basis_vector(bi));
            if !e.is_zero() {
                out[mi] += &(c * &e);
            }
        }
        out
    };
    let embed = |mi: Option<usize>, bi: Option<usize>| -> Vec<Scalar> {
        // basis of M (x) B from unit (x) b or m (x) unit
        let mut v = vec![Scalar::zero(n); dm * db];
        match (mi, bi) {
            (Some(mi), None) => {
                for (j, c) in hopf.algebra().unit().iter().enumerate() {
                    if !c.is_zero() {
                        v[mi * db + j] = c.clone();
                    }
                }
            }
            (None, Some(bi)) => {
                for (i, c) in m.unit().iter().enumerate() {
                    if !c.is_zero() {
                        v[i * db + bi] = c.clone();
                    }
                }
            }
            _ => unreachable!(),
        }
        v
    };
    let bm = GradedSpace::tensor(hopf.space(), m.space());
    let mut act_images = Vec::with_capacity(bm.dim());
    for b in 0..db {
        for mi in 0..dm {
            let prod = transported.mul_vec(&embed(None, Some(b)), &embed(Some(mi), None));
            act_images.push(counit_project(&prod));
        }
    }
    let action = GradedMap::from_images(bm, m.space().clone(), 0, act_images)
        .expect("extracted action is graded");
    let bb = GradedSpace::tensor(hopf.space(), hopf.space());
    let mut coc_images = Vec::with_capacity(bb.dim());
    for b in 0..db {
        for b2 in 0..db {
            let prod = transported.mul_vec(&embed(None, Some(b)), &embed(None, Some(b2)));
            coc_images.push(counit_project(&prod));
        }
    }
    let cocycle = GradedMap::from_images(bb, m.space().clone(), 0, coc_images)
        .expect("extracted cocycle is graded");
    CocycleData { action, cocycle }
}

/// Rebuild a product on M (x) B from action and cocycle data:
/// (m (x) b)(m' (x) b') = m (b_1 |> m'') c(b_2'' (x) b_1''') (x) b_3'' b_2',
/// with the primed legs braided past the coproduct legs. The result must
/// reproduce the transported product it came from; the first differing basis
/// pair is reported otherwise.
pub fn cocycle_cross_product(
    m: &Algebra,
    hopf: &Arc<Hopf>,
    data: &CocycleData,
) -> Result<Algebra, GaugeError> {
    let dm = m.dim();
    let db = hopf.dim();
    let n = m.modulus();
    let mb = GradedSpace::tensor(m.space(), hopf.space());
    let psi_bm = braiding(hopf.space(), m.space());
    let psi_bb = braiding(hopf.space(), hopf.space());
    let d = mb.dim();
    let mut mat = vec![vec![Scalar::zero(n); d * d]; d];
    for mi in 0..dm {
        for bi in 0..db {
            for mj in 0..dm {
                for bj in 0..db {
                    let col = (mi * db + bi) * d + (mj * db + bj);
                    // split b into three legs and b' into two
                    for (legs, c0) in hopf.comul_iterated(bi, 3) {
                        let (b1, b2, b3) = (legs[0], legs[1], legs[2]);
                        for (l, r, c1) in hopf.comul_terms(bj) {
                            // m' crosses b3 then b2
                            for (i1, cc1) in psi_bm.apply_basis(b3 * dm + mj).iter().enumerate() {
                                if cc1.is_zero() {
                                    continue;
                                }
                                let (m1, b3a) = (i1 / db, i1 % db);
                                for (i2, cc2) in
                                    psi_bm.apply_basis(b2 * dm + m1).iter().enumerate()
                                {
                                    if cc2.is_zero() {
                                        continue;
                                    }
                                    let (m2, b2a) = (i2 / db, i2 % db);
                                    // b'_1 crosses b3a
                                    for (i3, cc3) in
                                        psi_bb.apply_basis(b3a * db + l).iter().enumerate()
                                    {
                                        if cc3.is_zero() {
                                            continue;
                                        }
                                        let (la, b3b) = (i3 / db, i3 % db);
                                        let acted = data.action.apply_basis(b1 * dm + m2);
                                        let coc = data.cocycle.apply_basis(b2a * db + la);
                                        let group = hopf.algebra().mul_basis(b3b, r);
                                        let coeff =
                                            &(&(&(&c0 * &c1) * cc1) * cc2) * cc3;
                                        // m * acted * coc (x) group
                                        let left =
                                            m.mul_vec(&m.space().basis_vector(mi), &acted);
                                        let left = m.mul_vec(&left, &coc);
                                        for (x, lc) in left.iter().enumerate() {
                                            if lc.is_zero() {
                                                continue;
                                            }
                                            for (y, gc) in group.iter().enumerate() {
                                                if !gc.is_zero() {
                                                    mat[x * db + y][col] +=
                                                        &(&(&coeff * lc) * gc);
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let sq = GradedSpace::tensor(&mb, &mb);
    let mult = GradedMap::new(sq, mb.clone(), 0, mat)
        .map_err(|e| GaugeError::Validation(format!("cross product not graded: {e}")))?;
    let mut unit = vec![Scalar::zero(n); d];
    for (i, mc) in m.unit().iter().enumerate() {
        for (j, bc) in hopf.algebra().unit().iter().enumerate() {
            let v = mc * bc;
            if !v.is_zero() {
                unit[i * db + j] = v;
            }
        }
    }
    Ok(Algebra::new(mb, unit, mult))
}

/// Rebuild and compare against the transported product, naming the first
/// differing basis pair on mismatch.
pub fn rebuild_matches(
    transported: &Algebra,
    rebuilt: &Algebra,
) -> Result<(), GaugeError> {
    let d = transported.dim();
    for i in 0..d {
        for j in 0..d {
            if transported.mul_basis(i, j) != rebuilt.mul_basis(i, j) {
                return Err(GaugeError::Validation(format!(
                    "cross product rebuild differs at {} . {}",
                    transported.space().name(i),
                    transported.space().name(j)
                )));
            }
        }
    }
    Ok(())
}
