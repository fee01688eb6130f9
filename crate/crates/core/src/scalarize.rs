//! Gerstewitz scalarization `s_{K,e}(y) = inf{λ : λe ∈ y + K}` for
//! halfspace cones with nonempty interior.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{HalfspaceCone, Vector, TOL};
use crate::multipliers::lp::{lp_feasible, LpProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarizationContext {
    k: HalfspaceCone,
    e: Vector,
}

impl ScalarizationContext {
    /// Fails with [`Error::NotInterior`] unless every row sees `e` strictly.
    pub fn new(k: HalfspaceCone, e: Vector) -> Result<Self> {
        check_dim(k.dim(), e.dim())?;
        if k.rows().is_empty() {
            return Err(Error::Invalid(
                "scalarization needs an ordering cone with at least one row".into(),
            ));
        }
        if !k.rows().iter().all(|a| a.dot(&e) > TOL) {
            return Err(Error::NotInterior);
        }
        Ok(ScalarizationContext { k, e })
    }

    pub fn cone(&self) -> &HalfspaceCone {
        &self.k
    }

    pub fn e(&self) -> &Vector {
        &self.e
    }

    /// Index of a row attaining the maximum ratio, and the value.
    fn argmax(&self, y: &Vector) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, a) in self.k.rows().iter().enumerate() {
            let r = a.dot(y) / a.dot(&self.e);
            if r > best.1 {
                best = (i, r);
            }
        }
        best
    }
}

/// One element of `∂s(u)` together with the data needed to test others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubdiffCert {
    pub witness: Vector,
    pub point: Vector,
    pub value: f64,
    /// Rows `a_i` of `K`; `v*` must be a nonnegative combination of them.
    pub dual_rows: Vec<Vector>,
    pub e: Vector,
}

impl SubdiffCert {
    /// Tests `v* ∈ K⁺`, `v*(e) = 1`, `v*(u) = s(u)` within `tol`.
    pub fn contains(&self, v: &Vector, tol: f64) -> Result<bool> {
        check_dim(self.e.dim(), v.dim())?;
        if (v.dot(&self.e) - 1.0).abs() > tol || (v.dot(&self.point) - self.value).abs() > tol {
            return Ok(false);
        }
        let mut lp = LpProblem::new(self.dual_rows.len());
        lp.set_all_nonneg();
        for k in 0..v.dim() {
            let coeffs = self.dual_rows.iter().map(|a| a[k]).collect();
            lp.equals(coeffs, v[k]);
        }
        Ok(lp_feasible(&lp)?.is_some())
    }
}

pub fn gerstewitz_value(ctx: &ScalarizationContext, y: &Vector) -> Result<f64> {
    check_dim(ctx.e.dim(), y.dim())?;
    Ok(ctx.argmax(y).1)
}

/// Finds `v* = Σ w_i a_i`, `w ≥ 0`, with `v*(e) = 1` and `v*(u) = s(u)`.
pub fn gerstewitz_subdiff(ctx: &ScalarizationContext, u: &Vector) -> Result<SubdiffCert> {
    check_dim(ctx.e.dim(), u.dim())?;
    let value = ctx.argmax(u).1;
    let rows = ctx.k.rows();
    let mut lp = LpProblem::new(rows.len());
    lp.set_all_nonneg();
    lp.equals(rows.iter().map(|a| a.dot(&ctx.e)).collect(), 1.0);
    lp.equals(rows.iter().map(|a| a.dot(u)).collect(), value);
    let w = lp_feasible(&lp)?.ok_or_else(|| {
        Error::NumericalFailure("subdifferential LP of the scalarization is infeasible".into())
    })?;
    let mut v = vec![0.0; u.dim()];
    for (wi, a) in w.as_slice().iter().zip(rows) {
        for (vk, ak) in v.iter_mut().zip(a.as_slice()) {
            *vk += wi * ak;
        }
    }
    Ok(SubdiffCert {
        witness: Vector::new(v)?,
        point: u.clone(),
        value,
        dual_rows: rows.to_vec(),
        e: ctx.e.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ScalarizationContext {
        ScalarizationContext::new(
            HalfspaceCone::orthant(2),
            Vector::new(vec![1.0, 1.0]).unwrap(),
        )
        .unwrap()
    }

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn values_on_orthant() {
        assert_eq!(gerstewitz_value(&ctx(), &v(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(gerstewitz_value(&ctx(), &v(&[3.0, -1.0])).unwrap(), 3.0);
        assert_eq!(gerstewitz_value(&ctx(), &v(&[-2.0, -5.0])).unwrap(), -2.0);
    }

    #[test]
    fn e_must_be_interior() {
        let err = ScalarizationContext::new(HalfspaceCone::orthant(2), v(&[1.0, 0.0]));
        assert!(matches!(err, Err(Error::NotInterior)));
        assert!(gerstewitz_value(&ctx(), &v(&[1.0])).is_err());
    }

    #[test]
    fn unique_subgradient() {
        let c = gerstewitz_subdiff(&ctx(), &v(&[3.0, -1.0])).unwrap();
        assert!(c.witness.dist(&v(&[1.0, 0.0])) < 1e-9);
        assert!(c.contains(&c.witness, 1e-9).unwrap());
        assert!(!c.contains(&v(&[0.0, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn subgradient_on_the_diagonal() {
        let c = gerstewitz_subdiff(&ctx(), &v(&[2.0, 2.0])).unwrap();
        let w = &c.witness;
        assert!(w[0] >= -1e-9 && w[1] >= -1e-9);
        assert!((w[0] + w[1] - 1.0).abs() < 1e-9);
        assert!(c.contains(&v(&[0.3, 0.7]), 1e-9).unwrap());
        assert!(!c.contains(&v(&[1.2, -0.2]), 1e-9).unwrap());
    }

    #[test]
    fn subgradient_at_origin() {
        let c = gerstewitz_subdiff(&ctx(), &v(&[0.0, 0.0])).unwrap();
        assert!((c.witness.dot(&v(&[1.0, 1.0])) - 1.0).abs() < 1e-9);
        assert!(HalfspaceCone::orthant(2).contains(&c.witness, false).unwrap());
    }
}
