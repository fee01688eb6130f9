//! Vector-valued objectives and constraint maps with Jacobians.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::expr::{EvalError, Expression};
use crate::geometry::Vector;

/// Named maps from the example gallery. Jacobians are analytic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Builtin {
    /// `x² − y²`
    SaddleX2Y2,
    /// `x² − y³`
    SaddleX2Y3,
    /// `sin(1/x)`, 0 at the origin
    SinInvX,
    /// `x³ sin(1/x)`, 0 at the origin
    X3SinInvX,
    /// `(θ₂ − arctan(y/x))(arctan(y/x) − θ₁)` off the axis, 0 on `x = 0`,
    /// −1 in the open third quadrant.
    ArctanSector { theta1: f64, theta2: f64 },
    /// `(2x, x)`
    #[serde(rename = "vector-2x-x")]
    Vector2xX,
    /// `(x² − y², x² − y³)`
    VectorPairSaddle,
    Identity { dim: usize },
}

impl Builtin {
    pub fn input_dim(&self) -> usize {
        match self {
            Builtin::SinInvX | Builtin::X3SinInvX | Builtin::Vector2xX => 1,
            Builtin::Identity { dim } => *dim,
            _ => 2,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Builtin::Vector2xX | Builtin::VectorPairSaddle => 2,
            Builtin::Identity { dim } => *dim,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::SaddleX2Y2 => "saddle-x2-y2",
            Builtin::SaddleX2Y3 => "saddle-x2-y3",
            Builtin::SinInvX => "sin-inv-x",
            Builtin::X3SinInvX => "x3-sin-inv-x",
            Builtin::ArctanSector { .. } => "arctan-sector",
            Builtin::Vector2xX => "vector-2x-x",
            Builtin::VectorPairSaddle => "vector-pair-saddle",
            Builtin::Identity { .. } => "identity",
        }
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(match self {
            Builtin::SaddleX2Y2 => vec![x[0] * x[0] - x[1] * x[1]],
            Builtin::SaddleX2Y3 => vec![x[0] * x[0] - x[1].powi(3)],
            Builtin::SinInvX => vec![if x[0] != 0.0 { (1.0 / x[0]).sin() } else { 0.0 }],
            Builtin::X3SinInvX => vec![if x[0] != 0.0 {
                x[0].powi(3) * (1.0 / x[0]).sin()
            } else {
                0.0
            }],
            Builtin::ArctanSector { theta1, theta2 } => {
                let (a, b) = (x[0], x[1]);
                vec![if a == 0.0 {
                    0.0
                } else if a < 0.0 && b < 0.0 {
                    -1.0
                } else {
                    let th = sector_angle(a, b);
                    (theta2 - th) * (th - theta1)
                }]
            }
            Builtin::Vector2xX => vec![2.0 * x[0], x[0]],
            Builtin::VectorPairSaddle => vec![
                x[0] * x[0] - x[1] * x[1],
                x[0] * x[0] - x[1].powi(3),
            ],
            Builtin::Identity { .. } => x.to_vec(),
        })
    }

    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        Ok(match self {
            Builtin::SaddleX2Y2 => vec![vec![2.0 * x[0], -2.0 * x[1]]],
            Builtin::SaddleX2Y3 => vec![vec![2.0 * x[0], -3.0 * x[1] * x[1]]],
            Builtin::SinInvX => {
                if x[0] == 0.0 {
                    return Err(undefined("derivative of sin(1/x) at 0"));
                }
                vec![vec![-(1.0 / x[0]).cos() / (x[0] * x[0])]]
            }
            Builtin::X3SinInvX => {
                let t = x[0];
                if t == 0.0 {
                    vec![vec![0.0]]
                } else {
                    vec![vec![3.0 * t * t * (1.0 / t).sin() - t * (1.0 / t).cos()]]
                }
            }
            Builtin::ArctanSector { theta1, theta2 } => {
                let (a, b) = (x[0], x[1]);
                if a == 0.0 {
                    return Err(undefined("derivative of the sector map on x = 0"));
                }
                if a < 0.0 && b < 0.0 {
                    vec![vec![0.0, 0.0]]
                } else {
                    let th = sector_angle(a, b);
                    let g = theta1 + theta2 - 2.0 * th;
                    let r2 = a * a + b * b;
                    vec![vec![-g * b / r2, g * a / r2]]
                }
            }
            Builtin::Vector2xX => vec![vec![2.0], vec![1.0]],
            Builtin::VectorPairSaddle => vec![
                vec![2.0 * x[0], -2.0 * x[1]],
                vec![2.0 * x[0], -3.0 * x[1] * x[1]],
            ],
            Builtin::Identity { dim } => (0..*dim)
                .map(|i| (0..*dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        })
    }
}

/// `arctan(y/x)` as printed; on `x > 0` this is computed as `atan2(y, x)`.
fn sector_angle(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        b.atan2(a)
    } else {
        (b / a).atan()
    }
}

fn undefined(what: &str) -> Error {
    Error::Eval(EvalError::Undefined { what: what.into() })
}

/// Evaluable map `R^n → R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothMap {
    Builtin(Builtin),
    /// `x ↦ A x + b`
    Affine { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
    /// One expression per output coordinate; Jacobian by central differences.
    Expressions { input_dim: usize, components: Vec<Expression> },
}

impl SmoothMap {
    pub fn builtin(b: Builtin) -> Self {
        SmoothMap::Builtin(b)
    }

    pub fn affine(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        if matrix.is_empty() || matrix[0].is_empty() {
            return Err(Error::Invalid("affine map needs a nonempty matrix".into()));
        }
        let n = matrix[0].len();
        for row in &matrix {
            check_dim(n, row.len())?;
        }
        check_dim(matrix.len(), offset.len())?;
        if matrix.iter().flatten().chain(&offset).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("affine map coefficients".into()));
        }
        Ok(SmoothMap::Affine { matrix, offset })
    }

    pub fn linear(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let m = matrix.len();
        Self::affine(matrix, vec![0.0; m])
    }

    pub fn expressions(input_dim: usize, components: Vec<Expression>) -> Result<Self> {
        if input_dim == 0 || components.is_empty() {
            return Err(Error::Invalid(
                "expression map needs a positive input dimension and one component".into(),
            ));
        }
        for c in &components {
            if c.arity() > input_dim {
                return Err(Error::Invalid(format!(
                    "expression '{c}' uses x{} but the input dimension is {input_dim}",
                    c.arity() - 1
                )));
            }
        }
        Ok(SmoothMap::Expressions {
            input_dim,
            components,
        })
    }

    pub fn input_dim(&self) -> usize {
        match self {
            SmoothMap::Builtin(b) => b.input_dim(),
            SmoothMap::Affine { matrix, .. } => matrix[0].len(),
            SmoothMap::Expressions { input_dim, .. } => *input_dim,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            SmoothMap::Builtin(b) => b.output_dim(),
            SmoothMap::Affine { matrix, .. } => matrix.len(),
            SmoothMap::Expressions { components, .. } => components.len(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SmoothMap::Builtin(b) => b.name().to_string(),
            SmoothMap::Affine { .. } => "affine".to_string(),
            SmoothMap::Expressions { components, .. } => components
                .iter()
                .map(|c| c.source().to_string())
                .collect::<Vec<_>>()
                .join("; "),
        }
    }

    pub fn eval(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.input_dim(), x.dim())?;
        let xs = x.as_slice();
        let out = match self {
            SmoothMap::Builtin(b) => b.eval(xs)?,
            SmoothMap::Affine { matrix, offset } => matrix
                .iter()
                .zip(offset)
                .map(|(row, b)| crate::geometry::dot(row, xs) + b)
                .collect(),
            SmoothMap::Expressions { components, .. } => components
                .iter()
                .map(|c| c.eval(xs))
                .collect::<std::result::Result<_, _>>()?,
        };
        if out.iter().any(|v: &f64| !v.is_finite()) {
            return Err(Error::NonFinite(format!("{} at {x}", self.describe())));
        }
        Ok(Vector::from_vec_unchecked(out))
    }

    /// Jacobian rows (one per output coordinate).
    pub fn jacobian(&self, x: &Vector) -> Result<Vec<Vec<f64>>> {
        check_dim(self.input_dim(), x.dim())?;
        match self {
            SmoothMap::Builtin(b) => b.jacobian(x.as_slice()),
            SmoothMap::Affine { matrix, .. } => Ok(matrix.clone()),
            SmoothMap::Expressions { .. } => fd_jacobian(self, x),
        }
    }

    /// `∇f(x̄)u`.
    pub fn directional(&self, x: &Vector, u: &Vector) -> Result<Vector> {
        check_dim(self.input_dim(), u.dim())?;
        let j = self.jacobian(x)?;
        Ok(apply(&j, u))
    }
}

pub(crate) fn apply(j: &[Vec<f64>], u: &Vector) -> Vector {
    Vector::from_vec_unchecked(
        j.iter()
            .map(|row| crate::geometry::dot(row, u.as_slice()))
            .collect(),
    )
}

/// Central differences with step `1e-6 (1 + ‖x‖)`.
pub fn fd_jacobian(f: &SmoothMap, x: &Vector) -> Result<Vec<Vec<f64>>> {
    let n = f.input_dim();
    check_dim(n, x.dim())?;
    let h = 1e-6 * (1.0 + x.norm());
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let e = Vector::unit(n, k);
        let plus = f.eval(&x.axpy(h, &e))?;
        let minus = f.eval(&x.axpy(-h, &e))?;
        cols.push(plus.sub(&minus).scale(0.5 / h));
    }
    Ok((0..f.output_dim())
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect())
}
