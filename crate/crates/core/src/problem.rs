//! JSON problem files.
//!
//! One file format serves every command; each command reads the fields it
//! needs and reports the ones that are missing.

use serde::{Deserialize, Serialize};

use crate::certify::{Constraint, GridSpec, OpennessConfig, Problem};
use crate::error::{check_dim, Error, Result};
use crate::expr::Expression;
use crate::geometry::{DirectionSet, HalfspaceCone, Vector};
use crate::mintime::Target;
use crate::multipliers::ConvexityAssertion;
use crate::sets::{PolyhedralSet, SetSpec};
use crate::smooth::{Builtin, SmoothMap};

/// Objective or constraint map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSpec {
    Builtin(Builtin),
    /// One expression per output coordinate, over `x0..x{dim-1}`.
    Expressions(Vec<Expression>),
    Affine { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
}

impl MapSpec {
    pub fn build(&self, dim: usize) -> Result<SmoothMap> {
        let m = match self {
            MapSpec::Builtin(b) => SmoothMap::builtin(b.clone()),
            MapSpec::Expressions(es) => SmoothMap::expressions(dim, es.clone())?,
            MapSpec::Affine { matrix, offset } => SmoothMap::affine(matrix.clone(), offset.clone())?,
        };
        check_dim(dim, m.input_dim())?;
        Ok(m)
    }
}

/// Direction set as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSpec {
    /// Nonzero vectors; normalized on load.
    Finite(Vec<Vec<f64>>),
    /// Rows `a` of the cone `{u : a·u ≥ 0}`.
    ConeSection(Vec<Vec<f64>>),
    /// Planar arc of unit vectors at angles in `[from, to]`.
    Arc {
        from: f64,
        to: f64,
        count: usize,
        #[serde(default)]
        open: bool,
    },
    FullSphere,
}

impl DirectionSpec {
    pub fn build(&self, dim: usize) -> Result<DirectionSet> {
        let l = match self {
            DirectionSpec::Finite(vs) => DirectionSet::finite(
                vs.iter().cloned().map(Vector::new).collect::<Result<_>>()?,
            )?,
            DirectionSpec::ConeSection(rows) => {
                DirectionSet::cone_section(HalfspaceCone::from_rows(rows.clone())?)?
            }
            DirectionSpec::Arc {
                from,
                to,
                count,
                open,
            } => DirectionSet::arc(*from, *to, *count, *open)?,
            DirectionSpec::FullSphere => DirectionSet::full_sphere(dim),
        };
        check_dim(dim, l.dim())?;
        Ok(l)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintSpec {
    Set(SetSpec),
    /// `μ_i(x) ≤ 0` and `ν_j(x) = 0`.
    IneqEq {
        #[serde(default)]
        mu: Vec<Expression>,
        #[serde(default)]
        nu: Vec<Expression>,
    },
}

/// Grid fields that may be omitted individually.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Dimension of the argument space.
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<MapSpec>,
    /// Rows of the ordering cone `K`; defaults to the nonnegative orthant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<DirectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintSpec>,
    /// The point `x̄`.
    pub point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Set `M` (set minimality), `A` (tangent cones, penalization).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetSpec>,
    /// Query direction `u`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    /// Directions for the first-order check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    /// Interior point `e` of `K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<f64>>,
    /// Evaluation point of the scalarization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    /// Output-space direction set `M` for calmness ratios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<DirectionSpec>,
    /// Output-space direction set `C` for the openness search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<DirectionSpec>,
    /// Constraint map `g` with `g(x̄) ∈ −Q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<f64>>>,
    /// Lipschitz constant for vector penalization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convexity: Option<ConvexityAssertion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub openness: Option<OpennessConfig>,
}

fn missing(field: &str) -> Error {
    Error::Invalid(format!("problem file is missing '{field}'"))
}

fn vector(v: &[f64], dim: usize) -> Result<Vector> {
    check_dim(dim, v.len())?;
    Vector::new(v.to_vec())
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: ProblemFile = serde_json::from_str(text)?;
        if f.dim == 0 {
            return Err(Error::Invalid("dim must be positive".into()));
        }
        check_dim(f.dim, f.point.len())?;
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn xbar(&self) -> Result<Vector> {
        vector(&self.point, self.dim)
    }

    pub fn objective(&self) -> Result<SmoothMap> {
        self.objective.as_ref().ok_or_else(|| missing("objective"))?.build(self.dim)
    }

    /// `K` in an output space of dimension `out`.
    pub fn k_cone(&self, out: usize) -> Result<HalfspaceCone> {
        let k = match &self.k {
            Some(rows) => HalfspaceCone::from_rows(rows.clone())?,
            None => HalfspaceCone::orthant(out),
        };
        check_dim(out, k.dim())?;
        Ok(k)
    }

    pub fn l_set(&self) -> Result<DirectionSet> {
        self.l.as_ref().ok_or_else(|| missing("l"))?.build(self.dim)
    }

    pub fn grid_spec(&self) -> GridSpec {
        let mut g = GridSpec::default();
        if let Some(f) = &self.grid {
            g.radius = f.radius.unwrap_or(g.radius);
            g.levels = f.levels.unwrap_or(g.levels);
            g.rays_per_level = f.rays.unwrap_or(g.rays_per_level);
        }
        g.seed = self.seed.unwrap_or(g.seed);
        g
    }

    pub fn constraint(&self) -> Result<Constraint> {
        Ok(match &self.constraint {
            None => Constraint::None,
            Some(ConstraintSpec::Set(s)) => Constraint::Set { set: s.clone() },
            Some(ConstraintSpec::IneqEq { mu, nu }) => {
                let scalar = |e: &Expression| SmoothMap::expressions(self.dim, vec![e.clone()]);
                Constraint::IneqEq {
                    mu: mu.iter().map(scalar).collect::<Result<_>>()?,
                    nu: nu.iter().map(scalar).collect::<Result<_>>()?,
                }
            }
        })
    }

    pub fn problem(&self) -> Result<Problem> {
        let f = self.objective()?;
        Problem::new(
            f.clone(),
            self.k_cone(f.output_dim())?,
            self.l_set()?,
            self.constraint()?,
            self.xbar()?,
            self.grid_spec(),
        )
    }

    /// `M` for set commands: `set`, else a set constraint.
    pub fn set_spec(&self) -> Result<SetSpec> {
        let s = match (&self.set, &self.constraint) {
            (Some(s), _) => s.clone(),
            (None, Some(ConstraintSpec::Set(s))) => s.clone(),
            _ => return Err(missing("set")),
        };
        check_dim(self.dim, s.dim())?;
        Ok(s)
    }

    pub fn polyhedron(&self) -> Result<PolyhedralSet> {
        match &self.set {
            None => Ok(PolyhedralSet::whole_space(self.dim)),
            Some(s) => s
                .as_polyhedron()
                .filter(|p| p.dim() == self.dim)
                .ok_or_else(|| Error::Invalid("'set' must be a polyhedron of dimension dim".into())),
        }
    }

    pub fn direction(&self) -> Result<Vector> {
        vector(self.direction.as_deref().ok_or_else(|| missing("direction"))?, self.dim)
    }

    /// Explicit `directions`, else the generators of a finite `L`.
    pub fn directions(&self) -> Result<Vec<Vector>> {
        match &self.directions {
            Some(ds) => ds.iter().map(|d| vector(d, self.dim)).collect(),
            None => Ok(self.l_set()?.generators()?.to_vec()),
        }
    }

    /// `e`, or an interior point of `K` when omitted.
    pub fn e_vector(&self, k: &HalfspaceCone) -> Result<Vector> {
        match &self.e {
            Some(e) => vector(e, k.dim()),
            None => k.interior_point()?.ok_or(Error::NotInterior),
        }
    }

    pub fn y_vector(&self, out: usize) -> Result<Vector> {
        vector(self.y.as_deref().ok_or_else(|| missing("y"))?, out)
    }

    pub fn target(&self) -> Result<Target> {
        let t = self.target.clone().ok_or_else(|| missing("target"))?;
        check_dim(self.dim, t.dim()?)?;
        Ok(t)
    }

    pub fn m_set(&self, out: usize) -> Result<Option<DirectionSet>> {
        self.m.as_ref().map(|m| m.build(out)).transpose()
    }

    pub fn c_set(&self, out: usize) -> Result<DirectionSet> {
        self.c.as_ref().ok_or_else(|| missing("c"))?.build(out)
    }

    pub fn g_map(&self) -> Result<Option<(SmoothMap, HalfspaceCone)>> {
        let Some(g) = &self.g else {
            return Ok(None);
        };
        let g = g.build(self.dim)?;
        let q = match &self.q {
            Some(rows) => HalfspaceCone::from_rows(rows.clone())?,
            None => HalfspaceCone::orthant(g.output_dim()),
        };
        check_dim(g.output_dim(), q.dim())?;
        Ok(Some((g, q)))
    }
}
