//! Model metric spaces: Euclidean space, round spheres (k > 0), hyperbolic
//! space (k < 0) and explicit finite metrics, with distances, geodesics,
//! angles, comparison-triangle side lengths and deterministic candidate grids.
//!
//! Spheres of curvature k are realized at radius 1/sqrt(k) in ambient
//! coordinates; hyperbolic spaces use the hyperboloid model in Minkowski
//! space scaled to 1/sqrt(-k). All arccos/arccosh arguments are clamped to
//! their domains before evaluation so floating-point drift near 0 and pi
//! cannot produce NaN.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for accepting a point as lying on a model surface.
const POINT_ACCEPT_TOL: f64 = 1e-6;
/// Cosine margin below -1 + this is treated as an antipodal configuration.
const ANTIPODAL_TOL: f64 = 1e-12;
/// Distances below this are treated as coincident points.
const COINCIDENT_TOL: f64 = 1e-12;

/// A point of a model space.
///
/// Euclidean points are Cartesian vectors in R^n, sphere points live on the
/// radius-1/sqrt(k) sphere in R^(n+1), hyperbolic points on the hyperboloid
/// in R^(n+1), and points of a finite space are indices into its distance
/// table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coords(Vec<f64>),
    Index(usize),
}

impl Point {
    pub fn coords(values: impl Into<Vec<f64>>) -> Self {
        Point::Coords(values.into())
    }

    pub fn index(i: usize) -> Self {
        Point::Index(i)
    }

    pub fn as_coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords(c) => Some(c),
            Point::Index(_) => None,
        }
    }

    pub fn as_index(&self) -> Option<usize> {
        match self {
            Point::Index(i) => Some(*i),
            Point::Coords(_) => None,
        }
    }
}

/// Symmetric distance matrix backing a finite metric space.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTable {
    size: usize,
    entries: Vec<f64>,
}

impl DistanceTable {
    /// Validates symmetry, a zero diagonal, nonnegativity and the triangle
    /// inequality (up to 1e-9).
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidSpace("empty distance table".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidSpace(format!(
                    "distance table must be square, row has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidSpace(
                        "distance table entries must be finite and nonnegative".into(),
                    ));
                }
                entries.push(v);
            }
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidSpace("distance table diagonal must be zero".into()));
            }
            for j in 0..i {
                if (entries[i * n + j] - entries[j * n + i]).abs() > 1e-12 {
                    return Err(Error::InvalidSpace("distance table must be symmetric".into()));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    if entries[i * n + j] > entries[i * n + l] + entries[l * n + j] + 1e-9 {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for indices ({i}, {j}, {l})"
                        )));
                    }
                }
            }
        }
        Ok(DistanceTable { size: n, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }
}

/// A simply connected model space of constant curvature, or an explicit
/// finite metric.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpace {
    Euclidean { dim: usize },
    Sphere { curvature: f64, dim: usize },
    Hyperbolic { curvature: f64, dim: usize },
    Finite { table: DistanceTable },
}

impl ModelSpace {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        Ok(ModelSpace::Euclidean { dim })
    }

    pub fn sphere(curvature: f64, dim: usize) -> Result<Self> {
        if !(curvature > 0.0) || !curvature.is_finite() {
            return Err(Error::InvalidSpace("sphere requires curvature k > 0".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        Ok(ModelSpace::Sphere { curvature, dim })
    }

    pub fn hyperbolic(curvature: f64, dim: usize) -> Result<Self> {
        if !(curvature < 0.0) || !curvature.is_finite() {
            return Err(Error::InvalidSpace("hyperbolic requires curvature k < 0".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        Ok(ModelSpace::Hyperbolic { curvature, dim })
    }

    pub fn finite(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(ModelSpace::Finite { table: DistanceTable::new(rows)? })
    }

    pub fn curvature(&self) -> f64 {
        match self {
            ModelSpace::Euclidean { .. } | ModelSpace::Finite { .. } => 0.0,
            ModelSpace::Sphere { curvature, .. } => *curvature,
            ModelSpace::Hyperbolic { curvature, .. } => *curvature,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            ModelSpace::Euclidean { dim }
            | ModelSpace::Sphere { dim, .. }
            | ModelSpace::Hyperbolic { dim, .. } => Some(*dim),
            ModelSpace::Finite { .. } => None,
        }
    }

    pub fn is_finite_kind(&self) -> bool {
        matches!(self, ModelSpace::Finite { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelSpace::Euclidean { .. } => "euclidean",
            ModelSpace::Sphere { .. } => "sphere",
            ModelSpace::Hyperbolic { .. } => "hyperbolic",
            ModelSpace::Finite { .. } => "finite",
        }
    }

    /// Number of ambient coordinates a point carries.
    pub fn ambient_dim(&self) -> Option<usize> {
        match self {
            ModelSpace::Euclidean { dim } => Some(*dim),
            ModelSpace::Sphere { dim, .. } | ModelSpace::Hyperbolic { dim, .. } => Some(dim + 1),
            ModelSpace::Finite { .. } => None,
        }
    }

    /// Model radius 1/sqrt(|k|) for curved spaces.
    fn radius(&self) -> f64 {
        1.0 / self.curvature().abs().sqrt()
    }

    /// Validates a point and snaps it exactly onto the model surface.
    pub fn normalize_point(&self, point: &Point) -> Result<Point> {
        match self {
            ModelSpace::Finite { table } => {
                let i = point.as_index().ok_or_else(|| Error::InvalidPoint {
                    kind: "finite",
                    reason: "expected an index point".into(),
                })?;
                if i >= table.size() {
                    return Err(Error::InvalidPoint {
                        kind: "finite",
                        reason: format!("index {i} out of range for table of size {}", table.size()),
                    });
                }
                Ok(Point::Index(i))
            }
            ModelSpace::Euclidean { dim } => {
                let c = coords_of(point, "euclidean")?;
                check_len(c, *dim, "euclidean")?;
                check_finite(c, "euclidean")?;
                Ok(Point::Coords(c.to_vec()))
            }
            ModelSpace::Sphere { dim, .. } => {
                let c = coords_of(point, "sphere")?;
                check_len(c, dim + 1, "sphere")?;
                check_finite(c, "sphere")?;
                let r = self.radius();
                let n = norm(c);
                if (n - r).abs() > POINT_ACCEPT_TOL * r.max(1.0) {
                    return Err(Error::InvalidPoint {
                        kind: "sphere",
                        reason: format!("norm {n} is not within tolerance of radius {r}"),
                    });
                }
                Ok(Point::Coords(c.iter().map(|v| v * r / n).collect()))
            }
            ModelSpace::Hyperbolic { dim, .. } => {
                let c = coords_of(point, "hyperbolic")?;
                check_len(c, dim + 1, "hyperbolic")?;
                check_finite(c, "hyperbolic")?;
                let r = self.radius();
                let q = minkowski_dot(c, c);
                if c[0] <= 0.0 {
                    return Err(Error::InvalidPoint {
                        kind: "hyperbolic",
                        reason: "time coordinate must be positive".into(),
                    });
                }
                if (q + r * r).abs() > POINT_ACCEPT_TOL * (r * r).max(1.0) {
                    return Err(Error::InvalidPoint {
                        kind: "hyperbolic",
                        reason: format!("Minkowski form {q} is not within tolerance of {}", -r * r),
                    });
                }
                let scale = r / (-q).sqrt();
                Ok(Point::Coords(c.iter().map(|v| v * scale).collect()))
            }
        }
    }

    fn validate_point(&self, point: &Point) -> Result<()> {
        self.normalize_point(point).map(|_| ())
    }

    /// Geodesic distance between two valid points.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        match self {
            ModelSpace::Finite { table } => {
                self.validate_point(p)?;
                self.validate_point(q)?;
                Ok(table.get(p.as_index().unwrap(), q.as_index().unwrap()))
            }
            ModelSpace::Euclidean { .. } => {
                let p = self.normalize_point(p)?;
                let q = self.normalize_point(q)?;
                Ok(norm(&sub(coords(&q), coords(&p))))
            }
            ModelSpace::Sphere { .. } => {
                let p = self.normalize_point(p)?;
                let q = self.normalize_point(q)?;
                let r = self.radius();
                // full-range stable form: theta = 2 atan2(|p-q|, |p+q|);
                // the acos of the inner product loses ~8 digits at either end
                let diff = norm(&sub(coords(&p), coords(&q)));
                let sum: Vec<f64> =
                    coords(&p).iter().zip(coords(&q)).map(|(a, b)| a + b).collect();
                Ok(2.0 * r * diff.atan2(norm(&sum)))
            }
            ModelSpace::Hyperbolic { .. } => {
                let p = self.normalize_point(p)?;
                let q = self.normalize_point(q)?;
                let r = self.radius();
                // sinh(theta/2) = |p-q|_M / (2r), stable at coincidence where
                // acosh(1 + eps) cannot resolve below ~1e-8
                let d = sub(coords(&p), coords(&q));
                let chord = minkowski_dot(&d, &d).max(0.0).sqrt();
                Ok(2.0 * r * (chord / (2.0 * r)).asinh())
            }
        }
    }

    /// Tangent vector at `base` pointing toward `target`, with Euclidean
    /// (resp. Minkowski) length equal to the geodesic distance.
    pub(crate) fn log_map(&self, base: &Point, target: &Point) -> Result<Vec<f64>> {
        let d = self.distance(base, target)?;
        let b = coords(base);
        let t = coords(target);
        match self {
            ModelSpace::Finite { .. } => Err(Error::FiniteUnsupported),
            ModelSpace::Euclidean { .. } => Ok(sub(t, b)),
            ModelSpace::Sphere { .. } => {
                let r = self.radius();
                let cos_theta = clamp(dot(b, t) / (r * r), -1.0, 1.0);
                if cos_theta <= -1.0 + ANTIPODAL_TOL {
                    return Err(Error::AntipodalPoints);
                }
                // component of target orthogonal to base
                let mut u: Vec<f64> = t
                    .iter()
                    .zip(b.iter())
                    .map(|(ti, bi)| ti - cos_theta * bi)
                    .collect();
                let n = norm(&u);
                if n < COINCIDENT_TOL {
                    return Ok(vec![0.0; b.len()]);
                }
                for v in u.iter_mut() {
                    *v *= d / n;
                }
                Ok(u)
            }
            ModelSpace::Hyperbolic { .. } => {
                let r = self.radius();
                let alpha = -minkowski_dot(b, t) / (r * r); // cosh of scaled distance
                let mut u: Vec<f64> = t
                    .iter()
                    .zip(b.iter())
                    .map(|(ti, bi)| ti - alpha * bi)
                    .collect();
                let n2 = minkowski_dot(&u, &u);
                if n2 < COINCIDENT_TOL * COINCIDENT_TOL {
                    return Ok(vec![0.0; b.len()]);
                }
                let n = n2.sqrt();
                for v in u.iter_mut() {
                    *v *= d / n;
                }
                Ok(u)
            }
        }
    }

    /// Exponential map: follows the geodesic from `base` with initial
    /// velocity `v` for unit time.
    pub(crate) fn exp_map(&self, base: &Point, v: &[f64]) -> Result<Point> {
        let b = coords(base);
        match self {
            ModelSpace::Finite { .. } => Err(Error::FiniteUnsupported),
            ModelSpace::Euclidean { .. } => {
                Ok(Point::Coords(b.iter().zip(v.iter()).map(|(a, w)| a + w).collect()))
            }
            ModelSpace::Sphere { .. } => {
                let r = self.radius();
                let n = norm(v);
                if n < COINCIDENT_TOL {
                    return Ok(base.clone());
                }
                let theta = n / r;
                let out: Vec<f64> = b
                    .iter()
                    .zip(v.iter())
                    .map(|(bi, vi)| theta.cos() * bi + theta.sin() * (r / n) * vi)
                    .collect();
                self.normalize_point(&Point::Coords(out))
            }
            ModelSpace::Hyperbolic { .. } => {
                let r = self.radius();
                let n2 = minkowski_dot(v, v);
                if n2 < COINCIDENT_TOL * COINCIDENT_TOL {
                    return Ok(base.clone());
                }
                let n = n2.sqrt();
                let theta = n / r;
                let out: Vec<f64> = b
                    .iter()
                    .zip(v.iter())
                    .map(|(bi, vi)| theta.cosh() * bi + theta.sinh() * (r / n) * vi)
                    .collect();
                self.normalize_point(&Point::Coords(out))
            }
        }
    }

    /// Inner product on the tangent space (Minkowski form for hyperbolic
    /// spaces, Euclidean otherwise).
    pub(crate) fn tangent_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        match self {
            ModelSpace::Hyperbolic { .. } => minkowski_dot(u, v),
            _ => dot(u, v),
        }
    }

    pub(crate) fn tangent_norm(&self, u: &[f64]) -> f64 {
        self.tangent_inner(u, u).max(0.0).sqrt()
    }

    /// Point at fraction `s` along the minimizing geodesic from `p` to `q`.
    ///
    /// Values of `s` outside [0, 1] extend the geodesic, which is what the
    /// finite-difference checks of the first-variation formula rely on; on
    /// the sphere the extension must stay strictly short of the antipode.
    pub fn geodesic_point(&self, p: &Point, q: &Point, s: f64) -> Result<Point> {
        if self.is_finite_kind() {
            return Err(Error::FiniteUnsupported);
        }
        let d = self.distance(p, q)?;
        if d < COINCIDENT_TOL {
            return Err(Error::CoincidentPoints);
        }
        if let ModelSpace::Sphere { .. } = self {
            let r = self.radius();
            if d >= std::f64::consts::PI * r * (1.0 - 1e-9) {
                return Err(Error::AntipodalPoints);
            }
            if (s * d).abs() >= std::f64::consts::PI * r {
                return Err(Error::Hypothesis(format!(
                    "geodesic parameter {s} leaves the injectivity range"
                )));
            }
        }
        if s == 0.0 {
            return Ok(self.normalize_point(p)?);
        }
        let v = self.log_map(p, q)?;
        let scaled: Vec<f64> = v.iter().map(|w| w * s).collect();
        self.exp_map(p, &scaled)
    }

    /// Angle at `vertex` between the initial directions of the geodesics
    /// toward `p` and `q`, in [0, pi].
    pub fn angle(&self, vertex: &Point, p: &Point, q: &Point) -> Result<f64> {
        if self.is_finite_kind() {
            return Err(Error::FiniteUnsupported);
        }
        let u = self.log_map(vertex, p)?;
        let v = self.log_map(vertex, q)?;
        let nu = self.tangent_norm(&u);
        let nv = self.tangent_norm(&v);
        if nu < COINCIDENT_TOL || nv < COINCIDENT_TOL {
            return Err(Error::CoincidentPoints);
        }
        Ok(clamp(self.tangent_inner(&u, &v) / (nu * nv), -1.0, 1.0).acos())
    }

    /// Derivative at t = 0 of t -> d^2(x(t), p) along the unit-speed geodesic
    /// from `x0` toward `toward`: -2 d(x0, p) cos(alpha).
    pub fn squared_distance_derivative(
        &self,
        x0: &Point,
        toward: &Point,
        p: &Point,
    ) -> Result<f64> {
        let d = self.distance(x0, p)?;
        if d < COINCIDENT_TOL {
            return Err(Error::CoincidentPoints);
        }
        if let ModelSpace::Sphere { curvature, .. } = self {
            let bound = std::f64::consts::FRAC_PI_2 / curvature.sqrt();
            if d >= bound {
                return Err(Error::Hypothesis(format!(
                    "d(x0, p) = {d} must be below pi/(2 sqrt k) = {bound}"
                )));
            }
        }
        let alpha = self.angle(x0, toward, p)?;
        Ok(-2.0 * d * alpha.cos())
    }
}

/// Third side of a model-space triangle with side lengths `l1`, `l2` and
/// included angle `alpha`, in the space of constant curvature `k`.
pub fn model_side(k: f64, l1: f64, l2: f64, alpha: f64) -> Result<f64> {
    if !k.is_finite() || !l1.is_finite() || !l2.is_finite() || !alpha.is_finite() {
        return Err(Error::Hypothesis("model_side arguments must be finite".into()));
    }
    if l1 < 0.0 || l2 < 0.0 {
        return Err(Error::Hypothesis("side lengths must be nonnegative".into()));
    }
    if !(-1e-12..=std::f64::consts::PI + 1e-12).contains(&alpha) {
        return Err(Error::Hypothesis(format!("angle {alpha} outside [0, pi]")));
    }
    let alpha = clamp(alpha, 0.0, std::f64::consts::PI);
    if k > 0.0 {
        let limit = std::f64::consts::PI / k.sqrt();
        if l1 > limit + 1e-12 || l2 > limit + 1e-12 {
            return Err(Error::Hypothesis(format!(
                "side lengths must not exceed pi/sqrt(k) = {limit}"
            )));
        }
    }
    // cancellation-free forms: the textbook expansions lose half their
    // precision near coincident endpoints through acos/acosh of 1 + eps
    let half = alpha / 2.0;
    let sh2 = half.sin() * half.sin();
    if k == 0.0 {
        let c2 = (l1 - l2) * (l1 - l2) + 4.0 * l1 * l2 * sh2;
        return Ok(c2.max(0.0).sqrt());
    }
    let s = k.abs().sqrt();
    let (a, b) = (s * l1, s * l2);
    if k > 0.0 {
        // haversine: sin^2(c/2) = sin^2((a-b)/2) + sin a sin b sin^2(alpha/2)
        let h = ((a - b) / 2.0).sin().powi(2) + a.sin() * b.sin() * sh2;
        let h = clamp(h, 0.0, 1.0);
        Ok(2.0 * h.sqrt().atan2((1.0 - h).sqrt()) / s)
    } else {
        // sinh^2(c/2) = sinh^2((a-b)/2) + sinh a sinh b sin^2(alpha/2)
        let h = ((a - b) / 2.0).sinh().powi(2) + a.sinh() * b.sinh() * sh2;
        Ok(2.0 * h.max(0.0).sqrt().asinh() / s)
    }
}

/// Region specification for candidate-grid generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    /// Axis-aligned box in Euclidean space.
    Box { min: Vec<f64>, max: Vec<f64> },
    /// The whole sphere.
    FullSphere,
    /// Spherical cap: all points within geodesic `radius` of `center`.
    Cap { center: Vec<f64>, radius: f64 },
    /// Hyperbolic metric ball around `center`.
    Ball { center: Vec<f64>, radius: f64 },
}

/// Deterministic candidate grid for a region of a model space.
///
/// `resolution` means points per axis for boxes, the total count on circles
/// and 2-spheres, and the ring count for hyperbolic balls.
pub fn sample_grid(space: &ModelSpace, region: &Region, resolution: usize) -> Result<PointCloud> {
    if resolution == 0 {
        return Err(Error::Scenario("grid resolution must be positive".into()));
    }
    let points = match (space, region) {
        (ModelSpace::Euclidean { dim }, Region::Box { min, max }) => {
            if min.len() != *dim || max.len() != *dim {
                return Err(Error::Scenario("box bounds must match the space dimension".into()));
            }
            if min.iter().zip(max.iter()).any(|(a, b)| a > b) {
                return Err(Error::Scenario("empty region: box has min > max".into()));
            }
            let axes: Vec<Vec<f64>> = min
                .iter()
                .zip(max.iter())
                .map(|(&a, &b)| linspace(a, b, resolution))
                .collect();
            let mut out = Vec::new();
            let mut idx = vec![0usize; *dim];
            loop {
                out.push(Point::Coords(
                    idx.iter().enumerate().map(|(ax, &i)| axes[ax][i]).collect(),
                ));
                let mut ax = 0;
                loop {
                    if ax == *dim {
                        return PointCloud::new(space.clone(), out);
                    }
                    idx[ax] += 1;
                    if idx[ax] < resolution {
                        break;
                    }
                    idx[ax] = 0;
                    ax += 1;
                }
            }
        }
        (ModelSpace::Sphere { dim: 1, .. }, Region::FullSphere) => {
            let r = space.radius();
            let mut pts: Vec<Point> = Vec::with_capacity(resolution);
            for i in 0..resolution {
                // even counts get their second half by exact negation so
                // antipodal pairs are antipodal to the last bit
                if resolution % 2 == 0 && i >= resolution / 2 {
                    let mirror = pts[i - resolution / 2].as_coords().unwrap();
                    pts.push(Point::Coords(vec![-mirror[0], -mirror[1]]));
                    continue;
                }
                let t = 2.0 * std::f64::consts::PI * i as f64 / resolution as f64;
                pts.push(Point::Coords(vec![r * t.cos(), r * t.sin()]));
            }
            pts
        }
        (ModelSpace::Sphere { dim: 1, .. }, Region::Cap { center, radius }) => {
            let c = space.normalize_point(&Point::Coords(center.clone()))?;
            let cc = coords(&c);
            let r = space.radius();
            if *radius <= 0.0 {
                return Err(Error::Scenario("empty region: cap radius must be positive".into()));
            }
            let phi0 = cc[1].atan2(cc[0]);
            let half = (radius / r).min(std::f64::consts::PI);
            linspace(-half, half, resolution)
                .into_iter()
                .map(|t| Point::Coords(vec![r * (phi0 + t).cos(), r * (phi0 + t).sin()]))
                .collect()
        }
        (ModelSpace::Sphere { dim: 2, .. }, Region::FullSphere) => {
            fibonacci_cap(space, &[0.0, 0.0, space.radius()], std::f64::consts::PI, resolution)?
        }
        (ModelSpace::Sphere { dim: 2, .. }, Region::Cap { center, radius }) => {
            if *radius <= 0.0 {
                return Err(Error::Scenario("empty region: cap radius must be positive".into()));
            }
            let c = space.normalize_point(&Point::Coords(center.clone()))?;
            let theta = (radius / space.radius()).min(std::f64::consts::PI);
            fibonacci_cap(space, coords(&c), theta, resolution)?
        }
        (ModelSpace::Hyperbolic { dim: 1, .. }, Region::Ball { center, radius }) => {
            if *radius <= 0.0 {
                return Err(Error::Scenario("empty region: ball radius must be positive".into()));
            }
            let c = space.normalize_point(&Point::Coords(center.clone()))?;
            let e = tangent_frame(space, &c)?;
            let mut out = Vec::with_capacity(resolution);
            for t in linspace(-radius, *radius, resolution) {
                let v: Vec<f64> = e[0].iter().map(|w| w * t).collect();
                out.push(space.exp_map(&c, &v)?);
            }
            out
        }
        (ModelSpace::Hyperbolic { dim: 2, .. }, Region::Ball { center, radius }) => {
            if *radius <= 0.0 {
                return Err(Error::Scenario("empty region: ball radius must be positive".into()));
            }
            let c = space.normalize_point(&Point::Coords(center.clone()))?;
            let e = tangent_frame(space, &c)?;
            let mut out = vec![c.clone()];
            if resolution > 1 {
                for ring in 1..resolution {
                    let rho = radius * ring as f64 / (resolution - 1) as f64;
                    for j in 0..resolution {
                        let phi = 2.0 * std::f64::consts::PI * j as f64 / resolution as f64;
                        let v: Vec<f64> = e[0]
                            .iter()
                            .zip(e[1].iter())
                            .map(|(a, b)| rho * (phi.cos() * a + phi.sin() * b))
                            .collect();
                        out.push(space.exp_map(&c, &v)?);
                    }
                }
            }
            out
        }
        (ModelSpace::Finite { .. }, _) => return Err(Error::FiniteUnsupported),
        _ => {
            return Err(Error::Scenario(format!(
                "unsupported region for a {} space of this dimension",
                space.kind_name()
            )))
        }
    };
    PointCloud::new(space.clone(), points)
}

/// Fibonacci lattice of `count` points on the cap of angular radius
/// `theta_max` around `apex` (unit direction times the sphere radius).
fn fibonacci_cap(
    space: &ModelSpace,
    apex: &[f64],
    theta_max: f64,
    count: usize,
) -> Result<Vec<Point>> {
    let r = space.radius();
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    let zmin = theta_max.cos();
    let mut pts = Vec::with_capacity(count);
    for i in 0..count {
        let z = 1.0 - (1.0 - zmin) * (i as f64 + 0.5) / count as f64;
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * i as f64;
        pts.push([rho * phi.cos(), rho * phi.sin(), z]);
    }
    // rotate the pole onto the apex direction
    let a = [apex[0] / r, apex[1] / r, apex[2] / r];
    let out = pts
        .into_iter()
        .map(|p| {
            let q = rotate_pole_to(&a, &p);
            Point::Coords(vec![r * q[0], r * q[1], r * q[2]])
        })
        .collect();
    Ok(out)
}

/// Rodrigues rotation taking the north pole (0,0,1) to the unit vector `a`,
/// applied to the unit vector `p`.
fn rotate_pole_to(a: &[f64; 3], p: &[f64; 3]) -> [f64; 3] {
    let cos_t = a[2];
    if cos_t > 1.0 - 1e-14 {
        return *p;
    }
    if cos_t < -1.0 + 1e-14 {
        return [p[0], -p[1], -p[2]];
    }
    // axis = e_z x a (normalized), angle t with cos t = a_z
    let axis = [-a[1], a[0], 0.0];
    let n = (axis[0] * axis[0] + axis[1] * axis[1]).sqrt();
    let k = [axis[0] / n, axis[1] / n, 0.0];
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let kxp = [
        k[1] * p[2] - k[2] * p[1],
        k[2] * p[0] - k[0] * p[2],
        k[0] * p[1] - k[1] * p[0],
    ];
    let kdp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = p[i] * cos_t + kxp[i] * sin_t + k[i] * kdp * (1.0 - cos_t);
    }
    out
}

/// Minkowski-orthonormal tangent frame at a hyperboloid point, obtained by
/// projecting the spatial coordinate axes and orthogonalizing.
fn tangent_frame(space: &ModelSpace, base: &Point) -> Result<Vec<Vec<f64>>> {
    let b = coords(base);
    let r = space.radius();
    let dim = space.dim().unwrap();
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for axis in 1..=dim + 1 {
        if frame.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim + 1];
        if axis <= dim {
            v[axis] = 1.0;
        } else {
            v[0] = 1.0;
        }
        // project onto the tangent space: v + <v, b> b / r^2
        let vb = minkowski_dot(&v, b);
        for (vi, bi) in v.iter_mut().zip(b.iter()) {
            *vi += vb * bi / (r * r);
        }
        for e in &frame {
            let c = minkowski_dot(&v, e);
            for (vi, ei) in v.iter_mut().zip(e.iter()) {
                *vi -= c * ei;
            }
        }
        let n2 = minkowski_dot(&v, &v);
        if n2 > 1e-18 {
            let n = n2.sqrt();
            frame.push(v.into_iter().map(|w| w / n).collect());
        }
    }
    if frame.len() != dim {
        return Err(Error::Solver("failed to build a tangent frame".into()));
    }
    Ok(frame)
}

/// Ordered finite point set inside a model space. Indices are the identity
/// of points throughout the crate.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    space: ModelSpace,
    points: Vec<Point>,
    labels: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(space: ModelSpace, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSpace("point cloud must be nonempty".into()));
        }
        let points = points
            .iter()
            .map(|p| space.normalize_point(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointCloud { space, points, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Appends a point, validating it against the space.
    pub fn push(&mut self, point: Point) -> Result<()> {
        let p = self.space.normalize_point(&point)?;
        self.points.push(p);
        if let Some(labels) = &mut self.labels {
            labels.push(String::new());
        }
        Ok(())
    }

    /// Maximum pairwise distance; 0 for a single point.
    pub fn diameter(&self) -> Result<f64> {
        let mut best = 0.0_f64;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                best = best.max(self.space.distance(&self.points[i], &self.points[j])?);
            }
        }
        Ok(best)
    }

    /// True when both clouds live in the same space (same kind and
    /// parameters), which is what payoff assembly requires.
    pub fn same_space(&self, other: &PointCloud) -> bool {
        self.space == other.space
    }
}

pub(crate) fn coords(p: &Point) -> &[f64] {
    p.as_coords().expect("coordinate point expected")
}

fn coords_of<'a>(p: &'a Point, kind: &'static str) -> Result<&'a [f64]> {
    p.as_coords().ok_or_else(|| Error::InvalidPoint {
        kind,
        reason: "expected a coordinate point, got an index".into(),
    })
}

fn check_len(c: &[f64], expected: usize, kind: &'static str) -> Result<()> {
    if c.len() != expected {
        return Err(Error::InvalidPoint {
            kind,
            reason: format!("expected {expected} coordinates, got {}", c.len()),
        });
    }
    Ok(())
}

fn check_finite(c: &[f64], kind: &'static str) -> Result<()> {
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidPoint { kind, reason: "non-finite coordinate".into() });
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// Minkowski form with time-like first coordinate: -x0 y0 + sum xi yi.
pub(crate) fn minkowski_dot(a: &[f64], b: &[f64]) -> f64 {
    -a[0] * b[0] + a[1..].iter().zip(b[1..].iter()).map(|(x, y)| x * y).sum::<f64>()
}

pub(crate) fn clamp(v: f64, lo: f64, hi: f64) -> f64 {
    v.max(lo).min(hi)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
