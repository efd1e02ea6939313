//! Mechanism geometry, poses, rotations and position-level inverse kinematics.
//!
//! Frames: the fixed frame `O-xyz` sits at the base center with `x` pointing to
//! the first base unit. Leg groups are indexed `i = 0..3` (base units at
//! `gamma_i = i * 2π/3`) and the two legs of a group by `j = 0..2`, where `j = 0`
//! takes the `+` sign in the lateral offsets.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Rotation3, Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of base units (leg groups).
pub const GROUPS: usize = 3;
/// Legs per group.
pub const LEGS_PER_GROUP: usize = 2;

/// Per-leg array indexed `[group][leg]`.
pub type PerLeg<T> = [[T; LEGS_PER_GROUP]; GROUPS];

/// The rotation type produced by every rotation constructor in this crate.
pub type RotationMatrix = Rotation3<f64>;

/// Sign of the lateral offset for leg `j`: `(-1)^(j+1)` with one-based `j`.
#[inline]
pub fn leg_sign(leg: usize) -> f64 {
    if leg == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Angle between `OA_i` and the fixed `x` axis.
#[inline]
pub fn gamma(group: usize) -> f64 {
    group as f64 * 2.0 * PI / 3.0
}

/// A design scalar that parameter studies may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignParam {
    A,
    Ds,
    EtaS,
    Ls,
}

impl DesignParam {
    pub const ALL: [DesignParam; 4] = [DesignParam::A, DesignParam::Ds, DesignParam::EtaS, DesignParam::Ls];

    pub fn name(self) -> &'static str {
        match self {
            DesignParam::A => "a",
            DesignParam::Ds => "d_s",
            DesignParam::EtaS => "eta_s",
            DesignParam::Ls => "l_s",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "a" => Some(DesignParam::A),
            "d_s" | "ds" => Some(DesignParam::Ds),
            "eta_s" | "etas" => Some(DesignParam::EtaS),
            "l_s" | "ls" => Some(DesignParam::Ls),
            _ => None,
        }
    }

    /// True if values of this parameter are angles (given in degrees at interfaces).
    pub fn is_angle(self) -> bool {
        self == DesignParam::EtaS
    }
}

/// The seven design scalars of the mechanism.
///
/// Lengths share one (dimensionless) unit. `eta_s` is held in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryParams {
    a: f64,
    b: f64,
    r: f64,
    l_min: f64,
    l_s: f64,
    d_s: f64,
    eta_s: f64,
}

impl GeometryParams {
    /// Builds a validated parameter set. `eta_s_deg` is in degrees.
    pub fn new(a: f64, b: f64, r: f64, l_min: f64, l_s: f64, d_s: f64, eta_s_deg: f64) -> Result<Self> {
        let g = GeometryParams {
            a,
            b,
            r,
            l_min,
            l_s,
            d_s,
            eta_s: eta_s_deg.to_radians(),
        };
        g.validate()?;
        Ok(g)
    }

    /// The reference configuration: a=50, b=14, d_s=50, r=100, l_min=114.5, l_s=50, eta_s=30°.
    pub fn reference() -> Self {
        GeometryParams::new(50.0, 14.0, 100.0, 114.5, 50.0, 50.0, 30.0).expect("reference geometry is valid")
    }

    fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.r, self.l_min, self.l_s, self.d_s, self.eta_s];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("geometry parameters must be finite".into()));
        }
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::InvalidArgument(msg.into())) };
        check(self.a > 0.0, "a must be > 0")?;
        check(self.b >= 0.0, "b must be >= 0")?;
        check(self.r > 0.0, "r must be > 0")?;
        check(self.l_min > 0.0, "l_min must be > 0")?;
        check(self.l_s >= 0.0, "l_s must be >= 0")?;
        check(self.d_s >= 0.0, "d_s must be >= 0")?;
        check(self.eta_s >= 0.0, "eta_s must be >= 0")?;
        check(self.d_s < self.r, "d_s must be < r")?;
        Ok(())
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn l_min(&self) -> f64 {
        self.l_min
    }
    pub fn l_s(&self) -> f64 {
        self.l_s
    }
    pub fn d_s(&self) -> f64 {
        self.d_s
    }
    /// Circular stroke in radians.
    pub fn eta_s(&self) -> f64 {
        self.eta_s
    }
    pub fn eta_s_deg(&self) -> f64 {
        self.eta_s.to_degrees()
    }
    pub fn l_max(&self) -> f64 {
        self.l_min + self.l_s
    }
    /// Characteristic length `L = a/2` used to homogenize the Jacobian.
    pub fn characteristic_length(&self) -> f64 {
        self.a / 2.0
    }

    /// Returns a copy with one design scalar replaced (angles in degrees).
    pub fn with_param(&self, param: DesignParam, value: f64) -> Result<Self> {
        let mut g = *self;
        match param {
            DesignParam::A => g.a = value,
            DesignParam::Ds => g.d_s = value,
            DesignParam::EtaS => g.eta_s = value.to_radians(),
            DesignParam::Ls => g.l_s = value,
        }
        g.validate()?;
        Ok(g)
    }

    /// Current value of a design scalar (angles in degrees).
    pub fn param(&self, param: DesignParam) -> f64 {
        match param {
            DesignParam::A => self.a,
            DesignParam::Ds => self.d_s,
            DesignParam::EtaS => self.eta_s_deg(),
            DesignParam::Ls => self.l_s,
        }
    }

    /// Platform attachment point of leg `(group, leg)` in the platform frame.
    pub fn platform_offset(&self, group: usize, leg: usize) -> Vector3<f64> {
        let local = Vector3::new(3f64.sqrt() * self.a / 2.0, leg_sign(leg) * self.a / 2.0, 0.0);
        z_rotation(gamma(group)) * local
    }

    /// Radius of a cylinder about `z` that contains every reachable platform center.
    ///
    /// The three `j = 0` platform offsets sum to zero in any orientation, so the
    /// center is the mean of three points each within `l_max` of a carriage point,
    /// and carriage points never leave the disc of radius `sqrt(r² + b²/4)`.
    pub fn reach_radius_bound(&self) -> f64 {
        self.l_max() + self.r.hypot(self.b / 2.0)
    }
}

/// Platform pose: center position and z-y-x Euler angles `(phi, theta, psi)`,
/// `R = Rz(psi) Ry(theta) Rx(phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    position: Vector3<f64>,
    euler: [f64; 3],
}

impl Pose {
    pub fn new(position: Vector3<f64>, phi: f64, theta: f64, psi: f64) -> Result<Self> {
        if !position.iter().all(|v| v.is_finite()) || ![phi, theta, psi].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("pose components must be finite".into()));
        }
        if theta.abs() >= PI / 2.0 {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} outside the Euler chart (|theta| < pi/2)"
            )));
        }
        Ok(Pose {
            position,
            euler: [phi, theta, psi],
        })
    }

    /// Identity orientation at `(x, y, z)`.
    pub fn at(x: f64, y: f64, z: f64) -> Self {
        Pose {
            position: Vector3::new(x, y, z),
            euler: [0.0; 3],
        }
    }

    /// Pose from a position and a rotation, converting to the z-y-x Euler chart.
    /// Fails when the rotation sits at `|theta| >= pi/2`.
    pub fn from_rotation(position: Vector3<f64>, rot: &RotationMatrix) -> Result<Self> {
        let [phi, theta, psi] = euler_zyx_from_rotation(rot)?;
        Pose::new(position, phi, theta, psi)
    }

    pub fn position(&self) -> Vector3<f64> {
        self.position
    }
    pub fn euler(&self) -> [f64; 3] {
        self.euler
    }
    pub fn phi(&self) -> f64 {
        self.euler[0]
    }
    pub fn theta(&self) -> f64 {
        self.euler[1]
    }
    pub fn psi(&self) -> f64 {
        self.euler[2]
    }
    pub fn rotation(&self) -> RotationMatrix {
        rotation_zyx(self.euler[0], self.euler[1], self.euler[2])
    }

    pub fn with_position(&self, position: Vector3<f64>) -> Self {
        Pose { position, ..*self }
    }
}

/// Redundant base actuator values: radial strokes `d` and circular angles `eta` (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CarriageState {
    pub d: [f64; GROUPS],
    pub eta: [f64; GROUPS],
}

impl CarriageState {
    pub fn zeros() -> Self {
        Self::default()
    }
    pub fn new(d: [f64; GROUPS], eta: [f64; GROUPS]) -> Self {
        CarriageState { d, eta }
    }
}

/// Leg lengths `l[group][leg]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegLengths(pub PerLeg<f64>);

impl LegLengths {
    pub fn get(&self, group: usize, leg: usize) -> f64 {
        self.0[group][leg]
    }

    /// Flattened in actuator order `l_1^1, l_1^2, l_2^1, ...`.
    pub fn flat(&self) -> [f64; 6] {
        let l = &self.0;
        [l[0][0], l[0][1], l[1][0], l[1][1], l[2][0], l[2][1]]
    }

    /// All lengths within `[lo - tol, hi + tol]`.
    pub fn within(&self, lo: f64, hi: f64, tol: f64) -> bool {
        self.0.iter().flatten().all(|&l| l >= lo - tol && l <= hi + tol)
    }
}

/// Rotation about `z` in the `xy` plane (the `Z_i` / `Z'_i` matrices).
pub fn z_rotation(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// `R1 = Rz(psi) Ry(theta) Rx(phi)`, written out entry by entry.
pub fn rotation_zyx(phi: f64, theta: f64, psi: f64) -> RotationMatrix {
    let (sf, cf) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    let m = Matrix3::new(
        cp * ct,
        -sp * cf + cp * st * sf,
        sp * sf + cp * st * cf,
        sp * ct,
        cp * cf + sp * st * sf,
        -cp * sf + sp * st * cf,
        -st,
        ct * sf,
        ct * cf,
    );
    Rotation3::from_matrix_unchecked(m)
}

/// Euler-Rodrigues rotation by `tau` about a unit `axis`.
pub fn rotation_about_axis(axis: &Vector3<f64>, tau: f64) -> Result<RotationMatrix> {
    let n = axis.norm();
    if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("rotation axis must be unit length, got |axis| = {n}")));
    }
    let (x, y, z) = (axis.x, axis.y, axis.z);
    let (s, c) = tau.sin_cos();
    let v = 1.0 - c;
    let m = Matrix3::new(
        x * x * v + c,
        x * y * v - z * s,
        x * z * v + y * s,
        x * y * v + z * s,
        y * y * v + c,
        y * z * v - x * s,
        x * z * v - y * s,
        y * z * v + x * s,
        z * z * v + c,
    );
    Ok(Rotation3::from_matrix_unchecked(m))
}

/// The in-plane symmetry axis `y'` at 60° from `x`.
pub fn y_prime_axis() -> Vector3<f64> {
    Vector3::new(0.5, 3f64.sqrt() / 2.0, 0.0)
}

/// Inverse of [`rotation_zyx`]: `(phi, theta, psi)` with `|theta| < pi/2`.
pub fn euler_zyx_from_rotation(rot: &RotationMatrix) -> Result<[f64; 3]> {
    let m = rot.matrix();
    let st = -m[(2, 0)];
    if st.abs() >= 1.0 - 1e-12 {
        return Err(Error::InvalidArgument("rotation at the Euler chart singularity |theta| = pi/2".into()));
    }
    let theta = st.asin();
    let phi = m[(2, 1)].atan2(m[(2, 2)]);
    let psi = m[(1, 0)].atan2(m[(0, 0)]);
    Ok([phi, theta, psi])
}

/// Unit-quaternion route for axis-angle rotations; an independent cross-check of
/// [`rotation_about_axis`].
pub fn rotation_from_quaternion(axis: &Vector3<f64>, tau: f64) -> RotationMatrix {
    UnitQuaternion::from_axis_angle(&Unit::new_normalize(*axis), tau).to_rotation_matrix()
}

/// Platform attachment points `B_i^j` in the fixed frame.
pub fn platform_points(g: &GeometryParams, pose: &Pose) -> PerLeg<Vector3<f64>> {
    let rot = pose.rotation();
    let p = pose.position();
    std::array::from_fn(|i| std::array::from_fn(|j| p + rot * g.platform_offset(i, j)))
}

/// Carriage point `D_i^j` for explicit carriage values, without limit checks.
pub fn carriage_point(g: &GeometryParams, group: usize, leg: usize, d: f64, eta: f64) -> Vector3<f64> {
    let local = Vector3::new(g.r() - d, leg_sign(leg) * g.b() / 2.0, 0.0);
    z_rotation(eta + gamma(group)) * local
}

/// Carriage points `D_i^j`, checked against the default stroke ranges of `g`.
pub fn carriage_points(g: &GeometryParams, c: &CarriageState) -> Result<PerLeg<Vector3<f64>>> {
    let limits = crate::reachability::JointLimits::from_geometry(g);
    limits.check_carriage(c)?;
    Ok(carriage_points_unchecked(g, c))
}

pub fn carriage_points_unchecked(g: &GeometryParams, c: &CarriageState) -> PerLeg<Vector3<f64>> {
    std::array::from_fn(|i| std::array::from_fn(|j| carriage_point(g, i, j, c.d[i], c.eta[i])))
}

/// Leg lengths `l_i^j = |B_i^j - D_i^j|`.
pub fn leg_lengths(g: &GeometryParams, pose: &Pose, c: &CarriageState) -> LegLengths {
    let b = platform_points(g, pose);
    let d = carriage_points_unchecked(g, c);
    LegLengths(std::array::from_fn(|i| std::array::from_fn(|j| (b[i][j] - d[i][j]).norm())))
}

/// Modified Grübler-Kutzbach mobility `d(n - g - 1) + sum(f) + nu - xi`.
pub fn mobility(d_order: i64, n_links: i64, g_joints: i64, freedom_sum: i64, nu: i64, xi: i64) -> i64 {
    d_order * (n_links - g_joints - 1) + freedom_sum + nu - xi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig2() -> GeometryParams {
        GeometryParams::reference()
    }

    #[test]
    fn zyx_identity_and_quarter_turn() {
        let r = rotation_zyx(0.0, 0.0, 0.0);
        assert_relative_eq!(*r.matrix(), Matrix3::identity(), epsilon = 1e-15);
        let r = rotation_zyx(0.0, 0.0, PI / 2.0);
        assert_relative_eq!(r * Vector3::x(), Vector3::y(), epsilon = 1e-15);
    }

    #[test]
    fn zyx_matches_triple_product() {
        let rz = z_rotation(0.3);
        let (s, c) = 0.2f64.sin_cos();
        let ry = Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c);
        let (s, c) = 0.1f64.sin_cos();
        let rx = Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c);
        let expected = rz * ry * rx;
        assert_relative_eq!(*rotation_zyx(0.1, 0.2, 0.3).matrix(), expected, epsilon = 1e-12);
    }

    #[test]
    fn axis_rotation_cases() {
        let axis = y_prime_axis();
        assert_relative_eq!(*rotation_about_axis(&axis, 0.0).unwrap().matrix(), Matrix3::identity(), epsilon = 1e-15);
        let rz = rotation_about_axis(&Vector3::z(), PI / 2.0).unwrap();
        assert_relative_eq!(*rz.matrix(), *rotation_zyx(0.0, 0.0, PI / 2.0).matrix(), epsilon = 1e-15);

        let r = rotation_about_axis(&axis, 0.4).unwrap();
        assert_relative_eq!(r * axis, axis, epsilon = 1e-14);
        assert_relative_eq!(r.matrix().trace(), 1.0 + 2.0 * 0.4f64.cos(), epsilon = 1e-14);
        let q = rotation_from_quaternion(&axis, 0.4);
        assert_relative_eq!(*r.matrix(), *q.matrix(), epsilon = 1e-14);
    }

    #[test]
    fn axis_rotation_rejects_non_unit() {
        assert!(matches!(
            rotation_about_axis(&Vector3::new(1.0, 1.0, 0.0), 0.1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn euler_round_trip() {
        let r = rotation_zyx(0.3, -0.7, 2.1);
        let [phi, theta, psi] = euler_zyx_from_rotation(&r).unwrap();
        assert_relative_eq!(phi, 0.3, epsilon = 1e-12);
        assert_relative_eq!(theta, -0.7, epsilon = 1e-12);
        assert_relative_eq!(psi, 2.1, epsilon = 1e-12);
    }

    #[test]
    fn pose_rejects_chart_singularity() {
        assert!(Pose::new(Vector3::zeros(), 0.0, PI / 2.0, 0.0).is_err());
        assert!(Pose::new(Vector3::zeros(), 0.0, -1.6, 0.0).is_err());
        assert!(Pose::new(Vector3::zeros(), 0.0, 1.5, 0.0).is_ok());
    }

    #[test]
    fn geometry_validation() {
        assert!(GeometryParams::new(0.0, 14.0, 100.0, 114.5, 50.0, 50.0, 30.0).is_err());
        assert!(GeometryParams::new(50.0, 14.0, 100.0, 114.5, 50.0, 100.0, 30.0).is_err());
        assert!(GeometryParams::new(50.0, 14.0, 100.0, 114.5, -1.0, 50.0, 30.0).is_err());
        assert!(GeometryParams::new(50.0, 0.0, 100.0, 114.5, 0.0, 0.0, 0.0).is_ok());
        let g = fig2();
        assert_relative_eq!(g.eta_s(), 30f64.to_radians());
        assert_eq!(g.characteristic_length(), 25.0);
        assert_eq!(g.with_param(DesignParam::EtaS, 60.0).unwrap().eta_s_deg().round(), 60.0);
    }

    #[test]
    fn platform_points_examples() {
        let g = fig2();
        let b = platform_points(&g, &Pose::at(0.0, 0.0, 0.0));
        assert_relative_eq!(b[0][0], Vector3::new(25.0 * 3f64.sqrt(), 25.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(b[0][1], Vector3::new(25.0 * 3f64.sqrt(), -25.0, 0.0), epsilon = 1e-12);
        let b = platform_points(&g, &Pose::at(0.0, 0.0, 100.0));
        assert_relative_eq!(b[0][0], Vector3::new(43.30127018922193, 25.0, 100.0), epsilon = 1e-12);

        let rotated = Pose::new(Vector3::zeros(), 0.0, 0.0, 2.0 * PI / 3.0).unwrap();
        let b_rot = platform_points(&g, &rotated);
        let b_id = platform_points(&g, &Pose::at(0.0, 0.0, 0.0));
        let expected = z_rotation(2.0 * PI / 3.0) * Vector3::new(43.30127018922193, 25.0, 0.0);
        assert_relative_eq!(b_rot[0][0], expected, epsilon = 1e-12);
        assert_relative_eq!(b_rot[0][0], b_id[1][0], epsilon = 1e-12);
    }

    #[test]
    fn carriage_points_examples() {
        let g = fig2();
        let d = carriage_points(&g, &CarriageState::zeros()).unwrap();
        assert_relative_eq!(d[0][0], Vector3::new(100.0, 7.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(d[0][1], Vector3::new(100.0, -7.0, 0.0), epsilon = 1e-12);

        let c = CarriageState::new([50.0, 0.0, 0.0], [0.0; 3]);
        assert_relative_eq!(carriage_points(&g, &c).unwrap()[0][0], Vector3::new(50.0, 7.0, 0.0), epsilon = 1e-12);

        let c = CarriageState::new([50.0, 0.0, 0.0], [15f64.to_radians(), 0.0, 0.0]);
        let p = carriage_points(&g, &c).unwrap()[0][0];
        let (s, co) = 15f64.to_radians().sin_cos();
        assert_relative_eq!(p, Vector3::new(50.0 * co - 7.0 * s, 50.0 * s + 7.0 * co, 0.0), epsilon = 1e-12);
        assert_relative_eq!(p, Vector3::new(46.484558, 19.702433, 0.0), epsilon = 1e-6);
        for row in carriage_points(&g, &c).unwrap() {
            for pt in row {
                assert_eq!(pt.z, 0.0);
            }
        }
    }

    #[test]
    fn carriage_points_reject_out_of_limits() {
        let g = fig2();
        let c = CarriageState::new([0.0, 51.0, 0.0], [0.0; 3]);
        assert!(matches!(carriage_points(&g, &c), Err(Error::LimitViolation { group: 1, .. })));
        let c = CarriageState::new([0.0; 3], [0.0, 0.0, 31f64.to_radians()]);
        assert!(matches!(carriage_points(&g, &c), Err(Error::LimitViolation { group: 2, .. })));
        let c = CarriageState::new([0.0; 3], [0.0, -1f64.to_radians(), 0.0]);
        assert!(matches!(carriage_points(&g, &c), Err(Error::LimitViolation { group: 1, .. })));
    }

    #[test]
    fn leg_length_examples() {
        let g = fig2();
        let l = leg_lengths(&g, &Pose::at(0.0, 0.0, 100.0), &CarriageState::zeros());
        assert_relative_eq!(l.get(0, 0), 13538.7436f64.sqrt(), epsilon = 1e-4);
        assert_relative_eq!(l.get(0, 0), 116.357, epsilon = 1e-3);

        // z* solved by bisection on |B - D| = l_min, independent of the closed form
        let f = |z: f64| leg_lengths(&g, &Pose::at(0.0, 0.0, z), &CarriageState::zeros()).get(0, 0) - 114.5;
        let (mut lo, mut hi) = (0.0, 200.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        assert_relative_eq!(lo, 97.834, epsilon = 1e-3);
        let l = leg_lengths(&g, &Pose::at(0.0, 0.0, lo), &CarriageState::zeros());
        assert!(l.0.iter().flatten().all(|&v| (v - 114.5).abs() < 1e-9));
    }

    #[test]
    fn coincident_points_give_zero_length() {
        let g = fig2();
        // Shift the platform so B_1^1 lands on D_1^1.
        let b = platform_points(&g, &Pose::at(0.0, 0.0, 0.0))[0][0];
        let d = carriage_point(&g, 0, 0, 0.0, 0.0);
        let pose = Pose::at(d.x - b.x, d.y - b.y, 0.0);
        assert!(leg_lengths(&g, &pose, &CarriageState::zeros()).get(0, 0) < 1e-12);
    }

    #[test]
    fn mobility_examples() {
        assert_eq!(mobility(6, 20, 24, 42, 0, 0), 12);
        assert_eq!(mobility(6, 14, 18, 36, 0, 0), 6);
        assert_eq!(mobility(6, 2, 1, 1, 0, 0), 1);
    }
}
