//! Velocity-level kinematics.
//!
//! With `x = [P_o; Theta]` and `q = [l (6); d (3); eta (3)]`, each leg gives
//! `l_dot = s^T [I | -u~ R2] x_dot - s^T h d_dot - s^T t eta_dot`, which stacks
//! into `Jx x_dot = Jq q_dot`.

use nalgebra::{Matrix3, Matrix6, RowVector6, SMatrix, SVector, Vector3, Vector6};

use crate::error::{Error, Result};
use crate::geometry::{self, CarriageState, GeometryParams, PerLeg, Pose, GROUPS, LEGS_PER_GROUP};

/// Condition number above which `Jh` is reported singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

pub type Matrix6x12 = SMatrix<f64, 6, 12>;
pub type Vector12 = SVector<f64, 12>;

/// Row index of leg `(group, leg)` in `Jx`, `Jq` and `q`.
#[inline]
pub fn leg_row_index(group: usize, leg: usize) -> usize {
    group * LEGS_PER_GROUP + leg
}

/// Skew-symmetric cross-product matrix: `skew(u) v = u x v`.
pub fn skew(u: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -u.z, u.y, u.z, 0.0, -u.x, -u.y, u.x, 0.0)
}

/// `R2` with `omega = R2 [phi_dot, theta_dot, psi_dot]` for `R = Rz(psi) Ry(theta) Rx(phi)`.
pub fn euler_rate_map(phi: f64, theta: f64, psi: f64) -> Matrix3<f64> {
    let _ = phi;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    Matrix3::new(ct * cp, -sp, 0.0, ct * sp, cp, 0.0, -st, 0.0, 1.0)
}

/// `h = dD/dd` and `t = dD/deta` for leg `(group, leg)`.
pub fn carriage_rate_basis(g: &GeometryParams, c: &CarriageState, group: usize, leg: usize) -> (Vector3<f64>, Vector3<f64>) {
    let w = c.eta[group] + geometry::gamma(group);
    let (s, co) = w.sin_cos();
    let x = g.r() - c.d[group];
    let y = geometry::leg_sign(leg) * g.b() / 2.0;
    let h = Vector3::new(-co, -s, 0.0);
    let t = Vector3::new(-s * x - co * y, co * x - s * y, 0.0);
    (h, t)
}

/// Scales the rotational columns of `jx` by `1 / L`.
pub fn homogenize(jx: &Matrix6<f64>, characteristic_length: f64) -> Matrix6<f64> {
    let mut jh = *jx;
    for col in 3..6 {
        jh.column_mut(col).scale_mut(1.0 / characteristic_length);
    }
    jh
}

/// 2-norm condition number; `+inf` when rank deficient.
pub fn condition_number(m: &Matrix6<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if !(min > 0.0) || !max.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// All velocity-level quantities at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianBundle {
    pub jx: Matrix6<f64>,
    pub jq: Matrix6x12,
    pub jh: Matrix6<f64>,
    /// `Jh^-1 Jq`; maps `q_dot` to `[P_dot; L Theta_dot]`.
    pub j: Matrix6x12,
    pub legs_unit: PerLeg<Vector3<f64>>,
    pub r2: Matrix3<f64>,
    pub characteristic_length: f64,
}

impl JacobianBundle {
    pub fn condition_number(&self) -> f64 {
        condition_number(&self.jh)
    }

    /// Pose rate `[P_dot; Theta_dot]` produced by actuator rates `q_dot`.
    pub fn pose_rate(&self, q_dot: &Vector12) -> Vector6<f64> {
        let mut x = self.j * q_dot;
        for k in 3..6 {
            x[k] /= self.characteristic_length;
        }
        x
    }

    /// Leg rates `l_dot = Jx x_dot - E d_dot - F eta_dot`.
    pub fn leg_rates(&self, x_dot: &Vector6<f64>, d_dot: &[f64; GROUPS], eta_dot: &[f64; GROUPS]) -> Vector6<f64> {
        let mut l = self.jx * x_dot;
        for row in 0..6 {
            let group = row / LEGS_PER_GROUP;
            l[row] -= self.jq[(row, 6 + group)] * d_dot[group] + self.jq[(row, 9 + group)] * eta_dot[group];
        }
        l
    }
}

/// Builds `Jx`, `Jq`, `Jh` and `J = Jh^-1 Jq`. `s` points from `D` to `B`.
pub fn jacobians(g: &GeometryParams, pose: &Pose, c: &CarriageState) -> Result<JacobianBundle> {
    let rot = pose.rotation();
    let r2 = euler_rate_map(pose.phi(), pose.theta(), pose.psi());
    let b = geometry::platform_points(g, pose);
    let d = geometry::carriage_points_unchecked(g, c);

    let mut jx = Matrix6::zeros();
    let mut jq = Matrix6x12::zeros();
    let mut legs_unit = [[Vector3::zeros(); LEGS_PER_GROUP]; GROUPS];
    for i in 0..GROUPS {
        for j in 0..LEGS_PER_GROUP {
            let leg = b[i][j] - d[i][j];
            let len = leg.norm();
            if !(len > 1e-12) {
                return Err(Error::Degenerate { group: i, leg: j });
            }
            let s = leg / len;
            let u = rot * g.platform_offset(i, j);
            let row = leg_row_index(i, j);
            let rot_part = -(s.transpose() * skew(&u) * r2);
            jx.set_row(row, &RowVector6::new(s.x, s.y, s.z, rot_part[0], rot_part[1], rot_part[2]));

            let (h, t) = carriage_rate_basis(g, c, i, j);
            jq[(row, row)] = 1.0;
            jq[(row, 6 + i)] = s.dot(&h);
            jq[(row, 9 + i)] = s.dot(&t);
            legs_unit[i][j] = s;
        }
    }

    let big_l = g.characteristic_length();
    let jh = homogenize(&jx, big_l);
    let singular = |condition: f64| Error::Singular {
        condition,
        position: pose.position().into(),
        euler: pose.euler(),
    };
    let cond = condition_number(&jh);
    if !(cond <= SINGULAR_CONDITION) {
        return Err(singular(cond));
    }
    let jh_inv = jh.try_inverse().ok_or_else(|| singular(cond))?;
    Ok(JacobianBundle {
        jx,
        jq,
        jh,
        j: jh_inv * jq,
        legs_unit,
        r2,
        characteristic_length: big_l,
    })
}
