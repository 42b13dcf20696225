//! Minimum-norm separating hyperplane QP.
//!
//! Solves
//!
//! ```text
//!   min ‖a‖²  s.t.  g_l · a ≥ 1   for every l
//! ```
//!
//! with the dual active-set method of Goldfarb and Idnani, specialised to
//! the identity Hessian in two dimensions. Starting from the unconstrained
//! minimiser `a = 0`, the most violated constraint is repeatedly added;
//! constraints whose multipliers would turn negative are dropped on the way.
//! At most two constraints are ever active.

use thiserror::Error;

use crate::geometry::Vec2;

const EPS: f64 = 1e-12;
const MAX_ITERATIONS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QpError {
    #[error("separating QP has no constraints")]
    NoConstraints,
    #[error("separating QP is infeasible (origin is not strictly separated from the constraint points)")]
    Infeasible,
    #[error("separating QP did not converge in {0} iterations")]
    NoConvergence(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpSolution {
    /// Optimal normal `a`.
    pub a: Vec2,
    /// Indices of the active constraints at the optimum.
    pub active: Vec<usize>,
    /// Lagrange multipliers of `active`, same order.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
}

/// Primal step `z` and dual step `r` for adding constraint normal `n` to the
/// active set with normals `active`.
///
/// With Hessian `2I`: `z = ½ (I − N (NᵀN)⁻¹ Nᵀ) n`, `r = (NᵀN)⁻¹ Nᵀ n`.
fn step_directions(active: &[Vec2], n: Vec2) -> (Vec2, Vec<f64>) {
    match active {
        [] => (n * 0.5, Vec::new()),
        [g] => {
            let r0 = g.dot(n) / g.norm_sq();
            ((n - *g * r0) * 0.5, vec![r0])
        }
        [g, h] => {
            // Two independent normals span the plane: no primal freedom left.
            let (gg, gh, hh) = (g.norm_sq(), g.dot(*h), h.norm_sq());
            let det = gg * hh - gh * gh;
            let (gn, hn) = (g.dot(n), h.dot(n));
            let r0 = (hh * gn - gh * hn) / det;
            let r1 = (gg * hn - gh * gn) / det;
            (Vec2::ZERO, vec![r0, r1])
        }
        _ => unreachable!("at most two constraints are active in the plane"),
    }
}

/// Solves the separating QP for constraint vectors `g`.
pub fn solve_min_norm(g: &[Vec2]) -> Result<QpSolution, QpError> {
    if g.is_empty() {
        return Err(QpError::NoConstraints);
    }
    let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let tol = EPS * scale;

    let mut x = Vec2::ZERO;
    let mut active: Vec<usize> = Vec::with_capacity(2);
    let mut u: Vec<f64> = Vec::with_capacity(2);
    let mut iterations = 0;

    loop {
        // Most violated constraint.
        let (p, s_p) = g
            .iter()
            .enumerate()
            .filter(|(j, _)| !active.contains(j))
            .map(|(j, gj)| (j, gj.dot(x) - 1.0))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((usize::MAX, 0.0));
        if p == usize::MAX || s_p >= -tol {
            return Ok(QpSolution {
                a: x,
                active,
                multipliers: u,
                iterations,
            });
        }

        let n = g[p];
        let mut u_p = 0.0;
        loop {
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                return Err(QpError::NoConvergence(MAX_ITERATIONS));
            }
            let normals: Vec<Vec2> = active.iter().map(|&j| g[j]).collect();
            let (z, r) = step_directions(&normals, n);

            // Largest dual step keeping active multipliers non-negative.
            let mut t_dual = f64::INFINITY;
            let mut drop = None;
            for (k, &rk) in r.iter().enumerate() {
                if rk > EPS {
                    let t = u[k] / rk;
                    if t < t_dual {
                        t_dual = t;
                        drop = Some(k);
                    }
                }
            }
            // Full step that makes constraint p tight.
            let zn = z.dot(n);
            let t_primal = if zn > EPS * n.norm_sq() {
                -(n.dot(x) - 1.0) / zn
            } else {
                f64::INFINITY
            };
            let t = t_dual.min(t_primal);
            if !t.is_finite() {
                return Err(QpError::Infeasible);
            }

            if t_primal.is_finite() {
                x += z * t;
            }
            for (uk, rk) in u.iter_mut().zip(&r) {
                *uk -= t * rk;
            }
            u_p += t;

            if t_primal <= t_dual {
                active.push(p);
                u.push(u_p);
                break;
            }
            let k = drop.expect("finite dual step names a constraint");
            active.remove(k);
            u.remove(k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_constraint() {
        let s = solve_min_norm(&[Vec2::new(2.0, 0.0)]).unwrap();
        assert!((s.a - Vec2::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(s.active, vec![0]);
    }

    #[test]
    fn square_face_is_active() {
        // Vertices of [2,4]×[-1,1] seen from the origin.
        let g = [
            Vec2::new(2.0, -1.0),
            Vec2::new(4.0, -1.0),
            Vec2::new(4.0, 1.0),
            Vec2::new(2.0, 1.0),
        ];
        let s = solve_min_norm(&g).unwrap();
        assert!((s.a - Vec2::new(0.5, 0.0)).norm() < 1e-12, "{:?}", s);
        let mut act = s.active.clone();
        act.sort();
        assert_eq!(act, vec![0, 3]);
        assert!(s.multipliers.iter().all(|&m| m >= 0.0));
    }

    #[test]
    fn dropping_a_constraint() {
        // The most violated constraint at a = 0 is tied; whichever enters
        // first, (1, 0) alone is optimal only if the other is satisfied.
        let g = [Vec2::new(1.0, 3.0), Vec2::new(1.0, -3.0), Vec2::new(1.0, 0.0)];
        let s = solve_min_norm(&g).unwrap();
        for gi in &g {
            assert!(gi.dot(s.a) >= 1.0 - 1e-12);
        }
        assert!((s.a - Vec2::new(1.0, 0.0)).norm() < 1e-12, "{:?}", s);
    }

    #[test]
    fn infeasible_when_origin_is_enclosed() {
        let g = [Vec2::new(1.0, 0.0), Vec2::new(-1.0, 1.0), Vec2::new(-1.0, -1.0)];
        assert_eq!(solve_min_norm(&g), Err(QpError::Infeasible));
        assert_eq!(solve_min_norm(&[]), Err(QpError::NoConstraints));
    }
}
