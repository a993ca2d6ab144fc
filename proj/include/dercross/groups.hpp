#ifndef DERCROSS_GROUPS_HPP
#define DERCROSS_GROUPS_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "dercross/graded_matrix.hpp"
#include "dercross/rng.hpp"

namespace dercross {

// ---------------------------------------------------------------------------
// Quaternions as real 4x4 matrices (left/right regular representations).
// Quaternion coordinates are (w, x, y, z).

using Quat = Eigen::Vector4d;

inline RealMatrix quat_lmat(const Quat& q) {
  RealMatrix m(4, 4);
  m << q[0], -q[1], -q[2], -q[3],
       q[1],  q[0], -q[3],  q[2],
       q[2],  q[3],  q[0], -q[1],
       q[3], -q[2],  q[1],  q[0];
  return m;
}

inline RealMatrix quat_rmat(const Quat& q) {
  RealMatrix m(4, 4);
  m << q[0], -q[1], -q[2], -q[3],
       q[1],  q[0],  q[3], -q[2],
       q[2], -q[3],  q[0],  q[1],
       q[3],  q[2], -q[1],  q[0];
  return m;
}

inline Quat quat_from_lmat(const RealMatrix& m) { return m.col(0); }
inline Quat quat_conj(const Quat& q) { return Quat(q[0], -q[1], -q[2], -q[3]); }

inline RealMatrix rotation_from_quat(const Quat& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  RealMatrix r(3, 3);
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

/// Lift of a rotation to the unit quaternions, fixed to the representative
/// with nonnegative scalar part (the two-valuedness of the lift is exactly
/// what the COVER fixture's well-definedness checks exercise).
inline Quat quat_from_rotation(const RealMatrix& r) {
  Quat q;
  const double tr = r.trace();
  if (tr > 0.0) {
    double s = std::sqrt(tr + 1.0) * 2.0;
    q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s,
        (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
    q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s,
        (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
    q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s,
        (r(1, 2) + r(2, 1)) / s;
  } else {
    double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
    q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s,
        (r(1, 2) + r(2, 1)) / s, 0.25 * s;
  }
  q.normalize();
  if (q[0] < 0.0) q = -q;
  return q;
}

/// Conjugation action of a rotation on quaternions, p -> lift(r) p lift(r)^-1.
/// Well defined (both lifts agree) and a genuine group morphism SO(3)->SO(4).
inline RealMatrix quat_conj_action(const RealMatrix& r) {
  Quat q = quat_from_rotation(r);
  return quat_lmat(q) * quat_rmat(quat_conj(q));
}

/// Differential of quat_conj_action along x in so(3).
inline RealMatrix quat_conj_action_dot(const RealMatrix& x) {
  Quat qd(0.0, 0.5 * x(2, 1), 0.5 * x(0, 2), 0.5 * x(1, 0));
  return quat_lmat(qd) - quat_rmat(qd);
}

// ---------------------------------------------------------------------------
// Matrix group descriptors.

enum class GroupKind {
  Rotation3,            // SO(3), 3x3
  GeneralLinear,        // GL(n), n x n
  UnitQuaternionReal4,  // SU(2) as the left regular representation, 4x4
  Translation,          // (R^n, +) as unipotent (n+1) x (n+1) blocks
  SemidirectRep         // matrix image of a semidirect product E x| G
};

struct GroupSpec {
  GroupKind kind = GroupKind::GeneralLinear;
  int n = 0;    // ambient matrix size
  int dim = 0;  // Lie algebra dimension
  std::string name;
  std::vector<RealMatrix> basis;  // Lie algebra basis
  RealMatrix coord_solver;        // pseudo-inverse of the flattened basis

  RealMatrix from_coords(const RealVector& c) const {
    RealMatrix x = RealMatrix::Zero(n, n);
    for (int i = 0; i < dim; ++i) x += c[i] * basis[i];
    return x;
  }
  RealVector coords(const RealMatrix& x) const {
    RealVector f(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) f[i * n + j] = x(i, j);
    return coord_solver * f;
  }

  /// Algebra element with basis coefficients uniform in [-0.8, 0.8]; group
  /// elements are mexp of these, which keeps every sample well inside the
  /// mlog chart and the finite-difference comfort zone.
  RealMatrix random_algebra(Rng& rng) const {
    RealVector c(dim);
    for (int i = 0; i < dim; ++i) c[i] = rng.uniform(-0.8, 0.8);
    return from_coords(c);
  }
  RealMatrix random_group(Rng& rng) const { return mexp(random_algebra(rng)); }

  double group_membership_residual(const RealMatrix& g) const;
  double algebra_membership_residual(const RealMatrix& x) const;
};

GroupSpec make_rotation3();
GroupSpec make_general_linear(int n);
GroupSpec make_unit_quaternion();
GroupSpec make_translation(int n);

// ---------------------------------------------------------------------------
// Spec-facing element types. The bodies must satisfy the tagged membership
// constraints; souls are nilpotent by construction of the coefficient ring.

struct MatrixGroupElement {
  GradedMatrix entries;
  std::string group_tag;
};

struct MatrixAlgebraElement {
  GradedMatrix entries;
  std::string algebra_tag;
  int degree_tag = 0;
};

inline MatrixGroupElement make_group_element(const GroupSpec& spec, const GradedMatrix& m,
                                             double tol = 1e-9) {
  double r = spec.group_membership_residual(body(m));
  if (r > tol)
    throw std::domain_error("group element body outside " + spec.name +
                            " (residual " + std::to_string(r) + ")");
  return {m, spec.name};
}

inline MatrixAlgebraElement make_algebra_element(const GroupSpec& spec, const GradedMatrix& m,
                                                 int degree_tag = 0, double tol = 1e-9) {
  double r = spec.algebra_membership_residual(body(m));
  if (r > tol)
    throw std::domain_error("algebra element body outside Lie(" + spec.name + ")");
  return {m, spec.name, degree_tag};
}

/// Ad(g) X = g X g^-1.
inline GradedMatrix adjoint_group(const GradedMatrix& g, const GradedMatrix& x) {
  if (g.rows() != x.rows() || g.cols() != x.cols())
    throw std::invalid_argument("adjoint_group: shape mismatch");
  return g * x * ginverse(g);
}

inline RealMatrix adjoint_group(const RealMatrix& g, const RealMatrix& x) {
  if (g.rows() != x.rows() || g.cols() != x.cols())
    throw std::invalid_argument("adjoint_group: shape mismatch");
  return g * x * g.inverse();
}

}  // namespace dercross

#endif  // DERCROSS_GROUPS_HPP
