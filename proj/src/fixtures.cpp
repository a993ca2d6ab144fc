#include "dercross/crossed_module.hpp"

namespace dercross {

namespace {

RealMatrix flatten_basis(const std::vector<RealMatrix>& basis, int n) {
  RealMatrix b(n * n, static_cast<int>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i * n + j, static_cast<int>(k)) = basis[k](i, j);
  return b;
}

void finish_spec(GroupSpec& s) {
  s.dim = static_cast<int>(s.basis.size());
  if (s.dim > 0) {
    RealMatrix b = flatten_basis(s.basis, s.n);
    s.coord_solver = (b.transpose() * b).ldlt().solve(b.transpose());
  } else {
    s.coord_solver = RealMatrix::Zero(0, s.n * s.n);
  }
}

}  // namespace

double GroupSpec::group_membership_residual(const RealMatrix& g) const {
  if (g.rows() != n || g.cols() != n) return 1.0;
  switch (kind) {
    case GroupKind::Rotation3: {
      double ortho = max_abs(RealMatrix(g.transpose() * g - RealMatrix::Identity(3, 3)));
      return std::max(ortho, std::abs(g.determinant() - 1.0));
    }
    case GroupKind::GeneralLinear:
      return std::abs(g.determinant()) > 1e-12 ? 0.0 : 1.0;
    case GroupKind::UnitQuaternionReal4: {
      Quat q = quat_from_lmat(g);
      double shape = max_abs(RealMatrix(g - quat_lmat(q)));
      return std::max(shape, std::abs(q.norm() - 1.0));
    }
    case GroupKind::Translation: {
      RealMatrix expect = RealMatrix::Identity(n, n);
      expect.topRightCorner(n - 1, 1) = g.topRightCorner(n - 1, 1);
      return max_abs(RealMatrix(g - expect));
    }
    case GroupKind::SemidirectRep:
      return std::abs(g.determinant()) > 1e-12 ? 0.0 : 1.0;
  }
  return 1.0;
}

double GroupSpec::algebra_membership_residual(const RealMatrix& x) const {
  if (x.rows() != n || x.cols() != n) return 1.0;
  switch (kind) {
    case GroupKind::Rotation3:
      return max_abs(RealMatrix(x + x.transpose()));
    case GroupKind::GeneralLinear:
      return 0.0;
    case GroupKind::UnitQuaternionReal4: {
      Quat q = quat_from_lmat(x);
      double shape = max_abs(RealMatrix(x - quat_lmat(q)));
      return std::max(shape, std::abs(q[0]));  // imaginary quaternions only
    }
    case GroupKind::Translation: {
      RealMatrix expect = RealMatrix::Zero(n, n);
      expect.topRightCorner(n - 1, 1) = x.topRightCorner(n - 1, 1);
      return max_abs(RealMatrix(x - expect));
    }
    case GroupKind::SemidirectRep:
      return 0.0;
  }
  return 1.0;
}

GroupSpec make_rotation3() {
  GroupSpec s;
  s.kind = GroupKind::Rotation3;
  s.n = 3;
  s.name = "SO3";
  RealMatrix e1 = RealMatrix::Zero(3, 3), e2 = RealMatrix::Zero(3, 3),
             e3 = RealMatrix::Zero(3, 3);
  e1(1, 2) = -1; e1(2, 1) = 1;
  e2(0, 2) = 1;  e2(2, 0) = -1;
  e3(0, 1) = -1; e3(1, 0) = 1;
  s.basis = {e1, e2, e3};
  finish_spec(s);
  return s;
}

GroupSpec make_general_linear(int n) {
  GroupSpec s;
  s.kind = GroupKind::GeneralLinear;
  s.n = n;
  s.name = "GL" + std::to_string(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RealMatrix e = RealMatrix::Zero(n, n);
      e(i, j) = 1;
      s.basis.push_back(e);
    }
  finish_spec(s);
  return s;
}

GroupSpec make_unit_quaternion() {
  GroupSpec s;
  s.kind = GroupKind::UnitQuaternionReal4;
  s.n = 4;
  s.name = "SU2";
  for (int r = 0; r < 3; ++r) {
    Quat q = Quat::Zero();
    q[r + 1] = 0.5;
    s.basis.push_back(quat_lmat(q));
  }
  finish_spec(s);
  return s;
}

GroupSpec make_translation(int n) {
  GroupSpec s;
  s.kind = GroupKind::Translation;
  s.n = n + 1;
  s.name = "T" + std::to_string(n);
  for (int i = 0; i < n; ++i) {
    RealMatrix e = RealMatrix::Zero(n + 1, n + 1);
    e(i, n) = 1;
    s.basis.push_back(e);
  }
  finish_spec(s);
  return s;
}

namespace {

GroupCrossedModule make_conj(const GroupSpec& g) {
  GroupCrossedModule m;
  m.kind = FixtureKind::Conj;
  m.E = g;
  m.G = g;
  m.tau = [](const RealMatrix& a) { return a; };
  m.mu = [](const RealMatrix& a, const RealMatrix& A) {
    return RealMatrix(a * A * a.inverse());
  };
  m.exact.tau_dot = [](const RealMatrix& x) { return x; };
  m.exact.mu_dot = [](const RealMatrix& a, const RealMatrix& x) {
    return RealMatrix(a * x * a.inverse());
  };
  m.exact.dot_mu = [](const RealMatrix& x, const RealMatrix& a) {
    return RealMatrix(x - a * x * a.inverse());
  };
  m.exact.dot_mu_dot = [](const RealMatrix& x, const RealMatrix& y) {
    return commutator(x, y);
  };
  m.algebra = {m.E, m.G, m.exact.tau_dot, m.exact.dot_mu_dot, "conj(" + g.name + ")"};
  m.name = "CONJ(" + g.name + ")";
  return m;
}

GroupCrossedModule make_lin(int n) {
  GroupCrossedModule m;
  m.kind = FixtureKind::Lin;
  m.E = make_translation(n);
  m.G = make_general_linear(n);
  const int N = n;
  auto vec_of = [N](const RealMatrix& A) { return RealMatrix(A.topRightCorner(N, 1)); };
  auto embed_vec = [N](const RealMatrix& v, bool group) {
    RealMatrix r = RealMatrix::Zero(N + 1, N + 1);
    if (group) r = RealMatrix::Identity(N + 1, N + 1);
    r.topRightCorner(N, 1) = v;
    return r;
  };
  m.tau = [N](const RealMatrix&) { return RealMatrix(RealMatrix::Identity(N, N)); };
  m.mu = [=](const RealMatrix& a, const RealMatrix& A) {
    return embed_vec(a * vec_of(A), true);
  };
  m.exact.tau_dot = [N](const RealMatrix&) { return RealMatrix(RealMatrix::Zero(N, N)); };
  m.exact.mu_dot = [=](const RealMatrix& a, const RealMatrix& X) {
    return embed_vec(a * vec_of(X), false);
  };
  m.exact.dot_mu = [=](const RealMatrix& x, const RealMatrix& A) {
    return embed_vec(x * vec_of(A), false);
  };
  m.exact.dot_mu_dot = [=](const RealMatrix& x, const RealMatrix& X) {
    return embed_vec(x * vec_of(X), false);
  };
  m.algebra = {m.E, m.G, m.exact.tau_dot, m.exact.dot_mu_dot, "lin(" + std::to_string(n) + ")"};
  m.name = "LIN(" + std::to_string(n) + ")";
  return m;
}

GroupCrossedModule make_cover() {
  GroupCrossedModule m;
  m.kind = FixtureKind::Cover;
  m.E = make_unit_quaternion();
  m.G = make_rotation3();
  m.tau = [](const RealMatrix& A) { return rotation_from_quat(quat_from_lmat(A)); };
  m.mu = [](const RealMatrix& r, const RealMatrix& A) {
    return quat_lmat(Quat(quat_conj_action(r) * quat_from_lmat(A)));
  };
  // tau-dot maps the r-th quaternion basis vector to the r-th rotation
  // generator; generic X = L_w goes to the cross-product matrix of 2w.
  m.exact.tau_dot = [](const RealMatrix& X) {
    Quat w = quat_from_lmat(X);
    RealMatrix r(3, 3);
    r << 0, -2 * w[3], 2 * w[2],
         2 * w[3], 0, -2 * w[1],
         -2 * w[2], 2 * w[1], 0;
    return r;
  };
  m.exact.mu_dot = [](const RealMatrix& r, const RealMatrix& X) {
    return RealMatrix(quat_conj_action(r) * X * quat_conj_action(r).transpose());
  };
  m.exact.dot_mu = [](const RealMatrix& x, const RealMatrix& A) {
    Quat qd(0.0, 0.5 * x(2, 1), 0.5 * x(0, 2), 0.5 * x(1, 0));
    RealMatrix l = quat_lmat(qd);
    return RealMatrix(l - A * l * A.inverse());
  };
  m.exact.dot_mu_dot = [](const RealMatrix& x, const RealMatrix& X) {
    Quat qd(0.0, 0.5 * x(2, 1), 0.5 * x(0, 2), 0.5 * x(1, 0));
    return commutator(quat_lmat(qd), X);
  };
  m.algebra = {m.E, m.G, m.exact.tau_dot, m.exact.dot_mu_dot, "cover"};
  m.name = "COVER";
  return m;
}

}  // namespace

GroupCrossedModule make_fixture(FixtureKind kind, const FixtureParams& params) {
  switch (kind) {
    case FixtureKind::Conj:
      return params.conj_on_quaternions ? make_conj(make_unit_quaternion())
                                        : make_conj(make_rotation3());
    case FixtureKind::Lin:
      if (params.lin_dim < 1) throw std::invalid_argument("LIN fixture needs dimension >= 1");
      return make_lin(params.lin_dim);
    case FixtureKind::Cover:
      return make_cover();
  }
  throw std::invalid_argument("unknown fixture kind");
}

GroupCrossedModule corrupt_mu(const GroupCrossedModule& m, double factor) {
  GroupCrossedModule c = m;
  Map2 mu = m.mu;
  c.mu = [mu, factor](const RealMatrix& a, const RealMatrix& A) {
    return RealMatrix(factor * mu(a, A));
  };
  c.name = m.name + "/corrupt-mu";
  return c;
}

CrossedModuleMorphism identity_morphism(const GroupCrossedModule& m) {
  CrossedModuleMorphism beta;
  beta.source = m;
  beta.target = m;
  beta.Phi = [](const RealMatrix& a) { return a; };
  beta.phi = [](const RealMatrix& a) { return a; };
  beta.Phi_dot = beta.Phi;
  beta.phi_dot = beta.phi;
  beta.name = "id(" + m.name + ")";
  return beta;
}

GroupCrossedModule discrete_submodule(const GroupCrossedModule& m) {
  GroupCrossedModule d = m;
  GroupSpec trivial = m.E;
  trivial.basis.clear();
  trivial.dim = 0;
  trivial.coord_solver = RealMatrix::Zero(0, trivial.n * trivial.n);
  trivial.name = "1";
  d.E = trivial;
  const int n = m.E.n;
  d.tau = [nG = m.G.n](const RealMatrix&) {
    return RealMatrix(RealMatrix::Identity(nG, nG));
  };
  d.mu = [n](const RealMatrix&, const RealMatrix&) {
    return RealMatrix(RealMatrix::Identity(n, n));
  };
  d.exact.tau_dot = [nG = m.G.n](const RealMatrix&) {
    return RealMatrix(RealMatrix::Zero(nG, nG));
  };
  d.exact.mu_dot = [n](const RealMatrix&, const RealMatrix&) {
    return RealMatrix(RealMatrix::Zero(n, n));
  };
  d.exact.dot_mu = [n](const RealMatrix&, const RealMatrix&) {
    return RealMatrix(RealMatrix::Zero(n, n));
  };
  d.exact.dot_mu_dot = [n](const RealMatrix&, const RealMatrix&) {
    return RealMatrix(RealMatrix::Zero(n, n));
  };
  d.algebra = {d.E, d.G, d.exact.tau_dot, d.exact.dot_mu_dot, "discrete"};
  d.name = m.name + "/discrete";
  return d;
}

CrossedModuleMorphism discrete_inclusion(const GroupCrossedModule& m) {
  CrossedModuleMorphism beta;
  beta.source = discrete_submodule(m);
  beta.target = m;
  beta.Phi = [](const RealMatrix& a) { return a; };  // 1_E -> 1_E
  beta.phi = [](const RealMatrix& a) { return a; };
  beta.Phi_dot = beta.Phi;
  beta.phi_dot = beta.phi;
  beta.name = "inclusion(" + m.name + ")";
  return beta;
}

CrossedModuleMorphism covering_morphism() {
  CrossedModuleMorphism beta;
  beta.source = make_fixture(FixtureKind::Conj, {.lin_dim = 3, .conj_on_quaternions = true});
  beta.target = make_fixture(FixtureKind::Conj);
  GroupCrossedModule cover = make_fixture(FixtureKind::Cover);
  beta.Phi = cover.tau;
  beta.phi = cover.tau;
  beta.Phi_dot = cover.exact.tau_dot;
  beta.phi_dot = cover.exact.tau_dot;
  beta.name = "covering";
  return beta;
}

}  // namespace dercross
