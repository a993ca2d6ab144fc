#include "dercross/crossed_module.hpp"

namespace dercross {

namespace {

double diff(const RealMatrix& a, const RealMatrix& b) { return max_abs(RealMatrix(a - b)); }

}  // namespace

ResidualReport check_group_axioms(const GroupCrossedModule& m, int samples,
                                  std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_group_axioms: samples >= 1");
  ResidualReport rep;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "axioms.group", i);
    RealMatrix a = m.G.random_group(rng);
    RealMatrix A = m.E.random_group(rng);
    RealMatrix B = m.E.random_group(rng);
    rep.fold("tau_morphism", diff(m.tau(RealMatrix(A * B)), RealMatrix(m.tau(A) * m.tau(B))));
    rep.fold("equivariance",
             diff(m.tau(m.mu(a, A)), RealMatrix(a * m.tau(A) * a.inverse())));
    rep.fold("peiffer", diff(m.mu(m.tau(A), B), RealMatrix(A * B * A.inverse())));
  }
  return rep;
}

std::pair<AlgebraCrossedModule, DifferentiatedMaps> differentiate_module(
    const GroupCrossedModule& m, const FdOptions& opts) {
  Map1 tau = m.tau;
  Map2 mu = m.mu;
  DifferentiatedMaps dm;
  dm.tau_dot = [tau, opts](const RealMatrix& X) {
    return fd_curve([&](double t) { return tau(mexp(RealMatrix(t * X))); }, opts);
  };
  dm.mu_dot = [mu, opts](const RealMatrix& a, const RealMatrix& X) {
    return fd_curve([&](double t) { return mu(a, mexp(RealMatrix(t * X))); }, opts);
  };
  dm.dot_mu = [mu, opts](const RealMatrix& x, const RealMatrix& A) {
    RealMatrix ainv = A.inverse();
    return fd_curve(
        [&](double t) { return RealMatrix(mu(mexp(RealMatrix(t * x)), A) * ainv); }, opts);
  };
  // Nested second derivative; the widened step keeps difference-of-difference
  // roundoff under the truncation error.
  dm.dot_mu_dot = [mu, opts](const RealMatrix& x, const RealMatrix& X) {
    const double h = opts.step * opts.nested_factor;
    RealMatrix cp = mexp(RealMatrix(h * x)), cm = mexp(RealMatrix(-h * x));
    RealMatrix Cp = mexp(RealMatrix(h * X)), Cm = mexp(RealMatrix(-h * X));
    return RealMatrix((mu(cp, Cp) - mu(cp, Cm) - mu(cm, Cp) + mu(cm, Cm)) / (4.0 * h * h));
  };
  AlgebraCrossedModule alg{m.E, m.G, dm.tau_dot, dm.dot_mu_dot, m.name + "/fd"};
  return {alg, dm};
}

ResidualReport check_algebra_axioms(const AlgebraCrossedModule& m, int samples,
                                    std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_algebra_axioms: samples >= 1");
  ResidualReport rep;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "axioms.algebra", i);
    RealMatrix u = m.g.random_algebra(rng);
    RealMatrix U = m.e.random_algebra(rng);
    RealMatrix V = m.e.random_algebra(rng);
    rep.fold("t_morphism",
             diff(m.t(commutator(U, V)), commutator(m.t(U), m.t(V))));
    rep.fold("equivariance", diff(m.t(m.m(u, U)), commutator(u, m.t(U))));
    rep.fold("peiffer", diff(m.m(m.t(U), V), commutator(U, V)));
  }
  return rep;
}

ResidualReport check_morphism(const CrossedModuleMorphism& beta, int samples,
                              std::uint64_t seed) {
  ResidualReport rep;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "morphism", i);
    RealMatrix a = beta.source.G.random_group(rng);
    RealMatrix A = beta.source.E.random_group(rng);
    rep.fold("tau_compat", diff(beta.target.tau(beta.Phi(A)), beta.phi(beta.source.tau(A))));
    rep.fold("mu_compat",
             diff(beta.Phi(beta.source.mu(a, A)), beta.target.mu(beta.phi(a), beta.Phi(A))));
  }
  return rep;
}

ResidualReport identity_suite(const GroupCrossedModule& m, const DifferentiatedMaps& dm,
                              int samples, std::uint64_t seed) {
  ResidualReport rep;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "identities", i);
    RealMatrix a = m.G.random_group(rng);
    RealMatrix A = m.E.random_group(rng);
    RealMatrix B = m.E.random_group(rng);
    RealMatrix x = m.G.random_algebra(rng);
    RealMatrix y = m.G.random_algebra(rng);
    RealMatrix X = m.E.random_algebra(rng);

    rep.fold("ident5", diff(dm.tau_dot(dm.dot_mu(x, A)),
                            RealMatrix(x - adjoint_group(m.tau(A), x))));
    rep.fold("ident6", diff(dm.dot_mu(dm.tau_dot(X), A),
                            RealMatrix(X - adjoint_group(A, X))));
    rep.fold("ident7",
             diff(dm.dot_mu(commutator(x, y), A),
                  RealMatrix(dm.dot_mu_dot(x, dm.dot_mu(y, A)) -
                             dm.dot_mu_dot(y, dm.dot_mu(x, A)) -
                             commutator(dm.dot_mu(x, A), dm.dot_mu(y, A)))));
    rep.fold("ident8", diff(dm.dot_mu(x, RealMatrix(A * B)),
                            RealMatrix(dm.dot_mu(x, A) +
                                       adjoint_group(A, dm.dot_mu(x, B)))));
    rep.fold("ident9", diff(dm.dot_mu(adjoint_group(a, x), m.mu(a, A)),
                            dm.mu_dot(a, dm.dot_mu(x, A))));
    rep.fold("ident110",
             diff(adjoint_group(A, dm.dot_mu_dot(x, X)),
                  RealMatrix(dm.dot_mu_dot(x, adjoint_group(A, X)) -
                             commutator(dm.dot_mu(x, A), adjoint_group(A, X)))));
  }
  return rep;
}

ResidualReport variational_suite(const GroupCrossedModule& m, const DifferentiatedMaps& dm,
                                 int samples, std::uint64_t seed, const FdOptions& opts) {
  ResidualReport rep;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "variational", i);
    RealMatrix a = m.G.random_group(rng);
    RealMatrix A = m.E.random_group(rng);
    RealMatrix x = m.G.random_algebra(rng);   // a-direction: a(t) = a e^{tx}
    RealMatrix Y = m.E.random_algebra(rng);   // A-direction: A(t) = A e^{tY}
    RealMatrix X = m.E.random_algebra(rng);
    RealMatrix Z = m.E.random_algebra(rng);   // e-valued variable direction
    RealMatrix z = m.G.random_algebra(rng);   // g-valued variable direction
    RealMatrix dAAinv = A * Y * A.inverse();

    // ident11: delta mu(a,A) mu(a,A)^-1 = mu-dot(a, dot-mu(a^-1 da, A) + dA A^-1)
    {
      RealMatrix base_inv = m.mu(a, A).inverse();
      RealMatrix lhs = fd_curve(
          [&](double t) {
            return RealMatrix(m.mu(RealMatrix(a * mexp(RealMatrix(t * x))),
                                   RealMatrix(A * mexp(RealMatrix(t * Y)))) *
                              base_inv);
          },
          opts);
      RealMatrix rhs = dm.mu_dot(a, RealMatrix(dm.dot_mu(x, A) + dAAinv));
      rep.fold("ident11", diff(lhs, rhs));
    }
    // ident12: delta mu-dot(a,X) = mu-dot(a, dot-mu-dot(a^-1 da, X) + dX)
    {
      RealMatrix lhs = fd_curve(
          [&](double t) {
            return dm.mu_dot(RealMatrix(a * mexp(RealMatrix(t * x))),
                             RealMatrix(X + t * Z));
          },
          opts);
      RealMatrix rhs = dm.mu_dot(a, RealMatrix(dm.dot_mu_dot(x, X) + Z));
      rep.fold("ident12", diff(lhs, rhs));
    }
    // ident13: delta dot-mu(x,A) = dot-mu(dx,A) + dot-mu-dot(x, dAA^-1)
    //          - [dot-mu(x,A), dAA^-1]
    {
      RealMatrix lhs = fd_curve(
          [&](double t) {
            return dm.dot_mu(RealMatrix(x + t * z),
                             RealMatrix(A * mexp(RealMatrix(t * Y))));
          },
          opts);
      RealMatrix rhs = dm.dot_mu(z, A) + dm.dot_mu_dot(x, dAAinv) -
                       commutator(dm.dot_mu(x, A), dAAinv);
      rep.fold("ident13", diff(lhs, rhs));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extended-precision variational residual for the quadratic-convergence check.
// Exact structure maps, long double arithmetic; the only step dependence left
// is the truncation error of the outer variation.

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

LMatrix to_ld(const RealMatrix& m) { return m.cast<long double>(); }

double lmax(const LMatrix& m) {
  long double r = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      r = std::max(r, std::abs(m(i, j)));
  return static_cast<double>(r);
}

struct ExtendedKernels {
  std::function<LMatrix(const LMatrix&, const LMatrix&)> mu, mu_dot, dot_mu, dot_mu_dot;
};

ExtendedKernels extended_kernels(FixtureKind kind, int lin_dim) {
  ExtendedKernels k;
  switch (kind) {
    case FixtureKind::Conj:
      k.mu = [](const LMatrix& a, const LMatrix& A) { return LMatrix(a * A * a.inverse()); };
      k.mu_dot = k.mu;
      k.dot_mu = [](const LMatrix& x, const LMatrix& A) {
        return LMatrix(x - A * x * A.inverse());
      };
      k.dot_mu_dot = [](const LMatrix& x, const LMatrix& X) { return LMatrix(x * X - X * x); };
      break;
    case FixtureKind::Lin: {
      const int n = lin_dim;
      auto vec_of = [n](const LMatrix& A) { return LMatrix(A.topRightCorner(n, 1)); };
      auto embed = [n](const LMatrix& v, bool group) {
        LMatrix r = group ? LMatrix(LMatrix::Identity(n + 1, n + 1))
                          : LMatrix(LMatrix::Zero(n + 1, n + 1));
        r.topRightCorner(n, 1) = v;
        return r;
      };
      k.mu = [=](const LMatrix& a, const LMatrix& A) { return embed(LMatrix(a * vec_of(A)), true); };
      k.mu_dot = [=](const LMatrix& a, const LMatrix& X) {
        return embed(LMatrix(a * vec_of(X)), false);
      };
      k.dot_mu = [=](const LMatrix& x, const LMatrix& A) {
        return embed(LMatrix(x * vec_of(A)), false);
      };
      k.dot_mu_dot = [=](const LMatrix& x, const LMatrix& X) {
        return embed(LMatrix(x * vec_of(X)), false);
      };
      break;
    }
    case FixtureKind::Cover:
      throw std::invalid_argument(
          "extended variational kernels cover CONJ and LIN; run COVER through the "
          "double-precision suite");
  }
  return k;
}

}  // namespace

double variational_residual_extended(FixtureKind kind, double step, int samples,
                                     std::uint64_t seed) {
  FixtureParams params;
  GroupCrossedModule m = make_fixture(kind, params);
  ExtendedKernels k = extended_kernels(kind, params.lin_dim);
  const long double h = step;
  auto lexp = [](const LMatrix& x) { return mexp_generic(x); };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "variational.extended", i);
    LMatrix a = lexp(to_ld(m.G.random_algebra(rng)));
    LMatrix A = lexp(to_ld(m.E.random_algebra(rng)));
    LMatrix x = to_ld(m.G.random_algebra(rng));
    LMatrix Y = to_ld(m.E.random_algebra(rng));
    LMatrix X = to_ld(m.E.random_algebra(rng));
    LMatrix Z = to_ld(m.E.random_algebra(rng));
    LMatrix z = to_ld(m.G.random_algebra(rng));
    LMatrix dAAinv = A * Y * A.inverse();

    auto delta = [&](auto&& f) {
      return LMatrix((f(h) - f(-h)) / (2.0L * h));
    };

    LMatrix lhs11 = delta([&](long double t) {
      return LMatrix(k.mu(LMatrix(a * lexp(LMatrix(t * x))), LMatrix(A * lexp(LMatrix(t * Y)))) *
                     k.mu(a, A).inverse());
    });
    LMatrix rhs11 = k.mu_dot(a, LMatrix(k.dot_mu(x, A) + dAAinv));
    worst = std::max(worst, lmax(LMatrix(lhs11 - rhs11)));

    LMatrix lhs12 = delta([&](long double t) {
      return k.mu_dot(LMatrix(a * lexp(LMatrix(t * x))), LMatrix(X + t * Z));
    });
    LMatrix rhs12 = k.mu_dot(a, LMatrix(k.dot_mu_dot(x, X) + Z));
    worst = std::max(worst, lmax(LMatrix(lhs12 - rhs12)));

    LMatrix lhs13 = delta([&](long double t) {
      return k.dot_mu(LMatrix(x + t * z), LMatrix(A * lexp(LMatrix(t * Y))));
    });
    LMatrix rhs13 = k.dot_mu(z, A) + k.dot_mu_dot(x, dAAinv) -
                    LMatrix(k.dot_mu(x, A) * dAAinv - dAAinv * k.dot_mu(x, A));
    worst = std::max(worst, lmax(LMatrix(lhs13 - rhs13)));
  }
  return worst;
}

}  // namespace dercross
