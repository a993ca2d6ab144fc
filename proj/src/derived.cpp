#include "dercross/derived.hpp"

namespace dercross {

namespace {

void require_same_module(const GroupCrossedModule& m, const std::string& elem_module) {
  if (m.name != elem_module)
    throw std::invalid_argument("derived element belongs to module '" + elem_module +
                                "', expected '" + m.name + "'");
}

void require_same_modality(Modality a, Modality b) {
  if (a != b) throw std::invalid_argument("mixed abar/alpha modalities");
}

std::map<Monomial, RealMatrix> monomial_split(const GradedMatrix& m) {
  std::map<Monomial, RealMatrix> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (const auto& [mono, c] : m(i, j).terms()) {
        auto it = out.find(mono);
        if (it == out.end())
          it = out.emplace(mono, RealMatrix::Zero(m.rows(), m.cols())).first;
        it->second(i, j) = c;
      }
  return out;
}

AlgebraPtr algebra_of(const GradedMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j).algebra()) return m(i, j).algebra();
  return nullptr;
}

GradedMatrix assemble(Eigen::Index rows, Eigen::Index cols, const AlgebraPtr& alg,
                      const std::map<Monomial, RealMatrix>& parts) {
  GradedMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = GradedScalar(alg);
  for (const auto& [mono, mat] : parts)
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (mat(i, j) != 0.0) out(i, j).add_term(mono, mat(i, j));
  return out;
}

}  // namespace

GradedMatrix lift_linear(const Map1& f, const GradedMatrix& x) {
  auto parts = monomial_split(x);
  std::map<Monomial, RealMatrix> out;
  Eigen::Index r = 0, c = 0;
  for (auto& [mono, mat] : parts) {
    RealMatrix v = f(mat);
    r = v.rows();
    c = v.cols();
    out.emplace(mono, std::move(v));
  }
  if (parts.empty()) {
    RealMatrix v = f(RealMatrix::Zero(x.rows(), x.cols()));
    return from_real(v, algebra_of(x));
  }
  return assemble(r, c, algebra_of(x), out);
}

GradedMatrix lift_bilinear(const Map2& f, const GradedMatrix& a, const GradedMatrix& b) {
  AlgebraPtr alg = algebra_of(a) ? algebra_of(a) : algebra_of(b);
  auto pa = monomial_split(a);
  auto pb = monomial_split(b);
  std::map<Monomial, RealMatrix> out;
  Eigen::Index r = -1, c = -1;
  for (const auto& [ma, ca] : pa)
    for (const auto& [mb, cb] : pb) {
      RealMatrix v = f(ca, cb);
      r = v.rows();
      c = v.cols();
      int sign = 1;
      Monomial mono;
      if (ma.empty() || mb.empty()) {
        mono = ma.empty() ? mb : ma;
      } else {
        auto mm = mul_monomials(*alg, ma, mb);
        if (!mm) continue;
        mono = mm->first;
        sign = mm->second;
      }
      auto it = out.find(mono);
      if (it == out.end()) it = out.emplace(mono, RealMatrix::Zero(r, c)).first;
      it->second += sign * v;
    }
  if (r < 0) {
    RealMatrix v = f(RealMatrix::Zero(a.rows(), a.cols()), RealMatrix::Zero(b.rows(), b.cols()));
    return from_real(v, alg);
  }
  return assemble(r, c, alg, out);
}

DerivedGroupElement derived_identity(const GroupCrossedModule& m) {
  return {RealMatrix::Identity(m.G.n, m.G.n), RealMatrix::Zero(m.E.n, m.E.n), m.name,
          Modality::AlphaBar};
}

DerivedGroupElement make_derived(const GroupCrossedModule& m, RealMatrix a, RealMatrix L,
                                 Modality modality) {
  if (m.G.group_membership_residual(a) > 1e-9)
    throw std::domain_error("derived element: a outside " + m.G.name);
  if (m.E.algebra_membership_residual(L) > 1e-9)
    throw std::domain_error("derived element: L outside Lie(" + m.E.name + ")");
  return {std::move(a), std::move(L), m.name, modality};
}

DerivedAlgebraElement make_derived_algebra(const GroupCrossedModule& m, RealMatrix u,
                                           RealMatrix U, Modality modality) {
  if (m.G.algebra_membership_residual(u) > 1e-9)
    throw std::domain_error("derived algebra element: u outside Lie(" + m.G.name + ")");
  if (m.E.algebra_membership_residual(U) > 1e-9)
    throw std::domain_error("derived algebra element: U outside Lie(" + m.E.name + ")");
  return {std::move(u), std::move(U), m.name, modality};
}

DerivedGroupElement dmul(const GroupCrossedModule& m, const DerivedGroupElement& p,
                         const DerivedGroupElement& q) {
  require_same_module(m, p.module);
  require_same_module(m, q.module);
  require_same_modality(p.modality, q.modality);
  return {RealMatrix(p.a * q.a), RealMatrix(p.L + m.exact.mu_dot(p.a, q.L)), m.name,
          p.modality};
}

DerivedGroupElement dinv(const GroupCrossedModule& m, const DerivedGroupElement& p) {
  require_same_module(m, p.module);
  RealMatrix ainv = p.a.inverse();
  return {ainv, RealMatrix(-m.exact.mu_dot(ainv, p.L)), m.name, p.modality};
}

DerivedAlgebraElement dbracket(const GroupCrossedModule& m, const DerivedAlgebraElement& y,
                               const DerivedAlgebraElement& w) {
  require_same_module(m, y.module);
  require_same_module(m, w.module);
  require_same_modality(y.modality, w.modality);
  const auto& mm = m.exact.dot_mu_dot;
  return {commutator(y.u, w.u), RealMatrix(mm(y.u, w.U) - mm(w.u, y.U)), m.name, y.modality};
}

DerivedAlgebraElement d_adjoint(const GroupCrossedModule& m, const DerivedGroupElement& p,
                                const DerivedAlgebraElement& y, bool inverse) {
  require_same_module(m, p.module);
  require_same_module(m, y.module);
  if (!inverse) {
    RealMatrix adu = adjoint_group(p.a, y.u);
    return {adu,
            RealMatrix(m.exact.mu_dot(p.a, y.U) - m.exact.dot_mu_dot(adu, p.L)),
            m.name, y.modality};
  }
  RealMatrix ainv = p.a.inverse();
  RealMatrix adu = adjoint_group(ainv, y.u);
  return {adu,
          RealMatrix(m.exact.mu_dot(ainv, RealMatrix(y.U + m.exact.dot_mu_dot(y.u, p.L)))),
          m.name, y.modality};
}

DerivedAlgebraElement mc_form(const GroupCrossedModule& m, const DerivedCurve& curve,
                              double t0, Side side, const FdOptions& opts) {
  DerivedGroupElement at = curve.values(t0);
  require_same_module(m, at.module);
  RealMatrix gdot = fd_curve([&](double t) { return curve.values(t0 + t).a; }, opts);
  RealMatrix edot = fd_curve([&](double t) { return curve.values(t0 + t).L; }, opts);
  if (side == Side::Left) {
    RealMatrix u = gdot * at.a.inverse();
    return {u, RealMatrix(-(edot - m.exact.dot_mu_dot(u, at.L))), m.name, at.modality};
  }
  RealMatrix ginv = at.a.inverse();
  RealMatrix u = ginv * gdot;
  return {u, RealMatrix(-m.exact.mu_dot(ginv, edot)), m.name, at.modality};
}

GradedDerivedElement make_graded_derived(const GroupCrossedModule& m, int degree,
                                         GradedMatrix j, GradedMatrix J) {
  auto check = [&](const GradedMatrix& mat, int want) {
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        auto d = mat(r, c).degree();
        if (!d)
          throw std::invalid_argument("graded derived element: inhomogeneous entry");
        if (!mat(r, c).is_zero() && *d != want)
          throw std::invalid_argument("graded derived element: entry degree " +
                                      std::to_string(*d) + ", expected " +
                                      std::to_string(want));
      }
  };
  check(j, degree);
  check(J, degree + 1);
  return {degree, std::move(j), std::move(J), m.name};
}

GradedDerivedElement graded_bracket(const GroupCrossedModule& m,
                                    const GradedDerivedElement& s,
                                    const GradedDerivedElement& t) {
  require_same_module(m, s.module);
  require_same_module(m, t.module);
  const int p = s.degree, q = t.degree;
  GradedMatrix jk = graded_commutator(s.j, t.j, p, q);
  GradedMatrix mjK = lift_bilinear(m.exact.dot_mu_dot, s.j, t.J);
  GradedMatrix mkJ = lift_bilinear(m.exact.dot_mu_dot, t.j, s.J);
  GradedMatrix J = (p * q) % 2 ? GradedMatrix(mjK + mkJ) : GradedMatrix(mjK - mkJ);
  return {p + q, std::move(jk), std::move(J), m.name};
}

GradedDerivedElement coboundary_dt(const GroupCrossedModule& m,
                                   const GradedDerivedElement& s) {
  require_same_module(m, s.module);
  GradedMatrix tJ = lift_linear(m.algebra.t, s.J);
  if (s.degree % 2) tJ = GradedMatrix(-tJ);
  AlgebraPtr alg = algebra_of(s.J) ? algebra_of(s.J) : algebra_of(s.j);
  GradedMatrix zero = from_real(RealMatrix::Zero(m.E.n, m.E.n), alg);
  return {s.degree + 1, std::move(tJ), std::move(zero), m.name};
}

DerivedGroupElement cross_mode(const DerivedGroupElement& p) {
  DerivedGroupElement q = p;
  q.modality = p.modality == Modality::AlphaBar ? Modality::Alpha : Modality::AlphaBar;
  return q;
}

DerivedAlgebraElement cross_mode(const DerivedAlgebraElement& y) {
  DerivedAlgebraElement w = y;
  w.modality = y.modality == Modality::AlphaBar ? Modality::Alpha : Modality::AlphaBar;
  return w;
}

DerivedGroupElement derived_morphism(const CrossedModuleMorphism& beta,
                                     const DerivedGroupElement& p, const FdOptions& opts) {
  require_same_module(beta.source, p.module);
  Map1 phidot = beta.Phi_dot;
  if (!phidot) {
    Map1 Phi = beta.Phi;
    phidot = [Phi, opts](const RealMatrix& X) {
      return fd_curve([&](double t) { return Phi(mexp(RealMatrix(t * X))); }, opts);
    };
  }
  return {beta.phi(p.a), phidot(p.L), beta.target.name, p.modality};
}

DerivedAlgebraElement derived_morphism(const CrossedModuleMorphism& beta,
                                       const DerivedAlgebraElement& y,
                                       const FdOptions& opts) {
  require_same_module(beta.source, y.module);
  Map1 Phidot = beta.Phi_dot, phidot = beta.phi_dot;
  if (!Phidot) {
    Map1 Phi = beta.Phi;
    Phidot = [Phi, opts](const RealMatrix& X) {
      return fd_curve([&](double t) { return Phi(mexp(RealMatrix(t * X))); }, opts);
    };
  }
  if (!phidot) {
    Map1 phi = beta.phi;
    phidot = [phi, opts](const RealMatrix& x) {
      return fd_curve([&](double t) { return phi(mexp(RealMatrix(t * x))); }, opts);
    };
  }
  return {phidot(y.u), Phidot(y.U), beta.target.name, y.modality};
}

// ---------------------------------------------------------------------------
// Derivation transports of derived-group-valued fields.

namespace {

GradedMatrix field_O(const DerivedField& c, const RealVector& x, const FieldGenerators& g,
                     int nE) {
  GradedMatrix O = from_real(RealMatrix::Zero(nE, nE), g.alg);
  for (std::size_t j = 0; j < c.O.size(); ++j) {
    GradedScalar yj = GradedScalar::generator(g.alg, g.y.at(j), 1.0);
    O += yj * from_real(c.O[j](x), g.alg);
  }
  return O;
}

RealMatrix fd_x(const std::function<RealMatrix(const RealVector&)>& f, const RealVector& x,
                int i, double h) {
  RealVector xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (f(xp) - f(xm)) / (2.0 * h);
}

}  // namespace

GradedDerivedElement derivation_transport(const GroupCrossedModule& m,
                                          const DerivedField& c, const FieldDerivation& d,
                                          Side side, const RealVector& x,
                                          const FieldGenerators& gens,
                                          const FdOptions& opts) {
  const RealMatrix r0 = c.r(x);
  const RealMatrix r0inv = r0.inverse();
  GradedMatrix O = field_O(c, x, gens, m.E.n);

  GradedMatrix Dr = from_real(RealMatrix::Zero(m.G.n, m.G.n), gens.alg);
  GradedMatrix DO(m.E.n, m.E.n);
  if (d.kind == FieldDerivation::Kind::OddPartial) {
    const int target = gens.y.at(d.odd_index);
    std::function<GradedScalar(int)> image = [&](int gen) {
      return gen == target ? GradedScalar(gens.alg, 1.0) : GradedScalar(gens.alg);
    };
    for (Eigen::Index i = 0; i < O.rows(); ++i)
      for (Eigen::Index j = 0; j < O.cols(); ++j)
        DO(i, j) = apply_derivation(O(i, j), 1, image);
  } else {
    GradedScalar yj = GradedScalar::generator(gens.alg, gens.y.at(d.odd_index), 1.0);
    Dr = yj * from_real(fd_x(c.r, x, d.even_index, opts.step), gens.alg);
    GradedMatrix dO = from_real(RealMatrix::Zero(m.E.n, m.E.n), gens.alg);
    for (std::size_t k = 0; k < c.O.size(); ++k) {
      GradedScalar yk = GradedScalar::generator(gens.alg, gens.y.at(k), 1.0);
      dO += yk * from_real(fd_x(c.O[k], x, d.even_index, opts.step), gens.alg);
    }
    DO = yj * dO;
  }

  const int p = d.degree();
  const double sp = (p % 2) ? -1.0 : 1.0;
  if (side == Side::Left) {
    GradedMatrix drr = Dr * from_real(r0inv, gens.alg);
    GradedMatrix J = GradedMatrix(DO - lift_bilinear(m.exact.dot_mu_dot, drr, O)) *
                     GradedScalar(sp);
    return {p, std::move(drr), std::move(J), m.name};
  }
  GradedMatrix rdr = from_real(r0inv, gens.alg) * Dr;
  Map1 act = [&](const RealMatrix& v) { return m.exact.mu_dot(r0inv, v); };
  GradedMatrix J = lift_linear(act, DO) * GradedScalar(sp);
  return {p, std::move(rdr), std::move(J), m.name};
}

GradedDerivedElement dtau_transport(const GroupCrossedModule& m, const DerivedField& c,
                                    Side side, const RealVector& x,
                                    const FieldGenerators& gens) {
  const RealMatrix r0 = c.r(x);
  const RealMatrix r0inv = r0.inverse();
  GradedMatrix O = field_O(c, x, gens, m.E.n);
  GradedMatrix half_OO = GradedMatrix(O * O);  // = [O,O]/2 for odd-parity O
  GradedMatrix tauO = lift_linear(m.algebra.t, O);
  if (side == Side::Left) return {1, std::move(tauO), std::move(half_OO), m.name};
  Map1 adg = [&](const RealMatrix& v) { return adjoint_group(r0inv, v); };
  Map1 act = [&](const RealMatrix& v) { return RealMatrix(-m.exact.mu_dot(r0inv, v)); };
  return {1, lift_linear(adg, tauO), lift_linear(act, half_OO), m.name};
}

}  // namespace dercross
