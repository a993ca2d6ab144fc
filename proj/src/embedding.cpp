#include "dercross/embedding.hpp"

namespace dercross {

namespace {

AlgebraPtr algebra_of(const GradedMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j).algebra()) return m(i, j).algebra();
  return nullptr;
}

int find_generator(const AlgebraPtr& alg, const char* name) {
  int id = alg ? alg->find(name) : -1;
  if (id < 0)
    throw std::runtime_error(std::string("embedding oracle: generator '") + name +
                             "' not reserved in the shared table");
  return id;
}

}  // namespace

SemidirectRep semidirect_rep(const GroupCrossedModule& m) {
  SemidirectRep rep;
  rep.name = m.name + "/rep";
  switch (m.kind) {
    case FixtureKind::Conj: {
      const int n = m.G.n;
      rep.dim = 2 * n;
      auto block = [n](const RealMatrix& up, const RealMatrix& lo) {
        RealMatrix r = RealMatrix::Zero(2 * n, 2 * n);
        r.topLeftCorner(n, n) = up;
        r.bottomRightCorner(n, n) = lo;
        return r;
      };
      rep.G_embed = [=](const RealMatrix& a) { return block(a, a); };
      rep.E_embed = [=](const RealMatrix& A) { return block(A, RealMatrix::Identity(n, n)); };
      rep.g_embed = [=](const RealMatrix& x) { return block(x, x); };
      rep.e_embed = [=](const RealMatrix& X) { return block(X, RealMatrix::Zero(n, n)); };
      rep.G_extract = [n](const RealMatrix& r) {
        return RealMatrix(r.bottomRightCorner(n, n));
      };
      rep.alg_extract = [n](const RealMatrix& r) {
        RealMatrix x = r.bottomRightCorner(n, n);
        RealMatrix e = r.topLeftCorner(n, n) - x;
        return std::make_pair(x, e);
      };
      break;
    }
    case FixtureKind::Lin: {
      const int n = m.G.n;
      rep.dim = n + 1;
      rep.G_embed = [n](const RealMatrix& a) {
        RealMatrix r = RealMatrix::Identity(n + 1, n + 1);
        r.topLeftCorner(n, n) = a;
        return r;
      };
      rep.E_embed = [](const RealMatrix& A) { return A; };
      rep.g_embed = [n](const RealMatrix& x) {
        RealMatrix r = RealMatrix::Zero(n + 1, n + 1);
        r.topLeftCorner(n, n) = x;
        return r;
      };
      rep.e_embed = [](const RealMatrix& X) { return X; };
      rep.G_extract = [n](const RealMatrix& r) { return RealMatrix(r.topLeftCorner(n, n)); };
      rep.alg_extract = [n](const RealMatrix& r) {
        RealMatrix x = r.topLeftCorner(n, n);
        RealMatrix e = RealMatrix::Zero(n + 1, n + 1);
        e.topRightCorner(n, 1) = r.topRightCorner(n, 1);
        return std::make_pair(x, e);
      };
      break;
    }
    case FixtureKind::Cover: {
      rep.dim = 7;
      auto block = [](const RealMatrix& up, const RealMatrix& lo) {
        RealMatrix r = RealMatrix::Zero(7, 7);
        r.topLeftCorner(4, 4) = up;
        r.bottomRightCorner(3, 3) = lo;
        return r;
      };
      rep.G_embed = [=](const RealMatrix& a) { return block(quat_conj_action(a), a); };
      rep.E_embed = [=](const RealMatrix& A) { return block(A, RealMatrix::Identity(3, 3)); };
      rep.g_embed = [=](const RealMatrix& x) { return block(quat_conj_action_dot(x), x); };
      rep.e_embed = [=](const RealMatrix& X) { return block(X, RealMatrix::Zero(3, 3)); };
      rep.G_extract = [](const RealMatrix& r) { return RealMatrix(r.bottomRightCorner(3, 3)); };
      rep.alg_extract = [](const RealMatrix& r) {
        RealMatrix x = r.bottomRightCorner(3, 3);
        RealMatrix e = r.topLeftCorner(4, 4) - quat_conj_action_dot(x);
        return std::make_pair(x, e);
      };
      break;
    }
  }
  return rep;
}

OracleGenerators reserve_oracle_generators(std::shared_ptr<GrassmannAlgebra> alg) {
  OracleGenerators og;
  og.alphabar = alg->add_generator("alphabar", 1, GeneratorOrigin::Internal);
  og.betabar = alg->add_generator("betabar", 1, GeneratorOrigin::Internal);
  og.theta = alg->add_generator("theta", 1, GeneratorOrigin::Form);
  og.alpha = alg->add_generator("alpha", -1, GeneratorOrigin::Internal);
  og.alg = alg;
  return og;
}

GradedMatrix embed_derived_group(const SemidirectRep& rep, const OracleGenerators& og,
                                 const DerivedGroupElement& p) {
  GradedScalar abar = GradedScalar::generator(og.alg, og.alphabar, 1.0);
  GradedMatrix one = identity_graded(rep.dim, og.alg);
  return GradedMatrix(one + abar * from_real(rep.e_embed(p.L), og.alg)) *
         from_real(rep.G_embed(p.a), og.alg);
}

DerivedGroupElement extract_derived_group(const GroupCrossedModule& m,
                                          const SemidirectRep& rep,
                                          const OracleGenerators& og,
                                          const GradedMatrix& g) {
  RealMatrix a = rep.G_extract(body(g));
  GradedMatrix n = g * from_real(rep.G_embed(RealMatrix(a.inverse())), og.alg);
  RealMatrix e_block = coefficient(n, Monomial{static_cast<std::uint8_t>(og.alphabar)});
  return {a, rep.alg_extract(e_block).second.eval(), m.name, Modality::AlphaBar};
}

DerivedGroupElement oracle_dmul(const GroupCrossedModule& m, const DerivedGroupElement& p,
                                const DerivedGroupElement& q) {
  SemidirectRep rep = semidirect_rep(m);
  auto og = reserve_oracle_generators(std::make_shared<GrassmannAlgebra>(8));
  GradedMatrix prod = embed_derived_group(rep, og, p) * embed_derived_group(rep, og, q);
  return extract_derived_group(m, rep, og, prod);
}

DerivedGroupElement oracle_dinv(const GroupCrossedModule& m, const DerivedGroupElement& p) {
  SemidirectRep rep = semidirect_rep(m);
  auto og = reserve_oracle_generators(std::make_shared<GrassmannAlgebra>(8));
  return extract_derived_group(m, rep, og, ginverse(embed_derived_group(rep, og, p)));
}

DerivedAlgebraElement oracle_dbracket(const GroupCrossedModule& m,
                                      const DerivedAlgebraElement& y,
                                      const DerivedAlgebraElement& w) {
  SemidirectRep rep = semidirect_rep(m);
  auto og = reserve_oracle_generators(std::make_shared<GrassmannAlgebra>(8));
  GradedScalar abar = GradedScalar::generator(og.alg, og.alphabar, 1.0);
  GradedScalar bbar = GradedScalar::generator(og.alg, og.betabar, 1.0);
  GradedMatrix Y = from_real(rep.g_embed(y.u), og.alg) + abar * from_real(rep.e_embed(y.U), og.alg);
  GradedMatrix W = from_real(rep.g_embed(w.u), og.alg) + bbar * from_real(rep.e_embed(w.U), og.alg);
  GradedMatrix C = GradedMatrix(Y * W) - GradedMatrix(W * Y);
  RealMatrix gu = rep.alg_extract(coefficient(C, Monomial{})).first;
  RealMatrix Ua = rep.alg_extract(coefficient(C, Monomial{(std::uint8_t)og.alphabar})).second;
  RealMatrix Ub = rep.alg_extract(coefficient(C, Monomial{(std::uint8_t)og.betabar})).second;
  return {gu, RealMatrix(Ua + Ub), m.name, y.modality};
}

DerivedAlgebraElement oracle_d_adjoint(const GroupCrossedModule& m,
                                       const DerivedGroupElement& p,
                                       const DerivedAlgebraElement& y, bool inverse,
                                       const FdOptions& opts) {
  SemidirectRep rep = semidirect_rep(m);
  auto og = reserve_oracle_generators(std::make_shared<GrassmannAlgebra>(8));
  GradedScalar abar = GradedScalar::generator(og.alg, og.alphabar, 1.0);
  GradedMatrix P = embed_derived_group(rep, og, p);
  GradedMatrix Pinv = ginverse(P);
  auto conjugated_pair = [&](double s) {
    GradedMatrix D =
        GradedMatrix(identity_graded(rep.dim, og.alg) +
                     abar * from_real(RealMatrix(s * rep.e_embed(y.U)), og.alg)) *
        from_real(mexp(RealMatrix(s * rep.g_embed(y.u))), og.alg);
    GradedMatrix K = inverse ? GradedMatrix(Pinv * D * P) : GradedMatrix(P * D * Pinv);
    DerivedGroupElement pair = extract_derived_group(m, rep, og, K);
    return pair;
  };
  const double h = opts.step;
  DerivedGroupElement kp = conjugated_pair(h);
  DerivedGroupElement km = conjugated_pair(-h);
  RealMatrix u = (kp.a - km.a) / (2.0 * h);  // curve through the identity
  RealMatrix U = (kp.L - km.L) / (2.0 * h);
  return {u, U, m.name, y.modality};
}

DerivedAlgebraElement oracle_mc_form(const GroupCrossedModule& m, const DerivedCurve& curve,
                                     double t0, Side side, const FdOptions& opts) {
  SemidirectRep rep = semidirect_rep(m);
  auto og = reserve_oracle_generators(std::make_shared<GrassmannAlgebra>(8));
  GradedScalar theta = GradedScalar::generator(og.alg, og.theta, 1.0);
  const double h = opts.step;
  GradedMatrix Mp = embed_derived_group(rep, og, curve.values(t0 + h));
  GradedMatrix Mm = embed_derived_group(rep, og, curve.values(t0 - h));
  GradedMatrix M0 = embed_derived_group(rep, og, curve.values(t0));
  GradedMatrix dM = theta * GradedMatrix((Mp - Mm) * GradedScalar(1.0 / (2.0 * h)));
  GradedMatrix R = side == Side::Left ? GradedMatrix(dM * ginverse(M0))
                                      : GradedMatrix(ginverse(M0) * dM);
  RealMatrix u = rep.alg_extract(coefficient(R, Monomial{(std::uint8_t)og.theta})).first;
  Monomial abar_theta{(std::uint8_t)og.alphabar, (std::uint8_t)og.theta};
  RealMatrix U = rep.alg_extract(coefficient(R, abar_theta)).second;
  return {u, U, m.name, Modality::AlphaBar};
}

GradedDerivedElement oracle_graded_bracket(const GroupCrossedModule& m,
                                           const GradedDerivedElement& s,
                                           const GradedDerivedElement& t) {
  SemidirectRep rep = semidirect_rep(m);
  AlgebraPtr alg = algebra_of(s.j);
  if (!alg) alg = algebra_of(s.J);
  if (!alg) alg = algebra_of(t.j);
  if (!alg) alg = algebra_of(t.J);
  const int alpha = find_generator(alg, "alpha");
  GradedScalar av = GradedScalar::generator(alg, alpha, 1.0);
  auto embed = [&](const GradedDerivedElement& e) {
    GradedMatrix r = lift_linear(rep.g_embed, e.j);
    GradedMatrix eJ = lift_linear(rep.e_embed, e.J);
    GradedMatrix term = av * eJ;
    if (e.degree % 2) term = GradedMatrix(-term);
    return GradedMatrix(r + term);
  };
  GradedMatrix S = embed(s), T = embed(t);
  GradedMatrix C = graded_commutator(S, T, s.degree, t.degree);
  auto [without, with] = split_generator(C, alpha);
  Map1 take_g = [&](const RealMatrix& r) { return rep.alg_extract(r).first; };
  Map1 take_e = [&](const RealMatrix& r) { return rep.alg_extract(r).second; };
  GradedMatrix j = lift_linear(take_g, without);
  GradedMatrix J = lift_linear(take_e, with);
  if ((s.degree + t.degree) % 2) J = GradedMatrix(-J);
  return {s.degree + t.degree, std::move(j), std::move(J), m.name};
}

GradedDerivedElement oracle_derivation_transport(const GroupCrossedModule& m,
                                                 const DerivedField& c,
                                                 const FieldDerivation& d, Side side,
                                                 const RealVector& x,
                                                 const FieldGenerators& gens,
                                                 const FdOptions& opts) {
  SemidirectRep rep = semidirect_rep(m);
  const int alpha = find_generator(gens.alg, "alpha");
  GradedScalar av = GradedScalar::generator(gens.alg, alpha, 1.0);

  auto embedded = [&](const RealVector& at) {
    GradedMatrix O = from_real(RealMatrix::Zero(rep.dim, rep.dim), gens.alg);
    for (std::size_t k = 0; k < c.O.size(); ++k) {
      GradedScalar yk = GradedScalar::generator(gens.alg, gens.y.at(k), 1.0);
      O += yk * from_real(rep.e_embed(c.O[k](at)), gens.alg);
    }
    return GradedMatrix(
        GradedMatrix(identity_graded(rep.dim, gens.alg) + av * O) *
        from_real(rep.G_embed(c.r(at)), gens.alg));
  };

  GradedMatrix C = embedded(x);
  GradedMatrix DC(rep.dim, rep.dim);
  if (d.kind == FieldDerivation::Kind::OddPartial) {
    const int target = gens.y.at(d.odd_index);
    std::function<GradedScalar(int)> image = [&](int gen) {
      return gen == target ? GradedScalar(gens.alg, 1.0) : GradedScalar(gens.alg);
    };
    for (Eigen::Index i = 0; i < C.rows(); ++i)
      for (Eigen::Index j = 0; j < C.cols(); ++j)
        DC(i, j) = apply_derivation(C(i, j), 1, image);
  } else {
    RealVector xp = x, xm = x;
    xp[d.even_index] += opts.step;
    xm[d.even_index] -= opts.step;
    GradedScalar yj = GradedScalar::generator(gens.alg, gens.y.at(d.odd_index), 1.0);
    DC = yj * GradedMatrix((embedded(xp) - embedded(xm)) * GradedScalar(1.0 / (2.0 * opts.step)));
  }
  GradedMatrix R = side == Side::Left ? GradedMatrix(DC * ginverse(C))
                                      : GradedMatrix(ginverse(C) * DC);
  auto [without, with] = split_generator(R, alpha);
  Map1 take_g = [&](const RealMatrix& r) { return rep.alg_extract(r).first; };
  Map1 take_e = [&](const RealMatrix& r) { return rep.alg_extract(r).second; };
  return {d.degree(), lift_linear(take_g, without), lift_linear(take_e, with), m.name};
}

GradedDerivedElement oracle_dtau_transport(const GroupCrossedModule& m,
                                           const DerivedField& c, Side side,
                                           const RealVector& x,
                                           const FieldGenerators& gens) {
  SemidirectRep rep = semidirect_rep(m);
  const int alpha = find_generator(gens.alg, "alpha");
  GradedScalar av = GradedScalar::generator(gens.alg, alpha, 1.0);

  GradedMatrix O = from_real(RealMatrix::Zero(m.E.n, m.E.n), gens.alg);
  for (std::size_t k = 0; k < c.O.size(); ++k) {
    GradedScalar yk = GradedScalar::generator(gens.alg, gens.y.at(k), 1.0);
    O += yk * from_real(c.O[k](x), gens.alg);
  }
  GradedMatrix A_rep = av * lift_linear(rep.e_embed, O);
  GradedMatrix tau_rep = lift_linear(rep.g_embed, lift_linear(m.algebra.t, O));
  // delta(e^A) e^{-A} = dA + [A, dA]/2, the series truncating at alpha^2 = 0;
  // the bracket is a rep matrix commutator, independent of the Peiffer form.
  GradedMatrix log_left =
      tau_rep + GradedScalar(0.5) * GradedMatrix(GradedMatrix(A_rep * tau_rep) -
                                                 GradedMatrix(tau_rep * A_rep));
  GradedMatrix C = GradedMatrix(identity_graded(rep.dim, gens.alg) + A_rep) *
                   from_real(rep.G_embed(c.r(x)), gens.alg);
  GradedMatrix R = side == Side::Left ? log_left
                                      : GradedMatrix(ginverse(C) * GradedMatrix(log_left * C));
  auto [without, with] = split_generator(R, alpha);
  Map1 take_g = [&](const RealMatrix& r) { return rep.alg_extract(r).first; };
  Map1 take_e = [&](const RealMatrix& r) { return rep.alg_extract(r).second; };
  return {1, lift_linear(take_g, without), lift_linear(take_e, with), m.name};
}

double derived_distance(const DerivedGroupElement& a, const DerivedGroupElement& b) {
  return std::max(max_abs(RealMatrix(a.a - b.a)), max_abs(RealMatrix(a.L - b.L)));
}
double derived_distance(const DerivedAlgebraElement& a, const DerivedAlgebraElement& b) {
  return std::max(max_abs(RealMatrix(a.u - b.u)), max_abs(RealMatrix(a.U - b.U)));
}
double derived_distance(const GradedDerivedElement& a, const GradedDerivedElement& b) {
  return std::max(max_abs_coeff(GradedMatrix(a.j - b.j)),
                  max_abs_coeff(GradedMatrix(a.J - b.J)));
}

}  // namespace dercross
