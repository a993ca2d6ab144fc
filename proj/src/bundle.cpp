#include "dercross/bundle.hpp"

#include "dercross/embedding.hpp"

namespace dercross {

BundleModel make_bundle_model(const GroupCrossedModule& module, int base_dim) {
  if (base_dim < 0) throw std::invalid_argument("bundle model: base_dim >= 0");
  BundleModel m{module, base_dim, RealVector::Zero(base_dim), RealVector::Ones(base_dim)};
  return m;
}

SyntheticPoint make_point(const BundleModel& model, RealVector x, RealMatrix a,
                          RealMatrix L) {
  if (x.size() != model.base_dim) throw std::invalid_argument("point: wrong base dimension");
  for (int i = 0; i < model.base_dim; ++i)
    if (x[i] < model.lo[i] - 1e-12 || x[i] > model.hi[i] + 1e-12)
      throw std::domain_error("point: x outside the chart bounds");
  if (model.module.G.group_membership_residual(a) > 1e-9)
    throw std::domain_error("point: a outside " + model.module.G.name);
  if (model.module.E.algebra_membership_residual(L) > 1e-9)
    throw std::domain_error("point: L outside Lie(" + model.module.E.name + ")");
  return {std::move(x), std::move(a), std::move(L)};
}

SyntheticPoint random_point(const BundleModel& model, Rng& rng) {
  RealVector x(model.base_dim);
  for (int i = 0; i < model.base_dim; ++i) x[i] = rng.uniform(model.lo[i], model.hi[i]);
  return {x, model.module.G.random_group(rng), model.module.E.random_algebra(rng)};
}

SyntheticPoint source_map(const SyntheticPoint& v) {
  return {v.x, v.a, RealMatrix::Zero(v.L.rows(), v.L.cols())};
}

RealVector project(const SyntheticPoint& v) { return v.x; }

SyntheticPoint right_action(const BundleModel& model, const SyntheticPoint& v,
                            const DerivedGroupElement& q) {
  DerivedGroupElement p = make_derived(model.module, v.a, v.L);
  DerivedGroupElement r = dmul(model.module, p, q);
  return {v.x, r.a, r.L};
}

std::pair<RealVector, DerivedGroupElement> trivialize(const BundleModel& model,
                                                      const SyntheticPoint& v) {
  return {v.x, make_derived(model.module, v.a, v.L)};
}

// ---------------------------------------------------------------------------

BundleChart::BundleChart(const BundleModel& model) : model_(model) {
  const GroupCrossedModule& m = model_.module;
  if (m.kind == FixtureKind::Conj && m.G.kind != GroupKind::Rotation3)
    throw std::invalid_argument("bundle chart: CONJ fixture must be over the rotation group");
  n_ = m.G.n;
  dim_g_ = m.G.dim;
  dim_e_ = m.E.dim;

  auto alg = std::make_shared<GrassmannAlgebra>(
      static_cast<std::size_t>(2 * dim_e_ + dim_g_ + model_.base_dim + 8));
  for (int r = 0; r < dim_e_; ++r)
    lam_.push_back(alg->add_generator("lam" + std::to_string(r), 1, GeneratorOrigin::Internal));
  for (int i = 0; i < model_.base_dim; ++i)
    dx_.push_back(alg->add_generator("dx" + std::to_string(i), 1, GeneratorOrigin::Form));
  for (int c = 0; c < dim_g_; ++c)
    rho_.push_back(alg->add_generator("rho" + std::to_string(c), 1, GeneratorOrigin::Form));
  for (int r = 0; r < dim_e_; ++r)
    dlam_.push_back(alg->add_generator("dlam" + std::to_string(r), 2, GeneratorOrigin::Form));
  for (int k = 0; k < 4; ++k)
    eps_.push_back(alg->add_generator("eps" + std::to_string(k), 1, GeneratorOrigin::Auxiliary));
  alg_ = alg;

  f_.assign(dim_g_, std::vector<std::vector<double>>(
                        dim_g_, std::vector<double>(dim_g_, 0.0)));
  for (int a = 0; a < dim_g_; ++a)
    for (int b = 0; b < dim_g_; ++b) {
      RealVector c = m.G.coords(commutator(m.G.basis[a], m.G.basis[b]));
      for (int k = 0; k < dim_g_; ++k) f_[a][b][k] = c[k];
    }

  // mu-dot(a, e_s) has r-component a_(r s) in all three fixtures: the
  // e-coordinates transform in the defining representation of G.
  mu_poly_.assign(dim_e_, std::vector<CoefPoly>(dim_e_));
  for (int s = 0; s < dim_e_; ++s)
    for (int r = 0; r < dim_e_; ++r) mu_poly_[s][r] = CoefPoly::atom(atom_a(r, s));

  ad_poly_.assign(dim_g_, std::vector<CoefPoly>(dim_g_));
  if (m.kind == FixtureKind::Lin) {
    const int n = n_;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            ad_poly_[i * n + j][k * n + l] =
                CoefPoly::atom(atom_a(k, i)) * CoefPoly::atom(atom_ainv(j, l));
  } else {
    for (int d = 0; d < dim_g_; ++d)
      for (int c = 0; c < dim_g_; ++c) ad_poly_[d][c] = CoefPoly::atom(atom_a(c, d));
  }
}

FormField BundleChart::constant(double c) const { return FormField(alg_, CoefPoly(c)); }
FormField BundleChart::coordinate_x(int i) const {
  return FormField(alg_, CoefPoly::atom(atom_x(i)));
}
FormField BundleChart::pullback(const CoefPoly& p) const { return FormField(alg_, p); }
FormField BundleChart::entry_a(int j, int k) const {
  return FormField(alg_, CoefPoly::atom(atom_a(j, k)));
}
FormField BundleChart::coordinate_lambda(int r) const {
  return FormField::generator(alg_, lam_.at(r), CoefPoly(1.0));
}
FormField BundleChart::generator_field(int gen) const {
  return FormField::generator(alg_, gen, CoefPoly(1.0));
}

CoefPoly BundleChart::coef_deriv_x(const CoefPoly& p, int i) const {
  return p.derive([&](int id) { return id == atom_x(i) ? CoefPoly(1.0) : CoefPoly(); });
}

CoefPoly BundleChart::coef_deriv_group(const CoefPoly& p, int c) const {
  const RealMatrix& t = model_.module.G.basis[c];
  return p.derive([&](int id) {
    // left-translation derivative: D_c a = T_c a, D_c a^-1 = -a^-1 T_c
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        if (id == atom_a(j, k)) {
          CoefPoly r;
          for (int l = 0; l < n_; ++l)
            if (t(j, l) != 0.0) r = r + CoefPoly(t(j, l)) * CoefPoly::atom(atom_a(l, k));
          return r;
        }
        if (id == atom_ainv(j, k)) {
          CoefPoly r;
          for (int l = 0; l < n_; ++l)
            if (t(l, k) != 0.0) r = r - CoefPoly(t(l, k)) * CoefPoly::atom(atom_ainv(j, l));
          return r;
        }
      }
    return CoefPoly();
  });
}

FormField BundleChart::d(const FormField& f) const {
  // generator part: lam -> dlam, rho -> Maurer-Cartan curvature, rest killed
  std::function<FormField(int)> image = [&](int gen) {
    for (int r = 0; r < dim_e_; ++r)
      if (gen == lam_[r]) return generator_field(dlam_[r]);
    for (int c = 0; c < dim_g_; ++c)
      if (gen == rho_[c]) {
        FormField out(alg_);
        for (int a = 0; a < dim_g_; ++a)
          for (int b = 0; b < dim_g_; ++b)
            if (f_[a][b][c] != 0.0) {
              Monomial mono{static_cast<std::uint8_t>(rho_[a]),
                            static_cast<std::uint8_t>(rho_[b])};
              out += FormField::term(alg_, mono, CoefPoly(0.5 * f_[a][b][c]));
            }
        return out;
      }
    return FormField(alg_);
  };
  FormField out = apply_derivation(f, 1, image);
  // coefficient part: dc = dx_i d_i c + rho_c D_c c, differentiated symbolically
  for (const auto& [mono, coef] : f.terms()) {
    FormField monoField = FormField::term(alg_, mono, CoefPoly(1.0));
    for (int i = 0; i < model_.base_dim; ++i) {
      CoefPoly ci = coef_deriv_x(coef, i);
      if (!coef_is_zero(ci))
        out += FormField::term(alg_, Monomial{static_cast<std::uint8_t>(dx_[i])}, ci) *
               monoField;
    }
    for (int c = 0; c < dim_g_; ++c) {
      CoefPoly cc = coef_deriv_group(coef, c);
      if (!coef_is_zero(cc))
        out += FormField::term(alg_, Monomial{static_cast<std::uint8_t>(rho_[c])}, cc) *
               monoField;
    }
  }
  return out;
}

BundleChart::Direction BundleChart::direction(const DerivedAlgebraElement& z,
                                              int eps_slot) const {
  Direction d;
  d.u_coords = model_.module.G.coords(z.u);
  RealVector e = model_.module.E.coords(z.U);
  if (e.size() > 0 && e.cwiseAbs().maxCoeff() > 0.0)
    d.e_terms.push_back({Monomial{static_cast<std::uint8_t>(eps_.at(eps_slot))}, e});
  return d;
}

BundleChart::Direction BundleChart::direction_bracket(const Direction& z,
                                                      const Direction& w) const {
  const GroupCrossedModule& m = model_.module;
  Direction d;
  d.u_coords = RealVector::Zero(dim_g_);
  for (int a = 0; a < dim_g_; ++a)
    for (int b = 0; b < dim_g_; ++b)
      if (z.u_coords[a] != 0.0 && w.u_coords[b] != 0.0)
        for (int c = 0; c < dim_g_; ++c)
          d.u_coords[c] += f_[a][b][c] * z.u_coords[a] * w.u_coords[b];
  auto act = [&](const RealVector& u, const RealVector& e, double sign) {
    RealMatrix ue = m.exact.dot_mu_dot(m.G.from_coords(u), m.E.from_coords(e));
    return RealVector(sign * m.E.coords(ue));
  };
  for (const auto& [mono, e] : w.e_terms) d.e_terms.push_back({mono, act(z.u_coords, e, 1.0)});
  for (const auto& [mono, e] : z.e_terms) d.e_terms.push_back({mono, act(w.u_coords, e, -1.0)});
  return d;
}

FormField BundleChart::contraction(const Direction& z, const FormField& f,
                                   bool flip_sign) const {
  const double sg = flip_sign ? -1.0 : 1.0;
  std::function<FormField(int)> image = [&](int gen) {
    for (int c = 0; c < dim_g_; ++c)
      if (gen == rho_[c]) {
        CoefPoly p;
        for (int d = 0; d < dim_g_; ++d)
          if (z.u_coords[d] != 0.0) p = p + CoefPoly(sg * z.u_coords[d]) * ad_poly_[d][c];
        return FormField(alg_, p);
      }
    for (int r = 0; r < dim_e_; ++r)
      if (gen == dlam_[r]) {
        FormField out(alg_);
        for (const auto& [mono, e] : z.e_terms) {
          CoefPoly p;
          for (int s = 0; s < dim_e_; ++s)
            if (e[s] != 0.0) p = p + CoefPoly(sg * e[s]) * mu_poly_[s][r];
          out += FormField::term(alg_, mono, p);
        }
        return out;
      }
    return FormField(alg_);
  };
  return apply_derivation(f, 1, image);
}

FormField BundleChart::lie_derivative(const Direction& z, const FormField& f,
                                      bool flip_sign) const {
  return d(contraction(z, f, flip_sign)) + contraction(z, d(f), flip_sign);
}

GradedScalar BundleChart::eval(const FormField& f, const SyntheticPoint& pt) const {
  RealMatrix ainv = pt.a.inverse();
  auto atom_value = [&](int id) -> double {
    if (id < model_.base_dim) return pt.x[id];
    int rest = id - model_.base_dim;
    if (rest < n_ * n_) return pt.a(rest / n_, rest % n_);
    rest -= n_ * n_;
    return ainv(rest / n_, rest % n_);
  };
  GradedScalar out(alg_);
  for (const auto& [mono, coef] : f.terms()) out.add_term(mono, coef.eval(atom_value));
  return out;
}

double BundleChart::residual(const FormField& f, const SyntheticPoint& pt) const {
  return eval(f, pt).max_abs();
}

FormField BundleChart::object_restrict(const FormField& f) const {
  FormField out(alg_);
  for (const auto& [mono, coef] : f.terms()) {
    bool keep = true;
    for (auto g : mono) {
      for (int r = 0; r < dim_e_ && keep; ++r)
        if (g == lam_[r] || g == dlam_[r]) keep = false;
      if (!keep) break;
    }
    if (keep) out.add_term(mono, coef);
  }
  return out;
}

bool BundleChart::object_direction(const DerivedAlgebraElement& z) const {
  return max_abs(z.U) <= 1e-12;
}

std::vector<FormField> BundleChart::sample_fields() const {
  std::vector<FormField> fs;
  const int d = model_.base_dim;
  fs.push_back(constant(1.0));
  if (d > 0) fs.push_back(coordinate_x(0));
  if (d > 1)
    fs.push_back(coordinate_x(0) * coordinate_x(1));
  else if (d > 0)
    fs.push_back(coordinate_x(0) * coordinate_x(0));
  fs.push_back(entry_a(0, n_ > 1 ? 1 : 0));
  fs.push_back(coordinate_lambda(0));
  if (d > 0) {
    fs.push_back(coordinate_x(d - 1) * generator_field(dx_[0]));
    fs.push_back(generator_field(dx_[0]) * generator_field(rho_[dim_g_ - 1]));
  }
  fs.push_back(entry_a(n_ - 1, 0) * generator_field(rho_[0]));
  fs.push_back(generator_field(dlam_[0]));
  fs.push_back(coordinate_lambda(dim_e_ - 1) * generator_field(dlam_[dim_e_ > 1 ? 1 : 0]));
  fs.push_back(generator_field(rho_[0]) * generator_field(rho_[dim_g_ > 1 ? 1 : 0]));
  if (dim_e_ > 1) fs.push_back(coordinate_lambda(0) * coordinate_lambda(1));
  return fs;
}

// ---------------------------------------------------------------------------

GradedScalar vertical_field(const BundleChart& chart, const DerivedAlgebraElement& z,
                            const FormField& f, const SyntheticPoint& at,
                            const FdOptions& opts) {
  const GroupCrossedModule& m = chart.model().module;
  // even direction: flow the group coordinate, differentiate by central FD
  const double h = opts.step;
  auto eval_at = [&](double t) {
    SyntheticPoint p = at;
    p.a = at.a * mexp(RealMatrix(t * z.u));
    return chart.eval(f, p);
  };
  GradedScalar even = (eval_at(h) - eval_at(-h)) * (1.0 / (2.0 * h));
  // odd direction: exact graded chain rule through the lambda coordinates
  RealVector c = m.E.coords(m.exact.mu_dot(at.a, z.U));
  GradedScalar odd(chart.algebra());
  for (int r = 0; r < chart.dim_e(); ++r) {
    if (c[r] == 0.0) continue;
    const int target = chart.lam(r);
    std::function<FormField(int)> image = [&](int gen) {
      return gen == target ? FormField(chart.algebra(), CoefPoly(1.0))
                           : FormField(chart.algebra());
    };
    odd += chart.eval(apply_derivation(f, 1, image), at) * c[r];
  }
  return even + odd;
}

GradedScalar apply_derivation_at(const BundleChart& chart, const DerivationHandle& d,
                                 const FormField& f, const SyntheticPoint& at) {
  switch (d.kind) {
    case DerivationHandle::Kind::DeRham:
      return chart.eval(chart.d(f), at);
    case DerivationHandle::Kind::Contraction:
      return chart.eval(chart.contraction(chart.direction(d.z, 0), f), at);
    case DerivationHandle::Kind::Lie:
      return chart.eval(chart.lie_derivative(chart.direction(d.z, 0), f), at);
  }
  throw std::invalid_argument("unsupported derivation");
}

ResidualReport cartan_check(const BundleChart& chart, int samples, std::uint64_t seed,
                            const BundleCheckOptions& opts) {
  if (samples < 1) throw std::invalid_argument("cartan_check: samples >= 1");
  const GroupCrossedModule& m = chart.model().module;
  BundleModel model = chart.model();
  ResidualReport rep;
  std::vector<FormField> family = chart.sample_fields();
  const bool flip = opts.flip_contraction_sign;
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "cartan", i);
    SyntheticPoint pt = random_point(model, rng);
    RealMatrix zu = m.G.random_algebra(rng), zU = m.E.random_algebra(rng);
    RealMatrix wu = m.G.random_algebra(rng), wU = m.E.random_algebra(rng);
    // spread the samples across pure-g, pure-e[1] and mixed directions;
    // i % 4 == 1 is the all-e[1] (Abelian) case of opers5 kept explicit
    switch (i % 4) {
      case 0: zU.setZero(); wU.setZero(); break;
      case 1: zu.setZero(); wu.setZero(); break;
      case 2: zU.setZero(); wu.setZero(); break;
      default: break;
    }
    DerivedAlgebraElement Z{zu, zU, m.name, Modality::AlphaBar};
    DerivedAlgebraElement W{wu, wU, m.name, Modality::AlphaBar};
    auto dz = chart.direction(Z, 0);
    auto dw = chart.direction(W, 1);
    auto dzw = chart.direction_bracket(dz, dw);
    const FormField& f = family[i % family.size()];

    auto J = [&](const BundleChart::Direction& dir, const FormField& g) {
      return chart.contraction(dir, g, flip);
    };
    auto L = [&](const BundleChart::Direction& dir, const FormField& g) {
      return chart.lie_derivative(dir, g, flip);
    };

    rep.fold("opers1", chart.residual(chart.d(chart.d(f)), pt));
    rep.fold("opers2", chart.residual(L(dz, f) - chart.d(J(dz, f)) - J(dz, chart.d(f)), pt));
    rep.fold("opers3", chart.residual(chart.d(L(dz, f)) - L(dz, chart.d(f)), pt));
    rep.fold("opers4", chart.residual(J(dz, J(dw, f)) + J(dw, J(dz, f)), pt));
    rep.fold("opers5", chart.residual(L(dz, J(dw, f)) - J(dw, L(dz, f)) - J(dzw, f), pt));
    rep.fold("opers6", chart.residual(L(dz, L(dw, f)) - L(dw, L(dz, f)) - L(dzw, f), pt));
  }
  return rep;
}

std::pair<bool, double> basic_check(const BundleChart& chart, const FormField& f,
                                    int directions, int points, std::uint64_t seed,
                                    double tol) {
  const GroupCrossedModule& m = chart.model().module;
  BundleModel model = chart.model();
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    Rng rng = stream_rng(seed, "basic", i);
    SyntheticPoint pt = random_point(model, rng);
    for (int k = 0; k < directions; ++k) {
      RealMatrix u = m.G.random_algebra(rng), U = m.E.random_algebra(rng);
      if (k % 3 == 1) U.setZero();
      if (k % 3 == 2) u.setZero();
      DerivedAlgebraElement Z{u, U, m.name, Modality::AlphaBar};
      auto dir = chart.direction(Z, 0);
      worst = std::max(worst, chart.residual(chart.contraction(dir, f), pt));
      worst = std::max(worst, chart.residual(chart.lie_derivative(dir, f), pt));
    }
  }
  return {worst <= tol, worst};
}

ResidualReport restriction_morphism_check(const BundleChart& chart, int samples,
                                          std::uint64_t seed) {
  const GroupCrossedModule& m = chart.model().module;
  BundleModel model = chart.model();
  ResidualReport rep;
  std::vector<FormField> family = chart.sample_fields();
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "restriction", i);
    SyntheticPoint pt = random_point(model, rng);
    pt.L.setZero();  // object-space points
    DerivedAlgebraElement Z0{m.G.random_algebra(rng),
                             RealMatrix::Zero(m.E.n, m.E.n), m.name, Modality::AlphaBar};
    if (!chart.object_direction(Z0))
      throw std::invalid_argument("restriction: direction outside the object algebra");
    auto dir = chart.direction(Z0, 0);
    const FormField& f = family[i % family.size()];
    FormField rf = chart.object_restrict(f);
    rep.fold("opers9",
             chart.residual(chart.object_restrict(chart.d(f)) - chart.d(rf), pt));
    rep.fold("opers10", chart.residual(chart.object_restrict(chart.contraction(dir, f)) -
                                           chart.contraction(dir, rf),
                                       pt));
    rep.fold("opers11", chart.residual(chart.object_restrict(chart.lie_derivative(dir, f)) -
                                           chart.lie_derivative(dir, rf),
                                       pt));
  }
  return rep;
}

ResidualReport bundle_structure_check(const BundleModel& model, int samples,
                                      std::uint64_t seed) {
  const GroupCrossedModule& m = model.module;
  ResidualReport rep;
  auto point_dist = [](const SyntheticPoint& a, const SyntheticPoint& b) {
    double r = max_abs(RealMatrix(a.a - b.a));
    r = std::max(r, max_abs(RealMatrix(a.L - b.L)));
    r = std::max(r, (a.x - b.x).cwiseAbs().maxCoeff());
    return r;
  };
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "bundle.structure", i);
    SyntheticPoint v = random_point(model, rng);
    DerivedGroupElement q = make_derived(m, m.G.random_group(rng), m.E.random_algebra(rng));
    DerivedGroupElement q2 = make_derived(m, m.G.random_group(rng), m.E.random_algebra(rng));

    SyntheticPoint s = source_map(v);
    rep.fold("pi_factorization", (project(v) - project(s)).cwiseAbs().maxCoeff());
    rep.fold("source_idempotent", point_dist(source_map(s), s));
    rep.fold("pi_invariance",
             (project(right_action(model, v, q)) - project(v)).cwiseAbs().maxCoeff());
    rep.fold("action_axiom", point_dist(right_action(model, right_action(model, v, q), q2),
                                        right_action(model, v, dmul(m, q, q2))));
    auto [xv, tv] = trivialize(model, v);
    auto [xr, tr] = trivialize(model, right_action(model, v, q));
    rep.fold("trivialize_equivariance", derived_distance(tr, dmul(m, tv, q)));
    rep.fold("trivialize_projection", (xv - project(v)).cwiseAbs().maxCoeff());
    // the object slice is preserved by object-group actions
    SyntheticPoint v0 = source_map(v);
    DerivedGroupElement q0 = make_derived(m, q.a, RealMatrix::Zero(m.E.n, m.E.n));
    rep.fold("object_slice", max_abs(right_action(model, v0, q0).L));
  }
  return rep;
}

RealMatrix local_gauge(const GroupCrossedModule& module,
                       const std::function<RealMatrix(const RealVector&)>& v_base_to_G,
                       const RealVector& at, const RealMatrix& a_rep, GaugeKind kind) {
  SemidirectRep rep = semidirect_rep(module);
  RealMatrix value = v_base_to_G(at);
  RealMatrix v_rep;
  if (value.rows() == module.G.n && kind == GaugeKind::Object) {
    if (module.G.group_membership_residual(value) > 1e-9)
      throw std::domain_error("local_gauge: V(m) outside " + module.G.name);
    v_rep = rep.G_embed(value);
  } else if (value.rows() == rep.dim) {
    v_rep = value;
  } else {
    throw std::invalid_argument("local_gauge: V has the wrong shape");
  }
  if (a_rep.rows() != rep.dim || a_rep.cols() != rep.dim)
    throw std::invalid_argument("local_gauge: argument not in the semidirect representation");
  if (kind == GaugeKind::Morphism) {
    RealMatrix g_only = rep.G_embed(rep.G_extract(a_rep));
    if (max_abs(RealMatrix(a_rep - g_only)) > 1e-9)
      throw std::domain_error("local_gauge: morphism argument must lie in the object group");
  }
  return a_rep.inverse() * v_rep * a_rep;
}

ResidualReport gauge_check(const BundleModel& model, int samples, std::uint64_t seed) {
  const GroupCrossedModule& m = model.module;
  SemidirectRep rep = semidirect_rep(m);
  ResidualReport rp;
  auto vmap = [&](const RealVector& x) {
    RealMatrix acc = RealMatrix::Zero(m.G.n, m.G.n);
    for (int i = 0; i < x.size(); ++i) acc += 0.4 * x[i] * m.G.basis[i % m.G.dim];
    return mexp(acc);
  };
  auto ident = [&](const RealVector&) { return RealMatrix(RealMatrix::Identity(m.G.n, m.G.n)); };
  for (int i = 0; i < samples; ++i) {
    Rng rng = stream_rng(seed, "gauge", i);
    RealVector x(model.base_dim);
    for (int k = 0; k < model.base_dim; ++k) x[k] = rng.uniform(model.lo[k], model.hi[k]);
    DerivedGroupElement pa = make_derived(m, m.G.random_group(rng), RealMatrix::Zero(m.E.n, m.E.n));
    RealMatrix A = rep.G_embed(m.G.random_group(rng)) * rep.E_embed(m.E.random_group(rng));
    RealMatrix B = rep.E_embed(m.E.random_group(rng)) * rep.G_embed(m.G.random_group(rng));

    rp.fold("identity_map", max_abs(RealMatrix(local_gauge(m, ident, x, A, GaugeKind::Object) -
                                               RealMatrix::Identity(rep.dim, rep.dim))));
    rp.fold("identity_argument",
            max_abs(RealMatrix(local_gauge(m, vmap, x,
                                           RealMatrix(RealMatrix::Identity(rep.dim, rep.dim)),
                                           GaugeKind::Object) -
                               rep.G_embed(vmap(x)))));
    RealMatrix hab = local_gauge(m, vmap, x, RealMatrix(A * B), GaugeKind::Object);
    RealMatrix ha = local_gauge(m, vmap, x, A, GaugeKind::Object);
    rp.fold("equivariance", max_abs(RealMatrix(hab - B.inverse() * ha * B)));
    RealMatrix arep = rep.G_embed(pa.a);
    auto smap = [&](const RealVector& xx) {
      return RealMatrix(rep.E_embed(mexp(RealMatrix(0.3 * xx.sum() * m.E.basis[0]))) *
                        rep.G_embed(vmap(xx)));
    };
    RealMatrix th = local_gauge(m, smap, x, arep, GaugeKind::Morphism);
    rp.fold("morphism_conjugation",
            max_abs(RealMatrix(th - arep.inverse() * smap(x) * arep)));
  }
  return rp;
}

}  // namespace dercross
