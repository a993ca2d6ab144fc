#include "dercross/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "dercross/embedding.hpp"

namespace dercross {

const std::set<std::string> kAllSuites = {"axioms",  "identities", "variational",
                                          "derived", "graded",     "bundle",
                                          "gauge"};

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_positive(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": bad number for " + key);
  }
  if (pos != v.size())
    throw ConfigError("config line " + std::to_string(line) + ": bad number for " + key);
  if (d <= 0.0)
    throw ConfigError("config line " + std::to_string(line) + ": " + key +
                      " must be positive");
  return d;
}

}  // namespace

FixtureKind parse_fixture_name(const std::string& name) {
  if (name == "CONJ") return FixtureKind::Conj;
  if (name == "LIN") return FixtureKind::Lin;
  if (name == "COVER") return FixtureKind::Cover;
  throw ConfigError("unknown fixture '" + name + "' (expected CONJ, LIN or COVER)");
}

std::string fixture_display_name(const SuiteConfig& cfg) {
  switch (cfg.fixture) {
    case FixtureKind::Conj: return "CONJ";
    case FixtureKind::Lin: return "LIN(" + std::to_string(cfg.lin_dim) + ")";
    case FixtureKind::Cover: return "COVER";
  }
  return "?";
}

SuiteConfig parse_config(const std::string& text) {
  SuiteConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section = "run";
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "tolerances" && section != "suites")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");

    if (key == "fixture") {
      cfg.fixture = parse_fixture_name(value);
    } else if (key == "lin_dim") {
      cfg.lin_dim = static_cast<int>(parse_positive(value, key, lineno));
    } else if (key == "samples") {
      cfg.samples = static_cast<int>(parse_positive(value, key, lineno));
    } else if (key == "seed") {
      try {
        std::size_t pos = 0;
        cfg.seed = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(lineno) + ": bad seed");
      }
    } else if (key == "fd_step") {
      cfg.fd_step = parse_positive(value, key, lineno);
    } else if (key == "tol_alg") {
      cfg.tol_alg = parse_positive(value, key, lineno);
    } else if (key == "tol_fd") {
      cfg.tol_fd = parse_positive(value, key, lineno);
    } else if (key == "report") {
      if (value == "text")
        cfg.report = ReportFormat::Text;
      else if (value == "machine")
        cfg.report = ReportFormat::Machine;
      else
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": report must be text or machine");
    } else if (key == "suites") {
      cfg.suites.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (!kAllSuites.count(item))
          throw ConfigError("config line " + std::to_string(lineno) + ": unknown suite '" +
                            item + "'");
        cfg.suites.insert(item);
      }
      if (cfg.suites.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty suite list");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                        "'");
    }
  }
  return cfg;
}

namespace {

// Shared generator table for the graded-element and transport checks.
struct GradedContext {
  OracleGenerators og;
  std::vector<int> yp;  // degree +1 auxiliaries
  std::vector<int> ym;  // degree -1 auxiliaries
};

GradedContext make_graded_context() {
  auto table = std::make_shared<GrassmannAlgebra>(12);
  GradedContext ctx;
  ctx.og = reserve_oracle_generators(table);
  for (int k = 0; k < 3; ++k)
    ctx.yp.push_back(table->add_generator("gy" + std::to_string(k), 1,
                                          GeneratorOrigin::Auxiliary));
  for (int k = 0; k < 2; ++k)
    ctx.ym.push_back(table->add_generator("gyb" + std::to_string(k), -1,
                                          GeneratorOrigin::Auxiliary));
  return ctx;
}

struct Runner {
  const SuiteConfig& cfg;
  GroupCrossedModule module;
  std::string fixture_name;
  std::vector<CheckResult>& out;

  void add(const std::string& name, double residual, double tol, double elapsed = 0.0) {
    out.push_back({name, fixture_name, residual, tol, residual <= tol, elapsed});
  }

  template <class F>
  void timed(const std::string& name, double tol, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    double residual = body();
    auto t1 = std::chrono::steady_clock::now();
    add(name, residual, tol, std::chrono::duration<double>(t1 - t0).count());
  }

  FdOptions fd() const { return FdOptions{cfg.fd_step, false, 10.0}; }

  DerivedGroupElement random_group_elem(Rng& rng) {
    return make_derived(module, module.G.random_group(rng), module.E.random_algebra(rng));
  }
  DerivedAlgebraElement random_alg_elem(Rng& rng) {
    return make_derived_algebra(module, module.G.random_algebra(rng),
                                module.E.random_algebra(rng));
  }

  // -- axioms ---------------------------------------------------------------
  void axioms() {
    timed("axioms.group", cfg.tol_alg,
          [&] { return check_group_axioms(module, cfg.samples, cfg.seed).max_residual(); });
    timed("axioms.algebra_exact", cfg.tol_alg, [&] {
      return check_algebra_axioms(module.algebra, cfg.samples, cfg.seed).max_residual();
    });
    timed("axioms.algebra_fd", cfg.tol_fd, [&] {
      auto diff = differentiate_module(module, fd());
      return check_algebra_axioms(diff.first, cfg.samples, cfg.seed).max_residual();
    });
    timed("axioms.morphism_identity", cfg.tol_alg, [&] {
      return check_morphism(identity_morphism(module), cfg.samples, cfg.seed).max_residual();
    });
    timed("axioms.morphism_inclusion", cfg.tol_alg, [&] {
      return check_morphism(discrete_inclusion(module), cfg.samples, cfg.seed).max_residual();
    });
    if (cfg.fixture != FixtureKind::Lin) {
      timed("axioms.morphism_covering", cfg.tol_alg, [&] {
        return check_morphism(covering_morphism(), cfg.samples, cfg.seed).max_residual();
      });
    }
  }

  // -- identities / variational ---------------------------------------------
  void identities() {
    auto diff = differentiate_module(module, fd());
    auto t0 = std::chrono::steady_clock::now();
    ResidualReport rep = identity_suite(module, diff.second, cfg.samples, cfg.seed);
    auto t1 = std::chrono::steady_clock::now();
    double el = std::chrono::duration<double>(t1 - t0).count() / rep.rows.size();
    for (const auto& row : rep.rows)
      add("identities." + row.name, row.residual, cfg.tol_fd, el);
  }

  void variational() {
    auto diff = differentiate_module(module, fd());
    auto t0 = std::chrono::steady_clock::now();
    ResidualReport rep = variational_suite(module, diff.second, cfg.samples, cfg.seed, fd());
    auto t1 = std::chrono::steady_clock::now();
    double el = std::chrono::duration<double>(t1 - t0).count() / rep.rows.size();
    for (const auto& row : rep.rows)
      add("variational." + row.name, row.residual, cfg.tol_fd, el);
    timed("variational.convergence", 0.0, [&] {
      // quadratic convergence of the variation step, measured in extended
      // precision on closed-form kernels (COVER reuses the CONJ kernels)
      FixtureKind kind =
          cfg.fixture == FixtureKind::Cover ? FixtureKind::Conj : cfg.fixture;
      int n = std::min(cfg.samples, 10);
      double r1 = variational_residual_extended(kind, cfg.fd_step, n, cfg.seed);
      double r2 = variational_residual_extended(kind, cfg.fd_step / 10.0, n, cfg.seed);
      return std::max(0.0, 10.0 * r2 - r1);
    });
  }

  // -- derived calculus vs embedding oracles --------------------------------
  void derived() {
    timed("derived.dmul_oracle", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.dmul", i);
        auto p = random_group_elem(rng), q = random_group_elem(rng);
        worst =
            std::max(worst, derived_distance(dmul(module, p, q), oracle_dmul(module, p, q)));
      }
      return worst;
    });
    timed("derived.dinv_oracle", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.dinv", i);
        auto p = random_group_elem(rng);
        worst = std::max(worst, derived_distance(dinv(module, p), oracle_dinv(module, p)));
      }
      return worst;
    });
    timed("derived.dbracket_oracle", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.dbracket", i);
        auto y = random_alg_elem(rng), w = random_alg_elem(rng);
        worst = std::max(worst, derived_distance(dbracket(module, y, w),
                                                 oracle_dbracket(module, y, w)));
      }
      return worst;
    });
    timed("derived.group_axioms", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.group", i);
        auto p = random_group_elem(rng), q = random_group_elem(rng),
             r = random_group_elem(rng);
        worst = std::max(worst, derived_distance(dmul(module, dmul(module, p, q), r),
                                                 dmul(module, p, dmul(module, q, r))));
        worst = std::max(worst, derived_distance(dmul(module, p, dinv(module, p)),
                                                 derived_identity(module)));
        worst =
            std::max(worst, derived_distance(dmul(module, derived_identity(module), p), p));
        worst = std::max(worst, derived_distance(dinv(module, dinv(module, p)), p));
      }
      return worst;
    });
    timed("derived.algebra_axioms", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.algebra", i);
        auto y = random_alg_elem(rng), w = random_alg_elem(rng), z = random_alg_elem(rng);
        auto yw = dbracket(module, y, w);
        auto wy = dbracket(module, w, y);
        worst = std::max(worst, std::max(max_abs(RealMatrix(yw.u + wy.u)),
                                         max_abs(RealMatrix(yw.U + wy.U))));
        auto j1 = dbracket(module, dbracket(module, y, w), z);
        auto j2 = dbracket(module, dbracket(module, w, z), y);
        auto j3 = dbracket(module, dbracket(module, z, y), w);
        worst = std::max(worst, std::max(max_abs(RealMatrix(j1.u + j2.u + j3.u)),
                                         max_abs(RealMatrix(j1.U + j2.U + j3.U))));
      }
      return worst;
    });
    timed("derived.adjoint_oracle", cfg.tol_fd, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.adjoint", i);
        auto p = random_group_elem(rng);
        auto y = random_alg_elem(rng);
        bool inv = (i % 2) != 0;
        worst = std::max(worst, derived_distance(d_adjoint(module, p, y, inv),
                                                 oracle_d_adjoint(module, p, y, inv, fd())));
      }
      return worst;
    });
    timed("derived.adjoint_inverse", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.adjinv", i);
        auto p = random_group_elem(rng);
        auto y = random_alg_elem(rng);
        worst = std::max(worst, derived_distance(
                                    d_adjoint(module, p, d_adjoint(module, p, y, true)), y));
      }
      return worst;
    });
    timed("derived.adjoint_action", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.adjact", i);
        auto p = random_group_elem(rng), q = random_group_elem(rng);
        auto y = random_alg_elem(rng), w = random_alg_elem(rng);
        worst = std::max(worst,
                         derived_distance(d_adjoint(module, dmul(module, p, q), y),
                                          d_adjoint(module, p, d_adjoint(module, q, y))));
        worst = std::max(worst, derived_distance(
                                    d_adjoint(module, p, dbracket(module, y, w)),
                                    dbracket(module, d_adjoint(module, p, y),
                                             d_adjoint(module, p, w))));
      }
      return worst;
    });
    timed("derived.mc_oracle", cfg.tol_fd, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.mc", i);
        RealMatrix g0 = module.G.random_group(rng);
        RealMatrix x1 = module.G.random_algebra(rng), x2 = module.G.random_algebra(rng);
        RealMatrix e0 = module.E.random_algebra(rng), e1 = module.E.random_algebra(rng),
                   e2 = module.E.random_algebra(rng);
        DerivedCurve curve;
        curve.sample_times = {0.0};
        curve.values = [&, g0, x1, x2, e0, e1, e2](double t) {
          return make_derived(module,
                              RealMatrix(g0 * mexp(RealMatrix(t * x1 + 0.5 * t * t * x2))),
                              RealMatrix(e0 + t * e1 + 0.5 * t * t * e2));
        };
        Side side = (i % 2) ? Side::Right : Side::Left;
        worst = std::max(worst, derived_distance(mc_form(module, curve, 0.0, side, fd()),
                                                 oracle_mc_form(module, curve, 0.0, side, fd())));
      }
      return worst;
    });
    timed("derived.cross_modality", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.cross", i);
        auto p = random_group_elem(rng), q = random_group_elem(rng);
        worst = std::max(worst, derived_distance(cross_mode(dmul(module, p, q)),
                                                 dmul(module, cross_mode(p), cross_mode(q))));
        auto back = cross_mode(cross_mode(p));
        worst = std::max(worst, derived_distance(back, p));
        if (back.modality != p.modality) worst = std::max(worst, 1.0);
      }
      return worst;
    });
    timed("derived.cross_differential", cfg.tol_fd, [&] {
      double worst = 0.0;
      const double h = cfg.fd_step;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.crossfd", i);
        auto y = random_alg_elem(rng);
        auto at = [&](double t) {
          return cross_mode(make_derived(module, mexp(RealMatrix(t * y.u)),
                                         RealMatrix(t * y.U)));
        };
        DerivedGroupElement zp = at(h), zm = at(-h);
        RealMatrix du = (zp.a - zm.a) / (2.0 * h);
        RealMatrix dU = (zp.L - zm.L) / (2.0 * h);
        auto zeta = cross_mode(y);
        worst = std::max(worst, std::max(max_abs(RealMatrix(du - zeta.u)),
                                         max_abs(RealMatrix(dU - zeta.U))));
      }
      return worst;
    });
    timed("derived.morphism_homomorphism", cfg.tol_fd, [&] {
      CrossedModuleMorphism beta = cfg.fixture == FixtureKind::Conj
                                       ? covering_morphism()
                                       : identity_morphism(module);
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.morphhom", i);
        auto p = make_derived(beta.source, beta.source.G.random_group(rng),
                              beta.source.E.random_algebra(rng));
        auto q = make_derived(beta.source, beta.source.G.random_group(rng),
                              beta.source.E.random_algebra(rng));
        worst = std::max(
            worst, derived_distance(derived_morphism(beta, dmul(beta.source, p, q), fd()),
                                    dmul(beta.target, derived_morphism(beta, p, fd()),
                                         derived_morphism(beta, q, fd()))));
      }
      return worst;
    });
    timed("derived.morphism_differential", cfg.tol_fd, [&] {
      CrossedModuleMorphism beta = cfg.fixture == FixtureKind::Conj
                                       ? covering_morphism()
                                       : identity_morphism(module);
      double worst = 0.0;
      const double h = cfg.fd_step;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.morphdiff", i);
        auto y = make_derived_algebra(beta.source, beta.source.G.random_algebra(rng),
                                      beta.source.E.random_algebra(rng));
        auto curve = [&](double t) {
          return derived_morphism(
              beta,
              make_derived(beta.source, mexp(RealMatrix(t * y.u)), RealMatrix(t * y.U)),
              fd());
        };
        DerivedGroupElement zp = curve(h), zm = curve(-h);
        RealMatrix du = (zp.a - zm.a) / (2.0 * h);
        RealMatrix dU = (zp.L - zm.L) / (2.0 * h);
        auto img = derived_morphism(beta, y, fd());
        worst = std::max(worst, std::max(max_abs(RealMatrix(du - img.u)),
                                         max_abs(RealMatrix(dU - img.U))));
      }
      return worst;
    });
    transports();
  }

  DerivedField sample_field(Rng& rng, int odd_count) {
    DerivedField c;
    std::vector<RealMatrix> gdirs, edirs;
    for (int k = 0; k < 2; ++k) gdirs.push_back(module.G.random_algebra(rng));
    for (int k = 0; k < odd_count + 1; ++k) edirs.push_back(module.E.random_algebra(rng));
    c.r = [this, gdirs](const RealVector& x) {
      RealMatrix acc = RealMatrix::Zero(module.G.n, module.G.n);
      for (std::size_t k = 0; k < gdirs.size(); ++k)
        acc += (0.3 + 0.4 * x[static_cast<int>(k) % x.size()]) * gdirs[k];
      return mexp(acc);
    };
    for (int j = 0; j < odd_count; ++j) {
      RealMatrix base = edirs[j], extra = edirs[j + 1];
      c.O.push_back([this, base, extra, j](const RealVector& x) {
        return RealMatrix(base + (0.25 * x[j % x.size()]) * extra);
      });
    }
    return c;
  }

  void transports() {
    GradedContext ctx = make_graded_context();
    FieldGenerators gens{ctx.og.alg, {ctx.yp[0], ctx.yp[1]}};
    RealVector x0(2);
    timed("derived.transport_odd", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.transport_odd", i);
        DerivedField c = sample_field(rng, 2);
        x0 << rng.uniform(0, 1), rng.uniform(0, 1);
        FieldDerivation d{FieldDerivation::Kind::OddPartial, i % 2, 0};
        Side side = (i % 4 < 2) ? Side::Left : Side::Right;
        worst = std::max(worst,
                         derived_distance(derivation_transport(module, c, d, side, x0, gens, fd()),
                                          oracle_derivation_transport(module, c, d, side, x0,
                                                                      gens, fd())));
      }
      return worst;
    });
    timed("derived.transport_even", cfg.tol_fd, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.transport_even", i);
        DerivedField c = sample_field(rng, 2);
        x0 << rng.uniform(0, 1), rng.uniform(0, 1);
        FieldDerivation d{FieldDerivation::Kind::OddEvenPartial, i % 2, (i / 2) % 2};
        Side side = (i % 4 < 2) ? Side::Left : Side::Right;
        worst = std::max(worst,
                         derived_distance(derivation_transport(module, c, d, side, x0, gens, fd()),
                                          oracle_derivation_transport(module, c, d, side, x0,
                                                                      gens, fd())));
      }
      return worst;
    });
    timed("derived.dtau_transport", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "derived.dtau", i);
        DerivedField c = sample_field(rng, 2);
        x0 << rng.uniform(0, 1), rng.uniform(0, 1);
        Side side = (i % 2) ? Side::Right : Side::Left;
        worst = std::max(worst, derived_distance(dtau_transport(module, c, side, x0, gens),
                                                 oracle_dtau_transport(module, c, side, x0, gens)));
      }
      return worst;
    });
  }

  // -- graded degree extension ----------------------------------------------
  GradedDerivedElement sample_graded(const GradedContext& ctx, Rng& rng, int degree) {
    auto dress = [&](int spec_deg, const GroupSpec& spec) {
      GradedMatrix m = from_real(RealMatrix::Zero(spec.n, spec.n), ctx.og.alg);
      auto add_term = [&](const Monomial& mono) {
        GradedMatrix t = from_real(spec.random_algebra(rng), ctx.og.alg);
        for (Eigen::Index r = 0; r < t.rows(); ++r)
          for (Eigen::Index c = 0; c < t.cols(); ++c) {
            double v = t(r, c).constant_part();
            if (v != 0.0) m(r, c).add_term(mono, v);
          }
      };
      switch (spec_deg) {
        case -1: add_term({(std::uint8_t)ctx.ym[0]}); break;
        case 0:
          add_term({});
          add_term({(std::uint8_t)ctx.yp[0], (std::uint8_t)ctx.ym[1]});
          break;
        case 1:
          add_term({(std::uint8_t)ctx.yp[0]});
          add_term({(std::uint8_t)ctx.yp[1]});
          break;
        case 2: add_term({(std::uint8_t)ctx.yp[0], (std::uint8_t)ctx.yp[1]}); break;
        case 3:
          add_term({(std::uint8_t)ctx.yp[0], (std::uint8_t)ctx.yp[1],
                    (std::uint8_t)ctx.yp[2]});
          break;
        default: throw std::logic_error("unsupported sample degree");
      }
      return m;
    };
    return make_graded_derived(module, degree, dress(degree, module.G),
                               dress(degree + 1, module.E));
  }

  void graded() {
    GradedContext ctx = make_graded_context();
    const int degrees[] = {-1, 0, 1, 2};
    timed("graded.bracket_oracle", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "graded.bracket", i);
        auto s = sample_graded(ctx, rng, degrees[i % 4]);
        auto t = sample_graded(ctx, rng, degrees[(i / 2 + 1) % 4]);
        worst = std::max(worst, derived_distance(graded_bracket(module, s, t),
                                                 oracle_graded_bracket(module, s, t)));
      }
      return worst;
    });
    timed("graded.antisymmetry", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "graded.antisym", i);
        auto s = sample_graded(ctx, rng, degrees[i % 4]);
        auto t = sample_graded(ctx, rng, degrees[(i / 3 + 2) % 4]);
        auto st = graded_bracket(module, s, t);
        auto ts = graded_bracket(module, t, s);
        double sign = (s.degree * t.degree) % 2 ? 1.0 : -1.0;
        worst = std::max(worst,
                         std::max(max_abs_coeff(GradedMatrix(st.j - sign * ts.j)),
                                  max_abs_coeff(GradedMatrix(st.J - sign * ts.J))));
      }
      return worst;
    });
    timed("graded.jacobi", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "graded.jacobi", i);
        auto s = sample_graded(ctx, rng, degrees[i % 3]);
        auto t = sample_graded(ctx, rng, degrees[(i + 1) % 3]);
        auto r = sample_graded(ctx, rng, degrees[(i + 2) % 3]);
        auto lhs = graded_bracket(module, s, graded_bracket(module, t, r));
        auto rhs1 = graded_bracket(module, graded_bracket(module, s, t), r);
        auto rhs2 = graded_bracket(module, t, graded_bracket(module, s, r));
        double sign = (s.degree * t.degree) % 2 ? -1.0 : 1.0;
        worst = std::max(worst,
                         std::max(max_abs_coeff(GradedMatrix(lhs.j - rhs1.j - sign * rhs2.j)),
                                  max_abs_coeff(GradedMatrix(lhs.J - rhs1.J - sign * rhs2.J))));
      }
      return worst;
    });
    timed("graded.coboundary_squares", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "graded.cob2", i);
        auto s = sample_graded(ctx, rng, degrees[i % 4]);
        auto dd = coboundary_dt(module, coboundary_dt(module, s));
        worst = std::max(worst, std::max(max_abs_coeff(dd.j), max_abs_coeff(dd.J)));
      }
      return worst;
    });
    timed("graded.coboundary_leibniz", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "graded.leibniz", i);
        auto s = sample_graded(ctx, rng, degrees[i % 3]);
        auto t = sample_graded(ctx, rng, degrees[(i + 1) % 4]);
        auto lhs = coboundary_dt(module, graded_bracket(module, s, t));
        auto r1 = graded_bracket(module, coboundary_dt(module, s), t);
        auto r2 = graded_bracket(module, s, coboundary_dt(module, t));
        double sign = s.degree % 2 ? -1.0 : 1.0;
        worst = std::max(worst,
                         std::max(max_abs_coeff(GradedMatrix(lhs.j - r1.j - sign * r2.j)),
                                  max_abs_coeff(GradedMatrix(lhs.J - r1.J - sign * r2.J))));
      }
      return worst;
    });
    timed("graded.degree0_consistency", cfg.tol_alg, [&] {
      double worst = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = stream_rng(cfg.seed, "graded.deg0", i);
        auto y = random_alg_elem(rng), w = random_alg_elem(rng);
        GradedMatrix ju = from_real(y.u, ctx.og.alg);
        GradedMatrix jw = from_real(w.u, ctx.og.alg);
        GradedScalar y0 = GradedScalar::generator(ctx.og.alg, ctx.yp[0], 1.0);
        GradedScalar y1 = GradedScalar::generator(ctx.og.alg, ctx.yp[1], 1.0);
        auto s = make_graded_derived(module, 0, ju, y0 * from_real(y.U, ctx.og.alg));
        auto t = make_graded_derived(module, 0, jw, y1 * from_real(w.U, ctx.og.alg));
        auto st = graded_bracket(module, s, t);
        auto plain = dbracket(module, y, w);
        RealMatrix esum = coefficient(st.J, {(std::uint8_t)ctx.yp[0]}) +
                          coefficient(st.J, {(std::uint8_t)ctx.yp[1]});
        worst = std::max(worst, max_abs(RealMatrix(body(st.j) - plain.u)));
        worst = std::max(worst, max_abs(RealMatrix(esum - plain.U)));
      }
      return worst;
    });
    if (cfg.fixture == FixtureKind::Lin) {
      timed("graded.coboundary_lin_zero", cfg.tol_alg, [&] {
        double worst = 0.0;
        for (int i = 0; i < cfg.samples; ++i) {
          Rng rng = stream_rng(cfg.seed, "graded.linzero", i);
          auto s = sample_graded(ctx, rng, degrees[i % 4]);
          auto dt = coboundary_dt(module, s);
          worst = std::max(worst, std::max(max_abs_coeff(dt.j), max_abs_coeff(dt.J)));
        }
        return worst;
      });
    }
  }

  // -- synthetic bundle -------------------------------------------------------
  void bundle() {
    BundleModel model = make_bundle_model(module, 2);
    BundleChart chart(model);
    {
      auto t0 = std::chrono::steady_clock::now();
      ResidualReport rep = bundle_structure_check(model, 2 * cfg.samples, cfg.seed);
      auto t1 = std::chrono::steady_clock::now();
      double el = std::chrono::duration<double>(t1 - t0).count() / rep.rows.size();
      for (const auto& row : rep.rows) add("bundle." + row.name, row.residual, cfg.tol_alg, el);
    }
    {
      auto t0 = std::chrono::steady_clock::now();
      ResidualReport rep = cartan_check(chart, 2 * cfg.samples, cfg.seed);
      auto t1 = std::chrono::steady_clock::now();
      double el = std::chrono::duration<double>(t1 - t0).count() / rep.rows.size();
      for (const auto& row : rep.rows) add("bundle." + row.name, row.residual, cfg.tol_fd, el);
    }
    timed("bundle.basic_pullbacks", cfg.tol_fd, [&] {
      double worst = 0.0;
      CoefPoly x0 = CoefPoly::atom(chart.atom_x(0)), x1 = CoefPoly::atom(chart.atom_x(1));
      std::vector<FormField> pullbacks = {chart.constant(2.5), chart.pullback(x0),
                                          chart.pullback(x0 * x1 + x1 * x1)};
      for (const auto& f : pullbacks) {
        auto [ok, res] = basic_check(chart, f, 6, std::max(4, cfg.samples / 8), cfg.seed);
        (void)ok;
        worst = std::max(worst, res);
      }
      return worst;
    });
    timed("bundle.basic_witness_margin", 0.0, [&] {
      std::vector<FormField> witnesses = {chart.entry_a(0, module.G.n > 1 ? 1 : 0),
                                          chart.coordinate_lambda(0)};
      double least = 1e300;
      for (const auto& f : witnesses) {
        auto [ok, res] = basic_check(chart, f, 6, std::max(4, cfg.samples / 8), cfg.seed);
        (void)ok;
        least = std::min(least, res);
      }
      return std::max(0.0, 0.1 - least);
    });
    {
      auto t0 = std::chrono::steady_clock::now();
      ResidualReport rep = restriction_morphism_check(chart, cfg.samples, cfg.seed);
      auto t1 = std::chrono::steady_clock::now();
      double el = std::chrono::duration<double>(t1 - t0).count() / rep.rows.size();
      for (const auto& row : rep.rows) add("bundle." + row.name, row.residual, cfg.tol_fd, el);
    }
  }

  void gauge() {
    BundleModel model = make_bundle_model(module, 2);
    auto t0 = std::chrono::steady_clock::now();
    ResidualReport rep = gauge_check(model, cfg.samples, cfg.seed);
    auto t1 = std::chrono::steady_clock::now();
    double el = std::chrono::duration<double>(t1 - t0).count() / rep.rows.size();
    for (const auto& row : rep.rows) add("gauge." + row.name, row.residual, cfg.tol_alg, el);
  }

  // -- negative controls -------------------------------------------------------
  void negative_controls() {
    timed("negative.mu_corrupted", cfg.tol_alg, [&] {
      GroupCrossedModule bad = corrupt_mu(module, 1.01);
      return check_group_axioms(bad, cfg.samples, cfg.seed).max_residual();
    });
    timed("negative.contraction_flipped", cfg.tol_fd, [&] {
      BundleModel model = make_bundle_model(module, 2);
      BundleChart chart(model);
      BundleCheckOptions opts;
      opts.flip_contraction_sign = true;
      ResidualReport rep = cartan_check(chart, std::max(8, cfg.samples / 4), cfg.seed, opts);
      return std::max(rep.residual("opers5"), rep.residual("opers2"));
    });
    timed("negative.adjoint_term_dropped", cfg.tol_fd, [&] {
      double worst = 0.0;
      for (int i = 0; i < std::max(8, cfg.samples / 4); ++i) {
        Rng rng = stream_rng(cfg.seed, "negative.adjoint", i);
        auto p = random_group_elem(rng);
        auto y = random_alg_elem(rng);
        RealMatrix adu = adjoint_group(p.a, y.u);
        DerivedAlgebraElement broken{adu, module.exact.mu_dot(p.a, y.U), module.name,
                                     y.modality};
        worst = std::max(worst, derived_distance(broken,
                                                 oracle_d_adjoint(module, p, y, false, fd())));
      }
      return worst;
    });
  }
};

}  // namespace

std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  FixtureParams params;
  params.lin_dim = cfg.lin_dim;
  GroupCrossedModule module = make_fixture(cfg.fixture, params);
  std::vector<CheckResult> results;
  Runner runner{cfg, std::move(module), fixture_display_name(cfg), results};
  if (cfg.suites.count("axioms")) runner.axioms();
  if (cfg.suites.count("identities")) runner.identities();
  if (cfg.suites.count("variational")) runner.variational();
  if (cfg.suites.count("derived")) runner.derived();
  if (cfg.suites.count("graded")) runner.graded();
  if (cfg.suites.count("bundle")) runner.bundle();
  if (cfg.suites.count("gauge")) runner.gauge();
  if (cfg.negative_control) runner.negative_controls();
  std::stable_sort(results.begin(), results.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     if (a.passed != b.passed) return !a.passed;
                     return a.check_name < b.check_name;
                   });
  return results;
}

int exit_code(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}

std::string emit_report(const std::vector<CheckResult>& results, ReportFormat format) {
  std::string out;
  char buf[512];
  if (format == ReportFormat::Text) {
    out += "dercross check report\n";
    std::size_t name_w = 4, fx_w = 7;
    for (const auto& r : results) {
      name_w = std::max(name_w, r.check_name.size());
      fx_w = std::max(fx_w, r.fixture_name.size());
    }
    double total = 0.0;
    int failures = 0;
    for (const auto& r : results) {
      std::snprintf(buf, sizeof buf, "CHECK %-*s %-*s max_residual=%-13g tol=%-8g %s\n",
                    static_cast<int>(name_w), r.check_name.c_str(), static_cast<int>(fx_w),
                    r.fixture_name.c_str(), r.max_residual, r.tolerance,
                    r.passed ? "PASS" : "FAIL");
      out += buf;
      total += r.elapsed;
      if (!r.passed) ++failures;
    }
    if (!results.empty()) {
      std::snprintf(buf, sizeof buf, "%zu checks, %d failures, %.2fs total\n",
                    results.size(), failures, total);
      out += buf;
    }
  } else {
    // The elapsed field is pinned to zero here: machine reports are the
    // byte-identical artifact of a run; timings live in the text summary.
    for (const auto& r : results) {
      std::snprintf(buf, sizeof buf,
                    "name=%s fixture=%s max_residual=%.17g tol=%.17g passed=%s "
                    "elapsed=0.000000\n",
                    r.check_name.c_str(), r.fixture_name.c_str(), r.max_residual,
                    r.tolerance, r.passed ? "true" : "false");
      out += buf;
    }
  }
  return out;
}

}  // namespace dercross
