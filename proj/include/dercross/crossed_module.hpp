#ifndef DERCROSS_CROSSED_MODULE_HPP
#define DERCROSS_CROSSED_MODULE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dercross/fd.hpp"
#include "dercross/groups.hpp"

namespace dercross {

enum class FixtureKind { Conj, Lin, Cover };

using Map1 = std::function<RealMatrix(const RealMatrix&)>;
using Map2 = std::function<RealMatrix(const RealMatrix&, const RealMatrix&)>;

/// (e, g, t, m): two matrix Lie algebras, a morphism t: e -> g and an action
/// m: g x e -> e obeying equivariance and the Peiffer identity.
struct AlgebraCrossedModule {
  GroupSpec e, g;  // algebra descriptors ride along on the group specs
  Map1 t;
  Map2 m;  // m(u, U)
  std::string name;
};

/// The four differentiated structure maps of a group crossed module, in the
/// curve conventions this library standardizes on: dot_mu(x, A) is the
/// derivative of u -> mu(c(u), A) A^{-1}, so its value lies in e.
struct DifferentiatedMaps {
  Map1 tau_dot;      // e -> g
  Map2 mu_dot;       // G x e -> e
  Map2 dot_mu;       // g x E -> e
  Map2 dot_mu_dot;   // g x e -> e
};

/// (E, G, tau, mu) with concrete matrix groups. Fixtures also carry exact
/// closed forms of the differentiated maps; differentiate_module builds the
/// finite-difference versions that get validated against them.
struct GroupCrossedModule {
  FixtureKind kind = FixtureKind::Conj;
  GroupSpec E, G;
  Map1 tau;
  Map2 mu;  // mu(a, A)
  DifferentiatedMaps exact;
  AlgebraCrossedModule algebra;
  std::string name;
};

struct FixtureParams {
  int lin_dim = 3;
  bool conj_on_quaternions = false;  // CONJ over the 2-fold cover group instead of SO(3)
};

GroupCrossedModule make_fixture(FixtureKind kind, const FixtureParams& params = {});

/// Negative-control mutation: scales the E-output of mu by `factor`.
GroupCrossedModule corrupt_mu(const GroupCrossedModule& m, double factor);

/// Pair of group morphisms (Phi: E' -> E, phi: G' -> G) intertwining tau and
/// mu; phi_dot/Phi_dot hold exact differentials when the construction has
/// them, otherwise derived_morphism falls back to finite differences.
struct CrossedModuleMorphism {
  GroupCrossedModule source, target;
  Map1 Phi, phi;
  Map1 Phi_dot, phi_dot;  // may be empty
  std::string name;
};

CrossedModuleMorphism identity_morphism(const GroupCrossedModule& m);
/// Discrete submodule (1_E, G) of m and its inclusion.
GroupCrossedModule discrete_submodule(const GroupCrossedModule& m);
CrossedModuleMorphism discrete_inclusion(const GroupCrossedModule& m);
/// CONJ(unit quaternions) -> CONJ(rotations) along the covering projection.
CrossedModuleMorphism covering_morphism();

struct ResidualReport {
  struct Row {
    std::string name;
    double residual = 0.0;
  };
  std::vector<Row> rows;

  double max_residual() const {
    double r = 0.0;
    for (const auto& row : rows) r = std::max(r, row.residual);
    return r;
  }
  double residual(const std::string& name) const {
    for (const auto& row : rows)
      if (row.name == name) return row.residual;
    throw std::out_of_range("no residual row named " + name);
  }
  void add(std::string name, double r) { rows.push_back({std::move(name), r}); }
  void fold(std::string name, double r) {
    for (auto& row : rows)
      if (row.name == name) {
        row.residual = std::max(row.residual, r);
        return;
      }
    add(std::move(name), r);
  }
};

/// Equivariance tau(mu(a,A)) = a tau(A) a^-1 and Peiffer mu(tau(A),B) = ABA^-1
/// plus the morphism property of tau, over seeded samples.
ResidualReport check_group_axioms(const GroupCrossedModule& m, int samples,
                                  std::uint64_t seed);

/// t = tau-dot, m = dot-mu-dot via central finite differences.
std::pair<AlgebraCrossedModule, DifferentiatedMaps> differentiate_module(
    const GroupCrossedModule& m, const FdOptions& opts = {});

ResidualReport check_algebra_axioms(const AlgebraCrossedModule& m, int samples,
                                    std::uint64_t seed);

ResidualReport check_morphism(const CrossedModuleMorphism& beta, int samples,
                              std::uint64_t seed);

/// The six algebraic identities relating the differentiated structure maps
/// (the dot_mu used here is the finite-difference one of the passed maps).
ResidualReport identity_suite(const GroupCrossedModule& m, const DifferentiatedMaps& dm,
                              int samples, std::uint64_t seed);

/// The three variational identities, with the outer variation taken along
/// random curve directions by central differences.
ResidualReport variational_suite(const GroupCrossedModule& m, const DifferentiatedMaps& dm,
                                 int samples, std::uint64_t seed,
                                 const FdOptions& opts = {});

/// Max residual of the variational identities evaluated in `long double` with
/// exact structure maps, as a function of the variation step; the quadratic
/// convergence acceptance check compares two steps through this.
double variational_residual_extended(FixtureKind kind, double step, int samples,
                                     std::uint64_t seed);

}  // namespace dercross

#endif  // DERCROSS_CROSSED_MODULE_HPP
