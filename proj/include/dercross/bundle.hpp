#ifndef DERCROSS_BUNDLE_HPP
#define DERCROSS_BUNDLE_HPP

#include "dercross/derived.hpp"

namespace dercross {

/// Polynomial in the base-coordinate atoms of the chart (x components, a
/// entries, a^-1 entries). Coefficient functions of form fields live here so
/// that the de Rham derivation differentiates them symbolically; the Cartan
/// relations then hold to roundoff instead of to finite-difference error.
class CoefPoly {
 public:
  using Mono = std::vector<std::uint16_t>;  // sorted atom ids, repeats allowed

  CoefPoly() = default;
  CoefPoly(double c) {  // NOLINT: scalars promote
    if (c != 0.0) terms_[Mono{}] = c;
  }
  static CoefPoly atom(int id) {
    CoefPoly p;
    p.terms_[Mono{static_cast<std::uint16_t>(id)}] = 1.0;
    return p;
  }

  const std::map<Mono, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  CoefPoly operator-() const {
    CoefPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend CoefPoly operator+(CoefPoly a, const CoefPoly& b) {
    for (const auto& [m, c] : b.terms_) a.add(m, c);
    return a;
  }
  friend CoefPoly operator-(CoefPoly a, const CoefPoly& b) {
    for (const auto& [m, c] : b.terms_) a.add(m, -c);
    return a;
  }
  friend CoefPoly operator*(const CoefPoly& a, const CoefPoly& b) {
    CoefPoly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m;
        m.reserve(ma.size() + mb.size());
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
        r.add(m, ca * cb);
      }
    return r;
  }

  double eval(const std::function<double(int)>& atom_value) const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = c;
      for (auto id : m) t *= atom_value(id);
      s += t;
    }
    return s;
  }

  /// Derivation determined by its values on atoms.
  CoefPoly derive(const std::function<CoefPoly(int)>& atom_image) const {
    CoefPoly r;
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i > 0 && m[i] == m[i - 1]) continue;  // handled via multiplicity
        std::size_t mult = std::count(m.begin(), m.end(), m[i]);
        CoefPoly rest(c * static_cast<double>(mult));
        Mono rem = m;
        rem.erase(std::find(rem.begin(), rem.end(), m[i]));
        CoefPoly restmono;
        restmono.terms_[rem] = 1.0;
        r = r + rest * restmono * atom_image(m[i]);
      }
    }
    return r;
  }

  void add(const Mono& m, double c) {
    if (c == 0.0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = c;
    } else {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

 private:
  std::map<Mono, double> terms_;
};

inline bool coef_is_zero(const CoefPoly& c) { return c.empty(); }
inline double coef_abs_bound(const CoefPoly& c) {
  double s = 0.0;
  for (const auto& [m, v] : c.terms()) s += std::abs(v);
  return s;
}

/// Internal function on the shifted tangent bundle of the model total space:
/// a Grassmann polynomial in the fiber generators whose coefficients are
/// CoefPoly functions of the base coordinates.
using FormField = GradedPoly<CoefPoly>;

/// Trivial-model synthetic 2-bundle U x DM over U inside R^d.
struct BundleModel {
  GroupCrossedModule module;
  int base_dim = 2;
  RealVector lo, hi;  // chart bounds; defaults to the unit cube
};

BundleModel make_bundle_model(const GroupCrossedModule& module, int base_dim = 2);

struct SyntheticPoint {
  RealVector x;
  RealMatrix a;  // in G
  RealMatrix L;  // in Lie(E), the e[1] fiber displacement
};

SyntheticPoint make_point(const BundleModel& model, RealVector x, RealMatrix a, RealMatrix L);
SyntheticPoint random_point(const BundleModel& model, Rng& rng);

/// (x, a, L) -> (x, a, 0); the object-space projection, idempotent.
SyntheticPoint source_map(const SyntheticPoint& v);
RealVector project(const SyntheticPoint& v);
SyntheticPoint right_action(const BundleModel& model, const SyntheticPoint& v,
                            const DerivedGroupElement& q);
std::pair<RealVector, DerivedGroupElement> trivialize(const BundleModel& model,
                                                      const SyntheticPoint& v);

/// Chart of T[1]P: one odd generator per e-coordinate (lambda), per base
/// differential (dx), per right-trivialized group direction (rho), one even
/// generator per e-coordinate differential (dlambda), plus a pool of odd
/// auxiliaries dressing the e[1] slots of contraction directions.
class BundleChart {
 public:
  explicit BundleChart(const BundleModel& model);

  const BundleModel& model() const { return model_; }
  const AlgebraPtr& algebra() const { return alg_; }
  int dim_g() const { return dim_g_; }
  int dim_e() const { return dim_e_; }

  int lam(int r) const { return lam_.at(r); }
  int dx(int i) const { return dx_.at(i); }
  int rho(int c) const { return rho_.at(c); }
  int dlam(int r) const { return dlam_.at(r); }
  int eps(int k) const { return eps_.at(k); }

  int atom_x(int i) const { return i; }
  int atom_a(int j, int k) const { return model_.base_dim + j * n_ + k; }
  int atom_ainv(int j, int k) const { return model_.base_dim + n_ * n_ + j * n_ + k; }

  // Field constructors.
  FormField constant(double c) const;
  FormField coordinate_x(int i) const;           // pullback of a base coordinate
  FormField pullback(const CoefPoly& p) const;   // pullback of a base polynomial
  FormField entry_a(int j, int k) const;         // matrix entry of a
  FormField coordinate_lambda(int r) const;      // component of L
  FormField generator_field(int gen) const;

  /// The de Rham derivation; exact on this chart.
  FormField d(const FormField& f) const;

  /// Contraction direction with dressed e[1] slots.
  struct Direction {
    RealVector u_coords;                                   // g coordinates
    std::vector<std::pair<Monomial, RealVector>> e_terms;  // dressed e coordinates
  };
  Direction direction(const DerivedAlgebraElement& z, int eps_slot) const;
  Direction direction_bracket(const Direction& z, const Direction& w) const;

  FormField contraction(const Direction& z, const FormField& f,
                        bool flip_sign = false) const;
  FormField lie_derivative(const Direction& z, const FormField& f,
                           bool flip_sign = false) const;

  GradedScalar eval(const FormField& f, const SyntheticPoint& pt) const;
  double residual(const FormField& f, const SyntheticPoint& pt) const;

  /// Pullback to the object space P0 (L = 0 slice): drops every term carrying
  /// a lambda or dlambda generator.
  FormField object_restrict(const FormField& f) const;
  bool object_direction(const DerivedAlgebraElement& z) const;  // e-part zero?

  /// The sampling family the suites draw fields from.
  std::vector<FormField> sample_fields() const;

 private:
  BundleModel model_;
  AlgebraPtr alg_;
  int n_ = 0, dim_g_ = 0, dim_e_ = 0;
  std::vector<int> lam_, dx_, rho_, dlam_, eps_;
  std::vector<std::vector<std::vector<double>>> f_;  // structure constants of g
  std::vector<std::vector<CoefPoly>> mu_poly_;       // [s][r]: mu-dot(a, e_s) comp r
  std::vector<std::vector<CoefPoly>> ad_poly_;       // [d][c]: Ad a(T_d) comp c
  CoefPoly coef_deriv_x(const CoefPoly& p, int i) const;
  CoefPoly coef_deriv_group(const CoefPoly& p, int c) const;
};

/// Flow derivative of a form field along the vertical field of Z: the even
/// component by central differences, the odd component exactly through the
/// graded chain rule.
GradedScalar vertical_field(const BundleChart& chart, const DerivedAlgebraElement& z,
                            const FormField& f, const SyntheticPoint& at,
                            const FdOptions& opts = {});

struct DerivationHandle {
  enum class Kind { DeRham, Contraction, Lie } kind = Kind::DeRham;
  DerivedAlgebraElement z;  // for Contraction / Lie
};

GradedScalar apply_derivation_at(const BundleChart& chart, const DerivationHandle& d,
                                 const FormField& f, const SyntheticPoint& at);

struct BundleCheckOptions {
  bool flip_contraction_sign = false;  // negative control
};

/// The six Cartan relations on sampled (Z, W, field, point) tuples spanning
/// g- and e[1]-directions; opers2 holds by construction of the Lie derivative.
ResidualReport cartan_check(const BundleChart& chart, int samples, std::uint64_t seed,
                            const BundleCheckOptions& opts = {});

std::pair<bool, double> basic_check(const BundleChart& chart, const FormField& f,
                                    int directions, int points, std::uint64_t seed,
                                    double tol = 1e-6);

/// Morphism of operations induced by the object-space inclusion: restriction
/// commutes with d and with contractions/Lie derivatives along g-directions.
ResidualReport restriction_morphism_check(const BundleChart& chart, int samples,
                                          std::uint64_t seed);

/// Structure-map property suite: pi = pi0 o s, pi o R = pi o pr1, the right
/// action axiom and the equivariance of the trivialization.
ResidualReport bundle_structure_check(const BundleModel& model, int samples,
                                      std::uint64_t seed);

enum class GaugeKind { Object, Morphism };

/// Local gauge-2-group elements in the semidirect representation:
/// H_V(m, A) = A^-1 V(m) A with V base -> G (object kind, A arbitrary) and
/// theta_sigma(m, a) = a^-1 sigma(m) a with a in G (morphism kind).
RealMatrix local_gauge(const GroupCrossedModule& module,
                       const std::function<RealMatrix(const RealVector&)>& v_base_to_G,
                       const RealVector& at, const RealMatrix& a_rep, GaugeKind kind);

ResidualReport gauge_check(const BundleModel& model, int samples, std::uint64_t seed);

}  // namespace dercross

#endif  // DERCROSS_BUNDLE_HPP
