#ifndef DERCROSS_GRASSMANN_HPP
#define DERCROSS_GRASSMANN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dercross {

/// Where a generator comes from. Diagnostic only; commutation behavior is
/// decided by the parity of the degree alone.
enum class GeneratorOrigin { Internal, Form, Auxiliary };

struct GeneratorSpec {
  std::string name;
  int degree = 0;  // Z-degree; odd degree => anticommuting, squares to zero
  GeneratorOrigin origin = GeneratorOrigin::Auxiliary;

  bool odd() const { return (degree % 2) != 0; }
};

/// A finite set of Z-graded generators shared by the scalars built over it.
/// Instances are immutable once populated and handed around by shared_ptr.
class GrassmannAlgebra {
 public:
  explicit GrassmannAlgebra(std::size_t cap = 8) : cap_(cap) {}

  int add_generator(std::string name, int degree,
                    GeneratorOrigin origin = GeneratorOrigin::Auxiliary) {
    if (gens_.size() >= cap_)
      throw std::runtime_error("GrassmannAlgebra: generator cap (" +
                               std::to_string(cap_) + ") exceeded");
    for (const auto& g : gens_)
      if (g.name == name)
        throw std::runtime_error("GrassmannAlgebra: duplicate generator '" + name + "'");
    gens_.push_back({std::move(name), degree, origin});
    return static_cast<int>(gens_.size()) - 1;
  }

  std::size_t size() const { return gens_.size(); }
  std::size_t capacity() const { return cap_; }
  const GeneratorSpec& generator(int id) const { return gens_.at(id); }
  int degree(int id) const { return gens_.at(id).degree; }
  bool odd(int id) const { return gens_.at(id).odd(); }

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return static_cast<int>(i);
    return -1;
  }

 private:
  std::size_t cap_;
  std::vector<GeneratorSpec> gens_;
};

using AlgebraPtr = std::shared_ptr<const GrassmannAlgebra>;

/// A product of generators, stored sorted by generator id. Odd generators are
/// squarefree; even ones may repeat.
using Monomial = std::vector<std::uint8_t>;

/// Multiplies two sorted monomials. Returns the merged monomial and the Koszul
/// sign, or nullopt when an odd generator repeats (the product vanishes).
inline std::optional<std::pair<Monomial, int>> mul_monomials(
    const GrassmannAlgebra& alg, const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  int sign = 1;
  std::size_t i = 0, j = 0;
  // Count of odd generators of `a` not yet consumed; each odd element of `b`
  // placed before them picks up one transposition per skipped odd factor.
  std::size_t odd_left = 0;
  for (std::uint8_t g : a)
    if (alg.odd(g)) ++odd_left;
  while (i < a.size() || j < b.size()) {
    bool take_a = j >= b.size() || (i < a.size() && a[i] <= b[j]);
    if (take_a) {
      if (i < a.size() && j < b.size() && a[i] == b[j] && alg.odd(a[i]))
        return std::nullopt;  // odd square
      if (alg.odd(a[i])) --odd_left;
      out.push_back(a[i++]);
    } else {
      if (alg.odd(b[j]) && (odd_left % 2)) sign = -sign;
      out.push_back(b[j++]);
    }
  }
  return std::make_pair(std::move(out), sign);
}

/// Sorts an arbitrary generator sequence into canonical form, returning the
/// accumulated Koszul sign (nullopt if an odd generator repeats).
inline std::optional<std::pair<Monomial, int>> normalize_monomial(
    const GrassmannAlgebra& alg, Monomial m) {
  int sign = 1;
  // Insertion sort with parity tracking; monomials are tiny.
  for (std::size_t i = 1; i < m.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && m[j - 1] > m[j]) {
      if (alg.odd(m[j - 1]) && alg.odd(m[j])) sign = -sign;
      std::swap(m[j - 1], m[j]);
      --j;
    }
  }
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i] == m[i - 1] && alg.odd(m[i])) return std::nullopt;
  return std::make_pair(std::move(m), sign);
}

inline int monomial_degree(const GrassmannAlgebra& alg, const Monomial& m) {
  int d = 0;
  for (std::uint8_t g : m) d += alg.degree(g);
  return d;
}

inline int monomial_parity(const GrassmannAlgebra& alg, const Monomial& m) {
  int p = 0;
  for (std::uint8_t g : m)
    if (alg.odd(g)) p ^= 1;
  return p;
}

// Coefficient-ring hooks. GradedPoly works over any commutative coefficient
// ring providing these; double is the default, the bundle module instantiates
// it again with symbolic base-coordinate polynomials.
inline bool coef_is_zero(double c) { return c == 0.0; }
inline double coef_abs_bound(double c) { return std::abs(c); }

/// Element of the Grassmann algebra: finitely many canonical monomials with
/// coefficients in `Coef`. Immutable-value semantics throughout.
template <class Coef>
class GradedPoly {
 public:
  using TermMap = std::map<Monomial, Coef>;

  GradedPoly() = default;
  GradedPoly(Coef c) {  // NOLINT: implicit by design, scalars promote
    if (!coef_is_zero(c)) terms_[Monomial{}] = std::move(c);
  }
  explicit GradedPoly(AlgebraPtr alg) : alg_(std::move(alg)) {}
  GradedPoly(AlgebraPtr alg, Coef c) : alg_(std::move(alg)) {
    if (!coef_is_zero(c)) terms_[Monomial{}] = std::move(c);
  }

  static GradedPoly generator(AlgebraPtr alg, int id, Coef unit) {
    GradedPoly p(alg);
    p.terms_[Monomial{static_cast<std::uint8_t>(id)}] = std::move(unit);
    return p;
  }
  static GradedPoly term(AlgebraPtr alg, Monomial mono, Coef c) {
    GradedPoly p(std::move(alg));
    if (!coef_is_zero(c)) {
      auto nm = normalize_monomial(*p.alg_, std::move(mono));
      if (nm) p.terms_[nm->first] = scale_coef(std::move(c), nm->second);
    }
    return p;
  }

  const AlgebraPtr& algebra() const { return alg_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of a monomial, with the query reordered into canonical form
  /// first (so asking for y2*y1 returns minus the stored y1*y2 coefficient).
  Coef coefficient(const Monomial& mono) const {
    if (!alg_) {
      if (mono.empty()) return constant_part();
      return Coef{};
    }
    auto nm = normalize_monomial(*alg_, mono);
    if (!nm) return Coef{};
    auto it = terms_.find(nm->first);
    if (it == terms_.end()) return Coef{};
    return scale_coef(it->second, nm->second);
  }

  Coef constant_part() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Coef{} : it->second;
  }

  /// Common degree of all monomials, or nullopt when inhomogeneous.
  /// The zero element reports degree 0.
  std::optional<int> degree() const {
    if (terms_.empty()) return 0;
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      int dm = alg_ ? monomial_degree(*alg_, m) : 0;
      if (!d)
        d = dm;
      else if (*d != dm)
        return std::nullopt;
    }
    return d;
  }

  int parity() const {  // parity of a homogeneous element; 0 for zero
    auto d = degree();
    if (!d) throw std::runtime_error("parity of inhomogeneous element");
    return ((*d % 2) + 2) % 2;
  }

  GradedPoly operator-() const {
    GradedPoly r = *this;
    for (auto& [m, c] : r.terms_) c = scale_coef(c, -1);
    return r;
  }

  GradedPoly& operator+=(const GradedPoly& o) {
    merge_algebra(o);
    for (const auto& [m, c] : o.terms_) {
      auto it = terms_.find(m);
      if (it == terms_.end()) {
        terms_[m] = c;
      } else {
        it->second = it->second + c;
        if (coef_is_zero(it->second)) terms_.erase(it);
      }
    }
    return *this;
  }
  GradedPoly& operator-=(const GradedPoly& o) { return *this += -o; }

  friend GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
  friend GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }

  friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
    GradedPoly r(a.alg_ ? a.alg_ : b.alg_);
    if (a.alg_ && b.alg_ && a.alg_ != b.alg_)
      throw std::invalid_argument("GradedPoly: mismatched generator sets");
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Coef c = ca * cb;
        if (coef_is_zero(c)) continue;
        if (ma.empty() || mb.empty() || !r.alg_) {
          Monomial m = ma.empty() ? mb : ma;
          r.add_term(m, std::move(c));
        } else {
          auto mm = mul_monomials(*r.alg_, ma, mb);
          if (!mm) continue;  // odd square
          r.add_term(mm->first, scale_coef(std::move(c), mm->second));
        }
      }
    return r;
  }

  GradedPoly& operator*=(const GradedPoly& o) { return *this = *this * o; }

  friend bool operator==(const GradedPoly& a, const GradedPoly& b) {
    return (a - b).is_zero();
  }

  /// Max over monomials of coef_abs_bound; the norm used by all residuals.
  double max_abs() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, coef_abs_bound(c));
    return m;
  }

  void add_term(const Monomial& m, Coef c) {
    if (coef_is_zero(c)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_[m] = std::move(c);
    } else {
      it->second = it->second + c;
      if (coef_is_zero(it->second)) terms_.erase(it);
    }
  }

 private:
  static Coef scale_coef(Coef c, int s) { return s == 1 ? c : Coef{} - c; }

  void merge_algebra(const GradedPoly& o) {
    if (!alg_) {
      alg_ = o.alg_;
    } else if (o.alg_ && o.alg_ != alg_) {
      throw std::invalid_argument("GradedPoly: mismatched generator sets");
    }
  }

  AlgebraPtr alg_;
  TermMap terms_;
};

using GradedScalar = GradedPoly<double>;

inline GradedScalar operator*(double a, const GradedScalar& b) {
  return GradedScalar(a) * b;
}
inline GradedScalar operator*(const GradedScalar& a, double b) {
  return a * GradedScalar(b);
}

/// Applies a derivation D of the given parity to a polynomial. `image` gives
/// D(generator); generators without an image map to zero. The coefficient
/// ring is treated as constant (D kills it); for derivations that also move
/// coefficients (the de Rham d of the bundle module) the caller adds that
/// part separately.
template <class Coef>
GradedPoly<Coef> apply_derivation(
    const GradedPoly<Coef>& f, int op_parity,
    const std::function<GradedPoly<Coef>(int)>& image) {
  GradedPoly<Coef> out(f.algebra());
  const auto& alg = *f.algebra();
  for (const auto& [mono, c] : f.terms()) {
    int sign = 1;  // (-1)^{op_parity * parity(prefix)}
    for (std::size_t i = 0; i < mono.size(); ++i) {
      GradedPoly<Coef> img = image(mono[i]);
      if (!img.is_zero()) {
        Monomial prefix(mono.begin(), mono.begin() + i);
        Monomial suffix(mono.begin() + i + 1, mono.end());
        GradedPoly<Coef> piece =
            GradedPoly<Coef>::term(f.algebra(), prefix, c) * img;
        piece = piece * GradedPoly<Coef>::term(f.algebra(), suffix, Coef(1.0));
        if (sign < 0) piece = -piece;
        out += piece;
      }
      if (op_parity && alg.odd(mono[i])) sign = -sign;
    }
  }
  return out;
}

}  // namespace dercross

#endif  // DERCROSS_GRASSMANN_HPP
