#ifndef DERCROSS_GRADED_MATRIX_HPP
#define DERCROSS_GRADED_MATRIX_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>
#include <string>

#include "dercross/grassmann.hpp"

namespace Eigen {
template <>
struct NumTraits<dercross::GradedScalar> {
  using Real = dercross::GradedScalar;
  using NonInteger = dercross::GradedScalar;
  using Literal = dercross::GradedScalar;
  using Nested = dercross::GradedScalar;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 64
  };
  static int digits10() { return 15; }
  static dercross::GradedScalar epsilon() { return dercross::GradedScalar(1e-15); }
  static dercross::GradedScalar dummy_precision() { return dercross::GradedScalar(1e-12); }
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<dercross::GradedScalar, double, BinaryOp> {
  typedef dercross::GradedScalar ReturnType;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, dercross::GradedScalar, BinaryOp> {
  typedef dercross::GradedScalar ReturnType;
};
}  // namespace Eigen

namespace dercross {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using GradedMatrix = Eigen::Matrix<GradedScalar, Eigen::Dynamic, Eigen::Dynamic>;

inline GradedMatrix from_real(const RealMatrix& m, const AlgebraPtr& alg = nullptr) {
  GradedMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      r(i, j) = alg ? GradedScalar(alg, m(i, j)) : GradedScalar(m(i, j));
  return r;
}

/// Generator-free (degree-0 real) part.
inline RealMatrix body(const GradedMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).constant_part();
  return r;
}

inline GradedMatrix soul(const GradedMatrix& m) {
  GradedMatrix r = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      r(i, j).add_term(Monomial{}, -m(i, j).constant_part());
  return r;
}

/// Entrywise coefficient of a monomial (Koszul-reordered as in GradedScalar).
inline RealMatrix coefficient(const GradedMatrix& m, const Monomial& mono) {
  RealMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).coefficient(mono);
  return r;
}

inline GradedMatrix identity_graded(Eigen::Index n, const AlgebraPtr& alg = nullptr) {
  return from_real(RealMatrix::Identity(n, n), alg);
}

inline double max_abs_coeff(const GradedMatrix& m) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r = std::max(r, m(i, j).max_abs());
  return r;
}

inline double max_abs(const RealMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Writes m = part_without + gen * part_with, the generator factored out on
/// the left of each monomial that contains it.
inline std::pair<GradedMatrix, GradedMatrix> split_generator(const GradedMatrix& m,
                                                             int gen) {
  AlgebraPtr alg;
  for (Eigen::Index i = 0; i < m.size() && !alg; ++i) alg = m(i / m.cols(), i % m.cols()).algebra();
  GradedMatrix without(m.rows(), m.cols()), with(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      GradedScalar w(alg), v(alg);
      const auto& s = m(i, j);
      for (const auto& [mono, c] : s.terms()) {
        auto pos = std::find(mono.begin(), mono.end(), static_cast<std::uint8_t>(gen));
        if (pos == mono.end()) {
          w.add_term(mono, c);
        } else {
          int sign = 1;  // move the generator to the front past earlier odd factors
          for (auto it = mono.begin(); it != pos; ++it)
            if (s.algebra()->odd(*it)) sign = -sign;
          Monomial rest;
          rest.reserve(mono.size() - 1);
          rest.insert(rest.end(), mono.begin(), pos);
          rest.insert(rest.end(), pos + 1, mono.end());
          v.add_term(rest, sign * c);
        }
      }
      without(i, j) = w;
      with(i, j) = v;
    }
  return {without, with};
}

/// Inverse of a graded matrix with invertible body and nilpotent soul:
/// (B + S)^{-1} = sum_k (-B^{-1} S)^k B^{-1}, the series terminating by
/// nilpotence of the soul.
inline GradedMatrix ginverse(const GradedMatrix& m) {
  const RealMatrix b = body(m);
  Eigen::PartialPivLU<RealMatrix> lu(b);
  const RealMatrix binv = lu.inverse();
  const GradedMatrix gbinv = from_real(binv);
  GradedMatrix n = gbinv * soul(m);  // nilpotent
  GradedMatrix acc = identity_graded(m.rows());
  GradedMatrix pw = acc;
  const std::size_t kmax = 2 * (m(0, 0).algebra() ? m(0, 0).algebra()->capacity() : 1) + 2;
  for (std::size_t k = 0; k < kmax; ++k) {
    pw = GradedMatrix(-(pw * n));
    if (max_abs_coeff(pw) == 0.0) break;
    acc += pw;
    if (k + 1 == kmax)
      throw std::runtime_error("ginverse: soul not nilpotent");
  }
  return acc * gbinv;
}

namespace detail {
template <class Scalar>
double scalar_bound(const Scalar& s) {
  return std::abs(static_cast<double>(s));
}
inline double scalar_bound(const GradedScalar& s) {
  double b = 0.0;
  for (const auto& [m, c] : s.terms()) b += std::abs(c);
  return b;
}
template <class Mat>
double coeff_norm_bound(const Mat& m) {  // max row sum of coefficient bounds
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += scalar_bound(m(i, j));
    r = std::max(r, s);
  }
  return r;
}
}  // namespace detail

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
/// Works for real scalars and for Grassmann entries alike; nilpotent parts of
/// the series terminate on their own.
template <class Mat>
Mat mexp_generic(const Mat& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("mexp: non-square input");
  using Scalar = typename Mat::Scalar;
  double norm = detail::coeff_norm_bound(x);
  int k = 0;
  while (norm > 0.25 && k < 60) {
    norm *= 0.5;
    ++k;
  }
  const double scale = std::ldexp(1.0, -k);
  Mat xs = x * Scalar(scale);
  Mat acc = Mat::Identity(x.rows(), x.cols());
  Mat term = acc;
  for (int j = 1; j <= 40; ++j) {
    term = Mat(term * xs) * Scalar(1.0 / j);
    double tb = detail::coeff_norm_bound(term);
    if (tb == 0.0) break;
    acc += term;
    if (tb < 1e-20 * std::max(1.0, detail::coeff_norm_bound(acc))) break;
  }
  for (int j = 0; j < k; ++j) acc = Mat(acc * acc);
  return acc;
}

inline GradedMatrix mexp(const GradedMatrix& x) { return mexp_generic(x); }
inline RealMatrix mexp(const RealMatrix& x) { return mexp_generic(x); }

/// log(1 + n) by the Mercator series; intended for near-identity arguments
/// (small body residual plus nilpotent soul).
inline GradedMatrix log_near_identity(const GradedMatrix& m) {
  GradedMatrix n = m - identity_graded(m.rows());
  GradedMatrix acc = GradedMatrix::Zero(m.rows(), m.cols());
  GradedMatrix pw = identity_graded(m.rows());
  for (int k = 1; k <= 60; ++k) {
    pw = GradedMatrix(pw * n);
    double tb = max_abs_coeff(pw);
    if (tb == 0.0) break;
    acc += pw * GradedScalar((k % 2) ? 1.0 / k : -1.0 / k);
    if (tb < 1e-18) break;
  }
  return acc;
}

/// Matrix logarithm. Precondition: every eigenvalue of the body lies within
/// unit distance of 1. The body is handled by Eigen's dense log, then a short
/// fixed-point refinement absorbs the (nilpotent) soul exactly.
inline GradedMatrix mlog(const GradedMatrix& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("mlog: non-square input");
  const RealMatrix b = body(g);
  Eigen::EigenSolver<RealMatrix> es(b, false);
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    if (std::abs(es.eigenvalues()[i] - std::complex<double>(1.0, 0.0)) >= 1.0)
      throw std::domain_error("mlog: body outside the convergence region");
  RealMatrix x0 = b.log();
  GradedMatrix x = from_real(x0);
  for (int iter = 0; iter < 8; ++iter) {
    GradedMatrix r = ginverse(mexp(x)) * g;
    double res = max_abs_coeff(r - identity_graded(g.rows()));
    if (res < 1e-15) break;
    x += log_near_identity(r);
  }
  return x;
}

/// Graded commutator of matrices with homogeneous graded entries:
/// [a, b] = a b - (-1)^{pa pb} b a. Entry-level Koszul signs are carried by
/// the scalars themselves.
inline GradedMatrix graded_commutator(const GradedMatrix& a, const GradedMatrix& b,
                                      int pa, int pb) {
  GradedMatrix ab = a * b;
  GradedMatrix ba = b * a;
  return (pa * pb) % 2 ? GradedMatrix(ab + ba) : GradedMatrix(ab - ba);
}

inline RealMatrix commutator(const RealMatrix& a, const RealMatrix& b) {
  return a * b - b * a;
}

}  // namespace dercross

#endif  // DERCROSS_GRADED_MATRIX_HPP
