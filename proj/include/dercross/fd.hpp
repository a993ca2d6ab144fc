#ifndef DERCROSS_FD_HPP
#define DERCROSS_FD_HPP

#include <functional>

#include "dercross/graded_matrix.hpp"

namespace dercross {

struct FdOptions {
  double step = 1e-5;
  bool richardson = false;
  /// Nested (second-order) differences use step * nested_factor; the wider
  /// step keeps the subtractive roundoff of difference-of-differences below
  /// the truncation error.
  double nested_factor = 10.0;
};

using MatrixFn = std::function<RealMatrix(const RealMatrix&)>;

/// Central difference of a matrix-valued curve at t = 0.
template <class F>
RealMatrix fd_curve(F&& f, const FdOptions& opts = {}) {
  const double h = opts.step;
  RealMatrix d = (f(h) - f(-h)) / (2.0 * h);
  if (opts.richardson) {
    RealMatrix d2 = (f(h / 2.0) - f(-h / 2.0)) / h;
    d = (4.0 * d2 - d) / 3.0;
  }
  return d;
}

/// Directional derivative of an algebra-valued map along t -> base mexp(t X).
template <class F>
RealMatrix fd_differential(F&& f, const RealMatrix& base, const RealMatrix& dir,
                           const FdOptions& opts = {}) {
  return fd_curve([&](double t) { return f(base * mexp(RealMatrix(t * dir))); }, opts);
}

/// Same for a group-valued map; returns (d/dt f) f(base)^{-1}, the curve
/// convention every differentiated structure map in this library follows.
template <class F>
RealMatrix fd_differential_group(F&& f, const RealMatrix& base, const RealMatrix& dir,
                                 const FdOptions& opts = {}) {
  RealMatrix at = f(base);
  return fd_differential(std::forward<F>(f), base, dir, opts) * at.inverse();
}

}  // namespace dercross

#endif  // DERCROSS_FD_HPP
