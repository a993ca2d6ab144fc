#ifndef DERCROSS_DERIVED_HPP
#define DERCROSS_DERIVED_HPP

#include "dercross/crossed_module.hpp"

namespace dercross {

/// Which bookkeeping variable the e-component pairs with. AlphaBar is the
/// native derived-group convention; Alpha is its cross modality. Products,
/// inverses and brackets use the same component formulas on both sides.
enum class Modality { AlphaBar, Alpha };

/// Element e^{abar L} a of the derived group: a pair (a in G, L in e) with the
/// e[1] shift carried as a tag. Components are plain real matrices; explicit
/// Grassmann generators appear only in oracles and in graded elements.
struct DerivedGroupElement {
  RealMatrix a;
  RealMatrix L;
  std::string module;
  Modality modality = Modality::AlphaBar;
};

/// Element u + abar U of the derived algebra.
struct DerivedAlgebraElement {
  RealMatrix u;
  RealMatrix U;
  std::string module;
  Modality modality = Modality::AlphaBar;
};

/// Degree-p element of the full degree extension: j is g-valued homogeneous of
/// degree p, J is e-valued homogeneous of degree p+1; odd degrees carry
/// explicit auxiliary generators in the entries.
struct GradedDerivedElement {
  int degree = 0;
  GradedMatrix j;
  GradedMatrix J;
  std::string module;
};

struct DerivedCurve {
  std::vector<double> sample_times;
  std::function<DerivedGroupElement(double)> values;
};

enum class Side { Left, Right };

DerivedGroupElement derived_identity(const GroupCrossedModule& m);
DerivedGroupElement make_derived(const GroupCrossedModule& m, RealMatrix a, RealMatrix L,
                                 Modality modality = Modality::AlphaBar);
DerivedAlgebraElement make_derived_algebra(const GroupCrossedModule& m, RealMatrix u,
                                           RealMatrix U,
                                           Modality modality = Modality::AlphaBar);

/// (a, L)(b, N) = (ab, L + mu-dot(a, N)).
DerivedGroupElement dmul(const GroupCrossedModule& m, const DerivedGroupElement& p,
                         const DerivedGroupElement& q);

/// (a, L)^-1 = (a^-1, -mu-dot(a^-1, L)).
DerivedGroupElement dinv(const GroupCrossedModule& m, const DerivedGroupElement& p);

/// [(u, U), (v, V)] = ([u, v], m(u, V) - m(v, U)).
DerivedAlgebraElement dbracket(const GroupCrossedModule& m, const DerivedAlgebraElement& y,
                               const DerivedAlgebraElement& w);

/// Adjoint action of the derived group on the derived algebra; `inverse`
/// selects Ad P^{-1}.
DerivedAlgebraElement d_adjoint(const GroupCrossedModule& m, const DerivedGroupElement& p,
                                const DerivedAlgebraElement& y, bool inverse = false);

/// Maurer-Cartan form of a derived-group curve at t0. Components follow the
/// closed-form expansion of the left/right logarithmic derivatives, with the
/// differential treated as odd; see the oracle in embedding.hpp for the sign
/// convention this pins down.
DerivedAlgebraElement mc_form(const GroupCrossedModule& m, const DerivedCurve& curve,
                              double t0, Side side, const FdOptions& opts = {});

/// Per-monomial linear and bilinear extension of real maps to matrices with
/// Grassmann entries; coefficient scalars multiply in argument order.
GradedMatrix lift_linear(const Map1& f, const GradedMatrix& x);
GradedMatrix lift_bilinear(const Map2& f, const GradedMatrix& a, const GradedMatrix& b);

GradedDerivedElement make_graded_derived(const GroupCrossedModule& m, int degree,
                                         GradedMatrix j, GradedMatrix J);

/// [S, T] = ([j, k], m(j, K) - (-1)^{pq} m(k, J)) in degree p + q.
GradedDerivedElement graded_bracket(const GroupCrossedModule& m,
                                    const GradedDerivedElement& s,
                                    const GradedDerivedElement& t);

/// d_t S = ((-1)^p t(J), 0) in degree p + 1; squares to zero on the nose.
GradedDerivedElement coboundary_dt(const GroupCrossedModule& m,
                                   const GradedDerivedElement& s);

/// Suspension retag between the abar- and alpha-conventions; a Lie group
/// (resp. algebra) isomorphism with identical component data.
DerivedGroupElement cross_mode(const DerivedGroupElement& p);
DerivedAlgebraElement cross_mode(const DerivedAlgebraElement& y);

/// Componentwise application of a crossed-module morphism, (Phi-dot, phi) on
/// the group side and (Phi-dot, phi-dot) on the algebra side. Falls back to
/// finite differences when the morphism carries no exact differentials.
DerivedGroupElement derived_morphism(const CrossedModuleMorphism& beta,
                                     const DerivedGroupElement& p,
                                     const FdOptions& opts = {});
DerivedAlgebraElement derived_morphism(const CrossedModuleMorphism& beta,
                                       const DerivedAlgebraElement& y,
                                       const FdOptions& opts = {});

// ---------------------------------------------------------------------------
// Derived-group-valued fields over the model manifold N = R^m x R[1]^k and
// their derivation transports.

/// C = e^{alpha O} r with r: R^m -> G even and O = sum_j y_j O_j(x) carrying
/// one e-valued coefficient per odd coordinate of N.
struct DerivedField {
  std::function<RealMatrix(const RealVector&)> r;
  std::vector<std::function<RealMatrix(const RealVector&)>> O;
};

/// Supported derivations of N: d/dy_j (degree -1) and y_j d/dx_i (degree +1).
struct FieldDerivation {
  enum class Kind { OddPartial, OddEvenPartial };
  Kind kind = Kind::OddPartial;
  int odd_index = 0;
  int even_index = 0;
  int degree() const { return kind == Kind::OddPartial ? -1 : 1; }
};

/// Layout of the odd coordinates of N inside a shared generator table.
struct FieldGenerators {
  AlgebraPtr alg;
  std::vector<int> y;  // ids of the odd coordinate generators
};

/// The pair (D r r^-1, (-1)^p (D O - dot-mu-dot(D r r^-1, O))) for the left
/// transport at the point x (right: (r^-1 D r, (-1)^p mu-dot(r^-1, D O))),
/// components read off the alpha-expansion as raw coefficients.
GradedDerivedElement derivation_transport(const GroupCrossedModule& m,
                                          const DerivedField& c, const FieldDerivation& d,
                                          Side side, const RealVector& x,
                                          const FieldGenerators& gens,
                                          const FdOptions& opts = {});

/// d-tau-dot transport: left (tau-dot(O), [O,O]/2), right
/// (Ad r^-1(tau-dot(O)), -mu-dot(r^-1, [O,O])/2).
GradedDerivedElement dtau_transport(const GroupCrossedModule& m, const DerivedField& c,
                                    Side side, const RealVector& x,
                                    const FieldGenerators& gens);

}  // namespace dercross

#endif  // DERCROSS_DERIVED_HPP
