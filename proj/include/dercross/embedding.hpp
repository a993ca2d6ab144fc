#ifndef DERCROSS_EMBEDDING_HPP
#define DERCROSS_EMBEDDING_HPP

#include "dercross/derived.hpp"

namespace dercross {

/// Faithful matrix image of E x|_mu G and of its Lie algebra, used by every
/// Grassmann-embedding oracle. Per fixture:
///   CONJ   (A, a) -> diag(A a, a)
///   LIN    (v, a) -> affine [[a, v], [0, 1]], G block-diagonal
///   COVER  (A, R) -> diag(L_A C(R), R) with C the conjugation action of R
///                    on quaternions (independent of the lift choice).
struct SemidirectRep {
  int dim = 0;
  Map1 G_embed, E_embed;  // group elements of the factors
  Map1 g_embed, e_embed;  // algebra elements of the factors
  Map1 G_extract;         // rep group element -> G matrix
  /// Algebra-valued rep matrix -> (g component, e component).
  std::function<std::pair<RealMatrix, RealMatrix>(const RealMatrix&)> alg_extract;
  std::string name;
};

SemidirectRep semidirect_rep(const GroupCrossedModule& m);

/// Reserved oracle generators inside a shared table. Unused slots are fine;
/// building them up front keeps scalars from different steps composable.
struct OracleGenerators {
  AlgebraPtr alg;
  int alphabar = -1;  // degree +1; pairs with the e[1] slot of group elements
  int betabar = -1;   // second odd dressing for two-element brackets
  int theta = -1;     // degree +1; the odd stand-in for the 1-form dt
  int alpha = -1;     // degree -1; the cross-modality expansion variable
};

/// Adds the four oracle generators to a (still mutable) table.
OracleGenerators reserve_oracle_generators(std::shared_ptr<GrassmannAlgebra> alg);

/// Embeds e^{abar L} a as the Grassmann rep matrix (1 + abar e(L)) G(a).
GradedMatrix embed_derived_group(const SemidirectRep& rep, const OracleGenerators& og,
                                 const DerivedGroupElement& p);
/// Recovers the pair (a, L) from an embedded derived group element.
DerivedGroupElement extract_derived_group(const GroupCrossedModule& m,
                                          const SemidirectRep& rep,
                                          const OracleGenerators& og,
                                          const GradedMatrix& g);

// Oracle evaluations of the derived-calculus laws, computed entirely in the
// rep with explicit generators and coefficient extraction. They share nothing
// with the closed-form component implementations they validate except the
// coefficient ring itself.
DerivedGroupElement oracle_dmul(const GroupCrossedModule& m, const DerivedGroupElement& p,
                                const DerivedGroupElement& q);
DerivedGroupElement oracle_dinv(const GroupCrossedModule& m, const DerivedGroupElement& p);
DerivedAlgebraElement oracle_dbracket(const GroupCrossedModule& m,
                                      const DerivedAlgebraElement& y,
                                      const DerivedAlgebraElement& w);
/// Conjugates the embedded D = e^{abar U} e^{t u} by the embedded P and
/// linearizes in t by central differences (the paper's own proof route).
DerivedAlgebraElement oracle_d_adjoint(const GroupCrossedModule& m,
                                       const DerivedGroupElement& p,
                                       const DerivedAlgebraElement& y, bool inverse,
                                       const FdOptions& opts = {});
/// Tangent oracle for the Maurer-Cartan form: dM := theta * (dM/dt) with theta
/// an explicit odd generator, multiplied by the embedded inverse; components
/// are the theta- and (abar theta)-coefficients. Treating the differential as
/// odd is what selects the displayed sign of the closed form.
DerivedAlgebraElement oracle_mc_form(const GroupCrossedModule& m, const DerivedCurve& curve,
                                     double t0, Side side, const FdOptions& opts = {});
GradedDerivedElement oracle_graded_bracket(const GroupCrossedModule& m,
                                           const GradedDerivedElement& s,
                                           const GradedDerivedElement& t);
GradedDerivedElement oracle_derivation_transport(const GroupCrossedModule& m,
                                                 const DerivedField& c,
                                                 const FieldDerivation& d, Side side,
                                                 const RealVector& x,
                                                 const FieldGenerators& gens,
                                                 const FdOptions& opts = {});
/// Independent route for the d-tau-dot transport: the variational identity in
/// the rep, with the bracket term computed by rep matrix commutators instead
/// of the Peiffer closed form.
GradedDerivedElement oracle_dtau_transport(const GroupCrossedModule& m,
                                           const DerivedField& c, Side side,
                                           const RealVector& x,
                                           const FieldGenerators& gens);

double derived_distance(const DerivedGroupElement& a, const DerivedGroupElement& b);
double derived_distance(const DerivedAlgebraElement& a, const DerivedAlgebraElement& b);
double derived_distance(const GradedDerivedElement& a, const GradedDerivedElement& b);

}  // namespace dercross

#endif  // DERCROSS_EMBEDDING_HPP
