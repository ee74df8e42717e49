#pragma once

#include <string>

#include "prospecies/species.hpp"

namespace prospecies {

// Hom of right modules from the arrow bimodule into the source vertex
// algebra, as a source-target bimodule: the structure a reversed arrow
// carries.  Computed once at species construction; this returns the stored
// copy.
const BimodulePtr& dual_bimodule(const ProSpecies& s, int arrow);

struct ArrowDuals {
  BimodulePtr right_dual;  // Hom of right modules into the source algebra
  BimodulePtr left_dual;   // Hom of left modules into the target algebra
  Matrix iso;              // invertible intertwiner right_dual -> left_dual
};

// Yes exactly when for every arrow the two one-sided duals are isomorphic
// as bimodules, certified by an invertible map of modules over the
// enveloping algebra of the two vertex algebras.  No carries a concrete
// obstruction on some arrow; ProbablyNot is the uncertified outcome of the
// randomized fallback.
struct DualisableResult {
  Certainty verdict = Certainty::ProbablyNot;
  std::vector<ArrowDuals> arrows;  // complete exactly when verdict == Yes
  std::string detail;              // obstruction description otherwise
};
DualisableResult is_dualisable(const ProSpecies& s);

// The doubled pro-species: every arrow a: i -> j gains a reversed partner
// a_star: j -> i carrying the right dual of its bimodule.  Original arrows
// keep their indices; the star of arrow a is arrow (original_arrows + a).
// NotDualisable when some arrow has no certified dual pair.
struct DoubledSpecies {
  ProSpeciesPtr species;
  int original_arrows = 0;
  std::vector<ArrowDuals> duals;  // per original arrow
};
DoubledSpecies double_prospecies(const ProSpeciesPtr& s);

// The defining relation of the preprojective quotient, stored blockwise:
// for every original arrow a with dual pairs (x_t, f_t), the loop
// [a_star then a] receives sum x_t (x) f_t with sign +1 and the loop
// [a then a_star] receives sum f_t (x) x_t with sign -1, both in the
// coordinates of the corresponding length-two tensor block.  The element is
// independent of the dual-basis choice.
struct PreprojectiveRelation {
  std::vector<Path> paths;  // length-two loops, two per original arrow
  std::vector<int> offset;  // per-path slice of c
  std::vector<int> dim;     // per-path block dimension
  Vec c;                    // concatenated coordinates, signs baked in
};
PreprojectiveRelation preprojective_relation(const DoubledSpecies& d);

// One line recording the pairing conventions behind the relation, for
// report output.  The sign and pairing choices are conventions, not
// canonical data.
std::string preprojective_convention();

// One homogeneous component of fixed degree, source and target: the direct
// sum of the path blocks with those endpoints, modulo the matching degree
// slice of the relation ideal.
struct GradedPiece {
  int degree = 0;
  int source = -1;
  int target = -1;
  std::vector<Path> paths;       // member path blocks, table order
  std::vector<int> path_offset;  // slice offsets inside the group space
  std::vector<int> path_dim;
  std::optional<QuotientSpace> quo;  // group space -> piece coordinates
  int offset = 0;  // first basis index inside the assembled algebra
  int dim = 0;
};

// A path-length graded algebra truncated above a fixed degree, optionally
// modulo the two-sided ideal of a degree-two relation.  Because the algebra
// is generated in degrees zero and one, a degree with no surviving basis
// certifies that every higher degree vanishes as well; finite_certified
// records that, and then the assembled algebra is the whole thing rather
// than a truncation.
struct TruncatedGradedAlgebra {
  ProSpeciesPtr species;
  std::shared_ptr<const Algebra> algebra;
  int truncation = 0;
  bool finite_certified = false;
  std::vector<GradedPiece> pieces;
  std::vector<int> degree;   // per basis element
  std::vector<int> source;   // per basis element
  std::vector<int> target;   // per basis element
  std::vector<int> degree_dims;  // index 0 .. truncation
  std::vector<int> vertex_offset;  // degree-0 block per vertex
  std::vector<int> arrow_offset;   // degree-1 block per arrow

  int dim() const { return algebra ? algebra->dim() : 0; }
  Vec idempotent(int v) const;
  // The piece with the given key, or nullptr when that component is zero.
  const GradedPiece* piece(int degree, int source, int target) const;
};

// The tensor algebra cut off above the given degree; works over quivers
// with oriented cycles.  Over an acyclic quiver with a large enough bound
// this reproduces tensor_algebra degree for degree.
TruncatedGradedAlgebra truncated_tensor_algebra(const ProSpeciesPtr& s,
                                                int truncation,
                                                int dim_cap = 20000);

// The preprojective construction: double the species, compute the signed
// relation, and quotient the truncated tensor algebra of the double by the
// two-sided ideal it generates.  Requires truncation >= 2.
struct PreprojectiveAlgebra {
  DoubledSpecies doubled;
  PreprojectiveRelation relation;
  TruncatedGradedAlgebra pi;
};
PreprojectiveAlgebra preprojective_algebra(const ProSpeciesPtr& s,
                                           int truncation = 12,
                                           int dim_cap = 20000);

// The two-sided ideal generated by the complement of one vertex idempotent.
// Needs the finiteness certificate; NotFiniteDimensional otherwise.
struct VertexIdeal {
  Matrix basis;     // algebra dim x ideal dim, columns a basis of the ideal
  BimodulePtr bim;  // the ideal as a bimodule over the algebra
};
VertexIdeal vertex_ideal(const TruncatedGradedAlgebra& g, int v);

// Vertex modules and arrow maps of a module over the assembled graded
// algebra, read off through the embedded degree-0 and degree-1 blocks.
RepOfModule graded_module_rep(const TruncatedGradedAlgebra& g,
                              const ModulePtr& V);

// Whether the representation of the doubled species satisfies the
// relation: at every vertex the signed sum, over incident arrow pairs, of
// the composite (reversed map after map) vanishes, outgoing original
// arrows counted with +1 and outgoing stars with -1.
bool is_pi_module(const DoubledSpecies& d, const Representation& M);

}  // namespace prospecies
