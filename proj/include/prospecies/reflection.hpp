#pragma once

#include <string>
#include <vector>

#include "prospecies/preprojective.hpp"

namespace prospecies {

// Dual pairs for one arrow together with its reversal, plus the evaluation
// turning partner elements into left-linear maps from the arrow bimodule to
// the target vertex algebra: L(f, x) = sum_k f[k] (lev[k] x).  Construction
// certifies the two exchange identities
//   x = sum_j L(f_j, x) . x_j   on the arrow bimodule,
//   f = sum_j f_j . L(f, x_j)   on the partner,
// along with compatibility of L with all four algebra actions and centrality
// of the pair tensor; together these make vee and wedge mutually inverse on
// homomorphisms and keep their outputs linear over the vertex algebras.
struct ArrowPairing {
  std::vector<Vec> x;       // in the arrow bimodule
  std::vector<Vec> f;       // in the partner bimodule
  std::vector<Matrix> lev;  // per partner basis element: bimodule -> target
};

// starred = false pairs the arrow bimodule against its right dual, with the
// evaluation solved so that the stored dual pairs satisfy both identities;
// NotDualisable when no such evaluation exists.  starred = true pairs the
// reversed arrow, which carries the right dual, against the original
// bimodule; there the evaluation is the tautological one.
ArrowPairing arrow_pairing(const ProSpecies::ArrowData& ad, bool starred);

// Pairing for an arrow of the doubled species, original or star index.
ArrowPairing doubled_pairing(const DoubledSpecies& d, int arrow);

// For f: dom -> N with dom the arrow tensor over M, the transposed map
// vee(f): M -> codom with codom the partner tensor over N, column by column
// via vee(f)(m) = sum_j f_j (x) f(x_j (x) m).
Matrix vee(const ArrowPairing& pr, const TensorSpace& dom,
           const TensorSpace& codom, const Matrix& f);

// Inverse direction; needs the module structure on N to evaluate the partner
// legs: wedge(g)(x (x) m) = sum L(f-leg, x) . (N-leg).
Matrix wedge(const ArrowPairing& pr, const TensorSpace& dom,
             const TensorSpace& codom, const ModulePtr& N, const Matrix& g);

// The signed sum of the arrow maps into a vertex and the stacked vee of the
// maps leaving it.  Both are indexed by the doubled arrows with the given
// target (the star of each such arrow leaves the vertex, so the blocks of
// out land in the same stacked space): in has the block sign(b) . M_b and
// out the block vee(M_star(b)) at each member arrow b.
struct InOutMaps {
  int vertex = -1;
  std::vector<int> arrows;  // doubled arrows with target == vertex
  std::vector<int> offset;  // block offsets inside the stacked space
  int total = 0;
  Matrix in;   // dim M_vertex x total
  Matrix out;  // total x dim M_vertex
};
InOutMaps in_out(const DoubledSpecies& d, const Representation& M, int vertex);

// One reflection step in linear-algebra form.  vertex_map is the defining
// kernel inclusion into the stacked in-domain (plus) or the cokernel
// projection out of it (minus); io holds the maps of the input the step was
// built from.  Input and output both satisfy the relation test.
struct SigmaResult {
  Representation rep;
  Matrix vertex_map;
  InOutMaps io;
};
SigmaResult sigma_plus(const DoubledSpecies& d, const Representation& M,
                       int vertex);
SigmaResult sigma_minus(const DoubledSpecies& d, const Representation& M,
                        int vertex);

// Largest subrepresentation supported at the vertex (kernel of the out-map)
// and largest quotient supported there (cokernel of the in-map), both placed
// at the vertex with zeros elsewhere.
struct SubFac {
  Representation sub, fac;
  Matrix sub_inclusion;   // dim M_vertex x dim(sub at vertex)
  Matrix fac_projection;  // dim(fac at vertex) x dim M_vertex
};
SubFac sub_fac(const DoubledSpecies& d, const Representation& M, int vertex);

// Exact check that the per-vertex matrices intertwine every arrow map.
bool is_rep_hom(const Representation& A, const Representation& B,
                const std::vector<Matrix>& at);

// Builds the two canonical sequences through the reflected modules,
//   0 -> sub(M) -> M -> sigma_plus(sigma_minus(M)) -> 0,
//   0 -> sigma_minus(sigma_plus(M)) -> M -> fac(M) -> 0,
// certifies that the connecting maps are homomorphisms of representations,
// and verifies exactness by ranks.  unit_iso and counit_iso record whether
// the connecting map at the vertex is invertible; exactness makes that
// automatic exactly when sub(M), respectively fac(M), vanishes.
struct ReflectionSequences {
  SubFac ends;
  Representation plus_minus;   // sigma_plus(sigma_minus(M))
  Representation minus_plus;   // sigma_minus(sigma_plus(M))
  Matrix unit;                 // M_vertex -> (plus_minus)_vertex
  Matrix counit;               // (minus_plus)_vertex -> M_vertex
  bool first_exact = false;
  bool second_exact = false;
  bool unit_iso = false;
  bool counit_iso = false;
};
ReflectionSequences verify_reflection_sequences(const DoubledSpecies& d,
                                                const Representation& M,
                                                int vertex);

// The ideal-theoretic form of a reflection over the assembled graded
// algebra: Hom(I, M) for direction +1, with a acting by phi -> phi(. a), or
// the balanced tensor I (x) M for direction -1.  Needs the finiteness
// certificate.
ModulePtr sigma_via_ideal(const TruncatedGradedAlgebra& g, const ModulePtr& M,
                          int vertex, int direction);

// Reassembles a module over the assembled graded algebra from a
// representation of its species; inverse to graded_module_rep up to the
// stored basis identification.  The exact structure check rejects
// representations that violate the algebra's relations.
ModulePtr module_of_rep(const TruncatedGradedAlgebra& g,
                        const Representation& M);

// The reflected pro-species: every arrow incident to the vertex is reversed
// in place and carries the dual bimodule; everything else is untouched.
// NotSinkOrSource unless all incident arrows point the same way.
ProSpeciesPtr reflect_species(const ProSpeciesPtr& s, int vertex);

// Reflection of a plain representation at a sink (plus) or source (minus):
// the vertex module is replaced by the kernel of the stacked incoming maps,
// respectively the cokernel of the stacked transposed outgoing maps, and the
// incident arrow maps are rebuilt over the reflected species.
struct BgpResult {
  ProSpeciesPtr reflected;
  Representation rep;
  Matrix vertex_map;  // kernel inclusion (plus) / cokernel projection (minus)
};
BgpResult bgp_plus(const ProSpeciesPtr& s, const Representation& M,
                   int vertex);
BgpResult bgp_minus(const ProSpeciesPtr& s, const Representation& M,
                    int vertex);

// One line recording the sign and pairing conventions the reflection
// machinery uses, for report output.
std::string reflection_convention();

}  // namespace prospecies
