#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "prospecies/module.hpp"

namespace prospecies {

class ProSpecies;
using ProSpeciesPtr = std::shared_ptr<const ProSpecies>;

// A quiver decorated with a finite-dimensional algebra at every vertex and,
// on every arrow a: i -> j, a bimodule that is a left module over the target
// algebra and a right module over the source algebra.  Construction verifies
// that each arrow bimodule is finitely generated projective on both sides by
// solving for dual bases, which are kept as certificates.
class ProSpecies : public std::enable_shared_from_this<ProSpecies> {
public:
  struct ArrowData {
    BimodulePtr bim;
    HomBimodule right_hom;  // maps into the source algebra
    HomBimodule left_hom;   // maps into the target algebra
    DualBasis right_dual;   // x = sum x_k . f_k(x)
    DualBasis left_dual;    // x = sum f_k(x) . x_k
  };

  static ProSpeciesPtr build(
      Quiver quiver,
      std::vector<std::shared_ptr<const Algebra>> vertex_algebras,
      std::vector<BimodulePtr> arrow_bimodules);

  const Quiver& quiver() const { return quiver_; }
  const FieldSpec& field() const { return field_; }
  const std::shared_ptr<const Algebra>& vertex_algebra(int v) const {
    return algebras_[v];
  }
  const BimodulePtr& arrow_bimodule(int a) const { return arrows_[a].bim; }
  const ArrowData& arrow_data(int a) const { return arrows_[a]; }

private:
  ProSpecies() = default;
  Quiver quiver_;
  FieldSpec field_;
  std::vector<std::shared_ptr<const Algebra>> algebras_;
  std::vector<ArrowData> arrows_;
};

// Dimension data: c_i = dim of the vertex algebra, and per arrow the ranks
// of the arrow bimodule as a free right (source) and left (target) module.
// NotLocallyFree when some arrow bimodule is not free on some side.
struct Valuation {
  std::vector<int> vertex_dims;
  std::vector<std::pair<int, int>> arrow_ranks;  // (right rank, left rank)
};
Valuation valuation(const ProSpecies& s);

// One basis block of the tensor algebra: the iterated tensor product along
// a path, realised for paths of length >= 2 as
//   (last arrow's bimodule) (x) (prefix block)
// with the balanced-tensor projection/section cached.  Trivial paths carry
// the vertex algebra as a bimodule over itself; single arrows carry the
// arrow bimodule in its native coordinates.
struct PathBlock {
  Path path;
  int offset = 0;  // first basis index inside the assembled algebra
  int dim = 0;
  BimodulePtr bim;  // block as target-source bimodule
  int prefix = -1;  // block index of path minus its last arrow (length >= 2)
  std::optional<TensorSpace> space;  // peel decomposition (length >= 2)
};

// Path-indexed blocks of iterated tensor products, with every pairwise
// concatenation map computed on demand and cached.  Paths are appended
// explicitly, so the table also works degree by degree over quivers with
// oriented cycles; a path of length >= 2 requires the block of its prefix
// (the path minus its last arrow) to be present already.
class BlockTable {
public:
  explicit BlockTable(ProSpeciesPtr s);

  const ProSpeciesPtr& species() const { return species_; }
  const std::vector<PathBlock>& blocks() const { return blocks_; }
  const PathBlock& block(int i) const { return blocks_[i]; }
  int size() const { return static_cast<int>(blocks_.size()); }
  int total() const { return total_; }
  const std::vector<int>& vertex_blocks() const { return vertex_block_; }

  int find(const Path& p) const;      // -1 when absent
  int index_of(const Path& p) const;  // BadArgument when absent
  // Appends the block of p and returns its index.  TooLarge when the
  // running total would exceed the cap.
  int add_path(const Path& p, int dim_cap);

  // Index of the block receiving products of the two blocks, with the first
  // argument the later factor, or -1 when the paths do not compose or the
  // composite has no block (which over a truncated table means the product
  // is zero).
  int target_of(int qi, int pi) const;
  // dim(target) x (dim(q) * dim(p)) with column (i, j) -> i * dim(p) + j.
  const Matrix& product(int qi, int pi);

private:
  static std::pair<int, std::vector<int>> key_of(const Path& p) {
    return {p.trivial() ? p.vertex : -1, p.arrows};
  }
  ProSpeciesPtr species_;
  std::vector<PathBlock> blocks_;
  std::vector<int> vertex_block_;
  int total_ = 0;
  std::map<std::pair<int, std::vector<int>>, int> index_;
  std::map<std::pair<int, int>, Matrix> cache_;
};

// The path-graded algebra assembled from a pro-species: degree-0 part the
// product of the vertex algebras, one block per nontrivial path, and
// multiplication by tensor concatenation.  Finite dimensional exactly when
// the quiver is acyclic; CyclicQuiver otherwise, TooLarge above the size
// guard.
struct TensorAlgebra {
  ProSpeciesPtr species;
  std::shared_ptr<const Algebra> algebra;
  std::vector<int> degree;  // path length per basis element
  std::vector<PathBlock> blocks;
  std::vector<int> vertex_block;  // trivial block index per vertex

  int dim() const {
    return blocks.empty() ? 0 : blocks.back().offset + blocks.back().dim;
  }
  int block_index(const Path& p) const;  // BadArgument on miss
  Vec embed(int block, const Vec& local) const;
  Vec component(int block, const Vec& global) const;
  Vec idempotent(int v) const;
};

TensorAlgebra tensor_algebra(const ProSpeciesPtr& s, int dim_cap = 20000);

// Total dimension over all paths, computed from fresh per-path tensor
// chains without touching the multiplication table above.
int tensor_dim_oracle(const ProSpecies& s);

// A module over every vertex algebra plus, for every arrow, a map from the
// arrow tensor (arrow bimodule (x) source module, a module over the target
// algebra) into the target module.
class Representation {
public:
  // arrow_maps[a] is dim(M_t) x dim(arrow tensor); linearity over the
  // target algebra is verified exactly.
  static Representation build(ProSpeciesPtr s,
                              std::vector<ModulePtr> vertex_modules,
                              std::vector<Matrix> arrow_maps);
  static Representation zero(ProSpeciesPtr s);

  ProSpeciesPtr species;
  std::vector<ModulePtr> vertex;
  std::vector<TensorSpace> arrow_space;  // arrow bimodule (x) source module
  std::vector<ModulePtr> arrow_domain;   // the same as a target-algebra module
  std::vector<Matrix> arrow_map;

  int total_dim() const;
  int vertex_offset(int v) const;  // block start inside the assembled module
  void verify() const;

private:
  Representation() = default;
};

// Mutually inverse up to the stored basis identification: the assembled
// module lives on the direct sum of the vertex modules in vertex order.
ModulePtr rep_to_module(const TensorAlgebra& T, const Representation& M);

struct RepOfModule {
  Representation rep;
  // columns: the basis of the v-th idempotent component inside the module
  std::vector<Matrix> vertex_inclusion;
};
RepOfModule module_to_rep(const TensorAlgebra& T, const ModulePtr& V);

// Shared core of module_to_rep: reads the representation off any algebra
// that contains the vertex algebras and the arrow bimodules as coordinate
// blocks at the given offsets.  Vertex modules are cut out by the embedded
// idempotents; arrow maps descend from the embedded arrow actions.
RepOfModule restrict_to_rep(const std::shared_ptr<const Algebra>& algebra,
                            const ProSpeciesPtr& species,
                            const std::vector<int>& vertex_offset,
                            const std::vector<int>& arrow_offset,
                            const ModulePtr& V);

// True iff every vertex module is projective over its vertex algebra.
bool is_locally_projective(const Representation& M);

// The two-term projective resolution of a locally projective representation:
//   0 -> p1 --d--> p0 --aug--> module -> 0
// p0 sums (T e_i) (x) M_i over vertices, p1 sums
// (T e_t) (x) (arrow tensor) over arrows, d(p (x) h (x) m) =
// ph (x) m - p (x) M_a(h (x) m).  Exactness is verified by rank and the
// offsets delimit the summands.
struct StandardResolution {
  ModulePtr module;
  ModulePtr p1, p0;
  Matrix d;    // dim(p0) x dim(p1)
  Matrix aug;  // dim(module) x dim(p0)
  std::vector<int> p0_offsets;  // per vertex, plus total
  std::vector<int> p1_offsets;  // per arrow, plus total
};
StandardResolution standard_resolution(const TensorAlgebra& T,
                                       const Representation& M);

// injdim of the regular module and projdim of the dual of the right regular
// module both within n.
bool is_n_gorenstein(const std::shared_ptr<const Algebra>& a, int n);

// The six equivalent finiteness conditions for a module over the tensor
// algebra of a locally n-Gorenstein pro-species (NotLocallyGorenstein when
// the local hypothesis fails).  The unbounded statements (2) and (4) are
// tested up to finite_bound, which is recorded.
struct GorensteinReport {
  int n = 0;
  int finite_bound = 8;
  bool pd_le_succ = false;   // (1) projective dimension <= n+1
  bool pd_finite = false;    // (2) within finite_bound
  bool id_le_succ = false;   // (3) injective dimension <= n+1
  bool id_finite = false;    // (4) within finite_bound
  bool local_pd = false;     // (5) vertexwise projective dimension <= n
  bool local_id = false;     // (6) vertexwise injective dimension <= n
  bool all_agree() const;
};
GorensteinReport gorenstein_conditions(const TensorAlgebra& T, int n,
                                       const ModulePtr& U,
                                       int finite_bound = 8);

enum class Ternary { True, False, Unknown };

// Verdict on a vertex-algebra module; used for the local residue of the
// Gorenstein-projective test.
using LocalGpOracle = std::function<Ternary(
    const std::shared_ptr<const Algebra>&, const ModulePtr&)>;

// Bounded local test: projective modules pass, a nonzero Ext^k against the
// regular module (k = 1..ext_bound) refutes, a revisited syzygy class with
// a clean Ext window passes, anything else is Unknown.
Ternary local_gp_bounded(const std::shared_ptr<const Algebra>& a,
                         const ModulePtr& m, int ext_bound);

// Vertexwise test for a module over the tensor algebra: every assembled
// in-map must be injective (certified False otherwise) and every cokernel
// must pass the local oracle.  The default oracle accepts everything over a
// selfinjective vertex algebra and falls back to the bounded test.
Ternary is_gorenstein_projective(const TensorAlgebra& T, const ModulePtr& X,
                                 const LocalGpOracle& oracle);
Ternary is_gorenstein_projective(const TensorAlgebra& T, const ModulePtr& X,
                                 int ext_bound = 8);

}  // namespace prospecies
