#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "prospecies/algebra.hpp"

namespace prospecies {

class Module;
using ModulePtr = std::shared_ptr<const Module>;

// Finite-dimensional left module given by one action matrix per algebra
// basis element.
class Module : public std::enable_shared_from_this<Module> {
public:
  static ModulePtr from_action(std::shared_ptr<const Algebra> a,
                               std::vector<Matrix> action, bool check = true);
  static ModulePtr zero(std::shared_ptr<const Algebra> a);
  static ModulePtr regular(std::shared_ptr<const Algebra> a);
  // A*e for an idempotent e, as a submodule of the regular module.
  static ModulePtr projective(std::shared_ptr<const Algebra> a, const Vec& e);
  // top of the k-th projective (primitive idempotent index).
  static ModulePtr simple(std::shared_ptr<const Algebra> a, int k);

  const std::shared_ptr<const Algebra>& algebra() const { return alg_; }
  const FieldSpec& field() const { return alg_->field(); }
  int dim() const { return dim_; }
  const Matrix& action(int basis_index) const { return action_[basis_index]; }
  Matrix action_of(const Vec& a) const;
  Vec act(const Vec& a, const Vec& m) const;

  // Exact check that the action respects structure constants and unit.
  void verify() const;

  ModulePtr direct_sum(const Module& o) const;

  // Smallest action-invariant subspace containing the generators; columns.
  Matrix invariant_closure(const std::vector<Vec>& gens) const;

  struct SubQuot {
    ModulePtr mod;
    Matrix map;  // inclusion (ambient x d) for sub, projection (d x ambient) for quotient
  };
  SubQuot submodule(const std::vector<Vec>& gens) const;
  // basis columns must already span an invariant subspace
  SubQuot submodule_from_basis(const Matrix& cols) const;
  SubQuot quotient(const std::vector<Vec>& subspace_gens) const;

  Matrix radical_subspace() const;  // columns spanning rad(A)*M
  SubQuot top() const;

private:
  Module() = default;
  std::shared_ptr<const Algebra> alg_;
  int dim_ = 0;
  std::vector<Matrix> action_;
};

struct ModuleHom {
  ModulePtr source, target;
  Matrix m;  // dim(target) x dim(source)
  void verify() const;  // exact intertwining check
};

// Basis of Hom_A(M, N) as matrices, computed blockwise over the
// distinguished idempotents and then cut down by the generator constraints.
std::vector<Matrix> hom_space(const Module& M, const Module& N);

// End_A(M) as an algebra in a chosen Hom basis; returns the basis alongside.
std::pair<std::shared_ptr<const Algebra>, std::vector<Matrix>> end_algebra(
    const Module& M);

struct Cover {
  ModulePtr proj;
  Matrix map;  // dim(M) x dim(proj), surjective
  std::vector<int> multiplicities;  // per primitive idempotent
};
Cover projective_cover(const Module& M);

struct ResolutionStep {
  std::vector<int> multiplicities;
  ModulePtr proj;
  // differential into the previous projective (or into M for step 0),
  // written in the ambient coordinates of that target
  Matrix differential;
};
struct Resolution {
  std::vector<ResolutionStep> steps;
  ModulePtr syzygy;   // kernel after the last computed step
  bool finished = false;  // syzygy reached zero
};
Resolution minimal_projective_resolution(const Module& M, int length);

// Exact projective dimension when <= bound, nullopt for AtLeast(bound+1).
std::optional<int> proj_dim(const Module& M, int bound);
ModulePtr dual_module(const Module& M);  // over the opposite algebra
std::optional<int> inj_dim(const Module& M, int bound);
bool is_selfinjective(const std::shared_ptr<const Algebra>& a);

enum class Certainty { Yes, No, ProbablyNot };
struct IsoResult {
  Certainty verdict = Certainty::ProbablyNot;
  std::optional<Matrix> certificate;
};
// Certified Yes carries an invertible intertwiner.  Certified No comes from
// dimension or Hom-space obstructions, or from an exhaustive determinant
// interpolation when the Hom space is small enough to scan.  ProbablyNot is
// the uncertified outcome of the randomized fallback.
IsoResult is_isomorphic(const Module& M, const Module& N, uint64_t seed);

// True iff End(M) is local, tested through its semisimple quotient:
// dimension one, or no split minimal polynomial / nilpotent witness found by
// the deterministic-and-seeded element scan.
bool is_indecomposable(const Module& M, uint64_t seed);

bool factors_through_projective(const ModuleHom& f);
// dim Hom(M,N) minus the dimension of the maps factoring through a
// projective.
int stable_hom_dim(const Module& M, const Module& N);

class Bimodule;
using BimodulePtr = std::shared_ptr<const Bimodule>;

// Left-and-right module with exactly commuting outer actions.
class Bimodule : public std::enable_shared_from_this<Bimodule> {
public:
  static BimodulePtr from_actions(std::shared_ptr<const Algebra> left,
                                  std::shared_ptr<const Algebra> right,
                                  std::vector<Matrix> left_action,
                                  std::vector<Matrix> right_action,
                                  bool check = true);
  static BimodulePtr regular(std::shared_ptr<const Algebra> a);

  const std::shared_ptr<const Algebra>& left_algebra() const { return left_; }
  const std::shared_ptr<const Algebra>& right_algebra() const {
    return right_;
  }
  const FieldSpec& field() const { return left_->field(); }
  int dim() const { return dim_; }
  const Matrix& left_action(int i) const { return left_action_[i]; }
  const Matrix& right_action(int i) const { return right_action_[i]; }
  Matrix left_action_of(const Vec& a) const;
  Matrix right_action_of(const Vec& a) const;
  void verify() const;

  ModulePtr as_left_module() const;   // forgets the right action
  ModulePtr as_right_module() const;  // left module over right_->opposite()
  // left module over Algebra::enveloping(left_, right_)
  ModulePtr as_env_module(const std::shared_ptr<const Algebra>& env) const;

private:
  Bimodule() = default;
  std::shared_ptr<const Algebra> left_, right_;
  int dim_ = 0;
  std::vector<Matrix> left_action_, right_action_;
};

// M (x)_R N as a quotient of the plain tensor product, with the kron
// index convention (i, j) -> i * dim(N) + j.
class TensorSpace {
public:
  TensorSpace(FieldSpec f, int dim_left, int dim_right,
              const Echelon& balancing);
  int dim() const { return quot_dim_; }
  int left_dim() const { return dim_left_; }
  int right_dim() const { return dim_right_; }
  const Matrix& projection() const { return proj_; }  // dim x (nl*nr)
  const Matrix& section() const { return sect_; }     // (nl*nr) x dim
  Vec pure(const Vec& m, const Vec& n) const;

private:
  FieldSpec f_;
  int dim_left_, dim_right_, quot_dim_;
  Matrix proj_, sect_;
};

// M (x)_R N for a bimodule M (right algebra R) and left module N; the result
// carries the left structure of M.
std::pair<TensorSpace, ModulePtr> tensor_left(const Bimodule& M,
                                              const Module& N);
// Bimodule tensor over M.right == N.left; the result is an
// M.left - N.right bimodule.
std::pair<TensorSpace, BimodulePtr> tensor_bimodule(const Bimodule& M,
                                                    const Bimodule& N);

// Hom over one side of an L-R bimodule P.  Both duals are R-L bimodules:
//   right dual: Hom of right modules into R, (r.f.l)(p) = r f(l p)
//   left dual:  Hom of left modules into L,  (r.f.l)(p) = f(p r) l
struct HomBimodule {
  BimodulePtr bim;
  std::vector<Matrix> basis;  // matrices P -> ring
};
HomBimodule right_hom_bimodule(const Bimodule& P);
HomBimodule left_hom_bimodule(const Bimodule& P);

struct DualBasis {
  std::vector<Vec> x;       // module elements
  std::vector<Matrix> f;    // maps into the ring
  std::vector<Vec> coords;  // f in the coordinates of a Hom basis
};
// Right version solves x = sum x_k . f_k(x); left version
// x = sum f_k(x) . x_k.  nullopt when the identity is unsolvable (module
// not projective over that side).  NotGenerating when the generators fail
// to generate.
std::optional<DualBasis> try_right_dual_basis(const Bimodule& P,
                                              const HomBimodule& hom,
                                              const std::vector<Vec>& gens);
std::optional<DualBasis> try_left_dual_basis(const Bimodule& P,
                                             const HomBimodule& hom,
                                             const std::vector<Vec>& gens);
DualBasis right_dual_basis(const Bimodule& P, const HomBimodule& hom,
                           const std::vector<Vec>& gens);  // NotProjective

struct CasimirResult {
  TensorSpace space;  // P (x)_R right-dual(P)
  Vec element;
  BimodulePtr product;  // the tensor bimodule
};
CasimirResult casimir_right(const Bimodule& P, const HomBimodule& hom,
                            const std::vector<Vec>& gens);
CasimirResult casimir_right(const Bimodule& P);  // full-basis generators

struct HomTensorIso {
  int lhs_dim = 0, rhs_dim = 0;
  Matrix forward;   // Hom_R(M,R) (x)_R N  ->  Hom_R(M,N)
  Matrix inverse;
};
// M a left R-module, projective; N a left R-module.
HomTensorIso hom_tensor_iso(const ModulePtr& M, const ModulePtr& N);

}  // namespace prospecies
