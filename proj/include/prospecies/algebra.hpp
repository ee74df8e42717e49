#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prospecies/matrix.hpp"
#include "prospecies/quiver.hpp"

namespace prospecies {

// Sparse coefficient vector: (basis index, coefficient) pairs, index-sorted.
using SparseVec = std::vector<std::pair<int, Scalar>>;

// A linear combination of parallel paths, used as a relation.
struct Relation {
  std::vector<std::pair<Scalar, Path>> terms;
};

struct BoundQuiverPresentation {
  Quiver quiver;
  std::vector<Relation> relations;
  int nilpotency_bound = 30;
};

// Finite-dimensional associative unital algebra with exact structure
// constants.  Every instance carries a distinguished system of orthogonal
// idempotents summing to 1 (the block decomposition callers care about) and
// a primitive system refining it (used for projective covers).
class Algebra : public std::enable_shared_from_this<Algebra> {
public:
  // Path basis computed by degreewise linear reduction: in the span of
  // paths of length <= nilpotency_bound, the two-sided ideal generated by
  // the relations is spanned by truncated products l*r*m; surviving
  // (non-pivot) paths form the basis.  Pivot preference is shorter paths
  // first, then lexicographically smaller, so longer paths survive ties.
  static std::shared_ptr<const Algebra> bound_quiver(
      FieldSpec field, const BoundQuiverPresentation& p);

  static std::shared_ptr<const Algebra> from_structure(
      FieldSpec field, std::vector<std::string> labels,
      std::vector<std::vector<SparseVec>> mult, Vec unit,
      std::vector<Vec> idempotents, std::vector<Vec> primitive_idempotents,
      std::vector<Vec> generators);

  // Block-diagonal product; basis blocks follow factor order.
  static std::shared_ptr<const Algebra> product(
      const std::vector<std::shared_ptr<const Algebra>>& factors);

  // L (x) R^op; basis (i, j) -> i * dim(R) + j, so (a(x)b)(c(x)d) = ac(x)db.
  static std::shared_ptr<const Algebra> enveloping(
      std::shared_ptr<const Algebra> left,
      std::shared_ptr<const Algebra> right);

  const FieldSpec& field() const { return field_; }
  int dim() const { return dim_; }
  const std::string& basis_label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  const SparseVec& mul_basis(int i, int j) const { return mult_[i][j]; }
  Vec mul_vec(const Vec& a, const Vec& b) const;
  const Vec& unit() const { return unit_; }
  const std::vector<Vec>& idempotents() const { return idempotents_; }
  const std::vector<Vec>& primitive_idempotents() const {
    return primitive_idempotents_;
  }
  // Together with the idempotents these generate the algebra.
  const std::vector<Vec>& generators() const { return generators_; }

  Matrix left_mult_matrix(const Vec& a) const;   // x -> a*x
  Matrix right_mult_matrix(const Vec& a) const;  // x -> x*a

  // Columns span the Jacobson radical, computed as the kernel of the trace
  // form of the left regular representation.  Requires characteristic 0 or
  // p > dim (CharTooSmall otherwise).
  Matrix radical_basis() const;

  std::shared_ptr<const Algebra> opposite() const;

  // Exact associativity, unitality, and idempotent-system checks over all
  // basis tuples; throws on violation.
  void verify() const;

  bool has_quiver() const { return quiver_.has_value(); }
  const Quiver& quiver() const;
  const std::vector<Path>& basis_paths() const;
  // Image of a path of the presenting quiver, as a coefficient vector
  // (product of the arrow basis elements).
  Vec reduce_path(const Path& p) const;

private:
  Algebra() = default;

  FieldSpec field_;
  int dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::vector<SparseVec>> mult_;  // mult_[i][j] = b_i * b_j
  Vec unit_;
  std::vector<Vec> idempotents_;
  std::vector<Vec> primitive_idempotents_;
  std::vector<Vec> generators_;

  // bound-quiver provenance, when constructed from one
  std::optional<Quiver> quiver_;
  std::vector<Path> basis_paths_;

  // keeps opposite-of-opposite pointer-identical while both are alive
  mutable std::weak_ptr<const Algebra> opposite_cache_;
};

SparseVec to_sparse(const Vec& v);
Vec to_dense(FieldSpec f, int n, const SparseVec& s);

// Minimal polynomial of an algebra element (monic, constant term first).
struct Poly;
Poly min_poly_element(const Algebra& a, const Vec& b);

}  // namespace prospecies
