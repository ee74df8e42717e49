#pragma once

#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "prospecies/species.hpp"

namespace fx {

using namespace prospecies;

inline std::shared_ptr<const Algebra> point() {
  BoundQuiverPresentation p;
  p.quiver.add_vertex("v");
  return Algebra::bound_quiver(rationals(), p);
}

inline std::shared_ptr<const Algebra> a2() {
  BoundQuiverPresentation p;
  p.quiver.add_vertex("1");
  p.quiver.add_vertex("2");
  p.quiver.add_arrow("a", "1", "2");
  return Algebra::bound_quiver(rationals(), p);
}

inline std::shared_ptr<const Algebra> dualnum() {
  BoundQuiverPresentation p;
  p.quiver.add_vertex("v");
  p.quiver.add_arrow("x", "v", "v");
  Path x2{-1, {0, 0}};
  p.relations.push_back({{{Scalar(1), x2}}});
  p.nilpotency_bound = 5;
  return Algebra::bound_quiver(rationals(), p);
}

// the A2 quiver with one algebra at both vertices and one bimodule
inline ProSpeciesPtr species_a2(const std::shared_ptr<const Algebra>& alg,
                                const BimodulePtr& bim) {
  Quiver q;
  q.add_vertex("1");
  q.add_vertex("2");
  q.add_arrow("alpha", "1", "2");
  return ProSpecies::build(q, {alg, alg}, {bim});
}

inline ProSpeciesPtr fix_a() {
  auto k = point();
  return species_a2(k, Bimodule::regular(k));
}

inline ProSpeciesPtr fix_b() {
  auto a = a2();
  return species_a2(a, Bimodule::regular(a));
}

inline ProSpeciesPtr fix_c() {
  auto d = dualnum();
  return species_a2(d, Bimodule::regular(d));
}

// line quiver 1 -> 2 -> ... -> n with one algebra everywhere
inline ProSpeciesPtr line_species(int n,
                                  const std::shared_ptr<const Algebra>& alg) {
  Quiver q;
  for (int v = 1; v <= n; ++v) q.add_vertex(std::to_string(v));
  std::vector<BimodulePtr> bims;
  for (int v = 1; v < n; ++v) {
    q.add_arrow("a" + std::to_string(v), std::to_string(v),
                std::to_string(v + 1));
    bims.push_back(Bimodule::regular(alg));
  }
  std::vector<std::shared_ptr<const Algebra>> algs(n, alg);
  return ProSpecies::build(q, algs, bims);
}

// two arrows 1 -> 2 with one-dimensional bimodules
inline ProSpeciesPtr kronecker_species() {
  auto k = point();
  Quiver q;
  q.add_vertex("1");
  q.add_vertex("2");
  q.add_arrow("a", "1", "2");
  q.add_arrow("b", "1", "2");
  return ProSpecies::build(q, {k, k},
                           {Bimodule::regular(k), Bimodule::regular(k)});
}

// one vertex, no arrows
inline ProSpeciesPtr single_vertex_species(
    const std::shared_ptr<const Algebra>& alg) {
  Quiver q;
  q.add_vertex("v");
  return ProSpecies::build(q, {alg}, {});
}

// (A e) (x)_k (f A): the outer A-actions act on one tensor leg each.  The
// two one-sided duals of this bimodule usually have different dimensions,
// which makes it the stock counterexample for dual-pairing questions.
inline BimodulePtr corner_bimodule(const std::shared_ptr<const Algebra>& A,
                                   const Vec& e, const Vec& f) {
  const FieldSpec fl = A->field();
  const int n = A->dim();
  Echelon le(fl, n), re(fl, n);
  for (int k = 0; k < n; ++k) {
    le.add(A->mul_vec(vec_unit(fl, n, k), e));
    re.add(A->mul_vec(f, vec_unit(fl, n, k)));
  }
  const Matrix lb = le.basis_matrix_cols();
  const Matrix rb = re.basis_matrix_cols();
  const int dl = lb.cols(), dr = rb.cols();
  std::vector<Matrix> left, right;
  for (int k = 0; k < n; ++k) {
    Matrix lact(fl, dl, dl), ract(fl, dr, dr);
    for (int j = 0; j < dl; ++j) {
      auto c = le.coordinates(A->mul_vec(vec_unit(fl, n, k), lb.col(j)));
      REQUIRE(c.has_value());
      lact.set_col(j, *c);
    }
    for (int j = 0; j < dr; ++j) {
      auto c = re.coordinates(A->mul_vec(rb.col(j), vec_unit(fl, n, k)));
      REQUIRE(c.has_value());
      ract.set_col(j, *c);
    }
    left.push_back(lact.kron(Matrix::identity(fl, dr)));
    right.push_back(Matrix::identity(fl, dl).kron(ract));
  }
  return Bimodule::from_actions(A, A, std::move(left), std::move(right));
}

// every nonzero structure constant respects additivity of the grading
template <class Graded>
inline void check_graded(const Graded& T) {
  for (int i = 0; i < T.dim(); ++i)
    for (int j = 0; j < T.dim(); ++j)
      for (const auto& [k, c] : T.algebra->mul_basis(i, j)) {
        if (c == 0) continue;
        CHECK(T.degree[k] == T.degree[i] + T.degree[j]);
      }
}

// representation with the regular module at one vertex and zero elsewhere
inline Representation vertex_rep(const TensorAlgebra& T, int v) {
  const auto s = T.species;
  const Quiver& q = s->quiver();
  const FieldSpec f = s->field();
  std::vector<ModulePtr> mods;
  for (int w = 0; w < q.vertex_count(); ++w)
    mods.push_back(w == v ? Module::regular(s->vertex_algebra(w))
                          : Module::zero(s->vertex_algebra(w)));
  std::vector<Matrix> maps;
  for (int a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    const int rows = mods[ar.target]->dim();
    const int cols = ar.source == v ? s->arrow_bimodule(a)->dim() * 1 : 0;
    // over the regular source module the arrow tensor is the bimodule itself
    maps.emplace_back(f, rows, ar.source == v ? cols : 0);
  }
  return Representation::build(s, std::move(mods), std::move(maps));
}

}  // namespace fx
