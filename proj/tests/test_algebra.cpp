#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prospecies/algebra.hpp"
#include "prospecies/polytools.hpp"

using namespace prospecies;

namespace {

BoundQuiverPresentation point() {
  BoundQuiverPresentation p;
  p.quiver.add_vertex("v");
  return p;
}

BoundQuiverPresentation dual_numbers() {
  BoundQuiverPresentation p;
  p.quiver.add_vertex("v");
  p.quiver.add_arrow("x", "v", "v");
  Path x2{-1, {0, 0}};
  p.relations.push_back({{{Scalar(1), x2}}});
  p.nilpotency_bound = 5;
  return p;
}

BoundQuiverPresentation a2_path() {
  BoundQuiverPresentation p;
  p.quiver.add_vertex("1");
  p.quiver.add_vertex("2");
  p.quiver.add_arrow("alpha", "1", "2");
  return p;
}

// 1 -> 2 -> 4 and 1 -> 3 -> 4 with the two composites identified.
BoundQuiverPresentation commutative_square() {
  BoundQuiverPresentation p;
  for (const char* v : {"1", "2", "3", "4"}) p.quiver.add_vertex(v);
  p.quiver.add_arrow("a", "1", "2");
  p.quiver.add_arrow("b", "1", "3");
  p.quiver.add_arrow("c", "2", "4");
  p.quiver.add_arrow("d", "3", "4");
  Path ca{-1, {0, 2}};
  Path db{-1, {1, 3}};
  p.relations.push_back({{{Scalar(1), ca}, {Scalar(-1), db}}});
  p.nilpotency_bound = 4;
  return p;
}

}  // namespace

TEST_CASE("polynomial basics") {
  FieldSpec q = rationals();
  Poly a = poly_from(q, {Scalar(-1), Scalar(0), Scalar(1)});  // x^2 - 1
  Poly b = poly_from(q, {Scalar(1), Scalar(1)});              // x + 1
  auto [quot, rem] = poly_divmod(a, b);
  CHECK(rem.is_zero());
  CHECK(quot.c == std::vector<Scalar>{Scalar(-1), Scalar(1)});
  CHECK(poly_gcd(a, b).c == std::vector<Scalar>{Scalar(1), Scalar(1)});
  CHECK(poly_eval(a, Scalar(3)) == Scalar(8));
  CHECK(poly_is_squarefree(a));
  Poly sq = poly_mul(b, b);
  CHECK_FALSE(poly_is_squarefree(sq));
}

TEST_CASE("distinct-degree counting over F_p") {
  FieldSpec f5 = prime_field(5);
  // x^2 + 1 = (x+2)(x+3) over F_5
  Poly m = poly_from(f5, {Scalar(1), Scalar(0), Scalar(1)});
  CHECK(count_irreducible_factors_mod_p(m) == 2);
  // x^2 + 2 is irreducible over F_5
  Poly irr = poly_from(f5, {Scalar(2), Scalar(0), Scalar(1)});
  CHECK(count_irreducible_factors_mod_p(irr) == 1);
  auto factor = factor_mod_p(m);
  REQUIRE(factor.has_value());
  CHECK(factor->degree() == 1);
  CHECK(poly_divmod(m, *factor).second.is_zero());
  CHECK_FALSE(factor_mod_p(irr).has_value());
}

TEST_CASE("rational roots and quartic splits") {
  FieldSpec q = rationals();
  // (x - 1/2)(x + 3) = x^2 + 5/2 x - 3/2
  Poly p = poly_from(q, {Scalar(-3) / 2, Scalar(5) / 2, Scalar(1)});
  auto root = rational_root(p);
  REQUIRE(root.has_value());
  CHECK(poly_eval(p, *root) == 0);
  Poly noroot = poly_from(q, {Scalar(1), Scalar(0), Scalar(1)});
  CHECK_FALSE(rational_root(noroot).has_value());
  // (x^2+1)(x^2+4) has no rational roots but splits into quadratics
  Poly quartic = poly_from(q, {Scalar(4), Scalar(0), Scalar(5), Scalar(0),
                               Scalar(1)});
  auto split = quartic_quadratic_split(quartic);
  REQUIRE(split.has_value());
  CHECK(poly_sub(poly_mul(split->first, split->second), quartic).is_zero());
  CHECK(irreducible_mod_some_prime(noroot, 50));
  // x^2 - 1 is reducible everywhere
  Poly red = poly_from(q, {Scalar(-1), Scalar(0), Scalar(1)});
  CHECK_FALSE(irreducible_mod_some_prime(red, 50));
}

TEST_CASE("field square roots") {
  FieldSpec q = rationals();
  auto r = field_sqrt(q, Scalar(9) / 4);
  REQUIRE(r.has_value());
  CHECK(*r * *r == Scalar(9) / 4);
  CHECK_FALSE(field_sqrt(q, Scalar(2)).has_value());
  CHECK_FALSE(field_sqrt(q, Scalar(-1)).has_value());
  FieldSpec f7 = prime_field(7);
  auto s = field_sqrt(f7, Scalar(2));  // 3^2 = 2 mod 7
  REQUIRE(s.has_value());
  CHECK(f7.mul(*s, *s) == Scalar(2));
  CHECK_FALSE(field_sqrt(f7, Scalar(3)).has_value());
}

TEST_CASE("point algebra is the field") {
  auto a = Algebra::bound_quiver(rationals(), point());
  CHECK(a->dim() == 1);
  CHECK(a->unit() == Vec{Scalar(1)});
  CHECK(a->radical_basis().cols() == 0);
}

TEST_CASE("dual numbers") {
  auto a = Algebra::bound_quiver(rationals(), dual_numbers());
  REQUIRE(a->dim() == 2);
  CHECK(a->basis_label(0) == "e(v)");
  CHECK(a->basis_label(1) == "x");
  // x * x = 0
  CHECK(a->mul_basis(1, 1).empty());
  Matrix rad = a->radical_basis();
  REQUIRE(rad.cols() == 1);
  CHECK(rad.at(0, 0) == 0);
  CHECK(rad.at(1, 0) != 0);
}

TEST_CASE("A2 path algebra") {
  auto a = Algebra::bound_quiver(rationals(), a2_path());
  REQUIRE(a->dim() == 3);
  Matrix rad = a->radical_basis();
  REQUIRE(rad.cols() == 1);
  // radical = span of the arrow
  CHECK(rad.at(a->dim() - 1, 0) != 0);
  // e2 * alpha = alpha, alpha * e1 = alpha, e1 * alpha = 0
  int e1 = 0, e2 = 1, al = 2;
  CHECK(a->basis_label(al) == "alpha");
  Vec v = a->mul_vec(vec_unit(a->field(), 3, e2), vec_unit(a->field(), 3, al));
  CHECK(v == vec_unit(a->field(), 3, al));
  v = a->mul_vec(vec_unit(a->field(), 3, al), vec_unit(a->field(), 3, e1));
  CHECK(v == vec_unit(a->field(), 3, al));
  v = a->mul_vec(vec_unit(a->field(), 3, e1), vec_unit(a->field(), 3, al));
  CHECK(vec_is_zero(v));
}

TEST_CASE("commutative square identifies the two composites") {
  auto a = Algebra::bound_quiver(rationals(), commutative_square());
  CHECK(a->dim() == 9);
  // the lexicographically smaller composite c.a is rewritten into d.b
  bool has_db = false, has_ca = false;
  for (const auto& l : a->labels()) {
    if (l == "d.b") has_db = true;
    if (l == "c.a") has_ca = true;
  }
  CHECK(has_db);
  CHECK_FALSE(has_ca);
  // multiplying the arrows yields the surviving representative
  Vec c = a->reduce_path(Path{-1, {a->quiver().arrow_index("a"),
                                   a->quiver().arrow_index("c")}});
  Vec d = a->reduce_path(Path{-1, {a->quiver().arrow_index("b"),
                                   a->quiver().arrow_index("d")}});
  CHECK(c == d);
  CHECK_FALSE(vec_is_zero(c));
  // radical = span of nontrivial paths, here dimension 5
  CHECK(a->radical_basis().cols() == 5);
}

TEST_CASE("radical equals nontrivial-path span for bound quiver algebras") {
  for (auto pres : {dual_numbers(), a2_path(), commutative_square()}) {
    auto a = Algebra::bound_quiver(rationals(), pres);
    Matrix rad = a->radical_basis();
    Echelon expect(a->field(), a->dim());
    for (int b = 0; b < a->dim(); ++b)
      if (!a->basis_paths()[b].trivial())
        expect.add(vec_unit(a->field(), a->dim(), b));
    REQUIRE(rad.cols() == expect.dim());
    for (int j = 0; j < rad.cols(); ++j) CHECK(expect.contains(rad.col(j)));
  }
}

TEST_CASE("admissibility and nilpotency errors") {
  BoundQuiverPresentation bad;
  bad.quiver.add_vertex("v");
  bad.quiver.add_arrow("x", "v", "v");
  bad.relations.push_back({{{Scalar(1), Path{-1, {0}}}}});
  CHECK_THROWS_WITH_AS(
      (void)Algebra::bound_quiver(rationals(), bad),
      doctest::Contains("NotAdmissible"), Error);

  BoundQuiverPresentation loop;
  loop.quiver.add_vertex("v");
  loop.quiver.add_arrow("x", "v", "v");
  loop.nilpotency_bound = 6;
  CHECK_THROWS_WITH_AS((void)Algebra::bound_quiver(rationals(), loop),
                       doctest::Contains("NotNilpotent"), Error);

  // bound too small for an honest relation
  BoundQuiverPresentation small;
  small.quiver.add_vertex("v");
  small.quiver.add_arrow("x", "v", "v");
  small.relations.push_back({{{Scalar(1), Path{-1, {0, 0, 0, 0}}}}});
  small.nilpotency_bound = 3;
  CHECK_THROWS_WITH_AS((void)Algebra::bound_quiver(rationals(), small),
                       doctest::Contains("NotNilpotent"), Error);
  small.nilpotency_bound = 4;
  CHECK(Algebra::bound_quiver(rationals(), small)->dim() == 4);
}

TEST_CASE("non-parallel relation is rejected") {
  BoundQuiverPresentation p = commutative_square();
  Path ca{-1, {0, 2}};
  Path cb{-1, {1, 2}};  // not even composable, caught by compose
  p.relations.push_back({{{Scalar(1), ca}, {Scalar(1), Path{-1, {0, 3}}}}});
  CHECK_THROWS_AS((void)Algebra::bound_quiver(rationals(), p), Error);
  (void)cb;
}

TEST_CASE("prime field bound quiver algebra") {
  auto a = Algebra::bound_quiver(prime_field(5), dual_numbers());
  CHECK(a->dim() == 2);
  CHECK(a->radical_basis().cols() == 1);
  CHECK_THROWS_WITH_AS(
      (void)Algebra::bound_quiver(prime_field(2), dual_numbers())
          ->radical_basis(),
      doctest::Contains("CharTooSmall"), Error);
}

TEST_CASE("opposite algebra") {
  auto a = Algebra::bound_quiver(rationals(), dual_numbers());
  auto op = a->opposite();
  op->verify();
  // commutative: identical structure constants
  for (int i = 0; i < a->dim(); ++i)
    for (int j = 0; j < a->dim(); ++j)
      CHECK(a->mul_basis(i, j) == op->mul_basis(i, j));
  auto p = Algebra::bound_quiver(rationals(), a2_path());
  auto pop = p->opposite();
  pop->verify();
  int al = 2;
  // in the opposite, alpha * e2 = alpha
  Vec v = pop->mul_vec(vec_unit(p->field(), 3, al), vec_unit(p->field(), 3, 1));
  CHECK(v == vec_unit(p->field(), 3, al));
}

TEST_CASE("product and enveloping algebras") {
  auto k = Algebra::bound_quiver(rationals(), point());
  auto d = Algebra::bound_quiver(rationals(), dual_numbers());
  auto prod = Algebra::product({k, d});
  prod->verify();
  CHECK(prod->dim() == 3);
  CHECK(prod->idempotents().size() == 2);
  CHECK(prod->radical_basis().cols() == 1);

  auto env = Algebra::enveloping(d, d);
  env->verify();
  CHECK(env->dim() == 4);
  CHECK(env->generators().size() == 2);
  // (x(x)1)*(x(x)1) = x^2 (x) 1 = 0
  Vec x1 = env->generators()[0];
  CHECK(vec_is_zero(env->mul_vec(x1, x1)));
}

TEST_CASE("minimal polynomials of algebra elements") {
  auto d = Algebra::bound_quiver(rationals(), dual_numbers());
  Vec x = vec_unit(d->field(), 2, 1);
  Poly mp = min_poly_element(*d, x);
  CHECK(mp.c == std::vector<Scalar>{Scalar(0), Scalar(0), Scalar(1)});  // x^2
  Vec e = vec_unit(d->field(), 2, 0);  // the unit
  CHECK(min_poly_element(*d, e).degree() == 1);

  auto k2 = Algebra::product(
      {Algebra::bound_quiver(rationals(), point()),
       Algebra::bound_quiver(rationals(), point())});
  Vec e1 = k2->idempotents()[0];
  Poly idem = min_poly_element(*k2, e1);
  // x^2 - x
  CHECK(idem.c == std::vector<Scalar>{Scalar(0), Scalar(-1), Scalar(1)});
}

TEST_CASE("path reduction through arrow products") {
  auto a = Algebra::bound_quiver(rationals(), dual_numbers());
  Vec x2 = a->reduce_path(Path{-1, {0, 0}});
  CHECK(vec_is_zero(x2));
  Vec e = a->reduce_path(Path{0, {}});
  CHECK(e == a->idempotents()[0]);
}
