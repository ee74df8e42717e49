#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "prospecies/reflection.hpp"

using namespace prospecies;
using namespace fx;

namespace {

std::string error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

// representation with the given vertex modules and all arrow maps zero
Representation zero_maps_rep(const ProSpeciesPtr& s,
                             std::vector<ModulePtr> mods) {
  const FieldSpec f = s->field();
  const Quiver& q = s->quiver();
  std::vector<Matrix> maps;
  for (int a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    auto ts = tensor_left(*s->arrow_bimodule(a), *mods[ar.source]);
    maps.emplace_back(f, mods[ar.target]->dim(), ts.first.dim());
  }
  return Representation::build(s, std::move(mods), std::move(maps));
}

Representation simple_rep(const ProSpeciesPtr& s, int v) {
  std::vector<ModulePtr> mods;
  for (int w = 0; w < s->quiver().vertex_count(); ++w)
    mods.push_back(w == v ? Module::simple(s->vertex_algebra(w), 0)
                          : Module::zero(s->vertex_algebra(w)));
  return zero_maps_rep(s, std::move(mods));
}

std::vector<int> dims(const Representation& r) {
  std::vector<int> out;
  for (const auto& m : r.vertex) out.push_back(m->dim());
  return out;
}

int partner(const DoubledSpecies& d, int a) {
  return a < d.original_arrows ? a + d.original_arrows
                               : a - d.original_arrows;
}

// checks vee and wedge are mutually inverse on every basis homomorphism in
// both directions, for every doubled arrow of the given representation
void check_adjunction(const DoubledSpecies& d, const Representation& M) {
  const Quiver& q = d.species->quiver();
  for (int g = 0; g < q.arrow_count(); ++g) {
    const int p = partner(d, g);
    const int i = q.arrow(g).source;
    const int t = q.arrow(g).target;
    ArrowPairing pr = doubled_pairing(d, g);
    for (const Matrix& h : hom_space(*M.arrow_domain[g], *M.vertex[t])) {
      Matrix v = vee(pr, M.arrow_space[g], M.arrow_space[p], h);
      Matrix w =
          wedge(pr, M.arrow_space[g], M.arrow_space[p], M.vertex[t], v);
      CHECK(w == h);
    }
    for (const Matrix& h : hom_space(*M.vertex[i], *M.arrow_domain[p])) {
      Matrix w =
          wedge(pr, M.arrow_space[g], M.arrow_space[p], M.vertex[t], h);
      Matrix v = vee(pr, M.arrow_space[g], M.arrow_space[p], w);
      CHECK(v == h);
    }
  }
}

// same corner construction the dualisability tests use: the two one-sided
// duals have different dimensions
ProSpeciesPtr lopsided_species() {
  auto A = a2();
  const Vec e1 = A->idempotents()[0];
  return species_a2(A, corner_bimodule(A, e1, e1));
}

}  // namespace

TEST_CASE("arrow pairings and the transpose adjunction") {
  SUBCASE("pairings construct and self-certify on the fixtures") {
    for (const ProSpeciesPtr& s : {fix_a(), fix_b(), fix_c()}) {
      DoubledSpecies d = double_prospecies(s);
      for (int a = 0; a < d.species->quiver().arrow_count(); ++a) {
        ArrowPairing pr = doubled_pairing(d, a);
        CHECK(pr.x.size() == pr.f.size());
        CHECK(static_cast<int>(pr.lev.size()) ==
              d.species->arrow_bimodule(partner(d, a))->dim());
      }
    }
  }

  SUBCASE("zero maps transpose to zero") {
    DoubledSpecies d = double_prospecies(fix_a());
    Representation M = zero_maps_rep(
        d.species, {Module::regular(d.species->vertex_algebra(0)),
                    Module::regular(d.species->vertex_algebra(1))});
    for (int g = 0; g < 2; ++g) {
      Matrix v = vee(doubled_pairing(d, g), M.arrow_space[g],
                     M.arrow_space[partner(d, g)], M.arrow_map[g]);
      CHECK(v.is_zero());
    }
  }

  SUBCASE("the identity map transposes to an invertible map") {
    DoubledSpecies d = double_prospecies(fix_a());
    const FieldSpec f = d.species->field();
    Representation M = Representation::build(
        d.species,
        {Module::regular(d.species->vertex_algebra(0)),
         Module::regular(d.species->vertex_algebra(1))},
        {Matrix::identity(f, 1), Matrix(f, 1, 1)});
    ArrowPairing pr = doubled_pairing(d, 0);
    Matrix v = vee(pr, M.arrow_space[0], M.arrow_space[1], M.arrow_map[0]);
    CHECK(v.rank() == 1);
    Matrix w = wedge(pr, M.arrow_space[0], M.arrow_space[1], M.vertex[1], v);
    CHECK(w == M.arrow_map[0]);
  }

  SUBCASE("full Hom bases round-trip in both directions") {
    for (const ProSpeciesPtr& s : {fix_b(), fix_c()}) {
      DoubledSpecies d = double_prospecies(s);
      Representation M = zero_maps_rep(
          d.species, {Module::regular(d.species->vertex_algebra(0)),
                      Module::regular(d.species->vertex_algebra(1))});
      check_adjunction(d, M);
    }
  }

  SUBCASE("random homomorphisms round-trip") {
    DoubledSpecies d = double_prospecies(fix_c());
    const FieldSpec f = d.species->field();
    Representation M = zero_maps_rep(
        d.species, {Module::regular(d.species->vertex_algebra(0)),
                    Module::regular(d.species->vertex_algebra(1))});
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long> coeff(-3, 3);
    int done = 0;
    for (int round = 0; round < 10; ++round)
      for (int g = 0; g < 2; ++g) {
        const int p = partner(d, g);
        const int t = d.species->quiver().arrow(g).target;
        auto homs = hom_space(*M.arrow_domain[g], *M.vertex[t]);
        REQUIRE(!homs.empty());
        Matrix h(f, homs[0].rows(), homs[0].cols());
        for (const Matrix& b : homs)
          h = h.add(b.scale(f.from_long(coeff(rng))));
        ArrowPairing pr = doubled_pairing(d, g);
        Matrix v = vee(pr, M.arrow_space[g], M.arrow_space[p], h);
        Matrix w =
            wedge(pr, M.arrow_space[g], M.arrow_space[p], M.vertex[t], v);
        CHECK(w == h);
        ++done;
      }
    CHECK(done == 20);
  }

  SUBCASE("no pairing exists for a lopsided bimodule") {
    ProSpeciesPtr s = lopsided_species();
    CHECK(error_kind([&] { arrow_pairing(s->arrow_data(0), false); }) ==
          "NotDualisable");
  }
}

TEST_CASE("in and out maps at a vertex") {
  SUBCASE("zero arrow maps give zero in and out") {
    DoubledSpecies d = double_prospecies(fix_a());
    Representation M = zero_maps_rep(
        d.species, {Module::regular(d.species->vertex_algebra(0)),
                    Module::regular(d.species->vertex_algebra(1))});
    for (int v = 0; v < 2; ++v) {
      InOutMaps io = in_out(d, M, v);
      CHECK(io.in.is_zero());
      CHECK(io.out.is_zero());
      CHECK(io.total == 1);
    }
  }

  SUBCASE("the composite vanishes exactly on modules over the quotient") {
    for (const ProSpeciesPtr& s : {fix_a(), fix_c()}) {
      PreprojectiveAlgebra P = preprojective_algebra(s, 3);
      RepOfModule r = graded_module_rep(P.pi, Module::regular(P.pi.algebra));
      REQUIRE(is_pi_module(P.doubled, r.rep));
      for (int v = 0; v < 2; ++v) {
        InOutMaps io = in_out(P.doubled, r.rep, v);
        CHECK(io.in.mul(io.out).is_zero());
      }
    }
    // over the unreduced truncated tensor algebra it does not vanish
    DoubledSpecies d = double_prospecies(fix_a());
    TruncatedGradedAlgebra tt = truncated_tensor_algebra(d.species, 3);
    RepOfModule r = graded_module_rep(tt, Module::regular(tt.algebra));
    REQUIRE(!is_pi_module(d, r.rep));
    bool nonzero = false;
    for (int v = 0; v < 2; ++v) {
      InOutMaps io = in_out(d, r.rep, v);
      nonzero = nonzero || !io.in.mul(io.out).is_zero();
    }
    CHECK(nonzero);
  }

  SUBCASE("an isolated vertex has zero-dimensional stacked maps") {
    DoubledSpecies d = double_prospecies(single_vertex_species(point()));
    Representation M =
        zero_maps_rep(d.species, {Module::regular(d.species->vertex_algebra(0))});
    InOutMaps io = in_out(d, M, 0);
    CHECK(io.total == 0);
    CHECK(io.in.cols() == 0);
    CHECK(io.out.rows() == 0);
  }

  SUBCASE("a loop at the vertex is rejected") {
    auto k = point();
    Quiver q;
    q.add_vertex("v");
    q.add_arrow("l", "v", "v");
    DoubledSpecies d =
        double_prospecies(ProSpecies::build(q, {k}, {Bimodule::regular(k)}));
    Representation M =
        zero_maps_rep(d.species, {Module::regular(d.species->vertex_algebra(0))});
    CHECK(error_kind([&] { in_out(d, M, 0); }) == "BadArgument");
  }
}

TEST_CASE("reflection functors in kernel and cokernel form") {
  DoubledSpecies d = double_prospecies(fix_a());

  SUBCASE("the simple at the vertex reflects to zero") {
    Representation s1 = simple_rep(d.species, 0);
    CHECK(sigma_plus(d, s1, 0).rep.total_dim() == 0);
    CHECK(sigma_minus(d, s1, 0).rep.total_dim() == 0);
  }

  SUBCASE("the simple away from the vertex gains support") {
    Representation s2 = simple_rep(d.species, 1);
    SigmaResult plus = sigma_plus(d, s2, 0);
    CHECK(dims(plus.rep) == std::vector<int>{1, 1});
    CHECK(!plus.rep.arrow_map[0].is_zero());
    CHECK(plus.rep.arrow_map[1].is_zero());
    CHECK(is_pi_module(d, plus.rep));
    SigmaResult minus = sigma_minus(d, s2, 0);
    CHECK(dims(minus.rep) == std::vector<int>{1, 1});
    CHECK(minus.rep.arrow_map[0].is_zero());
    CHECK(!minus.rep.arrow_map[1].is_zero());
    CHECK(is_pi_module(d, minus.rep));
  }

  SUBCASE("no support near the vertex leaves the module unchanged") {
    DoubledSpecies line = double_prospecies(line_species(3, point()));
    Representation m = simple_rep(line.species, 2);
    for (const SigmaResult& r :
         {sigma_plus(line, m, 0), sigma_minus(line, m, 0)}) {
      CHECK(dims(r.rep) == dims(m));
      for (size_t a = 0; a < m.arrow_map.size(); ++a)
        CHECK(r.rep.arrow_map[a] == m.arrow_map[a]);
    }
  }

  SUBCASE("reflections of a non-module are rejected") {
    DoubledSpecies dd = double_prospecies(fix_a());
    const FieldSpec f = dd.species->field();
    Representation bad = Representation::build(
        dd.species,
        {Module::regular(dd.species->vertex_algebra(0)),
         Module::regular(dd.species->vertex_algebra(1))},
        {Matrix::identity(f, 1), Matrix::identity(f, 1)});
    REQUIRE(!is_pi_module(dd, bad));
    CHECK(error_kind([&] { sigma_plus(dd, bad, 0); }) == "NotPiModule");
    CHECK(error_kind([&] { sigma_minus(dd, bad, 1); }) == "NotPiModule");
  }

  SUBCASE("the induced map on a homomorphism closes the kernel square") {
    PreprojectiveAlgebra P = preprojective_algebra(fix_c(), 3);
    const FieldSpec f = P.pi.species->field();
    const Quiver& q = P.pi.species->quiver();
    auto V = Module::regular(P.pi.algebra);
    RepOfModule r = graded_module_rep(P.pi, V);
    const Representation& M = r.rep;

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coeff(-2, 2);
    auto homs = hom_space(*V, *V);
    Matrix fmat(f, V->dim(), V->dim());
    for (const Matrix& b : homs) fmat = fmat.add(b.scale(f.from_long(coeff(rng))));

    std::vector<Matrix> at;
    for (int v = 0; v < q.vertex_count(); ++v) {
      auto comp = r.vertex_inclusion[v].solve_right(
          fmat.mul(r.vertex_inclusion[v]));
      REQUIRE(comp.has_value());
      at.push_back(*comp);
    }
    REQUIRE(is_rep_hom(M, M, at));

    SigmaResult sp = sigma_plus(P.doubled, M, 0);
    Matrix df(f, sp.io.total, sp.io.total);
    for (size_t b = 0; b < sp.io.arrows.size(); ++b) {
      const int a = sp.io.arrows[b];
      const int src = q.arrow(a).source;
      const int da = P.pi.species->arrow_bimodule(a)->dim();
      Matrix blk = M.arrow_space[a]
                       .projection()
                       .mul(Matrix::identity(f, da).kron(at[src]))
                       .mul(M.arrow_space[a].section());
      for (int i = 0; i < blk.rows(); ++i)
        for (int j = 0; j < blk.cols(); ++j)
          df.at(sp.io.offset[b] + i, sp.io.offset[b] + j) = blk.at(i, j);
    }
    auto lifted = sp.vertex_map.solve_right(df.mul(sp.vertex_map));
    REQUIRE(lifted.has_value());
    CHECK(sp.vertex_map.mul(*lifted) == df.mul(sp.vertex_map));
    std::vector<Matrix> smaps = at;
    smaps[0] = *lifted;
    CHECK(is_rep_hom(sp.rep, sp.rep, smaps));
  }
}

TEST_CASE("ideal description of the reflections") {
  SUBCASE("module round-trips through its representation") {
    for (const ProSpeciesPtr& s : {fix_a(), fix_b(), fix_c()}) {
      PreprojectiveAlgebra P = preprojective_algebra(s, 3);
      REQUIRE(P.pi.finite_certified);
      auto V = Module::regular(P.pi.algebra);
      RepOfModule r = graded_module_rep(P.pi, V);
      auto back = module_of_rep(P.pi, r.rep);
      CHECK(back->dim() == V->dim());
      CHECK(is_isomorphic(*back, *V, 11).verdict == Certainty::Yes);
    }
  }

  SUBCASE("tensoring the whole algebra gives the ideal back") {
    PreprojectiveAlgebra P = preprojective_algebra(fix_a(), 3);
    auto V = Module::regular(P.pi.algebra);
    auto got = sigma_via_ideal(P.pi, V, 0, -1);
    VertexIdeal vi = vertex_ideal(P.pi, 0);
    auto expected = V->submodule_from_basis(vi.basis).mod;
    CHECK(got->dim() == expected->dim());
    CHECK(is_isomorphic(*got, *expected, 3).verdict == Certainty::Yes);
  }

  SUBCASE("both descriptions agree on the fixtures") {
    for (const ProSpeciesPtr& s : {fix_a(), fix_c()}) {
      PreprojectiveAlgebra P = preprojective_algebra(s, 3);
      std::vector<ModulePtr> mods{
          Module::regular(P.pi.algebra),
          module_of_rep(P.pi, simple_rep(P.pi.species, 0)),
          module_of_rep(P.pi, simple_rep(P.pi.species, 1))};
      for (const ModulePtr& V : mods)
        for (int i = 0; i < 2; ++i) {
          Representation rep = graded_module_rep(P.pi, V).rep;
          auto plus_la = module_of_rep(P.pi, sigma_plus(P.doubled, rep, i).rep);
          auto plus_id = sigma_via_ideal(P.pi, V, i, 1);
          CHECK(plus_la->dim() == plus_id->dim());
          CHECK(is_isomorphic(*plus_la, *plus_id, 5).verdict ==
                Certainty::Yes);
          auto minus_la =
              module_of_rep(P.pi, sigma_minus(P.doubled, rep, i).rep);
          auto minus_id = sigma_via_ideal(P.pi, V, i, -1);
          CHECK(minus_la->dim() == minus_id->dim());
          CHECK(is_isomorphic(*minus_la, *minus_id, 5).verdict ==
                Certainty::Yes);
        }
    }
  }

  SUBCASE("the ideal collapses the simple at its vertex") {
    PreprojectiveAlgebra P = preprojective_algebra(fix_a(), 3);
    auto s1 = module_of_rep(P.pi, simple_rep(P.pi.species, 0));
    CHECK(sigma_via_ideal(P.pi, s1, 0, -1)->dim() == 0);
  }

  SUBCASE("an uncertified algebra is rejected") {
    PreprojectiveAlgebra P = preprojective_algebra(kronecker_species(), 3);
    REQUIRE(!P.pi.finite_certified);
    auto V = Module::regular(P.pi.algebra);
    CHECK(error_kind([&] { sigma_via_ideal(P.pi, V, 0, -1); }) ==
          "NotFiniteDimensional");
  }
}

TEST_CASE("largest concentrated submodule and quotient") {
  DoubledSpecies d = double_prospecies(fix_a());

  SUBCASE("a simple concentrated at the vertex is both") {
    Representation s1 = simple_rep(d.species, 0);
    SubFac sf = sub_fac(d, s1, 0);
    CHECK(dims(sf.sub) == dims(s1));
    CHECK(dims(sf.fac) == dims(s1));
    CHECK(sf.sub_inclusion.rank() == 1);
    CHECK(sf.fac_projection.rank() == 1);
  }

  SUBCASE("the regular module splits one dimension each way") {
    PreprojectiveAlgebra P = preprojective_algebra(fix_a(), 3);
    RepOfModule r = graded_module_rep(P.pi, Module::regular(P.pi.algebra));
    SubFac sf = sub_fac(P.doubled, r.rep, 0);
    CHECK(sf.sub.vertex[0]->dim() == 1);
    CHECK(sf.fac.vertex[0]->dim() == 1);
    InOutMaps io = in_out(P.doubled, r.rep, 0);
    CHECK(sf.fac.vertex[0]->dim() ==
          r.rep.vertex[0]->dim() - io.in.rank());
    CHECK(sf.sub.vertex[0]->dim() ==
          r.rep.vertex[0]->dim() - io.out.rank());
  }

  SUBCASE("support away from the vertex gives zero") {
    Representation s2 = simple_rep(d.species, 1);
    SubFac sf = sub_fac(d, s2, 0);
    CHECK(sf.sub.total_dim() == 0);
    CHECK(sf.fac.total_dim() == 0);
  }

  SUBCASE("brute-force subspace search agrees over a finite field") {
    BoundQuiverPresentation p;
    p.quiver.add_vertex("v");
    auto k2 = Algebra::bound_quiver(prime_field(2), p);
    PreprojectiveAlgebra P = preprojective_algebra(line_species(3, k2), 3);
    const FieldSpec f = prime_field(2);
    RepOfModule r = graded_module_rep(P.pi, Module::regular(P.pi.algebra));
    const Quiver& q = P.pi.species->quiver();
    for (int v = 0; v < q.vertex_count(); ++v) {
      const int n = r.rep.vertex[v]->dim();
      REQUIRE(n <= 6);
      // all vectors of the vertex space over F2, then all spans of subsets
      std::vector<Vec> pts;
      for (int mask = 1; mask < (1 << n); ++mask) {
        Vec u = vec_zero(f, n);
        for (int i = 0; i < n; ++i)
          if (mask & (1 << i)) u[i] = f.one();
        pts.push_back(u);
      }
      int best = 0;
      for (size_t mask = 0; mask < (size_t{1} << pts.size()); ++mask) {
        Echelon span(f, n);
        for (size_t i = 0; i < pts.size(); ++i)
          if (mask & (size_t{1} << i)) span.add(pts[i]);
        Matrix basis = span.basis_matrix_cols();
        bool ok = true;
        for (int c = 0; ok && c < basis.cols(); ++c) {
          for (int b = 0; ok && b < r.rep.vertex[v]->algebra()->dim(); ++b)
            ok = span.contains(r.rep.vertex[v]->action(b).apply(basis.col(c)));
          for (int a = 0; ok && a < q.arrow_count(); ++a) {
            if (q.arrow(a).source != v) continue;
            const int da = P.pi.species->arrow_bimodule(a)->dim();
            for (int kk = 0; ok && kk < da; ++kk)
              ok = vec_is_zero(r.rep.arrow_map[a].apply(
                  r.rep.arrow_space[a].pure(vec_unit(f, da, kk),
                                            basis.col(c))));
          }
        }
        if (ok) best = std::max(best, basis.cols());
      }
      SubFac sf = sub_fac(P.doubled, r.rep, v);
      CHECK(sf.sub.vertex[v]->dim() == best);
    }
  }
}

TEST_CASE("the two canonical sequences") {
  DoubledSpecies d = double_prospecies(fix_a());

  SUBCASE("a simple at the vertex") {
    ReflectionSequences rs =
        verify_reflection_sequences(d, simple_rep(d.species, 0), 0);
    CHECK(rs.first_exact);
    CHECK(rs.second_exact);
    CHECK(rs.plus_minus.total_dim() == 0);
    CHECK(rs.minus_plus.total_dim() == 0);
    CHECK(dims(rs.ends.sub) == std::vector<int>{1, 0});
    CHECK(dims(rs.ends.fac) == std::vector<int>{1, 0});
    CHECK(!rs.unit_iso);
    CHECK(!rs.counit_iso);
  }

  SUBCASE("images of the reflections are torsion-free or torsion") {
    PreprojectiveAlgebra P = preprojective_algebra(fix_a(), 3);
    RepOfModule r = graded_module_rep(P.pi, Module::regular(P.pi.algebra));
    Representation minus_img = sigma_minus(P.doubled, r.rep, 0).rep;
    CHECK(sub_fac(P.doubled, minus_img, 0).fac.total_dim() == 0);
    ReflectionSequences rs1 =
        verify_reflection_sequences(P.doubled, minus_img, 0);
    CHECK(rs1.first_exact);
    CHECK(rs1.second_exact);
    CHECK(rs1.counit_iso);
    Representation plus_img = sigma_plus(P.doubled, r.rep, 0).rep;
    CHECK(sub_fac(P.doubled, plus_img, 0).sub.total_dim() == 0);
    ReflectionSequences rs2 =
        verify_reflection_sequences(P.doubled, plus_img, 0);
    CHECK(rs2.first_exact);
    CHECK(rs2.second_exact);
    CHECK(rs2.unit_iso);
  }

  SUBCASE("the zero module is trivially exact on both sides") {
    Representation z = Representation::zero(d.species);
    ReflectionSequences rs = verify_reflection_sequences(d, z, 0);
    CHECK(rs.first_exact);
    CHECK(rs.second_exact);
    CHECK(rs.unit_iso);
    CHECK(rs.counit_iso);
  }

  SUBCASE("exactness holds across fixtures, vertices and modules") {
    for (const ProSpeciesPtr& s : {fix_b(), fix_c()}) {
      PreprojectiveAlgebra P = preprojective_algebra(s, 3);
      std::vector<Representation> mods{
          graded_module_rep(P.pi, Module::regular(P.pi.algebra)).rep,
          simple_rep(P.pi.species, 0), simple_rep(P.pi.species, 1)};
      for (const Representation& m : mods)
        for (int v = 0; v < 2; ++v) {
          ReflectionSequences rs = verify_reflection_sequences(P.doubled, m, v);
          CHECK(rs.first_exact);
          CHECK(rs.second_exact);
        }
    }
  }
}

TEST_CASE("reflections of plain representations") {
  ProSpeciesPtr s = fix_a();

  SUBCASE("a sink reflection grows the simple away from it") {
    BgpResult b = bgp_plus(s, simple_rep(s, 0), 1);
    CHECK(dims(b.rep) == std::vector<int>{1, 1});
    const Arrow& ar = b.reflected->quiver().arrow(0);
    CHECK(ar.label == "alpha_star");
    CHECK(ar.source == 1);
    CHECK(ar.target == 0);
    CHECK(!b.rep.arrow_map[0].is_zero());
    BgpResult back = bgp_minus(b.reflected, b.rep, 1);
    CHECK(dims(back.rep) == std::vector<int>{1, 0});
  }

  SUBCASE("a sink reflection kills the simple at it") {
    BgpResult b = bgp_plus(s, simple_rep(s, 1), 1);
    CHECK(dims(b.rep) == std::vector<int>{0, 0});
  }

  SUBCASE("an isolated vertex with no support is untouched") {
    ProSpeciesPtr one = single_vertex_species(point());
    Representation m =
        zero_maps_rep(one, {Module::zero(one->vertex_algebra(0))});
    CHECK(bgp_plus(one, m, 0).rep.total_dim() == 0);
    CHECK(bgp_minus(one, m, 0).rep.total_dim() == 0);
    CHECK(reflect_species(one, 0)->quiver() == one->quiver());
  }

  SUBCASE("interior vertices are rejected") {
    ProSpeciesPtr line = line_species(3, point());
    Representation m = simple_rep(line, 0);
    CHECK(error_kind([&] { bgp_plus(line, m, 1); }) == "NotSinkOrSource");
    CHECK(error_kind([&] { bgp_minus(line, m, 2); }) == "NotSinkOrSource");
    CHECK(error_kind([&] { reflect_species(line, 1); }) == "NotSinkOrSource");
  }

  SUBCASE("nontrivial vertex algebras reflect and come back") {
    ProSpeciesPtr c = fix_c();
    Representation m = zero_maps_rep(
        c, {Module::regular(c->vertex_algebra(0)),
            Module::zero(c->vertex_algebra(1))});
    BgpResult b = bgp_plus(c, m, 1);
    CHECK(dims(b.rep) == std::vector<int>{2, 2});
    CHECK(!b.rep.arrow_map[0].is_zero());
    BgpResult back = bgp_minus(b.reflected, b.rep, 1);
    CHECK(dims(back.rep) == std::vector<int>{2, 0});
  }
}

TEST_CASE("the recorded convention is stable") {
  CHECK(reflection_convention() == reflection_convention());
  CHECK(!reflection_convention().empty());
}
