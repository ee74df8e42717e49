#include "prospecies/module.hpp"

#include <array>
#include <deque>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include "prospecies/polytools.hpp"

namespace prospecies {

namespace {

// Generating set for gen-set arguments: the declared generators together
// with the idempotents, falling back to the full basis.
std::vector<Vec> acting_gens(const Algebra& a) {
  std::vector<Vec> g = a.generators();
  if (g.empty()) {
    for (int i = 0; i < a.dim(); ++i)
      g.push_back(vec_unit(a.field(), a.dim(), i));
    return g;
  }
  for (const Vec& e : a.idempotents()) g.push_back(e);
  return g;
}

// Generators used for linear constraints once the idempotent blocks are
// already accounted for.
std::vector<Vec> constraint_gens(const Algebra& a) {
  std::vector<Vec> g = a.generators();
  if (g.empty())
    for (int i = 0; i < a.dim(); ++i)
      g.push_back(vec_unit(a.field(), a.dim(), i));
  return g;
}

Vec flatten(const Matrix& m) {
  Vec v;
  v.reserve(static_cast<size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
  return v;
}

Matrix combo(FieldSpec f, const std::vector<Matrix>& basis, const Vec& c,
             int dim) {
  Matrix r(f, dim, dim);
  for (size_t t = 0; t < c.size(); ++t) {
    if (c[t] == 0) continue;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const Scalar& e = basis[t].at(i, j);
        if (e != 0) r.at(i, j) = f.add(r.at(i, j), f.mul(c[t], e));
      }
  }
  return r;
}

Scalar determinant(const Matrix& m0) {
  require(m0.rows() == m0.cols(), "ShapeMismatch",
          "determinant of a non-square matrix");
  const FieldSpec f = m0.field();
  Matrix m = m0;
  const int n = m.rows();
  Scalar det = f.one();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return f.zero();
    if (piv != col) {
      for (int j = col; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
      det = f.neg(det);
    }
    det = f.mul(det, m.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      if (m.at(r, col) == 0) continue;
      Scalar factor = f.div(m.at(r, col), m.at(col, col));
      for (int j = col; j < n; ++j)
        m.at(r, j) = f.sub(m.at(r, j), f.mul(factor, m.at(col, j)));
    }
  }
  return det;
}

Scalar random_scalar(FieldSpec f, std::mt19937_64& rng) {
  if (f.p > 0)
    return f.from_long(
        static_cast<long>(rng() % static_cast<unsigned long>(f.p)));
  return f.from_long(static_cast<long>(rng() % 41) - 20);
}

Echelon closure_ech(const Module& m, const std::vector<Vec>& gens) {
  const FieldSpec f = m.field();
  Echelon ech(f, m.dim());
  std::vector<Matrix> ops;
  for (const Vec& g : acting_gens(*m.algebra())) ops.push_back(m.action_of(g));
  std::deque<Vec> work;
  for (const Vec& g : gens) {
    require(static_cast<int>(g.size()) == m.dim(), "ShapeMismatch",
            "generator has wrong length");
    if (ech.add(g)) work.push_back(g);
  }
  while (!work.empty()) {
    Vec v = work.front();
    work.pop_front();
    for (const Matrix& op : ops) {
      Vec w = op.apply(v);
      if (ech.add(w)) work.push_back(w);
    }
  }
  return ech;
}

Module::SubQuot projective_sub(const std::shared_ptr<const Algebra>& a,
                               const Vec& e) {
  const FieldSpec f = a->field();
  require(a->mul_vec(e, e) == e, "NotIdempotent",
          "projective needs an idempotent");
  Matrix re = a->right_mult_matrix(e);
  Echelon ech(f, a->dim());
  for (int j = 0; j < a->dim(); ++j) ech.add(re.col(j));
  return Module::regular(a)->submodule_from_basis(ech.basis_matrix_cols());
}

}  // namespace

ModulePtr Module::from_action(std::shared_ptr<const Algebra> a,
                              std::vector<Matrix> action, bool check) {
  require(a != nullptr, "ShapeMismatch", "module needs an algebra");
  require(static_cast<int>(action.size()) == a->dim(), "ShapeMismatch",
          "one action matrix per basis element");
  const int d = action.empty() ? 0 : action[0].rows();
  for (const Matrix& m : action) {
    require(m.rows() == d && m.cols() == d, "ShapeMismatch",
            "action matrices must be square of one size");
    require(m.field() == a->field(), "ShapeMismatch",
            "action field mismatch");
  }
  auto mod = std::shared_ptr<Module>(new Module());
  mod->alg_ = std::move(a);
  mod->dim_ = d;
  mod->action_ = std::move(action);
  if (check) mod->verify();
  return mod;
}

ModulePtr Module::zero(std::shared_ptr<const Algebra> a) {
  std::vector<Matrix> act(a->dim(), Matrix(a->field(), 0, 0));
  return from_action(std::move(a), std::move(act), false);
}

ModulePtr Module::regular(std::shared_ptr<const Algebra> a) {
  const FieldSpec f = a->field();
  std::vector<Matrix> act;
  act.reserve(a->dim());
  for (int i = 0; i < a->dim(); ++i)
    act.push_back(a->left_mult_matrix(vec_unit(f, a->dim(), i)));
  return from_action(std::move(a), std::move(act), false);
}

ModulePtr Module::projective(std::shared_ptr<const Algebra> a, const Vec& e) {
  return projective_sub(a, e).mod;
}

ModulePtr Module::simple(std::shared_ptr<const Algebra> a, int k) {
  const auto& prim = a->primitive_idempotents();
  require(k >= 0 && k < static_cast<int>(prim.size()), "ShapeMismatch",
          "primitive idempotent index out of range");
  return projective_sub(a, prim[k]).mod->top().mod;
}

Matrix Module::action_of(const Vec& a) const {
  require(static_cast<int>(a.size()) == alg_->dim(), "ShapeMismatch",
          "element has wrong length");
  const FieldSpec f = field();
  Matrix r(f, dim_, dim_);
  for (size_t t = 0; t < a.size(); ++t) {
    if (a[t] == 0) continue;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const Scalar& e = action_[t].at(i, j);
        if (e != 0) r.at(i, j) = f.add(r.at(i, j), f.mul(a[t], e));
      }
  }
  return r;
}

Vec Module::act(const Vec& a, const Vec& m) const {
  require(static_cast<int>(m.size()) == dim_, "ShapeMismatch",
          "module vector has wrong length");
  const FieldSpec f = field();
  Vec out = vec_zero(f, dim_);
  for (size_t t = 0; t < a.size(); ++t) {
    if (a[t] == 0) continue;
    Vec w = action_[t].apply(m);
    for (int j = 0; j < dim_; ++j) out[j] = f.add(out[j], f.mul(a[t], w[j]));
  }
  return out;
}

void Module::verify() const {
  const FieldSpec f = field();
  require(action_of(alg_->unit()) == Matrix::identity(f, dim_), "NotAnAction",
          "unit must act as the identity");
  const int n = alg_->dim();
  for (const Vec& g : acting_gens(*alg_)) {
    Matrix ga = action_of(g);
    for (int j = 0; j < n; ++j) {
      Vec gj = alg_->mul_vec(g, vec_unit(f, n, j));
      require(action_of(gj) == ga.mul(action_[j]), "NotAnAction",
              "action violates the structure constants");
    }
  }
}

ModulePtr Module::direct_sum(const Module& o) const {
  require(alg_ == o.alg_, "DifferentAlgebras",
          "direct sum needs one algebra");
  const FieldSpec f = field();
  std::vector<Matrix> act;
  act.reserve(alg_->dim());
  for (int t = 0; t < alg_->dim(); ++t) {
    Matrix b(f, dim_ + o.dim_, dim_ + o.dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) b.at(i, j) = action_[t].at(i, j);
    for (int i = 0; i < o.dim_; ++i)
      for (int j = 0; j < o.dim_; ++j)
        b.at(dim_ + i, dim_ + j) = o.action_[t].at(i, j);
    act.push_back(std::move(b));
  }
  return from_action(alg_, std::move(act), false);
}

Matrix Module::invariant_closure(const std::vector<Vec>& gens) const {
  return closure_ech(*this, gens).basis_matrix_cols();
}

Module::SubQuot Module::submodule_from_basis(const Matrix& cols) const {
  require(cols.rows() == dim_, "ShapeMismatch",
          "basis columns live in the wrong space");
  const FieldSpec f = field();
  Echelon ech(f, dim_);
  for (int j = 0; j < cols.cols(); ++j)
    require(ech.add(cols.col(j)), "DependentBasis",
            "submodule basis must be independent");
  Matrix u = ech.basis_matrix_cols();
  const int d = ech.dim();
  std::vector<Matrix> act;
  act.reserve(alg_->dim());
  for (int t = 0; t < alg_->dim(); ++t) {
    Matrix x(f, d, d);
    for (int j = 0; j < d; ++j) {
      auto c = ech.coordinates(action_[t].apply(u.col(j)));
      require(c.has_value(), "NotInvariant",
              "columns do not span a submodule");
      x.set_col(j, *c);
    }
    act.push_back(std::move(x));
  }
  return {from_action(alg_, std::move(act), false), u};
}

Module::SubQuot Module::submodule(const std::vector<Vec>& gens) const {
  return submodule_from_basis(invariant_closure(gens));
}

Module::SubQuot Module::quotient(const std::vector<Vec>& subspace_gens) const {
  const FieldSpec f = field();
  Echelon ech = closure_ech(*this, subspace_gens);
  QuotientSpace qs(f, dim_, ech);
  std::vector<Matrix> act;
  act.reserve(alg_->dim());
  for (int t = 0; t < alg_->dim(); ++t)
    act.push_back(qs.projection().mul(action_[t]).mul(qs.section()));
  return {from_action(alg_, std::move(act), false), qs.projection()};
}

Matrix Module::radical_subspace() const {
  const FieldSpec f = field();
  Matrix rad = alg_->radical_basis();
  Echelon ech(f, dim_);
  for (int r = 0; r < rad.cols(); ++r) {
    Matrix a = action_of(rad.col(r));
    for (int j = 0; j < dim_; ++j) ech.add(a.col(j));
  }
  return ech.basis_matrix_cols();
}

Module::SubQuot Module::top() const {
  Matrix rs = radical_subspace();
  std::vector<Vec> gens;
  for (int j = 0; j < rs.cols(); ++j) gens.push_back(rs.col(j));
  return quotient(gens);
}

void ModuleHom::verify() const {
  require(source != nullptr && target != nullptr, "ShapeMismatch",
          "hom needs endpoints");
  require(source->algebra() == target->algebra(), "DifferentAlgebras",
          "hom endpoints live over different algebras");
  require(m.rows() == target->dim() && m.cols() == source->dim(),
          "ShapeMismatch", "hom matrix has the wrong shape");
  for (const Vec& g : acting_gens(*source->algebra()))
    require(m.mul(source->action_of(g)) == target->action_of(g).mul(m),
            "NotAHom", "matrix does not intertwine the actions");
}

std::vector<Matrix> hom_space(const Module& m, const Module& n) {
  require(m.algebra() == n.algebra(), "DifferentAlgebras",
          "hom space needs one algebra");
  const FieldSpec f = m.field();
  const int nm = m.dim(), nn = n.dim();
  if (nm == 0 || nn == 0) return {};
  const Algebra& alg = *m.algebra();

  // Idempotent-block parametrisation: an intertwiner preserves the weight
  // spaces of the complete orthogonal idempotent system, so the unknowns are
  // the blocks imr(e) -> imr(e).
  std::vector<Matrix> vb, wb;
  std::vector<std::array<int, 3>> unk;
  for (const Vec& e : alg.idempotents()) {
    Matrix pm = m.action_of(e), pn = n.action_of(e);
    Echelon em(f, nm), en(f, nn);
    for (int j = 0; j < nm; ++j) em.add(pm.col(j));
    for (int j = 0; j < nn; ++j) en.add(pn.col(j));
    if (em.dim() == 0 || en.dim() == 0) continue;
    Matrix u = em.basis_matrix_cols();
    auto c = u.solve_right(pm);
    require(c.has_value(), "Internal", "block coordinates must exist");
    const int b = static_cast<int>(vb.size());
    vb.push_back(en.basis_matrix_cols());
    wb.push_back(c->mul(pm));
    for (int r = 0; r < vb[b].cols(); ++r)
      for (int cc = 0; cc < wb[b].rows(); ++cc) unk.push_back({b, r, cc});
  }
  const int total = static_cast<int>(unk.size());
  if (total == 0) return {};

  // Restrict the block space by the generator constraints one generator at
  // a time; the surviving space shrinks quickly.
  Matrix s = Matrix::identity(f, total);
  for (const Vec& g : constraint_gens(alg)) {
    if (s.cols() == 0) break;
    Matrix gn = n.action_of(g), gm = m.action_of(g);
    std::vector<Matrix> pv, qv;
    for (size_t b = 0; b < vb.size(); ++b) {
      pv.push_back(gn.mul(vb[b]));
      qv.push_back(wb[b].mul(gm));
    }
    Matrix d(f, static_cast<int>(nn) * nm, total);
    for (int t = 0; t < total; ++t) {
      auto [b, r, cc] = unk[t];
      for (int a = 0; a < nn; ++a) {
        const Scalar& pa = pv[b].at(a, r);
        if (pa != 0)
          for (int x = 0; x < nm; ++x) {
            const Scalar& w = wb[b].at(cc, x);
            if (w != 0)
              d.at(a * nm + x, t) = f.add(d.at(a * nm + x, t), f.mul(pa, w));
          }
        const Scalar& va = vb[b].at(a, r);
        if (va != 0)
          for (int x = 0; x < nm; ++x) {
            const Scalar& q = qv[b].at(cc, x);
            if (q != 0)
              d.at(a * nm + x, t) = f.sub(d.at(a * nm + x, t), f.mul(va, q));
          }
      }
    }
    s = s.mul(d.mul(s).kernel_basis());
  }

  std::vector<Matrix> out;
  for (int col = 0; col < s.cols(); ++col) {
    Matrix x(f, nn, nm);
    for (int t = 0; t < total; ++t) {
      const Scalar& cf = s.at(t, col);
      if (cf == 0) continue;
      auto [b, r, cc] = unk[t];
      for (int a = 0; a < nn; ++a) {
        const Scalar& va = vb[b].at(a, r);
        if (va == 0) continue;
        Scalar cv = f.mul(cf, va);
        for (int xx = 0; xx < nm; ++xx) {
          const Scalar& w = wb[b].at(cc, xx);
          if (w != 0) x.at(a, xx) = f.add(x.at(a, xx), f.mul(cv, w));
        }
      }
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::pair<std::shared_ptr<const Algebra>, std::vector<Matrix>> end_algebra(
    const Module& m) {
  require(m.dim() > 0, "ZeroModule",
          "endomorphisms of the zero module have no unit");
  const FieldSpec f = m.field();
  std::vector<Matrix> h = hom_space(m, m);
  const int hd = static_cast<int>(h.size());
  std::vector<Vec> cols;
  for (const Matrix& x : h) cols.push_back(flatten(x));
  Matrix basis = Matrix::from_cols(f, cols);
  // products and the identity, resolved against the basis in one solve
  std::vector<Vec> rhs;
  for (int i = 0; i < hd; ++i)
    for (int j = 0; j < hd; ++j) rhs.push_back(flatten(h[i].mul(h[j])));
  rhs.push_back(flatten(Matrix::identity(f, m.dim())));
  auto sol = basis.solve_right(Matrix::from_cols(f, rhs));
  require(sol.has_value(), "Internal",
          "composition must stay inside the endomorphism space");
  std::vector<std::vector<SparseVec>> mult(hd, std::vector<SparseVec>(hd));
  for (int i = 0; i < hd; ++i)
    for (int j = 0; j < hd; ++j)
      mult[i][j] = to_sparse(sol->col(i * hd + j));
  Vec unit = sol->col(hd * hd);
  std::vector<std::string> labels;
  for (int i = 0; i < hd; ++i) labels.push_back("h" + std::to_string(i));
  auto e = Algebra::from_structure(f, labels, mult, unit, {unit}, {unit}, {});
  return {e, h};
}

Cover projective_cover(const Module& m) {
  auto a = m.algebra();
  const FieldSpec f = m.field();
  const auto& prim = a->primitive_idempotents();
  require(!prim.empty(), "BadIdempotents",
          "covers need primitive idempotents");
  Module::SubQuot t = m.top();
  Cover out{Module::zero(a), Matrix(f, m.dim(), 0),
            std::vector<int>(prim.size(), 0)};
  for (size_t k = 0; k < prim.size(); ++k) {
    Matrix ta = t.mod->action_of(prim[k]);
    Echelon ech(f, t.mod->dim());
    for (int j = 0; j < ta.cols(); ++j) ech.add(ta.col(j));
    const int l = ech.dim();
    out.multiplicities[k] = l;
    if (l == 0) continue;
    Module::SubQuot pa = projective_sub(a, prim[k]);
    Matrix tb = ech.basis_matrix_cols();
    for (int sidx = 0; sidx < l; ++sidx) {
      auto w = t.map.solve_right(Matrix::col_vector(f, tb.col(sidx)));
      require(w.has_value(), "Internal", "top projection is surjective");
      Vec v = m.act(prim[k], w->col(0));
      Matrix blk(f, m.dim(), pa.mod->dim());
      for (int j = 0; j < pa.mod->dim(); ++j)
        blk.set_col(j, m.act(pa.map.col(j), v));
      out.map = out.map.hstack(blk);
      out.proj = out.proj->direct_sum(*pa.mod);
    }
  }
  require(m.dim() == 0 || out.map.rank() == m.dim(), "Internal",
          "cover must be surjective");
  return out;
}

Resolution minimal_projective_resolution(const Module& m, int length) {
  require(length >= 0, "ShapeMismatch", "resolution length must be >= 0");
  Resolution res;
  auto a = m.algebra();
  ModulePtr cur(new Module(m));
  std::optional<Matrix> incl;
  for (int k = 0; k < length; ++k) {
    Cover cov = projective_cover(*cur);
    Matrix diff = incl ? incl->mul(cov.map) : cov.map;
    res.steps.push_back({cov.multiplicities, cov.proj, diff});
    Matrix ker = cov.map.kernel_basis();
    if (ker.cols() == 0) {
      res.syzygy = Module::zero(a);
      res.finished = true;
      return res;
    }
    auto sq = cov.proj->submodule_from_basis(ker);
    cur = sq.mod;
    incl = sq.map;
  }
  res.syzygy = cur;
  res.finished = cur->dim() == 0;
  return res;
}

std::optional<int> proj_dim(const Module& m, int bound) {
  require(bound >= 0, "ShapeMismatch", "bound must be >= 0");
  ModulePtr cur(new Module(m));
  for (int k = 0; k <= bound; ++k) {
    Cover cov = projective_cover(*cur);
    Matrix ker = cov.map.kernel_basis();
    if (ker.cols() == 0) return k;
    if (k == bound) break;
    cur = cov.proj->submodule_from_basis(ker).mod;
  }
  return std::nullopt;
}

ModulePtr dual_module(const Module& m) {
  auto op = m.algebra()->opposite();
  std::vector<Matrix> act;
  act.reserve(op->dim());
  for (int i = 0; i < op->dim(); ++i) act.push_back(m.action(i).transpose());
  return Module::from_action(std::move(op), std::move(act), false);
}

std::optional<int> inj_dim(const Module& m, int bound) {
  return proj_dim(*dual_module(m), bound);
}

bool is_selfinjective(const std::shared_ptr<const Algebra>& a) {
  return inj_dim(*Module::regular(a), 0).has_value();
}

IsoResult is_isomorphic(const Module& m, const Module& n, uint64_t seed) {
  require(m.algebra() == n.algebra(), "DifferentAlgebras",
          "isomorphism test needs one algebra");
  const FieldSpec f = m.field();
  if (m.dim() != n.dim()) return {Certainty::No, std::nullopt};
  const int nd = m.dim();
  if (nd == 0) return {Certainty::Yes, Matrix(f, 0, 0)};
  std::vector<Matrix> h = hom_space(m, n);
  if (h.empty()) return {Certainty::No, std::nullopt};
  const int d = static_cast<int>(h.size());

  // The determinant of a combination is a polynomial of degree <= nd in each
  // coefficient, so scanning a (nd+1)-point grid per coefficient decides
  // whether an invertible combination exists at all.
  bool exhaustive = d <= 4 && (f.p == 0 || f.p > nd);
  long grid = 1;
  if (exhaustive)
    for (int t = 0; t < d && exhaustive; ++t) {
      grid *= nd + 1;
      if (grid > 20000) exhaustive = false;
    }
  if (exhaustive) {
    std::vector<long> c(d, 0);
    while (true) {
      Vec cv;
      for (long x : c) cv.push_back(f.from_long(x));
      Matrix x = combo(f, h, cv, nd);
      if (determinant(x) != 0) return {Certainty::Yes, x};
      int t = 0;
      while (t < d && c[t] == nd) c[t++] = 0;
      if (t == d) break;
      ++c[t];
    }
    return {Certainty::No, std::nullopt};
  }

  std::mt19937_64 rng(seed);
  for (int it = 0; it < 64; ++it) {
    Vec cv;
    for (int t = 0; t < d; ++t) cv.push_back(random_scalar(f, rng));
    Matrix x = combo(f, h, cv, nd);
    if (determinant(x) != 0) return {Certainty::Yes, x};
  }
  return {Certainty::ProbablyNot, std::nullopt};
}

namespace {

// Minimal polynomial of the image of phi in the quotient of the algebra by
// the span of the radical columns.
Poly quotient_min_poly(const Algebra& e, const QuotientSpace& qs,
                       const Vec& phi) {
  const FieldSpec f = e.field();
  Vec cur = e.unit();
  std::vector<Vec> cols;
  Echelon span(f, qs.dim());
  while (true) {
    Vec w = qs.project(cur);
    if (!span.add(w)) {
      Matrix wm = Matrix::from_cols(f, cols);
      auto sol = wm.solve_right(Matrix::col_vector(f, w));
      require(sol.has_value(), "Internal", "power dependence must resolve");
      const int k = static_cast<int>(cols.size());
      std::vector<Scalar> coef(k + 1, f.zero());
      for (int j = 0; j < k; ++j) coef[j] = f.neg(sol->at(j, 0));
      coef[k] = f.one();
      return poly_from(f, coef);
    }
    cols.push_back(w);
    cur = e.mul_vec(phi, cur);
  }
}

// 1 = certified reducible, 0 = certified irreducible, -1 = unknown.
int reducibility(const Poly& m) {
  if (m.degree() <= 1) return 0;
  if (!poly_is_squarefree(m)) return 1;
  const FieldSpec f = m.f;
  Poly mm = poly_monic(m);
  if (f.p > 0) return count_irreducible_factors_mod_p(mm) >= 2 ? 1 : 0;
  if (mm.degree() == 2) {
    Scalar disc = f.sub(f.mul(mm.c[1], mm.c[1]),
                        f.mul(f.from_long(4), mm.c[0]));
    return field_sqrt(f, disc).has_value() ? 1 : 0;
  }
  if (rational_root(mm).has_value()) return 1;
  if (mm.degree() == 4 && quartic_quadratic_split(mm).has_value()) return 1;
  if (irreducible_mod_some_prime(mm, 200)) return 0;
  return -1;
}

}  // namespace

bool is_indecomposable(const Module& m, uint64_t seed) {
  require(m.dim() > 0, "ZeroModule", "the zero module has no summands");
  if (m.dim() == 1) return true;
  auto [e, h] = end_algebra(m);
  const FieldSpec f = e->field();
  const int d = e->dim();
  if (d == 1) return true;
  Matrix rad = e->radical_basis();
  Echelon re(f, d);
  for (int j = 0; j < rad.cols(); ++j) re.add(rad.col(j));
  QuotientSpace qs(f, d, re);
  const int q = qs.dim();
  if (q == 1) return true;

  // The semisimple quotient is a division algebra exactly when every
  // element has an irreducible minimal polynomial; a reducible (or
  // non-squarefree) one certifies a nontrivial idempotent, hence a
  // decomposition.
  std::vector<Vec> cands;
  for (int t = 0; t < d; ++t) cands.push_back(vec_unit(f, d, t));
  if (d <= 12)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        cands.push_back(
            e->mul_vec(vec_unit(f, d, i), vec_unit(f, d, j)));
  std::mt19937_64 rng(seed);
  for (int it = 0; it < 64; ++it) {
    Vec v;
    for (int t = 0; t < d; ++t) v.push_back(random_scalar(f, rng));
    cands.push_back(v);
  }
  for (const Vec& phi : cands) {
    if (vec_is_zero(phi)) continue;
    Poly mp = quotient_min_poly(*e, qs, phi);
    if (mp.degree() <= 1) continue;
    const int r = reducibility(mp);
    if (r == 1) return false;
    if (r == 0 && mp.degree() == q) return true;
  }
  return true;
}

bool factors_through_projective(const ModuleHom& f) {
  f.verify();
  const FieldSpec fs = f.source->field();
  if (f.m.is_zero()) return true;
  Cover cov = projective_cover(*f.target);
  std::vector<Matrix> h = hom_space(*f.source, *cov.proj);
  Echelon ech(fs, f.target->dim() * f.source->dim());
  for (const Matrix& x : h) ech.add(flatten(cov.map.mul(x)));
  return ech.contains(flatten(f.m));
}

int stable_hom_dim(const Module& m, const Module& n) {
  std::vector<Matrix> hmn = hom_space(m, n);
  if (hmn.empty()) return 0;
  const FieldSpec f = m.field();
  Cover cov = projective_cover(n);
  std::vector<Matrix> hmp = hom_space(m, *cov.proj);
  Echelon ech(f, n.dim() * m.dim());
  for (const Matrix& x : hmp) ech.add(flatten(cov.map.mul(x)));
  return static_cast<int>(hmn.size()) - ech.dim();
}

BimodulePtr Bimodule::from_actions(std::shared_ptr<const Algebra> left,
                                   std::shared_ptr<const Algebra> right,
                                   std::vector<Matrix> left_action,
                                   std::vector<Matrix> right_action,
                                   bool check) {
  require(left != nullptr && right != nullptr, "ShapeMismatch",
          "bimodule needs two algebras");
  require(left->field() == right->field(), "ShapeMismatch",
          "bimodule algebras must share the field");
  require(static_cast<int>(left_action.size()) == left->dim() &&
              static_cast<int>(right_action.size()) == right->dim(),
          "ShapeMismatch", "one action matrix per basis element");
  const int d = left_action.empty() ? 0 : left_action[0].rows();
  for (const Matrix& m : left_action)
    require(m.rows() == d && m.cols() == d, "ShapeMismatch",
            "left action matrices must be square of one size");
  for (const Matrix& m : right_action)
    require(m.rows() == d && m.cols() == d, "ShapeMismatch",
            "right action matrices must be square of one size");
  auto b = std::shared_ptr<Bimodule>(new Bimodule());
  b->left_ = std::move(left);
  b->right_ = std::move(right);
  b->dim_ = d;
  b->left_action_ = std::move(left_action);
  b->right_action_ = std::move(right_action);
  if (check) b->verify();
  return b;
}

BimodulePtr Bimodule::regular(std::shared_ptr<const Algebra> a) {
  const FieldSpec f = a->field();
  std::vector<Matrix> la, ra;
  for (int i = 0; i < a->dim(); ++i) {
    Vec e = vec_unit(f, a->dim(), i);
    la.push_back(a->left_mult_matrix(e));
    ra.push_back(a->right_mult_matrix(e));
  }
  return from_actions(a, a, std::move(la), std::move(ra), false);
}

Matrix Bimodule::left_action_of(const Vec& a) const {
  require(static_cast<int>(a.size()) == left_->dim(), "ShapeMismatch",
          "element has wrong length");
  const FieldSpec f = field();
  Matrix r(f, dim_, dim_);
  for (size_t t = 0; t < a.size(); ++t) {
    if (a[t] == 0) continue;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const Scalar& e = left_action_[t].at(i, j);
        if (e != 0) r.at(i, j) = f.add(r.at(i, j), f.mul(a[t], e));
      }
  }
  return r;
}

Matrix Bimodule::right_action_of(const Vec& a) const {
  require(static_cast<int>(a.size()) == right_->dim(), "ShapeMismatch",
          "element has wrong length");
  const FieldSpec f = field();
  Matrix r(f, dim_, dim_);
  for (size_t t = 0; t < a.size(); ++t) {
    if (a[t] == 0) continue;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const Scalar& e = right_action_[t].at(i, j);
        if (e != 0) r.at(i, j) = f.add(r.at(i, j), f.mul(a[t], e));
      }
  }
  return r;
}

void Bimodule::verify() const {
  const FieldSpec f = field();
  require(left_action_of(left_->unit()) == Matrix::identity(f, dim_),
          "NotAnAction", "left unit must act as the identity");
  require(right_action_of(right_->unit()) == Matrix::identity(f, dim_),
          "NotAnAction", "right unit must act as the identity");
  for (const Vec& g : acting_gens(*left_)) {
    Matrix ga = left_action_of(g);
    for (int j = 0; j < left_->dim(); ++j) {
      Vec gj = left_->mul_vec(g, vec_unit(f, left_->dim(), j));
      require(left_action_of(gj) == ga.mul(left_action_[j]), "NotAnAction",
              "left action violates the structure constants");
    }
  }
  for (const Vec& g : acting_gens(*right_)) {
    Matrix ga = right_action_of(g);
    for (int j = 0; j < right_->dim(); ++j) {
      Vec gj = right_->mul_vec(g, vec_unit(f, right_->dim(), j));
      require(right_action_of(gj) == right_action_[j].mul(ga), "NotAnAction",
              "right action violates the structure constants");
    }
  }
  for (const Vec& g : acting_gens(*left_)) {
    Matrix ga = left_action_of(g);
    for (const Vec& hvec : acting_gens(*right_)) {
      Matrix hb = right_action_of(hvec);
      require(ga.mul(hb) == hb.mul(ga), "NotAnAction",
              "outer actions must commute");
    }
  }
}

ModulePtr Bimodule::as_left_module() const {
  return Module::from_action(left_, left_action_, false);
}

ModulePtr Bimodule::as_right_module() const {
  return Module::from_action(right_->opposite(), right_action_, false);
}

ModulePtr Bimodule::as_env_module(
    const std::shared_ptr<const Algebra>& env) const {
  const int nl = left_->dim(), nr = right_->dim();
  require(env->dim() == nl * nr, "ShapeMismatch",
          "enveloping algebra has the wrong dimension");
  std::vector<Matrix> act;
  act.reserve(static_cast<size_t>(nl) * nr);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j)
      act.push_back(left_action_[i].mul(right_action_[j]));
  return Module::from_action(env, std::move(act), false);
}

TensorSpace::TensorSpace(FieldSpec f, int dim_left, int dim_right,
                         const Echelon& balancing)
    : f_(f), dim_left_(dim_left), dim_right_(dim_right) {
  QuotientSpace qs(f, dim_left * dim_right, balancing);
  quot_dim_ = qs.dim();
  proj_ = qs.projection();
  sect_ = qs.section();
}

Vec TensorSpace::pure(const Vec& m, const Vec& n) const {
  require(static_cast<int>(m.size()) == dim_left_ &&
              static_cast<int>(n.size()) == dim_right_,
          "ShapeMismatch", "pure tensor factors have wrong lengths");
  Vec v = vec_zero(f_, dim_left_ * dim_right_);
  for (int i = 0; i < dim_left_; ++i) {
    if (m[i] == 0) continue;
    for (int j = 0; j < dim_right_; ++j)
      if (n[j] != 0) v[i * dim_right_ + j] = f_.mul(m[i], n[j]);
  }
  return proj_.apply(v);
}

namespace {

Echelon tensor_balancing(FieldSpec f, const Bimodule& m,
                         const std::vector<Matrix>& left_of_n, int nn,
                         const Algebra& ring) {
  const int nm = m.dim();
  Echelon ech(f, nm * nn);
  for (const Vec& r : acting_gens(ring)) {
    Matrix rm = m.right_action_of(r);
    Matrix ln(f, nn, nn);
    for (size_t t = 0; t < r.size(); ++t) {
      if (r[t] == 0) continue;
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
          const Scalar& e = left_of_n[t].at(i, j);
          if (e != 0) ln.at(i, j) = f.add(ln.at(i, j), f.mul(r[t], e));
        }
    }
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j < nn; ++j) {
        Vec v = vec_zero(f, nm * nn);
        for (int a = 0; a < nm; ++a) v[a * nn + j] = rm.at(a, i);
        for (int b = 0; b < nn; ++b)
          v[i * nn + b] = f.sub(v[i * nn + b], ln.at(b, j));
        ech.add(v);
      }
  }
  return ech;
}

// proj . (A x I) . sect without materialising the Kronecker product
Matrix transported_left(const TensorSpace& ts, const Matrix& a) {
  const FieldSpec f = ts.projection().field();
  const int nm = ts.left_dim(), nn = ts.right_dim(), td = ts.dim();
  Matrix out(f, td, td);
  for (int s = 0; s < td; ++s) {
    Vec x = ts.section().col(s);
    Vec y = vec_zero(f, nm * nn);
    for (int i = 0; i < nm; ++i)
      for (int k = 0; k < nm; ++k) {
        const Scalar& av = a.at(i, k);
        if (av == 0) continue;
        for (int j = 0; j < nn; ++j) {
          const Scalar& xv = x[k * nn + j];
          if (xv != 0)
            y[i * nn + j] = f.add(y[i * nn + j], f.mul(av, xv));
        }
      }
    out.set_col(s, ts.projection().apply(y));
  }
  return out;
}

// proj . (I x B) . sect, where B is a right action on the second factor
Matrix transported_right(const TensorSpace& ts, const Matrix& b) {
  const FieldSpec f = ts.projection().field();
  const int nm = ts.left_dim(), nn = ts.right_dim(), td = ts.dim();
  Matrix out(f, td, td);
  for (int s = 0; s < td; ++s) {
    Vec x = ts.section().col(s);
    Vec y = vec_zero(f, nm * nn);
    for (int j = 0; j < nn; ++j)
      for (int k = 0; k < nn; ++k) {
        const Scalar& bv = b.at(j, k);
        if (bv == 0) continue;
        for (int i = 0; i < nm; ++i) {
          const Scalar& xv = x[i * nn + k];
          if (xv != 0)
            y[i * nn + j] = f.add(y[i * nn + j], f.mul(bv, xv));
        }
      }
    out.set_col(s, ts.projection().apply(y));
  }
  return out;
}

}  // namespace

std::pair<TensorSpace, ModulePtr> tensor_left(const Bimodule& m,
                                              const Module& n) {
  require(m.right_algebra() == n.algebra(), "DifferentAlgebras",
          "tensor factors must share the ring");
  const FieldSpec f = m.field();
  std::vector<Matrix> ln;
  for (int i = 0; i < n.algebra()->dim(); ++i) ln.push_back(n.action(i));
  Echelon bal = tensor_balancing(f, m, ln, n.dim(), *m.right_algebra());
  TensorSpace ts(f, m.dim(), n.dim(), bal);
  std::vector<Matrix> act;
  for (int i = 0; i < m.left_algebra()->dim(); ++i)
    act.push_back(transported_left(ts, m.left_action(i)));
  auto mod = Module::from_action(m.left_algebra(), std::move(act), false);
  return {ts, mod};
}

std::pair<TensorSpace, BimodulePtr> tensor_bimodule(const Bimodule& m,
                                                    const Bimodule& n) {
  require(m.right_algebra() == n.left_algebra(), "DifferentAlgebras",
          "tensor factors must share the ring");
  const FieldSpec f = m.field();
  std::vector<Matrix> ln;
  for (int i = 0; i < n.left_algebra()->dim(); ++i)
    ln.push_back(n.left_action(i));
  Echelon bal = tensor_balancing(f, m, ln, n.dim(), *m.right_algebra());
  TensorSpace ts(f, m.dim(), n.dim(), bal);
  std::vector<Matrix> la, ra;
  for (int i = 0; i < m.left_algebra()->dim(); ++i)
    la.push_back(transported_left(ts, m.left_action(i)));
  for (int i = 0; i < n.right_algebra()->dim(); ++i)
    ra.push_back(transported_right(ts, n.right_action(i)));
  auto bim = Bimodule::from_actions(m.left_algebra(), n.right_algebra(),
                                    std::move(la), std::move(ra), false);
  return {ts, bim};
}

namespace {

// Bimodule structure on a Hom basis, with the structure maps resolved
// against the basis in one batched solve.
BimodulePtr hom_structure(const FieldSpec& f,
                          const std::vector<Matrix>& basis,
                          const std::shared_ptr<const Algebra>& left_alg,
                          const std::shared_ptr<const Algebra>& right_alg,
                          const std::function<Matrix(int, const Matrix&)>& lact,
                          const std::function<Matrix(int, const Matrix&)>& ract) {
  const int h = static_cast<int>(basis.size());
  const int nl = left_alg->dim(), nr = right_alg->dim();
  if (h == 0)
    return Bimodule::from_actions(left_alg, right_alg,
                                  std::vector<Matrix>(nl, Matrix(f, 0, 0)),
                                  std::vector<Matrix>(nr, Matrix(f, 0, 0)),
                                  false);
  std::vector<Vec> cols;
  for (const Matrix& x : basis) cols.push_back(flatten(x));
  Matrix bm = Matrix::from_cols(f, cols);
  std::vector<Vec> rhs;
  for (int b = 0; b < nl; ++b)
    for (int t = 0; t < h; ++t) rhs.push_back(flatten(lact(b, basis[t])));
  for (int b = 0; b < nr; ++b)
    for (int t = 0; t < h; ++t) rhs.push_back(flatten(ract(b, basis[t])));
  auto sol = bm.solve_right(Matrix::from_cols(f, rhs));
  require(sol.has_value(), "Internal",
          "structure maps must preserve the hom space");
  std::vector<Matrix> la, ra;
  for (int b = 0; b < nl; ++b) {
    Matrix x(f, h, h);
    for (int t = 0; t < h; ++t) x.set_col(t, sol->col(b * h + t));
    la.push_back(std::move(x));
  }
  for (int b = 0; b < nr; ++b) {
    Matrix x(f, h, h);
    for (int t = 0; t < h; ++t) x.set_col(t, sol->col(nl * h + b * h + t));
    ra.push_back(std::move(x));
  }
  return Bimodule::from_actions(left_alg, right_alg, std::move(la),
                                std::move(ra), false);
}

}  // namespace

HomBimodule right_hom_bimodule(const Bimodule& p) {
  const FieldSpec f = p.field();
  auto r = p.right_algebra();
  auto rop = r->opposite();
  auto pmod = p.as_right_module();
  auto basis = hom_space(*pmod, *Module::regular(rop));
  auto bim = hom_structure(
      f, basis, r, p.left_algebra(),
      [&](int b, const Matrix& ht) {
        return r->left_mult_matrix(vec_unit(f, r->dim(), b)).mul(ht);
      },
      [&](int b, const Matrix& ht) { return ht.mul(p.left_action(b)); });
  return {bim, basis};
}

HomBimodule left_hom_bimodule(const Bimodule& p) {
  const FieldSpec f = p.field();
  auto l = p.left_algebra();
  auto basis = hom_space(*p.as_left_module(), *Module::regular(l));
  auto bim = hom_structure(
      f, basis, p.right_algebra(), l,
      [&](int b, const Matrix& ht) { return ht.mul(p.right_action(b)); },
      [&](int b, const Matrix& ht) {
        return l->right_mult_matrix(vec_unit(f, l->dim(), b)).mul(ht);
      });
  return {bim, basis};
}

namespace {

std::optional<DualBasis> dual_basis_solve(const Bimodule& p,
                                          const HomBimodule& hom,
                                          const std::vector<Vec>& gens_in,
                                          bool right_side) {
  const FieldSpec f = p.field();
  const int np = p.dim();
  const int ring = right_side ? p.right_algebra()->dim()
                              : p.left_algebra()->dim();
  std::vector<Vec> gens = gens_in;
  if (gens.empty())
    for (int j = 0; j < np; ++j) gens.push_back(vec_unit(f, np, j));
  for (const Vec& g : gens)
    require(static_cast<int>(g.size()) == np, "ShapeMismatch",
            "generator has wrong length");
  auto side_mod = right_side ? p.as_right_module() : p.as_left_module();
  require(side_mod->invariant_closure(gens).cols() == np, "NotGenerating",
          "the given elements do not generate that side");
  if (np == 0) return DualBasis{};
  const int h = static_cast<int>(hom.basis.size());
  const int g = static_cast<int>(gens.size());
  if (h == 0) return std::nullopt;

  // y[k][j] = b_j acting on x_k from the relevant side
  std::vector<std::vector<Vec>> y(g, std::vector<Vec>(ring));
  for (int k = 0; k < g; ++k)
    for (int j = 0; j < ring; ++j)
      y[k][j] = right_side ? p.right_action(j).apply(gens[k])
                           : p.left_action(j).apply(gens[k]);

  Matrix a(f, np * np, g * h);
  for (int k = 0; k < g; ++k)
    for (int t = 0; t < h; ++t) {
      for (int b = 0; b < np; ++b)
        for (int j = 0; j < ring; ++j) {
          const Scalar& c = hom.basis[t].at(j, b);
          if (c == 0) continue;
          for (int row = 0; row < np; ++row) {
            const Scalar& yv = y[k][j][row];
            if (yv != 0)
              a.at(row * np + b, k * h + t) =
                  f.add(a.at(row * np + b, k * h + t), f.mul(c, yv));
          }
        }
    }
  auto sol = a.solve_right(
      Matrix::col_vector(f, flatten(Matrix::identity(f, np))));
  if (!sol.has_value()) return std::nullopt;
  DualBasis db;
  db.x = gens;
  for (int k = 0; k < g; ++k) {
    Vec coord = vec_zero(f, h);
    for (int t = 0; t < h; ++t) coord[t] = sol->at(k * h + t, 0);
    Matrix fk(f, ring, np);
    for (int t = 0; t < h; ++t) {
      if (coord[t] == 0) continue;
      for (int i = 0; i < ring; ++i)
        for (int j = 0; j < np; ++j) {
          const Scalar& e = hom.basis[t].at(i, j);
          if (e != 0) fk.at(i, j) = f.add(fk.at(i, j), f.mul(coord[t], e));
        }
    }
    db.coords.push_back(coord);
    db.f.push_back(std::move(fk));
  }
  return db;
}

}  // namespace

std::optional<DualBasis> try_right_dual_basis(const Bimodule& p,
                                              const HomBimodule& hom,
                                              const std::vector<Vec>& gens) {
  return dual_basis_solve(p, hom, gens, true);
}

std::optional<DualBasis> try_left_dual_basis(const Bimodule& p,
                                             const HomBimodule& hom,
                                             const std::vector<Vec>& gens) {
  return dual_basis_solve(p, hom, gens, false);
}

DualBasis right_dual_basis(const Bimodule& p, const HomBimodule& hom,
                           const std::vector<Vec>& gens) {
  auto db = try_right_dual_basis(p, hom, gens);
  require(db.has_value(), "NotProjective",
          "no right dual basis: the module is not right projective");
  return *db;
}

CasimirResult casimir_right(const Bimodule& p, const HomBimodule& hom,
                            const std::vector<Vec>& gens) {
  const FieldSpec f = p.field();
  DualBasis db = right_dual_basis(p, hom, gens);
  auto [ts, prod] = tensor_bimodule(p, *hom.bim);
  Vec elem = vec_zero(f, ts.dim());
  for (size_t k = 0; k < db.x.size(); ++k)
    elem = vec_add(f, elem, ts.pure(db.x[k], db.coords[k]));
  return {std::move(ts), std::move(elem), std::move(prod)};
}

CasimirResult casimir_right(const Bimodule& p) {
  HomBimodule hom = right_hom_bimodule(p);
  return casimir_right(p, hom, {});
}

namespace {

std::shared_ptr<const Algebra> scalar_algebra(FieldSpec f) {
  std::vector<std::vector<SparseVec>> mult(1, std::vector<SparseVec>(1));
  mult[0][0] = {{0, f.one()}};
  Vec unit{f.one()};
  return Algebra::from_structure(f, {"1"}, mult, unit, {unit}, {unit}, {});
}

}  // namespace

HomTensorIso hom_tensor_iso(const ModulePtr& m, const ModulePtr& n) {
  require(m != nullptr && n != nullptr, "ShapeMismatch",
          "tensor-hom comparison needs two modules");
  require(m->algebra() == n->algebra(), "DifferentAlgebras",
          "tensor-hom comparison needs one algebra");
  auto r = m->algebra();
  const FieldSpec f = m->field();
  const int nm = m->dim(), nn = n->dim();

  auto sc = scalar_algebra(f);
  std::vector<Matrix> la;
  for (int i = 0; i < r->dim(); ++i) la.push_back(m->action(i));
  auto w = Bimodule::from_actions(r, sc, std::move(la),
                                  {Matrix::identity(f, nm)}, false);
  HomBimodule hb = left_hom_bimodule(*w);
  auto db = try_left_dual_basis(*w, hb, {});
  require(db.has_value(), "NotProjective",
          "tensor-hom comparison needs a projective first argument");

  auto [ts, tmod] = tensor_left(*hb.bim, *n);
  std::vector<Matrix> k = hom_space(*m, *n);
  const int h = static_cast<int>(hb.basis.size());
  const int kd = static_cast<int>(k.size());
  const int td = ts.dim();

  // evaluation images of the tensor basis, resolved against the hom basis
  std::vector<std::vector<Matrix>> acts(h);
  for (int t = 0; t < h; ++t)
    for (int b = 0; b < nm; ++b)
      acts[t].push_back(n->action_of(hb.basis[t].col(b)));
  Matrix fwdimg(f, nn * nm, td);
  for (int s = 0; s < td; ++s) {
    Vec wv = ts.section().col(s);
    Vec y = vec_zero(f, nn * nm);
    for (int t = 0; t < h; ++t)
      for (int j = 0; j < nn; ++j) {
        const Scalar& c = wv[t * nn + j];
        if (c == 0) continue;
        for (int b = 0; b < nm; ++b)
          for (int a = 0; a < nn; ++a) {
            const Scalar& e = acts[t][b].at(a, j);
            if (e != 0) y[a * nm + b] = f.add(y[a * nm + b], f.mul(c, e));
          }
      }
    fwdimg.set_col(s, y);
  }
  Matrix fwd(f, kd, td);
  if (kd > 0) {
    std::vector<Vec> cols;
    for (const Matrix& x : k) cols.push_back(flatten(x));
    auto sol = Matrix::from_cols(f, cols).solve_right(fwdimg);
    require(sol.has_value(), "Internal",
            "evaluation must land in the hom space");
    fwd = *sol;
  } else {
    require(fwdimg.is_zero(), "Internal",
            "evaluation must land in the hom space");
  }

  Matrix inv(f, td, kd);
  for (int u = 0; u < kd; ++u) {
    Vec acc = vec_zero(f, td);
    for (size_t i = 0; i < db->x.size(); ++i)
      acc = vec_add(f, acc, ts.pure(db->coords[i], k[u].apply(db->x[i])));
    inv.set_col(u, acc);
  }
  require(fwd.mul(inv) == Matrix::identity(f, kd) &&
              inv.mul(fwd) == Matrix::identity(f, td),
          "Internal", "tensor-hom comparison maps must be mutually inverse");
  return {td, kd, fwd, inv};
}

}  // namespace prospecies
