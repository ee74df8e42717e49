#include "prospecies/algebra.hpp"

#include <algorithm>
#include <map>

#include "prospecies/polytools.hpp"

namespace prospecies {

namespace {
constexpr size_t kPathEnumerationCap = 500000;
}

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(static_cast<int>(i), v[i]);
  return s;
}

Vec to_dense(FieldSpec f, int n, const SparseVec& s) {
  Vec v = vec_zero(f, n);
  for (const auto& [i, c] : s) v[i] = c;
  return v;
}

Vec Algebra::mul_vec(const Vec& a, const Vec& b) const {
  Vec r = vec_zero(field_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (b[j] == 0) continue;
      Scalar c = field_.mul(a[i], b[j]);
      for (const auto& [k, s] : mult_[i][j])
        r[k] = field_.add(r[k], field_.mul(c, s));
    }
  }
  return r;
}

Matrix Algebra::left_mult_matrix(const Vec& a) const {
  Matrix m(field_, dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < dim_; ++j)
      for (const auto& [k, s] : mult_[i][j])
        m.at(k, j) = field_.add(m.at(k, j), field_.mul(a[i], s));
  }
  return m;
}

Matrix Algebra::right_mult_matrix(const Vec& a) const {
  Matrix m(field_, dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    if (a[j] == 0) continue;
    for (int i = 0; i < dim_; ++i)
      for (const auto& [k, s] : mult_[i][j])
        m.at(k, i) = field_.add(m.at(k, i), field_.mul(a[j], s));
  }
  return m;
}

Matrix Algebra::radical_basis() const {
  require(field_.rational() || field_.p > dim_, "CharTooSmall",
          "trace-form radical needs characteristic 0 or p > dim");
  // tr(L_{b_t}) for every basis element
  Vec tr(dim_, field_.zero());
  for (int t = 0; t < dim_; ++t) {
    Scalar s = field_.zero();
    for (int k = 0; k < dim_; ++k)
      for (const auto& [idx, c] : mult_[t][k])
        if (idx == k) s = field_.add(s, c);
    tr[t] = s;
  }
  Matrix gram(field_, dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Scalar s = field_.zero();
      for (const auto& [t, c] : mult_[i][j])
        s = field_.add(s, field_.mul(c, tr[t]));
      gram.at(i, j) = s;
    }
  return gram.kernel_basis();
}

std::shared_ptr<const Algebra> Algebra::opposite() const {
  if (auto cached = opposite_cache_.lock()) return cached;
  auto op = std::shared_ptr<Algebra>(new Algebra());
  op->field_ = field_;
  op->dim_ = dim_;
  op->labels_ = labels_;
  op->mult_.assign(dim_, std::vector<SparseVec>(dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) op->mult_[i][j] = mult_[j][i];
  op->unit_ = unit_;
  op->idempotents_ = idempotents_;
  op->primitive_idempotents_ = primitive_idempotents_;
  op->generators_ = generators_;
  op->opposite_cache_ = shared_from_this();
  opposite_cache_ = op;
  return op;
}

void Algebra::verify() const {
  const FieldSpec f = field_;
  // unit
  for (int j = 0; j < dim_; ++j) {
    Vec ej = vec_unit(f, dim_, j);
    require(mul_vec(unit_, ej) == ej && mul_vec(ej, unit_) == ej,
            "NotUnital", "unit fails on basis element " + labels_[j]);
  }
  // associativity on basis triples
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Vec ij = to_dense(f, dim_, mult_[i][j]);
      Vec ei = vec_unit(f, dim_, i);
      for (int k = 0; k < dim_; ++k) {
        Vec jk = to_dense(f, dim_, mult_[j][k]);
        Vec ek = vec_unit(f, dim_, k);
        require(mul_vec(ij, ek) == mul_vec(ei, jk), "NotAssociative",
                "associativity fails at (" + labels_[i] + "," + labels_[j] +
                    "," + labels_[k] + ")");
      }
    }
  // idempotent systems
  auto check_system = [&](const std::vector<Vec>& es, const char* what) {
    Vec sum = vec_zero(f, dim_);
    for (size_t a = 0; a < es.size(); ++a) {
      for (size_t b = 0; b < es.size(); ++b) {
        Vec prod = mul_vec(es[a], es[b]);
        if (a == b)
          require(prod == es[a], "BadIdempotents",
                  std::string(what) + ": e*e != e");
        else
          require(vec_is_zero(prod), "BadIdempotents",
                  std::string(what) + ": orthogonality fails");
      }
      sum = vec_add(f, sum, es[a]);
    }
    require(sum == unit_, "BadIdempotents",
            std::string(what) + ": sum is not the unit");
  };
  check_system(idempotents_, "distinguished idempotents");
  check_system(primitive_idempotents_, "primitive idempotents");
}

const Quiver& Algebra::quiver() const {
  require(quiver_.has_value(), "NoQuiver", "algebra has no quiver data");
  return *quiver_;
}

const std::vector<Path>& Algebra::basis_paths() const {
  require(quiver_.has_value(), "NoQuiver", "algebra has no quiver data");
  return basis_paths_;
}

Vec Algebra::reduce_path(const Path& p) const {
  const Quiver& q = quiver();
  if (p.trivial()) return idempotents_[p.vertex];
  Vec acc = idempotents_[q.arrow(p.arrows[0]).source];
  for (int a : p.arrows) {
    // basis position of the arrow path
    int pos = -1;
    for (int i = 0; i < dim_; ++i)
      if (basis_paths_[i].length() == 1 && basis_paths_[i].arrows[0] == a) {
        pos = i;
        break;
      }
    require(pos >= 0, "UnknownLabel", "arrow missing from algebra basis");
    acc = mul_vec(vec_unit(field_, dim_, pos), acc);
  }
  return acc;
}

std::shared_ptr<const Algebra> Algebra::from_structure(
    FieldSpec field, std::vector<std::string> labels,
    std::vector<std::vector<SparseVec>> mult, Vec unit,
    std::vector<Vec> idempotents, std::vector<Vec> primitive_idempotents,
    std::vector<Vec> generators) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->field_ = field;
  a->dim_ = static_cast<int>(labels.size());
  a->labels_ = std::move(labels);
  a->mult_ = std::move(mult);
  a->unit_ = std::move(unit);
  a->idempotents_ = std::move(idempotents);
  a->primitive_idempotents_ = std::move(primitive_idempotents);
  a->generators_ = std::move(generators);
  return a;
}

std::shared_ptr<const Algebra> Algebra::product(
    const std::vector<std::shared_ptr<const Algebra>>& factors) {
  require(!factors.empty(), "BadArgument", "empty product");
  const FieldSpec f = factors[0]->field();
  int dim = 0;
  std::vector<int> offset;
  for (const auto& fac : factors) {
    require(fac->field() == f, "ShapeMismatch", "mixed fields in product");
    offset.push_back(dim);
    dim += fac->dim();
  }
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->field_ = f;
  a->dim_ = dim;
  a->mult_.assign(dim, std::vector<SparseVec>(dim));
  a->unit_ = vec_zero(f, dim);
  auto embed = [&](size_t k, const Vec& v) {
    Vec r = vec_zero(f, dim);
    for (size_t i = 0; i < v.size(); ++i) r[offset[k] + i] = v[i];
    return r;
  };
  for (size_t k = 0; k < factors.size(); ++k) {
    const Algebra& fac = *factors[k];
    for (int i = 0; i < fac.dim(); ++i) {
      a->labels_.push_back("p" + std::to_string(k) + "." + fac.basis_label(i));
      for (int j = 0; j < fac.dim(); ++j) {
        SparseVec s;
        for (const auto& [t, c] : fac.mul_basis(i, j))
          s.emplace_back(offset[k] + t, c);
        a->mult_[offset[k] + i][offset[k] + j] = std::move(s);
      }
    }
    a->unit_ = vec_add(f, a->unit_, embed(k, fac.unit()));
    for (const Vec& e : fac.idempotents())
      a->idempotents_.push_back(embed(k, e));
    for (const Vec& e : fac.primitive_idempotents())
      a->primitive_idempotents_.push_back(embed(k, e));
    for (const Vec& g : fac.generators())
      a->generators_.push_back(embed(k, g));
  }
  return a;
}

std::shared_ptr<const Algebra> Algebra::enveloping(
    std::shared_ptr<const Algebra> left, std::shared_ptr<const Algebra> right) {
  const FieldSpec f = left->field();
  require(right->field() == f, "ShapeMismatch", "mixed fields in enveloping");
  int nl = left->dim(), nr = right->dim();
  int dim = nl * nr;
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->field_ = f;
  a->dim_ = dim;
  a->mult_.assign(dim, std::vector<SparseVec>(dim));
  auto idx = [&](int i, int j) { return i * nr + j; };
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j)
      a->labels_.push_back(left->basis_label(i) + "(x)" +
                           right->basis_label(j));
  // (a(x)b)(c(x)d) = ac (x) db
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j)
      for (int k = 0; k < nl; ++k)
        for (int l = 0; l < nr; ++l) {
          SparseVec s;
          for (const auto& [x, cx] : left->mul_basis(i, k))
            for (const auto& [y, cy] : right->mul_basis(l, j))
              s.emplace_back(idx(x, y), f.mul(cx, cy));
          std::sort(s.begin(), s.end(),
                    [](const auto& p, const auto& q) { return p.first < q.first; });
          a->mult_[idx(i, j)][idx(k, l)] = std::move(s);
        }
  auto tensor_vec = [&](const Vec& u, const Vec& v) {
    Vec r = vec_zero(f, dim);
    for (int i = 0; i < nl; ++i) {
      if (u[i] == 0) continue;
      for (int j = 0; j < nr; ++j)
        if (v[j] != 0) r[idx(i, j)] = f.mul(u[i], v[j]);
    }
    return r;
  };
  a->unit_ = tensor_vec(left->unit(), right->unit());
  for (const Vec& el : left->idempotents())
    for (const Vec& er : right->idempotents())
      a->idempotents_.push_back(tensor_vec(el, er));
  for (const Vec& el : left->primitive_idempotents())
    for (const Vec& er : right->primitive_idempotents())
      a->primitive_idempotents_.push_back(tensor_vec(el, er));
  for (const Vec& g : left->generators())
    a->generators_.push_back(tensor_vec(g, right->unit()));
  for (const Vec& g : right->generators())
    a->generators_.push_back(tensor_vec(left->unit(), g));
  return a;
}

std::shared_ptr<const Algebra> Algebra::bound_quiver(
    FieldSpec f, const BoundQuiverPresentation& pres) {
  const Quiver& q = pres.quiver;
  const int bound = pres.nilpotency_bound;
  require(bound >= 2, "BadArgument", "nilpotency bound must be at least 2");
  // admissibility of the relations
  for (const Relation& r : pres.relations) {
    require(!r.terms.empty(), "NotAdmissible", "empty relation");
    int s = -1, t = -1;
    for (const auto& [c, p] : r.terms) {
      for (size_t k = 0; k < p.arrows.size(); ++k) {
        require(p.arrows[k] >= 0 && p.arrows[k] < q.arrow_count(),
                "UnknownLabel", "relation path uses an unknown arrow");
        require(k == 0 || q.arrow(p.arrows[k - 1]).target ==
                              q.arrow(p.arrows[k]).source,
                "NotComposable", "relation path is not composable");
      }
      require(p.length() >= 2, "NotAdmissible",
              "relation contains the path '" + q.path_label(p) +
                  "' of length < 2");
      int ps = q.path_source(p), pt = q.path_target(p);
      if (s < 0) s = ps, t = pt;
      require(ps == s && pt == t, "NotAdmissible",
              "relation mixes non-parallel paths");
      (void)c;
    }
  }

  // all paths of length <= bound, ordered by (length, label sequence)
  std::vector<Path> paths = q.enumerate_paths(bound);
  require(paths.size() <= kPathEnumerationCap, "TooManyPaths",
          "path enumeration exceeded the implementation cap");
  const int width = static_cast<int>(paths.size());
  std::map<std::string, int> col_of;
  for (int c = 0; c < width; ++c) col_of[q.path_label(paths[c])] = c;
  auto column_of_path = [&](const Path& p) -> int {
    auto it = col_of.find(q.path_label(p));
    return it == col_of.end() ? -1 : it->second;
  };

  // span of truncated products l*r*m inside the path space
  Echelon ideal(f, width);  // natural priority: shorter paths get eliminated
  for (const Relation& r : pres.relations) {
    int rs = q.path_source(r.terms[0].second);
    int rt = q.path_target(r.terms[0].second);
    for (const Path& m : paths) {
      if (q.path_target(m) != rs) continue;
      for (const Path& l : paths) {
        if (q.path_source(l) != rt) continue;
        if (l.length() + m.length() + 2 > bound) continue;
        Vec row = vec_zero(f, width);
        bool nonzero = false;
        for (const auto& [c, p] : r.terms) {
          if (l.length() + p.length() + m.length() > bound)
            continue;  // truncated away
          Path full = q.compose(l, q.compose(p, m));
          int col = column_of_path(full);
          row[col] = f.add(row[col], f.rational() ? c : f.normalize(c));
          nonzero = true;
        }
        if (nonzero) ideal.add(row);
      }
    }
  }

  // surviving paths = non-pivot columns
  std::vector<bool> pivot(width, false);
  for (int c : ideal.pivot_cols()) pivot[c] = true;
  std::vector<int> surv;       // column -> basis position
  std::vector<int> basis_col;  // basis position -> column
  surv.assign(width, -1);
  for (int c = 0; c < width; ++c)
    if (!pivot[c]) {
      surv[c] = static_cast<int>(basis_col.size());
      basis_col.push_back(c);
    }
  for (int c : basis_col)
    require(paths[c].length() < bound, "NotNilpotent",
            "a path of the nilpotency-bound length survives reduction: '" +
                q.path_label(paths[c]) + "'");

  const int dim = static_cast<int>(basis_col.size());
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->field_ = f;
  a->dim_ = dim;
  a->quiver_ = q;
  for (int b = 0; b < dim; ++b) {
    a->basis_paths_.push_back(paths[basis_col[b]]);
    a->labels_.push_back(q.path_label(paths[basis_col[b]]));
  }

  // residue of a path column expressed in the surviving basis
  auto reduced = [&](int col) {
    Vec res = ideal.reduce(vec_unit(f, width, col));
    SparseVec s;
    for (int c = 0; c < width; ++c)
      if (res[c] != 0) s.emplace_back(surv[c], res[c]);
    return s;
  };

  a->mult_.assign(dim, std::vector<SparseVec>(dim));
  for (int i = 0; i < dim; ++i) {
    const Path& p = paths[basis_col[i]];
    for (int j = 0; j < dim; ++j) {
      const Path& m = paths[basis_col[j]];
      if (q.path_target(m) != q.path_source(p)) continue;
      if (p.length() + m.length() >= bound) continue;  // lies in the ideal
      Path full = q.compose(p, m);
      a->mult_[i][j] = reduced(column_of_path(full));
    }
  }

  a->unit_ = vec_zero(f, dim);
  for (int b = 0; b < dim; ++b) {
    if (!a->basis_paths_[b].trivial()) continue;
    Vec e = vec_unit(f, dim, b);
    a->idempotents_.push_back(e);
    a->primitive_idempotents_.push_back(e);
    a->unit_[b] = f.one();
  }
  require(static_cast<int>(a->idempotents_.size()) == q.vertex_count(),
          "NotAdmissible", "a trivial path was eliminated by the relations");
  for (int b = 0; b < dim; ++b)
    if (a->basis_paths_[b].length() == 1)
      a->generators_.push_back(vec_unit(f, dim, b));
  a->verify();
  return a;
}

Poly min_poly_element(const Algebra& a, const Vec& b) {
  const FieldSpec f = a.field();
  Echelon span(f, a.dim());
  std::vector<Vec> powers;  // b^0, b^1, ...
  Vec cur = a.unit();
  for (int k = 0; k <= a.dim(); ++k) {
    if (!span.add(cur)) {
      Matrix pw = Matrix::from_cols(f, powers);
      auto sol = pw.solve_right(Matrix::col_vector(f, cur));
      require(sol.has_value(), "Internal", "minimal polynomial solve failed");
      std::vector<Scalar> cs(k + 1, f.zero());
      for (int i = 0; i < k; ++i) cs[i] = f.neg(sol->at(i, 0));
      cs[k] = f.one();
      return poly_from(f, cs);
    }
    powers.push_back(cur);
    cur = a.mul_vec(cur, b);
  }
  fail("Internal", "minimal polynomial exceeded algebra dimension");
}

}  // namespace prospecies
