#include "prospecies/species.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace prospecies {

namespace {

std::vector<Vec> basis_vectors(FieldSpec f, int n) {
  std::vector<Vec> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(vec_unit(f, n, i));
  return out;
}

bool is_projective(const Module& m) { return proj_dim(m, 0).has_value(); }

Matrix unflatten(FieldSpec f, const Vec& v, int rows, int cols) {
  Matrix m(f, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = v[i * cols + j];
  return m;
}

Vec flatten_mat(const Matrix& m) {
  Vec v = vec_zero(m.field(), m.rows() * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m.at(i, j);
  return v;
}

// rank of m as a free module over ring, via dimension count and a certified
// isomorphism against the free module of that rank
int free_rank(const Module& m, const std::shared_ptr<const Algebra>& ring,
              const std::string& what) {
  const int d = ring->dim();
  if (m.dim() == 0) return 0;
  require(m.dim() % d == 0, "NotLocallyFree",
          what + ": dimension " + std::to_string(m.dim()) +
              " is not a multiple of " + std::to_string(d));
  const int r = m.dim() / d;
  ModulePtr free = Module::regular(ring);
  for (int k = 1; k < r; ++k) free = free->direct_sum(*Module::regular(ring));
  IsoResult iso = is_isomorphic(m, *free, 20260814u);
  require(iso.verdict == Certainty::Yes, "NotLocallyFree",
          what + ": no isomorphism onto the rank-" + std::to_string(r) +
              " free module was found");
  return r;
}

}  // namespace

ProSpeciesPtr ProSpecies::build(
    Quiver quiver, std::vector<std::shared_ptr<const Algebra>> vertex_algebras,
    std::vector<BimodulePtr> arrow_bimodules) {
  require(static_cast<int>(vertex_algebras.size()) == quiver.vertex_count(),
          "ShapeMismatch", "one algebra per vertex expected");
  require(static_cast<int>(arrow_bimodules.size()) == quiver.arrow_count(),
          "ShapeMismatch", "one bimodule per arrow expected");
  require(quiver.vertex_count() > 0, "ShapeMismatch", "empty quiver");
  const FieldSpec f = vertex_algebras[0]->field();
  for (const auto& a : vertex_algebras)
    require(a->field() == f, "ShapeMismatch",
            "vertex algebras over different fields");

  auto s = std::shared_ptr<ProSpecies>(new ProSpecies());
  s->quiver_ = std::move(quiver);
  s->field_ = f;
  s->algebras_ = std::move(vertex_algebras);
  for (int a = 0; a < s->quiver_.arrow_count(); ++a) {
    const Arrow& ar = s->quiver_.arrow(a);
    const BimodulePtr& bim = arrow_bimodules[a];
    require(bim->left_algebra() == s->algebras_[ar.target] &&
                bim->right_algebra() == s->algebras_[ar.source],
            "ShapeMismatch",
            "arrow " + ar.label +
                " carries a bimodule whose sides do not match its endpoints");
    ArrowData data;
    data.bim = bim;
    data.right_hom = right_hom_bimodule(*bim);
    std::vector<Vec> gens = basis_vectors(f, bim->dim());
    auto rd = try_right_dual_basis(*bim, data.right_hom, gens);
    require(rd.has_value(), "NotProjectiveRight",
            "arrow " + ar.label +
                " is not projective as a right module over its source");
    data.right_dual = std::move(*rd);
    data.left_hom = left_hom_bimodule(*bim);
    auto ld = try_left_dual_basis(*bim, data.left_hom, gens);
    require(ld.has_value(), "NotProjectiveLeft",
            "arrow " + ar.label +
                " is not projective as a left module over its target");
    data.left_dual = std::move(*ld);
    s->arrows_.push_back(std::move(data));
  }
  return s;
}

Valuation valuation(const ProSpecies& s) {
  Valuation v;
  for (int i = 0; i < s.quiver().vertex_count(); ++i)
    v.vertex_dims.push_back(s.vertex_algebra(i)->dim());
  for (int a = 0; a < s.quiver().arrow_count(); ++a) {
    const Arrow& ar = s.quiver().arrow(a);
    const Bimodule& bim = *s.arrow_bimodule(a);
    int right_rank = free_rank(*bim.as_right_module(),
                               bim.right_algebra()->opposite(),
                               "arrow " + ar.label + " (right side)");
    int left_rank = free_rank(*bim.as_left_module(), bim.left_algebra(),
                              "arrow " + ar.label + " (left side)");
    require(right_rank * v.vertex_dims[ar.source] ==
                left_rank * v.vertex_dims[ar.target],
            "InternalError", "valuation dimension count mismatch");
    v.arrow_ranks.emplace_back(right_rank, left_rank);
  }
  return v;
}

int TensorAlgebra::block_index(const Path& p) const {
  for (size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].path == p) return static_cast<int>(b);
  fail("BadArgument", "no basis block for path " + species->quiver().path_label(p));
}

Vec TensorAlgebra::embed(int block, const Vec& local) const {
  const PathBlock& b = blocks[block];
  require(static_cast<int>(local.size()) == b.dim, "ShapeMismatch",
          "component vector has the wrong length");
  Vec out = vec_zero(species->field(), dim());
  for (int k = 0; k < b.dim; ++k) out[b.offset + k] = local[k];
  return out;
}

Vec TensorAlgebra::component(int block, const Vec& global) const {
  const PathBlock& b = blocks[block];
  Vec out = vec_zero(species->field(), b.dim);
  for (int k = 0; k < b.dim; ++k) out[k] = global[b.offset + k];
  return out;
}

Vec TensorAlgebra::idempotent(int v) const {
  return embed(vertex_block[v], species->vertex_algebra(v)->unit());
}

BlockTable::BlockTable(ProSpeciesPtr s)
    : species_(std::move(s)),
      vertex_block_(species_->quiver().vertex_count(), -1) {}

int BlockTable::find(const Path& p) const {
  auto it = index_.find(key_of(p));
  return it == index_.end() ? -1 : it->second;
}

int BlockTable::index_of(const Path& p) const {
  const int i = find(p);
  require(i >= 0, "BadArgument",
          "no basis block for path " + species_->quiver().path_label(p));
  return i;
}

int BlockTable::add_path(const Path& p, int dim_cap) {
  require(find(p) < 0, "BadArgument", "duplicate path block");
  const Quiver& q = species_->quiver();
  PathBlock b;
  b.path = p;
  b.offset = total_;
  if (p.trivial()) {
    b.bim = Bimodule::regular(species_->vertex_algebra(p.vertex));
    vertex_block_[p.vertex] = size();
  } else if (p.length() == 1) {
    b.bim = species_->arrow_bimodule(p.arrows[0]);
  } else {
    Path prefix = p;
    prefix.arrows.pop_back();
    prefix.vertex = q.path_source(p);
    b.prefix = find(prefix);
    require(b.prefix >= 0, "InternalError", "missing prefix block");
    auto [ts, bim] =
        tensor_bimodule(*species_->arrow_bimodule(p.arrows.back()),
                        *blocks_[b.prefix].bim);
    b.space = std::move(ts);
    b.bim = std::move(bim);
  }
  b.dim = b.bim->dim();
  total_ += b.dim;
  require(total_ <= dim_cap, "TooLarge",
          "tensor algebra exceeds the size guard of " +
              std::to_string(dim_cap));
  index_.emplace(key_of(p), size());
  blocks_.push_back(std::move(b));
  return size() - 1;
}

int BlockTable::target_of(int qi, int pi) const {
  const Quiver& q = species_->quiver();
  const Path& later = blocks_[qi].path;
  const Path& first = blocks_[pi].path;
  if (q.path_source(later) != q.path_target(first)) return -1;
  if (later.trivial()) return pi;
  if (first.trivial()) return qi;
  return find(q.compose(later, first));
}

// A single arrow on the left is exactly the cached balanced-tensor
// projection; longer left factors peel their last arrow through the section
// and recurse on the shorter concatenation.
const Matrix& BlockTable::product(int qi, int pi) {
  const auto key = std::make_pair(qi, pi);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const Quiver& q = species_->quiver();
  const FieldSpec f = species_->field();
  const PathBlock& bq = blocks_[qi];
  const PathBlock& bp = blocks_[pi];
  const int target = target_of(qi, pi);
  require(target >= 0, "BadArgument", "blocks do not compose");
  Matrix out(f, blocks_[target].dim, bq.dim * bp.dim);
  if (bq.path.trivial() && bp.path.trivial()) {
    const auto& alg = species_->vertex_algebra(bq.path.vertex);
    for (int i = 0; i < bq.dim; ++i)
      for (int j = 0; j < bp.dim; ++j)
        for (const auto& [idx, c] : alg->mul_basis(i, j))
          out.at(idx, i * bp.dim + j) = c;
  } else if (bq.path.trivial()) {
    for (int i = 0; i < bq.dim; ++i)
      for (int j = 0; j < bp.dim; ++j)
        out.set_col(i * bp.dim + j, bp.bim->left_action(i).col(j));
  } else if (bp.path.trivial()) {
    for (int i = 0; i < bq.dim; ++i)
      for (int j = 0; j < bp.dim; ++j)
        out.set_col(i * bp.dim + j, bq.bim->right_action(j).col(i));
  } else if (bq.path.length() == 1) {
    out = blocks_[target].space->projection();
  } else {
    const int mid = bq.prefix;
    const Matrix& inner = product(mid, pi);  // dim(q'p) x (dq' * dp)
    const int qp2 = target_of(mid, pi);      // block of q'p
    require(qp2 >= 0, "InternalError", "missing intermediate block");
    const Matrix& outer = blocks_[target].space->projection();
    const int dpeel = species_->arrow_bimodule(bq.path.arrows.back())->dim();
    const int dmid = blocks_[mid].dim;
    const int dinner = blocks_[qp2].dim;
    for (int j = 0; j < bp.dim; ++j) {
      Matrix d(f, dmid, dinner);
      for (int r = 0; r < dmid; ++r)
        for (int k = 0; k < dinner; ++k)
          d.at(r, k) = inner.at(k, r * bp.dim + j);
      for (int i = 0; i < bq.dim; ++i) {
        Matrix w = unflatten(f, bq.space->section().col(i), dpeel, dmid);
        out.set_col(i * bp.dim + j, outer.apply(flatten_mat(w.mul(d))));
      }
    }
  }
  return cache_.emplace(key, std::move(out)).first->second;
}

TensorAlgebra tensor_algebra(const ProSpeciesPtr& s, int dim_cap) {
  const Quiver& q = s->quiver();
  require(q.is_acyclic(), "CyclicQuiver",
          "the tensor algebra is infinite dimensional over a quiver with "
          "oriented cycles");
  const FieldSpec f = s->field();

  BlockTable tab(s);
  for (const Path& p : q.all_paths()) tab.add_path(p, dim_cap);

  TensorAlgebra T;
  T.species = s;
  T.blocks = tab.blocks();
  T.vertex_block = tab.vertex_blocks();
  const int n = tab.total();

  std::vector<std::string> labels;
  for (const PathBlock& b : T.blocks) {
    if (b.path.trivial()) {
      const auto& alg = s->vertex_algebra(b.path.vertex);
      for (int k = 0; k < b.dim; ++k)
        labels.push_back(q.vertex_label(b.path.vertex) + ":" +
                         alg->basis_label(k));
    } else {
      for (int k = 0; k < b.dim; ++k)
        labels.push_back(q.path_label(b.path) + ":" + std::to_string(k));
    }
    for (int k = 0; k < b.dim; ++k) T.degree.push_back(b.path.length());
  }

  std::vector<std::vector<SparseVec>> mult(n, std::vector<SparseVec>(n));
  const int nb = static_cast<int>(T.blocks.size());
  for (int qi = 0; qi < nb; ++qi) {
    const PathBlock& bq = T.blocks[qi];
    for (int pi = 0; pi < nb; ++pi) {
      const PathBlock& bp = T.blocks[pi];
      const int target = tab.target_of(qi, pi);
      if (target < 0) continue;
      const Matrix& cm = tab.product(qi, pi);
      for (int i = 0; i < bq.dim; ++i)
        for (int j = 0; j < bp.dim; ++j) {
          SparseVec sv = to_sparse(cm.col(i * bp.dim + j));
          for (auto& [idx, c] : sv) idx += T.blocks[target].offset;
          mult[bq.offset + i][bp.offset + j] = std::move(sv);
        }
    }
  }

  Vec unit = vec_zero(f, n);
  std::vector<Vec> idempotents;
  std::vector<Vec> primitives;
  std::vector<Vec> generators;
  for (int v = 0; v < q.vertex_count(); ++v) {
    const PathBlock& b = T.blocks[T.vertex_block[v]];
    const auto& alg = s->vertex_algebra(v);
    Vec eps = vec_zero(f, n);
    for (int k = 0; k < b.dim; ++k) {
      eps[b.offset + k] = alg->unit()[k];
      unit[b.offset + k] = alg->unit()[k];
    }
    idempotents.push_back(std::move(eps));
  }
  for (int v = 0; v < q.vertex_count(); ++v) {
    const int bi = T.vertex_block[v];
    const auto& alg = s->vertex_algebra(v);
    for (const Vec& e : alg->primitive_idempotents())
      primitives.push_back(T.embed(bi, e));
    // the vertex idempotent systems are needed alongside the proper
    // generators so that degree zero is generated blockwise
    for (const Vec& e : alg->idempotents()) generators.push_back(T.embed(bi, e));
    for (const Vec& g : alg->generators()) generators.push_back(T.embed(bi, g));
  }
  for (int bi = 0; bi < nb; ++bi)
    if (T.blocks[bi].path.length() == 1)
      for (int k = 0; k < T.blocks[bi].dim; ++k)
        generators.push_back(T.embed(bi, vec_unit(f, T.blocks[bi].dim, k)));

  T.algebra = Algebra::from_structure(f, std::move(labels), std::move(mult),
                                      std::move(unit), std::move(idempotents),
                                      std::move(primitives),
                                      std::move(generators));
  T.algebra->verify();
  return T;
}

int tensor_dim_oracle(const ProSpecies& s) {
  int total = 0;
  for (const Path& p : s.quiver().all_paths()) {
    if (p.trivial()) {
      total += s.vertex_algebra(p.vertex)->dim();
      continue;
    }
    ModulePtr cur = s.arrow_bimodule(p.arrows[0])->as_left_module();
    for (int k = 1; k < p.length(); ++k)
      cur = tensor_left(*s.arrow_bimodule(p.arrows[k]), *cur).second;
    total += cur->dim();
  }
  return total;
}

Representation Representation::build(ProSpeciesPtr s,
                                     std::vector<ModulePtr> vertex_modules,
                                     std::vector<Matrix> arrow_maps) {
  const Quiver& q = s->quiver();
  require(static_cast<int>(vertex_modules.size()) == q.vertex_count(),
          "ShapeMismatch", "one module per vertex expected");
  require(static_cast<int>(arrow_maps.size()) == q.arrow_count(),
          "ShapeMismatch", "one map per arrow expected");
  for (int v = 0; v < q.vertex_count(); ++v)
    require(vertex_modules[v]->algebra() == s->vertex_algebra(v),
            "ShapeMismatch",
            "module at vertex " + q.vertex_label(v) +
                " lives over the wrong algebra");

  Representation r;
  r.species = s;
  r.vertex = std::move(vertex_modules);
  for (int a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    auto [ts, dom] = tensor_left(*s->arrow_bimodule(a), *r.vertex[ar.source]);
    require(arrow_maps[a].rows() == r.vertex[ar.target]->dim() &&
                arrow_maps[a].cols() == dom->dim(),
            "ShapeMismatch", "arrow map " + ar.label + " has the wrong shape");
    ModuleHom h{dom, r.vertex[ar.target], arrow_maps[a]};
    h.verify();
    r.arrow_space.push_back(std::move(ts));
    r.arrow_domain.push_back(std::move(dom));
    r.arrow_map.push_back(std::move(arrow_maps[a]));
  }
  return r;
}

Representation Representation::zero(ProSpeciesPtr s) {
  std::vector<ModulePtr> mods;
  for (int v = 0; v < s->quiver().vertex_count(); ++v)
    mods.push_back(Module::zero(s->vertex_algebra(v)));
  std::vector<Matrix> maps;
  const FieldSpec f = s->field();
  for (int a = 0; a < s->quiver().arrow_count(); ++a)
    maps.emplace_back(f, 0, 0);
  return build(std::move(s), std::move(mods), std::move(maps));
}

int Representation::total_dim() const {
  int d = 0;
  for (const ModulePtr& m : vertex) d += m->dim();
  return d;
}

int Representation::vertex_offset(int v) const {
  int d = 0;
  for (int w = 0; w < v; ++w) d += vertex[w]->dim();
  return d;
}

void Representation::verify() const {
  const Quiver& q = species->quiver();
  for (int a = 0; a < q.arrow_count(); ++a) {
    ModuleHom h{arrow_domain[a], vertex[q.arrow(a).target], arrow_map[a]};
    h.verify();
  }
}

ModulePtr rep_to_module(const TensorAlgebra& T, const Representation& M) {
  require(M.species == T.species, "ShapeMismatch",
          "representation belongs to a different pro-species");
  const Quiver& q = T.species->quiver();
  const FieldSpec f = T.species->field();
  const int D = M.total_dim();

  // per-arrow action on pure tensors, in ambient (arrow basis x source
  // module basis) coordinates
  std::vector<Matrix> act1;
  for (int a = 0; a < q.arrow_count(); ++a)
    act1.push_back(M.arrow_map[a].mul(M.arrow_space[a].projection()));

  // per-block bilinear action: dim(M_target) x (block dim * dim(M_source))
  std::vector<Matrix> act(T.blocks.size(), Matrix(f, 0, 0));
  for (size_t bi = 0; bi < T.blocks.size(); ++bi) {
    const PathBlock& b = T.blocks[bi];
    if (b.path.trivial()) continue;
    if (b.path.length() == 1) {
      act[bi] = act1[b.path.arrows[0]];
      continue;
    }
    const int peel = b.path.arrows.back();
    const int src = q.path_source(b.path);
    const int dsrc = M.vertex[src]->dim();
    const int dpeel = T.species->arrow_bimodule(peel)->dim();
    const int dmid = T.blocks[b.prefix].dim;
    const Matrix& inner = act[b.prefix];
    const int dmidmod = M.vertex[q.path_target(T.blocks[b.prefix].path)]->dim();
    Matrix out(f, M.vertex[q.path_target(b.path)]->dim(), b.dim * dsrc);
    for (int k = 0; k < b.dim; ++k) {
      Matrix w = unflatten(f, b.space->section().col(k), dpeel, dmid);
      for (int m = 0; m < dsrc; ++m) {
        Matrix vm(f, dmid, dmidmod);
        for (int jp = 0; jp < dmid; ++jp)
          vm.set_row(jp, inner.col(jp * dsrc + m));
        out.set_col(k * dsrc + m,
                    act1[peel].apply(flatten_mat(w.mul(vm))));
      }
    }
    act[bi] = std::move(out);
  }

  std::vector<Matrix> actions;
  for (size_t bi = 0; bi < T.blocks.size(); ++bi) {
    const PathBlock& b = T.blocks[bi];
    for (int k = 0; k < b.dim; ++k) {
      Matrix A(f, D, D);
      if (b.path.trivial()) {
        const int off = M.vertex_offset(b.path.vertex);
        const Matrix& loc = M.vertex[b.path.vertex]->action(k);
        for (int i = 0; i < loc.rows(); ++i)
          for (int j = 0; j < loc.cols(); ++j) A.at(off + i, off + j) = loc.at(i, j);
      } else {
        const int src = q.path_source(b.path);
        const int tgt = q.path_target(b.path);
        const int soff = M.vertex_offset(src);
        const int toff = M.vertex_offset(tgt);
        const int dsrc = M.vertex[src]->dim();
        for (int m = 0; m < dsrc; ++m) {
          Vec col = act[bi].col(k * dsrc + m);
          for (size_t r = 0; r < col.size(); ++r)
            A.at(toff + static_cast<int>(r), soff + m) = col[r];
        }
      }
      actions.push_back(std::move(A));
    }
  }
  return Module::from_action(T.algebra, std::move(actions), true);
}

RepOfModule restrict_to_rep(const std::shared_ptr<const Algebra>& algebra,
                            const ProSpeciesPtr& species,
                            const std::vector<int>& vertex_offset,
                            const std::vector<int>& arrow_offset,
                            const ModulePtr& V) {
  require(V->algebra() == algebra, "ShapeMismatch",
          "module lives over a different algebra");
  const Quiver& q = species->quiver();
  const FieldSpec f = species->field();
  const int D = V->dim();
  const int n = algebra->dim();

  const auto embed_at = [&](int off, const Vec& local) {
    Vec out = vec_zero(f, n);
    for (size_t k = 0; k < local.size(); ++k)
      out[off + static_cast<int>(k)] = local[k];
    return out;
  };

  std::vector<Matrix> incl;
  std::vector<ModulePtr> mods;
  for (int v = 0; v < q.vertex_count(); ++v) {
    const auto& alg = species->vertex_algebra(v);
    Matrix proj = V->action_of(embed_at(vertex_offset[v], alg->unit()));
    Echelon ech(f, D);
    for (int j = 0; j < D; ++j) ech.add(proj.col(j));
    Matrix b = ech.basis_matrix_cols();
    std::vector<Matrix> actions;
    for (int k = 0; k < alg->dim(); ++k) {
      Matrix img =
          V->action_of(embed_at(vertex_offset[v], vec_unit(f, alg->dim(), k)))
              .mul(b);
      auto coords = b.solve_right(img);
      require(coords.has_value(), "InternalError",
              "idempotent component is not invariant");
      actions.push_back(std::move(*coords));
    }
    mods.push_back(Module::from_action(alg, std::move(actions), true));
    incl.push_back(std::move(b));
  }

  std::vector<Matrix> maps;
  for (int a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    const int da = species->arrow_bimodule(a)->dim();
    const int di = mods[ar.source]->dim();
    Matrix amb(f, D, da * di);
    for (int u = 0; u < da; ++u) {
      Matrix img = V->action_of(embed_at(arrow_offset[a], vec_unit(f, da, u)))
                       .mul(incl[ar.source]);
      for (int m = 0; m < di; ++m) amb.set_col(u * di + m, img.col(m));
    }
    auto coords = incl[ar.target].solve_right(amb);
    require(coords.has_value(), "InternalError",
            "arrow action leaves the target component");
    auto [ts, dom] = tensor_left(*species->arrow_bimodule(a),
                                 *mods[ar.source]);
    Matrix mp = coords->mul(ts.section());
    require(mp.mul(ts.projection()) == *coords, "InternalError",
            "arrow action does not descend to the balanced tensor");
    maps.push_back(std::move(mp));
  }

  RepOfModule out{Representation::build(species, std::move(mods),
                                        std::move(maps)),
                  std::move(incl)};
  return out;
}

RepOfModule module_to_rep(const TensorAlgebra& T, const ModulePtr& V) {
  require(V->algebra() == T.algebra, "ShapeMismatch",
          "module lives over a different tensor algebra");
  std::vector<int> voff, aoff;
  for (int v = 0; v < T.species->quiver().vertex_count(); ++v)
    voff.push_back(T.blocks[T.vertex_block[v]].offset);
  for (int a = 0; a < T.species->quiver().arrow_count(); ++a)
    aoff.push_back(T.blocks[T.block_index(Path{-1, {a}})].offset);
  return restrict_to_rep(T.algebra, T.species, voff, aoff, V);
}

bool is_locally_projective(const Representation& M) {
  for (const ModulePtr& m : M.vertex)
    if (!is_projective(*m)) return false;
  return true;
}

namespace {

// T eps_i as a (tensor algebra, vertex algebra) bimodule: the span of the
// blocks of all paths starting at the vertex, with the global index list
// returned alongside.
std::pair<BimodulePtr, std::vector<int>> vertex_projective_bimodule(
    const TensorAlgebra& T, int v) {
  const Quiver& q = T.species->quiver();
  const FieldSpec f = T.species->field();
  std::vector<int> members;
  for (const PathBlock& b : T.blocks)
    if (q.path_source(b.path) == v)
      for (int k = 0; k < b.dim; ++k) members.push_back(b.offset + k);
  const int d = static_cast<int>(members.size());
  const int n = T.algebra->dim();

  auto restrict_to = [&](const Matrix& big) {
    Matrix m(f, d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m.at(i, j) = big.at(members[i], members[j]);
    return m;
  };

  std::vector<Matrix> la, ra;
  for (int t = 0; t < n; ++t)
    la.push_back(restrict_to(T.algebra->left_mult_matrix(vec_unit(f, n, t))));
  const auto& alg = T.species->vertex_algebra(v);
  for (int k = 0; k < alg->dim(); ++k)
    ra.push_back(restrict_to(T.algebra->right_mult_matrix(
        T.embed(T.vertex_block[v], vec_unit(f, alg->dim(), k)))));
  return {Bimodule::from_actions(T.algebra, alg, std::move(la), std::move(ra)),
          std::move(members)};
}

}  // namespace

StandardResolution standard_resolution(const TensorAlgebra& T,
                                       const Representation& M) {
  require(M.species == T.species, "ShapeMismatch",
          "representation belongs to a different pro-species");
  require(is_locally_projective(M), "NotLocallyProjective",
          "the standard complex is a resolution only for locally projective "
          "representations");
  const Quiver& q = T.species->quiver();
  const FieldSpec f = T.species->field();

  StandardResolution r;
  r.module = rep_to_module(T, M);

  std::vector<BimodulePtr> tei(q.vertex_count());
  std::vector<std::vector<int>> members(q.vertex_count());
  for (int v = 0; v < q.vertex_count(); ++v) {
    auto [bim, mem] = vertex_projective_bimodule(T, v);
    tei[v] = std::move(bim);
    members[v] = std::move(mem);
  }

  std::vector<TensorSpace> ts0;
  std::vector<ModulePtr> p0_parts;
  r.p0_offsets.push_back(0);
  for (int v = 0; v < q.vertex_count(); ++v) {
    auto [ts, mod] = tensor_left(*tei[v], *M.vertex[v]);
    ts0.push_back(std::move(ts));
    p0_parts.push_back(std::move(mod));
    r.p0_offsets.push_back(r.p0_offsets.back() + p0_parts.back()->dim());
  }
  std::vector<TensorSpace> ts1;
  std::vector<ModulePtr> p1_parts;
  r.p1_offsets.push_back(0);
  for (int a = 0; a < q.arrow_count(); ++a) {
    auto [ts, mod] = tensor_left(*tei[q.arrow(a).target], *M.arrow_domain[a]);
    ts1.push_back(std::move(ts));
    p1_parts.push_back(std::move(mod));
    r.p1_offsets.push_back(r.p1_offsets.back() + p1_parts.back()->dim());
  }

  ModulePtr p0 = Module::zero(T.algebra);
  for (const ModulePtr& part : p0_parts) p0 = p0->direct_sum(*part);
  ModulePtr p1 = Module::zero(T.algebra);
  for (const ModulePtr& part : p1_parts) p1 = p1->direct_sum(*part);
  r.p0 = p0;
  r.p1 = p1;

  const int n = T.algebra->dim();
  Matrix aug(f, r.module->dim(), p0->dim());
  for (int v = 0; v < q.vertex_count(); ++v) {
    const int moff = M.vertex_offset(v);
    const int dm = M.vertex[v]->dim();
    for (int k = 0; k < p0_parts[v]->dim(); ++k) {
      Vec amb = ts0[v].section().col(k);
      Vec out = vec_zero(f, r.module->dim());
      for (size_t t = 0; t < amb.size(); ++t) {
        if (amb[t] == 0) continue;
        const int rr = static_cast<int>(t) / dm;
        const int m = static_cast<int>(t) % dm;
        Vec col = r.module->action(members[v][rr]).col(moff + m);
        out = vec_add(f, out, vec_scale(f, amb[t], col));
      }
      for (size_t i = 0; i < out.size(); ++i)
        aug.at(static_cast<int>(i), r.p0_offsets[v] + k) = out[i];
    }
  }

  Matrix d(f, p0->dim(), p1->dim());
  for (int a = 0; a < q.arrow_count(); ++a) {
    const Arrow& ar = q.arrow(a);
    const int src = ar.source, tgt = ar.target;
    const int ddom = M.arrow_domain[a]->dim();
    const int dsrc = M.vertex[src]->dim();
    const int bi = T.block_index(Path{-1, {a}});
    const int da = T.blocks[bi].dim;
    for (int k = 0; k < p1_parts[a]->dim(); ++k) {
      Vec outer = ts1[a].section().col(k);
      Vec col = vec_zero(f, p0->dim());
      for (size_t t = 0; t < outer.size(); ++t) {
        if (outer[t] == 0) continue;
        const int rr = static_cast<int>(t) / ddom;
        const int u = static_cast<int>(t) % ddom;
        // p (x) M_a(h (x) m), negated
        Vec w = M.arrow_map[a].col(u);
        Vec pur = ts0[tgt].pure(
            vec_unit(f, static_cast<int>(members[tgt].size()), rr), w);
        for (size_t i = 0; i < pur.size(); ++i)
          col[r.p0_offsets[tgt] + i] =
              f.normalize(col[r.p0_offsets[tgt] + i] - outer[t] * pur[i]);
        // ph (x) m over a section representative of h (x) m
        Vec rep = M.arrow_space[a].section().col(u);
        for (size_t t2 = 0; t2 < rep.size(); ++t2) {
          if (rep[t2] == 0) continue;
          const int h = static_cast<int>(t2) / dsrc;
          const int m = static_cast<int>(t2) % dsrc;
          Vec prod = T.algebra->mul_vec(vec_unit(f, n, members[tgt][rr]),
                                        T.embed(bi, vec_unit(f, da, h)));
          Vec ph = vec_zero(f, static_cast<int>(members[src].size()));
          for (size_t i = 0; i < ph.size(); ++i) ph[i] = prod[members[src][i]];
          Vec pur2 = ts0[src].pure(ph, vec_unit(f, dsrc, m));
          for (size_t i = 0; i < pur2.size(); ++i)
            col[r.p0_offsets[src] + i] = f.normalize(
                col[r.p0_offsets[src] + i] + outer[t] * rep[t2] * pur2[i]);
        }
      }
      for (size_t i = 0; i < col.size(); ++i)
        d.at(static_cast<int>(i), r.p1_offsets[a] + k) = col[i];
    }
  }

  ModuleHom dh{p1, p0, d};
  dh.verify();
  ModuleHom ah{p0, r.module, aug};
  ah.verify();
  require(aug.mul(d).is_zero(), "InternalError",
          "standard complex fails to compose to zero");
  require(aug.rank() == r.module->dim(), "InternalError",
          "standard complex augmentation is not surjective");
  require(d.rank() == p1->dim(), "InternalError",
          "standard complex differential is not injective");
  require(p0->dim() == p1->dim() + r.module->dim(), "InternalError",
          "standard complex is not exact in the middle");
  r.d = std::move(d);
  r.aug = std::move(aug);
  return r;
}

bool is_n_gorenstein(const std::shared_ptr<const Algebra>& a, int n) {
  require(n >= 0, "BadArgument", "negative Gorenstein bound");
  if (!inj_dim(*Module::regular(a), n).has_value()) return false;
  ModulePtr dual_of_right_regular =
      dual_module(*Module::regular(a->opposite()));
  return proj_dim(*dual_of_right_regular, n).has_value();
}

bool GorensteinReport::all_agree() const {
  return pd_le_succ == pd_finite && pd_finite == id_le_succ &&
         id_le_succ == id_finite && id_finite == local_pd &&
         local_pd == local_id;
}

GorensteinReport gorenstein_conditions(const TensorAlgebra& T, int n,
                                       const ModulePtr& U, int finite_bound) {
  const Quiver& q = T.species->quiver();
  for (int v = 0; v < q.vertex_count(); ++v)
    require(is_n_gorenstein(T.species->vertex_algebra(v), n),
            "NotLocallyGorenstein",
            "vertex " + q.vertex_label(v) +
                " fails the Gorenstein bound n = " + std::to_string(n));
  require(U->algebra() == T.algebra, "ShapeMismatch",
          "module lives over a different tensor algebra");

  GorensteinReport rep;
  rep.n = n;
  rep.finite_bound = std::max(finite_bound, n + 1);
  rep.pd_le_succ = proj_dim(*U, n + 1).has_value();
  rep.pd_finite = proj_dim(*U, rep.finite_bound).has_value();
  rep.id_le_succ = inj_dim(*U, n + 1).has_value();
  rep.id_finite = inj_dim(*U, rep.finite_bound).has_value();
  rep.local_pd = true;
  rep.local_id = true;
  Representation r = module_to_rep(T, U).rep;
  for (const ModulePtr& m : r.vertex) {
    if (!proj_dim(*m, n).has_value()) rep.local_pd = false;
    if (!inj_dim(*m, n).has_value()) rep.local_id = false;
  }
  return rep;
}

namespace {

// dim Ext^k(M, N) for k = 1..maxk from the Hom complex of a minimal
// projective resolution
std::vector<int> ext_dims(const Module& M, const Module& N, int maxk) {
  const FieldSpec f = M.field();
  Resolution res = minimal_projective_resolution(M, maxk + 2);
  const int steps = static_cast<int>(res.steps.size());

  std::vector<std::vector<Matrix>> homs;
  for (int k = 0; k < steps; ++k)
    homs.push_back(hom_space(*res.steps[k].proj, N));
  // rank of Hom(P_{k-1}, N) -> Hom(P_k, N), composition with d_k
  auto comp_rank = [&](int k) {
    if (k >= steps) return 0;
    const Matrix& dk = res.steps[k].differential;
    Echelon ech(f, N.dim() * res.steps[k].proj->dim());
    int rank = 0;
    for (const Matrix& h : homs[k - 1])
      if (ech.add(flatten_mat(h.mul(dk)))) ++rank;
    return rank;
  };

  std::vector<int> out;
  for (int k = 1; k <= maxk; ++k) {
    if (k >= steps) {
      out.push_back(0);  // the resolution finished below degree k
      continue;
    }
    const int ker = static_cast<int>(homs[k].size()) - comp_rank(k + 1);
    out.push_back(ker - comp_rank(k));
  }
  return out;
}

}  // namespace

Ternary local_gp_bounded(const std::shared_ptr<const Algebra>& a,
                         const ModulePtr& m, int ext_bound) {
  require(ext_bound >= 1, "BadArgument", "ext bound must be positive");
  if (m->dim() == 0 || is_projective(*m)) return Ternary::True;
  for (int e : ext_dims(*m, *Module::regular(a), ext_bound))
    if (e != 0) return Ternary::False;
  // syzygy scan: a revisited isomorphism class means the resolution has a
  // periodic tail
  std::vector<ModulePtr> seen{m};
  ModulePtr cur = m;
  for (int k = 1; k <= ext_bound; ++k) {
    Resolution r = minimal_projective_resolution(*cur, 1);
    cur = r.syzygy;
    if (cur->dim() == 0) return Ternary::False;  // finite pd, not projective
    for (const ModulePtr& old : seen)
      if (old->dim() == cur->dim() &&
          is_isomorphic(*old, *cur, 20260814u).verdict == Certainty::Yes)
        return Ternary::True;
    seen.push_back(cur);
  }
  return Ternary::Unknown;
}

Ternary is_gorenstein_projective(const TensorAlgebra& T, const ModulePtr& X,
                                 const LocalGpOracle& oracle) {
  const Quiver& q = T.species->quiver();
  const FieldSpec f = T.species->field();
  Representation rep = module_to_rep(T, X).rep;
  bool unknown = false;
  for (int v = 0; v < q.vertex_count(); ++v) {
    Matrix in(f, rep.vertex[v]->dim(), 0);
    for (int a : q.arrows_into(v)) in = in.hstack(rep.arrow_map[a]);
    if (in.rank() != in.cols()) return Ternary::False;
    std::vector<Vec> gens;
    for (int j = 0; j < in.cols(); ++j) gens.push_back(in.col(j));
    Module::SubQuot coker = rep.vertex[v]->quotient(gens);
    Ternary verdict = oracle(T.species->vertex_algebra(v), coker.mod);
    if (verdict == Ternary::False) return Ternary::False;
    if (verdict == Ternary::Unknown) unknown = true;
  }
  return unknown ? Ternary::Unknown : Ternary::True;
}

Ternary is_gorenstein_projective(const TensorAlgebra& T, const ModulePtr& X,
                                 int ext_bound) {
  return is_gorenstein_projective(
      T, X,
      [ext_bound](const std::shared_ptr<const Algebra>& a,
                  const ModulePtr& m) {
        if (is_selfinjective(a)) return Ternary::True;
        return local_gp_bounded(a, m, ext_bound);
      });
}

}  // namespace prospecies
