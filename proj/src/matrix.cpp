#include "prospecies/matrix.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prospecies {

namespace {
constexpr long kParallelThreshold = 1 << 12;  // output cells below this stay serial
}

Matrix Matrix::identity(FieldSpec f, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
  return m;
}

Matrix Matrix::from_rows(FieldSpec f, const std::vector<Vec>& rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(f, nr, nc);
  for (int i = 0; i < nr; ++i) {
    require(static_cast<int>(rows[i].size()) == nc, "ShapeMismatch",
            "ragged rows");
    for (int j = 0; j < nc; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_cols(FieldSpec f, const std::vector<Vec>& cols) {
  int nc = static_cast<int>(cols.size());
  int nr = nc == 0 ? 0 : static_cast<int>(cols[0].size());
  Matrix m(f, nr, nc);
  for (int j = 0; j < nc; ++j) {
    require(static_cast<int>(cols[j].size()) == nr, "ShapeMismatch",
            "ragged columns");
    for (int i = 0; i < nr; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

Matrix Matrix::col_vector(FieldSpec f, const Vec& v) {
  return from_cols(f, {v});
}

Vec Matrix::row(int i) const {
  Vec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

Vec Matrix::col(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

void Matrix::set_row(int i, const Vec& v) {
  require(static_cast<int>(v.size()) == cols_, "ShapeMismatch", "set_row");
  for (int j = 0; j < cols_; ++j) at(i, j) = v[j];
}

void Matrix::set_col(int j, const Vec& v) {
  require(static_cast<int>(v.size()) == rows_, "ShapeMismatch", "set_col");
  for (int i = 0; i < rows_; ++i) at(i, j) = v[i];
}

bool Matrix::is_zero() const {
  for (const Scalar& x : e_)
    if (x != 0) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_) return false;
  return e_ == o.e_;
}

Matrix Matrix::add(const Matrix& o) const {
  check_same_field(o);
  require(rows_ == o.rows_ && cols_ == o.cols_, "ShapeMismatch", "add");
  Matrix r(field_, rows_, cols_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.add(e_[k], o.e_[k]);
  return r;
}

Matrix Matrix::sub(const Matrix& o) const {
  check_same_field(o);
  require(rows_ == o.rows_ && cols_ == o.cols_, "ShapeMismatch", "sub");
  Matrix r(field_, rows_, cols_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.sub(e_[k], o.e_[k]);
  return r;
}

Matrix Matrix::neg() const {
  Matrix r(field_, rows_, cols_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.neg(e_[k]);
  return r;
}

Matrix Matrix::scale(const Scalar& c) const {
  Matrix r(field_, rows_, cols_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = field_.mul(c, e_[k]);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Matrix Matrix::hstack(const Matrix& o) const {
  check_same_field(o);
  require(rows_ == o.rows_, "ShapeMismatch", "hstack");
  Matrix r(field_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
  }
  return r;
}

Matrix Matrix::vstack(const Matrix& o) const {
  check_same_field(o);
  require(cols_ == o.cols_, "ShapeMismatch", "vstack");
  Matrix r(field_, rows_ + o.rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
  for (int i = 0; i < o.rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
  return r;
}

Matrix Matrix::submatrix(int r0, int c0, int nr, int nc) const {
  require(r0 >= 0 && c0 >= 0 && r0 + nr <= rows_ && c0 + nc <= cols_,
          "ShapeMismatch", "submatrix");
  Matrix r(field_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) r.at(i, j) = at(r0 + i, c0 + j);
  return r;
}

Matrix Matrix::mul_serial(const Matrix& o) const {
  check_same_field(o);
  require(cols_ == o.rows_, "ShapeMismatch", "mul");
  Matrix r(field_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j) == 0) continue;
        r.at(i, j) = field_.add(r.at(i, j), field_.mul(a, o.at(k, j)));
      }
    }
  return r;
}

Matrix Matrix::mul_parallel(const Matrix& o) const {
  check_same_field(o);
  require(cols_ == o.rows_, "ShapeMismatch", "mul");
  Matrix r(field_, rows_, o.cols_);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j) == 0) continue;
        r.at(i, j) = field_.add(r.at(i, j), field_.mul(a, o.at(k, j)));
      }
    }
  return r;
}

Matrix Matrix::mul(const Matrix& o) const {
  long cells = static_cast<long>(rows_) * o.cols();
  if (cells >= kParallelThreshold) return mul_parallel(o);
  return mul_serial(o);
}

Vec Matrix::apply(const Vec& v) const {
  require(static_cast<int>(v.size()) == cols_, "ShapeMismatch", "apply");
  Vec r(rows_, field_.zero());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      if (at(i, j) == 0 || v[j] == 0) continue;
      r[i] = field_.add(r[i], field_.mul(at(i, j), v[j]));
    }
  return r;
}

Matrix Matrix::kron_serial(const Matrix& o) const {
  check_same_field(o);
  Matrix r(field_, rows_ * o.rows_, cols_ * o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      const Scalar& a = at(i, j);
      if (a == 0) continue;
      for (int k = 0; k < o.rows_; ++k)
        for (int l = 0; l < o.cols_; ++l)
          r.at(i * o.rows_ + k, j * o.cols_ + l) = field_.mul(a, o.at(k, l));
    }
  return r;
}

Matrix Matrix::kron_parallel(const Matrix& o) const {
  check_same_field(o);
  Matrix r(field_, rows_ * o.rows_, cols_ * o.cols_);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      const Scalar& a = at(i, j);
      if (a == 0) continue;
      for (int k = 0; k < o.rows_; ++k)
        for (int l = 0; l < o.cols_; ++l)
          r.at(i * o.rows_ + k, j * o.cols_ + l) = field_.mul(a, o.at(k, l));
    }
  return r;
}

Matrix Matrix::kron(const Matrix& o) const {
  long cells = static_cast<long>(rows_) * o.rows() * cols_ * o.cols();
  if (cells >= kParallelThreshold) return kron_parallel(o);
  return kron_serial(o);
}

// Reduced row echelon form with deterministic leftmost-pivot selection: for
// each column in order, the first row (top to bottom) with a nonzero entry
// becomes the pivot row.  No magnitude heuristics, so runs are reproducible
// across platforms.
static Matrix::Rref rref_impl(const Matrix& in, bool parallel) {
  const FieldSpec f = in.field();
  Matrix r = in;
  std::vector<int> pivots;
  int prow = 0;
  for (int c = 0; c < r.cols() && prow < r.rows(); ++c) {
    int sel = -1;
    for (int i = prow; i < r.rows(); ++i)
      if (r.at(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != prow)
      for (int j = 0; j < r.cols(); ++j) std::swap(r.at(sel, j), r.at(prow, j));
    Scalar pinv = f.inv(r.at(prow, c));
    for (int j = c; j < r.cols(); ++j)
      r.at(prow, j) = f.mul(pinv, r.at(prow, j));
    auto eliminate = [&](int i) {
      if (i == prow) return;
      const Scalar m = r.at(i, c);
      if (m == 0) return;
      for (int j = c; j < r.cols(); ++j)
        r.at(i, j) = f.sub(r.at(i, j), f.mul(m, r.at(prow, j)));
    };
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (int i = 0; i < r.rows(); ++i) eliminate(i);
    } else {
      for (int i = 0; i < r.rows(); ++i) eliminate(i);
    }
    pivots.push_back(c);
    ++prow;
  }
  return {std::move(r), std::move(pivots)};
}

Matrix::Rref Matrix::rref_serial() const { return rref_impl(*this, false); }
Matrix::Rref Matrix::rref_parallel() const { return rref_impl(*this, true); }

Matrix::Rref Matrix::rref() const {
  long cells = static_cast<long>(rows_) * cols_;
  return cells >= kParallelThreshold ? rref_parallel() : rref_serial();
}

int Matrix::rank() const { return static_cast<int>(rref().pivots.size()); }

Matrix Matrix::kernel_basis() const {
  Rref rr = rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int c : rr.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (int j = 0; j < cols_; ++j) {
    if (is_pivot[j]) continue;
    Vec v(cols_, field_.zero());
    v[j] = field_.one();
    for (size_t rix = 0; rix < rr.pivots.size(); ++rix)
      v[rr.pivots[rix]] = field_.neg(rr.r.at(static_cast<int>(rix), j));
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return Matrix(field_, cols_, 0);
  return from_cols(field_, basis);
}

std::optional<Matrix> Matrix::solve_right(const Matrix& b) const {
  check_same_field(b);
  require(rows_ == b.rows_, "ShapeMismatch", "solve_right");
  Matrix aug = hstack(b);
  Rref rr = aug.rref();
  // A pivot inside the augmented block marks an inconsistent system.
  for (int c : rr.pivots)
    if (c >= cols_) return std::nullopt;
  Matrix x(field_, cols_, b.cols_);
  for (size_t rix = 0; rix < rr.pivots.size(); ++rix)
    for (int j = 0; j < b.cols_; ++j)
      x.at(rr.pivots[rix], j) = rr.r.at(static_cast<int>(rix), cols_ + j);
  return x;
}

std::optional<Matrix> Matrix::inverse() const {
  require(rows_ == cols_, "ShapeMismatch", "inverse of non-square");
  auto x = solve_right(identity(field_, rows_));
  if (!x) return std::nullopt;
  if (mul(*x) != identity(field_, rows_)) return std::nullopt;
  return x;
}

Echelon::Echelon(FieldSpec f, int width) : f_(f), width_(width) {
  order_.resize(width);
  std::iota(order_.begin(), order_.end(), 0);
  pos_of_col_ = order_;
}

Echelon::Echelon(FieldSpec f, int width, std::vector<int> column_priority)
    : f_(f), width_(width), order_(std::move(column_priority)) {
  require(static_cast<int>(order_.size()) == width, "ShapeMismatch",
          "column priority size");
  pos_of_col_.assign(width, -1);
  for (int k = 0; k < width; ++k) pos_of_col_[order_[k]] = k;
}

Vec Echelon::reduce(const Vec& v) const {
  require(static_cast<int>(v.size()) == width_, "ShapeMismatch", "reduce");
  Vec r = v;
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Scalar& c = r[pivcols_[i]];
    if (c == 0) continue;
    Scalar m = c;  // pivot entries are normalized to 1
    for (int j = 0; j < width_; ++j) {
      if (rows_[i][j] == 0) continue;
      r[j] = f_.sub(r[j], f_.mul(m, rows_[i][j]));
    }
  }
  return r;
}

bool Echelon::add(const Vec& v) {
  Vec r = reduce(v);
  int piv = -1;
  for (int k = 0; k < width_; ++k) {
    int c = order_[k];
    if (r[c] != 0) {
      piv = c;
      break;
    }
  }
  if (piv < 0) return false;
  Scalar inv = f_.inv(r[piv]);
  for (int j = 0; j < width_; ++j) r[j] = f_.mul(inv, r[j]);
  // Back-substitute into the stored rows to keep them fully reduced.
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Scalar c = rows_[i][piv];
    if (c == 0) continue;
    for (int j = 0; j < width_; ++j) {
      if (r[j] == 0) continue;
      rows_[i][j] = f_.sub(rows_[i][j], f_.mul(c, r[j]));
    }
  }
  // Insert keeping pivot priority order.
  size_t pos = 0;
  while (pos < rows_.size() &&
         priority_of(pivcols_[pos]) < priority_of(piv))
    ++pos;
  rows_.insert(rows_.begin() + pos, std::move(r));
  pivcols_.insert(pivcols_.begin() + pos, piv);
  return true;
}

bool Echelon::contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

bool Echelon::contains(const Matrix& cols) const {
  for (int j = 0; j < cols.cols(); ++j)
    if (!contains(cols.col(j))) return false;
  return true;
}

std::optional<Vec> Echelon::coordinates(const Vec& v) const {
  Vec r = v;
  Vec coord(rows_.size(), f_.zero());
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Scalar c = r[pivcols_[i]];
    if (c == 0) continue;
    coord[i] = c;
    for (int j = 0; j < width_; ++j) {
      if (rows_[i][j] == 0) continue;
      r[j] = f_.sub(r[j], f_.mul(c, rows_[i][j]));
    }
  }
  if (!vec_is_zero(r)) return std::nullopt;
  return coord;
}

Matrix Echelon::basis_matrix_cols() const {
  if (rows_.empty()) return Matrix(f_, width_, 0);
  std::vector<Vec> cols(rows_.begin(), rows_.end());
  return Matrix::from_cols(f_, cols);
}

QuotientSpace::QuotientSpace(FieldSpec f, int ambient, const Echelon& sub)
    : f_(f), ambient_(ambient) {
  require(sub.width() == ambient, "ShapeMismatch", "quotient ambient");
  std::vector<bool> is_pivot(ambient, false);
  for (int c : sub.pivot_cols()) is_pivot[c] = true;
  for (int j = 0; j < ambient; ++j)
    if (!is_pivot[j]) free_cols_.push_back(j);
  int d = static_cast<int>(free_cols_.size());
  proj_ = Matrix(f, d, ambient);
  for (int j = 0; j < ambient; ++j) {
    Vec res = sub.reduce(vec_unit(f, ambient, j));
    for (int k = 0; k < d; ++k) proj_.at(k, j) = res[free_cols_[k]];
  }
  sect_ = Matrix(f, ambient, d);
  for (int k = 0; k < d; ++k) sect_.at(free_cols_[k], k) = f.one();
}

Vec QuotientSpace::project(const Vec& v) const { return proj_.apply(v); }

Vec vec_zero(FieldSpec f, int n) { return Vec(n, f.zero()); }

Vec vec_unit(FieldSpec f, int n, int i) {
  Vec v(n, f.zero());
  v[i] = f.one();
  return v;
}

Vec vec_add(FieldSpec f, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "ShapeMismatch", "vec_add");
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
  return r;
}

Vec vec_sub(FieldSpec f, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "ShapeMismatch", "vec_sub");
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = f.sub(a[i], b[i]);
  return r;
}

Vec vec_scale(FieldSpec f, const Scalar& c, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = f.mul(c, a[i]);
  return r;
}

bool vec_is_zero(const Vec& a) {
  for (const Scalar& x : a)
    if (x != 0) return false;
  return true;
}

}  // namespace prospecies
