#pragma once

#include <optional>
#include <vector>

#include "prospecies/exact.hpp"

namespace prospecies {

// Dense exact matrix over a runtime field.  Multiplication, Kronecker
// products and row elimination have serial reference implementations and
// OpenMP variants; results are bitwise identical because the arithmetic is
// exact and the work split is by disjoint output regions.
class Matrix {
public:
  Matrix() : field_{0}, rows_(0), cols_(0) {}
  Matrix(FieldSpec f, int rows, int cols)
      : field_(f), rows_(rows), cols_(cols) {
    require(rows >= 0 && cols >= 0, "ShapeMismatch", "negative matrix shape");
    e_.assign(static_cast<size_t>(rows) * cols, f.zero());
  }

  static Matrix identity(FieldSpec f, int n);
  static Matrix from_rows(FieldSpec f, const std::vector<Vec>& rows);
  static Matrix from_cols(FieldSpec f, const std::vector<Vec>& cols);
  static Matrix col_vector(FieldSpec f, const Vec& v);

  const FieldSpec& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const Scalar& at(int i, int j) const {
    return e_[static_cast<size_t>(i) * cols_ + j];
  }

  Vec row(int i) const;
  Vec col(int j) const;
  void set_row(int i, const Vec& v);
  void set_col(int j, const Vec& v);

  bool is_zero() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix add(const Matrix& o) const;
  Matrix sub(const Matrix& o) const;
  Matrix neg() const;
  Matrix scale(const Scalar& c) const;
  Matrix transpose() const;
  Matrix hstack(const Matrix& o) const;
  Matrix vstack(const Matrix& o) const;
  Matrix submatrix(int r0, int c0, int nr, int nc) const;

  Matrix mul(const Matrix& o) const;          // dispatches to a kernel
  Matrix mul_serial(const Matrix& o) const;   // reference
  Matrix mul_parallel(const Matrix& o) const; // OpenMP
  Vec apply(const Vec& v) const;              // this * column vector

  Matrix kron(const Matrix& o) const;          // (i,j)x(k,l) -> (i*o.rows+k, j*o.cols+l)
  Matrix kron_serial(const Matrix& o) const;
  Matrix kron_parallel(const Matrix& o) const;

  struct Rref;
  Rref rref() const;          // deterministic leftmost-pivot reduced echelon
  Rref rref_serial() const;
  Rref rref_parallel() const;

  int rank() const;
  // Columns form the standard free-variable basis of the right kernel,
  // ordered by free column index.
  Matrix kernel_basis() const;
  // Particular solution of (*this) X = B with free variables zero; nullopt
  // when inconsistent.
  std::optional<Matrix> solve_right(const Matrix& b) const;
  std::optional<Matrix> inverse() const;

private:
  void check_same_field(const Matrix& o) const {
    require(field_ == o.field_, "ShapeMismatch", "field mismatch");
  }

  FieldSpec field_;
  int rows_, cols_;
  std::vector<Scalar> e_;
};

struct Matrix::Rref {
  Matrix r;
  std::vector<int> pivots;  // pivot column of each nonzero row, ascending
};

// Incremental echelonized row span with a configurable column priority.
// Rows are kept fully reduced, so residues vanish on pivot columns.  The
// priority order decides which coordinates get eliminated first; quotient
// constructions use it so preferred basis vectors survive.
class Echelon {
public:
  Echelon(FieldSpec f, int width);
  Echelon(FieldSpec f, int width, std::vector<int> column_priority);

  int width() const { return width_; }
  int dim() const { return static_cast<int>(rows_.size()); }

  // Reduces v against the span; returns the residue.
  Vec reduce(const Vec& v) const;
  // Adds v to the span; returns true if the dimension grew.
  bool add(const Vec& v);
  bool contains(const Vec& v) const;
  bool contains(const Matrix& cols) const;

  const std::vector<Vec>& basis_rows() const { return rows_; }
  const std::vector<int>& pivot_cols() const { return pivcols_; }
  // Coordinates of v in the stored basis; NoSolution when v is outside.
  std::optional<Vec> coordinates(const Vec& v) const;
  Matrix basis_matrix_cols() const;  // width x dim, basis vectors as columns

private:
  int priority_of(int col) const { return pos_of_col_[col]; }

  FieldSpec f_;
  int width_;
  std::vector<int> order_;       // order_[k] = column examined k-th
  std::vector<int> pos_of_col_;  // inverse of order_
  std::vector<Vec> rows_;        // reduced; rows_[r] pivots at pivcols_[r]
  std::vector<int> pivcols_;
};

// Quotient of k^n by an echelonized subspace: coordinates are the non-pivot
// columns in priority order, so the projection kills the subspace and the
// section splits it.
class QuotientSpace {
public:
  QuotientSpace(FieldSpec f, int ambient, const Echelon& sub);

  int dim() const { return static_cast<int>(free_cols_.size()); }
  int ambient() const { return ambient_; }
  const std::vector<int>& free_cols() const { return free_cols_; }
  Vec project(const Vec& v) const;
  const Matrix& projection() const { return proj_; }  // dim x ambient
  const Matrix& section() const { return sect_; }     // ambient x dim

private:
  FieldSpec f_;
  int ambient_;
  std::vector<int> free_cols_;
  Matrix proj_, sect_;
};

// Vector helpers used across the library.
Vec vec_zero(FieldSpec f, int n);
Vec vec_unit(FieldSpec f, int n, int i);
Vec vec_add(FieldSpec f, const Vec& a, const Vec& b);
Vec vec_sub(FieldSpec f, const Vec& a, const Vec& b);
Vec vec_scale(FieldSpec f, const Scalar& c, const Vec& a);
bool vec_is_zero(const Vec& a);

}  // namespace prospecies
