#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace curldiv::exact {

/// Reduced fraction with 64-bit numerator and denominator. Arithmetic goes
/// through 128-bit intermediates and throws std::overflow_error if a
/// reduced result does not fit.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  static Rational from_wide(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

using SparseIntRow = std::vector<std::pair<int, std::int64_t>>;  // sorted by column
using SparseRow = std::vector<std::pair<int, Rational>>;         // sorted by column
using DenseMatrix = std::vector<std::vector<Rational>>;

/// Outcome of a staged sparse elimination.
struct Elimination {
  int rank = 0;
  std::vector<std::pair<int, int>> pivots;  // (row, column) in elimination order
  std::vector<char> pivot_column;           // per column
  /// Rows left after all columns of stages <= stop_stage were eliminated,
  /// with the zero rows dropped. Every entry is in an unpivoted column.
  std::vector<SparseRow> residual;
};

/// Gaussian elimination over Q of a sparse integer matrix given by rows.
/// Columns are eliminated stage by stage (stage 0 first); inside a stage the
/// pivot is taken from the active row with the fewest entries in the stage,
/// on its column with the fewest active rows (Markowitz-style, minimises
/// fill-in). `column_stage` may be empty (single stage). Elimination stops
/// after stage `stop_stage` (all stages when negative).
Elimination eliminate(std::span<const SparseIntRow> rows, int ncols,
                      std::span<const int> column_stage = {}, int stop_stage = -1);

/// Rank over Q of a sparse integer matrix.
int rank(std::span<const SparseIntRow> rows, int ncols);

/// Reduced row echelon form of a dense rational matrix (in place); returns
/// the pivot column of each nonzero row.
std::vector<int> rref(DenseMatrix& a);

/// Basis of the right kernel of `a` (ncols columns) scaled to primitive
/// integer vectors.
std::vector<std::vector<std::int64_t>> integer_kernel(DenseMatrix a, int ncols);

/// Scales a rational vector by the lcm of its denominators and divides by
/// the gcd of the result, yielding a primitive integer vector.
std::vector<std::int64_t> primitive_integer(std::span<const Rational> v);

}  // namespace curldiv::exact
