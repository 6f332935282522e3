#include "curldiv/exact.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace curldiv::exact {

namespace {

__int128 abs128(__int128 x) { return x < 0 ? -x : x; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(__int128 x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<std::int64_t>(x);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  Rational r;
  if (n == 0) return r;
  r.num_ = narrow(n / g);
  r.den_ = narrow(d / g);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational::from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_,
                             static_cast<__int128>(a.den_) * b.num_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

Elimination eliminate(std::span<const SparseIntRow> input, int ncols,
                      std::span<const int> column_stage, int stop_stage) {
  const int nrows = static_cast<int>(input.size());
  auto stage_of = [&](int c) { return column_stage.empty() ? 0 : column_stage[c]; };
  int max_stage = 0;
  for (int s : column_stage) max_stage = std::max(max_stage, s);

  std::vector<SparseRow> rows(nrows);
  std::vector<char> active(nrows, 0);
  std::vector<std::unordered_set<int>> col_rows(ncols);
  for (int r = 0; r < nrows; ++r) {
    for (const auto& [c, v] : input[r]) {
      if (v == 0) continue;
      if (c < 0 || c >= ncols) throw std::out_of_range("column index out of range");
      rows[r].emplace_back(c, Rational(v));
      col_rows[c].insert(r);
    }
    std::sort(rows[r].begin(), rows[r].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    active[r] = !rows[r].empty();
  }

  Elimination out;
  out.pivot_column.assign(ncols, 0);
  std::vector<int> key(nrows, 0);

  for (int stage = 0; stage <= max_stage; ++stage) {
    auto count_in_stage = [&](int r) {
      int n = 0;
      for (const auto& e : rows[r]) n += stage_of(e.first) == stage;
      return n;
    };
    std::set<std::pair<int, int>> queue;
    for (int r = 0; r < nrows; ++r) {
      if (!active[r]) continue;
      key[r] = count_in_stage(r);
      if (key[r] > 0) queue.emplace(key[r], r);
    }

    while (!queue.empty()) {
      const int r = queue.begin()->second;
      queue.erase(queue.begin());

      int pc = -1;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      Rational pv;
      for (const auto& [c, v] : rows[r]) {
        if (stage_of(c) != stage) continue;
        if (col_rows[c].size() < best) {
          best = col_rows[c].size();
          pc = c;
          pv = v;
        }
      }
      out.pivots.emplace_back(r, pc);
      out.pivot_column[pc] = 1;
      ++out.rank;
      active[r] = 0;
      for (const auto& e : rows[r]) col_rows[e.first].erase(r);

      const std::vector<int> targets(col_rows[pc].begin(), col_rows[pc].end());
      for (int j : targets) {
        if (key[j] > 0) queue.erase({key[j], j});
        const SparseRow& a = rows[j];
        const SparseRow& p = rows[r];
        Rational factor;
        for (const auto& [c, v] : a) {
          if (c == pc) {
            factor = v / pv;
            break;
          }
        }
        SparseRow merged;
        merged.reserve(a.size() + p.size());
        std::size_t ia = 0, ip = 0;
        while (ia < a.size() || ip < p.size()) {
          if (ip == p.size() || (ia < a.size() && a[ia].first < p[ip].first)) {
            merged.push_back(a[ia++]);
          } else if (ia == a.size() || p[ip].first < a[ia].first) {
            merged.emplace_back(p[ip].first, -(factor * p[ip].second));
            ++ip;
          } else {
            Rational v = a[ia].second - factor * p[ip].second;
            if (!v.is_zero() && a[ia].first != pc) merged.emplace_back(a[ia].first, v);
            ++ia;
            ++ip;
          }
        }
        for (const auto& e : a) col_rows[e.first].erase(j);
        rows[j] = std::move(merged);
        for (const auto& e : rows[j]) col_rows[e.first].insert(j);
        if (rows[j].empty()) {
          active[j] = 0;
          key[j] = 0;
          continue;
        }
        key[j] = count_in_stage(j);
        if (key[j] > 0) queue.emplace(key[j], j);
      }
    }
    if (stop_stage >= 0 && stage >= stop_stage) break;
  }

  for (int r = 0; r < nrows; ++r) {
    if (active[r] && !rows[r].empty()) out.residual.push_back(std::move(rows[r]));
  }
  return out;
}

int rank(std::span<const SparseIntRow> rows, int ncols) { return eliminate(rows, ncols).rank; }

std::vector<int> rref(DenseMatrix& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(a.front().size());
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int sel = -1;
    for (int i = row; i < m; ++i) {
      if (!a[i][col].is_zero()) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(a[row], a[sel]);
    const Rational pv = a[row][col];
    for (auto& x : a[row]) x = x / pv;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      const Rational f = a[i][col];
      for (int k = 0; k < n; ++k) a[i][k] -= f * a[row][k];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  return pivots;
}

std::vector<std::vector<std::int64_t>> integer_kernel(DenseMatrix a, int ncols) {
  const std::vector<int> pivots = rref(a);
  std::vector<char> is_pivot(ncols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<std::int64_t>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(ncols, Rational(0));
    v[f] = Rational(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
    basis.push_back(primitive_integer(v));
  }
  return basis;
}

std::vector<std::int64_t> primitive_integer(std::span<const Rational> v) {
  __int128 l = 1;
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    l = l / gcd128(l, x.den()) * x.den();
    narrow(l);
  }
  std::vector<__int128> scaled;
  __int128 g = 0;
  for (const auto& x : v) {
    scaled.push_back(static_cast<__int128>(x.num()) * (l / x.den()));
    g = gcd128(g, scaled.back());
  }
  std::vector<std::int64_t> out;
  int sign = 1;
  for (auto s : scaled) {
    if (s != 0) {
      sign = s < 0 ? -1 : 1;
      break;
    }
  }
  for (auto s : scaled) out.push_back(g == 0 ? 0 : narrow(sign * s / g));
  return out;
}

}  // namespace curldiv::exact
