#pragma once

// Integer matrices and diagonal reduction, over Z (Smith normal form) or over Z/m.
//
// Both reductions produce unimodular U, V with U * A * V = S, S diagonal. Over Z the
// diagonal satisfies the divisibility chain d_1 | d_2 | ...; over Z/m only the
// diagonal shape is guaranteed, which is all the kernel and solve routines need.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cfprod/error.hpp"

namespace cfprod {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  [[nodiscard]] std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] std::vector<std::int64_t> column(std::size_t c) const {
    std::vector<std::int64_t> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

struct Diagonalization {
  IntMatrix left;          // U
  IntMatrix left_inverse;  // U^{-1}
  IntMatrix right;         // V
  std::vector<std::int64_t> diagonal;  // min(rows, cols) entries
  std::int64_t modulus = 0;            // 0 = over Z
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("integer overflow in matrix reduction");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw CapacityError("integer overflow in matrix reduction");
  return r;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t mod_norm(std::int64_t v, std::int64_t m) {
  if (m == 0) return v;
  v %= m;
  return v < 0 ? v + m : v;
}

class Reducer {
 public:
  Reducer(IntMatrix a, std::int64_t m)
      : a_(std::move(a)),
        u_(IntMatrix::identity(a_.rows())),
        uinv_(IntMatrix::identity(a_.rows())),
        v_(IntMatrix::identity(a_.cols())),
        m_(m) {
    for (std::size_t r = 0; r < a_.rows(); ++r)
      for (std::size_t c = 0; c < a_.cols(); ++c) a_(r, c) = mod_norm(a_(r, c), m_);
  }

  Diagonalization run() {
    const std::size_t n = std::min(a_.rows(), a_.cols());
    for (std::size_t t = 0; t < n; ++t) {
      if (!bring_pivot(t)) break;
      for (;;) {
        bool clean = clear_column(t);
        clean = clear_row(t) && clean;
        if (!clean) continue;
        if (m_ == 0 && fix_divisibility(t)) continue;
        break;
      }
      if (m_ == 0 && a_(t, t) < 0) scale_row(t, -1);
    }
    Diagonalization d;
    d.diagonal.resize(n);
    for (std::size_t t = 0; t < n; ++t) d.diagonal[t] = a_(t, t);
    d.left = std::move(u_);
    d.left_inverse = std::move(uinv_);
    d.right = std::move(v_);
    d.modulus = m_;
    return d;
  }

 private:
  std::int64_t mag(std::int64_t v) const { return v < 0 ? -v : v; }

  bool bring_pivot(std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t r = t; r < a_.rows(); ++r)
      for (std::size_t c = t; c < a_.cols(); ++c)
        if (a_(r, c) != 0 && (!best || mag(a_(r, c)) < mag(a_(best->first, best->second)))) best = {r, c};
    if (!best) return false;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return true;
  }

  // Euclidean step on column t below the pivot; returns true if nothing changed.
  bool clear_column(std::size_t t) {
    bool clean = true;
    for (std::size_t r = t + 1; r < a_.rows(); ++r) {
      if (a_(r, t) == 0) continue;
      const std::int64_t q = floor_div(a_(r, t), a_(t, t));
      add_row(r, t, -q);
      if (a_(r, t) != 0) {
        swap_rows(r, t);
        clean = false;
      }
    }
    return clean;
  }

  bool clear_row(std::size_t t) {
    bool clean = true;
    for (std::size_t c = t + 1; c < a_.cols(); ++c) {
      if (a_(t, c) == 0) continue;
      const std::int64_t q = floor_div(a_(t, c), a_(t, t));
      add_col(c, t, -q);
      if (a_(t, c) != 0) {
        swap_cols(c, t);
        clean = false;
      }
    }
    return clean;
  }

  bool fix_divisibility(std::size_t t) {
    for (std::size_t r = t + 1; r < a_.rows(); ++r)
      for (std::size_t c = t + 1; c < a_.cols(); ++c)
        if (a_(r, c) % a_(t, t) != 0) {
          add_row(t, r, 1);
          return true;
        }
    return false;
  }

  // row[dst] += k * row[src] on A and U; U^{-1} gets the inverse column operation.
  void add_row(std::size_t dst, std::size_t src, std::int64_t k) {
    for (std::size_t c = 0; c < a_.cols(); ++c)
      a_(dst, c) = mod_norm(checked_sub(a_(dst, c), checked_mul(-k, a_(src, c))), m_);
    for (std::size_t c = 0; c < u_.cols(); ++c)
      u_(dst, c) = mod_norm(checked_sub(u_(dst, c), checked_mul(-k, u_(src, c))), m_);
    for (std::size_t r = 0; r < uinv_.rows(); ++r)
      uinv_(r, src) = mod_norm(checked_sub(uinv_(r, src), checked_mul(k, uinv_(r, dst))), m_);
  }

  // col[dst] += k * col[src] on A and V.
  void add_col(std::size_t dst, std::size_t src, std::int64_t k) {
    for (std::size_t r = 0; r < a_.rows(); ++r)
      a_(r, dst) = mod_norm(checked_sub(a_(r, dst), checked_mul(-k, a_(r, src))), m_);
    for (std::size_t r = 0; r < v_.rows(); ++r)
      v_(r, dst) = mod_norm(checked_sub(v_(r, dst), checked_mul(-k, v_(r, src))), m_);
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a_.cols(); ++c) std::swap(a_(i, c), a_(j, c));
    for (std::size_t c = 0; c < u_.cols(); ++c) std::swap(u_(i, c), u_(j, c));
    for (std::size_t r = 0; r < uinv_.rows(); ++r) std::swap(uinv_(r, i), uinv_(r, j));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a_.rows(); ++r) std::swap(a_(r, i), a_(r, j));
    for (std::size_t r = 0; r < v_.rows(); ++r) std::swap(v_(r, i), v_(r, j));
  }

  void scale_row(std::size_t i, std::int64_t s) {
    for (std::size_t c = 0; c < a_.cols(); ++c) a_(i, c) = mod_norm(a_(i, c) * s, m_);
    for (std::size_t c = 0; c < u_.cols(); ++c) u_(i, c) = mod_norm(u_(i, c) * s, m_);
    for (std::size_t r = 0; r < uinv_.rows(); ++r) uinv_(r, i) = mod_norm(uinv_(r, i) * s, m_);
  }

  IntMatrix a_, u_, uinv_, v_;
  std::int64_t m_;
};

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod_norm(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) throw InternalError("inverse_mod of a non-unit");
  return mod_norm(old_s, m);
}

}  // namespace detail

/// Smith normal form over the integers.
inline Diagonalization smith_normal_form(const IntMatrix& a) { return detail::Reducer(a, 0).run(); }

/// Diagonal reduction over Z/m, m >= 1.
inline Diagonalization diagonalize_mod(const IntMatrix& a, std::int64_t m) {
  if (m < 1) throw ValidationError("modulus must be positive");
  return detail::Reducer(a, m).run();
}

/// Kernel of A over Z/m as a direct sum of cyclic pieces: generator i has order orders[i].
struct ModKernel {
  std::int64_t modulus = 1;
  std::vector<std::vector<std::int64_t>> generators;
  std::vector<std::int64_t> orders;
};

inline ModKernel kernel_mod(const IntMatrix& a, std::int64_t m) {
  const auto d = diagonalize_mod(a, m);
  ModKernel k;
  k.modulus = m;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    const std::int64_t s = i < d.diagonal.size() ? d.diagonal[i] : 0;
    const std::int64_t g = std::gcd(s, m);
    if (g == 1) continue;
    std::vector<std::int64_t> gen(a.cols());
    for (std::size_t r = 0; r < a.cols(); ++r) gen[r] = detail::mod_norm(d.right(r, i) * (m / g), m);
    k.generators.push_back(std::move(gen));
    k.orders.push_back(g);
  }
  return k;
}

/// One solution x of A x = rhs over Z/m, or nullopt when the system is inconsistent.
inline std::optional<std::vector<std::int64_t>> solve_mod(const IntMatrix& a, const std::vector<std::int64_t>& rhs,
                                                          std::int64_t m) {
  if (rhs.size() != a.rows()) throw ValidationError("solve_mod: right-hand side has wrong length");
  const auto d = diagonalize_mod(a, m);
  std::vector<std::int64_t> urhs(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    __int128 acc = 0;
    for (std::size_t c = 0; c < a.rows(); ++c) acc += static_cast<__int128>(d.left(r, c)) * detail::mod_norm(rhs[c], m);
    urhs[r] = static_cast<std::int64_t>(acc % m);
  }
  std::vector<std::int64_t> y(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const std::int64_t s = i < d.diagonal.size() ? d.diagonal[i] : 0;
    const std::int64_t g = std::gcd(s, m);
    if (urhs[i] % g != 0) return std::nullopt;
    if (i >= a.cols() || s == 0) continue;
    const std::int64_t mg = m / g;
    if (mg == 1) continue;
    const std::int64_t inv = detail::inverse_mod((s / g) % mg, mg);
    y[i] = static_cast<std::int64_t>((static_cast<__int128>(urhs[i] / g) * inv) % mg);
  }
  std::vector<std::int64_t> x(a.cols(), 0);
  for (std::size_t r = 0; r < a.cols(); ++r) {
    __int128 acc = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += static_cast<__int128>(d.right(r, c)) * y[c];
    x[r] = detail::mod_norm(static_cast<std::int64_t>(acc % m), m);
  }
  return x;
}

/// Invariant factors (d_1 | d_2 | ..., all > 1) of Z^n / (column span of relations).
/// Throws when the quotient is infinite.
inline std::vector<std::int64_t> invariant_factors_of_relations(const IntMatrix& relations) {
  const auto d = smith_normal_form(relations);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < relations.rows(); ++i) {
    const std::int64_t s = i < d.diagonal.size() ? d.diagonal[i] : 0;
    if (s == 0) throw ValidationError("relation lattice has infinite quotient");
    if (s != 1) out.push_back(s);
  }
  return out;
}

}  // namespace cfprod
