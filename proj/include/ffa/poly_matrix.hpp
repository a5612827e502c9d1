#pragma once

#include "ffa/numeric.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace ffa {

/// Polynomial in the unit serial delay z^{-1} with exact integer
/// coefficients, stored in ascending delay order. The zero polynomial has
/// no coefficients; trailing zeros are always stripped.
class Poly {
 public:
  Poly() = default;
  Poly(Int constant);  // NOLINT(google-explicit-constructor)
  Poly(int constant) : Poly(Int(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Int> coeffs);

  /// c * z^{-delay}
  static Poly monomial(Int c, std::size_t delay);

  const std::vector<Int>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Highest delay exponent; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  Int coeff(std::size_t delay) const { return delay < coeffs_.size() ? coeffs_[delay] : Int(0); }

  /// Multiplies by z^{-k}.
  Poly delayed(std::size_t k) const;
  /// Drops every term carrying a delay.
  Poly constant_term() const { return Poly(coeff(0)); }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) = default;

  std::string to_string() const;

 private:
  void normalize();
  std::vector<Int> coeffs_;
};

/// Dense matrix of Poly entries. Dimensions are fixed at construction.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Row-major nested initializer; every row must have the same length.
  PolyMatrix(std::initializer_list<std::initializer_list<Poly>> rows);

  static PolyMatrix identity(std::size_t n);
  /// Permutation matrix P with (P x)[i] = x[perm[i]].
  static PolyMatrix permutation(const std::vector<std::size_t>& perm);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Poly& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Poly& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  PolyMatrix transposed() const;
  /// Entrywise constant_term(): every delay term set to zero.
  PolyMatrix at_zero_delay() const;

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) = default;
  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly> data_;
};

/// Matrix product; throws std::invalid_argument on dimension mismatch.
PolyMatrix pm_mul(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix pm_kron(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix pm_diag(const std::vector<Poly>& entries);

inline PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) { return pm_mul(a, b); }

}  // namespace ffa
