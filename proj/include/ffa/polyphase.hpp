#pragma once

// Polyphase decomposition and the serial/blocked reference models every
// synthesized structure is checked against.

#include "ffa/numeric.hpp"
#include "ffa/poly_matrix.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ffa {

template <class T>
using TapSequence = std::vector<T>;

template <class T>
struct PolyphaseSet {
  std::size_t parallelism = 1;
  /// phases[j] = h(j), h(j+L), h(j+2L), ... zero-padded to ceil(N/L).
  std::vector<std::vector<T>> phases;
};

template <class T>
PolyphaseSet<T> polyphase_decompose(std::span<const T> h, std::size_t parallelism) {
  if (parallelism == 0) throw std::invalid_argument("polyphase_decompose: parallelism must be >= 1");
  if (h.empty()) throw std::invalid_argument("polyphase_decompose: empty tap sequence");
  const std::size_t len = (h.size() + parallelism - 1) / parallelism;
  PolyphaseSet<T> out{parallelism, std::vector<std::vector<T>>(parallelism, std::vector<T>(len, T(0)))};
  for (std::size_t i = 0; i < h.size(); ++i) out.phases[i % parallelism][i / parallelism] = h[i];
  return out;
}

template <class T>
PolyphaseSet<T> polyphase_decompose(const std::vector<T>& h, std::size_t parallelism) {
  return polyphase_decompose(std::span<const T>(h), parallelism);
}

/// Inverse of polyphase_decompose (up to the zero padding).
template <class T>
std::vector<T> interleave(const std::vector<std::vector<T>>& phases) {
  if (phases.empty()) return {};
  const std::size_t len = phases.front().size();
  std::vector<T> out(len * phases.size(), T(0));
  for (std::size_t j = 0; j < phases.size(); ++j) {
    if (phases[j].size() != len) throw std::invalid_argument("interleave: ragged phases");
    for (std::size_t k = 0; k < len; ++k) out[k * phases.size() + j] = phases[j][k];
  }
  return out;
}

/// y(n) = sum_i h(i) x(n-i), zero initial state; length len(x) + N - 1.
template <class T>
std::vector<T> convolve_serial(std::span<const T> h, std::span<const T> x) {
  if (h.empty() || x.empty()) return {};
  std::vector<T> y(x.size() + h.size() - 1, T(0));
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == T(0)) continue;
    for (std::size_t k = 0; k < x.size(); ++k) y[i + k] += h[i] * x[k];
  }
  return y;
}

template <class T>
std::vector<T> convolve_serial(const std::vector<T>& h, const std::vector<T>& x) {
  return convolve_serial(std::span<const T>(h), std::span<const T>(x));
}

/// Blocked reference: each block holds L consecutive samples. Output has
/// the same number of blocks as the input.
template <class T>
std::vector<std::vector<T>> naive_parallel_reference(const std::vector<T>& h, std::size_t parallelism,
                                                     const std::vector<std::vector<T>>& x_blocks) {
  if (parallelism == 0) throw std::invalid_argument("naive_parallel_reference: parallelism must be >= 1");
  std::vector<T> x;
  x.reserve(x_blocks.size() * parallelism);
  for (const auto& block : x_blocks) {
    if (block.size() != parallelism) throw std::invalid_argument("naive_parallel_reference: block size != L");
    x.insert(x.end(), block.begin(), block.end());
  }
  const std::vector<T> y = convolve_serial(h, x);
  std::vector<std::vector<T>> out(x_blocks.size(), std::vector<T>(parallelism, T(0)));
  for (std::size_t n = 0; n < x.size() && n < y.size(); ++n) out[n / parallelism][n % parallelism] = y[n];
  return out;
}

/// L x L transfer matrix of a blocked LTI filter: entry (i,j) maps input
/// phase j to output phase i. Entries are polynomials in serial z^{-1}.
using TransferMatrix = PolyMatrix;

/// Phase k of h as a polynomial in z^{-L}.
Poly phase_poly(const std::vector<Int>& h, std::size_t parallelism, std::size_t phase);

/// (i,j) = H_{i-j}(z^{-L}) for i >= j, z^{-L} H_{L+i-j}(z^{-L}) otherwise.
TransferMatrix pseudocirculant(const std::vector<Int>& h, std::size_t parallelism);

}  // namespace ffa
