#include "ffa/polyphase.hpp"

namespace ffa {

Poly phase_poly(const std::vector<Int>& h, std::size_t parallelism, std::size_t phase) {
  std::vector<Int> coeffs;
  for (std::size_t i = phase; i < h.size(); i += parallelism) {
    coeffs.resize((i - phase) + 1);
    coeffs[i - phase] = h[i];
  }
  return Poly(std::move(coeffs));
}

TransferMatrix pseudocirculant(const std::vector<Int>& h, std::size_t parallelism) {
  if (parallelism == 0) throw std::invalid_argument("pseudocirculant: parallelism must be >= 1");
  std::vector<Poly> phases;
  for (std::size_t k = 0; k < parallelism; ++k) phases.push_back(phase_poly(h, parallelism, k));
  TransferMatrix m(parallelism, parallelism);
  for (std::size_t i = 0; i < parallelism; ++i)
    for (std::size_t j = 0; j < parallelism; ++j)
      m(i, j) = i >= j ? phases[i - j] : phases[parallelism + i - j].delayed(parallelism);
  return m;
}

}  // namespace ffa
