#pragma once

#include <cmath>
#include <vector>

#include "telent/rng.hpp"
#include "telent/states.hpp"

namespace telent::testing {

inline CMatrix random_complex(int rows, int cols, CounterRng& rng) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

inline CMatrix random_hermitian(int d, CounterRng& rng) {
  const CMatrix g = random_complex(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline InputEnsemble pauli6() { return pauli_eigenstate_ensemble({PauliAxis::X, PauliAxis::Y, PauliAxis::Z}); }
inline InputEnsemble pauli_xz() { return pauli_eigenstate_ensemble({PauliAxis::X, PauliAxis::Z}); }

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Negativity of p Phi+ + (1-p)|01><01|.
inline double flag_negativity_closed_form(double p) {
  return (std::sqrt((1 - p) * (1 - p) + p * p) - (1 - p)) / 2;
}

}  // namespace telent::testing
