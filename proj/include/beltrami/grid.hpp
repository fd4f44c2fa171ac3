// Copyright 2026 the beltrami-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Periodic spectral grid on the torus C/(Z + tau*Z).
//
// Nodes are (x_a, y_b) = (a/n, b/n) on the unit square, z = x + tau*y,
// stored row-major with index a*n + b.  Complex derivatives are spectral:
// a forward FFT (sign e^{-2*pi*i}), a diagonal multiplier in mode space,
// and an inverse FFT.  For the mode e^{2*pi*i(p x + q y)},
//
//   d_z     multiplies by  -pi (conj(tau) p - q) / Im(tau)
//   d_zbar  multiplies by   pi (tau p - q)       / Im(tau)
//
// with p, q in [-n/2, n/2).  Multipliers are used as-is on the whole
// frequency window (no Nyquist zeroing), so plane waves in the window are
// exact eigenvectors and operator adjoints close exactly; conjugation
// symmetry d_zbar(conj f) = conj(d_z f) holds on fields band-limited to
// degree < n/2.  Quadrature is the uniform weight Im(tau)/n^2, which
// integrates (dzbar ^ dz)/2i exactly for band-limited integrands.
//
// Grid and Field are immutable value types and safe to share across
// threads.

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "beltrami/errors.hpp"

namespace bel {

using cplx = std::complex<double>;

// Lattice modulus of the torus; requires Im(tau) > 0.
struct TorusModulus {
  explicit TorusModulus(cplx t) : tau(t) {
    if (!(tau.imag() > 0.0)) throw ConfigError("TorusModulus: Im(tau) must be positive");
  }
  cplx tau;
};

namespace detail {
struct GridImpl;
}

class Field;

// Shared immutable grid handle.  Copies are cheap and refer to the same
// spectral plans.
class Grid {
 public:
  Grid(TorusModulus modulus, int n);

  int n() const;
  int size() const;  // n^2 nodes
  cplx tau() const;
  double area() const;  // Im(tau): total quadrature weight
  double quad_weight() const;

  double x(int a) const;
  double y(int b) const;
  int index(int a, int b) const;  // row-major in (a, b)
  cplx z_at(int idx) const;       // x + tau*y

  // Signed frequency of FFT bin k: k for k < n/2, k - n otherwise.
  int freq(int k) const;
  cplx dz_multiplier(int p, int q) const;
  cplx dzbar_multiplier(int p, int q) const;

  // Same underlying resolution and modulus.
  bool compatible(const Grid& other) const;

  const std::shared_ptr<const detail::GridImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const detail::GridImpl> impl_;
};

Grid make_grid(TorusModulus modulus, int n);

// Complex scalar samples on a grid.
class Field {
 public:
  Field() = default;
  Field(Grid grid, std::vector<cplx> values);
  Field(Grid grid, cplx constant);

  static Field sample(const Grid& g, const std::function<cplx(double x, double y, cplx z)>& fn);

  const Grid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<cplx>& values() const { return values_; }
  cplx operator[](int idx) const { return values_[idx]; }
  cplx at(int a, int b) const { return values_[grid_.index(a, b)]; }

  bool finite() const;
  double sup_norm() const;
  double max_imag() const;  // largest |Im| over nodes

  Field conj() const;
  Field real_part() const;

  Field& operator+=(const Field& rhs);
  Field& operator-=(const Field& rhs);
  Field& operator*=(const Field& rhs);  // pointwise
  Field& operator*=(cplx s);
  Field& operator+=(cplx s);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, const Field& b) { return a *= b; }
  friend Field operator*(Field a, cplx s) { return a *= s; }
  friend Field operator*(cplx s, Field a) { return a *= s; }
  friend Field operator+(Field a, cplx s) { return a += s; }

  // Pointwise division; caller guarantees the divisor has no zeros.
  friend Field operator/(Field a, const Field& b);

  Field map(const std::function<cplx(cplx)>& fn) const;

 private:
  void check_same_grid(const Field& rhs) const;
  Grid grid_;
  std::vector<cplx> values_;
};

// Spectral complex derivatives.
Field d_z(const Field& f);
Field d_zbar(const Field& f);

// Uniform quadrature of f against (dzbar ^ dz)/2i; exact for band-limited f.
cplx integrate(const Field& f);

// Mean = zero-frequency Fourier coefficient.
cplx mean(const Field& f);

// Inverse of d_zbar on mean-zero fields; the zero mode of the result is 0.
// The mean of the input is discarded.
Field dzbar_inv(const Field& f);

// ln of a strictly positive real field.
Field log_real(const Field& f);

}  // namespace bel
