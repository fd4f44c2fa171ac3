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

#include "beltrami/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

namespace bel {

namespace detail {

// FFTW planner access and plan execution share one mutex per grid; plans
// run on internal buffers, so execution must be serialized as well.
struct GridImpl {
  cplx tau;
  int n = 0;
  double quad_weight = 0.0;

  std::vector<cplx> dz_mult;    // per FFT bin, row-major (p_bin*n + q_bin)
  std::vector<cplx> dzb_mult;

  mutable std::mutex fft_mutex;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  GridImpl(cplx tau_, int n_) : tau(tau_), n(n_) {
    const int sz = n * n;
    quad_weight = tau.imag() / static_cast<double>(sz);

    buf = fftw_alloc_complex(sz);
    fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);

    const double pi = M_PI;
    const double im = tau.imag();
    dz_mult.resize(sz);
    dzb_mult.resize(sz);
    for (int kp = 0; kp < n; ++kp) {
      const int p = kp < n / 2 ? kp : kp - n;
      for (int kq = 0; kq < n; ++kq) {
        const int q = kq < n / 2 ? kq : kq - n;
        const cplx pc(static_cast<double>(p), 0.0);
        const cplx qc(static_cast<double>(q), 0.0);
        dz_mult[kp * n + kq] = -pi * (std::conj(tau) * pc - qc) / im;
        dzb_mult[kp * n + kq] = pi * (tau * pc - qc) / im;
      }
    }
  }

  ~GridImpl() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }

  GridImpl(const GridImpl&) = delete;
  GridImpl& operator=(const GridImpl&) = delete;

  // Forward transform scaled by 1/n^2, so the output bins are Fourier
  // coefficients of f = sum c_{pq} e^{2 pi i (p x + q y)}.
  std::vector<cplx> to_modes(const std::vector<cplx>& v) const {
    const int sz = n * n;
    std::vector<cplx> out(sz);
    std::lock_guard<std::mutex> lock(fft_mutex);
    std::memcpy(buf, v.data(), sizeof(cplx) * sz);
    fftw_execute(fwd);
    const double scale = 1.0 / static_cast<double>(sz);
    for (int k = 0; k < sz; ++k) out[k] = cplx(buf[k][0], buf[k][1]) * scale;
    return out;
  }

  std::vector<cplx> from_modes(const std::vector<cplx>& m) const {
    const int sz = n * n;
    std::vector<cplx> out(sz);
    std::lock_guard<std::mutex> lock(fft_mutex);
    std::memcpy(buf, m.data(), sizeof(cplx) * sz);
    fftw_execute(bwd);
    for (int k = 0; k < sz; ++k) out[k] = cplx(buf[k][0], buf[k][1]);
    return out;
  }
};

}  // namespace detail

Grid::Grid(TorusModulus modulus, int n) {
  if (n < 4 || n % 2 != 0) throw ConfigError("Grid: resolution must be even and >= 4");
  impl_ = std::make_shared<const detail::GridImpl>(modulus.tau, n);
}

Grid make_grid(TorusModulus modulus, int n) { return Grid(modulus, n); }

int Grid::n() const { return impl_->n; }
int Grid::size() const { return impl_->n * impl_->n; }
cplx Grid::tau() const { return impl_->tau; }
double Grid::area() const { return impl_->tau.imag(); }
double Grid::quad_weight() const { return impl_->quad_weight; }

double Grid::x(int a) const { return static_cast<double>(a) / impl_->n; }
double Grid::y(int b) const { return static_cast<double>(b) / impl_->n; }
int Grid::index(int a, int b) const { return a * impl_->n + b; }

cplx Grid::z_at(int idx) const {
  const int a = idx / impl_->n;
  const int b = idx % impl_->n;
  return cplx(x(a), 0.0) + impl_->tau * y(b);
}

int Grid::freq(int k) const { return k < impl_->n / 2 ? k : k - impl_->n; }

cplx Grid::dz_multiplier(int p, int q) const {
  const int n = impl_->n;
  return impl_->dz_mult[((p % n + n) % n) * n + ((q % n + n) % n)];
}

cplx Grid::dzbar_multiplier(int p, int q) const {
  const int n = impl_->n;
  return impl_->dzb_mult[((p % n + n) % n) * n + ((q % n + n) % n)];
}

bool Grid::compatible(const Grid& other) const {
  if (impl_ == other.impl_) return true;
  return impl_->n == other.impl_->n && impl_->tau == other.impl_->tau;
}

Field::Field(Grid grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw ConfigError("Field: sample count does not match grid");
  if (!finite()) throw ConfigError("Field: non-finite samples");
}

Field::Field(Grid grid, cplx constant)
    : grid_(std::move(grid)), values_(static_cast<size_t>(grid_.size()), constant) {}

Field Field::sample(const Grid& g, const std::function<cplx(double, double, cplx)>& fn) {
  std::vector<cplx> v(static_cast<size_t>(g.size()));
  for (int a = 0; a < g.n(); ++a)
    for (int b = 0; b < g.n(); ++b) {
      const double xa = g.x(a), yb = g.y(b);
      v[g.index(a, b)] = fn(xa, yb, cplx(xa, 0.0) + g.tau() * yb);
    }
  return Field(g, std::move(v));
}

bool Field::finite() const {
  for (const cplx& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double Field::sup_norm() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::max_imag() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

Field Field::conj() const {
  std::vector<cplx> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = std::conj(values_[k]);
  return Field(grid_, std::move(v));
}

Field Field::real_part() const {
  std::vector<cplx> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = cplx(values_[k].real(), 0.0);
  return Field(grid_, std::move(v));
}

void Field::check_same_grid(const Field& rhs) const {
  if (!grid_.compatible(rhs.grid_)) throw GridMismatchError("Field: grids differ");
}

Field& Field::operator+=(const Field& rhs) {
  check_same_grid(rhs);
  for (size_t k = 0; k < values_.size(); ++k) values_[k] += rhs.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& rhs) {
  check_same_grid(rhs);
  for (size_t k = 0; k < values_.size(); ++k) values_[k] -= rhs.values_[k];
  return *this;
}

Field& Field::operator*=(const Field& rhs) {
  check_same_grid(rhs);
  for (size_t k = 0; k < values_.size(); ++k) values_[k] *= rhs.values_[k];
  return *this;
}

Field& Field::operator*=(cplx s) {
  for (cplx& v : values_) v *= s;
  return *this;
}

Field& Field::operator+=(cplx s) {
  for (cplx& v : values_) v += s;
  return *this;
}

Field operator/(Field a, const Field& b) {
  a.check_same_grid(b);
  for (size_t k = 0; k < a.values_.size(); ++k) a.values_[k] /= b.values_[k];
  return a;
}

Field Field::map(const std::function<cplx(cplx)>& fn) const {
  std::vector<cplx> v(values_.size());
  for (size_t k = 0; k < values_.size(); ++k) v[k] = fn(values_[k]);
  return Field(grid_, std::move(v));
}

namespace {

Field apply_multiplier(const Field& f, const std::vector<cplx>& mult) {
  const auto& impl = *f.grid().impl();
  std::vector<cplx> modes = impl.to_modes(f.values());
  for (size_t k = 0; k < modes.size(); ++k) modes[k] *= mult[k];
  return Field(f.grid(), impl.from_modes(modes));
}

}  // namespace

Field d_z(const Field& f) { return apply_multiplier(f, f.grid().impl()->dz_mult); }
Field d_zbar(const Field& f) { return apply_multiplier(f, f.grid().impl()->dzb_mult); }

cplx integrate(const Field& f) {
  cplx s(0.0, 0.0);
  for (const cplx& v : f.values()) s += v;
  return s * f.grid().quad_weight();
}

cplx mean(const Field& f) { return integrate(f) / f.grid().area(); }

Field dzbar_inv(const Field& f) {
  const auto& impl = *f.grid().impl();
  std::vector<cplx> modes = impl.to_modes(f.values());
  modes[0] = cplx(0.0, 0.0);
  for (size_t k = 1; k < modes.size(); ++k) modes[k] /= impl.dzb_mult[k];
  return Field(f.grid(), impl.from_modes(modes));
}

Field log_real(const Field& f) {
  return f.map([](cplx v) {
    if (!(v.real() > 0.0)) throw NumericalError("log_real: field not strictly positive");
    return cplx(std::log(v.real()), 0.0);
  });
}

}  // namespace bel
