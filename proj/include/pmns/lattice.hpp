#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmns {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integer frequency lattice of the unit torus [0,1)^n.  Axis frequencies run
// over -M/2 <= m < M/2 in FFT storage order; the physical frequency of a
// lattice point is xi = 2*pi*m.
class FrequencyLattice {
 public:
  FrequencyLattice(int dim, int size) : dim_(dim), size_(size) {
    if (dim != 2 && dim != 3)
      throw std::invalid_argument("FrequencyLattice: dimension must be 2 or 3");
    if (size < 16 || (size & (size - 1)) != 0)
      throw std::invalid_argument(
          "FrequencyLattice: points-per-axis must be a power of two >= 16, got " +
          std::to_string(size));
  }

  int dim() const { return dim_; }
  int size() const { return size_; }
  int nyquist() const { return size_ / 2; }

  std::size_t total() const {
    std::size_t t = 1;
    for (int a = 0; a < dim_; ++a) t *= static_cast<std::size_t>(size_);
    return t;
  }

  int freq_of_index(int i) const { return i < size_ / 2 ? i : i - size_; }
  int index_of_freq(int m) const { return m >= 0 ? m : m + size_; }

  // Decodes a flat row-major index into per-axis frequencies.
  void decode(std::size_t flat, int* m) const {
    for (int a = dim_ - 1; a >= 0; --a) {
      m[a] = freq_of_index(static_cast<int>(flat % size_));
      flat /= size_;
    }
  }

  std::size_t encode(const int* m) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a)
      flat = flat * size_ + static_cast<std::size_t>(index_of_freq(m[a]));
    return flat;
  }

  bool operator==(const FrequencyLattice& o) const {
    return dim_ == o.dim_ && size_ == o.size_;
  }
  bool operator!=(const FrequencyLattice& o) const { return !(*this == o); }

 private:
  int dim_;
  int size_;
};

// Scalar field stored as Fourier coefficients on a FrequencyLattice.
class SpectralField {
 public:
  explicit SpectralField(const FrequencyLattice& lattice, bool real_valued = false)
      : lattice_(lattice), real_(real_valued), values_(lattice.total(), cplx(0.0)) {}

  SpectralField(const FrequencyLattice& lattice, std::vector<cplx> values,
                bool real_valued = false)
      : lattice_(lattice), real_(real_valued), values_(std::move(values)) {
    if (values_.size() != lattice_.total())
      throw std::invalid_argument("SpectralField: value count does not match lattice");
    if (real_) check_hermitian();
  }

  const FrequencyLattice& lattice() const { return lattice_; }
  bool real_valued() const { return real_; }
  void set_real_valued(bool flag) {
    real_ = flag;
    if (real_) check_hermitian();
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }

  cplx at_freq(const int* m) const { return values_[lattice_.encode(m)]; }
  void set_freq(const int* m, cplx v) { values_[lattice_.encode(m)] = v; }

  double l2_norm() const {
    double s = 0.0;
    for (const cplx& v : values_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const cplx& v : values_) s = std::max(s, std::abs(v));
    return s;
  }

  // Largest |m_i| carrying a nonzero coefficient, per axis.
  std::vector<int> support_bound() const;

  SpectralField& operator+=(const SpectralField& o) {
    require_same_lattice(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    real_ = real_ && o.real_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_lattice(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    real_ = real_ && o.real_;
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (cplx& v : values_) v *= a;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    a += b;
    return a;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    a -= b;
    return a;
  }
  friend SpectralField operator*(double a, SpectralField f) {
    f *= a;
    return f;
  }

  void require_same_lattice(const SpectralField& o) const {
    if (lattice_ != o.lattice_)
      throw std::invalid_argument("SpectralField: lattice mismatch");
  }

 private:
  void check_hermitian() const;

  FrequencyLattice lattice_;
  bool real_;
  std::vector<cplx> values_;
};

inline cplx inner_product(const SpectralField& f, const SpectralField& g) {
  f.require_same_lattice(g);
  cplx s(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s;
}

// Vector field with components sharing one lattice.
class VectorField {
 public:
  explicit VectorField(const FrequencyLattice& lattice, bool real_valued = false) {
    for (int a = 0; a < lattice.dim(); ++a)
      comps_.emplace_back(lattice, real_valued);
  }

  explicit VectorField(std::vector<SpectralField> comps) : comps_(std::move(comps)) {
    if (comps_.empty()) throw std::invalid_argument("VectorField: no components");
    if (static_cast<int>(comps_.size()) != comps_[0].lattice().dim())
      throw std::invalid_argument("VectorField: component count must equal dimension");
    for (const auto& c : comps_) comps_[0].require_same_lattice(c);
  }

  const FrequencyLattice& lattice() const { return comps_[0].lattice(); }
  int dim() const { return static_cast<int>(comps_.size()); }
  const SpectralField& operator[](int a) const { return comps_[a]; }
  SpectralField& operator[](int a) { return comps_[a]; }

  double l2_norm() const {
    double s = 0.0;
    for (const auto& c : comps_) {
      double n = c.l2_norm();
      s += n * n;
    }
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const auto& c : comps_) s = std::max(s, c.max_abs());
    return s;
  }

  // max_m |sum_l m_l v_l(m)| / max |v|; zero for the zero field.
  double divergence_ratio() const;
  // max_m |sum_l m_l v_l(m)| without normalization.
  double divergence_abs() const;
  bool is_divergence_free(double tol = 1e-10) const {
    return divergence_ratio() <= tol;
  }

  VectorField& operator+=(const VectorField& o) {
    for (int a = 0; a < dim(); ++a) comps_[a] += o.comps_[a];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    for (int a = 0; a < dim(); ++a) comps_[a] -= o.comps_[a];
    return *this;
  }
  VectorField& operator*=(double s) {
    for (auto& c : comps_) c *= s;
    return *this;
  }
  friend VectorField operator-(VectorField a, const VectorField& b) {
    a -= b;
    return a;
  }
  friend VectorField operator+(VectorField a, const VectorField& b) {
    a += b;
    return a;
  }

 private:
  std::vector<SpectralField> comps_;
};

}  // namespace pmns
