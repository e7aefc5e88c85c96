// SPDX-License-Identifier: Apache-2.0
//
// Channel generators: i.i.d. Rayleigh narrowband, Gauss-Markov time series,
// line-of-sight steering channels, and tapped wideband channels with an
// exponential power delay profile.
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "irsoc/rng.hpp"

namespace irsoc {

using cd = std::complex<double>;
using CVec = std::vector<cd>;

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cd& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  const cd& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }
  std::span<cd> row(int r) { return {data_.data() + std::size_t(r) * cols_, std::size_t(cols_)}; }
  std::span<const cd> row(int r) const {
    return {data_.data() + std::size_t(r) * cols_, std::size_t(cols_)};
  }
  std::span<cd> data() { return data_; }
  std::span<const cd> data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  CVec data_;
};

struct NarrowbandChannelSet {
  CVec h1;      // BS -> IRS, length N
  CMatrix h2;   // IRS -> user, K x N
  CVec hd;      // BS -> user, length K

  int n_elements() const { return static_cast<int>(h1.size()); }
  int n_users() const { return static_cast<int>(hd.size()); }
};

struct SteeringChannelSet {
  double theta_a = 0.0;            // DoA at the IRS, radians
  std::vector<double> theta_d;     // per-user DoD, radians
  CVec h_prime;                    // per-user Rayleigh scalar
  double spacing_over_lambda = 0.5;

  int n_users() const { return static_cast<int>(theta_d.size()); }
  /// Per-element phase slope 2*pi*d/lambda*(sin theta_A + sin theta_D,k).
  double phase_slope(int k) const;
};

/// Unit-modulus ULA response e^{-j 2 pi (n-1) d/lambda sin(angle)}, n = 1..N.
CVec steering_vector(int n, double angle_rad, double spacing_over_lambda);

class PowerDelayProfile {
 public:
  /// a_l = c * exp(-nu * l / L) for l = 1..L, normalised to unit sum.
  PowerDelayProfile(int n_taps, double nu);
  explicit PowerDelayProfile(std::vector<double> taps);

  int n_taps() const { return static_cast<int>(taps_.size()); }
  double nu() const { return nu_; }
  std::span<const double> taps() const { return taps_; }
  double operator[](int l) const { return taps_[static_cast<std::size_t>(l)]; }
  /// ||a||_p.
  double norm(double p) const;

 private:
  std::vector<double> taps_;
  double nu_ = 0.0;
};

struct WidebandChannelSet {
  PowerDelayProfile pdp{1, 1.0};
  CVec h1;                   // single-tap LoS BS -> IRS, unit modulus, length N
  std::vector<CMatrix> h2;   // per user: N x L taps IRS -> user
  CMatrix hd;                // K x L direct taps

  int n_users() const { return hd.rows(); }
  int n_elements() const { return static_cast<int>(h1.size()); }
  int n_taps() const { return hd.cols(); }
};

NarrowbandChannelSet gen_narrowband(int n, int k, RngStream& rng);

/// In-place AR(1) update h <- alpha*h + sqrt(1-alpha^2)*v, v ~ CN(0,1).
void evolve_gauss_markov(std::span<cd> h, double alpha, RngStream& rng);
CVec evolve_gauss_markov(const CVec& prev, double alpha, RngStream& rng);

SteeringChannelSet gen_steering(int k, double theta_a, double dod_lo, double dod_hi,
                                double spacing_over_lambda, RngStream& rng);

/// Fresh per-user Rayleigh scalars for a steering set whose directions stay fixed.
void redraw_steering_fading(SteeringChannelSet& ch, RngStream& rng);

WidebandChannelSet gen_wideband(int n, int k, int l, double nu, RngStream& rng,
                                double doa_rad = 0.0, double spacing_over_lambda = 0.5);

/// First-L-columns DFT: X[m] = sum_l x[l] e^{-j 2 pi m l / M}, no scaling.
/// Throws std::invalid_argument when M < L.
CVec to_frequency_domain(std::span<const cd> taps, int m);

}  // namespace irsoc
