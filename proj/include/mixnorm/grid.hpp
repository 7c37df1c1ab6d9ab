#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "mixnorm/errors.hpp"

namespace mixnorm {

/// Uniform periodic 3D grid. Cell centers at x_k = (k + 1/2) L/n - L/2,
/// k = 0..n-1 per axis; x-fastest linear ordering.
class Grid3 {
  public:
    Grid3(int n, double L = 2.0 * M_PI) : n_(n), L_(L) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw InvalidInput("Grid3: n must be a power of two >= 8, got " + std::to_string(n));
        if (!(L > 0.0)) throw InvalidInput("Grid3: box length must be positive");
    }

    int n() const { return n_; }
    double L() const { return L_; }
    double dx() const { return L_ / n_; }
    std::int64_t size() const { return std::int64_t(n_) * n_ * n_; }
    double voxel_measure() const { return dx() * dx() * dx(); }

    /// Cell-center coordinate along one axis.
    double coord(int k) const { return (k + 0.5) * dx() - 0.5 * L_; }

    std::array<double, 3> center(int i, int j, int k) const {
        return {coord(i), coord(j), coord(k)};
    }

    std::int64_t index(int i, int j, int k) const {
        return std::int64_t(i) + std::int64_t(n_) * (std::int64_t(j) + std::int64_t(n_) * k);
    }

    int wrap(int k) const {
        int m = k % n_;
        return m < 0 ? m + n_ : m;
    }

    /// Index of the voxel whose center is nearest to coordinate x (periodic).
    int nearest(double x) const {
        return wrap(int(std::floor((x + 0.5 * L_) / dx())));
    }

    /// Minimum-image displacement on the periodic box.
    double min_image(double d) const {
        d = std::remainder(d, L_);
        return d;
    }

    bool operator==(const Grid3& o) const { return n_ == o.n_ && L_ == o.L_; }
    bool operator!=(const Grid3& o) const { return !(*this == o); }

  private:
    int n_;
    double L_;
};

}  // namespace mixnorm
