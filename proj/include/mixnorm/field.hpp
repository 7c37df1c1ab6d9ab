#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "mixnorm/grid.hpp"

namespace mixnorm {

/// Real scalar samples on a Grid3, one per voxel, x-fastest.
struct ScalarField {
    Grid3 grid;
    Eigen::ArrayXd data;

    explicit ScalarField(const Grid3& g) : grid(g), data(Eigen::ArrayXd::Zero(g.size())) {}
    ScalarField(const Grid3& g, Eigen::ArrayXd d);

    double& operator()(int i, int j, int k) { return data[grid.index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return data[grid.index(i, j, k)]; }

    void validate() const;  // throws if sizes mismatch or samples are non-finite
};

/// Three scalar components sharing one grid.
struct VectorField {
    Grid3 grid;
    std::array<Eigen::ArrayXd, 3> comp;

    explicit VectorField(const Grid3& g)
        : grid(g),
          comp{Eigen::ArrayXd::Zero(g.size()), Eigen::ArrayXd::Zero(g.size()),
               Eigen::ArrayXd::Zero(g.size())} {}

    ScalarField component(int i) const;
    void validate() const;
};

enum class Sign { Plus, Minus };

/// Boolean voxel mask for a super-level set A^{i,+/-}_lambda.
struct LevelSet {
    Grid3 grid;
    std::vector<std::uint8_t> mask;
    int component = -1;  // 0..2, or -1 for a scalar field's set
    Sign sign = Sign::Plus;
    double threshold = 0.0;

    explicit LevelSet(const Grid3& g) : grid(g), mask(std::size_t(g.size()), 0) {}

    std::int64_t count() const;
    double measure() const { return double(count()) * grid.voxel_measure(); }
    LevelSet complement() const;
};

double linf_norm(const ScalarField& f);
/// Max over voxels and components (maximum vector norm).
double linf_norm(const VectorField& u);

double l1_norm(const ScalarField& f);
double l2_norm_sq(const ScalarField& f);
double l2_norm_sq(const VectorField& u);

/// A^{i,sign}_lambda = { u_i^{sign} > lambda * ||u||_inf }, strict inequality.
/// i is 1-based as in the set labels; lambda in (0,1).
LevelSet component_superlevel(const VectorField& u, int i, Sign sign, double lambda);

/// Scalar version: { f^{sign} > lambda * ||f||_inf }.
LevelSet scalar_superlevel(const ScalarField& f, Sign sign, double lambda);

/// { f > threshold } with an absolute threshold.
LevelSet superlevel_abs(const ScalarField& f, double threshold);

}  // namespace mixnorm
