#include "mixnorm/field.hpp"

#include <cmath>

namespace mixnorm {

ScalarField::ScalarField(const Grid3& g, Eigen::ArrayXd d) : grid(g), data(std::move(d)) {
    if (data.size() != grid.size())
        throw InvalidInput("ScalarField: data length does not match grid");
}

void ScalarField::validate() const {
    if (data.size() != grid.size())
        throw InvalidInput("ScalarField: data length does not match grid");
    if (!data.isFinite().all())
        throw InvalidInput("ScalarField: non-finite sample");
}

ScalarField VectorField::component(int i) const {
    if (i < 0 || i > 2) throw InvalidInput("VectorField: component index out of range");
    return ScalarField(grid, comp[i]);
}

void VectorField::validate() const {
    for (const auto& c : comp) {
        if (c.size() != grid.size())
            throw InvalidInput("VectorField: component length does not match grid");
        if (!c.isFinite().all())
            throw InvalidInput("VectorField: non-finite sample");
    }
}

std::int64_t LevelSet::count() const {
    std::int64_t c = 0;
    for (auto v : mask) c += v != 0;
    return c;
}

LevelSet LevelSet::complement() const {
    LevelSet out(grid);
    out.component = component;
    out.sign = sign == Sign::Plus ? Sign::Minus : Sign::Plus;
    out.threshold = threshold;
    for (std::size_t v = 0; v < mask.size(); ++v) out.mask[v] = mask[v] ? 0 : 1;
    return out;
}

double linf_norm(const ScalarField& f) {
    if (f.data.size() == 0) throw InvalidInput("linf_norm: empty field");
    return f.data.abs().maxCoeff();
}

double linf_norm(const VectorField& u) {
    double m = 0.0;
    for (const auto& c : u.comp) {
        if (c.size() == 0) throw InvalidInput("linf_norm: empty field");
        m = std::max(m, c.abs().maxCoeff());
    }
    return m;
}

double l1_norm(const ScalarField& f) { return f.data.abs().sum() * f.grid.voxel_measure(); }

double l2_norm_sq(const ScalarField& f) { return f.data.square().sum() * f.grid.voxel_measure(); }

double l2_norm_sq(const VectorField& u) {
    double s = 0.0;
    for (const auto& c : u.comp) s += c.square().sum();
    return s * u.grid.voxel_measure();
}

namespace {

LevelSet superlevel_impl(const Grid3& grid, const Eigen::ArrayXd& data, Sign sign,
                         double threshold, int component) {
    LevelSet S(grid);
    S.component = component;
    S.sign = sign;
    S.threshold = threshold;
    const double s = sign == Sign::Plus ? 1.0 : -1.0;
    for (std::int64_t v = 0; v < data.size(); ++v) {
        // g^+ = max(g,0), g^- = -min(g,0); the positive part test reduces to s*g > thr
        S.mask[std::size_t(v)] = (s * data[v] > threshold) ? 1 : 0;
    }
    return S;
}

}  // namespace

LevelSet component_superlevel(const VectorField& u, int i, Sign sign, double lambda) {
    if (i < 1 || i > 3) throw InvalidInput("component_superlevel: i must be in {1,2,3}");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidInput("component_superlevel: lambda must be in (0,1)");
    const double thr = lambda * linf_norm(u);
    return superlevel_impl(u.grid, u.comp[i - 1], sign, thr, i - 1);
}

LevelSet scalar_superlevel(const ScalarField& f, Sign sign, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidInput("scalar_superlevel: lambda must be in (0,1)");
    const double thr = lambda * linf_norm(f);
    return superlevel_impl(f.grid, f.data, sign, thr, -1);
}

LevelSet superlevel_abs(const ScalarField& f, double threshold) {
    if (threshold < 0.0) throw InvalidInput("superlevel_abs: threshold must be >= 0");
    return superlevel_impl(f.grid, f.data, Sign::Plus, threshold, -1);
}

}  // namespace mixnorm
