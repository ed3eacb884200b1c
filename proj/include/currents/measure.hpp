#pragma once

#include <currents/chains.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

namespace currents {

/// Weighted point cloud standing in for the mass measure of a chain.
struct MassMeasure {
    int ambient_dim = 0;
    int source_dim = 0;
    Matrix points;  // ambient_dim x q
    Vector weights; // q, strictly positive
    double total = 0.0;

    Index size() const { return weights.size(); }
};

/// Axis-aligned lattice of hyperplanes x_k = origin_k + m * spacing_k.
struct AxisLattice {
    Vector origin;
    Vector spacing;
};

///
/// Per-simplex symmetric rules scaled by |theta| * volume. Orders 1..3 are
/// exact for polynomials of degree 1, 3, 5 on segments and 1, 4, 5 on
/// triangles. 0-chains become point masses. Throws UnsupportedOrder.
///
MassMeasure quadrature_measure(const Chain& chain, int order = 2);

///
/// Splits every simplex along the hyperplanes of `lattice` and applies a
/// Gauss rule with `points` nodes per direction on each piece, so that
/// piecewise polynomials with breaks on the lattice are integrated exactly up
/// to degree 2*points-1.
///
MassMeasure quadrature_measure_aligned(const Chain& chain, const AxisLattice& lattice, int points);

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_unit(int n, Vector& nodes, Vector& weights);

/// Deterministic pairwise (tree) summation.
double pairwise_sum(const double* values, Index n);

///
/// Sum of w_i f(p_i) with a fixed reduction order. Throws NonFiniteValue when
/// f is not finite at a node.
///
template <typename F>
double integrate(const MassMeasure& measure, F&& f)
{
    Vector terms(measure.size());
    for (Index i = 0; i < measure.size(); ++i) {
        const double v = f(measure.points.col(i));
        require(std::isfinite(v), ErrorCode::NonFiniteValue, "integrand is not finite at a quadrature node");
        terms(i) = measure.weights(i) * v;
    }
    return pairwise_sum(terms.data(), terms.size());
}

using ScalarField = std::function<double(const Eigen::Ref<const Vector>&)>;

/// Mass binned into the open lattice cubes of a randomly offset grid.
struct GridReport {
    double spacing = 0.0;
    Vector offset;
    std::map<std::vector<long long>, double> cube_masses;
    double leftover = 0.0;
    int attempts = 0;
};

/// Draws a grid offset in [0, spacing)^N.
using OffsetSampler = std::function<Vector(int ambient_dim, double spacing)>;

///
/// Picks an offset from `offset_seed` such that the mass within 1e-9 * spacing
/// of the grid hyperplanes is below 1e-6 * total, retrying up to 100 draws.
/// Throws GridMassNotAvoidable.
///
GridReport mass_on_grid(const MassMeasure& measure, double spacing, std::uint64_t offset_seed);
GridReport mass_on_grid(const MassMeasure& measure, double spacing, const OffsetSampler& sampler);

/// For each measure, max over tests of |int phi d mu_i - int phi d mu|.
std::vector<double> weak_gap(
    const std::vector<MassMeasure>& sequence,
    const MassMeasure& limit,
    const std::vector<ScalarField>& tests);

/// min over radii of measure(B(x, r)) / r^dim. Throws EmptyRadii.
double lower_density(const MassMeasure& measure, const Point& x, int dim, const std::vector<double>& radii);

/// CSV with columns x1..xN,weight.
void write_measure_csv(std::ostream& out, const MassMeasure& measure);

} // namespace currents
