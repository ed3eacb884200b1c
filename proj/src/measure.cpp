#include <currents/measure.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

namespace currents {

namespace {

struct SimplexRule {
    Matrix barycentric; // (d+1) x nodes
    Vector weights;     // sum to one
};

SimplexRule segment_rule(int order)
{
    SimplexRule r;
    switch (order) {
    case 1:
        r.barycentric.resize(2, 1);
        r.barycentric << 0.5, 0.5;
        r.weights = Vector::Constant(1, 1.0);
        break;
    case 2: {
        const double a = 0.5 - 0.5 / std::sqrt(3.0);
        r.barycentric.resize(2, 2);
        r.barycentric << 1 - a, a, a, 1 - a;
        r.weights = Vector::Constant(2, 0.5);
        break;
    }
    case 3: {
        const double a = 0.5 - 0.5 * std::sqrt(0.6);
        r.barycentric.resize(2, 3);
        r.barycentric << 1 - a, 0.5, a, a, 0.5, 1 - a;
        r.weights.resize(3);
        r.weights << 5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0;
        break;
    }
    default: fail(ErrorCode::UnsupportedOrder, "quadrature order " + std::to_string(order));
    }
    return r;
}

// Fully symmetric triangle rules: centroid, 6-point degree 4, 7-point degree 5.
SimplexRule triangle_rule(int order)
{
    SimplexRule r;
    auto orbit3 = [](Matrix& b, Vector& w, Index at, double a, double weight) {
        const double c = 1.0 - 2.0 * a;
        b.col(at) << c, a, a;
        b.col(at + 1) << a, c, a;
        b.col(at + 2) << a, a, c;
        w.segment(at, 3).setConstant(weight);
    };
    switch (order) {
    case 1:
        r.barycentric = Matrix::Constant(3, 1, 1.0 / 3.0);
        r.weights = Vector::Constant(1, 1.0);
        break;
    case 2:
        r.barycentric.resize(3, 6);
        r.weights.resize(6);
        orbit3(r.barycentric, r.weights, 0, 0.445948490915965, 0.223381589678011);
        orbit3(r.barycentric, r.weights, 3, 0.091576213509771, 0.109951743655322);
        break;
    case 3:
        r.barycentric.resize(3, 7);
        r.weights.resize(7);
        r.barycentric.col(0).setConstant(1.0 / 3.0);
        r.weights(0) = 0.225;
        orbit3(r.barycentric, r.weights, 1, 0.470142064105115, 0.132394152788506);
        orbit3(r.barycentric, r.weights, 4, 0.101286507323456, 0.125939180544827);
        break;
    default: fail(ErrorCode::UnsupportedOrder, "quadrature order " + std::to_string(order));
    }
    r.weights /= r.weights.sum();
    return r;
}

class MeasureBuilder {
public:
    MeasureBuilder(int ambient_dim, int source_dim) : ambient_dim_(ambient_dim), source_dim_(source_dim) {}

    void add(const Eigen::Ref<const Vector>& p, double w)
    {
        if (!(w > 0.0)) return;
        points_.insert(points_.end(), p.data(), p.data() + ambient_dim_);
        weights_.push_back(w);
    }

    MassMeasure finish() &&
    {
        MassMeasure m;
        m.ambient_dim = ambient_dim_;
        m.source_dim = source_dim_;
        const Index q = static_cast<Index>(weights_.size());
        m.points = Eigen::Map<const Matrix>(points_.data(), ambient_dim_, q);
        m.weights = Eigen::Map<const Vector>(weights_.data(), q);
        m.total = pairwise_sum(m.weights.data(), q);
        return m;
    }

private:
    int ambient_dim_;
    int source_dim_;
    std::vector<double> points_;
    std::vector<double> weights_;
};

} // namespace

double pairwise_sum(const double* values, Index n)
{
    if (n <= 8) {
        double s = 0.0;
        for (Index i = 0; i < n; ++i) s += values[i];
        return s;
    }
    const Index half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

MassMeasure quadrature_measure(const Chain& chain, int order)
{
    require(order >= 1 && order <= 3, ErrorCode::UnsupportedOrder, "quadrature order " + std::to_string(order));
    const auto& cx = *chain.complex;
    MeasureBuilder out(cx.ambient_dim(), chain.dim);
    if (chain.dim == 0) {
        for (Index i = 0; i < chain.size(); ++i) out.add(cx.vertex(i), std::abs(chain.multiplicities(i)));
        return std::move(out).finish();
    }
    require(chain.dim <= 2, ErrorCode::UnsupportedDimension, "quadrature on simplices of dimension > 2");
    const SimplexRule rule = chain.dim == 1 ? segment_rule(order) : triangle_rule(order);
    for (Index i = 0; i < chain.size(); ++i) {
        const double theta = std::abs(chain.multiplicities(i));
        if (theta == 0.0) continue;
        const Matrix corners = cx.corners(chain.dim, i);
        const double scale = theta * cx.volume(chain.dim, i);
        for (Index q = 0; q < rule.weights.size(); ++q) {
            out.add(corners * rule.barycentric.col(q), scale * rule.weights(q));
        }
    }
    return std::move(out).finish();
}

void gauss_legendre_unit(int n, Vector& nodes, Vector& weights)
{
    require(n >= 1, ErrorCode::UnsupportedOrder, "Gauss rule needs at least one node");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes(n - 1 - i) = 0.5 * (1.0 + x);
        weights(n - 1 - i) = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// Convex polygon in the parameter plane of a triangle (u, v) -> a + u d1 + v d2.
using Polygon = std::vector<Eigen::Vector2d>;

// Splits a convex polygon by the zero set of the affine function f.
void split_polygon(const Polygon& poly, const std::function<double(const Eigen::Vector2d&)>& f, Polygon& below,
                   Polygon& above)
{
    below.clear();
    above.clear();
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& p = poly[i];
        const Eigen::Vector2d& q = poly[(i + 1) % n];
        const double sp = f(p);
        const double sq = f(q);
        if (sp <= 0) below.push_back(p);
        if (sp >= 0) above.push_back(p);
        if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) {
            const double t = sp / (sp - sq);
            const Eigen::Vector2d x = p + t * (q - p);
            below.push_back(x);
            above.push_back(x);
        }
    }
    if (below.size() < 3) below.clear();
    if (above.size() < 3) above.clear();
}

std::vector<double> lattice_planes(double lo, double hi, double origin, double spacing)
{
    std::vector<double> planes;
    const double first = std::ceil((lo - origin) / spacing);
    for (double m = first;; m += 1.0) {
        const double v = origin + m * spacing;
        if (v >= hi) break;
        if (v > lo) planes.push_back(v);
    }
    return planes;
}

// Signed area of the parameter triangle (p0, p1, p2).
double parameter_area(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2)
{
    const Eigen::Vector2d a = p1 - p0, b = p2 - p0;
    return 0.5 * (a(0) * b(1) - a(1) * b(0));
}

} // namespace

MassMeasure quadrature_measure_aligned(const Chain& chain, const AxisLattice& lattice, int points)
{
    const auto& cx = *chain.complex;
    const int n = cx.ambient_dim();
    require(lattice.origin.size() == n && lattice.spacing.size() == n, ErrorCode::DimensionMismatch,
            "lattice dimension");
    require((lattice.spacing.array() > 0).all(), ErrorCode::InvalidArgument, "lattice spacing must be positive");
    if (chain.dim == 0) return quadrature_measure(chain, 1);
    require(chain.dim <= 2, ErrorCode::UnsupportedDimension, "aligned quadrature on simplices of dimension > 2");

    Vector gx, gw;
    gauss_legendre_unit(points, gx, gw);
    Vector ux, uw; // one more node in the collapsed direction
    gauss_legendre_unit(points + 1, ux, uw);

    MeasureBuilder out(n, chain.dim);
    for (Index i = 0; i < chain.size(); ++i) {
        const double theta = std::abs(chain.multiplicities(i));
        if (theta == 0.0) continue;
        const Matrix corners = cx.corners(chain.dim, i);
        if (chain.dim == 1) {
            const Vector a = corners.col(0);
            const Vector d = corners.col(1) - a;
            const double length = cx.volume(1, i);
            std::vector<double> breaks{0.0, 1.0};
            for (int k = 0; k < n; ++k) {
                if (d(k) == 0.0) continue;
                const double lo = std::min(a(k), a(k) + d(k));
                const double hi = std::max(a(k), a(k) + d(k));
                for (double v : lattice_planes(lo, hi, lattice.origin(k), lattice.spacing(k))) {
                    breaks.push_back((v - a(k)) / d(k));
                }
            }
            std::sort(breaks.begin(), breaks.end());
            for (size_t b = 0; b + 1 < breaks.size(); ++b) {
                const double t0 = breaks[b], t1 = breaks[b + 1];
                if (t1 <= t0) continue;
                for (Index q = 0; q < gx.size(); ++q) {
                    out.add(a + (t0 + gx(q) * (t1 - t0)) * d, theta * length * (t1 - t0) * gw(q));
                }
            }
            continue;
        }
        const Vector origin = corners.col(0);
        const Vector d1 = corners.col(1) - origin;
        const Vector d2 = corners.col(2) - origin;
        // Parameter area 1/2 corresponds to the triangle's volume.
        const double scale = 2.0 * theta * cx.volume(2, i);
        std::vector<Polygon> pieces{Polygon{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}};
        for (int k = 0; k < n; ++k) {
            const double lo = corners.row(k).minCoeff();
            const double hi = corners.row(k).maxCoeff();
            for (double v : lattice_planes(lo, hi, lattice.origin(k), lattice.spacing(k))) {
                const auto f = [&](const Eigen::Vector2d& p) { return origin(k) + p(0) * d1(k) + p(1) * d2(k) - v; };
                std::vector<Polygon> next;
                Polygon below, above;
                for (const auto& p : pieces) {
                    split_polygon(p, f, below, above);
                    if (!below.empty()) next.push_back(below);
                    if (!above.empty()) next.push_back(above);
                }
                pieces.swap(next);
            }
        }
        for (const auto& poly : pieces) {
            for (size_t t = 1; t + 1 < poly.size(); ++t) {
                const Eigen::Vector2d& p0 = poly[0];
                const Eigen::Vector2d& p1 = poly[t];
                const Eigen::Vector2d& p2 = poly[t + 1];
                const double area = std::abs(parameter_area(p0, p1, p2));
                if (!(area > 0.0)) continue;
                // Collapsed Gauss rule on the reference triangle.
                for (Index a = 0; a < ux.size(); ++a) {
                    for (Index b = 0; b < gx.size(); ++b) {
                        const double s = ux(a);
                        const double r = gx(b) * (1.0 - s);
                        const double w = 2.0 * uw(a) * gw(b) * (1.0 - s);
                        const Eigen::Vector2d uv = p0 + s * (p1 - p0) + r * (p2 - p0);
                        out.add(origin + uv(0) * d1 + uv(1) * d2, scale * area * w);
                    }
                }
            }
        }
    }
    return std::move(out).finish();
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

GridReport mass_on_grid(const MassMeasure& measure, double spacing, std::uint64_t offset_seed)
{
    std::mt19937_64 rng(offset_seed);
    return mass_on_grid(measure, spacing, [&](int n, double delta) {
        Vector a(n);
        for (int k = 0; k < n; ++k) a(k) = delta * uniform01(rng);
        return a;
    });
}

GridReport mass_on_grid(const MassMeasure& measure, double spacing, const OffsetSampler& sampler)
{
    require(spacing > 0.0, ErrorCode::InvalidArgument, "grid spacing must be positive");
    GridReport report;
    report.spacing = spacing;
    const int n = measure.ambient_dim;
    if (measure.size() == 0) {
        report.offset = Vector::Zero(n);
        return report;
    }
    const double near = 1e-9 * spacing;
    for (int attempt = 1; attempt <= 100; ++attempt) {
        const Vector a = sampler(n, spacing);
        std::vector<char> on_grid(measure.size(), 0);
        std::vector<double> grid_terms;
        for (Index i = 0; i < measure.size(); ++i) {
            for (int k = 0; k < n; ++k) {
                const double u = (measure.points(k, i) - a(k)) / spacing;
                if (std::abs(u - std::round(u)) * spacing < near) {
                    on_grid[i] = 1;
                    break;
                }
            }
            if (on_grid[i]) grid_terms.push_back(measure.weights(i));
        }
        const double leftover = pairwise_sum(grid_terms.data(), static_cast<Index>(grid_terms.size()));
        if (leftover >= 1e-6 * measure.total) continue;

        report.offset = a;
        report.leftover = leftover;
        report.attempts = attempt;
        std::map<std::vector<long long>, std::vector<double>> bins;
        std::vector<long long> key(n);
        for (Index i = 0; i < measure.size(); ++i) {
            if (on_grid[i]) continue;
            for (int k = 0; k < n; ++k) {
                key[k] = static_cast<long long>(std::floor((measure.points(k, i) - a(k)) / spacing));
            }
            bins[key].push_back(measure.weights(i));
        }
        for (auto& [b, w] : bins) report.cube_masses[b] = pairwise_sum(w.data(), static_cast<Index>(w.size()));
        return report;
    }
    fail(ErrorCode::GridMassNotAvoidable, "mass concentrates on grid hyperplanes for every drawn offset");
}

std::vector<double> weak_gap(
    const std::vector<MassMeasure>& sequence,
    const MassMeasure& limit,
    const std::vector<ScalarField>& tests)
{
    require(!tests.empty(), ErrorCode::InvalidArgument, "weak_gap needs at least one test function");
    std::vector<double> reference;
    for (const auto& phi : tests) reference.push_back(integrate(limit, phi));
    std::vector<double> gaps;
    for (const auto& mu : sequence) {
        double gap = 0.0;
        for (size_t t = 0; t < tests.size(); ++t) gap = std::max(gap, std::abs(integrate(mu, tests[t]) - reference[t]));
        gaps.push_back(gap);
    }
    return gaps;
}

double lower_density(const MassMeasure& measure, const Point& x, int dim, const std::vector<double>& radii)
{
    require(!radii.empty(), ErrorCode::EmptyRadii, "lower density needs at least one radius");
    double best = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        require(r > 0.0, ErrorCode::InvalidArgument, "radii must be positive");
        std::vector<double> inside;
        for (Index i = 0; i < measure.size(); ++i) {
            if ((measure.points.col(i) - x).norm() <= r) inside.push_back(measure.weights(i));
        }
        const double ball = pairwise_sum(inside.data(), static_cast<Index>(inside.size()));
        best = std::min(best, ball / std::pow(r, dim));
    }
    return best;
}

void write_measure_csv(std::ostream& out, const MassMeasure& measure)
{
    for (int k = 0; k < measure.ambient_dim; ++k) out << 'x' << (k + 1) << ',';
    out << "weight\n";
    out << std::setprecision(17);
    for (Index i = 0; i < measure.size(); ++i) {
        for (int k = 0; k < measure.ambient_dim; ++k) out << measure.points(k, i) << ',';
        out << measure.weights(i) << '\n';
    }
}

} // namespace currents
