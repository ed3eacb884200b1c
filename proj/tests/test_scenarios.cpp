#include "oracles.hpp"
#include "test_util.hpp"

#include <currents/scenarios.hpp>

#include <doctest.h>

#include <numeric>
#include <set>

using namespace currents;
using testing::code_of;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const Chain& c) { return c.size() ? c.multiplicities.lpNorm<Eigen::Infinity>() : 0.0; }

// Number of connected components of the support of a 1-chain.
int loop_count(const Chain& b)
{
    const auto& cx = *b.complex;
    std::vector<int> parent(static_cast<size_t>(cx.num_vertices()));
    std::iota(parent.begin(), parent.end(), 0);
    const std::function<int(int)> root = [&](int v) { return parent[v] == v ? v : parent[v] = root(parent[v]); };
    std::set<int> used;
    for (Index e : set_of(b).indices) {
        const int a = cx.simplex(1, e)(0), c = cx.simplex(1, e)(1);
        parent[root(a)] = root(c);
        used.insert(a);
        used.insert(c);
    }
    std::set<int> roots;
    for (int v : used) roots.insert(root(v));
    return static_cast<int>(roots.size());
}

Index euler_characteristic(const SimplicialComplex& cx)
{
    return cx.num_simplices(0) - cx.num_simplices(1) + cx.num_simplices(2);
}

double enclosed_volume(const Chain& surface)
{
    const auto& cx = *surface.complex;
    double v = 0.0;
    for (Index t = 0; t < surface.size(); ++t) {
        const Matrix c = cx.corners(2, t);
        Eigen::Matrix3d m;
        m << c.col(0), c.col(1), c.col(2);
        v += surface.multiplicities(t) * m.determinant() / 6.0;
    }
    return v;
}

} // namespace

TEST_SUITE("scenarios")
{
    TEST_CASE("circles")
    {
        CHECK(mass(gen_circle(Point::Zero(2), 1.0, 64)) == doctest::Approx(6.280663).epsilon(1e-6));
        CHECK(mass(gen_circle(Point::Zero(2), 0.5, 64)) == doctest::Approx(3.140331).epsilon(1e-6));
        CHECK(max_abs(boundary(gen_circle(Point::Zero(2), 1.0, 64, -1))) == 0.0);
        CHECK(code_of([] { gen_circle(Point::Zero(2), 1.0, 2); }) == ErrorCode::TooFewSegments);
        CHECK(code_of([] { gen_circle(Point::Zero(2), -1.0, 8); }) == ErrorCode::BadRadius);
        CHECK(mass(gen_two_circles(64)) == doctest::Approx(2 * oracle::chord_length(1.0, 64)).epsilon(1e-13));
    }

    TEST_CASE("example1 curve")
    {
        CHECK(example1_length(0.02) == doctest::Approx(oracle::xbar_arclength(0.02)).epsilon(5e-3));
        for (double t : {0.0, 0.3, 1.0, 1.5, 2.2, 3.0, 3.7, 4.0}) {
            const auto p = example1_point(0.07, t);
            const auto q = oracle::xbar(0.07, t);
            CHECK(p(0) == doctest::Approx(q[0]).epsilon(1e-12));
            CHECK(p(1) == doctest::Approx(q[1]).epsilon(1e-12));
        }
        double previous = 0.0;
        for (double eps : {0.2, 0.1, 0.05, 0.02}) {
            const Chain c = gen_example1_curve(eps, 64);
            CHECK(max_abs(boundary(c)) <= 1e-12);
            CHECK(mass(c) > previous);
            CHECK(mass(c) < 4 * pi + 8);
            CHECK(mass(c) == doctest::Approx(oracle::xbar_arclength(eps)).epsilon(1e-3));
            previous = mass(c);
        }
        CHECK(code_of([] { gen_example1_curve(0.25, 16); }) == ErrorCode::EpsOutOfRange);
        CHECK(code_of([] { gen_example1_curve(0.0, 16); }) == ErrorCode::EpsOutOfRange);
        CHECK(code_of([] { gen_example1_curve(0.1, 8); }) == ErrorCode::TooFewSegments);
    }

    TEST_CASE("example1 mass gap tends to the rod length")
    {
        const double limit = mass(gen_two_circles(1024));
        const double g1 = mass(gen_example1_curve(0.01, 256)) - limit;
        const double g2 = mass(gen_example1_curve(0.005, 256)) - limit;
        const double extrapolated = 2 * g2 - g1;
        CHECK(extrapolated == doctest::Approx(8.0).epsilon(0.02));
    }

    TEST_CASE("dumbbell")
    {
        const auto profile = [](double t) { return oracle::xbar(0.05, t); };
        const double area = oracle::revolution_area(profile, 0.5, 1.0) + oracle::revolution_area(profile, 1.0, 2.0)
                            + oracle::revolution_area(profile, 2.0, 2.5);
        const Chain d = gen_dumbbell(0.05, 32, 128);
        CHECK(mass(d) == doctest::Approx(area).epsilon(0.05));
        CHECK(max_abs(boundary(d)) <= 1e-12);
        CHECK(enclosed_volume(d) > 0.0);
        double previous = 1e300;
        for (double eps : {0.05, 0.02, 0.01}) {
            const double m = mass(gen_dumbbell(eps, 32, 128));
            CHECK(m < previous);
            previous = m;
        }
        CHECK(previous == doctest::Approx(8 * pi).epsilon(0.07));
        CHECK(code_of([] { gen_dumbbell(0.2, 32, 128); }) == ErrorCode::EpsOutOfRange);
        CHECK(code_of([] { gen_dumbbell(0.05, 8, 128); }) == ErrorCode::TooFewSegments);
    }

    TEST_CASE("dumbbell tube radius")
    {
        const double eps = 0.02;
        const auto p = dumbbell_profile(eps, 1.5);
        CHECK(p(1) == doctest::Approx(std::sin(2 * pi * eps / (1 + 2 * eps))).epsilon(1e-12));
    }

    TEST_CASE("icospheres")
    {
        const Chain s = gen_sphere(Point::Zero(3), 1.0, 4);
        CHECK(mass(s) == doctest::Approx(4 * pi).epsilon(5e-3));
        CHECK(max_abs(boundary(s)) <= 1e-12);
        CHECK(enclosed_volume(s) > 0.0);
        CHECK(euler_characteristic(*s.complex) == 2);
        double previous = 0.0;
        for (int sub = 1; sub <= 5; ++sub) {
            const double m = mass(gen_sphere(Point::Zero(3), 1.0, sub));
            CHECK(m > previous);
            CHECK(m < 4 * pi);
            previous = m;
        }
        CHECK(code_of([] { gen_sphere(Point::Zero(3), 1.0, 7); }) == ErrorCode::InvalidArgument);
        CHECK(euler_characteristic(*gen_two_spheres(2).complex) == 4);
    }

    TEST_CASE("Swiss cheese area against Monte Carlo")
    {
        const double r0 = swiss_cheese_radius(1);
        CHECK(r0 == doctest::Approx(std::pow(2.0, -2.5)));
        const Chain m = gen_swiss_cheese(1, r0, 32);
        CHECK(mass(m) == doctest::Approx(oracle::perforated_square_area(0.5, r0, 1000000, 17)).epsilon(0.01));
    }

    TEST_CASE("Swiss cheese topology")
    {
        for (int level : {1, 2}) {
            const Chain m = gen_swiss_cheese(level, swiss_cheese_radius(level), 16);
            const int per_side = (1 << level) - 1;
            const int interior_holes = per_side * per_side;
            CHECK(euler_characteristic(*m.complex) == 1 - interior_holes);
            CHECK(loop_count(boundary(m)) == interior_holes + 1);
        }
        CHECK(code_of([] { gen_swiss_cheese(1, 0.4, 32); }) == ErrorCode::HolesOverlap);
        CHECK(code_of([] { gen_swiss_cheese(4, 0.001, 32); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("Swiss cheese boundary escapes the square's neighbourhood")
    {
        for (int level : {1, 2, 3}) {
            const double r0 = swiss_cheese_radius(level);
            const Chain b = boundary(gen_swiss_cheese(level, r0, 16));
            double far = 0.0;
            for (Index e : set_of(b).indices) {
                for (int k = 0; k < 2; ++k) {
                    const auto p = b.complex->vertex(b.complex->simplex(1, e)(k));
                    far = std::max(far, std::min({p(0), 1 - p(0), p(1), 1 - p(1)}));
                }
            }
            CHECK(far >= std::pow(2.0, -level - 1) - r0 - 1e-12);
        }
    }

    TEST_CASE("Omega_L")
    {
        const auto omega = gen_omega_L(1.0, 0.25, 32);
        CHECK(mass(omega.chain) == doctest::Approx(1 - pi * 0.0625 / 4).epsilon(0.01));
        REQUIRE_FALSE(omega.tagged_vertices.empty());
        for (Index v : omega.tagged_vertices) CHECK(omega.chain.complex->vertex(v).norm() == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(code_of([] { gen_omega_L(1.0, 1.0, 8); }) == ErrorCode::BadRadius);
    }

    TEST_CASE("Poincare check on Omega_L")
    {
        double previous = 0.0;
        for (int res : {8, 16, 32}) {
            const auto p = poincare_check(gen_omega_L(1.0, 0.25, res), 1.0, 0.25);
            CHECK(p.ratio > 0.0);
            CHECK(p.ratio <= 3.96);
            CHECK(p.bound == doctest::Approx(2 * std::sqrt(2.0) / 0.75));
            CHECK(p.holds);
            CHECK(p.ratio > previous);
            previous = p.ratio;
        }
    }

    TEST_CASE("square and strip")
    {
        const Chain sq = gen_square(8);
        CHECK(std::abs(mass(sq) - 1.0) <= 1e-12);
        const Chain b = boundary(sq);
        CHECK(std::abs(mass(b) - 4.0) <= 1e-12);
        CHECK(loop_count(b) == 1);
        CHECK(max_abs(boundary(b)) == 0.0);
        const auto strip = gen_strip(1.0, 0.1, 16);
        CHECK(strip->top_dim() == 2);
        CHECK(mass(chain_from_cells(strip)) == doctest::Approx(0.1).epsilon(1e-12));
    }

    TEST_CASE("every scenario is generated")
    {
        for (const auto& name : scenario_names()) {
            const int res = std::max(minimum_resolution(name), name == "sphere" || name == "two_spheres" ? 2 : 16);
            const Chain c = generate_scenario({name, {}, res});
            CHECK(mass(c) > 0.0);
        }
        CHECK(code_of([] { generate_scenario({"circle", {}, 2}); }) == ErrorCode::InvalidArgument);
        CHECK(code_of([] { generate_scenario({"torus", {}, 8}); }) == ErrorCode::InvalidArgument);
    }
}
