#include "oracles.hpp"
#include "test_util.hpp"

#include <currents/flatnorm.hpp>
#include <currents/scenarios.hpp>

#include <doctest.h>

#include <random>

using namespace currents;
using testing::code_of;

namespace {

ComplexPtr right_triangle(double leg)
{
    Matrix V(2, 3);
    V << 0, leg, 0, 0, 0, leg;
    return build_complex(2, V, {{0, 1, 2}});
}

Chain random_small_chain(const ComplexPtr& host, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Chain c = zero_chain(host, 1);
    const int support = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < support; ++j) c.multiplicities(static_cast<Index>(rng() % c.size())) = u(rng);
    return c;
}

// Nearest host vertex to p.
int vertex_near(const SimplicialComplex& cx, double x, double y)
{
    Index best = 0;
    (cx.vertices().colwise() - Eigen::Vector2d(x, y)).colwise().squaredNorm().minCoeff(&best);
    return static_cast<int>(best);
}

} // namespace

TEST_SUITE("flatnorm")
{
    TEST_CASE("zero chain")
    {
        const auto host = gen_square(4).complex;
        const auto cert = flat_norm(zero_chain(host, 1), host);
        CHECK(cert.value == 0.0);
        CHECK(mass(cert.U) == 0.0);
        CHECK(mass(cert.V) == 0.0);
        CHECK(verify_certificate(cert, zero_chain(host, 1)));
    }

    TEST_CASE("boundary of a single triangle")
    {
        for (double leg : {1.0, 10.0}) {
            const auto host = right_triangle(leg);
            const Chain tau = chain_from_cells(host);
            const double P = leg * (2 + std::sqrt(2.0)), A = leg * leg / 2;
            const Chain X = boundary(tau);
            const auto cert = flat_norm(X, host);
            CHECK(cert.value == doctest::Approx(oracle::triangle_flat_norm(1.0, P, A)).epsilon(1e-12));
            CHECK(verify_certificate(cert, X));
            if (leg == 1.0) CHECK(cert.V.multiplicities(0) == doctest::Approx(1.0));
            // Reversed orientation against the original: multiplicity-2 boundary.
            const auto twice = flat_distance(X, -X, host);
            CHECK(twice.value == doctest::Approx(std::min(2 * P, 2 * A)).epsilon(1e-12));
        }
    }

    TEST_CASE("parallel segments in a strip")
    {
        const auto host = gen_strip(1.0, 0.1, 16);
        const auto& cx = *host;
        std::vector<int> bottom, top;
        for (int i = 0; i <= 16; ++i) {
            bottom.push_back(vertex_near(cx, i / 16.0, 0.0));
            top.push_back(vertex_near(cx, i / 16.0, 0.1));
        }
        std::reverse(top.begin(), top.end());
        const Chain X = chain_on_path(host, bottom) + chain_on_path(host, top);
        CHECK(mass(X) == doctest::Approx(2.0));
        const auto cert = flat_norm(X, host);
        // Filling the strip costs its area plus the two short sides.
        CHECK(cert.value <= 0.1 * 1.0 + 2 * 0.1 + 1e-9);
        CHECK(cert.value < mass(X));
        CHECK(verify_certificate(cert, X));
    }

    TEST_CASE("circle against a shrunken copy on an annulus")
    {
        const auto host = gen_annulus(0.9, 1.0, 64, 2);
        const auto& cx = *host;
        std::vector<int> outer, inner;
        for (int i = 0; i <= 64; ++i) {
            const double a = 2 * std::numbers::pi * (i % 64) / 64;
            outer.push_back(vertex_near(cx, std::cos(a), std::sin(a)));
            inner.push_back(vertex_near(cx, 0.9 * std::cos(a), 0.9 * std::sin(a)));
        }
        const Chain S = chain_on_path(host, outer), T = chain_on_path(host, inner);
        CHECK(mass(S) == doctest::Approx(oracle::chord_length(1.0, 64)).epsilon(1e-12));
        const auto cert = flat_distance(S, T, host);
        CHECK(cert.value <= std::numbers::pi * (1 - 0.81) + 1e-9);
        CHECK(cert.value < mass(S - T));
        CHECK(verify_certificate(cert, S - T));
        CHECK(flat_distance(S, S, host).value == 0.0);
    }

    TEST_CASE("tampered certificates are rejected")
    {
        const auto host = right_triangle(1.0);
        const Chain X = boundary(chain_from_cells(host));
        auto cert = flat_norm(X, host);
        REQUIRE(verify_certificate(cert, X));
        auto bumped = cert;
        bumped.value += 1.0;
        CHECK_FALSE(verify_certificate(bumped, X));
        auto shifted = cert;
        shifted.V.multiplicities(0) += 1e-3;
        CHECK_FALSE(verify_certificate(shifted, X));
    }

    TEST_CASE("metric properties on random small chains")
    {
        const auto host = gen_square(8).complex;
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 25; ++trial) {
            const Chain S = random_small_chain(host, rng), T = random_small_chain(host, rng), R = random_small_chain(host, rng);
            const double st = flat_distance(S, T, host).value;
            CHECK(std::abs(flat_distance(S, S, host).value) <= 1e-9);
            CHECK(st == doctest::Approx(flat_distance(T, S, host).value).epsilon(1e-9));
            CHECK(st <= flat_distance(S, R, host).value + flat_distance(R, T, host).value + 1e-7);
            const auto n = flat_norm(S, host);
            CHECK(n.value <= mass(S) + 1e-9);
            CHECK(verify_certificate(n, S));
            const double s = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
            CHECK(flat_norm(s * S, host).value == doctest::Approx(std::abs(s) * n.value).epsilon(1e-9));
        }
    }

    TEST_CASE("hosts without higher cells give V = 0")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 16);
        const auto cert = flat_norm(c, c.complex);
        CHECK(cert.value == doctest::Approx(mass(c)));
        CHECK(verify_certificate(cert, c));
    }

    TEST_CASE("simplex solver on a small LP")
    {
        // min x0 + 2 x1 + 10 a subject to x0 + x1 + s = 4, x0 - x1 + a = 1, all nonnegative.
        LinearProgram lp;
        lp.E = Matrix(2, 4);
        lp.E << 1, 1, 1, 0, 1, -1, 0, 1;
        lp.rhs = Vector{{4.0, 1.0}};
        lp.cost = Vector{{1.0, 2.0, 0.0, 10.0}};
        lp.initial_basis = {2, 3};
        const auto sol = solve_lp(lp);
        CHECK(sol.objective == doctest::Approx(1.0));
        CHECK(sol.x(0) == doctest::Approx(1.0));
    }
}
