#include "oracles.hpp"
#include "test_util.hpp"

#include <currents/chains.hpp>
#include <currents/scenarios.hpp>

#include <doctest.h>

#include <random>

using namespace currents;
using testing::code_of;

namespace {

ComplexPtr unit_triangle()
{
    Matrix V(2, 3);
    V << 0, 1, 0, 0, 0, 1;
    return build_complex(2, V, {{0, 1, 2}});
}

ComplexPtr split_square()
{
    Matrix V(2, 4);
    V << 0, 1, 1, 0, 0, 0, 1, 1;
    return build_complex(2, V, {{0, 1, 2}, {0, 2, 3}});
}

double edge_multiplicity(const Chain& c, int a, int b)
{
    const int ids[2] = {a, b};
    const auto cell = c.complex->find(ids);
    REQUIRE(cell.has_value());
    return cell->sign * c.multiplicities(cell->index);
}

bool boundary_squares_to_zero(const SimplicialComplex& cx)
{
    for (int d = 2; d <= cx.top_dim(); ++d) {
        const IncidenceMatrix prod = cx.incidence(d - 1) * cx.incidence(d);
        for (int k = 0; k < prod.outerSize(); ++k)
            for (IncidenceMatrix::InnerIterator it(prod, k); it; ++it)
                if (it.value() != 0) return false;
    }
    return true;
}

Chain random_chain(const ComplexPtr& cx, int dim, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Chain c = zero_chain(cx, dim);
    for (Index i = 0; i < c.size(); ++i) c.multiplicities(i) = u(rng);
    return c;
}

} // namespace

TEST_SUITE("chains")
{
    TEST_CASE("closure of a single triangle")
    {
        const auto cx = unit_triangle();
        CHECK(cx->num_simplices(2) == 1);
        CHECK(cx->num_simplices(1) == 3);
        CHECK(cx->num_simplices(0) == 3);
        CHECK(boundary_squares_to_zero(*cx));
    }

    TEST_CASE("shared faces are deduplicated")
    {
        const auto cx = split_square();
        CHECK(cx->num_simplices(2) == 2);
        CHECK(cx->num_simplices(1) == 5);
    }

    TEST_CASE("construction errors")
    {
        Matrix V(2, 3);
        V << 0, 1, 0, 0, 0, 1;
        CHECK(code_of([&] { build_complex(2, V, {{0, 1, 1}}); }) == ErrorCode::DegenerateSimplex);
        CHECK(code_of([&] { build_complex(2, V, {{0, 1, 2}, {0, 1}}); }) == ErrorCode::NonUniformArity);
        CHECK(code_of([&] { build_complex(2, V, {{0, 1, 7}}); }) == ErrorCode::IndexOutOfRange);
        Matrix C(2, 3);
        C << 0, 1, 2, 0, 1e-14, 0;
        CHECK(code_of([&] { build_complex(2, C, {{0, 1, 2}}); }) == ErrorCode::DegenerateSimplex);
    }

    TEST_CASE("simplex volumes")
    {
        Matrix S(2, 2);
        S << 0, 1, 0, 0;
        CHECK(simplex_volume(*build_complex(2, S, {{0, 1}}), 1, 0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(simplex_volume(*unit_triangle(), 2, 0) == doctest::Approx(0.5).epsilon(1e-15));
        Matrix E(2, 3);
        E << 0, 1, 0.5, 0, 0, std::sqrt(3.0) / 2;
        // Gram determinant by hand: |a|^2 |b|^2 - (a.b)^2 = 1 - 1/4.
        CHECK(simplex_volume(*build_complex(2, E, {{0, 1, 2}}), 2, 0) == doctest::Approx(std::sqrt(0.75) / 2).epsilon(1e-14));
    }

    TEST_CASE("boundary of an oriented triangle")
    {
        const Chain b = boundary(chain_from_cells(unit_triangle()));
        CHECK(edge_multiplicity(b, 0, 1) == 1.0);
        CHECK(edge_multiplicity(b, 1, 2) == 1.0);
        CHECK(edge_multiplicity(b, 2, 0) == 1.0);
        const Chain bb = boundary(b);
        CHECK(bb.multiplicities.lpNorm<Eigen::Infinity>() == 0.0);
    }

    TEST_CASE("boundary of two adjacent triangles")
    {
        const Chain b = boundary(chain_from_cells(split_square()));
        CHECK(edge_multiplicity(b, 0, 1) == 1.0);
        CHECK(edge_multiplicity(b, 1, 2) == 1.0);
        CHECK(edge_multiplicity(b, 2, 3) == 1.0);
        CHECK(edge_multiplicity(b, 3, 0) == 1.0);
        CHECK(edge_multiplicity(b, 0, 2) == 0.0);
    }

    TEST_CASE("closed polygon has zero boundary")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        CHECK(boundary(c).multiplicities.lpNorm<Eigen::Infinity>() == 0.0);
        CHECK(code_of([&] { boundary(boundary(c)); }) == ErrorCode::DimensionZero);
    }

    TEST_CASE("mass")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        CHECK(mass(c) == doctest::Approx(oracle::chord_length(1.0, 64)).epsilon(1e-13));
        CHECK(mass(c) == doctest::Approx(6.280663).epsilon(1e-6));
        CHECK(mass(0.0 * c) == 0.0);
        Chain t = chain_from_cells(unit_triangle());
        t.multiplicities(0) = -2.0;
        CHECK(mass(t) == doctest::Approx(1.0));
    }

    TEST_CASE("set_of")
    {
        Matrix V(2, 4);
        V << 0, 1, 2, 3, 0, 0, 0, 0;
        const auto cx = build_complex(2, V, {{0, 1}, {1, 2}, {2, 3}});
        Chain c = zero_chain(cx, 1);
        for (Index i = 0; i < 3; ++i) {
            const int ids[2] = {static_cast<int>(i), static_cast<int>(i + 1)};
            c.multiplicities(cx->find(ids)->index) = i == 1 ? 0.0 : 1.0;
        }
        const auto s = set_of(c);
        REQUIRE(s.indices.size() == 2);
        CHECK(set_of(zero_chain(cx, 1)).empty());
        Chain tiny = zero_chain(cx, 1);
        tiny.multiplicities(0) = 1e-15;
        tiny.multiplicities(1) = 1.0;
        const auto f = set_of(tiny, 1e-12);
        REQUIRE(f.indices.size() == 1);
        CHECK(f.indices[0] == 1);
    }

    TEST_CASE("union of chains")
    {
        const Chain a = gen_circle(Point{{-3.0, 0.0}}, 1.0, 64);
        const Chain b = gen_circle(Point{{3.0, 0.0}}, 1.0, 64);
        CHECK(mass(chain_union(a, b)) == doctest::Approx(2 * 6.280663).epsilon(1e-6));
        CHECK(mass(chain_union(a, zero_chain(b.complex, 1))) == doctest::Approx(mass(a)).epsilon(1e-14));
        CHECK(code_of([&] { chain_union(a, gen_square(2)); }) == ErrorCode::DimensionMismatch);
    }

    TEST_CASE("d^2 = 0 on generated complexes")
    {
        for (const auto& c : {gen_square(4), gen_sphere(Point::Zero(3), 1.0, 2), gen_swiss_cheese(1, 0.17, 16),
                              gen_dumbbell(0.05, 16, 64)}) {
            CHECK(boundary_squares_to_zero(*c.complex));
        }
    }

    TEST_CASE("mass is positively homogeneous and additive")
    {
        std::mt19937_64 rng(11);
        const auto cx = gen_square(4).complex;
        for (int trial = 0; trial < 10; ++trial) {
            const Chain c = random_chain(cx, 2, rng);
            for (double s : {-2.0, 0.5, 3.0}) CHECK(mass(s * c) == doctest::Approx(std::abs(s) * mass(c)).epsilon(1e-13));
            const Chain d = random_chain(cx, 2, rng);
            const Chain u = chain_union(c, d);
            CHECK(mass(u) == doctest::Approx(mass(c) + mass(d)).epsilon(1e-13));
            // The union lists a's cells first, then b's.
            const Chain bu = boundary(u);
            const Chain ub = chain_union(boundary(c), boundary(d));
            CHECK((bu.multiplicities - ub.multiplicities).lpNorm<Eigen::Infinity>() <= 1e-12);
        }
    }

    TEST_CASE("integer flag is checked against the tolerance")
    {
        Chain c = chain_from_cells(unit_triangle());
        CHECK(is_integral(c));
        c.multiplicities(0) = 1.0 + 1e-6;
        CHECK_FALSE(is_integral(c));
    }
}
