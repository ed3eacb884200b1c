#include "oracles.hpp"
#include "test_util.hpp"

#include <currents/scenarios.hpp>
#include <currents/spectral.hpp>

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace currents;
using testing::code_of;

namespace {

constexpr double pi = std::numbers::pi;

Chain interval(double a, double b, int elements)
{
    Matrix V = Matrix::Zero(2, elements + 1);
    std::vector<std::vector<int>> edges;
    for (int i = 0; i <= elements; ++i) V(0, i) = a + (b - a) * i / elements;
    for (int i = 0; i < elements; ++i) edges.push_back({i, i + 1});
    return chain_from_cells(build_complex(2, V, edges));
}

double min_eigenvalue(const Matrix& M) { return Eigen::SelfAdjointEigenSolver<Matrix>(M).eigenvalues()(0); }

} // namespace

TEST_SUITE("spectral")
{
    TEST_CASE("assembled matrices are symmetric and PSD")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        const auto basis = default_spline_basis(c, 8);
        const auto pair = assemble(ambient_measure(c, basis), basis);
        const double na = pair.A.norm(), nb = pair.B.norm();
        CHECK((pair.A - pair.A.transpose()).norm() <= 1e-12 * na);
        CHECK((pair.B - pair.B.transpose()).norm() <= 1e-12 * nb);
        CHECK(min_eigenvalue(pair.A) >= -1e-9 * na);
        CHECK(min_eigenvalue(pair.B) >= -1e-9 * nb);
        // The constant function is the sum of all atoms.
        const Vector ones = Vector::Ones(basis.size());
        CHECK(std::abs(ones.dot(pair.A * ones)) <= 1e-12 * pair.A.diagonal().sum());
        CHECK(ones.dot(pair.B * ones) == doctest::Approx(mass(c)).epsilon(1e-12));
    }

    TEST_CASE("rbf atoms far from the support give a zero mass matrix")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        Matrix centers(2, 2);
        centers << 20, -20, 20, 20;
        const auto pair = assemble(quadrature_measure(c, 2), make_rbf_basis(centers, 0.5));
        CHECK(pair.B.norm() == 0.0);
    }

    TEST_CASE("trace of B matches a direct integral of the sum of squares")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        const auto basis = make_spline_basis(Box{Vector::Constant(2, -1.2), Vector::Constant(2, 1.2)}, {4, 4});
        REQUIRE(basis.size() == 49);
        const auto m = quadrature_measure(c, 3);
        const auto pair = assemble(m, basis);
        const double direct = integrate(m, [&](const auto& x) {
            double s = 0.0;
            for (Index a = 0; a < basis.size(); ++a) s += std::pow(basis.evaluate(a, x), 2);
            return s;
        });
        CHECK(pair.B.trace() == doctest::Approx(direct).epsilon(1e-12));
    }

    TEST_CASE("generalized eigenvalues: closed cases")
    {
        MatrixPair<double> p{Eigen::Vector3d(0, 1, 4).asDiagonal().toDenseMatrix(), Matrix::Identity(3, 3)};
        const auto r = generalized_eigs(p, 3);
        CHECK(r.values[0] == doctest::Approx(0.0));
        CHECK(r.values[1] == doctest::Approx(1.0));
        CHECK(r.values[2] == doctest::Approx(4.0));

        MatrixPair<double> q{Matrix::Identity(2, 2), Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()};
        const auto s = generalized_eigs(q, 2);
        CHECK(s.values[0] == doctest::Approx(1.0));
        CHECK(std::isinf(s.values[1]));
        CHECK(s.kept_dim == 1);
        CHECK(s.inf_count() == 1);
        CHECK(code_of([&] { generalized_eigs(q, 3); }) == ErrorCode::KTooLarge);
    }

    TEST_CASE("generalized eigenvalues match the extended-precision oracle")
    {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 20; ++trial) {
            const auto [A, B] = oracle::random_spd_pair(10, rng);
            const auto ours = generalized_eigs(MatrixPair<double>{A, B}, 10);
            const auto ref = oracle::generalized_eigenvalues(A, B);
            for (int i = 0; i < 10; ++i) CHECK(ours.values[i] == doctest::Approx(double(ref[i])).epsilon(1e-9));
        }
    }

    TEST_CASE("long double pairs are accepted")
    {
        MatrixPair<long double> p{MatrixX<long double>::Identity(2, 2) * 3, MatrixX<long double>::Identity(2, 2)};
        CHECK(generalized_eigs(p, 2).values[1] == doctest::Approx(3.0));
    }

    TEST_CASE("ambient spectrum of the unit circle")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 256);
        const auto r = ambient_lambda(c, default_spline_basis(c, 16), 3);
        CHECK(r.values[0] < 1e-6);
        CHECK((r.values[1] >= 1.0 && r.values[1] <= 1.10));
        CHECK((r.values[2] >= 1.0 && r.values[2] <= 1.10));
        CHECK(r.method == Method::Ambient);

        const Chain big = gen_circle(Point::Zero(2), 2.0, 256);
        const auto s = ambient_lambda(big, default_spline_basis(big, 16), 3);
        CHECK(s.values[1] == doctest::Approx(r.values[1] / 4).epsilon(0.05));
    }

    TEST_CASE("ambient lambda_1 vanishes on connected chains")
    {
        for (const Chain& c : {gen_square(8), gen_sphere(Point::Zero(3), 1.0, 2), gen_example1_curve(0.1, 16)}) {
            CHECK(std::abs(ambient_lambda(c, default_spline_basis(c, 8), 1).values[0]) < 1e-6);
        }
    }

    TEST_CASE("ambient Dirichlet on [-2, 2] with a fine grid")
    {
        const Chain seg = interval(-2.0, 2.0, 256);
        const double v = ambient_lambda_dirichlet(seg, default_spline_basis(seg, 64), 1, 0.02).values[0];
        const double target = std::pow(pi / 4, 2);
        CHECK(v >= target);
        CHECK(v <= 1.15 * target);
    }

    TEST_CASE("ambient Dirichlet without a boundary changes nothing")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        const auto basis = default_spline_basis(c, 8);
        CHECK(ambient_lambda_dirichlet(c, basis, 3, 0.02).values == ambient_lambda(c, basis, 3).values);
        const Chain sq = gen_square(8);
        CHECK(code_of([&] { ambient_lambda_dirichlet(sq, default_spline_basis(sq, 8), 1, 10.0); })
              == ErrorCode::EmptyAfterFilter);
    }

    TEST_CASE("intrinsic curve spectra")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 256);
        const auto r = intrinsic_curve_spectrum(c, BoundaryCondition::Closed, 5);
        const double L = mass(c);
        for (int k = 1; k <= 5; ++k) {
            const double expected = std::pow(2 * pi * (k / 2) / L, 2);
            if (k == 1) {
                CHECK(std::abs(r.values[0]) <= 1e-10);
            } else {
                CHECK(r.values[k - 1] == doctest::Approx(expected).epsilon(2e-3));
            }
        }
        const Chain seg = interval(-2.0, 2.0, 256);
        const auto d = intrinsic_curve_spectrum(seg, BoundaryCondition::Dirichlet, 2);
        CHECK(d.values[0] == doctest::Approx(std::pow(pi / 4, 2)).epsilon(1e-3));
        CHECK(d.values[1] == doctest::Approx(std::pow(pi / 2, 2)).epsilon(1e-3));
        CHECK(std::abs(intrinsic_curve_spectrum(seg, BoundaryCondition::Neumann, 1).values[0]) <= 1e-10);
        CHECK(code_of([&] { intrinsic_curve_spectrum(c, BoundaryCondition::Dirichlet, 1); })
              == ErrorCode::DirichletOnClosed);

        Matrix V(2, 4);
        V << 0, 1, -1, 0, 0, 0, 0, 1;
        const Chain star = chain_from_cells(build_complex(2, V, {{0, 1}, {0, 2}, {0, 3}}));
        CHECK(code_of([&] { intrinsic_curve_spectrum(star, BoundaryCondition::Neumann, 1); })
              == ErrorCode::NotAManifoldChain);
    }

    TEST_CASE("intrinsic surface spectra")
    {
        const auto s = intrinsic_surface_spectrum(gen_sphere(Point::Zero(3), 1.0, 4), BoundaryCondition::Closed, 4);
        CHECK(std::abs(s.values[0]) < 1e-8);
        for (int k = 1; k < 4; ++k) CHECK(s.values[k] == doctest::Approx(2.0).epsilon(0.02));

        const Chain sq = gen_square(64);
        CHECK(intrinsic_surface_spectrum(sq, BoundaryCondition::Dirichlet, 1).values[0]
              == doctest::Approx(2 * pi * pi).epsilon(0.01));
        const auto n = intrinsic_surface_spectrum(sq, BoundaryCondition::Neumann, 2);
        CHECK(std::abs(n.values[0]) < 1e-8);
        CHECK(n.values[1] == doctest::Approx(pi * pi).epsilon(0.01));
        CHECK(code_of([] { intrinsic_surface_spectrum(gen_sphere(Point::Zero(3), 1.0, 1), BoundaryCondition::Dirichlet, 1); })
              == ErrorCode::DirichletOnClosed);

        Matrix V(3, 5);
        V << 0, 1, 0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 1;
        const Chain fin = chain_from_cells(build_complex(3, V, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}}));
        CHECK(code_of([&] { intrinsic_surface_spectrum(fin, BoundaryCondition::Neumann, 1); })
              == ErrorCode::NonManifoldEdge);
    }

    TEST_CASE("sparse eigensolver matches the dense generalized solver")
    {
        const FemSystem sys = assemble_surface_fem(gen_square(30));
        REQUIRE(sys.stiffness.rows() > kDenseFemLimit);
        const auto sparse = fem_eigenvalues(sys, sys.boundary_dofs, 4);
        Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> dense(Matrix(sys.stiffness), Matrix(sys.mass));
        // Oracle for the constrained problem: dense solve with the boundary rows eliminated.
        Matrix K(sys.stiffness), M(sys.mass);
        std::vector<Index> keep;
        std::vector<bool> fixed(K.rows(), false);
        for (Index b : sys.boundary_dofs) fixed[b] = true;
        for (Index i = 0; i < K.rows(); ++i)
            if (!fixed[i]) keep.push_back(i);
        Matrix Kr(keep.size(), keep.size()), Mr(keep.size(), keep.size());
        for (size_t i = 0; i < keep.size(); ++i)
            for (size_t j = 0; j < keep.size(); ++j) {
                Kr(i, j) = K(keep[i], keep[j]);
                Mr(i, j) = M(keep[i], keep[j]);
            }
        Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> reduced(Kr, Mr);
        for (int i = 0; i < 4; ++i) CHECK(sparse[i] == doctest::Approx(reduced.eigenvalues()(i)).epsilon(1e-9));
        const auto neumann = fem_eigenvalues(sys, {}, 3);
        for (int i = 1; i < 3; ++i) CHECK(neumann[i] == doctest::Approx(dense.eigenvalues()(i)).epsilon(1e-9));
    }

    TEST_CASE("analytic spectra and merging")
    {
        CHECK(analytic_spectrum(circle_model(2 * pi), 7) == std::vector<double>{0, 1, 1, 4, 4, 9, 9});
        CHECK(analytic_spectrum(two_circles_model(2 * pi, 2 * pi), 7) == std::vector<double>{0, 0, 1, 1, 1, 1, 4});
        CHECK(analytic_spectrum(interval_dirichlet_model(4.0), 1)[0] == doctest::Approx(std::pow(pi / 4, 2)));
        CHECK(analytic_spectrum(sphere_model(1.0), 4) == std::vector<double>{0, 2, 2, 2});
        CHECK(merge_spectra({{0, 1, 4}, {0, 2}}, 5) == std::vector<double>{0, 0, 1, 2, 4});
        CHECK(merge_spectra({{0, 1, 4}}, 3) == std::vector<double>{0, 1, 4});
        const auto c = analytic_spectrum(circle_model(2 * pi), 7);
        CHECK(merge_spectra({c, c}, 7) == analytic_spectrum(two_circles_model(2 * pi, 2 * pi), 7));
    }

    TEST_CASE("scaling covariance of intrinsic spectra")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 128);
        const auto base = intrinsic_curve_spectrum(c, BoundaryCondition::Closed, 5);
        for (double s : {0.5, 3.0}) {
            const auto scaled = intrinsic_curve_spectrum(map_vertices(c, [&](const Point& p) { return Point(s * p); }),
                                                         BoundaryCondition::Closed, 5);
            for (int k = 1; k < 5; ++k) CHECK(scaled.values[k] == doctest::Approx(base.values[k] / (s * s)).epsilon(1e-9));
        }
    }

    TEST_CASE("disjoint-union spectrum is the merge of the parts")
    {
        const Chain a = gen_circle(Point{{-3.0, 0.0}}, 1.0, 64);
        const Chain b = gen_circle(Point{{3.0, 0.0}}, 0.7, 48);
        const auto u = intrinsic_curve_spectrum(chain_union(a, b), BoundaryCondition::Closed, 7);
        const auto merged = merge_spectra({intrinsic_curve_spectrum(a, BoundaryCondition::Closed, 7).values,
                                           intrinsic_curve_spectrum(b, BoundaryCondition::Closed, 7).values}, 7);
        for (int k = 2; k < 7; ++k) CHECK(u.values[k] == doctest::Approx(merged[k]).epsilon(1e-9));
    }

    TEST_CASE("ambient estimate bounds the intrinsic one on the circle")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 256);
        const double intrinsic = intrinsic_curve_spectrum(c, BoundaryCondition::Closed, 2).values[1];
        double previous = kInfinity;
        for (int cells : {8, 12, 16}) {
            const double amb = ambient_lambda(c, default_spline_basis(c, cells), 2).values[1];
            CHECK(amb >= intrinsic - 1e-6);
            CHECK(amb <= previous + 1e-9);
            previous = amb;
        }
    }

    // Cubic splines resolve cos(pi x) far better than P1 elements, so the
    // ambient value lands below the FEM value; see README.
    TEST_CASE("ambient estimate bounds the intrinsic one on the square" * doctest::should_fail())
    {
        const Chain sq = gen_square(16);
        const double intrinsic = intrinsic_surface_spectrum(sq, BoundaryCondition::Neumann, 2).values[1];
        const double amb = ambient_lambda(sq, default_spline_basis(sq), 2).values[1];
        CHECK(amb >= intrinsic - 1e-6);
    }

    TEST_CASE("ambient estimate bounds the exact Neumann value on the square")
    {
        const Chain sq = gen_square(16);
        const double exact = oracle::pi * oracle::pi;
        const double amb = ambient_lambda(sq, default_spline_basis(sq), 3).values[1];
        CHECK(amb >= exact - 1e-9);
        CHECK(amb <= exact * (1.0 + 1e-3));
    }

    TEST_CASE("ambient estimate bounds the exact polygon value on the circle")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 256);
        const double exact = std::pow(2.0 * oracle::pi / oracle::chord_length(1.0, 256), 2);
        for (int cells : {8, 16, 32}) CHECK(ambient_lambda(c, default_spline_basis(c, cells), 2).values[1] >= exact - 1e-9);
    }

    TEST_CASE("lambda_1 vanishes for closed connected chains")
    {
        for (const Chain& c : {gen_circle(Point::Zero(2), 1.0, 64), gen_example1_curve(0.05, 16)}) {
            CHECK(std::abs(intrinsic_curve_spectrum(c, BoundaryCondition::Closed, 1).values[0]) < 1e-6);
        }
        CHECK(std::abs(intrinsic_surface_spectrum(gen_dumbbell(0.05, 16, 64), BoundaryCondition::Closed, 1).values[0]) < 1e-6);
    }

    TEST_CASE("the injected sign fault breaks the circle spectrum")
    {
        const Chain c = gen_circle(Point::Zero(2), 1.0, 64);
        fault::set_fem_sign_bug(true);
        const auto broken = intrinsic_curve_spectrum(c, BoundaryCondition::Closed, 3);
        fault::set_fem_sign_bug(false);
        const auto ok = intrinsic_curve_spectrum(c, BoundaryCondition::Closed, 3);
        CHECK(std::abs(broken.values[1] - ok.values[1]) > 0.1);
    }
}
