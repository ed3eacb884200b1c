#pragma once

#include <currents/ambient_basis.hpp>
#include <currents/chains.hpp>
#include <currents/measure.hpp>

#include <Eigen/Eigenvalues>

#include <limits>
#include <string_view>
#include <vector>

namespace currents {

enum class Method { Ambient, Intrinsic };
enum class BoundaryCondition { Closed, Neumann, Dirichlet };

std::string_view to_string(Method method);
std::string_view to_string(BoundaryCondition bc);

/// Relative cut below which a direction counts as annihilated by the mass form.
inline constexpr double kNullThreshold = 1e-10;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Stiffness A_ij = int <grad f_i, grad f_j> and mass B_ij = int f_i f_j.
template <typename Scalar = double>
struct MatrixPair {
    MatrixX<Scalar> A;
    MatrixX<Scalar> B;

    Index size() const { return A.rows(); }
};

struct SpectralResult {
    std::vector<double> values; // ascending, +inf for the convention case
    Index kept_dim = 0;
    Method method = Method::Ambient;
    BoundaryCondition bc = BoundaryCondition::Closed;

    Index inf_count() const;
};

///
/// Mass-measure Gram matrices of the basis. Each node contributes to the atoms
/// nonzero there; nodes are accumulated in order. Throws NonFiniteEntry.
///
MatrixPair<double> assemble(const MassMeasure& measure, const AmbientBasis& basis);

///
/// Quadrature adapted to the basis: knot-aligned Gauss rules exact for the
/// products of spline atoms, the order-3 rule for Gaussians.
///
MassMeasure ambient_measure(const Chain& chain, const AmbientBasis& basis);

///
/// Eigenvalues of A x = lambda B x on the span of the eigenvectors of B above
/// null_threshold * max diag(B); the remaining k-indices are +inf.
/// Throws KTooLarge.
///
template <typename Scalar>
SpectralResult generalized_eigs(const MatrixPair<Scalar>& pair, Index k, double null_threshold = kNullThreshold)
{
    const Index m = pair.size();
    require(k >= 1 && k <= m, ErrorCode::KTooLarge, "k exceeds the basis size");
    SpectralResult out;
    out.values.assign(static_cast<size_t>(k), kInfinity);
    const Scalar top = pair.B.diagonal().maxCoeff();
    if (!(top > Scalar(0))) return out;

    using Solver = Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>>;
    const Solver mass(pair.B);
    const Scalar cut = Scalar(null_threshold) * top;
    const auto& mu = mass.eigenvalues();
    Index kept = 0;
    for (Index i = 0; i < m; ++i) kept += mu(i) > cut ? 1 : 0;
    out.kept_dim = kept;
    if (kept == 0) return out;

    // Congruence T^T A T with T = V_kept D_kept^{-1/2}; eigenvalues ascend.
    MatrixX<Scalar> T = mass.eigenvectors().rightCols(kept);
    for (Index j = 0; j < kept; ++j) {
        using std::sqrt;
        T.col(j) /= sqrt(mu(m - kept + j));
    }
    MatrixX<Scalar> reduced = T.transpose() * pair.A.template selfadjointView<Eigen::Lower>() * T;
    reduced = (reduced + reduced.transpose()) / Scalar(2);
    const Solver stiff(reduced, Eigen::EigenvaluesOnly);
    for (Index i = 0; i < std::min(k, kept); ++i) out.values[static_cast<size_t>(i)] = static_cast<double>(stiff.eigenvalues()(i));
    return out;
}

///
/// First k values of the Rayleigh functional of `measure` over span(basis),
/// computed without forming A or B: the stacked value and gradient rows are
/// compressed by QR, a pivoted QR of the stack selects its range, and the
/// squared cosines s of the value block give lambda = (1 - s) / s.
/// Directions with s <= null_threshold are +inf. Throws KTooLarge.
///
SpectralResult rayleigh_spectrum(
    const MassMeasure& measure,
    const AmbientBasis& basis,
    Index k,
    double null_threshold = kNullThreshold);

/// Upper-bound estimate of lambda_k(T). Throws KTooLarge, InvalidArgument (zero mass).
SpectralResult ambient_lambda(const Chain& chain, const AmbientBasis& basis, Index k);

///
/// Estimate of the Dirichlet functional: atoms meeting the epsilon-neighbourhood
/// of set(boundary(chain)), or of `boundary_set`, are dropped first.
/// Throws EmptyAfterFilter.
///
SpectralResult ambient_lambda_dirichlet(const Chain& chain, const AmbientBasis& basis, Index k, double epsilon);
SpectralResult ambient_lambda_dirichlet(
    const Chain& chain,
    const AmbientBasis& basis,
    Index k,
    double epsilon,
    const SimplexSet& boundary_set);

/// Piecewise-linear stiffness and consistent mass on the vertices of a chain.
struct FemSystem {
    SparseMatrix stiffness;
    SparseMatrix mass;
    std::vector<Index> vertex_of_dof;  // complex vertex of each unknown
    std::vector<Index> boundary_dofs;  // endpoints (curves) or boundary-edge vertices (surfaces)
};

/// Throws NotAManifoldChain when a vertex meets more than two edges.
FemSystem assemble_curve_fem(const Chain& chain);
/// Throws NonManifoldEdge when an edge meets more than two triangles.
FemSystem assemble_surface_fem(const Chain& chain);

///
/// First k eigenvalues of K x = lambda M x with the listed unknowns
/// eliminated. Dense solve up to kDenseFemLimit unknowns, shift-invert
/// subspace iteration beyond. Throws KTooLarge.
///
inline constexpr Index kDenseFemLimit = 800;
std::vector<double> fem_eigenvalues(const FemSystem& system, const std::vector<Index>& constrained, Index k);

/// Throws NotAManifoldChain, DirichletOnClosed.
SpectralResult intrinsic_curve_spectrum(const Chain& chain, BoundaryCondition bc, Index k);
/// Throws NonManifoldEdge, DirichletOnClosed.
SpectralResult intrinsic_surface_spectrum(const Chain& chain, BoundaryCondition bc, Index k);
/// Dirichlet on the listed complex vertices, natural elsewhere.
SpectralResult intrinsic_surface_spectrum_mixed(const Chain& chain, const std::vector<Index>& dirichlet_vertices, Index k);

struct AnalyticModel {
    enum class Kind { Circle, TwoCircles, IntervalDirichlet, Sphere };
    Kind kind = Kind::Circle;
    double a = 0.0; // length, first length, or radius
    double b = 0.0; // second length (two circles)
};

AnalyticModel circle_model(double length);
AnalyticModel two_circles_model(double length1, double length2);
AnalyticModel interval_dirichlet_model(double length);
AnalyticModel sphere_model(double radius);

/// Closed-form spectra: (2 pi floor(k/2) / L)^2, (j pi / L)^2, l(l+1)/r^2 with multiplicity 2l+1.
std::vector<double> analytic_spectrum(const AnalyticModel& model, Index k);

/// First k entries of the ascending merge.
std::vector<double> merge_spectra(const std::vector<std::vector<double>>& lists, Index k);

namespace fault {
/// Mutation hook for the verification harness: flips the sign of every
/// off-diagonal FEM stiffness entry while enabled.
void set_fem_sign_bug(bool enabled);
bool fem_sign_bug();
} // namespace fault

} // namespace currents
