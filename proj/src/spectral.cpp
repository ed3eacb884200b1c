#include <currents/spectral.hpp>

#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <numbers>
#include <random>

namespace currents {

namespace {

std::atomic<bool> g_fem_sign_bug{false};

constexpr double kRankCut = 1e-13;

// R factor with R^T R = rows^T rows and at most rows.cols() rows.
Matrix local_factor(const Matrix& rows)
{
    if (rows.rows() <= rows.cols()) return rows;
    const Eigen::HouseholderQR<Matrix> qr(rows);
    return qr.matrixQR().topRows(rows.cols()).triangularView<Eigen::Upper>();
}

// Value and gradient R factors over the sorted column set `cols`.
struct FactorBlock {
    std::vector<Index> cols;
    Matrix value;
    Matrix grad;
    Eigen::VectorXd centroid;
};

Matrix widen(const Matrix& r, const std::vector<Index>& from, const std::vector<Index>& to)
{
    Matrix out = Matrix::Zero(r.rows(), static_cast<Index>(to.size()));
    size_t j = 0;
    for (size_t i = 0; i < from.size(); ++i) {
        while (to[j] != from[i]) ++j;
        out.col(static_cast<Index>(j)) = r.col(static_cast<Index>(i));
    }
    return out;
}

FactorBlock merge(const FactorBlock& a, const FactorBlock& b)
{
    FactorBlock out;
    std::set_union(a.cols.begin(), a.cols.end(), b.cols.begin(), b.cols.end(), std::back_inserter(out.cols));
    const auto stacked = [&](const Matrix& x, const Matrix& y) {
        Matrix m(x.rows() + y.rows(), static_cast<Index>(out.cols.size()));
        m << widen(x, a.cols, out.cols), widen(y, b.cols, out.cols);
        return local_factor(m);
    };
    out.value = stacked(a.value, b.value);
    out.grad = stacked(a.grad, b.grad);
    out.centroid = a.centroid;
    return out;
}

// Bisects blocks by centroid so merged blocks stay spatially compact.
FactorBlock reduce(std::vector<FactorBlock>& blocks, size_t begin, size_t end)
{
    if (end - begin == 1) return std::move(blocks[begin]);
    Eigen::VectorXd lo = blocks[begin].centroid, hi = lo;
    for (size_t i = begin; i < end; ++i) {
        lo = lo.cwiseMin(blocks[i].centroid);
        hi = hi.cwiseMax(blocks[i].centroid);
    }
    Index axis = 0;
    (hi - lo).maxCoeff(&axis);
    const size_t mid = begin + (end - begin) / 2;
    std::nth_element(blocks.begin() + static_cast<std::ptrdiff_t>(begin), blocks.begin() + static_cast<std::ptrdiff_t>(mid),
                     blocks.begin() + static_cast<std::ptrdiff_t>(end),
                     [axis](const FactorBlock& x, const FactorBlock& y) { return x.centroid(axis) < y.centroid(axis); });
    return merge(reduce(blocks, begin, mid), reduce(blocks, mid, end));
}

BoundaryCondition natural_bc(const Chain& chain)
{
    if (chain.dim == 0) return BoundaryCondition::Closed;
    return set_of(boundary(chain)).empty() ? BoundaryCondition::Closed : BoundaryCondition::Neumann;
}

SpectralResult with_tags(SpectralResult r, Method method, BoundaryCondition bc)
{
    r.method = method;
    r.bc = bc;
    return r;
}

double uniform_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// M-orthonormalizes the columns of x in place (two passes of modified Gram-Schmidt).
void m_orthonormalize(Matrix& x, const SparseMatrix& m, std::mt19937_64& rng)
{
    Matrix mx(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        for (int attempt = 0;; ++attempt) {
            const double before = std::sqrt(std::max(0.0, x.col(j).dot(m * x.col(j))));
            for (int pass = 0; pass < 2; ++pass) {
                for (Index i = 0; i < j; ++i) x.col(j) -= x.col(j).dot(mx.col(i)) * x.col(i);
            }
            Vector mj = m * x.col(j);
            const double norm = std::sqrt(std::max(0.0, x.col(j).dot(mj)));
            if (norm > 1e-10 * before && norm > 0.0) {
                x.col(j) /= norm;
                mx.col(j) = mj / norm;
                break;
            }
            require(attempt < 8, ErrorCode::InvalidArgument, "subspace iteration lost rank");
            for (Index r = 0; r < x.rows(); ++r) x(r, j) = uniform_draw(rng) - 0.5;
        }
    }
}

std::vector<double> subspace_iteration(const SparseMatrix& k_mat, const SparseMatrix& m_mat, Index k)
{
    const Index n = k_mat.rows();
    const Index p = std::min(n, std::max(2 * k, k + 8));
    const double shift = 1e-6 * k_mat.diagonal().sum() / m_mat.diagonal().sum();
    const SparseMatrix shifted = k_mat + shift * m_mat;
    Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
    require(solver.info() == Eigen::Success, ErrorCode::InvalidArgument, "shifted stiffness is not factorizable");

    std::mt19937_64 rng(0x5eedULL);
    Matrix x(n, p);
    for (Index j = 0; j < p; ++j) {
        for (Index r = 0; r < n; ++r) x(r, j) = uniform_draw(rng) - 0.5;
    }
    m_orthonormalize(x, m_mat, rng);

    Vector previous = Vector::Constant(k, kInfinity);
    for (int iter = 0; iter < 5000; ++iter) {
        Matrix y = solver.solve(m_mat * x);
        m_orthonormalize(y, m_mat, rng);
        Matrix reduced = y.transpose() * (k_mat * y);
        reduced = 0.5 * (reduced + reduced.transpose());
        const Eigen::SelfAdjointEigenSolver<Matrix> ritz(reduced);
        x = y * ritz.eigenvectors();
        const Vector theta = ritz.eigenvalues().head(k);
        const double scale = std::max(std::abs(theta(k - 1)), shift);
        const double change = (theta - previous).cwiseAbs().maxCoeff();
        previous = theta;
        if (iter > 0 && change <= 1e-12 * scale) break;
    }
    return {previous.data(), previous.data() + k};
}

SparseMatrix restrict_to(const SparseMatrix& a, const std::vector<Index>& free_of)
{
    std::vector<Eigen::Triplet<double>> trips;
    for (Index c = 0; c < a.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
            const Index fr = free_of[it.row()], fc = free_of[it.col()];
            if (fr >= 0 && fc >= 0) trips.emplace_back(fr, fc, it.value());
        }
    }
    const Index n = *std::max_element(free_of.begin(), free_of.end()) + 1;
    SparseMatrix out(n, n);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// Unknowns on the vertices touched by the active simplices, in vertex order.
struct DofMap {
    std::vector<Index> dof_of_vertex;
    std::vector<Index> vertex_of_dof;
};

DofMap number_vertices(const SimplicialComplex& cx, int dim, const std::vector<Index>& active)
{
    DofMap map;
    map.dof_of_vertex.assign(cx.num_vertices(), -1);
    for (Index s : active) {
        const auto ids = cx.simplex(dim, s);
        for (Index k = 0; k < ids.size(); ++k) map.dof_of_vertex[ids(k)] = 0;
    }
    for (Index v = 0; v < cx.num_vertices(); ++v) {
        if (map.dof_of_vertex[v] < 0) continue;
        map.dof_of_vertex[v] = static_cast<Index>(map.vertex_of_dof.size());
        map.vertex_of_dof.push_back(v);
    }
    return map;
}

} // namespace

std::string_view to_string(Method method)
{
    return method == Method::Ambient ? "ambient" : "intrinsic";
}

std::string_view to_string(BoundaryCondition bc)
{
    switch (bc) {
    case BoundaryCondition::Closed: return "closed";
    case BoundaryCondition::Neumann: return "neumann";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    }
    return "closed";
}

Index SpectralResult::inf_count() const
{
    return static_cast<Index>(std::count_if(values.begin(), values.end(), [](double v) { return std::isinf(v); }));
}

namespace fault {
void set_fem_sign_bug(bool enabled) { g_fem_sign_bug = enabled; }
bool fem_sign_bug() { return g_fem_sign_bug; }
} // namespace fault

MatrixPair<double> assemble(const MassMeasure& measure, const AmbientBasis& basis)
{
    require(basis.size() > 0, ErrorCode::InvalidArgument, "empty basis");
    require(measure.ambient_dim == basis.ambient_dim() || measure.size() == 0, ErrorCode::DimensionMismatch,
            "measure and basis live in different spaces");
    const Index m = basis.size();
    MatrixPair<double> pair{Matrix::Zero(m, m), Matrix::Zero(m, m)};
    std::vector<Index> ids;
    std::vector<double> values;
    Matrix grads;
    for (Index q = 0; q < measure.size(); ++q) {
        basis.nonzero_at(measure.points.col(q), ids, values, grads);
        const double w = measure.weights(q);
        for (size_t a = 0; a < ids.size(); ++a) {
            for (size_t b = 0; b < ids.size(); ++b) {
                const Index i = ids[a], j = ids[b];
                if (i > j) continue;
                pair.B(i, j) += w * values[a] * values[b];
                pair.A(i, j) += w * grads.col(static_cast<Index>(a)).dot(grads.col(static_cast<Index>(b)));
            }
        }
    }
    pair.A.triangularView<Eigen::StrictlyLower>() = pair.A.transpose();
    pair.B.triangularView<Eigen::StrictlyLower>() = pair.B.transpose();
    require(pair.A.allFinite() && pair.B.allFinite(), ErrorCode::NonFiniteEntry, "assembled matrix is not finite");
    return pair;
}

MassMeasure ambient_measure(const Chain& chain, const AmbientBasis& basis)
{
    if (basis.kind() == BasisKind::Spline && chain.dim >= 1 && chain.dim <= 2) {
        // Atoms are degree 3 per axis, so products restricted to a flat piece
        // have total degree at most 6N.
        return quadrature_measure_aligned(chain, basis.knot_lattice(), 3 * basis.ambient_dim() + 1);
    }
    return quadrature_measure(chain, 3);
}

SpectralResult rayleigh_spectrum(const MassMeasure& measure, const AmbientBasis& basis, Index k, double null_threshold)
{
    require(k >= 1 && k <= basis.size(), ErrorCode::KTooLarge, "k exceeds the basis size");
    const int n = basis.ambient_dim();
    SpectralResult out;
    out.values.assign(static_cast<size_t>(k), kInfinity);

    // Columns only for atoms that meet a node.
    std::vector<Index> column(basis.size(), -1);
    Index active = 0;
    std::vector<Index> ids;
    std::vector<double> values;
    Matrix grads;
    for (Index q = 0; q < measure.size(); ++q) {
        basis.nonzero_at(measure.points.col(q), ids, values, grads);
        for (Index id : ids) {
            if (column[id] < 0) column[id] = active++;
        }
    }
    if (active == 0) return out;

    // Nodes sharing a support set are reduced to a local R factor first; the
    // Gram matrices of the stacked factors equal those of the full rows.
    std::map<std::vector<Index>, std::vector<Index>> groups;
    for (Index q = 0; q < measure.size(); ++q) {
        basis.nonzero_at(measure.points.col(q), ids, values, grads);
        groups[ids].push_back(q);
    }
    std::vector<FactorBlock> blocks;
    for (const auto& [support, nodes] : groups) {
        const Index s = static_cast<Index>(support.size());
        const Index count = static_cast<Index>(nodes.size());
        std::vector<Index> order(support.size());
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index x, Index y) { return column[support[x]] < column[support[y]]; });
        FactorBlock block;
        block.centroid = Eigen::VectorXd::Zero(n);
        Matrix value_rows(count, s), grad_rows(count * n, s);
        for (Index r = 0; r < count; ++r) {
            const Index q = nodes[static_cast<size_t>(r)];
            const double root = std::sqrt(measure.weights(q));
            block.centroid += measure.points.col(q) / static_cast<double>(count);
            basis.nonzero_at(measure.points.col(q), ids, values, grads);
            for (Index a = 0; a < s; ++a) {
                const Index src = order[static_cast<size_t>(a)];
                value_rows(r, a) = root * values[static_cast<size_t>(src)];
                for (int d = 0; d < n; ++d) grad_rows(r * n + d, a) = root * grads(d, src);
            }
        }
        require(value_rows.allFinite() && grad_rows.allFinite(), ErrorCode::NonFiniteEntry,
                "basis value is not finite at a node");
        for (Index src : order) block.cols.push_back(column[support[static_cast<size_t>(src)]]);
        block.value = local_factor(value_rows);
        block.grad = local_factor(grad_rows);
        blocks.push_back(std::move(block));
    }
    const FactorBlock root = reduce(blocks, 0, blocks.size());
    std::vector<Index> all(static_cast<size_t>(active));
    std::iota(all.begin(), all.end(), Index{0});
    const Matrix r_value = widen(root.value, root.cols, all);
    const Matrix r_grad = widen(root.grad, root.cols, all);

    Matrix stack(r_value.rows() + r_grad.rows(), active);
    stack << r_value, r_grad;
    const Eigen::ColPivHouseholderQR<Matrix> qr(stack);
    const auto diag = qr.matrixQR().diagonal().cwiseAbs();
    const double lead = diag.size() > 0 ? diag(0) : 0.0;
    Index rank = 0;
    while (rank < diag.size() && diag(rank) > kRankCut * lead) ++rank;
    if (rank == 0) return out;
    const Matrix q_thin = qr.householderQ() * Matrix::Identity(stack.rows(), rank);
    const Matrix q_value = q_thin.topRows(r_value.rows());
    Matrix cosines = q_value.transpose() * q_value;
    cosines = 0.5 * (cosines + cosines.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(cosines, Eigen::EigenvaluesOnly);
    std::vector<double> finite;
    for (Index i = rank - 1; i >= 0; --i) {
        const double s = std::min(1.0, eig.eigenvalues()(i));
        if (s <= null_threshold) continue;
        finite.push_back(std::max(0.0, (1.0 - s) / s));
    }
    std::sort(finite.begin(), finite.end());
    out.kept_dim = static_cast<Index>(finite.size());
    for (size_t i = 0; i < std::min(finite.size(), out.values.size()); ++i) out.values[i] = finite[i];
    return out;
}

SpectralResult ambient_lambda(const Chain& chain, const AmbientBasis& basis, Index k)
{
    require(mass(chain) > 0.0, ErrorCode::InvalidArgument, "chain has zero mass");
    require(k >= 1 && k <= basis.size(), ErrorCode::KTooLarge, "k exceeds the basis size");
    return with_tags(rayleigh_spectrum(ambient_measure(chain, basis), basis, k), Method::Ambient, natural_bc(chain));
}

SpectralResult ambient_lambda_dirichlet(
    const Chain& chain,
    const AmbientBasis& basis,
    Index k,
    double epsilon,
    const SimplexSet& boundary_set)
{
    require(mass(chain) > 0.0, ErrorCode::InvalidArgument, "chain has zero mass");
    const AmbientBasis filtered = filter_dirichlet(basis, boundary_set, epsilon);
    require(k >= 1 && k <= filtered.size(), ErrorCode::KTooLarge, "k exceeds the filtered basis size");
    return with_tags(rayleigh_spectrum(ambient_measure(chain, filtered), filtered, k), Method::Ambient,
                     BoundaryCondition::Dirichlet);
}

SpectralResult ambient_lambda_dirichlet(const Chain& chain, const AmbientBasis& basis, Index k, double epsilon)
{
    const SimplexSet boundary_set =
        chain.dim >= 1 ? set_of(boundary(chain)) : SimplexSet{chain.complex, 0, {}};
    return ambient_lambda_dirichlet(chain, basis, k, epsilon, boundary_set);
}

FemSystem assemble_curve_fem(const Chain& chain)
{
    require(chain.dim == 1, ErrorCode::DimensionMismatch, "curve FEM needs a 1-chain");
    const auto& cx = *chain.complex;
    const SimplexSet active = set_of(chain);
    std::vector<int> degree(cx.num_vertices(), 0);
    for (Index e : active.indices) {
        const auto ids = cx.simplex(1, e);
        ++degree[ids(0)];
        ++degree[ids(1)];
    }
    for (int d : degree) require(d <= 2, ErrorCode::NotAManifoldChain, "a vertex meets more than two edges");
    const DofMap map = number_vertices(cx, 1, active.indices);
    const Index n = static_cast<Index>(map.vertex_of_dof.size());
    const double off_sign = fault::fem_sign_bug() ? 1.0 : -1.0;
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (Index e : active.indices) {
        const auto ids = cx.simplex(1, e);
        const Index a = map.dof_of_vertex[ids(0)], b = map.dof_of_vertex[ids(1)];
        const double h = cx.volume(1, e);
        const double w = std::abs(chain.multiplicities(e));
        kt.emplace_back(a, a, w / h);
        kt.emplace_back(b, b, w / h);
        kt.emplace_back(a, b, off_sign * w / h);
        kt.emplace_back(b, a, off_sign * w / h);
        mt.emplace_back(a, a, w * h / 3.0);
        mt.emplace_back(b, b, w * h / 3.0);
        mt.emplace_back(a, b, w * h / 6.0);
        mt.emplace_back(b, a, w * h / 6.0);
    }
    FemSystem sys;
    sys.stiffness.resize(n, n);
    sys.mass.resize(n, n);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    sys.vertex_of_dof = map.vertex_of_dof;
    for (Index d = 0; d < n; ++d) {
        if (degree[map.vertex_of_dof[d]] == 1) sys.boundary_dofs.push_back(d);
    }
    return sys;
}

FemSystem assemble_surface_fem(const Chain& chain)
{
    require(chain.dim == 2, ErrorCode::DimensionMismatch, "surface FEM needs a 2-chain");
    const auto& cx = *chain.complex;
    const SimplexSet active = set_of(chain);
    const IncidenceMatrix& inc = cx.incidence(2);
    std::vector<int> edge_count(cx.num_simplices(1), 0);
    for (Index t : active.indices) {
        for (IncidenceMatrix::InnerIterator it(inc, t); it; ++it) ++edge_count[it.row()];
    }
    for (int c : edge_count) require(c <= 2, ErrorCode::NonManifoldEdge, "an edge meets more than two triangles");
    const DofMap map = number_vertices(cx, 2, active.indices);
    const Index n = static_cast<Index>(map.vertex_of_dof.size());
    const double off_sign = fault::fem_sign_bug() ? -1.0 : 1.0;
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (Index t : active.indices) {
        const auto ids = cx.simplex(2, t);
        const double area = cx.volume(2, t);
        const double w = std::abs(chain.multiplicities(t));
        // Edge opposite vertex i, oriented cyclically.
        Matrix e(cx.ambient_dim(), 3);
        for (int i = 0; i < 3; ++i) e.col(i) = cx.vertex(ids((i + 2) % 3)) - cx.vertex(ids((i + 1) % 3));
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const Index a = map.dof_of_vertex[ids(i)], b = map.dof_of_vertex[ids(j)];
                const double kij = w * e.col(i).dot(e.col(j)) / (4.0 * area);
                kt.emplace_back(a, b, i == j ? kij : off_sign * kij);
                mt.emplace_back(a, b, w * area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }
    FemSystem sys;
    sys.stiffness.resize(n, n);
    sys.mass.resize(n, n);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    sys.vertex_of_dof = map.vertex_of_dof;
    std::vector<char> on_boundary(n, 0);
    for (Index edge = 0; edge < cx.num_simplices(1); ++edge) {
        if (edge_count[edge] != 1) continue;
        const auto ids = cx.simplex(1, edge);
        on_boundary[map.dof_of_vertex[ids(0)]] = 1;
        on_boundary[map.dof_of_vertex[ids(1)]] = 1;
    }
    for (Index d = 0; d < n; ++d) {
        if (on_boundary[d]) sys.boundary_dofs.push_back(d);
    }
    return sys;
}

std::vector<double> fem_eigenvalues(const FemSystem& system, const std::vector<Index>& constrained, Index k)
{
    const Index n = system.stiffness.rows();
    std::vector<Index> free_of(n, 0);
    for (Index c : constrained) {
        require(c >= 0 && c < n, ErrorCode::IndexOutOfRange, "constrained unknown out of range");
        free_of[c] = -1;
    }
    Index free = 0;
    for (Index i = 0; i < n; ++i) {
        if (free_of[i] == 0) free_of[i] = free++;
    }
    require(k >= 1 && k <= free, ErrorCode::KTooLarge, "k exceeds the number of free unknowns");
    const SparseMatrix kf = restrict_to(system.stiffness, free_of);
    const SparseMatrix mf = restrict_to(system.mass, free_of);
    if (free <= kDenseFemLimit) {
        const Matrix kd = Matrix(kf), md = Matrix(mf);
        const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(kd, md, Eigen::EigenvaluesOnly);
        require(eig.info() == Eigen::Success, ErrorCode::InvalidArgument, "FEM mass matrix is not positive definite");
        return {eig.eigenvalues().data(), eig.eigenvalues().data() + k};
    }
    return subspace_iteration(kf, mf, k);
}

SpectralResult intrinsic_curve_spectrum(const Chain& chain, BoundaryCondition bc, Index k)
{
    const FemSystem sys = assemble_curve_fem(chain);
    std::vector<Index> constrained;
    if (bc == BoundaryCondition::Dirichlet) {
        require(!sys.boundary_dofs.empty(), ErrorCode::DirichletOnClosed, "Dirichlet condition on a closed curve");
        constrained = sys.boundary_dofs;
    }
    SpectralResult out;
    out.values = fem_eigenvalues(sys, constrained, k);
    out.kept_dim = sys.stiffness.rows() - static_cast<Index>(constrained.size());
    return with_tags(out, Method::Intrinsic, bc);
}

SpectralResult intrinsic_surface_spectrum(const Chain& chain, BoundaryCondition bc, Index k)
{
    const FemSystem sys = assemble_surface_fem(chain);
    std::vector<Index> constrained;
    if (bc == BoundaryCondition::Dirichlet) {
        require(!sys.boundary_dofs.empty(), ErrorCode::DirichletOnClosed, "Dirichlet condition on a closed surface");
        constrained = sys.boundary_dofs;
    }
    SpectralResult out;
    out.values = fem_eigenvalues(sys, constrained, k);
    out.kept_dim = sys.stiffness.rows() - static_cast<Index>(constrained.size());
    return with_tags(out, Method::Intrinsic, bc);
}

SpectralResult intrinsic_surface_spectrum_mixed(const Chain& chain, const std::vector<Index>& dirichlet_vertices, Index k)
{
    const FemSystem sys = assemble_surface_fem(chain);
    std::vector<Index> dof_of_vertex(chain.complex->num_vertices(), -1);
    for (size_t d = 0; d < sys.vertex_of_dof.size(); ++d) dof_of_vertex[sys.vertex_of_dof[d]] = static_cast<Index>(d);
    std::vector<Index> constrained;
    for (Index v : dirichlet_vertices) {
        require(v >= 0 && v < chain.complex->num_vertices(), ErrorCode::IndexOutOfRange, "vertex index");
        if (dof_of_vertex[v] >= 0) constrained.push_back(dof_of_vertex[v]);
    }
    std::sort(constrained.begin(), constrained.end());
    constrained.erase(std::unique(constrained.begin(), constrained.end()), constrained.end());
    SpectralResult out;
    out.values = fem_eigenvalues(sys, constrained, k);
    out.kept_dim = sys.stiffness.rows() - static_cast<Index>(constrained.size());
    return with_tags(out, Method::Intrinsic, BoundaryCondition::Dirichlet);
}

AnalyticModel circle_model(double length) { return {AnalyticModel::Kind::Circle, length, 0.0}; }
AnalyticModel two_circles_model(double length1, double length2) { return {AnalyticModel::Kind::TwoCircles, length1, length2}; }
AnalyticModel interval_dirichlet_model(double length) { return {AnalyticModel::Kind::IntervalDirichlet, length, 0.0}; }
AnalyticModel sphere_model(double radius) { return {AnalyticModel::Kind::Sphere, radius, 0.0}; }

std::vector<double> analytic_spectrum(const AnalyticModel& model, Index k)
{
    require(k >= 1, ErrorCode::InvalidArgument, "k must be positive");
    constexpr double pi = std::numbers::pi;
    std::vector<double> out;
    switch (model.kind) {
    case AnalyticModel::Kind::Circle:
        for (Index i = 1; i <= k; ++i) {
            const double v = 2.0 * pi * static_cast<double>(i / 2) / model.a;
            out.push_back(v * v);
        }
        return out;
    case AnalyticModel::Kind::TwoCircles:
        return merge_spectra({analytic_spectrum(circle_model(model.a), k), analytic_spectrum(circle_model(model.b), k)}, k);
    case AnalyticModel::Kind::IntervalDirichlet:
        for (Index i = 1; i <= k; ++i) {
            const double v = static_cast<double>(i) * pi / model.a;
            out.push_back(v * v);
        }
        return out;
    case AnalyticModel::Kind::Sphere:
        for (Index l = 0; static_cast<Index>(out.size()) < k; ++l) {
            const double v = static_cast<double>(l * (l + 1)) / (model.a * model.a);
            for (Index m = 0; m < 2 * l + 1 && static_cast<Index>(out.size()) < k; ++m) out.push_back(v);
        }
        return out;
    }
    return out;
}

std::vector<double> merge_spectra(const std::vector<std::vector<double>>& lists, Index k)
{
    std::vector<double> all;
    for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.begin(), all.end());
    if (static_cast<Index>(all.size()) > k) all.resize(static_cast<size_t>(k));
    return all;
}

} // namespace currents
