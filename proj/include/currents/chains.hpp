#pragma once

#include <currents/error.hpp>
#include <currents/types.hpp>

#include <Eigen/LU>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace currents {

/// Relative degeneracy threshold: a d-simplex is rejected when its d-volume is
/// below this factor times (longest edge)^d.
inline constexpr double kDegeneracyThreshold = 1e-12;
/// Default tolerance for `set_of` and for integer multiplicities.
inline constexpr double kSetTolerance = 1e-9;

///
/// d-volume of the simplex spanned by the columns of `corners` (N x (d+1)),
/// computed as sqrt(det(G^T G)) / d! with G the edge-vector matrix.
///
template <typename Derived>
typename Derived::Scalar gram_volume(const Eigen::MatrixBase<Derived>& corners)
{
    using Scalar = typename Derived::Scalar;
    const Index d = corners.cols() - 1;
    if (d <= 0) return Scalar(1);
    MatrixX<Scalar> edges = corners.rightCols(d).colwise() - corners.col(0);
    const Scalar det = (edges.transpose() * edges).determinant();
    Scalar factorial(1);
    for (Index i = 2; i <= d; ++i) factorial *= Scalar(i);
    using std::sqrt;
    return sqrt(det > Scalar(0) ? det : Scalar(0)) / factorial;
}

/// Canonical index of an input top simplex together with the sign of the
/// permutation that sorts its vertices.
struct OrientedCell {
    Index index = 0;
    int sign = 1;
};

///
/// An embedded simplicial complex in R^N. Every simplex is stored with its
/// vertex indices in ascending order; the 0-simplices are exactly the vertices,
/// index-aligned. Instances are immutable and shared through `ComplexPtr`.
///
class SimplicialComplex {
public:
    int ambient_dim() const { return ambient_dim_; }
    int top_dim() const { return top_dim_; }

    Index num_vertices() const { return vertices_.cols(); }
    const Matrix& vertices() const { return vertices_; }
    auto vertex(Index i) const { return vertices_.col(i); }

    Index num_simplices(int d) const;
    /// Simplices of dimension d as columns of a (d+1) x count matrix.
    const IndexMatrix& simplices(int d) const;
    auto simplex(int d, Index i) const { return simplices(d).col(i); }

    /// Signed boundary relation from d-simplices (columns) to (d-1)-simplices (rows).
    const IncidenceMatrix& incidence(int d) const;

    const Vector& volumes(int d) const;
    double volume(int d, Index i) const { return volumes(d)(i); }

    /// Looks up a simplex by its (unsorted) vertex list. Returns the canonical
    /// index and the permutation sign of the given order.
    std::optional<OrientedCell> find(std::span<const int> vertex_ids) const;

    /// Orientation of each input top simplex, in input order.
    const std::vector<OrientedCell>& input_cells() const { return input_cells_; }

    /// Corner coordinates of a simplex as columns.
    Matrix corners(int d, Index i) const;

    /// Longest edge of the whole complex (0 for a vertex-only complex).
    double max_edge_length() const;

    friend std::shared_ptr<const SimplicialComplex> build_complex(
        int, const Matrix&, const std::vector<std::vector<int>>&);
    friend std::shared_ptr<const SimplicialComplex> disjoint_union(
        const SimplicialComplex&, const SimplicialComplex&);
    friend std::shared_ptr<const SimplicialComplex> with_vertices(
        const SimplicialComplex&, const Matrix&);

private:
    SimplicialComplex() = default;
    void finalize();

    int ambient_dim_ = 0;
    int top_dim_ = 0;
    Matrix vertices_;
    std::vector<IndexMatrix> simplices_;
    std::vector<IncidenceMatrix> incidence_;
    std::vector<Vector> volumes_;
    std::vector<std::map<std::vector<int>, Index>> lookup_;
    std::vector<OrientedCell> input_cells_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

///
/// Builds the closure of `top_simplices` (all faces enumerated and
/// deduplicated), the incidence matrices, and checks that the boundary of the
/// boundary vanishes. `vertices` is N x V.
///
/// Throws NonUniformArity, IndexOutOfRange, DegenerateSimplex.
///
ComplexPtr build_complex(
    int ambient_dim,
    const Matrix& vertices,
    const std::vector<std::vector<int>>& top_simplices);

/// Disjoint union; vertices and simplices of `b` are appended after those of `a`.
ComplexPtr disjoint_union(const SimplicialComplex& a, const SimplicialComplex& b);

/// Same combinatorics, new vertex positions (volumes recomputed and rechecked).
ComplexPtr with_vertices(const SimplicialComplex& complex, const Matrix& vertices);

double simplex_volume(const SimplicialComplex& complex, int dim, Index index);

/// A real multiplicity per d-simplex of a complex: a polyhedral d-current.
struct Chain {
    ComplexPtr complex;
    int dim = 0;
    Vector multiplicities;
    bool integer = false;

    Index size() const { return multiplicities.size(); }
};

Chain zero_chain(ComplexPtr complex, int dim);

/// Chain on the top simplices of `complex` with the given multiplicities per
/// input cell; the input vertex order fixes the orientation.
Chain chain_from_cells(ComplexPtr complex, const std::vector<double>& cell_multiplicities);
/// Same with multiplicity one on every input cell.
Chain chain_from_cells(ComplexPtr complex);

Chain operator+(const Chain& a, const Chain& b);
Chain operator-(const Chain& a, const Chain& b);
Chain operator-(const Chain& a);
Chain operator*(double s, const Chain& c);

/// True when every multiplicity is within `tol` of an integer.
bool is_integral(const Chain& chain, double tol = kSetTolerance);

/// Throws DimensionZero for 0-chains.
Chain boundary(const Chain& chain);

double mass(const Chain& chain);

/// Indices of the simplices carrying a multiplicity above `tol` in magnitude.
struct SimplexSet {
    ComplexPtr complex;
    int dim = 0;
    std::vector<Index> indices;

    bool empty() const { return indices.empty(); }
};

SimplexSet set_of(const Chain& chain, double tol = kSetTolerance);

/// Chain on the disjoint-union complex. Throws DimensionMismatch.
Chain chain_union(const Chain& a, const Chain& b);

/// Applies `map` to every vertex of the chain's complex.
Chain map_vertices(const Chain& chain, const std::function<Point(const Point&)>& map);

/// Moves a chain given on one complex onto `host` by matching vertex
/// coordinates within `tol`. Throws InvalidArgument if a simplex is missing.
Chain transfer_chain(const Chain& chain, const ComplexPtr& host, double tol = 1e-9);

} // namespace currents
