#pragma once

#include <currents/chains.hpp>
#include <currents/measure.hpp>

#include <vector>

namespace currents {

/// Closed axis-aligned box.
struct Box {
    Vector lo;
    Vector hi;

    int dim() const { return static_cast<int>(lo.size()); }
};

/// Euclidean distance between a box and a point, or a segment (corners as columns).
double box_distance(const Box& box, const Eigen::Ref<const Matrix>& simplex);

enum class BasisKind { Spline, Rbf };

struct Atom {
    Box support;
    Eigen::VectorXi knot_index; // spline: per-axis atom index in [0, cells + 2]
    Index center = -1;          // rbf: column of the centre matrix
};

///
/// A finite family of smooth functions on R^N with analytic gradients:
/// tensor-product uniform cubic B-splines on a box, or Gaussians
/// exp(-|x - c|^2 / (2 w^2)) with effective support c +- 6w.
///
class AmbientBasis {
public:
    BasisKind kind() const { return kind_; }
    int ambient_dim() const { return ambient_dim_; }
    Index size() const { return static_cast<Index>(atoms_.size()); }
    const std::vector<Atom>& atoms() const { return atoms_; }

    const Box& box() const { return box_; }
    const Eigen::VectorXi& cells() const { return cells_; }
    int degree() const { return 3; }
    Vector cell_width() const;
    const Matrix& centers() const { return centers_; }
    double width() const { return width_; }

    /// Value of one atom at x; writes the gradient when requested.
    double evaluate(Index atom, const Eigen::Ref<const Vector>& x, Vector* gradient = nullptr) const;

    ///
    /// Atoms not identically zero near x, their values, and gradients (one
    /// column per returned atom).
    ///
    void nonzero_at(
        const Eigen::Ref<const Vector>& x,
        std::vector<Index>& ids,
        std::vector<double>& values,
        Matrix& gradients) const;

    /// Knot hyperplanes of a spline basis. Throws InvalidArgument for rbf.
    AxisLattice knot_lattice() const;

    /// Basis restricted to the listed atoms, in the given order.
    AmbientBasis subset(const std::vector<Index>& keep) const;

    friend AmbientBasis make_spline_basis(const Box&, const std::vector<int>&, int);
    friend AmbientBasis make_rbf_basis(const Matrix&, double);

private:
    void index_slots();

    BasisKind kind_ = BasisKind::Spline;
    int ambient_dim_ = 0;
    std::vector<Atom> atoms_;
    Box box_;
    Eigen::VectorXi cells_;
    std::vector<Index> slot_; // tensor index -> atom position, -1 when filtered out
    Matrix centers_;
    double width_ = 0.0;
};

///
/// Cubic tensor B-splines, (cells_k + 3) atoms per axis. Partition of unity
/// holds on the whole box. Throws BoxDegenerate, InvalidArgument.
///
AmbientBasis make_spline_basis(const Box& box, const std::vector<int>& cells_per_axis, int degree = 3);

/// Throws DuplicateCenters, InvalidArgument.
AmbientBasis make_rbf_basis(const Matrix& centers, double width);

///
/// Keeps the atoms whose support lies farther than epsilon from every simplex
/// of `boundary_set`. Throws EmptyAfterFilter.
///
AmbientBasis filter_dirichlet(const AmbientBasis& basis, const SimplexSet& boundary_set, double epsilon);

/// Bounding box of the chain's support, every side pushed out by
/// `inflate` times the largest extent. Throws BoxDegenerate.
Box bounding_box(const Chain& chain, double inflate = 0.1);

/// Spline basis on `bounding_box(chain)` with the same cell count on every axis.
AmbientBasis default_spline_basis(const Chain& chain, int cells = 12);

/// Numerical rank of the Gram matrix of the atoms sampled at `probes`.
Index gram_rank(const AmbientBasis& basis, const Matrix& probes, double rel_tol = 1e-10);

} // namespace currents
