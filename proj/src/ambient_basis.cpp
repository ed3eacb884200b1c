#include <currents/ambient_basis.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace currents {

namespace {

// The four cubic pieces that are nonzero on [c, c+1), local coordinate t.
inline void cubic_pieces(double t, double v[4], double d[4])
{
    const double s = 1.0 - t;
    v[0] = s * s * s / 6.0;
    v[1] = (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
    v[2] = (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
    v[3] = t * t * t / 6.0;
    d[0] = -0.5 * s * s;
    d[1] = 1.5 * t * t - 2.0 * t;
    d[2] = -1.5 * t * t + t + 0.5;
    d[3] = 0.5 * t * t;
}

double point_box_distance_sq(const Box& box, const Eigen::Ref<const Vector>& p)
{
    double s = 0.0;
    for (int k = 0; k < box.dim(); ++k) {
        const double e = std::max({box.lo(k) - p(k), 0.0, p(k) - box.hi(k)});
        s += e * e;
    }
    return s;
}

} // namespace

double box_distance(const Box& box, const Eigen::Ref<const Matrix>& simplex)
{
    require(simplex.rows() == box.dim(), ErrorCode::DimensionMismatch, "simplex and box dimensions differ");
    if (simplex.cols() == 1) return std::sqrt(point_box_distance_sq(box, simplex.col(0)));
    require(simplex.cols() == 2, ErrorCode::UnsupportedDimension, "box distance implemented for points and segments");
    // Squared distance along p(t) = a + t d is piecewise quadratic with breaks
    // where a coordinate crosses a slab face.
    const Vector a = simplex.col(0);
    const Vector d = simplex.col(1) - a;
    std::vector<double> breaks{0.0, 1.0};
    for (int k = 0; k < box.dim(); ++k) {
        if (d(k) == 0.0) continue;
        for (double face : {box.lo(k), box.hi(k)}) {
            const double t = (face - a(k)) / d(k);
            if (t > 0.0 && t < 1.0) breaks.push_back(t);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    double best = std::min(point_box_distance_sq(box, a), point_box_distance_sq(box, a + d));
    for (size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double t0 = breaks[b], t1 = breaks[b + 1];
        const double mid = 0.5 * (t0 + t1);
        // Coefficients of sum over clamped axes of (a_k + t d_k - face_k)^2.
        double qa = 0.0, qb = 0.0;
        for (int k = 0; k < box.dim(); ++k) {
            const double x = a(k) + mid * d(k);
            double face;
            if (x < box.lo(k)) face = box.lo(k);
            else if (x > box.hi(k)) face = box.hi(k);
            else continue;
            const double off = a(k) - face;
            qa += d(k) * d(k);
            qb += 2.0 * off * d(k);
        }
        if (qa > 0.0) {
            const double t = std::clamp(-qb / (2.0 * qa), t0, t1);
            best = std::min(best, point_box_distance_sq(box, a + t * d));
        }
        best = std::min(best, point_box_distance_sq(box, a + t1 * d));
    }
    return std::sqrt(best);
}

Vector AmbientBasis::cell_width() const
{
    return (box_.hi - box_.lo).cwiseQuotient(cells_.cast<double>());
}

double AmbientBasis::evaluate(Index atom, const Eigen::Ref<const Vector>& x, Vector* gradient) const
{
    require(atom >= 0 && atom < size(), ErrorCode::IndexOutOfRange, "atom index");
    const Atom& a = atoms_[atom];
    if (kind_ == BasisKind::Rbf) {
        const Vector diff = x - centers_.col(a.center);
        const double v = std::exp(-diff.squaredNorm() / (2.0 * width_ * width_));
        if (gradient) *gradient = -v / (width_ * width_) * diff;
        return v;
    }
    const Vector h = cell_width();
    Vector v1(ambient_dim_), d1(ambient_dim_);
    for (int k = 0; k < ambient_dim_; ++k) {
        const double u = (x(k) - box_.lo(k)) / h(k);
        const double c = std::floor(u);
        const int local = a.knot_index(k) - static_cast<int>(c);
        if (local < 0 || local > 3) {
            v1(k) = 0.0;
            d1(k) = 0.0;
            continue;
        }
        double v[4], d[4];
        cubic_pieces(u - c, v, d);
        v1(k) = v[local];
        d1(k) = d[local] / h(k);
    }
    const double value = v1.prod();
    if (gradient) {
        gradient->resize(ambient_dim_);
        for (int k = 0; k < ambient_dim_; ++k) {
            double g = d1(k);
            for (int m = 0; m < ambient_dim_; ++m) {
                if (m != k) g *= v1(m);
            }
            (*gradient)(k) = g;
        }
    }
    return value;
}

void AmbientBasis::nonzero_at(
    const Eigen::Ref<const Vector>& x,
    std::vector<Index>& ids,
    std::vector<double>& values,
    Matrix& gradients) const
{
    ids.clear();
    values.clear();
    if (kind_ == BasisKind::Rbf) {
        std::vector<Vector> grads;
        for (Index i = 0; i < size(); ++i) {
            if (point_box_distance_sq(atoms_[i].support, x) > 0.0) continue;
            Vector g;
            values.push_back(evaluate(i, x, &g));
            grads.push_back(std::move(g));
            ids.push_back(i);
        }
        gradients.resize(ambient_dim_, static_cast<Index>(ids.size()));
        for (size_t j = 0; j < grads.size(); ++j) gradients.col(static_cast<Index>(j)) = grads[j];
        return;
    }
    const Vector h = cell_width();
    const int n = ambient_dim_;
    int first[8];
    double val[8][4], der[8][4];
    for (int k = 0; k < n; ++k) {
        const double u = (x(k) - box_.lo(k)) / h(k);
        const double c = std::floor(u);
        if (c < -3.0 || c > cells_(k) + 2.0) {
            gradients.resize(n, 0);
            return;
        }
        first[k] = static_cast<int>(c);
        cubic_pieces(u - c, val[k], der[k]);
        for (int l = 0; l < 4; ++l) der[k][l] /= h(k);
    }
    std::vector<Vector> grads;
    int local[8] = {0};
    const int combos = 1 << (2 * n);
    for (int combo = 0; combo < combos; ++combo) {
        Index flat = 0;
        bool valid = true;
        for (int k = n - 1; k >= 0; --k) {
            local[k] = (combo >> (2 * k)) & 3;
            const int j = first[k] + local[k];
            if (j < 0 || j > cells_(k) + 2) {
                valid = false;
                break;
            }
            flat = flat * (cells_(k) + 3) + j;
        }
        if (!valid) continue;
        const Index slot = slot_[flat];
        if (slot < 0) continue;
        double value = 1.0;
        for (int k = 0; k < n; ++k) value *= val[k][local[k]];
        Vector g(n);
        for (int k = 0; k < n; ++k) {
            double gk = der[k][local[k]];
            for (int m = 0; m < n; ++m) {
                if (m != k) gk *= val[m][local[m]];
            }
            g(k) = gk;
        }
        ids.push_back(slot);
        values.push_back(value);
        grads.push_back(std::move(g));
    }
    gradients.resize(n, static_cast<Index>(ids.size()));
    for (size_t j = 0; j < grads.size(); ++j) gradients.col(static_cast<Index>(j)) = grads[j];
}

AxisLattice AmbientBasis::knot_lattice() const
{
    require(kind_ == BasisKind::Spline, ErrorCode::InvalidArgument, "knot lattice of a non-spline basis");
    return AxisLattice{box_.lo, cell_width()};
}

void AmbientBasis::index_slots()
{
    if (kind_ != BasisKind::Spline) return;
    Index total = 1;
    for (int k = 0; k < ambient_dim_; ++k) total *= cells_(k) + 3;
    slot_.assign(total, -1);
    for (Index i = 0; i < size(); ++i) {
        Index flat = 0;
        for (int k = ambient_dim_ - 1; k >= 0; --k) flat = flat * (cells_(k) + 3) + atoms_[i].knot_index(k);
        slot_[flat] = i;
    }
}

AmbientBasis AmbientBasis::subset(const std::vector<Index>& keep) const
{
    AmbientBasis out = *this;
    out.atoms_.clear();
    for (Index i : keep) {
        require(i >= 0 && i < size(), ErrorCode::IndexOutOfRange, "atom index");
        out.atoms_.push_back(atoms_[i]);
    }
    out.index_slots();
    return out;
}

AmbientBasis make_spline_basis(const Box& box, const std::vector<int>& cells_per_axis, int degree)
{
    require(degree == 3, ErrorCode::InvalidArgument, "only cubic splines are supported");
    const int n = box.dim();
    require(n >= 1 && n <= 4 && box.hi.size() == n, ErrorCode::BoxDegenerate, "box dimension");
    require(static_cast<int>(cells_per_axis.size()) == n, ErrorCode::DimensionMismatch, "one cell count per axis");
    for (int k = 0; k < n; ++k) {
        require(box.hi(k) > box.lo(k) && std::isfinite(box.hi(k) - box.lo(k)), ErrorCode::BoxDegenerate,
                "box has zero or invalid extent");
        require(cells_per_axis[k] >= 2, ErrorCode::InvalidArgument, "at least two cells per axis");
    }
    AmbientBasis b;
    b.kind_ = BasisKind::Spline;
    b.ambient_dim_ = n;
    b.box_ = box;
    b.cells_ = Eigen::Map<const Eigen::VectorXi>(cells_per_axis.data(), n);
    const Vector h = b.cell_width();
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(n);
    for (;;) {
        Atom a;
        a.knot_index = idx;
        a.support.lo = box.lo.array() + (idx.cast<double>().array() - 3.0) * h.array();
        a.support.hi = box.lo.array() + (idx.cast<double>().array() + 1.0) * h.array();
        b.atoms_.push_back(std::move(a));
        int k = 0;
        while (k < n && ++idx(k) > b.cells_(k) + 2) idx(k++) = 0;
        if (k == n) break;
    }
    b.index_slots();
    return b;
}

AmbientBasis make_rbf_basis(const Matrix& centers, double width)
{
    require(width > 0.0 && std::isfinite(width), ErrorCode::InvalidArgument, "rbf width must be positive");
    require(centers.cols() >= 1, ErrorCode::InvalidArgument, "rbf basis needs centres");
    std::set<std::vector<double>> seen;
    for (Index i = 0; i < centers.cols(); ++i) {
        std::vector<double> key(centers.col(i).data(), centers.col(i).data() + centers.rows());
        require(seen.insert(key).second, ErrorCode::DuplicateCenters, "rbf centres must be pairwise distinct");
    }
    AmbientBasis b;
    b.kind_ = BasisKind::Rbf;
    b.ambient_dim_ = static_cast<int>(centers.rows());
    b.centers_ = centers;
    b.width_ = width;
    for (Index i = 0; i < centers.cols(); ++i) {
        Atom a;
        a.center = i;
        a.support.lo = centers.col(i).array() - 6.0 * width;
        a.support.hi = centers.col(i).array() + 6.0 * width;
        b.atoms_.push_back(std::move(a));
    }
    return b;
}

AmbientBasis filter_dirichlet(const AmbientBasis& basis, const SimplexSet& boundary_set, double epsilon)
{
    require(epsilon > 0.0, ErrorCode::InvalidArgument, "epsilon must be positive");
    if (boundary_set.empty()) return basis;
    const auto& cx = *boundary_set.complex;
    require(cx.ambient_dim() == basis.ambient_dim(), ErrorCode::DimensionMismatch, "boundary lives in another space");
    std::vector<Matrix> pieces;
    for (Index s : boundary_set.indices) pieces.push_back(cx.corners(boundary_set.dim, s));
    std::vector<Index> keep;
    for (Index i = 0; i < basis.size(); ++i) {
        const Box& support = basis.atoms()[i].support;
        bool far = true;
        for (const auto& piece : pieces) {
            if (box_distance(support, piece) <= epsilon) {
                far = false;
                break;
            }
        }
        if (far) keep.push_back(i);
    }
    require(!keep.empty(), ErrorCode::EmptyAfterFilter, "no atom survives the boundary filter");
    return basis.subset(keep);
}

Box bounding_box(const Chain& chain, double inflate)
{
    const auto& cx = *chain.complex;
    const int n = cx.ambient_dim();
    Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
    Vector hi = Vector::Constant(n, -std::numeric_limits<double>::infinity());
    for (Index i = 0; i < chain.size(); ++i) {
        if (chain.multiplicities(i) == 0.0) continue;
        const auto s = cx.simplex(chain.dim, i);
        for (Index k = 0; k < s.size(); ++k) {
            lo = lo.cwiseMin(cx.vertex(s(k)));
            hi = hi.cwiseMax(cx.vertex(s(k)));
        }
    }
    require(lo.allFinite() && hi.allFinite(), ErrorCode::BoxDegenerate, "chain has empty support");
    const double extent = (hi - lo).maxCoeff();
    require(extent > 0.0, ErrorCode::BoxDegenerate, "chain support is a point");
    return Box{lo.array() - inflate * extent, hi.array() + inflate * extent};
}

AmbientBasis default_spline_basis(const Chain& chain, int cells)
{
    const Box box = bounding_box(chain);
    return make_spline_basis(box, std::vector<int>(box.dim(), cells));
}

Index gram_rank(const AmbientBasis& basis, const Matrix& probes, double rel_tol)
{
    Matrix values(probes.cols(), basis.size());
    for (Index p = 0; p < probes.cols(); ++p) {
        for (Index i = 0; i < basis.size(); ++i) values(p, i) = basis.evaluate(i, probes.col(p));
    }
    const Matrix gram = values.transpose() * values;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    return (eig.eigenvalues().array() > rel_tol * top).count();
}

} // namespace currents
