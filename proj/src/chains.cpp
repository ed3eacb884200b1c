#include <currents/chains.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace currents {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::NonUniformArity: return "NonUniformArity";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionZero: return "DimensionZero";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyRadii: return "EmptyRadii";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::GridMassNotAvoidable: return "GridMassNotAvoidable";
    case ErrorCode::BoxDegenerate: return "BoxDegenerate";
    case ErrorCode::DuplicateCenters: return "DuplicateCenters";
    case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::NotAManifoldChain: return "NotAManifoldChain";
    case ErrorCode::DirichletOnClosed: return "DirichletOnClosed";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::LPUnbounded: return "LPUnbounded";
    case ErrorCode::LPStall: return "LPStall";
    case ErrorCode::TooFewSegments: return "TooFewSegments";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::HolesOverlap: return "HolesOverlap";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

// Sign of the permutation sorting `ids`; 0 if an index repeats.
int sort_with_sign(std::vector<int>& ids)
{
    int sign = 1;
    for (size_t i = 1; i < ids.size(); ++i) {
        for (size_t j = i; j > 0 && ids[j - 1] >= ids[j]; --j) {
            if (ids[j - 1] == ids[j]) return 0;
            std::swap(ids[j - 1], ids[j]);
            sign = -sign;
        }
    }
    return sign;
}

IndexMatrix to_matrix(const std::vector<std::vector<int>>& cells, int arity)
{
    IndexMatrix m(arity, static_cast<Index>(cells.size()));
    for (size_t c = 0; c < cells.size(); ++c) {
        for (int r = 0; r < arity; ++r) m(r, static_cast<Index>(c)) = cells[c][r];
    }
    return m;
}

} // namespace

Index SimplicialComplex::num_simplices(int d) const
{
    if (d < 0 || d > top_dim_) return 0;
    return simplices_[d].cols();
}

const IndexMatrix& SimplicialComplex::simplices(int d) const
{
    require(d >= 0 && d <= top_dim_, ErrorCode::IndexOutOfRange, "simplex dimension " + std::to_string(d));
    return simplices_[d];
}

const IncidenceMatrix& SimplicialComplex::incidence(int d) const
{
    require(d >= 1 && d <= top_dim_, ErrorCode::IndexOutOfRange, "incidence dimension " + std::to_string(d));
    return incidence_[d];
}

const Vector& SimplicialComplex::volumes(int d) const
{
    require(d >= 0 && d <= top_dim_, ErrorCode::IndexOutOfRange, "volume dimension " + std::to_string(d));
    return volumes_[d];
}

std::optional<OrientedCell> SimplicialComplex::find(std::span<const int> vertex_ids) const
{
    const int d = static_cast<int>(vertex_ids.size()) - 1;
    if (d < 0 || d > top_dim_) return std::nullopt;
    std::vector<int> key(vertex_ids.begin(), vertex_ids.end());
    const int sign = sort_with_sign(key);
    if (sign == 0) return std::nullopt;
    auto it = lookup_[d].find(key);
    if (it == lookup_[d].end()) return std::nullopt;
    return OrientedCell{it->second, sign};
}

Matrix SimplicialComplex::corners(int d, Index i) const
{
    const auto s = simplex(d, i);
    Matrix c(ambient_dim_, d + 1);
    for (int k = 0; k <= d; ++k) c.col(k) = vertices_.col(s(k));
    return c;
}

double SimplicialComplex::max_edge_length() const
{
    if (top_dim_ < 1) return 0.0;
    double longest = 0.0;
    const auto& e = simplices_[1];
    for (Index i = 0; i < e.cols(); ++i) {
        longest = std::max(longest, (vertices_.col(e(1, i)) - vertices_.col(e(0, i))).norm());
    }
    return longest;
}

void SimplicialComplex::finalize()
{
    lookup_.assign(top_dim_ + 1, {});
    for (int d = 0; d <= top_dim_; ++d) {
        for (Index i = 0; i < simplices_[d].cols(); ++i) {
            const auto col = simplices_[d].col(i);
            lookup_[d].emplace(std::vector<int>(col.data(), col.data() + d + 1), i);
        }
    }

    incidence_.assign(top_dim_ + 1, IncidenceMatrix());
    for (int d = 1; d <= top_dim_; ++d) {
        std::vector<Eigen::Triplet<int>> triplets;
        triplets.reserve(static_cast<size_t>(simplices_[d].cols()) * (d + 1));
        std::vector<int> face(d);
        for (Index i = 0; i < simplices_[d].cols(); ++i) {
            const auto col = simplices_[d].col(i);
            for (int k = 0; k <= d; ++k) {
                for (int r = 0, w = 0; r <= d; ++r) {
                    if (r != k) face[w++] = col(r);
                }
                const Index f = lookup_[d - 1].at(face);
                triplets.emplace_back(static_cast<int>(f), static_cast<int>(i), (k % 2 == 0) ? 1 : -1);
            }
        }
        incidence_[d].resize(simplices_[d - 1].cols(), simplices_[d].cols());
        incidence_[d].setFromTriplets(triplets.begin(), triplets.end());
    }
    for (int d = 2; d <= top_dim_; ++d) {
        IncidenceMatrix dd = incidence_[d - 1] * incidence_[d];
        dd.prune(0);
        require(dd.nonZeros() == 0, ErrorCode::InvalidArgument, "boundary of boundary is not zero");
    }

    volumes_.assign(top_dim_ + 1, Vector());
    for (int d = 0; d <= top_dim_; ++d) {
        Vector& vol = volumes_[d];
        vol.resize(simplices_[d].cols());
        for (Index i = 0; i < simplices_[d].cols(); ++i) {
            const Matrix c = corners(d, i);
            vol(i) = gram_volume(c);
            if (d == 0) continue;
            double longest = 0.0;
            for (int a = 0; a <= d; ++a) {
                for (int b = a + 1; b <= d; ++b) longest = std::max(longest, (c.col(a) - c.col(b)).norm());
            }
            if (!(vol(i) >= kDegeneracyThreshold * std::pow(longest, d)) || longest == 0.0) {
                fail(ErrorCode::DegenerateSimplex,
                     std::to_string(d) + "-simplex " + std::to_string(i) + " has volume " + std::to_string(vol(i)));
            }
        }
    }
}

ComplexPtr build_complex(int ambient_dim, const Matrix& vertices, const std::vector<std::vector<int>>& top_simplices)
{
    require(ambient_dim >= 1 && vertices.rows() == ambient_dim, ErrorCode::DimensionMismatch,
            "vertex matrix must have ambient_dim rows");
    require(vertices.allFinite(), ErrorCode::NonFiniteValue, "vertex coordinates must be finite");
    const Index nv = vertices.cols();
    const int arity = top_simplices.empty() ? 1 : static_cast<int>(top_simplices.front().size());
    require(arity >= 1, ErrorCode::NonUniformArity, "empty simplex");
    for (const auto& s : top_simplices) {
        require(static_cast<int>(s.size()) == arity, ErrorCode::NonUniformArity, "top simplices differ in arity");
        for (int v : s) {
            require(v >= 0 && v < nv, ErrorCode::IndexOutOfRange, "vertex index " + std::to_string(v));
        }
    }
    const int top = arity - 1;
    require(top <= ambient_dim, ErrorCode::DegenerateSimplex, "simplex dimension exceeds ambient dimension");

    auto complex = std::shared_ptr<SimplicialComplex>(new SimplicialComplex());
    complex->ambient_dim_ = ambient_dim;
    complex->top_dim_ = top;
    complex->vertices_ = vertices;

    std::vector<std::vector<std::vector<int>>> cells(top + 1);
    std::vector<std::map<std::vector<int>, Index>> seen(top + 1);
    cells[0].reserve(nv);
    for (int v = 0; v < nv; ++v) {
        cells[0].push_back({v});
        seen[0].emplace(std::vector<int>{v}, v);
    }
    auto insert = [&](int d, const std::vector<int>& key) -> Index {
        auto [it, fresh] = seen[d].emplace(key, static_cast<Index>(cells[d].size()));
        if (fresh) cells[d].push_back(key);
        return it->second;
    };

    for (const auto& s : top_simplices) {
        std::vector<int> key = s;
        const int sign = sort_with_sign(key);
        require(sign != 0, ErrorCode::DegenerateSimplex, "repeated vertex in simplex");
        const Index idx = insert(top, key);
        complex->input_cells_.push_back({idx, sign});
    }
    // Faces, from high to low dimension, in order of first discovery.
    for (int d = top; d >= 2; --d) {
        std::vector<int> face(d);
        for (size_t c = 0; c < cells[d].size(); ++c) {
            const std::vector<int> cell = cells[d][c];
            for (int k = 0; k <= d; ++k) {
                for (int r = 0, w = 0; r <= d; ++r) {
                    if (r != k) face[w++] = cell[r];
                }
                insert(d - 1, face);
            }
        }
    }

    complex->simplices_.resize(top + 1);
    for (int d = 0; d <= top; ++d) complex->simplices_[d] = to_matrix(cells[d], d + 1);
    complex->finalize();
    return complex;
}

ComplexPtr disjoint_union(const SimplicialComplex& a, const SimplicialComplex& b)
{
    require(a.ambient_dim() == b.ambient_dim(), ErrorCode::DimensionMismatch, "ambient dimensions differ");
    auto complex = std::shared_ptr<SimplicialComplex>(new SimplicialComplex());
    complex->ambient_dim_ = a.ambient_dim();
    complex->top_dim_ = std::max(a.top_dim(), b.top_dim());
    complex->vertices_.resize(a.ambient_dim(), a.num_vertices() + b.num_vertices());
    complex->vertices_ << a.vertices(), b.vertices();
    complex->simplices_.resize(complex->top_dim_ + 1);
    const int offset = static_cast<int>(a.num_vertices());
    for (int d = 0; d <= complex->top_dim_; ++d) {
        const Index na = a.num_simplices(d);
        const Index nb = b.num_simplices(d);
        IndexMatrix m(d + 1, na + nb);
        if (na > 0) m.leftCols(na) = a.simplices(d);
        if (nb > 0) m.rightCols(nb) = b.simplices(d).array() + offset;
        complex->simplices_[d] = std::move(m);
    }
    for (const auto& c : a.input_cells()) {
        if (a.top_dim() == complex->top_dim_) complex->input_cells_.push_back(c);
    }
    for (const auto& c : b.input_cells()) {
        if (b.top_dim() == complex->top_dim_) {
            complex->input_cells_.push_back({c.index + a.num_simplices(complex->top_dim_), c.sign});
        }
    }
    complex->finalize();
    return complex;
}

ComplexPtr with_vertices(const SimplicialComplex& complex, const Matrix& vertices)
{
    require(vertices.rows() == complex.ambient_dim() && vertices.cols() == complex.num_vertices(),
            ErrorCode::DimensionMismatch, "vertex matrix shape changed");
    auto moved = std::shared_ptr<SimplicialComplex>(new SimplicialComplex(complex));
    moved->vertices_ = vertices;
    moved->finalize();
    return moved;
}

double simplex_volume(const SimplicialComplex& complex, int dim, Index index)
{
    require(index >= 0 && index < complex.num_simplices(dim), ErrorCode::IndexOutOfRange,
            "simplex index " + std::to_string(index));
    return complex.volume(dim, index);
}

Chain zero_chain(ComplexPtr complex, int dim)
{
    const Index n = complex->num_simplices(dim);
    return Chain{std::move(complex), dim, Vector::Zero(n), true};
}

Chain chain_from_cells(ComplexPtr complex, const std::vector<double>& cell_multiplicities)
{
    const auto& cells = complex->input_cells();
    require(cell_multiplicities.size() == cells.size(), ErrorCode::DimensionMismatch,
            "one multiplicity per input cell expected");
    Chain c = zero_chain(complex, complex->top_dim());
    for (size_t i = 0; i < cells.size(); ++i) c.multiplicities(cells[i].index) += cells[i].sign * cell_multiplicities[i];
    c.integer = is_integral(c);
    return c;
}

Chain chain_from_cells(ComplexPtr complex)
{
    return chain_from_cells(complex, std::vector<double>(complex->input_cells().size(), 1.0));
}

namespace {

void require_compatible(const Chain& a, const Chain& b)
{
    require(a.complex == b.complex && a.dim == b.dim, ErrorCode::DimensionMismatch,
            "chains live on different complexes or dimensions");
}

} // namespace

Chain operator+(const Chain& a, const Chain& b)
{
    require_compatible(a, b);
    Chain c{a.complex, a.dim, a.multiplicities + b.multiplicities, false};
    c.integer = a.integer && b.integer;
    return c;
}

Chain operator-(const Chain& a, const Chain& b)
{
    require_compatible(a, b);
    Chain c{a.complex, a.dim, a.multiplicities - b.multiplicities, false};
    c.integer = a.integer && b.integer;
    return c;
}

Chain operator-(const Chain& a) { return Chain{a.complex, a.dim, -a.multiplicities, a.integer}; }

Chain operator*(double s, const Chain& c)
{
    Chain r{c.complex, c.dim, s * c.multiplicities, false};
    r.integer = c.integer && is_integral(r);
    return r;
}

bool is_integral(const Chain& chain, double tol)
{
    return ((chain.multiplicities.array() - chain.multiplicities.array().round()).abs() <= tol).all();
}

Chain boundary(const Chain& chain)
{
    require(chain.dim >= 1, ErrorCode::DimensionZero, "boundary of a 0-chain");
    if (chain.dim > chain.complex->top_dim()) return zero_chain(chain.complex, chain.dim - 1);
    const IncidenceMatrix& inc = chain.complex->incidence(chain.dim);
    Vector theta = inc.cast<double>() * chain.multiplicities;
    return Chain{chain.complex, chain.dim - 1, std::move(theta), chain.integer};
}

double mass(const Chain& chain)
{
    if (chain.size() == 0) return 0.0;
    return chain.multiplicities.cwiseAbs().dot(chain.complex->volumes(chain.dim));
}

SimplexSet set_of(const Chain& chain, double tol)
{
    require(tol >= 0.0, ErrorCode::InvalidArgument, "negative tolerance");
    SimplexSet s{chain.complex, chain.dim, {}};
    for (Index i = 0; i < chain.size(); ++i) {
        if (std::abs(chain.multiplicities(i)) > tol) s.indices.push_back(i);
    }
    return s;
}

Chain chain_union(const Chain& a, const Chain& b)
{
    require(a.complex->ambient_dim() == b.complex->ambient_dim(), ErrorCode::DimensionMismatch,
            "ambient dimensions differ");
    require(a.dim == b.dim, ErrorCode::DimensionMismatch, "chain dimensions differ");
    ComplexPtr u = disjoint_union(*a.complex, *b.complex);
    Vector theta(a.size() + b.size());
    theta << a.multiplicities, b.multiplicities;
    return Chain{u, a.dim, std::move(theta), a.integer && b.integer};
}

Chain map_vertices(const Chain& chain, const std::function<Point(const Point&)>& map)
{
    Matrix moved = chain.complex->vertices();
    for (Index i = 0; i < moved.cols(); ++i) moved.col(i) = map(moved.col(i));
    return Chain{with_vertices(*chain.complex, moved), chain.dim, chain.multiplicities, chain.integer};
}

Chain transfer_chain(const Chain& chain, const ComplexPtr& host, double tol)
{
    require(chain.complex->ambient_dim() == host->ambient_dim(), ErrorCode::DimensionMismatch,
            "ambient dimensions differ");
    require(chain.dim <= host->top_dim(), ErrorCode::DimensionMismatch, "host has no simplices of that dimension");
    const Matrix& hv = host->vertices();
    // Sort host vertices along the first coordinate for a windowed search.
    std::vector<Index> order(hv.cols());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Index x, Index y) { return hv(0, x) < hv(0, y); });
    auto locate = [&](const Eigen::Ref<const Vector>& p) -> int {
        auto lo = std::lower_bound(order.begin(), order.end(), p(0) - tol,
                                   [&](Index i, double v) { return hv(0, i) < v; });
        for (auto it = lo; it != order.end() && hv(0, *it) <= p(0) + tol; ++it) {
            if ((hv.col(*it) - p).lpNorm<Eigen::Infinity>() <= tol) return static_cast<int>(*it);
        }
        return -1;
    };
    std::vector<int> vmap(chain.complex->num_vertices(), -2);
    Chain out = zero_chain(host, chain.dim);
    out.integer = chain.integer;
    std::vector<int> ids(chain.dim + 1);
    for (Index i = 0; i < chain.size(); ++i) {
        if (chain.multiplicities(i) == 0.0) continue;
        const auto s = chain.complex->simplex(chain.dim, i);
        for (int k = 0; k <= chain.dim; ++k) {
            int& m = vmap[s(k)];
            if (m == -2) m = locate(chain.complex->vertex(s(k)));
            require(m >= 0, ErrorCode::InvalidArgument, "vertex not found on host complex");
            ids[k] = m;
        }
        const auto cell = host->find(ids);
        require(cell.has_value(), ErrorCode::InvalidArgument, "simplex not found on host complex");
        out.multiplicities(cell->index) += cell->sign * chain.multiplicities(i);
    }
    return out;
}

} // namespace currents
