#include <currents/flatnorm.hpp>

#include <cmath>

namespace currents {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kPriceTol = 1e-11;
constexpr int kDegenerateRun = 32;

} // namespace

LpSolution solve_lp(const LinearProgram& lp)
{
    const Index rows = lp.E.rows();
    const Index cols = lp.E.cols();
    require(lp.rhs.size() == rows && lp.cost.size() == cols && static_cast<Index>(lp.initial_basis.size()) == rows,
            ErrorCode::InvalidArgument, "LP shapes disagree");

    // Tableau [B^-1 E | B^-1 rhs]; the initial basis is a signed identity.
    Matrix tab(rows, cols + 1);
    std::vector<Index> basis = lp.initial_basis;
    for (Index r = 0; r < rows; ++r) {
        const double piv = lp.E(r, basis[r]);
        require(std::abs(piv) == 1.0, ErrorCode::InvalidArgument, "initial basis is not a signed identity");
        tab.row(r).head(cols) = lp.E.row(r) / piv;
        tab(r, cols) = lp.rhs(r) / piv;
        require(tab(r, cols) >= 0.0, ErrorCode::InvalidArgument, "initial basis is infeasible");
    }
    Vector reduced = lp.cost;
    for (Index r = 0; r < rows; ++r) reduced -= lp.cost(basis[r]) * tab.row(r).head(cols).transpose();

    const Index cap = 10 * (rows + cols);
    int degenerate = 0;
    LpSolution sol;
    for (;;) {
        const bool bland = degenerate >= kDegenerateRun;
        Index enter = -1;
        double best = -kPriceTol;
        for (Index j = 0; j < cols; ++j) {
            if (reduced(j) < best) {
                enter = j;
                if (bland) break;
                best = reduced(j);
            }
        }
        if (enter < 0) break;
        require(sol.iterations < cap, ErrorCode::LPStall, "simplex iteration cap reached");
        ++sol.iterations;

        Index leave = -1;
        double ratio = 0.0;
        for (Index r = 0; r < rows; ++r) {
            const double a = tab(r, enter);
            if (a <= kPivotTol) continue;
            const double t = tab(r, cols) / a;
            if (leave < 0 || t < ratio || (t == ratio && basis[r] < basis[leave])) {
                leave = r;
                ratio = t;
            }
        }
        require(leave >= 0, ErrorCode::LPUnbounded, "LP is unbounded");
        degenerate = ratio <= 0.0 ? degenerate + 1 : 0;

        tab.row(leave) /= tab(leave, enter);
        for (Index r = 0; r < rows; ++r) {
            if (r == leave) continue;
            const double f = tab(r, enter);
            if (f != 0.0) tab.row(r) -= f * tab.row(leave);
        }
        const double f = reduced(enter);
        reduced -= f * tab.row(leave).head(cols).transpose();
        reduced(enter) = 0.0;
        basis[leave] = enter;
    }
    sol.x = Vector::Zero(cols);
    for (Index r = 0; r < rows; ++r) sol.x(basis[r]) = std::max(0.0, tab(r, cols));
    sol.objective = lp.cost.dot(sol.x);
    return sol;
}

FlatNormCertificate flat_norm(const Chain& X, const ComplexPtr& host)
{
    const Chain x = X.complex == host ? X : transfer_chain(X, host);
    const int n = x.dim;
    FlatNormCertificate cert;
    cert.host = host;
    if (host->top_dim() < n + 1) {
        cert.U = x;
        cert.V = zero_chain(host, n + 1);
        cert.value = mass(x);
        return cert;
    }
    const Index faces = host->num_simplices(n);
    const Index cells = host->num_simplices(n + 1);
    const IncidenceMatrix& d = host->incidence(n + 1);

    // Columns: r+ (faces), r- (faces), v+ (cells), v- (cells).
    LinearProgram lp;
    lp.E = Matrix::Zero(faces, 2 * faces + 2 * cells);
    lp.rhs = x.multiplicities;
    lp.cost.resize(2 * faces + 2 * cells);
    for (Index e = 0; e < faces; ++e) {
        lp.E(e, e) = 1.0;
        lp.E(e, faces + e) = -1.0;
        lp.cost(e) = lp.cost(faces + e) = host->volume(n, e);
        lp.initial_basis.push_back(x.multiplicities(e) >= 0.0 ? e : faces + e);
    }
    for (Index t = 0; t < cells; ++t) {
        for (IncidenceMatrix::InnerIterator it(d, t); it; ++it) {
            lp.E(it.row(), 2 * faces + t) = it.value();
            lp.E(it.row(), 2 * faces + cells + t) = -it.value();
        }
        lp.cost(2 * faces + t) = lp.cost(2 * faces + cells + t) = host->volume(n + 1, t);
    }
    const LpSolution sol = solve_lp(lp);

    cert.V = zero_chain(host, n + 1);
    cert.V.multiplicities = sol.x.segment(2 * faces, cells) - sol.x.segment(2 * faces + cells, cells);
    cert.U = x - boundary(cert.V);
    cert.value = mass(cert.U) + mass(cert.V);
    return cert;
}

FlatNormCertificate flat_distance(const Chain& S, const Chain& T, const ComplexPtr& host)
{
    require(S.dim == T.dim, ErrorCode::DimensionMismatch, "chains of different dimension");
    const Chain s = S.complex == host ? S : transfer_chain(S, host);
    const Chain t = T.complex == host ? T : transfer_chain(T, host);
    return flat_norm(s - t, host);
}

bool verify_certificate(const FlatNormCertificate& cert, const Chain& X)
{
    if (!cert.host || cert.U.complex != cert.host || cert.V.complex != cert.host) return false;
    if (cert.V.dim != cert.U.dim + 1 || X.dim != cert.U.dim) return false;
    const Chain x = X.complex == cert.host ? X : transfer_chain(X, cert.host);
    if (x.size() != cert.U.size()) return false;
    const Vector filled = cert.U.multiplicities + boundary(cert.V).multiplicities;
    const double residual = x.size() == 0 ? 0.0 : (x.multiplicities - filled).cwiseAbs().maxCoeff();
    const double recomputed = mass(cert.U) + mass(cert.V);
    return residual <= 1e-9 && std::abs(recomputed - cert.value) <= 1e-9 * std::max(1.0, std::abs(cert.value));
}

} // namespace currents
