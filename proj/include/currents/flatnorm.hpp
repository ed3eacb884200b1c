#pragma once

#include <currents/chains.hpp>

namespace currents {

/// X = U + dV with value = mass(U) + mass(V).
struct FlatNormCertificate {
    double value = 0.0;
    Chain U;
    Chain V;
    ComplexPtr host;
};

/// Standard-form LP: minimize c^T x subject to E x = rhs, x >= 0.
struct LinearProgram {
    Matrix E;
    Vector rhs;
    Vector cost;
    std::vector<Index> initial_basis; // one column per row, feasible, E restricted is a signed identity
};

struct LpSolution {
    Vector x;
    double objective = 0.0;
    Index iterations = 0;
};

///
/// Dense-tableau primal simplex: Dantzig pricing, Bland's rule after a run of
/// degenerate pivots, cap of 10 (rows + cols) iterations.
/// Throws LPUnbounded, LPStall.
///
LpSolution solve_lp(const LinearProgram& lp);

///
/// Real simplicial flat norm of an n-chain over the (n+1)-simplices of
/// `host`: min sum vol |X - dv| + sum vol |v|. The chain is moved onto `host`
/// by vertex matching when it lives elsewhere.
///
FlatNormCertificate flat_norm(const Chain& X, const ComplexPtr& host);

FlatNormCertificate flat_distance(const Chain& S, const Chain& T, const ComplexPtr& host);

/// Recomputes U + dV and mass(U) + mass(V) against X and the stored value.
bool verify_certificate(const FlatNormCertificate& cert, const Chain& X);

} // namespace currents
