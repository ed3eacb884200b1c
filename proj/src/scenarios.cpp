#include <currents/scenarios.hpp>
#include <currents/spectral.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace currents {

namespace {

constexpr double pi = std::numbers::pi;

Chain chain_of(int ambient_dim, const std::vector<double>& coords, const std::vector<std::vector<int>>& cells)
{
    const Index nv = static_cast<Index>(coords.size()) / ambient_dim;
    const Matrix v = Eigen::Map<const Matrix>(coords.data(), ambient_dim, nv);
    return chain_from_cells(build_complex(ambient_dim, v, cells));
}

// Node positions in [0,1]: cells grow by `factor` away from the clustered
// ends and are capped at 1.5 times the uniform size.
std::vector<double> graded_nodes(int cells, bool cluster_start, bool cluster_end, double factor)
{
    std::vector<double> distance(cells);
    for (int j = 0; j < cells; ++j) {
        const int from_start = cluster_start ? j : cells;
        const int from_end = cluster_end ? cells - 1 - j : cells;
        distance[j] = std::min(from_start, from_end);
    }
    const double cap = 1.5 / cells;
    auto sizes = [&](double h0) {
        std::vector<double> h(cells);
        for (int j = 0; j < cells; ++j) h[j] = std::min(h0 * std::pow(factor, distance[j]), cap);
        return h;
    };
    auto total = [&](double h0) {
        double s = 0.0;
        for (double x : sizes(h0)) s += x;
        return s;
    };
    double lo = 0.0, hi = 1.0 / cells;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) < 1.0 ? lo : hi) = mid;
    }
    const std::vector<double> h = sizes(hi);
    const double s = total(hi);
    std::vector<double> nodes{0.0};
    double acc = 0.0;
    for (int j = 0; j + 1 < cells; ++j) {
        acc += h[j] / s;
        nodes.push_back(acc);
    }
    nodes.push_back(1.0);
    return nodes;
}

// Omega_L tile in local coordinates: rays j = 0..m, radial nodes i = 0..nr.
// Boundary nodes use formulas that are exact under the mirror images used
// by the Swiss-cheese assembly.
struct Tile {
    int m = 0;
    int nr = 0;
    std::vector<Eigen::Vector2d> nodes; // index j * (nr + 1) + i

    int id(int j, int i) const { return j * (nr + 1) + i; }
};

Tile make_tile(double L, double R0, int m, int nr)
{
    Tile t;
    t.m = m;
    t.nr = nr;
    for (int j = 0; j <= m; ++j) {
        const double phi = 0.5 * pi * j / m;
        const double phi_dual = 0.5 * pi * (m - j) / m;
        Eigen::Vector2d dir(std::cos(phi), std::sin(phi));
        if (j == 0) dir = {1.0, 0.0};
        if (j == m) dir = {0.0, 1.0};
        Eigen::Vector2d outer;
        if (2 * j < m) outer = {L, L * std::tan(phi)};
        else if (2 * j > m) outer = {L * std::tan(phi_dual), L};
        else outer = {L, L};
        const double rho = outer.norm();
        for (int i = 0; i <= nr; ++i) {
            if (i == nr) {
                t.nodes.push_back(outer);
                continue;
            }
            const double r = R0 * std::pow(rho / R0, static_cast<double>(i) / nr);
            if (j == 0) t.nodes.push_back({r, 0.0});
            else if (j == m) t.nodes.push_back({0.0, r});
            else t.nodes.push_back(r * dir);
        }
    }
    return t;
}

int tile_radial_count(int m, double L, double R0)
{
    return std::max(2, static_cast<int>(std::ceil(m * std::log(L / R0) * 2.0 / pi)));
}

// Counterclockwise triangles of a tile in local coordinates.
std::vector<std::array<int, 3>> tile_triangles(const Tile& t)
{
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < t.m; ++j) {
        for (int i = 0; i < t.nr; ++i) {
            const int p00 = t.id(j, i), p10 = t.id(j + 1, i), p01 = t.id(j, i + 1), p11 = t.id(j + 1, i + 1);
            tris.push_back({p00, p01, p11});
            tris.push_back({p00, p11, p10});
        }
    }
    return tris;
}

int even_quarter_steps(int segments_per_circle)
{
    const int m = (segments_per_circle + 3) / 4;
    return m + (m % 2);
}

} // namespace

double example1_gap_angle(double eps)
{
    return 2.0 * pi * eps / (1.0 + 2.0 * eps);
}

double example1_length(double eps)
{
    return 4.0 * pi / (1.0 + 2.0 * eps) + 2.0 * (6.0 - 2.0 * std::cos(example1_gap_angle(eps)));
}

Point example1_point(double eps, double t)
{
    const double w = 2.0 * pi / (1.0 + 2.0 * eps);
    const double a = example1_gap_angle(eps);
    const double far = w * (1.0 + eps); // 2 pi - a
    Point p(2);
    if (t <= 1.0) {
        p << std::cos(w * (t + eps)) - 3.0, std::sin(w * (t + eps));
    } else if (t <= 2.0) {
        p << (2.0 - t) * (std::cos(far) - 3.0) + (t - 1.0) * (3.0 - std::cos(a)), -std::sin(a);
    } else if (t <= 3.0) {
        p << 3.0 - std::cos(w * (t - 2.0 + eps)), -std::sin(w * (t - 2.0 + eps));
    } else {
        p << (4.0 - t) * (3.0 - std::cos(far)) + (t - 3.0) * (std::cos(a) - 3.0), std::sin(a);
    }
    return p;
}

Chain gen_circle(const Point& center, double radius, int segments, int orientation)
{
    require(segments >= 3, ErrorCode::TooFewSegments, "a circle needs at least 3 segments");
    require(radius > 0.0, ErrorCode::BadRadius, "radius must be positive");
    require(center.size() >= 2, ErrorCode::DimensionMismatch, "circle centre needs two coordinates");
    const int n = static_cast<int>(center.size());
    std::vector<double> coords;
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < segments; ++i) {
        const double phi = 2.0 * pi * i / segments;
        Point p = center;
        p(0) += radius * std::cos(phi);
        p(1) += radius * std::sin(phi);
        coords.insert(coords.end(), p.data(), p.data() + n);
        edges.push_back({i, (i + 1) % segments});
    }
    Chain c = chain_of(n, coords, edges);
    return orientation < 0 ? -c : c;
}

Chain gen_example1_curve(double eps, int segments_per_piece)
{
    require(eps > 0.0 && eps < 0.25, ErrorCode::EpsOutOfRange, "eps must lie in (0, 0.25)");
    require(segments_per_piece >= 16, ErrorCode::TooFewSegments, "at least 16 segments per piece");
    const int total = 4 * segments_per_piece;
    std::vector<double> coords;
    std::vector<std::vector<int>> edges;
    for (int j = 0; j < total; ++j) {
        const Point p = example1_point(eps, static_cast<double>(j) / segments_per_piece);
        coords.insert(coords.end(), p.data(), p.data() + 2);
        edges.push_back({j, (j + 1) % total});
    }
    return chain_of(2, coords, edges);
}

Chain gen_two_circles(int segments)
{
    return chain_union(gen_circle(Point{{-3.0, 0.0}}, 1.0, segments), gen_circle(Point{{3.0, 0.0}}, 1.0, segments));
}

Eigen::Vector2d dumbbell_profile(double eps, double t)
{
    const Point p = example1_point(eps, t);
    return {p(0), std::abs(p(1))};
}

Chain gen_dumbbell(double eps, int azimuthal, int axial)
{
    require(eps > 0.0 && eps <= 0.1, ErrorCode::EpsOutOfRange, "eps must lie in (0, 0.1]");
    require(azimuthal >= 16 && axial >= 64, ErrorCode::TooFewSegments, "dumbbell needs azimuthal >= 16, axial >= 64");
    const double a = example1_gap_angle(eps);
    const double arc = pi - a;
    const double tube = 6.0 - 2.0 * std::cos(a);
    const int arc_cells = std::max(4, static_cast<int>(std::lround(axial * arc / (2.0 * arc + tube))));
    const int tube_cells = axial - 2 * arc_cells;
    require(tube_cells >= 4, ErrorCode::TooFewSegments, "axial resolution too low for the tube");

    // Profile parameters, pole to pole.
    std::vector<double> ts;
    for (double u : graded_nodes(arc_cells, false, true, 1.2)) ts.push_back(0.5 + 0.5 * u);
    const auto tube_nodes = graded_nodes(tube_cells, true, true, 1.2);
    for (size_t j = 1; j < tube_nodes.size(); ++j) ts.push_back(1.0 + tube_nodes[j]);
    const auto right = graded_nodes(arc_cells, true, false, 1.2);
    for (size_t j = 1; j < right.size(); ++j) ts.push_back(2.0 + 0.5 * right[j]);

    std::vector<double> coords;
    const auto push = [&](double x, double y, double z) {
        coords.insert(coords.end(), {x, y, z});
        return static_cast<int>(coords.size() / 3) - 1;
    };
    const int left_pole = push(-4.0, 0.0, 0.0);
    std::vector<std::vector<int>> rings;
    for (size_t s = 1; s + 1 < ts.size(); ++s) {
        const Eigen::Vector2d xr = dumbbell_profile(eps, ts[s]);
        std::vector<int> ring;
        for (int j = 0; j < azimuthal; ++j) {
            const double phi = 2.0 * pi * j / azimuthal;
            ring.push_back(push(xr(0), xr(1) * std::cos(phi), xr(1) * std::sin(phi)));
        }
        rings.push_back(std::move(ring));
    }
    const int right_pole = push(4.0, 0.0, 0.0);

    // (a_j, a_{j+1}, b_j) has normal d_phi x d_s, which points outward.
    std::vector<std::vector<int>> tris;
    for (int j = 0; j < azimuthal; ++j) {
        const int jn = (j + 1) % azimuthal;
        tris.push_back({left_pole, rings.front()[jn], rings.front()[j]});
        for (size_t r = 0; r + 1 < rings.size(); ++r) {
            const auto& A = rings[r];
            const auto& B = rings[r + 1];
            tris.push_back({A[j], A[jn], B[j]});
            tris.push_back({A[jn], B[jn], B[j]});
        }
        tris.push_back({rings.back()[j], rings.back()[jn], right_pole});
    }
    return chain_of(3, coords, tris);
}

Chain gen_sphere(const Point& center, double radius, int subdivisions)
{
    require(subdivisions >= 0 && subdivisions <= 6, ErrorCode::InvalidArgument, "subdivisions must lie in [0, 6]");
    require(radius > 0.0, ErrorCode::BadRadius, "radius must be positive");
    require(center.size() == 3, ErrorCode::DimensionMismatch, "sphere centre needs three coordinates");
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> v = {
        {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
        {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
    for (auto& p : v) p.normalize();
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
        {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> mid;
        const auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            const auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            const int id = static_cast<int>(v.size()) - 1;
            mid.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        for (const auto& t : f) {
            const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    std::vector<double> coords;
    for (const auto& p : v) {
        const Eigen::Vector3d q = center + radius * p;
        coords.insert(coords.end(), q.data(), q.data() + 3);
    }
    std::vector<std::vector<int>> tris;
    for (const auto& t : f) {
        const Eigen::Vector3d n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
        if (n.dot(v[t[0]] + v[t[1]] + v[t[2]]) >= 0.0) tris.push_back({t[0], t[1], t[2]});
        else tris.push_back({t[0], t[2], t[1]});
    }
    return chain_of(3, coords, tris);
}

Chain gen_two_spheres(int subdivisions)
{
    return chain_union(gen_sphere(Point{{-3.0, 0.0, 0.0}}, 1.0, subdivisions),
                       gen_sphere(Point{{3.0, 0.0, 0.0}}, 1.0, subdivisions));
}

TaggedChain gen_omega_L(double L, double R0, int resolution)
{
    require(R0 > 0.0 && R0 < L, ErrorCode::BadRadius, "need 0 < R0 < L");
    require(resolution >= 2, ErrorCode::TooFewSegments, "resolution must be at least 2");
    const int m = resolution + (resolution % 2);
    const Tile tile = make_tile(L, R0, m, tile_radial_count(m, L, R0));
    std::vector<double> coords;
    for (const auto& p : tile.nodes) coords.insert(coords.end(), {p(0), p(1)});
    std::vector<std::vector<int>> tris;
    for (const auto& t : tile_triangles(tile)) tris.push_back({t[0], t[1], t[2]});
    TaggedChain out{chain_of(2, coords, tris), {}};
    for (int j = 0; j <= m; ++j) out.tagged_vertices.push_back(tile.id(j, 0));
    return out;
}

double swiss_cheese_radius(int level)
{
    return std::pow(2.0, -2.5 * level);
}

Chain gen_swiss_cheese(int level, double R0, int hole_segments)
{
    require(level >= 1 && level <= 3, ErrorCode::InvalidArgument, "level must lie in [1, 3]");
    require(hole_segments >= 16, ErrorCode::TooFewSegments, "at least 16 hole segments");
    const double L = std::ldexp(1.0, -level - 1);
    require(R0 > 0.0, ErrorCode::BadRadius, "R0 must be positive");
    require(R0 < L, ErrorCode::HolesOverlap, "holes of radius R0 overlap at this level");
    const int m = even_quarter_steps(hole_segments);
    const Tile tile = make_tile(L, R0, m, tile_radial_count(m, L, R0));
    const auto local_tris = tile_triangles(tile);
    const int tiles = 1 << (level + 1);

    std::map<std::pair<double, double>, int> ids;
    std::vector<double> coords;
    std::vector<std::vector<int>> tris;
    for (int a = 0; a < tiles; ++a) {
        for (int b = 0; b < tiles; ++b) {
            const bool flip_x = a % 2 == 1, flip_y = b % 2 == 1;
            std::vector<int> global(tile.nodes.size());
            for (size_t k = 0; k < tile.nodes.size(); ++k) {
                const auto& p = tile.nodes[k];
                const double x = flip_x ? (a + 1) * L - p(0) : a * L + p(0);
                const double y = flip_y ? (b + 1) * L - p(1) : b * L + p(1);
                const auto [it, fresh] = ids.emplace(std::make_pair(x, y), static_cast<int>(coords.size() / 2));
                if (fresh) coords.insert(coords.end(), {x, y});
                global[k] = it->second;
            }
            const bool reversed = flip_x != flip_y;
            for (const auto& t : local_tris) {
                if (reversed) tris.push_back({global[t[0]], global[t[2]], global[t[1]]});
                else tris.push_back({global[t[0]], global[t[1]], global[t[2]]});
            }
        }
    }
    return chain_of(2, coords, tris);
}

Chain gen_square(int resolution)
{
    require(resolution >= 2, ErrorCode::TooFewSegments, "resolution must be at least 2");
    const int n = resolution;
    std::vector<double> coords;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) coords.insert(coords.end(), {static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
    std::vector<std::vector<int>> tris;
    const auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return chain_of(2, coords, tris);
}

ComplexPtr gen_strip(double length, double height, int resolution)
{
    require(resolution >= 2, ErrorCode::TooFewSegments, "resolution must be at least 2");
    require(length > 0.0 && height > 0.0, ErrorCode::InvalidArgument, "strip sides must be positive");
    const int nx = resolution;
    const int ny = std::max(1, static_cast<int>(std::lround(resolution * height / length)));
    std::vector<double> coords;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) coords.insert(coords.end(), {length * i / nx, height * j / ny});
    }
    std::vector<std::vector<int>> tris;
    const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    const Index nv = static_cast<Index>(coords.size()) / 2;
    return build_complex(2, Eigen::Map<const Matrix>(coords.data(), 2, nv), tris);
}

ComplexPtr gen_annulus(double r_inner, double r_outer, int segments, int rings)
{
    require(segments >= 3, ErrorCode::TooFewSegments, "an annulus needs at least 3 segments");
    require(rings >= 1, ErrorCode::InvalidArgument, "at least one ring of cells");
    require(r_inner > 0.0 && r_outer > r_inner, ErrorCode::BadRadius, "need 0 < r_inner < r_outer");
    std::vector<double> coords;
    for (int k = 0; k <= rings; ++k) {
        const double r = r_inner + (r_outer - r_inner) * k / rings;
        for (int j = 0; j < segments; ++j) {
            const double phi = 2.0 * pi * j / segments;
            coords.insert(coords.end(), {r * std::cos(phi), r * std::sin(phi)});
        }
    }
    std::vector<std::vector<int>> tris;
    const auto id = [segments](int j, int k) { return k * segments + (j % segments); };
    for (int k = 0; k < rings; ++k) {
        for (int j = 0; j < segments; ++j) {
            tris.push_back({id(j, k), id(j + 1, k), id(j + 1, k + 1)});
            tris.push_back({id(j, k), id(j + 1, k + 1), id(j, k + 1)});
        }
    }
    const Index nv = static_cast<Index>(coords.size()) / 2;
    return build_complex(2, Eigen::Map<const Matrix>(coords.data(), 2, nv), tris);
}

Chain chain_on_path(const ComplexPtr& host, const std::vector<int>& path, double multiplicity)
{
    Chain c = zero_chain(host, 1);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        const std::array<int, 2> e{path[i], path[i + 1]};
        const auto cell = host->find(e);
        require(cell.has_value(), ErrorCode::InvalidArgument, "path step is not an edge of the host");
        c.multiplicities(cell->index) += cell->sign * multiplicity;
    }
    c.integer = is_integral(c);
    return c;
}

PoincareReport poincare_check(const TaggedChain& omega, double L, double R0)
{
    require(!omega.tagged_vertices.empty(), ErrorCode::InvalidArgument, "omega has no tagged arc");
    const double mu = intrinsic_surface_spectrum_mixed(omega.chain, omega.tagged_vertices, 1).values.front();
    PoincareReport r;
    r.ratio = 1.0 / mu;
    r.bound = 2.0 * std::sqrt(2.0) * L * L * L / (3.0 * R0);
    r.holds = r.ratio > 0.0 && r.ratio <= 1.05 * r.bound;
    return r;
}

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = {
        "circle", "two_circles", "example1", "dumbbell", "sphere", "two_spheres",
        "swiss_cheese", "square", "omega_L", "strip"};
    return names;
}

int minimum_resolution(const std::string& name)
{
    if (name == "circle" || name == "two_circles") return 3;
    if (name == "example1" || name == "dumbbell" || name == "swiss_cheese") return 16;
    if (name == "sphere" || name == "two_spheres") return 0;
    return 2;
}

Chain generate_scenario(const ScenarioSpec& spec)
{
    const auto& names = scenario_names();
    require(std::find(names.begin(), names.end(), spec.name) != names.end(), ErrorCode::InvalidArgument,
            "unknown scenario '" + spec.name + "'");
    require(spec.resolution >= minimum_resolution(spec.name), ErrorCode::InvalidArgument,
            "resolution below the minimum for '" + spec.name + "'");
    const auto param = [&](const std::string& key, double fallback) {
        const auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    const int res = spec.resolution;
    if (spec.name == "circle") {
        return gen_circle(Point{{param("cx", 0.0), param("cy", 0.0)}}, param("radius", 1.0), res,
                          param("orientation", 1.0) < 0.0 ? -1 : 1);
    }
    if (spec.name == "two_circles") return gen_two_circles(res);
    if (spec.name == "example1") return gen_example1_curve(param("eps", 0.05), res);
    if (spec.name == "dumbbell") {
        return gen_dumbbell(param("eps", 0.05), res, static_cast<int>(param("axial", 4.0 * res)));
    }
    if (spec.name == "sphere") {
        return gen_sphere(Point{{param("cx", 0.0), param("cy", 0.0), param("cz", 0.0)}}, param("radius", 1.0), res);
    }
    if (spec.name == "two_spheres") return gen_two_spheres(res);
    if (spec.name == "swiss_cheese") {
        const int level = static_cast<int>(param("level", 1.0));
        return gen_swiss_cheese(level, param("R0", swiss_cheese_radius(level)), res);
    }
    if (spec.name == "square") return gen_square(res);
    if (spec.name == "omega_L") return gen_omega_L(param("L", 1.0), param("R0", 0.25), res).chain;
    return chain_from_cells(gen_strip(param("length", 1.0), param("height", 0.1), res));
}

} // namespace currents
