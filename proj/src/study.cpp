#include <currents/study.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

namespace currents {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSemicontinuitySlack = 0.05;

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Family {
    std::string scenario;
    std::vector<std::string> quantities;
    int default_k = 1;
    int default_resolution = 0;
    std::function<std::vector<double>(double param, int k, int resolution)> point;
};

double lambda_at(const SpectralResult& r, int k)
{
    return r.values.at(static_cast<size_t>(k - 1));
}

// Largest distance from a hole-loop vertex to the boundary of the unit square.
double hole_boundary_distance(const Chain& chain)
{
    const Chain b = boundary(chain);
    const auto& cx = *chain.complex;
    double best = 0.0;
    for (Index e : set_of(b).indices) {
        const auto ids = cx.simplex(1, e);
        for (Index k = 0; k < 2; ++k) {
            const auto p = cx.vertex(ids(k));
            const double d = std::min({p(0), 1.0 - p(0), p(1), 1.0 - p(1)});
            if (d > 1e-12) best = std::max(best, d);
        }
    }
    return best;
}

Family family_of(const std::string& name)
{
    using std::numbers::pi;
    if (name == "example1") {
        return {"example1",
                {"mass", "mass_gap", "length", "lambda_intrinsic", "lambda_analytic", "lambda_ambient"},
                2, 64,
                [](double eps, int k, int res) {
                    const Chain c = gen_example1_curve(eps, res);
                    const double limit_mass = mass(gen_two_circles(4 * res));
                    const double len = example1_length(eps);
                    const double analytic = analytic_spectrum(circle_model(len), k).back();
                    return std::vector<double>{
                        mass(c), mass(c) - limit_mass, len,
                        lambda_at(intrinsic_curve_spectrum(c, BoundaryCondition::Closed, k), k),
                        analytic,
                        lambda_at(ambient_lambda(c, default_spline_basis(c), k), k)};
                }};
    }
    if (name == "dumbbell") {
        return {"dumbbell", {"mass", "tube_radius", "lambda_intrinsic"}, 3, 32,
                [](double eps, int k, int res) {
                    const Chain c = gen_dumbbell(eps, res, 4 * res);
                    return std::vector<double>{
                        mass(c), std::sin(example1_gap_angle(eps)),
                        lambda_at(intrinsic_surface_spectrum(c, BoundaryCondition::Closed, k), k)};
                }};
    }
    if (name == "swiss_cheese") {
        return {"swiss_cheese",
                {"mass", "R0", "lambda_dirichlet", "lower_bound", "boundary_distance", "witness_bound"},
                1, 32,
                [](double level_value, int k, int res) {
                    const int level = static_cast<int>(std::lround(level_value));
                    const double r0 = swiss_cheese_radius(level);
                    const Chain c = gen_swiss_cheese(level, r0, res);
                    return std::vector<double>{
                        mass(c), r0,
                        lambda_at(intrinsic_surface_spectrum(c, BoundaryCondition::Dirichlet, k), k),
                        std::ldexp(1.0, 3 * level) * r0,
                        hole_boundary_distance(c),
                        std::ldexp(1.0, -level - 1) - r0};
                }};
    }
    if (name == "refinement") {
        return {"refinement", {"atoms", "lambda_ambient", "lambda_intrinsic", "lambda_exact"}, 2, 256,
                [](double cells_value, int k, int res) {
                    const Chain c = gen_circle(Point::Zero(2), 1.0, res);
                    const AmbientBasis basis = default_spline_basis(c, static_cast<int>(std::lround(cells_value)));
                    return std::vector<double>{
                        static_cast<double>(basis.size()),
                        lambda_at(ambient_lambda(c, basis, k), k),
                        lambda_at(intrinsic_curve_spectrum(c, BoundaryCondition::Closed, k), k),
                        analytic_spectrum(circle_model(mass(c)), k).back()};
                }};
    }
    throw ConfigError("/study/family", "unknown family '" + name + "'");
}

// Column of one quantity across the grid.
std::vector<double> column(const StudyReport& r, const std::string& quantity)
{
    std::vector<double> out;
    for (const auto& row : r.rows) {
        if (row.quantity == quantity) out.push_back(row.value);
    }
    return out;
}

bool any_nan(const std::vector<double>& v)
{
    return std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); });
}

Verdict verdict_of(bool ok, bool known)
{
    if (!known) return Verdict::Inconclusive;
    return ok ? Verdict::Pass : Verdict::Fail;
}

// Indices of the grid sorted so the approach to the limit comes last.
std::vector<size_t> toward_limit(const std::vector<double>& grid, bool limit_is_small)
{
    std::vector<size_t> order(grid.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return limit_is_small ? grid[a] > grid[b] : grid[a] < grid[b];
    });
    return order;
}

double limsup_proxy(const std::vector<double>& values, const std::vector<size_t>& order)
{
    if (order.size() < 2) return values[order.back()];
    return std::max(values[order[order.size() - 1]], values[order[order.size() - 2]]);
}

void judge(StudyReport& r)
{
    r.tolerances["semicontinuity_relative"] = kSemicontinuitySlack;
    r.tolerances["semicontinuity_absolute"] = 1e-6;
    const auto& grid = r.grid;
    if (r.family == "example1") {
        const auto order = toward_limit(grid, true);
        const auto gap = column(r, "mass_gap");
        const auto lam = column(r, "lambda_intrinsic");
        const double limit_lambda = analytic_spectrum(two_circles_model(2.0 * std::numbers::pi, 2.0 * std::numbers::pi), r.k).back();
        r.limit["lambda_analytic"] = limit_lambda;
        r.limit["lambda_intrinsic"] = lambda_at(intrinsic_curve_spectrum(gen_two_circles(4 * r.resolution), BoundaryCondition::Closed, r.k), r.k);
        r.limit["mass"] = mass(gen_two_circles(4 * r.resolution));
        bool known = !any_nan(gap) && !any_nan(lam) && grid.size() >= 2;
        double gap0 = kNaN, proxy = kNaN;
        if (known) {
            // The gap is affine in eps to first order; extrapolate from the two smallest.
            const size_t a = order[order.size() - 2], b = order.back();
            gap0 = (grid[a] * gap[b] - grid[b] * gap[a]) / (grid[a] - grid[b]);
            proxy = limsup_proxy(lam, order);
        }
        r.derived["mass_gap_extrapolated"] = gap0;
        r.derived["lambda_limsup_proxy"] = proxy;
        r.verdicts.emplace_back("mass_convergence", verdict_of(std::abs(gap0) <= kSemicontinuitySlack * r.limit["mass"] + 1e-6, known));
        r.verdicts.emplace_back("upper_semicontinuity", verdict_of(semicontinuity_holds(proxy, limit_lambda), known));
    } else if (r.family == "dumbbell") {
        const auto order = toward_limit(grid, true);
        const auto lam = column(r, "lambda_intrinsic");
        const double limit_lambda = lambda_at(intrinsic_surface_spectrum(gen_two_spheres(4), BoundaryCondition::Closed, r.k), r.k);
        r.limit["lambda_intrinsic"] = limit_lambda;
        const bool known = !any_nan(lam);
        const double proxy = known ? limsup_proxy(lam, order) : kNaN;
        r.derived["lambda_limsup_proxy"] = proxy;
        bool decreasing = true;
        for (size_t i = 1; i < order.size(); ++i) decreasing = decreasing && lam[order[i]] < lam[order[i - 1]];
        const double last = known ? lam[order.back()] : kNaN;
        r.verdicts.emplace_back("upper_semicontinuity", verdict_of(semicontinuity_holds(proxy, limit_lambda), known));
        r.verdicts.emplace_back("continuity", verdict_of(std::abs(last - limit_lambda) <= kSemicontinuitySlack * limit_lambda, known));
        r.verdicts.emplace_back("decreasing_toward_limit", verdict_of(decreasing, known));
    } else if (r.family == "swiss_cheese") {
        const auto order = toward_limit(grid, false);
        const auto lam = column(r, "lambda_dirichlet");
        const auto bound = column(r, "lower_bound");
        const auto dist = column(r, "boundary_distance");
        const auto witness = column(r, "witness_bound");
        const double limit_lambda = lambda_at(intrinsic_surface_spectrum(gen_square(64), BoundaryCondition::Dirichlet, r.k), r.k);
        r.limit["lambda_dirichlet"] = limit_lambda;
        const bool known = !any_nan(lam) && !any_nan(dist);
        bool above = true, increasing = true, witnessed = true;
        for (size_t i = 0; i < grid.size(); ++i) {
            above = above && lam[i] >= bound[i];
            witnessed = witnessed && dist[i] >= witness[i];
        }
        for (size_t i = 1; i < order.size(); ++i) increasing = increasing && lam[order[i]] > lam[order[i - 1]];
        const double proxy = known ? limsup_proxy(lam, order) : kNaN;
        r.derived["lambda_limsup_proxy"] = proxy;
        r.verdicts.emplace_back("poincare_lower_bound", verdict_of(above, known));
        r.verdicts.emplace_back("strictly_increasing", verdict_of(increasing, known));
        r.verdicts.emplace_back("boundary_escapes_neighbourhood", verdict_of(witnessed, known));
        r.verdicts.emplace_back("dirichlet_semicontinuity", verdict_of(semicontinuity_holds(proxy, limit_lambda), known));
    } else if (r.family == "refinement") {
        const auto amb = column(r, "lambda_ambient");
        const auto intr = column(r, "lambda_intrinsic");
        const auto exact = column(r, "lambda_exact");
        const bool known = !any_nan(amb) && !any_nan(intr) && !any_nan(exact);
        bool upper = true, upper_exact = true, monotone = true;
        for (size_t i = 0; i < grid.size(); ++i) upper = upper && amb[i] >= intr[i] - 1e-6;
        // P1 elements overestimate too; the exact polygon spectrum is the guaranteed floor.
        for (size_t i = 0; i < grid.size(); ++i) upper_exact = upper_exact && amb[i] >= exact[i] - 1e-9;
        for (size_t i = 1; i < grid.size(); ++i) monotone = monotone && amb[i] <= amb[i - 1] + 1e-9;
        r.tolerances["upper_bound_slack"] = 1e-6;
        r.tolerances["monotone_slack"] = 1e-9;
        r.tolerances["upper_bound_exact_slack"] = 1e-9;
        r.verdicts.emplace_back("upper_bound", verdict_of(upper, known));
        r.verdicts.emplace_back("upper_bound_exact", verdict_of(upper_exact, known));
        r.verdicts.emplace_back("monotone_refinement", verdict_of(monotone, known));
    }
}

} // namespace

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

bool semicontinuity_holds(double proxy, double limit)
{
    return proxy <= limit * (1.0 + kSemicontinuitySlack) + 1e-6;
}

void parallel_for(Index jobs, int threads, const std::function<void(Index)>& body)
{
    const int workers = static_cast<int>(std::min<Index>(std::max(1, threads), jobs));
    if (workers <= 1) {
        for (Index i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (Index i = next++; i < jobs; i = next++) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

StudyReport run_study(const StudySpec& spec, std::uint64_t seed, int threads)
{
    const Family fam = family_of(spec.family);
    if (spec.grid.empty()) throw ConfigError("/study/grid", "grid must be non-empty");
    StudyReport r;
    r.family = spec.family;
    r.grid = spec.grid;
    r.k = spec.k > 0 ? spec.k : fam.default_k;
    r.resolution = spec.resolution > 0 ? spec.resolution : fam.default_resolution;
    r.seed = seed;
    r.quantities = fam.quantities;

    std::vector<std::vector<double>> values(spec.grid.size());
    parallel_for(static_cast<Index>(spec.grid.size()), threads, [&](Index i) {
        try {
            values[i] = fam.point(spec.grid[i], r.k, r.resolution);
        } catch (const std::exception&) {
            values[i].assign(fam.quantities.size(), kNaN);
        }
    });
    for (size_t i = 0; i < spec.grid.size(); ++i) {
        for (size_t q = 0; q < fam.quantities.size(); ++q) {
            r.rows.push_back({fam.scenario, spec.grid[i], fam.quantities[q], values[i][q]});
        }
    }
    try {
        judge(r);
    } catch (const std::exception&) {
        for (auto& v : r.verdicts) v.second = Verdict::Inconclusive;
    }
    return r;
}

std::string study_csv(const StudyReport& report)
{
    std::string out = "scenario,param,quantity,value\n";
    for (const auto& row : report.rows) {
        out += row.scenario + "," + format_double(row.param) + "," + row.quantity + "," + format_double(row.value) + "\n";
    }
    return out;
}

Json study_json(const StudyReport& report)
{
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back(Json{{"scenario", row.scenario}, {"param", row.param}, {"quantity", row.quantity}, {"value", row.value}});
    }
    Json verdicts = Json::object();
    for (const auto& [name, v] : report.verdicts) verdicts[name] = std::string(to_string(v));
    return Json{
        {"family", report.family},
        {"grid", report.grid},
        {"k", report.k},
        {"resolution", report.resolution},
        {"seed", report.seed},
        {"quantities", report.quantities},
        {"rows", rows},
        {"verdicts", verdicts},
        {"limit", report.limit},
        {"derived", report.derived},
        {"tolerances", report.tolerances},
    };
}

} // namespace currents
