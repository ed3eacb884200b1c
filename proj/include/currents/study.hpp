#pragma once

#include <currents/io.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace currents {

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v);

struct StudyRow {
    std::string scenario;
    double param = 0.0;
    std::string quantity;
    double value = 0.0;
};

///
/// Rows ordered by grid index, then quantity. A verdict is `pass` when the
/// named property holds on the grid.
///
struct StudyReport {
    std::string family;
    std::vector<double> grid;
    int k = 0;
    int resolution = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> quantities;
    std::vector<StudyRow> rows;
    std::vector<std::pair<std::string, Verdict>> verdicts;
    std::map<std::string, double> limit;       // values at the limit object
    std::map<std::string, double> derived;     // extrapolations and proxies
    std::map<std::string, double> tolerances;
};

/// "holds" iff proxy <= limit * (1 + 5%) + 1e-6.
bool semicontinuity_holds(double proxy, double limit);

///
/// Families: example1 (grid = eps), dumbbell (grid = eps), swiss_cheese
/// (grid = level), refinement (grid = spline cells on the unit circle).
/// Grid points run on up to `threads` threads; a failing point yields NaN
/// rows and inconclusive verdicts. Throws ConfigError for unknown families.
///
StudyReport run_study(const StudySpec& spec, std::uint64_t seed, int threads = 1);

/// Header `scenario,param,quantity,value`.
std::string study_csv(const StudyReport& report);
Json study_json(const StudyReport& report);

/// Runs `jobs` on up to `threads` threads; results stay in job order.
void parallel_for(Index jobs, int threads, const std::function<void(Index)>& body);

} // namespace currents
