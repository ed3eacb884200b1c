#include "acceptance.hpp"

#include <currents/study.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace currents;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::vector<int> criteria;
    std::string fault;
};

RunConfig load(const Options& o)
{
    RunConfig cfg = o.config.empty() ? RunConfig{} : config_from_json(read_json_file(o.config));
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

Chain load_chain(const std::string& path)
{
    const Json j = read_json_file(path);
    try {
        return chain_from_json(j);
    } catch (const Json::exception& e) {
        throw ConfigError(path, e.what());
    }
}

Chain primary_chain(const RunConfig& cfg)
{
    if (cfg.scenario) return generate_scenario(*cfg.scenario);
    if (!cfg.input.empty()) return load_chain(cfg.input);
    throw ConfigError("/scenario", "either scenario or input is required");
}

// Writes `text` to out/name, or to stdout when no output directory is given.
void emit(const Options& o, const std::string& name, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(o.out);
    write_text_file((std::filesystem::path(o.out) / name).string(), text);
}

int cmd_generate(const Options& o)
{
    const RunConfig cfg = load(o);
    if (!cfg.scenario) throw ConfigError("/scenario", "required");
    emit(o, "chain.json", dump_json(chain_to_json(generate_scenario(*cfg.scenario))));
    return 0;
}

int cmd_spectrum(const Options& o)
{
    const RunConfig cfg = load(o);
    const Chain chain = primary_chain(cfg);
    const BoundaryCondition bc = parse_bc(cfg.bc);
    SpectralResult r;
    if (cfg.method == "ambient") {
        const AmbientBasis basis = cfg.basis ? make_basis(*cfg.basis, chain) : default_spline_basis(chain);
        r = bc == BoundaryCondition::Dirichlet ? ambient_lambda_dirichlet(chain, basis, cfg.k, cfg.epsilon)
                                               : ambient_lambda(chain, basis, cfg.k);
        r.bc = bc;
    } else if (chain.dim == 1) {
        r = intrinsic_curve_spectrum(chain, bc, cfg.k);
    } else if (chain.dim == 2) {
        r = intrinsic_surface_spectrum(chain, bc, cfg.k);
    } else {
        throw CurrentsError(ErrorCode::InvalidArgument, "intrinsic spectra need a curve or surface chain");
    }
    emit(o, "spectrum.json", dump_json(spectrum_to_json(r)));
    return 0;
}

int cmd_flatnorm(const Options& o)
{
    const RunConfig cfg = load(o);
    const Chain X = primary_chain(cfg);
    ComplexPtr host = X.complex;
    if (cfg.host) host = make_host(*cfg.host);
    if (!cfg.host_input.empty()) host = load_chain(cfg.host_input).complex;
    const FlatNormCertificate cert =
        cfg.input_b.empty() ? flat_norm(X, host) : flat_distance(X, load_chain(cfg.input_b), host);
    emit(o, "certificate.json", dump_json(certificate_to_json(cert)));
    return 0;
}

int cmd_study(const Options& o)
{
    const RunConfig cfg = load(o);
    if (!cfg.study) throw ConfigError("/study", "required");
    const StudyReport report = run_study(*cfg.study, cfg.seed, o.threads);
    emit(o, "study.csv", study_csv(report));
    emit(o, "study.json", dump_json(study_json(report)));
    return 0;
}

int cmd_verify(const Options& o)
{
    if (o.fault == "fem-sign") {
        fault::set_fem_sign_bug(true);
    } else if (!o.fault.empty()) {
        throw ConfigError("--inject-fault", "unknown fault '" + o.fault + "'");
    }
    const std::uint64_t seed = o.seed ? *o.seed : (o.config.empty() ? 1 : load(o).seed);
    const auto results = acceptance::run(o.criteria, seed, o.threads);
    const std::string report = acceptance::format_report(results);
    std::cout << report;
    std::cerr << acceptance::format_timings(results);
    if (!o.out.empty()) emit(o, "verify.txt", report);
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& c) { return c.pass(); });
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polyhedral currents: mass, flat norm and eigenvalue functionals"};
    app.require_subcommand(1);
    Options o;
    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Run configuration JSON");
        sub->add_option("--out", o.out, "Output directory (stdout when omitted)");
        sub->add_option("--seed", o.seed, "Seed overriding the configuration");
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    };
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const Command commands[] = {
        {"generate", "Write the chain JSON of a scenario", cmd_generate},
        {"spectrum", "Compute an intrinsic or ambient spectrum", cmd_spectrum},
        {"flatnorm", "Compute a flat norm or flat distance with its certificate", cmd_flatnorm},
        {"study", "Run a parameter study (CSV and JSON)", cmd_study},
        {"verify", "Run the acceptance suite", cmd_verify},
    };
    std::map<CLI::App*, int (*)(const Options&)> dispatch;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        common(sub);
        if (std::string(c.name) == "verify") {
            sub->add_option("--criteria", o.criteria, "Criterion numbers")->delimiter(',')->group("");
            sub->add_option("--inject-fault", o.fault, "Fault to inject")->group("");
        }
        dispatch[sub] = c.run;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }
    try {
        for (const auto& [sub, run] : dispatch) {
            if (sub->parsed()) return run(o);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const CurrentsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
