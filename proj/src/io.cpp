#include <currents/io.hpp>

#include <fstream>
#include <sstream>

namespace currents {

namespace {

const Json& field(const Json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "/" + key, "missing field");
    return *it;
}

double as_number(const Json& j, const std::string& path)
{
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

int as_int(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

std::string as_string(const Json& j, const std::string& path)
{
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

Vector as_vector(const Json& j, const std::string& path)
{
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    Vector v(static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = as_number(j[i], path + "/" + std::to_string(i));
    return v;
}

Matrix as_columns(const Json& j, const std::string& path)
{
    if (!j.is_array()) throw ConfigError(path, "expected an array of points");
    if (j.empty()) return Matrix(0, 0);
    const Vector first = as_vector(j[0], path + "/0");
    Matrix m(first.size(), static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        const Vector v = as_vector(j[i], p);
        if (v.size() != first.size()) throw ConfigError(p, "point dimension differs from the first point");
        m.col(static_cast<Index>(i)) = v;
    }
    return m;
}

Json to_array(const Eigen::Ref<const Vector>& v)
{
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json columns_to_json(const Matrix& m)
{
    Json a = Json::array();
    for (Index c = 0; c < m.cols(); ++c) a.push_back(to_array(m.col(c)));
    return a;
}

ScenarioSpec scenario_from_json(const Json& j, const std::string& path)
{
    ScenarioSpec s;
    s.name = as_string(field(j, "name", path), path + "/name");
    if (j.contains("params")) {
        const Json& p = j["params"];
        if (!p.is_object()) throw ConfigError(path + "/params", "expected an object");
        for (const auto& [key, value] : p.items()) s.params[key] = as_number(value, path + "/params/" + key);
    }
    s.resolution = as_int(field(j, "resolution", path), path + "/resolution");
    return s;
}

Json scenario_to_json(const ScenarioSpec& s)
{
    Json params = Json::object();
    for (const auto& [key, value] : s.params) params[key] = value;
    return Json{{"name", s.name}, {"params", params}, {"resolution", s.resolution}};
}

BasisSpec basis_from_json(const Json& j, const std::string& path)
{
    BasisSpec b;
    b.kind = as_string(field(j, "kind", path), path + "/kind");
    if (b.kind == "spline") {
        if (j.contains("box")) {
            const Json& box = j["box"];
            const std::string bp = path + "/box";
            Box bx{as_vector(field(box, "lo", bp), bp + "/lo"), as_vector(field(box, "hi", bp), bp + "/hi")};
            if (bx.lo.size() != bx.hi.size()) throw ConfigError(bp, "lo and hi differ in length");
            b.box = bx;
        }
        const Json& cells = field(j, "cells", path);
        if (!cells.is_array() || cells.empty()) throw ConfigError(path + "/cells", "expected a non-empty integer array");
        for (size_t i = 0; i < cells.size(); ++i) b.cells.push_back(as_int(cells[i], path + "/cells/" + std::to_string(i)));
        if (j.contains("degree")) b.degree = as_int(j["degree"], path + "/degree");
        if (b.degree != 3) throw ConfigError(path + "/degree", "only degree 3 is supported");
    } else if (b.kind == "rbf") {
        b.centers = as_columns(field(j, "centers", path), path + "/centers");
        b.width = as_number(field(j, "width", path), path + "/width");
    } else {
        throw ConfigError(path + "/kind", "expected \"spline\" or \"rbf\"");
    }
    return b;
}

Json basis_to_json(const BasisSpec& b)
{
    Json j{{"kind", b.kind}};
    if (b.kind == "spline") {
        if (b.box) j["box"] = Json{{"lo", to_array(b.box->lo)}, {"hi", to_array(b.box->hi)}};
        j["cells"] = b.cells;
        j["degree"] = b.degree;
    } else {
        j["centers"] = columns_to_json(b.centers);
        j["width"] = b.width;
    }
    return j;
}

} // namespace

Json chain_to_json(const Chain& chain)
{
    const auto& cx = *chain.complex;
    Json simplices = Json::array();
    const Index count = cx.num_simplices(chain.dim);
    for (Index i = 0; i < count; ++i) {
        const auto s = cx.simplex(chain.dim, i);
        Json ids = Json::array();
        for (Index k = 0; k < s.size(); ++k) ids.push_back(s(k));
        simplices.push_back(ids);
    }
    return Json{
        {"ambient_dim", cx.ambient_dim()},
        {"dim", chain.dim},
        {"vertices", columns_to_json(cx.vertices())},
        {"simplices", simplices},
        {"multiplicities", to_array(chain.multiplicities)},
        {"mass", mass(chain)},
    };
}

Chain chain_from_json(const Json& j)
{
    const int n = as_int(field(j, "ambient_dim", ""), "/ambient_dim");
    const int dim = as_int(field(j, "dim", ""), "/dim");
    const Matrix vertices = as_columns(field(j, "vertices", ""), "/vertices");
    if (vertices.size() > 0 && vertices.rows() != n) throw ConfigError("/vertices", "points must have ambient_dim coordinates");
    const Json& sj = field(j, "simplices", "");
    if (!sj.is_array()) throw ConfigError("/simplices", "expected an array");
    std::vector<std::vector<int>> simplices;
    for (size_t i = 0; i < sj.size(); ++i) {
        const std::string p = "/simplices/" + std::to_string(i);
        if (!sj[i].is_array() || static_cast<int>(sj[i].size()) != dim + 1) {
            throw ConfigError(p, "expected dim + 1 vertex indices");
        }
        std::vector<int> ids;
        for (size_t k = 0; k < sj[i].size(); ++k) ids.push_back(as_int(sj[i][k], p + "/" + std::to_string(k)));
        simplices.push_back(std::move(ids));
    }
    const Vector theta = as_vector(field(j, "multiplicities", ""), "/multiplicities");
    if (theta.size() != static_cast<Index>(simplices.size())) {
        throw ConfigError("/multiplicities", "one multiplicity per simplex expected");
    }
    const ComplexPtr cx = build_complex(n, vertices.size() > 0 ? vertices : Matrix(n, 0), simplices);
    return chain_from_cells(cx, std::vector<double>(theta.data(), theta.data() + theta.size()));
}

Json certificate_to_json(const FlatNormCertificate& cert)
{
    return Json{{"value", cert.value}, {"U", chain_to_json(cert.U)}, {"V", chain_to_json(cert.V)}};
}

Json spectrum_to_json(const SpectralResult& result)
{
    Json values = Json::array();
    for (double v : result.values) {
        if (std::isfinite(v)) values.push_back(v);
    }
    return Json{
        {"values", values},
        {"inf_count", result.inf_count()},
        {"method", std::string(to_string(result.method))},
        {"bc", std::string(to_string(result.bc))},
    };
}

std::string dump_json(const Json& j)
{
    return j.dump(2) + "\n";
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

RunConfig config_from_json(const Json& j)
{
    if (!j.is_object()) throw ConfigError("", "expected a configuration object");
    static const std::vector<std::string> known = {
        "scenario", "input", "input_b", "host", "host_input", "method", "bc",
        "k", "epsilon", "basis", "study", "seed"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("/" + key, "unknown field");
    }
    RunConfig c;
    if (j.contains("scenario")) c.scenario = scenario_from_json(j["scenario"], "/scenario");
    if (j.contains("input")) c.input = as_string(j["input"], "/input");
    if (j.contains("input_b")) c.input_b = as_string(j["input_b"], "/input_b");
    if (j.contains("host")) c.host = scenario_from_json(j["host"], "/host");
    if (j.contains("host_input")) c.host_input = as_string(j["host_input"], "/host_input");
    if (j.contains("method")) {
        c.method = as_string(j["method"], "/method");
        if (c.method != "intrinsic" && c.method != "ambient") throw ConfigError("/method", "expected \"intrinsic\" or \"ambient\"");
    }
    if (j.contains("bc")) {
        c.bc = as_string(j["bc"], "/bc");
        parse_bc(c.bc);
    }
    if (j.contains("k")) {
        c.k = as_int(j["k"], "/k");
        if (c.k < 1) throw ConfigError("/k", "must be positive");
    }
    if (j.contains("epsilon")) {
        c.epsilon = as_number(j["epsilon"], "/epsilon");
        if (!(c.epsilon > 0.0)) throw ConfigError("/epsilon", "must be positive");
    }
    if (j.contains("basis")) c.basis = basis_from_json(j["basis"], "/basis");
    if (j.contains("study")) {
        const Json& s = j["study"];
        StudySpec st;
        st.family = as_string(field(s, "family", "/study"), "/study/family");
        const Vector grid = as_vector(field(s, "grid", "/study"), "/study/grid");
        if (grid.size() == 0) throw ConfigError("/study/grid", "grid must be non-empty");
        st.grid.assign(grid.data(), grid.data() + grid.size());
        if (s.contains("k")) st.k = as_int(s["k"], "/study/k");
        if (s.contains("resolution")) st.resolution = as_int(s["resolution"], "/study/resolution");
        c.study = st;
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("/seed", "expected an unsigned integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

Json config_to_json(const RunConfig& c)
{
    Json j = Json::object();
    if (c.scenario) j["scenario"] = scenario_to_json(*c.scenario);
    if (!c.input.empty()) j["input"] = c.input;
    if (!c.input_b.empty()) j["input_b"] = c.input_b;
    if (c.host) j["host"] = scenario_to_json(*c.host);
    if (!c.host_input.empty()) j["host_input"] = c.host_input;
    j["method"] = c.method;
    j["bc"] = c.bc;
    j["k"] = c.k;
    j["epsilon"] = c.epsilon;
    if (c.basis) j["basis"] = basis_to_json(*c.basis);
    if (c.study) {
        j["study"] = Json{{"family", c.study->family}, {"grid", c.study->grid}, {"k", c.study->k},
                          {"resolution", c.study->resolution}};
    }
    j["seed"] = c.seed;
    return j;
}

AmbientBasis make_basis(const BasisSpec& spec, const Chain& chain)
{
    if (spec.kind == "rbf") return make_rbf_basis(spec.centers, spec.width);
    const Box box = spec.box ? *spec.box : bounding_box(chain);
    require(box.dim() == chain.complex->ambient_dim(), ErrorCode::DimensionMismatch, "basis box dimension");
    std::vector<int> cells = spec.cells;
    if (cells.size() == 1) cells.assign(box.dim(), cells.front());
    return make_spline_basis(box, cells, spec.degree);
}

BoundaryCondition parse_bc(const std::string& name, const std::string& path)
{
    if (name == "closed") return BoundaryCondition::Closed;
    if (name == "neumann") return BoundaryCondition::Neumann;
    if (name == "dirichlet") return BoundaryCondition::Dirichlet;
    throw ConfigError(path, "expected \"closed\", \"neumann\" or \"dirichlet\"");
}

ComplexPtr make_host(const ScenarioSpec& spec)
{
    const auto param = [&](const std::string& key, double fallback) {
        const auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    if (spec.name == "strip") return gen_strip(param("length", 1.0), param("height", 0.1), spec.resolution);
    if (spec.name == "annulus") {
        return gen_annulus(param("r_inner", 0.9), param("r_outer", 1.0), spec.resolution,
                           static_cast<int>(param("rings", 1.0)));
    }
    return generate_scenario(spec).complex;
}

} // namespace currents
