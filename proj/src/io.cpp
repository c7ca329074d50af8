#include "dfkit/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace dfkit {
namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    if (!j.is_object()) throw validation_error(std::string(ctx) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw validation_error(std::string(ctx) + ": unknown field \"" + key + "\"");
    }
}

double number_at(const json& j, const char* key, const char* ctx) {
    if (!j.at(key).is_number())
        throw validation_error(std::string(ctx) + ": field \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

std::vector<Atom> atoms_from(const json& j, const char* ctx) {
    if (!j.is_array()) throw validation_error(std::string(ctx) + ": atoms must be an array");
    std::vector<Atom> atoms;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw validation_error(std::string(ctx) + ": each atom must be a [x, w] number pair");
        atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return atoms;
}

std::vector<double> numbers_from(const json& j, const char* key, const char* ctx) {
    const json& arr = j.at(key);
    if (!arr.is_array()) throw validation_error(std::string(ctx) + ": \"" + std::string(key) +
                                                "\" must be a number array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number())
            throw validation_error(std::string(ctx) + ": \"" + std::string(key) +
                                   "\" must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

TableDensity table_from(const json& j, const char* ctx) {
    require_keys(j, {"family", "x", "f"}, ctx);
    TableDensity t;
    t.x = numbers_from(j, "x", ctx);
    t.f = numbers_from(j, "f", ctx);
    t.validate();
    return t;
}

Density density_from(const json& j) {
    const char* ctx = "measure density";
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
        throw validation_error("measure density: missing \"family\" tag");
    const std::string family = j.at("family").get<std::string>();
    if (family == "lognormal") {
        require_keys(j, {"family", "s0", "sigma", "maturity", "scale"}, ctx);
        LognormalDensity d;
        d.s0 = number_at(j, "s0", ctx);
        d.sigma = number_at(j, "sigma", ctx);
        d.maturity = number_at(j, "maturity", ctx);
        d.scale = j.contains("scale") ? number_at(j, "scale", ctx) : 1.0;
        return d;
    }
    if (family == "table") return table_from(j, ctx);
    throw validation_error("measure density: unknown family \"" + family + "\"");
}

json parse_json(const std::string& text, const char* ctx) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw io_error(std::string(ctx) + ": malformed JSON");
    return j;
}

double span_bound(const json& v, const char* ctx) {
    if (v.is_string() && v.get<std::string>() == "inf") return kInf;
    if (v.is_number()) return v.get<double>();
    throw validation_error(std::string(ctx) + ": span bounds must be numbers or \"inf\"");
}

StieltjesMeasure curvature_from(const json& j) {
    const char* ctx = "payoff curvature";
    require_keys(j, {"atoms", "density"}, ctx);
    std::vector<Atom> atoms;
    if (j.contains("atoms")) atoms = atoms_from(j.at("atoms"), ctx);
    std::optional<SignedDensity> density;
    if (j.contains("density")) {
        const json& d = j.at("density");
        if (!d.is_object() || !d.contains("family") || !d.at("family").is_string())
            throw validation_error("payoff curvature density: missing \"family\" tag");
        const std::string family = d.at("family").get<std::string>();
        if (family == "table") {
            density = table_from(d, "payoff curvature density");
        } else if (family == "constant") {
            require_keys(d, {"family", "value", "lo", "hi"}, "payoff curvature density");
            ConstantDensity c;
            c.value = number_at(d, "value", ctx);
            c.lo = d.contains("lo") ? number_at(d, "lo", ctx) : 0.0;
            c.hi = d.contains("hi") ? span_bound(d.at("hi"), ctx) : kInf;
            density = c;
        } else {
            throw validation_error("payoff curvature density: unknown family \"" + family + "\"");
        }
    }
    return StieltjesMeasure(std::move(atoms), std::move(density));
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Measure measure_from_json_text(const std::string& text) {
    const json j = parse_json(text, "measure");
    require_keys(j, {"atoms", "density", "finite_mean", "total_mass_cap"}, "measure");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) atoms = atoms_from(j.at("atoms"), "measure");
    std::optional<Density> density;
    if (j.contains("density")) density = density_from(j.at("density"));
    bool finite_mean = true;
    if (j.contains("finite_mean")) {
        if (!j.at("finite_mean").is_boolean())
            throw validation_error("measure: \"finite_mean\" must be a boolean");
        finite_mean = j.at("finite_mean").get<bool>();
    }
    std::optional<double> cap;
    if (j.contains("total_mass_cap")) cap = number_at(j, "total_mass_cap", "measure");
    return Measure(std::move(atoms), std::move(density), finite_mean, cap);
}

Measure load_measure(const std::string& path) { return measure_from_json_text(read_file(path)); }

PiecewiseDCPayoff payoff_from_json_text(const std::string& text) {
    const json j = parse_json(text, "payoff");
    require_keys(j, {"pieces"}, "payoff");
    if (!j.contains("pieces") || !j.at("pieces").is_array())
        throw validation_error("payoff: missing \"pieces\" array");
    PiecewiseDCPayoff payoff;
    for (const json& pj : j.at("pieces")) {
        require_keys(pj, {"span", "g0_at_a", "slope0_at_a", "curvature"}, "payoff piece");
        if (!pj.contains("span") || !pj.at("span").is_array() || pj.at("span").size() != 2)
            throw validation_error("payoff piece: \"span\" must be a [a, b] pair");
        const double lo = span_bound(pj.at("span")[0], "payoff piece");
        const double hi = span_bound(pj.at("span")[1], "payoff piece");
        const double g0 = pj.contains("g0_at_a") ? number_at(pj, "g0_at_a", "payoff piece") : 0.0;
        const double s0 =
            pj.contains("slope0_at_a") ? number_at(pj, "slope0_at_a", "payoff piece") : 0.0;
        StieltjesMeasure curvature;
        if (pj.contains("curvature")) curvature = curvature_from(pj.at("curvature"));
        payoff.pieces.push_back(make_piece(lo, hi, g0, s0, std::move(curvature)));
    }
    payoff.validate();
    return payoff;
}

PiecewiseDCPayoff load_payoff(const std::string& path) {
    return payoff_from_json_text(read_file(path));
}

std::string sidecar_path(const std::string& csv_path) {
    if (csv_path.size() >= 4 && csv_path.ends_with(".csv"))
        return csv_path.substr(0, csv_path.size() - 4) + ".meta.json";
    return csv_path + ".meta.json";
}

PriceCurve load_curve(const std::string& csv_path) {
    std::istringstream in(read_file(csv_path));
    std::string line;
    if (!std::getline(in, line) || line != "strike,price")
        throw validation_error("curve csv: expected header \"strike,price\"");
    PriceCurve curve;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw validation_error("curve csv: missing comma on line " + std::to_string(lineno));
        try {
            size_t used = 0;
            curve.strikes.push_back(std::stod(line.substr(0, comma), &used));
            curve.values.push_back(std::stod(line.substr(comma + 1), &used));
        } catch (const std::exception&) {
            throw validation_error("curve csv: bad number on line " + std::to_string(lineno));
        }
    }

    const json meta = parse_json(read_file(sidecar_path(csv_path)), "curve metadata");
    require_keys(meta, {"role", "f_infinity", "mean"}, "curve metadata");
    if (!meta.contains("role") || !meta.at("role").is_string())
        throw validation_error("curve metadata: missing \"role\"");
    const std::string role = meta.at("role").get<std::string>();
    if (role == "put")
        curve.role = OptionRole::Put;
    else if (role == "call")
        curve.role = OptionRole::Call;
    else
        throw validation_error("curve metadata: role must be \"put\" or \"call\"");
    if (meta.contains("f_infinity"))
        curve.f_infinity = number_at(meta, "f_infinity", "curve metadata");
    if (meta.contains("mean")) curve.mean = number_at(meta, "mean", "curve metadata");

    curve.validate_grid();
    return curve;
}

void save_curve(const PriceCurve& curve, const std::string& csv_path) {
    {
        std::ofstream out(csv_path);
        if (!out) throw io_error("cannot write " + csv_path);
        out << "strike,price\n";
        out.precision(15);
        for (size_t i = 0; i < curve.strikes.size(); ++i)
            out << curve.strikes[i] << ',' << curve.values[i] << '\n';
    }
    json meta;
    meta["role"] = (curve.role == OptionRole::Put) ? "put" : "call";
    if (curve.f_infinity) meta["f_infinity"] = *curve.f_infinity;
    if (curve.mean) meta["mean"] = *curve.mean;
    std::ofstream out(sidecar_path(csv_path));
    if (!out) throw io_error("cannot write " + sidecar_path(csv_path));
    out << meta.dump(2) << '\n';
}

void write_cdf_estimate(const CdfEstimate& est, std::ostream& out) {
    out << "strike,f_hat,bound\n";
    out.precision(15);
    for (size_t i = 0; i < est.strikes.size(); ++i)
        out << est.strikes[i] << ',' << est.f_hat[i] << ',' << est.bound[i] << '\n';
}

std::function<double(double)> density_from_json_text(const std::string& text) {
    const json j = parse_json(text, "density");
    require_keys(j, {"family", "mean", "sd"}, "density");
    if (!j.contains("family") || !j.at("family").is_string() ||
        j.at("family").get<std::string>() != "gaussian")
        throw validation_error("density: only the \"gaussian\" family is supported");
    const double mean = j.contains("mean") ? number_at(j, "mean", "density") : 0.0;
    const double sd = j.contains("sd") ? number_at(j, "sd", "density") : 1.0;
    if (!(sd > 0.0)) throw validation_error("density: sd must be positive");
    return [mean, sd](double x) { return norm_pdf((x - mean) / sd) / sd; };
}

std::function<double(double)> load_density(const std::string& path) {
    return density_from_json_text(read_file(path));
}

std::vector<double> parse_strike_range(const std::string& spec) {
    const size_t c1 = spec.find(':');
    const size_t c2 = (c1 == std::string::npos) ? std::string::npos : spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw validation_error("strike range: expected start:stop:step, got \"" + spec + "\"");
    double start, stop, step;
    try {
        start = std::stod(spec.substr(0, c1));
        stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        throw validation_error("strike range: bad number in \"" + spec + "\"");
    }
    if (!(step > 0.0) || stop < start)
        throw validation_error("strike range: need stop >= start and step > 0");
    std::vector<double> grid;
    const auto n = static_cast<size_t>(std::floor((stop - start) / step + 1e-9));
    grid.reserve(n + 1);
    for (size_t i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

}  // namespace dfkit
