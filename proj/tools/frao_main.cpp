// frao: Fisher-Rao distance toolkit command line.
//
// Reads a JSON request document from --input or stdin, dispatches to the
// library, and writes a JSON result document (CSV for curve sampling) to
// --output or stdout. Same request in, same bytes out.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frao/approx.hpp"
#include "frao/batch.hpp"
#include "frao/bounds.hpp"
#include "frao/registry.hpp"

using json = nlohmann::ordered_json;
using frao::operator-;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kFormatVersion = 1;

enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kUnknownFamily = 2,
    kDomainViolation = 3,
    kCapabilityMissing = 4,
    kNumericalFailure = 5,
};

struct PointFormat {
    enum Kind { Scalar, Vector, Matrix, MeanScale } kind = Scalar;
    int d = 0;  // matrix / elliptical dimension when applicable
};

std::string family_base(const std::string& name) { return name.substr(0, name.find('(')); }

int matrix_dim_from_params(int param_dim) {
    for (int d = 1; d <= 512; ++d)
        if (d * (d + 1) / 2 == param_dim) return d;
    throw frao::InvalidInput("not a packed symmetric dimension");
}

int elliptical_dim_from_params(int param_dim) {
    for (int d = 1; d <= 512; ++d)
        if (d + d * (d + 1) / 2 == param_dim) return d;
    throw frao::InvalidInput("not a packed elliptical dimension");
}

PointFormat point_format(const frao::FamilyDescriptor& fam) {
    const std::string base = family_base(fam.name);
    if (base == "exponential" || base == "rayleigh") return {PointFormat::Scalar, 0};
    if (base == "normal1d" || base == "cauchy" || base == "student")
        return {PointFormat::Vector, 2};
    if (base == "categorical") return {PointFormat::Vector, fam.param_dim};
    if (base == "spd" || base == "centered-mvn" || base == "wishart")
        return {PointFormat::Matrix, matrix_dim_from_params(fam.param_dim)};
    return {PointFormat::MeanScale, elliptical_dim_from_params(fam.param_dim)};
}

frao::SymMatrix parse_matrix(const json& j, int d, std::vector<std::string>& warnings) {
    frao::Matrix m(d, d);
    if (j.is_array() && j.size() == static_cast<size_t>(d) && j.at(0).is_array()) {
        for (int r = 0; r < d; ++r) {
            const auto& row = j.at(r);
            if (!row.is_array() || row.size() != static_cast<size_t>(d))
                throw frao::InvalidInput("matrix rows must have length d");
            for (int c = 0; c < d; ++c) m(r, c) = row.at(c).get<double>();
        }
    } else if (j.is_array() && j.size() == static_cast<size_t>(d) * d) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) m(r, c) = j.at(r * d + c).get<double>();
    } else {
        throw frao::InvalidInput("matrix point must be d rows of d entries or a flat d*d array");
    }
    // symmetrize on load; reject asymmetry above 1e-9
    double asym = 0.0;
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) asym = std::max(asym, std::fabs(m(r, c) - m(c, r)));
    if (asym > 1e-9 * (1.0 + m.max_abs()))
        throw frao::DomainError("matrix point is not symmetric within 1e-9");
    if (asym > 0.0) warnings.push_back("symmetrized matrix point (max asymmetry " +
                                       std::to_string(asym) + ")");
    frao::SymMatrix s(d);
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) s.set(r, c, 0.5 * (m(r, c) + m(c, r)));
    return s;
}

frao::ParamVector parse_point(const json& j, const PointFormat& fmt,
                              std::vector<std::string>& warnings) {
    switch (fmt.kind) {
        case PointFormat::Scalar:
            if (j.is_number()) return {j.get<double>()};
            if (j.is_array() && j.size() == 1) return {j.at(0).get<double>()};
            throw frao::InvalidInput("expected a scalar parameter");
        case PointFormat::Vector: {
            if (!j.is_array() || static_cast<int>(j.size()) != fmt.d)
                throw frao::InvalidInput("expected a parameter vector of length " +
                                         std::to_string(fmt.d));
            frao::ParamVector p;
            for (const auto& v : j) p.push_back(v.get<double>());
            return p;
        }
        case PointFormat::Matrix:
            return frao::sym_to_coords(parse_matrix(j, fmt.d, warnings));
        case PointFormat::MeanScale: {
            if (!j.is_object()) throw frao::InvalidInput("expected {\"mean\": ..., \"scale\": ...}");
            const json& mean = j.at("mean");
            const json& scale = j.contains("scale") ? j.at("scale") : j.at("cov");
            if (!mean.is_array() || static_cast<int>(mean.size()) != fmt.d)
                throw frao::InvalidInput("mean must have length " + std::to_string(fmt.d));
            frao::ParamVector p;
            for (const auto& v : mean) p.push_back(v.get<double>());
            const frao::Vec s = frao::sym_to_coords(parse_matrix(scale, fmt.d, warnings));
            p.insert(p.end(), s.begin(), s.end());
            return p;
        }
    }
    throw frao::InvalidInput("unreachable point format");
}


json estimate_to_json(const frao::DistanceEstimate& e) {
    json out;
    out["value"] = e.value;
    out["kind"] = frao::to_string(e.kind);
    json contract;
    contract["type"] = frao::to_string(e.contract.type);
    if (e.contract.type != frao::ErrorContract::Type::None) contract["bound"] = e.contract.bound;
    out["contract"] = contract;
    out["method"] = e.method;
    out["work"] = e.work;
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Options {
    std::string method;
    std::optional<double> epsilon;
    std::optional<double> delta;
    int segments = 65;
    std::vector<double> t_grid;
    frao::CalvoOllerEmbedding embedding;
    long long seed = 0;
    bool serial = false;
};

Options parse_options(const json& req) {
    Options opt;
    if (!req.contains("options")) return opt;
    const json& o = req.at("options");
    if (o.contains("method")) opt.method = o.at("method").get<std::string>();
    if (o.contains("epsilon")) opt.epsilon = o.at("epsilon").get<double>();
    if (o.contains("delta")) opt.delta = o.at("delta").get<double>();
    if (o.contains("segments")) opt.segments = o.at("segments").get<int>();
    if (o.contains("t_grid"))
        for (const auto& t : o.at("t_grid")) opt.t_grid.push_back(t.get<double>());
    if (o.contains("alpha")) opt.embedding.alpha = o.at("alpha").get<double>();
    if (o.contains("beta")) opt.embedding.beta = o.at("beta").get<double>();
    if (o.contains("seed")) opt.seed = o.at("seed").get<long long>();
    if (o.contains("serial")) opt.serial = o.at("serial").get<bool>();
    return opt;
}

std::string bound_method_label(const std::string& base, bool lower) {
    if (base == "mvn") return lower ? "calvo-oller" : "min(sqrt-jeffreys,pullback-birkhoff)";
    if (base == "mggd" || base == "mtd") return lower ? "calvo-oller" : "pullback-birkhoff";
    if (base == "normal1d") return lower ? "max(calvo-oller,bhattacharyya-arc)" : "sqrt-jeffreys";
    if (base == "exponential" || base == "rayleigh")
        return lower ? "bhattacharyya-arc" : "sqrt-jeffreys";
    return "exact";
}

// --- task runners -----------------------------------------------------------

json run_dist(const frao::FamilyDescriptor& fam, const std::vector<frao::ParamVector>& pts) {
    if (pts.size() != 2) throw frao::InvalidInput("task dist expects exactly 2 points");
    frao::DistanceEstimate e;
    e.value = fam.distance(pts[0], pts[1]);
    e.kind = frao::EstimateKind::Exact;
    e.method = family_base(fam.name) + ".closed";
    json results = json::array();
    results.push_back(estimate_to_json(e));
    return results;
}

json run_bounds(const frao::FamilyDescriptor& fam, const std::vector<frao::ParamVector>& pts) {
    if (pts.size() != 2) throw frao::InvalidInput("task bounds expects exactly 2 points");
    if (!fam.preferred_lower || !fam.preferred_upper)
        throw frao::CapabilityError(fam.name + ": no bound providers declared");
    const std::string base = family_base(fam.name);
    const frao::BoundsPair pair = frao::make_bounds_pair(
        fam.preferred_lower(pts[0], pts[1]), fam.preferred_upper(pts[0], pts[1]),
        bound_method_label(base, true), bound_method_label(base, false));
    frao::DistanceEstimate lo;
    lo.value = pair.lower;
    lo.kind = frao::EstimateKind::Lower;
    lo.method = pair.lower_method;
    frao::DistanceEstimate hi;
    hi.value = pair.upper;
    hi.kind = frao::EstimateKind::Upper;
    hi.method = pair.upper_method;
    json results = json::array();
    results.push_back(estimate_to_json(lo));
    results.push_back(estimate_to_json(hi));
    return results;
}

json run_approx(const frao::FamilyDescriptor& fam, const std::vector<frao::ParamVector>& pts,
                const Options& opt) {
    if (pts.size() != 2) throw frao::InvalidInput("task approx expects exactly 2 points");
    frao::ApproxConfig cfg;
    if (opt.epsilon) cfg.epsilon = *opt.epsilon;
    frao::DistanceEstimate e;
    if (opt.delta) {
        e = frao::approx_add(fam, pts[0], pts[1], *opt.delta, cfg);
    } else if (fam.closed_geodesic && fam.geodesic_is_arclength) {
        e = frao::approx_mult_geodesic(fam, pts[0], pts[1], cfg);
    } else {
        e = frao::approx_mult_pregeodesic(fam, pts[0], pts[1], cfg);
    }
    json results = json::array();
    results.push_back(estimate_to_json(e));
    return results;
}

json run_matrix(const frao::FamilyDescriptor& fam, const std::vector<frao::ParamVector>& pts,
                const Options& opt) {
    if (pts.size() < 2) throw frao::InvalidInput("task matrix expects at least 2 points");
    const std::vector<double> m = frao::distance_matrix(fam, pts, !opt.serial);
    const int n = static_cast<int>(pts.size());
    json results = json::array();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            json r;
            r["pair"] = json::array({i, j});
            r["value"] = m[static_cast<size_t>(i) * n + j];
            r["kind"] = "exact";
            r["method"] = family_base(fam.name) + ".closed";
            results.push_back(r);
        }
    }
    return results;
}

// Curve sampling: one CSV row per t with the flattened parameters and the
// cumulative finite-difference length.
std::string run_geodesic_csv(const frao::FamilyDescriptor& fam,
                             const std::vector<frao::ParamVector>& pts, const Options& opt) {
    if (pts.size() != 2) throw frao::InvalidInput("task geodesic expects exactly 2 points");
    std::vector<double> grid = opt.t_grid;
    if (grid.empty()) {
        const int t_count = std::max(2, opt.segments);
        for (int i = 0; i < t_count; ++i) grid.push_back(static_cast<double>(i) / (t_count - 1));
    }
    for (double t : grid)
        if (t < 0.0 || t > 1.0) throw frao::InvalidInput("t_grid values must lie in [0,1]");

    frao::Curve curve;
    if (opt.method == "pullback") {
        const int d = elliptical_dim_from_params(fam.param_dim);
        curve = frao::pullback_birkhoff_curve(fam, frao::coords_to_elliptical(d, pts[0]),
                                              frao::coords_to_elliptical(d, pts[1]),
                                              std::max(2, opt.segments), opt.embedding)
                    .curve;
    } else {
        if (!fam.closed_geodesic)
            throw frao::CapabilityError(fam.name + ": no closed-form geodesic to sample");
        const frao::ParamVector a = pts[0], b = pts[1];
        auto geo = fam.closed_geodesic;
        curve.kind = frao::CurveKind::Geodesic;
        curve.map = [geo, a, b](double t) { return geo(a, b, t); };
    }

    std::ostringstream csv;
    csv << "t";
    for (int k = 0; k < fam.param_dim; ++k) csv << ",p" << k;
    csv << ",cum_length\n";
    double cum = 0.0;
    double prev_t = 0.0;
    bool first = true;
    for (double t : grid) {
        const frao::ParamVector p = curve.map(t);
        if (!first && t > prev_t) {
            // midpoint finite differences on an internally refined grid keep
            // the cumulative column second-order accurate
            const int sub = 64;
            const double h = (t - prev_t) / sub;
            for (int s = 0; s < sub; ++s) {
                const frao::ParamVector a = curve.map(prev_t + s * h);
                const frao::ParamVector b = curve.map(prev_t + (s + 1) * h);
                const frao::ParamVector mid = curve.map(prev_t + (s + 0.5) * h);
                cum += frao::length_element(fam.metric, mid, b - a);
            }
        }
        csv << format_double(t);
        for (double v : p) csv << ',' << format_double(v);
        csv << ',' << format_double(cum) << '\n';
        prev_t = t;
        first = false;
    }
    return csv.str();
}

int run_request(const json& req, const std::string& output_path) {
    if (!req.contains("family")) throw frao::InvalidInput("request needs a \"family\" field");
    if (!req.contains("task")) throw frao::InvalidInput("request needs a \"task\" field");
    std::string family = req.at("family").get<std::string>();
    const std::string task = req.at("task").get<std::string>();

    // bare "categorical": infer the simplex dimension from the first point
    if (family == "categorical" && req.contains("points") && !req.at("points").empty() &&
        req.at("points").at(0).is_array())
        family += "(" + std::to_string(req.at("points").at(0).size()) + ")";

    frao::FamilyDescriptor fam = frao::make_family(family);
    const PointFormat fmt = point_format(fam);
    const Options opt = parse_options(req);

    std::vector<std::string> warnings;
    std::vector<frao::ParamVector> pts;
    if (req.contains("points"))
        for (const auto& j : req.at("points")) pts.push_back(parse_point(j, fmt, warnings));
    for (const auto& p : pts) fam.require_domain(p);

    std::string body;
    json doc;
    doc["request"] = req;
    if (task == "geodesic") {
        body = run_geodesic_csv(fam, pts, opt);
    } else {
        json results;
        if (task == "dist")
            results = run_dist(fam, pts);
        else if (task == "bounds")
            results = run_bounds(fam, pts);
        else if (task == "approx")
            results = run_approx(fam, pts, opt);
        else if (task == "matrix")
            results = run_matrix(fam, pts, opt);
        else
            throw frao::InvalidInput("unknown task: " + task);

        doc["warnings"] = warnings;
        doc["results"] = results;
        json meta;
        meta["version"] = kVersion;
        meta["format_version"] = kFormatVersion;
        long long work = 0;
        for (const auto& r : results) work += r.contains("work") ? r.at("work").get<int>() : 1;
        meta["work_units"] = work + static_cast<long long>(results.size());
        doc["meta"] = meta;
        body = doc.dump(2) + "\n";
    }

    if (output_path.empty() || output_path == "-") {
        std::cout << body;
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw frao::InvalidInput("cannot open output file: " + output_path);
        out << body;
    }
    return kOk;
}

int emit_error(int code, const std::string& type, const std::string& message) {
    json err;
    err["error"]["code"] = code;
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    std::cout << err.dump(2) << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher-Rao distances, bounds, and guaranteed approximations"};
    std::string input_path, output_path, family, task, method;
    double epsilon = -1.0, delta = -1.0, alpha = 0.0, beta = 1.0;
    int segments = -1;
    long long seed = 0;
    bool version = false, serial = false;

    app.add_option("--input", input_path, "request document path (default: stdin)");
    app.add_option("--output", output_path, "output path (default: stdout)");
    app.add_option("--family", family, "override the request's family");
    app.add_option("--task", task, "override the request's task");
    app.add_option("--method", method, "method option (e.g. pullback for geodesic sampling)");
    app.add_option("--epsilon", epsilon, "multiplicative error target");
    app.add_option("--delta", delta, "additive error target");
    app.add_option("--segments", segments, "discretization count T");
    app.add_option("--alpha", alpha, "embedding alpha");
    app.add_option("--beta", beta, "embedding beta");
    app.add_option("--seed", seed, "request seed (echoed; all tasks are deterministic)");
    app.add_flag("--serial", serial, "disable the parallel pairwise kernels");
    app.add_flag("--version", version, "print version and exit");
    CLI11_PARSE(app, argc, argv);

    if (version) {
        std::cout << "frao " << kVersion << " (request format " << kFormatVersion << ")\n";
        return kOk;
    }

    try {
        json req;
        if (!input_path.empty()) {
            std::ifstream in(input_path, std::ios::binary);
            if (!in) return emit_error(kUsage, "io", "cannot open input file: " + input_path);
            req = json::parse(in);
        } else {
            req = json::parse(std::cin);
        }

        // flag overrides
        if (!family.empty()) req["family"] = family;
        if (!task.empty()) req["task"] = task;
        json& o = req["options"];
        if (!o.is_object()) o = json::object();
        if (!method.empty()) o["method"] = method;
        if (epsilon > 0.0) o["epsilon"] = epsilon;
        if (delta > 0.0) o["delta"] = delta;
        if (segments > 0) o["segments"] = segments;
        if (alpha != 0.0) o["alpha"] = alpha;
        if (beta != 1.0) o["beta"] = beta;
        if (seed != 0) o["seed"] = seed;
        if (serial) o["serial"] = true;

        return run_request(req, output_path);
    } catch (const frao::UnknownFamily& e) {
        return emit_error(kUnknownFamily, "unknown-family", e.what());
    } catch (const frao::DomainError& e) {
        return emit_error(kDomainViolation, "domain", e.what());
    } catch (const frao::InvalidInput& e) {
        return emit_error(kDomainViolation, "invalid-input", e.what());
    } catch (const frao::CapabilityError& e) {
        return emit_error(kCapabilityMissing, "capability", e.what());
    } catch (const frao::ApproximationFailure& e) {
        return emit_error(kNumericalFailure, "approximation", e.what());
    } catch (const frao::NumericalFailure& e) {
        return emit_error(kNumericalFailure, "numerical", e.what());
    } catch (const nlohmann::json::exception& e) {
        return emit_error(kUsage, "parse", e.what());
    } catch (const std::exception& e) {
        return emit_error(kUsage, "error", e.what());
    }
}
