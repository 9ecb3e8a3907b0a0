#include "frao/registry.hpp"

#include <algorithm>
#include <cmath>

#include "frao/bounds.hpp"

namespace frao {

namespace {

struct ParsedName {
    std::string base;
    std::vector<double> args;
};

ParsedName parse_name(const std::string& name) {
    const auto open = name.find('(');
    if (open == std::string::npos) return {name, {}};
    if (name.back() != ')') throw UnknownFamily(name);
    ParsedName out;
    out.base = name.substr(0, open);
    std::string args = name.substr(open + 1, name.size() - open - 2);
    size_t pos = 0;
    while (pos < args.size()) {
        size_t used = 0;
        out.args.push_back(std::stod(args.substr(pos), &used));
        pos += used;
        if (pos < args.size()) {
            if (args[pos] != ',') throw UnknownFamily(name);
            ++pos;
        }
    }
    return out;
}

int int_arg(const ParsedName& p, size_t idx, const std::string& name) {
    if (idx >= p.args.size()) throw UnknownFamily(name);
    const double v = p.args[idx];
    if (v != std::floor(v) || v < 1.0 || v > 1e6) throw UnknownFamily(name);
    return static_cast<int>(v);
}

// exact distance serves as both bounds; the recursion terminates at depth 0
std::function<double(const ParamVector&, const ParamVector&)> exact_provider(
    const FamilyDescriptor& fam) {
    auto dist = fam.closed_distance;
    return [dist](const ParamVector& a, const ParamVector& b) { return dist(a, b); };
}

void attach_exact_bounds(FamilyDescriptor& fam) {
    fam.preferred_lower = exact_provider(fam);
    fam.preferred_upper = exact_provider(fam);
}

void attach_hessian_chart_bounds(FamilyDescriptor& fam) {
    // LB: square-root embedding arc; UB: sqrt of the Jeffreys divergence
    // (the Jeffreys-Bregman bound expressed in the family chart). Both are
    // certified and tight at infinitesimal scale.
    FamilyDescriptor snapshot = fam;
    fam.preferred_lower = [snapshot](const ParamVector& a, const ParamVector& b) {
        return bhattacharyya_arc_lb(snapshot, a, b);
    };
    auto jeffreys = fam.jeffreys_divergence;
    fam.preferred_upper = [jeffreys](const ParamVector& a, const ParamVector& b) {
        return std::sqrt(std::max(0.0, jeffreys(a, b)));
    };
}

void attach_normal1d_bounds(FamilyDescriptor& fam) {
    FamilyDescriptor snapshot = fam;
    fam.preferred_lower = [snapshot](const ParamVector& a, const ParamVector& b) {
        const EllipticalParams pa{{a[0]}, SpdMatrix::diagonal({a[1] * a[1]})};
        const EllipticalParams pb{{b[0]}, SpdMatrix::diagonal({b[1] * b[1]})};
        return std::max(calvo_oller_lb(pa, pb), bhattacharyya_arc_lb(snapshot, a, b));
    };
    auto jeffreys = fam.jeffreys_divergence;
    fam.preferred_upper = [jeffreys](const ParamVector& a, const ParamVector& b) {
        return std::sqrt(std::max(0.0, jeffreys(a, b)));
    };
}

void attach_mvn_bounds(FamilyDescriptor& fam, int d) {
    fam.preferred_lower = [d](const ParamVector& a, const ParamVector& b) {
        return calvo_oller_lb(coords_to_elliptical(d, a), coords_to_elliptical(d, b));
    };
    FamilyDescriptor snapshot = fam;
    fam.preferred_upper = [snapshot, d](const ParamVector& a, const ParamVector& b) {
        const double sj = std::sqrt(std::max(0.0, snapshot.jeffreys_divergence(a, b)));
        const double pb = pullback_birkhoff_curve(snapshot, coords_to_elliptical(d, a),
                                                  coords_to_elliptical(d, b), 33)
                              .length;
        return std::min(sj, pb);
    };
}

void attach_elliptical_bounds(FamilyDescriptor& fam, int d) {
    fam.preferred_lower = [d](const ParamVector& a, const ParamVector& b) {
        return calvo_oller_lb(coords_to_elliptical(d, a), coords_to_elliptical(d, b));
    };
    FamilyDescriptor snapshot = fam;
    fam.preferred_upper = [snapshot, d](const ParamVector& a, const ParamVector& b) {
        return pullback_birkhoff_curve(snapshot, coords_to_elliptical(d, a),
                                       coords_to_elliptical(d, b), 65)
            .length;
    };
}

int elliptical_dim_from_param_count(int param_dim) {
    // param_dim = d + d(d+1)/2
    for (int d = 1; d <= 256; ++d)
        if (d + d * (d + 1) / 2 == param_dim) return d;
    return 0;
}

}  // namespace

void attach_default_bounds(FamilyDescriptor& fam) {
    const std::string base = fam.name.substr(0, fam.name.find('('));
    if (base == "spd" || base == "centered-mvn" || base == "wishart" || base == "categorical") {
        attach_exact_bounds(fam);
    } else if (base == "exponential" || base == "rayleigh") {
        attach_hessian_chart_bounds(fam);
    } else if (base == "normal1d") {
        attach_normal1d_bounds(fam);
    } else if (base == "mvn") {
        attach_mvn_bounds(fam, elliptical_dim_from_param_count(fam.param_dim));
    } else if (base == "mggd" || base == "mtd") {
        attach_elliptical_bounds(fam, elliptical_dim_from_param_count(fam.param_dim));
    }
    // location-scale families without a closed Bhattacharyya coefficient
    // (cauchy, student) keep exact closed-form distances as both bounds
    else if (base == "cauchy" || base == "student") {
        attach_exact_bounds(fam);
    }
}

FamilyDescriptor make_family(const std::string& name) {
    ParsedName p;
    try {
        p = parse_name(name);
    } catch (const std::exception&) {
        throw UnknownFamily(name);
    }

    FamilyDescriptor fam;
    try {
        if (p.base == "exponential" && p.args.empty())
            fam = exponential_family();
        else if (p.base == "rayleigh" && p.args.empty())
            fam = rayleigh_family();
        else if (p.base == "categorical")
            fam = categorical_family(int_arg(p, 0, name));
        else if (p.base == "normal1d" && p.args.empty())
            fam = normal1d_family();
        else if (p.base == "cauchy" && p.args.empty())
            fam = cauchy_family();
        else if (p.base == "student")
            fam = student_family(p.args.size() == 1 ? p.args[0] : -1.0);
        else if (p.base == "mvn")
            fam = mvn_family(int_arg(p, 0, name));
        else if (p.base == "centered-mvn")
            fam = centered_mvn_family(int_arg(p, 0, name));
        else if (p.base == "mggd" && p.args.size() == 2)
            fam = mggd_family(p.args[0], int_arg(p, 1, name));
        else if (p.base == "mtd" && p.args.size() == 2)
            fam = mtd_family(p.args[0], int_arg(p, 1, name));
        else if (p.base == "wishart")
            fam = wishart_family(int_arg(p, 0, name));
        else if (p.base == "spd")
            fam = spd_family(int_arg(p, 0, name));
        else
            throw UnknownFamily(name);
    } catch (const InvalidInput&) {
        // malformed constructor arguments count as an unknown family name
        throw UnknownFamily(name);
    }

    attach_default_bounds(fam);
    return fam;
}

std::vector<std::string> registry_names() {
    return {"exponential", "rayleigh",  "categorical(d)", "normal1d",  "cauchy",
            "student(k)",  "mvn(d)",    "centered-mvn(d)", "mggd(k,d)", "mtd(k,d)",
            "wishart(d)",  "spd(d)"};
}

}  // namespace frao
