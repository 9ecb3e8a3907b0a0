#include "frao/families.hpp"

#include <algorithm>
#include <cmath>

#include "frao/quadrature.hpp"

namespace frao {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

SpdMatrix spd_from_coords(int d, const Vec& coords, size_t offset) {
    try {
        return SpdMatrix(coords_to_sym(d, coords, offset));
    } catch (const InvalidInput& e) {
        throw DomainError(std::string("scale matrix outside the SPD cone: ") + e.what());
    }
}

void check_simplex(const Vec& p, const char* op) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v > 0.0)) throw InvalidInput(std::string(op) + ": simplex entries must be positive");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw InvalidInput(std::string(op) + ": simplex point does not sum to 1");
}

}  // namespace

// ---------------------------------------------------------------------------
// FamilyDescriptor accessors
// ---------------------------------------------------------------------------

void FamilyDescriptor::require_domain(const ParamVector& theta) const {
    if (static_cast<int>(theta.size()) != param_dim)
        throw InvalidInput(name + ": point has wrong length");
    if (in_domain && !in_domain(theta)) throw DomainError(name + ": point outside domain");
}

double FamilyDescriptor::distance(const ParamVector& a, const ParamVector& b) const {
    if (!closed_distance) throw CapabilityError(name + ": closed-form distance not declared");
    require_domain(a);
    require_domain(b);
    return closed_distance(a, b);
}

ParamVector FamilyDescriptor::geodesic(const ParamVector& a, const ParamVector& b, double t) const {
    if (!closed_geodesic) throw CapabilityError(name + ": closed-form geodesic not declared");
    require_domain(a);
    require_domain(b);
    return closed_geodesic(a, b, t);
}

ParamVector FamilyDescriptor::pregeodesic(const ParamVector& a, const ParamVector& b,
                                          double t) const {
    if (!closed_pregeodesic) throw CapabilityError(name + ": closed-form pregeodesic not declared");
    require_domain(a);
    require_domain(b);
    return closed_pregeodesic(a, b, t);
}

double FamilyDescriptor::jeffreys(const ParamVector& a, const ParamVector& b) const {
    if (!jeffreys_divergence) throw CapabilityError(name + ": Jeffreys divergence not declared");
    require_domain(a);
    require_domain(b);
    return jeffreys_divergence(a, b);
}

FamilyDescriptor::AxisDistanceResult FamilyDescriptor::axis_distance(const ParamVector& at, int axis,
                                                                     double from, double to) const {
    if (axis < 0 || axis >= param_dim) throw InvalidInput(name + ": axis out of range");
    if (from == to) return {0.0, 0.0};
    if (closed_axis_distance) return {closed_axis_distance(at, axis, from, to), 0.0};
    if (!metric.eval) throw CapabilityError(name + ": no metric for axis quadrature");
    const double quad_tol = 1e-10;
    ParamVector theta = at;
    auto integrand = [&](double x) {
        theta[axis] = x;
        require_domain(theta);
        const SpdMatrix g = metric.eval(theta);
        return std::sqrt(std::max(0.0, g(axis, axis)));
    };
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    return {adaptive_simpson(integrand, lo, hi, quad_tol), quad_tol};
}

// ---------------------------------------------------------------------------
// Generic 1D / product / simplex operations
// ---------------------------------------------------------------------------

double distance_1d(const std::function<double(double)>& h_antideriv, double theta0, double theta1) {
    return std::fabs(h_antideriv(theta1) - h_antideriv(theta0));
}

double product_distance(const std::vector<double>& per_factor) {
    double s = 0.0;
    for (double v : per_factor) {
        if (v < 0.0) throw InvalidInput("product_distance: negative factor distance");
        s += v * v;
    }
    return std::sqrt(s);
}

double bhattacharyya_coefficient_simplex(const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw InvalidInput("simplex: length mismatch");
    check_simplex(p, "categorical");
    check_simplex(q, "categorical");
    double c = 0.0;
    for (size_t i = 0; i < p.size(); ++i) c += std::sqrt(p[i] * q[i]);
    return c;
}

double categorical_fisher_rao(const Vec& p, const Vec& q) {
    return 2.0 * std::acos(clamp_unit(bhattacharyya_coefficient_simplex(p, q)));
}

double categorical_hellinger(const Vec& p, const Vec& q) {
    return std::sqrt(std::max(0.0, 1.0 - bhattacharyya_coefficient_simplex(p, q)));
}

// ---------------------------------------------------------------------------
// Location-scale geometry
// ---------------------------------------------------------------------------

double uhp_distance(double x0, double y0, double x1, double y1) {
    const double chi = ((x0 - x1) * (x0 - x1) + (y0 - y1) * (y0 - y1)) / (2.0 * y0 * y1);
    return std::acosh(1.0 + chi);
}

void uhp_geodesic(double x0, double y0, double x1, double y1, double t, double& x, double& y) {
    // the circle branch loses precision once the center runs off to infinity,
    // so treat nearly-vertical pairs as vertical
    if (std::fabs(x1 - x0) <= 1e-9 * (std::fabs(x0) + std::fabs(x1) + y0 + y1)) {
        // vertical geodesic
        x = x0;
        y = y0 * std::pow(y1 / y0, t);
        return;
    }
    // circle orthogonal to the boundary; constant speed via u = log tan(phi/2)
    const double c = (x0 * x0 + y0 * y0 - x1 * x1 - y1 * y1) / (2.0 * (x0 - x1));
    const double r = std::hypot(x0 - c, y0);
    const double phi0 = std::atan2(y0, x0 - c);
    const double phi1 = std::atan2(y1, x1 - c);
    const double u0 = std::log(std::tan(0.5 * phi0));
    const double u1 = std::log(std::tan(0.5 * phi1));
    const double u = (1.0 - t) * u0 + t * u1;
    const double phi = 2.0 * std::atan(std::exp(u));
    x = c + r * std::cos(phi);
    y = r * std::sin(phi);
}

namespace {

void validate_ls_constants(const LocationScaleConstants& k) {
    if (!(4.0 * k.a > 0.0) || !(4.0 * k.b - 1.0 > 0.0))
        throw InvalidInput("location-scale constants violate FIM positive-definiteness");
    if (k.c != 0.0)
        throw InvalidInput("location-scale closed form requires an even standard density (c = 0)");
}

}  // namespace

double location_scale_distance(const LocationScaleConstants& k, double l0, double s0, double l1,
                               double s1) {
    validate_ls_constants(k);
    if (!(s0 > 0.0) || !(s1 > 0.0)) throw DomainError("location-scale: scale must be positive");
    const double a_cap = 2.0 * std::sqrt(k.a);
    const double b_cap = std::sqrt(4.0 * k.b - 1.0);
    const double f = a_cap / b_cap;
    return b_cap * uhp_distance(f * l0, s0, f * l1, s1);
}

void location_scale_geodesic(const LocationScaleConstants& k, double l0, double s0, double l1,
                             double s1, double t, double& l, double& s) {
    validate_ls_constants(k);
    if (!(s0 > 0.0) || !(s1 > 0.0)) throw DomainError("location-scale: scale must be positive");
    const double a_cap = 2.0 * std::sqrt(k.a);
    const double b_cap = std::sqrt(4.0 * k.b - 1.0);
    const double f = a_cap / b_cap;
    double x, y;
    uhp_geodesic(f * l0, s0, f * l1, s1, t, x, y);
    l = x / f;
    s = y;
}

// ---------------------------------------------------------------------------
// Elliptical families
// ---------------------------------------------------------------------------

namespace {

void validate_elliptical(const EllipticalConstants& k) {
    if (k.d < 1) throw InvalidInput("elliptical constants: dimension must be >= 1");
    if (!(4.0 * k.a > 0.0) || !(2.0 * k.b > 0.0) || !(8.0 * k.b + k.d * (4.0 * k.b - 1.0) > 0.0))
        throw InvalidInput("elliptical constants: length element not positive-definite");
}

}  // namespace

double elliptical_length_element(const EllipticalConstants& k, const EllipticalParams& at,
                                 const Vec& dm, const SymMatrix& dv) {
    validate_elliptical(k);
    const int d = at.scale.dim();
    if (static_cast<int>(dm.size()) != d || dv.dim() != d || k.d != d)
        throw InvalidInput("elliptical_length_element: dimension mismatch");
    const SymMatrix w = spd_inverse(at.scale).sym();
    const Vec wdm = w.apply(dm);
    const Matrix wdv = w.dense() * dv.dense();
    double tr = 0.0;
    double tr_sq = 0.0;
    for (int i = 0; i < d; ++i) {
        tr += wdv(i, i);
        for (int j = 0; j < d; ++j) tr_sq += wdv(i, j) * wdv(j, i);
    }
    const double q =
        4.0 * k.a * dot(dm, wdm) + 2.0 * k.b * tr_sq + 0.25 * (4.0 * k.b - 1.0) * tr * tr;
    return std::sqrt(std::max(0.0, q));
}

EllipticalConstants mggd_constants(double k, int d) {
    if (!(k >= 1.0) || d < 1) throw InvalidInput("mggd_constants: require k >= 1, d >= 1");
    const double a = std::exp(2.0 * std::log(k) + std::lgamma(2.0 + d / (2.0 * k) - 1.0 / k) -
                              std::log(2.0) / k - std::log(static_cast<double>(d)) -
                              std::lgamma(d / (2.0 * k)));
    const double b = (d + 2.0 * k) / (4.0 * d + 8.0);
    EllipticalConstants out{d, a, b};
    validate_elliptical(out);
    return out;
}

EllipticalConstants mtd_constants(double k, int d) {
    if (!(k >= 1.0) || d < 1) throw InvalidInput("mtd_constants: require k >= 1, d >= 1");
    const double ab = (k + d) / (4.0 * (k + d + 2.0));
    EllipticalConstants out{d, ab, ab};
    validate_elliptical(out);
    return out;
}

SpdMatrix elliptical_fixed_location_geodesic(const SpdMatrix& v0, const SpdMatrix& v1, double t) {
    return spd_geodesic(v0, v1, t);
}

double mvn_jeffreys(const Vec& mu0, const SpdMatrix& sigma0, const Vec& mu1,
                    const SpdMatrix& sigma1) {
    const int d = sigma0.dim();
    if (sigma1.dim() != d || static_cast<int>(mu0.size()) != d || static_cast<int>(mu1.size()) != d)
        throw InvalidInput("mvn_jeffreys: dimension mismatch");
    const SymMatrix inv0 = spd_inverse(sigma0).sym();
    const SymMatrix inv1 = spd_inverse(sigma1).sym();
    double tr = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            tr += inv1(i, j) * sigma0(j, i) + inv0(i, j) * sigma1(j, i);
    const Vec dm = mu1 - mu0;
    const double quad = dot(dm, inv0.apply(dm)) + dot(dm, inv1.apply(dm));
    return 0.5 * tr - d + 0.5 * quad;
}

double mahalanobis(const Vec& m0, const Vec& m1, const SpdMatrix& v) {
    if (m0.size() != m1.size() || static_cast<int>(m0.size()) != v.dim())
        throw InvalidInput("mahalanobis: dimension mismatch");
    const Vec d = m0 - m1;
    const Vec solved = chol_solve(v.chol(), d);
    return std::sqrt(std::max(0.0, dot(d, solved)));
}

double scale_family_distance(double s0, double s1) {
    if (!(s0 > 0.0) || !(s1 > 0.0)) throw DomainError("scale family: scale must be positive");
    return std::fabs(std::log(s1 / s0));
}

double wishart_distance(const SpdMatrix& v0, const SpdMatrix& v1, int d) {
    if (d < 1) throw InvalidInput("wishart_distance: d must be >= 1");
    return std::sqrt(static_cast<double>(d)) * spd_distance(v0, v1);
}

// ---------------------------------------------------------------------------
// Separable Hessian metrics
// ---------------------------------------------------------------------------

namespace {

double invert_monotone(const MonotoneMap& map, double y, double lo, double hi) {
    if (map.inverse) return map.inverse(y);
    double flo = map.h(lo);
    double fhi = map.h(hi);
    const bool increasing = fhi >= flo;
    if (!increasing) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    if (y < flo - 1e-12 * (1.0 + std::fabs(flo)) || y > fhi + 1e-12 * (1.0 + std::fabs(fhi)))
        throw NumericalFailure("quasi_arithmetic_geodesic: target outside invertible range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (map.h(mid) < y)
            lo = mid;
        else
            hi = mid;
        if (std::fabs(hi - lo) <= 1e-15 * (1.0 + std::fabs(lo) + std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double separable_bregman_distance(const std::vector<MonotoneMap>& h, const ParamVector& theta,
                                  const ParamVector& theta_prime) {
    if (h.size() != theta.size() || theta.size() != theta_prime.size())
        throw InvalidInput("separable_bregman_distance: length mismatch");
    double s = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
        const double d = h[i].h(theta[i]) - h[i].h(theta_prime[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

ParamVector quasi_arithmetic_geodesic(const std::vector<MonotoneMap>& h, const ParamVector& theta,
                                      const ParamVector& theta_prime, double t) {
    if (h.size() != theta.size() || theta.size() != theta_prime.size())
        throw InvalidInput("quasi_arithmetic_geodesic: length mismatch");
    ParamVector out(theta.size());
    for (size_t i = 0; i < h.size(); ++i) {
        const double y = (1.0 - t) * h[i].h(theta[i]) + t * h[i].h(theta_prime[i]);
        const double lo = std::min(theta[i], theta_prime[i]);
        const double hi = std::max(theta[i], theta_prime[i]);
        out[i] = (lo == hi) ? lo : invert_monotone(h[i], y, lo, hi);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Packing helpers
// ---------------------------------------------------------------------------

Vec sym_to_coords(const SymMatrix& m) {
    const int d = m.dim();
    Vec out;
    out.reserve(static_cast<size_t>(d) * (d + 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) out.push_back(m(i, j));
    return out;
}

SymMatrix coords_to_sym(int d, const Vec& coords, size_t offset) {
    if (coords.size() < offset + static_cast<size_t>(d) * (d + 1) / 2)
        throw InvalidInput("coords_to_sym: coordinate vector too short");
    SymMatrix out(d);
    size_t k = offset;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) out.set(i, j, coords[k++]);
    return out;
}

Vec elliptical_to_coords(const EllipticalParams& p) {
    Vec out = p.location;
    const Vec scale = sym_to_coords(p.scale.sym());
    out.insert(out.end(), scale.begin(), scale.end());
    return out;
}

EllipticalParams coords_to_elliptical(int d, const Vec& coords) {
    if (coords.size() != static_cast<size_t>(d) + static_cast<size_t>(d) * (d + 1) / 2)
        throw InvalidInput("coords_to_elliptical: wrong coordinate length");
    Vec loc(coords.begin(), coords.begin() + d);
    return {std::move(loc), spd_from_coords(d, coords, d)};
}

// ---------------------------------------------------------------------------
// Curve length
// ---------------------------------------------------------------------------

namespace {

std::vector<ParamVector> sample_uniform(const Curve& c, int t_count) {
    if (t_count < 2) throw InvalidInput("curve_length: need T >= 2 samples");
    std::vector<ParamVector> pts;
    pts.reserve(t_count);
    for (int i = 0; i < t_count; ++i) pts.push_back(c.map(static_cast<double>(i) / (t_count - 1)));
    return pts;
}

}  // namespace

double curve_length(const FamilyDescriptor& fam, const Curve& c, int segments_t,
                    LengthMethod method) {
    switch (method) {
        case LengthMethod::ExactSegments: {
            if (!fam.closed_distance)
                throw CapabilityError(fam.name + ": exact-segments length needs a closed distance");
            const auto pts = sample_uniform(c, segments_t);
            double s = 0.0;
            for (size_t i = 0; i + 1 < pts.size(); ++i) s += fam.closed_distance(pts[i], pts[i + 1]);
            return s;
        }
        case LengthMethod::Jeffreys: {
            if (!fam.jeffreys_divergence)
                throw CapabilityError(fam.name + ": Jeffreys length needs the Jeffreys divergence");
            return curve_length_fdiv(fam, c, segments_t, fam.jeffreys_divergence, 2.0);
        }
        case LengthMethod::FiniteDifference: {
            if (!fam.metric.eval)
                throw CapabilityError(fam.name + ": finite-difference length needs a metric");
            const auto pts = sample_uniform(c, segments_t);
            double s = 0.0;
            for (size_t i = 0; i + 1 < pts.size(); ++i)
                s += length_element(fam.metric, pts[i], pts[i + 1] - pts[i]);
            return s;
        }
    }
    throw InvalidInput("curve_length: unknown method");
}

double curve_length_fdiv(const FamilyDescriptor& fam, const Curve& c, int segments_t,
                         const std::function<double(const ParamVector&, const ParamVector&)>& i_f,
                         double f_second_at_1) {
    if (!(f_second_at_1 > 0.0))
        throw InvalidInput("curve_length_fdiv: f''(1) must be positive (strict convexity at 1)");
    if (!i_f) throw CapabilityError(fam.name + ": f-divergence not available");
    const auto pts = sample_uniform(c, segments_t);
    double s = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        s += std::sqrt(std::max(0.0, 2.0 / f_second_at_1 * i_f(pts[i], pts[i + 1])));
    return s;
}

// ---------------------------------------------------------------------------
// Family factories
// ---------------------------------------------------------------------------

namespace {

// 1D scale-invariant family with metric c/theta^2; distance |log ratio|.
FamilyDescriptor scale_invariant_1d(const std::string& name) {
    FamilyDescriptor f;
    f.name = name;
    f.param_dim = 1;
    f.in_domain = [](const ParamVector& t) { return t[0] > 0.0; };
    f.metric.dim = 1;
    f.metric.eval = [](const ParamVector& t) {
        if (!(t[0] > 0.0)) throw DomainError("scale family: parameter must be positive");
        return SpdMatrix::diagonal({1.0 / (t[0] * t[0])});
    };
    f.closed_distance = [](const ParamVector& a, const ParamVector& b) {
        return scale_family_distance(a[0], b[0]);
    };
    f.closed_geodesic = [](const ParamVector& a, const ParamVector& b, double t) {
        return ParamVector{a[0] * std::pow(b[0] / a[0], t)};
    };
    f.geodesic_is_arclength = true;
    f.closed_pregeodesic = [](const ParamVector& a, const ParamVector& b, double t) {
        return ParamVector{(1.0 - t) * a[0] + t * b[0]};
    };
    f.closed_axis_distance = [](const ParamVector&, int, double from, double to) {
        return scale_family_distance(from, to);
    };
    f.jeffreys_divergence = [](const ParamVector& a, const ParamVector& b) {
        return a[0] / b[0] + b[0] / a[0] - 2.0;
    };
    f.bhattacharyya_coefficient = [](const ParamVector& a, const ParamVector& b) {
        return 2.0 * std::sqrt(a[0] * b[0]) / (a[0] + b[0]);
    };
    return f;
}

}  // namespace

FamilyDescriptor exponential_family() {
    FamilyDescriptor f = scale_invariant_1d("exponential");
    f.kl_divergence = [](const ParamVector& a, const ParamVector& b) {
        return std::log(a[0] / b[0]) + b[0] / a[0] - 1.0;
    };
    BregmanGenerator gen;
    gen.potential = [](const ParamVector& t) { return -std::log(t[0]); };
    gen.gradient = [](const ParamVector& t) { return Vec{-1.0 / t[0]}; };
    gen.hessian = [](const ParamVector& t) { return SymMatrix::diagonal({1.0 / (t[0] * t[0])}); };
    gen.in_chart = [](const ParamVector& t) { return t[0] > 0.0; };
    f.hessian_potential = gen;
    return f;
}

FamilyDescriptor rayleigh_family() {
    FamilyDescriptor f = scale_invariant_1d("rayleigh");  // parameter is sigma^2
    f.kl_divergence = [](const ParamVector& a, const ParamVector& b) {
        return std::log(b[0] / a[0]) + a[0] / b[0] - 1.0;
    };
    return f;
}

FamilyDescriptor categorical_family(int d) {
    if (d < 2) throw InvalidInput("categorical_family: need d >= 2");
    FamilyDescriptor f;
    f.name = "categorical(" + std::to_string(d) + ")";
    f.param_dim = d;
    f.in_domain = [](const ParamVector& p) {
        double s = 0.0;
        for (double v : p) {
            if (!(v > 0.0)) return false;
            s += v;
        }
        return std::fabs(s - 1.0) <= 1e-12;
    };
    f.metric.dim = d;
    f.metric.eval = [](const ParamVector& p) {
        Vec diag(p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            if (!(p[i] > 0.0)) throw DomainError("categorical: probabilities must be positive");
            diag[i] = 1.0 / p[i];
        }
        return SpdMatrix::diagonal(diag);
    };
    f.closed_distance = [](const ParamVector& p, const ParamVector& q) {
        return categorical_fisher_rao(p, q);
    };
    f.closed_geodesic = [](const ParamVector& p, const ParamVector& q, double t) {
        const size_t n = p.size();
        const double c = clamp_unit(bhattacharyya_coefficient_simplex(p, q));
        const double omega = std::acos(c);
        ParamVector out(n);
        if (omega < 1e-12) {
            for (size_t i = 0; i < n; ++i) out[i] = (1.0 - t) * p[i] + t * q[i];
            return out;
        }
        const double s0 = std::sin((1.0 - t) * omega) / std::sin(omega);
        const double s1 = std::sin(t * omega) / std::sin(omega);
        double nrm = 0.0;
        for (size_t i = 0; i < n; ++i) {
            out[i] = s0 * std::sqrt(p[i]) + s1 * std::sqrt(q[i]);
            nrm += out[i] * out[i];
        }
        for (size_t i = 0; i < n; ++i) out[i] = out[i] * out[i] / nrm;
        return out;
    };
    f.geodesic_is_arclength = true;
    f.jeffreys_divergence = [](const ParamVector& p, const ParamVector& q) {
        double s = 0.0;
        for (size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * std::log(p[i] / q[i]);
        return s;
    };
    f.kl_divergence = [](const ParamVector& p, const ParamVector& q) {
        double s = 0.0;
        for (size_t i = 0; i < p.size(); ++i) s += p[i] * std::log(p[i] / q[i]);
        return s;
    };
    f.bhattacharyya_coefficient = [](const ParamVector& p, const ParamVector& q) {
        return bhattacharyya_coefficient_simplex(p, q);
    };
    return f;
}

FamilyDescriptor location_scale_family(const std::string& name, const LocationScaleConstants& k) {
    validate_ls_constants(k);
    FamilyDescriptor f;
    f.name = name;
    f.param_dim = 2;
    f.in_domain = [](const ParamVector& t) { return t[1] > 0.0; };
    f.metric.dim = 2;
    const double gl = 4.0 * k.a;
    const double gs = 4.0 * k.b - 1.0;
    f.metric.eval = [gl, gs](const ParamVector& t) {
        if (!(t[1] > 0.0)) throw DomainError("location-scale: scale must be positive");
        const double s2 = t[1] * t[1];
        return SpdMatrix::diagonal({gl / s2, gs / s2});
    };
    f.closed_distance = [k](const ParamVector& a, const ParamVector& b) {
        return location_scale_distance(k, a[0], a[1], b[0], b[1]);
    };
    f.closed_geodesic = [k](const ParamVector& a, const ParamVector& b, double t) {
        double l, s;
        location_scale_geodesic(k, a[0], a[1], b[0], b[1], t, l, s);
        return ParamVector{l, s};
    };
    f.geodesic_is_arclength = true;
    f.closed_axis_distance = [gl, gs](const ParamVector& at, int axis, double from, double to) {
        if (axis == 0) return std::sqrt(gl) * std::fabs(to - from) / at[1];
        return std::sqrt(gs) * scale_family_distance(from, to);
    };
    return f;
}

FamilyDescriptor normal1d_family() {
    FamilyDescriptor f = location_scale_family("normal1d", {0.25, 0.75, 0.0});
    f.jeffreys_divergence = [](const ParamVector& a, const ParamVector& b) {
        const double v0 = a[1] * a[1], v1 = b[1] * b[1];
        const double dm = b[0] - a[0];
        return 0.5 * (v0 / v1 + v1 / v0) - 1.0 + 0.5 * dm * dm * (1.0 / v0 + 1.0 / v1);
    };
    f.kl_divergence = [](const ParamVector& a, const ParamVector& b) {
        const double v0 = a[1] * a[1], v1 = b[1] * b[1];
        const double dm = b[0] - a[0];
        return 0.5 * (v0 / v1 + dm * dm / v1 - 1.0 + std::log(v1 / v0));
    };
    f.bhattacharyya_coefficient = [](const ParamVector& a, const ParamVector& b) {
        const double v0 = a[1] * a[1], v1 = b[1] * b[1];
        const double dm = b[0] - a[0];
        return std::sqrt(2.0 * a[1] * b[1] / (v0 + v1)) * std::exp(-0.25 * dm * dm / (v0 + v1));
    };
    f.hessian_potential = normal1d_natural_generator();
    return f;
}

namespace {

// Shared machinery for alternative univariate-normal charts: convert to
// (mu, sigma), reuse the closed forms there.
FamilyDescriptor normal1d_chart(const std::string& name,
                                std::function<ParamVector(const ParamVector&)> to_musigma,
                                std::function<ParamVector(const ParamVector&)> from_musigma,
                                std::function<SpdMatrix(const ParamVector&)> fim,
                                std::function<bool(const ParamVector&)> domain) {
    FamilyDescriptor base = normal1d_family();
    FamilyDescriptor f;
    f.name = name;
    f.param_dim = 2;
    f.in_domain = std::move(domain);
    f.metric.dim = 2;
    f.metric.eval = std::move(fim);
    f.closed_distance = [base, to_musigma](const ParamVector& a, const ParamVector& b) {
        return base.closed_distance(to_musigma(a), to_musigma(b));
    };
    f.closed_geodesic = [base, to_musigma, from_musigma](const ParamVector& a, const ParamVector& b,
                                                         double t) {
        return from_musigma(base.closed_geodesic(to_musigma(a), to_musigma(b), t));
    };
    f.geodesic_is_arclength = true;
    f.jeffreys_divergence = [base, to_musigma](const ParamVector& a, const ParamVector& b) {
        return base.jeffreys_divergence(to_musigma(a), to_musigma(b));
    };
    return f;
}

}  // namespace

FamilyDescriptor normal1d_variance_chart() {
    return normal1d_chart(
        "normal1d(mu,var)",
        [](const ParamVector& t) { return ParamVector{t[0], std::sqrt(t[1])}; },
        [](const ParamVector& t) { return ParamVector{t[0], t[1] * t[1]}; },
        [](const ParamVector& t) {
            if (!(t[1] > 0.0)) throw DomainError("normal1d(mu,var): variance must be positive");
            return SpdMatrix::diagonal({1.0 / t[1], 0.5 / (t[1] * t[1])});
        },
        [](const ParamVector& t) { return t[1] > 0.0; });
}

FamilyDescriptor normal1d_log_sigma_chart() {
    return normal1d_chart(
        "normal1d(mu,logsigma)",
        [](const ParamVector& t) { return ParamVector{t[0], std::exp(t[1])}; },
        [](const ParamVector& t) { return ParamVector{t[0], std::log(t[1])}; },
        [](const ParamVector& t) {
            const double s = std::exp(t[1]);
            return SpdMatrix::diagonal({1.0 / (s * s), 2.0});
        },
        [](const ParamVector&) { return true; });
}

FamilyDescriptor cauchy_family() { return location_scale_family("cauchy", {0.125, 0.375, 0.0}); }

FamilyDescriptor student_family(double k) {
    if (!(k >= 1.0)) throw InvalidInput("student_family: need k >= 1");
    const double a = (k + 1.0) / (4.0 * (k + 3.0));
    const double b = 3.0 * (k + 1.0) / (4.0 * (k + 3.0));
    return location_scale_family("student(" + std::to_string(k) + ")", {a, b, 0.0});
}

namespace {

// Scale-block metric entries from trace identities on W = V^{-1}:
//   tr(W E_pq W E_rt) and tr(W E_pq) for the symmetric basis E.
double scale_block_entry(const SymMatrix& w, int p, int q, int r, int t, double two_b, double c4) {
    double tr2, trp, trt;
    if (p == q && r == t) {
        tr2 = w(p, r) * w(p, r);
        trp = w(p, p);
        trt = w(r, r);
    } else if (p == q) {
        tr2 = 2.0 * w(p, r) * w(p, t);
        trp = w(p, p);
        trt = 2.0 * w(r, t);
    } else if (r == t) {
        tr2 = 2.0 * w(r, p) * w(r, q);
        trp = 2.0 * w(p, q);
        trt = w(r, r);
    } else {
        tr2 = 2.0 * (w(p, r) * w(q, t) + w(p, t) * w(q, r));
        trp = 2.0 * w(p, q);
        trt = 2.0 * w(r, t);
    }
    return two_b * tr2 + c4 * trp * trt;
}

MetricField elliptical_metric(const EllipticalConstants& k, bool with_location) {
    validate_elliptical(k);
    const int d = k.d;
    const int n_scale = d * (d + 1) / 2;
    const int n = with_location ? d + n_scale : n_scale;
    const int off = with_location ? d : 0;

    MetricField field;
    field.dim = n;
    field.eval = [k, d, n, off, with_location](const ParamVector& theta) {
        const SpdMatrix v = spd_from_coords(d, theta, off);
        const SymMatrix w = spd_inverse(v).sym();
        SymMatrix g(n);
        if (with_location) {
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) g.set(i, j, 4.0 * k.a * w(i, j));
        }
        const double two_b = 2.0 * k.b;
        const double c4 = 0.25 * (4.0 * k.b - 1.0);
        std::vector<std::pair<int, int>> basis;
        basis.reserve(d * (d + 1) / 2);
        for (int p = 0; p < d; ++p)
            for (int q = p; q < d; ++q) basis.emplace_back(p, q);
        for (size_t a = 0; a < basis.size(); ++a) {
            for (size_t b = a; b < basis.size(); ++b) {
                const double entry = scale_block_entry(w, basis[a].first, basis[a].second,
                                                       basis[b].first, basis[b].second, two_b, c4);
                g.set(off + static_cast<int>(a), off + static_cast<int>(b), entry);
            }
        }
        return SpdMatrix(g);
    };
    return field;
}

bool spd_coords_in_domain(int d, const ParamVector& theta, size_t offset) {
    try {
        spd_from_coords(d, theta, offset);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

}  // namespace

FamilyDescriptor spd_family(int d) {
    if (d < 1) throw InvalidInput("spd_family: need d >= 1");
    FamilyDescriptor f;
    f.name = "spd(" + std::to_string(d) + ")";
    f.param_dim = d * (d + 1) / 2;
    f.in_domain = [d](const ParamVector& t) { return spd_coords_in_domain(d, t, 0); };
    f.metric = elliptical_metric({d, 0.25, 0.25}, /*with_location=*/false);
    f.closed_distance = [d](const ParamVector& a, const ParamVector& b) {
        return spd_distance(spd_from_coords(d, a, 0), spd_from_coords(d, b, 0));
    };
    f.closed_geodesic = [d](const ParamVector& a, const ParamVector& b, double t) {
        return sym_to_coords(spd_geodesic(spd_from_coords(d, a, 0), spd_from_coords(d, b, 0), t).sym());
    };
    f.geodesic_is_arclength = true;
    f.closed_pregeodesic = [](const ParamVector& a, const ParamVector& b, double t) {
        return (1.0 - t) * a + t * b;  // the cone is convex
    };
    f.jeffreys_divergence = [d](const ParamVector& a, const ParamVector& b) {
        const Vec zero(d, 0.0);
        return mvn_jeffreys(zero, spd_from_coords(d, a, 0), zero, spd_from_coords(d, b, 0));
    };
    f.bhattacharyya_coefficient = [d](const ParamVector& a, const ParamVector& b) {
        const SpdMatrix s0 = spd_from_coords(d, a, 0);
        const SpdMatrix s1 = spd_from_coords(d, b, 0);
        const SpdMatrix mid = SpdMatrix((s0.sym() + s1.sym()).scaled(0.5));
        const double db = 0.5 * (chol_logdet(mid.chol()) -
                                 0.5 * chol_logdet(s0.chol()) - 0.5 * chol_logdet(s1.chol()));
        return std::exp(-db);
    };
    return f;
}

FamilyDescriptor centered_mvn_family(int d) {
    FamilyDescriptor f = spd_family(d);
    f.name = "centered-mvn(" + std::to_string(d) + ")";
    return f;
}

FamilyDescriptor wishart_family(int d) {
    FamilyDescriptor f = spd_family(d);
    f.name = "wishart(" + std::to_string(d) + ")";
    const double scale = std::sqrt(static_cast<double>(d));
    auto base_dist = f.closed_distance;
    f.closed_distance = [base_dist, scale](const ParamVector& a, const ParamVector& b) {
        return scale * base_dist(a, b);
    };
    // metric scales by d; geodesic path unchanged
    auto base_metric = f.metric.eval;
    f.metric.eval = [base_metric, d](const ParamVector& t) {
        return SpdMatrix(base_metric(t).sym().scaled(static_cast<double>(d)));
    };
    f.jeffreys_divergence = nullptr;
    f.bhattacharyya_coefficient = nullptr;
    return f;
}

namespace {

FamilyDescriptor elliptical_family(const std::string& name, const EllipticalConstants& k) {
    validate_elliptical(k);
    const int d = k.d;
    FamilyDescriptor f;
    f.name = name;
    f.param_dim = d + d * (d + 1) / 2;
    f.in_domain = [d](const ParamVector& t) { return spd_coords_in_domain(d, t, d); };
    f.metric = elliptical_metric(k, /*with_location=*/true);
    return f;
}

}  // namespace

FamilyDescriptor mvn_family(int d) {
    if (d < 1) throw InvalidInput("mvn_family: need d >= 1");
    FamilyDescriptor f = elliptical_family("mvn(" + std::to_string(d) + ")", {d, 0.25, 0.25});
    f.jeffreys_divergence = [d](const ParamVector& a, const ParamVector& b) {
        const EllipticalParams pa = coords_to_elliptical(d, a);
        const EllipticalParams pb = coords_to_elliptical(d, b);
        return mvn_jeffreys(pa.location, pa.scale, pb.location, pb.scale);
    };
    f.bhattacharyya_coefficient = [d](const ParamVector& a, const ParamVector& b) {
        const EllipticalParams pa = coords_to_elliptical(d, a);
        const EllipticalParams pb = coords_to_elliptical(d, b);
        const SpdMatrix mid = SpdMatrix((pa.scale.sym() + pb.scale.sym()).scaled(0.5));
        const Vec dm = pb.location - pa.location;
        const double quad = dot(dm, chol_solve(mid.chol(), dm));
        const double db = 0.125 * quad + 0.5 * (chol_logdet(mid.chol()) -
                                                0.5 * chol_logdet(pa.scale.chol()) -
                                                0.5 * chol_logdet(pb.scale.chol()));
        return std::exp(-db);
    };
    return f;
}

FamilyDescriptor mggd_family(double k, int d) {
    const EllipticalConstants c = mggd_constants(k, d);
    return elliptical_family("mggd(" + std::to_string(k) + "," + std::to_string(d) + ")", c);
}

FamilyDescriptor mtd_family(double k, int d) {
    const EllipticalConstants c = mtd_constants(k, d);
    return elliptical_family("mtd(" + std::to_string(k) + "," + std::to_string(d) + ")", c);
}

// ---------------------------------------------------------------------------
// Univariate normal natural chart
// ---------------------------------------------------------------------------

Vec normal1d_natural_from_musigma(double mu, double sigma) {
    const double v = sigma * sigma;
    return {mu / v, -0.5 / v};
}

void normal1d_musigma_from_natural(const Vec& xi, double& mu, double& sigma) {
    if (!(xi[1] < 0.0)) throw DomainError("normal natural chart requires xi2 < 0");
    sigma = std::sqrt(-0.5 / xi[1]);
    mu = -0.5 * xi[0] / xi[1];
}

BregmanGenerator normal1d_natural_generator() {
    BregmanGenerator gen;
    gen.in_chart = [](const ParamVector& xi) { return xi.size() == 2 && xi[1] < 0.0; };
    gen.potential = [](const ParamVector& xi) {
        return -xi[0] * xi[0] / (4.0 * xi[1]) + 0.5 * std::log(-kPi / xi[1]);
    };
    gen.gradient = [](const ParamVector& xi) {
        return Vec{-0.5 * xi[0] / xi[1], 0.25 * xi[0] * xi[0] / (xi[1] * xi[1]) - 0.5 / xi[1]};
    };
    gen.hessian = [](const ParamVector& xi) {
        SymMatrix h(2);
        h.set(0, 0, -0.5 / xi[1]);
        h.set(0, 1, 0.5 * xi[0] / (xi[1] * xi[1]));
        h.set(1, 1, -0.5 * xi[0] * xi[0] / (xi[1] * xi[1] * xi[1]) + 0.5 / (xi[1] * xi[1]));
        return h;
    };
    return gen;
}

}  // namespace frao
