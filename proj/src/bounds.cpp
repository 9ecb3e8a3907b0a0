#include "frao/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace frao {

BoundsPair make_bounds_pair(double lower, double upper, std::string lower_method,
                            std::string upper_method) {
    if (lower > upper + 1e-12 * (1.0 + std::fabs(upper)))
        throw NumericalFailure("bounds crossed (lower > upper): formula bug upstream");
    return {lower, upper, std::move(lower_method), std::move(upper_method)};
}

// ---------------------------------------------------------------------------
// Fisher-Manhattan hypercube
// ---------------------------------------------------------------------------

HypercubeGraph::HypercubeGraph(const FamilyDescriptor& fam, ParamVector theta0, ParamVector theta1)
    : fam_(fam), theta0_(std::move(theta0)), theta1_(std::move(theta1)), m_(fam.param_dim) {
    if (m_ < 1 || m_ > 20) throw InvalidInput("HypercubeGraph: dimension must lie in [1, 20]");
    fam_.require_domain(theta0_);
    fam_.require_domain(theta1_);
    weight_cache_.assign(static_cast<size_t>(m_) << m_, -1.0);
}

ParamVector HypercubeGraph::corner(uint32_t bits) const {
    ParamVector theta(m_);
    for (int i = 0; i < m_; ++i) theta[i] = (bits >> i & 1u) ? theta1_[i] : theta0_[i];
    return theta;
}

double HypercubeGraph::edge_weight(uint32_t bits, int axis) {
    const uint32_t base = bits & ~(1u << axis);
    const size_t key = (static_cast<size_t>(axis) << m_) | base;
    if (weight_cache_[key] >= 0.0) return weight_cache_[key];
    const ParamVector at = corner(base);
    const auto res = fam_.axis_distance(at, axis, theta0_[axis], theta1_[axis]);
    quad_tol_ += res.quadrature_tol;
    weight_cache_[key] = res.value;
    return res.value;
}

double HypercubeGraph::shortest_path() {
    const uint32_t n = 1u << m_;
    const uint32_t target = n - 1;
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[0] = 0.0;
    heap.emplace(0.0, 0u);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        if (u == target) return d;
        for (int axis = 0; axis < m_; ++axis) {
            const uint32_t v = u ^ (1u << axis);
            const double w = edge_weight(u, axis);
            if (w < 0.0) throw InvalidInput("HypercubeGraph: negative edge weight");
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                heap.emplace(dist[v], v);
            }
        }
    }
    return dist[target];
}

double fisher_manhattan_ub(const FamilyDescriptor& fam, const ParamVector& theta0,
                           const ParamVector& theta1) {
    HypercubeGraph cube(fam, theta0, theta1);
    const double path = cube.shortest_path();
    return path + cube.accumulated_quadrature_tol();
}

// ---------------------------------------------------------------------------
// Jeffreys-Bregman upper bound
// ---------------------------------------------------------------------------

double jeffreys_bregman_ub(const BregmanGenerator& gen, const ParamVector& xi0,
                           const ParamVector& xi1) {
    if (gen.in_chart && (!gen.in_chart(xi0) || !gen.in_chart(xi1)))
        throw DomainError("jeffreys_bregman_ub: point outside the Hessian chart");
    const Vec d = xi1 - xi0;
    const Vec dg = gen.gradient(xi1) - gen.gradient(xi0);
    double s = dot(d, dg);
    if (s < -1e-12 * (1.0 + norm2(d) * norm2(dg)))
        throw DomainError("jeffreys_bregman_ub: gradient not monotone (potential not convex here)");
    return std::sqrt(std::max(0.0, s));
}

// ---------------------------------------------------------------------------
// Calvo-Oller embedding and derived bounds
// ---------------------------------------------------------------------------

SpdMatrix calvo_oller_embed(const EllipticalParams& p, const CalvoOllerEmbedding& e) {
    if (!(e.beta > 0.0)) throw InvalidInput("calvo_oller_embed: beta must be positive");
    const int d = p.scale.dim();
    if (static_cast<int>(p.location.size()) != d)
        throw InvalidInput("calvo_oller_embed: location/scale dimension mismatch");
    const double det_pow = e.alpha == 0.0 ? 1.0 : std::exp(e.alpha * chol_logdet(p.scale.chol()));
    SymMatrix out(d + 1);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j)
            out.set(i, j, det_pow * (p.scale(i, j) + e.beta * p.location[i] * p.location[j]));
        out.set(i, d, det_pow * e.beta * p.location[i]);
    }
    out.set(d, d, det_pow);
    return SpdMatrix(out);
}

EllipticalParams calvo_oller_retract(const SpdMatrix& p, const CalvoOllerEmbedding& e) {
    if (!(e.beta > 0.0)) throw InvalidInput("calvo_oller_retract: beta must be positive");
    const int d = p.dim() - 1;
    if (d < 1) throw InvalidInput("calvo_oller_retract: embedded dimension too small");
    const double corner = p(d, d);
    Vec m(d);
    for (int i = 0; i < d; ++i) m[i] = p(i, d) / (corner * e.beta);
    SymMatrix v(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) v.set(i, j, p(i, j) / corner - e.beta * m[i] * m[j]);
    try {
        return {std::move(m), SpdMatrix(v)};
    } catch (const InvalidInput&) {
        throw NumericalFailure("calvo_oller_retract: retracted scale not SPD");
    }
}

double calvo_oller_lb(const EllipticalParams& p0, const EllipticalParams& p1,
                      const CalvoOllerEmbedding& e) {
    return spd_distance(calvo_oller_embed(p0, e), calvo_oller_embed(p1, e));
}

double bco_distance(const EllipticalParams& p0, const EllipticalParams& p1,
                    const CalvoOllerEmbedding& e) {
    return birkhoff_distance(calvo_oller_embed(p0, e), calvo_oller_embed(p1, e));
}

PullbackCurveResult pullback_birkhoff_curve(const FamilyDescriptor& fam, const EllipticalParams& p0,
                                            const EllipticalParams& p1, int segments_t,
                                            const CalvoOllerEmbedding& e) {
    if (segments_t < 2) throw InvalidInput("pullback_birkhoff_curve: need T >= 2");
    const SpdMatrix e0 = calvo_oller_embed(p0, e);
    const SpdMatrix e1 = calvo_oller_embed(p1, e);
    const int d = p0.scale.dim();

    PullbackCurveResult out;
    out.curve.kind = CurveKind::Pullback;
    out.curve.map = [e0, e1, e, d](double t) {
        const SpdMatrix sample = birkhoff_geodesic(e0, e1, t);
        return elliptical_to_coords(calvo_oller_retract(sample, e));
    };
    out.method = fam.jeffreys_divergence ? LengthMethod::Jeffreys : LengthMethod::FiniteDifference;
    out.length = curve_length(fam, out.curve, segments_t, out.method);
    return out;
}

// ---------------------------------------------------------------------------
// Straight-chart and simplex bounds
// ---------------------------------------------------------------------------

double lerp_curve_ub(const FamilyDescriptor& fam, const ParamVector& theta0,
                     const ParamVector& theta1, int segments_t, LengthMethod method) {
    fam.require_domain(theta0);
    fam.require_domain(theta1);
    Curve c;
    c.kind = CurveKind::Lerp;
    c.map = [theta0, theta1](double t) { return (1.0 - t) * theta0 + t * theta1; };
    // fail early if the segment exits the domain (non-convex charts)
    for (int i = 0; i <= 16; ++i) fam.require_domain(c.map(i / 16.0));
    return curve_length(fam, c, segments_t, method);
}

double hellinger_lb(const Vec& p, const Vec& q) { return categorical_hellinger(p, q); }

double bhattacharyya_arc_lb(const FamilyDescriptor& fam, const ParamVector& theta0,
                            const ParamVector& theta1) {
    if (!fam.bhattacharyya_coefficient)
        throw CapabilityError(fam.name + ": Bhattacharyya coefficient not declared");
    const double c = std::clamp(fam.bhattacharyya_coefficient(theta0, theta1), -1.0, 1.0);
    return 2.0 * std::acos(c);
}

}  // namespace frao
