#include "frao/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frao {

namespace {

constexpr double kCbrtEps = 6.055454452393343e-06;  // eps^(1/3)

double fd_step(double h, double coord) {
    const double base = h > 0.0 ? h : kCbrtEps;
    return base * std::max(1.0, std::fabs(coord));
}

void check_dim(const MetricField& g, const ParamVector& theta, const char* op) {
    if (static_cast<int>(theta.size()) != g.dim)
        throw InvalidInput(std::string(op) + ": point length does not match metric dimension");
    for (double v : theta)
        if (!std::isfinite(v)) throw DomainError(std::string(op) + ": non-finite coordinate");
}

// d g / d theta_k by central differences.
SymMatrix metric_partial(const MetricField& g, const ParamVector& theta, int k, double h) {
    const double step = fd_step(h, theta[k]);
    ParamVector plus = theta;
    ParamVector minus = theta;
    plus[k] += step;
    minus[k] -= step;
    const SymMatrix gp = g.eval(plus).sym();
    const SymMatrix gm = g.eval(minus).sym();
    return (gp - gm).scaled(0.5 / step);
}

}  // namespace

ChristoffelTensor::ChristoffelTensor(int dim)
    : dim_(dim), data_(static_cast<size_t>(dim) * dim * (dim + 1) / 2, 0.0) {
    if (dim <= 0) throw InvalidInput("ChristoffelTensor: dimension must be positive");
}

size_t ChristoffelTensor::index(int k, int i, int j) const {
    if (i > j) std::swap(i, j);
    // triangle index of (i,j), i <= j
    const size_t tri = static_cast<size_t>(i) * dim_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
    return static_cast<size_t>(k) * (static_cast<size_t>(dim_) * (dim_ + 1) / 2) + tri;
}

double ChristoffelTensor::get(int k, int i, int j) const { return data_[index(k, i, j)]; }

void ChristoffelTensor::set(int k, int i, int j, double v) { data_[index(k, i, j)] = v; }

double length_element(const MetricField& g, const ParamVector& theta, const Vec& dtheta) {
    check_dim(g, theta, "length_element");
    if (dtheta.size() != theta.size()) throw InvalidInput("length_element: direction length mismatch");
    const SpdMatrix gm = g.eval(theta);
    const double q = dot(dtheta, gm.sym().apply(dtheta));
    return std::sqrt(std::max(0.0, q));
}

ChristoffelTensor christoffels(const MetricField& g, const ParamVector& theta, double h) {
    check_dim(g, theta, "christoffels");
    const int m = g.dim;

    std::vector<SymMatrix> dg;  // dg[k] = d g / d theta_k
    dg.reserve(m);
    for (int k = 0; k < m; ++k) dg.push_back(metric_partial(g, theta, k, h));

    const SpdMatrix g0 = g.eval(theta);

    // first kind, lower (i<=j) triangle
    ChristoffelTensor first(m);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j)
                first.set(k, i, j, 0.5 * (dg[j](i, k) + dg[i](j, k) - dg[k](i, j)));

    // raise with G^{-1} via Cholesky solves
    ChristoffelTensor out(m);
    Vec rhs(m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            for (int k = 0; k < m; ++k) rhs[k] = first.get(k, i, j);
            Vec raised = chol_solve(g0.chol(), rhs);
            for (int k = 0; k < m; ++k) out.set(k, i, j, raised[k]);
        }
    }
    return out;
}

HessianTestResult hessian_metric_test(const MetricField& g, const std::vector<ParamVector>& samples,
                                      double h, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("hessian_metric_test: tol must be positive");
    HessianTestResult result;
    for (const ParamVector& theta : samples) {
        check_dim(g, theta, "hessian_metric_test");
        const int m = g.dim;
        const double scale = 1.0 + g.eval(theta).frobenius();
        std::vector<SymMatrix> dg;
        dg.reserve(m);
        for (int k = 0; k < m; ++k) dg.push_back(metric_partial(g, theta, k, h));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    const double violation = std::fabs(dg[k](i, j) - dg[j](i, k));
                    if (violation > result.worst) {
                        result.worst = violation;
                        result.index = {i, j, k};
                        result.at = theta;
                    }
                    if (violation > tol * scale) result.is_hessian = false;
                }
            }
        }
    }
    return result;
}

namespace {

struct ShootState {
    ParamVector pos;
    Vec vel;
};

Vec geodesic_acceleration(const MetricField& g, const ParamVector& pos, const Vec& vel) {
    const ChristoffelTensor gamma = christoffels(g, pos);
    const int m = g.dim;
    Vec acc(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            s += gamma.get(k, i, i) * vel[i] * vel[i];
            for (int j = i + 1; j < m; ++j) s += 2.0 * gamma.get(k, i, j) * vel[i] * vel[j];
        }
        acc[k] = -s;
    }
    return acc;
}

// One RK4 step of the coupled (position, velocity) system.
ShootState rk4_step(const MetricField& g, const ShootState& s, double dt) {
    const Vec k1p = s.vel;
    const Vec k1v = geodesic_acceleration(g, s.pos, s.vel);

    const Vec k2p = s.vel + 0.5 * dt * k1v;
    const Vec k2v = geodesic_acceleration(g, s.pos + 0.5 * dt * k1p, k2p);

    const Vec k3p = s.vel + 0.5 * dt * k2v;
    const Vec k3v = geodesic_acceleration(g, s.pos + 0.5 * dt * k2p, k3p);

    const Vec k4p = s.vel + dt * k3v;
    const Vec k4v = geodesic_acceleration(g, s.pos + dt * k3p, k4p);

    ShootState out;
    out.pos = s.pos + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    out.vel = s.vel + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    return out;
}

std::vector<ParamVector> integrate_ivp(const MetricField& g, const ParamVector& theta0, const Vec& v0,
                                       int steps) {
    std::vector<ParamVector> traj;
    traj.reserve(steps + 1);
    ShootState s{theta0, v0};
    traj.push_back(s.pos);
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        s = rk4_step(g, s, dt);
        traj.push_back(s.pos);
    }
    return traj;
}

ParamVector shoot_endpoint(const MetricField& g, const ParamVector& theta0, const Vec& v0, int steps) {
    ShootState s{theta0, v0};
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) s = rk4_step(g, s, dt);
    return s.pos;
}

// A diverging trajectory may leave the region where the metric evaluates;
// report that as a failed shot rather than letting the metric error escape.
bool try_shoot_residual(const MetricField& g, const ParamVector& theta0, const Vec& v0, int steps,
                        const ParamVector& theta1, Vec& residual) {
    try {
        residual = shoot_endpoint(g, theta0, v0, steps) - theta1;
    } catch (const Error&) {
        return false;
    }
    for (double v : residual)
        if (!std::isfinite(v)) return false;
    return true;
}

// Newton on the shooting residual at a fixed integration resolution.
// Returns true when the residual dropped below tol within the iteration
// budget; v0 and iters are updated in place.
bool newton_shoot(const MetricField& g, const ParamVector& theta0, const ParamVector& theta1,
                  Vec& v0, int steps, double tol, int budget, int& iters) {
    const int m = g.dim;
    Vec res;
    if (!try_shoot_residual(g, theta0, v0, steps, theta1, res)) return false;
    double rn = norm2(res);
    while (budget-- > 0) {
        if (rn <= tol) return true;
        ++iters;
        Matrix jac(m, m);
        for (int j = 0; j < m; ++j) {
            const double hj = 1e-6 * (1.0 + std::fabs(v0[j]));
            Vec vp = v0;
            vp[j] += hj;
            Vec rp;
            if (!try_shoot_residual(g, theta0, vp, steps, theta1, rp)) return false;
            for (int i = 0; i < m; ++i) jac(i, j) = (rp[i] - res[i]) / hj;
        }
        Vec delta = solve_dense(jac, res);
        // backtracking in case the full Newton step overshoots
        double scale = 1.0;
        for (int bt = 0; bt < 12; ++bt) {
            Vec trial = v0 - scale * delta;
            Vec rtrial;
            const bool ok = try_shoot_residual(g, theta0, trial, steps, theta1, rtrial);
            if (ok) {
                const double rtn = norm2(rtrial);
                if (rtn < rn || rtn <= tol) {
                    v0 = std::move(trial);
                    res = std::move(rtrial);
                    rn = rtn;
                    break;
                }
            }
            scale *= 0.5;
            if (bt == 11) return false;  // stalled
        }
    }
    return rn <= tol;
}

}  // namespace

GeodesicBvpResult geodesic_bvp_oracle(const MetricField& g, const ParamVector& theta0,
                                      const ParamVector& theta1, int steps) {
    check_dim(g, theta0, "geodesic_bvp_oracle");
    check_dim(g, theta1, "geodesic_bvp_oracle");
    if (g.dim > 3) throw InvalidInput("geodesic_bvp_oracle: oracle regime is dim <= 3");
    if (steps < 8) throw InvalidInput("geodesic_bvp_oracle: steps too small");

    const double tol = 1e-8;
    Vec v0 = theta1 - theta0;
    int iters = 0;

    // Converge on a coarse grid first, then polish at full resolution.
    const int coarse = std::min(steps, 128);
    newton_shoot(g, theta0, theta1, v0, coarse, tol, 60, iters);
    const bool ok = newton_shoot(g, theta0, theta1, v0, steps, tol, 100 - std::min(iters, 60), iters);
    if (!ok || iters > 100)
        throw NumericalFailure(
            "geodesic_bvp_oracle: Newton shooting did not converge; retry with more steps or closer "
            "endpoints");

    GeodesicBvpResult out;
    out.samples = integrate_ivp(g, theta0, v0, steps);
    out.newton_iterations = iters;

    // midpoint-rule finite-difference length of the sampled polyline
    double len = 0.0;
    for (int i = 0; i < steps; ++i) {
        const Vec d = out.samples[i + 1] - out.samples[i];
        const ParamVector mid = 0.5 * (out.samples[i] + out.samples[i + 1]);
        len += length_element(g, mid, d);
    }
    out.length = len;

    auto samples = out.samples;
    const int n = steps;
    out.curve.kind = CurveKind::Geodesic;
    out.curve.map = [samples, n](double t) {
        const double u = std::clamp(t, 0.0, 1.0) * n;
        const int i = std::min(static_cast<int>(u), n - 1);
        const double f = u - i;
        return (1.0 - f) * samples[i] + f * samples[i + 1];
    };
    return out;
}

}  // namespace frao
