#pragma once

#include <string>

#include "frao/families.hpp"

namespace frao {

struct ApproxConfig {
    double epsilon = 1e-2;   // multiplicative target
    double delta = 1e-4;     // additive target
    int max_depth = 64;
    double abs_floor = 1e-12;  // distances below are treated as zero
};

enum class EstimateKind { Exact, Lower, Upper, Approx };

struct ErrorContract {
    enum class Type { None, Multiplicative, Additive };
    Type type = Type::None;
    double bound = 0.0;
};

// A distance value that always carries its provenance: how it was computed
// and what error contract it honors.
struct DistanceEstimate {
    double value = 0.0;
    EstimateKind kind = EstimateKind::Approx;
    ErrorContract contract;
    std::string method;
    int work = 0;  // recursion depth or segment count
};

const char* to_string(EstimateKind k);
const char* to_string(ErrorContract::Type t);

// Injected certified bounds; both must be valid on every subsegment and
// tight at infinitesimal scale for the recursions to terminate.
struct BoundProviders {
    std::function<double(const ParamVector&, const ParamVector&)> lower;
    std::function<double(const ParamVector&, const ParamVector&)> upper;
};

// (1/eps_t) * sqrt((theta_eps - theta0)^T G(theta0) (theta_eps - theta0))
// with theta_eps on the closed-form geodesic. An estimate, not a bound.
double metric_scaling_approx(const FamilyDescriptor& fam, const ParamVector& theta0,
                             const ParamVector& theta1, double eps_t);

// Average of the finite-difference estimate over k anchors s_i = (i-1)/k.
double metric_scaling_amortized(const FamilyDescriptor& fam, const ParamVector& theta0,
                                const ParamVector& theta1, double eps_t, int k);

// sqrt(2/f''(1) * I_f); the second-order expansion of any smooth
// f-divergence, intended for small separations.
double fdiv_small_scale(const FamilyDescriptor& fam, const ParamVector& theta0,
                        const ParamVector& theta1, double f_second_at_1);

// Recursive (1+epsilon)-approximation halving at the geodesic midpoint;
// requires an arclength-proportional closed-form geodesic.
DistanceEstimate approx_mult_geodesic(const FamilyDescriptor& fam, const ParamVector& theta0,
                                      const ParamVector& theta1, const ApproxConfig& cfg,
                                      const BoundProviders* bounds = nullptr);

// Variant splitting at the parameter midpoint and summing both halves;
// requires the chart-straight pregeodesic and a convex domain.
DistanceEstimate approx_mult_pregeodesic(const FamilyDescriptor& fam, const ParamVector& theta0,
                                         const ParamVector& theta1, const ApproxConfig& cfg,
                                         const BoundProviders* bounds = nullptr);

// Additive-error wrapper: run the multiplicative scheme with eps0 = 1,
// retarget eps = (1+eps0) * delta / rho_eps0, rerun.
DistanceEstimate approx_add(const FamilyDescriptor& fam, const ParamVector& theta0,
                            const ParamVector& theta1, double delta, const ApproxConfig& cfg,
                            const BoundProviders* bounds = nullptr);

}  // namespace frao
