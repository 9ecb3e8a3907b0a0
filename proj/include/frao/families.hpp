#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frao/manifold.hpp"
#include "frao/spd_geometry.hpp"

namespace frao {

// Constants of a univariate location-scale family with even standard
// density; the Fisher matrix in the (l,s) chart is (1/s^2) diag(4a, 4b-1).
struct LocationScaleConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;  // zero for even standard densities
};

// Constants (a, b) of the d-variate elliptical length element
//   ds^2 = 4a dm^T V^{-1} dm + 2b tr((V^{-1}dV)^2) + ((4b-1)/4) tr^2(V^{-1}dV).
struct EllipticalConstants {
    int d = 0;
    double a = 0.0;
    double b = 0.0;
};

struct EllipticalParams {
    Vec location;
    SpdMatrix scale;
};

// Convex potential on a chart: F, grad F, optionally hess F.
struct BregmanGenerator {
    std::function<double(const ParamVector&)> potential;
    std::function<Vec(const ParamVector&)> gradient;
    std::function<SymMatrix(const ParamVector&)> hessian;  // may be empty
    std::function<bool(const ParamVector&)> in_chart;
};

// Strictly monotone scalar map with optional closed-form inverse; when the
// inverse is absent it is recovered by bisection on the query bracket.
struct MonotoneMap {
    std::function<double(double)> h;
    std::function<double(double)> inverse;  // may be empty
};

// A statistical family: chart, domain predicate, Fisher metric, and
// capability slots. An empty std::function means the capability is not
// declared; the checked accessors below raise CapabilityError in that case.
struct FamilyDescriptor {
    std::string name;
    int param_dim = 0;
    std::function<bool(const ParamVector&)> in_domain;
    MetricField metric;

    std::function<double(const ParamVector&, const ParamVector&)> closed_distance;
    std::function<ParamVector(const ParamVector&, const ParamVector&, double)> closed_geodesic;
    bool geodesic_is_arclength = false;
    std::function<ParamVector(const ParamVector&, const ParamVector&, double)> closed_pregeodesic;
    std::function<double(const ParamVector&, const ParamVector&)> jeffreys_divergence;
    std::function<double(const ParamVector&, const ParamVector&)> kl_divergence;
    std::function<double(const ParamVector&, const ParamVector&)> bhattacharyya_coefficient;
    // closed-form 1D distance along one axis, other coordinates fixed at `at`
    std::function<double(const ParamVector& at, int axis, double from, double to)> closed_axis_distance;
    std::optional<BregmanGenerator> hessian_potential;

    // certified bound providers wired by the registry; consumed by approx
    std::function<double(const ParamVector&, const ParamVector&)> preferred_lower;
    std::function<double(const ParamVector&, const ParamVector&)> preferred_upper;

    void require_domain(const ParamVector& theta) const;
    double distance(const ParamVector& a, const ParamVector& b) const;
    ParamVector geodesic(const ParamVector& a, const ParamVector& b, double t) const;
    ParamVector pregeodesic(const ParamVector& a, const ParamVector& b, double t) const;
    double jeffreys(const ParamVector& a, const ParamVector& b) const;

    struct AxisDistanceResult {
        double value = 0.0;
        double quadrature_tol = 0.0;  // zero when a closed form was used
    };
    // Closed form when declared, else adaptive Simpson of sqrt(g_ii).
    AxisDistanceResult axis_distance(const ParamVector& at, int axis, double from, double to) const;
};

// --- generic 1D / product / simplex operations -----------------------------

// |h(theta1) - h(theta0)| for an antiderivative h of sqrt(g_11).
double distance_1d(const std::function<double(double)>& h_antideriv, double theta0, double theta1);

// l2 combination of per-factor distances.
double product_distance(const std::vector<double>& per_factor);

double bhattacharyya_coefficient_simplex(const Vec& p, const Vec& q);
double categorical_fisher_rao(const Vec& p, const Vec& q);
double categorical_hellinger(const Vec& p, const Vec& q);

// --- location-scale geometry ------------------------------------------------

// Distance in the Poincare upper half-plane, arccosh(1 + chi).
double uhp_distance(double x0, double y0, double x1, double y1);
// Constant-speed geodesic point at time t.
void uhp_geodesic(double x0, double y0, double x1, double y1, double t, double& x, double& y);

double location_scale_distance(const LocationScaleConstants& k, double l0, double s0, double l1,
                               double s1);
// Constant-speed geodesic in the (l,s) chart.
void location_scale_geodesic(const LocationScaleConstants& k, double l0, double s0, double l1,
                             double s1, double t, double& l, double& s);

// --- elliptical families ------------------------------------------------------

double elliptical_length_element(const EllipticalConstants& k, const EllipticalParams& at,
                                 const Vec& dm, const SymMatrix& dv);
EllipticalConstants mggd_constants(double k, int d);
EllipticalConstants mtd_constants(double k, int d);

// Fixed-location scale geodesic; generator-independent, equal to the SPD
// cone geodesic.
SpdMatrix elliptical_fixed_location_geodesic(const SpdMatrix& v0, const SpdMatrix& v1, double t);

double mvn_jeffreys(const Vec& mu0, const SpdMatrix& sigma0, const Vec& mu1,
                    const SpdMatrix& sigma1);
double mahalanobis(const Vec& m0, const Vec& m1, const SpdMatrix& v);
double scale_family_distance(double s0, double s1);
double wishart_distance(const SpdMatrix& v0, const SpdMatrix& v1, int d);

// --- separable Hessian metrics ----------------------------------------------

double separable_bregman_distance(const std::vector<MonotoneMap>& h, const ParamVector& theta,
                                  const ParamVector& theta_prime);
ParamVector quasi_arithmetic_geodesic(const std::vector<MonotoneMap>& h, const ParamVector& theta,
                                      const ParamVector& theta_prime, double t);

// --- packing helpers ----------------------------------------------------------

// Upper-triangle row-major packing of symmetric matrices into chart
// coordinates (v11, v12, ..., v1d, v22, ...).
Vec sym_to_coords(const SymMatrix& m);
SymMatrix coords_to_sym(int d, const Vec& coords, size_t offset = 0);
Vec elliptical_to_coords(const EllipticalParams& p);
EllipticalParams coords_to_elliptical(int d, const Vec& coords);

// --- curve length -------------------------------------------------------------

enum class LengthMethod { ExactSegments, Jeffreys, FiniteDifference };

// Discretized curve length over the uniform grid t_i = i/(T-1):
//   exact-segments    sum of closed-form segment distances,
//   jeffreys          sum of sqrt(D_J) per segment,
//   finite-difference sum of length_element(theta_i, theta_{i+1}-theta_i).
double curve_length(const FamilyDescriptor& fam, const Curve& c, int segments_t,
                    LengthMethod method);

// f-divergence variant: sqrt(2/f''(1) * I_f) per segment.
double curve_length_fdiv(const FamilyDescriptor& fam, const Curve& c, int segments_t,
                         const std::function<double(const ParamVector&, const ParamVector&)>& i_f,
                         double f_second_at_1);

// --- family factories -----------------------------------------------------------

FamilyDescriptor exponential_family();
FamilyDescriptor rayleigh_family();
FamilyDescriptor categorical_family(int d);
FamilyDescriptor normal1d_family();           // (mu, sigma)
FamilyDescriptor normal1d_variance_chart();   // (mu, sigma^2)
FamilyDescriptor normal1d_log_sigma_chart();  // (mu, log sigma)
FamilyDescriptor cauchy_family();
FamilyDescriptor student_family(double k);
FamilyDescriptor location_scale_family(const std::string& name, const LocationScaleConstants& k);
FamilyDescriptor spd_family(int d);           // centered-mvn scale cone
FamilyDescriptor centered_mvn_family(int d);
FamilyDescriptor wishart_family(int d);
FamilyDescriptor mvn_family(int d);
FamilyDescriptor mggd_family(double k, int d);
FamilyDescriptor mtd_family(double k, int d);

// Natural-parameter conversions for the univariate normal Hessian chart.
Vec normal1d_natural_from_musigma(double mu, double sigma);
void normal1d_musigma_from_natural(const Vec& xi, double& mu, double& sigma);
BregmanGenerator normal1d_natural_generator();

}  // namespace frao
