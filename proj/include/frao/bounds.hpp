#pragma once

#include <cstdint>

#include "frao/families.hpp"

namespace frao {

// Calvo-Oller style embedding parameters; (0,1) is the classical
// multivariate-normal embedding and keeps the corner entry at 1.
struct CalvoOllerEmbedding {
    double alpha = 0.0;
    double beta = 1.0;
};

// A lower/upper pair with method provenance. Construction checks
// lower <= upper; a crossing indicates a formula bug upstream.
struct BoundsPair {
    double lower = 0.0;
    double upper = 0.0;
    std::string lower_method;
    std::string upper_method;
};
BoundsPair make_bounds_pair(double lower, double upper, std::string lower_method,
                            std::string upper_method);

// Hypercube of corner parameter mixes between theta0 (all-zero label) and
// theta1 (all-one label); each edge varies exactly one coordinate and is
// weighted by the 1D Fisher-Rao distance of the axis-restricted submodel.
class HypercubeGraph {
  public:
    HypercubeGraph(const FamilyDescriptor& fam, ParamVector theta0, ParamVector theta1);

    int dim() const { return m_; }
    ParamVector corner(uint32_t bits) const;
    // weight of the edge along `axis` leaving node `bits`; memoized
    double edge_weight(uint32_t bits, int axis);
    double accumulated_quadrature_tol() const { return quad_tol_; }

    // Dijkstra with a binary heap from corner 0 to corner 2^m - 1.
    double shortest_path();

  private:
    const FamilyDescriptor& fam_;
    ParamVector theta0_, theta1_;
    int m_;
    std::vector<double> weight_cache_;  // keyed by (bits & ~axis_bit, axis)
    double quad_tol_ = 0.0;
};

// Shortest hypercube path value; an upper bound on the Fisher-Rao distance
// because every edge is a realizable curve and paths concatenate. Any
// quadrature tolerance spent on edge weights is added to the result.
double fisher_manhattan_ub(const FamilyDescriptor& fam, const ParamVector& theta0,
                           const ParamVector& theta1);

// sqrt((xi1-xi0) . (grad F(xi1) - grad F(xi0))); an upper bound on the
// Fisher-Rao distance of a Hessian metric, tight at infinitesimal scale.
double jeffreys_bregman_ub(const BregmanGenerator& gen, const ParamVector& xi0,
                           const ParamVector& xi1);

// det(V)^alpha [[V + beta m m^T, beta m], [beta m^T, 1]].
SpdMatrix calvo_oller_embed(const EllipticalParams& p, const CalvoOllerEmbedding& e = {});

// Exact block inverse of the embedding on its image (corner normalized to 1).
EllipticalParams calvo_oller_retract(const SpdMatrix& p, const CalvoOllerEmbedding& e = {});

// SPD cone distance between the embeddings; a lower bound on the elliptical
// Fisher-Rao distance, exact on the centered (totally geodesic) submanifold.
double calvo_oller_lb(const EllipticalParams& p0, const EllipticalParams& p1,
                      const CalvoOllerEmbedding& e = {});

// Birkhoff projective distance between the embeddings. A metric distance on
// parameters: the corner entry pins the projective scale.
double bco_distance(const EllipticalParams& p0, const EllipticalParams& p1,
                    const CalvoOllerEmbedding& e = {});

struct PullbackCurveResult {
    Curve curve;  // parameter-space curve in packed (m, V) coordinates
    double length = 0.0;
    LengthMethod method = LengthMethod::FiniteDifference;
};

// Sample the Birkhoff geodesic between the embeddings at `segments_t` points,
// retract each sample, and measure the resulting parameter curve. The length
// of a realizable curve: an upper bound on the Fisher-Rao distance. The
// segment measure defaults to Jeffreys when the family declares it (each
// segment then upper-bounds its exact distance), else finite differences.
PullbackCurveResult pullback_birkhoff_curve(const FamilyDescriptor& fam, const EllipticalParams& p0,
                                            const EllipticalParams& p1, int segments_t,
                                            const CalvoOllerEmbedding& e = {});

// Length of the chart-straight curve between theta0 and theta1.
double lerp_curve_ub(const FamilyDescriptor& fam, const ParamVector& theta0,
                     const ParamVector& theta1, int segments_t,
                     LengthMethod method = LengthMethod::FiniteDifference);

// Hellinger distance on the simplex; lower bound via the (non totally
// geodesic) square-root embedding.
double hellinger_lb(const Vec& p, const Vec& q);

// Generic lower bound from the square-root embedding into the radius-2
// sphere of L2: 2 arccos(BC). Valid for any family with a closed-form
// Bhattacharyya coefficient; tight at infinitesimal scale.
double bhattacharyya_arc_lb(const FamilyDescriptor& fam, const ParamVector& theta0,
                            const ParamVector& theta1);

}  // namespace frao
