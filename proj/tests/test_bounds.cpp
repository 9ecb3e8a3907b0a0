#include <doctest.h>

#include <cmath>
#include <random>

#include "frao/bounds.hpp"
#include "frao/quadrature.hpp"
#include "frao/registry.hpp"
#include "helpers.hpp"

using namespace frao;
using testutil::random_mvn_params;
using testutil::random_normal_params;
using testutil::random_simplex;
using testutil::random_spd;

TEST_CASE("fisher_manhattan_ub: identical endpoints and mu-fixed equality") {
    const FamilyDescriptor fam = make_family("normal1d");
    CHECK(fisher_manhattan_ub(fam, {0.4, 1.2}, {0.4, 1.2}) == doctest::Approx(0.0));

    // with mu0 = mu1 the sigma edge is itself a geodesic
    const double exact = std::sqrt(2.0) * std::fabs(std::log(2.5 / 0.8));
    CHECK(fisher_manhattan_ub(fam, {0.7, 0.8}, {0.7, 2.5}) ==
          doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("fisher_manhattan_ub: upper bound and symmetry on random normal pairs") {
    const FamilyDescriptor fam = make_family("normal1d");
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const ParamVector a = random_normal_params(rng);
        const ParamVector b = random_normal_params(rng);
        const double ub = fisher_manhattan_ub(fam, a, b);
        CHECK(ub >= fam.distance(a, b) - 1e-12);
        CHECK(ub == doctest::Approx(fisher_manhattan_ub(fam, b, a)).epsilon(1e-12));
    }
}

namespace {

// stochastically independent product of m exponential-like scale factors
FamilyDescriptor separable_scale_model(int m) {
    FamilyDescriptor f;
    f.name = "separable-scale";
    f.param_dim = m;
    f.in_domain = [](const ParamVector& t) {
        for (double v : t)
            if (!(v > 0.0)) return false;
        return true;
    };
    f.metric.dim = m;
    f.metric.eval = [m](const ParamVector& t) {
        Vec diag(m);
        for (int i = 0; i < m; ++i) diag[i] = 1.0 / (t[i] * t[i]);
        return SpdMatrix::diagonal(diag);
    };
    f.closed_axis_distance = [](const ParamVector&, int, double from, double to) {
        return std::fabs(std::log(to / from));
    };
    f.closed_distance = [m](const ParamVector& a, const ParamVector& b) {
        std::vector<double> per(m);
        for (int i = 0; i < m; ++i) per[i] = std::fabs(std::log(b[i] / a[i]));
        return product_distance(per);
    };
    return f;
}

}  // namespace

TEST_CASE("fisher_manhattan_ub: separable model, l1 >= l2, permutation covariance") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    const int m = 6;
    const FamilyDescriptor fam = separable_scale_model(m);
    for (int trial = 0; trial < 20; ++trial) {
        ParamVector a(m), b(m);
        for (int i = 0; i < m; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        const double ub = fisher_manhattan_ub(fam, a, b);
        CHECK(ub >= fam.distance(a, b) - 1e-12);  // l1 >= l2

        // permuting coordinates permutes the hypercube; the value is unchanged
        ParamVector ap(m), bp(m);
        for (int i = 0; i < m; ++i) {
            ap[i] = a[(i + 2) % m];
            bp[i] = b[(i + 2) % m];
        }
        CHECK(fisher_manhattan_ub(fam, ap, bp) == doctest::Approx(ub).epsilon(1e-12));
    }
}

TEST_CASE("fisher_manhattan_ub: quadrature fallback stays an upper bound") {
    // spd(2) axis distances have no closed form; weights come from Simpson
    const FamilyDescriptor fam = make_family("spd(2)");
    const ParamVector a = {1.5, 1.0, 1.0};
    const ParamVector b = {2.0, 1.0, 1.0};
    const double ub = fisher_manhattan_ub(fam, a, b);
    CHECK(ub >= fam.distance(a, b) - 1e-9);
}

TEST_CASE("hypercube corners: all-zero label carries theta0") {
    const FamilyDescriptor fam = separable_scale_model(3);
    HypercubeGraph cube(fam, {1.0, 2.0, 3.0}, {4.0, 5.0, 6.0});
    CHECK(cube.corner(0) == ParamVector{1.0, 2.0, 3.0});
    CHECK(cube.corner(7) == ParamVector{4.0, 5.0, 6.0});
    CHECK(cube.corner(2) == ParamVector{1.0, 5.0, 3.0});
}

TEST_CASE("jeffreys_bregman_ub: zero at equal points, bound and tightness on normals") {
    const BregmanGenerator gen = normal1d_natural_generator();
    const FamilyDescriptor fam = make_family("normal1d");
    const Vec xi = normal1d_natural_from_musigma(0.2, 0.9);
    CHECK(jeffreys_bregman_ub(gen, xi, xi) == doctest::Approx(0.0));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const ParamVector a = random_normal_params(rng);
        const ParamVector b = random_normal_params(rng);
        const double ub = jeffreys_bregman_ub(gen, normal1d_natural_from_musigma(a[0], a[1]),
                                              normal1d_natural_from_musigma(b[0], b[1]));
        CHECK(ub >= fam.distance(a, b) - 1e-12);
    }

    // ratio <= 1.01 once the exact distance is 1e-2
    for (int trial = 0; trial < 20; ++trial) {
        const ParamVector a = random_normal_params(rng);
        ParamVector dir = random_normal_params(rng);
        dir[0] -= a[0];
        dir[1] -= a[1];
        // scale the direction so the exact distance is 1e-2
        double lo = 0.0, hi = 1.0;
        auto dist_at = [&](double s) {
            return fam.distance(a, {a[0] + s * dir[0], a[1] + s * dir[1]});
        };
        while (dist_at(hi) < 1e-2) hi *= 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (dist_at(mid) < 1e-2 ? lo : hi) = mid;
        }
        const ParamVector b = {a[0] + hi * dir[0], a[1] + hi * dir[1]};
        const double exact = fam.distance(a, b);
        const double ub = jeffreys_bregman_ub(gen, normal1d_natural_from_musigma(a[0], a[1]),
                                              normal1d_natural_from_musigma(b[0], b[1]));
        CHECK(ub / exact <= 1.01);
        CHECK(ub >= exact - 1e-14);
    }
}

TEST_CASE("jeffreys_bregman_ub: S_F equals the energy of the straight dual segment") {
    const BregmanGenerator gen = normal1d_natural_generator();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const ParamVector a = random_normal_params(rng);
        const ParamVector b = random_normal_params(rng);
        const Vec xi0 = normal1d_natural_from_musigma(a[0], a[1]);
        const Vec xi1 = normal1d_natural_from_musigma(b[0], b[1]);
        const Vec d = xi1 - xi0;
        const double energy = adaptive_simpson(
            [&](double t) {
                const Vec xi = xi0 + t * d;
                return dot(d, gen.hessian(xi).apply(d));
            },
            0.0, 1.0, 1e-9);
        const double sf = jeffreys_bregman_ub(gen, xi0, xi1);
        CHECK(sf * sf == doctest::Approx(energy).epsilon(1e-6));
    }
}

TEST_CASE("calvo_oller_embed: block structure, round trip, d=1 example") {
    std::mt19937_64 rng(13);
    const SpdMatrix v = random_spd(rng, 2);
    const EllipticalParams centered{{0.0, 0.0}, v};
    const SpdMatrix e0 = calvo_oller_embed(centered);
    CHECK(e0(0, 0) == doctest::Approx(v(0, 0)));
    CHECK(e0(2, 2) == doctest::Approx(1.0));
    CHECK(e0(0, 2) == doctest::Approx(0.0));

    const EllipticalParams p{{0.4, -1.1}, v};
    const EllipticalParams back = calvo_oller_retract(calvo_oller_embed(p));
    CHECK(back.location[0] == doctest::Approx(p.location[0]).epsilon(1e-13));
    CHECK(back.location[1] == doctest::Approx(p.location[1]).epsilon(1e-13));
    CHECK((back.scale.sym() - v.sym()).frobenius() <= 1e-12 * v.frobenius());

    const SpdMatrix d1 = calvo_oller_embed({{1.0}, SpdMatrix::diagonal({1.0})});
    CHECK(d1(0, 0) == doctest::Approx(2.0));
    CHECK(d1(0, 1) == doctest::Approx(1.0));
    CHECK(d1(1, 1) == doctest::Approx(1.0));

    // alpha/beta variants keep the round trip on the image; beta in (0,1]
    // keeps the Schur complement V + beta(1-beta) m m^T positive definite
    const CalvoOllerEmbedding e{0.25, 0.7};
    const EllipticalParams back2 = calvo_oller_retract(calvo_oller_embed(p, e), e);
    CHECK(back2.location[0] == doctest::Approx(p.location[0]).epsilon(1e-12));
    CHECK((back2.scale.sym() - v.sym()).frobenius() <= 1e-11 * v.frobenius());
}

TEST_CASE("calvo_oller_lb: centered case is exact, general case sandwiched") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const SpdMatrix v0 = random_spd(rng, 2);
        const SpdMatrix v1 = random_spd(rng, 2);
        const EllipticalParams c0{{0.0, 0.0}, v0};
        const EllipticalParams c1{{0.0, 0.0}, v1};
        CHECK(calvo_oller_lb(c0, c1) == doctest::Approx(spd_distance(v0, v1)).epsilon(1e-9));
    }
    for (int trial = 0; trial < 200; ++trial) {
        const EllipticalParams p0 = random_mvn_params(rng, 2);
        const EllipticalParams p1 = random_mvn_params(rng, 2);
        const double lb = calvo_oller_lb(p0, p1);
        const double ub =
            std::sqrt(mvn_jeffreys(p0.location, p0.scale, p1.location, p1.scale));
        CHECK(lb <= ub + 1e-9);
        CHECK(calvo_oller_lb(p0, p0) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("calvo_oller_lb: ratio to exact increases toward 1 as separation shrinks") {
    // exact reference: centered pairs, where the SPD distance is the truth,
    // perturbed location pulled toward zero at three scales
    const FamilyDescriptor fam = make_family("normal1d");
    const ParamVector a = {0.0, 1.0};
    double prev_ratio = 0.0;
    for (double sep : {1e-1, 1e-2, 1e-3}) {
        const ParamVector b = {sep, 1.0 + sep};
        const double exact = fam.distance(a, b);
        const EllipticalParams p0{{a[0]}, SpdMatrix::diagonal({a[1] * a[1]})};
        const EllipticalParams p1{{b[0]}, SpdMatrix::diagonal({b[1] * b[1]})};
        const double ratio = calvo_oller_lb(p0, p1) / exact;
        CHECK(ratio <= 1.0 + 1e-12);
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio >= 1.0 - 1e-4);
}

TEST_CASE("bco_distance: metric axioms on elliptical triples") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const EllipticalParams a = random_mvn_params(rng, 2);
        const EllipticalParams b = random_mvn_params(rng, 2);
        const EllipticalParams c = random_mvn_params(rng, 2);
        const double ab = bco_distance(a, b);
        const double ba = bco_distance(b, a);
        CHECK(std::fabs(ab - ba) <= 1e-11 * (1.0 + ab));
        CHECK(ab <= bco_distance(a, c) + bco_distance(c, b) + 1e-10);
        CHECK(ab > 0.0);
        CHECK(bco_distance(a, a) <= 1e-12);
    }
}

TEST_CASE("bco_distance: centered ray case has the augmented unit eigenvalue") {
    std::mt19937_64 rng(23);
    const SpdMatrix v0 = random_spd(rng, 3);
    const SpdMatrix v1 = SpdMatrix(v0.sym().scaled(std::exp(1.0)));
    const EllipticalParams p0{{0.0, 0.0, 0.0}, v0};
    const EllipticalParams p1{{0.0, 0.0, 0.0}, v1};
    // embedded spectrum {e,...,e,1}: distance log(e/1) = 1, not 0
    CHECK(bco_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("bco_distance: invariance under joint affine maps") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const EllipticalParams p0 = random_mvn_params(rng, 2);
        const EllipticalParams p1 = random_mvn_params(rng, 2);
        const Matrix a = testutil::random_invertible(rng, 2);
        const Vec shift = {0.7, -0.2};
        auto transformed = [&](const EllipticalParams& p) {
            const SpdMatrix v =
                SpdMatrix(SymMatrix::from_dense(a * p.scale.sym().dense() * a.transpose()));
            return EllipticalParams{a.apply(p.location) + shift, v};
        };
        CHECK(bco_distance(transformed(p0), transformed(p1)) ==
              doctest::Approx(bco_distance(p0, p1)).epsilon(1e-9));
        CHECK(calvo_oller_lb(transformed(p0), transformed(p1)) ==
              doctest::Approx(calvo_oller_lb(p0, p1)).epsilon(1e-9));
    }
}

TEST_CASE("pullback_birkhoff_curve: endpoints retract exactly, LB <= length") {
    const FamilyDescriptor fam = make_family("mvn(2)");
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const EllipticalParams p0 = random_mvn_params(rng, 2);
        const EllipticalParams p1 = random_mvn_params(rng, 2);
        const auto res = pullback_birkhoff_curve(fam, p0, p1, 33);
        const ParamVector start = res.curve.map(0.0);
        const ParamVector end = res.curve.map(1.0);
        const ParamVector want0 = elliptical_to_coords(p0);
        const ParamVector want1 = elliptical_to_coords(p1);
        for (size_t i = 0; i < want0.size(); ++i) {
            CHECK(start[i] == doctest::Approx(want0[i]).epsilon(1e-10));
            CHECK(end[i] == doctest::Approx(want1[i]).epsilon(1e-10));
        }
        CHECK(calvo_oller_lb(p0, p1) <= res.length + 1e-9);
    }
}

TEST_CASE("pullback_birkhoff_curve: centered ray case approaches the SPD distance") {
    // on scalar multiples the retracted Birkhoff segment traces the Fisher-Rao
    // geodesic path itself, so its length converges to the exact distance
    const FamilyDescriptor fam = make_family("mvn(2)");
    const EllipticalParams p0{{0.0, 0.0}, SpdMatrix::diagonal({1.0, 2.0})};
    const EllipticalParams p1{{0.0, 0.0},
                              SpdMatrix(p0.scale.sym().scaled(std::exp(1.0)))};
    const double exact = spd_distance(p0.scale, p1.scale);
    double prev_gap = 1e100;
    for (int t_count : {5, 17, 65, 257}) {
        const double len = pullback_birkhoff_curve(fam, p0, p1, t_count).length;
        const double gap = std::fabs(len - exact);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-4 * exact);

    // general commuting pairs: still a valid upper bound
    const EllipticalParams q1{{0.0, 0.0}, SpdMatrix::diagonal({3.0, 0.7})};
    CHECK(pullback_birkhoff_curve(fam, p0, q1, 257).length >=
          spd_distance(p0.scale, q1.scale) - 1e-9);
}

TEST_CASE("lerp_curve_ub: zero case, normal ratio, SPD bound") {
    const FamilyDescriptor normal = make_family("normal1d");
    CHECK(lerp_curve_ub(normal, {0.1, 0.9}, {0.1, 0.9}, 16) == doctest::Approx(0.0));

    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const ParamVector a = random_normal_params(rng, 1.0, 0.6, 1.8);
        const ParamVector b = random_normal_params(rng, 1.0, 0.6, 1.8);
        const double exact = normal.distance(a, b);
        if (exact < 1e-6) continue;
        const double fd = lerp_curve_ub(normal, a, b, 512);
        CHECK(fd / exact >= 1.0 - 1e-3);
        // exact-segment measurement is a bound at any T by the triangle inequality
        const double seg = lerp_curve_ub(normal, a, b, 32, LengthMethod::ExactSegments);
        CHECK(seg >= exact - 1e-12);
    }

    const FamilyDescriptor spd2 = make_family("spd(2)");
    for (int trial = 0; trial < 25; ++trial) {
        const ParamVector a = sym_to_coords(random_spd(rng, 2).sym());
        const ParamVector b = sym_to_coords(random_spd(rng, 2).sym());
        const double exact = spd2.distance(a, b);
        const double seg = lerp_curve_ub(spd2, a, b, 64, LengthMethod::ExactSegments);
        CHECK(seg >= exact - 1e-12);
    }
}

TEST_CASE("hellinger_lb: inequality, limits, and the arccos comparison") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec p = random_simplex(rng, 5);
        const Vec q = random_simplex(rng, 5);
        CHECK(hellinger_lb(p, q) <= categorical_fisher_rao(p, q) + 1e-12);
    }
    // disjoint-support limit: LB -> 1, Fisher-Rao -> pi
    const double eps = 1e-12;
    const Vec p = {1.0 - eps, eps};
    const Vec q = {eps, 1.0 - eps};
    CHECK(hellinger_lb(p, q) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(categorical_fisher_rao(p, q) == doctest::Approx(M_PI).epsilon(1e-5));

    for (int i = 1; i <= 1000; ++i) {
        const double u = static_cast<double>(i) / 1000.0;
        CHECK(std::sqrt(1.0 - u) <= 2.0 * std::acos(u) + 1e-15);
    }
}

TEST_CASE("bhattacharyya_arc_lb: certified lower bound for normal and exponential") {
    const FamilyDescriptor normal = make_family("normal1d");
    const FamilyDescriptor expf = make_family("exponential");
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const ParamVector a = random_normal_params(rng);
        const ParamVector b = random_normal_params(rng);
        CHECK(bhattacharyya_arc_lb(normal, a, b) <= normal.distance(a, b) + 1e-10);
        const ParamVector ea = {u(rng)};
        const ParamVector eb = {u(rng)};
        CHECK(bhattacharyya_arc_lb(expf, ea, eb) <= expf.distance(ea, eb) + 1e-10);
    }
}

TEST_CASE("make_bounds_pair: crossing raises a diagnostic error") {
    CHECK_THROWS_AS(make_bounds_pair(2.0, 1.0, "lo", "hi"), NumericalFailure);
    const BoundsPair ok = make_bounds_pair(1.0, 2.0, "lo", "hi");
    CHECK(ok.lower == 1.0);
    CHECK(ok.upper == 2.0);
}
