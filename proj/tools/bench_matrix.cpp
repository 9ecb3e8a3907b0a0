// Benchmark: serial reference vs OpenMP pairwise distance-matrix kernels.
// Verifies that the parallel output is bit-identical before timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "frao/batch.hpp"
#include "frao/registry.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<frao::ParamVector> random_spd_points(int n, int d, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<frao::ParamVector> pts;
    pts.reserve(n);
    for (int k = 0; k < n; ++k) {
        frao::Matrix a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
        frao::Matrix g = a * a.transpose();
        for (int i = 0; i < d; ++i) g(i, i) += d;
        pts.push_back(frao::sym_to_coords(frao::SymMatrix::from_dense(g)));
    }
    return pts;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace

int main() {
    std::printf("pairwise spd distance matrix, %d thread(s) available\n", frao::max_threads());
    std::printf("%8s %6s %12s %12s %9s %10s\n", "points", "dim", "serial[s]", "parallel[s]",
                "speedup", "max|diff|");

    for (int d : {4, 8, 16}) {
        const frao::FamilyDescriptor fam = frao::make_family("spd(" + std::to_string(d) + ")");
        for (int n : {64, 128, 256}) {
            const auto pts = random_spd_points(n, d, 1234u + d);

            auto t0 = Clock::now();
            const auto serial = frao::distance_matrix(fam, pts, /*parallel=*/false);
            const double ts = seconds_since(t0);

            t0 = Clock::now();
            const auto parallel = frao::distance_matrix(fam, pts, /*parallel=*/true);
            const double tp = seconds_since(t0);

            std::printf("%8d %6d %12.4f %12.4f %8.2fx %10.3g\n", n, d, ts, tp, ts / tp,
                        max_abs_diff(serial, parallel));
        }
    }
    return 0;
}
