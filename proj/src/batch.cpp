#include "frao/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frao {

namespace {

// upper-triangle pair (i, j), i < j, from a flat index
void unflatten(long long flat, int n, int& i, int& j) {
    // row i holds (n - 1 - i) pairs; walk rows (n is desk-scale)
    long long rem = flat;
    for (i = 0; i < n; ++i) {
        const long long row = n - 1 - i;
        if (rem < row) break;
        rem -= row;
    }
    j = i + 1 + static_cast<int>(rem);
}

}  // namespace

std::vector<double> pairwise_matrix_serial(const PairFn& fn,
                                           const std::vector<ParamVector>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = fn(points[i], points[j]);
            out[static_cast<size_t>(i) * n + j] = v;
            out[static_cast<size_t>(j) * n + i] = v;
        }
    }
    return out;
}

std::vector<double> pairwise_matrix_parallel(const PairFn& fn,
                                             const std::vector<ParamVector>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long flat = 0; flat < pairs; ++flat) {
        int i, j;
        unflatten(flat, n, i, j);
        const double v = fn(points[i], points[j]);
        out[static_cast<size_t>(i) * n + j] = v;
        out[static_cast<size_t>(j) * n + i] = v;
    }
    return out;
}

std::vector<double> distance_matrix(const FamilyDescriptor& fam,
                                    const std::vector<ParamVector>& points, bool parallel) {
    for (const auto& p : points) fam.require_domain(p);
    PairFn fn = [&fam](const ParamVector& a, const ParamVector& b) {
        return fam.distance(a, b);
    };
    return parallel ? pairwise_matrix_parallel(fn, points) : pairwise_matrix_serial(fn, points);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace frao
