#pragma once

#include "frao/families.hpp"

namespace frao {

// Pairwise kernels over a point list. The parallel variants partition the
// flattened pair index range across OpenMP threads; every pair is computed
// by a pure function into its own slot, so parallel output is bit-identical
// to the serial reference.

using PairFn = std::function<double(const ParamVector&, const ParamVector&)>;

// Full n x n matrix (row-major), zero diagonal, symmetric fill from the
// upper triangle. Serial reference implementation.
std::vector<double> pairwise_matrix_serial(const PairFn& fn, const std::vector<ParamVector>& points);

// OpenMP variant; falls back to the serial loop when built without OpenMP.
std::vector<double> pairwise_matrix_parallel(const PairFn& fn,
                                             const std::vector<ParamVector>& points);

std::vector<double> distance_matrix(const FamilyDescriptor& fam,
                                    const std::vector<ParamVector>& points, bool parallel);

int max_threads();

}  // namespace frao
