#pragma once

#include <functional>

namespace frao {

// Adaptive Simpson quadrature with Richardson acceptance |S2-S1|/15 <= tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 50);

}  // namespace frao
