#pragma once

#include <functional>
#include <vector>

namespace arps {

/// Gaver-Stehfest inversion of a real-valued Laplace transform:
///   f(t) ~ ln2/t sum_{k=1}^{N} V_k F(k ln2 / t).
/// The weights alternate in sign and grow like 10^(0.4 N), so N is limited
/// by double precision in the transform; 14 nodes is the default and the
/// result is cross-checked against a second node count.
struct StehfestOptions {
    int nodes = 14;
    int check_nodes = 12;
    /// Accepted |f_N - f_check| relative to |f_N|.
    double rel_tol = 5e-3;
};

struct LaplaceInversion {
    double value;
    double check_value;
    int nodes;
    bool approximate = true;
};

std::vector<double> stehfest_weights(int nodes);

LaplaceInversion laplace_invert(const std::function<double(double)>& transform, double t,
                                const StehfestOptions& options = {});

}  // namespace arps
