#pragma once

#include <Eigen/Dense>

namespace ising {

struct PfaffianValue {
    double log_abs;  // -inf when the Pfaffian vanishes
    int sign;        // +1, -1, or 0
};

// Pfaffian of a real skew-symmetric matrix by Parlett-Reid elimination with
// partial pivoting. Trailing updates are deferred over panels of
// `block_size` steps and applied as matrix products. Odd dimension gives 0.
PfaffianValue pfaffian(Eigen::MatrixXd a, int block_size = 48);

// Reference implementation without blocking, used to cross-check.
PfaffianValue pfaffian_unblocked(Eigen::MatrixXd a);

}  // namespace ising
