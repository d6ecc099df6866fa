#include "ising/pfaffian.hpp"

#include <cmath>
#include <limits>

#include "ising/error.hpp"

namespace ising {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_square(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidInput, "Pfaffian of a non-square matrix");
}

void swap_symmetric(Eigen::MatrixXd& a, Eigen::Index i, Eigen::Index j) {
    a.row(i).swap(a.row(j));
    a.col(i).swap(a.col(j));
}

}  // namespace

PfaffianValue pfaffian_unblocked(Eigen::MatrixXd a) {
    check_square(a);
    const Eigen::Index n = a.rows();
    if (n % 2) return {kNegInf, 0};
    double log_abs = 0.0;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index p;
        const double amax = a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&p);
        if (amax == 0.0) return {kNegInf, 0};
        if (p != 0) {
            swap_symmetric(a, k + 1, k + 1 + p);
            sign = -sign;
        }
        const double akk1 = a(k, k + 1);
        log_abs += std::log(std::abs(akk1));
        if (akk1 < 0) sign = -sign;
        const Eigen::Index rest = n - k - 2;
        if (rest == 0) break;
        Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / akk1;
        Eigen::VectorXd v = a.row(k + 1).tail(rest).transpose();
        a.bottomRightCorner(rest, rest).noalias() += v * tau.transpose() - tau * v.transpose();
    }
    return {log_abs, sign};
}

PfaffianValue pfaffian(Eigen::MatrixXd a, int block_size) {
    check_square(a);
    const Eigen::Index n = a.rows();
    if (n % 2) return {kNegInf, 0};
    if (block_size < 1) block_size = 1;
    double log_abs = 0.0;
    int sign = 1;

    // Deferred rank-2 updates: true(A) = A + V U^T - U V^T on the trailing block.
    Eigen::MatrixXd u(n, block_size), v(n, block_size);
    Eigen::VectorXd ck(n), ck1(n);
    Eigen::Index k = 0;
    while (k < n) {
        u.setZero();
        v.setZero();
        Eigen::Index m = 0;
        while (m < block_size && k < n) {
            const Eigen::Index len = n - k - 1;
            ck.head(len) = a.col(k).tail(len);
            if (m > 0) {
                ck.head(len).noalias() += v.block(k + 1, 0, len, m) * u.row(k).head(m).transpose();
                ck.head(len).noalias() -= u.block(k + 1, 0, len, m) * v.row(k).head(m).transpose();
            }
            Eigen::Index p;
            const double amax = ck.head(len).cwiseAbs().maxCoeff(&p);
            if (amax == 0.0) return {kNegInf, 0};
            if (p != 0) {
                const Eigen::Index r = k + 1 + p;
                swap_symmetric(a, k + 1, r);
                u.row(k + 1).swap(u.row(r));
                v.row(k + 1).swap(v.row(r));
                std::swap(ck(0), ck(p));
                sign = -sign;
            }
            const double pivot = ck(0);  // true A(k+1, k); A(k, k+1) = -pivot
            log_abs += std::log(std::abs(pivot));
            if (-pivot < 0) sign = -sign;
            const Eigen::Index rest = n - k - 2;
            if (rest > 0) {
                ck1.head(rest) = a.col(k + 1).tail(rest);
                if (m > 0) {
                    ck1.head(rest).noalias() += v.block(k + 2, 0, rest, m) * u.row(k + 1).head(m).transpose();
                    ck1.head(rest).noalias() -= u.block(k + 2, 0, rest, m) * v.row(k + 1).head(m).transpose();
                }
                u.col(m).segment(k + 2, rest) = ck.segment(1, rest) / pivot;
                v.col(m).segment(k + 2, rest) = -ck1.head(rest);
                ++m;
            }
            k += 2;
        }
        if (m > 0 && k < n) {
            const Eigen::Index rest = n - k;
            auto trailing = a.bottomRightCorner(rest, rest);
            trailing.noalias() += v.block(k, 0, rest, m) * u.block(k, 0, rest, m).transpose();
            trailing.noalias() -= u.block(k, 0, rest, m) * v.block(k, 0, rest, m).transpose();
        }
    }
    return {log_abs, sign};
}

}  // namespace ising
