#include "chana/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chana {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    // Jacobi matrix of the Legendre recurrence on [-1,1].
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);              // node on [-1,1]
        const double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
        rule.nodes[i] = 0.5 * (x + 1.0);                   // map to [0,1]
        rule.weights[i] = 0.5 * w;
    }
    return rule;
}

std::vector<double> clenshaw_curtis_weights(int P) {
    if (P < 1) throw std::invalid_argument("clenshaw_curtis_weights: P must be >= 1");
    // w_i = integral over [-1,1] of the Lagrange cardinal at y_i; computed via
    // the cosine expansion: int T_{2m} dy = 2/(1-4m^2).
    std::vector<double> w(P + 1, 0.0);
    for (int i = 0; i <= P; ++i) {
        double s = 1.0;
        for (int m = 1; m <= P / 2; ++m) {
            const double bm = (2 * m == P) ? 1.0 : 2.0;
            s += bm / (1.0 - 4.0 * m * m) *
                 std::cos(2.0 * m * i * std::numbers::pi / P);
        }
        w[i] = 2.0 * s / P;
        if (i == 0 || i == P) w[i] *= 0.5;
    }
    return w;
}

}  // namespace chana
