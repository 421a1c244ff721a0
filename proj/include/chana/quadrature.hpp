#pragma once

#include <vector>

namespace chana {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [0,1] (Golub-Welsch).
QuadratureRule gauss_legendre(int n);

/// Clenshaw-Curtis weights on the P+1 Chebyshev-Lobatto nodes y_i = cos(pi i/P),
/// exact for polynomials of degree <= P. Integrates over [-1,1].
std::vector<double> clenshaw_curtis_weights(int P);

}  // namespace chana
