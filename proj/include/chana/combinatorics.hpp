#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace chana {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// One certified inequality family over an exhaustive finite range. All
// arithmetic in this module is exact; no floating point anywhere.
struct ExponentViolation {
    int total = 0;      // |alpha| (or i+j)
    int sub = 0;        // |beta| (or n+l)
    Rational exponent;  // computed tau-exponent
    Rational bound;     // claimed lower bound (0 or 1)
};

struct CertificateReport {
    std::string name;
    std::string range;
    long long instances = 0;
    std::vector<ExponentViolation> violations;
    Rational sup;              // for sup-type sweeps
    std::string attained_at;   // index attaining sup
    bool verified() const { return violations.empty(); }
};

BigInt factorial(int n);
BigInt binomial(const BigInt& n, const BigInt& k);

/// tau-exponent of the low coefficient b_l at (|alpha|, |beta|, r).
/// Requires |alpha| >= r and 0 < |beta| <= |alpha|/2.
Rational bl_exponent(int total, int sub, int r);
/// tau-exponent of the high coefficient b_h. Requires |alpha| >= r and
/// |alpha|/2 < |beta| <= |alpha|.
Rational bh_exponent(int total, int sub, int r);

/// Asserts bl_exponent >= 1 when |alpha - beta| >= r and >= 0 when
/// |alpha - beta| <= r-1, over all admissible (|alpha|, |beta|) with
/// |alpha| <= max_total.
CertificateReport verify_bl(int max_total, int r);
/// Asserts bh_exponent >= 1 when |beta| >= r+1 and >= 0 when |beta| <= r.
CertificateReport verify_bh(int max_total, int r);
/// Same exponent arithmetic with (|alpha|, |beta|) read as (i+j, n+l); the
/// low branch claims >= 1 iff i+j-n-l >= r, the high branch iff n+l >= r+1.
CertificateReport verify_curved_exponents(int max_total, int r);

/// Exact squares of the coefficients a_l, a_h (the values themselves carry a
/// square root, so squares are compared and reported).
Rational al_squared(int total, int sub, int r);
Rational ah_squared(int total, int sub, int r);
CertificateReport sup_al_squared(int max_total, int r);
CertificateReport sup_ah_squared(int max_total, int r);

using Index2 = std::array<int, 2>;

/// eps-exponent of the low-sum coefficient product; the claim is that it
/// never drops below -2. Requires |gamma| = 2, |kappa| = 1, beta <= alpha
/// component-wise, |beta| <= |alpha|/2.
Rational epsilon_exponent(Index2 alpha, Index2 beta, Index2 gamma,
                          Index2 kappa, int r);
bool verify_epsilon_bound(Index2 alpha, Index2 beta, Index2 gamma,
                          Index2 kappa, int r);
CertificateReport sweep_epsilon_bound(int max_total, int r);

/// Sum of C(alpha, alpha') over sub-multi-indices with |alpha'| = k equals
/// C(|alpha|, k).
bool verify_komatsu_identity(Index2 alpha, int k);
CertificateReport sweep_komatsu(int max_total);

/// C(m+2+l, m+2) <= C(i+j, i) for i >= m+2, j >= l.
bool verify_binomial_inequality(int m, int l, int i, int j);
CertificateReport sweep_binomial(int max_each);

/// a/b <= 2(a-b) for integers a >= b+1 >= 2.
bool verify_elementary_inequality(long long a, long long b);
CertificateReport sweep_elementary(long long max_each);

}  // namespace chana
