#include "chana/combinatorics.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chana {

namespace {
int pos(int x) { return x > 0 ? x : 0; }

BigInt ipow(BigInt base, int e) {
    BigInt out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

std::string range_str(const std::string& what, long long hi, int r) {
    std::ostringstream os;
    os << what << " <= " << hi;
    if (r >= 0) os << ", r = " << r;
    return os.str();
}
}  // namespace

BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt binomial(const BigInt& n, const BigInt& k) {
    if (k < 0 || k > n) return 0;
    BigInt num = 1, den = 1;
    for (BigInt i = 0; i < k; ++i) {
        num *= n - i;
        den *= i + 1;
    }
    return num / den;
}

Rational bl_exponent(int total, int sub, int r) {
    if (total < r || sub <= 0 || 2 * sub > total)
        throw std::invalid_argument("bl_exponent: need |alpha| >= r, 0 < |beta| <= |alpha|/2");
    return Rational(total - r) - Rational(pos(sub - r), 2) -
           Rational(pos(sub + 2 - r), 2) - Rational(pos(total - sub - r));
}

Rational bh_exponent(int total, int sub, int r) {
    if (total < r || 2 * sub <= total || sub > total)
        throw std::invalid_argument("bh_exponent: need |alpha| >= r, |alpha|/2 < |beta| <= |alpha|");
    return Rational(total - r) - Rational(pos(sub - r - 1)) -
           Rational(pos(total - sub + 1 - r), 2) -
           Rational(pos(total - sub + 3 - r), 2);
}

namespace {
CertificateReport verify_split(const std::string& name, int max_total, int r,
                               bool curved) {
    CertificateReport rep;
    rep.name = name;
    rep.range = range_str(curved ? "i+j" : "|alpha|", max_total, r);
    for (int A = r; A <= max_total; ++A)
        for (int B = 1; B <= A; ++B) {
            const bool low = 2 * B <= A;
            const Rational e =
                low ? bl_exponent(A, B, r) : bh_exponent(A, B, r);
            const Rational bound =
                low ? ((A - B >= r) ? 1 : 0) : ((B >= r + 1) ? 1 : 0);
            ++rep.instances;
            if (e < bound) rep.violations.push_back({A, B, e, bound});
        }
    return rep;
}
}  // namespace

CertificateReport verify_bl(int max_total, int r) {
    CertificateReport rep;
    rep.name = "bl_exponent";
    rep.range = range_str("|alpha|", max_total, r);
    for (int A = r; A <= max_total; ++A)
        for (int B = 1; 2 * B <= A; ++B) {
            const Rational e = bl_exponent(A, B, r);
            const Rational bound = (A - B >= r) ? 1 : 0;
            ++rep.instances;
            if (e < bound) rep.violations.push_back({A, B, e, bound});
        }
    return rep;
}

CertificateReport verify_bh(int max_total, int r) {
    CertificateReport rep;
    rep.name = "bh_exponent";
    rep.range = range_str("|alpha|", max_total, r);
    for (int A = r; A <= max_total; ++A)
        for (int B = A / 2 + 1; B <= A; ++B) {
            const Rational e = bh_exponent(A, B, r);
            const Rational bound = (B >= r + 1) ? 1 : 0;
            ++rep.instances;
            if (e < bound) rep.violations.push_back({A, B, e, bound});
        }
    return rep;
}

CertificateReport verify_curved_exponents(int max_total, int r) {
    return verify_split("curved_exponents", max_total, r, true);
}

Rational al_squared(int total, int sub, int r) {
    if (total < r || sub <= 0 || 2 * sub > total)
        throw std::invalid_argument("al_squared: need |alpha| >= r, 0 < |beta| <= |alpha|/2");
    const int n = total, b = sub;
    const BigInt num = ipow(n, 2 * r) * factorial(b + 2) *
                       ipow(factorial(n - b + 1), 2);
    const BigInt den = factorial(b) * ipow(factorial(n - b), 2) * ipow(b, r) *
                       ipow(b + 2, r) * ipow(n - b + 1, 2 * r + 2);
    return Rational(num, den);
}

Rational ah_squared(int total, int sub, int r) {
    if (total < r || 2 * sub <= total || sub > total)
        throw std::invalid_argument("ah_squared: need |alpha| >= r, |alpha|/2 < |beta| <= |alpha|");
    const int n = total, b = sub;
    const BigInt num = ipow(n, 2 * r) * factorial(n - b + 1) *
                       factorial(n - b + 3);
    const BigInt den = ipow(factorial(n - b), 2) * ipow(b, 2 * (r + 1)) *
                       ipow(n - b + 1, r) * ipow(n - b + 3, r);
    return Rational(num, den);
}

namespace {
template <typename ValueFn, typename SubRange>
CertificateReport sup_sweep(const std::string& name, int max_total, int r,
                            ValueFn value, SubRange sub_range) {
    CertificateReport rep;
    rep.name = name;
    rep.range = range_str("|alpha|", max_total, r);
    Rational best = -1;
    int bn = 0, bb = 0;
    for (int n = r; n <= max_total; ++n) {
        auto [lo, hi] = sub_range(n);
        for (int b = lo; b <= hi; ++b) {
            ++rep.instances;
            const Rational v = value(n, b, r);
            if (v > best) {
                best = v;
                bn = n;
                bb = b;
            }
        }
    }
    rep.sup = best;
    std::ostringstream os;
    os << "(|alpha|,|beta|) = (" << bn << "," << bb << ")";
    rep.attained_at = os.str();
    return rep;
}
}  // namespace

CertificateReport sup_al_squared(int max_total, int r) {
    return sup_sweep("al_squared_sup", max_total, r, al_squared,
                     [](int n) { return std::pair{1, n / 2}; });
}

CertificateReport sup_ah_squared(int max_total, int r) {
    return sup_sweep("ah_squared_sup", max_total, r, ah_squared,
                     [](int n) { return std::pair{n / 2 + 1, n}; });
}

Rational epsilon_exponent(Index2 alpha, Index2 beta, Index2 gamma,
                          Index2 kappa, int r) {
    if (gamma[0] + gamma[1] != 2 || kappa[0] + kappa[1] != 1)
        throw std::invalid_argument("epsilon_exponent: need |gamma| = 2, |kappa| = 1");
    if (beta[0] > alpha[0] || beta[1] > alpha[1] || beta[0] < 0 || beta[1] < 0)
        throw std::invalid_argument("epsilon_exponent: need 0 <= beta <= alpha");
    const int A = alpha[0] + alpha[1], B = beta[0] + beta[1];
    if (2 * B > A)
        throw std::invalid_argument("epsilon_exponent: low sum requires |beta| <= |alpha|/2");
    Rational e = alpha[1];
    if (B >= r) e -= Rational(beta[1], 2);
    if (B + 2 >= r) e -= Rational(beta[1] + gamma[1], 2);
    if (A - B + 1 >= r + 1) e -= alpha[1] - beta[1] + kappa[1];
    return e;
}

bool verify_epsilon_bound(Index2 alpha, Index2 beta, Index2 gamma,
                          Index2 kappa, int r) {
    return epsilon_exponent(alpha, beta, gamma, kappa, r) >= -2;
}

CertificateReport sweep_epsilon_bound(int max_total, int r) {
    CertificateReport rep;
    rep.name = "epsilon_exponent";
    rep.range = range_str("|alpha|", max_total, r);
    static const Index2 gammas[] = {{2, 0}, {1, 1}, {0, 2}};
    static const Index2 kappas[] = {{1, 0}, {0, 1}};
    for (int a1 = 0; a1 <= max_total; ++a1)
        for (int a2 = 0; a1 + a2 <= max_total; ++a2)
            for (int b1 = 0; b1 <= a1; ++b1)
                for (int b2 = 0; b2 <= a2; ++b2) {
                    if (2 * (b1 + b2) > a1 + a2) continue;
                    for (const auto& g : gammas)
                        for (const auto& k : kappas) {
                            ++rep.instances;
                            const Rational e = epsilon_exponent(
                                {a1, a2}, {b1, b2}, g, k, r);
                            if (e < -2)
                                rep.violations.push_back(
                                    {a1 + a2, b1 + b2, e, -2});
                        }
                }
    return rep;
}

bool verify_komatsu_identity(Index2 alpha, int k) {
    if (k < 0 || k > alpha[0] + alpha[1]) return false;
    BigInt sum = 0;
    for (int j = 0; j <= k; ++j)
        sum += binomial(alpha[0], j) * binomial(alpha[1], k - j);
    return sum == binomial(alpha[0] + alpha[1], k);
}

CertificateReport sweep_komatsu(int max_total) {
    CertificateReport rep;
    rep.name = "komatsu_identity";
    rep.range = range_str("|alpha|", max_total, -1);
    for (int a1 = 0; a1 <= max_total; ++a1)
        for (int a2 = 0; a1 + a2 <= max_total; ++a2)
            for (int k = 0; k <= a1 + a2; ++k) {
                ++rep.instances;
                if (!verify_komatsu_identity({a1, a2}, k))
                    rep.violations.push_back({a1 + a2, k, 0, 0});
            }
    return rep;
}

bool verify_binomial_inequality(int m, int l, int i, int j) {
    if (i < m + 2 || j < l)
        throw std::invalid_argument("verify_binomial_inequality: need i >= m+2, j >= l");
    return binomial(m + 2 + l, m + 2) <= binomial(i + j, i);
}

CertificateReport sweep_binomial(int max_each) {
    CertificateReport rep;
    rep.name = "binomial_inequality";
    rep.range = range_str("m,l,i,j", max_each, -1);
    // Pascal table up to 2*max_each + 2 keeps the exhaustive sweep cheap.
    const int N = 2 * max_each + 2;
    std::vector<std::vector<BigInt>> C(N + 1);
    for (int n = 0; n <= N; ++n) {
        C[n].resize(n + 1, 1);
        for (int k = 1; k < n; ++k) C[n][k] = C[n - 1][k - 1] + C[n - 1][k];
    }
    for (int m = 0; m <= max_each; ++m)
        for (int l = 0; l <= max_each; ++l)
            for (int i = m + 2; i <= max_each; ++i)
                for (int j = l; j <= max_each; ++j) {
                    ++rep.instances;
                    if (C[m + 2 + l][m + 2] > C[i + j][i])
                        rep.violations.push_back({m + 2 + l, i + j, 0, 0});
                }
    return rep;
}

bool verify_elementary_inequality(long long a, long long b) {
    if (b < 1 || a < b + 1)
        throw std::invalid_argument("verify_elementary_inequality: need a >= b+1 >= 2");
    return Rational(a, b) <= Rational(2 * (a - b));
}

CertificateReport sweep_elementary(long long max_each) {
    CertificateReport rep;
    rep.name = "elementary_inequality";
    rep.range = range_str("a,b", max_each, -1);
    for (long long b = 1; b <= max_each; ++b)
        for (long long a = b + 1; a <= max_each; ++a) {
            ++rep.instances;
            if (!verify_elementary_inequality(a, b))
                rep.violations.push_back(
                    {static_cast<int>(a), static_cast<int>(b), 0, 0});
        }
    return rep;
}

}  // namespace chana
