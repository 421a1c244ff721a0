#include "chana/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "chana/quadrature.hpp"

namespace chana {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dense transform matrices for one (K, P) pair, cached across calls: the
// resolutions are small, so the transforms are plain matrix products.
struct TransformPlan {
    Eigen::MatrixXcd fourier_synth;    // E(i, k) = e^{2 pi i k i / M}
    Eigen::MatrixXcd fourier_analyze;  // (1/M) E^H
    Eigen::MatrixXd cheb_synth;        // S(p, j) = cos(pi p j / P)
    Eigen::MatrixXd cheb_analyze;      // A(j, p), the DCT-I inverse weights
};

const TransformPlan& plan_for(int K, int P) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<TransformPlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{K, P}];
    if (!slot) {
        const int M = 2 * K + 1;
        auto plan = std::make_unique<TransformPlan>();
        plan->fourier_synth.resize(M, M);
        for (int i = 0; i < M; ++i)
            for (int k = -K; k <= K; ++k)
                plan->fourier_synth(i, k + K) =
                    std::polar(1.0, kTwoPi * k * i / static_cast<double>(M));
        plan->fourier_analyze =
            plan->fourier_synth.adjoint() / static_cast<double>(M);
        plan->cheb_synth.resize(P + 1, P + 1);
        plan->cheb_analyze.resize(P + 1, P + 1);
        for (int p = 0; p <= P; ++p)
            for (int j = 0; j <= P; ++j) {
                const double cs = std::cos(kPi * p * j / P);
                plan->cheb_synth(p, j) = cs;
                const double bj = (j == 0 || j == P) ? 2.0 : 1.0;
                const double bp = (p == 0 || p == P) ? 2.0 : 1.0;
                plan->cheb_analyze(j, p) = cs * 2.0 / (bj * bp * P);
            }
        slot = std::move(plan);
    }
    return *slot;
}

using CoeffMap = Eigen::Map<
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                        Eigen::RowMajor>>;

// values layout i-major: v[i*(P+1)+j], i over 2K+1 x1 points, j over P+1
// Lobatto nodes.
std::vector<Complex> synth(const std::vector<Complex>& c, int K, int P) {
    const int M = 2 * K + 1;
    const TransformPlan& plan = plan_for(K, P);
    CoeffMap cm(c.data(), M, P + 1);
    std::vector<Complex> v(static_cast<std::size_t>(M) * (P + 1));
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>
        vm(v.data(), M, P + 1);
    vm = plan.fourier_synth * (cm * plan.cheb_synth);
    return v;
}

std::vector<Complex> analyze(const std::vector<Complex>& v, int K, int P) {
    const int M = 2 * K + 1;
    const TransformPlan& plan = plan_for(K, P);
    CoeffMap vm(v.data(), M, P + 1);
    std::vector<Complex> c(static_cast<std::size_t>(M) * (P + 1));
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>
        cm(c.data(), M, P + 1);
    cm = plan.fourier_analyze * (vm * plan.cheb_analyze);
    return c;
}

// integral of T_n over [-1,1]
double cheb_integral(int n) {
    if (n % 2 != 0) return 0.0;
    return 2.0 / (1.0 - static_cast<double>(n) * n);
}

double gram(int p, int q) {
    return 0.5 * (cheb_integral(p + q) + cheb_integral(std::abs(p - q)));
}
}  // namespace

GridField::GridField(int K, int P) : K_(K), P_(P) {
    if (K < 0 || P < 2)
        throw std::invalid_argument("GridField: need K >= 0, P >= 2");
    c_.assign(static_cast<std::size_t>(2 * K + 1) * (P + 1), Complex{0.0, 0.0});
}

std::vector<Complex> GridField::values() const { return synth(c_, K_, P_); }

GridField GridField::from_values(int K, int P, const std::vector<Complex>& v) {
    if (v.size() != static_cast<std::size_t>(2 * K + 1) * (P + 1))
        throw std::invalid_argument("from_values: dimension mismatch");
    GridField f(K, P);
    f.c_ = analyze(v, K, P);
    return f;
}

Complex GridField::eval(double x1, double x2) const {
    const double y = 2.0 * x2 - 1.0;
    Complex out{0.0, 0.0};
    for (int k = -K_; k <= K_; ++k) {
        // Clenshaw along the Chebyshev line
        Complex b1{0.0, 0.0}, b2{0.0, 0.0};
        for (int p = P_; p >= 1; --p) {
            const Complex b0 = c_[idx(k, p)] + 2.0 * y * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        const Complex linev = c_[idx(k, 0)] + y * b1 - b2;
        out += linev * std::polar(1.0, kTwoPi * k * x1);
    }
    return out;
}

GridField GridField::operator+(const GridField& g) const {
    if (K_ != g.K_ || P_ != g.P_)
        throw std::invalid_argument("GridField +: shape mismatch");
    GridField h = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) h.c_[i] += g.c_[i];
    return h;
}

GridField GridField::operator-(const GridField& g) const {
    return *this + g * Complex{-1.0, 0.0};
}

GridField GridField::operator*(Complex s) const {
    GridField h = *this;
    for (auto& x : h.c_) x *= s;
    return h;
}

GridField& GridField::operator+=(const GridField& g) {
    if (K_ != g.K_ || P_ != g.P_)
        throw std::invalid_argument("GridField +=: shape mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += g.c_[i];
    return *this;
}

GridField diff(const GridField& f, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("diff: axis must be 1 or 2");
    const int K = f.K(), P = f.P();
    GridField g(K, P);
    if (axis == 1) {
        for (int k = -K; k <= K; ++k)
            for (int p = 0; p <= P; ++p)
                g.coeff(k, p) = f.coeff(k, p) * Complex{0.0, kTwoPi * k};
        return g;
    }
    for (int k = -K; k <= K; ++k) {
        // standard backward recurrence for Chebyshev derivative coefficients
        std::vector<Complex> d(P + 2, Complex{0.0, 0.0});
        for (int p = P; p >= 1; --p)
            d[p - 1] = d[p + 1] + 2.0 * p * f.coeff(k, p);
        d[0] *= 0.5;
        for (int p = 0; p <= P; ++p) g.coeff(k, p) = d[p] * 2.0;  // map factor
    }
    return g;
}

GridField product(const GridField& f, const GridField& g) {
    if (f.K() != g.K() || f.P() != g.P())
        throw std::invalid_argument("product: shape mismatch");
    const int K = f.K(), P = f.P();
    // Pad to (2K, 2P): the quadratic product then fits exactly, so the
    // truncation back to (K, P) is alias-free.
    const int Ke = 2 * K, Pe = 2 * P;
    auto pad = [&](const GridField& h) {
        GridField e(Ke, Pe);
        for (int k = -K; k <= K; ++k)
            for (int p = 0; p <= P; ++p) e.coeff(k, p) = h.coeff(k, p);
        return e.values();
    };
    auto vf = pad(f), vg = pad(g);
    for (std::size_t i = 0; i < vf.size(); ++i) vf[i] *= vg[i];
    const GridField big = GridField::from_values(Ke, Pe, vf);
    GridField out(K, P);
    for (int k = -K; k <= K; ++k)
        for (int p = 0; p <= P; ++p) out.coeff(k, p) = big.coeff(k, p);
    return out;
}

GridField from_mode(const ModeField& f, int K, int P, AliasingReport* report) {
    const int M = 2 * K + 1;
    std::vector<Complex> v(static_cast<std::size_t>(M) * (P + 1));
    for (int i = 0; i < M; ++i)
        for (int j = 0; j <= P; ++j) {
            const double x1 = i / static_cast<double>(M);
            const double x2 = 0.5 * (std::cos(kPi * j / P) + 1.0);
            v[static_cast<std::size_t>(i) * (P + 1) + j] = f.eval(x1, x2);
        }
    GridField g = GridField::from_values(K, P, v);
    if (report) {
        report->max_input_k = f.max_abs_k();
        report->k_aliased = report->max_input_k > K;
        double res = 0.0;
        const int ni = 3 * K + 7, nj = 2 * P + 7;
        for (int i = 0; i < ni; ++i)
            for (int j = 0; j < nj; ++j) {
                const double x1 = (i + 0.371) / ni;
                const double x2 = (j + 0.619) / nj;
                res = std::max(res, std::abs(f.eval(x1, x2) - g.eval(x1, x2)));
            }
        report->sample_residual = res;
    }
    return g;
}

Complex l2_inner(const GridField& f, const GridField& g) {
    if (f.K() != g.K() || f.P() != g.P())
        throw std::invalid_argument("l2_inner: shape mismatch");
    const int K = f.K(), P = f.P();
    Complex s{0.0, 0.0};
    for (int k = -K; k <= K; ++k)
        for (int p = 0; p <= P; ++p) {
            const Complex fp = f.coeff(k, p);
            if (fp == Complex{0.0, 0.0}) continue;
            for (int q = 0; q <= P; ++q) {
                const double gpq = gram(p, q);
                if (gpq == 0.0) continue;
                s += fp * std::conj(g.coeff(k, q)) * (0.5 * gpq);
            }
        }
    return s;
}

double l2_norm(const GridField& f) {
    return std::sqrt(std::max(0.0, l2_inner(f, f).real()));
}

double l2_norm_quadrature(const GridField& f) {
    const int K = f.K(), P = f.P(), Pe = 2 * P, M = 2 * K + 1;
    GridField e(K, Pe);
    for (int k = -K; k <= K; ++k)
        for (int p = 0; p <= P; ++p) e.coeff(k, p) = f.coeff(k, p);
    const auto v = e.values();
    const auto w = clenshaw_curtis_weights(Pe);
    double s = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j <= Pe; ++j)
            s += 0.5 * w[j] *
                 std::norm(v[static_cast<std::size_t>(i) * (Pe + 1) + j]) / M;
    return std::sqrt(std::max(0.0, s));
}

double diff_roundoff_estimate(int P, int order) {
    const double growth = std::max(2.0, P * P / 8.0);
    return std::pow(growth, order) * std::numeric_limits<double>::epsilon();
}

int conditioning_cap(int P, double tol) {
    int j = 0;
    while (diff_roundoff_estimate(P, j + 1) < tol) ++j;
    return j;
}

GridField VectorGridField::divergence() const {
    return diff(comp1, 1) + diff(comp2, 2);
}

double VectorGridField::impermeability_defect() const {
    const int K = comp2.K(), P = comp2.P();
    double s = 0.0;
    for (int k = -K; k <= K; ++k) {
        Complex top{0.0, 0.0}, bot{0.0, 0.0};
        for (int p = 0; p <= P; ++p) {
            top += comp2.coeff(k, p);
            bot += comp2.coeff(k, p) * (p % 2 == 0 ? 1.0 : -1.0);
        }
        s += std::norm(top) + std::norm(bot);
    }
    return std::sqrt(s);
}

double l2_norm(const VectorGridField& f) {
    const double a = l2_norm(f.comp1), b = l2_norm(f.comp2);
    return std::sqrt(a * a + b * b);
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    const char magic[4] = {'C', 'H', 'K', '1'};
    out.write(magic, 4);
    const std::int32_t K = ck.v.comp1.K(), P = ck.v.comp1.P(), ncomp = 2;
    out.write(reinterpret_cast<const char*>(&K), 4);
    out.write(reinterpret_cast<const char*>(&P), 4);
    out.write(reinterpret_cast<const char*>(&ncomp), 4);
    for (double d : {ck.time, ck.tau0, ck.M, ck.T0})
        out.write(reinterpret_cast<const char*>(&d), 8);
    for (const GridField* g : {&ck.v.comp1, &ck.v.comp2})
        for (const Complex& c : g->coeffs()) {
            const double re = c.real(), im = c.imag();
            out.write(reinterpret_cast<const char*>(&re), 8);
            out.write(reinterpret_cast<const char*>(&im), 8);
        }
    if (!out) throw std::runtime_error("save_checkpoint: write failed");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "CHK1")
        throw std::runtime_error("load_checkpoint: bad magic");
    std::int32_t K, P, ncomp;
    in.read(reinterpret_cast<char*>(&K), 4);
    in.read(reinterpret_cast<char*>(&P), 4);
    in.read(reinterpret_cast<char*>(&ncomp), 4);
    if (!in || ncomp != 2 || K < 0 || P < 2)
        throw std::runtime_error("load_checkpoint: bad header");
    Checkpoint ck;
    for (double* d : {&ck.time, &ck.tau0, &ck.M, &ck.T0})
        in.read(reinterpret_cast<char*>(d), 8);
    ck.v.comp1 = GridField(K, P);
    ck.v.comp2 = GridField(K, P);
    for (GridField* g : {&ck.v.comp1, &ck.v.comp2})
        for (int k = -K; k <= K; ++k)
            for (int p = 0; p <= P; ++p) {
                double re, im;
                in.read(reinterpret_cast<char*>(&re), 8);
                in.read(reinterpret_cast<char*>(&im), 8);
                g->coeff(k, p) = Complex{re, im};
            }
    if (!in) throw std::runtime_error("load_checkpoint: truncated file");
    return ck;
}

}  // namespace chana
