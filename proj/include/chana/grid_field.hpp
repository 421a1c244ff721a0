#pragma once

#include <complex>
#include <string>
#include <vector>

#include "chana/mode_field.hpp"

namespace chana {

// Fourier (x1) x Chebyshev (x2) coefficient field on T x (0,1):
//   f(x1, x2) = sum_{|k|<=K} sum_{p<=P} c_{k,p} e^{2 pi i k x1} T_p(2 x2 - 1).
// Coefficients are stored densely, k-major, index (k+K)*(P+1) + p.
class GridField {
  public:
    GridField() = default;
    GridField(int K, int P);

    int K() const { return K_; }
    int P() const { return P_; }

    Complex& coeff(int k, int p) { return c_[idx(k, p)]; }
    const Complex& coeff(int k, int p) const { return c_[idx(k, p)]; }
    const std::vector<Complex>& coeffs() const { return c_; }

    /// Collocation values, layout i-major: value(i, j) at x1 = i/(2K+1),
    /// x2 = (cos(pi j / P) + 1)/2, i in [0, 2K], j in [0, P].
    std::vector<Complex> values() const;
    static GridField from_values(int K, int P, const std::vector<Complex>& v);

    Complex eval(double x1, double x2) const;

    GridField operator+(const GridField& g) const;
    GridField operator-(const GridField& g) const;
    GridField operator*(Complex s) const;
    GridField& operator+=(const GridField& g);

  private:
    int K_ = 0, P_ = 0;
    std::vector<Complex> c_;
    std::size_t idx(int k, int p) const {
        return static_cast<std::size_t>(k + K_) * (P_ + 1) + p;
    }
};

/// Spectral derivative: axis 1 multiplies mode k by 2 pi i k; axis 2 uses the
/// Chebyshev coefficient recurrence times the [0,1] -> [-1,1] map factor 2.
GridField diff(const GridField& f, int axis);

/// Dealiased pointwise product: evaluated on an enlarged grid (>= 3K+1 points
/// in x1, Chebyshev degree 2P in x2), then truncated back to (K, P).
GridField product(const GridField& f, const GridField& g);

struct AliasingReport {
    int max_input_k = 0;
    bool k_aliased = false;       // input has |k| > K
    double sample_residual = 0.0;  // max |f - grid| on an off-node sample set
};

/// Sample a ModeField on the collocation grid and transform. If the input's
/// x1 frequencies exceed K the representation aliases; the optional report
/// carries the detection flag and a measured off-grid residual.
GridField from_mode(const ModeField& f, int K, int P,
                    AliasingReport* report = nullptr);

/// L2 inner product over the channel via the exact Chebyshev Gram matrix
/// (integral of T_p T_q) per Fourier mode.
Complex l2_inner(const GridField& f, const GridField& g);
double l2_norm(const GridField& f);

/// L2 norm from collocation values with Clenshaw-Curtis weights on a degree-2P
/// grid (so |f|^2 is integrated exactly); used to cross-check the Gram route.
double l2_norm_quadrature(const GridField& f);

/// Estimated relative roundoff amplification of `order` repeated axis-2
/// differentiations at Chebyshev degree P (measured model ~ (P^2/8)^order).
double diff_roundoff_estimate(int P, int order);

/// Largest axis-2 derivative order whose estimated roundoff stays below tol.
int conditioning_cap(int P, double tol);

struct VectorGridField {
    GridField comp1, comp2;

    GridField divergence() const;
    /// L2 norm of the wall traces of comp2 (both walls).
    double impermeability_defect() const;
    VectorGridField operator+(const VectorGridField& g) const {
        return {comp1 + g.comp1, comp2 + g.comp2};
    }
    VectorGridField operator-(const VectorGridField& g) const {
        return {comp1 - g.comp1, comp2 - g.comp2};
    }
    VectorGridField operator*(Complex s) const {
        return {comp1 * s, comp2 * s};
    }
};

double l2_norm(const VectorGridField& f);

// Checkpoint file: "CHK1" magic, int32 K, int32 P, int32 ncomp, then doubles
// time, tau0, M, T0, then ncomp coefficient tables of (2K+1)*(P+1) complex
// values as interleaved (re, im) little-endian IEEE-754 doubles, k from -K to
// K, p from 0 to P within each k.
struct Checkpoint {
    double time = 0.0;
    double tau0 = 0.0;
    double M = 0.0;
    double T0 = 0.0;
    VectorGridField v;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace chana
