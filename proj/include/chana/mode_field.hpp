#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace chana {

using Complex = std::complex<double>;

// Vertical basis functions on x2 in [0,1]. The set is closed under d/dx2:
//   Cos(m)  = cos(m pi x2),  m >= 0   (Cos(0) is the constant 1)
//   Sin(m)  = sin(m pi x2),  m >= 1
//   Cosh(mu)= cosh(mu x2)
//   Sinh(mu)= sinh(mu x2)
//   Poly(d) = x2^d,          0 <= d <= 3
// Cos/Sin/Poly(0) are the "trig" subset, closed under products.
struct VerticalBasis {
    enum class Kind : std::uint8_t { Cos, Sin, Cosh, Sinh, Poly };

    Kind kind = Kind::Cos;
    int m = 0;        // trig frequency index or polynomial degree
    double mu = 0.0;  // hyperbolic rate

    static VerticalBasis cos(int m);
    static VerticalBasis sin(int m);
    static VerticalBasis cosh(double mu);
    static VerticalBasis sinh(double mu);
    static VerticalBasis one();
    static VerticalBasis x2(int degree = 1);

    bool is_trig() const {
        return kind == Kind::Cos || kind == Kind::Sin ||
               (kind == Kind::Poly && m == 0);
    }

    double eval(double x2) const;
    /// Value at a channel wall (x2 = 0 or 1), exact.
    double trace(bool top) const;

    friend auto operator<=>(const VerticalBasis&, const VerticalBasis&) = default;
};

struct ModeTerm {
    int k = 0;  // x1 wavenumber of exp(2 pi i k x1)
    VerticalBasis vb;
    Complex amp{0.0, 0.0};
};

// Exact separable-mode scalar field on T x (0,1):
//   f(x1,x2) = sum_terms amp * exp(2 pi i k x1) * vb(x2).
// Terms are kept normalized: unique (k, vb) keys, zero amplitudes pruned.
class ModeField {
  public:
    ModeField() = default;
    explicit ModeField(std::vector<ModeTerm> terms);

    static ModeField zero() { return {}; }
    static ModeField constant(Complex c);
    /// Single term amp * e^{2 pi i k x1} * vb(x2).
    static ModeField term(int k, VerticalBasis vb, Complex amp);

    const std::vector<ModeTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    bool is_trig_pure() const;
    /// Largest |k| present (0 for the empty field).
    int max_abs_k() const;
    /// Largest trig frequency index present in the vertical bases.
    int max_vertical_freq() const;

    Complex eval(double x1, double x2) const;

    ModeField operator+(const ModeField& g) const;
    ModeField operator-(const ModeField& g) const;
    ModeField operator*(Complex c) const;

    friend ModeField operator*(Complex c, const ModeField& f) { return f * c; }

  private:
    std::vector<ModeTerm> terms_;
    void normalize();
};

/// Exact term-wise derivative; axis 1 multiplies by 2 pi i k, axis 2 follows
/// the vertical basis rule.
ModeField differentiate(const ModeField& f, int axis);

/// Exact product via product-to-sum identities. Both operands must be
/// trig-pure; throws std::invalid_argument otherwise.
ModeField multiply(const ModeField& f, const ModeField& g);

/// Inner product over the channel, integral of f * conj(g). Trig x trig pairs
/// use closed forms; anything involving Cosh/Sinh/Poly>=1 falls back to
/// Gauss-Legendre quadrature in x2.
Complex l2_inner(const ModeField& f, const ModeField& g);

double l2_norm(const ModeField& f);

/// x1-Fourier coefficients of the wall trace f(., 0) or f(., 1).
std::map<int, Complex> boundary_trace(const ModeField& f, bool top);

/// One term per record: k, basis tag, basis parameter, amp_re, amp_im.
void serialize(const ModeField& f, std::ostream& out);
ModeField deserialize_mode_field(std::istream& in);

struct VectorModeField {
    ModeField comp1, comp2;

    /// (d2 psi, -d1 psi); divergence-free by construction.
    static VectorModeField from_stream_function(const ModeField& psi);

    ModeField divergence() const;
    bool is_divergence_free() const { return divergence().empty(); }
    bool is_impermeable() const;
    VectorModeField operator+(const VectorModeField& g) const {
        return {comp1 + g.comp1, comp2 + g.comp2};
    }
    VectorModeField operator*(Complex c) const { return {comp1 * c, comp2 * c}; }
};

double l2_norm(const VectorModeField& f);

}  // namespace chana
