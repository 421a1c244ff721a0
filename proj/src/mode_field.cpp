#include "chana/mode_field.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "chana/quadrature.hpp"

namespace chana {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::tuple<int, int, int, double> key_of(const ModeTerm& t) {
    return {t.k, static_cast<int>(t.vb.kind), t.vb.m, t.vb.mu};
}
}  // namespace

VerticalBasis VerticalBasis::cos(int m) {
    if (m < 0) throw std::invalid_argument("VerticalBasis::cos: m must be >= 0");
    return {Kind::Cos, m, 0.0};
}
VerticalBasis VerticalBasis::sin(int m) {
    if (m < 1) throw std::invalid_argument("VerticalBasis::sin: m must be >= 1");
    return {Kind::Sin, m, 0.0};
}
VerticalBasis VerticalBasis::cosh(double mu) { return {Kind::Cosh, 0, mu}; }
VerticalBasis VerticalBasis::sinh(double mu) { return {Kind::Sinh, 0, mu}; }
VerticalBasis VerticalBasis::one() { return {Kind::Poly, 0, 0.0}; }
VerticalBasis VerticalBasis::x2(int degree) {
    if (degree < 0 || degree > 3)
        throw std::invalid_argument("VerticalBasis::x2: degree must be in [0,3]");
    return {Kind::Poly, degree, 0.0};
}

double VerticalBasis::eval(double x2) const {
    switch (kind) {
        case Kind::Cos: return std::cos(m * kPi * x2);
        case Kind::Sin: return std::sin(m * kPi * x2);
        case Kind::Cosh: return std::cosh(mu * x2);
        case Kind::Sinh: return std::sinh(mu * x2);
        case Kind::Poly: return m == 0 ? 1.0 : std::pow(x2, m);
    }
    return 0.0;
}

double VerticalBasis::trace(bool top) const {
    switch (kind) {
        case Kind::Cos: return top ? (m % 2 == 0 ? 1.0 : -1.0) : 1.0;
        case Kind::Sin: return 0.0;
        case Kind::Cosh: return top ? std::cosh(mu) : 1.0;
        case Kind::Sinh: return top ? std::sinh(mu) : 0.0;
        case Kind::Poly: return (m == 0) ? 1.0 : (top ? 1.0 : 0.0);
    }
    return 0.0;
}

ModeField::ModeField(std::vector<ModeTerm> terms) : terms_(std::move(terms)) {
    normalize();
}

ModeField ModeField::constant(Complex c) {
    return term(0, VerticalBasis::one(), c);
}

ModeField ModeField::term(int k, VerticalBasis vb, Complex amp) {
    return ModeField({ModeTerm{k, vb, amp}});
}

void ModeField::normalize() {
    // Canonical forms: Cos(0) -> Poly(0); Sin never appears with m <= 0 by
    // construction of the factories, but internal arithmetic may produce
    // negative or zero frequencies, folded here.
    for (auto& t : terms_) {
        auto& vb = t.vb;
        if (vb.kind == VerticalBasis::Kind::Cos && vb.m < 0) vb.m = -vb.m;
        if (vb.kind == VerticalBasis::Kind::Sin) {
            if (vb.m < 0) {
                vb.m = -vb.m;
                t.amp = -t.amp;
            }
            if (vb.m == 0) t.amp = 0.0;
        }
        if (vb.kind == VerticalBasis::Kind::Cos && vb.m == 0)
            vb = VerticalBasis::one();
        if (vb.kind == VerticalBasis::Kind::Cosh && vb.mu == 0.0)
            vb = VerticalBasis::one();
        if (vb.kind == VerticalBasis::Kind::Sinh && vb.mu == 0.0) t.amp = 0.0;
        if (vb.kind == VerticalBasis::Kind::Cosh && vb.mu < 0.0) vb.mu = -vb.mu;
        if (vb.kind == VerticalBasis::Kind::Sinh && vb.mu < 0.0) {
            vb.mu = -vb.mu;
            t.amp = -t.amp;
        }
    }
    std::map<std::tuple<int, int, int, double>, ModeTerm> merged;
    for (const auto& t : terms_) {
        auto [it, inserted] = merged.try_emplace(key_of(t), t);
        if (!inserted) it->second.amp += t.amp;
    }
    terms_.clear();
    for (auto& [key, t] : merged)
        if (t.amp != Complex{0.0, 0.0}) terms_.push_back(t);
}

bool ModeField::is_trig_pure() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const ModeTerm& t) { return t.vb.is_trig(); });
}

int ModeField::max_abs_k() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.k));
    return m;
}

int ModeField::max_vertical_freq() const {
    int m = 0;
    for (const auto& t : terms_)
        if (t.vb.kind == VerticalBasis::Kind::Cos ||
            t.vb.kind == VerticalBasis::Kind::Sin)
            m = std::max(m, t.vb.m);
    return m;
}

Complex ModeField::eval(double x1, double x2) const {
    Complex s{0.0, 0.0};
    for (const auto& t : terms_)
        s += t.amp * std::polar(1.0, kTwoPi * t.k * x1) * t.vb.eval(x2);
    return s;
}

ModeField ModeField::operator+(const ModeField& g) const {
    std::vector<ModeTerm> all = terms_;
    all.insert(all.end(), g.terms_.begin(), g.terms_.end());
    return ModeField(std::move(all));
}

ModeField ModeField::operator-(const ModeField& g) const {
    return *this + g * Complex{-1.0, 0.0};
}

ModeField ModeField::operator*(Complex c) const {
    std::vector<ModeTerm> all = terms_;
    for (auto& t : all) t.amp *= c;
    return ModeField(std::move(all));
}

ModeField differentiate(const ModeField& f, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("differentiate: axis must be 1 or 2");
    std::vector<ModeTerm> out;
    for (const auto& t : f.terms()) {
        if (axis == 1) {
            if (t.k == 0) continue;
            out.push_back({t.k, t.vb, t.amp * Complex{0.0, kTwoPi * t.k}});
            continue;
        }
        const auto& vb = t.vb;
        using K = VerticalBasis::Kind;
        switch (vb.kind) {
            case K::Cos:
                if (vb.m > 0)
                    out.push_back({t.k, VerticalBasis::sin(vb.m),
                                   t.amp * (-vb.m * kPi)});
                break;
            case K::Sin:
                out.push_back({t.k, VerticalBasis::cos(vb.m), t.amp * (vb.m * kPi)});
                break;
            case K::Cosh:
                out.push_back({t.k, VerticalBasis::sinh(vb.mu), t.amp * vb.mu});
                break;
            case K::Sinh:
                out.push_back({t.k, VerticalBasis::cosh(vb.mu), t.amp * vb.mu});
                break;
            case K::Poly:
                if (vb.m > 0)
                    out.push_back({t.k, VerticalBasis::x2(vb.m - 1),
                                   t.amp * static_cast<double>(vb.m)});
                break;
        }
    }
    return ModeField(std::move(out));
}

namespace {

// Product-to-sum for the trig vertical bases. Frequencies are signed here;
// ModeField::normalize folds them back to canonical form.
void trig_product_terms(const VerticalBasis& a, const VerticalBasis& b,
                        std::vector<std::pair<VerticalBasis, double>>& out) {
    using K = VerticalBasis::Kind;
    const bool a_cos = (a.kind == K::Cos || (a.kind == K::Poly && a.m == 0));
    const bool b_cos = (b.kind == K::Cos || (b.kind == K::Poly && b.m == 0));
    const int ma = (a.kind == K::Poly) ? 0 : a.m;
    const int mb = (b.kind == K::Poly) ? 0 : b.m;
    auto cosv = [](int m) {
        return m == 0 ? VerticalBasis::one() : VerticalBasis::cos(std::abs(m));
    };
    if (a_cos && b_cos) {
        out.emplace_back(cosv(ma - mb), 0.5);
        out.emplace_back(cosv(ma + mb), 0.5);
    } else if (!a_cos && !b_cos) {
        out.emplace_back(cosv(ma - mb), 0.5);
        out.emplace_back(cosv(ma + mb), -0.5);
    } else {
        // sin(s) * cos(c) = 1/2 sin(s+c) + 1/2 sin(s-c)
        const int s = a_cos ? mb : ma;
        const int c = a_cos ? ma : mb;
        for (int m : {s + c, s - c}) {
            if (m == 0) continue;
            VerticalBasis vb = VerticalBasis::sin(std::abs(m));
            out.emplace_back(vb, m > 0 ? 0.5 : -0.5);
        }
    }
}

// Closed form for int_0^1 sin(m pi x) dx, signed m.
double int_sin(int m) {
    if (m == 0) return 0.0;
    if (m % 2 == 0) return 0.0;
    return 2.0 / (m * kPi);
}

bool vertical_inner_closed_form(const VerticalBasis& a, const VerticalBasis& b,
                                double& value) {
    if (!a.is_trig() || !b.is_trig()) return false;
    using K = VerticalBasis::Kind;
    const bool a_cos = (a.kind != K::Sin);
    const bool b_cos = (b.kind != K::Sin);
    const int ma = (a.kind == K::Poly) ? 0 : a.m;
    const int mb = (b.kind == K::Poly) ? 0 : b.m;
    if (a_cos && b_cos) {
        value = (ma == mb) ? (ma == 0 ? 1.0 : 0.5) : 0.0;
    } else if (!a_cos && !b_cos) {
        value = (ma == mb) ? 0.5 : 0.0;
    } else {
        const int s = a_cos ? mb : ma;
        const int c = a_cos ? ma : mb;
        value = 0.5 * (int_sin(s + c) + int_sin(s - c));
    }
    return true;
}

double vertical_inner(const VerticalBasis& a, const VerticalBasis& b) {
    double v;
    if (vertical_inner_closed_form(a, b, v)) return v;
    // Hyperbolic or polynomial factor present: Gauss-Legendre fallback. The
    // node count resolves the highest trig frequency; hyperbolic factors
    // converge superexponentially.
    int maxfreq = 0;
    for (const auto* vb : {&a, &b})
        if (vb->kind == VerticalBasis::Kind::Cos ||
            vb->kind == VerticalBasis::Kind::Sin)
            maxfreq = std::max(maxfreq, vb->m);
    const auto rule = gauss_legendre(2 * maxfreq + 32);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * a.eval(rule.nodes[i]) * b.eval(rule.nodes[i]);
    return s;
}

}  // namespace

ModeField multiply(const ModeField& f, const ModeField& g) {
    if (!f.is_trig_pure() || !g.is_trig_pure())
        throw std::invalid_argument(
            "multiply: operands must be trig-pure (Cos/Sin/One vertical bases)");
    std::vector<ModeTerm> out;
    std::vector<std::pair<VerticalBasis, double>> prods;
    for (const auto& tf : f.terms())
        for (const auto& tg : g.terms()) {
            prods.clear();
            trig_product_terms(tf.vb, tg.vb, prods);
            for (const auto& [vb, w] : prods)
                out.push_back({tf.k + tg.k, vb, tf.amp * tg.amp * w});
        }
    return ModeField(std::move(out));
}

Complex l2_inner(const ModeField& f, const ModeField& g) {
    Complex s{0.0, 0.0};
    for (const auto& tf : f.terms())
        for (const auto& tg : g.terms()) {
            if (tf.k != tg.k) continue;  // x1 modes are orthonormal
            s += tf.amp * std::conj(tg.amp) * vertical_inner(tf.vb, tg.vb);
        }
    return s;
}

double l2_norm(const ModeField& f) {
    return std::sqrt(std::max(0.0, l2_inner(f, f).real()));
}

std::map<int, Complex> boundary_trace(const ModeField& f, bool top) {
    std::map<int, Complex> out;
    for (const auto& t : f.terms()) {
        const double v = t.vb.trace(top);
        if (v == 0.0) continue;
        out[t.k] += t.amp * v;
    }
    std::erase_if(out, [](const auto& kv) {
        return kv.second == Complex{0.0, 0.0};
    });
    return out;
}

void serialize(const ModeField& f, std::ostream& out) {
    out.precision(17);
    for (const auto& t : f.terms()) {
        const char* tag = nullptr;
        double param = 0.0;
        switch (t.vb.kind) {
            case VerticalBasis::Kind::Cos: tag = "cos"; param = t.vb.m; break;
            case VerticalBasis::Kind::Sin: tag = "sin"; param = t.vb.m; break;
            case VerticalBasis::Kind::Cosh: tag = "cosh"; param = t.vb.mu; break;
            case VerticalBasis::Kind::Sinh: tag = "sinh"; param = t.vb.mu; break;
            case VerticalBasis::Kind::Poly: tag = "poly"; param = t.vb.m; break;
        }
        out << t.k << ' ' << tag << ' ' << param << ' ' << t.amp.real() << ' '
            << t.amp.imag() << '\n';
    }
}

ModeField deserialize_mode_field(std::istream& in) {
    std::vector<ModeTerm> terms;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int k;
        std::string tag;
        double param, re, im;
        if (!(ls >> k >> tag >> param >> re >> im))
            throw std::invalid_argument("deserialize_mode_field: bad record: " + line);
        VerticalBasis vb;
        if (tag == "cos") vb = param == 0 ? VerticalBasis::one()
                                          : VerticalBasis::cos(static_cast<int>(param));
        else if (tag == "sin") vb = VerticalBasis::sin(static_cast<int>(param));
        else if (tag == "cosh") vb = VerticalBasis::cosh(param);
        else if (tag == "sinh") vb = VerticalBasis::sinh(param);
        else if (tag == "poly") vb = VerticalBasis::x2(static_cast<int>(param));
        else throw std::invalid_argument("deserialize_mode_field: unknown tag " + tag);
        terms.push_back({k, vb, Complex{re, im}});
    }
    return ModeField(std::move(terms));
}

VectorModeField VectorModeField::from_stream_function(const ModeField& psi) {
    return {differentiate(psi, 2), differentiate(psi, 1) * Complex{-1.0, 0.0}};
}

ModeField VectorModeField::divergence() const {
    return differentiate(comp1, 1) + differentiate(comp2, 2);
}

bool VectorModeField::is_impermeable() const {
    return boundary_trace(comp2, false).empty() &&
           boundary_trace(comp2, true).empty();
}

double l2_norm(const VectorModeField& f) {
    const double a = l2_norm(f.comp1), b = l2_norm(f.comp2);
    return std::sqrt(a * a + b * b);
}

}  // namespace chana
