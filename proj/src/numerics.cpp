#include "ffsplit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ffsplit {

namespace {

void check_size(std::size_t n, const Grid& g, const char* who) {
    if (n != static_cast<std::size_t>(g.size()))
        throw std::invalid_argument(std::string(who) + ": field length does not match grid");
}

template <typename T>
T trapezoid(const std::vector<T>& f, const Grid& g) {
    check_size(f.size(), g, "integrate");
    T acc = 0.5 * (f.front() + f.back());
    for (int i = 1; i + 1 < g.size(); ++i) acc += f[i];
    return acc * g.dx();
}

template <typename T>
std::vector<T> second_derivative_impl(const std::vector<T>& f, const Grid& g) {
    check_size(f.size(), g, "second_derivative");
    const int n = g.size();
    if (n < 5) throw std::invalid_argument("second_derivative: need n >= 5");
    const double h2 = g.dx() * g.dx();
    std::vector<T> out(n);
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    out[1] = (f[0] - 2.0 * f[1] + f[2]) / h2;
    for (int i = 2; i + 2 < n; ++i)
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h2);
    out[n - 2] = (f[n - 3] - 2.0 * f[n - 2] + f[n - 1]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return out;
}

} // namespace

double integrate(const RealField& f, const Grid& g) { return trapezoid(f, g); }
std::complex<double> integrate(const ComplexField& f, const Grid& g) { return trapezoid(f, g); }

std::complex<double> inner(const ComplexField& a, const ComplexField& b, const Grid& g) {
    check_size(a.size(), g, "inner");
    check_size(b.size(), g, "inner");
    ComplexField prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = std::conj(a[i]) * b[i];
    return trapezoid(prod, g);
}

double inner(const RealField& a, const RealField& b, const Grid& g) {
    check_size(a.size(), g, "inner");
    check_size(b.size(), g, "inner");
    RealField prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    return trapezoid(prod, g);
}

std::complex<double> inner(const RealField& a, const ComplexField& b, const Grid& g) {
    check_size(a.size(), g, "inner");
    check_size(b.size(), g, "inner");
    ComplexField prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    return trapezoid(prod, g);
}

double norm(const ComplexField& f, const Grid& g) {
    RealField p(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) p[i] = std::norm(f[i]);
    return std::sqrt(trapezoid(p, g));
}

double norm(const RealField& f, const Grid& g) {
    RealField p(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) p[i] = f[i] * f[i];
    return std::sqrt(trapezoid(p, g));
}

void normalize(ComplexField& f, const Grid& g) {
    const double n = norm(f, g);
    if (n == 0.0) throw std::runtime_error("normalize: zero field");
    for (auto& v : f) v /= n;
}

void normalize(RealField& f, const Grid& g) {
    const double n = norm(f, g);
    if (n == 0.0) throw std::runtime_error("normalize: zero field");
    for (auto& v : f) v /= n;
}

RealField second_derivative(const RealField& f, const Grid& g) { return second_derivative_impl(f, g); }
ComplexField second_derivative(const ComplexField& f, const Grid& g) { return second_derivative_impl(f, g); }

RealField first_derivative(const RealField& f, const Grid& g) {
    check_size(f.size(), g, "first_derivative");
    const int n = g.size();
    if (n < 5) throw std::invalid_argument("first_derivative: need n >= 5");
    const double h = g.dx();
    RealField out(n);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    out[1] = (f[2] - f[0]) / (2.0 * h);
    for (int i = 2; i + 2 < n; ++i)
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    out[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return out;
}

RealField cumulative_integral(const RealField& f, const Grid& g) {
    check_size(f.size(), g, "cumulative_integral");
    RealField out(f.size());
    out[0] = 0.0;
    // Kahan-compensated running sum: the left-tail partial sums can be
    // many orders below the later cancellations they feed.
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double term = 0.5 * g.dx() * (f[i - 1] + f[i]) - comp;
        const double next = acc + term;
        comp = (next - acc) - term;
        acc = next;
        out[i] = acc;
    }
    return out;
}

CubicSpline::CubicSpline(const std::vector<double>& x, const std::vector<double>& y) : x_(x), y_(y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw std::invalid_argument("CubicSpline: bad input");
    // Natural spline: solve tridiagonal system for second derivatives.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
    m_.assign(n, 0.0);
    b[0] = 1.0;
    b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
        a[i] = hl / 6.0;
        b[i] = (hl + hr) / 3.0;
        c[i] = hr / 6.0;
        r[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        r[i] -= w * r[i - 1];
    }
    m_[n - 1] = r[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[j + 1] - x_[j];
    const double A = (x_[j + 1] - x) / h, B = (x - x_[j]) / h;
    return A * y_[j] + B * y_[j + 1] +
           ((A * A * A - A) * m_[j] + (B * B * B - B) * m_[j + 1]) * h * h / 6.0;
}

TableInterpolant::TableInterpolant(const std::vector<double>& x, std::vector<double> y)
    : x0_(x.front()), y_(std::move(y)) {
    if (x.size() < 6 || y_.size() != x.size())
        throw std::invalid_argument("TableInterpolant: need >= 6 uniform samples");
    dx_ = x[1] - x[0];
}

double TableInterpolant::operator()(double x) const {
    const int n = static_cast<int>(y_.size());
    const double u = (x - x0_) / dx_;
    if (u <= 0.0) return y_.front();
    if (u >= n - 1) return y_.back();
    int base = static_cast<int>(u) - 2;
    base = std::clamp(base, 0, n - 6);
    // barycentric weights for 6 equispaced nodes: (-1)^j C(5, j)
    static constexpr double w[6] = {1.0, -5.0, 10.0, -10.0, 5.0, -1.0};
    double num = 0.0, den = 0.0;
    for (int j = 0; j < 6; ++j) {
        const double d = u - (base + j);
        if (d == 0.0) return y_[base + j];
        const double q = w[j] / d;
        num += q * y_[base + j];
        den += q;
    }
    return num / den;
}

MonotoneCubic::MonotoneCubic(const std::vector<double>& x, const std::vector<double>& y) : x_(x), y_(y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("MonotoneCubic: bad input");
    std::vector<double> s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    d_.assign(n, 0.0);
    d_[0] = s[0];
    d_[n - 1] = s[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            // Harmonic-mean slope limiter.
            const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // Fritsch-Carlson limiting at the ends.
    for (std::size_t i : {std::size_t(0), n - 1}) {
        const double sl = (i == 0) ? s[0] : s[n - 2];
        if (d_[i] * sl <= 0.0) d_[i] = 0.0;
        else if (std::abs(d_[i]) > 3.0 * std::abs(sl)) d_[i] = 3.0 * sl;
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[j + 1] - x_[j];
    const double t = (x - x_[j]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * y_[j] + h10 * h * d_[j] + h01 * y_[j + 1] + h11 * h * d_[j + 1];
}

} // namespace ffsplit
