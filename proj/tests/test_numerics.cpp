#include <doctest.h>

#include <cmath>

#include "ffsplit/numerics.hpp"

using namespace ffsplit;

namespace {

RealField sample(const Grid& g, double (*f)(double)) {
    RealField out(g.size());
    for (int i = 0; i < g.size(); ++i) out[i] = f(g.x(i));
    return out;
}

} // namespace

TEST_CASE("grid is symmetric with x = 0 on a node") {
    const Grid g(12.0, 513);
    CHECK(g.size() == 513);
    CHECK(g.x(g.center_index()) == 0.0);
    for (int i = 0; i < g.size(); ++i) CHECK(g.x(i) == -g.x(g.mirror_index(i)));
    CHECK(g.dx() == doctest::Approx(24.0 / 512).epsilon(1e-15));
    CHECK_THROWS(Grid(12.0, 512));  // even count
    CHECK_THROWS(Grid(12.0, 1));
}

TEST_CASE("inner product against closed-form Gaussian overlaps") {
    const Grid g(12.0, 513);
    // normalized ground state: <f|f> = 1
    ComplexField f(g.size());
    for (int i = 0; i < g.size(); ++i)
        f[i] = std::pow(M_PI, -0.25) * std::exp(-0.5 * g.x(i) * g.x(i));
    CHECK(std::abs(inner(f, f, g) - 1.0) < 1e-10);

    // parity orthogonality
    ComplexField odd(g.size());
    for (int i = 0; i < g.size(); ++i) odd[i] = g.x(i) * std::exp(-0.5 * g.x(i) * g.x(i));
    CHECK(std::abs(inner(f, odd, g)) < 1e-12);

    // displaced Gaussians: <g0|ga> = exp(-a^2/4), a = 4.126 -> 0.0141794
    const double a = 4.126;
    ComplexField fa(g.size());
    for (int i = 0; i < g.size(); ++i)
        fa[i] = std::pow(M_PI, -0.25) * std::exp(-0.5 * (g.x(i) - a) * (g.x(i) - a));
    const double oracle = std::exp(-a * a / 4.0);
    CHECK(oracle == doctest::Approx(0.0141794).epsilon(1e-4));
    CHECK(std::abs(inner(f, fa, g) - oracle) < 1e-9);

    ComplexField bad(g.size() - 1);
    CHECK_THROWS(inner(f, bad, g));
}

TEST_CASE("second derivative: polynomial exactness and Gaussian oracle") {
    const Grid g(12.0, 513);
    const RealField x2 = sample(g, [](double x) { return x * x; });
    const RealField d2 = second_derivative(x2, g);
    for (int i = 0; i < g.size(); ++i) CHECK(d2[i] == doctest::Approx(2.0).epsilon(1e-8));

    const RealField s = sample(g, [](double x) { return std::sin(x); });
    const RealField ds = second_derivative(s, g);
    double worst = 0.0;
    for (int i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(ds[i] + std::sin(g.x(i))));
    CHECK(worst < 5e-3);  // boundary one-sided stencils are O(dx^2)

    // f = exp(-x^2/2): f''/f = x^2 - 1 where the amplitude is resolvable
    const RealField gau = sample(g, [](double x) { return std::exp(-0.5 * x * x); });
    const RealField dg = second_derivative(gau, g);
    for (int i = 0; i < g.size(); ++i) {
        if (gau[i] > 1e-6)
            CHECK(dg[i] / gau[i] == doctest::Approx(g.x(i) * g.x(i) - 1.0).epsilon(1e-4));
    }
}

TEST_CASE("second derivative parity: even field gives even result") {
    const Grid g(8.0, 129);
    const RealField f = sample(g, [](double x) { return std::exp(-0.3 * x * x) * std::cos(x); });
    const RealField d2 = second_derivative(f, g);
    for (int i = 0; i < g.size(); ++i)
        CHECK(d2[i] == doctest::Approx(d2[g.mirror_index(i)]).epsilon(1e-12));
}

TEST_CASE("cumulative integral basics") {
    const Grid g(12.0, 513);
    const RealField zero(g.size(), 0.0);
    for (double v : cumulative_integral(zero, g)) CHECK(v == 0.0);

    const RealField one(g.size(), 1.0);
    const RealField F = cumulative_integral(one, g);
    for (int i = 0; i < g.size(); ++i)
        CHECK(F[i] == doctest::Approx(g.x(i) + 12.0).epsilon(1e-12));

    const RealField odd = sample(g, [](double x) { return x * std::exp(-0.1 * x * x); });
    const RealField Fo = cumulative_integral(odd, g);
    CHECK(std::abs(Fo.back()) < 1e-10);
    // antiderivative of an odd field is even
    for (int i = 0; i < g.size(); ++i)
        CHECK(Fo[i] == doctest::Approx(Fo[g.mirror_index(i)]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("grid refinement convergence factors >= 3.5") {
    // trapezoid quadrature: integral of exp(x/2) over [-3, 3]
    const double exact = 2.0 * (std::exp(1.5) - std::exp(-1.5));
    auto quad_err = [&](int n) {
        const Grid g(3.0, n);
        const RealField f = sample(g, [](double x) { return std::exp(0.5 * x); });
        return std::abs(integrate(f, g) - exact);
    };
    CHECK(quad_err(51) / quad_err(101) >= 3.5);

    // differentiation: sin(x), max-norm error against the analytic oracle
    auto diff_err = [&](int n) {
        const Grid g(3.0, n);
        const RealField f = sample(g, [](double x) { return std::sin(x); });
        const RealField d2 = second_derivative(f, g);
        double worst = 0.0;
        for (int i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(d2[i] + std::sin(g.x(i))));
        return worst;
    };
    CHECK(diff_err(51) / diff_err(101) >= 3.5);
}

TEST_CASE("monotone cubic interpolation preserves positivity") {
    std::vector<double> x, y;
    for (int i = 0; i <= 20; ++i) {
        x.push_back(i * 0.5);
        y.push_back(std::exp(-0.9 * i));  // decades of decay
    }
    const MonotoneCubic m(x, y);
    for (double t = 0.0; t <= 10.0; t += 0.01) {
        CHECK(m(t) > 0.0);
        CHECK(m(t) <= y.front() * (1 + 1e-12));
    }
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(m(x[i]) == doctest::Approx(y[i]));
}

TEST_CASE("cubic spline reproduces smooth functions") {
    const Grid g(6.0, 121);
    std::vector<double> y(g.size());
    for (int i = 0; i < g.size(); ++i) y[i] = std::exp(-0.5 * g.x(i) * g.x(i));
    const CubicSpline s(g.nodes(), y);
    for (double x = -5.0; x <= 5.0; x += 0.013) {
        CHECK(s(x) == doctest::Approx(std::exp(-0.5 * x * x)).epsilon(1e-5).scale(1.0));
    }
}
