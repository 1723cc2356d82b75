#pragma once

#include <complex>
#include <vector>

#include "ffsplit/grid.hpp"

namespace ffsplit {

// Trapezoidal quadrature of f over the grid.
double integrate(const RealField& f, const Grid& g);
std::complex<double> integrate(const ComplexField& f, const Grid& g);

// Trapezoidal inner product <a|b> = integral of conj(a) * b.
std::complex<double> inner(const ComplexField& a, const ComplexField& b, const Grid& g);
double inner(const RealField& a, const RealField& b, const Grid& g);
std::complex<double> inner(const RealField& a, const ComplexField& b, const Grid& g);

double norm(const ComplexField& f, const Grid& g);
double norm(const RealField& f, const Grid& g);
void normalize(ComplexField& f, const Grid& g);
void normalize(RealField& f, const Grid& g);

// Second derivative: 5-point central stencil in the interior, one-sided
// O(dx^2) at the four boundary nodes. Needs n >= 5.
RealField second_derivative(const RealField& f, const Grid& g);
ComplexField second_derivative(const ComplexField& f, const Grid& g);

// First derivative: 4th-order central interior, one-sided at the edges.
RealField first_derivative(const RealField& f, const Grid& g);

// Cumulative trapezoid F(x_i) = integral of f from -L to x_i; F(-L) = 0.
RealField cumulative_integral(const RealField& f, const Grid& g);

// Natural cubic spline through (x_i, y_i) on a uniform grid; evaluates
// value outside the table as the nearest endpoint value.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(const std::vector<double>& x, const std::vector<double>& y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at nodes
};

// Sliding 6-point Lagrange interpolation of a table on a uniform grid
// (O(dx^6) for smooth data). Clamps to the end values outside the table.
// Smooth enough that grid differencing of interpolated samples keeps
// stencil-level accuracy, which cubic splines do not provide.
class TableInterpolant {
public:
    TableInterpolant() = default;
    TableInterpolant(const std::vector<double>& x, std::vector<double> y);
    double operator()(double x) const;

private:
    double x0_ = 0.0, dx_ = 1.0;
    std::vector<double> y_;
};

// Monotone (Fritsch-Carlson) piecewise-cubic interpolant. Stays within
// the local data range, so positive samples give a positive interpolant.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(const std::vector<double>& x, const std::vector<double>& y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, d_;  // d_ = node slopes
};

} // namespace ffsplit
