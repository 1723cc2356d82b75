#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace ffsplit {

using RealField = std::vector<double>;
using ComplexField = std::vector<std::complex<double>>;

// Uniform symmetric 1D grid on [-L, L]. n must be odd so that x = 0 is a
// node (the step perturbation and the phase gauge are anchored there).
// Nodes are built as (i - mid) * dx, which makes x_i == -x_{n-1-i} exact
// in floating point.
class Grid {
public:
    Grid(double half_width, int n) : half_width_(half_width), n_(n) {
        if (n < 3) throw std::invalid_argument("Grid: need at least 3 nodes");
        if (n % 2 == 0) throw std::invalid_argument("Grid: node count must be odd");
        if (!(half_width > 0.0)) throw std::invalid_argument("Grid: half_width must be positive");
        dx_ = 2.0 * half_width / (n - 1);
        x_.resize(n);
        const int mid = (n - 1) / 2;
        for (int i = 0; i < n; ++i) x_[i] = (i - mid) * dx_;
    }

    double half_width() const { return half_width_; }
    int size() const { return n_; }
    double dx() const { return dx_; }
    double x(int i) const { return x_[i]; }
    const std::vector<double>& nodes() const { return x_; }
    int center_index() const { return (n_ - 1) / 2; }
    int mirror_index(int i) const { return n_ - 1 - i; }

private:
    double half_width_;
    int n_;
    double dx_;
    std::vector<double> x_;
};

// Uniform time mesh t_k = k * t_final / steps, k = 0..steps.
class TimeMesh {
public:
    TimeMesh(double t_final, int steps) : t_final_(t_final), steps_(steps) {
        if (steps < 1) throw std::invalid_argument("TimeMesh: need at least 1 step");
        if (!(t_final > 0.0)) throw std::invalid_argument("TimeMesh: duration must be positive");
        dt_ = t_final / steps;
    }

    double t_final() const { return t_final_; }
    int steps() const { return steps_; }
    int samples() const { return steps_ + 1; }
    double dt() const { return dt_; }
    double t(int k) const { return (k == steps_) ? t_final_ : k * dt_; }
    double reduced(int k) const { return t(k) / t_final_; }

private:
    double t_final_;
    int steps_;
    double dt_;
};

} // namespace ffsplit
