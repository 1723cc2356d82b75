#include "ffsplit/two_mode.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "ffsplit/numerics.hpp"

namespace ffsplit {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

RealField step_function(const Grid& g) {
    RealField theta(g.size(), 0.0);
    for (int i = 0; i < g.size(); ++i) {
        if (g.x(i) > 0.0) theta[i] = 1.0;
        else if (g.x(i) == 0.0) theta[i] = 0.5;
    }
    return theta;
}
} // namespace

void TwoModeSystem::build_interpolants() {
    interp_ = MonotoneCubic(times, delta);
    interp_lp_ = MonotoneCubic(times, lambda_prime);
}

std::vector<double> strided_times(const TimeMesh& m, int stride) {
    std::vector<double> out;
    for (int k = 0; k < m.samples(); k += stride) out.push_back(m.t(k));
    if (out.back() != m.t_final()) out.push_back(m.t_final());
    return out;
}

std::vector<std::array<EigenPair, 2>> slice_pairs(const PotentialTrace& trace, int stride,
                                                  int threads) {
    const TimeMesh& m = trace.mesh();
    std::vector<int> ks;
    for (int k = 0; k < m.samples(); k += stride) ks.push_back(k);
    if (ks.back() != m.steps()) ks.push_back(m.steps());

    std::vector<std::array<EigenPair, 2>> out(ks.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            auto pairs = lowest_eigenpairs(trace.slice(ks[j]), 2, trace.grid());
            out[j] = {std::move(pairs[0]), std::move(pairs[1])};
        }
    };
    if (threads <= 1) {
        work(0, ks.size());
    } else {
        std::vector<std::future<void>> futs;
        const std::size_t chunk = (ks.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk, e = std::min(ks.size(), b + chunk);
            if (b >= e) break;
            futs.push_back(std::async(std::launch::async, work, b, e));
        }
        for (auto& f : futs) f.get();
    }

    if (out[0][1].energy - out[0][0].energy < 1e-10)
        throw SolverError("slice_pairs: degenerate spectrum at t = 0");
    return out;
}

BareBasis extract_bare_basis(const std::vector<std::array<EigenPair, 2>>& pairs,
                             const Grid& g, std::vector<double> times) {
    if (pairs.size() != times.size())
        throw std::invalid_argument("extract_bare_basis: time/pair count mismatch");
    BareBasis basis;
    basis.times = std::move(times);
    basis.left.reserve(pairs.size());
    basis.right.reserve(pairs.size());

    const int n = g.size();
    const int c = g.center_index();
    for (const auto& pr : pairs) {
        RealField minus = pr[0].psi;
        RealField plus = pr[1].psi;
        // psi- >= 0 globally; the eigensolver already puts its peak positive.
        double pos = 0.0;
        for (int i = 0; i < n; ++i) pos += minus[i];
        if (pos < 0.0)
            for (auto& v : minus) v = -v;
        // psi+ sign: right-localized R requires int_{x>0} psi+ psi- < 0.
        double ov = 0.0;
        for (int i = c + 1; i < n; ++i) ov += plus[i] * minus[i];
        if (ov > 0.0)
            for (auto& v : plus) v = -v;

        RealField L(n), R(n);
        for (int i = 0; i < n; ++i) {
            L[i] = kInvSqrt2 * (minus[i] + plus[i]);
            R[i] = kInvSqrt2 * (minus[i] - plus[i]);
        }
        basis.left.push_back(std::move(L));
        basis.right.push_back(std::move(R));
    }
    return basis;
}

TwoModeSystem extract_delta(const std::vector<std::array<EigenPair, 2>>& pairs,
                            const BareBasis& basis, const PotentialTrace& unperturbed,
                            double lambda, const Grid& g) {
    if (pairs.size() != basis.times.size())
        throw std::invalid_argument("extract_delta: time/pair count mismatch");
    const int n = g.size();
    const RealField theta = step_function(g);

    TwoModeSystem sys;
    sys.times = basis.times;
    sys.lambda_m = lambda;
    sys.t_f = unperturbed.mesh().t_final();
    sys.delta.resize(pairs.size());
    sys.delta_cross.resize(pairs.size());
    sys.lambda_prime.resize(pairs.size());
    sys.v0.resize(pairs.size());
    sys.e_minus.resize(pairs.size());
    sys.e_plus.resize(pairs.size());

    RealField v(n), hl(n), hr(n);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        sys.e_minus[j] = pairs[j][0].energy;
        sys.e_plus[j] = pairs[j][1].energy;
        sys.delta[j] = pairs[j][1].energy - pairs[j][0].energy;

        const int k = unperturbed.node_index(basis.times[j]);
        const double* vs = unperturbed.slice_ptr(k);
        for (int i = 0; i < n; ++i) v[i] = vs[i] + lambda * theta[i];
        const BandedHamiltonian H(v, g);
        H.apply(basis.left[j], hl);
        H.apply(basis.right[j], hr);
        const double h_rl = inner(basis.right[j], hl, g);
        const double h_rr = inner(basis.right[j], hr, g);
        const double h_ll = inner(basis.left[j], hl, g);
        sys.delta_cross[j] = -2.0 * h_rl;
        sys.v0[j] = 0.5 * (h_rr + h_ll);
        sys.lambda_prime[j] = h_rr - h_ll;

        if (sys.delta[j] > 1e-4) {
            const double rel = std::abs(sys.delta_cross[j] - sys.delta[j]) / sys.delta[j];
            if (rel > 0.05) sys.routes_warning = true;
        }
    }
    sys.build_interpolants();
    return sys;
}

TwoModeEigen analytic_eigensystem(double delta, double lambda_m) {
    if (delta == 0.0 && lambda_m == 0.0)
        throw std::invalid_argument("analytic_eigensystem: degenerate (delta = lambda = 0)");
    TwoModeEigen e;
    const double rho = std::sqrt(delta * delta + lambda_m * lambda_m);
    e.e_minus = -0.5 * rho;
    e.e_plus = 0.5 * rho;
    e.alpha = std::atan2(delta, lambda_m);
    const double c = std::cos(0.5 * e.alpha), s = std::sin(0.5 * e.alpha);
    e.v_minus = {s, c};   // (c_R, c_L)
    e.v_plus = {-c, s};
    return e;
}

TwoModeState two_mode_ground(const TwoModeSystem& sys) {
    const TwoModeEigen e = analytic_eigensystem(sys.delta.front(), sys.lambda_m);
    return {e.v_minus[0], e.v_minus[1]};
}

TwoModeState evolve_two_mode(const TwoModeSystem& sys, const TwoModeEvolveOptions& opts) {
    TwoModeState c = opts.initial ? *opts.initial : two_mode_ground(sys);
    const long n = opts.steps;
    if (n < 10) throw std::invalid_argument("evolve_two_mode: too few steps");
    const double dt = sys.t_f / n;
    using cplx = std::complex<double>;
    const cplx mi(0.0, -1.0);

    auto rhs = [&](double t, cplx cr, cplx cl, cplx& dr, cplx& dl) {
        const double d = sys.delta_at(t);
        const double lam = opts.use_lambda_prime ? sys.lambda_prime_at(t) : sys.lambda_m;
        // H = (1/2) [[lam, -d], [-d, -lam]] in the (R, L) ordering.
        dr = mi * 0.5 * (lam * cr - d * cl);
        dl = mi * 0.5 * (-d * cr - lam * cl);
    };

    cplx cr = c.c_right, cl = c.c_left;
    for (long k = 0; k < n; ++k) {
        const double t = k * dt;
        cplx k1r, k1l, k2r, k2l, k3r, k3l, k4r, k4l;
        rhs(t, cr, cl, k1r, k1l);
        rhs(t + 0.5 * dt, cr + 0.5 * dt * k1r, cl + 0.5 * dt * k1l, k2r, k2l);
        rhs(t + 0.5 * dt, cr + 0.5 * dt * k2r, cl + 0.5 * dt * k2l, k3r, k3l);
        rhs(t + dt, cr + dt * k3r, cl + dt * k3l, k4r, k4l);
        cr += dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        cl += dt / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
    }
    TwoModeState out{cr, cl};
    if (std::abs(out.norm() - 1.0) > 1e-8)
        throw SolverError("evolve_two_mode: norm drift, increase step count");
    return out;
}

TwoModeFidelities two_mode_fidelities(const TwoModeSystem& sys, const TwoModeState& c) {
    const TwoModeEigen ef = analytic_eigensystem(sys.delta.back(), sys.lambda_m);
    const double sf = ef.v_minus[0], cf = ef.v_minus[1];
    TwoModeFidelities f;
    f.F_S = std::abs(kInvSqrt2 * (sf + cf));
    f.F_D0 = std::abs(kInvSqrt2 * (c.c_right + c.c_left));
    f.F_D = std::abs(std::conj(c.c_right) * sf + std::conj(c.c_left) * cf);
    return f;
}

SuddenReport sudden_metric(const TwoModeSystem& sys) {
    // Time-averaged tunneling rate (trapezoid over the extraction mesh).
    double num = 0.0;
    for (std::size_t j = 0; j + 1 < sys.times.size(); ++j)
        num += 0.5 * (sys.delta[j] + sys.delta[j + 1]) * (sys.times[j + 1] - sys.times[j]);
    const double dbar = num / sys.t_f;
    const double lam = sys.lambda_m;
    // Hbar in the (R, L) basis; initial state (1,1)/sqrt2.
    const double h_rr = 0.5 * lam, h_ll = -0.5 * lam, h_rl = -0.5 * dbar;
    const double mean = 0.5 * (h_rr + h_ll) + h_rl;
    const double mean_sq = 0.5 * ((h_rr * h_rr + h_rl * h_rl) + (h_ll * h_ll + h_rl * h_rl)) +
                           h_rl * (h_rr + h_ll);
    SuddenReport rep;
    rep.metric = 0.5 * lam * sys.t_f;
    rep.delta_h_bar = std::sqrt(std::max(0.0, mean_sq - mean * mean));
    return rep;
}

double adiabatic_metric(const TwoModeSystem& sys) {
    const double lam = sys.lambda_m;
    if (lam == 0.0) return 0.0;
    double worst = 0.0;
    const std::size_t n = sys.times.size();
    for (std::size_t j = 0; j < n; ++j) {
        double ddot;
        if (j == 0)
            ddot = (sys.delta[1] - sys.delta[0]) / (sys.times[1] - sys.times[0]);
        else if (j + 1 == n)
            ddot = (sys.delta[j] - sys.delta[j - 1]) / (sys.times[j] - sys.times[j - 1]);
        else
            ddot = (sys.delta[j + 1] - sys.delta[j - 1]) / (sys.times[j + 1] - sys.times[j - 1]);
        const double d = sys.delta[j];
        const double m = std::abs(lam * ddot) / (2.0 * std::pow(lam * lam + d * d, 1.5));
        worst = std::max(worst, m);
    }
    return worst;
}

double max_geometric_coupling(const BareBasis& basis, const Grid& g) {
    // Midpoint assembly <(b(t)+b(t+dt))/2 | (b'(t+dt)-b'(t))/dt>: for an
    // exactly orthonormal mirror-symmetric basis every element cancels
    // identically, which is the discrete counterpart of K_A = 0.
    double worst = 0.0;
    const int n = g.size();
    RealField bra(n), dot(n);
    for (std::size_t k = 0; k + 1 < basis.times.size(); ++k) {
        const double dt = basis.times[k + 1] - basis.times[k];
        for (auto [b0, b1] : {std::pair{&basis.left[k], &basis.left[k + 1]},
                              std::pair{&basis.right[k], &basis.right[k + 1]}}) {
            for (auto [c0, c1] : {std::pair{&basis.left[k], &basis.left[k + 1]},
                                  std::pair{&basis.right[k], &basis.right[k + 1]}}) {
                for (int i = 0; i < n; ++i) {
                    bra[i] = 0.5 * ((*b0)[i] + (*b1)[i]);
                    dot[i] = ((*c1)[i] - (*c0)[i]) / dt;
                }
                worst = std::max(worst, std::abs(inner(bra, dot, g)));
            }
        }
    }
    return worst;
}

} // namespace ffsplit
