#include "ffsplit/solver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ffsplit/numerics.hpp"

namespace ffsplit {

namespace {

// LU factorization of a symmetric pentadiagonal matrix with constant
// off-diagonals, no pivoting (the Crank-Nicolson matrices here are
// strongly diagonally dominant). Solves in O(n).
template <typename T>
class PentaLU {
public:
    PentaLU() = default;

    // A = diag(d) + off1 on the first off-diagonals + off2 on the second.
    PentaLU(std::vector<T> d, T off1, T off2) : n_(static_cast<int>(d.size())), d_(std::move(d)) {
        c1_.assign(n_, off1);
        c2_.assign(n_, off2);
        l1_.assign(n_, T(0));
        l2_.assign(n_, T(0));
        std::vector<T> a1(n_, off1), a2(n_, off2);
        for (int i = 0; i < n_; ++i) {
            if (i + 1 < n_) {
                const T m = a1[i + 1] / d_[i];
                l1_[i + 1] = m;
                d_[i + 1] -= m * c1_[i];
                if (i + 2 < n_) c1_[i + 1] -= m * c2_[i];
            }
            if (i + 2 < n_) {
                const T m = a2[i + 2] / d_[i];
                l2_[i + 2] = m;
                a1[i + 2] -= m * c1_[i];
                d_[i + 2] -= m * c2_[i];
            }
        }
    }

    void solve(std::vector<T>& b) const {
        for (int i = 1; i < n_; ++i) {
            b[i] -= l1_[i] * b[i - 1];
            if (i >= 2) b[i] -= l2_[i] * b[i - 2];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            T v = b[i];
            if (i + 1 < n_) v -= c1_[i] * b[i + 1];
            if (i + 2 < n_) v -= c2_[i] * b[i + 2];
            b[i] = v / d_[i];
        }
    }

private:
    int n_ = 0;
    std::vector<T> d_, c1_, c2_, l1_, l2_;
};

bool is_mirror_symmetric(const RealField& V, const Grid& g) {
    double scale = 1.0;
    for (double v : V) scale = std::max(scale, std::abs(v));
    const int n = g.size();
    for (int i = 0; i < n / 2; ++i)
        if (std::abs(V[i] - V[n - 1 - i]) > 1e-11 * scale) return false;
    return true;
}

void fix_sign(RealField& psi) {
    int imax = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (std::abs(psi[i]) > best) { best = std::abs(psi[i]); imax = static_cast<int>(i); }
    }
    if (psi[imax] < 0.0)
        for (auto& v : psi) v = -v;
}

} // namespace

void WaveState::normalize_in(const Grid& g) { normalize(psi, g); }

BandedHamiltonian::BandedHamiltonian(const RealField& V, const Grid& g) : n_(g.size()) {
    if (V.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("BandedHamiltonian: potential length does not match grid");
    const double h2 = g.dx() * g.dx();
    e1_ = -16.0 / (24.0 * h2);
    e2_ = 1.0 / (24.0 * h2);
    d_.resize(n_);
    for (int i = 0; i < n_; ++i) d_[i] = 30.0 / (24.0 * h2) + V[i];
}

template <typename T>
static void banded_apply(const std::vector<double>& d, double e1, double e2,
                         const std::vector<T>& in, std::vector<T>& out) {
    const int n = static_cast<int>(d.size());
    out.resize(n);
    for (int i = 0; i < n; ++i) {
        T acc = d[i] * in[i];
        if (i >= 1) acc += e1 * in[i - 1];
        if (i >= 2) acc += e2 * in[i - 2];
        if (i + 1 < n) acc += e1 * in[i + 1];
        if (i + 2 < n) acc += e2 * in[i + 2];
        out[i] = acc;
    }
}

void BandedHamiltonian::apply(const RealField& in, RealField& out) const {
    banded_apply(d_, e1_, e2_, in, out);
}
void BandedHamiltonian::apply(const ComplexField& in, ComplexField& out) const {
    banded_apply(d_, e1_, e2_, in, out);
}

double BandedHamiltonian::expectation(const RealField& psi, const Grid& g) const {
    RealField hpsi;
    apply(psi, hpsi);
    return inner(psi, hpsi, g);
}

std::vector<EigenPair> lowest_eigenpairs(const RealField& V, int k, const Grid& g) {
    const int n = g.size();
    if (k < 1 || k > n) throw std::invalid_argument("lowest_eigenpairs: bad k");
    const BandedHamiltonian H(V, g);

    // LAPACK lower banded storage, column major: ab(1+i-j, j) = A(i,j).
    const int kd = 2, ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        ab[static_cast<std::size_t>(j) * ldab + 0] = H.diag(j);
        if (j + 1 < n) ab[static_cast<std::size_t>(j) * ldab + 1] = H.off1();
        if (j + 2 < n) ab[static_cast<std::size_t>(j) * ldab + 2] = H.off2();
    }
    std::vector<double> w(n), z(static_cast<std::size_t>(n) * k), q(static_cast<std::size_t>(n) * n);
    std::vector<lapack_int> ifail(n);
    lapack_int m = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_dsbevx(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, kd, ab.data(), ldab, q.data(), n,
        0.0, 0.0, 1, k, abstol, &m, w.data(), z.data(), n, ifail.data());
    if (info != 0 || m < k)
        throw SolverError("lowest_eigenpairs: banded eigensolver failed, info=" + std::to_string(info));

    const bool symmetric = is_mirror_symmetric(V, g);
    std::vector<EigenPair> out(k);
    for (int j = 0; j < k; ++j) {
        out[j].energy = w[j];
        out[j].index = j;
        out[j].psi.assign(z.begin() + static_cast<std::size_t>(j) * n,
                          z.begin() + static_cast<std::size_t>(j + 1) * n);
        if (symmetric) {
            // 1D node theorem: state j has parity (-1)^j. Purify to kill
            // the roundoff mixing of near-degenerate pairs.
            RealField& psi = out[j].psi;
            const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
            RealField proj(n);
            for (int i = 0; i < n; ++i) proj[i] = 0.5 * (psi[i] + sgn * psi[n - 1 - i]);
            double w2 = 0.0, tot = 0.0;
            for (int i = 0; i < n; ++i) { w2 += proj[i] * proj[i]; tot += psi[i] * psi[i]; }
            if (w2 < 0.25 * tot)
                throw SolverError("lowest_eigenpairs: parity purification lost the state");
            psi = std::move(proj);
        }
        normalize(out[j].psi, g);
        fix_sign(out[j].psi);
    }
    return out;
}

std::pair<double, double> stationary_residual(const RealField& psi, const RealField& V,
                                              double coupling, const Grid& g) {
    RealField veff(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) veff[i] = V[i] + coupling * psi[i] * psi[i];
    const BandedHamiltonian H(veff, g);
    RealField hpsi;
    H.apply(psi, hpsi);
    const double mu = inner(psi, hpsi, g) / inner(psi, psi, g);
    double r2 = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double d = hpsi[i] - mu * psi[i];
        r2 += d * d;
    }
    return {std::sqrt(r2 * g.dx()), mu};
}

GpResult gp_ground_state(const RealField& V, double coupling, const Grid& g, const GpOptions& opts) {
    const int n = g.size();
    if (V.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("gp_ground_state: potential length does not match grid");

    RealField psi;
    if (opts.guess) {
        psi = *opts.guess;
        if (psi.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("gp_ground_state: guess length does not match grid");
    } else {
        psi.resize(n);
        for (int i = 0; i < n; ++i) psi[i] = std::exp(-0.5 * g.x(i) * g.x(i));
    }
    normalize(psi, g);

    const double h2 = g.dx() * g.dx();
    const double t_diag = 30.0 / (24.0 * h2), t_off1 = -16.0 / (24.0 * h2), t_off2 = 1.0 / (24.0 * h2);

    auto energy_of = [&](const RealField& f) {
        RealField d2 = second_derivative(f, g);
        double e = 0.0;
        for (int i = 0; i < n; ++i)
            e += (-0.5 * f[i] * d2[i] + V[i] * f[i] * f[i] + 0.5 * coupling * f[i] * f[i] * f[i] * f[i]) * g.dx();
        return e;
    };

    GpResult res;
    res.iterations = 0;
    double energy = energy_of(psi);
    RealField work(n);

    for (double dtau : opts.dtau_schedule) {
        PentaLU<double> lu([&] {
            std::vector<double> d(n);
            for (int i = 0; i < n; ++i) d[i] = 1.0 + 0.5 * dtau * t_diag;
            return d;
        }(), 0.5 * dtau * t_off1, 0.5 * dtau * t_off2);
        const double rhs_d = 1.0 - 0.5 * dtau * t_diag;
        const double rhs_e1 = -0.5 * dtau * t_off1, rhs_e2 = -0.5 * dtau * t_off2;

        const int check_every = 50;
        // the energy rate alone can look converged long before the slow
        // modes have relaxed at this step size
        const long min_steps = static_cast<long>(6.0 / dtau);
        long stage_steps = 0;
        double e_prev = energy;
        bool stage_done = false;
        while (!stage_done) {
            for (int it = 0; it < check_every; ++it) {
                // half potential + mean-field decay
                for (int i = 0; i < n; ++i)
                    psi[i] *= std::exp(-0.5 * dtau * (V[i] + coupling * psi[i] * psi[i]));
                // Cayley kinetic decay
                work.resize(n);
                for (int i = 0; i < n; ++i) {
                    double acc = rhs_d * psi[i];
                    if (i >= 1) acc += rhs_e1 * psi[i - 1];
                    if (i >= 2) acc += rhs_e2 * psi[i - 2];
                    if (i + 1 < n) acc += rhs_e1 * psi[i + 1];
                    if (i + 2 < n) acc += rhs_e2 * psi[i + 2];
                    work[i] = acc;
                }
                lu.solve(work);
                psi.swap(work);
                for (int i = 0; i < n; ++i)
                    psi[i] *= std::exp(-0.5 * dtau * (V[i] + coupling * psi[i] * psi[i]));
                normalize(psi, g);
                ++res.iterations;
                ++stage_steps;
            }
            energy = energy_of(psi);
            const double de_rate = std::abs(energy - e_prev) / (check_every * dtau);
            e_prev = energy;
            if (de_rate < opts.energy_tol && stage_steps >= min_steps) stage_done = true;
            if (res.iterations > opts.max_iter) { stage_done = true; }
        }
    }

    // The converged split-step fixed point carries an O(dtau^2) bias, so
    // polish with a damped self-consistent eigensolve at frozen density.
    double beta = 0.5;
    auto [residual, mu] = stationary_residual(psi, V, coupling, g);
    RealField veff(n);
    for (int polish = 0; polish < 200 && residual > opts.residual_target; ++polish) {
        for (int i = 0; i < n; ++i) veff[i] = V[i] + coupling * psi[i] * psi[i];
        RealField phi = lowest_eigenpairs(veff, 1, g)[0].psi;
        if (inner(phi, psi, g) < 0.0)
            for (auto& v : phi) v = -v;
        for (int i = 0; i < n; ++i) psi[i] = (1.0 - beta) * psi[i] + beta * phi[i];
        normalize(psi, g);
        const auto [r_new, mu_new] = stationary_residual(psi, V, coupling, g);
        if (r_new > residual) beta = std::max(0.05, 0.5 * beta);
        residual = r_new;
        mu = mu_new;
    }

    if (opts.require_convergence && residual > 2.0 * opts.residual_target &&
        res.iterations > opts.max_iter)
        throw SolverError("gp_ground_state: no convergence after " + std::to_string(res.iterations) +
                          " iterations, residual " + std::to_string(residual));

    res.psi = std::move(psi);
    fix_sign(res.psi);
    res.mu = mu;
    res.energy = energy_of(res.psi);
    res.residual = residual;
    return res;
}

std::vector<EigenPair> lowest_eigenpairs(const RealField& V, int k, const Grid& g, double coupling) {
    if (coupling == 0.0) return lowest_eigenpairs(V, k, g);
    if (k != 1)
        throw std::invalid_argument("lowest_eigenpairs: only the ground state is defined for gN > 0");
    GpResult r = gp_ground_state(V, coupling, g);
    EigenPair p;
    p.energy = r.mu;
    p.psi = std::move(r.psi);
    p.index = 0;
    return {p};
}

WaveState propagate(const WaveState& psi0, const PotentialTrace& trace, const PropagateOptions& opts) {
    const Grid& g = trace.grid();
    const int n = g.size();
    if (psi0.psi.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("propagate: state length does not match trace grid");
    if (opts.steps < 2) throw std::invalid_argument("propagate: need at least 2 steps");

    const double tf = trace.mesh().t_final();
    const double dt = tf / opts.steps;
    const double h2 = g.dx() * g.dx();
    const double t_diag = 30.0 / (24.0 * h2), t_off1 = -16.0 / (24.0 * h2), t_off2 = 1.0 / (24.0 * h2);

    using cplx = std::complex<double>;
    const cplx ihalf(0.0, 0.5 * dt);
    PentaLU<cplx> lu([&] {
        std::vector<cplx> d(n);
        for (int i = 0; i < n; ++i) d[i] = 1.0 + ihalf * t_diag;
        return d;
    }(), ihalf * t_off1, ihalf * t_off2);
    const cplx rd = 1.0 - ihalf * t_diag, re1 = -ihalf * t_off1, re2 = -ihalf * t_off2;

    ComplexField psi = psi0.psi;
    const double norm0 = norm(psi, g);
    ComplexField rhs(n);
    RealField v(n);

    auto kick = [&](double t, double tau) {
        trace.interpolate(t, v);
        if (opts.coupling != 0.0) {
            for (int i = 0; i < n; ++i) {
                const double veff = v[i] + opts.coupling * std::norm(psi[i]);
                psi[i] *= std::polar(1.0, -tau * veff);
            }
        } else {
            for (int i = 0; i < n; ++i) psi[i] *= std::polar(1.0, -tau * v[i]);
        }
    };
    auto kinetic = [&] {
        for (int i = 0; i < n; ++i) {
            cplx acc = rd * psi[i];
            if (i >= 1) acc += re1 * psi[i - 1];
            if (i >= 2) acc += re2 * psi[i - 2];
            if (i + 1 < n) acc += re1 * psi[i + 1];
            if (i + 2 < n) acc += re2 * psi[i + 2];
            rhs[i] = acc;
        }
        lu.solve(rhs);
        psi.swap(rhs);
    };

    kick(0.0, 0.5 * dt);
    for (long k = 1; k <= opts.steps; ++k) {
        kinetic();
        const double t = (k == opts.steps) ? tf : k * dt;
        kick(t, (k == opts.steps) ? 0.5 * dt : dt);
        if (opts.dump_stride > 0 && opts.observer && (k % opts.dump_stride == 0 || k == opts.steps))
            opts.observer(t, psi);
    }

    WaveState out{std::move(psi)};
    const double drift = std::abs(norm(out.psi, g) - norm0);
    if (drift > 1e-6)
        throw SolverError("propagate: norm drift " + std::to_string(drift) + ", reduce dt");
    return out;
}

EigenPair ground_state_of_slice(const PotentialTrace& trace, double t, double coupling) {
    const int k = trace.node_index(t);
    return lowest_eigenpairs(trace.slice(k), 1, trace.grid(), coupling)[0];
}

} // namespace ffsplit
