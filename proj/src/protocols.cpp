#include "ffsplit/protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace ffsplit {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kTailClamp = 1e-10;  // amplitude below which stencil derivatives are zeroed

double check_time(double t, double t_f) {
    if (t < 0.0 || t > t_f) throw std::domain_error("protocol time outside [0, t_f]");
    return t;
}
} // namespace

double Ramp::value(double t) const {
    check_time(t, t_f);
    const double s = t / t_f;
    return s * s * (3.0 - 2.0 * s);
}

double Ramp::rate(double t) const {
    check_time(t, t_f);
    const double s = t / t_f;
    return 6.0 * s * (1.0 - s) / t_f;
}

std::pair<double, double> gaussian_trajectory(double a, double t, double t_f) {
    const Ramp ramp{t_f};
    return {a * ramp.value(t), a * ramp.rate(t)};
}

RealField DensityProtocol::sample_amplitude(const Grid& g, double t) const {
    RealField out(g.size());
    for (int i = 0; i < g.size(); ++i) out[i] = amplitude(g.x(i), t);
    return out;
}

RealField DensityProtocol::sample_amplitude_dxx(const Grid& g, double t) const {
    RealField out(g.size());
    for (int i = 0; i < g.size(); ++i) out[i] = amplitude_dxx(g.x(i), t);
    return out;
}

RealField DensityProtocol::sample_density_dt(const Grid& g, double t) const {
    RealField out(g.size());
    for (int i = 0; i < g.size(); ++i) out[i] = density_dt(g.x(i), t);
    return out;
}

// ---------------------------------------------------------------- two bump

TwoBumpProtocol::TwoBumpProtocol(double a, double gamma, double t_f)
    : a_(a), gamma_(gamma), ramp_{t_f} {
    if (a < 0.0) throw std::invalid_argument("TwoBumpProtocol: separation must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("TwoBumpProtocol: gamma must be positive");
    if (!(t_f > 0.0)) throw std::invalid_argument("TwoBumpProtocol: t_f must be positive");
}

double TwoBumpProtocol::z_of(double x0) const {
    const double e = std::exp(-gamma_ * gamma_ * x0 * x0);
    return std::sqrt(gamma_ / (2.0 * kSqrtPi * (1.0 + e)));
}

double TwoBumpProtocol::dz_dx0(double x0) const {
    const double g2 = gamma_ * gamma_;
    const double e = std::exp(-g2 * x0 * x0);
    return z_of(x0) * g2 * x0 * e / (1.0 + e);
}

double TwoBumpProtocol::normalization(double t) const {
    return z_of(a_ * ramp_.value(t));
}

double TwoBumpProtocol::amplitude(double x, double t) const {
    const double x0 = a_ * ramp_.value(t);
    const double g2 = gamma_ * gamma_;
    const double gp = std::exp(-0.5 * g2 * (x - x0) * (x - x0));
    const double gm = std::exp(-0.5 * g2 * (x + x0) * (x + x0));
    return z_of(x0) * (gp + gm);
}

double TwoBumpProtocol::amplitude_dx(double x, double t) const {
    const double x0 = a_ * ramp_.value(t);
    const double g2 = gamma_ * gamma_;
    const double gp = std::exp(-0.5 * g2 * (x - x0) * (x - x0));
    const double gm = std::exp(-0.5 * g2 * (x + x0) * (x + x0));
    return -z_of(x0) * g2 * ((x - x0) * gp + (x + x0) * gm);
}

double TwoBumpProtocol::amplitude_dxx(double x, double t) const {
    const double x0 = a_ * ramp_.value(t);
    const double g2 = gamma_ * gamma_;
    const double up = x - x0, um = x + x0;
    const double gp = std::exp(-0.5 * g2 * up * up);
    const double gm = std::exp(-0.5 * g2 * um * um);
    return z_of(x0) * g2 * ((g2 * up * up - 1.0) * gp + (g2 * um * um - 1.0) * gm);
}

double TwoBumpProtocol::density_dt(double x, double t) const {
    const double R = ramp_.value(t);
    const double x0 = a_ * R;
    const double xdot0 = a_ * ramp_.rate(t);
    const double g2 = gamma_ * gamma_;
    const double up = x - x0, um = x + x0;
    const double gp = std::exp(-0.5 * g2 * up * up);
    const double gm = std::exp(-0.5 * g2 * um * um);
    const double z = z_of(x0);
    const double r = z * (gp + gm);
    const double zdot = dz_dx0(x0) * xdot0;
    const double rdot = (z > 0.0 ? zdot / z * r : 0.0) + z * xdot0 * g2 * (up * gp - um * gm);
    return 2.0 * r * rdot;
}

// -------------------------------------------------------------- three term

ThreeTermProtocol::ThreeTermProtocol(double a, double gamma, double t_f)
    : a_(a), gamma_(gamma), ramp_{t_f} {
    if (a < 0.0) throw std::invalid_argument("ThreeTermProtocol: separation must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("ThreeTermProtocol: gamma must be positive");
    if (!(t_f > 0.0)) throw std::invalid_argument("ThreeTermProtocol: t_f must be positive");
    const double g2a2 = gamma_ * gamma_ * a_ * a_;
    i00_ = kSqrtPi / gamma_;
    i0f_ = 2.0 * kSqrtPi / gamma_ * std::exp(-0.25 * g2a2);
    iff_ = 2.0 * kSqrtPi / gamma_ * (1.0 + std::exp(-g2a2));
}

double ThreeTermProtocol::mix_norm_sq(double R) const {
    return (1.0 - R) * (1.0 - R) * i00_ + 2.0 * R * (1.0 - R) * i0f_ + R * R * iff_;
}

double ThreeTermProtocol::mix_norm_sq_dR(double R) const {
    return -2.0 * (1.0 - R) * i00_ + (2.0 - 4.0 * R) * i0f_ + 2.0 * R * iff_;
}

double ThreeTermProtocol::normalization(double t) const {
    return 1.0 / std::sqrt(mix_norm_sq(ramp_.value(t)));
}

double ThreeTermProtocol::amplitude(double x, double t) const {
    const double R = ramp_.value(t);
    const double g2 = gamma_ * gamma_;
    const double r0 = std::exp(-0.5 * g2 * x * x);
    const double rf = std::exp(-0.5 * g2 * (x - a_) * (x - a_)) + std::exp(-0.5 * g2 * (x + a_) * (x + a_));
    return ((1.0 - R) * r0 + R * rf) / std::sqrt(mix_norm_sq(R));
}

double ThreeTermProtocol::amplitude_dx(double x, double t) const {
    const double R = ramp_.value(t);
    const double g2 = gamma_ * gamma_;
    const double d0 = -g2 * x * std::exp(-0.5 * g2 * x * x);
    const double df = -g2 * ((x - a_) * std::exp(-0.5 * g2 * (x - a_) * (x - a_)) +
                             (x + a_) * std::exp(-0.5 * g2 * (x + a_) * (x + a_)));
    return ((1.0 - R) * d0 + R * df) / std::sqrt(mix_norm_sq(R));
}

double ThreeTermProtocol::amplitude_dxx(double x, double t) const {
    const double R = ramp_.value(t);
    const double g2 = gamma_ * gamma_;
    const double s0 = g2 * (g2 * x * x - 1.0) * std::exp(-0.5 * g2 * x * x);
    const double sf = g2 * ((g2 * (x - a_) * (x - a_) - 1.0) * std::exp(-0.5 * g2 * (x - a_) * (x - a_)) +
                            (g2 * (x + a_) * (x + a_) - 1.0) * std::exp(-0.5 * g2 * (x + a_) * (x + a_)));
    return ((1.0 - R) * s0 + R * sf) / std::sqrt(mix_norm_sq(R));
}

double ThreeTermProtocol::density_dt(double x, double t) const {
    const double R = ramp_.value(t);
    const double Rdot = ramp_.rate(t);
    const double g2 = gamma_ * gamma_;
    const double r0 = std::exp(-0.5 * g2 * x * x);
    const double rf = std::exp(-0.5 * g2 * (x - a_) * (x - a_)) + std::exp(-0.5 * g2 * (x + a_) * (x + a_));
    const double q = mix_norm_sq(R);
    const double m = (1.0 - R) * r0 + R * rf;
    const double m_R = rf - r0;
    // d/dt [m^2/q] with R(t) the only time dependence.
    return Rdot * (2.0 * m * m_R / q - m * m * mix_norm_sq_dR(R) / (q * q));
}

// --------------------------------------------------------------------- BEC

BecProtocol::BecProtocol(const Grid& g, RealField chi_full, RealField chi_half,
                         double a, double t_f, double coupling)
    : a_(a), coupling_(coupling), ramp_{t_f},
      chi_full_(std::move(chi_full)), chi_half_(std::move(chi_half)) {
    if (a < 0.0) throw std::invalid_argument("BecProtocol: separation must be >= 0");
    if (!(t_f > 0.0)) throw std::invalid_argument("BecProtocol: t_f must be positive");
    for (RealField* chi : {&chi_full_, &chi_half_}) {
        if (chi->size() != static_cast<std::size_t>(g.size()))
            throw std::invalid_argument("BecProtocol: profile length does not match grid");
        const double n = norm(*chi, g);
        if (std::abs(n - 1.0) > 1e-6)
            throw std::invalid_argument("BecProtocol: input profiles must be unit-normalized");
        // the profiles are even ground states; drop the solver roundoff
        for (int i = 0; i < g.size() / 2; ++i) {
            const double even = 0.5 * ((*chi)[i] + (*chi)[g.mirror_index(i)]);
            (*chi)[i] = even;
            (*chi)[g.mirror_index(i)] = even;
        }
    }

    auto build = [&](const RealField& chi, TableInterpolant& s, TableInterpolant& s1,
                     TableInterpolant& s2) {
        RealField d1 = first_derivative(chi, g);
        RealField d2 = second_derivative(chi, g);
        for (int i = 0; i < g.size(); ++i) {
            if (std::abs(chi[i]) < kTailClamp) { d1[i] = 0.0; d2[i] = 0.0; }
        }
        s = TableInterpolant(g.nodes(), chi);
        s1 = TableInterpolant(g.nodes(), d1);
        s2 = TableInterpolant(g.nodes(), d2);
    };
    build(chi_full_, sN_, sN1_, sN2_);
    build(chi_half_, sH_, sH1_, sH2_);

    // Tabulate the normalization z(R) = ||f(x-aR) + f(x+aR)|| and its dR
    // derivative; time enters the protocol only through R.
    const int nR = 1201;
    std::vector<double> Rs(nR), zs(nR), zrs(nR);
    RealField w(g.size()), wr(g.size());
    for (int k = 0; k < nR; ++k) {
        const double R = static_cast<double>(k) / (nR - 1);
        const double x0 = a_ * R;
        for (int i = 0; i < g.size(); ++i) {
            const double um = g.x(i) - x0, up = g.x(i) + x0;
            w[i] = f_mix(sN_, sH_, um, R) + f_mix(sN_, sH_, up, R);
            const double fR_m = sH_(um) - sN_(um), fR_p = sH_(up) - sN_(up);
            const double f1_m = (1.0 - R) * sN1_(um) + R * sH1_(um);
            const double f1_p = (1.0 - R) * sN1_(up) + R * sH1_(up);
            wr[i] = fR_m - a_ * f1_m + fR_p + a_ * f1_p;
        }
        const double q = inner(w, w, g);
        Rs[k] = R;
        zs[k] = std::sqrt(q);
        zrs[k] = inner(w, wr, g) / zs[k];
    }
    z_table_ = CubicSpline(Rs, zs);
    zr_table_ = CubicSpline(Rs, zrs);
}

double BecProtocol::f_mix(const TableInterpolant& sN, const TableInterpolant& sH, double u, double R) const {
    return (1.0 - R) * sN(u) + R * sH(u);
}

double BecProtocol::z_of(double R) const { return z_table_(R); }
double BecProtocol::dz_dR(double R) const { return zr_table_(R); }

double BecProtocol::normalization(double t) const { return z_of(ramp_.value(t)); }

double BecProtocol::amplitude(double x, double t) const {
    const double R = ramp_.value(t);
    const double x0 = a_ * R;
    return (f_mix(sN_, sH_, x - x0, R) + f_mix(sN_, sH_, x + x0, R)) / z_of(R);
}

double BecProtocol::amplitude_dx(double x, double t) const {
    const double R = ramp_.value(t);
    const double x0 = a_ * R;
    return (f_mix(sN1_, sH1_, x - x0, R) + f_mix(sN1_, sH1_, x + x0, R)) / z_of(R);
}

double BecProtocol::amplitude_dxx(double x, double t) const {
    const double R = ramp_.value(t);
    const double x0 = a_ * R;
    return (f_mix(sN2_, sH2_, x - x0, R) + f_mix(sN2_, sH2_, x + x0, R)) / z_of(R);
}

double BecProtocol::density_dt(double x, double t) const {
    const double R = ramp_.value(t);
    const double Rdot = ramp_.rate(t);
    if (Rdot == 0.0) return 0.0;
    const double x0 = a_ * R;
    const double um = x - x0, up = x + x0;
    const double w = f_mix(sN_, sH_, um, R) + f_mix(sN_, sH_, up, R);
    const double fR_m = sH_(um) - sN_(um), fR_p = sH_(up) - sN_(up);
    const double f1_m = (1.0 - R) * sN1_(um) + R * sH1_(um);
    const double f1_p = (1.0 - R) * sN1_(up) + R * sH1_(up);
    const double wR = fR_m - a_ * f1_m + fR_p + a_ * f1_p;
    const double z = z_of(R), zR = dz_dR(R);
    return Rdot * (2.0 * w * wR / (z * z) - 2.0 * w * w * zR / (z * z * z));
}

} // namespace ffsplit
