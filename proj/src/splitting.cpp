#include "ffsplit/splitting.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <mutex>

#include "ffsplit/numerics.hpp"

namespace ffsplit {

PotentialTrace perturb(const PotentialTrace& trace, double lambda) {
    PotentialTrace out = trace;
    if (lambda == 0.0) return out;
    const Grid& g = trace.grid();
    for (int k = 0; k < trace.mesh().samples(); ++k) {
        for (int i = 0; i < g.size(); ++i) {
            const double x = g.x(i);
            if (x > 0.0) out.at(k, i) += lambda;
            else if (x == 0.0) out.at(k, i) += 0.5 * lambda;
        }
    }
    out.meta.lambda = trace.meta.lambda + lambda;
    return out;
}

namespace {

// GP energy functional per particle.
double gp_energy(const RealField& psi, const RealField& V, double coupling, const Grid& g) {
    const RealField d2 = second_derivative(psi, g);
    double e = 0.0;
    for (int i = 0; i < g.size(); ++i)
        e += (-0.5 * psi[i] * d2[i] + V[i] * psi[i] * psi[i] +
              0.5 * coupling * psi[i] * psi[i] * psi[i] * psi[i]) * g.dx();
    return e;
}

// For a tilted double well with interactions the well populations of the
// GP ground state are set by the balance of tilt and mean-field energy,
// not by the (exponentially small) tunneling rate. Imaginary time cannot
// transport atoms across the barrier on any useful scale, so scan the
// two-state manifold spanned by the symmetric ground state and its
// sign-flipped partner for the minimal-energy starting point.
RealField tilted_manifold_guess(const RealField& sym, const RealField& V, double coupling,
                                const Grid& g) {
    RealField odd(sym.size());
    for (int i = 0; i < g.size(); ++i) odd[i] = (g.x(i) < 0.0 ? -sym[i] : sym[i]);
    normalize(odd, g);

    auto candidate = [&](double theta) {
        RealField psi(sym.size());
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t i = 0; i < sym.size(); ++i) psi[i] = c * sym[i] + s * odd[i];
        normalize(psi, g);
        return psi;
    };
    double best_theta = 0.0, best_e = gp_energy(sym, V, coupling, g);
    const int n_scan = 81;
    for (int j = 0; j < n_scan; ++j) {
        const double theta = -0.25 * M_PI + 0.5 * M_PI * j / (n_scan - 1);
        const double e = gp_energy(candidate(theta), V, coupling, g);
        if (e < best_e) { best_e = e; best_theta = theta; }
    }
    double lo = best_theta - 0.5 * M_PI / (n_scan - 1), hi = best_theta + 0.5 * M_PI / (n_scan - 1);
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (gp_energy(candidate(m1), V, coupling, g) < gp_energy(candidate(m2), V, coupling, g))
            hi = m2;
        else
            lo = m1;
    }
    return candidate(0.5 * (lo + hi));
}

} // namespace

std::shared_ptr<const DensityProtocol> make_protocol(const std::string& kind, double a,
                                                     double gamma, double t_f, double coupling,
                                                     const Grid& g) {
    if (kind == "two_bump") return std::make_shared<TwoBumpProtocol>(a, gamma, t_f);
    if (kind == "three_term") return std::make_shared<ThreeTermProtocol>(a, gamma, t_f);
    if (kind == "bec") {
        RealField trap(g.size());
        for (int i = 0; i < g.size(); ++i) trap[i] = 0.5 * g.x(i) * g.x(i);
        const GpResult full = gp_ground_state(trap, coupling, g);
        const GpResult half = gp_ground_state(trap, 0.5 * coupling, g);
        return std::make_shared<BecProtocol>(g, full.psi, half.psi, a, t_f, coupling);
    }
    throw std::invalid_argument("make_protocol: unknown protocol '" + kind + "'");
}

SplittingLab::SplittingLab(std::shared_ptr<const DensityProtocol> protocol, const LabOptions& opts)
    : protocol_(std::move(protocol)), opts_(opts),
      design_(design_potential(*protocol_, Grid(opts.box_half_width, opts.n_x),
                               TimeMesh(protocol_->duration(), opts.design_samples),
                               protocol_->coupling())),
      cache_(std::make_unique<ExtractionCache>()) {
    const double gn = protocol_->coupling();
    const Grid& g = grid();
    if (gn == 0.0) {
        ground0_0_ = lowest_eigenpairs(design_.trace.slice(0), 1, g)[0];
        ground0_tf_ = lowest_eigenpairs(design_.trace.slice(opts_.design_samples), 1, g)[0];
    } else {
        GpOptions gpo;
        gpo.guess = protocol_->sample_amplitude(g, 0.0);
        normalize(*gpo.guess, g);
        GpResult r0 = gp_ground_state(design_.trace.slice(0), gn, g, gpo);
        ground0_0_ = {r0.mu, std::move(r0.psi), 0};
        gpo.guess = protocol_->sample_amplitude(g, protocol_->duration());
        normalize(*gpo.guess, g);
        GpResult rf = gp_ground_state(design_.trace.slice(opts_.design_samples), gn, g, gpo);
        ground0_tf_ = {rf.mu, std::move(rf.psi), 0};
    }
}

EigenPair SplittingLab::slice_ground(const PotentialTrace& tr, double t, const RealField* guess) const {
    const double gn = protocol_->coupling();
    if (gn == 0.0) return ground_state_of_slice(tr, t, 0.0);
    const int k = tr.node_index(t);
    GpOptions gpo;
    if (guess) gpo.guess = *guess;
    GpResult r = gp_ground_state(tr.slice(k), gn, grid(), gpo);
    return {r.mu, std::move(r.psi), 0};
}

TwoModeSystem SplittingLab::two_mode_system(double lambda) const {
    if (protocol_->coupling() != 0.0)
        throw std::invalid_argument("two_mode_system: defined for the linear case only");
    {
        std::scoped_lock lock(cache_->mutex);
        if (!cache_->pairs) {
            cache_->pairs = slice_pairs(design_.trace, opts_.extraction_stride, opts_.threads);
            cache_->basis = extract_bare_basis(
                *cache_->pairs, grid(),
                strided_times(design_.trace.mesh(), opts_.extraction_stride));
        }
    }
    return extract_delta(*cache_->pairs, *cache_->basis, design_.trace, lambda, grid());
}

double SplittingLab::tunneling_rate_final() const {
    const auto pairs = lowest_eigenpairs(design_.trace.slice(opts_.design_samples), 2, grid());
    return pairs[1].energy - pairs[0].energy;
}

FidelityReport SplittingLab::run(double lambda) const {
    FidelityReport rep;
    rep.lambda = lambda;
    rep.t_f = protocol_->duration();
    rep.coupling = protocol_->coupling();
    rep.protocol = protocol_->name();

    const Grid& g = grid();
    const double tf = protocol_->duration();
    const PotentialTrace vl = perturb(design_.trace, lambda);

    EigenPair gl_0, gl_tf;
    if (lambda == 0.0) {
        gl_0 = ground0_0_;
        gl_tf = ground0_tf_;
    } else {
        gl_0 = slice_ground(vl, 0.0, &ground0_0_.psi);
        if (protocol_->coupling() != 0.0) {
            const RealField guess =
                tilted_manifold_guess(ground0_tf_.psi, vl.slice(opts_.design_samples),
                                      protocol_->coupling(), g);
            gl_tf = slice_ground(vl, tf, &guess);
        } else {
            gl_tf = slice_ground(vl, tf, nullptr);
        }
    }

    rep.F_S = std::abs(inner(ground0_tf_.psi, gl_tf.psi, g));
    rep.F_I = std::abs(inner(gl_0.psi, ground0_0_.psi, g));

    const RealField& start = opts_.unperturbed_initial ? ground0_0_.psi : gl_0.psi;
    WaveState psi0;
    psi0.psi.assign(start.begin(), start.end());
    PropagateOptions popts;
    popts.steps = opts_.prop_steps;
    popts.coupling = protocol_->coupling();
    const WaveState psif = propagate(psi0, vl, popts);

    rep.F_D0 = std::abs(inner(ground0_tf_.psi, psif.psi, g));
    rep.F_D = std::abs(inner(gl_tf.psi, psif.psi, g));

    if ((opts_.two_mode || opts_.criteria) && protocol_->coupling() == 0.0) {
        const TwoModeSystem sys = two_mode_system(lambda);
        if (opts_.two_mode) {
            const TwoModeState cf = evolve_two_mode(sys);
            const TwoModeFidelities f2 = two_mode_fidelities(sys, cf);
            rep.F_S_2m = f2.F_S;
            rep.F_D0_2m = f2.F_D0;
            rep.F_D_2m = f2.F_D;
        }
        if (opts_.criteria) {
            rep.sudden = sudden_metric(sys).metric;
            rep.adiabatic = adiabatic_metric(sys);
        }
    }
    return rep;
}

std::vector<FidelityReport> sweep(SweepAxis axis, const std::vector<double>& values,
                                  const SweepSpec& fixed) {
    std::vector<FidelityReport> rows(values.size());

    if (axis == SweepAxis::Lambda) {
        const Grid g(fixed.lab.box_half_width, fixed.lab.n_x);
        auto protocol = make_protocol(fixed.protocol, fixed.a, fixed.gamma, fixed.t_f,
                                      fixed.coupling, g);
        const SplittingLab lab(protocol, fixed.lab);
        if (fixed.lab.two_mode || fixed.lab.criteria) {
            if (fixed.coupling == 0.0) lab.two_mode_system(0.0);  // warm the extraction cache
        }
        auto run_row = [&](std::size_t j) {
            try {
                rows[j] = lab.run(values[j]);
            } catch (const std::exception& e) {
                rows[j].lambda = values[j];
                rows[j].t_f = fixed.t_f;
                rows[j].coupling = fixed.coupling;
                rows[j].protocol = fixed.protocol;
                rows[j].error = e.what();
            }
        };
        if (fixed.lab.threads <= 1) {
            for (std::size_t j = 0; j < values.size(); ++j) run_row(j);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t j = next.fetch_add(1); j < values.size(); j = next.fetch_add(1))
                    run_row(j);
            };
            std::vector<std::future<void>> futs;
            for (int t = 0; t < fixed.lab.threads; ++t)
                futs.push_back(std::async(std::launch::async, worker));
            for (auto& f : futs) f.get();
        }
        return rows;
    }

    // Duration and coupling sweeps need a fresh design per row.
    auto run_row = [&](std::size_t j) {
        SweepSpec spec = fixed;
        if (axis == SweepAxis::Duration) spec.t_f = values[j];
        else spec.coupling = values[j];
        try {
            rows[j] = run_scenario(spec, fixed.lambda);
        } catch (const std::exception& e) {
            rows[j].lambda = fixed.lambda;
            rows[j].t_f = spec.t_f;
            rows[j].coupling = spec.coupling;
            rows[j].protocol = spec.protocol;
            rows[j].error = e.what();
        }
    };
    if (fixed.lab.threads <= 1) {
        for (std::size_t j = 0; j < values.size(); ++j) run_row(j);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t j = next.fetch_add(1); j < values.size(); j = next.fetch_add(1))
                run_row(j);
        };
        std::vector<std::future<void>> futs;
        for (int t = 0; t < fixed.lab.threads; ++t)
            futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs) f.get();
    }
    return rows;
}

FidelityReport run_scenario(const SweepSpec& spec, double lambda) {
    const Grid g(spec.lab.box_half_width, spec.lab.n_x);
    auto protocol = make_protocol(spec.protocol, spec.a, spec.gamma, spec.t_f, spec.coupling, g);
    const SplittingLab lab(protocol, spec.lab);
    return lab.run(lambda);
}

} // namespace ffsplit
