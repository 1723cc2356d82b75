#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ffsplit/designer.hpp"
#include "ffsplit/protocols.hpp"
#include "ffsplit/solver.hpp"
#include "ffsplit/trace.hpp"
#include "ffsplit/two_mode.hpp"

namespace ffsplit {

// V_lambda = V_FF + lambda * theta(x), theta(0) = 1/2. The offset is
// time-independent; negative lambda gives the mirror case.
PotentialTrace perturb(const PotentialTrace& trace, double lambda);

struct FidelityReport {
    double lambda = 0.0;
    double t_f = 0.0;
    double coupling = 0.0;
    std::string protocol;

    double F_S = 0.0;   // |<psi-_0(tf)|psi-_l(tf)>|
    double F_D0 = 0.0;  // |<psi-_0(tf)|psi(tf)>|
    double F_D = 0.0;   // |<psi(tf)|psi-_l(tf)>|
    double F_I = 0.0;   // |<psi-_l(0)|psi-_0(0)>|

    std::optional<double> F_S_2m, F_D0_2m, F_D_2m;
    std::optional<double> sudden, adiabatic;

    std::string error;  // per-row failure in sweeps; empty when ok
};

struct LabOptions {
    double box_half_width = 12.0;
    int n_x = 513;
    int design_samples = 4000;
    long prop_steps = 1 << 17;
    int extraction_stride = 8;      // eigensolve stride for the two-mode model
    bool unperturbed_initial = false;
    bool two_mode = false;
    bool criteria = false;
    int threads = 1;
};

// One designed splitting experiment: the trace is built once and shared
// by all perturbation strengths. Immutable after construction; run() is
// const and safe to call from parallel workers.
class SplittingLab {
public:
    SplittingLab(std::shared_ptr<const DensityProtocol> protocol, const LabOptions& opts);

    const PotentialTrace& trace() const { return design_.trace; }
    const DesignResult& design() const { return design_; }
    const Grid& grid() const { return design_.trace.grid(); }
    const DensityProtocol& protocol() const { return *protocol_; }
    const LabOptions& options() const { return opts_; }

    // Ground-state pair of the unperturbed endpoints (gN-aware).
    const EigenPair& ground0_initial() const { return ground0_0_; }
    const EigenPair& ground0_final() const { return ground0_tf_; }

    // Two-mode extraction of the unperturbed design (gN = 0 only). The
    // eigensolves are cached; the bias-dependent part is rebuilt per call.
    TwoModeSystem two_mode_system(double lambda) const;
    double tunneling_rate_final() const;  // delta(t_f)

    FidelityReport run(double lambda) const;

private:
    EigenPair slice_ground(const PotentialTrace& tr, double t, const RealField* guess) const;

    struct ExtractionCache {
        std::mutex mutex;
        std::optional<std::vector<std::array<EigenPair, 2>>> pairs;
        std::optional<BareBasis> basis;
    };

    std::shared_ptr<const DensityProtocol> protocol_;
    LabOptions opts_;
    DesignResult design_;
    EigenPair ground0_0_, ground0_tf_;
    std::unique_ptr<ExtractionCache> cache_;
};

// Build the protocol named in `kind`; for "bec" the chi profiles are
// computed from the harmonic trap with couplings gN and gN/2.
std::shared_ptr<const DensityProtocol> make_protocol(const std::string& kind, double a,
                                                     double gamma, double t_f, double coupling,
                                                     const Grid& g);

struct SweepSpec {
    std::string protocol = "two_bump";
    double a = 4.1281;
    double gamma = 1.0;
    double t_f = 249.6;
    double coupling = 0.0;
    double lambda = 0.0;  // the fixed perturbation for t_f and gN sweeps
    LabOptions lab;
};

enum class SweepAxis { Lambda, Duration, Coupling };

// One report per value; rows are independent and failures are recorded
// per row without aborting the sweep.
std::vector<FidelityReport> sweep(SweepAxis axis, const std::vector<double>& values,
                                  const SweepSpec& fixed);

FidelityReport run_scenario(const SweepSpec& spec, double lambda);

} // namespace ffsplit
