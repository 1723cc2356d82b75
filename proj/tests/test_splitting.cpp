#include <doctest.h>

#include <cmath>

#include "ffsplit/numerics.hpp"
#include "ffsplit/splitting.hpp"
#include "fixtures.hpp"

using namespace ffsplit;
using namespace ffsplit::testing;

TEST_CASE("step perturbation offsets") {
    const SplittingLab& lab = small_lab();
    const Grid& g = lab.grid();
    const PotentialTrace& base = lab.trace();

    const PotentialTrace same = perturb(base, 0.0);
    for (int k : {0, 300}) {
        for (int i = 0; i < g.size(); ++i) CHECK(same.at(k, i) == base.at(k, i));
    }

    const double lambda = 0.37;
    const PotentialTrace vl = perturb(base, lambda);
    for (int k : {0, 150, 600}) {
        CHECK(vl.at(k, g.size() - 1) - base.at(k, g.size() - 1) == doctest::Approx(lambda));
        CHECK(vl.at(k, 0) == base.at(k, 0));
        CHECK(vl.at(k, g.center_index()) - base.at(k, g.center_index()) ==
              doctest::Approx(0.5 * lambda));
    }
}

TEST_CASE("unperturbed scenario: unit structural fidelity and design self-consistency") {
    const SplittingLab& lab = small_lab();
    const FidelityReport rep = lab.run(0.0);
    CHECK(std::abs(rep.F_S - 1.0) < 1e-9);
    CHECK(std::abs(rep.F_I - 1.0) < 1e-9);
    CHECK(rep.F_D0 >= 0.999);
    CHECK(rep.F_D >= 0.999);
    CHECK(std::abs(rep.F_D0 - rep.F_D) < 1e-6);
}

TEST_CASE("large perturbation collapses the structural fidelity to 1/sqrt2") {
    const SplittingLab& lab = small_lab();
    const double delta_f = lab.tunneling_rate_final();
    const FidelityReport rep = lab.run(100.0 * delta_f);
    CHECK(std::abs(rep.F_S - 1.0 / std::sqrt(2.0)) < 0.01);
}

TEST_CASE("mirror symmetry: negative lambda gives identical fidelities") {
    const SplittingLab& lab = small_lab();
    const double lambda = 3.0 * lab.tunneling_rate_final();
    const FidelityReport plus = lab.run(lambda);
    const FidelityReport minus = lab.run(-lambda);
    CHECK(plus.F_S == doctest::Approx(minus.F_S).epsilon(1e-7));
    CHECK(plus.F_D0 == doctest::Approx(minus.F_D0).epsilon(1e-7));
    CHECK(plus.F_D == doctest::Approx(minus.F_D).epsilon(1e-7));
    CHECK(plus.F_I == doctest::Approx(minus.F_I).epsilon(1e-7));
}

TEST_CASE("initial-state choice is negligible at small perturbation") {
    const SplittingLab& lab = small_lab();
    const double lambda = 0.1 * lab.tunneling_rate_final();
    const FidelityReport with_perturbed = lab.run(lambda);
    REQUIRE(with_perturbed.F_I > 0.9999);

    LabOptions opts = lab.options();
    opts.unperturbed_initial = true;
    auto protocol = std::make_shared<TwoBumpProtocol>(kSmallSeparation, 1.0, kSmallDuration);
    const SplittingLab alt(protocol, opts);
    const FidelityReport with_unperturbed = alt.run(lambda);
    CHECK(std::abs(with_perturbed.F_D0 - with_unperturbed.F_D0) < 1e-3);
}

TEST_CASE("lambda sweep: single zero row and error capture") {
    SweepSpec spec;
    spec.protocol = "two_bump";
    spec.a = kSmallSeparation;
    spec.t_f = kSmallDuration;
    spec.lab.box_half_width = 10.0;
    spec.lab.n_x = 257;
    spec.lab.design_samples = 600;
    spec.lab.prop_steps = 1 << 13;
    const auto rows = sweep(SweepAxis::Lambda, {0.0}, spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].error.empty());
    CHECK(std::abs(rows[0].F_S - 1.0) < 1e-9);
}

TEST_CASE("two-mode columns populated on request") {
    SweepSpec spec;
    spec.a = kSmallSeparation;
    spec.t_f = kSmallDuration;
    spec.lab.box_half_width = 10.0;
    spec.lab.n_x = 257;
    spec.lab.design_samples = 600;
    spec.lab.prop_steps = 1 << 13;
    spec.lab.extraction_stride = 10;
    spec.lab.two_mode = true;
    spec.lab.criteria = true;
    const auto rows = sweep(SweepAxis::Lambda, {1e-4}, spec);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].error.empty());
    REQUIRE(rows[0].F_S_2m.has_value());
    REQUIRE(rows[0].sudden.has_value());
    CHECK(*rows[0].sudden == doctest::Approx(1e-4 * kSmallDuration / 2));
    CHECK(std::abs(*rows[0].F_S_2m - rows[0].F_S) < 0.03);
    CHECK(std::abs(*rows[0].F_D0_2m - rows[0].F_D0) < 0.03);
    CHECK(std::abs(*rows[0].F_D_2m - rows[0].F_D) < 0.03);
}

TEST_CASE("bec scenario keeps the dynamical fidelity at zero perturbation") {
    SweepSpec spec;
    spec.protocol = "bec";
    spec.a = kSmallSeparation;
    spec.t_f = kSmallDuration;
    spec.coupling = 1.0;
    spec.lab.box_half_width = 10.0;
    spec.lab.n_x = 257;
    spec.lab.design_samples = 600;
    spec.lab.prop_steps = 1 << 13;
    const FidelityReport rep = run_scenario(spec, 0.0);
    CHECK(std::abs(rep.F_S - 1.0) < 1e-9);
    CHECK(rep.F_D0 >= 0.995);
    CHECK(rep.coupling == 1.0);
}
