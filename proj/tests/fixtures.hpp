#pragma once

#include <memory>

#include "ffsplit/designer.hpp"
#include "ffsplit/protocols.hpp"
#include "ffsplit/splitting.hpp"

namespace ffsplit::testing {

// Paper-scale scenario: a = 4 um at omega = 780 rad/s, t_f = 320 ms.
inline constexpr double kSeparation = 4.126;
inline constexpr double kDuration = 249.6;

// Small scenario for tests that need full pipelines but not paper scale.
inline constexpr double kSmallSeparation = 3.0;
inline constexpr double kSmallDuration = 30.0;

inline const Grid& default_grid() {
    static const Grid g(12.0, 513);
    return g;
}

inline const DesignResult& paper_design() {
    static const DesignResult d = [] {
        const TwoBumpProtocol p(kSeparation, 1.0, kDuration);
        return design_potential(p, default_grid(), TimeMesh(kDuration, 4000), 0.0);
    }();
    return d;
}

inline const SplittingLab& small_lab() {
    static const SplittingLab lab = [] {
        LabOptions opts;
        opts.box_half_width = 10.0;
        opts.n_x = 257;
        opts.design_samples = 600;
        opts.prop_steps = 1 << 14;
        opts.extraction_stride = 10;
        auto p = std::make_shared<TwoBumpProtocol>(kSmallSeparation, 1.0, kSmallDuration);
        return SplittingLab(p, opts);
    }();
    return lab;
}

} // namespace ffsplit::testing
