#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ffsplit/grid.hpp"

namespace ffsplit {

struct TraceMeta {
    std::string protocol;
    double separation = 0.0;
    double gamma = 1.0;
    double coupling = 0.0;      // dimensionless gN used in the design
    double lambda = 0.0;        // step perturbation added on top, if any
    double eps_r = 1e-12;       // reliability threshold on r^2 (relative)
};

// Potential V(x_i, t_k) sampled on Grid x TimeMesh, with the per-time
// interval [lo, hi] of nodes where the design density was above the
// reliability threshold. Values outside that interval are clamped copies
// of the edge values.
class PotentialTrace {
public:
    PotentialTrace(Grid grid, TimeMesh mesh)
        : grid_(std::move(grid)), mesh_(mesh),
          v_(static_cast<std::size_t>(mesh_.samples()) * grid_.size(), 0.0),
          lo_(mesh_.samples(), 0), hi_(mesh_.samples(), grid_.size() - 1) {}

    const Grid& grid() const { return grid_; }
    const TimeMesh& mesh() const { return mesh_; }

    double& at(int k, int i) { return v_[static_cast<std::size_t>(k) * grid_.size() + i]; }
    double at(int k, int i) const { return v_[static_cast<std::size_t>(k) * grid_.size() + i]; }

    const double* slice_ptr(int k) const { return v_.data() + static_cast<std::size_t>(k) * grid_.size(); }

    RealField slice(int k) const {
        const double* p = slice_ptr(k);
        return RealField(p, p + grid_.size());
    }

    // Linear interpolation between time samples, written into out.
    void interpolate(double t, RealField& out) const {
        const double tf = mesh_.t_final();
        if (t <= 0.0) { copy_slice(0, out); return; }
        if (t >= tf) { copy_slice(mesh_.steps(), out); return; }
        const double u = t / mesh_.dt();
        int k = static_cast<int>(u);
        if (k >= mesh_.steps()) k = mesh_.steps() - 1;
        const double w = u - k;
        const double* p0 = slice_ptr(k);
        const double* p1 = slice_ptr(k + 1);
        out.resize(grid_.size());
        for (int i = 0; i < grid_.size(); ++i) out[i] = (1.0 - w) * p0[i] + w * p1[i];
    }

    // Index of the mesh node at time t; throws if t is not a node.
    int node_index(double t) const {
        const double u = t / mesh_.dt();
        const int k = static_cast<int>(u + 0.5);
        if (k < 0 || k > mesh_.steps() || std::abs(u - k) > 1e-6)
            throw std::invalid_argument("PotentialTrace: time is not a mesh node");
        return k;
    }

    int reliable_lo(int k) const { return lo_[k]; }
    int reliable_hi(int k) const { return hi_[k]; }
    void set_reliable(int k, int lo, int hi) { lo_[k] = lo; hi_[k] = hi; }

    TraceMeta meta;

private:
    void copy_slice(int k, RealField& out) const {
        const double* p = slice_ptr(k);
        out.assign(p, p + grid_.size());
    }

    Grid grid_;
    TimeMesh mesh_;
    std::vector<double> v_;
    std::vector<int> lo_, hi_;
};

} // namespace ffsplit
