#include "jost_mesh.hpp"

#include "jostlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace jostlab::detail {

JostMesh::JostMesh(const SampledPotential& V, double max_step) {
    if (!(max_step > 0.0)) throw InvalidArgument("Jost mesh: max_step must be > 0");
    const auto support = V.spec().effective_support();
    if (!support) return;

    const SpatialGrid& grid = V.grid();
    const double snap = 1e-9 * grid.spacing();
    lo_ = support->first;
    hi_ = support->second;

    // Key points: support ends, interior breakpoints, grid nodes inside.
    struct Key {
        double x;
        std::ptrdiff_t node;
    };
    std::vector<Key> keys;
    keys.push_back({lo_, -1});
    for (double b : V.spec().breakpoints()) {
        if (b > lo_ && b < hi_) keys.push_back({b, -1});
    }
    keys.push_back({hi_, -1});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        if (x >= lo_ - snap && x <= hi_ + snap) keys.push_back({x, static_cast<std::ptrdiff_t>(i)});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.x < b.x; });

    // Merge keys closer than the snap distance; breakpoints keep their exact position.
    std::vector<Key> merged;
    for (const Key& k : keys) {
        if (!merged.empty() && k.x - merged.back().x <= snap) {
            if (k.node >= 0) merged.back().node = k.node;
            if (k.node < 0) merged.back().x = k.x;
            continue;
        }
        merged.push_back(k);
    }
    // Clamp to the support so the first and last stations are lo and hi exactly.
    merged.front().x = lo_;
    merged.back().x = hi_;

    const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double comm = std::sqrt(3.0) / 12.0;
    const PotentialSpec& spec = V.spec();

    node_at_station_.push_back(merged.front().node);
    for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
        const double x0 = merged[k].x;
        const double gap = merged[k + 1].x - x0;
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(gap / max_step - 1e-9)));
        const double h = gap / static_cast<double>(pieces);
        for (std::size_t p = 0; p < pieces; ++p) {
            const double xl = x0 + static_cast<double>(p) * h;
            const double v1 = spec(xl + c1 * h);
            const double v2 = spec(xl + c2 * h);
            intervals_.push_back({h, 0.5 * (v1 + v2), comm * h * h * (v1 - v2)});
            node_at_station_.push_back(p + 1 == pieces ? merged[k + 1].node : -1);
        }
    }

    for (std::ptrdiff_t node : node_at_station_) {
        if (node < 0) continue;
        const auto u = static_cast<std::size_t>(node);
        if (first_node_ > last_node_) {
            first_node_ = u;
            last_node_ = u;
        } else {
            first_node_ = std::min(first_node_, u);
            last_node_ = std::max(last_node_, u);
        }
    }
}

void JostMesh::transfer_matrices(double lambda, std::vector<Mat2>& out) const {
    out.resize(intervals_.size());
    const double l2 = lambda * lambda;
    for (std::size_t k = 0; k < intervals_.size(); ++k) {
        const Interval& iv = intervals_[k];
        const double c = iv.h * (iv.vbar - l2);
        const double delta = iv.a * iv.a + iv.h * c;
        double C;
        double S;
        if (std::abs(delta) < 1e-8) {
            C = 1.0 + delta * (0.5 + delta / 24.0);
            S = 1.0 + delta * (1.0 / 6.0 + delta / 120.0);
        } else if (delta > 0.0) {
            const double r = std::sqrt(delta);
            C = std::cosh(r);
            S = std::sinh(r) / r;
        } else {
            const double r = std::sqrt(-delta);
            C = std::cos(r);
            S = std::sin(r) / r;
        }
        out[k] = {C + S * iv.a, S * iv.h, S * c, C - S * iv.a};
    }
}

std::pair<cplx, cplx> JostMesh::sweep_forward(const std::vector<Mat2>& M, cplx f, cplx df, cplx* f_out,
                                              cplx* df_out) const {
    auto record = [&](std::size_t station) {
        const std::ptrdiff_t node = node_at_station_[station];
        if (node < 0) return;
        if (f_out) f_out[node] = f;
        if (df_out) df_out[node] = df;
    };
    record(0);
    for (std::size_t k = 0; k < M.size(); ++k) {
        const Mat2& m = M[k];
        const cplx nf = m.m11 * f + m.m12 * df;
        const cplx ndf = m.m21 * f + m.m22 * df;
        f = nf;
        df = ndf;
        record(k + 1);
    }
    return {f, df};
}

std::pair<cplx, cplx> JostMesh::sweep_backward(const std::vector<Mat2>& M, cplx f, cplx df, cplx* f_out,
                                               cplx* df_out) const {
    auto record = [&](std::size_t station) {
        const std::ptrdiff_t node = node_at_station_[station];
        if (node < 0) return;
        if (f_out) f_out[node] = f;
        if (df_out) df_out[node] = df;
    };
    record(M.size());
    for (std::size_t k = M.size(); k-- > 0;) {
        // exp(-Omega) = adjugate of exp(Omega), since det = 1
        const Mat2& m = M[k];
        const cplx nf = m.m22 * f - m.m12 * df;
        const cplx ndf = -m.m21 * f + m.m11 * df;
        f = nf;
        df = ndf;
        record(k);
    }
    return {f, df};
}

}  // namespace jostlab::detail
