#pragma once

#include <vector>

#include "cifc/bounds.hpp"
#include "cifc/channel.hpp"

namespace cifc::testutil {

inline CifcChannel random_channel(Rng& rng, int cx1, int cx2, int cy1, int cy2) {
    std::vector<double> kernel;
    kernel.reserve(static_cast<std::size_t>(cx1) * cx2 * cy1 * cy2);
    for (int x1 = 0; x1 < cx1; ++x1)
        for (int x2 = 0; x2 < cx2; ++x2) {
            std::vector<double> row(static_cast<std::size_t>(cy1) * cy2);
            double s = 0.0;
            for (double& v : row) {
                v = rng.next_exp();
                s += v;
            }
            for (double v : row) kernel.push_back(v / s);
        }
    return CifcChannel::from_kernel(std::move(kernel), cx1, cx2, cy1, cy2);
}

inline CifcChannel random_det_channel(Rng& rng, int cx1, int cx2, int cy1, int cy2) {
    DeterministicMaps m;
    m.f1.assign(cx1, std::vector<int>(cx2, 0));
    m.f2.emplace(cx1, std::vector<int>(cx2, 0));
    for (int x1 = 0; x1 < cx1; ++x1)
        for (int x2 = 0; x2 < cx2; ++x2) {
            m.f1[x1][x2] = static_cast<int>(rng.next_u64() % cy1);
            (*m.f2)[x1][x2] = static_cast<int>(rng.next_u64() % cy2);
        }
    return CifcChannel::from_maps(m, cx1, cx2, cy1, cy2);
}

inline CifcChannel random_semidet_channel(Rng& rng, int cx1, int cx2, int cy1, int cy2) {
    std::vector<double> kernel;
    kernel.reserve(static_cast<std::size_t>(cx1) * cx2 * cy1 * cy2);
    for (int x1 = 0; x1 < cx1; ++x1)
        for (int x2 = 0; x2 < cx2; ++x2) {
            int y1 = static_cast<int>(rng.next_u64() % cy1);
            std::vector<double> row(cy2);
            double s = 0.0;
            for (double& v : row) {
                v = rng.next_exp();
                s += v;
            }
            for (int a = 0; a < cy1; ++a)
                for (int b = 0; b < cy2; ++b) kernel.push_back(a == y1 ? row[b] / s : 0.0);
        }
    return CifcChannel::from_kernel(std::move(kernel), cx1, cx2, cy1, cy2);
}

inline bool same_region(const RatePolytope2D& a, const RatePolytope2D& b, double tol = 1e-9) {
    if (a.vertices().size() != b.vertices().size()) return false;
    for (std::size_t i = 0; i < a.vertices().size(); ++i) {
        if (std::abs(a.vertices()[i][0] - b.vertices()[i][0]) > tol) return false;
        if (std::abs(a.vertices()[i][1] - b.vertices()[i][1]) > tol) return false;
    }
    return true;
}

} // namespace cifc::testutil
