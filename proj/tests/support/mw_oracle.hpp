#pragma once

// Brute-force two-sided Mann-Whitney oracle: walks every bitmask of group
// assignments and computes U by direct pair counting. Deliberately independent
// of the library's rank-sum + subset-enumeration route.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline double mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> all(a);
    all.insert(all.end(), b.begin(), b.end());
    const std::size_t n = all.size();
    const std::size_t n1 = a.size();

    auto u_of = [&](unsigned mask) {
        double u = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (mask >> j & 1u) continue;
                if (all[i] > all[j]) u += 1.0;
                else if (all[i] == all[j]) u += 0.5;
            }
        }
        return u;
    };

    const unsigned observed_mask = (1u << n1) - 1u;
    const double mu = static_cast<double>(n1) * static_cast<double>(n - n1) / 2.0;
    const double dev_obs = std::abs(u_of(observed_mask) - mu);

    std::uint64_t total = 0, extreme = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
        ++total;
        if (std::abs(u_of(mask) - mu) >= dev_obs - 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace oracle
