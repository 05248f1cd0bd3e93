#include "verdalca/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "verdalca/errors.hpp"

namespace verdalca {

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j + 1);  // mean of positions i+1 .. j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y, bool* degenerate) {
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const bool flat = sxx == 0.0 || syy == 0.0;
    if (degenerate) *degenerate = flat;
    if (flat) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Correlation spearman_rocc(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("spearman_rocc: inputs differ in length");
    if (x.size() < 2) throw ValidationError("spearman_rocc: needs at least 2 observations");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    Correlation c;
    c.rho = pearson(rx, ry, &c.degenerate);
    return c;
}

std::string_view to_string(CtvMode m) { return m == CtvMode::spearman ? "spearman" : "two_step"; }

CtvMode parse_ctv_mode(std::string_view s) {
    if (s == "spearman") return CtvMode::spearman;
    if (s == "two_step") return CtvMode::two_step;
    throw ValidationError("unknown CTV mode \"" + std::string(s) + "\"");
}

CtvResult contribution_to_variance(std::span<const double> rho, CtvMode mode) {
    CtvResult out;
    out.ctv.assign(rho.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (mode == CtvMode::two_step && std::abs(rho[i]) < kScreeningRho) continue;
        out.ctv[i] = rho[i] * rho[i];
        total += out.ctv[i];
    }
    if (total == 0.0) {
        std::fill(out.ctv.begin(), out.ctv.end(), 0.0);
        out.degenerate = true;
        return out;
    }
    for (double& c : out.ctv) c /= total;
    return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> x) {
    Summary s;
    if (x.empty()) return s;
    const double n = static_cast<double>(x.size());
    s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (n - 1.0));
    }
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    s.p2_5 = quantile_sorted(sorted, 0.025);
    s.p50 = quantile_sorted(sorted, 0.5);
    s.p97_5 = quantile_sorted(sorted, 0.975);
    return s;
}

}  // namespace verdalca
