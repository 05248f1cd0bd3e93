#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace verdalca {

/// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

double pearson(std::span<const double> x, std::span<const double> y, bool* degenerate = nullptr);

struct Correlation {
    double rho = 0.0;
    bool degenerate = false;  ///< an input had zero variance; rho reported as 0
};

/// Pearson correlation of the average ranks. Needs n >= 2.
Correlation spearman_rocc(std::span<const double> x, std::span<const double> y);

enum class CtvMode {
    spearman,  ///< ctv_i = rho_i^2 / sum rho^2
    two_step,  ///< screen |rho| below kScreeningRho first, then normalize the rest
};
inline constexpr double kScreeningRho = 0.05;
std::string_view to_string(CtvMode);
CtvMode parse_ctv_mode(std::string_view);

struct CtvResult {
    std::vector<double> ctv;
    bool degenerate = false;  ///< sum of rho^2 was zero; all ctv are 0
};

CtvResult contribution_to_variance(std::span<const double> rho, CtvMode mode = CtvMode::spearman);

/// Type-7 (linear interpolation) quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  ///< sample standard deviation (n-1); 0 for n < 2
    double p2_5 = 0.0;
    double p50 = 0.0;
    double p97_5 = 0.0;
    bool operator==(const Summary&) const = default;
};

Summary summarize(std::span<const double> x);

}  // namespace verdalca
