#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

// Brute-force references. Nothing here calls into the library.
namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting on a dense copy.
std::vector<double> dense_solve(Matrix a, std::vector<double> b);

/// Mean-of-positions ranks by counting, O(n^2).
std::vector<double> ranks(const std::vector<double>& x);
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// 1..4 for quadrants I..IV, strict "above" on both axes.
int quadrant(double impact, double ctv, double impact_threshold, double ctv_threshold);

/// Random diagonally dominant technosphere-style matrix: +1 diagonal,
/// off-diagonal entries <= 0 with column sums of |offdiag| below `max_offdiag`.
Matrix random_technosphere(std::size_t n, std::mt19937_64& rng, double density = 0.3, double max_offdiag = 0.6);

/// Relative difference against the larger magnitude, floored at `floor`.
double rel_diff(double a, double b, double floor = 1e-300);

/// Small database document: the six flows co2_fossil (air), water_consumed
/// (resource), phosphate, nitrate (water), so2 (air), heavy_metals_soil, plus
/// an uncharacterized "argon", and one category per flow with factor 1.
std::string toy_database(const std::string& processes_json, const std::string& scenarios_json = "[]");

}  // namespace oracle
