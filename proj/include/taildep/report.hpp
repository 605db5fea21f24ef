// TailReport: the estimator-side output record — pairwise rank correlations,
// the tail coefficient with its k_n, scale constants, residual dependence
// indices per pair and per subset, and optional empirical tail tables.
// Serialization lives in the cli module.

#ifndef TAILDEP_REPORT_HPP
#define TAILDEP_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taildep/alpha_qp.hpp"

namespace taildep {

struct PairEntry {
  int i = 0, j = 0;  // 0-based column indices
  double tau = 0.0;
  double rho = 0.0;
  double eta = 0.0;  // ((1+rho)/2)^{theta/2} with the report's theta
};

struct SubsetEntry {
  std::vector<int> index_set;  // 0-based
  double q = 0.0;
  std::vector<int> active_set;
  std::vector<double> minimizer;
  std::vector<double> mu;
  double eta = 0.0;          // q^{-theta/2}
  double eta_literal = 0.0;  // q^{-theta}
  bool pd_repaired = false;
  std::optional<char> trivariate_branch;
};

struct EmpiricalRow {
  double u = 0.0;
  std::vector<double> x;
  double value = 0.0;
  long count = 0;
};

struct TailReport {
  long n = 0;
  int k = 0;
  int k_n = 0;
  double theta = 0.0;
  double c_literal = 0.0;
  double c_corrected = 0.0;
  std::vector<PairEntry> pairs;
  std::vector<SubsetEntry> subsets;
  std::vector<EmpiricalRow> empirical_s;                // rank-based S~ table
  std::vector<std::pair<double, double>> empirical_chi; // (u, chi_hat(u))
  std::uint64_t seed = 0;      // 0 when the data came from a file
  std::string source;          // file path or model descriptor
};

}  // namespace taildep

#endif  // TAILDEP_REPORT_HPP
