#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mhsim/parameters.hpp"

namespace mhsim {

// Discretization rule shared by every variable in an analysis. Variables
// with at most `exact_threshold` distinct values are binned on those
// values; others on equal-frequency quantile bins (deciles by default)
// whose duplicate edges are merged.
struct Binning {
  std::size_t quantiles = 10;
  std::size_t exact_threshold = 20;

  std::string describe() const;
};

// Bin index per value.
std::vector<int> discretize(std::span<const double> values,
                            const Binning& binning = {});

// Shannon entropy in bits of the binned empirical distribution.
// Throws ParameterError on empty input.
double entropy(std::span<const double> values, const Binning& binning = {});

// H(Y | beta) in bits.
double conditional_entropy(std::span<const double> y,
                           std::span<const double> beta,
                           const Binning& binning = {});

// (H(Y) - H(Y|beta)) / H(Y); 0 when H(Y) = 0.
double information_gain(std::span<const double> beta, std::span<const double> y,
                        const Binning& binning = {});

struct SampleRecord {
  ParameterVector params;
  double throughput = 0.0;
};

struct SampleSet {
  std::vector<SampleRecord> records;
  std::string provenance;
};

struct InfoGainTable {
  std::array<double, kAllParams.size()> gains{};
  std::string bin_spec;
  std::string warning;  // set when the sample is small

  double gain(Param p) const { return gains[static_cast<std::size_t>(p)]; }
  // Parameters ordered by decreasing gain (stable on ties).
  std::vector<Param> ranking() const;
};

inline constexpr std::size_t kRecommendedSamples = 100;

InfoGainTable info_gain_table(const SampleSet& samples,
                              const Binning& binning = {});

// CSV columns P,E,O,B,W,BL1,BL2,BL3,throughput.
void write_samples_csv(const SampleSet& samples, std::ostream& out);
SampleSet read_samples_csv(std::istream& in);
SampleSet load_samples_csv(const std::filesystem::path& path);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace mhsim
