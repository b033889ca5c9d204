#include "mhsim/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mhsim {

std::string Binning::describe() const {
  return "equal-frequency " + std::to_string(quantiles) +
         "-quantile bins (merged duplicate edges); exact values when <= " +
         std::to_string(exact_threshold) + " distinct";
}

std::vector<int> discretize(std::span<const double> values,
                            const Binning& binning) {
  if (values.empty()) throw ParameterError("discretize: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<int> bins(values.size());
  if (distinct.size() <= binning.exact_threshold) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      bins[i] = static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), values[i]) -
          distinct.begin());
    }
    return bins;
  }
  const std::size_t n = sorted.size();
  const std::size_t q = std::max<std::size_t>(binning.quantiles, 1);
  std::vector<double> edges;
  for (std::size_t k = 1; k < q; ++k) edges.push_back(sorted[k * n / q]);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    bins[i] = static_cast<int>(
        std::upper_bound(edges.begin(), edges.end(), values[i]) -
        edges.begin());
  }
  return bins;
}

namespace {

double entropy_of_counts(const std::map<int, std::size_t>& counts,
                         std::size_t total) {
  double h = 0.0;
  for (const auto& [bin, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double entropy_of_bins(const std::vector<int>& bins) {
  std::map<int, std::size_t> counts;
  for (int b : bins) ++counts[b];
  return entropy_of_counts(counts, bins.size());
}

double conditional_of_bins(const std::vector<int>& y,
                           const std::vector<int>& beta) {
  std::map<int, std::map<int, std::size_t>> joint;
  for (std::size_t i = 0; i < y.size(); ++i) ++joint[beta[i]][y[i]];
  double h = 0.0;
  for (const auto& [b, ys] : joint) {
    std::size_t group = 0;
    for (const auto& [bin, count] : ys) group += count;
    h += static_cast<double>(group) / static_cast<double>(y.size()) *
         entropy_of_counts(ys, group);
  }
  return h;
}

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ParameterError("information gain: sample lengths differ");
  }
  if (a.empty()) throw ParameterError("information gain: empty samples");
}

}  // namespace

double entropy(std::span<const double> values, const Binning& binning) {
  if (values.empty()) throw ParameterError("entropy: empty input");
  return entropy_of_bins(discretize(values, binning));
}

double conditional_entropy(std::span<const double> y,
                           std::span<const double> beta,
                           const Binning& binning) {
  check_pair(y, beta);
  return conditional_of_bins(discretize(y, binning), discretize(beta, binning));
}

double information_gain(std::span<const double> beta, std::span<const double> y,
                        const Binning& binning) {
  check_pair(beta, y);
  const auto yb = discretize(y, binning);
  const double hy = entropy_of_bins(yb);
  if (hy == 0.0) return 0.0;
  const double hyb = conditional_of_bins(yb, discretize(beta, binning));
  return std::clamp((hy - hyb) / hy, 0.0, 1.0);
}

std::vector<Param> InfoGainTable::ranking() const {
  std::vector<Param> order(kAllParams.begin(), kAllParams.end());
  std::stable_sort(order.begin(), order.end(), [&](Param a, Param b) {
    return gain(a) > gain(b);
  });
  return order;
}

InfoGainTable info_gain_table(const SampleSet& samples,
                              const Binning& binning) {
  if (samples.records.empty()) {
    throw ParameterError("info_gain_table: no samples");
  }
  InfoGainTable table;
  table.bin_spec = binning.describe();
  if (samples.records.size() < kRecommendedSamples) {
    table.warning = "only " + std::to_string(samples.records.size()) +
                    " samples; at least " +
                    std::to_string(kRecommendedSamples) + " recommended";
  }
  std::vector<double> y;
  y.reserve(samples.records.size());
  for (const auto& r : samples.records) y.push_back(r.throughput);
  std::vector<double> beta(samples.records.size());
  for (std::size_t k = 0; k < kAllParams.size(); ++k) {
    for (std::size_t i = 0; i < samples.records.size(); ++i) {
      beta[i] = samples.records[i].params.get(kAllParams[k]);
    }
    table.gains[k] = information_gain(beta, y, binning);
  }
  return table;
}

void write_samples_csv(const SampleSet& samples, std::ostream& out) {
  out << "P,E,O,B,W,BL1,BL2,BL3,throughput\n";
  char buf[64];
  auto num = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string_view(buf, static_cast<std::size_t>(end - buf));
  };
  for (const auto& r : samples.records) {
    const auto& p = r.params;
    out << p.P << ',' << p.E << ',' << p.O << ',' << p.B << ',' << num(p.W)
        << ',' << p.BL1 << ',' << p.BL2 << ',' << p.BL3 << ','
        << num(r.throughput) << '\n';
  }
}

SampleSet read_samples_csv(std::istream& in) {
  SampleSet set;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "P,E,O,B,W,BL1,BL2,BL3,throughput") {
        throw FormatError("samples: line " + std::to_string(line_no) +
                          ": expected header P,E,O,B,W,BL1,BL2,BL3,throughput");
      }
      header = true;
      continue;
    }
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw FormatError("samples: line " + std::to_string(line_no) +
                          ": bad number '" + cell + "'");
      }
      fields.push_back(v);
    }
    if (fields.size() != 9) {
      throw FormatError("samples: line " + std::to_string(line_no) +
                        ": expected 9 columns");
    }
    SampleRecord r;
    r.params.P = static_cast<int>(fields[0]);
    r.params.E = static_cast<int>(fields[1]);
    r.params.O = static_cast<int>(fields[2]);
    r.params.B = static_cast<int>(fields[3]);
    r.params.W = fields[4];
    r.params.BL1 = static_cast<int>(fields[5]);
    r.params.BL2 = static_cast<int>(fields[6]);
    r.params.BL3 = static_cast<int>(fields[7]);
    r.throughput = fields[8];
    if (r.throughput < 0.0) {
      throw FormatError("samples: line " + std::to_string(line_no) +
                        ": negative throughput");
    }
    set.records.push_back(r);
  }
  if (!header) throw FormatError("samples: missing header");
  return set;
}

SampleSet load_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  auto set = read_samples_csv(in);
  set.provenance = path.string();
  return set;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ParameterError("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace mhsim
