#include "hbw/metrics.hpp"

#include "hbw/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hbw {

std::optional<double> sparsity_ratio(std::size_t samples, std::size_t coefficients) {
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "sparsity ratio needs at least one sample");
  if (coefficients == 0) return std::nullopt;
  return static_cast<double>(samples) / static_cast<double>(coefficients);
}

double snr_db(std::span<const double> f, std::span<const double> fa) {
  if (f.size() != fa.size()) throw Error(ErrorCode::LengthMismatch, "signal and approximation lengths differ");
  double energy = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    energy += f[i] * f[i];
    const double e = f[i] - fa[i];
    error += e * e;
  }
  if (energy == 0.0) throw Error(ErrorCode::InvalidArgument, "SNR is undefined for a zero-energy signal");
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(energy / error);
}

std::string format_snr(double snr) {
  if (std::isinf(snr)) return snr > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", snr);
  return buf;
}

std::string format_sr(const std::optional<double>& sr) {
  if (!sr) return "empty";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *sr);
  return buf;
}

QualityTable::QualityTable(std::vector<std::string> strategies) : strategies_(std::move(strategies)) {}

void QualityTable::add_row(std::string label, std::vector<StrategyResult> results) {
  if (results.size() != strategies_.size())
    throw Error(ErrorCode::InvalidArgument, "one result per strategy is required");
  rows_.emplace_back(std::move(label), std::move(results));
}

std::string QualityTable::to_text() const {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Dict."};
  for (const auto& s : strategies_) {
    header.push_back(s + " SR");
    header.push_back(s + " SNR");
  }
  cells.push_back(header);
  for (const auto& [label, results] : rows_) {
    std::vector<std::string> row{label};
    for (const auto& r : results) {
      row.push_back(format_sr(r.sr));
      row.push_back(format_snr(r.snr));
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << " | ";
      const std::size_t pad = width[c] - row[c].size();
      if (c == 0)
        os << row[c] << std::string(pad, ' ');
      else
        os << std::string(pad, ' ') << row[c];
    }
    os << '\n';
  }
  return os.str();
}

std::string QualityTable::to_csv() const {
  std::ostringstream os;
  os << "dictionary";
  for (const auto& s : strategies_) os << ',' << s << "_sr," << s << "_snr";
  os << '\n';
  for (const auto& [label, results] : rows_) {
    os << label;
    for (const auto& r : results) os << ',' << format_sr(r.sr) << ',' << format_snr(r.snr);
    os << '\n';
  }
  return os.str();
}

}  // namespace hbw
