#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hbw {

/// N / K; nullopt stands for the empty representation (K = 0).
std::optional<double> sparsity_ratio(std::size_t samples, std::size_t coefficients);

/// 10 log10(||f||^2 / ||f - fa||^2) in dB; +infinity for an exact
/// reconstruction. Throws on length mismatch or a zero-energy f.
double snr_db(std::span<const double> f, std::span<const double> fa);

struct QualityReport {
  std::size_t samples = 0;
  std::size_t coefficients = 0;
  std::optional<double> sr;
  double snr = 0.0;
  std::vector<double> blockSnr;
};

/// Formats a dB or SR value with two decimals; "inf" and "empty" for the
/// sentinels.
std::string format_snr(double snr);
std::string format_sr(const std::optional<double>& sr);

struct StrategyResult {
  std::optional<double> sr;
  double snr = 0.0;
};

/// Text/CSV emitter for "dictionary x strategy" tables of SR and SNR pairs.
class QualityTable {
public:
  explicit QualityTable(std::vector<std::string> strategies);

  void add_row(std::string label, std::vector<StrategyResult> results);

  std::string to_text() const;
  std::string to_csv() const;

private:
  std::vector<std::string> strategies_;
  std::vector<std::pair<std::string, std::vector<StrategyResult>>> rows_;
};

}  // namespace hbw
