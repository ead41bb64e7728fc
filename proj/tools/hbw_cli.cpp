// Command-line front end; talks to the library only through the C API.
#include "hbw/hbw.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>

namespace {

enum Exit { kOk = 0, kInternal = 1, kBadArguments = 2, kIo = 3, kInfeasible = 4 };

struct Failure {
  int code;
};

int exit_code(hbw_status s) {
  switch (s) {
    case HBW_OK: return kOk;
    case HBW_IO_ERROR:
    case HBW_FORMAT_ERROR: return kIo;
    case HBW_BUDGET_INFEASIBLE:
    case HBW_BLOCK_EXHAUSTED: return kInfeasible;
    case HBW_OUT_OF_MEMORY:
    case HBW_INTERNAL_ERROR: return kInternal;
    default: return kBadArguments;
  }
}

void check(hbw_status s, const char* what) {
  if (s == HBW_OK) return;
  std::fprintf(stderr, "hbw: %s: %s (%s)\n", what, hbw_last_error(), hbw_status_string(s));
  throw Failure{exit_code(s)};
}

struct SignalDeleter {
  void operator()(hbw_signal* s) const { hbw_signal_free(s); }
};
struct DecompositionDeleter {
  void operator()(hbw_decomposition* d) const { hbw_decomposition_free(d); }
};
using Signal = std::unique_ptr<hbw_signal, SignalDeleter>;
using Decomposition = std::unique_ptr<hbw_decomposition, DecompositionDeleter>;

Signal load_signal(const std::string& path) {
  hbw_signal* s = nullptr;
  check(hbw_signal_read_wav(path.c_str(), &s), ("reading " + path).c_str());
  Signal out(s);
  if (hbw_signal_source_channels(s) > 1)
    std::fprintf(stderr, "hbw: warning: %s has %u channels; averaged to mono\n", path.c_str(),
                 static_cast<unsigned>(hbw_signal_source_channels(s)));
  return out;
}

Decomposition load_decomposition(const std::string& path) {
  hbw_decomposition* d = nullptr;
  check(hbw_decomposition_load(path.c_str(), &d), ("reading " + path).c_str());
  return Decomposition(d);
}

void save(const hbw_decomposition* d, const std::string& path) {
  check(hbw_decomposition_save(d, path.c_str()), ("writing " + path).c_str());
}

std::string fixed2(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative greedy sparse approximation of block-partitioned signals"};
  app.require_subcommand(1);

  const std::map<std::string, hbw_dictionary_kind> dictionaries{
      {"cos", HBW_DICT_COS}, {"sin", HBW_DICT_SIN}, {"cossin", HBW_DICT_COSSIN}};
  const std::map<std::string, hbw_strategy> strategies{{"independent", HBW_STRATEGY_INDEPENDENT},
                                                       {"hbw", HBW_STRATEGY_HBW}};
  const std::map<std::string, hbw_criterion> criteria{{"omp", HBW_CRITERION_OMP}, {"oomp", HBW_CRITERION_OOMP}};
  const std::map<std::string, hbw_ranking> rankings{{"optimized", HBW_RANKING_OPTIMIZED},
                                                    {"legacy", HBW_RANKING_LEGACY}};

  // approximate
  auto* approx = app.add_subcommand("approximate", "Approximate a WAV file under an atom budget or SNR target");
  std::string aIn, aOut;
  hbw_approx_config config;
  hbw_approx_config_init(&config);
  std::uint64_t aBudget = 0;
  double aSnr = 0.0;
  bool noShuffle = false;
  approx->add_option("--in", aIn, "input WAV")->required();
  approx->add_option("--out", aOut, "output decomposition file")->required();
  approx->add_option("--dict", config.dictionary, "cos | sin | cossin")
      ->transform(CLI::CheckedTransformer(dictionaries, CLI::ignore_case))
      ->default_str("cossin");
  approx->add_option("--redundancy", config.redundancy, "M / Nb")->check(CLI::IsMember({1u, 2u, 4u}))
      ->default_val(4u);
  approx->add_option("--block", config.block_size, "block size Nb")->check(CLI::PositiveNumber)
      ->default_val(1024u);
  auto* budgetOpt = approx->add_option("--budget", aBudget, "total number of atoms K");
  auto* snrOpt = approx->add_option("--target-snr", aSnr, "per-block target SNR in dB");
  budgetOpt->excludes(snrOpt);
  approx->add_option("--strategy", config.strategy, "independent | hbw")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case))
      ->default_str("hbw");
  approx->add_option("--criterion", config.criterion, "omp | oomp")
      ->transform(CLI::CheckedTransformer(criteria, CLI::ignore_case))
      ->default_str("oomp");
  approx->add_option("--ranking", config.ranking, "optimized | legacy")
      ->transform(CLI::CheckedTransformer(rankings, CLI::ignore_case))
      ->default_str("optimized");
  approx->add_option("--segment-blocks", config.segment_blocks, "blocks per segment (0: whole signal)");
  approx->add_option("--seed", config.seed, "segmentation shuffle seed");
  approx->add_flag("--no-shuffle", noShuffle, "segment blocks in their original order");
  approx->add_option("--jobs", config.jobs, "worker threads")->check(CLI::PositiveNumber);

  // downgrade
  auto* down = app.add_subcommand("downgrade", "Remove atoms from a decomposition (backward pursuit)");
  std::string dIn, dOut, dSignal;
  std::uint64_t dBudget = 0;
  double dSnr = 0.0;
  down->add_option("--in", dIn, "input decomposition")->required();
  down->add_option("--out", dOut, "output decomposition")->required();
  auto* dBudgetOpt = down->add_option("--budget", dBudget, "atoms to keep");
  auto* dSnrOpt = down->add_option("--target-snr", dSnr, "lowest SNR to keep, in dB");
  dBudgetOpt->excludes(dSnrOpt);
  auto* dSignalOpt = down->add_option("--signal", dSignal, "original WAV (needed with --target-snr)");
  dSnrOpt->needs(dSignalOpt);

  // refine
  auto* refine = app.add_subcommand("refine", "Swap atoms between blocks while the error drops");
  std::string rIn, rOut, rSignal;
  hbw_criterion rCriterion = HBW_CRITERION_OOMP;
  std::uint64_t maxSwaps = 0;
  std::uint32_t rJobs = 1;
  refine->add_option("--in", rIn, "input decomposition")->required();
  refine->add_option("--signal", rSignal, "original WAV")->required();
  refine->add_option("--out", rOut, "output decomposition")->required();
  refine->add_option("--criterion", rCriterion, "omp | oomp")
      ->transform(CLI::CheckedTransformer(criteria, CLI::ignore_case))
      ->default_str("oomp");
  refine->add_option("--max-swaps", maxSwaps, "swap guard (0: ten times the atom count)");
  refine->add_option("--jobs", rJobs, "worker threads")->check(CLI::PositiveNumber);

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "Synthesize the approximation as a WAV file");
  std::string cIn, cOut;
  bool asFloat = false;
  recon->add_option("--in", cIn, "input decomposition")->required();
  recon->add_option("--out", cOut, "output WAV")->required();
  recon->add_flag("--float", asFloat, "write 32-bit float samples instead of 16-bit PCM");

  // report
  auto* rep = app.add_subcommand("report", "Print SR and SNR of a decomposition");
  std::string pIn, pSignal, format = "text", label;
  rep->add_option("--in", pIn, "input decomposition")->required();
  rep->add_option("--signal", pSignal, "original WAV")->required();
  rep->add_option("--format", format, "text | csv | tsv")->check(CLI::IsMember({"text", "csv", "tsv"}));
  rep->add_option("--label", label, "row label (default: dictionary name)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadArguments;
  }

  try {
    if (*approx) {
      if (!*budgetOpt && !*snrOpt) {
        std::fprintf(stderr, "hbw: approximate needs --budget or --target-snr\n");
        return kBadArguments;
      }
      config.use_budget = *budgetOpt ? 1 : 0;
      config.budget = aBudget;
      config.target_snr = aSnr;
      config.randomize = noShuffle ? 0 : 1;
      Signal s = load_signal(aIn);
      hbw_decomposition* d = nullptr;
      check(hbw_approximate(s.get(), &config, &d), "approximate");
      Decomposition out(d);
      save(out.get(), aOut);
      std::fprintf(stderr, "hbw: %llu atoms over %zu blocks\n",
                   static_cast<unsigned long long>(hbw_decomposition_total_atoms(d)), hbw_decomposition_block_count(d));
    } else if (*down) {
      if (!*dBudgetOpt && !*dSnrOpt) {
        std::fprintf(stderr, "hbw: downgrade needs --budget or --target-snr\n");
        return kBadArguments;
      }
      Decomposition in = load_decomposition(dIn);
      hbw_decomposition* d = nullptr;
      if (*dBudgetOpt) {
        check(hbw_downgrade(in.get(), dBudget, &d), "downgrade");
      } else {
        Signal s = load_signal(dSignal);
        check(hbw_downgrade_to_snr(in.get(), s.get(), dSnr, &d), "downgrade");
      }
      Decomposition out(d);
      save(out.get(), dOut);
    } else if (*refine) {
      Decomposition in = load_decomposition(rIn);
      Signal s = load_signal(rSignal);
      hbw_decomposition* d = nullptr;
      std::uint64_t swaps = 0;
      int guard = 0;
      check(hbw_refine(in.get(), s.get(), rCriterion, maxSwaps, rJobs, &d, &swaps, &guard), "refine");
      Decomposition out(d);
      save(out.get(), rOut);
      std::fprintf(stderr, "hbw: %llu swaps%s\n", static_cast<unsigned long long>(swaps),
                   guard ? " (stopped by the swap guard)" : "");
    } else if (*recon) {
      Decomposition in = load_decomposition(cIn);
      hbw_signal* s = nullptr;
      check(hbw_reconstruct(in.get(), &s), "reconstruct");
      Signal out(s);
      check(hbw_signal_write_wav(s, cOut.c_str(), asFloat ? HBW_FLOAT32 : HBW_PCM16), ("writing " + cOut).c_str());
    } else if (*rep) {
      Decomposition in = load_decomposition(pIn);
      Signal s = load_signal(pSignal);
      hbw_report_row row{};
      check(hbw_report(in.get(), s.get(), &row), "report");
      if (label.empty()) label = hbw_decomposition_dictionary_label(in.get());
      const std::string sr = row.coefficients == 0 ? "empty" : fixed2(row.sr);
      const std::string snr = fixed2(row.snr);
      if (format == "text") {
        std::printf("%-8s | %10s | %10s\n", "Dict.", "SR", "SNR");
        std::printf("%-8s | %10s | %10s\n", label.c_str(), sr.c_str(), snr.c_str());
      } else {
        const char sep = format == "csv" ? ',' : '\t';
        std::printf("dictionary%csr%csnr\n%s%c%s%c%s\n", sep, sep, label.c_str(), sep, sr.c_str(), sep, snr.c_str());
      }
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kOk;
}
