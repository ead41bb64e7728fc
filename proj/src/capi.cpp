#include "hbw/hbw.h"

#include "hbw/error.hpp"
#include "hbw/pipeline.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

struct hbw_signal {
  hbw::Audio audio;
};

struct hbw_decomposition {
  hbw::DecompositionFile file;
  // flat views handed out by hbw_decomposition_block
  std::vector<std::vector<std::uint32_t>> atoms;
  std::vector<std::vector<double>> coefficients;
  std::string label;

  explicit hbw_decomposition(hbw::DecompositionFile f) : file(std::move(f)), label(file.dictionary.label()) {
    for (const auto& b : file.blocks) {
      auto& a = atoms.emplace_back();
      auto& c = coefficients.emplace_back();
      for (const auto& e : b.entries) {
        a.push_back(e.atom.value());
        c.push_back(e.coefficient);
      }
    }
  }
};

namespace {

thread_local std::string lastError;

hbw_status map(hbw::ErrorCode code) {
  switch (code) {
    case hbw::ErrorCode::InvalidArgument: return HBW_INVALID_ARGUMENT;
    case hbw::ErrorCode::IndexOutOfRange: return HBW_INDEX_OUT_OF_RANGE;
    case hbw::ErrorCode::LengthMismatch: return HBW_LENGTH_MISMATCH;
    case hbw::ErrorCode::DegenerateAtom: return HBW_DEGENERATE_ATOM;
    case hbw::ErrorCode::BlockExhausted: return HBW_BLOCK_EXHAUSTED;
    case hbw::ErrorCode::BudgetInfeasible: return HBW_BUDGET_INFEASIBLE;
    case hbw::ErrorCode::EmptyBlock: return HBW_EMPTY_BLOCK;
    case hbw::ErrorCode::Io: return HBW_IO_ERROR;
    case hbw::ErrorCode::Format: return HBW_FORMAT_ERROR;
  }
  return HBW_INTERNAL_ERROR;
}

template <class F>
hbw_status guarded(F&& fn) {
  lastError.clear();
  try {
    fn();
    return HBW_OK;
  } catch (const hbw::Error& e) {
    lastError = e.what();
    return map(e.code());
  } catch (const std::bad_alloc&) {
    lastError = "out of memory";
    return HBW_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    lastError = e.what();
    return HBW_INTERNAL_ERROR;
  } catch (...) {
    lastError = "unknown failure";
    return HBW_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw hbw::Error(hbw::ErrorCode::InvalidArgument, what);
}

std::span<const double> samples(const hbw_signal* s) { return s->audio.samples; }

}  // namespace

extern "C" {

const char* hbw_last_error(void) { return lastError.c_str(); }

const char* hbw_status_string(hbw_status status) {
  switch (status) {
    case HBW_OK: return "ok";
    case HBW_INVALID_ARGUMENT: return "invalid argument";
    case HBW_INDEX_OUT_OF_RANGE: return "index out of range";
    case HBW_LENGTH_MISMATCH: return "length mismatch";
    case HBW_DEGENERATE_ATOM: return "degenerate atom";
    case HBW_BLOCK_EXHAUSTED: return "block exhausted";
    case HBW_BUDGET_INFEASIBLE: return "budget infeasible";
    case HBW_EMPTY_BLOCK: return "empty block";
    case HBW_IO_ERROR: return "i/o error";
    case HBW_FORMAT_ERROR: return "format error";
    case HBW_OUT_OF_MEMORY: return "out of memory";
    case HBW_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

hbw_status hbw_signal_create(const double* data, size_t count, uint32_t sample_rate, hbw_signal** out) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    require(data != nullptr || count == 0, "sample pointer is null");
    auto s = std::make_unique<hbw_signal>();
    s->audio.samples.assign(data, data + count);
    s->audio.sampleRate = sample_rate;
    *out = s.release();
  });
}

hbw_status hbw_signal_read_wav(const char* path, hbw_signal** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto s = std::make_unique<hbw_signal>();
    s->audio = hbw::read_wav(path);
    *out = s.release();
  });
}

hbw_status hbw_signal_write_wav(const hbw_signal* signal, const char* path, hbw_encoding encoding) {
  return guarded([&] {
    require(signal != nullptr && path != nullptr, "null argument");
    hbw::write_wav(path, signal->audio.samples, signal->audio.sampleRate,
                   encoding == HBW_FLOAT32 ? hbw::SampleEncoding::Float32 : hbw::SampleEncoding::Pcm16);
  });
}

size_t hbw_signal_length(const hbw_signal* signal) { return signal ? signal->audio.samples.size() : 0; }
uint32_t hbw_signal_sample_rate(const hbw_signal* signal) { return signal ? signal->audio.sampleRate : 0; }
const double* hbw_signal_data(const hbw_signal* signal) {
  return signal ? signal->audio.samples.data() : nullptr;
}
uint16_t hbw_signal_source_channels(const hbw_signal* signal) {
  return signal ? signal->audio.sourceChannels : 0;
}
void hbw_signal_free(hbw_signal* signal) { delete signal; }

void hbw_approx_config_init(hbw_approx_config* c) {
  if (!c) return;
  *c = hbw_approx_config{};
  c->dictionary = HBW_DICT_COSSIN;
  c->redundancy = 4;
  c->block_size = 1024;
  c->strategy = HBW_STRATEGY_HBW;
  c->criterion = HBW_CRITERION_OOMP;
  c->ranking = HBW_RANKING_OPTIMIZED;
  c->use_budget = 1;
  c->budget = 0;
  c->target_snr = 0.0;
  c->segment_blocks = 0;
  c->seed = 0;
  c->randomize = 1;
  c->jobs = 1;
}

hbw_status hbw_approximate(const hbw_signal* signal, const hbw_approx_config* c, hbw_decomposition** out) {
  return guarded([&] {
    require(signal != nullptr && c != nullptr && out != nullptr, "null argument");
    require(c->dictionary <= HBW_DICT_COSSIN, "unknown dictionary");
    require(c->strategy == HBW_STRATEGY_INDEPENDENT || c->strategy == HBW_STRATEGY_HBW,
            "approximate supports the independent and hbw strategies");
    require(c->criterion <= HBW_CRITERION_OOMP && c->ranking <= HBW_RANKING_LEGACY, "unknown option");
    require(c->redundancy > 0 && c->block_size > 0, "block size and redundancy must be positive");
    hbw::ApproximateConfig config;
    config.dictionary = hbw::DictionarySpec::with_redundancy(static_cast<hbw::DictionaryKind>(c->dictionary),
                                                             c->block_size, c->redundancy);
    config.strategy = static_cast<hbw::Strategy>(c->strategy);
    config.criterion = static_cast<hbw::Criterion>(c->criterion);
    config.ranking = static_cast<hbw::Ranking>(c->ranking);
    if (c->use_budget)
      config.budget = c->budget;
    else
      config.targetSnr = c->target_snr;
    config.segmentBlocks = c->segment_blocks;
    config.seed = c->seed;
    config.randomize = c->randomize != 0;
    config.jobs = c->jobs;
    auto file = hbw::approximate(samples(signal), signal->audio.sampleRate, config);
    *out = new hbw_decomposition(std::move(file));
  });
}

hbw_status hbw_downgrade(const hbw_decomposition* in, uint64_t budget, hbw_decomposition** out) {
  return guarded([&] {
    require(in != nullptr && out != nullptr, "null argument");
    *out = new hbw_decomposition(hbw::downgrade(in->file, budget));
  });
}

hbw_status hbw_downgrade_to_snr(const hbw_decomposition* in, const hbw_signal* signal, double target_snr,
                                hbw_decomposition** out) {
  return guarded([&] {
    require(in != nullptr && signal != nullptr && out != nullptr, "null argument");
    *out = new hbw_decomposition(hbw::downgrade_to_snr(in->file, samples(signal), target_snr));
  });
}

hbw_status hbw_refine(const hbw_decomposition* in, const hbw_signal* signal, hbw_criterion criterion,
                      uint64_t max_swaps, uint32_t jobs, hbw_decomposition** out, uint64_t* swaps,
                      int* guard_hit) {
  return guarded([&] {
    require(in != nullptr && signal != nullptr && out != nullptr, "null argument");
    require(criterion <= HBW_CRITERION_OOMP, "unknown criterion");
    auto r = hbw::refine(in->file, samples(signal), static_cast<hbw::Criterion>(criterion), max_swaps, jobs);
    if (swaps) *swaps = r.swaps.swaps.size();
    if (guard_hit) *guard_hit = r.swaps.guardHit ? 1 : 0;
    *out = new hbw_decomposition(std::move(r.file));
  });
}

hbw_status hbw_reconstruct(const hbw_decomposition* d, hbw_signal** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    const hbw::Vector fa = hbw::reconstruct(d->file);
    auto s = std::make_unique<hbw_signal>();
    s->audio.samples.assign(fa.data(), fa.data() + fa.size());
    s->audio.sampleRate = d->file.sampleRate;
    *out = s.release();
  });
}

hbw_status hbw_report(const hbw_decomposition* d, const hbw_signal* signal, hbw_report_row* out) {
  return guarded([&] {
    require(d != nullptr && signal != nullptr && out != nullptr, "null argument");
    const auto r = hbw::report(d->file, samples(signal));
    out->samples = r.samples;
    out->coefficients = r.coefficients;
    out->sr = r.sr.value_or(0.0);
    out->snr = r.snr;
  });
}

hbw_status hbw_decomposition_save(const hbw_decomposition* d, const char* path) {
  return guarded([&] {
    require(d != nullptr && path != nullptr, "null argument");
    hbw::save_decomposition(path, d->file);
  });
}

hbw_status hbw_decomposition_load(const char* path, hbw_decomposition** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new hbw_decomposition(hbw::load_decomposition(path));
  });
}

hbw_status hbw_decomposition_serialize(const hbw_decomposition* d, uint8_t* buffer, size_t capacity,
                                       size_t* size) {
  return guarded([&] {
    require(d != nullptr && size != nullptr, "null argument");
    const auto bytes = hbw::serialize(d->file);
    *size = bytes.size();
    if (!buffer) return;
    if (capacity < bytes.size()) throw hbw::Error(hbw::ErrorCode::LengthMismatch, "buffer too small");
    std::memcpy(buffer, bytes.data(), bytes.size());
  });
}

hbw_status hbw_decomposition_deserialize(const uint8_t* bytes, size_t size, hbw_decomposition** out) {
  return guarded([&] {
    require((bytes != nullptr || size == 0) && out != nullptr, "null argument");
    *out = new hbw_decomposition(hbw::deserialize(std::span<const std::uint8_t>(bytes, size)));
  });
}

uint64_t hbw_decomposition_sample_count(const hbw_decomposition* d) { return d ? d->file.sampleCount : 0; }
size_t hbw_decomposition_block_count(const hbw_decomposition* d) { return d ? d->file.blocks.size() : 0; }
uint64_t hbw_decomposition_total_atoms(const hbw_decomposition* d) { return d ? d->file.total_atoms() : 0; }
hbw_strategy hbw_decomposition_strategy(const hbw_decomposition* d) {
  return d ? static_cast<hbw_strategy>(d->file.strategy) : HBW_STRATEGY_HBW;
}

const char* hbw_decomposition_dictionary_label(const hbw_decomposition* d) {
  return d ? d->label.c_str() : "";
}

hbw_status hbw_decomposition_block(const hbw_decomposition* d, size_t block, size_t* count,
                                   const uint32_t** atoms, const double** coefficients) {
  return guarded([&] {
    require(d != nullptr, "null argument");
    if (block >= d->atoms.size()) throw hbw::Error(hbw::ErrorCode::IndexOutOfRange, "block index out of range");
    if (count) *count = d->atoms[block].size();
    if (atoms) *atoms = d->atoms[block].data();
    if (coefficients) *coefficients = d->coefficients[block].data();
  });
}

void hbw_decomposition_free(hbw_decomposition* d) { delete d; }

}  // extern "C"
