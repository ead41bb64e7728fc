#pragma once

#include "hbw/forward.hpp"
#include "hbw/segmentation.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hbw {

// ---------------------------------------------------------------- WAV

enum class SampleEncoding : std::uint8_t { Pcm16 = 0, Float32 = 1 };

struct Audio {
  std::vector<double> samples;  // mono, nominally in [-1, 1]
  std::uint32_t sampleRate = 44100;
  std::uint16_t sourceChannels = 1;
  bool downmixed = false;  // set when channels were averaged
};

/// Reads RIFF/WAVE files holding 16-bit PCM or 32-bit IEEE float samples.
/// Multi-channel input is averaged to mono. Throws Error(Io) when the file
/// cannot be opened and Error(Format) for truncated or unsupported data.
Audio read_wav(const std::filesystem::path& path);
Audio decode_wav(std::span<const std::uint8_t> bytes);

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sampleRate, SampleEncoding encoding = SampleEncoding::Pcm16);
std::vector<std::uint8_t> encode_wav(std::span<const double> samples, std::uint32_t sampleRate,
                                     SampleEncoding encoding = SampleEncoding::Pcm16);

// ---------------------------------------------------- decomposition file

enum class Strategy : std::uint8_t { Independent = 0, Hbw = 1, HbwBoomp = 2, HbwSbr = 3 };

const char* to_string(Strategy s);

/// In-memory form of a decomposition file. Blocks are stored in original
/// signal order; the segment plan records how they were processed.
struct DecompositionFile {
  static constexpr std::uint8_t kVersion = 1;

  std::uint64_t sampleCount = 0;
  std::uint32_t sampleRate = 44100;
  DictionarySpec dictionary;
  Strategy strategy = Strategy::Hbw;
  Criterion criterion = Criterion::Oomp;
  Ranking ranking = Ranking::Optimized;
  std::string provenance;
  SegmentPlan plan;
  std::vector<AtomicDecomposition> blocks;

  std::size_t block_count() const { return blocks.size(); }
  std::size_t total_atoms() const;
  void validate() const;

  friend bool operator==(const DecompositionFile&, const DecompositionFile&) = default;
};

std::vector<std::uint8_t> serialize(const DecompositionFile& file);
DecompositionFile deserialize(std::span<const std::uint8_t> bytes);

void save_decomposition(const std::filesystem::path& path, const DecompositionFile& file);
DecompositionFile load_decomposition(const std::filesystem::path& path);

/// Sum of c_n atom(gamma_n) per block, concatenated and trimmed to sampleCount.
Vector reconstruct(const DecompositionFile& file, const TrigDictionary& dict);
Vector reconstruct(const DecompositionFile& file);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace hbw
