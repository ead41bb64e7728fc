#include "hbw/io.hpp"

#include "hbw/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace hbw {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T byteswap_if_needed(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

class ByteWriter {
public:
  template <class T>
  void put(T v) {
    v = byteswap_if_needed(v);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    out_.insert(out_.end(), p, p + sizeof(T));
  }
  void put_f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void put_f32(float v) { put(std::bit_cast<std::uint32_t>(v)); }
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }
  std::size_t size() const { return out_.size(); }
  std::vector<std::uint8_t>& buffer() { return out_; }

private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return byteswap_if_needed(v);
  }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void skip(std::size_t n) { bytes(n); }
  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::Format, "unexpected end of data");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[6] = {'H', 'B', 'W', 'D', 'E', 'C'};

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

bool tag_is(std::span<const std::uint8_t> tag, const char* name) {
  return std::memcmp(tag.data(), name, 4) == 0;
}

}  // namespace

// ---------------------------------------------------------------- files

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

// ---------------------------------------------------------------- WAV

Audio decode_wav(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (!tag_is(r.bytes(4), "RIFF")) throw Error(ErrorCode::Format, "not a RIFF file");
  r.get<std::uint32_t>();
  if (!tag_is(r.bytes(4), "WAVE")) throw Error(ErrorCode::Format, "not a WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool haveFormat = false;
  std::span<const std::uint8_t> data;
  bool haveData = false;
  while (r.remaining() >= 8 && !haveData) {
    const auto tag = r.bytes(4);
    const auto size = r.get<std::uint32_t>();
    if (tag_is(tag, "fmt ")) {
      ByteReader f(r.bytes(size));
      format = f.get<std::uint16_t>();
      channels = f.get<std::uint16_t>();
      rate = f.get<std::uint32_t>();
      f.get<std::uint32_t>();
      f.get<std::uint16_t>();
      bits = f.get<std::uint16_t>();
      if (format == kFormatExtensible) {
        f.get<std::uint16_t>();  // cbSize
        f.get<std::uint16_t>();  // valid bits
        f.get<std::uint32_t>();  // channel mask
        format = f.get<std::uint16_t>();
      }
      haveFormat = true;
    } else if (tag_is(tag, "data")) {
      if (!haveFormat) throw Error(ErrorCode::Format, "data chunk before fmt chunk");
      data = r.bytes(size);
      haveData = true;
    } else {
      r.skip(size);
    }
    if (size % 2 == 1 && r.remaining() > 0 && !haveData) r.skip(1);
  }
  if (!haveFormat || !haveData) throw Error(ErrorCode::Format, "missing fmt or data chunk");
  if (channels == 0) throw Error(ErrorCode::Format, "zero channels");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) throw Error(ErrorCode::Format, "unsupported codec (need 16-bit PCM or 32-bit float)");

  const std::size_t frameBytes = static_cast<std::size_t>(channels) * (bits / 8);
  if (data.size() % frameBytes != 0) throw Error(ErrorCode::Format, "truncated sample data");
  const std::size_t frames = data.size() / frameBytes;
  Audio audio;
  audio.sampleRate = rate;
  audio.sourceChannels = channels;
  audio.downmixed = channels > 1;
  audio.samples.resize(frames);
  ByteReader s(data);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c)
      sum += pcm16 ? static_cast<double>(s.get<std::int16_t>()) / 32768.0
                   : static_cast<double>(s.get_f32());
    audio.samples[i] = sum / channels;
  }
  return audio;
}

Audio read_wav(const std::filesystem::path& path) { return decode_wav(read_file(path)); }

std::vector<std::uint8_t> encode_wav(std::span<const double> samples, std::uint32_t sampleRate,
                                     SampleEncoding encoding) {
  const std::uint16_t bits = encoding == SampleEncoding::Pcm16 ? 16 : 32;
  const std::uint32_t dataBytes = static_cast<std::uint32_t>(samples.size() * (bits / 8));
  ByteWriter w;
  w.bytes("RIFF", 4);
  w.put<std::uint32_t>(36 + dataBytes);
  w.bytes("WAVE", 4);
  w.bytes("fmt ", 4);
  w.put<std::uint32_t>(16);
  w.put<std::uint16_t>(encoding == SampleEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
  w.put<std::uint16_t>(1);
  w.put<std::uint32_t>(sampleRate);
  w.put<std::uint32_t>(sampleRate * (bits / 8));
  w.put<std::uint16_t>(bits / 8);
  w.put<std::uint16_t>(bits);
  w.bytes("data", 4);
  w.put<std::uint32_t>(dataBytes);
  for (double x : samples) {
    if (encoding == SampleEncoding::Pcm16) {
      const double q = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      w.put<std::int16_t>(static_cast<std::int16_t>(q));
    } else {
      w.put_f32(static_cast<float>(x));
    }
  }
  if (dataBytes % 2 == 1) w.put<std::uint8_t>(0);
  return w.take();
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sampleRate, SampleEncoding encoding) {
  write_file(path, encode_wav(samples, sampleRate, encoding));
}

// ---------------------------------------------------- decomposition file

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Independent: return "independent";
    case Strategy::Hbw: return "hbw";
    case Strategy::HbwBoomp: return "hbw-boomp";
    case Strategy::HbwSbr: return "hbw-sbr";
  }
  return "unknown";
}

std::size_t DecompositionFile::total_atoms() const {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.entries.size();
  return total;
}

void DecompositionFile::validate() const {
  dictionary.validate();
  plan.validate();
  if (plan.sampleCount != sampleCount || plan.blockSize != dictionary.blockSize ||
      plan.blockCount != blocks.size())
    throw Error(ErrorCode::Format, "header sizes are inconsistent");
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    if (blocks[q].block != q) throw Error(ErrorCode::Format, "blocks are not in original order");
    for (const auto& e : blocks[q].entries)
      if (e.atom.value() < 1 || e.atom.value() > dictionary.atomCount)
        throw Error(ErrorCode::Format, "atom index out of range");
  }
}

std::vector<std::uint8_t> serialize(const DecompositionFile& file) {
  file.validate();
  ByteWriter w;
  w.bytes(kMagic, sizeof kMagic);
  w.put<std::uint8_t>(DecompositionFile::kVersion);
  w.put<std::uint8_t>(0);
  w.put<std::uint64_t>(file.sampleCount);
  w.put<std::uint32_t>(file.sampleRate);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(file.dictionary.blockSize));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(file.blocks.size()));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(file.dictionary.kind));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(file.strategy));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(file.criterion));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(file.ranking));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(file.dictionary.atomCount));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(file.provenance.size()));
  w.bytes(file.provenance.data(), file.provenance.size());

  const SegmentPlan& p = file.plan;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(p.segmentSize));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(p.segmentCount));
  w.put<std::uint64_t>(p.seed);
  w.put<std::uint8_t>(p.randomized ? 1 : 0);
  w.put<std::uint8_t>(0);
  w.put<std::uint8_t>(0);
  w.put<std::uint8_t>(0);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(p.padLength));
  for (auto v : p.permutation) w.put<std::uint32_t>(v);

  for (const auto& b : file.blocks) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(b.entries.size()));
    for (const auto& e : b.entries) {
      w.put<std::uint32_t>(e.atom.value());
      w.put_f64(e.coefficient);
    }
  }
  return w.take();
}

DecompositionFile deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (std::memcmp(r.bytes(sizeof kMagic).data(), kMagic, sizeof kMagic) != 0)
    throw Error(ErrorCode::Format, "not a decomposition file");
  const auto version = r.get<std::uint8_t>();
  if (version != DecompositionFile::kVersion) throw Error(ErrorCode::Format, "unsupported file version");
  r.get<std::uint8_t>();

  DecompositionFile file;
  file.sampleCount = r.get<std::uint64_t>();
  file.sampleRate = r.get<std::uint32_t>();
  file.dictionary.blockSize = r.get<std::uint32_t>();
  const std::uint32_t blockCount = r.get<std::uint32_t>();
  const auto kind = r.get<std::uint8_t>();
  const auto strategy = r.get<std::uint8_t>();
  const auto criterion = r.get<std::uint8_t>();
  const auto ranking = r.get<std::uint8_t>();
  if (kind > 2 || strategy > 3 || criterion > 1 || ranking > 1)
    throw Error(ErrorCode::Format, "unknown enumeration value in header");
  file.dictionary.kind = static_cast<DictionaryKind>(kind);
  file.strategy = static_cast<Strategy>(strategy);
  file.criterion = static_cast<Criterion>(criterion);
  file.ranking = static_cast<Ranking>(ranking);
  file.dictionary.atomCount = r.get<std::uint32_t>();
  const auto provenanceLength = r.get<std::uint32_t>();
  const auto provenance = r.bytes(provenanceLength);
  file.provenance.assign(provenance.begin(), provenance.end());

  SegmentPlan& p = file.plan;
  p.sampleCount = file.sampleCount;
  p.blockSize = file.dictionary.blockSize;
  p.blockCount = blockCount;
  p.segmentSize = r.get<std::uint32_t>();
  p.segmentCount = r.get<std::uint32_t>();
  p.seed = r.get<std::uint64_t>();
  p.randomized = r.get<std::uint8_t>() != 0;
  r.skip(3);
  p.padLength = r.get<std::uint32_t>();
  if (r.remaining() / 4 < blockCount) throw Error(ErrorCode::Format, "unexpected end of data");
  p.permutation.resize(blockCount);
  for (auto& v : p.permutation) v = r.get<std::uint32_t>();

  file.blocks.resize(blockCount);
  for (std::uint32_t q = 0; q < blockCount; ++q) {
    AtomicDecomposition& d = file.blocks[q];
    d.block = q;
    const auto k = r.get<std::uint32_t>();
    if (r.remaining() / 12 < k) throw Error(ErrorCode::Format, "unexpected end of data");
    d.entries.reserve(k);
    for (std::uint32_t n = 0; n < k; ++n) {
      const AtomIndex atom(r.get<std::uint32_t>());
      d.entries.push_back({atom, r.get_f64()});
    }
  }
  if (r.remaining() != 0) throw Error(ErrorCode::Format, "trailing bytes after the last block");
  try {
    file.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Format, e.what());
  }
  return file;
}

void save_decomposition(const std::filesystem::path& path, const DecompositionFile& file) {
  write_file(path, serialize(file));
}

DecompositionFile load_decomposition(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

Vector reconstruct(const DecompositionFile& file, const TrigDictionary& dict) {
  Partition parts;
  parts.reserve(file.blocks.size());
  for (const auto& b : file.blocks) parts.push_back(synthesize(b, dict));
  return join_blocks(parts, file.sampleCount);
}

Vector reconstruct(const DecompositionFile& file) {
  return reconstruct(file, TrigDictionary(file.dictionary));
}

}  // namespace hbw
