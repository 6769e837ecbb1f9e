#include "tfcsp/eegt.hpp"

#include "tfcsp/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace tfcsp {
namespace {

constexpr std::array<char, 4> kMagic{'E', 'E', 'G', 'T'};

template <typename U>
void put_le(std::ostream& out, U value) {
  static_assert(std::is_unsigned_v<U>);
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename U>
  U get(const char* what) {
    std::array<unsigned char, sizeof(U)> bytes{};
    in_.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) {
      throw FormatError(std::string("truncated container while reading ") + what);
    }
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(U(bytes[i]) << (8 * i));
    return value;
  }

  // Reads `count` float32 values; returns false on short read.
  bool get_f32_block(std::vector<float>& out, std::size_t count) {
    out.resize(count);
    std::vector<unsigned char> raw(count * 4);
    in_.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in_.gcount() != static_cast<std::streamsize>(raw.size())) return false;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t bits = std::uint32_t(raw[4 * i]) | (std::uint32_t(raw[4 * i + 1]) << 8) |
                           (std::uint32_t(raw[4 * i + 2]) << 16) | (std::uint32_t(raw[4 * i + 3]) << 24);
      out[i] = std::bit_cast<float>(bits);
    }
    return true;
  }

  std::string get_bytes(std::size_t n, const char* what) {
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n)) {
      throw FormatError(std::string("truncated container while reading ") + what);
    }
    return s;
  }

 private:
  std::istream& in_;
};

std::uint32_t rate_to_millihz(double fs) {
  const double mhz = std::round(fs * 1000.0);
  if (!(mhz >= 1.0) || mhz > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
    throw ValidationError("sampling rate not representable in millihertz: " + std::to_string(fs));
  }
  return static_cast<std::uint32_t>(mhz);
}

void check_writable(const TrialSet& set) {
  validate(set);
  if (set.channel_names.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ValidationError("too many channels for EEGT");
  }
  for (const auto& name : set.channel_names) {
    if (name.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ValidationError("channel name too long: " + name.substr(0, 32) + "...");
    }
  }
  constexpr double fmax = std::numeric_limits<float>::max();
  for (std::size_t i = 0; i < set.trials.size(); ++i) {
    if ((set.trials[i].samples.array().abs() > fmax).any()) {
      throw ValidationError("trial " + std::to_string(i) + ": sample exceeds float32 range");
    }
  }
}

}  // namespace

std::size_t eegt_size_bytes(const TrialSet& set) {
  std::size_t bytes = kEegtFixedHeaderBytes;
  for (const auto& name : set.channel_names) bytes += 2 + name.size();
  const auto n = static_cast<std::size_t>(set.channels());
  const auto t = static_cast<std::size_t>(set.samples_per_trial());
  bytes += set.trials.size() * (2 + n * t * 4);
  return bytes;
}

void write_trialset(const TrialSet& set, std::ostream& out) {
  check_writable(set);
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kEegtVersion);
  put_le<std::uint32_t>(out, rate_to_millihz(set.sampling_rate));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(set.class_count));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(set.channels()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.samples_per_trial()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.trials.size()));
  for (const auto& name : set.channel_names) {
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  for (const auto& trial : set.trials) {
    put_le<std::uint16_t>(out, trial.label);
    for (Eigen::Index c = 0; c < trial.channels(); ++c) {
      for (Eigen::Index s = 0; s < trial.length(); ++s) {
        put_f32(out, static_cast<float>(trial.samples(c, s)));
      }
    }
  }
  if (!out) throw IoError("write failed");
}

TrialSet read_trialset(std::istream& in) {
  Reader r(in);
  const std::string magic = r.get_bytes(4, "magic");
  if (std::memcmp(magic.data(), kMagic.data(), 4) != 0) {
    throw FormatError("bad magic bytes: not an EEGT container");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kEegtVersion) {
    throw FormatError("unsupported EEGT version " + std::to_string(version));
  }
  TrialSet set;
  const auto mhz = r.get<std::uint32_t>("sampling rate");
  set.sampling_rate = static_cast<double>(mhz) / 1000.0;
  set.class_count = r.get<std::uint16_t>("class count");
  const auto n_channels = r.get<std::uint16_t>("channel count");
  const auto n_samples = r.get<std::uint32_t>("samples per trial");
  const auto n_trials = r.get<std::uint32_t>("trial count");

  set.channel_names.reserve(n_channels);
  for (std::uint16_t c = 0; c < n_channels; ++c) {
    const auto len = r.get<std::uint16_t>("channel name length");
    set.channel_names.push_back(r.get_bytes(len, "channel name"));
  }

  const std::size_t per_trial = std::size_t(n_channels) * n_samples;
  std::vector<float> buf;
  set.trials.reserve(std::min<std::size_t>(n_trials, 1u << 16));
  for (std::uint32_t i = 0; i < n_trials; ++i) {
    Trial trial;
    try {
      trial.label = r.get<std::uint16_t>("trial label");
    } catch (const FormatError&) {
      throw FormatError("truncated container: trial " + std::to_string(i) + " of " + std::to_string(n_trials) +
                        " missing");
    }
    if (!r.get_f32_block(buf, per_trial)) {
      throw FormatError("truncated container: trial " + std::to_string(i) + " of " + std::to_string(n_trials) +
                        " incomplete");
    }
    trial.samples.resize(n_channels, n_samples);
    for (std::size_t c = 0; c < n_channels; ++c) {
      for (std::size_t s = 0; s < n_samples; ++s) {
        trial.samples(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(s)) = buf[c * n_samples + s];
      }
    }
    set.trials.push_back(std::move(trial));
  }
  validate(set);
  return set;
}

void save_trialset(const TrialSet& set, const std::filesystem::path& path) {
  // Serialize fully before touching the file so a validation failure leaves nothing behind.
  std::ostringstream buffer(std::ios::binary);
  write_trialset(set, buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string bytes = buffer.str();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

TrialSet load_trialset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return read_trialset(in);
}

}  // namespace tfcsp
