#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hidio/errors.hpp"
#include "hidio/nn/param_store.hpp"

namespace hidio::nn {

// Binary layout (all integers and reals little-endian):
//   "HIDIOCKP" | u32 version | u64 metadata_len | metadata bytes
//   u32 slice_count | per slice: u32 name_len, name, u64 offset, u32 rank, u64 dims[rank]
//   u64 value_count | f64 values[value_count]
// Sidecar `<path>.manifest.txt` lists one slice per line: name offset d0xd1...
inline constexpr char kCheckpointMagic[8] = {'H', 'I', 'D', 'I', 'O', 'C', 'K', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("checkpoint truncated");
  return v;
}

inline std::string get_string(std::istream& is, std::size_t n) {
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw ConfigError("checkpoint truncated");
  return s;
}

}  // namespace detail

struct Checkpoint {
  std::string metadata;
  std::vector<SliceInfo> slices;
  std::vector<Real> values;
};

inline void save_checkpoint(const std::string& path, const ParamStore& store, const std::string& metadata = {}) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open checkpoint for writing: " + path);
  os.write(kCheckpointMagic, 8);
  detail::put<std::uint32_t>(os, kCheckpointVersion);
  detail::put<std::uint64_t>(os, metadata.size());
  os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(store.slices().size()));
  for (const auto& s : store.slices()) {
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.name.size()));
    os.write(s.name.data(), static_cast<std::streamsize>(s.name.size()));
    detail::put<std::uint64_t>(os, s.offset);
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.shape.size()));
    for (auto d : s.shape) detail::put<std::uint64_t>(os, d);
  }
  detail::put<std::uint64_t>(os, store.size());
  for (Real v : store.values()) detail::put<Real>(os, v);
  if (!os) throw ConfigError("failed writing checkpoint: " + path);

  std::ofstream manifest(path + ".manifest.txt");
  manifest << "# hidio checkpoint v" << kCheckpointVersion << " values=" << store.size() << "\n";
  for (const auto& s : store.slices()) {
    manifest << s.name << ' ' << s.offset << ' ';
    for (std::size_t i = 0; i < s.shape.size(); ++i) manifest << (i ? "x" : "") << s.shape[i];
    manifest << '\n';
  }
}

inline Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kCheckpointMagic, 8) != 0) throw ConfigError("not a hidio checkpoint: " + path);
  const auto version = detail::get<std::uint32_t>(is);
  if (version != kCheckpointVersion) throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  ck.metadata = detail::get_string(is, detail::get<std::uint64_t>(is));
  const auto count = detail::get<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < count; ++i) {
    SliceInfo s;
    s.name = detail::get_string(is, detail::get<std::uint32_t>(is));
    s.offset = detail::get<std::uint64_t>(is);
    const auto rank = detail::get<std::uint32_t>(is);
    for (std::uint32_t r = 0; r < rank; ++r) s.shape.push_back(detail::get<std::uint64_t>(is));
    ck.slices.push_back(std::move(s));
  }
  const auto n = detail::get<std::uint64_t>(is);
  ck.values.resize(n);
  is.read(reinterpret_cast<char*>(ck.values.data()), static_cast<std::streamsize>(n * sizeof(Real)));
  if (!is) throw ConfigError("checkpoint truncated: " + path);
  return ck;
}

// Copies checkpoint values into a store with an identical slice layout.
inline void load_into(const Checkpoint& ck, ParamStore& store) {
  if (ck.slices.size() != store.slices().size() || ck.values.size() != store.size())
    throw ConfigError("checkpoint layout does not match model");
  for (std::size_t i = 0; i < ck.slices.size(); ++i) {
    const auto& a = ck.slices[i];
    const auto& b = store.slices()[i];
    if (a.name != b.name || a.offset != b.offset || a.shape != b.shape)
      throw ConfigError("checkpoint slice mismatch at " + a.name);
  }
  std::copy(ck.values.begin(), ck.values.end(), store.values().begin());
}

}  // namespace hidio::nn
