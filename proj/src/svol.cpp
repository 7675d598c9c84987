// Internal volume store. See docs/format.md for the byte layout.

#include <bit>
#include <cstring>

#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"

namespace seisreg {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'I', 'S', 'V', 'O', 'L', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 64;

static_assert(std::endian::native == std::endian::little,
              "svol encoder assumes a little-endian host");

class Writer {
public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void put(T v) {
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.insert(out_.end(), buf, buf + sizeof(T));
  }
  void put_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }

private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void get_bytes(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  void seek(std::size_t pos) { pos_ = pos; }
  std::size_t remaining() const { return in_.size() - pos_; }

private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw Error(ErrorKind::TruncatedFile, "svol payload is truncated");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_svol(const Volume& volume) {
  const auto& g = volume.geometry;
  if (volume.data.size() != g.n_voxels() || volume.valid.size() != g.n_voxels()) {
    throw Error(ErrorKind::MalformedVolume, "data/mask size does not match geometry");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + g.n_voxels() * 9 + 4 * (g.n_inlines() + g.n_xlines()));
  Writer w(out);
  w.put_bytes(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.n_inlines()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.n_xlines()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(g.n_samples));
  w.put<double>(g.t0_ms);
  w.put<double>(g.dt_ms);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(volume.attribute_name.size()));
  out.resize(kHeaderBytes, 0);

  for (auto il : g.inlines) w.put<std::int32_t>(il);
  for (auto xl : g.xlines) w.put<std::int32_t>(xl);
  w.put_bytes(volume.attribute_name.data(), volume.attribute_name.size());
  w.put_bytes(volume.valid.data(), volume.valid.size());
  for (std::size_t i = 0; i < volume.data.size(); ++i) {
    w.put<double>(volume.valid[i] ? volume.data[i] : 0.0);
  }
  return out;
}

Volume decode_svol(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorKind::TruncatedFile, "svol file is shorter than its " + std::to_string(kHeaderBytes) +
                                              "-byte header");
  }
  Reader r(bytes);
  char magic[8];
  r.get_bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw Error(ErrorKind::MalformedVolume, "bad svol magic");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) {
    throw Error(ErrorKind::MalformedVolume, "unsupported svol version " + std::to_string(version));
  }
  VolumeGeometry g;
  const auto ni = r.get<std::uint32_t>();
  const auto nx = r.get<std::uint32_t>();
  g.n_samples = r.get<std::uint32_t>();
  g.t0_ms = r.get<double>();
  g.dt_ms = r.get<double>();
  const auto name_len = r.get<std::uint32_t>();
  r.seek(kHeaderBytes);

  const std::size_t nvox = std::size_t{ni} * nx * g.n_samples;
  const std::size_t expected = 4 * (std::size_t{ni} + nx) + name_len + nvox * 9;
  if (r.remaining() != expected) {
    throw Error(ErrorKind::TruncatedFile, "svol payload has " + std::to_string(r.remaining()) +
                                              " bytes, header implies " + std::to_string(expected));
  }
  if (!(g.dt_ms > 0.0)) throw Error(ErrorKind::MalformedVolume, "svol dt_ms must be positive");

  g.inlines.resize(ni);
  g.xlines.resize(nx);
  for (auto& il : g.inlines) il = r.get<std::int32_t>();
  for (auto& xl : g.xlines) xl = r.get<std::int32_t>();
  std::string name(name_len, '\0');
  r.get_bytes(name.data(), name_len);

  Volume v(std::move(g), std::move(name));
  r.get_bytes(v.valid.data(), nvox);
  for (auto& x : v.data) x = r.get<double>();
  return v;
}

void write_svol(const std::filesystem::path& path, const Volume& volume) {
  write_file_bytes(path, encode_svol(volume));
}

Volume read_svol(const std::filesystem::path& path) { return decode_svol(read_file_bytes(path)); }

}  // namespace seisreg
