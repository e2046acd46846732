#include "siglab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace siglab::checkpoint {

namespace {

constexpr char kMagic[] = "SGLAB1\n";
constexpr std::size_t kMagicLen = 7;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            std::streamsize(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          std::streamsize(v.size() * sizeof(double)));
}

}  // namespace

void save(const std::string& path, const nn::ParamVec& theta,
          const es::AdamWState& state) {
  if (state.m.size() != theta.size() || state.v.size() != theta.size()) {
    throw std::runtime_error("checkpoint::save: moment size mismatch");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint::save: cannot open " + path);
  out.write(kMagic, kMagicLen);
  const std::uint64_t count = theta.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  write_doubles(out, theta);
  write_doubles(out, state.m);
  write_doubles(out, state.v);
  if (!out) throw std::runtime_error("checkpoint::save: write failed: " + path);
}

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint::load: cannot open " + path);
  char magic[kMagicLen];
  in.read(magic, kMagicLen);
  if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0) {
    throw std::runtime_error("checkpoint::load: bad magic in " + path);
  }
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in) throw std::runtime_error("checkpoint::load: truncated header in " + path);
  Loaded result;
  result.theta.resize(count);
  result.moment1.resize(count);
  result.moment2.resize(count);
  read_doubles(in, result.theta);
  read_doubles(in, result.moment1);
  read_doubles(in, result.moment2);
  if (!in) throw std::runtime_error("checkpoint::load: truncated data in " + path);
  return result;
}

}  // namespace siglab::checkpoint
