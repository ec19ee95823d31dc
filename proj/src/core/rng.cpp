#include "ttl/core/rng.hpp"

#include <sstream>

#include <ATen/CPUGeneratorImpl.h>

namespace ttl {
namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a
std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : name) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t RngStreams::derive(std::string_view name, std::uint64_t index) const {
  return mix(mix(mix(seed_) ^ hash_name(name)) ^ index);
}

std::mt19937_64 RngStreams::engine(std::string_view name, std::uint64_t index) const {
  return std::mt19937_64(derive(name, index));
}

torch::Generator RngStreams::torch_generator(std::string_view name, std::uint64_t index) const {
  return at::make_generator<at::CPUGeneratorImpl>(derive(name, index));
}

RngStreams seed_all(std::uint64_t seed) {
  RngStreams streams(seed);
  torch::manual_seed(streams.derive("torch-global"));
  return streams;
}

std::string engine_state(const std::mt19937_64& eng) {
  std::ostringstream os;
  os << eng;
  return os.str();
}

void restore_engine_state(std::mt19937_64& eng, const std::string& state) {
  std::istringstream is(state);
  is >> eng;
}

}  // namespace ttl
