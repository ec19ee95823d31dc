#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <torch/torch.h>

namespace ttl {

/// Named-stream random source. Each consumer derives its own independent
/// stream from (root seed, name[, index]); adding a consumer leaves every
/// other stream untouched.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t derive(std::string_view name, std::uint64_t index = 0) const;

  std::mt19937_64 engine(std::string_view name, std::uint64_t index = 0) const;
  torch::Generator torch_generator(std::string_view name, std::uint64_t index = 0) const;

 private:
  std::uint64_t seed_;
};

/// Seeds torch's global generator as well, then returns the stream handle.
RngStreams seed_all(std::uint64_t seed);

std::string engine_state(const std::mt19937_64& eng);
void restore_engine_state(std::mt19937_64& eng, const std::string& state);

}  // namespace ttl
