#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <torch/torch.h>

namespace ttl {

using Sha256 = std::array<std::uint8_t, 32>;

class Sha256Builder {
 public:
  Sha256Builder();
  ~Sha256Builder();
  Sha256Builder(const Sha256Builder&) = delete;
  Sha256Builder& operator=(const Sha256Builder&) = delete;

  void update(std::span<const std::uint8_t> bytes);
  void update(const torch::Tensor& t);
  Sha256 finish();

 private:
  void* ctx_;
};

Sha256 sha256(std::span<const std::uint8_t> bytes);
std::string to_hex(const Sha256& d);

/// Digest over names, shapes and raw bytes of every parameter and buffer.
std::string module_digest(const torch::nn::Module& module);

}  // namespace ttl
