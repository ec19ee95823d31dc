#include "ttl/core/digest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <stdexcept>

namespace ttl {

Sha256Builder::Sha256Builder() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 init failed");
}

Sha256Builder::~Sha256Builder() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256Builder::update(std::span<const std::uint8_t> bytes) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
}

void Sha256Builder::update(const torch::Tensor& t) {
  const auto c = t.detach().contiguous().cpu();
  update(std::span(static_cast<const std::uint8_t*>(c.data_ptr()), c.nbytes()));
}

Sha256 Sha256Builder::finish() {
  Sha256 out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len);
  return out;
}

Sha256 sha256(std::span<const std::uint8_t> bytes) {
  Sha256Builder b;
  b.update(bytes);
  return b.finish();
}

std::string to_hex(const Sha256& d) {
  std::string s;
  s.reserve(64);
  char buf[3];
  for (const auto byte : d) {
    std::snprintf(buf, sizeof buf, "%02x", byte);
    s += buf;
  }
  return s;
}

std::string module_digest(const torch::nn::Module& module) {
  Sha256Builder b;
  auto feed = [&](const std::string& name, const torch::Tensor& t) {
    b.update(std::span(reinterpret_cast<const std::uint8_t*>(name.data()), name.size()));
    for (const auto d : t.sizes()) b.update(std::span(reinterpret_cast<const std::uint8_t*>(&d), sizeof d));
    b.update(t);
  };
  for (const auto& p : module.named_parameters(true)) feed(p.key(), p.value());
  for (const auto& p : module.named_buffers(true)) feed(p.key(), p.value());
  return to_hex(b.finish());
}

}  // namespace ttl
