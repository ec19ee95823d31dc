#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>
#include <torch/torch.h>

namespace ttl {

inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

/// Single-file checkpoint container:
///
///   "TTLCKPT\0"  magic (8 bytes)
///   u32          format version
///   u32          num_classes
///   u64, bytes   JSON header (config snapshot, training state, RNG state)
///   u64          tensor count
///   per tensor:  u32 name length, name, u8 dtype, u32 ndim, i64 dims[ndim],
///                u64 byte count, raw little-endian bytes
///   32 bytes     SHA-256 over everything above
struct CheckpointData {
  std::uint32_t num_classes = 0;
  nlohmann::json header = nlohmann::json::object();
  std::map<std::string, torch::Tensor> tensors;
};

void write_checkpoint(const std::filesystem::path& path, const CheckpointData& data);

/// Throws IoFailure, CorruptCheckpoint (bad magic, truncation, digest) or
/// VersionMismatch (format version, or num_classes != expected when
/// expected_num_classes > 0).
CheckpointData read_checkpoint(const std::filesystem::path& path, std::uint32_t expected_num_classes = 0);

/// Copies parameters and buffers of `module` into `data` under `prefix`.
void export_module(const torch::nn::Module& module, const std::string& prefix, CheckpointData& data);

/// Loads every parameter and buffer of `module` from `data`. Missing entries
/// or shape differences raise VersionMismatch.
void import_module(torch::nn::Module& module, const std::string& prefix, const CheckpointData& data);

bool has_prefix(const CheckpointData& data, const std::string& prefix);

}  // namespace ttl
