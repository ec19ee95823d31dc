#include "ttl/core/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "ttl/core/digest.hpp"
#include "ttl/core/error.hpp"

namespace ttl {
namespace {

constexpr std::array<char, 8> kMagic = {'T', 'T', 'L', 'C', 'K', 'P', 'T', '\0'};

enum class DType : std::uint8_t { F32 = 1, F64 = 2, I64 = 3 };

DType dtype_code(const torch::Tensor& t) {
  switch (t.scalar_type()) {
    case torch::kFloat32: return DType::F32;
    case torch::kFloat64: return DType::F64;
    case torch::kInt64: return DType::I64;
    default: throw Error(ErrorCode::InvalidValue, "unsupported tensor dtype in checkpoint");
  }
}

torch::ScalarType scalar_type(DType d) {
  switch (d) {
    case DType::F32: return torch::kFloat32;
    case DType::F64: return torch::kFloat64;
    case DType::I64: return torch::kInt64;
  }
  throw Error(ErrorCode::CorruptCheckpoint, "unknown dtype code");
}

class Writer {
 public:
  template <class T>
  void pod(const T& v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  std::vector<char>& buffer() { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

  template <class T>
  T pod() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  const char* take(std::size_t n) {
    if (n > size_ - pos_) throw Error(ErrorCode::CorruptCheckpoint, "checkpoint truncated");
    const char* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == size_; }

 private:
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const CheckpointData& data) {
  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.pod(kCheckpointFormatVersion);
  w.pod(data.num_classes);
  const auto header = data.header.dump();
  w.pod(static_cast<std::uint64_t>(header.size()));
  w.bytes(header.data(), header.size());
  w.pod(static_cast<std::uint64_t>(data.tensors.size()));
  for (const auto& [name, tensor] : data.tensors) {
    const auto t = tensor.detach().contiguous().cpu();
    w.pod(static_cast<std::uint32_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.pod(dtype_code(t));
    w.pod(static_cast<std::uint32_t>(t.dim()));
    for (const auto d : t.sizes()) w.pod(static_cast<std::int64_t>(d));
    w.pod(static_cast<std::uint64_t>(t.nbytes()));
    w.bytes(t.data_ptr(), t.nbytes());
  }
  auto& buf = w.buffer();
  const auto digest = sha256(std::span(reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size()));
  buf.insert(buf.end(), digest.begin(), digest.end());

  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write checkpoint " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "short write on " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot move checkpoint into place: " + ec.message());
}

CheckpointData read_checkpoint(const std::filesystem::path& path, std::uint32_t expected_num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open checkpoint " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < kMagic.size() + 32 || !std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
    throw Error(ErrorCode::CorruptCheckpoint, path.string() + ": bad magic bytes");
  const std::size_t body = buf.size() - 32;
  const auto digest = sha256(std::span(reinterpret_cast<const std::uint8_t*>(buf.data()), body));
  if (!std::equal(digest.begin(), digest.end(), reinterpret_cast<const std::uint8_t*>(buf.data() + body)))
    throw Error(ErrorCode::CorruptCheckpoint, path.string() + ": digest mismatch");

  Reader r(buf.data(), body);
  r.take(kMagic.size());
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "checkpoint format " + std::to_string(version) + ", expected " +
                                                std::to_string(kCheckpointFormatVersion));
  CheckpointData data;
  data.num_classes = r.pod<std::uint32_t>();
  if (expected_num_classes != 0 && data.num_classes != expected_num_classes)
    throw Error(ErrorCode::VersionMismatch, "checkpoint has " + std::to_string(data.num_classes) +
                                                " classes, config has " + std::to_string(expected_num_classes));
  const auto header_len = r.pod<std::uint64_t>();
  const char* header = r.take(header_len);
  try {
    data.header = nlohmann::json::parse(header, header + header_len);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::CorruptCheckpoint, "unreadable checkpoint header");
  }
  const auto count = r.pod<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = r.pod<std::uint32_t>();
    std::string name(r.take(name_len), name_len);
    const auto dtype = scalar_type(r.pod<DType>());
    const auto ndim = r.pod<std::uint32_t>();
    std::vector<std::int64_t> dims(ndim);
    for (auto& d : dims) d = r.pod<std::int64_t>();
    const auto nbytes = r.pod<std::uint64_t>();
    auto t = torch::empty(dims, torch::TensorOptions().dtype(dtype));
    if (t.nbytes() != nbytes) throw Error(ErrorCode::CorruptCheckpoint, "tensor size mismatch for " + name);
    std::memcpy(t.data_ptr(), r.take(nbytes), nbytes);
    data.tensors.emplace(std::move(name), std::move(t));
  }
  if (!r.done()) throw Error(ErrorCode::CorruptCheckpoint, "trailing bytes in checkpoint");
  return data;
}

void export_module(const torch::nn::Module& module, const std::string& prefix, CheckpointData& data) {
  for (const auto& p : module.named_parameters(true)) data.tensors[prefix + p.key()] = p.value().detach().clone();
  for (const auto& b : module.named_buffers(true)) data.tensors[prefix + b.key()] = b.value().detach().clone();
}

void import_module(torch::nn::Module& module, const std::string& prefix, const CheckpointData& data) {
  torch::NoGradGuard no_grad;
  auto load = [&](const std::string& key, torch::Tensor& dst) {
    const auto it = data.tensors.find(prefix + key);
    if (it == data.tensors.end()) throw Error(ErrorCode::VersionMismatch, "checkpoint lacks " + prefix + key);
    if (it->second.sizes() != dst.sizes())
      throw Error(ErrorCode::VersionMismatch, "shape mismatch for " + prefix + key);
    dst.copy_(it->second);
  };
  for (auto& p : module.named_parameters(true)) load(p.key(), p.value());
  for (auto& b : module.named_buffers(true)) load(b.key(), b.value());
}

bool has_prefix(const CheckpointData& data, const std::string& prefix) {
  const auto it = data.tensors.lower_bound(prefix);
  return it != data.tensors.end() && it->first.starts_with(prefix);
}

}  // namespace ttl
