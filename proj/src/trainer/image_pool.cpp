#include "ttl/trainer/image_pool.hpp"

#include "ttl/core/error.hpp"

namespace ttl {

torch::Tensor ImagePool::query(const torch::Tensor& images, std::mt19937_64& rng) {
  if (capacity_ <= 0) return images;
  std::vector<torch::Tensor> out;
  out.reserve(images.size(0));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::int64_t i = 0; i < images.size(0); ++i) {
    auto img = images[i].detach().clone();
    if (images_.size() < static_cast<std::size_t>(capacity_)) {
      images_.push_back(img);
      out.push_back(img);
    } else if (coin(rng) > 0.5) {
      std::uniform_int_distribution<std::size_t> pick(0, images_.size() - 1);
      const auto k = pick(rng);
      out.push_back(images_[k]);
      images_[k] = img;
    } else {
      out.push_back(img);
    }
  }
  return torch::stack(out);
}

void ImagePool::export_state(const std::string& prefix, CheckpointData& data) const {
  if (images_.empty()) return;
  data.tensors[prefix + "images"] = torch::stack(images_);
}

void ImagePool::import_state(const std::string& prefix, const CheckpointData& data) {
  images_.clear();
  const auto it = data.tensors.find(prefix + "images");
  if (it == data.tensors.end()) return;
  if (it->second.size(0) > capacity_) throw Error(ErrorCode::VersionMismatch, "image pool larger than capacity");
  for (std::int64_t i = 0; i < it->second.size(0); ++i) images_.push_back(it->second[i].clone());
}

}  // namespace ttl
