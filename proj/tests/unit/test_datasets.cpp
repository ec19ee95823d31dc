#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "../support/measure.hpp"
#include "ttl/core/error.hpp"
#include "ttl/datasets/batches.hpp"
#include "ttl/datasets/image_io.hpp"
#include "ttl/datasets/manifest.hpp"
#include "ttl/datasets/projection.hpp"
#include "ttl/datasets/split.hpp"
#include "ttl/datasets/synthetic.hpp"

namespace fs = std::filesystem;
using namespace ttl;

namespace {

ImageChip chip_at(double distance, int size = 68) {
  ImageChip c;
  c.pixels = torch::rand({3, size, size}) * 2 - 1;
  c.capture_distance_m = distance;
  c.label = 0;
  return c;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected ttl::Error");
  return ErrorCode::InvalidValue;
}

}  // namespace

TEST_SUITE("datasets") {

TEST_CASE("projection scale follows the pinhole model") {
  CHECK(projection_scale(2000, 2000) == 1.0);
  CHECK(projection_scale(1000, 2000) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(projection_scale(4000, 2000) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(code_of([] { projection_scale(0, 2000); }) == ErrorCode::NonpositiveDistance);
  CHECK(code_of([] { projection_scale(-5, 2000); }) == ErrorCode::NonpositiveDistance);

  ImageChip bare;
  bare.pixels = torch::zeros({3, 8, 8});
  CHECK(code_of([&] { project_to_canonical(bare, 2000, 8); }) == ErrorCode::MissingDistance);
}

TEST_CASE("projection at the canonical distance leaves the image unchanged") {
  const auto c = chip_at(2000);
  const auto p = project_to_canonical(c, 2000, 68);
  CHECK(torch::equal(p.pixels, c.pixels));
  CHECK(*p.capture_distance_m == 2000);
}

TEST_CASE("projection is idempotent") {
  for (double d : {1000.0, 1500.0, 3000.0, 5000.0}) {
    const auto once = project_to_canonical(chip_at(d), 2000, 68);
    const auto twice = project_to_canonical(once, 2000, 68);
    CHECK(torch::equal(once.pixels, twice.pixels));
    CHECK(once.pixels.sizes() == torch::IntArrayRef({3, 68, 68}));
  }
}

TEST_CASE("projected disk diameter scales with distance") {
  const double canonical = measure::blob_diameter(measure::centered_disk(2000));
  for (double d : {1000.0, 1500.0, 2500.0, 3000.0, 4000.0}) {
    ImageChip c;
    c.pixels = measure::centered_disk(d);
    c.capture_distance_m = d;
    const double before = measure::blob_diameter(c.pixels);
    const double after = measure::blob_diameter(project_to_canonical(c, 2000, 68).pixels);
    INFO("distance " << d << " before " << before << " after " << after);
    CHECK(std::fabs(after - d / 2000.0 * before) <= 2.0);
    CHECK(std::fabs(after - canonical) <= 2.0);
  }
}

TEST_CASE("shrinking pads with the border mean") {
  ImageChip c;
  c.pixels = torch::full({3, 68, 68}, 0.25);
  c.capture_distance_m = 1000;
  const auto p = project_to_canonical(c, 2000, 68);
  CHECK(p.pixels.sizes() == torch::IntArrayRef({3, 68, 68}));
  CHECK(p.pixels.sub(0.25).abs().max().item<double>() < 1e-5);
}

TEST_CASE("split is a stratified 70:15:15 partition") {
  std::vector<int> labels;
  for (int c = 0; c < 10; ++c) labels.insert(labels.end(), 100, c);
  const auto s = split_indices(labels, 10, 3);
  CHECK(s.train.size() == 700);
  CHECK(s.val.size() == 150);
  CHECK(s.test.size() == 150);
  for (int c = 0; c < 10; ++c) {
    const auto count = [&](const std::vector<std::size_t>& p) {
      return std::count_if(p.begin(), p.end(), [&](std::size_t i) { return labels[i] == c; });
    };
    CHECK(count(s.train) == 70);
    CHECK(count(s.val) == 15);
    CHECK(count(s.test) == 15);
  }
  std::string why;
  CHECK(measure::split_partition_ok(labels, 10, s, why));
}

TEST_CASE("split partition property over random record sets") {
  std::mt19937_64 eng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    int k = 0;
    const auto labels = measure::random_labels(eng, k);
    const auto s = split_indices(labels, k, static_cast<std::uint64_t>(trial));
    std::string why;
    INFO("trial " << trial);
    CHECK_MESSAGE(measure::split_partition_ok(labels, k, s, why), why);
  }
}

TEST_CASE("split edge cases") {
  std::vector<int> labels(20, 0);
  labels.push_back(1);  // a class with a single record
  const auto s = split_indices(labels, 2, 0);
  CHECK(std::find(s.train.begin(), s.train.end(), std::size_t{20}) != s.train.end());

  CHECK(code_of([] {
          const std::vector<int> l{0, 0, 2};
          split_indices(l, 3, 0);
        }) == ErrorCode::EmptyClass);

  const auto a = split_indices(labels, 2, 9);
  const auto b = split_indices(labels, 2, 9);
  CHECK(a.train == b.train);
  CHECK(a.val == b.val);
  CHECK(a.test == b.test);
}

TEST_CASE("split_dataset keeps records intact") {
  std::vector<ChipRecord> records;
  for (int i = 0; i < 40; ++i) records.push_back({"r" + std::to_string(i) + ".png", i % 4, Domain::Source, 2000});
  const auto s = split_dataset(records, 4, 1);
  CHECK(s.train.size() + s.val.size() + s.test.size() == 40);
}

TEST_CASE("batches keep the final partial batch") {
  ChipSet chips(500);
  for (std::size_t i = 0; i < chips.size(); ++i) {
    chips[i].pixels = torch::full({1, 2, 2}, static_cast<float>(i));
    chips[i].label = static_cast<int>(i % 10);
  }
  auto stream = iterate_batches(chips, 160, false, 0);
  CHECK(stream.num_batches() == 4);
  std::vector<std::int64_t> sizes;
  float expect = 0;
  while (auto b = stream.next()) {
    sizes.push_back(b->size());
    for (std::int64_t i = 0; i < b->size(); ++i) CHECK(b->images[i][0][0][0].item<float>() == expect++);
    CHECK(b->labels.has_value());
  }
  CHECK(sizes == std::vector<std::int64_t>{160, 160, 160, 20});
}

TEST_CASE("shuffled epochs are reproducible permutations") {
  const auto e1 = epoch_order(100, true, 7, 1);
  const auto e2 = epoch_order(100, true, 7, 2);
  CHECK(e1 == epoch_order(100, true, 7, 1));
  CHECK(e1 != e2);
  auto sorted = e1;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  const auto id = epoch_order(5, false, 7, 3);
  CHECK(id == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("unlabeled chips yield unlabeled batches") {
  ChipSet chips(3);
  for (auto& c : chips) c.pixels = torch::zeros({1, 2, 2});
  chips[0].label = 1;
  const std::vector<std::size_t> idx{0, 1, 2};
  CHECK_FALSE(make_batch(chips, idx).labels.has_value());
}

TEST_CASE("synthetic domains: counts, determinism, unpaired") {
  SyntheticSpec spec;
  spec.samples_per_class = 50;
  spec.chip_size = 32;
  const auto a = make_synthetic_domains(spec);
  CHECK(a.source.size() == 500);
  CHECK(a.target.size() == 500);
  std::vector<int> per_class(10, 0);
  for (const auto& c : a.target) {
    CHECK(c.domain == Domain::Target);
    ++per_class[*c.label];
    CHECK(c.pixels.sizes() == torch::IntArrayRef({3, 32, 32}));
    CHECK(c.pixels.abs().max().item<float>() <= 1.0f);
  }
  for (int n : per_class) CHECK(n == 50);

  spec.samples_per_class = 3;
  const auto b = make_synthetic_domains(spec);
  const auto c = make_synthetic_domains(spec);
  for (std::size_t i = 0; i < b.source.size(); ++i) {
    CHECK(torch::equal(b.source[i].pixels, c.source[i].pixels));
    CHECK(torch::equal(b.target[i].pixels, c.target[i].pixels));
  }
  spec.seed = 1;
  const auto d = make_synthetic_domains(spec);
  CHECK_FALSE(torch::equal(b.source[0].pixels, d.source[0].pixels));
}

TEST_CASE("synthetic spec validation and text round trip") {
  SyntheticSpec spec;
  spec.samples_per_class = 0;
  CHECK(code_of([&] { spec.validate(); }) == ErrorCode::InvalidSpec);
  spec = {};
  spec.target.blur_sigma = -1;
  CHECK(code_of([&] { make_synthetic_domains(spec); }) == ErrorCode::InvalidSpec);
  spec = {};
  spec.target.noise_std = 0.07;
  spec.distances_m = {1000, 3500};
  spec.seed = 11;
  const auto back = parse_synthetic_spec(serialize_synthetic_spec(spec));
  CHECK(back.target == spec.target);
  CHECK(back.distances_m == spec.distances_m);
  CHECK(back.seed == 11);
  CHECK(code_of([] { parse_synthetic_spec("synthetic.target.texture = plaid\n"); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("distance changes apparent size") {
  const double near = measure::blob_diameter(measure::centered_disk(1000));
  const double far = measure::blob_diameter(measure::centered_disk(4000));
  CHECK(near == doctest::Approx(4 * far).epsilon(0.1));
}

TEST_CASE("png round trip within quantization") {
  const auto dir = fs::temp_directory_path() / "ttl_dataset_tests";
  fs::create_directories(dir);
  const auto img = torch::rand({3, 9, 7}) * 2 - 1;
  write_png(dir / "x.png", img);
  const auto back = read_png(dir / "x.png", 3);
  CHECK(back.sizes() == img.sizes());
  CHECK((back - img).abs().max().item<float>() <= 1.0f / 255.0f + 1e-6f);
  CHECK(read_png(dir / "x.png", 1).size(0) == 1);
  CHECK(code_of([&] { read_png(dir / "absent.png"); }) == ErrorCode::IoFailure);
}

TEST_CASE("dataset write and reload") {
  const auto dir = fs::temp_directory_path() / "ttl_dataset_tests" / "ds";
  fs::remove_all(dir);
  SyntheticSpec spec;
  spec.samples_per_class = 2;
  spec.num_classes = 3;
  spec.chip_size = 16;
  const auto d = make_synthetic_domains(spec);
  auto all = d.source;
  all.insert(all.end(), d.target.begin(), d.target.end());
  const auto records = write_dataset(dir, all);
  CHECK(records.size() == 12);
  CHECK((read_manifest(dir / "manifest.csv") == records));
  const auto chips = load_chips(dir / "manifest.csv");
  REQUIRE(chips.size() == 12);
  for (std::size_t i = 0; i < chips.size(); ++i) {
    CHECK(chips[i].label == all[i].label);
    CHECK(chips[i].domain == all[i].domain);
    CHECK(chips[i].capture_distance_m == all[i].capture_distance_m);
    CHECK((chips[i].pixels - all[i].pixels).abs().max().item<float>() <= 1.0f / 255.0f + 1e-6f);
  }
}

TEST_CASE("manifest parsing rejects bad input") {
  const auto dir = fs::temp_directory_path() / "ttl_dataset_tests";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "bad.csv");
    f << "file,label\nx.png,1\n";
  }
  CHECK(code_of([&] { read_manifest(dir / "bad.csv"); }) == ErrorCode::InvalidValue);
  CHECK(is_standard_distance(1000));
  CHECK(is_standard_distance(4500));
  CHECK_FALSE(is_standard_distance(1250));
  CHECK_FALSE(is_standard_distance(5500));
}

}  // TEST_SUITE
