#include "ttl/datasets/synthetic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ttl/core/error.hpp"
#include "ttl/core/report.hpp"
#include "ttl/core/rng.hpp"

namespace ttl {
namespace {

constexpr int kShapeFamilies = 5;
constexpr double kBaseRadius = 0.2;       // object radius as a fraction of chip size at canonical distance
constexpr double kOrnamentOrbit = 1.4;    // in object radii
constexpr double kOrnamentRadius = 0.24;  // in object radii

struct Vec3 {
  double r, g, b;
};

Vec3 lerp(const Vec3& a, const Vec3& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

// Thermal: hot (bright) body on a cold dark background, achromatic.
constexpr Vec3 kThermalBackground{-0.55, -0.55, -0.55};
constexpr Vec3 kThermalObject{0.65, 0.65, 0.65};
// Visible: dark olive body on a light green-brown background.
constexpr Vec3 kVisibleBackground{0.30, 0.45, 0.05};
constexpr Vec3 kVisibleObject{-0.35, -0.30, -0.70};

bool inside_family(int family, double qx, double qy) {
  const double r = std::hypot(qx, qy);
  switch (family) {
    case 0:  // disk
      return r <= 1.0;
    case 1:  // square
      return std::max(std::abs(qx), std::abs(qy)) <= 0.85;
    case 2: {  // equilateral triangle inscribed in the unit circle
      for (int k = 0; k < 3; ++k) {
        const double a = -std::numbers::pi / 6 + k * 2 * std::numbers::pi / 3;  // outward edge normal
        if (qx * std::cos(a) + qy * std::sin(a) > 0.5) return false;
      }
      return true;
    }
    case 3:  // cross
      return (std::abs(qx) <= 0.3 && std::abs(qy) <= 1.0) || (std::abs(qy) <= 0.3 && std::abs(qx) <= 1.0);
    default:  // ring
      return r <= 1.0 && r >= 0.55;
  }
}

bool inside_object(int label, double qx, double qy) {
  if (inside_family(label % kShapeFamilies, qx, qy)) return true;
  const int ornaments = 2 * (label / kShapeFamilies);
  for (int j = 0; j < ornaments; ++j) {
    const double a = std::numbers::pi / 4 + j * 2 * std::numbers::pi / ornaments;
    const double ox = kOrnamentOrbit * std::cos(a);
    const double oy = kOrnamentOrbit * std::sin(a);
    if (std::hypot(qx - ox, qy - oy) <= kOrnamentRadius) return true;
  }
  return false;
}

std::vector<float> texture_field(TextureFamily family, int size, std::mt19937_64& eng) {
  std::vector<float> field(static_cast<std::size_t>(size) * size, 0.0f);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (family == TextureFamily::Stripes) {
    const double theta = u01(eng) * std::numbers::pi;
    const double period = 7.0 + 6.0 * u01(eng);
    const double phase = u01(eng) * 2 * std::numbers::pi;
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        field[y * size + x] = static_cast<float>(
            std::sin(2 * std::numbers::pi * (x * std::cos(theta) + y * std::sin(theta)) / period + phase));
    return field;
  }
  constexpr int kBlobs = 6;
  for (int b = 0; b < kBlobs; ++b) {
    const double cx = u01(eng) * size;
    const double cy = u01(eng) * size;
    const double sigma = (0.08 + 0.14 * u01(eng)) * size;
    const double amp = 2.0 * u01(eng) - 1.0;
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        field[y * size + x] += static_cast<float>(amp * std::exp(-d2 / (2 * sigma * sigma)));
      }
  }
  for (auto& v : field) v = std::clamp(v, -1.0f, 1.0f);
  return field;
}

torch::Tensor gaussian_blur(const torch::Tensor& chw, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  auto k = torch::arange(-radius, radius + 1, torch::kFloat64);
  k = torch::exp(-(k * k) / (2 * sigma * sigma));
  k = (k / k.sum()).to(torch::kFloat32);
  const auto c = chw.size(0);
  auto x = chw.unsqueeze(0);
  namespace F = torch::nn::functional;
  x = F::pad(x, F::PadFuncOptions({radius, radius, radius, radius}).mode(torch::kReflect));
  x = F::conv2d(x, k.view({1, 1, 1, -1}).expand({c, 1, 1, 2 * radius + 1}), F::Conv2dFuncOptions().groups(c));
  x = F::conv2d(x, k.view({1, 1, -1, 1}).expand({c, 1, 2 * radius + 1, 1}), F::Conv2dFuncOptions().groups(c));
  return x.squeeze(0);
}

void check_spec(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

void validate_style(const DomainStyle& s, const std::string& name) {
  check_spec(s.palette_mix >= 0.0 && s.palette_mix <= 1.0, name + ".palette_mix must be in [0, 1]");
  check_spec(s.blur_sigma >= 0.0, name + ".blur_sigma must be >= 0");
  check_spec(s.noise_std >= 0.0, name + ".noise_std must be >= 0");
}

}  // namespace

void SyntheticSpec::validate() const {
  check_spec(num_classes >= 1, "num_classes must be >= 1");
  check_spec(samples_per_class >= 1, "samples_per_class must be >= 1");
  check_spec(chip_size >= 8, "chip_size must be >= 8");
  check_spec(channels == 1 || channels == 3, "channels must be 1 or 3");
  check_spec(canonical_distance_m > 0.0, "canonical_distance_m must be > 0");
  check_spec(!distances_m.empty(), "distances_m must not be empty");
  for (const auto d : distances_m) check_spec(d > 0.0, "distances must be > 0");
  validate_style(source, "source");
  validate_style(target, "target");
}

torch::Tensor render_chip(int label, const Pose& pose, double distance_m, const DomainStyle& style,
                          const SyntheticSpec& spec, std::uint64_t noise_seed) {
  const int size = spec.chip_size;
  std::mt19937_64 eng(noise_seed);
  const auto field = texture_field(style.texture, size, eng);

  const double radius = kBaseRadius * size * pose.scale * spec.canonical_distance_m / distance_m;
  const double cx = size / 2.0 + pose.dx;
  const double cy = size / 2.0 + pose.dy;
  const double ca = std::cos(pose.angle);
  const double sa = std::sin(pose.angle);

  const Vec3 bg = lerp(kThermalBackground, kVisibleBackground, style.palette_mix);
  const Vec3 fg = lerp(kThermalObject, kVisibleObject, style.palette_mix);

  auto img = torch::empty({3, size, size}, torch::kFloat32);
  auto acc = img.accessor<float, 3>();
  constexpr int kSuper = 3;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      int hits = 0;
      for (int sy = 0; sy < kSuper; ++sy)
        for (int sx = 0; sx < kSuper; ++sx) {
          const double px = x + (sx + 0.5) / kSuper - cx;
          const double py = y + (sy + 0.5) / kSuper - cy;
          const double qx = (ca * px + sa * py) / radius;
          const double qy = (-sa * px + ca * py) / radius;
          hits += inside_object(label, qx, qy) ? 1 : 0;
        }
      const double m = static_cast<double>(hits) / (kSuper * kSuper);
      const double t = 0.15 * field[y * size + x];
      // Mild vertical shading on the object.
      const double shade = 0.1 * ((y - cy) / std::max(radius, 1.0));
      const Vec3 b{bg.r + t, bg.g + t, bg.b + t};
      const Vec3 f{fg.r - shade, fg.g - shade, fg.b - shade};
      acc[0][y][x] = static_cast<float>(b.r * (1 - m) + f.r * m);
      acc[1][y][x] = static_cast<float>(b.g * (1 - m) + f.g * m);
      acc[2][y][x] = static_cast<float>(b.b * (1 - m) + f.b * m);
    }
  }
  if (style.blur_sigma > 0.0) img = gaussian_blur(img, style.blur_sigma);
  if (style.noise_std > 0.0) {
    std::normal_distribution<float> noise(0.0f, static_cast<float>(style.noise_std));
    auto* p = img.data_ptr<float>();
    for (std::int64_t i = 0; i < img.numel(); ++i) p[i] += noise(eng);
  }
  img = img.clamp(-1.0, 1.0);
  if (spec.channels == 1) img = img.mean(0, true);
  return img.contiguous();
}

SyntheticDomains make_synthetic_domains(const SyntheticSpec& spec) {
  spec.validate();
  const RngStreams streams(spec.seed);
  SyntheticDomains out;
  for (const auto domain : {Domain::Source, Domain::Target}) {
    const auto& style = domain == Domain::Source ? spec.source : spec.target;
    const std::string name(to_string(domain));
    auto& chips = domain == Domain::Source ? out.source : out.target;
    chips.reserve(static_cast<std::size_t>(spec.num_classes) * spec.samples_per_class);
    for (int c = 0; c < spec.num_classes; ++c) {
      auto pose_eng = streams.engine(name + "/pose", static_cast<std::uint64_t>(c));
      std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
      std::uniform_real_distribution<double> shift(-3.0, 3.0);
      std::uniform_real_distribution<double> scale(0.92, 1.08);
      std::uniform_int_distribution<std::size_t> pick(0, spec.distances_m.size() - 1);
      for (int i = 0; i < spec.samples_per_class; ++i) {
        Pose pose;
        pose.angle = angle(pose_eng);
        pose.dx = shift(pose_eng);
        pose.dy = shift(pose_eng);
        pose.scale = scale(pose_eng);
        const double distance = spec.distances_m[pick(pose_eng)];
        const auto index = static_cast<std::uint64_t>(c) * spec.samples_per_class + i;
        ImageChip chip;
        chip.pixels = render_chip(c, pose, distance, style, spec, streams.derive(name + "/render", index));
        chip.domain = domain;
        chip.label = c;
        chip.capture_distance_m = distance;
        chips.push_back(std::move(chip));
      }
    }
  }
  return out;
}

namespace {

TextureFamily texture_from(const std::string& v) {
  if (v == "blobs") return TextureFamily::Blobs;
  if (v == "stripes") return TextureFamily::Stripes;
  throw Error(ErrorCode::InvalidSpec, "texture must be blobs|stripes");
}

double real_of(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidSpec, key + ": bad number '" + v + "'");
}

int int_of(const std::string& key, const std::string& v) {
  const double d = real_of(key, v);
  if (d != std::floor(d)) throw Error(ErrorCode::InvalidSpec, key + ": expected an integer");
  return static_cast<int>(d);
}

bool set_style(DomainStyle& s, const std::string& field, const std::string& key, const std::string& v) {
  if (field == "palette_mix") s.palette_mix = real_of(key, v);
  else if (field == "blur_sigma") s.blur_sigma = real_of(key, v);
  else if (field == "noise_std") s.noise_std = real_of(key, v);
  else if (field == "texture") s.texture = texture_from(v);
  else return false;
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& text) {
  SyntheticSpec spec;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidSpec, "expected 'key = value': " + line);
    const auto key = trim(line.substr(0, eq));
    const auto v = trim(line.substr(eq + 1));
    const std::string prefix = "synthetic.";
    if (!key.starts_with(prefix)) throw Error(ErrorCode::InvalidSpec, "unknown key '" + key + "'");
    const auto k = key.substr(prefix.size());
    if (k == "num_classes") spec.num_classes = int_of(key, v);
    else if (k == "samples_per_class") spec.samples_per_class = int_of(key, v);
    else if (k == "chip_size") spec.chip_size = int_of(key, v);
    else if (k == "channels") spec.channels = int_of(key, v);
    else if (k == "canonical_distance_m") spec.canonical_distance_m = real_of(key, v);
    else if (k == "seed") spec.seed = static_cast<std::uint64_t>(int_of(key, v));
    else if (k == "distances_m") {
      spec.distances_m.clear();
      std::istringstream list(v);
      std::string item;
      while (std::getline(list, item, ',')) spec.distances_m.push_back(real_of(key, trim(item)));
    } else if (k.starts_with("source.") && set_style(spec.source, k.substr(7), key, v)) {
    } else if (k.starts_with("target.") && set_style(spec.target, k.substr(7), key, v)) {
    } else {
      throw Error(ErrorCode::InvalidSpec, "unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string serialize_synthetic_spec(const SyntheticSpec& spec) {
  std::ostringstream os;
  os << "synthetic.num_classes = " << spec.num_classes << "\n"
     << "synthetic.samples_per_class = " << spec.samples_per_class << "\n"
     << "synthetic.chip_size = " << spec.chip_size << "\n"
     << "synthetic.channels = " << spec.channels << "\n"
     << "synthetic.canonical_distance_m = " << format_exact(spec.canonical_distance_m) << "\n"
     << "synthetic.seed = " << spec.seed << "\n"
     << "synthetic.distances_m = ";
  for (std::size_t i = 0; i < spec.distances_m.size(); ++i)
    os << (i ? ", " : "") << format_exact(spec.distances_m[i]);
  os << "\n";
  for (const auto& [name, s] : {std::pair{"source", spec.source}, std::pair{"target", spec.target}}) {
    os << "synthetic." << name << ".palette_mix = " << format_exact(s.palette_mix) << "\n"
       << "synthetic." << name << ".blur_sigma = " << format_exact(s.blur_sigma) << "\n"
       << "synthetic." << name << ".noise_std = " << format_exact(s.noise_std) << "\n"
       << "synthetic." << name << ".texture = " << (s.texture == TextureFamily::Blobs ? "blobs" : "stripes")
       << "\n";
  }
  return os.str();
}

}  // namespace ttl
