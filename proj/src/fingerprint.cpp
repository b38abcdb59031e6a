// Copyright (c) 2026 The prnukit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prnukit/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "fft.hpp"
#include "prnukit/error.hpp"
#include "prnukit/tensor_io.hpp"

namespace prnukit {
namespace fs = std::filesystem;

void accumulate(FingerprintAccumulator& acc, const Image& img, const Residual& res) {
  if (acc.count == 0 && acc.numerator.empty()) {
    acc.numerator = Plane(img.height, img.width);
    acc.denominator = Plane(img.height, img.width);
  }
  if (img.height != acc.numerator.height || img.width != acc.numerator.width ||
      !res.plane.same_dims(acc.numerator))
    throw Error(Errc::dimension_mismatch, "accumulate: image/residual dims differ from accumulator");
  const Plane y = working_luma(img);
  const auto sat = img.max_value();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (acc.skip_saturated) {
      bool saturated = false;
      for (std::size_t ch = 0; ch < img.channels; ++ch)
        saturated |= img.pixels[i * img.channels + ch] == sat;
      if (saturated) continue;
    }
    acc.numerator.values[i] += res.plane.values[i] * y.values[i];
    acc.denominator.values[i] += y.values[i] * y.values[i];
  }
  ++acc.count;
  acc.provenance.push_back(img.source_tag);
}

FingerprintAccumulator merge(FingerprintAccumulator a, const FingerprintAccumulator& b) {
  if (!a.numerator.same_dims(b.numerator))
    throw Error(Errc::dimension_mismatch, "merge: accumulator dims differ");
  for (std::size_t i = 0; i < a.numerator.size(); ++i) {
    a.numerator.values[i] += b.numerator.values[i];
    a.denominator.values[i] += b.denominator.values[i];
  }
  a.count += b.count;
  a.provenance.insert(a.provenance.end(), b.provenance.begin(), b.provenance.end());
  return a;
}

bool Fingerprint::has_flag(const std::string& f) const {
  return std::find(post_flags.begin(), post_flags.end(), f) != post_flags.end();
}

Fingerprint finalize(const FingerprintAccumulator& acc, double eps) {
  if (acc.count == 0) throw Error(Errc::empty_input, "finalize: accumulator is empty");
  if (!(eps >= 0.0)) throw Error(Errc::invalid_argument, "finalize: eps must be >= 0");
  Fingerprint fp;
  fp.plane = Plane(acc.numerator.height, acc.numerator.width);
  for (std::size_t i = 0; i < fp.plane.size(); ++i) {
    const double den = acc.denominator.values[i] + eps;
    fp.plane.values[i] = den > 0.0 ? acc.numerator.values[i] / den : 0.0;
  }
  fp.provenance = acc.provenance;
  fp.eps = eps;
  return fp;
}

Fingerprint zero_mean(Fingerprint fp) {
  Plane& p = fp.plane;
  for (std::size_t r = 0; r < p.height; ++r) {
    auto row = p.row(r);
    double m = 0.0;
    for (double v : row) m += v;
    m /= static_cast<double>(p.width);
    for (auto& v : row) v -= m;
  }
  std::vector<double> col(p.width, 0.0);
  for (std::size_t r = 0; r < p.height; ++r)
    for (std::size_t c = 0; c < p.width; ++c) col[c] += p(r, c);
  for (auto& m : col) m /= static_cast<double>(p.height);
  for (std::size_t r = 0; r < p.height; ++r)
    for (std::size_t c = 0; c < p.width; ++c) p(r, c) -= col[c];
  fp.post_flags.emplace_back("zero_mean");
  return fp;
}

Fingerprint wiener_fft(Fingerprint fp, double strength) {
  if (!(strength > 0.0)) throw Error(Errc::invalid_argument, "wiener_fft: strength must be > 0");
  detail::RealFft2d fft(fp.plane.height, fp.plane.width);
  detail::Spectrum spec = fft.forward(fp.plane);
  std::vector<double> power(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) power[i] = std::norm(spec[i]);
  std::vector<double> sorted = power;
  auto mid = sorted.begin() + static_cast<long>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  // Robust floor: for a white spectrum |F|^2 is exponential, mean = median / ln 2.
  const double floor = *mid / std::log(2.0);
  if (floor > 0.0) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double excess = std::max(0.0, power[i] - floor);
      spec[i] *= std::sqrt(floor / (floor + strength * excess));
    }
  }
  fp.plane = fft.inverse(spec);
  fp.post_flags.emplace_back("wiener_fft");
  return fp;
}

Plane fingerprint_term(const Plane& k, const Image& img) {
  if (k.height != img.height || k.width != img.width)
    throw Error(Errc::dimension_mismatch, "fingerprint and image dims differ");
  Plane y = working_luma(img);
  for (std::size_t i = 0; i < y.size(); ++i) y.values[i] *= k.values[i];
  return y;
}

namespace {

FingerprintAccumulator single_contribution(const Image& img, const EstimateOptions& opts) {
  FingerprintAccumulator acc(img.height, img.width);
  acc.skip_saturated = opts.skip_saturated;
  accumulate(acc, img, residual(img, opts.denoise));
  return acc;
}

// Binary-counter pairwise reduction: equal-sized partials merge eagerly.
class TreeReducer {
 public:
  void push(FingerprintAccumulator acc) {
    stack_.push_back({std::move(acc), 1});
    while (stack_.size() >= 2 && stack_[stack_.size() - 1].weight == stack_[stack_.size() - 2].weight) {
      auto right = std::move(stack_.back());
      stack_.pop_back();
      auto& left = stack_.back();
      left.acc = merge(std::move(left.acc), right.acc);
      left.weight *= 2;
    }
  }

  FingerprintAccumulator finish() {
    if (stack_.empty()) throw Error(Errc::empty_input, "no images to accumulate");
    while (stack_.size() > 1) {
      auto right = std::move(stack_.back());
      stack_.pop_back();
      stack_.back().acc = merge(std::move(stack_.back().acc), right.acc);
    }
    return std::move(stack_.back().acc);
  }

 private:
  struct Node {
    FingerprintAccumulator acc;
    std::size_t weight;
  };
  std::vector<Node> stack_;
};

}  // namespace

Fingerprint estimate_fingerprint(std::size_t count, const std::function<Image(std::size_t)>& load,
                                 const EstimateOptions& opts) {
  opts.denoise.validate();
  if (count == 0) throw Error(Errc::empty_input, "estimate_fingerprint: no reference images");
  const std::size_t batch = std::max<unsigned>(1, opts.threads);
  TreeReducer reducer;
  std::size_t h = 0, w = 0;
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t end = std::min(count, start + batch);
    std::vector<FingerprintAccumulator> parts;
    if (batch == 1) {
      parts.push_back(single_contribution(load(start), opts));
    } else {
      std::vector<std::future<FingerprintAccumulator>> jobs;
      for (std::size_t i = start; i < end; ++i)
        jobs.push_back(std::async(std::launch::async,
                                  [&, i] { return single_contribution(load(i), opts); }));
      for (auto& j : jobs) parts.push_back(j.get());
    }
    for (auto& p : parts) {
      if (h == 0) {
        h = p.numerator.height;
        w = p.numerator.width;
      } else if (p.numerator.height != h || p.numerator.width != w) {
        throw Error(Errc::dimension_mismatch, "reference images have differing dims");
      }
      reducer.push(std::move(p));
    }
  }
  Fingerprint fp = finalize(reducer.finish(), opts.eps);
  fp.denoise = opts.denoise.describe();
  return fp;
}

Fingerprint estimate_fingerprint(const std::vector<Image>& images, const EstimateOptions& opts) {
  return estimate_fingerprint(images.size(), [&](std::size_t i) { return images[i]; }, opts);
}

std::string fingerprint_header(const Fingerprint& fp) {
  std::ostringstream os;
  os.precision(17);
  os << "height=" << fp.plane.height << '\n' << "width=" << fp.plane.width << '\n';
  os << "flags=";
  for (std::size_t i = 0; i < fp.post_flags.size(); ++i) os << (i ? "," : "") << fp.post_flags[i];
  os << '\n' << "eps=" << fp.eps << '\n';
  os << "denoise=" << fp.denoise << '\n';
  os << "luma=bt601\n";
  os << "images=" << fp.provenance.size() << '\n';
  for (const auto& p : fp.provenance) os << "provenance=" << p << '\n';
  return os.str();
}

void save_fingerprint(const Fingerprint& fp, const fs::path& path) {
  save_plane(fp.plane, path);
  fs::path hdr = path;
  hdr += ".hdr";
  write_file_atomic(hdr, fingerprint_header(fp));
}

Fingerprint load_fingerprint(const fs::path& path) {
  Fingerprint fp;
  fp.plane = load_plane(path);
  fs::path hdr = path;
  hdr += ".hdr";
  std::ifstream in(hdr);
  if (!in) return fp;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto key = line.substr(0, eq);
    const auto val = line.substr(eq + 1);
    if (key == "flags") {
      std::stringstream ss(val);
      std::string f;
      while (std::getline(ss, f, ','))
        if (!f.empty()) fp.post_flags.push_back(f);
    } else if (key == "eps") {
      fp.eps = std::stod(val);
    } else if (key == "denoise") {
      fp.denoise = val;
    } else if (key == "provenance") {
      fp.provenance.push_back(val);
    } else if ((key == "height" && std::stoul(val) != fp.plane.height) ||
               (key == "width" && std::stoul(val) != fp.plane.width)) {
      throw Error(Errc::malformed_header, hdr.string() + ": dims disagree with tensor");
    }
  }
  return fp;
}

}  // namespace prnukit
