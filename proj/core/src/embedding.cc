// Copyright 2026 The SRT Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "srt/embedding.h"

#include <algorithm>
#include <cmath>

#include "http_util.h"
#include "json.hpp"
#include "srt/error.h"
#include "srt/text.h"

namespace srt {
namespace {

// splitmix64 finalizer; spreads FNV output over all 64 bits.
uint64_t Mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

void NormalizeInPlace(std::vector<double>& v) {
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (norm2 == 0.0) return;
  const double norm = std::sqrt(norm2);
  for (double& x : v) x /= norm;
}

}  // namespace

NgramEmbedder::NgramEmbedder(int dim) : dim_(dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
}

std::vector<double> NgramEmbedder::Embed(std::string_view text) const {
  std::vector<double> v(static_cast<std::size_t>(dim_), 0.0);
  const std::string normalized = NormalizeText(text);
  if (normalized.empty()) return v;

  const std::u32string cps = DecodeUtf8(" " + normalized + " ");
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    const uint64_t h = Mix64(Fnv1a64(EncodeUtf8(cps.substr(i, 3))));
    const std::size_t bucket = static_cast<std::size_t>(h % static_cast<uint64_t>(dim_));
    v[bucket] += (h >> 63) ? -1.0 : 1.0;
  }
  NormalizeInPlace(v);
  return v;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderOptions options)
    : options_(std::move(options)) {
  if (options_.dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
  }
}

std::vector<double> RemoteEmbedder::Embed(std::string_view text) const {
  if (text.empty()) return std::vector<double>(static_cast<std::size_t>(options_.dim), 0.0);
  if (options_.base_url.empty()) {
    throw Error(ErrorCode::kRemoteUnavailable, "no embedding endpoint configured");
  }
  const nlohmann::json request = {{"model", options_.model},
                                  {"input", std::string(text)},
                                  {"dimensions", options_.dim}};
  const internal::HttpResponse response = internal::PostJson(
      options_.base_url, "/embeddings", request.dump(), options_.api_key,
      options_.timeout);
  if (response.status == 0) {
    throw Error(ErrorCode::kRemoteUnavailable, response.error);
  }
  if (response.status < 200 || response.status >= 300) {
    throw Error(ErrorCode::kRemoteUnavailable,
                "embedding endpoint returned HTTP " + std::to_string(response.status));
  }
  std::vector<double> v;
  try {
    const auto body = nlohmann::json::parse(response.body);
    v = body.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kRemoteUnavailable,
                std::string("unreadable embedding response: ") + e.what());
  }
  if (static_cast<int>(v.size()) != options_.dim) {
    throw Error(ErrorCode::kRemoteUnavailable,
                "embedding has " + std::to_string(v.size()) +
                    " components, expected " + std::to_string(options_.dim));
  }
  NormalizeInPlace(v);
  return v;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of vectors with different sizes");
  }
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  // sqrt(aa * bb) rather than sqrt(aa) * sqrt(bb): identical inputs give
  // exactly 1.
  return std::clamp(dot / std::sqrt(aa * bb), -1.0, 1.0);
}

}  // namespace srt
