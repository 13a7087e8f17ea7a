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

#ifndef SRT_EMBEDDING_H_
#define SRT_EMBEDDING_H_

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srt {

enum class EmbeddingKind { kDeterministicNgram, kRemote };

// Maps text to a fixed-size vector. Non-empty text embeds to a unit vector
// and empty text to the zero vector. Implementations must be safe to call
// concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual int dim() const = 0;
  virtual EmbeddingKind kind() const = 0;
  virtual std::vector<double> Embed(std::string_view text) const = 0;
};

// Signed feature hashing of character trigrams over the normalized text,
// padded with one space on each side, then L2-normalized. Text that
// normalizes to nothing embeds to the zero vector.
class NgramEmbedder final : public EmbeddingProvider {
 public:
  explicit NgramEmbedder(int dim = 256);

  int dim() const override { return dim_; }
  EmbeddingKind kind() const override { return EmbeddingKind::kDeterministicNgram; }
  std::vector<double> Embed(std::string_view text) const override;

 private:
  int dim_;
};

struct RemoteEmbedderOptions {
  std::string base_url;  // e.g. http://127.0.0.1:8080/v1
  std::string api_key;
  std::string model = "text-embedding";
  int dim = 256;
  std::chrono::milliseconds timeout{30000};
};

// Calls an OpenAI-style embeddings endpoint (POST {base_url}/embeddings).
// Failures of any kind surface as kRemoteUnavailable.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(RemoteEmbedderOptions options);

  int dim() const override { return options_.dim; }
  EmbeddingKind kind() const override { return EmbeddingKind::kRemote; }
  std::vector<double> Embed(std::string_view text) const override;

 private:
  RemoteEmbedderOptions options_;
};

// Cosine similarity; 0 when either vector is zero. Throws kInvalidArgument on
// a size mismatch.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

}  // namespace srt

#endif  // SRT_EMBEDDING_H_
