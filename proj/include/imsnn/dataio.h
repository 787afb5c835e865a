// Copyright 2026 The IMSNN Authors
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


#ifndef IMSNN_DATAIO_H_
#define IMSNN_DATAIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imsnn {

inline constexpr std::uint32_t kIdxMagicLabels = 0x00000801;  // 2049
inline constexpr std::uint32_t kIdxMagicImages = 0x00000803;  // 2051

// Unsigned-byte IDX tensor.
struct IdxTensor {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  std::size_t element_count() const;
};

// Throws Error(kParse) with the byte offset on bad magic, truncated or
// oversized payload, or dimension overflow.
IdxTensor ParseIdx(std::span<const std::uint8_t> bytes);

// Exact inverse of ParseIdx.
std::vector<std::uint8_t> SerializeIdx(const IdxTensor& tensor);

enum class Split { kTrain, kTest };
const char* SplitName(Split split);
Split ParseSplit(std::string_view name);

struct Dataset {
  std::string name;
  Split split = Split::kTrain;
  int rows = 28;
  int cols = 28;
  std::vector<std::uint8_t> pixels;  // count x rows x cols raw bytes
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  int pixels_per_image() const { return rows * cols; }
  // Normalized to [0, 1] as byte / 255.
  std::vector<double> Image(std::size_t index) const;
  int Label(std::size_t index) const { return labels[index]; }
};

// Keeps the first `count` samples.
Dataset TakeFirst(const Dataset& dataset, std::size_t count);

struct DataOptions {
  std::filesystem::path cache_dir;     // empty: $IMSNN_CACHE_DIR or ~/.cache/imsnn
  std::filesystem::path sources_path;  // empty: $IMSNN_DATASETS_CONFIG or the built-in path
  bool offline = false;
  bool refresh = false;  // re-download files that fail verification
  std::optional<std::size_t> limit;
};

std::filesystem::path DefaultCacheDir();
std::filesystem::path DefaultSourcesPath();

// <cache>/<dataset>/<split>-{images,labels}.idx.gz
std::filesystem::path CachePath(const std::filesystem::path& cache_dir,
                                std::string_view dataset, Split split,
                                std::string_view kind);

// Loads mnist or fashion_mnist. Cached files are verified against the
// SHA-256 recorded in the sources file (over the decompressed payload).
// Errors: kCacheMiss when offline and uncached, kNetwork when every mirror
// fails, kChecksum on mismatch (never silently re-downloaded unless
// `refresh`), kParse on malformed payloads.
Dataset LoadDataset(std::string_view name, Split split,
                    const DataOptions& options = {});

// Helpers shared with tests and tools.
std::vector<std::uint8_t> Gunzip(std::span<const std::uint8_t> compressed);
std::vector<std::uint8_t> Gzip(std::span<const std::uint8_t> raw);
std::string Sha256Hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
// Writes to a temporary sibling then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const std::uint8_t> bytes);

// Counts network fetches made by LoadDataset in this process.
std::size_t DownloadCount();

}  // namespace imsnn

#endif  // IMSNN_DATAIO_H_
