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


#include "imsnn/dataio.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "imsnn/errors.h"
#include "json.hpp"

#ifndef IMSNN_DATASETS_CONFIG_PATH
#define IMSNN_DATASETS_CONFIG_PATH "config/datasets.json"
#endif

namespace imsnn {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<std::size_t> g_downloads{0};

std::uint32_t ReadBigEndian(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

void AppendBigEndian(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

[[noreturn]] void ParseFail(std::size_t offset, const std::string& why) {
  throw Error(ErrorKind::kParse,
              "IDX parse error at byte offset " + std::to_string(offset) + ": " + why);
}

struct FileSource {
  std::string remote;
  std::optional<std::string> sha256;
};

struct DatasetSources {
  std::vector<std::string> mirrors;
  std::map<std::string, FileSource> files;  // "<split>-<kind>"
};

DatasetSources LoadSources(const fs::path& path, std::string_view name) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kConfig,
                "cannot open dataset sources file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "malformed dataset sources file " +
                                        path.string() + ": " + e.what());
  }
  const std::string key(name);
  if (!doc.contains(key)) {
    throw Error(ErrorKind::kConfig, "unknown dataset '" + key +
                                        "' (expected mnist or fashion_mnist)");
  }
  DatasetSources src;
  const json& d = doc.at(key);
  try {
    for (const auto& m : d.at("mirrors")) src.mirrors.push_back(m.get<std::string>());
    for (const auto& [file_key, f] : d.at("files").items()) {
      FileSource fsrc;
      fsrc.remote = f.at("remote").get<std::string>();
      if (f.contains("sha256") && !f.at("sha256").is_null()) {
        fsrc.sha256 = f.at("sha256").get<std::string>();
      }
      src.files[file_key] = fsrc;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "malformed entry for dataset '" + key +
                                        "': " + e.what());
  }
  return src;
}

std::vector<std::uint8_t> HttpGet(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kNetwork, "bad mirror URL " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(20);
  client.set_read_timeout(120);
  auto res = client.Get(path);
  if (!res) {
    throw Error(ErrorKind::kNetwork,
                "GET " + url + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorKind::kNetwork,
                "GET " + url + " returned HTTP " + std::to_string(res->status));
  }
  return {res->body.begin(), res->body.end()};
}

// Returns the decompressed payload of a verified cache file, downloading it
// if needed.
std::vector<std::uint8_t> FetchVerified(const fs::path& cache_path,
                                        const DatasetSources& sources,
                                        const std::string& file_key,
                                        const DataOptions& options) {
  const auto it = sources.files.find(file_key);
  if (it == sources.files.end()) {
    throw Error(ErrorKind::kConfig, "no source entry for " + file_key);
  }
  const FileSource& src = it->second;

  auto verify = [&](std::span<const std::uint8_t> raw) {
    if (!src.sha256) return true;
    return Sha256Hex(raw) == *src.sha256;
  };

  if (fs::exists(cache_path)) {
    auto raw = Gunzip(ReadFileBytes(cache_path));
    if (verify(raw)) return raw;
    if (!options.refresh) {
      throw Error(ErrorKind::kChecksum,
                  "checksum mismatch for cached file " + cache_path.string() +
                      " (delete it or pass refresh to re-download)");
    }
    fs::remove(cache_path);
  }

  if (options.offline) {
    throw Error(ErrorKind::kCacheMiss,
                "offline and " + cache_path.string() + " is not cached");
  }
  std::string failures;
  for (const std::string& mirror : sources.mirrors) {
    const std::string url = mirror + src.remote;
    try {
      ++g_downloads;
      auto gz = HttpGet(url);
      auto raw = Gunzip(gz);
      if (!verify(raw)) {
        failures += "\n  " + url + ": checksum mismatch";
        continue;
      }
      if (!src.sha256) {
        std::cerr << "warning: no checksum recorded for " << file_key
                  << "; downloaded payload sha256=" << Sha256Hex(raw) << "\n";
      }
      WriteFileAtomic(cache_path, gz);
      return raw;
    } catch (const Error& e) {
      failures += "\n  " + url + ": " + e.what();
    }
  }
  throw Error(ErrorKind::kNetwork,
              "could not download " + src.remote + " from any mirror:" + failures);
}

}  // namespace

std::size_t IdxTensor::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

IdxTensor ParseIdx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) ParseFail(bytes.size(), "truncated header (no magic number)");
  IdxTensor t;
  t.magic = ReadBigEndian(bytes, 0);
  if (t.magic != kIdxMagicImages && t.magic != kIdxMagicLabels) {
    std::ostringstream os;
    os << "bad magic 0x" << std::hex << t.magic << " (expected 0x801 or 0x803)";
    ParseFail(0, os.str());
  }
  const std::size_t ndims = t.magic & 0xff;
  const std::size_t header = 4 + 4 * ndims;
  if (bytes.size() < header) ParseFail(bytes.size(), "truncated header (dimensions)");
  std::uint64_t count = 1;
  for (std::size_t d = 0; d < ndims; ++d) {
    const std::uint32_t dim = ReadBigEndian(bytes, 4 + 4 * d);
    t.dims.push_back(dim);
    if (dim != 0 && count > (std::uint64_t{1} << 40) / dim) {
      ParseFail(4 + 4 * d, "dimension product overflows");
    }
    count *= dim;
  }
  const std::size_t payload = bytes.size() - header;
  if (payload < count) {
    ParseFail(bytes.size(), "truncated payload: expected " + std::to_string(count) +
                                " bytes after the header, found " +
                                std::to_string(payload));
  }
  if (payload > count) {
    ParseFail(header + count, "trailing bytes after the payload");
  }
  t.data.assign(bytes.begin() + header, bytes.end());
  return t;
}

std::vector<std::uint8_t> SerializeIdx(const IdxTensor& tensor) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 * tensor.dims.size() + tensor.data.size());
  AppendBigEndian(out, tensor.magic);
  for (std::uint32_t d : tensor.dims) AppendBigEndian(out, d);
  out.insert(out.end(), tensor.data.begin(), tensor.data.end());
  return out;
}

const char* SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw Error(ErrorKind::kConfig, "unknown split '" + std::string(name) + "'");
}

std::vector<double> Dataset::Image(std::size_t index) const {
  const std::size_t n = static_cast<std::size_t>(pixels_per_image());
  std::vector<double> img(n);
  const std::uint8_t* src = pixels.data() + index * n;
  for (std::size_t i = 0; i < n; ++i) img[i] = src[i] / 255.0;
  return img;
}

Dataset TakeFirst(const Dataset& dataset, std::size_t count) {
  Dataset out = dataset;
  if (count >= dataset.size()) return out;
  out.labels.resize(count);
  out.pixels.resize(count * static_cast<std::size_t>(dataset.pixels_per_image()));
  return out;
}

fs::path DefaultCacheDir() {
  if (const char* env = std::getenv("IMSNN_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "imsnn";
  }
  return fs::path(".imsnn-cache");
}

fs::path DefaultSourcesPath() {
  if (const char* env = std::getenv("IMSNN_DATASETS_CONFIG"); env && *env) return env;
  return IMSNN_DATASETS_CONFIG_PATH;
}

fs::path CachePath(const fs::path& cache_dir, std::string_view dataset,
                   Split split, std::string_view kind) {
  return cache_dir / std::string(dataset) /
         (std::string(SplitName(split)) + "-" + std::string(kind) + ".idx.gz");
}

Dataset LoadDataset(std::string_view name, Split split,
                    const DataOptions& options) {
  if (name != "mnist" && name != "fashion_mnist") {
    throw Error(ErrorKind::kConfig, "unknown dataset '" + std::string(name) +
                                        "' (expected mnist or fashion_mnist)");
  }
  const fs::path cache = options.cache_dir.empty() ? DefaultCacheDir() : options.cache_dir;
  const fs::path sources_path =
      options.sources_path.empty() ? DefaultSourcesPath() : options.sources_path;
  const DatasetSources sources = LoadSources(sources_path, name);
  const std::string prefix = SplitName(split);

  const IdxTensor images = ParseIdx(FetchVerified(
      CachePath(cache, name, split, "images"), sources, prefix + "-images", options));
  const IdxTensor labels = ParseIdx(FetchVerified(
      CachePath(cache, name, split, "labels"), sources, prefix + "-labels", options));
  if (images.magic != kIdxMagicImages || labels.magic != kIdxMagicLabels) {
    throw Error(ErrorKind::kParse, "image/label files have swapped IDX types");
  }
  if (images.dims[0] != labels.dims[0]) {
    throw Error(ErrorKind::kParse, "image count " + std::to_string(images.dims[0]) +
                                       " != label count " + std::to_string(labels.dims[0]));
  }
  Dataset ds;
  ds.name = std::string(name);
  ds.split = split;
  ds.rows = static_cast<int>(images.dims[1]);
  ds.cols = static_cast<int>(images.dims[2]);
  ds.pixels = images.data;
  ds.labels = labels.data;
  for (std::uint8_t l : ds.labels) {
    if (l > 9) throw Error(ErrorKind::kParse, "label outside 0..9");
  }
  if (options.limit) ds = TakeFirst(ds, *options.limit);
  return ds;
}

std::vector<std::uint8_t> Gunzip(std::span<const std::uint8_t> compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) {
    throw Error(ErrorKind::kInternal, "inflateInit2 failed");
  }
  zs.next_in = const_cast<Bytef*>(compressed.data());
  zs.avail_in = static_cast<uInt>(compressed.size());
  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> chunk(1 << 16);
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk.data();
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorKind::kParse, "gzip stream is corrupt at compressed offset " +
                                         std::to_string(zs.total_in));
    }
    out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(ErrorKind::kParse, "gzip stream is truncated");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::vector<std::uint8_t> Gzip(std::span<const std::uint8_t> raw) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::kInternal, "deflateInit2 failed");
  }
  zs.next_in = const_cast<Bytef*>(raw.data());
  zs.avail_in = static_cast<uInt>(raw.size());
  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(raw.size())));
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::kInternal, "deflate failed");
  out.resize(zs.total_out);
  return out;
}

std::string Sha256Hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kInternal, "EVP_Digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileAtomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::kIo, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::kIo, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::size_t DownloadCount() { return g_downloads.load(); }

}  // namespace imsnn
