// Copyright 2026 The spikets Authors
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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "spikets/data.hpp"

namespace spikets {

inline constexpr const char* kCacheEnvVar = "SPIKETS_CACHE_DIR";

// $SPIKETS_CACHE_DIR, else $HOME/.cache/spikets, else ./.spikets-cache.
std::string default_cache_dir();

struct FetchOptions {
  std::string cache_dir;                   // empty: default_cache_dir()
  bool allow_network = true;
  std::optional<std::string> url_override;  // replaces manifest.archive_url
  int timeout_seconds = 120;
};

struct FetchedFiles {
  std::string dataset_dir;  // <cache>/<name>
  std::string train_path;
  std::string test_path;
  bool cache_hit = false;
  std::string archive_sha256;  // empty for imported files
};

// Cache layout: <cache>/<name>/{<name>.zip, <name>_TRAIN.ts, <name>_TEST.ts,
// checksum.sha256}. The stamp lists "<sha256>  <file>" for every cached file
// and is written last, so its presence marks a complete entry. A cached file
// that no longer matches its stamp raises ChecksumError. Holds an exclusive
// lock on <cache>/<name>/.lock for the duration of the call.
FetchedFiles fetch_dataset(const DatasetManifest& m, const FetchOptions& opts = {});

// Copies <src_dir>/<name>_TRAIN.ts and _TEST.ts into the cache (for
// archives obtained out of band) and stamps them.
FetchedFiles import_dataset(const DatasetManifest& m, const std::string& src_dir,
                            const std::string& cache_dir);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

// Minimal zip reader (stored and deflated members, no zip64). Returns
// member name -> contents; CRC-32 is verified.
std::map<std::string, std::string> read_zip(std::string_view archive);

}  // namespace spikets
