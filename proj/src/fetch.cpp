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

#include "spikets/fetch.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>
#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <httplib.h>

#include "spikets/errors.hpp"
#include "util.hpp"

namespace fs = std::filesystem;

namespace spikets {

namespace {

constexpr const char* kStampName = "checksum.sha256";

class CacheLock {
 public:
  explicit CacheLock(const fs::path& dir) {
    const auto path = (dir / ".lock").string();
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw DataError("cannot open cache lock '" + path + "'");
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw DataError("cannot lock '" + path + "'");
    }
  }
  ~CacheLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  int fd_ = -1;
};

std::uint16_t rd16(std::string_view s, std::size_t off) {
  if (off + 2 > s.size()) throw DataError("zip: truncated archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off]) |
                                    static_cast<unsigned char>(s[off + 1]) << 8);
}

std::uint32_t rd32(std::string_view s, std::size_t off) {
  return static_cast<std::uint32_t>(rd16(s, off)) |
         static_cast<std::uint32_t>(rd16(s, off + 2)) << 16;
}

std::string inflate_raw(std::string_view in, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw DataError("zip: inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) throw DataError("zip: corrupt deflate stream");
  return out;
}

using Stamp = std::vector<std::pair<std::string, std::string>>;  // file, sha

void write_stamp(const fs::path& dir, const Stamp& stamp) {
  std::ostringstream os;
  for (const auto& [file, sha] : stamp) os << sha << "  " << file << '\n';
  util::write_file_atomic((dir / kStampName).string(), os.str());
}

std::optional<Stamp> read_stamp(const fs::path& dir) {
  const auto path = dir / kStampName;
  if (!fs::exists(path)) return std::nullopt;
  std::istringstream is(util::read_file(path.string()));
  Stamp stamp;
  std::string sha, file;
  while (is >> sha >> file) stamp.emplace_back(file, sha);
  if (stamp.empty()) throw ChecksumError("empty checksum stamp '" + path.string() + "'");
  return stamp;
}

void verify_stamp(const fs::path& dir, const Stamp& stamp) {
  for (const auto& [file, sha] : stamp) {
    const auto path = dir / file;
    if (!fs::exists(path)) throw ChecksumError("cached file missing: " + path.string());
    const auto actual = sha256_file(path.string());
    if (actual != sha) {
      throw ChecksumError("checksum mismatch for cached " + path.string() + ": expected " + sha +
                          ", got " + actual + " (delete the directory to re-fetch)");
    }
  }
}

std::string http_get(const std::string& url, int timeout_seconds) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DataError("bad URL '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client cli(origin);
  cli.set_follow_location(true);
  cli.set_connection_timeout(timeout_seconds);
  cli.set_read_timeout(timeout_seconds);
  auto res = cli.Get(path);
  if (!res) {
    throw DataError("download of " + url + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw DataError("download of " + url + " failed: HTTP " + std::to_string(res->status));
  }
  return std::move(res->body);
}

const std::string* find_member(const std::map<std::string, std::string>& members,
                               const std::string& name) {
  for (const auto& [path, body] : members) {
    if (fs::path(path).filename() == name) return &body;
  }
  return nullptr;
}

FetchedFiles files_for(const DatasetManifest& m, const fs::path& dir) {
  FetchedFiles f;
  f.dataset_dir = dir.string();
  f.train_path = (dir / m.train_member).string();
  f.test_path = (dir / m.test_member).string();
  return f;
}

}  // namespace

std::string default_cache_dir() {
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return (fs::path(home) / ".cache" / "spikets").string();
  }
  return ".spikets-cache";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(util::read_file(path)); }

std::map<std::string, std::string> read_zip(std::string_view z) {
  constexpr std::uint32_t kEocd = 0x06054b50, kCentral = 0x02014b50, kLocal = 0x04034b50;
  if (z.size() < 22) throw DataError("zip: file too small");
  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = z.size() > 22 + 65535 ? z.size() - 22 - 65535 : 0;
  for (std::size_t p = z.size() - 22 + 1; p-- > lowest;) {
    if (rd32(z, p) == kEocd) {
      eocd = p;
      break;
    }
  }
  if (eocd == std::string_view::npos) throw DataError("zip: end of central directory not found");
  const std::size_t entries = rd16(z, eocd + 10);
  std::size_t p = rd32(z, eocd + 16);
  if (entries == 0xffff || p == 0xffffffffu) throw DataError("zip: zip64 archives not supported");

  std::map<std::string, std::string> out;
  for (std::size_t e = 0; e < entries; ++e) {
    if (rd32(z, p) != kCentral) throw DataError("zip: bad central directory entry");
    const std::uint16_t method = rd16(z, p + 10);
    const std::uint32_t crc = rd32(z, p + 16);
    const std::uint32_t csize = rd32(z, p + 20);
    const std::uint32_t usize = rd32(z, p + 24);
    const std::uint16_t name_len = rd16(z, p + 28);
    const std::uint16_t extra_len = rd16(z, p + 30);
    const std::uint16_t comment_len = rd16(z, p + 32);
    const std::uint32_t local = rd32(z, p + 42);
    if (p + 46 + name_len > z.size()) throw DataError("zip: truncated central directory");
    std::string name(z.substr(p + 46, name_len));
    p += 46 + name_len + extra_len + comment_len;
    if (!name.empty() && name.back() == '/') continue;

    if (rd32(z, local) != kLocal) throw DataError("zip: bad local header for " + name);
    const std::size_t data = local + 30 + rd16(z, local + 26) + rd16(z, local + 28);
    if (data + csize > z.size()) throw DataError("zip: truncated member " + name);
    const auto raw = z.substr(data, csize);
    std::string body;
    if (method == 0) {
      body.assign(raw);
    } else if (method == 8) {
      body = inflate_raw(raw, usize);
    } else {
      throw DataError("zip: unsupported compression method " + std::to_string(method));
    }
    const auto actual = crc32(0L, reinterpret_cast<const Bytef*>(body.data()),
                              static_cast<uInt>(body.size()));
    if (actual != crc) throw DataError("zip: CRC mismatch in " + name);
    out.emplace(std::move(name), std::move(body));
  }
  return out;
}

FetchedFiles fetch_dataset(const DatasetManifest& m, const FetchOptions& opts) {
  const fs::path dir = fs::path(opts.cache_dir.empty() ? default_cache_dir() : opts.cache_dir) / m.name;
  fs::create_directories(dir);
  CacheLock lock(dir);
  auto files = files_for(m, dir);

  if (auto stamp = read_stamp(dir)) {
    verify_stamp(dir, *stamp);
    files.cache_hit = true;
    for (const auto& [file, sha] : *stamp) {
      if (file == m.name + ".zip") files.archive_sha256 = sha;
    }
    return files;
  }
  if (!opts.allow_network) {
    throw DataError(m.name + ": not in cache (" + dir.string() + ") and network access is disabled");
  }
  const std::string url = opts.url_override.value_or(m.archive_url);
  const std::string archive = http_get(url, opts.timeout_seconds);
  const std::string sha = sha256_hex(archive);
  if (!m.archive_sha256.empty() && sha != m.archive_sha256) {
    throw ChecksumError(m.name + ": downloaded archive checksum " + sha + " != expected " +
                        m.archive_sha256);
  }
  const auto members = read_zip(archive);
  const auto* train = find_member(members, m.train_member);
  const auto* test = find_member(members, m.test_member);
  if (!train || !test) {
    throw DataError(m.name + ": archive lacks " + m.train_member + " or " + m.test_member);
  }
  const std::string zip_name = m.name + ".zip";
  util::write_file_atomic((dir / zip_name).string(), archive);
  util::write_file_atomic(files.train_path, *train);
  util::write_file_atomic(files.test_path, *test);
  write_stamp(dir, {{zip_name, sha},
                    {m.train_member, sha256_hex(*train)},
                    {m.test_member, sha256_hex(*test)}});
  files.archive_sha256 = sha;
  return files;
}

FetchedFiles import_dataset(const DatasetManifest& m, const std::string& src_dir,
                            const std::string& cache_dir) {
  const fs::path dir = fs::path(cache_dir.empty() ? default_cache_dir() : cache_dir) / m.name;
  fs::create_directories(dir);
  CacheLock lock(dir);
  auto files = files_for(m, dir);
  const auto train = util::read_file((fs::path(src_dir) / m.train_member).string());
  const auto test = util::read_file((fs::path(src_dir) / m.test_member).string());
  util::write_file_atomic(files.train_path, train);
  util::write_file_atomic(files.test_path, test);
  write_stamp(dir, {{m.train_member, sha256_hex(train)}, {m.test_member, sha256_hex(test)}});
  return files;
}

}  // namespace spikets
