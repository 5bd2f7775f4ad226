#include "much/persist.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "much/error.hpp"

namespace much {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("sha256: OpenSSL digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string Manifest::to_json() const {
  json arr = json::array();
  for (const auto& e : artifacts) arr.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  json j{{"format", kManifestFormat}, {"artifacts", std::move(arr)}};
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (j.at("format").get<std::string>() != kManifestFormat) {
      throw DataError("manifest: unsupported format " + j.at("format").dump());
    }
    Manifest m;
    for (const auto& e : j.at("artifacts")) {
      m.artifacts.push_back({e.at("path").get<std::string>(), e.at("sha256").get<std::string>(),
                             e.at("bytes").get<std::size_t>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
}

namespace {

void write_file_atomic(const fs::path& target, std::string_view content) {
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw IoError(target.parent_path().string(), ec.message());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string(), "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(tmp.string(), "write failed");
  }
  fs::rename(tmp, target, ec);
  if (ec) throw IoError(target.string(), ec.message());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Manifest write_artifacts(const fs::path& dir, std::vector<Artifact> artifacts, const WriteHook& hook) {
  std::sort(artifacts.begin(), artifacts.end(),
            [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
  for (std::size_t i = 1; i < artifacts.size(); ++i) {
    if (artifacts[i].path == artifacts[i - 1].path) {
      throw std::invalid_argument("duplicate artifact path " + artifacts[i].path);
    }
  }

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
  write_file_atomic(dir / kIncompleteMarker, "");
  fs::remove(dir / kManifestName, ec);
  if (ec) throw IoError((dir / kManifestName).string(), ec.message());

  Manifest manifest;
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    const auto& a = artifacts[i];
    if (hook) hook(i, a.path);
    write_file_atomic(dir / a.path, a.content);
    manifest.artifacts.push_back({a.path, sha256_hex(a.content), a.content.size()});
  }

  write_file_atomic(dir / kManifestName, manifest.to_json());
  fs::remove(dir / kIncompleteMarker, ec);
  if (ec) throw IoError((dir / kIncompleteMarker).string(), ec.message());
  return manifest;
}

std::optional<Manifest> read_manifest(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir / kIncompleteMarker, ec) || !fs::exists(dir / kManifestName, ec)) return std::nullopt;
  return Manifest::from_json(slurp(dir / kManifestName));
}

std::vector<std::string> verify_manifest(const fs::path& dir, const Manifest& manifest) {
  std::vector<std::string> bad;
  for (const auto& e : manifest.artifacts) {
    std::error_code ec;
    if (!fs::exists(dir / e.path, ec) || sha256_hex(slurp(dir / e.path)) != e.sha256) bad.push_back(e.path);
  }
  return bad;
}

}  // namespace much
