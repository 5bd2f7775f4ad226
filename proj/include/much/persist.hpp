#pragma once

// Atomic, content-addressed output directories.
//
// Layout after a completed write:
//   <dir>/manifest.json   {"format": "much-manifest/1",
//                          "artifacts": [{"path", "sha256", "bytes"}, ...]}
//   <dir>/<artifact paths>
// While a write is in progress <dir>/.incomplete exists and manifest.json
// does not. A directory without a manifest must not be trusted.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace much {

std::string sha256_hex(std::string_view data);

inline constexpr std::string_view kManifestFormat = "much-manifest/1";
inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr std::string_view kIncompleteMarker = ".incomplete";

struct Artifact {
  std::string path;  // relative, '/'-separated
  std::string content;
};

struct ManifestEntry {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> artifacts;  // sorted by path
  bool operator==(const Manifest&) const = default;

  std::string to_json() const;
  static Manifest from_json(std::string_view text);
};

// Called before each artifact is written; throwing from it aborts the
// write and leaves the directory marked incomplete. Used by tests.
using WriteHook = std::function<void(std::size_t index, const std::string& path)>;

// Writes every artifact via temp file + rename, then the manifest last.
// Throws IoError naming the offending path.
Manifest write_artifacts(const std::filesystem::path& dir, std::vector<Artifact> artifacts,
                         const WriteHook& hook = {});

// nullopt when the directory has no manifest (absent or incomplete).
std::optional<Manifest> read_manifest(const std::filesystem::path& dir);

// Re-hashes every listed file. Returns the paths that are missing or whose
// content no longer matches.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir, const Manifest& manifest);

}  // namespace much
