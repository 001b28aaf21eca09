#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fpslab/diagnostics.hpp"
#include "fpslab/errors.hpp"
#include "fpslab/fpstate.hpp"
#include "fpslab/softening.hpp"
#include "fpslab/spectrum.hpp"

namespace fpslab {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat key=value configuration; sections via dotted prefixes.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse(std::istream& is);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;  // throws ConfigError
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  void set(const std::string& key, const std::string& value);

  // FNV-1a over the sorted key=value lines; stable under key reordering.
  std::string canonical_hash() const;

  ModelParams model() const;
  SlabConfig slab() const;
  std::shared_ptr<SofteningFunction> softening() const;  // null for kind=none
  double cutoff() const;
  DiagnosticOptions diagnostics() const;
  std::uint64_t seed() const;
  std::string output_dir() const;  // FPSLAB_OUTPUT_DIR overrides

  void validate() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// CSV with "# key=value" comment headers (config hash + tool version first);
// bodies are deterministic, no timestamps.
void write_csv(const std::string& path, const std::vector<std::string>& header_comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

// JSON mirror of the same content with explicit field names.
void write_json(const std::string& path, const std::vector<std::string>& header_comments,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);

}  // namespace fpslab
