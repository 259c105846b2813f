#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace idelex {

/// Flat "key = value" configuration with '#' comments. Keys use underscores
/// and must belong to known_keys(); anything else is a ValidationError.
class RunConfig {
 public:
  static RunConfig read(std::istream& in);
  static RunConfig load(const std::filesystem::path& path);

  static const std::set<std::string>& known_keys();

  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace idelex
