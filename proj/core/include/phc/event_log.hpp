#ifndef PHC_EVENT_LOG_HPP
#define PHC_EVENT_LOG_HPP

#include <filesystem>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace phc {

/// Insertion-ordered JSON keeps log lines and wire bodies byte-stable.
using Json = nlohmann::ordered_json;

/// Append-only JSON-lines file. One logical operation may append several
/// lines; they are written and flushed as a single batch.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path);

  void append(const Json& event);
  void append_batch(const std::vector<Json>& events);

  const std::filesystem::path& path() const { return path_; }

  /// Parse a whole log. Throws log-corrupt on any undecodable line.
  static std::vector<Json> read_all(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace phc

#endif
