#include "phc/event_log.hpp"

#include <string>

#include "phc/errors.hpp"

namespace phc {

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) {
    throw PhcError(Err::internal_error,
                   "cannot open event log: " + path_.string());
  }
}

void EventLog::append(const Json& event) {
  append_batch({event});
}

void EventLog::append_batch(const std::vector<Json>& events) {
  std::string chunk;
  for (const auto& e : events) {
    chunk += e.dump();
    chunk += '\n';
  }
  out_.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  out_.flush();
  if (!out_) {
    throw PhcError(Err::internal_error, "event log write failed");
  }
}

std::vector<Json> EventLog::read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::vector<Json> events;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json parsed = Json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw PhcError(Err::log_corrupt, path.string() + ": undecodable line " +
                                           std::to_string(lineno));
    }
    events.push_back(std::move(parsed));
  }
  return events;
}

}  // namespace phc
