#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hurryup/types.hpp"

namespace hurryup::proto {

// One begin/end record on the app-to-mapper stats stream. The request id is
// an opaque byte token: anything goes except `;` and newlines. Whether an
// event is a begin or an end is decided downstream by id recurrence.
struct StatsEvent {
  std::int64_t thread_id = 0;
  std::string request_id;
  std::int64_t timestamp_ms = 0;

  bool operator==(const StatsEvent&) const = default;
};

class MalformedLine : public Error {
 public:
  using Error::Error;
};

class ChannelClosed : public Error {
 public:
  using Error::Error;
};

// Wire format, bit-exact: `TID;RID;TIMESTAMP\n`, TID and TIMESTAMP in
// unsigned base 10. This is the integration contract for driving the mapper
// from a real instrumented server.
std::string encode_event(const StatsEvent& e);

// Tolerates a trailing "\n" or "\r\n"; anything else must be exactly two
// `;`-separated fields around a non-empty request id.
StatsEvent parse_line(std::string_view line);
std::optional<StatsEvent> try_parse_line(std::string_view line, std::string* error = nullptr);

// Incremental line framing over a blocking byte source. read_lines() blocks
// until at least one complete line is buffered, then returns every complete
// buffered line in arrival order; a partial trailing line is kept for the
// next call. End of stream raises ChannelClosed once all data is drained.
class LineChannel {
 public:
  // Blocking reader: fills up to `len` bytes, returns the count, 0 at EOF.
  using ReadFn = std::function<std::size_t(char* buf, std::size_t len)>;

  explicit LineChannel(ReadFn read) : read_(std::move(read)) {}
  static LineChannel from_fd(int fd);

  std::vector<std::string> read_lines();

  bool at_eof() const { return eof_; }
  const std::string& pending_partial() const { return buf_; }

 private:
  ReadFn read_;
  std::string buf_;
  bool eof_ = false;
};

// Parses everything read_lines() returns; malformed lines are skipped and
// reported to `on_malformed` when given.
std::vector<StatsEvent> read_available(
    LineChannel& ch,
    const std::function<void(std::string_view line, std::string_view error)>& on_malformed = {});

}  // namespace hurryup::proto
