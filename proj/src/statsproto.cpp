#include "hurryup/statsproto.hpp"

#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdio>

namespace hurryup::proto {

namespace {

bool parse_u63(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::string encode_event(const StatsEvent& e) {
  if (e.thread_id < 0 || e.timestamp_ms < 0)
    throw std::invalid_argument("stats event fields must be non-negative");
  if (e.request_id.empty() ||
      e.request_id.find_first_of(";\n") != std::string::npos)
    throw std::invalid_argument("request id must be non-empty and free of ';' and newlines");
  std::string out;
  out.reserve(e.request_id.size() + 24);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(e.thread_id));
  out += buf;
  out += ';';
  out += e.request_id;
  out += ';';
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(e.timestamp_ms));
  out += buf;
  out += '\n';
  return out;
}

std::optional<StatsEvent> try_parse_line(std::string_view line, std::string* error) {
  auto fail = [&](const char* why) -> std::optional<StatsEvent> {
    if (error) *error = why;
    return std::nullopt;
  };
  if (line.ends_with('\n')) line.remove_suffix(1);
  if (line.ends_with('\r')) line.remove_suffix(1);

  auto first = line.find(';');
  if (first == std::string_view::npos) return fail("missing field separator");
  auto second = line.find(';', first + 1);
  if (second == std::string_view::npos) return fail("missing field separator");
  if (line.find(';', second + 1) != std::string_view::npos)
    return fail("too many field separators");

  StatsEvent e;
  if (!parse_u63(line.substr(0, first), e.thread_id))
    return fail("thread id is not a non-negative integer");
  e.request_id = std::string(line.substr(first + 1, second - first - 1));
  if (e.request_id.empty()) return fail("empty request id");
  if (!parse_u63(line.substr(second + 1), e.timestamp_ms))
    return fail("timestamp is not a non-negative integer");
  return e;
}

StatsEvent parse_line(std::string_view line) {
  std::string why;
  if (auto e = try_parse_line(line, &why)) return *e;
  throw MalformedLine(why + ": '" + std::string(line) + "'");
}

LineChannel LineChannel::from_fd(int fd) {
  return LineChannel([fd](char* buf, std::size_t len) -> std::size_t {
    for (;;) {
      ssize_t n = ::read(fd, buf, len);
      if (n >= 0) return static_cast<std::size_t>(n);
      if (errno != EINTR) throw Error("read failed on stats channel");
    }
  });
}

std::vector<std::string> LineChannel::read_lines() {
  for (;;) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (;;) {
      auto nl = buf_.find('\n', start);
      if (nl == std::string::npos) break;
      lines.emplace_back(buf_.substr(start, nl - start + 1));
      start = nl + 1;
    }
    if (start > 0) buf_.erase(0, start);
    if (!lines.empty()) return lines;

    if (eof_) {
      if (!buf_.empty()) {
        // Producer exited mid-line; hand the tail over as a final line.
        lines.emplace_back(std::move(buf_));
        buf_.clear();
        return lines;
      }
      throw ChannelClosed("stats channel closed");
    }

    char chunk[4096];
    std::size_t n = read_(chunk, sizeof chunk);
    if (n == 0)
      eof_ = true;
    else
      buf_.append(chunk, n);
  }
}

std::vector<StatsEvent> read_available(
    LineChannel& ch,
    const std::function<void(std::string_view, std::string_view)>& on_malformed) {
  std::vector<StatsEvent> events;
  auto lines = ch.read_lines();
  events.reserve(lines.size());
  for (const auto& line : lines) {
    std::string why;
    if (auto e = try_parse_line(line, &why))
      events.push_back(std::move(*e));
    else if (on_malformed)
      on_malformed(line, why);
  }
  return events;
}

}  // namespace hurryup::proto
