#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "adara/engine.hpp"
#include "adara/messages.hpp"
#include "adara/scenario.hpp"

namespace adara {

struct RunMetrics {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  /// Absent when nothing was sent.
  std::optional<double> pdr;
  /// Mean of (receive time - creation time), buffering included; absent when
  /// nothing was delivered.
  std::optional<double> avgDelay;
  std::array<std::uint64_t, kSignalingKinds> signaling{};
  std::uint64_t signalingBytes = 0;
  std::uint64_t dataTransmissions = 0;
  std::map<DropReason, std::uint64_t> drops;
  std::uint64_t linkFailures = 0;
  std::uint64_t linksDown = 0;
  std::uint64_t loopViolations = 0;

  std::uint64_t count(PacketKind kind) const;
  std::uint64_t totalSignaling() const;
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parsed trace line. Field views point into the line text.
struct TraceRecord {
  SimTime time = 0.0;
  NodeId node{};
  std::string_view event;
  std::string_view kind;
  std::vector<std::pair<std::string_view, std::string_view>> fields;

  std::optional<std::string_view> get(std::string_view key) const;
};

/// Parses one line; throws TraceFormatError tagged with `lineNo`.
TraceRecord parseTraceLine(std::string_view line, std::size_t lineNo);

/// Throws TraceFormatError with the offending line number on malformed input.
RunMetrics computeMetrics(std::istream& trace);
RunMetrics computeMetrics(std::string_view trace);

std::string_view csvHeader();
std::string csvRow(const Scenario& s, const RunMetrics& m);

}  // namespace adara
