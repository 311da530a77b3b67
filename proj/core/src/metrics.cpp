#include "adara/metrics.hpp"

#include <fmt/format.h>

#include <charconv>
#include <sstream>

namespace adara {

std::uint64_t RunMetrics::count(PacketKind kind) const {
  if (kind == PacketKind::Data) return dataTransmissions;
  return signaling[static_cast<std::size_t>(kind)];
}

std::uint64_t RunMetrics::totalSignaling() const {
  std::uint64_t total = 0;
  for (auto c : signaling) total += c;
  return total;
}

TraceFormatError::TraceFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}

std::optional<std::string_view> TraceRecord::get(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

namespace {

template <class T>
bool parseNumber(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool knownEvent(std::string_view e) {
  return e == "tx" || e == "send" || e == "recv" || e == "drop" || e == "linkfail" ||
         e == "linkdown" || e == "loop";
}

}  // namespace

TraceRecord parseTraceLine(std::string_view line, std::size_t lineNo) {
  auto fail = [lineNo](const std::string& why) -> TraceRecord { throw TraceFormatError(lineNo, why); };
  TraceRecord rec;
  std::vector<std::string_view> cols;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    cols.push_back(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  if (cols.size() < 4) return fail("expected at least 4 tab-separated columns");
  if (!parseNumber(cols[0], rec.time)) return fail("bad time '" + std::string(cols[0]) + "'");
  std::uint32_t node = 0;
  if (!parseNumber(cols[1], node)) return fail("bad node id '" + std::string(cols[1]) + "'");
  rec.node = nodeId(node);
  rec.event = cols[2];
  rec.kind = cols[3];
  if (!knownEvent(rec.event)) return fail("unknown event '" + std::string(rec.event) + "'");
  if (rec.kind != "-" && !parseKind(rec.kind)) {
    return fail("unknown packet kind '" + std::string(rec.kind) + "'");
  }
  for (std::size_t i = 4; i < cols.size(); ++i) {
    const auto eq = cols[i].find('=');
    if (eq == std::string_view::npos || eq == 0) {
      return fail("expected key=value, got '" + std::string(cols[i]) + "'");
    }
    rec.fields.emplace_back(cols[i].substr(0, eq), cols[i].substr(eq + 1));
  }
  return rec;
}

RunMetrics computeMetrics(std::istream& trace) {
  RunMetrics m;
  double delaySum = 0.0;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(trace, line)) {
    ++lineNo;
    if (line.empty()) continue;
    const TraceRecord rec = parseTraceLine(line, lineNo);
    auto need = [&](std::string_view key) {
      auto v = rec.get(key);
      if (!v) throw TraceFormatError(lineNo, "missing field '" + std::string(key) + "'");
      return *v;
    };
    if (rec.event == "tx") {
      const auto kind = parseKind(rec.kind);
      if (!kind) throw TraceFormatError(lineNo, "tx line without a packet kind");
      if (*kind == PacketKind::Data) {
        ++m.dataTransmissions;
      } else {
        ++m.signaling[static_cast<std::size_t>(*kind)];
        std::uint64_t bytes = 0;
        if (!parseNumber(need("bytes"), bytes)) throw TraceFormatError(lineNo, "bad bytes field");
        m.signalingBytes += bytes;
      }
    } else if (rec.event == "send") {
      ++m.sent;
    } else if (rec.event == "recv") {
      double created = 0.0;
      if (!parseNumber(need("created"), created)) {
        throw TraceFormatError(lineNo, "bad created field");
      }
      ++m.delivered;
      delaySum += rec.time - created;
    } else if (rec.event == "drop") {
      const auto reason = parseDropReason(need("reason"));
      if (!reason) throw TraceFormatError(lineNo, "unknown drop reason");
      ++m.drops[*reason];
    } else if (rec.event == "linkfail") {
      ++m.linkFailures;
    } else if (rec.event == "linkdown") {
      ++m.linksDown;
    } else if (rec.event == "loop") {
      ++m.loopViolations;
    }
  }
  if (m.sent > 0) m.pdr = static_cast<double>(m.delivered) / static_cast<double>(m.sent);
  if (m.delivered > 0) m.avgDelay = delaySum / static_cast<double>(m.delivered);
  return m;
}

RunMetrics computeMetrics(std::string_view trace) {
  std::istringstream in{std::string(trace)};
  return computeMetrics(in);
}

std::string_view csvHeader() {
  return "engine,seed,node_count,v_max,pause,flows,pdr,avg_delay_s,rreq,rrep,rerr,hello,"
         "total_signaling,bytes";
}

std::string csvRow(const Scenario& s, const RunMetrics& m) {
  const std::string pdr = m.pdr ? fmt::format("{:.6f}", *m.pdr) : "";
  const std::string delay = m.avgDelay ? fmt::format("{:.6f}", *m.avgDelay) : "";
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}", engineName(s.engine), s.seed,
                     s.nodeCount, s.vMax, s.pause, s.flows, pdr, delay,
                     m.count(PacketKind::Rreq), m.count(PacketKind::Rrep),
                     m.count(PacketKind::Rerr), m.count(PacketKind::Hello), m.totalSignaling(),
                     m.signalingBytes);
}

}  // namespace adara
