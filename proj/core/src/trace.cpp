#include "adara/trace.hpp"

#include <fmt/format.h>

#include <iterator>

namespace adara {

namespace {

using Buf = fmt::memory_buffer;

void head(Buf& b, SimTime now, NodeId node, std::string_view event, std::string_view kind) {
  fmt::format_to(std::back_inserter(b), "{:.9f}\t{}\t{}\t{}", now, raw(node), event, kind);
}

void ids(Buf& b, std::string_view key, std::span<const NodeId> list) {
  fmt::format_to(std::back_inserter(b), "\t{}=", key);
  if (list.empty()) {
    b.push_back('-');
    return;
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) b.push_back(',');
    fmt::format_to(std::back_inserter(b), "{}", raw(list[i]));
  }
}

void dataFields(Buf& b, const DataPacket& p) {
  fmt::format_to(std::back_inserter(b), "\tsrc={}\tdest={}\tseq={}", raw(p.src), raw(p.dest),
                 p.seqNo);
}

void flush(std::ostream* os, Buf& b) {
  b.push_back('\n');
  os->write(b.data(), static_cast<std::streamsize>(b.size()));
}

struct SignalFields {
  Buf& b;
  void operator()(const Rreq& p) const {
    fmt::format_to(std::back_inserter(b), "\trid={}\torigin={}\toseq={}\tdest={}\tdseq={}\tho={}",
                   p.rid, raw(p.origin), p.originSeq, raw(p.dest), p.destSeq, p.hopsToOrigin);
  }
  void operator()(const Rrep& p) const {
    fmt::format_to(std::back_inserter(b), "\tdest={}\tdseq={}\thd={}", raw(p.dest), p.destSeq,
                   p.hopsToDest);
    ids(b, "ldn", p.ldn);
    if (p.requester) {
      fmt::format_to(std::back_inserter(b), "\trequester={}", raw(*p.requester));
    } else {
      fmt::format_to(std::back_inserter(b), "\trequester=-");
    }
  }
  void operator()(const Rerr& p) const {
    fmt::format_to(std::back_inserter(b), "\tlua=");
    bool first = true;
    for (const auto& u : p.unreachable()) {
      if (!first) b.push_back(',');
      first = false;
      fmt::format_to(std::back_inserter(b), "{}:{}", raw(u.dest), u.lastSeq);
    }
  }
  void operator()(const Hello&) const {}
};

}  // namespace

void TraceWriter::transmit(SimTime now, NodeId node, const SignalingPacket& pkt,
                           std::span<const NodeId> audience, SimTime arrival) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "tx", kindName(kindOf(pkt)));
  std::visit(SignalFields{b}, pkt);
  fmt::format_to(std::back_inserter(b), "\thsn={}\tbytes={}", hsnOf(pkt).value, wireSize(pkt));
  if (audience.empty()) {
    fmt::format_to(std::back_inserter(b), "\tto=*");
  } else {
    ids(b, "to", audience);
  }
  fmt::format_to(std::back_inserter(b), "\tat={:.9f}", arrival);
  flush(os_, b);
}

void TraceWriter::transmit(SimTime now, NodeId node, const DataPacket& pkt, NodeId nextHop,
                           SimTime arrival) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "tx", "DATA");
  dataFields(b, pkt);
  fmt::format_to(std::back_inserter(b), "\tnext={}\tttl={}\tbytes={}\tat={:.9f}", raw(nextHop),
                 pkt.ttl, wireSize(pkt), arrival);
  flush(os_, b);
}

void TraceWriter::send(SimTime now, NodeId node, const DataPacket& pkt) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "send", "DATA");
  dataFields(b, pkt);
  flush(os_, b);
}

void TraceWriter::receive(SimTime now, NodeId node, const DataPacket& pkt) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "recv", "DATA");
  dataFields(b, pkt);
  fmt::format_to(std::back_inserter(b), "\tcreated={:.9f}", pkt.createdAt);
  flush(os_, b);
}

void TraceWriter::drop(SimTime now, NodeId node, const DataPacket& pkt, DropReason reason) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "drop", "DATA");
  dataFields(b, pkt);
  fmt::format_to(std::back_inserter(b), "\treason={}", dropReasonName(reason));
  flush(os_, b);
}

void TraceWriter::linkFail(SimTime now, NodeId node, const DataPacket& pkt, NodeId nextHop) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "linkfail", "DATA");
  dataFields(b, pkt);
  fmt::format_to(std::back_inserter(b), "\tnext={}", raw(nextHop));
  flush(os_, b);
}

void TraceWriter::linkDown(SimTime now, NodeId node, NodeId neighbor) {
  if (!os_) return;
  Buf b;
  head(b, now, node, "linkdown", "-");
  fmt::format_to(std::back_inserter(b), "\tneighbor={}", raw(neighbor));
  flush(os_, b);
}

void TraceWriter::loop(SimTime now, NodeId dest, std::span<const NodeId> cycle, bool equalSeq) {
  if (!os_) return;
  Buf b;
  head(b, now, dest, "loop", "-");
  fmt::format_to(std::back_inserter(b), "\tdest={}", raw(dest));
  ids(b, "cycle", cycle);
  fmt::format_to(std::back_inserter(b), "\tequal_seq={}", equalSeq ? 1 : 0);
  flush(os_, b);
}

}  // namespace adara
