#include "adara/messages.hpp"

#include <stdexcept>

namespace adara {

namespace {

constexpr std::size_t kHeaderBytes = 8;
constexpr std::size_t kFieldBytes = 4;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Rerr::Rerr(HelloSeq hsn_, std::vector<UnreachableDest> unreachable)
    : hsn(hsn_), unreachable_(std::move(unreachable)) {
  if (unreachable_.empty()) {
    throw std::invalid_argument("RERR requires at least one unreachable destination");
  }
}

std::string_view kindName(PacketKind kind) {
  switch (kind) {
    case PacketKind::Rreq: return "RREQ";
    case PacketKind::Rrep: return "RREP";
    case PacketKind::Rerr: return "RERR";
    case PacketKind::Hello: return "HELLO";
    case PacketKind::Data: return "DATA";
  }
  return "?";
}

std::optional<PacketKind> parseKind(std::string_view name) {
  for (auto k : {PacketKind::Rreq, PacketKind::Rrep, PacketKind::Rerr, PacketKind::Hello,
                 PacketKind::Data}) {
    if (kindName(k) == name) return k;
  }
  return std::nullopt;
}

PacketKind kindOf(const SignalingPacket& pkt) {
  return std::visit(Overloaded{[](const Rreq&) { return PacketKind::Rreq; },
                               [](const Rrep&) { return PacketKind::Rrep; },
                               [](const Rerr&) { return PacketKind::Rerr; },
                               [](const Hello&) { return PacketKind::Hello; }},
                    pkt);
}

HelloSeq hsnOf(const SignalingPacket& pkt) {
  return std::visit([](const auto& p) { return p.hsn; }, pkt);
}

std::size_t wireSize(const Rreq&) { return kHeaderBytes + 7 * kFieldBytes; }

std::size_t wireSize(const Rrep& pkt) {
  std::size_t fields = 4 + pkt.ldn.size() + (pkt.requester ? 1 : 0);
  return kHeaderBytes + fields * kFieldBytes;
}

std::size_t wireSize(const Rerr& pkt) {
  return kHeaderBytes + kFieldBytes + 2 * kFieldBytes * pkt.unreachable().size();
}

std::size_t wireSize(const Hello&) { return kHeaderBytes + kFieldBytes; }

std::size_t wireSize(const DataPacket& pkt) { return kHeaderBytes + pkt.sizeBytes; }

std::size_t wireSize(const SignalingPacket& pkt) {
  return std::visit([](const auto& p) { return wireSize(p); }, pkt);
}

}  // namespace adara
