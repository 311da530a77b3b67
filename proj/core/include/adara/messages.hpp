#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "adara/types.hpp"

namespace adara {

/// Route request. Flooded by the origin; forwarders bump hopsToOrigin.
struct Rreq {
  RequestId rid;
  NodeId origin;
  SeqNum originSeq;
  NodeId dest;
  SeqNum destSeq;  ///< Most recent sequence number the origin knows for dest.
  HopCount hopsToOrigin;
  HelloSeq hsn;
};

/// Route reply. In ADARA it is broadcast and scoped by the designated-neighbor
/// list; the AODV reference engine unicasts it back toward `requester`.
struct Rrep {
  NodeId dest;
  SeqNum destSeq;
  HopCount hopsToDest;
  std::vector<NodeId> ldn;
  HelloSeq hsn;
  std::optional<NodeId> requester = std::nullopt;
};

struct UnreachableDest {
  NodeId dest;
  SeqNum lastSeq;
  friend bool operator==(const UnreachableDest&, const UnreachableDest&) = default;
};

/// Route error. The unreachable list is never empty.
class Rerr {
 public:
  /// Throws std::invalid_argument when `unreachable` is empty.
  Rerr(HelloSeq hsn, std::vector<UnreachableDest> unreachable);

  HelloSeq hsn;
  const std::vector<UnreachableDest>& unreachable() const { return unreachable_; }

 private:
  std::vector<UnreachableDest> unreachable_;
};

struct Hello {
  HelloSeq hsn;
};

inline constexpr std::uint32_t kDataPayloadBytes = 512;
inline constexpr std::uint32_t kDefaultDataTtl = 64;

struct DataPacket {
  NodeId src;
  NodeId dest;
  std::uint32_t seqNo;
  SimTime createdAt;
  std::uint32_t sizeBytes = kDataPayloadBytes;
  std::uint32_t ttl = kDefaultDataTtl;
};

using SignalingPacket = std::variant<Rreq, Rrep, Rerr, Hello>;

enum class PacketKind { Rreq, Rrep, Rerr, Hello, Data };

inline constexpr std::size_t kSignalingKinds = 4;

std::string_view kindName(PacketKind kind);
std::optional<PacketKind> parseKind(std::string_view name);

PacketKind kindOf(const SignalingPacket& pkt);
HelloSeq hsnOf(const SignalingPacket& pkt);

/// Overhead accounting model: 8-byte header plus 4 bytes per node id,
/// sequence number, or counter; RERR entries are (id, seq) pairs.
std::size_t wireSize(const Rreq& pkt);
std::size_t wireSize(const Rrep& pkt);
std::size_t wireSize(const Rerr& pkt);
std::size_t wireSize(const Hello& pkt);
std::size_t wireSize(const DataPacket& pkt);
std::size_t wireSize(const SignalingPacket& pkt);

}  // namespace adara
