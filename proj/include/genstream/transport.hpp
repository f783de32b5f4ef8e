#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "genstream/stream.hpp"
#include "genstream/wire.hpp"

namespace genstream {

struct SessionConfig {
  // sender side
  std::string dest_host = "127.0.0.1";
  std::uint16_t dest_port = 0;
  // receiver side
  std::string bind_host = "0.0.0.0";
  std::uint16_t bind_port = 0;  // 0 picks an ephemeral port

  SchemeParams params;
  std::uint32_t block_bytes = 1400;
  std::uint64_t file_bytes = 0;  // receiver: transfer size (layout must match the sender's)
  std::string file_path;         // sender input / receiver output; may be empty for byte APIs

  double nominal_rate_Bps = 1000000.0;  // datagram bytes per second on the wire
  double drop_rate = 0.0;               // sender-side loss shim, deterministic
  std::uint64_t drop_seed = 1;
  std::uint64_t coding_seed = 1;

  double wall_cap_s = 0.0;      // sender give-up deadline; 0 derives one from the
                                // eps=0.5 delivery prediction, times ten
  double recv_deadline_s = 60.0;
};

struct SenderReport {
  std::uint64_t packets_sent = 0;   // coded packets generated (shim drops included)
  std::uint64_t datagrams_put = 0;  // actually handed to the socket
  std::uint64_t shim_dropped = 0;
  std::uint64_t bytes_sent = 0;     // paced bytes, shim drops included
  double elapsed_s = 0;
  bool completion_seen = false;
};

struct ReceiverReport {
  std::uint64_t datagrams_received = 0;
  std::uint64_t packets_received = 0;  // parsed, well-formed coded packets
  std::uint64_t rejected = 0;          // malformed or inconsistent datagrams, dropped
  std::uint64_t superfluous = 0;       // duplicate/dependent receptions
  std::uint64_t bytes_written = 0;
  double elapsed_s = 0;  // first coded packet to completion
  bool file_ok = false;
};

// Streams the file round-robin at the nominal rate until the receiver's
// completion datagram arrives on the same socket. Throws Errc::socket_error
// and Errc::no_completion.
SenderReport send_bytes(const SessionConfig& cfg, std::span<const std::uint8_t> data);
SenderReport send_file(const SessionConfig& cfg);

// Binds in the constructor so callers can learn the port before the sender
// starts; run() ingests datagrams until the file decodes, then answers with
// three completion datagrams.
class Receiver {
public:
  explicit Receiver(const SessionConfig& cfg);
  ~Receiver();
  Receiver(const Receiver&) = delete;
  Receiver& operator=(const Receiver&) = delete;

  std::uint16_t port() const { return port_; }
  ReceiverReport run();  // throws Errc::timed_out when the deadline passes

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
  SessionConfig cfg_;
  FileLayout layout_;
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::vector<std::uint8_t> bytes_;
};

ReceiverReport recv_file(const SessionConfig& cfg);

void print_report(std::ostream& os, const SenderReport& r);
void print_report(std::ostream& os, const ReceiverReport& r);

}  // namespace genstream
