#include "genstream/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <ostream>

#include "genstream/analysis.hpp"

namespace genstream {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void raise_errno(const std::string& what) {
  raise(Errc::socket_error, what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_DGRAM;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr)
    raise(Errc::socket_error, "cannot resolve " + host + ": " + gai_strerror(rc));
  sockaddr_in addr{};
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  addr.sin_port = htons(port);
  ::freeaddrinfo(res);
  return addr;
}

int open_udp() {
  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) raise_errno("socket");
  int buf = 1 << 20;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVBUF, &buf, sizeof(buf));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDBUF, &buf, sizeof(buf));
  return fd;
}

// same block arithmetic as segment_file, without the data
FileLayout layout_for(std::uint64_t file_bytes, std::uint32_t block_bytes, std::uint32_t g) {
  if (file_bytes == 0) raise(Errc::config_error, "receiver needs the transfer size");
  FileLayout l;
  l.file_bytes = file_bytes;
  l.block_bytes = block_bytes;
  l.g = g;
  l.N = std::uint32_t((file_bytes + block_bytes - 1) / block_bytes);
  l.n = (l.N + g - 1) / g;
  l.pad_blocks = l.n * g - l.N;
  return l;
}

double derive_wall_cap(const SessionConfig& cfg, std::uint64_t n_generations) {
  SchemeParams worst = cfg.params;
  worst.n = std::uint32_t(n_generations);
  worst.channel.epsilon = 0.5;
  double packets;
  try {
    packets = analysis::expected_T(worst).value;
  } catch (const Error&) {
    return 60.0;
  }
  double datagram = double(cfg.block_bytes) + 16.0;
  double cap = 10.0 * packets * datagram / cfg.nominal_rate_Bps;
  return std::clamp(cap, 1.0, 3600.0);
}

// true when a completion datagram is waiting; consumes everything readable
bool drain_for_completion(int fd) {
  for (;;) {
    std::uint8_t buf[4096];
    ssize_t got = ::recv(fd, buf, sizeof(buf), MSG_DONTWAIT);
    if (got < 0) return false;
    WirePacket wp;
    if (parse_wire(std::span<const std::uint8_t>(buf, std::size_t(got)), wp) == WireError::ok &&
        wp.completion)
      return true;
  }
}

}  // namespace

SenderReport send_bytes(const SessionConfig& cfg, std::span<const std::uint8_t> data) {
  cfg.params.validate();
  const Field& f = cfg.params.coding_field();
  auto [layout, gens] = segment_file(data, cfg.block_bytes, cfg.params.g, f);
  SchemeParams params = cfg.params;
  params.n = layout.n;

  RoundRobinEncoder enc(gens, params, cfg.coding_seed);
  Rng shim(mix_seed(cfg.drop_seed, 0x64726f70));

  int fd = open_udp();
  sockaddr_in dest = resolve(cfg.dest_host, cfg.dest_port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&dest), sizeof(dest)) < 0) {
    int e = errno;
    ::close(fd);
    errno = e;
    raise_errno("connect");
  }

  const double rate = cfg.nominal_rate_Bps;
  const double cap_s = cfg.wall_cap_s > 0 ? cfg.wall_cap_s : derive_wall_cap(cfg, layout.n);
  const double burst = std::max(4.0 * (double(cfg.block_bytes) + 16.0), rate * 0.01);

  SenderReport rep;
  Clock::time_point start = Clock::now();
  Clock::time_point last_fill = start;
  double tokens = burst;

  while (!rep.completion_seen) {
    CodedPacket pkt = enc.next();
    std::vector<std::uint8_t> dgram = encode_wire(pkt, params.scheme);
    ++rep.packets_sent;

    // wait for bucket room; the waits double as completion listening
    for (;;) {
      Clock::time_point now = Clock::now();
      tokens = std::min(burst, tokens + rate * std::chrono::duration<double>(now - last_fill).count());
      last_fill = now;
      if (tokens >= double(dgram.size())) break;
      if (seconds_since(start) > cap_s) {
        ::close(fd);
        raise(Errc::no_completion, "no completion indicator within " + std::to_string(cap_s) + " s");
      }
      int wait_ms = int((double(dgram.size()) - tokens) / rate * 1000.0) + 1;
      pollfd pfd{fd, POLLIN, 0};
      if (::poll(&pfd, 1, std::min(wait_ms, 100)) > 0 && drain_for_completion(fd)) {
        rep.completion_seen = true;
        break;
      }
    }
    if (rep.completion_seen) {
      --rep.packets_sent;  // packet never went out
      break;
    }

    tokens -= double(dgram.size());
    rep.bytes_sent += dgram.size();
    bool dropped = cfg.drop_rate > 0 && shim.bernoulli(cfg.drop_rate);
    if (dropped) {
      ++rep.shim_dropped;
    } else {
      if (::send(fd, dgram.data(), dgram.size(), 0) < 0 && errno != ECONNREFUSED) {
        int e = errno;
        ::close(fd);
        errno = e;
        raise_errno("send");
      }
      ++rep.datagrams_put;
    }

    if (drain_for_completion(fd)) rep.completion_seen = true;
    if (seconds_since(start) > cap_s) {
      ::close(fd);
      raise(Errc::no_completion, "no completion indicator within " + std::to_string(cap_s) + " s");
    }
  }

  rep.elapsed_s = seconds_since(start);
  ::close(fd);
  return rep;
}

SenderReport send_file(const SessionConfig& cfg) {
  std::ifstream in(cfg.file_path, std::ios::binary);
  if (!in) raise(Errc::config_error, "cannot read " + cfg.file_path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return send_bytes(cfg, data);
}

Receiver::Receiver(const SessionConfig& cfg) : cfg_(cfg) {
  cfg_.params.validate();
  std::uint64_t file_bytes = cfg_.file_bytes;
  layout_ = layout_for(file_bytes, cfg_.block_bytes, cfg_.params.g);
  cfg_.params.n = layout_.n;

  fd_ = open_udp();
  sockaddr_in addr = resolve(cfg_.bind_host, cfg_.bind_port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    int e = errno;
    ::close(fd_);
    fd_ = -1;
    errno = e;
    raise_errno("bind");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

Receiver::~Receiver() {
  if (fd_ >= 0) ::close(fd_);
}

ReceiverReport Receiver::run() {
  ReceiverReport rep;
  FileDecoder dec(layout_, cfg_.params);
  const Field& f = cfg_.params.coding_field();
  std::size_t payload_syms = layout_.symbols_per_block(f);

  Clock::time_point start = Clock::now();
  Clock::time_point first_packet{};
  bool saw_packet = false;
  sockaddr_in peer{};
  socklen_t peer_len = 0;

  while (!dec.complete()) {
    if (seconds_since(start) > cfg_.recv_deadline_s)
      raise(Errc::timed_out, "receive deadline passed before the file decoded");
    pollfd pfd{fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;

    std::uint8_t buf[4096];
    sockaddr_in from{};
    socklen_t from_len = sizeof(from);
    ssize_t got = ::recvfrom(fd_, buf, sizeof(buf), 0, reinterpret_cast<sockaddr*>(&from),
                             &from_len);
    if (got < 0) continue;
    ++rep.datagrams_received;

    WirePacket wp;
    if (parse_wire(std::span<const std::uint8_t>(buf, std::size_t(got)), wp) != WireError::ok) {
      ++rep.rejected;
      continue;
    }
    if (wp.completion) continue;  // only receivers emit these; ignore echoes

    peer = from;
    peer_len = from_len;
    try {
      CodedPacket pkt = to_coded_packet(wp, layout_.g, f, payload_syms);
      if (!saw_packet) {
        saw_packet = true;
        first_packet = Clock::now();
      }
      ++rep.packets_received;
      dec.ingest(pkt);
    } catch (const Error&) {
      ++rep.rejected;  // wrong lengths or generation index for this session
    }
  }

  rep.elapsed_s = saw_packet ? std::chrono::duration<double>(Clock::now() - first_packet).count()
                             : 0.0;
  rep.superfluous = dec.superfluous();

  // completion rides the same lossy path; send it three times
  std::vector<std::uint8_t> done = encode_completion(cfg_.params.scheme);
  if (peer_len != 0)
    for (int i = 0; i < 3; ++i)
      ::sendto(fd_, done.data(), done.size(), 0, reinterpret_cast<sockaddr*>(&peer), peer_len);

  bytes_ = dec.file_bytes();
  rep.file_ok = true;
  if (!cfg_.file_path.empty()) {
    std::ofstream out(cfg_.file_path, std::ios::binary);
    if (!out) raise(Errc::config_error, "cannot write " + cfg_.file_path);
    out.write(reinterpret_cast<const char*>(bytes_.data()), std::streamsize(bytes_.size()));
    rep.bytes_written = bytes_.size();
  } else {
    rep.bytes_written = bytes_.size();
  }
  return rep;
}

ReceiverReport recv_file(const SessionConfig& cfg) {
  Receiver rx(cfg);
  return rx.run();
}

void print_report(std::ostream& os, const SenderReport& r) {
  os << "role=sender packets_sent=" << r.packets_sent << " datagrams_put=" << r.datagrams_put
     << " shim_dropped=" << r.shim_dropped << " bytes_sent=" << r.bytes_sent
     << " elapsed_s=" << r.elapsed_s << " completion_seen=" << (r.completion_seen ? 1 : 0)
     << "\n";
}

void print_report(std::ostream& os, const ReceiverReport& r) {
  os << "role=receiver datagrams_received=" << r.datagrams_received
     << " packets_received=" << r.packets_received << " rejected=" << r.rejected
     << " superfluous=" << r.superfluous << " bytes_written=" << r.bytes_written
     << " elapsed_s=" << r.elapsed_s << " file_ok=" << (r.file_ok ? 1 : 0) << "\n";
}

}  // namespace genstream
