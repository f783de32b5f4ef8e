#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "genstream/simulator.hpp"
#include "genstream/transport.hpp"

using namespace genstream;

namespace {

SessionConfig session(SchemeKind k, std::uint32_t g, std::uint32_t blocks,
                      std::uint32_t block_bytes) {
  SessionConfig cfg;
  cfg.params.scheme = k;
  cfg.params.g = g;
  cfg.block_bytes = block_bytes;
  cfg.file_bytes = std::uint64_t(blocks) * block_bytes;
  cfg.nominal_rate_Bps = 8e6;
  cfg.recv_deadline_s = 30.0;
  return cfg;
}

struct SessionOutcome {
  SenderReport sender;
  ReceiverReport receiver;
  std::vector<std::uint8_t> bytes;
};

SessionOutcome run_session(SessionConfig cfg, const std::vector<std::uint8_t>& data,
                           bool inject_garbage = false) {
  Receiver rx(cfg);
  cfg.dest_port = rx.port();
  SessionOutcome out;

  std::thread rx_thread([&] { out.receiver = rx.run(); });
  if (inject_garbage) {
    int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in to{};
    to.sin_family = AF_INET;
    to.sin_port = htons(rx.port());
    inet_pton(AF_INET, "127.0.0.1", &to.sin_addr);
    std::uint8_t junk[32] = {0xde, 0xad, 0xbe, 0xef};
    for (int i = 0; i < 50; ++i)
      ::sendto(fd, junk, sizeof(junk), 0, reinterpret_cast<sockaddr*>(&to), sizeof(to));
    ::close(fd);
  }
  out.sender = send_bytes(cfg, data);
  rx_thread.join();
  out.bytes = rx.bytes();
  return out;
}

}  // namespace

TEST_CASE("lossless loopback session reproduces the file") {
  auto cfg = session(SchemeKind::rls, 4, 32, 64);
  auto data = make_test_payload(cfg.file_bytes, 11);
  auto out = run_session(cfg, data);

  CHECK(out.sender.completion_seen);
  CHECK(out.receiver.file_ok);
  CHECK(out.bytes == data);
  CHECK(out.sender.packets_sent >= 32);
  CHECK(out.receiver.packets_received <= out.sender.packets_sent);
  CHECK(out.receiver.rejected == 0);
}

TEST_CASE("drop shim session still completes bit-exactly") {
  auto cfg = session(SchemeKind::rls, 8, 64, 128);
  cfg.drop_rate = 0.2;
  cfg.drop_seed = 99;
  auto data = make_test_payload(cfg.file_bytes, 12);
  auto out = run_session(cfg, data);

  CHECK(out.sender.shim_dropped > 0);
  CHECK(out.bytes == data);
  CHECK(out.sender.datagrams_put == out.sender.packets_sent - out.sender.shim_dropped);
  CHECK(out.receiver.packets_received <= out.sender.datagrams_put);
}

TEST_CASE("malformed datagrams are counted and ignored") {
  auto cfg = session(SchemeKind::rs, 4, 32, 64);
  auto data = make_test_payload(cfg.file_bytes, 13);
  auto out = run_session(cfg, data, true);

  CHECK(out.receiver.rejected > 0);
  CHECK(out.bytes == data);
  CHECK(out.receiver.file_ok);
}

TEST_CASE("every scheme survives a lossy loopback session") {
  for (SchemeKind k :
       {SchemeKind::rl, SchemeKind::rls, SchemeKind::rs, SchemeKind::pc, SchemeKind::rep}) {
    auto cfg = session(k, 4, 16, 32);
    cfg.drop_rate = 0.1;
    cfg.drop_seed = 5 + std::uint64_t(k);
    auto data = make_test_payload(cfg.file_bytes, 14 + std::uint64_t(k));
    auto out = run_session(cfg, data);
    INFO("scheme ", to_string(k));
    CHECK(out.bytes == data);
  }
}

TEST_CASE("sender gives up without a completion signal") {
  // nothing is listening on the destination port
  SessionConfig cfg = session(SchemeKind::rls, 4, 16, 32);
  cfg.dest_port = 9;  // discard port, no listener
  cfg.wall_cap_s = 0.4;
  auto data = make_test_payload(cfg.file_bytes, 15);
  CHECK_THROWS_AS((void)send_bytes(cfg, data), Error);
  try {
    (void)send_bytes(cfg, data);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_completion);
  }
}

TEST_CASE("long-run pacing stays within 5% of the nominal rate") {
  auto cfg = session(SchemeKind::rls, 8, 1024, 1024);
  cfg.nominal_rate_Bps = 2e6;
  auto data = make_test_payload(cfg.file_bytes, 16);
  auto out = run_session(cfg, data);

  REQUIRE(out.sender.completion_seen);
  double measured = double(out.sender.bytes_sent) / out.sender.elapsed_s;
  CHECK(std::abs(measured - cfg.nominal_rate_Bps) / cfg.nominal_rate_Bps < 0.05);
  CHECK(out.bytes == data);
}

TEST_CASE("receiver run deadline") {
  SessionConfig cfg = session(SchemeKind::rls, 4, 16, 32);
  cfg.recv_deadline_s = 0.3;
  Receiver rx(cfg);
  CHECK_THROWS_AS((void)rx.run(), Error);
}
