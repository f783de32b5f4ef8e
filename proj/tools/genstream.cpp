#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genstream/report.hpp"
#include "genstream/transport.hpp"

using namespace genstream;

namespace {

// Merge a key=value config file under flag precedence: a key contributes
// tokens only when the same option is absent from the command line.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) raise(Errc::config_error, "cannot read config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) continue;

    std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;

    args.push_back(flag);
    std::istringstream vs(value);
    for (std::string tok; vs >> tok;) args.push_back(tok);
  }
  return args;
}

std::vector<SchemeKind> parse_schemes(const std::vector<std::string>& names) {
  std::vector<SchemeKind> out;
  for (const auto& s : names) {
    auto k = scheme_from_string(s);
    if (!k) raise(Errc::config_error, "unknown scheme '" + s + "'");
    out.push_back(*k);
  }
  return out;
}

void emit_rows(const RunSpec& spec, std::span<const CsvRow> rows) {
  if (spec.out_path.empty()) {
    write_csv(std::cout, rows);
    return;
  }
  std::ofstream out(spec.out_path);
  if (!out) raise(Errc::config_error, "cannot write " + spec.out_path);
  write_csv(out, rows);
  std::cerr << "wrote " << rows.size() << " rows to " << spec.out_path << "\n";
}

struct GridCli {
  std::vector<std::string> schemes;
  RunSpec spec;
  double measured_epsilon = -1.0;
  std::string config_path;

  void attach(CLI::App* cmd, bool default_full_sweep) {
    spec.gen_sizes.clear();
    cmd->add_option("--scheme", schemes, "scheme (rl|rls|rs|pc|rep), repeatable")
        ->expected(-1);
    cmd->add_option("--gen-size", spec.gen_sizes, "generation size, repeatable")->expected(-1);
    cmd->add_option("--epsilon", spec.epsilon, "packet loss rate")->check(CLI::Range(0.0, 0.999));
    cmd->add_option("--field-bits", spec.field_bits, "symbol width for rl/rls (1,2,4,8)");
    cmd->add_option("--blocks", spec.blocks, "file block count");
    cmd->add_option("--block-bytes", spec.block_bytes, "payload bytes per block");
    cmd->add_option("--rs-k", spec.rs_K, "Reed-Solomon codeword length");
    cmd->add_option("--trials", spec.trials, "Monte Carlo trials per grid point");
    cmd->add_option("--seed", spec.seed, "base random seed");
    cmd->add_option("--rate-bps", spec.rate_Bps, "nominal byte rate for derived measures");
    cmd->add_option("--rate-kbs", rate_kbs, "rate in KB/s (1000-based; see --kib)");
    cmd->add_flag("--kib", kib, "treat KB as 1024 bytes");
    cmd->add_option("--rx-power-w", spec.rx_power_W, "receive power for the energy model");
    cmd->add_option("--out", spec.out_path, "CSV output path (default stdout)");
    cmd->add_flag("--paired", spec.paired, "reuse channel randomness across schemes");
    cmd->add_option("--measured-epsilon", measured_epsilon,
                    "loss rate fed to the prediction side only");
    cmd->add_option("--config", config_path, "key=value file, flags take precedence");
    (void)default_full_sweep;
  }

  RunSpec finish(bool default_full_sweep) {
    if (schemes.empty())
      schemes = {"rl", "rls", "rs", "pc"};
    spec.schemes = parse_schemes(schemes);
    if (spec.gen_sizes.empty()) {
      for (std::uint32_t g = 1; g <= (default_full_sweep ? 512u : 64u); g *= 2)
        if (g <= spec.blocks) spec.gen_sizes.push_back(g);
    }
    if (measured_epsilon >= 0.0) spec.measured_epsilon = measured_epsilon;
    if (rate_kbs > 0) spec.rate_Bps = rate_kbs * (kib ? 1024.0 : 1000.0);
    return spec;
  }

  double rate_kbs = 0;
  bool kib = false;
};

struct SessionCli {
  SessionConfig cfg;
  std::string config_path;
  std::string scheme = "rls";
  std::uint32_t gen_size = 16;
  std::uint32_t blocks = 0;  // receiver shortcut for --file-bytes
  std::string csv_path;
  double rx_power_W = 1.0;

  void attach_common(CLI::App* cmd) {
    cmd->add_option("--scheme", scheme, "scheme (rl|rls|rs|pc|rep)");
    cmd->add_option("--gen-size", gen_size, "generation size");
    cmd->add_option("--field-bits", cfg.params.field_bits, "symbol width for rl/rls");
    cmd->add_option("--rs-k", cfg.params.rs_K, "Reed-Solomon codeword length");
    cmd->add_option("--block-bytes", cfg.block_bytes, "payload bytes per block");
    cmd->add_option("--rate-bps", cfg.nominal_rate_Bps, "pacing rate, datagram bytes/s");
    cmd->add_option("--rate-kbs", rate_kbs, "pacing rate in KB/s (1000-based; see --kib)");
    cmd->add_flag("--kib", kib, "treat KB as 1024 bytes");
    cmd->add_option("--csv", csv_path, "append a transport CSV row to this path");
    cmd->add_option("--rx-power-w", rx_power_W, "receive power for the energy model");
    cmd->add_option("--config", config_path, "key=value file, flags take precedence");
  }

  void finish() {
    auto k = scheme_from_string(scheme);
    if (!k) raise(Errc::config_error, "unknown scheme '" + scheme + "'");
    cfg.params.scheme = *k;
    cfg.params.g = gen_size;
    if (cfg.file_bytes == 0 && blocks > 0)
      cfg.file_bytes = std::uint64_t(blocks) * cfg.block_bytes;
    if (rate_kbs > 0) cfg.nominal_rate_Bps = rate_kbs * (kib ? 1024.0 : 1000.0);
  }

  double rate_kbs = 0;
  bool kib = false;

  void append_csv_row(double packets, double elapsed_s, std::uint64_t file_bytes,
                      const char* who) {
    if (csv_path.empty()) return;
    CsvRow row;
    row.scheme = to_string(cfg.params.scheme);
    row.g = cfg.params.g;
    row.n = cfg.params.n;
    row.q = cfg.params.q();
    row.K = cfg.params.is_mds() ? cfg.params.mds_K() : 0;
    row.epsilon = cfg.drop_rate;
    row.source = "transport";
    std::uint64_t N = (file_bytes + cfg.block_bytes - 1) / cfg.block_bytes;
    row.mean_T = packets;
    row.norm_T = N ? packets / double(N) : 0.0;
    row.delivery_time_s = elapsed_s;
    row.net_rate_Bps = elapsed_s > 0 ? double(file_bytes) / elapsed_s : 0.0;
    row.energy_J = rx_power_W * elapsed_s;
    row.trials = 1;
    row.seed = cfg.coding_seed;
    std::ifstream probe(csv_path);
    bool fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    probe.close();
    std::ofstream out(csv_path, std::ios::app);
    if (!out) raise(Errc::config_error, "cannot write " + csv_path);
    if (fresh) out << csv_header() << '\n';
    out << to_csv(row) << '\n';
    std::cerr << "note: " << who << " row appended to " << csv_path
              << " (energy uses the parametric rx-power model)\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded streaming toolkit: delivery analysis, simulation and UDP transfer"};
  app.require_subcommand(1);

  GridCli predict_cli, simulate_cli, compare_cli;
  auto* predict = app.add_subcommand("predict", "analytic delivery counts over a grid");
  predict_cli.attach(predict, true);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo delivery counts over a grid");
  simulate_cli.attach(simulate, false);
  auto* compare = app.add_subcommand("compare", "prediction vs simulation with deviation flags");
  compare_cli.attach(compare, false);

  SessionCli send_cli, recv_cli;
  auto* send = app.add_subcommand("send", "stream a file over UDP");
  send_cli.attach_common(send);
  send->add_option("--dest-host", send_cli.cfg.dest_host, "receiver address");
  send->add_option("--dest-port", send_cli.cfg.dest_port, "receiver port")->required();
  send->add_option("--file", send_cli.cfg.file_path, "input file")->required();
  send->add_option("--drop-rate", send_cli.cfg.drop_rate, "sender-side loss shim probability");
  send->add_option("--drop-seed", send_cli.cfg.drop_seed, "loss shim seed");
  send->add_option("--coding-seed", send_cli.cfg.coding_seed, "coding coefficient seed");
  send->add_option("--wall-cap-s", send_cli.cfg.wall_cap_s, "give-up deadline in seconds");

  auto* recv = app.add_subcommand("recv", "receive a streamed file over UDP");
  recv->add_option("--bind-host", recv_cli.cfg.bind_host, "bind address");
  recv->add_option("--port", recv_cli.cfg.bind_port, "bind port")->required();
  recv->add_option("--out", recv_cli.cfg.file_path, "output file")->required();
  recv->add_option("--file-bytes", recv_cli.cfg.file_bytes, "expected transfer size in bytes");
  recv->add_option("--blocks", recv_cli.blocks, "expected block count (sets --file-bytes)");
  recv->add_option("--recv-deadline-s", recv_cli.cfg.recv_deadline_s, "overall deadline");
  recv_cli.attach_common(recv);

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*predict) {
      RunSpec spec = predict_cli.finish(true);
      emit_rows(spec, cmd_predict(spec, std::cerr));
    } else if (*simulate) {
      RunSpec spec = simulate_cli.finish(false);
      emit_rows(spec, cmd_simulate(spec, std::cerr));
    } else if (*compare) {
      RunSpec spec = compare_cli.finish(false);
      CompareResult result = cmd_compare(spec, std::cerr);
      emit_rows(spec, result.rows);
      std::cerr << result.points.size() << " grid points, " << result.flagged_count()
                << " flagged\n";
      if (result.flagged_count() > 0) return 3;
    } else if (*send) {
      send_cli.finish();
      SenderReport rep = send_file(send_cli.cfg);
      print_report(std::cout, rep);
      std::ifstream in(send_cli.cfg.file_path, std::ios::binary | std::ios::ate);
      send_cli.append_csv_row(double(rep.packets_sent), rep.elapsed_s,
                              std::uint64_t(in.tellg()), "sender");
    } else if (*recv) {
      recv_cli.finish();
      ReceiverReport rep = recv_file(recv_cli.cfg);
      print_report(std::cout, rep);
      recv_cli.append_csv_row(double(rep.packets_received), rep.elapsed_s, rep.bytes_written,
                              "receiver");
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
