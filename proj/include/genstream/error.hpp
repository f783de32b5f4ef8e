#pragma once

#include <stdexcept>
#include <string>

namespace genstream {

enum class Errc {
  zero_inverse,
  length_mismatch,
  bad_block_size,
  spec_mismatch,
  generation_mismatch,
  not_fully_decoded,
  bad_spec,
  no_convergence,
  trial_timeout,
  oversize,
  socket_error,
  no_completion,
  timed_out,
  config_error,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace genstream
